//! Exact scalar and matrix arithmetic.
//!
//! Everything downstream is computed over [`Rational`] (arbitrary precision)
//! or over the quadratic field ℚ(√2) via [`QuadExt`]. There is no floating
//! point anywhere in the crate.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Arbitrary-precision rational number, always kept in lowest terms.
pub type Rational = BigRational;

/// Shorthand for an integer-valued [`Rational`].
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `num / den`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

fn parse_rational(s: &str) -> Result<Rational, Error> {
    let s = s.trim();
    let bad = || Error::Parse {
        line: 0,
        message: format!("invalid rational `{s}`"),
    };
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num.trim().parse().map_err(|_| bad())?;
    let den: BigInt = den.trim().parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Dense matrix over ℚ stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixQ {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl MatrixQ {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatrixQ {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Builds a matrix from rows; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, Error> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch {
                expected: ncols,
                found: rows.iter().map(Vec::len).find(|&l| l != ncols).unwrap_or(0),
            });
        }
        Ok(MatrixQ {
            rows: nrows,
            cols: ncols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Integer convenience constructor, mostly for tests.
    pub fn from_i64(rows: &[&[i64]]) -> Result<Self, Error> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(nrows: usize, columns: &[Vec<Rational>]) -> Result<Self, Error> {
        let mut m = Self::zeros(nrows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != nrows {
                return Err(Error::DimensionMismatch {
                    expected: nrows,
                    found: col.len(),
                });
            }
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, rhs: &MatrixQ) -> Result<MatrixQ, Error> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + a * b;
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>, Error> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }
}

/// Reduced row echelon form computed in place; returns the pivot columns.
///
/// Pivots are chosen as the first nonzero entry at or below the current row,
/// so results are deterministic.
fn rref(m: &mut MatrixQ) -> Vec<usize> {
    let cols = m.cols;
    rref_limited(m, cols)
}

/// Like [`rref`] but only columns below `limit` may hold pivots.
fn rref_limited(m: &mut MatrixQ, limit: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..limit {
        if r == m.rows {
            break;
        }
        let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..m.cols {
                m.entries.swap(p * m.cols + j, r * m.cols + j);
            }
        }
        let inv = m.get(r, c).recip();
        for j in c..m.cols {
            let v = m.get(r, j) * &inv;
            m.set(r, j, v);
        }
        for i in 0..m.rows {
            if i == r || m.get(i, c).is_zero() {
                continue;
            }
            let factor = m.get(i, c).clone();
            for j in c..m.cols {
                let pivot_entry = m.get(r, j);
                if pivot_entry.is_zero() {
                    continue;
                }
                let v = m.get(i, j) - &factor * pivot_entry;
                m.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank over ℚ by exact elimination.
pub fn mat_rank(m: &MatrixQ) -> usize {
    let mut work = m.clone();
    rref(&mut work).len()
}

/// Columns that are independent of all columns to their left.
pub fn pivot_columns(m: &MatrixQ) -> Vec<usize> {
    let mut work = m.clone();
    rref(&mut work)
}

/// Sum of the diagonal; rejects non-square input.
pub fn mat_trace(m: &MatrixQ) -> Result<Rational, Error> {
    if m.rows != m.cols {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    Ok((0..m.rows).fold(Rational::zero(), |acc, i| acc + m.get(i, i)))
}

/// Basis of the null space `{x : m·x = 0}`, one vector per free column.
pub fn null_space(m: &MatrixQ) -> Vec<Vec<Rational>> {
    let mut work = m.clone();
    let pivots = rref(&mut work);
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); m.cols];
            v[f] = Rational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -work.get(r, f).clone();
            }
            v
        })
        .collect()
}

/// Outcome of [`solve_in_span`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpanSolution {
    Coefficients(Vec<Rational>),
    NotInSpan,
}

/// Finds `c` with `columns · c = v`, or reports that `v` is outside the
/// column span. Free coefficients are set to zero.
pub fn solve_in_span(columns: &MatrixQ, v: &[Rational]) -> Result<SpanSolution, Error> {
    if v.len() != columns.rows {
        return Err(Error::DimensionMismatch {
            expected: columns.rows,
            found: v.len(),
        });
    }
    let n = columns.cols;
    let mut aug = MatrixQ::zeros(columns.rows, n + 1);
    for (i, vi) in v.iter().enumerate() {
        for j in 0..n {
            aug.set(i, j, columns.get(i, j).clone());
        }
        aug.set(i, n, vi.clone());
    }
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&n) {
        return Ok(SpanSolution::NotInSpan);
    }
    let mut c = vec![Rational::zero(); n];
    for (r, &pc) in pivots.iter().enumerate() {
        c[pc] = aug.get(r, n).clone();
    }
    Ok(SpanSolution::Coefficients(c))
}

/// [`solve_in_span`] for several right-hand sides with one elimination.
pub fn solve_many(columns: &MatrixQ, rhs: &[Vec<Rational>]) -> Result<Vec<SpanSolution>, Error> {
    let n = columns.cols;
    let mut aug = MatrixQ::zeros(columns.rows, n + rhs.len());
    for i in 0..columns.rows {
        for j in 0..n {
            aug.set(i, j, columns.get(i, j).clone());
        }
    }
    for (k, v) in rhs.iter().enumerate() {
        if v.len() != columns.rows {
            return Err(Error::DimensionMismatch {
                expected: columns.rows,
                found: v.len(),
            });
        }
        for (i, x) in v.iter().enumerate() {
            aug.set(i, n + k, x.clone());
        }
    }
    // Pivot in the coefficient block only, then read each right-hand side.
    let pivots = rref_limited(&mut aug, n);
    let rank = pivots.len();
    Ok((0..rhs.len())
        .map(|k| {
            if (rank..columns.rows).any(|r| !aug.get(r, n + k).is_zero()) {
                return SpanSolution::NotInSpan;
            }
            let mut c = vec![Rational::zero(); n];
            for (r, &pc) in pivots.iter().enumerate() {
                c[pc] = aug.get(r, n + k).clone();
            }
            SpanSolution::Coefficients(c)
        })
        .collect())
}

/// An exact element `a + b·√2` of ℚ(√2).
///
/// The representation is unique, so structural equality is numeric equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadExt {
    pub a: Rational,
    pub b: Rational,
}

impl QuadExt {
    pub fn new(a: Rational, b: Rational) -> Self {
        QuadExt { a, b }
    }

    pub fn rational(a: Rational) -> Self {
        QuadExt { a, b: Rational::zero() }
    }

    pub fn zero() -> Self {
        Self::rational(Rational::zero())
    }

    /// `√2` itself.
    pub fn sqrt2() -> Self {
        QuadExt::new(Rational::zero(), Rational::one())
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        QuadExt::new(rat(a), rat(b))
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn abs(&self) -> QuadExt {
        if self.signum() == Ordering::Less {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Exact sign of `a + b√2`.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&Rational::zero());
        let sb = self.b.cmp(&Rational::zero());
        match (sa, sb) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (x, y) if x == y => x,
            // Signs disagree: |a| vs |b|√2 decided by a² vs 2b².
            (sa, _) => {
                let a2 = &self.a * &self.a;
                let b2 = &self.b * &self.b * rat(2);
                match a2.cmp(&b2) {
                    Ordering::Greater => sa,
                    Ordering::Less => sa.reverse(),
                    // a² = 2b² with b ≠ 0 would make √2 rational.
                    Ordering::Equal => unreachable!("√2 is irrational"),
                }
            }
        }
    }

    pub fn scale(&self, k: &Rational) -> QuadExt {
        QuadExt::new(&self.a * k, &self.b * k)
    }
}

/// Exact three-way comparison in ℚ(√2).
pub fn qext_compare(x: &QuadExt, y: &QuadExt) -> Ordering {
    (x.clone() - y.clone()).signum()
}

impl PartialOrd for QuadExt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadExt {
    fn cmp(&self, other: &Self) -> Ordering {
        qext_compare(self, other)
    }
}

impl Add for QuadExt {
    type Output = QuadExt;
    fn add(self, rhs: QuadExt) -> QuadExt {
        QuadExt::new(self.a + rhs.a, self.b + rhs.b)
    }
}

impl Sub for QuadExt {
    type Output = QuadExt;
    fn sub(self, rhs: QuadExt) -> QuadExt {
        QuadExt::new(self.a - rhs.a, self.b - rhs.b)
    }
}

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt::new(-self.a, -self.b)
    }
}

impl Mul for QuadExt {
    type Output = QuadExt;
    fn mul(self, rhs: QuadExt) -> QuadExt {
        let two = rat(2);
        QuadExt::new(
            &self.a * &rhs.a + &self.b * &rhs.b * two,
            &self.a * &rhs.b + &self.b * &rhs.a,
        )
    }
}

impl std::iter::Sum for QuadExt {
    fn sum<I: Iterator<Item = QuadExt>>(iter: I) -> QuadExt {
        iter.fold(QuadExt::zero(), |acc, x| acc + x)
    }
}

fn pow2(n: u32) -> BigInt {
    BigInt::one() << n
}

/// `⌊2ⁿ·x⌋`, found by binary search over integers using exact comparison.
pub fn qext_floor_scaled(x: &QuadExt, n: u32) -> BigInt {
    let scaled = x.scale(&Rational::from_integer(pow2(n)));
    // |a + b√2| < |a| + 2|b| + 1 bounds the search window.
    let bound = scaled.a.abs().ceil().to_integer() + (scaled.b.abs() * rat(2)).ceil().to_integer() + BigInt::one();
    let mut lo = -bound.clone(); // invariant: lo ≤ scaled
    let mut hi = bound; // invariant: scaled < hi
    let as_q = |k: &BigInt| QuadExt::rational(Rational::from_integer(k.clone()));
    debug_assert!(qext_compare(&as_q(&lo), &scaled) != Ordering::Greater);
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi).div_floor(&BigInt::from(2));
        if qext_compare(&as_q(&mid), &scaled) == Ordering::Greater {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    lo
}

/// `⌈2ⁿ·x⌉`.
pub fn qext_ceil_scaled(x: &QuadExt, n: u32) -> BigInt {
    -qext_floor_scaled(&-x.clone(), n)
}

impl fmt::Display for QuadExt {
    /// `a` when rational, otherwise `a+b√2` / `a-b√2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = fmt_rational(&self.a);
        if self.b.is_zero() {
            return f.write_str(&a);
        }
        if self.b.is_negative() {
            write!(f, "{a}-{}√2", fmt_rational(&-self.b.clone()))
        } else {
            write!(f, "{a}+{}√2", fmt_rational(&self.b))
        }
    }
}

impl FromStr for QuadExt {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let Some(body) = s.strip_suffix("√2") else {
            return Ok(QuadExt::rational(parse_rational(s)?));
        };
        // The split sign is the last +/- that is not leading and not part of
        // a rational's own sign (rationals are written without inner signs).
        let split = body
            .char_indices()
            .skip(1)
            .filter(|(_, c)| *c == '+' || *c == '-')
            .map(|(i, _)| i)
            .last()
            .ok_or_else(|| Error::Parse {
                line: 0,
                message: format!("invalid quadratic number `{s}`"),
            })?;
        let a = parse_rational(&body[..split])?;
        let b = parse_rational(&body[split + 1..])?;
        let b = if body[split..].starts_with('-') { -b } else { b };
        Ok(QuadExt::new(a, b))
    }
}

/// Formats a rational the way reports and files expect (`p/q`, `q` omitted
/// when 1).
pub fn format_rational(r: &Rational) -> String {
    fmt_rational(r)
}
