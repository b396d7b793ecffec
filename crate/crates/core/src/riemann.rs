//! Real-valued functions: index-strictness, real integrability and the
//! dyadic Riemann sums with respect to the combinatorial index.
//!
//! Functions are constant on open simplices with values in ℚ(√2), so every
//! level or interval preimage is a simplex-set and the whole construction is
//! exact.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::{qext_ceil_scaled, qext_floor_scaled, QuadExt, Rational};
use crate::complex::{closure_set, Complex, Simplex, SimplexSet};
use crate::error::{Error, Result};
use crate::index::{admissible, Verdict};
use crate::integral::{integrate_step, StepFunction};
use crate::maps::{conjugate, fixed_clusters, fixed_simplices, FixedCluster, SimplicialMap};

/// Default number of dyadic levels reported (`n = 0..=16`).
pub const DEFAULT_LEVELS: u32 = 16;

/// `h: |X| → ℝ`, constant on each open simplex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueFunction {
    ambient: Arc<Complex>,
    values: Vec<QuadExt>,
}

impl ValueFunction {
    /// One value per simplex in canonical order.
    pub fn new(ambient: &Arc<Complex>, values: Vec<QuadExt>) -> Result<Self> {
        if values.len() != ambient.len() {
            return Err(Error::DimensionMismatch {
                expected: ambient.len(),
                found: values.len(),
            });
        }
        Ok(ValueFunction {
            ambient: Arc::clone(ambient),
            values,
        })
    }

    pub fn constant(ambient: &Arc<Complex>, v: QuadExt) -> Self {
        ValueFunction {
            ambient: Arc::clone(ambient),
            values: vec![v; ambient.len()],
        }
    }

    pub fn from_fn(ambient: &Arc<Complex>, f: impl Fn(&Simplex) -> QuadExt) -> Self {
        ValueFunction {
            ambient: Arc::clone(ambient),
            values: ambient.simplices().iter().map(f).collect(),
        }
    }

    pub fn ambient(&self) -> &Arc<Complex> {
        &self.ambient
    }

    pub fn value(&self, i: usize) -> &QuadExt {
        &self.values[i]
    }

    pub fn values(&self) -> &[QuadExt] {
        &self.values
    }

    pub fn set(&mut self, i: usize, v: QuadExt) {
        self.values[i] = v;
    }

    /// Bounded on a finite complex; returns `(min, max)`, or `None` when empty.
    pub fn bounds(&self) -> Option<(QuadExt, QuadExt)> {
        let min = self.values.iter().min()?.clone();
        let max = self.values.iter().max()?.clone();
        Some((min, max))
    }

    /// `h ∘ iso⁻¹` on the target of a simplicial isomorphism.
    pub fn transport(&self, iso: &SimplicialMap) -> Result<ValueFunction> {
        iso.check_isomorphism()?;
        let mut values = vec![QuadExt::zero(); iso.target().len()];
        for (i, v) in self.values.iter().enumerate() {
            values[iso.image_index(i)] = v.clone();
        }
        ValueFunction::new(iso.target(), values)
    }

    fn preimage(&self, keep: impl Fn(&QuadExt) -> bool) -> SimplexSet {
        SimplexSet::from_indices(
            &self.ambient,
            self.values.iter().enumerate().filter(|(_, v)| keep(v)).map(|(i, _)| i),
        )
    }

    /// `⌊2ⁿh⌋` (or `⌈2ⁿh⌉`) as a step function, one term per nonzero level.
    pub fn dyadic_step(&self, n: u32, upper: bool) -> StepFunction {
        let mut levels: BTreeMap<BigInt, Vec<usize>> = BTreeMap::new();
        for (i, v) in self.values.iter().enumerate() {
            let k = if upper {
                qext_ceil_scaled(v, n)
            } else {
                qext_floor_scaled(v, n)
            };
            if !k.is_zero() {
                levels.entry(k).or_default().push(i);
            }
        }
        let terms = levels
            .into_iter()
            .map(|(k, idx)| (k, SimplexSet::from_indices(&self.ambient, idx)))
            .collect();
        StepFunction::new(&self.ambient, terms).expect("same ambient")
    }
}

/// Sign pattern of the fixed cluster indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndexStrictness {
    Nonnegative,
    Nonpositive,
    /// Every cluster index is zero (including no clusters at all).
    Both,
    Neither,
}

impl fmt::Display for IndexStrictness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IndexStrictness::Nonnegative => "nonnegative",
            IndexStrictness::Nonpositive => "nonpositive",
            IndexStrictness::Both => "both",
            IndexStrictness::Neither => "neither",
        })
    }
}

/// Any admissible open set has index equal to the sum over the clusters it
/// contains, so the cluster signs decide strictness.
pub fn is_index_strict(f: &SimplicialMap) -> IndexStrictness {
    let clusters = fixed_clusters(f);
    let pos = clusters.iter().any(|c| c.localized_index > 0);
    let neg = clusters.iter().any(|c| c.localized_index < 0);
    match (pos, neg) {
        (false, false) => IndexStrictness::Both,
        (true, false) => IndexStrictness::Nonnegative,
        (false, true) => IndexStrictness::Nonpositive,
        (true, true) => IndexStrictness::Neither,
    }
}

/// Why a function fails to be real integrable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntegrabilityViolation {
    /// A fixed simplex in the closure of `h⁻¹(p)` for a rational `p`.
    RationalLevel { p: Rational, simplex: Simplex },
    /// A fixed simplex in the frontier of `h⁻¹((p, q))`.
    IntervalFrontier { p: Rational, q: Rational, simplex: Simplex },
}

impl fmt::Display for IntegrabilityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntegrabilityViolation::RationalLevel { p, simplex } => {
                write!(
                    f,
                    "fixed simplex {simplex} lies in the closure of the level set h = {p}"
                )
            }
            IntegrabilityViolation::IntervalFrontier { p, q, simplex } => {
                write!(f, "fixed simplex {simplex} lies in the frontier of h^-1(({p}, {q}))")
            }
        }
    }
}

/// A rational strictly between `lo < hi`, found by dyadic refinement.
pub fn rational_between(lo: &QuadExt, hi: &QuadExt) -> Rational {
    assert!(lo < hi);
    let mut n = 0u32;
    loop {
        let p = Rational::new(qext_floor_scaled(lo, n) + 1, BigInt::one() << n);
        if QuadExt::rational(p.clone()) < *hi {
            return p;
        }
        n += 1;
    }
}

/// Rational endpoints `(p, q)` isolating each contiguous run of the sorted
/// distinct values, with the run's preimage.
pub fn interval_classes(h: &ValueFunction) -> Vec<(Rational, Rational, SimplexSet)> {
    let mut distinct: Vec<QuadExt> = h.values.clone();
    distinct.sort();
    distinct.dedup();
    let d = distinct.len();
    if d == 0 {
        return Vec::new();
    }
    // cuts[i] separates distinct[i-1] from distinct[i]; the ends lie outside.
    let mut cuts = Vec::with_capacity(d + 1);
    cuts.push(Rational::from_integer(qext_floor_scaled(&distinct[0], 0) - 1));
    for w in distinct.windows(2) {
        cuts.push(rational_between(&w[0], &w[1]));
    }
    cuts.push(Rational::from_integer(qext_ceil_scaled(&distinct[d - 1], 0) + 1));
    let mut out = Vec::new();
    for i in 0..d {
        for j in i..d {
            let (lo, hi) = (&distinct[i], &distinct[j]);
            out.push((cuts[i].clone(), cuts[j + 1].clone(), h.preimage(|v| v >= lo && v <= hi)));
        }
    }
    out
}

/// Checks the two integrability conditions: no fixed point in the closure
/// of any rational level set, and no fixed point in the frontier of any
/// rational interval preimage. Boundedness is automatic.
#[allow(clippy::result_large_err)]
pub fn is_real_integrable(h: &ValueFunction, f: &SimplicialMap) -> std::result::Result<(), IntegrabilityViolation> {
    assert!(
        h.ambient.as_ref() == f.source().as_ref(),
        "function and map on different complexes"
    );
    let fixed = fixed_simplices(f);
    // A fixed simplex carrying a rational value p sits in h⁻¹(p) itself.
    if let Some(s) = fixed.iter().find(|s| h.value(s.index).is_rational()) {
        return Err(IntegrabilityViolation::RationalLevel {
            p: h.value(s.index).a.clone(),
            simplex: s.simplex.clone(),
        });
    }
    for (p, q, set) in interval_classes(h) {
        if let Verdict::Inadmissible(s) = admissible(f, &set).verdict {
            return Err(IntegrabilityViolation::IntervalFrontier {
                p,
                q,
                simplex: s.simplex,
            });
        }
    }
    // Implied by the interval condition, checked literally all the same.
    let mut rational_values: Vec<&QuadExt> = h.values.iter().filter(|v| v.is_rational()).collect();
    rational_values.sort();
    rational_values.dedup();
    for p in rational_values {
        let closure = closure_set(&h.preimage(|v| v == p));
        if let Some(s) = fixed.iter().find(|s| closure.contains(s.index)) {
            return Err(IntegrabilityViolation::RationalLevel {
                p: p.a.clone(),
                simplex: s.simplex.clone(),
            });
        }
    }
    Ok(())
}

fn check_preconditions(h: &ValueFunction, f: &SimplicialMap) -> Result<()> {
    if *h.ambient != **f.source() || !f.is_self_map() {
        return Err(Error::AmbientMismatch);
    }
    is_real_integrable(h, f).map_err(|v| Error::NotIntegrable(v.to_string()))?;
    if is_index_strict(f) == IndexStrictness::Neither {
        return Err(Error::NotIndexStrict);
    }
    Ok(())
}

fn riemann_sum(h: &ValueFunction, f: &SimplicialMap, n: u32, upper: bool) -> Result<QuadExt> {
    check_preconditions(h, f)?;
    dyadic_sum(h, f, n, upper)
}

fn dyadic_sum(h: &ValueFunction, f: &SimplicialMap, n: u32, upper: bool) -> Result<QuadExt> {
    let step = h.dyadic_step(n, upper);
    let step = StepFunction::new(f.source(), step.terms().to_vec()).expect("equal complexes");
    let total = integrate_step(&step, f)?;
    Ok(QuadExt::rational(Rational::new(total, BigInt::one() << n)))
}

/// `(1/2ⁿ) ∫ ⌊2ⁿh⌋ d i_c(f)`.
pub fn riemann_lower(h: &ValueFunction, f: &SimplicialMap, n: u32) -> Result<QuadExt> {
    riemann_sum(h, f, n, false)
}

/// `(1/2ⁿ) ∫ ⌈2ⁿh⌉ d i_c(f)`.
pub fn riemann_upper(h: &ValueFunction, f: &SimplicialMap, n: u32) -> Result<QuadExt> {
    riemann_sum(h, f, n, true)
}

/// Sums for `n = 0..=levels`.
pub fn riemann_sequence(h: &ValueFunction, f: &SimplicialMap, levels: u32, upper: bool) -> Result<Vec<QuadExt>> {
    check_preconditions(h, f)?;
    (0..=levels).map(|n| dyadic_sum(h, f, n, upper)).collect()
}

/// The common value of `h` on a cluster; rejects clusters where it varies.
pub fn cluster_value(h: &ValueFunction, c: &FixedCluster) -> Result<QuadExt> {
    let first = h.value(c.simplices[0].index);
    match c.simplices.iter().find(|s| h.value(s.index) != first) {
        Some(s) => Err(Error::NonConstantCluster(s.simplex.clone())),
        None => Ok(first.clone()),
    }
}

/// `Σ_c h(c) · ind_c`, the common limit of the lower and upper sums.
pub fn riemann_limit(h: &ValueFunction, f: &SimplicialMap) -> Result<QuadExt> {
    check_preconditions(h, f)?;
    let mut total = QuadExt::zero();
    for c in fixed_clusters(f) {
        total = total + cluster_value(h, &c)?.scale(&Rational::from_integer(c.localized_index.into()));
    }
    Ok(total)
}

/// `Σ_c ⌊2ⁿ h(c)⌋ · ind_c / 2ⁿ`, read off the clusters directly.
pub fn riemann_lower_from_clusters(h: &ValueFunction, f: &SimplicialMap, n: u32) -> Result<QuadExt> {
    check_preconditions(h, f)?;
    let mut total = BigInt::zero();
    for c in fixed_clusters(f) {
        total += qext_floor_scaled(&cluster_value(h, &c)?, n) * BigInt::from(c.localized_index);
    }
    Ok(QuadExt::rational(Rational::new(total, BigInt::one() << n)))
}

/// `Σ_c |ind_c|`, the constant in the `2⁻ⁿ` error bound.
pub fn error_constant(f: &SimplicialMap) -> i64 {
    fixed_clusters(f).iter().map(|c| c.localized_index.abs()).sum()
}

/// Riemann sequences before and after transport along an isomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinateChange {
    pub original_lower: Vec<QuadExt>,
    pub transported_lower: Vec<QuadExt>,
    pub original_upper: Vec<QuadExt>,
    pub transported_upper: Vec<QuadExt>,
}

impl CoordinateChange {
    pub fn agrees(&self) -> bool {
        self.original_lower == self.transported_lower && self.original_upper == self.transported_upper
    }
}

/// Sums of `(h, f)` on `X` and of `(h ∘ iso⁻¹, iso ∘ f ∘ iso⁻¹)` on `Y`.
pub fn coordinate_change_eval(
    h: &ValueFunction,
    f: &SimplicialMap,
    iso: &SimplicialMap,
    levels: u32,
) -> Result<CoordinateChange> {
    let g = conjugate(f, iso)?;
    let k = h.transport(iso)?;
    Ok(CoordinateChange {
        original_lower: riemann_sequence(h, f, levels, false)?,
        transported_lower: riemann_sequence(&k, &g, levels, false)?,
        original_upper: riemann_sequence(h, f, levels, true)?,
        transported_upper: riemann_sequence(&k, &g, levels, true)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ratio;
    use crate::catalog;
    use crate::complex::polygon;

    fn q(a: i64, b: i64) -> QuadExt {
        QuadExt::from_ints(a, b)
    }

    fn r(n: i64, d: i64) -> QuadExt {
        QuadExt::rational(ratio(n, d))
    }

    #[test]
    fn strictness_examples() {
        assert_eq!(
            is_index_strict(&catalog::sphere_rotation(6).unwrap().map),
            IndexStrictness::Nonnegative
        );
        assert_eq!(
            is_index_strict(&catalog::path_reflection().map),
            IndexStrictness::Nonnegative
        );
        let hex = Arc::new(polygon(6).unwrap());
        let turn = SimplicialMap::self_map_fn(&hex, |v| (v + 1) % 6).unwrap();
        assert_eq!(is_index_strict(&turn), IndexStrictness::Both);
    }

    #[test]
    fn integrability_examples() {
        let inst = catalog::path_reflection();
        let h = inst.values.clone().unwrap();
        assert_eq!(is_real_integrable(&h, &inst.map), Ok(()));

        let x = inst.map.source();
        let m = x.index_of(&Simplex::from_ids(&[1]).unwrap()).unwrap();
        let mut bad = ValueFunction::constant(x, QuadExt::zero());
        bad.set(m, QuadExt::sqrt2());
        match is_real_integrable(&bad, &inst.map) {
            Err(IntegrabilityViolation::IntervalFrontier { simplex, .. }) => {
                assert_eq!(simplex, Simplex::from_ids(&[1]).unwrap())
            }
            other => panic!("unexpected {other:?}"),
        }

        let mut rational = h.clone();
        rational.set(m, QuadExt::from_ints(1, 0));
        assert!(matches!(
            is_real_integrable(&rational, &inst.map),
            Err(IntegrabilityViolation::RationalLevel { .. })
        ));
    }

    #[test]
    fn riemann_examples() {
        let inst = catalog::path_reflection();
        let h = inst.values.clone().unwrap();
        let f = &inst.map;
        assert_eq!(riemann_lower(&h, f, 0).unwrap(), r(1, 1));
        assert_eq!(riemann_lower(&h, f, 2).unwrap(), r(5, 4));
        assert_eq!(riemann_lower(&h, f, 3).unwrap(), r(11, 8));
        assert_eq!(riemann_upper(&h, f, 0).unwrap(), r(2, 1));
        assert_eq!(riemann_upper(&h, f, 3).unwrap(), r(12, 8));
        assert_eq!(riemann_lower(&h, f, 8).unwrap(), r(181, 128));
        assert_eq!(riemann_limit(&h, f).unwrap(), QuadExt::sqrt2());

        let hex = Arc::new(polygon(6).unwrap());
        let turn = SimplicialMap::self_map_fn(&hex, |v| (v + 1) % 6).unwrap();
        let c = ValueFunction::constant(&hex, QuadExt::sqrt2());
        assert!(riemann_sequence(&c, &turn, 5, false)
            .unwrap()
            .iter()
            .all(|v| v.is_zero()));
        assert_eq!(riemann_limit(&c, &turn).unwrap(), QuadExt::zero());
    }

    #[test]
    fn two_cluster_limit() {
        let inst = catalog::sphere_rotation(6).unwrap();
        let x = inst.map.source();
        let n = inst.set("star-N").unwrap();
        let s = inst.set("star-S").unwrap();
        let h = ValueFunction::from_fn(x, |sx| {
            let i = x.index_of(sx).unwrap();
            if n.contains(i) {
                q(1, 1)
            } else if s.contains(i) {
                q(0, 3)
            } else {
                QuadExt::zero()
            }
        });
        assert_eq!(riemann_limit(&h, &inst.map).unwrap(), q(1, 4));
        for k in 0..10 {
            assert_eq!(
                riemann_lower(&h, &inst.map, k).unwrap(),
                riemann_lower_from_clusters(&h, &inst.map, k).unwrap()
            );
        }
    }

    #[test]
    fn coordinate_change_examples() {
        let inst = catalog::path_reflection();
        let h = inst.values.clone().unwrap();
        let id = SimplicialMap::identity(inst.map.source());
        assert!(coordinate_change_eval(&h, &inst.map, &id, 6).unwrap().agrees());

        let hex = Arc::new(polygon(6).unwrap());
        let turn = SimplicialMap::self_map_fn(&hex, |v| (v + 1) % 6).unwrap();
        let flip = SimplicialMap::self_map_fn(&hex, |v| (6 - v) % 6).unwrap();
        let c = ValueFunction::constant(&hex, QuadExt::sqrt2());
        let cc = coordinate_change_eval(&c, &turn, &flip, 4).unwrap();
        assert!(cc.agrees());
        assert!(cc.original_upper.iter().all(|v| v.is_zero()));
    }

    #[test]
    fn rational_between_separates() {
        let lo = QuadExt::sqrt2();
        let hi = q(0, 1) + r(1, 1000);
        let p = rational_between(&lo, &hi);
        assert!(lo < QuadExt::rational(p.clone()) && QuadExt::rational(p) < hi);
    }
}
