//! Rational simplicial homology and the classical Lefschetz number.
//!
//! [`lefschetz_hopf`] reads the alternating chain trace; [`lefschetz_homology`]
//! goes through homology proper. The two routes share no code past the
//! boundary matrices, which is what makes their agreement a useful check.

use num_traits::ToPrimitive;

use crate::algebra::{mat_rank, mat_trace, null_space, pivot_columns, solve_many, MatrixQ, Rational, SpanSolution};
use crate::complex::Complex;
use crate::maps::SimplicialMap;

/// Signed boundary `∂_k`: rows are (k−1)-simplices, columns k-simplices,
/// both in canonical order. `∂_0` has no rows.
pub fn boundary_matrix(x: &Complex, k: usize) -> MatrixQ {
    let cols = x.indices_of_dim(k);
    if k == 0 {
        return MatrixQ::zeros(0, cols.len());
    }
    let rows = x.indices_of_dim(k - 1);
    let mut m = MatrixQ::zeros(rows.len(), cols.len());
    for (j, i) in cols.clone().enumerate() {
        for (pos, face) in x.simplex(i).facets().iter().enumerate() {
            // facets() omits vertices in ascending position order
            let row = x.index_of(face).expect("closed under faces") - rows.start;
            let sign = if pos % 2 == 0 { 1 } else { -1 };
            m.set(row, j, Rational::from_integer(sign.into()));
        }
    }
    m
}

/// Boundary matrices of a complex, one per dimension.
#[derive(Clone, Debug)]
pub struct ChainComplexQ {
    pub boundaries: Vec<MatrixQ>,
}

impl ChainComplexQ {
    pub fn new(x: &Complex) -> Self {
        let top = x.dim().map_or(0, |d| d + 1);
        ChainComplexQ {
            boundaries: (0..top).map(|k| boundary_matrix(x, k)).collect(),
        }
    }

    pub fn top(&self) -> usize {
        self.boundaries.len()
    }

    /// Rank of the chain group in dimension k.
    pub fn rank_of_chains(&self, k: usize) -> usize {
        self.boundaries.get(k).map_or(0, MatrixQ::cols)
    }

    /// `∂_{k+1}`, or an empty `n_k × 0` matrix above the top dimension.
    fn boundary_above(&self, k: usize) -> MatrixQ {
        self.boundaries
            .get(k + 1)
            .cloned()
            .unwrap_or_else(|| MatrixQ::zeros(self.rank_of_chains(k), 0))
    }
}

/// Rational Betti numbers `β_0, …, β_dim`; empty for the empty complex.
pub fn betti(x: &Complex) -> Vec<usize> {
    let cc = ChainComplexQ::new(x);
    let ranks: Vec<usize> = cc.boundaries.iter().map(mat_rank).collect();
    (0..cc.top())
        .map(|k| {
            let cycles = cc.rank_of_chains(k) - ranks[k];
            cycles - ranks.get(k + 1).copied().unwrap_or(0)
        })
        .collect()
}

/// Parity of the permutation sorting `v`, or `None` when `v` repeats.
fn sort_sign<T: Ord>(v: &[T]) -> Option<i64> {
    let mut inversions = 0usize;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            match v[i].cmp(&v[j]) {
                std::cmp::Ordering::Equal => return None,
                std::cmp::Ordering::Greater => inversions += 1,
                std::cmp::Ordering::Less => {}
            }
        }
    }
    Some(if inversions.is_multiple_of(2) { 1 } else { -1 })
}

/// Matrix of `f_#` on k-chains: target k-simplices by source k-simplices.
pub fn induced_chain_map(f: &SimplicialMap, k: usize) -> MatrixQ {
    let (src, tgt) = (f.source(), f.target());
    let cols = src.indices_of_dim(k);
    let rows = tgt.indices_of_dim(k);
    let mut m = MatrixQ::zeros(rows.len(), cols.len());
    for (j, i) in cols.enumerate() {
        let image: Vec<_> = src.simplex(i).vertices().iter().map(|&v| f.apply(v)).collect();
        let Some(sign) = sort_sign(&image) else {
            continue;
        };
        let row = f.image_index(i) - rows.start;
        m.set(row, j, Rational::from_integer(sign.into()));
    }
    m
}

fn to_i64(r: &Rational) -> i64 {
    assert!(r.is_integer(), "Lefschetz traces are integers");
    r.to_integer().to_i64().expect("trace fits in i64")
}

/// `Σ_k (−1)^k tr(f_#k)`.
pub fn lefschetz_hopf(f: &SimplicialMap) -> i64 {
    assert!(f.is_self_map(), "Lefschetz number needs a self-map");
    let top = f.source().dim().map_or(0, |d| d + 1);
    (0..top)
        .map(|k| {
            let t = to_i64(&mat_trace(&induced_chain_map(f, k)).expect("square"));
            if k % 2 == 0 {
                t
            } else {
                -t
            }
        })
        .sum()
}

/// Boundary basis and homology representatives in dimension k.
///
/// The columns of `[∂_{k+1} | Z_k]` are scanned left to right and the
/// independent ones kept, so boundaries come first and the retained cycles
/// complete them to a basis of `Z_k`.
fn homology_basis(cc: &ChainComplexQ, k: usize) -> (Vec<Vec<Rational>>, Vec<Vec<Rational>>) {
    let n = cc.rank_of_chains(k);
    let above = cc.boundary_above(k);
    let mut all: Vec<Vec<Rational>> = (0..above.cols()).map(|j| above.column(j)).collect();
    let nb = all.len();
    all.extend(null_space(&cc.boundaries[k]));
    let m = MatrixQ::from_columns(n, &all).expect("consistent length");
    let (mut boundary_basis, mut homology) = (Vec::new(), Vec::new());
    for p in pivot_columns(&m) {
        if p < nb {
            boundary_basis.push(all[p].clone());
        } else {
            homology.push(all[p].clone());
        }
    }
    (boundary_basis, homology)
}

/// `Σ_k (−1)^k tr(f_*: H_k → H_k)` over ℚ.
pub fn lefschetz_homology(f: &SimplicialMap) -> i64 {
    assert!(f.is_self_map(), "Lefschetz number needs a self-map");
    let cc = ChainComplexQ::new(f.source());
    let mut total = 0i64;
    for k in 0..cc.top() {
        let (bnd, hom) = homology_basis(&cc, k);
        if hom.is_empty() {
            continue;
        }
        let fk = induced_chain_map(f, k);
        let images: Vec<Vec<Rational>> = hom.iter().map(|h| fk.mul_vec(h).expect("square chain map")).collect();
        let mut basis = bnd.clone();
        basis.extend(hom.iter().cloned());
        let m = MatrixQ::from_columns(cc.rank_of_chains(k), &basis).expect("length");
        let sols = solve_many(&m, &images).expect("length");
        let mut trace = Rational::from_integer(0.into());
        for (j, sol) in sols.iter().enumerate() {
            match sol {
                SpanSolution::Coefficients(c) => trace += &c[bnd.len() + j],
                SpanSolution::NotInSpan => unreachable!("image of a cycle is a cycle"),
            }
        }
        let t = to_i64(&trace);
        total += if k % 2 == 0 { t } else { -t };
    }
    total
}
