//! Integration of integer step functions against the combinatorial index.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::complex::{barycentric_subdivide, staircase_product, Complex, Product, SimplexSet};
use crate::error::{Error, Result};
use crate::index::{admissible, comb_index, Verdict};
use crate::maps::{preimage_set, product_map, projection_left, subdivide_map, SimplicialMap};

/// `h = Σ d_j · 1_{U_j}` over one ambient complex.
#[derive(Clone, Debug)]
pub struct StepFunction {
    ambient: Arc<Complex>,
    terms: Vec<(BigInt, SimplexSet)>,
}

impl StepFunction {
    pub fn zero(ambient: &Arc<Complex>) -> Self {
        StepFunction {
            ambient: Arc::clone(ambient),
            terms: Vec::new(),
        }
    }

    pub fn new(ambient: &Arc<Complex>, terms: Vec<(BigInt, SimplexSet)>) -> Result<Self> {
        if terms.iter().any(|(_, u)| !u.same_ambient(ambient)) {
            return Err(Error::AmbientMismatch);
        }
        Ok(StepFunction {
            ambient: Arc::clone(ambient),
            terms,
        })
    }

    /// `d · 1_U`.
    pub fn indicator(u: &SimplexSet, d: impl Into<BigInt>) -> Self {
        StepFunction {
            ambient: Arc::clone(u.ambient()),
            terms: vec![(d.into(), u.clone())],
        }
    }

    pub fn ambient(&self) -> &Arc<Complex> {
        &self.ambient
    }

    pub fn terms(&self) -> &[(BigInt, SimplexSet)] {
        &self.terms
    }

    pub fn push(&mut self, d: impl Into<BigInt>, u: SimplexSet) -> Result<()> {
        if !u.same_ambient(&self.ambient) {
            return Err(Error::AmbientMismatch);
        }
        self.terms.push((d.into(), u));
        Ok(())
    }

    /// Sum of representations (concatenated term lists).
    pub fn add(&self, other: &StepFunction) -> Result<StepFunction> {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        StepFunction::new(&self.ambient, terms)
    }

    /// Value on the open simplex with index `i`.
    pub fn eval(&self, i: usize) -> BigInt {
        self.terms
            .iter()
            .filter(|(_, u)| u.contains(i))
            .map(|(d, _)| d.clone())
            .sum()
    }

    /// Values on every simplex in canonical order.
    pub fn values(&self) -> Vec<BigInt> {
        (0..self.ambient.len()).map(|i| self.eval(i)).collect()
    }

    /// Equal values everywhere, whatever the representations.
    pub fn same_function(&self, other: &StepFunction) -> bool {
        *self.ambient == *other.ambient && self.values() == other.values()
    }

    /// Nonzero level sets `{h = p}`, keyed by `p`.
    pub fn level_sets(&self) -> BTreeMap<BigInt, SimplexSet> {
        let mut groups: BTreeMap<BigInt, Vec<usize>> = BTreeMap::new();
        for (i, v) in self.values().into_iter().enumerate() {
            if !v.is_zero() {
                groups.entry(v).or_default().push(i);
            }
        }
        groups
            .into_iter()
            .map(|(p, idx)| (p, SimplexSet::from_indices(&self.ambient, idx)))
            .collect()
    }
}

/// Checks that every term support is admissible for `f`; reports the first
/// failing term with a fixed simplex in its frontier.
pub fn integrable_wrt_index(h: &StepFunction, f: &SimplicialMap) -> Result<()> {
    if *h.ambient != **f.source() || !f.is_self_map() {
        return Err(Error::AmbientMismatch);
    }
    for (term, (_, u)) in h.terms.iter().enumerate() {
        if let Verdict::Inadmissible(s) = admissible(f, u).verdict {
            return Err(Error::InadmissibleTerm {
                term,
                simplex: s.simplex,
            });
        }
    }
    Ok(())
}

/// Same set, re-anchored on the map's complex when the two are equal but
/// distinct allocations.
fn rebase(u: &SimplexSet, f: &SimplicialMap) -> SimplexSet {
    if Arc::ptr_eq(u.ambient(), f.source()) {
        u.clone()
    } else {
        SimplexSet::from_indices(f.source(), u.indices())
    }
}

/// `∫ h d i_c(f) = Σ d_j · i_c(X, f, U_j)`.
pub fn integrate_step(h: &StepFunction, f: &SimplicialMap) -> Result<BigInt> {
    integrable_wrt_index(h, f)?;
    let mut total = BigInt::zero();
    for (d, u) in &h.terms {
        total += d * comb_index(f, &rebase(u, f))?;
    }
    Ok(total)
}

/// `Σ_p p · i_c(X, f, {h = p})`.
pub fn integrate_levels(h: &StepFunction, f: &SimplicialMap) -> Result<BigInt> {
    integrable_wrt_index(h, f)?;
    let mut total = BigInt::zero();
    for (p, level) in h.level_sets() {
        total += &p * comb_index(f, &rebase(&level, f))?;
    }
    Ok(total)
}

/// Both sides of the product rule on the staircase product:
/// `(i_c(X₁×X₂, f₁×f₂, A₁×A₂), i_c(X₁,f₁,A₁)·i_c(X₂,f₂,A₂))`.
///
/// When `f₁ × f₂` is not simplicial on the staircase of the factors, the
/// left side is evaluated on the staircase of their barycentric
/// subdivisions instead, where it always is.
pub fn product_rule_eval(
    f1: &SimplicialMap,
    a1: &SimplexSet,
    f2: &SimplicialMap,
    a2: &SimplexSet,
) -> Result<(i64, i64)> {
    let product = staircase_product(f1.source(), f2.source());
    match product_rule_eval_on(&product, f1, a1, f2, a2) {
        Err(Error::ProductNotSimplicial(_)) => {
            let (s1, s2) = (barycentric_subdivide(f1.source()), barycentric_subdivide(f2.source()));
            let (g1, g2) = (subdivide_map(f1, &s1), subdivide_map(f2, &s2));
            let product = staircase_product(&s1.complex, &s2.complex);
            product_rule_eval_on(&product, &g1, &s1.subdivide_set(a1), &g2, &s2.subdivide_set(a2))
        }
        other => other,
    }
}

/// Subdivided factors whose product map is simplicial on the staircase,
/// or the factors themselves when theirs already is.
fn simplicial_product(
    l1: &SimplicialMap,
    b_prime: &SimplexSet,
    l2: &SimplicialMap,
) -> Result<(Product, SimplicialMap, SimplexSet)> {
    let product = staircase_product(l1.source(), l2.source());
    match product_map(l1, l2, &product) {
        Ok(l) => Ok((product, l, b_prime.clone())),
        Err(Error::ProductNotSimplicial(_)) => {
            let (s1, s2) = (barycentric_subdivide(l1.source()), barycentric_subdivide(l2.source()));
            let (g1, g2) = (subdivide_map(l1, &s1), subdivide_map(l2, &s2));
            let product = staircase_product(&s1.complex, &s2.complex);
            let l = product_map(&g1, &g2, &product)?;
            Ok((product, l, s1.subdivide_set(b_prime)))
        }
        Err(e) => Err(e),
    }
}

/// [`product_rule_eval`] on a prebuilt product, without the fallback.
pub fn product_rule_eval_on(
    product: &Product,
    f1: &SimplicialMap,
    a1: &SimplexSet,
    f2: &SimplicialMap,
    a2: &SimplexSet,
) -> Result<(i64, i64)> {
    let rhs = comb_index(f1, a1)? * comb_index(f2, a2)?;
    let f = product_map(f1, f2, product)?;
    let lhs = comb_index(&f, &product.box_set(a1, a2))?;
    Ok((lhs, rhs))
}

/// Both sides of the Fubini formula for the trivial bundle `B × F → B`
/// with `h = 1_{p⁻¹(B')}` and `l = l₁ × l₂`.
pub fn fubini_trivial(l1: &SimplicialMap, b_prime: &SimplexSet, l2: &SimplicialMap) -> Result<(BigInt, BigInt)> {
    admissible(l1, b_prime).into_result()?;
    let (product, l, base_set) = simplicial_product(l1, b_prime, l2)?;

    let p = projection_left(&product);
    let h = StepFunction::indicator(&preimage_set(&p, &base_set), 1);
    let lhs = integrate_step(&h, &l)?;

    // The fiber over any point of B is {b} × F with the map id × l₂, and h
    // restricts to 1 on it exactly when the point lies in B'.
    let point = Arc::new(Complex::from_simplices([crate::complex::Simplex::from_ids(&[0])?]));
    let fiber = staircase_product(&point, l2.source());
    let fiber_map = product_map(&SimplicialMap::identity(&point), l2, &fiber)?;
    let fiber_integral = integrate_step(
        &StepFunction::indicator(&SimplexSet::full(&fiber.complex), 1),
        &fiber_map,
    )?;
    let inner = StepFunction::indicator(b_prime, fiber_integral);
    let rhs = integrate_step(&inner, l1)?;
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::complex::{build_complex, euler_compact, open_star, path, polygon};
    use crate::homology::lefschetz_hopf;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn integrable_examples() {
        let rot = catalog::sphere_rotation(6).unwrap();
        let x = rot.map.source();
        assert!(integrable_wrt_index(&StepFunction::indicator(&SimplexSet::full(x), 1), &rot.map).is_ok());
        let n = rot.set("star-N").unwrap().clone();
        let s = rot.set("star-S").unwrap().clone();
        let h = StepFunction::new(x, vec![(b(2), n), (b(5), s)]).unwrap();
        assert!(integrable_wrt_index(&h, &rot.map).is_ok());

        let refl = catalog::sphere_reflection(6).unwrap();
        let h = StepFunction::indicator(refl.set("U").unwrap(), 1);
        let err = integrable_wrt_index(&h, &refl.map).unwrap_err();
        assert!(matches!(err, Error::InadmissibleTerm { term: 0, ref simplex } if simplex.dim() == 0));
    }

    #[test]
    fn integrate_examples() {
        let rot = catalog::sphere_rotation(6).unwrap();
        let x = rot.map.source();
        let n = rot.set("star-N").unwrap().clone();
        let s = rot.set("star-S").unwrap().clone();
        let h = StepFunction::new(x, vec![(b(2), n.clone()), (b(5), s.clone())]).unwrap();
        assert_eq!(integrate_step(&h, &rot.map).unwrap(), b(7));
        assert_eq!(integrate_levels(&h, &rot.map).unwrap(), b(7));
        let h2 = StepFunction::new(x, vec![(b(2), n.union(&s)), (b(3), s)]).unwrap();
        assert!(h.same_function(&h2));
        assert_eq!(integrate_step(&h2, &rot.map).unwrap(), b(7));

        let poly = Arc::new(polygon(5).unwrap());
        let one = StepFunction::indicator(&SimplexSet::full(&poly), 1);
        let id = SimplicialMap::identity(&poly);
        assert_eq!(integrate_step(&one, &id).unwrap(), b(euler_compact(&poly)));
        assert_eq!(integrate_levels(&StepFunction::zero(&poly), &id).unwrap(), b(0));
        let refl = catalog::sphere_reflection(4).unwrap();
        let one = StepFunction::indicator(&SimplexSet::full(refl.map.source()), 1);
        assert_eq!(integrate_levels(&one, &refl.map).unwrap(), b(lefschetz_hopf(&refl.map)));
    }

    #[test]
    fn product_rule_examples() {
        let pr = catalog::path_reflection();
        let star = pr.set("star-m").unwrap();
        assert_eq!(product_rule_eval(&pr.map, star, &pr.map, star).unwrap(), (1, 1));

        let pt = Arc::new(build_complex(&[vec![0]]).unwrap());
        let id_pt = SimplicialMap::identity(&pt);
        let full_pt = SimplexSet::full(&pt);
        assert_eq!(product_rule_eval(&pr.map, star, &id_pt, &full_pt).unwrap(), (1, 1));

        let e = Arc::new(path(1));
        let id = SimplicialMap::identity(&e);
        let full = SimplexSet::full(&e);
        assert_eq!(product_rule_eval(&id, &full, &id, &full).unwrap(), (1, 1));

        // Reflection against a rotation has no staircase-compatible order.
        let tri = Arc::new(build_complex(&[vec![0, 1, 2]]).unwrap());
        let rot = SimplicialMap::self_map(&tri, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let full_tri = SimplexSet::full(&tri);
        let direct = staircase_product(pr.map.source(), &tri);
        assert!(matches!(
            product_rule_eval_on(&direct, &pr.map, star, &rot, &full_tri),
            Err(Error::ProductNotSimplicial(_))
        ));
        assert_eq!(product_rule_eval(&pr.map, star, &rot, &full_tri).unwrap(), (1, 1));
    }

    #[test]
    fn fubini_examples() {
        let pr = catalog::path_reflection();
        let star = pr.set("star-m").unwrap();
        let tri = Arc::new(build_complex(&[vec![0, 1, 2]]).unwrap());
        let rot = SimplicialMap::self_map(&tri, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(fubini_trivial(&pr.map, star, &rot).unwrap(), (b(1), b(1)));
        let empty = SimplexSet::empty(pr.map.source());
        assert_eq!(fubini_trivial(&pr.map, &empty, &rot).unwrap(), (b(0), b(0)));

        let hex = Arc::new(polygon(6).unwrap());
        let turn = SimplicialMap::self_map_fn(&hex, |v| (v + 1) % 6).unwrap();
        let bp = open_star(&SimplexSet::from_ids(&hex, &[&[0, 1]]).unwrap());
        // A fixed-point-free base kills both sides.
        let pt = Arc::new(build_complex(&[vec![0]]).unwrap());
        let id_pt = SimplicialMap::identity(&pt);
        assert_eq!(fubini_trivial(&turn, &bp, &id_pt).unwrap(), (b(0), b(0)));
    }
}
