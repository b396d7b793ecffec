//! The combinatorial Lefschetz number and the combinatorial fixed point index.
//!
//! Both are signed counts of fixed simplices: over an invariant set for
//! [`comb_lefschetz`], over the interior of an admissible set for
//! [`comb_index`]. [`index_oracle`] recomputes the index through homology.

use std::sync::Arc;

use crate::complex::{
    barycentric_subdivide, closed_star, closure_set, frontier_set, interior_set, Complex, SimplexSet,
};
use crate::error::{Error, Result};
use crate::homology::lefschetz_homology;
use crate::maps::{fixed_clusters, fixed_simplices, subdivide_map, FixedSimplex, SimplicialMap};

/// Subdivision rounds allowed to [`index_oracle`].
pub const DEFAULT_ORACLE_BUDGET: usize = 3;

/// Outcome of an admissibility check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Admissible,
    /// A fixed simplex in the frontier `Ā∖Å`.
    Inadmissible(FixedSimplex),
}

#[derive(Clone, Debug)]
pub struct AdmissibleQuery {
    pub set: SimplexSet,
    pub verdict: Verdict,
}

impl AdmissibleQuery {
    pub fn is_admissible(&self) -> bool {
        self.verdict == Verdict::Admissible
    }

    pub fn into_result(self) -> Result<()> {
        match self.verdict {
            Verdict::Admissible => Ok(()),
            Verdict::Inadmissible(s) => Err(Error::Inadmissible(s.simplex)),
        }
    }
}

fn check_ambient(f: &SimplicialMap, a: &SimplexSet) -> Result<()> {
    if !f.is_self_map() || !a.same_ambient(f.source()) {
        return Err(Error::AmbientMismatch);
    }
    Ok(())
}

/// `A` is admissible for `f` when no fixed simplex lies in its frontier.
pub fn admissible(f: &SimplicialMap, a: &SimplexSet) -> AdmissibleQuery {
    let frontier = frontier_set(a);
    let verdict = fixed_simplices(f)
        .into_iter()
        .find(|s| frontier.contains(s.index))
        .map_or(Verdict::Admissible, Verdict::Inadmissible);
    AdmissibleQuery {
        set: a.clone(),
        verdict,
    }
}

/// Succeeds when `f` maps every member of `u` to a member of `u`.
pub fn check_invariant(f: &SimplicialMap, u: &SimplexSet) -> Result<()> {
    check_ambient(f, u)?;
    match u.indices().find(|&i| !u.contains(f.image_index(i))) {
        Some(i) => Err(Error::NotInvariant(f.source().simplex(i).clone())),
        None => Ok(()),
    }
}

/// `Λ(U, f)_X` for an automorphism `f` and an `f`-invariant set `U`.
pub fn comb_lefschetz(f: &SimplicialMap, u: &SimplexSet) -> Result<i64> {
    check_ambient(f, u)?;
    f.check_automorphism()?;
    check_invariant(f, u)?;
    Ok(fixed_simplices(f)
        .iter()
        .filter(|s| u.contains(s.index))
        .map(FixedSimplex::weight)
        .sum())
}

/// `i_c(X, f, A)`: the signed count of fixed simplices in `Å`.
pub fn comb_index(f: &SimplicialMap, a: &SimplexSet) -> Result<i64> {
    check_ambient(f, a)?;
    admissible(f, a).into_result()?;
    let interior = interior_set(a);
    Ok(fixed_simplices(f)
        .iter()
        .filter(|s| interior.contains(s.index))
        .map(FixedSimplex::weight)
        .sum())
}

/// The smallest closed `f`-invariant set containing `s`.
pub fn invariant_hull(f: &SimplicialMap, s: &SimplexSet) -> SimplexSet {
    let mut hull = closure_set(s);
    loop {
        // Images of a closed set form a closed set.
        let next = hull.union(&SimplexSet::from_indices(
            f.source(),
            hull.indices().map(|i| f.image_index(i)),
        ));
        if next == hull {
            return hull;
        }
        hull = next;
    }
}

/// [`index_oracle_with_budget`] with [`DEFAULT_ORACLE_BUDGET`].
pub fn index_oracle(f: &SimplicialMap, a: &SimplexSet) -> Result<i64> {
    index_oracle_with_budget(f, a, DEFAULT_ORACLE_BUDGET)
}

/// The index through homology: for each fixed cluster inside `Å`, the
/// Lefschetz number of `f` on the invariant hull of the cluster's closed
/// star. Subdivides until no hull meets a second cluster.
pub fn index_oracle_with_budget(f: &SimplicialMap, a: &SimplexSet, budget: usize) -> Result<i64> {
    check_ambient(f, a)?;
    admissible(f, a).into_result()?;
    let mut f = f.clone();
    let mut a = a.clone();
    for round in 0..=budget {
        if let Some(total) = separated_sum(&f, &a) {
            return Ok(total);
        }
        if round == budget {
            break;
        }
        let sd = barycentric_subdivide(f.source());
        a = sd.subdivide_set(&a);
        f = subdivide_map(&f, &sd);
    }
    Err(Error::BudgetExceeded(budget))
}

fn separated_sum(f: &SimplicialMap, a: &SimplexSet) -> Option<i64> {
    let x = f.source();
    let interior = interior_set(a);
    let fixed: Vec<usize> = fixed_simplices(f).iter().map(|s| s.index).collect();
    let mut total = 0;
    for cluster in fixed_clusters(f) {
        // Admissibility puts each cluster wholly inside Å or outside Ā.
        if !interior.contains(cluster.simplices[0].index) {
            continue;
        }
        let own = cluster.as_set(x);
        let hull = invariant_hull(f, &closed_star(&own));
        if fixed.iter().any(|&i| hull.contains(i) && !own.contains(i)) {
            return None;
        }
        let k: Arc<Complex> = Arc::new(Complex::subcomplex(&hull).expect("hull is closed"));
        total += lefschetz_homology(&f.restrict(&k).expect("hull is invariant"));
    }
    Some(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::complex::{euler_compact, open_star, path, Simplex};
    use crate::homology::lefschetz_hopf;

    #[test]
    fn comb_lefschetz_examples() {
        let inst = catalog::sphere_reflection(6).unwrap();
        assert_eq!(comb_lefschetz(&inst.map, inst.set("U").unwrap()).unwrap(), 6);
        let full = SimplexSet::full(inst.map.source());
        assert_eq!(comb_lefschetz(&inst.map, &full).unwrap(), lefschetz_hopf(&inst.map));
        let x = inst.map.source();
        let edge = SimplexSet::from_ids(x, &[&[0, 1]]).unwrap();
        assert_eq!(comb_lefschetz(&inst.map, &edge).unwrap(), -1);
    }

    #[test]
    fn comb_lefschetz_rejects_bad_input() {
        let inst = catalog::sphere_reflection(6).unwrap();
        let x = inst.map.source();
        let pole = SimplexSet::from_ids(x, &[&[6]]).unwrap();
        assert_eq!(
            comb_lefschetz(&inst.map, &pole),
            Err(Error::NotInvariant(Simplex::from_ids(&[6]).unwrap()))
        );
        let p = Arc::new(path(2));
        let fold = SimplicialMap::self_map(&p, &[(0, 0), (1, 1), (2, 0)]).unwrap();
        assert!(matches!(
            comb_lefschetz(&fold, &SimplexSet::full(&p)),
            Err(Error::NotAutomorphism(_))
        ));
    }

    #[test]
    fn admissible_examples() {
        let inst = catalog::path_reflection();
        let star = inst.set("star-m").unwrap();
        assert!(admissible(&inst.map, star).is_admissible());
        assert!(admissible(&inst.map, &SimplexSet::full(inst.map.source())).is_admissible());

        let refl = catalog::sphere_reflection(6).unwrap();
        let q = admissible(&refl.map, refl.set("U").unwrap());
        match q.verdict {
            Verdict::Inadmissible(s) => assert!(s.simplex.dim() == 0 && s.simplex.vertices()[0].0 < 6),
            Verdict::Admissible => panic!("U_m is inadmissible"),
        }
    }

    #[test]
    fn comb_index_examples() {
        let rot = catalog::sphere_rotation(6).unwrap();
        assert_eq!(comb_index(&rot.map, rot.set("star-N").unwrap()).unwrap(), 1);
        let x = Arc::new(crate::complex::polygon(5).unwrap());
        let id = SimplicialMap::identity(&x);
        assert_eq!(comb_index(&id, &SimplexSet::full(&x)).unwrap(), euler_compact(&x));
        let refl = catalog::sphere_reflection(6).unwrap();
        assert_eq!(comb_index(&refl.map, refl.set("equator-nbhd").unwrap()).unwrap(), 0);
        assert!(matches!(
            comb_index(&refl.map, refl.set("U").unwrap()),
            Err(Error::Inadmissible(_))
        ));
    }

    #[test]
    fn oracle_examples() {
        let inst = catalog::path_reflection();
        assert_eq!(index_oracle(&inst.map, inst.set("star-m").unwrap()).unwrap(), 1);
        let rot = catalog::sphere_rotation(6).unwrap();
        assert_eq!(index_oracle(&rot.map, rot.set("star-N").unwrap()).unwrap(), 1);
        let full = SimplexSet::full(rot.map.source());
        assert_eq!(index_oracle(&rot.map, &full).unwrap(), lefschetz_homology(&rot.map));
        let refl = catalog::sphere_reflection(5).unwrap();
        let full = SimplexSet::full(refl.map.source());
        assert_eq!(index_oracle(&refl.map, &full).unwrap(), 0);
    }

    #[test]
    fn cluster_stars_are_invariant_and_separated() {
        // Cofaces of a fixed simplex map to cofaces, so the oracle never
        // needs to subdivide on these instances.
        let x = Arc::new(crate::complex::polygon(6).unwrap());
        let f = SimplicialMap::self_map_fn(&x, |v| (7 - v) % 6).unwrap();
        assert_eq!(fixed_clusters(&f).len(), 2);
        let full = SimplexSet::full(&x);
        assert_eq!(index_oracle_with_budget(&f, &full, 0).unwrap(), 2);
        for c in fixed_clusters(&f) {
            let star = closed_star(&c.as_set(&x));
            assert_eq!(invariant_hull(&f, &star), star);
        }
        let a = open_star(&SimplexSet::from_ids(&x, &[&[0, 1]]).unwrap());
        assert_eq!(comb_index(&f, &a).unwrap(), 1);
        assert_eq!(index_oracle(&f, &a).unwrap(), 1);
        let p = Arc::new(path(3));
        let g = SimplicialMap::self_map(&p, &[(0, 3), (1, 2), (2, 1), (3, 0)]).unwrap();
        assert_eq!(index_oracle(&g, &SimplexSet::full(&p)).unwrap(), lefschetz_hopf(&g));
    }
}
