//! Named instances used by the CLI `example` command, the tests and the
//! benches.

use std::sync::Arc;

use crate::algebra::QuadExt;
use crate::complex::{open_star, path, polygon, suspension, suspension_poles, Complex, Simplex, SimplexSet};
use crate::error::Result;
use crate::maps::SimplicialMap;
use crate::riemann::ValueFunction;

/// A self-map together with named simplex-sets and an optional function.
#[derive(Clone, Debug)]
pub struct Instance {
    pub name: String,
    pub map: SimplicialMap,
    pub sets: Vec<(String, SimplexSet)>,
    pub values: Option<ValueFunction>,
}

impl Instance {
    pub fn complex(&self) -> &Arc<Complex> {
        self.map.source()
    }

    pub fn set(&self, name: &str) -> Option<&SimplexSet> {
        self.sets.iter().find(|(n, _)| n == name).map(|(_, s)| s)
    }
}

fn star_of(x: &Arc<Complex>, v: u32) -> SimplexSet {
    open_star(&SimplexSet::from_ids(x, &[&[v]]).expect("vertex of x"))
}

/// The suspension of an `m`-gon with the reflection swapping the poles.
///
/// Sets: `U` removes the open equator edges; `equator-nbhd` removes only the
/// two poles.
pub fn sphere_reflection(m: usize) -> Result<Instance> {
    let base = polygon(m)?;
    let (n, s) = suspension_poles(&base);
    let x = Arc::new(suspension(&base));
    let map = SimplicialMap::self_map_fn(&x, |v| match v {
        v if v == n.0 => s.0,
        v if v == s.0 => n.0,
        v => v,
    })?;
    let equator_edges = SimplexSet::from_indices(
        &x,
        x.indices_of_dim(1)
            .filter(|&i| !x.simplex(i).contains(n) && !x.simplex(i).contains(s)),
    );
    let poles = SimplexSet::new(&x, [Simplex::vertex(n), Simplex::vertex(s)])?;
    Ok(Instance {
        name: format!("sphere-reflection-{m}"),
        sets: vec![
            ("U".into(), equator_edges.complement()),
            ("equator-nbhd".into(), poles.complement()),
        ],
        map,
        values: None,
    })
}

/// The suspension of an `m`-gon, rotating the equator one step with both
/// poles fixed. The function is `1+√2` on the open star of `N`, `3√2` on the
/// open star of `S` and `0` on the equator.
pub fn sphere_rotation(m: usize) -> Result<Instance> {
    let base = polygon(m)?;
    let (n, s) = suspension_poles(&base);
    let x = Arc::new(suspension(&base));
    let m32 = m as u32;
    let map = SimplicialMap::self_map_fn(&x, |v| if v < m32 { (v + 1) % m32 } else { v })?;
    let star_n = star_of(&x, n.0);
    let star_s = star_of(&x, s.0);
    let values = ValueFunction::from_fn(&x, |sx| {
        if sx.contains(n) {
            QuadExt::from_ints(1, 1)
        } else if sx.contains(s) {
            QuadExt::from_ints(0, 3)
        } else {
            QuadExt::zero()
        }
    });
    Ok(Instance {
        name: format!("sphere-rotation-{m}"),
        sets: vec![("star-N".into(), star_n), ("star-S".into(), star_s)],
        map,
        values: Some(values),
    })
}

/// The path `a–m–b` (ids 0, 1, 2) with `a ↔ b`. The function is `√2` on the
/// open star of `m` and `0` at the ends.
pub fn path_reflection() -> Instance {
    let x = Arc::new(path(2));
    let map = SimplicialMap::self_map(&x, &[(0, 2), (1, 1), (2, 0)]).expect("reflection is simplicial");
    let star = star_of(&x, 1);
    let values = ValueFunction::from_fn(&x, |s| {
        if s.contains(crate::complex::VertexId(1)) {
            QuadExt::sqrt2()
        } else {
            QuadExt::zero()
        }
    });
    Instance {
        name: "path-reflection".into(),
        sets: vec![("star-m".into(), star)],
        map,
        values: Some(values),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::euler_comb;

    #[test]
    fn flagship_shapes() {
        let r = sphere_reflection(6).unwrap();
        assert_eq!(r.complex().len(), 6 + 2 + 6 + 12 + 12);
        assert_eq!(euler_comb(r.set("U").unwrap()), 8);
        assert_eq!(r.set("equator-nbhd").unwrap().len(), r.complex().len() - 2);
        let p = path_reflection();
        assert_eq!(p.set("star-m").unwrap().len(), 3);
    }
}
