//! Seeded random instances for property tests, the acceptance suite and the
//! benches. Every generator is deterministic given its RNG.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::{ratio, QuadExt};
use crate::complex::{closure_set, interior_set, open_star, Complex, Simplex, SimplexSet, VertexId};
use crate::index::admissible;
use crate::integral::StepFunction;
use crate::maps::{fixed_clusters, SimplicialMap};
use crate::riemann::ValueFunction;

fn closure_of(s: &Simplex) -> Vec<Simplex> {
    s.faces()
}

/// A random complex with at most `max_simplices` simplices (counting all
/// faces) on at most `max_vertices` vertices with sparse ids.
pub fn random_complex<R: Rng>(rng: &mut R, max_vertices: usize, max_dim: usize, max_simplices: usize) -> Complex {
    let nv = rng.gen_range(1..=max_vertices.max(1));
    let mut ids: Vec<u32> = (0..(2 * nv as u32 + 2)).collect();
    ids.shuffle(rng);
    let mut ids: Vec<u32> = ids[..nv].to_vec();
    ids.sort_unstable();
    let mut all: BTreeSet<Simplex> = BTreeSet::new();
    for _ in 0..3 * nv {
        let k = rng.gen_range(0..=max_dim.min(nv - 1));
        let verts: Vec<VertexId> = ids.choose_multiple(rng, k + 1).map(|&v| VertexId(v)).collect();
        let s = Simplex::new(verts).expect("nonempty");
        let faces = closure_of(&s);
        let added = faces.iter().filter(|f| !all.contains(*f)).count();
        if all.len() + added <= max_simplices {
            all.extend(faces);
        }
    }
    if all.is_empty() {
        all.insert(Simplex::vertex(VertexId(ids[0])));
    }
    Complex::from_simplices(all)
}

/// A random simplicial map found by backtracking; falls back to a constant
/// map when the search budget runs out. Self-maps favour fixed vertices.
pub fn random_map<R: Rng>(rng: &mut R, x: &Arc<Complex>, y: &Arc<Complex>) -> SimplicialMap {
    let self_map = Arc::ptr_eq(x, y) || x == y;
    let verts = x.vertices().to_vec();
    let maximal: Vec<Simplex> = x.maximal_simplices().cloned().collect();
    let keep_fixed = rng.gen_bool(0.5);
    let mut assignment: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    let mut budget = 4000usize;

    fn consistent(y: &Complex, maximal: &[Simplex], v: VertexId, assignment: &BTreeMap<VertexId, VertexId>) -> bool {
        maximal.iter().filter(|s| s.contains(v)).all(|s| {
            let image = s.vertices().iter().filter_map(|u| assignment.get(u).copied());
            y.contains(&Simplex::new(image).expect("v is assigned"))
        })
    }

    #[allow(clippy::too_many_arguments)]
    fn search<R: Rng>(
        rng: &mut R,
        i: usize,
        verts: &[VertexId],
        y: &Complex,
        maximal: &[Simplex],
        assignment: &mut BTreeMap<VertexId, VertexId>,
        budget: &mut usize,
        prefer_self: bool,
    ) -> bool {
        if i == verts.len() {
            return true;
        }
        let v = verts[i];
        let mut candidates = y.vertices().to_vec();
        candidates.shuffle(rng);
        if prefer_self && rng.gen_bool(0.6) {
            if let Some(p) = candidates.iter().position(|&c| c == v) {
                candidates.swap(0, p);
            }
        }
        for c in candidates {
            if *budget == 0 {
                return false;
            }
            *budget -= 1;
            assignment.insert(v, c);
            if consistent(y, maximal, v, assignment)
                && search(rng, i + 1, verts, y, maximal, assignment, budget, prefer_self)
            {
                return true;
            }
        }
        assignment.remove(&v);
        false
    }

    if search(
        rng,
        0,
        &verts,
        y,
        &maximal,
        &mut assignment,
        &mut budget,
        self_map && keep_fixed,
    ) {
        return SimplicialMap::new(Arc::clone(x), Arc::clone(y), assignment).expect("search keeps maps simplicial");
    }
    let target = *y.vertices().choose(rng).expect("nonempty target");
    let constant = verts.iter().map(|&v| (v, target)).collect();
    SimplicialMap::new(Arc::clone(x), Arc::clone(y), constant).expect("constant maps are simplicial")
}

pub fn random_self_map<R: Rng>(rng: &mut R, x: &Arc<Complex>) -> SimplicialMap {
    random_map(rng, x, x)
}

/// A copy of `x` with shuffled sparse vertex ids and the isomorphism onto it.
pub fn random_relabeling<R: Rng>(rng: &mut R, x: &Arc<Complex>) -> (Arc<Complex>, SimplicialMap) {
    let n = x.vertices().len() as u32;
    let mut fresh: Vec<u32> = (0..3 * n + 3).collect();
    fresh.shuffle(rng);
    let relabel: BTreeMap<VertexId, VertexId> =
        x.vertices().iter().zip(fresh).map(|(&v, w)| (v, VertexId(w))).collect();
    let y =
        Arc::new(Complex::from_simplices(x.maximal_simplices().map(|s| {
            Simplex::new(s.vertices().iter().map(|v| relabel[v])).expect("nonempty")
        })));
    let iso = SimplicialMap::new(Arc::clone(x), Arc::clone(&y), relabel).expect("relabeling is simplicial");
    (y, iso)
}

fn random_permutation<R: Rng>(rng: &mut R, n: usize) -> Vec<u32> {
    let mut p: Vec<u32> = (0..n as u32).collect();
    match rng.gen_range(0..4) {
        0 => {}
        1 => {
            // an involution: disjoint random swaps
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(rng);
            for pair in order.chunks(2) {
                if pair.len() == 2 && rng.gen_bool(0.7) {
                    p.swap(pair[0], pair[1]);
                }
            }
        }
        _ => p.shuffle(rng),
    }
    p
}

/// A complex closed under a random vertex permutation, with that
/// permutation as an automorphism.
pub fn random_automorphism<R: Rng>(
    rng: &mut R,
    max_vertices: usize,
    max_dim: usize,
    max_simplices: usize,
) -> SimplicialMap {
    loop {
        let nv = rng.gen_range(1..=max_vertices.max(1));
        let perm = random_permutation(rng, nv);
        let act =
            |s: &Simplex| Simplex::new(s.vertices().iter().map(|v| VertexId(perm[v.0 as usize]))).expect("nonempty");
        let mut all: BTreeSet<Simplex> = (0..nv as u32).map(|v| Simplex::vertex(VertexId(v))).collect();
        for _ in 0..2 * nv {
            let k = rng.gen_range(0..=max_dim.min(nv - 1));
            let ids: Vec<u32> = (0..nv as u32).collect();
            let seed = Simplex::new(ids.choose_multiple(rng, k + 1).map(|&v| VertexId(v))).expect("nonempty");
            let mut orbit = BTreeSet::new();
            let mut s = seed;
            while orbit.insert(s.clone()) {
                s = act(&s);
            }
            let mut next = all.clone();
            for o in &orbit {
                next.extend(o.faces());
            }
            if next.len() <= max_simplices {
                all = next;
            }
        }
        if all.len() > max_simplices {
            continue;
        }
        let x = Arc::new(Complex::from_simplices(all));
        return SimplicialMap::self_map_fn(&x, |v| perm[v as usize]).expect("orbit closure is invariant");
    }
}

/// Orbits of `f` on simplex indices (for automorphisms these partition X).
pub fn orbits(f: &SimplicialMap) -> Vec<Vec<usize>> {
    let n = f.source().len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            orbit.push(i);
            i = f.image_index(i);
        }
        out.push(orbit);
    }
    out
}

/// A union of random orbits of an automorphism, sometimes closed or opened.
pub fn random_invariant_set<R: Rng>(rng: &mut R, f: &SimplicialMap) -> SimplexSet {
    let x = f.source();
    let chosen = orbits(f).into_iter().filter(|_| rng.gen_bool(0.5)).flatten();
    let u = SimplexSet::from_indices(x, chosen);
    match rng.gen_range(0..4) {
        0 => closure_set(&u),
        1 => interior_set(&u),
        _ => u,
    }
}

/// A random simplex-set drawn from several shapes (arbitrary, open, closed).
pub fn random_set<R: Rng>(rng: &mut R, x: &Arc<Complex>) -> SimplexSet {
    let p = rng.gen_range(0.1..0.9);
    let raw = SimplexSet::from_indices(x, (0..x.len()).filter(|_| rng.gen_bool(p)));
    let small = SimplexSet::from_indices(x, (0..x.len()).filter(|_| rng.gen_bool(0.15)));
    let s = match rng.gen_range(0..5) {
        0 => raw,
        1 => open_star(&small),
        2 => closure_set(&small),
        3 => interior_set(&raw),
        _ => open_star(&small).complement(),
    };
    if rng.gen_bool(0.1) {
        SimplexSet::full(x)
    } else {
        s
    }
}

/// Rejection-samples [`random_set`] until the set is admissible for `f`.
pub fn random_admissible_set<R: Rng>(rng: &mut R, f: &SimplicialMap, tries: usize) -> Option<SimplexSet> {
    (0..tries)
        .map(|_| random_set(rng, f.source()))
        .find(|a| admissible(f, a).is_admissible())
}

/// Union-find groups of clusters whose open stars overlap.
fn star_groups(f: &SimplicialMap, keep: impl Fn(usize) -> bool) -> Vec<SimplexSet> {
    let x = f.source();
    let stars: Vec<SimplexSet> = fixed_clusters(f)
        .iter()
        .filter(|c| keep(c.simplices[0].index))
        .map(|c| open_star(&c.as_set(x)))
        .collect();
    let mut groups: Vec<SimplexSet> = Vec::new();
    for s in stars {
        let (touching, rest): (Vec<_>, Vec<_>) = groups.into_iter().partition(|g| !g.is_disjoint(&s));
        let merged = touching.iter().fold(s, |acc, g| acc.union(g));
        groups = rest;
        groups.push(merged);
    }
    groups
}

/// Disjoint admissible pieces whose interiors hold every fixed simplex of
/// `Å`, for an admissible `a`.
pub fn cluster_decomposition<R: Rng>(rng: &mut R, f: &SimplicialMap, a: &SimplexSet) -> Vec<SimplexSet> {
    let x = f.source();
    let interior = interior_set(a);
    let groups = star_groups(f, |i| interior.contains(i));
    let s = rng.gen_range(1..=3usize).min(groups.len().max(1));
    let mut pieces = vec![SimplexSet::empty(x); s];
    for g in groups {
        let j = rng.gen_range(0..s);
        pieces[j] = pieces[j].union(&g);
    }
    let fixed: BTreeSet<usize> = crate::maps::fixed_simplices(f).iter().map(|s| s.index).collect();
    // Fatten pieces with spare non-fixed simplices of A where that keeps
    // them admissible.
    let mut used = pieces.iter().fold(SimplexSet::empty(x), |acc, p| acc.union(p));
    for i in a.indices() {
        if used.contains(i) || fixed.contains(&i) || !rng.gen_bool(0.3) {
            continue;
        }
        let j = rng.gen_range(0..s);
        let grown = pieces[j].union(&SimplexSet::from_indices(x, [i]));
        if admissible(f, &grown).is_admissible() {
            pieces[j] = grown;
            used = used.union(&SimplexSet::from_indices(x, [i]));
        }
    }
    pieces
}

/// Random irrational value `a + b√2` with small dyadic-free rationals.
pub fn random_irrational<R: Rng>(rng: &mut R) -> QuadExt {
    let b = loop {
        let b = rng.gen_range(-6i64..=6);
        if b != 0 {
            break b;
        }
    };
    QuadExt::new(
        ratio(rng.gen_range(-12..=12), rng.gen_range(1..=4)),
        ratio(b, rng.gen_range(1..=3)),
    )
}

/// Random value in ℚ(√2), rational about half the time.
pub fn random_value<R: Rng>(rng: &mut R) -> QuadExt {
    if rng.gen_bool(0.5) {
        QuadExt::rational(ratio(rng.gen_range(-12..=12), rng.gen_range(1..=4)))
    } else {
        random_irrational(rng)
    }
}

/// A real integrable function for `f`: each group of clusters with
/// overlapping open stars gets one irrational value on its open star, and
/// the remaining simplices get arbitrary values.
pub fn random_value_function<R: Rng>(rng: &mut R, f: &SimplicialMap) -> ValueFunction {
    let x = f.source();
    let mut values: Vec<QuadExt> = (0..x.len()).map(|_| random_value(rng)).collect();
    for g in star_groups(f, |_| true) {
        let v = random_irrational(rng);
        for i in g.indices() {
            values[i] = v.clone();
        }
    }
    ValueFunction::new(x, values).expect("one value per simplex")
}

/// A step function whose supports are all admissible for `f`.
pub fn random_step_function<R: Rng>(rng: &mut R, f: &SimplicialMap, max_terms: usize) -> StepFunction {
    let x = f.source();
    let mut h = StepFunction::zero(x);
    for _ in 0..rng.gen_range(0..=max_terms) {
        if let Some(u) = random_admissible_set(rng, f, 20) {
            h.push(rng.gen_range(-5i64..=5), u).expect("same ambient");
        }
    }
    h
}

/// A different representation of the same function, built from moves that
/// keep every support admissible.
pub fn rerepresent<R: Rng>(rng: &mut R, h: &StepFunction, f: &SimplicialMap) -> StepFunction {
    let x = f.source();
    let mut terms: Vec<(BigInt, SimplexSet)> = h.terms().to_vec();
    for _ in 0..rng.gen_range(1..=4) {
        match rng.gen_range(0..5) {
            0 if !terms.is_empty() => {
                let j = rng.gen_range(0..terms.len());
                let a = BigInt::from(rng.gen_range(-4i64..=4));
                let (d, u) = terms[j].clone();
                terms[j] = (a.clone(), u.clone());
                terms.push((d - a, u));
            }
            1 => {
                if let Some(v) = random_admissible_set(rng, f, 10) {
                    let c = BigInt::from(rng.gen_range(1i64..=4));
                    terms.push((c.clone(), v.clone()));
                    terms.push((-c, v));
                }
            }
            2 if !terms.is_empty() => {
                let j = rng.gen_range(0..terms.len());
                let (d, u) = terms[j].clone();
                for _ in 0..10 {
                    let cut = random_set(rng, x);
                    let (v, w) = (u.intersection(&cut), u.difference(&cut));
                    if admissible(f, &v).is_admissible() && admissible(f, &w).is_admissible() {
                        terms[j] = (d.clone(), v);
                        terms.push((d, w));
                        break;
                    }
                }
            }
            3 if terms.len() >= 2 => {
                let (i, j) = (rng.gen_range(0..terms.len()), rng.gen_range(0..terms.len()));
                let ((d1, u1), (d2, u2)) = (terms[i].clone(), terms[j].clone());
                let joined = u1.union(&u2);
                if i != j && u1.is_disjoint(&u2) && admissible(f, &joined).is_admissible() {
                    terms[i] = (d1.clone(), joined);
                    terms[j] = (d2 - d1, u2);
                }
            }
            _ if terms.len() >= 2 => {
                let (i, j) = (rng.gen_range(0..terms.len()), rng.gen_range(0..terms.len()));
                if i != j && terms[i].1 == terms[j].1 {
                    let d = terms[j].0.clone();
                    terms[i].0 += d;
                    terms.remove(j);
                }
            }
            _ => {}
        }
    }
    terms.shuffle(rng);
    StepFunction::new(x, terms).expect("same ambient")
}
