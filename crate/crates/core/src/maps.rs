//! Simplicial maps and their fixed simplices.
//!
//! A point of an open simplex σ can only be fixed when the map permutes the
//! vertices of σ, so the fixed point set of a simplicial self-map is carried
//! by its fixed simplices. Face-connected groups of fixed simplices are the
//! connected components of the fixed point set ([`FixedCluster`]).

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::algebra::{rat, Rational};
use crate::complex::{Complex, Product, Simplex, SimplexSet, Subdivision, VertexId};
use crate::error::{Error, Result};

/// A vertex assignment between complexes that sends simplices to simplices.
#[derive(Clone, Debug)]
pub struct SimplicialMap {
    source: Arc<Complex>,
    target: Arc<Complex>,
    assignment: BTreeMap<VertexId, VertexId>,
}

impl PartialEq for SimplicialMap {
    fn eq(&self, other: &Self) -> bool {
        self.assignment == other.assignment && *self.source == *other.source && *self.target == *other.target
    }
}

impl Eq for SimplicialMap {}

/// Checks totality and the simplex-image invariant. Reports the first
/// violating simplex in canonical order.
pub fn validate_map(source: &Complex, target: &Complex, assignment: &BTreeMap<VertexId, VertexId>) -> Result<()> {
    if let Some(v) = assignment.keys().find(|v| !source.has_vertex(**v)) {
        return Err(Error::ForeignVertex(v.0));
    }
    for &v in source.vertices() {
        match assignment.get(&v) {
            None => return Err(Error::MissingVertex(v.0)),
            Some(w) if !target.has_vertex(*w) => return Err(Error::NotSimplicial(Simplex::vertex(v))),
            Some(_) => {}
        }
    }
    for s in source.simplices() {
        let image = Simplex::new(s.vertices().iter().map(|v| assignment[v])).expect("nonempty");
        if !target.contains(&image) {
            return Err(Error::NotSimplicial(s.clone()));
        }
    }
    Ok(())
}

impl SimplicialMap {
    pub fn new(source: Arc<Complex>, target: Arc<Complex>, assignment: BTreeMap<VertexId, VertexId>) -> Result<Self> {
        validate_map(&source, &target, &assignment)?;
        Ok(SimplicialMap {
            source,
            target,
            assignment,
        })
    }

    /// Self-map from `(vertex, image)` id pairs.
    pub fn self_map(x: &Arc<Complex>, pairs: &[(u32, u32)]) -> Result<Self> {
        let assignment = pairs.iter().map(|&(v, w)| (VertexId(v), VertexId(w))).collect();
        Self::new(Arc::clone(x), Arc::clone(x), assignment)
    }

    /// Self-map given by a function on vertex ids.
    pub fn self_map_fn(x: &Arc<Complex>, f: impl Fn(u32) -> u32) -> Result<Self> {
        let assignment = x.vertices().iter().map(|&v| (v, VertexId(f(v.0)))).collect();
        Self::new(Arc::clone(x), Arc::clone(x), assignment)
    }

    pub fn identity(x: &Arc<Complex>) -> Self {
        SimplicialMap {
            source: Arc::clone(x),
            target: Arc::clone(x),
            assignment: x.vertices().iter().map(|&v| (v, v)).collect(),
        }
    }

    pub fn source(&self) -> &Arc<Complex> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Complex> {
        &self.target
    }

    pub fn assignment(&self) -> &BTreeMap<VertexId, VertexId> {
        &self.assignment
    }

    pub fn apply(&self, v: VertexId) -> VertexId {
        self.assignment[&v]
    }

    pub fn is_self_map(&self) -> bool {
        Arc::ptr_eq(&self.source, &self.target) || *self.source == *self.target
    }

    /// Image simplex (possibly of lower dimension).
    pub fn image(&self, s: &Simplex) -> Simplex {
        Simplex::new(s.vertices().iter().map(|&v| self.apply(v))).expect("nonempty")
    }

    /// Target index of the image of the source simplex with index `i`.
    pub fn image_index(&self, i: usize) -> usize {
        self.target
            .index_of(&self.image(self.source.simplex(i)))
            .expect("validated map")
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &SimplicialMap) -> Result<SimplicialMap> {
        if *inner.target != *self.source {
            return Err(Error::AmbientMismatch);
        }
        let assignment = inner.assignment.iter().map(|(&v, &w)| (v, self.apply(w))).collect();
        Ok(SimplicialMap {
            source: Arc::clone(&inner.source),
            target: Arc::clone(&self.target),
            assignment,
        })
    }

    /// Restriction of a self-map to an invariant subcomplex.
    pub fn restrict(&self, sub: &Arc<Complex>) -> Result<SimplicialMap> {
        let mut assignment = BTreeMap::new();
        for &v in sub.vertices() {
            if !self.source.has_vertex(v) {
                return Err(Error::ForeignVertex(v.0));
            }
            assignment.insert(v, self.apply(v));
        }
        SimplicialMap::new(Arc::clone(sub), Arc::clone(sub), assignment)
    }

    /// Succeeds when the map is a vertex bijection whose inverse is simplicial.
    pub fn check_isomorphism(&self) -> Result<()> {
        let mut seen = HashMap::new();
        for (&v, &w) in &self.assignment {
            if seen.insert(w, v).is_some() {
                return Err(Error::NotIsomorphism(Simplex::vertex(v)));
            }
        }
        if seen.len() != self.target.vertices().len() || self.source.len() != self.target.len() {
            let witness = self
                .source
                .vertices()
                .first()
                .map_or_else(|| Simplex::vertex(VertexId(0)), |&v| Simplex::vertex(v));
            return Err(Error::NotIsomorphism(witness));
        }
        // Injective on vertices preserves dimension; equal counts give surjectivity.
        Ok(())
    }

    /// Inverse of an isomorphism.
    pub fn inverse(&self) -> Result<SimplicialMap> {
        self.check_isomorphism()?;
        let assignment = self.assignment.iter().map(|(&v, &w)| (w, v)).collect();
        SimplicialMap::new(Arc::clone(&self.target), Arc::clone(&self.source), assignment)
    }

    /// Succeeds when this is a self-map that permutes vertices and simplices.
    pub fn check_automorphism(&self) -> Result<()> {
        if !self.is_self_map() {
            return Err(Error::AmbientMismatch);
        }
        self.check_isomorphism().map_err(|e| match e {
            Error::NotIsomorphism(s) => Error::NotAutomorphism(s),
            other => other,
        })
    }

    /// Applies the affine extension to a point in barycentric coordinates.
    pub fn apply_affine(&self, point: &Point) -> Point {
        let mut out = BTreeMap::new();
        for (v, w) in point {
            *out.entry(self.apply(*v)).or_insert_with(Rational::zero) += w;
        }
        out.retain(|_, w: &mut Rational| !w.is_zero());
        out
    }
}

/// A point of a polyhedron in barycentric coordinates over vertex ids.
pub type Point = BTreeMap<VertexId, Rational>;

/// A simplex mapped onto itself, with the parity of the induced vertex
/// permutation (in ascending vertex order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedSimplex {
    pub index: usize,
    pub simplex: Simplex,
    pub sign: i64,
}

impl FixedSimplex {
    /// `(−1)^dim · sign`: this simplex's contribution to the chain trace.
    pub fn weight(&self) -> i64 {
        if self.simplex.dim().is_multiple_of(2) {
            self.sign
        } else {
            -self.sign
        }
    }
}

/// Positions of `f(v_i)` within `s`, or `None` unless `f` permutes `s`.
fn induced_permutation(f: &SimplicialMap, s: &Simplex) -> Option<Vec<usize>> {
    let verts = s.vertices();
    let mut perm = Vec::with_capacity(verts.len());
    let mut hit = vec![false; verts.len()];
    for &v in verts {
        let pos = verts.binary_search(&f.apply(v)).ok()?;
        if std::mem::replace(&mut hit[pos], true) {
            return None;
        }
        perm.push(pos);
    }
    Some(perm)
}

fn cycles(perm: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            cycle.push(i);
            i = perm[i];
        }
        out.push(cycle);
    }
    out
}

/// Parity of a permutation given as an image list: `+1` even, `−1` odd.
pub fn permutation_sign(perm: &[usize]) -> i64 {
    if (perm.len() - cycles(perm).len()).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// All simplices `σ` with `f(σ) = σ` (as vertex sets) and their signs.
pub fn fixed_simplices(f: &SimplicialMap) -> Vec<FixedSimplex> {
    assert!(f.is_self_map(), "fixed simplices need a self-map");
    f.source
        .simplices()
        .iter()
        .enumerate()
        .filter_map(|(index, s)| {
            induced_permutation(f, s).map(|perm| FixedSimplex {
                index,
                simplex: s.clone(),
                sign: permutation_sign(&perm),
            })
        })
        .collect()
}

/// A face-connected component of fixed simplices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedCluster {
    pub simplices: Vec<FixedSimplex>,
    /// Signed count `Σ (−1)^dim · sign` over the members.
    pub localized_index: i64,
    /// An exactly fixed point inside the first member.
    pub witness: Point,
}

impl FixedCluster {
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.simplices.iter().map(|s| s.index)
    }

    pub fn as_set(&self, ambient: &Arc<Complex>) -> SimplexSet {
        SimplexSet::from_indices(ambient, self.indices())
    }
}

/// The barycenter of the cycle barycenters of the permutation on `s`; lies
/// in the open simplex and is fixed by the affine extension.
fn cycle_barycenter(f: &SimplicialMap, s: &Simplex) -> Point {
    let perm = induced_permutation(f, s).expect("fixed simplex");
    let cyc = cycles(&perm);
    let ncycles = rat(cyc.len() as i64);
    let mut point = BTreeMap::new();
    for c in &cyc {
        let w = (&ncycles * rat(c.len() as i64)).recip();
        for &i in c {
            point.insert(s.vertices()[i], w.clone());
        }
    }
    point
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Fixed simplices grouped into face-connected clusters, ordered by their
/// smallest simplex index.
pub fn fixed_clusters(f: &SimplicialMap) -> Vec<FixedCluster> {
    let fixed = fixed_simplices(f);
    let pos: HashMap<usize, usize> = fixed.iter().enumerate().map(|(k, s)| (s.index, k)).collect();
    let mut parent: Vec<usize> = (0..fixed.len()).collect();
    for (k, s) in fixed.iter().enumerate() {
        for face in s.simplex.faces() {
            let Some(&j) = f.source.index_of(&face).and_then(|i| pos.get(&i)) else {
                continue;
            };
            let (a, b) = (find(&mut parent, k), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<FixedSimplex>> = BTreeMap::new();
    for (k, s) in fixed.iter().enumerate() {
        let root = find(&mut parent, k);
        groups.entry(root).or_default().push(s.clone());
    }
    groups
        .into_values()
        .map(|simplices| {
            let witness = cycle_barycenter(f, &simplices[0].simplex);
            FixedCluster {
                localized_index: simplices.iter().map(FixedSimplex::weight).sum(),
                witness,
                simplices,
            }
        })
        .collect()
}

/// Sum of the barycentric weights is one and every weight is positive.
pub fn is_interior_point_of(point: &Point, s: &Simplex) -> bool {
    point.len() == s.vertices().len()
        && s.vertices()
            .iter()
            .all(|v| point.get(v).is_some_and(|w| *w > Rational::zero()))
        && point.values().fold(Rational::zero(), |a, w| a + w) == Rational::one()
}

/// Source simplices whose image is a member of `a`.
pub fn preimage_set(g: &SimplicialMap, a: &SimplexSet) -> SimplexSet {
    assert!(a.same_ambient(&g.target), "set must live in the target");
    SimplexSet::from_indices(&g.source, (0..g.source.len()).filter(|&i| a.contains(g.image_index(i))))
}

/// `iso ∘ f ∘ iso⁻¹` on the target of `iso`.
pub fn conjugate(f: &SimplicialMap, iso: &SimplicialMap) -> Result<SimplicialMap> {
    if !f.is_self_map() || *iso.source != *f.source {
        return Err(Error::AmbientMismatch);
    }
    let inv = iso.inverse()?;
    iso.compose(&f.compose(&inv)?)
}

/// Image of a set under an isomorphism.
pub fn transport_set(iso: &SimplicialMap, a: &SimplexSet) -> Result<SimplexSet> {
    iso.check_isomorphism()?;
    Ok(SimplexSet::from_indices(
        &iso.target,
        a.indices().map(|i| iso.image_index(i)),
    ))
}

/// The map induced on barycentric subdivisions: the vertex standing for σ
/// goes to the vertex standing for `f(σ)`.
pub fn subdivide_map(f: &SimplicialMap, sd: &Subdivision) -> SimplicialMap {
    subdivide_map_between(f, sd, sd)
}

pub fn subdivide_map_between(f: &SimplicialMap, sd_source: &Subdivision, sd_target: &Subdivision) -> SimplicialMap {
    assert!(*sd_source.original == *f.source && *sd_target.original == *f.target);
    let assignment = (0..f.source.len())
        .map(|i| (VertexId(i as u32), VertexId(f.image_index(i) as u32)))
        .collect();
    SimplicialMap::new(
        Arc::clone(&sd_source.complex),
        Arc::clone(&sd_target.complex),
        assignment,
    )
    .expect("subdivision of a simplicial map is simplicial")
}

/// `f₁ × f₂` on a staircase product. Fails when some product simplex has an
/// image that is not a chain in the product order.
pub fn product_map(f1: &SimplicialMap, f2: &SimplicialMap, product: &Product) -> Result<SimplicialMap> {
    if !f1.is_self_map() || !f2.is_self_map() || *product.left != *f1.source || *product.right != *f2.source {
        return Err(Error::AmbientMismatch);
    }
    let x = &product.complex;
    let mut assignment = BTreeMap::new();
    for &v in x.vertices() {
        let (l, r) = product.pair(v);
        let image = product
            .vertex_of(f1.apply(l), f2.apply(r))
            .expect("factor maps land in the factors");
        assignment.insert(v, image);
    }
    for s in x.simplices() {
        let image = Simplex::new(s.vertices().iter().map(|v| assignment[v])).expect("nonempty");
        if !x.contains(&image) {
            return Err(Error::ProductNotSimplicial(s.clone()));
        }
    }
    Ok(SimplicialMap {
        source: Arc::clone(x),
        target: Arc::clone(x),
        assignment,
    })
}

/// Projection of a staircase product onto its left factor.
pub fn projection_left(product: &Product) -> SimplicialMap {
    let assignment = product
        .complex
        .vertices()
        .iter()
        .map(|&v| (v, product.pair(v).0))
        .collect();
    SimplicialMap::new(Arc::clone(&product.complex), Arc::clone(&product.left), assignment)
        .expect("projection is simplicial")
}
