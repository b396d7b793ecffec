//! Finite simplicial complexes and simplex-sets.
//!
//! A [`Complex`] is face-closed. A [`SimplexSet`] is an arbitrary union of
//! open simplices of a complex; it stands in for a triangulated definable
//! subset. Interior, closure and frontier are computed purely from the face
//! poset: the point-set of a simplex-set is open iff it is closed under
//! cofaces, and closed iff it is closed under faces.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A simplex named by its strictly increasing vertex sequence.
///
/// Simplices order by dimension first, then lexicographically; this is the
/// canonical order used for simplex indices in a [`Complex`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Simplex(Vec<VertexId>);

impl Simplex {
    /// Sorts and deduplicates the vertices; rejects the empty simplex.
    pub fn new<I: IntoIterator<Item = VertexId>>(vertices: I) -> Result<Self> {
        let mut v: Vec<VertexId> = vertices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        if v.is_empty() {
            return Err(Error::EmptySimplex);
        }
        Ok(Simplex(v))
    }

    pub fn from_ids(ids: &[u32]) -> Result<Self> {
        Self::new(ids.iter().map(|&i| VertexId(i)))
    }

    pub fn vertex(v: VertexId) -> Self {
        Simplex(vec![v])
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| other.contains(*v))
    }

    /// Codimension-one faces, the i-th omitting the i-th vertex.
    pub fn facets(&self) -> Vec<Simplex> {
        if self.0.len() == 1 {
            return Vec::new();
        }
        (0..self.0.len())
            .map(|skip| {
                Simplex(
                    self.0
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != skip)
                        .map(|(_, v)| *v)
                        .collect(),
                )
            })
            .collect()
    }

    /// All nonempty faces, including the simplex itself.
    pub fn faces(&self) -> Vec<Simplex> {
        let n = self.0.len();
        (1u64..(1 << n))
            .map(|mask| Simplex((0..n).filter(|i| mask & (1 << i) != 0).map(|i| self.0[i]).collect()))
            .collect()
    }
}

impl PartialOrd for Simplex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Simplex {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("]")
    }
}

/// A finite, face-closed simplicial complex.
#[derive(Clone, Debug)]
pub struct Complex {
    simplices: Vec<Simplex>,
    index: HashMap<Simplex, usize>,
    vertices: Vec<VertexId>,
    facets: Vec<Vec<usize>>,
    cofacets: Vec<Vec<usize>>,
}

impl PartialEq for Complex {
    fn eq(&self, other: &Self) -> bool {
        self.simplices == other.simplices
    }
}

impl Eq for Complex {}

impl Complex {
    /// Face-closure of the given simplices.
    pub fn from_simplices<I: IntoIterator<Item = Simplex>>(simplices: I) -> Self {
        let mut all = BTreeSet::new();
        for s in simplices {
            if all.contains(&s) {
                continue;
            }
            all.extend(s.faces());
        }
        Self::from_closed(all.into_iter().collect())
    }

    /// `sorted` must be face-closed and in canonical order.
    fn from_closed(sorted: Vec<Simplex>) -> Self {
        let index: HashMap<Simplex, usize> = sorted.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let vertices = sorted.iter().take_while(|s| s.dim() == 0).map(|s| s.0[0]).collect();
        let mut facets = vec![Vec::new(); sorted.len()];
        let mut cofacets = vec![Vec::new(); sorted.len()];
        for (i, s) in sorted.iter().enumerate() {
            for face in s.facets() {
                let j = index[&face];
                facets[i].push(j);
                cofacets[j].push(i);
            }
        }
        Complex {
            simplices: sorted,
            index,
            vertices,
            facets,
            cofacets,
        }
    }

    pub fn empty() -> Self {
        Self::from_closed(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    /// All simplices in canonical order; positions are simplex indices.
    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn simplex(&self, i: usize) -> &Simplex {
        &self.simplices[i]
    }

    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.index.contains_key(s)
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    /// Top dimension, `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.simplices.last().map(Simplex::dim)
    }

    /// Indices of the `k`-simplices, in canonical order.
    pub fn indices_of_dim(&self, k: usize) -> std::ops::Range<usize> {
        let start = self.simplices.partition_point(|s| s.dim() < k);
        let end = self.simplices.partition_point(|s| s.dim() <= k);
        start..end
    }

    pub fn facets_of(&self, i: usize) -> &[usize] {
        &self.facets[i]
    }

    pub fn cofacets_of(&self, i: usize) -> &[usize] {
        &self.cofacets[i]
    }

    pub fn maximal_simplices(&self) -> impl Iterator<Item = &Simplex> {
        self.simplices
            .iter()
            .enumerate()
            .filter(|&(i, _)| self.cofacets[i].is_empty())
            .map(|(_, s)| s)
    }

    /// The simplices of a face-closed set, as a complex on the same vertex ids.
    pub fn subcomplex(set: &SimplexSet) -> Result<Complex> {
        let closed = closure_set(set);
        if closed != *set {
            let missing = closed.difference(set).simplices().next().cloned();
            return Err(Error::UnknownSimplex(missing.expect("closure adds a face")));
        }
        Ok(Self::from_closed(set.simplices().cloned().collect()))
    }
}

/// Face-closure of the given vertex sets.
pub fn build_complex(maximal: &[Vec<u32>]) -> Result<Complex> {
    let simplices = maximal
        .iter()
        .map(|ids| Simplex::from_ids(ids))
        .collect::<Result<Vec<_>>>()?;
    Ok(Complex::from_simplices(simplices))
}

/// An arbitrary subset of the open simplices of a complex.
#[derive(Clone, Debug)]
pub struct SimplexSet {
    ambient: Arc<Complex>,
    members: BTreeSet<usize>,
}

impl PartialEq for SimplexSet {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members && (Arc::ptr_eq(&self.ambient, &other.ambient) || self.ambient == other.ambient)
    }
}

impl Eq for SimplexSet {}

impl SimplexSet {
    pub fn new<I: IntoIterator<Item = Simplex>>(ambient: &Arc<Complex>, simplices: I) -> Result<Self> {
        let members = simplices
            .into_iter()
            .map(|s| ambient.index_of(&s).ok_or(Error::UnknownSimplex(s)))
            .collect::<Result<BTreeSet<_>>>()?;
        Ok(SimplexSet {
            ambient: Arc::clone(ambient),
            members,
        })
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(ambient: &Arc<Complex>, indices: I) -> Self {
        let members: BTreeSet<usize> = indices.into_iter().collect();
        assert!(members.iter().all(|&i| i < ambient.len()), "simplex index out of range");
        SimplexSet {
            ambient: Arc::clone(ambient),
            members,
        }
    }

    /// Convenience constructor from raw vertex id lists.
    pub fn from_ids(ambient: &Arc<Complex>, simplices: &[&[u32]]) -> Result<Self> {
        let s = simplices
            .iter()
            .map(|ids| Simplex::from_ids(ids))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ambient, s)
    }

    pub fn empty(ambient: &Arc<Complex>) -> Self {
        Self::from_indices(ambient, [])
    }

    pub fn full(ambient: &Arc<Complex>) -> Self {
        Self::from_indices(ambient, 0..ambient.len())
    }

    pub fn ambient(&self) -> &Arc<Complex> {
        &self.ambient
    }

    pub fn same_ambient(&self, other: &Arc<Complex>) -> bool {
        Arc::ptr_eq(&self.ambient, other) || *self.ambient == **other
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.contains(&i)
    }

    pub fn contains_simplex(&self, s: &Simplex) -> bool {
        self.ambient.index_of(s).is_some_and(|i| self.contains(i))
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn simplices(&self) -> impl Iterator<Item = &Simplex> + '_ {
        self.members.iter().map(|&i| self.ambient.simplex(i))
    }

    fn with_members(&self, members: BTreeSet<usize>) -> Self {
        SimplexSet {
            ambient: Arc::clone(&self.ambient),
            members,
        }
    }

    pub fn union(&self, other: &SimplexSet) -> Self {
        self.with_members(self.members.union(&other.members).copied().collect())
    }

    pub fn intersection(&self, other: &SimplexSet) -> Self {
        self.with_members(self.members.intersection(&other.members).copied().collect())
    }

    pub fn difference(&self, other: &SimplexSet) -> Self {
        self.with_members(self.members.difference(&other.members).copied().collect())
    }

    pub fn complement(&self) -> Self {
        self.with_members((0..self.ambient.len()).filter(|i| !self.members.contains(i)).collect())
    }

    pub fn is_subset(&self, other: &SimplexSet) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn is_disjoint(&self, other: &SimplexSet) -> bool {
        self.members.is_disjoint(&other.members)
    }

    /// Face-closed sets are exactly the subcomplexes.
    pub fn is_closed(&self) -> bool {
        self.members
            .iter()
            .all(|&i| self.ambient.facets_of(i).iter().all(|j| self.members.contains(j)))
    }

    /// Coface-closed sets are exactly the open sets.
    pub fn is_open(&self) -> bool {
        self.members
            .iter()
            .all(|&i| self.ambient.cofacets_of(i).iter().all(|j| self.members.contains(j)))
    }
}

/// All faces of all members.
pub fn closure_set(a: &SimplexSet) -> SimplexSet {
    let x = &a.ambient;
    let mut members = a.members.clone();
    // Canonical order puts faces before cofaces, so one descending sweep suffices.
    for i in (0..x.len()).rev() {
        if members.contains(&i) {
            members.extend(x.facets_of(i).iter().copied());
        }
    }
    a.with_members(members)
}

/// Members all of whose cofaces are members.
pub fn interior_set(a: &SimplexSet) -> SimplexSet {
    let x = &a.ambient;
    let mut inside = vec![false; x.len()];
    for i in (0..x.len()).rev() {
        inside[i] = a.contains(i) && x.cofacets_of(i).iter().all(|&j| inside[j]);
    }
    a.with_members((0..x.len()).filter(|&i| inside[i]).collect())
}

/// `closure_set(a) \ interior_set(a)`.
pub fn frontier_set(a: &SimplexSet) -> SimplexSet {
    closure_set(a).difference(&interior_set(a))
}

fn sign_of_dim(d: usize) -> i64 {
    if d.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn euler_compact(x: &Complex) -> i64 {
    x.simplices().iter().map(|s| sign_of_dim(s.dim())).sum()
}

/// Combinatorial Euler characteristic: the signed count of members, no
/// closure taken.
pub fn euler_comb(a: &SimplexSet) -> i64 {
    a.simplices().map(|s| sign_of_dim(s.dim())).sum()
}

/// Closed star of a set of simplices: every face of every simplex having a
/// member as a face.
pub fn closed_star(a: &SimplexSet) -> SimplexSet {
    closure_set(&open_star(a))
}

/// Every simplex having a member as a face.
pub fn open_star(a: &SimplexSet) -> SimplexSet {
    let x = &a.ambient;
    let mut members = a.members.clone();
    for i in 0..x.len() {
        if members.contains(&i) {
            members.extend(x.cofacets_of(i).iter().copied());
        }
    }
    a.with_members(members)
}

/// Barycentric subdivision together with its carrier map.
#[derive(Clone, Debug)]
pub struct Subdivision {
    pub original: Arc<Complex>,
    pub complex: Arc<Complex>,
}

impl Subdivision {
    /// The old simplex a new vertex stands for. New vertex ids are the
    /// indices of old simplices.
    pub fn carrier_of_vertex(&self, v: VertexId) -> &Simplex {
        self.original.simplex(v.0 as usize)
    }

    /// The old open simplex containing a new open simplex: the top of its chain.
    pub fn carrier(&self, s: &Simplex) -> usize {
        s.vertices().last().expect("nonempty").0 as usize
    }

    /// Simplices of the subdivision whose point-set lies in the point-set of `a`.
    pub fn subdivide_set(&self, a: &SimplexSet) -> SimplexSet {
        assert!(a.same_ambient(&self.original));
        SimplexSet::from_indices(
            &self.complex,
            self.complex
                .simplices()
                .iter()
                .enumerate()
                .filter(|(_, s)| a.contains(self.carrier(s)))
                .map(|(i, _)| i),
        )
    }
}

/// Vertices of the result are the simplices of `x` (by index), simplices are
/// the chains of the face order.
pub fn barycentric_subdivide(x: &Arc<Complex>) -> Subdivision {
    fn flags(x: &Complex, top: usize, chain: &mut Vec<VertexId>, out: &mut Vec<Simplex>) {
        chain.push(VertexId(top as u32));
        if x.facets_of(top).is_empty() {
            out.push(Simplex::new(chain.iter().copied()).expect("nonempty chain"));
        } else {
            for &f in x.facets_of(top) {
                flags(x, f, chain, out);
            }
        }
        chain.pop();
    }
    let mut maximal_chains = Vec::new();
    for (i, _) in x.simplices().iter().enumerate() {
        if x.cofacets_of(i).is_empty() {
            flags(x, i, &mut Vec::new(), &mut maximal_chains);
        }
    }
    Subdivision {
        original: Arc::clone(x),
        complex: Arc::new(Complex::from_simplices(maximal_chains)),
    }
}

/// Staircase triangulation of `|X| × |Y|` with its vertex bookkeeping.
#[derive(Clone, Debug)]
pub struct Product {
    pub left: Arc<Complex>,
    pub right: Arc<Complex>,
    pub complex: Arc<Complex>,
    left_order: Vec<VertexId>,
    right_order: Vec<VertexId>,
}

impl Product {
    /// The (left, right) vertex pair behind a product vertex.
    pub fn pair(&self, v: VertexId) -> (VertexId, VertexId) {
        let n = self.right_order.len() as u32;
        (
            self.left_order[(v.0 / n) as usize],
            self.right_order[(v.0 % n) as usize],
        )
    }

    pub fn vertex_of(&self, l: VertexId, r: VertexId) -> Option<VertexId> {
        let i = self.left_order.iter().position(|&v| v == l)?;
        let j = self.right_order.iter().position(|&v| v == r)?;
        Some(VertexId((i * self.right_order.len() + j) as u32))
    }

    /// Projections of a product simplex: the open cell `σ × τ` containing it.
    pub fn carrier(&self, s: &Simplex) -> (Simplex, Simplex) {
        let (l, r): (Vec<_>, Vec<_>) = s.vertices().iter().map(|&v| self.pair(v)).unzip();
        (Simplex::new(l).expect("nonempty"), Simplex::new(r).expect("nonempty"))
    }

    /// `A₁ × A₂`: product simplices whose carrier cell is `σ × τ` with
    /// `σ ∈ A₁`, `τ ∈ A₂`.
    pub fn box_set(&self, a1: &SimplexSet, a2: &SimplexSet) -> SimplexSet {
        assert!(a1.same_ambient(&self.left) && a2.same_ambient(&self.right));
        SimplexSet::from_indices(
            &self.complex,
            self.complex
                .simplices()
                .iter()
                .enumerate()
                .filter(|(_, s)| {
                    let (l, r) = self.carrier(s);
                    a1.contains_simplex(&l) && a2.contains_simplex(&r)
                })
                .map(|(i, _)| i),
        )
    }
}

/// Staircase product with ascending vertex orders on both factors.
pub fn staircase_product(x: &Arc<Complex>, y: &Arc<Complex>) -> Product {
    staircase_product_with_order(x, y, x.vertices().to_vec(), y.vertices().to_vec())
        .expect("ascending orders are valid")
}

/// Staircase product with caller-chosen total orders on the vertices.
pub fn staircase_product_with_order(
    x: &Arc<Complex>,
    y: &Arc<Complex>,
    x_order: Vec<VertexId>,
    y_order: Vec<VertexId>,
) -> Result<Product> {
    let is_permutation = |order: &[VertexId], c: &Complex| {
        let mut sorted = order.to_vec();
        sorted.sort_unstable();
        sorted == c.vertices()
    };
    if !is_permutation(&x_order, x) || !is_permutation(&y_order, y) {
        return Err(Error::AmbientMismatch);
    }
    let rank =
        |order: &[VertexId]| -> HashMap<VertexId, usize> { order.iter().enumerate().map(|(i, &v)| (v, i)).collect() };
    let (rx, ry) = (rank(&x_order), rank(&y_order));
    let ny = y_order.len();
    let mut maximal = Vec::new();
    for s in x.maximal_simplices() {
        let mut sx: Vec<usize> = s.vertices().iter().map(|v| rx[v]).collect();
        sx.sort_unstable();
        for t in y.maximal_simplices() {
            let mut ty: Vec<usize> = t.vertices().iter().map(|v| ry[v]).collect();
            ty.sort_unstable();
            // Each monotone lattice path from (0,0) to (p,q) is a maximal chain.
            let (p, q) = (sx.len() - 1, ty.len() - 1);
            let mut path = vec![(0usize, 0usize)];
            staircase_paths(p, q, &mut path, &mut |chain| {
                maximal.push(
                    Simplex::new(chain.iter().map(|&(i, j)| VertexId((sx[i] * ny + ty[j]) as u32))).expect("nonempty"),
                );
            });
        }
    }
    Ok(Product {
        left: Arc::clone(x),
        right: Arc::clone(y),
        complex: Arc::new(Complex::from_simplices(maximal)),
        left_order: x_order,
        right_order: y_order,
    })
}

type Lattice = [(usize, usize)];

fn staircase_paths(p: usize, q: usize, path: &mut Vec<(usize, usize)>, emit: &mut dyn FnMut(&Lattice)) {
    let &(i, j) = path.last().expect("path starts at origin");
    if i == p && j == q {
        emit(path);
        return;
    }
    if i < p {
        path.push((i + 1, j));
        staircase_paths(p, q, path, emit);
        path.pop();
    }
    if j < q {
        path.push((i, j + 1));
        staircase_paths(p, q, path, emit);
        path.pop();
    }
}

/// Cycle on vertices `0..m`.
pub fn polygon(m: usize) -> Result<Complex> {
    if m < 3 {
        return Err(Error::PolygonTooSmall(m));
    }
    let edges: Vec<Vec<u32>> = (0..m as u32).map(|i| vec![i, (i + 1) % m as u32]).collect();
    build_complex(&edges)
}

/// Path `0 – 1 – … – n`.
pub fn path(n: usize) -> Complex {
    if n == 0 {
        return build_complex(&[vec![0]]).expect("point");
    }
    let edges: Vec<Vec<u32>> = (0..n as u32).map(|i| vec![i, i + 1]).collect();
    build_complex(&edges).expect("edges are nonempty")
}

fn next_free_vertex(x: &Complex) -> u32 {
    x.vertices().last().map_or(0, |v| v.0 + 1)
}

/// Cone with apex `max vertex + 1`.
pub fn cone(x: &Complex) -> Complex {
    let apex = VertexId(next_free_vertex(x));
    let mut simplices: Vec<Simplex> = vec![Simplex::vertex(apex)];
    for s in x.simplices() {
        simplices.push(s.clone());
        let mut with_apex = s.vertices().to_vec();
        with_apex.push(apex);
        simplices.push(Simplex::new(with_apex).expect("nonempty"));
    }
    Complex::from_simplices(simplices)
}

/// Poles of a suspension built by [`suspension`].
pub fn suspension_poles(x: &Complex) -> (VertexId, VertexId) {
    let n = next_free_vertex(x);
    (VertexId(n), VertexId(n + 1))
}

/// Adds poles `N = max+1` and `S = max+2` and cones every simplex to each.
pub fn suspension(x: &Complex) -> Complex {
    let (north, south) = suspension_poles(x);
    let mut simplices: Vec<Simplex> = vec![Simplex::vertex(north), Simplex::vertex(south)];
    for s in x.simplices() {
        simplices.push(s.clone());
        for pole in [north, south] {
            let mut v = s.vertices().to_vec();
            v.push(pole);
            simplices.push(Simplex::new(v).expect("nonempty"));
        }
    }
    Complex::from_simplices(simplices)
}

/// Disjoint union; vertices of `y` are shifted past those of `x`. Returns the
/// shift applied.
pub fn disjoint_union(x: &Complex, y: &Complex) -> (Complex, u32) {
    let shift = next_free_vertex(x);
    let moved = y
        .simplices()
        .iter()
        .map(|s| Simplex::new(s.vertices().iter().map(|v| VertexId(v.0 + shift))).expect("nonempty"));
    (
        Complex::from_simplices(x.simplices().iter().cloned().chain(moved)),
        shift,
    )
}
