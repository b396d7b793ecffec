//! Exact fixed point calculus on finite simplicial complexes.
//!
//! Simplicial self-maps, their fixed simplices and clusters, the classical
//! and combinatorial Lefschetz numbers, the combinatorial fixed point index,
//! integration of step functions against that index, and dyadic Riemann
//! sums of ℚ(√2)-valued functions. All arithmetic is exact.
//!
//! ```
//! use fixcalc_core::{catalog, comb_lefschetz, lefschetz_homology};
//!
//! let inst = catalog::sphere_reflection(6).unwrap();
//! assert_eq!(lefschetz_homology(&inst.map), 0);
//! assert_eq!(comb_lefschetz(&inst.map, inst.set("U").unwrap()).unwrap(), 6);
//! ```

pub mod algebra;
pub mod catalog;
pub mod complex;
pub mod error;
pub mod gen;
pub mod homology;
pub mod index;
pub mod integral;
pub mod io;
pub mod maps;
pub mod riemann;

pub use algebra::{MatrixQ, QuadExt, Rational};
pub use complex::{
    barycentric_subdivide, closure_set, euler_comb, euler_compact, frontier_set, interior_set, open_star,
    staircase_product, Complex, Product, Simplex, SimplexSet, Subdivision, VertexId,
};
pub use error::{Error, Result};
pub use homology::{betti, lefschetz_homology, lefschetz_hopf};
pub use index::{admissible, comb_index, comb_lefschetz, index_oracle, AdmissibleQuery, Verdict};
pub use integral::{integrate_levels, integrate_step, StepFunction};
pub use maps::{fixed_clusters, fixed_simplices, FixedCluster, FixedSimplex, SimplicialMap};
pub use riemann::{
    is_index_strict, is_real_integrable, riemann_limit, riemann_lower, riemann_upper, IndexStrictness, ValueFunction,
};
