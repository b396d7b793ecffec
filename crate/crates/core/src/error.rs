use thiserror::Error;

use crate::complex::Simplex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("empty simplex")]
    EmptySimplex,

    #[error("simplex {0} is not in the ambient complex")]
    UnknownSimplex(Simplex),

    #[error("polygon needs at least 3 vertices, got {0}")]
    PolygonTooSmall(usize),

    #[error("complexes do not match")]
    AmbientMismatch,

    #[error("vertex {0} has no image")]
    MissingVertex(u32),

    #[error("vertex {0} is not a vertex of the source complex")]
    ForeignVertex(u32),

    #[error("image of simplex {0} is not a simplex of the target")]
    NotSimplicial(Simplex),

    #[error("product map is not simplicial on the staircase: image of {0} is not a chain")]
    ProductNotSimplicial(Simplex),

    #[error("map is not a simplicial isomorphism (fails at {0})")]
    NotIsomorphism(Simplex),

    #[error("map is not an automorphism (fails at {0})")]
    NotAutomorphism(Simplex),

    #[error("set is not invariant: image of {0} is not a member")]
    NotInvariant(Simplex),

    #[error("inadmissible: fixed simplex {0} lies in the frontier")]
    Inadmissible(Simplex),

    #[error("term {term} is inadmissible: fixed simplex {simplex} lies in its frontier")]
    InadmissibleTerm { term: usize, simplex: Simplex },

    #[error("closure of the invariant set is not invariant under the map")]
    ClosureNotInvariant,

    #[error("oracle could not separate fixed clusters within {0} subdivision rounds")]
    BudgetExceeded(usize),

    #[error("function is not real integrable: {0}")]
    NotIntegrable(String),

    #[error("map is not index-strict: clusters of both signs")]
    NotIndexStrict,

    #[error("function is not constant on the fixed cluster containing {0}")]
    NonConstantCluster(Simplex),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
