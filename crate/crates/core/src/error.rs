use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("empty complex: at least one facet is required")]
    EmptyComplex,
    #[error("empty facet")]
    EmptyFacet,
    #[error("malformed facet (duplicate vertex): {0}")]
    DuplicateVertex(String),
    #[error("duplicate vertex token {0}")]
    DuplicateToken(String),
    #[error("simplex not in complex: {0}")]
    MissingSimplex(String),
    #[error("vertex token collision: {0}")]
    TokenCollision(String),
    #[error("not a pseudomanifold: {0}")]
    NotAPseudomanifold(String),
    #[error("orientation cover is not a simplicial complex: {0}")]
    CoverNotSimplicial(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("not a cocycle: coboundary is nonzero in degree {0}")]
    NotACocycle(usize),
    #[error("not a cycle: boundary is nonzero in degree {0}")]
    NotACycle(usize),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("twisted coefficients need an orientation double cover")]
    MissingCover,
    #[error("twist automorphism is not an involution")]
    TwistNotInvolution,
    #[error("twist does not preserve the relation module")]
    TwistBreaksRelations,
    #[error("group map is inconsistent with the presentations: {0}")]
    BadGroupMap(String),
    #[error("no lift possible: {0}")]
    NoLift(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ManifoldError {
    #[error("complex is not pure")]
    NotPure,
    #[error("complex is disconnected")]
    Disconnected,
    #[error("invalid precondition: {0}")]
    Precondition(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CssError {
    #[error("not a closed homology manifold: {0}")]
    NotAManifold(String),
    #[error("link of {0} is not a homology 3-sphere")]
    NotSphereLink(String),
    #[error("theta model has no generator for link class {0} and auto-extension is disabled")]
    MissingClass(String),
    #[error("no Rokhlin value assigned to generator {0}")]
    MissingRok(String),
    #[error("invalid theta model: {0}")]
    BadModel(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Manifold(#[from] ManifoldError),
}
