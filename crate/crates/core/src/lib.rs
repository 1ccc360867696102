//! PL homology manifolds: certification, singular points and the
//! triangulation invariants built from links of codimension-4 simplices.

pub mod bockstein;
pub mod chain;
pub mod coefficients;
pub mod complex;
pub mod conical;
pub mod corpus;
pub mod cover;
pub mod css;
pub mod error;
pub mod group;
pub mod manifold;
pub mod matrix;
pub mod presentation;
pub mod quotient;
pub mod snf;
pub mod subdivision;
pub mod theta;

pub use bockstein::{bockstein, lift_exists, BocksteinResult};
pub use chain::{reduced_homology, BasisKind, ChainComplexData, ClassGroup, ClassHandle, Cochain, Direction};
pub use coefficients::{CoefficientSystem, GroupMap, PresentedGroup, ShortExactSequence};
pub use complex::{OrientedSimplex, Simplex, SimplicialComplex, VertexId};
pub use cover::{coherent_orientation, orientability_and_double_cover, DoubleCover};
pub use error::{AlgebraError, ComplexError, CssError, ManifoldError};
pub use group::GroupDescriptor;
pub use matrix::IntegerMatrix;
pub use snf::{smith_normal_form, SnfResult};
pub use subdivision::{barycentric_subdivision, dual_cone, DualCone, SubdividedComplex};
