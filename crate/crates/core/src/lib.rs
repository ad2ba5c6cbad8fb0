//! Exact construction and verification of orthogonal/symplectic R-matrices,
//! evaluation L-operators and the constraints they must satisfy.

pub mod checker;
pub mod coefficients;
pub mod element;
pub mod metric;
pub mod ncalgebra;
pub mod reps;
pub mod tensorspace;

pub use coefficients::{CentralPoly, PolyRing, Rational, Symbol};
pub use element::Element;
pub use metric::{AlgebraKind, Metric};
pub use ncalgebra::{AlgebraSpec, NCElement};
