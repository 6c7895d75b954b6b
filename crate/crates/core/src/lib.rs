//! Exact invariants of 3-manifolds equipped with maps to the classifying space
//! of a finite crossed module, computed from colored Heegaard diagrams and
//! Hopf crossed-module coalgebras.

pub mod diagram;
pub mod group;
pub mod hopf;
pub mod invariant;
pub mod labeling;
pub mod linalg;
pub mod scalar;
pub mod xmod;

pub use diagram::{HeegaardDiagram, MoveDescriptor, Word};
pub use group::FiniteGroup;
pub use hopf::{HopfChiCoalgebra, HopfError, Integrals};
pub use labeling::{ChiLabeling, GaugeElement};
pub use linalg::Matrix;
pub use scalar::{char_divides, FieldDescriptor, Scalar, ScalarError};
pub use xmod::{CrossedModule, TwoGroup, Violation};
