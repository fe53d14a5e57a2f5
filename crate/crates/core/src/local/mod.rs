//! Local analysis at a declared singular point.

pub mod ade;
pub mod jet;
pub mod tjurina;

pub use ade::{classify_ade, AdeType, SingularityRecord};
pub use jet::{taylor_jet, verify_singular, AffinePoint, LocalPoly};
pub use tjurina::{local_algebra, milnor_number, tjurina_number, AlgebraKind, LocalAlgebra};
