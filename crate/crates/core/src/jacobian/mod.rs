//! Graded pieces of the Jacobian ideal `J` and of the saturated ideal `I`
//! of the singular scheme, and the invariants built from them.

pub mod analysis;
pub mod hodge;
pub mod instance;
pub mod piece;
pub mod torelli;

pub use analysis::{
    tabulated_s, Analysis, AnalysisOptions, Certificate, DualityReport, DualityRow, PValueReport,
    QuotientDims, TableRelation, DEFAULT_BUDGET,
};
pub use hodge::{EquisingularTangent, GenerationReport, HodgeGraded, Quotient};
pub use instance::HypersurfaceInstance;
pub use piece::{EvaluationMapPiece, GradedPiece};
pub use torelli::{Hypotheses, KernelComparison, TorelliOutcome, TorelliReport, Verdict};
