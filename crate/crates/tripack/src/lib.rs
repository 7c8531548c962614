//! Certified verification that the compact ternary circle packing with circle
//! sizes 1, r ~ 0.834 and s ~ 0.651 maximizes the planar packing density.
//!
//! The verification runs in five stages, each producing interval-certified
//! evidence that goes into a machine-readable certificate:
//!
//! 1. [`roots`] — enclosures of the algebraic constants r, s and the target
//!    density, checked against their defining integer polynomials;
//! 2. [`potentials`] — the 18-entry vertex-potential table solved from the
//!    tight-triangle and corona equations, with residual checks;
//! 3. [`corona`] — exhaustive search over vertex coronas establishing lower
//!    bounds for the deviation coefficients m_1, m_r, m_s;
//! 4. [`tightcheck`] — derivative bounds certifying the local inequality
//!    E >= U on epsilon-tight triangles;
//! 5. [`prover`] — branch-and-bound certification of E >= U over every
//!    triangle that can appear in an FM-triangulation of a saturated packing.
//!
//! Run `cargo run -- all --report cert.json` for the full pipeline, or see
//! the `examples/` directory for one runnable example per stage.

pub mod corona;
pub mod geometry;
pub mod interval;
pub mod potentials;
pub mod prover;
pub mod report;
pub mod roots;
pub mod tightcheck;

pub use interval::{Cmp, Interval, Precision};
// pub use report::{RunConfig, VerificationReport};

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("division by an interval containing zero")]
    DivisionByIntervalContainingZero,
    #[error("input interval lies wholly outside the function domain")]
    EmptyDomainIntersection,
    #[error("polynomial signs at the bracket endpoints cannot be certified opposite")]
    NoSignChange,
    #[error("box is certainly infeasible as a triangle")]
    InfeasibleBox,
    #[error("support-circle system has no real solution")]
    NoRealSolution,
    #[error("support-circle root selection cannot be certified at this width")]
    IndeterminateRoot,
    #[error("potential equation system inconsistent: {0}")]
    InconsistentSystem(String),
    #[error("flat corona neither whitelisted nor certified nonnegative: {0}")]
    FlatCoronaUnresolved(String),
    #[error("floor argument enclosure straddles an integer")]
    IndeterminateFloor,
    #[error("epsilon-tight box violates an edge-length threshold: {0}")]
    ThresholdConflict(String),
    #[error("stage prerequisite missing: {0}")]
    MissingPrerequisite(String),
    #[error("local inequality fails: counterexample box in class {class}: {lengths:?}")]
    CounterexampleFound { class: String, lengths: [f64; 6] },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid hex-float literal: {0}")]
    InvalidHexFloat(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
