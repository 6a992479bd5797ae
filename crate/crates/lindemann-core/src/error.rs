//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The scalar slope field is singular: the point lies on the vertical
    /// isocline or on the y-axis.
    #[error("slope field denominator vanishes at ({x}, {y})")]
    DenominatorZero { x: f64, y: f64 },

    /// K(c) = 1/(1+c) has a pole at c = -1.
    #[error("K(c) is undefined at c = -1")]
    PoleAtMinusOne,

    /// The isocline for slope `c` has a vertical asymptote at this x.
    #[error("isocline for slope {c} has a pole at x = {x}")]
    PoleAtX { c: f64, x: f64 },

    #[error("{what} = {value} is outside its domain")]
    OutOfDomain { what: &'static str, value: f64 },

    #[error("rate constant {name} = {value} must be positive")]
    NonpositiveRate { name: &'static str, value: f64 },

    /// The inflection cubic's discriminant is numerically indistinguishable
    /// from zero, so the three-real-root structure cannot be resolved.
    #[error("inflection cubic at x = {x} is numerically degenerate (discriminant {discriminant:e})")]
    DegenerateRoots { x: f64, discriminant: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("step budget exhausted at t = {t}")]
    MaxSteps { t: f64 },

    #[error("state became non-finite at t = {t}")]
    Diverged { t: f64 },

    /// Scalar integration came within tolerance of the vertical isocline
    /// (or of x = 0), where the slope field is singular.
    #[error("scalar integration approached a singularity near x = {x}")]
    SingularityApproached { x: f64 },

    /// A slow-manifold estimate left its rigorous bracket by more than the
    /// method's own error bound.
    #[error("slow-manifold value {value} at x = {x} violates bracket ({lower}, {upper}) by {excess:e}")]
    BracketViolation {
        x: f64,
        value: f64,
        lower: f64,
        upper: f64,
        excess: f64,
    },

    /// Bisection could not classify a candidate as above or below the slow
    /// manifold within the step budget.
    #[error("slow-manifold bisection undecided at x = {x}")]
    Undecided { x: f64 },

    /// The piecewise slow-manifold representation disagrees across a seam.
    #[error("seam mismatch {mismatch:e} at x = {x} exceeds tolerance {tol:e}")]
    SeamMismatch { x: f64, mismatch: f64, tol: f64 },
}
