//! Numerical toolkit for the phase-space structure of the nonlinear
//! Lindemann mechanism of unimolecular decay.
//!
//! The dimensionless planar reduction
//!
//! ```text
//! x' = -x^2 + eps*x*y,    y' = x^2 - (1 + eps*x)*y
//! ```
//!
//! has a rich phase-plane structure: a family of isoclines, a unique slow
//! manifold squeezed between the horizontal isocline and its thinnest
//! antifunnel boundary, a curve of inflection points that doubles as the
//! slow tangent manifold, Taylor-series behaviour at the origin, a power
//! series at infinity, and Lambert-W long-time asymptotics. This crate
//! computes all of those objects and machine-checks the qualitative
//! statements about them.
//!
//! Modules:
//! - [`kinetics`]: closed-form curves, slopes and eigenstructure
//! - [`series`]: coefficient recurrences at the origin and at infinity
//! - [`longtime`]: Lambert W, the comparison solution and leading-order decay
//! - [`integrate`]: adaptive RK45 for the planar and scalar systems
//! - [`manifold`]: slow-manifold computation with rigorous brackets
//! - [`verify`]: machine checks of trapping, attraction, concavity, fences

pub mod error;
pub mod integrate;
pub mod kinetics;
pub mod longtime;
pub mod manifold;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
pub use integrate::{
    integrate_planar, integrate_planar_quad, integrate_scalar, Direction, EventKind,
    IntegratorConfig, ScalarCurve, SolveStatus, Trajectory,
};
pub use kinetics::{
    IsoclineKind, Nondimensionalized, Params, PhasePoint, RegionLabel, SlopeValue, TangentData,
};
pub use manifold::{SlowManifold, SlowManifoldTable};
pub use series::{AsymptoticEstimate, InfinitySeries, OriginSeries};
pub use verify::{CheckReport, ConcavityVerdict, FenceSide};
