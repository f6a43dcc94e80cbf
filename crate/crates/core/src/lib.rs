//! Geometry kernel for space-like surfaces in Robertson-Walker spacetimes
//! `L⁴₁(f, c) = I ×_f Q³_c`.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only numerics:
//!
//! - [`ambient`]: the warped metric `-dt² + f(t)² g_c`, its Christoffel
//!   symbols and covariant derivative, causal classification.
//! - [`surface`]: immersed patches, jets, adapted frames, second fundamental
//!   form, normal connection and the derived point quantities.
//! - [`analysis`]: residual reports for the class-A, minimality,
//!   η-parallel and eigenvector predicates, plus the frame identities.
//! - [`families`]: constructors for the cylinder, spherical-curve and
//!   revolution families together with the quadrature and ODE machinery
//!   they need.
//!
//! IO, the verification harness and the CLI live in the `rwlab` crate.

#![no_std]

extern crate alloc;

pub mod ambient;
pub mod analysis;
mod error;
pub mod families;
pub mod fd;
pub mod ode;
pub mod quadrature;
pub mod surface;

pub use ambient::{
    AmbientPoint, AmbientSpec, AmbientVector, BaseCurvature, CausalCharacter, ChristoffelTable,
    Interval, VectorFieldJet, WarpingFunction, WarpingKind,
};
pub use analysis::{Expectation, Grid, ResidualReport, ResidualSummary};
pub use error::GeometryError;
pub use families::{Family, FamilySpec, IntegratorSettings};
pub use surface::{
    AdaptedFrame, FdConfig, FrameRoute, FundamentalData, GeometryOptions, Immersion,
    InducedMetric, PointGeometry, Rect, SurfaceJet2,
};

/// Shorthand used throughout the crate.
pub type Result<T> = core::result::Result<T, GeometryError>;

/// Guard on `-1 + f²Ẽ` below which the adapted frame is considered degenerate.
pub const FRAME_EPSILON: f64 = 1e-8;
