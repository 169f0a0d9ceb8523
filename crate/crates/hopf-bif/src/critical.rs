//! Shared vocabulary for critical points of the reduced flow.

use serde::{Deserialize, Serialize};

use crate::hopf::HopfState;

/// Kind of critical point: tangency of the energy surface with the sphere
/// (first kind, on the `sigma2 = 0` meridian) or degenerate transverse
/// intersection (second kind, a mirror pair off the meridian).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CpKind {
    Cpi,
    Cpii,
}

/// Tangency class of a first-kind critical point. An inner tangency (level
/// curve locally inside the meridian disk) is Floquet-unstable; an outer
/// tangency is Floquet-stable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tangency {
    Inner,
    Outer,
    Degenerate,
}

/// Linear stability of a periodic orbit, diagnosed on the reduced flow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stability {
    Stable,
    Unstable,
    Marginal,
}

/// A critical point of the reduced flow at fixed `sigma0`, i.e. a periodic
/// orbit of the full 2-DOF flow.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub location: HopfState,
    pub kind: CpKind,
    /// Tangency class; `None` for second-kind points.
    pub tangency: Option<Tangency>,
    pub stability: Stability,
    /// Energy `Z` at the point.
    pub energy: f64,
    pub sigma0: f64,
    /// Meridian angle for first-kind points (`sigma1 = sigma0 cos(theta)`,
    /// `sigma3 = sigma0 sin(theta)`), in `[-pi, pi)`.
    pub theta: Option<f64>,
}
