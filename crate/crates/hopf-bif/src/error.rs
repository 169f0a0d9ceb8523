//! Error type shared by the whole crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Typed failures of the geometric and numeric operations.
///
/// Degenerate geometric configurations are reported as errors rather than
/// NaNs so that callers can draw the correct degenerate object (a pole maps
/// to a circle on the section plane, an isotropic quadratic form has no
/// preferred rotation, ...).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The angle on the reduced sphere is undefined at the poles
    /// `sigma3 = ±sigma0`. The section image is the circle
    /// `X2² + Y2² = sigma0 + sigma3` (a point for the south pole, the disk
    /// rim for the north pole).
    #[error("angle-undefined at pole: sigma3 = {sigma3} with sigma0 = {sigma0}; section image is the circle X2^2+Y2^2 = {}", sigma0 + sigma3)]
    PoleDegenerate { sigma0: f64, sigma3: f64 },

    /// `|cos i_mut| > 1`: no spatial orbit realises these eccentricities at
    /// the given angular-momentum deficit.
    #[error("infeasible-geometry: cos i_mut = {cos_i_mut} outside [-1, 1]")]
    InfeasibleGeometry { cos_i_mut: f64 },

    /// The maximum-inclination formula argument left `[-1, 1]`.
    #[error("infeasible-AMD: arccos argument {arg} outside [-1, 1]")]
    InfeasibleAmd { arg: f64 },

    /// `A = C` and `B = 0`: the quadratic form is isotropic, level curves are
    /// circles and the diagonalising rotation is indeterminate.
    #[error("isotropic-degenerate quadratic form (A = C, B = 0)")]
    IsotropicDegenerate,

    /// `A·C = 0`: no isolated critical points of the second kind exist.
    #[error("second-kind-degenerate: A*C = 0")]
    SecondKindDegenerate,

    /// The secular frequencies make the normal-form coefficient formulas
    /// singular (`a = 0` or `a + b = 0`).
    #[error("secular-frequency-degenerate: a = {a}, a + b = {a_plus_b}")]
    SecularFrequencyDegenerate { a: f64, a_plus_b: f64 },

    /// No sphere radius admits the requested energy.
    #[error("empty-domain: no sigma0 in (0, {sigma0_max}] attains energy {energy}")]
    EmptyDomain { energy: f64, sigma0_max: f64 },

    /// Adaptive step size underflowed during integration.
    #[error("step-failure: step size underflow at t = {t} (h = {h})")]
    StepFailure { t: f64, h: f64 },

    /// A trajectory violated the mutual-inclination feasibility bound.
    #[error("left-domain: mutual-inclination bound violated at t = {t} (cos i_mut = {cos_i_mut})")]
    LeftDomain { t: f64, cos_i_mut: f64 },

    /// A contour level lies outside the attainable energy range.
    #[error("empty-level: level {level} outside [{e_min}, {e_max}]")]
    EmptyLevel { level: f64, e_min: f64, e_max: f64 },

    /// The restricted Hamiltonian is constant: every point is critical.
    #[error("degenerate-constant Hamiltonian on the meridian")]
    DegenerateConstant,

    /// Physical parameters violate their invariants.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// A requested sphere radius lies outside the permissible range.
    #[error("infeasible sigma0 = {sigma0}: not in (0, {sigma0_max}]")]
    InfeasibleSigma0 { sigma0: f64, sigma0_max: f64 },

    /// No initial condition on the requested energy level was found.
    #[error("no feasible initial conditions at energy {energy}")]
    NoFeasibleInitialConditions { energy: f64 },
}
