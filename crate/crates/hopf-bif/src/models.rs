//! Bundled reference models.
//!
//! Three quadratic truncations of secular normal forms for the same physical
//! system (a two-planet configuration with the angular-momentum deficit
//! below), used as regression fixtures across the crate:
//!
//! * [`elliptic_reference`] — the plain integrable part; its quadratic form
//!   yields ellipse-like level curves.
//! * [`hyperbolic_reference`] — the first-order secular normal form;
//!   hyperbola-like level curves.
//! * [`octupole_reference`] — the octupole normal form (pre-rotation), the
//!   model whose bifurcation thresholds are known in closed form.

use crate::quad::QuadHopfHamiltonian;

/// Angular-momentum deficit of the reference system; also the largest
/// attainable sphere radius `sigma0`.
pub const REFERENCE_AMD: f64 = 0.0162044;

/// Octupole normal-form quadratic model, before diagonalisation.
/// `A = 0` identically for this truncation.
pub fn octupole_reference() -> QuadHopfHamiltonian {
    QuadHopfHamiltonian::new(
        0.0,        // A
        -0.029019,  // B
        -0.0283636, // C
        -0.21118,   // D1
        0.0011798,  // Delta1
        -0.270077,  // D3
        0.00153399, // Delta3
    )
}

/// First-kind bifurcation thresholds of [`octupole_reference`] (roots of
/// `f1`), ascending.
pub const OCTUPOLE_CPI_SIGMA0: [f64; 2] = [0.00489265, 0.00655611];

/// Second-kind bifurcation thresholds of [`octupole_reference`] (roots of
/// `f2`), ascending.
pub const OCTUPOLE_CPII_SIGMA0: [f64; 2] = [0.00497142, 0.00623676];

/// Diagonalised coefficients of [`octupole_reference`] in the order
/// `(A, C, D1, Delta1, D3, Delta3)`, to six significant digits.
pub const OCTUPOLE_ROTATED: [f64; 6] =
    [0.00610734, -0.0344709, -0.089863, 0.000492281, -0.330852, 0.00187156];

/// Quadratic truncation of the plain integrable model (elliptic case,
/// `B² < 4AC`).
pub fn elliptic_reference() -> QuadHopfHamiltonian {
    QuadHopfHamiltonian::new(
        0.00212824,   // A
        -0.00186482,  // B
        0.00186469,   // C
        -0.0159745,   // D1
        0.000165361,  // Delta1
        -0.00532338,  // D3
        0.0000214817, // Delta3
    )
    .with_sigma0_part(0.0, -0.00214065, -0.108446)
}

/// Quadratic truncation of the first-order secular normal form (hyperbolic
/// case, `B² > 4AC`).
pub fn hyperbolic_reference() -> QuadHopfHamiltonian {
    QuadHopfHamiltonian::new(
        0.00912208,  // A
        0.00782589,  // B
        -0.0518887,  // C
        0.00634477,  // D1
        0.000425947, // Delta1
        -0.118017,   // D3
        0.00101564,  // Delta3
    )
    .with_sigma0_part(0.0, -0.0011129, -0.164326)
}
