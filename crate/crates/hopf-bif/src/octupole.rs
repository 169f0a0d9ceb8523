//! Octupole secular normal form built directly from physical parameters.
//!
//! For hierarchical systems (`a2 << a3`, moderate eccentricities) the secular
//! Hamiltonian truncated at octupole order and fourth order in the
//! eccentricities admits a normal form that is an exact quadratic in the Hopf
//! variables. The coefficients below are closed-form functions of the masses,
//! semi-major axes, gravitational constant and angular-momentum deficit;
//! additive constants are dropped throughout.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hopf::SystemParams;
use crate::quad::QuadHopfHamiltonian;

/// Normal-form coefficients of the octupole quadratic model, pre-rotation,
/// plus the two secular frequencies `a` and `b` entering them.
///
/// `atil = 0` identically for this truncation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OctupoleCoefficients {
    pub atil: f64,
    pub btil: f64,
    pub ctil: f64,
    pub d1til: f64,
    pub delta1til: f64,
    pub d3til: f64,
    pub delta3til: f64,
    /// Secular frequency conjugate to the inner eccentricity action.
    pub a: f64,
    /// Secular frequency conjugate to the outer eccentricity action.
    pub b: f64,
}

/// Secular frequencies `(a, b)` of the linear normal-form part.
pub fn secular_frequencies(p: &SystemParams) -> (f64, f64) {
    let SystemParams { m0, m2, m3, a2, a3, g, amd } = *p;
    let kepler = -3.0 * g.sqrt() / (4.0 * a3.powf(3.5) * m0.sqrt());
    let spatial = 3.0 * a2 * amd / (4.0 * a3.powi(4) * m0 * m2 * m3);
    let a = kepler * (2.0 * a2.powf(1.5) * a3.sqrt() * m3 + a2 * a2 * m2)
        + spatial * (6.0 * (a2 * a3).sqrt() * m2 * m3 + a2 * m2 * m2 + 5.0 * a3 * m3 * m3);
    let b = kepler * (a2.powf(1.5) * a3.sqrt() * m3 + 2.0 * a2 * a2 * m2)
        + spatial * (6.0 * (a2 * a3).sqrt() * m2 * m3 + 5.0 * a2 * m2 * m2 + a3 * m3 * m3);
    (a, b)
}

/// Magnitude scale of the frequency formulas (sum of the absolute values of
/// their two summands), used to detect cancellation-level degeneracy.
fn frequency_scale(p: &SystemParams) -> f64 {
    let SystemParams { m0, m2, m3, a2, a3, g, amd } = *p;
    let kepler = 3.0 * g.sqrt() / (4.0 * a3.powf(3.5) * m0.sqrt());
    let spatial = 3.0 * a2 * amd / (4.0 * a3.powi(4) * m0 * m2 * m3);
    kepler * (2.0 * a2.powf(1.5) * a3.sqrt() * m3 + a2 * a2 * m2)
        + spatial * (6.0 * (a2 * a3).sqrt() * m2 * m3 + a2 * m2 * m2 + 5.0 * a3 * m3 * m3)
}

/// Evaluate every normal-form coefficient at the given parameters.
///
/// Fails with [`Error::SecularFrequencyDegenerate`] when `a` or `a + b`
/// vanish to rounding level, where the formulas are singular.
pub fn octupole_coefficients(p: &SystemParams) -> Result<OctupoleCoefficients> {
    p.validate()?;
    let SystemParams { m0, m2, m3, a2, a3, g, amd } = *p;
    let (a, b) = secular_frequencies(p);
    let scale = frequency_scale(p);
    if a.abs() <= 1e-12 * scale || (a + b).abs() <= 1e-12 * scale {
        return Err(Error::SecularFrequencyDegenerate { a, a_plus_b: a + b });
    }

    // Shared building blocks of the printed expressions.
    let mass_sum_sq = (a2.sqrt() * m2 + a3.sqrt() * m3).powi(2);
    // (sqrt(a2/a3) m3/m2 + a2/(2 a3) + m3²/(2 m2²)), common to Ctil, D3til, Delta3til.
    let ratio_block = (a2 / a3).sqrt() * m3 / m2 + a2 / (2.0 * a3) + m3 * m3 / (2.0 * m2 * m2);
    // AMD-coupling prefactor of the 13/4-power family, common to Btil, D1til, Delta1til.
    let coupling = a2.powf(13.0 / 4.0) * mass_sum_sq
        / (256.0 * a3.powf(33.0 / 4.0) * m0 * m0 * m2.powf(1.5) * m3.sqrt() * (a + b))
        * (b / a + 3.0);

    let ctil = -2025.0 * a2.powf(4.5) * amd * mass_sum_sq
        / (256.0 * a3.powf(9.5) * m2 * m3 * m0 * m0 * (a + b))
        + 225.0 * a2 * a2 * amd / (64.0 * a3.powi(6) * m0 * m0 * a) * ratio_block
        + 3.0 * a2 / (8.0 * a3.powi(3) * m0)
            * (1.5 * (a2 / a3).sqrt() - a2 * m2 / (a3 * m3) + m3 / (4.0 * m2));

    let btil = 675.0 * amd * coupling
        + 5.0 * a2.powf(9.0 / 4.0) / (128.0 * a3.powf(17.0 / 4.0) * m0)
            * (57.0 * (a2 * m2 / (a3 * m3)).sqrt() - 15.0 * (m3 / m2).sqrt());

    let d1til = 2025.0 * amd * coupling
        - 105.0 * a2.powf(9.0 / 4.0) / (128.0 * a3.powf(17.0 / 4.0) * m0)
            * (9.0 * (a2 * m2 / (a3 * m3)).sqrt() + 7.0 * (m3 / m2).sqrt());

    let delta1til = -675.0 * amd * amd * coupling
        + 165.0 * a2.powf(9.0 / 4.0) * amd * (a2.sqrt() * m2 + a3.sqrt() * m3)
            / (32.0 * a3.powf(19.0 / 4.0) * m0 * m2.sqrt() * m3.sqrt())
        - 15.0 * a2.powf(11.0 / 4.0) * g.sqrt() * m2.sqrt() * m3.sqrt()
            / (16.0 * a3.powf(17.0 / 4.0) * m0.sqrt());

    let d3til = 675.0 * a2 * a2 * amd / (32.0 * a3.powi(6) * m0 * m0 * a) * ratio_block
        + 3.0 * a2 / (4.0 * a3.powi(3) * m0)
            * (3.0 * a2 * m2 / (a3 * m3) - 7.0 * m3 / (4.0 * m2));

    let delta3til = 3.0 * a2.powf(1.5) * g.sqrt() / (8.0 * a3.powf(3.5) * m0.sqrt())
        * (a2.sqrt() * m2 - a3.sqrt() * m3)
        - 225.0 * a2 * a2 * amd * amd / (32.0 * a3.powi(6) * m0 * m0 * a) * ratio_block
        + 3.0 * a2 * amd / (2.0 * a3.powi(3) * m0) * (m3 / m2 - a2 * m2 / (a3 * m3));

    let oc = OctupoleCoefficients {
        atil: 0.0,
        btil,
        ctil,
        d1til,
        delta1til,
        d3til,
        delta3til,
        a,
        b,
    };
    for v in [oc.btil, oc.ctil, oc.d1til, oc.delta1til, oc.d3til, oc.delta3til] {
        if !v.is_finite() {
            return Err(Error::SecularFrequencyDegenerate { a, a_plus_b: a + b });
        }
    }
    Ok(oc)
}

/// Structural copy of the coefficients into the quadratic-model type
/// (with `D(sigma0) = D1til sigma0 + Delta1til` etc.; constants dropped).
pub fn octupole_to_quad(oc: &OctupoleCoefficients) -> QuadHopfHamiltonian {
    QuadHopfHamiltonian::new(
        oc.atil,
        oc.btil,
        oc.ctil,
        oc.d1til,
        oc.delta1til,
        oc.d3til,
        oc.delta3til,
    )
}
