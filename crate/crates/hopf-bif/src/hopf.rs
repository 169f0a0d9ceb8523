//! Hopf reduction of the 1:1-resonant phase space.
//!
//! The quadratic combinations
//!
//! ```text
//! sigma1 = X2*X3 + Y2*Y3
//! sigma2 = Y2*X3 - Y3*X2
//! sigma3 = (X2² + Y2² - X3² - Y3²)/2
//! sigma0 = (X2² + Y2² + X3² + Y3²)/2
//! ```
//!
//! satisfy the Poisson algebra `{sigma_i, sigma_j} = -2 eps_ijk sigma_k` with
//! Casimir `sigma0`, and `sigma1² + sigma2² + sigma3² = sigma0²`: for fixed
//! `sigma0` the reduced phase space is the 2-sphere of radius `sigma0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::SCALE_FLOOR;
use crate::poly::PolyHopfHamiltonian;

/// Canonical Poincaré coordinates/momenta of the two planets, in
/// action^(1/2) units. `X_j` is the coordinate and `Y_j` its conjugate
/// momentum; `W_j = (X_j² + Y_j²)/2` is the eccentricity-like action.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoincareState {
    pub x2: f64,
    pub y2: f64,
    pub x3: f64,
    pub y3: f64,
}

impl PoincareState {
    pub fn new(x2: f64, y2: f64, x3: f64, y3: f64) -> Self {
        Self { x2, y2, x3, y3 }
    }

    pub fn w2(&self) -> f64 {
        0.5 * (self.x2 * self.x2 + self.y2 * self.y2)
    }

    pub fn w3(&self) -> f64 {
        0.5 * (self.x3 * self.x3 + self.y3 * self.y3)
    }
}

/// Angle-action variables of the reduced plane:
/// `psi = w2 - w3`, `phi = w2 + w3`, `Gamma = (W2 - W3)/2`, `J = (W2 + W3)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedActionAngle {
    pub psi: f64,
    pub phi: f64,
    pub gamma: f64,
    pub j: f64,
}

impl ReducedActionAngle {
    /// The corresponding on-sphere point (`phi` is a gauge angle of the full
    /// flow and does not enter).
    pub fn to_hopf(&self) -> HopfState {
        let q = 2.0 * (self.j * self.j - self.gamma * self.gamma).max(0.0).sqrt();
        HopfState {
            sigma0: 2.0 * self.j,
            sigma1: q * self.psi.cos(),
            sigma2: -q * self.psi.sin(),
            sigma3: 2.0 * self.gamma,
        }
    }
}

/// A point of the reduced phase space. On the sphere,
/// `sigma1² + sigma2² + sigma3² = sigma0²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HopfState {
    pub sigma0: f64,
    pub sigma1: f64,
    pub sigma2: f64,
    pub sigma3: f64,
}

impl HopfState {
    pub fn new(sigma0: f64, sigma1: f64, sigma2: f64, sigma3: f64) -> Self {
        Self { sigma0, sigma1, sigma2, sigma3 }
    }

    /// Point of the `sigma2 = 0` meridian at angle `theta`
    /// (`sigma1 = sigma0 cos(theta)`, `sigma3 = sigma0 sin(theta)`).
    pub fn on_meridian(sigma0: f64, theta: f64) -> Self {
        Self::new(sigma0, sigma0 * theta.cos(), 0.0, sigma0 * theta.sin())
    }

    /// `sigma1² + sigma2² + sigma3² - sigma0²`.
    pub fn sphere_residual(&self) -> f64 {
        self.sigma1 * self.sigma1 + self.sigma2 * self.sigma2 + self.sigma3 * self.sigma3
            - self.sigma0 * self.sigma0
    }

    /// Sphere-membership check with a mixed relative/absolute tolerance.
    pub fn is_on_sphere(&self, tol: f64) -> bool {
        self.sphere_residual().abs() <= tol * (self.sigma0 * self.sigma0).max(SCALE_FLOOR)
    }

    /// Reduced angle-action variables. `phi` is not observable from the
    /// reduced state and is returned as zero.
    pub fn to_action_angle(&self) -> Result<ReducedActionAngle> {
        let q = self.sigma0 * self.sigma0 - self.sigma3 * self.sigma3;
        if q <= 0.0 {
            return Err(Error::PoleDegenerate { sigma0: self.sigma0, sigma3: self.sigma3 });
        }
        // sigma1 = sqrt(q) cos(psi), sigma2 = -sqrt(q) sin(psi).
        let psi = f64::atan2(-self.sigma2, self.sigma1);
        Ok(ReducedActionAngle {
            psi,
            phi: 0.0,
            gamma: 0.5 * self.sigma3,
            j: 0.5 * self.sigma0,
        })
    }
}

/// Map a Poincaré state to the reduced sphere.
pub fn poincare_to_hopf(p: &PoincareState) -> HopfState {
    let r2 = p.x2 * p.x2 + p.y2 * p.y2;
    let r3 = p.x3 * p.x3 + p.y3 * p.y3;
    HopfState {
        sigma0: 0.5 * (r2 + r3),
        sigma1: p.x2 * p.x3 + p.y2 * p.y3,
        sigma2: p.y2 * p.x3 - p.y3 * p.x2,
        sigma3: 0.5 * (r2 - r3),
    }
}

/// Section-plane image `(X2, Y2)` of a reduced point, using the `Y3 = 0`,
/// `X3 = +sqrt(2 sigma0 - X2² - Y2²)` representative.
///
/// Fails with [`Error::PoleDegenerate`] at `sigma3 = ±sigma0`, where the
/// angle `psi` is undefined; the caller can draw the degenerate image
/// `X2² + Y2² = sigma0 + sigma3` instead (disk rim for the north pole, the
/// origin for the south pole).
pub fn hopf_to_section_plane(h: &HopfState) -> Result<(f64, f64)> {
    let denom = h.sigma0 - h.sigma3;
    // Treat near-pole states as degenerate: both W3 -> 0 (north) and
    // W2 -> 0 (south) leave psi numerically meaningless.
    let pole_tol = 1e-14 * h.sigma0.max(SCALE_FLOOR);
    if denom <= pole_tol || h.sigma0 + h.sigma3 <= pole_tol {
        return Err(Error::PoleDegenerate { sigma0: h.sigma0, sigma3: h.sigma3 });
    }
    let s = denom.sqrt();
    Ok((h.sigma1 / s, h.sigma2 / s))
}

/// Re-embed a section-plane point into 4-D Poincaré variables on the
/// `Y3 = 0`, `X3 >= 0` branch of the sphere of radius `sigma0`.
pub fn section_plane_to_poincare(x2: f64, y2: f64, sigma0: f64) -> Result<PoincareState> {
    let x3_sq = 2.0 * sigma0 - x2 * x2 - y2 * y2;
    if x3_sq < 0.0 {
        return Err(Error::InfeasibleSigma0 { sigma0, sigma0_max: 0.5 * (x2 * x2 + y2 * y2) });
    }
    Ok(PoincareState::new(x2, y2, x3_sq.sqrt(), 0.0))
}

/// Right-hand side of the reduced flow on the sphere,
/// `(dsigma1/dt, dsigma2/dt, dsigma3/dt)`.
///
/// The signs come from the bracket `{sigma_i, sigma_j} = -2 eps_ijk sigma_k`:
///
/// ```text
/// sigma1' =  2 sigma2 dZ/dsigma3
/// sigma2' =  2 (sigma3 dZ/dsigma1 - sigma1 dZ/dsigma3)
/// sigma3' = -2 sigma2 dZ/dsigma1
/// ```
///
/// The field is tangent to the sphere: `sigma · sigma' = 0` identically.
pub fn reduced_flow_rhs(z: &PolyHopfHamiltonian, h: &HopfState) -> [f64; 3] {
    let (d1, d3) = z.grad13(h.sigma0, h.sigma1, h.sigma3);
    [
        2.0 * h.sigma2 * d3,
        2.0 * (h.sigma3 * d1 - h.sigma1 * d3),
        -2.0 * h.sigma2 * d1,
    ]
}

/// Physical parameters of the secular three-body system.
///
/// All quantities are dimensionless in a unit system consistent with the
/// supplied gravitational constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub m0: f64,
    pub m2: f64,
    pub m3: f64,
    pub a2: f64,
    pub a3: f64,
    #[serde(rename = "G")]
    pub g: f64,
    #[serde(rename = "AMD")]
    pub amd: f64,
}

impl SystemParams {
    pub fn try_new(m0: f64, m2: f64, m3: f64, a2: f64, a3: f64, g: f64, amd: f64) -> Result<Self> {
        let p = Self { m0, m2, m3, a2, a3, g, amd };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("m0", self.m0),
            ("m2", self.m2),
            ("m3", self.m3),
            ("a2", self.a2),
            ("a3", self.a3),
            ("G", self.g),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParams(format!("{name} must be strictly positive, got {v}")));
            }
        }
        if self.a2 >= self.a3 {
            return Err(Error::InvalidParams(format!(
                "a2 must be smaller than a3, got a2 = {}, a3 = {}",
                self.a2, self.a3
            )));
        }
        if !self.amd.is_finite() || self.amd < 0.0 || self.amd >= self.lambda2() + self.lambda3() {
            return Err(Error::InvalidParams(format!(
                "AMD must satisfy 0 <= AMD < Lambda2 + Lambda3, got {}",
                self.amd
            )));
        }
        Ok(())
    }

    /// Circular angular momentum of the inner planet.
    pub fn lambda2(&self) -> f64 {
        self.m2 * (self.g * self.m0 * self.a2).sqrt()
    }

    /// Circular angular momentum of the outer planet.
    pub fn lambda3(&self) -> f64 {
        self.m3 * (self.g * self.m0 * self.a3).sqrt()
    }

    /// Vertical total angular momentum `L_z = Lambda2 + Lambda3 - AMD`.
    pub fn l_z(&self) -> f64 {
        self.lambda2() + self.lambda3() - self.amd
    }
}

/// Cosine of the mutual inclination at the given eccentricities, plus a flag
/// recording whether the raw value left `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MutualInclination {
    /// Raw value of `(L_z² - G2² - G3²)/(2 G2 G3)`, not clamped.
    pub cos_i_mut: f64,
    /// True when the raw value lies outside `[-1, 1]` (geometrically
    /// impossible orbit at this AMD).
    pub clamped: bool,
}

/// `cos i_mut` for orbits of eccentricities `(e2, e3)` at the system's AMD.
///
/// In strict mode an out-of-range cosine is an [`Error::InfeasibleGeometry`];
/// otherwise it is returned raw with `clamped = true`.
pub fn mutual_inclination(
    e2: f64,
    e3: f64,
    params: &SystemParams,
    strict: bool,
) -> Result<MutualInclination> {
    if !(0.0..1.0).contains(&e2) || !(0.0..1.0).contains(&e3) {
        return Err(Error::InvalidParams(format!(
            "eccentricities must lie in [0, 1), got e2 = {e2}, e3 = {e3}"
        )));
    }
    let g2 = params.lambda2() * (1.0 - e2 * e2).sqrt();
    let g3 = params.lambda3() * (1.0 - e3 * e3).sqrt();
    let lz = params.l_z();
    let mut cos_i_mut = (lz * lz - g2 * g2 - g3 * g3) / (2.0 * g2 * g3);
    // The numerator cancels catastrophically near the coplanar limit; snap
    // rounding-level deviations onto the boundary so that AMD = 0 gives
    // exactly 1.
    let cancel_scale = (lz * lz + g2 * g2 + g3 * g3) / (2.0 * g2 * g3);
    let slack = 32.0 * f64::EPSILON * cancel_scale;
    if (cos_i_mut - 1.0).abs() <= slack {
        cos_i_mut = 1.0;
    } else if (cos_i_mut + 1.0).abs() <= slack {
        cos_i_mut = -1.0;
    }
    let clamped = cos_i_mut.abs() > 1.0;
    if clamped && strict {
        return Err(Error::InfeasibleGeometry { cos_i_mut });
    }
    Ok(MutualInclination { cos_i_mut, clamped })
}

/// Maximum mutual inclination (radians) consistent with the system's AMD:
/// `arccos((L_z² - Lambda2² - Lambda3²)/(2 Lambda2 Lambda3))`.
pub fn i_max(params: &SystemParams) -> Result<f64> {
    let l2 = params.lambda2();
    let l3 = params.lambda3();
    let lz = params.l_z();
    let mut arg = (lz * lz - l2 * l2 - l3 * l3) / (2.0 * l2 * l3);
    // The numerator cancels at both ends of the range; snap rounding-level
    // deviations onto the boundary so that AMD = 0 gives i_max = 0 exactly.
    let cancel_scale = (lz * lz + l2 * l2 + l3 * l3) / (2.0 * l2 * l3);
    let slack = 32.0 * f64::EPSILON * cancel_scale;
    if (arg - 1.0).abs() <= slack {
        arg = 1.0;
    } else if (arg + 1.0).abs() <= slack {
        arg = -1.0;
    }
    if arg.abs() > 1.0 {
        return Err(Error::InfeasibleAmd { arg });
    }
    Ok(arg.acos())
}
