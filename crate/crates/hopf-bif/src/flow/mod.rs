//! Time integration of the reduced and full flows, Poincaré sections and
//! linear-stability confirmation.

pub mod contour;
pub mod poincare_poly;
mod rk;

use serde::{Deserialize, Serialize};

use crate::critical::{CriticalPoint, Stability};
use crate::error::{Error, Result};
use crate::hopf::{HopfState, PoincareState, SystemParams};
use crate::poly::PolyHopfHamiltonian;

pub use contour::{contour_portrait, auto_levels, ContourOptions, PortraitCurve};
pub use poincare_poly::{PoincareMonomial, PoincarePolyHamiltonian};

/// A reduced-flow trajectory with its conservation diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReducedTrajectory {
    /// `(t, state)` samples at the accepted integrator steps.
    pub samples: Vec<(f64, HopfState)>,
    /// Largest observed `|sigma·sigma - sigma0²|` along the trajectory.
    pub max_casimir_drift: f64,
    /// Largest observed `|Z - Z(t=0)|`.
    pub max_energy_drift: f64,
}

/// Internal tightening of the user tolerance, sized so that the global
/// relative drift of the conserved quantities stays below roughly `100 * tol`
/// for runs of ~10^4 characteristic times.
const STEP_SAFETY: f64 = 32.0;

/// Integrate the reduced flow on the sphere from `h0` for time `t_end`.
///
/// Uses an adaptive embedded Runge–Kutta 5(4) pair; `tol` is the local error
/// tolerance relative to the sphere radius. The state is *not* renormalised
/// onto the sphere: the Casimir drift is a first-class diagnostic of
/// integration quality.
pub fn integrate_reduced(
    z: &PolyHopfHamiltonian,
    h0: &HopfState,
    t_end: f64,
    tol: f64,
) -> Result<ReducedTrajectory> {
    let sigma0 = h0.sigma0;
    let rtol = tol / STEP_SAFETY;
    let atol = rtol * sigma0;
    let mut f = |_t: f64, y: &[f64; 3]| {
        let (d1, d3) = z.grad13(sigma0, y[0], y[2]);
        [
            2.0 * y[1] * d3,
            2.0 * (y[2] * d1 - y[0] * d3),
            -2.0 * y[1] * d1,
        ]
    };
    let energy0 = z.eval(sigma0, h0.sigma1, h0.sigma3);
    let casimir0 = sigma0 * sigma0;
    let mut t = 0.0;
    let mut y = [h0.sigma1, h0.sigma2, h0.sigma3];
    let mut h = (t_end / 100.0).abs().max(1e-6).copysign(t_end);
    let mut out = ReducedTrajectory {
        samples: vec![(0.0, *h0)],
        max_casimir_drift: 0.0,
        max_energy_drift: 0.0,
    };
    while (t - t_end) * t_end.signum() < 0.0 {
        let step = rk::adaptive_step(&mut f, t, &y, h, t_end, atol, rtol)?;
        t = step.t;
        y = step.y;
        h = step.h_next;
        let state = HopfState::new(sigma0, y[0], y[1], y[2]);
        out.max_casimir_drift = out
            .max_casimir_drift
            .max((y[0] * y[0] + y[1] * y[1] + y[2] * y[2] - casimir0).abs());
        out.max_energy_drift = out
            .max_energy_drift
            .max((z.eval(sigma0, y[0], y[2]) - energy0).abs());
        out.samples.push((t, state));
    }
    Ok(out)
}

/// One `Y3 = 0`, `Y3' >= 0` crossing of a full-flow trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectionPoint {
    pub x2: f64,
    pub y2: f64,
    pub x3: f64,
    /// `Y3` left after the final crossing refinement (diagnostic).
    pub y3_residual: f64,
    /// Crossing time.
    pub t: f64,
    /// `|H - H(t=0)|` at the crossing.
    pub energy_residual: f64,
}

/// Options of the section extraction.
#[derive(Debug, Clone, Copy)]
pub struct SectionOptions {
    /// Integrator tolerance.
    pub tol: f64,
    /// `|Y3|` accepted at a refined crossing.
    pub crossing_tol: f64,
    /// Cap on the time step, as a fraction of the total time; keeps slow
    /// systems from striding over a full `Y3` oscillation unseen.
    pub max_step_fraction: f64,
    /// Mutual-inclination feasibility is enforced when parameters are given.
    pub params: Option<SystemParams>,
}

impl Default for SectionOptions {
    fn default() -> Self {
        Self { tol: 1e-10, crossing_tol: 1e-12, max_step_fraction: 1.0 / 2000.0, params: None }
    }
}

/// Integrate Hamilton's equations from `x0` for time `t_end` and collect the
/// `Y3 = 0`, `Y3' >= 0` crossings, each refined by a final step that uses
/// `Y3` as the independent variable (Hénon's trick), so every returned point
/// sits on the section exactly up to the crossing tolerance.
pub fn poincare_section(
    h: &PoincarePolyHamiltonian,
    x0: &PoincareState,
    t_end: f64,
    opts: &SectionOptions,
) -> Result<Vec<SectionPoint>> {
    let energy0 = h.eval(x0);
    let mut f = |_t: f64, y: &[f64; 4]| {
        h.rhs(&PoincareState::new(y[0], y[1], y[2], y[3]))
    };
    let state_scale = x0.x2.abs().max(x0.y2.abs()).max(x0.x3.abs()).max(x0.y3.abs()).max(1e-300);
    let rtol = opts.tol / STEP_SAFETY;
    let atol = rtol * state_scale;
    let max_step = (t_end * opts.max_step_fraction).abs().max(1e-12);
    let mut t = 0.0;
    let mut y = [x0.x2, x0.y2, x0.x3, x0.y3];
    let mut step_size = max_step;
    let mut out = Vec::new();
    while t < t_end {
        let prev = y;
        let step =
            rk::adaptive_step(&mut f, t, &y, step_size.min(max_step), t_end, atol, rtol)?;
        t = step.t;
        y = step.y;
        step_size = step.h_next.min(max_step);
        if let Some(p) = opts.params.as_ref() {
            check_in_domain(p, &PoincareState::new(y[0], y[1], y[2], y[3]), t)?;
        }
        // Upward zero crossing of Y3 inside this step?
        if prev[3] < 0.0 && y[3] >= 0.0 {
            if let Some(pt) = refine_crossing(h, t, &y, opts, atol, rtol, energy0)? {
                out.push(pt);
            }
        }
    }
    Ok(out)
}

fn check_in_domain(params: &SystemParams, p: &PoincareState, t: f64) -> Result<()> {
    let g2 = params.lambda2() - p.w2();
    let g3 = params.lambda3() - p.w3();
    let lz = params.l_z();
    let cos_i = (lz * lz - g2 * g2 - g3 * g3) / (2.0 * g2 * g3);
    let l2 = params.lambda2();
    let l3 = params.lambda3();
    let cos_max = ((lz * lz - l2 * l2 - l3 * l3) / (2.0 * l2 * l3)).clamp(-1.0, 1.0);
    let slack = 1e-9 * (1.0 + cos_i.abs());
    if cos_i > 1.0 + slack || cos_i < cos_max - slack {
        return Err(Error::LeftDomain { t, cos_i_mut: cos_i });
    }
    Ok(())
}

/// Hénon's trick: from the post-crossing state, integrate with `Y3` as the
/// independent variable back to `Y3 = 0`, which lands on the section exactly.
/// The remaining coordinates carry the (tolerance-controlled) step error.
///
/// Returns `Ok(None)` for grazing passages where `Y3'` changes sign during
/// the refinement (no transversal crossing to report).
fn refine_crossing(
    h: &PoincarePolyHamiltonian,
    t: f64,
    y: &[f64; 4],
    opts: &SectionOptions,
    atol: f64,
    rtol: f64,
    energy0: f64,
) -> Result<Option<SectionPoint>> {
    // State vector in Y3-time: (x2, y2, x3, t), flowing by d(state)/dY3 =
    // (X2', Y2', X3', 1)/Y3'.
    let grazing = std::cell::Cell::new(false);
    let mut g = |y3: f64, v: &[f64; 4]| {
        let p = PoincareState::new(v[0], v[1], v[2], y3);
        let r = h.rhs(&p);
        if r[3] <= 0.0 {
            grazing.set(true);
            return [0.0; 4];
        }
        let inv = 1.0 / r[3];
        [r[0] * inv, r[1] * inv, r[2] * inv, inv]
    };
    let mut s = y[3];
    let mut v = [y[0], y[1], y[2], t];
    if s != 0.0 {
        let mut hs = -s;
        for _ in 0..64 {
            if s == 0.0 || s.abs() <= opts.crossing_tol {
                break;
            }
            let step = rk::adaptive_step(&mut g, s, &v, hs, 0.0, atol, rtol)?;
            if grazing.get() {
                return Ok(None);
            }
            s = step.t;
            v = step.y;
            hs = step.h_next;
        }
    }
    let p = PoincareState::new(v[0], v[1], v[2], s);
    if h.rhs(&p)[3] < 0.0 {
        return Ok(None);
    }
    Ok(Some(SectionPoint {
        x2: p.x2,
        y2: p.y2,
        x3: p.x3,
        y3_residual: s,
        t: v[3],
        energy_residual: (h.eval(&p) - energy0).abs(),
    }))
}

/// Eigenvalues of the reduced-flow linearisation restricted to the sphere's
/// tangent plane at a critical point, as two complex numbers `(re, im)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FloquetPair {
    pub eigenvalues: [(f64, f64); 2],
    /// Stability read off the eigenvalues.
    pub stability: Stability,
}

/// Linearise the reduced flow at an equilibrium and classify it from the
/// tangent-plane eigenvalues; the independent confirmation of the
/// tangency-based classification.
pub fn floquet_confirm(z: &PolyHopfHamiltonian, cp: &CriticalPoint) -> FloquetPair {
    let s = cp.location;
    let (d1, d3) = z.grad13(s.sigma0, s.sigma1, s.sigma3);
    let (h11, h13, h33) = z.hessian13(s.sigma0, s.sigma1, s.sigma3);
    // Jacobian of (2 s2 Z3, 2(s3 Z1 - s1 Z3), -2 s2 Z1) in (s1, s2, s3).
    let j = [
        [2.0 * s.sigma2 * h13, 2.0 * d3, 2.0 * s.sigma2 * h33],
        [
            2.0 * (s.sigma3 * h11 - d3 - s.sigma1 * h13),
            0.0,
            2.0 * (d1 + s.sigma3 * h13 - s.sigma1 * h33),
        ],
        [-2.0 * s.sigma2 * h11, -2.0 * d1, -2.0 * s.sigma2 * h13],
    ];
    // Orthonormal tangent basis at the point.
    let n = normalize([s.sigma1, s.sigma2, s.sigma3]);
    let seed = if n[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let u = normalize(cross(n, seed));
    let v = cross(n, u);
    let m = [
        [dot(u, matvec(&j, u)), dot(u, matvec(&j, v))],
        [dot(v, matvec(&j, u)), dot(v, matvec(&j, v))],
    ];
    let tr = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = tr * tr - 4.0 * det;
    let eigenvalues = if disc >= 0.0 {
        let r = disc.sqrt();
        [((tr + r) / 2.0, 0.0), ((tr - r) / 2.0, 0.0)]
    } else {
        let r = (-disc).sqrt() / 2.0;
        [(tr / 2.0, r), (tr / 2.0, -r)]
    };
    let scale = m
        .iter()
        .flatten()
        .fold(0.0f64, |acc, x| acc.max(x.abs()));
    let stability = if det.abs() <= 1e-16 * scale.powi(2).max(1e-300) {
        Stability::Marginal
    } else if det > 0.0 {
        Stability::Stable
    } else {
        Stability::Unstable
    };
    FloquetPair { eigenvalues, stability }
}

fn normalize(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn matvec(m: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    [
        m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
        m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
        m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;
    use crate::quad::rotate_to_diagonal;
    use crate::scan::{find_cpi, ScanOptions};

    #[test]
    fn rotation_about_sigma3_has_period_pi() {
        // Z = sigma3 rotates the equator at angular rate 2.
        let z = PolyHopfHamiltonian::from_tuples(&[(0, 0, 1, 1.0)]);
        let h0 = HopfState::new(1.0, 1.0, 0.0, 0.0);
        let traj = integrate_reduced(&z, &h0, std::f64::consts::PI, 1e-12).unwrap();
        let last = traj.samples.last().unwrap().1;
        assert!((last.sigma1 - 1.0).abs() < 1e-9, "returned to start after one period");
        assert!(last.sigma2.abs() < 1e-9);
        assert!(traj.max_casimir_drift < 1e-11);
    }

    #[test]
    fn critical_point_is_stationary() {
        let (q, _) = rotate_to_diagonal(&models::octupole_reference()).unwrap();
        let z = q.to_poly();
        let cp = &find_cpi(&z, 0.0064, &ScanOptions::default()).unwrap()[0];
        let traj = integrate_reduced(&z, &cp.location, 1e3, 1e-10).unwrap();
        let last = traj.samples.last().unwrap().1;
        let d = (last.sigma1 - cp.location.sigma1)
            .hypot(last.sigma2 - cp.location.sigma2)
            .hypot(last.sigma3 - cp.location.sigma3);
        assert!(d < 1e-7 * cp.sigma0, "drift from equilibrium {d}");
    }

    #[test]
    fn hyperbolic_reference_conserves_casimir_and_energy() {
        let (q, _) = rotate_to_diagonal(&models::hyperbolic_reference()).unwrap();
        let z = q.to_poly();
        let s0 = 0.01;
        let h0 = HopfState::on_meridian(s0, 0.7);
        let h0 = HopfState::new(s0, h0.sigma1 * 0.6, s0 * 0.8, h0.sigma3 * 0.6);
        assert!(h0.is_on_sphere(1e-12));
        let traj = integrate_reduced(&z, &h0, 1e4, 1e-10).unwrap();
        let e_scale = z.eval(s0, h0.sigma1, h0.sigma3).abs().max(1e-300);
        assert!(traj.max_casimir_drift / (s0 * s0) < 1e-8, "{}", traj.max_casimir_drift);
        assert!(traj.max_energy_drift / e_scale < 1e-8, "{}", traj.max_energy_drift);
    }

    #[test]
    fn decoupled_oscillators_cross_every_tau() {
        // H = (X2² + Y2²)/2 + (X3² + Y3²)/2: both modes rotate at rate 1.
        let h = PoincarePolyHamiltonian::new([
            PoincareMonomial { e2: 2, e2y: 0, e3: 0, e3y: 0, coef: 0.5 },
            PoincareMonomial { e2: 0, e2y: 2, e3: 0, e3y: 0, coef: 0.5 },
            PoincareMonomial { e2: 0, e2y: 0, e3: 2, e3y: 0, coef: 0.5 },
            PoincareMonomial { e2: 0, e2y: 0, e3: 0, e3y: 2, coef: 0.5 },
        ]);
        let x0 = PoincareState::new(1.0, 0.0, 0.8, -0.6);
        let pts = poincare_section(&h, &x0, 50.0, &SectionOptions::default()).unwrap();
        assert!(pts.len() >= 6, "expected several crossings, got {}", pts.len());
        for w in pts.windows(2) {
            assert!((w[1].t - w[0].t - std::f64::consts::TAU).abs() < 1e-6);
        }
        // Conservation stays within 100x the integrator tolerance (H = 1).
        for p in &pts {
            assert!(p.energy_residual < 1e-8, "drift {}", p.energy_residual);
        }
    }

    #[test]
    fn floquet_pair_at_height_function_pole() {
        let z = PolyHopfHamiltonian::from_tuples(&[(0, 0, 1, 1.0)]);
        let cp = CriticalPoint {
            location: HopfState::new(1.0, 0.0, 0.0, 1.0),
            kind: crate::CpKind::Cpi,
            tangency: Some(crate::Tangency::Outer),
            stability: Stability::Stable,
            energy: 1.0,
            sigma0: 1.0,
            theta: Some(std::f64::consts::FRAC_PI_2),
        };
        let fp = floquet_confirm(&z, &cp);
        assert_eq!(fp.stability, Stability::Stable);
        let (re, im) = fp.eigenvalues[0];
        assert!(re.abs() < 1e-12);
        assert!((im.abs() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn floquet_agrees_with_tangency_classification() {
        let (q, _) = rotate_to_diagonal(&models::octupole_reference()).unwrap();
        let z = q.to_poly();
        for sigma0 in [0.0055, 0.0064, 0.0100] {
            for cp in find_cpi(&z, sigma0, &ScanOptions::default()).unwrap() {
                let fp = floquet_confirm(&z, &cp);
                assert_eq!(fp.stability, cp.stability, "at sigma0 = {sigma0}");
            }
        }
    }
}
