//! Critical-point machinery for general polynomial models.
//!
//! Works for any `Z(sigma0, sigma1, sigma3)`, quadratic or not: tangencies on
//! the `sigma2 = 0` meridian (first kind), degenerate intersections off it
//! (second kind), permissible energy/`sigma0` domains, and the assembly of a
//! bifurcation sequence by sweeping `sigma0`.

use serde::{Deserialize, Serialize};

use crate::critical::{CpKind, CriticalPoint, Stability, Tangency};
use crate::error::{Error, Result};
use crate::hopf::HopfState;
use crate::numeric::bisect;
use crate::poly::PolyHopfHamiltonian;

/// Knobs of the scanning machinery. The defaults match the documented
/// behaviour; tests and the CLI expose only the ones that matter.
#[derive(Debug, Clone, Copy)]
pub struct ScanOptions {
    /// Base number of meridian samples for the tangency scan.
    pub meridian_samples: usize,
    /// Upper limit for the adaptive sample doubling near merging roots.
    pub max_meridian_samples: usize,
    /// Seeds per axis for the second-kind Newton search.
    pub cpii_seeds: usize,
    /// Relative eigenvalue magnitude below which a point is `Marginal`.
    pub marginal_rel: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            meridian_samples: 4096,
            max_meridian_samples: 1 << 16,
            cpii_seeds: 12,
            marginal_rel: 1e-8,
        }
    }
}

/// Meridian tangency function `g(theta) = sigma3 dZ/dsigma1 - sigma1 dZ/dsigma3`
/// on `sigma1 = sigma0 cos(theta)`, `sigma3 = sigma0 sin(theta)`; its zeros
/// are the first-kind critical points.
pub fn meridian_g(z: &PolyHopfHamiltonian, sigma0: f64, theta: f64) -> f64 {
    let (s1, s3) = (sigma0 * theta.cos(), sigma0 * theta.sin());
    let (d1, d3) = z.grad13(sigma0, s1, s3);
    s3 * d1 - s1 * d3
}

/// First-kind critical points at fixed `sigma0 > 0`, classified.
///
/// `g` is sampled on a uniform grid, every sign change is refined by
/// bisection, and the grid is doubled (up to the configured limit) whenever
/// two roots come closer than a few cells, which happens near saddle-node
/// collisions.
pub fn find_cpi(
    z: &PolyHopfHamiltonian,
    sigma0: f64,
    opts: &ScanOptions,
) -> Result<Vec<CriticalPoint>> {
    if !(sigma0 > 0.0) {
        return Err(Error::InfeasibleSigma0 { sigma0, sigma0_max: f64::INFINITY });
    }
    if z.is_constant_on_sphere() {
        return Err(Error::DegenerateConstant);
    }
    let tau = std::f64::consts::TAU;
    let mut n = opts.meridian_samples.max(64);
    let thetas = loop {
        let roots = meridian_roots(z, sigma0, n);
        let min_gap = min_circular_gap(&roots);
        if n >= opts.max_meridian_samples || min_gap > 8.0 * tau / n as f64 {
            break roots;
        }
        n *= 2;
    };
    Ok(thetas
        .into_iter()
        .map(|theta| classify_meridian_point(z, sigma0, theta, opts))
        .collect())
}

fn meridian_roots(z: &PolyHopfHamiltonian, sigma0: f64, n: usize) -> Vec<f64> {
    let tau = std::f64::consts::TAU;
    let step = tau / n as f64;
    let g: Vec<f64> = (0..n).map(|i| meridian_g(z, sigma0, i as f64 * step)).collect();
    let mut roots = Vec::new();
    for i in 0..n {
        let (a, b) = (g[i], g[(i + 1) % n]);
        let (ta, tb) = (i as f64 * step, (i + 1) as f64 * step);
        if a == 0.0 {
            roots.push(ta);
        } else if b != 0.0 && a.signum() != b.signum() {
            let r = bisect(|t| meridian_g(z, sigma0, t), ta, tb, 1e-15);
            roots.push(r);
        }
    }
    // Canonicalise into [-pi, pi) and sort.
    let mut roots: Vec<f64> = roots
        .into_iter()
        .map(|t| {
            let mut t = t.rem_euclid(tau);
            if t >= std::f64::consts::PI {
                t -= tau;
            }
            t
        })
        .collect();
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-13);
    roots
}

fn min_circular_gap(roots: &[f64]) -> f64 {
    if roots.len() < 2 {
        return f64::INFINITY;
    }
    let tau = std::f64::consts::TAU;
    let mut min = tau - (roots[roots.len() - 1] - roots[0]);
    for w in roots.windows(2) {
        min = min.min(w[1] - w[0]);
    }
    min
}

/// Tangency multiplier `mu` (from `grad Z = 2 mu sigma`) and the second
/// derivative of the meridian restriction, the two ingredients of the
/// stability verdict.
fn meridian_mu_hpp(z: &PolyHopfHamiltonian, sigma0: f64, theta: f64) -> (f64, f64) {
    let (s1, s3) = (sigma0 * theta.cos(), sigma0 * theta.sin());
    let (d1, d3) = z.grad13(sigma0, s1, s3);
    let (h11, h13, h33) = z.hessian13(sigma0, s1, s3);
    let mu = (s1 * d1 + s3 * d3) / (2.0 * sigma0 * sigma0);
    // h''(theta) = q2 - 2 mu sigma0² with q2 the second fundamental form of
    // Z along the meridian.
    let q2 = s3 * s3 * h11 - 2.0 * s1 * s3 * h13 + s1 * s1 * h33;
    let hpp = q2 - 2.0 * mu * sigma0 * sigma0;
    (mu, hpp)
}

fn classify_meridian_point(
    z: &PolyHopfHamiltonian,
    sigma0: f64,
    theta: f64,
    opts: &ScanOptions,
) -> CriticalPoint {
    let location = HopfState::on_meridian(sigma0, theta);
    let energy = z.eval(sigma0, location.sigma1, location.sigma3);
    let (mu, hpp) = meridian_mu_hpp(z, sigma0, theta);
    // In-plane/out-of-plane eigenvalue product: lambda² = 8 mu h''(theta).
    // lambda² > 0 is a real pair (inner tangency, unstable), lambda² < 0 an
    // imaginary pair (outer tangency, stable).
    let lambda_sq = 8.0 * mu * hpp;
    let (d1, d3) = z.grad13(sigma0, location.sigma1, location.sigma3);
    let (h11, h13, h33) = z.hessian13(sigma0, location.sigma1, location.sigma3);
    let grad_scale = d1.hypot(d3);
    let hess_scale = h11.abs() + 2.0 * h13.abs() + h33.abs();
    let lambda_sq_scale =
        8.0 * (grad_scale / (2.0 * sigma0)) * (sigma0 * grad_scale + sigma0 * sigma0 * hess_scale);
    let marginal = lambda_sq.abs() <= opts.marginal_rel.powi(2) * lambda_sq_scale.max(1e-300);
    let (tangency, stability) = if marginal {
        (Tangency::Degenerate, Stability::Marginal)
    } else if lambda_sq > 0.0 {
        (Tangency::Inner, Stability::Unstable)
    } else {
        (Tangency::Outer, Stability::Stable)
    };
    CriticalPoint {
        location,
        kind: CpKind::Cpi,
        tangency: Some(tangency),
        stability,
        energy,
        sigma0,
        theta: Some(theta),
    }
}

/// Re-classify an existing first-kind point (tangency + stability).
pub fn classify_cpi(
    z: &PolyHopfHamiltonian,
    cp: &CriticalPoint,
    opts: &ScanOptions,
) -> (Tangency, Stability) {
    let theta = cp
        .theta
        .unwrap_or_else(|| f64::atan2(cp.location.sigma3, cp.location.sigma1));
    let fresh = classify_meridian_point(z, cp.sigma0, theta, opts);
    (fresh.tangency.unwrap(), fresh.stability)
}

/// A mirror pair of second-kind critical points sharing one center record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CpiiPair {
    pub sigma0: f64,
    /// Stationary point of `Z` in the `(sigma1, sigma3)` plane.
    pub center: (f64, f64),
    /// `sigma2 > 0` member; the mirror point negates `sigma2`.
    pub sigma2: f64,
    pub stability: Stability,
    pub energy: f64,
}

impl CpiiPair {
    /// The two fixed points, `sigma2 = +|.|` first.
    pub fn points(&self) -> [CriticalPoint; 2] {
        [self.point(1.0), self.point(-1.0)]
    }

    fn point(&self, sign: f64) -> CriticalPoint {
        CriticalPoint {
            location: HopfState::new(self.sigma0, self.center.0, sign * self.sigma2, self.center.1),
            kind: CpKind::Cpii,
            tangency: None,
            stability: self.stability,
            energy: self.energy,
            sigma0: self.sigma0,
            theta: None,
        }
    }
}

/// Second-kind critical points at fixed `sigma0`: zeros of the
/// `(sigma1, sigma3)` gradient strictly inside the meridian circle, found by
/// Newton iteration from a grid of seeds.
pub fn find_cpii(
    z: &PolyHopfHamiltonian,
    sigma0: f64,
    opts: &ScanOptions,
) -> Result<Vec<CpiiPair>> {
    if !(sigma0 > 0.0) {
        return Err(Error::InfeasibleSigma0 { sigma0, sigma0_max: f64::INFINITY });
    }
    let k = opts.cpii_seeds.max(2);
    // Gradient scale over the seed box, for the convergence test.
    let mut grad_scale = 0.0f64;
    let mut seeds = Vec::with_capacity(k * k);
    for i in 0..k {
        for j in 0..k {
            let s1 = sigma0 * (2.0 * (i as f64 + 0.5) / k as f64 - 1.0);
            let s3 = sigma0 * (2.0 * (j as f64 + 0.5) / k as f64 - 1.0);
            let (d1, d3) = z.grad13(sigma0, s1, s3);
            grad_scale = grad_scale.max(d1.hypot(d3));
            seeds.push((s1, s3));
        }
    }
    if grad_scale == 0.0 {
        // Constant-on-sphere model: the gradient vanishes identically.
        return Err(Error::DegenerateConstant);
    }
    let tol = 1e-13 * grad_scale;
    let mut centers: Vec<(f64, f64)> = Vec::new();
    for (mut s1, mut s3) in seeds {
        let mut converged = false;
        for _ in 0..60 {
            let (d1, d3) = z.grad13(sigma0, s1, s3);
            if d1.hypot(d3) <= tol {
                converged = true;
                break;
            }
            let (h11, h13, h33) = z.hessian13(sigma0, s1, s3);
            let det = h11 * h33 - h13 * h13;
            if det == 0.0 || !det.is_finite() {
                break;
            }
            let step1 = (h33 * d1 - h13 * d3) / det;
            let step3 = (h11 * d3 - h13 * d1) / det;
            s1 -= step1;
            s3 -= step3;
            // Walk-offs far outside the sphere cannot produce a feasible pair.
            if !s1.is_finite() || !s3.is_finite() || s1.hypot(s3) > 8.0 * sigma0 {
                break;
            }
        }
        if !converged {
            continue;
        }
        let r2 = s1 * s1 + s3 * s3;
        if r2 >= sigma0 * sigma0 {
            continue;
        }
        if !centers
            .iter()
            .any(|c| (c.0 - s1).hypot(c.1 - s3) <= 1e-9 * sigma0)
        {
            centers.push((s1, s3));
        }
    }
    centers.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    Ok(centers
        .into_iter()
        .map(|(s1, s3)| {
            let (h11, h13, h33) = z.hessian13(sigma0, s1, s3);
            let det = h11 * h33 - h13 * h13;
            let det_scale = (h11.abs() + h13.abs()) * (h33.abs() + h13.abs());
            let stability = if det.abs() <= opts.marginal_rel.powi(2) * det_scale.max(1e-300) {
                Stability::Marginal
            } else if det > 0.0 {
                Stability::Stable
            } else {
                Stability::Unstable
            };
            CpiiPair {
                sigma0,
                center: (s1, s3),
                sigma2: (sigma0 * sigma0 - s1 * s1 - s3 * s3).sqrt(),
                stability,
                energy: z.eval(sigma0, s1, s3),
            }
        })
        .collect())
}

/// Attainable energy range on the sphere of radius `sigma0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyLimits {
    pub e_l: f64,
    pub e_r: f64,
}

/// `[E_L, E_R]` at fixed `sigma0`: the extrema of `Z` over the sphere.
///
/// `Z` is independent of `sigma2`, so its extrema over the sphere are the
/// extrema over the closed meridian disk; those sit either on the boundary
/// circle (first-kind points) or at interior stationary points (second-kind
/// centers). Both families are scanned.
pub fn energy_limits(
    z: &PolyHopfHamiltonian,
    sigma0: f64,
    opts: &ScanOptions,
) -> Result<EnergyLimits> {
    let cpi = find_cpi(z, sigma0, opts)?;
    let mut e_l = f64::INFINITY;
    let mut e_r = f64::NEG_INFINITY;
    for p in &cpi {
        e_l = e_l.min(p.energy);
        e_r = e_r.max(p.energy);
    }
    for pair in find_cpii(z, sigma0, opts)? {
        e_l = e_l.min(pair.energy);
        e_r = e_r.max(pair.energy);
    }
    Ok(EnergyLimits { e_l, e_r })
}

/// Feasible `sigma0` interval at fixed energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sigma0Limits {
    pub sigma0_min: f64,
    pub sigma0_max: f64,
}

/// Invert the energy limits: the `sigma0` range on `(0, sigma0_max]` whose
/// spheres attain the given energy, found by a bracketing scan of the margin
/// `min(E - E_L, E_R - E)`.
pub fn sigma0_limits(
    z: &PolyHopfHamiltonian,
    energy: f64,
    sigma0_max: f64,
    opts: &ScanOptions,
) -> Result<Sigma0Limits> {
    const N: usize = 256;
    let margin = |s0: f64| -> Result<f64> {
        let lim = energy_limits(z, s0, opts)?;
        Ok((energy - lim.e_l).min(lim.e_r - energy))
    };
    let grid: Vec<f64> = (1..=N).map(|i| sigma0_max * i as f64 / N as f64).collect();
    let margins: Result<Vec<f64>> = grid.iter().map(|&s| margin(s)).collect();
    let margins = margins?;
    let first = margins.iter().position(|&m| m >= 0.0);
    let Some(first) = first else {
        return Err(Error::EmptyDomain { energy, sigma0_max });
    };
    let last = margins.iter().rposition(|&m| m >= 0.0).unwrap();
    let sigma0_min = if first == 0 {
        grid[0]
    } else {
        bisect(|s| margin(s).unwrap_or(-1.0), grid[first - 1], grid[first], 1e-11)
    };
    let sigma0_hi = if last == N - 1 {
        grid[N - 1]
    } else {
        bisect(|s| margin(s).unwrap_or(-1.0), grid[last + 1], grid[last], 1e-11)
    };
    Ok(Sigma0Limits { sigma0_min, sigma0_max: sigma0_hi })
}

/// Global landmarks of the permissible `(E, sigma0)` domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainLimits {
    /// Smallest attainable energy over `sigma0 in (0, sigma0_amd]`.
    pub e_min: f64,
    /// Upper limiting energy at the largest sphere, `E_R(sigma0_amd)`;
    /// above it the feasible `sigma0` range detaches from the AMD bound.
    pub e_23: f64,
    pub sigma0_amd: f64,
}

/// Scan the global energy envelope of the domain.
pub fn domain_limits(
    z: &PolyHopfHamiltonian,
    sigma0_amd: f64,
    opts: &ScanOptions,
) -> Result<DomainLimits> {
    const N: usize = 128;
    let mut e_min = f64::INFINITY;
    for i in 1..=N {
        let s0 = sigma0_amd * i as f64 / N as f64;
        e_min = e_min.min(energy_limits(z, s0, opts)?.e_l);
    }
    let top = energy_limits(z, sigma0_amd, opts)?;
    Ok(DomainLimits { e_min: e_min.min(top.e_l), e_23: top.e_r, sigma0_amd })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;
    use crate::quad::rotate_to_diagonal;

    fn z_height() -> PolyHopfHamiltonian {
        PolyHopfHamiltonian::from_tuples(&[(0, 0, 1, 1.0)])
    }

    fn octupole_rotated() -> PolyHopfHamiltonian {
        rotate_to_diagonal(&models::octupole_reference()).unwrap().0.to_poly()
    }

    #[test]
    fn height_function_tangencies_are_the_poles() {
        let opts = ScanOptions::default();
        let cps = find_cpi(&z_height(), 2.0, &opts).unwrap();
        assert_eq!(cps.len(), 2);
        let mut thetas: Vec<f64> = cps.iter().map(|c| c.theta.unwrap()).collect();
        thetas.sort_by(f64::total_cmp);
        assert!((thetas[0] + std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        assert!((thetas[1] - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        for cp in &cps {
            assert_eq!(cp.stability, Stability::Stable);
            assert_eq!(cp.tangency, Some(Tangency::Outer));
        }
    }

    #[test]
    fn octupole_counts_across_the_window() {
        let z = octupole_rotated();
        let opts = ScanOptions::default();
        assert_eq!(find_cpi(&z, 0.0055, &opts).unwrap().len(), 4);
        assert_eq!(find_cpi(&z, 0.0100, &opts).unwrap().len(), 2);
        assert_eq!(find_cpi(&z, 0.0070, &opts).unwrap().len(), 2);
    }

    #[test]
    fn octupole_stability_right_after_the_saddle_node() {
        // Between the pitchfork and the saddle-node thresholds the born pair
        // is one inner/unstable + one outer/stable tangency; the two ACR
        // points stay stable.
        let z = octupole_rotated();
        let cps = find_cpi(&z, 0.0064, &ScanOptions::default()).unwrap();
        assert_eq!(cps.len(), 4);
        let unstable: Vec<_> = cps.iter().filter(|c| c.stability == Stability::Unstable).collect();
        assert_eq!(unstable.len(), 1);
        assert_eq!(unstable[0].tangency, Some(Tangency::Inner));
    }

    #[test]
    fn octupole_cpii_window() {
        let z = octupole_rotated();
        let opts = ScanOptions::default();
        let inside = find_cpii(&z, 0.0055, &opts).unwrap();
        assert_eq!(inside.len(), 1);
        assert_eq!(inside[0].stability, Stability::Unstable);
        assert!(inside[0].sigma2 > 0.0);
        assert!(find_cpii(&z, 0.0070, &opts).unwrap().is_empty());
    }

    #[test]
    fn cpii_matches_quadratic_closed_form() {
        let (q, _) = rotate_to_diagonal(&models::octupole_reference()).unwrap();
        let z = q.to_poly();
        let pairs = find_cpii(&z, 0.0055, &ScanOptions::default()).unwrap();
        let c = crate::quad::cpii_center_and_stability(&q, 0.0055).unwrap();
        assert_eq!(pairs.len(), 1);
        assert!((pairs[0].center.0 - c.sigma1).abs() < 1e-12 * 0.0055);
        assert!((pairs[0].center.1 - c.sigma3).abs() < 1e-12 * 0.0055);
        assert_eq!(pairs[0].stability, c.stability);
    }

    #[test]
    fn no_cpii_for_height_function() {
        assert!(find_cpii(&z_height(), 1.0, &ScanOptions::default()).unwrap().is_empty());
    }

    #[test]
    fn energy_limits_of_height_function() {
        let lim = energy_limits(&z_height(), 0.7, &ScanOptions::default()).unwrap();
        assert!((lim.e_l + 0.7).abs() < 1e-12);
        assert!((lim.e_r - 0.7).abs() < 1e-12);
    }

    #[test]
    fn cpi_positions_match_quartic_on_a_grid() {
        // Numeric meridian scan vs closed-form quartic roots over a 50-value
        // sigma0 grid for every bundled quadratic model.
        let opts = ScanOptions::default();
        for base in [
            models::octupole_reference(),
            models::elliptic_reference(),
            models::hyperbolic_reference(),
        ] {
            let (q, _) = rotate_to_diagonal(&base).unwrap();
            let z = q.to_poly();
            let thresholds = crate::quad::f1_roots(&q, models::REFERENCE_AMD).unwrap().roots;
            for i in 1..=50 {
                let sigma0 = models::REFERENCE_AMD * i as f64 / 50.0;
                // Skip the immediate vicinity of a count change.
                if thresholds.iter().any(|r| (sigma0 - r).abs() < 0.02 * r) {
                    continue;
                }
                let analytic = crate::quad::cpi_quartic_roots(&q, sigma0).unwrap();
                let numeric = find_cpi(&z, sigma0, &opts).unwrap();
                assert_eq!(analytic.roots.len(), numeric.len(), "count at sigma0 = {sigma0}");
                let mut a: Vec<(f64, f64)> =
                    analytic.roots.iter().map(|r| (r.sigma1, r.sigma3)).collect();
                let mut n: Vec<(f64, f64)> = numeric
                    .iter()
                    .map(|c| (c.location.sigma1, c.location.sigma3))
                    .collect();
                a.sort_by(|p, r| p.0.total_cmp(&r.0).then(p.1.total_cmp(&r.1)));
                n.sort_by(|p, r| p.0.total_cmp(&r.0).then(p.1.total_cmp(&r.1)));
                for (pa, pn) in a.iter().zip(&n) {
                    let d = (pa.0 - pn.0).hypot(pa.1 - pn.1);
                    assert!(d < 1e-9, "position gap {d} at sigma0 = {sigma0}");
                }
            }
        }
    }

    #[test]
    fn sigma0_limits_round_trip() {
        let z = octupole_rotated();
        let opts = ScanOptions::default();
        let s_star = 0.008;
        let lim = energy_limits(&z, s_star, &opts).unwrap();
        // The lower limiting energy is attained exactly at s_star.
        let inv = sigma0_limits(&z, lim.e_l, models::REFERENCE_AMD, &opts).unwrap();
        let hit = (inv.sigma0_min - s_star).abs().min((inv.sigma0_max - s_star).abs());
        assert!(hit < 1e-9, "inversion residual {hit}");
    }
}
