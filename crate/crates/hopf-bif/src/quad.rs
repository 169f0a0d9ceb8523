//! Closed-form bifurcation analysis of the generic quadratic Hamiltonian
//!
//! ```text
//! K(sigma1, sigma3; sigma0) = A sigma1² + C sigma3² + B sigma1 sigma3
//!                           + D(sigma0) sigma1 + E(sigma0) sigma3 + F(sigma0)
//! ```
//!
//! with `D(sigma0) = D1 sigma0 + Delta1`, `E(sigma0) = D3 sigma0 + Delta3`.
//! After the rotation that removes the cross term, first-kind critical points
//! come from a quartic in the tangency multiplier `mu`, and the bifurcation
//! values of `sigma0` from the scalar equations `f1` (first kind) and `f2`
//! (second kind).

use serde::{Deserialize, Serialize};

use crate::critical::Stability;
use crate::error::{Error, Result};
use crate::numeric::{bisect, newton_polish, residual_ok};
use crate::poly::PolyHopfHamiltonian;
use crate::quartic;

/// Control parameters of the quadratic Hamiltonian. The `F*` coefficients
/// collect the part depending on `sigma0` alone; they shift energies and the
/// full 2-DOF flow but not the reduced critical-point structure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadHopfHamiltonian {
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B", default)]
    pub b: f64,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "D1")]
    pub d1: f64,
    #[serde(rename = "Delta1")]
    pub delta1: f64,
    #[serde(rename = "D3")]
    pub d3: f64,
    #[serde(rename = "Delta3")]
    pub delta3: f64,
    #[serde(rename = "F0", default)]
    pub f0: f64,
    #[serde(rename = "F1", default)]
    pub f1: f64,
    #[serde(rename = "F2", default)]
    pub f2: f64,
}

/// Conic class of the quadratic form `A sigma1² + B sigma1 sigma3 + C sigma3²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConicClass {
    Ellipse,
    Hyperbola,
    ParabolicDegenerate,
}

impl std::fmt::Display for ConicClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConicClass::Ellipse => write!(f, "ellipse"),
            ConicClass::Hyperbola => write!(f, "hyperbola"),
            ConicClass::ParabolicDegenerate => write!(f, "parabolic-degenerate"),
        }
    }
}

impl QuadHopfHamiltonian {
    pub fn new(a: f64, b: f64, c: f64, d1: f64, delta1: f64, d3: f64, delta3: f64) -> Self {
        Self { a, b, c, d1, delta1, d3, delta3, f0: 0.0, f1: 0.0, f2: 0.0 }
    }

    pub fn with_sigma0_part(mut self, f0: f64, f1: f64, f2: f64) -> Self {
        self.f0 = f0;
        self.f1 = f1;
        self.f2 = f2;
        self
    }

    /// Linear coefficient `D(sigma0) = D1 sigma0 + Delta1`.
    pub fn d_at(&self, sigma0: f64) -> f64 {
        self.d1 * sigma0 + self.delta1
    }

    /// Linear coefficient `E(sigma0) = D3 sigma0 + Delta3`.
    pub fn e_at(&self, sigma0: f64) -> f64 {
        self.d3 * sigma0 + self.delta3
    }

    pub fn eval(&self, sigma0: f64, sigma1: f64, sigma3: f64) -> f64 {
        self.a * sigma1 * sigma1
            + self.c * sigma3 * sigma3
            + self.b * sigma1 * sigma3
            + self.d_at(sigma0) * sigma1
            + self.e_at(sigma0) * sigma3
            + self.f0
            + self.f1 * sigma0
            + self.f2 * sigma0 * sigma0
    }

    pub fn is_diagonal(&self) -> bool {
        self.b == 0.0
    }

    /// The same Hamiltonian as a general polynomial model.
    pub fn to_poly(&self) -> PolyHopfHamiltonian {
        PolyHopfHamiltonian::from_tuples(&[
            (0, 2, 0, self.a),
            (0, 0, 2, self.c),
            (0, 1, 1, self.b),
            (1, 1, 0, self.d1),
            (0, 1, 0, self.delta1),
            (1, 0, 1, self.d3),
            (0, 0, 1, self.delta3),
            (0, 0, 0, self.f0),
            (1, 0, 0, self.f1),
            (2, 0, 0, self.f2),
        ])
    }

    /// Classification by the sign of `B² - 4AC`.
    pub fn conic_class(&self) -> ConicClass {
        let disc = self.b * self.b - 4.0 * self.a * self.c;
        let scale = (self.b * self.b).max((4.0 * self.a * self.c).abs());
        if residual_ok(disc, scale, 1e-12) {
            ConicClass::ParabolicDegenerate
        } else if disc < 0.0 {
            ConicClass::Ellipse
        } else {
            ConicClass::Hyperbola
        }
    }
}

/// The rotation `sigma1 = alpha t1 + beta t3`, `sigma3 = -beta t1 + alpha t3`
/// used to remove the cross term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rotation {
    pub alpha: f64,
    pub beta: f64,
    /// The rotation angle, with `alpha = cos(angle)`, `beta = sin(angle)`.
    pub angle: f64,
}

impl Rotation {
    pub const IDENTITY: Rotation = Rotation { alpha: 1.0, beta: 0.0, angle: 0.0 };

    /// Map a point from rotated coordinates back to the original frame.
    pub fn to_original(&self, t1: f64, t3: f64) -> (f64, f64) {
        (self.alpha * t1 + self.beta * t3, -self.beta * t1 + self.alpha * t3)
    }

    /// Map a point from the original frame into rotated coordinates.
    pub fn to_rotated(&self, s1: f64, s3: f64) -> (f64, f64) {
        (self.alpha * s1 - self.beta * s3, self.beta * s1 + self.alpha * s3)
    }
}

/// Rotate the quadratic form so that the cross coefficient vanishes.
///
/// The angle solves `B cos(2θ) + (A - C) sin(2θ) = 0` on the principal
/// branch `2θ ∈ (-π/2, π/2]`; `sigma0` and `sigma2` are untouched, and the
/// trace `A + C`, the determinant `AC - B²/4` and the Euclidean norm of the
/// linear part are preserved.
pub fn rotate_to_diagonal(q: &QuadHopfHamiltonian) -> Result<(QuadHopfHamiltonian, Rotation)> {
    if q.b == 0.0 {
        if q.a == q.c {
            return Err(Error::IsotropicDegenerate);
        }
        return Ok((*q, Rotation::IDENTITY));
    }
    let two_theta = if q.a == q.c {
        std::f64::consts::FRAC_PI_2.copysign(q.b)
    } else {
        (q.b / (q.c - q.a)).atan()
    };
    let theta = 0.5 * two_theta;
    let (alpha, beta) = (theta.cos(), theta.sin());
    let a = q.a * alpha * alpha + q.c * beta * beta - q.b * alpha * beta;
    let c = q.a * beta * beta + q.c * alpha * alpha + q.b * alpha * beta;
    let rotated = QuadHopfHamiltonian {
        a,
        b: 0.0,
        c,
        d1: alpha * q.d1 - beta * q.d3,
        delta1: alpha * q.delta1 - beta * q.delta3,
        d3: beta * q.d1 + alpha * q.d3,
        delta3: beta * q.delta1 + alpha * q.delta3,
        f0: q.f0,
        f1: q.f1,
        f2: q.f2,
    };
    Ok((rotated, Rotation { alpha, beta, angle: theta }))
}

/// `T1(sigma0) = (D1 + Delta1/sigma0)²`.
pub fn t1(q: &QuadHopfHamiltonian, sigma0: f64) -> f64 {
    let v = q.d1 + q.delta1 / sigma0;
    v * v
}

/// `T3(sigma0) = (D3 + Delta3/sigma0)²`.
pub fn t3(q: &QuadHopfHamiltonian, sigma0: f64) -> f64 {
    let v = q.d3 + q.delta3 / sigma0;
    v * v
}

fn require_diagonal(q: &QuadHopfHamiltonian) -> Result<()> {
    if !q.is_diagonal() {
        return Err(Error::InvalidParams(
            "operation requires a diagonalised model (B = 0); apply rotate_to_diagonal first"
                .into(),
        ));
    }
    Ok(())
}

/// One first-kind critical point of the diagonalised model, parametrised by
/// the tangency multiplier `mu` of `grad Z = 2 mu sigma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CpiRoot {
    pub mu: f64,
    pub sigma1: f64,
    pub sigma3: f64,
    /// Residual of the sphere constraint `sigma1² + sigma3² - sigma0²`.
    pub residual: f64,
}

/// Which branch of the critical-point equations produced the roots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum QuarticBranch {
    /// Both linear coefficients nonzero: the full quartic in `mu`.
    Generic,
    /// `D(sigma0) = 0`: the model is symmetric under `sigma1 -> -sigma1`
    /// and `mu = A` solves the tangency equation.
    SymmetricSigma1,
    /// `E(sigma0) = 0`: symmetric under `sigma3 -> -sigma3`, `mu = C`.
    SymmetricSigma3,
}

/// First-kind critical points at fixed `sigma0`.
#[derive(Debug, Clone, PartialEq)]
pub struct CpiRoots {
    pub roots: Vec<CpiRoot>,
    pub branch: QuarticBranch,
}

/// Coefficients (ascending) of the quartic
/// `4(A-mu)²(C-mu)² - (A-mu)² T3 - (C-mu)² T1` in `mu`.
fn tangency_quartic(q: &QuadHopfHamiltonian, sigma0: f64) -> [f64; 5] {
    // (A - mu)² = A² - 2A mu + mu², as ascending coefficient triples.
    let pa = [q.a * q.a, -2.0 * q.a, 1.0];
    let pc = [q.c * q.c, -2.0 * q.c, 1.0];
    let mut prod = [0.0f64; 5];
    for (i, &x) in pa.iter().enumerate() {
        for (j, &y) in pc.iter().enumerate() {
            prod[i + j] += x * y;
        }
    }
    let (t1v, t3v) = (t1(q, sigma0), t3(q, sigma0));
    let mut c = [0.0f64; 5];
    for k in 0..5 {
        c[k] = 4.0 * prod[k];
    }
    for k in 0..3 {
        c[k] -= t3v * pa[k] + t1v * pc[k];
    }
    c
}

/// Sphere-constraint function `S(mu, sigma0)` whose zeros are the tangency
/// multipliers: `sigma1(mu)² + sigma3(mu)² - sigma0²` with the coordinates of
/// the diagonal model.
pub fn sphere_constraint(q: &QuadHopfHamiltonian, mu: f64, sigma0: f64) -> f64 {
    let s1 = -q.d_at(sigma0) / (2.0 * (q.a - mu));
    let s3 = -q.e_at(sigma0) / (2.0 * (q.c - mu));
    s1 * s1 + s3 * s3 - sigma0 * sigma0
}

/// Real tangency multipliers and first-kind critical points of a
/// diagonalised quadratic model at fixed `sigma0 > 0`.
///
/// In the generic case (`D(sigma0) != 0`, `E(sigma0) != 0`) there are 2 or 4
/// of them. When a linear coefficient vanishes the symmetric branch is
/// returned instead, with `mu = A` (resp. `mu = C`) and the mirror pair of
/// points allowed by the sphere constraint.
pub fn cpi_quartic_roots(q: &QuadHopfHamiltonian, sigma0: f64) -> Result<CpiRoots> {
    require_diagonal(q)?;
    if q.a == q.c {
        return Err(Error::IsotropicDegenerate);
    }
    if !(sigma0 > 0.0) {
        return Err(Error::InfeasibleSigma0 { sigma0, sigma0_max: f64::INFINITY });
    }
    let d = q.d_at(sigma0);
    let e = q.e_at(sigma0);
    let lin_scale = (q.d1.abs() + q.delta1.abs() / sigma0)
        .max(q.d3.abs() + q.delta3.abs() / sigma0)
        .max(1e-300);
    if d.abs() <= 1e-14 * lin_scale || e.abs() <= 1e-14 * lin_scale {
        return Ok(symmetric_branch_roots(q, sigma0, d, e));
    }

    let coeffs = tangency_quartic(q, sigma0);
    let scale = sigma0 * sigma0;
    // Take all four eigenvalue candidates and let the sphere constraint
    // decide: a genuine double root arrives as a conjugate pair with small
    // imaginary parts and must be kept (twice), while the real part of a
    // genuine complex pair leaves a large constraint residual. Each polish
    // is confined to less than half the gap to the neighbouring candidates
    // so it cannot drift into a different root's basin and duplicate it.
    let mut cand: Vec<f64> = quartic::companion_eigenvalues(&coeffs)
        .iter()
        .map(|&(re, _)| re)
        .collect();
    cand.sort_by(f64::total_cmp);
    let span = (q.a - q.c).abs();
    let mut roots: Vec<CpiRoot> = Vec::with_capacity(4);
    for (i, &mu0) in cand.iter().enumerate() {
        let gap_prev = if i > 0 { mu0 - cand[i - 1] } else { f64::INFINITY };
        let gap_next = if i + 1 < cand.len() { cand[i + 1] - mu0 } else { f64::INFINITY };
        let radius = (0.45 * gap_prev.min(gap_next))
            .min(0.05 * span)
            .max(64.0 * f64::EPSILON * span);
        // Polish on S(mu, sigma0) directly; it is smooth away from mu = A, C
        // and better conditioned than the expanded quartic.
        let mu = newton_polish(
            |m| sphere_constraint(q, m, sigma0),
            |m| {
                let s1 = -d / (2.0 * (q.a - m));
                let s3 = -e / (2.0 * (q.c - m));
                2.0 * s1 * s1 / (q.a - m) + 2.0 * s3 * s3 / (q.c - m)
            },
            mu0,
            mu0 - radius,
            mu0 + radius,
            12,
        );
        let sigma1 = -d / (2.0 * (q.a - mu));
        let sigma3 = -e / (2.0 * (q.c - mu));
        let residual = sigma1 * sigma1 + sigma3 * sigma3 - scale;
        if residual.abs() <= 1e-8 * scale {
            roots.push(CpiRoot { mu, sigma1, sigma3, residual });
        }
    }
    Ok(CpiRoots { roots, branch: QuarticBranch::Generic })
}

fn symmetric_branch_roots(q: &QuadHopfHamiltonian, sigma0: f64, d: f64, e: f64) -> CpiRoots {
    let mut roots = Vec::new();
    let branch;
    if d.abs() <= e.abs() {
        // mu = A: sigma3 pinned by the linear part, sigma1 free on the circle.
        branch = QuarticBranch::SymmetricSigma1;
        let sigma3 = -e / (2.0 * (q.c - q.a));
        let rem = sigma0 * sigma0 - sigma3 * sigma3;
        if rem >= 0.0 {
            let s1 = rem.sqrt();
            for sigma1 in [s1, -s1] {
                roots.push(CpiRoot { mu: q.a, sigma1, sigma3, residual: 0.0 });
                if s1 == 0.0 {
                    break;
                }
            }
        }
        // Poles of the sigma1-reflection symmetry: sigma1 = 0.
        for sign in [1.0, -1.0] {
            let sigma3 = sign * sigma0;
            let mu = q.c + e / (2.0 * sigma3);
            roots.push(CpiRoot { mu, sigma1: 0.0, sigma3, residual: 0.0 });
        }
    } else {
        branch = QuarticBranch::SymmetricSigma3;
        let sigma1 = -d / (2.0 * (q.a - q.c));
        let rem = sigma0 * sigma0 - sigma1 * sigma1;
        if rem >= 0.0 {
            let s3 = rem.sqrt();
            for sigma3 in [s3, -s3] {
                roots.push(CpiRoot { mu: q.c, sigma1, sigma3, residual: 0.0 });
                if s3 == 0.0 {
                    break;
                }
            }
        }
        for sign in [1.0, -1.0] {
            let sigma1 = sign * sigma0;
            let mu = q.a + d / (2.0 * sigma1);
            roots.push(CpiRoot { mu, sigma1, sigma3: 0.0, residual: 0.0 });
        }
    }
    roots.sort_by(|p, r| p.mu.total_cmp(&r.mu));
    CpiRoots { roots, branch }
}

/// Discriminant of the tangency quartic with respect to `mu`, as a function
/// of `sigma0`. Its simple zeros (other than the `T1 = 0` / `T3 = 0`
/// artifacts, which are squares and touch without crossing) mark the changes
/// in the number of first-kind critical points.
pub fn discriminant_q(q: &QuadHopfHamiltonian, sigma0: f64) -> f64 {
    let s = q.a - q.c;
    let s2 = s * s;
    let (t1v, t3v) = (t1(q, sigma0), t3(q, sigma0));
    let bracket = (4.0 * s2 - t1v).powi(3)
        - 3.0 * t3v * (16.0 * s2 * s2 + 28.0 * t1v * s2 + t1v * t1v)
        + 3.0 * t3v * t3v * (4.0 * s2 - t1v)
        - t3v.powi(3);
    64.0 * s2 * t1v * t3v * bracket
}

/// The first-kind bifurcation function: `f1(sigma0) = 0` exactly where the
/// tangency quartic acquires a double root and the count of first-kind
/// critical points changes between 2 and 4.
///
/// The cube-root radicands `(A-C)² T1²` and `(A-C)⁴ T1` are non-negative by
/// construction; real non-negative cube roots are used.
pub fn f1(q: &QuadHopfHamiltonian, sigma0: f64) -> f64 {
    let s2 = (q.a - q.c) * (q.a - q.c);
    let (t1v, t3v) = (t1(q, sigma0), t3(q, sigma0));
    let cbrt1 = (s2 * t1v * t1v).cbrt();
    let cbrt2 = (s2 * s2 * t1v).cbrt();
    -4.0 * s2 + t1v + t3v - 3.0 * 2f64.powf(2.0 / 3.0) * cbrt1
        + 6.0 * 2f64.cbrt() * cbrt2
}

/// Result of the `f1` root search.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct F1Roots {
    /// Simple positive roots, ascending.
    pub roots: Vec<f64>,
    /// True when two roots closer than the merge width were collapsed
    /// (the bifurcation is possibly tangent rather than transversal).
    pub possibly_tangent_root: bool,
    /// True when `Delta1 = Delta3 = 0` makes `f1` constant in `sigma0`
    /// (either no roots or identically zero).
    pub constant_in_sigma0: bool,
}

/// All positive roots of `f1` on `(0, sigma0_max]`, by a 2048-point sign
/// scan refined with bisection to `1e-12` absolute.
pub fn f1_roots(q: &QuadHopfHamiltonian, sigma0_max: f64) -> Result<F1Roots> {
    require_diagonal(q)?;
    if q.a == q.c {
        return Err(Error::IsotropicDegenerate);
    }
    if !(sigma0_max > 0.0) {
        return Err(Error::InvalidParams(format!(
            "sigma0_max must be positive, got {sigma0_max}"
        )));
    }
    let mut out = F1Roots::default();
    if q.delta1 == 0.0 && q.delta3 == 0.0 {
        // T1, T3 constant: f1 does not depend on sigma0.
        out.constant_in_sigma0 = true;
        return Ok(out);
    }
    const N: usize = 2048;
    let mut prev_x = sigma0_max / N as f64;
    let mut prev_f = f1(q, prev_x);
    for i in 2..=N {
        let x = sigma0_max * i as f64 / N as f64;
        let fx = f1(q, x);
        if prev_f == 0.0 {
            out.roots.push(prev_x);
        } else if fx != 0.0 && fx.signum() != prev_f.signum() {
            let r = bisect(|s| f1(q, s), prev_x, x, 1e-12);
            out.roots.push(r);
        }
        prev_x = x;
        prev_f = fx;
    }
    if prev_f == 0.0 {
        out.roots.push(prev_x);
    }
    out.roots.sort_by(f64::total_cmp);
    // Roots closer than the merge width are reported once and flagged.
    let mut merged: Vec<f64> = Vec::with_capacity(out.roots.len());
    for r in out.roots.drain(..) {
        match merged.last() {
            Some(&last) if (r - last).abs() < 1e-10 => out.possibly_tangent_root = true,
            _ => merged.push(r),
        }
    }
    out.roots = merged;
    Ok(out)
}

/// The second-kind bifurcation function `f2(sigma0) = -4 + T1/A² + T3/C²`.
///
/// A second-kind pair exists exactly where `f2 < 0` (the line of degenerate
/// intersection pierces the sphere), so its roots are the thresholds at which
/// the pair appears or disappears.
pub fn f2(q: &QuadHopfHamiltonian, sigma0: f64) -> f64 {
    -4.0 + t1(q, sigma0) / (q.a * q.a) + t3(q, sigma0) / (q.c * q.c)
}

/// Second-kind bifurcation values of `sigma0`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CpiiValues {
    /// Positive roots of `f2`, ascending (0, 1 or 2 of them).
    pub sigma0: Vec<f64>,
    /// Real roots that were discarded because `sigma0 <= 0`.
    pub filtered_nonpositive: Vec<f64>,
    /// True when the quadratic degenerates to a single linear solution.
    pub single_solution_branch: bool,
}

/// Solve `f2(sigma0) = 0` in closed form.
///
/// Clearing denominators turns `f2 = 0` into a quadratic in `sigma0` whose
/// leading coefficient is `C²D1² + A²(D3² - 4C²)`; when that vanishes the
/// equation is linear and has the single solution branch. Negative and zero
/// roots are filtered into a diagnostics field.
pub fn cpii_values(q: &QuadHopfHamiltonian) -> Result<CpiiValues> {
    require_diagonal(q)?;
    if q.a == 0.0 || q.c == 0.0 {
        return Err(Error::SecondKindDegenerate);
    }
    let (a2, c2) = (q.a * q.a, q.c * q.c);
    let qa = c2 * q.d1 * q.d1 + a2 * (q.d3 * q.d3 - 4.0 * c2);
    let qb = 2.0 * (c2 * q.d1 * q.delta1 + a2 * q.d3 * q.delta3);
    let qc = c2 * q.delta1 * q.delta1 + a2 * q.delta3 * q.delta3;

    let mut out = CpiiValues::default();
    let coeff_scale = qa.abs().max(qb.abs()).max(qc.abs()).max(1e-300);
    let mut candidates: Vec<f64> = Vec::new();
    if qa.abs() <= 1e-14 * coeff_scale {
        // Degenerate leading coefficient: the single-solution branch.
        out.single_solution_branch = true;
        if qb != 0.0 {
            candidates.push(-qc / qb);
        }
    } else {
        let disc = qb * qb - 4.0 * qa * qc;
        if disc >= 0.0 {
            // Numerically stable quadratic roots.
            let sq = disc.sqrt();
            let big = -0.5 * (qb + sq.copysign(if qb == 0.0 { 1.0 } else { qb }));
            if big == 0.0 {
                candidates.push(0.0);
            } else {
                candidates.push(big / qa);
                candidates.push(qc / big);
            }
        }
    }
    for root in candidates {
        let polished = if root > 0.0 {
            newton_polish(
                |s| f2(q, s),
                |s| {
                    let u1 = q.d1 + q.delta1 / s;
                    let u3 = q.d3 + q.delta3 / s;
                    -2.0 * (u1 * q.delta1 / (a2 * s * s) + u3 * q.delta3 / (c2 * s * s))
                },
                root,
                0.5 * root,
                1.5 * root,
                4,
            )
        } else {
            root
        };
        if polished > 0.0 && residual_ok(f2(q, polished), 4.0 + f2(q, polished).abs(), 1e-9) {
            out.sigma0.push(polished);
        } else {
            out.filtered_nonpositive.push(polished);
        }
    }
    out.sigma0.sort_by(f64::total_cmp);
    out.sigma0.dedup_by(|x, y| (*x - *y).abs() <= 1e-12 * y.abs().max(1e-300));
    Ok(out)
}

/// The second-kind center, its feasibility and its stability at fixed
/// `sigma0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CpiiCenter {
    /// Stationary point of `Z` in the `(sigma1, sigma3)` plane.
    pub sigma1: f64,
    pub sigma3: f64,
    /// True when the center lies strictly inside the meridian circle, i.e.
    /// a mirror pair of fixed points exists at `sigma2 = ±sigma2_abs`.
    pub exists: bool,
    /// `sqrt(sigma0² - sigma1² - sigma3²)` when the pair exists, else 0.
    pub sigma2_abs: f64,
    /// Stable iff the Hessian of `Z` is sign-definite.
    pub stability: Stability,
}

/// Center of the degenerate-intersection family and its stability:
/// the solution of `dZ/dsigma1 = dZ/dsigma3 = 0`.
///
/// Works for any cross coefficient `B`; for a diagonalised model the center
/// is `(-D/(2A), -E/(2C))` and the pair is stable exactly when `A·C > 0`.
pub fn cpii_center_and_stability(q: &QuadHopfHamiltonian, sigma0: f64) -> Result<CpiiCenter> {
    let det = 4.0 * q.a * q.c - q.b * q.b;
    if det == 0.0 {
        return Err(Error::SecondKindDegenerate);
    }
    // Solve [2A B; B 2C] x = -(D, E).
    let (d, e) = (q.d_at(sigma0), q.e_at(sigma0));
    let sigma1 = (-2.0 * q.c * d + q.b * e) / det;
    let sigma3 = (q.b * d - 2.0 * q.a * e) / det;
    let r2 = sigma1 * sigma1 + sigma3 * sigma3;
    let exists = r2 < sigma0 * sigma0;
    let sigma2_abs = if exists { (sigma0 * sigma0 - r2).sqrt() } else { 0.0 };
    let stability = if det > 0.0 { Stability::Stable } else { Stability::Unstable };
    Ok(CpiiCenter { sigma1, sigma3, exists, sigma2_abs, stability })
}

/// Bifurcation values of both kinds for a diagonalised model, with the
/// special-branch diagnostics collected.
#[derive(Debug, Clone, PartialEq)]
pub struct BifurcationValues {
    /// Roots of `f1` (first-kind count change), ascending.
    pub cpi_sigma0: Vec<f64>,
    /// Roots of `f2` (second-kind pair appears/disappears), ascending.
    pub cpii_sigma0: Vec<f64>,
    pub possibly_tangent_root: bool,
    pub cpii_single_solution_branch: bool,
    pub cpii_filtered_nonpositive: Vec<f64>,
}

/// Convenience wrapper running both `f1_roots` and `cpii_values`.
pub fn bifurcation_values(q: &QuadHopfHamiltonian, sigma0_max: f64) -> Result<BifurcationValues> {
    let f1r = f1_roots(q, sigma0_max)?;
    let f2r = cpii_values(q)?;
    Ok(BifurcationValues {
        cpi_sigma0: f1r.roots,
        cpii_sigma0: f2r.sigma0,
        possibly_tangent_root: f1r.possibly_tangent_root,
        cpii_single_solution_branch: f2r.single_solution_branch,
        cpii_filtered_nonpositive: f2r.filtered_nonpositive,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;

    #[test]
    fn identity_rotation_for_diagonal_input() {
        let q = QuadHopfHamiltonian::new(1.0, 0.0, -2.0, 0.1, 0.0, 0.2, 0.0);
        let (r, rot) = rotate_to_diagonal(&q).unwrap();
        assert_eq!(r, q);
        assert_eq!(rot, Rotation::IDENTITY);
    }

    #[test]
    fn isotropic_input_is_rejected() {
        let q = QuadHopfHamiltonian::new(1.0, 0.0, 1.0, 0.1, 0.0, 0.2, 0.0);
        assert!(matches!(rotate_to_diagonal(&q), Err(Error::IsotropicDegenerate)));
    }

    #[test]
    fn rotation_reproduces_published_octupole_values() {
        let (r, _) = rotate_to_diagonal(&models::octupole_reference()).unwrap();
        // Published to six significant digits; compare at 5.
        let expect = [
            (r.a, 0.00610734),
            (r.c, -0.0344709),
            (r.d1, -0.089863),
            (r.delta1, 0.000492281),
            (r.d3, -0.330852),
            (r.delta3, 0.00187156),
        ];
        for (got, want) in expect {
            assert!(
                (got - want).abs() <= 1e-5 * want.abs(),
                "rotated coefficient {got} vs published {want}"
            );
        }
    }

    #[test]
    fn rotation_preserves_spectral_invariants() {
        let q = QuadHopfHamiltonian::new(0.7, -0.4, -0.2, 0.3, 0.05, -0.8, 0.01);
        let (r, rot) = rotate_to_diagonal(&q).unwrap();
        assert!(r.b.abs() <= 1e-12 * q.a.abs().max(q.b.abs()).max(q.c.abs()));
        assert!((rot.alpha * rot.alpha + rot.beta * rot.beta - 1.0).abs() < 1e-15);
        assert!(((r.a + r.c) - (q.a + q.c)).abs() < 1e-14);
        assert!((r.a * r.c - (q.a * q.c - 0.25 * q.b * q.b)).abs() < 1e-14);
        for s0 in [0.3, 1.7] {
            let n_old = q.d_at(s0).hypot(q.e_at(s0));
            let n_new = r.d_at(s0).hypot(r.e_at(s0));
            assert!((n_old - n_new).abs() <= 1e-12 * n_old.max(1e-300));
        }
    }

    #[test]
    fn quartic_root_count_in_and_out_of_window() {
        let (q, _) = rotate_to_diagonal(&models::octupole_reference()).unwrap();
        for (sigma0, expect) in [(0.0055, 4), (0.010, 2)] {
            let found = cpi_quartic_roots(&q, sigma0).unwrap();
            assert_eq!(found.roots.len(), expect, "tangency count at sigma0 = {sigma0}");
            for cp in &found.roots {
                let r2 = cp.sigma1 * cp.sigma1 + cp.sigma3 * cp.sigma3;
                let s2 = sigma0 * sigma0;
                assert!((r2 - s2).abs() <= 1e-10 * s2, "constraint residual {}", r2 - s2);
            }
        }
    }

    #[test]
    fn f1_roots_match_published_thresholds() {
        let (q, _) = rotate_to_diagonal(&models::octupole_reference()).unwrap();
        let roots = f1_roots(&q, models::REFERENCE_AMD).unwrap();
        assert_eq!(roots.roots.len(), 2);
        assert!((roots.roots[0] - 0.00489265).abs() < 1e-6);
        assert!((roots.roots[1] - 0.00655611).abs() < 1e-6);
        assert!(!roots.possibly_tangent_root);
    }

    #[test]
    fn quartic_has_double_root_at_f1_roots() {
        let (q, _) = rotate_to_diagonal(&models::octupole_reference()).unwrap();
        for root in f1_roots(&q, models::REFERENCE_AMD).unwrap().roots {
            let mus: Vec<f64> = cpi_quartic_roots(&q, root).unwrap().roots.iter().map(|r| r.mu).collect();
            let min_gap = mus
                .windows(2)
                .map(|w| (w[1] - w[0]).abs())
                .fold(f64::INFINITY, f64::min);
            let scale = mus.iter().fold(0.0f64, |s, m| s.max(m.abs()));
            assert!(min_gap < 1e-5 * scale, "min mu gap {min_gap} at sigma0 = {root}");
        }
    }

    #[test]
    fn discriminant_changes_sign_across_threshold() {
        let (q, _) = rotate_to_diagonal(&models::octupole_reference()).unwrap();
        assert!(discriminant_q(&q, 0.0045).signum() != discriminant_q(&q, 0.0055).signum());
    }

    #[test]
    fn t_zero_is_an_artifact_not_a_root() {
        let (q, _) = rotate_to_diagonal(&models::octupole_reference()).unwrap();
        let s_t1 = -q.delta1 / q.d1;
        assert!(s_t1 > 0.0);
        assert!(discriminant_q(&q, s_t1).abs() < 1e-12);
        // Q touches zero but does not cross: same sign on both sides.
        let eps = 1e-6 * s_t1;
        assert_eq!(
            discriminant_q(&q, s_t1 - eps).signum(),
            discriminant_q(&q, s_t1 + eps).signum()
        );
        // And f1 has no root there.
        assert!(f1(&q, s_t1).abs() > 1e-9);
    }

    #[test]
    fn discriminant_vanishes_at_f1_roots() {
        let (q, _) = rotate_to_diagonal(&models::octupole_reference()).unwrap();
        for root in f1_roots(&q, models::REFERENCE_AMD).unwrap().roots {
            // Scale: the discriminant's own magnitude just outside the root.
            let scale = discriminant_q(&q, root * 1.01).abs().max(discriminant_q(&q, root * 0.99).abs());
            assert!(discriminant_q(&q, root).abs() <= 1e-9 * scale.max(1e-300));
        }
    }

    #[test]
    fn constant_t_functions_give_no_f1_roots() {
        let q = QuadHopfHamiltonian::new(1.0, 0.0, -1.0, 0.5, 0.0, 0.7, 0.0);
        let r = f1_roots(&q, 1.0).unwrap();
        assert!(r.roots.is_empty());
        assert!(r.constant_in_sigma0);
    }

    #[test]
    fn cpii_values_match_published_thresholds() {
        let (q, _) = rotate_to_diagonal(&models::octupole_reference()).unwrap();
        let v = cpii_values(&q).unwrap();
        assert_eq!(v.sigma0.len(), 2);
        assert!((v.sigma0[0] - 0.00497142).abs() < 1e-6);
        assert!((v.sigma0[1] - 0.00623676).abs() < 1e-6);
    }

    #[test]
    fn cpii_center_lies_on_circle_at_thresholds() {
        let (q, _) = rotate_to_diagonal(&models::octupole_reference()).unwrap();
        for s0 in cpii_values(&q).unwrap().sigma0 {
            let c = cpii_center_and_stability(&q, s0).unwrap();
            let r2 = c.sigma1 * c.sigma1 + c.sigma3 * c.sigma3;
            assert!((r2 - s0 * s0).abs() <= 1e-10 * s0 * s0);
        }
    }

    #[test]
    fn constant_negative_f2_has_no_roots() {
        let q = QuadHopfHamiltonian::new(1.0, 0.0, 1.0, 1.0, 0.0, 1.0, 0.0);
        let v = cpii_values(&q).unwrap();
        assert!(v.sigma0.is_empty());
        assert_eq!(f2(&q, 0.123), -2.0);
    }

    #[test]
    fn cpii_window_and_stability_for_reference_models() {
        let (oct, _) = rotate_to_diagonal(&models::octupole_reference()).unwrap();
        let inside = cpii_center_and_stability(&oct, 0.0055).unwrap();
        assert!(inside.exists);
        assert_eq!(inside.stability, Stability::Unstable); // A·C < 0
        let outside = cpii_center_and_stability(&oct, 0.0070).unwrap();
        assert!(!outside.exists);

        let (ell, _) = rotate_to_diagonal(&models::elliptic_reference()).unwrap();
        assert!(ell.a * ell.c > 0.0);
        let win = cpii_values(&ell).unwrap().sigma0;
        if win.len() == 2 {
            let mid = 0.5 * (win[0] + win[1]);
            let c = cpii_center_and_stability(&ell, mid).unwrap();
            assert!(c.exists);
            assert_eq!(c.stability, Stability::Stable);
        }
    }

    #[test]
    fn conic_classification_of_reference_models() {
        assert_eq!(models::elliptic_reference().conic_class(), ConicClass::Ellipse);
        assert_eq!(models::hyperbolic_reference().conic_class(), ConicClass::Hyperbola);
        assert_eq!(models::octupole_reference().conic_class(), ConicClass::Hyperbola);
        let diag = QuadHopfHamiltonian::new(1.0, 0.0, 2.0, 0.0, 0.0, 0.0, 0.0);
        assert_eq!(diag.conic_class(), ConicClass::Ellipse);
    }

    #[test]
    fn second_kind_degenerate_when_a_or_c_vanishes() {
        let q = QuadHopfHamiltonian::new(0.0, 0.0, 1.0, 0.1, 0.0, 0.1, 0.0);
        assert!(matches!(cpii_values(&q), Err(Error::SecondKindDegenerate)));
    }

    #[test]
    fn symmetric_branch_when_a_linear_coefficient_vanishes() {
        // D(sigma0) = D1 sigma0 + Delta1 = 0 at sigma0 = 0.01: the model is
        // mirror-symmetric in sigma1 there and mu = A solves the tangency
        // equation with a symmetric pair plus the two axis points.
        let q = QuadHopfHamiltonian::new(0.004, 0.0, -0.03, -0.1, 0.001, -0.3, 0.002);
        let sigma0 = 0.01;
        assert!(q.d_at(sigma0).abs() < 1e-18);
        let found = cpi_quartic_roots(&q, sigma0).unwrap();
        assert_eq!(found.branch, QuarticBranch::SymmetricSigma1);
        let paired: Vec<&CpiRoot> = found.roots.iter().filter(|r| r.mu == q.a).collect();
        match paired.len() {
            2 => {
                assert!((paired[0].sigma1 + paired[1].sigma1).abs() < 1e-15);
                assert_eq!(paired[0].sigma3, paired[1].sigma3);
            }
            0 => {}
            n => panic!("unexpected symmetric-pair count {n}"),
        }
        // The axis points satisfy the tangency condition exactly and the
        // census agrees with the direct meridian scan.
        let numeric =
            crate::scan::find_cpi(&q.to_poly(), sigma0, &crate::scan::ScanOptions::default())
                .unwrap();
        assert_eq!(numeric.len(), found.roots.len());
        for r in &found.roots {
            let (d1, d3) = q.to_poly().grad13(sigma0, r.sigma1, r.sigma3);
            let g = r.sigma3 * d1 - r.sigma1 * d3;
            assert!(g.abs() < 1e-12 * sigma0, "tangency residual {g}");
        }
    }
}
