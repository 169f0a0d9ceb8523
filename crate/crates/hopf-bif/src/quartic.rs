//! Real roots of quartic polynomials via balanced companion-matrix
//! eigenvalues.
//!
//! Closed-form quartic formulas lose most of their accuracy on the
//! nearly-degenerate coefficient sets that show up close to bifurcation
//! values, so the roots are taken as eigenvalues of the (balanced) Frobenius
//! companion matrix and polished by Newton iterations on the original
//! polynomial.

use nalgebra::Matrix4;

/// Eigenvalue imaginary parts below `IMAG_TOL * scale` are treated as
/// rounding noise of a real root.
const IMAG_TOL: f64 = 1e-8;

/// Evaluate `c[0] + c[1] x + ... + c[4] x^4` by Horner's rule.
pub fn eval(c: &[f64; 5], x: f64) -> f64 {
    (((c[4] * x + c[3]) * x + c[2]) * x + c[1]) * x + c[0]
}

fn eval_deriv(c: &[f64; 5], x: f64) -> f64 {
    ((4.0 * c[4] * x + 3.0 * c[3]) * x + 2.0 * c[2]) * x + c[1]
}

/// All real roots of the quartic `c[0] + c[1] x + ... + c[4] x^4`, sorted
/// ascending. Multiple roots are reported once per eigenvalue, so a double
/// root shows up twice.
///
/// `c[4]` must be nonzero.
pub fn real_roots(c: &[f64; 5]) -> Vec<f64> {
    let eig = companion_eigenvalues(c);
    let monic_scale = c[..4].iter().fold(1.0f64, |s, v| s.max((v / c[4]).abs()));
    let mut roots: Vec<f64> = Vec::with_capacity(4);
    for (re, im) in eig {
        if im.abs() <= IMAG_TOL * re.abs().max(monic_scale.powf(0.25)).max(1e-30) {
            roots.push(polish(c, re));
        }
    }
    // The Schur form can leave a conjugate pair with tiny imaginary parts for
    // a genuine double real root, or real parts for a genuine complex pair.
    // Keep only candidates where the polynomial actually vanishes.
    roots.retain(|&x| eval(c, x).abs() <= 1e-6 * term_scale(c, x));
    roots.sort_by(f64::total_cmp);
    roots
}

/// Real and imaginary parts of all four companion-matrix eigenvalues,
/// unpolished. Callers with an independent acceptance criterion (e.g. a
/// constraint residual) can recover double roots that the Schur form reports
/// as a conjugate pair with small imaginary parts.
pub fn companion_eigenvalues(c: &[f64; 5]) -> [(f64, f64); 4] {
    assert!(c[4] != 0.0, "leading quartic coefficient must be nonzero");
    let monic = [c[0] / c[4], c[1] / c[4], c[2] / c[4], c[3] / c[4]];
    let mut m = Matrix4::new(
        0.0, 0.0, 0.0, -monic[0], //
        1.0, 0.0, 0.0, -monic[1], //
        0.0, 1.0, 0.0, -monic[2], //
        0.0, 0.0, 1.0, -monic[3],
    );
    balance(&mut m);
    let eig = m.complex_eigenvalues();
    [
        (eig[0].re, eig[0].im),
        (eig[1].re, eig[1].im),
        (eig[2].re, eig[2].im),
        (eig[3].re, eig[3].im),
    ]
}

/// Characteristic size of the quartic's terms at `x`; the natural scale for
/// residual tests.
fn term_scale(c: &[f64; 5], x: f64) -> f64 {
    let mut s = 0.0f64;
    let mut xp = 1.0;
    for ck in c {
        s = s.max((ck * xp).abs());
        xp *= x;
    }
    s.max(1e-300)
}

fn polish(c: &[f64; 5], x0: f64) -> f64 {
    let mut x = x0;
    let mut best = x0;
    let mut best_res = eval(c, x0).abs();
    for _ in 0..12 {
        let d = eval_deriv(c, x);
        if d == 0.0 || !d.is_finite() {
            break;
        }
        let step = eval(c, x) / d;
        x -= step;
        if !x.is_finite() {
            break;
        }
        let r = eval(c, x).abs();
        if r < best_res {
            best_res = r;
            best = x;
        }
        if step.abs() <= f64::EPSILON * x.abs().max(1.0) {
            break;
        }
    }
    best
}

/// Parlett–Reinsch balancing restricted to powers of two, so the similarity
/// transform is exact in floating point.
fn balance(m: &mut Matrix4<f64>) {
    let radix = 2.0f64;
    let radix_sq = radix * radix;
    for _ in 0..16 {
        let mut converged = true;
        for i in 0..4 {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..4 {
                if i != j {
                    r += m[(i, j)].abs();
                    c += m[(j, i)].abs();
                }
            }
            if r == 0.0 || c == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / radix;
            while c < g {
                f *= radix;
                c *= radix_sq;
            }
            g = r * radix;
            while c > g {
                f /= radix;
                c /= radix_sq;
            }
            if (c + r) / f < 0.95 * s && f != 1.0 {
                converged = false;
                let inv = 1.0 / f;
                for j in 0..4 {
                    m[(i, j)] *= inv;
                    m[(j, i)] *= f;
                }
            }
        }
        if converged {
            break;
        }
    }
}
