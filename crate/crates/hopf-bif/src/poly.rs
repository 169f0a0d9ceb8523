//! Polynomial Hamiltonians on the reduced sphere.
//!
//! An integrable model is a polynomial `Z(sigma0, sigma1, sigma3)`; it never
//! depends on `sigma2` (the Hamiltonian is even in the difference of the
//! pericenter arguments), so a monomial is determined by the exponents of
//! `sigma0`, `sigma1` and `sigma3` alone.

use serde::{Deserialize, Serialize};

/// One monomial `coef * sigma0^p0 * sigma1^p1 * sigma3^p3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HopfMonomial {
    pub p0: u32,
    pub p1: u32,
    pub p3: u32,
    pub coef: f64,
}

/// A polynomial Hamiltonian in the Hopf variables `(sigma0, sigma1, sigma3)`.
///
/// Duplicate monomials are merged and zero coefficients dropped on
/// construction, and terms are kept in a fixed exponent order so that equal
/// polynomials compare (and serialize) identically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyHopfHamiltonian {
    terms: Vec<HopfMonomial>,
}

impl PolyHopfHamiltonian {
    pub fn new(terms: impl IntoIterator<Item = HopfMonomial>) -> Self {
        let mut terms: Vec<HopfMonomial> = terms.into_iter().collect();
        terms.sort_by_key(|t| (t.p0, t.p1, t.p3));
        let mut merged: Vec<HopfMonomial> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.last_mut() {
                Some(last) if (last.p0, last.p1, last.p3) == (t.p0, t.p1, t.p3) => {
                    last.coef += t.coef;
                }
                _ => merged.push(t),
            }
        }
        merged.retain(|t| t.coef != 0.0);
        Self { terms: merged }
    }

    /// Convenience constructor from `(p0, p1, p3, coef)` tuples.
    pub fn from_tuples(terms: &[(u32, u32, u32, f64)]) -> Self {
        Self::new(terms.iter().map(|&(p0, p1, p3, coef)| HopfMonomial { p0, p1, p3, coef }))
    }

    pub fn terms(&self) -> &[HopfMonomial] {
        &self.terms
    }

    /// Maximum total degree, counting `sigma0` as degree one.
    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|t| t.p0 + t.p1 + t.p3).max().unwrap_or(0)
    }

    /// True when the polynomial has no `sigma1`/`sigma3` dependence, i.e. it
    /// is constant on every sphere of fixed radius.
    pub fn is_constant_on_sphere(&self) -> bool {
        self.terms.iter().all(|t| t.p1 == 0 && t.p3 == 0)
    }

    pub fn eval(&self, sigma0: f64, sigma1: f64, sigma3: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| t.coef * powi(sigma0, t.p0) * powi(sigma1, t.p1) * powi(sigma3, t.p3))
            .sum()
    }

    /// `(dZ/dsigma1, dZ/dsigma3)` at a point, in one pass over the terms.
    pub fn grad13(&self, sigma0: f64, sigma1: f64, sigma3: f64) -> (f64, f64) {
        let mut d1 = 0.0;
        let mut d3 = 0.0;
        for t in &self.terms {
            let s0 = powi(sigma0, t.p0);
            if t.p1 > 0 {
                d1 += t.coef
                    * s0
                    * (t.p1 as f64)
                    * powi(sigma1, t.p1 - 1)
                    * powi(sigma3, t.p3);
            }
            if t.p3 > 0 {
                d3 += t.coef
                    * s0
                    * powi(sigma1, t.p1)
                    * (t.p3 as f64)
                    * powi(sigma3, t.p3 - 1);
            }
        }
        (d1, d3)
    }

    /// Second derivatives `(Z_11, Z_13, Z_33)` with respect to
    /// `(sigma1, sigma3)`.
    pub fn hessian13(&self, sigma0: f64, sigma1: f64, sigma3: f64) -> (f64, f64, f64) {
        let mut h11 = 0.0;
        let mut h13 = 0.0;
        let mut h33 = 0.0;
        for t in &self.terms {
            let s0 = powi(sigma0, t.p0);
            if t.p1 >= 2 {
                h11 += t.coef
                    * s0
                    * (t.p1 * (t.p1 - 1)) as f64
                    * powi(sigma1, t.p1 - 2)
                    * powi(sigma3, t.p3);
            }
            if t.p1 >= 1 && t.p3 >= 1 {
                h13 += t.coef
                    * s0
                    * (t.p1 * t.p3) as f64
                    * powi(sigma1, t.p1 - 1)
                    * powi(sigma3, t.p3 - 1);
            }
            if t.p3 >= 2 {
                h33 += t.coef
                    * s0
                    * (t.p3 * (t.p3 - 1)) as f64
                    * powi(sigma1, t.p1)
                    * powi(sigma3, t.p3 - 2);
            }
        }
        (h11, h13, h33)
    }

    /// `dZ/dsigma0` at a point (enters the full 2-DOF flow, not the reduced
    /// one).
    pub fn d_sigma0(&self, sigma0: f64, sigma1: f64, sigma3: f64) -> f64 {
        self.terms
            .iter()
            .filter(|t| t.p0 > 0)
            .map(|t| {
                t.coef
                    * (t.p0 as f64)
                    * powi(sigma0, t.p0 - 1)
                    * powi(sigma1, t.p1)
                    * powi(sigma3, t.p3)
            })
            .sum()
    }
}

fn powi(base: f64, exp: u32) -> f64 {
    match exp {
        0 => 1.0,
        1 => base,
        2 => base * base,
        _ => base.powi(exp as i32),
    }
}
