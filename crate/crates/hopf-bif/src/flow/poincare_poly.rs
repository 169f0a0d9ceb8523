//! Polynomial Hamiltonians in the full Poincaré variables `(X2, Y2, X3, Y3)`.

use serde::{Deserialize, Serialize};

use crate::hopf::PoincareState;
use crate::poly::PolyHopfHamiltonian;

/// One monomial `coef * X2^e2 * Y2^e2y * X3^e3 * Y3^e3y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoincareMonomial {
    pub e2: u32,
    pub e2y: u32,
    pub e3: u32,
    pub e3y: u32,
    pub coef: f64,
}

/// A polynomial Hamiltonian of the full 2-DOF flow, with `X_j` the
/// coordinates and `Y_j` the momenta:
/// `X2' = dH/dY2, Y2' = -dH/dX2, X3' = dH/dY3, Y3' = -dH/dX3`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoincarePolyHamiltonian {
    terms: Vec<PoincareMonomial>,
}

impl PoincarePolyHamiltonian {
    pub fn new(terms: impl IntoIterator<Item = PoincareMonomial>) -> Self {
        let mut terms: Vec<PoincareMonomial> = terms.into_iter().collect();
        terms.sort_by_key(|t| (t.e2, t.e2y, t.e3, t.e3y));
        let mut merged: Vec<PoincareMonomial> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.last_mut() {
                Some(last)
                    if (last.e2, last.e2y, last.e3, last.e3y) == (t.e2, t.e2y, t.e3, t.e3y) =>
                {
                    last.coef += t.coef;
                }
                _ => merged.push(t),
            }
        }
        merged.retain(|t| t.coef != 0.0);
        Self { terms: merged }
    }

    pub fn terms(&self) -> &[PoincareMonomial] {
        &self.terms
    }

    /// Expand a reduced-model polynomial `Z(sigma0, sigma1, sigma3)` through
    /// the defining quadratic forms of the Hopf map. The result generates the
    /// same flow in the full variables.
    pub fn from_hopf(z: &PolyHopfHamiltonian) -> Self {
        // sigma0 = (x2² + y2² + x3² + y3²)/2, sigma1 = x2 x3 + y2 y3,
        // sigma3 = (x2² + y2² - x3² - y3²)/2.
        let sigma0 = Poly4::from_terms(&[
            ([2, 0, 0, 0], 0.5),
            ([0, 2, 0, 0], 0.5),
            ([0, 0, 2, 0], 0.5),
            ([0, 0, 0, 2], 0.5),
        ]);
        let sigma1 = Poly4::from_terms(&[([1, 0, 1, 0], 1.0), ([0, 1, 0, 1], 1.0)]);
        let sigma3 = Poly4::from_terms(&[
            ([2, 0, 0, 0], 0.5),
            ([0, 2, 0, 0], 0.5),
            ([0, 0, 2, 0], -0.5),
            ([0, 0, 0, 2], -0.5),
        ]);
        let mut acc = Poly4::zero();
        for t in z.terms() {
            let mut term = Poly4::constant(t.coef);
            term = term.mul(&sigma0.pow(t.p0));
            term = term.mul(&sigma1.pow(t.p1));
            term = term.mul(&sigma3.pow(t.p3));
            acc = acc.add(&term);
        }
        Self::new(acc.terms.into_iter().map(|(e, coef)| PoincareMonomial {
            e2: e[0] as u32,
            e2y: e[1] as u32,
            e3: e[2] as u32,
            e3y: e[3] as u32,
            coef,
        }))
    }

    pub fn eval(&self, p: &PoincareState) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                t.coef
                    * p.x2.powi(t.e2 as i32)
                    * p.y2.powi(t.e2y as i32)
                    * p.x3.powi(t.e3 as i32)
                    * p.y3.powi(t.e3y as i32)
            })
            .sum()
    }

    /// Gradient `(dH/dX2, dH/dY2, dH/dX3, dH/dY3)`.
    pub fn grad(&self, p: &PoincareState) -> [f64; 4] {
        let mut g = [0.0; 4];
        for t in &self.terms {
            let pw = [
                (t.e2, p.x2),
                (t.e2y, p.y2),
                (t.e3, p.x3),
                (t.e3y, p.y3),
            ];
            for (k, &(e, v)) in pw.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let mut prod = t.coef * e as f64 * v.powi(e as i32 - 1);
                for (j, &(ej, vj)) in pw.iter().enumerate() {
                    if j != k {
                        prod *= vj.powi(ej as i32);
                    }
                }
                g[k] += prod;
            }
        }
        g
    }

    /// Hamiltonian vector field `(X2', Y2', X3', Y3')`.
    pub fn rhs(&self, p: &PoincareState) -> [f64; 4] {
        let g = self.grad(p);
        [g[1], -g[0], g[3], -g[2]]
    }
}

/// Minimal dense polynomial in four variables, used only for the expansion.
struct Poly4 {
    /// Sorted exponent-vector -> coefficient pairs.
    terms: Vec<([u8; 4], f64)>,
}

impl Poly4 {
    fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    fn constant(c: f64) -> Self {
        if c == 0.0 {
            Self::zero()
        } else {
            Self { terms: vec![([0; 4], c)] }
        }
    }

    fn from_terms(t: &[([u8; 4], f64)]) -> Self {
        Self { terms: t.to_vec() }.normalised()
    }

    fn normalised(mut self) -> Self {
        self.terms.sort_by_key(|(e, _)| *e);
        let mut merged: Vec<([u8; 4], f64)> = Vec::with_capacity(self.terms.len());
        for (e, c) in self.terms {
            match merged.last_mut() {
                Some((le, lc)) if *le == e => *lc += c,
                _ => merged.push((e, c)),
            }
        }
        merged.retain(|(_, c)| *c != 0.0);
        Self { terms: merged }
    }

    fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        Self { terms }.normalised()
    }

    fn mul(&self, other: &Self) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]];
                terms.push((e, ca * cb));
            }
        }
        Self { terms }.normalised()
    }

    fn pow(&self, n: u32) -> Self {
        let mut acc = Poly4::constant(1.0);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }
}
