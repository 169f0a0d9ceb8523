//! Input loading and deterministic output formatting.

use std::fs;
use std::path::Path;

use hopf_bif::{PoincareMonomial, PoincarePolyHamiltonian, PolyHopfHamiltonian, QuadHopfHamiltonian, SystemParams};
use serde::Deserialize;

use crate::CliError;

/// A model file is either a quadratic coefficient set or a general
/// polynomial given by its monomials.
pub enum Model {
    Quad(QuadHopfHamiltonian),
    Poly(PolyHopfHamiltonian),
}

impl Model {
    pub fn to_poly(&self) -> PolyHopfHamiltonian {
        match self {
            Model::Quad(q) => q.to_poly(),
            Model::Poly(p) => p.clone(),
        }
    }
}

#[derive(Deserialize)]
struct PolyFile {
    terms: Vec<PolyTerm>,
}

#[derive(Deserialize)]
struct PolyTerm {
    p0: u32,
    p1: u32,
    p3: u32,
    coef: f64,
}

#[derive(Deserialize)]
struct PoincareFile {
    terms: Vec<PoincareTerm>,
}

#[derive(Deserialize)]
struct PoincareTerm {
    e2: u32,
    e2y: u32,
    e3: u32,
    e3y: u32,
    coef: f64,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::schema(format!("cannot read {}: {e}", path.display())))
}

fn json_err(path: &Path, e: &serde_json::Error) -> CliError {
    CliError::schema(format!(
        "{}: {} at line {}, column {}",
        path.display(),
        e,
        e.line(),
        e.column()
    ))
}

/// Load a reduced-model file, dispatching on the presence of a `terms` key.
pub fn load_model(path: &Path) -> Result<Model, CliError> {
    let text = read(path)?;
    let probe: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| json_err(path, &e))?;
    if probe.get("terms").is_some() {
        let file: PolyFile = serde_json::from_str(&text).map_err(|e| json_err(path, &e))?;
        let poly = PolyHopfHamiltonian::new(file.terms.iter().map(|t| hopf_bif::HopfMonomial {
            p0: t.p0,
            p1: t.p1,
            p3: t.p3,
            coef: t.coef,
        }));
        Ok(Model::Poly(poly))
    } else {
        let quad: QuadHopfHamiltonian =
            serde_json::from_str(&text).map_err(|e| json_err(path, &e))?;
        if ![quad.a, quad.b, quad.c, quad.d1, quad.delta1, quad.d3, quad.delta3]
            .iter()
            .all(|v| v.is_finite())
        {
            return Err(CliError::schema(format!(
                "{}: non-finite coefficient",
                path.display()
            )));
        }
        Ok(Model::Quad(quad))
    }
}

/// Load a full-flow Hamiltonian in Poincaré variables.
pub fn load_poincare(path: &Path) -> Result<PoincarePolyHamiltonian, CliError> {
    let text = read(path)?;
    let file: PoincareFile = serde_json::from_str(&text).map_err(|e| json_err(path, &e))?;
    Ok(PoincarePolyHamiltonian::new(file.terms.iter().map(|t| PoincareMonomial {
        e2: t.e2,
        e2y: t.e2y,
        e3: t.e3,
        e3y: t.e3y,
        coef: t.coef,
    })))
}

/// Load system parameters with validation.
pub fn load_params(path: &Path) -> Result<SystemParams, CliError> {
    let text = read(path)?;
    let params: SystemParams = serde_json::from_str(&text).map_err(|e| json_err(path, &e))?;
    params.validate().map_err(|e| CliError::schema(e.to_string()))?;
    Ok(params)
}

/// Shortest round-trip decimal form: plain positional notation in the
/// human-friendly magnitude range, scientific outside it. Both forms parse
/// back to the identical bits, so equal inputs give byte-identical output.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let a = x.abs();
    if (1e-4..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}
