//! Level-curve extraction of the reduced Hamiltonian on the section disk.
//!
//! The `sigma0`-fixed phase portrait is the family of level curves of
//!
//! ```text
//! f(X2, Y2) = Z(sigma0, X2*X3, X2² + Y2² - sigma0),   X3 = sqrt(2 sigma0 - X2² - Y2²)
//! ```
//!
//! on the disk `X2² + Y2² <= 2 sigma0`. Curves are extracted by marching
//! squares with sub-cell linear interpolation; the saddle ambiguity is
//! resolved by the cell-center value. The disk rim maps to the north pole of
//! the sphere, so every grid value outside the disk is pinned to the pole
//! energy, which keeps rim cells consistent, and emitted polylines are
//! clipped to the rim.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::PolyHopfHamiltonian;

/// One extracted level curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PortraitCurve {
    pub level: f64,
    pub sigma0: f64,
    pub closed: bool,
    pub vertices: Vec<(f64, f64)>,
}

/// Contour-extraction options.
#[derive(Debug, Clone, Copy)]
pub struct ContourOptions {
    /// Grid nodes per axis.
    pub grid: usize,
    /// Newton-polish vertices onto the exact level.
    pub polish: bool,
}

impl Default for ContourOptions {
    fn default() -> Self {
        Self { grid: 1024, polish: true }
    }
}

/// The section-disk restriction of the model and its gradient.
pub struct SectionField<'a> {
    z: &'a PolyHopfHamiltonian,
    sigma0: f64,
    radius: f64,
    pole_energy: f64,
}

impl<'a> SectionField<'a> {
    pub fn new(z: &'a PolyHopfHamiltonian, sigma0: f64) -> Self {
        let pole_energy = z.eval(sigma0, 0.0, sigma0);
        Self { z, sigma0, radius: (2.0 * sigma0).sqrt(), pole_energy }
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Field value; points outside the disk take the rim (north-pole) value.
    pub fn value(&self, x2: f64, y2: f64) -> f64 {
        let r2 = x2 * x2 + y2 * y2;
        let x3_sq = 2.0 * self.sigma0 - r2;
        if x3_sq <= 0.0 {
            return self.pole_energy;
        }
        let x3 = x3_sq.sqrt();
        self.z.eval(self.sigma0, x2 * x3, r2 - self.sigma0)
    }

    /// Gradient of the field strictly inside the disk.
    fn grad(&self, x2: f64, y2: f64) -> Option<(f64, f64)> {
        let r2 = x2 * x2 + y2 * y2;
        let x3_sq = 2.0 * self.sigma0 - r2;
        if x3_sq <= 1e-6 * self.sigma0 {
            return None;
        }
        let x3 = x3_sq.sqrt();
        let (d1, d3) = self.z.grad13(self.sigma0, x2 * x3, r2 - self.sigma0);
        Some((
            d1 * (x3 - x2 * x2 / x3) + d3 * 2.0 * x2,
            d1 * (-x2 * y2 / x3) + d3 * 2.0 * y2,
        ))
    }
}

/// Level values covering the portrait with (approximately) equal phase-space
/// area between consecutive levels: quantiles of the field over the disk.
pub fn auto_levels(z: &PolyHopfHamiltonian, sigma0: f64, count: usize) -> Vec<f64> {
    let field = SectionField::new(z, sigma0);
    let n = 256;
    let r = field.radius();
    let mut values = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let x = -r + 2.0 * r * (i as f64 + 0.5) / n as f64;
            let y = -r + 2.0 * r * (j as f64 + 0.5) / n as f64;
            if x * x + y * y < 2.0 * sigma0 {
                values.push(field.value(x, y));
            }
        }
    }
    values.sort_by(f64::total_cmp);
    (0..count)
        .map(|k| values[(values.len() - 1) * (2 * k + 1) / (2 * count)])
        .collect()
}

/// Grid-edge identifier used to stitch marching-squares segments: the edge
/// from node `(x, y)` toward `+x` (`dir = 0`) or `+y` (`dir = 1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct EdgeId {
    x: u32,
    y: u32,
    dir: u8,
}

/// Extract the level curves of the portrait at the given energies.
///
/// Fails with [`Error::EmptyLevel`] for a level outside the attainable range
/// (with a small sampling pad). A level that touches the range boundary but
/// produces no cells degenerates to a single-point curve at the extremum.
pub fn contour_portrait(
    z: &PolyHopfHamiltonian,
    sigma0: f64,
    levels: &[f64],
    opts: &ContourOptions,
) -> Result<Vec<PortraitCurve>> {
    if !(sigma0 > 0.0) {
        return Err(Error::InfeasibleSigma0 { sigma0, sigma0_max: f64::INFINITY });
    }
    let field = SectionField::new(z, sigma0);
    let n = opts.grid.max(16);
    let r = field.radius();
    let step = 2.0 * r / (n - 1) as f64;
    let coord = |i: usize| -> f64 { -r + step * i as f64 };
    let mut grid = vec![0.0f64; n * n];
    let mut vmin = f64::INFINITY;
    let mut vmax = f64::NEG_INFINITY;
    let mut argmin = (0usize, 0usize);
    let mut argmax = (0usize, 0usize);
    for j in 0..n {
        for i in 0..n {
            let v = field.value(coord(i), coord(j));
            grid[j * n + i] = v;
            let inside = coord(i).powi(2) + coord(j).powi(2) < 2.0 * sigma0;
            if inside {
                if v < vmin {
                    vmin = v;
                    argmin = (i, j);
                }
                if v > vmax {
                    vmax = v;
                    argmax = (i, j);
                }
            }
        }
    }
    let range = (vmax - vmin).max(1e-300);
    let pad = 1e-3 * range;

    let mut out = Vec::new();
    for &level in levels {
        if level > vmax + pad || level < vmin - pad {
            return Err(Error::EmptyLevel { level, e_min: vmin, e_max: vmax });
        }
        let curves = march_level(&field, &grid, n, step, r, level, opts);
        if curves.is_empty() {
            // The level grazes an extremum between grid nodes: report the
            // degenerate point-curve there.
            let (i, j) = if (level - vmax).abs() < (level - vmin).abs() { argmax } else { argmin };
            out.push(PortraitCurve {
                level,
                sigma0,
                closed: true,
                vertices: vec![(coord(i), coord(j))],
            });
        } else {
            out.extend(curves.into_iter().map(|(vertices, closed)| PortraitCurve {
                level,
                sigma0,
                closed,
                vertices,
            }));
        }
    }
    Ok(out)
}

fn march_level(
    field: &SectionField,
    grid: &[f64],
    n: usize,
    step: f64,
    r: f64,
    level: f64,
    opts: &ContourOptions,
) -> Vec<(Vec<(f64, f64)>, bool)> {
    let coord = |i: usize| -> f64 { -r + step * i as f64 };
    // Interpolated crossing point on an edge, plus its id.
    let interp = |i0: usize, j0: usize, i1: usize, j1: usize| -> (f64, f64) {
        let (v0, v1) = (grid[j0 * n + i0], grid[j1 * n + i1]);
        let t = ((level - v0) / (v1 - v0)).clamp(0.0, 1.0);
        (
            coord(i0) + t * (coord(i1) - coord(i0)),
            coord(j0) + t * (coord(j1) - coord(j0)),
        )
    };

    let mut segments: Vec<(EdgeId, EdgeId)> = Vec::new();
    let mut positions: HashMap<EdgeId, (f64, f64)> = HashMap::new();
    for j in 0..n - 1 {
        for i in 0..n - 1 {
            // Skip cells fully outside the disk.
            let cell_inside = [(i, j), (i + 1, j), (i, j + 1), (i + 1, j + 1)]
                .iter()
                .any(|&(a, b)| coord(a).powi(2) + coord(b).powi(2) < 2.0 * field.sigma0);
            if !cell_inside {
                continue;
            }
            let mut case = 0u8;
            if grid[j * n + i] > level {
                case |= 1;
            }
            if grid[j * n + i + 1] > level {
                case |= 2;
            }
            if grid[(j + 1) * n + i + 1] > level {
                case |= 4;
            }
            if grid[(j + 1) * n + i] > level {
                case |= 8;
            }
            if case == 0 || case == 15 {
                continue;
            }
            let bottom = EdgeId { x: i as u32, y: j as u32, dir: 0 };
            let top = EdgeId { x: i as u32, y: j as u32 + 1, dir: 0 };
            let left = EdgeId { x: i as u32, y: j as u32, dir: 1 };
            let right = EdgeId { x: i as u32 + 1, y: j as u32, dir: 1 };
            let mut put = |e: EdgeId| {
                positions.entry(e).or_insert_with(|| match e.dir {
                    0 => interp(e.x as usize, e.y as usize, e.x as usize + 1, e.y as usize),
                    _ => interp(e.x as usize, e.y as usize, e.x as usize, e.y as usize + 1),
                });
            };
            let mut emit = |a: EdgeId, b: EdgeId, segs: &mut Vec<(EdgeId, EdgeId)>| {
                put(a);
                put(b);
                segs.push((a, b));
            };
            match case {
                1 | 14 => emit(left, bottom, &mut segments),
                2 | 13 => emit(bottom, right, &mut segments),
                3 | 12 => emit(left, right, &mut segments),
                4 | 11 => emit(right, top, &mut segments),
                6 | 9 => emit(bottom, top, &mut segments),
                7 | 8 => emit(left, top, &mut segments),
                5 | 10 => {
                    // Saddle cell: pair the crossings by the center value.
                    let center = field.value(coord(i) + 0.5 * step, coord(j) + 0.5 * step);
                    let center_high = center > level;
                    let pairs_like_5 = (case == 5) == center_high;
                    if pairs_like_5 {
                        emit(left, top, &mut segments);
                        emit(bottom, right, &mut segments);
                    } else {
                        emit(left, bottom, &mut segments);
                        emit(right, top, &mut segments);
                    }
                }
                _ => unreachable!(),
            }
        }
    }

    // Stitch segments into polylines by shared edge ids.
    let mut incident: HashMap<EdgeId, Vec<usize>> = HashMap::new();
    for (k, (a, b)) in segments.iter().enumerate() {
        incident.entry(*a).or_default().push(k);
        incident.entry(*b).or_default().push(k);
    }
    let mut used = vec![false; segments.len()];
    let mut curves = Vec::new();
    for start in 0..segments.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        let (a0, b0) = segments[start];
        let mut chain = vec![a0, b0];
        // Extend forward from b0, then backward from a0.
        for end in 0..2 {
            loop {
                let tip = if end == 0 { *chain.last().unwrap() } else { chain[0] };
                let next = incident
                    .get(&tip)
                    .and_then(|ks| ks.iter().find(|&&k| !used[k]).copied());
                let Some(k) = next else { break };
                used[k] = true;
                let (a, b) = segments[k];
                let other = if a == tip { b } else { a };
                if end == 0 {
                    chain.push(other);
                } else {
                    chain.insert(0, other);
                }
            }
        }
        let closed = chain.len() > 2 && chain[0] == *chain.last().unwrap();
        let mut vertices: Vec<(f64, f64)> = chain.iter().map(|e| positions[e]).collect();
        if closed {
            vertices.pop();
        }
        // Clip to the disk rim and polish onto the exact level.
        let rim = r * (1.0 - 1e-12);
        for v in &mut vertices {
            let rr = v.0.hypot(v.1);
            if rr > rim {
                let s = rim / rr;
                v.0 *= s;
                v.1 *= s;
            } else if opts.polish {
                if let Some(p) = polish_vertex(field, *v, level, step) {
                    *v = p;
                }
            }
        }
        curves.push((vertices, closed));
    }
    curves
}

/// One or two Newton steps along the field gradient, rejected if the move
/// exceeds a grid cell (blown-up gradients near the rim).
fn polish_vertex(
    field: &SectionField,
    v: (f64, f64),
    level: f64,
    step: f64,
) -> Option<(f64, f64)> {
    let mut p = v;
    for _ in 0..2 {
        let err = field.value(p.0, p.1) - level;
        let (gx, gy) = field.grad(p.0, p.1)?;
        let g2 = gx * gx + gy * gy;
        if g2 == 0.0 {
            return None;
        }
        let dx = -err * gx / g2;
        let dy = -err * gy / g2;
        if dx.hypot(dy) > step {
            return None;
        }
        p = (p.0 + dx, p.1 + dy);
    }
    Some(p)
}
