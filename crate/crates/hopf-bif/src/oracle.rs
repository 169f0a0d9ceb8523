//! Brute-force verifiers.
//!
//! Deliberately simple O(n)–O(n²) scans with no code shared with the
//! analytic machinery beyond polynomial evaluation. Used by the test suite
//! and by the CLI's self-check mode; determinism is preferred over speed.

use serde::{Deserialize, Serialize};

use crate::flow::contour::SectionField;
use crate::poly::PolyHopfHamiltonian;
use crate::quad::QuadHopfHamiltonian;

/// Approximate meridian tangency angles: local extrema of `Z` restricted to
/// the `sigma2 = 0` meridian, from an `n`-point scan with a parabolic
/// sub-sample refinement. Sorted ascending in `[-pi, pi)`.
pub fn grid_tangency_scan(z: &PolyHopfHamiltonian, sigma0: f64, n: usize) -> Vec<f64> {
    let n = n.max(64);
    let tau = std::f64::consts::TAU;
    let step = tau / n as f64;
    let h: Vec<f64> = (0..n)
        .map(|i| {
            let th = i as f64 * step;
            z.eval(sigma0, sigma0 * th.cos(), sigma0 * th.sin())
        })
        .collect();
    let mut out = Vec::new();
    for i in 0..n {
        let prev = h[(i + n - 1) % n];
        let cur = h[i];
        let next = h[(i + 1) % n];
        let is_max = cur > prev && cur > next;
        let is_min = cur < prev && cur < next;
        if !(is_max || is_min) {
            continue;
        }
        // Parabolic refinement through the three samples.
        let denom = prev - 2.0 * cur + next;
        let offset = if denom != 0.0 { 0.5 * (prev - next) / denom } else { 0.0 };
        let mut theta = (i as f64 + offset.clamp(-0.5, 0.5)) * step;
        theta = theta.rem_euclid(tau);
        if theta >= std::f64::consts::PI {
            theta -= tau;
        }
        out.push(theta);
    }
    out.sort_by(f64::total_cmp);
    out
}

/// Discrete critical-point kind on the disk grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiskCritKind {
    Maximum,
    Minimum,
    Saddle,
}

/// Census of the reduced section Hamiltonian on a disk grid, by 8-neighbour
/// comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiskCensus {
    pub points: Vec<(f64, f64, DiskCritKind)>,
    /// Set when neighbouring samples tie exactly (e.g. a constant
    /// Hamiltonian) or when a quasi-degenerate band produced a large cluster
    /// of candidates that was discarded.
    pub degenerate: bool,
}

impl DiskCensus {
    pub fn count(&self, kind: DiskCritKind) -> usize {
        self.points.iter().filter(|p| p.2 == kind).count()
    }
}

/// Scan the section disk for discrete critical points of the reduced
/// Hamiltonian: extrema have no sign alternation of `neighbour - center`
/// around the 8-ring, saddles have four or more.
///
/// The grid size is forced odd so that the symmetry axis `Y2 = 0` (the image
/// of the meridian) lies on grid nodes. Adjacent candidates are clustered;
/// isolated clusters are genuine critical points, while long chains come
/// from quasi-degenerate bands (the section map degenerates toward the rim)
/// and are dropped with the `degenerate` flag set.
pub fn disk_critical_scan(z: &PolyHopfHamiltonian, sigma0: f64, n: usize) -> DiskCensus {
    let n = n.max(128) | 1;
    let field = SectionField::new(z, sigma0);
    let r = field.radius();
    let step = 2.0 * r / (n - 1) as f64;
    let coord = |i: usize| -> f64 { -r + step * i as f64 };
    let mut grid = vec![f64::NAN; n * n];
    for j in 0..n {
        for i in 0..n {
            let (x, y) = (coord(i), coord(j));
            // Stay strictly inside: rim samples all map to the pole energy
            // and would tie.
            if x * x + y * y < 2.0 * sigma0 * (1.0 - 4.0 * step / r) {
                grid[j * n + i] = field.value(x, y);
            }
        }
    }
    // The comparison ring is a few cells wide: at one-cell distance the
    // linear term of a critical point that falls between nodes is of the
    // same size as the quadratic one and the sign pattern is noise; at
    // distance k the quadratic part wins by a factor ~k.
    let k = 3i64;
    let ring = [
        (k, 0i64),
        (k, k),
        (0, k),
        (-k, k),
        (-k, 0),
        (-k, -k),
        (0, -k),
        (k, -k),
    ];
    let mut ties = false;
    let mut candidates: Vec<(usize, usize, DiskCritKind)> = Vec::new();
    for j in k as usize..n - k as usize {
        for i in k as usize..n - k as usize {
            let center = grid[j * n + i];
            if !center.is_finite() {
                continue;
            }
            let mut diffs = [0.0f64; 8];
            let mut all_inside = true;
            for (idx, (dx, dy)) in ring.iter().enumerate() {
                let v = grid[(j as i64 + dy) as usize * n + (i as i64 + dx) as usize];
                if !v.is_finite() {
                    all_inside = false;
                    break;
                }
                diffs[idx] = v - center;
            }
            if !all_inside {
                continue;
            }
            if diffs.contains(&0.0) {
                ties = true;
                continue;
            }
            let mut alternations = 0;
            for idx in 0..8 {
                if diffs[idx].signum() != diffs[(idx + 1) % 8].signum() {
                    alternations += 1;
                }
            }
            let kind = match alternations {
                0 => {
                    if diffs[0] < 0.0 {
                        Some(DiskCritKind::Maximum)
                    } else {
                        Some(DiskCritKind::Minimum)
                    }
                }
                a if a >= 4 => Some(DiskCritKind::Saddle),
                _ => None,
            };
            if let Some(kind) = kind {
                candidates.push((i, j, kind));
            }
        }
    }

    // Cluster candidates belonging to one critical point (they spread over
    // roughly half a ring radius around it).
    let merge = 2 * k as usize;
    let mut cluster_of: Vec<usize> = (0..candidates.len()).collect();
    fn root(cluster_of: &mut [usize], mut k: usize) -> usize {
        while cluster_of[k] != k {
            cluster_of[k] = cluster_of[cluster_of[k]];
            k = cluster_of[k];
        }
        k
    }
    for a in 0..candidates.len() {
        for b in a + 1..candidates.len() {
            let di = candidates[a].0.abs_diff(candidates[b].0);
            let dj = candidates[a].1.abs_diff(candidates[b].1);
            if di <= merge && dj <= merge {
                let (ra, rb) = (root(&mut cluster_of, a), root(&mut cluster_of, b));
                cluster_of[ra] = rb;
            }
        }
    }
    let mut clusters: std::collections::HashMap<usize, Vec<usize>> = std::collections::HashMap::new();
    for idx in 0..candidates.len() {
        let r = root(&mut cluster_of, idx);
        clusters.entry(r).or_default().push(idx);
    }
    let mut out = DiskCensus { points: Vec::new(), degenerate: ties };
    let mut members: Vec<Vec<usize>> = clusters.into_values().collect();
    members.sort_by_key(|m| (candidates[m[0]].1, candidates[m[0]].0));
    let max_cluster = (2 * k as usize + 1).pow(2) / 2;
    for m in members {
        if m.len() > max_cluster {
            // A chain along a quasi-degenerate band, not an isolated point.
            out.degenerate = true;
            continue;
        }
        // Extremum verdicts outrank saddle-pattern noise within a cluster.
        let kind = if m.iter().any(|&idx| candidates[idx].2 == DiskCritKind::Maximum) {
            DiskCritKind::Maximum
        } else if m.iter().any(|&idx| candidates[idx].2 == DiskCritKind::Minimum) {
            DiskCritKind::Minimum
        } else {
            DiskCritKind::Saddle
        };
        let (mut sx, mut sy) = (0.0, 0.0);
        for &idx in &m {
            sx += coord(candidates[idx].0);
            sy += coord(candidates[idx].1);
        }
        out.points.push((sx / m.len() as f64, sy / m.len() as f64, kind));
    }
    out.points
        .sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    out
}

/// Real-root count of the first-kind tangency quartic by a sign scan over a
/// `mu` grid spanning `[min(A,C) - 10 span, max(A,C) + 10 span]`, widened
/// when necessary to the rigorous root bound: at any root,
/// `4 min((A-mu)², (C-mu)²) <= T1 + T3`, so every real root lies within
/// `sqrt(T1 + T3)/2` of `A` or `C`.
pub fn quartic_bruteforce(q: &QuadHopfHamiltonian, sigma0: f64, n: usize) -> usize {
    let n = n.max(1000);
    let (t1v, t3v) = (crate::quad::t1(q, sigma0), crate::quad::t3(q, sigma0));
    // The quartic 4(A-mu)²(C-mu)² - (A-mu)² T3 - (C-mu)² T1, evaluated
    // directly (no shared code with the companion-matrix path).
    let p = |mu: f64| {
        let fa = q.a - mu;
        let fc = q.c - mu;
        4.0 * fa * fa * fc * fc - fa * fa * t3v - fc * fc * t1v
    };
    let lo_ac = q.a.min(q.c);
    let hi_ac = q.a.max(q.c);
    let span = hi_ac - lo_ac;
    let reach = (10.0 * span).max(0.55 * (t1v + t3v).sqrt());
    let lo = lo_ac - reach;
    let hi = hi_ac + reach;
    let mut count = 0;
    let mut prev = p(lo);
    for i in 1..=n {
        let mu = lo + (hi - lo) * i as f64 / n as f64;
        let cur = p(mu);
        if cur == 0.0 {
            count += 1;
            prev = -prev;
        } else {
            if prev != 0.0 && cur.signum() != prev.signum() {
                count += 1;
            }
            prev = cur;
        }
    }
    count
}
