//! Bifurcation-sequence assembly.
//!
//! Sweeping `sigma0` downward, the census of critical points changes only at
//! bifurcation values. Events are detected as census/stability changes
//! between consecutive sweep steps, bracketed by bisection down to the
//! requested resolution, and typed from the census delta across the bracket:
//!
//! * first-kind count `+2` — saddle-node (a stable/unstable pair is born);
//! * first-kind count `-2` — inverse saddle-node (a pair collides);
//! * second-kind pair appears with one on-meridian stability flip —
//!   pitchfork;
//! * second-kind pair disappears with one flip — inverse pitchfork.
//!
//! Labels (`A`, `B`, `P1`, ... , `F1`, `F2`) are assigned at the start of the
//! sweep and carried by continuity in the meridian angle; identity across a
//! collision bracket is heuristic by nature.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::critical::{CriticalPoint, Stability};
use crate::error::{Error, Result};
use crate::poly::PolyHopfHamiltonian;
use crate::scan::{find_cpi, find_cpii, CpiiPair, ScanOptions};

/// Kind of bifurcation event.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EventKind {
    SaddleNode,
    InverseSaddleNode,
    Pitchfork,
    InversePitchfork,
    /// The census change across the final bracket fits no single-event
    /// pattern (two events inside one bracket at maximum refinement).
    Unresolved,
}

impl std::fmt::Display for EventKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            EventKind::SaddleNode => "saddle-node",
            EventKind::InverseSaddleNode => "inverse-saddle-node",
            EventKind::Pitchfork => "pitchfork",
            EventKind::InversePitchfork => "inverse-pitchfork",
            EventKind::Unresolved => "unresolved",
        };
        f.write_str(s)
    }
}

/// A stability flip of a tracked point across an event.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityChange {
    pub label: String,
    pub from: Stability,
    pub to: Stability,
}

/// One bifurcation event, bracketed in `sigma0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BifurcationEvent {
    pub kind: EventKind,
    /// `(low, high)` bracket containing the bifurcation value.
    pub sigma0_bracket: (f64, f64),
    /// Labels of the points created or destroyed.
    pub participants: Vec<String>,
    pub stability_changes: Vec<StabilityChange>,
}

/// A labelled critical point of the census.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledPoint {
    pub label: String,
    #[serde(flatten)]
    pub point: CriticalPoint,
}

/// The critical-point census at one swept `sigma0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Census {
    pub sigma0: f64,
    pub points: Vec<LabeledPoint>,
}

/// Events (descending `sigma0`) plus the labelled census at every sweep step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BifurcationSequence {
    pub events: Vec<BifurcationEvent>,
    pub census: Vec<Census>,
}

/// Sweep configuration.
#[derive(Debug, Clone, Copy)]
pub struct SweepOptions {
    /// Number of coarse sweep steps across the range.
    pub coarse_steps: usize,
    pub scan: ScanOptions,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self { coarse_steps: 1024, scan: ScanOptions::default() }
    }
}

/// Raw (unlabelled) census used during sweeping.
#[derive(Debug, Clone)]
struct RawCensus {
    sigma0: f64,
    cpi: Vec<CriticalPoint>,
    cpii: Vec<CpiiPair>,
}

fn raw_census(z: &PolyHopfHamiltonian, sigma0: f64, opts: &ScanOptions) -> Result<RawCensus> {
    let mut cpi = find_cpi(z, sigma0, opts)?;
    cpi.sort_by(|a, b| a.theta.unwrap().total_cmp(&b.theta.unwrap()));
    let cpii = find_cpii(z, sigma0, opts)?;
    Ok(RawCensus { sigma0, cpi, cpii })
}

fn circular_distance(a: f64, b: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let d = (a - b).rem_euclid(tau);
    d.min(tau - d)
}

/// Greedy nearest-angle matching between two first-kind censuses. Returns
/// index pairs `(i, j)`; unmatched indices are the born/dead points.
fn match_cpi(a: &[CriticalPoint], b: &[CriticalPoint]) -> Vec<(usize, usize)> {
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(a.len() * b.len());
    for (i, pa) in a.iter().enumerate() {
        for (j, pb) in b.iter().enumerate() {
            pairs.push((circular_distance(pa.theta.unwrap(), pb.theta.unwrap()), i, j));
        }
    }
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut used_a = vec![false; a.len()];
    let mut used_b = vec![false; b.len()];
    let mut out = Vec::new();
    for (_, i, j) in pairs {
        if !used_a[i] && !used_b[j] {
            used_a[i] = true;
            used_b[j] = true;
            out.push((i, j));
        }
    }
    out
}

/// Census equivalence: same counts, and the matched points agree in
/// stability. Any marginal verdict makes a census equivalent to nothing, so
/// brackets keep shrinking around it.
fn equivalent(a: &RawCensus, b: &RawCensus) -> bool {
    if a.cpi.len() != b.cpi.len() || a.cpii.len() != b.cpii.len() {
        return false;
    }
    if a.cpi.iter().chain(b.cpi.iter()).any(|p| p.stability == Stability::Marginal)
        || a.cpii.iter().chain(b.cpii.iter()).any(|p| p.stability == Stability::Marginal)
    {
        return false;
    }
    for (i, j) in match_cpi(&a.cpi, &b.cpi) {
        if a.cpi[i].stability != b.cpi[j].stability {
            return false;
        }
    }
    let mut b_stab: Vec<Stability> = b.cpii.iter().map(|p| p.stability).collect();
    b_stab.sort();
    let mut a_stab: Vec<Stability> = a.cpii.iter().map(|p| p.stability).collect();
    a_stab.sort();
    a_stab == b_stab
}

/// Tracked labels at the current sweep position.
#[derive(Debug, Clone)]
struct Tracker {
    cpi_labels: Vec<String>,
    cpii_labels: Vec<String>,
    next_p: usize,
    next_f: usize,
}

impl Tracker {
    /// Initial labels: the extreme-energy tangencies are the two basic
    /// (coplanar-limit) orbits `A` (energy minimum) and `B` (maximum);
    /// any others get `P` numbers, second-kind pairs `F` numbers.
    fn initial(census: &RawCensus) -> Self {
        let n = census.cpi.len();
        let mut labels = vec![String::new(); n];
        let mut next_p = 1;
        if n >= 2 {
            let mut by_energy: Vec<usize> = (0..n).collect();
            by_energy.sort_by(|&i, &j| census.cpi[i].energy.total_cmp(&census.cpi[j].energy));
            labels[by_energy[0]] = "A".to_string();
            labels[by_energy[n - 1]] = "B".to_string();
            for &i in &by_energy[1..n - 1] {
                labels[i] = format!("P{next_p}");
                next_p += 1;
            }
        } else if n == 1 {
            labels[0] = "A".to_string();
        }
        let mut next_f = 1;
        let cpii_labels: Vec<String> = census
            .cpii
            .iter()
            .map(|_| {
                let l = format!("F{next_f}");
                next_f += 2;
                l
            })
            .collect();
        Tracker { cpi_labels: labels, cpii_labels, next_p, next_f }
    }

    /// Carry labels from the previous census onto an equivalent one.
    fn carry(&mut self, prev: &RawCensus, cur: &RawCensus) {
        let matches = match_cpi(&prev.cpi, &cur.cpi);
        let mut new_labels = vec![String::new(); cur.cpi.len()];
        for (i, j) in matches {
            new_labels[j] = self.cpi_labels[i].clone();
        }
        self.cpi_labels = new_labels;
        // Pair counts are equal for equivalent censuses; match by center.
        let mut new_cpii = vec![String::new(); cur.cpii.len()];
        let mut used = vec![false; prev.cpii.len()];
        for (j, pair) in cur.cpii.iter().enumerate() {
            let mut best: Option<(f64, usize)> = None;
            for (i, old) in prev.cpii.iter().enumerate() {
                if used[i] {
                    continue;
                }
                let d = (pair.center.0 - old.center.0).hypot(pair.center.1 - old.center.1);
                if best.is_none_or(|(bd, _)| d < bd) {
                    best = Some((d, i));
                }
            }
            if let Some((_, i)) = best {
                used[i] = true;
                new_cpii[j] = self.cpii_labels[i].clone();
            }
        }
        self.cpii_labels = new_cpii;
    }

    fn labeled(&self, census: &RawCensus) -> Census {
        let mut points: Vec<LabeledPoint> = census
            .cpi
            .iter()
            .zip(&self.cpi_labels)
            .map(|(p, l)| LabeledPoint { label: l.clone(), point: p.clone() })
            .collect();
        for (pair, label) in census.cpii.iter().zip(&self.cpii_labels) {
            let [plus, minus] = pair.points();
            let base: String = label.trim_end_matches(char::is_numeric).into();
            let num: usize = label[base.len()..].parse().unwrap_or(1);
            points.push(LabeledPoint { label: format!("{base}{num}"), point: plus });
            points.push(LabeledPoint { label: format!("{base}{}", num + 1), point: minus });
        }
        Census { sigma0: census.sigma0, points }
    }
}

/// Sweep `sigma0` downward over `[sigma0_lo, sigma0_hi]` and assemble the
/// bifurcation sequence at the requested bracket resolution.
pub fn bifurcation_sequence(
    z: &PolyHopfHamiltonian,
    sigma0_lo: f64,
    sigma0_hi: f64,
    resolution: f64,
    opts: &SweepOptions,
) -> Result<BifurcationSequence> {
    if !(sigma0_lo > 0.0) || !(sigma0_hi > sigma0_lo) {
        return Err(Error::InvalidParams(format!(
            "need 0 < sigma0_lo < sigma0_hi, got [{sigma0_lo}, {sigma0_hi}]"
        )));
    }
    if !(resolution > 0.0) {
        return Err(Error::InvalidParams(format!("resolution must be positive, got {resolution}")));
    }
    let n = opts.coarse_steps.max(8);
    let grid: Vec<f64> = (0..=n)
        .map(|i| sigma0_hi - (sigma0_hi - sigma0_lo) * i as f64 / n as f64)
        .collect();
    // Census evaluations at distinct sigma0 are independent; compute them in
    // parallel and merge in grid (descending) order.
    let censuses: Result<Vec<RawCensus>> = grid
        .par_iter()
        .map(|&s0| raw_census(z, s0, &opts.scan))
        .collect();
    let censuses = censuses?;

    let mut tracker = Tracker::initial(&censuses[0]);
    let mut out = BifurcationSequence {
        events: Vec::new(),
        census: vec![tracker.labeled(&censuses[0])],
    };
    for i in 1..censuses.len() {
        let prev = &censuses[i - 1];
        let cur = &censuses[i];
        if equivalent(prev, cur) {
            tracker.carry(prev, cur);
        } else {
            let mut brackets = Vec::new();
            refine(z, prev, cur, resolution, &opts.scan, &mut brackets)?;
            let mut hi_side = prev.clone();
            for (bh, bl) in brackets {
                let event = type_event(&mut tracker, &hi_side, &bh, &bl);
                out.events.push(event);
                hi_side = bl;
            }
            tracker.carry(&hi_side, cur);
        }
        out.census.push(tracker.labeled(cur));
    }
    Ok(out)
}

/// Bisect a changing interval into per-event brackets of width below the
/// resolution, descending in `sigma0`.
fn refine(
    z: &PolyHopfHamiltonian,
    hi: &RawCensus,
    lo: &RawCensus,
    resolution: f64,
    opts: &ScanOptions,
    out: &mut Vec<(RawCensus, RawCensus)>,
) -> Result<()> {
    if hi.sigma0 - lo.sigma0 <= resolution {
        out.push((hi.clone(), lo.clone()));
        return Ok(());
    }
    let mid_sigma0 = 0.5 * (hi.sigma0 + lo.sigma0);
    let mid = raw_census(z, mid_sigma0, opts)?;
    if equivalent(&mid, hi) {
        refine(z, &mid, lo, resolution, opts, out)
    } else if equivalent(&mid, lo) {
        refine(z, hi, &mid, resolution, opts, out)
    } else {
        refine(z, hi, &mid, resolution, opts, out)?;
        refine(z, &mid, lo, resolution, opts, out)
    }
}

/// Type one event from the censuses at the two bracket ends and update the
/// tracked labels across it.
fn type_event(
    tracker: &mut Tracker,
    hi_side: &RawCensus,
    bracket_hi: &RawCensus,
    bracket_lo: &RawCensus,
) -> BifurcationEvent {
    // Carry labels from the sweep position into the bracket's high side.
    tracker.carry(hi_side, bracket_hi);
    let hi = bracket_hi;
    let lo = bracket_lo;

    let matches = match_cpi(&hi.cpi, &lo.cpi);
    let mut matched_hi = vec![false; hi.cpi.len()];
    let mut matched_lo = vec![false; lo.cpi.len()];
    let mut flips: Vec<StabilityChange> = Vec::new();
    let mut lo_labels = vec![String::new(); lo.cpi.len()];
    for (i, j) in &matches {
        matched_hi[*i] = true;
        matched_lo[*j] = true;
        lo_labels[*j] = tracker.cpi_labels[*i].clone();
        let (sh, sl) = (hi.cpi[*i].stability, lo.cpi[*j].stability);
        if sh != sl {
            flips.push(StabilityChange {
                label: tracker.cpi_labels[*i].clone(),
                from: sh,
                to: sl,
            });
        }
    }
    let born: Vec<usize> = (0..lo.cpi.len()).filter(|&j| !matched_lo[j]).collect();
    let dead: Vec<usize> = (0..hi.cpi.len()).filter(|&i| !matched_hi[i]).collect();
    let d_cpii = lo.cpii.len() as isize - hi.cpii.len() as isize;

    let mut participants: Vec<String> = Vec::new();
    let kind = if born.len() == 2 && dead.is_empty() && d_cpii == 0 && flips.is_empty() {
        // A stable/unstable pair born together: the unstable one gets the
        // lower P number, matching the usual naming of the inner tangency.
        let mut born_sorted = born.clone();
        born_sorted.sort_by_key(|&j| lo.cpi[j].stability != Stability::Unstable);
        for &j in &born_sorted {
            let label = format!("P{}", tracker.next_p);
            tracker.next_p += 1;
            lo_labels[j] = label.clone();
            participants.push(label);
        }
        EventKind::SaddleNode
    } else if dead.len() == 2 && born.is_empty() && d_cpii == 0 && flips.is_empty() {
        for &i in &dead {
            participants.push(tracker.cpi_labels[i].clone());
        }
        EventKind::InverseSaddleNode
    } else if born.is_empty() && dead.is_empty() && d_cpii == 1 && flips.len() == 1 {
        participants.push(flips[0].label.clone());
        let f = tracker.next_f;
        tracker.next_f += 2;
        participants.push(format!("F{f}"));
        participants.push(format!("F{}", f + 1));
        EventKind::Pitchfork
    } else if born.is_empty() && dead.is_empty() && d_cpii == -1 && flips.len() == 1 {
        participants.push(flips[0].label.clone());
        for l in &tracker.cpii_labels {
            let base: String = l.trim_end_matches(char::is_numeric).into();
            let num: usize = l[base.len()..].parse().unwrap_or(1);
            participants.push(format!("{base}{num}"));
            participants.push(format!("{base}{}", num + 1));
        }
        EventKind::InversePitchfork
    } else {
        for &j in &born {
            participants.push(format!("new-cpi@theta={:.6}", lo.cpi[j].theta.unwrap()));
        }
        for &i in &dead {
            participants.push(tracker.cpi_labels[i].clone());
        }
        EventKind::Unresolved
    };

    // Advance tracker state onto the bracket's low side.
    for (j, l) in lo_labels.iter_mut().enumerate() {
        if l.is_empty() {
            *l = format!("X{j}");
        }
    }
    tracker.cpi_labels = lo_labels;
    let mut cpii_labels = Vec::with_capacity(lo.cpii.len());
    match kind {
        EventKind::Pitchfork => {
            // The new pair takes the freshly assigned F label.
            let f = tracker.next_f - 2;
            for (j, _) in lo.cpii.iter().enumerate() {
                if j < tracker.cpii_labels.len() {
                    cpii_labels.push(tracker.cpii_labels[j].clone());
                } else {
                    cpii_labels.push(format!("F{f}"));
                }
            }
        }
        EventKind::InversePitchfork => {
            // One pair died; keep labels of the closest survivors.
            let mut used = vec![false; hi.cpii.len()];
            for pair in &lo.cpii {
                let mut best: Option<(f64, usize)> = None;
                for (i, old) in hi.cpii.iter().enumerate() {
                    if used[i] {
                        continue;
                    }
                    let d = (pair.center.0 - old.center.0).hypot(pair.center.1 - old.center.1);
                    if best.is_none_or(|(bd, _)| d < bd) {
                        best = Some((d, i));
                    }
                }
                if let Some((_, i)) = best {
                    used[i] = true;
                    cpii_labels.push(tracker.cpii_labels[i].clone());
                }
            }
        }
        _ => cpii_labels = tracker.cpii_labels.clone(),
    }
    tracker.cpii_labels = cpii_labels;
    if tracker.cpii_labels.len() != lo.cpii.len() {
        tracker.cpii_labels = (0..lo.cpii.len())
            .map(|k| format!("F{}", 2 * k + 1))
            .collect();
    }

    BifurcationEvent {
        kind,
        sigma0_bracket: (lo.sigma0, hi.sigma0),
        participants,
        stability_changes: flips,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;
    use crate::quad::rotate_to_diagonal;

    #[test]
    fn octupole_sequence_structure() {
        let (q, _) = rotate_to_diagonal(&models::octupole_reference()).unwrap();
        let z = q.to_poly();
        let opts = SweepOptions { coarse_steps: 256, ..SweepOptions::default() };
        let seq = bifurcation_sequence(&z, 0.004, 0.012, 1e-6, &opts).unwrap();
        let kinds: Vec<EventKind> = seq.events.iter().map(|e| e.kind).collect();
        assert_eq!(
            kinds,
            vec![
                EventKind::SaddleNode,
                EventKind::Pitchfork,
                EventKind::InversePitchfork,
                EventKind::InverseSaddleNode
            ],
            "events: {:?}",
            seq.events
        );
        // Each bracket contains the corresponding analytic threshold.
        let expected = [0.00655611, 0.00623676, 0.00497142, 0.00489265];
        for (event, want) in seq.events.iter().zip(expected) {
            let (lo, hi) = event.sigma0_bracket;
            assert!(lo <= want && want <= hi, "{want} not in [{lo}, {hi}]");
        }
        // Participants: pair born, P1 flips, B flips and dies with A.
        assert_eq!(seq.events[0].participants, vec!["P1", "P2"]);
        assert_eq!(seq.events[1].stability_changes[0].label, "P1");
        assert_eq!(seq.events[1].stability_changes[0].to, Stability::Stable);
        assert_eq!(seq.events[2].stability_changes[0].label, "B");
        assert_eq!(seq.events[2].stability_changes[0].to, Stability::Unstable);
        let mut annihilated = seq.events[3].participants.clone();
        annihilated.sort();
        assert_eq!(annihilated, vec!["A", "B"]);
    }

    #[test]
    fn no_linear_terms_means_no_events() {
        let z = PolyHopfHamiltonian::from_tuples(&[(0, 2, 0, 0.7), (0, 0, 2, -0.3)]);
        let seq = bifurcation_sequence(
            &z,
            0.1,
            1.0,
            1e-6,
            &SweepOptions { coarse_steps: 64, ..SweepOptions::default() },
        )
        .unwrap();
        assert!(seq.events.is_empty(), "events: {:?}", seq.events);
        for c in &seq.census {
            assert_eq!(c.points.iter().filter(|p| p.point.kind == crate::CpKind::Cpi).count(), 4);
        }
    }
}
