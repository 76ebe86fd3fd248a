use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::hypervolume::hypervolume;
use crate::pareto::pareto_filter;
use crate::{CoreError, ObjectiveVector, Result};

/// Default shift factor used by [`compute_reference_point`].
pub const REFERENCE_MARGIN: f64 = 0.1;

/// Smallest hypervolume gap fed into `log10`; prevents `-inf` on runs that
/// reach the pooled front exactly.
pub const GAP_FLOOR: f64 = 1e-12;

/// Default number of sector-dividing lines for [`coverage`] (`M`); the
/// quadrant is split into `M + 1` sectors.
pub const DEFAULT_COVERAGE_DIVISIONS: usize = 360;

/// A point strictly worse than every front point, anchoring hypervolume.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferencePoint {
    values: Vec<f64>,
}

impl ReferencePoint {
    /// Builds a reference point from finite coordinates.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(CoreError::EmptyInput);
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(CoreError::NonFiniteValue);
        }
        Ok(Self { values })
    }

    /// Coordinates of the reference point.
    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// One evaluated point with its provenance inside a [`FrontArchive`].
#[derive(Debug, Clone, PartialEq)]
pub struct ArchiveEntry {
    pub run: String,
    pub time_s: f64,
    pub step: u64,
    pub sol: u64,
    pub objectives: ObjectiveVector,
}

/// Every evaluated point from every run, with provenance.
///
/// The archive is append-only. Two views matter downstream: the union of
/// per-run non-dominated fronts (which anchors the reference point) and the
/// globally non-dominated subset (which defines the ideal hypervolume).
#[derive(Debug, Clone, Default)]
pub struct FrontArchive {
    entries: Vec<ArchiveEntry>,
}

impl FrontArchive {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, entry: ArchiveEntry) {
        self.entries.push(entry);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[ArchiveEntry] {
        &self.entries
    }

    /// Distinct run ids in first-seen order.
    pub fn run_ids(&self) -> Vec<String> {
        let mut seen: Vec<String> = Vec::new();
        for e in &self.entries {
            if !seen.iter().any(|r| r == &e.run) {
                seen.push(e.run.clone());
            }
        }
        seen
    }

    /// The evaluated points belonging to one run, in insertion order.
    pub fn run_points(&self, run: &str) -> Vec<ObjectiveVector> {
        self.entries
            .iter()
            .filter(|e| e.run == run)
            .map(|e| e.objectives.clone())
            .collect()
    }

    /// Union of each run's non-dominated front (the set `F`): points kept
    /// here may still dominate each other across runs.
    pub fn front_union(&self) -> Result<Vec<ObjectiveVector>> {
        let mut by_run: BTreeMap<&str, Vec<ObjectiveVector>> = BTreeMap::new();
        for e in &self.entries {
            by_run.entry(&e.run).or_default().push(e.objectives.clone());
        }
        let mut union: Vec<ObjectiveVector> = Vec::new();
        for points in by_run.values() {
            for p in pareto_filter(points)? {
                if !union.contains(&p) {
                    union.push(p);
                }
            }
        }
        Ok(union)
    }

    /// Non-dominated subset of every archived point (the set used for the
    /// ideal hypervolume).
    pub fn global_front(&self) -> Result<Vec<ObjectiveVector>> {
        let all: Vec<ObjectiveVector> = self.entries.iter().map(|e| e.objectives.clone()).collect();
        pareto_filter(&all)
    }
}

/// Reference point from the union of per-run fronts: per coordinate,
/// `min - rho * (max - min)`. A zero range would leave the point on the
/// front itself, so that coordinate backs off by an extra absolute 1e-9.
pub fn compute_reference_point(archive: &FrontArchive, rho: f64) -> Result<ReferencePoint> {
    let union = archive.front_union()?;
    if union.is_empty() {
        return Err(CoreError::EmptyInput);
    }
    let k = union[0].len();
    for p in &union {
        if p.len() != k {
            return Err(CoreError::LengthMismatch { expected: k, actual: p.len() });
        }
    }
    let mut r = Vec::with_capacity(k);
    for i in 0..k {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for p in &union {
            lo = lo.min(p.values()[i]);
            hi = hi.max(p.values()[i]);
        }
        let range = hi - lo;
        let strictness_fix = if range == 0.0 { 1e-9 } else { 0.0 };
        r.push(lo - rho * range - strictness_fix);
    }
    ReferencePoint::new(r)
}

/// One evaluation on a run's timeline.
#[derive(Debug, Clone, PartialEq)]
pub struct TimedObjective {
    pub time_s: f64,
    pub step: u64,
    pub objectives: ObjectiveVector,
}

/// One point of a hypervolume-gap curve.
#[derive(Debug, Clone, PartialEq)]
pub struct GapPoint {
    pub time_s: f64,
    pub step: u64,
    pub hypervolume: f64,
    pub log_gap: f64,
}

/// Hypervolume-gap curve of one run: at each evaluation timestamp,
/// `log10(hv_star - hv_so_far)` where `hv_so_far` measures the run's
/// non-dominated set accumulated up to that point. The gap is clamped below
/// at [`GAP_FLOOR`] so a run matching `hv_star` stays plottable.
pub fn log_hv_gap_curve(
    evals: &[TimedObjective],
    hv_star: f64,
    r: &ReferencePoint,
) -> Result<Vec<GapPoint>> {
    let mut ordered: Vec<&TimedObjective> = evals.iter().collect();
    ordered.sort_by(|a, b| a.time_s.total_cmp(&b.time_s).then(a.step.cmp(&b.step)));

    let mut front: Vec<ObjectiveVector> = Vec::new();
    let mut hv = 0.0;
    let mut curve = Vec::with_capacity(ordered.len());
    for eval in ordered {
        let p = &eval.objectives;
        let dominated_or_duplicate = front
            .iter()
            .any(|q| crate::dominance::dominates_values(q.values(), p.values()) || q == p);
        if !dominated_or_duplicate {
            front.retain(|q| !crate::dominance::dominates_values(p.values(), q.values()));
            front.push(p.clone());
            hv = hypervolume(&front, r)?;
        }
        let gap = (hv_star - hv).max(GAP_FLOOR);
        curve.push(GapPoint {
            time_s: eval.time_s,
            step: eval.step,
            hypervolume: hv,
            log_gap: libm::log10(gap),
        });
    }
    Ok(curve)
}

/// Fraction of angular sectors of the first quadrant (anchored at `r`)
/// containing at least one non-dominated point.
///
/// The quadrant is divided into `m + 1` equal-angle sectors. Points are
/// Pareto-filtered first; points not strictly dominating `r` have no
/// well-defined angle and are ignored. A point exactly on a sector boundary
/// counts toward the lower-angle sector. Only defined for two objectives.
pub fn coverage(points: &[ObjectiveVector], r: &ReferencePoint, m: usize) -> Result<f64> {
    if r.values().len() != 2 {
        return Err(CoreError::UnsupportedObjectiveCount { objectives: r.values().len() });
    }
    for p in points {
        if p.len() != 2 {
            return Err(CoreError::UnsupportedObjectiveCount { objectives: p.len() });
        }
    }
    let front = pareto_filter(points)?;
    let sectors = m + 1;
    let width = core::f64::consts::FRAC_PI_2 / sectors as f64;
    let mut occupied = alloc::vec![false; sectors];
    let mut any = false;
    for p in &front {
        let x = p.values()[0] - r.values()[0];
        let y = p.values()[1] - r.values()[1];
        if x <= 0.0 || y <= 0.0 {
            continue;
        }
        let phi = libm::atan2(y, x);
        let mut idx = (phi / width) as usize;
        // Exact boundary hits belong to the lower-angle sector.
        if idx > 0 && phi == idx as f64 * width {
            idx -= 1;
        }
        occupied[idx.min(sectors - 1)] = true;
        any = true;
    }
    if !any {
        return Err(CoreError::EmptyInput);
    }
    let count = occupied.iter().filter(|&&o| o).count();
    Ok(count as f64 / sectors as f64)
}
