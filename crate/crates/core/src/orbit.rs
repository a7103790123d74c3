//! Orbit enumeration under the full generator set.
//!
//! Points are deduplicated by snapping to a square grid of side `quantum`.
//! Two retention policies share one level-synchronous breadth-first search:
//! [`Retention::Full`] keeps every key seen, [`Retention::Frontier`] keeps
//! only the previous, current and next levels. Frontier retention is exact
//! because every generator's inverse is also a generator, so the orbit graph
//! is undirected and a neighbor of level `d` lies in level `d-1`, `d` or `d+1`.
//!
//! Each level is expanded in fixed-size chunks (in parallel when the rayon
//! pool has more than one thread) and candidates are merged in chunk order,
//! so the discovered sequence is the same for every thread count.

use rayon::prelude::*;
use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{DiskSystem, PlanePoint};

pub const DEFAULT_QUANTUM: f64 = 1e-9;

const CHUNK: usize = 8192;

pub type CellKey = (i64, i64);

#[inline]
pub fn quantize(p: PlanePoint, quantum: f64) -> CellKey {
    ((p.x / quantum).round() as i64, (p.y / quantum).round() as i64)
}

/// Width, as a fraction of a cell, of the band along each cell edge inside
/// which the neighboring cell is also consulted.
pub const EDGE_BAND: f64 = 0.125;

/// The cells a point is matched against: its own cell first, then the
/// adjacent cells whose edge lies within [`EDGE_BAND`] of it. A point counts
/// as already seen if any of these cells is occupied, so two roundings of
/// one point that straddle a cell edge still merge.
#[derive(Clone, Copy, Debug)]
pub struct CellProbe {
    keys: [CellKey; 4],
    len: u8,
}

impl CellProbe {
    #[inline]
    pub fn new(p: PlanePoint, quantum: f64) -> Self {
        let (fx, fy) = (p.x / quantum, p.y / quantum);
        let (kx, ky) = (fx.round() as i64, fy.round() as i64);
        let side = |f: f64, k: i64| {
            let off = f - k as f64;
            if off > 0.5 - EDGE_BAND {
                Some(k + 1)
            } else if off < EDGE_BAND - 0.5 {
                Some(k - 1)
            } else {
                None
            }
        };
        let mut keys = [(kx, ky); 4];
        let mut len = 1;
        let (sx, sy) = (side(fx, kx), side(fy, ky));
        if let Some(x) = sx {
            keys[len] = (x, ky);
            len += 1;
        }
        if let Some(y) = sy {
            keys[len] = (kx, y);
            len += 1;
        }
        if let (Some(x), Some(y)) = (sx, sy) {
            keys[len] = (x, y);
            len += 1;
        }
        Self {
            keys,
            len: len as u8,
        }
    }

    /// The point's own cell.
    #[inline]
    pub fn key(&self) -> CellKey {
        self.keys[0]
    }

    #[inline]
    pub fn keys(&self) -> &[CellKey] {
        &self.keys[..self.len as usize]
    }

    #[inline]
    pub fn hits(&self, set: &FxHashSet<CellKey>) -> bool {
        self.keys().iter().any(|k| set.contains(k))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitParams {
    /// Maximum number of distinct points.
    pub budget: u64,
    /// Optional cap on BFS depth; hitting it counts as exceeding the budget.
    pub max_depth: Option<u32>,
    /// Dedup grid cell size, in plane units.
    pub quantum: f64,
    pub emit_points: bool,
}

impl Default for OrbitParams {
    fn default() -> Self {
        Self {
            budget: 1_000_000,
            max_depth: None,
            quantum: DEFAULT_QUANTUM,
            emit_points: false,
        }
    }
}

impl OrbitParams {
    pub fn with_budget(budget: u64) -> Self {
        Self {
            budget,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.budget < 1 {
            return Err(Error::usage("orbit budget must be at least 1"));
        }
        if !(self.quantum > 0.0 && self.quantum.is_finite()) {
            return Err(Error::usage(format!(
                "quantum must be positive and finite, got {}",
                self.quantum
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrbitStatus {
    Closed,
    BudgetExceeded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Retention {
    Full,
    Frontier,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitSummary {
    pub status: OrbitStatus,
    pub size: u64,
    /// Index of the deepest BFS level known to be complete.
    pub depth: u32,
    pub peak_memory_points: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitResult {
    pub status: OrbitStatus,
    pub size: u64,
    pub depth: u32,
    pub peak_memory_points: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<PlanePoint>>,
}

impl OrbitResult {
    pub fn summary(&self) -> OrbitSummary {
        OrbitSummary {
            status: self.status,
            size: self.size,
            depth: self.depth,
            peak_memory_points: self.peak_memory_points,
        }
    }
}

/// Full-memory breadth-first orbit.
pub fn orbit_bfs(sys: &DiskSystem, seed: PlanePoint, params: &OrbitParams) -> Result<OrbitResult> {
    collect(sys, seed, params, Retention::Full)
}

/// Memory-bounded breadth-first orbit; same contract as [`orbit_bfs`].
pub fn frontier_bfs(
    sys: &DiskSystem,
    seed: PlanePoint,
    params: &OrbitParams,
) -> Result<OrbitResult> {
    collect(sys, seed, params, Retention::Frontier)
}

fn collect(
    sys: &DiskSystem,
    seed: PlanePoint,
    params: &OrbitParams,
    retention: Retention,
) -> Result<OrbitResult> {
    let mut points = params.emit_points.then(Vec::new);
    let summary = explore(sys, seed, params, retention, |p, _| {
        if let Some(v) = points.as_mut() {
            v.push(p);
        }
        Ok(())
    })?;
    Ok(OrbitResult {
        status: summary.status,
        size: summary.size,
        depth: summary.depth,
        peak_memory_points: summary.peak_memory_points,
        points,
    })
}

/// Streams every distinct orbit point (with its BFS depth) to `sink` exactly
/// once, using frontier retention.
pub fn orbit_stream<F>(
    sys: &DiskSystem,
    seed: PlanePoint,
    params: &OrbitParams,
    sink: F,
) -> Result<OrbitSummary>
where
    F: FnMut(PlanePoint, u32) -> Result<()>,
{
    explore(sys, seed, params, Retention::Frontier, sink)
}

enum Seen {
    Full(FxHashSet<CellKey>),
    Frontier {
        prev: FxHashSet<CellKey>,
        cur: FxHashSet<CellKey>,
    },
}

impl Seen {
    #[inline]
    fn known(&self, probe: &CellProbe) -> bool {
        match self {
            Seen::Full(all) => probe.hits(all),
            Seen::Frontier { prev, cur } => probe.hits(prev) || probe.hits(cur),
        }
    }

    fn held(&self) -> usize {
        match self {
            Seen::Full(all) => all.len(),
            Seen::Frontier { prev, cur } => prev.len() + cur.len(),
        }
    }
}

/// The shared search loop behind every public entry point.
pub fn explore<F>(
    sys: &DiskSystem,
    seed: PlanePoint,
    params: &OrbitParams,
    retention: Retention,
    mut sink: F,
) -> Result<OrbitSummary>
where
    F: FnMut(PlanePoint, u32) -> Result<()>,
{
    params.validate()?;
    if !seed.is_finite() {
        return Err(Error::usage("seed must be finite"));
    }
    let q = params.quantum;
    let seed_key = quantize(seed, q);

    let mut seen = match retention {
        Retention::Full => {
            let mut all = FxHashSet::default();
            all.insert(seed_key);
            Seen::Full(all)
        }
        Retention::Frontier => {
            let mut cur = FxHashSet::default();
            cur.insert(seed_key);
            Seen::Frontier {
                prev: FxHashSet::default(),
                cur,
            }
        }
    };
    sink(seed, 0)?;

    let mut size: u64 = 1;
    let mut depth: u32 = 0;
    let mut peak: u64 = 1;
    let mut level: Vec<PlanePoint> = vec![seed];

    loop {
        let candidates: Vec<Vec<(CellProbe, PlanePoint)>> = level
            .par_chunks(CHUNK)
            .map(|chunk| {
                let mut out = Vec::with_capacity(chunk.len() * 2);
                for &p in chunk {
                    sys.for_each_neighbor(p, |nb| {
                        let probe = CellProbe::new(nb, q);
                        if !seen.known(&probe) {
                            out.push((probe, nb));
                        }
                    });
                }
                out
            })
            .collect();

        let mut next_keys: FxHashSet<CellKey> = FxHashSet::default();
        let mut next: Vec<PlanePoint> = Vec::new();
        let at_depth_cap = params.max_depth.is_some_and(|m| depth >= m);
        for (probe, p) in candidates.into_iter().flatten() {
            let fresh = match &seen {
                Seen::Full(all) => !probe.hits(all),
                Seen::Frontier { .. } => !probe.hits(&next_keys),
            };
            if !fresh {
                continue;
            }
            if size >= params.budget || at_depth_cap {
                let held = (seen.held() + next_keys.len()) as u64;
                return Ok(OrbitSummary {
                    status: OrbitStatus::BudgetExceeded,
                    size,
                    depth,
                    peak_memory_points: peak.max(held),
                });
            }
            match &mut seen {
                Seen::Full(all) => {
                    all.insert(probe.key());
                }
                Seen::Frontier { .. } => {
                    next_keys.insert(probe.key());
                }
            }
            size += 1;
            sink(p, depth + 1)?;
            next.push(p);
        }

        peak = peak.max((seen.held() + next_keys.len()) as u64);

        if next.is_empty() {
            return Ok(OrbitSummary {
                status: OrbitStatus::Closed,
                size,
                depth,
                peak_memory_points: peak,
            });
        }
        depth += 1;
        if let Seen::Frontier { prev, cur } = &mut seen {
            *prev = std::mem::replace(cur, next_keys);
        }
        level = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_point_and_five_cycle() {
        let sys = DiskSystem::symmetric(5, 0.9).unwrap();
        let p = OrbitParams::default();
        let r = orbit_bfs(&sys, PlanePoint::new(-1.0, 0.0), &p).unwrap();
        assert_eq!((r.status, r.size, r.depth), (OrbitStatus::Closed, 1, 0));

        let r = orbit_bfs(&sys, PlanePoint::new(-0.5, 0.0), &p).unwrap();
        assert_eq!((r.status, r.size, r.depth), (OrbitStatus::Closed, 5, 2));
        let f = frontier_bfs(&sys, PlanePoint::new(-0.5, 0.0), &p).unwrap();
        assert_eq!((f.status, f.size), (OrbitStatus::Closed, 5));
        assert!(f.peak_memory_points <= 5);
    }

    #[test]
    fn stream_delivers_each_point_once() {
        let sys = DiskSystem::symmetric(5, 0.9).unwrap();
        let mut got = Vec::new();
        let s = orbit_stream(&sys, PlanePoint::new(-0.5, 0.0), &OrbitParams::default(), |p, _| {
            got.push(p);
            Ok(())
        })
        .unwrap();
        assert_eq!(got.len(), 5);
        assert_eq!(s.size, 5);

        let mut n = 0;
        let s = orbit_stream(
            &DiskSystem::symmetric(5, 2.0).unwrap(),
            PlanePoint::new(0.1, 0.2),
            &OrbitParams::with_budget(1),
            |p, d| {
                assert_eq!((p, d), (PlanePoint::new(0.1, 0.2), 0));
                n += 1;
                Ok(())
            },
        )
        .unwrap();
        assert_eq!((n, s.size, s.status), (1, 1, OrbitStatus::BudgetExceeded));
    }

    #[test]
    fn sink_failure_propagates() {
        let sys = DiskSystem::symmetric(5, 0.9).unwrap();
        let err = orbit_stream(&sys, PlanePoint::new(-0.5, 0.0), &OrbitParams::default(), |_, d| {
            if d == 1 {
                Err(Error::Sink("full".into()))
            } else {
                Ok(())
            }
        })
        .unwrap_err();
        assert!(matches!(err, Error::Sink(_)));
    }

    #[test]
    fn budget_and_quantum_validation() {
        let sys = DiskSystem::symmetric(5, 0.9).unwrap();
        let bad = OrbitParams::with_budget(0);
        assert!(matches!(orbit_bfs(&sys, PlanePoint::ORIGIN, &bad), Err(Error::Usage(_))));
        let bad = OrbitParams {
            quantum: 0.0,
            ..OrbitParams::default()
        };
        assert!(frontier_bfs(&sys, PlanePoint::ORIGIN, &bad).is_err());
    }

    #[test]
    fn exact_budget_closes() {
        let sys = DiskSystem::symmetric(5, 0.9).unwrap();
        let r = frontier_bfs(&sys, PlanePoint::new(-0.5, 0.0), &OrbitParams::with_budget(5)).unwrap();
        assert_eq!((r.status, r.size), (OrbitStatus::Closed, 5));
        let r = frontier_bfs(&sys, PlanePoint::new(-0.5, 0.0), &OrbitParams::with_budget(4)).unwrap();
        assert_eq!((r.status, r.size), (OrbitStatus::BudgetExceeded, 4));
    }

    #[test]
    fn depth_cap_counts_as_exceeded() {
        let sys = DiskSystem::symmetric(5, 0.9).unwrap();
        let params = OrbitParams {
            max_depth: Some(1),
            ..OrbitParams::default()
        };
        let r = frontier_bfs(&sys, PlanePoint::new(-0.5, 0.0), &params).unwrap();
        assert_eq!((r.status, r.size, r.depth), (OrbitStatus::BudgetExceeded, 3, 1));
        let params = OrbitParams {
            max_depth: Some(2),
            ..OrbitParams::default()
        };
        let r = frontier_bfs(&sys, PlanePoint::new(-0.5, 0.0), &params).unwrap();
        assert_eq!((r.status, r.size), (OrbitStatus::Closed, 5));
    }

    #[test]
    fn emitted_points_match_size() {
        let sys = DiskSystem::symmetric(5, 1.2).unwrap();
        let params = OrbitParams {
            emit_points: true,
            ..OrbitParams::default()
        };
        let r = orbit_bfs(&sys, PlanePoint::ORIGIN, &params).unwrap();
        assert_eq!(r.points.as_ref().unwrap().len() as u64, r.size);
        let none = orbit_bfs(&sys, PlanePoint::ORIGIN, &OrbitParams::default()).unwrap();
        assert!(none.points.is_none());
    }
}
