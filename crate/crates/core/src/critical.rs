//! Finite / presumed-infinite classification and critical-radius bisection.

use std::fmt;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{DiskSystem, PlanePoint};
use crate::orbit::{frontier_bfs, OrbitParams, OrbitStatus, OrbitSummary, DEFAULT_QUANTUM};

/// Seed of the generator that picks the default lens points.
pub const DEFAULT_SEED_RNG: u64 = 0x6469_736b_7331;
pub const DEFAULT_LENS_SEEDS: usize = 8;
pub const DEFAULT_BRACKET: (f64, f64) = (1.001, 4.0);

/// `GG_{n1,n2}` has an infinite member iff `lcm(n1, n2) ∉ {2, 3, 4, 6}`.
pub fn family_can_be_infinite(n1: u32, n2: u32) -> bool {
    !matches!(n1.lcm(&n2), 1 | 2 | 3 | 4 | 6)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Finite,
    InfinitePresumed,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Finite => "Finite",
            Verdict::InfinitePresumed => "InfinitePresumed",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeedEvidence {
    pub seed: PlanePoint,
    pub orbit: OrbitSummary,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub verdict: Verdict,
    pub evidence: Vec<SeedEvidence>,
    pub budget: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifyOptions {
    pub budget: u64,
    pub quantum: f64,
    pub rng_seed: u64,
    pub lens_seeds: usize,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            budget: 1_000_000,
            quantum: DEFAULT_QUANTUM,
            rng_seed: DEFAULT_SEED_RNG,
            lens_seeds: DEFAULT_LENS_SEEDS,
        }
    }
}

impl ClassifyOptions {
    pub fn with_budget(budget: u64) -> Self {
        Self {
            budget,
            ..Self::default()
        }
    }
}

/// The upper intersection point of disks 0 and 1 followed by `count` points
/// drawn uniformly from their lens. Empty if the disks do not meet.
pub fn default_seeds(sys: &DiskSystem, count: usize, rng_seed: u64) -> Vec<PlanePoint> {
    let Some(&upper) = sys.intersection_points().first() else {
        return Vec::new();
    };
    let (d0, d1) = (&sys.disks()[0], &sys.disks()[1]);
    let lo_x = (d0.center().x - d0.radius()).max(d1.center().x - d1.radius());
    let hi_x = (d0.center().x + d0.radius()).min(d1.center().x + d1.radius());
    let lo_y = (d0.center().y - d0.radius()).max(d1.center().y - d1.radius());
    let hi_y = (d0.center().y + d0.radius()).min(d1.center().y + d1.radius());
    let mut seeds = vec![upper];
    if !(lo_x < hi_x && lo_y < hi_y) {
        return seeds;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    // Tangent disks have a zero-area lens; give up after a bounded number of draws.
    let mut draws = 0usize;
    while seeds.len() < count + 1 && draws < 1000 * (count + 1) {
        draws += 1;
        let p = PlanePoint::new(rng.random_range(lo_x..hi_x), rng.random_range(lo_y..hi_y));
        if d0.contains(p) && d1.contains(p) {
            seeds.push(p);
        }
    }
    seeds
}

/// Runs a frontier search from each seed; presumed infinite iff any seed's
/// orbit exceeds the budget. `seeds = None` uses [`default_seeds`].
pub fn classify(
    sys: &DiskSystem,
    opts: &ClassifyOptions,
    seeds: Option<&[PlanePoint]>,
) -> Result<Classification> {
    let params = OrbitParams {
        budget: opts.budget,
        quantum: opts.quantum,
        ..OrbitParams::default()
    };
    params.validate()?;
    let seeds = match seeds {
        Some(s) => s.to_vec(),
        None => default_seeds(sys, opts.lens_seeds, opts.rng_seed),
    };
    let evidence = seeds
        .par_iter()
        .map(|&seed| {
            frontier_bfs(sys, seed, &params).map(|res| SeedEvidence {
                seed,
                orbit: res.summary(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let verdict = if evidence
        .iter()
        .any(|e| e.orbit.status == OrbitStatus::BudgetExceeded)
    {
        Verdict::InfinitePresumed
    } else {
        Verdict::Finite
    };
    Ok(Classification {
        verdict,
        evidence,
        budget: opts.budget,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RcEstimate {
    pub n: u32,
    pub bracket_lo: f64,
    pub bracket_hi: f64,
    pub budget: u64,
    pub tol: f64,
    /// Seeds used at the final upper endpoint.
    pub seeds_used: Vec<PlanePoint>,
    pub iterations: u32,
}

impl RcEstimate {
    pub fn estimate(&self) -> f64 {
        (self.bracket_lo + self.bracket_hi) / 2.0
    }
}

/// Bisects on `r` for `GG_n(r)`, keeping `lo` finite and `hi` presumed
/// infinite at the given budget, until `hi - lo ≤ tol`.
pub fn estimate_rc(
    n: u32,
    opts: &ClassifyOptions,
    tol: f64,
    bracket: Option<(f64, f64)>,
) -> Result<RcEstimate> {
    if n < 2 {
        return Err(Error::usage(format!("order must be at least 2, got {n}")));
    }
    if !family_can_be_infinite(n, n) {
        return Err(Error::AlwaysFinite { n1: n, n2: n });
    }
    if !(tol > 0.0) {
        return Err(Error::usage(format!("tolerance must be positive, got {tol}")));
    }
    let (mut lo, mut hi) = bracket.unwrap_or(DEFAULT_BRACKET);
    if !(lo > 0.0 && lo < hi && hi.is_finite()) {
        return Err(Error::usage(format!("bracket must satisfy 0 < lo < hi, got ({lo}, {hi})")));
    }
    let at = |r: f64| -> Result<Classification> {
        classify(&DiskSystem::symmetric(n, r)?, opts, None)
    };
    let (c_lo, c_hi) = rayon::join(|| at(lo), || at(hi));
    let (c_lo, mut c_hi) = (c_lo?, c_hi?);
    if c_lo.verdict != Verdict::Finite || c_hi.verdict != Verdict::InfinitePresumed {
        return Err(Error::BadBracket {
            lo,
            hi,
            lo_verdict: c_lo.verdict.to_string(),
            hi_verdict: c_hi.verdict.to_string(),
        });
    }
    let mut iterations = 0;
    while hi - lo > tol {
        let mid = (lo + hi) / 2.0;
        let c = at(mid)?;
        match c.verdict {
            Verdict::Finite => lo = mid,
            Verdict::InfinitePresumed => {
                hi = mid;
                c_hi = c;
            }
        }
        iterations += 1;
    }
    Ok(RcEstimate {
        n,
        bracket_lo: lo,
        bracket_hi: hi,
        budget: opts.budget,
        tol,
        seeds_used: c_hi.evidence.iter().map(|e| e.seed).collect(),
        iterations,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum RowOutcome {
    Estimate(RcEstimate),
    AlwaysFinite,
    BadBracket,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub n: u32,
    pub outcome: RowOutcome,
}

pub const TABLE_HEADER: &str = "n,estimate,lo,hi,budget,tol,verdict_basis";

impl TableRow {
    pub fn to_csv(&self, budget: u64, tol: f64) -> String {
        match &self.outcome {
            RowOutcome::Estimate(e) => format!(
                "{},{:.6},{:.6},{:.6},{},{},bisection",
                self.n,
                e.estimate(),
                e.bracket_lo,
                e.bracket_hi,
                e.budget,
                e.tol
            ),
            RowOutcome::AlwaysFinite => format!("{},,,,{budget},{tol},AlwaysFinite", self.n),
            RowOutcome::BadBracket => format!("{},,,,{budget},{tol},BadBracket", self.n),
        }
    }
}

/// Estimates `r_c` for each order in turn.
pub fn radius_table(n_list: &[u32], opts: &ClassifyOptions, tol: f64) -> Result<Vec<TableRow>> {
    n_list
        .iter()
        .map(|&n| {
            let outcome = match estimate_rc(n, opts, tol, None) {
                Ok(e) => RowOutcome::Estimate(e),
                Err(Error::AlwaysFinite { .. }) => RowOutcome::AlwaysFinite,
                Err(Error::BadBracket { .. }) => RowOutcome::BadBracket,
                Err(e) => return Err(e),
            };
            Ok(TableRow { n, outcome })
        })
        .collect()
}

pub fn table_csv(rows: &[TableRow], budget: u64, tol: f64) -> String {
    let mut out = String::from(TABLE_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.to_csv(budget, tol));
        out.push('\n');
    }
    out
}
