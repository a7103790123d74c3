use serde::Serialize;

use crate::critical::family_can_be_infinite;
use crate::error::{Error, Result};
use crate::geometry::{DiskSystem, PlanePoint, Word};

/// Letters per stage word beyond which construction stops.
const MAX_WORD_LETTERS: u64 = 1 << 27;
/// Words longer than this are not expanded into a [`Word`].
const MAX_EXPANDED_LETTERS: u64 = 1 << 20;
const PREDICTION_TOL: f64 = 1e-9;

/// One stage-word reference: word `k` of the previous stage, possibly inverted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
struct Ref {
    k: usize,
    inv: bool,
}

/// Stage `s > 0` word `k` is `first` followed by `second` from stage `s - 1`.
#[derive(Clone, Copy, Debug, Serialize)]
struct Split {
    first: Ref,
    second: Ref,
}

#[derive(Clone, Debug, Serialize)]
pub struct ShrinkStage {
    pub stage: usize,
    /// Letters in each word of this stage.
    pub letters: Vec<u64>,
    /// Measured displacement length of each word applied to the origin.
    pub lengths: Vec<f64>,
    pub predicted_length: f64,
    /// Largest distance between a measured and a predicted displacement.
    pub max_error: f64,
    /// Smallest distance from any intermediate point to the edge of the disk
    /// being applied.
    pub min_margin: f64,
    /// Whether each word was composed in swapped order.
    pub swapped: Vec<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ShrinkWitness {
    pub n: u32,
    pub r: f64,
    /// Predicted length ratio between consecutive stages.
    pub ratio: f64,
    pub stages: Vec<ShrinkStage>,
    pub final_length: f64,
    #[serde(skip)]
    base: Vec<Word>,
    #[serde(skip)]
    splits: Vec<Vec<Split>>,
}

impl ShrinkWitness {
    /// Expands word `k` of `stage` into plain letters.
    pub fn word(&self, stage: usize, k: usize) -> Result<Word> {
        let st = self
            .stages
            .get(stage)
            .ok_or_else(|| Error::usage(format!("no stage {stage}")))?;
        let letters = *st
            .letters
            .get(k)
            .ok_or_else(|| Error::usage(format!("no word {k} at stage {stage}")))?;
        if letters > MAX_EXPANDED_LETTERS {
            return Err(Error::usage(format!(
                "word has {letters} letters, above the expansion limit {MAX_EXPANDED_LETTERS}"
            )));
        }
        let mut out = Word::empty();
        self.expand(stage, Ref { k, inv: false }, &mut out);
        Ok(out)
    }

    fn expand(&self, stage: usize, r: Ref, out: &mut Word) {
        if stage == 0 {
            let w = if r.inv { self.base[r.k].inverse() } else { self.base[r.k].clone() };
            out.factors.extend_from_slice(&w.factors);
            return;
        }
        let sp = self.splits[stage - 1][r.k];
        let (a, b) = if r.inv {
            (flip(sp.second), flip(sp.first))
        } else {
            (sp.first, sp.second)
        };
        self.expand(stage - 1, a, out);
        self.expand(stage - 1, b, out);
    }
}

fn flip(r: Ref) -> Ref {
    Ref { k: r.k, inv: !r.inv }
}

struct Trace {
    min_margin: f64,
}

/// Applies stage words letter by letter without expanding them.
struct Applier<'a> {
    sys: &'a DiskSystem,
    base: &'a [Word],
    splits: &'a [Vec<Split>],
}

impl Applier<'_> {
    fn apply(&self, stage: usize, r: Ref, p: PlanePoint, tr: &mut Trace) -> Result<PlanePoint> {
        if stage == 0 {
            let w = &self.base[r.k];
            let mut q = p;
            let mut letter = |&(i, e): &(usize, i64)| -> Result<()> {
                let e = if r.inv { -e } else { e };
                let disk = &self.sys.disks()[i];
                let margin = disk.radius() - q.dist(disk.center());
                if !disk.contains(q) {
                    return Err(Error::Construction(format!(
                        "point {q} is outside disk {i}; the radius is too small"
                    )));
                }
                tr.min_margin = tr.min_margin.min(margin);
                q = disk.rotate_unchecked(disk.step_index(e), q);
                Ok(())
            };
            if r.inv {
                w.factors.iter().rev().try_for_each(&mut letter)?;
            } else {
                w.factors.iter().try_for_each(&mut letter)?;
            }
            return Ok(q);
        }
        let sp = self.splits[stage - 1][r.k];
        let (a, b) = if r.inv {
            (flip(sp.second), flip(sp.first))
        } else {
            (sp.first, sp.second)
        };
        let q = self.apply(stage - 1, a, p, tr)?;
        self.apply(stage - 1, b, q, tr)
    }
}

/// `b^-k a^-1 b^(k+1)`: translation by `2ω^k(1 - ω)`, `ω = e^{-2πi/n}`.
fn base_word(n: u32, k: usize) -> Word {
    let n = i64::from(n);
    let k = k as i64;
    let mut w = Word::empty();
    for (disk, e) in [(1, -k), (0, -1), (1, k + 1)] {
        let e = e.rem_euclid(n);
        if e != 0 {
            w.push(disk, if e > n / 2 { e - n } else { e });
        }
    }
    w
}

/// Builds words translating the origin by less than `epsilon` in `GG_n(r)`.
///
/// Stage 0 uses the `n` polygon-edge translations. For odd `n` each later
/// stage adds edge vectors `(n - 1)/2` apart, which shrinks the star by
/// `2 sin(π/2n)` (the pentagram for `n = 5`); for even `n` it takes
/// differences of adjacent edges, shrinking by `2 sin(π/n)`. Each composite
/// is formed in whichever order keeps its path from the origin deeper inside
/// the disks, and every word is applied literally to check it.
pub fn shrinking_translations(n: u32, r: f64, epsilon: f64) -> Result<ShrinkWitness> {
    if n < 2 {
        return Err(Error::usage(format!("order must be at least 2, got {n}")));
    }
    if !family_can_be_infinite(n, n) {
        return Err(Error::AlwaysFinite { n1: n, n2: n });
    }
    if !(r >= 4.0 && r.is_finite()) {
        return Err(Error::usage(format!("radius must be at least 4, got {r}")));
    }
    if !(epsilon > 0.0) {
        return Err(Error::usage(format!("epsilon must be positive, got {epsilon}")));
    }
    let sys = DiskSystem::symmetric(n, r)?;
    let nn = n as usize;
    let omega = PlanePoint::polar(-std::f64::consts::TAU / n as f64);
    let one = PlanePoint::new(1.0, 0.0);
    let e0 = (one - omega) * 2.0;
    let odd = n % 2 == 1;
    let m = (nn - 1) / 2;
    let factor = if odd { one + pow(omega, m) } else { omega - one };
    let ratio = factor.norm();

    let base: Vec<Word> = (0..nn).map(|k| base_word(n, k)).collect();
    let mut splits: Vec<Vec<Split>> = Vec::new();
    let mut letters: Vec<u64> = base.iter().map(|w| w.len() as u64).collect();
    let mut stages = Vec::new();
    let mut scale = one;

    loop {
        let s = stages.len();
        let predicted: Vec<PlanePoint> =
            (0..nn).map(|k| e0.cmul(pow(omega, k)).cmul(scale)).collect();
        let applier = Applier {
            sys: &sys,
            base: &base,
            splits: &splits,
        };
        let mut swapped = vec![false; nn];
        let mut lengths = Vec::with_capacity(nn);
        let mut max_error: f64 = 0.0;
        let mut min_margin = f64::INFINITY;

        if s == 0 {
            for k in 0..nn {
                let mut tr = Trace { min_margin: f64::INFINITY };
                let d = applier.apply(0, Ref { k, inv: false }, PlanePoint::ORIGIN, &mut tr)?;
                lengths.push(d.norm());
                max_error = max_error.max(d.dist(predicted[k]));
                min_margin = min_margin.min(tr.min_margin);
            }
        } else {
            // Pick an order for each composite, then record it.
            let prev = s - 1;
            let mut level = Vec::with_capacity(nn);
            for k in 0..nn {
                let (a, b) = if odd {
                    (Ref { k, inv: false }, Ref { k: (k + m) % nn, inv: false })
                } else {
                    (Ref { k, inv: true }, Ref { k: (k + 1) % nn, inv: false })
                };
                let mut best: Option<(Split, PlanePoint, f64)> = None;
                let mut last_err = None;
                for split in [Split { first: a, second: b }, Split { first: b, second: a }] {
                    let mut tr = Trace { min_margin: f64::INFINITY };
                    let res = applier
                        .apply(prev, split.first, PlanePoint::ORIGIN, &mut tr)
                        .and_then(|q| applier.apply(prev, split.second, q, &mut tr));
                    match res {
                        Ok(d) => {
                            if best.as_ref().is_none_or(|b| tr.min_margin > b.2) {
                                best = Some((split, d, tr.min_margin));
                            }
                        }
                        Err(e) => last_err = Some(e),
                    }
                }
                let (split, d, margin) = match best {
                    Some(b) => b,
                    None => return Err(last_err.expect("both orders were tried")),
                };
                swapped[k] = split.first != a;
                lengths.push(d.norm());
                max_error = max_error.max(d.dist(predicted[k]));
                min_margin = min_margin.min(margin);
                level.push(split);
            }
            splits.push(level);
        }

        if max_error > PREDICTION_TOL {
            return Err(Error::InvariantViolation(format!(
                "stage {s}: displacement differs from prediction by {max_error:e}"
            )));
        }
        let predicted_length = e0.norm() * ratio.powi(s as i32);
        let achieved = lengths.iter().copied().fold(0.0, f64::max);
        stages.push(ShrinkStage {
            stage: s,
            letters: letters.clone(),
            lengths,
            predicted_length,
            max_error,
            min_margin,
            swapped,
        });
        if achieved < epsilon {
            return Ok(ShrinkWitness {
                n,
                r,
                ratio,
                stages,
                final_length: achieved,
                base,
                splits,
            });
        }

        let next: Vec<u64> = (0..nn)
            .map(|k| {
                let other = if odd { (k + m) % nn } else { (k + 1) % nn };
                letters[k] + letters[other]
            })
            .collect();
        if next.iter().any(|&l| l > MAX_WORD_LETTERS) {
            return Err(Error::Construction(format!(
                "reaching length {epsilon:e} needs words longer than {MAX_WORD_LETTERS} letters"
            )));
        }
        letters = next;
        scale = scale.cmul(factor);
    }
}

fn pow(z: PlanePoint, k: usize) -> PlanePoint {
    (0..k).fold(PlanePoint::new(1.0, 0.0), |acc, _| acc.cmul(z))
}
