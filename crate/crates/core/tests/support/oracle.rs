//! Plain full-memory BFS over a hash set, written without the engine's probe
//! or chunked merge. Two points coincide when their scaled coordinates are
//! within 0.625 of a stored cell in both axes.

use std::collections::{HashSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct OracleOrbit {
    pub points: Vec<(f64, f64)>,
    pub closed: bool,
}

pub struct Disc {
    pub cx: f64,
    pub cy: f64,
    pub r: f64,
    pub n: u32,
}

const BOUNDARY_SLACK: f64 = 1e-12;
const MATCH: f64 = 0.625;

fn inside(d: &Disc, p: (f64, f64)) -> bool {
    let (dx, dy) = (p.0 - d.cx, p.1 - d.cy);
    (dx * dx + dy * dy).sqrt() <= d.r + BOUNDARY_SLACK
}

fn turn(d: &Disc, p: (f64, f64), steps: f64) -> (f64, f64) {
    let (s, c) = (-std::f64::consts::TAU * steps / d.n as f64).sin_cos();
    let (dx, dy) = (p.0 - d.cx, p.1 - d.cy);
    (d.cx + dx * c - dy * s, d.cy + dx * s + dy * c)
}

pub fn seen(set: &HashSet<(i64, i64)>, p: (f64, f64), q: f64) -> bool {
    let (fx, fy) = (p.0 / q, p.1 / q);
    let (kx, ky) = (fx.round() as i64, fy.round() as i64);
    for ox in -1..=1 {
        for oy in -1..=1 {
            let k = (kx + ox, ky + oy);
            if (fx - k.0 as f64).abs() < MATCH && (fy - k.1 as f64).abs() < MATCH && set.contains(&k) {
                return true;
            }
        }
    }
    false
}

pub fn key(p: (f64, f64), q: f64) -> (i64, i64) {
    ((p.0 / q).round() as i64, (p.1 / q).round() as i64)
}

pub fn images(discs: &[Disc], p: (f64, f64)) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for d in discs {
        if inside(d, p) {
            out.push(turn(d, p, 1.0));
            out.push(turn(d, p, -1.0));
        }
    }
    out
}

pub fn orbit(discs: &[Disc], seed: (f64, f64), q: f64, budget: usize) -> OracleOrbit {
    let mut set = HashSet::new();
    set.insert(key(seed, q));
    let mut points = vec![seed];
    let mut queue = VecDeque::from([seed]);
    while let Some(p) = queue.pop_front() {
        for img in images(discs, p) {
            if seen(&set, img, q) {
                continue;
            }
            if points.len() == budget {
                return OracleOrbit { points, closed: false };
            }
            set.insert(key(img, q));
            points.push(img);
            queue.push_back(img);
        }
    }
    OracleOrbit { points, closed: true }
}

/// A point of the lens `|z ± 1| ≤ r`.
pub fn lens_point(rng: &mut ChaCha8Rng, r: f64) -> (f64, f64) {
    loop {
        let x = rng.random_range(-(r - 1.0)..(r - 1.0));
        let h = (r * r - 1.0).sqrt();
        let y = rng.random_range(-h..h);
        if (x + 1.0).hypot(y) <= r && (x - 1.0).hypot(y) <= r {
            return (x, y);
        }
    }
}

/// `(n, r, seed)` with `n` in {5, 7, 8, 12}, `r` in [1.01, 1.3) and the seed in the lens.
pub fn instances(count: usize) -> Vec<(u32, f64, (f64, f64))> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0A11);
    (0..count)
        .map(|_| {
            let n = [5, 7, 8, 12][rng.random_range(0..4)];
            let r = rng.random_range(1.01..1.3);
            let seed = lens_point(&mut rng, r);
            (n, r, seed)
        })
        .collect()
}

