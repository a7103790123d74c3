//! Disk systems and the piecewise-isometry action of their generators.
//!
//! Generator `i` rotates every point of the closed disk `i` clockwise by
//! `2π / order` about the disk center and leaves every other point fixed.
//! Words compose left to right: `ab(x) = b(a(x))`.

use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack added to every disk radius in membership tests, so that seeds and
/// intersection points computed on a boundary count as inside the closed disk.
pub const TOL_BOUNDARY: f64 = 1e-12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PlanePoint {
    pub x: f64,
    pub y: f64,
}

impl PlanePoint {
    pub const ORIGIN: PlanePoint = PlanePoint { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sqr(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn dist(self, other: PlanePoint) -> f64 {
        (self - other).norm()
    }

    /// Complex multiplication, treating points as `x + iy`.
    pub fn cmul(self, other: PlanePoint) -> PlanePoint {
        PlanePoint::new(
            self.x * other.x - self.y * other.y,
            self.x * other.y + self.y * other.x,
        )
    }

    /// Unit vector at angle `theta` (radians, counterclockwise).
    pub fn polar(theta: f64) -> PlanePoint {
        let (s, c) = theta.sin_cos();
        PlanePoint::new(c, s)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for PlanePoint {
    type Output = PlanePoint;
    fn add(self, o: PlanePoint) -> PlanePoint {
        PlanePoint::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for PlanePoint {
    type Output = PlanePoint;
    fn sub(self, o: PlanePoint) -> PlanePoint {
        PlanePoint::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for PlanePoint {
    type Output = PlanePoint;
    fn neg(self) -> PlanePoint {
        PlanePoint::new(-self.x, -self.y)
    }
}

impl Mul<f64> for PlanePoint {
    type Output = PlanePoint;
    fn mul(self, s: f64) -> PlanePoint {
        PlanePoint::new(self.x * s, self.y * s)
    }
}

impl fmt::Display for PlanePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl FromStr for PlanePoint {
    type Err = Error;

    /// Parses `x,y`.
    fn from_str(s: &str) -> Result<Self> {
        let (x, y) = s
            .split_once(',')
            .ok_or_else(|| Error::usage(format!("expected `x,y`, got `{s}`")))?;
        let parse = |v: &str| {
            v.trim()
                .parse::<f64>()
                .map_err(|e| Error::usage(format!("bad coordinate `{v}`: {e}")))
        };
        let p = PlanePoint::new(parse(x)?, parse(y)?);
        if !p.is_finite() {
            return Err(Error::usage(format!("non-finite point `{s}`")));
        }
        Ok(p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiskSpec {
    pub center: PlanePoint,
    pub radius: f64,
    /// Rotation order `n`; one generator step turns by `-2π/n`.
    pub order: u32,
}

impl DiskSpec {
    pub fn new(center: PlanePoint, radius: f64, order: u32) -> Self {
        Self {
            center,
            radius,
            order,
        }
    }
}

/// A disk together with its precomputed table of clockwise unit roots.
#[derive(Clone, Debug)]
pub struct Disk {
    spec: DiskSpec,
    limit_sqr: f64,
    /// `roots[k] = exp(-2πik/n)` for `k in 0..n`.
    roots: Vec<PlanePoint>,
}

impl Disk {
    fn new(spec: DiskSpec) -> Self {
        let n = spec.order as usize;
        let roots = (0..n)
            .map(|k| PlanePoint::polar(-TAU * k as f64 / n as f64))
            .collect();
        let limit = spec.radius + TOL_BOUNDARY;
        Self {
            spec,
            limit_sqr: limit * limit,
            roots,
        }
    }

    pub fn spec(&self) -> &DiskSpec {
        &self.spec
    }

    pub fn center(&self) -> PlanePoint {
        self.spec.center
    }

    pub fn radius(&self) -> f64 {
        self.spec.radius
    }

    pub fn order(&self) -> u32 {
        self.spec.order
    }

    #[inline]
    pub fn contains(&self, p: PlanePoint) -> bool {
        (p - self.spec.center).norm_sqr() <= self.limit_sqr
    }

    /// Reduces an exponent to the root-table index.
    #[inline]
    pub fn step_index(&self, exponent: i64) -> usize {
        exponent.rem_euclid(self.spec.order as i64) as usize
    }

    /// Rotates `p` by `-2π·k/n` about the center, ignoring membership.
    #[inline]
    pub fn rotate_unchecked(&self, k: usize, p: PlanePoint) -> PlanePoint {
        let c = self.spec.center;
        c + (p - c).cmul(self.roots[k])
    }

    #[inline]
    pub fn apply(&self, exponent: i64, p: PlanePoint) -> PlanePoint {
        if self.contains(p) {
            self.rotate_unchecked(self.step_index(exponent), p)
        } else {
            p
        }
    }
}

/// An ordered list of closed disks, each with its own rotation order.
#[derive(Clone, Debug)]
pub struct DiskSystem {
    disks: Vec<Disk>,
}

impl DiskSystem {
    pub fn new(specs: Vec<DiskSpec>) -> Result<Self> {
        if specs.len() < 2 {
            return Err(Error::usage(format!(
                "a disk system needs at least 2 disks, got {}",
                specs.len()
            )));
        }
        for (i, s) in specs.iter().enumerate() {
            if !(s.radius > 0.0 && s.radius.is_finite()) {
                return Err(Error::usage(format!(
                    "disk {i}: radius must be positive and finite, got {}",
                    s.radius
                )));
            }
            if s.order < 2 {
                return Err(Error::usage(format!(
                    "disk {i}: order must be at least 2, got {}",
                    s.order
                )));
            }
            if !s.center.is_finite() {
                return Err(Error::usage(format!("disk {i}: non-finite center")));
            }
        }
        Ok(Self {
            disks: specs.into_iter().map(Disk::new).collect(),
        })
    }

    /// `GG_{n1,n2}(r1,r2)` in the canonical layout, centers `(-1,0)` and `(1,0)`.
    pub fn two_disk(n1: u32, n2: u32, r1: f64, r2: f64) -> Result<Self> {
        Self::new(vec![
            DiskSpec::new(PlanePoint::new(-1.0, 0.0), r1, n1),
            DiskSpec::new(PlanePoint::new(1.0, 0.0), r2, n2),
        ])
    }

    /// `GG_n(r)`: equal orders and equal radii.
    pub fn symmetric(n: u32, r: f64) -> Result<Self> {
        Self::two_disk(n, n, r, r)
    }

    pub fn len(&self) -> usize {
        self.disks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.disks.is_empty()
    }

    pub fn disks(&self) -> &[Disk] {
        &self.disks
    }

    pub fn specs(&self) -> Vec<DiskSpec> {
        self.disks.iter().map(|d| d.spec).collect()
    }

    pub fn disk(&self, index: usize) -> Result<&Disk> {
        self.disks.get(index).ok_or_else(|| {
            Error::usage(format!(
                "disk index {index} out of range (system has {} disks)",
                self.disks.len()
            ))
        })
    }

    pub fn max_radius(&self) -> f64 {
        self.disks.iter().map(Disk::radius).fold(0.0, f64::max)
    }

    pub fn disk_contains(&self, disk_index: usize, p: PlanePoint) -> Result<bool> {
        Ok(self.disk(disk_index)?.contains(p))
    }

    pub fn apply_generator(
        &self,
        disk_index: usize,
        exponent: i64,
        p: PlanePoint,
    ) -> Result<PlanePoint> {
        Ok(self.disk(disk_index)?.apply(exponent, p))
    }

    /// Applies the factors of `w` in order. The word must be valid for this system.
    pub fn apply_word(&self, w: &Word, p: PlanePoint) -> Result<PlanePoint> {
        w.check(self)?;
        Ok(self.apply_word_unchecked(w, p))
    }

    pub(crate) fn apply_word_unchecked(&self, w: &Word, p: PlanePoint) -> PlanePoint {
        w.factors
            .iter()
            .fold(p, |q, &(i, e)| self.disks[i].apply(e, q))
    }

    /// Boundary-circle intersection points of disks 0 and 1, upper point first.
    pub fn intersection_points(&self) -> Vec<PlanePoint> {
        circle_intersections(
            self.disks[0].center(),
            self.disks[0].radius(),
            self.disks[1].center(),
            self.disks[1].radius(),
        )
    }

    /// Images of `p` under every generator and its inverse, skipping images equal to `p`.
    pub fn neighbors(&self, p: PlanePoint) -> Vec<PlanePoint> {
        let mut out = Vec::with_capacity(2 * self.disks.len());
        self.for_each_neighbor(p, |q| out.push(q));
        out
    }

    #[inline]
    pub(crate) fn for_each_neighbor(&self, p: PlanePoint, mut f: impl FnMut(PlanePoint)) {
        for disk in &self.disks {
            if !disk.contains(p) {
                continue;
            }
            let n = disk.order() as usize;
            let fwd = disk.rotate_unchecked(1, p);
            if fwd != p {
                f(fwd);
            }
            if n > 2 {
                let back = disk.rotate_unchecked(n - 1, p);
                if back != p {
                    f(back);
                }
            }
        }
    }
}

/// Intersection points of two circles, upper (then rightmost) first.
pub fn circle_intersections(c1: PlanePoint, r1: f64, c2: PlanePoint, r2: f64) -> Vec<PlanePoint> {
    let delta = c2 - c1;
    let d2 = delta.norm_sqr();
    if d2 == 0.0 {
        return Vec::new();
    }
    let d = d2.sqrt();
    let along = (r1 * r1 - r2 * r2 + d2) / (2.0 * d);
    let h2 = r1 * r1 - along * along;
    if h2 < 0.0 {
        return Vec::new();
    }
    let unit = delta * (1.0 / d);
    let base = c1 + unit * along;
    if h2 == 0.0 {
        return vec![base];
    }
    let h = h2.sqrt();
    let perp = PlanePoint::new(-unit.y, unit.x);
    let mut pts = vec![base + perp * h, base - perp * h];
    pts.sort_by(|p, q| q.y.total_cmp(&p.y).then(q.x.total_cmp(&p.x)));
    pts
}

/// `2(1 - e^{-2πi/n})`: the translation performed by `a^-1 b` on points that
/// both rotations move, for equal orders `n` and centers `(-1,0)`, `(1,0)`.
pub fn word_translation_vector(n: u32) -> Result<PlanePoint> {
    if n < 2 {
        return Err(Error::usage(format!("order must be at least 2, got {n}")));
    }
    let w = PlanePoint::polar(-TAU / n as f64);
    Ok((PlanePoint::new(1.0, 0.0) - w) * 2.0)
}

/// A finite sequence of `(disk index, exponent)` factors, applied left to right.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word {
    pub factors: Vec<(usize, i64)>,
}

impl Word {
    pub fn new(factors: Vec<(usize, i64)>) -> Self {
        Self { factors }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    /// Appends `g^e`.
    pub fn push(&mut self, disk: usize, exponent: i64) {
        self.factors.push((disk, exponent));
    }

    pub fn then(mut self, other: &Word) -> Word {
        self.factors.extend_from_slice(&other.factors);
        self
    }

    pub fn inverse(&self) -> Word {
        Word::new(self.factors.iter().rev().map(|&(i, e)| (i, -e)).collect())
    }

    pub fn pow(&self, times: usize) -> Word {
        Word::new(self.factors.repeat(times))
    }

    pub fn check(&self, sys: &DiskSystem) -> Result<()> {
        for &(i, _) in &self.factors {
            sys.disk(i)?;
        }
        Ok(())
    }

    /// Merges adjacent same-disk factors and reduces exponents to `(-n/2, n/2]`,
    /// dropping factors that reduce to zero. Never reorders across disks.
    pub fn normalized(&self, sys: &DiskSystem) -> Result<Word> {
        self.check(sys)?;
        let mut out: Vec<(usize, i64)> = Vec::with_capacity(self.factors.len());
        for &(i, e) in &self.factors {
            let n = sys.disks[i].order() as i64;
            let e = reduce_exponent(e, n);
            if e == 0 {
                continue;
            }
            match out.last_mut() {
                Some((j, acc)) if *j == i => {
                    *acc = reduce_exponent(*acc + e, n);
                    if *acc == 0 {
                        out.pop();
                    }
                }
                _ => out.push((i, e)),
            }
        }
        Ok(Word::new(out))
    }
}

fn reduce_exponent(e: i64, n: i64) -> i64 {
    let r = e.rem_euclid(n);
    if 2 * r > n {
        r - n
    } else {
        r
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (k, &(i, e)) in self.factors.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            let letter = char::from(b'a' + (i % 26) as u8);
            if e == 1 {
                write!(f, "{letter}")?;
            } else {
                write!(f, "{letter}^{e}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Parses words like `a^-2 b^-1 a b2` or `a2b-1`. Letters name disks
    /// (`a` = 0); `1` or an empty string is the identity.
    fn from_str(s: &str) -> Result<Self> {
        let mut factors = Vec::new();
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        if chars.is_empty() || chars == ['1'] {
            return Ok(Word::empty());
        }
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if !c.is_ascii_lowercase() {
                return Err(Error::usage(format!("bad word `{s}`: unexpected `{c}`")));
            }
            let disk = (c as u8 - b'a') as usize;
            i += 1;
            if i < chars.len() && chars[i] == '^' {
                i += 1;
            }
            let start = i;
            if i < chars.len() && (chars[i] == '-' || chars[i] == '+') {
                i += 1;
            }
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            let exponent = match digits.as_str() {
                "" => 1,
                "-" => -1,
                "+" => 1,
                d => d
                    .parse::<i64>()
                    .map_err(|e| Error::usage(format!("bad exponent in `{s}`: {e}")))?,
            };
            factors.push((disk, exponent));
        }
        Ok(Word::new(factors))
    }
}
