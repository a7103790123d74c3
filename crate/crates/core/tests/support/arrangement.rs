//! Piece boundaries as exact circular arcs.
//!
//! Starting from the disk boundary circles, the part of every known arc that
//! lies in a disk is rotated by that disk's generator and its inverse until no
//! arc grows. The resulting planar graph gives the face count through Euler's
//! formula `V - E + F = 1 + C`, with the unbounded face included in `F`.

use std::collections::HashMap;
use std::f64::consts::TAU;

const EPS: f64 = 1e-9;
const SNAP: f64 = 1e-7;

pub struct Disc {
    pub cx: f64,
    pub cy: f64,
    pub r: f64,
    pub n: u32,
}

#[derive(Clone, Debug)]
struct Circle {
    cx: f64,
    cy: f64,
    r: f64,
    /// Sorted, disjoint, within `[0, TAU]`.
    arcs: Vec<(f64, f64)>,
}

#[derive(Debug, PartialEq, Eq)]
pub struct Counts {
    pub vertices: usize,
    pub edges: usize,
    pub components: usize,
    pub faces: usize,
    pub circles: usize,
}

fn wrap(t: f64) -> f64 {
    t.rem_euclid(TAU)
}

/// Splits `[a, a + len]` into pieces inside `[0, TAU]`.
fn span(a: f64, len: f64) -> Vec<(f64, f64)> {
    if len >= TAU - EPS {
        return vec![(0.0, TAU)];
    }
    let a = wrap(a);
    let b = a + len;
    if b <= TAU {
        vec![(a, b)]
    } else {
        vec![(a, TAU), (0.0, b - TAU)]
    }
}

fn merge(mut v: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    v.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (a, b) in v {
        if b - a < EPS {
            continue;
        }
        match out.last_mut() {
            Some(last) if a <= last.1 + EPS => last.1 = last.1.max(b),
            _ => out.push((a, b)),
        }
    }
    out
}

fn intersect(x: &[(f64, f64)], y: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for &(a, b) in x {
        for &(c, d) in y {
            let (lo, hi) = (a.max(c), b.min(d));
            if hi - lo > EPS {
                out.push((lo, hi));
            }
        }
    }
    merge(out)
}

fn total(v: &[(f64, f64)]) -> f64 {
    v.iter().map(|(a, b)| b - a).sum()
}

/// Angles of circle `c` lying in closed disk `d`.
fn inside_part(c: &Circle, d: &Disc) -> Vec<(f64, f64)> {
    let (dx, dy) = (d.cx - c.cx, d.cy - c.cy);
    let dist = dx.hypot(dy);
    if dist + c.r <= d.r + EPS {
        return vec![(0.0, TAU)];
    }
    if dist >= c.r + d.r - EPS || dist + d.r <= c.r + EPS {
        return Vec::new();
    }
    let mid = dy.atan2(dx);
    let half = ((c.r * c.r + dist * dist - d.r * d.r) / (2.0 * c.r * dist)).clamp(-1.0, 1.0).acos();
    span(mid - half, 2.0 * half)
}

fn circle_key(x: f64, y: f64, r: f64) -> (i64, i64, i64) {
    ((x / SNAP).round() as i64, (y / SNAP).round() as i64, (r / SNAP).round() as i64)
}

fn arcs_from(discs: &[Disc], max_circles: usize) -> Option<Vec<Circle>> {
    let mut circles: Vec<Circle> = discs
        .iter()
        .map(|d| Circle { cx: d.cx, cy: d.cy, r: d.r, arcs: vec![(0.0, TAU)] })
        .collect();
    let mut index: HashMap<(i64, i64, i64), usize> = circles
        .iter()
        .enumerate()
        .map(|(i, c)| (circle_key(c.cx, c.cy, c.r), i))
        .collect();
    let mut changed = true;
    while changed {
        changed = false;
        let mut i = 0;
        while i < circles.len() {
            for d in discs {
                let part = intersect(&circles[i].arcs, &inside_part(&circles[i], d));
                if part.is_empty() {
                    continue;
                }
                for sign in [1.0, -1.0] {
                    let theta = -TAU * sign / d.n as f64;
                    let (s, co) = theta.sin_cos();
                    let (px, py) = (circles[i].cx - d.cx, circles[i].cy - d.cy);
                    let (nx, ny) = (d.cx + px * co - py * s, d.cy + px * s + py * co);
                    let r = circles[i].r;
                    let moved: Vec<(f64, f64)> =
                        part.iter().flat_map(|&(a, b)| span(a + theta, b - a)).collect();
                    let k = circle_key(nx, ny, r);
                    let j = match index.get(&k) {
                        Some(&j) => j,
                        None => {
                            if circles.len() == max_circles {
                                return None;
                            }
                            circles.push(Circle { cx: nx, cy: ny, r, arcs: Vec::new() });
                            index.insert(k, circles.len() - 1);
                            circles.len() - 1
                        }
                    };
                    let before = total(&circles[j].arcs);
                    let mut all = circles[j].arcs.clone();
                    all.extend(moved);
                    let merged = merge(all);
                    if total(&merged) > before + 1e-7 {
                        changed = true;
                    }
                    circles[j].arcs = merged;
                }
            }
            i += 1;
        }
    }
    Some(circles)
}

fn wraps_zero(c: &Circle) -> bool {
    c.arcs.len() > 1 && c.arcs[0].0 < EPS && c.arcs[c.arcs.len() - 1].1 > TAU - EPS
}

fn on_arcs(c: &Circle, t: f64) -> bool {
    let t = wrap(t);
    c.arcs.iter().any(|&(a, b)| t >= a - 1e-7 && t <= b + 1e-7)
        || (t > TAU - 1e-7 && c.arcs.iter().any(|&(a, _)| a < 1e-7))
}

fn angle_of(c: &Circle, x: f64, y: f64) -> f64 {
    wrap((y - c.cy).atan2(x - c.cx))
}

struct Vertices {
    pts: Vec<(f64, f64)>,
    cells: HashMap<(i64, i64), Vec<usize>>,
}

impl Vertices {
    fn id(&mut self, x: f64, y: f64) -> usize {
        let (kx, ky) = ((x / SNAP).round() as i64, (y / SNAP).round() as i64);
        for ox in -1..=1 {
            for oy in -1..=1 {
                if let Some(ids) = self.cells.get(&(kx + ox, ky + oy)) {
                    for &i in ids {
                        let p = self.pts[i];
                        if (p.0 - x).abs() < 2.0 * SNAP && (p.1 - y).abs() < 2.0 * SNAP {
                            return i;
                        }
                    }
                }
            }
        }
        self.pts.push((x, y));
        self.cells.entry((kx, ky)).or_default().push(self.pts.len() - 1);
        self.pts.len() - 1
    }
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// `None` if the arc closure needs more than `max_circles` circles.
pub fn count(discs: &[Disc], max_circles: usize) -> Option<Counts> {
    let circles = arcs_from(discs, max_circles)?;
    let mut verts = Vertices { pts: Vec::new(), cells: HashMap::new() };
    // Per circle: (angle, vertex id).
    let mut on: Vec<Vec<(f64, usize)>> = vec![Vec::new(); circles.len()];
    for (i, c) in circles.iter().enumerate() {
        let full = c.arcs.len() == 1 && c.arcs[0].1 - c.arcs[0].0 >= TAU - EPS;
        if !full {
            let wraps = wraps_zero(c);
            for &(a, b) in &c.arcs {
                for t in [a, b] {
                    // The seam of an arc passing through angle zero is not an endpoint.
                    if wraps && !(EPS..=TAU - EPS).contains(&t) {
                        continue;
                    }
                    let (x, y) = (c.cx + c.r * t.cos(), c.cy + c.r * t.sin());
                    on[i].push((t, verts.id(x, y)));
                }
            }
        }
    }
    for i in 0..circles.len() {
        for j in i + 1..circles.len() {
            let (a, b) = (&circles[i], &circles[j]);
            for (x, y) in crossings(a, b) {
                let (ta, tb) = (angle_of(a, x, y), angle_of(b, x, y));
                if on_arcs(a, ta) && on_arcs(b, tb) {
                    let v = verts.id(x, y);
                    on[i].push((ta, v));
                    on[j].push((tb, v));
                }
            }
        }
    }
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (i, c) in circles.iter().enumerate() {
        let mut list = std::mem::take(&mut on[i]);
        list.sort_by(|x, y| x.0.total_cmp(&y.0));
        list.dedup_by(|x, y| x.1 == y.1);
        let full = c.arcs.len() == 1 && c.arcs[0].1 - c.arcs[0].0 >= TAU - EPS;
        if full {
            if list.is_empty() {
                let v = verts.id(c.cx + c.r, c.cy);
                edges.push((v, v));
                continue;
            }
            if list.len() > 1 && list[0].1 == list[list.len() - 1].1 {
                list.pop();
            }
            for k in 0..list.len() {
                edges.push((list[k].1, list[(k + 1) % list.len()].1));
            }
            continue;
        }
        // Arcs that wrap through angle zero are stored as two pieces.
        let wraps = wraps_zero(c);
        let mut pieces: Vec<Vec<usize>> = Vec::new();
        for (k, &(a, b)) in c.arcs.iter().enumerate() {
            let ids: Vec<usize> = list
                .iter()
                .filter(|&&(t, _)| t >= a - 1e-7 && t <= b + 1e-7)
                .map(|&(_, v)| v)
                .collect();
            if wraps && k == c.arcs.len() - 1 && c.arcs.len() > 1 {
                let mut joined = ids;
                joined.extend(pieces.remove(0));
                pieces.push(joined);
            } else {
                pieces.push(ids);
            }
        }
        for mut ids in pieces {
            ids.dedup();
            for w in ids.windows(2) {
                edges.push((w[0], w[1]));
            }
        }
    }
    let v = verts.pts.len();
    let mut parent: Vec<usize> = (0..v).collect();
    for &(a, b) in &edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
    }
    let components = (0..v).filter(|&i| find(&mut parent, i) == i).count();
    let e = edges.len();
    Some(Counts {
        vertices: v,
        edges: e,
        components,
        faces: e + 1 + components - v,
        circles: circles.len(),
    })
}

fn crossings(a: &Circle, b: &Circle) -> Vec<(f64, f64)> {
    let (dx, dy) = (b.cx - a.cx, b.cy - a.cy);
    let d2 = dx * dx + dy * dy;
    if d2 == 0.0 {
        return Vec::new();
    }
    let d = d2.sqrt();
    let along = (a.r * a.r - b.r * b.r + d2) / (2.0 * d);
    let h2 = a.r * a.r - along * along;
    if h2 < -1e-12 {
        return Vec::new();
    }
    let (ux, uy) = (dx / d, dy / d);
    let (bx, by) = (a.cx + ux * along, a.cy + uy * along);
    let h = h2.max(0.0).sqrt();
    if h < 1e-9 {
        return vec![(bx, by)];
    }
    vec![(bx - uy * h, by + ux * h), (bx + uy * h, by - ux * h)]
}
