use std::collections::VecDeque;
use std::f64::consts::TAU;

use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use super::palette::{order_color, region_color, BACKGROUND, INK};
use super::raster::{RasterImage, Viewport};
use crate::error::{Error, Result};
use crate::geometry::{DiskSystem, PlanePoint};
use crate::orbit::{quantize, CellKey};

/// Grid for recognising repeated segment images.
const SEGMENT_QUANTUM: f64 = 1e-9;
/// Pieces shorter than this are dropped after splitting.
const MIN_PIECE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundaryColoring {
    /// Boundary pixels by the search depth of the segment that drew them.
    OrbitOrder,
    /// Regions shaded by `log2` of their pixel area.
    RegionSize,
}

#[derive(Clone, Debug)]
pub struct BoundaryRender {
    pub image: RasterImage,
    /// Faces of the arrangement: the interior components plus one for the
    /// outside. Boundaries touching the frame can cut the outside into
    /// several components; they still count once.
    pub regions: usize,
    /// Components that do not touch the image border.
    pub interior_regions: usize,
    /// Pixel area of each component, in label order.
    pub region_areas: Vec<usize>,
    pub segments: usize,
    /// Set when the segment budget ran out before the images closed up.
    pub partial: bool,
}

#[derive(Clone, Copy, Debug)]
struct Segment {
    a: PlanePoint,
    b: PlanePoint,
    depth: u32,
}

fn segment_key(a: PlanePoint, b: PlanePoint) -> (CellKey, CellKey) {
    let (ka, kb) = (quantize(a, SEGMENT_QUANTUM), quantize(b, SEGMENT_QUANTUM));
    if ka <= kb {
        (ka, kb)
    } else {
        (kb, ka)
    }
}

/// Cuts `ab` at every crossing with a disk boundary, so that each piece is
/// entirely inside or entirely outside every disk.
fn split_at_circles(sys: &DiskSystem, a: PlanePoint, b: PlanePoint) -> Vec<(PlanePoint, PlanePoint)> {
    let d = b - a;
    let dd = d.norm_sqr();
    if dd == 0.0 {
        return Vec::new();
    }
    let mut cuts = Vec::new();
    for disk in sys.disks() {
        // |a + t d - c|² = r²
        let f = a - disk.center();
        let half_b = f.x * d.x + f.y * d.y;
        let c = f.norm_sqr() - disk.radius() * disk.radius();
        let disc = half_b * half_b - dd * c;
        if disc <= 0.0 {
            continue;
        }
        let s = disc.sqrt();
        for t in [(-half_b - s) / dd, (-half_b + s) / dd] {
            if t > 1e-12 && t < 1.0 - 1e-12 {
                cuts.push(t);
            }
        }
    }
    cuts.sort_by(f64::total_cmp);
    let mut pieces = Vec::with_capacity(cuts.len() + 1);
    let mut start = a;
    for t in cuts {
        let p = a + d * t;
        if p.dist(start) > MIN_PIECE {
            pieces.push((start, p));
            start = p;
        }
    }
    if b.dist(start) > MIN_PIECE {
        pieces.push((start, b));
    }
    pieces
}

/// Images of the disk boundaries under the group, as line segments.
fn boundary_segments(sys: &DiskSystem, segment_count: usize, budget: usize) -> (Vec<Segment>, bool) {
    let mut seen: FxHashSet<(CellKey, CellKey)> = FxHashSet::default();
    let mut out: Vec<Segment> = Vec::new();
    let mut queue: VecDeque<usize> = VecDeque::new();
    let mut partial = false;

    // Some(true): new segment; Some(false): already known; None: budget spent.
    let mut admit = |a: PlanePoint, b: PlanePoint, depth: u32, out: &mut Vec<Segment>| {
        let key = segment_key(a, b);
        if seen.contains(&key) {
            return Some(false);
        }
        if out.len() >= budget {
            return None;
        }
        seen.insert(key);
        out.push(Segment { a, b, depth });
        Some(true)
    };

    'init: for disk in sys.disks() {
        let vertex = |j: usize| {
            disk.center() + PlanePoint::polar(TAU * j as f64 / segment_count as f64) * disk.radius()
        };
        for j in 0..segment_count {
            for (a, b) in split_at_circles(sys, vertex(j), vertex(j + 1)) {
                match admit(a, b, 0, &mut out) {
                    Some(true) => queue.push_back(out.len() - 1),
                    Some(false) => {}
                    None => {
                        partial = true;
                        break 'init;
                    }
                }
            }
        }
    }

    'search: while let Some(idx) = queue.pop_front() {
        let seg = out[idx];
        let mid = (seg.a + seg.b) * 0.5;
        for disk in sys.disks() {
            if !disk.contains(mid) {
                continue;
            }
            let n = disk.order() as usize;
            let steps: &[usize] = if n > 2 { &[1, n - 1] } else { &[1] };
            for &k in steps {
                let (a, b) = (disk.rotate_unchecked(k, seg.a), disk.rotate_unchecked(k, seg.b));
                for (pa, pb) in split_at_circles(sys, a, b) {
                    match admit(pa, pb, seg.depth + 1, &mut out) {
                        Some(true) => queue.push_back(out.len() - 1),
                        Some(false) => {}
                        None => {
                            partial = true;
                            break 'search;
                        }
                    }
                }
            }
        }
    }
    (out, partial)
}

/// Marks every pixel the segment passes through, so boundaries are
/// 4-connected and regions cannot leak across a diagonal step.
fn rasterize(vp: &Viewport, seg: &Segment, mut mark: impl FnMut(usize, usize)) {
    let (w, h) = (vp.pixels_w as f64, vp.pixels_h as f64);
    let (mut u0, mut v0) = vp.to_pixel_space(seg.a);
    let (mut u1, mut v1) = vp.to_pixel_space(seg.b);
    // Liang-Barsky clip to [0, w] x [0, h].
    let (du, dv) = (u1 - u0, v1 - v0);
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    for (p, q) in [(-du, u0), (du, w - u0), (-dv, v0), (dv, h - v0)] {
        if p == 0.0 {
            if q < 0.0 {
                return;
            }
        } else {
            let t = q / p;
            if p < 0.0 {
                t0 = t0.max(t);
            } else {
                t1 = t1.min(t);
            }
        }
    }
    if t0 > t1 {
        return;
    }
    (u0, v0, u1, v1) = (u0 + t0 * du, v0 + t0 * dv, u0 + t1 * du, v0 + t1 * dv);

    let clamp = |x: f64, max: usize| (x.floor().max(0.0) as usize).min(max - 1);
    let (mut i, mut j) = (clamp(u0, vp.pixels_w), clamp(v0, vp.pixels_h));
    let (ie, je) = (clamp(u1, vp.pixels_w), clamp(v1, vp.pixels_h));
    let (du, dv) = (u1 - u0, v1 - v0);
    let step_i: isize = if du > 0.0 { 1 } else { -1 };
    let step_j: isize = if dv > 0.0 { 1 } else { -1 };
    let next_t = |pos: f64, cell: usize, d: f64| -> f64 {
        if d == 0.0 {
            f64::INFINITY
        } else {
            let edge = if d > 0.0 { cell as f64 + 1.0 } else { cell as f64 };
            (edge - pos) / d
        }
    };
    let mut t_i = next_t(u0, i, du);
    let mut t_j = next_t(v0, j, dv);
    let delta_i = if du == 0.0 { f64::INFINITY } else { 1.0 / du.abs() };
    let delta_j = if dv == 0.0 { f64::INFINITY } else { 1.0 / dv.abs() };
    mark(i, j);
    let limit = (ie.abs_diff(i) + je.abs_diff(j)) + 2;
    for _ in 0..limit {
        if i == ie && j == je {
            break;
        }
        if t_i < t_j {
            let ni = i as isize + step_i;
            if ni < 0 || ni as usize >= vp.pixels_w {
                break;
            }
            i = ni as usize;
            t_i += delta_i;
        } else {
            let nj = j as isize + step_j;
            if nj < 0 || nj as usize >= vp.pixels_h {
                break;
            }
            j = nj as usize;
            t_j += delta_j;
        }
        mark(i, j);
    }
}

/// Draws the disk boundaries and all their images, then labels the
/// 4-connected regions between them.
pub fn render_boundary(
    sys: &DiskSystem,
    segment_count: usize,
    segment_budget: usize,
    viewport: &Viewport,
    coloring: BoundaryColoring,
) -> Result<BoundaryRender> {
    if segment_count < 8 {
        return Err(Error::usage(format!(
            "segment count must be at least 8, got {segment_count}"
        )));
    }
    if segment_budget < 1 {
        return Err(Error::usage("segment budget must be at least 1"));
    }
    let (segments, partial) = boundary_segments(sys, segment_count, segment_budget);

    let (w, h) = (viewport.pixels_w, viewport.pixels_h);
    // 0 = free, otherwise 1 + depth of the first segment drawn there.
    let mut wall = vec![0u32; w * h];
    for seg in &segments {
        rasterize(viewport, seg, |i, j| {
            let cell = &mut wall[j * w + i];
            if *cell == 0 {
                *cell = seg.depth + 1;
            }
        });
    }

    const UNSET: u32 = u32::MAX;
    let mut label = vec![UNSET; w * h];
    let mut areas = Vec::new();
    let mut touches_border = Vec::new();
    let mut stack = Vec::new();
    for start in 0..w * h {
        if wall[start] != 0 || label[start] != UNSET {
            continue;
        }
        let id = areas.len() as u32;
        let (mut area, mut border) = (0usize, false);
        label[start] = id;
        stack.push(start);
        while let Some(p) = stack.pop() {
            area += 1;
            let (i, j) = (p % w, p / w);
            border |= i == 0 || j == 0 || i == w - 1 || j == h - 1;
            let mut visit = |q: usize| {
                if wall[q] == 0 && label[q] == UNSET {
                    label[q] = id;
                    stack.push(q);
                }
            };
            if i > 0 {
                visit(p - 1);
            }
            if i + 1 < w {
                visit(p + 1);
            }
            if j > 0 {
                visit(p - w);
            }
            if j + 1 < h {
                visit(p + w);
            }
        }
        areas.push(area);
        touches_border.push(border);
    }

    let mut image = RasterImage::filled(w, h, BACKGROUND);
    for p in 0..w * h {
        let (i, j) = (p % w, p / w);
        let color = if wall[p] != 0 {
            match coloring {
                BoundaryColoring::OrbitOrder => order_color((wall[p] - 1) as usize),
                BoundaryColoring::RegionSize => INK,
            }
        } else {
            let id = label[p] as usize;
            if touches_border[id] {
                BACKGROUND
            } else {
                match coloring {
                    BoundaryColoring::OrbitOrder => lighten(order_color(id)),
                    BoundaryColoring::RegionSize => region_color(areas[id]),
                }
            }
        };
        image.set(i, j, color);
    }
    let interior_regions = touches_border.iter().filter(|&&b| !b).count();
    let outside = usize::from(touches_border.iter().any(|&b| b));
    Ok(BoundaryRender {
        image,
        regions: interior_regions + outside,
        interior_regions,
        region_areas: areas,
        segments: segments.len(),
        partial,
    })
}

fn lighten(c: [u8; 3]) -> [u8; 3] {
    c.map(|v| 255 - (255 - v) / 3)
}
