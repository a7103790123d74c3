use rayon::prelude::*;
use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use super::palette::{density_color, BACKGROUND, INK};
use super::raster::{RasterImage, Viewport};
use crate::error::Result;
use crate::geometry::{DiskSystem, PlanePoint};
use crate::orbit::{orbit_stream, CellKey, CellProbe, OrbitParams, OrbitStatus, OrbitSummary};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrbitColoring {
    Binary,
    HitDensity,
}

#[derive(Clone, Debug)]
pub struct OrbitRender {
    pub image: RasterImage,
    /// Hits per pixel, row-major.
    pub counts: Vec<u32>,
    pub summaries: Vec<OrbitSummary>,
    /// Every orbit point, seed by seed in discovery order, when
    /// `params.emit_points` is set.
    pub points: Option<Vec<PlanePoint>>,
    /// Search depth of each emitted point.
    pub depths: Option<Vec<u32>>,
}

impl OrbitRender {
    /// Whether emitted point `i` lies in a fully expanded level of its seed's
    /// search, so that all of its generator images must be in the set.
    pub fn interior_mask(&self) -> Vec<bool> {
        let Some(depths) = &self.depths else {
            return Vec::new();
        };
        let mut out = Vec::with_capacity(depths.len());
        let mut seed = 0;
        let mut prev_depth = 0;
        for &d in depths {
            // Each seed's stream restarts at depth 0.
            if d == 0 && !out.is_empty() && prev_depth > 0 {
                seed += 1;
            }
            prev_depth = d;
            let s = &self.summaries[seed.min(self.summaries.len() - 1)];
            let closed = s.status == OrbitStatus::Closed;
            out.push(closed || d < s.depth);
        }
        out
    }
}

/// Streams the orbit of each seed into a per-pixel hit count.
pub fn render_orbit(
    sys: &DiskSystem,
    seeds: &[PlanePoint],
    params: &OrbitParams,
    viewport: &Viewport,
    coloring: OrbitColoring,
) -> Result<OrbitRender> {
    params.validate()?;
    let npix = viewport.pixels_w * viewport.pixels_h;
    let per_seed = seeds
        .par_iter()
        .map(|&seed| {
            let mut counts = vec![0u32; npix];
            let mut points = params.emit_points.then(Vec::new);
            let mut depths = params.emit_points.then(Vec::new);
            let summary = orbit_stream(sys, seed, params, |p, d| {
                if let Some((c, r)) = viewport.pixel_of(p) {
                    let slot = &mut counts[r * viewport.pixels_w + c];
                    *slot = slot.saturating_add(1);
                }
                if let (Some(v), Some(dv)) = (points.as_mut(), depths.as_mut()) {
                    v.push(p);
                    dv.push(d);
                }
                Ok(())
            })?;
            Ok((counts, summary, points, depths))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut counts = vec![0u32; npix];
    let mut summaries = Vec::with_capacity(seeds.len());
    let mut points = params.emit_points.then(Vec::new);
    let mut depths = params.emit_points.then(Vec::new);
    for (c, s, p, d) in per_seed {
        for (acc, v) in counts.iter_mut().zip(c) {
            *acc = acc.saturating_add(v);
        }
        summaries.push(s);
        if let (Some(all), Some(p)) = (points.as_mut(), p) {
            all.extend(p);
        }
        if let (Some(all), Some(d)) = (depths.as_mut(), d) {
            all.extend(d);
        }
    }

    let mut image = RasterImage::filled(viewport.pixels_w, viewport.pixels_h, BACKGROUND);
    for (i, &c) in counts.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let color = match coloring {
            OrbitColoring::Binary => INK,
            OrbitColoring::HitDensity => density_color(c),
        };
        image.set(i % viewport.pixels_w, i / viewport.pixels_w, color);
    }
    Ok(OrbitRender {
        image,
        counts,
        summaries,
        points,
        depths,
    })
}

/// Counts pairs `(p, i)`, with `p` one of the points selected by `check` and
/// inside disk `i`, whose image under generator `i` does not snap to a point
/// of the set. Zero for a complete orbit with every point selected.
pub fn generator_invariance_violations(
    sys: &DiskSystem,
    points: &[PlanePoint],
    check: &[bool],
    quantum: f64,
) -> usize {
    let keys: FxHashSet<CellKey> = points
        .iter()
        .map(|&p| CellProbe::new(p, quantum).key())
        .collect();
    points
        .par_iter()
        .zip(check)
        .filter(|(_, &c)| c)
        .map(|(&p, _)| {
            sys.disks()
                .iter()
                .filter(|d| d.contains(p))
                .filter(|d| !CellProbe::new(d.rotate_unchecked(1, p), quantum).hits(&keys))
                .count()
        })
        .sum()
}
