use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::palette::{density_color, order_color, BACKGROUND, INK};
use super::raster::{RasterImage, Viewport};
use crate::error::{Error, Result};
use crate::geometry::{DiskSystem, PlanePoint, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SingleColoring {
    /// Visit counts of the iterates of each seed.
    Density,
    /// Each seed's pixel colored by the period of the seed under the word.
    OrbitOrder,
}

#[derive(Clone, Debug)]
pub struct SingleRender {
    pub image: RasterImage,
    /// Visits per pixel (density mode), row-major.
    pub counts: Vec<u32>,
    /// Period of each seed, `None` if it did not return within the budget
    /// (orbit-order mode).
    pub periods: Vec<Option<u64>>,
}

/// Iterates the single map `word` from each seed.
///
/// Density mode defaults to the upper intersection point as seed; orbit-order
/// mode defaults to every pixel center.
pub fn render_single_generator(
    sys: &DiskSystem,
    word: &Word,
    iterations: u64,
    seeds: Option<&[PlanePoint]>,
    viewport: &Viewport,
    coloring: SingleColoring,
    quantum: f64,
) -> Result<SingleRender> {
    if iterations < 1 {
        return Err(Error::usage("iterations must be at least 1"));
    }
    if !(quantum > 0.0) {
        return Err(Error::usage(format!("quantum must be positive, got {quantum}")));
    }
    word.check(sys)?;
    let (w, h) = (viewport.pixels_w, viewport.pixels_h);
    let mut image = RasterImage::filled(w, h, BACKGROUND);
    match coloring {
        SingleColoring::Density => {
            let seeds = match seeds {
                Some(s) => s.to_vec(),
                None => sys.intersection_points().into_iter().take(1).collect(),
            };
            let per_seed: Vec<Vec<u32>> = seeds
                .par_iter()
                .map(|&seed| {
                    let mut counts = vec![0u32; w * h];
                    let mut p = seed;
                    for _ in 0..iterations {
                        p = sys.apply_word_unchecked(word, p);
                        if let Some((c, r)) = viewport.pixel_of(p) {
                            counts[r * w + c] = counts[r * w + c].saturating_add(1);
                        }
                    }
                    counts
                })
                .collect();
            let mut counts = vec![0u32; w * h];
            for c in per_seed {
                for (acc, v) in counts.iter_mut().zip(c) {
                    *acc = acc.saturating_add(v);
                }
            }
            for (i, &c) in counts.iter().enumerate() {
                if c > 0 {
                    image.set(i % w, i / w, density_color(c));
                }
            }
            Ok(SingleRender {
                image,
                counts,
                periods: Vec::new(),
            })
        }
        SingleColoring::OrbitOrder => {
            let seeds: Vec<PlanePoint> = match seeds {
                Some(s) => s.to_vec(),
                None => (0..w * h)
                    .map(|i| viewport.pixel_center(i % w, i / w))
                    .collect(),
            };
            let periods: Vec<Option<u64>> = seeds
                .par_iter()
                .map(|&seed| {
                    let mut p = seed;
                    for k in 1..=iterations {
                        p = sys.apply_word_unchecked(word, p);
                        if p.dist(seed) <= quantum {
                            return Some(k);
                        }
                    }
                    None
                })
                .collect();
            let mut distinct: Vec<u64> = periods.iter().flatten().copied().filter(|&k| k > 1).collect();
            distinct.sort_unstable();
            distinct.dedup();
            for (seed, period) in seeds.iter().zip(&periods) {
                let Some((c, r)) = viewport.pixel_of(*seed) else {
                    continue;
                };
                let color = match period {
                    None => INK,
                    Some(1) => BACKGROUND,
                    Some(k) => order_color(distinct.binary_search(k).unwrap_or(0)),
                };
                image.set(c, r, color);
            }
            Ok(SingleRender {
                image,
                counts: Vec::new(),
                periods,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_word_puts_all_mass_on_the_seed() {
        let sys = DiskSystem::symmetric(5, 1.5).unwrap();
        let vp = Viewport::default_for(&sys, 64, 64).unwrap();
        let seed = PlanePoint::new(0.1, 0.2);
        let r = render_single_generator(&sys, &Word::empty(), 1000, Some(&[seed]), &vp, SingleColoring::Density, 1e-9)
            .unwrap();
        let (c, row) = vp.pixel_of(seed).unwrap();
        assert_eq!(r.counts[row * 64 + c], 1000);
        assert_eq!(r.counts.iter().sum::<u32>(), 1000);
    }

    #[test]
    fn periods_of_a_single_rotation() {
        let sys = DiskSystem::symmetric(5, 1.5).unwrap();
        let vp = Viewport::default_for(&sys, 32, 32).unwrap();
        let a: Word = "a".parse().unwrap();
        let seeds = [PlanePoint::new(-1.5, 0.5), PlanePoint::new(2.4, 0.0)];
        let r = render_single_generator(&sys, &a, 20, Some(&seeds), &vp, SingleColoring::OrbitOrder, 1e-9)
            .unwrap();
        assert_eq!(r.periods, vec![Some(5), Some(1)]);
        assert!(render_single_generator(&sys, &a, 0, None, &vp, SingleColoring::Density, 1e-9).is_err());
    }
}
