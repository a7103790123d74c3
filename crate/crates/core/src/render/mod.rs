//! Orbit, boundary-arrangement and single-generator images, written as PPM.

mod boundary;
mod orbit;
mod palette;
mod raster;
mod single;

pub use boundary::{render_boundary, BoundaryColoring, BoundaryRender};
pub use orbit::{generator_invariance_violations, render_orbit, OrbitColoring, OrbitRender};
pub use palette::{density_color, luminance, order_color, region_color, BACKGROUND, DENSITY_PALETTE};
pub use raster::{read_ppm, write_ppm, RasterImage, Viewport};
pub use single::{render_single_generator, SingleColoring, SingleRender};
