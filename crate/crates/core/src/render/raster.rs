use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{DiskSystem, PlanePoint};

/// An axis-aligned window onto the plane, `y` pointing up.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Viewport {
    pub center: PlanePoint,
    /// Width in plane units; the height follows from the pixel aspect.
    pub width: f64,
    pub pixels_w: usize,
    pub pixels_h: usize,
}

impl Viewport {
    pub fn new(center: PlanePoint, width: f64, pixels_w: usize, pixels_h: usize) -> Result<Self> {
        if pixels_w == 0 || pixels_h == 0 {
            return Err(Error::usage(format!(
                "viewport needs at least one pixel, got {pixels_w}x{pixels_h}"
            )));
        }
        if !(width > 0.0 && width.is_finite()) || !center.is_finite() {
            return Err(Error::usage(format!("viewport width must be positive, got {width}")));
        }
        Ok(Self {
            center,
            width,
            pixels_w,
            pixels_h,
        })
    }

    /// Centered on the origin, `2·(max radius + 1)` wide.
    pub fn default_for(sys: &DiskSystem, pixels_w: usize, pixels_h: usize) -> Result<Self> {
        Self::new(
            PlanePoint::ORIGIN,
            2.0 * (sys.max_radius() + 1.0),
            pixels_w,
            pixels_h,
        )
    }

    pub fn pixel_size(&self) -> f64 {
        self.width / self.pixels_w as f64
    }

    pub fn height(&self) -> f64 {
        self.width * self.pixels_h as f64 / self.pixels_w as f64
    }

    /// Continuous pixel coordinates: column from the left edge, row from the top.
    pub fn to_pixel_space(&self, p: PlanePoint) -> (f64, f64) {
        let s = self.pixel_size();
        let left = self.center.x - self.width / 2.0;
        let top = self.center.y + self.height() / 2.0;
        ((p.x - left) / s, (top - p.y) / s)
    }

    /// The pixel containing `p`, if it is in view.
    pub fn pixel_of(&self, p: PlanePoint) -> Option<(usize, usize)> {
        let (u, v) = self.to_pixel_space(p);
        if u >= 0.0 && v >= 0.0 && u < self.pixels_w as f64 && v < self.pixels_h as f64 {
            Some((u as usize, v as usize))
        } else {
            None
        }
    }

    pub fn pixel_center(&self, col: usize, row: usize) -> PlanePoint {
        let s = self.pixel_size();
        let left = self.center.x - self.width / 2.0;
        let top = self.center.y + self.height() / 2.0;
        PlanePoint::new(left + (col as f64 + 0.5) * s, top - (row as f64 + 0.5) * s)
    }
}

/// An 8-bit RGB image, rows top to bottom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RasterImage {
    pub width: usize,
    pub height: usize,
    pub rgb: Vec<u8>,
}

impl RasterImage {
    pub fn filled(width: usize, height: usize, color: [u8; 3]) -> Self {
        Self {
            width,
            height,
            rgb: color.repeat(width * height),
        }
    }

    pub fn pixel(&self, col: usize, row: usize) -> [u8; 3] {
        let i = 3 * (row * self.width + col);
        [self.rgb[i], self.rgb[i + 1], self.rgb[i + 2]]
    }

    pub fn set(&mut self, col: usize, row: usize, color: [u8; 3]) {
        let i = 3 * (row * self.width + col);
        self.rgb[i..i + 3].copy_from_slice(&color);
    }

    pub fn count_not(&self, color: [u8; 3]) -> usize {
        self.rgb.chunks_exact(3).filter(|c| *c != color).count()
    }

    pub fn to_ppm_bytes(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.rgb);
        out
    }

    pub fn from_ppm_bytes(bytes: &[u8]) -> Result<Self> {
        let bad = |m: &str| Error::usage(format!("malformed PPM: {m}"));
        let mut fields = Vec::new();
        let mut pos = 0;
        while fields.len() < 4 {
            while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if pos < bytes.len() && bytes[pos] == b'#' {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
                continue;
            }
            let start = pos;
            while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if start == pos {
                return Err(bad("truncated header"));
            }
            fields.push(std::str::from_utf8(&bytes[start..pos]).map_err(|_| bad("header"))?);
        }
        // Exactly one whitespace byte separates the header from the raster.
        pos += 1;
        if fields[0] != "P6" || fields[3] != "255" {
            return Err(bad("only P6 with maxval 255 is supported"));
        }
        let width: usize = fields[1].parse().map_err(|_| bad("width"))?;
        let height: usize = fields[2].parse().map_err(|_| bad("height"))?;
        let rgb = bytes.get(pos..).unwrap_or_default();
        if rgb.len() != 3 * width * height {
            return Err(bad("raster length does not match dimensions"));
        }
        Ok(Self {
            width,
            height,
            rgb: rgb.to_vec(),
        })
    }
}

pub fn write_ppm(img: &RasterImage, path: &Path) -> Result<()> {
    let mut f = fs::File::create(path)?;
    f.write_all(&img.to_ppm_bytes())?;
    Ok(())
}

pub fn read_ppm(path: &Path) -> Result<RasterImage> {
    RasterImage::from_ppm_bytes(&fs::read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ppm_bytes() {
        let img = RasterImage::filled(1, 1, [255, 255, 255]);
        assert_eq!(img.to_ppm_bytes(), b"P6\n1 1\n255\n\xff\xff\xff");
        let img = RasterImage::filled(3, 2, [1, 2, 3]);
        let bytes = img.to_ppm_bytes();
        assert!(bytes.starts_with(b"P6\n3 2\n255\n"));
        assert_eq!(bytes.len(), 11 + 18);
    }

    #[test]
    fn ppm_round_trip() {
        let mut img = RasterImage::filled(4, 3, [9, 9, 9]);
        img.set(3, 2, [1, 2, 3]);
        img.set(0, 0, [10, 32, 255]);
        let dir = std::env::temp_dir().join(format!("ppm-rt-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("img.ppm");
        write_ppm(&img, &path).unwrap();
        assert_eq!(read_ppm(&path).unwrap(), img);
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn viewport_mapping() {
        let v = Viewport::new(PlanePoint::ORIGIN, 4.0, 4, 2).unwrap();
        assert_eq!(v.height(), 2.0);
        assert_eq!(v.pixel_of(PlanePoint::new(-1.9, 0.9)), Some((0, 0)));
        assert_eq!(v.pixel_of(PlanePoint::new(1.9, -0.9)), Some((3, 1)));
        assert_eq!(v.pixel_of(PlanePoint::new(2.1, 0.0)), None);
        let c = v.pixel_center(1, 0);
        assert_eq!(v.pixel_of(c), Some((1, 0)));
        assert!(Viewport::new(PlanePoint::ORIGIN, 0.0, 4, 4).is_err());
        assert!(Viewport::new(PlanePoint::ORIGIN, 1.0, 0, 4).is_err());
    }
}
