use std::f64::consts::TAU;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{DiskSpec, DiskSystem, PlanePoint, Word};

/// Disk radius for the kinematic demos; large enough that the test points
/// never leave a disk.
const DEMO_RADIUS: f64 = 8.0;

const CONSISTENCY_TOL: f64 = 1e-9;

#[derive(Clone, Debug, Serialize)]
pub struct LcmRotation {
    pub word: Word,
    pub alpha: u32,
    pub center: PlanePoint,
    /// Signed angle in radians (counterclockwise positive).
    pub angle: f64,
    /// Largest deviation of the sample images from the fitted rotation.
    pub max_residual: f64,
}

/// Applies `w` generator by generator, failing if a point is outside the
/// disk it is about to be rotated by.
fn apply_inside(sys: &DiskSystem, w: &Word, p: PlanePoint) -> Result<PlanePoint> {
    let mut q = p;
    for &(i, e) in &w.factors {
        let disk = sys.disk(i)?;
        if !disk.contains(q) {
            return Err(Error::Construction(format!(
                "point {q} outside disk {i} while applying {w}"
            )));
        }
        q = disk.apply(e, q);
    }
    Ok(q)
}

/// Finds the least `α ≥ 1` with `(a⁻¹b)^α` a net rotation by `±2π/lcm(n1, n2)`
/// and fits its center from the image of the origin.
pub fn lcm_rotation_word(n1: u32, n2: u32) -> Result<LcmRotation> {
    if n1 < 2 || n2 < 2 {
        return Err(Error::usage(format!("orders must be at least 2, got ({n1}, {n2})")));
    }
    if n1 == n2 {
        return Err(Error::usage(format!(
            "lcm rotation needs distinct orders, got ({n1}, {n2})"
        )));
    }
    let l = i64::from(n1.lcm(&n2));
    // a⁻¹ turns by +1/n1 and b by -1/n2 of a full turn; count in units of 1/l.
    let step = (l / i64::from(n1) - l / i64::from(n2)).rem_euclid(l);
    let (alpha, units) = (1..=l)
        .map(|alpha| (alpha, (alpha * step).rem_euclid(l)))
        .find(|&(_, u)| u == 1 || u == l - 1)
        .ok_or_else(|| {
            Error::Unsupported(format!(
                "no power of a^-1 b rotates by 2pi/{l} for orders ({n1}, {n2})"
            ))
        })?;
    let angle = if units == 1 { TAU / l as f64 } else { -TAU / l as f64 };

    let sys = DiskSystem::two_disk(n1, n2, DEMO_RADIUS, DEMO_RADIUS)?;
    let word = Word::new(vec![(0, -1), (1, 1)]).pow(alpha as usize);
    let turn = PlanePoint::polar(angle);
    // f(z) = c + (z - c)·t  ⇒  f(0) = c·(1 - t).
    let f0 = apply_inside(&sys, &word, PlanePoint::ORIGIN)?;
    let one_minus_t = PlanePoint::new(1.0, 0.0) - turn;
    let denom = one_minus_t.norm_sqr();
    let center = f0.cmul(PlanePoint::new(one_minus_t.x, -one_minus_t.y)) * (1.0 / denom);

    let mut max_residual: f64 = 0.0;
    for p in [
        PlanePoint::ORIGIN,
        PlanePoint::new(0.25, 0.0),
        PlanePoint::new(0.0, 0.25),
    ] {
        let img = apply_inside(&sys, &word, p)?;
        let expected = center + (p - center).cmul(turn);
        max_residual = max_residual.max(img.dist(expected));
    }
    if max_residual > CONSISTENCY_TOL {
        return Err(Error::Construction(format!(
            "(a^-1 b)^{alpha} is not a rotation by {angle} (residual {max_residual:e})"
        )));
    }
    Ok(LcmRotation {
        word,
        alpha: alpha as u32,
        center,
        angle,
        max_residual,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ThreeDiskDemo {
    pub lengths: (f64, f64),
    pub ratio: f64,
    pub directions: (PlanePoint, PlanePoint),
    pub words: (Word, Word),
}

/// Half-turns about `0`, `1` and `√2` compose to translations by `2` and `2√2`.
pub fn three_disk_demo() -> Result<ThreeDiskDemo> {
    let sys = DiskSystem::new(vec![
        DiskSpec::new(PlanePoint::new(0.0, 0.0), DEMO_RADIUS, 2),
        DiskSpec::new(PlanePoint::new(1.0, 0.0), DEMO_RADIUS, 2),
        DiskSpec::new(PlanePoint::new(2f64.sqrt(), 0.0), DEMO_RADIUS, 2),
    ])?;
    let w1 = Word::new(vec![(0, 1), (1, 1)]);
    let w2 = Word::new(vec![(0, 1), (2, 1)]);
    let samples = [
        PlanePoint::ORIGIN,
        PlanePoint::new(0.5, 0.25),
        PlanePoint::new(-0.75, 1.0),
    ];
    let mut shifts = Vec::new();
    for w in [&w1, &w2] {
        let t = apply_inside(&sys, w, samples[0])? - samples[0];
        for &p in &samples {
            let img = apply_inside(&sys, w, p)?;
            if img.dist(p + t) > 1e-12 {
                return Err(Error::Construction(format!("{w} is not a translation at {p}")));
            }
            let back = apply_inside(&sys, &w.inverse(), img)?;
            if back.dist(p) > 1e-12 {
                return Err(Error::Construction(format!("{w} inverse does not undo it at {p}")));
            }
        }
        shifts.push(t);
    }
    let (t1, t2) = (shifts[0], shifts[1]);
    let (l1, l2) = (t1.norm(), t2.norm());
    Ok(ThreeDiskDemo {
        lengths: (l1, l2),
        ratio: l2 / l1,
        directions: (t1 * (1.0 / l1), t2 * (1.0 / l2)),
        words: (w1, w2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_five() {
        let rot = lcm_rotation_word(3, 5).unwrap();
        assert_eq!(rot.alpha, 7);
        assert!((rot.angle.abs() - TAU / 15.0).abs() < 1e-12);
        assert!(rot.max_residual < 1e-9);
        // Cross-check on a fourth point not used in the fit.
        let sys = DiskSystem::two_disk(3, 5, DEMO_RADIUS, DEMO_RADIUS).unwrap();
        let p = PlanePoint::new(-0.3, 0.4);
        let img = apply_inside(&sys, &rot.word, p).unwrap();
        let expected = rot.center + (p - rot.center).cmul(PlanePoint::polar(rot.angle));
        assert!(img.dist(expected) < 1e-9);
    }

    #[test]
    fn two_three_is_kinematic() {
        let rot = lcm_rotation_word(2, 3).unwrap();
        assert_eq!(rot.alpha, 1);
        assert!((rot.angle.abs() - TAU / 6.0).abs() < 1e-12);
    }

    #[test]
    fn equal_orders_rejected() {
        assert!(matches!(lcm_rotation_word(5, 5), Err(Error::Usage(_))));
    }

    #[test]
    fn three_disks() {
        let d = three_disk_demo().unwrap();
        assert!((d.lengths.0 - 2.0).abs() < 1e-12);
        assert!((d.lengths.1 - 2.0 * 2f64.sqrt()).abs() < 1e-12);
        assert!((d.ratio - 2f64.sqrt()).abs() < 1e-12);
        for dir in [d.directions.0, d.directions.1] {
            assert!(dir.dist(PlanePoint::new(1.0, 0.0)) < 1e-12);
        }
    }
}
