use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rustc_hash::FxHashSet;

use super::Report;
use crate::error::{Error, Result};
use crate::exact::{quad_sign, rat, CyclotomicElement as Cyc, QuadraticReal, Sign};
use crate::geometry::Word;

/// The points and words of the `GG₅(√(3 + φ))` segment construction.
#[derive(Clone, Debug)]
pub struct Theorem2Data {
    pub e: Cyc,
    pub f: Cyc,
    pub g: Cyc,
    pub e_prime: Cyc,
    pub f_prime: Cyc,
    pub g_prime: Cyc,
    pub r_squared: QuadraticReal,
    pub w1: Word,
    pub w2: Word,
    pub w3: Word,
}

impl Theorem2Data {
    pub fn new() -> Self {
        let e = Cyc::from_powers(&[0, 1, -1]);
        let f = Cyc::from_powers(&[1, -1, 1, -1]);
        let g = &(&f + &f) - &e;
        let word = |s: &str| s.parse::<Word>().expect("hard-coded word");
        Self {
            e_prime: -&e,
            f_prime: -&f,
            g_prime: -&g,
            e,
            f,
            g,
            r_squared: &QuadraticReal::from_int(3) + &QuadraticReal::phi(),
            w1: word("a^-2 b^-1 a^-1 b^-1"),
            w2: word("a b a b^2"),
            w3: word("a b a b^-1 a^-1 b^-1"),
        }
    }

    /// Position along the line through `E`, as `Re(p·conj(E))`.
    fn along(&self, p: &Cyc) -> Result<QuadraticReal> {
        p.dot(&self.e)
    }
}

impl Default for Theorem2Data {
    fn default() -> Self {
        Self::new()
    }
}

fn centers() -> [Cyc; 2] {
    [Cyc::from_ints([-1, 0, 0, 0]), Cyc::one()]
}

fn cmp_q(x: &QuadraticReal, y: &QuadraticReal) -> Ordering {
    match quad_sign(&(x - y)) {
        Sign::Negative => Ordering::Less,
        Sign::Zero => Ordering::Equal,
        Sign::Positive => Ordering::Greater,
    }
}

fn is_on_line_through_origin(p: &Cyc, dir: &Cyc) -> bool {
    (p * &dir.conj()).is_real()
}

fn in_lens(z: &Cyc, r_squared: &QuadraticReal) -> Result<bool> {
    for c in centers() {
        if quad_sign(&(r_squared - &(z - &c).norm_to_quadratic()?)) == Sign::Negative {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Applies `w` exactly, requiring the starting point and every intermediate
/// image to lie in both closed disks. Returns the image, or the number of
/// letters applied before the point was found outside the lens.
fn apply_exact(
    w: &Word,
    p: &Cyc,
    r_squared: &QuadraticReal,
) -> Result<std::result::Result<Cyc, usize>> {
    let cs = centers();
    let mut z = p.clone();
    for (step, &(disk, exp)) in w.factors.iter().enumerate() {
        if !in_lens(&z, r_squared)? {
            return Ok(Err(step));
        }
        let c = cs
            .get(disk)
            .ok_or_else(|| Error::usage(format!("disk index {disk} in a two-disk word")))?;
        z = c + &(&(&z - c) * &Cyc::zeta_pow(-exp));
    }
    if !in_lens(&z, r_squared)? {
        return Ok(Err(w.len()));
    }
    Ok(Ok(z))
}

/// Samples of segment `PQ`: endpoints, midpoint and `j/17` for `j = 1..=16`.
fn segment_samples(p: &Cyc, q: &Cyc) -> Vec<Cyc> {
    let d = q - p;
    let mut ts = vec![rat(0, 1), rat(1, 1), rat(1, 2)];
    ts.extend((1..=16).map(|j| rat(j, 17)));
    ts.iter().map(|t| p + &d.scale(t)).collect()
}

/// Runs every check of the construction at the true radius `r² = 3 + φ`.
pub fn theorem2_check() -> Result<Report> {
    theorem2_check_with_radius(&Theorem2Data::new().r_squared)
}

/// Runs the checks with the disk radius replaced by `√r_squared`.
pub fn theorem2_check_with_radius(r_squared: &QuadraticReal) -> Result<Report> {
    let d = Theorem2Data::new();
    let mut report = Report::default();

    let e_plus_1 = (&d.e + &Cyc::one()).norm_to_quadratic()?;
    report.push(
        "radius_squared",
        e_plus_1 == d.r_squared,
        format!("|E+1|^2 = {e_plus_1}, expected 3+phi = {}", d.r_squared),
    );

    let order = [&d.e_prime, &d.f_prime, &d.g_prime, &Cyc::zero(), &d.g, &d.f, &d.e];
    let collinear = order.iter().all(|p| is_on_line_through_origin(p, &d.e));
    let pos = order
        .iter()
        .map(|p| d.along(p))
        .collect::<Result<Vec<_>>>()?;
    let increasing = pos.windows(2).all(|w| cmp_q(&w[0], &w[1]) == Ordering::Less);
    report.push(
        "collinear_order",
        collinear && increasing,
        format!(
            "E', F', G', 0, G, F, E on one line through the origin: {collinear}; strictly ordered: {increasing}"
        ),
    );

    let two_f = &d.f + &d.f;
    let g_minus_e = &d.g - &d.e;
    let cases = [
        ("w1", &d.w1, &d.e_prime, &d.f_prime, &two_f, &d.g, &d.f),
        ("w2", &d.w2, &d.f_prime, &d.g_prime, &two_f, &d.f, &d.e),
        ("w3", &d.w3, &d.g_prime, &d.e, &g_minus_e, &d.e_prime, &d.g),
    ];
    for (name, w, p, q, shift, p_img, q_img) in cases {
        let mut endpoints_ok = true;
        let mut translation_ok = true;
        let mut first_exit: Option<String> = None;
        for (idx, s) in segment_samples(p, q).iter().enumerate() {
            match apply_exact(w, s, r_squared)? {
                Ok(img) => {
                    if img != s + shift {
                        translation_ok = false;
                    }
                    if (idx == 0 && img != *p_img) || (idx == 1 && img != *q_img) {
                        endpoints_ok = false;
                    }
                }
                Err(step) => {
                    translation_ok = false;
                    endpoints_ok = false;
                    first_exit.get_or_insert(format!("sample {idx} is outside the lens after {step} letters"));
                }
            }
        }
        report.push(
            format!("{name}_endpoints"),
            endpoints_ok,
            format!("{name} = {w}: endpoint images as stated: {endpoints_ok}"),
        );
        report.push(
            format!("{name}_translation"),
            translation_ok,
            format!("{name}: every sample translated by the same exact vector: {translation_ok}"),
        );
        report.push(
            format!("{name}_membership"),
            first_exit.is_none(),
            first_exit.unwrap_or_else(|| "every intermediate image stays in both disks".into()),
        );
    }

    let whole = (&d.e - &d.e_prime).norm_to_quadratic()?;
    let inner = (&d.f - &d.f_prime).norm_to_quadratic()?;
    let phi2 = QuadraticReal::phi().pow(2);
    report.push(
        "golden_ratio",
        whole == &phi2 * &inner,
        format!("|E-E'|^2 = {whole}, |F-F'|^2 = {inner}, ratio phi^2 = {phi2}"),
    );
    Ok(report)
}

/// Iterates the two-piece exchange on `E'E` from the origin: points of the
/// closed piece `E'G'` move by `2F`, the rest of the segment by `G - E`.
/// Returns the number of distinct points among the first `n` iterates.
pub fn interval_exchange_iterate(n: usize) -> Result<usize> {
    if n == 0 {
        return Err(Error::usage("iteration count must be at least 1"));
    }
    let d = Theorem2Data::new();
    let left = &d.f + &d.f;
    let right = &d.g - &d.e;
    if !is_on_line_through_origin(&left, &d.e) || !is_on_line_through_origin(&right, &d.e) {
        return Err(Error::Internal("exchange translations leave the line".into()));
    }
    // Starting at the origin, every iterate is an integer combination of the
    // two steps, so it stays in Z[ζ] on the line through E. Positions along
    // the line are kept as integers (a, b) standing for (a + b√5)/den.
    let along = [
        d.along(&d.e_prime)?,
        d.along(&d.e)?,
        d.along(&d.g_prime)?,
        d.along(&left)?,
        d.along(&right)?,
    ];
    let den = along.iter().fold(BigInt::one(), |acc, q| {
        let acc = acc.lcm(q.a().denom());
        acc.lcm(q.b().denom())
    });
    let scaled = |q: &QuadraticReal| -> Result<[i64; 2]> {
        Ok([small(&(q.a() * &den))?, small(&(q.b() * &den))?])
    };
    let [lo, hi, cut, step_left, step_right] = [
        scaled(&along[0])?,
        scaled(&along[1])?,
        scaled(&along[2])?,
        scaled(&along[3])?,
        scaled(&along[4])?,
    ];
    let coeffs = |c: &Cyc| -> Result<[i64; 4]> {
        let v = c.coeffs();
        Ok([small(&v[0])?, small(&v[1])?, small(&v[2])?, small(&v[3])?])
    };
    let (left_c, right_c) = (coeffs(&left)?, coeffs(&right)?);

    let mut p = [0i64; 4];
    let mut t = [0i64; 2];
    let mut seen = FxHashSet::default();
    for i in 0..n {
        if root5_sign(t[0] - lo[0], t[1] - lo[1]) == Ordering::Less
            || root5_sign(t[0] - hi[0], t[1] - hi[1]) == Ordering::Greater
        {
            return Err(Error::InvariantViolation(format!(
                "iterate {i} = {p:?} left segment E'E"
            )));
        }
        seen.insert(p);
        if i + 1 == n {
            break;
        }
        let (step_c, step_t) = if root5_sign(t[0] - cut[0], t[1] - cut[1]) != Ordering::Greater {
            (&left_c, &step_left)
        } else {
            (&right_c, &step_right)
        };
        for k in 0..4 {
            p[k] = p[k]
                .checked_add(step_c[k])
                .ok_or_else(|| Error::Internal("coefficient overflow".into()))?;
        }
        for k in 0..2 {
            t[k] = t[k]
                .checked_add(step_t[k])
                .ok_or_else(|| Error::Internal("coefficient overflow".into()))?;
        }
    }
    // Spot-check the integer walk against exact field arithmetic.
    let exact = Cyc::from_ints(p);
    if !is_on_line_through_origin(&exact, &d.e) {
        return Err(Error::Internal(format!("final iterate {exact} is off the line")));
    }
    let exact_t = d.along(&exact)?;
    if scaled(&exact_t)? != t {
        return Err(Error::Internal("position along the line drifted".into()));
    }
    Ok(seen.len())
}

fn small(r: &num_rational::BigRational) -> Result<i64> {
    if !r.is_integer() {
        return Err(Error::Internal(format!("{r} is not an integer")));
    }
    r.to_integer()
        .to_i64()
        .ok_or_else(|| Error::Internal(format!("{r} does not fit in 64 bits")))
}

/// Sign of `a + b√5`.
fn root5_sign(a: i64, b: i64) -> Ordering {
    let (a, b) = (i128::from(a), i128::from(b));
    match (a.signum(), b.signum()) {
        (x, y) if x >= 0 && y >= 0 => (x + y).cmp(&0),
        (x, y) if x <= 0 && y <= 0 => 0.cmp(&-(x + y)),
        // Opposite signs: compare a² with 5b².
        (1, _) => (a * a).cmp(&(5 * b * b)),
        _ => (5 * b * b).cmp(&(a * a)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_check_passes() {
        let r = theorem2_check().unwrap();
        assert!(r.all_passed(), "{r}");
        assert_eq!(r.checks.len(), 12);
    }

    #[test]
    fn shrunken_radius_fails_membership() {
        let d = Theorem2Data::new();
        let smaller = &d.r_squared - &QuadraticReal::rational(rat(1, 100));
        let r = theorem2_check_with_radius(&smaller).unwrap();
        assert!(!r.all_passed());
        assert!(["w1", "w2", "w3"]
            .iter()
            .any(|w| !r.get(&format!("{w}_membership")).unwrap().pass));
    }

    #[test]
    fn w1_maps_e_prime_to_g() {
        let d = Theorem2Data::new();
        let img = apply_exact(&d.w1, &d.e_prime, &d.r_squared).unwrap().unwrap();
        assert_eq!(img, d.g);
    }

    #[test]
    fn origin_first_image_is_g_minus_e() {
        // The origin lies strictly inside G'E, so the right-hand translation applies.
        let d = Theorem2Data::new();
        let img = apply_exact(&d.w3, &Cyc::zero(), &d.r_squared).unwrap().unwrap();
        assert_eq!(img, &d.g - &d.e);
        assert_ne!(img, &d.f + &d.f);
    }

    #[test]
    fn exchange_counts() {
        assert_eq!(interval_exchange_iterate(1).unwrap(), 1);
        assert_eq!(interval_exchange_iterate(1000).unwrap(), 1000);
        assert!(interval_exchange_iterate(0).is_err());
    }

    #[test]
    fn root5_sign_matches_floats() {
        for a in -40i64..=40 {
            for b in -20i64..=20 {
                let v = a as f64 + b as f64 * 5f64.sqrt();
                assert_eq!(root5_sign(a, b), v.partial_cmp(&0.0).unwrap(), "{a} + {b}√5");
            }
        }
        assert_eq!(root5_sign(i64::MAX / 4, -(i64::MAX / 9)), Ordering::Greater);
    }

    #[test]
    fn exchange_matches_float_shadow() {
        // The exchange is a rotation of a circle of length |E'E| by |2F|.
        let d = Theorem2Data::new();
        let len = (d.e - d.e_prime).to_point().norm();
        let shift = (d.f.clone() + d.f.clone()).to_point().norm();
        let mut x: f64 = len / 2.0;
        let mut xs = Vec::new();
        for _ in 0..50 {
            xs.push(x);
            x = (x + shift).rem_euclid(len);
        }
        let mut sorted = xs.clone();
        sorted.sort_by(f64::total_cmp);
        assert!(sorted.windows(2).all(|w| w[1] - w[0] > 1e-6));
    }
}
