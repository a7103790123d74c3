use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{ToPrimitive, Zero};

use super::{int, QuadraticReal, Rational};
use crate::error::{Error, Result};
use crate::geometry::PlanePoint;

/// An element `c₀ + c₁ζ + c₂ζ² + c₃ζ³` of `Q(ζ₅)`, `ζ = e^{2πi/5}`.
///
/// Always stored reduced modulo `1 + x + x² + x³ + x⁴`, so equality is
/// coefficient-wise.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CyclotomicElement {
    c: [Rational; 4],
}

impl CyclotomicElement {
    pub fn new(c: [Rational; 4]) -> Self {
        Self { c }
    }

    pub fn from_ints(c: [i64; 4]) -> Self {
        Self {
            c: c.map(int),
        }
    }

    pub fn zero() -> Self {
        Self::from_ints([0; 4])
    }

    pub fn one() -> Self {
        Self::from_ints([1, 0, 0, 0])
    }

    pub fn from_rational(r: Rational) -> Self {
        let z = Rational::zero();
        Self {
            c: [r, z.clone(), z.clone(), z],
        }
    }

    /// `ζ^k` for any integer `k`.
    pub fn zeta_pow(k: i64) -> Self {
        let mut wide: [Rational; 5] = Default::default();
        wide[k.rem_euclid(5) as usize] = int(1);
        Self::reduce(wide)
    }

    pub fn zeta() -> Self {
        Self::zeta_pow(1)
    }

    /// Builds from an integer combination `Σ coeffs[k]·ζ^k` (any length).
    pub fn from_powers(coeffs: &[i64]) -> Self {
        let mut wide: [Rational; 5] = Default::default();
        for (k, &v) in coeffs.iter().enumerate() {
            wide[k % 5] += int(v);
        }
        Self::reduce(wide)
    }

    pub fn coeffs(&self) -> &[Rational; 4] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    /// Folds a combination of `1, ζ, …, ζ⁴` into the reduced basis using
    /// `ζ⁴ = -1 - ζ - ζ² - ζ³`.
    fn reduce(wide: [Rational; 5]) -> Self {
        let [c0, c1, c2, c3, c4] = wide;
        Self {
            c: [&c0 - &c4, &c1 - &c4, &c2 - &c4, &c3 - &c4],
        }
    }

    /// The Galois automorphism `ζ ↦ ζ^k` (`k` coprime to 5).
    pub fn galois(&self, k: i64) -> Self {
        let mut wide: [Rational; 5] = Default::default();
        for (j, cj) in self.c.iter().enumerate() {
            wide[(j as i64 * k).rem_euclid(5) as usize] += cj;
        }
        Self::reduce(wide)
    }

    /// Complex conjugation, `ζ ↦ ζ⁴`.
    pub fn conj(&self) -> Self {
        self.galois(4)
    }

    pub fn is_real(&self) -> bool {
        *self == self.conj()
    }

    /// The rational norm `∏ σ_k(x)` over `k = 1..4`.
    pub fn field_norm(&self) -> Result<Rational> {
        let prod = self * &self.galois(2) * &self.galois(3) * &self.galois(4);
        if prod.c[1..].iter().any(|v| !v.is_zero()) {
            return Err(Error::Internal(format!("norm of {self} is not rational")));
        }
        Ok(prod.c[0].clone())
    }

    /// Inverse via the product of the three nontrivial Galois conjugates.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::usage("inverse of zero in Q(zeta_5)"));
        }
        let co = &(&self.galois(2) * &self.galois(3)) * &self.galois(4);
        let n = self.field_norm()?;
        Ok(Self {
            c: co.c.map(|v| v / &n),
        })
    }

    /// Re-expresses a real element as `a + b√5` via `ζ + ζ⁴ = (-1 + √5)/2`.
    pub fn real_to_quadratic(&self) -> Result<QuadraticReal> {
        // Real elements are p + q(ζ + ζ⁴) = (p - q) - qζ² - qζ³.
        let [c0, c1, c2, c3] = &self.c;
        if !c1.is_zero() || c2 != c3 {
            return Err(Error::Internal(format!("{self} is not real")));
        }
        let q = -c2.clone();
        let p = c0 - c2;
        let half = super::rat(1, 2);
        QuadraticReal::new(p - &q * &half, q * half, 5)
    }

    /// `|x|² = x·conj(x)` as an element of `Q(√5)`.
    pub fn norm_to_quadratic(&self) -> Result<QuadraticReal> {
        (self * &self.conj()).real_to_quadratic()
    }

    /// `Re(x·conj(y))`, the dot product of `x` and `y` as plane vectors.
    pub fn dot(&self, other: &Self) -> Result<QuadraticReal> {
        let p = self * &other.conj();
        (&(&p + &p.conj()) * &Self::from_rational(super::rat(1, 2))).real_to_quadratic()
    }

    pub fn to_point(&self) -> PlanePoint {
        (0..4).fold(PlanePoint::ORIGIN, |acc, k| {
            let w = PlanePoint::polar(std::f64::consts::TAU * k as f64 / 5.0);
            acc + w * self.c[k].to_f64().unwrap_or(f64::NAN)
        })
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self {
            c: self.c.clone().map(|v| v * r),
        }
    }
}

impl fmt::Display for CyclotomicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [c0, c1, c2, c3] = &self.c;
        write!(f, "[{c0}, {c1}, {c2}, {c3}]")
    }
}

impl Add for &CyclotomicElement {
    type Output = CyclotomicElement;
    fn add(self, o: &CyclotomicElement) -> CyclotomicElement {
        CyclotomicElement {
            c: std::array::from_fn(|k| &self.c[k] + &o.c[k]),
        }
    }
}

impl Sub for &CyclotomicElement {
    type Output = CyclotomicElement;
    fn sub(self, o: &CyclotomicElement) -> CyclotomicElement {
        CyclotomicElement {
            c: std::array::from_fn(|k| &self.c[k] - &o.c[k]),
        }
    }
}

impl Neg for &CyclotomicElement {
    type Output = CyclotomicElement;
    fn neg(self) -> CyclotomicElement {
        CyclotomicElement {
            c: std::array::from_fn(|k| -self.c[k].clone()),
        }
    }
}

impl Mul for &CyclotomicElement {
    type Output = CyclotomicElement;
    fn mul(self, o: &CyclotomicElement) -> CyclotomicElement {
        // ζ⁵ = 1 folds degrees 5 and 6 back to 0 and 1.
        let mut wide: [Rational; 5] = Default::default();
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                wide[(i + j) % 5] += a * b;
            }
        }
        CyclotomicElement::reduce(wide)
    }
}

impl Mul for CyclotomicElement {
    type Output = CyclotomicElement;
    fn mul(self, o: CyclotomicElement) -> CyclotomicElement {
        &self * &o
    }
}

impl Mul<&CyclotomicElement> for CyclotomicElement {
    type Output = CyclotomicElement;
    fn mul(self, o: &CyclotomicElement) -> CyclotomicElement {
        &self * o
    }
}

impl Add for CyclotomicElement {
    type Output = CyclotomicElement;
    fn add(self, o: CyclotomicElement) -> CyclotomicElement {
        &self + &o
    }
}

impl Sub for CyclotomicElement {
    type Output = CyclotomicElement;
    fn sub(self, o: CyclotomicElement) -> CyclotomicElement {
        &self - &o
    }
}

impl Neg for CyclotomicElement {
    type Output = CyclotomicElement;
    fn neg(self) -> CyclotomicElement {
        -&self
    }
}
