use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{int, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    fn of(r: &Rational) -> Sign {
        if r.is_zero() {
            Sign::Zero
        } else if r.is_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }
}

/// `a + b√d` with rational `a`, `b` and `d ∈ {2, 3, 5}`.
///
/// Values with `b = 0` are plain rationals and combine with any field.
/// Combining two genuinely irrational values from different fields panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticReal {
    a: Rational,
    b: Rational,
    d: u32,
}

impl QuadraticReal {
    pub fn new(a: Rational, b: Rational, d: u32) -> Result<Self> {
        if !matches!(d, 2 | 3 | 5) {
            return Err(Error::Unsupported(format!(
                "quadratic field Q(sqrt {d}); only d in {{2, 3, 5}}"
            )));
        }
        Ok(Self { a, b, d })
    }

    pub fn rational(a: Rational) -> Self {
        Self {
            a,
            b: Rational::zero(),
            d: 5,
        }
    }

    pub fn from_int(v: i64) -> Self {
        Self::rational(int(v))
    }

    /// The golden ratio `(1 + √5)/2`.
    pub fn phi() -> Self {
        Self {
            a: super::rat(1, 2),
            b: super::rat(1, 2),
            d: 5,
        }
    }

    pub fn sqrt_d(d: u32) -> Result<Self> {
        Self::new(Rational::zero(), int(1), d)
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// `a - b√d`.
    pub fn conjugate(&self) -> Self {
        Self {
            a: self.a.clone(),
            b: -self.b.clone(),
            d: self.d,
        }
    }

    /// `(a + b√d)(a - b√d) = a² - d·b²`.
    pub fn field_norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * int(self.d as i64)
    }

    pub fn sign(&self) -> Sign {
        let sa = Sign::of(&self.a);
        let sb = Sign::of(&self.b);
        match (sa, sb) {
            (_, Sign::Zero) => sa,
            (Sign::Zero, _) => sb,
            _ if sa == sb => sa,
            _ => {
                let a2 = &self.a * &self.a;
                let b2d = &self.b * &self.b * int(self.d as i64);
                match a2.cmp(&b2d) {
                    Ordering::Greater => sa,
                    Ordering::Less => sb,
                    Ordering::Equal => Sign::Zero,
                }
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * (self.d as f64).sqrt()
    }

    pub fn recip(&self) -> Option<Self> {
        let n = self.field_norm();
        if n.is_zero() {
            return None;
        }
        Some(Self {
            a: &self.a / &n,
            b: -(&self.b / &n),
            d: self.d,
        })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::from_int(1);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    fn common_d(&self, other: &Self) -> u32 {
        if self.b.is_zero() {
            other.d
        } else if other.b.is_zero() || self.d == other.d {
            self.d
        } else {
            panic!(
                "mixing Q(sqrt {}) and Q(sqrt {}) values",
                self.d, other.d
            )
        }
    }
}

impl fmt::Display for QuadraticReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "({})·√{}", self.b, self.d)
        } else {
            write!(f, "{} + ({})·√{}", self.a, self.b, self.d)
        }
    }
}

impl Add for &QuadraticReal {
    type Output = QuadraticReal;
    fn add(self, o: &QuadraticReal) -> QuadraticReal {
        QuadraticReal {
            d: self.common_d(o),
            a: &self.a + &o.a,
            b: &self.b + &o.b,
        }
    }
}

impl Sub for &QuadraticReal {
    type Output = QuadraticReal;
    fn sub(self, o: &QuadraticReal) -> QuadraticReal {
        QuadraticReal {
            d: self.common_d(o),
            a: &self.a - &o.a,
            b: &self.b - &o.b,
        }
    }
}

impl Mul for &QuadraticReal {
    type Output = QuadraticReal;
    fn mul(self, o: &QuadraticReal) -> QuadraticReal {
        let d = self.common_d(o);
        QuadraticReal {
            a: &self.a * &o.a + &self.b * &o.b * int(d as i64),
            b: &self.a * &o.b + &self.b * &o.a,
            d,
        }
    }
}

impl Div for &QuadraticReal {
    type Output = QuadraticReal;
    fn div(self, o: &QuadraticReal) -> QuadraticReal {
        let inv = o.recip().expect("division by zero in Q(sqrt d)");
        self * &inv
    }
}

impl Neg for &QuadraticReal {
    type Output = QuadraticReal;
    fn neg(self) -> QuadraticReal {
        QuadraticReal {
            a: -self.a.clone(),
            b: -self.b.clone(),
            d: self.d,
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for QuadraticReal {
            type Output = QuadraticReal;
            fn $m(self, o: QuadraticReal) -> QuadraticReal {
                (&self).$m(&o)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

pub fn quad_sign(q: &QuadraticReal) -> Sign {
    q.sign()
}

/// Checks `P(r) = 0` exactly, where `coeffs` are the dense coefficients of
/// `P`, highest degree first, and `r_squared` is `r²`. Only even polynomials
/// are supported, since the radii enter through `r²`.
pub fn minpoly_check(coeffs: &[i64], r_squared: &QuadraticReal) -> Result<bool> {
    let degree = coeffs.len().checked_sub(1).ok_or_else(|| {
        Error::Unsupported("empty polynomial".into())
    })?;
    let mut acc = QuadraticReal::from_int(0);
    for (k, &c) in coeffs.iter().enumerate() {
        let power = degree - k;
        if c == 0 {
            continue;
        }
        if power % 2 == 1 {
            return Err(Error::Unsupported(format!(
                "odd-degree term x^{power} in minimal polynomial"
            )));
        }
        let term = &QuadraticReal::from_int(c) * &r_squared.pow((power / 2) as u32);
        acc = &acc + &term;
    }
    Ok(acc.is_zero())
}
