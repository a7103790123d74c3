//! Exact arithmetic for checking the algebraic constructions: rationals,
//! real quadratic fields `Q(√d)` for `d ∈ {2, 3, 5}`, and the cyclotomic
//! field `Q(ζ₅)`.

mod cyclotomic;
mod quadratic;

pub use cyclotomic::CyclotomicElement;
pub use quadratic::{minpoly_check, quad_sign, QuadraticReal, Sign};

use num_bigint::BigInt;

pub type Rational = num_rational::BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}
