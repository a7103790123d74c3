use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{int, minpoly_check, QuadraticReal};

/// A critical radius known in closed form, with its minimal polynomial and
/// the numerical estimate it is compared against.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClosedForm {
    pub n: u32,
    /// `r² = a + b√d`.
    pub a: i64,
    pub b: i64,
    pub d: u32,
    /// `1/2` scaling applied to both `a` and `b` (used for the `φ` forms).
    pub halves: bool,
    pub minpoly: [i64; 5],
    pub numerical: f64,
}

impl ClosedForm {
    pub fn r_squared(&self) -> QuadraticReal {
        let den = if self.halves { 2 } else { 1 };
        QuadraticReal::new(
            int(self.a) / int(den),
            int(self.b) / int(den),
            self.d,
        )
        .expect("table fields are valid")
    }

    pub fn radius(&self) -> f64 {
        self.r_squared().to_f64().sqrt()
    }
}

/// `3 + φ = (7 + √5)/2`, `10 - 5√2`, `4 - φ = (7 - √5)/2`, `40 - 22√3`.
pub const CLOSED_FORMS: [ClosedForm; 4] = [
    ClosedForm {
        n: 5,
        a: 7,
        b: 1,
        d: 5,
        halves: true,
        minpoly: [1, 0, -7, 0, 11],
        numerical: 2.148961,
    },
    ClosedForm {
        n: 8,
        a: 10,
        b: -5,
        d: 2,
        halves: false,
        minpoly: [1, 0, -20, 0, 50],
        numerical: 1.711411,
    },
    ClosedForm {
        n: 10,
        a: 7,
        b: -1,
        d: 5,
        halves: true,
        minpoly: [1, 0, -7, 0, 11],
        numerical: 1.543357,
    },
    ClosedForm {
        n: 12,
        a: 40,
        b: -22,
        d: 3,
        halves: false,
        minpoly: [1, 0, -80, 0, 148],
        numerical: 1.376547,
    },
];

fn lookup(n: u32) -> Result<&'static ClosedForm> {
    CLOSED_FORMS
        .iter()
        .find(|c| c.n == n)
        .ok_or_else(|| Error::Unsupported(format!("no closed-form critical radius for n = {n}")))
}

/// `r²` of the closed-form critical radius of `GG_n`, `n ∈ {5, 8, 10, 12}`.
pub fn closed_form_radius(n: u32) -> Result<QuadraticReal> {
    Ok(lookup(n)?.r_squared())
}

/// The spiral-derived radii for `n ∈ {8, 12}`: `r²` and `r`. Fails with
/// `Internal` if `r²` does not satisfy its minimal polynomial.
pub fn spiral_radius(n: u32) -> Result<(QuadraticReal, f64)> {
    if !matches!(n, 8 | 12) {
        return Err(Error::Unsupported(format!(
            "spiral radius only for n in {{8, 12}}, got {n}"
        )));
    }
    let c = lookup(n)?;
    let r2 = c.r_squared();
    if !minpoly_check(&c.minpoly, &r2)? {
        return Err(Error::Internal(format!("{r2} is not a root of its minimal polynomial")));
    }
    let r = r2.to_f64().sqrt();
    Ok((r2, r))
}
