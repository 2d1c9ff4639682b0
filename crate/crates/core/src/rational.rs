//! Rational reconstruction of floating-point values for display.

use std::fmt;

use serde::Serialize;

/// A fraction `numer/denom` with `denom > 0`, in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Fraction {
    pub numer: i64,
    pub denom: i64,
}

impl Fraction {
    pub fn value(self) -> f64 {
        self.numer as f64 / self.denom as f64
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom == 1 {
            write!(f, "{}", self.numer)
        } else {
            write!(f, "{}/{}", self.numer, self.denom)
        }
    }
}

/// Default largest denominator tried by [`reconstruct`].
pub const MAX_DENOMINATOR: i64 = 10_000;

/// Default agreement required by [`reconstruct`].
pub const MATCH_TOL: f64 = 1e-9;

/// First continued-fraction convergent of `x` with denominator at most
/// `max_denom` lying within `tol` of `x`.
pub fn reconstruct(x: f64, max_denom: i64, tol: f64) -> Option<Fraction> {
    if !x.is_finite() || x.abs() > 1e15 {
        return None;
    }
    // convergents h/k from the recurrences h_i = a_i h_{i-1} + h_{i-2}
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut rest = x;
    for _ in 0..64 {
        let a = rest.floor();
        let ai = a as i64;
        let h = ai.checked_mul(h1)?.checked_add(h0)?;
        let k = ai.checked_mul(k1)?.checked_add(k0)?;
        if k > max_denom {
            return None;
        }
        if (h as f64 / k as f64 - x).abs() <= tol {
            return Some(Fraction { numer: h, denom: k });
        }
        let frac = rest - a;
        if frac == 0.0 {
            return None;
        }
        rest = 1.0 / frac;
        (h0, h1, k0, k1) = (h1, h, k1, k);
    }
    None
}

/// [`reconstruct`] with the default denominator bound and tolerance.
pub fn approximate(x: f64) -> Option<Fraction> {
    reconstruct(x, MAX_DENOMINATOR, MATCH_TOL)
}
