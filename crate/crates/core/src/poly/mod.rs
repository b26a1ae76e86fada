//! Exact polynomial and rational-function arithmetic over `F_q`, `q = 2^e`.

mod bivariate;
mod univariate;

pub use bivariate::{BPoly, BivarRational};
pub use univariate::{UPoly, URational};

use crate::error::FieldError;
use crate::field::FiniteField;

/// Returns `g` with `g^p = f` when it exists in `K(x)`.
///
/// Only `p = 2` (the characteristic) is supported. Because `F_q` is
/// perfect, `f` is a square exactly when every `t`- and `x`-exponent of its
/// canonical numerator and denominator is even.
pub fn is_pth_power<F: FiniteField>(
    f: &BivarRational<F>,
    p: u64,
) -> Result<Option<BivarRational<F>>, FieldError> {
    if p != 2 {
        return Err(FieldError::UnsupportedPrime(p));
    }
    Ok(f.sqrt())
}
