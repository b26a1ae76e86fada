//! Primes, valuations, residues and differentials of the rational function
//! field `K(x)`, `K = F_q(t)`.

use std::fmt;

use crate::error::CurveError;
use crate::field::FiniteField;
use crate::perfect::PerfectedScalar;
use crate::poly::{BPoly, BivarRational, UPoly, URational};

/// A prime of `K(x)|K` of one of the shapes the towers need.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum RationalPrime<F> {
    /// Pole of `x`.
    Infinity,
    /// Zero of `x + b`, `b ∈ K`.
    Linear(URational<F>),
    /// Zero of `x^(2^c) + a` with `a ∈ K \ K^2`.
    PurelyInseparable { c: u32, a: URational<F> },
}

impl<F: FiniteField> RationalPrime<F> {
    /// The `x`-adic prime.
    pub fn x_adic() -> Self {
        RationalPrime::Linear(URational::zero())
    }

    pub fn purely_inseparable(c: u32, a: URational<F>) -> Result<Self, CurveError> {
        // x^(2^c) + a is irreducible over K exactly when a is not a square
        if c == 0 || a.sqrt().is_some() {
            return Err(CurveError::ReduciblePrime { c });
        }
        Ok(RationalPrime::PurelyInseparable { c, a })
    }

    pub fn degree(&self) -> u64 {
        match self {
            RationalPrime::Infinity | RationalPrime::Linear(_) => 1,
            RationalPrime::PurelyInseparable { c, .. } => 1u64 << c,
        }
    }

    /// Primitive generator of the prime ideal in `F_q[t][x]` (finite primes only).
    pub fn polynomial(&self) -> Option<BPoly<F>> {
        match self {
            RationalPrime::Infinity => None,
            RationalPrime::Linear(b) => {
                Some(&BPoly::x().mul_t(b.den()) + &BPoly::from_t(b.num().clone()))
            }
            RationalPrime::PurelyInseparable { c, a } => {
                Some(&BPoly::x().pow(1u64 << c).mul_t(a.den()) + &BPoly::from_t(a.num().clone()))
            }
        }
    }
}

impl<F: FiniteField> fmt::Debug for RationalPrime<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RationalPrime::Infinity => write!(f, "infinity"),
            RationalPrime::Linear(b) if b.is_zero() => write!(f, "x"),
            RationalPrime::Linear(b) => write!(f, "x + {}", b.render("t")),
            RationalPrime::PurelyInseparable { c, a } => {
                write!(f, "x^{} + {}", 1u64 << c, a.render("t"))
            }
        }
    }
}

/// Multiplicity of `pi` in `p`, and the cofactor.
fn strip_factor<F: FiniteField>(p: &BPoly<F>, pi: &BPoly<F>) -> (i64, BPoly<F>) {
    let mut count = 0;
    let mut cur = p.clone();
    while let Some(q) = cur.exact_div(pi) {
        cur = q;
        count += 1;
    }
    (count, cur)
}

/// Order of vanishing of `f` at `q`.
pub fn valuation<F: FiniteField>(
    f: &BivarRational<F>,
    q: &RationalPrime<F>,
) -> Result<i64, CurveError> {
    if f.is_zero() {
        return Err(CurveError::ZeroFunction);
    }
    match q.polynomial() {
        None => {
            let dn = f.num().degree_x().unwrap() as i64;
            let dd = f.den().degree_x().unwrap() as i64;
            Ok(dd - dn)
        }
        Some(pi) => {
            let (a, _) = strip_factor(f.num(), &pi);
            let (b, _) = strip_factor(f.den(), &pi);
            Ok(a - b)
        }
    }
}

/// Value of `f` at `q` in the residue field `κ(q)`, as an element of the perfect closure.
pub fn residue<F: FiniteField>(
    f: &BivarRational<F>,
    q: &RationalPrime<F>,
) -> Result<PerfectedScalar<F>, CurveError> {
    if f.is_zero() {
        return Ok(PerfectedScalar::zero());
    }
    let v = valuation(f, q)?;
    if v < 0 {
        return Err(CurveError::NotRegular(v));
    }
    if v > 0 {
        return Ok(PerfectedScalar::zero());
    }
    match q {
        RationalPrime::Infinity => {
            let value = URational::new(f.num().lc_x(), f.den().lc_x()).unwrap();
            Ok(PerfectedScalar::from_k(value))
        }
        RationalPrime::Linear(b) => {
            let num = f.num().eval_x(b);
            let den = f.den().eval_x(b);
            Ok(PerfectedScalar::from_k(
                num.div(&den).expect("denominator is a unit at q"),
            ))
        }
        RationalPrime::PurelyInseparable { c, a } => {
            let (lambda, k) = a
                .as_monomial()
                .ok_or_else(|| CurveError::Representation(a.render("t")))?;
            // x = a^(1/2^c) = lambda^(1/2^c) s^k with s = t^(1/2^c)
            let mut lam = lambda;
            for _ in 0..*c {
                lam = lam.frobenius_root();
            }
            let scale = 1usize << c;
            let num = eval_at_root(f.num(), scale, lam, k);
            let den = eval_at_root(f.den(), scale, lam, k);
            Ok(PerfectedScalar::new(
                *c,
                num.div(&den).expect("denominator is a unit at q"),
            ))
        }
    }
}

/// `p(s^scale, lambda * s^k)` as a rational function of `s`; `k` may be negative.
fn eval_at_root<F: FiniteField>(p: &BPoly<F>, scale: usize, lambda: F, k: i64) -> URational<F> {
    if k >= 0 {
        return URational::from_poly(p.eval_monomial(scale, lambda, k as usize));
    }
    let d = p.degree_x().unwrap_or(0);
    let step = k.unsigned_abs() as usize;
    // multiply through by s^(step*d) to stay polynomial
    let mut coeffs: Vec<F> = Vec::new();
    let mut lam_pow = vec![F::one()];
    for _ in 0..d {
        lam_pow.push(*lam_pow.last().unwrap() * lambda);
    }
    for (j, i, c) in p.terms() {
        let e = j * scale + step * (d - i);
        if coeffs.len() <= e {
            coeffs.resize(e + 1, F::zero());
        }
        coeffs[e] = coeffs[e] + c * lam_pow[i];
    }
    URational::new(
        UPoly::from_coeffs(coeffs),
        UPoly::monomial(F::one(), step * d),
    )
    .unwrap()
}

/// The differential `coeff * dx`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatDifferential<F> {
    pub coeff: BivarRational<F>,
}

impl<F: FiniteField> fmt::Debug for RatDifferential<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) dx", self.coeff.render("x"))
    }
}

impl<F: FiniteField> RatDifferential<F> {
    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }
}

/// `df = (∂f/∂x) dx` with `t` constant.
pub fn differentiate<F: FiniteField>(f: &BivarRational<F>) -> RatDifferential<F> {
    RatDifferential {
        coeff: f.derivative_x(),
    }
}

/// Order of `dx` at infinity: the divisor of `dx` on the projective line is
/// `-2·∞`, matching its canonical degree `2g - 2 = -2`.
const DX_ORDER_AT_INFINITY: i64 = -2;

/// Order of a differential at a rational prime.
pub fn differential_order<F: FiniteField>(
    w: &RatDifferential<F>,
    q: &RationalPrime<F>,
) -> Result<i64, CurveError> {
    if q.degree() > 1 {
        return Err(CurveError::NonRationalPrime);
    }
    let v = valuation(&w.coeff, q)?;
    Ok(match q {
        RationalPrime::Infinity => v + DX_ORDER_AT_INFINITY,
        _ => v,
    })
}
