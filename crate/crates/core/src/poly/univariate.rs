use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};

use crate::field::FiniteField;

/// Dense univariate polynomial over a binary finite field, low degree first.
///
/// The coefficient vector never has trailing zeros, so the zero polynomial
/// is the empty vector and equality is structural.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UPoly<F> {
    coeffs: Vec<F>,
}

impl<F: FiniteField> UPoly<F> {
    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c * s^k`.
    pub fn monomial(c: F, k: usize) -> Self {
        let mut coeffs = vec![F::zero(); k + 1];
        coeffs[k] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn var() -> Self {
        Self::monomial(F::one(), 1)
    }

    pub fn from_coeffs(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> F {
        self.coeffs.get(k).copied().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> F {
        self.coeffs.last().copied().unwrap_or_else(F::zero)
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn low_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn scale(&self, c: F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        UPoly {
            coeffs: self.coeffs.iter().map(|&a| a * c).collect(),
        }
    }

    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![F::zero(); k];
        coeffs.extend_from_slice(&self.coeffs);
        UPoly { coeffs }
    }

    pub fn monic(&self) -> Self {
        match self.leading().inv() {
            Some(inv) => self.scale(inv),
            None => Self::zero(),
        }
    }

    pub fn eval(&self, x: F) -> F {
        self.coeffs
            .iter()
            .rev()
            .fold(F::zero(), |acc, &c| acc * x + c)
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("polynomial division by zero");
        let lead_inv = divisor.leading().inv().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![F::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd] * lead_inv;
            if c.is_zero() {
                continue;
            }
            quot[k] = c;
            for (i, &d) in divisor.coeffs.iter().enumerate() {
                rem[k + i] = rem[k + i] - c * d;
            }
        }
        (Self::from_coeffs(quot), Self::from_coeffs(rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Exact quotient, or `None` when `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `self^(2^k)`: squares every coefficient `k` times and scales exponents.
    pub fn frobenius(&self, k: u32) -> Self {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let step = 1usize << k;
        let mut coeffs = vec![F::zero(); (self.coeffs.len() - 1) * step + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            let mut v = c;
            for _ in 0..k {
                v = v.square();
            }
            coeffs[i * step] = v;
        }
        UPoly { coeffs }
    }

    /// Square root when every exponent is even.
    pub fn sqrt(&self) -> Option<Self> {
        if self.coeffs.iter().skip(1).step_by(2).any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::from_coeffs(
            self.coeffs
                .iter()
                .step_by(2)
                .map(|c| c.frobenius_root())
                .collect(),
        ))
    }

    /// Largest `k` such that every exponent is divisible by `2^k` (`None` for constants).
    pub fn exponent_two_adic(&self) -> Option<u32> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(i, c)| *i > 0 && !c.is_zero())
            .map(|(i, _)| i.trailing_zeros())
            .min()
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * F::from_i64(i as i64))
                .collect(),
        )
    }

    /// Substitute `s -> s^k`.
    pub fn inflate(&self, k: usize) -> Self {
        if self.is_zero() || k == 1 {
            return self.clone();
        }
        let mut coeffs = vec![F::zero(); (self.coeffs.len() - 1) * k + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c;
        }
        UPoly { coeffs }
    }

    /// Map every coefficient through `f` (used for Frobenius twists of coefficients).
    pub fn map_coeffs(&self, f: impl Fn(F) -> F) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|&c| f(c)).collect())
    }

    /// Canonical order used for normalization: degree first, then coefficients from the top.
    pub fn cmp_canonical(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl<F: FiniteField> Add for &UPoly<F> {
    type Output = UPoly<F>;
    fn add(self, rhs: &UPoly<F>) -> UPoly<F> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UPoly::from_coeffs((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<F: FiniteField> Add for UPoly<F> {
    type Output = UPoly<F>;
    fn add(self, rhs: UPoly<F>) -> UPoly<F> {
        &self + &rhs
    }
}

impl<F: FiniteField> Mul for &UPoly<F> {
    type Output = UPoly<F>;
    fn mul(self, rhs: &UPoly<F>) -> UPoly<F> {
        if self.is_zero() || rhs.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j] + a * b;
            }
        }
        UPoly::from_coeffs(out)
    }
}

impl<F: FiniteField> Mul for UPoly<F> {
    type Output = UPoly<F>;
    fn mul(self, rhs: UPoly<F>) -> UPoly<F> {
        &self * &rhs
    }
}

impl<F: FiniteField> fmt::Debug for UPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("t"))
    }
}

impl<F: FiniteField> UPoly<F> {
    /// Human-readable rendering with the given variable name, highest degree first.
    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            let term = if c.is_one() {
                if mono.is_empty() {
                    "1".to_string()
                } else {
                    mono
                }
            } else if mono.is_empty() {
                format!("{c}")
            } else {
                format!("{c}*{mono}")
            };
            parts.push(term);
        }
        parts.join(" + ")
    }
}

/// Element of `F_q(s)` as a reduced fraction with monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct URational<F> {
    num: UPoly<F>,
    den: UPoly<F>,
}

impl<F: FiniteField> URational<F> {
    pub fn new(num: UPoly<F>, den: UPoly<F>) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            return Some(Self::zero());
        }
        let g = num.gcd(&den);
        let num = num.exact_div(&g).unwrap();
        let den = den.exact_div(&g).unwrap();
        let lead = den.leading().inv().unwrap();
        Some(URational {
            num: num.scale(lead),
            den: den.scale(lead),
        })
    }

    pub fn from_poly(p: UPoly<F>) -> Self {
        URational {
            num: p,
            den: UPoly::one(),
        }
    }

    pub fn zero() -> Self {
        Self::from_poly(UPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(UPoly::one())
    }

    pub fn constant(c: F) -> Self {
        Self::from_poly(UPoly::constant(c))
    }

    pub fn var() -> Self {
        Self::from_poly(UPoly::var())
    }

    pub fn num(&self) -> &UPoly<F> {
        &self.num
    }

    pub fn den(&self) -> &UPoly<F> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.den == other.den {
            return Self::new(&self.num + &other.num, self.den.clone()).unwrap();
        }
        Self::new(
            &(&self.num * &other.den) + &(&other.num * &self.den),
            &self.den * &other.den,
        )
        .unwrap()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(&self.num * &other.num, &self.den * &other.den).unwrap()
    }

    pub fn inv(&self) -> Option<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul(&i))
    }

    pub fn pow(&self, e: u64) -> Self {
        URational {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    /// `self^(2^k)`.
    pub fn frobenius(&self, k: u32) -> Self {
        URational {
            num: self.num.frobenius(k),
            den: self.den.frobenius(k),
        }
    }

    /// Square root in `F_q(s)` when it exists.
    pub fn sqrt(&self) -> Option<Self> {
        Some(URational {
            num: self.num.sqrt()?,
            den: self.den.sqrt()?,
        })
    }

    /// Largest `k` with `self ∈ F_q(s^(2^k))`, `None` for constants.
    pub fn exponent_two_adic(&self) -> Option<u32> {
        match (self.num.exponent_two_adic(), self.den.exponent_two_adic()) {
            (None, None) => None,
            (Some(a), None) | (None, Some(a)) => Some(a),
            (Some(a), Some(b)) => Some(a.min(b)),
        }
    }

    /// Substitute `s -> s^k`.
    pub fn inflate(&self, k: usize) -> Self {
        URational {
            num: self.num.inflate(k),
            den: self.den.inflate(k),
        }
    }

    /// Apply `c -> c^(1/2^k)` to every coefficient.
    pub fn root_coeffs(&self, k: u32) -> Self {
        let root = |mut c: F| {
            for _ in 0..k {
                c = c.frobenius_root();
            }
            c
        };
        URational {
            num: self.num.map_coeffs(root),
            den: self.den.map_coeffs(root),
        }
    }

    /// Exponent of `s` in a monomial `c * s^k` (`k` may be negative).
    pub fn as_monomial(&self) -> Option<(F, i64)> {
        let single = |p: &UPoly<F>| {
            let nz: Vec<_> = p
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .collect();
            (nz.len() == 1).then(|| (*nz[0].1, nz[0].0 as i64))
        };
        let (c, a) = single(&self.num)?;
        let (d, b) = single(&self.den)?;
        Some((c * d.inv().unwrap(), a - b))
    }

    pub fn render(&self, var: &str) -> String {
        if self.den.is_one() {
            self.num.render(var)
        } else {
            format!("({})/({})", self.num.render(var), self.den.render(var))
        }
    }
}

impl<F: FiniteField> fmt::Debug for URational<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("t"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Ring, F2, F4};

    fn p(bits: &[u8]) -> UPoly<F2> {
        UPoly::from_coeffs(bits.iter().map(|&b| F2::new(b).unwrap()).collect())
    }

    #[test]
    fn gcd_of_products() {
        // (1+s)(1+s+s^2) and (1+s)s
        let a = &p(&[1, 1]) * &p(&[1, 1, 1]);
        let b = &p(&[1, 1]) * &p(&[0, 1]);
        assert_eq!(a.gcd(&b), p(&[1, 1]));
        assert_eq!(a.gcd(&UPoly::zero()), a.monic());
    }

    #[test]
    fn frobenius_matches_repeated_squaring() {
        let a = p(&[1, 0, 1, 1]);
        assert_eq!(a.frobenius(2), a.pow(4));
        assert_eq!(a.frobenius(2).sqrt().unwrap(), a.frobenius(1));
        assert!(a.sqrt().is_none());
    }

    #[test]
    fn rational_is_reduced_and_monic() {
        let g = F4::primitive_root();
        let num = UPoly::from_coeffs(vec![g, g]); // g(1+s)
        let den = UPoly::from_coeffs(vec![F4::zero(), g, g]); // g s (1+s)
        let r = URational::new(num, den).unwrap();
        assert_eq!(r.num(), &UPoly::constant(F4::one()));
        assert_eq!(r.den(), &UPoly::var());
        assert_eq!(r.as_monomial(), Some((F4::one(), -1)));
    }

    #[test]
    fn derivative_kills_even_powers() {
        assert_eq!(p(&[1, 1, 1, 1]).derivative(), p(&[1, 0, 1]));
    }
}
