//! Sparse multivariate polynomials with a fixed number of variables.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

use crate::field::Ring;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MPoly<R, const N: usize> {
    terms: BTreeMap<[u32; N], R>,
}

impl<R: Ring, const N: usize> MPoly<R, N> {
    pub fn zero() -> Self {
        MPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: R) -> Self {
        Self::monomial(c, [0; N])
    }

    pub fn one() -> Self {
        Self::constant(R::one())
    }

    pub fn monomial(c: R, exps: [u32; N]) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// The `i`-th variable.
    pub fn var(i: usize) -> Self {
        let mut e = [0; N];
        e[i] = 1;
        Self::monomial(R::one(), e)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; N], &R)> {
        self.terms.iter()
    }

    fn add_term(&mut self, e: [u32; N], c: R) {
        let slot = self.terms.entry(e).or_insert_with(R::zero);
        *slot = *slot + c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn scale(&self, c: R) -> Self {
        let mut out = Self::zero();
        for (e, v) in &self.terms {
            out.add_term(*e, *v * c);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative in the `i`-th variable.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut d = *e;
            d[i] -= 1;
            out.add_term(d, *c * R::from_i64(e[i] as i64));
        }
        out
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Lowest total degree of a term; the multiplicity at the origin.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).min()
    }

    pub fn eval(&self, point: &[R; N]) -> R {
        let mut acc = R::zero();
        for (e, c) in &self.terms {
            let mut v = *c;
            for (x, k) in point.iter().zip(e) {
                for _ in 0..*k {
                    v = v * *x;
                }
            }
            acc = acc + v;
        }
        acc
    }

    /// Substitute a polynomial for every variable.
    pub fn substitute<const M: usize>(&self, images: &[MPoly<R, M>; N]) -> MPoly<R, M> {
        let mut out = MPoly::zero();
        for (e, c) in &self.terms {
            let mut term = MPoly::constant(*c);
            for (img, k) in images.iter().zip(e) {
                if *k > 0 {
                    term = &term * &img.pow(*k);
                }
            }
            out = out + term;
        }
        out
    }

    /// Whether the `i`-th variable divides every term.
    pub fn divisible_by_var(&self, i: usize) -> bool {
        self.terms.keys().all(|e| e[i] > 0)
    }

    /// Drop every term containing the `i`-th variable (reduction modulo it).
    pub fn modulo_var(&self, i: usize) -> Self {
        MPoly {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e[i] == 0)
                .map(|(e, c)| (*e, *c))
                .collect(),
        }
    }
}

impl<R: Ring, const N: usize> Add for MPoly<R, N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (e, c) in rhs.terms {
            self.add_term(e, c);
        }
        self
    }
}

impl<R: Ring, const N: usize> Sub for MPoly<R, N> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for (e, c) in rhs.terms {
            self.add_term(e, -c);
        }
        self
    }
}

impl<R: Ring, const N: usize> Mul for &MPoly<R, N> {
    type Output = MPoly<R, N>;
    fn mul(self, rhs: &MPoly<R, N>) -> MPoly<R, N> {
        let mut out = MPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let mut e = *ea;
                for (x, y) in e.iter_mut().zip(eb) {
                    *x += y;
                }
                out.add_term(e, *ca * *cb);
            }
        }
        out
    }
}

impl<R: Ring, const N: usize> Mul for MPoly<R, N> {
    type Output = MPoly<R, N>;
    fn mul(self, rhs: MPoly<R, N>) -> MPoly<R, N> {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::F4;

    type P = MPoly<i64, 2>;

    #[test]
    fn arithmetic() {
        let x = P::var(0);
        let y = P::var(1);
        let s = (x.clone() + y.clone()).pow(2);
        assert_eq!(s.eval(&[2, 3]), 25);
        assert_eq!(s.derivative(0).eval(&[2, 3]), 10);
        assert_eq!(s.total_degree(), Some(2));
        assert!((s.clone() - s).is_zero());
    }

    #[test]
    fn characteristic_two_squares() {
        let x = MPoly::<F4, 2>::var(0);
        let y = MPoly::<F4, 2>::var(1);
        let s = (x.clone() + y.clone()).pow(2);
        assert_eq!(s, x.pow(2) + y.pow(2));
        assert!(s.derivative(0).is_zero());
    }

    #[test]
    fn substitution() {
        let x = P::var(0);
        let y = P::var(1);
        let p = &x * &y + P::constant(1);
        let q = p.substitute(&[y.clone(), x.clone() + y.clone()]);
        assert_eq!(q.eval(&[1, 2]), 2 * 3 + 1);
        assert_eq!(q.order(), Some(0));
    }
}
