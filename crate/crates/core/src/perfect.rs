//! Residue-field scalars in the perfect closure `F_q(t^(1/2^M))`.

use std::fmt;

use crate::field::FiniteField;
use crate::poly::{UPoly, URational};

/// An element of `F_q(s)` with `s = t^(1/2^depth)`.
///
/// Values are kept at minimal depth, so two equal elements always have the
/// same representation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PerfectedScalar<F> {
    depth: u32,
    value: URational<F>,
}

impl<F: FiniteField> PerfectedScalar<F> {
    pub fn new(depth: u32, value: URational<F>) -> Self {
        let mut r = PerfectedScalar { depth, value };
        r.canonicalize();
        r
    }

    /// Embed an element of `K = F_q(t)`.
    pub fn from_k(value: URational<F>) -> Self {
        PerfectedScalar { depth: 0, value }
    }

    pub fn zero() -> Self {
        Self::from_k(URational::zero())
    }

    pub fn one() -> Self {
        Self::from_k(URational::one())
    }

    /// `t^(num/2^depth)` with `num` possibly negative.
    pub fn t_power(num: i64, depth: u32) -> Self {
        let mono = UPoly::monomial(F::one(), num.unsigned_abs() as usize);
        let value = if num >= 0 {
            URational::from_poly(mono)
        } else {
            URational::new(UPoly::one(), mono).unwrap()
        };
        Self::new(depth, value)
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn value(&self) -> &URational<F> {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    fn canonicalize(&mut self) {
        while self.depth > 0 {
            match self.value.sqrt() {
                Some(root) => {
                    // f(s) = g(s)^2 = g'(s^2) with g' the coefficient-squared g
                    self.value = root.map_frobenius_coeffs();
                    self.depth -= 1;
                }
                None => break,
            }
        }
    }

    /// Re-express at depth `target >= self.depth()` without canonicalizing.
    fn lifted_value(&self, target: u32) -> URational<F> {
        self.value.inflate(1usize << (target - self.depth))
    }

    pub fn add(&self, other: &Self) -> Self {
        let d = self.depth.max(other.depth);
        Self::new(d, self.lifted_value(d).add(&other.lifted_value(d)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let d = self.depth.max(other.depth);
        Self::new(d, self.lifted_value(d).mul(&other.lifted_value(d)))
    }

    pub fn inv(&self) -> Option<Self> {
        Some(Self::new(self.depth, self.value.inv()?))
    }

    /// `self^(2^m)`.
    pub fn frobenius(&self, m: u32) -> Self {
        Self::new(self.depth, self.value.frobenius(m))
    }

    /// True when the element lies in `K = F_q(t)`.
    pub fn in_base_field(&self) -> bool {
        self.depth == 0
    }

    /// Whether the element lies in `F_q(t^(1/2^level))`.
    pub fn lies_in_level(&self, level: u32) -> bool {
        self.depth <= level
    }

    pub fn render(&self) -> String {
        if self.depth == 0 {
            self.value.render("t")
        } else {
            let var = format!("t^(1/{})", 1u64 << self.depth);
            self.value.render(&var)
        }
    }
}

impl<F: FiniteField> URational<F> {
    /// `g(s) -> g^(2)(s)`: squares every coefficient while keeping exponents.
    /// Together with `sqrt` this rewrites `g(s)^2` as a function of `s^2`.
    fn map_frobenius_coeffs(&self) -> Self {
        URational::new(
            self.num().map_coeffs(|c| c.square()),
            self.den().map_coeffs(|c| c.square()),
        )
        .unwrap()
    }
}

impl<F: FiniteField> fmt::Debug for PerfectedScalar<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// Degree `[K(r):K] = 2^mu` with `mu` minimal such that `r^(2^mu) ∈ K`.
pub fn perfected_degree_over_k<F: FiniteField>(r: &PerfectedScalar<F>) -> u64 {
    let mut m = 0u32;
    loop {
        let power = r.value.frobenius(m);
        // power is a function of s; it lies in K iff it is a function of s^(2^depth)
        let in_k = match power.exponent_two_adic() {
            None => true,
            Some(k) => k >= r.depth,
        };
        if in_k {
            return 1u64 << m;
        }
        m += 1;
    }
}

/// The unique `2^m`-th root of `r` in the perfect closure.
pub fn perfected_root<F: FiniteField>(r: &PerfectedScalar<F>, m: u32) -> PerfectedScalar<F> {
    // r = f(s), s = t^(1/2^M); r^(1/2^m) = f'(s') with s' = t^(1/2^(M+m)) and
    // f' obtained by taking 2^m-th roots of the coefficients.
    PerfectedScalar::new(r.depth + m, r.value.root_coeffs(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Ring, F2, F4};

    fn t<F: FiniteField>(k: usize) -> PerfectedScalar<F> {
        PerfectedScalar::from_k(URational::from_poly(UPoly::monomial(F::one(), k)))
    }

    #[test]
    fn degree_examples() {
        assert_eq!(
            perfected_degree_over_k(&PerfectedScalar::<F2>::t_power(1, 2)),
            4
        );
        assert_eq!(
            perfected_degree_over_k(&PerfectedScalar::<F2>::t_power(1, 1)),
            2
        );
        assert_eq!(perfected_degree_over_k(&t::<F2>(3)), 1);
    }

    #[test]
    fn root_examples() {
        assert_eq!(
            perfected_root(&t::<F2>(2), 3),
            PerfectedScalar::t_power(1, 2)
        );
        assert_eq!(
            perfected_root(&PerfectedScalar::<F2>::one(), 5),
            PerfectedScalar::one()
        );
        assert_eq!(
            perfected_root(&t::<F2>(1), 1),
            PerfectedScalar::t_power(1, 1)
        );
    }

    #[test]
    fn lift_preserves_equality() {
        let a = PerfectedScalar::<F2>::t_power(1, 1);
        let b = PerfectedScalar::<F2>::t_power(2, 2);
        assert_eq!(a, b);
        assert_eq!(a.mul(&a), t(1));
    }

    #[test]
    fn coefficient_roots_in_f4() {
        let g = F4::primitive_root();
        let r = PerfectedScalar::from_k(URational::constant(g));
        let root = perfected_root(&r, 1);
        assert!(root.in_base_field());
        assert_eq!(root.frobenius(1), r);
    }

    #[test]
    fn k_linearity_of_degree() {
        let r = PerfectedScalar::<F2>::t_power(1, 3).add(&PerfectedScalar::t_power(1, 1));
        let w = PerfectedScalar::from_k(
            URational::new(UPoly::var(), UPoly::from_coeffs(vec![F2::one(), F2::one()])).unwrap(),
        );
        assert_eq!(
            perfected_degree_over_k(&r.mul(&w)),
            perfected_degree_over_k(&r)
        );
        assert_eq!(perfected_degree_over_k(&r), 8);
    }
}
