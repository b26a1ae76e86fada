//! Binary finite fields `F_{2^e}` for `e <= 4`.
//!
//! Elements are bit vectors over `F_2` reduced modulo a fixed irreducible
//! polynomial. The field order is a const parameter so that elements of
//! different fields never mix.

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub};

/// Minimal commutative ring interface shared by the polynomial types.
pub trait Ring:
    Copy
    + Clone
    + fmt::Debug
    + PartialEq
    + Eq
    + Hash
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }
    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

/// A finite field of characteristic 2.
pub trait FiniteField: Ring + Ord + fmt::Display + Send + Sync + 'static {
    /// Degree `e` of the field over `F_2`.
    const EXTENSION: u32;
    /// Number of elements `q = 2^e`.
    const ORDER: u64 = 1 << Self::EXTENSION;

    fn inv(self) -> Option<Self>;

    /// Inverse Frobenius: the unique square root, `c^(q/2)`.
    fn frobenius_root(self) -> Self;

    fn square(self) -> Self {
        self * self
    }

    /// All `q` elements, zero first.
    fn elements() -> Vec<Self>;

    fn to_bits(self) -> u8;

    fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

/// `F_{2^E}` with the reduction polynomials x, x²+x+1, x³+x+1, x⁴+x+1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Gf2m<const E: u32>(u8);

pub type F2 = Gf2m<1>;
pub type F4 = Gf2m<2>;
pub type F8 = Gf2m<3>;
pub type F16 = Gf2m<4>;

const fn modulus(e: u32) -> u16 {
    match e {
        1 => 0b10,
        2 => 0b111,
        3 => 0b1011,
        4 => 0b10011,
        _ => panic!("unsupported extension degree"),
    }
}

impl<const E: u32> Gf2m<E> {
    const MASK: u8 = ((1u16 << E) - 1) as u8;

    /// Builds an element from its bit representation (bits above `E` are rejected).
    pub fn new(bits: u8) -> Option<Self> {
        (bits & !Self::MASK == 0).then_some(Gf2m(bits))
    }

    /// Generator of the multiplicative group's underlying polynomial basis (`x mod m`).
    pub fn primitive_root() -> Self {
        if E == 1 {
            Gf2m(1)
        } else {
            Gf2m(0b10)
        }
    }

    fn mul_raw(a: u8, b: u8) -> u8 {
        if E == 1 {
            return a & b;
        }
        let m = modulus(E);
        let mut acc: u16 = 0;
        let mut a = a as u16;
        let mut b = b;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= a;
            }
            a <<= 1;
            if a & (1 << E) != 0 {
                a ^= m;
            }
            b >>= 1;
        }
        acc as u8
    }
}

impl<const E: u32> fmt::Debug for Gf2m<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if E == 1 {
            write!(f, "{}", self.0)
        } else {
            write!(f, "g{:0width$b}", self.0, width = E as usize)
        }
    }
}

impl<const E: u32> fmt::Display for Gf2m<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

// addition in characteristic 2 is XOR of the bit vectors
#[allow(clippy::suspicious_arithmetic_impl)]
impl<const E: u32> Add for Gf2m<E> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Gf2m(self.0 ^ rhs.0)
    }
}

#[allow(clippy::suspicious_op_assign_impl)]
impl<const E: u32> AddAssign for Gf2m<E> {
    fn add_assign(&mut self, rhs: Self) {
        self.0 ^= rhs.0;
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl<const E: u32> Sub for Gf2m<E> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Gf2m(self.0 ^ rhs.0)
    }
}

impl<const E: u32> Neg for Gf2m<E> {
    type Output = Self;
    fn neg(self) -> Self {
        self
    }
}

impl<const E: u32> Mul for Gf2m<E> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Gf2m(Self::mul_raw(self.0, rhs.0))
    }
}

impl<const E: u32> MulAssign for Gf2m<E> {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl<const E: u32> Ring for Gf2m<E> {
    fn zero() -> Self {
        Gf2m(0)
    }
    fn one() -> Self {
        Gf2m(1)
    }
    fn from_i64(n: i64) -> Self {
        Gf2m((n.rem_euclid(2)) as u8)
    }
}

impl<const E: u32> FiniteField for Gf2m<E> {
    const EXTENSION: u32 = E;

    fn inv(self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            // a^(q-2) in the multiplicative group of order q-1
            Some(self.pow(Self::ORDER - 2))
        }
    }

    fn frobenius_root(self) -> Self {
        self.pow(Self::ORDER / 2)
    }

    fn elements() -> Vec<Self> {
        (0..Self::ORDER as u16).map(|b| Gf2m(b as u8)).collect()
    }

    fn to_bits(self) -> u8 {
        self.0
    }
}

impl Ring for i64 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn from_i64(n: i64) -> Self {
        n
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field_axioms<F: FiniteField>() {
        let els = F::elements();
        assert_eq!(els.len() as u64, F::ORDER);
        for &a in &els {
            assert_eq!(a + a, F::zero());
            assert_eq!(a.frobenius_root().square(), a);
            if !a.is_zero() {
                assert_eq!(a * a.inv().unwrap(), F::one());
            }
            for &b in &els {
                assert_eq!(a * b, b * a);
                assert_eq!((a + b).square(), a.square() + b.square());
                for &c in &els {
                    assert_eq!(a * (b + c), a * b + a * c);
                    assert_eq!((a * b) * c, a * (b * c));
                }
            }
        }
        // multiplicative group is cyclic of order q-1 when the modulus is primitive
        let g = Gf2m::<1>::primitive_root();
        assert_eq!(g, F2::one());
    }

    #[test]
    fn axioms_hold_for_all_supported_fields() {
        field_axioms::<F2>();
        field_axioms::<F4>();
        field_axioms::<F8>();
        field_axioms::<F16>();
    }

    #[test]
    fn f16_generator_has_full_order() {
        let g = F16::primitive_root();
        let mut seen = std::collections::HashSet::new();
        let mut x = F16::one();
        for _ in 0..15 {
            seen.insert(x);
            x *= g;
        }
        assert_eq!(x, F16::one());
        assert_eq!(seen.len(), 15);
    }

    #[test]
    fn cube_roots_of_unity_in_f16_are_f4() {
        let count = F16::elements()
            .into_iter()
            .filter(|c| c.pow(3) == F16::one())
            .count();
        assert_eq!(count, 3);
    }

    #[test]
    fn new_rejects_out_of_range_bits() {
        assert!(F4::new(0b100).is_none());
        assert_eq!(F4::new(0b11).unwrap().to_bits(), 3);
    }
}
