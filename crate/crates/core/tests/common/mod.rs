//! Strategies and property bodies shared by the property and acceptance suites.
#![allow(dead_code)]

use frobdesc_core::curve::{differentiate, valuation};
use frobdesc_core::perfect::{perfected_degree_over_k, perfected_root};
use frobdesc_core::{
    BPoly, BivarRational, PerfectedScalar, RationalPrime, UPoly, URational, F16, F4,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, RngSeed, TestCaseError};

pub const CASES: u32 = 500;
pub const SEED: u64 = 0x6672_6f62;

pub fn config() -> Config {
    Config {
        cases: CASES,
        rng_algorithm: RngAlgorithm::ChaCha,
        rng_seed: RngSeed::Fixed(SEED),
        failure_persistence: None,
        ..Config::default()
    }
}

type K = F4;

fn arb_f4() -> impl Strategy<Value = K> {
    (0u8..4).prop_map(|b| K::new(b).unwrap())
}

pub fn arb_upoly(max_deg: usize) -> impl Strategy<Value = UPoly<K>> {
    prop::collection::vec(arb_f4(), 0..=max_deg + 1).prop_map(UPoly::from_coeffs)
}

pub fn arb_nonzero_upoly(max_deg: usize) -> impl Strategy<Value = UPoly<K>> {
    arb_upoly(max_deg).prop_filter("nonzero", |p| !p.is_zero())
}

pub fn arb_urational() -> impl Strategy<Value = URational<K>> {
    (arb_upoly(3), arb_nonzero_upoly(2)).prop_map(|(n, d)| URational::new(n, d).unwrap())
}

pub fn arb_bpoly() -> impl Strategy<Value = BPoly<K>> {
    prop::collection::vec(arb_upoly(2), 0..=4).prop_map(BPoly::from_coeffs)
}

pub fn arb_bivar() -> impl Strategy<Value = BivarRational<K>> {
    (
        arb_bpoly(),
        arb_bpoly().prop_filter("nonzero", |p| !p.is_zero()),
    )
        .prop_map(|(n, d)| BivarRational::new(n, d).unwrap())
}

pub fn arb_nonzero_bivar() -> impl Strategy<Value = BivarRational<K>> {
    arb_bivar().prop_filter("nonzero", |f| !f.is_zero())
}

/// Infinity, `x + b` for small `b`, and `x^2 + a`, `x^4 + a` with `a` a non-square.
pub fn arb_prime() -> impl Strategy<Value = RationalPrime<K>> {
    let t = || URational::<K>::var();
    prop_oneof![
        Just(RationalPrime::Infinity),
        arb_upoly(1).prop_map(|b| RationalPrime::Linear(URational::from_poly(b))),
        (1u32..=2, 0usize..3).prop_map(move |(c, k)| {
            let a = [t(), t().add(&URational::one()), t().pow(3)][k].clone();
            RationalPrime::purely_inseparable(c, a).unwrap()
        }),
    ]
}

pub fn valuation_axioms(
    a: &BivarRational<K>,
    b: &BivarRational<K>,
    p: &RationalPrime<K>,
) -> Result<(), TestCaseError> {
    let va = valuation(a, p).unwrap();
    let vb = valuation(b, p).unwrap();
    prop_assert_eq!(valuation(&a.mul(b), p).unwrap(), va + vb);
    prop_assert_eq!(valuation(&a.inv().unwrap(), p).unwrap(), -va);
    prop_assert_eq!(valuation(&a.frobenius(1), p).unwrap(), 2 * va);
    let s = a.add(b);
    if !s.is_zero() {
        let vs = valuation(&s, p).unwrap();
        prop_assert!(vs >= va.min(vb));
        if va != vb {
            prop_assert_eq!(vs, va.min(vb));
        }
    }
    Ok(())
}

pub fn leibniz(a: &BivarRational<K>, b: &BivarRational<K>) -> Result<(), TestCaseError> {
    let lhs = differentiate(&a.mul(b)).coeff;
    let rhs = a
        .mul(&differentiate(b).coeff)
        .add(&b.mul(&differentiate(a).coeff));
    prop_assert_eq!(lhs, rhs);
    prop_assert!(differentiate(&a.mul(a)).is_zero());
    prop_assert_eq!(
        differentiate(&a.add(b)).coeff,
        differentiate(a).coeff.add(&differentiate(b).coeff)
    );
    Ok(())
}

pub fn frobenius_additivity(
    a: &BivarRational<K>,
    b: &BivarRational<K>,
    u: &URational<K>,
    w: &URational<K>,
    k: u32,
    c: u8,
    d: u8,
) -> Result<(), TestCaseError> {
    prop_assert_eq!(a.add(b).frobenius(k), a.frobenius(k).add(&b.frobenius(k)));
    prop_assert_eq!(a.mul(b).frobenius(k), a.frobenius(k).mul(&b.frobenius(k)));
    prop_assert_eq!(a.frobenius(k), a.pow(1 << k));
    prop_assert_eq!(u.add(w).frobenius(k), u.frobenius(k).add(&w.frobenius(k)));
    let (c, d) = (F16::new(c).unwrap(), F16::new(d).unwrap());
    let fr = |x: F16| (0..k).fold(x, |x, _| x * x);
    prop_assert_eq!(fr(c + d), fr(c) + fr(d));
    Ok(())
}

pub fn arb_perfected() -> impl Strategy<Value = PerfectedScalar<K>> {
    (0u32..4, arb_urational()).prop_map(|(depth, v)| PerfectedScalar::new(depth, v))
}

pub fn perfected_round_trip(r: &PerfectedScalar<K>, m: u32) -> Result<(), TestCaseError> {
    let root = perfected_root(r, m);
    prop_assert_eq!(&root.frobenius(m), r);
    prop_assert_eq!(&perfected_root(&r.frobenius(m), m), r);
    if !r.is_zero() {
        let (dr, droot) = (perfected_degree_over_k(r), perfected_degree_over_k(&root));
        prop_assert!(droot <= dr << m);
        prop_assert!(perfected_degree_over_k(&r.frobenius(m)) <= dr);
        prop_assert!(droot >= dr);
    }
    Ok(())
}
