//! The quasi-elliptic pencil of plane quartics
//! `T0 (Z^4 + X^2 Y^2 + X^3 Z) + T1 (Y^4 + X^2 Z^2) = 0` over `F_q`, its
//! fibre identities, the dual graph of its degenerate fibre, and the search
//! for rational points of its generic fibre.

mod diophantine;
mod dual_graph;
mod mpoly;

pub use diophantine::{
    diophantine_exhaustive, diophantine_search, diophantine_search_with, identity_holds,
    DiophantineReport, DiophantineSolution, MAX_SEARCH_DEGREE, MAX_SEARCH_ORDER,
};
pub use dual_graph::{
    model_classification_checks, solve_self_intersections, Component, DualGraph, Edge, ModelReport,
    Section,
};
pub use mpoly::MPoly;

use crate::error::GeometryError;
use crate::field::{FiniteField, Ring};

pub const X: usize = 0;
pub const Y: usize = 1;
pub const Z: usize = 2;
pub const T0: usize = 3;
pub const T1: usize = 4;

pub const FIBER_DEGREE: u32 = 4;

/// Genus of a plane curve of degree `d` by the genus-degree formula.
pub fn arithmetic_genus(d: u32) -> u32 {
    (d - 1) * (d - 2) / 2
}

fn v<R: Ring, const N: usize>(i: usize) -> MPoly<R, N> {
    MPoly::var(i)
}

/// `Z^4 + X^2 Y^2 + X^3 Z`.
pub fn quartic_a<R: Ring, const N: usize>() -> MPoly<R, N> {
    v(Z).pow(4) + &v::<R, N>(X).pow(2) * &v(Y).pow(2) + &v::<R, N>(X).pow(3) * &v(Z)
}

/// `Y^4 + X^2 Z^2`.
pub fn quartic_b<R: Ring, const N: usize>() -> MPoly<R, N> {
    v(Y).pow(4) + &v::<R, N>(X).pow(2) * &v(Z).pow(2)
}

/// The fibre over `(1 : c)`.
pub fn fiber_quartic<R: Ring>(c: R) -> MPoly<R, 3> {
    quartic_a() + quartic_b().scale(c)
}

/// The total space in `X, Y, Z, T0, T1`.
pub fn total_space<R: Ring>() -> MPoly<R, 5> {
    &v::<R, 5>(T0) * &quartic_a() + &v::<R, 5>(T1) * &quartic_b()
}

/// Projective points of `P^2(F)` normalized so the first nonzero coordinate is 1.
pub fn projective_points<F: FiniteField>() -> Vec<[F; 3]> {
    let els = F::elements();
    let mut out = Vec::new();
    for &a in &els {
        for &b in &els {
            out.push([F::one(), a, b]);
        }
    }
    for &b in &els {
        out.push([F::zero(), F::one(), b]);
    }
    out.push([F::zero(), F::zero(), F::one()]);
    out
}

fn gradient<R: Ring>(s: &MPoly<R, 3>) -> [MPoly<R, 3>; 3] {
    [s.derivative(X), s.derivative(Y), s.derivative(Z)]
}

fn is_singular_at<F: FiniteField>(s: &MPoly<F, 3>, grad: &[MPoly<F, 3>; 3], p: &[F; 3]) -> bool {
    s.eval(p).is_zero() && grad.iter().all(|g| g.eval(p).is_zero())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularPointReport<F> {
    /// `(0 : 1 : c^(1/4))`.
    pub point: [F; 3],
    pub is_singular: bool,
    pub multiplicity: u32,
    /// Every singular point of the fibre over `F`, found by exhaustion.
    pub singular_points: Vec<[F; 3]>,
}

impl<F: FiniteField> SingularPointReport<F> {
    pub fn unique(&self) -> bool {
        self.singular_points == [self.point]
    }
}

pub fn singular_point_report<F: FiniteField>(c: F) -> SingularPointReport<F> {
    let gamma = c.frobenius_root().frobenius_root();
    let point = [F::zero(), F::one(), gamma];
    let s = fiber_quartic(c);
    let grad = gradient(&s);
    // affine chart Y = 1 with the point moved to the origin
    let local: MPoly<F, 3> = s.substitute(&[
        MPoly::var(X),
        MPoly::one(),
        MPoly::var(Z) + MPoly::constant(gamma),
    ]);
    let singular_points = projective_points::<F>()
        .into_iter()
        .filter(|p| is_singular_at(&s, &grad, p))
        .collect();
    SingularPointReport {
        point,
        is_singular: is_singular_at(&s, &grad, &point),
        multiplicity: local.order().unwrap_or(0),
        singular_points,
    }
}

/// Every tangent line passes through `(0:1:0)`: the `Y`-partial of the whole
/// pencil vanishes identically. Over a ring of characteristic 0 it does not.
pub fn strangeness_check<R: Ring>() -> bool {
    total_space::<R>().derivative(Y).is_zero()
}

/// Whether the common point `(0:1:0)` of all tangent lines is the singular point of the fibre over `(1:c)`.
pub fn strange_point_is_singular<F: FiniteField>(c: F) -> bool {
    let s = fiber_quartic(c);
    is_singular_at(&s, &gradient(&s), &[F::zero(), F::one(), F::zero()])
}

/// For a non-singular point `P = (x0:y0:z0)` of the fibre with `x0 != 0`,
/// the substitution `(x0 X : x0 Y + y0 X : x0 Z + z0 X)` multiplies the
/// quartic by `x0^4` and sends `P` to `(1:0:0)`.
pub fn homogeneity_transform_check<F: FiniteField>(c: F, p: [F; 3]) -> Result<bool, GeometryError> {
    let s = fiber_quartic(c);
    let grad = gradient(&s);
    let [x0, y0, z0] = p;
    if x0.is_zero() || !s.eval(&p).is_zero() || is_singular_at(&s, &grad, &p) {
        return Err(GeometryError::Precondition(format!(
            "({x0}:{y0}:{z0}) must be a non-singular point of the fibre with x0 != 0"
        )));
    }
    let k = |a: F| MPoly::<F, 3>::constant(a);
    let phi = [
        k(x0) * v(X),
        k(x0) * v(Y) + k(y0) * v(X),
        k(x0) * v(Z) + k(z0) * v(X),
    ];
    let scales = s.substitute(&phi) == s.scale(x0.pow(4));
    let image = [x0 * x0, x0 * y0 + y0 * x0, x0 * z0 + z0 * x0];
    let to_origin = !image[0].is_zero() && image[1].is_zero() && image[2].is_zero();
    Ok(scales && to_origin)
}

/// The transform identity `S(φ) = x0^4 S + X^4 S(P)` for an arbitrary point, symbolically.
pub fn homogeneity_identity<F: FiniteField>(c: F, p: [F; 3]) -> bool {
    let s = fiber_quartic(c);
    let [x0, y0, z0] = p;
    let k = |a: F| MPoly::<F, 3>::constant(a);
    let phi = [
        k(x0) * v(X),
        k(x0) * v(Y) + k(y0) * v(X),
        k(x0) * v(Z) + k(z0) * v(X),
    ];
    s.substitute(&phi) == s.scale(x0.pow(4)) + v(X).pow(4).scale(s.eval(&p))
}

/// Runs [`homogeneity_transform_check`] on every admissible point of the
/// fibre over `F`; returns `(points checked, all passed)`.
pub fn homogeneity_sweep<F: FiniteField>(c: F) -> (usize, bool) {
    let s = fiber_quartic(c);
    let grad = gradient(&s);
    let mut count = 0;
    let mut ok = true;
    for p in projective_points::<F>() {
        if p[0].is_zero() || !s.eval(&p).is_zero() || is_singular_at(&s, &grad, &p) {
            continue;
        }
        count += 1;
        ok &= homogeneity_transform_check(c, p).unwrap_or(false);
    }
    (count, ok)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InverseMapReport {
    /// `T0 ↦ Y^4 + X^2 Z^2`, `T1 ↦ Z^4 + X^2 Y^2 + X^3 Z` annihilates the pencil.
    pub symbolic_zero: bool,
    /// The same, evaluated at every point of `F^3`.
    pub pointwise_zero: bool,
    /// The fibre over `(0:1)` is `(Y^2 + XZ)^2`.
    pub bad_fibre_square: bool,
}

impl InverseMapReport {
    pub fn pass(&self) -> bool {
        self.symbolic_zero && self.pointwise_zero && self.bad_fibre_square
    }
}

pub fn inverse_map_identity_check<F: FiniteField>() -> InverseMapReport {
    let total = total_space::<F>();
    let images: [MPoly<F, 3>; 5] = [v(X), v(Y), v(Z), quartic_b(), quartic_a()];
    let composed = total.substitute(&images);
    let els = F::elements();
    let mut pointwise_zero = true;
    for &a in &els {
        for &b in &els {
            for &c in &els {
                let p = [a, b, c];
                let q = [
                    a,
                    b,
                    c,
                    quartic_b::<F, 3>().eval(&p),
                    quartic_a::<F, 3>().eval(&p),
                ];
                pointwise_zero &= total.eval(&q).is_zero();
            }
        }
    }
    let bad: MPoly<F, 3> = total.substitute(&[v(X), v(Y), v(Z), MPoly::zero(), MPoly::one()]);
    let conic: MPoly<F, 3> = v(Y).pow(2) + &v::<F, 3>(X) * &v(Z);
    InverseMapReport {
        symbolic_zero: composed.is_zero(),
        pointwise_zero,
        bad_fibre_square: bad == conic.pow(2),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NonsmoothReport {
    /// Each fibre's singular point `((0:1:c^(1/4)), (1:c))` and the point
    /// `((0:0:1), (0:1))` satisfy `X = 0` and `T0 Z^4 + T1 Y^4 = 0`.
    pub points_on_locus: bool,
    /// Modulo `X` the pencil is `T0 Z^4 + T1 Y^4`, and the fibre gradient vanishes there.
    pub locus_equations: bool,
    /// `(y:z) ↦ (y^4:z^4)` maps the locus onto the base, as Frobenius composed with itself.
    pub base_map: bool,
}

impl NonsmoothReport {
    pub fn pass(&self) -> bool {
        self.points_on_locus && self.locus_equations && self.base_map
    }
}

pub fn nonsmooth_locus_check<F: FiniteField>() -> NonsmoothReport {
    let locus: MPoly<F, 5> = &v::<F, 5>(T0) * &v(Z).pow(4) + &v::<F, 5>(T1) * &v(Y).pow(4);
    let on_locus = |p: [F; 5]| p[X].is_zero() && locus.eval(&p).is_zero();
    let mut points_on_locus = on_locus([F::zero(), F::zero(), F::one(), F::zero(), F::one()]);
    for c in F::elements() {
        let r = singular_point_report(c);
        let [x, y, z] = r.point;
        points_on_locus &= r.is_singular && on_locus([x, y, z, F::one(), c]);
    }

    let total = total_space::<F>();
    let locus_equations = total.modulo_var(X) == locus
        && total.derivative(X).divisible_by_var(X)
        && total.derivative(Z).divisible_by_var(X)
        && total.derivative(Y).is_zero();

    let pulled: MPoly<F, 5> = locus.substitute(&[v(X), v(Y), v(Z), v(Y).pow(4), v(Z).pow(4)]);
    let frob: [MPoly<F, 2>; 2] = [v(0).pow(2), v(1).pow(2)];
    let twice = [frob[0].substitute(&frob), frob[1].substitute(&frob)];
    let base_map = pulled.is_zero() && twice == [v(0).pow(4), v(1).pow(4)];

    NonsmoothReport {
        points_on_locus,
        locus_equations,
        base_map,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{F16, F2, F4};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fibre_specializations() {
        let s0 = fiber_quartic(F2::zero());
        assert_eq!(s0, quartic_a());
        assert_eq!(s0.total_degree(), Some(FIBER_DEGREE));
        assert_eq!(arithmetic_genus(FIBER_DEGREE), 3);
        assert_eq!(fiber_quartic(F2::one()), quartic_a() + quartic_b());
    }

    #[test]
    fn singular_points() {
        let r = singular_point_report(F16::zero());
        assert_eq!(r.point, [F16::zero(), F16::one(), F16::zero()]);
        assert_eq!(r.multiplicity, 2);
        assert!(r.is_singular && r.unique());
        let r = singular_point_report(F16::one());
        assert_eq!(r.point, [F16::zero(), F16::one(), F16::one()]);
        assert_eq!(r.multiplicity, 3);
        assert!(r.unique());
        for c in F16::elements() {
            let r = singular_point_report(c);
            let expected = if c.pow(3) == F16::one() { 3 } else { 2 };
            assert_eq!(r.multiplicity, expected, "{c:?}");
            assert!(r.is_singular && r.unique(), "{c:?}");
        }
    }

    #[test]
    fn strangeness() {
        assert!(strangeness_check::<F2>());
        assert!(strangeness_check::<F16>());
        assert!(!strangeness_check::<i64>());
        assert!(!fiber_quartic(5i64).derivative(Y).is_zero());
        assert!(strange_point_is_singular(F4::zero()));
        assert!(!strange_point_is_singular(F4::one()));
    }

    #[test]
    fn homogeneity() {
        let one = F4::one();
        let zero = F4::zero();
        // (1:0:0) lies on every fibre and is fixed by the identity transform
        assert_eq!(
            homogeneity_transform_check(zero, [one, zero, zero]),
            Ok(true)
        );
        for c in [zero, one] {
            let (count, ok) = homogeneity_sweep(c);
            assert!(count > 0 && ok, "c = {c:?}");
        }
        for c in F16::elements() {
            assert!(homogeneity_sweep(c).1);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let p = [0, 0, 0].map(|_: u8| F16::new(rng.gen_range(0..16)).unwrap());
            let c = F16::new(rng.gen_range(0..16)).unwrap();
            assert!(homogeneity_identity(c, p));
        }
        assert!(homogeneity_transform_check(one, [zero, one, one]).is_err());
    }

    #[test]
    fn inverse_map() {
        assert!(inverse_map_identity_check::<F2>().pass());
        assert!(inverse_map_identity_check::<F16>().pass());
        let total = total_space::<F16>();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let p = [0, 0, 0].map(|_: u8| F16::new(rng.gen_range(0..16)).unwrap());
            let q = [
                p[0],
                p[1],
                p[2],
                quartic_b::<F16, 3>().eval(&p),
                quartic_a::<F16, 3>().eval(&p),
            ];
            assert!(total.eval(&q).is_zero());
        }
    }

    #[test]
    fn nonsmooth_locus() {
        assert!(nonsmooth_locus_check::<F2>().pass());
        assert!(nonsmooth_locus_check::<F16>().pass());
    }
}
