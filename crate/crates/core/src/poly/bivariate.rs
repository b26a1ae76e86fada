use std::fmt;

use super::univariate::{UPoly, URational};
use crate::field::FiniteField;

/// Polynomial in `F_q[t][x]`, stored densely by `x`-degree with coefficients in `F_q[t]`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BPoly<F> {
    coeffs: Vec<UPoly<F>>,
}

impl<F: FiniteField> BPoly<F> {
    pub fn zero() -> Self {
        BPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_t(UPoly::one())
    }

    pub fn from_t(c: UPoly<F>) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn constant(c: F) -> Self {
        Self::from_t(UPoly::constant(c))
    }

    pub fn x() -> Self {
        Self::from_coeffs(vec![UPoly::zero(), UPoly::one()])
    }

    pub fn t() -> Self {
        Self::from_t(UPoly::var())
    }

    /// `c * t^i * x^j`.
    pub fn term(c: F, t_exp: usize, x_exp: usize) -> Self {
        let mut coeffs = vec![UPoly::zero(); x_exp + 1];
        coeffs[x_exp] = UPoly::monomial(c, t_exp);
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<UPoly<F>>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        BPoly { coeffs }
    }

    /// Coefficients of `x^0, x^1, ...` as polynomials in `t`.
    pub fn x_coeffs(&self) -> &[UPoly<F>] {
        &self.coeffs
    }

    pub fn x_coeff(&self, k: usize) -> UPoly<F> {
        self.coeffs.get(k).cloned().unwrap_or_else(UPoly::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn degree_x(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn degree_t(&self) -> Option<usize> {
        self.coeffs.iter().filter_map(|c| c.degree()).max()
    }

    /// Leading coefficient with respect to `x`, a polynomial in `t`.
    pub fn lc_x(&self) -> UPoly<F> {
        self.coeffs.last().cloned().unwrap_or_else(UPoly::zero)
    }

    /// Coefficient of the leading term in the lexicographic order that compares
    /// the `t`-exponent first and the `x`-exponent second.
    pub fn lex_leading_coeff(&self) -> F {
        let Some(tmax) = self.degree_t() else {
            return F::zero();
        };
        self.coeffs
            .iter()
            .rev()
            .map(|c| c.coeff(tmax))
            .find(|c| !c.is_zero())
            .unwrap_or_else(F::zero)
    }

    pub fn scale(&self, c: F) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|p| p.scale(c)).collect())
    }

    pub fn mul_t(&self, c: &UPoly<F>) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|p| p * c).collect())
    }

    /// Divide every coefficient by `c`; `None` unless all divisions are exact.
    pub fn exact_div_t(&self, c: &UPoly<F>) -> Option<Self> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|p| p.exact_div(c))
            .collect::<Option<Vec<_>>>()?;
        Some(Self::from_coeffs(coeffs))
    }

    pub fn shift_x(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![UPoly::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        BPoly { coeffs }
    }

    /// Monic gcd of the `t`-coefficients.
    pub fn content(&self) -> UPoly<F> {
        let mut g = UPoly::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let c = self.content();
        self.exact_div_t(&c)
            .expect("content divides every coefficient")
    }

    /// Pseudo-remainder of `self` by `b` with respect to `x`.
    pub fn pseudo_rem(&self, b: &Self) -> Self {
        let db = b.degree_x().expect("pseudo-division by zero");
        let lb = b.lc_x();
        let mut r = self.clone();
        while let Some(dr) = r.degree_x() {
            if dr < db {
                break;
            }
            let lr = r.lc_x();
            let next = &r.mul_t(&lb) + &b.shift_x(dr - db).mul_t(&lr);
            r = next;
        }
        r
    }

    /// Greatest common divisor in `F_q[t][x]`, normalized so that its
    /// lexicographic leading coefficient is 1.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.normalized();
        }
        if other.is_zero() {
            return self.normalized();
        }
        if self.is_unit() || other.is_unit() {
            return Self::one();
        }
        let ca = self.content();
        let cb = other.content();
        let c = ca.gcd(&cb);
        let mut a = self.exact_div_t(&ca).unwrap();
        let mut b = other.exact_div_t(&cb).unwrap();
        if a.degree_x() < b.degree_x() {
            std::mem::swap(&mut a, &mut b);
        }
        loop {
            if b.is_zero() {
                break;
            }
            if b.degree_x() == Some(0) {
                a = Self::one();
                break;
            }
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        let g = a.primitive_part().mul_t(&c);
        g.normalized()
    }

    /// Nonzero constant of `F_q`.
    pub fn is_unit(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].degree() == Some(0)
    }

    /// Scale so that the lexicographic leading coefficient is 1.
    pub fn normalized(&self) -> Self {
        match self.lex_leading_coeff().inv() {
            Some(inv) => self.scale(inv),
            None => Self::zero(),
        }
    }

    /// Exact quotient in `F_q[t][x]`, or `None` if `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        let dd = divisor.degree_x().expect("polynomial division by zero");
        let lead = divisor.lc_x();
        let mut rem = self.clone();
        let Some(dr) = rem.degree_x() else {
            return Some(Self::zero());
        };
        if dr < dd {
            return None;
        }
        let mut quot = vec![UPoly::zero(); dr - dd + 1];
        while let Some(dr) = rem.degree_x() {
            if dr < dd {
                return None;
            }
            let q = rem.lc_x().exact_div(&lead)?;
            rem = &rem + &divisor.shift_x(dr - dd).mul_t(&q);
            quot[dr - dd] = q;
        }
        Some(Self::from_coeffs(quot))
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

    /// `self^(2^k)`, computed coefficientwise since Frobenius is additive.
    pub fn frobenius(&self, k: u32) -> Self {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let step = 1usize << k;
        let mut coeffs = vec![UPoly::zero(); (self.coeffs.len() - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * step] = c.frobenius(k);
        }
        BPoly { coeffs }
    }

    pub fn sqrt(&self) -> Option<Self> {
        if self.coeffs.iter().skip(1).step_by(2).any(|c| !c.is_zero()) {
            return None;
        }
        let coeffs = self
            .coeffs
            .iter()
            .step_by(2)
            .map(|c| c.sqrt())
            .collect::<Option<Vec<_>>>()?;
        Some(Self::from_coeffs(coeffs))
    }

    /// Partial derivative with respect to `x`.
    pub fn derivative_x(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.scale(F::from_i64(i as i64)))
                .collect(),
        )
    }

    /// Substitute `x = b` for `b ∈ F_q(t)`.
    pub fn eval_x(&self, b: &URational<F>) -> URational<F> {
        let Some(d) = self.degree_x() else {
            return URational::zero();
        };
        // homogenize: sum c_k num^k den^(d-k) / den^d
        let mut acc = UPoly::zero();
        let mut num_pow = UPoly::one();
        let den_pows: Vec<UPoly<F>> = {
            let mut v = vec![UPoly::one()];
            for _ in 0..d {
                let next = v.last().unwrap() * b.den();
                v.push(next);
            }
            v
        };
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = &acc + &(&(c * &num_pow) * &den_pows[d - k]);
            }
            if k < d {
                num_pow = &num_pow * b.num();
            }
        }
        URational::new(acc, den_pows[d].clone()).unwrap()
    }

    /// Substitute `t = s^t_scale` and `x = lambda * s^x_exp`, giving a polynomial in `s`.
    pub fn eval_monomial(&self, t_scale: usize, lambda: F, x_exp: usize) -> UPoly<F> {
        let mut out: Vec<F> = Vec::new();
        let mut lam_pow = F::one();
        for (i, c) in self.coeffs.iter().enumerate() {
            for (j, &a) in c.coeffs().iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let e = j * t_scale + i * x_exp;
                if out.len() <= e {
                    out.resize(e + 1, F::zero());
                }
                out[e] = out[e] + a * lam_pow;
            }
            lam_pow = lam_pow * lambda;
        }
        UPoly::from_coeffs(out)
    }

    /// Iterate over nonzero terms as `(t_exp, x_exp, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, F)> + '_ {
        self.coeffs.iter().enumerate().flat_map(|(i, c)| {
            c.coeffs()
                .iter()
                .enumerate()
                .filter(|(_, a)| !a.is_zero())
                .map(move |(j, &a)| (j, i, a))
        })
    }

    pub fn map_coeffs(&self, f: impl Fn(F) -> F + Copy) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c.map_coeffs(f)).collect())
    }

    pub fn render(&self, x: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let xm = match i {
                0 => String::new(),
                1 => x.to_string(),
                _ => format!("{x}^{i}"),
            };
            let cs = c.render("t");
            let single_term = c.coeffs().iter().filter(|a| !a.is_zero()).count() == 1;
            let term = match (xm.is_empty(), c.is_one()) {
                (true, _) => cs,
                (false, true) => xm,
                (false, false) if single_term => format!("{cs}*{xm}"),
                (false, false) => format!("({cs})*{xm}"),
            };
            parts.push(term);
        }
        parts.join(" + ")
    }
}

impl<F: FiniteField> std::ops::Add for &BPoly<F> {
    type Output = BPoly<F>;
    fn add(self, rhs: &BPoly<F>) -> BPoly<F> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        BPoly::from_coeffs(
            (0..n)
                .map(|i| match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                    (Some(a), Some(b)) => a + b,
                    (Some(a), None) => a.clone(),
                    (None, Some(b)) => b.clone(),
                    (None, None) => UPoly::zero(),
                })
                .collect(),
        )
    }
}

impl<F: FiniteField> std::ops::Mul for &BPoly<F> {
    type Output = BPoly<F>;
    fn mul(self, rhs: &BPoly<F>) -> BPoly<F> {
        if self.is_zero() || rhs.is_zero() {
            return BPoly::zero();
        }
        let mut out = vec![UPoly::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        BPoly::from_coeffs(out)
    }
}

impl<F: FiniteField> fmt::Debug for BPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("x"))
    }
}

/// Element of `K(x)`, `K = F_q(t)`, in canonical form: numerator and
/// denominator coprime in `F_q[t][x]`, denominator with lexicographic
/// leading coefficient 1, zero stored as `0/1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BivarRational<F> {
    num: BPoly<F>,
    den: BPoly<F>,
}

impl<F: FiniteField> BivarRational<F> {
    /// Canonicalize `num/den`; `None` if `den` is zero.
    pub fn new(num: BPoly<F>, den: BPoly<F>) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            return Some(Self::zero());
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap())
        };
        let lead = den.lex_leading_coeff().inv().unwrap();
        Some(BivarRational {
            num: num.scale(lead),
            den: den.scale(lead),
        })
    }

    pub fn from_poly(p: BPoly<F>) -> Self {
        BivarRational {
            num: p,
            den: BPoly::one(),
        }
    }

    pub fn zero() -> Self {
        Self::from_poly(BPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(BPoly::one())
    }

    pub fn constant(c: F) -> Self {
        Self::from_poly(BPoly::constant(c))
    }

    pub fn x() -> Self {
        Self::from_poly(BPoly::x())
    }

    pub fn t() -> Self {
        Self::from_poly(BPoly::t())
    }

    /// Embed an element of `K = F_q(t)`.
    pub fn from_k(k: &URational<F>) -> Self {
        Self::new(
            BPoly::from_t(k.num().clone()),
            BPoly::from_t(k.den().clone()),
        )
        .unwrap()
    }

    pub fn num(&self) -> &BPoly<F> {
        &self.num
    }

    pub fn den(&self) -> &BPoly<F> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            if self.den.is_one() {
                return Self::from_poly(&self.num + &other.num);
            }
            return Self::new(&self.num + &other.num, self.den.clone()).unwrap();
        }
        Self::new(
            &(&self.num * &other.den) + &(&other.num * &self.den),
            &self.den * &other.den,
        )
        .unwrap()
    }

    /// Same as [`add`](Self::add): characteristic 2.
    pub fn sub(&self, other: &Self) -> Self {
        self.add(other)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() && other.den.is_one() {
            return Self::from_poly(&self.num * &other.num);
        }
        // cross-cancel before multiplying to keep the operands small
        let g1 = self.num.gcd(&other.den);
        let g2 = other.num.gcd(&self.den);
        let a = self.num.exact_div(&g1).unwrap();
        let d = other.den.exact_div(&g1).unwrap();
        let c = other.num.exact_div(&g2).unwrap();
        let b = self.den.exact_div(&g2).unwrap();
        let num = &a * &c;
        let den = &b * &d;
        let lead = den.lex_leading_coeff().inv().unwrap();
        BivarRational {
            num: num.scale(lead),
            den: den.scale(lead),
        }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let lead = self.num.lex_leading_coeff().inv().unwrap();
        Some(BivarRational {
            num: self.den.scale(lead),
            den: self.num.scale(lead),
        })
    }

    pub fn div(&self, other: &Self) -> Option<Self> {
        Some(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: u64) -> Self {
        if e == 0 {
            return Self::one();
        }
        // split off the 2-power part and apply it as a Frobenius twist
        let k = e.trailing_zeros();
        let odd = e >> k;
        let base = if odd == 1 {
            self.clone()
        } else {
            BivarRational {
                num: self.num.pow(odd),
                den: self.den.pow(odd),
            }
        };
        base.frobenius(k)
    }

    /// `self^(2^k)`. Canonical form is preserved: Frobenius keeps coprimality
    /// and maps a leading coefficient 1 to 1.
    pub fn frobenius(&self, k: u32) -> Self {
        BivarRational {
            num: self.num.frobenius(k),
            den: self.den.frobenius(k),
        }
    }

    /// Square root in `K(x)` when it exists.
    pub fn sqrt(&self) -> Option<Self> {
        Some(BivarRational {
            num: self.num.sqrt()?,
            den: self.den.sqrt()?,
        })
    }

    /// Formal derivative with respect to `x` (quotient rule).
    pub fn derivative_x(&self) -> Self {
        if self.den.is_one() {
            return Self::from_poly(self.num.derivative_x());
        }
        let n1 = self.num.derivative_x();
        let d1 = self.den.derivative_x();
        // (n'd - nd') / d^2, and subtraction is addition here
        Self::new(
            &(&n1 * &self.den) + &(&self.num * &d1),
            &self.den * &self.den,
        )
        .unwrap()
    }

    pub fn map_coeffs(&self, f: impl Fn(F) -> F + Copy) -> Self {
        BivarRational {
            num: self.num.map_coeffs(f),
            den: self.den.map_coeffs(f),
        }
    }

    pub fn render(&self, x: &str) -> String {
        if self.den.is_one() {
            self.num.render(x)
        } else {
            format!("({})/({})", self.num.render(x), self.den.render(x))
        }
    }
}

impl<F: FiniteField> fmt::Debug for BivarRational<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("x"))
    }
}
