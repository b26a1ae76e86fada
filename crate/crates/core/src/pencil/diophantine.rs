//! Coprime solutions of `F^4 g^2 = G^4 f (g + a f)` in `F_q[t]` of bounded degree.
//!
//! With `a = t` a solution would be a second rational point on the generic
//! fibre of the pencil. Any solution has `G^2 | g` and `f` a fourth power
//! (coprimality plus valuations), which the pruned search exploits.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::GeometryError;
use crate::field::FiniteField;
use crate::poly::UPoly;

pub const MAX_SEARCH_DEGREE: usize = 6;
pub const MAX_SEARCH_ORDER: u64 = 4;
const MAX_EXHAUSTIVE_CANDIDATES: u64 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiophantineSolution<F: FiniteField> {
    pub f: UPoly<F>,
    pub g: UPoly<F>,
    pub big_f: UPoly<F>,
    pub big_g: UPoly<F>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiophantineReport {
    pub degree_bound: usize,
    pub q: u64,
    pub exhaustive: bool,
    /// Coprime `(f, g, G)` triples tested.
    pub examined: u64,
    /// Each solution as `[f, g, F, G]`.
    pub solutions: Vec<[String; 4]>,
}

impl DiophantineReport {
    pub fn scope(&self) -> String {
        format!(
            "no claim beyond deg f, g, F, G <= {} over F_{}",
            self.degree_bound, self.q
        )
    }
}

pub fn identity_holds<F: FiniteField>(
    f: &UPoly<F>,
    g: &UPoly<F>,
    big_f: &UPoly<F>,
    big_g: &UPoly<F>,
    a: &UPoly<F>,
) -> bool {
    &big_f.pow(4) * &g.pow(2) == &(&big_g.pow(4) * f) * &(g + &(a * f))
}

/// All nonzero polynomials of degree at most `d`.
fn polys_up_to<F: FiniteField>(d: usize) -> Vec<UPoly<F>> {
    let els = F::elements();
    let q = els.len();
    let total = q.pow(d as u32 + 1);
    (1..total)
        .map(|mut code| {
            let mut coeffs = Vec::with_capacity(d + 1);
            for _ in 0..=d {
                coeffs.push(els[code % q]);
                code /= q;
            }
            UPoly::from_coeffs(coeffs)
        })
        .collect()
}

fn fourth_root<F: FiniteField>(p: &UPoly<F>) -> Option<UPoly<F>> {
    p.sqrt()?.sqrt()
}

fn coprime<F: FiniteField>(a: &UPoly<F>, b: &UPoly<F>) -> bool {
    a.gcd(b).is_one()
}

/// The unique `F` completing `(f, g, G)`, if admissible.
fn complete<F: FiniteField>(
    f: &UPoly<F>,
    g: &UPoly<F>,
    big_g: &UPoly<F>,
    a: &UPoly<F>,
    d: usize,
) -> Option<DiophantineSolution<F>> {
    let rhs = &(&big_g.pow(4) * f) * &(g + &(a * f));
    let (quot, rem) = rhs.div_rem(&g.pow(2));
    if !rem.is_zero() || quot.is_zero() {
        return None;
    }
    let big_f = fourth_root(&quot)?;
    if big_f.degree()? > d || !coprime(&big_f, big_g) {
        return None;
    }
    Some(DiophantineSolution {
        f: f.clone(),
        g: g.clone(),
        big_f,
        big_g: big_g.clone(),
    })
}

fn report<F: FiniteField>(
    d: usize,
    exhaustive: bool,
    examined: u64,
    sols: Vec<DiophantineSolution<F>>,
) -> DiophantineReport {
    DiophantineReport {
        degree_bound: d,
        q: F::ORDER,
        exhaustive,
        examined,
        solutions: sols
            .into_iter()
            .map(|s| [s.f, s.g, s.big_f, s.big_g].map(|p| p.render("t")))
            .collect(),
    }
}

/// Pruned search with a general coefficient `a`: `f = f'^4`, `g = G^2 g'`.
pub fn diophantine_search_with<F: FiniteField>(
    d: usize,
    a: &UPoly<F>,
) -> Result<DiophantineReport, GeometryError> {
    if d > MAX_SEARCH_DEGREE || F::ORDER > MAX_SEARCH_ORDER {
        return Err(GeometryError::Guard(format!(
            "search limited to degree <= {MAX_SEARCH_DEGREE} and q <= {MAX_SEARCH_ORDER}"
        )));
    }
    let roots = polys_up_to::<F>(d / 4);
    let (examined, sols) = polys_up_to::<F>(d / 2)
        .par_iter()
        .map(|big_g| {
            let mut examined = 0u64;
            let mut sols = Vec::new();
            let cofactors = polys_up_to::<F>(d - 2 * big_g.degree().unwrap());
            let g2 = big_g.pow(2);
            for root in &roots {
                let f = root.pow(4);
                for co in &cofactors {
                    let g = &g2 * co;
                    if !coprime(&f, &g) {
                        continue;
                    }
                    examined += 1;
                    sols.extend(complete(&f, &g, big_g, a, d));
                }
            }
            (examined, sols)
        })
        .reduce(
            || (0, Vec::new()),
            |(n1, mut s1), (n2, s2)| {
                s1.extend(s2);
                (n1 + n2, s1)
            },
        );
    Ok(report(d, false, examined, sols))
}

/// Pruned search for the pencil's identity, `a = t`.
pub fn diophantine_search<F: FiniteField>(d: usize) -> Result<DiophantineReport, GeometryError> {
    diophantine_search_with::<F>(d, &UPoly::var())
}

/// Unpruned oracle: every coprime `(f, g)` and every `G`, all of degree at most `d`.
pub fn diophantine_exhaustive<F: FiniteField>(
    d: usize,
    a: &UPoly<F>,
) -> Result<DiophantineReport, GeometryError> {
    let count = F::ORDER.checked_pow(d as u32 + 1).unwrap_or(u64::MAX);
    if count.saturating_pow(3) > MAX_EXHAUSTIVE_CANDIDATES {
        return Err(GeometryError::Guard(format!(
            "exhaustive search over {count}^3 candidates is too large"
        )));
    }
    let all = polys_up_to::<F>(d);
    let (examined, sols) = all
        .par_iter()
        .map(|f| {
            let mut examined = 0u64;
            let mut sols = Vec::new();
            for g in &all {
                if !coprime(f, g) {
                    continue;
                }
                for big_g in &all {
                    examined += 1;
                    sols.extend(complete(f, g, big_g, a, d));
                }
            }
            (examined, sols)
        })
        .reduce(
            || (0, Vec::new()),
            |(n1, mut s1), (n2, s2)| {
                s1.extend(s2);
                (n1 + n2, s1)
            },
        );
    Ok(report(d, true, examined, sols))
}
