//! Towers of square-root adjunctions over a rational bottom `K(x)` in
//! characteristic 2, and the singularity-degree descent along them.
//!
//! Every level-`n` element `e` is represented by its shadow `e^(2^(N-n))`,
//! an element of the bottom field `F_N = K(x)`. Frobenius is a ring
//! homomorphism, so shadows of sums and products are sums and products of
//! shadows, and valuations at the bottom prime transport up the tower.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::curve::{self, RationalPrime};
use crate::error::{FieldError, TowerError};
use crate::expr::{BinOp, Expr};
use crate::field::{FiniteField, F16, F2, F4, F8};
use crate::padic::{self, BoundReport};
use crate::perfect::{perfected_degree_over_k, perfected_root};
use crate::poly::BivarRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepKind {
    Ramified,
    Inert,
}

/// Claimed behaviour of one step together with the element certifying it:
/// a local parameter for a ramified step, a residue generator for an inert one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub kind: StepKind,
    pub witness: Expr,
}

/// Level `n`: the generator `gen` with `gen^2 = square`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelSpec {
    pub n: usize,
    pub gen: String,
    pub square: Expr,
    pub step: Step,
}

/// The designated rational prime of the bottom field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BottomPrime {
    Infinity,
    /// Zero of a monic linear polynomial in the bottom variable.
    Zero(Expr),
}

/// Regression block carried by a tower document.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedInvariants {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta0: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deg: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_rational_level: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerSpec {
    pub p: u64,
    pub q: u64,
    pub var: String,
    pub prime: BottomPrime,
    /// Ordered from level `N-1` down to level 0.
    pub levels: Vec<LevelSpec>,
    pub genus_hint: Option<u64>,
    pub expected: Option<ExpectedInvariants>,
}

impl TowerSpec {
    /// Validates level numbering and symbol names; levels may be given in any order.
    pub fn new(
        p: u64,
        q: u64,
        var: impl Into<String>,
        prime: BottomPrime,
        mut levels: Vec<LevelSpec>,
        genus_hint: Option<u64>,
        expected: Option<ExpectedInvariants>,
    ) -> Result<Self, TowerError> {
        let var = var.into();
        if levels.is_empty() {
            return Err(TowerError::Empty);
        }
        levels.sort_by_key(|l| std::cmp::Reverse(l.n));
        let top = levels.len();
        let found: Vec<usize> = levels.iter().map(|l| l.n).collect();
        if found.iter().rev().copied().ne(0..top) {
            return Err(TowerError::NonContiguousLevels {
                expected_top: top - 1,
                found,
            });
        }
        let mut seen = vec![var.as_str(), "t"];
        if var == "t" {
            return Err(TowerError::DuplicateSymbol(var));
        }
        for l in &levels {
            if seen.contains(&l.gen.as_str()) {
                return Err(TowerError::DuplicateSymbol(l.gen.clone()));
            }
            seen.push(&l.gen);
        }
        Ok(TowerSpec {
            p,
            q,
            var,
            prime,
            levels,
            genus_hint,
            expected,
        })
    }

    /// `N`, the level of the bottom field.
    pub fn top(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, n: usize) -> &LevelSpec {
        &self.levels[self.top() - 1 - n]
    }
}

/// Generators bound to their shadows in the bottom field.
#[derive(Clone)]
pub struct ShadowEnv<F> {
    top: usize,
    var: String,
    reps: HashMap<String, (usize, BivarRational<F>)>,
}

impl<F: FiniteField> ShadowEnv<F> {
    fn new(top: usize, var: &str) -> Self {
        ShadowEnv {
            top,
            var: var.to_string(),
            reps: HashMap::new(),
        }
    }

    /// Shadow of the generator `name` at its own level.
    pub fn rep(&self, name: &str) -> Option<&BivarRational<F>> {
        self.reps.get(name).map(|(_, r)| r)
    }

    pub fn level_of(&self, name: &str) -> Option<usize> {
        self.reps.get(name).map(|(n, _)| *n)
    }

    /// Shadow at level `n` of an expression; generators below level `n` are not in scope.
    pub fn eval(&self, e: &Expr, n: usize) -> Result<BivarRational<F>, TowerError> {
        let depth = (self.top - n) as u32;
        match e {
            Expr::Num(k) => Ok(BivarRational::constant(F::from_i64((k % 2) as i64))),
            Expr::Ident(s) if s == "t" => Ok(BivarRational::t().frobenius(depth)),
            Expr::Ident(s) if *s == self.var => Ok(BivarRational::x().frobenius(depth)),
            Expr::Ident(s) => match self.reps.get(s) {
                Some((m, rep)) if *m >= n => Ok(rep.frobenius((m - n) as u32)),
                _ => Err(TowerError::UndefinedSymbol {
                    symbol: s.clone(),
                    level: n,
                }),
            },
            Expr::Pow(base, k) => Ok(self.eval(base, n)?.pow(*k)),
            Expr::Binary(op, a, b) => {
                let a = self.eval(a, n)?;
                let b = self.eval(b, n)?;
                match op {
                    BinOp::Add | BinOp::Sub => Ok(a.add(&b)),
                    BinOp::Mul => Ok(a.mul(&b)),
                    BinOp::Div => a.div(&b).ok_or(TowerError::DivisionByZero(n)),
                }
            }
        }
    }
}

/// Bind every generator to its shadow, top level first.
pub fn elaborate<F: FiniteField>(spec: &TowerSpec) -> Result<ShadowEnv<F>, TowerError> {
    let mut env = ShadowEnv::new(spec.top(), &spec.var);
    for level in &spec.levels {
        // g_n^(2^(N-n)) = (g_n^2)^(2^(N-n-1)), the square's shadow one level up
        let rep = env.eval(&level.square, level.n + 1)?;
        env.reps.insert(level.gen.clone(), (level.n, rep));
    }
    Ok(env)
}

/// The bottom prime as a prime of `K(x)`.
pub fn bottom_prime<F: FiniteField>(
    spec: &TowerSpec,
    env: &ShadowEnv<F>,
) -> Result<RationalPrime<F>, TowerError> {
    let e = match &spec.prime {
        BottomPrime::Infinity => return Ok(RationalPrime::Infinity),
        BottomPrime::Zero(e) => e,
    };
    let f = env.eval(e, spec.top())?;
    let degree = f.num().degree_x().unwrap_or(0) as u64;
    if degree != 1 || f.den().degree_x() != Some(0) {
        return Err(TowerError::BottomNotRational(degree));
    }
    // (a x + c)/d vanishes at x = c/a
    let a = f.num().x_coeff(1);
    let c = f.num().x_coeff(0);
    Ok(RationalPrime::Linear(
        crate::poly::URational::new(c, a).expect("leading coefficient is nonzero"),
    ))
}

/// `v_{p_n}(e) = E * v_{p_N}(rep) / 2^depth`, where `E` is the product of the
/// ramification indices between level `n` and the bottom.
pub fn tower_valuation<F: FiniteField>(
    rep: &BivarRational<F>,
    prime: &RationalPrime<F>,
    depth: u32,
    ramification: u64,
    level: usize,
) -> Result<i64, TowerError> {
    let v = curve::valuation(rep, prime)?;
    let numerator = ramification as i64 * v;
    let denominator = 1i64 << depth;
    if numerator % denominator != 0 {
        return Err(TowerError::RamificationInconsistent {
            level,
            numerator,
            denominator,
        });
    }
    Ok(numerator / denominator)
}

/// Verified data of one step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepOutcome {
    pub e: u8,
    pub f: u8,
    /// `m_n` with `κ(p_n) = K(t^(1/2^m_n))`.
    pub residue_level: u32,
    /// Rendered evidence: the local parameter's valuation or the residue.
    pub evidence: String,
}

/// Check a witness against its claim.
///
/// `ramification_below` is the product of `e_k` over `k > n`; `residue_level_below` is `m_{n+1}`.
pub fn verify_step<F: FiniteField>(
    kind: StepKind,
    witness_rep: &BivarRational<F>,
    prime: &RationalPrime<F>,
    n: usize,
    top: usize,
    ramification_below: u64,
    residue_level_below: u32,
) -> Result<StepOutcome, TowerError> {
    let depth = (top - n) as u32;
    let reject = |claim: String, computed: String| TowerError::WitnessRejected {
        level: n,
        claim,
        computed,
    };
    if witness_rep.is_zero() {
        return Err(reject(
            format!("{kind:?}").to_lowercase(),
            "zero witness".into(),
        ));
    }
    match kind {
        StepKind::Ramified => {
            let v = tower_valuation(witness_rep, prime, depth, 2 * ramification_below, n)?;
            if v != 1 {
                return Err(reject(
                    "ramified (valuation 1)".into(),
                    format!("valuation {v}"),
                ));
            }
            Ok(StepOutcome {
                e: 2,
                f: 1,
                residue_level: residue_level_below,
                evidence: "valuation 1".into(),
            })
        }
        StepKind::Inert => {
            let v = curve::valuation(witness_rep, prime)?;
            let wanted = 1u64 << (residue_level_below + 1);
            if v != 0 {
                return Err(reject(
                    format!("inert (unit with residue of degree {wanted})"),
                    format!("valuation {v} at the bottom prime"),
                ));
            }
            let rho = perfected_root(&curve::residue(witness_rep, prime)?, depth);
            let degree = perfected_degree_over_k(&rho);
            if degree != wanted {
                return Err(reject(
                    format!("inert (residue of degree {wanted})"),
                    format!("residue {} of degree {degree}", rho.render()),
                ));
            }
            Ok(StepOutcome {
                e: 1,
                f: 2,
                residue_level: residue_level_below + 1,
                evidence: rho.render(),
            })
        }
    }
}

/// `δ_n = 2 δ_{n+1} + o/2` with `o` the order of `d(rep(witness))` at the
/// bottom prime, or `None` when that order is negative, odd, or the
/// differential vanishes.
pub fn delta_recursion_step<F: FiniteField>(
    witness_rep: &BivarRational<F>,
    prime: &RationalPrime<F>,
    delta_next: u64,
) -> Result<(Option<u64>, Option<i64>), TowerError> {
    let w = curve::differentiate(witness_rep);
    if w.is_zero() {
        return Ok((None, None));
    }
    let o = curve::differential_order(&w, prime)?;
    if o < 0 || o % 2 != 0 {
        return Ok((None, Some(o)));
    }
    Ok((Some(2 * delta_next + (o / 2) as u64), Some(o)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FallbackOutcome {
    Resolved(u64),
    Unresolved { lower: u64, upper: u64 },
}

/// Pin `δ_n` between `δ_{n+1} + p Δ_{n+1}` and the genus.
pub fn delta_constraint_fallback(
    delta_next: u64,
    big_delta_next: u64,
    genus_hint: u64,
    p: u64,
    level: usize,
) -> Result<FallbackOutcome, TowerError> {
    let lower = delta_next + p * big_delta_next;
    let upper = genus_hint;
    if lower > upper {
        return Err(TowerError::Infeasible {
            level,
            lower,
            upper,
        });
    }
    Ok(if lower == upper {
        FallbackOutcome::Resolved(lower)
    } else {
        FallbackOutcome::Unresolved { lower, upper }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaMethod {
    Recursion,
    RationalLevel,
    ConstraintFallback,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub n: usize,
    pub degree: u64,
    /// Step data towards level `n+1`; absent at the bottom.
    pub e: Option<u8>,
    pub f: Option<u8>,
    pub residue_level: u32,
    pub delta: Option<u64>,
    #[serde(rename = "Delta")]
    pub big_delta: Option<u64>,
    pub rational: bool,
    pub method: Option<DeltaMethod>,
    pub evidence: Option<String>,
    pub differential_order: Option<i64>,
    /// Bounds left open by the constraint fallback.
    pub interval: Option<(u64, Option<u64>)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificates {
    pub non_decomposed: bool,
    pub delta_gcd: u64,
    /// `gcd(Δ_0, Δ_1, ...) = 1`, the sufficient criterion for non-decomposition.
    pub coprime_criterion: bool,
    pub first_rational_level: usize,
    /// Absent when `δ_0 = 0`.
    pub bound: Option<BoundReport>,
    pub attains_bound: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerTrace {
    pub p: u64,
    pub q: u64,
    pub top: usize,
    /// Indexed by level, `levels[n]` is level `n`.
    pub levels: Vec<LevelRecord>,
    pub resolved: bool,
    pub certificates: Option<Certificates>,
}

impl TowerTrace {
    /// `δ_0, ..., δ_N`; `None` when unresolved.
    pub fn deltas(&self) -> Option<Vec<u64>> {
        self.levels.iter().map(|l| l.delta).collect()
    }

    /// `Δ_0, ..., Δ_{N-1}`.
    pub fn big_deltas(&self) -> Option<Vec<u64>> {
        self.levels[..self.top]
            .iter()
            .map(|l| l.big_delta)
            .collect()
    }

    pub fn degrees(&self) -> Vec<u64> {
        self.levels.iter().map(|l| l.degree).collect()
    }

    pub fn delta0(&self) -> Option<u64> {
        self.levels[0].delta
    }

    pub fn first_rational_level(&self) -> usize {
        self.levels
            .iter()
            .position(|l| l.rational)
            .unwrap_or(self.top)
    }

    /// Descriptions of every mismatch against a regression block.
    pub fn mismatches(&self, expected: &ExpectedInvariants) -> Vec<String> {
        let mut out = Vec::new();
        if let Some(d) = &expected.delta {
            if self.deltas().as_ref() != Some(d) {
                out.push(format!("delta: expected {d:?}, got {:?}", self.deltas()));
            }
        }
        if let Some(d) = expected.delta0 {
            if self.delta0() != Some(d) {
                out.push(format!("delta0: expected {d}, got {:?}", self.delta0()));
            }
        }
        if let Some(d) = &expected.deg {
            if &self.degrees() != d {
                out.push(format!("deg: expected {d:?}, got {:?}", self.degrees()));
            }
        }
        if let Some(l) = expected.first_rational_level {
            if self.first_rational_level() != l {
                out.push(format!(
                    "first_rational_level: expected {l}, got {}",
                    self.first_rational_level()
                ));
            }
        }
        out
    }
}

/// Check `g - ḡ = δ_0`, plus divisibility by `(p-1)/2` when `p > 2`.
pub fn genus_drop_check(trace: &TowerTrace, g: u64, g_bar: u64) -> bool {
    let Some(delta0) = trace.delta0() else {
        return false;
    };
    if g < g_bar || g - g_bar != delta0 {
        return false;
    }
    trace.p == 2 || (g - g_bar).is_multiple_of((trace.p - 1) / 2)
}

/// Run the descent on a spec, dispatching on the constant field.
pub fn analyze(spec: &TowerSpec) -> Result<TowerTrace, TowerError> {
    if spec.p != 2 {
        return Err(TowerError::UnsupportedCharacteristic(spec.p));
    }
    match spec.q {
        2 => analyze_in::<F2>(spec),
        4 => analyze_in::<F4>(spec),
        8 => analyze_in::<F8>(spec),
        16 => analyze_in::<F16>(spec),
        q => Err(FieldError::UnsupportedOrder(q).into()),
    }
}

/// [`analyze`] over an explicit constant field.
pub fn analyze_in<F: FiniteField>(spec: &TowerSpec) -> Result<TowerTrace, TowerError> {
    let env = elaborate::<F>(spec)?;
    let prime = bottom_prime(spec, &env)?;
    let top = spec.top();

    let bottom = LevelRecord {
        n: top,
        degree: 1,
        e: None,
        f: None,
        residue_level: 0,
        delta: Some(0),
        big_delta: None,
        rational: true,
        method: Some(DeltaMethod::RationalLevel),
        evidence: None,
        differential_order: None,
        interval: None,
    };
    // built bottom-up, reversed at the end
    let mut records = vec![bottom];
    let mut ramification_below = 1u64;
    let mut resolved = true;

    for n in (0..top).rev() {
        let level = spec.level(n);
        let next = records.last().unwrap().clone();
        let w = env.eval(&level.step.witness, n)?;
        let step = verify_step(
            level.step.kind,
            &w,
            &prime,
            n,
            top,
            ramification_below,
            next.residue_level,
        )?;
        ramification_below *= step.e as u64;
        let degree = step.f as u64 * next.degree;

        let mut record = LevelRecord {
            n,
            degree,
            e: Some(step.e),
            f: Some(step.f),
            residue_level: step.residue_level,
            delta: None,
            big_delta: None,
            rational: degree == 1,
            method: None,
            evidence: Some(step.evidence),
            differential_order: None,
            interval: None,
        };

        if let (true, Some(delta_next)) = (resolved, next.delta) {
            let (value, order) = delta_recursion_step(&w, &prime, delta_next)?;
            record.differential_order = order;
            let big_delta_next = next.big_delta.unwrap_or(0);
            let delta = match value {
                Some(d) => {
                    record.method = Some(DeltaMethod::Recursion);
                    if let Some(g) = spec.genus_hint {
                        if d > g {
                            return Err(TowerError::Infeasible {
                                level: n,
                                lower: d,
                                upper: g,
                            });
                        }
                    }
                    Some(d)
                }
                None => {
                    let lower = delta_next + 2 * big_delta_next;
                    match spec.genus_hint {
                        None => {
                            record.interval = Some((lower, None));
                            None
                        }
                        Some(g) => {
                            match delta_constraint_fallback(delta_next, big_delta_next, g, 2, n)? {
                                FallbackOutcome::Resolved(d) => {
                                    record.method = Some(DeltaMethod::ConstraintFallback);
                                    Some(d)
                                }
                                FallbackOutcome::Unresolved { lower, upper } => {
                                    record.interval = Some((lower, Some(upper)));
                                    None
                                }
                            }
                        }
                    }
                }
            };
            match delta {
                Some(d) => {
                    record.delta = Some(d);
                    record.big_delta = Some(d - delta_next);
                }
                None => resolved = false,
            }
        }
        records.push(record);
    }
    records.reverse();

    let mut trace = TowerTrace {
        p: spec.p,
        q: spec.q,
        top,
        levels: records,
        resolved,
        certificates: None,
    };
    if resolved {
        trace.certificates = Some(certify(&trace)?);
        check_trace_invariants(&trace)?;
    } else {
        check_degree_invariants(&trace)?;
    }
    Ok(trace)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn certify(trace: &TowerTrace) -> Result<Certificates, TowerError> {
    let big = trace.big_deltas().expect("resolved trace");
    let delta_gcd = big.iter().fold(0, |g, &d| gcd(g, d));
    let first_rational_level = trace.first_rational_level();
    let delta0 = trace.delta0().expect("resolved trace");
    let bound = if delta0 > 0 {
        Some(padic::separability_bound(delta0, 1, 2)?)
    } else {
        None
    };
    let attains_bound = bound
        .as_ref()
        .map(|b| first_rational_level == b.bound_level as usize);
    Ok(Certificates {
        // the bottom prime is rational, so every p_n has a single geometric point
        non_decomposed: trace.levels[trace.top].degree == 1,
        delta_gcd,
        coprime_criterion: delta_gcd == 1,
        first_rational_level,
        bound,
        attains_bound,
    })
}

fn violated(msg: String) -> Result<(), TowerError> {
    Err(TowerError::InvariantViolated(msg))
}

fn check_degree_invariants(trace: &TowerTrace) -> Result<(), TowerError> {
    let lv = &trace.levels;
    if lv[trace.top].degree != 1 {
        return violated(format!(
            "deg(p_{}) = {} != 1",
            trace.top, lv[trace.top].degree
        ));
    }
    for n in 0..trace.top {
        let (e, f) = (lv[n].e.unwrap_or(0), lv[n].f.unwrap_or(0));
        if e as u32 * f as u32 != 2 {
            return violated(format!("e*f = {e}*{f} != 2 at level {n}"));
        }
        if lv[n].degree != f as u64 * lv[n + 1].degree {
            return violated(format!(
                "deg(p_{n}) = {} != f*deg(p_{}) = {}*{}",
                lv[n].degree,
                n + 1,
                f,
                lv[n + 1].degree
            ));
        }
    }
    Ok(())
}

/// Every structural relation a resolved trace must satisfy.
pub fn check_trace_invariants(trace: &TowerTrace) -> Result<(), TowerError> {
    check_degree_invariants(trace)?;
    let lv = &trace.levels;
    let (Some(delta), Some(big)) = (trace.deltas(), trace.big_deltas()) else {
        return violated("trace is unresolved".into());
    };
    for n in 0..trace.top {
        let tail: u64 = big[n..].iter().sum();
        if delta[n] != tail {
            return violated(format!(
                "delta_{n} = {} != sum of Delta_m (m >= {n}) = {tail}",
                delta[n]
            ));
        }
        if n + 1 < trace.top && 2 * big[n + 1] > big[n] {
            return violated(format!(
                "Delta_{} = {} exceeds Delta_{n}/2 = {}/2",
                n + 1,
                big[n + 1],
                big[n]
            ));
        }
        if (2 * big[n]) % lv[n + 1].degree != 0 {
            return violated(format!(
                "deg(p_{}) = {} does not divide 2*Delta_{n} = {}",
                n + 1,
                lv[n + 1].degree,
                2 * big[n]
            ));
        }
    }
    if let Some(c) = &trace.certificates {
        if let Some(b) = &c.bound {
            if c.first_rational_level > b.bound_level as usize {
                return violated(format!(
                    "first rational level {} exceeds the bound {}",
                    c.first_rational_level, b.bound_level
                ));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_relation;
    use crate::poly::URational;

    fn level(n: usize, gen: &str, square: &str, kind: StepKind, witness: &str) -> LevelSpec {
        LevelSpec {
            n,
            gen: gen.into(),
            square: parse_relation(square).unwrap(),
            step: Step {
                kind,
                witness: parse_relation(witness).unwrap(),
            },
        }
    }

    pub(crate) fn pencil() -> TowerSpec {
        TowerSpec::new(
            2,
            2,
            "u",
            BottomPrime::Infinity,
            vec![
                level(2, "w", "u + t*u^2", StepKind::Inert, "w/u"),
                level(1, "z", "w", StepKind::Ramified, "z/u"),
                level(0, "y", "z + u", StepKind::Inert, "z/y"),
            ],
            Some(3),
            None,
        )
        .unwrap()
    }

    fn quasi_elliptic() -> TowerSpec {
        TowerSpec::new(
            2,
            2,
            "x",
            BottomPrime::Zero(parse_relation("x").unwrap()),
            vec![
                level(1, "z", "x + t", StepKind::Inert, "z"),
                level(0, "y", "(t + z^2)*z", StepKind::Ramified, "y"),
            ],
            None,
            None,
        )
        .unwrap()
    }

    type R = BivarRational<F2>;

    #[test]
    fn pencil_shadows() {
        let env = elaborate::<F2>(&pencil()).unwrap();
        let u = R::x();
        let t = R::t();
        assert_eq!(env.rep("z").unwrap(), &u.add(&t.mul(&u.pow(2))));
        assert_eq!(
            env.rep("y").unwrap(),
            &u.add(&t.mul(&u.pow(2))).add(&u.pow(4))
        );
        assert_eq!(env.eval(&Expr::ident("t"), 1).unwrap(), t.pow(4));
    }

    #[test]
    fn shadows_are_not_squares() {
        for spec in [pencil(), quasi_elliptic()] {
            let env = elaborate::<F2>(&spec).unwrap();
            for l in &spec.levels {
                assert!(env.rep(&l.gen).unwrap().sqrt().is_none(), "{}", l.gen);
            }
        }
    }

    #[test]
    fn tower_valuation_examples() {
        let spec = pencil();
        let env = elaborate::<F2>(&spec).unwrap();
        let zu = env.eval(&parse_relation("z/u").unwrap(), 1).unwrap();
        assert_eq!(
            tower_valuation(&zu, &RationalPrime::Infinity, 2, 2, 1),
            Ok(1)
        );
        let inv_u = env.eval(&parse_relation("1/u").unwrap(), 3).unwrap();
        assert_eq!(
            tower_valuation(&inv_u, &RationalPrime::Infinity, 0, 1, 3),
            Ok(1)
        );
        let spec = quasi_elliptic();
        let env = elaborate::<F2>(&spec).unwrap();
        let y = env.eval(&Expr::ident("y"), 0).unwrap();
        assert_eq!(
            tower_valuation(&y, &RationalPrime::x_adic(), 2, 2, 0),
            Ok(1)
        );
        assert!(matches!(
            tower_valuation(&y, &RationalPrime::x_adic(), 2, 1, 0),
            Err(TowerError::RamificationInconsistent { .. })
        ));
    }

    #[test]
    fn pencil_steps() {
        let spec = pencil();
        let env = elaborate::<F2>(&spec).unwrap();
        let inf = RationalPrime::Infinity;
        let w = env.eval(&parse_relation("w/u").unwrap(), 2).unwrap();
        let s = verify_step(StepKind::Inert, &w, &inf, 2, 3, 1, 0).unwrap();
        assert_eq!((s.e, s.f, s.residue_level), (1, 2, 1));
        assert_eq!(s.evidence, "t^(1/2)");
        let w = env.eval(&parse_relation("z/y").unwrap(), 0).unwrap();
        let s = verify_step(StepKind::Inert, &w, &inf, 0, 3, 2, 1).unwrap();
        assert_eq!(s.evidence, "t^(1/4)");
        // a ramified claim for an inert witness is rejected
        assert!(matches!(
            verify_step(StepKind::Ramified, &w, &inf, 0, 3, 2, 1),
            Err(TowerError::WitnessRejected { level: 0, .. })
        ));
    }

    #[test]
    fn recursion_examples() {
        let spec = pencil();
        let env = elaborate::<F2>(&spec).unwrap();
        let w = env.eval(&parse_relation("z/u").unwrap(), 1).unwrap();
        assert_eq!(
            delta_recursion_step(&w, &RationalPrime::Infinity, 0).unwrap(),
            (Some(1), Some(2))
        );
        // d((z/y)^8) = (1+tu)^2/(1+tu+u^3)^2 du has order 2 at infinity
        let w = env.eval(&parse_relation("z/y").unwrap(), 0).unwrap();
        assert_eq!(
            delta_recursion_step(&w, &RationalPrime::Infinity, 1).unwrap(),
            (Some(3), Some(2))
        );
        // exact differential: inadmissible
        assert_eq!(
            delta_recursion_step(&R::x().pow(2), &RationalPrime::x_adic(), 0).unwrap(),
            (None, None)
        );
    }

    #[test]
    fn fallback_examples() {
        assert_eq!(
            delta_constraint_fallback(1, 1, 3, 2, 0),
            Ok(FallbackOutcome::Resolved(3))
        );
        assert_eq!(
            delta_constraint_fallback(0, 0, 0, 2, 0),
            Ok(FallbackOutcome::Resolved(0))
        );
        assert_eq!(
            delta_constraint_fallback(1, 1, 4, 2, 0),
            Ok(FallbackOutcome::Unresolved { lower: 3, upper: 4 })
        );
        assert!(matches!(
            delta_constraint_fallback(1, 1, 2, 2, 0),
            Err(TowerError::Infeasible { .. })
        ));
    }

    #[test]
    fn pencil_trace() {
        let trace = analyze(&pencil()).unwrap();
        assert_eq!(trace.deltas(), Some(vec![3, 1, 0, 0]));
        assert_eq!(trace.big_deltas(), Some(vec![2, 1, 0]));
        assert_eq!(trace.degrees(), vec![4, 2, 2, 1]);
        let c = trace.certificates.as_ref().unwrap();
        assert_eq!(c.first_rational_level, 3);
        assert_eq!(c.attains_bound, Some(true));
        assert!(c.coprime_criterion);
        assert!(genus_drop_check(&trace, 3, 0));
        assert!(!genus_drop_check(&trace, 1, 0));
    }

    #[test]
    fn quasi_elliptic_trace() {
        let trace = analyze(&quasi_elliptic()).unwrap();
        assert_eq!(trace.delta0(), Some(1));
        assert_eq!(trace.degrees(), vec![2, 2, 1]);
        assert_eq!(trace.first_rational_level(), 2);
    }

    #[test]
    fn fallback_path() {
        // y^2 = x^2 + t: the witness y has an exact shadow x^2 + t, so the
        // recursion is inadmissible and the genus pins delta
        let mk = |g| {
            TowerSpec::new(
                2,
                2,
                "x",
                BottomPrime::Zero(parse_relation("x").unwrap()),
                vec![level(0, "y", "x^2 + t", StepKind::Inert, "y")],
                g,
                None,
            )
            .unwrap()
        };
        let trace = analyze(&mk(Some(0))).unwrap();
        assert_eq!(trace.deltas(), Some(vec![0, 0]));
        assert_eq!(
            trace.levels[0].method,
            Some(DeltaMethod::ConstraintFallback)
        );
        let trace = analyze(&mk(Some(2))).unwrap();
        assert!(!trace.resolved);
        assert_eq!(trace.levels[0].interval, Some((0, Some(2))));
        let trace = analyze(&mk(None)).unwrap();
        assert!(!trace.resolved);
    }

    #[test]
    fn recursion_beyond_genus_is_infeasible() {
        let mut spec = pencil();
        spec.genus_hint = Some(2);
        assert!(matches!(
            analyze(&spec),
            Err(TowerError::Infeasible { level: 0, .. })
        ));
    }

    #[test]
    fn spec_validation() {
        let l = |n| level(n, &format!("g{n}"), "x", StepKind::Inert, "x");
        let prime = BottomPrime::Infinity;
        assert!(matches!(
            TowerSpec::new(2, 2, "x", prime.clone(), vec![l(0), l(2)], None, None),
            Err(TowerError::NonContiguousLevels { .. })
        ));
        assert_eq!(
            TowerSpec::new(2, 2, "x", prime.clone(), vec![], None, None),
            Err(TowerError::Empty)
        );
        let dup = vec![
            level(1, "g", "x", StepKind::Inert, "g"),
            level(0, "g", "x", StepKind::Inert, "g"),
        ];
        assert!(matches!(
            TowerSpec::new(2, 2, "x", prime, dup, None, None),
            Err(TowerError::DuplicateSymbol(_))
        ));
    }

    #[test]
    fn scope_rules() {
        // a square may only use generators of strictly higher levels
        let spec = TowerSpec::new(
            2,
            2,
            "x",
            BottomPrime::Infinity,
            vec![
                level(1, "a", "x + b", StepKind::Inert, "a"),
                level(0, "b", "a", StepKind::Inert, "b"),
            ],
            None,
            None,
        )
        .unwrap();
        assert_eq!(
            elaborate::<F2>(&spec).err(),
            Some(TowerError::UndefinedSymbol {
                symbol: "b".into(),
                level: 2
            })
        );
    }

    #[test]
    fn bottom_prime_forms() {
        let mut spec = quasi_elliptic();
        spec.prime = BottomPrime::Zero(parse_relation("x + t").unwrap());
        let env = elaborate::<F2>(&spec).unwrap();
        assert_eq!(
            bottom_prime(&spec, &env).unwrap(),
            RationalPrime::Linear(URational::var())
        );
        spec.prime = BottomPrime::Zero(parse_relation("x^2 + t").unwrap());
        assert!(matches!(
            bottom_prime(&spec, &env),
            Err(TowerError::BottomNotRational(2))
        ));
    }

    #[test]
    fn unsupported_parameters() {
        let mut spec = pencil();
        spec.p = 3;
        assert_eq!(
            analyze(&spec),
            Err(TowerError::UnsupportedCharacteristic(3))
        );
        spec.p = 2;
        spec.q = 32;
        assert!(matches!(analyze(&spec), Err(TowerError::Field(_))));
        spec.q = 16;
        assert_eq!(analyze(&spec).unwrap().deltas(), Some(vec![3, 1, 0, 0]));
    }
}
