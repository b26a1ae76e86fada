//! The two families of towers attaining the separability bound, and the sweep
//! that checks them against the bound for every small singularity degree.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{CombinatoricsError, TowerError};
use crate::expr::{parse_relation, Expr};
use crate::padic::{self, PPowerRun};
use crate::tower::{
    analyze, BottomPrime, ExpectedInvariants, LevelSpec, Step, StepKind, TowerSpec, TowerTrace,
};

pub const MAX_FAMILY_I: u32 = 8;
pub const MAX_FAMILY_L: u64 = 256;
pub const MAX_SWEEP_D: u64 = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum FamilyParams {
    /// `i > j >= 0`, `l >= 0`.
    A {
        i: u32,
        j: u32,
        l: u64,
    },
    B {
        i: u32,
    },
}

fn p2(j: u32, i: u32) -> u64 {
    PPowerRun::new(2, j, i)
        .ok()
        .and_then(|r| r.value())
        .expect("small run")
}

impl FamilyParams {
    pub fn target_delta(&self) -> u64 {
        match *self {
            FamilyParams::A { i, j, l } => p2(j, i) + l * (1 << (j + 1)),
            FamilyParams::B { i } => 1 << i,
        }
    }

    pub fn predicted_first_rational_level(&self) -> usize {
        match *self {
            FamilyParams::A { i, .. } | FamilyParams::B { i } => i as usize + 2,
        }
    }

    pub fn build(&self) -> Result<TowerSpec, TowerError> {
        match *self {
            FamilyParams::A { i, j, l } => build_family_a(i, j, l),
            FamilyParams::B { i } => build_family_b(i),
        }
    }
}

/// `z`, `z2`, `z4`, ... naming `z^(2^s)`.
fn power_name(base: &str, s: u32) -> String {
    if s == 0 {
        base.to_string()
    } else {
        format!("{base}{}", 1u64 << s)
    }
}

fn level(n: usize, gen: &str, square: &str, kind: StepKind) -> LevelSpec {
    LevelSpec {
        n,
        gen: gen.to_string(),
        square: parse_relation(square).expect("generated relation parses"),
        step: Step {
            kind,
            witness: Expr::ident(gen),
        },
    }
}

fn family_spec(levels: Vec<LevelSpec>, params: FamilyParams) -> Result<TowerSpec, TowerError> {
    TowerSpec::new(
        2,
        2,
        "x",
        BottomPrime::Zero(Expr::ident("x")),
        levels,
        None,
        Some(ExpectedInvariants {
            delta0: Some(params.target_delta()),
            first_rational_level: Some(params.predicted_first_rational_level()),
            ..ExpectedInvariants::default()
        }),
    )
}

/// Inert levels `top, top-1, ..., top-len+1` with `z_(2^(len-1))^2 = x + t`
/// and each lower generator squaring to the one above; the last one is `z`.
fn frobenius_segment(top: usize, len: u32) -> Vec<LevelSpec> {
    (0..len)
        .map(|k| {
            let s = len - 1 - k;
            let square = if k == 0 {
                "x + t".to_string()
            } else {
                power_name("z", s + 1)
            };
            level(
                top - k as usize,
                &power_name("z", s),
                &square,
                StepKind::Inert,
            )
        })
        .collect()
}

/// `(t + z^(2^(j+1))) z + y^(2^(i-j)) = 0` with `z^(2^(j+1)) = x + t` and
/// `u^2 = z + y^(1+2l)`.
pub fn build_family_a(i: u32, j: u32, l: u64) -> Result<TowerSpec, TowerError> {
    if j >= i {
        return Err(TowerError::Guard(format!(
            "family A needs i > j, got i = {i}, j = {j}"
        )));
    }
    if i > MAX_FAMILY_I || l > MAX_FAMILY_L {
        return Err(TowerError::Guard(format!(
            "family A limited to i <= {MAX_FAMILY_I}, l <= {MAX_FAMILY_L}"
        )));
    }
    let top = i as usize + 2;
    let mut levels = frobenius_segment(top - 1, j + 1);
    let ramified = (i - j) as usize;
    for n in (1..=ramified).rev() {
        let square = if n == ramified {
            format!("(t + z^{})*z", 1u64 << (j + 1))
        } else {
            power_name("y", n as u32)
        };
        levels.push(level(
            n,
            &power_name("y", n as u32 - 1),
            &square,
            StepKind::Ramified,
        ));
    }
    let square = if l == 0 {
        "z + y".to_string()
    } else {
        format!("z + y^{}", 1 + 2 * l)
    };
    levels.push(level(0, "u", &square, StepKind::Inert));
    family_spec(levels, FamilyParams::A { i, j, l })
}

/// `y^2 = (t + z^(2^(i+1))) z` with `z^(2^(i+1)) = x + t`.
pub fn build_family_b(i: u32) -> Result<TowerSpec, TowerError> {
    if i > MAX_FAMILY_I {
        return Err(TowerError::Guard(format!(
            "family B limited to i <= {MAX_FAMILY_I}"
        )));
    }
    let top = i as usize + 2;
    let mut levels = frobenius_segment(top - 1, i + 1);
    levels.push(level(
        0,
        "y",
        &format!("(t + z^{})*z", 1u64 << (i + 1)),
        StepKind::Ramified,
    ));
    family_spec(levels, FamilyParams::B { i })
}

/// Family parameters whose tower has singularity degree `d`.
pub fn decompose_target(d: u64) -> Result<FamilyParams, TowerError> {
    if d == 0 {
        return Err(CombinatoricsError::NonPositive.into());
    }
    if let Some(run) = padic::consecutive_run_of(d, 2)? {
        return Ok(if run.j < run.i {
            FamilyParams::A {
                i: run.i,
                j: run.j,
                l: 0,
            }
        } else {
            FamilyParams::B { i: run.i }
        });
    }
    // P_0^(i-1) < d < P_0^i
    let i = (1..64).find(|&i| d < p2(0, i)).expect("d fits in u64");
    for j in 0..=i.saturating_sub(2) {
        let base = p2(j, i - 1);
        let step = 1u64 << (j + 1);
        if d % step == 1 << j && d >= base {
            return Ok(FamilyParams::A {
                i: i - 1,
                j,
                l: (d - base) / step,
            });
        }
    }
    Err(TowerError::InvariantViolated(format!(
        "no family decomposition found for d = {d}"
    )))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRow {
    pub d: u64,
    pub params: FamilyParams,
    pub delta0: Option<u64>,
    pub first_rational_level: usize,
    /// `τ_2(2d)`.
    pub bound_level: u32,
    /// `deg(p_(first_rational_level - 1))`.
    pub degree_below: Option<u64>,
    pub failures: Vec<String>,
    pub trace: TowerTrace,
}

impl SweepRow {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(SweepRow::pass)
    }

    pub fn first_failure(&self) -> Option<&SweepRow> {
        self.rows.iter().find(|r| !r.pass())
    }
}

fn sweep_one(d: u64) -> Result<SweepRow, TowerError> {
    let params = decompose_target(d)?;
    let trace = analyze(&params.build()?)?;
    let bound_level = padic::tau_closed(2 * d, 2)?;
    let first_rational_level = trace.first_rational_level();
    let degree_below = first_rational_level
        .checked_sub(1)
        .map(|n| trace.levels[n].degree);
    let mut failures = Vec::new();
    if trace.delta0() != Some(d) {
        failures.push(format!("delta_0 = {:?}, expected {d}", trace.delta0()));
    }
    if first_rational_level != bound_level as usize {
        failures.push(format!(
            "first rational level {first_rational_level} != tau_2(2d) = {bound_level}"
        ));
    }
    if let Some(c) = &trace.certificates {
        if c.bound.as_ref().map(|b| b.bound_level) != Some(bound_level) {
            failures.push("certificate bound differs from tau_2(2d)".into());
        }
    }
    if bound_level != padic::tau_closed(d, 2)? + 1 {
        failures.push("tau_2(2d) != tau_2(d) + 1".into());
    }
    if degree_below != Some(2) {
        failures.push(format!(
            "deg below the first rational level is {degree_below:?}, expected 2"
        ));
    }
    Ok(SweepRow {
        d,
        params,
        delta0: trace.delta0(),
        first_rational_level,
        bound_level,
        degree_below,
        failures,
        trace,
    })
}

/// Build and analyze the family tower for every `d = 1..=d_max` on `jobs` threads.
pub fn sharpness_sweep(d_max: u64, jobs: usize) -> Result<SweepReport, TowerError> {
    if d_max > MAX_SWEEP_D {
        return Err(TowerError::Guard(format!(
            "sweep limited to d <= {MAX_SWEEP_D}"
        )));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| TowerError::Guard(e.to_string()))?;
    let rows = pool.install(|| {
        (1..=d_max)
            .into_par_iter()
            .map(sweep_one)
            .collect::<Result<Vec<_>, _>>()
    })?;
    Ok(SweepReport { rows })
}
