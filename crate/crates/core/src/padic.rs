//! Integer combinatorics behind the separability bound: p-adic valuations,
//! runs of consecutive p-powers and the partition invariant `tau_p`.
//!
//! Everything here works for an arbitrary prime `p` and uses exact integer
//! arithmetic only.

use serde::{Deserialize, Serialize};

use crate::error::CombinatoricsError;

/// Largest `d` accepted by [`tau_bruteforce`].
pub const BRUTEFORCE_LIMIT: u64 = 10_000;

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= p {
        if p.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

fn check_prime(p: u64) -> Result<(), CombinatoricsError> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(CombinatoricsError::NotPrime(p))
    }
}

/// Exponent of the largest power of `p` dividing `n`.
pub fn v_p(n: u64, p: u64) -> Result<u32, CombinatoricsError> {
    check_prime(p)?;
    if n == 0 {
        return Err(CombinatoricsError::ZeroValuation);
    }
    let mut n = n;
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    Ok(v)
}

/// Smallest `k` with `p^k >= n`, by repeated multiplication.
pub fn ceil_log(n: u64, p: u64) -> u32 {
    let mut k = 0;
    let mut pk: u128 = 1;
    while pk < n as u128 {
        pk *= p as u128;
        k += 1;
    }
    k
}

/// The sum `p^j + p^(j+1) + ... + p^i` of consecutive powers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PPowerRun {
    pub p: u64,
    pub j: u32,
    pub i: u32,
}

impl PPowerRun {
    pub fn new(p: u64, j: u32, i: u32) -> Result<Self, CombinatoricsError> {
        check_prime(p)?;
        if j > i {
            return Err(CombinatoricsError::Invariant(format!(
                "run P_{j}^{i} needs j <= i"
            )));
        }
        Ok(PPowerRun { p, j, i })
    }

    /// `(p^(i+1) - p^j)/(p - 1)`; `None` on overflow.
    pub fn value(&self) -> Option<u64> {
        let mut total: u64 = 0;
        let mut pk: u64 = self.p.checked_pow(self.j)?;
        for r in self.j..=self.i {
            total = total.checked_add(pk)?;
            if r < self.i {
                pk = pk.checked_mul(self.p)?;
            }
        }
        Some(total)
    }
}

/// The run `(j, i)` with `P_j^i = d`, if `d` is a sum of consecutive p-powers.
///
/// Such a run is unique: `j = v_p(d)` and `d/p^j` must be `1 + p + ... + p^(i-j)`.
pub fn consecutive_run_of(d: u64, p: u64) -> Result<Option<PPowerRun>, CombinatoricsError> {
    if d == 0 {
        return Err(CombinatoricsError::NonPositive);
    }
    let j = v_p(d, p)?;
    let mut rest = d / p.pow(j);
    let mut len = 0u32;
    // strip trailing 1s in base p
    while rest > 0 {
        if rest % p != 1 {
            return Ok(None);
        }
        rest /= p;
        len += 1;
    }
    Ok(Some(PPowerRun {
        p,
        j,
        i: j + len - 1,
    }))
}

/// Closed form of `tau_p(d)`: `i + 1` when `d = P_j^i`, otherwise the unique
/// `i` with `P_0^(i-1) < d < P_0^i`.
pub fn tau_closed(d: u64, p: u64) -> Result<u32, CombinatoricsError> {
    if let Some(run) = consecutive_run_of(d, p)? {
        return Ok(run.i + 1);
    }
    // d >= 2 here since 1 = P_0^0
    let mut i = 0u32;
    let mut full: u128 = 1; // P_0^i
    while full <= d as u128 {
        full = full * p as u128 + 1;
        i += 1;
    }
    Ok(i)
}

/// Partition `d_1 >= ... >= d_s` with `p * d_(k+1) <= d_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissiblePartition {
    pub p: u64,
    pub parts: Vec<u64>,
}

impl AdmissiblePartition {
    pub fn new(p: u64, parts: Vec<u64>) -> Result<Self, CombinatoricsError> {
        check_prime(p)?;
        if parts.is_empty() || parts.contains(&0) {
            return Err(CombinatoricsError::NonPositive);
        }
        if let Some(w) = parts.windows(2).find(|w| p * w[1] > w[0]) {
            return Err(CombinatoricsError::Invariant(format!(
                "parts {} and {} violate the decay condition",
                w[0], w[1]
            )));
        }
        Ok(AdmissiblePartition { p, parts })
    }

    pub fn total(&self) -> u64 {
        self.parts.iter().sum()
    }

    /// `s + min v_p(d_k)`.
    pub fn score(&self) -> u32 {
        let min_v = self
            .parts
            .iter()
            .map(|&d| v_p(d, self.p).expect("parts are positive"))
            .min()
            .unwrap_or(0);
        self.parts.len() as u32 + min_v
    }
}

/// `tau_p(d)` by exhaustive enumeration of admissible partitions.
pub fn tau_bruteforce(d: u64, p: u64) -> Result<u32, CombinatoricsError> {
    check_prime(p)?;
    if d == 0 {
        return Err(CombinatoricsError::NonPositive);
    }
    if d > BRUTEFORCE_LIMIT {
        return Err(CombinatoricsError::GuardExceeded {
            d,
            limit: BRUTEFORCE_LIMIT,
        });
    }
    let mut best = 0;
    let mut stack = Vec::new();
    enumerate(d, d, p, &mut stack, &mut |parts| {
        let min_v = parts.iter().map(|&x| v_p(x, p).unwrap()).min().unwrap();
        best = best.max(parts.len() as u32 + min_v);
    });
    Ok(best)
}

/// Visit every admissible partition of `rem` whose parts are at most `cap`.
fn enumerate(rem: u64, cap: u64, p: u64, stack: &mut Vec<u64>, visit: &mut impl FnMut(&[u64])) {
    if rem == 0 {
        visit(stack);
        return;
    }
    // the tail after a part of size m sums to less than m/(p-1), so
    // m must exceed rem*(p-1)/p
    let lower = (rem * (p - 1)) / p;
    for part in (lower.max(1)..=cap.min(rem)).rev() {
        let tail = rem - part;
        if tail > 0 && part < p {
            continue;
        }
        stack.push(part);
        enumerate(tail, part / p, p, stack, visit);
        stack.pop();
    }
}

/// Result of the separability bound for a singular prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub p: u64,
    pub delta: u64,
    pub sep: u64,
    /// `(2/(p-1)) * delta / sep`.
    pub d_prime: u64,
    /// Smallest level from which the restriction is guaranteed separable.
    pub bound_level: u32,
    pub consecutive_run: Option<(u32, u32)>,
    /// True when `d_prime` is not a run, so the bound improves by one.
    pub improved: bool,
}

/// Bound on `n` for which the restriction `p_n` of a singular prime with
/// geometric singularity degree `delta` and separable residue degree `sep`
/// is separable (rational when `sep = 1` and the prime is non-decomposed).
pub fn separability_bound(delta: u64, sep: u64, p: u64) -> Result<BoundReport, CombinatoricsError> {
    check_prime(p)?;
    if delta == 0 || sep == 0 {
        return Err(CombinatoricsError::NonPositive);
    }
    let half = (p - 1) / 2;
    if p > 2 && !delta.is_multiple_of(half) {
        return Err(CombinatoricsError::Invariant(format!(
            "delta = {delta} is not divisible by (p-1)/2 = {half}"
        )));
    }
    let scaled = if p == 2 { 2 * delta } else { delta / half };
    if scaled % sep != 0 {
        return Err(CombinatoricsError::Invariant(format!(
            "separable degree {sep} does not divide (2/(p-1))*delta = {scaled} \
             (it must divide the geometric singularity degree)"
        )));
    }
    let d_prime = scaled / sep;
    let run = consecutive_run_of(d_prime, p)?;
    Ok(BoundReport {
        p,
        delta,
        sep,
        d_prime,
        bound_level: tau_closed(d_prime, p)?,
        consecutive_run: run.map(|r| (r.j, r.i)),
        improved: run.is_none(),
    })
}

/// Split a prime over `K^sep`: `(count, each_degree, each_delta)`.
pub fn geometric_decomposition(
    total_degree: u64,
    sep: u64,
    delta: u64,
) -> Result<(u64, u64, u64), CombinatoricsError> {
    if total_degree == 0 || sep == 0 {
        return Err(CombinatoricsError::NonPositive);
    }
    if !total_degree.is_multiple_of(sep) || !delta.is_multiple_of(sep) {
        return Err(CombinatoricsError::Invariant(format!(
            "separable degree {sep} must divide both the degree {total_degree} and delta {delta} \
             (primes over K^sep share delta/[k:K]_sep)"
        )));
    }
    Ok((sep, total_degree / sep, delta / sep))
}
