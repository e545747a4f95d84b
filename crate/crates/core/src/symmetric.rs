//! Exclusion machinery for symmetric solutions with odd `d`.
//!
//! A symmetric solution with `n = k(2d + k) + 1`, `k > 1`, forces
//! `(k+1)/2 = tu`, `(k-1)/2 = wz` with `w < t` and `n = 4tz(2tu - 1 - uw)`, and
//! also `k + 1 <= 2^r` where `r` counts the distinct primes of `n`. The audit
//! walks every odd `k` and reports the candidate orders that survive the
//! inequality. Survivors are then killed by fixing `c_m` on the divisors of
//! `n` through the Möbius function and trying every remaining assignment.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::circulant::{is_orthogonal, Generator};
use crate::numtheory::{divisors, factorize, gcd, mobius, primorial, Factorization, NumberTheoryError};

/// Largest `k` the audit is meant for; beyond it the primorial bound applies.
pub const AUDIT_K_MAX: u64 = 127;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymmetricError {
    #[error("k = {0} must be odd and at least 3")]
    EvenK(u64),
    #[error("no k >= 1 with n = k(2d + k) + 1 for n = {n}, d2 = {d2}")]
    NoK { n: u64, d2: u64 },
    #[error("d2 = {0} is not twice an odd integer")]
    NotOddInteger(u64),
    #[error("s = {0} is not supported (only s = 0 and s = 1 have a known table structure)")]
    UnsupportedS(u64),
    #[error(transparent)]
    NumberTheory(#[from] NumberTheoryError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct TuwzTuple {
    pub t: u64,
    pub u: u64,
    pub w: u64,
    pub z: u64,
}

impl TuwzTuple {
    pub fn k(&self) -> u64 {
        2 * self.t * self.u - 1
    }
}

/// All `(t, u, w, z)` with `tu = (k+1)/2`, `wz = (k-1)/2`, `w < t`.
/// Ordered by `t` descending, then `w` descending.
pub fn enumerate_tuwz(k: u64) -> Result<Vec<TuwzTuple>, SymmetricError> {
    if k < 3 || k % 2 == 0 {
        return Err(SymmetricError::EvenK(k));
    }
    let plus = (k + 1) / 2;
    let minus = (k - 1) / 2;
    let mut out = Vec::new();
    for t in divisors(plus)?.into_iter().rev() {
        for w in divisors(minus)?.into_iter().rev() {
            if w < t {
                out.push(TuwzTuple { t, u: plus / t, w, z: minus / w });
            }
        }
    }
    Ok(out)
}

/// `n = 4tz(2tu - 1 - uw)`.
pub fn candidate_order(tuple: &TuwzTuple) -> u64 {
    let TuwzTuple { t, u, w, z } = *tuple;
    4 * t * z * (2 * t * u - 1 - u * w)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KAuditRow {
    pub k: u64,
    pub tuple: TuwzTuple,
    pub n: u64,
    pub factorization: Factorization,
    pub r: u32,
    /// `k + 1 > 2^r`.
    pub passes: bool,
    pub d2: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KAudit {
    pub k_max: u64,
    pub rows: Vec<KAuditRow>,
}

impl KAudit {
    pub fn exceptions(&self) -> impl Iterator<Item = &KAuditRow> {
        self.rows.iter().filter(|r| !r.passes)
    }
}

/// One row per odd `k` in `3..=k_max` and per tuple.
pub fn k_audit(k_max: u64) -> KAudit {
    if k_max > AUDIT_K_MAX {
        log::warn!("k_max = {k_max} is beyond the audited range 3..={AUDIT_K_MAX}");
    }
    let mut rows = Vec::new();
    for k in (3..=k_max).step_by(2) {
        for tuple in enumerate_tuwz(k).expect("odd k >= 3") {
            let n = candidate_order(&tuple);
            let factorization = factorize(n).expect("n > 0");
            let r = factorization.r();
            // d + k = 2tz
            let d = 2 * tuple.t * tuple.z - k;
            rows.push(KAuditRow {
                k,
                tuple,
                n,
                r,
                passes: (k + 1) > (1u64 << r),
                d2: 2 * d,
                factorization,
            });
        }
    }
    KAudit { k_max, rows }
}

/// `2 p_r# > 8^r` for every `r` in `r_min..=r_max`, i.e. `∛(2 p_r#) > 2^r`.
///
/// This is the cube-root bound in integer form. Printed forms of it sometimes
/// quote a wrong power of 8 for `r = 8`; the exact comparison here uses `8^r`.
pub fn k_large_check(r_min: u32, r_max: u32) -> Result<bool, SymmetricError> {
    if r_min < 8 || r_min > r_max || r_max > 20 {
        let bad = if r_min < 8 || r_min > r_max { r_min } else { r_max };
        return Err(NumberTheoryError::OutOfRange(bad).into());
    }
    let mut ok = true;
    for r in r_min..=r_max {
        ok &= 2 * primorial(r)? > 8u128.pow(r);
    }
    Ok(ok)
}

/// Outcome of solving `d + k = |d - 1 + 2^r - 2s|` for `s`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SSolution {
    pub n: u64,
    pub d2: u64,
    pub k: u64,
    pub r: u32,
    /// Proper divisors `m` with `μ(n/m) != 0`; `s` cannot exceed their count.
    pub available: u64,
    pub feasible: Vec<u64>,
    /// Candidate values with the reason they were dropped.
    pub rejected: Vec<(i64, String)>,
}

/// The `k` with `n = k(2d + k) + 1`, for integer `d = d2/2`.
fn find_k(n: u64, d2: u64) -> Option<u64> {
    let d = d2 / 2;
    (1..).map(|k| (k, k * (2 * d + k) + 1)).take_while(|&(_, v)| v <= n).find(|&(_, v)| v == n).map(|(k, _)| k)
}

fn odd_d(d2: u64) -> Result<u64, SymmetricError> {
    if d2 % 4 != 2 {
        return Err(SymmetricError::NotOddInteger(d2));
    }
    Ok(d2 / 2)
}

pub fn solve_s(n: u64, d2: u64) -> Result<SSolution, SymmetricError> {
    let d = odd_d(d2)? as i64;
    let k = find_k(n, d2).ok_or(SymmetricError::NoK { n, d2 })?;
    let r = factorize(n)?.r();
    let available = mobius_divisors(n)?.len() as u64;
    debug_assert_eq!(available + 1, 1 << r);
    let pow = 1i64 << r;
    let ki = k as i64;
    // d - 1 + 2^r - 2s = ±(d + k)
    let candidates = [(pow - 1 - ki), (2 * d + pow - 1 + ki)];
    let mut feasible = Vec::new();
    let mut rejected = Vec::new();
    for twice in candidates {
        if twice % 2 != 0 {
            rejected.push((twice, "2s is odd".to_string()));
            continue;
        }
        let s = twice / 2;
        if s < 0 {
            rejected.push((s, "negative".to_string()));
        } else if s as u64 > available {
            rejected.push((s, format!("exceeds the {available} divisors with μ(n/m) != 0")));
        } else if !feasible.contains(&(s as u64)) {
            feasible.push(s as u64);
        }
    }
    feasible.sort_unstable();
    Ok(SSolution { n, d2, k, r, available, feasible, rejected })
}

/// Proper divisors `m` of `n` with `μ(n/m) != 0`, paired with `μ(n/m)`.
fn mobius_divisors(n: u64) -> Result<Vec<(u64, i8)>, NumberTheoryError> {
    let mut out = Vec::new();
    for m in divisors(n)? {
        if m < n {
            let mu = mobius(n / m)?;
            if mu != 0 {
                out.push((m, mu));
            }
        }
    }
    Ok(out)
}

/// Sign assignment on the proper divisors of `n`, extended to every index by
/// `c_j = c_{gcd(j, n)}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstraintTable {
    pub n: u64,
    pub d2: u64,
    pub s: u64,
    /// `m -> c_m` on divisors with `μ(n/m) != 0`.
    pub fixed: BTreeMap<u64, i8>,
    /// Divisors with `μ(n/m) = 0`, ascending; these are free parameters.
    pub free: Vec<u64>,
    /// Divisors carrying the b-vector (s = 1 only).
    pub b_positions: Vec<u64>,
    /// The divisor whose `b_m` is `-1` (s = 1 only).
    pub flipped: Option<u64>,
}

impl ConstraintTable {
    pub fn case_count(&self) -> u64 {
        1 << self.free.len()
    }

    /// `c_m` on every proper divisor for one free-parameter assignment; bit `i`
    /// set means `free[i]` is `-1`.
    pub fn divisor_signs(&self, assignment: u64) -> BTreeMap<u64, i8> {
        let mut signs = self.fixed.clone();
        for (i, &m) in self.free.iter().enumerate() {
            signs.insert(m, if assignment >> i & 1 == 1 { -1 } else { 1 });
        }
        signs
    }

    pub fn expand(&self, assignment: u64) -> Generator {
        let signs = self.divisor_signs(assignment);
        let n = self.n;
        Generator::from_fn(n as usize, self.d2 as i64, |j| signs[&gcd(j as u64, n)]).expect("valid shape")
    }
}

pub fn build_constraint_table(n: u64, d2: u64, s: u64) -> Result<Vec<ConstraintTable>, SymmetricError> {
    if s >= 2 {
        return Err(SymmetricError::UnsupportedS(s));
    }
    let mu_divs = mobius_divisors(n)?;
    let free: Vec<u64> = divisors(n)?
        .into_iter()
        .filter(|&m| m < n && mobius(n / m) == Ok(0))
        .collect();
    let base: BTreeMap<u64, i8> = mu_divs.iter().copied().collect();
    if s == 0 {
        return Ok(vec![ConstraintTable {
            n,
            d2,
            s,
            fixed: base,
            free,
            b_positions: Vec::new(),
            flipped: None,
        }]);
    }
    let b_positions: Vec<u64> = mu_divs.iter().map(|&(m, _)| m).collect();
    Ok(b_positions
        .iter()
        .map(|&m0| {
            let mut fixed = base.clone();
            *fixed.get_mut(&m0).expect("listed") *= -1;
            ConstraintTable {
                n,
                d2,
                s,
                fixed,
                free: free.clone(),
                b_positions: b_positions.clone(),
                flipped: Some(m0),
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Survivor {
    /// Global case number: table index (b placement) outermost, then the
    /// free-parameter assignment.
    pub case: u64,
    pub s: u64,
    pub generator: Generator,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EliminationReport {
    pub n: u64,
    pub d2: u64,
    pub k: u64,
    pub r: u32,
    pub s_values: Vec<u64>,
    pub tables: usize,
    pub cases: u64,
    pub survivors: Vec<Survivor>,
}

/// Every table assignment for every feasible `s`, expanded and tested.
pub fn eliminate_case(n: u64, d2: u64) -> Result<EliminationReport, SymmetricError> {
    let sol = solve_s(n, d2)?;
    let mut tables = Vec::new();
    for &s in &sol.feasible {
        tables.extend(build_constraint_table(n, d2, s)?);
    }
    let mut survivors = Vec::new();
    let mut cases = 0;
    for table in &tables {
        let per = table.case_count();
        let offset = cases;
        let mut found: Vec<Survivor> = (0..per)
            .into_par_iter()
            .filter_map(|a| {
                let g = table.expand(a);
                is_orthogonal(&g).then(|| Survivor { case: offset + a, s: table.s, generator: g })
            })
            .collect();
        found.sort_by_key(|s| s.case);
        survivors.extend(found);
        cases += per;
    }
    log::info!("eliminate n={n} d2={d2}: {cases} cases, {} survivors", survivors.len());
    Ok(EliminationReport {
        n,
        d2,
        k: sol.k,
        r: sol.r,
        s_values: sol.feasible,
        tables: tables.len(),
        cases,
        survivors,
    })
}
