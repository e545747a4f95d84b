//! Necessary conditions for existence, at the `(n, d)` level and on a concrete
//! generator.
//!
//! Each predicate has a stable identifier. A predicate whose guard does not
//! fire reports [`Status::NotApplicable`] rather than passing, so a report
//! shows exactly which rungs of the argument were used.

use serde::Serialize;
use thiserror::Error;

use crate::circulant::{row_sums, target4, Generator};
use crate::numtheory::{divisors, exact_sqrt, is_prime};

pub const PARITY: &str = "prop-d-parity";
pub const EVEN_ORDER_BOUND: &str = "prop-d-even-order";
pub const ODD_ORDER_FORCED: &str = "prop-d-odd-order";
pub const K_FORM: &str = "prop-nd-k";
pub const PRIME_ORDER: &str = "corol-prime";
pub const MOD4_DIAGONAL: &str = "prop-d-mod4";
pub const EVEN_DIAGONAL: &str = "thm-d-even";
pub const ODD_DIAGONAL_ORDER: &str = "prop-d-odd-mod4";

pub const SUM_SAME: &str = "sum-same";
pub const SUM_ALTERNATING: &str = "sum-alternating";
pub const FORCED_SYMMETRY: &str = "prop-sym";
pub const ODD_INDEX_SUM: &str = "prop-sum-odd";
pub const NONSYMMETRIC: &str = "prop-nonsym";
pub const SYMMETRIC_DIVISIBILITY: &str = "prop-symmetric-divisibility";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConditionError {
    #[error("order {0} is too small, need n >= 2")]
    OrderTooSmall(usize),
    #[error("order {0} is odd; integer diagonals only occur at even order")]
    OddOrder(usize),
    #[error("diagonal d = {0}/2 is not an odd integer")]
    NotOddInteger(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

impl Status {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::NotApplicable => "not-applicable",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub condition: &'static str,
    pub status: Status,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub n: usize,
    pub d2: u64,
    pub verdicts: Vec<Verdict>,
    pub admissible: bool,
}

impl ConditionReport {
    fn new(n: usize, d2: u64) -> Self {
        Self {
            n,
            d2,
            verdicts: Vec::new(),
            admissible: true,
        }
    }

    fn push(&mut self, condition: &'static str, status: Status, detail: impl Into<String>) {
        debug_assert!(self.verdicts.iter().all(|v| v.condition != condition));
        if status == Status::Fail {
            self.admissible = false;
        }
        self.verdicts.push(Verdict {
            condition,
            status,
            detail: detail.into(),
        });
    }

    fn skip(&mut self, condition: &'static str, why: &str) {
        self.push(condition, Status::NotApplicable, why);
    }

    pub fn status(&self, condition: &str) -> Option<Status> {
        self.verdicts
            .iter()
            .find(|v| v.condition == condition)
            .map(|v| v.status)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Verdict> {
        self.verdicts.iter().filter(|v| v.status == Status::Fail)
    }
}

/// Renders `d2 / 2` as `d` or `d.5`.
pub fn format_d(d2: u64) -> String {
    if d2 % 2 == 0 {
        format!("{}", d2 / 2)
    } else {
        format!("{}.5", d2 / 2)
    }
}

/// A value `k >= 1` with `n = k(2d + k) + 1` for integer `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct KCandidate {
    pub k: u64,
    pub d2: u64,
}

impl KCandidate {
    pub fn d(&self) -> u64 {
        self.d2 / 2
    }
}

/// Every `k` with `k | n - 1` and `d = ((n-1)/k - k)/2` a non-negative integer.
pub fn k_candidates(n: usize) -> Result<Vec<KCandidate>, ConditionError> {
    if n < 2 {
        return Err(ConditionError::OrderTooSmall(n));
    }
    if n % 2 == 1 {
        return Err(ConditionError::OddOrder(n));
    }
    let m = (n - 1) as u64;
    let out = divisors(m)
        .expect("n - 1 >= 1")
        .into_iter()
        .filter_map(|k| {
            let q = m / k;
            // 2d = q - k must be even and non-negative
            (q >= k && (q - k) % 2 == 0).then(|| KCandidate { k, d2: q - k })
        })
        .collect();
    Ok(out)
}

/// Existence filters for the pair `(n, d)` with `d = d2 / 2`.
pub fn check_pair(n: usize, d2: u64) -> Result<ConditionReport, ConditionError> {
    if n < 2 {
        return Err(ConditionError::OrderTooSmall(n));
    }
    let mut rep = ConditionReport::new(n, d2);
    let n64 = n as u64;
    let d_integer = d2 % 2 == 0;
    let d = d2 / 2;
    let n_even = n % 2 == 0;
    let maximal = n64 == d2 + 2;

    // d is an integer exactly at even order; a half-integer pins n = 2(d+1)
    let ok = d_integer == n_even && (d_integer || maximal);
    rep.push(
        PARITY,
        Status::from_bool(ok),
        format!(
            "d={} is {}, n={} is {}{}",
            format_d(d2),
            if d_integer { "an integer" } else { "a half-integer" },
            n,
            if n_even { "even" } else { "odd" },
            if !d_integer { format!(", 2(d+1)={}", d2 + 2) } else { String::new() }
        ),
    );

    if n_even {
        let half_minus_one = n64 / 2 - 1;
        let ok = d_integer && d <= half_minus_one && d % 2 == half_minus_one % 2;
        rep.push(
            EVEN_ORDER_BOUND,
            Status::from_bool(ok),
            format!("need integer d <= n/2-1={half_minus_one} with d ≡ n/2-1 (mod 2); d={}", format_d(d2)),
        );
    } else {
        rep.skip(EVEN_ORDER_BOUND, "n odd");
    }

    if !n_even {
        rep.push(
            ODD_ORDER_FORCED,
            Status::from_bool(maximal),
            format!("odd n forces d=n/2-1={}; d={}", format_d(n64 - 2), format_d(d2)),
        );
    } else {
        rep.skip(ODD_ORDER_FORCED, "n even");
    }

    if d_integer {
        // n - 1 = k(2d + k) has at most one positive root
        let found = (1..)
            .take_while(|&k: &u64| k * (2 * d + k) < n64)
            .find(|&k| k * (2 * d + k) + 1 == n64);
        let detail = match found {
            Some(k) => format!("k={k}: {k}(2·{d}+{k})+1={n}"),
            None => format!("no k >= 1 with k(2·{d}+k)+1={n}"),
        };
        rep.push(K_FORM, Status::from_bool(found.is_some()), detail);
    } else {
        rep.skip(K_FORM, "d not an integer");
    }

    if is_prime(n64 - 1) {
        rep.push(
            PRIME_ORDER,
            Status::from_bool(maximal),
            format!("n-1={} prime forces d=n/2-1={}", n - 1, format_d(n64 - 2)),
        );
    } else {
        rep.skip(PRIME_ORDER, "n-1 not prime");
    }

    if n % 4 == 2 {
        let target = (n64 / 2 - 1) % 4;
        let ok = d_integer && d % 4 == target;
        rep.push(
            MOD4_DIAGONAL,
            Status::from_bool(ok),
            format!("n≡2 (mod 4) needs d ≡ {target} (mod 4); d={}", format_d(d2)),
        );
    } else {
        rep.skip(MOD4_DIAGONAL, "n not ≡ 2 (mod 4)");
    }

    if d_integer && d % 2 == 0 {
        rep.push(
            EVEN_DIAGONAL,
            Status::from_bool(maximal),
            format!("even d={d} forces n=2(d+1)={}", d2 + 2),
        );
    } else {
        rep.skip(EVEN_DIAGONAL, "d not an even integer");
    }

    if d_integer && d % 2 == 1 {
        rep.push(
            ODD_DIAGONAL_ORDER,
            Status::from_bool(n % 4 == 0),
            format!("odd d={d} needs n ≡ 0 (mod 4); n mod 4 = {}", n % 4),
        );
    } else {
        rep.skip(ODD_DIAGONAL_ORDER, "d not an odd integer");
    }

    Ok(rep)
}

/// For a symmetric solution with odd integer `d`: `2 sqrt(d² + n - 1)` divides
/// `d² - 1`. A non-square `d² + n - 1` already rules the pair out.
pub fn symmetric_divisibility(n: usize, d2: u64) -> Result<bool, ConditionError> {
    if d2 % 2 != 0 || (d2 / 2) % 2 != 1 {
        return Err(ConditionError::NotOddInteger(d2));
    }
    let d = d2 / 2;
    let Some(root) = exact_sqrt(d * d + n as u64 - 1) else {
        return Ok(false);
    };
    Ok((d * d - 1) % (2 * root) == 0)
}

/// Generator-level necessary conditions. Every orthogonal generator passes
/// all applicable ones; a non-orthogonal generator may fail some.
pub fn check_generator(g: &Generator) -> ConditionReport {
    let n = g.order();
    let d2 = g.d2();
    let mut rep = ConditionReport::new(n, d2);
    let t4 = target4(n, d2);
    let sums = row_sums(g);
    let symmetric = g.is_symmetric();

    rep.push(
        SUM_SAME,
        Status::from_bool(sums.same2 * sums.same2 == t4),
        format!("(2Σc)²={} vs 4(d²+n-1)={t4}", sums.same2 * sums.same2),
    );
    match sums.alternating2 {
        Some(a) => rep.push(
            SUM_ALTERNATING,
            Status::from_bool(a * a == t4),
            format!("(2Σ(-1)^j c)²={} vs {t4}", a * a),
        ),
        None => rep.skip(SUM_ALTERNATING, "n odd"),
    }

    if n % 4 == 2 {
        rep.push(
            FORCED_SYMMETRY,
            Status::from_bool(symmetric),
            if symmetric {
                "c_j = c_{n-j} for all j".to_string()
            } else {
                let j = (1..n).find(|&j| g.sign(j) != g.sign(n - j)).unwrap();
                format!("c_{j} != c_{}", n - j)
            },
        );
        let odd2: i64 = (1..=n / 2).map(|j| 2 * g.sign(2 * j - 1) as i64).sum();
        rep.push(
            ODD_INDEX_SUM,
            Status::from_bool(odd2 * odd2 == t4),
            format!("(2Σ c_odd)²={} vs {t4}", odd2 * odd2),
        );
    } else {
        rep.skip(FORCED_SYMMETRY, "n not ≡ 2 (mod 4)");
        rep.skip(ODD_INDEX_SUM, "n not ≡ 2 (mod 4)");
    }

    let odd_d = d2 % 2 == 0 && (d2 / 2) % 2 == 1;
    if symmetric {
        rep.skip(NONSYMMETRIC, "generator symmetric");
    } else {
        rep.push(
            NONSYMMETRIC,
            Status::from_bool(odd_d && n % 4 == 0),
            format!("non-symmetric needs odd d and 4 | n; d={}, n={n}", format_d(d2)),
        );
    }

    if symmetric && odd_d {
        let ok = symmetric_divisibility(n, d2).expect("odd d checked");
        rep.push(
            SYMMETRIC_DIVISIBILITY,
            Status::from_bool(ok),
            format!("2·sqrt(d²+n-1) | d²-1 with d={}", d2 / 2),
        );
    } else {
        rep.skip(SYMMETRIC_DIVISIBILITY, "needs a symmetric generator with odd d");
    }

    rep
}
