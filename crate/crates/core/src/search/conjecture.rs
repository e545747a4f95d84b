//! Sweep over all admissible `(n, d)` up to a bound: maximal-`d` pairs come
//! from the constructions, every other admissible pair is searched.

use serde::Serialize;

use super::{dfs_enumerate, SearchError, SearchOptions, SolutionRecord, Source};
use crate::conditions::check_pair;
use crate::constructions::enumerate_max_d;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum PairOutcome {
    Constructed { count: usize },
    Searched { count: usize, nodes: u64 },
    Unresolved { nodes: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairResult {
    pub n: usize,
    pub d2: u64,
    #[serde(flatten)]
    pub outcome: PairOutcome,
    #[serde(skip)]
    pub solutions: Vec<SolutionRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjectureReport {
    pub n_max: usize,
    pub pairs: Vec<PairResult>,
}

impl ConjectureReport {
    /// Pairs with `n != 2(d + 1)` that went to the search.
    pub fn searched(&self) -> impl Iterator<Item = &PairResult> {
        self.pairs.iter().filter(|p| !matches!(p.outcome, PairOutcome::Constructed { .. }))
    }

    pub fn unresolved(&self) -> impl Iterator<Item = &PairResult> {
        self.pairs.iter().filter(|p| matches!(p.outcome, PairOutcome::Unresolved { .. }))
    }

    /// No solution off the maximal diagonal among the resolved pairs.
    pub fn holds_on_resolved(&self) -> bool {
        self.pairs.iter().all(|p| !matches!(p.outcome, PairOutcome::Searched { count, .. } if count > 0))
    }

    /// Holds and nothing was left unresolved.
    pub fn holds(&self) -> bool {
        self.holds_on_resolved() && self.unresolved().next().is_none()
    }
}

/// Admissible pairs `(n, d2)` for `2 <= n <= n_max`, ascending.
pub fn admissible_pairs(n_max: usize) -> Vec<(usize, u64)> {
    let mut out = Vec::new();
    for n in 2..=n_max {
        for d2 in 0..=n as u64 {
            if check_pair(n, d2).expect("n >= 2").admissible {
                out.push((n, d2));
            }
        }
    }
    out
}

pub fn verify_conjecture(n_max: usize, opts: &SearchOptions) -> Result<ConjectureReport, SearchError> {
    let mut pairs = Vec::new();
    for (n, d2) in admissible_pairs(n_max) {
        let result = if d2 + 2 == n as u64 {
            let solutions: Vec<SolutionRecord> = enumerate_max_d(n)
                .into_iter()
                .map(|g| SolutionRecord::new(g, Source::Constructed))
                .collect();
            PairResult {
                n,
                d2,
                outcome: PairOutcome::Constructed { count: solutions.len() },
                solutions,
            }
        } else {
            log::info!("conjecture: searching n={n} d2={d2}");
            match dfs_enumerate(n, d2, opts) {
                Ok(rep) => PairResult {
                    n,
                    d2,
                    outcome: PairOutcome::Searched {
                        count: rep.solutions.len(),
                        nodes: rep.nodes,
                    },
                    solutions: rep.solutions,
                },
                Err(SearchError::BudgetExceeded { partial }) => PairResult {
                    n,
                    d2,
                    outcome: PairOutcome::Unresolved { nodes: partial.nodes },
                    solutions: partial.solutions,
                },
                Err(e) => return Err(e),
            }
        };
        pairs.push(result);
    }
    Ok(ConjectureReport { n_max, pairs })
}
