//! Exhaustive search for orthogonal generators, the conjecture harness and
//! Barker-code enumeration.

mod barker;
mod compress;
mod conjecture;
mod engine;

use std::time::Instant;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::circulant::{is_orthogonal, Generator, GeneratorError};
use crate::constructions::{classify, Family};

pub use barker::{barker_enumerate, BARKER_GUARD};
pub use compress::{build_tables, CompressionTable};
pub use conjecture::{admissible_pairs, verify_conjecture, ConjectureReport, PairOutcome, PairResult};

use engine::Problem;

/// Which bounds the search uses besides the exact shift sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Pruning {
    /// The two row-sum identities only. Pure integer arithmetic.
    Basic,
    /// Folds modulo every proper divisor of `n` and the eigenvalue-modulus
    /// bound.
    #[default]
    Full,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOptions {
    pub symmetric_only: bool,
    pub workers: usize,
    pub node_budget: Option<u64>,
    pub collect_all: bool,
    pub pruning: Pruning,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            symmetric_only: false,
            workers: 1,
            node_budget: None,
            collect_all: true,
            pruning: Pruning::Full,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Constructed,
    Search,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolutionRecord {
    pub generator: Generator,
    #[serde(serialize_with = "family_or_unclassified")]
    pub family: Option<Family>,
    pub source: Source,
    pub verified: bool,
}

fn family_or_unclassified<S: Serializer>(f: &Option<Family>, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(f.map_or("unclassified", |f| f.as_str()))
}

impl SolutionRecord {
    pub fn new(generator: Generator, source: Source) -> Self {
        SolutionRecord {
            family: classify(&generator),
            verified: is_orthogonal(&generator),
            generator,
            source,
        }
    }

    pub fn family_name(&self) -> &'static str {
        self.family.map_or("unclassified", |f| f.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchReport {
    pub n: usize,
    pub d2: u64,
    pub symmetric_only: bool,
    pub solutions: Vec<SolutionRecord>,
    pub nodes: u64,
    /// False when the search stopped early (first solution or budget).
    pub complete: bool,
    pub elapsed_ms: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("node budget exceeded after {} nodes", .partial.nodes)]
    BudgetExceeded { partial: Box<SearchReport> },
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error("worker count must be at least 1")]
    NoWorkers,
}

/// All orthogonal generators with order `n` and diagonal `d2/2`, sorted with
/// `+1 < -1` on `c_1, c_2, ...`.
pub fn dfs_enumerate(n: usize, d2: u64, opts: &SearchOptions) -> Result<SearchReport, SearchError> {
    // validates n and d2
    Generator::from_fn(n, d2 as i64, |_| 1)?;
    if opts.workers == 0 {
        return Err(SearchError::NoWorkers);
    }
    let start = Instant::now();
    let divisors: Vec<usize> = match opts.pruning {
        Pruning::Basic => vec![1, 2],
        Pruning::Full => (1..n).filter(|e| n % e == 0).collect(),
    };
    let tables = build_tables(n, d2, &divisors, opts.symmetric_only);
    let problem = Problem::new(n, d2, opts.symmetric_only, tables, opts.pruning == Pruning::Full);
    let out = problem.run(opts.workers, opts.node_budget, !opts.collect_all);
    let mut solutions: Vec<SolutionRecord> = out
        .solutions
        .iter()
        .map(|s| SolutionRecord::new(Generator::new(n, d2 as i64, s).expect("valid shape"), Source::Search))
        .collect();
    solutions.sort_by(|a, b| a.generator.lex_key().cmp(&b.generator.lex_key()));
    let report = SearchReport {
        n,
        d2,
        symmetric_only: opts.symmetric_only,
        complete: !out.budget_hit && (opts.collect_all || solutions.is_empty()),
        solutions,
        nodes: out.nodes,
        elapsed_ms: start.elapsed().as_millis(),
    };
    log::info!(
        "search n={n} d2={d2}{}: {} solutions, {} nodes, {} ms",
        if opts.symmetric_only { " (symmetric)" } else { "" },
        report.solutions.len(),
        report.nodes,
        report.elapsed_ms
    );
    if out.budget_hit {
        return Err(SearchError::BudgetExceeded { partial: Box::new(report) });
    }
    Ok(report)
}

/// [`dfs_enumerate`] restricted to `c_j = c_{n-j}`.
pub fn symmetric_enumerate(n: usize, d2: u64, opts: &SearchOptions) -> Result<SearchReport, SearchError> {
    let opts = SearchOptions {
        symmetric_only: true,
        ..opts.clone()
    };
    dfs_enumerate(n, d2, &opts)
}

/// Unpruned scan over all `2^{n-1}` sign vectors; the oracle for tests.
pub fn brute_force(n: usize, d2: u64) -> Vec<Generator> {
    assert!((2..=24).contains(&n), "brute force is for small orders");
    let mut out: Vec<Generator> = (0u64..1 << (n - 1))
        .map(|mask| {
            Generator::from_fn(n, d2 as i64, |j| if mask >> (j - 1) & 1 == 1 { -1 } else { 1 }).expect("valid shape")
        })
        .filter(is_orthogonal)
        .collect();
    out.sort_by_key(|g| g.lex_key());
    out
}
