//! Circulant matrices with constant diagonal `d >= 0`, off-diagonal entries
//! `±1` and mutually orthogonal columns.
//!
//! Such a matrix is fixed by its first row, so everything here works on a
//! [`Generator`]: verification through exact periodic autocorrelation,
//! necessary conditions on `(n, d)`, the closed-form families at
//! `n = 2(d + 1)`, the number-theoretic exclusion of symmetric solutions, and
//! an exhaustive search for everything else.

pub mod circulant;
pub mod conditions;
pub mod constructions;
pub mod numtheory;
pub mod records;
pub mod search;
pub mod symmetric;

pub use circulant::{
    autocorrelation, eigenvalue_moduli, is_orthogonal, make_generator, row_sums, AutocorrelationProfile, Generator,
    GeneratorError, ParseError, RowSums,
};
pub use conditions::{check_generator, check_pair, ConditionReport, Status, Verdict};
pub use constructions::{block_compose, classify, enumerate_max_d, family_generator, BaseBlock, Family};
pub use numtheory::Factorization;
pub use records::Record;
pub use search::{
    barker_enumerate, dfs_enumerate, symmetric_enumerate, verify_conjecture, ConjectureReport, Pruning, SearchError,
    SearchOptions, SearchReport, SolutionRecord, Source,
};
pub use symmetric::{
    build_constraint_table, eliminate_case, enumerate_tuwz, k_audit, ConstraintTable, EliminationReport, KAuditRow,
    TuwzTuple,
};
