//! Line-oriented output records.
//!
//! Every record is a flat object tagged by `kind`. Shared fields always use
//! the same names: `n`, `d2`, `signs`, `family`, `verdict`, `condition`,
//! `status`.

use serde::Serialize;

use crate::circulant::{is_orthogonal, Generator};
use crate::conditions::{ConditionReport, Verdict};
use crate::constructions::classify;
use crate::search::{PairOutcome, PairResult, SolutionRecord};
use crate::symmetric::{EliminationReport, KAuditRow};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Record {
    Generator {
        n: usize,
        d2: u64,
        signs: String,
        family: String,
        verdict: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        source: Option<String>,
    },
    Condition {
        n: usize,
        d2: u64,
        condition: String,
        status: String,
        detail: String,
    },
    KAudit {
        k: u64,
        t: u64,
        u: u64,
        w: u64,
        z: u64,
        n: u64,
        factorization: String,
        r: u32,
        d2: u64,
        verdict: String,
    },
    Elimination {
        n: u64,
        d2: u64,
        k: u64,
        r: u32,
        s: Vec<u64>,
        tables: usize,
        cases: u64,
        survivors: usize,
        verdict: String,
    },
    Pair {
        n: usize,
        d2: u64,
        outcome: String,
        solutions: usize,
        nodes: Option<u64>,
        verdict: String,
    },
    Summary {
        verdict: String,
        count: usize,
    },
}

fn orth_verdict(ok: bool) -> String {
    if ok { "orthogonal" } else { "not-orthogonal" }.to_string()
}

impl Record {
    pub fn from_generator(g: &Generator) -> Record {
        Record::Generator {
            n: g.order(),
            d2: g.d2(),
            signs: g.sign_string(),
            family: classify(g).map_or("unclassified", |f| f.as_str()).to_string(),
            verdict: orth_verdict(is_orthogonal(g)),
            source: None,
        }
    }

    pub fn from_solution(s: &SolutionRecord) -> Record {
        Record::Generator {
            n: s.generator.order(),
            d2: s.generator.d2(),
            signs: s.generator.sign_string(),
            family: s.family_name().to_string(),
            verdict: orth_verdict(s.verified),
            source: Some(match s.source {
                crate::search::Source::Constructed => "constructed".into(),
                crate::search::Source::Search => "search".into(),
            }),
        }
    }

    pub fn from_verdict(n: usize, d2: u64, v: &Verdict) -> Record {
        Record::Condition {
            n,
            d2,
            condition: v.condition.to_string(),
            status: v.status.as_str().to_string(),
            detail: v.detail.clone(),
        }
    }

    pub fn from_conditions(rep: &ConditionReport) -> Vec<Record> {
        rep.verdicts.iter().map(|v| Record::from_verdict(rep.n, rep.d2, v)).collect()
    }

    pub fn from_audit_row(row: &KAuditRow) -> Record {
        Record::KAudit {
            k: row.k,
            t: row.tuple.t,
            u: row.tuple.u,
            w: row.tuple.w,
            z: row.tuple.z,
            n: row.n,
            factorization: row.factorization.to_string(),
            r: row.r,
            d2: row.d2,
            verdict: if row.passes { "pass" } else { "exception" }.to_string(),
        }
    }

    pub fn from_elimination(rep: &EliminationReport) -> Record {
        Record::Elimination {
            n: rep.n,
            d2: rep.d2,
            k: rep.k,
            r: rep.r,
            s: rep.s_values.clone(),
            tables: rep.tables,
            cases: rep.cases,
            survivors: rep.survivors.len(),
            verdict: if rep.survivors.is_empty() { "eliminated" } else { "survivors" }.to_string(),
        }
    }

    pub fn from_pair(p: &PairResult) -> Record {
        let (outcome, count, nodes) = match p.outcome {
            PairOutcome::Constructed { count } => ("constructed", count, None),
            PairOutcome::Searched { count, nodes } => ("searched", count, Some(nodes)),
            PairOutcome::Unresolved { nodes } => ("unresolved", p.solutions.len(), Some(nodes)),
        };
        let verdict = match p.outcome {
            PairOutcome::Constructed { .. } => "maximal",
            PairOutcome::Searched { count: 0, .. } => "empty",
            PairOutcome::Searched { .. } => "counterexample",
            PairOutcome::Unresolved { .. } => "unresolved",
        };
        Record::Pair {
            n: p.n,
            d2: p.d2,
            outcome: outcome.to_string(),
            solutions: count,
            nodes,
            verdict: verdict.to_string(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_record() {
        let g: Generator = "4 2 ++-".parse().unwrap();
        match Record::from_generator(&g) {
            Record::Generator { family, verdict, signs, .. } => {
                assert_eq!(family, "g4a");
                assert_eq!(verdict, "orthogonal");
                assert_eq!(signs, "++-");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn tagged_json() {
        let r = Record::Summary { verdict: "holds".into(), count: 0 };
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"kind":"summary","verdict":"holds","count":0}"#
        );
    }
}
