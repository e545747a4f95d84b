use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use circorth::conditions::format_d;
use circorth::search::{barker_enumerate, ConjectureReport, PairOutcome};
use circorth::symmetric::k_large_check;
use circorth::{
    autocorrelation, check_generator, check_pair, classify, dfs_enumerate, eigenvalue_moduli, eliminate_case,
    enumerate_max_d, family_generator, is_orthogonal, k_audit, verify_conjecture, Family, Generator, Pruning, Record,
    SearchError, SearchOptions, Status,
};

const EXIT_OK: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_UNRESOLVED: u8 = 3;

/// Default node budget for pairs above this order unless `--long` is given.
const LONG_ORDER: usize = 30;
const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Parser)]
#[command(name = "circorth", version, about = "Orthogonal circulant matrices with diagonal d and ±1 elsewhere")]
struct Cli {
    /// Emit line-delimited JSON records instead of the table.
    #[arg(long, global = true)]
    records: bool,

    /// More log output on stderr (repeat for debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check every generator in a file (`-` for stdin), one `n d2 signs` per line.
    Verify { path: String },
    /// Enumerate all orthogonal generators for order n and diagonal d.
    Search(SearchArgs),
    /// Run the k-audit for symmetric solutions and optionally the case eliminations.
    Audit {
        #[arg(long, default_value_t = 127)]
        kmax: u64,
        /// Also eliminate (120, 5) and (924, 29) case by case.
        #[arg(long)]
        cases: bool,
    },
    /// Search every admissible pair off the maximal diagonal up to an order.
    Conjecture {
        #[arg(long, default_value_t = 50)]
        nmax: usize,
        /// No node budget for orders above 30.
        #[arg(long)]
        long: bool,
        #[command(flatten)]
        workers: WorkerArgs,
    },
    /// Print the family generators at n = 2(d+1).
    Construct {
        n: usize,
        #[arg(long)]
        family: Option<String>,
    },
    /// List Barker codes starting with +1 +1.
    Barker {
        #[arg(long, default_value_t = 13)]
        max_len: usize,
    },
    /// Print the periodic autocorrelation of one generator.
    Autocorr {
        /// `n d2 signs`, as one argument or three.
        #[arg(num_args = 1..=3, required = true)]
        generator: Vec<String>,
    },
}

#[derive(Args)]
struct WorkerArgs {
    /// Worker threads (capped by CIRCORTH_MAX_WORKERS).
    #[arg(long)]
    workers: Option<usize>,
}

impl WorkerArgs {
    fn resolve(&self) -> Result<usize> {
        let mut w = match self.workers {
            Some(0) => bail!("--workers must be at least 1"),
            Some(w) => w,
            None => std::thread::available_parallelism().map_or(1, |n| n.get()),
        };
        if let Ok(cap) = std::env::var("CIRCORTH_MAX_WORKERS") {
            let cap: usize = cap.trim().parse().context("CIRCORTH_MAX_WORKERS is not a number")?;
            w = w.min(cap.max(1));
        }
        Ok(w)
    }
}

#[derive(Args)]
struct SearchArgs {
    n: usize,
    /// Diagonal value: an integer or a half-integer like `2.5`.
    d: String,
    #[arg(long)]
    symmetric_only: bool,
    #[command(flatten)]
    workers: WorkerArgs,
    /// No node budget for orders above 30.
    #[arg(long)]
    long: bool,
    /// Collect every solution (the default).
    #[arg(long, conflicts_with = "first")]
    all: bool,
    /// Stop at the first solution.
    #[arg(long)]
    first: bool,
    /// Search even if the pair fails a necessary condition.
    #[arg(long)]
    force: bool,
    /// Row-sum pruning only, no folds modulo larger divisors.
    #[arg(long)]
    basic: bool,
    /// Abort after this many search nodes.
    #[arg(long)]
    budget: Option<u64>,
}

/// `3` -> 6, `2.5` -> 5, `4.0` -> 8.
fn parse_d(s: &str) -> Result<u64> {
    let bad = || anyhow::anyhow!("invalid diagonal `{s}`: expected an integer or a value ending in .5");
    match s.split_once('.') {
        None => Ok(2 * s.parse::<u64>().map_err(|_| bad())?),
        Some((int, frac)) => {
            let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
            match frac {
                "5" => Ok(2 * int + 1),
                "0" => Ok(2 * int),
                _ => Err(bad()),
            }
        }
    }
}

struct Out {
    records: bool,
    stdout: io::StdoutLock<'static>,
}

impl Out {
    fn record(&mut self, r: &impl Serialize) -> Result<()> {
        writeln!(self.stdout, "{}", serde_json::to_string(r)?)?;
        Ok(())
    }

    fn line(&mut self, s: impl AsRef<str>) -> Result<()> {
        writeln!(self.stdout, "{}", s.as_ref())?;
        Ok(())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let mut out = Out {
        records: cli.records,
        stdout: io::stdout().lock(),
    };
    match run(cli.command, &mut out) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn run(cmd: Command, out: &mut Out) -> Result<u8> {
    match cmd {
        Command::Verify { path } => verify(&path, out),
        Command::Search(args) => search(args, out),
        Command::Audit { kmax, cases } => audit(kmax, cases, out),
        Command::Conjecture { nmax, long, workers } => conjecture(nmax, long, workers.resolve()?, out),
        Command::Construct { n, family } => construct(n, family, out),
        Command::Barker { max_len } => barker(max_len, out),
        Command::Autocorr { generator } => autocorr(&generator.join(" "), out),
    }
}

fn verify(path: &str, out: &mut Out) -> Result<u8> {
    let text = if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(path).with_context(|| format!("cannot read {path}"))?
    };
    let mut gens = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        match body.parse::<Generator>() {
            Ok(g) => gens.push((i + 1, g)),
            Err(e) => {
                eprintln!("{path}:{}:{}: {}", i + 1, e.column, e.message);
                return Ok(EXIT_INPUT);
            }
        }
    }
    let mut all_ok = true;
    for (line, g) in &gens {
        let orth = is_orthogonal(g);
        all_ok &= orth;
        let rep = check_generator(g);
        if out.records {
            out.record(&Record::from_generator(g))?;
            for r in Record::from_conditions(&rep) {
                out.record(&r)?;
            }
        } else {
            let fails: Vec<&str> = rep.failures().map(|v| v.condition).collect();
            out.line(format!(
                "line {line}: {g}  {}  family={}  conditions={}",
                if orth { "orthogonal" } else { "not-orthogonal" },
                classify(g).map_or("unclassified", |f| f.as_str()),
                if fails.is_empty() { "ok".to_string() } else { format!("fail[{}]", fails.join(",")) }
            ))?;
        }
    }
    if !out.records {
        out.line(format!("{} generators, {} orthogonal", gens.len(), gens.iter().filter(|(_, g)| is_orthogonal(g)).count()))?;
    }
    Ok(if all_ok { EXIT_OK } else { EXIT_FAIL })
}

fn search(args: SearchArgs, out: &mut Out) -> Result<u8> {
    let n = args.n;
    let d2 = parse_d(&args.d)?;
    if n < 2 {
        bail!("order must be at least 2");
    }
    let rep = check_pair(n, d2)?;
    if !rep.admissible && !args.force {
        eprintln!("pair (n={n}, d={}) is inadmissible:", format_d(d2));
        for v in rep.failures() {
            eprintln!("  {}: {}", v.condition, v.detail);
        }
        eprintln!("use --force to search anyway");
        return Ok(EXIT_INPUT);
    }
    let budget = args.budget.or((!args.long && n > LONG_ORDER).then_some(DEFAULT_BUDGET));
    let opts = SearchOptions {
        symmetric_only: args.symmetric_only,
        workers: args.workers.resolve()?,
        node_budget: budget,
        collect_all: !args.first,
        pruning: if args.basic { Pruning::Basic } else { Pruning::Full },
    };
    let (report, code) = match dfs_enumerate(n, d2, &opts) {
        Ok(r) => (r, EXIT_OK),
        Err(SearchError::BudgetExceeded { partial }) => {
            eprintln!(
                "node budget of {} exhausted after {} nodes; pair unresolved (rerun with --long)",
                budget.unwrap_or(0),
                partial.nodes
            );
            (*partial, EXIT_UNRESOLVED)
        }
        Err(e) => return Err(e.into()),
    };
    eprintln!("{} nodes, {} ms", report.nodes, report.elapsed_ms);
    if out.records {
        for s in &report.solutions {
            out.record(&Record::from_solution(s))?;
        }
        out.record(&Record::Summary {
            verdict: if code == EXIT_OK { "complete" } else { "unresolved" }.into(),
            count: report.solutions.len(),
        })?;
    } else {
        for s in &report.solutions {
            out.line(format!("{}  {}", s.generator, s.family_name()))?;
        }
        out.line(format!(
            "n={n} d={}{}: {} solution{}{}",
            format_d(d2),
            if args.symmetric_only { " symmetric" } else { "" },
            report.solutions.len(),
            if report.solutions.len() == 1 { "" } else { "s" },
            if code == EXIT_OK { "" } else { " (incomplete)" }
        ))?;
    }
    Ok(code)
}

fn audit(kmax: u64, cases: bool, out: &mut Out) -> Result<u8> {
    let a = k_audit(kmax);
    let big = k_large_check(8, 20)?;
    if out.records {
        for row in &a.rows {
            out.record(&Record::from_audit_row(row))?;
        }
    } else {
        out.line(format!("{:>4} {:>3} {:>3} {:>3} {:>3} {:>9} {:>16} {:>2}  verdict", "k", "t", "u", "w", "z", "n", "factorization", "r"))?;
        for row in &a.rows {
            out.line(format!(
                "{:>4} {:>3} {:>3} {:>3} {:>3} {:>9} {:>16} {:>2}  {}",
                row.k,
                row.tuple.t,
                row.tuple.u,
                row.tuple.w,
                row.tuple.z,
                row.n,
                row.factorization.to_string(),
                row.r,
                if row.passes { "pass".to_string() } else { format!("exception d={}", format_d(row.d2)) }
            ))?;
        }
        let ex: Vec<String> = a.exceptions().map(|r| format!("(k={}, n={}, d={})", r.k, r.n, format_d(r.d2))).collect();
        out.line(format!("rows: {}  exceptions: {}", a.rows.len(), if ex.is_empty() { "none".into() } else { ex.join(" ") }))?;
        out.line(format!("2·p_r# > 8^r for 8 <= r <= 20: {big}"))?;
    }
    let mut code = EXIT_OK;
    if cases {
        for (n, d2) in [(120, 10), (924, 58)] {
            let rep = eliminate_case(n, d2)?;
            if !rep.survivors.is_empty() {
                code = EXIT_FAIL;
            }
            if out.records {
                out.record(&Record::from_elimination(&rep))?;
                for s in &rep.survivors {
                    out.record(&Record::from_generator(&s.generator))?;
                }
            } else {
                out.line(format!(
                    "eliminate n={n} d={}: k={} r={} s={:?} tables={} cases={} survivors={}",
                    format_d(d2),
                    rep.k,
                    rep.r,
                    rep.s_values,
                    rep.tables,
                    rep.cases,
                    rep.survivors.len()
                ))?;
                for s in &rep.survivors {
                    out.line(format!("  survivor case {}: {}", s.case, s.generator))?;
                }
            }
        }
    }
    Ok(code)
}

fn conjecture(nmax: usize, long: bool, workers: usize, out: &mut Out) -> Result<u8> {
    if nmax < 2 {
        bail!("--nmax must be at least 2");
    }
    // the budget only bites above LONG_ORDER, smaller pairs run to completion
    let mut report = ConjectureReport { n_max: nmax, pairs: Vec::new() };
    let small = SearchOptions { workers, ..Default::default() };
    report.pairs.extend(verify_conjecture(nmax.min(LONG_ORDER), &small)?.pairs);
    if nmax > LONG_ORDER {
        let big = SearchOptions {
            workers,
            node_budget: (!long).then_some(DEFAULT_BUDGET),
            ..Default::default()
        };
        let rest = verify_conjecture(nmax, &big)?;
        report.pairs.extend(rest.pairs.into_iter().filter(|p| p.n > LONG_ORDER));
    }
    if out.records {
        for p in &report.pairs {
            out.record(&Record::from_pair(p))?;
        }
    } else {
        for p in &report.pairs {
            let what = match p.outcome {
                PairOutcome::Constructed { count } => format!("constructed {count}"),
                PairOutcome::Searched { count, .. } => format!("searched, {count} solutions"),
                PairOutcome::Unresolved { .. } => "UNRESOLVED (node budget; rerun with --long)".to_string(),
            };
            out.line(format!("n={:>3} d={:>5}  {what}", p.n, format_d(p.d2)))?;
        }
        let searched: Vec<String> = report.searched().map(|p| format!("({},{})", p.n, format_d(p.d2))).collect();
        out.line(format!("searched pairs: {}", if searched.is_empty() { "none".into() } else { searched.join(" ") }))?;
    }
    let unresolved: Vec<String> = report.unresolved().map(|p| format!("({},{})", p.n, format_d(p.d2))).collect();
    let (verdict, code) = if !report.holds_on_resolved() {
        ("fails", EXIT_FAIL)
    } else if !unresolved.is_empty() {
        ("unresolved", EXIT_UNRESOLVED)
    } else {
        ("holds", EXIT_OK)
    };
    if out.records {
        out.record(&Record::Summary { verdict: verdict.into(), count: report.pairs.len() })?;
    } else {
        out.line(format!("verdict: conjecture {verdict} for n <= {nmax}"))?;
        if !unresolved.is_empty() {
            out.line(format!("unresolved: {}", unresolved.join(" ")))?;
        }
    }
    Ok(code)
}

fn construct(n: usize, family: Option<String>, out: &mut Out) -> Result<u8> {
    let gens = match family {
        Some(f) => vec![family_generator(f.parse::<Family>()?, n)?],
        None => {
            if n < 2 {
                bail!("order must be at least 2");
            }
            enumerate_max_d(n)
        }
    };
    for g in &gens {
        if out.records {
            let mut rec = Record::from_generator(g);
            if let Record::Generator { source, .. } = &mut rec {
                *source = Some("constructed".into());
            }
            out.record(&rec)?;
        } else {
            out.line(format!("{g}  {}", classify(g).map_or("unclassified", |f| f.as_str())))?;
        }
    }
    Ok(EXIT_OK)
}

fn barker(max_len: usize, out: &mut Out) -> Result<u8> {
    let codes = barker_enumerate(max_len);
    for c in &codes {
        let s: String = c.iter().map(|&x| if x == 1 { '+' } else { '-' }).collect();
        if out.records {
            out.record(&serde_json::json!({ "kind": "barker", "n": c.len(), "signs": s }))?;
        } else {
            out.line(format!("{:>2}  {s}", c.len()))?;
        }
    }
    if !out.records {
        out.line(format!("{} Barker codes of length <= {max_len}", codes.len()))?;
    }
    Ok(EXIT_OK)
}

fn autocorr(text: &str, out: &mut Out) -> Result<u8> {
    let g: Generator = text.parse().map_err(|e: circorth::ParseError| anyhow::anyhow!("column {}: {}", e.column, e.message))?;
    let prof = autocorrelation(&g);
    let eig = eigenvalue_moduli(&g, 1e-6);
    let (scale, values) = match prof.values2() {
        Some(v) => ("2", v),
        None => ("4", prof.values4.clone()),
    };
    if out.records {
        out.record(&serde_json::json!({
            "kind": "autocorrelation",
            "n": g.order(),
            "d2": g.d2(),
            "signs": g.sign_string(),
            "scale": scale.parse::<u8>()?,
            "values": values,
            "verdict": if prof.is_perfect() { "orthogonal" } else { "not-orthogonal" },
        }))?;
    } else {
        let vs: Vec<String> = values.iter().map(|v| v.to_string()).collect();
        out.line(format!("{g}"))?;
        out.line(format!("autocorrelation x{scale}: [{}]", vs.join(", ")))?;
        out.line(format!("perfect: {}  eigenvalue moduli: {}", prof.is_perfect(), if eig { "ok" } else { "off" }))?;
        let rep = check_generator(&g);
        for v in &rep.verdicts {
            if v.status != Status::NotApplicable {
                out.line(format!("  {}: {}", v.condition, v.status.as_str()))?;
            }
        }
    }
    Ok(if prof.is_perfect() { EXIT_OK } else { EXIT_FAIL })
}
