//! Depth-first sign assignment with incremental shift sums.
//!
//! All correlations live in the ×4 scale: a product of two signs contributes
//! `±4`, a product with `c_0 = d` contributes `±2·d2`. For each shift
//! `m ∈ 1..=n/2` the engine keeps the partial sum of determined terms and the
//! count of undetermined terms of each kind, which bounds what the rest can
//! still add.
//!
//! A second, floating point bound works on the DFT: every eigenvalue of a
//! solution has modulus exactly `sqrt(d² + n - 1)`, and the partial eigenvalue
//! sum can move by at most the summed magnitudes of the unassigned steps. The
//! bound only prunes, with a margin far above rounding error; leaves are
//! accepted by the exact shift sums alone.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};

use rayon::prelude::*;

use super::compress::{class_sizes, CompressionTable};
use crate::circulant::target4;

/// Node counts are flushed to the shared counter this often.
const FLUSH_EVERY: u64 = 1 << 12;

/// Subtrees are cut at this many assigned steps.
const PREFIX_DEPTH: usize = 10;

/// Slack on the spectral bound.
const SPECTRAL_EPS: f64 = 1e-6;

/// Per-step DFT contributions, frequencies `0..=n/2` (the rest are
/// conjugates).
struct Spectral {
    freqs: usize,
    /// `Σ_{j ∈ step} 2 ω^{jk}`, step-major.
    re: Vec<f64>,
    im: Vec<f64>,
    /// `Σ_{later steps} |Σ_{j ∈ step} 2 ω^{jk}|`, indexed by depth.
    rem: Vec<f64>,
    radius: f64,
}

impl Spectral {
    fn new(n: usize, d2: u64, steps: &[Vec<usize>]) -> Self {
        let freqs = n / 2 + 1;
        let tau = std::f64::consts::TAU / n as f64;
        let mut re = vec![0.0; steps.len() * freqs];
        let mut im = vec![0.0; steps.len() * freqs];
        for (s, group) in steps.iter().enumerate() {
            for k in 0..freqs {
                for &j in group {
                    let a = tau * ((j * k) % n) as f64;
                    re[s * freqs + k] += 2.0 * a.cos();
                    im[s * freqs + k] += 2.0 * a.sin();
                }
            }
        }
        let mut rem = vec![0.0; (steps.len() + 1) * freqs];
        for s in (0..steps.len()).rev() {
            for k in 0..freqs {
                let i = s * freqs + k;
                rem[i] = rem[i + freqs] + re[i].hypot(im[i]);
            }
        }
        Spectral {
            freqs,
            re,
            im,
            rem,
            radius: (target4(n, d2) as f64).sqrt(),
        }
    }
}

pub(crate) struct Problem {
    pub n: usize,
    pub d2: i64,
    half: usize,
    /// Each step assigns one value to every index of its group.
    steps: Vec<Vec<usize>>,
    tables: Vec<CompressionTable>,
    spectral: Option<Spectral>,
}

#[derive(Clone)]
struct State {
    c: Vec<i8>,
    sum4: Vec<i64>,
    rem_pp: Vec<i64>,
    rem_d: Vec<i64>,
    /// Per table: partial class sums and unassigned counts per class.
    comp: Vec<(Vec<i64>, Vec<i64>)>,
    /// Partial eigenvalues (×2) after each depth, `re` then `im` per depth.
    lam: Vec<f64>,
    depth: usize,
}

pub(crate) struct Outcome {
    pub solutions: Vec<Vec<i8>>,
    pub nodes: u64,
    pub budget_hit: bool,
}

struct Shared {
    nodes: AtomicU64,
    budget: Option<u64>,
    abort: AtomicBool,
    budget_hit: AtomicBool,
    /// Lowest subtree index holding a solution (stop-at-first mode).
    first: AtomicUsize,
    stop_first: bool,
}

struct Local<'a> {
    shared: &'a Shared,
    subtree: usize,
    pending: u64,
    nodes: u64,
    solutions: Vec<Vec<i8>>,
}

impl Local<'_> {
    fn tick(&mut self) {
        self.nodes += 1;
        self.pending += 1;
        if self.pending >= FLUSH_EVERY {
            self.flush();
        }
    }

    fn flush(&mut self) {
        let total = self.shared.nodes.fetch_add(self.pending, Ordering::Relaxed) + self.pending;
        self.pending = 0;
        if let Some(b) = self.shared.budget {
            if total > b {
                self.shared.budget_hit.store(true, Ordering::Relaxed);
                self.shared.abort.store(true, Ordering::Relaxed);
            }
        }
    }

    fn stopped(&self) -> bool {
        self.shared.abort.load(Ordering::Relaxed)
            || (self.shared.stop_first && self.shared.first.load(Ordering::Relaxed) < self.subtree)
    }
}

impl Problem {
    pub fn new(n: usize, d2: u64, symmetric: bool, tables: Vec<CompressionTable>, spectral: bool) -> Self {
        let mut steps = Vec::new();
        if symmetric {
            // j and n/2 - j close a class of the fold modulo n/2 together
            let group = |j: usize| if j == n - j { vec![j] } else { vec![j, n - j] };
            let half = n / 2;
            let mut seen = vec![false; half + 1];
            for j in 1..=half {
                for x in [j, half - j] {
                    if x >= 1 && !seen[x] {
                        seen[x] = true;
                        steps.push(group(x));
                    }
                }
            }
        } else {
            // 1, n-1, 2, n-2, ...
            for j in 1..=n / 2 {
                steps.push(vec![j]);
                if j != n - j {
                    steps.push(vec![n - j]);
                }
            }
        }
        let spectral = spectral.then(|| Spectral::new(n, d2, &steps));
        Problem {
            n,
            d2: d2 as i64,
            half: n / 2,
            steps,
            tables,
            spectral,
        }
    }

    fn initial(&self) -> State {
        let n = self.n;
        let len = self.half + 1;
        let comp = self
            .tables
            .iter()
            .map(|t| {
                let mut partial = vec![0; t.e];
                partial[0] = self.d2;
                (partial, class_sizes(n, t.e))
            })
            .collect();
        let mut lam = Vec::new();
        if let Some(sp) = &self.spectral {
            lam = vec![0.0; (self.steps.len() + 1) * 2 * sp.freqs];
            lam[..sp.freqs].fill(self.d2 as f64);
        }
        State {
            c: vec![0; n],
            sum4: vec![0; len],
            rem_pp: vec![n as i64 - 2; len],
            rem_d: vec![2; len],
            comp,
            lam,
            depth: 0,
        }
    }

    fn set(&self, st: &mut State, j: usize, v: i8) {
        let n = self.n;
        let vi = v as i64;
        for m in 1..=self.half {
            for p in [(j + m) % n, (j + n - m) % n] {
                if p == 0 {
                    st.sum4[m] += 2 * self.d2 * vi;
                    st.rem_d[m] -= 1;
                } else if st.c[p] != 0 {
                    st.sum4[m] += 4 * vi * st.c[p] as i64;
                    st.rem_pp[m] -= 1;
                }
            }
        }
        st.c[j] = v;
        for (t, (partial, rem)) in self.tables.iter().zip(st.comp.iter_mut()) {
            partial[j % t.e] += 2 * vi;
            rem[j % t.e] -= 1;
        }
    }

    fn unset(&self, st: &mut State, j: usize) {
        let n = self.n;
        let vi = st.c[j] as i64;
        st.c[j] = 0;
        for m in 1..=self.half {
            for p in [(j + m) % n, (j + n - m) % n] {
                if p == 0 {
                    st.sum4[m] -= 2 * self.d2 * vi;
                    st.rem_d[m] += 1;
                } else if st.c[p] != 0 {
                    st.sum4[m] -= 4 * vi * st.c[p] as i64;
                    st.rem_pp[m] += 1;
                }
            }
        }
        for (t, (partial, rem)) in self.tables.iter().zip(st.comp.iter_mut()) {
            partial[j % t.e] -= 2 * vi;
            rem[j % t.e] += 1;
        }
    }

    fn viable(&self, st: &State) -> bool {
        if let Some(sp) = &self.spectral {
            let f = sp.freqs;
            let base = st.depth * 2 * f;
            let rem = &sp.rem[st.depth * f..(st.depth + 1) * f];
            for k in 0..f {
                let m = st.lam[base + k].hypot(st.lam[base + f + k]);
                if m - rem[k] > sp.radius + SPECTRAL_EPS || m + rem[k] < sp.radius - SPECTRAL_EPS {
                    return false;
                }
            }
        }
        for m in 1..=self.half {
            let s = st.sum4[m];
            let pp = st.rem_pp[m];
            let rd = st.rem_d[m];
            if s.abs() > 4 * pp + 2 * self.d2 * rd {
                return false;
            }
            if rd == 0 && (s - 4 * pp).rem_euclid(8) != 0 {
                return false;
            }
        }
        self.tables
            .iter()
            .zip(&st.comp)
            .all(|(t, (partial, rem))| t.feasible(partial, rem))
    }

    fn apply(&self, st: &mut State, step: usize, v: i8) {
        debug_assert_eq!(st.depth, step);
        for &j in &self.steps[step] {
            self.set(st, j, v);
        }
        if let Some(sp) = &self.spectral {
            let f = sp.freqs;
            let (from, to) = (step * 2 * f, (step + 1) * 2 * f);
            let vf = v as f64;
            for k in 0..f {
                st.lam[to + k] = st.lam[from + k] + vf * sp.re[step * f + k];
                st.lam[to + f + k] = st.lam[from + f + k] + vf * sp.im[step * f + k];
            }
        }
        st.depth += 1;
    }

    fn retract(&self, st: &mut State, step: usize) {
        for &j in self.steps[step].iter().rev() {
            self.unset(st, j);
        }
        st.depth -= 1;
    }

    fn dfs(&self, st: &mut State, depth: usize, local: &mut Local) {
        if depth == self.steps.len() {
            local.solutions.push(st.c[1..].to_vec());
            if local.shared.stop_first {
                local.shared.first.fetch_min(local.subtree, Ordering::Relaxed);
            }
            return;
        }
        for v in [1i8, -1] {
            if local.stopped() {
                return;
            }
            self.apply(st, depth, v);
            if self.viable(st) {
                local.tick();
                self.dfs(st, depth + 1, local);
            }
            self.retract(st, depth);
            if local.shared.stop_first && !local.solutions.is_empty() {
                return;
            }
        }
    }

    /// Viable assignments of the first `p` steps, in DFS order.
    fn prefixes(&self, st: &mut State, depth: usize, p: usize, cur: &mut Vec<i8>, out: &mut Vec<Vec<i8>>, nodes: &mut u64) {
        if depth == p {
            out.push(cur.clone());
            return;
        }
        for v in [1i8, -1] {
            self.apply(st, depth, v);
            if self.viable(st) {
                *nodes += 1;
                cur.push(v);
                self.prefixes(st, depth + 1, p, cur, out, nodes);
                cur.pop();
            }
            self.retract(st, depth);
        }
    }

    /// Runs the search on `workers` threads. Solutions come back unsorted.
    pub fn run(&self, workers: usize, budget: Option<u64>, stop_first: bool) -> Outcome {
        let mut root = self.initial();
        let p = self.steps.len().min(PREFIX_DEPTH);
        let mut prefixes = Vec::new();
        let mut prefix_nodes = 1;
        if self.viable(&root) {
            self.prefixes(&mut root, 0, p, &mut Vec::new(), &mut prefixes, &mut prefix_nodes);
        }
        log::debug!("n={} d2={}: {} subtrees at depth {p}", self.n, self.d2, prefixes.len());
        let shared = Shared {
            nodes: AtomicU64::new(prefix_nodes),
            budget,
            abort: AtomicBool::new(false),
            budget_hit: AtomicBool::new(false),
            first: AtomicUsize::new(usize::MAX),
            stop_first,
        };
        let work = |(i, prefix): (usize, &Vec<i8>)| {
            let mut local = Local {
                shared: &shared,
                subtree: i,
                pending: 0,
                nodes: 0,
                solutions: Vec::new(),
            };
            if local.stopped() {
                return (i, local.nodes, local.solutions);
            }
            let mut st = self.initial();
            for (step, &v) in prefix.iter().enumerate() {
                self.apply(&mut st, step, v);
            }
            self.dfs(&mut st, p, &mut local);
            local.flush();
            (i, local.nodes, local.solutions)
        };
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers.max(1))
            .build()
            .expect("thread pool");
        let mut parts: Vec<(usize, u64, Vec<Vec<i8>>)> =
            pool.install(|| prefixes.par_iter().enumerate().map(work).collect());
        parts.sort_by_key(|p| p.0);
        let nodes = prefix_nodes + parts.iter().map(|p| p.1).sum::<u64>();
        let mut solutions: Vec<Vec<i8>> = Vec::new();
        for (_, _, sols) in parts {
            if stop_first && !solutions.is_empty() {
                break;
            }
            solutions.extend(sols);
        }
        if stop_first {
            solutions.truncate(1);
        }
        Outcome {
            solutions,
            nodes,
            budget_hit: shared.budget_hit.load(Ordering::Relaxed),
        }
    }
}
