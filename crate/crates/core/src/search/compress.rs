//! Compressed-sequence tables used for pruning.
//!
//! For a divisor `e` of `n`, fold the generator modulo `e`:
//! `A_i = Σ_{j ≡ i (mod e)} 2 c_j` (with `2 c_0 = d2`). The periodic
//! autocorrelation of `A` at shift `s` is the sum of the original
//! autocorrelation over all shifts `≡ s (mod e)`, so an orthogonal generator
//! folds to a sequence with zero off-peak autocorrelation and energy
//! `4(d² + n - 1)`. `e = 1` is the row-sum identity and `e = 2` the
//! alternating row-sum identity; larger `e` generalize them.
//!
//! A table lists every integer tuple that can be such a fold. The search
//! prunes a branch when no tuple is reachable from the partial class sums.

use crate::circulant::target4;

/// Hard cap on enumeration nodes per table; a table that hits it is dropped
/// (dropping only weakens pruning).
const BUILD_NODE_CAP: u64 = 50_000_000;

#[derive(Debug, Clone)]
pub struct CompressionTable {
    pub e: usize,
    /// Flattened tuples, `e` entries each.
    tuples: Vec<i64>,
}

impl CompressionTable {
    pub fn len(&self) -> usize {
        self.tuples.len() / self.e
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn tuples(&self) -> impl Iterator<Item = &[i64]> {
        self.tuples.chunks_exact(self.e)
    }

    /// Some tuple `t` has `|t_i - partial_i| <= 2 rem_i` for every class `i`.
    ///
    /// Parity needs no separate test: entries of a tuple and of the partial
    /// sums carry the same residue mod 4 once `rem_i` is accounted for.
    #[inline]
    pub fn feasible(&self, partial: &[i64], rem: &[i64]) -> bool {
        let e = self.e;
        'tuples: for t in self.tuples.chunks_exact(e) {
            for i in 0..e {
                if (t[i] - partial[i]).abs() > 2 * rem[i] {
                    continue 'tuples;
                }
            }
            return true;
        }
        false
    }
}

/// Number of sign positions folding onto class `i` of `e`.
pub fn class_sizes(n: usize, e: usize) -> Vec<i64> {
    let q = (n / e) as i64;
    (0..e).map(|i| if i == 0 { q - 1 } else { q }).collect()
}

/// Tables for the requested divisors of `n` (each `< n`), ascending. Every
/// table is built with the already-built tables of its own divisors as
/// pruning. With `symmetric`, only folds of symmetric generators are kept
/// (`A_i = A_{e-i}`).
pub fn build_tables(n: usize, d2: u64, divisors: &[usize], symmetric: bool) -> Vec<CompressionTable> {
    let mut ds: Vec<usize> = divisors.iter().copied().filter(|&e| e < n && n % e == 0).collect();
    ds.sort_unstable();
    ds.dedup();
    let mut built: Vec<CompressionTable> = Vec::new();
    for e in ds {
        let subs: Vec<&CompressionTable> = built.iter().filter(|t| e % t.e == 0 && t.e < e).collect();
        match enumerate(n, d2, e, &subs, symmetric) {
            Some(t) => {
                log::debug!("fold table n={n} d2={d2} e={e}: {} tuples", t.len());
                let empty = t.is_empty();
                built.push(t);
                if empty {
                    // nothing can fold onto e, so nothing survives anyway
                    break;
                }
            }
            None => log::debug!("fold table n={n} d2={d2} e={e}: dropped at node cap"),
        }
    }
    built
}

/// Slack on the eigenvalue-modulus bound.
const SPECTRAL_EPS: f64 = 1e-6;

struct Builder<'a> {
    e: usize,
    target: i64,
    sizes: Vec<i64>,
    offsets: Vec<i64>,
    /// Coordinates assigned together (mirror pairs when symmetric).
    groups: Vec<Vec<usize>>,
    /// Smallest and largest square still to come from groups `g..`.
    min_rest: Vec<i64>,
    max_rest: Vec<i64>,
    subs: Vec<(&'a CompressionTable, Vec<i64>, Vec<i64>)>,
    freqs: usize,
    cos: Vec<f64>,
    sin: Vec<f64>,
    /// Partial DFT after each depth, `re` then `im`.
    lam: Vec<f64>,
    /// Largest possible DFT movement from groups `g..`, per frequency.
    rem: Vec<f64>,
    radius: f64,
    cur: Vec<i64>,
    out: Vec<i64>,
    nodes: u64,
}

fn enumerate(n: usize, d2: u64, e: usize, subs: &[&CompressionTable], symmetric: bool) -> Option<CompressionTable> {
    let sizes = class_sizes(n, e);
    let offsets: Vec<i64> = (0..e).map(|i| if i == 0 { d2 as i64 } else { 0 }).collect();
    let groups: Vec<Vec<usize>> = if symmetric {
        (0..=e / 2).map(|i| if i == 0 || 2 * i == e { vec![i] } else { vec![i, e - i] }).collect()
    } else {
        (0..e).map(|i| vec![i]).collect()
    };
    let g_len = groups.len();
    let mut min_rest = vec![0; g_len + 1];
    let mut max_rest = vec![0; g_len + 1];
    for g in (0..g_len).rev() {
        let i = groups[g][0];
        let (lo, hi) = square_range(offsets[i], sizes[i]);
        let k = groups[g].len() as i64;
        min_rest[g] = min_rest[g + 1] + k * lo;
        max_rest[g] = max_rest[g + 1] + k * hi;
    }
    let freqs = e / 2 + 1;
    let tau = std::f64::consts::TAU / e as f64;
    let cos: Vec<f64> = (0..e).map(|x| (tau * x as f64).cos()).collect();
    let sin: Vec<f64> = (0..e).map(|x| (tau * x as f64).sin()).collect();
    let mut rem = vec![0.0; (g_len + 1) * freqs];
    for g in (0..g_len).rev() {
        let i = groups[g][0];
        let amp = (offsets[i].abs() + 2 * sizes[i]) as f64;
        for k in 0..freqs {
            let (mut re, mut im) = (0.0, 0.0);
            for &x in &groups[g] {
                re += cos[(x * k) % e];
                im += sin[(x * k) % e];
            }
            rem[g * freqs + k] = rem[(g + 1) * freqs + k] + amp * re.hypot(im);
        }
    }
    let sub_state = subs
        .iter()
        .map(|t| {
            let f = t.e;
            let mut partial = vec![0; f];
            let mut rem = vec![0; f];
            for i in 0..e {
                partial[i % f] += offsets[i];
                rem[i % f] += sizes[i];
            }
            (*t, partial, rem)
        })
        .collect();
    let mut b = Builder {
        e,
        target: target4(n, d2),
        sizes,
        offsets,
        groups,
        min_rest,
        max_rest,
        subs: sub_state,
        freqs,
        cos,
        sin,
        lam: vec![0.0; (g_len + 1) * 2 * freqs],
        rem,
        radius: (target4(n, d2) as f64).sqrt(),
        cur: vec![0; e],
        out: Vec::new(),
        nodes: 0,
    };
    if b.rec(0, 0) {
        Some(CompressionTable { e, tuples: b.out })
    } else {
        None
    }
}

/// Range of `(offset + 2s)²` over `s ∈ {-size, -size+2, .., size}`.
fn square_range(offset: i64, size: i64) -> (i64, i64) {
    let vals = (0..=size).map(|t| offset + 2 * (2 * t - size));
    let lo = vals.clone().map(|v| v * v).min().unwrap();
    let hi = vals.map(|v| v * v).max().unwrap();
    (lo, hi)
}

impl Builder<'_> {
    /// Returns false when the node cap is hit.
    fn rec(&mut self, g: usize, norm: i64) -> bool {
        self.nodes += 1;
        if self.nodes > BUILD_NODE_CAP {
            return false;
        }
        let e = self.e;
        if g == self.groups.len() {
            if norm == self.target && (1..=e / 2).all(|s| periodic(&self.cur, s) == 0) {
                self.out.extend_from_slice(&self.cur);
            }
            return true;
        }
        let first = self.groups[g][0];
        let size = self.sizes[first];
        let width = self.groups[g].len() as i64;
        let f = self.freqs;
        for t in 0..=size {
            let v = self.offsets[first] + 2 * (2 * t - size);
            let norm2 = norm + width * v * v;
            if norm2 + self.min_rest[g + 1] > self.target || norm2 + self.max_rest[g + 1] < self.target {
                continue;
            }
            // DFT of the fold after this group
            let (from, to) = (g * 2 * f, (g + 1) * 2 * f);
            let mut ok = true;
            for k in 0..f {
                let (mut re, mut im) = (self.lam[from + k], self.lam[from + f + k]);
                for &x in &self.groups[g] {
                    re += v as f64 * self.cos[(x * k) % e];
                    im += v as f64 * self.sin[(x * k) % e];
                }
                self.lam[to + k] = re;
                self.lam[to + f + k] = im;
                let m = re.hypot(im);
                let r = self.rem[(g + 1) * f + k];
                if m - r > self.radius + SPECTRAL_EPS || m + r < self.radius - SPECTRAL_EPS {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            let delta = v - self.offsets[first];
            for &x in &self.groups[g] {
                self.cur[x] = v;
                for (_, partial, rem) in self.subs.iter_mut() {
                    let m = partial.len();
                    partial[x % m] += delta;
                    rem[x % m] -= size;
                }
            }
            let ok = self.subs.iter().all(|(t, partial, rem)| t.feasible(partial, rem));
            let keep_going = !ok || self.rec(g + 1, norm2);
            for &x in &self.groups[g] {
                for (_, partial, rem) in self.subs.iter_mut() {
                    let m = partial.len();
                    partial[x % m] -= delta;
                    rem[x % m] += size;
                }
            }
            if !keep_going {
                return false;
            }
        }
        true
    }
}

fn periodic(a: &[i64], s: usize) -> i64 {
    let e = a.len();
    (0..e).map(|i| a[i] * a[(i + s) % e]).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Folds of every orthogonal generator, found by brute force.
    fn brute_folds(n: usize, d2: u64, e: usize, symmetric: bool) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        for mask in 0u32..(1 << (n - 1)) {
            let mut row = vec![d2 as i64];
            row.extend((0..n - 1).map(|b| if mask >> b & 1 == 1 { -2 } else { 2 }));
            let orth = (1..n).all(|m| (0..n).map(|k| row[k] * row[(k + m) % n]).sum::<i64>() == 0);
            let sym = (1..n).all(|j| row[j] == row[n - j]);
            if orth && (sym || !symmetric) {
                let mut a = vec![0; e];
                for (j, v) in row.iter().enumerate() {
                    a[j % e] += v;
                }
                out.push(a);
            }
        }
        out
    }

    #[test]
    fn tables_contain_every_true_fold() {
        for (n, d2) in [(4, 2), (8, 6), (12, 10), (6, 4), (10, 8)] {
            let divs: Vec<usize> = (1..n).filter(|e| n % e == 0).collect();
            let tables = build_tables(n, d2, &divs, false);
            for t in &tables {
                let all: Vec<&[i64]> = t.tuples().collect();
                for fold in brute_folds(n, d2, t.e, false) {
                    assert!(all.contains(&fold.as_slice()), "n={n} e={} missing {fold:?}", t.e);
                }
            }
        }
    }

    #[test]
    fn symmetric_tables_contain_symmetric_folds() {
        for (n, d2) in [(8, 6), (12, 10), (10, 8), (16, 2)] {
            let divs: Vec<usize> = (1..n).filter(|e| n % e == 0).collect();
            for t in &build_tables(n, d2, &divs, true) {
                let all: Vec<&[i64]> = t.tuples().collect();
                for fold in brute_folds(n, d2, t.e, true) {
                    assert!(all.contains(&fold.as_slice()), "n={n} e={} missing {fold:?}", t.e);
                }
            }
        }
    }

    #[test]
    fn row_sum_table() {
        // e = 1: A_0 = 2 Σ c_j, so A_0² = 4(d²+n-1)
        let t = &build_tables(4, 2, &[1], false)[0];
        let mut v: Vec<i64> = t.tuples().map(|x| x[0]).collect();
        v.sort();
        assert_eq!(v, vec![-4, 4]);
        // (6, 0): 4·5 = 20 is not a square
        assert!(build_tables(6, 0, &[1], false)[0].is_empty());
    }

    #[test]
    fn impossible_pair_is_empty_somewhere() {
        let divs: Vec<usize> = (1..28).filter(|e| 28 % e == 0).collect();
        let tables = build_tables(28, 6, &divs, false);
        assert!(tables.iter().any(|t| t.is_empty()));
    }

    #[test]
    fn feasibility_respects_remaining_capacity() {
        let t = CompressionTable { e: 2, tuples: vec![4, 0] };
        assert!(t.feasible(&[2, 2], &[1, 1]));
        assert!(!t.feasible(&[-2, 2], &[1, 0]));
    }
}
