//! Independent oracles: plain integer arithmetic on the doubled first row,
//! nothing shared with the library beyond the `Generator` accessors.

#![allow(dead_code)]

use circorth::Generator;

/// `2 c_j` for `j = 0..n` from a sign slice of length `n - 1`.
pub fn doubled_row(d2: i64, signs: &[i8]) -> Vec<i64> {
    std::iter::once(d2).chain(signs.iter().map(|&s| 2 * s as i64)).collect()
}

pub fn periodic4(row: &[i64], m: usize) -> i64 {
    let n = row.len();
    (0..n).map(|k| row[k] * row[(k + m) % n]).sum()
}

pub fn orthogonal(row: &[i64]) -> bool {
    (1..row.len()).all(|m| periodic4(row, m) == 0)
}

/// Every sign vector `c_1..c_{n-1}` that gives an orthogonal circulant, in
/// the library's order (`+` before `-`, position 1 first).
pub fn brute(n: usize, d2: u64) -> Vec<String> {
    let mut out = Vec::new();
    for mask in 0u32..1 << (n - 1) {
        let signs: Vec<i8> = (0..n - 1).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
        if orthogonal(&doubled_row(d2 as i64, &signs)) {
            out.push(signs.iter().map(|&s| if s > 0 { '+' } else { '-' }).collect::<String>());
        }
    }
    out.sort_by_key(|s| s.chars().map(|c| c == '-').collect::<Vec<_>>());
    out
}

pub fn sign_strings(gens: impl IntoIterator<Item = Generator>) -> Vec<String> {
    gens.into_iter().map(|g| g.sign_string()).collect()
}

/// Naive DFT check of `|λ_k|² = d² + n - 1`, recomputed here with the angle
/// taken directly from `2πjk/n`.
pub fn dft_moduli_ok(row: &[i64], tol: f64) -> bool {
    let n = row.len();
    let target = row.iter().map(|&v| (v * v) as f64 / 4.0).sum::<f64>();
    (0..n).all(|k| {
        let (mut re, mut im) = (0.0f64, 0.0f64);
        for (j, &v) in row.iter().enumerate() {
            let a = 2.0 * std::f64::consts::PI * (j * k) as f64 / n as f64;
            re += v as f64 / 2.0 * a.cos();
            im += v as f64 / 2.0 * a.sin();
        }
        (re * re + im * im - target).abs() <= tol
    })
}

pub fn mobius_naive(v: u64) -> i8 {
    let mut v = v;
    let mut sign = 1i8;
    let mut p = 2;
    while p * p <= v {
        if v % p == 0 {
            v /= p;
            if v % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if v > 1 {
        sign = -sign;
    }
    sign
}
