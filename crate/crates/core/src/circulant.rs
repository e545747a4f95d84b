//! Exact integer algebra on circulant generators.
//!
//! A circulant matrix is determined by its first row `(c_0, c_1, ..., c_{n-1})`.
//! Here `c_0 = d >= 0` may be a half-integer, so it is stored doubled as `d2`,
//! and `c_1..c_{n-1}` are signs packed one bit per entry (`+1` is bit 0, `-1`
//! is bit 1). Inner products are computed in a scaled integer domain and never
//! rounded; the only floating point code is [`eigenvalue_moduli`], which is a
//! cross-check.
//!
//! Row `i` of a circulant dotted with row `i + m` depends only on `m`, so every
//! orthogonality question reduces to the periodic autocorrelation of the
//! generator.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported order. Scaled correlations stay far inside `i64` here.
pub const MAX_ORDER: usize = 1 << 16;

/// Default tolerance for [`eigenvalue_moduli`].
pub const DEFAULT_EIGEN_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeneratorError {
    #[error("order {0} is too small, need n >= 2")]
    OrderTooSmall(usize),
    #[error("order {0} exceeds the supported maximum {MAX_ORDER}")]
    OrderTooLarge(usize),
    #[error("diagonal must be non-negative, got 2d = {0}")]
    NegativeDiagonal(i64),
    #[error("expected {expected} signs for order {n}, got {got}")]
    BadSignLength { n: usize, expected: usize, got: usize },
    #[error("sign at index {index} is {value}, expected +1 or -1")]
    BadSignValue { index: usize, value: i64 },
}

/// Error from the `n d2 signs` text format. `column` is 1-based and points at
/// the first offending character.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("column {column}: {message}")]
pub struct ParseError {
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn new(column: usize, message: impl Into<String>) -> Self {
        Self {
            column,
            message: message.into(),
        }
    }
}

/// Packed `±1` sequence for positions `1..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
struct SignBits {
    len: usize,
    words: Vec<u64>,
}

impl SignBits {
    fn all_plus(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    #[inline]
    fn is_minus(&self, pos: usize) -> bool {
        (self.words[pos >> 6] >> (pos & 63)) & 1 == 1
    }

    #[inline]
    fn set_minus(&mut self, pos: usize) {
        self.words[pos >> 6] |= 1 << (pos & 63);
    }
}

/// First row of a circulant with `c_0 = d2 / 2` and `c_j = ±1` for `j >= 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    n: usize,
    d2: u64,
    signs: SignBits,
}

impl Generator {
    /// Validated constructor; `signs[j - 1]` holds `c_j`.
    pub fn new(n: usize, d2: i64, signs: &[i8]) -> Result<Self, GeneratorError> {
        Self::check_header(n, d2)?;
        if signs.len() != n - 1 {
            return Err(GeneratorError::BadSignLength {
                n,
                expected: n - 1,
                got: signs.len(),
            });
        }
        let mut bits = SignBits::all_plus(n - 1);
        for (pos, &s) in signs.iter().enumerate() {
            match s {
                1 => {}
                -1 => bits.set_minus(pos),
                other => {
                    return Err(GeneratorError::BadSignValue {
                        index: pos + 1,
                        value: other as i64,
                    })
                }
            }
        }
        Ok(Self {
            n,
            d2: d2 as u64,
            signs: bits,
        })
    }

    /// Builds a generator from a closure giving `c_j` for `j in 1..n`.
    pub fn from_fn(
        n: usize,
        d2: i64,
        mut sign: impl FnMut(usize) -> i8,
    ) -> Result<Self, GeneratorError> {
        let signs: Vec<i8> = (1..n.max(1)).map(&mut sign).collect();
        Self::new(n, d2, &signs)
    }

    fn check_header(n: usize, d2: i64) -> Result<(), GeneratorError> {
        if n < 2 {
            return Err(GeneratorError::OrderTooSmall(n));
        }
        if n > MAX_ORDER {
            return Err(GeneratorError::OrderTooLarge(n));
        }
        if d2 < 0 {
            return Err(GeneratorError::NegativeDiagonal(d2));
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// Twice the diagonal value.
    pub fn d2(&self) -> u64 {
        self.d2
    }

    /// `c_j` for `1 <= j < n`.
    ///
    /// # Panics
    /// If `j` is 0 or out of range.
    #[inline]
    pub fn sign(&self, j: usize) -> i8 {
        assert!(j >= 1 && j < self.n, "sign index {j} out of 1..{}", self.n);
        if self.signs.is_minus(j - 1) {
            -1
        } else {
            1
        }
    }

    /// `2 c_j` for any `j` (index 0 gives `d2`).
    #[inline]
    pub fn value2(&self, j: usize) -> i64 {
        if j == 0 {
            self.d2 as i64
        } else {
            2 * self.sign(j) as i64
        }
    }

    pub fn signs(&self) -> Vec<i8> {
        (1..self.n).map(|j| self.sign(j)).collect()
    }

    /// Scaled first row `(d2, 2c_1, ..., 2c_{n-1})`.
    pub fn row2(&self) -> Vec<i64> {
        (0..self.n).map(|j| self.value2(j)).collect()
    }

    /// `+`/`-` string for `c_1..c_{n-1}`.
    pub fn sign_string(&self) -> String {
        (1..self.n)
            .map(|j| if self.sign(j) == 1 { '+' } else { '-' })
            .collect()
    }

    /// `c_j = c_{n-j}` for all `j`, i.e. the circulant equals its transpose.
    pub fn is_symmetric(&self) -> bool {
        (1..=self.n / 2).all(|j| self.sign(j) == self.sign(self.n - j))
    }

    /// Generator of the transpose: `c_j -> c_{n-j}`.
    pub fn reversed(&self) -> Generator {
        let n = self.n;
        Generator::from_fn(n, self.d2 as i64, |j| self.sign(n - j)).expect("same shape")
    }

    /// Lexicographic key on `c_1..c_{n-1}` with `+1 < -1`.
    pub fn lex_key(&self) -> Vec<bool> {
        (1..self.n).map(|j| self.signs.is_minus(j - 1)).collect()
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Generator({self})")
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.n, self.d2, self.sign_string())
    }
}

impl FromStr for Generator {
    type Err = ParseError;

    /// Parses `n d2 s` with `s` a string of `n - 1` characters from `+`/`-`.
    fn from_str(line: &str) -> Result<Self, Self::Err> {
        let mut fields = Vec::with_capacity(3);
        let mut start = None;
        for (i, ch) in line.char_indices() {
            if ch.is_whitespace() {
                if let Some(s) = start.take() {
                    fields.push((s, &line[s..i]));
                }
            } else if start.is_none() {
                start = Some(i);
            }
        }
        if let Some(s) = start {
            fields.push((s, &line[s..]));
        }
        let col = |byte: usize| line[..byte].chars().count() + 1;

        let names = ["order", "twice-diagonal", "sign string"];
        let missing = |k: usize| ParseError::new(line.chars().count() + 1, format!("missing {}", names[k]));
        if fields.len() > 3 {
            return Err(ParseError::new(col(fields[3].0), "unexpected trailing field"));
        }

        let &(n_at, n_txt) = fields.first().ok_or_else(|| missing(0))?;
        let n: usize = parse_unsigned(n_txt).map_err(|off| {
            ParseError::new(col(n_at) + off, format!("invalid order `{n_txt}`"))
        })?;
        if n < 2 {
            return Err(ParseError::new(col(n_at), format!("order {n} is below 2")));
        }
        if n > MAX_ORDER {
            return Err(ParseError::new(col(n_at), format!("order {n} is above {MAX_ORDER}")));
        }
        let &(d_at, d_txt) = fields.get(1).ok_or_else(|| missing(1))?;
        let d2: u64 = parse_unsigned(d_txt).map_err(|off| {
            ParseError::new(col(d_at) + off, format!("invalid twice-diagonal `{d_txt}`"))
        })?;
        if d2 > i64::MAX as u64 {
            return Err(ParseError::new(col(d_at), "twice-diagonal out of range"));
        }
        let &(s_at, s_txt) = fields.get(2).ok_or_else(|| missing(2))?;
        let mut signs = Vec::with_capacity(n - 1);
        for (off, ch) in s_txt.chars().enumerate() {
            match ch {
                '+' => signs.push(1),
                '-' => signs.push(-1),
                other => {
                    return Err(ParseError::new(
                        col(s_at) + off,
                        format!("unexpected character `{other}` in sign string"),
                    ))
                }
            }
        }
        if signs.len() != n - 1 {
            let at = col(s_at) + signs.len().min(n - 1);
            return Err(ParseError::new(
                at,
                format!("sign string has {} characters, order {n} needs {}", signs.len(), n - 1),
            ));
        }
        Generator::new(n, d2 as i64, &signs).map_err(|e| ParseError::new(col(n_at), e.to_string()))
    }
}

/// Digits only; on failure returns the 0-based offset of the bad character.
fn parse_unsigned<T: FromStr>(txt: &str) -> Result<T, usize> {
    if let Some(off) = txt.chars().position(|c| !c.is_ascii_digit()) {
        return Err(off);
    }
    txt.parse().map_err(|_| 0)
}

impl Serialize for Generator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Generator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let txt = String::deserialize(d)?;
        txt.parse().map_err(serde::de::Error::custom)
    }
}

/// Validated constructor, free-function form.
pub fn make_generator(n: usize, d2: i64, signs: &[i8]) -> Result<Generator, GeneratorError> {
    Generator::new(n, d2, signs)
}

/// Periodic autocorrelation of a generator, scaled by 4.
///
/// `values4[m] = 4 Σ_k c_k c_{(k+m) mod n}`. The factor 4 keeps the zero shift
/// exact for half-integer `d` (it contains `d²`); every other shift is even in
/// this scale, so [`AutocorrelationProfile::values2`] is available whenever
/// `d` is an integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutocorrelationProfile {
    pub n: usize,
    pub values4: Vec<i64>,
}

impl AutocorrelationProfile {
    /// The profile scaled by 2, or `None` when `d` is a half-integer.
    pub fn values2(&self) -> Option<Vec<i64>> {
        if self.values4.iter().all(|v| v % 2 == 0) {
            Some(self.values4.iter().map(|v| v / 2).collect())
        } else {
            None
        }
    }

    /// `4 (d² + n - 1)`.
    pub fn peak4(&self) -> i64 {
        self.values4[0]
    }

    pub fn is_perfect(&self) -> bool {
        self.values4[1..].iter().all(|&v| v == 0)
    }
}

/// Scaled dot product of the generator with its cyclic shift by `m`.
#[inline]
pub fn shift_product4(row2: &[i64], m: usize) -> i64 {
    let n = row2.len();
    let mut acc = 0;
    for k in 0..n {
        let p = k + m;
        let p = if p >= n { p - n } else { p };
        acc += row2[k] * row2[p];
    }
    acc
}

pub fn autocorrelation(g: &Generator) -> AutocorrelationProfile {
    let row2 = g.row2();
    let values4 = (0..g.n).map(|m| shift_product4(&row2, m)).collect();
    AutocorrelationProfile { n: g.n, values4 }
}

/// `C Cᵀ = (d² + n - 1) I`, checked shift by shift with early exit.
///
/// Shifts `m` and `n - m` carry the same value, so only `1..=n/2` is scanned.
pub fn is_orthogonal(g: &Generator) -> bool {
    let row2 = g.row2();
    (1..=g.n / 2).all(|m| shift_product4(&row2, m) == 0)
}

/// Scaled row sums of the generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RowSums {
    /// `2 Σ_j c_j`.
    pub same2: i64,
    /// `2 Σ_j (-1)^j c_j`, present for even `n`.
    pub alternating2: Option<i64>,
}

pub fn row_sums(g: &Generator) -> RowSums {
    let mut same2 = 0;
    let mut alt2 = 0;
    for j in 0..g.n {
        let v = g.value2(j);
        same2 += v;
        alt2 += if j % 2 == 0 { v } else { -v };
    }
    RowSums {
        same2,
        alternating2: (g.n % 2 == 0).then_some(alt2),
    }
}

/// `4 (d² + n - 1)`, the scaled squared modulus every eigenvalue must have.
pub fn target4(n: usize, d2: u64) -> i64 {
    let d2 = d2 as i64;
    d2 * d2 + 4 * (n as i64 - 1)
}

/// Floating point cross-check: every DFT eigenvalue `λ_k = Σ_j c_j ω^{jk}`
/// satisfies `| |λ_k|² - (d² + n - 1) | <= tol`.
pub fn eigenvalue_moduli(g: &Generator, tol: f64) -> bool {
    let n = g.n;
    let d = g.d2 as f64 / 2.0;
    let target = d * d + (n as f64 - 1.0);
    let c: Vec<f64> = (0..n).map(|j| g.value2(j) as f64 / 2.0).collect();
    let step = std::f64::consts::TAU / n as f64;
    (0..n).all(|k| {
        let (mut re, mut im) = (0.0, 0.0);
        for (j, &cj) in c.iter().enumerate() {
            // reduce jk mod n before scaling so the angle stays small
            let angle = step * ((j * k) % n) as f64;
            re += cj * angle.cos();
            im += cj * angle.sin();
        }
        ((re * re + im * im) - target).abs() <= tol
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> Generator {
        s.parse().unwrap()
    }

    #[test]
    fn constructor_examples() {
        let c2 = Generator::new(2, 0, &[1]).unwrap();
        assert_eq!(c2.to_string(), "2 0 +");
        let c4a = Generator::new(4, 2, &[1, 1, -1]).unwrap();
        assert_eq!(c4a.signs(), vec![1, 1, -1]);
        let half = Generator::new(3, 1, &[-1, -1]).unwrap();
        assert_eq!(half.d2(), 1);
        assert_eq!(half.row2(), vec![1, -2, -2]);
    }

    #[test]
    fn constructor_errors() {
        assert_eq!(Generator::new(1, 0, &[]), Err(GeneratorError::OrderTooSmall(1)));
        assert_eq!(
            Generator::new(3, -2, &[1, 1]),
            Err(GeneratorError::NegativeDiagonal(-2))
        );
        assert_eq!(
            Generator::new(4, 2, &[1, 1]),
            Err(GeneratorError::BadSignLength { n: 4, expected: 3, got: 2 })
        );
        assert_eq!(
            Generator::new(4, 2, &[1, 0, 1]),
            Err(GeneratorError::BadSignValue { index: 2, value: 0 })
        );
    }

    #[test]
    fn autocorrelation_examples() {
        assert_eq!(autocorrelation(&g("2 0 +")).values2(), Some(vec![2, 0]));
        assert_eq!(autocorrelation(&g("4 2 ++-")).values2(), Some(vec![8, 0, 0, 0]));
        assert_eq!(autocorrelation(&g("4 2 +--")).values2(), Some(vec![8, 0, -8, 0]));
        // g2 at n = 4 is orthogonal
        assert_eq!(autocorrelation(&g("4 2 +-+")).values2(), Some(vec![8, 0, 0, 0]));
        // d = 1/2: the peak 4(1/4 + 2) = 9 has no exact ×2 form
        let half = autocorrelation(&g("3 1 --"));
        assert_eq!(half.values4, vec![9, 0, 0]);
        assert_eq!(half.values2(), None);
    }

    #[test]
    fn orthogonality_examples() {
        assert!(is_orthogonal(&g("4 2 ++-")));
        assert!(!is_orthogonal(&g("4 2 +--")));
        assert!(is_orthogonal(&g("4 2 +-+")));
        assert!(is_orthogonal(&g("3 1 --")));
        assert!(is_orthogonal(&g("2 0 +")));
    }

    #[test]
    fn row_sum_examples() {
        assert_eq!(row_sums(&g("4 2 ++-")).same2, 4);
        assert_eq!(
            row_sums(&g("2 0 +")),
            RowSums { same2: 2, alternating2: Some(-2) }
        );
        let s = row_sums(&g("6 4 -----"));
        assert_eq!(s.same2, -6);
        assert_eq!(s.same2 * s.same2, target4(6, 4));
        assert_eq!(row_sums(&g("3 1 --")).alternating2, None);
    }

    #[test]
    fn eigenvalue_examples() {
        assert!(eigenvalue_moduli(&g("2 0 +"), 1e-9));
        assert!(eigenvalue_moduli(&g("4 2 ++-"), 1e-9));
        assert!(!eigenvalue_moduli(&g("4 2 +--"), 1e-9));
        assert!(eigenvalue_moduli(&g("3 1 --"), 1e-9));
    }

    #[test]
    fn parse_errors_point_at_offender() {
        let e = "4 2 +x-".parse::<Generator>().unwrap_err();
        assert_eq!(e.column, 6);
        let e = "4 2a ++-".parse::<Generator>().unwrap_err();
        assert_eq!(e.column, 4);
        let e = "4 2 ++".parse::<Generator>().unwrap_err();
        assert_eq!(e.column, 7);
        let e = "4 2".parse::<Generator>().unwrap_err();
        assert!(e.message.contains("sign string"));
        let e = "1 0 ".parse::<Generator>().unwrap_err();
        assert_eq!(e.column, 1);
        let e = "  4 2 ++- extra".parse::<Generator>().unwrap_err();
        assert_eq!(e.column, 11);
    }

    #[test]
    fn reversal_and_symmetry() {
        let a = g("8 6 ++--++-");
        assert!(!a.is_symmetric());
        assert_eq!(a.reversed().to_string(), "8 6 -++--++");
        assert!(g("6 4 +-+-+").is_symmetric());
    }

    #[test]
    fn packed_signs_cross_word_boundary() {
        let n = 200;
        let g = Generator::from_fn(n, 4, |j| if j % 3 == 0 { -1 } else { 1 }).unwrap();
        for j in 1..n {
            assert_eq!(g.sign(j), if j % 3 == 0 { -1 } else { 1 });
        }
        assert_eq!(g.to_string().parse::<Generator>().unwrap(), g);
    }
}
