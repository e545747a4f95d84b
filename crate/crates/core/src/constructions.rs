//! Solutions at the smallest admissible order `n = 2(d + 1)`.
//!
//! There are exactly four generator families at this order: `g1` (all signs
//! `-1`, any `n`), `g2` (alternating, even `n`) and the mutually transposed
//! pair `g4a`/`g4b` (period 4, `4 | n`). Each one is the block-circulant
//! expansion of a base block of order 1, 2 or 4.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::circulant::{is_orthogonal, Generator};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("family {family} does not exist at order {n}")]
    FamilyOrderMismatch { family: Family, n: usize },
    #[error("{0} is not an admissible base block")]
    BadBlock(String),
    #[error("block of order {block} repeated {copies} times gives order < 2")]
    OrderTooSmall { block: usize, copies: usize },
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    G1,
    G2,
    G4a,
    G4b,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::G1, Family::G2, Family::G4a, Family::G4b];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::G1 => "g1",
            Family::G2 => "g2",
            Family::G4a => "g4a",
            Family::G4b => "g4b",
        }
    }

    /// Smallest period of the sign pattern; `n` must be a multiple of it.
    pub fn period(self) -> usize {
        match self {
            Family::G1 => 1,
            Family::G2 => 2,
            Family::G4a | Family::G4b => 4,
        }
    }

    pub fn exists_at(self, n: usize) -> bool {
        n >= 2 && n % self.period() == 0
    }

    /// `c_j` of the family at position `j >= 1`.
    fn sign(self, j: usize) -> i8 {
        match self {
            Family::G1 => -1,
            Family::G2 => {
                if j % 2 == 1 {
                    1
                } else {
                    -1
                }
            }
            // + + - - starting at j = 1
            Family::G4a => {
                if matches!(j % 4, 1 | 2) {
                    1
                } else {
                    -1
                }
            }
            // - + + - starting at j = 1
            Family::G4b => {
                if matches!(j % 4, 2 | 3) {
                    1
                } else {
                    -1
                }
            }
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = ConstructionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| ConstructionError::UnknownFamily(s.to_string()))
    }
}

/// The family generator at order `n`, with `d = n/2 - 1`.
pub fn family_generator(family: Family, n: usize) -> Result<Generator, ConstructionError> {
    if !family.exists_at(n) {
        return Err(ConstructionError::FamilyOrderMismatch { family, n });
    }
    Ok(Generator::from_fn(n, n as i64 - 2, |j| family.sign(j)).expect("valid shape"))
}

/// Every solution at `d = n/2 - 1`, in family order.
pub fn enumerate_max_d(n: usize) -> Vec<Generator> {
    Family::ALL
        .into_iter()
        .filter(|f| f.exists_at(n))
        .map(|f| family_generator(f, n).expect("family exists"))
        .collect()
}

/// Names the family a generator belongs to, if any.
pub fn classify(g: &Generator) -> Option<Family> {
    let n = g.order();
    if g.d2() != n as u64 - 2 {
        return None;
    }
    Family::ALL
        .into_iter()
        .filter(|f| f.exists_at(n))
        .find(|&f| (1..n).all(|j| g.sign(j) == f.sign(j)))
}

/// Base block `B` of the block-circulant form: `(-1)`, `C_2 - I`,
/// `C_4a - 2I` or `C_4b - 2I`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BaseBlock {
    Minus,
    C2,
    C4a,
    C4b,
}

impl BaseBlock {
    pub const ALL: [BaseBlock; 4] = [BaseBlock::Minus, BaseBlock::C2, BaseBlock::C4a, BaseBlock::C4b];

    pub fn order(self) -> usize {
        match self {
            BaseBlock::Minus => 1,
            BaseBlock::C2 => 2,
            BaseBlock::C4a | BaseBlock::C4b => 4,
        }
    }

    /// Off-diagonal signs `c_1..c_{m-1}` of the block's order-`m` solution.
    pub fn pattern(self) -> &'static [i8] {
        match self {
            BaseBlock::Minus => &[],
            BaseBlock::C2 => &[1],
            BaseBlock::C4a => &[1, 1, -1],
            BaseBlock::C4b => &[-1, 1, 1],
        }
    }

    /// The order-`m` solution underlying the block (`C_2`, `C_4a`, `C_4b`).
    /// `Minus` has order 1 and no generator.
    pub fn solution(self) -> Option<Generator> {
        let m = self.order();
        (m >= 2).then(|| Generator::new(m, m as i64 - 2, self.pattern()).expect("constant"))
    }

    /// Recognizes `C_2`, `C_4a` or `C_4b` given as generators.
    pub fn from_generator(g: &Generator) -> Result<BaseBlock, ConstructionError> {
        [BaseBlock::C2, BaseBlock::C4a, BaseBlock::C4b]
            .into_iter()
            .find(|b| b.solution().as_ref() == Some(g))
            .ok_or_else(|| ConstructionError::BadBlock(g.to_string()))
    }

    pub fn family(self) -> Family {
        match self {
            BaseBlock::Minus => Family::G1,
            BaseBlock::C2 => Family::G2,
            BaseBlock::C4a => Family::G4a,
            BaseBlock::C4b => Family::G4b,
        }
    }
}

/// Hard-coded base blocks checked once against the orthogonality test.
fn validated_blocks() -> &'static [BaseBlock; 4] {
    static CHECKED: OnceLock<[BaseBlock; 4]> = OnceLock::new();
    CHECKED.get_or_init(|| {
        for b in BaseBlock::ALL {
            if let Some(g) = b.solution() {
                assert!(is_orthogonal(&g), "base block {b:?} is not orthogonal: {g}");
            }
        }
        BaseBlock::ALL
    })
}

/// Block-circulant expansion: order `n = m · copies`, `-1` at every multiple
/// of `m`, the block's pattern in between, `d = n/2 - 1`.
pub fn block_compose(block: BaseBlock, copies: usize) -> Result<Generator, ConstructionError> {
    validated_blocks();
    let m = block.order();
    let n = m * copies;
    if n < 2 {
        return Err(ConstructionError::OrderTooSmall { block: m, copies });
    }
    let pattern = block.pattern();
    Ok(Generator::from_fn(n, n as i64 - 2, |j| {
        if j % m == 0 {
            -1
        } else {
            pattern[j % m - 1]
        }
    })
    .expect("valid shape"))
}
