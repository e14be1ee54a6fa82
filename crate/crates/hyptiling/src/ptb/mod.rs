//! Once-punctured torus bundles: LR words, the layered monodromy
//! triangulation, the cusp triangulation T0 and its symmetries.

mod layered;
mod t0;

pub use layered::{layered_triangulation_unchecked, monodromy_triangulation};
pub use t0::{cusp_triangulation, edge_correspondence, matches_cusp_link, t0_symmetry_bruteforce, T0_BRUTEFORCE_MAX_LEN, CuspTriangulationT0, T0Automorphism, T0Edge, T0Triangle};

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    L,
    R,
}

impl Letter {
    pub fn swapped(self) -> Letter {
        match self {
            Letter::L => Letter::R,
            Letter::R => Letter::L,
        }
    }

    pub fn matrix(self) -> [[i64; 2]; 2] {
        match self {
            Letter::L => [[1, 0], [1, 1]],
            Letter::R => [[1, 1], [0, 1]],
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PtbError {
    #[error("empty word")]
    Empty,
    #[error("unexpected character `{0}` in word")]
    BadChar(char),
    #[error("word {0} is not hyperbolic (it must contain both L and R)")]
    NotHyperbolic(String),
    #[error("word length {len} exceeds the brute-force bound {bound}")]
    TooLong { len: usize, bound: usize },
}

/// A cyclic word in L and R together with the sign of the monodromy.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LRWord {
    pub letters: Vec<Letter>,
    /// `true` for `+φ_w`, `false` for `-φ_w`.
    pub positive: bool,
}

impl FromStr for LRWord {
    type Err = PtbError;

    /// Accepts `LRR`, `+LRR` or `-LRR`, case-insensitive.
    fn from_str(s: &str) -> Result<Self, PtbError> {
        let s = s.trim();
        let (positive, body) = match s.strip_prefix('-') {
            Some(rest) => (false, rest),
            None => (true, s.strip_prefix('+').unwrap_or(s)),
        };
        let letters = body
            .chars()
            .map(|c| match c.to_ascii_uppercase() {
                'L' => Ok(Letter::L),
                'R' => Ok(Letter::R),
                _ => Err(PtbError::BadChar(c)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        LRWord::new(letters, positive)
    }
}

impl fmt::Display for LRWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            write!(f, "-")?;
        }
        for l in &self.letters {
            write!(f, "{l:?}")?;
        }
        Ok(())
    }
}

fn mat_mul(a: [[i64; 2]; 2], b: [[i64; 2]; 2]) -> [[i64; 2]; 2] {
    let mut c = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

fn rotations(w: &[Letter]) -> impl Iterator<Item = Vec<Letter>> + '_ {
    (0..w.len()).map(move |r| w[r..].iter().chain(&w[..r]).copied().collect())
}

fn cyclically_equal(a: &[Letter], b: &[Letter]) -> bool {
    a.len() == b.len() && rotations(a).any(|r| r == b)
}

impl LRWord {
    pub fn new(letters: Vec<Letter>, positive: bool) -> Result<Self, PtbError> {
        if letters.is_empty() {
            return Err(PtbError::Empty);
        }
        Ok(LRWord { letters, positive })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters_str(&self) -> String {
        self.letters.iter().map(|l| format!("{l:?}")).collect()
    }

    /// The lexicographically least rotation, same sign.
    pub fn canonical(&self) -> LRWord {
        let best = rotations(&self.letters).min().unwrap();
        LRWord { letters: best, positive: self.positive }
    }

    /// Whether the word contains both letters (equivalently `|tr φ_w| > 2`).
    pub fn is_hyperbolic(&self) -> bool {
        self.letters.contains(&Letter::L) && self.letters.contains(&Letter::R)
    }

    /// Length of the shortest `u` with `w = u^m`.
    pub fn primitive_length(&self) -> usize {
        let n = self.len();
        (1..=n).find(|&d| n % d == 0 && (0..n).all(|i| self.letters[i] == self.letters[i % d])).unwrap()
    }

    /// The power `m` in `w = u^m`.
    pub fn power(&self) -> usize {
        self.len() / self.primitive_length()
    }

    fn swapped(&self) -> Vec<Letter> {
        self.letters.iter().map(|l| l.swapped()).collect()
    }

    fn reversed(&self) -> Vec<Letter> {
        self.letters.iter().rev().copied().collect()
    }

    /// `w = (LR)^m` or `(LLRR)^m` as a cyclic word; for these T0 has
    /// simplicial symmetries that do not preserve the horizontal strips.
    pub fn is_exceptional(&self) -> bool {
        let u: Vec<Letter> = self.letters[..self.primitive_length()].to_vec();
        cyclically_equal(&u, &[Letter::L, Letter::R]) || cyclically_equal(&u, &[Letter::L, Letter::L, Letter::R, Letter::R])
    }

    /// Invariant trace field of the arithmetic bundles (`LR`, `LLR`, `LRR`,
    /// `LLRR` and their powers); `None` otherwise.
    pub fn arithmetic_field(&self) -> Option<&'static str> {
        use Letter::{L, R};
        let u: Vec<Letter> = self.letters[..self.primitive_length()].to_vec();
        if cyclically_equal(&u, &[L, R]) {
            Some("Q(sqrt(-3))")
        } else if cyclically_equal(&u, &[L, L, R]) || cyclically_equal(&u, &[L, R, R]) {
            Some("Q(sqrt(-7))")
        } else if cyclically_equal(&u, &[L, L, R, R]) {
            Some("Q(sqrt(-1))")
        } else {
            None
        }
    }
}

/// `±φ_w`, the product of the letter matrices.
pub fn word_to_matrix(w: &LRWord) -> [[i64; 2]; 2] {
    let mut m = [[1, 0], [0, 1]];
    for l in &w.letters {
        m = mat_mul(m, l.matrix());
    }
    if !w.positive {
        for row in &mut m {
            for x in row {
                *x = -*x;
            }
        }
    }
    m
}

/// `|trace| > 2`.
pub fn is_hyperbolic(m: [[i64; 2]; 2]) -> bool {
    (m[0][0] + m[1][1]).abs() > 2
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SymmetryType {
    /// Shift by two strips (central `-I`).
    T1,
    /// Horizontal translation when `w` is a proper power.
    T2,
    /// Rotation by π: `w` is cyclically palindromic.
    T3,
    /// Glide along a strip: a rotation of `w` swaps L and R.
    T4,
    /// Vertical glide: reversing `w` swaps L and R.
    T5,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryTypeSet {
    pub types: Vec<SymmetryType>,
    pub power: usize,
    pub exceptional: bool,
    pub arithmetic_field: Option<String>,
}

impl SymmetryTypeSet {
    pub fn contains(&self, t: SymmetryType) -> bool {
        self.types.contains(&t)
    }

    /// Order of the group of strip- and direction-preserving symmetries of
    /// T0 modulo Γ0 these types generate: `2 m k` with `k = 1, 2` or `4`.
    pub fn predicted_order(&self) -> usize {
        use SymmetryType::*;
        let k = [T3, T4, T5].iter().filter(|t| self.contains(**t)).count();
        let k = match k {
            0 => 1,
            1 => 2,
            _ => 4,
        };
        2 * self.power * k
    }
}

/// The symmetry types of the bundle from string predicates on `w`.
pub fn classify_symmetries(w: &LRWord) -> SymmetryTypeSet {
    use SymmetryType::*;
    let n = w.len();
    let mut types = vec![T1];
    if w.power() >= 2 {
        types.push(T2);
    }
    if cyclically_equal(&w.reversed(), &w.letters) {
        types.push(T3);
    }
    if n % 2 == 0 {
        if cyclically_equal(&w.swapped(), &w.letters) {
            types.push(T4);
        }
        let rev_swapped: Vec<Letter> = w.reversed().iter().map(|l| l.swapped()).collect();
        if cyclically_equal(&rev_swapped, &w.letters) {
            types.push(T5);
        }
    }
    SymmetryTypeSet {
        types,
        power: w.power(),
        exceptional: w.is_exceptional(),
        arithmetic_field: w.arithmetic_field().map(String::from),
    }
}

/// All hyperbolic cyclic words of the given length, one per rotation class,
/// each in canonical form with positive sign.
pub fn hyperbolic_words(len: usize) -> Vec<LRWord> {
    let mut out = Vec::new();
    for bits in 0u32..(1 << len) {
        let letters: Vec<Letter> = (0..len).map(|i| if bits >> i & 1 == 1 { Letter::R } else { Letter::L }).collect();
        let w = LRWord { letters, positive: true };
        if w.is_hyperbolic() && w.canonical() == w {
            out.push(w);
        }
    }
    out
}
