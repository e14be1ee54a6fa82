//! Dowker-Thistlethwaite codes of links: the alphabetic form, the
//! bracketed numeric form, validation and the crossing table.

use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DtError {
    #[error("code is too short")]
    TooShort,
    #[error("position {pos}: `{ch}` is not a letter")]
    NotALetter { pos: usize, ch: char },
    #[error("position {pos}: header letters must be lowercase")]
    UppercaseHeader { pos: usize },
    #[error("expected {expected} letters, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("component lengths sum to {sum}, not {n}")]
    BracketSum { sum: usize, n: usize },
    #[error("position {pos}: letter `{ch}` is out of range for {n} crossings")]
    LetterOutOfRange { pos: usize, ch: char, n: usize },
    #[error("{0} appears twice")]
    NotAPermutation(i64),
    #[error("malformed numeric code: {0}")]
    Numeric(String),
    #[error("{0} crossings cannot be written with letters")]
    TooManyCrossings(usize),
}

/// Signed even labels for the odd labels `1, 3, ..., 2n - 1`, bracketed
/// by component.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DTCode {
    pub brackets: Vec<Vec<i64>>,
}

impl DTCode {
    pub fn crossings(&self) -> usize {
        self.brackets.iter().map(Vec::len).sum()
    }

    pub fn components(&self) -> usize {
        self.brackets.len()
    }

    pub fn sequence(&self) -> Vec<i64> {
        self.brackets.concat()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.crossings(),
            "k": self.components(),
            "brackets": self.brackets,
            "sequence": self.sequence(),
            "valid": validate(self).is_valid(),
            "alpha": serialize(self).ok(),
        })
    }
}

impl fmt::Display for DTCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.brackets.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            let parts: Vec<String> = b.iter().map(i64::to_string).collect();
            write!(f, "({})", parts.join(","))?;
        }
        Ok(())
    }
}

fn count(pos: usize, ch: char) -> Result<usize, DtError> {
    match ch {
        'a'..='z' => Ok(ch as usize - 'a' as usize + 1),
        'A'..='Z' => Err(DtError::UppercaseHeader { pos }),
        _ => Err(DtError::NotALetter { pos, ch }),
    }
}

/// Parses the alphabetic form: crossings and components, the component
/// lengths, then the labels with `a = 2, b = 4, ...` and `A = -2, ...`.
pub fn parse_alpha(s: &str) -> Result<DTCode, DtError> {
    let chars: Vec<char> = s.trim().chars().collect();
    if chars.len() < 2 {
        return Err(DtError::TooShort);
    }
    let n = count(0, chars[0])?;
    let k = count(1, chars[1])?;
    if chars.len() != 2 + k + n {
        return Err(DtError::LengthMismatch { expected: 2 + k + n, found: chars.len() });
    }
    let lengths = (0..k).map(|i| count(2 + i, chars[2 + i])).collect::<Result<Vec<_>, _>>()?;
    let sum: usize = lengths.iter().sum();
    if sum != n {
        return Err(DtError::BracketSum { sum, n });
    }
    let mut seq = Vec::with_capacity(n);
    for (pos, &ch) in chars.iter().enumerate().skip(2 + k) {
        let v = match ch {
            'a'..='z' => 2 * (ch as i64 - 'a' as i64 + 1),
            'A'..='Z' => -2 * (ch as i64 - 'A' as i64 + 1),
            _ => return Err(DtError::NotALetter { pos, ch }),
        };
        if v.unsigned_abs() as usize > 2 * n {
            return Err(DtError::LetterOutOfRange { pos, ch, n });
        }
        seq.push(v);
    }
    let mut seen = HashSet::new();
    if let Some(&v) = seq.iter().find(|v| !seen.insert(v.abs())) {
        return Err(DtError::NotAPermutation(v.abs()));
    }
    let mut brackets = Vec::with_capacity(k);
    let mut rest = seq.as_slice();
    for len in lengths {
        let (head, tail) = rest.split_at(len);
        brackets.push(head.to_vec());
        rest = tail;
    }
    Ok(DTCode { brackets })
}

/// Parses `(6,-8)(-10,14,...)`, with optional spaces.
pub fn parse_numeric(s: &str) -> Result<DTCode, DtError> {
    let bad = || DtError::Numeric(s.to_string());
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = t.strip_prefix('(').and_then(|x| x.strip_suffix(')')).ok_or_else(bad)?;
    let brackets = inner
        .split(")(")
        .map(|b| b.split(',').map(|x| x.parse::<i64>().map_err(|_| bad())).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DTCode { brackets })
}

/// Alphabetic form; at most 26 crossings fit.
pub fn serialize(code: &DTCode) -> Result<String, DtError> {
    let n = code.crossings();
    let letter = |v: usize| (b'a' + (v - 1) as u8) as char;
    if n > 26 || code.components() > 26 || n == 0 || code.brackets.iter().any(Vec::is_empty) {
        return Err(DtError::TooManyCrossings(n));
    }
    let mut s = String::new();
    s.push(letter(n));
    s.push(letter(code.components()));
    for b in &code.brackets {
        s.push(letter(b.len()));
    }
    for &v in &code.sequence() {
        let m = (v.unsigned_abs() / 2) as usize;
        if v % 2 != 0 || m == 0 || m > 26 {
            return Err(DtError::Numeric(code.to_string()));
        }
        let c = letter(m);
        s.push(if v < 0 { c.to_ascii_uppercase() } else { c });
    }
    Ok(s)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    NotEven(i64),
    OutOfRange(i64),
    NotAPermutation(i64),
    EmptyComponent(usize),
    BracketSum { sum: usize, n: usize },
    /// A negated label in a code named as alternating.
    NegativeInAlternating(i64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub negations: usize,
    /// Whether a diagram realizes the code is not checked.
    pub realizability: String,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate(code: &DTCode) -> ValidationReport {
    let n = code.crossings();
    let mut violations = Vec::new();
    for (i, b) in code.brackets.iter().enumerate() {
        if b.is_empty() {
            violations.push(Violation::EmptyComponent(i));
        }
    }
    let mut seen = HashSet::new();
    for v in code.sequence() {
        if v % 2 != 0 {
            violations.push(Violation::NotEven(v));
        } else if v == 0 || v.unsigned_abs() as usize > 2 * n {
            violations.push(Violation::OutOfRange(v));
        } else if !seen.insert(v.abs()) {
            violations.push(Violation::NotAPermutation(v.abs()));
        }
    }
    let sum: usize = code.brackets.iter().map(Vec::len).sum();
    if sum != n {
        violations.push(Violation::BracketSum { sum, n });
    }
    ValidationReport {
        violations,
        negations: code.sequence().iter().filter(|&&v| v < 0).count(),
        realizability: "unchecked".into(),
    }
}

/// Like `validate`, and a table name of the form `<n>a<index>` marks the
/// link as alternating, so no label may be negated.
pub fn validate_entry(name: &str, code: &DTCode) -> ValidationReport {
    let mut r = validate(code);
    let digits = name.trim_start_matches(|c: char| c.is_ascii_digit());
    if digits.len() < name.len() && digits.starts_with('a') {
        r.violations.extend(code.sequence().into_iter().filter(|&v| v < 0).map(Violation::NegativeInAlternating));
    }
    r
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crossing {
    pub odd: i64,
    /// Negative when the even label is at an over-crossing.
    pub even: i64,
    pub odd_component: usize,
    pub even_component: usize,
}

/// Pairs each odd label with its signed even label. Component `c` carries
/// the labels `2 s_c + 1 ..= 2 s_(c+1)`, `s_c` the earlier bracket lengths.
pub fn crossing_table(code: &DTCode) -> Vec<Crossing> {
    let mut ends = Vec::new();
    let mut total = 0i64;
    for b in &code.brackets {
        total += 2 * b.len() as i64;
        ends.push(total);
    }
    let component = |label: i64| ends.iter().position(|&e| label <= e).unwrap_or(ends.len());
    code.sequence()
        .into_iter()
        .enumerate()
        .map(|(i, even)| {
            let odd = 2 * i as i64 + 1;
            Crossing { odd, even, odd_component: component(odd), even_component: component(even.abs()) }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_example() {
        let c = parse_alpha("hbbfcDEgFHAb").unwrap();
        assert_eq!(c.brackets, vec![vec![6, -8], vec![-10, 14, -12, -16, -2, 4]]);
        assert_eq!(c.to_string(), "(6,-8) (-10,14,-12,-16,-2,4)");
        assert_eq!(serialize(&c).unwrap(), "hbbfcDEgFHAb");
        assert_eq!(parse_numeric("(6,-8)(-10,14,-12,-16,-2,4)").unwrap(), c);
    }

    #[test]
    fn figure_eight_knot() {
        let c = parse_alpha("dadbcda").unwrap();
        assert_eq!(c.brackets, vec![vec![4, 6, 8, 2]]);
        let pairs: Vec<(i64, i64)> = crossing_table(&c).iter().map(|x| (x.odd, x.even)).collect();
        assert_eq!(pairs, vec![(1, 4), (3, 6), (5, 8), (7, 2)]);
        assert!(crossing_table(&c).iter().all(|x| x.odd_component == 0 && x.even_component == 0));
    }

    #[test]
    fn rejections() {
        assert!(matches!(parse_alpha("hbbfcDEgFHAz"), Err(DtError::LetterOutOfRange { pos: 11, .. })));
        assert!(matches!(parse_alpha("hbbfcDEgFHA"), Err(DtError::LengthMismatch { .. })));
        assert!(matches!(parse_alpha("dadbcdd"), Err(DtError::NotAPermutation(8))));
        assert!(matches!(parse_alpha("hbbecDEgFHAb"), Err(DtError::BracketSum { sum: 7, n: 8 })));
        assert!(matches!(parse_alpha("dAdbcda"), Err(DtError::UppercaseHeader { pos: 1 })));
        assert!(matches!(parse_alpha("da1bcda"), Err(DtError::NotALetter { pos: 2, .. })));
    }

    #[test]
    fn single_crossing() {
        let c = DTCode { brackets: vec![vec![2]] };
        assert_eq!(serialize(&c).unwrap(), "aaaa");
        assert_eq!(parse_alpha("aaaa").unwrap(), c);
    }

    #[test]
    fn validator_reports() {
        let dup = DTCode { brackets: vec![vec![4, 4, 2]] };
        assert!(validate(&dup).violations.contains(&Violation::NotAPermutation(4)));
        let c = parse_alpha("hbbfcDEgFHAb").unwrap();
        assert!(validate(&c).is_valid());
        assert_eq!(validate(&c).negations, 5);
        assert!(!validate_entry("8a99", &c).is_valid());
        assert!(validate_entry("8n99", &c).is_valid());
    }

    #[test]
    fn two_components() {
        let c = parse_alpha("hbbfcDEgFHAb").unwrap();
        let t = crossing_table(&c);
        assert_eq!((t[0].odd_component, t[1].odd_component, t[2].odd_component), (0, 0, 1));
        assert_eq!(t[0].even_component, 1);
        assert_eq!(t[6].even, -2);
        assert_eq!(t[6].even_component, 0);
    }
}
