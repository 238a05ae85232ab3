use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result, TokenError};

/// A Chao tone-letter transcription: two or three relative pitch levels in `1..=5`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Transcription {
    digits: [u8; 3],
    len: u8,
}

impl Transcription {
    pub fn new(digits: &[u8]) -> Result<Self, TokenError> {
        if !(2..=3).contains(&digits.len()) {
            return Err(TokenError::Length(digits.len()));
        }
        let mut out = [0u8; 3];
        for (slot, &d) in out.iter_mut().zip(digits) {
            if !(1..=5).contains(&d) {
                return Err(TokenError::Digit(char::from_digit(u32::from(d % 10), 10).unwrap_or('?')));
            }
            *slot = d;
        }
        Ok(Transcription {
            digits: out,
            len: digits.len() as u8,
        })
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits[..self.len as usize]
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    /// Always false; present for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_contour(&self) -> bool {
        self.len == 3
    }

    pub fn first(&self) -> u8 {
        self.digits[0]
    }

    pub fn last(&self) -> u8 {
        self.digits[self.len as usize - 1]
    }

    /// Three-point pitch targets; two-digit tones get the midpoint inserted.
    pub fn expanded(&self) -> [f64; 3] {
        let d = self.digits();
        match *d {
            [p, q] => [f64::from(p), 0.5 * (f64::from(p) + f64::from(q)), f64::from(q)],
            [p, q, r] => [f64::from(p), f64::from(q), f64::from(r)],
            _ => unreachable!("length checked at construction"),
        }
    }

    /// Position in the canonical 150-entry ordering: all two-digit tones in
    /// ascending order, then all three-digit tones.
    pub fn canonical_index(&self) -> usize {
        let d: Vec<usize> = self.digits().iter().map(|&x| usize::from(x) - 1).collect();
        match d.as_slice() {
            [p, q] => p * 5 + q,
            [p, q, r] => 25 + p * 25 + q * 5 + r,
            _ => unreachable!("length checked at construction"),
        }
    }
}

/// Every valid transcription in canonical order (25 two-digit, then 125 three-digit).
pub fn all_transcriptions() -> Vec<Transcription> {
    let mut out = Vec::with_capacity(150);
    for p in 1..=5u8 {
        for q in 1..=5u8 {
            out.push(Transcription::new(&[p, q]).expect("digits in range"));
        }
    }
    for p in 1..=5u8 {
        for q in 1..=5u8 {
            for r in 1..=5u8 {
                out.push(Transcription::new(&[p, q, r]).expect("digits in range"));
            }
        }
    }
    out
}

/// Categorical baseline: 0 for identical digit sequences, 1 otherwise.
pub fn categorical_distance(l1: &Transcription, l2: &Transcription) -> f64 {
    if l1 == l2 {
        0.0
    } else {
        1.0
    }
}

impl Ord for Transcription {
    fn cmp(&self, other: &Self) -> Ordering {
        self.digits().cmp(other.digits())
    }
}

impl PartialOrd for Transcription {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Transcription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in self.digits() {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Transcription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

fn parse_token(text: &str) -> Result<Transcription, TokenError> {
    let trimmed = text.trim();
    let inner = trimmed
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .unwrap_or(trimmed);
    let mut digits = Vec::with_capacity(3);
    for c in inner.chars() {
        match c.to_digit(10) {
            Some(d) if (1..=5).contains(&d) => digits.push(d as u8),
            Some(_) => return Err(TokenError::Digit(c)),
            None => return Err(TokenError::NonDigit(c)),
        }
    }
    Transcription::new(&digits)
}

impl FromStr for Transcription {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_token(s).map_err(|reason| Error::Transcription {
            token: s.to_string(),
            reason,
        })
    }
}

impl Serialize for Transcription {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Transcription {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
