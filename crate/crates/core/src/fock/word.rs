use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;

use super::mode::ModeLabel;
use crate::error::{Error, Result};

/// A single creation (`dagger = true`) or annihilation operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ladder {
    pub mode: ModeLabel,
    pub dagger: bool,
}

impl Ladder {
    pub const fn create(mode: ModeLabel) -> Self {
        Self { mode, dagger: true }
    }
    pub const fn annihilate(mode: ModeLabel) -> Self {
        Self { mode, dagger: false }
    }
    pub fn adjoint(self) -> Self {
        Self { dagger: !self.dagger, ..self }
    }
}

impl fmt::Display for Ladder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dagger {
            write!(f, "{}†", self.mode)
        } else {
            write!(f, "{}", self.mode)
        }
    }
}

/// Product of ladder operators written left to right; the rightmost factor
/// acts first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OperatorWord(pub Vec<Ladder>);

impl OperatorWord {
    pub fn identity() -> Self {
        Self(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn then(mut self, other: &OperatorWord) -> Self {
        self.0.extend_from_slice(&other.0);
        self
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.iter().rev().map(|l| l.adjoint()).collect())
    }

    /// Relabel every factor onto the given copy index.
    pub fn with_copy(&self, copy: u32) -> Self {
        Self(
            self.0
                .iter()
                .map(|l| Ladder { mode: l.mode.with_copy(copy), ..*l })
                .collect(),
        )
    }

    pub fn map_modes(&self, f: impl Fn(ModeLabel) -> ModeLabel) -> Self {
        Self(self.0.iter().map(|l| Ladder { mode: f(l.mode), ..*l }).collect())
    }

    pub fn modes(&self) -> Vec<ModeLabel> {
        let mut m: Vec<_> = self.0.iter().map(|l| l.mode).collect();
        m.sort();
        m.dedup();
        m
    }

    /// Number of creation minus annihilation factors on `mode`.
    pub fn shift(&self, mode: ModeLabel) -> i64 {
        self.0
            .iter()
            .filter(|l| l.mode == mode)
            .map(|l| if l.dagger { 1 } else { -1 })
            .sum()
    }

    /// Expand into a sum of normally ordered words (creators left of
    /// annihilators on each mode; modes appear in sorted order).
    pub fn normal_ordered(&self) -> WordPolynomial {
        let mut per_mode: BTreeMap<ModeLabel, Vec<bool>> = BTreeMap::new();
        for l in &self.0 {
            per_mode.entry(l.mode).or_default().push(l.dagger);
        }
        // Each mode contributes a polynomial in (p, q) -> a†^p a^q.
        let mut acc: Vec<(f64, Vec<(ModeLabel, usize, usize)>)> = vec![(1.0, Vec::new())];
        for (mode, seq) in per_mode {
            let poly = normal_order_single(&seq);
            let mut next = Vec::with_capacity(acc.len() * poly.len());
            for (c, parts) in &acc {
                for &((p, q), k) in &poly {
                    let mut parts = parts.clone();
                    parts.push((mode, p, q));
                    next.push((c * k, parts));
                }
            }
            acc = next;
        }
        let terms = acc
            .into_iter()
            .map(|(c, parts)| {
                let mut w = Vec::new();
                for (mode, p, q) in parts {
                    w.extend(std::iter::repeat(Ladder::create(mode)).take(p));
                    w.extend(std::iter::repeat(Ladder::annihilate(mode)).take(q));
                }
                (C64::new(c, 0.0), OperatorWord(w))
            })
            .collect();
        WordPolynomial { terms }
    }
}

/// Normal-order a single-mode sequence of ladders (true = creation), returning
/// coefficients for a†^p a^q.
fn normal_order_single(seq: &[bool]) -> Vec<((usize, usize), f64)> {
    let mut acc: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    acc.insert((0, 0), 1.0);
    for &dagger in seq {
        let mut next: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for (&(p, q), &c) in &acc {
            if dagger {
                // a†^p a^q a† = a†^{p+1} a^q + q a†^p a^{q-1}
                *next.entry((p + 1, q)).or_default() += c;
                if q > 0 {
                    *next.entry((p, q - 1)).or_default() += c * q as f64;
                }
            } else {
                *next.entry((p, q + 1)).or_default() += c;
            }
        }
        acc = next;
    }
    acc.into_iter().collect()
}

impl fmt::Display for OperatorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for OperatorWord {
    type Err = Error;

    /// Whitespace separated factors such as `a† a b2+`. A dagger is written as
    /// `†`, `+` or `^` either after the party letter or at the end.
    fn from_str(s: &str) -> Result<Self> {
        let mut out = Vec::new();
        for tok in s.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let is_mark = |c: char| c == '†' || c == '+' || c == '^';
            let dagger = tok.chars().any(is_mark);
            let bare: String = tok.chars().filter(|&c| !is_mark(c)).collect();
            let mode: ModeLabel = bare.parse()?;
            out.push(Ladder { mode, dagger });
        }
        Ok(Self(out))
    }
}

/// Complex linear combination of operator words.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct WordPolynomial {
    pub terms: Vec<(C64, OperatorWord)>,
}

impl WordPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn word(w: OperatorWord) -> Self {
        Self { terms: vec![(C64::new(1.0, 0.0), w)] }
    }

    pub fn constant(c: f64) -> Self {
        Self::word(OperatorWord::identity()).scale(C64::new(c, 0.0))
    }

    pub fn parse_word(s: &str) -> Result<Self> {
        Ok(Self::word(s.parse()?))
    }

    pub fn scale(mut self, c: C64) -> Self {
        for t in &mut self.terms {
            t.0 *= c;
        }
        self
    }

    pub fn add(mut self, other: &WordPolynomial) -> Self {
        self.terms.extend(other.terms.iter().cloned());
        self
    }

    pub fn sub(self, other: &WordPolynomial) -> Self {
        self.add(&other.clone().scale(C64::new(-1.0, 0.0)))
    }

    pub fn mul(&self, other: &WordPolynomial) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (c1, w1) in &self.terms {
            for (c2, w2) in &other.terms {
                terms.push((c1 * c2, w1.clone().then(w2)));
            }
        }
        Self { terms }
    }

    pub fn adjoint(&self) -> Self {
        Self { terms: self.terms.iter().map(|(c, w)| (c.conj(), w.adjoint())).collect() }
    }

    /// Merge identical words and drop zero coefficients.
    pub fn simplify(&self) -> Self {
        let mut map: BTreeMap<OperatorWord, C64> = BTreeMap::new();
        for (c, w) in &self.terms {
            *map.entry(w.clone()).or_default() += c;
        }
        Self {
            terms: map.into_iter().filter(|(_, c)| c.norm() > 0.0).map(|(w, c)| (c, w)).collect(),
        }
    }

    pub fn normal_ordered(&self) -> Self {
        let mut out = Self::zero();
        for (c, w) in &self.terms {
            out = out.add(&w.normal_ordered().scale(*c));
        }
        out.simplify()
    }

    pub fn map_modes(&self, f: impl Fn(ModeLabel) -> ModeLabel + Copy) -> Self {
        Self { terms: self.terms.iter().map(|(c, w)| (*c, w.map_modes(f))).collect() }
    }

    pub fn modes(&self) -> Vec<ModeLabel> {
        let mut m: Vec<_> = self.terms.iter().flat_map(|(_, w)| w.modes()).collect();
        m.sort();
        m.dedup();
        m
    }
}

impl From<OperatorWord> for WordPolynomial {
    fn from(w: OperatorWord) -> Self {
        Self::word(w)
    }
}
