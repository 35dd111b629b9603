use std::fmt;

use itertools::Itertools;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::{Ensemble, OperatorWord};

/// Imaginary residue above which a witness value is rejected.
pub const IMAG_TOLERANCE: f64 = 1e-9;

/// A square matrix of single-copy moments `⟨entry⟩`, with entries written on
/// copy-1 labels `a`, `b`.
#[derive(Clone, Debug, PartialEq)]
pub struct DeterminantSpec {
    name: String,
    entries: Vec<Vec<OperatorWord>>,
}

fn grid(rows: &[&[&str]]) -> Vec<Vec<OperatorWord>> {
    rows.iter()
        .map(|r| r.iter().map(|s| s.parse().expect("valid constant word")).collect())
        .collect()
}

impl DeterminantSpec {
    pub fn new(name: impl Into<String>, entries: Vec<Vec<OperatorWord>>) -> Result<Self> {
        let n = entries.len();
        if n == 0 || entries.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument("moment matrix must be square and non-empty".into()));
        }
        for w in entries.iter().flatten() {
            if w.modes().iter().any(|m| m.is_ancilla() || m.copy != 1) {
                return Err(Error::InvalidArgument(format!("entry {w} must use single-copy labels a, b")));
            }
        }
        Ok(Self { name: name.into(), entries })
    }

    /// `f = c1 + c2 a + c3 b†`.
    pub fn d124() -> Self {
        Self {
            name: "d124".into(),
            entries: grid(&[&["1", "a", "b†"], &["a†", "a† a", "a† b†"], &["b", "a b", "b† b"]]),
        }
    }

    /// Lower-right block of `d124`.
    pub fn d24() -> Self {
        Self { name: "d24".into(), entries: grid(&[&["a† a", "a† b†"], &["a b", "b† b"]]) }
    }

    /// `f = c1 + c2 b + c3 a b`.
    pub fn d149() -> Self {
        Self {
            name: "d149".into(),
            entries: grid(&[
                &["1", "b†", "a b†"],
                &["b", "b† b", "a b† b"],
                &["a† b", "a† b† b", "a† a b† b"],
            ]),
        }
    }

    /// `f = c1 + c2 a b + c3 a† b†`.
    pub fn d1913() -> Self {
        Self {
            name: "d1913".into(),
            entries: grid(&[
                &["1", "a b†", "a† b"],
                &["a† b", "a† a b† b", "a† a† b b"],
                &["a b†", "a a b† b†", "a a† b b†"],
            ]),
        }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "d124" => Ok(Self::d124()),
            "d24" => Ok(Self::d24()),
            "d149" => Ok(Self::d149()),
            "d1913" => Ok(Self::d1913()),
            _ => Err(Error::UnknownKey(format!("determinant '{name}'"))),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &OperatorWord {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<OperatorWord>] {
        &self.entries
    }

    /// Moment matrix evaluated on `rho`.
    pub fn moments(&self, rho: &Ensemble) -> Result<Vec<Vec<C64>>> {
        self.entries
            .iter()
            .map(|row| row.iter().map(|w| rho.expect_word(w)).collect())
            .collect()
    }
}

impl fmt::Display for DeterminantSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

/// Permutations of `0..n` with their signs.
pub fn signed_permutations(n: usize) -> Vec<(f64, Vec<usize>)> {
    (0..n)
        .permutations(n)
        .map(|p| {
            let inversions = (0..n).tuple_combinations().filter(|&(i, j)| p[i] > p[j]).count();
            (if inversions % 2 == 0 { 1.0 } else { -1.0 }, p)
        })
        .collect()
}

pub fn determinant(m: &[Vec<C64>]) -> C64 {
    signed_permutations(m.len())
        .into_iter()
        .map(|(s, p)| p.iter().enumerate().fold(C64::new(s, 0.0), |acc, (i, &j)| acc * m[i][j]))
        .sum()
}

pub(crate) fn real_part(z: C64, what: &str) -> Result<f64> {
    if z.im.abs() > IMAG_TOLERANCE * z.re.abs().max(1.0) {
        return Err(Error::NumericalInconsistency(format!("{what} has imaginary residue {:.3e}", z.im)));
    }
    Ok(z.re)
}

/// Determinant of the moment matrix of `spec` on `rho`.
pub fn det_witness(spec: &DeterminantSpec, rho: &Ensemble) -> Result<f64> {
    for m in [crate::fock::ModeLabel::a(1), crate::fock::ModeLabel::b(1)] {
        if !rho.modes().contains(&m) {
            return Err(Error::ModeNotFound(m.to_string()));
        }
    }
    real_part(determinant(&spec.moments(rho)?), spec.name())
}
