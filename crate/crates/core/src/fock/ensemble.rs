use num_complex::Complex64 as C64;

use super::distribution::PhotonDistribution;
use super::mode::ModeLabel;
use super::state::PureState;
use super::word::{OperatorWord, WordPolynomial};
use crate::error::{Error, Result};

/// Finite mixture of pure states over a common set of modes. Branch states
/// are normalized and weights sum to one.
#[derive(Clone, Debug, PartialEq)]
pub struct Ensemble {
    branches: Vec<(f64, PureState)>,
}

impl Ensemble {
    /// Build from weighted, possibly unnormalized branches. The squared norm
    /// of each branch is folded into its weight; zero branches are dropped.
    pub fn new(branches: Vec<(f64, PureState)>) -> Result<Self> {
        let first = branches
            .first()
            .ok_or_else(|| Error::IllDefinedState("ensemble without branches".into()))?;
        let order = first.1.modes().to_vec();
        let mut out = Vec::with_capacity(branches.len());
        for (w, s) in branches {
            if !(w >= 0.0) || !w.is_finite() {
                return Err(Error::IllDefinedState(format!("invalid branch weight {w}")));
            }
            let s = s.reordered(&order)?;
            let n = s.norm_sqr();
            if w * n > 0.0 {
                out.push((w * n, s.normalized()?));
            }
        }
        let total: f64 = out.iter().map(|b| b.0).sum();
        if !(total > 0.0) {
            return Err(Error::IllDefinedState("ensemble has zero total weight".into()));
        }
        out.iter_mut().for_each(|b| b.0 /= total);
        Ok(Self { branches: out })
    }

    pub fn pure(state: PureState) -> Result<Self> {
        Self::new(vec![(1.0, state)])
    }

    pub fn branches(&self) -> &[(f64, PureState)] {
        &self.branches
    }

    pub fn modes(&self) -> &[ModeLabel] {
        self.branches[0].1.modes()
    }

    pub fn is_pure(&self) -> bool {
        self.branches.len() == 1
    }

    /// Largest branch dimension per mode.
    pub fn dims(&self) -> Vec<usize> {
        let mut d = self.branches[0].1.dims().to_vec();
        for (_, s) in &self.branches[1..] {
            for (x, y) in d.iter_mut().zip(s.dims()) {
                *x = (*x).max(*y);
            }
        }
        d
    }

    pub fn max_branch_len(&self) -> usize {
        self.branches.iter().map(|b| b.1.len()).max().unwrap_or(0)
    }

    pub fn expect_word(&self, w: &OperatorWord) -> Result<C64> {
        let mut acc = C64::new(0.0, 0.0);
        for (p, s) in &self.branches {
            acc += *p * s.expect_word(w)?;
        }
        Ok(acc)
    }

    pub fn expect_poly(&self, poly: &WordPolynomial) -> Result<C64> {
        let mut acc = C64::new(0.0, 0.0);
        for (c, w) in &poly.terms {
            acc += c * self.expect_word(w)?;
        }
        Ok(acc)
    }

    pub fn norm_leakage(&self) -> f64 {
        self.branches.iter().map(|b| b.1.norm_leakage()).fold(0.0, f64::max)
    }

    pub fn tensor(&self, other: &Ensemble) -> Result<Self> {
        let mut out = Vec::with_capacity(self.branches.len() * other.branches.len());
        for (p, s) in &self.branches {
            for (q, t) in &other.branches {
                out.push((p * q, s.tensor(t)?));
            }
        }
        Self::new(out)
    }

    pub fn map_branches(&self, f: impl Fn(&PureState) -> Result<PureState>) -> Result<Self> {
        let out = self
            .branches
            .iter()
            .map(|(p, s)| Ok((*p, f(s)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(out)
    }

    /// Replace each branch by several weighted branches (e.g. Kraus outcomes).
    pub fn flat_map_branches(&self, f: impl Fn(&PureState) -> Result<Vec<(f64, PureState)>>) -> Result<Self> {
        let mut out = Vec::new();
        for (p, s) in &self.branches {
            for (q, t) in f(s)? {
                out.push((p * q, t));
            }
        }
        Self::new(out)
    }

    pub fn with_copy(&self, copy: u32) -> Result<Self> {
        self.map_branches(|s| s.with_copy(copy))
    }

    pub fn photon_distribution(&self, modes: &[ModeLabel]) -> Result<PhotonDistribution> {
        let mut acc: Option<PhotonDistribution> = None;
        for (p, s) in &self.branches {
            let d = s.photon_distribution(modes)?;
            match acc.as_mut() {
                None => {
                    let mut z = PhotonDistribution::zeros(modes.to_vec(), d.dims().to_vec());
                    z.accumulate(&d, *p)?;
                    acc = Some(z);
                }
                Some(a) => a.accumulate(&d, *p)?,
            }
        }
        Ok(acc.expect("ensemble has at least one branch"))
    }
}

impl TryFrom<PureState> for Ensemble {
    type Error = Error;
    fn try_from(s: PureState) -> Result<Self> {
        Self::pure(s)
    }
}
