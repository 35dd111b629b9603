use std::collections::HashSet;

use num_complex::Complex64 as C64;

use super::distribution::PhotonDistribution;
use super::kernels::{self, strides};
use super::mode::ModeLabel;
use super::word::{Ladder, OperatorWord};
use crate::error::{Error, Result};
use crate::par;

/// Dense amplitude tensor over a list of labelled modes. Mode `k` has
/// `dims[k]` levels `0..dims[k]`; amplitudes are stored row-major with the
/// last mode varying fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    pub(crate) modes: Vec<ModeLabel>,
    pub(crate) dims: Vec<usize>,
    pub(crate) amps: Vec<C64>,
}

fn check_labels(modes: &[ModeLabel]) -> Result<()> {
    let mut seen = HashSet::new();
    for m in modes {
        if !seen.insert(*m) {
            return Err(Error::LabelCollision(m.to_string()));
        }
    }
    Ok(())
}

impl PureState {
    pub fn new(modes: Vec<ModeLabel>, dims: Vec<usize>, amps: Vec<C64>) -> Result<Self> {
        if modes.len() != dims.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for {} dimensions",
                modes.len(),
                dims.len()
            )));
        }
        check_labels(&modes)?;
        if let Some(&d) = dims.iter().find(|&&d| d == 0) {
            return Err(Error::InvalidCutoff(d));
        }
        let size: usize = dims.iter().product();
        if amps.len() != size {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for tensor of size {size}",
                amps.len()
            )));
        }
        Ok(Self { modes, dims, amps })
    }

    /// Tensor filled from a function of the occupation numbers.
    pub fn from_fn(modes: Vec<ModeLabel>, dims: Vec<usize>, f: impl Fn(&[usize]) -> C64) -> Result<Self> {
        let size: usize = dims.iter().product();
        let mut amps = Vec::with_capacity(size);
        let mut digits = vec![0usize; dims.len()];
        for _ in 0..size {
            amps.push(f(&digits));
            increment(&mut digits, &dims);
        }
        Self::new(modes, dims, amps)
    }

    pub fn vacuum(modes: Vec<ModeLabel>) -> Result<Self> {
        let n = modes.len();
        Self::new(modes, vec![1; n], vec![C64::new(1.0, 0.0)])
    }

    pub fn modes(&self) -> &[ModeLabel] {
        &self.modes
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn position(&self, mode: ModeLabel) -> Result<usize> {
        self.modes
            .iter()
            .position(|&m| m == mode)
            .ok_or_else(|| Error::ModeNotFound(mode.to_string()))
    }

    pub fn has_mode(&self, mode: ModeLabel) -> bool {
        self.modes.contains(&mode)
    }

    pub fn amplitude(&self, occupation: &[usize]) -> C64 {
        if occupation.len() != self.dims.len() || occupation.iter().zip(&self.dims).any(|(n, d)| n >= d) {
            return C64::new(0.0, 0.0);
        }
        let st = strides(&self.dims);
        self.amps[occupation.iter().zip(&st).map(|(n, s)| n * s).sum::<usize>()]
    }

    pub fn norm_sqr(&self) -> f64 {
        par::sum_range(self.amps.len(), |i| C64::new(self.amps[i].norm_sqr(), 0.0)).re
    }

    pub fn normalized(mut self) -> Result<Self> {
        let n = self.norm_sqr();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::IllDefinedState(format!("cannot normalize state with norm² {n}")));
        }
        let s = 1.0 / n.sqrt();
        self.amps.iter_mut().for_each(|z| *z *= s);
        Ok(self)
    }

    pub fn scaled(mut self, c: C64) -> Self {
        self.amps.iter_mut().for_each(|z| *z *= c);
        self
    }

    /// Tensor product; the modes of `other` follow those of `self`.
    pub fn tensor(&self, other: &PureState) -> Result<Self> {
        let mut modes = self.modes.clone();
        modes.extend_from_slice(&other.modes);
        check_labels(&modes)?;
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for x in &self.amps {
            amps.extend(other.amps.iter().map(|y| x * y));
        }
        Ok(Self { modes, dims, amps })
    }

    pub fn map_modes(&self, f: impl Fn(ModeLabel) -> ModeLabel) -> Result<Self> {
        let modes: Vec<_> = self.modes.iter().map(|&m| f(m)).collect();
        check_labels(&modes)?;
        Ok(Self { modes, ..self.clone() })
    }

    /// Move every mode onto copy index `copy`.
    pub fn with_copy(&self, copy: u32) -> Result<Self> {
        self.map_modes(|m| m.with_copy(copy))
    }

    /// Same state with its modes permuted into `order`.
    pub fn reordered(&self, order: &[ModeLabel]) -> Result<Self> {
        if order == self.modes.as_slice() {
            return Ok(self.clone());
        }
        if order.len() != self.modes.len() {
            return Err(Error::DimensionMismatch("reorder needs the same mode set".into()));
        }
        let perm: Vec<usize> = order.iter().map(|&m| self.position(m)).collect::<Result<_>>()?;
        let dims: Vec<usize> = perm.iter().map(|&p| self.dims[p]).collect();
        let src_st = strides(&self.dims);
        let st: Vec<usize> = perm.iter().map(|&p| src_st[p]).collect();
        let size = self.amps.len();
        let amps = par::map_range(size, |idx| {
            let mut rem = idx;
            let mut off = 0;
            for k in (0..dims.len()).rev() {
                off += (rem % dims[k]) * st[k];
                rem /= dims[k];
            }
            self.amps[off]
        });
        Ok(Self { modes: order.to_vec(), dims, amps })
    }

    /// Change the number of levels of one mode, zero padding or cutting.
    pub fn with_mode_dim(&self, pos: usize, dim: usize) -> Self {
        if self.dims[pos] == dim {
            return self.clone();
        }
        let amps = kernels::map_rows(&self.amps, &self.dims, pos, dim, |n| Some((n, C64::new(1.0, 0.0))));
        let mut dims = self.dims.clone();
        dims[pos] = dim;
        Self { modes: self.modes.clone(), dims, amps }
    }

    /// Drop exactly-zero top levels of every mode (keeping at least one level).
    pub fn trim(&self) -> Self {
        let mut s = self.clone();
        for pos in 0..s.dims.len() {
            let top = kernels::top_occupied(&s.amps, &s.dims, pos).unwrap_or(0);
            if top + 1 < s.dims[pos] {
                s = s.with_mode_dim(pos, top + 1);
            }
        }
        s
    }

    /// Resize mode `pos` to exactly `dim` levels. Shrinking is only allowed
    /// when the removed levels carry no amplitude.
    pub fn fit_mode(&self, pos: usize, dim: usize) -> Result<Self> {
        if dim < self.dims[pos] {
            let top = kernels::top_occupied(&self.amps, &self.dims, pos).unwrap_or(0);
            if top >= dim {
                return Err(Error::DimensionMismatch(format!(
                    "mode {} populated up to level {top}, operator acts on {dim} levels",
                    self.modes[pos]
                )));
            }
        }
        Ok(self.with_mode_dim(pos, dim))
    }

    /// Apply a single ladder operator exactly. A creation operator adds a level
    /// to its mode whenever the current top level is populated.
    pub fn apply_ladder(&self, l: Ladder) -> Result<Self> {
        let pos = self.position(l.mode)?;
        let d = self.dims[pos];
        let mut dims = self.dims.clone();
        let amps = if l.dagger {
            let grow = kernels::top_occupied(&self.amps, &self.dims, pos) == Some(d - 1);
            let nd = if grow { d + 1 } else { d };
            dims[pos] = nd;
            kernels::map_rows(&self.amps, &self.dims, pos, nd, |n| {
                (n >= 1).then(|| (n - 1, C64::new((n as f64).sqrt(), 0.0)))
            })
        } else {
            kernels::map_rows(&self.amps, &self.dims, pos, d, |n| {
                Some((n + 1, C64::new(((n + 1) as f64).sqrt(), 0.0)))
            })
        };
        Ok(Self { modes: self.modes.clone(), dims, amps })
    }

    /// Apply a word; the rightmost factor acts first.
    pub fn apply_word(&self, w: &OperatorWord) -> Result<Self> {
        let mut s = self.clone();
        for l in w.0.iter().rev() {
            s = s.apply_ladder(*l)?;
        }
        Ok(s)
    }

    /// Multiply level `n` of mode `pos` by `exp(-i theta n)`.
    pub fn apply_phase(&self, pos: usize, theta: f64) -> Self {
        let d = self.dims[pos];
        let amps = kernels::map_rows(&self.amps, &self.dims, pos, d, |n| {
            Some((n, C64::from_polar(1.0, -theta * n as f64)))
        });
        Self { modes: self.modes.clone(), dims: self.dims.clone(), amps }
    }

    /// `<self|other>`, embedding both tensors into common dimensions.
    pub fn inner(&self, other: &PureState) -> Result<C64> {
        let other = other.reordered(&self.modes)?;
        let (a, b) = common_dims(self, &other);
        Ok(par::sum_range(a.amps.len(), |i| a.amps[i].conj() * b.amps[i]))
    }

    pub fn expect_word(&self, w: &OperatorWord) -> Result<C64> {
        let applied = self.apply_word(w)?;
        self.inner(&applied)
    }

    /// Probability that some mode sits at its top level. Single-level modes
    /// (fixed vacuum) are not counted.
    pub fn norm_leakage(&self) -> f64 {
        let dims = &self.dims;
        let st = strides(dims);
        let total = self.norm_sqr();
        if total == 0.0 {
            return 0.0;
        }
        let leak = par::sum_range(self.amps.len(), |idx| {
            let at_top = (0..dims.len()).any(|k| dims[k] > 1 && (idx / st[k]) % dims[k] == dims[k] - 1);
            if at_top {
                C64::new(self.amps[idx].norm_sqr(), 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        leak.re / total
    }

    /// Project the listed modes onto fixed occupations, returning the
    /// (unnormalized) conditional state of the remaining modes.
    pub fn slice(&self, fixed: &[(ModeLabel, usize)]) -> Result<Self> {
        let st = strides(&self.dims);
        let mut fixed_pos = Vec::with_capacity(fixed.len());
        let mut base = 0usize;
        for &(m, n) in fixed {
            let p = self.position(m)?;
            fixed_pos.push(p);
            if n >= self.dims[p] {
                let rest: Vec<_> = (0..self.modes.len()).filter(|k| !fixed_pos.contains(k)).collect();
                let modes = rest.iter().map(|&k| self.modes[k]).collect();
                let dims: Vec<usize> = rest.iter().map(|&k| self.dims[k]).collect();
                let size = dims.iter().product();
                return Ok(Self { modes, dims, amps: vec![C64::new(0.0, 0.0); size] });
            }
            base += n * st[p];
        }
        let rest: Vec<usize> = (0..self.modes.len()).filter(|k| !fixed_pos.contains(k)).collect();
        let modes: Vec<_> = rest.iter().map(|&k| self.modes[k]).collect();
        let dims: Vec<usize> = rest.iter().map(|&k| self.dims[k]).collect();
        let rst: Vec<usize> = rest.iter().map(|&k| st[k]).collect();
        let size: usize = dims.iter().product();
        let amps = par::map_range(size, |idx| {
            let mut rem = idx;
            let mut off = base;
            for k in (0..dims.len()).rev() {
                off += (rem % dims[k]) * rst[k];
                rem /= dims[k];
            }
            self.amps[off]
        });
        Ok(Self { modes, dims, amps })
    }

    /// Joint photon-number distribution of the listed modes (others traced).
    pub fn photon_distribution(&self, modes: &[ModeLabel]) -> Result<PhotonDistribution> {
        let pos: Vec<usize> = modes.iter().map(|&m| self.position(m)).collect::<Result<_>>()?;
        let dims: Vec<usize> = pos.iter().map(|&p| self.dims[p]).collect();
        let st = strides(&self.dims);
        let out_st = strides(&dims);
        let size: usize = dims.iter().product();
        let mut probs = vec![0.0; size];
        for (idx, z) in self.amps.iter().enumerate() {
            let p = z.norm_sqr();
            if p == 0.0 {
                continue;
            }
            let mut o = 0;
            for (k, &q) in pos.iter().enumerate() {
                o += ((idx / st[q]) % self.dims[q]) * out_st[k];
            }
            probs[o] += p;
        }
        PhotonDistribution::new(modes.to_vec(), dims, probs)
    }
}

pub(crate) fn increment(digits: &mut [usize], dims: &[usize]) {
    for k in (0..dims.len()).rev() {
        digits[k] += 1;
        if digits[k] < dims[k] {
            return;
        }
        digits[k] = 0;
    }
}

/// Pad two states over the same mode order to common dimensions.
pub(crate) fn common_dims(a: &PureState, b: &PureState) -> (PureState, PureState) {
    let mut a = a.clone();
    let mut b = b.clone();
    for k in 0..a.dims.len() {
        let d = a.dims[k].max(b.dims[k]);
        a = a.with_mode_dim(k, d);
        b = b.with_mode_dim(k, d);
    }
    (a, b)
}
