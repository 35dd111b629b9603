use super::kernels::strides;
use super::mode::ModeLabel;
use super::state::increment;
use crate::error::{Error, Result};

/// Joint photon-number distribution over a list of modes, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct PhotonDistribution {
    modes: Vec<ModeLabel>,
    dims: Vec<usize>,
    probs: Vec<f64>,
}

impl PhotonDistribution {
    pub fn new(modes: Vec<ModeLabel>, dims: Vec<usize>, probs: Vec<f64>) -> Result<Self> {
        if modes.len() != dims.len() || probs.len() != dims.iter().product::<usize>() {
            return Err(Error::DimensionMismatch("distribution shape".into()));
        }
        Ok(Self { modes, dims, probs })
    }

    pub fn zeros(modes: Vec<ModeLabel>, dims: Vec<usize>) -> Self {
        let size = dims.iter().product();
        Self { modes, dims, probs: vec![0.0; size] }
    }

    pub fn modes(&self) -> &[ModeLabel] {
        &self.modes
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn prob(&self, occupation: &[usize]) -> f64 {
        if occupation.iter().zip(&self.dims).any(|(n, d)| n >= d) {
            return 0.0;
        }
        let st = strides(&self.dims);
        self.probs[occupation.iter().zip(&st).map(|(n, s)| n * s).sum::<usize>()]
    }

    /// Visit every outcome with its probability, in row-major order.
    pub fn for_each(&self, mut f: impl FnMut(&[usize], f64)) {
        let mut digits = vec![0usize; self.dims.len()];
        for &p in &self.probs {
            f(&digits, p);
            increment(&mut digits, &self.dims);
        }
    }

    pub fn expect(&self, f: impl Fn(&[usize]) -> f64) -> f64 {
        let mut acc = 0.0;
        self.for_each(|n, p| {
            if p != 0.0 {
                acc += p * f(n);
            }
        });
        acc
    }

    pub fn marginal(&self, modes: &[ModeLabel]) -> Result<Self> {
        let pos: Vec<usize> = modes
            .iter()
            .map(|m| {
                self.modes
                    .iter()
                    .position(|x| x == m)
                    .ok_or_else(|| Error::ModeNotFound(m.to_string()))
            })
            .collect::<Result<_>>()?;
        let dims: Vec<usize> = pos.iter().map(|&p| self.dims[p]).collect();
        let st = strides(&dims);
        let mut out = vec![0.0; dims.iter().product()];
        self.for_each(|n, p| {
            let o: usize = pos.iter().zip(&st).map(|(&q, s)| n[q] * s).sum();
            out[o] += p;
        });
        Self::new(modes.to_vec(), dims, out)
    }

    /// `self += w * other`, growing dimensions as needed. Mode lists must agree.
    pub fn accumulate(&mut self, other: &PhotonDistribution, w: f64) -> Result<()> {
        if self.modes != other.modes {
            return Err(Error::DimensionMismatch("accumulating distributions over different modes".into()));
        }
        let dims: Vec<usize> = self.dims.iter().zip(&other.dims).map(|(a, b)| *a.max(b)).collect();
        if dims != self.dims {
            *self = self.padded(&dims);
        }
        let st = strides(&dims);
        other.for_each(|n, p| {
            if p != 0.0 {
                let o: usize = n.iter().zip(&st).map(|(a, s)| a * s).sum();
                self.probs[o] += w * p;
            }
        });
        Ok(())
    }

    fn padded(&self, dims: &[usize]) -> Self {
        let mut out = Self::zeros(self.modes.clone(), dims.to_vec());
        let st = strides(dims);
        self.for_each(|n, p| {
            let o: usize = n.iter().zip(&st).map(|(a, s)| a * s).sum();
            out.probs[o] += p;
        });
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn marginal_and_accumulate() {
        let m = vec![ModeLabel::a(1), ModeLabel::b(1)];
        let mut d = PhotonDistribution::new(m.clone(), vec![2, 2], vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let ma = d.marginal(&[ModeLabel::b(1)]).unwrap();
        assert!((ma.probs()[1] - 0.6).abs() < 1e-15);
        let e = PhotonDistribution::new(m, vec![3, 1], vec![0.5, 0.0, 0.5]).unwrap();
        d.accumulate(&e, 1.0).unwrap();
        assert_eq!(d.dims(), &[3, 2]);
        assert!((d.prob(&[2, 0]) - 0.5).abs() < 1e-15);
        assert!((d.total() - 2.0).abs() < 1e-15);
    }
}
