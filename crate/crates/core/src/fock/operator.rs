use num_complex::Complex64 as C64;
use sprs::{CsMat, TriMat};

use super::ensemble::Ensemble;
use super::kernels::strides;
use super::mode::ModeLabel;
use super::state::PureState;
use super::word::{Ladder, OperatorWord, WordPolynomial};
use crate::error::{Error, Result};
use crate::par;

/// Truncated Fock space over a fixed list of modes; builds sparse operators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModeSpace {
    modes: Vec<ModeLabel>,
    dims: Vec<usize>,
}

impl ModeSpace {
    pub fn new(modes: Vec<ModeLabel>, dims: Vec<usize>) -> Result<Self> {
        if modes.len() != dims.len() {
            return Err(Error::DimensionMismatch("labels vs dims".into()));
        }
        if let Some(&d) = dims.iter().find(|&&d| d == 0) {
            return Err(Error::InvalidCutoff(d));
        }
        let mut sorted = modes.clone();
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::LabelCollision(w[0].to_string()));
        }
        Ok(Self { modes, dims })
    }

    pub fn uniform(modes: Vec<ModeLabel>, cutoff: usize) -> Result<Self> {
        let n = modes.len();
        Self::new(modes, vec![cutoff; n])
    }

    pub fn modes(&self) -> &[ModeLabel] {
        &self.modes
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn size(&self) -> usize {
        self.dims.iter().product()
    }

    fn position(&self, m: ModeLabel) -> Result<usize> {
        self.modes.iter().position(|&x| x == m).ok_or_else(|| Error::ModeNotFound(m.to_string()))
    }

    /// Total photon number of each basis index.
    pub fn totals(&self) -> Vec<usize> {
        let st = strides(&self.dims);
        (0..self.size())
            .map(|i| (0..self.dims.len()).map(|k| (i / st[k]) % self.dims[k]).sum())
            .collect()
    }

    fn wrap(&self, mat: CsMat<C64>) -> FockOperator {
        FockOperator { modes: self.modes.clone(), dims: self.dims.clone(), mat }
    }

    pub fn identity(&self) -> FockOperator {
        self.wrap(CsMat::eye(self.size()))
    }

    pub fn zero(&self) -> FockOperator {
        let n = self.size();
        self.wrap(CsMat::zero((n, n)))
    }

    pub fn ladder(&self, l: Ladder) -> Result<FockOperator> {
        let pos = self.position(l.mode)?;
        let d = self.dims[pos];
        let st = strides(&self.dims)[pos];
        let n = self.size();
        let mut tri = TriMat::new((n, n));
        for idx in 0..n {
            let k = (idx / st) % d;
            if l.dagger {
                if k + 1 < d {
                    tri.add_triplet(idx + st, idx, C64::new(((k + 1) as f64).sqrt(), 0.0));
                }
            } else if k >= 1 {
                tri.add_triplet(idx - st, idx, C64::new((k as f64).sqrt(), 0.0));
            }
        }
        Ok(self.wrap(tri.to_csr()))
    }

    pub fn annihilation(&self, m: ModeLabel) -> Result<FockOperator> {
        self.ladder(Ladder::annihilate(m))
    }

    pub fn creation(&self, m: ModeLabel) -> Result<FockOperator> {
        self.ladder(Ladder::create(m))
    }

    pub fn number(&self, m: ModeLabel) -> Result<FockOperator> {
        let pos = self.position(m)?;
        let d = self.dims[pos];
        let st = strides(&self.dims)[pos];
        let n = self.size();
        let mut tri = TriMat::new((n, n));
        for idx in 0..n {
            let k = (idx / st) % d;
            if k > 0 {
                tri.add_triplet(idx, idx, C64::new(k as f64, 0.0));
            }
        }
        Ok(self.wrap(tri.to_csr()))
    }

    /// Product of truncated ladder matrices, left to right.
    pub fn word(&self, w: &OperatorWord) -> Result<FockOperator> {
        let mut acc = self.identity();
        for l in &w.0 {
            acc = acc.mul(&self.ladder(*l)?)?;
        }
        Ok(acc)
    }

    pub fn polynomial(&self, p: &WordPolynomial) -> Result<FockOperator> {
        let mut acc = self.zero();
        for (c, w) in &p.terms {
            acc = acc.add(&self.word(w)?.scale(*c))?;
        }
        Ok(acc)
    }
}

/// Single-mode annihilation operator on `cutoff` levels.
pub fn annihilation(mode: ModeLabel, cutoff: usize) -> Result<FockOperator> {
    if cutoff < 2 {
        return Err(Error::InvalidCutoff(cutoff));
    }
    ModeSpace::uniform(vec![mode], cutoff)?.annihilation(mode)
}

/// Sparse operator on a truncated multimode Fock space.
#[derive(Clone, Debug)]
pub struct FockOperator {
    modes: Vec<ModeLabel>,
    dims: Vec<usize>,
    mat: CsMat<C64>,
}

impl FockOperator {
    pub fn from_csr(space: ModeSpace, mat: CsMat<C64>) -> Result<Self> {
        let n = space.size();
        if mat.rows() != n || mat.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix on a {n}-dimensional space",
                mat.rows(),
                mat.cols()
            )));
        }
        let mat = if mat.is_csr() { mat } else { mat.to_csr() };
        Ok(Self { modes: space.modes, dims: space.dims, mat })
    }

    pub fn modes(&self) -> &[ModeLabel] {
        &self.modes
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn space(&self) -> ModeSpace {
        ModeSpace { modes: self.modes.clone(), dims: self.dims.clone() }
    }

    pub fn nnz(&self) -> usize {
        self.mat.nnz()
    }

    pub fn matrix(&self) -> &CsMat<C64> {
        &self.mat
    }

    fn check_same(&self, other: &FockOperator) -> Result<()> {
        if self.modes != other.modes || self.dims != other.dims {
            return Err(Error::DimensionMismatch("operators act on different spaces".into()));
        }
        Ok(())
    }

    pub fn mul(&self, other: &FockOperator) -> Result<FockOperator> {
        self.check_same(other)?;
        Ok(Self { mat: &self.mat * &other.mat, ..self.clone_shape() })
    }

    pub fn add(&self, other: &FockOperator) -> Result<FockOperator> {
        self.check_same(other)?;
        Ok(Self { mat: &self.mat + &other.mat, ..self.clone_shape() })
    }

    pub fn sub(&self, other: &FockOperator) -> Result<FockOperator> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: C64) -> FockOperator {
        Self { mat: self.mat.map(|v| v * c), ..self.clone_shape() }
    }

    pub fn adjoint(&self) -> FockOperator {
        let t = self.mat.transpose_view().to_csr();
        Self { mat: t.map(|v| v.conj()), ..self.clone_shape() }
    }

    pub fn commutator(&self, other: &FockOperator) -> Result<FockOperator> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    fn clone_shape(&self) -> Self {
        Self { modes: self.modes.clone(), dims: self.dims.clone(), mat: CsMat::zero((0, 0)) }
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.mat.get(row, col).copied().unwrap_or_default()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.mat.data().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entry modulus of `self - other` restricted to rows and columns
    /// with total photon number at most `max_total` (all entries if `None`).
    pub fn max_abs_diff(&self, other: &FockOperator, max_total: Option<usize>) -> Result<f64> {
        let diff = self.sub(other)?;
        let totals = max_total.map(|_| self.space().totals());
        let mut best = 0.0f64;
        for (r, row) in diff.mat.outer_iterator().enumerate() {
            for (c, v) in row.iter() {
                if let (Some(t), Some(n)) = (&totals, max_total) {
                    if t[r] > n || t[c] > n {
                        continue;
                    }
                }
                best = best.max(v.norm());
            }
        }
        Ok(best)
    }

    /// `max |M - M†|`.
    pub fn hermiticity_error(&self) -> f64 {
        self.max_abs_diff(&self.adjoint(), None).unwrap_or(f64::INFINITY)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error() <= tol
    }

    /// Offsets of the operator's local basis inside `s` and of the remaining
    /// modes, after fitting `s` to the operator dimensions.
    fn layout(&self, psi: &PureState) -> Result<(PureState, Vec<usize>, Vec<usize>)> {
        let mut s = psi.clone();
        let mut pos = Vec::with_capacity(self.modes.len());
        for (k, &m) in self.modes.iter().enumerate() {
            let p = s.position(m)?;
            s = s.fit_mode(p, self.dims[k])?;
            pos.push(p);
        }
        let st = strides(s.dims());
        let local_st = strides(&self.dims);
        let off_local: Vec<usize> = (0..self.mat.rows())
            .map(|i| pos.iter().enumerate().map(|(k, &p)| ((i / local_st[k]) % self.dims[k]) * st[p]).sum())
            .collect();
        let rest: Vec<usize> = (0..s.dims().len()).filter(|k| !pos.contains(k)).collect();
        let rest_dims: Vec<usize> = rest.iter().map(|&k| s.dims()[k]).collect();
        let rest_st = strides(&rest_dims);
        let rest_size: usize = rest_dims.iter().product();
        let off_rest: Vec<usize> = (0..rest_size)
            .map(|r| rest.iter().enumerate().map(|(k, &q)| ((r / rest_st[k]) % rest_dims[k]) * st[q]).sum())
            .collect();
        Ok((s, off_local, off_rest))
    }

    /// `O|psi>` (not renormalized). The state is fitted to the operator
    /// dimensions on the acting modes.
    pub fn apply(&self, psi: &PureState) -> Result<PureState> {
        let (s, off_local, off_rest) = self.layout(psi)?;
        let amps = s.amplitudes();
        let mat = &self.mat;
        let blocks = par::map(&off_rest, |&base| {
            mat.outer_iterator()
                .map(|row| row.iter().map(|(j, v)| v * amps[base + off_local[j]]).sum::<C64>())
                .collect::<Vec<C64>>()
        });
        let mut out = vec![C64::new(0.0, 0.0); amps.len()];
        for (base, blk) in off_rest.iter().zip(blocks) {
            for (i, z) in blk.into_iter().enumerate() {
                out[base + off_local[i]] = z;
            }
        }
        PureState::new(s.modes().to_vec(), s.dims().to_vec(), out)
    }

    /// `<psi|O|psi>` for a pure state containing all operator modes. The
    /// state is padded (or trimmed, if the extra levels are empty) to match.
    pub fn expect_pure(&self, psi: &PureState) -> Result<C64> {
        let (s, off_local, off_rest) = self.layout(psi)?;
        let amps = s.amplitudes();
        let mat = &self.mat;
        Ok(par::sum_range(off_rest.len(), |r| {
            let base = off_rest[r];
            let mut acc = C64::new(0.0, 0.0);
            for (i, row) in mat.outer_iterator().enumerate() {
                let left = amps[base + off_local[i]];
                if left.re == 0.0 && left.im == 0.0 {
                    continue;
                }
                let t: C64 = row.iter().map(|(j, v)| v * amps[base + off_local[j]]).sum();
                acc += left.conj() * t;
            }
            acc
        }))
    }

    pub fn expectation(&self, rho: &Ensemble) -> Result<C64> {
        let mut acc = C64::new(0.0, 0.0);
        for (p, s) in rho.branches() {
            acc += *p * self.expect_pure(s)?;
        }
        Ok(acc)
    }
}
