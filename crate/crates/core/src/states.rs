//! Constructors for the state families used by the witnesses. Every
//! constructor truncates at a cutoff, renormalizes, and refuses to proceed if
//! the discarded probability exceeds the leakage budget.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::{kernels, Ensemble, ModeLabel, PureState};

pub const DEFAULT_LEAK_BUDGET: f64 = 1e-9;

/// Number of retained levels per mode together with the tolerated tail mass.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Truncation {
    pub cutoff: usize,
    pub budget: f64,
}

impl Truncation {
    pub fn new(cutoff: usize) -> Self {
        Self { cutoff, budget: DEFAULT_LEAK_BUDGET }
    }

    pub fn with_budget(self, budget: f64) -> Self {
        Self { budget, ..self }
    }

    fn check(&self, tail: f64) -> Result<()> {
        if self.cutoff == 0 {
            return Err(Error::InvalidCutoff(0));
        }
        if tail > self.budget {
            return Err(Error::CutoffTooSmall { tail, budget: self.budget });
        }
        Ok(())
    }
}

impl From<usize> for Truncation {
    fn from(cutoff: usize) -> Self {
        Self::new(cutoff)
    }
}

/// Smallest cutoff in `1..=max` whose tail is within `budget`.
pub fn min_cutoff(tail: impl Fn(usize) -> f64, budget: f64, max: usize) -> Result<usize> {
    (1..=max)
        .find(|&d| tail(d) <= budget)
        .ok_or(Error::CutoffTooSmall { tail: tail(max), budget })
}

/// Poisson tail `P(n >= d)` for mean `x`.
pub fn coherent_tail(alpha: C64, d: usize) -> f64 {
    let x = alpha.norm_sqr();
    let mut t = (-x).exp();
    let mut head = 0.0;
    for n in 0..d {
        head += t;
        t *= x / (n + 1) as f64;
    }
    // continue the series past the cutoff for an accurate small tail
    let mut tail = 0.0;
    let mut n = d;
    loop {
        tail += t;
        n += 1;
        t *= x / n as f64;
        if (n as f64 > x && t < 1e-18 * tail) || t == 0.0 || n > d + 100_000 {
            break;
        }
    }
    if head + tail > 0.0 {
        tail / (head + tail).max(1.0)
    } else {
        0.0
    }
}

pub fn tmsv_tail(lambda: f64, d: usize) -> f64 {
    lambda.abs().powi(2 * d as i32)
}

pub fn squeezed_tail(r: f64, d: usize) -> f64 {
    let t2 = r.tanh().powi(2);
    let mut p = 1.0 / r.cosh();
    let mut tail = 0.0;
    let mut m = 0usize;
    loop {
        if 2 * m >= d {
            tail += p;
        }
        p *= t2 * (2 * m + 1) as f64 / (2 * m + 2) as f64;
        m += 1;
        if (2 * m >= d && p < 1e-18 * tail.max(1e-300)) || p == 0.0 || m > 1_000_000 {
            break;
        }
    }
    tail
}

/// Tail of `|alpha, beta>` with both modes cut at `d`.
pub fn coherent_pair_tail(alpha: C64, beta: C64, d: usize) -> f64 {
    let ta = coherent_tail(alpha, d);
    let tb = coherent_tail(beta, d);
    ta + tb - ta * tb
}

pub fn vacuum(modes: Vec<ModeLabel>) -> Result<PureState> {
    PureState::vacuum(modes)
}

pub fn fock(mode: ModeLabel, n: usize, trunc: impl Into<Truncation>) -> Result<PureState> {
    let t = trunc.into();
    t.check(if n >= t.cutoff { 1.0 } else { 0.0 })?;
    PureState::from_fn(vec![mode], vec![t.cutoff], |d| C64::new(if d[0] == n { 1.0 } else { 0.0 }, 0.0))
}

fn coherent_coeffs(alpha: C64, d: usize) -> Vec<C64> {
    let mut c = Vec::with_capacity(d);
    let mut z = C64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    for n in 0..d {
        c.push(z);
        z *= alpha / ((n + 1) as f64).sqrt();
    }
    c
}

pub fn coherent(mode: ModeLabel, alpha: C64, trunc: impl Into<Truncation>) -> Result<PureState> {
    let t = trunc.into();
    t.check(coherent_tail(alpha, t.cutoff))?;
    let c = coherent_coeffs(alpha, t.cutoff);
    PureState::new(vec![mode], vec![t.cutoff], c)?.normalized()
}

/// Single-mode squeezed vacuum `S(r e^{i phi})|0>` with
/// `S(xi) = exp((xi* a^2 - xi a†^2)/2)`.
pub fn squeezed(mode: ModeLabel, r: f64, phi: f64, trunc: impl Into<Truncation>) -> Result<PureState> {
    let t = trunc.into();
    if !r.is_finite() {
        return Err(Error::InvalidArgument(format!("squeezing r = {r}")));
    }
    t.check(squeezed_tail(r, t.cutoff))?;
    let q = -C64::from_polar(r.tanh(), phi);
    let mut amps = vec![C64::new(0.0, 0.0); t.cutoff];
    let mut z = C64::new(1.0 / r.cosh().sqrt(), 0.0);
    let mut m = 0usize;
    while 2 * m < t.cutoff {
        amps[2 * m] = z;
        // ratio of sqrt((2m)!)/(2^m m!) between m+1 and m
        z *= q * (((2 * m + 1) * (2 * m + 2)) as f64).sqrt() / (2.0 * (m + 1) as f64);
        m += 1;
    }
    PureState::new(vec![mode], vec![t.cutoff], amps)?.normalized()
}

/// Two-mode squeezed vacuum `sqrt(1-λ²) Σ λ^n |n,n>` on modes `a1, b1`.
pub fn tmsv(lambda: f64, trunc: impl Into<Truncation>) -> Result<PureState> {
    let t = trunc.into();
    if !(0.0..1.0).contains(&lambda) {
        return Err(Error::InvalidArgument(format!("TMSV parameter must lie in [0, 1), got {lambda}")));
    }
    t.check(tmsv_tail(lambda, t.cutoff))?;
    let d = t.cutoff;
    let norm = (1.0 - lambda * lambda).sqrt();
    PureState::from_fn(vec![ModeLabel::a(1), ModeLabel::b(1)], vec![d, d], |n| {
        if n[0] == n[1] {
            C64::new(norm * lambda.powi(n[0] as i32), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })?
    .normalized()
}

/// Product coherent state `|alpha>_a1 |beta>_b1`.
pub fn coherent_pair(alpha: C64, beta: C64, trunc: impl Into<Truncation>) -> Result<PureState> {
    let t = trunc.into();
    t.check(coherent_pair_tail(alpha, beta, t.cutoff))?;
    let ca = coherent_coeffs(alpha, t.cutoff);
    let cb = coherent_coeffs(beta, t.cutoff);
    PureState::from_fn(vec![ModeLabel::a(1), ModeLabel::b(1)], vec![t.cutoff; 2], |n| ca[n[0]] * cb[n[1]])?
        .normalized()
}

/// `|alpha, beta> + sign |-alpha, -beta>` (unnormalized, untruncated coefficients).
fn cat_branch(alpha: C64, beta: C64, sign: f64, d: usize) -> Result<PureState> {
    let ca = coherent_coeffs(alpha, d);
    let cb = coherent_coeffs(beta, d);
    PureState::from_fn(vec![ModeLabel::a(1), ModeLabel::b(1)], vec![d; 2], |n| {
        let par = if (n[0] + n[1]) % 2 == 0 { 1.0 } else { -1.0 };
        ca[n[0]] * cb[n[1]] * (1.0 + sign * par)
    })
}

/// Pure two-mode cat `N(|alpha, beta> + sign |-alpha, -beta>)`, `sign = ±1`.
pub fn cat(alpha: C64, beta: C64, sign: f64, trunc: impl Into<Truncation>) -> Result<PureState> {
    let t = trunc.into();
    t.check(coherent_pair_tail(alpha, beta, t.cutoff))?;
    let s = cat_branch(alpha, beta, sign, t.cutoff)?;
    if s.norm_sqr() < 1e-300 {
        return Err(Error::IllDefinedState("cat superposition vanishes".into()));
    }
    s.normalized()
}

/// Mixed cat state with mixing parameter `z ∈ [0, 1]`:
/// `N [ |α,β><α,β| + |-α,-β><-α,-β| - (1-z)(|α,β><-α,-β| + h.c.) ]`,
/// represented as a mixture of the normalized even and odd cats.
pub fn mixed_cat(alpha: C64, beta: C64, z: f64, trunc: impl Into<Truncation>) -> Result<Ensemble> {
    let t = trunc.into();
    if !(0.0..=1.0).contains(&z) {
        return Err(Error::InvalidArgument(format!("mixing parameter z = {z} outside [0, 1]")));
    }
    let s = (-2.0 * (alpha.norm_sqr() + beta.norm_sqr())).exp();
    let denom = 2.0 * (1.0 - (1.0 - z) * s);
    if !(denom > 1e-300) {
        return Err(Error::IllDefinedState("cat state with z = 0 and alpha = beta = 0".into()));
    }
    t.check(coherent_pair_tail(alpha, beta, t.cutoff))?;
    let w_even = z * (1.0 + s) / denom;
    let w_odd = (2.0 - z) * (1.0 - s) / denom;
    let mut branches = Vec::new();
    if w_even > 0.0 {
        branches.push((w_even, cat_branch(alpha, beta, 1.0, t.cutoff)?.normalized()?));
    }
    if w_odd > 0.0 {
        branches.push((w_odd, cat_branch(alpha, beta, -1.0, t.cutoff)?.normalized()?));
    }
    Ensemble::new(branches)
}

/// `alpha |n,0> + beta |0,n>` on modes `a1, b1`; requires `|α|²+|β|² = 1`.
pub fn noon(n: usize, alpha: C64, beta: C64, trunc: impl Into<Truncation>) -> Result<PureState> {
    let t = trunc.into();
    if n == 0 {
        return Err(Error::InvalidArgument("NOON photon number must be at least 1".into()));
    }
    let norm = alpha.norm_sqr() + beta.norm_sqr();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!("NOON amplitudes have |α|²+|β|² = {norm}")));
    }
    t.check(if n >= t.cutoff { 1.0 } else { 0.0 })?;
    PureState::from_fn(vec![ModeLabel::a(1), ModeLabel::b(1)], vec![t.cutoff; 2], |k| match (k[0], k[1]) {
        (x, 0) if x == n => alpha,
        (0, y) if y == n => beta,
        _ => C64::new(0.0, 0.0),
    })
}

/// Apply `D(alpha) = e^{-|α|²/2} e^{α a†} e^{-α* a}` to one mode, resizing it
/// to `out_dim` levels. Fails if the displaced state leaks more than `budget`
/// through the new cutoff.
pub fn displace(state: &PureState, mode: ModeLabel, alpha: C64, out_dim: usize, budget: f64) -> Result<PureState> {
    let pos = state.position(mode)?;
    let d_in = state.dims()[pos];
    // e^{-α* a}: finite series on the input levels
    let mut term = state.clone();
    let mut acc = state.clone();
    for k in 1..d_in {
        let amps = kernels::map_rows(term.amplitudes(), term.dims(), pos, d_in, |n| {
            Some((n + 1, -alpha.conj() * ((n + 1) as f64).sqrt() / k as f64))
        });
        term = PureState::new(term.modes().to_vec(), term.dims().to_vec(), amps)?;
        acc = add_states(&acc, &term)?;
    }
    // e^{α a†}: series into the enlarged space
    let base = acc.with_mode_dim(pos, out_dim + 1);
    let mut term = base.clone();
    let mut out = base;
    for k in 1..=out_dim {
        let dims = term.dims().to_vec();
        let amps = kernels::map_rows(term.amplitudes(), &dims, pos, out_dim + 1, |n| {
            (n >= 1).then(|| (n - 1, alpha * (n as f64).sqrt() / k as f64))
        });
        term = PureState::new(term.modes().to_vec(), dims, amps)?;
        out = add_states(&out, &term)?;
    }
    let out = out.scaled(C64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0));
    // the extra level only serves to measure what the cutoff discards
    let total = out.norm_sqr();
    let kept = out.with_mode_dim(pos, out_dim);
    let tail = (total - kept.norm_sqr()).max(0.0) / total.max(1e-300);
    if tail > budget || (state.norm_sqr() - total).abs() > budget.max(1e-12) {
        return Err(Error::CutoffTooSmall { tail: tail.max((state.norm_sqr() - total).abs()), budget });
    }
    kept.normalized()
}

fn add_states(a: &PureState, b: &PureState) -> Result<PureState> {
    let amps = a.amplitudes().iter().zip(b.amplitudes()).map(|(x, y)| x + y).collect();
    PureState::new(a.modes().to_vec(), a.dims().to_vec(), amps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn coherent_moments() {
        let a = C64::new(0.7, -0.3);
        let s = coherent(ModeLabel::a(1), a, 30).unwrap();
        let m = s.expect_word(&"a".parse().unwrap()).unwrap();
        assert_abs_diff_eq!((m - a).norm(), 0.0, epsilon = 1e-12);
        let n = s.expect_word(&"a† a".parse().unwrap()).unwrap();
        assert_abs_diff_eq!(n.re, a.norm_sqr(), epsilon = 1e-12);
    }

    #[test]
    fn squeezed_variance() {
        let r = 0.4;
        let s = squeezed(ModeLabel::a(1), r, 0.0, 60).unwrap();
        let n = s.expect_word(&"a† a".parse().unwrap()).unwrap().re;
        assert_abs_diff_eq!(n, r.sinh().powi(2), epsilon = 1e-12);
        let aa = s.expect_word(&"a a".parse().unwrap()).unwrap();
        assert_abs_diff_eq!(aa.re, -r.sinh() * r.cosh(), epsilon = 1e-12);
    }

    #[test]
    fn cutoff_budget_enforced() {
        assert!(matches!(tmsv(0.9, 10), Err(Error::CutoffTooSmall { .. })));
        assert!(tmsv(0.9, Truncation::new(10).with_budget(0.2)).is_ok());
        assert!(matches!(tmsv(0.5, 0), Err(Error::InvalidCutoff(0))));
        assert!(matches!(fock(ModeLabel::a(1), 3, 3), Err(Error::CutoffTooSmall { .. })));
    }

    #[test]
    fn mixed_cat_moments() {
        let (a, b, z) = (C64::new(0.8, 0.0), C64::new(0.6, 0.2), 0.3);
        let rho = mixed_cat(a, b, z, 30).unwrap();
        let s = (-2.0 * (a.norm_sqr() + b.norm_sqr())).exp();
        let k = (1.0 + (1.0 - z) * s) / (1.0 - (1.0 - z) * s);
        let nb = rho.expect_word(&"b† b".parse().unwrap()).unwrap();
        assert_abs_diff_eq!(nb.re, b.norm_sqr() * k, epsilon = 1e-12);
        let abd = rho.expect_word(&"a b†".parse().unwrap()).unwrap();
        assert_abs_diff_eq!((abd - a * b.conj() * k).norm(), 0.0, epsilon = 1e-12);
        assert!(mixed_cat(C64::new(0.0, 0.0), C64::new(0.0, 0.0), 0.0, 5).is_err());
    }

    #[test]
    fn displacement_shifts_mean() {
        let s = tmsv(0.3, 20).unwrap();
        let al = C64::new(0.4, 0.2);
        let d = displace(&s, ModeLabel::a(1), al, 40, 1e-12).unwrap();
        let m = d.expect_word(&"a".parse().unwrap()).unwrap();
        assert_abs_diff_eq!((m - al).norm(), 0.0, epsilon = 1e-12);
        let n0 = s.expect_word(&"a† a".parse().unwrap()).unwrap().re;
        let n1 = d.expect_word(&"a† a".parse().unwrap()).unwrap().re;
        assert_abs_diff_eq!(n1, n0 + al.norm_sqr(), epsilon = 1e-11);
    }
}
