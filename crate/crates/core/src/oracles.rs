//! Closed-form reference values, transcribed term by term without
//! simplification so that the simulation cross-checks catch typos.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

fn check_lambda(l: f64) -> Result<()> {
    if !(l.abs() < 1.0) {
        return Err(Error::InvalidArgument(format!("squeezing λ = {l} must satisfy |λ| < 1")));
    }
    Ok(())
}

fn check_tau(taus: &[f64]) -> Result<()> {
    if let Some(t) = taus.iter().find(|t| !(0.0..=1.0).contains(*t)) {
        return Err(Error::InvalidArgument(format!("transmittance {t} outside [0, 1]")));
    }
    Ok(())
}

fn check_amplitudes(alpha: C64, beta: C64) -> Result<()> {
    if ((alpha.norm_sqr() + beta.norm_sqr()) - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument("NOON amplitudes must satisfy |α|² + |β|² = 1".into()));
    }
    Ok(())
}

fn delta(n: usize, k: usize) -> f64 {
    if n == k {
        1.0
    } else {
        0.0
    }
}

/// `d₁,₂,₄` of the two-mode squeezed vacuum: `-λ²/(1-λ²)`.
pub fn oracle_d124_tmsv(lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    Ok(-lambda * lambda / (1.0 - lambda * lambda))
}

/// `⟨⟨D₂,₄⟩⟩` on two squeezed vacua without loss.
pub fn oracle_d24_noloss(l1: f64, l2: f64) -> Result<f64> {
    check_lambda(l1)?;
    check_lambda(l2)?;
    Ok(l1 * l2 * (l1 * l2 - 1.0) / ((1.0 - l1 * l1) * (1.0 - l2 * l2)))
}

/// `⟨⟨D₂,₄⟩⟩` on two squeezed vacua with per-mode transmittances.
pub fn oracle_d24_lossy(l1: f64, l2: f64, ta1: f64, ta2: f64, tb1: f64, tb2: f64) -> Result<f64> {
    check_lambda(l1)?;
    check_lambda(l2)?;
    check_tau(&[ta1, ta2, tb1, tb2])?;
    let num = l1 * l1 * l2 * l2 * (ta1 * tb2 + ta2 * tb1) - 2.0 * l1 * l2 * (ta1 * ta2 * tb1 * tb2).sqrt();
    Ok(num / (2.0 * (1.0 - l1 * l1) * (1.0 - l2 * l2)))
}

/// The printed pair of loss bounds as `(lower, upper)`:
/// `√(τa₁τa₂τb₁τb₂)·noloss ≤ ⟨⟨D₂,₄⟩⟩ ≤ ½(τa₁τb₂ + τa₂τb₁)·noloss`.
pub fn oracle_d24_bounds(l1: f64, l2: f64, ta1: f64, ta2: f64, tb1: f64, tb2: f64) -> Result<(f64, f64)> {
    if !(l1 * l2 > 0.0) {
        return Err(Error::InvalidArgument("bounds require λ₁λ₂ > 0".into()));
    }
    check_tau(&[ta1, ta2, tb1, tb2])?;
    let noloss = oracle_d24_noloss(l1, l2)?;
    let lower = (ta1 * ta2 * tb1 * tb2).sqrt() * noloss;
    let upper = (ta1 * tb2 + ta2 * tb1) / 2.0 * noloss;
    Ok((lower, upper))
}

/// `⟨⟨D₂,₄⟩⟩` on two copies of a product of single-mode squeezed vacua.
pub fn oracle_d24_squeezed(ra1: f64, rb1: f64, ra2: f64, rb2: f64, ta1: f64, tb1: f64, ta2: f64, tb2: f64) -> Result<f64> {
    if [ra1, rb1, ra2, rb2].iter().any(|r| *r < 0.0) {
        return Err(Error::InvalidArgument("squeezing parameters must be non-negative".into()));
    }
    check_tau(&[ta1, tb1, ta2, tb2])?;
    let s = |r: f64| r.sinh().powi(2);
    Ok(0.5 * (ta1 * tb2 * s(ra1) * s(rb2) + tb1 * ta2 * s(ra2) * s(rb1)))
}

/// Parameters of the mixed two-mode cat state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CatParams {
    pub alpha: C64,
    pub beta: C64,
    pub z: f64,
}

impl CatParams {
    pub fn new(alpha: C64, beta: C64, z: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&z) {
            return Err(Error::InvalidArgument(format!("mixing z = {z} outside [0, 1]")));
        }
        if z == 0.0 && alpha.norm_sqr() + beta.norm_sqr() == 0.0 {
            return Err(Error::IllDefinedState("cat with α = β = 0 and z = 0".into()));
        }
        Ok(Self { alpha, beta, z })
    }

    pub fn real(alpha: f64, beta: f64, z: f64) -> Result<Self> {
        Self::new(C64::new(alpha, 0.0), C64::new(beta, 0.0), z)
    }

    /// `N(α, β, z)`.
    pub fn norm(&self) -> f64 {
        0.5 / (1.0 - (1.0 - self.z) * self.overlap())
    }

    /// `e^{-2|α|²-2|β|²}`.
    fn overlap(&self) -> f64 {
        (-2.0 * self.alpha.norm_sqr() - 2.0 * self.beta.norm_sqr()).exp()
    }

    /// `1 + (1-z) e^{-2|α|²-2|β|²}`.
    fn bracket(&self) -> f64 {
        1.0 + (1.0 - self.z) * self.overlap()
    }
}

/// `d₁,₄,₉ = -|α|²|β|⁴ coth Θ / sinh² Θ`, `Θ = |α|²+|β|² - ½ ln(1-z)`.
pub fn oracle_d149_cat(alpha: C64, beta: C64, z: f64) -> Result<f64> {
    CatParams::new(alpha, beta, z)?;
    if z == 1.0 {
        return Ok(0.0);
    }
    let theta = alpha.norm_sqr() + beta.norm_sqr() - 0.5 * (1.0 - z).ln();
    Ok(-alpha.norm_sqr() * beta.norm_sqr().powi(2) * (1.0 / theta.tanh()) / theta.sinh().powi(2))
}

/// `⟨⟨⟨D₁,₄,₉⟩⟩⟩` for three distinct lossy cat copies; `taus[k] = (τ_a, τ_b)`
/// of copy `k + 1`.
pub fn oracle_d149_lossy_imperfect(cats: [CatParams; 3], taus: [(f64, f64); 3]) -> Result<f64> {
    for c in &cats {
        CatParams::new(c.alpha, c.beta, c.z)?;
    }
    check_tau(&taus.iter().flat_map(|t| [t.0, t.1]).collect::<Vec<_>>())?;
    let cyclic = [[0usize, 1, 2], [1, 2, 0], [2, 0, 1]];
    let mut sum = 0.0;
    for s in cyclic {
        let (c1, c2, c3) = (&cats[s[0]], &cats[s[1]], &cats[s[2]]);
        let (t1, t2, t3) = (taus[s[0]], taus[s[1]], taus[s[2]]);
        let lead = t1.1 * c1.beta.norm_sqr() * c1.norm() * c1.bracket();
        let cross = c2.alpha * c2.beta.conj() * c3.alpha.conj() * c3.beta
            + c2.alpha.conj() * c2.beta * c3.alpha * c3.beta.conj();
        let inner = t2.0 * t2.1 * c2.alpha.norm_sqr() * c2.beta.norm_sqr()
            + t3.0 * t3.1 * c3.alpha.norm_sqr() * c3.beta.norm_sqr()
            - 4.0 * (t2.0 * t2.1 * t3.0 * t3.1).sqrt() * c2.norm() * c3.norm() * c2.bracket() * c3.bracket() * cross.re;
        sum += lead * inner;
    }
    Ok(sum / 3.0)
}

/// `d₁,₉,₁₃` of a NOON state: `-2|α|²|β|²(δ_{n1} + 2δ_{n2})`.
pub fn oracle_d1913_noon(n: usize, alpha: C64, beta: C64) -> Result<f64> {
    check_amplitudes(alpha, beta)?;
    Ok(-2.0 * alpha.norm_sqr() * beta.norm_sqr() * (delta(n, 1) + 2.0 * delta(n, 2)))
}

/// `d′₁,₉,₁₃` of a NOON state.
pub fn oracle_agarwal_noon(n: usize, alpha: C64, beta: C64) -> Result<f64> {
    check_amplitudes(alpha, beta)?;
    let ab = alpha.conj() * beta;
    Ok((16.0 * ab.re.powi(2) * ab.im.powi(2) - 8.0 * ab.norm_sqr()) * delta(n, 1) - 16.0 * ab.re.powi(2) * delta(n, 2))
}

/// `d′₁,₉,₁₃` of a NOON state after pure loss on both modes.
pub fn oracle_agarwal_noon_lossy(n: usize, alpha: C64, beta: C64, ta: f64, tb: f64) -> Result<f64> {
    check_amplitudes(alpha, beta)?;
    check_tau(&[ta, tb])?;
    let ab = alpha.conj() * beta;
    let n1 = 16.0 * ab.re.powi(2) * ab.im.powi(2) * ta * ta * tb * tb
        - 4.0 * (alpha.norm_sqr() * ta + beta.norm_sqr() * tb + 1.0) * ta * tb * ab.norm_sqr();
    Ok(n1 * delta(n, 1) - 16.0 * ab.re.powi(2) * ta * ta * tb * tb * delta(n, 2))
}

/// Moments of the mixed cat entering `d′₁,₉,₁₃`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CatMoments {
    pub ada: f64,
    pub bdb: f64,
    pub adb: C64,
    pub abd: C64,
    pub ada_bdb: f64,
    pub aad_bbd: f64,
    pub a2bd2: C64,
    pub ad2b2: C64,
}

pub fn oracle_cat_agarwal_moments(alpha: C64, beta: C64, z: f64) -> Result<CatMoments> {
    let c = CatParams::new(alpha, beta, z)?;
    let k = 2.0 * c.norm() * c.bracket();
    let ada = alpha.norm_sqr() * k;
    let bdb = beta.norm_sqr() * k;
    let ada_bdb = alpha.norm_sqr() * beta.norm_sqr();
    Ok(CatMoments {
        ada,
        bdb,
        adb: alpha.conj() * beta * k,
        abd: alpha * beta.conj() * k,
        ada_bdb,
        // a a† b b† = (a†a + 1)(b†b + 1)
        aad_bbd: ada_bdb + ada + bdb + 1.0,
        a2bd2: alpha * alpha * beta.conj() * beta.conj(),
        ad2b2: alpha.conj() * alpha.conj() * beta * beta,
    })
}

/// `d′₁,₉,₁₃` of the mixed cat from its closed-form moments.
pub fn oracle_agarwal_cat(alpha: C64, beta: C64, z: f64) -> Result<f64> {
    let m = oracle_cat_agarwal_moments(alpha, beta, z)?;
    let u = m.adb + m.abd;
    let v = m.adb - m.abd;
    let first = m.ada_bdb + m.aad_bbd + m.ad2b2 + m.a2bd2 - u * u;
    let second = m.ada_bdb + m.aad_bbd - m.ad2b2 - m.a2bd2 + v * v;
    let n = m.ada + m.bdb + 1.0;
    Ok((first * second).re - n * n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn printed_values() {
        assert_relative_eq!(oracle_d124_tmsv(0.5).unwrap(), -1.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(oracle_d124_tmsv(-0.5).unwrap(), -1.0 / 3.0, epsilon = 1e-15);
        assert!(oracle_d124_tmsv(1.0).is_err());
        let one = C64::new(1.0, 0.0);
        let want = -(1.0 / 2f64.tanh()) / 2f64.sinh().powi(2);
        assert_relative_eq!(oracle_d149_cat(one, one, 0.0).unwrap(), want, epsilon = 1e-15);
        assert_eq!(oracle_d149_cat(one, one, 1.0).unwrap(), 0.0);
        let h = C64::new(0.5f64.sqrt(), 0.0);
        assert_relative_eq!(oracle_d1913_noon(1, h, h).unwrap(), -0.5, epsilon = 1e-15);
        assert_relative_eq!(oracle_agarwal_noon(2, h, h).unwrap(), -4.0, epsilon = 1e-14);
        assert_relative_eq!(oracle_agarwal_noon_lossy(2, h, h, 1.0, 1.0).unwrap(), -4.0, epsilon = 1e-14);
    }

    #[test]
    fn loss_formulas_reduce() {
        let nl = oracle_d24_noloss(0.4, 0.4).unwrap();
        assert_relative_eq!(nl, oracle_d124_tmsv(0.4).unwrap(), epsilon = 1e-15);
        let t = 0.6;
        assert_relative_eq!(oracle_d24_lossy(0.3, 0.5, t, t, t, t).unwrap(), t * t * oracle_d24_noloss(0.3, 0.5).unwrap(), epsilon = 1e-15);
        let (lo, hi) = oracle_d24_bounds(0.3, 0.5, 0.5, 0.8, 0.625, 1.0).unwrap();
        assert_relative_eq!(lo, hi, epsilon = 1e-15);
        assert!(oracle_d24_bounds(0.3, -0.5, 1.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn imperfect_copies_reduce_to_identical() {
        let c = CatParams::real(1.0, 1.0, 0.0).unwrap();
        let v = oracle_d149_lossy_imperfect([c; 3], [(1.0, 1.0); 3]).unwrap();
        assert_relative_eq!(v, oracle_d149_cat(c.alpha, c.beta, c.z).unwrap(), epsilon = 1e-12);
    }
}
