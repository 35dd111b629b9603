//! Single-copy criteria: Duan et al., the covariance form of `d₁,₂,₄` and the
//! fourth-order criterion `d′₁,₉,₁₃`.

use std::f64::consts::SQRT_2;

use num_complex::Complex64 as C64;

use super::determinant::real_part;
use crate::error::{Error, Result};
use crate::fock::{Ensemble, ModeLabel, WordPolynomial};
use crate::spin::{spin_poly, SpinComponent};

/// Agreement required between the moment and spin forms of `d′₁,₉,₁₃`.
pub const AGARWAL_CONSISTENCY: f64 = 1e-9;

fn poly(terms: &[(C64, &str)]) -> WordPolynomial {
    let mut p = WordPolynomial::zero();
    for (c, w) in terms {
        p = p.add(&WordPolynomial::parse_word(w).expect("valid constant word").scale(*c));
    }
    p
}

fn mean(rho: &Ensemble, p: &WordPolynomial) -> Result<C64> {
    rho.expect_poly(p)
}

fn variance(rho: &Ensemble, p: &WordPolynomial) -> Result<f64> {
    let m = mean(rho, p)?;
    real_part(mean(rho, &p.mul(p))? - m * m, "variance")
}

fn covariance(rho: &Ensemble, p: &WordPolynomial, q: &WordPolynomial) -> Result<f64> {
    // symmetrized, as both quadratures are Hermitian and commute across modes
    let pq = p.mul(q).add(&q.mul(p)).scale(C64::new(0.5, 0.0));
    real_part(mean(rho, &pq)? - mean(rho, p)? * mean(rho, q)?, "covariance")
}

/// `x = (m + m†)/√2`.
pub fn quadrature_x(m: &str) -> WordPolynomial {
    let c = C64::new(1.0 / SQRT_2, 0.0);
    poly(&[(c, m), (c, &format!("{m}†"))])
}

/// `p = (m - m†)/(i√2)`.
pub fn quadrature_p(m: &str) -> WordPolynomial {
    let c = C64::new(0.0, -1.0 / SQRT_2);
    poly(&[(c, m), (-c, &format!("{m}†"))])
}

/// `d_Duan(r)` minimized over the two sign pairings `(x₊, p₋)` and `(x₋, p₊)`.
pub fn duan(rho: &Ensemble, r: f64) -> Result<f64> {
    if r == 0.0 || !r.is_finite() {
        return Err(Error::InvalidArgument(format!("Duan parameter r must be finite and non-zero, got {r}")));
    }
    let (x1, x2, p1, p2) = (quadrature_x("a"), quadrature_x("b"), quadrature_p("a"), quadrature_p("b"));
    let c1 = C64::new(r.abs(), 0.0);
    let c2 = C64::new(1.0 / r, 0.0);
    let combo = |u: &WordPolynomial, v: &WordPolynomial, sign: f64| u.clone().scale(c1).add(&v.clone().scale(c2 * sign));
    let mut best = f64::INFINITY;
    for sign in [1.0, -1.0] {
        let d = variance(rho, &combo(&x1, &x2, sign))? + variance(rho, &combo(&p1, &p2, -sign))? - (r * r + 1.0 / (r * r));
        best = best.min(d);
    }
    Ok(best)
}

/// Duan criterion optimized over `r`:
/// `2√((σ²x₁+σ²p₁-1)(σ²x₂+σ²p₂-1)) - 2|σx₁x₂ - σp₁p₂|`.
pub fn duan_optimized(rho: &Ensemble) -> Result<f64> {
    let (x1, x2, p1, p2) = (quadrature_x("a"), quadrature_x("b"), quadrature_p("a"), quadrature_p("b"));
    let a = variance(rho, &x1)? + variance(rho, &p1)? - 1.0;
    let b = variance(rho, &x2)? + variance(rho, &p2)? - 1.0;
    if a <= 1e-12 || b <= 1e-12 {
        return Err(Error::OptimizationUndefined(format!(
            "local variance factors ({a:.3e}, {b:.3e}) leave r unconstrained"
        )));
    }
    let c = covariance(rho, &x1, &x2)? - covariance(rho, &p1, &p2)?;
    Ok(2.0 * (a * b).sqrt() - 2.0 * c.abs())
}

/// `σ_{a†a} σ_{b†b} - σ_{a†b†} σ_{ab}` with `σ_{yz} = ⟨yz⟩ - ⟨y⟩⟨z⟩`.
pub fn d124_covariance_form(rho: &Ensemble) -> Result<f64> {
    let m = |w: &str| rho.expect_word(&w.parse().expect("valid constant word"));
    let (a, ad, b, bd) = (m("a")?, m("a†")?, m("b")?, m("b†")?);
    let s_ada = m("a† a")? - ad * a;
    let s_bdb = m("b† b")? - bd * b;
    let s_adbd = m("a† b†")? - ad * bd;
    let s_ab = m("a b")? - a * b;
    real_part(s_ada * s_bdb - s_adbd * s_ab, "d124 covariance form")
}

/// `d′₁,₉,₁₃` from the fourth-order moments.
pub fn agarwal_moment_form(rho: &Ensemble) -> Result<f64> {
    let m = |w: &str| rho.expect_word(&w.parse().expect("valid constant word"));
    let m1 = m("a† a b† b")?;
    let m2 = m("a a† b b†")?;
    let m3 = m("a† a† b b")?;
    let m4 = m("a a b† b†")?;
    let u = m("a† b")? + m("a b†")?;
    let v = m("a† b")? - m("a b†")?;
    let n = m("a† a")? + m("b† b")? + 1.0;
    real_part((m1 + m2 + m3 + m4 - u * u) * (m1 + m2 - m3 - m4 + v * v) - n * n, "d'1913")
}

/// `d′₁,₉,₁₃` from spin operators across the bipartition.
pub fn agarwal_spin_form(rho: &Ensemble) -> Result<f64> {
    let (a, b) = (ModeLabel::a(1), ModeLabel::b(1));
    let l = |c| spin_poly(c, a, b);
    let (lx, ly, lz, l0) = (l(SpinComponent::X), l(SpinComponent::Y), l(SpinComponent::Z), l(SpinComponent::Zero));
    let mx = real_part(mean(rho, &lx)?, "<Lx>")?;
    let my = real_part(mean(rho, &ly)?, "<Ly>")?;
    let mz = real_part(mean(rho, &lz)?, "<Lz>")?;
    Ok(16.0 * variance(rho, &lx)? * variance(rho, &ly)? + 4.0 * variance(rho, &l0)?
        - 4.0 * variance(rho, &lz)?
        - 4.0 * (mx * mx + my * my + mz * mz))
}

/// `d′₁,₉,₁₃`, evaluated in both forms; returns the moment form after
/// checking the two agree.
pub fn agarwal_d1913(rho: &Ensemble) -> Result<f64> {
    let moment = agarwal_moment_form(rho)?;
    let spin = agarwal_spin_form(rho)?;
    if (moment - spin).abs() > AGARWAL_CONSISTENCY * moment.abs().max(1.0) {
        return Err(Error::InternalInconsistency(format!(
            "d'1913 moment form {moment:.12e} and spin form {spin:.12e} disagree"
        )));
    }
    Ok(moment)
}
