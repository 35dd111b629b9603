//! Named state families with their parameters, truncation rules and the
//! closed-form reference value each one has for a given witness.

use std::fmt;
use std::str::FromStr;

use anyhow::{anyhow, bail, Result};
use cvwitness::fock::{Ensemble, ModeLabel};
use cvwitness::oracles::{self, CatParams};
use cvwitness::states::{self, Truncation};
use cvwitness::witness::{Losses, WitnessId};
use cvwitness::C64;

use crate::grid::Point;

/// Tail budget used when the cutoff is chosen automatically.
pub const AUTO_BUDGET: f64 = 1e-10;
const MAX_AUTO_CUTOFF: usize = 400;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Two-mode squeezed vacuum, `lambda`.
    Tmsv,
    /// Two different squeezed vacua as copies 1 and 2, `lambda1`, `lambda2`.
    TmsvPair,
    /// Two copies of a product of single-mode squeezed vacua, `ra1 rb1 ra2 rb2`.
    SqueezedPair,
    /// Product coherent state, real `alpha`, `beta`.
    Coherent,
    /// Mixed cat, real `alpha`, `beta` (defaults to `alpha`), `z` (default 0).
    Cat,
    /// Three cat copies with `alpha = beta` per copy: `alpha1 alpha2 alpha3` (defaults to `alpha2`), `z`.
    CatCopies,
    /// NOON state `alpha|n,0> + sqrt(1-alpha²) e^{i phi}|0,n>`: `n`, `alpha`, `phi` (default 0).
    Noon,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Self::Tmsv,
        Self::TmsvPair,
        Self::SqueezedPair,
        Self::Coherent,
        Self::Cat,
        Self::CatCopies,
        Self::Noon,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Tmsv => "tmsv",
            Self::TmsvPair => "tmsv_pair",
            Self::SqueezedPair => "squeezed_pair",
            Self::Coherent => "coherent",
            Self::Cat => "cat",
            Self::CatCopies => "cat_copies",
            Self::Noon => "noon",
        }
    }

    /// Parameters that describe the state (everything else must be a loss knob).
    fn state_params(self) -> &'static [&'static str] {
        match self {
            Self::Tmsv => &["lambda"],
            Self::TmsvPair => &["lambda1", "lambda2"],
            Self::SqueezedPair => &["ra1", "rb1", "ra2", "rb2"],
            Self::Coherent => &["alpha", "beta"],
            Self::Cat => &["alpha", "beta", "z"],
            Self::CatCopies => &["alpha1", "alpha2", "alpha3", "z"],
            Self::Noon => &["n", "alpha", "phi"],
        }
    }

    pub fn check_params(self, p: &Point) -> Result<()> {
        for k in p.keys() {
            if !self.state_params().contains(&k.as_str()) && !LOSS_PARAMS.contains(&k.as_str()) {
                bail!("unknown parameter '{k}' for state family {self}");
            }
        }
        Ok(())
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| anyhow!("unknown state family '{s}'"))
    }
}

/// Grid parameters that set transmittances rather than the state.
pub const LOSS_PARAMS: [&str; 3] = ["tau", "tau_a", "tau_b"];

fn get(p: &Point, k: &str) -> Result<f64> {
    p.get(k).copied().ok_or_else(|| anyhow!("missing parameter '{k}'"))
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn trunc(cutoff: Option<usize>, tail: impl Fn(usize) -> f64) -> Result<Truncation> {
    match cutoff {
        Some(c) => Ok(Truncation::new(c)),
        None => Ok(Truncation::new(states::min_cutoff(tail, AUTO_BUDGET, MAX_AUTO_CUTOFF)?).with_budget(AUTO_BUDGET)),
    }
}

fn noon_amplitudes(p: &Point) -> Result<(usize, C64, C64)> {
    let n = get(p, "n")?;
    if n < 1.0 || n.fract() != 0.0 {
        bail!("NOON photon number must be a positive integer, got {n}");
    }
    let alpha = get(p, "alpha")?;
    if !(0.0..=1.0).contains(&alpha) {
        bail!("NOON amplitude alpha = {alpha} outside [0, 1]");
    }
    let phi = p.get("phi").copied().unwrap_or(0.0);
    let beta = C64::from_polar((1.0 - alpha * alpha).max(0.0).sqrt(), phi);
    Ok((n as usize, real(alpha), beta))
}

fn cat_copy(alpha: f64, beta: f64, z: f64, cutoff: Option<usize>) -> Result<Ensemble> {
    let (a, b) = (real(alpha), real(beta));
    Ok(states::mixed_cat(a, b, z, trunc(cutoff, |d| states::coherent_pair_tail(a, b, d))?)?)
}

fn squeezed_copy(ra: f64, rb: f64, cutoff: Option<usize>) -> Result<Ensemble> {
    let a = states::squeezed(ModeLabel::a(1), ra, 0.0, trunc(cutoff, |d| states::squeezed_tail(ra, d))?)?;
    let b = states::squeezed(ModeLabel::b(1), rb, 0.0, trunc(cutoff, |d| states::squeezed_tail(rb, d))?)?;
    Ok(Ensemble::pure(a.tensor(&b)?)?)
}

impl Family {
    /// The copies this family prepares (one unless the family is multicopy).
    pub fn copies(self, p: &Point, cutoff: Option<usize>) -> Result<Vec<Ensemble>> {
        self.check_params(p)?;
        let tmsv = |l: f64| -> Result<Ensemble> {
            Ok(Ensemble::pure(states::tmsv(l, trunc(cutoff, |d| states::tmsv_tail(l, d))?)?)?)
        };
        match self {
            Self::Tmsv => Ok(vec![tmsv(get(p, "lambda")?)?]),
            Self::TmsvPair => Ok(vec![tmsv(get(p, "lambda1")?)?, tmsv(get(p, "lambda2")?)?]),
            Self::SqueezedPair => Ok(vec![
                squeezed_copy(get(p, "ra1")?, get(p, "rb1")?, cutoff)?,
                squeezed_copy(get(p, "ra2")?, get(p, "rb2")?, cutoff)?,
            ]),
            Self::Coherent => {
                let (a, b) = (real(get(p, "alpha")?), real(get(p, "beta")?));
                let t = trunc(cutoff, |d| states::coherent_pair_tail(a, b, d))?;
                Ok(vec![Ensemble::pure(states::coherent_pair(a, b, t)?)?])
            }
            Self::Cat => {
                let alpha = get(p, "alpha")?;
                let beta = p.get("beta").copied().unwrap_or(alpha);
                Ok(vec![cat_copy(alpha, beta, p.get("z").copied().unwrap_or(0.0), cutoff)?])
            }
            Self::CatCopies => {
                let z = p.get("z").copied().unwrap_or(0.0);
                let a1 = get(p, "alpha1")?;
                let a2 = get(p, "alpha2")?;
                let a3 = p.get("alpha3").copied().unwrap_or(a2);
                [a1, a2, a3].iter().map(|&a| cat_copy(a, a, z, cutoff)).collect()
            }
            Self::Noon => {
                let (n, a, b) = noon_amplitudes(p)?;
                let c = cutoff.unwrap_or(n + 2);
                Ok(vec![Ensemble::pure(states::noon(n, a, b, c)?)?])
            }
        }
    }

    fn cat_params(self, p: &Point) -> Result<Vec<CatParams>> {
        let z = p.get("z").copied().unwrap_or(0.0);
        match self {
            Self::Cat => {
                let alpha = get(p, "alpha")?;
                let beta = p.get("beta").copied().unwrap_or(alpha);
                Ok(vec![CatParams::real(alpha, beta, z)?; 3])
            }
            _ => {
                let a1 = get(p, "alpha1")?;
                let a2 = get(p, "alpha2")?;
                let a3 = p.get("alpha3").copied().unwrap_or(a2);
                [a1, a2, a3].iter().map(|&a| Ok(CatParams::real(a, a, z)?)).collect()
            }
        }
    }

    /// Closed-form value for `id` on this family, when one is printed.
    pub fn oracle(self, id: WitnessId, p: &Point, losses: &Losses) -> Result<Option<f64>> {
        let t = |m: &str| losses.tau(m.parse().expect("valid constant label"));
        let lossless = losses.is_lossless();
        Ok(match (self, id) {
            (Self::Tmsv, WitnessId::D124) if lossless => Some(oracles::oracle_d124_tmsv(get(p, "lambda")?)?),
            (Self::Tmsv, WitnessId::D24) => {
                let l = get(p, "lambda")?;
                Some(oracles::oracle_d24_lossy(l, l, t("a1"), t("a2"), t("b1"), t("b2"))?)
            }
            (Self::TmsvPair, WitnessId::D24) => Some(oracles::oracle_d24_lossy(
                get(p, "lambda1")?,
                get(p, "lambda2")?,
                t("a1"),
                t("a2"),
                t("b1"),
                t("b2"),
            )?),
            (Self::SqueezedPair, WitnessId::D24) => Some(oracles::oracle_d24_squeezed(
                get(p, "ra1")?,
                get(p, "rb1")?,
                get(p, "ra2")?,
                get(p, "rb2")?,
                t("a1"),
                t("b1"),
                t("a2"),
                t("b2"),
            )?),
            (Self::Coherent, id) if id.determinant().is_some() => Some(0.0),
            (Self::Cat, WitnessId::D149) if lossless => {
                let c = self.cat_params(p)?[0];
                Some(oracles::oracle_d149_cat(c.alpha, c.beta, c.z)?)
            }
            (Self::Cat | Self::CatCopies, WitnessId::D149) => {
                let c = self.cat_params(p)?;
                let taus = [(t("a1"), t("b1")), (t("a2"), t("b2")), (t("a3"), t("b3"))];
                Some(oracles::oracle_d149_lossy_imperfect([c[0], c[1], c[2]], taus)?)
            }
            (Self::Cat, WitnessId::D1913Agarwal) if lossless => {
                let c = self.cat_params(p)?[0];
                Some(oracles::oracle_agarwal_cat(c.alpha, c.beta, c.z)?)
            }
            (Self::Noon, WitnessId::D1913) if lossless => {
                let (n, a, b) = noon_amplitudes(p)?;
                Some(oracles::oracle_d1913_noon(n, a, b)?)
            }
            (Self::Noon, WitnessId::D1913Agarwal) => {
                let (n, a, b) = noon_amplitudes(p)?;
                Some(oracles::oracle_agarwal_noon_lossy(n, a, b, t("a1"), t("b1"))?)
            }
            _ => None,
        })
    }
}
