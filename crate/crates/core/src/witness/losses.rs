use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fock::ModeLabel;

/// Per-mode transmittances. Modes not listed are lossless.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Losses(BTreeMap<ModeLabel, f64>);

impl Losses {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn uniform(tau: f64, modes: impl IntoIterator<Item = ModeLabel>) -> Result<Self> {
        let mut out = Self::none();
        for m in modes {
            out = out.with(m, tau)?;
        }
        Ok(out)
    }

    pub fn with(mut self, mode: ModeLabel, tau: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&tau) {
            return Err(Error::InvalidArgument(format!("transmittance {tau} for {mode} outside [0, 1]")));
        }
        self.0.insert(mode, tau);
        Ok(self)
    }

    pub fn tau(&self, mode: ModeLabel) -> f64 {
        self.0.get(&mode).copied().unwrap_or(1.0)
    }

    pub fn is_lossless(&self) -> bool {
        self.0.values().all(|&t| t == 1.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (ModeLabel, f64)> + '_ {
        self.0.iter().map(|(m, t)| (*m, *t))
    }

    /// Lossy modes of one copy, relabelled onto copy 1.
    pub fn for_copy(&self, copy: u32) -> Vec<(ModeLabel, f64)> {
        self.iter().filter(|(m, t)| m.copy == copy && *t < 1.0).map(|(m, t)| (m.with_copy(1), t)).collect()
    }
}

impl FromStr for Losses {
    type Err = Error;

    /// `a1=0.5,b2=0.9`; an empty string means no loss.
    fn from_str(s: &str) -> Result<Self> {
        let mut out = Self::none();
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (m, t) = item
                .split_once('=')
                .ok_or_else(|| Error::InvalidArgument(format!("loss entry '{item}' is not mode=tau")))?;
            let tau: f64 = t
                .trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad transmittance '{t}'")))?;
            out = out.with(m.trim().parse()?, tau)?;
        }
        Ok(out)
    }
}

impl fmt::Display for Losses {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|(m, t)| format!("{m}={t}")).collect();
        write!(f, "{}", parts.join(","))
    }
}
