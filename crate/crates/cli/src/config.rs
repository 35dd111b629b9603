use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context, Result};
use cvwitness::witness::{Losses, WitnessId};
use serde::Deserialize;

use crate::family::Family;
use crate::grid::ParamValues;

/// JSON run description. Every field can be overridden from the command line.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub witness: Option<String>,
    pub state: Option<String>,
    #[serde(default)]
    pub params: BTreeMap<String, ParamValues>,
    pub loss: Option<String>,
    pub cutoff: Option<usize>,
    pub out: Option<PathBuf>,
    pub shots: Option<u64>,
    pub seed: Option<u64>,
    #[serde(default)]
    pub pipeline: bool,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// Fill unset fields of `self` from `other` (used for flags over file over preset).
    pub fn or(mut self, other: RunConfig) -> Self {
        self.witness = self.witness.or(other.witness);
        self.state = self.state.or(other.state);
        for (k, v) in other.params {
            self.params.entry(k).or_insert(v);
        }
        self.loss = self.loss.or(other.loss);
        self.cutoff = self.cutoff.or(other.cutoff);
        self.out = self.out.or(other.out);
        self.shots = self.shots.or(other.shots);
        self.seed = self.seed.or(other.seed);
        self.pipeline |= other.pipeline;
        self
    }

    pub fn resolve(self) -> Result<Run> {
        let witness: WitnessId = self.witness.as_deref().ok_or_else(|| anyhow!("no witness given"))?.parse()?;
        let family: Family = self.state.as_deref().ok_or_else(|| anyhow!("no state family given"))?.parse()?;
        let losses: Losses = self.loss.as_deref().unwrap_or("").parse()?;
        if self.cutoff == Some(0) {
            return Err(anyhow!("cutoff must be at least 1"));
        }
        Ok(Run {
            witness,
            family,
            params: self.params,
            losses,
            cutoff: self.cutoff,
            out: self.out,
            shots: self.shots,
            seed: self.seed.unwrap_or(0),
            pipeline: self.pipeline,
        })
    }
}

/// A validated run.
#[derive(Clone, Debug)]
pub struct Run {
    pub witness: WitnessId,
    pub family: Family,
    pub params: BTreeMap<String, ParamValues>,
    pub losses: Losses,
    /// `None` picks the smallest cutoff meeting the automatic tail budget.
    pub cutoff: Option<usize>,
    pub out: Option<PathBuf>,
    pub shots: Option<u64>,
    pub seed: u64,
    pub pipeline: bool,
}
