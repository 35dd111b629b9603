//! Parameter grids behind the figure data sets.

use std::collections::BTreeMap;

use anyhow::{bail, Result};

use crate::config::RunConfig;
use crate::grid::ParamValues;

pub const PRESETS: [&str; 7] = ["fig2a", "fig2b", "fig4a", "fig4b", "fig7a", "fig7b", "fig8"];

fn range(start: f64, stop: f64, step: f64) -> ParamValues {
    ParamValues::Range { start, stop, step }
}

fn config(witness: &str, state: &str, params: &[(&str, ParamValues)]) -> RunConfig {
    RunConfig {
        witness: Some(witness.into()),
        state: Some(state.into()),
        params: params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect::<BTreeMap<_, _>>(),
        ..RunConfig::default()
    }
}

pub fn preset(name: &str) -> Result<RunConfig> {
    use ParamValues::Scalar;
    Ok(match name {
        // two different squeezed vacua, no loss
        "fig2a" => config("d24", "tmsv_pair", &[("lambda1", range(0.0, 0.9, 0.05)), ("lambda2", range(0.0, 0.9, 0.05))]),
        // identical copies, equal loss on all four modes
        "fig2b" => config("d24", "tmsv", &[("lambda", range(0.0, 0.9, 0.05)), ("tau", range(0.0, 1.0, 0.05))]),
        // first copy differs, second and third equal, z = 1/2
        "fig4a" => config(
            "d149",
            "cat_copies",
            &[("alpha1", range(0.1, 3.0, 0.1)), ("alpha2", range(0.1, 3.0, 0.1)), ("z", Scalar(0.5))],
        ),
        "fig4b" => config("d149", "cat", &[("alpha", range(0.1, 3.0, 0.1)), ("tau", range(0.0, 1.0, 0.05)), ("z", Scalar(0.5))]),
        "fig7a" => config(
            "d1913_agarwal",
            "noon",
            &[("n", Scalar(1.0)), ("alpha", range(0.05, 0.95, 0.05)), ("tau", range(0.05, 1.0, 0.05))],
        ),
        "fig7b" => config(
            "d1913_agarwal",
            "noon",
            &[("n", Scalar(2.0)), ("alpha", range(0.05, 0.95, 0.05)), ("tau", range(0.05, 1.0, 0.05))],
        ),
        "fig8" => config("d1913_agarwal", "cat", &[("alpha", range(0.1, 2.5, 0.1)), ("z", range(0.0, 0.9, 0.1))]),
        other => bail!("unknown preset '{other}' (expected one of {})", PRESETS.join(", ")),
    })
}
