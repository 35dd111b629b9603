//! Regression grid comparing simulated witnesses with every closed-form
//! reference value.

use std::io::Write;

use anyhow::Result;
use cvwitness::oracles;
use cvwitness::witness::WitnessId;
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::grid::{parse_param, Point};
use crate::run::{evaluate_point, fmt_num};

/// Leakage level below which the tolerance is not widened.
pub const LEAK_FLOOR: f64 = 1e-9;

#[derive(Clone, Copy, Debug)]
pub enum Reference {
    /// The closed form attached to the state family.
    Family,
    /// A specific closed form of the grid point.
    Custom(fn(&Point) -> f64),
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub config: RunConfig,
    pub reference: Reference,
    pub tol: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub value: f64,
    pub reference: f64,
    pub abs_err: f64,
    pub tol: f64,
    pub pass: bool,
}

fn check(name: &'static str, witness: &str, state: &str, params: &[&str], loss: &str, tol: f64) -> Check {
    let params = params
        .iter()
        .map(|p| parse_param(p).expect("valid constant parameter"))
        .collect();
    Check {
        name,
        config: RunConfig {
            witness: Some(witness.into()),
            state: Some(state.into()),
            params,
            loss: (!loss.is_empty()).then(|| loss.to_string()),
            ..RunConfig::default()
        },
        reference: Reference::Family,
        tol,
    }
}

const BOUNDS_LOSS: &str = "a1=0.5,a2=0.8,b1=0.625,b2=1";

fn bounds(p: &Point) -> (f64, f64) {
    oracles::oracle_d24_bounds(p["lambda1"], p["lambda2"], 0.5, 0.8, 0.625, 1.0).expect("valid bounds input")
}

/// The built-in regression grid; every oracle appears at least once.
pub fn default_checks() -> Vec<Check> {
    let mut lower = check("d24_bounds_lower", "d24", "tmsv_pair", &["lambda1=0.3", "lambda2=0.5"], BOUNDS_LOSS, 1e-8);
    lower.reference = Reference::Custom(|p| bounds(p).0);
    let mut upper = check("d24_bounds_upper", "d24", "tmsv_pair", &["lambda1=0.3", "lambda2=0.5"], BOUNDS_LOSS, 1e-8);
    upper.reference = Reference::Custom(|p| bounds(p).1);
    let mut pipe = check("agarwal_noon_pipeline", "d1913_agarwal", "noon", &["n=2", "alpha=0.6", "phi=0.3"], "", 1e-10);
    pipe.config.pipeline = true;
    vec![
        check("d124_tmsv", "d124", "tmsv", &["lambda=0.5"], "", 1e-8),
        check("d124_coherent", "d124", "coherent", &["alpha=0.4", "beta=-0.3"], "", 1e-8),
        check("d24_noloss", "d24", "tmsv_pair", &["lambda1=0.3", "lambda2=0.5"], "", 1e-8),
        check("d24_lossy", "d24", "tmsv_pair", &["lambda1=0.3", "lambda2=0.5"], "a1=0.9,a2=0.6,b1=0.7,b2=0.8", 1e-8),
        lower,
        upper,
        check(
            "d24_squeezed",
            "d24",
            "squeezed_pair",
            &["ra1=0.3", "rb1=0.5", "ra2=0.4", "rb2=0.2"],
            "a1=0.9,b1=0.8,a2=0.7,b2=0.6",
            1e-8,
        ),
        check("d149_cat", "d149", "cat", &["alpha=1", "z=0"], "", 1e-6),
        check("d149_cat_mixed", "d149", "cat", &["alpha=0.8", "z=0.5"], "", 1e-6),
        check(
            "d149_lossy_imperfect",
            "d149",
            "cat_copies",
            &["alpha1=0.8", "alpha2=1.0", "alpha3=1.2", "z=0.3"],
            "a1=0.9,b1=0.8,a2=0.7,b2=0.95,a3=0.6,b3=0.85",
            1e-6,
        ),
        check("d1913_noon_n1", "d1913", "noon", &["n=1", "alpha=0.6", "phi=0.3"], "", 1e-12),
        check("d1913_noon_n2", "d1913", "noon", &["n=2", "alpha=0.6", "phi=0.3"], "", 1e-12),
        check("d1913_noon_n3", "d1913", "noon", &["n=3", "alpha=0.6", "phi=0.3"], "", 1e-12),
        check("agarwal_noon_n2", "d1913_agarwal", "noon", &["n=2", "alpha=0.6", "phi=0.3"], "", 1e-10),
        check("agarwal_noon_lossy_n1", "d1913_agarwal", "noon", &["n=1", "alpha=0.6", "phi=0.4"], "a1=0.7,b1=0.9", 1e-10),
        pipe,
        check("agarwal_cat", "d1913_agarwal", "cat", &["alpha=0.7", "z=0.3"], "", 1e-8),
    ]
}

pub fn run_check(c: &Check) -> Result<CheckResult> {
    let run = c.config.clone().resolve()?;
    let points = crate::grid::expand(&run.params)?;
    let p = &points[0];
    let row = evaluate_point(&run, p)?;
    let reference = match c.reference {
        Reference::Family => row
            .oracle
            .ok_or_else(|| anyhow::anyhow!("check {} has no closed form", c.name))?,
        Reference::Custom(f) => f(p),
    };
    let tol = c.tol * (row.leakage / LEAK_FLOOR).max(1.0);
    let abs_err = (row.value - reference).abs();
    Ok(CheckResult { name: c.name, value: row.value, reference, abs_err, tol, pass: abs_err <= tol })
}

pub fn run_checks(checks: &[Check], only: Option<WitnessId>) -> Result<Vec<CheckResult>> {
    let selected: Vec<&Check> = checks
        .iter()
        .filter(|c| only.map_or(true, |w| c.config.witness.as_deref() == Some(w.name())))
        .collect();
    selected.par_iter().map(|c| run_check(c)).collect()
}

pub fn write_table<W: Write>(results: &[CheckResult], w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(["check", "value", "oracle", "abs_err", "tol", "status"])?;
    for r in results {
        wr.write_record([
            r.name.to_string(),
            fmt_num(r.value),
            fmt_num(r.reference),
            fmt_num(r.abs_err),
            fmt_num(r.tol),
            if r.pass { "pass" } else { "FAIL" }.to_string(),
        ])?;
    }
    wr.flush()?;
    Ok(())
}
