use std::io::Write;

use anyhow::{bail, Result};
use cvwitness::circuits::loss_kraus;
use cvwitness::fock::{Ensemble, ModeLabel};
use cvwitness::measurement::pipeline_value;
use cvwitness::witness::{self, det_witness, multicopy_expectation, Losses, WitnessReport};
use rayon::prelude::*;

use crate::config::Run;
use crate::grid::{expand, Point};

/// One evaluated grid point.
#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub point: Point,
    pub value: f64,
    pub oracle: Option<f64>,
    pub leakage: f64,
}

impl Row {
    pub fn abs_err(&self) -> Option<f64> {
        self.oracle.map(|o| (self.value - o).abs())
    }

    pub fn report(&self, run: &Run) -> WitnessReport {
        WitnessReport::new(run.witness, self.point.clone(), self.value, self.oracle, self.leakage)
    }
}

/// Explicit loss map plus the `tau`, `tau_a`, `tau_b` grid knobs spread over copies `1..=copies`.
fn point_losses(run: &Run, p: &Point, copies: u32) -> Result<Losses> {
    let mut losses = run.losses.clone();
    for c in 1..=copies {
        for (knob, modes) in [("tau", vec![ModeLabel::a(c), ModeLabel::b(c)]), ("tau_a", vec![ModeLabel::a(c)]), ("tau_b", vec![ModeLabel::b(c)])] {
            if let Some(&t) = p.get(knob) {
                for m in modes {
                    losses = losses.with(m, t)?;
                }
            }
        }
    }
    Ok(losses)
}

fn has_loss(run: &Run, p: &Point) -> bool {
    !run.losses.is_lossless() || ["tau", "tau_a", "tau_b"].iter().any(|k| p.get(*k).is_some_and(|t| *t < 1.0))
}

/// Number of copies the evaluation of `run` consumes at `p`.
fn copies_needed(run: &Run, p: &Point, prepared: usize) -> Result<usize> {
    let id = run.witness;
    if run.pipeline {
        return id.pipeline_copies().ok_or_else(|| anyhow::anyhow!("witness {id} has no photon-counting pipeline"));
    }
    Ok(match id.determinant() {
        Some(spec) if prepared > 1 || has_loss(run, p) => spec.size(),
        _ => 1,
    })
}

/// Prepared copies for the witness at `p`, plus the losses they undergo.
pub fn prepare(run: &Run, p: &Point) -> Result<(Vec<Ensemble>, Losses)> {
    let prepared = run.family.copies(p, run.cutoff)?;
    let n = copies_needed(run, p, prepared.len())?;
    let copies: Vec<Ensemble> = match prepared.len() {
        k if k == n => prepared,
        1 => vec![prepared[0].clone(); n],
        k => bail!("state family {} prepares {k} copies but {} needs {n}", run.family, run.witness),
    };
    let losses = point_losses(run, p, n as u32)?;
    Ok((copies, losses))
}

/// Apply the copy-1 losses of `losses` to a single state.
pub fn lossy_single(rho: &Ensemble, losses: &Losses) -> Result<Ensemble> {
    let mut rho = rho.clone();
    for (m, t) in losses.for_copy(1) {
        rho = loss_kraus(&rho, m, t)?;
    }
    Ok(rho)
}

pub fn evaluate_point(run: &Run, p: &Point) -> Result<Row> {
    let (copies, losses) = prepare(run, p)?;
    let n = copies.len();
    let id = run.witness;
    let value = if run.pipeline {
        pipeline_value(id, &copies, &losses)?
    } else if let Some(spec) = id.determinant() {
        if n > 1 {
            multicopy_expectation(&spec, &copies, &losses)?
        } else {
            det_witness(&spec, &copies[0])?
        }
    } else {
        witness::evaluate(id, &lossy_single(&copies[0], &losses)?)?
    };
    let oracle = run.family.oracle(id, p, &losses)?;
    let leakage = copies.iter().map(|c| c.norm_leakage()).fold(0.0, f64::max);
    Ok(Row { point: p.clone(), value, oracle, leakage })
}

/// Evaluate the whole grid in parallel; rows come back in grid order.
pub fn sweep(run: &Run) -> Result<Vec<Row>> {
    let points = expand(&run.params)?;
    points.par_iter().map(|p| evaluate_point(run, p)).collect()
}

pub fn fmt_num(x: f64) -> String {
    format!("{x:.11e}")
}

/// `param_*` columns (sorted), then `value, oracle, abs_err, leakage`.
pub fn write_csv<W: Write>(rows: &[Row], w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    let keys: Vec<String> = rows.first().map(|r| r.point.keys().cloned().collect()).unwrap_or_default();
    let mut header: Vec<String> = keys.iter().map(|k| format!("param_{k}")).collect();
    header.extend(["value", "oracle", "abs_err", "leakage"].map(String::from));
    wr.write_record(&header)?;
    for r in rows {
        let mut rec: Vec<String> = keys.iter().map(|k| fmt_num(r.point[k])).collect();
        rec.push(fmt_num(r.value));
        rec.push(r.oracle.map(fmt_num).unwrap_or_default());
        rec.push(r.abs_err().map(fmt_num).unwrap_or_default());
        rec.push(fmt_num(r.leakage));
        wr.write_record(&rec)?;
    }
    wr.flush()?;
    Ok(())
}
