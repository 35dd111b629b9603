//! Photon-counting readout of the witnesses: run the catalog circuits, keep
//! only joint photon-number statistics, and rebuild the witness from them.
//! Exact distributions by default; finite-shot sampling on request.

use std::collections::BTreeMap;
use std::io::Write;

use itertools::Itertools;
use rand::distributions::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::circuits::{apply_circuit, apply_circuit_ensemble, loss_kraus, mean_field_concentrator, named_circuit, CircuitSpec};
use crate::error::{Error, Result};
use crate::fock::{Ensemble, ModeLabel, PhotonDistribution};
use crate::par;
use crate::fock::kernels::unravel;
use crate::witness::{multicopy_state, Losses, WitnessId};

pub const DEFAULT_SHOTS: u64 = 100_000;

type Stat = fn(&[usize]) -> f64;

/// One measurement setting of a pipeline: a catalog circuit, the modes that
/// are counted afterwards, and the photon-number statistics it contributes.
#[derive(Clone, Debug)]
pub struct Stage {
    pub key: &'static str,
    pub read: Vec<ModeLabel>,
    stats: Vec<Stat>,
}

fn n(o: &[usize], k: usize) -> f64 {
    o[k] as f64
}

fn half_diff(o: &[usize]) -> f64 {
    0.5 * (n(o, 0) - n(o, 1))
}

fn half_diff_sq(o: &[usize]) -> f64 {
    half_diff(o).powi(2)
}

fn half_sum(o: &[usize]) -> f64 {
    0.5 * (n(o, 0) + n(o, 1))
}

fn half_sum_sq(o: &[usize]) -> f64 {
    half_sum(o).powi(2)
}

/// `½(n_{a2} n_{b3} + n_{a3} n_{b2})` on `(a2, a3, b2, b3)`.
fn c_readout(o: &[usize]) -> f64 {
    0.5 * (n(o, 0) * n(o, 3) + n(o, 1) * n(o, 2))
}

/// `½ (n_{a1} - n_{a2}) n_{b1} (n_{b2} - n_{b3})` on `(a1, a2, b1, b2, b3)`.
fn f1_readout(o: &[usize]) -> f64 {
    0.5 * (n(o, 0) - n(o, 1)) * n(o, 2) * (n(o, 3) - n(o, 4))
}

/// `½ (½(n_{a2} - n_{a3}) + n_{a1}) n_{b1} (n_{b2} - n_{b3})` on `(a1, a2, a3, b1, b2, b3)`.
fn f2_readout(o: &[usize]) -> f64 {
    0.5 * (0.5 * (n(o, 1) - n(o, 2)) + n(o, 0)) * n(o, 3) * (n(o, 4) - n(o, 5))
}

/// `n_{a2} n_{b1} n_{b2}` on `(a2, b1, b2)`.
fn f3_readout(o: &[usize]) -> f64 {
    n(o, 0) * n(o, 1) * n(o, 2)
}

/// `¼ (n_{a2} - n_{a3}) n_{b1} (n_{b2} - n_{b3})` on `(a2, a3, b1, b2, b3)`.
fn f5_readout(o: &[usize]) -> f64 {
    0.25 * (n(o, 0) - n(o, 1)) * n(o, 2) * (n(o, 3) - n(o, 4))
}

fn labels(s: &str) -> Vec<ModeLabel> {
    s.split_whitespace().map(|m| m.parse().expect("valid constant label")).collect()
}

/// Measurement settings of a witness pipeline, in a fixed order.
pub fn stages(id: WitnessId) -> Result<Vec<Stage>> {
    let st = |key, read: &str, stats: Vec<Stat>| Stage { key, read: labels(read), stats };
    match id {
        WitnessId::D124 => Ok(["d124.C1", "d124.C2", "d124.C3"]
            .into_iter()
            .map(|k| st(k, "a2 a3 b2 b3", vec![c_readout]))
            .collect()),
        WitnessId::D149 => Ok(vec![
            st("d149.F1", "a1 a2 b1 b2 b3", vec![f1_readout]),
            st("d149.F2", "a1 a2 a3 b1 b2 b3", vec![f2_readout]),
            st("d149.F3", "a2 b1 b2", vec![f3_readout]),
            st("d149.F4", "a1 a2 b1 b2 b3", vec![f1_readout]),
            st("d149.F5", "a2 a3 b1 b2 b3", vec![f5_readout]),
        ]),
        WitnessId::D1913Agarwal => Ok(vec![
            st("d1913_agarwal.Lx", "a1 b1", vec![half_diff, half_diff_sq]),
            st("d1913_agarwal.Ly", "a1 b1", vec![half_diff, half_diff_sq]),
            st("d1913_agarwal.Lz", "a1 b1", vec![half_diff, half_diff_sq, half_sum, half_sum_sq]),
        ]),
        other => Err(Error::UnknownKey(format!("no photon-counting pipeline for witness '{other}'"))),
    }
}

/// Witness value from the per-stage means of the stage statistics.
fn combine(id: WitnessId, m: &[Vec<f64>]) -> f64 {
    match id {
        WitnessId::D124 => m[0][0] - m[1][0] + m[2][0],
        WitnessId::D149 => m[0][0] - m[1][0] + m[2][0] - m[3][0] - m[4][0],
        _ => {
            let var = |s: &[f64], k: usize| s[k + 1] - s[k] * s[k];
            let (x, y, z) = (&m[0], &m[1], &m[2]);
            16.0 * var(x, 0) * var(y, 0) + 4.0 * var(z, 2) - 4.0 * var(z, 0)
                - 4.0 * (x[0] * x[0] + y[0] * y[0] + z[0] * z[0])
        }
    }
}

/// Joint photon-number distribution of `read` after `circuit`. Modes the
/// circuit does not touch and that are not read are projected out first, one
/// occupation at a time, which keeps the interferometer step small.
pub fn output_distribution(rho: &Ensemble, circuit: &CircuitSpec, read: &[ModeLabel]) -> Result<PhotonDistribution> {
    let touched = circuit.modes();
    let mut acc: Option<PhotonDistribution> = None;
    for (p, s) in rho.branches() {
        let idle: Vec<(ModeLabel, usize)> = s
            .modes()
            .iter()
            .zip(s.dims())
            .filter(|(m, _)| !touched.contains(m) && !read.contains(m))
            .map(|(m, d)| (*m, *d))
            .collect();
        let idle_dims: Vec<usize> = idle.iter().map(|x| x.1).collect();
        let count: usize = idle_dims.iter().product();
        let parts = par::map_range(count, |idx| -> Result<Option<PhotonDistribution>> {
            let occ = unravel(idx, &idle_dims);
            let fixed: Vec<(ModeLabel, usize)> = idle.iter().zip(&occ).map(|((m, _), k)| (*m, *k)).collect();
            let slice = s.slice(&fixed)?;
            if slice.norm_sqr() == 0.0 {
                return Ok(None);
            }
            Ok(Some(apply_circuit(&slice.trim(), circuit)?.photon_distribution(read)?))
        });
        for part in parts {
            if let Some(d) = part? {
                match acc.as_mut() {
                    Some(a) => a.accumulate(&d, *p)?,
                    None => {
                        let mut z = PhotonDistribution::zeros(read.to_vec(), d.dims().to_vec());
                        z.accumulate(&d, *p)?;
                        acc = Some(z);
                    }
                }
            }
        }
    }
    acc.ok_or_else(|| Error::IllDefinedState("state has no weight".into()))
}

fn apply_input_losses(rho: &Ensemble, copy: u32, losses: &Losses) -> Result<Ensemble> {
    let mut out = rho.clone();
    for (m, tau) in losses.for_copy(copy) {
        out = loss_kraus(&out, m, tau)?;
    }
    Ok(out)
}

/// Distinct assignments of the given copies to the copy slots, with weights.
fn assignments(states: &[Ensemble]) -> Vec<(f64, Vec<usize>)> {
    let perms: Vec<Vec<usize>> = (0..states.len()).permutations(states.len()).collect();
    let total = perms.len() as f64;
    let mut out: Vec<(f64, Vec<usize>)> = Vec::new();
    for p in perms {
        match out.iter_mut().find(|(_, q)| q.iter().zip(&p).all(|(&i, &j)| states[i] == states[j])) {
            Some(e) => e.0 += 1.0 / total,
            None => out.push((1.0 / total, p)),
        }
    }
    out
}

/// Output distribution of every stage of the pipeline for `id`.
///
/// `states` are single copies on labels `a1`, `b1`; losses act on the inputs
/// before any circuit and are keyed by multicopy labels. For `d149` the
/// printed readouts assume exchangeable copies, so distinct copies are
/// averaged over their assignments to the three slots.
pub fn pipeline_distributions(id: WitnessId, states: &[Ensemble], losses: &Losses) -> Result<Vec<(Stage, PhotonDistribution)>> {
    let stages = stages(id)?;
    let want = id.pipeline_copies().expect("pipeline witness");
    if states.len() != want {
        return Err(Error::CopyCountMismatch { expected: want, got: states.len() });
    }
    let lossy: Vec<Ensemble> = states
        .iter()
        .enumerate()
        .map(|(c, s)| apply_input_losses(s, c as u32 + 1, losses))
        .collect::<Result<_>>()?;
    let mut out: Vec<(Stage, Option<PhotonDistribution>)> = stages.into_iter().map(|s| (s, None)).collect();
    let keys: Vec<(&'static str, Vec<ModeLabel>)> = out.iter().map(|(s, _)| (s.key, s.read.clone())).collect();
    let mut add = |k: usize, d: PhotonDistribution, w: f64| -> Result<()> {
        match out[k].1.as_mut() {
            Some(a) => a.accumulate(&d, w),
            None => {
                let mut z = PhotonDistribution::zeros(d.modes().to_vec(), d.dims().to_vec());
                z.accumulate(&d, w)?;
                out[k].1 = Some(z);
                Ok(())
            }
        }
    };
    match id {
        WitnessId::D124 => {
            let rho = apply_circuit_ensemble(&multicopy_state(&lossy)?, &mean_field_concentrator())?;
            for (k, (key, read)) in keys.iter().enumerate() {
                add(k, output_distribution(&rho, &named_circuit(key)?, read)?, 1.0)?;
            }
        }
        WitnessId::D149 => {
            for (w, perm) in assignments(&lossy) {
                let copies: Vec<Ensemble> = perm.iter().map(|&i| lossy[i].clone()).collect();
                let rho = multicopy_state(&copies)?;
                for (k, (key, read)) in keys.iter().enumerate() {
                    add(k, output_distribution(&rho, &named_circuit(key)?, read)?, w)?;
                }
            }
        }
        _ => {
            let rho = lossy[0].with_copy(1)?;
            for (k, (key, read)) in keys.iter().enumerate() {
                add(k, output_distribution(&rho, &named_circuit(key)?, read)?, 1.0)?;
            }
        }
    }
    Ok(out.into_iter().map(|(s, d)| (s, d.expect("every stage measured"))).collect())
}

/// Witness value rebuilt from exact photon-number distributions only.
pub fn pipeline_value(id: WitnessId, states: &[Ensemble], losses: &Losses) -> Result<f64> {
    let dists = pipeline_distributions(id, states, losses)?;
    let means: Vec<Vec<f64>> = dists
        .iter()
        .map(|(st, d)| {
            let t = d.total();
            st.stats.iter().map(|f| d.expect(f) / t).collect()
        })
        .collect();
    Ok(combine(id, &means))
}

/// Photon-count histogram of one measurement setting.
#[derive(Clone, Debug, PartialEq)]
pub struct CountsTable {
    pub circuit: String,
    pub modes: Vec<ModeLabel>,
    pub counts: BTreeMap<Vec<usize>, u64>,
    pub shots: u64,
    pub seed: u64,
}

impl CountsTable {
    /// CSV with one column per counted mode followed by `count`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        let io = |e: csv::Error| Error::InvalidArgument(format!("csv output failed: {e}"));
        let mut header: Vec<String> = self.modes.iter().map(|m| m.to_string()).collect();
        header.push("count".into());
        wr.write_record(&header).map_err(io)?;
        for (occ, c) in &self.counts {
            let mut row: Vec<String> = occ.iter().map(|k| k.to_string()).collect();
            row.push(c.to_string());
            wr.write_record(&row).map_err(io)?;
        }
        wr.flush().map_err(|e| Error::InvalidArgument(format!("csv output failed: {e}")))
    }
}

fn draw(dist: &PhotonDistribution, circuit: String, shots: u64, seed: u64) -> Result<CountsTable> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    let index = WeightedIndex::new(dist.probs()).map_err(|e| Error::IllDefinedState(format!("cannot sample: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = vec![0u64; dist.probs().len()];
    for _ in 0..shots {
        hits[index.sample(&mut rng)] += 1;
    }
    let counts = hits
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(i, &c)| (unravel(i, dist.dims()), c))
        .collect();
    Ok(CountsTable { circuit, modes: dist.modes().to_vec(), counts, shots, seed })
}

/// `shots` i.i.d. photon-count records of `read` after `circuit`.
pub fn sample(rho: &Ensemble, circuit: &CircuitSpec, read: &[ModeLabel], shots: u64, seed: u64) -> Result<CountsTable> {
    let dist = output_distribution(rho, circuit, read)?;
    draw(&dist, circuit.to_string(), shots, seed)
}

/// Finite-shot run of every stage of a pipeline; stage `k` uses seed `seed + k`.
pub fn sample_pipeline(id: WitnessId, states: &[Ensemble], losses: &Losses, shots: u64, seed: u64) -> Result<Vec<CountsTable>> {
    pipeline_distributions(id, states, losses)?
        .into_iter()
        .enumerate()
        .map(|(k, (st, d))| draw(&d, st.key.to_string(), shots, seed.wrapping_add(k as u64)))
        .collect()
}

/// Plug-in estimate of the witness from the stage histograms, with a
/// delete-one jackknife standard error (stages are independent samples).
pub fn estimate(id: WitnessId, tables: &[CountsTable]) -> Result<(f64, f64)> {
    let stages = stages(id)?;
    let tables: Vec<&CountsTable> = stages
        .iter()
        .map(|st| {
            tables
                .iter()
                .find(|t| t.circuit == st.key && t.modes == st.read)
                .ok_or_else(|| Error::UnknownKey(format!("missing counts for stage {}", st.key)))
        })
        .collect::<Result<_>>()?;
    // per stage: sums of each statistic over all shots
    let sums: Vec<Vec<f64>> = stages
        .iter()
        .zip(&tables)
        .map(|(st, t)| st.stats.iter().map(|f| t.counts.iter().map(|(o, &c)| c as f64 * f(o)).sum()).collect())
        .collect();
    let means = |k_skip: Option<(usize, &[usize])>| -> Vec<Vec<f64>> {
        sums.iter()
            .enumerate()
            .map(|(k, s)| {
                let n = tables[k].shots as f64;
                match k_skip {
                    Some((kk, o)) if kk == k => {
                        s.iter().zip(&stages[k].stats).map(|(v, f)| (v - f(o)) / (n - 1.0)).collect()
                    }
                    _ => s.iter().map(|v| v / n).collect(),
                }
            })
            .collect()
    };
    let value = combine(id, &means(None));
    let mut var = 0.0;
    for (k, t) in tables.iter().enumerate() {
        let n = t.shots as f64;
        if t.shots < 2 {
            return Err(Error::InvalidArgument("jackknife needs at least 2 shots per stage".into()));
        }
        let loo: Vec<(f64, f64)> = t.counts.iter().map(|(o, &c)| (c as f64, combine(id, &means(Some((k, o)))))).collect();
        let bar = loo.iter().map(|(c, v)| c * v).sum::<f64>() / n;
        var += (n - 1.0) / n * loo.iter().map(|(c, v)| c * (v - bar).powi(2)).sum::<f64>();
    }
    Ok((value, var.sqrt()))
}
