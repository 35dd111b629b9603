use std::collections::HashMap;

use num_complex::Complex64 as C64;
use sprs::TriMat;

use super::unitary::{bs_matrix, CircuitElement, CircuitSpec, ModeUnitary};
use crate::error::{Error, Result};
use crate::fock::{kernels, Ensemble, FockOperator, ModeLabel, ModeSpace, PureState};

/// Photon-number blocks of a two-mode transformation:
/// `blocks[N][m][k] = <m, N-m| U |k, N-k>` for `N <= max_total`.
///
/// Built by applying the normalized creation combinations
/// `c_j† = Σ_i M_ij a_i†` one photon at a time, so every intermediate vector
/// is itself a normalized Fock-space image.
pub(crate) fn two_mode_blocks(m: &[[C64; 2]; 2], max_total: usize) -> Vec<Vec<Vec<C64>>> {
    let apply = |v: &[C64], j: usize| -> Vec<C64> {
        // v indexed by level of the first mode, total photon number v.len()-1
        let p = v.len() - 1;
        let mut w = vec![C64::new(0.0, 0.0); p + 2];
        for (k, &x) in v.iter().enumerate() {
            if x.re == 0.0 && x.im == 0.0 {
                continue;
            }
            w[k + 1] += m[0][j] * ((k + 1) as f64).sqrt() * x;
            w[k] += m[1][j] * ((p - k + 1) as f64).sqrt() * x;
        }
        w
    };
    let mut blocks = Vec::with_capacity(max_total + 1);
    // second-mode ladders U|0, r>
    let mut zero_r: Vec<Vec<C64>> = vec![vec![C64::new(1.0, 0.0)]];
    for r in 1..=max_total {
        let mut w = apply(&zero_r[r - 1], 1);
        let s = 1.0 / (r as f64).sqrt();
        w.iter_mut().for_each(|z| *z *= s);
        zero_r.push(w);
    }
    for n in 0..=max_total {
        let mut blk = vec![vec![C64::new(0.0, 0.0); n + 1]; n + 1];
        for k in 0..=n {
            let mut v = zero_r[n - k].clone();
            for s in 1..=k {
                v = apply(&v, 0);
                let f = 1.0 / (s as f64).sqrt();
                v.iter_mut().for_each(|z| *z *= f);
            }
            for (mm, row) in blk.iter_mut().enumerate() {
                row[k] = v[mm];
            }
        }
        blocks.push(blk);
    }
    blocks
}

fn apply_bs(state: &PureState, first: ModeLabel, second: ModeLabel, tau: f64) -> Result<PureState> {
    let pi = state.position(first)?;
    let pj = state.position(second)?;
    let mut m = bs_matrix(tau);
    let (lo, hi) = if pi < pj {
        (pi, pj)
    } else {
        // reorder the 2x2 matrix so that its first index is the earlier position
        m = [[m[1][1], m[1][0]], [m[0][1], m[0][0]]];
        (pj, pi)
    };
    let Some(total) = kernels::max_pair_total(state.amplitudes(), state.dims(), lo, hi) else {
        return Ok(state.clone());
    };
    let blocks = two_mode_blocks(&m, total);
    let (dims, amps) =
        kernels::apply_two_mode(state.amplitudes(), state.dims(), lo, hi, total + 1, total + 1, &blocks);
    PureState::new(state.modes().to_vec(), dims, amps)
}

/// Apply a passive circuit exactly. Beam splitters resize the two modes they
/// act on to hold every photon present, so no amplitude is ever cut off.
pub fn apply_circuit(state: &PureState, spec: &CircuitSpec) -> Result<PureState> {
    let mut s = state.clone();
    for e in spec.elements() {
        s = match *e {
            CircuitElement::BeamSplitter { first, second, tau } => apply_bs(&s, first, second, tau)?,
            CircuitElement::PhaseShifter { mode, theta } => {
                let p = s.position(mode)?;
                s.apply_phase(p, theta)
            }
        };
    }
    Ok(s)
}

pub fn apply_circuit_ensemble(rho: &Ensemble, spec: &CircuitSpec) -> Result<Ensemble> {
    rho.map_branches(|s| apply_circuit(s, spec))
}

const LIFT_MAX_DIM: usize = 200_000;

/// Fock-space matrix of the passive unitary `u` on `space` (which must
/// contain the modes of `u`): entries `<m|U|n>` for all truncated basis states.
/// The result is exactly unitary on every block of total photon number below
/// the smallest cutoff among the modes of `u`.
pub fn lift(u: &ModeUnitary, space: &ModeSpace) -> Result<FockOperator> {
    let size = space.size();
    if size > LIFT_MAX_DIM {
        return Err(Error::TooLarge(format!("lift on a {size}-dimensional space")));
    }
    let modes = space.modes();
    let dims = space.dims();
    let pos: Vec<usize> = u
        .modes()
        .iter()
        .map(|m| modes.iter().position(|x| x == m).ok_or_else(|| Error::ModeNotFound(m.to_string())))
        .collect::<Result<_>>()?;
    let k = pos.len();
    let st = kernels::strides(dims);
    let mut tri = TriMat::new((size, size));
    let mut cache: HashMap<Vec<usize>, Vec<(Vec<usize>, C64)>> = HashMap::new();
    for idx in 0..size {
        let digits: Vec<usize> = (0..dims.len()).map(|q| (idx / st[q]) % dims[q]).collect();
        let local: Vec<usize> = pos.iter().map(|&p| digits[p]).collect();
        let image = cache.entry(local.clone()).or_insert_with(|| image_of(u, &local));
        for (out_local, amp) in image.iter() {
            if out_local.iter().zip(&pos).any(|(&n, &p)| n >= dims[p]) {
                continue;
            }
            let mut row = idx;
            for q in 0..k {
                row = row + out_local[q] * st[pos[q]] - local[q] * st[pos[q]];
            }
            tri.add_triplet(row, idx, *amp);
        }
    }
    Ok(FockOperator::from_csr(space.clone(), tri.to_csr())?)
}

/// `U|n>` over the modes of `u` as a sparse list of occupations.
fn image_of(u: &ModeUnitary, n: &[usize]) -> Vec<(Vec<usize>, C64)> {
    let k = n.len();
    let mut v: HashMap<Vec<usize>, C64> = HashMap::new();
    v.insert(vec![0; k], C64::new(1.0, 0.0));
    for j in 0..k {
        for step in 1..=n[j] {
            let mut w: HashMap<Vec<usize>, C64> = HashMap::new();
            for (occ, amp) in &v {
                for i in 0..k {
                    let c = u.get(i, j);
                    if c.re == 0.0 && c.im == 0.0 {
                        continue;
                    }
                    let mut o = occ.clone();
                    o[i] += 1;
                    *w.entry(o).or_default() += c * (occ[i] as f64 + 1.0).sqrt() * amp / (step as f64).sqrt();
                }
            }
            v = w;
        }
    }
    v.into_iter().filter(|(_, a)| a.norm() > 0.0).collect()
}

/// Pure-loss channel on `mode`: couple to a fresh vacuum ancilla with a
/// beam splitter of transmittance `tau`. The ancilla is appended last and is
/// never read.
pub fn loss(state: &PureState, mode: ModeLabel, tau: f64) -> Result<PureState> {
    if !(0.0..=1.0).contains(&tau) {
        return Err(Error::InvalidArgument(format!("transmittance {tau} outside [0, 1]")));
    }
    let k = state.modes().iter().filter(|m| m.is_ancilla()).map(|m| m.copy).max().unwrap_or(0) + 1;
    let anc = ModeLabel::ancilla(k);
    let s = state.tensor(&PureState::vacuum(vec![anc])?)?;
    apply_bs(&s, mode, anc, tau)
}

pub fn loss_ensemble(rho: &Ensemble, mode: ModeLabel, tau: f64) -> Result<Ensemble> {
    rho.map_branches(|s| loss(s, mode, tau))
}

/// Pure loss expressed through its Kraus operators
/// `K_k = sqrt((1-τ)^k / k!) τ^{n/2} a^k`: each branch splits into one branch
/// per number of lost photons. Equivalent to [`loss`] followed by tracing
/// out the ancilla, without enlarging the tensor.
pub fn loss_kraus(rho: &Ensemble, mode: ModeLabel, tau: f64) -> Result<Ensemble> {
    if !(0.0..=1.0).contains(&tau) {
        return Err(Error::InvalidArgument(format!("transmittance {tau} outside [0, 1]")));
    }
    if tau == 1.0 {
        return Ok(rho.clone());
    }
    rho.flat_map_branches(|s| {
        let pos = s.position(mode)?;
        let d = s.dims()[pos];
        let mut out = Vec::with_capacity(d);
        for k in 0..d {
            // amplitude of n-k from n: sqrt(C(n,k)) τ^{(n-k)/2} (1-τ)^{k/2}
            let amps = kernels::map_rows(s.amplitudes(), s.dims(), pos, d - k, |m| {
                let n = m + k;
                let binom = (1..=k).fold(1.0f64, |acc, i| acc * (m + i) as f64 / i as f64);
                let c = binom.sqrt() * tau.powf(m as f64 / 2.0) * (1.0 - tau).powf(k as f64 / 2.0);
                Some((n, C64::new(c, 0.0)))
            });
            let branch = PureState::new(s.modes().to_vec(), {
                let mut dims = s.dims().to_vec();
                dims[pos] = d - k;
                dims
            }, amps)?;
            if branch.norm_sqr() > 0.0 {
                out.push((1.0, branch));
            }
        }
        Ok(out)
    })
}

/// Phase rotation helper: `e^{-iθ n}` on one mode of every branch.
pub fn phase_rotate(rho: &Ensemble, mode: ModeLabel, theta: f64) -> Result<Ensemble> {
    rho.map_branches(|s| Ok(s.apply_phase(s.position(mode)?, theta)))
}
