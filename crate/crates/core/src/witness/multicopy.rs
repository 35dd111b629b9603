//! Multicopy observables: the row-permutation-averaged determinant operator
//! and its expectation on a product of (possibly different, lossy) copies.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_complex::Complex64 as C64;

use super::determinant::{real_part, signed_permutations, DeterminantSpec};
use super::losses::Losses;
use crate::circuits::{apply_circuit_ensemble, loss, mean_field_concentrator};
use crate::error::{Error, Result};
use crate::fock::{Ensemble, FockOperator, ModeLabel, ModeSpace, OperatorWord, PureState, WordPolynomial};

/// Amplitude budget for one pure branch of an explicit multicopy state.
pub const TENSOR_MAX_AMPLITUDES: usize = 10_000_000;

/// One term of the expanded multicopy determinant: a coefficient times a
/// product of single-copy words, each evaluated on its assigned copy.
#[derive(Clone, Debug, PartialEq)]
pub struct MulticopyTerm {
    pub coeff: f64,
    /// `(copy index starting at 0, word on copy-1 labels)`; identity factors are omitted.
    pub factors: Vec<(usize, OperatorWord)>,
}

fn expansion_cache() -> &'static RwLock<HashMap<String, Arc<Vec<MulticopyTerm>>>> {
    static CACHE: OnceLock<RwLock<HashMap<String, Arc<Vec<MulticopyTerm>>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

fn spec_key(spec: &DeterminantSpec) -> String {
    let rows: Vec<String> = spec
        .entries()
        .iter()
        .map(|r| r.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(";"))
        .collect();
    rows.join("|")
}

/// `(1/n!) Σ_σ Σ_π sgn(π) Π_i M_{i,π(i)}` with row `i` on copy `σ(i)`.
pub fn expansion(spec: &DeterminantSpec) -> Arc<Vec<MulticopyTerm>> {
    let key = spec_key(spec);
    if let Some(t) = expansion_cache().read().expect("expansion cache poisoned").get(&key) {
        return t.clone();
    }
    let n = spec.size();
    let perms = signed_permutations(n);
    let norm = 1.0 / perms.len() as f64;
    let mut terms = Vec::with_capacity(perms.len() * perms.len());
    for (_, sigma) in &perms {
        for (sign, pi) in &perms {
            let factors = (0..n)
                .map(|i| (sigma[i], spec.entry(i, pi[i]).clone()))
                .filter(|(_, w)| !w.is_empty())
                .collect();
            terms.push(MulticopyTerm { coeff: sign * norm, factors });
        }
    }
    let terms = Arc::new(terms);
    let mut w = expansion_cache().write().expect("expansion cache poisoned");
    w.entry(key).or_insert(terms).clone()
}

/// The multicopy operator as a word polynomial on copy labels `1..=n`.
pub fn multicopy_poly(spec: &DeterminantSpec) -> WordPolynomial {
    let mut terms = Vec::new();
    for t in expansion(spec).iter() {
        let mut word = OperatorWord::identity();
        for (c, w) in &t.factors {
            word = word.then(&w.with_copy(*c as u32 + 1));
        }
        terms.push((C64::new(t.coeff, 0.0), word));
    }
    WordPolynomial { terms }.simplify()
}

/// Truncated matrix of the multicopy operator on `space` (cached).
pub fn multicopy_operator(spec: &DeterminantSpec, space: &ModeSpace) -> Result<Arc<FockOperator>> {
    crate::spin::cached_operator(&format!("D[{}]", spec_key(spec)), space, || Ok(multicopy_poly(spec)))
}

fn check_copies(spec: &DeterminantSpec, n: usize) -> Result<()> {
    if n != spec.size() {
        return Err(Error::CopyCountMismatch { expected: spec.size(), got: n });
    }
    Ok(())
}

/// Moment of `w` on a copy whose modes pass through pure loss before the
/// measurement: normal order, then scale every ladder factor by `√τ`.
fn lossy_moment(rho: &Ensemble, w: &OperatorWord, copy: u32, losses: &Losses) -> Result<C64> {
    if losses.for_copy(copy).is_empty() {
        return rho.expect_word(w);
    }
    let mut acc = C64::new(0.0, 0.0);
    for (c, term) in &w.normal_ordered().terms {
        let scale: f64 = term.0.iter().map(|l| losses.tau(l.mode.with_copy(copy)).sqrt()).product();
        if scale != 0.0 {
            acc += c * scale * rho.expect_word(term)?;
        }
    }
    Ok(acc)
}

/// Copy-factorized multicopy expectation `⟨…⟨D⟩…⟩` on `states[0] ⊗ states[1] ⊗ …`.
///
/// Each state is a single copy on labels `a1`, `b1`; `losses` is keyed by the
/// multicopy labels (`a2` is mode `a` of the second copy).
pub fn multicopy_expectation(spec: &DeterminantSpec, states: &[Ensemble], losses: &Losses) -> Result<f64> {
    check_copies(spec, states.len())?;
    let mut cache: HashMap<(usize, OperatorWord), C64> = HashMap::new();
    let mut total = C64::new(0.0, 0.0);
    for t in expansion(spec).iter() {
        let mut prod = C64::new(t.coeff, 0.0);
        for (c, w) in &t.factors {
            let m = match cache.get(&(*c, w.clone())) {
                Some(m) => *m,
                None => {
                    let m = lossy_moment(&states[*c], w, *c as u32 + 1, losses)?;
                    cache.insert((*c, w.clone()), m);
                    m
                }
            };
            prod *= m;
        }
        total += prod;
    }
    real_part(total, spec.name())
}

/// Apply pure loss to the listed modes by coupling each to a vacuum ancilla
/// and splitting the result by the ancilla occupation (tracing it out).
pub fn apply_losses_with_ancillas(rho: &Ensemble, lossy: &[(ModeLabel, f64)]) -> Result<Ensemble> {
    let mut rho = rho.clone();
    for &(mode, tau) in lossy {
        if tau == 1.0 {
            continue;
        }
        rho = rho.flat_map_branches(|s| {
            let coupled = loss(s, mode, tau)?;
            let anc = *coupled.modes().last().expect("ancilla appended");
            let d = coupled.dims()[coupled.dims().len() - 1];
            (0..d)
                .map(|k| Ok((1.0, coupled.slice(&[(anc, k)])?.trim())))
                .filter(|b: &Result<(f64, PureState)>| b.as_ref().map_or(true, |(_, s)| s.norm_sqr() > 0.0))
                .collect()
        })?;
    }
    Ok(rho)
}

/// Explicit product of the copies, each relabelled onto its copy index.
pub fn multicopy_state(states: &[Ensemble]) -> Result<Ensemble> {
    let size: f64 = states.iter().map(|s| s.max_branch_len() as f64).product();
    if size > TENSOR_MAX_AMPLITUDES as f64 {
        return Err(Error::TooLarge(format!(
            "multicopy branch would hold {size:.3e} amplitudes (limit {TENSOR_MAX_AMPLITUDES})"
        )));
    }
    let mut out = states[0].with_copy(1)?;
    for (c, s) in states.iter().enumerate().skip(1) {
        out = out.tensor(&s.with_copy(c as u32 + 1)?)?;
    }
    Ok(out)
}

/// Reference path: build the multicopy state explicitly (losses through
/// ancilla modes) and take the expectation of the literal multicopy operator.
pub fn multicopy_expectation_tensor(spec: &DeterminantSpec, states: &[Ensemble], losses: &Losses) -> Result<f64> {
    check_copies(spec, states.len())?;
    let lossy = states
        .iter()
        .enumerate()
        .map(|(c, s)| apply_losses_with_ancillas(s, &losses.for_copy(c as u32 + 1)))
        .collect::<Result<Vec<_>>>()?;
    let rho = multicopy_state(&lossy)?;
    real_part(rho.expect_poly(&multicopy_poly(spec))?, spec.name())
}

/// `(⟨⟨⟨D₁,₂,₄⟩⟩⟩, ⟨⟨D₂,₄⟩⟩ on copies 2', 3' after the mean-field concentrator)`
/// for three copies of `rho`.
pub fn mean_field_reduction_check(rho: &Ensemble) -> Result<(f64, f64)> {
    let copies = [rho.clone(), rho.clone(), rho.clone()];
    let before = multicopy_expectation(&DeterminantSpec::d124(), &copies, &Losses::none())?;
    let after_state = apply_circuit_ensemble(&multicopy_state(&copies)?, &mean_field_concentrator())?;
    let d24 = multicopy_poly(&DeterminantSpec::d24()).map_modes(|m| m.with_copy(m.copy + 1));
    let after = real_part(after_state.expect_poly(&d24)?, "d24 after concentrator")?;
    Ok((before, after))
}
