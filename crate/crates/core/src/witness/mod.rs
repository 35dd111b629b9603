//! Witness determinants, their multicopy observables, and the single-copy
//! criteria they are compared against.

mod determinant;
mod losses;
mod multicopy;
mod single;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

pub use determinant::{det_witness, determinant, signed_permutations, DeterminantSpec, IMAG_TOLERANCE};
pub use losses::Losses;
pub use multicopy::{
    apply_losses_with_ancillas, expansion, mean_field_reduction_check, multicopy_expectation,
    multicopy_expectation_tensor, multicopy_operator, multicopy_poly, multicopy_state, MulticopyTerm,
    TENSOR_MAX_AMPLITUDES,
};
pub use single::{
    agarwal_d1913, agarwal_moment_form, agarwal_spin_form, d124_covariance_form, duan, duan_optimized,
    quadrature_p, quadrature_x, AGARWAL_CONSISTENCY,
};

use crate::error::{Error, Result};
use crate::fock::Ensemble;

/// Stable witness identifiers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessId {
    D124,
    D24,
    D149,
    D1913,
    D1913Agarwal,
    Duan,
    DuanOpt,
}

impl WitnessId {
    pub const ALL: [WitnessId; 7] = [
        Self::D124,
        Self::D24,
        Self::D149,
        Self::D1913,
        Self::D1913Agarwal,
        Self::Duan,
        Self::DuanOpt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::D124 => "d124",
            Self::D24 => "d24",
            Self::D149 => "d149",
            Self::D1913 => "d1913",
            Self::D1913Agarwal => "d1913_agarwal",
            Self::Duan => "duan",
            Self::DuanOpt => "duan_opt",
        }
    }

    /// Moment matrix behind the witness, if it is a determinant.
    pub fn determinant(self) -> Option<DeterminantSpec> {
        match self {
            Self::D124 => Some(DeterminantSpec::d124()),
            Self::D24 => Some(DeterminantSpec::d24()),
            Self::D149 => Some(DeterminantSpec::d149()),
            Self::D1913 => Some(DeterminantSpec::d1913()),
            _ => None,
        }
    }

    /// Number of copies consumed by the photon-counting pipeline.
    pub fn pipeline_copies(self) -> Option<usize> {
        match self {
            Self::D124 | Self::D149 => Some(3),
            Self::D1913Agarwal => Some(1),
            _ => None,
        }
    }
}

impl fmt::Display for WitnessId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WitnessId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|w| w.name() == s)
            .ok_or_else(|| Error::UnknownKey(format!("witness '{s}'")))
    }
}

/// Single-copy value of a witness. `duan` uses `r = 1`.
pub fn evaluate(id: WitnessId, rho: &Ensemble) -> Result<f64> {
    match id {
        WitnessId::D1913Agarwal => agarwal_d1913(rho),
        WitnessId::Duan => duan(rho, 1.0),
        WitnessId::DuanOpt => duan_optimized(rho),
        _ => det_witness(&id.determinant().expect("determinant witness"), rho),
    }
}

/// One evaluated witness with its reference value and truncation diagnostic.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessReport {
    pub witness: WitnessId,
    pub params: BTreeMap<String, f64>,
    pub value: f64,
    pub oracle: Option<f64>,
    pub abs_err: Option<f64>,
    /// Largest top-level population among the input states.
    pub leakage: f64,
}

impl WitnessReport {
    pub fn new(witness: WitnessId, params: BTreeMap<String, f64>, value: f64, oracle: Option<f64>, leakage: f64) -> Self {
        let abs_err = oracle.map(|o| (value - o).abs());
        Self { witness, params, value, oracle, abs_err, leakage }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::ModeLabel;
    use crate::states;
    use num_complex::Complex64 as C64;

    #[test]
    fn tmsv_d124_and_covariance_form() {
        let rho = Ensemble::pure(states::tmsv(0.5, 60).unwrap()).unwrap();
        let d = evaluate(WitnessId::D124, &rho).unwrap();
        assert!((d + 1.0 / 3.0).abs() < 1e-10, "{d}");
        assert!((d124_covariance_form(&rho).unwrap() - d).abs() < 1e-12);
        assert!(duan_optimized(&rho).unwrap() < 0.0);
    }

    #[test]
    fn vacuum_duan_saturates() {
        let rho = Ensemble::pure(states::vacuum(vec![ModeLabel::a(1), ModeLabel::b(1)]).unwrap()).unwrap();
        assert!(duan(&rho, 1.0).unwrap().abs() < 1e-14);
        assert!(matches!(duan_optimized(&rho), Err(Error::OptimizationUndefined(_))));
        assert!(duan(&rho, 0.0).is_err());
    }

    #[test]
    fn noon_agarwal() {
        let h = C64::new(0.5f64.sqrt(), 0.0);
        for (n, want) in [(1, -2.0), (2, -4.0)] {
            let rho = Ensemble::pure(states::noon(n, h, h, 4).unwrap()).unwrap();
            assert!((agarwal_d1913(&rho).unwrap() - want).abs() < 1e-12);
        }
        let rho = Ensemble::pure(states::noon(1, h, h, 4).unwrap()).unwrap();
        assert!((evaluate(WitnessId::D1913, &rho).unwrap() + 0.5).abs() < 1e-12);
    }

    #[test]
    fn factorized_and_tensor_agree_with_loss() {
        let s = Ensemble::pure(states::tmsv(0.3, 10).unwrap()).unwrap();
        let t = Ensemble::pure(states::tmsv(0.2, 8).unwrap()).unwrap();
        let losses: Losses = "a1=0.7,b2=0.4".parse().unwrap();
        let spec = DeterminantSpec::d24();
        let f = multicopy_expectation(&spec, &[s.clone(), t.clone()], &losses).unwrap();
        let x = multicopy_expectation_tensor(&spec, &[s, t], &losses).unwrap();
        assert!((f - x).abs() < 1e-12, "{f} {x}");
        assert_eq!(expansion(&DeterminantSpec::d124()).len(), 36);
    }

    #[test]
    fn witness_names_round_trip() {
        for w in WitnessId::ALL {
            assert_eq!(w.name().parse::<WitnessId>().unwrap(), w);
        }
        assert!("d23".parse::<WitnessId>().is_err());
    }
}
