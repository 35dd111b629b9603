//! Truncated multimode Fock space: labelled modes, dense states, operator
//! words and sparse operators.

mod distribution;
mod ensemble;
pub(crate) mod kernels;
mod mode;
mod operator;
mod state;
mod word;

pub use distribution::PhotonDistribution;
pub use ensemble::Ensemble;
pub use mode::{ModeLabel, Party};
pub use operator::{annihilation, FockOperator, ModeSpace};
pub use state::PureState;
pub use word::{Ladder, OperatorWord, WordPolynomial};

use num_complex::Complex64 as C64;

use crate::error::Result;

/// Anything with an expectation value on a (possibly mixed) state.
pub trait Observable {
    fn expectation(&self, rho: &Ensemble) -> Result<C64>;
}

impl Observable for OperatorWord {
    fn expectation(&self, rho: &Ensemble) -> Result<C64> {
        rho.expect_word(self)
    }
}

impl Observable for WordPolynomial {
    fn expectation(&self, rho: &Ensemble) -> Result<C64> {
        rho.expect_poly(self)
    }
}

impl Observable for FockOperator {
    fn expectation(&self, rho: &Ensemble) -> Result<C64> {
        FockOperator::expectation(self, rho)
    }
}
