//! Jordan–Schwinger spin operators on mode pairs and the composite
//! observables `C_j` (two copies) and `F_j` (three copies).

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::{FockOperator, Ladder, ModeLabel, ModeSpace, OperatorWord, WordPolynomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpinComponent {
    X,
    Y,
    Z,
    Zero,
}

impl fmt::Display for SpinComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::X => "x",
            Self::Y => "y",
            Self::Z => "z",
            Self::Zero => "0",
        };
        write!(f, "{s}")
    }
}

impl FromStr for SpinComponent {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "x" => Ok(Self::X),
            "y" => Ok(Self::Y),
            "z" => Ok(Self::Z),
            "0" | "zero" => Ok(Self::Zero),
            _ => Err(Error::UnknownKey(format!("spin component '{s}'"))),
        }
    }
}

fn bilinear(c: C64, left: ModeLabel, right: ModeLabel) -> WordPolynomial {
    WordPolynomial::word(OperatorWord(vec![Ladder::create(left), Ladder::annihilate(right)])).scale(c)
}

pub fn number_poly(m: ModeLabel) -> WordPolynomial {
    bilinear(C64::new(1.0, 0.0), m, m)
}

/// Spin component on the ordered pair `(mu, nu)` as a word polynomial.
pub fn spin_poly(c: SpinComponent, mu: ModeLabel, nu: ModeLabel) -> WordPolynomial {
    let half = C64::new(0.5, 0.0);
    match c {
        SpinComponent::X => bilinear(half, nu, mu).add(&bilinear(half, mu, nu)),
        SpinComponent::Y => {
            let ih = C64::new(0.0, 0.5);
            bilinear(ih, nu, mu).add(&bilinear(-ih, mu, nu))
        }
        SpinComponent::Z => bilinear(half, mu, mu).add(&bilinear(-half, nu, nu)),
        SpinComponent::Zero => bilinear(half, mu, mu).add(&bilinear(half, nu, nu)),
    }
}

fn check_pair(mu: ModeLabel, nu: ModeLabel) -> Result<()> {
    if mu == nu {
        return Err(Error::InvalidArgument(format!("spin operator needs two distinct modes, got {mu} twice")));
    }
    Ok(())
}

pub fn spin(c: SpinComponent, mu: ModeLabel, nu: ModeLabel, space: &ModeSpace) -> Result<FockOperator> {
    check_pair(mu, nu)?;
    space.polynomial(&spin_poly(c, mu, nu))
}

/// `(L^x)² + (L^y)² + (L^z)²` on the pair.
pub fn casimir(mu: ModeLabel, nu: ModeLabel, space: &ModeSpace) -> Result<FockOperator> {
    check_pair(mu, nu)?;
    let mut acc = space.zero();
    for c in [SpinComponent::X, SpinComponent::Y, SpinComponent::Z] {
        let l = spin(c, mu, nu, space)?;
        acc = acc.add(&l.mul(&l)?)?;
    }
    Ok(acc)
}

/// `C_j = L⁰_a L⁰_b - L^j_a L^j_b` on the pairs `(a2, a3)` and `(b2, b3)`.
pub fn c_poly(j: usize) -> Result<WordPolynomial> {
    let comp = match j {
        1 => SpinComponent::X,
        2 => SpinComponent::Y,
        3 => SpinComponent::Z,
        _ => return Err(Error::InvalidArgument(format!("C_j defined for j = 1, 2, 3, got {j}"))),
    };
    let (a2, a3, b2, b3) = (ModeLabel::a(2), ModeLabel::a(3), ModeLabel::b(2), ModeLabel::b(3));
    let zero = spin_poly(SpinComponent::Zero, a2, a3).mul(&spin_poly(SpinComponent::Zero, b2, b3));
    let jj = spin_poly(comp, a2, a3).mul(&spin_poly(comp, b2, b3));
    Ok(zero.sub(&jj))
}

const CYCLIC: [[u32; 3]; 3] = [[1, 2, 3], [2, 3, 1], [3, 1, 2]];

/// `F_j` as the literal average over the three cyclic relabelings of copies.
pub fn f_poly(j: usize) -> Result<WordPolynomial> {
    use SpinComponent::{Zero, X, Y};
    if !(1..=5).contains(&j) {
        return Err(Error::InvalidArgument(format!("F_j defined for j = 1..5, got {j}")));
    }
    let a = ModeLabel::a;
    let b = ModeLabel::b;
    let mut acc = WordPolynomial::zero();
    for s in CYCLIC {
        let [s1, s2, s3] = s;
        let term = match j {
            1 => spin_poly(X, a(s1), a(s2))
                .add(&spin_poly(X, a(s3), a(s1)))
                .mul(&number_poly(b(s1)))
                .mul(&spin_poly(X, b(s2), b(s3))),
            2 => spin_poly(X, a(s2), a(s3))
                .add(&number_poly(a(s1)))
                .mul(&number_poly(b(s1)))
                .mul(&spin_poly(X, b(s2), b(s3))),
            3 => spin_poly(Zero, a(s1), a(s2))
                .sub(&spin_poly(X, a(s1), a(s2)))
                .mul(&number_poly(b(s1)))
                .mul(&number_poly(b(s2))),
            4 => spin_poly(Y, a(s1), a(s2))
                .add(&spin_poly(Y, a(s3), a(s1)))
                .mul(&number_poly(b(s1)))
                .mul(&spin_poly(Y, b(s2), b(s3))),
            _ => spin_poly(Y, a(s2), a(s3)).mul(&number_poly(b(s1))).mul(&spin_poly(Y, b(s2), b(s3))),
        };
        acc = acc.add(&term);
    }
    Ok(acc.scale(C64::new(1.0 / 3.0, 0.0)).simplify())
}

type CacheKey = (String, Vec<ModeLabel>, Vec<usize>);

fn cache() -> &'static RwLock<HashMap<CacheKey, Arc<FockOperator>>> {
    static CACHE: OnceLock<RwLock<HashMap<CacheKey, Arc<FockOperator>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Build (or fetch) the operator of a named polynomial on `space`.
pub(crate) fn cached_operator(
    name: &str,
    space: &ModeSpace,
    build: impl FnOnce() -> Result<WordPolynomial>,
) -> Result<Arc<FockOperator>> {
    let key = (name.to_string(), space.modes().to_vec(), space.dims().to_vec());
    if let Some(op) = cache().read().expect("operator cache poisoned").get(&key) {
        return Ok(op.clone());
    }
    let op = Arc::new(space.polynomial(&build()?)?);
    let mut w = cache().write().expect("operator cache poisoned");
    Ok(w.entry(key).or_insert(op).clone())
}

pub fn c_operator(j: usize, space: &ModeSpace) -> Result<Arc<FockOperator>> {
    cached_operator(&format!("C{j}"), space, || c_poly(j))
}

pub fn f_operator(j: usize, space: &ModeSpace) -> Result<Arc<FockOperator>> {
    cached_operator(&format!("F{j}"), space, || f_poly(j))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{Ensemble, PureState};

    fn basis(n: [usize; 2], d: usize) -> Ensemble {
        let s = PureState::from_fn(vec![ModeLabel::a(1), ModeLabel::a(2)], vec![d, d], |k| {
            C64::new(if k == n { 1.0 } else { 0.0 }, 0.0)
        })
        .unwrap();
        Ensemble::pure(s).unwrap()
    }

    #[test]
    fn spin_expectations() {
        let (m1, m2) = (ModeLabel::a(1), ModeLabel::a(2));
        let sp = ModeSpace::uniform(vec![m1, m2], 4).unwrap();
        let lz = spin(SpinComponent::Z, m1, m2, &sp).unwrap();
        assert!((lz.expectation(&basis([2, 0], 4)).unwrap().re - 1.0).abs() < 1e-14);
        let l0 = spin(SpinComponent::Zero, m1, m2, &sp).unwrap();
        assert!((l0.expectation(&basis([1, 1], 4)).unwrap().re - 1.0).abs() < 1e-14);
        let cas = casimir(m1, m2, &sp).unwrap();
        assert!((cas.expectation(&basis([1, 0], 4)).unwrap().re - 0.75).abs() < 1e-14);
        assert!(spin(SpinComponent::X, m1, m1, &sp).is_err());
        assert!(c_poly(4).is_err());
        assert!(f_poly(0).is_err());
    }
}
