use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::ModeLabel;

const UNITARITY_TOL: f64 = 1e-12;

/// Linear map on mode operators: `U† a_i U = Σ_j M_ij a_j`, with `i, j`
/// indexing `modes`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeUnitary {
    modes: Vec<ModeLabel>,
    matrix: Vec<C64>,
}

impl ModeUnitary {
    pub fn new(modes: Vec<ModeLabel>, matrix: Vec<C64>) -> Result<Self> {
        let m = modes.len();
        if matrix.len() != m * m {
            return Err(Error::DimensionMismatch(format!("{}x{} matrix needs {} entries", m, m, m * m)));
        }
        let mut sorted = modes.clone();
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::LabelCollision(w[0].to_string()));
        }
        let u = Self { modes, matrix };
        let err = u.unitarity_error();
        if err > UNITARITY_TOL {
            return Err(Error::InvalidArgument(format!("matrix is not unitary (max |M†M - I| = {err:.3e})")));
        }
        Ok(u)
    }

    pub fn identity(modes: Vec<ModeLabel>) -> Self {
        let m = modes.len();
        let mut matrix = vec![C64::new(0.0, 0.0); m * m];
        for i in 0..m {
            matrix[i * m + i] = C64::new(1.0, 0.0);
        }
        Self { modes, matrix }
    }

    pub fn modes(&self) -> &[ModeLabel] {
        &self.modes
    }

    pub fn dim(&self) -> usize {
        self.modes.len()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.matrix[i * self.dim() + j]
    }

    pub fn matrix(&self) -> &[C64] {
        &self.matrix
    }

    pub fn unitarity_error(&self) -> f64 {
        let m = self.dim();
        let mut worst = 0.0f64;
        for i in 0..m {
            for j in 0..m {
                let s: C64 = (0..m).map(|k| self.get(k, i).conj() * self.get(k, j)).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((s - target).norm());
            }
        }
        worst
    }

    /// Matrix product `self · other` over the same mode order.
    pub fn mul(&self, other: &ModeUnitary) -> Result<ModeUnitary> {
        if self.modes != other.modes {
            return Err(Error::DimensionMismatch("mode unitaries over different modes".into()));
        }
        let m = self.dim();
        let mut out = vec![C64::new(0.0, 0.0); m * m];
        for i in 0..m {
            for j in 0..m {
                out[i * m + j] = (0..m).map(|k| self.get(i, k) * other.get(k, j)).sum();
            }
        }
        Ok(Self { modes: self.modes.clone(), matrix: out })
    }

    pub fn adjoint(&self) -> ModeUnitary {
        let m = self.dim();
        let mut out = vec![C64::new(0.0, 0.0); m * m];
        for i in 0..m {
            for j in 0..m {
                out[i * m + j] = self.get(j, i).conj();
            }
        }
        Self { modes: self.modes.clone(), matrix: out }
    }

    /// Extend to a larger mode list, acting as identity on the new modes.
    pub fn embed(&self, modes: &[ModeLabel]) -> Result<ModeUnitary> {
        let pos: Vec<usize> = self
            .modes
            .iter()
            .map(|m| modes.iter().position(|x| x == m).ok_or_else(|| Error::ModeNotFound(m.to_string())))
            .collect::<Result<_>>()?;
        let mut out = Self::identity(modes.to_vec());
        let n = modes.len();
        for (i, &pi) in pos.iter().enumerate() {
            for (j, &pj) in pos.iter().enumerate() {
                out.matrix[pi * n + pj] = self.get(i, j);
            }
        }
        Ok(out)
    }

    pub fn max_abs_diff(&self, other: &ModeUnitary) -> f64 {
        self.matrix.iter().zip(&other.matrix).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

/// Beam-splitter mode matrix `[[√τ, √(1-τ)], [√(1-τ), -√τ]]`.
pub fn bs_matrix(tau: f64) -> [[C64; 2]; 2] {
    let t = C64::new(tau.sqrt(), 0.0);
    let r = C64::new((1.0 - tau).sqrt(), 0.0);
    [[t, r], [r, -t]]
}

/// Phase-shifter mode factor `e^{-iθ}`.
pub fn ps_factor(theta: f64) -> C64 {
    C64::from_polar(1.0, -theta)
}

fn check_tau(tau: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&tau) {
        return Err(Error::InvalidArgument(format!("transmittance {tau} outside [0, 1]")));
    }
    Ok(())
}

fn check_theta(theta: f64) -> Result<()> {
    if !(0.0..2.0 * PI).contains(&theta) {
        return Err(Error::InvalidArgument(format!("phase {theta} outside [0, 2π)")));
    }
    Ok(())
}

/// Two-mode beam splitter on `(m1, m2)`.
pub fn bs(m1: ModeLabel, m2: ModeLabel, tau: f64) -> Result<ModeUnitary> {
    check_tau(tau)?;
    let b = bs_matrix(tau);
    ModeUnitary::new(vec![m1, m2], vec![b[0][0], b[0][1], b[1][0], b[1][1]])
}

/// Single-mode phase shifter.
pub fn ps(m: ModeLabel, theta: f64) -> Result<ModeUnitary> {
    check_theta(theta)?;
    ModeUnitary::new(vec![m], vec![ps_factor(theta)])
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CircuitElement {
    BeamSplitter { first: ModeLabel, second: ModeLabel, tau: f64 },
    PhaseShifter { mode: ModeLabel, theta: f64 },
}

impl CircuitElement {
    pub fn beam_splitter(first: ModeLabel, second: ModeLabel, tau: f64) -> Result<Self> {
        check_tau(tau)?;
        if first == second {
            return Err(Error::InvalidArgument(format!("beam splitter needs two distinct modes, got {first} twice")));
        }
        Ok(Self::BeamSplitter { first, second, tau })
    }

    pub fn phase_shifter(mode: ModeLabel, theta: f64) -> Result<Self> {
        check_theta(theta)?;
        Ok(Self::PhaseShifter { mode, theta })
    }

    pub fn modes(&self) -> Vec<ModeLabel> {
        match *self {
            Self::BeamSplitter { first, second, .. } => vec![first, second],
            Self::PhaseShifter { mode, .. } => vec![mode],
        }
    }

    pub fn unitary(&self) -> ModeUnitary {
        match *self {
            Self::BeamSplitter { first, second, tau } => bs(first, second, tau).expect("validated element"),
            Self::PhaseShifter { mode, theta } => ps(mode, theta).expect("validated element"),
        }
    }

    /// The inverse element: beam splitters are involutions, phases negate.
    pub fn inverse(&self) -> Self {
        match *self {
            Self::BeamSplitter { .. } => *self,
            Self::PhaseShifter { mode, theta } => {
                let t = if theta == 0.0 { 0.0 } else { 2.0 * PI - theta };
                Self::PhaseShifter { mode, theta: t }
            }
        }
    }
}

impl fmt::Display for CircuitElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::BeamSplitter { first, second, tau } => write!(f, "BS[{first},{second}]({tau})"),
            Self::PhaseShifter { mode, theta } => write!(f, "PS[{mode}]({theta})"),
        }
    }
}

/// Sequence of elements listed in the order they act on the state.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CircuitSpec {
    elements: Vec<CircuitElement>,
}

impl CircuitSpec {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn new(elements: Vec<CircuitElement>) -> Self {
        Self { elements }
    }

    pub fn elements(&self) -> &[CircuitElement] {
        &self.elements
    }

    pub fn is_identity(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn bs(mut self, first: ModeLabel, second: ModeLabel, tau: f64) -> Result<Self> {
        self.elements.push(CircuitElement::beam_splitter(first, second, tau)?);
        Ok(self)
    }

    pub fn ps(mut self, mode: ModeLabel, theta: f64) -> Result<Self> {
        self.elements.push(CircuitElement::phase_shifter(mode, theta)?);
        Ok(self)
    }

    /// `self` followed by `next`.
    pub fn then(mut self, next: &CircuitSpec) -> Self {
        self.elements.extend_from_slice(&next.elements);
        self
    }

    pub fn inverse(&self) -> Self {
        Self { elements: self.elements.iter().rev().map(|e| e.inverse()).collect() }
    }

    /// Modes touched by the circuit, sorted.
    pub fn modes(&self) -> Vec<ModeLabel> {
        let mut m: Vec<_> = self.elements.iter().flat_map(|e| e.modes()).collect();
        m.sort();
        m.dedup();
        m
    }

    pub fn map_modes(&self, f: impl Fn(ModeLabel) -> ModeLabel) -> Self {
        let elements = self
            .elements
            .iter()
            .map(|e| match *e {
                CircuitElement::BeamSplitter { first, second, tau } => {
                    CircuitElement::BeamSplitter { first: f(first), second: f(second), tau }
                }
                CircuitElement::PhaseShifter { mode, theta } => CircuitElement::PhaseShifter { mode: f(mode), theta },
            })
            .collect();
        Self { elements }
    }
}

impl fmt::Display for CircuitSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.elements.is_empty() {
            return write!(f, "I");
        }
        for (i, e) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, " -> ")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

/// Overall mode unitary of a circuit over `modes` (defaults to the circuit's
/// own modes). Later elements multiply from the left.
pub fn compose(spec: &CircuitSpec, modes: Option<&[ModeLabel]>) -> Result<ModeUnitary> {
    let modes = modes.map(|m| m.to_vec()).unwrap_or_else(|| spec.modes());
    let mut acc = ModeUnitary::identity(modes.clone());
    for e in spec.elements() {
        acc = e.unitary().embed(&modes)?.mul(&acc)?;
    }
    Ok(acc)
}
