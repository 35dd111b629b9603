use std::f64::consts::FRAC_PI_2;

use super::unitary::CircuitSpec;
use crate::error::{Error, Result};
use crate::fock::ModeLabel;
use crate::spin::SpinComponent;

/// A named measurement circuit together with the spin components it maps onto
/// `L^z` of the same mode pair.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub key: &'static str,
    pub circuit: CircuitSpec,
    pub targets: Vec<(SpinComponent, ModeLabel, ModeLabel)>,
}

fn a(c: u32) -> ModeLabel {
    ModeLabel::a(c)
}

fn b(c: u32) -> ModeLabel {
    ModeLabel::b(c)
}

/// Per-party three-mode transform routing the mean field into copy 1:
/// `BS_{1,2}(1/2)` followed by `BS_{1,3}(2/3)` on both parties.
pub fn mean_field_concentrator() -> CircuitSpec {
    CircuitSpec::identity()
        .bs(a(1), a(2), 0.5)
        .and_then(|c| c.bs(a(1), a(3), 2.0 / 3.0))
        .and_then(|c| c.bs(b(1), b(2), 0.5))
        .and_then(|c| c.bs(b(1), b(3), 2.0 / 3.0))
        .expect("valid constant circuit")
}

/// Balanced beam splitter on `(m1, m2)`, preceded by a quarter-wave phase on
/// `m2` when `phase` is set (maps `L^y` instead of `L^x` onto `L^z`).
fn rotate(spec: CircuitSpec, m1: ModeLabel, m2: ModeLabel, phase: bool) -> CircuitSpec {
    let spec = if phase { spec.ps(m2, FRAC_PI_2).expect("valid phase") } else { spec };
    spec.bs(m1, m2, 0.5).expect("valid beam splitter")
}

fn pair(c: SpinComponent, m1: ModeLabel, m2: ModeLabel) -> (SpinComponent, ModeLabel, ModeLabel) {
    (c, m1, m2)
}

/// Every circuit used by the measurement pipelines.
pub fn named_circuits() -> Vec<CatalogEntry> {
    use SpinComponent::{X, Y, Z};
    let id = CircuitSpec::identity;
    let mut out = vec![CatalogEntry { key: "d124.concentrator", circuit: mean_field_concentrator(), targets: vec![] }];

    // C_j on copies 2', 3' of both parties
    out.push(CatalogEntry {
        key: "d124.C1",
        circuit: rotate(rotate(id(), a(2), a(3), false), b(2), b(3), false),
        targets: vec![pair(X, a(2), a(3)), pair(X, b(2), b(3))],
    });
    out.push(CatalogEntry {
        key: "d124.C2",
        circuit: rotate(rotate(id(), a(2), a(3), true), b(2), b(3), true),
        targets: vec![pair(Y, a(2), a(3)), pair(Y, b(2), b(3))],
    });
    out.push(CatalogEntry {
        key: "d124.C3",
        circuit: id(),
        targets: vec![pair(Z, a(2), a(3)), pair(Z, b(2), b(3))],
    });

    // F_j on three copies
    out.push(CatalogEntry {
        key: "d149.F1",
        circuit: rotate(rotate(id(), a(1), a(2), false), b(2), b(3), false),
        targets: vec![pair(X, a(1), a(2)), pair(X, b(2), b(3))],
    });
    out.push(CatalogEntry {
        key: "d149.F2",
        circuit: rotate(rotate(id(), a(2), a(3), false), b(2), b(3), false),
        targets: vec![pair(X, a(2), a(3)), pair(X, b(2), b(3))],
    });
    out.push(CatalogEntry {
        key: "d149.F3",
        circuit: rotate(id(), a(1), a(2), false),
        targets: vec![pair(X, a(1), a(2))],
    });
    out.push(CatalogEntry {
        key: "d149.F4",
        circuit: rotate(rotate(id(), a(1), a(2), true), b(2), b(3), true),
        targets: vec![pair(Y, a(1), a(2)), pair(Y, b(2), b(3))],
    });
    out.push(CatalogEntry {
        key: "d149.F5",
        circuit: rotate(rotate(id(), a(2), a(3), true), b(2), b(3), true),
        targets: vec![pair(Y, a(2), a(3)), pair(Y, b(2), b(3))],
    });

    // single-copy spin across the bipartition
    out.push(CatalogEntry {
        key: "d1913_agarwal.Lx",
        circuit: rotate(id(), a(1), b(1), false),
        targets: vec![pair(X, a(1), b(1))],
    });
    out.push(CatalogEntry {
        key: "d1913_agarwal.Ly",
        circuit: rotate(id(), a(1), b(1), true),
        targets: vec![pair(Y, a(1), b(1))],
    });
    out.push(CatalogEntry { key: "d1913_agarwal.Lz", circuit: id(), targets: vec![pair(Z, a(1), b(1))] });
    out
}

pub fn named_circuit(key: &str) -> Result<CircuitSpec> {
    named_circuits()
        .into_iter()
        .find(|e| e.key == key)
        .map(|e| e.circuit)
        .ok_or_else(|| Error::UnknownKey(format!("circuit '{key}'")))
}
