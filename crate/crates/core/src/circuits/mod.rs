//! Passive interferometers: mode unitaries, their exact action on Fock
//! states, pure loss, and the named measurement circuits.

mod catalog;
mod lift;
mod unitary;

pub use catalog::{mean_field_concentrator, named_circuit, named_circuits, CatalogEntry};
pub use lift::{apply_circuit, apply_circuit_ensemble, lift, loss, loss_ensemble, loss_kraus, phase_rotate};
pub use unitary::{bs, bs_matrix, compose, ps, ps_factor, CircuitElement, CircuitSpec, ModeUnitary};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{Ensemble, ModeLabel, ModeSpace, PureState};
    use crate::states;
    use crate::C64;

    #[test]
    fn concentrator_matrix() {
        let m = [ModeLabel::a(1), ModeLabel::a(2), ModeLabel::a(3)];
        let spec = CircuitSpec::identity().bs(m[0], m[1], 0.5).unwrap().bs(m[0], m[2], 2.0 / 3.0).unwrap();
        let u = compose(&spec, Some(&m)).unwrap();
        let full = compose(&mean_field_concentrator(), None).unwrap();
        assert_eq!(full.modes().len(), 6);
        let s = 1.0 / 6f64.sqrt();
        let expected = [
            [2f64.sqrt(), 2f64.sqrt(), 2f64.sqrt()],
            [3f64.sqrt(), -(3f64.sqrt()), 0.0],
            [1.0, 1.0, -2.0],
        ];
        for i in 0..3 {
            for j in 0..3 {
                assert!((u.get(i, j) - C64::new(expected[i][j] * s, 0.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn hong_ou_mandel() {
        let (m1, m2) = (ModeLabel::a(1), ModeLabel::a(2));
        let s = PureState::from_fn(vec![m1, m2], vec![2, 2], |k| {
            C64::new(if k == [1, 1] { 1.0 } else { 0.0 }, 0.0)
        })
        .unwrap();
        let out = apply_circuit(&s, &CircuitSpec::identity().bs(m1, m2, 0.5).unwrap()).unwrap();
        let p = out.photon_distribution(&[m1, m2]).unwrap();
        assert!(p.prob(&[1, 1]) < 1e-15);
        assert!((p.prob(&[2, 0]) - 0.5).abs() < 1e-14);
        assert!((p.prob(&[0, 2]) - 0.5).abs() < 1e-14);
    }

    #[test]
    fn coherent_covariance_and_lift_agree() {
        let (m1, m2) = (ModeLabel::a(1), ModeLabel::a(2));
        let (al, be) = (C64::new(0.6, 0.1), C64::new(-0.3, 0.4));
        let spec = CircuitSpec::identity().ps(m2, 0.7).unwrap().bs(m1, m2, 0.3).unwrap();
        let u = compose(&spec, Some(&[m1, m2])).unwrap();
        let input = states::coherent(m1, al, 25).unwrap().tensor(&states::coherent(m2, be, 25).unwrap()).unwrap();
        let out = apply_circuit(&input, &spec).unwrap();
        // U|α> = |α'> with α'_i = Σ_j M_ij α_j
        let a1 = u.get(0, 0) * al + u.get(0, 1) * be;
        let a2 = u.get(1, 0) * al + u.get(1, 1) * be;
        let expect = states::coherent(m1, a1, 25).unwrap().tensor(&states::coherent(m2, a2, 25).unwrap()).unwrap();
        assert!((out.inner(&expect).unwrap().norm() - 1.0).abs() < 1e-9);
        // dense lift on a small space reproduces the kernel
        let sp = ModeSpace::uniform(vec![m1, m2], 6).unwrap();
        let small = states::coherent(m1, C64::new(0.05, 0.0), 6)
            .unwrap()
            .tensor(&states::fock(m2, 1, 6).unwrap())
            .unwrap();
        let by_lift = lift(&u, &sp).unwrap().apply(&small).unwrap();
        let by_kernel = apply_circuit(&small, &spec).unwrap();
        let diff = by_lift.inner(&by_lift).unwrap().re + by_kernel.inner(&by_kernel).unwrap().re
            - 2.0 * by_lift.inner(&by_kernel).unwrap().re;
        // the lift drops components above the cutoff; compare on the kept part
        let kept = by_lift.norm_sqr();
        assert!(kept > 0.99);
        assert!(diff.abs() < 1.0 - kept + 1e-12);
    }

    #[test]
    fn loss_scales_moments() {
        let tau = 0.6;
        let s = states::tmsv(0.5, 30).unwrap();
        let lossy = loss(&s, ModeLabel::a(1), tau).unwrap();
        let n0 = s.expect_word(&"a† a".parse().unwrap()).unwrap().re;
        let n1 = lossy.expect_word(&"a† a".parse().unwrap()).unwrap().re;
        assert!((n1 - tau * n0).abs() < 1e-12);
        let ab0 = s.expect_word(&"a b".parse().unwrap()).unwrap();
        let ab1 = lossy.expect_word(&"a b".parse().unwrap()).unwrap();
        assert!((ab1 - ab0 * tau.sqrt()).norm() < 1e-12);
        let kr = loss_kraus(&Ensemble::pure(s.clone()).unwrap(), ModeLabel::a(1), tau).unwrap();
        let nk = kr.expect_word(&"a† a b† b".parse().unwrap()).unwrap();
        let na = lossy.expect_word(&"a† a b† b".parse().unwrap()).unwrap();
        assert!((nk - na).norm() < 1e-12);
        assert!(loss(&s, ModeLabel::a(1), 1.5).is_err());
    }

    #[test]
    fn inverse_and_unknown_key() {
        let spec = named_circuit("d149.F4").unwrap();
        let m = spec.modes();
        let u = compose(&spec, Some(&m)).unwrap();
        let v = compose(&spec.inverse(), Some(&m)).unwrap();
        let id = u.mul(&v).unwrap();
        assert!(id.max_abs_diff(&ModeUnitary::identity(m)) < 1e-12);
        assert!(named_circuit("nope").is_err());
    }
}
