use fperp::builtin_law;
use fperp::measure::levy_distance;
use fperp::subordination::{BMap, JointLaw};
use fperp_oracle::*;

fn mp1() -> fperp::Measure {
    builtin_law("marchenko_pastur", &[("lambda", 1.0)]).unwrap()
}

fn binom(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

#[test]
fn square_of_mp1_has_fuss_catalan_moments() {
    let s = mult_power_spectrum(&mp1(), 2, &MatrixEnsembleConfig::new(600, 4, 21, 0)).unwrap();
    for p in 1..=4u64 {
        let want = binom(3 * p, p) / (2 * p + 1) as f64;
        let got = s.moment(p as i32);
        assert!((got - want).abs() < 0.05 * want, "p = {p}: {got} vs {want}");
    }
}

#[test]
fn subcritical_series_approaches_its_fixed_point() {
    let a = builtin_law("free_beta_prime", &[("a", 2.0), ("b", 5.0)]).unwrap();
    let rho = JointLaw::graph(a, BMap::identity()).unwrap();
    let s = perpetuity_spectrum(&rho, &MatrixEnsembleConfig::new(200, 3, 5, 30)).unwrap();
    assert!(!s.truncated);
    assert!(s.neglected_factor < 1e-8);
    let target = builtin_law("free_beta_prime", &[("a", 2.0), ("b", 3.0)]).unwrap();
    assert!(levy_distance(&s.measure(), &target) < 0.03);
}

#[test]
fn critical_series_is_flagged_as_truncated() {
    let a = builtin_law("free_beta_prime", &[("a", 2.0), ("b", 3.0)]).unwrap();
    let rho = JointLaw::graph(a, BMap::identity()).unwrap().symmetrized().unwrap();
    let s = perpetuity_spectrum(&rho, &MatrixEnsembleConfig::new(40, 2, 5, 10)).unwrap();
    assert!(s.truncated);
    assert_eq!(s.eigenvalues.len(), 80);
}

#[test]
fn eigensolvers_preserve_trace_invariants_on_oracle_matrices() {
    let mut rng = trial_rng(2, 0);
    let d = nalgebra::DMatrix::from_diagonal(&sample_spectral_diag(&mp1(), 120));
    let x = haar_conjugate(&d, &mut rng).unwrap();
    let tr = x.trace();
    let fro = x.norm_squared();
    for ev in [symmetric_eigenvalues(&x).unwrap(), householder_eigenvalues(&x).unwrap()] {
        assert!((ev.iter().sum::<f64>() - tr).abs() < 1e-9);
        assert!((ev.iter().map(|v| v * v).sum::<f64>() - fro).abs() < 1e-9);
    }
}

#[test]
fn supercritical_series_is_rejected() {
    let a = builtin_law("free_beta_prime", &[("a", 4.0), ("b", 3.0)]).unwrap();
    let rho = JointLaw::graph(a, BMap::identity()).unwrap();
    assert!(perpetuity_spectrum(&rho, &MatrixEnsembleConfig::new(10, 1, 0, 3)).is_err());
}
