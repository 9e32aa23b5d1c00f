use std::f64::consts::PI;

use fperp::measure::io::{from_json, to_json};
use fperp::measure::{builtin_law, levy_distance, Push};
use fperp::mult_power::{fractional_moment_power, integer_moment_power};
use fperp::nc_comb::{abel_identity, catalan, enumerate_nc, kreweras, mult_power_cumulants};
use fperp::perpetuity::{affine_step, PerpetuityProblem};
use fperp::subordination::{consistency_defects, solve_subordination, BMap, JointLaw, Regime, SolveOptions};
use fperp::tails::{predict_tail_positive, tauberian_estimate};
use fperp::transforms::{chi, psi_real, s_transform};
use fperp::{Error, Measure, Result};
use fperp_oracle::{
    haar_orthogonal, householder_eigenvalues, mult_power_spectrum, symmetric_eigenvalues, trial_rng,
    MatrixEnsembleConfig,
};
use num_complex::Complex64;

use crate::args::Suite;
use crate::Failure;

struct Check {
    suite: Suite,
    name: &'static str,
    run: fn() -> Result<(bool, String)>,
}

fn fbp(a: f64, b: f64) -> Measure {
    builtin_law("free_beta_prime", &[("a", a), ("b", b)]).expect("valid parameters")
}

fn mp1() -> Measure {
    builtin_law("marchenko_pastur", &[("lambda", 1.0)]).expect("valid parameters")
}

fn below(value: f64, limit: f64) -> (bool, String) {
    (value < limit, format!("{value:.2e} < {limit:.0e}"))
}

fn nc_counts() -> Result<(bool, String)> {
    let ok = (1..=10).all(|p| enumerate_nc(p).is_ok_and(|l| l.len() as u64 == catalan(p)));
    Ok((ok, "|NC(p)| = Catalan(p), p ≤ 10".into()))
}

fn nc_kreweras() -> Result<(bool, String)> {
    let mut ok = true;
    for p in 1..=8 {
        for pi in enumerate_nc(p)? {
            let k = kreweras(&pi);
            ok &= pi.len() + k.len() == p + 1 && kreweras(&k).len() == pi.len();
        }
    }
    Ok((ok, "|π| + |Kr(π)| = p + 1, p ≤ 8".into()))
}

fn nc_abel() -> Result<(bool, String)> {
    let ok = (2..=12).all(|p| abel_identity(p).is_ok_and(|a| a.holds()));
    Ok((ok, "exact in rationals, 2 ≤ p ≤ 12".into()))
}

fn nc_variance() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for n in 1..=8 {
        worst = worst.max((mult_power_cumulants(&mp1(), n, 2)?.kappa[1] - n as f64).abs());
    }
    Ok(below(worst, 1e-10))
}

fn measure_round_trip() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    let g = builtin_law("free_gig", &[("lambda", -1.0)])?;
    for m in [
        fbp(2.0, 3.0),
        g.pushforward(Push::Square)?,
        Measure::empirical(&[0.5, 1.0, 1.0, 3.0]),
    ] {
        let back = from_json(&to_json(&m))?;
        back.validate()?;
        worst = worst.max(levy_distance(&m, &back));
    }
    Ok(below(worst, 1e-8))
}

fn measure_mass() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for m in [fbp(2.0, 3.0), fbp(2.0, 1.0), mp1(), builtin_law("inverse_mp", &[])?] {
        worst = worst.max((m.total_mass() - 1.0).abs());
    }
    Ok(below(worst, 1e-10))
}

fn transforms_closed() -> Result<(bool, String)> {
    let mu = fbp(2.0, 3.0);
    let b = mu
        .builtin()
        .cloned()
        .ok_or_else(|| Error::InvalidParams("not a builtin".into()))?;
    let mut worst: f64 = 0.0;
    for k in 0..20 {
        let z = -(10f64.powf(-3.0 + 0.3 * k as f64));
        let closed = b.psi_closed(z).expect("closed form on the negative axis");
        worst = worst.max((psi_real(&mu, z)? - closed).abs() / closed.abs().max(1.0));
        let w = -(k as f64 + 0.5) / 20.0;
        let s = b.s_transform(w).expect("closed form on (−1, 0)");
        worst = worst.max((s_transform(&mu, w)? - s).abs() / s.abs().max(1.0));
    }
    Ok(below(worst, 1e-9))
}

fn transforms_inverse() -> Result<(bool, String)> {
    let mu = mp1();
    let mut worst: f64 = 0.0;
    for k in 1..20 {
        let w = -(k as f64) / 20.0;
        worst = worst.max((psi_real(&mu, chi(&mu, w)?)? - w).abs());
    }
    Ok(below(worst, 1e-10))
}

fn mult_power_fuss_catalan() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for n in 1..=6u64 {
        let want = (n + 1) as f64;
        worst = worst.max((integer_moment_power(&mp1(), n, 2)? - want).abs() / want);
    }
    Ok(below(worst, 1e-10))
}

fn mult_power_fractional() -> Result<(bool, String)> {
    let mu = fbp(2.0, 3.0);
    let mut worst: f64 = 0.0;
    for g in [0.25, 0.5, 0.75] {
        let d = mu.moment(g)?;
        worst = worst.max((fractional_moment_power(&mu, 1, g)? - d).abs() / d);
    }
    Ok(below(worst, 1e-6))
}

fn fbp_pair(a: f64, b: f64) -> Result<JointLaw> {
    JointLaw::graph(fbp(a, a + b), BMap::identity())
}

fn subordination_closed() -> Result<(bool, String)> {
    let (a, b) = (2.0, 3.0);
    let x = fbp(a, b);
    let rho = fbp_pair(a, b)?;
    let mut worst: f64 = 0.0;
    for z in [-1.0, -10.0, -100.0] {
        let p = solve_subordination(&x, &rho, Complex64::new(z, 0.0), &SolveOptions::default())?;
        let disc = (z * (b - 1.0) - (1.0 - a)).powi(2) - 4.0 * a * b * z;
        let closed = a * (a - 1.0 + 2.0 * b + (b - 1.0) * z + disc.sqrt()) / (2.0 * b * (a + b - 1.0));
        worst = worst.max((p.delta.re - closed).abs());
    }
    Ok(below(worst, 1e-6))
}

fn subordination_consistency() -> Result<(bool, String)> {
    let x = fbp(2.0, 3.0);
    let rho = fbp_pair(2.0, 3.0)?;
    let mut worst: f64 = 0.0;
    for z in [
        Complex64::new(-2.0, 0.0),
        Complex64::new(1.0, 1.0),
        Complex64::new(0.0, 50.0),
    ] {
        let p = solve_subordination(&x, &rho, z, &SolveOptions::default())?;
        let (d1, d2) = consistency_defects(&x, &rho, &p)?;
        worst = worst.max(d1).max(d2);
    }
    Ok(below(worst, 1e-9))
}

fn perpetuity_fixed_point() -> Result<(bool, String)> {
    let x = fbp(2.0, 3.0);
    let next = affine_step(&x, &fbp_pair(2.0, 3.0)?)?;
    Ok(below(levy_distance(&next, &x), 1e-4))
}

fn perpetuity_supercritical() -> Result<(bool, String)> {
    let rho = JointLaw::graph(fbp(2.0, 2.0), BMap::identity())?;
    let ok = matches!(
        PerpetuityProblem::new(rho, Regime::Positive),
        Err(Error::Supercritical(_))
    );
    Ok((ok, "τ(A) = 2 is rejected".into()))
}

fn tails_tauberian() -> Result<(bool, String)> {
    let want = 2.0 * 2f64.sqrt() / PI;
    let f = tauberian_estimate(&fbp(2.0, 1.0), Some(0.5), false)?;
    let err = (f.constant - want).abs() / want;
    Ok((
        err < 0.01 && (f.exponent - 0.5).abs() < 0.01,
        format!("constant {:.4}, rel. error {err:.1e}", f.constant),
    ))
}

fn tails_prediction() -> Result<(bool, String)> {
    let want = 2.0 * 2f64.sqrt() / PI;
    let p = predict_tail_positive(&fbp_pair(2.0, 1.0)?)?;
    Ok(below((p.constant - want).abs(), 1e-12))
}

fn oracle_haar() -> Result<(bool, String)> {
    let q = haar_orthogonal(100, &mut trial_rng(1, 0));
    let qtq = q.transpose() * &q;
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        for j in 0..100 {
            worst = worst.max((qtq[(i, j)] - if i == j { 1.0 } else { 0.0 }).abs());
        }
    }
    Ok(below(worst, 1e-12))
}

fn oracle_eigen() -> Result<(bool, String)> {
    let q = haar_orthogonal(60, &mut trial_rng(2, 0));
    let m = (&q + q.transpose()) * 0.5;
    let a = symmetric_eigenvalues(&m)?;
    let b = householder_eigenvalues(&m)?;
    let worst = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    Ok(below(worst, 1e-10))
}

fn oracle_free_power() -> Result<(bool, String)> {
    let s = mult_power_spectrum(&mp1(), 2, &MatrixEnsembleConfig::new(400, 4, 1, 0))?;
    let err = (s.moment(2) - 3.0).abs() / 3.0;
    Ok((
        err < 0.05,
        format!("m₂ = {:.4} vs 3, rel. error {err:.1e} < 5e-2", s.moment(2)),
    ))
}

const CHECKS: &[Check] = &[
    Check {
        suite: Suite::Nc,
        name: "noncrossing partition counts",
        run: nc_counts,
    },
    Check {
        suite: Suite::Nc,
        name: "Kreweras complement",
        run: nc_kreweras,
    },
    Check {
        suite: Suite::Nc,
        name: "Abel identity",
        run: nc_abel,
    },
    Check {
        suite: Suite::Nc,
        name: "κ₂ of MP(1)^⊠n equals n",
        run: nc_variance,
    },
    Check {
        suite: Suite::Measure,
        name: "JSON round trip (Lévy)",
        run: measure_round_trip,
    },
    Check {
        suite: Suite::Measure,
        name: "unit mass of builtin laws",
        run: measure_mass,
    },
    Check {
        suite: Suite::Transforms,
        name: "ψ and S of fβ′_{2,3} vs closed forms",
        run: transforms_closed,
    },
    Check {
        suite: Suite::Transforms,
        name: "ψ(χ(w)) = w for MP(1)",
        run: transforms_inverse,
    },
    Check {
        suite: Suite::MultPower,
        name: "m₂(MP(1)^⊠n) = n + 1",
        run: mult_power_fuss_catalan,
    },
    Check {
        suite: Suite::MultPower,
        name: "fractional moments at n = 1",
        run: mult_power_fractional,
    },
    Check {
        suite: Suite::Subordination,
        name: "δ of the fβ′ pair vs closed form",
        run: subordination_closed,
    },
    Check {
        suite: Suite::Subordination,
        name: "consistency defects",
        run: subordination_consistency,
    },
    Check {
        suite: Suite::Perpetuity,
        name: "fβ′_{2,3} is a fixed point",
        run: perpetuity_fixed_point,
    },
    Check {
        suite: Suite::Perpetuity,
        name: "supercritical model rejected",
        run: perpetuity_supercritical,
    },
    Check {
        suite: Suite::Tails,
        name: "tail of fβ′_{2,1}",
        run: tails_tauberian,
    },
    Check {
        suite: Suite::Tails,
        name: "predicted constant of the fβ′ pair",
        run: tails_prediction,
    },
    Check {
        suite: Suite::Oracle,
        name: "Haar matrix orthogonality",
        run: oracle_haar,
    },
    Check {
        suite: Suite::Oracle,
        name: "Jacobi vs Householder spectra",
        run: oracle_eigen,
    },
    Check {
        suite: Suite::Oracle,
        name: "m₂ of empirical MP(1)^⊠2",
        run: oracle_free_power,
    },
];

fn suite_name(s: Suite) -> &'static str {
    match s {
        Suite::All => "all",
        Suite::Nc => "nc",
        Suite::Measure => "measure",
        Suite::Transforms => "transforms",
        Suite::MultPower => "mult-power",
        Suite::Subordination => "subordination",
        Suite::Perpetuity => "perpetuity",
        Suite::Tails => "tails",
        Suite::Oracle => "oracle",
    }
}

pub fn run(suite: Suite) -> std::result::Result<(), Failure> {
    let mut failed = 0;
    let mut count = 0;
    println!("{:<14} {:<40} {:<6} detail", "suite", "check", "status");
    for c in CHECKS.iter().filter(|c| suite == Suite::All || c.suite == suite) {
        count += 1;
        let (ok, detail) = match (c.run)() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failed += 1;
        }
        let status = if ok { "PASS" } else { "FAIL" };
        println!("{:<14} {:<40} {:<6} {detail}", suite_name(c.suite), c.name, status);
    }
    println!("{} of {count} checks passed", count - failed);
    if failed > 0 {
        return Err(Failure::Checks(failed));
    }
    Ok(())
}
