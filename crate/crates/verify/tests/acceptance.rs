//! The twelve acceptance criteria of the workspace, one test each. Every test
//! writes a single `PASS`/`FAIL` line to standard error (bypassing the test
//! harness's output capture) and then asserts its verdict.

use std::f64::consts::{E, PI};
use std::io::Write;
use std::time::{Duration, Instant};

use fperp::measure::{builtin_law, levy_distance, Push};
use fperp::mult_power::*;
use fperp::nc_comb::{abel_identity, enumerate_nc, kreweras, mult_power_cumulants};
use fperp::perpetuity::*;
use fperp::subordination::*;
use fperp::tails::*;
use fperp::transforms::{chi, psi_real, s_transform};
use fperp::{Measure, Result};
use fperp_oracle::*;
use num_complex::Complex64;
use statrs::function::gamma::{gamma, ln_gamma};

const TWO_SQRT2_PI: f64 = 2.0 * std::f64::consts::SQRT_2 / PI;
const TWO_PI: f64 = 2.0 / PI;
const SEED: u64 = 7;

#[derive(Default)]
struct Verdict {
    checks: Vec<(String, bool)>,
}

impl Verdict {
    fn check(&mut self, label: impl Into<String>, ok: bool) {
        self.checks.push((label.into(), ok));
    }

    fn within(&mut self, what: &str, got: f64, want: f64, rel: f64) {
        let err = (got - want).abs() / want.abs();
        self.check(
            format!("{what} = {got:.6} vs {want:.6} (rel. error {err:.2e} < {rel:.0e})"),
            err < rel,
        );
    }
}

fn criterion(id: u32, title: &str, limit_s: u64, body: impl FnOnce(&mut Verdict) -> Result<()>) {
    let start = Instant::now();
    let mut v = Verdict::default();
    if let Err(e) = body(&mut v) {
        v.check(format!("error: {e}"), false);
    }
    let elapsed = start.elapsed();
    v.check(
        format!("runtime {:.1} s < {limit_s} s", elapsed.as_secs_f64()),
        elapsed < Duration::from_secs(limit_s),
    );
    let pass = v.checks.iter().all(|c| c.1);
    let details: Vec<String> = v
        .checks
        .iter()
        .map(|(l, ok)| if *ok { l.clone() } else { format!("[FAIL] {l}") })
        .collect();
    let line = format!(
        "acceptance criterion {id:>2} {}: {title} | {}\n",
        if pass { "PASS" } else { "FAIL" },
        details.join("; ")
    );
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(pass, "{line}");
}

fn mp1() -> Measure {
    builtin_law("marchenko_pastur", &[("lambda", 1.0)]).unwrap()
}

fn fbp(a: f64, b: f64) -> Measure {
    builtin_law("free_beta_prime", &[("a", a), ("b", b)]).unwrap()
}

/// `A ~ fβ′_{a,a+b}`, `B = A`; its perpetuity is `fβ′_{a,b}`.
fn fbp_pair(a: f64, b: f64) -> JointLaw {
    JointLaw::graph(fbp(a, a + b), BMap::identity()).unwrap()
}

/// `A ~ (fGIG_{−1})²`, `B = A^{1/2}`; its perpetuity is the inverse MP law.
fn inverse_mp_pair() -> JointLaw {
    let g = builtin_law("free_gig", &[("lambda", -1.0)]).unwrap();
    JointLaw::graph(
        g.pushforward(Push::Square).unwrap(),
        BMap::Power {
            coef: 1.0,
            exponent: 0.5,
        },
    )
    .unwrap()
}

#[test]
fn criterion_01_noncrossing_combinatorics() {
    criterion(1, "NC(p) counts, Kreweras complement, Abel identity", 30, |v| {
        let mut catalan = vec![1u64];
        for n in 0..10 {
            catalan.push((0..=n).map(|i| catalan[i] * catalan[n - i]).sum());
        }
        let counts_ok = (1..=10).all(|p| enumerate_nc(p).map(|l| l.len() as u64 == catalan[p]).unwrap_or(false));
        v.check("|NC(p)| = Catalan(p) for p ≤ 10", counts_ok);
        let mut kr_ok = true;
        for p in 1..=8 {
            for pi in enumerate_nc(p)? {
                kr_ok &= pi.len() + kreweras(&pi).len() == p + 1;
            }
        }
        v.check("|π| + |Kr(π)| = p + 1 for all π ∈ NC(p), p ≤ 8", kr_ok);
        let abel_ok = (2..=20).all(|p| abel_identity(p).map(|a| a.holds()).unwrap_or(false));
        v.check("Abel identity exact in rationals for 2 ≤ p ≤ 20", abel_ok);
        Ok(())
    });
}

#[test]
fn criterion_02_variance_identity() {
    criterion(2, "κ₂(Π_n) = n Var(μ) m₁^{2(n−1)}", 10, |v| {
        // Both laws have m₁ = 1 and Var = 1 in closed form.
        for (name, mu) in [("MP(1)", mp1()), ("fβ′_{2,3}", fbp(2.0, 3.0))] {
            let mut worst = 0.0f64;
            for n in 1..=8 {
                let k2 = mult_power_cumulants(&mu, n, 2)?.kappa[1];
                worst = worst.max((k2 - n as f64).abs());
            }
            v.check(
                format!("{name}: max |κ₂ − n| over n ≤ 8 is {worst:.1e} < 1e-10"),
                worst < 1e-10,
            );
        }
        Ok(())
    });
}

#[test]
fn criterion_03_integer_moment_asymptotics() {
    criterion(3, "n^{1−p} m_p(MP(1)^⊠n) → p^{p−1}/p!", 120, |v| {
        for p in 2..=4usize {
            let target = (p as f64).powi(p as i32 - 1) / gamma(p as f64 + 1.0);
            let scaled =
                |n: u64| -> Result<f64> { Ok((n as f64).powf(1.0 - p as f64) * integer_moment_power(&mp1(), n, p)?) };
            let (s100, s400) = (scaled(100)?, scaled(400)?);
            let (e100, e400) = ((s100 / target - 1.0).abs(), (s400 / target - 1.0).abs());
            v.check(
                format!("p = {p}: {s400:.5} vs {target:.5} (rel. error {e400:.3} < 0.1, {e100:.3} at n = 100)"),
                e400 < 0.1 && e400 < e100,
            );
        }
        Ok(())
    });
}

/// `m_γ(MP(1)^⊠n) = (sin πγ)/(πγ) · B(1−γ, γ(n+1)+1)`.
fn mp1_fractional_exact(n: u64, g: f64) -> f64 {
    let b = ln_gamma(1.0 - g) + ln_gamma(g * (n as f64 + 1.0) + 1.0) - ln_gamma(g * n as f64 + 2.0);
    (PI * g).sin() / (PI * g) * b.exp()
}

#[test]
fn criterion_04_fractional_moments() {
    criterion(4, "fractional moments of μ^⊠n", 60, |v| {
        let mu = fbp(2.0, 3.0);
        let mut worst = 0.0f64;
        for g in [0.25, 0.5, 0.75] {
            let a = fractional_moment_power(&mu, 1, g)?;
            let b = mu.moment(g)?;
            worst = worst.max((a - b).abs() / b);
        }
        v.check(
            format!("fβ′_{{2,3}}, n = 1: max rel. deviation from density quadrature {worst:.1e} < 1e-6"),
            worst < 1e-6,
        );

        let g: f64 = 0.5;
        let var = 1.0f64;
        let predicted = (var * g).powf(g - 1.0) / gamma(1.0 + g);
        let scaled = 1e4f64.sqrt() * fractional_moment_power(&mp1(), 10_000, g)?;
        v.within("n^{1/2} m_{1/2}(MP(1)^⊠n) at n = 1e4", scaled, predicted, 0.1);

        let r = log_window_moment(&mp1(), 100_000)?;
        let exact = 1e5 / 1e5f64.ln() * mp1_fractional_exact(100_000, r.gamma);
        v.check(
            format!("(n/log n) m_{{1/log n}} agrees with the exact Beta integral {exact:.6} to 1e-8"),
            (r.scaled - exact).abs() < 1e-8 * exact,
        );
        v.within("(n/log n) m_{1/log n}(MP(1)^⊠n) at n = 1e5", r.scaled, E, 0.15);
        Ok(())
    });
}

/// Root in `(−1, 0)` of `(z+1)w² + (z(1+a) − (b−1))w + za = 0`, the
/// inverse of the closed-form `χ` of `fβ′_{a,b}`.
fn fbp_psi_closed(a: f64, b: f64, z: f64) -> f64 {
    let qa = z + 1.0;
    let qb = z * (1.0 + a) - (b - 1.0);
    let qc = z * a;
    if qa.abs() < 1e-14 {
        return -qc / qb;
    }
    let d = (qb * qb - 4.0 * qa * qc).sqrt();
    let q = -0.5 * (qb + qb.signum() * d);
    [q / qa, qc / q]
        .into_iter()
        .find(|w| *w > -1.0 && *w < 0.0)
        .expect("one root in (−1, 0)")
}

#[test]
fn criterion_05_transform_fidelity() {
    criterion(5, "ψ, χ, S of fβ′_{2,3} against closed forms", 10, |v| {
        let (a, b) = (2.0, 3.0);
        let mu = fbp(a, b);
        let rel = |x: f64, y: f64| (x - y).abs() / y.abs().max(1.0);
        let (mut e_psi, mut e_chi, mut e_s) = (0.0f64, 0.0f64, 0.0f64);
        for k in 0..50 {
            let z = -(10f64.powf(-3.0 + 6.0 * k as f64 / 49.0));
            e_psi = e_psi.max(rel(psi_real(&mu, z)?, fbp_psi_closed(a, b, z)));
            let w = -(k as f64 + 0.5) / 50.0;
            e_chi = e_chi.max(rel(chi(&mu, w)?, w * (b - 1.0 - w) / ((1.0 + w) * (w + a))));
            e_s = e_s.max(rel(s_transform(&mu, w)?, (b - 1.0 - w) / (w + a)));
        }
        v.check(
            format!("ψ on 50 points of (−1e3, −1e-3): max error {e_psi:.1e} < 1e-9"),
            e_psi < 1e-9,
        );
        v.check(
            format!("χ on 50 points of (−1, 0): max error {e_chi:.1e} < 1e-9"),
            e_chi < 1e-9,
        );
        v.check(
            format!("S on 50 points of (−1, 0): max error {e_s:.1e} < 1e-9"),
            e_s < 1e-9,
        );
        Ok(())
    });
}

fn delta_closed(a: f64, b: f64, z: f64) -> f64 {
    let disc = (z * (b - 1.0) - (1.0 - a)).powi(2) - 4.0 * a * b * z;
    a * (a - 1.0 + 2.0 * b + (b - 1.0) * z + disc.sqrt()) / (2.0 * b * (a + b - 1.0))
}

#[test]
fn criterion_06_subordination() {
    criterion(6, "subordination functions of the fβ′ pair", 60, |v| {
        let (a, b) = (2.0, 3.0);
        let x = fbp(a, b);
        let rho = fbp_pair(a, b);
        let opts = SolveOptions::default();
        let mut worst_delta = 0.0f64;
        let mut worst_defect = 0.0f64;
        for z in [-1.0, -10.0, -100.0] {
            let p = solve_subordination(&x, &rho, Complex64::new(z, 0.0), &opts)?;
            worst_delta = worst_delta.max((p.delta.re - delta_closed(a, b, z)).abs());
            let (d1, d2) = consistency_defects(&x, &rho, &p)?;
            worst_defect = worst_defect.max(d1).max(d2);
        }
        v.check(
            format!("δ(z) at z ∈ {{−1, −10, −100}}: max error {worst_delta:.1e} < 1e-6"),
            worst_delta < 1e-6,
        );
        let y = 1e4;
        let p = solve_subordination(&x, &rho, Complex64::new(0.0, y), &opts)?;
        let (d1, d2) = consistency_defects(&x, &rho, &p)?;
        worst_defect = worst_defect.max(d1).max(d2);
        v.check(
            format!("consistency defect {worst_defect:.1e} < 1e-9 at every solved point"),
            worst_defect < 1e-9,
        );
        let ratio = p.sf / Complex64::new(0.0, y);
        v.within(
            "Re 𝖿(iy)/(iy) at y = 1e4 against 1/τ(A)",
            ratio.re,
            1.0 / rho.tau_a()?,
            0.01,
        );
        Ok(())
    });
}

#[test]
fn criterion_07_perpetuity() {
    criterion(7, "solved perpetuities against closed-form laws", 300, |v| {
        let a = fbp(2.0, 5.0);
        let problem = PerpetuityProblem::new(JointLaw::graph(a.clone(), BMap::identity())?, Regime::Positive)?;
        let sol = solve_perpetuity(
            &problem,
            &PerpetuityConfig {
                levy_tol: 1e-6,
                ..Default::default()
            },
        )?;
        let d = levy_distance(&sol.law, &fbp(2.0, 3.0));
        v.check(
            format!("fβ′ pair: Lévy distance to fβ′_{{2,3}} {d:.1e} < 5e-3"),
            d < 5e-3,
        );
        let grid: Vec<f64> = (1..=10).map(|k| -0.03 * k as f64).collect();
        let r = s_functional_residual(&sol.law, &a, &grid)?;
        v.check(format!("S functional equation residual {r:.1e} < 1e-4"), r < 1e-4);

        let problem = PerpetuityProblem::new(inverse_mp_pair(), Regime::Positive)?;
        let sol = solve_perpetuity(
            &problem,
            &PerpetuityConfig {
                levy_tol: 5e-4,
                ..Default::default()
            },
        )?;
        let d = levy_distance(&sol.law, &builtin_law("inverse_mp", &[])?);
        v.check(
            format!("fGIG pair: Lévy distance to inverse MP {d:.1e} < 1e-2"),
            d < 1e-2,
        );
        Ok(())
    });
}

#[test]
fn criterion_08_critical_tails() {
    criterion(8, "critical positive tails", 60, |v| {
        let f = tauberian_estimate(&fbp(2.0, 1.0), Some(0.5), false)?;
        v.check(
            format!("fβ′_{{2,1}} exponent {:.4} = 1/2 ± 0.01", f.exponent),
            (f.exponent - 0.5).abs() <= 0.01,
        );
        v.within("fβ′_{2,1} tail constant", f.constant, TWO_SQRT2_PI, 0.01);
        let imp = builtin_law("inverse_mp", &[])?;
        let f = tauberian_estimate(&imp, Some(0.5), false)?;
        v.check(
            format!("inverse MP exponent {:.4} = 1/2 ± 0.01", f.exponent),
            (f.exponent - 0.5).abs() <= 0.01,
        );
        v.within("inverse MP tail constant", f.constant, TWO_PI, 0.01);

        for (name, rho, law, want) in [
            ("fβ′ pair", fbp_pair(2.0, 1.0), fbp(2.0, 1.0), TWO_SQRT2_PI),
            ("inverse-MP pair", inverse_mp_pair(), imp.clone(), TWO_PI),
        ] {
            let pred = predict_tail_positive(&rho)?;
            let closed = TWO_SQRT2_PI * (rho.b_moment(1)? / rho.var_a()?).sqrt();
            v.check(
                format!(
                    "{name}: predicted constant {:.12} equals the closed form {want:.12}",
                    pred.constant
                ),
                (pred.constant - want).abs() < 1e-9 && (closed - want).abs() < 1e-9 && pred.exponent == 0.5,
            );
            let problem = PerpetuityProblem::new(rho, Regime::Positive)?;
            let r = verify_critical_tail(&problem, &law)?;
            v.check(
                format!(
                    "{name}: δ-route {:.4} vs ψ-route {:.4} (discrepancy {:.2e} < 3e-2)",
                    r.delta_constant, r.constant, r.route_discrepancy
                ),
                r.route_discrepancy < 0.03,
            );
        }
        Ok(())
    });
}

#[test]
fn criterion_09_symmetric_tails() {
    criterion(
        9,
        "symmetric critical tail against the random-matrix oracle",
        600,
        |v| {
            let rho = fbp_pair(2.0, 1.0).symmetrized()?;
            let pred = predict_tail_symmetric(&rho)?;
            let closed = TWO_PI * (rho.b_moment(2)? / rho.var_a()?).sqrt();
            v.check(
                format!(
                    "prediction: exponent {} and constant {:.6} = (2/π)√(τ(B²)/Var(A))",
                    pred.exponent, pred.constant
                ),
                pred.exponent == 1.0 && (pred.constant - closed).abs() < 1e-12,
            );
            let cfg = MatrixEnsembleConfig::new(1000, 20, SEED, 60);
            let s = perpetuity_spectrum(&rho, &cfg)?;
            let t = empirical_abs_tail(&s.eigenvalues, (4.0, 32.0), 12, pred.exponent)?;
            v.within(
                "measured exponent of P(|X| > t) on [4, 32]",
                t.exponent,
                pred.exponent,
                0.2,
            );
            v.within(
                "measured t·P(|X| > t) on [4, 32]",
                t.constant_at_exponent,
                pred.constant,
                0.2,
            );
            Ok(())
        },
    );
}

#[test]
fn criterion_10_monte_carlo_oracle() {
    criterion(10, "random-matrix oracle against free limits", 600, |v| {
        let rho = fbp_pair(2.0, 3.0);
        let emp = empirical_perpetuity(&rho, &MatrixEnsembleConfig::new(500, 20, SEED, 60))?;
        let d = levy_distance(&emp, &fbp(2.0, 3.0));
        v.check(
            format!("empirical perpetuity: Lévy distance to fβ′_{{2,3}} {d:.1e} < 0.03"),
            d < 0.03,
        );
        let s = mult_power_spectrum(&mp1(), 3, &MatrixEnsembleConfig::new(1000, 20, SEED, 0))?;
        v.within("m₂ of the empirical MP(1)^⊠3", s.moment(2), 4.0, 0.05);
        Ok(())
    });
}

#[test]
fn criterion_11_rescaled_sums() {
    criterion(11, "S-transform limits of rescaled free sums", 30, |v| {
        let (s, _) = sy_limit(&mp1(), 200, -0.5, SyCase::FiniteVariance)?;
        v.within("S_{Y_n}(−0.5) at n = 200", s, 0.5f64.exp(), 0.02);

        let alpha = 1.5;
        let m = stable_test_law(alpha)?;
        let c = m.tail().expect("stable test law has a tail").c;
        let ea = eta_alpha(alpha, c, m.mean()?);
        let mut worst = 0.0f64;
        let (mut xs, mut ys) = (vec![], vec![]);
        for k in 1..=10 {
            let z = -0.09 * k as f64;
            let (s, _) = sy_limit(&m, 200, z, SyCase::Stable { alpha, c })?;
            let shape = ea.abs() * (-z).powf(alpha - 1.0);
            worst = worst.max((s.ln() / shape - 1.0).abs());
            xs.push((-z).ln());
            ys.push(s.ln().ln());
        }
        let (slope, _, _) = linear_fit(&xs, &ys);
        v.check(
            format!(
                "α = 1.5: ln S_{{Y_n}}(z) against |η_α|(−z)^{{α−1}} on 10 points, max rel. error {worst:.3} < 0.05"
            ),
            worst < 0.05,
        );
        v.check(
            format!("α = 1.5: fitted power of (−z) {slope:.4} = α − 1 ± 0.05"),
            (slope - (alpha - 1.0)).abs() < 0.05,
        );
        Ok(())
    });
}

#[test]
fn criterion_12_edge_growth() {
    criterion(12, "largest eigenvalue of MP(1)^⊠n against e·n", 300, |v| {
        let oracle = MatrixEdgeOracle {
            config: MatrixEnsembleConfig::new(1000, 4, SEED, 0),
        };
        let g = edge_growth(&mp1(), 30, Some(&oracle))?;
        v.within("L̂_n/(n m₁ⁿ) at n = 30", g.ratio, E, 0.2);
        Ok(())
    });
}
