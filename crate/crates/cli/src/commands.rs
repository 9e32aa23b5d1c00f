use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use fperp::measure::io::{load, to_json};
use fperp::mult_power::{
    fractional_moment_asymptotics, fractional_moment_power, integer_moment_asymptotics, stable_tail_moment_power,
    MomentAsymptotics,
};
use fperp::perpetuity::{moment_report, solve_perpetuity, PerpetuityConfig, PerpetuityProblem};
use fperp::subordination::{joint_from_json, solve_subordination, JointLaw, Regime, SolveOptions};
use fperp::tails::{predict_tail_positive, predict_tail_symmetric, tauberian_estimate, verify_critical_tail};
use fperp::transforms::{cauchy, chi, psi, s_transform};
use fperp::{Error, Measure};
use fperp_oracle::{mult_power_spectrum, perpetuity_spectrum, EmpiricalSpectrum, MatrixEnsembleConfig};
use num_complex::Complex64;
use serde::Serialize;

use crate::args::{
    MultPowerArgs, OracleArgs, PerpetuityArgs, RegimeArg, SubordinateArgs, TailsArgs, TransformArgs, What,
};
use crate::Failure;

type Outcome = Result<(), Failure>;

fn io_err(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

fn load_joint_file(path: &Path) -> Result<JointLaw, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    Ok(joint_from_json(&text)?)
}

/// Reads `re[,im]` rows after a header line.
fn read_points(path: &Path) -> Result<Vec<Complex64>, Failure> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)
        .map_err(|e| io_err(path, e))?;
    let mut out = vec![];
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| io_err(path, e))?;
        let field = |i: usize| -> Result<f64, Failure> {
            match rec.get(i).filter(|s| !s.is_empty()) {
                None if i == 1 => Ok(0.0),
                None => Err(io_err(path, format!("row {} has no real part", line + 1))),
                Some(s) => s
                    .parse()
                    .map_err(|_| io_err(path, format!("row {}: {s:?} is not a number", line + 1))),
            }
        };
        out.push(Complex64::new(field(0)?, field(1)?));
    }
    Ok(out)
}

fn csv_writer(path: &Path) -> Result<csv::Writer<File>, Failure> {
    csv::Writer::from_path(path).map_err(|e| io_err(path, e))
}

fn finish_csv(mut w: csv::Writer<File>, path: &Path) -> Outcome {
    w.flush().map_err(|e| io_err(path, e))
}

fn write_text(path: &Path, text: &str) -> Outcome {
    let f = File::create(path).map_err(|e| io_err(path, e))?;
    let mut w = BufWriter::new(f);
    w.write_all(text.as_bytes())
        .and_then(|_| w.write_all(b"\n"))
        .and_then(|_| w.flush())
        .map_err(|e| io_err(path, e))
}

/// Shortest round-trip decimal, in exponent form outside `[1e-4, 1e15)`.
fn num(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || !a.is_finite() || (1e-4..1e15).contains(&a) {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(String::new, num)
}

fn regime(r: RegimeArg) -> Regime {
    match r {
        RegimeArg::Positive => Regime::Positive,
        RegimeArg::Symmetric => Regime::Symmetric,
    }
}

pub fn transform(a: &TransformArgs) -> Outcome {
    let mu = load(&a.measure)?;
    let points = read_points(&a.points)?;
    let mut w = csv_writer(&a.out)?;
    let head = ["point_re", "point_im", "value_re", "value_im"];
    w.write_record(head).map_err(|e| io_err(&a.out, e))?;
    for z in &points {
        let real_only = |name: &str| -> Result<f64, Failure> {
            if z.im != 0.0 {
                return Err(Failure::Domain(Error::OutOfDomain(format!(
                    "{name} needs real points, got {z}"
                ))));
            }
            Ok(z.re)
        };
        let v = match a.what {
            What::Psi => psi(&mu, *z)?,
            What::Cauchy => cauchy(&mu, *z)?,
            What::Chi => Complex64::new(chi(&mu, real_only("χ")?)?, 0.0),
            What::S => Complex64::new(s_transform(&mu, real_only("S")?)?, 0.0),
        };
        w.write_record([num(z.re), num(z.im), num(v.re), num(v.im)])
            .map_err(|e| io_err(&a.out, e))?;
    }
    finish_csv(w, &a.out)?;
    println!(
        "evaluated {:?} at {} points -> {}",
        a.what,
        points.len(),
        a.out.display()
    );
    Ok(())
}

/// `1, 2, 5, 10, 20, 50, …` below `n`, followed by `n`.
fn trend_ns(n: u64) -> Vec<u64> {
    let mut out = vec![];
    let mut scale = 1u64;
    'outer: loop {
        for m in [1, 2, 5] {
            let k = m * scale;
            if k >= n {
                break 'outer;
            }
            out.push(k);
        }
        scale = scale.saturating_mul(10);
    }
    out.push(n);
    out
}

pub fn mult_power(a: &MultPowerArgs) -> Outcome {
    if a.n == 0 {
        return Err(Error::InvalidParams("--n must be at least 1".into()).into());
    }
    let mu = load(&a.measure)?;
    let ns = trend_ns(a.n);
    let stable = mu.tail().is_some_and(|t| t.alpha > 1.0 && t.alpha < 2.0);
    let frac = if stable {
        stable_tail_moment_power(&mu, &ns, a.gamma)?
    } else {
        fractional_moment_asymptotics(&mu, &ns, a.gamma)?
    };
    let value = fractional_moment_power(&mu, a.n, a.gamma)?;
    println!("m_{}(μ^⊠{}) = {value}", a.gamma, a.n);
    let scaling = if stable { "n^{(1−γ)/(α−1)}" } else { "n^{1−γ}" };
    print_trend(&format!("{scaling}·m_γ"), &frac);
    let int = match a.p {
        Some(p) => {
            let r = integer_moment_asymptotics(&mu, &ns, p)?;
            print_trend(&format!("n^{{1−p}}·m_p/m₁^{{np}} with p = {p}"), &r);
            Some((p, r))
        }
        None => None,
    };
    if let Some(path) = &a.report {
        let mut w = csv_writer(path)?;
        w.write_record(["order", "n", "scaled", "predicted"])
            .map_err(|e| io_err(path, e))?;
        let mut rows = vec![(a.gamma, &frac)];
        if let Some((p, r)) = &int {
            rows.push((*p as f64, r));
        }
        for (order, r) in rows {
            for (n, s) in &r.trend {
                w.write_record([num(order), n.to_string(), num(*s), num(r.predicted)])
                    .map_err(|e| io_err(path, e))?;
            }
        }
        finish_csv(w, path)?;
        println!("trend report -> {}", path.display());
    }
    Ok(())
}

fn print_trend(label: &str, r: &MomentAsymptotics) {
    println!("{label}: predicted limit {}", r.predicted);
    for (n, s) in &r.trend {
        println!(
            "  n = {n:>10}  scaled = {s:.10}  rel. error = {:.3e}",
            (s - r.predicted).abs() / r.predicted.abs()
        );
    }
}

pub fn subordinate(a: &SubordinateArgs, verbose: u8) -> Outcome {
    let x = load(&a.x)?;
    let rho = load_joint_file(&a.joint)?;
    let grid = read_points(&a.z_grid)?;
    let opts = SolveOptions {
        tol: a.tol,
        max_iter: a.max_iter,
        init: None,
    };
    let mut w = csv_writer(&a.out)?;
    let head = ["z_re", "z_im", "f_re", "f_im", "sf_re", "sf_im", "residual", "iters"];
    w.write_record(head).map_err(|e| io_err(&a.out, e))?;
    let mut worst: f64 = 0.0;
    for z in &grid {
        let p = solve_subordination(&x, &rho, *z, &opts)?;
        worst = worst.max(p.residual);
        if verbose > 0 {
            println!(
                "  z = {z}: f = {}, 𝖿 = {}, residual {:.2e}, {} iterations",
                p.f, p.sf, p.residual, p.iterations
            );
        }
        let rec = [z.re, z.im, p.f.re, p.f.im, p.sf.re, p.sf.im, p.residual].map(num);
        let mut rec = rec.to_vec();
        rec.push(p.iterations.to_string());
        w.write_record(&rec).map_err(|e| io_err(&a.out, e))?;
    }
    finish_csv(w, &a.out)?;
    println!(
        "solved {} points, largest residual {worst:.2e} -> {}",
        grid.len(),
        a.out.display()
    );
    Ok(())
}

pub fn perpetuity(a: &PerpetuityArgs, verbose: u8) -> Outcome {
    let rho = load_joint_file(&a.joint)?;
    let problem = PerpetuityProblem::new(rho, regime(a.regime))?;
    let init = a.init.as_deref().map(load).transpose()?;
    let cfg = PerpetuityConfig {
        init,
        levy_tol: a.levy_tol,
        max_outer: a.max_outer,
        ..Default::default()
    };
    let sol = solve_perpetuity(&problem, &cfg)?;
    if verbose > 0 {
        for r in &sol.trace {
            println!("  iteration {:>4}: Lévy step {:.3e}", r.iteration, r.levy_step);
        }
    }
    write_text(&a.out, &to_json(&sol.law))?;
    if let Some(path) = &a.trace {
        let mut w = csv_writer(path)?;
        w.write_record(["iteration", "levy_step", "tail_alpha", "tail_c"])
            .map_err(|e| io_err(path, e))?;
        for r in &sol.trace {
            w.write_record([
                r.iteration.to_string(),
                num(r.levy_step),
                opt(r.tail_alpha),
                opt(r.tail_c),
            ])
            .map_err(|e| io_err(path, e))?;
        }
        finish_csv(w, path)?;
    }
    println!("τ(A) = {} ({:?})", problem.tau_a, problem.criticality);
    let last = sol.trace.last().map_or(f64::NAN, |r| r.levy_step);
    println!(
        "iterations: {}, last Lévy step {last:.3e}, converged: {}",
        sol.trace.len(),
        sol.converged
    );
    let report = moment_report(&problem, &sol.law)?;
    for (p, m) in &report.moments {
        println!("  m_{p}(X) = {m}");
    }
    for (g, m) in &report.fractional {
        println!("  m_{g}(X) = {m}");
    }
    if let Some(e) = report.tail_exponent {
        println!("  tail exponent {e}");
    }
    if let Some(inf) = report.mean_infinite {
        println!("  mean infinite: {inf}");
    }
    println!("solution -> {}", a.out.display());
    if !sol.converged {
        return Err(Error::NoConvergence {
            iterations: sol.trace.len(),
            residual: last,
        }
        .into());
    }
    Ok(())
}

#[derive(Serialize)]
struct TailsOutput {
    measure: String,
    regime: RegimeArg,
    exponent: f64,
    constant: f64,
    r2: f64,
    window: (f64, f64),
    #[serde(skip_serializing_if = "Option::is_none")]
    prediction: Option<fperp::tails::TailPrediction>,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<fperp::tails::TailReport>,
}

pub fn tails(a: &TailsArgs) -> Outcome {
    let mu = load(&a.measure)?;
    let symmetric = a.regime == RegimeArg::Symmetric;
    let rho = a.predict_from.as_deref().map(load_joint_file).transpose()?;
    let prediction = match &rho {
        Some(r) if symmetric => Some(predict_tail_symmetric(r)?),
        Some(r) => Some(predict_tail_positive(r)?),
        None => None,
    };
    let hint = a.exponent_hint.or(prediction.map(|p| p.exponent));
    let fit = tauberian_estimate(&mu, hint, symmetric)?;
    let report = match rho {
        Some(r) => Some(verify_critical_tail(
            &PerpetuityProblem::new(r, regime(a.regime))?,
            &mu,
        )?),
        None => None,
    };
    let side = if symmetric { "P(|X| > t)" } else { "P(X > t)" };
    println!(
        "{side} ≈ {:.6}·t^(−{:.6}) on [{:e}, {:e}] (R² = {:.6})",
        fit.constant, fit.exponent, fit.window.0, fit.window.1, fit.r2
    );
    if let Some(p) = &prediction {
        println!(
            "predicted: {:.6}·t^(−{}), relative error of the constant {:.3e}",
            p.constant,
            p.exponent,
            (fit.constant - p.constant).abs() / p.constant
        );
    }
    if let Some(r) = &report {
        println!(
            "δ-route constant {:.6}, discrepancy with the ψ-route {:.3e}",
            r.delta_constant, r.route_discrepancy
        );
    }
    let out = TailsOutput {
        measure: a.measure.clone(),
        regime: a.regime,
        exponent: fit.exponent,
        constant: fit.constant,
        r2: fit.r2,
        window: fit.window,
        prediction,
        report,
    };
    write_text(
        &a.out,
        &serde_json::to_string_pretty(&out).expect("tail report serializes"),
    )?;
    println!("tail report -> {}", a.out.display());
    Ok(())
}

pub fn oracle(a: &OracleArgs) -> Outcome {
    let (spectrum, what): (EmpiricalSpectrum, String) = match (&a.joint, &a.measure, a.power) {
        (Some(j), _, _) => {
            let rho = load_joint_file(j)?;
            let cfg = MatrixEnsembleConfig::new(a.n, a.trials, a.seed, a.terms);
            (perpetuity_spectrum(&rho, &cfg)?, "perpetuity series".into())
        }
        (None, Some(m), Some(k)) => {
            let mu: Measure = load(m)?;
            let cfg = MatrixEnsembleConfig::new(a.n, a.trials, a.seed, 0);
            (mult_power_spectrum(&mu, k, &cfg)?, format!("free power of order {k}"))
        }
        _ => return Err(Error::InvalidParams("give --joint, or --measure with --power".into()).into()),
    };
    let m = spectrum.measure();
    write_text(&a.out, &to_json(&m))?;
    println!(
        "{what}: {} eigenvalues from {} trials of N = {}",
        spectrum.eigenvalues.len(),
        a.trials,
        a.n
    );
    println!("  mean {}, second moment {}", spectrum.moment(1), spectrum.moment(2));
    println!("  mean largest eigenvalue {}", spectrum.mean_max());
    if spectrum.truncated {
        println!(
            "  series truncated at {} terms (neglected geometric factor {:.3e})",
            a.terms, spectrum.neglected_factor
        );
    }
    println!("empirical law -> {}", a.out.display());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trend_sequence() {
        assert_eq!(trend_ns(1), vec![1]);
        assert_eq!(trend_ns(200), vec![1, 2, 5, 10, 20, 50, 100, 200]);
        assert_eq!(trend_ns(30), vec![1, 2, 5, 10, 20, 30]);
    }

    #[test]
    fn numbers_round_trip() {
        for v in [0.0, 1.0, -2.5, 1.2721305490496587e-16, 3e20, 0.1 + 0.2] {
            assert_eq!(num(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(num(1.25e-16), "1.25e-16");
        assert_eq!(num(0.5), "0.5");
    }
}
