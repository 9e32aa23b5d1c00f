//! Tail estimation from the moment transform and the critical-case tail
//! predictions.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::Measure;
use crate::perpetuity::{Criticality, PerpetuityProblem};
use crate::subordination::{solve_subordination, JointLaw, Regime, SolveOptions};
use crate::transforms::psi_real;

/// Fit window used for laws with a finite mean excess (`α < 1`).
pub const DEFAULT_WINDOW: (f64, f64) = (1e3, 1e7);
/// Fit window used after mean subtraction (`α ∈ (1,2)`).
pub const MEAN_SUBTRACTED_WINDOW: (f64, f64) = (1e2, 1e5);
/// Smallest accepted coefficient of determination of a log-log fit.
pub const MIN_R2: f64 = 0.999;
const FIT_POINTS: usize = 16;

/// Which tail theorem applies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum TailRegime {
    PositiveFiniteVar,
    PositiveStable { alpha: f64, c: f64 },
    SymmetricFiniteVar,
    SymmetricStable { alpha: f64, c: f64 },
}

impl TailRegime {
    pub fn is_symmetric(self) -> bool {
        matches!(
            self,
            TailRegime::SymmetricFiniteVar | TailRegime::SymmetricStable { .. }
        )
    }
}

/// Power law `C t^{-α}` fitted to a tail-side quantity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailFit {
    pub exponent: f64,
    /// Tail constant: `μ((t,∞)) ~ constant·t^{-exponent}`, or the same for
    /// `|X|` in the symmetric case.
    pub constant: f64,
    pub r2: f64,
    pub window: (f64, f64),
}

/// Predicted exponent and constant of the solution's tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailPrediction {
    pub exponent: f64,
    pub constant: f64,
    pub regime: TailRegime,
}

/// Measured tail of a solved critical perpetuity against the prediction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailReport {
    pub exponent: f64,
    pub constant: f64,
    pub predicted_exponent: f64,
    pub predicted_constant: f64,
    pub regime: TailRegime,
    pub fit_window: (f64, f64),
    pub relative_error: f64,
    /// Tail constant read off the scaling of `δ`.
    pub delta_constant: f64,
    pub delta_exponent: f64,
    /// `|constant − delta_constant| / constant`.
    pub route_discrepancy: f64,
}

/// Factor `sin(πα)/(πα)` turning the moment-transform constant into a tail
/// constant. For `α ∈ (1,2)` the sign is absorbed so the result is positive
/// for a positive mean-subtracted input; in the symmetric case the index is
/// halved.
pub fn tauberian_factor(exponent: f64, symmetric: bool) -> f64 {
    let a = if symmetric { exponent / 2.0 } else { exponent };
    (PI * a).sin().abs() / (PI * a)
}

/// Least-squares power fit of `y(t) ≈ C t^{-β}` on a geometric window,
/// converted to a tail constant. `y` is `−ψ(−1/t)` (positive laws, minus
/// `mean/t` when `mean` is given) or `−ψ(−1/(it))` (symmetric laws). The fit
/// includes the next-order term of the expansion unless a single power fits
/// at least as well; with `exponent_hint` the exponent is searched near the
/// hint and the constant is fitted at the hinted slope.
pub fn tauberian_fit(
    y: impl Fn(f64) -> Result<f64>,
    mean: Option<f64>,
    symmetric: bool,
    exponent_hint: Option<f64>,
    window: (f64, f64),
) -> Result<TailFit> {
    let ts = geomspace(window.0, window.1, FIT_POINTS);
    let mut ys = Vec::with_capacity(ts.len());
    for &t in &ts {
        let v = y(t)?;
        let v = match mean {
            Some(m) => m / t - v,
            None => v,
        };
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::BadFit(f64::NAN));
        }
        ys.push(v);
    }
    fit_power_tail(
        &ts,
        &ys,
        symmetric,
        exponent_hint,
        correction_exponent(symmetric, mean.is_some()),
        window,
    )
}

/// Exponent of the next term of `−ψ` after the power tail: `1/t` for positive
/// laws, `1/t²` after mean subtraction and for symmetric laws.
fn correction_exponent(symmetric: bool, mean_subtracted: bool) -> f64 {
    if symmetric || mean_subtracted {
        2.0
    } else {
        1.0
    }
}

fn fit_power_tail(
    ts: &[f64],
    ys: &[f64],
    symmetric: bool,
    hint: Option<f64>,
    correction: f64,
    window: (f64, f64),
) -> Result<TailFit> {
    let (alpha, c_free, r2) = power_fit(ts, ys);
    if !(r2 >= MIN_R2) {
        return Err(Error::BadFit(r2));
    }
    if alpha >= correction {
        return Ok(TailFit {
            exponent: alpha,
            constant: c_free * tauberian_factor(alpha, symmetric),
            r2,
            window,
        });
    }
    // Fit `C t^{-a} + D t^{-correction}` and pick `a` by minimizing the
    // relative residual, near the hint when there is one.
    let residual = |a: f64| two_term_fit(ts, ys, a, correction).2;
    let top = correction - 1e-3;
    let (lo, hi) = match hint.filter(|&h| h < correction) {
        Some(h) => ((h - 0.25).max(1e-3), (h + 0.25).min(top)),
        None => {
            let grid: Vec<f64> = (0..=40).map(|k| 1e-3 + (top - 1e-3) * k as f64 / 40.0).collect();
            let best = (0..grid.len())
                .min_by(|&i, &j| residual(grid[i]).total_cmp(&residual(grid[j])))
                .unwrap_or(0);
            (grid[best.saturating_sub(1)], grid[(best + 1).min(grid.len() - 1)])
        }
    };
    let exponent = golden_min(residual, lo, hi, 1e-6);
    if hint.is_none() {
        let one_term: f64 = ts
            .iter()
            .zip(ys)
            .map(|(&t, &y)| (c_free * t.powf(-alpha) / y - 1.0).powi(2))
            .sum();
        if one_term <= residual(exponent) {
            return Ok(TailFit {
                exponent: alpha,
                constant: c_free * tauberian_factor(alpha, symmetric),
                r2,
                window,
            });
        }
    }
    let at = hint.filter(|&h| h < correction).unwrap_or(exponent);
    let (c, _, _) = two_term_fit(ts, ys, at, correction);
    Ok(TailFit {
        exponent,
        constant: c * tauberian_factor(at, symmetric),
        r2,
        window,
    })
}

/// Least squares for `y ≈ C t^{-a} + D t^{-k}` in relative error:
/// `(C, D, residual)`.
fn two_term_fit(ts: &[f64], ys: &[f64], a: f64, k: f64) -> (f64, f64, f64) {
    let (mut s11, mut s12, mut s22, mut r1, mut r2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (&t, &y) in ts.iter().zip(ys) {
        let u = t.powf(-a) / y;
        let v = t.powf(-k) / y;
        s11 += u * u;
        s12 += u * v;
        s22 += v * v;
        r1 += u;
        r2 += v;
    }
    let det = s11 * s22 - s12 * s12;
    let c = (r1 * s22 - r2 * s12) / det;
    let d = (s11 * r2 - s12 * r1) / det;
    let res = ts
        .iter()
        .zip(ys)
        .map(|(&t, &y)| ((c * t.powf(-a) + d * t.powf(-k)) / y - 1.0).powi(2))
        .sum();
    (c, d, res)
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > tol {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
    }
    0.5 * (a + b)
}

/// `−ψ_μ(−1/t)`, from the closed form when the law has one.
pub fn minus_psi_at_inverse(mu: &Measure, t: f64) -> Result<f64> {
    let z = -1.0 / t;
    if let Some(v) = mu.builtin().and_then(|b| b.psi_closed(z)) {
        return Ok(-v);
    }
    Ok(-psi_real(mu, z)?)
}

/// `−ψ_μ(−1/(it)) = ∫ x²/(t²+x²) dμ` for a symmetric law.
pub fn minus_psi_imaginary(mu: &Measure, t: f64) -> Result<f64> {
    mu.integrate(|x| x * x / (t * t + x * x))
}

/// Tail exponent and constant of `mu` from its moment transform. A hint in
/// `(1,2)` for a positive law switches on mean subtraction and the matching
/// window.
pub fn tauberian_estimate(mu: &Measure, exponent_hint: Option<f64>, symmetric: bool) -> Result<TailFit> {
    let stable = !symmetric && exponent_hint.is_some_and(|a| a > 1.0 && a < 2.0);
    let window = if stable { MEAN_SUBTRACTED_WINDOW } else { DEFAULT_WINDOW };
    tauberian_estimate_on(mu, exponent_hint, symmetric, window)
}

/// [`tauberian_estimate`] on a given window.
pub fn tauberian_estimate_on(
    mu: &Measure,
    exponent_hint: Option<f64>,
    symmetric: bool,
    window: (f64, f64),
) -> Result<TailFit> {
    let stable = !symmetric && exponent_hint.is_some_and(|a| a > 1.0 && a < 2.0);
    let mean = if stable { Some(mu.mean()?) } else { None };
    if symmetric {
        tauberian_fit(|t| minus_psi_imaginary(mu, t), None, true, exponent_hint, window)
    } else {
        tauberian_fit(|t| minus_psi_at_inverse(mu, t), mean, false, exponent_hint, window)
    }
}

fn critical_gate(rho: &JointLaw) -> Result<()> {
    let tau = rho.tau_a()?;
    if (tau - 1.0).abs() > 1e-9 {
        return Err(Error::NotCritical(tau));
    }
    if rho.a_is_dirac() {
        return Err(Error::InvalidParams("A is a point mass".into()));
    }
    if !rho.is_irreducible() {
        return Err(Error::NotIrreducible);
    }
    Ok(())
}

/// `Some((α, c))` for a stable-class `A`, `None` for finite variance.
fn a_class(rho: &JointLaw) -> Result<Option<(f64, f64)>> {
    match rho.a_tail() {
        None => Ok(None),
        Some(t) if t.alpha > 1.0 && t.alpha < 2.0 => Ok(Some((t.alpha, t.c))),
        Some(_) => Err(Error::AmbiguousRegime),
    }
}

/// Tail of the solution for `τ(A) = 1`, `B ≥ 0`, `B ≠ 0`.
pub fn predict_tail_positive(rho: &JointLaw) -> Result<TailPrediction> {
    critical_gate(rho)?;
    if !rho.b_nonnegative() {
        return Err(Error::InvalidParams("B must be nonnegative".into()));
    }
    let tb = rho.b_moment(1)?;
    if !(tb > 0.0) {
        return Err(Error::InvalidParams("B must be nonzero".into()));
    }
    Ok(match a_class(rho)? {
        None => {
            let var = rho.var_a()?;
            TailPrediction {
                exponent: 0.5,
                constant: 2.0 * 2f64.sqrt() / PI * (tb / var).sqrt(),
                regime: TailRegime::PositiveFiniteVar,
            }
        }
        Some((alpha, c)) => TailPrediction {
            exponent: 1.0 / alpha,
            constant: stable_constant(alpha, -(PI * alpha).sin() * tb / (PI * c)),
            regime: TailRegime::PositiveStable { alpha, c },
        },
    })
}

/// Tail of `|X|` for `τ(A) = 1` and `(A, B) ≐ (A, −B)`.
pub fn predict_tail_symmetric(rho: &JointLaw) -> Result<TailPrediction> {
    critical_gate(rho)?;
    if !rho.is_b_symmetric() {
        return Err(Error::InvalidParams("(A,B) and (A,−B) must have the same law".into()));
    }
    let tb2 = rho.b_moment(2)?;
    if !(tb2 > 0.0) {
        return Err(Error::InvalidParams("B must be nonzero".into()));
    }
    Ok(match a_class(rho)? {
        None => {
            let var = rho.var_a()?;
            TailPrediction {
                exponent: 1.0,
                constant: 2.0 / PI * (tb2 / var).sqrt(),
                regime: TailRegime::SymmetricFiniteVar,
            }
        }
        Some((alpha, c)) => TailPrediction {
            exponent: 2.0 / alpha,
            constant: stable_constant(alpha, -(PI * alpha).sin() * tb2 / (2.0 * PI * c)),
            regime: TailRegime::SymmetricStable { alpha, c },
        },
    })
}

/// `(sin(π/α)/(π/α)) · inner^{1/α}`.
fn stable_constant(alpha: f64, inner: f64) -> f64 {
    let r = PI / alpha;
    r.sin() / r * inner.powf(1.0 / alpha)
}

/// Tail constant from the scaling of `δ`: `δ(−t)/t` (positive) or
/// `|δ(it)|/t` (symmetric) on `window`, fitted as a power and converted like
/// the moment transform.
pub fn delta_route(
    mu_x: &Measure,
    rho: &JointLaw,
    symmetric: bool,
    exponent_hint: Option<f64>,
    window: (f64, f64),
) -> Result<TailFit> {
    let ts = geomspace(window.0, window.1, FIT_POINTS);
    let mut ys = vec![0.0; ts.len()];
    let mut init = None;
    for (k, &t) in ts.iter().enumerate() {
        let z = if symmetric {
            Complex64::new(0.0, t)
        } else {
            Complex64::new(-t, 0.0)
        };
        let opts = SolveOptions {
            init,
            ..SolveOptions::default()
        };
        let p = solve_subordination(mu_x, rho, z, &opts)?;
        init = Some((p.f, p.sf));
        let d = if symmetric { p.delta.im.abs() } else { p.delta.re };
        ys[k] = d / t;
    }
    fit_power_tail(
        &ts,
        &ys,
        symmetric,
        exponent_hint,
        correction_exponent(symmetric, false),
        window,
    )
}

/// Measures the tail of a solved critical perpetuity by the moment-transform
/// route and the `δ` route and compares both with the prediction.
pub fn verify_critical_tail(problem: &PerpetuityProblem, solution: &Measure) -> Result<TailReport> {
    if problem.criticality != Criticality::Critical {
        return Err(Error::NotCritical(problem.tau_a));
    }
    let symmetric = problem.regime == Regime::Symmetric;
    let pred = if symmetric {
        predict_tail_symmetric(&problem.rho)?
    } else {
        predict_tail_positive(&problem.rho)?
    };
    let hint = Some(pred.exponent);
    let psi_side = tauberian_estimate(solution, hint, symmetric)?;
    let delta_side = delta_route(solution, &problem.rho, symmetric, hint, psi_side.window)?;
    Ok(TailReport {
        exponent: psi_side.exponent,
        constant: psi_side.constant,
        predicted_exponent: pred.exponent,
        predicted_constant: pred.constant,
        regime: pred.regime,
        fit_window: psi_side.window,
        relative_error: (psi_side.constant - pred.constant).abs() / pred.constant,
        delta_constant: delta_side.constant,
        delta_exponent: delta_side.exponent,
        route_discrepancy: (psi_side.constant - delta_side.constant).abs() / psi_side.constant,
    })
}

/// Least-squares line through `(x_i, y_i)`: `(slope, intercept, R²)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (slope, intercept, r2)
}

/// Fits `y ≈ C t^{-α}` on positive samples: `(α, C, R²)` from a log-log line.
pub fn power_fit(ts: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let lx: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let (s, i, r2) = linear_fit(&lx, &ly);
    (-s, i.exp(), r2)
}

/// Geometric grid of `n` points from `lo` to `hi`.
pub fn geomspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let r = (hi / lo).ln();
    (0..n).map(|k| lo * (r * k as f64 / (n - 1) as f64).exp()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{builtin_law, Panel, PanelMap, Push, SupportKind, Tail};
    use crate::subordination::BMap;
    use proptest::prelude::*;

    const TWO_SQRT2_PI: f64 = 0.900_316_316_157_106_2;
    const TWO_PI: f64 = std::f64::consts::FRAC_2_PI;

    fn fbp(a: f64, b: f64) -> Measure {
        builtin_law("free_beta_prime", &[("a", a), ("b", b)]).unwrap()
    }

    /// Uniform body on `[0, w]` plus a Pareto-type tail `c t^{-α}` above `t0`.
    fn with_tail(w: f64, t0: f64, c: f64, alpha: f64) -> Measure {
        let body = 1.0 - c * t0.powf(-alpha);
        let p = Panel::cheb_from_density(0.0, w, PanelMap::Plain, 4, |_| body / w);
        Measure::new(vec![], vec![p], Some(Tail { t0, c, alpha }), SupportKind::Nonnegative).unwrap()
    }

    fn imp_pair() -> JointLaw {
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
    fn critical_fbp_from_closed_psi() {
        let f = tauberian_estimate(&fbp(2.0, 1.0), Some(0.5), false).unwrap();
        assert!((f.exponent - 0.5).abs() < 0.01, "{f:?}");
        assert!((f.constant / TWO_SQRT2_PI - 1.0).abs() < 0.01, "{f:?}");
    }

    #[test]
    fn inverse_mp_tail() {
        let m = builtin_law("inverse_mp", &[]).unwrap();
        let f = tauberian_estimate(&m, Some(0.5), false).unwrap();
        assert!((f.exponent - 0.5).abs() < 0.01, "{f:?}");
        assert!((f.constant / TWO_PI - 1.0).abs() < 0.01, "{f:?}");
    }

    #[test]
    fn synthetic_power_is_inverted_exactly() {
        for (alpha, c) in [(0.3, 2.0), (0.5, 1.0), (0.8, 0.1)] {
            let f = tauberian_fit(|t| Ok(c * t.powf(-alpha)), None, false, None, DEFAULT_WINDOW).unwrap();
            assert!((f.exponent - alpha).abs() < 1e-12);
            let want = c * (PI * alpha).sin() / (PI * alpha);
            assert!((f.constant - want).abs() < 1e-12 * want);
        }
    }

    #[test]
    fn euler_reflection_sign() {
        for alpha in [1.25, 1.5, 1.75] {
            let f = tauberian_factor(alpha, false);
            assert!(-(PI * alpha).sin() > 0.0);
            assert_eq!(f, -(PI * alpha).sin() / (PI * alpha));
        }
    }

    #[test]
    fn predictions_for_the_examples() {
        let fb = JointLaw::graph(fbp(2.0, 3.0), BMap::identity()).unwrap();
        let p = predict_tail_positive(&fb).unwrap();
        assert_eq!(p.regime, TailRegime::PositiveFiniteVar);
        assert_eq!(p.exponent, 0.5);
        assert!((p.constant - TWO_SQRT2_PI).abs() < 1e-9, "{p:?}");
        let rho = imp_pair();
        let p = predict_tail_positive(&rho).unwrap();
        assert!((p.constant - TWO_PI).abs() < 1e-8, "{p:?}");
        let half = rho.expect(|a, _| a.sqrt()).unwrap();
        assert!((rho.var_a().unwrap() - 2.0 * half).abs() < 1e-9);
    }

    #[test]
    fn stable_prediction() {
        // Unit-mean A with P(A > t) = t^{-3/2} above t0 = 16.
        let w = 0.25 / (63.0 / 64.0) * 2.0;
        let a = with_tail(w, 16.0, 1.0, 1.5);
        assert!((a.mean().unwrap() - 1.0).abs() < 1e-9);
        let rho = JointLaw::graph(a, BMap::Linear { c0: 1.0, c1: 0.0 }).unwrap();
        let p = predict_tail_positive(&rho).unwrap();
        assert_eq!(p.regime, TailRegime::PositiveStable { alpha: 1.5, c: 1.0 });
        assert!((p.exponent - 2.0 / 3.0).abs() < 1e-15);
        assert!((p.constant - 0.192_769_699_158_086_5).abs() < 1e-12, "{p:?}");
        let s = predict_tail_symmetric(&rho.symmetrized().unwrap()).unwrap();
        assert!((s.exponent - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn gates() {
        let sub = JointLaw::graph(fbp(2.0, 5.0), BMap::identity()).unwrap();
        assert!(matches!(predict_tail_positive(&sub), Err(Error::NotCritical(_))));
        let crit = JointLaw::graph(fbp(2.0, 3.0), BMap::identity()).unwrap();
        assert!(predict_tail_symmetric(&crit).is_err());
        // Unit-mean A with a tail of index 2.5: finite variance and a tail descriptor.
        let (t0, c, alpha) = (2.0, 1.0, 2.5);
        let tail_mass = c * f64::powf(t0, -alpha);
        let tail_mean = c * alpha / (alpha - 1.0) * f64::powf(t0, 1.0 - alpha);
        let w = 2.0 * (1.0 - tail_mean) / (1.0 - tail_mass);
        let a = with_tail(w, t0, c, alpha);
        assert!((a.mean().unwrap() - 1.0).abs() < 1e-9);
        let amb = JointLaw::graph(a, BMap::Linear { c0: 1.0, c1: 0.0 }).unwrap();
        assert_eq!(predict_tail_positive(&amb), Err(Error::AmbiguousRegime));
    }

    #[test]
    fn routes_agree_on_the_critical_fbp_pair() {
        let rho = JointLaw::graph(fbp(2.0, 3.0), BMap::identity()).unwrap();
        let problem = PerpetuityProblem::new(rho, Regime::Positive).unwrap();
        let r = verify_critical_tail(&problem, &fbp(2.0, 1.0)).unwrap();
        assert!(r.relative_error < 0.02, "{r:?}");
        assert!((r.delta_constant / TWO_SQRT2_PI - 1.0).abs() < 0.02, "{r:?}");
        assert!(r.route_discrepancy < 0.03, "{r:?}");
    }

    #[test]
    fn delta_route_on_the_inverse_mp_pair() {
        let m = builtin_law("inverse_mp", &[]).unwrap();
        let problem = PerpetuityProblem::new(imp_pair(), Regime::Positive).unwrap();
        let r = verify_critical_tail(&problem, &m).unwrap();
        assert!(r.relative_error < 0.02, "{r:?}");
        assert!(r.route_discrepancy < 0.03, "{r:?}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn tauberian_round_trip(alpha in prop_oneof![0.2f64..0.9, 1.1f64..1.9], c in 0.1f64..0.9) {
            let m = with_tail(1.0, 1.0, c, alpha);
            let f = tauberian_estimate_on(&m, Some(alpha), false, (1e4, 1e7)).unwrap();
            prop_assert!((f.exponent - alpha).abs() < 0.01 * alpha, "{:?}", f);
            prop_assert!((f.constant / c - 1.0).abs() < 0.03, "{:?}", f);
        }
    }
}
