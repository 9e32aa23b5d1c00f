//! Moments, limit laws and limit theorems attached to multiplicative
//! convolution powers `μ^⊠n`.

use std::f64::consts::{E, PI};

use serde::Serialize;
use statrs::function::gamma::gamma;

use crate::cheb::Cheb;
use crate::error::{Error, Result};
use crate::measure::{Measure, Panel, PanelMap, SupportKind, Tail};
use crate::nc_comb::{cumulants_to_moments, mult_power_cumulants};
use crate::quad::{adaptive_with_breaks, check, Tol};
use crate::transforms::{psi_real, SOp, STransform};

/// Scaled moment sequence of `μ^⊠n` and its predicted limit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentAsymptotics {
    /// `Var(μ)/m₁(μ)²`, infinite when the variance is.
    pub eta: f64,
    /// `cπα/(sin(πα) m₁^α)` in the stable case.
    pub eta_alpha: Option<f64>,
    pub alpha: Option<f64>,
    pub c: Option<f64>,
    pub predicted: f64,
    /// `(n, scaled value)`.
    pub trend: Vec<(u64, f64)>,
}

fn require_nonnegative(mu: &Measure) -> Result<f64> {
    let (lo, _) = mu.support();
    if lo < 0.0 {
        return Err(Error::InvalidParams("law must live on [0, ∞)".into()));
    }
    let delta = mu.atom_mass(0.0);
    if delta >= 1.0 - 1e-14 {
        return Err(Error::InvalidParams("law is the point mass at 0".into()));
    }
    Ok(delta)
}

/// `m_γ(μ^⊠n) = (sin πγ)/(πγ) ∫₀^{1−δ} ((1−t)/t · S_μ(−t)^{−n})^γ dt`.
pub fn fractional_moment_power(mu: &Measure, n: u64, gamma_: f64) -> Result<f64> {
    if !(gamma_ > 0.0 && gamma_ < 1.0) {
        return Err(Error::InvalidParams(format!("γ = {gamma_} must lie in (0,1)")));
    }
    if n == 0 {
        return Err(Error::InvalidParams("n must be at least 1".into()));
    }
    let delta = require_nonnegative(mu)?;
    if mu.tail().is_some_and(|t| gamma_ >= t.alpha) {
        return Ok(f64::INFINITY);
    }
    let s = STransform::of(mu);
    let len = 1.0 - delta;
    // t = L u^p with p = 1/(1−γ) absorbs the t^{−γ} endpoint singularity.
    let p = 1.0 / (1.0 - gamma_);
    let pre = len.powf(1.0 - gamma_) * p;
    let nf = n as f64;
    let mut failure = None;
    let f = |u: f64| {
        let t = len * u.powf(p);
        if !(t > 0.0 && t < len) {
            return 0.0;
        }
        // Below 1e-12 the S-transform is its value at 0 to working precision.
        match s.ln_eval(-t.max(1e-12)) {
            Ok(ls) => pre * (gamma_ * ((1.0 - t).ln() - nf * ls)).exp(),
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        }
    };
    let breaks: Vec<f64> = (1..=12).map(|k| 10f64.powf(-(k as f64) / p)).collect();
    let tol = Tol::new(1e-10, 0.0);
    let est = adaptive_with_breaks(f, 0.0, 1.0, &breaks, tol);
    if let Some(e) = failure {
        return Err(e);
    }
    let v = check(est, Tol::new(1e-8, 0.0))?;
    Ok((PI * gamma_).sin() / (PI * gamma_) * v)
}

/// `(n^{1−γ} m_γ(μ^⊠n), (Var·γ)^{γ−1}/Γ(1+γ))` for a unit-mean law.
pub fn fractional_moment_asymptotics(mu: &Measure, ns: &[u64], gamma_: f64) -> Result<MomentAsymptotics> {
    let m1 = mu.mean()?;
    if (m1 - 1.0).abs() > 1e-8 {
        return Err(Error::InvalidParams(format!("law must have unit mean, got {m1}")));
    }
    let var = mu.variance()?;
    let mut trend = vec![];
    for &n in ns {
        trend.push((
            n,
            (n as f64).powf(1.0 - gamma_) * fractional_moment_power(mu, n, gamma_)?,
        ));
    }
    Ok(MomentAsymptotics {
        eta: var,
        eta_alpha: None,
        alpha: None,
        c: None,
        predicted: (var * gamma_).powf(gamma_ - 1.0) / gamma(1.0 + gamma_),
        trend,
    })
}

/// `m_{γ_n}(μ^⊠n)` at `γ_n = 1/log n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogWindowMoment {
    pub gamma: f64,
    pub value: f64,
    /// `(n/log n)·value`.
    pub scaled: f64,
    /// `e/Var(μ)`.
    pub limit: f64,
}

pub fn log_window_moment(mu: &Measure, n: u64) -> Result<LogWindowMoment> {
    if n < 3 {
        return Err(Error::InvalidParams("n must be at least 3".into()));
    }
    let var = mu.variance()?;
    if !var.is_finite() {
        return Err(Error::DivergentIntegral("second moment".into()));
    }
    let ln = (n as f64).ln();
    let gamma_ = 1.0 / ln;
    let value = fractional_moment_power(mu, n, gamma_)?;
    Ok(LogWindowMoment {
        gamma: gamma_,
        value,
        scaled: n as f64 / ln * value,
        limit: E / var,
    })
}

/// Limit of `n^{(1−γ)/(α−1)} m_γ(μ^⊠n)` for a unit-mean law with
/// `μ((t,∞)) ~ c t^{−α}`, `α ∈ (1,2)`:
/// `(sin πγ)/(πγ) Γ(k)/(α−1) (−sin(πα)/(παcγ))^k` with `k = (1−γ)/(α−1)`.
pub fn stable_moment_limit(alpha: f64, c: f64, gamma_: f64) -> f64 {
    let k = (1.0 - gamma_) / (alpha - 1.0);
    (PI * gamma_).sin() / (PI * gamma_) * gamma(k) / (alpha - 1.0)
        * (-(PI * alpha).sin() / (PI * alpha * c * gamma_)).powf(k)
}

/// Scaled fractional moments of `μ^⊠n` for a law in the stable class.
pub fn stable_tail_moment_power(mu: &Measure, ns: &[u64], gamma_: f64) -> Result<MomentAsymptotics> {
    let t = stable_tail(mu)?;
    let m1 = mu.mean()?;
    if (m1 - 1.0).abs() > 1e-8 {
        return Err(Error::InvalidParams(format!("law must have unit mean, got {m1}")));
    }
    let k = (1.0 - gamma_) / (t.alpha - 1.0);
    let mut trend = vec![];
    for &n in ns {
        trend.push((n, (n as f64).powf(k) * fractional_moment_power(mu, n, gamma_)?));
    }
    Ok(MomentAsymptotics {
        eta: f64::INFINITY,
        eta_alpha: Some(eta_alpha(t.alpha, t.c, m1)),
        alpha: Some(t.alpha),
        c: Some(t.c),
        predicted: stable_moment_limit(t.alpha, t.c, gamma_),
        trend,
    })
}

fn stable_tail(mu: &Measure) -> Result<Tail> {
    match mu.tail() {
        Some(t) if t.alpha > 1.0 && t.alpha < 2.0 && mu.kind() == SupportKind::Nonnegative => Ok(t),
        _ => Err(Error::WrongTailClass(
            "need a right tail c t^{-α} with α in (1,2)".into(),
        )),
    }
}

/// `η_α = cπα/(sin(πα) m₁^α)`.
pub fn eta_alpha(alpha: f64, c: f64, m1: f64) -> f64 {
    c * PI * alpha / ((PI * alpha).sin() * m1.powf(alpha))
}

/// Unit-mean law with density proportional to `sin²(πx)` on `[0,1]` and
/// `c α t^{−α−1}` above 1, where `c` is fixed by the unit mean.
pub fn stable_test_law(alpha: f64) -> Result<Measure> {
    if !(alpha > 1.0 && alpha < 2.0) {
        return Err(Error::InvalidParams(format!("α = {alpha} must lie in (1,2)")));
    }
    let c = 0.5 / (alpha / (alpha - 1.0) - 0.5);
    let body = 1.0 - c;
    let p = Panel::cheb_from_density(0.0, 1.0, PanelMap::Plain, 40, |x| 2.0 * body * (PI * x).sin().powi(2));
    Measure::new(
        vec![],
        vec![p],
        Some(Tail { t0: 1.0, c, alpha }),
        SupportKind::Nonnegative,
    )
}

/// Exact `m_p(μ^⊠n)` through free cumulants.
pub fn integer_moment_power(mu: &Measure, n: u64, p: usize) -> Result<f64> {
    let k = mult_power_cumulants(mu, n as usize, p)?;
    Ok(*cumulants_to_moments(&k).last().expect("p ≥ 1"))
}

/// `n^{1−p} m_p(μ^⊠n)/m₁^{np}` over `ns` and the limit `(ηp)^{p−1}/p!`.
pub fn integer_moment_asymptotics(mu: &Measure, ns: &[u64], p: usize) -> Result<MomentAsymptotics> {
    let m1 = mu.mean()?;
    let eta = mu.variance()? / (m1 * m1);
    let mut trend = vec![];
    for &n in ns {
        let m = integer_moment_power(mu, n, p)?;
        let nf = n as f64;
        trend.push((n, nf.powf(1.0 - p as f64) * m / m1.powf(nf * p as f64)));
    }
    let fact: f64 = (1..=p).map(|k| k as f64).product();
    Ok(MomentAsymptotics {
        eta,
        eta_alpha: None,
        alpha: None,
        c: None,
        predicted: (eta * p as f64).powf(p as f64 - 1.0) / fact,
        trend,
    })
}

/// Quantile `1/S_μ(t−1)` of the limit law of `(Π_n)^{1/n}`, for `t ∈ (δ,1)`.
pub fn lln_quantile(mu: &Measure, t: f64) -> Result<f64> {
    let delta = require_nonnegative(mu)?;
    if !(t > delta && t < 1.0) {
        return Err(Error::OutOfDomain(format!("t = {t} outside ({delta}, 1)")));
    }
    Ok(1.0 / STransform::of(mu).eval(t - 1.0)?)
}

/// Law `ν` of the limit of `(Π_n)^{1/n}`: an atom `δ = μ({0})` at 0 and the
/// quantile function `t ↦ 1/S_μ(t−1)` on `(δ,1)`.
pub fn lln_limit(mu: &Measure) -> Result<Measure> {
    let delta = require_nonnegative(mu)?;
    if mu.panels().is_empty() && mu.tail().is_none() && mu.atoms().len() == 1 {
        return Ok(mu.clone());
    }
    let s = STransform::of(mu);
    let q = |t: f64| s.eval(t - 1.0).map(|v| 1.0 / v);
    let len = 1.0 - delta;
    let cuts = [0.0, 1e-8, 1e-4, 1e-2, 0.2, 0.5, 0.8, 0.99, 1.0 - 1e-4, 1.0 - 1e-8, 1.0];
    let mut panels = vec![];
    for w in cuts.windows(2) {
        let (ta, tb) = (delta + len * w[0], delta + len * w[1]);
        let mut fit = None;
        for n in [24, 48, 96] {
            let vals = crate::cheb::points(ta, tb, n)
                .into_iter()
                .map(&q)
                .collect::<Result<Vec<f64>>>()?;
            let c = Cheb::from_values(ta, tb, &vals);
            let done = c.tail_ratio() < 1e-11;
            fit = Some(c);
            if done {
                break;
            }
        }
        let c = fit.expect("at least one fit");
        let (xa, xb) = (c.eval(ta), c.eval(tb));
        if !(xb > xa) {
            return Err(Error::InvalidMeasure("quantile map is not increasing".into()));
        }
        let inv = move |x: f64| {
            let (mut l, mut h) = (ta, tb);
            for _ in 0..100 {
                let m = 0.5 * (l + h);
                if c.eval(m) < x {
                    l = m;
                } else {
                    h = m;
                }
            }
            let t = 0.5 * (l + h);
            let hh = 1e-6 * (tb - ta);
            let (t0, t1) = ((t - hh).max(ta), (t + hh).min(tb));
            (t1 - t0) / (c.eval(t1) - c.eval(t0))
        };
        panels.push(Panel::func(xa, xb, PanelMap::Plain, inv).to_cheb(1e-10));
    }
    let atoms = if delta > 0.0 { vec![(0.0, delta)] } else { vec![] };
    let m = Measure::new_unchecked(atoms, panels, None, SupportKind::Nonnegative);
    let total = m.total_mass();
    if (total - 1.0).abs() > 1e-6 {
        return Err(Error::MassDefect(total));
    }
    Ok(m)
}

/// `κ(y) = 1 + ψ_μ(−y)`.
fn kappa_tilt(mu: &Measure, y: f64) -> Result<f64> {
    let z = -y;
    let psi = match mu.builtin().and_then(|b| b.psi_closed(z)) {
        Some(v) => v,
        None => psi_real(mu, z)?,
    };
    Ok(1.0 + psi)
}

/// Mean `(1−κ(y))/(y κ(y))` of the tilted law `μ_y`.
pub fn tilted_mean(mu: &Measure, y: f64) -> Result<f64> {
    if !(y > 0.0) {
        return Err(Error::InvalidParams(format!("y = {y} must be positive")));
    }
    require_nonnegative(mu)?;
    let k = kappa_tilt(mu, y)?;
    Ok((1.0 - k) / (y * k))
}

/// Source of the mean largest eigenvalue of a random-matrix model of `μ^⊠n`.
pub trait EdgeOracle {
    fn mean_max_eigenvalue(&self, mu: &Measure, n: usize) -> Result<f64>;
}

/// Right edge of `supp μ^⊠n` against its growth rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EdgeGrowth {
    pub n: usize,
    pub edge: f64,
    /// `L̂_n / (n m₁ⁿ)`.
    pub ratio: f64,
    /// `e Var(μ)/m₁²`.
    pub limit: f64,
}

pub fn edge_growth(mu: &Measure, n: usize, oracle: Option<&dyn EdgeOracle>) -> Result<EdgeGrowth> {
    let (_, hi) = mu.support();
    if !hi.is_finite() || mu.tail().is_some() {
        return Err(Error::InvalidParams("law must have compact support".into()));
    }
    let m1 = mu.mean()?;
    let var = mu.variance()?;
    if !(var > 0.0) {
        return Err(Error::InvalidParams("law is a point mass".into()));
    }
    let oracle = oracle.ok_or_else(|| Error::OracleUnavailable("no random-matrix oracle supplied".into()))?;
    let edge = oracle.mean_max_eigenvalue(mu, n)?;
    Ok(EdgeGrowth {
        n,
        edge,
        ratio: edge / (n as f64 * m1.powi(n as i32)),
        limit: E * var / (m1 * m1),
    })
}

/// Which limit theorem to compare against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SyCase {
    FiniteVariance,
    Stable { alpha: f64, c: f64 },
}

/// Limit S-transform in the stable case, `exp(|η_α| (−z)^{α−1})`. Since
/// `η_α < 0` for `α ∈ (1,2)`, this is `exp(−η_α (−z)^{α−1})`, which exceeds 1
/// on `(−1,0)` as the S-transform of a unit-mean law must.
pub fn stable_sy_limit(alpha: f64, c: f64, m1: f64, z: f64) -> f64 {
    (-eta_alpha(alpha, c, m1) * (-z).powf(alpha - 1.0)).exp()
}

/// `(S_{Y_n}(z), S_Y(z))` where `Y_n` is the rescaled free sum of free copies
/// of `Π_n ~ μ^⊠n`.
pub fn sy_limit(mu: &Measure, n: u64, z: f64, case: SyCase) -> Result<(f64, f64)> {
    if !(z > -1.0 && z < 0.0) {
        return Err(Error::OutOfDomain(format!("z = {z}")));
    }
    let m1 = mu.mean()?;
    let nf = n as f64;
    let s = STransform::of(mu).apply(SOp::Power(n))?;
    match case {
        SyCase::FiniteVariance => {
            let var = mu.variance()?;
            let sy = s
                .apply(SOp::AdditivePower(n))?
                .apply(SOp::Dilation(1.0 / (nf * m1.powf(nf))))?;
            Ok((sy.eval(z)?, (-var / (m1 * m1) * z).exp()))
        }
        SyCase::Stable { alpha, c } => {
            let beta = 1.0 / (alpha - 1.0);
            let count = nf.powf(beta).floor() as u64;
            let sy = s
                .apply(SOp::AdditivePower(count))?
                .apply(SOp::Dilation(1.0 / (nf.powf(beta) * m1.powf(nf))))?;
            Ok((sy.eval(z)?, stable_sy_limit(alpha, c, m1, z)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::builtin_law;
    use proptest::prelude::*;
    use statrs::function::beta::ln_beta;

    fn mp1() -> Measure {
        builtin_law("marchenko_pastur", &[("lambda", 1.0)]).unwrap()
    }

    fn fbp(a: f64, b: f64) -> Measure {
        builtin_law("free_beta_prime", &[("a", a), ("b", b)]).unwrap()
    }

    /// `m_γ(MP(1)^⊠n)` from `S = 1/(1+z)`: a Beta integral.
    fn mp1_fractional(n: u64, g: f64) -> f64 {
        (PI * g).sin() / (PI * g) * ln_beta(1.0 - g, g * (n as f64 + 1.0) + 1.0).exp()
    }

    #[test]
    fn point_mass_powers() {
        let d = builtin_law("point", &[("c", 1.7)]).unwrap();
        for (n, g) in [(1, 0.3), (5, 0.5), (20, 0.9)] {
            let v = fractional_moment_power(&d, n, g).unwrap();
            let want = 1.7f64.powf(g * n as f64);
            assert!((v - want).abs() < 1e-8 * want, "{v} {want}");
        }
    }

    #[test]
    fn mp1_matches_beta_integral() {
        for (n, g) in [
            (1, 0.25),
            (1, 0.75),
            (10, 0.5),
            (1000, 0.5),
            (100_000, 1.0 / 100_000f64.ln()),
        ] {
            let v = fractional_moment_power(&mp1(), n, g).unwrap();
            let want = mp1_fractional(n, g);
            assert!((v - want).abs() < 1e-8 * want, "{n} {g} {v} {want}");
        }
    }

    #[test]
    fn n1_matches_density_quadrature() {
        let laws = [
            fbp(2.0, 3.0),
            mp1(),
            builtin_law("marchenko_pastur", &[("lambda", 0.4)]).unwrap(),
            builtin_law("free_gig", &[("lambda", -1.0)]).unwrap(),
            builtin_law("inverse_mp", &[]).unwrap(),
            builtin_law("bernoulli", &[("p", 0.3), ("x0", 0.0), ("x1", 2.0)]).unwrap(),
        ];
        for m in &laws {
            for g in [0.25, 0.5] {
                let a = fractional_moment_power(m, 1, g).unwrap();
                let b = m.moment(g).unwrap();
                if b.is_infinite() {
                    assert!(a.is_infinite());
                    continue;
                }
                assert!((a - b).abs() < 1e-6 * b, "{:?} {g} {a} {b}", m.builtin());
            }
        }
    }

    #[test]
    fn jensen_gap_for_mp1() {
        for g in [0.1, 0.5, 0.9] {
            assert!(fractional_moment_power(&mp1(), 1, g).unwrap() < 1.0);
        }
    }

    #[test]
    fn fractional_asymptotics_mp1() {
        let a = fractional_moment_asymptotics(&mp1(), &[100, 10_000], 0.5).unwrap();
        assert!((a.predicted - 2f64.sqrt() / gamma(1.5)).abs() < 1e-12);
        let last = a.trend.last().unwrap().1;
        assert!((last / a.predicted - 1.0).abs() < 0.01, "{a:?}");
    }

    #[test]
    fn log_window_trend() {
        let mut prev = f64::INFINITY;
        let mut last = None;
        for n in [100, 1_000, 10_000, 100_000] {
            let r = log_window_moment(&mp1(), n).unwrap();
            let err = (r.scaled - r.limit).abs();
            assert!(err < prev, "{n} {r:?}");
            prev = err;
            last = Some(r);
        }
        let r = last.unwrap();
        assert!((r.limit - E).abs() < 1e-12);
        let exact = 1e5 / 1e5f64.ln() * mp1_fractional(100_000, r.gamma);
        assert!((r.scaled - exact).abs() < 1e-8 * exact, "{r:?} {exact}");
        let one = builtin_law("point", &[("c", 1.0)]).unwrap();
        assert!((fractional_moment_power(&one, 1000, 0.3).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn stable_constant_and_trend() {
        assert!(stable_moment_limit(1.5, 0.2, 0.5) > 0.0);
        assert_eq!((1.0 - 0.5) / (1.5 - 1.0), 1.0);
        let m = stable_test_law(1.5).unwrap();
        assert!((m.mean().unwrap() - 1.0).abs() < 1e-10);
        let a = stable_tail_moment_power(&m, &[10, 100, 1000], 0.5).unwrap();
        let last = a.trend.last().unwrap().1;
        assert!((last / a.predicted - 1.0).abs() < 0.15, "{a:?}");
        assert!(matches!(
            stable_tail_moment_power(&mp1(), &[10], 0.5),
            Err(Error::WrongTailClass(_))
        ));
    }

    #[test]
    fn integer_moments() {
        let f = fbp(2.0, 3.0);
        let m1 = f.mean().unwrap();
        for n in [1, 7, 30] {
            let v = integer_moment_power(&f, n, 1).unwrap();
            assert!((v - m1.powi(n as i32)).abs() < 1e-12 * v.abs().max(1.0));
        }
        // Second moment of MP(1)^⊠n is n + 1.
        for n in [1, 5, 50] {
            assert!((integer_moment_power(&mp1(), n, 2).unwrap() - (n as f64 + 1.0)).abs() < 1e-9);
        }
        let a = integer_moment_asymptotics(&mp1(), &[100, 400], 4).unwrap();
        assert!((a.predicted - 64.0 / 24.0).abs() < 1e-12);
        let e100 = (a.trend[0].1 - a.predicted).abs();
        let e400 = (a.trend[1].1 - a.predicted).abs();
        assert!(e400 < e100 && e400 / a.predicted < 0.1, "{a:?}");
    }

    #[test]
    fn lln_limit_of_mp1_is_uniform() {
        let nu = lln_limit(&mp1()).unwrap();
        for x in [0.1, 0.37, 0.9] {
            assert!((nu.cdf(x) - x).abs() < 1e-7, "{x} {}", nu.cdf(x));
        }
        let (lo, hi) = nu.support();
        assert!(lo < 1e-6 && (hi - 1.0).abs() < 1e-6);
        let d = builtin_law("point", &[("c", 2.0)]).unwrap();
        assert_eq!(lln_limit(&d).unwrap().atoms(), &[(2.0, 1.0)]);
    }

    #[test]
    fn lln_limit_round_trip() {
        let m = fbp(2.0, 3.0);
        let nu = lln_limit(&m).unwrap();
        let mut prev = 0.0;
        for t in [0.05, 0.3, 0.6, 0.95] {
            let q = lln_quantile(&m, t).unwrap();
            assert!(q > prev);
            prev = q;
            assert!((nu.cdf(q) - t).abs() < 1e-7, "{t} {}", nu.cdf(q));
        }
        let (lo, hi) = nu.support();
        let inv_mean = m.integrate(|x| 1.0 / x).unwrap();
        assert!((lo - 1.0 / inv_mean).abs() < 1e-5, "{lo}");
        assert!((hi - m.mean().unwrap()).abs() < 1e-5, "{hi}");
    }

    #[test]
    fn tilted_mean_properties() {
        let d = builtin_law("point", &[("c", 3.0)]).unwrap();
        for y in [0.1, 1.0, 10.0] {
            assert!((tilted_mean(&d, y).unwrap() - 3.0).abs() < 1e-12);
        }
        let y = 1e-4;
        let slope = (tilted_mean(&mp1(), y).unwrap() - 1.0) / y;
        assert!((slope + 1.0).abs() < 1e-3, "{slope}");
    }

    #[test]
    fn sy_finite_variance() {
        let (s, l) = sy_limit(&mp1(), 200, -0.5, SyCase::FiniteVariance).unwrap();
        assert!((l - 0.5f64.exp()).abs() < 1e-14);
        assert!((s / l - 1.0).abs() < 0.02, "{s} {l}");
        let (s, l) = sy_limit(&mp1(), 200, -1e-9, SyCase::FiniteVariance).unwrap();
        assert!((s - 1.0).abs() < 1e-6 && (l - 1.0).abs() < 1e-6);
    }

    #[test]
    fn sy_stable_shape() {
        let m = stable_test_law(1.5).unwrap();
        let t = m.tail().unwrap();
        let case = SyCase::Stable { alpha: 1.5, c: t.c };
        let ea = eta_alpha(1.5, t.c, 1.0);
        for k in 1..=10 {
            let z = -0.09 * k as f64;
            let (s, l) = sy_limit(&m, 200, z, case).unwrap();
            assert!((l.ln() + ea * (-z).sqrt()).abs() < 1e-12);
            assert!((s.ln() / l.ln() - 1.0).abs() < 0.05, "{z} {s} {l}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn tilted_mean_decreases(lambda in 0.2f64..3.0, y in 0.01f64..5.0) {
            let m = builtin_law("marchenko_pastur", &[("lambda", lambda)]).unwrap();
            prop_assert!(tilted_mean(&m, y * 1.1).unwrap() < tilted_mean(&m, y).unwrap());
        }

        #[test]
        fn mean_is_multiplicative(a in 0.5f64..4.0, b in 1.5f64..6.0, n in 1u64..50) {
            let m = fbp(a, b);
            let v = integer_moment_power(&m, n, 1).unwrap();
            let want = m.mean().unwrap().powi(n as i32);
            prop_assert!((v - want).abs() < 1e-10 * want);
        }
    }
}
