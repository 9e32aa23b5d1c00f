//! The free perpetuity `X ≐ A^{1/2} X A^{1/2} + B`: one-step affine map on
//! laws, its fixed-point iteration and moment diagnostics.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::measure::{levy_distance, Density, Measure, Panel, PanelMap, SupportKind, Tail, TOL};
use crate::subordination::{
    solve_subordination, BMap, Coupling, JointLaw, NodeJoint, NodeLaw, Regime, SolveOptions, SubordinationPoint,
};
use crate::tails::{geomspace, power_fit};
use crate::transforms::STransform;

type C = Complex64;

/// Position of `τ(A)` relative to 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criticality {
    Subcritical,
    Critical,
    Supercritical,
}

/// A perpetuity model `(A, B)`.
#[derive(Debug, Clone)]
pub struct PerpetuityProblem {
    pub rho: JointLaw,
    pub regime: Regime,
    pub tau_a: f64,
    pub criticality: Criticality,
}

impl PerpetuityProblem {
    /// Classifies the model; supercritical, reducible and `B = 0` models are
    /// rejected.
    pub fn new(rho: JointLaw, regime: Regime) -> Result<Self> {
        let tau_a = rho.tau_a()?;
        let criticality = if (tau_a - 1.0).abs() <= 1e-9 {
            Criticality::Critical
        } else if tau_a < 1.0 {
            Criticality::Subcritical
        } else {
            return Err(Error::Supercritical(tau_a));
        };
        if rho.expect(|_, b| b * b / (1.0 + b * b))? == 0.0 {
            return Err(Error::InvalidParams(
                "B = 0: the solution is the point mass at 0".into(),
            ));
        }
        if !rho.is_irreducible() {
            return Err(Error::NotIrreducible);
        }
        match regime {
            Regime::Positive if !rho.b_nonnegative() => {
                return Err(Error::InvalidParams("positive regime needs B ≥ 0".into()));
            }
            Regime::Symmetric if !rho.is_b_symmetric() => {
                return Err(Error::InvalidParams("symmetric regime needs (A,B) ≐ (A,−B)".into()));
            }
            _ => {}
        }
        Ok(PerpetuityProblem {
            rho,
            regime,
            tau_a,
            criticality,
        })
    }
}

/// Discretization controls for [`affine_step_with`].
#[derive(Debug, Clone, Copy)]
pub struct StepConfig {
    /// Quadrature pieces and Gauss nodes per piece for each panel of `X`.
    pub x_rule: (usize, usize),
    /// Same for the components of the joint law.
    pub rho_rule: (usize, usize),
    /// Density evaluations used to locate the support.
    pub scan_points: usize,
    /// Accepted trailing-coefficient ratio of a Chebyshev panel.
    pub cheb_tol: f64,
    /// Largest point count tried on one panel before splitting it.
    pub max_panel_points: usize,
    pub max_panels: usize,
    /// Imaginary offset of the evaluation points, relative to the support width.
    pub eps: f64,
}

impl Default for StepConfig {
    fn default() -> Self {
        StepConfig {
            x_rule: (4, 20),
            rho_rule: (32, 24),
            scan_points: 240,
            cheb_tol: 1e-7,
            max_panel_points: 96,
            max_panels: 48,
            eps: 1e-12,
        }
    }
}

/// Mass that may leak below zero in the positive regime before failing.
const LEAK_LIMIT: f64 = 1e-4;

struct Evaluator {
    x: NodeLaw,
    rho: NodeJoint,
    eps: f64,
}

impl Evaluator {
    fn solve(&self, t: f64, warm: Option<(C, C)>) -> Result<SubordinationPoint> {
        let z = C::new(t, self.eps);
        let opts = SolveOptions {
            init: warm,
            tol: 1e-12,
            max_iter: 4000,
        };
        match solve_subordination(&self.x, &self.rho, z, &opts) {
            Ok(p) => Ok(p),
            Err(_) if warm.is_some() => {
                solve_subordination(&self.x, &self.rho, z, &SolveOptions { init: None, ..opts })
            }
            Err(e) => Err(e),
        }
    }

    /// Density of the output at `t` and the solved point (for warm starts).
    fn density(&self, t: f64, warm: &mut Option<(C, C)>) -> Result<f64> {
        let p = self.solve(t, *warm)?;
        *warm = Some((p.f, p.sf));
        let g = self.rho.resolvent(p.z, p.delta)?;
        Ok((-g.im / PI).max(0.0))
    }
}

fn panel_ratio(p: &Panel) -> f64 {
    match &p.density {
        Density::Cheb(c) => c.tail_ratio(),
        Density::Func(_) => 0.0,
    }
}

struct Builder<'a> {
    ev: &'a Evaluator,
    cfg: &'a StepConfig,
    panels: Vec<Panel>,
}

impl Builder<'_> {
    fn sample(&self, lo: f64, hi: f64, map: PanelMap, n: usize) -> Result<Vec<f64>> {
        let mut warm = None;
        crate::measure::cheb_nodes(lo, hi, map, n)
            .into_iter()
            .map(|t| self.ev.density(t, &mut warm))
            .collect()
    }

    fn build(&mut self, lo: f64, hi: f64, left: bool, right: bool, depth: usize) -> Result<()> {
        let plain_map = if lo > 0.0 && hi / lo >= 2.0 {
            PanelMap::Log
        } else {
            PanelMap::Plain
        };
        let mut map = match (left, right) {
            (true, true) => PanelMap::BothSqrt,
            (true, false) => PanelMap::LeftSqrt,
            (false, true) => PanelMap::RightSqrt,
            (false, false) => plain_map,
        };
        let mut n = 24;
        let mut best = None;
        while n <= self.cfg.max_panel_points {
            let vals = self.sample(lo, hi, map, n)?;
            if map == PanelMap::Log && vals.iter().any(|&v| !(v > 0.0)) {
                map = PanelMap::Plain;
                continue;
            }
            let p = Panel::cheb_from_samples(lo, hi, map, &vals);
            let r = panel_ratio(&p);
            best = Some(p);
            if r < self.cfg.cheb_tol {
                break;
            }
            n *= 2;
        }
        let p = best.expect("at least one sampling round");
        let room = self.panels.len() + 2 <= self.cfg.max_panels;
        if panel_ratio(&p) < self.cfg.cheb_tol || depth >= 14 || !room {
            self.panels.push(p);
            return Ok(());
        }
        let mid = if lo > 0.0 && hi / lo > 4.0 {
            (lo * hi).sqrt()
        } else {
            0.5 * (lo + hi)
        };
        self.build(lo, mid, left, false, depth + 1)?;
        self.build(mid, hi, false, right, depth + 1)
    }
}

/// Law of `A^{1/2} X A^{1/2} + B` with default discretization.
pub fn affine_step(mu_x: &Measure, rho: &JointLaw) -> Result<Measure> {
    affine_step_with(mu_x, rho, &StepConfig::default())
}

/// Law of `A^{1/2} X A^{1/2} + B`. The density is evaluated just above the
/// real axis through the subordination functions, the support is located by
/// a scan with edge bisection, and each band becomes adaptive Chebyshev
/// panels with square-root edges.
pub fn affine_step_with(mu_x: &Measure, rho: &JointLaw, cfg: &StepConfig) -> Result<Measure> {
    let positive = mu_x.kind() == SupportKind::Nonnegative && rho.b_nonnegative();
    if mu_x.atoms().len() == 1 && mu_x.panels().is_empty() && mu_x.tail().is_none() {
        return dirac_image(mu_x.atoms()[0].0, rho, positive);
    }
    let x = NodeLaw::of(mu_x, cfg.x_rule.0, cfg.x_rule.1);
    let r = NodeJoint::of(rho, cfg.rho_rule.0, cfg.rho_rule.1);
    // Support bounds from the extreme values of a·x + b.
    let xl = x.nodes.iter().map(|n| n.0).fold(f64::INFINITY, f64::min);
    let xr = x.nodes.iter().map(|n| n.0).fold(f64::NEG_INFINITY, f64::max);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &(a, b, _) in &r.nodes {
        lo = lo.min((a * xl).min(a * xr) + b);
        hi = hi.max((a * xl).max(a * xr) + b);
    }
    let width = hi - lo;
    if !(width > 0.0) || !width.is_finite() {
        return Err(Error::InvalidMeasure(
            "degenerate or unbounded support in the affine step".into(),
        ));
    }
    lo -= 0.02 * width + 1e-12;
    hi += 0.02 * width + 1e-12;
    let width = hi - lo;
    let ev = Evaluator {
        x,
        rho: r,
        eps: cfg.eps * width.max(1e-300),
    };
    // Scan: uniform points plus geometric clusters near both ends.
    let n = cfg.scan_points;
    let mut grid: Vec<f64> = (0..=n / 2).map(|k| lo + width * k as f64 / (n / 2) as f64).collect();
    for d in geomspace(1e-7 * width, width, n / 4) {
        grid.push(lo + d);
        grid.push(hi - d);
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let mut dens = Vec::with_capacity(grid.len());
    let mut warm = None;
    for &t in &grid {
        dens.push(ev.density(t, &mut warm)?);
    }
    let peak = dens.iter().copied().fold(0.0, f64::max);
    if !(peak > 0.0) {
        return Err(Error::NoConvergence {
            iterations: 0,
            residual: f64::NAN,
        });
    }
    let thr = 1e-9 * peak;
    let inside: Vec<bool> = dens.iter().map(|&d| d > thr).collect();
    // Bands as runs of inside points, with bisected edges.
    let edge = |out: f64, inn: f64| -> Result<f64> {
        let (mut o, mut i) = (out, inn);
        let mut w = None;
        for _ in 0..64 {
            let m = 0.5 * (o + i);
            if (i - o).abs() <= 1e-13 * width {
                break;
            }
            if ev.density(m, &mut w)? > thr {
                i = m;
            } else {
                o = m;
            }
        }
        Ok(0.5 * (o + i))
    };
    let mut bands = vec![];
    let mut k = 0;
    while k < grid.len() {
        if !inside[k] {
            k += 1;
            continue;
        }
        let start = k;
        while k + 1 < grid.len() && inside[k + 1] {
            k += 1;
        }
        let l = if start == 0 {
            grid[0]
        } else {
            edge(grid[start - 1], grid[start])?
        };
        let rr = if k + 1 == grid.len() {
            grid[k]
        } else {
            edge(grid[k + 1], grid[k])?
        };
        bands.push((l, rr));
        k += 1;
    }
    let mut leaked = 0.0;
    let mut b = Builder {
        ev: &ev,
        cfg,
        panels: vec![],
    };
    for &(l, rr) in &bands {
        if positive && rr <= 0.0 {
            let tmp = Builder {
                ev: &ev,
                cfg,
                panels: vec![],
            };
            let vals = tmp.sample(l, rr, PanelMap::BothSqrt, 24)?;
            leaked += Panel::cheb_from_samples(l, rr, PanelMap::BothSqrt, &vals)
                .integrate(|_| 1.0, TOL)
                .value;
            continue;
        }
        if positive && l < 0.0 {
            let tmp = Builder {
                ev: &ev,
                cfg,
                panels: vec![],
            };
            let vals = tmp.sample(l, 0.0, PanelMap::LeftSqrt, 24)?;
            leaked += Panel::cheb_from_samples(l, 0.0, PanelMap::LeftSqrt, &vals)
                .integrate(|_| 1.0, TOL)
                .value;
            b.build(0.0, rr, false, true, 0)?;
            continue;
        }
        b.build(l, rr, true, true, 0)?;
    }
    if leaked > LEAK_LIMIT {
        return Err(Error::MassLeak(leaked));
    }
    let kind = if positive {
        SupportKind::Nonnegative
    } else {
        SupportKind::General
    };
    let m = Measure::new_unchecked(vec![], b.panels, None, kind);
    let mass = m.total_mass();
    if (mass - 1.0).abs() > 1e-2 {
        return Err(Error::MassDefect(mass));
    }
    let m = m.scaled(1.0 / mass);
    let kind = if !positive && is_symmetric(&m) {
        SupportKind::Symmetric
    } else {
        kind
    };
    Ok(m.with_kind(kind))
}

/// Law of `x0·A + B`, the affine image of a point mass.
fn dirac_image(x0: f64, rho: &JointLaw, positive: bool) -> Result<Measure> {
    let mut atoms: Vec<(f64, f64)> = rho.points().iter().map(|&(a, b, w)| (a * x0 + b, w)).collect();
    let mut panels = vec![];
    let mut tail = None;
    for part in rho.parts() {
        let g = part.b;
        let phi = move |a: f64| x0 * a + g.eval(a);
        let dphi = move |a: f64| x0 + g.derivative(a);
        let law = &part.a_law;
        let w = part.weight;
        for &(a, m) in law.atoms() {
            atoms.push((phi(a), m * w));
        }
        for p in law.panels() {
            let (fa, fb) = (phi(p.a), phi(p.b));
            let inc = fb > fa;
            let probe = [0.25, 0.5, 0.75].map(|s| dphi(p.a + s * (p.b - p.a)));
            if probe.iter().any(|d| (*d > 0.0) != inc || *d == 0.0) {
                return Err(Error::InvalidParams(
                    "B must be a monotone function of A on each panel".into(),
                ));
            }
            let q = p.clone();
            let (lo, hi) = (p.a, p.b);
            let inverse = move |y: f64| {
                let (mut l, mut h) = (lo, hi);
                for _ in 0..200 {
                    let m = 0.5 * (l + h);
                    if (phi(m) < y) == inc {
                        l = m;
                    } else {
                        h = m;
                    }
                    if h - l <= 1e-15 * h.abs().max(1e-300) {
                        break;
                    }
                }
                0.5 * (l + h)
            };
            let map = match (p.map, inc) {
                (PanelMap::LeftSqrt, false) => PanelMap::RightSqrt,
                (PanelMap::RightSqrt, false) => PanelMap::LeftSqrt,
                (PanelMap::Log, _) if fa.min(fb) <= 0.0 => PanelMap::Plain,
                (m, _) => m,
            };
            let dens = move |y: f64| {
                let a = inverse(y);
                w * q.density_at(a) / dphi(a).abs()
            };
            panels.push(Panel::func(fa.min(fb), fa.max(fb), map, dens).to_cheb(1e-11));
        }
        if let Some(t) = law.tail() {
            match g {
                BMap::Linear { c0, c1 } if x0 + c1 > 0.0 => {
                    let s = x0 + c1;
                    tail = Some(Tail {
                        t0: s * t.t0 + c0,
                        c: w * t.c * s.powf(t.alpha),
                        alpha: t.alpha,
                    });
                }
                _ => {
                    return Err(Error::InvalidParams(
                        "tail of A under a nonlinear or decreasing map".into(),
                    ))
                }
            }
        }
    }
    let kind = if positive {
        SupportKind::Nonnegative
    } else {
        SupportKind::General
    };
    let m = Measure::new_unchecked(merge(atoms), panels, tail, kind);
    let kind = if !positive && is_symmetric(&m) {
        SupportKind::Symmetric
    } else {
        kind
    };
    let m = m.with_kind(kind);
    m.validate()?;
    Ok(m)
}

fn is_symmetric(m: &Measure) -> bool {
    let (l, r) = m.support();
    if (l + r).abs() > 1e-6 * (r - l) {
        return false;
    }
    let odd = m.integrate_body(|x| x / (1.0 + x * x), TOL).value;
    odd.abs() < 1e-9
}

fn merge(mut atoms: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, f64)> = vec![];
    for a in atoms {
        match out.last_mut() {
            Some(l) if l.0 == a.0 => l.1 += a.1,
            _ => out.push(a),
        }
    }
    out
}

/// Controls for [`solve_perpetuity`].
#[derive(Debug, Clone)]
pub struct PerpetuityConfig {
    /// Starting law; the law of `B` when `None`.
    pub init: Option<Measure>,
    pub levy_tol: f64,
    pub max_outer: usize,
    pub step: StepConfig,
    /// Consecutive iterations over which the fitted tail constant must be
    /// stable (critical case).
    pub tail_window: usize,
    /// Relative change allowed in the fitted tail constant (critical case).
    pub tail_rtol: f64,
}

impl Default for PerpetuityConfig {
    fn default() -> Self {
        PerpetuityConfig {
            init: None,
            levy_tol: 1e-4,
            max_outer: 200,
            step: StepConfig::default(),
            tail_window: 5,
            tail_rtol: 1e-2,
        }
    }
}

/// One row of the iteration trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub iteration: usize,
    pub levy_step: f64,
    pub tail_alpha: Option<f64>,
    pub tail_c: Option<f64>,
}

/// Result of [`solve_perpetuity`].
#[derive(Debug, Clone)]
pub struct PerpetuitySolution {
    pub law: Measure,
    pub trace: Vec<TraceRow>,
    pub converged: bool,
}

/// Power-law fit `μ((t,∞)) ≈ c t^{-α}` on the upper part of a compactly
/// supported iterate: the window ends well inside the support so that the
/// truncation at the right edge does not bend the fit.
pub fn fit_iterate_tail(m: &Measure) -> Option<(f64, f64, f64, f64)> {
    let (l, r) = m.support();
    let t_hi = r / 50.0;
    let t_lo = (t_hi / 30.0).max(4.0 * l.max(1e-12));
    if !(t_hi > 2.0 * t_lo) || l < 0.0 {
        return None;
    }
    let ts = geomspace(t_lo, t_hi, 16);
    let ys: Vec<f64> = ts.iter().map(|&t| m.tail_mass(t)).collect();
    if ys.iter().any(|&y| !(y > 0.0)) {
        return None;
    }
    let (alpha, c, r2) = power_fit(&ts, &ys);
    Some((alpha, c, r2, t_hi))
}

/// Replaces the mass of `m` above `t0` by the tail `c t^{-α}` carrying the same
/// mass.
pub fn graft_tail(m: &Measure, t0: f64, alpha: f64) -> Result<Measure> {
    let rest = m.tail_mass(t0);
    let mut panels = vec![];
    for p in m.panels() {
        if p.b <= t0 {
            panels.push(p.clone());
        } else if p.a < t0 {
            let q = p.clone();
            let map = match p.map {
                PanelMap::BothSqrt => PanelMap::LeftSqrt,
                PanelMap::RightSqrt => PanelMap::Plain,
                other => other,
            };
            panels.push(Panel::func(p.a, t0, map, move |x| q.density_at(x)).to_cheb(1e-10));
        }
    }
    let atoms = m.atoms().iter().copied().filter(|a| a.0 <= t0).collect();
    let tail = Tail {
        t0,
        c: rest * t0.powf(alpha),
        alpha,
    };
    Measure::new(atoms, panels, Some(tail), m.kind())
}

/// Iterates the affine map from the law of `B` until successive iterates are
/// within `levy_tol` in Lévy distance. In the critical case the fitted tail
/// constant must also settle, and the result carries a grafted power tail.
pub fn solve_perpetuity(problem: &PerpetuityProblem, cfg: &PerpetuityConfig) -> Result<PerpetuitySolution> {
    let rho = &problem.rho;
    let mut x = match &cfg.init {
        Some(m) => m.clone(),
        None => affine_step_with(&Measure::point(0.0), rho, &cfg.step)?,
    };
    let critical = problem.criticality == Criticality::Critical;
    let mut trace = vec![];
    let mut consts: Vec<f64> = vec![];
    for it in 1..=cfg.max_outer {
        let next = affine_step_with(&x, rho, &cfg.step)?;
        let d = levy_distance(&next, &x);
        let fit = if critical { fit_iterate_tail(&next) } else { None };
        trace.push(TraceRow {
            iteration: it,
            levy_step: d,
            tail_alpha: fit.map(|f| f.0),
            tail_c: fit.map(|f| f.1),
        });
        x = next;
        if let Some(f) = fit {
            consts.push(f.1);
        }
        let settled = !critical || {
            let w = cfg.tail_window;
            consts.len() >= w && {
                let last = &consts[consts.len() - w..];
                let mx = last.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let mn = last.iter().copied().fold(f64::INFINITY, f64::min);
                mx - mn <= cfg.tail_rtol * mn.abs()
            }
        };
        if d < cfg.levy_tol && settled {
            let law = if critical { finish_critical(&x)? } else { x };
            return Ok(PerpetuitySolution {
                law,
                trace,
                converged: true,
            });
        }
    }
    let law = if critical { finish_critical(&x)? } else { x };
    Ok(PerpetuitySolution {
        law,
        trace,
        converged: false,
    })
}

fn finish_critical(x: &Measure) -> Result<Measure> {
    match fit_iterate_tail(x) {
        Some((alpha, _, _, t_hi)) if alpha > 0.0 => graft_tail(x, t_hi, alpha),
        _ => Ok(x.clone()),
    }
}

/// Largest defect of `(1+S_X(z)) S_X(z(1+S_X(z))) = S_A(z(1+S_X(z))) S_X(z)`
/// over `z_grid` (the `B = A` model).
pub fn s_functional_residual(mu_x: &Measure, mu_a: &Measure, z_grid: &[f64]) -> Result<f64> {
    let sx = STransform::of(mu_x);
    let sa = STransform::of(mu_a);
    s_functional_residual_with(|z| sx.eval(z), |z| sa.eval(z), z_grid)
}

/// [`s_functional_residual`] for S-transforms given as functions.
pub fn s_functional_residual_with(
    sx: impl Fn(f64) -> Result<f64>,
    sa: impl Fn(f64) -> Result<f64>,
    z_grid: &[f64],
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &z in z_grid {
        let s = sx(z)?;
        let u = z * (1.0 + s);
        if !(u < 0.0 && u > -1.0) {
            return Err(Error::OutOfDomain(format!("z(1+S_X(z)) = {u} at z = {z}")));
        }
        let lhs = (1.0 + s) * sx(u)?;
        let rhs = sa(u)? * s;
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(worst)
}

/// Moment diagnostics for a solved perpetuity.
#[derive(Debug, Clone)]
pub struct MomentReport {
    pub criticality: Criticality,
    /// `(p, m_p(X))` for the integer orders with `m_p(A), m_p(B)` finite.
    pub moments: Vec<(u32, f64)>,
    /// Whether `Σ n^{1−1/p} τ(A)^n` converges (it does iff `τ(A) < 1`).
    pub series_finite: bool,
    /// Tail exponent of the solution, when it has a tail.
    pub tail_exponent: Option<f64>,
    /// Critical case: whether the mean is infinite.
    pub mean_infinite: Option<bool>,
    /// `(γ, m_γ(X))` for fractional orders below the tail exponent.
    pub fractional: Vec<(f64, f64)>,
}

/// Reports which moments of the solution are finite.
pub fn moment_report(problem: &PerpetuityProblem, solution: &Measure) -> Result<MomentReport> {
    let rho = &problem.rho;
    let tail_exponent = solution
        .tail()
        .map(|t| t.alpha)
        .or_else(|| fit_iterate_tail(solution).map(|f| f.0));
    let mut moments = vec![];
    let mut fractional = vec![];
    let mut mean_infinite = None;
    match problem.criticality {
        Criticality::Subcritical => {
            for p in 1..=4u32 {
                let ma = rho.a_moment(p as f64).unwrap_or(f64::INFINITY);
                let mb = rho.b_moment(p as i32).map(f64::abs).unwrap_or(f64::INFINITY);
                if ma.is_finite() && mb.is_finite() {
                    moments.push((p, solution.moment(p as f64)?));
                }
            }
        }
        _ => {
            mean_infinite = Some(tail_exponent.is_some_and(|a| a <= 1.0 + 1e-2) || solution.moment(1.0)?.is_infinite());
            let cap = tail_exponent.unwrap_or(0.5).min(1.0);
            for g in [0.1, 0.25, 0.4] {
                if g < cap {
                    fractional.push((g, solution.moment(g)?));
                }
            }
        }
    }
    Ok(MomentReport {
        criticality: problem.criticality,
        moments,
        series_finite: problem.tau_a < 1.0,
        tail_exponent,
        mean_infinite,
        fractional,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::builtin_law;
    use crate::subordination::BMap;

    fn fbp(a: f64, b: f64) -> Measure {
        builtin_law("free_beta_prime", &[("a", a), ("b", b)]).unwrap()
    }

    fn pair(a: f64, b: f64) -> JointLaw {
        JointLaw::graph(fbp(a, a + b), BMap::identity()).unwrap()
    }

    #[test]
    fn classification() {
        let p = PerpetuityProblem::new(pair(2.0, 3.0), Regime::Positive).unwrap();
        assert_eq!(p.criticality, Criticality::Subcritical);
        assert!((p.tau_a - 0.5).abs() < 1e-12);
        let c = PerpetuityProblem::new(pair(2.0, 1.0), Regime::Positive).unwrap();
        assert_eq!(c.criticality, Criticality::Critical);
        let sup = JointLaw::graph(fbp(2.0, 1.5), BMap::identity()).unwrap();
        assert!(matches!(
            PerpetuityProblem::new(sup, Regime::Positive),
            Err(Error::Supercritical(_))
        ));
        let red = JointLaw::grid(vec![(0.5, 1.0, 0.5), (0.75, 0.5, 0.5)]).unwrap();
        assert_eq!(
            PerpetuityProblem::new(red, Regime::Positive).unwrap_err(),
            Error::NotIrreducible
        );
        let zero = JointLaw::graph(fbp(2.0, 5.0), BMap::Zero).unwrap();
        assert!(PerpetuityProblem::new(zero, Regime::Positive).is_err());
    }

    #[test]
    fn step_from_zero_is_law_of_b() {
        let rho = pair(2.0, 3.0);
        let y = affine_step(&Measure::point(0.0), &rho).unwrap();
        assert!(
            levy_distance(&y, &fbp(2.0, 5.0)) < 1e-4,
            "{}",
            levy_distance(&y, &fbp(2.0, 5.0))
        );
    }

    #[test]
    fn step_fixes_the_solution() {
        let x = fbp(2.0, 3.0);
        let y = affine_step(&x, &pair(2.0, 3.0)).unwrap();
        let d = levy_distance(&y, &x);
        assert!(d < 2e-3, "{d}");
        for t in [0.2, 0.5, 1.0, 2.0] {
            assert!(
                (y.density(t) - x.density(t)).abs() < 1e-5 * x.density(t).max(1.0),
                "{t}"
            );
        }
    }

    #[test]
    fn closed_form_functional_equation() {
        let (a, b) = (2.0, 3.0);
        let sx = |z: f64| Ok((b - 1.0 - z) / (a + z));
        let sa = |z: f64| Ok((a + b - 1.0 - z) / (a + z));
        let grid: Vec<f64> = (1..=10).map(|k| -0.03 * k as f64).collect();
        assert!(s_functional_residual_with(sx, sa, &grid).unwrap() < 1e-10);
    }

    #[test]
    fn graft_keeps_mass() {
        let m = fbp(2.0, 3.0);
        let g = graft_tail(&m, 4.0, 1.5).unwrap();
        assert!((g.total_mass() - 1.0).abs() < 1e-9);
        assert!((g.tail_mass(4.0) - m.tail_mass(4.0)).abs() < 1e-10);
    }

    #[test]
    fn critical_moment_report() {
        let p = PerpetuityProblem::new(pair(2.0, 1.0), Regime::Positive).unwrap();
        let sol = fbp(2.0, 1.0);
        let r = moment_report(&p, &sol).unwrap();
        assert_eq!(r.mean_infinite, Some(true));
        let (g, v) = r.fractional.iter().find(|f| f.0 == 0.25).copied().unwrap();
        let direct = sol.integrate(|x| x.powf(g)).unwrap();
        assert!((v - direct).abs() < 1e-4);
    }
}
