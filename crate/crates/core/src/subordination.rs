//! Subordination functions `(f, 𝖿)` of `A^{1/2} X A^{1/2} + B` for `X` free
//! from a commuting pair `(A, B)`.
//!
//! A [`JointLaw`] stores the law of `(A, B)` where `A ≥ 0` is the factor that
//! multiplies `X` on both sides, so that the kernel reads
//! `K(z, w) = ∫ a / (z − b + w a) dρ(a, b)`.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::io::MeasureSpec;
use crate::measure::{Measure, SupportKind, Tail, TOL};
use crate::quad::QuadValue;

type C = Complex64;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

/// `B` as a function of `A` on one component of a [`JointLaw`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BMap {
    Zero,
    /// `B = c0 + c1·A`.
    Linear {
        c0: f64,
        c1: f64,
    },
    /// `B = coef·A^exponent`.
    Power {
        coef: f64,
        exponent: f64,
    },
}

impl BMap {
    pub fn eval(self, a: f64) -> f64 {
        match self {
            BMap::Zero => 0.0,
            BMap::Linear { c0, c1 } => c0 + c1 * a,
            BMap::Power { coef, exponent } => coef * a.powf(exponent),
        }
    }

    /// `dB/dA`.
    pub fn derivative(self, a: f64) -> f64 {
        match self {
            BMap::Zero => 0.0,
            BMap::Linear { c1, .. } => c1,
            BMap::Power { coef, exponent } => coef * exponent * a.powf(exponent - 1.0),
        }
    }

    fn negated(self) -> BMap {
        match self {
            BMap::Zero => BMap::Zero,
            BMap::Linear { c0, c1 } => BMap::Linear { c0: -c0, c1: -c1 },
            BMap::Power { coef, exponent } => BMap::Power { coef: -coef, exponent },
        }
    }

    /// `B = A`.
    pub fn identity() -> BMap {
        BMap::Linear { c0: 0.0, c1: 1.0 }
    }
}

/// One component `B = g(A)` with `A ~ a_law`, carrying `weight` of the mass.
#[derive(Debug, Clone)]
pub struct GraphPart {
    pub weight: f64,
    pub a_law: Arc<Measure>,
    pub b: BMap,
}

/// Law of the commuting pair `(A, B)`.
#[derive(Debug, Clone)]
pub struct JointLaw {
    parts: Vec<GraphPart>,
    points: Vec<(f64, f64, f64)>,
}

impl JointLaw {
    /// `B = g(A)`.
    pub fn graph(a_law: Measure, b: BMap) -> Result<Self> {
        Self::mixture(vec![GraphPart {
            weight: 1.0,
            a_law: Arc::new(a_law),
            b,
        }])
    }

    pub fn mixture(parts: Vec<GraphPart>) -> Result<Self> {
        Self::new(parts, vec![])
    }

    /// Discrete law with points `(a_i, b_i, w_i)`.
    pub fn grid(points: Vec<(f64, f64, f64)>) -> Result<Self> {
        Self::new(vec![], points)
    }

    fn new(parts: Vec<GraphPart>, points: Vec<(f64, f64, f64)>) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidMeasure(m));
        let mut total = 0.0;
        for p in &parts {
            if !(p.weight >= 0.0) {
                return bad(format!("negative component weight {}", p.weight));
            }
            if p.a_law.kind() != SupportKind::Nonnegative || p.a_law.support().0 < 0.0 {
                return bad("the law of A must live on [0, ∞)".into());
            }
            total += p.weight;
        }
        for &(a, _, w) in &points {
            if !(a >= 0.0 && w >= 0.0) {
                return bad(format!("grid point with a = {a}, w = {w}"));
            }
            total += w;
        }
        if (total - 1.0).abs() > 1e-9 {
            return bad(format!("weights sum to {total}"));
        }
        Ok(JointLaw { parts, points })
    }

    /// The mixture of `(A, B)` and `(A, −B)` with equal weights.
    pub fn symmetrized(&self) -> Result<Self> {
        let mut parts = vec![];
        for p in &self.parts {
            parts.push(GraphPart {
                weight: 0.5 * p.weight,
                ..p.clone()
            });
            parts.push(GraphPart {
                weight: 0.5 * p.weight,
                a_law: p.a_law.clone(),
                b: p.b.negated(),
            });
        }
        let mut points = vec![];
        for &(a, b, w) in &self.points {
            points.push((a, b, 0.5 * w));
            points.push((a, -b, 0.5 * w));
        }
        Self::new(parts, points)
    }

    pub fn parts(&self) -> &[GraphPart] {
        &self.parts
    }

    pub fn points(&self) -> &[(f64, f64, f64)] {
        &self.points
    }

    /// `E[φ(A, B)]`.
    pub fn expect<T: QuadValue>(&self, phi: impl Fn(f64, f64) -> T) -> Result<T> {
        let mut acc = T::zero();
        for p in &self.parts {
            let v = p.a_law.integrate_with(|a| phi(a, p.b.eval(a)), TOL)?;
            acc = acc + v * p.weight;
        }
        for &(a, b, w) in &self.points {
            acc = acc + phi(a, b) * w;
        }
        Ok(acc)
    }

    /// Fixed nodes `(a_i, b_i, w_i)`; tails are included.
    pub fn rule(&self, pieces: usize, n: usize) -> Vec<(f64, f64, f64)> {
        let mut out = self.points.clone();
        for p in &self.parts {
            out.extend(
                p.a_law
                    .full_rule(pieces, n)
                    .into_iter()
                    .map(|(a, w)| (a, p.b.eval(a), w * p.weight)),
            );
        }
        out
    }

    /// `E[A^p]` (infinite when a tail makes it so).
    pub fn a_moment(&self, p: f64) -> Result<f64> {
        let mut acc = 0.0;
        for q in &self.parts {
            acc += q.weight * q.a_law.moment(p)?;
        }
        Ok(acc + self.points.iter().map(|&(a, _, w)| w * a.powf(p)).sum::<f64>())
    }

    pub fn tau_a(&self) -> Result<f64> {
        self.a_moment(1.0)
    }

    pub fn var_a(&self) -> Result<f64> {
        let m1 = self.a_moment(1.0)?;
        Ok(self.a_moment(2.0)? - m1 * m1)
    }

    /// `E[B^p]` for integer `p`.
    pub fn b_moment(&self, p: i32) -> Result<f64> {
        if self.parts.iter().any(|q| q.a_law.tail().is_some()) {
            // Quadrature with the tail substitution copes with finite moments only.
            let v = self.expect(|_, b| b.powi(p))?;
            return if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::DivergentIntegral(format!("E[B^{p}]")))
            };
        }
        self.expect(|_, b| b.powi(p))
    }

    /// Combined tail descriptor of the law of `A`, when the components carry one.
    pub fn a_tail(&self) -> Option<Tail> {
        let tails: Vec<(f64, Tail)> = self
            .parts
            .iter()
            .filter_map(|p| p.a_law.tail().map(|t| (p.weight, t)))
            .collect();
        let first = tails.first()?.1;
        let alpha = tails.iter().map(|t| t.1.alpha).fold(f64::INFINITY, f64::min);
        let c: f64 = tails.iter().filter(|t| t.1.alpha == alpha).map(|t| t.0 * t.1.c).sum();
        let t0 = tails.iter().map(|t| t.1.t0).fold(first.t0, f64::max);
        Some(Tail { t0, c, alpha })
    }

    /// Whether `(A, B)` and `(A, −B)` have the same law, checked on odd
    /// `B`-moments.
    pub fn is_b_symmetric(&self) -> bool {
        let odd = |phi: &dyn Fn(f64, f64) -> f64| self.expect(phi).is_ok_and(|v| v.abs() < 1e-9);
        odd(&|_, b| b / (1.0 + b * b))
            && odd(&|_, b| b * b * b / (1.0 + b.powi(4)))
            && odd(&|a, b| a * b / (1.0 + a * a + b * b))
    }

    /// Whether every `B` value is nonnegative.
    pub fn b_nonnegative(&self) -> bool {
        self.rule(4, 16).iter().all(|&(_, b, _)| b >= 0.0)
    }

    /// Whether `A c + B = c` fails for every constant `c`: the values
    /// `b/(1−a)` must not collapse to a single point.
    pub fn is_irreducible(&self) -> bool {
        let nodes = self.rule(4, 16);
        if nodes.iter().any(|&(a, b, w)| w > 0.0 && a == 1.0 && b != 0.0) {
            return true;
        }
        let vals: Vec<f64> = nodes
            .iter()
            .filter(|n| n.0 != 1.0 && n.2 > 0.0)
            .map(|&(a, b, _)| b / (1.0 - a))
            .collect();
        let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        hi - lo > 1e-8
    }

    /// Whether `A` is a point mass.
    pub fn a_is_dirac(&self) -> bool {
        self.var_a().is_ok_and(|v| v.abs() < 1e-14)
    }
}

/// Law of `X` as seen by the solver: only its Cauchy transform is needed.
pub trait XLaw: Sync {
    fn cauchy(&self, w: C) -> Result<C>;
    /// Left end of the support.
    fn lower(&self) -> f64;
}

impl XLaw for Measure {
    fn cauchy(&self, w: C) -> Result<C> {
        if w.im == 0.0 && self.in_support(w.re) {
            return Err(Error::PoleHit(format!("w = {} in supp X", w.re)));
        }
        if w.im == 0.0 {
            return self.integrate_with(|t| c(1.0 / (w.re - t), 0.0), TOL);
        }
        self.integrate_c(|t| (w - t).inv())
    }

    fn lower(&self) -> f64 {
        if self.kind() == SupportKind::Symmetric && self.tail().is_some() {
            return f64::NEG_INFINITY;
        }
        self.support().0
    }
}

/// A law given by fixed quadrature nodes `(x_i, w_i)`.
#[derive(Debug, Clone)]
pub struct NodeLaw {
    pub nodes: Vec<(f64, f64)>,
}

impl NodeLaw {
    pub fn of(m: &Measure, pieces: usize, n: usize) -> Self {
        NodeLaw {
            nodes: m.full_rule(pieces, n),
        }
    }
}

impl XLaw for NodeLaw {
    fn cauchy(&self, w: C) -> Result<C> {
        let mut s = c(0.0, 0.0);
        for &(x, m) in &self.nodes {
            s += m * (w - x).inv();
        }
        if !s.is_finite() {
            return Err(Error::PoleHit(format!("w = {w}")));
        }
        Ok(s)
    }

    fn lower(&self) -> f64 {
        self.nodes.iter().map(|n| n.0).fold(f64::INFINITY, f64::min)
    }
}

/// Law of `(A, B)` as seen by the solver.
pub trait Coupling: Sync {
    /// `K(z, w) = E[A/(z − B + wA)]`.
    fn kernel(&self, z: C, w: C) -> Result<C>;
    /// `E[(z − B − δA)^{-1}]`.
    fn resolvent(&self, z: C, delta: C) -> Result<C>;
}

fn finite(v: C, what: &str) -> Result<C> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::PoleHit(what.to_string()))
    }
}

impl Coupling for JointLaw {
    fn kernel(&self, z: C, w: C) -> Result<C> {
        finite(self.expect(|a, b| a * (z - b + w * a).inv())?, "kernel")
    }

    fn resolvent(&self, z: C, delta: C) -> Result<C> {
        finite(self.expect(|a, b| (z - b - delta * a).inv())?, "resolvent")
    }
}

/// A joint law given by fixed nodes `(a_i, b_i, w_i)`.
#[derive(Debug, Clone)]
pub struct NodeJoint {
    pub nodes: Vec<(f64, f64, f64)>,
}

impl NodeJoint {
    pub fn of(rho: &JointLaw, pieces: usize, n: usize) -> Self {
        NodeJoint {
            nodes: rho.rule(pieces, n),
        }
    }
}

impl Coupling for NodeJoint {
    fn kernel(&self, z: C, w: C) -> Result<C> {
        let mut s = c(0.0, 0.0);
        for &(a, b, m) in &self.nodes {
            s += m * a * (z - b + w * a).inv();
        }
        finite(s, "kernel")
    }

    fn resolvent(&self, z: C, delta: C) -> Result<C> {
        let mut s = c(0.0, 0.0);
        for &(a, b, m) in &self.nodes {
            s += m * (z - b - delta * a).inv();
        }
        finite(s, "resolvent")
    }
}

/// `K(z, w)` of a joint law.
pub fn kernel_k(rho: &impl Coupling, z: C, w: C) -> Result<C> {
    rho.kernel(z, w)
}

/// One application of `𝓕_z(w₁, w₂) = (1/G_X(w₂) − w₂, 1/K(z, w₁) − w₁)`.
pub fn fz_map(x: &(impl XLaw + ?Sized), rho: &(impl Coupling + ?Sized), z: C, w1: C, w2: C) -> Result<(C, C)> {
    let n1 = x.cauchy(w2)?.inv() - w2;
    let n2 = rho.kernel(z, w1)?.inv() - w1;
    Ok((n1, n2))
}

/// Solved subordination functions at `z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubordinationPoint {
    pub z: C,
    pub f: C,
    pub sf: C,
    pub delta: C,
    pub h: C,
    pub residual: f64,
    pub iterations: usize,
}

impl SubordinationPoint {
    fn new(z: C, f: C, sf: C, residual: f64, iterations: usize) -> Self {
        SubordinationPoint {
            z,
            f,
            sf,
            delta: -f,
            h: sf + f,
            residual,
            iterations,
        }
    }

    fn conj(self) -> Self {
        SubordinationPoint {
            z: self.z.conj(),
            f: self.f.conj(),
            sf: self.sf.conj(),
            delta: self.delta.conj(),
            h: self.h.conj(),
            ..self
        }
    }
}

/// Solver controls.
#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Warm start: `(f, 𝖿)` in ℂ⁺, or `(−δ, ·)` on the negative axis.
    pub init: Option<(C, C)>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol: 1e-11,
            max_iter: 10_000,
            init: None,
        }
    }
}

/// Solves for `(f, 𝖿)` at `z`. On `ℂ⁺` this is a relaxed Picard iteration on
/// `𝖿` (the second component determines the first); on `(−∞, 0)` it is a
/// scalar root search for `δ`; lower half-plane points use conjugation.
pub fn solve_subordination(
    x: &(impl XLaw + ?Sized),
    rho: &(impl Coupling + ?Sized),
    z: C,
    opts: &SolveOptions,
) -> Result<SubordinationPoint> {
    if z.im > 0.0 {
        solve_upper(x, rho, z, opts)
    } else if z.im < 0.0 {
        let o = SolveOptions {
            init: opts.init.map(|(a, b)| (a.conj(), b.conj())),
            ..*opts
        };
        solve_upper(x, rho, z.conj(), &o).map(SubordinationPoint::conj)
    } else if z.re < 0.0 {
        solve_negative_axis(x, rho, z.re, opts)
    } else {
        Err(Error::OutOfDomain(format!("z = {z}: real points must be negative")))
    }
}

fn solve_upper(
    x: &(impl XLaw + ?Sized),
    rho: &(impl Coupling + ?Sized),
    z: C,
    opts: &SolveOptions,
) -> Result<SubordinationPoint> {
    // Φ(w₂) = second component of 𝓕_z after the first, a self-map of ℂ⁺.
    let phi = |w2: C| -> Result<(C, C)> {
        let w1 = x.cauchy(w2)?.inv() - w2;
        let w1 = if w1.im < 0.0 { c(w1.re, 0.0) } else { w1 };
        Ok((w1, rho.kernel(z, w1)?.inv() - w1))
    };
    let scale = |w: C| w.norm().max(1.0);
    let mut w = match opts.init {
        Some((_, sf)) if sf.im > 0.0 && sf.is_finite() => sf,
        _ => z + c(0.0, z.norm()),
    };
    let (mut w1, mut pw) = phi(w)?;
    let mut res = (pw - w).norm() / scale(w);
    let mut theta: f64 = 1.0;
    for it in 0..opts.max_iter {
        if res < opts.tol {
            return Ok(SubordinationPoint::new(z, w1, w, res, it));
        }
        // Relaxation factor 1/(1 − Φ'(w)) from a forward difference, with
        // backtracking; a plain damped Picard step when that fails.
        let h = 1e-7 * scale(w);
        let (_, ph) = phi(w + h)?;
        let lam = (ph - pw) / h;
        let step = (pw - w) / (C::new(1.0, 0.0) - lam);
        let mut accepted = None;
        if step.is_finite() {
            let mut t = 1.0;
            for _ in 0..30 {
                let cand = w + step * t;
                if cand.im > 0.0 {
                    if let Ok((c1, cp)) = phi(cand) {
                        let r = (cp - cand).norm() / scale(cand);
                        if r < res {
                            accepted = Some((cand, c1, cp, r));
                            break;
                        }
                    }
                }
                t *= 0.5;
            }
        }
        let (nw, nw1, npw, nres) = match accepted {
            Some(v) => v,
            None => {
                let cand = w + (pw - w) * theta;
                let (c1, cp) = phi(cand)?;
                let r = (cp - cand).norm() / scale(cand);
                if r > res {
                    theta = (theta * 0.5).max(1.0 / 64.0);
                }
                (cand, c1, cp, r)
            }
        };
        w = nw;
        w1 = nw1;
        pw = npw;
        res = nres;
    }
    if res < opts.tol {
        return Ok(SubordinationPoint::new(z, w1, w, res, opts.max_iter));
    }
    Err(Error::NoConvergence {
        iterations: opts.max_iter,
        residual: res,
    })
}

/// Root search for `δ > 0` at real `z < 0`:
/// `G_X(h + δ) = 1/h` with `1/h = K(z, −δ)`.
fn solve_negative_axis(
    x: &(impl XLaw + ?Sized),
    rho: &(impl Coupling + ?Sized),
    z: f64,
    opts: &SolveOptions,
) -> Result<SubordinationPoint> {
    let lower = x.lower();
    let zc = c(z, 0.0);
    let g = |d: f64| -> Result<Option<(f64, f64)>> {
        let k = rho.kernel(zc, c(-d, 0.0))?.re;
        let h = 1.0 / k;
        let sf = h + d;
        if !(sf < lower) || !h.is_finite() {
            return Ok(None);
        }
        let gx = x.cauchy(c(sf, 0.0))?.re;
        Ok(Some((gx - k, sf)))
    };
    let guess = match opts.init {
        Some((f, _)) if f.re < 0.0 => -f.re,
        _ => 1.0,
    };
    // Geometric scan outward from the guess for a sign change.
    let mut evals = 0usize;
    let mut bracket = None;
    let mut up = (guess, g(guess)?);
    let mut down = up;
    evals += 1;
    for _ in 0..200 {
        let nu = up.0 * 2.0;
        let gu = g(nu)?;
        evals += 1;
        if let (Some(a), Some(b)) = (up.1, gu) {
            if a.0.signum() != b.0.signum() {
                bracket = Some((up.0, a.0, nu, b.0));
                break;
            }
        }
        up = (nu, gu);
        let nd = down.0 * 0.5;
        let gd = g(nd)?;
        evals += 1;
        if let (Some(a), Some(b)) = (gd, down.1) {
            if a.0.signum() != b.0.signum() {
                bracket = Some((nd, a.0, down.0, b.0));
                break;
            }
        }
        down = (nd, gd);
        if nd < 1e-300 {
            break;
        }
    }
    let Some((mut lo, mut flo, mut hi, mut fhi)) = bracket else {
        return Err(Error::NoConvergence {
            iterations: evals,
            residual: f64::NAN,
        });
    };
    // Illinois false position.
    let mut side = 0i32;
    let mut d = 0.5 * (lo + hi);
    let mut fd = f64::NAN;
    for _ in 0..200 {
        d = (lo * fhi - hi * flo) / (fhi - flo);
        if !(d > lo && d < hi) {
            d = 0.5 * (lo + hi);
        }
        let Some((v, _)) = g(d)? else {
            return Err(Error::PoleHit(format!("δ = {d} left the admissible range")));
        };
        evals += 1;
        fd = v;
        if v == 0.0 || (hi - lo) < 1e-15 * d {
            break;
        }
        if v.signum() == flo.signum() {
            lo = d;
            flo = v;
            if side == -1 {
                fhi *= 0.5;
            }
            side = -1;
        } else {
            hi = d;
            fhi = v;
            if side == 1 {
                flo *= 0.5;
            }
            side = 1;
        }
    }
    let k = rho.kernel(zc, c(-d, 0.0))?.re;
    let h = 1.0 / k;
    let residual = fd.abs() / k.abs().max(1e-300);
    if !(residual < opts.tol.max(1e-9)) {
        return Err(Error::NoConvergence {
            iterations: evals,
            residual,
        });
    }
    Ok(SubordinationPoint::new(zc, c(-d, 0.0), c(h + d, 0.0), residual, evals))
}

/// `G_Y(z)` for `Y = A^{1/2} X A^{1/2} + B` from a solved point.
pub fn cauchy_affine_at(rho: &(impl Coupling + ?Sized), p: &SubordinationPoint) -> Result<C> {
    rho.resolvent(p.z, p.delta)
}

/// `ψ_Y(1/z) = z G_Y(z) − 1` from a solved point.
pub fn psi_affine_at(rho: &(impl Coupling + ?Sized), p: &SubordinationPoint) -> Result<C> {
    Ok(p.z * cauchy_affine_at(rho, p)? - 1.0)
}

/// Cauchy transform of `A^{1/2} X A^{1/2} + B` at `z`.
pub fn cauchy_affine(x: &(impl XLaw + ?Sized), rho: &(impl Coupling + ?Sized), z: C) -> Result<C> {
    let p = solve_subordination(x, rho, z, &SolveOptions::default())?;
    cauchy_affine_at(rho, &p)
}

/// `ψ` of `A^{1/2} X A^{1/2} + B` at `1/z`.
pub fn psi_affine(x: &(impl XLaw + ?Sized), rho: &(impl Coupling + ?Sized), z: C) -> Result<C> {
    let p = solve_subordination(x, rho, z, &SolveOptions::default())?;
    psi_affine_at(rho, &p)
}

/// The two consistency defects `|G_X(𝖿) − 1/(𝖿+f)|` and `|K(z,f) − 1/(𝖿+f)|`,
/// relative to `|1/(𝖿+f)|`.
pub fn consistency_defects(
    x: &(impl XLaw + ?Sized),
    rho: &(impl Coupling + ?Sized),
    p: &SubordinationPoint,
) -> Result<(f64, f64)> {
    let target = p.h.inv();
    let gx = x.cauchy(p.sf)?;
    let k = rho.kernel(p.z, p.f)?;
    let s = target.norm();
    Ok(((gx - target).norm() / s, (k - target).norm() / s))
}

/// Which monotonicity statement to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Positive,
    Symmetric,
}

/// Outcome of [`delta_monotonicity_check`].
#[derive(Debug, Clone)]
pub struct DeltaReport {
    pub regime: Regime,
    /// `(t, value)`: `δ(−t)` (positive) or `δ(it)/i` (symmetric).
    pub samples: Vec<(f64, f64)>,
    pub monotone: bool,
    /// Symmetric regime: every `δ(it)` is purely imaginary (to 1e-9 relative).
    pub on_axis: bool,
    /// Every sample has the sign required by the regime.
    pub signed: bool,
    /// `(f(iv), −τ(X))` at the largest `v`, when `τ(|X|) < ∞`.
    pub f_limit: Option<(C, f64)>,
}

/// Evaluates `δ` on a logarithmic grid and checks monotonicity and sign.
pub fn delta_monotonicity_check(mu_x: &Measure, rho: &JointLaw, regime: Regime) -> Result<DeltaReport> {
    let ts: Vec<f64> = (0..25).map(|k| 10f64.powf(-2.0 + 0.25 * k as f64)).collect();
    let mut samples = vec![];
    let mut on_axis = true;
    let mut init = None;
    for &t in ts.iter().rev() {
        let z = match regime {
            Regime::Positive => c(-t, 0.0),
            Regime::Symmetric => c(0.0, t),
        };
        let p = solve_subordination(
            mu_x,
            rho,
            z,
            &SolveOptions {
                init,
                ..Default::default()
            },
        )?;
        init = Some((p.f, p.sf));
        let v = match regime {
            Regime::Positive => p.delta.re,
            Regime::Symmetric => {
                let q = p.delta / c(0.0, 1.0);
                on_axis &= q.im.abs() <= 1e-9 * q.norm();
                q.re
            }
        };
        samples.push((t, v));
    }
    samples.reverse();
    let inc = samples.windows(2).all(|w| w[1].1 >= w[0].1);
    let dec = samples.windows(2).all(|w| w[1].1 <= w[0].1);
    let signed = match regime {
        Regime::Positive => samples.iter().all(|s| s.1 > 0.0),
        Regime::Symmetric => samples.iter().all(|s| s.1 < 0.0) || samples.iter().all(|s| s.1 > 0.0),
    };
    let f_limit = match mu_x.integrate(f64::abs) {
        Ok(m) if m.is_finite() && mu_x.tail().is_none() => {
            let p = solve_subordination(mu_x, rho, c(0.0, 1e4), &SolveOptions::default())?;
            Some((p.f, -mu_x.integrate(|t| t)?))
        }
        _ => None,
    };
    Ok(DeltaReport {
        regime,
        samples,
        monotone: inc || dec,
        on_axis,
        signed,
        f_limit,
    })
}

/// Source of a measure inside a JSON document: a `builtin:` shorthand, a file
/// path, or an inline measure.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MeasureRef {
    Uri(String),
    Inline(Box<MeasureSpec>),
}

impl MeasureRef {
    pub fn load(&self) -> Result<Measure> {
        match self {
            MeasureRef::Uri(s) => crate::measure::io::load(s),
            MeasureRef::Inline(spec) => spec.to_measure(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PartSpec {
    #[serde(default = "one")]
    pub weight: f64,
    pub a: MeasureRef,
    pub b: BMap,
}

fn one() -> f64 {
    1.0
}

/// JSON encoding of a [`JointLaw`]: `graph`, `mixture` or `grid`, optionally
/// sign-symmetrized.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JointSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<PartSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub mixture: Vec<PartSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub grid: Vec<[f64; 3]>,
    #[serde(default)]
    pub symmetrize: bool,
}

impl JointSpec {
    pub fn to_joint(&self) -> Result<JointLaw> {
        let mut parts = vec![];
        for p in self.graph.iter().chain(&self.mixture) {
            parts.push(GraphPart {
                weight: p.weight,
                a_law: Arc::new(p.a.load()?),
                b: p.b,
            });
        }
        let points = self.grid.iter().map(|g| (g[0], g[1], g[2])).collect();
        let j = JointLaw::new(parts, points)?;
        if self.symmetrize {
            j.symmetrized()
        } else {
            Ok(j)
        }
    }
}

/// Parses a JSON joint-law document.
pub fn joint_from_json(text: &str) -> Result<JointLaw> {
    let spec: JointSpec = serde_json::from_str(text).map_err(|e| Error::InvalidMeasure(e.to_string()))?;
    spec.to_joint()
}

/// Loads a joint law from a JSON file.
pub fn load_joint(path: &str) -> Result<JointLaw> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidParams(format!("{path}: {e}")))?;
    joint_from_json(&text)
}
