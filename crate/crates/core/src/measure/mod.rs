//! Probability laws on the real line: atoms, panel densities and an optional
//! power-law tail.

mod builtin;
mod cdf;
pub mod io;
mod levy;
mod push;

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;

use crate::cheb::Cheb;
use crate::error::{Error, Result};
use crate::quad::{self, Estimate, QuadValue, Tol};

pub use builtin::{builtin_law, fgig_endpoints, Builtin};
pub use cdf::CdfTable;
pub use levy::levy_distance;
pub use push::Push;

/// Sign structure of the support.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupportKind {
    Nonnegative,
    Symmetric,
    General,
}

/// Change of variables used when integrating over a panel. The sqrt maps also
/// fix the edge weight of a [`Density::Cheb`] panel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PanelMap {
    Plain,
    LeftSqrt,
    RightSqrt,
    BothSqrt,
    /// `x = e^v`; a Chebyshev panel then interpolates `ln density` in `v`.
    Log,
}

impl PanelMap {
    pub fn name(self) -> &'static str {
        match self {
            PanelMap::Plain => "plain",
            PanelMap::LeftSqrt => "sqrt_left",
            PanelMap::RightSqrt => "sqrt_right",
            PanelMap::BothSqrt => "sqrt_both",
            PanelMap::Log => "log",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "plain" => PanelMap::Plain,
            "sqrt_left" => PanelMap::LeftSqrt,
            "sqrt_right" => PanelMap::RightSqrt,
            "sqrt_both" => PanelMap::BothSqrt,
            "log" => PanelMap::Log,
            _ => return None,
        })
    }
}

pub type DensityFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum Density {
    Func(DensityFn),
    /// Smooth factor sampled at Chebyshev points; the panel map supplies the
    /// edge weight.
    Cheb(Cheb),
}

impl fmt::Debug for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Density::Func(_) => write!(f, "Func"),
            Density::Cheb(c) => write!(f, "Cheb({} coeffs)", c.coeffs.len()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Panel {
    pub a: f64,
    pub b: f64,
    pub map: PanelMap,
    pub density: Density,
}

impl Panel {
    pub fn func(a: f64, b: f64, map: PanelMap, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Panel {
            a,
            b,
            map,
            density: Density::Func(Arc::new(f)),
        }
    }

    /// Chebyshev panel from density samples at the panel's interpolation points.
    pub fn cheb_from_density(a: f64, b: f64, map: PanelMap, n: usize, dens: impl Fn(f64) -> f64) -> Self {
        let nodes = cheb_nodes(a, b, map, n);
        let vals: Vec<f64> = nodes.iter().map(|&x| dens(x)).collect();
        Self::cheb_from_samples(a, b, map, &vals)
    }

    /// Inverse of [`Panel::sample_values`].
    pub fn cheb_from_samples(a: f64, b: f64, map: PanelMap, dens_values: &[f64]) -> Self {
        let nodes = cheb_nodes(a, b, map, dens_values.len());
        let g: Vec<f64> = nodes
            .iter()
            .zip(dens_values)
            .map(|(&x, &d)| match map {
                PanelMap::Log => d.max(1e-300).ln(),
                _ => d / edge_weight(map, a, b, x),
            })
            .collect();
        let (lo, hi) = cheb_interval(a, b, map);
        Panel {
            a,
            b,
            map,
            density: Density::Cheb(Cheb::from_values(lo, hi, &g)),
        }
    }

    /// Chebyshev resampling of this panel with the point count doubled from 32
    /// until the trailing coefficients fall below `tol` (at most 4096 points).
    pub fn to_cheb(&self, tol: f64) -> Panel {
        let mut n = 32;
        loop {
            let p = Self::cheb_from_samples(self.a, self.b, self.map, &self.sample_values(n));
            let done = match &p.density {
                Density::Cheb(c) => c.tail_ratio() < tol,
                Density::Func(_) => true,
            };
            if done || n >= 4096 {
                return p;
            }
            n *= 2;
        }
    }

    /// Number of interpolation points of a Chebyshev panel.
    pub fn cheb_len(&self) -> Option<usize> {
        match &self.density {
            Density::Cheb(c) => Some(c.coeffs.len()),
            Density::Func(_) => None,
        }
    }

    /// Density values at the `n` interpolation points (see [`cheb_nodes`]).
    pub fn sample_values(&self, n: usize) -> Vec<f64> {
        cheb_nodes(self.a, self.b, self.map, n)
            .into_iter()
            .map(|x| self.density_at(x))
            .collect()
    }

    pub fn density_at(&self, x: f64) -> f64 {
        if x < self.a || x > self.b {
            return 0.0;
        }
        match &self.density {
            Density::Func(f) => f(x),
            Density::Cheb(c) => match self.map {
                PanelMap::Log => c.eval(x.ln()).exp(),
                m => (c.eval(x) * edge_weight(m, self.a, self.b, x)).max(0.0),
            },
        }
    }

    fn s_range(&self) -> (f64, f64) {
        match self.map {
            PanelMap::Plain => (self.a, self.b),
            PanelMap::BothSqrt => (0.0, std::f64::consts::PI),
            PanelMap::LeftSqrt | PanelMap::RightSqrt => (0.0, 1.0),
            PanelMap::Log => (self.a.ln(), self.b.ln()),
        }
    }

    /// Maps the substitution variable to `(x, dx/ds)`.
    fn x_of_s(&self, s: f64) -> (f64, f64) {
        let (a, b) = (self.a, self.b);
        match self.map {
            PanelMap::Plain => (s, 1.0),
            PanelMap::BothSqrt => {
                let c = 0.5 * (a + b);
                let r = 0.5 * (b - a);
                (c - r * s.cos(), r * s.sin())
            }
            PanelMap::LeftSqrt => (a + (b - a) * s * s, 2.0 * (b - a) * s),
            PanelMap::RightSqrt => (b - (b - a) * s * s, 2.0 * (b - a) * s),
            PanelMap::Log => {
                let x = s.exp();
                (x, x)
            }
        }
    }

    /// Inverse of `x_of_s` (clamped to the panel).
    fn s_of_x(&self, x: f64) -> f64 {
        let (a, b) = (self.a, self.b);
        let x = x.clamp(a, b);
        match self.map {
            PanelMap::Plain => x,
            PanelMap::BothSqrt => {
                let c = 0.5 * (a + b);
                let r = 0.5 * (b - a);
                ((c - x) / r).clamp(-1.0, 1.0).acos()
            }
            PanelMap::LeftSqrt => ((x - a) / (b - a)).max(0.0).sqrt(),
            PanelMap::RightSqrt => ((b - x) / (b - a)).max(0.0).sqrt(),
            PanelMap::Log => x.ln(),
        }
    }

    /// Whether increasing `s` moves `x` to the left.
    fn reversed(&self) -> bool {
        self.map == PanelMap::RightSqrt
    }

    /// `∫ phi dμ` over the part of the panel inside `[lo, hi]`.
    pub fn integrate_range<T: QuadValue>(&self, lo: f64, hi: f64, phi: impl Fn(f64) -> T, tol: Tol) -> Estimate<T> {
        let lo = lo.max(self.a);
        let hi = hi.min(self.b);
        if hi <= lo {
            return Estimate {
                value: T::zero(),
                error: 0.0,
                evals: 0,
            };
        }
        let (mut s0, mut s1) = (self.s_of_x(lo), self.s_of_x(hi));
        if self.reversed() {
            std::mem::swap(&mut s0, &mut s1);
        }
        quad::adaptive(
            |s| {
                let (x, j) = self.x_of_s(s);
                let d = self.density_at(x) * j;
                if d == 0.0 {
                    T::zero()
                } else {
                    phi(x) * d
                }
            },
            s0,
            s1,
            tol,
        )
    }

    pub fn integrate<T: QuadValue>(&self, phi: impl Fn(f64) -> T, tol: Tol) -> Estimate<T> {
        self.integrate_range(self.a, self.b, phi, tol)
    }

    /// Fixed Gauss–Legendre rule in the substitution variable with `n` nodes
    /// split over `pieces` equal pieces: `(x_i, w_i·density(x_i))`.
    pub fn fixed_rule(&self, pieces: usize, n: usize) -> Vec<(f64, f64)> {
        let (gx, gw) = quad::gauss_legendre(n);
        let (s0, s1) = self.s_range();
        let h = (s1 - s0) / pieces as f64;
        let mut out = Vec::with_capacity(pieces * n);
        for k in 0..pieces {
            let c = s0 + (k as f64 + 0.5) * h;
            for (t, w) in gx.iter().zip(&gw) {
                let s = c + 0.5 * h * t;
                let (x, j) = self.x_of_s(s);
                let d = self.density_at(x) * j * w * 0.5 * h;
                if d != 0.0 {
                    out.push((x, d));
                }
            }
        }
        out
    }
}

fn edge_weight(map: PanelMap, a: f64, b: f64, x: f64) -> f64 {
    match map {
        PanelMap::BothSqrt => ((x - a).max(0.0) * (b - x).max(0.0)).sqrt(),
        PanelMap::LeftSqrt => (x - a).max(0.0).sqrt(),
        PanelMap::RightSqrt => (b - x).max(0.0).sqrt(),
        PanelMap::Plain | PanelMap::Log => 1.0,
    }
}

fn cheb_interval(a: f64, b: f64, map: PanelMap) -> (f64, f64) {
    match map {
        PanelMap::Log => (a.ln(), b.ln()),
        _ => (a, b),
    }
}

/// Points at which a Chebyshev panel is sampled (increasing in `x`).
pub fn cheb_nodes(a: f64, b: f64, map: PanelMap, n: usize) -> Vec<f64> {
    let (lo, hi) = cheb_interval(a, b, map);
    let p = crate::cheb::points(lo, hi, n);
    match map {
        PanelMap::Log => p.into_iter().map(f64::exp).collect(),
        _ => p,
    }
}

/// Regularly varying right tail `μ((t,∞)) = c t^{-α}` for `t ≥ t0`; mirrored on
/// the left for symmetric laws.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tail {
    pub t0: f64,
    pub c: f64,
    pub alpha: f64,
}

impl Tail {
    pub fn mass(&self) -> f64 {
        self.c * self.t0.powf(-self.alpha)
    }

    pub fn density(&self, x: f64) -> f64 {
        if x < self.t0 {
            0.0
        } else {
            self.c * self.alpha * x.powf(-self.alpha - 1.0)
        }
    }

    fn integrate<T: QuadValue>(&self, phi: impl Fn(f64) -> T, tol: Tol) -> Estimate<T> {
        let e = quad::adaptive(
            |u: f64| {
                if u <= 0.0 {
                    T::zero()
                } else {
                    phi(self.t0 * u.powf(-1.0 / self.alpha))
                }
            },
            0.0,
            1.0,
            tol,
        );
        let m = self.mass();
        Estimate {
            value: e.value * m,
            error: e.error * m,
            evals: e.evals,
        }
    }
}

#[derive(Clone)]
pub struct Measure {
    atoms: Vec<(f64, f64)>,
    atom_cum: Vec<f64>,
    panels: Vec<Panel>,
    tail: Option<Tail>,
    kind: SupportKind,
    builtin: Option<Builtin>,
    cdf: OnceLock<Arc<CdfTable>>,
}

impl fmt::Debug for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Measure")
            .field("atoms", &self.atoms.len())
            .field("panels", &self.panels)
            .field("tail", &self.tail)
            .field("kind", &self.kind)
            .field("builtin", &self.builtin)
            .finish()
    }
}

/// Default quadrature tolerance for measure integrals.
pub const TOL: Tol = Tol {
    rel: 1e-12,
    abs: 1e-15,
    max_pieces: 4000,
};

impl Measure {
    /// Builds and validates a measure.
    pub fn new(atoms: Vec<(f64, f64)>, panels: Vec<Panel>, tail: Option<Tail>, kind: SupportKind) -> Result<Self> {
        let m = Self::new_unchecked(atoms, panels, tail, kind);
        m.validate()?;
        Ok(m)
    }

    pub(crate) fn new_unchecked(
        mut atoms: Vec<(f64, f64)>,
        mut panels: Vec<Panel>,
        tail: Option<Tail>,
        kind: SupportKind,
    ) -> Self {
        atoms.retain(|a| a.1 > 0.0);
        atoms.sort_by(|x, y| x.0.total_cmp(&y.0));
        panels.sort_by(|x, y| x.a.total_cmp(&y.a));
        let mut acc = 0.0;
        let atom_cum = atoms
            .iter()
            .map(|a| {
                acc += a.1;
                acc
            })
            .collect();
        Measure {
            atoms,
            atom_cum,
            panels,
            tail,
            kind,
            builtin: None,
            cdf: OnceLock::new(),
        }
    }

    pub fn point(c: f64) -> Self {
        let kind = if c >= 0.0 {
            SupportKind::Nonnegative
        } else {
            SupportKind::General
        };
        Self::new_unchecked(vec![(c, 1.0)], vec![], None, kind)
    }

    /// Equal-weight atoms at the given samples.
    pub fn empirical(samples: &[f64]) -> Self {
        let w = 1.0 / samples.len() as f64;
        let kind = if samples.iter().all(|&x| x >= 0.0) {
            SupportKind::Nonnegative
        } else {
            SupportKind::General
        };
        Self::new_unchecked(samples.iter().map(|&x| (x, w)).collect(), vec![], None, kind)
    }

    pub(crate) fn with_builtin(mut self, b: Builtin) -> Self {
        self.builtin = Some(b);
        self
    }

    pub fn with_kind(mut self, kind: SupportKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }
    pub fn panels(&self) -> &[Panel] {
        &self.panels
    }
    pub fn tail(&self) -> Option<Tail> {
        self.tail
    }
    pub fn kind(&self) -> SupportKind {
        self.kind
    }
    pub fn builtin(&self) -> Option<&Builtin> {
        self.builtin.as_ref()
    }

    fn tail_sides(&self) -> f64 {
        if self.kind == SupportKind::Symmetric {
            2.0
        } else {
            1.0
        }
    }

    /// Mass of the atom at `x` (exact location match).
    pub fn atom_mass(&self, x: f64) -> f64 {
        self.atoms.iter().filter(|a| a.0 == x).map(|a| a.1).sum()
    }

    pub fn total_mass(&self) -> f64 {
        let a: f64 = self.atoms.iter().map(|a| a.1).sum();
        let p: f64 = self.panels.iter().map(|p| p.integrate(|_| 1.0, TOL).value).sum();
        a + p + self.tail.map_or(0.0, |t| t.mass() * self.tail_sides())
    }

    /// Closed hull of the support; the upper end is infinite with a tail.
    pub fn support(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for a in &self.atoms {
            lo = lo.min(a.0);
            hi = hi.max(a.0);
        }
        for p in &self.panels {
            lo = lo.min(p.a);
            hi = hi.max(p.b);
        }
        if self.tail.is_some() {
            hi = f64::INFINITY;
            if self.kind == SupportKind::Symmetric {
                lo = f64::NEG_INFINITY;
            }
        }
        (lo, hi)
    }

    /// Whether `x` lies in the closed support.
    pub fn in_support(&self, x: f64) -> bool {
        self.atoms.iter().any(|a| a.0 == x)
            || self.panels.iter().any(|p| x >= p.a && x <= p.b)
            || self
                .tail
                .is_some_and(|t| x >= t.t0 || (self.kind == SupportKind::Symmetric && x <= -t.t0))
    }

    /// Distance from `x` to the support.
    pub fn dist_to_support(&self, x: f64) -> f64 {
        if self.in_support(x) {
            return 0.0;
        }
        let mut d = f64::INFINITY;
        for a in &self.atoms {
            d = d.min((x - a.0).abs());
        }
        for p in &self.panels {
            d = d.min((x - p.a).abs()).min((x - p.b).abs());
        }
        if let Some(t) = self.tail {
            d = d.min((x - t.t0).abs());
            if self.kind == SupportKind::Symmetric {
                d = d.min((x + t.t0).abs());
            }
        }
        d
    }

    /// Absolutely continuous density at `x` (atoms excluded).
    pub fn density(&self, x: f64) -> f64 {
        let mut d: f64 = self.panels.iter().map(|p| p.density_at(x)).sum();
        if let Some(t) = self.tail {
            d += t.density(x);
            if self.kind == SupportKind::Symmetric {
                d += t.density(-x);
            }
        }
        d
    }

    /// Checks the structural invariants.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidMeasure(m));
        for a in &self.atoms {
            if !(a.1 > 0.0 && a.1 <= 1.0 + 1e-12) || !a.0.is_finite() {
                return bad(format!("atom ({}, {})", a.0, a.1));
            }
        }
        for (i, p) in self.panels.iter().enumerate() {
            if !(p.a < p.b) || !p.a.is_finite() || !p.b.is_finite() {
                return bad(format!("panel [{}, {}]", p.a, p.b));
            }
            if p.map == PanelMap::Log && p.a <= 0.0 {
                return bad("log panel must lie in (0,∞)".into());
            }
            if let Some(q) = self.panels.get(i + 1) {
                if q.a < p.b - 1e-12 * p.b.abs().max(1.0) {
                    return bad(format!("panels [{}, {}] and [{}, {}] overlap", p.a, p.b, q.a, q.b));
                }
            }
            for a in &self.atoms {
                if a.0 > p.a && a.0 < p.b {
                    return bad(format!("atom {} inside panel [{}, {}]", a.0, p.a, p.b));
                }
            }
            for x in p.sample_values(17) {
                if x < -1e-12 || !x.is_finite() {
                    return bad(format!("negative density on [{}, {}]", p.a, p.b));
                }
            }
        }
        if let Some(t) = self.tail {
            if !(t.c > 0.0 && t.alpha > 0.0 && t.t0 > 0.0) {
                return bad(format!("tail {t:?}"));
            }
        }
        let mass = self.total_mass();
        if (mass - 1.0).abs() > 1e-9 {
            return bad(format!("total mass {mass}"));
        }
        match self.kind {
            SupportKind::Nonnegative => {
                if self.support().0 < 0.0 {
                    return bad("nonnegative law with mass below zero".into());
                }
            }
            SupportKind::Symmetric => {
                let m1 = self.integrate_body(|x| x, TOL).value;
                let m3 = self.integrate_body(|x| x * x * x / (1.0 + x * x), TOL).value;
                if m1.abs() > 1e-9 || m3.abs() > 1e-9 {
                    return bad(format!("symmetric law with odd moments {m1}, {m3}"));
                }
            }
            SupportKind::General => {}
        }
        Ok(())
    }

    /// Atoms and panels only.
    pub fn integrate_body<T: QuadValue>(&self, phi: impl Fn(f64) -> T, tol: Tol) -> Estimate<T> {
        let mut value = T::zero();
        let mut error = 0.0;
        let mut evals = 0;
        for a in &self.atoms {
            value = value + phi(a.0) * a.1;
        }
        for p in &self.panels {
            let e = p.integrate(&phi, tol);
            value = value + e.value;
            error += e.error;
            evals += e.evals;
        }
        Estimate { value, error, evals }
    }

    /// `∫ phi dμ` with an error estimate. The tail piece uses the substitution
    /// `x = t0·u^{-1/α}`.
    pub fn integrate_est<T: QuadValue>(&self, phi: impl Fn(f64) -> T, tol: Tol) -> Estimate<T> {
        let mut e = self.integrate_body(&phi, tol);
        if let Some(t) = self.tail {
            let r = t.integrate(&phi, tol);
            e.value = e.value + r.value;
            e.error += r.error;
            e.evals += r.evals;
            if self.kind == SupportKind::Symmetric {
                let l = t.integrate(|x| phi(-x), tol);
                e.value = e.value + l.value;
                e.error += l.error;
                e.evals += l.evals;
            }
        }
        e
    }

    pub fn integrate_with<T: QuadValue>(&self, phi: impl Fn(f64) -> T, tol: Tol) -> Result<T> {
        quad::check(self.integrate_est(phi, tol), tol)
    }

    /// `∫ phi dμ` for real `phi`.
    pub fn integrate(&self, phi: impl Fn(f64) -> f64) -> Result<f64> {
        self.integrate_with(phi, TOL)
    }

    pub fn integrate_c(&self, phi: impl Fn(f64) -> Complex64) -> Result<Complex64> {
        self.integrate_with(phi, TOL)
    }

    /// `∫ x^γ dμ` (or `∫ |x|^γ` for non-integer `γ` on symmetric laws).
    /// Returns `+∞` when the tail makes the moment infinite.
    pub fn moment(&self, gamma: f64) -> Result<f64> {
        if !(gamma > 0.0) {
            return Err(Error::InvalidParams(format!("moment order {gamma}")));
        }
        let integer = gamma.fract() == 0.0;
        if self.kind == SupportKind::General && !integer {
            return Err(Error::InvalidParams("non-integer moment of a general law".into()));
        }
        let pw = |x: f64| -> f64 {
            if integer {
                x.powi(gamma as i32)
            } else {
                x.abs().powf(gamma)
            }
        };
        let body = quad::check(self.integrate_body(pw, TOL), TOL)?;
        let Some(t) = self.tail else { return Ok(body) };
        if gamma >= t.alpha {
            return Ok(f64::INFINITY);
        }
        let right = t.c * t.alpha * t.t0.powf(gamma - t.alpha) / (t.alpha - gamma);
        let left = if self.kind == SupportKind::Symmetric {
            if integer && (gamma as i64) % 2 == 1 {
                -right
            } else {
                right
            }
        } else {
            0.0
        };
        Ok(body + right + left)
    }

    pub fn mean(&self) -> Result<f64> {
        self.moment(1.0)
    }

    pub fn variance(&self) -> Result<f64> {
        let m1 = self.moment(1.0)?;
        let m2 = self.moment(2.0)?;
        Ok(m2 - m1 * m1)
    }

    /// `μ((t, ∞))`.
    pub fn tail_mass(&self, t: f64) -> f64 {
        let mut s: f64 = self.atoms.iter().filter(|a| a.0 > t).map(|a| a.1).sum();
        for p in &self.panels {
            if p.b > t {
                s += p.integrate_range(t, p.b, |_| 1.0, TOL).value;
            }
        }
        if let Some(tl) = self.tail {
            s += tl.c * t.max(tl.t0).powf(-tl.alpha);
            if self.kind == SupportKind::Symmetric && t < -tl.t0 {
                s += tl.mass() - tl.c * (-t).powf(-tl.alpha);
            }
        }
        s
    }

    /// Cached CDF table.
    pub fn cdf_table(&self) -> Arc<CdfTable> {
        self.cdf.get_or_init(|| Arc::new(CdfTable::build(self))).clone()
    }

    /// `μ((-∞, x])`.
    pub fn cdf(&self, x: f64) -> f64 {
        self.cdf_table().cdf(x)
    }

    /// Left-continuous quantile.
    pub fn quantile(&self, q: f64) -> f64 {
        self.cdf_table().quantile(q)
    }

    /// Fixed quadrature nodes `(x_i, w_i)` for the body (atoms and panels).
    pub fn body_rule(&self, pieces: usize, n: usize) -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64)> = self.atoms.clone();
        for p in &self.panels {
            out.extend(p.fixed_rule(pieces, n));
        }
        out
    }

    /// [`Measure::body_rule`] plus tail nodes placed uniformly in `u = (x/t0)^{-α}`.
    pub fn full_rule(&self, pieces: usize, n: usize) -> Vec<(f64, f64)> {
        let mut out = self.body_rule(pieces, n);
        if let Some(t) = self.tail {
            let (gx, gw) = quad::gauss_legendre(n);
            let h = 1.0 / pieces as f64;
            let mass = t.mass();
            for k in 0..pieces {
                let c = (k as f64 + 0.5) * h;
                for (s, w) in gx.iter().zip(&gw) {
                    let u = c + 0.5 * h * s;
                    let x = t.t0 * u.powf(-1.0 / t.alpha);
                    let wt = mass * w * 0.5 * h;
                    out.push((x, wt));
                    if self.kind == SupportKind::Symmetric {
                        out.push((-x, wt));
                    }
                }
            }
        }
        out
    }
}
