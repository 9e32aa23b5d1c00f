//! Moment transform ψ, its inverse χ, the S-transform, the Cauchy transform
//! and Stieltjes inversion.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::measure::{Builtin, Measure, Panel, PanelMap, SupportKind, TOL};
use crate::quad::Pair;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn pole_check(mu: &Measure, z: Complex64) -> Result<()> {
    if z.im == 0.0 && z.re != 0.0 && mu.in_support(1.0 / z.re) {
        return Err(Error::PoleOnSupport(format!(
            "1/z = {} lies in the support",
            1.0 / z.re
        )));
    }
    Ok(())
}

/// `ψ_μ(z) = ∫ zt/(1−zt) dμ(t)`.
pub fn psi(mu: &Measure, z: Complex64) -> Result<Complex64> {
    pole_check(mu, z)?;
    if z == c(0.0, 0.0) {
        return Ok(z);
    }
    mu.integrate_c(|t| {
        let zt = z * t;
        zt / (1.0 - zt)
    })
}

/// [`psi`] at a real argument.
pub fn psi_real(mu: &Measure, z: f64) -> Result<f64> {
    pole_check(mu, c(z, 0.0))?;
    mu.integrate(|t| {
        let zt = z * t;
        zt / (1.0 - zt)
    })
}

/// `(ψ(z), ψ'(z))` for real `z < 0`.
pub fn psi_and_derivative(mu: &Measure, z: f64) -> Result<(f64, f64)> {
    pole_check(mu, c(z, 0.0))?;
    let p = mu.integrate_with(
        |t| {
            let d = 1.0 / (1.0 - z * t);
            Pair(z * t * d, t * d * d)
        },
        TOL,
    )?;
    Ok((p.0, p.1))
}

/// Cauchy transform `G(z) = ∫ (z−t)^{-1} dμ(t)`.
pub fn cauchy(mu: &Measure, z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 && mu.in_support(z.re) {
        return Err(Error::PoleOnSupport(format!("z = {} lies in the support", z.re)));
    }
    mu.integrate_c(|t| (z - t).inv())
}

/// Bracket in `ln(−z)` used by [`chi`].
const CHI_BRACKET: (f64, f64) = (-690.0, 690.0);

/// Inverse of `ψ` on `(−∞, 0)`: the unique `z < 0` with `ψ(z) = w`, for
/// `w ∈ (δ−1, 0)`.
pub fn chi(mu: &Measure, w: f64) -> Result<f64> {
    chi_with_derivative(mu, w).map(|r| r.0)
}

/// `(χ(w), χ'(w))`.
pub fn chi_with_derivative(mu: &Measure, w: f64) -> Result<(f64, f64)> {
    let delta = mu.atom_mass(0.0);
    if mu.kind() != SupportKind::Nonnegative || !(w < 0.0 && w > delta - 1.0) {
        return Err(Error::OutOfDomain(format!("w = {w} outside ({}, 0)", delta - 1.0)));
    }
    // ψ is increasing in z, hence decreasing in s = ln(−z).
    let f = |s: f64| -> Result<(f64, f64)> {
        let z = -s.exp();
        let (p, dp) = psi_and_derivative(mu, z)?;
        Ok((p - w, dp * z))
    };
    let (mut lo, mut hi) = CHI_BRACKET;
    let (flo, _) = f(lo)?;
    let (fhi, _) = f(hi)?;
    if flo < 0.0 || fhi > 0.0 {
        return Err(Error::OutOfDomain(format!("w = {w} not bracketed")));
    }
    let mut s = 0.5 * (lo + hi);
    if let Some(m1) = mu.moment(1.0).ok().filter(|m| m.is_finite() && *m > 0.0) {
        // ψ(z) ≈ m₁z near zero.
        s = (-w / m1).ln().clamp(lo, hi);
    }
    let mut last = (f64::NAN, f64::NAN);
    for _ in 0..200 {
        let (v, dv) = f(s)?;
        last = (v, dv);
        if v == 0.0 {
            break;
        }
        if v > 0.0 {
            lo = s;
        } else {
            hi = s;
        }
        let newton = s - v / dv;
        let next = if dv < 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let tol = 1e-15 * s.abs().max(1.0);
        if (next - s).abs() < tol || hi - lo < tol {
            s = next;
            last = f(s)?;
            break;
        }
        s = next;
    }
    let z = -s.exp();
    if !(last.0.abs() < 1e-10 * w.abs()) {
        return Err(Error::NoConvergence {
            iterations: 200,
            residual: last.0.abs(),
        });
    }
    // dψ/dz = (dψ/ds)/z.
    Ok((z, z / last.1))
}

/// `S_μ(w) = (w+1)/w · χ_μ(w)`.
pub fn s_transform(mu: &Measure, w: f64) -> Result<f64> {
    Ok((w + 1.0) / w * chi(mu, w)?)
}

/// `(S(w), S'(w))`.
pub fn s_transform_with_derivative(mu: &Measure, w: f64) -> Result<(f64, f64)> {
    let (x, dx) = chi_with_derivative(mu, w)?;
    let s = (w + 1.0) / w * x;
    let ds = -x / (w * w) + (w + 1.0) / w * dx;
    Ok((s, ds))
}

/// Source of an S-transform: a measure or a closed-form builtin.
#[derive(Debug, Clone)]
pub enum SBase {
    Measure(Arc<Measure>),
    Closed(Builtin),
}

/// `z ↦ factor · S_base(z·arg_scale)^power`. This form is closed under
/// multiplicative powers, additive powers and dilations.
#[derive(Debug, Clone)]
pub struct STransform {
    base: SBase,
    delta: f64,
    factor: f64,
    arg_scale: f64,
    power: f64,
}

/// Operations on S-transforms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SOp {
    /// `S_{μ^⊠n} = S_μ^n`.
    Power(u64),
    /// `S_{μ^⊞n}(z) = (1/n) S_μ(z/n)`.
    AdditivePower(u64),
    /// `S_{D_a μ} = (1/a) S_μ`.
    Dilation(f64),
}

impl STransform {
    /// Uses the closed form when `mu` is a builtin that has one.
    pub fn of(mu: &Measure) -> Self {
        let delta = mu.atom_mass(0.0);
        let base = match mu.builtin() {
            Some(b) if b.s_transform(-0.5 * (1.0 - delta)).is_some() => SBase::Closed(b.clone()),
            _ => SBase::Measure(Arc::new(mu.clone())),
        };
        STransform {
            base,
            delta,
            factor: 1.0,
            arg_scale: 1.0,
            power: 1.0,
        }
    }

    /// Always evaluates through numerical inversion of ψ.
    pub fn numeric(mu: &Measure) -> Self {
        STransform {
            base: SBase::Measure(Arc::new(mu.clone())),
            delta: mu.atom_mass(0.0),
            factor: 1.0,
            arg_scale: 1.0,
            power: 1.0,
        }
    }

    /// Domain `(lo, 0)` of the composed transform.
    pub fn domain(&self) -> (f64, f64) {
        ((self.delta - 1.0) / self.arg_scale, 0.0)
    }

    pub fn apply(&self, op: SOp) -> Result<Self> {
        let mut s = self.clone();
        match op {
            SOp::Power(n) => {
                if n == 0 {
                    return Err(Error::InvalidParams("power must be at least 1".into()));
                }
                s.factor = s.factor.powf(n as f64);
                s.power *= n as f64;
            }
            SOp::AdditivePower(n) => {
                if n == 0 {
                    return Err(Error::InvalidParams("additive power must be at least 1".into()));
                }
                s.factor /= n as f64;
                s.arg_scale /= n as f64;
            }
            SOp::Dilation(a) => {
                if !(a > 0.0) {
                    return Err(Error::InvalidParams("dilation must be positive".into()));
                }
                s.factor /= a;
            }
        }
        if !(s.factor.is_finite() && s.factor > 0.0 && s.arg_scale > 0.0) {
            return Err(Error::DomainShrunk);
        }
        Ok(s)
    }

    fn base_eval(&self, w: f64) -> Result<f64> {
        match &self.base {
            SBase::Closed(b) => {
                if !(w < 0.0 && w > self.delta - 1.0) {
                    return Err(Error::OutOfDomain(format!("w = {w}")));
                }
                b.s_transform(w).ok_or_else(|| Error::OutOfDomain(format!("w = {w}")))
            }
            SBase::Measure(m) => s_transform(m, w),
        }
    }

    pub fn eval(&self, z: f64) -> Result<f64> {
        let w = z * self.arg_scale;
        if !(w < 0.0 && w > self.delta - 1.0) {
            return Err(if z < 0.0 && z > self.delta - 1.0 {
                Error::DomainShrunk
            } else {
                Error::OutOfDomain(format!("z = {z}"))
            });
        }
        Ok(self.factor * self.base_eval(w)?.powf(self.power))
    }

    /// `ln S(z)`, stable for large powers.
    pub fn ln_eval(&self, z: f64) -> Result<f64> {
        let w = z * self.arg_scale;
        if !(w < 0.0 && w > self.delta - 1.0) {
            return Err(Error::DomainShrunk);
        }
        Ok(self.factor.ln() + self.power * self.base_eval(w)?.ln())
    }
}

/// How the ε-sequence is extrapolated to zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Extrapolation {
    /// Least-squares line in ε.
    Linear,
    /// Interpolating polynomial through all points.
    Polynomial,
}

#[derive(Debug, Clone)]
pub struct InversionConfig {
    pub eps: Vec<f64>,
    pub extrapolation: Extrapolation,
    pub atom_threshold: f64,
}

impl Default for InversionConfig {
    fn default() -> Self {
        InversionConfig {
            eps: vec![1e-2, 5e-3, 2.5e-3],
            extrapolation: Extrapolation::Linear,
            atom_threshold: 1e-3,
        }
    }
}

/// Output of [`stieltjes_invert`].
#[derive(Debug, Clone)]
pub struct Inversion {
    pub measure: Measure,
    /// Factor applied to reach unit mass.
    pub renormalization: f64,
}

fn extrapolate(eps: &[f64], vals: &[f64], how: Extrapolation) -> f64 {
    let n = eps.len();
    if n == 1 {
        return vals[0];
    }
    match how {
        Extrapolation::Linear => {
            let me = eps.iter().sum::<f64>() / n as f64;
            let mv = vals.iter().sum::<f64>() / n as f64;
            let sxy: f64 = eps.iter().zip(vals).map(|(e, v)| (e - me) * (v - mv)).sum();
            let sxx: f64 = eps.iter().map(|e| (e - me) * (e - me)).sum();
            mv - me * sxy / sxx
        }
        Extrapolation::Polynomial => {
            // Neville evaluation at 0.
            let mut p = vals.to_vec();
            for k in 1..n {
                for i in 0..n - k {
                    p[i] = (eps[i + k] * p[i] - eps[i] * p[i + 1]) / (eps[i + k] - eps[i]);
                }
            }
            p[0]
        }
    }
}

/// Recovers a measure from its Cauchy transform on a real grid:
/// density `−(1/π) lim Im G(x+iε)` by extrapolation over `cfg.eps`, atoms
/// where `ε·|Im G|` stays above `cfg.atom_threshold`. The density is linear
/// between grid points.
pub fn stieltjes_invert(
    g: impl Fn(Complex64) -> Result<Complex64>,
    grid: &[f64],
    cfg: &InversionConfig,
) -> Result<Inversion> {
    if grid.len() < 2 || cfg.eps.is_empty() {
        return Err(Error::InvalidParams("need a grid and an ε schedule".into()));
    }
    let mut eps = cfg.eps.clone();
    eps.sort_by(|a, b| b.total_cmp(a));
    let check = |v: Complex64| -> Result<Complex64> {
        if v.im > 1e-12 * v.norm().max(1.0) {
            return Err(Error::NonNevanlinna(format!("Im G = {} > 0", v.im)));
        }
        Ok(v)
    };
    // Samples of −Im G/π and of the atom indicator ε·(−Im G).
    let mut dens = vec![vec![0.0; eps.len()]; grid.len()];
    let mut weight = vec![0.0; grid.len()];
    let e_min = *eps.last().expect("nonempty");
    for (i, &x) in grid.iter().enumerate() {
        for (k, &e) in eps.iter().enumerate() {
            let v = check(g(c(x, e))?)?;
            dens[i][k] = -v.im / std::f64::consts::PI;
            if e == e_min {
                weight[i] = -e * v.im;
            }
        }
    }
    let mut atoms: Vec<(f64, f64)> = vec![];
    for i in 0..grid.len() {
        let w = weight[i];
        let left = if i > 0 { weight[i - 1] } else { f64::NEG_INFINITY };
        let right = if i + 1 < grid.len() {
            weight[i + 1]
        } else {
            f64::NEG_INFINITY
        };
        if !(w > cfg.atom_threshold && w >= left && w > right) {
            continue;
        }
        let lo = if i > 0 { grid[i - 1] } else { grid[i] };
        let hi = if i + 1 < grid.len() { grid[i + 1] } else { grid[i] };
        let ind = |x: f64| -> Result<f64> { Ok(-e_min * check(g(c(x, e_min))?)?.im) };
        // Golden-section search for the maximum of the indicator.
        let (mut a, mut b) = (lo, hi);
        let r = 0.5 * (5f64.sqrt() - 1.0);
        let mut x1 = b - r * (b - a);
        let mut x2 = a + r * (b - a);
        let (mut f1, mut f2) = (ind(x1)?, ind(x2)?);
        for _ in 0..80 {
            if f1 > f2 {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - r * (b - a);
                f1 = ind(x1)?;
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + r * (b - a);
                f2 = ind(x2)?;
            }
        }
        let x0 = if ind(grid[i])? >= f1.max(f2) {
            grid[i]
        } else {
            0.5 * (a + b)
        };
        let masses: Vec<f64> = eps
            .iter()
            .map(|&e| g(c(x0, e)).map(|v| -e * v.im))
            .collect::<Result<_>>()?;
        let m = extrapolate(&eps, &masses, cfg.extrapolation);
        if m > cfg.atom_threshold {
            atoms.push((x0, m));
        }
    }
    // Remove atom contributions before extrapolating the density.
    let mut d = vec![0.0; grid.len()];
    for (i, &x) in grid.iter().enumerate() {
        let vals: Vec<f64> = eps
            .iter()
            .enumerate()
            .map(|(k, &e)| {
                let mut v = dens[i][k];
                for &(a, m) in &atoms {
                    v -= m * e / ((x - a).powi(2) + e * e) / std::f64::consts::PI;
                }
                v
            })
            .collect();
        d[i] = extrapolate(&eps, &vals, cfg.extrapolation).max(0.0);
        if atoms.iter().any(|a| (a.0 - x).abs() <= f64::EPSILON * x.abs().max(1.0)) {
            d[i] = 0.0;
        }
    }
    let grid_arc: Arc<Vec<f64>> = Arc::new(grid.to_vec());
    let d_arc: Arc<Vec<f64>> = Arc::new(d.clone());
    let mut panels = vec![];
    let mut i = 0;
    while i + 1 < grid.len() {
        if d[i] == 0.0 && d[i + 1] == 0.0 {
            i += 1;
            continue;
        }
        let start = i;
        while i + 1 < grid.len() && !(d[i] == 0.0 && d[i + 1] == 0.0 && i > start) {
            i += 1;
        }
        let (a, b) = (grid[start], grid[i]);
        let (gx, dv) = (grid_arc.clone(), d_arc.clone());
        panels.push(Panel::func(a, b, PanelMap::Plain, move |x| {
            let k = gx.partition_point(|&t| t <= x).clamp(1, gx.len() - 1);
            let (x0, x1) = (gx[k - 1], gx[k]);
            let t = (x - x0) / (x1 - x0);
            (dv[k - 1] * (1.0 - t) + dv[k] * t).max(0.0)
        }));
    }
    // Atoms inside panels are stored as separate panel pieces around them.
    let mut split = vec![];
    for p in panels {
        let mut cuts: Vec<f64> = atoms.iter().map(|a| a.0).filter(|&x| x > p.a && x < p.b).collect();
        if cuts.is_empty() {
            split.push(p);
            continue;
        }
        cuts.insert(0, p.a);
        cuts.push(p.b);
        for w in cuts.windows(2) {
            let q = p.clone();
            split.push(Panel::func(w[0], w[1], PanelMap::Plain, move |x| q.density_at(x)));
        }
    }
    let kind = if grid[0] >= 0.0 {
        SupportKind::Nonnegative
    } else {
        SupportKind::General
    };
    let raw = Measure::new_unchecked(atoms.clone(), split.clone(), None, kind);
    let mass = raw.total_mass();
    if !(mass > 0.0) {
        return Err(Error::MassDefect(0.0));
    }
    let factor = 1.0 / mass;
    if (factor - 1.0).abs() > 1e-2 {
        return Err(Error::MassDefect(factor));
    }
    let atoms = atoms.into_iter().map(|(x, m)| (x, m * factor)).collect();
    let panels = split
        .into_iter()
        .map(|p| Panel::func(p.a, p.b, PanelMap::Plain, move |x| factor * p.density_at(x)))
        .collect();
    Ok(Inversion {
        measure: Measure::new_unchecked(atoms, panels, None, kind),
        renormalization: factor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{builtin_law, levy_distance};

    fn fbp(a: f64, b: f64) -> Measure {
        builtin_law("free_beta_prime", &[("a", a), ("b", b)]).unwrap()
    }

    fn psi_fbp(a: f64, b: f64, z: f64) -> f64 {
        let u = (b - 1.0) - (1.0 + a) * z;
        (u - (u * u - 4.0 * a * z * (z + 1.0)).sqrt()) / (2.0 * (1.0 + z))
    }

    #[test]
    fn dirac_transforms() {
        let d = Measure::point(1.0);
        assert!((psi_real(&d, -1.0).unwrap() + 0.5).abs() < 1e-15);
        assert!((chi(&d, -0.5).unwrap() + 1.0).abs() < 1e-12);
        let d3 = builtin_law("point", &[("c", 3.0)]).unwrap();
        for w in [-0.9, -0.5, -1e-3] {
            assert!((s_transform(&d3, w).unwrap() - 1.0 / 3.0).abs() < 1e-11);
        }
        let z = c(0.3, 0.7);
        assert!((cauchy(&Measure::point(0.0), z).unwrap() - z.inv()).norm() < 1e-15);
        assert!(psi_real(&d, 1.0).is_err());
    }

    #[test]
    fn free_beta_prime_closed_forms() {
        let m = fbp(2.0, 3.0);
        assert!((psi_real(&m, -0.3).unwrap() - psi_fbp(2.0, 3.0, -0.3)).abs() < 1e-9);
        let w = -0.2;
        let closed = w * (3.0 - 1.0 - w) / ((1.0 + w) * (w + 2.0));
        assert!((chi(&m, w).unwrap() - closed).abs() < 1e-9);
        assert!((s_transform(&m, -0.5).unwrap() - 2.5 / 1.5).abs() < 1e-9);
    }

    #[test]
    fn s_transform_two_term_expansion() {
        let m = fbp(2.0, 3.0);
        let (m1, var) = (1.0, 1.0);
        // Linear extrapolation of S and S' from two points near 0.
        let (w1, w2) = (-1e-4, -2e-4);
        let (s1, d1) = s_transform_with_derivative(&m, w1).unwrap();
        let (s2, d2) = s_transform_with_derivative(&m, w2).unwrap();
        let s0 = s1 - d1 * w1;
        let ds0 = 2.0 * d1 - d2;
        assert!((s2 - d2 * w2 - s0).abs() < 1e-6);
        assert!((s0 - 1.0 / m1).abs() < 1e-4);
        assert!((ds0 + var / m1.powi(3)).abs() < 1e-4);
    }

    #[test]
    fn semicircle_quadratic() {
        let s = builtin_law("semicircle", &[("m", 0.0), ("sigma", 1.0)]).unwrap();
        for z in [c(0.0, 1.0), c(1.5, 0.2), c(-3.0, 0.01)] {
            let g = cauchy(&s, z).unwrap();
            assert!((g * g - z * g + 1.0).norm() < 1e-10);
            assert!(g.im < 0.0);
        }
    }

    #[test]
    fn cauchy_normalization() {
        let m = builtin_law("marchenko_pastur", &[("lambda", 1.0)]).unwrap();
        let z = c(0.0, 1e6);
        assert!((z * cauchy(&m, z).unwrap() - 1.0).norm() < 1e-5);
    }

    #[test]
    fn psi_small_argument_series() {
        let m = builtin_law("marchenko_pastur", &[("lambda", 1.0)]).unwrap();
        for t in [1e3, 1e4] {
            let v = -psi_real(&m, -1.0 / t).unwrap();
            let series = 1.0 / t - 2.0 / (t * t) + 5.0 / t.powi(3);
            assert!((v - series).abs() < 20.0 / t.powi(4), "{t}");
        }
    }

    #[test]
    fn symmetric_psi_identity() {
        let base = fbp(2.0, 3.0);
        let sym = {
            let neg = base.pushforward(crate::measure::Push::Negate).unwrap();
            let mut panels: Vec<Panel> = neg.panels().to_vec();
            panels.extend(base.panels().iter().cloned());
            let halves: Vec<Panel> = panels
                .into_iter()
                .map(|p| {
                    let q = p.clone();
                    Panel::func(p.a, p.b, p.map, move |x| 0.5 * q.density_at(x))
                })
                .collect();
            Measure::new(vec![], halves, None, SupportKind::Symmetric).unwrap()
        };
        let sq = sym.pushforward(crate::measure::Push::Square).unwrap();
        for t in [0.5, 2.0, 10.0] {
            let lhs = psi(&sym, c(0.0, 1.0 / t)).unwrap();
            let rhs = psi_real(&sq, -1.0 / (t * t)).unwrap();
            assert!((lhs.re - rhs).abs() < 1e-10 && lhs.im.abs() < 1e-10, "{lhs} {rhs}");
        }
    }

    #[test]
    fn s_arithmetic_identities() {
        let m = fbp(2.0, 3.0);
        let s = STransform::numeric(&m);
        let z = -0.3;
        assert!((s.apply(SOp::Power(1)).unwrap().eval(z).unwrap() - s.eval(z).unwrap()).abs() < 1e-14);
        let d = s.apply(SOp::Dilation(2.5)).unwrap().apply(SOp::Dilation(0.4)).unwrap();
        assert!((d.eval(z).unwrap() - s.eval(z).unwrap()).abs() < 1e-14);
        let closed = STransform::of(&m);
        assert!((closed.eval(z).unwrap() - s.eval(z).unwrap()).abs() < 1e-9);
        let p3 = closed.apply(SOp::Power(3)).unwrap();
        assert!((p3.eval(z).unwrap() - closed.eval(z).unwrap().powi(3)).abs() < 1e-12);
        let a = closed.apply(SOp::AdditivePower(4)).unwrap();
        assert!((a.eval(-2.0).unwrap() - 0.25 * closed.eval(-0.5).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn invert_dirac() {
        let inv = stieltjes_invert(
            |z| Ok(z.inv()),
            &[-1.0, -0.5, 0.0, 0.5, 1.0],
            &InversionConfig::default(),
        )
        .unwrap();
        assert_eq!(inv.measure.atoms().len(), 1);
        assert!((inv.measure.atoms()[0].1 - 1.0).abs() < 1e-9);
        assert!(inv.measure.atoms()[0].0.abs() < 1e-9);
    }

    #[test]
    fn invert_marchenko_pastur() {
        let m = builtin_law("marchenko_pastur", &[("lambda", 1.0)]).unwrap();
        let grid: Vec<f64> = (0..=800).map(|i| 4.4 * i as f64 / 800.0 - 0.2).collect();
        let inv = stieltjes_invert(|z| cauchy(&m, z), &grid, &InversionConfig::default()).unwrap();
        assert!((inv.renormalization - 1.0).abs() < 1e-2);
        for x in [0.5f64, 1.0, 2.0, 3.0, 3.5] {
            let exact = ((4.0 - x) * x).sqrt() / (2.0 * std::f64::consts::PI * x);
            assert!((inv.measure.density(x) - exact).abs() < 1e-3, "{x}");
        }
    }

    #[test]
    fn invert_free_beta_prime() {
        let m = fbp(2.0, 3.0);
        let hi = m.support().1;
        let grid: Vec<f64> = (0..=2000).map(|i| (hi + 0.2) * i as f64 / 2000.0).collect();
        let inv = stieltjes_invert(|z| cauchy(&m, z), &grid, &InversionConfig::default()).unwrap();
        assert!(levy_distance(&inv.measure, &m) < 1e-3);
    }

    #[test]
    fn rejects_non_nevanlinna() {
        let r = stieltjes_invert(|z| Ok(-z.inv()), &[0.0, 1.0], &InversionConfig::default());
        assert!(matches!(r, Err(Error::NonNevanlinna(_))));
    }
}
