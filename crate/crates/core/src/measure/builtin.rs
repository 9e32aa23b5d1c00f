use std::f64::consts::PI;

use super::{Measure, Panel, PanelMap, SupportKind, Tail};
use crate::error::{Error, Result};

/// Tail mass left to the analytic descriptor of an unbounded builtin.
const TAIL_CUTOFF_MASS: f64 = 1e-8;

/// Named law with known parameters; carries closed forms where available.
#[derive(Debug, Clone, PartialEq)]
pub enum Builtin {
    MarchenkoPastur { lambda: f64 },
    FreeBetaPrime { a: f64, b: f64 },
    InverseMp,
    FreeGig { lambda: f64, lo: f64, hi: f64 },
    Semicircle { m: f64, sigma: f64 },
    Bernoulli { p: f64, x0: f64, x1: f64 },
    Point { c: f64 },
}

impl Builtin {
    pub fn name(&self) -> &'static str {
        match self {
            Builtin::MarchenkoPastur { .. } => "marchenko_pastur",
            Builtin::FreeBetaPrime { .. } => "free_beta_prime",
            Builtin::InverseMp => "inverse_mp",
            Builtin::FreeGig { .. } => "free_gig",
            Builtin::Semicircle { .. } => "semicircle",
            Builtin::Bernoulli { .. } => "bernoulli",
            Builtin::Point { .. } => "point",
        }
    }

    pub fn params(&self) -> Vec<(&'static str, f64)> {
        match *self {
            Builtin::MarchenkoPastur { lambda } => vec![("lambda", lambda)],
            Builtin::FreeBetaPrime { a, b } => vec![("a", a), ("b", b)],
            Builtin::InverseMp => vec![("lambda", 1.0)],
            Builtin::FreeGig { lambda, .. } => vec![("lambda", lambda)],
            Builtin::Semicircle { m, sigma } => vec![("m", m), ("sigma", sigma)],
            Builtin::Bernoulli { p, x0, x1 } => vec![("p", p), ("x0", x0), ("x1", x1)],
            Builtin::Point { c } => vec![("c", c)],
        }
    }

    /// Closed-form S-transform, where one is known.
    pub fn s_transform(&self, z: f64) -> Option<f64> {
        match *self {
            Builtin::MarchenkoPastur { lambda } => Some(1.0 / (lambda + z)),
            Builtin::FreeBetaPrime { a, b } => Some((b - 1.0 - z) / (a + z)),
            Builtin::Point { c } if c > 0.0 => Some(1.0 / c),
            _ => None,
        }
    }

    /// Closed-form moment transform `ψ(z)` at real `z < 0`, where one is known.
    pub fn psi_closed(&self, z: f64) -> Option<f64> {
        if !(z < 0.0) {
            return None;
        }
        match *self {
            Builtin::FreeBetaPrime { a, b } => {
                let u = (b - 1.0) - (1.0 + a) * z;
                let d = u * u - 4.0 * a * z * (z + 1.0);
                Some(2.0 * a * z / (u + d.sqrt()))
            }
            Builtin::MarchenkoPastur { lambda } => {
                // ψ(z) = w G(w) − 1 with w = 1/z.
                let w = 1.0 / z;
                let d = (w - 1.0 - lambda).powi(2) - 4.0 * lambda;
                let g = (w + 1.0 - lambda + d.sqrt()) / (2.0 * w);
                Some(w * g - 1.0)
            }
            Builtin::InverseMp => {
                // ψ(z) = −z G_{MP(1)}(z) for the reciprocal law.
                let d = (z - 2.0).powi(2) - 4.0;
                let g = (z + d.sqrt()) / (2.0 * z);
                Some(-z * g)
            }
            Builtin::Point { c } => Some(z * c / (1.0 - z * c)),
            _ => None,
        }
    }
}

fn param(params: &[(&str, f64)], key: &str) -> Result<f64> {
    params
        .iter()
        .find(|p| p.0 == key)
        .map(|p| p.1)
        .ok_or_else(|| Error::InvalidParams(format!("missing parameter {key}")))
}

fn param_or(params: &[(&str, f64)], key: &str, default: f64) -> f64 {
    params.iter().find(|p| p.0 == key).map_or(default, |p| p.1)
}

/// Constructs a named law. See [`Builtin`] for the available names.
pub fn builtin_law(name: &str, params: &[(&str, f64)]) -> Result<Measure> {
    let bad = |m: &str| Err(Error::InvalidParams(format!("{name}: {m}")));
    let m =
        match name {
            "marchenko_pastur" | "mp" => {
                let l = param(params, "lambda")?;
                if !(l > 0.0) {
                    return bad("lambda must be positive");
                }
                marchenko_pastur(l)
            }
            "free_beta_prime" | "fbp" => {
                let a = param(params, "a")?;
                let b = param(params, "b")?;
                if !(a > 0.0 && b >= 1.0) {
                    return bad("need a > 0 and b >= 1");
                }
                free_beta_prime(a, b)
            }
            "inverse_mp" => {
                if param_or(params, "lambda", 1.0) != 1.0 {
                    return bad("only lambda = 1 is available");
                }
                inverse_mp()
            }
            "free_gig" | "fgig" => free_gig(param(params, "lambda")?)?,
            "semicircle" => {
                let m = param_or(params, "m", 0.0);
                let s = param_or(params, "sigma", 1.0);
                if !(s > 0.0) {
                    return bad("sigma must be positive");
                }
                semicircle(m, s)
            }
            "bernoulli" => {
                let p = param(params, "p")?;
                let x0 = param_or(params, "x0", 0.0);
                let x1 = param_or(params, "x1", 1.0);
                if !(0.0..=1.0).contains(&p) {
                    return bad("p must lie in [0,1]");
                }
                let kind = if x0.min(x1) >= 0.0 {
                    SupportKind::Nonnegative
                } else if x0 == -x1 && p == 0.5 {
                    SupportKind::Symmetric
                } else {
                    SupportKind::General
                };
                Measure::new_unchecked(vec![(x0, 1.0 - p), (x1, p)], vec![], None, kind)
                    .with_builtin(Builtin::Bernoulli { p, x0, x1 })
            }
            "point" | "dirac" => {
                let c = param(params, "c")?;
                Measure::point(c).with_builtin(Builtin::Point { c })
            }
            _ => return bad("unknown law"),
        };
    m.validate()?;
    Ok(m)
}

fn marchenko_pastur(l: f64) -> Measure {
    let lo = (1.0 - l.sqrt()).powi(2);
    let hi = (1.0 + l.sqrt()).powi(2);
    let dens = move |x: f64| {
        if x > 0.0 {
            ((hi - x).max(0.0) * (x - lo).max(0.0)).sqrt() / (2.0 * PI * x)
        } else {
            0.0
        }
    };
    let atoms = if l < 1.0 { vec![(0.0, 1.0 - l)] } else { vec![] };
    Measure::new_unchecked(
        atoms,
        vec![Panel::func(lo, hi, PanelMap::BothSqrt, dens)],
        None,
        SupportKind::Nonnegative,
    )
    .with_builtin(Builtin::MarchenkoPastur { lambda: l })
}

/// Panels for a density on `[lo, ∞)` with a square-root (or inverse
/// square-root) left edge and a `c·t^{-1/2}` tail.
fn half_line(lo: f64, c: f64, dens: impl Fn(f64) -> f64 + Send + Sync + Clone + 'static) -> (Vec<Panel>, Tail) {
    let mid = lo + lo.max(1.0);
    let t0 = (c / TAIL_CUTOFF_MASS).powi(2);
    let panels = vec![
        Panel::func(lo, mid, PanelMap::LeftSqrt, dens.clone()),
        Panel::func(mid, t0, PanelMap::Log, dens),
    ];
    (panels, Tail { t0, c, alpha: 0.5 })
}

fn free_beta_prime(a: f64, b: f64) -> Measure {
    let atoms = if a < 1.0 { vec![(0.0, 1.0 - a)] } else { vec![] };
    let m = if b > 1.0 {
        let gm = (((a * b).sqrt() - (a + b - 1.0).sqrt()) / (b - 1.0)).powi(2);
        let gp = (((a * b).sqrt() + (a + b - 1.0).sqrt()) / (b - 1.0)).powi(2);
        let dens =
            move |x: f64| (b - 1.0) * ((gp - x).max(0.0) * (x - gm).max(0.0)).sqrt() / (2.0 * PI * x * (1.0 + x));
        Measure::new_unchecked(
            atoms,
            vec![Panel::func(gm, gp, PanelMap::BothSqrt, dens)],
            None,
            SupportKind::Nonnegative,
        )
    } else {
        let lo = (a - 1.0).powi(2) / (4.0 * a);
        let dens = move |x: f64| (4.0 * a * x - (a - 1.0).powi(2)).max(0.0).sqrt() / (2.0 * PI * x * (1.0 + x));
        let (panels, tail) = half_line(lo, 2.0 * a.sqrt() / PI, dens);
        Measure::new_unchecked(atoms, panels, Some(tail), SupportKind::Nonnegative)
    };
    m.with_builtin(Builtin::FreeBetaPrime { a, b })
}

fn inverse_mp() -> Measure {
    let dens = |x: f64| (x - 0.25).max(0.0).sqrt() / (PI * x * x);
    let (panels, tail) = half_line(0.25, 2.0 / PI, dens);
    Measure::new_unchecked(vec![], panels, Some(tail), SupportKind::Nonnegative).with_builtin(Builtin::InverseMp)
}

fn fgig_system(l: f64, a: f64, b: f64) -> [f64; 2] {
    let r = (a * b).sqrt();
    [1.0 - l + r - (a + b) / (2.0 * a * b), 1.0 + l + 1.0 / r - (a + b) / 2.0]
}

/// Support endpoints of the free GIG law by damped Newton from `(0.1, 4.0)`.
pub fn fgig_endpoints(l: f64) -> Result<(f64, f64)> {
    let (mut a, mut b) = (0.1, 4.0);
    let norm = |f: [f64; 2]| f[0].hypot(f[1]);
    for step in 0..200 {
        let f = fgig_system(l, a, b);
        let nf = norm(f);
        if nf < 1e-15 {
            return Ok((a, b));
        }
        let h = 1e-7;
        let fa = fgig_system(l, a * (1.0 + h), b);
        let fb = fgig_system(l, a, b * (1.0 + h));
        let j = [
            [(fa[0] - f[0]) / (a * h), (fb[0] - f[0]) / (b * h)],
            [(fa[1] - f[1]) / (a * h), (fb[1] - f[1]) / (b * h)],
        ];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det == 0.0 || !det.is_finite() {
            return Err(Error::FGIGEndpointSolveFailed(step));
        }
        let da = (f[0] * j[1][1] - f[1] * j[0][1]) / det;
        let db = (j[0][0] * f[1] - j[1][0] * f[0]) / det;
        let mut t = 1.0;
        loop {
            let (na, nb) = (a - t * da, b - t * db);
            if na > 0.0 && nb > na && norm(fgig_system(l, na, nb)) < nf {
                a = na;
                b = nb;
                break;
            }
            t *= 0.5;
            if t < 1e-12 {
                // Newton direction stalled at rounding level.
                if nf < 1e-11 {
                    return Ok((a, b));
                }
                return Err(Error::FGIGEndpointSolveFailed(step));
            }
        }
    }
    if norm(fgig_system(l, a, b)) < 1e-11 {
        Ok((a, b))
    } else {
        Err(Error::FGIGEndpointSolveFailed(200))
    }
}

fn free_gig(l: f64) -> Result<Measure> {
    let (lo, hi) = fgig_endpoints(l)?;
    let r = (lo * hi).sqrt();
    let dens =
        move |x: f64| ((x - lo).max(0.0) * (hi - x).max(0.0)).sqrt() / (2.0 * PI) * (1.0 / x + 1.0 / (r * x * x));
    Ok(Measure::new_unchecked(
        vec![],
        vec![Panel::func(lo, hi, PanelMap::BothSqrt, dens)],
        None,
        SupportKind::Nonnegative,
    )
    .with_builtin(Builtin::FreeGig { lambda: l, lo, hi }))
}

fn semicircle(m: f64, s: f64) -> Measure {
    let dens = move |x: f64| (4.0 * s * s - (x - m).powi(2)).max(0.0).sqrt() / (2.0 * PI * s * s);
    let kind = if m == 0.0 {
        SupportKind::Symmetric
    } else if m - 2.0 * s >= 0.0 {
        SupportKind::Nonnegative
    } else {
        SupportKind::General
    };
    Measure::new_unchecked(
        vec![],
        vec![Panel::func(m - 2.0 * s, m + 2.0 * s, PanelMap::BothSqrt, dens)],
        None,
        kind,
    )
    .with_builtin(Builtin::Semicircle { m, sigma: s })
}
