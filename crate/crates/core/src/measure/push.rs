use super::{Measure, Panel, PanelMap, SupportKind, Tail, TOL};
use crate::error::{Error, Result};

/// Maps used by [`Measure::pushforward`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Push {
    Square,
    Reciprocal,
    Abs,
    Dilate(f64),
    Negate,
}

/// Mass left below the cutoff when a density near zero becomes a tail.
const CUTOFF_MASS: f64 = 1e-8;

fn mirrored(map: PanelMap) -> PanelMap {
    match map {
        PanelMap::LeftSqrt => PanelMap::RightSqrt,
        PanelMap::RightSqrt => PanelMap::LeftSqrt,
        m => m,
    }
}

fn merge_atoms(mut atoms: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(atoms.len());
    for a in atoms {
        match out.last_mut() {
            Some(l) if l.0 == a.0 => l.1 += a.1,
            _ => out.push(a),
        }
    }
    out
}

impl Measure {
    /// Image of the law under `kind`.
    pub fn pushforward(&self, kind: Push) -> Result<Measure> {
        match kind {
            Push::Dilate(s) => self.dilate(s),
            Push::Negate => self.negate(),
            Push::Square => self.fold(|x| x * x, |y| y.sqrt(), |y| 0.5 / y.sqrt(), 2.0),
            Push::Abs => self.fold(f64::abs, |y| y, |_| 1.0, 1.0),
            Push::Reciprocal => self.reciprocal(),
        }
    }

    fn dilate(&self, s: f64) -> Result<Measure> {
        if s == 0.0 {
            return Ok(Measure::point(0.0));
        }
        if s < 0.0 {
            return self.dilate(-s)?.negate();
        }
        let atoms = self.atoms.iter().map(|a| (a.0 * s, a.1)).collect();
        let panels = self
            .panels
            .iter()
            .map(|p| {
                let q = p.clone();
                Panel::func(p.a * s, p.b * s, p.map, move |y| q.density_at(y / s) / s)
            })
            .collect();
        let tail = self.tail.map(|t| Tail {
            t0: t.t0 * s,
            c: t.c * s.powf(t.alpha),
            alpha: t.alpha,
        });
        let mut m = Measure::new_unchecked(atoms, panels, tail, self.kind);
        if let Some(super::Builtin::Point { c }) = self.builtin {
            m = m.with_builtin(super::Builtin::Point { c: c * s });
        }
        Ok(m)
    }

    fn negate(&self) -> Result<Measure> {
        if self.tail.is_some() && self.kind != SupportKind::Symmetric {
            return Err(Error::InvalidParams("left tails are not representable".into()));
        }
        let atoms = self.atoms.iter().map(|a| (-a.0, a.1)).collect();
        let panels = self
            .panels
            .iter()
            .map(|p| {
                if p.map == PanelMap::Log {
                    return Err(Error::InvalidParams("log panel on the negative axis".into()));
                }
                let q = p.clone();
                Ok(Panel::func(-p.b, -p.a, mirrored(p.map), move |y| q.density_at(-y)))
            })
            .collect::<Result<Vec<_>>>()?;
        let kind = match self.kind {
            SupportKind::Symmetric => SupportKind::Symmetric,
            _ => {
                if self.support().1 <= 0.0 {
                    SupportKind::Nonnegative
                } else {
                    SupportKind::General
                }
            }
        };
        Ok(Measure::new_unchecked(atoms, panels, self.tail, kind))
    }

    /// Image under an even map `f` that is increasing on `[0,∞)`, with inverse
    /// `g` there and Jacobian `dg`. `tail_power` is the power of `f` at infinity.
    fn fold(
        &self,
        f: impl Fn(f64) -> f64,
        g: impl Fn(f64) -> f64 + Send + Sync + Copy + 'static,
        dg: impl Fn(f64) -> f64 + Send + Sync + Copy + 'static,
        tail_power: f64,
    ) -> Result<Measure> {
        let atoms = merge_atoms(self.atoms.iter().map(|a| (f(a.0), a.1)).collect());
        // Image intervals on [0,∞), splitting panels that straddle zero.
        let mut cuts = vec![];
        let mut logs = vec![];
        for p in &self.panels {
            let (lo, hi) = if p.a >= 0.0 {
                (f(p.a), f(p.b))
            } else if p.b <= 0.0 {
                (f(p.b), f(p.a))
            } else {
                cuts.push(0.0);
                (0.0, f(p.a).max(f(p.b)))
            };
            cuts.push(lo);
            cuts.push(hi);
            if p.a < 0.0 && p.b > 0.0 {
                cuts.push(f(p.a).min(f(p.b)));
            }
            if p.map == PanelMap::Log {
                logs.push((lo, hi));
            }
        }
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let src: Vec<Panel> = self.panels.clone();
        let mut panels = vec![];
        for w in cuts.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let mid = g(0.5 * (lo + hi));
            if !src
                .iter()
                .any(|p| (mid >= p.a && mid <= p.b) || (-mid >= p.a && -mid <= p.b))
            {
                continue;
            }
            let map = if logs.iter().any(|&(a, b)| lo >= a && hi <= b) {
                PanelMap::Log
            } else {
                PanelMap::BothSqrt
            };
            let s = src.clone();
            panels.push(Panel::func(lo, hi, map, move |y| {
                let x = g(y);
                s.iter()
                    .map(|p| p.density_at(x) + if x > 0.0 { p.density_at(-x) } else { 0.0 })
                    .sum::<f64>()
                    * dg(y)
            }));
        }
        let tail = self.tail.map(|t| {
            let sides = if self.kind == SupportKind::Symmetric { 2.0 } else { 1.0 };
            Tail {
                t0: f(t.t0),
                c: sides * t.c,
                alpha: t.alpha / tail_power,
            }
        });
        Ok(Measure::new_unchecked(atoms, panels, tail, SupportKind::Nonnegative))
    }

    fn reciprocal(&self) -> Result<Measure> {
        if self.atom_mass(0.0) > 0.0 {
            return Err(Error::AtomAtZero);
        }
        let atoms = self.atoms.iter().map(|a| (1.0 / a.0, a.1)).collect();
        let mut panels = vec![];
        let mut tail = None;
        for p in &self.panels {
            if p.a < 0.0 && p.b > 0.0 {
                return Err(Error::InvalidParams("reciprocal of a panel straddling zero".into()));
            }
            let q = p.clone();
            let dens = move |y: f64| q.density_at(1.0 / y) / (y * y);
            if p.a > 0.0 {
                let map = if p.map == PanelMap::Log {
                    PanelMap::Log
                } else {
                    mirrored(p.map)
                };
                panels.push(Panel::func(1.0 / p.b, 1.0 / p.a, map, dens));
            } else if p.a == 0.0 {
                // Local power law d(x) ≈ k x^β near zero becomes the tail.
                let (x1, x2) = (p.b * 1e-10, p.b * 1e-8);
                let (d1, d2) = (p.density_at(x1), p.density_at(x2));
                if !(d1 > 0.0 && d2 > 0.0) {
                    return Err(Error::InvalidParams("cannot resolve density near zero".into()));
                }
                let beta = (d2 / d1).ln() / (x2 / x1).ln();
                let k = d1 / x1.powf(beta);
                let alpha = beta + 1.0;
                if !(alpha > 0.0) {
                    return Err(Error::InvalidParams("density not integrable at zero".into()));
                }
                let c = k / alpha;
                let t0 = (c / CUTOFF_MASS).powf(1.0 / alpha);
                let lo = 1.0 / p.b;
                let mid = 2.0 * lo;
                panels.push(Panel::func(lo, mid, mirrored(p.map), dens.clone()));
                panels.push(Panel::func(mid, t0, PanelMap::Log, dens));
                tail = Some(Tail { t0, c, alpha });
            } else {
                panels.push(Panel::func(1.0 / p.b, 1.0 / p.a, mirrored(p.map), dens));
            }
        }
        if let Some(t) = self.tail {
            if self.kind == SupportKind::Symmetric {
                return Err(Error::InvalidParams("reciprocal of a two-sided tail".into()));
            }
            let tt = t;
            panels.push(Panel::func(0.0, 1.0 / t.t0, PanelMap::LeftSqrt, move |y| {
                if y <= 0.0 {
                    0.0
                } else {
                    tt.c * tt.alpha * y.powf(tt.alpha - 1.0)
                }
            }));
        }
        let kind = if self.kind == SupportKind::Nonnegative {
            SupportKind::Nonnegative
        } else {
            SupportKind::General
        };
        let mut m = Measure::new_unchecked(atoms, panels, tail, kind);
        // The tail descriptor replaces the exact mass below the cutoff.
        let defect = m.total_mass() - 1.0;
        if defect.abs() > 1e-9 {
            if let Some(t) = m.tail.as_mut() {
                let body = 1.0
                    - (m.panels.iter().map(|p| p.integrate(|_| 1.0, TOL).value).sum::<f64>()
                        + m.atoms.iter().map(|a| a.1).sum::<f64>());
                t.c = body * t.t0.powf(t.alpha);
            }
        }
        Ok(m)
    }
}
