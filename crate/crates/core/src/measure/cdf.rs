use super::{Measure, Panel, SupportKind, Tail};
use crate::quad;

const PIECES: usize = 256;
const GL: usize = 10;

struct PanelTable {
    panel: Panel,
    s0: f64,
    h: f64,
    /// Mass accumulated in the substitution variable at piece boundaries.
    cum: Vec<f64>,
    gx: Vec<f64>,
    gw: Vec<f64>,
}

impl PanelTable {
    fn new(panel: &Panel) -> Self {
        let (gx, gw) = quad::gauss_legendre(GL);
        let (s0, s1) = panel.s_range();
        let h = (s1 - s0) / PIECES as f64;
        let mut t = PanelTable {
            panel: panel.clone(),
            s0,
            h,
            cum: vec![0.0; PIECES + 1],
            gx,
            gw,
        };
        for k in 0..PIECES {
            let a = s0 + k as f64 * h;
            t.cum[k + 1] = t.cum[k] + t.piece(a, a + h);
        }
        t
    }

    fn piece(&self, a: f64, b: f64) -> f64 {
        let c = 0.5 * (a + b);
        let r = 0.5 * (b - a);
        let mut s = 0.0;
        for (x, w) in self.gx.iter().zip(&self.gw) {
            let (xx, j) = self.panel.x_of_s(c + r * x);
            s += w * self.panel.density_at(xx) * j;
        }
        s * r
    }

    fn total(&self) -> f64 {
        self.cum[PIECES]
    }

    /// Mass in the substitution variable from the start up to `s`.
    fn upto_s(&self, s: f64) -> f64 {
        let k = (((s - self.s0) / self.h).floor().max(0.0) as usize).min(PIECES - 1);
        let a = self.s0 + k as f64 * self.h;
        self.cum[k] + self.piece(a, s.max(a))
    }

    /// Mass of the panel in `(-∞, x]`.
    fn upto_x(&self, x: f64) -> f64 {
        let p = &self.panel;
        if x <= p.a {
            return 0.0;
        }
        if x >= p.b {
            return self.total();
        }
        let s = p.s_of_x(x);
        if p.reversed() {
            self.total() - self.upto_s(s)
        } else {
            self.upto_s(s)
        }
    }
}

/// Tabulated distribution function for fast CDF and quantile evaluation.
pub struct CdfTable {
    atoms: Vec<(f64, f64)>,
    atom_cum: Vec<f64>,
    panels: Vec<PanelTable>,
    tail: Option<Tail>,
    symmetric: bool,
    lo: f64,
    hi: f64,
}

impl CdfTable {
    pub fn build(m: &Measure) -> Self {
        let (lo, hi) = m.support();
        CdfTable {
            atoms: m.atoms.clone(),
            atom_cum: m.atom_cum.clone(),
            panels: m.panels.iter().map(PanelTable::new).collect(),
            tail: m.tail,
            symmetric: m.kind == SupportKind::Symmetric,
            lo,
            hi,
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let mut f = 0.0;
        let k = self.atoms.partition_point(|a| a.0 <= x);
        if k > 0 {
            f += self.atom_cum[k - 1];
        }
        for p in &self.panels {
            f += p.upto_x(x);
        }
        if let Some(t) = self.tail {
            if x >= t.t0 {
                f += t.mass() - t.c * x.powf(-t.alpha);
            }
            if self.symmetric {
                f += t.c * x.min(-t.t0).abs().powf(-t.alpha);
            }
        }
        f.clamp(0.0, 1.0)
    }

    /// `inf{x : F(x) ≥ q}`.
    pub fn quantile(&self, q: f64) -> f64 {
        let q = q.clamp(0.0, 1.0);
        let (mut a, mut b) = (self.lo, self.hi);
        if let Some(t) = self.tail {
            let left = if self.symmetric { t.mass() } else { 0.0 };
            if self.symmetric && q < left {
                return -(t.c / q.max(1e-300)).powf(1.0 / t.alpha);
            }
            let tail_start = 1.0 - t.mass();
            if q > tail_start {
                return (t.c / (1.0 - q).max(1e-300)).powf(1.0 / t.alpha);
            }
            b = t.t0;
            if self.symmetric {
                a = -t.t0;
            }
        }
        if self.cdf(a) >= q {
            return a;
        }
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            if self.cdf(m) >= q {
                b = m;
            } else {
                a = m;
            }
        }
        b
    }
}

#[cfg(test)]
mod tests {
    use crate::measure::builtin_law;

    #[test]
    fn mp_cdf_and_quantiles() {
        let m = builtin_law("marchenko_pastur", &[("lambda", 1.0)]).unwrap();
        assert!((m.cdf(4.0) - 1.0).abs() < 1e-12);
        assert_eq!(m.cdf(-1.0), 0.0);
        // MP(1) puts mass 1/2 + 1/π on [0, 2].
        let f2 = 0.5 + 1.0 / std::f64::consts::PI;
        assert!((m.cdf(2.0) - f2).abs() < 1e-10, "{}", m.cdf(2.0));
        let q = m.quantile(f2);
        assert!((q - 2.0).abs() < 1e-9);
    }

    #[test]
    fn quantile_of_atoms() {
        let b = builtin_law("bernoulli", &[("p", 0.3), ("x0", 1.0), ("x1", 5.0)]).unwrap();
        assert_eq!(b.quantile(0.5), 1.0);
        assert_eq!(b.quantile(0.71), 5.0);
    }

    #[test]
    fn heavy_tail_quantile() {
        let m = builtin_law("free_beta_prime", &[("a", 2.0), ("b", 1.0)]).unwrap();
        for q in [0.1, 0.5, 0.9, 0.999] {
            let x = m.quantile(q);
            assert!((m.cdf(x) - q).abs() < 1e-9, "{q} {x} {}", m.cdf(x));
        }
    }
}
