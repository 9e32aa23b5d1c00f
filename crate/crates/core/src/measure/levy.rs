use super::Measure;

const GRID_PER_LAW: usize = 2048;

/// Lévy distance between the distribution functions of `mu` and `nu`,
/// checked on a grid of quantile points of both laws plus their atoms.
pub fn levy_distance(mu: &Measure, nu: &Measure) -> f64 {
    let f = mu.cdf_table();
    let g = nu.cdf_table();
    let mut grid = Vec::with_capacity(2 * GRID_PER_LAW + 4 * (mu.atoms.len() + nu.atoms.len()));
    for m in [mu, nu] {
        let t = m.cdf_table();
        for k in 0..GRID_PER_LAW {
            grid.push(t.quantile((k as f64 + 0.5) / GRID_PER_LAW as f64));
        }
        if m.atoms.len() <= 4 * GRID_PER_LAW {
            for a in &m.atoms {
                let h = 1e-12 * a.0.abs().max(1.0);
                grid.push(a.0);
                grid.push(a.0 - h);
            }
        }
    }
    grid.retain(|x| x.is_finite());
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let fv: Vec<f64> = grid.iter().map(|&x| f.cdf(x)).collect();
    let gv: Vec<f64> = grid.iter().map(|&x| g.cdf(x)).collect();
    let ok = |e: f64| {
        grid.iter().zip(fv.iter().zip(&gv)).all(|(&x, (&fx, &gx))| {
            let tol = 1e-12;
            gx <= f.cdf(x + e) + e + tol
                && gx >= f.cdf(x - e) - e - tol
                && fx <= g.cdf(x + e) + e + tol
                && fx >= g.cdf(x - e) - e - tol
        })
    };
    if ok(0.0) {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..50 {
        let m = 0.5 * (lo + hi);
        if ok(m) {
            hi = m;
        } else {
            lo = m;
        }
        if hi - lo < 1e-9 * hi {
            break;
        }
    }
    hi
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{builtin_law, Push};

    #[test]
    fn identical_laws() {
        let m = builtin_law("marchenko_pastur", &[("lambda", 1.0)]).unwrap();
        assert_eq!(levy_distance(&m, &m), 0.0);
    }

    /// Direct evaluation of the definition on the two step CDFs.
    fn brute_force_dirac(a: f64, b: f64) -> f64 {
        let f = |x: f64| if x >= a { 1.0 } else { 0.0 };
        let g = |x: f64| if x >= b { 1.0 } else { 0.0 };
        let xs: Vec<f64> = (0..4001).map(|i| -2.0 + i as f64 * 0.001).collect();
        let mut e = 0.0;
        while e <= 1.0 {
            if xs
                .iter()
                .all(|&x| f(x - e) - e <= g(x) + 1e-12 && g(x) <= f(x + e) + e + 1e-12)
            {
                return e;
            }
            e += 0.001;
        }
        1.0
    }

    #[test]
    fn diracs() {
        let d = levy_distance(&Measure::point(0.0), &Measure::point(1.0));
        assert!((d - brute_force_dirac(0.0, 1.0)).abs() < 2e-3, "{d}");
        let d = levy_distance(&Measure::point(0.0), &Measure::point(0.3));
        assert!((d - brute_force_dirac(0.0, 0.3)).abs() < 2e-3, "{d}");
    }

    #[test]
    fn small_dilation() {
        let m = builtin_law("marchenko_pastur", &[("lambda", 1.0)]).unwrap();
        let d = m.pushforward(Push::Dilate(1.0 + 1e-6)).unwrap();
        assert!(levy_distance(&m, &d) <= 1e-5);
    }
}
