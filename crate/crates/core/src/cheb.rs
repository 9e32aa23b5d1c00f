//! Chebyshev interpolation at first-kind points.

use std::f64::consts::PI;

/// Interpolant on `[a, b]` stored as Chebyshev coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Cheb {
    pub a: f64,
    pub b: f64,
    pub coeffs: Vec<f64>,
}

/// First-kind Chebyshev points on `[a, b]`, in increasing order.
pub fn points(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|j| {
            let t = -((j as f64 + 0.5) * PI / n as f64).cos();
            0.5 * (a + b) + 0.5 * (b - a) * t
        })
        .collect()
}

impl Cheb {
    /// Builds the interpolant from values at [`points`]`(a, b, values.len())`.
    pub fn from_values(a: f64, b: f64, values: &[f64]) -> Self {
        let n = values.len();
        let mut coeffs = vec![0.0; n];
        for (k, c) in coeffs.iter_mut().enumerate() {
            let mut s = 0.0;
            for (j, v) in values.iter().enumerate() {
                // points() are reversed relative to cos ordering, hence the sign.
                let th = (j as f64 + 0.5) * PI / n as f64;
                let sign = if k % 2 == 1 { -1.0 } else { 1.0 };
                s += v * sign * (k as f64 * th).cos();
            }
            *c = s * 2.0 / n as f64;
        }
        if n > 0 {
            coeffs[0] *= 0.5;
        }
        Cheb { a, b, coeffs }
    }

    pub fn from_fn(a: f64, b: f64, n: usize, f: impl Fn(f64) -> f64) -> Self {
        let v: Vec<f64> = points(a, b, n).into_iter().map(f).collect();
        Self::from_values(a, b, &v)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let t = (2.0 * x - self.a - self.b) / (self.b - self.a);
        let (mut b1, mut b2) = (0.0, 0.0);
        for &c in self.coeffs.iter().skip(1).rev() {
            let b0 = 2.0 * t * b1 - b2 + c;
            b2 = b1;
            b1 = b0;
        }
        t * b1 - b2 + self.coeffs.first().copied().unwrap_or(0.0)
    }

    /// Values at the interpolation points (the inverse of [`Cheb::from_values`]).
    pub fn values(&self) -> Vec<f64> {
        points(self.a, self.b, self.coeffs.len())
            .into_iter()
            .map(|x| self.eval(x))
            .collect()
    }

    /// Magnitude of the trailing coefficients relative to the largest one.
    pub fn tail_ratio(&self) -> f64 {
        let n = self.coeffs.len();
        let max = self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        if n < 4 || max == 0.0 {
            return 0.0;
        }
        self.coeffs[n - 3..].iter().fold(0.0f64, |m, c| m.max(c.abs())) / max
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_smooth_function() {
        let c = Cheb::from_fn(0.5, 3.0, 30, |x| (x * 1.3).sin() / x);
        for x in [0.5, 0.77, 1.9, 3.0] {
            assert!((c.eval(x) - (x * 1.3).sin() / x).abs() < 1e-12);
        }
        assert!(c.tail_ratio() < 1e-12);
    }

    #[test]
    fn values_round_trip() {
        let v = [1.0, -2.0, 0.5, 4.0, 3.0];
        let c = Cheb::from_values(-1.0, 2.0, &v);
        for (a, b) in c.values().iter().zip(v) {
            assert!((a - b).abs() < 1e-13);
        }
    }
}
