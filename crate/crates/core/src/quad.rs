//! Adaptive Gauss–Kronrod quadrature and fixed Gauss–Legendre rules.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Values that can be integrated: reals and complex numbers.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// Two real integrands evaluated together.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Pair(pub f64, pub f64);

impl Add for Pair {
    type Output = Pair;
    fn add(self, o: Pair) -> Pair {
        Pair(self.0 + o.0, self.1 + o.1)
    }
}

impl Sub for Pair {
    type Output = Pair;
    fn sub(self, o: Pair) -> Pair {
        Pair(self.0 - o.0, self.1 - o.1)
    }
}

impl Mul<f64> for Pair {
    type Output = Pair;
    fn mul(self, s: f64) -> Pair {
        Pair(self.0 * s, self.1 * s)
    }
}

impl QuadValue for Pair {
    fn zero() -> Self {
        Pair(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.0.abs().max(self.1.abs())
    }
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_2,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874,
    0.032_558_162_307_964_73,
    0.054_755_896_574_351_996,
    0.075_039_674_810_919_95,
    0.093_125_454_583_697_6,
    0.109_387_158_802_297_64,
    0.123_491_976_262_065_85,
    0.134_709_217_311_473_33,
    0.142_775_938_577_060_08,
    0.147_739_104_901_338_5,
    0.149_445_554_002_916_9,
];

// Gauss weights for XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_04,
    0.269_266_719_309_996_35,
    0.295_524_224_714_752_87,
];

fn gk21<T: QuadValue>(f: &mut impl FnMut(f64) -> T, a: f64, b: f64) -> (T, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[10];
    let mut g = T::zero();
    for j in 0..10 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k = k + s * WGK[j];
        if j % 2 == 1 {
            g = g + s * WG[j / 2];
        }
    }
    let k = k * h;
    let g = g * h;
    (k, (k - g).magnitude())
}

struct Piece<T> {
    a: f64,
    b: f64,
    val: T,
    err: f64,
}

impl<T> PartialEq for Piece<T> {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl<T> Eq for Piece<T> {}
impl<T> PartialOrd for Piece<T> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl<T> Ord for Piece<T> {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.total_cmp(&o.err)
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Estimate<T> {
    pub value: T,
    pub error: f64,
    pub evals: usize,
}

/// Tolerances and subdivision cap for [`adaptive`].
#[derive(Debug, Clone, Copy)]
pub struct Tol {
    pub rel: f64,
    pub abs: f64,
    pub max_pieces: usize,
}

impl Default for Tol {
    fn default() -> Self {
        Tol {
            rel: 1e-10,
            abs: 1e-14,
            max_pieces: 4000,
        }
    }
}

impl Tol {
    pub fn new(rel: f64, abs: f64) -> Self {
        Tol {
            rel,
            abs,
            ..Default::default()
        }
    }
}

/// Globally adaptive Gauss–Kronrod (10/21) integration over `[a, b]`, split
/// initially at `breaks` (points strictly inside the interval).
pub fn adaptive_with_breaks<T: QuadValue>(
    mut f: impl FnMut(f64) -> T,
    a: f64,
    b: f64,
    breaks: &[f64],
    tol: Tol,
) -> Estimate<T> {
    let mut heap = BinaryHeap::new();
    let mut pts = vec![a];
    pts.extend(breaks.iter().copied().filter(|&x| x > a && x < b));
    pts.push(b);
    pts.sort_by(f64::total_cmp);
    let mut total = T::zero();
    let mut err = 0.0;
    for w in pts.windows(2) {
        let (v, e) = gk21(&mut f, w[0], w[1]);
        total = total + v;
        err += e;
        heap.push(Piece {
            a: w[0],
            b: w[1],
            val: v,
            err: e,
        });
    }
    let mut evals = 21 * (pts.len() - 1);
    while err > tol.abs.max(tol.rel * total.magnitude()) && heap.len() < tol.max_pieces {
        let p = match heap.pop() {
            Some(p) => p,
            None => break,
        };
        let m = 0.5 * (p.a + p.b);
        if m <= p.a || m >= p.b {
            heap.push(p);
            break;
        }
        let (v1, e1) = gk21(&mut f, p.a, m);
        let (v2, e2) = gk21(&mut f, m, p.b);
        evals += 42;
        total = total - p.val + v1 + v2;
        err += e1 + e2 - p.err;
        heap.push(Piece {
            a: p.a,
            b: m,
            val: v1,
            err: e1,
        });
        heap.push(Piece {
            a: m,
            b: p.b,
            val: v2,
            err: e2,
        });
    }
    // Re-sum to shed accumulated cancellation error.
    let mut value = T::zero();
    let mut error = 0.0;
    for p in heap.iter() {
        value = value + p.val;
        error += p.err;
    }
    Estimate { value, error, evals }
}

pub fn adaptive<T: QuadValue>(f: impl FnMut(f64) -> T, a: f64, b: f64, tol: Tol) -> Estimate<T> {
    adaptive_with_breaks(f, a, b, &[], tol)
}

/// Like [`adaptive`] but fails when the requested tolerance is missed by a
/// wide margin.
pub fn integrate<T: QuadValue>(f: impl FnMut(f64) -> T, a: f64, b: f64, tol: Tol) -> Result<T> {
    let est = adaptive(f, a, b, tol);
    check(est, tol)
}

pub fn check<T: QuadValue>(est: Estimate<T>, tol: Tol) -> Result<T> {
    let target = tol.abs.max(tol.rel * est.value.magnitude());
    if !est.value.magnitude().is_finite() || est.error > 1e3 * target.max(1e-13) {
        return Err(Error::DivergedQuadrature {
            estimate: est.value.magnitude(),
            error: est.error,
        });
    }
    Ok(est.value)
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let v = integrate(|x: f64| x.powi(5) - 3.0 * x * x, -1.0, 2.0, Tol::default()).unwrap();
        let exact = (64.0 - 1.0) / 6.0 - (8.0 + 1.0);
        assert!((v - exact).abs() < 1e-13);
    }

    #[test]
    fn endpoint_singularity() {
        let v = integrate(|x: f64| x.powf(-0.5), 0.0, 1.0, Tol::new(1e-10, 0.0)).unwrap();
        assert!((v - 2.0).abs() < 1e-8);
    }

    #[test]
    fn complex_near_pole() {
        let z = Complex64::new(0.3, 1e-4);
        let v = integrate(|x: f64| (z - x).inv(), 0.0, 1.0, Tol::new(1e-11, 0.0)).unwrap();
        let exact = (z.ln() - (z - 1.0).ln()) * 1.0;
        assert!((v - exact).norm() < 1e-9, "{v} {exact}");
    }

    #[test]
    fn legendre_rule() {
        for n in [1, 2, 5, 16, 40] {
            let (x, w) = gauss_legendre(n);
            let s: f64 = w.iter().sum();
            assert!((s - 2.0).abs() < 1e-13);
            let m2: f64 = x.iter().zip(&w).map(|(x, w)| w * x * x).sum();
            if n >= 2 {
                assert!((m2 - 2.0 / 3.0).abs() < 1e-13);
            }
        }
    }
}
