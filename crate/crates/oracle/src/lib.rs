//! Random-matrix Monte Carlo oracle. Independent Haar conjugations make
//! finite matrices asymptotically free, so spectra of products and of
//! truncated perpetuity series approximate the free laws computed by
//! `fperp`.

pub mod linalg;

use fperp::mult_power::EdgeOracle;
use fperp::subordination::JointLaw;
use fperp::tails::{geomspace, power_fit};
use fperp::{Error, Measure, Result};
use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use linalg::{eigenvalues, haar_conjugate, haar_orthogonal, householder_eigenvalues, symmetric_eigenvalues};

/// Dimension, trial count, seed and series depth of a Monte Carlo run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatrixEnsembleConfig {
    #[serde(rename = "N")]
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub n_terms: usize,
}

impl MatrixEnsembleConfig {
    pub fn new(n: usize, trials: usize, seed: u64, n_terms: usize) -> Self {
        MatrixEnsembleConfig {
            n,
            trials,
            seed,
            n_terms,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidParams(format!("N = {} must be at least 2", self.n)));
        }
        if self.trials == 0 {
            return Err(Error::InvalidParams("at least one trial is required".into()));
        }
        Ok(())
    }
}

/// Private generator of trial `trial`: the seeded ChaCha20 stream number `trial`.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Diagonal of quantiles of `mu` at `(i − 1/2)/N`, `i = 1..N`.
pub fn sample_spectral_diag(mu: &Measure, n: usize) -> DVector<f64> {
    DVector::from_fn(n, |i, _| mu.quantile((i as f64 + 0.5) / n as f64))
}

/// Stratified joint sample `(a_i, b_i)` of `rho` on a shared diagonal, so
/// that `B = g(A)` holds entry by entry.
pub fn joint_diagonal(rho: &JointLaw, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    let parts = rho.parts();
    if !parts.is_empty() {
        let counts = apportion(&parts.iter().map(|p| p.weight).collect::<Vec<_>>(), n);
        for (p, &k) in parts.iter().zip(&counts) {
            for i in 0..k {
                let x = p.a_law.quantile((i as f64 + 0.5) / k as f64);
                a.push(x);
                b.push(p.b.eval(x));
            }
        }
    }
    let points = rho.points();
    if !points.is_empty() {
        let point_mass: f64 = points.iter().map(|p| p.2).sum();
        let m = n - a.len();
        let mut cum = 0.0;
        let mut j = 0;
        for i in 0..m {
            let u = (i as f64 + 0.5) / m as f64 * point_mass;
            while j + 1 < points.len() && cum + points[j].2 < u {
                cum += points[j].2;
                j += 1;
            }
            a.push(points[j].0);
            b.push(points[j].1);
        }
    }
    if a.len() != n {
        return Err(Error::InvalidMeasure("joint law has no mass to sample".into()));
    }
    Ok((a, b))
}

/// Largest-remainder rounding of `weights · n` to integers summing to `n`.
fn apportion(weights: &[f64], n: usize) -> Vec<usize> {
    let total: f64 = weights.iter().sum();
    let exact: Vec<f64> = weights.iter().map(|w| w / total * n as f64).collect();
    let mut counts: Vec<usize> = exact.iter().map(|x| x.floor() as usize).collect();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&i, &j| (exact[j] - exact[j].floor()).total_cmp(&(exact[i] - exact[i].floor())));
    let mut left = n - counts.iter().sum::<usize>();
    for &i in order.iter().cycle() {
        if left == 0 {
            break;
        }
        counts[i] += 1;
        left -= 1;
    }
    counts
}

/// Pooled eigenvalues of a Monte Carlo run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalSpectrum {
    /// Eigenvalues of every trial, pooled and sorted.
    pub eigenvalues: Vec<f64>,
    /// Largest eigenvalue of each trial, in trial order.
    pub max_per_trial: Vec<f64>,
    /// Whether a critical series was cut at `n_terms`.
    pub truncated: bool,
    /// `τ(A)^{n_terms}`, the geometric factor of the neglected series tail.
    pub neglected_factor: f64,
}

impl EmpiricalSpectrum {
    pub fn measure(&self) -> Measure {
        Measure::empirical(&self.eigenvalues)
    }

    pub fn mean_max(&self) -> f64 {
        self.max_per_trial.iter().sum::<f64>() / self.max_per_trial.len() as f64
    }

    /// `(1/M) Σ λ^p` over the pooled sample.
    pub fn moment(&self, p: i32) -> f64 {
        self.eigenvalues.iter().map(|x| x.powi(p)).sum::<f64>() / self.eigenvalues.len() as f64
    }
}

fn pool(
    cfg: &MatrixEnsembleConfig,
    trial: impl Fn(&mut ChaCha20Rng) -> Result<Vec<f64>> + Sync,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let runs: Vec<Vec<f64>> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| trial(&mut trial_rng(cfg.seed, t)))
        .collect::<Result<_>>()?;
    let max_per_trial = runs.iter().map(|ev| ev.last().copied().unwrap_or(f64::NAN)).collect();
    let mut all: Vec<f64> = runs.into_iter().flatten().collect();
    all.sort_by(f64::total_cmp);
    Ok((all, max_per_trial))
}

/// Spectrum of `Π_n = A₁^{1/2}⋯A_{n−1}^{1/2} A_n A_{n−1}^{1/2}⋯A₁^{1/2}` with
/// `A_k = Q_k D Q_kᵀ`, `D` the stratified diagonal of `mu`.
pub fn mult_power_spectrum(mu: &Measure, n: usize, cfg: &MatrixEnsembleConfig) -> Result<EmpiricalSpectrum> {
    cfg.validate()?;
    if n == 0 {
        return Err(Error::InvalidParams("n must be at least 1".into()));
    }
    if mu.support().0 < 0.0 {
        return Err(Error::InvalidMeasure("the law must live on [0, ∞)".into()));
    }
    let d = sample_spectral_diag(mu, cfg.n);
    let root = d.map(f64::sqrt);
    let (eigenvalues, max_per_trial) = pool(cfg, |rng| {
        let mut x = DMatrix::from_diagonal(&d);
        for _ in 1..n {
            let q = haar_orthogonal(cfg.n, rng);
            x = linalg::conjugate(&q, &x);
            scale_both_sides(&mut x, &root);
        }
        eigenvalues(&x)
    })?;
    Ok(EmpiricalSpectrum {
        eigenvalues,
        max_per_trial,
        truncated: false,
        neglected_factor: 0.0,
    })
}

/// Empirical law of `Π_n^↑` pooled over trials.
pub fn empirical_mult_power(mu: &Measure, n: usize, cfg: &MatrixEnsembleConfig) -> Result<Measure> {
    Ok(mult_power_spectrum(mu, n, cfg)?.measure())
}

/// `X ← diag(s) X diag(s)`.
fn scale_both_sides(x: &mut DMatrix<f64>, s: &DVector<f64>) {
    let n = x.nrows();
    for j in 0..n {
        for i in 0..n {
            x[(i, j)] *= s[i] * s[j];
        }
    }
}

/// Spectrum of the partial sum `Σ_{k<n_terms} A₁^{1/2}⋯A_k^{1/2} B_{k+1}
/// A_k^{1/2}⋯A₁^{1/2}`, evaluated from the innermost term outwards as
/// `X ← B + A^{1/2} Q X Qᵀ A^{1/2}` with fresh Haar `Q` per term.
pub fn perpetuity_spectrum(rho: &JointLaw, cfg: &MatrixEnsembleConfig) -> Result<EmpiricalSpectrum> {
    cfg.validate()?;
    if cfg.n_terms == 0 {
        return Err(Error::InvalidParams("n_terms must be at least 1".into()));
    }
    let tau = rho.tau_a()?;
    if tau > 1.0 + 1e-9 {
        return Err(Error::Supercritical(tau));
    }
    let (a, b) = joint_diagonal(rho, cfg.n)?;
    let root = DVector::from_iterator(cfg.n, a.iter().map(|v| v.sqrt()));
    let bd = DVector::from_vec(b);
    let (eigenvalues, max_per_trial) = pool(cfg, |rng| {
        let mut x = DMatrix::from_diagonal(&bd);
        for _ in 1..cfg.n_terms {
            let q = haar_orthogonal(cfg.n, rng);
            x = linalg::conjugate(&q, &x);
            scale_both_sides(&mut x, &root);
            for i in 0..cfg.n {
                x[(i, i)] += bd[i];
            }
        }
        eigenvalues(&x)
    })?;
    Ok(EmpiricalSpectrum {
        eigenvalues,
        max_per_trial,
        truncated: tau >= 1.0 - 1e-9,
        neglected_factor: tau.min(1.0).powi(cfg.n_terms as i32),
    })
}

/// Empirical law of the truncated perpetuity series pooled over trials.
pub fn empirical_perpetuity(rho: &JointLaw, cfg: &MatrixEnsembleConfig) -> Result<Measure> {
    Ok(perpetuity_spectrum(rho, cfg)?.measure())
}

/// [`EdgeOracle`] backed by [`mult_power_spectrum`].
#[derive(Debug, Clone, Copy)]
pub struct MatrixEdgeOracle {
    pub config: MatrixEnsembleConfig,
}

impl EdgeOracle for MatrixEdgeOracle {
    fn mean_max_eigenvalue(&self, mu: &Measure, n: usize) -> Result<f64> {
        Ok(mult_power_spectrum(mu, n, &self.config)?.mean_max())
    }
}

/// Power-law fit of the empirical tail `P(|X| > t) ≈ C t^{−a}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalTail {
    pub exponent: f64,
    pub constant: f64,
    pub r2: f64,
    /// Geometric mean of `t^e P(|X| > t)` over the window, for the supplied exponent `e`.
    pub constant_at_exponent: f64,
    pub window: (f64, f64),
    /// Samples with `|X| > t_min`.
    pub exceedances: usize,
}

/// Fits `P(|X| > t)` on `points` geometric points of `window`; the second
/// constant is taken at the given exponent.
pub fn empirical_abs_tail(samples: &[f64], window: (f64, f64), points: usize, exponent: f64) -> Result<EmpiricalTail> {
    if !(window.0 > 0.0 && window.1 > window.0) || points < 2 {
        return Err(Error::InvalidParams(format!(
            "tail window {window:?} with {points} points"
        )));
    }
    let mut abs: Vec<f64> = samples.iter().map(|x| x.abs()).collect();
    abs.sort_by(f64::total_cmp);
    let m = abs.len() as f64;
    let exceed = |t: f64| abs.len() - abs.partition_point(|&x| x <= t);
    let ts = geomspace(window.0, window.1, points);
    let ps: Vec<f64> = ts.iter().map(|&t| exceed(t) as f64 / m).collect();
    if ps.contains(&0.0) {
        return Err(Error::InvalidParams(format!("no samples beyond {}", window.1)));
    }
    let (e, c, r2) = power_fit(&ts, &ps);
    let log_c = ts
        .iter()
        .zip(&ps)
        .map(|(t, p)| (p * t.powf(exponent)).ln())
        .sum::<f64>()
        / ts.len() as f64;
    Ok(EmpiricalTail {
        exponent: e,
        constant: c,
        r2,
        constant_at_exponent: log_c.exp(),
        window,
        exceedances: exceed(window.0),
    })
}
