//! Dense symmetric linear algebra for the oracle: Haar-orthogonal sampling
//! and eigenvalue solvers.

use fperp::{Error, Result};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// Largest dimension handled by the cyclic Jacobi solver.
pub const JACOBI_MAX: usize = 2000;
/// Dimension up to which [`eigenvalues`] uses Jacobi rotations.
pub const JACOBI_DEFAULT_CUTOFF: usize = 200;

const SYMMETRY_TOL: f64 = 1e-10;
const JACOBI_TOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Reflectors accumulated per GEMM update when forming a Haar matrix.
const WY_BLOCK: usize = 48;

/// Haar-distributed orthogonal matrix: the `Q` factor of an i.i.d. standard
/// Gaussian matrix with column signs fixed so that `R` has a positive
/// diagonal.
///
/// The Householder QR of a Gaussian matrix draws its `k`-th reflector from a
/// fresh Gaussian vector of length `N − k`, independent of the earlier ones,
/// so the reflectors are sampled directly and accumulated in compact WY form
/// `I − V T Vᵀ`, `WY_BLOCK` at a time.
pub fn haar_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<f64> {
    let mut us: Vec<DVector<f64>> = Vec::with_capacity(n.saturating_sub(1));
    let mut taus = Vec::with_capacity(n.saturating_sub(1));
    let mut signs = Vec::with_capacity(n);
    for k in 0..n {
        let mut x = DVector::<f64>::from_fn(n - k, |_, _| StandardNormal.sample(rng));
        let s = if x[0] < 0.0 { -1.0 } else { 1.0 };
        if k + 1 == n {
            signs.push(s);
            break;
        }
        let norm = x.norm();
        // H x = −s‖x‖ e₁, so the diagonal of R has sign −s.
        signs.push(-s);
        x[0] += s * norm;
        let uu = x.norm_squared();
        taus.push(if uu > 0.0 { 2.0 / uu } else { 0.0 });
        us.push(x);
    }
    let mut q = DMatrix::<f64>::from_diagonal(&DVector::from_vec(signs));
    let m = us.len();
    let mut end = m;
    while end > 0 {
        let start = end.saturating_sub(WY_BLOCK);
        let nb = end - start;
        let rows = n - start;
        let mut v = DMatrix::<f64>::zeros(rows, nb);
        for (c, k) in (start..end).enumerate() {
            v.view_mut((k - start, c), (n - k, 1)).copy_from(&us[k]);
        }
        let mut t = DMatrix::<f64>::zeros(nb, nb);
        for i in 0..nb {
            let tau = taus[start + i];
            t[(i, i)] = tau;
            if i > 0 {
                let vi = v.column(i);
                let w = v.columns(0, i).tr_mul(&vi);
                let col = t.view((0, 0), (i, i)) * w * (-tau);
                t.view_mut((0, i), (i, 1)).copy_from(&col);
            }
        }
        let mut block = q.view_mut((start, start), (rows, rows));
        let mut vtq = DMatrix::<f64>::zeros(nb, rows);
        vtq.gemm(1.0, &v.transpose(), &block, 0.0);
        let tvtq = &t * vtq;
        block.gemm(-1.0, &v, &tvtq, 1.0);
        end = start;
    }
    q
}

/// `Q M Qᵀ` for a fresh Haar-orthogonal `Q`.
pub fn haar_conjugate<R: Rng + ?Sized>(m: &DMatrix<f64>, rng: &mut R) -> Result<DMatrix<f64>> {
    if !m.is_square() {
        return Err(Error::InvalidParams(format!(
            "matrix is {}×{}, not square",
            m.nrows(),
            m.ncols()
        )));
    }
    let q = haar_orthogonal(m.nrows(), rng);
    Ok(conjugate(&q, m))
}

/// `Q M Qᵀ`, symmetrised to remove rounding asymmetry.
pub(crate) fn conjugate(q: &DMatrix<f64>, m: &DMatrix<f64>) -> DMatrix<f64> {
    let qm = q * m;
    let mut out = &qm * q.transpose();
    symmetrize(&mut out);
    out
}

pub(crate) fn symmetrize(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
}

/// Largest `|M_ij − M_ji|` relative to `max |M_ij|`.
pub fn symmetry_defect(m: &DMatrix<f64>) -> f64 {
    let scale = m.amax().max(f64::MIN_POSITIVE);
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst / scale
}

fn check_symmetric(m: &DMatrix<f64>) -> Result<()> {
    if !m.is_square() {
        return Err(Error::InvalidParams(format!(
            "matrix is {}×{}, not square",
            m.nrows(),
            m.ncols()
        )));
    }
    let d = symmetry_defect(m);
    if d > SYMMETRY_TOL {
        return Err(Error::NotSymmetric(d));
    }
    Ok(())
}

/// Sorted eigenvalues by cyclic Jacobi rotations, iterated until the
/// off-diagonal Frobenius norm is below `1e-12·‖M‖_F`.
pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    check_symmetric(m)?;
    let n = m.nrows();
    if n > JACOBI_MAX {
        return Err(Error::TooLarge(n));
    }
    let mut a: Vec<f64> = m.transpose().as_slice().to_vec();
    let idx = |i: usize, j: usize| i * n + j;
    let norm = a.iter().map(|v| v * v).sum::<f64>().sqrt();
    let target = JACOBI_TOL * norm;
    let off = |a: &[f64]| {
        let mut s = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                s += 2.0 * a[idx(i, j)] * a[idx(i, j)];
            }
        }
        s.sqrt()
    };
    let mut residual = off(&a);
    let mut sweeps = 0;
    while residual > target {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence {
                iterations: sweeps,
                residual,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[idx(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[idx(q, q)] - a[idx(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[idx(k, p)];
                    let akq = a[idx(k, q)];
                    a[idx(k, p)] = c * akp - s * akq;
                    a[idx(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[idx(p, k)];
                    let aqk = a[idx(q, k)];
                    a[idx(p, k)] = c * apk - s * aqk;
                    a[idx(q, k)] = s * apk + c * aqk;
                }
                a[idx(p, q)] = 0.0;
                a[idx(q, p)] = 0.0;
            }
        }
        residual = off(&a);
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[idx(i, i)]).collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Sorted eigenvalues by Householder tridiagonalisation and implicit QR.
pub fn householder_eigenvalues(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    check_symmetric(m)?;
    let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    if ev.iter().any(|v| !v.is_finite()) {
        return Err(Error::NoConvergence {
            iterations: 0,
            residual: f64::NAN,
        });
    }
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Jacobi rotations up to [`JACOBI_DEFAULT_CUTOFF`], Householder/QR above.
pub fn eigenvalues(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    if m.nrows() <= JACOBI_DEFAULT_CUTOFF {
        symmetric_eigenvalues(m)
    } else {
        householder_eigenvalues(m)
    }
}
