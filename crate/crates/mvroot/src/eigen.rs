//! Small dense complex eigenproblems (m <= 8).
//!
//! Eigenvalues: Householder reduction to Hessenberg form, then single-shift
//! complex QR with Wilkinson shifts and deflation. Eigenvectors are not taken
//! from the QR sweep; each eigenvalue cluster gets the null space of
//! (M - mu I) by reduced row echelon form, which is unique and therefore
//! deterministic even for repeated eigenvalues.

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::rep::CMatrix;

pub const DEFAULT_COND_LIMIT: f64 = 1e12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EigenError {
    #[error("QR iteration did not converge after {0} sweeps")]
    NoConvergence(usize),
    #[error("matrix is singular (condition estimate {0:e})")]
    Singular(f64),
    #[error("matrix must be square and non-empty")]
    Shape,
    #[error("non-finite matrix entry")]
    NonFinite,
}

fn c0() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |a, z| a.max(z.norm()))
}

/// Scale used by all relative thresholds: max(1, max |M_ij|).
pub fn matrix_scale(m: &CMatrix) -> f64 {
    max_abs(m).max(1.0)
}

fn hessenberg(a: &mut CMatrix) {
    let n = a.nrows();
    for k in 0..n.saturating_sub(2) {
        let mut x: Vec<Complex64> = (k + 1..n).map(|i| a[(i, k)]).collect();
        let alpha = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if alpha == 0.0 {
            continue;
        }
        let phase = if x[0].norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x[0] / x[0].norm()
        };
        x[0] += phase * alpha;
        let vn = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vn == 0.0 {
            continue;
        }
        for z in x.iter_mut() {
            *z /= vn;
        }
        // A <- (I - 2vv*) A (I - 2vv*)
        for j in 0..n {
            let mut s = c0();
            for (t, i) in (k + 1..n).enumerate() {
                s += x[t].conj() * a[(i, j)];
            }
            for (t, i) in (k + 1..n).enumerate() {
                a[(i, j)] -= x[t] * s * 2.0;
            }
        }
        for i in 0..n {
            let mut s = c0();
            for (t, j) in (k + 1..n).enumerate() {
                s += a[(i, j)] * x[t];
            }
            for (t, j) in (k + 1..n).enumerate() {
                a[(i, j)] -= s * x[t].conj() * 2.0;
            }
        }
        for i in k + 2..n {
            a[(i, k)] = c0();
        }
    }
}

/// Givens rotation (c real, s complex) zeroing b in (a, b).
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let na = a.norm();
    let nb = b.norm();
    if nb == 0.0 {
        return (1.0, c0());
    }
    if na == 0.0 {
        return (0.0, b.conj() / nb);
    }
    let r = (na * na + nb * nb).sqrt();
    let c = na / r;
    let s = (a / na) * b.conj() / r;
    (c, s)
}

fn wilkinson(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    // eigenvalue of [[a,b],[c,d]] closer to d
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr * 0.25 - det).sqrt();
    let l1 = tr * 0.5 + disc;
    let l2 = tr * 0.5 - disc;
    if (l1 - d).norm() < (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// All eigenvalues, sorted by (Re, Im).
pub fn eigenvalues(m: &CMatrix) -> Result<Vec<Complex64>, EigenError> {
    let n = m.nrows();
    if n == 0 || m.ncols() != n {
        return Err(EigenError::Shape);
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(EigenError::NonFinite);
    }
    let mut h = m.clone();
    hessenberg(&mut h);
    let eps = f64::EPSILON;
    let norm = max_abs(&h);
    let mut out = vec![c0(); n];
    let mut hi = n; // active window is [lo, hi)
    let cap = 200 * n;
    let mut iters = 0;
    let mut since = 0;
    while hi > 0 {
        if hi == 1 {
            out[0] = h[(0, 0)];
            break;
        }
        // find small subdiagonal
        let mut lo = hi - 1;
        while lo > 0 {
            let s = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            let s = if s == 0.0 { norm } else { s };
            if h[(lo, lo - 1)].norm() <= eps * s {
                h[(lo, lo - 1)] = c0();
                break;
            }
            lo -= 1;
        }
        if lo == hi - 1 {
            out[hi - 1] = h[(hi - 1, hi - 1)];
            hi -= 1;
            since = 0;
            continue;
        }
        iters += 1;
        since += 1;
        if iters > cap {
            return Err(EigenError::NoConvergence(iters));
        }
        let k = hi - 1;
        let mut mu = wilkinson(h[(k - 1, k - 1)], h[(k - 1, k)], h[(k, k - 1)], h[(k, k)]);
        if since % 11 == 10 {
            // exceptional shift to break cycles
            mu = h[(k, k)] + Complex64::new(0.75, 0.5) * h[(k, k - 1)].norm().max(eps * norm);
        }
        // QR sweep on the window via Givens rotations, then RQ
        for i in lo..hi {
            h[(i, i)] -= mu;
        }
        let mut rots = Vec::with_capacity(hi - lo);
        for i in lo..hi - 1 {
            let (c, s) = givens(h[(i, i)], h[(i + 1, i)]);
            for j in i..n {
                let x = h[(i, j)];
                let y = h[(i + 1, j)];
                h[(i, j)] = x * c + s * y;
                h[(i + 1, j)] = -s.conj() * x + y * c;
            }
            rots.push((c, s));
        }
        for (t, &(c, s)) in rots.iter().enumerate() {
            let i = lo + t;
            for r in 0..(i + 2).min(n) {
                let x = h[(r, i)];
                let y = h[(r, i + 1)];
                h[(r, i)] = x * c + y * s.conj();
                h[(r, i + 1)] = -x * s + y * c;
            }
        }
        for i in lo..hi {
            h[(i, i)] += mu;
        }
    }
    sort_eigs(&mut out);
    Ok(out)
}

pub fn sort_eigs(v: &mut [Complex64]) {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// Eigenvalues grouped within `tol`; each cluster is (mean, multiplicity).
/// Input order is (Re, Im); clusters come out in the same order.
pub fn cluster(eigs: &[Complex64], tol: f64) -> Vec<(Complex64, usize)> {
    let mut used = vec![false; eigs.len()];
    let mut out = Vec::new();
    for i in 0..eigs.len() {
        if used[i] {
            continue;
        }
        let mut sum = c0();
        let mut k = 0;
        for j in i..eigs.len() {
            if !used[j] && (eigs[j] - eigs[i]).norm() <= tol {
                used[j] = true;
                sum += eigs[j];
                k += 1;
            }
        }
        out.push((sum / k as f64, k));
    }
    out
}

/// Null space of `a` via reduced row echelon form; pivots below `tol` count as
/// zero. Basis vectors are normalized to unit 2-norm.
pub fn null_space(a: &CMatrix, tol: f64) -> Vec<Vec<Complex64>> {
    let (m, n) = (a.nrows(), a.ncols());
    let mut a = a.clone();
    let mut piv = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if r >= m {
            break;
        }
        let (mut best, mut bv) = (r, 0.0);
        for i in r..m {
            let v = a[(i, c)].norm();
            if v > bv {
                best = i;
                bv = v;
            }
        }
        if bv <= tol {
            continue;
        }
        a.swap_rows(r, best);
        let p = a[(r, c)];
        for j in 0..n {
            a[(r, j)] /= p;
        }
        for k in 0..m {
            if k != r {
                let f = a[(k, c)];
                if f != c0() {
                    for j in 0..n {
                        let v = a[(r, j)];
                        a[(k, j)] -= f * v;
                    }
                }
            }
        }
        piv.push(c);
        r += 1;
    }
    let mut out = Vec::new();
    for f in (0..n).filter(|c| !piv.contains(c)) {
        let mut v = vec![c0(); n];
        v[f] = Complex64::new(1.0, 0.0);
        for (k, &c) in piv.iter().enumerate() {
            v[c] = -a[(k, f)];
        }
        let nv = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in v.iter_mut() {
            *z /= nv;
        }
        out.push(v);
    }
    out
}

/// Diagonalization M = T diag(values) T^-1.
#[derive(Debug, Clone)]
pub struct Eigensystem {
    pub values: Vec<Complex64>,
    pub vectors: CMatrix,
    /// 1-norm condition estimate of `vectors`.
    pub condition: f64,
    /// Some cluster holds more than one eigenvalue.
    pub degenerate: bool,
}

/// General (non-quaternionic) eigensystem. Fails with `Singular` when the
/// matrix is defective (not enough eigenvectors) or T is ill conditioned.
pub fn eigensystem(m: &CMatrix) -> Result<Eigensystem, EigenError> {
    eigensystem_with(m, DEFAULT_COND_LIMIT)
}

pub fn eigensystem_with(m: &CMatrix, cond_limit: f64) -> Result<Eigensystem, EigenError> {
    let n = m.nrows();
    let sc = matrix_scale(m);
    let eigs = eigenvalues(m)?;
    let cl = cluster(&eigs, 1e-6 * sc);
    let mut values = Vec::with_capacity(n);
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let degenerate = cl.iter().any(|&(_, k)| k > 1);
    for &(mu, k) in &cl {
        let shifted = m - CMatrix::identity(n, n) * mu;
        let vs = null_space(&shifted, 1e-9 * sc);
        if vs.len() < k {
            return Err(EigenError::Singular(f64::INFINITY));
        }
        for v in vs.into_iter().take(k) {
            values.push(mu);
            cols.push(v);
        }
    }
    if cols.len() != n {
        return Err(EigenError::Singular(f64::INFINITY));
    }
    let vectors = CMatrix::from_fn(n, n, |i, j| cols[j][i]);
    let condition = condition_number(&vectors);
    if condition > cond_limit {
        return Err(EigenError::Singular(condition));
    }
    Ok(Eigensystem {
        values,
        vectors,
        condition,
        degenerate,
    })
}

fn norm1(m: &CMatrix) -> f64 {
    (0..m.ncols())
        .map(|j| (0..m.nrows()).map(|i| m[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// ||M||_1 ||M^-1||_1, infinite when the LU factorization breaks down.
pub fn condition_number(m: &CMatrix) -> f64 {
    match m.clone().try_inverse() {
        Some(inv) if inv.iter().all(|z| z.re.is_finite() && z.im.is_finite()) => {
            norm1(m) * norm1(&inv)
        }
        _ => f64::INFINITY,
    }
}

/// Inverse with a condition check.
pub fn invert(m: &CMatrix) -> Result<CMatrix, EigenError> {
    invert_with(m, DEFAULT_COND_LIMIT)
}

pub fn invert_with(m: &CMatrix, cond_limit: f64) -> Result<CMatrix, EigenError> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return Err(EigenError::Shape);
    }
    let inv = m.clone().try_inverse().ok_or(EigenError::Singular(f64::INFINITY))?;
    let cond = norm1(m) * norm1(&inv);
    if !cond.is_finite() || cond > cond_limit {
        return Err(EigenError::Singular(cond));
    }
    Ok(inv)
}

/// Diagonal matrix from complex entries.
pub fn diag(v: &[Complex64]) -> CMatrix {
    DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol)
    }

    #[test]
    fn diagonal_input() {
        let m = diag(&[c(4., 0.), c(2., 0.)]);
        let es = eigensystem(&m).unwrap();
        assert!(close(&es.values, &[c(2., 0.), c(4., 0.)], 1e-14));
        // permutation
        assert_eq!(es.vectors[(1, 0)].norm(), 1.0);
        assert_eq!(es.vectors[(0, 1)].norm(), 1.0);
    }

    #[test]
    fn companion_matrix() {
        // x^3 - 6x^2 + 11x - 6 = (x-1)(x-2)(x-3)
        let m = CMatrix::from_row_slice(
            3,
            3,
            &[c(6., 0.), c(-11., 0.), c(6., 0.), c(1., 0.), c(0., 0.), c(0., 0.), c(0., 0.), c(1., 0.), c(0., 0.)],
        );
        let e = eigenvalues(&m).unwrap();
        assert!(close(&e, &[c(1., 0.), c(2., 0.), c(3., 0.)], 1e-10));
    }

    #[test]
    fn rotation_is_complex() {
        let m = CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(-1., 0.), c(1., 0.), c(0., 0.)]);
        let e = eigenvalues(&m).unwrap();
        assert!(close(&e, &[c(0., -1.), c(0., 1.)], 1e-14));
    }

    #[test]
    fn reconstruction_random() {
        let mut seed = 7u64;
        let mut rnd = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        for n in 1..=8 {
            for _ in 0..20 {
                let m = CMatrix::from_fn(n, n, |_, _| c(rnd(), rnd()));
                let es = eigensystem(&m).unwrap();
                let t = &es.vectors;
                let rec = t * diag(&es.values) * invert(t).unwrap();
                assert!((rec - &m).norm() < 1e-8, "n={n}");
            }
        }
    }

    #[test]
    fn jordan_block_is_defective() {
        let m = CMatrix::from_row_slice(2, 2, &[c(1., 1.), c(1., 0.), c(0., 0.), c(1., 1.)]);
        assert!(matches!(eigensystem(&m), Err(EigenError::Singular(_))));
    }

    #[test]
    fn repeated_but_diagonalizable() {
        let m = diag(&[c(2., 0.), c(-1., 0.), c(2., 0.)]);
        let es = eigensystem(&m).unwrap();
        assert!(es.degenerate);
        assert_eq!(es.values, vec![c(-1., 0.), c(2., 0.), c(2., 0.)]);
    }

    #[test]
    fn inversion() {
        let id = CMatrix::identity(3, 3);
        assert_eq!(invert(&id).unwrap(), id);
        let p = CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]);
        assert_eq!(invert(&p).unwrap(), p);
        let s = CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(1., 0.), c(1., 0.), c(1., 0.)]);
        assert!(invert(&s).is_err());
    }

    #[test]
    fn null_space_of_zero() {
        let z = CMatrix::zeros(2, 2);
        let v = null_space(&z, 1e-12);
        assert_eq!(v.len(), 2);
        assert_eq!(v[0], vec![c(1., 0.), c(0., 0.)]);
    }
}
