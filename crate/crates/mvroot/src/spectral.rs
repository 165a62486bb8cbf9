//! Spectral square roots: B = T diag(+-sqrt(lambda)) T^-1 mapped back to a
//! multivector, for every admissible sign pattern.
//!
//! Eigenvalues are computed once per input. Block-diagonal classes (2R, 2H)
//! are decomposed block by block. In quaternionic classes eigenvectors come in
//! pairs (v, J conj(v)) that must carry the same sign, otherwise the result is
//! not a real multivector.

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{max_diff, Blade, Multivector, Signature};
use crate::eigen::{self, cluster, null_space, sort_eigs};
use crate::rep::{CMatrix, MvDecomposition, Representation};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SqrtConfig {
    /// Accept a root when max|B^2 - A| <= root_tol (1 + max|A|).
    pub root_tol: f64,
    /// Reject when max|Im b_J| > imag_tol (1 + max|b|).
    pub imag_tol: f64,
    /// Step for the perturbation fallback.
    pub perturb_eps: f64,
    /// Eigenvector matrices with a larger condition estimate count as singular.
    pub cond_limit: f64,
}

impl Default for SqrtConfig {
    fn default() -> Self {
        SqrtConfig {
            root_tol: 1e-8,
            imag_tol: 1e-9,
            perturb_eps: 1e-6,
            cond_limit: eigen::DEFAULT_COND_LIMIT,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RootStatus {
    Accepted,
    RejectedComplex,
    RejectedResidual,
    /// The perturbation limit did not settle for this pattern.
    DegenerateSkipped,
    /// Accepted, but equal to an earlier accepted root.
    Duplicate,
}

#[derive(Debug, Clone, Serialize)]
pub struct RootEntry {
    /// One sign per diagonal position of the representation matrix.
    pub pattern: Vec<i8>,
    pub label: String,
    /// Real part of the candidate (the root itself when accepted).
    pub root: Multivector,
    /// max|B^2 - A|.
    pub residual: f64,
    /// Largest imaginary coefficient discarded.
    pub max_imag: f64,
    pub status: RootStatus,
}

#[derive(Debug, Clone, Serialize)]
pub struct Diagnostics {
    pub method: String,
    pub eigenvalues: Vec<Complex64>,
    pub t_condition: Option<f64>,
    /// Blade whose coefficient was perturbed, if any.
    pub perturbed_blade: Option<String>,
    pub perturb_eps: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RootReport {
    pub input: Multivector,
    pub entries: Vec<RootEntry>,
    pub diagnostics: Diagnostics,
}

impl RootReport {
    pub fn accepted(&self) -> Vec<&Multivector> {
        self.entries
            .iter()
            .filter(|e| e.status == RootStatus::Accepted)
            .map(|e| &e.root)
            .collect()
    }

    pub fn accepted_entries(&self) -> impl Iterator<Item = &RootEntry> {
        self.entries.iter().filter(|e| e.status == RootStatus::Accepted)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("result is not a real multivector (imaginary part {0:e})")]
    NonReal(f64),
    #[error("matrix could not be diagonalized, even after perturbation")]
    Undiagonalizable,
}

pub fn pattern_label(p: &[i8]) -> String {
    let mut s = String::from("(");
    for &x in p {
        s.push(if x > 0 { '+' } else { '-' });
    }
    s.push(')');
    s
}

#[inline]
fn psqrt(z: Complex64) -> Complex64 {
    // principal branch, sqrt(-x) = +i sqrt(x) also when Im is -0.0
    let z = if z.im == 0.0 { Complex64::new(z.re, 0.0) } else { z };
    z.sqrt()
}

/// Diagonalization of a representation matrix, arranged so that quaternionic
/// partners sit next to each other.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub values: Vec<Complex64>,
    pub t: CMatrix,
    pub t_inv: CMatrix,
    pub condition: f64,
    pub quaternionic: bool,
}

fn j_conj(v: &[Complex64]) -> Vec<Complex64> {
    // J conj(v), J = I (x) [[0,1],[-1,0]]
    let mut w = vec![Complex64::new(0.0, 0.0); v.len()];
    for k in 0..v.len() / 2 {
        w[2 * k] = v[2 * k + 1].conj();
        w[2 * k + 1] = -v[2 * k].conj();
    }
    w
}

fn vdot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn vnorm(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

type BlockEig = (Vec<Complex64>, Vec<Vec<Complex64>>);

fn eig_block(m: &CMatrix, quat: bool) -> Option<BlockEig> {
    let n = m.nrows();
    let sc = eigen::matrix_scale(m);
    let mut lam = eigen::eigenvalues(m).ok()?;
    sort_eigs(&mut lam);
    let mut cl = cluster(&lam, 1e-6 * sc);
    // conjugate partners differ in Re only by rounding; order them by Im
    cl.sort_by(|a, b| {
        let ra = (a.0.re / sc * 1e9).round();
        let rb = (b.0.re / sc * 1e9).round();
        ra.total_cmp(&rb).then(a.0.im.total_cmp(&b.0.im))
    });
    let mut vals = Vec::with_capacity(n);
    let mut vecs: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let id = CMatrix::identity(n, n);
    for &(mu, k) in &cl {
        if quat && mu.im < -1e-7 * sc {
            continue;
        }
        let v = null_space(&(m - &id * mu), 1e-9 * sc);
        if v.len() < k {
            return None;
        }
        if !quat {
            for x in v {
                vals.push(mu);
                vecs.push(x);
            }
        } else if mu.im.abs() > 1e-7 * sc {
            for x in v {
                vals.push(mu);
                vals.push(mu.conj());
                let jx = j_conj(&x);
                vecs.push(x);
                vecs.push(jx);
            }
        } else {
            let mut s: Vec<Vec<Complex64>> = Vec::new();
            for x in v {
                let mut w = x.clone();
                for b in &s {
                    let d = vdot(b, &w);
                    for (wi, bi) in w.iter_mut().zip(b) {
                        *wi -= d * bi;
                    }
                }
                let nw = vnorm(&w);
                if nw < 1e-6 {
                    continue;
                }
                for wi in w.iter_mut() {
                    *wi /= nw;
                }
                let jw = j_conj(&w);
                s.push(w);
                s.push(jw);
            }
            for x in s {
                vals.push(mu);
                vecs.push(x);
            }
        }
    }
    if vals.len() != n {
        return None;
    }
    Some((vals, vecs))
}

/// Eigen-decompose a representation matrix; None when defective or T is
/// too ill conditioned.
pub fn spectrum(rep: &Representation, mat: &CMatrix, cond_limit: f64) -> Option<Spectrum> {
    let m = rep.dim();
    let quat = rep.is_quaternionic();
    let mut values = Vec::with_capacity(m);
    let mut t = CMatrix::zeros(m, m);
    for r in rep.blocks() {
        let sub = mat.view((r.start, r.start), (r.len(), r.len())).into_owned();
        let (vals, vecs) = eig_block(&sub, quat)?;
        for (j, v) in vecs.iter().enumerate() {
            for (i, z) in v.iter().enumerate() {
                t[(r.start + i, r.start + j)] = *z;
            }
        }
        values.extend(vals);
    }
    let t_inv = eigen::invert_with(&t, cond_limit).ok()?;
    let condition = eigen::condition_number(&t);
    Some(Spectrum {
        values,
        t,
        t_inv,
        condition,
        quaternionic: quat,
    })
}

impl Spectrum {
    /// T diag(d) T^-1.
    pub fn assemble(&self, d: &[Complex64]) -> CMatrix {
        let mut td = self.t.clone();
        for (j, &x) in d.iter().enumerate() {
            for i in 0..td.nrows() {
                td[(i, j)] *= x;
            }
        }
        td * &self.t_inv
    }
}

/// Sign patterns up to global negation: first slot fixed to +, the rest in
/// binary counting order (most significant slot first). Quaternionic slots
/// cover two diagonal positions.
pub fn allowed_sign_patterns(rep: &Representation) -> Vec<Vec<i8>> {
    let m = rep.dim();
    let quat = rep.is_quaternionic();
    let slots = if quat { m / 2 } else { m };
    let mut out = Vec::with_capacity(1 << (slots - 1));
    for bits in 0..1usize << (slots - 1) {
        let mut s = vec![1i8];
        for k in 0..slots - 1 {
            s.push(if bits >> (slots - 2 - k) & 1 == 1 { -1 } else { 1 });
        }
        if quat {
            s = s.iter().flat_map(|&x| [x, x]).collect();
        }
        out.push(s);
    }
    out
}

/// Same set with the negated patterns included.
pub fn all_sign_patterns(rep: &Representation) -> Vec<Vec<i8>> {
    allowed_sign_patterns(rep)
        .into_iter()
        .flat_map(|p| {
            let n: Vec<i8> = p.iter().map(|x| -x).collect();
            [p, n]
        })
        .collect()
}

struct Candidate {
    pattern: Vec<i8>,
    dec: MvDecomposition,
}

fn candidates(
    rep: &Representation,
    a: &Multivector,
    cfg: &SqrtConfig,
) -> Option<(Spectrum, Vec<Candidate>)> {
    let sp = spectrum(rep, &rep.mv_to_matrix(a), cfg.cond_limit)?;
    // principal branch in every slot: a negative real eigenvalue of a
    // quaternionic pair gives +i|.| twice, a non-real candidate. Its real
    // roots form a sphere (sqrt(-c) in H), none of them spectral.
    let roots: Vec<Complex64> = sp.values.iter().map(|&z| psqrt(z)).collect();
    let out = allowed_sign_patterns(rep)
        .into_iter()
        .map(|p| {
            let d: Vec<Complex64> = roots.iter().zip(&p).map(|(r, &s)| r * s as f64).collect();
            let dec = rep.matrix_to_mv(&sp.assemble(&d)).expect("dimension");
            Candidate { pattern: p, dec }
        })
        .collect();
    Some((sp, out))
}

fn relative_residual_ok(a: &Multivector, b: &Multivector, tol: f64) -> (bool, f64) {
    let r = max_diff(&b.square(), a);
    (r <= tol * (1.0 + a.max_abs()), r)
}

fn entry(
    a: &Multivector,
    pattern: Vec<i8>,
    root: Multivector,
    max_imag: f64,
    imag_limit: f64,
    tol: f64,
) -> RootEntry {
    let (ok, residual) = relative_residual_ok(a, &root, tol);
    let status = if max_imag > imag_limit * (1.0 + root.max_abs()) {
        RootStatus::RejectedComplex
    } else if !ok {
        RootStatus::RejectedResidual
    } else {
        RootStatus::Accepted
    };
    RootEntry {
        label: pattern_label(&pattern),
        pattern,
        root,
        residual,
        max_imag,
        status,
    }
}

fn negated(e: &RootEntry, a: &Multivector) -> RootEntry {
    let root = -&e.root;
    let pattern: Vec<i8> = e.pattern.iter().map(|x| -x).collect();
    RootEntry {
        label: pattern_label(&pattern),
        pattern,
        residual: max_diff(&root.square(), a),
        root,
        max_imag: e.max_imag,
        status: e.status,
    }
}

/// Mark accepted roots that repeat an earlier accepted one.
fn mark_duplicates(entries: &mut [RootEntry]) {
    let mut seen: Vec<Multivector> = Vec::new();
    for e in entries.iter_mut() {
        if e.status != RootStatus::Accepted {
            continue;
        }
        let dup = seen
            .iter()
            .any(|c| max_diff(&e.root, c) < 1e-7 * (1.0 + c.max_abs()));
        if dup {
            e.status = RootStatus::Duplicate;
        } else {
            seen.push(e.root.clone());
        }
    }
}

fn nilpotent(mat: &CMatrix) -> bool {
    let m = mat.nrows();
    let n1 = mat.norm();
    if n1 == 0.0 {
        return true;
    }
    let mut p = mat.clone();
    for _ in 1..m {
        p = &p * mat;
    }
    p.norm() <= 1e-9 * n1.powi(m as i32)
}

/// Newton steps X <- (X + X^-1 A)/2, kept only while the residual shrinks.
fn polish(rep: &Representation, a: &Multivector, b: &Multivector) -> Multivector {
    let am = rep.mv_to_matrix(a);
    let mut best = b.clone();
    let mut best_r = max_diff(&b.square(), a);
    let mut x = rep.mv_to_matrix(b);
    for _ in 0..4 {
        let Some(xi) = x.clone().try_inverse() else { break };
        x = (&x + xi * &am) * Complex64::new(0.5, 0.0);
        let Ok(dec) = rep.matrix_to_mv(&x) else { break };
        let r = max_diff(&dec.mv.square(), a);
        if !(r < best_r) {
            break;
        }
        best = dec.mv;
        best_r = r;
    }
    best
}

fn diag_eigs(rep: &Representation, a: &Multivector) -> Vec<Complex64> {
    eigen::eigenvalues(&rep.mv_to_matrix(a)).unwrap_or_default()
}

/// All spectral square roots of `a`, one report entry per sign pattern.
pub fn spectral_sqrt(a: &Multivector, cfg: &SqrtConfig) -> RootReport {
    let sig = a.sig();
    let rep = Representation::get(sig);
    let mut diag = Diagnostics {
        method: String::new(),
        eigenvalues: Vec::new(),
        t_condition: None,
        perturbed_blade: None,
        perturb_eps: None,
    };
    let report = |entries, diagnostics| RootReport {
        input: a.clone(),
        entries,
        diagnostics,
    };
    if a.is_zero() {
        diag.method = "zero".into();
        return report(Vec::new(), diag);
    }
    let mat = rep.mv_to_matrix(a);
    diag.eigenvalues = diag_eigs(rep, a);
    if nilpotent(&mat) {
        diag.method = "nilpotent".into();
        return report(Vec::new(), diag);
    }
    // idempotents: the roots are +-A themselves
    let one = Multivector::one(sig);
    let scale = 1.0 + a.max_abs();
    if max_diff(&a.square(), a) <= 1e-12 * scale && max_diff(a, &one) > 1e-12 * scale {
        diag.method = "idempotent".into();
        let e = RootEntry {
            pattern: Vec::new(),
            label: "(+idempotent)".into(),
            root: a.clone(),
            residual: max_diff(&a.square(), a),
            max_imag: 0.0,
            status: RootStatus::Accepted,
        };
        let mut n = negated(&e, a);
        n.label = "(-idempotent)".into();
        return report(vec![e, n], diag);
    }

    if let Some((sp, cands)) = candidates(rep, a, cfg) {
        diag.method = "direct".into();
        diag.t_condition = Some(sp.condition);
        let mut entries = Vec::new();
        for c in cands {
            let mi = c.dec.max_imag();
            let e = entry(a, c.pattern, c.dec.mv, mi, cfg.imag_tol, cfg.root_tol);
            let n = negated(&e, a);
            entries.push(e);
            entries.push(n);
        }
        mark_duplicates(&mut entries);
        return report(entries, diag);
    }

    // Defective or ill-conditioned: perturb one coefficient at a time and
    // extrapolate h -> 0 from h, h/2, h/4.
    let eps = cfg.perturb_eps;
    for k in 0..sig.dim() {
        let blade = Blade(k as u32);
        let runs: Option<Vec<_>> = [eps, eps / 2.0, eps / 4.0]
            .iter()
            .map(|&h| {
                let mut ap = a.clone();
                ap.set(blade, ap.get(blade) + h);
                candidates(rep, &ap, cfg)
            })
            .collect();
        let Some(runs) = runs else { continue };
        diag.method = "perturbed".into();
        diag.perturbed_blade = Some(blade.name());
        diag.perturb_eps = Some(eps);
        diag.t_condition = Some(runs[2].0.condition);
        let mut entries = Vec::new();
        for i in 0..runs[0].1.len() {
            let b: Vec<&Multivector> = runs.iter().map(|r| &r.1[i].dec.mv).collect();
            let im = runs.iter().fold(0.0f64, |m, r| m.max(r.1[i].dec.max_imag()));
            let r1 = &b[1].scale(2.0) - b[0];
            let r2 = &b[2].scale(2.0) - b[1];
            let pattern = runs[0].1[i].pattern.clone();
            let settled = max_diff(&r1, &r2) <= 1e-5 * (1.0 + r2.max_abs());
            let e = if !settled {
                RootEntry {
                    label: pattern_label(&pattern),
                    pattern,
                    residual: max_diff(&r2.square(), a),
                    root: r2,
                    max_imag: im,
                    status: RootStatus::DegenerateSkipped,
                }
            } else if im > 1e-4 * (1.0 + r2.max_abs()) {
                RootEntry {
                    label: pattern_label(&pattern),
                    pattern,
                    residual: max_diff(&r2.square(), a),
                    root: r2,
                    max_imag: im,
                    status: RootStatus::RejectedComplex,
                }
            } else {
                let root = polish(rep, a, &r2);
                entry(a, pattern, root, 0.0, cfg.imag_tol, cfg.root_tol)
            };
            let n = negated(&e, a);
            entries.push(e);
            entries.push(n);
        }
        mark_duplicates(&mut entries);
        return report(entries, diag);
    }
    diag.method = "failed".into();
    report(Vec::new(), diag)
}

/// Roots of -1. With `basis`, the eigenbasis of that multivector's matrix is
/// used instead of the standard one, which reaches roots commuting with it.
pub fn sqrt_minus_one(sig: Signature, basis: Option<&Multivector>, cfg: &SqrtConfig) -> RootReport {
    let minus_one = Multivector::scalar(sig, -1.0);
    let Some(g) = basis else {
        return spectral_sqrt(&minus_one, cfg);
    };
    let rep = Representation::get(sig);
    let mut diag = Diagnostics {
        method: "basis".into(),
        eigenvalues: vec![Complex64::new(-1.0, 0.0); rep.dim()],
        t_condition: None,
        perturbed_blade: None,
        perturb_eps: None,
    };
    let mut entries = Vec::new();
    if let Some(sp) = spectrum(rep, &rep.mv_to_matrix(g), cfg.cond_limit) {
        diag.t_condition = Some(sp.condition);
        let i = Complex64::new(0.0, 1.0);
        for p in allowed_sign_patterns(rep) {
            let mut d: Vec<Complex64> = p.iter().map(|&s| i * s as f64).collect();
            // realness needs (z, conj z) on each quaternionic pair
            if sp.quaternionic {
                for k in 0..d.len() / 2 {
                    d[2 * k + 1] = d[2 * k].conj();
                }
            }
            let dec = rep.matrix_to_mv(&sp.assemble(&d)).expect("dimension");
            let mi = dec.max_imag();
            let e = entry(&minus_one, p, dec.mv, mi, cfg.imag_tol, cfg.root_tol);
            let n = negated(&e, &minus_one);
            entries.push(e);
            entries.push(n);
        }
        mark_duplicates(&mut entries);
    } else {
        diag.method = "failed".into();
    }
    RootReport {
        input: minus_one,
        entries,
        diagnostics: diag,
    }
}

fn apply(
    rep: &Representation,
    a: &Multivector,
    f: &dyn Fn(Complex64) -> Complex64,
    cfg: &SqrtConfig,
) -> Option<MvDecomposition> {
    let sp = spectrum(rep, &rep.mv_to_matrix(a), cfg.cond_limit)?;
    let d: Vec<Complex64> = sp.values.iter().map(|&z| f(z)).collect();
    Some(rep.matrix_to_mv(&sp.assemble(&d)).expect("dimension"))
}

/// f(A) = T diag(f(lambda)) T^-1 for single-valued f. Non-diagonalizable
/// inputs are perturbed and extrapolated (second order) back to h = 0.
pub fn mv_function(
    a: &Multivector,
    f: impl Fn(Complex64) -> Complex64,
    cfg: &SqrtConfig,
) -> Result<Multivector, SpectralError> {
    let rep = Representation::get(a.sig());
    let finish = |dec: MvDecomposition| {
        let mi = dec.max_imag();
        if mi > cfg.imag_tol * (1.0 + dec.mv.max_abs()) {
            Err(SpectralError::NonReal(mi))
        } else {
            Ok(dec.mv)
        }
    };
    if let Some(dec) = apply(rep, a, &f, cfg) {
        return finish(dec);
    }
    let eps = cfg.perturb_eps;
    for k in 0..a.sig().dim() {
        let blade = Blade(k as u32);
        let runs: Option<Vec<MvDecomposition>> = [eps, eps / 2.0, eps / 4.0]
            .iter()
            .map(|&h| {
                let mut ap = a.clone();
                ap.set(blade, ap.get(blade) + h);
                apply(rep, &ap, &f, cfg)
            })
            .collect();
        let Some(runs) = runs else { continue };
        // (8 B(h/4) - 6 B(h/2) + B(h)) / 3 cancels the O(h) and O(h^2) terms
        let mut mv = Multivector::zero(a.sig());
        for (j, w) in [1.0 / 3.0, -2.0, 8.0 / 3.0].iter().enumerate() {
            mv = &mv + &runs[j].mv.scale(*w);
        }
        let im = runs.iter().fold(0.0f64, |m, r| m.max(r.max_imag()));
        return finish(MvDecomposition {
            imag: vec![im],
            mv,
        });
    }
    Err(SpectralError::Undiagonalizable)
}

pub fn mv_exp(a: &Multivector, cfg: &SqrtConfig) -> Result<Multivector, SpectralError> {
    mv_function(a, |z| z.exp(), cfg)
}

/// Whether `r` commutes with everything that commutes with `a`. Roots of `a`
/// passing this are polynomials in `a` ("primary"), hence unique for their
/// sign choice; the others come in continuous families whenever an eigenvalue
/// is repeated, and two methods may legitimately pick different members.
pub fn is_primary(a: &Multivector, r: &Multivector, tol: f64) -> bool {
    let sig = a.sig();
    let d = sig.dim();
    let mut l = CMatrix::zeros(d, d);
    for j in 0..d {
        let e = Multivector::blade(sig, Blade(j as u32), 1.0);
        let c = &(a * &e) - &(&e * a);
        for (i, x) in c.coeffs().iter().enumerate() {
            l[(i, j)] = Complex64::new(*x, 0.0);
        }
    }
    let scale = 1.0 + a.max_abs();
    for v in null_space(&l, 1e-9 * scale) {
        let x = Multivector::from_coeffs(sig, v.iter().map(|z| z.re).collect())
            .expect("dimension matches");
        let x = x.scale(1.0 / x.max_abs().max(f64::MIN_POSITIVE));
        if max_diff(&(r * &x), &(&x * r)) > tol * (1.0 + r.max_abs()) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::mv_approx_eq;
    use crate::parser::parse_mv;

    fn sig(p: usize, q: usize) -> Signature {
        Signature::new(p, q).unwrap()
    }

    fn roots(s: Signature, text: &str) -> Vec<Multivector> {
        let a = parse_mv(text, s).unwrap();
        spectral_sqrt(&a, &SqrtConfig::default())
            .accepted()
            .into_iter()
            .cloned()
            .collect()
    }

    fn contains(set: &[Multivector], b: &Multivector) -> bool {
        set.iter().any(|x| mv_approx_eq(x, b, 1e-8))
    }

    #[test]
    fn pattern_counts() {
        assert_eq!(allowed_sign_patterns(Representation::get(sig(0, 2))), vec![vec![1, 1]]);
        assert_eq!(all_sign_patterns(Representation::get(sig(1, 0))).len(), 4);
        assert_eq!(all_sign_patterns(Representation::get(sig(2, 1))).len(), 16);
        let p13 = allowed_sign_patterns(Representation::get(sig(1, 3)));
        assert_eq!(p13, vec![vec![1, 1, 1, 1], vec![1, 1, -1, -1]]);
    }

    #[test]
    fn cl30_four_roots() {
        let s = sig(3, 0);
        let r = roots(s, "-1 + e3 - e12 + 1/2 e123");
        assert_eq!(r.len(), 4);
        assert!(contains(&r, &parse_mv("1/2 e3 + 1/2 e12 - e123", s).unwrap()));
        assert!(contains(&r, &parse_mv("-1/2 + e12 - 1/2 e123", s).unwrap()));
    }

    #[test]
    fn nilpotent_has_none() {
        let s = sig(3, 0);
        assert!(roots(s, "e1 + e12").is_empty());
        assert!(roots(s, "0").is_empty());
    }

    #[test]
    fn idempotent_short_circuit() {
        let s = sig(1, 0);
        let r = roots(s, "1/2 + 1/2 e1");
        assert_eq!(r.len(), 2);
    }

    #[test]
    fn hyperbolic_four() {
        let s = sig(1, 0);
        assert_eq!(roots(s, "3 + e1").len(), 4);
        assert_eq!(roots(s, "1 + 3e1").len(), 0);
    }

    #[test]
    fn complex_numbers() {
        let s = sig(0, 1);
        let r = roots(s, "-1");
        assert_eq!(r.len(), 2);
        assert!(contains(&r, &parse_mv("e1", s).unwrap()));
    }

    #[test]
    fn minus_one_cl41() {
        let rep = sqrt_minus_one(sig(4, 1), None, &SqrtConfig::default());
        assert_eq!(rep.accepted().len(), 16);
        for b in rep.accepted() {
            let sq = b.square();
            assert!((sq.get(Blade::SCALAR) + 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn minus_one_with_basis() {
        let s = sig(3, 0);
        let g = parse_mv("e1", s).unwrap();
        let rep = sqrt_minus_one(s, Some(&g), &SqrtConfig::default());
        let r: Vec<Multivector> = rep.accepted().into_iter().cloned().collect();
        assert!(contains(&r, &parse_mv("e23", s).unwrap()));
        assert!(contains(&r, &parse_mv("e123", s).unwrap()));
    }

    #[test]
    fn exp_zero_and_identity() {
        let s = sig(2, 1);
        let cfg = SqrtConfig::default();
        let z = mv_exp(&Multivector::zero(s), &cfg).unwrap();
        assert!(mv_approx_eq(&z, &Multivector::one(s), 1e-14));
        let a = parse_mv("1 + 2e1 - e23 + 0.5e123", s).unwrap();
        let f = mv_function(&a, |z| z, &cfg).unwrap();
        assert!(mv_approx_eq(&f, &a, 1e-12));
    }

    #[test]
    fn exp_defective_cl30() {
        let s = sig(3, 0);
        let a = parse_mv("-1+2e1+e2+2e3-2e12-2e13+e23-e123", s).unwrap();
        let e = mv_exp(&a, &SqrtConfig::default()).unwrap();
        let (c, sn) = (1f64.cos(), 1f64.sin());
        let k = (-1f64).exp();
        let want = Multivector::from_coeffs(
            s,
            // e3: 2(cos 1 - sin 1), as in the complex-exponential form
            vec![c, 2. * c + sn, c + 2. * sn, -2. * (c + sn), 2. * (c - sn), -(2. * c - sn), c - 2. * sn, -sn]
                .into_iter()
                .map(|x| x * k)
                .collect(),
        )
        .unwrap();
        assert!(max_diff(&e, &want) < 1e-10, "{e:.12}");
    }

    #[test]
    fn labels() {
        assert_eq!(pattern_label(&[1, -1, 1, 1]), "(+-++)");
    }

    #[test]
    fn primary_roots_of_repeated_spectrum() {
        // cos 1 + sin 1 e23 in Cl(1,3): the half-angle rotor is primary, the
        // mixed-sign roots are not
        let s = sig(1, 3);
        let a = parse_mv("0.5403023058681398 + 0.8414709848078965 e23", s).unwrap();
        let half = parse_mv("0.8775825618903728 + 0.479425538604203 e23", s).unwrap();
        let mixed = parse_mv("0.8775825618903728 e14 + 0.479425538604203 e1234", s).unwrap();
        assert!(max_diff(&mixed.square(), &a) < 1e-14);
        assert!(is_primary(&a, &half, 1e-9));
        assert!(!is_primary(&a, &mixed, 1e-9));
    }

    #[test]
    fn all_roots_primary_for_simple_spectrum() {
        let s = sig(3, 0);
        let a = parse_mv("-1 + e3 - e12 + 1/2 e123", s).unwrap();
        let r = spectral_sqrt(&a, &SqrtConfig::default());
        assert!(r.accepted().iter().all(|b| is_primary(&a, b, 1e-9)));
    }
}
