//! Closed-form square roots for n <= 3 and a few 4D shapes.
//!
//! Everything is evaluated in complex arithmetic with principal square roots;
//! realness is imposed at the end, like for the spectral method. Each formula
//! yields one root per pair, the negated root is added automatically.
//!
//! Several printed sign conventions were wrong and are fixed here; the fixes
//! were found by requiring B^2 = A on random inputs:
//! - Cl(3,0): phi = i (D- - D+)/2.
//! - Cl(1,2): the self terms of the second pair carry a uniform minus sign.
//! - Cl(0,3): the first pair uses the opposite sign of delta.
//! - Cl(1,3) boost: bivector signs; Cl(3,1) second pair: sign of b1234.

use num_complex::Complex64;

use crate::algebra::{max_diff, Blade, Multivector, Signature};
use crate::rep::{CMatrix, Representation};
use crate::spectral::{Diagnostics, RootEntry, RootReport, RootStatus, SqrtConfig};

type C = Complex64;

const I: C = C::new(0.0, 1.0);

#[inline]
fn c(x: f64) -> C {
    C::new(x, 0.0)
}

#[inline]
fn sq(z: C) -> C {
    let z = if z.im == 0.0 { C::new(z.re, 0.0) } else { z };
    z.sqrt()
}

/// A named candidate root with complex coefficients indexed by blade mask.
#[derive(Debug, Clone)]
pub struct Candidate {
    pub label: String,
    pub coeffs: Vec<C>,
}

fn cand(label: impl Into<String>, coeffs: Vec<C>) -> Candidate {
    Candidate {
        label: label.into(),
        coeffs,
    }
}

fn coeffs(a: &Multivector) -> Vec<C> {
    a.coeffs().iter().map(|&x| c(x)).collect()
}

// ---- 1D, 2D ---------------------------------------------------------------

/// Cl(0,1): the complex square root written with a two-argument arctangent.
pub fn cl01(a: &Multivector) -> Vec<Candidate> {
    let (a0, a1) = (a.coeffs()[0], a.coeffs()[1]);
    let r = (a0 * a0 + a1 * a1).powf(0.25);
    let phi = a1.atan2(a0);
    vec![cand("principal", vec![c(r * (phi / 2.0).cos()), c(r * (phi / 2.0).sin())])]
}

/// Cl(1,0): hyperbolic numbers; four roots when a0 > |a1|.
pub fn cl10(a: &Multivector) -> Vec<Candidate> {
    let (a0, a1) = (a.coeffs()[0], a.coeffs()[1]);
    let p = sq(c(a0 + a1));
    let m = sq(c(a0 - a1));
    vec![
        cand("pair 1", vec![(m + p) / 2.0, -(m - p) / 2.0]),
        cand("pair 2", vec![(m - p) / 2.0, -(m + p) / 2.0]),
    ]
}

/// Shared 2D formula; `m` is sqrt of the (signed) square of the non-scalar
/// part. Quaternion-like Cl(0,2) only has the first pair.
fn two_dim(a: &Multivector, m: C, quat: bool) -> Vec<Candidate> {
    let v = coeffs(a);
    let a0 = v[0];
    let p = sq(a0 + m);
    let n = sq(a0 - m);
    let d = if quat { sq(m * m) } else { m };
    let mut b1 = vec![(p + n) / 2.0, C::default(), C::default(), C::default()];
    let mut b2 = vec![(-p + n) / 2.0, C::default(), C::default(), C::default()];
    for k in 1..4 {
        b1[k] = v[k] * (p - n) / (d * 2.0);
        b2[k] = -v[k] * (p + n) / (d * 2.0);
    }
    let mut out = vec![cand("pair 1", b1)];
    if !quat {
        out.push(cand("pair 2", b2));
    }
    out
}

pub fn cl02(a: &Multivector) -> Vec<Candidate> {
    let x = a.coeffs();
    two_dim(a, sq(c(-x[1] * x[1] - x[2] * x[2] - x[3] * x[3])), true)
}

pub fn cl11(a: &Multivector) -> Vec<Candidate> {
    let x = a.coeffs();
    two_dim(a, sq(c(x[1] * x[1] - x[2] * x[2] + x[3] * x[3])), false)
}

pub fn cl20(a: &Multivector) -> Vec<Candidate> {
    let x = a.coeffs();
    two_dim(a, sq(c(x[1] * x[1] + x[2] * x[2] - x[3] * x[3])), false)
}

// ---- 3D --------------------------------------------------------------------
// mask order: 0:1 1:e1 2:e2 3:e12 4:e3 5:e13 6:e23 7:e123

struct Abc {
    a0: C,
    a1: C,
    a2: C,
    a12: C,
    a3: C,
    a13: C,
    a23: C,
    a123: C,
}

fn abc(a: &Multivector) -> Abc {
    let v = coeffs(a);
    Abc {
        a0: v[0],
        a1: v[1],
        a2: v[2],
        a12: v[3],
        a3: v[4],
        a13: v[5],
        a23: v[6],
        a123: v[7],
    }
}

const VEC3: [usize; 3] = [1, 2, 4];
const BIV3: [usize; 3] = [3, 5, 6];

/// Cl(3,0). Falls back to the scalar+pseudoscalar roots when the generic
/// denominators vanish.
pub fn cl30(a: &Multivector) -> Vec<Candidate> {
    let Abc { a0, a1, a2, a12, a3, a13, a23, a123 } = abc(a);
    let dp = sq((a1 + I * a23).powi(2) + (a2 - I * a13).powi(2) + (a3 + I * a12).powi(2));
    // conjugates rather than principal roots of the conjugate arguments: the
    // two differ on the negative real axis (pure vectors or bivectors)
    let dm = dp.conj();
    let sp = sq(a0 + I * a123 - dp);
    let sm = sp.conj();
    let tp = sq(a0 + I * a123 + dp);
    let tm = tp.conj();
    let al = (sp + sm) / 2.0;
    let be = -I * (sp - sm) / 2.0;
    let ga = (tp + tm) / 2.0;
    let de = -I * (tp - tm) / 2.0;
    let ep = (dm + dp) / 2.0;
    let ph = I * (dm - dp) / 2.0;
    let den = (ep * ep + ph * ph) * 2.0;
    let scale = 1.0 + a.max_abs();
    if den.norm() <= 1e-12 * scale * scale {
        return cl30_scalar_pseudo(a0, a123);
    }
    let vec = [a1, a2, a3];
    let biv = [a12, a13, a23];
    let dual_v = [a23, a13, a12];
    let dual_b = [a3, a2, a1];
    let sgn = [-1.0, 1.0, -1.0];
    let mut b = vec![C::default(); 8];
    b[0] = (al + ga) / 2.0;
    b[7] = (be + de) / 2.0;
    for k in 0..3 {
        b[VEC3[k]] = (dual_v[k] * sgn[k] * ((de - be) * ep + (al - ga) * ph)
            + vec[k] * ((ga - al) * ep + (de - be) * ph))
            / den;
        b[BIV3[k]] = (dual_b[k] * sgn[k] * ((be - de) * ep + (ga - al) * ph)
            + biv[k] * ((ga - al) * ep + (de - be) * ph))
            / den;
    }
    let mut d = vec![C::default(); 8];
    d[0] = (al - ga) / 2.0;
    d[7] = (be - de) / 2.0;
    for k in 0..3 {
        d[VEC3[k]] = (-dual_v[k] * sgn[k] * ((be + de) * ep - (al + ga) * ph)
            - vec[k] * ((al + ga) * ep + (be + de) * ph))
            / den;
        d[BIV3[k]] = (dual_b[k] * sgn[k] * ((be + de) * ep - (al + ga) * ph)
            - biv[k] * ((al + ga) * ep + (be + de) * ph))
            / den;
    }
    vec![cand("pair 1", b), cand("pair 2", d)]
}

/// A = a0 + a123 e123 in Cl(3,0): the principal root of the complex number
/// a0 + i a123, and the same rotated into e2 (e2 cos - e13 sin).
fn cl30_scalar_pseudo(a0: C, a123: C) -> Vec<Candidate> {
    let zp = sq(a0 + I * a123);
    let zm = sq(a0 - I * a123);
    let mut p = vec![C::default(); 8];
    p[0] = (zp + zm) / 2.0;
    p[7] = (zp - zm) / (I * 2.0);
    let mut e = vec![C::default(); 8];
    e[2] = (zm + zp) / 2.0;
    e[5] = -I * (zm - zp) / 2.0;
    vec![cand("scalar-pseudoscalar", p), cand("e2 rotor", e)]
}

/// Cl(1,2).
pub fn cl12(a: &Multivector) -> Vec<Candidate> {
    let Abc { a0, a1, a2, a12, a3, a13, a23, a123 } = abc(a);
    let s_p = sq((a12 + I * a3).powi(2) + (a13 - I * a2).powi(2) - (a23 - I * a1).powi(2));
    // conjugate pairs, see cl30
    let s_m = s_p.conj();
    let amb = sq(a0 + I * a123 - s_p);
    let apb = amb.conj();
    let gpd = sq(a0 + I * a123 + s_p);
    let gmd = gpd.conj();
    let al = (apb + amb) / 2.0;
    let be = (apb - amb) / (I * 2.0);
    let ga = (gpd + gmd) / 2.0;
    let de = (gpd - gmd) / (I * 2.0);
    let ep = (s_p + s_m) / 2.0;
    let ph = (s_p - s_m) / (I * 2.0);
    let den = (ep * ep + ph * ph) * 2.0;
    let vec = [a1, a2, a3];
    let biv = [a12, a13, a23];
    let dv = [a23, a13, a12];
    let db = [a3, a2, a1];
    let s_a1 = [-1.0, -1.0, 1.0];
    let s_a2 = [-1.0, 1.0, 1.0];
    let mut b = vec![C::default(); 8];
    b[0] = (al + ga) / 2.0;
    b[7] = (-be + de) / 2.0;
    for k in 0..3 {
        b[VEC3[k]] = (dv[k] * s_a1[k] * ((be + de) * ep + (al - ga) * ph)
            + vec[k] * ((ga - al) * ep + (be + de) * ph))
            / den;
        b[BIV3[k]] = (db[k] * s_a2[k] * ((be + de) * ep + (al - ga) * ph)
            + biv[k] * ((ga - al) * ep + (be + de) * ph))
            / den;
    }
    let mut d = vec![C::default(); 8];
    d[0] = (al - ga) / 2.0;
    d[7] = -(be + de) / 2.0;
    for k in 0..3 {
        d[VEC3[k]] = (dv[k] * s_a1[k] * ((be - de) * ep + (al + ga) * ph)
            - vec[k] * ((al + ga) * ep + (-be + de) * ph))
            / den;
        d[BIV3[k]] = (db[k] * s_a2[k] * ((be - de) * ep + (al + ga) * ph)
            - biv[k] * ((al + ga) * ep + (-be + de) * ph))
            / den;
    }
    vec![cand("pair 1", b), cand("pair 2", d)]
}

/// Assemble a 3D candidate from vector/bivector coefficient functions:
/// f(+1) gives e1, e2, e3; f(-1) gives the dual bivectors e23, e13, e12.
fn mk3(
    label: &str,
    b0: C,
    b123: C,
    den: C,
    f: [&dyn Fn(f64) -> C; 3],
) -> Candidate {
    let mut b = vec![C::default(); 8];
    b[0] = b0;
    b[7] = b123;
    for (k, (mv, mb)) in [(1, 6), (2, 5), (4, 3)].into_iter().enumerate() {
        b[mv] = f[k](1.0) / den;
        b[mb] = f[k](-1.0) / den;
    }
    cand(label, b)
}

/// Cl(2,1): eight root pairs.
pub fn cl21(a: &Multivector) -> Vec<Candidate> {
    let Abc { a0, a1, a2, a12, a3, a13, a23, a123 } = abc(a);
    let ph1 = sq((a1 + a23).powi(2) + (a2 - a13).powi(2) - (a3 - a12).powi(2)) / I;
    let ph2 = sq((a1 - a23).powi(2) + (a2 + a13).powi(2) - (a3 + a12).powi(2)) / I;
    let sp = sq(a0 + a123 + I * ph1);
    let sm = sq(a0 + a123 - I * ph1);
    let tp = sq(a0 - a123 + I * ph2);
    let tm = sq(a0 - a123 - I * ph2);
    let al = (sp + sm) / 2.0;
    let be = (sp - sm) / (I * 2.0);
    let ga = (tp + tm) / 2.0;
    let de = (tp - tm) / (I * 2.0);
    let den = ph1 * ph2 * 2.0;
    vec![
        mk3("1", (al + ga) / 2.0, (al - ga) / 2.0, den, [
            &|s| (a1 - a23) * de * ph1 * s + (a1 + a23) * be * ph2,
            &|s| (a2 + a13) * de * ph1 + (a2 - a13) * be * ph2 * s,
            &|s| (a3 + a12) * de * ph1 + (a3 - a12) * be * ph2 * s,
        ]),
        mk3("2", (al + I * de) / 2.0, (al - I * de) / 2.0, den, [
            &|s| -I * (a1 - a23) * ga * ph1 * s + (a1 + a23) * be * ph2,
            &|s| -(I * (a2 + a13) * ga * ph1 - (a2 - a13) * be * ph2 * s),
            &|s| -(I * (a3 + a12) * ga * ph1 - (a3 - a12) * be * ph2 * s),
        ]),
        mk3("3", (al - I * de) / 2.0, (al + I * de) / 2.0, den, [
            &|s| I * (a1 - a23) * ga * ph1 * s + (a1 + a23) * be * ph2,
            &|s| I * (a2 + a13) * ga * ph1 + (a2 - a13) * be * ph2 * s,
            &|s| I * (a3 + a12) * ga * ph1 + (a3 - a12) * be * ph2 * s,
        ]),
        mk3("4", (I * be + ga) / 2.0, (I * be - ga) / 2.0, den, [
            &|s| (a1 - a23) * de * ph1 * s - I * (a1 + a23) * al * ph2,
            &|s| (a2 + a13) * de * ph1 + I * (-a2 + a13) * al * ph2 * s,
            &|s| (a3 + a12) * de * ph1 + I * (-a3 + a12) * al * ph2 * s,
        ]),
        mk3("5", -(I * be - ga) / 2.0, -(I * be + ga) / 2.0, den, [
            &|s| (a1 - a23) * de * ph1 * s + I * (a1 + a23) * al * ph2,
            &|s| (a2 + a13) * de * ph1 + I * (a2 - a13) * al * ph2 * s,
            &|s| (a3 + a12) * de * ph1 + I * (a3 - a12) * al * ph2 * s,
        ]),
        mk3("6", (al - ga) / 2.0, (al + ga) / 2.0, den, [
            &|s| (-a1 + a23) * de * ph1 * s + (a1 + a23) * be * ph2,
            &|s| -((a2 + a13) * de * ph1 + (-a2 + a13) * be * ph2 * s),
            &|s| -((a3 + a12) * de * ph1 + (-a3 + a12) * be * ph2 * s),
        ]),
        mk3("7", I * (be + de) / 2.0, I * (be - de) / 2.0, den, [
            &|s| -I * ((a1 - a23) * ga * ph1 * s + (a1 + a23) * al * ph2),
            &|s| -I * ((a2 + a13) * ga * ph1 + (a2 - a13) * al * ph2 * s),
            &|s| -I * ((a3 + a12) * ga * ph1 + (a3 - a12) * al * ph2 * s),
        ]),
        mk3("8", -I * (be - de) / 2.0, -I * (be + de) / 2.0, den, [
            &|s| I * ((-a1 + a23) * ga * ph1 * s + (a1 + a23) * al * ph2),
            &|s| -I * ((a2 + a13) * ga * ph1 + (-a2 + a13) * al * ph2 * s),
            &|s| -I * ((a3 + a12) * ga * ph1 + (-a3 + a12) * al * ph2 * s),
        ]),
    ]
}

fn cl03_pair(a: &Multivector, s1: f64) -> (Vec<C>, Vec<C>) {
    let Abc { a0, a1, a2, a12, a3, a13, a23, a123 } = abc(a);
    let ph1 = -I * sq(-(a13 - a2).powi(2) - (a23 + a1).powi(2) - (a12 + a3).powi(2));
    let ph2 = -I * sq(-(a13 + a2).powi(2) - (a23 - a1).powi(2) - (a12 - a3).powi(2));
    let sp = sq(a0 + a123 + I * ph2);
    let sm = sq(a0 + a123 - I * ph2);
    let tp = sq(a0 - a123 - I * ph1 * s1);
    let tm = sq(a0 - a123 + I * ph1 * s1);
    let al = (sp + sm) / 2.0;
    let be = (sp - sm) / (I * 2.0);
    let ga = (tp + tm) / 2.0;
    let de = (tp - tm) / (I * 2.0);
    let den = ph1 * ph2 * 2.0;
    let f: [&dyn Fn(f64) -> C; 3] = [
        &|s| (a1 - a23) * be * ph1 * s + (a1 + a23) * de * ph2,
        &|s| (a2 + a13) * be * ph1 + (a2 - a13) * de * ph2 * s,
        &|s| (a3 - a12) * be * ph1 * s + (a3 + a12) * de * ph2,
    ];
    let b = mk3("", (al + ga) / 2.0, (al - ga) / 2.0, den, f).coeffs;
    let mut b2: Vec<C> = b.iter().map(|z| -z).collect();
    b2[0] = (-al + ga) / 2.0;
    b2[7] = -(al + ga) / 2.0;
    (b, b2)
}

/// Cl(0,3): two pairs.
pub fn cl03(a: &Multivector) -> Vec<Candidate> {
    let first = cl03_pair(a, -1.0).0;
    let second = cl03_pair(a, 1.0).1;
    vec![cand("pair 1", first), cand("pair 2", second)]
}

// ---- 4D --------------------------------------------------------------------

const E12: usize = 3;
const E13: usize = 5;
const E23: usize = 6;
const E14: usize = 9;
const E24: usize = 10;
const E34: usize = 12;
const E1234: usize = 15;

/// Which closed-form family a 4D multivector belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape4 {
    /// Cl(4,0) even multivector (covers the simple shapes).
    Cl40Even,
    /// Cl(1,3): scalar, e23, e24, e34, e1234.
    Cl13Rotor,
    /// Cl(1,3): scalar, e12, e13, e14, e1234.
    Cl13Boost,
    /// Cl(3,1) even multivector.
    Cl31Even,
}

fn supported_on(a: &Multivector, masks: &[usize]) -> bool {
    a.coeffs()
        .iter()
        .enumerate()
        .all(|(m, &x)| x == 0.0 || masks.contains(&m))
}

const EVEN4: [usize; 8] = [0, E12, E13, E23, E14, E24, E34, E1234];

pub fn shape_4d(a: &Multivector) -> Option<Shape4> {
    let s = a.sig();
    let v = a.coeffs();
    match (s.p, s.q) {
        (4, 0) if supported_on(a, &EVEN4) => Some(Shape4::Cl40Even),
        (3, 1) if supported_on(a, &EVEN4) => Some(Shape4::Cl31Even),
        (1, 3) => {
            let rot = supported_on(a, &[0, E23, E24, E34, E1234]);
            let boost = supported_on(a, &[0, E12, E13, E14, E1234]);
            let has_rot = v[E23] != 0.0 || v[E24] != 0.0 || v[E34] != 0.0;
            let has_boost = v[E12] != 0.0 || v[E13] != 0.0 || v[E14] != 0.0;
            if rot && has_rot {
                Some(Shape4::Cl13Rotor)
            } else if boost && has_boost {
                Some(Shape4::Cl13Boost)
            } else {
                None
            }
        }
        _ => None,
    }
}

fn set4(pairs: &[(usize, C)]) -> Vec<C> {
    let mut b = vec![C::default(); 16];
    for &(m, x) in pairs {
        b[m] = x;
    }
    b
}

pub fn cl40_even(a: &Multivector) -> Vec<Candidate> {
    let v = coeffs(a);
    let (a0, a12, a13, a23, a14, a24, a34, a1234) =
        (v[0], v[E12], v[E13], v[E23], v[E14], v[E24], v[E34], v[E1234]);
    let ep = sq((a12 + a34).powi(2) + (a13 - a24).powi(2) + (a14 + a23).powi(2));
    let em = sq((a12 - a34).powi(2) + (a13 + a24).powi(2) + (a14 - a23).powi(2));
    let s1 = sq(a0 + a1234 + I * em);
    let s2 = s1.conj();
    let t1 = sq(a0 - a1234 + I * ep);
    let t2 = t1.conj();
    let al = (s1 + s2) / 2.0;
    let be = (s1 - s2) / (I * 2.0);
    let ga = (t1 + t2) / 2.0;
    let de = (t1 - t2) / (I * 2.0);
    let mk = |sb: f64, b0: C, b1234: C| {
        set4(&[
            (0, b0),
            (E1234, b1234),
            (E12, ((a12 - a34) * sb * be / em + (a12 + a34) * de / ep) / 2.0),
            (E13, ((a13 + a24) * sb * be / em + (a13 - a24) * de / ep) / 2.0),
            (E23, ((a23 - a14) * sb * be / em + (a23 + a14) * de / ep) / 2.0),
            (E14, ((a14 - a23) * sb * be / em + (a14 + a23) * de / ep) / 2.0),
            (E24, ((a24 + a13) * sb * be / em + (a24 - a13) * de / ep) / 2.0),
            (E34, ((a34 - a12) * sb * be / em + (a34 + a12) * de / ep) / 2.0),
        ])
    };
    vec![
        cand("pair 1", mk(1.0, (al + ga) / 2.0, (al - ga) / 2.0)),
        cand("pair 2", mk(-1.0, (-al + ga) / 2.0, -(al + ga) / 2.0)),
    ]
}

pub fn cl13_rotor(a: &Multivector) -> Vec<Candidate> {
    let v = coeffs(a);
    let (a0, a23, a24, a34, a1234) = (v[0], v[E23], v[E24], v[E34], v[E1234]);
    let m = (a23 * a23 + a24 * a24 + a34 * a34).sqrt();
    [1.0, -1.0]
        .iter()
        .enumerate()
        .map(|(k, &s)| {
            let e1 = sq(a0 + I * (a1234 + m));
            let e2 = e1.conj();
            let e3 = sq(a0 + I * (a1234 - m)) * s;
            let e4 = e3.conj();
            let (r1, r2) = ((e1 + e2) / 2.0, (e3 + e4) / 2.0);
            let (i1, i2) = ((e1 - e2) / 2.0, (e3 - e4) / 2.0);
            let m2 = m * 2.0;
            cand(
                format!("pair {}", k + 1),
                set4(&[
                    (0, (r1 + r2) / 2.0),
                    (E1234, -I * (i1 + i2) / 2.0),
                    (E12, a34 * (r1 - r2) / m2),
                    (E13, a24 * (-r1 + r2) / m2),
                    (E14, a23 * (r1 - r2) / m2),
                    (E23, I * a23 * (-i1 + i2) / m2),
                    (E24, I * a24 * (-i1 + i2) / m2),
                    (E34, I * a34 * (-i1 + i2) / m2),
                ]),
            )
        })
        .collect()
}

pub fn cl13_boost(a: &Multivector) -> Vec<Candidate> {
    let v = coeffs(a);
    let (a0, a12, a13, a14, a1234) = (v[0], v[E12], v[E13], v[E14], v[E1234]);
    let m = (a12 * a12 + a13 * a13 + a14 * a14).sqrt();
    [1.0, -1.0]
        .iter()
        .enumerate()
        .map(|(k, &s)| {
            let e1 = sq(a0 + m + I * a1234);
            let e2 = e1.conj();
            let e3 = sq(a0 - m + I * a1234) * s;
            let e4 = e3.conj();
            let (r1, r2) = ((e1 + e2) / 2.0, (e3 + e4) / 2.0);
            let (i1, i2) = ((e1 - e2) / 2.0, (e3 - e4) / 2.0);
            let m2 = m * 2.0;
            cand(
                format!("pair {}", k + 1),
                set4(&[
                    (0, (r1 + r2) / 2.0),
                    (E1234, -I * (i1 + i2) / 2.0),
                    (E12, a12 * (r1 - r2) / m2),
                    (E13, a13 * (r1 - r2) / m2),
                    (E14, a14 * (r1 - r2) / m2),
                    (E23, -I * a14 * (i1 - i2) / m2),
                    (E24, I * a13 * (i1 - i2) / m2),
                    (E34, -I * a12 * (i1 - i2) / m2),
                ]),
            )
        })
        .collect()
}

pub fn cl31_even(a: &Multivector) -> Vec<Candidate> {
    let v = coeffs(a);
    let (a0, a12, a13, a23, a14, a24, a34, a1234) =
        (v[0], v[E12], v[E13], v[E23], v[E14], v[E24], v[E34], v[E1234]);
    let r1 = sq((a14 - I * a23).powi(2) - (a13 - I * a24).powi(2) - (a12 + I * a34).powi(2));
    let r2 = r1.conj();
    let s1 = sq(a0 - I * a1234 - r1);
    let s2 = sq(a0 - I * a1234 + r1);
    let s3 = s1.conj();
    let s4 = s2.conj();
    let (u12, w12) = (a12 + I * a34, a12 - I * a34);
    let (u13, w13) = (a13 - I * a24, a13 + I * a24);
    let (u14, w14) = (a14 - I * a23, a14 + I * a23);
    let x1 = (s1 - s2) / (r1 * 4.0);
    let x2 = (s3 - s4) / (r2 * 4.0);
    let first = set4(&[
        (0, (s1 + s2 + s3 + s4) / 4.0),
        (E1234, I * (s1 + s2 - s3 - s4) / 4.0),
        (E12, -u12 * x1 - w12 * x2),
        (E13, -u13 * x1 - w13 * x2),
        (E14, -u14 * x1 - w14 * x2),
        (E23, -I * (u14 * x1 - w14 * x2)),
        (E24, -I * (u13 * x1 - w13 * x2)),
        (E34, I * (u12 * x1 - w12 * x2)),
    ]);
    let y1 = (s1 + s2) / (r1 * 4.0);
    let y2 = (s3 + s4) / (r2 * 4.0);
    let second = set4(&[
        (0, -(s1 - s2 + s3 - s4) / 4.0),
        (E1234, -I * (s1 - s2 - s3 + s4) / 4.0),
        (E12, u12 * y1 + w12 * y2),
        (E13, u13 * y1 + w13 * y2),
        (E14, u14 * y1 + w14 * y2),
        (E23, I * (u14 * y1 - w14 * y2)),
        (E24, I * (u13 * y1 - w13 * y2)),
        (E34, -I * (u12 * y1 - w12 * y2)),
    ]);
    vec![cand("pair 1", first), cand("pair 2", second)]
}

// ---- reports -----------------------------------------------------------------

fn entry_from(a: &Multivector, label: String, coeffs: &[C], cfg: &SqrtConfig) -> RootEntry {
    let re: Vec<f64> = coeffs.iter().map(|z| z.re).collect();
    let max_imag = coeffs.iter().fold(0.0f64, |m, z| m.max(z.im.abs()));
    let root = Multivector::from_coeffs(a.sig(), re).expect("length");
    let residual = max_diff(&root.square(), a);
    let status = if !(max_imag <= cfg.imag_tol * (1.0 + root.max_abs())) {
        RootStatus::RejectedComplex
    } else if !(residual <= cfg.root_tol * (1.0 + a.max_abs())) {
        RootStatus::RejectedResidual
    } else {
        RootStatus::Accepted
    };
    RootEntry {
        pattern: Vec::new(),
        label,
        root,
        residual,
        max_imag,
        status,
    }
}

/// Turn candidate roots (one per +- pair) into a report; duplicates marked.
pub fn report_from_candidates(
    a: &Multivector,
    cands: &[Candidate],
    cfg: &SqrtConfig,
    method: &str,
) -> RootReport {
    let mut entries = Vec::new();
    if !a.is_zero() {
        for cd in cands {
            let neg: Vec<C> = cd.coeffs.iter().map(|z| -z).collect();
            entries.push(entry_from(a, format!("+{}", cd.label), &cd.coeffs, cfg));
            entries.push(entry_from(a, format!("-{}", cd.label), &neg, cfg));
        }
    }
    let mut seen: Vec<Multivector> = Vec::new();
    for e in entries.iter_mut() {
        if e.status != RootStatus::Accepted {
            continue;
        }
        if seen.iter().any(|s| max_diff(s, &e.root) < 1e-7 * (1.0 + s.max_abs())) {
            e.status = RootStatus::Duplicate;
        } else {
            seen.push(e.root.clone());
        }
    }
    RootReport {
        input: a.clone(),
        entries,
        diagnostics: Diagnostics {
            method: method.into(),
            eigenvalues: Vec::new(),
            t_condition: None,
            perturbed_blade: None,
            perturb_eps: None,
        },
    }
}

/// Raw candidates for n <= 3, or None for other algebras.
pub fn candidates_3d(a: &Multivector) -> Option<Vec<Candidate>> {
    let s = a.sig();
    Some(match (s.p, s.q) {
        (0, 1) => cl01(a),
        (1, 0) => cl10(a),
        (0, 2) => cl02(a),
        (1, 1) => cl11(a),
        (2, 0) => cl20(a),
        (3, 0) => cl30(a),
        (1, 2) => cl12(a),
        (2, 1) => cl21(a),
        (0, 3) => cl03(a),
        _ => return None,
    })
}

/// Closed-form roots for algebras with n <= 3.
pub fn closed_form_sqrt(a: &Multivector, cfg: &SqrtConfig) -> Option<RootReport> {
    let cands = candidates_3d(a)?;
    let s = a.sig();
    Some(report_from_candidates(a, &cands, cfg, &format!("closed form Cl({},{})", s.p, s.q)))
}

/// Closed-form roots for the supported 4D shapes.
pub fn closed_form_sqrt_4d(a: &Multivector, cfg: &SqrtConfig) -> Option<RootReport> {
    let shape = shape_4d(a)?;
    let (cands, name) = match shape {
        Shape4::Cl40Even => (cl40_even(a), "closed form Cl(4,0) even"),
        Shape4::Cl13Rotor => (cl13_rotor(a), "closed form Cl(1,3) rotor"),
        Shape4::Cl13Boost => (cl13_boost(a), "closed form Cl(1,3) boost"),
        Shape4::Cl31Even => (cl31_even(a), "closed form Cl(3,1) even"),
    };
    Some(report_from_candidates(a, &cands, cfg, name))
}

/// Whichever closed form applies, if any.
pub fn closed_form_any(a: &Multivector, cfg: &SqrtConfig) -> Option<RootReport> {
    closed_form_sqrt(a, cfg).or_else(|| closed_form_sqrt_4d(a, cfg))
}

/// Sullivan's formula for a 2x2 matrix: eps2 (M + eps1 sqrt(det)) /
/// sqrt(tr + 2 eps1 sqrt(det)), eps1, eps2 = +-1. Branches whose
/// denominator vanishes are dropped.
pub fn sullivan_sqrt(m: &CMatrix) -> Vec<CMatrix> {
    assert_eq!((m.nrows(), m.ncols()), (2, 2), "Sullivan's formula is for 2x2 matrices");
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    let tr = m[(0, 0)] + m[(1, 1)];
    let sd = sq(det);
    let scale = m.iter().fold(1.0f64, |s, z| s.max(z.norm()));
    let mut out = Vec::new();
    for e1 in [1.0, -1.0] {
        let den = sq(tr + sd * 2.0 * e1);
        if den.norm() <= 1e-12 * scale.sqrt() {
            continue;
        }
        let base = (m + CMatrix::identity(2, 2) * (sd * e1)) / den;
        for e2 in [1.0, -1.0] {
            out.push(&base * c(e2));
        }
    }
    out
}

/// Sullivan candidates mapped back to multivectors; for algebras whose
/// representation is 2x2.
pub fn sullivan_roots(a: &Multivector, cfg: &SqrtConfig) -> Option<RootReport> {
    let rep = Representation::get(a.sig());
    if rep.dim() != 2 {
        return None;
    }
    let mut entries = Vec::new();
    if !a.is_zero() {
        for (k, b) in sullivan_sqrt(&rep.mv_to_matrix(a)).iter().enumerate() {
            let dec = rep.matrix_to_mv(b).expect("2x2");
            let mut coeffs: Vec<C> = dec.mv.coeffs().iter().map(|&x| c(x)).collect();
            for (z, &im) in coeffs.iter_mut().zip(&dec.imag) {
                z.im = im;
            }
            entries.push(entry_from(a, format!("sullivan {}", k + 1), &coeffs, cfg));
        }
    }
    let mut rep_out = report_from_candidates(a, &[], cfg, "sullivan");
    let mut seen: Vec<Multivector> = Vec::new();
    for e in entries.iter_mut() {
        if e.status != RootStatus::Accepted {
            continue;
        }
        if seen.iter().any(|s| max_diff(s, &e.root) < 1e-7 * (1.0 + s.max_abs())) {
            e.status = RootStatus::Duplicate;
        } else {
            seen.push(e.root.clone());
        }
    }
    rep_out.entries = entries;
    Some(rep_out)
}

/// True when a closed form hit a removable singularity (non-finite
/// candidates) or took the Cl(3,0) scalar+pseudoscalar fallback, where the
/// roots are not isolated and need not equal the spectral ones.
pub fn is_degenerate(report: &RootReport) -> bool {
    report
        .entries
        .iter()
        .any(|e| !e.root.is_finite() || e.label.ends_with("e2 rotor"))
}

/// Check that closed-form and spectral root sets agree (unordered, tol).
pub fn same_root_sets(x: &[&Multivector], y: &[&Multivector], tol: f64) -> bool {
    x.len() == y.len()
        && x.iter().all(|a| y.iter().any(|b| max_diff(a, b) <= tol * (1.0 + a.max_abs())))
        && y.iter().all(|a| x.iter().any(|b| max_diff(a, b) <= tol * (1.0 + a.max_abs())))
}

/// Blade helper for callers building 4D inputs by name.
pub fn blade_of(sig: Signature, idx: &[usize]) -> Blade {
    let b = Blade::from_indices(idx).expect("ascending indices");
    assert!((b.0 as usize) < sig.dim());
    b
}
