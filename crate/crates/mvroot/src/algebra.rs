//! Blade arithmetic and dense multivectors for Cl(p,q), p+q <= 6.
//!
//! A blade is a bitmask: bit `i` set means `e_{i+1}` is a factor. Factors are
//! always kept in ascending index order, so `e13` is stored and printed, never
//! `e31`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rep::BottClass;

pub const MAX_DIM: usize = 6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("unsupported signature Cl({p},{q}): need 1 <= p+q <= {MAX_DIM}")]
    UnsupportedSignature { p: usize, q: usize },
    #[error("signature mismatch: Cl({}, {}) vs Cl({}, {})", .0.p, .0.q, .1.p, .1.q)]
    SignatureMismatch(Signature, Signature),
    #[error("blade mask {mask:#b} out of range for Cl({p},{q})")]
    BladeOutOfRange { mask: u32, p: usize, q: usize },
    #[error("coefficient vector has length {got}, expected {expected}")]
    BadLength { got: usize, expected: usize },
}

/// The pair (p, q): p generators square to +1, the next q to -1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub p: usize,
    pub q: usize,
}

impl Signature {
    pub fn new(p: usize, q: usize) -> Result<Self, AlgebraError> {
        let n = p + q;
        if n == 0 || n > MAX_DIM {
            return Err(AlgebraError::UnsupportedSignature { p, q });
        }
        Ok(Signature { p, q })
    }

    /// Every supported signature, ordered by dimension then descending p.
    pub fn all() -> Vec<Signature> {
        let mut v = Vec::new();
        for n in 1..=MAX_DIM {
            for q in 0..=n {
                v.push(Signature { p: n - q, q });
            }
        }
        v
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.p + self.q
    }

    /// Number of blades, 2^n.
    #[inline]
    pub fn dim(&self) -> usize {
        1 << self.n()
    }

    pub fn pseudoscalar(&self) -> Blade {
        Blade((1u32 << self.n()) - 1)
    }

    /// Square of the i-th generator (0-based).
    #[inline]
    pub fn generator_square(&self, i: usize) -> f64 {
        if i < self.p {
            1.0
        } else {
            -1.0
        }
    }

    pub fn bott_class(&self) -> BottClass {
        crate::rep::bott_class(*self)
    }

    /// Upper bound 2^t on the number of spectral roots (t = independent sign slots).
    pub fn max_roots(&self) -> usize {
        1 << self.bott_class().sign_slots()
    }

    /// Mask with bit i set for every generator squaring to -1.
    #[inline]
    fn negative_mask(&self) -> u32 {
        (((1u32 << self.q) - 1) << self.p) & ((1u32 << self.n()) - 1)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cl({},{})", self.p, self.q)
    }
}

/// Basis blade as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Blade(pub u32);

impl Blade {
    pub const SCALAR: Blade = Blade(0);

    /// Blade from 1-based generator indices, which must be strictly ascending.
    pub fn from_indices(idx: &[usize]) -> Option<Blade> {
        let mut mask = 0u32;
        let mut last = 0;
        for &i in idx {
            if i == 0 || i <= last || i > MAX_DIM {
                return None;
            }
            mask |= 1 << (i - 1);
            last = i;
        }
        Some(Blade(mask))
    }

    #[inline]
    pub fn grade(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn indices(&self) -> Vec<usize> {
        (0..32).filter(|i| self.0 >> i & 1 == 1).map(|i| i + 1).collect()
    }

    /// "1" for the scalar, otherwise "e" followed by the ascending indices.
    pub fn name(&self) -> String {
        if self.0 == 0 {
            return "1".to_string();
        }
        let mut s = String::from("e");
        for i in self.indices() {
            s.push(char::from_digit(i as u32, 10).unwrap());
        }
        s
    }
}

impl fmt::Display for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Sign of the product of two blades, before masks are combined.
///
/// Counts the transpositions needed to sort the concatenated factor list, then
/// one extra -1 for every shared generator that squares to -1.
#[inline]
pub fn blade_sign(a: u32, b: u32, sig: Signature) -> f64 {
    let mut swaps = 0u32;
    let mut x = a >> 1;
    while x != 0 {
        swaps += (x & b).count_ones();
        x >>= 1;
    }
    swaps += (a & b & sig.negative_mask()).count_ones();
    if swaps & 1 == 1 {
        -1.0
    } else {
        1.0
    }
}

pub fn blade_product(a: Blade, b: Blade, sig: Signature) -> (Blade, f64) {
    (Blade(a.0 ^ b.0), blade_sign(a.0, b.0, sig))
}

/// Blades of an n-dimensional algebra in print order: ascending grade, then mask.
pub fn canonical_order(n: usize) -> Vec<Blade> {
    let mut v: Vec<Blade> = (0..1u32 << n).map(Blade).collect();
    v.sort_by_key(|b| (b.grade(), b.0));
    v
}

/// Dense multivector: one real coefficient per blade, indexed by mask.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Multivector {
    sig: Signature,
    coeffs: Vec<f64>,
}

impl Multivector {
    pub fn zero(sig: Signature) -> Self {
        Multivector {
            sig,
            coeffs: vec![0.0; sig.dim()],
        }
    }

    pub fn scalar(sig: Signature, x: f64) -> Self {
        let mut m = Self::zero(sig);
        m.coeffs[0] = x;
        m
    }

    pub fn one(sig: Signature) -> Self {
        Self::scalar(sig, 1.0)
    }

    pub fn blade(sig: Signature, b: Blade, c: f64) -> Self {
        let mut m = Self::zero(sig);
        m.coeffs[b.0 as usize] = c;
        m
    }

    /// The i-th generator e_{i+1}.
    pub fn generator(sig: Signature, i: usize) -> Self {
        Self::blade(sig, Blade(1 << i), 1.0)
    }

    pub fn from_coeffs(sig: Signature, coeffs: Vec<f64>) -> Result<Self, AlgebraError> {
        if coeffs.len() != sig.dim() {
            return Err(AlgebraError::BadLength {
                got: coeffs.len(),
                expected: sig.dim(),
            });
        }
        Ok(Multivector { sig, coeffs })
    }

    /// Build from (blade, coefficient) pairs; repeated blades are summed.
    pub fn from_terms(sig: Signature, terms: &[(Blade, f64)]) -> Result<Self, AlgebraError> {
        let mut m = Self::zero(sig);
        for &(b, c) in terms {
            if b.0 as usize >= sig.dim() {
                return Err(AlgebraError::BladeOutOfRange {
                    mask: b.0,
                    p: sig.p,
                    q: sig.q,
                });
            }
            m.coeffs[b.0 as usize] += c;
        }
        Ok(m)
    }

    #[inline]
    pub fn sig(&self) -> Signature {
        self.sig
    }

    #[inline]
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    #[inline]
    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    #[inline]
    pub fn get(&self, b: Blade) -> f64 {
        self.coeffs[b.0 as usize]
    }

    #[inline]
    pub fn set(&mut self, b: Blade, c: f64) {
        self.coeffs[b.0 as usize] = c;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    /// Largest absolute coefficient.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Zero every coefficient with |c| <= tol * max|c| (for display).
    pub fn chop(&self, tol: f64) -> Self {
        let lim = tol * self.max_abs();
        let mut out = self.clone();
        for c in out.coeffs.iter_mut() {
            if c.abs() <= lim {
                *c = 0.0;
            }
        }
        out
    }

    pub fn scale(&self, s: f64) -> Self {
        Multivector {
            sig: self.sig,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    fn check_same(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.sig != other.sig {
            return Err(AlgebraError::SignatureMismatch(self.sig, other.sig));
        }
        Ok(())
    }

    pub fn geometric_product(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_same(other)?;
        let n = self.sig.dim();
        let mut out = vec![0.0; n];
        for (a, &ca) in self.coeffs.iter().enumerate() {
            if ca == 0.0 {
                continue;
            }
            for (b, &cb) in other.coeffs.iter().enumerate() {
                if cb == 0.0 {
                    continue;
                }
                out[a ^ b] += blade_sign(a as u32, b as u32, self.sig) * ca * cb;
            }
        }
        Ok(Multivector {
            sig: self.sig,
            coeffs: out,
        })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_same(other)?;
        Ok(Multivector {
            sig: self.sig,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.try_add(&other.scale(-1.0))
    }

    /// Keep only the grade-k part.
    pub fn grade_select(&self, k: usize) -> Self {
        let mut m = self.clone();
        for (b, c) in m.coeffs.iter_mut().enumerate() {
            if (b as u32).count_ones() as usize != k {
                *c = 0.0;
            }
        }
        m
    }

    fn map_grade_sign(&self, f: impl Fn(usize) -> bool) -> Self {
        let mut m = self.clone();
        for (b, c) in m.coeffs.iter_mut().enumerate() {
            if f((b as u32).count_ones() as usize) {
                *c = -*c;
            }
        }
        m
    }

    /// Reversion: sign (-1)^{g(g-1)/2} on grade g.
    pub fn reverse(&self) -> Self {
        self.map_grade_sign(|g| (g * g.saturating_sub(1) / 2) % 2 == 1)
    }

    /// Grade involution: sign (-1)^g on grade g.
    pub fn grade_involution(&self) -> Self {
        self.map_grade_sign(|g| g % 2 == 1)
    }

    /// Sum of c_J e_J^{-1}; for a single blade this is its inverse.
    pub fn blade_inverse_map(&self) -> Self {
        let mut m = self.reverse();
        for (b, c) in m.coeffs.iter_mut().enumerate() {
            // e_J reverse(e_J) = product of the squares of its generators
            let neg = (b as u32 & self.sig.negative_mask()).count_ones();
            if neg % 2 == 1 {
                *c = -*c;
            }
        }
        m
    }

    /// A·A.
    pub fn square(&self) -> Self {
        self * self
    }

    pub fn commutes_with(&self, other: &Self, tol: f64) -> bool {
        let ab = self * other;
        let ba = other * self;
        mv_approx_eq(&ab, &ba, tol)
    }
}

/// Max-norm comparison scaled by the larger of the two magnitudes.
pub fn mv_approx_eq(a: &Multivector, b: &Multivector, tol: f64) -> bool {
    if a.sig != b.sig {
        return false;
    }
    let scale = 1.0 + a.max_abs().max(b.max_abs());
    a.coeffs
        .iter()
        .zip(&b.coeffs)
        .all(|(x, y)| (x - y).abs() <= tol * scale)
}

/// Max-abs difference of two multivectors of the same algebra.
pub fn max_diff(a: &Multivector, b: &Multivector) -> f64 {
    a.coeffs
        .iter()
        .zip(&b.coeffs)
        .fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

impl<'a> Mul<&'a Multivector> for &'a Multivector {
    type Output = Multivector;
    /// Panics on signature mismatch; use `geometric_product` to get an error instead.
    fn mul(self, rhs: &'a Multivector) -> Multivector {
        self.geometric_product(rhs).expect("geometric product")
    }
}

impl Mul<f64> for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: f64) -> Multivector {
        self.scale(rhs)
    }
}

impl<'a> Add<&'a Multivector> for &'a Multivector {
    type Output = Multivector;
    fn add(self, rhs: &'a Multivector) -> Multivector {
        self.try_add(rhs).expect("multivector add")
    }
}

impl<'a> Sub<&'a Multivector> for &'a Multivector {
    type Output = Multivector;
    fn sub(self, rhs: &'a Multivector) -> Multivector {
        self.try_sub(rhs).expect("multivector sub")
    }
}

impl Neg for &Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self.scale(-1.0)
    }
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prec = f.precision().unwrap_or(6);
        f.write_str(&crate::parser::format_mv(self, prec))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(p: usize, q: usize) -> Signature {
        Signature::new(p, q).unwrap()
    }

    #[test]
    fn e1_squares() {
        assert_eq!(blade_product(Blade(1), Blade(1), sig(3, 0)), (Blade(0), 1.0));
        assert_eq!(blade_product(Blade(1), Blade(1), sig(0, 1)), (Blade(0), -1.0));
    }

    #[test]
    fn e3_e12_is_e123() {
        assert_eq!(blade_product(Blade(4), Blade(3), sig(3, 0)), (Blade(7), 1.0));
        // e2 e1 = -e12
        assert_eq!(blade_product(Blade(2), Blade(1), sig(3, 0)).1, -1.0);
    }

    #[test]
    fn disjoint_product_in_cl03() {
        let s = sig(0, 3);
        let e2 = Multivector::generator(s, 1);
        let e3 = Multivector::generator(s, 2);
        assert_eq!(&e2 * &e3, Multivector::blade(s, Blade(6), 1.0));
    }

    #[test]
    fn idempotent_doubling() {
        let s = sig(1, 0);
        let a = Multivector::from_coeffs(s, vec![1.0, 1.0]).unwrap();
        assert_eq!(a.square(), a.scale(2.0));
    }

    #[test]
    fn reverse_and_involution_signs() {
        let s = sig(3, 0);
        let e12 = Multivector::blade(s, Blade(3), 1.0);
        assert_eq!(e12.reverse(), e12.scale(-1.0));
        let e123 = Multivector::blade(s, Blade(7), 1.0);
        assert_eq!(e123.reverse(), e123.scale(-1.0));
        assert_eq!(e123.grade_involution(), e123.scale(-1.0));
        assert_eq!(e12.grade_involution(), e12);
    }

    #[test]
    fn grade_select_scalar() {
        let s = sig(2, 0);
        let a = Multivector::from_coeffs(s, vec![2.0, 3.0, 0.0, 4.0]).unwrap();
        assert_eq!(a.grade_select(0), Multivector::scalar(s, 2.0));
    }

    #[test]
    fn blade_inverse_map_inverts_blades() {
        for s in Signature::all() {
            for b in 0..s.dim() as u32 {
                let e = Multivector::blade(s, Blade(b), 1.0);
                let inv = e.blade_inverse_map();
                assert_eq!(&e * &inv, Multivector::one(s), "{s} {}", Blade(b));
            }
        }
    }

    #[test]
    fn names_and_order() {
        assert_eq!(Blade(0).name(), "1");
        assert_eq!(Blade(5).name(), "e13");
        let order: Vec<String> = canonical_order(3).iter().map(|b| b.name()).collect();
        assert_eq!(order, ["1", "e1", "e2", "e3", "e12", "e13", "e23", "e123"]);
        assert_eq!(Blade::from_indices(&[1, 3]), Some(Blade(5)));
        assert_eq!(Blade::from_indices(&[3, 1]), None);
    }

    #[test]
    fn mismatched_signatures() {
        let a = Multivector::one(sig(3, 0));
        let b = Multivector::one(sig(2, 1));
        assert!(a.geometric_product(&b).is_err());
        assert!(Signature::new(4, 3).is_err());
        assert!(Signature::new(0, 0).is_err());
    }

    #[test]
    fn approx_eq() {
        let s = sig(3, 0);
        let a = Multivector::from_coeffs(s, (0..8).map(|i| i as f64 * 0.3).collect()).unwrap();
        assert!(mv_approx_eq(&a, &a, 1e-12));
        let b = &a + &Multivector::generator(s, 0).scale(1e-3);
        assert!(!mv_approx_eq(&a, &b, 1e-12));
    }
}
