//! Matrix representations of Cl(p,q), n <= 6.
//!
//! Each algebra carries a hard-coded generator table in the compact
//! `q1(E12-E21-E34+E43)` notation (E_rc = matrix unit, q1..q3 quaternion
//! units, i the imaginary unit), plus the idempotent/ideal data needed to
//! regenerate that table from scratch. Quaternionic tables are expanded to
//! complex matrices of twice the size with
//!   i -> diag(i,-i),  j -> [[0,1],[-1,0]],  k -> [[0,i],[i,0]].

use std::collections::HashMap;
use std::fmt;
use std::ops::Range;
use std::sync::OnceLock;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{Blade, Multivector, Signature};

pub type CMatrix = DMatrix<Complex64>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RepError {
    #[error("unsupported signature Cl({p},{q})")]
    Unsupported { p: usize, q: usize },
    #[error("matrix is {got}x{got}, representation needs {expected}x{expected}")]
    DimensionMismatch { got: usize, expected: usize },
    #[error("expand_quaternions called on a {0} representation")]
    NotQuaternionic(Kind),
    #[error("division ring has {0} elements; expected 1, 2 or 4")]
    DivisionRing(usize),
    #[error("ideal basis is not independent for {0}")]
    IdealBasis(Signature),
    #[error("bad table entry '{0}'")]
    Table(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kind {
    R,
    R2,
    C,
    H,
    H2,
}

impl Kind {
    pub fn is_quaternionic(self) -> bool {
        matches!(self, Kind::H | Kind::H2)
    }
    pub fn blocks(self) -> usize {
        match self {
            Kind::R2 | Kind::H2 => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::R => "R",
            Kind::R2 => "2R",
            Kind::C => "C",
            Kind::H => "H",
            Kind::H2 => "2H",
        })
    }
}

/// Matrix ring an algebra is isomorphic to, e.g. 2R(2) for Cl(2,1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BottClass {
    pub kind: Kind,
    /// Matrix size of one irreducible block over R, C or H.
    pub t: usize,
}

impl BottClass {
    /// Independent diagonal signs of a root: t per block.
    pub fn sign_slots(&self) -> usize {
        self.t * self.kind.blocks()
    }

    /// Size of the complex matrices actually used (quaternions expanded).
    pub fn complex_dim(&self) -> usize {
        let d = self.t * self.kind.blocks();
        if self.kind.is_quaternionic() {
            2 * d
        } else {
            d
        }
    }
}

impl fmt::Display for BottClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.kind, self.t)
    }
}

struct TableRow {
    p: usize,
    q: usize,
    kind: Kind,
    t: usize,
    gens: &'static [&'static str],
}

macro_rules! row {
    ($p:expr, $q:expr, $k:ident, $t:expr, [$($g:expr),* $(,)?]) => {
        TableRow { p: $p, q: $q, kind: Kind::$k, t: $t, gens: &[$($g),*] }
    };
}

static TABLE: &[TableRow] = &[
    row!(1, 0, R2, 1, ["E11-E22"]),
    row!(0, 1, C, 1, ["iE11"]),
    row!(2, 0, R, 2, ["E11-E22", "E12+E21"]),
    row!(1, 1, R, 2, ["E11-E22", "-E12+E21"]),
    row!(0, 2, H, 1, ["q1E11", "q2E11"]),
    row!(3, 0, C, 2, ["E11-E22", "E12+E21", "i(-E12+E21)"]),
    row!(2, 1, R2, 2, ["E11-E22-E33+E44", "E12+E21-E34-E43", "-E12+E21+E34-E43"]),
    row!(1, 2, C, 2, ["E11-E22", "-E12+E21", "-iE12-iE21"]),
    row!(0, 3, H2, 1, ["-q1E11+q1E22", "-q2E11+q2E22", "-q3E11+q3E22"]),
    row!(4, 0, H, 2, ["E11-E22", "E12+E21", "-q1E12+q1E21", "-q2E12+q2E21"]),
    row!(3, 1, R, 4, [
        "E11-E22-E33+E44", "E12+E21+E34+E43", "E13-E24+E31-E42", "-E12+E21-E34+E43"
    ]),
    row!(2, 2, R, 4, [
        "E11-E22-E33+E44", "E12+E21+E34+E43", "-E12+E21-E34+E43", "-E13+E24+E31-E42"
    ]),
    row!(1, 3, H, 2, ["E11-E22", "-E12+E21", "-q1E12-q1E21", "-q2E12-q2E21"]),
    row!(0, 4, H, 2, ["-q1E11+q1E22", "-q2E11+q2E22", "-q3E11+q3E22", "E12-E21"]),
    row!(5, 0, H2, 2, [
        "E11-E22-E33+E44", "E12+E21-E34-E43", "q1(E12-E21-E34+E43)",
        "q2(E12-E21-E34+E43)", "q3(-E12+E21+E34-E43)"
    ]),
    row!(4, 1, C, 4, [
        "E11-E22-E33+E44", "E12+E21+E34+E43", "E13-E24+E31-E42",
        "i(-E13+E24+E31-E42)", "-E12+E21-E34+E43"
    ]),
    row!(3, 2, R2, 4, [
        "E11-E22-E33+E44-E55+E66+E77-E88",
        "E12+E21+E34+E43-E56-E65-E78-E87",
        "E13-E24+E31-E42-E57+E68-E75+E86",
        "-E12+E21-E34+E43+E56-E65+E78-E87",
        "-E13+E24+E31-E42+E57-E68-E75+E86"
    ]),
    row!(2, 3, C, 4, [
        "E11-E22-E33+E44", "E12+E21+E34+E43", "-E12+E21-E34+E43",
        "-E13+E24+E31-E42", "i(-E13+E24-E31+E42)"
    ]),
    row!(1, 4, H2, 2, [
        "E11-E22-E33+E44", "E12-E21-E34+E43", "q1(-E12-E21+E34+E43)",
        "q2(-E12-E21+E34+E43)", "q3(-E12-E21+E34+E43)"
    ]),
    row!(0, 5, C, 4, [
        "i(E11-E22-E33+E44)", "-E12+E21-E34+E43", "i(E12+E21+E34+E43)",
        "-E13+E24+E31-E42", "i(E13-E24+E31-E42)"
    ]),
    row!(6, 0, H, 4, [
        "E11-E22-E33+E44", "E12+E21+E34+E43", "q1(E12-E21+E34-E43)",
        "q2(E12-E21+E34-E43)", "q3(-E12+E21-E34+E43)", "E13-E24+E31-E42"
    ]),
    row!(5, 1, H, 4, [
        "E11-E22-E33+E44", "E12+E21+E34+E43", "E13-E24+E31-E42",
        "q1(-E13+E24+E31-E42)", "q2(-E13+E24+E31-E42)", "-E12+E21-E34+E43"
    ]),
    row!(4, 2, R, 8, [
        "E11-E22-E33+E44-E55+E66+E77-E88",
        "E12+E21+E34+E43+E56+E65+E78+E87",
        "E13-E24+E31-E42+E57-E68+E75-E86",
        "E15-E26-E37+E48+E51-E62-E73+E84",
        "-E12+E21-E34+E43-E56+E65-E78+E87",
        "-E13+E24+E31-E42-E57+E68+E75-E86"
    ]),
    row!(3, 3, R, 8, [
        "E11-E22-E33+E44-E55+E66+E77-E88",
        "E12+E21+E34+E43+E56+E65+E78+E87",
        "E13-E24+E31-E42+E57-E68+E75-E86",
        "-E12+E21-E34+E43-E56+E65-E78+E87",
        "-E13+E24+E31-E42-E57+E68+E75-E86",
        "-E15+E26+E37-E48+E51-E62-E73+E84"
    ]),
    row!(2, 4, H, 4, [
        "E11-E22-E33+E44", "E12+E21+E34+E43", "-E12+E21-E34+E43",
        "-E13+E24+E31-E42", "q1(-E13+E24-E31+E42)", "q2(-E13+E24-E31+E42)"
    ]),
    row!(1, 5, H, 4, [
        "E11-E22-E33+E44", "E12-E21+E34-E43", "q1(-E12-E21-E34-E43)",
        "q2(-E12-E21-E34-E43)", "q3(-E12-E21-E34-E43)", "-E13+E24+E31-E42"
    ]),
    row!(0, 6, R, 8, [
        "-E12+E21+E34-E43+E56-E65-E78+E87",
        "-E13-E24+E31+E42+E57+E68-E75-E86",
        "-E14+E23-E32+E41+E58-E67+E76-E85",
        "-E15-E26-E37-E48+E51+E62+E73+E84",
        "-E16+E25-E38+E47-E52+E61-E74+E83",
        "-E17+E28+E35-E46-E53+E64+E71-E82"
    ]),
];

fn table_row(sig: Signature) -> Result<&'static TableRow, RepError> {
    TABLE
        .iter()
        .find(|r| r.p == sig.p && r.q == sig.q)
        .ok_or(RepError::Unsupported { p: sig.p, q: sig.q })
}

pub fn bott_class(sig: Signature) -> BottClass {
    let r = table_row(sig).expect("signature validated on construction");
    BottClass { kind: r.kind, t: r.t }
}

/// Integer quaternion a + b i + c j + d k. For complex-class tables only
/// the first two components are used (i is the complex unit).
pub type Quat = [i32; 4];

fn qmul(a: Quat, b: Quat) -> Quat {
    [
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
    ]
}

fn unit(name: &str) -> Option<Quat> {
    Some(match name {
        "" => [1, 0, 0, 0],
        "i" | "q1" => [0, 1, 0, 0],
        "q2" => [0, 0, 1, 0],
        "q3" => [0, 0, 0, 1],
        _ => return None,
    })
}

/// Square matrix over integer quaternions, row-major: the symbolic form of a
/// table entry before complex expansion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuatMatrix {
    pub dim: usize,
    pub entries: Vec<Quat>,
}

impl QuatMatrix {
    pub fn zeros(dim: usize) -> Self {
        QuatMatrix {
            dim,
            entries: vec![[0; 4]; dim * dim],
        }
    }
    pub fn get(&self, r: usize, c: usize) -> Quat {
        self.entries[r * self.dim + c]
    }
    fn add(&mut self, r: usize, c: usize, x: Quat) {
        let e = &mut self.entries[r * self.dim + c];
        for k in 0..4 {
            e[k] += x[k];
        }
    }

    /// Entry as text, e.g. "-q2" or "1+i".
    pub fn entry_string(&self, r: usize, c: usize, kind: Kind) -> String {
        let e = self.get(r, c);
        let names: [&str; 4] = if kind.is_quaternionic() {
            ["", "q1", "q2", "q3"]
        } else {
            ["", "i", "j", "k"]
        };
        let mut s = String::new();
        for k in 0..4 {
            let v = e[k];
            if v == 0 {
                continue;
            }
            if v < 0 {
                s.push('-');
            } else if !s.is_empty() {
                s.push('+');
            }
            if v.abs() != 1 || k == 0 {
                s.push_str(&v.abs().to_string());
            }
            s.push_str(names[k]);
        }
        if s.is_empty() {
            "0".into()
        } else {
            s
        }
    }
}

/// Parse one generator string like "q1(-E12+E21)" or "-iE12-iE21".
fn parse_generator(s: &str, dim: usize) -> Result<QuatMatrix, RepError> {
    let bad = || RepError::Table(s.to_string());
    let (outer, body) = match s.find('(') {
        Some(i) if s.ends_with(')') => (unit(&s[..i]).ok_or_else(bad)?, &s[i + 1..s.len() - 1]),
        _ => ([1, 0, 0, 0], s),
    };
    let mut m = QuatMatrix::zeros(dim);
    let b = body.as_bytes();
    let mut i = 0;
    while i < b.len() {
        let mut sign = 1;
        if b[i] == b'+' || b[i] == b'-' {
            if b[i] == b'-' {
                sign = -1;
            }
            i += 1;
        }
        let start = i;
        while i < b.len() && b[i] != b'E' {
            i += 1;
        }
        let u = unit(&body[start..i]).ok_or_else(bad)?;
        if i + 2 >= b.len() {
            return Err(bad());
        }
        let r = (b[i + 1] as char).to_digit(10).ok_or_else(bad)? as usize;
        let c = (b[i + 2] as char).to_digit(10).ok_or_else(bad)? as usize;
        if r == 0 || c == 0 || r > dim || c > dim {
            return Err(bad());
        }
        i += 3;
        let x = qmul(outer, u).map(|v| v * sign);
        m.add(r - 1, c - 1, x);
    }
    Ok(m)
}

/// Generator matrices exactly as tabulated, quaternion entries symbolic.
pub fn basis_rep_table(sig: Signature) -> Result<Vec<QuatMatrix>, RepError> {
    let row = table_row(sig)?;
    let dim = row.t * row.kind.blocks();
    row.gens.iter().map(|g| parse_generator(g, dim)).collect()
}

fn q_to_block(x: Quat) -> [[Complex64; 2]; 2] {
    let c = |re: i32, im: i32| Complex64::new(re as f64, im as f64);
    // a + b diag(i,-i) + c [[0,1],[-1,0]] + d [[0,i],[i,0]]
    [
        [c(x[0], x[1]), c(x[2], x[3])],
        [c(-x[2], x[3]), c(x[0], -x[1])],
    ]
}

/// Replace each quaternion entry by its 2x2 complex block.
pub fn expand_quaternions(m: &QuatMatrix, kind: Kind) -> Result<CMatrix, RepError> {
    if !kind.is_quaternionic() {
        return Err(RepError::NotQuaternionic(kind));
    }
    let d = m.dim;
    let mut out = CMatrix::zeros(2 * d, 2 * d);
    for r in 0..d {
        for c in 0..d {
            let blk = q_to_block(m.get(r, c));
            for i in 0..2 {
                for j in 0..2 {
                    out[(2 * r + i, 2 * c + j)] = blk[i][j];
                }
            }
        }
    }
    Ok(out)
}

fn to_complex(m: &QuatMatrix, kind: Kind) -> Result<CMatrix, RepError> {
    if kind.is_quaternionic() {
        return expand_quaternions(m, kind);
    }
    let d = m.dim;
    Ok(CMatrix::from_fn(d, d, |r, c| {
        let e = m.get(r, c);
        Complex64::new(e[0] as f64, e[1] as f64)
    }))
}

/// Result of converting a matrix back to a multivector.
#[derive(Debug, Clone)]
pub struct MvDecomposition {
    pub mv: Multivector,
    /// |Im| of each coefficient; identically zero for complex-class algebras.
    pub imag: Vec<f64>,
}

impl MvDecomposition {
    pub fn max_imag(&self) -> f64 {
        self.imag.iter().fold(0.0, |m, &x| m.max(x))
    }
}

/// A fully expanded representation: one complex matrix per blade.
#[derive(Debug, Clone)]
pub struct Representation {
    pub sig: Signature,
    pub class: BottClass,
    /// Generators as tabulated (symbolic quaternions).
    pub table: Vec<QuatMatrix>,
    /// Expanded generator matrices.
    pub generators: Vec<CMatrix>,
    /// rep(e_J) indexed by blade mask, products in ascending index order.
    blades: Vec<CMatrix>,
    /// Sign s_J with rep(e_J)^-1 = s_J rep(e_J).
    inv_sign: Vec<f64>,
    m: usize,
}

impl Representation {
    pub fn new(sig: Signature) -> Result<Self, RepError> {
        let class = bott_class(sig);
        let table = basis_rep_table(sig)?;
        let generators: Vec<CMatrix> = table
            .iter()
            .map(|g| to_complex(g, class.kind))
            .collect::<Result<_, _>>()?;
        let m = class.complex_dim();
        let mut blades = Vec::with_capacity(sig.dim());
        let mut inv_sign = Vec::with_capacity(sig.dim());
        for mask in 0..sig.dim() {
            let mut b = CMatrix::identity(m, m);
            for (i, g) in generators.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    b = &b * g;
                }
            }
            let e = Multivector::blade(sig, Blade(mask as u32), 1.0);
            inv_sign.push(e.square().get(Blade::SCALAR));
            blades.push(b);
        }
        Ok(Representation {
            sig,
            class,
            table,
            generators,
            blades,
            inv_sign,
            m,
        })
    }

    /// Shared, lazily built representation for a signature.
    pub fn get(sig: Signature) -> &'static Representation {
        static CACHE: OnceLock<HashMap<(usize, usize), Representation>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| {
            Signature::all()
                .into_iter()
                .map(|s| ((s.p, s.q), Representation::new(s).expect("built-in table")))
                .collect()
        });
        &cache[&(sig.p, sig.q)]
    }

    /// Complex matrix size.
    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn blade_matrix(&self, b: Blade) -> &CMatrix {
        &self.blades[b.0 as usize]
    }

    pub fn is_quaternionic(&self) -> bool {
        self.class.kind.is_quaternionic()
    }

    /// Diagonal index ranges that are decomposed independently (2R/2H blocks).
    pub fn blocks(&self) -> Vec<Range<usize>> {
        let nb = self.class.kind.blocks();
        let b = self.m / nb;
        (0..nb).map(|k| k * b..(k + 1) * b).collect()
    }

    /// Groups of diagonal positions forced to carry the same sign in a root
    /// (quaternionic 2x2 blocks); singletons otherwise.
    pub fn sign_groups(&self) -> Vec<Vec<usize>> {
        if self.is_quaternionic() {
            (0..self.m / 2).map(|k| vec![2 * k, 2 * k + 1]).collect()
        } else {
            (0..self.m).map(|k| vec![k]).collect()
        }
    }

    pub fn mv_to_matrix(&self, a: &Multivector) -> CMatrix {
        assert_eq!(a.sig(), self.sig, "multivector from another algebra");
        let mut out = CMatrix::zeros(self.m, self.m);
        for (mask, &c) in a.coeffs().iter().enumerate() {
            if c != 0.0 {
                out += &self.blades[mask] * Complex64::new(c, 0.0);
            }
        }
        out
    }

    /// Coefficients a_J = Tr(rep(e_J)^-1 M)/m. The imaginary residue is kept
    /// per coefficient; complex-class algebras take the real part only,
    /// since there the central pseudoscalar is +-i times the identity and
    /// every complex matrix is a real multivector.
    pub fn matrix_to_mv(&self, mat: &CMatrix) -> Result<MvDecomposition, RepError> {
        if mat.nrows() != self.m || mat.ncols() != self.m {
            return Err(RepError::DimensionMismatch {
                got: mat.nrows(),
                expected: self.m,
            });
        }
        let n = self.sig.dim();
        let mut coeffs = vec![0.0; n];
        let mut imag = vec![0.0; n];
        let complex_class = self.class.kind == Kind::C;
        for mask in 0..n {
            let b = &self.blades[mask];
            let mut tr = Complex64::new(0.0, 0.0);
            for i in 0..self.m {
                for k in 0..self.m {
                    let x = b[(i, k)];
                    if x.re != 0.0 || x.im != 0.0 {
                        tr += x * mat[(k, i)];
                    }
                }
            }
            let c = tr * (self.inv_sign[mask] / self.m as f64);
            coeffs[mask] = c.re;
            if !complex_class {
                imag[mask] = c.im.abs();
            }
        }
        Ok(MvDecomposition {
            mv: Multivector::from_coeffs(self.sig, coeffs).expect("length"),
            imag,
        })
    }

    /// Checks e_i^2 = +-1 and e_i e_j = -e_j e_i exactly on the expanded
    /// generators. Returns a list of failures (empty when all axioms hold).
    pub fn axiom_failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        let id = CMatrix::identity(self.m, self.m);
        for (i, g) in self.generators.iter().enumerate() {
            let s = self.sig.generator_square(i);
            if g * g != &id * Complex64::new(s, 0.0) {
                out.push(format!("e{}^2 != {}", i + 1, s));
            }
            for (j, h) in self.generators.iter().enumerate().skip(i + 1) {
                let ac = g * h + h * g;
                if ac.iter().any(|z| *z != Complex64::new(0.0, 0.0)) {
                    out.push(format!("e{} e{} + e{} e{} != 0", i + 1, j + 1, j + 1, i + 1));
                }
            }
        }
        out
    }
}

/// Idempotent/ideal data per algebra: idempotent factors f (P = prod (1+f)/2),
/// division ring basis K, ideal basis blades S, and whether the algebra splits
/// into two blocks (second block built from the grade-involuted data).
struct IdealData {
    p: usize,
    q: usize,
    factors: &'static [&'static str],
    ring: &'static [&'static str],
    ideal: &'static [&'static str],
    two_blocks: bool,
}

macro_rules! ideal {
    ($p:expr, $q:expr, [$($f:expr),*], [$($k:expr),*], [$($s:expr),*], $two:expr) => {
        IdealData { p: $p, q: $q, factors: &[$($f),*], ring: &[$($k),*], ideal: &[$($s),*], two_blocks: $two }
    };
}

static IDEALS: &[IdealData] = &[
    ideal!(1, 0, ["e1"], ["1"], ["1"], true),
    ideal!(0, 1, [], ["1", "e1"], ["1"], false),
    ideal!(2, 0, ["e1"], ["1"], ["1", "e2"], false),
    ideal!(1, 1, ["e1"], ["1"], ["1", "e2"], false),
    ideal!(0, 2, [], ["1", "e1", "e2"], ["1"], false),
    ideal!(3, 0, ["e1"], ["1", "e23"], ["1", "e2"], false),
    ideal!(2, 1, ["e1", "e23"], ["1"], ["1", "e2"], true),
    ideal!(1, 2, ["e1"], ["1", "e23"], ["1", "e2"], false),
    ideal!(0, 3, ["e123"], ["1", "e1", "e2", "e3"], ["e3"], true),
    ideal!(4, 0, ["e1"], ["1", "e23", "e24", "e34"], ["1", "e2"], false),
    ideal!(3, 1, ["e1", "e24"], ["1"], ["1", "e2", "e3", "e23"], false),
    ideal!(2, 2, ["e1", "e23"], ["1"], ["1", "e2", "e4", "e24"], false),
    ideal!(1, 3, ["e1"], ["1", "e23", "e24", "e34"], ["1", "e2"], false),
    ideal!(0, 4, ["e123"], ["1", "e1", "e2", "e3"], ["e3", "e34"], false),
    ideal!(5, 0, ["e1", "e2345"], ["1", "e23", "e24", "e25"], ["e25", "e5"], true),
    ideal!(4, 1, ["e1", "e25"], ["1", "e34"], ["1", "e2", "e3", "e23"], false),
    ideal!(3, 2, ["e1", "e24", "e35"], ["1"], ["1", "e2", "e3", "e23"], true),
    ideal!(2, 3, ["e1", "e23"], ["1", "e45"], ["1", "e2", "e4", "e24"], false),
    ideal!(1, 4, ["e1", "e2345"], ["1", "e23", "e24", "e25"], ["e25", "e5"], true),
    ideal!(0, 5, ["e123", "e145"], ["1", "e1"], ["1", "e2", "e4", "e24"], false),
    ideal!(6, 0, ["e1", "e2345"], ["1", "e23", "e24", "e25"], ["e25", "e5", "e256", "e56"], false),
    ideal!(5, 1, ["e1", "e26"], ["1", "e34", "e35", "e45"], ["1", "e2", "e3", "e23"], false),
    ideal!(4, 2, ["e1", "e25", "e36"], ["1"], ["1", "e2", "e3", "e23", "e4", "e24", "e34", "e234"], false),
    ideal!(3, 3, ["e1", "e24", "e35"], ["1"], ["1", "e2", "e3", "e23", "e6", "e26", "e36", "e236"], false),
    ideal!(2, 4, ["e1", "e23"], ["1", "e45", "e46", "e56"], ["1", "e2", "e4", "e24"], false),
    ideal!(1, 5, ["e1", "e2345"], ["1", "e23", "e24", "e25"], ["e25", "e5", "e256", "e56"], false),
    ideal!(0, 6, ["e123", "e145", "e246"], ["1"], ["1", "e1", "e2", "e3", "e4", "e5", "e6", "e16"], false),
];

fn blade_mv(sig: Signature, name: &str) -> Multivector {
    if name == "1" {
        return Multivector::one(sig);
    }
    let idx: Vec<usize> = name[1..]
        .chars()
        .map(|c| c.to_digit(10).unwrap() as usize)
        .collect();
    Multivector::blade(sig, Blade::from_indices(&idx).expect("table blade"), 1.0)
}

/// Least-squares coordinates of `x` in the span of `basis` (real), with the
/// reconstruction error.
fn coordinates(basis: &[Multivector], x: &Multivector) -> (Vec<f64>, f64) {
    let n = x.coeffs().len();
    let b = DMatrix::<f64>::from_fn(n, basis.len(), |i, j| basis[j].coeffs()[i]);
    let rhs = nalgebra::DVector::from_column_slice(x.coeffs());
    let svd = b.clone().svd(true, true);
    let c = svd.solve(&rhs, 1e-12).expect("svd solve");
    let err = (&b * &c - rhs).amax();
    (c.iter().copied().collect(), err)
}

/// Rebuild the generator table from the primitive idempotent and its ideal:
/// E_ij(e_k) = S_i^-1 e_k S_j written in the division ring basis {P k P}.
pub fn generate_reps_from_idempotent(sig: Signature) -> Result<Vec<QuatMatrix>, RepError> {
    let data = IDEALS
        .iter()
        .find(|d| d.p == sig.p && d.q == sig.q)
        .ok_or(RepError::Unsupported { p: sig.p, q: sig.q })?;
    let one = Multivector::one(sig);
    let mut pid = one.clone();
    for f in data.factors {
        let half = (&one + &blade_mv(sig, f)).scale(0.5);
        pid = &pid * &half;
    }
    let mut ideal: Vec<Multivector> = data.ideal.iter().map(|s| &blade_mv(sig, s) * &pid).collect();
    if data.two_blocks {
        let hat: Vec<Multivector> = ideal.iter().map(|x| x.grade_involution()).collect();
        ideal.extend(hat);
    }
    let mut ring: Vec<Multivector> = data.ring.iter().map(|k| blade_mv(sig, k)).collect();
    match ring.len() {
        1 | 2 => {}
        3 | 4 => {
            // third quaternion unit is the product of the first two
            let q3 = &ring[1] * &ring[2];
            ring.truncate(3);
            ring.push(q3);
        }
        n => return Err(RepError::DivisionRing(n)),
    }
    let kappa: Vec<Multivector> = ring.iter().map(|k| &(&pid * k) * &pid).collect();
    let kappa_hat: Vec<Multivector> = kappa.iter().map(|x| x.grade_involution()).collect();

    let d = ideal.len();
    let half = if data.two_blocks { d / 2 } else { d };
    let inv: Vec<Multivector> = ideal.iter().map(|s| s.blade_inverse_map()).collect();
    let mut out = Vec::with_capacity(sig.n());
    for k in 0..sig.n() {
        let ek = Multivector::generator(sig, k);
        let mut m = QuatMatrix::zeros(d);
        for i in 0..d {
            let left = &inv[i] * &ek;
            for j in 0..d {
                let x = &left * &ideal[j];
                let (bi, bj) = (i / half, j / half);
                if bi != bj {
                    if x.max_abs() > 1e-12 {
                        return Err(RepError::IdealBasis(sig));
                    }
                    continue;
                }
                let basis = if bi == 0 { &kappa } else { &kappa_hat };
                let (c, err) = coordinates(basis, &x);
                if err > 1e-12 {
                    return Err(RepError::IdealBasis(sig));
                }
                let mut e = [0i32; 4];
                for (slot, v) in c.iter().enumerate() {
                    let r = v.round();
                    if (v - r).abs() > 1e-9 {
                        return Err(RepError::IdealBasis(sig));
                    }
                    e[slot] = r as i32;
                }
                m.add(i, j, e);
            }
        }
        out.push(m);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_mv;

    fn sig(p: usize, q: usize) -> Signature {
        Signature::new(p, q).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn classes() {
        assert_eq!(bott_class(sig(2, 1)).to_string(), "2R(2)");
        assert_eq!(bott_class(sig(1, 3)).to_string(), "H(2)");
        assert_eq!(bott_class(sig(4, 1)).to_string(), "C(4)");
        assert_eq!(sig(3, 1).max_roots(), 16);
        assert_eq!(sig(0, 2).max_roots(), 2);
        assert_eq!(sig(0, 3).max_roots(), 4);
    }

    #[test]
    fn cl11_table() {
        let r = Representation::get(sig(1, 1));
        let g = &r.generators;
        assert_eq!(g[0], CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]));
        assert_eq!(g[1], CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(-1., 0.), c(1., 0.), c(0., 0.)]));
    }

    #[test]
    fn every_table_satisfies_axioms() {
        for s in Signature::all() {
            let r = Representation::get(s);
            assert!(r.axiom_failures().is_empty(), "{s}: {:?}", r.axiom_failures());
            assert_eq!(r.generators.len(), s.n());
        }
    }

    #[test]
    fn generated_equals_table() {
        for s in Signature::all() {
            assert_eq!(generate_reps_from_idempotent(s).unwrap(), basis_rep_table(s).unwrap(), "{s}");
        }
    }

    #[test]
    fn cl30_example_matrix() {
        let s = sig(3, 0);
        let r = Representation::get(s);
        let a = parse_mv("-1 + e3 - e12 + 1/2 e123", s).unwrap();
        let m = r.mv_to_matrix(&a);
        let want = CMatrix::from_row_slice(
            2,
            2,
            &[c(-1., 0.5), c(-1., -1.), c(1., 1.), c(-1., 0.5)],
        );
        assert!((m.clone() - want).norm() < 1e-15);
        let back = r.matrix_to_mv(&m).unwrap();
        assert_eq!(back.mv, a);
    }

    #[test]
    fn cl10_diagonal() {
        let s = sig(1, 0);
        let r = Representation::get(s);
        let m = r.mv_to_matrix(&parse_mv("3 + 2e1", s).unwrap());
        assert_eq!(m, CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(5., 0.), c(1., 0.)])));
    }

    #[test]
    fn quaternion_expansion_gives_dirac_like_matrices() {
        let s = sig(0, 2);
        let r = Representation::get(s);
        assert_eq!(r.dim(), 2);
        // e1 -> q1 -> diag(i, -i)
        assert_eq!(r.generators[0][(0, 0)], c(0., 1.));
        assert_eq!(r.generators[0][(1, 1)], c(0., -1.));
        assert!(expand_quaternions(&r.table[0], Kind::R).is_err());
        assert_eq!(Representation::get(sig(1, 3)).dim(), 4);
        assert_eq!(Representation::get(sig(0, 3)).sign_groups(), vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn identity_and_zero() {
        let s = sig(3, 0);
        let r = Representation::get(s);
        let one = r.matrix_to_mv(&CMatrix::identity(2, 2)).unwrap();
        assert_eq!(one.mv, Multivector::one(s));
        assert_eq!(r.mv_to_matrix(&Multivector::zero(s)), CMatrix::zeros(2, 2));
        assert!(r.matrix_to_mv(&CMatrix::identity(3, 3)).is_err());
    }

    #[test]
    fn entry_strings() {
        let t = basis_rep_table(sig(5, 0)).unwrap();
        assert_eq!(t[2].entry_string(0, 1, Kind::H2), "q1");
        assert_eq!(t[2].entry_string(0, 0, Kind::H2), "0");
        let t = basis_rep_table(sig(3, 0)).unwrap();
        assert_eq!(t[2].entry_string(0, 1, Kind::C), "-i");
    }
}
