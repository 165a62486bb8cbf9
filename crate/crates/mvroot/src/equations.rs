//! Quadratic and Riccati-Clifford equations solved through square roots.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{max_diff, AlgebraError, Multivector};
use crate::eigen;
use crate::rep::Representation;
use crate::spectral::{spectral_sqrt, RootEntry, RootReport, RootStatus, SqrtConfig};

#[derive(Debug, Error)]
pub enum EquationError {
    #[error("multivector is not invertible: {0}")]
    Singular(String),
    #[error("C does not commute with e{0}")]
    NotCentral(usize),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A^-1 through the matrix representation.
pub fn mv_inverse(a: &Multivector) -> Result<Multivector, EquationError> {
    let rep = Representation::get(a.sig());
    let m = rep.mv_to_matrix(a);
    let inv = eigen::invert(&m).map_err(|e| EquationError::Singular(e.to_string()))?;
    let dec = rep
        .matrix_to_mv(&inv)
        .map_err(|e| EquationError::Singular(e.to_string()))?;
    let x = dec.mv;
    let one = Multivector::one(a.sig());
    let tol = 1e-9 * (1.0 + x.max_abs() * a.max_abs());
    if max_diff(&(a * &x), &one) > tol || max_diff(&(&x * a), &one) > tol {
        return Err(EquationError::Singular("inverse fails to verify".into()));
    }
    Ok(x)
}

/// Solutions of an equation, each checked by substitution.
#[derive(Debug, Clone, Serialize)]
pub struct Solutions {
    /// Report for the radicand whose roots were used.
    pub radicand: RootReport,
    pub solutions: Vec<Solution>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Solution {
    /// Label of the root it came from.
    pub label: String,
    pub x: Multivector,
    /// max |lhs - rhs| after substitution
    pub residual: f64,
}

impl Solutions {
    pub fn xs(&self) -> Vec<&Multivector> {
        self.solutions.iter().map(|s| &s.x).collect()
    }
}

const SOLUTION_TOL: f64 = 1e-8;

fn roots(report: &RootReport) -> impl Iterator<Item = &RootEntry> {
    report
        .entries
        .iter()
        .filter(|e| e.status == RootStatus::Accepted)
}

/// X^2 + AX + XA + B = 0, i.e. X = -A + R with R^2 = A^2 - B.
pub fn solve_quadratic(
    a: &Multivector,
    b: &Multivector,
    cfg: &SqrtConfig,
) -> Result<Solutions, EquationError> {
    let rad = a.square().try_sub(b)?;
    let report = spectral_sqrt(&rad, cfg);
    let mut solutions = Vec::new();
    let mut push = |label: String, x: Multivector| {
        let lhs = &(&(&x.square() + &(a * &x)) + &(&x * a)) + b;
        let residual = lhs.max_abs();
        let scale = 1.0 + x.max_abs().powi(2) + a.max_abs() * x.max_abs() + b.max_abs();
        if residual <= SOLUTION_TOL * scale {
            solutions.push(Solution { label, x, residual });
        }
    };
    if rad.is_zero() {
        push("(0)".into(), -a);
    }
    for e in roots(&report) {
        push(e.label.clone(), &e.root - a);
    }
    Ok(Solutions {
        radicand: report,
        solutions,
    })
}

/// Which root of the radicand to take in each +- pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum SignChoice {
    Plus,
    Minus,
    #[default]
    Both,
}

/// X A X + C X + X C = B with C central.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RiccatiProblem {
    pub a: Multivector,
    pub b: Multivector,
    pub c: Multivector,
    #[serde(default)]
    pub sign: SignChoice,
}

/// C commutes with every generator (so with everything).
pub fn check_central(c: &Multivector) -> Result<(), EquationError> {
    let sig = c.sig();
    for i in 0..sig.n() {
        let g = Multivector::generator(sig, i);
        if !c.commutes_with(&g, 1e-10) {
            return Err(EquationError::NotCentral(i + 1));
        }
    }
    Ok(())
}

// First sign of the pattern, or the label sign for non-spectral entries.
fn is_plus(e: &RootEntry) -> bool {
    match e.pattern.first() {
        Some(&s) => s > 0,
        None => !e.label.starts_with("(-"),
    }
}

/// X = (-C + R) A^-1 for every root R of B A + C^2.
pub fn solve_riccati(prob: &RiccatiProblem, cfg: &SqrtConfig) -> Result<Solutions, EquationError> {
    let RiccatiProblem { a, b, c, sign } = prob;
    check_central(c)?;
    let ainv = mv_inverse(a)?;
    let rad = &b.geometric_product(a)? + &c.square();
    let report = spectral_sqrt(&rad, cfg);
    let mut solutions = Vec::new();
    for e in roots(&report) {
        let keep = match sign {
            SignChoice::Both => true,
            SignChoice::Plus => is_plus(e),
            SignChoice::Minus => !is_plus(e),
        };
        if !keep {
            continue;
        }
        let x = &(&e.root - c) * &ainv;
        let lhs = &(&(&(&x * a) * &x) + &(c * &x)) + &(&x * c);
        let residual = max_diff(&lhs, b);
        let xm = x.max_abs();
        let scale = 1.0 + xm * xm * a.max_abs() + 2.0 * xm * c.max_abs() + b.max_abs();
        if residual <= SOLUTION_TOL * scale {
            solutions.push(Solution {
                label: e.label.clone(),
                x,
                residual,
            });
        }
    }
    Ok(Solutions {
        radicand: report,
        solutions,
    })
}
