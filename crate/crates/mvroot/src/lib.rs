//! Square roots of multivectors in real Clifford algebras Cl(p,q), p+q <= 6.
//!
//! The spectral method maps a multivector to its matrix representation,
//! diagonalizes it, takes every admissible combination of principal square
//! roots of the eigenvalues and maps back, keeping the real results. Closed
//! formulas for n <= 3 and several 4D shapes are available as an independent
//! check.
//!
//! ```
//! use mvroot::{parse_mv, spectral_sqrt, Signature, SqrtConfig};
//! let sig = Signature::new(3, 0).unwrap();
//! let a = parse_mv("-1 + e3 - e12 + 1/2 e123", sig).unwrap();
//! let report = spectral_sqrt(&a, &SqrtConfig::default());
//! assert_eq!(report.accepted().len(), 4);
//! ```

pub mod algebra;
pub mod closed_form;
pub mod eigen;
pub mod equations;
pub mod parser;
pub mod rep;
pub mod spectral;

pub use algebra::{blade_product, mv_approx_eq, Blade, Multivector, Signature};
pub use parser::{format_mv, parse_mv, ParseError};
pub use rep::{BottClass, Kind, Representation};
pub use spectral::{
    is_primary, mv_exp, mv_function, spectral_sqrt, sqrt_minus_one, RootEntry, RootReport, RootStatus,
    SqrtConfig,
};
