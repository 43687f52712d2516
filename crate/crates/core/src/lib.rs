//! Exact symbolic algebra for hybrid quantum-classical dynamics.
//!
//! Elements of the algebra generated by quantum pairs `(q, p)`, classical
//! pairs `(x, k)` and real functions of linear arguments are kept in a
//! normal-ordered canonical form with Gaussian-rational coefficients. On top
//! of that sit the commutator, the ordered Poisson bracket, the one-sided
//! (Anderson) and antisymmetric (Aleksandrov) hybrid brackets, equations of
//! motion, law-violation checks, an independent operator-action oracle and
//! a small expression language.
//!
//! ```
//! use std::sync::Arc;
//! use qcbracket::{calculus::{eom, BracketKind}, dsl::{parse, pretty}, SymbolTable};
//!
//! let table = Arc::new(SymbolTable::with_functions(1, 1, &["V"]).unwrap());
//! let h = parse("1/2*k*p^2", &table).unwrap();
//! let a = parse("x*q + q*x", &table).unwrap();
//! let rate = eom(BracketKind::Anderson, &a, &h).unwrap();
//! assert_eq!(pretty(&rate), "q*p^2 + 2*x*k*p");
//! assert!(!rate.is_hermitian());
//! ```

pub mod algebra;
pub mod calculus;
pub mod checks;
pub mod dsl;
pub mod oracle;
pub mod random;

pub use algebra::{AlgebraError, Coefficient, HybridExpr, SymbolTable};
pub use calculus::BracketKind;
pub use checks::{CheckKind, CheckReport};
