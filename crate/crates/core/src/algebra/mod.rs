//! Exact elements of the hybrid algebra: quantum pairs `(q_m, p_m)` with
//! `[q_m, p_n] = i δ_mn`, commuting classical pairs `(x_d, k_d)`, and real
//! function factors of real-linear arguments.

mod canon;
mod coeff;
mod expr;
mod symbols;
mod term;

pub use coeff::{format_rational, Coefficient, Rational};
pub use expr::{add, dagger, equals, is_hermitian, mul, scale, sub, HybridExpr};
pub use symbols::{generator_shape, is_reserved_name, FunctionSymbol, SymbolTable, BUILTINS};
pub use term::{ClassicalMonomial, FuncFactor, LinearArg, LinearArgBuilder, QuantumGenerator, QuantumWord, Term};

pub(crate) use coeff::rat;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("invalid symbol table: {0}")]
    InvalidTable(String),
    #[error("quantum mode {mode} out of range 1..={modes}")]
    ModeOutOfRange { mode: usize, modes: usize },
    #[error("classical dof {dof} out of range 1..={dofs}")]
    DofOutOfRange { dof: usize, dofs: usize },
    #[error("unknown function symbol id {0}")]
    UnknownFunction(usize),
    #[error("function argument must have at least one nonzero entry")]
    ZeroArgument,
    #[error("operands belong to different symbol tables")]
    TableMismatch,
    #[error("bracket `{0}` does not generate dynamics")]
    NotDynamical(String),
}
