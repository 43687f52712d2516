use crate::algebra::Rational;

/// Byte range into the source text.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    Dag,
    Comm,
    Pb,
    Anderson,
    Alex,
}

impl Builtin {
    pub fn from_name(name: &str) -> Option<Builtin> {
        Some(match name {
            "dag" => Builtin::Dag,
            "comm" => Builtin::Comm,
            "pb" => Builtin::Pb,
            "anderson" => Builtin::Anderson,
            "alex" => Builtin::Alex,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Dag => "dag",
            Builtin::Comm => "comm",
            Builtin::Pb => "pb",
            Builtin::Anderson => "anderson",
            Builtin::Alex => "alex",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Builtin::Dag => 1,
            _ => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum AstKind {
    Sum(Vec<Ast>),
    Product(Vec<Ast>),
    Power(Box<Ast>, u32),
    Neg(Box<Ast>),
    /// Denominator may be zero here; evaluation rejects it.
    Rational(num::BigInt, num::BigInt),
    ImagUnit,
    Symbol(String),
    FuncApp {
        name: String,
        primes: u32,
        arg: Box<Ast>,
    },
    Call {
        builtin: Builtin,
        args: Vec<Ast>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Ast {
    pub kind: AstKind,
    pub span: Span,
}

impl Ast {
    pub fn new(kind: AstKind, span: Span) -> Self {
        Ast { kind, span }
    }
}

pub(crate) fn ratio(n: &num::BigInt, d: &num::BigInt) -> Option<Rational> {
    if num::Zero::is_zero(d) {
        None
    } else {
        Some(Rational::new(n.clone(), d.clone()))
    }
}
