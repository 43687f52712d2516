//! Classical derivatives, the commutator, the ordered Poisson bracket, the
//! two hybrid brackets and the equation of motion built on them.

use std::fmt;
use std::str::FromStr;

use crate::algebra::{rat, AlgebraError, Coefficient, HybridExpr, QuantumGenerator, QuantumWord, Rational, Term};

/// Which bracket to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BracketKind {
    Commutator,
    Poisson,
    /// One-sided `[A,B] + i{A,B}`; not antisymmetric.
    Anderson,
    /// Antisymmetric `[A,B] + (i/2){A,B} - (i/2){B,A}`.
    Aleksandrov,
}

impl BracketKind {
    pub const ALL: [BracketKind; 4] =
        [BracketKind::Commutator, BracketKind::Poisson, BracketKind::Anderson, BracketKind::Aleksandrov];

    pub fn name(self) -> &'static str {
        match self {
            BracketKind::Commutator => "commutator",
            BracketKind::Poisson => "poisson",
            BracketKind::Anderson => "anderson",
            BracketKind::Aleksandrov => "aleksandrov",
        }
    }

    pub fn is_dynamical(self) -> bool {
        self != BracketKind::Poisson
    }
}

impl fmt::Display for BracketKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownBracket(pub String);

impl fmt::Display for UnknownBracket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown bracket kind `{}` (expected commutator, poisson, anderson or aleksandrov)", self.0)
    }
}

impl std::error::Error for UnknownBracket {}

impl FromStr for BracketKind {
    type Err = UnknownBracket;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BracketKind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| UnknownBracket(s.to_string()))
    }
}

#[derive(Clone, Copy)]
enum Var {
    X,
    K,
}

fn partial(e: &HybridExpr, var: Var, dof: usize) -> Result<HybridExpr, AlgebraError> {
    e.table().check_dof(dof)?;
    let mut out = Vec::new();
    for t in e.terms() {
        let classical = match var {
            Var::X => t.classical.diff_x(dof),
            Var::K => t.classical.diff_k(dof),
        };
        if let Some((n, m)) = classical {
            out.push(Term::new(t.coeff.scale_real(&Rational::from_integer(n.into())), m, t.word.clone()));
        }
        for (j, g) in t.word.letters().iter().enumerate() {
            let QuantumGenerator::F(f) = g else { continue };
            let b = match var {
                Var::X => f.arg.x_coeff(dof),
                Var::K => f.arg.k_coeff(dof),
            };
            if num::Zero::is_zero(&b) {
                continue;
            }
            let mut letters = t.word.letters().to_vec();
            letters[j] = QuantumGenerator::F(f.derived());
            out.push(Term::new(t.coeff.scale_real(&b), t.classical.clone(), QuantumWord(letters)));
        }
    }
    Ok(HybridExpr::from_terms(e.table(), out)?.canonicalize())
}

/// `∂e/∂x_dof`, applied factor by factor in place.
pub fn pd_x(e: &HybridExpr, dof: usize) -> Result<HybridExpr, AlgebraError> {
    partial(e, Var::X, dof)
}

/// `∂e/∂k_dof`.
pub fn pd_k(e: &HybridExpr, dof: usize) -> Result<HybridExpr, AlgebraError> {
    partial(e, Var::K, dof)
}

pub fn commutator(a: &HybridExpr, b: &HybridExpr) -> Result<HybridExpr, AlgebraError> {
    a.raw_mul(b)?.checked_sub(&b.raw_mul(a)?)
}

/// `Σ_d ∂_x a · ∂_k b - ∂_k a · ∂_x b` with the `a` factor always on the left.
pub fn poisson(a: &HybridExpr, b: &HybridExpr) -> Result<HybridExpr, AlgebraError> {
    let mut acc = HybridExpr::zero(a.table());
    for d in 1..=a.table().classical_dofs() {
        let forward = pd_x(a, d)?.raw_mul(&pd_k(b, d)?)?;
        let backward = pd_k(a, d)?.raw_mul(&pd_x(b, d)?)?;
        acc = acc.raw_add(&forward)?.raw_add(&backward.raw_scale(&Coefficient::from_int(-1)))?;
    }
    Ok(acc.canonicalize())
}

pub fn bracket(kind: BracketKind, a: &HybridExpr, b: &HybridExpr) -> Result<HybridExpr, AlgebraError> {
    match kind {
        BracketKind::Commutator => commutator(a, b),
        BracketKind::Poisson => poisson(a, b),
        BracketKind::Anderson => commutator(a, b)?.checked_add(&poisson(a, b)?.scale(&Coefficient::i())),
        BracketKind::Aleksandrov => {
            let half_i = Coefficient::imag(rat(1, 2));
            let sym = poisson(a, b)?.checked_sub(&poisson(b, a)?)?;
            commutator(a, b)?.checked_add(&sym.scale(&half_i))
        }
    }
}

/// Time derivative `-i · bracket(kind, a, h)`. Poisson is rejected.
pub fn eom(kind: BracketKind, a: &HybridExpr, h: &HybridExpr) -> Result<HybridExpr, AlgebraError> {
    if !kind.is_dynamical() {
        return Err(AlgebraError::NotDynamical(kind.name().to_string()));
    }
    Ok(bracket(kind, a, h)?.scale(&-Coefficient::i()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::SymbolTable;
    use crate::dsl::{parse, pretty};
    use std::sync::Arc;

    fn table() -> Arc<SymbolTable> {
        Arc::new(SymbolTable::with_functions(1, 1, &["V"]).unwrap())
    }

    fn e(s: &str) -> HybridExpr {
        parse(s, &table()).unwrap()
    }

    #[test]
    fn bracket_kind_names() {
        for k in BracketKind::ALL {
            assert_eq!(k.name().parse::<BracketKind>().unwrap(), k);
        }
        assert!("alex2".parse::<BracketKind>().is_err());
    }

    #[test]
    fn pd_x_examples() {
        assert_eq!(pd_x(&e("x^2*k"), 1).unwrap(), e("2*x*k"));
        assert_eq!(pd_x(&e("V(q - x)"), 1).unwrap(), e("-V'(q - x)"));
        assert!(pd_x(&e("q"), 1).unwrap().is_zero());
        assert!(pd_x(&e("q"), 2).is_err());
    }

    #[test]
    fn pd_k_examples() {
        assert_eq!(pd_k(&e("1/2*k*p^2"), 1).unwrap(), e("1/2*p^2"));
        assert!(pd_k(&e("x"), 1).unwrap().is_zero());
        assert_eq!(pd_k(&e("k^2*q"), 1).unwrap(), e("2*k*q"));
    }

    #[test]
    fn commutator_examples() {
        assert_eq!(commutator(&e("q"), &e("p")).unwrap(), e("i"));
        assert_eq!(commutator(&e("p"), &e("V(q - x)")).unwrap(), e("-i*V'(q - x)"));
        assert_eq!(commutator(&e("q^2"), &e("p^2")).unwrap(), e("4*i*q*p + 2"));
    }

    #[test]
    fn poisson_examples() {
        assert_eq!(poisson(&e("x"), &e("k")).unwrap(), e("1"));
        assert_eq!(poisson(&e("x*q"), &e("k*p")).unwrap(), e("q*p"));
        let h2 = e("1/2*p^2 + 1/2*k^2 + V(q - x)");
        assert_eq!(poisson(&e("p + k"), &h2).unwrap(), e("V'(q - x)"));
    }

    #[test]
    fn bracket_examples() {
        assert_eq!(bracket(BracketKind::Aleksandrov, &e("x"), &e("k")).unwrap(), e("i"));
        assert_eq!(bracket(BracketKind::Anderson, &e("x*q"), &e("k*p")).unwrap(), e("i*x*k + i*q*p"));
        let a = e("x*p^2 + k*q^2");
        assert!(bracket(BracketKind::Aleksandrov, &a, &a).unwrap().is_zero());
    }

    #[test]
    fn eom_examples() {
        let h = e("1/2*k*p^2");
        assert_eq!(eom(BracketKind::Aleksandrov, &e("q"), &h).unwrap(), e("k*p"));
        let a = e("x*q + q*x");
        let anderson = eom(BracketKind::Anderson, &a, &h).unwrap();
        assert_eq!(pretty(&anderson), "q*p^2 + 2*x*k*p");
        let alex = eom(BracketKind::Aleksandrov, &a, &h).unwrap();
        assert_eq!(alex, e("q*p^2 - i*p + 2*x*k*p"));
        assert_eq!(alex, e("1/2*p^2*q + 1/2*q*p^2 + 2*x*k*p"));
        assert!(matches!(eom(BracketKind::Poisson, &a, &h), Err(AlgebraError::NotDynamical(_))));
    }

    #[test]
    fn eom_of_constant_vanishes() {
        let h = e("x*p^2 + k*q^2 + V(q - x)");
        for kind in [BracketKind::Anderson, BracketKind::Aleksandrov, BracketKind::Commutator] {
            assert!(eom(kind, &e("3/2 - 2*i"), &h).unwrap().is_zero());
        }
    }
}
