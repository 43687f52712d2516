//! Defects that measure how far a bracket is from antisymmetry, from the
//! Leibniz rule, and from preserving hermiticity or a conserved quantity.
//! Every defect is a canonical expression that vanishes exactly when the
//! law holds for the given inputs.

use std::fmt;
use std::str::FromStr;

use crate::algebra::{AlgebraError, HybridExpr};
use crate::calculus::{bracket, eom, BracketKind};
use crate::dsl::{pretty, CheckArgs, LeibnizOrder, Scenario};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CheckKind {
    Antisymmetry,
    Leibniz,
    HermiticityOfEom,
    Conservation,
}

impl CheckKind {
    pub const ALL: [CheckKind; 4] =
        [CheckKind::Antisymmetry, CheckKind::Leibniz, CheckKind::HermiticityOfEom, CheckKind::Conservation];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Antisymmetry => "antisymmetry",
            CheckKind::Leibniz => "leibniz",
            CheckKind::HermiticityOfEom => "hermiticity_of_eom",
            CheckKind::Conservation => "conservation",
        }
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CheckKind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| {
            format!("unknown check kind `{s}` (expected antisymmetry, leibniz, hermiticity_of_eom or conservation)")
        })
    }
}

/// Outcome of one check. `passed` always equals `defect.is_zero()`.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub kind: CheckKind,
    pub bracket: BracketKind,
    /// Rendered inputs, in a fixed order per kind.
    pub inputs: Vec<(String, String)>,
    pub passed: bool,
    pub defect: HybridExpr,
    /// Partial defects that add up to `defect` (per-ordering Leibniz defects).
    pub parts: Vec<(String, HybridExpr)>,
}

impl CheckReport {
    pub fn new(kind: CheckKind, bracket: BracketKind, inputs: Vec<(String, String)>, defect: HybridExpr) -> Self {
        let defect = defect.canonicalize();
        CheckReport { kind, bracket, inputs, passed: defect.terms().is_empty(), defect, parts: Vec::new() }
    }
}

/// `bracket(a,b) + bracket(b,a)`.
pub fn antisymmetry_defect(kind: BracketKind, a: &HybridExpr, b: &HybridExpr) -> Result<HybridExpr, AlgebraError> {
    bracket(kind, a, b)?.checked_add(&bracket(kind, b, a)?)
}

/// `eom(a*b) - (eom(a)*b + a*eom(b))`, factor order as written.
pub fn leibniz_defect(
    kind: BracketKind,
    a: &HybridExpr,
    b: &HybridExpr,
    h: &HybridExpr,
) -> Result<HybridExpr, AlgebraError> {
    let whole = eom(kind, &a.checked_mul(b)?, h)?;
    let left = eom(kind, a, h)?.checked_mul(b)?;
    let right = a.checked_mul(&eom(kind, b, h)?)?;
    whole.checked_sub(&left.checked_add(&right)?)
}

/// `e - dagger(e)`: twice the antihermitian part.
pub fn hermiticity_defect(e: &HybridExpr) -> HybridExpr {
    e.canonicalize().checked_sub(&e.dagger()).expect("same table")
}

pub fn conservation_check(kind: BracketKind, a: &HybridExpr, h: &HybridExpr) -> Result<CheckReport, AlgebraError> {
    let defect = eom(kind, a, h)?;
    Ok(CheckReport::new(
        CheckKind::Conservation,
        kind,
        vec![("observable".into(), pretty(a)), ("hamiltonian".into(), pretty(h))],
        defect,
    ))
}

fn run_one(kind: BracketKind, args: &CheckArgs) -> Result<CheckReport, AlgebraError> {
    match args {
        CheckArgs::Antisymmetry { a, b } => Ok(CheckReport::new(
            CheckKind::Antisymmetry,
            kind,
            vec![("a".into(), pretty(&a.expr)), ("b".into(), pretty(&b.expr))],
            antisymmetry_defect(kind, &a.expr, &b.expr)?,
        )),
        CheckArgs::Leibniz { a, b, hamiltonian, order } => {
            let inputs = vec![
                ("a".into(), pretty(&a.expr)),
                ("b".into(), pretty(&b.expr)),
                ("hamiltonian".into(), pretty(&hamiltonian.expr)),
            ];
            let ab = leibniz_defect(kind, &a.expr, &b.expr, &hamiltonian.expr)?;
            match order {
                LeibnizOrder::Ab => Ok(CheckReport::new(CheckKind::Leibniz, kind, inputs, ab)),
                LeibnizOrder::Symmetric => {
                    let ba = leibniz_defect(kind, &b.expr, &a.expr, &hamiltonian.expr)?;
                    let mut report = CheckReport::new(CheckKind::Leibniz, kind, inputs, ab.checked_add(&ba)?);
                    report.parts = vec![("a*b".into(), ab), ("b*a".into(), ba)];
                    Ok(report)
                }
            }
        }
        CheckArgs::HermiticityOfEom { observable, hamiltonian } => {
            let rate = eom(kind, &observable.expr, &hamiltonian.expr)?;
            Ok(CheckReport::new(
                CheckKind::HermiticityOfEom,
                kind,
                vec![
                    ("observable".into(), pretty(&observable.expr)),
                    ("hamiltonian".into(), pretty(&hamiltonian.expr)),
                ],
                hermiticity_defect(&rate),
            ))
        }
        CheckArgs::Conservation { observable, hamiltonian } => {
            conservation_check(kind, &observable.expr, &hamiltonian.expr)
        }
    }
}

/// Evaluates every check of `s` in order. A failing check is a result,
/// not an error.
pub fn run_checks(s: &Scenario) -> Result<Vec<CheckReport>, AlgebraError> {
    s.checks.iter().map(|c| run_one(c.bracket, &c.args)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::SymbolTable;
    use crate::dsl::parse;
    use std::sync::Arc;

    fn e(s: &str) -> HybridExpr {
        let t = Arc::new(SymbolTable::with_functions(1, 1, &["V"]).unwrap());
        parse(s, &t).unwrap()
    }

    const H1: &str = "1/2*k*p^2";
    const H2: &str = "1/2*p^2 + 1/2*k^2 + V(q - x)";

    #[test]
    fn antisymmetry_examples() {
        use BracketKind::*;
        assert!(antisymmetry_defect(Aleksandrov, &e("x*q"), &e("k*p")).unwrap().is_zero());
        assert_eq!(antisymmetry_defect(Anderson, &e("x*q"), &e("k*p")).unwrap(), e("-1"));
        assert!(antisymmetry_defect(Anderson, &e("x"), &e("k")).unwrap().is_zero());
    }

    #[test]
    fn leibniz_examples() {
        use BracketKind::*;
        let h = e(H1);
        assert_eq!(leibniz_defect(Aleksandrov, &e("x"), &e("q"), &h).unwrap(), e("1/2*i*p"));
        assert_eq!(leibniz_defect(Aleksandrov, &e("q"), &e("x"), &h).unwrap(), e("-1/2*i*p"));
        assert_eq!(leibniz_defect(Anderson, &e("x"), &e("q"), &h).unwrap(), e("i*p"));
        assert!(leibniz_defect(Anderson, &e("q"), &e("x"), &h).unwrap().is_zero());
        for kind in [Anderson, Aleksandrov, Commutator] {
            assert!(leibniz_defect(kind, &e("1"), &e("x*p + V(q)"), &e(H2)).unwrap().is_zero());
        }
    }

    #[test]
    fn hermiticity_examples() {
        use BracketKind::*;
        let h = e(H1);
        let a = e("x*q + q*x");
        assert_eq!(hermiticity_defect(&eom(Anderson, &a, &h).unwrap()), e("2*i*p"));
        assert!(hermiticity_defect(&eom(Aleksandrov, &a, &h).unwrap()).is_zero());
        let sq = e("(p + k)^2");
        assert_eq!(hermiticity_defect(&eom(Anderson, &sq, &e(H2)).unwrap()), e("-2*i*V''(q - x)"));
    }

    #[test]
    fn conservation_examples() {
        use BracketKind::*;
        let h2 = e(H2);
        let r = conservation_check(Anderson, &e("p + k"), &h2).unwrap();
        assert!(r.passed && r.defect.is_zero());
        let r = conservation_check(Anderson, &e("(p + k)^2"), &h2).unwrap();
        assert!(!r.passed);
        assert_eq!(r.defect, e("-i*V''(q - x)"));
        let h3 = e("x*p^2 + k*q^2");
        let r = conservation_check(Anderson, &h3, &h3).unwrap();
        assert!(!r.passed);
        assert_eq!(r.defect, e("-4*i*q*p - 2"));
        assert!(conservation_check(Aleksandrov, &h3, &h3).unwrap().passed);
    }

    #[test]
    fn check_kind_names() {
        for k in CheckKind::ALL {
            assert_eq!(k.name().parse::<CheckKind>().unwrap(), k);
        }
        assert!("energy".parse::<CheckKind>().is_err());
    }

    #[test]
    fn empty_scenario_yields_no_reports() {
        let text = r#"{"version": 1, "symbols": {"quantum_modes": 1, "classical_dofs": 1},
            "bracket": "anderson", "checks": []}"#;
        let s = crate::dsl::parse_scenario(text).unwrap();
        assert!(run_checks(&s).unwrap().is_empty());
    }
}
