use std::sync::Arc;

use num::BigRational;
use proptest::prelude::*;
use qcbracket::algebra::{ClassicalMonomial, FuncFactor, LinearArg, QuantumGenerator, QuantumWord, Term};
use qcbracket::calculus::{bracket, commutator, eom, pd_k, pd_x, poisson};
use qcbracket::checks::{antisymmetry_defect, conservation_check, hermiticity_defect, leibniz_defect};
use qcbracket::dsl::{parse, parse_raw, pretty, Bindings};
use qcbracket::oracle::{oracle_equal, OracleConfig};
use qcbracket::{BracketKind, Coefficient, HybridExpr, SymbolTable};

fn table() -> Arc<SymbolTable> {
    Arc::new(SymbolTable::with_functions(2, 2, &["V", "W"]).unwrap())
}

fn r(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn coefficient() -> impl Strategy<Value = Coefficient> {
    (-3i64..=3, 1i64..=3, -2i64..=2, 1i64..=2)
        .prop_map(|(a, b, c, d)| Coefficient::ratio(a, b) + Coefficient::ratio(c, d) * Coefficient::i())
        .prop_filter("nonzero", |c| !c.is_zero())
}

fn linear_arg() -> impl Strategy<Value = LinearArg> {
    let nz = prop_oneof![Just(-2i64), Just(-1), Just(1), Just(2)];
    (
        1usize..=2,
        nz.clone(),
        proptest::option::of((1usize..=2, nz.clone())),
        proptest::option::of((1usize..=2, nz.clone())),
        proptest::option::of(nz),
    )
        .prop_map(|(m, c, x, k, c0)| {
            let mut b = LinearArg::builder().q(m, r(c));
            if let Some((d, c)) = x {
                b = b.x(d, r(c));
            }
            if let Some((d, c)) = k {
                b = b.k(d, r(c));
            }
            if let Some(c) = c0 {
                b = b.constant(r(c));
            }
            b.build().unwrap()
        })
}

fn letter(functions: bool) -> BoxedStrategy<QuantumGenerator> {
    let q = (1usize..=2).prop_map(QuantumGenerator::Q);
    let p = (1usize..=2).prop_map(QuantumGenerator::P);
    if functions {
        let f = (0usize..2, 0u32..=1, linear_arg()).prop_map(|(s, n, a)| QuantumGenerator::F(FuncFactor::new(s, n, a)));
        prop_oneof![3 => q, 3 => p, 1 => f].boxed()
    } else {
        prop_oneof![q, p].boxed()
    }
}

fn term(functions: bool) -> impl Strategy<Value = Term> {
    (
        coefficient(),
        proptest::collection::vec((0usize..2, 1usize..=2), 0..=2),
        proptest::collection::vec(letter(functions), 0..=3),
    )
        .prop_map(|(c, classical, letters)| {
            let mut m = ClassicalMonomial::one();
            for (which, dof) in classical {
                if which == 0 {
                    m.mul_x(dof, 1);
                } else {
                    m.mul_k(dof, 1);
                }
            }
            Term::new(c, m, QuantumWord(letters))
        })
}

/// Raw (not normal ordered) expression.
fn raw_expr(functions: bool) -> impl Strategy<Value = HybridExpr> {
    proptest::collection::vec(term(functions), 1..=3).prop_map(|ts| HybridExpr::from_terms(&table(), ts).unwrap())
}

fn expr() -> impl Strategy<Value = HybridExpr> {
    raw_expr(true).prop_map(|e| e.canonicalize())
}

fn polynomial() -> impl Strategy<Value = HybridExpr> {
    raw_expr(false).prop_map(|e| e.canonicalize())
}

fn hermitian() -> impl Strategy<Value = HybridExpr> {
    expr().prop_map(|e| &e + &e.dagger())
}

const DYNAMICAL: [BracketKind; 3] = [BracketKind::Commutator, BracketKind::Anderson, BracketKind::Aleksandrov];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn canonicalization_is_idempotent(e in raw_expr(true)) {
        let c = e.canonicalize();
        prop_assert!(c.is_canonical());
        prop_assert_eq!(c.canonicalize(), c);
    }

    #[test]
    fn multiplication_is_associative(a in expr(), b in expr(), c in expr()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn multiplication_distributes(a in expr(), b in expr(), c in expr()) {
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn addition_commutes(a in expr(), b in expr()) {
        prop_assert_eq!(&a + &b, &b + &a);
    }

    #[test]
    fn classical_generators_are_central(e in expr(), d in 1usize..=2) {
        let t = table();
        for g in [HybridExpr::x(&t, d).unwrap(), HybridExpr::k(&t, d).unwrap()] {
            prop_assert!(commutator(&g, &e).unwrap().is_zero());
        }
    }

    #[test]
    fn canonical_commutation_relations(m in 1usize..=2, n in 1usize..=2) {
        let t = table();
        let c = commutator(&HybridExpr::q(&t, m).unwrap(), &HybridExpr::p(&t, n).unwrap()).unwrap();
        let expected = if m == n { HybridExpr::constant(&t, Coefficient::i()) } else { HybridExpr::zero(&t) };
        prop_assert_eq!(c, expected);
    }

    #[test]
    fn dagger_is_an_involution(e in expr()) {
        prop_assert_eq!(e.dagger().dagger(), e);
    }

    #[test]
    fn dagger_reverses_products(a in expr(), b in expr()) {
        prop_assert_eq!((&a * &b).dagger(), &b.dagger() * &a.dagger());
    }

    #[test]
    fn dagger_is_antilinear(a in expr(), c in coefficient()) {
        prop_assert_eq!(a.scale(&c).dagger(), a.dagger().scale(&c.conj()));
    }

    #[test]
    fn partial_derivatives_are_derivations(a in expr(), b in expr(), d in 1usize..=2) {
        for pd in [pd_x, pd_k] {
            let lhs = pd(&(&a * &b), d).unwrap();
            let rhs = &(&pd(&a, d).unwrap() * &b) + &(&a * &pd(&b, d).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn partial_derivatives_commute_with_dagger(a in expr(), d in 1usize..=2) {
        prop_assert_eq!(pd_x(&a.dagger(), d).unwrap(), pd_x(&a, d).unwrap().dagger());
        prop_assert_eq!(pd_k(&a.dagger(), d).unwrap(), pd_k(&a, d).unwrap().dagger());
    }

    #[test]
    fn aleksandrov_is_antisymmetric(a in expr(), b in expr()) {
        prop_assert!(antisymmetry_defect(BracketKind::Aleksandrov, &a, &b).unwrap().is_zero());
    }

    #[test]
    fn anderson_asymmetry_is_the_symmetrized_poisson_bracket(a in expr(), b in expr()) {
        let defect = antisymmetry_defect(BracketKind::Anderson, &a, &b).unwrap();
        let sym = &poisson(&a, &b).unwrap() + &poisson(&b, &a).unwrap();
        prop_assert_eq!(defect, sym.scale(&Coefficient::i()));
    }

    #[test]
    fn aleksandrov_preserves_hermiticity(a in hermitian(), h in hermitian()) {
        let rate = eom(BracketKind::Aleksandrov, &a, &h).unwrap();
        prop_assert!(rate.is_hermitian());
        prop_assert!(hermiticity_defect(&rate).is_zero());
    }

    #[test]
    fn commutator_dynamics_obeys_leibniz(a in expr(), b in expr(), h in expr()) {
        prop_assert!(leibniz_defect(BracketKind::Commutator, &a, &b, &h).unwrap().is_zero());
    }

    #[test]
    fn commutator_satisfies_jacobi(a in polynomial(), b in polynomial(), c in polynomial()) {
        let cyc = |x: &HybridExpr, y: &HybridExpr, z: &HybridExpr| {
            commutator(x, &commutator(y, z).unwrap()).unwrap()
        };
        let sum = &(&cyc(&a, &b, &c) + &cyc(&b, &c, &a)) + &cyc(&c, &a, &b);
        prop_assert!(sum.is_zero());
    }

    #[test]
    fn leibniz_defect_is_linear_in_each_factor(a1 in expr(), a2 in expr(), b in expr(), h in polynomial()) {
        for kind in DYNAMICAL {
            let whole = leibniz_defect(kind, &(&a1 + &a2), &b, &h).unwrap();
            let parts = &leibniz_defect(kind, &a1, &b, &h).unwrap() + &leibniz_defect(kind, &a2, &b, &h).unwrap();
            prop_assert_eq!(whole, parts);
        }
    }

    #[test]
    fn hermiticity_defect_is_antihermitian(e in expr()) {
        let d = hermiticity_defect(&e);
        prop_assert_eq!(d.dagger(), -&d);
    }

    #[test]
    fn conservation_verdict_matches_defect(a in expr(), h in expr()) {
        for kind in DYNAMICAL {
            let report = conservation_check(kind, &a, &h).unwrap();
            prop_assert_eq!(report.passed, report.defect.is_zero());
            prop_assert_eq!(report.defect, eom(kind, &a, &h).unwrap());
        }
    }

    #[test]
    fn eom_is_minus_i_times_bracket(a in expr(), h in expr()) {
        for kind in DYNAMICAL {
            let scaled = bracket(kind, &a, &h).unwrap().scale(&-Coefficient::i());
            prop_assert_eq!(eom(kind, &a, &h).unwrap(), scaled);
        }
    }

    #[test]
    fn pretty_output_parses_back(e in expr()) {
        prop_assert_eq!(parse(&pretty(&e), e.table()).unwrap(), e);
    }

    #[test]
    fn pretty_is_injective(a in expr(), b in expr()) {
        prop_assert_eq!(pretty(&a) == pretty(&b), a == b);
    }

    #[test]
    fn oracle_accepts_normal_ordering(e in raw_expr(true)) {
        let c = e.canonicalize();
        let cfg = OracleConfig::covering(&[&e, &c], 3, 4);
        prop_assert!(oracle_equal(&e, &c, &cfg).unwrap());
    }

    #[test]
    fn oracle_rejects_a_dropped_term(e in raw_expr(false)) {
        let c = e.canonicalize();
        prop_assume!(!c.is_zero());
        let truncated = HybridExpr::from_terms(c.table(), c.terms()[1..].to_vec()).unwrap();
        let cfg = OracleConfig::covering(&[&c, &truncated], 3, 4);
        prop_assert!(!oracle_equal(&c, &truncated, &cfg).unwrap());
    }
}

#[test]
fn oracle_distinguishes_operator_orderings() {
    let t = table();
    let qp = parse_raw("q*p", &t, &Bindings::new()).unwrap();
    let pq = parse_raw("p*q", &t, &Bindings::new()).unwrap();
    let cfg = OracleConfig::new(4);
    assert!(!oracle_equal(&qp, &pq, &cfg).unwrap());
    assert!(oracle_equal(&pq, &parse("q*p - i", &t).unwrap(), &cfg).unwrap());
}
