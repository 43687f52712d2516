use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::canon::normal_order;
use super::coeff::Coefficient;
use super::symbols::SymbolTable;
use super::term::{ClassicalMonomial, FuncFactor, QuantumGenerator, QuantumWord, Term};
use super::AlgebraError;

/// A finite sum of terms over one symbol table.
///
/// Values built by [`HybridExpr::from_terms`] or [`HybridExpr::raw_mul`] may
/// be in any order; every algebraic operation returns the canonical form,
/// for which equality is structural identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HybridExpr {
    table: Arc<SymbolTable>,
    terms: Vec<Term>,
}

fn same_table(a: &Arc<SymbolTable>, b: &Arc<SymbolTable>) -> Result<(), AlgebraError> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(AlgebraError::TableMismatch)
    }
}

impl HybridExpr {
    pub fn zero(table: &Arc<SymbolTable>) -> Self {
        HybridExpr { table: table.clone(), terms: Vec::new() }
    }

    pub fn constant(table: &Arc<SymbolTable>, c: Coefficient) -> Self {
        Self::from_canonical_terms(table, vec![Term::scalar(c)])
    }

    pub fn one(table: &Arc<SymbolTable>) -> Self {
        Self::constant(table, Coefficient::one())
    }

    pub fn q(table: &Arc<SymbolTable>, mode: usize) -> Result<Self, AlgebraError> {
        Self::letter(table, QuantumGenerator::Q(mode))
    }

    pub fn p(table: &Arc<SymbolTable>, mode: usize) -> Result<Self, AlgebraError> {
        Self::letter(table, QuantumGenerator::P(mode))
    }

    pub fn func(table: &Arc<SymbolTable>, f: FuncFactor) -> Result<Self, AlgebraError> {
        Self::letter(table, QuantumGenerator::F(f))
    }

    pub fn x(table: &Arc<SymbolTable>, dof: usize) -> Result<Self, AlgebraError> {
        table.check_dof(dof)?;
        let t = Term::new(Coefficient::one(), ClassicalMonomial::x(dof, 1), QuantumWord::empty());
        Ok(Self::from_canonical_terms(table, vec![t]))
    }

    pub fn k(table: &Arc<SymbolTable>, dof: usize) -> Result<Self, AlgebraError> {
        table.check_dof(dof)?;
        let t = Term::new(Coefficient::one(), ClassicalMonomial::k(dof, 1), QuantumWord::empty());
        Ok(Self::from_canonical_terms(table, vec![t]))
    }

    fn letter(table: &Arc<SymbolTable>, g: QuantumGenerator) -> Result<Self, AlgebraError> {
        Self::from_terms(table, vec![Term::new(Coefficient::one(), ClassicalMonomial::one(), QuantumWord(vec![g]))])
    }

    /// Wraps arbitrary (possibly non-normal-ordered) terms after checking
    /// every index against the table. No rewriting happens here.
    pub fn from_terms(table: &Arc<SymbolTable>, terms: Vec<Term>) -> Result<Self, AlgebraError> {
        for t in &terms {
            t.validate(table)?;
        }
        Ok(HybridExpr { table: table.clone(), terms })
    }

    fn from_canonical_terms(table: &Arc<SymbolTable>, terms: Vec<Term>) -> Self {
        let terms = terms.into_iter().filter(|t| !t.coeff.is_zero()).collect();
        HybridExpr { table: table.clone(), terms }
    }

    pub fn table(&self) -> &Arc<SymbolTable> {
        &self.table
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Term> {
        self.terms
    }

    /// Zero test on the canonical form.
    pub fn is_zero(&self) -> bool {
        self.canonicalize().terms.is_empty()
    }

    pub fn is_canonical(&self) -> bool {
        let keys: Vec<_> = self.terms.iter().map(Term::key).collect();
        self.terms.iter().all(|t| !t.coeff.is_zero() && t.word.is_normal_ordered())
            && keys.windows(2).all(|w| w[0] < w[1])
    }

    /// True when no term carries a quantum letter.
    pub fn is_classical(&self) -> bool {
        self.terms.iter().all(|t| t.word.is_empty())
    }

    /// Unique normal form. Idempotent.
    pub fn canonicalize(&self) -> Self {
        HybridExpr { table: self.table.clone(), terms: normal_order(self.terms.iter().cloned()) }
    }

    pub fn checked_add(&self, other: &HybridExpr) -> Result<Self, AlgebraError> {
        same_table(&self.table, &other.table)?;
        let terms = self.terms.iter().chain(other.terms.iter()).cloned();
        Ok(HybridExpr { table: self.table.clone(), terms: normal_order(terms) })
    }

    pub fn checked_sub(&self, other: &HybridExpr) -> Result<Self, AlgebraError> {
        self.checked_add(&other.neg_raw())
    }

    /// Distributes and concatenates words without normal ordering.
    pub fn raw_mul(&self, other: &HybridExpr) -> Result<Self, AlgebraError> {
        same_table(&self.table, &other.table)?;
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(Term::new(&a.coeff * &b.coeff, a.classical.mul(&b.classical), a.word.concat(&b.word)));
            }
        }
        Ok(HybridExpr { table: self.table.clone(), terms })
    }

    /// Concatenates the term lists without merging.
    pub fn raw_add(&self, other: &HybridExpr) -> Result<Self, AlgebraError> {
        same_table(&self.table, &other.table)?;
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(HybridExpr { table: self.table.clone(), terms })
    }

    pub fn raw_scale(&self, c: &Coefficient) -> Self {
        let terms = self.terms.iter().map(|t| Term::new(&t.coeff * c, t.classical.clone(), t.word.clone())).collect();
        HybridExpr { table: self.table.clone(), terms }
    }

    fn neg_raw(&self) -> Self {
        self.raw_scale(&Coefficient::from_int(-1))
    }

    pub fn checked_mul(&self, other: &HybridExpr) -> Result<Self, AlgebraError> {
        Ok(self.raw_mul(other)?.canonicalize())
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = HybridExpr::one(&self.table);
        let mut base = self.canonicalize();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.checked_mul(&base).expect("same table");
            }
            e >>= 1;
            if e > 0 {
                base = base.checked_mul(&base).expect("same table");
            }
        }
        acc
    }

    pub fn scale(&self, c: &Coefficient) -> Self {
        self.raw_scale(c).canonicalize()
    }

    /// Hermitian conjugate: conjugated coefficients, reversed words.
    pub fn dagger(&self) -> Self {
        let terms = self.terms.iter().map(|t| Term::new(t.coeff.conj(), t.classical.clone(), t.word.reversed()));
        HybridExpr { table: self.table.clone(), terms: normal_order(terms) }
    }

    pub fn equals(&self, other: &HybridExpr) -> Result<bool, AlgebraError> {
        same_table(&self.table, &other.table)?;
        Ok(self.canonicalize().terms == other.canonicalize().terms)
    }

    pub fn is_hermitian(&self) -> bool {
        let c = self.canonicalize();
        c.terms == c.dagger().terms
    }

    /// Largest number of `p_mode` letters in any single word.
    pub fn max_p_degree(&self, mode: usize) -> usize {
        self.terms.iter().map(|t| t.word.p_degree(mode)).max().unwrap_or(0)
    }

    /// Highest derivative order of function symbol `symbol`, if it occurs.
    pub fn max_deriv_order(&self, symbol: usize) -> Option<u32> {
        self.terms
            .iter()
            .flat_map(|t| t.word.letters())
            .filter_map(|g| match g {
                QuantumGenerator::F(f) if f.symbol == symbol => Some(f.deriv_order),
                _ => None,
            })
            .max()
    }
}

pub fn add(a: &HybridExpr, b: &HybridExpr) -> Result<HybridExpr, AlgebraError> {
    a.checked_add(b)
}

pub fn sub(a: &HybridExpr, b: &HybridExpr) -> Result<HybridExpr, AlgebraError> {
    a.checked_sub(b)
}

pub fn mul(a: &HybridExpr, b: &HybridExpr) -> Result<HybridExpr, AlgebraError> {
    a.checked_mul(b)
}

pub fn scale(c: &Coefficient, e: &HybridExpr) -> HybridExpr {
    e.scale(c)
}

pub fn dagger(e: &HybridExpr) -> HybridExpr {
    e.dagger()
}

pub fn equals(a: &HybridExpr, b: &HybridExpr) -> Result<bool, AlgebraError> {
    a.equals(b)
}

pub fn is_hermitian(e: &HybridExpr) -> bool {
    e.is_hermitian()
}

// Operator sugar. These panic on a table mismatch; use the checked_* methods
// when operands may come from different tables.

impl Add for &HybridExpr {
    type Output = HybridExpr;
    fn add(self, rhs: &HybridExpr) -> HybridExpr {
        self.checked_add(rhs).expect("symbol table mismatch")
    }
}

impl Sub for &HybridExpr {
    type Output = HybridExpr;
    fn sub(self, rhs: &HybridExpr) -> HybridExpr {
        self.checked_sub(rhs).expect("symbol table mismatch")
    }
}

impl Mul for &HybridExpr {
    type Output = HybridExpr;
    fn mul(self, rhs: &HybridExpr) -> HybridExpr {
        self.checked_mul(rhs).expect("symbol table mismatch")
    }
}

impl Neg for &HybridExpr {
    type Output = HybridExpr;
    fn neg(self) -> HybridExpr {
        self.neg_raw().canonicalize()
    }
}

impl Add for HybridExpr {
    type Output = HybridExpr;
    fn add(self, rhs: HybridExpr) -> HybridExpr {
        &self + &rhs
    }
}

impl Sub for HybridExpr {
    type Output = HybridExpr;
    fn sub(self, rhs: HybridExpr) -> HybridExpr {
        &self - &rhs
    }
}

impl Mul for HybridExpr {
    type Output = HybridExpr;
    fn mul(self, rhs: HybridExpr) -> HybridExpr {
        &self * &rhs
    }
}

impl Neg for HybridExpr {
    type Output = HybridExpr;
    fn neg(self) -> HybridExpr {
        -&self
    }
}

impl Mul<&HybridExpr> for &Coefficient {
    type Output = HybridExpr;
    fn mul(self, rhs: &HybridExpr) -> HybridExpr {
        rhs.scale(self)
    }
}

impl fmt::Display for HybridExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::dsl::pretty(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, LinearArg};

    struct Gens {
        t: Arc<SymbolTable>,
        q: HybridExpr,
        p: HybridExpr,
        x: HybridExpr,
        k: HybridExpr,
    }

    fn gens() -> Gens {
        let t = Arc::new(SymbolTable::with_functions(1, 1, &["V"]).unwrap());
        Gens {
            q: HybridExpr::q(&t, 1).unwrap(),
            p: HybridExpr::p(&t, 1).unwrap(),
            x: HybridExpr::x(&t, 1).unwrap(),
            k: HybridExpr::k(&t, 1).unwrap(),
            t,
        }
    }

    fn c(n: i64) -> HybridExpr {
        HybridExpr::constant(&gens().t, Coefficient::from_int(n))
    }

    fn ci(n: i64) -> HybridExpr {
        HybridExpr::constant(&gens().t, Coefficient::imag(rat(n, 1)))
    }

    fn v(t: &Arc<SymbolTable>, order: u32) -> HybridExpr {
        let arg = LinearArg::builder().q(1, rat(1, 1)).x(1, rat(-1, 1)).build().unwrap();
        HybridExpr::func(t, FuncFactor::new(0, order, arg)).unwrap()
    }

    #[test]
    fn canonicalize_examples() {
        let g = gens();
        // p q -> q p - i
        assert_eq!(&g.p * &g.q, &(&g.q * &g.p) - &ci(1));
        // p^2 q -> q p^2 - 2i p
        let p2 = &g.p * &g.p;
        assert_eq!(&p2 * &g.q, &(&g.q * &p2) - &(&ci(2) * &g.p));
        // p V(q - x) -> V(q - x) p - i V'(q - x)
        let vv = v(&g.t, 0);
        assert_eq!(&g.p * &vv, &(&vv * &g.p) - &(&ci(1) * &v(&g.t, 1)));
    }

    #[test]
    fn canonicalize_is_idempotent_and_canonical() {
        let g = gens();
        let raw = g.p.raw_mul(&g.q).unwrap().raw_mul(&g.p).unwrap();
        assert!(!raw.is_canonical());
        let once = raw.canonicalize();
        assert!(once.is_canonical());
        assert_eq!(once.canonicalize(), once);
    }

    #[test]
    fn add_examples() {
        let g = gens();
        let qp = &g.q * &g.p;
        assert!((&qp + &(-&qp)).is_zero());
        let half = HybridExpr::constant(&g.t, Coefficient::ratio(1, 2));
        let p2 = &g.p * &g.p;
        let sum = &(&half * &(&p2 * &g.q)) + &(&half * &(&g.q * &p2));
        assert_eq!(sum, &(&g.q * &p2) - &(&ci(1) * &g.p));
        let xk = &g.x + &g.k;
        assert_eq!(xk.terms().len(), 2);
    }

    #[test]
    fn mul_examples() {
        let g = gens();
        assert_eq!(&g.x * &g.q, &g.q * &g.x);
        let lhs = &(&g.q + &g.p) * &(&g.q - &g.p);
        let rhs = &(&(&g.q * &g.q) - &(&g.p * &g.p)) - &ci(1);
        assert_eq!(lhs, rhs);
        assert_eq!((&g.p * &g.p).terms()[0].word.len(), 2);
    }

    #[test]
    fn scale_examples() {
        let g = gens();
        let qp = &g.q * &g.p;
        assert!(qp.scale(&Coefficient::zero()).terms().is_empty());
        let ip = g.p.scale(&Coefficient::i());
        assert_eq!(ip.terms()[0].coeff, Coefficient::i());
        let w = v(&g.t, 2).scale(&Coefficient::i());
        assert_eq!(w.scale(&-Coefficient::i()), v(&g.t, 2));
    }

    #[test]
    fn dagger_examples() {
        let g = gens();
        assert_eq!(ci(1).dagger(), ci(-1));
        assert_eq!((&g.q * &g.p).dagger(), &(&g.q * &g.p) - &ci(1));
        let p2 = &g.p * &g.p;
        let adot = &(&g.q * &p2) + &(&c(2) * &(&(&g.x * &g.k) * &g.p));
        let expected = &(&(&g.q * &p2) - &(&ci(2) * &g.p)) + &(&c(2) * &(&(&g.x * &g.k) * &g.p));
        assert_eq!(adot.dagger(), expected);
    }

    #[test]
    fn equals_examples() {
        let g = gens();
        let pq = g.p.raw_mul(&g.q).unwrap();
        assert!(pq.equals(&(&(&g.q * &g.p) - &ci(1))).unwrap());
        assert!(!(&g.q * &g.p).equals(&(&g.p * &g.q)).unwrap());
        let xq = g.x.raw_mul(&g.q).unwrap().raw_add(&g.q.raw_mul(&g.x).unwrap()).unwrap();
        assert!(xq.equals(&(&c(2) * &(&g.q * &g.x))).unwrap());
    }

    #[test]
    fn hermiticity_examples() {
        let g = gens();
        let p2 = &g.p * &g.p;
        let xkp = &c(2) * &(&(&g.x * &g.k) * &g.p);
        let anderson = &(&g.q * &p2) + &xkp;
        assert!(!anderson.is_hermitian());
        let half = HybridExpr::constant(&g.t, Coefficient::ratio(1, 2));
        let leibniz = &(&(&half * &(&p2 * &g.q)) + &(&half * &(&g.q * &p2))) + &xkp;
        assert!(leibniz.is_hermitian());
        for e in [&g.q, &g.p, &g.x, &g.k] {
            assert!(e.is_hermitian());
        }
    }

    #[test]
    fn table_mismatch_detected() {
        let g = gens();
        let other = Arc::new(SymbolTable::with_functions(2, 1, &[]).unwrap());
        let q2 = HybridExpr::q(&other, 2).unwrap();
        assert_eq!(g.q.checked_add(&q2), Err(AlgebraError::TableMismatch));
        assert_eq!(g.q.checked_mul(&q2), Err(AlgebraError::TableMismatch));
        assert!(g.q.equals(&q2).is_err());
        assert!(HybridExpr::q(&g.t, 2).is_err());
    }

    #[test]
    fn pow_matches_repeated_mul() {
        let g = gens();
        let s = &g.q + &g.p;
        assert_eq!(s.pow(3), &(&s * &s) * &s);
        assert_eq!(s.pow(0), c(1));
    }
}
