use std::cmp::Ordering;
use std::collections::BTreeMap;

use num::Zero;

use super::coeff::{Coefficient, Rational};
use super::symbols::SymbolTable;
use super::AlgebraError;

/// Real-linear combination of `q_m`, `x_d`, `k_d` and a constant. Momenta are
/// excluded, so function factors built on it commute with every `q` and with
/// each other.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearArg {
    q: BTreeMap<usize, Rational>,
    x: BTreeMap<usize, Rational>,
    k: BTreeMap<usize, Rational>,
    constant: Rational,
}

fn insert_nonzero(map: &mut BTreeMap<usize, Rational>, idx: usize, c: Rational) {
    let slot = map.entry(idx).or_insert_with(Rational::zero);
    *slot += c;
    if slot.is_zero() {
        map.remove(&idx);
    }
}

impl LinearArg {
    pub fn builder() -> LinearArgBuilder {
        LinearArgBuilder::default()
    }

    pub fn q_coeff(&self, mode: usize) -> Rational {
        self.q.get(&mode).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn x_coeff(&self, dof: usize) -> Rational {
        self.x.get(&dof).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn k_coeff(&self, dof: usize) -> Rational {
        self.k.get(&dof).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn q_coeffs(&self) -> &BTreeMap<usize, Rational> {
        &self.q
    }

    pub fn x_coeffs(&self) -> &BTreeMap<usize, Rational> {
        &self.x
    }

    pub fn k_coeffs(&self) -> &BTreeMap<usize, Rational> {
        &self.k
    }

    pub fn constant(&self) -> &Rational {
        &self.constant
    }

    pub(crate) fn validate(&self, table: &SymbolTable) -> Result<(), AlgebraError> {
        for &m in self.q.keys() {
            table.check_mode(m)?;
        }
        for &d in self.x.keys().chain(self.k.keys()) {
            table.check_dof(d)?;
        }
        Ok(())
    }
}

#[derive(Default, Debug, Clone)]
pub struct LinearArgBuilder {
    q: BTreeMap<usize, Rational>,
    x: BTreeMap<usize, Rational>,
    k: BTreeMap<usize, Rational>,
    constant: Rational,
}

impl LinearArgBuilder {
    pub fn q(mut self, mode: usize, c: Rational) -> Self {
        insert_nonzero(&mut self.q, mode, c);
        self
    }

    pub fn x(mut self, dof: usize, c: Rational) -> Self {
        insert_nonzero(&mut self.x, dof, c);
        self
    }

    pub fn k(mut self, dof: usize, c: Rational) -> Self {
        insert_nonzero(&mut self.k, dof, c);
        self
    }

    pub fn constant(mut self, c: Rational) -> Self {
        self.constant += c;
        self
    }

    pub fn build(self) -> Result<LinearArg, AlgebraError> {
        if self.q.is_empty() && self.x.is_empty() && self.k.is_empty() && self.constant.is_zero() {
            return Err(AlgebraError::ZeroArgument);
        }
        Ok(LinearArg { q: self.q, x: self.x, k: self.k, constant: self.constant })
    }
}

/// `symbol^(deriv_order)(arg)`, e.g. `V''(q - x)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FuncFactor {
    pub symbol: usize,
    pub deriv_order: u32,
    pub arg: LinearArg,
}

impl FuncFactor {
    pub fn new(symbol: usize, deriv_order: u32, arg: LinearArg) -> Self {
        FuncFactor { symbol, deriv_order, arg }
    }

    pub fn derived(&self) -> FuncFactor {
        FuncFactor { deriv_order: self.deriv_order + 1, ..self.clone() }
    }
}

/// Product of classical variables; zero exponents are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ClassicalMonomial {
    x: BTreeMap<usize, u32>,
    k: BTreeMap<usize, u32>,
}

impl ClassicalMonomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn x(dof: usize, exp: u32) -> Self {
        let mut m = Self::default();
        m.mul_x(dof, exp);
        m
    }

    pub fn k(dof: usize, exp: u32) -> Self {
        let mut m = Self::default();
        m.mul_k(dof, exp);
        m
    }

    pub fn is_one(&self) -> bool {
        self.x.is_empty() && self.k.is_empty()
    }

    pub fn x_exponents(&self) -> &BTreeMap<usize, u32> {
        &self.x
    }

    pub fn k_exponents(&self) -> &BTreeMap<usize, u32> {
        &self.k
    }

    pub fn x_exp(&self, dof: usize) -> u32 {
        self.x.get(&dof).copied().unwrap_or(0)
    }

    pub fn k_exp(&self, dof: usize) -> u32 {
        self.k.get(&dof).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.x.values().chain(self.k.values()).sum()
    }

    pub fn mul_x(&mut self, dof: usize, exp: u32) {
        if exp > 0 {
            *self.x.entry(dof).or_insert(0) += exp;
        }
    }

    pub fn mul_k(&mut self, dof: usize, exp: u32) {
        if exp > 0 {
            *self.k.entry(dof).or_insert(0) += exp;
        }
    }

    pub fn mul(&self, other: &ClassicalMonomial) -> ClassicalMonomial {
        let mut out = self.clone();
        for (&d, &e) in &other.x {
            out.mul_x(d, e);
        }
        for (&d, &e) in &other.k {
            out.mul_k(d, e);
        }
        out
    }

    /// Derivative with respect to `x_dof`: `(multiplier, monomial)` or `None` if zero.
    pub fn diff_x(&self, dof: usize) -> Option<(u32, ClassicalMonomial)> {
        Self::diff_map(&self.x, dof).map(|(n, x)| (n, ClassicalMonomial { x, k: self.k.clone() }))
    }

    pub fn diff_k(&self, dof: usize) -> Option<(u32, ClassicalMonomial)> {
        Self::diff_map(&self.k, dof).map(|(n, k)| (n, ClassicalMonomial { x: self.x.clone(), k }))
    }

    fn diff_map(map: &BTreeMap<usize, u32>, dof: usize) -> Option<(u32, BTreeMap<usize, u32>)> {
        let n = *map.get(&dof)?;
        let mut out = map.clone();
        if n == 1 {
            out.remove(&dof);
        } else {
            out.insert(dof, n - 1);
        }
        Some((n, out))
    }

    fn exponent_vector(&self, dofs: usize) -> Vec<u32> {
        (1..=dofs).map(|d| self.x_exp(d)).chain((1..=dofs).map(|d| self.k_exp(d))).collect()
    }

    fn max_dof(&self) -> usize {
        self.x.keys().chain(self.k.keys()).copied().max().unwrap_or(0)
    }
}

/// Graded: lower total degree first, then the exponent vector
/// `(x_1.., k_1..)` in descending lexicographic order.
impl Ord for ClassicalMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let dofs = self.max_dof().max(other.max_dof());
            other.exponent_vector(dofs).cmp(&self.exponent_vector(dofs))
        })
    }
}

impl PartialOrd for ClassicalMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A letter of a quantum word. The derived order (Q < F < P, then by
/// mode or function key) is the normal order of letters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QuantumGenerator {
    Q(usize),
    F(FuncFactor),
    P(usize),
}

/// Ordered product of quantum generators.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct QuantumWord(pub Vec<QuantumGenerator>);

impl QuantumWord {
    pub fn empty() -> Self {
        QuantumWord(Vec::new())
    }

    pub fn letters(&self) -> &[QuantumGenerator] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Normal order: all Q, then all F, then all P, each ascending.
    pub fn is_normal_ordered(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn concat(&self, other: &QuantumWord) -> QuantumWord {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        QuantumWord(v)
    }

    pub fn reversed(&self) -> QuantumWord {
        QuantumWord(self.0.iter().rev().cloned().collect())
    }

    pub fn p_degree(&self, mode: usize) -> usize {
        self.0.iter().filter(|g| **g == QuantumGenerator::P(mode)).count()
    }
}

/// Longer words first, ties broken by the letter sequence.
impl Ord for QuantumWord {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.len().cmp(&self.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for QuantumWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `coeff * classical * word`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub coeff: Coefficient,
    pub classical: ClassicalMonomial,
    pub word: QuantumWord,
}

impl Term {
    pub fn new(coeff: Coefficient, classical: ClassicalMonomial, word: QuantumWord) -> Self {
        Term { coeff, classical, word }
    }

    pub fn scalar(coeff: Coefficient) -> Self {
        Term::new(coeff, ClassicalMonomial::one(), QuantumWord::empty())
    }

    pub(crate) fn key(&self) -> TermKey {
        TermKey { word: self.word.clone(), classical: self.classical.clone() }
    }

    pub(crate) fn validate(&self, table: &SymbolTable) -> Result<(), AlgebraError> {
        for &d in self.classical.x.keys().chain(self.classical.k.keys()) {
            table.check_dof(d)?;
        }
        for g in &self.word.0 {
            match g {
                QuantumGenerator::Q(m) | QuantumGenerator::P(m) => table.check_mode(*m)?,
                QuantumGenerator::F(f) => {
                    table.check_function(f.symbol)?;
                    f.arg.validate(table)?;
                }
            }
        }
        Ok(())
    }
}

/// Sort key of a term in canonical expressions: word first, classical second.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct TermKey {
    pub word: QuantumWord,
    pub classical: ClassicalMonomial,
}
