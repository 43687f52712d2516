//! Independent equivalence tester.
//!
//! Quantum generators act on polynomials in formal variables `s_m`:
//! `q_m` multiplies by `s_m` and `p_m` applies `-i ∂/∂s_m`, which satisfies
//! `[q, p] = i` exactly. Classical variables ride along in the coefficients.
//! Function factors are replaced by powers `(arg)^g`. Nothing here calls the
//! rewriting engine or the symbolic derivatives.

use std::collections::{BTreeMap, HashMap};

use num::{BigInt, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::algebra::{
    rat, AlgebraError, ClassicalMonomial, Coefficient, FuncFactor, HybridExpr, QuantumGenerator, Rational, Term,
};
use crate::calculus::BracketKind;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("no concretization power configured for function `{0}`")]
    MissingPower(String),
    #[error("power {power} for `{name}` must exceed its derivative order {order}")]
    PowerTooSmall { name: String, power: u32, order: u32 },
    #[error("functions `{0}` and `{1}` share a concretization power")]
    SharedPower(String, String),
    #[error("function `{0}` in the power map is not declared")]
    UnknownFunction(String),
    #[error("expression contains a function factor; concretize it first")]
    FunctionLetter,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    /// Every test state `Π s_m^t_m` with `t_m <= max_test_degree` is tried.
    pub max_test_degree: u32,
    /// Function name to exponent `g` in the substitution `V -> (arg)^g`.
    pub func_powers: BTreeMap<String, u32>,
    /// Extra dense test states drawn from `seed`, on top of the monomials.
    pub random_states: usize,
    pub seed: u64,
}

impl OracleConfig {
    pub fn new(max_test_degree: u32) -> Self {
        OracleConfig { max_test_degree, func_powers: BTreeMap::new(), random_states: 0, seed: 0 }
    }

    pub fn with_power(mut self, name: &str, g: u32) -> Self {
        self.func_powers.insert(name.to_string(), g);
        self
    }

    pub fn with_random_states(mut self, count: usize, seed: u64) -> Self {
        self.random_states = count;
        self.seed = seed;
        self
    }

    /// Picks distinct powers, each at least `min_power` and above every
    /// derivative order found in `exprs`, and a test degree of at least
    /// `min_degree` that also covers the largest per-mode p-degree.
    pub fn covering(exprs: &[&HybridExpr], min_power: u32, min_degree: u32) -> Self {
        let mut cfg = OracleConfig::new(min_degree);
        let Some(first) = exprs.first() else { return cfg };
        let table = first.table().clone();
        for m in 1..=table.quantum_modes() {
            for e in exprs {
                cfg.max_test_degree = cfg.max_test_degree.max(e.max_p_degree(m) as u32);
            }
        }
        let mut last = 0;
        for (id, f) in table.functions().iter().enumerate() {
            let order = exprs.iter().filter_map(|e| e.max_deriv_order(id)).max().unwrap_or(0);
            let g = min_power.max(order + 1).max(last + 1);
            cfg.func_powers.insert(f.name.clone(), g);
            last = g;
        }
        cfg
    }

    fn resolve(&self, exprs: &[&HybridExpr]) -> Result<HashMap<usize, u32>, OracleError> {
        let mut powers = HashMap::new();
        let Some(first) = exprs.first() else { return Ok(powers) };
        let table = first.table();
        for name in self.func_powers.keys() {
            if table.function_id(name).is_none() {
                return Err(OracleError::UnknownFunction(name.clone()));
            }
        }
        let entries: Vec<_> = self.func_powers.iter().collect();
        for (i, (n1, g1)) in entries.iter().enumerate() {
            if let Some((n2, _)) = entries[i + 1..].iter().find(|(_, g2)| g2 == g1) {
                return Err(OracleError::SharedPower((*n1).clone(), (*n2).clone()));
            }
        }
        for (id, f) in table.functions().iter().enumerate() {
            let Some(order) = exprs.iter().filter_map(|e| e.max_deriv_order(id)).max() else { continue };
            let g = *self.func_powers.get(&f.name).ok_or_else(|| OracleError::MissingPower(f.name.clone()))?;
            if g <= order {
                return Err(OracleError::PowerTooSmall { name: f.name.clone(), power: g, order });
            }
            powers.insert(id, g);
        }
        Ok(powers)
    }
}

type StateKey = (Vec<u32>, ClassicalMonomial);

/// Polynomial in `s_1..s_M` whose coefficients are Gaussian-rational
/// combinations of classical monomials.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PolyState {
    terms: BTreeMap<StateKey, Coefficient>,
}

impl PolyState {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `Π s_m^exps[m-1]`.
    pub fn monomial(exps: Vec<u32>) -> Self {
        let mut s = Self::zero();
        s.push(exps, ClassicalMonomial::one(), Coefficient::one());
        s
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Vec<u32>, ClassicalMonomial, Coefficient)>) -> Self {
        let mut s = Self::zero();
        for (e, m, c) in terms {
            s.push(e, m, c);
        }
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<u32>, &ClassicalMonomial, &Coefficient)> {
        self.terms.iter().map(|((e, m), c)| (e, m, c))
    }

    /// Exponent vectors are stored without trailing zeros.
    fn push(&mut self, mut exps: Vec<u32>, m: ClassicalMonomial, c: Coefficient) {
        if c.is_zero() {
            return;
        }
        while exps.last() == Some(&0) {
            exps.pop();
        }
        let key = (exps, m);
        let sum = match self.terms.get(&key) {
            Some(old) => old + &c,
            None => c,
        };
        if sum.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, sum);
        }
    }

    pub fn add(&self, other: &PolyState) -> PolyState {
        let mut out = self.clone();
        for ((e, m), c) in &other.terms {
            out.push(e.clone(), m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Coefficient) -> PolyState {
        let mut out = PolyState::zero();
        for ((e, m), v) in &self.terms {
            out.push(e.clone(), m.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, other: &PolyState) -> PolyState {
        let mut out = PolyState::zero();
        for ((e1, m1), c1) in &self.terms {
            for ((e2, m2), c2) in &other.terms {
                let len = e1.len().max(e2.len());
                let exps =
                    (0..len).map(|i| e1.get(i).copied().unwrap_or(0) + e2.get(i).copied().unwrap_or(0)).collect();
                out.push(exps, m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    fn mul_classical(&self, m: &ClassicalMonomial, c: &Coefficient) -> PolyState {
        let mut out = PolyState::zero();
        for ((e, m0), v) in &self.terms {
            out.push(e.clone(), m0.mul(m), v * c);
        }
        out
    }

    /// Multiplication by `s_mode`.
    fn times_s(&self, mode: usize) -> PolyState {
        let mut out = PolyState::zero();
        for ((e, m), v) in &self.terms {
            let mut e = e.clone();
            if e.len() < mode {
                e.resize(mode, 0);
            }
            e[mode - 1] += 1;
            out.push(e, m.clone(), v.clone());
        }
        out
    }

    /// `∂/∂s_mode`.
    fn diff_s(&self, mode: usize) -> PolyState {
        let mut out = PolyState::zero();
        for ((e, m), v) in &self.terms {
            let n = e.get(mode - 1).copied().unwrap_or(0);
            if n == 0 {
                continue;
            }
            let mut e = e.clone();
            e[mode - 1] -= 1;
            out.push(e, m.clone(), v.scale_real(&Rational::from_integer(n.into())));
        }
        out
    }

    fn diff_classical(&self, var: ClassicalVar) -> PolyState {
        let mut out = PolyState::zero();
        for ((e, m), v) in &self.terms {
            let d = match var {
                ClassicalVar::X(d) => m.diff_x(d),
                ClassicalVar::K(d) => m.diff_k(d),
            };
            if let Some((n, m)) = d {
                out.push(e.clone(), m, v.scale_real(&Rational::from_integer(n.into())));
            }
        }
        out
    }

    pub fn same_as(&self, other: &PolyState) -> bool {
        self == other
    }
}

#[derive(Clone, Copy)]
enum ClassicalVar {
    X(usize),
    K(usize),
}

fn falling(g: u32, n: u32) -> BigInt {
    (0..n).fold(BigInt::from(1), |acc, j| acc * BigInt::from(g as i64 - j as i64))
}

struct Action<'a> {
    powers: &'a HashMap<usize, u32>,
    cache: std::cell::RefCell<HashMap<FuncFactor, PolyState>>,
}

impl<'a> Action<'a> {
    fn new(powers: &'a HashMap<usize, u32>) -> Self {
        Action { powers, cache: Default::default() }
    }

    fn function_poly(&self, f: &FuncFactor) -> Result<PolyState, OracleError> {
        if let Some(p) = self.cache.borrow().get(f) {
            return Ok(p.clone());
        }
        let g = *self.powers.get(&f.symbol).ok_or(OracleError::FunctionLetter)?;
        let mut linear = PolyState::zero();
        for (&m, c) in f.arg.q_coeffs() {
            let mut e = vec![0; m];
            e[m - 1] = 1;
            linear.push(e, ClassicalMonomial::one(), Coefficient::real(c.clone()));
        }
        for (&d, c) in f.arg.x_coeffs() {
            linear.push(Vec::new(), ClassicalMonomial::x(d, 1), Coefficient::real(c.clone()));
        }
        for (&d, c) in f.arg.k_coeffs() {
            linear.push(Vec::new(), ClassicalMonomial::k(d, 1), Coefficient::real(c.clone()));
        }
        linear.push(Vec::new(), ClassicalMonomial::one(), Coefficient::real(f.arg.constant().clone()));

        let factor = falling(g, f.deriv_order);
        let poly = if factor.is_zero() {
            PolyState::zero()
        } else {
            let mut acc = PolyState::monomial(Vec::new());
            for _ in 0..(g - f.deriv_order) {
                acc = acc.mul(&linear);
            }
            acc.scale(&Coefficient::real(Rational::from_integer(factor)))
        };
        self.cache.borrow_mut().insert(f.clone(), poly.clone());
        Ok(poly)
    }

    fn term(&self, t: &Term, state: &PolyState) -> Result<PolyState, OracleError> {
        let mut cur = state.clone();
        for letter in t.word.letters().iter().rev() {
            cur = match letter {
                QuantumGenerator::Q(m) => cur.times_s(*m),
                QuantumGenerator::P(m) => cur.diff_s(*m).scale(&-Coefficient::i()),
                QuantumGenerator::F(f) => self.function_poly(f)?.mul(&cur),
            };
            if cur.is_zero() {
                break;
            }
        }
        Ok(cur.mul_classical(&t.classical, &t.coeff))
    }

    fn apply(&self, e: &HybridExpr, state: &PolyState) -> Result<PolyState, OracleError> {
        let mut out = PolyState::zero();
        for t in e.terms() {
            out = out.add(&self.term(t, state)?);
        }
        Ok(out)
    }

    /// Action of the classical derivative of `e`, computed as `[∂, e]`.
    fn apply_derivative(&self, e: &HybridExpr, var: ClassicalVar, state: &PolyState) -> Result<PolyState, OracleError> {
        let outer = self.apply(e, state)?.diff_classical(var);
        let inner = self.apply(e, &state.diff_classical(var))?;
        Ok(outer.add(&inner.scale(&Coefficient::from_int(-1))))
    }

    fn commutator(&self, a: &HybridExpr, b: &HybridExpr, state: &PolyState) -> Result<PolyState, OracleError> {
        let ab = self.apply(a, &self.apply(b, state)?)?;
        let ba = self.apply(b, &self.apply(a, state)?)?;
        Ok(ab.add(&ba.scale(&Coefficient::from_int(-1))))
    }

    fn poisson(&self, a: &HybridExpr, b: &HybridExpr, state: &PolyState) -> Result<PolyState, OracleError> {
        let mut out = PolyState::zero();
        for d in 1..=a.table().classical_dofs() {
            let (x, k) = (ClassicalVar::X(d), ClassicalVar::K(d));
            let fwd = self.apply_derivative(a, x, &self.apply_derivative(b, k, state)?)?;
            let bwd = self.apply_derivative(a, k, &self.apply_derivative(b, x, state)?)?;
            out = out.add(&fwd).add(&bwd.scale(&Coefficient::from_int(-1)));
        }
        Ok(out)
    }

    fn bracket(
        &self,
        kind: BracketKind,
        a: &HybridExpr,
        b: &HybridExpr,
        state: &PolyState,
    ) -> Result<PolyState, OracleError> {
        Ok(match kind {
            BracketKind::Commutator => self.commutator(a, b, state)?,
            BracketKind::Poisson => self.poisson(a, b, state)?,
            BracketKind::Anderson => {
                self.commutator(a, b, state)?.add(&self.poisson(a, b, state)?.scale(&Coefficient::i()))
            }
            BracketKind::Aleksandrov => {
                let half_i = Coefficient::imag(rat(1, 2));
                let sym = self.poisson(a, b, state)?.add(&self.poisson(b, a, state)?.scale(&Coefficient::from_int(-1)));
                self.commutator(a, b, state)?.add(&sym.scale(&half_i))
            }
        })
    }
}

fn test_states(modes: usize, cfg: &OracleConfig) -> Vec<PolyState> {
    let mut out = monomial_states(modes, cfg.max_test_degree);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let monomials = out.len();
    for _ in 0..cfg.random_states {
        let mut terms = Vec::new();
        for m in &out[..monomials] {
            if !rng.gen_bool(0.5) {
                continue;
            }
            let c = Coefficient::new(rat(rng.gen_range(-5..=5), 1), rat(rng.gen_range(-5..=5), 1));
            terms.extend(m.iter().map(|(e, cl, _)| (e.clone(), cl.clone(), c.clone())));
        }
        out.push(PolyState::from_terms(terms));
    }
    out
}

fn monomial_states(modes: usize, degree: u32) -> Vec<PolyState> {
    let mut out = Vec::new();
    let mut exps = vec![0u32; modes];
    loop {
        out.push(PolyState::monomial(exps.clone()));
        let mut i = 0;
        loop {
            if i == modes {
                return out;
            }
            if exps[i] < degree {
                exps[i] += 1;
                break;
            }
            exps[i] = 0;
            i += 1;
        }
    }
}

/// Applies the function-free operator `e` to `state`.
pub fn rep_apply(e: &HybridExpr, state: &PolyState) -> Result<PolyState, OracleError> {
    let none = HashMap::new();
    Action::new(&none).apply(e, state)
}

/// Replaces every function factor `V^(n)(arg)` by `g(g-1)..(g-n+1) (arg)^(g-n)`.
pub fn concretize_functions(e: &HybridExpr, cfg: &OracleConfig) -> Result<HybridExpr, OracleError> {
    let powers = cfg.resolve(&[e])?;
    let table = e.table();
    let mut acc = HybridExpr::zero(table);
    for t in e.terms() {
        let mut prod =
            HybridExpr::from_terms(table, vec![Term::new(t.coeff.clone(), t.classical.clone(), Default::default())])?;
        for letter in t.word.letters() {
            let factor = match letter {
                QuantumGenerator::Q(m) => HybridExpr::q(table, *m)?,
                QuantumGenerator::P(m) => HybridExpr::p(table, *m)?,
                QuantumGenerator::F(f) => {
                    let g = powers[&f.symbol];
                    let mut linear = HybridExpr::constant(table, Coefficient::real(f.arg.constant().clone()));
                    for (&m, c) in f.arg.q_coeffs() {
                        linear = linear.checked_add(&HybridExpr::q(table, m)?.scale(&Coefficient::real(c.clone())))?;
                    }
                    for (&d, c) in f.arg.x_coeffs() {
                        linear = linear.checked_add(&HybridExpr::x(table, d)?.scale(&Coefficient::real(c.clone())))?;
                    }
                    for (&d, c) in f.arg.k_coeffs() {
                        linear = linear.checked_add(&HybridExpr::k(table, d)?.scale(&Coefficient::real(c.clone())))?;
                    }
                    let factor = Coefficient::real(Rational::from_integer(falling(g, f.deriv_order)));
                    linear.pow(g - f.deriv_order).scale(&factor)
                }
            };
            prod = prod.checked_mul(&factor)?;
        }
        acc = acc.checked_add(&prod)?;
    }
    Ok(acc)
}

/// True when `a` and `b` act identically on every test state.
pub fn oracle_equal(a: &HybridExpr, b: &HybridExpr, cfg: &OracleConfig) -> Result<bool, OracleError> {
    let powers = cfg.resolve(&[a, b])?;
    if a.table() != b.table() {
        return Err(AlgebraError::TableMismatch.into());
    }
    let act = Action::new(&powers);
    for state in test_states(a.table().quantum_modes(), cfg) {
        if !act.apply(a, &state)?.same_as(&act.apply(b, &state)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True when `claimed` acts like `bracket(kind, a, b)` on every test state,
/// with the bracket built from operator actions alone.
pub fn oracle_bracket_matches(
    kind: BracketKind,
    a: &HybridExpr,
    b: &HybridExpr,
    claimed: &HybridExpr,
    cfg: &OracleConfig,
) -> Result<bool, OracleError> {
    let powers = cfg.resolve(&[a, b, claimed])?;
    if a.table() != b.table() || a.table() != claimed.table() {
        return Err(AlgebraError::TableMismatch.into());
    }
    let act = Action::new(&powers);
    for state in test_states(a.table().quantum_modes(), cfg) {
        if !act.bracket(kind, a, b, &state)?.same_as(&act.apply(claimed, &state)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Same as [`oracle_bracket_matches`] for `-i * bracket(kind, a, h)`.
pub fn oracle_eom_matches(
    kind: BracketKind,
    a: &HybridExpr,
    h: &HybridExpr,
    claimed: &HybridExpr,
    cfg: &OracleConfig,
) -> Result<bool, OracleError> {
    oracle_bracket_matches(kind, a, h, &claimed.scale(&Coefficient::i()), cfg)
}
