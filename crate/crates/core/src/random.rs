//! Seeded random expressions for property suites.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{
    rat, ClassicalMonomial, Coefficient, FuncFactor, HybridExpr, LinearArg, QuantumGenerator, QuantumWord, SymbolTable,
    Term,
};

#[derive(Clone, Debug)]
pub struct SamplerSpec {
    /// Upper bound on letters plus classical factors per term.
    pub max_degree: u32,
    pub max_terms: usize,
    /// Allow function factors (only if the table declares some).
    pub functions: bool,
    pub max_deriv_order: u32,
}

impl Default for SamplerSpec {
    fn default() -> Self {
        SamplerSpec { max_degree: 4, max_terms: 3, functions: false, max_deriv_order: 1 }
    }
}

pub struct ExprSampler {
    rng: ChaCha8Rng,
    table: Arc<SymbolTable>,
    spec: SamplerSpec,
}

impl ExprSampler {
    pub fn new(table: &Arc<SymbolTable>, spec: SamplerSpec, seed: u64) -> Self {
        ExprSampler { rng: ChaCha8Rng::seed_from_u64(seed), table: table.clone(), spec }
    }

    pub fn table(&self) -> &Arc<SymbolTable> {
        &self.table
    }

    fn small_rational(&mut self) -> crate::algebra::Rational {
        let n = self.rng.gen_range(-3..=3);
        let d = *[1, 1, 2, 3].choose(&mut self.rng).expect("nonempty");
        rat(n, d)
    }

    fn coefficient(&mut self) -> Coefficient {
        loop {
            let re = self.small_rational();
            let im = if self.rng.gen_bool(0.5) { self.small_rational() } else { rat(0, 1) };
            let c = Coefficient::new(re, im);
            if !c.is_zero() {
                return c;
            }
        }
    }

    fn linear_arg(&mut self) -> LinearArg {
        let modes = self.table.quantum_modes();
        let dofs = self.table.classical_dofs();
        let nonzero = |rng: &mut ChaCha8Rng| rat(*[-2, -1, 1, 2].choose(rng).expect("nonempty"), 1);
        let mut b = LinearArg::builder().q(self.rng.gen_range(1..=modes), nonzero(&mut self.rng));
        if self.rng.gen_bool(0.6) {
            b = b.x(self.rng.gen_range(1..=dofs), nonzero(&mut self.rng));
        }
        if self.rng.gen_bool(0.3) {
            b = b.k(self.rng.gen_range(1..=dofs), nonzero(&mut self.rng));
        }
        if self.rng.gen_bool(0.3) {
            b = b.constant(nonzero(&mut self.rng));
        }
        b.build().expect("q coefficient is nonzero")
    }

    fn term(&mut self) -> Term {
        let modes = self.table.quantum_modes();
        let dofs = self.table.classical_dofs();
        let with_funcs = self.spec.functions && !self.table.functions().is_empty();
        let degree = self.rng.gen_range(0..=self.spec.max_degree);
        let mut classical = ClassicalMonomial::one();
        let mut letters = Vec::new();
        for _ in 0..degree {
            let choice = self.rng.gen_range(0..if with_funcs { 5 } else { 4 });
            match choice {
                0 => letters.push(QuantumGenerator::Q(self.rng.gen_range(1..=modes))),
                1 => letters.push(QuantumGenerator::P(self.rng.gen_range(1..=modes))),
                2 => classical.mul_x(self.rng.gen_range(1..=dofs), 1),
                3 => classical.mul_k(self.rng.gen_range(1..=dofs), 1),
                _ => {
                    let symbol = self.rng.gen_range(0..self.table.functions().len());
                    let order = self.rng.gen_range(0..=self.spec.max_deriv_order);
                    let arg = self.linear_arg();
                    letters.push(QuantumGenerator::F(FuncFactor::new(symbol, order, arg)));
                }
            }
        }
        Term::new(self.coefficient(), classical, QuantumWord(letters))
    }

    /// Terms with letters in arbitrary order; not canonical.
    pub fn raw_expr(&mut self) -> HybridExpr {
        let n = self.rng.gen_range(1..=self.spec.max_terms);
        let terms = (0..n).map(|_| self.term()).collect();
        HybridExpr::from_terms(&self.table, terms).expect("indices drawn from the table")
    }

    pub fn expr(&mut self) -> HybridExpr {
        self.raw_expr().canonicalize()
    }

    /// `e + dagger(e)` for a random `e`.
    pub fn hermitian(&mut self) -> HybridExpr {
        let e = self.expr();
        &e + &e.dagger()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_for_seed() {
        let t = Arc::new(SymbolTable::with_functions(2, 2, &["V"]).unwrap());
        let spec = SamplerSpec { functions: true, ..Default::default() };
        let mut a = ExprSampler::new(&t, spec.clone(), 7);
        let mut b = ExprSampler::new(&t, spec, 7);
        for _ in 0..20 {
            assert_eq!(a.raw_expr(), b.raw_expr());
        }
    }

    #[test]
    fn hermitian_samples_are_hermitian() {
        let t = Arc::new(SymbolTable::with_functions(1, 1, &["V"]).unwrap());
        let spec = SamplerSpec { functions: true, ..Default::default() };
        let mut s = ExprSampler::new(&t, spec, 1);
        for _ in 0..20 {
            assert!(s.hermitian().is_hermitian());
        }
    }
}
