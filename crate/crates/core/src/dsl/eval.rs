use std::sync::Arc;

use super::ast::{ratio, Ast, AstKind, Builtin};
use super::{Bindings, DslError};
use crate::algebra::{
    generator_shape, AlgebraError, Coefficient, FuncFactor, HybridExpr, LinearArg, QuantumGenerator, SymbolTable,
};
use crate::calculus::{bracket, BracketKind};

pub(super) struct Evaluator<'a> {
    table: &'a Arc<SymbolTable>,
    bindings: &'a Bindings,
    raw: bool,
}

fn invalid(position: usize, message: impl Into<String>) -> DslError {
    DslError::Validation { position, message: message.into() }
}

fn algebra_err(position: usize, e: AlgebraError) -> DslError {
    invalid(position, e.to_string())
}

impl<'a> Evaluator<'a> {
    pub fn new(table: &'a Arc<SymbolTable>, bindings: &'a Bindings, raw: bool) -> Self {
        Evaluator { table, bindings, raw }
    }

    pub fn eval(&self, ast: &Ast) -> Result<HybridExpr, DslError> {
        let pos = ast.span.start;
        let wrap = |e| algebra_err(pos, e);
        match &ast.kind {
            AstKind::Sum(items) => {
                let mut acc = HybridExpr::zero(self.table);
                for item in items {
                    let v = self.eval(item)?;
                    acc = if self.raw { acc.raw_add(&v) } else { acc.checked_add(&v) }.map_err(wrap)?;
                }
                Ok(acc)
            }
            AstKind::Product(items) => {
                let mut acc = HybridExpr::one(self.table);
                for item in items {
                    let v = self.eval(item)?;
                    acc = if self.raw { acc.raw_mul(&v) } else { acc.checked_mul(&v) }.map_err(wrap)?;
                }
                Ok(acc)
            }
            AstKind::Power(base, exp) => {
                let b = self.eval(base)?;
                if self.raw {
                    let mut acc = b.clone();
                    for _ in 1..*exp {
                        acc = acc.raw_mul(&b).map_err(wrap)?;
                    }
                    Ok(acc)
                } else {
                    Ok(b.pow(*exp))
                }
            }
            AstKind::Neg(inner) => {
                let v = self.eval(inner)?;
                let minus = Coefficient::from_int(-1);
                Ok(if self.raw { v.raw_scale(&minus) } else { v.scale(&minus) })
            }
            AstKind::Rational(n, d) => {
                let r = ratio(n, d).ok_or_else(|| invalid(pos, "division by zero in rational literal"))?;
                Ok(HybridExpr::constant(self.table, Coefficient::real(r)))
            }
            AstKind::ImagUnit => Ok(HybridExpr::constant(self.table, Coefficient::i())),
            AstKind::Symbol(name) => self.symbol(name, pos),
            AstKind::FuncApp { name, primes, arg } => {
                let id =
                    self.table.function_id(name).ok_or_else(|| invalid(pos, format!("unknown function `{name}`")))?;
                let linear = self.linear_arg(arg)?;
                HybridExpr::func(self.table, FuncFactor::new(id, *primes, linear)).map_err(wrap)
            }
            AstKind::Call { builtin, args } => {
                // builtin results are always canonical
                let canon = Evaluator::new(self.table, self.bindings, false);
                let vals = args.iter().map(|a| canon.eval(a)).collect::<Result<Vec<_>, _>>()?;
                let kind = match builtin {
                    Builtin::Dag => return Ok(vals[0].dagger()),
                    Builtin::Comm => BracketKind::Commutator,
                    Builtin::Pb => BracketKind::Poisson,
                    Builtin::Anderson => BracketKind::Anderson,
                    Builtin::Alex => BracketKind::Aleksandrov,
                };
                bracket(kind, &vals[0], &vals[1]).map_err(wrap)
            }
        }
    }

    fn symbol(&self, name: &str, pos: usize) -> Result<HybridExpr, DslError> {
        let wrap = |e| algebra_err(pos, e);
        if let Some((letter, idx)) = generator_shape(name) {
            return match letter {
                'q' => HybridExpr::q(self.table, idx),
                'p' => HybridExpr::p(self.table, idx),
                'x' => HybridExpr::x(self.table, idx),
                _ => HybridExpr::k(self.table, idx),
            }
            .map_err(wrap);
        }
        if let Some(v) = self.bindings.get(name) {
            return Ok(v.clone());
        }
        if self.table.function_id(name).is_some() {
            return Err(invalid(pos, format!("function `{name}` needs an argument, e.g. `{name}(q)`")));
        }
        Err(invalid(pos, format!("unknown symbol `{name}`")))
    }

    fn linear_arg(&self, arg: &Ast) -> Result<LinearArg, DslError> {
        let pos = arg.span.start;
        if let Some(p_pos) = find_momentum(arg) {
            return Err(invalid(p_pos, "momentum is not allowed in a function argument"));
        }
        let canon = Evaluator::new(self.table, self.bindings, false);
        let value = canon.eval(arg)?;
        let mut builder = LinearArg::builder();
        for t in value.terms() {
            if !t.coeff.is_real() {
                return Err(invalid(pos, "function argument coefficients must be rational"));
            }
            let c = t.coeff.re().clone();
            let degree = t.classical.degree() as usize + t.word.len();
            if degree > 1 {
                return Err(invalid(pos, "function argument must be linear"));
            }
            if let Some(g) = t.word.letters().first() {
                builder = match g {
                    QuantumGenerator::Q(m) => builder.q(*m, c),
                    QuantumGenerator::P(_) => {
                        return Err(invalid(pos, "momentum is not allowed in a function argument"))
                    }
                    QuantumGenerator::F(_) => {
                        return Err(invalid(pos, "function factors are not allowed in a function argument"))
                    }
                };
            } else if let Some((&d, _)) = t.classical.x_exponents().iter().next() {
                builder = builder.x(d, c);
            } else if let Some((&d, _)) = t.classical.k_exponents().iter().next() {
                builder = builder.k(d, c);
            } else {
                builder = builder.constant(c);
            }
        }
        builder.build().map_err(|e| algebra_err(pos, e))
    }
}

/// Position of the first literal momentum symbol inside `ast`, if any.
fn find_momentum(ast: &Ast) -> Option<usize> {
    match &ast.kind {
        AstKind::Symbol(name) => match generator_shape(name) {
            Some(('p', _)) => Some(ast.span.start),
            _ => None,
        },
        AstKind::Sum(items) | AstKind::Product(items) => items.iter().find_map(find_momentum),
        AstKind::Power(inner, _) | AstKind::Neg(inner) => find_momentum(inner),
        // nested applications and builtins are judged on their value
        AstKind::FuncApp { .. } | AstKind::Call { .. } => None,
        AstKind::Rational(..) | AstKind::ImagUnit => None,
    }
}
