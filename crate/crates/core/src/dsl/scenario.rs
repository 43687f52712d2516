//! Scenario documents: a symbol table, named definitions, a default bracket
//! and an ordered list of checks, stored as versioned JSON.

use std::sync::Arc;

use serde_json::{Map, Value};
use thiserror::Error;

use super::{parse_with, Bindings, DslError};
use crate::algebra::{is_reserved_name, FunctionSymbol, HybridExpr, SymbolTable};
use crate::calculus::BracketKind;
use crate::checks::CheckKind;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("invalid JSON at line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("in {path}: {source}")]
    Expression { path: String, source: DslError },
}

impl ScenarioError {
    /// Syntax-level failures (malformed JSON or expression text) as opposed
    /// to documents that parse but fail validation.
    pub fn is_parse(&self) -> bool {
        match self {
            ScenarioError::Json { .. } => true,
            ScenarioError::Schema { .. } => false,
            ScenarioError::Expression { source, .. } => source.is_parse(),
        }
    }
}

/// Expression text together with its canonical value.
#[derive(Clone, Debug, PartialEq)]
pub struct NamedExpr {
    pub text: String,
    pub expr: HybridExpr,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expectation {
    Pass,
    Fail,
}

impl Expectation {
    pub fn name(self) -> &'static str {
        match self {
            Expectation::Pass => "pass",
            Expectation::Fail => "fail",
        }
    }

    pub fn matches(self, passed: bool) -> bool {
        passed == (self == Expectation::Pass)
    }
}

/// Which factor orderings a Leibniz check evaluates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LeibnizOrder {
    /// `a*b` only.
    Ab,
    /// `a*b` and `b*a`; the verdict is on their sum.
    Symmetric,
}

#[derive(Clone, Debug, PartialEq)]
pub enum CheckArgs {
    Antisymmetry { a: NamedExpr, b: NamedExpr },
    Leibniz { a: NamedExpr, b: NamedExpr, hamiltonian: NamedExpr, order: LeibnizOrder },
    HermiticityOfEom { observable: NamedExpr, hamiltonian: NamedExpr },
    Conservation { observable: NamedExpr, hamiltonian: NamedExpr },
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckSpec {
    pub bracket: BracketKind,
    pub args: CheckArgs,
    pub expect: Option<Expectation>,
}

impl CheckSpec {
    pub fn kind(&self) -> CheckKind {
        match self.args {
            CheckArgs::Antisymmetry { .. } => CheckKind::Antisymmetry,
            CheckArgs::Leibniz { .. } => CheckKind::Leibniz,
            CheckArgs::HermiticityOfEom { .. } => CheckKind::HermiticityOfEom,
            CheckArgs::Conservation { .. } => CheckKind::Conservation,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub name: Option<String>,
    pub table: Arc<SymbolTable>,
    pub definitions: Vec<(String, NamedExpr)>,
    pub hamiltonian: Option<NamedExpr>,
    pub bracket: BracketKind,
    pub checks: Vec<CheckSpec>,
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> ScenarioError {
    ScenarioError::Schema { path: path.into(), message: message.into() }
}

fn object<'v>(v: &'v Value, path: &str) -> Result<&'v Map<String, Value>, ScenarioError> {
    v.as_object().ok_or_else(|| schema(path, "expected an object"))
}

fn string<'v>(v: &'v Value, path: &str) -> Result<&'v str, ScenarioError> {
    v.as_str().ok_or_else(|| schema(path, "expected a string"))
}

fn positive(v: &Value, path: &str) -> Result<usize, ScenarioError> {
    match v.as_u64() {
        Some(n) if n >= 1 => usize::try_from(n).map_err(|_| schema(path, "value too large")),
        _ => Err(schema(path, "expected a positive integer")),
    }
}

fn reject_unknown(map: &Map<String, Value>, path: &str, allowed: &[&str]) -> Result<(), ScenarioError> {
    match map.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(schema(format!("{path}/{k}"), "unknown field")),
        None => Ok(()),
    }
}

fn required<'v>(map: &'v Map<String, Value>, path: &str, key: &str) -> Result<&'v Value, ScenarioError> {
    map.get(key).ok_or_else(|| schema(format!("{path}/{key}"), "missing required field"))
}

fn bracket_kind(v: &Value, path: &str, allow_poisson: bool) -> Result<BracketKind, ScenarioError> {
    let s = string(v, path)?;
    let kind: BracketKind = s.parse().map_err(|e: crate::calculus::UnknownBracket| schema(path, e.to_string()))?;
    if !allow_poisson && !kind.is_dynamical() {
        return Err(schema(path, "poisson does not generate dynamics; use anderson, aleksandrov or commutator"));
    }
    Ok(kind)
}

struct Ctx {
    table: Arc<SymbolTable>,
    bindings: Bindings,
}

impl Ctx {
    fn expr(&self, v: &Value, path: &str) -> Result<NamedExpr, ScenarioError> {
        let text = string(v, path)?;
        let expr = parse_with(text, &self.table, &self.bindings)
            .map_err(|source| ScenarioError::Expression { path: path.to_string(), source })?;
        Ok(NamedExpr { text: text.to_string(), expr })
    }
}

fn parse_table(v: &Value) -> Result<SymbolTable, ScenarioError> {
    let map = object(v, "/symbols")?;
    reject_unknown(map, "/symbols", &["quantum_modes", "classical_dofs", "functions"])?;
    let modes = positive(required(map, "/symbols", "quantum_modes")?, "/symbols/quantum_modes")?;
    let dofs = positive(required(map, "/symbols", "classical_dofs")?, "/symbols/classical_dofs")?;
    let mut functions = Vec::new();
    if let Some(fs) = map.get("functions") {
        let arr = fs.as_array().ok_or_else(|| schema("/symbols/functions", "expected an array"))?;
        for (idx, f) in arr.iter().enumerate() {
            let path = format!("/symbols/functions/{idx}");
            let fm = object(f, &path)?;
            reject_unknown(fm, &path, &["name", "real"])?;
            let name = string(required(fm, &path, "name")?, &format!("{path}/name"))?;
            let real = match fm.get("real") {
                None => true,
                Some(r) => r.as_bool().ok_or_else(|| schema(format!("{path}/real"), "expected a boolean"))?,
            };
            functions.push(FunctionSymbol { name: name.to_string(), real });
        }
    }
    SymbolTable::new(modes, dofs, functions).map_err(|e| schema("/symbols", e.to_string()))
}

/// Reads and fully validates a scenario document. Every expression is
/// parsed here, so a returned [`Scenario`] cannot fail on names later.
pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let root: Value = serde_json::from_str(text).map_err(|e| ScenarioError::Json {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let map = object(&root, "")?;
    reject_unknown(map, "", &["version", "name", "symbols", "definitions", "hamiltonian", "bracket", "checks"])?;

    match required(map, "", "version")?.as_u64() {
        Some(1) => {}
        _ => return Err(schema("/version", "unsupported version (expected 1)")),
    }
    let name = match map.get("name") {
        None => None,
        Some(v) => Some(string(v, "/name")?.to_string()),
    };
    let table = Arc::new(parse_table(required(map, "", "symbols")?)?);
    let bracket = bracket_kind(required(map, "", "bracket")?, "/bracket", false)?;

    let mut ctx = Ctx { table: table.clone(), bindings: Bindings::new() };
    let mut definitions = Vec::new();
    if let Some(defs) = map.get("definitions") {
        for (def_name, v) in object(defs, "/definitions")? {
            let path = format!("/definitions/{def_name}");
            let valid_ident = def_name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && def_name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid_ident {
                return Err(schema(path, "definition names must be identifiers"));
            }
            if is_reserved_name(def_name) || table.function_id(def_name).is_some() {
                return Err(schema(path, format!("`{def_name}` is reserved")));
            }
            let value = ctx.expr(v, &path)?;
            ctx.bindings.insert(def_name.clone(), value.expr.clone());
            definitions.push((def_name.clone(), value));
        }
    }

    let hamiltonian = match map.get("hamiltonian") {
        Some(v) => Some(ctx.expr(v, "/hamiltonian")?),
        None => ctx.bindings.get("H").map(|h| NamedExpr { text: "H".to_string(), expr: h.clone() }),
    };

    let mut checks = Vec::new();
    if let Some(cs) = map.get("checks") {
        let arr = cs.as_array().ok_or_else(|| schema("/checks", "expected an array"))?;
        for (idx, c) in arr.iter().enumerate() {
            checks.push(parse_check(&ctx, c, &format!("/checks/{idx}"), bracket, hamiltonian.as_ref())?);
        }
    }

    Ok(Scenario { name, table, definitions, hamiltonian, bracket, checks })
}

fn parse_check(
    ctx: &Ctx,
    v: &Value,
    path: &str,
    default_bracket: BracketKind,
    default_h: Option<&NamedExpr>,
) -> Result<CheckSpec, ScenarioError> {
    let map = object(v, path)?;
    let kind_text = string(required(map, path, "kind")?, &format!("{path}/kind"))?;
    let kind: CheckKind = kind_text.parse().map_err(|msg: String| schema(format!("{path}/kind"), msg))?;

    let allowed: &[&str] = match kind {
        CheckKind::Antisymmetry => &["kind", "bracket", "expect", "a", "b"],
        CheckKind::Leibniz => &["kind", "bracket", "expect", "a", "b", "hamiltonian", "order"],
        CheckKind::HermiticityOfEom | CheckKind::Conservation => {
            &["kind", "bracket", "expect", "observable", "hamiltonian"]
        }
    };
    reject_unknown(map, path, allowed)?;

    let bracket = match map.get("bracket") {
        None => default_bracket,
        Some(b) => bracket_kind(b, &format!("{path}/bracket"), kind == CheckKind::Antisymmetry)?,
    };
    let expect = match map.get("expect") {
        None => None,
        Some(e) => Some(match string(e, &format!("{path}/expect"))? {
            "pass" => Expectation::Pass,
            "fail" => Expectation::Fail,
            other => {
                return Err(schema(format!("{path}/expect"), format!("expected \"pass\" or \"fail\", got \"{other}\"")))
            }
        }),
    };
    let field = |key: &str| -> Result<NamedExpr, ScenarioError> {
        ctx.expr(required(map, path, key)?, &format!("{path}/{key}"))
    };
    let hamiltonian = || -> Result<NamedExpr, ScenarioError> {
        match map.get("hamiltonian") {
            Some(h) => ctx.expr(h, &format!("{path}/hamiltonian")),
            None => default_h.cloned().ok_or_else(|| {
                schema(format!("{path}/hamiltonian"), "no hamiltonian given and no default `H` defined")
            }),
        }
    };

    let args = match kind {
        CheckKind::Antisymmetry => CheckArgs::Antisymmetry { a: field("a")?, b: field("b")? },
        CheckKind::Leibniz => {
            let order = match map.get("order") {
                None => LeibnizOrder::Symmetric,
                Some(o) => match string(o, &format!("{path}/order"))? {
                    "symmetric" => LeibnizOrder::Symmetric,
                    "ab" => LeibnizOrder::Ab,
                    other => {
                        return Err(schema(
                            format!("{path}/order"),
                            format!("expected \"symmetric\" or \"ab\", got \"{other}\""),
                        ))
                    }
                },
            };
            CheckArgs::Leibniz { a: field("a")?, b: field("b")?, hamiltonian: hamiltonian()?, order }
        }
        CheckKind::HermiticityOfEom => {
            CheckArgs::HermiticityOfEom { observable: field("observable")?, hamiltonian: hamiltonian()? }
        }
        CheckKind::Conservation => {
            CheckArgs::Conservation { observable: field("observable")?, hamiltonian: hamiltonian()? }
        }
    };
    Ok(CheckSpec { bracket, args, expect })
}
