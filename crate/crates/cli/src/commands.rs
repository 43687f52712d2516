//! Command implementations shared by the one-shot commands and the REPL.

use std::path::Path;
use std::sync::Arc;

use qcbracket::calculus::{bracket, eom};
use qcbracket::checks::run_checks;
use qcbracket::dsl::{parse_raw, parse_scenario, parse_with, pretty, Bindings, CheckArgs, Scenario};
use qcbracket::oracle::{oracle_bracket_matches, oracle_eom_matches, oracle_equal, OracleConfig};
use qcbracket::{BracketKind, CheckReport, HybridExpr, SymbolTable};

use crate::error::CliError;
use crate::report::{report_json, result_line};

/// Smallest concretization power and test degree used by `--oracle`.
const ORACLE_MIN_POWER: u32 = 3;
const ORACLE_MIN_DEGREE: u32 = 4;
const ORACLE_RANDOM_STATES: usize = 4;

pub struct Session {
    pub table: Arc<SymbolTable>,
    pub bindings: Bindings,
    pub oracle: bool,
    pub seed: u64,
}

impl Session {
    pub fn new(table: Arc<SymbolTable>, oracle: bool, seed: u64) -> Self {
        Session { table, bindings: Bindings::new(), oracle, seed }
    }

    pub fn parse(&self, text: &str) -> Result<HybridExpr, CliError> {
        Ok(parse_with(text, &self.table, &self.bindings)?)
    }

    fn oracle_config(&self, exprs: &[&HybridExpr]) -> OracleConfig {
        OracleConfig::covering(exprs, ORACLE_MIN_POWER, ORACLE_MIN_DEGREE)
            .with_random_states(ORACLE_RANDOM_STATES, self.seed)
    }

    fn verdict(agree: bool) -> Result<String, CliError> {
        if agree {
            Ok("oracle: agree".to_string())
        } else {
            Err(CliError::Failed("oracle: DISAGREE".to_string()))
        }
    }

    /// Canonical form of `text`, plus an oracle line when enabled.
    pub fn canon(&self, text: &str) -> Result<Vec<String>, CliError> {
        let value = self.parse(text)?;
        let mut out = vec![pretty(&value)];
        if self.oracle {
            let raw = parse_raw(text, &self.table, &self.bindings)?;
            let agree = oracle_equal(&raw, &value, &self.oracle_config(&[&raw, &value]))?;
            out.push(Self::verdict(agree)?);
        }
        Ok(out)
    }

    pub fn bracket(&self, kind: BracketKind, a: &str, b: &str) -> Result<Vec<String>, CliError> {
        let (a, b) = (self.parse(a)?, self.parse(b)?);
        let value = bracket(kind, &a, &b)?;
        let mut out = vec![pretty(&value)];
        if self.oracle {
            let agree = oracle_bracket_matches(kind, &a, &b, &value, &self.oracle_config(&[&a, &b, &value]))?;
            out.push(Self::verdict(agree)?);
        }
        Ok(out)
    }

    pub fn eom(&self, kind: BracketKind, h: &str, a: &str) -> Result<Vec<String>, CliError> {
        let (h, a) = (self.parse(h)?, self.parse(a)?);
        let value = eom(kind, &a, &h)?;
        let mut out = vec![pretty(&value)];
        if self.oracle {
            let agree = oracle_eom_matches(kind, &a, &h, &value, &self.oracle_config(&[&a, &h, &value]))?;
            out.push(Self::verdict(agree)?);
        }
        Ok(out)
    }

    /// Confirms every bracket value a check is built from.
    fn oracle_check(&self, kind: BracketKind, args: &CheckArgs) -> Result<bool, CliError> {
        let eom_ok = |a: &HybridExpr, h: &HybridExpr| -> Result<bool, CliError> {
            let value = eom(kind, a, h)?;
            Ok(oracle_eom_matches(kind, a, h, &value, &self.oracle_config(&[a, h, &value]))?)
        };
        match args {
            CheckArgs::Antisymmetry { a, b } => {
                for (l, r) in [(&a.expr, &b.expr), (&b.expr, &a.expr)] {
                    let value = bracket(kind, l, r)?;
                    if !oracle_bracket_matches(kind, l, r, &value, &self.oracle_config(&[l, r, &value]))? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            CheckArgs::Leibniz { a, b, hamiltonian, .. } => {
                let h = &hamiltonian.expr;
                let ab = a.expr.checked_mul(&b.expr)?;
                let ba = b.expr.checked_mul(&a.expr)?;
                Ok(eom_ok(&a.expr, h)? && eom_ok(&b.expr, h)? && eom_ok(&ab, h)? && eom_ok(&ba, h)?)
            }
            CheckArgs::HermiticityOfEom { observable, hamiltonian }
            | CheckArgs::Conservation { observable, hamiltonian } => eom_ok(&observable.expr, &hamiltonian.expr),
        }
    }
}

pub struct RunOutcome {
    pub text: Vec<String>,
    pub json: String,
    pub unexpected: usize,
    pub oracle_failures: usize,
}

pub fn run_scenario(path: &Path, oracle: bool, seed: u64) -> Result<RunOutcome, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let scenario = parse_scenario(&text)?;
    let name = scenario
        .name
        .clone()
        .or_else(|| path.file_stem().map(|s| s.to_string_lossy().into_owned()))
        .unwrap_or_default();
    let results = run_checks(&scenario)?;
    let mut outcome = render(&name, &scenario, &results);
    if oracle {
        let session = Session::new(scenario.table.clone(), true, seed);
        for (idx, c) in scenario.checks.iter().enumerate() {
            if !session.oracle_check(c.bracket, &c.args)? {
                outcome.oracle_failures += 1;
                outcome.text.push(format!("oracle: DISAGREE on check {idx}"));
            }
        }
        if outcome.oracle_failures == 0 {
            outcome.text.push("oracle: agree".to_string());
        }
    }
    Ok(outcome)
}

fn render(name: &str, scenario: &Scenario, results: &[CheckReport]) -> RunOutcome {
    let mut text = vec![format!("scenario: {name}")];
    let mut unexpected = 0;
    for (r, spec) in results.iter().zip(&scenario.checks) {
        text.push(result_line(r, spec.expect));
        if spec.expect.is_some_and(|e| !e.matches(r.passed)) {
            unexpected += 1;
        }
    }
    let passed = results.iter().filter(|r| r.passed).count();
    text.push(format!("summary: {passed} passed, {} failed", results.len() - passed));
    let json = serde_json::to_string_pretty(&report_json(name, results)).expect("report is valid JSON") + "\n";
    RunOutcome { text, json, unexpected, oracle_failures: 0 }
}
