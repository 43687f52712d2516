//! Line-oriented interactive session.

use std::io::{BufRead, Write};

use qcbracket::algebra::is_reserved_name;
use qcbracket::calculus::eom;
use qcbracket::checks::{antisymmetry_defect, conservation_check, hermiticity_defect, leibniz_defect};
use qcbracket::dsl::pretty;
use qcbracket::{BracketKind, HybridExpr};

use crate::commands::Session;
use crate::error::CliError;

const HELP: &str = "\
expressions:            EXPR                      print the canonical form
definitions:            :let NAME = EXPR
brackets:               :bracket KIND A B
equations of motion:    :eom KIND H A
checks:                 :check antisymmetry KIND A B
                        :check leibniz KIND H A B
                        :check hermiticity KIND H A
                        :check conservation KIND H A
other:                  :help  :quit
arguments containing spaces must be quoted or parenthesized";

pub enum Step {
    Output(Vec<String>),
    Quit,
}

/// Splits on whitespace outside parentheses and double quotes.
pub fn split_args(s: &str) -> Result<Vec<String>, String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0usize;
    let mut quoted = false;
    for ch in s.chars() {
        match ch {
            '"' => quoted = !quoted,
            '(' if !quoted => {
                depth += 1;
                cur.push(ch);
            }
            ')' if !quoted => {
                depth = depth.saturating_sub(1);
                cur.push(ch);
            }
            c if c.is_whitespace() && !quoted && depth == 0 => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if quoted {
        return Err("unterminated quote".into());
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    Ok(out)
}

fn kind(s: &str) -> Result<BracketKind, CliError> {
    s.parse().map_err(|e: qcbracket::calculus::UnknownBracket| CliError::Validation(e.to_string()))
}

fn arity(args: &[String], n: usize, usage: &str) -> Result<(), CliError> {
    if args.len() == n {
        Ok(())
    } else {
        Err(CliError::Parse(format!("usage: {usage}")))
    }
}

fn verdict(defect: &HybridExpr) -> String {
    if defect.is_zero() {
        "pass".to_string()
    } else {
        format!("fail: {}", pretty(defect))
    }
}

impl Session {
    pub fn step(&mut self, line: &str) -> Result<Step, CliError> {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            return Ok(Step::Output(Vec::new()));
        }
        let Some(command) = line.strip_prefix(':') else {
            return Ok(Step::Output(self.canon(line)?));
        };
        let (head, rest) = command.split_once(char::is_whitespace).unwrap_or((command, ""));
        let out = match head {
            "quit" | "q" => return Ok(Step::Quit),
            "help" => HELP.lines().map(str::to_string).collect(),
            "let" => self.define(rest)?,
            "bracket" => {
                let args = split_args(rest).map_err(CliError::Parse)?;
                arity(&args, 3, ":bracket KIND A B")?;
                self.bracket(kind(&args[0])?, &args[1], &args[2])?
            }
            "eom" => {
                let args = split_args(rest).map_err(CliError::Parse)?;
                arity(&args, 3, ":eom KIND H A")?;
                self.eom(kind(&args[0])?, &args[1], &args[2])?
            }
            "check" => vec![self.check(rest)?],
            other => return Err(CliError::Parse(format!("unknown command `:{other}` (try :help)"))),
        };
        Ok(Step::Output(out))
    }

    fn define(&mut self, rest: &str) -> Result<Vec<String>, CliError> {
        let (name, text) = rest.split_once('=').ok_or_else(|| CliError::Parse("usage: :let NAME = EXPR".into()))?;
        let name = name.trim();
        let ident = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !ident {
            return Err(CliError::Parse(format!("`{name}` is not an identifier")));
        }
        if is_reserved_name(name) || self.table.function_id(name).is_some() {
            return Err(CliError::Validation(format!("`{name}` is reserved")));
        }
        let value = self.parse(text)?;
        let shown = format!("{name} = {}", pretty(&value));
        self.bindings.insert(name.to_string(), value);
        Ok(vec![shown])
    }

    fn check(&self, rest: &str) -> Result<String, CliError> {
        let args = split_args(rest).map_err(CliError::Parse)?;
        let Some(which) = args.first() else {
            return Err(CliError::Parse("usage: :check antisymmetry|leibniz|hermiticity|conservation KIND ...".into()));
        };
        let e = |i: usize| self.parse(&args[i]);
        match which.as_str() {
            "antisymmetry" => {
                arity(&args, 4, ":check antisymmetry KIND A B")?;
                Ok(verdict(&antisymmetry_defect(kind(&args[1])?, &e(2)?, &e(3)?)?))
            }
            "leibniz" => {
                arity(&args, 5, ":check leibniz KIND H A B")?;
                let (k, h, a, b) = (kind(&args[1])?, e(2)?, e(3)?, e(4)?);
                let ab = leibniz_defect(k, &a, &b, &h)?;
                let ba = leibniz_defect(k, &b, &a, &h)?;
                let sum = ab.checked_add(&ba)?;
                let mut s = verdict(&sum);
                if !sum.is_zero() {
                    s.push_str(&format!(" (a*b: {}, b*a: {})", pretty(&ab), pretty(&ba)));
                }
                Ok(s)
            }
            "hermiticity" => {
                arity(&args, 4, ":check hermiticity KIND H A")?;
                let rate = eom(kind(&args[1])?, &e(3)?, &e(2)?)?;
                Ok(verdict(&hermiticity_defect(&rate)))
            }
            "conservation" => {
                arity(&args, 4, ":check conservation KIND H A")?;
                Ok(verdict(&conservation_check(kind(&args[1])?, &e(3)?, &e(2)?)?.defect))
            }
            other => Err(CliError::Parse(format!("unknown check `{other}`"))),
        }
    }
}

/// Runs until `:quit` or end of input. Errors are reported per line.
pub fn run(
    session: &mut Session,
    input: impl BufRead,
    mut out: impl Write,
    mut err: impl Write,
    prompt: bool,
) -> std::io::Result<()> {
    let mut lines = input.lines();
    loop {
        if prompt {
            write!(out, "> ")?;
            out.flush()?;
        }
        let Some(line) = lines.next() else { return Ok(()) };
        match session.step(&line?) {
            Ok(Step::Quit) => return Ok(()),
            Ok(Step::Output(text)) => {
                for l in text {
                    writeln!(out, "{l}")?;
                }
            }
            Err(e) => writeln!(err, "error: {e}")?,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qcbracket::SymbolTable;
    use std::sync::Arc;

    fn session() -> Session {
        Session::new(Arc::new(SymbolTable::with_functions(1, 1, &["V"]).unwrap()), false, 0)
    }

    fn transcript(script: &str) -> (String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        run(&mut session(), script.as_bytes(), &mut out, &mut err, false).unwrap();
        (String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn splits_at_top_level() {
        assert_eq!(split_args("anderson (x*q + q*x) k").unwrap(), ["anderson", "(x*q + q*x)", "k"]);
        assert_eq!(split_args(r#"a "1/2*k*p^2" q"#).unwrap(), ["a", "1/2*k*p^2", "q"]);
        assert!(split_args("\"open").is_err());
    }

    #[test]
    fn evaluates_and_binds() {
        let (out, err) = transcript("comm(q, p)\n:let H = 1/2*k*p^2\n:eom aleksandrov H x\n:quit\nq\n");
        assert_eq!(out, "i\nH = 1/2*k*p^2\n1/2*p^2\n");
        assert!(err.is_empty());
    }

    #[test]
    fn errors_do_not_end_the_session() {
        let (out, err) = transcript("q*\n:bogus\np*q\n");
        assert_eq!(out, "q*p - i\n");
        assert_eq!(err.lines().count(), 2);
    }

    #[test]
    fn checks() {
        let (out, _) = transcript(
            ":let H = 1/2*k*p^2\n\
             :check leibniz anderson H x q\n\
             :check leibniz aleksandrov H x q\n\
             :check hermiticity anderson H \"x*q + q*x\"\n\
             :check conservation aleksandrov H p\n\
             :check antisymmetry anderson x*q k*p\n",
        );
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[1], "fail: i*p (a*b: i*p, b*a: 0)");
        assert_eq!(lines[2], "pass");
        assert_eq!(lines[3], "fail: 2*i*p");
        assert_eq!(lines[4], "pass");
        assert_eq!(lines[5], "fail: -1");
    }

    #[test]
    fn reserved_names_cannot_be_bound() {
        let (_, err) = transcript(":let q2 = x\n:let V = x\n:let 2a = x\n");
        assert_eq!(err.lines().count(), 3);
    }
}
