//! Tokenizer and recursive-descent parser.
//!
//! ```text
//! sum   := prod (('+' | '-') prod)*
//! prod  := unary ('*' unary)*
//! unary := '-' unary | power
//! power := atom ('^' nat)?
//! atom  := rational | 'i' | symbol | funcapp | builtin '(' args ')' | '(' sum ')'
//! funcapp := ident '\''* '(' sum ')'
//! ```

use num::BigInt;

use super::ast::{Ast, AstKind, Builtin, Span};
use super::ParseError;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt, BigInt),
    Ident(String),
    Prime,
    LParen,
    RParen,
    Comma,
    Plus,
    Minus,
    Star,
    Caret,
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    span: Span,
}

fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Num(..) => "number".into(),
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Prime => "`'`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Comma => "`,`".into(),
        Tok::Plus => "`+`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Star => "`*`".into(),
        Tok::Caret => "`^`".into(),
        Tok::Eof => "end of input".into(),
    }
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let single = |tok| Token { tok, span: Span { start, end: start + 1 } };
        match c {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'(' => out.push(single(Tok::LParen)),
            b')' => out.push(single(Tok::RParen)),
            b',' => out.push(single(Tok::Comma)),
            b'+' => out.push(single(Tok::Plus)),
            b'-' => out.push(single(Tok::Minus)),
            b'*' => out.push(single(Tok::Star)),
            b'^' => out.push(single(Tok::Caret)),
            b'\'' => out.push(single(Tok::Prime)),
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let numer: BigInt = src[start..i].parse().expect("digits");
                let mut denom = BigInt::from(1);
                if i < bytes.len() && bytes[i] == b'/' {
                    let dstart = i + 1;
                    let mut j = dstart;
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    if j == dstart {
                        return Err(ParseError::new(dstart, "expected denominator after `/`", "digits"));
                    }
                    denom = src[dstart..j].parse().expect("digits");
                    i = j;
                }
                out.push(Token { tok: Tok::Num(numer, denom), span: Span { start, end: i } });
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push(Token { tok: Tok::Ident(src[start..i].to_string()), span: Span { start, end: i } });
                continue;
            }
            _ => {
                let ch = src[start..].chars().next().expect("in bounds");
                return Err(ParseError::new(start, format!("unexpected character `{ch}`"), "expression"));
            }
        }
        i += 1;
    }
    out.push(Token { tok: Tok::Eof, span: Span { start: src.len(), end: src.len() } });
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let idx = (self.pos + offset).min(self.tokens.len() - 1);
        &self.tokens[idx].tok
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        let t = self.peek();
        let msg = match t.tok {
            Tok::Eof => "unexpected end of input".to_string(),
            _ => format!("unexpected {}", describe(&t.tok)),
        };
        ParseError::new(t.span.start, msg, expected)
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<Token, ParseError> {
        if self.peek().tok == tok {
            Ok(self.bump())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn sum(&mut self) -> Result<Ast, ParseError> {
        let first = self.prod()?;
        let start = first.span.start;
        let mut items = vec![first];
        loop {
            let negate = match self.peek().tok {
                Tok::Plus => false,
                Tok::Minus => true,
                _ => break,
            };
            let op = self.bump();
            let rhs = self.prod()?;
            let item = if negate {
                let span = Span { start: op.span.start, end: rhs.span.end };
                Ast::new(AstKind::Neg(Box::new(rhs)), span)
            } else {
                rhs
            };
            items.push(item);
        }
        if items.len() == 1 {
            return Ok(items.pop().expect("one item"));
        }
        let end = items.last().expect("nonempty").span.end;
        Ok(Ast::new(AstKind::Sum(items), Span { start, end }))
    }

    fn prod(&mut self) -> Result<Ast, ParseError> {
        let first = self.unary()?;
        let start = first.span.start;
        let mut items = vec![first];
        while self.peek().tok == Tok::Star {
            self.bump();
            items.push(self.unary()?);
        }
        if items.len() == 1 {
            return Ok(items.pop().expect("one item"));
        }
        let end = items.last().expect("nonempty").span.end;
        Ok(Ast::new(AstKind::Product(items), Span { start, end }))
    }

    fn unary(&mut self) -> Result<Ast, ParseError> {
        if self.peek().tok == Tok::Minus {
            let op = self.bump();
            let inner = self.unary()?;
            let span = Span { start: op.span.start, end: inner.span.end };
            return Ok(Ast::new(AstKind::Neg(Box::new(inner)), span));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Ast, ParseError> {
        let base = self.atom()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let t = self.peek().clone();
        let exp = match &t.tok {
            Tok::Num(n, d) if *d == BigInt::from(1) => n,
            _ => return Err(self.unexpected("natural number exponent")),
        };
        let exp: u32 = match u32::try_from(exp) {
            Ok(e) if e >= 1 => e,
            _ => {
                return Err(ParseError::new(
                    t.span.start,
                    "exponent must be between 1 and 2^32-1",
                    "natural number exponent",
                ))
            }
        };
        self.bump();
        let span = Span { start: base.span.start, end: t.span.end };
        Ok(Ast::new(AstKind::Power(Box::new(base), exp), span))
    }

    fn atom(&mut self) -> Result<Ast, ParseError> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Num(n, d) => {
                self.bump();
                Ok(Ast::new(AstKind::Rational(n, d), t.span))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.sum()?;
                let close = self.expect(Tok::RParen, "`)`")?;
                Ok(Ast { kind: inner.kind, span: Span { start: t.span.start, end: close.span.end } })
            }
            Tok::Ident(name) => {
                self.bump();
                if name == "i" {
                    return Ok(Ast::new(AstKind::ImagUnit, t.span));
                }
                if let Some(builtin) = Builtin::from_name(&name) {
                    return self.call(builtin, t.span);
                }
                if matches!(self.peek().tok, Tok::Prime | Tok::LParen) {
                    return self.funcapp(name, t.span);
                }
                Ok(Ast::new(AstKind::Symbol(name), t.span))
            }
            _ => Err(self.unexpected("operand")),
        }
    }

    fn call(&mut self, builtin: Builtin, name_span: Span) -> Result<Ast, ParseError> {
        self.expect(Tok::LParen, "`(`")?;
        let mut args = vec![self.sum()?];
        while self.peek().tok == Tok::Comma {
            self.bump();
            args.push(self.sum()?);
        }
        if args.len() != builtin.arity() {
            let at = self.peek().span.start;
            let expected = if args.len() < builtin.arity() { "`,`" } else { "`)`" };
            return Err(ParseError::new(
                at,
                format!("`{}` takes {} argument(s), got {}", builtin.name(), builtin.arity(), args.len()),
                expected,
            ));
        }
        let close = self.expect(Tok::RParen, if args.len() < builtin.arity() { "`,`" } else { "`)`" })?;
        Ok(Ast::new(AstKind::Call { builtin, args }, Span { start: name_span.start, end: close.span.end }))
    }

    fn funcapp(&mut self, name: String, name_span: Span) -> Result<Ast, ParseError> {
        let mut primes = 0u32;
        while self.peek().tok == Tok::Prime {
            self.bump();
            primes += 1;
        }
        self.expect(Tok::LParen, "`(`")?;
        let arg = self.sum()?;
        let close = self.expect(Tok::RParen, "`)`")?;
        Ok(Ast::new(
            AstKind::FuncApp { name, primes, arg: Box::new(arg) },
            Span { start: name_span.start, end: close.span.end },
        ))
    }
}

/// Parses expression text into an [`Ast`] without resolving any names.
pub fn parse_ast(src: &str) -> Result<Ast, ParseError> {
    let tokens = lex(src)?;
    let mut p = Parser { tokens, pos: 0 };
    let ast = p.sum()?;
    if p.peek_at(0) != &Tok::Eof {
        return Err(p.unexpected("operator or end of input"));
    }
    Ok(ast)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn err_pos(s: &str) -> usize {
        parse_ast(s).unwrap_err().position
    }

    #[test]
    fn precedence() {
        let ast = parse_ast("-p^2 + q*x").unwrap();
        let AstKind::Sum(items) = ast.kind else { panic!("sum expected") };
        assert!(matches!(items[0].kind, AstKind::Neg(_)));
        let AstKind::Neg(inner) = &items[0].kind else { unreachable!() };
        assert!(matches!(inner.kind, AstKind::Power(_, 2)));
        assert!(matches!(items[1].kind, AstKind::Product(_)));
    }

    #[test]
    fn rationals_and_primes() {
        let ast = parse_ast("1/2*V''(q - x)").unwrap();
        let AstKind::Product(items) = ast.kind else { panic!() };
        assert_eq!(items[0].kind, AstKind::Rational(1.into(), 2.into()));
        assert!(matches!(&items[1].kind, AstKind::FuncApp { primes: 2, .. }));
    }

    #[test]
    fn builtins() {
        let ast = parse_ast("comm(q, p)").unwrap();
        assert!(matches!(ast.kind, AstKind::Call { builtin: Builtin::Comm, .. }));
        assert!(parse_ast("dag(q, p)").is_err());
        assert!(parse_ast("comm(q)").is_err());
        assert!(parse_ast("comm").is_err());
    }

    #[test]
    fn error_positions_point_at_offender() {
        assert_eq!(err_pos("q*"), 2);
        assert_eq!(err_pos("q + + p"), 4);
        assert_eq!(err_pos("(q + p"), 6);
        assert_eq!(err_pos("q $ p"), 2);
        assert_eq!(err_pos("q p"), 2);
        assert_eq!(err_pos("1/x"), 2);
        assert_eq!(err_pos("p^0"), 2);
        assert_eq!(err_pos("p^q"), 2);
        assert_eq!(err_pos(""), 0);
        assert_eq!(err_pos("V'q"), 2);
    }

    #[test]
    fn spans_cover_source() {
        let src = "  (q + p)^3 ";
        let ast = parse_ast(src).unwrap();
        assert_eq!(ast.span, Span { start: 2, end: 11 });
    }
}
