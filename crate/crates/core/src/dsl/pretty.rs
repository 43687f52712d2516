use num::{One, Signed, Zero};

use crate::algebra::{
    format_rational, ClassicalMonomial, Coefficient, HybridExpr, LinearArg, QuantumGenerator, Rational, SymbolTable,
    Term,
};

fn indexed(letter: char, idx: usize) -> String {
    if idx == 1 {
        letter.to_string()
    } else {
        format!("{letter}{idx}")
    }
}

fn with_power(base: String, exp: usize) -> String {
    if exp == 1 {
        base
    } else {
        format!("{base}^{exp}")
    }
}

/// `q - x`, `2*q2 + 1/2*k - 3`.
pub fn pretty_linear_arg(arg: &LinearArg) -> String {
    let mut parts: Vec<(Rational, Option<String>)> = Vec::new();
    for (&m, c) in arg.q_coeffs() {
        parts.push((c.clone(), Some(indexed('q', m))));
    }
    for (&d, c) in arg.x_coeffs() {
        parts.push((c.clone(), Some(indexed('x', d))));
    }
    for (&d, c) in arg.k_coeffs() {
        parts.push((c.clone(), Some(indexed('k', d))));
    }
    if !arg.constant().is_zero() {
        parts.push((arg.constant().clone(), None));
    }
    let mut out = String::new();
    for (idx, (c, sym)) in parts.into_iter().enumerate() {
        let negative = c.is_negative();
        let mag = c.abs();
        let body = match sym {
            None => format_rational(&mag),
            Some(s) if mag.is_one() => s,
            Some(s) => format!("{}*{}", format_rational(&mag), s),
        };
        match (idx, negative) {
            (0, false) => out.push_str(&body),
            (0, true) => {
                out.push('-');
                out.push_str(&body);
            }
            (_, false) => {
                out.push_str(" + ");
                out.push_str(&body);
            }
            (_, true) => {
                out.push_str(" - ");
                out.push_str(&body);
            }
        }
    }
    out
}

fn letter_text(g: &QuantumGenerator, table: &SymbolTable) -> String {
    match g {
        QuantumGenerator::Q(m) => indexed('q', *m),
        QuantumGenerator::P(m) => indexed('p', *m),
        QuantumGenerator::F(f) => format!(
            "{}{}({})",
            table.function_name(f.symbol),
            "'".repeat(f.deriv_order as usize),
            pretty_linear_arg(&f.arg)
        ),
    }
}

fn classical_factors(m: &ClassicalMonomial, out: &mut Vec<String>) {
    for (&d, &e) in m.x_exponents() {
        out.push(with_power(indexed('x', d), e as usize));
    }
    for (&d, &e) in m.k_exponents() {
        out.push(with_power(indexed('k', d), e as usize));
    }
}

/// Coefficient rendered as a standalone factor, without the leading sign
/// when `strip_sign` is set (caller prints `-`).
fn coefficient_text(c: &Coefficient, strip_sign: bool) -> String {
    let c = if strip_sign { -c } else { c.clone() };
    let (re, im) = (c.re(), c.im());
    if im.is_zero() {
        return format_rational(re);
    }
    if re.is_zero() {
        let sign = if im.is_negative() { "-" } else { "" };
        let mag = im.abs();
        return if mag.is_one() { format!("{sign}i") } else { format!("{sign}{}*i", format_rational(&mag)) };
    }
    let sign = if im.is_negative() { '-' } else { '+' };
    let mag = im.abs();
    let imag = if mag.is_one() { "i".to_string() } else { format!("{}*i", format_rational(&mag)) };
    format!("({} {} {})", format_rational(re), sign, imag)
}

/// Returns (negative, body) for one term.
fn term_text(t: &Term, table: &SymbolTable) -> (bool, String) {
    let mut factors = Vec::new();
    classical_factors(&t.classical, &mut factors);
    let letters = t.word.letters();
    let mut j = 0;
    while j < letters.len() {
        let mut run = 1;
        while j + run < letters.len() && letters[j + run] == letters[j] {
            run += 1;
        }
        factors.push(with_power(letter_text(&letters[j], table), run));
        j += run;
    }

    let negative = t.coeff.is_negative_leading();
    let coeff = coefficient_text(&t.coeff, negative);
    let body = if factors.is_empty() {
        coeff
    } else if coeff == "1" {
        factors.join("*")
    } else {
        format!("{}*{}", coeff, factors.join("*"))
    };
    (negative, body)
}

/// Deterministic rendering in term order; re-parses to an equal value.
pub fn pretty(e: &HybridExpr) -> String {
    if e.terms().is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, t) in e.terms().iter().enumerate() {
        let (negative, body) = term_text(t, e.table());
        match (idx, negative) {
            (0, false) => {}
            (0, true) => out.push('-'),
            (_, false) => out.push_str(" + "),
            (_, true) => out.push_str(" - "),
        }
        out.push_str(&body);
    }
    out
}
