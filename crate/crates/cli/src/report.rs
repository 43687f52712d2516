//! JSON and text renderings of check results.

use qcbracket::algebra::{format_rational, QuantumGenerator, Term};
use qcbracket::dsl::{pretty, pretty_linear_arg, Expectation};
use qcbracket::{CheckReport, HybridExpr, SymbolTable};
use serde_json::{json, Map, Value};

fn term_json(table: &SymbolTable, t: &Term) -> Value {
    let exps = |m: &std::collections::BTreeMap<usize, u32>| -> Value {
        m.iter().map(|(&i, &e)| (i.to_string(), json!(e))).collect::<Map<_, _>>().into()
    };
    let word: Vec<Value> = t
        .word
        .letters()
        .iter()
        .map(|g| match g {
            QuantumGenerator::Q(m) => json!({"gen": "q", "mode": m}),
            QuantumGenerator::P(m) => json!({"gen": "p", "mode": m}),
            QuantumGenerator::F(f) => json!({
                "gen": "function",
                "name": table.function_name(f.symbol),
                "derivative": f.deriv_order,
                "arg": pretty_linear_arg(&f.arg),
            }),
        })
        .collect();
    json!({
        "coeff": {"re": format_rational(t.coeff.re()), "im": format_rational(t.coeff.im())},
        "x": exps(t.classical.x_exponents()),
        "k": exps(t.classical.k_exponents()),
        "word": word,
    })
}

/// Structured terms so that consumers never re-parse pretty output.
pub fn defect_terms(e: &HybridExpr) -> Value {
    Value::Array(e.terms().iter().map(|t| term_json(e.table(), t)).collect())
}

pub fn result_json(r: &CheckReport) -> Value {
    let inputs: Map<String, Value> = r.inputs.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
    let mut obj = Map::new();
    obj.insert("kind".into(), json!(r.kind.name()));
    obj.insert("bracket".into(), json!(r.bracket.name()));
    obj.insert("inputs".into(), inputs.into());
    obj.insert("passed".into(), json!(r.passed));
    obj.insert("defect".into(), json!(pretty(&r.defect)));
    obj.insert("defect_terms".into(), defect_terms(&r.defect));
    if !r.parts.is_empty() {
        let parts: Map<String, Value> = r.parts.iter().map(|(k, v)| (k.clone(), json!(pretty(v)))).collect();
        obj.insert("parts".into(), parts.into());
    }
    Value::Object(obj)
}

pub fn report_json(scenario: &str, results: &[CheckReport]) -> Value {
    let passed = results.iter().filter(|r| r.passed).count();
    json!({
        "scenario": scenario,
        "results": results.iter().map(result_json).collect::<Vec<_>>(),
        "summary": {"passed": passed, "failed": results.len() - passed},
    })
}

pub fn result_line(r: &CheckReport, expect: Option<Expectation>) -> String {
    let verdict = if r.passed { "PASS" } else { "FAIL" };
    let inputs: Vec<String> = r.inputs.iter().map(|(k, v)| format!("{k}={v}")).collect();
    let mut line = format!("[{verdict}] {} ({}) {}", r.kind, r.bracket, inputs.join(", "));
    if !r.passed {
        line.push_str(&format!("\n    defect: {}", pretty(&r.defect)));
        for (label, part) in &r.parts {
            line.push_str(&format!("\n    {label}: {}", pretty(part)));
        }
    }
    if let Some(e) = expect {
        let status = if e.matches(r.passed) { "as expected" } else { "UNEXPECTED" };
        line.push_str(&format!("\n    expect {}: {status}", e.name()));
    }
    line
}
