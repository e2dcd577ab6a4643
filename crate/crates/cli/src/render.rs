//! Markdown and JSON rendering. Markdown mirrors the printed tables;
//! JSON keeps rationals as `num/den` strings so nothing ever rounds.

use num_bigint::BigInt;
use serde_json::{json, Value};

use qsc_core::exactpoly::{ratio_display, ratio_string, Rational};
use qsc_core::pairs::Wall;
use qsc_core::sheafcalc::HilbertPoly;
use qsc_core::stability::{table1, table2, table3, TableRow, Verdict};
use qsc_core::topology::{euler, is_palindromic, PoincarePoly};
use qsc_core::Error;

use crate::verify::Report;

pub fn error_json(err: &Error) -> Value {
    let kind = match err {
        Error::VariableMismatch(_, _) => "variable-mismatch",
        Error::UnknownVariable(_) => "unknown-variable",
        Error::MissingAssignment(_) => "missing-assignment",
        Error::RejectedInput(_) => "rejected-input",
        Error::IllFormedMorphism(_) => "ill-formed-morphism",
        Error::Indivisible(_) => "indivisible",
        Error::UndefinedGcd => "undefined-gcd",
        Error::InvariantViolation(_) => "invariant-violation",
        Error::UnsupportedInstance(_) => "unsupported-instance",
        Error::DegenerateWall(_) => "degenerate-wall",
        Error::Parse { .. } => "parse",
    };
    json!({ "error": { "kind": kind, "message": err.to_string() } })
}

pub fn hilbert_markdown(poly: &HilbertPoly, slope: Option<&Rational>) -> String {
    match slope {
        Some(s) => format!("{poly}\nslope = {}", ratio_display(s)),
        None => poly.to_string(),
    }
}

pub fn hilbert_json(poly: &HilbertPoly, slope: Option<&Rational>) -> Value {
    let mut obj = serde_json::Map::new();
    obj.insert("poly".into(), json!(poly.poly().to_compact_string()));
    if let Some(s) = slope {
        obj.insert("slope".into(), json!(ratio_string(s)));
    }
    Value::Object(obj)
}

pub fn slope_markdown(slope: &Rational) -> String {
    ratio_display(slope)
}

pub fn slope_json(slope: &Rational) -> Value {
    json!({ "slope": ratio_string(slope) })
}

pub fn table_rows(which: u8) -> Result<Vec<TableRow>, Error> {
    match which {
        1 => Ok(table1()),
        2 => Ok(table2()),
        3 => Ok(table3()),
        other => Err(Error::RejectedInput(format!(
            "--which must be 1, 2 or 3, got {other}"
        ))),
    }
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Allowed => "allowed",
        Verdict::Destabilizes => "destabilizes",
    }
}

fn pair_cell((a, b): (i64, i64)) -> String {
    format!("({a}, {b})")
}

pub fn table_markdown(which: u8, rows: &[TableRow]) -> Result<String, Error> {
    let (title, header): (&str, Vec<&str>) = match which {
        1 => (
            "Table 1. Possibilities for C.",
            vec!["deg(C)", "P_{O_C}", "p(O_C(1,0))", "p(O_C(0,1))", "verdict"],
        ),
        2 => (
            "Table 2. Possibilities for C'.",
            vec!["deg(C')", "P_{O_C'}", "P_{I'}", "p(I'(0,1))", "verdict"],
        ),
        3 => (
            "Table 3. Kernel of phi_1.",
            vec![
                "deg(g)",
                "(i, j)",
                "P_{Coker(phi_5)}",
                "p(Coker(phi_5))",
                "verdict",
            ],
        ),
        other => {
            return Err(Error::RejectedInput(format!(
                "--which must be 1, 2 or 3, got {other}"
            )))
        }
    };
    let mut out = String::new();
    out.push_str(&format!("### {title}\n\n"));
    out.push_str(&format!("| {} |\n", header.join(" | ")));
    out.push_str(&format!("|{}\n", " --- |".repeat(header.len())));
    for row in rows {
        let mut cells: Vec<String> = vec![pair_cell(row.bidegree)];
        if let Some(kernel) = row.kernel_twist {
            cells.push(pair_cell(kernel));
        }
        cells.extend(row.polys.iter().map(|p| p.to_string()));
        cells.extend(row.slopes.iter().map(ratio_display));
        cells.push(verdict_str(row.verdict).to_string());
        out.push_str(&format!("| {} |\n", cells.join(" | ")));
    }
    // no trailing newline; println! supplies it
    out.pop();
    Ok(out)
}

pub fn table_json(which: u8, rows: &[TableRow]) -> Value {
    let rows: Vec<Value> = rows
        .iter()
        .map(|row| {
            let mut obj = serde_json::Map::new();
            obj.insert(
                "bidegree".into(),
                json!([row.bidegree.0, row.bidegree.1]),
            );
            if let Some((i, j)) = row.kernel_twist {
                obj.insert("kernel_twist".into(), json!([i, j]));
            }
            obj.insert(
                "polys".into(),
                json!(row
                    .polys
                    .iter()
                    .map(|p| p.poly().to_compact_string())
                    .collect::<Vec<_>>()),
            );
            obj.insert(
                "slopes".into(),
                json!(row.slopes.iter().map(ratio_string).collect::<Vec<_>>()),
            );
            obj.insert("verdict".into(), json!(verdict_str(row.verdict)));
            Value::Object(obj)
        })
        .collect();
    json!({ "table": which, "rows": rows })
}

pub fn walls_markdown(walls: &[Wall]) -> String {
    if walls.is_empty() {
        return "no walls".to_string();
    }
    walls
        .iter()
        .map(|w| {
            format!(
                "alpha = {}: destabilizer {}, complement {}",
                ratio_display(&w.alpha),
                w.destabilizer,
                w.complement
            )
        })
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn walls_json(walls: &[Wall]) -> Value {
    Value::Array(
        walls
            .iter()
            .map(|w| {
                json!({
                    "alpha": ratio_string(&w.alpha),
                    "destabilizer": {
                        "gamma": w.destabilizer.gamma_dim,
                        "poly": w.destabilizer.poly.poly().to_compact_string(),
                    },
                    "complement": {
                        "gamma": w.complement.gamma_dim,
                        "poly": w.complement.poly.poly().to_compact_string(),
                    },
                })
            })
            .collect(),
    )
}

fn bigint_json(value: &BigInt) -> Value {
    match i64::try_from(value) {
        Ok(v) => json!(v),
        Err(_) => json!(value.to_string()),
    }
}

pub fn poincare_markdown(p: &PoincarePoly) -> String {
    let dim = p.degree();
    format!(
        "{p}\ndim = {dim}\neuler = {}\npalindromic = {}",
        euler(p),
        is_palindromic(p, dim)
    )
}

pub fn poincare_json(p: &PoincarePoly) -> Value {
    let dim = p.degree();
    json!({
        "coeffs": p.coeffs().iter().map(bigint_json).collect::<Vec<_>>(),
        "dim": dim,
        "euler": bigint_json(&euler(p)),
        "palindromic": is_palindromic(p, dim),
    })
}

pub fn report_markdown(report: &Report) -> String {
    let mut out = String::from("# qsc verify\n\n");
    for check in &report.checks {
        out.push_str(&format!(
            "{} {}\n",
            if check.pass { "PASS" } else { "FAIL" },
            check.label
        ));
    }
    // trim the final newline so println! adds exactly one
    out.pop();
    out
}

pub fn report_json(report: &Report) -> Value {
    json!({
        "pass": report.all_pass(),
        "checks": report
            .checks
            .iter()
            .map(|c| {
                let mut obj = serde_json::Map::new();
                obj.insert("label".into(), json!(c.label));
                if let Some(computed) = &c.computed {
                    obj.insert("computed".into(), json!(computed));
                }
                if let Some(expected) = &c.expected {
                    obj.insert("expected".into(), json!(expected));
                }
                obj.insert("pass".into(), json!(c.pass));
                Value::Object(obj)
            })
            .collect::<Vec<_>>(),
    })
}
