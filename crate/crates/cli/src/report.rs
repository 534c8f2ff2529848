use std::collections::BTreeMap;
use std::fmt::Display;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Value};
use tcc_core::BettiTable;

const JSON_SAFE: i64 = 1 << 53;

/// Integers within ±2⁵³ become JSON numbers, larger ones decimal strings.
pub fn int(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) if v.abs() <= JSON_SAFE => json!(v),
        _ => Value::String(x.to_string()),
    }
}

pub fn small<T: Into<i128>>(x: T) -> Value {
    int(&BigInt::from(x.into()))
}

pub fn ints(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

pub fn rational(x: &BigRational) -> Value {
    if x.is_integer() {
        int(x.numer())
    } else {
        Value::String(x.to_string())
    }
}

pub fn tuple<T: Display>(items: &[T]) -> String {
    format!("({})", items.iter().map(T::to_string).collect::<Vec<_>>().join(","))
}

pub fn set<T: Display>(items: &[T]) -> String {
    format!("{{{}}}", items.iter().map(T::to_string).collect::<Vec<_>>().join(","))
}

pub fn degree_map(m: &BTreeMap<i64, u64>) -> Value {
    Value::Object(m.iter().map(|(d, c)| (d.to_string(), small(*c))).collect())
}

pub fn betti_json(t: &BettiTable) -> Value {
    json!({
        "cap": t.cap,
        "pi1_order": small(t.order),
        "totals": degree_map(&t.totals),
        "by_class": t.by_class.iter().map(degree_map).collect::<Vec<_>>(),
        "divergent_edges": t.divergent_edges,
    })
}

/// Aligned text table with a header row.
pub fn render(header: &[String], rows: &[Vec<String>]) -> String {
    let cols = header.len();
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().map(|r| r[c].len()).chain([header[c].len()]).max().unwrap_or(0))
        .collect();
    let line = |cells: &[String]| {
        cells
            .iter()
            .zip(&widths)
            .map(|(s, w)| format!("{s:>w$}"))
            .collect::<Vec<_>>()
            .join("  ")
    };
    let mut out = line(header);
    for r in rows {
        out.push('\n');
        out.push_str(&line(r));
    }
    out
}

/// Degrees down the rows, total and per-class counts across.
pub fn betti_text(t: &BettiTable) -> String {
    let mut header = vec!["degree".to_string(), "total".to_string()];
    header.extend((0..t.order).map(|k| format!("[{k}]")));
    let rows: Vec<Vec<String>> = t
        .totals
        .iter()
        .map(|(d, total)| {
            let mut r = vec![d.to_string(), total.to_string()];
            r.extend((0..t.order).map(|k| t.class_count(k, *d).to_string()));
            r
        })
        .collect();
    render(&header, &rows)
}

pub fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}
