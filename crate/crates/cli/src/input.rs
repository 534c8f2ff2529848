use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Deserialize;
use serde_json::Value;
use tcc_core::IntVector;

/// Diagram input. Integers may be JSON numbers or decimal strings.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramFile {
    pub dim: Option<usize>,
    pub vertices: Option<Vec<Vec<Value>>>,
    pub normals: Option<Vec<Vec<Value>>>,
}

pub enum Geometry {
    Vertices(Vec<IntVector>),
    Normals(Vec<IntVector>),
}

fn integer(v: &Value) -> Result<BigInt, String> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| format!("{n} is not an integer")),
        Value::String(s) => s.trim().parse().map_err(|_| format!("{s:?} is not an integer")),
        other => Err(format!("{other} is not an integer")),
    }
}

fn vectors(rows: &[Vec<Value>]) -> Result<Vec<IntVector>, String> {
    rows.iter().map(|r| r.iter().map(integer).collect()).collect()
}

pub fn parse_geometry(text: &str) -> Result<Geometry, String> {
    let file: DiagramFile = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let geometry = match (&file.vertices, &file.normals) {
        (Some(v), None) => Geometry::Vertices(vectors(v)?),
        (None, Some(n)) => Geometry::Normals(vectors(n)?),
        _ => return Err("expected exactly one of \"vertices\" or \"normals\"".into()),
    };
    if let (Some(dim), Geometry::Vertices(v)) = (file.dim, &geometry) {
        if let Some(bad) = v.iter().find(|p| p.len() != dim) {
            return Err(format!("vertex of length {} in a diagram of dim {dim}", bad.len()));
        }
    }
    Ok(geometry)
}

/// Comma separated rationals such as `1/3,-2,5/7`.
pub fn parse_point(text: &str) -> Result<Vec<BigRational>, String> {
    text.split(',')
        .map(|s| s.trim().parse::<BigRational>().map_err(|_| format!("{s:?} is not a rational number")))
        .collect()
}
