use thiserror::Error;

use crate::toric::{ConeFailure, Diagnostic};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("degenerate value: {0} is exactly an integer")]
    DegenerateValue(String),

    #[error("matrix dimensions do not match: {0}")]
    Dimension(String),

    #[error("vectors cannot be completed to a lattice basis (maximal-minor gcd is {gcd})")]
    NotCompletable { gcd: String },

    #[error("basis is singular")]
    SingularBasis,

    #[error("matrix is not unimodular (determinant {det})")]
    NotUnimodular { det: String },

    #[error("invalid toric diagram: {}", fmt_list(.0))]
    InvalidDiagram(Vec<Diagnostic>),

    #[error("cone is not good: {}", fmt_list(.0))]
    NotGood(Vec<ConeFailure>),

    #[error("cone has no Gorenstein certificate")]
    NotGorenstein,

    #[error("gcd(alpha_{index}, p) = gcd({value}, {p}) is not 1")]
    GcdViolation { index: usize, value: i64, p: u64 },

    #[error("gcd(p, q) = gcd({p}, {q}) is not 1")]
    NotCoprime { p: u64, q: u64 },

    #[error("fundamental group is not cyclic: d_n = {d_n}")]
    NotCyclic { d_n: String },

    #[error("edge {0} does not exist")]
    NoSuchEdge(usize),

    #[error("perturbed Reeb vector is not interior: fails facet {facet} ({vertices:?})")]
    NotInterior { facet: usize, vertices: Vec<usize> },

    #[error("degenerate Reeb data on edge {edge}, multiplicity {multiplicity}: {detail}")]
    DegenerateReeb { edge: usize, multiplicity: u64, detail: String },

    #[error("weight {index} = {value} is not a unit mod {p}")]
    NonUnitWeight { index: usize, value: i64, p: u64 },

    #[error("weights sum to {sum}, which is not 0 mod {p}")]
    NonGorensteinWeights { sum: i64, p: u64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("value out of supported range: {0}")]
    Overflow(String),
}

fn fmt_list<T: std::fmt::Display>(items: &[T]) -> String {
    items.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; ")
}

impl Error {
    /// True for errors caused by a degenerate (non-generic) Reeb vector.
    pub fn is_degeneracy(&self) -> bool {
        matches!(self, Error::DegenerateReeb { .. } | Error::DegenerateValue(_))
    }
}
