//! Toric diagrams and moment cones.
//!
//! A toric diagram is an integral simplicial polytope whose facets are
//! lattice simplices; its moment cone has normals `(v_j, 1)`. Cones can also
//! be given directly by their normals, in which case goodness and the
//! Gorenstein property are checked from scratch.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{
    cross_product, dot, gcd_maximal_minors, int_vector, is_primitive, primitive_part,
    rank_of_rows, solve_integer_system, solve_rational_unique, IntMatrix, IntVector,
};

/// A facet of a toric diagram: `⟨normal, x⟩ ≥ offset` on the diagram, with
/// equality exactly on the listed vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    pub vertices: Vec<usize>,
    pub normal: IntVector,
    pub offset: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricDiagram {
    dim: usize,
    vertices: Vec<IntVector>,
    facets: Vec<Facet>,
    discarded: Vec<IntVector>,
}

/// A violated condition found while validating a diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Diagnostic {
    TooFewPoints { found: usize, needed: usize },
    WrongLength { index: usize, len: usize, dim: usize },
    NotFullDimensional { rank: usize, dim: usize },
    NotSimplicial { normal: IntVector, vertices: Vec<IntVector> },
    FacetNotUnimodular { vertices: Vec<IntVector>, gcd: BigInt },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::TooFewPoints { found, needed } => {
                write!(f, "{found} distinct points, need at least {needed}")
            }
            Diagnostic::WrongLength { index, len, dim } => {
                write!(f, "point {index} has {len} coordinates, expected {dim}")
            }
            Diagnostic::NotFullDimensional { rank, dim } => {
                write!(f, "affine hull has dimension {}, expected {dim}", rank.saturating_sub(1))
            }
            Diagnostic::NotSimplicial { normal, vertices } => write!(
                f,
                "facet with normal {} has {} vertices {}, not a simplex",
                fmt_vec(normal),
                vertices.len(),
                vertices.iter().map(|v| fmt_vec(v)).join(" ")
            ),
            Diagnostic::FacetNotUnimodular { vertices, gcd } => write!(
                f,
                "facet {} is not a unimodular simplex (minor gcd {gcd})",
                vertices.iter().map(|v| fmt_vec(v)).join(" ")
            ),
        }
    }
}

pub(crate) fn fmt_vec(v: &[BigInt]) -> String {
    format!("({})", v.iter().join(","))
}

fn lift(v: &[BigInt], last: BigInt) -> IntVector {
    let mut out = v.to_vec();
    out.push(last);
    out
}

/// Is `point` in the convex hull of `others`? By Carathéodory it suffices to
/// test affinely independent subsets of size at most `dim + 1`.
fn in_convex_hull(point: &[BigInt], others: &[IntVector], dim: usize) -> bool {
    let rhs = lift(point, BigInt::one());
    (1..=(dim + 1).min(others.len())).any(|k| {
        others.iter().combinations(k).any(|subset| {
            let cols: Vec<IntVector> = subset.iter().map(|v| lift(v, BigInt::one())).collect();
            let a = IntMatrix::from_columns(&cols).expect("uniform lengths");
            solve_rational_unique(&a, &rhs).is_some_and(|x| x.iter().all(|l| !l.is_negative()))
        })
    })
}

impl ToricDiagram {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[IntVector] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Input points dropped because they were not vertices.
    pub fn discarded(&self) -> &[IntVector] {
        &self.discarded
    }

    /// `true` iff `point` satisfies every facet inequality (closed diagram).
    pub fn contains(&self, point: &[BigRational]) -> bool {
        point.len() == self.dim
            && self.facets.iter().all(|f| {
                let lhs: BigRational = f
                    .normal
                    .iter()
                    .zip(point)
                    .map(|(u, x)| BigRational::from_integer(u.clone()) * x)
                    .sum();
                lhs >= BigRational::from_integer(f.offset.clone())
            })
    }

    pub fn barycenter(&self) -> Vec<BigRational> {
        let d = BigRational::from_integer(BigInt::from(self.vertices.len()));
        (0..self.dim)
            .map(|i| self.vertices.iter().map(|v| BigRational::from_integer(v[i].clone())).sum::<BigRational>() / &d)
            .collect()
    }
}

/// Validate a point set as a toric diagram: extract vertices, enumerate
/// facets, and check that every facet is a unimodular simplex.
pub fn validate_toric_diagram(points: &[IntVector]) -> Result<ToricDiagram> {
    let dim = points.first().map_or(0, Vec::len);
    let mut diags = Vec::new();
    for (index, p) in points.iter().enumerate() {
        if p.len() != dim {
            diags.push(Diagnostic::WrongLength { index, len: p.len(), dim });
        }
    }
    if !diags.is_empty() {
        return Err(Error::InvalidDiagram(diags));
    }
    if dim == 0 {
        return Err(Error::InvalidInput("diagram dimension must be at least 1".into()));
    }
    let distinct: Vec<IntVector> = points.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    if distinct.len() < dim + 1 {
        return Err(Error::InvalidDiagram(vec![Diagnostic::TooFewPoints {
            found: distinct.len(),
            needed: dim + 1,
        }]));
    }
    let lifted: Vec<IntVector> = distinct.iter().map(|v| lift(v, BigInt::one())).collect();
    let rank = rank_of_rows(&lifted);
    if rank < dim + 1 {
        return Err(Error::InvalidDiagram(vec![Diagnostic::NotFullDimensional { rank, dim }]));
    }

    let is_vertex: Vec<bool> = (0..distinct.len())
        .into_par_iter()
        .map(|i| {
            let others: Vec<IntVector> =
                distinct.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, v)| v.clone()).collect();
            !in_convex_hull(&distinct[i], &others, dim)
        })
        .collect();
    let (vertices, discarded): (Vec<_>, Vec<_>) =
        distinct.into_iter().zip(is_vertex).partition(|(_, keep)| *keep);
    let vertices: Vec<IntVector> = vertices.into_iter().map(|(v, _)| v).collect();
    let discarded: Vec<IntVector> = discarded.into_iter().map(|(v, _)| v).collect();
    let lifted: Vec<IntVector> = vertices.iter().map(|v| lift(v, BigInt::one())).collect();

    // Each supporting hyperplane through n affinely independent vertices.
    let hyperplanes: BTreeSet<IntVector> = (0..vertices.len())
        .combinations(dim)
        .par_bridge()
        .filter_map(|subset| {
            let rows: Vec<IntVector> = subset.iter().map(|&i| lifted[i].clone()).collect();
            let w = cross_product(&rows);
            if w.iter().all(Zero::is_zero) {
                return None;
            }
            let values: Vec<BigInt> = lifted.iter().map(|x| dot(&w, x)).collect();
            if values.iter().all(|v| !v.is_negative()) {
                Some(primitive_part(&w))
            } else if values.iter().all(|v| !v.is_positive()) {
                Some(primitive_part(&w.iter().map(|x| -x).collect::<Vec<_>>()))
            } else {
                None
            }
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect();

    let mut facets = Vec::new();
    for w in hyperplanes {
        let on: Vec<usize> = (0..vertices.len()).filter(|&i| dot(&w, &lifted[i]).is_zero()).collect();
        let normal = primitive_part(&w[..dim]);
        let offset = dot(&normal, &vertices[on[0]]);
        if on.len() > dim {
            diags.push(Diagnostic::NotSimplicial {
                normal: normal.clone(),
                vertices: on.iter().map(|&i| vertices[i].clone()).collect(),
            });
            continue;
        }
        let stack = IntMatrix::from_rows(&on.iter().map(|&i| lifted[i].clone()).collect::<Vec<_>>())?;
        let g = gcd_maximal_minors(&stack)?;
        if !g.is_one() {
            diags.push(Diagnostic::FacetNotUnimodular {
                vertices: on.iter().map(|&i| vertices[i].clone()).collect(),
                gcd: g,
            });
            continue;
        }
        facets.push(Facet { vertices: on, normal, offset });
    }
    if !diags.is_empty() {
        return Err(Error::InvalidDiagram(diags));
    }
    facets.sort_by(|a, b| a.vertices.cmp(&b.vertices));
    Ok(ToricDiagram { dim, vertices, facets, discarded })
}

/// A face of a cone recorded by the set of normals vanishing on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ray {
    pub generator: IntVector,
    pub tight: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentCone {
    normals: Vec<IntVector>,
    edges: Vec<Vec<usize>>,
    rays: Vec<IntVector>,
    certificate: Option<IntVector>,
}

/// A reason a set of normals fails to define a good cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConeFailure {
    TooFewNormals { found: usize, needed: usize },
    WrongLength { index: usize, len: usize, dim: usize },
    NotPrimitive { index: usize, normal: IntVector },
    NotStrictlyConvex { rank: usize },
    NotFullDimensional,
    Redundant { index: usize },
    FaceNotSimplicial { normals: Vec<usize>, codim: usize },
    FaceNotUnimodular { normals: Vec<usize>, gcd: BigInt },
}

impl fmt::Display for ConeFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConeFailure::TooFewNormals { found, needed } => {
                write!(f, "{found} normals, need at least {needed}")
            }
            ConeFailure::WrongLength { index, len, dim } => {
                write!(f, "normal {index} has {len} coordinates, expected {dim}")
            }
            ConeFailure::NotPrimitive { index, normal } => {
                write!(f, "normal {index} = {} is not primitive", fmt_vec(normal))
            }
            ConeFailure::NotStrictlyConvex { rank } => {
                write!(f, "normals span a space of dimension {rank}; the cone contains a line")
            }
            ConeFailure::NotFullDimensional => write!(f, "cone has empty interior"),
            ConeFailure::Redundant { index } => write!(f, "normal {index} does not define a facet"),
            ConeFailure::FaceNotSimplicial { normals, codim } => write!(
                f,
                "face of codimension {codim} has {} normals {:?}",
                normals.len(),
                normals
            ),
            ConeFailure::FaceNotUnimodular { normals, gcd } => write!(
                f,
                "normals {normals:?} of a face do not extend to a lattice basis (minor gcd {gcd})"
            ),
        }
    }
}

/// Outcome of [`check_good_cone`].
#[derive(Clone, Debug)]
pub struct ConeVerdict {
    pub failures: Vec<ConeFailure>,
    pub rays: Vec<Ray>,
    /// For each normal, a point where it vanishes and all others are positive.
    pub facet_witnesses: Vec<Option<IntVector>>,
    /// Normal index sets of all proper nonzero faces, by increasing codimension.
    pub faces: Vec<Vec<usize>>,
}

impl ConeVerdict {
    pub fn is_good(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn first_failure(&self) -> Option<&ConeFailure> {
        self.failures.first()
    }
}

/// Check Def. of a good cone: primitive normals, each defining a facet,
/// strict convexity, and the lattice-basis condition on every face.
pub fn check_good_cone(normals: &[IntVector]) -> ConeVerdict {
    let mut verdict = ConeVerdict { failures: Vec::new(), rays: Vec::new(), facet_witnesses: Vec::new(), faces: Vec::new() };
    let dim = normals.first().map_or(0, Vec::len);
    if dim < 2 || normals.len() < dim {
        verdict.failures.push(ConeFailure::TooFewNormals { found: normals.len(), needed: dim.max(2) });
        return verdict;
    }
    for (index, v) in normals.iter().enumerate() {
        if v.len() != dim {
            verdict.failures.push(ConeFailure::WrongLength { index, len: v.len(), dim });
        }
    }
    if !verdict.failures.is_empty() {
        return verdict;
    }
    for (index, v) in normals.iter().enumerate() {
        if !is_primitive(v) {
            verdict.failures.push(ConeFailure::NotPrimitive { index, normal: v.clone() });
        }
    }
    let rank = rank_of_rows(normals);
    if rank < dim {
        verdict.failures.push(ConeFailure::NotStrictlyConvex { rank });
        return verdict;
    }

    let n = dim - 1;
    let mut rays: Vec<IntVector> = (0..normals.len())
        .combinations(n)
        .par_bridge()
        .filter_map(|subset| {
            let rows: Vec<IntVector> = subset.iter().map(|&i| normals[i].clone()).collect();
            let w = cross_product(&rows);
            if w.iter().all(Zero::is_zero) {
                return None;
            }
            let values: Vec<BigInt> = normals.iter().map(|v| dot(&w, v)).collect();
            if values.iter().all(|x| !x.is_negative()) {
                Some(primitive_part(&w))
            } else if values.iter().all(|x| !x.is_positive()) {
                Some(primitive_part(&w.iter().map(|x| -x).collect::<Vec<_>>()))
            } else {
                None
            }
        })
        .collect();
    rays.sort();
    rays.dedup();
    if rays.is_empty() || rank_of_rows(&rays) < dim {
        verdict.failures.push(ConeFailure::NotFullDimensional);
        return verdict;
    }
    verdict.rays = rays
        .iter()
        .map(|r| Ray {
            generator: r.clone(),
            tight: (0..normals.len()).filter(|&j| dot(r, &normals[j]).is_zero()).collect(),
        })
        .collect();

    // Faces are intersections of ray tight sets; the apex is excluded.
    let mut faces: BTreeSet<Vec<usize>> = verdict.rays.iter().map(|r| r.tight.clone()).collect();
    loop {
        let mut fresh = Vec::new();
        for (a, b) in faces.iter().tuple_combinations() {
            let meet: Vec<usize> = a.iter().filter(|x| b.contains(x)).copied().collect();
            if !meet.is_empty() && !faces.contains(&meet) {
                fresh.push(meet);
            }
        }
        if fresh.is_empty() {
            break;
        }
        faces.extend(fresh);
    }
    let mut faces: Vec<(usize, Vec<usize>)> = faces
        .into_iter()
        .map(|set| (rank_of_rows(&set.iter().map(|&j| normals[j].clone()).collect::<Vec<_>>()), set))
        .filter(|(codim, _)| *codim <= n)
        .collect();
    faces.sort();

    for j in 0..normals.len() {
        let on: Vec<&Ray> = verdict.rays.iter().filter(|r| r.tight.contains(&j)).collect();
        let span = rank_of_rows(&on.iter().map(|r| r.generator.clone()).collect::<Vec<_>>());
        if span < n {
            verdict.failures.push(ConeFailure::Redundant { index: j });
            verdict.facet_witnesses.push(None);
            continue;
        }
        let witness: IntVector = (0..dim).map(|i| on.iter().map(|r| r.generator[i].clone()).sum()).collect();
        let strict = (0..normals.len()).all(|k| k == j || dot(&witness, &normals[k]).is_positive());
        verdict.facet_witnesses.push(strict.then_some(witness));
    }

    for (codim, set) in &faces {
        if set.len() != *codim {
            verdict.failures.push(ConeFailure::FaceNotSimplicial { normals: set.clone(), codim: *codim });
            continue;
        }
        let m = IntMatrix::from_rows(&set.iter().map(|&j| normals[j].clone()).collect::<Vec<_>>())
            .expect("uniform lengths");
        let g = gcd_maximal_minors(&m).expect("rows at most columns");
        if !g.is_one() {
            verdict.failures.push(ConeFailure::FaceNotUnimodular { normals: set.clone(), gcd: g });
        }
    }
    verdict.faces = faces.into_iter().map(|(_, s)| s).collect();
    verdict
}

/// Integral covector taking the value 1 on every normal, if one exists.
pub fn gorenstein_certificate(normals: &[IntVector]) -> Option<IntVector> {
    let a = IntMatrix::from_rows(normals).ok()?;
    let ones = vec![BigInt::one(); normals.len()];
    solve_integer_system(&a, &ones).ok().flatten()
}

impl MomentCone {
    /// Build a cone from its normals, requiring goodness.
    pub fn from_normals(normals: Vec<IntVector>) -> Result<Self> {
        let verdict = check_good_cone(&normals);
        if !verdict.is_good() {
            return Err(Error::NotGood(verdict.failures));
        }
        let n = normals[0].len() - 1;
        let mut edges: Vec<Vec<usize>> =
            verdict.faces.iter().filter(|s| s.len() == n).cloned().collect();
        edges.sort();
        let mut rays: Vec<(Vec<usize>, IntVector)> =
            verdict.rays.into_iter().map(|r| (r.tight, r.generator)).collect();
        rays.sort();
        let certificate = gorenstein_certificate(&normals);
        Ok(MomentCone { normals, edges, rays: rays.into_iter().map(|(_, g)| g).collect(), certificate })
    }

    /// Dimension `n + 1` of the ambient lattice.
    pub fn dim(&self) -> usize {
        self.normals[0].len()
    }

    pub fn normals(&self) -> &[IntVector] {
        &self.normals
    }

    /// Edges as sorted index sets of the `n` normals vanishing on them.
    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> Result<&[usize]> {
        self.edges.get(id).map(Vec::as_slice).ok_or(Error::NoSuchEdge(id))
    }

    /// Primitive generators of the edges, in edge order.
    pub fn rays(&self) -> &[IntVector] {
        &self.rays
    }

    pub fn certificate(&self) -> Option<&IntVector> {
        self.certificate.as_ref()
    }

    pub fn is_gorenstein(&self) -> bool {
        self.certificate.is_some()
    }

    /// Normal matrix with the normals as columns.
    pub fn normal_matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(&self.normals).expect("uniform lengths")
    }

    pub fn edge_normals(&self, id: usize) -> Result<Vec<IntVector>> {
        Ok(self.edge(id)?.iter().map(|&j| self.normals[j].clone()).collect())
    }
}

/// The moment cone of a validated diagram: normals `(v_j, 1)`, one edge per
/// facet (same order), certificate reading the last coordinate.
pub fn moment_cone(diagram: &ToricDiagram) -> MomentCone {
    let n = diagram.dim;
    let normals: Vec<IntVector> = diagram.vertices.iter().map(|v| lift(v, BigInt::one())).collect();
    let edges: Vec<Vec<usize>> = diagram.facets.iter().map(|f| f.vertices.clone()).collect();
    let rays: Vec<IntVector> = diagram
        .facets
        .iter()
        .map(|f| lift(&f.normal, -f.offset.clone()))
        .collect();
    let mut certificate = vec![BigInt::zero(); n + 1];
    certificate[n] = BigInt::one();
    MomentCone { normals, edges, rays, certificate: Some(certificate) }
}

/// Map normals by `U` and the certificate contravariantly; edges keep their
/// ids.
pub fn apply_lattice_transform(cone: &MomentCone, u: &IntMatrix) -> Result<MomentCone> {
    let u_inv = u.inverse_unimodular()?;
    if u.rows() != cone.dim() {
        return Err(Error::Dimension(format!("transform is {}x{}, cone lives in Z^{}", u.rows(), u.cols(), cone.dim())));
    }
    let normals = cone.normals.iter().map(|v| u.mul_vector(v)).collect::<Result<Vec<_>>>()?;
    let rays = cone.rays.iter().map(|r| u_inv.transpose().mul_vector(r)).collect::<Result<Vec<_>>>()?;
    let certificate = match &cone.certificate {
        Some(c) => Some(u_inv.transpose().mul_vector(c)?),
        None => None,
    };
    Ok(MomentCone { normals, edges: cone.edges.clone(), rays, certificate })
}

fn check_lens_gcds(p: u64, alphas: &[i64]) -> Result<i64> {
    let alpha0 = alphas.iter().sum::<i64>() - 1;
    let pp = p as i64;
    for (j, &a) in alphas.iter().enumerate() {
        if a.gcd(&pp) != 1 {
            return Err(Error::GcdViolation { index: j + 1, value: a, p });
        }
    }
    if alpha0.gcd(&pp) != 1 {
        return Err(Error::GcdViolation { index: 0, value: alpha0, p });
    }
    Ok(alpha0)
}

fn lens_normals(n: usize, p: u64, alphas: &[i64]) -> Vec<IntVector> {
    let e = |i: usize| {
        let mut v = vec![BigInt::zero(); n + 1];
        v[i] = BigInt::one();
        v
    };
    let mut normals = vec![e(n)];
    for j in 0..n - 1 {
        let mut v = e(j);
        v[n] = BigInt::one();
        normals.push(v);
    }
    let mut last = int_vector(alphas);
    last.push(BigInt::from(p));
    last.push(BigInt::one());
    normals.push(last);
    normals
}

/// The lens cone with normals `ν₀ = e_{n+1}`, `ν_j = e_j + e_{n+1}` and
/// `ν_n = (α₁, …, α_{n−1}, p, 1)`, kept in that order. Edge `j` in the
/// resulting cone is the one missing `ν_{n-j}`; use [`lens_edge`] to look up
/// the edge opposite a given normal.
pub fn build_lens_cone(n: usize, p: u64, alphas: &[i64]) -> Result<MomentCone> {
    validate_lens_params(n, p, alphas)?;
    MomentCone::from_normals(lens_normals(n, p, alphas))
}

fn validate_lens_params(n: usize, p: u64, alphas: &[i64]) -> Result<()> {
    if n == 0 || p == 0 {
        return Err(Error::InvalidInput("lens data needs n >= 1 and p >= 1".into()));
    }
    if alphas.len() != n - 1 {
        return Err(Error::InvalidInput(format!("expected {} alphas, got {}", n - 1, alphas.len())));
    }
    check_lens_gcds(p, alphas).map(|_| ())
}

/// Id of the edge of a lens cone that misses normal `ν_j`.
pub fn lens_edge(cone: &MomentCone, j: usize) -> Result<usize> {
    cone.edges
        .iter()
        .position(|e| !e.contains(&j))
        .ok_or(Error::NoSuchEdge(j))
}

/// The lens diagram `conv(0, e₁, …, e_{n−1}, (ᾱ, p))` in ℤⁿ, whose moment
/// cone has the lens normals (in lexicographic vertex order).
pub fn lens_diagram(n: usize, p: u64, alphas: &[i64]) -> Result<ToricDiagram> {
    validate_lens_params(n, p, alphas)?;
    let points: Vec<IntVector> = lens_normals(n, p, alphas).into_iter().map(|mut v| {
        v.pop();
        v
    }).collect();
    validate_toric_diagram(&points)
}

/// `conv((0,0), (1,0), (q,p), (q+1,p))`.
pub fn build_cosphere_diagram(p: u64, q: u64) -> Result<ToricDiagram> {
    if p == 0 || p.gcd(&q) != 1 {
        return Err(Error::NotCoprime { p, q });
    }
    let (p, q) = (p as i64, q as i64);
    validate_toric_diagram(&[
        int_vector(&[0, 0]),
        int_vector(&[1, 0]),
        int_vector(&[q, p]),
        int_vector(&[q + 1, p]),
    ])
}

/// Cone over a Delzant polytope `{⟨v_j, x⟩ ≥ −λ_j}` with normals
/// `(v_j, λ_j)`. When every `λ_j = 1` the polytope's dual diagram
/// `conv(v_j)` is returned as well.
pub fn build_prequantization_cone(
    normals: &[IntVector],
    offsets: &[BigInt],
) -> Result<(MomentCone, Option<ToricDiagram>)> {
    if normals.len() != offsets.len() {
        return Err(Error::InvalidInput("one offset per normal".into()));
    }
    let lifted: Vec<IntVector> =
        normals.iter().zip(offsets).map(|(v, l)| lift(v, l.clone())).collect();
    let cone = MomentCone::from_normals(lifted)?;
    let diagram = if offsets.iter().all(One::is_one) {
        Some(validate_toric_diagram(normals)?)
    } else {
        None
    };
    Ok((cone, diagram))
}

/// `|det|`-gcd of all full-size simplices of a diagram, i.e. the gcd of
/// normalized volumes. Equals the π₁ order of the associated cone.
pub fn simplex_volume_gcd(diagram: &ToricDiagram) -> BigInt {
    let lifted: Vec<IntVector> = diagram.vertices.iter().map(|v| lift(v, BigInt::one())).collect();
    lifted
        .iter()
        .combinations(diagram.dim + 1)
        .map(|s| {
            let cols: Vec<IntVector> = s.into_iter().cloned().collect();
            IntMatrix::from_columns(&cols).expect("square").det().expect("square").abs()
        })
        .fold(BigInt::zero(), |g, d| g.gcd(&d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pts(v: &[&[i64]]) -> Vec<IntVector> {
        v.iter().map(|x| int_vector(x)).collect()
    }

    #[test]
    fn cosphere_diagram_facets() {
        let d = build_cosphere_diagram(5, 2).unwrap();
        assert_eq!(d.vertices(), pts(&[&[0, 0], &[1, 0], &[2, 5], &[3, 5]]).as_slice());
        let sets: Vec<Vec<usize>> = d.facets().iter().map(|f| f.vertices.clone()).collect();
        assert_eq!(sets, vec![vec![0, 1], vec![0, 2], vec![1, 3], vec![2, 3]]);
        for f in d.facets() {
            for (i, v) in d.vertices().iter().enumerate() {
                let val = dot(&f.normal, v);
                assert!(val >= f.offset);
                assert_eq!(val == f.offset, f.vertices.contains(&i));
            }
        }
    }

    #[test]
    fn non_unimodular_triangle_is_rejected() {
        let err = validate_toric_diagram(&pts(&[&[0, 0], &[2, 0], &[0, 1]])).unwrap_err();
        match err {
            Error::InvalidDiagram(d) => assert!(d.iter().any(|x| matches!(
                x,
                Diagnostic::FacetNotUnimodular { gcd, .. } if *gcd == BigInt::from(2)
            ))),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn cube_is_not_simplicial() {
        let cube: Vec<IntVector> = (0..8)
            .map(|m| int_vector(&[m & 1, (m >> 1) & 1, (m >> 2) & 1]))
            .collect();
        let err = validate_toric_diagram(&cube).unwrap_err();
        match err {
            Error::InvalidDiagram(d) => {
                assert_eq!(d.iter().filter(|x| matches!(x, Diagnostic::NotSimplicial { .. })).count(), 6)
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn interior_points_are_discarded() {
        let d = validate_toric_diagram(&pts(&[&[0, 0], &[1, 0], &[0, 1], &[-1, -1], &[0, 0]])).unwrap();
        assert_eq!(d.vertices().len(), 3);
        assert_eq!(d.discarded(), pts(&[&[0, 0]]).as_slice());
        let flat = validate_toric_diagram(&pts(&[&[0, 0], &[1, 1], &[2, 2]]));
        assert!(matches!(flat, Err(Error::InvalidDiagram(_))));
    }

    #[test]
    fn one_dimensional_diagram() {
        let d = validate_toric_diagram(&pts(&[&[0], &[1]])).unwrap();
        assert_eq!(d.facets().len(), 2);
        let c = moment_cone(&d);
        assert!(check_good_cone(c.normals()).is_good());
    }

    #[test]
    fn moment_cone_of_simplex_and_parallelogram() {
        let simplex = validate_toric_diagram(&pts(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap();
        let c = moment_cone(&simplex);
        assert_eq!(c.normals().len(), 4);
        assert_eq!(c.edges().len(), 4);
        let par = moment_cone(&build_cosphere_diagram(5, 2).unwrap());
        let expected: BTreeSet<IntVector> =
            pts(&[&[3, 5, 1], &[0, 0, 1], &[1, 0, 1], &[2, 5, 1]]).into_iter().collect();
        assert_eq!(par.normals().iter().cloned().collect::<BTreeSet<_>>(), expected);
        assert_eq!(par.certificate(), Some(&int_vector(&[0, 0, 1])));
    }

    #[test]
    fn moment_cone_matches_recomputed_cone() {
        for diagram in [
            build_cosphere_diagram(7, 3).unwrap(),
            lens_diagram(3, 5, &[-1, -1]).unwrap(),
            validate_toric_diagram(&pts(&[&[0, 0], &[1, 0], &[0, 1], &[-1, -1]])).unwrap(),
        ] {
            let fast = moment_cone(&diagram);
            let slow = MomentCone::from_normals(fast.normals().to_vec()).unwrap();
            assert_eq!(fast.edges(), slow.edges());
            assert_eq!(fast.rays(), slow.rays());
        }
    }

    #[test]
    fn lens_cones() {
        let c = build_lens_cone(3, 5, &[-1, -1]).unwrap();
        assert_eq!(c.normals()[3], int_vector(&[-1, -1, 5, 1]));
        assert_eq!(c.edges().len(), 4);
        assert!(c.is_gorenstein());
        assert!(build_lens_cone(2, 1, &[1]).is_ok());
        assert!(build_lens_cone(6, 5, &[1, 1, 1, 2, 2]).is_ok());
        assert!(matches!(
            build_lens_cone(3, 6, &[2, 1]),
            Err(Error::GcdViolation { index: 1, value: 2, p: 6 })
        ));
        // α₀ = 1 + 1 - 1 = 1 is fine; α = (2, 4) mod 5 gives α₀ = 5.
        assert!(matches!(build_lens_cone(3, 5, &[2, 4]), Err(Error::GcdViolation { index: 0, .. })));
    }

    #[test]
    fn non_coprime_lens_normals_fail_goodness() {
        let verdict = check_good_cone(&lens_normals(3, 6, &[2, 1]));
        assert!(!verdict.is_good());
        assert!(verdict
            .failures
            .iter()
            .any(|f| matches!(f, ConeFailure::FaceNotUnimodular { .. })));
    }

    #[test]
    fn orthant_is_good() {
        let e: Vec<IntVector> = (0..4)
            .map(|i| (0..4).map(|j| BigInt::from((i == j) as i64)).collect())
            .collect();
        let v = check_good_cone(&e);
        assert!(v.is_good());
        assert!(v.facet_witnesses.iter().all(Option::is_some));
    }

    #[test]
    fn cone_failures() {
        let redundant = pts(&[&[1, 0], &[0, 1], &[1, 1]]);
        assert!(check_good_cone(&redundant)
            .failures
            .contains(&ConeFailure::Redundant { index: 2 }));
        let not_prim = pts(&[&[2, 0], &[0, 1]]);
        assert!(matches!(check_good_cone(&not_prim).first_failure(), Some(ConeFailure::NotPrimitive { index: 0, .. })));
        let line = pts(&[&[1, 0, 0], &[-1, 0, 0], &[0, 1, 0]]);
        assert!(matches!(check_good_cone(&line).first_failure(), Some(ConeFailure::NotStrictlyConvex { rank: 2 })));
        let empty = pts(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]);
        assert!(matches!(check_good_cone(&empty).first_failure(), Some(ConeFailure::NotFullDimensional)));
    }

    #[test]
    fn gorenstein_certificates() {
        let preq = pts(&[&[1, 0, 0], &[-1, 0, 1], &[0, -1, 1], &[0, 1, 0]]);
        let c = gorenstein_certificate(&preq).unwrap();
        assert!(preq.iter().all(|v| dot(&c, v).is_one()));
        assert_eq!(gorenstein_certificate(&pts(&[&[1, 0], &[0, 1], &[-1, -2]])), None);
        let par = moment_cone(&build_cosphere_diagram(3, 1).unwrap());
        assert_eq!(gorenstein_certificate(par.normals()), Some(int_vector(&[0, 0, 1])));
    }

    #[test]
    fn unit_square_transform() {
        let square = validate_toric_diagram(&pts(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]])).unwrap();
        let cone = moment_cone(&square);
        let u = IntMatrix::from_i64_rows(&[&[1, 1, -1], &[-1, 1, 0], &[0, -1, 1]]).unwrap();
        let t = apply_lattice_transform(&cone, &u).unwrap();
        let got: BTreeSet<IntVector> = t.normals().iter().cloned().collect();
        let want: BTreeSet<IntVector> =
            pts(&[&[1, 0, 0], &[-1, 0, 1], &[0, -1, 1], &[0, 1, 0]]).into_iter().collect();
        assert_eq!(got, want);
        // (1,1,1) ↦ (1,0,0) comes first.
        assert_eq!(u.mul_vector(&int_vector(&[1, 1, 1])).unwrap(), int_vector(&[1, 0, 0]));
        let c = t.certificate().unwrap();
        assert!(t.normals().iter().all(|v| dot(c, v).is_one()));
        let back = apply_lattice_transform(&t, &u.inverse_unimodular().unwrap()).unwrap();
        assert_eq!(back, cone);
        let same = apply_lattice_transform(&cone, &IntMatrix::identity(3)).unwrap();
        assert_eq!(same, cone);
        let bad = IntMatrix::from_i64_rows(&[&[2, 0, 0], &[0, 1, 0], &[0, 0, 1]]).unwrap();
        assert!(matches!(apply_lattice_transform(&cone, &bad), Err(Error::NotUnimodular { .. })));
    }

    #[test]
    fn transformed_rays_stay_orthogonal() {
        let cone = moment_cone(&build_cosphere_diagram(5, 2).unwrap());
        let u = IntMatrix::from_i64_rows(&[&[1, 1, -1], &[-1, 1, 0], &[0, -1, 1]]).unwrap();
        let t = apply_lattice_transform(&cone, &u).unwrap();
        for (e, r) in t.edges().iter().zip(t.rays()) {
            for j in 0..t.normals().len() {
                assert_eq!(dot(r, &t.normals()[j]).is_zero(), e.contains(&j));
            }
        }
    }

    #[test]
    fn prequantization_cones() {
        let square = pts(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]);
        let (cone, diagram) = build_prequantization_cone(&square, &vec![BigInt::one(); 4]).unwrap();
        assert_eq!(cone.certificate(), Some(&int_vector(&[0, 0, 1])));
        assert_eq!(diagram.unwrap().facets().len(), 4);

        // Square [0,1]²: {x ≥ 0, y ≥ 0, -x ≥ -1, -y ≥ -1}.
        let (cone, diagram) = build_prequantization_cone(
            &pts(&[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]]),
            &int_vector(&[0, 0, 1, 1]),
        )
        .unwrap();
        assert!(diagram.is_none());
        let mut got: Vec<IntVector> = cone.normals().to_vec();
        got.sort();
        let mut want = pts(&[&[1, 0, 0], &[0, 1, 0], &[-1, 0, 1], &[0, -1, 1]]);
        want.sort();
        assert_eq!(got, want);
        assert!(cone.is_gorenstein());
    }

    #[test]
    fn cpn_prequantization_is_a_lens_cone() {
        // ℂPⁿ with λ = 1 has normals e₁..e_n, −(e₁+…+e_n); its cone and the
        // lens cone of L_{n+1}(1,…,1) have the same lattice invariants.
        for n in 1..=4usize {
            let mut normals: Vec<IntVector> = (0..n)
                .map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect())
                .collect();
            normals.push(vec![BigInt::from(-1); n]);
            let (cone, diagram) = build_prequantization_cone(&normals, &vec![BigInt::one(); n + 1]).unwrap();
            let diagram = diagram.unwrap();
            let lens = build_lens_cone(n, (n + 1) as u64, &vec![-1; n - 1]).unwrap();
            let a = crate::lattice::smith_normal_form(&cone.normal_matrix()).invariant_factors();
            let b = crate::lattice::smith_normal_form(&lens.normal_matrix()).invariant_factors();
            assert_eq!(a, b);
            assert_eq!(simplex_volume_gcd(&diagram), BigInt::from(n + 1));
            assert_eq!(cone.edges().len(), lens.edges().len());
        }
    }

    #[test]
    fn parallelogram_area_gcd() {
        for (p, q) in [(1u64, 1u64), (2, 1), (5, 2), (7, 3)] {
            let d = build_cosphere_diagram(p, q).unwrap();
            let c = moment_cone(&d);
            assert_eq!(gcd_maximal_minors(&c.normal_matrix()).unwrap(), BigInt::from(p));
            assert_eq!(simplex_volume_gcd(&d), BigInt::from(p));
        }
        assert!(matches!(build_cosphere_diagram(4, 2), Err(Error::NotCoprime { .. })));
    }

    fn random_diagram_points() -> impl Strategy<Value = Vec<IntVector>> {
        proptest::collection::vec((-3i64..=3, -3i64..=3), 3..8)
            .prop_map(|v| v.into_iter().map(|(a, b)| int_vector(&[a, b])).collect())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn valid_diagrams_give_good_gorenstein_cones(points in random_diagram_points()) {
            if let Ok(d) = validate_toric_diagram(&points) {
                let c = moment_cone(&d);
                let v = check_good_cone(c.normals());
                prop_assert!(v.is_good(), "{:?}", v.failures);
                prop_assert!(c.is_gorenstein());
                prop_assert_eq!(d.facets().len(), c.edges().len());
            }
        }

        #[test]
        fn transforms_preserve_goodness_and_order(
            points in random_diagram_points(),
            k in -3i64..=3, l in -3i64..=3,
        ) {
            if let Ok(d) = validate_toric_diagram(&points) {
                let c = moment_cone(&d);
                let u = IntMatrix::from_i64_rows(&[&[1, k, 0], &[0, 1, 0], &[l, k * l, 1]]).unwrap();
                let t = apply_lattice_transform(&c, &u).unwrap();
                prop_assert!(check_good_cone(t.normals()).is_good());
                prop_assert_eq!(
                    gcd_maximal_minors(&t.normal_matrix()).unwrap(),
                    gcd_maximal_minors(&c.normal_matrix()).unwrap()
                );
                let r = MomentCone::from_normals(t.normals().to_vec()).unwrap();
                prop_assert_eq!(r.edges(), t.edges());
            }
        }
    }
}
