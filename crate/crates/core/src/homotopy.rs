//! Fundamental group of a good toric symplectic cone.
//!
//! `π₁ ≅ ℤ^{n+1} / span(ν_j)` is cyclic of order `N`. Every edge `E_ℓ`
//! carries a generator `η_ℓ` completing its normals to a lattice basis, and
//! its class is a unit multiple of the class of any other edge generator.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactfield::Sign;
use crate::lattice::{
    complete_to_lattice_basis, dot, gcd_maximal_minors, smith_normal_form, IntMatrix, IntVector,
    SmithForm,
};
use crate::toric::MomentCone;

/// π₁ data of a cone, with classes written relative to the generator of the
/// reference edge (edge 0).
#[derive(Clone, Debug)]
pub struct Pi1Info {
    pub order: u64,
    pub reference: usize,
    /// `η_ℓ` for every edge, normalized to height 1 when a Gorenstein
    /// certificate is present.
    pub generators: Vec<IntVector>,
    /// `c_ℓ` with `[η_ℓ] = c_ℓ · [η_ref]` in `ℤ_N`.
    pub classes: Vec<u64>,
    pub invariant_factors: Vec<BigInt>,
}

fn order_u64(n: &BigInt) -> Result<u64> {
    n.to_u64().ok_or_else(|| Error::Overflow(format!("fundamental group order {n}")))
}

pub(crate) fn mod_n(x: &BigInt, n: u64) -> u64 {
    x.mod_floor(&BigInt::from(n)).to_u64().expect("residue fits")
}

/// Inverse of `a` modulo `n` (0 when `n = 1`).
pub fn inverse_mod(a: u64, n: u64) -> Option<u64> {
    if n == 1 {
        return Some(0);
    }
    let e = (a as i128).extended_gcd(&(n as i128));
    (e.gcd == 1).then(|| e.x.rem_euclid(n as i128) as u64)
}

/// `N` = gcd of the maximal minors of the normal matrix, after checking
/// that the other invariant factors are 1.
pub fn pi1_order(cone: &MomentCone) -> Result<u64> {
    let a = cone.normal_matrix();
    let n_minors = gcd_maximal_minors(&a)?;
    let snf = smith_normal_form(&a);
    check_cyclic(&snf)?;
    let last = snf.invariant_factors().last().cloned().unwrap_or_else(BigInt::one);
    assert_eq!(last, n_minors, "minor gcd and Smith form disagree");
    order_u64(&n_minors)
}

fn check_cyclic(snf: &SmithForm) -> Result<()> {
    let factors = snf.invariant_factors();
    let d_n: BigInt = factors[..factors.len() - 1].iter().product();
    if !d_n.is_one() {
        return Err(Error::NotCyclic { d_n: d_n.to_string() });
    }
    Ok(())
}

/// `η_ℓ`: the canonical completion of the edge normals, shifted by a
/// multiple of the first edge normal so that `ν*(η_ℓ) = 1`.
pub fn edge_generator(cone: &MomentCone, edge: usize) -> Result<IntVector> {
    let normals = cone.edge_normals(edge)?;
    let mut eta = complete_to_lattice_basis(&normals)?;
    if let Some(cert) = cone.certificate() {
        let shift = BigInt::one() - dot(cert, &eta);
        if !shift.is_zero() {
            for (e, v) in eta.iter_mut().zip(&normals[0]) {
                *e += &shift * v;
            }
        }
    }
    Ok(eta)
}

/// Basis matrix with columns `ν_{ℓ₁}, …, ν_{ℓ_n}, η_ℓ`.
fn edge_basis(cone: &MomentCone, edge: usize, eta: &IntVector) -> Result<IntMatrix> {
    let mut cols = cone.edge_normals(edge)?;
    cols.push(eta.clone());
    IntMatrix::from_columns(&cols)
}

impl Pi1Info {
    pub fn new(cone: &MomentCone) -> Result<Self> {
        let a = cone.normal_matrix();
        let snf = smith_normal_form(&a);
        check_cyclic(&snf)?;
        let factors = snf.invariant_factors();
        let order = order_u64(factors.last().expect("nonempty"))?;
        debug_assert_eq!(BigInt::from(order), gcd_maximal_minors(&a)?);
        let generators = (0..cone.edges().len())
            .map(|e| edge_generator(cone, e))
            .collect::<Result<Vec<_>>>()?;
        // φ(x) = last coordinate of U⁻¹x mod N is an isomorphism onto ℤ_N.
        let phi = |x: &IntVector| -> u64 {
            let y = snf.u_inv.mul_vector(x).expect("dimensions");
            mod_n(y.last().expect("nonempty"), order)
        };
        let images: Vec<u64> = generators.iter().map(phi).collect();
        let reference = 0;
        let ref_inv = inverse_mod(images[reference], order).expect("edge generators generate π₁");
        let classes = images
            .iter()
            .map(|&x| ((x as u128 * ref_inv as u128) % order as u128) as u64)
            .collect();
        Ok(Pi1Info { order, reference, generators, classes, invariant_factors: factors })
    }

    /// Class in `ℤ_N` of the simple orbit on `edge` given the sign of its `b`
    /// coefficient: `sgn(b_ℓ) · c_ℓ`.
    pub fn orbit_class(&self, edge: usize, sign: Sign) -> u64 {
        let c = self.classes[edge];
        match sign {
            Sign::Negative => (self.order - c) % self.order,
            _ => c,
        }
    }

    /// Class of the `N`-th iterate.
    pub fn iterate_class(&self, edge: usize, sign: Sign, multiplicity: u64) -> u64 {
        ((self.orbit_class(edge, sign) as u128 * multiplicity as u128) % self.order as u128) as u64
    }
}

/// Order of an element of `ℤ_N`.
pub fn class_order(class: u64, n: u64) -> u64 {
    n / class.gcd(&n)
}

/// `c ∈ (ℤ_N)*` with `[η_k] = c · [η_ℓ]`, from the integral change of basis
/// `η_ℓ = Σ b_j ν_{k_j} + b η_k`, so that `c = b⁻¹ mod N`.
pub fn relate_edges(cone: &MomentCone, edge_l: usize, edge_k: usize) -> Result<u64> {
    let order = pi1_order(cone)?;
    let eta_l = edge_generator(cone, edge_l)?;
    let eta_k = edge_generator(cone, edge_k)?;
    let basis_k = edge_basis(cone, edge_k, &eta_k)?;
    let coords = basis_k.inverse_unimodular()?.mul_vector(&eta_l)?;
    let b = mod_n(coords.last().expect("nonempty"), order);
    Ok(inverse_mod(b, order).expect("b is a unit mod N"))
}

/// The shortcut `c ≡ ±det(a_ij) mod N`, where `ν_{ℓ_i} ≡ Σ a_ij ν_{k_j}`
/// modulo `η_k`. Returns `det(a_ij) mod N`; the true `c` is this or its
/// negative.
pub fn relate_edges_by_minors(cone: &MomentCone, edge_l: usize, edge_k: usize) -> Result<u64> {
    let order = pi1_order(cone)?;
    let eta_k = edge_generator(cone, edge_k)?;
    let inv = edge_basis(cone, edge_k, &eta_k)?.inverse_unimodular()?;
    let rows: Vec<IntVector> = cone
        .edge_normals(edge_l)?
        .iter()
        .map(|v| {
            let mut c = inv.mul_vector(v)?;
            c.pop();
            Ok(c)
        })
        .collect::<Result<_>>()?;
    if rows.is_empty() {
        return Ok(1 % order);
    }
    Ok(mod_n(&IntMatrix::from_rows(&rows)?.det()?, order))
}

/// Is `x` a unit modulo `n`?
pub fn is_unit_mod(x: u64, n: u64) -> bool {
    n == 1 || x.gcd(&n) == 1
}
