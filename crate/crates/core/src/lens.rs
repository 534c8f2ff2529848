//! Gorenstein lens spaces `L^{2n+1}_p(ℓ₀, …, ℓ_n)`.
//!
//! Closed-form degree functions, contact Betti number sequences, per-class
//! data, contact symmetry sets, the Reidemeister Δ criterion, and pairwise
//! comparison of two weight vectors.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::homotopy::inverse_mod;

fn residue(x: i128, p: u64) -> u64 {
    x.rem_euclid(p as i128) as u64
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    let mut b = base % p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

/// Units of `ℤ_p`, as representatives in `1..p` (`{1}` for `p ≤ 2`).
pub fn units(p: u64) -> Vec<u64> {
    if p <= 2 {
        return vec![1];
    }
    (1..p).filter(|k| k.gcd(&p) == 1).collect()
}

fn check_units(p: u64, weights: &[i64]) -> Result<()> {
    if p == 0 {
        return Err(Error::InvalidInput("p must be positive".into()));
    }
    for (index, &w) in weights.iter().enumerate() {
        if residue(w as i128, p).gcd(&p) != 1 && p != 1 {
            return Err(Error::NonUnitWeight { index, value: w, p });
        }
    }
    Ok(())
}

/// `L_p(α₀, −α₁, …, −α_{n−1}, 1)` with `α_j ∈ {1, …, p−1}`,
/// `α₀ = Σ α_j − 1` and `a_n ≡ α₀⁻¹ (mod p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LensNormalForm {
    pub n: usize,
    pub p: u64,
    pub alphas: Vec<i64>,
    pub alpha0: i64,
    pub a_n: u64,
    /// The weights this form was built from.
    pub weights: Vec<i64>,
    /// Unit `u` with `u · ℓ_n ≡ 1`.
    pub unit: u64,
}

/// Normalize unit weights `ℓ₀, …, ℓ_n` with `Σ ℓ_j ≡ 0 (mod p)`.
pub fn lens_normal_form(p: u64, weights: &[i64]) -> Result<LensNormalForm> {
    if weights.len() < 2 {
        return Err(Error::InvalidInput("a lens space needs at least two weights".into()));
    }
    check_units(p, weights)?;
    let sum: i128 = weights.iter().map(|&w| w as i128).sum();
    if residue(sum, p) != 0 {
        return Err(Error::NonGorensteinWeights { sum: sum as i64, p });
    }
    let n = weights.len() - 1;
    if p == 1 {
        let form = LensNormalForm { n, p, alphas: vec![0; n - 1], alpha0: -1, a_n: 0, weights: weights.to_vec(), unit: 0 };
        form.check_properties();
        return Ok(form);
    }
    let unit = inverse_mod(residue(weights[n] as i128, p), p).expect("unit weight");
    let alphas: Vec<i64> = weights[1..n]
        .iter()
        .map(|&l| residue(-(unit as i128) * l as i128, p) as i64)
        .collect();
    let alpha0 = alphas.iter().sum::<i64>() - 1;
    assert_eq!(
        residue(alpha0 as i128, p),
        residue(unit as i128 * weights[0] as i128, p),
        "α₀ ≡ u·ℓ₀ is forced by the Gorenstein condition"
    );
    let a_n = inverse_mod(residue(alpha0 as i128, p), p).expect("α₀ is a unit");
    let form = LensNormalForm { n, p, alphas, alpha0, a_n, weights: weights.to_vec(), unit };
    form.check_properties();
    Ok(form)
}

/// Normal form of the lens space with cone data `(n, p, ᾱ)`, i.e. weights
/// `(α₀, −α₁, …, −α_{n−1}, 1)`.
pub fn normal_form_from_alphas(n: usize, p: u64, alphas: &[i64]) -> Result<LensNormalForm> {
    if n == 0 || alphas.len() != n - 1 {
        return Err(Error::InvalidInput(format!("expected n >= 1 and n - 1 alphas, got n = {n} and {}", alphas.len())));
    }
    let alpha0 = alphas.iter().sum::<i64>() - 1;
    let mut weights = vec![alpha0];
    weights.extend(alphas.iter().map(|a| -a));
    weights.push(1);
    for (j, &a) in std::iter::once(&alpha0).chain(alphas).enumerate() {
        if residue(a as i128, p).gcd(&p) != 1 && p != 1 {
            return Err(Error::GcdViolation { index: j, value: a, p });
        }
    }
    lens_normal_form(p, &weights)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DegreeVariant {
    /// `g(N)`, the SFT degree of `γ₀^N`.
    Full,
    /// `g̃`, the `p`-periodic extension of `g` on `{1, …, p}`.
    Periodic,
}

impl LensNormalForm {
    /// `g(N) = (2/p)(N + (n−1)p − Σ_j ((N α_j a_n) mod p) − ((−N a_n) mod p))`.
    pub fn g(&self, big_n: u64) -> i64 {
        let p = self.p as i128;
        let nn = big_n as i128;
        let a_n = self.a_n as i128;
        let mut total = nn + (self.n as i128 - 1) * p;
        for &a in &self.alphas {
            total -= (nn * a as i128 * a_n).rem_euclid(p);
        }
        total -= (-nn * a_n).rem_euclid(p);
        assert!(total.rem_euclid(p) == 0, "degree numerator must be divisible by p");
        (2 * total / p) as i64
    }

    pub fn g_periodic(&self, big_n: u64) -> i64 {
        let r = big_n % self.p;
        self.g(if r == 0 { self.p } else { r })
    }

    pub fn degree(&self, big_n: u64, variant: DegreeVariant) -> i64 {
        match variant {
            DegreeVariant::Full => self.g(big_n),
            DegreeVariant::Periodic => self.g_periodic(big_n),
        }
    }

    /// `g(1), …, g(p)`.
    pub fn degrees(&self) -> Vec<i64> {
        (1..=self.p).map(|k| self.g(k)).collect()
    }

    /// `(cb₀, cb₂, …, cb_{2(n−1)})`.
    pub fn cbs(&self) -> Vec<u64> {
        let g = self.degrees();
        (0..self.n as i64).map(|j| g.iter().filter(|&&d| d <= 2 * j).count() as u64).collect()
    }

    /// `cb_{2j}` for any `j`.
    pub fn cb(&self, j: i64) -> u64 {
        if j < 0 {
            return 0;
        }
        self.degrees().iter().filter(|&&d| d <= 2 * j).count() as u64
    }

    /// Count (0 or 1) of orbits of degree `2j` in the class of `γ₀^N`.
    pub fn betti_by_class(&self, big_n: u64, j: i64) -> u64 {
        (j >= 0 && 2 * j >= self.g_periodic(big_n)) as u64
    }

    /// Per-class tables up to an even `cap`: entry `k` (for `k = 0..p`) is
    /// the class of `γ₀^k`, mapping degree to count.
    pub fn class_tables(&self, cap: i64) -> Vec<BTreeMap<i64, u64>> {
        (0..self.p)
            .map(|k| {
                let big_n = if k == 0 { self.p } else { k };
                (0..=cap).step_by(2).map(|d| (d, self.betti_by_class(big_n, d / 2))).collect()
            })
            .collect()
    }

    /// Units `k` with `g̃(kN) = g̃(N)` for all `N`.
    pub fn contact_symmetry_set(&self) -> Vec<u64> {
        units(self.p)
            .into_iter()
            .filter(|&k| (1..=self.p).all(|nn| self.g_periodic(mul_mod(k, nn, self.p)) == self.g_periodic(nn)))
            .collect()
    }

    /// `(α₀, −α₁, …, −α_{n−1}, 1)`.
    pub fn normalized_weights(&self) -> Vec<i64> {
        let mut w = vec![self.alpha0];
        w.extend(self.alphas.iter().map(|a| -a));
        w.push(1);
        w
    }

    fn check_properties(&self) {
        let (n, p) = (self.n as i64, self.p);
        assert_eq!(self.g(p), 2 * n, "g(p) = 2n");
        for k in 1..=p {
            let g = self.g(k);
            assert!(g >= 0, "g(N) >= 0");
            assert_eq!(self.g(k + p), g + 2, "g(N + p) = g(N) + 2");
            if k < p {
                assert!(g <= 2 * (n - 1), "g(N) <= 2(n - 1) for N < p");
                assert_eq!(g + self.g(p - k), 2 * (n - 1), "g(N) + g(p - N) = 2(n - 1)");
            }
        }
    }
}

impl fmt::Display for LensNormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n = {}, p = {}, alpha = ({}), alpha0 = {}, a_n = {}",
            self.n,
            self.p,
            self.alphas.iter().map(i64::to_string).collect::<Vec<_>>().join(","),
            self.alpha0,
            self.a_n
        )
    }
}

pub fn degree_function(form: &LensNormalForm, big_n: u64, variant: DegreeVariant) -> Result<i64> {
    if big_n == 0 {
        return Err(Error::InvalidInput("N must be positive".into()));
    }
    Ok(form.degree(big_n, variant))
}

pub fn cbs(form: &LensNormalForm) -> Vec<u64> {
    form.cbs()
}

/// An element of `ℚ[ℤ_p]`: `Σ c_i t^i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupRingElement {
    pub p: u64,
    pub coefficients: Vec<BigRational>,
}

impl GroupRingElement {
    pub fn zero(p: u64) -> Self {
        GroupRingElement { p, coefficients: vec![BigRational::zero(); p as usize] }
    }

    pub fn monomial(p: u64, exponent: i64) -> Self {
        let mut e = Self::zero(p);
        e.coefficients[residue(exponent as i128, p) as usize] = BigRational::one();
        e
    }

    pub fn one(p: u64) -> Self {
        Self::monomial(p, 0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let coefficients = self.coefficients.iter().zip(&other.coefficients).map(|(a, b)| a - b).collect();
        GroupRingElement { p: self.p, coefficients }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.p);
        for (i, a) in self.coefficients.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in other.coefficients.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                out.coefficients[(i + j) % self.p as usize] += a * b;
            }
        }
        out
    }

    /// Image under `t ↦ t^k`.
    pub fn substitute(&self, k: u64) -> Self {
        let mut out = Self::zero(self.p);
        for (i, a) in self.coefficients.iter().enumerate() {
            out.coefficients[mul_mod(i as u64, k, self.p) as usize] += a;
        }
        out
    }

    /// `t^u · self`.
    pub fn shift(&self, u: u64) -> Self {
        self.mul(&Self::monomial(self.p, u as i64))
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(Zero::is_zero)
    }
}

impl fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coefficients.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let magnitude = if c.is_negative() { -c } else { c.clone() };
            let sign = match (first, c.is_negative()) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            let monomial = match i {
                0 => String::new(),
                1 => "*t".to_string(),
                _ => format!("*t^{i}"),
            };
            write!(f, "{sign}{magnitude}{monomial}")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `Δ(t) = Π_j (t^{r_j} − 1)` with `r_j ℓ_j ≡ 1 (mod p)`.
pub fn reidemeister_delta(p: u64, weights: &[i64]) -> Result<GroupRingElement> {
    check_units(p, weights)?;
    let one = GroupRingElement::one(p);
    Ok(weights.iter().fold(one.clone(), |acc, &w| {
        let r = inverse_mod(residue(w as i128, p), p).expect("unit weight");
        acc.mul(&GroupRingElement::monomial(p, r as i64).sub(&one))
    }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Realizability {
    /// `Δ(t^k) = t^u Δ(t)`.
    Realizable { u: u64 },
    /// `k^{n+1} ≢ 1 (mod p)`.
    FailsHomotopyCondition { power: u64 },
    /// No `u` makes `Δ(t^k) = t^u Δ(t)`.
    FailsDeltaCondition,
}

impl Realizability {
    pub fn is_realizable(&self) -> bool {
        matches!(self, Realizability::Realizable { .. })
    }
}

/// Whether multiplication by `k` on `π₁` passes both the `k^{n+1} ≡ 1` test
/// and the Δ-polynomial test.
pub fn diffeo_realizable(p: u64, weights: &[i64], k: u64) -> Result<Realizability> {
    if p > 1 && k.gcd(&p) != 1 {
        return Err(Error::InvalidInput(format!("{k} is not a unit mod {p}")));
    }
    let power = pow_mod(k, weights.len() as u64, p);
    if power != 1 % p {
        return Ok(Realizability::FailsHomotopyCondition { power });
    }
    let delta = reidemeister_delta(p, weights)?;
    let image = delta.substitute(k);
    Ok((0..p)
        .find(|&u| delta.shift(u) == image)
        .map_or(Realizability::FailsDeltaCondition, |u| Realizability::Realizable { u }))
}

/// All units `k` passing [`diffeo_realizable`], with their `u`.
pub fn diffeo_realizable_units(p: u64, weights: &[i64]) -> Result<Vec<(u64, u64)>> {
    let mut out = Vec::new();
    for k in units(p) {
        if let Realizability::Realizable { u } = diffeo_realizable(p, weights, k)? {
            out.push((k, u));
        }
    }
    Ok(out)
}

/// `w₂[permutation[i]] ≡ ±k·w₁[i]`, the sign flipped where `flips[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffeoWitness {
    pub k: u64,
    pub flips: Vec<bool>,
    pub permutation: Vec<usize>,
}

impl DiffeoWitness {
    pub fn flip_count(&self) -> usize {
        self.flips.iter().filter(|&&f| f).count()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffeoEquivalence {
    pub witness: Option<DiffeoWitness>,
    /// A witness with an even number of sign changes exists.
    pub even_witness: bool,
}

impl DiffeoEquivalence {
    pub fn equivalent(&self) -> bool {
        self.witness.is_some()
    }
}

/// Match `k·w₁` against `w₂` up to signs. Within each orbit `{r, −r}` the
/// counts must agree; the number of flips used in an orbit has the parity of
/// `a − a'`, where `a`, `a'` count the entries equal to `r`, unless `r ≡ −r`
/// and then any parity is possible.
fn match_with_unit(p: u64, w1: &[i64], w2: &[i64], k: u64) -> Option<(DiffeoWitness, bool)> {
    let scaled: Vec<u64> = w1.iter().map(|&w| mul_mod(residue(w as i128, p), k, p)).collect();
    let target: Vec<u64> = w2.iter().map(|&w| residue(w as i128, p)).collect();
    let canon = |r: u64| r.min((p - r) % p);
    let mut orbits: BTreeMap<u64, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for (i, &r) in scaled.iter().enumerate() {
        orbits.entry(canon(r)).or_default().0.push(i);
    }
    for (j, &r) in target.iter().enumerate() {
        orbits.entry(canon(r)).or_default().1.push(j);
    }
    let mut permutation = vec![0; w1.len()];
    let mut flips = vec![false; w1.len()];
    let mut parity = 0usize;
    let mut free_parity = false;
    for (&rep, (src, dst)) in &orbits {
        if src.len() != dst.len() {
            return None;
        }
        if rep == (p - rep) % p {
            free_parity |= !src.is_empty();
            for (&i, &j) in src.iter().zip(dst) {
                permutation[i] = j;
            }
            continue;
        }
        // Pair equal residues first, then the rest with a flip.
        let mut dst_pos: Vec<usize> = dst.iter().copied().filter(|&j| target[j] == rep).collect();
        let mut dst_neg: Vec<usize> = dst.iter().copied().filter(|&j| target[j] != rep).collect();
        let (src_pos, src_neg): (Vec<usize>, Vec<usize>) = src.iter().partition(|&&i| scaled[i] == rep);
        let mut leftovers = Vec::new();
        for i in src_pos {
            match dst_pos.pop() {
                Some(j) => permutation[i] = j,
                None => leftovers.push(i),
            }
        }
        for i in src_neg {
            match dst_neg.pop() {
                Some(j) => permutation[i] = j,
                None => leftovers.push(i),
            }
        }
        let remaining: Vec<usize> = dst_pos.into_iter().chain(dst_neg).collect();
        for (i, j) in leftovers.into_iter().zip(remaining) {
            permutation[i] = j;
            flips[i] = true;
            parity += 1;
        }
    }
    if parity % 2 == 1 && free_parity {
        let i = (0..w1.len()).find(|&i| canon(scaled[i]) == (p - canon(scaled[i])) % p).expect("self-paired entry");
        flips[i] = !flips[i];
        parity += 1;
    }
    Some((DiffeoWitness { k, flips, permutation }, parity.is_multiple_of(2) || free_parity))
}

/// Are `L_p(w₁)` and `L_p(w₂)` related by permuting weights, multiplying by a
/// unit and changing signs?
pub fn weights_diffeo_equivalent(p: u64, w1: &[i64], w2: &[i64]) -> Result<DiffeoEquivalence> {
    check_units(p, w1)?;
    check_units(p, w2)?;
    if w1.len() != w2.len() {
        return Err(Error::InvalidInput(format!("weight lists have lengths {} and {}", w1.len(), w2.len())));
    }
    if p == 1 {
        let witness = DiffeoWitness { k: 1, flips: vec![false; w1.len()], permutation: (0..w1.len()).collect() };
        return Ok(DiffeoEquivalence { witness: Some(witness), even_witness: true });
    }
    let found: Vec<(DiffeoWitness, bool)> = units(p)
        .into_par_iter()
        .filter_map(|k| match_with_unit(p, w1, w2, k))
        .collect();
    let even = found.iter().find(|(_, e)| *e).map(|(w, _)| w.clone());
    let even_witness = even.is_some();
    let witness = even.or_else(|| found.into_iter().next().map(|(w, _)| w));
    Ok(DiffeoEquivalence { witness, even_witness })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// All computed invariants agree; not a proof of contactomorphism.
    NotDistinguished,
    DistinguishedByCbs,
    DistinguishedByClassData,
    DiffeoInequivalent,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::NotDistinguished => "not distinguished",
            Verdict::DistinguishedByCbs => "distinguished-by-cbs",
            Verdict::DistinguishedByClassData => "distinguished-by-class-data",
            Verdict::DiffeoInequivalent => "diffeo-inequivalent",
        })
    }
}

#[derive(Clone, Debug)]
pub struct PairComparison {
    pub first: LensNormalForm,
    pub second: LensNormalForm,
    pub cbs_first: Vec<u64>,
    pub cbs_second: Vec<u64>,
    pub diffeo: DiffeoEquivalence,
    /// Units `k` with `g̃₂(kN) = g̃₁(N)` for all `N`.
    pub class_relabelings: Vec<u64>,
    pub verdict: Verdict,
}

/// Compare two Gorenstein weight vectors for the same `p`.
pub fn classify_pair(p: u64, w1: &[i64], w2: &[i64]) -> Result<PairComparison> {
    if w1.len() != w2.len() {
        return Err(Error::InvalidInput(format!("weight lists have lengths {} and {}", w1.len(), w2.len())));
    }
    let first = lens_normal_form(p, w1)?;
    let second = lens_normal_form(p, w2)?;
    let diffeo = weights_diffeo_equivalent(p, w1, w2)?;
    let cbs_first = first.cbs();
    let cbs_second = second.cbs();
    let class_relabelings: Vec<u64> = units(p)
        .into_iter()
        .filter(|&k| (1..=p).all(|nn| second.g_periodic(mul_mod(k, nn, p)) == first.g_periodic(nn)))
        .collect();
    let verdict = if cbs_first != cbs_second {
        Verdict::DistinguishedByCbs
    } else if class_relabelings.is_empty() {
        Verdict::DistinguishedByClassData
    } else if !diffeo.equivalent() {
        Verdict::DiffeoInequivalent
    } else {
        Verdict::NotDistinguished
    };
    Ok(PairComparison { first, second, cbs_first, cbs_second, diffeo, class_relabelings, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const L7_A: [i64; 4] = [-3, 1, 1, 1];
    const L7_B: [i64; 4] = [1, -1, -1, 1];
    const L13_A: [i64; 7] = [1, 1, 1, 1, 2, -2, 1];
    const L13_B: [i64; 7] = [1, -1, -1, -1, -2, -2, 1];
    const L15: [i64; 8] = [1, 1, 1, 2, -2, -2, -2, 1];

    fn g_values(p: u64, w: &[i64]) -> Vec<i64> {
        lens_normal_form(p, w).unwrap().degrees()
    }

    #[test]
    fn normal_forms() {
        let f = lens_normal_form(5, &L13_A).unwrap();
        assert_eq!(f.n, 6);
        let reduced: Vec<i64> = f.alphas.iter().map(|a| a.rem_euclid(5)).collect();
        assert_eq!(reduced, vec![4, 4, 4, 3, 2]); // ≡ (−1,−1,−1,−2,2)
        assert_eq!(f.alpha0.rem_euclid(5), 1);
        assert_eq!(f.a_n, 1);
        let g = lens_normal_form(5, &L13_B).unwrap();
        assert_eq!(g.alphas, vec![1, 1, 1, 2, 2]);
        assert_eq!(g.alpha0, 6);
        assert!(matches!(lens_normal_form(2, &[1, 2]), Err(Error::NonUnitWeight { index: 1, .. })));
        assert!(matches!(lens_normal_form(3, &[1, 1]), Err(Error::NonGorensteinWeights { .. })));
        assert!(matches!(lens_normal_form(4, &[1, 1, 1, 2]), Err(Error::NonUnitWeight { index: 3, .. })));
        assert!(lens_normal_form(4, &[1, 1, 1, 1]).is_ok());
        let trivial = lens_normal_form(1, &[3, 7, 2]).unwrap();
        assert_eq!(trivial.degrees(), vec![4]);
    }

    #[test]
    fn degree_values() {
        assert_eq!(g_values(5, &L7_A), vec![2, 0, 4, 2, 6]);
        assert_eq!(g_values(5, &L13_A), vec![2, 4, 6, 8, 12]);
        assert_eq!(g_values(5, &L13_B), vec![6, 4, 6, 4, 12]);
        assert_eq!(g_values(5, &L15), vec![4, 4, 8, 8, 14]);
        let f = lens_normal_form(5, &L7_A).unwrap();
        assert_eq!(degree_function(&f, 7, DegreeVariant::Full).unwrap(), 2);
        assert_eq!(degree_function(&f, 7, DegreeVariant::Periodic).unwrap(), 0);
        assert!(degree_function(&f, 0, DegreeVariant::Full).is_err());
    }

    #[test]
    fn degree_independent_of_representatives() {
        let f = lens_normal_form(7, &[1, 2, 3, 1]).unwrap();
        let mut shifted = f.clone();
        shifted.alphas = f.alphas.iter().map(|a| a + 7).collect();
        shifted.a_n += 14;
        assert_eq!(f.degrees(), shifted.degrees());
    }

    #[test]
    fn cbs_examples() {
        let c = |n, p, a: &[i64]| normal_form_from_alphas(n, p, a).unwrap().cbs();
        assert_eq!(c(3, 5, &[-1, -1]), vec![1, 3, 4]);
        assert_eq!(c(3, 5, &[1, 1]), vec![0, 4, 4]);
        assert_eq!(c(6, 5, &[-1, -1, -1, -2, 2]), vec![0, 1, 2, 3, 4, 4]);
        assert_eq!(c(6, 5, &[1, 1, 1, 2, 2]), vec![0, 0, 2, 4, 4, 4]);
        for n in 2..=6usize {
            assert_eq!(c(n, n as u64 + 1, &vec![-1; n - 1]), (1..=n as u64).collect::<Vec<_>>());
        }
        for p in [3u64, 5, 7, 9] {
            // n = 2: weights (α₁ − 1, −α₁, 1); any admissible α₁ gives the same.
            let a = (1..p as i64).find(|&a| a.gcd(&(p as i64)) == 1 && (a - 1).gcd(&(p as i64)) == 1).unwrap();
            assert_eq!(c(2, p, &[a]), vec![(p - 1) / 2, p - 1]);
        }
        for n in [1usize, 3, 5] {
            let f = lens_normal_form(2, &vec![1; n + 1]).unwrap();
            let expect: Vec<u64> = (0..n).map(|j| (2 * j + 1 >= n) as u64).collect();
            assert_eq!(f.cbs(), expect);
        }
    }

    #[test]
    fn class_data() {
        let f = lens_normal_form(5, &L7_A).unwrap();
        assert_eq!(f.betti_by_class(2, 0), 1);
        assert_eq!(f.betti_by_class(5, 2), 0);
        assert_eq!(f.betti_by_class(5, 3), 1);
        assert_eq!(f.betti_by_class(1, -1), 0);
        let tables = f.class_tables(8);
        for d in (0..=8).step_by(2) {
            let total: u64 = tables.iter().map(|t| t[&d]).sum();
            assert_eq!(total, f.cb(d / 2));
        }
    }

    #[test]
    fn symmetry_sets() {
        assert_eq!(lens_normal_form(5, &L15).unwrap().contact_symmetry_set(), vec![1]);
        assert_eq!(lens_normal_form(2, &[1, 1, 1, 1]).unwrap().contact_symmetry_set(), vec![1]);
        let f = lens_normal_form(5, &L7_B).unwrap();
        assert_eq!(f.degrees()[..4], [2, 2, 2, 2]);
        assert_eq!(f.contact_symmetry_set(), vec![1, 2, 3, 4]);
    }

    #[test]
    fn delta_polynomials() {
        let d = reidemeister_delta(5, &L15).unwrap();
        let t = |e: i64| GroupRingElement::monomial(5, e);
        let one = GroupRingElement::one(5);
        let f = |e: i64| t(e).sub(&one);
        let mut expected = one.clone();
        for _ in 0..4 {
            expected = expected.mul(&f(1));
        }
        expected = expected.mul(&f(3));
        for _ in 0..3 {
            expected = expected.mul(&f(-3));
        }
        assert_eq!(d, expected);
        assert_eq!(d.substitute(2), d.shift(4));
        let all_ones = reidemeister_delta(7, &[1, 1, 1]).unwrap();
        assert_eq!(all_ones, f7(1).mul(&f7(1)).mul(&f7(1)));
        assert!(reidemeister_delta(1, &[1, 1]).unwrap().is_zero());
        assert_eq!(d.to_string(), "5 + 5*t + 5*t^2 + 5*t^3 - 20*t^4");
        assert_eq!(f(1).to_string(), "-1 + 1*t");

        fn f7(e: i64) -> GroupRingElement {
            GroupRingElement::monomial(7, e).sub(&GroupRingElement::one(7))
        }
    }

    #[test]
    fn realizability() {
        assert_eq!(diffeo_realizable(5, &L15, 2).unwrap(), Realizability::Realizable { u: 4 });
        assert_eq!(diffeo_realizable(5, &L13_A, 1).unwrap(), Realizability::Realizable { u: 0 });
        assert_eq!(
            diffeo_realizable(5, &L13_A, 2).unwrap(),
            Realizability::FailsHomotopyCondition { power: 3 }
        );
        let units: Vec<u64> = diffeo_realizable_units(5, &L15).unwrap().into_iter().map(|(k, _)| k).collect();
        assert_eq!(units, vec![1, 2, 3, 4]);
    }

    /// Exhaustive oracle over units and sign patterns.
    fn brute_force(p: u64, w1: &[i64], w2: &[i64]) -> (bool, bool) {
        let mut target: Vec<u64> = w2.iter().map(|&w| residue(w as i128, p)).collect();
        target.sort();
        let mut any = false;
        let mut even = false;
        for k in units(p) {
            for mask in 0u32..(1 << w1.len()) {
                let mut img: Vec<u64> = w1
                    .iter()
                    .enumerate()
                    .map(|(i, &w)| {
                        let s = if mask >> i & 1 == 1 { -1 } else { 1 };
                        residue(s * k as i128 * w as i128, p)
                    })
                    .collect();
                img.sort();
                if img == target {
                    any = true;
                    even |= mask.count_ones() % 2 == 0;
                }
            }
        }
        (any, even)
    }

    fn check_witness(p: u64, w1: &[i64], w2: &[i64], w: &DiffeoWitness) {
        let mut seen = vec![false; w2.len()];
        for (i, &x) in w1.iter().enumerate() {
            let j = w.permutation[i];
            assert!(!seen[j]);
            seen[j] = true;
            let s = if w.flips[i] { -1 } else { 1 };
            assert_eq!(residue(s * w.k as i128 * x as i128, p), residue(w2[j] as i128, p));
        }
    }

    #[test]
    fn diffeo_examples() {
        let e = weights_diffeo_equivalent(5, &L13_A, &L13_B).unwrap();
        assert!(e.equivalent() && e.even_witness);
        let w = e.witness.unwrap();
        check_witness(5, &L13_A, &L13_B, &w);
        assert_eq!(w.flip_count(), 4);
        let same = weights_diffeo_equivalent(5, &L15, &L15).unwrap();
        assert!(same.even_witness);
        assert!(!weights_diffeo_equivalent(5, &[1, 1, 1, 1, 1], &[1, 1, 1, 1, 2]).unwrap().equivalent());
        assert_eq!(brute_force(5, &[1, 1, 1, 1, 1], &[1, 1, 1, 1, 2]), (false, false));
        assert_eq!(brute_force(5, &L13_A, &L13_B), (true, true));
    }

    #[test]
    fn classify_examples() {
        let c = classify_pair(5, &L13_A, &L13_B).unwrap();
        assert!(c.diffeo.equivalent() && c.diffeo.even_witness);
        assert_eq!(c.cbs_first, vec![0, 1, 2, 3, 4, 4]);
        assert_eq!(c.cbs_second, vec![0, 0, 2, 4, 4, 4]);
        assert_eq!(c.verdict, Verdict::DistinguishedByCbs);
        assert_eq!(classify_pair(5, &L15, &L15).unwrap().verdict, Verdict::NotDistinguished);
        let l7 = classify_pair(5, &L7_A, &L7_B).unwrap();
        assert_eq!((l7.cbs_first.clone(), l7.cbs_second.clone()), (vec![1, 3, 4], vec![0, 4, 4]));
        assert_eq!(l7.verdict, Verdict::DistinguishedByCbs);
        assert!(classify_pair(5, &L7_A, &L15).is_err());
    }

    fn random_weights() -> impl Strategy<Value = (u64, Vec<i64>)> {
        (2u64..=13, 1usize..=6).prop_flat_map(|(p, n)| {
            let unit = (1..p as i64).prop_filter("unit", move |x| x.gcd(&(p as i64)) == 1);
            (Just(p), proptest::collection::vec(unit, n))
        })
        .prop_filter_map("needs a unit closing weight", |(p, mut w)| {
            let s: i64 = w.iter().sum();
            let last = (-s).rem_euclid(p as i64);
            (last.gcd(&(p as i64)) == 1).then(|| {
                w.push(last);
                (p, w)
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn prop_identities((p, w) in random_weights()) {
            let f = lens_normal_form(p, &w).unwrap();
            let n = f.n;
            let c = f.cbs();
            for j in 0..n.saturating_sub(1) {
                prop_assert_eq!(c[j] + c[n - 2 - j], p - 1);
            }
            prop_assert_eq!(c[n - 1], p - 1);
            for j in n as i64..n as i64 + 3 {
                prop_assert_eq!(f.cb(j), p);
            }
        }

        #[test]
        fn prop_presentation_invariance((p, w) in random_weights(), rot in 0usize..8, k_idx in 0usize..8) {
            let f = lens_normal_form(p, &w).unwrap();
            let mut w2 = w.clone();
            let len = w2.len();
            w2.rotate_left(rot % len);
            let ks = units(p);
            let k = ks[k_idx % ks.len()] as i64;
            let w2: Vec<i64> = w2.iter().map(|x| x * k).collect();
            prop_assert_eq!(lens_normal_form(p, &w2).unwrap().cbs(), f.cbs());
        }

        #[test]
        fn prop_symmetry_set_is_subgroup((p, w) in random_weights()) {
            let s = lens_normal_form(p, &w).unwrap().contact_symmetry_set();
            prop_assert!(s.contains(&1));
            for &a in &s {
                for &b in &s {
                    prop_assert!(s.contains(&mul_mod(a, b, p).max(1)));
                }
            }
        }

        #[test]
        fn prop_diffeo_matches_brute_force(
            (p, w1) in random_weights(),
            seed in proptest::collection::vec(-20i64..20, 7),
        ) {
            let len = w1.len();
            // Second list: unit multiples with signs of a shuffled copy, or
            // an unrelated Gorenstein list of the same length.
            let mut w2: Vec<i64> = w1.iter().zip(&seed).map(|(x, s)| if s % 3 == 0 { -x } else { *x }).collect();
            w2.rotate_left((seed[0].unsigned_abs() as usize) % len);
            if seed[1] % 2 == 0 {
                let unit = (1..p as i64).find(|x| x.gcd(&(p as i64)) == 1 && x % 3 == seed[2].rem_euclid(3)).unwrap_or(1);
                w2[0] = unit;
                let s: i64 = w2[1..].iter().sum::<i64>() + unit;
                let fix = (-(s - w2[len - 1])).rem_euclid(p as i64);
                w2[len - 1] = fix;
            }
            prop_assume!(check_units(p, &w2).is_ok());
            let got = weights_diffeo_equivalent(p, &w1, &w2).unwrap();
            let (any, even) = brute_force(p, &w1, &w2);
            prop_assert_eq!(got.equivalent(), any);
            prop_assert_eq!(got.even_witness, even);
            if let Some(w) = &got.witness {
                check_witness(p, &w1, &w2, w);
                if got.even_witness {
                    prop_assert_eq!(w.flip_count() % 2, 0);
                }
            }
        }
    }
}
