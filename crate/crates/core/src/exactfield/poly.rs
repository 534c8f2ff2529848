//! Sparse multivariate polynomials over ℚ in the infinitesimals ε₁, ε₂, ….
//!
//! Monomials are ordered lexicographically with ε_m the most significant
//! variable: `a > b` when, at the highest-index variable where the exponents
//! differ, `a` has the larger exponent. This is a term order, so it drives
//! exact division and pseudo-remainders. Read backwards it is also the
//! asymptotic order as ε → 0⁺ with ε_{i+1} ≪ ε_i^k: the *smallest* monomial
//! of a polynomial dominates its value.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exponent vector; `exps[i]` is the power of ε_{i+1}. Trailing zeros are trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn new(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    /// ε_{index}, with `index` starting at 1.
    pub fn var(index: usize) -> Self {
        assert!(index >= 1, "infinitesimals are numbered from 1");
        let mut exps = vec![0; index];
        exps[index - 1] = 1;
        Monomial(exps)
    }

    pub fn exp(&self, var: usize) -> u32 {
        self.0.get(var).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let len = self.0.len().max(other.0.len());
        Monomial::new((0..len).map(|i| self.exp(i) + other.exp(i)).collect())
    }

    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let len = self.0.len().max(other.0.len());
        let mut out = Vec::with_capacity(len);
        for i in 0..len {
            out.push(self.exp(i).checked_sub(other.exp(i))?);
        }
        Some(Monomial::new(out))
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let len = self.0.len().min(other.0.len());
        Monomial::new((0..len).map(|i| self.exp(i).min(other.exp(i))).collect())
    }

    fn without(&self, var: usize) -> Monomial {
        let mut exps = self.0.clone();
        if var < exps.len() {
            exps[var] = 0;
        }
        Monomial::new(exps)
    }

    fn with(&self, var: usize, e: u32) -> Monomial {
        let mut exps = self.0.clone();
        if exps.len() <= var {
            exps.resize(var + 1, 0);
        }
        exps[var] = e;
        Monomial::new(exps)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let len = self.0.len().max(other.0.len());
        for i in (0..len).rev() {
            match self.exp(i).cmp(&other.exp(i)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Poly::term(Monomial::one(), c)
    }

    pub fn term(m: Monomial, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    /// Coefficient of the constant monomial (the value at ε = 0).
    pub fn constant_term(&self) -> BigRational {
        self.terms
            .get(&Monomial::one())
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Asymptotically dominant term as ε → 0⁺.
    pub fn dominant(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next()
    }

    /// Leading term in the term order.
    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn nvars(&self) -> usize {
        self.terms.keys().map(Monomial::nvars).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &BigRational) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, k: &BigRational) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(mm, c)| (mm.mul(m), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        let (lm, lc) = divisor.leading()?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((rm, rc)) = rem.leading() {
            let m = rm.div(&lm)?;
            let c = rc / &lc;
            rem = rem.sub(&divisor.mul_term(&m, &c));
            quot.add_term(m, c);
        }
        Some(quot)
    }

    /// Rescale so the leading coefficient is 1.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
            None => Poly::zero(),
        }
    }

    fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exp(var)).max().unwrap_or(0)
    }

    fn contains_var(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.exp(var) > 0)
    }

    /// Coefficient of `ε_var^e`, as a polynomial free of `ε_var`.
    fn coeff_in(&self, var: usize, e: u32) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            if m.exp(var) == e {
                out.add_term(m.without(var), c.clone());
            }
        }
        out
    }

    fn coefficients_in(&self, var: usize) -> Vec<Poly> {
        (0..=self.degree_in(var))
            .map(|e| self.coeff_in(var, e))
            .filter(|p| !p.is_zero())
            .collect()
    }

    fn shift_var(&self, var: usize, e: u32) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.with(var, m.exp(var) + e), c.clone()))
                .collect(),
        }
    }

    /// Monomial content: the largest monomial dividing every term.
    fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let first = match it.next() {
            Some(m) => m.clone(),
            None => return Monomial::one(),
        };
        it.fold(first, |acc, m| acc.gcd(m))
    }

    /// Greatest common divisor over ℚ, normalized to leading coefficient 1.
    pub fn gcd(&self, other: &Poly) -> Poly {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        if self.is_constant() || other.is_constant() {
            return Poly::one();
        }
        if self.is_monomial() || other.is_monomial() {
            let m = self.monomial_content().gcd(&other.monomial_content());
            return Poly::term(m, BigRational::one());
        }
        let var = self.nvars().max(other.nvars()) - 1;
        let (a_has, b_has) = (self.contains_var(var), other.contains_var(var));
        if !a_has {
            return self.gcd(&other.content_in(var));
        }
        if !b_has {
            return other.gcd(&self.content_in(var));
        }
        let ca = self.content_in(var);
        let cb = other.content_in(var);
        let content = ca.gcd(&cb);
        let pa = self.div_exact(&ca).expect("content divides");
        let pb = other.div_exact(&cb).expect("content divides");
        let (mut f, mut g) = if pa.degree_in(var) >= pb.degree_in(var) {
            (pa, pb)
        } else {
            (pb, pa)
        };
        loop {
            let r = f.pseudo_rem(&g, var);
            if r.is_zero() {
                f = g;
                break;
            }
            if !r.contains_var(var) {
                f = Poly::one();
                break;
            }
            f = g;
            g = r.primitive_in(var).monic();
        }
        content.mul(&f.primitive_in(var)).monic()
    }

    fn content_in(&self, var: usize) -> Poly {
        let mut coeffs = self.coefficients_in(var).into_iter();
        let mut acc = match coeffs.next() {
            Some(c) => c,
            None => return Poly::zero(),
        };
        for c in coeffs {
            if acc.is_constant() {
                return Poly::one();
            }
            acc = acc.gcd(&c);
        }
        acc.monic()
    }

    fn primitive_in(&self, var: usize) -> Poly {
        let c = self.content_in(var);
        self.div_exact(&c).expect("content divides")
    }

    /// Pseudo-remainder of `self` by `divisor` viewed as polynomials in `ε_var`.
    fn pseudo_rem(&self, divisor: &Poly, var: usize) -> Poly {
        let dg = divisor.degree_in(var);
        let lc = divisor.coeff_in(var, dg);
        let mut r = self.clone();
        while !r.is_zero() && r.contains_var(var) && r.degree_in(var) >= dg {
            let dr = r.degree_in(var);
            let lr = r.coeff_in(var, dr);
            r = lc.mul(&r).sub(&lr.mul(&divisor.shift_var(var, dr - dg)));
        }
        r
    }
}

fn subscript(mut k: usize) -> String {
    const DIGITS: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
    let mut out = Vec::new();
    loop {
        out.push(DIGITS[k % 10]);
        k /= 10;
        if k == 0 {
            break;
        }
    }
    out.iter().rev().collect()
}

fn superscript(mut k: u32) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    let mut out = Vec::new();
    loop {
        out.push(DIGITS[(k % 10) as usize]);
        k /= 10;
        if k == 0 {
            break;
        }
    }
    out.iter().rev().collect()
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &e) in self.0.iter().enumerate() {
            match e {
                0 => {}
                1 => write!(f, "ε{}", subscript(i + 1))?,
                _ => write!(f, "ε{}{}", subscript(i + 1), superscript(e))?,
            }
        }
        Ok(())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            if m.is_one() {
                write!(f, "{}", abs)?;
            } else if abs.is_one() {
                write!(f, "{}", m)?;
            } else if abs.is_integer() {
                write!(f, "{}{}", abs, m)?;
            } else {
                write!(f, "({}){}", abs, m)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
pub(crate) fn int(k: i64) -> BigRational {
    BigRational::from_integer(num_bigint::BigInt::from(k))
}
