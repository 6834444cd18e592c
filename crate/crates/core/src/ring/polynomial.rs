use std::cmp::Ordering;
use std::collections::HashMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::monomial::{Monomial, MonomialOrder};
use super::Rational;
use crate::error::{Error, Result};

/// Exact polynomial in `t` and `n` fibre variables with rational coefficients.
///
/// Terms are kept sorted in descending block order (z-block degrevlex, then `t`),
/// with no zero coefficients and no repeated monomials. Two polynomials are
/// equal iff their term lists are equal.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Polynomial {
    nvars: usize,
    terms: Vec<(Monomial, Rational)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// Context-checked arithmetic.
pub fn poly_arith(op: ArithOp, p: &Polynomial, q: &Polynomial) -> Result<Polynomial> {
    if p.nvars != q.nvars {
        return Err(Error::ContextMismatch {
            left: p.nvars,
            right: q.nvars,
        });
    }
    Ok(match op {
        ArithOp::Add => p.add_poly(q),
        ArithOp::Sub => p.sub_poly(q),
        ArithOp::Mul => p.mul_poly(q),
    })
}

pub(crate) fn canonical_cmp(a: &Monomial, b: &Monomial) -> Ordering {
    MonomialOrder::block().compare(a, b)
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::term(Monomial::one(nvars), c)
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, Rational::from_integer(c.into()))
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let nvars = m.nvars();
        if c.is_zero() {
            return Self::zero(nvars);
        }
        Polynomial {
            nvars,
            terms: vec![(m, c)],
        }
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(m, Rational::one())
    }

    /// The base parameter `t`.
    pub fn t(nvars: usize) -> Self {
        Self::monomial(Monomial::t_power(nvars, 1))
    }

    pub fn t_power(nvars: usize, e: u32) -> Self {
        Self::monomial(Monomial::t_power(nvars, e))
    }

    /// Fibre variable `z_i`, counted from zero.
    pub fn z(nvars: usize, i: usize) -> Self {
        Self::monomial(Monomial::z_power(nvars, i, 1))
    }

    /// Builds a canonical polynomial from arbitrary (possibly repeated) terms.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), nvars);
            if c.is_zero() {
                continue;
            }
            *acc.entry(m).or_insert_with(Rational::zero) += c;
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| canonical_cmp(&b.0, &a.0));
        Polynomial { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Rational)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::one(self.nvars))
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms
            .binary_search_by(|(x, _)| canonical_cmp(m, x))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| Rational::zero())
    }

    /// Leading term in the canonical (block) order.
    pub fn leading_term(&self) -> Option<&(Monomial, Rational)> {
        self.terms.first()
    }

    pub fn max_t_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.t_exponent()).max().unwrap_or(0)
    }

    pub fn max_z_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.z_degree()).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.total_degree()).max().unwrap_or(0)
    }

    /// Smallest `t` exponent among the terms; `None` for the zero polynomial.
    pub fn t_valuation(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.t_exponent()).min()
    }

    pub fn add_poly(&self, other: &Polynomial) -> Polynomial {
        self.combine(other, false)
    }

    pub fn sub_poly(&self, other: &Polynomial) -> Polynomial {
        self.combine(other, true)
    }

    fn combine(&self, other: &Polynomial, negate: bool) -> Polynomial {
        assert_eq!(self.nvars, other.nvars, "polynomial context mismatch");
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &other.terms[j];
            match canonical_cmp(ma, mb) {
                Ordering::Greater => {
                    out.push((ma.clone(), ca.clone()));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((mb.clone(), if negate { -cb } else { cb.clone() }));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { ca - cb } else { ca + cb };
                    if !c.is_zero() {
                        out.push((ma.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(
            other.terms[j..]
                .iter()
                .map(|(m, c)| (m.clone(), if negate { -c } else { c.clone() })),
        );
        Polynomial {
            nvars: self.nvars,
            terms: out,
        }
    }

    pub fn mul_poly(&self, other: &Polynomial) -> Polynomial {
        self.mul_impl(other, None)
    }

    /// `self * other` with every term of `t`-degree `>= bound` dropped.
    pub fn mul_truncated(&self, other: &Polynomial, bound: u32) -> Polynomial {
        self.mul_impl(other, Some(bound))
    }

    fn mul_impl(&self, other: &Polynomial, bound: Option<u32>) -> Polynomial {
        assert_eq!(self.nvars, other.nvars, "polynomial context mismatch");
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return other.mul_term(m, c).truncated_opt(bound);
        }
        if other.terms.len() == 1 {
            let (m, c) = &other.terms[0];
            return self.mul_term(m, c).truncated_opt(bound);
        }
        let mut acc: HashMap<Monomial, Rational> = HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some(b) = bound {
                    if ma.t_exponent() + mb.t_exponent() >= b {
                        continue;
                    }
                }
                *acc.entry(ma.mul(mb)).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| canonical_cmp(&b.0, &a.0));
        Polynomial {
            nvars: self.nvars,
            terms,
        }
    }

    fn truncated_opt(self, bound: Option<u32>) -> Polynomial {
        match bound {
            Some(b) => self.truncate(b),
            None => self,
        }
    }

    /// Multiplication by `c * m`; monomial multiplication preserves the term order.
    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(x, d)| (x.mul(m), d * c)).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        self.mul_term(&Monomial::one(self.nvars), c)
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn mul_t_power(&self, e: u32) -> Polynomial {
        self.mul_term(&Monomial::t_power(self.nvars, e), &Rational::one())
    }

    /// Drops all terms with `t`-exponent `>= bound`; the result is reduced modulo `t^bound`.
    pub fn truncate(&self, bound: u32) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.t_exponent() < bound)
                .cloned()
                .collect(),
        }
    }

    /// Exact division by `t^e`; `None` when some term has a smaller `t` exponent.
    pub fn div_t_power(&self, e: u32) -> Option<Polynomial> {
        if self.terms.iter().any(|(m, _)| m.t_exponent() < e) {
            return None;
        }
        Some(Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut m = m.clone();
                    m.raw_mut()[0] -= e;
                    (m, c.clone())
                })
                .collect(),
        })
    }

    /// Exact division by the monomial `m`, when every term is divisible.
    pub fn div_monomial(&self, m: &Monomial) -> Option<Polynomial> {
        if !self.terms.iter().all(|(x, _)| m.divides(x)) {
            return None;
        }
        Some(Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(x, c)| (m.quotient_of(x), c.clone())).collect(),
        })
    }

    /// Partial derivative with respect to fibre variable `z_i` (zero-based).
    pub fn derivative(&self, i: usize) -> Polynomial {
        let slot = i + 1;
        Polynomial::from_terms(
            self.nvars,
            self.terms.iter().filter_map(|(m, c)| {
                let e = m.raw()[slot];
                if e == 0 {
                    return None;
                }
                let mut m = m.clone();
                m.raw_mut()[slot] -= 1;
                Some((m, c * Rational::from_integer(e.into())))
            }),
        )
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.nvars);
        for _ in 0..e {
            acc = acc.mul_poly(self);
        }
        acc
    }

    /// Substitutes `z_i -> images[i]` and `t -> t` into a ring with `target_nvars`
    /// fibre variables, optionally discarding terms of `t`-degree `>= bound`.
    pub fn substitute(&self, images: &[Polynomial], target_nvars: usize, bound: Option<u32>) -> Polynomial {
        assert_eq!(images.len(), self.nvars, "one image per fibre variable");
        let mut powers: Vec<Vec<Polynomial>> = images
            .iter()
            .map(|p| {
                assert_eq!(p.nvars, target_nvars, "image context mismatch");
                vec![Polynomial::one(target_nvars), p.clone()]
            })
            .collect();
        let mut out = Polynomial::zero(target_nvars);
        for (m, c) in &self.terms {
            let te = m.t_exponent();
            if bound.is_some_and(|b| te >= b) {
                continue;
            }
            let mut prod = Polynomial::term(Monomial::t_power(target_nvars, te), c.clone());
            for (i, &e) in m.z_exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let e = e as usize;
                while powers[i].len() <= e {
                    let next = match bound {
                        Some(b) => powers[i].last().unwrap().mul_truncated(&images[i], b),
                        None => powers[i].last().unwrap().mul_poly(&images[i]),
                    };
                    powers[i].push(next);
                }
                prod = match bound {
                    Some(b) => prod.mul_truncated(&powers[i][e], b),
                    None => prod.mul_poly(&powers[i][e]),
                };
                if prod.is_zero() {
                    break;
                }
            }
            out = out.add_poly(&prod);
        }
        out
    }

    /// Embeds into a ring with more fibre variables appended after the existing ones.
    pub fn widen(&self, nvars: usize) -> Polynomial {
        assert!(nvars >= self.nvars);
        if nvars == self.nvars {
            return self.clone();
        }
        // appended variables have exponent zero, so the block order of the
        // existing terms is unchanged
        Polynomial {
            nvars,
            terms: self.terms.iter().map(|(m, c)| (m.widen(nvars), c.clone())).collect(),
        }
    }

    /// Divides by the leading coefficient (in the canonical order).
    pub fn monic(&self) -> Polynomial {
        match self.terms.first() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
        }
    }

    /// Largest absolute numerator/denominator size, handy for diagnostics.
    pub fn height_bits(&self) -> u64 {
        self.terms
            .iter()
            .map(|(_, c)| c.numer().abs().bits().max(c.denom().bits()))
            .max()
            .unwrap_or(0)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.add_poly(rhs)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.sub_poly(rhs)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.mul_poly(rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::neg(self)
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        self.add_poly(&rhs)
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        self.sub_poly(&rhs)
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        self.mul_poly(&rhs)
    }
}

/// Sum of `coeffs[i] * gens[i]`.
pub fn combination(nvars: usize, coeffs: &[Polynomial], gens: &[Polynomial]) -> Polynomial {
    coeffs
        .iter()
        .zip(gens)
        .fold(Polynomial::zero(nvars), |acc, (c, g)| acc.add_poly(&c.mul_poly(g)))
}

/// Renders with fibre variables named `z1, z2, ...`.
impl std::fmt::Display for Polynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let ring = super::Ring::new((1..=self.nvars).map(|i| format!("z{i}"))).expect("default names are valid");
        f.write_str(&ring.render(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Ring;

    fn ring() -> Ring {
        Ring::new(["x", "y"]).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let r = ring();
        let p = r.parse("x + t").unwrap();
        let q = r.parse("x - t").unwrap();
        assert_eq!(poly_arith(ArithOp::Mul, &p, &q).unwrap(), r.parse("x^2 - t^2").unwrap());
    }

    #[test]
    fn identities() {
        let r = ring();
        let p = r.parse("x*y - t^2").unwrap();
        assert_eq!(&p + &Polynomial::zero(2), p);
        assert_eq!(&p * &Polynomial::one(2), p);
    }

    #[test]
    fn mismatched_contexts_are_rejected() {
        let p = Polynomial::z(2, 0);
        let q = Polynomial::z(3, 0);
        assert!(matches!(
            poly_arith(ArithOp::Add, &p, &q),
            Err(Error::ContextMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn truncation_examples() {
        let r = ring();
        let p = r.parse("x + t^3 + t^5*x").unwrap();
        assert_eq!(p.truncate(4), r.parse("x + t^3").unwrap());
        let q = r.parse("x*y + 3").unwrap();
        assert_eq!(q.truncate(1), q);
        assert!(r.parse("t^4").unwrap().truncate(4).is_zero());
    }

    #[test]
    fn derivative_and_substitution() {
        let r = ring();
        let f = r.parse("x*y - t^2").unwrap();
        assert_eq!(f.derivative(0), r.parse("y").unwrap());
        assert_eq!(f.derivative(1), r.parse("x").unwrap());
        let images = [r.parse("x + t^7*x").unwrap(), r.parse("y").unwrap()];
        let g = r.parse("x*y - t^2 - t^9").unwrap();
        let sub = g.substitute(&images, 2, None);
        let expected = &r.parse("1 + t^7").unwrap() * &f;
        assert_eq!(sub, expected);
    }

    #[test]
    fn truncated_substitution_matches_full_then_truncate() {
        let r = ring();
        let f = r.parse("x^3*y + t*x - 5/3*y^2").unwrap();
        let images = [r.parse("x + t^2*y").unwrap(), r.parse("y - t*x^2").unwrap()];
        let full = f.substitute(&images, 2, None).truncate(4);
        let trunc = f.substitute(&images, 2, Some(4));
        assert_eq!(full, trunc);
    }
}
