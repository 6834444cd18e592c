//! Sparse vectors in a free module `P^r`, sorted by a module term order.
//! Ideals are the rank-one case.

use std::cmp::Ordering;

use num_traits::{One, Zero};

use crate::ring::{Monomial, MonomialOrder, Polynomial, Rational};

/// Term order on `P^r`.
///
/// Without a split this is term-over-position: monomials are compared first
/// and lower component indices break ties. With `split = Some(s)` every term in
/// components `< s` dominates every term in components `>= s` (an elimination
/// order used for syzygies and cofactor tracking).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ModuleOrder {
    pub monomial: MonomialOrder,
    pub split: Option<usize>,
}

impl ModuleOrder {
    pub fn term_over_position(monomial: MonomialOrder) -> Self {
        ModuleOrder { monomial, split: None }
    }

    pub fn with_split(mut self, split: usize) -> Self {
        self.split = Some(split);
        self
    }

    #[inline]
    pub fn compare(&self, ac: usize, am: &Monomial, bc: usize, bm: &Monomial) -> Ordering {
        if let Some(s) = self.split {
            let (ua, ub) = (ac < s, bc < s);
            if ua != ub {
                return if ua { Ordering::Greater } else { Ordering::Less };
            }
        }
        self.monomial.compare(am, bm).then(bc.cmp(&ac))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub comp: usize,
    pub mono: Monomial,
    pub coeff: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Vector {
    pub terms: Vec<Term>,
}

impl Vector {
    pub fn from_polys(polys: &[Polynomial], order: &ModuleOrder) -> Vector {
        let mut terms: Vec<Term> = polys
            .iter()
            .enumerate()
            .flat_map(|(comp, p)| {
                p.terms().iter().map(move |(m, c)| Term {
                    comp,
                    mono: m.clone(),
                    coeff: c.clone(),
                })
            })
            .collect();
        sort_terms(&mut terms, order);
        Vector { terms }
    }

    pub fn from_poly(p: &Polynomial, order: &ModuleOrder) -> Vector {
        Self::from_polys(std::slice::from_ref(p), order)
    }

    pub fn to_polys(&self, rank: usize, nvars: usize) -> Vec<Polynomial> {
        let mut buckets: Vec<Vec<(Monomial, Rational)>> = vec![Vec::new(); rank];
        for t in &self.terms {
            buckets[t.comp].push((t.mono.clone(), t.coeff.clone()));
        }
        buckets.into_iter().map(|b| Polynomial::from_terms(nvars, b)).collect()
    }

    /// Components `lo..hi` renumbered from zero.
    pub fn slice_polys(&self, lo: usize, hi: usize, nvars: usize) -> Vec<Polynomial> {
        let mut buckets: Vec<Vec<(Monomial, Rational)>> = vec![Vec::new(); hi - lo];
        for t in &self.terms {
            if t.comp >= lo && t.comp < hi {
                buckets[t.comp - lo].push((t.mono.clone(), t.coeff.clone()));
            }
        }
        buckets.into_iter().map(|b| Polynomial::from_terms(nvars, b)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn sugar(&self) -> u32 {
        self.terms.iter().map(|t| t.mono.total_degree()).max().unwrap_or(0)
    }

    pub fn make_monic(&mut self) {
        if let Some(first) = self.terms.first() {
            if first.coeff.is_one() {
                return;
            }
            let inv = first.coeff.recip();
            for t in &mut self.terms {
                t.coeff *= &inv;
            }
        }
    }

    /// `self[from..] - c * m * other`, merged in order.
    pub fn sub_mul_from(&self, from: usize, c: &Rational, m: &Monomial, other: &Vector, order: &ModuleOrder) -> Vector {
        let a = &self.terms[from..];
        let mut out = Vec::with_capacity(a.len() + other.terms.len());
        let mut i = 0;
        let mut j = 0;
        let mut pending: Option<Term> = None;
        loop {
            if pending.is_none() && j < other.terms.len() {
                let t = &other.terms[j];
                pending = Some(Term {
                    comp: t.comp,
                    mono: t.mono.mul(m),
                    coeff: -(&t.coeff * c),
                });
                j += 1;
            }
            match (a.get(i), pending.as_ref()) {
                (None, None) => break,
                (Some(x), None) => {
                    out.push(x.clone());
                    i += 1;
                }
                (None, Some(_)) => out.push(pending.take().unwrap()),
                (Some(x), Some(y)) => match order.compare(x.comp, &x.mono, y.comp, &y.mono) {
                    Ordering::Greater => {
                        out.push(x.clone());
                        i += 1;
                    }
                    Ordering::Less => out.push(pending.take().unwrap()),
                    Ordering::Equal => {
                        let y = pending.take().unwrap();
                        let s = &x.coeff + &y.coeff;
                        if !s.is_zero() {
                            out.push(Term {
                                comp: x.comp,
                                mono: y.mono,
                                coeff: s,
                            });
                        }
                        i += 1;
                    }
                },
            }
        }
        Vector { terms: out }
    }

    pub fn sub_mul(&self, c: &Rational, m: &Monomial, other: &Vector, order: &ModuleOrder) -> Vector {
        self.sub_mul_from(0, c, m, other, order)
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Vector {
        Vector {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    comp: t.comp,
                    mono: t.mono.mul(m),
                    coeff: t.coeff.clone(),
                })
                .collect(),
        }
    }
}

pub fn sort_terms(terms: &mut [Term], order: &ModuleOrder) {
    terms.sort_by(|a, b| order.compare(b.comp, &b.mono, a.comp, &a.mono));
}

/// Sum of duplicate positions is not expected: callers build vectors from canonical polynomials.
pub fn unit_term(comp: usize, nvars: usize) -> Term {
    Term {
        comp,
        mono: Monomial::one(nvars),
        coeff: Rational::one(),
    }
}
