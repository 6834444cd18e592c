//! Gröbner bases of ideals and submodules of free modules over `Q[t][z]`,
//! division with quotient certificates, syzygies, kernels and membership tests.

mod buchberger;
mod vector;

pub use vector::ModuleOrder;

use crate::error::{Error, Result};
use crate::ring::{Monomial, MonomialOrder, Polynomial, Rational};
use buchberger::{groebner, reduce};
use vector::Vector;

/// Budgets for a single Gröbner basis computation. Exceeding one is a hard error.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Limits {
    pub max_pairs: usize,
    pub max_terms: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_pairs: 200_000,
            max_terms: 400_000,
        }
    }
}

/// A vector in a free module `P^r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModuleElement {
    pub components: Vec<Polynomial>,
}

impl ModuleElement {
    pub fn new(components: Vec<Polynomial>) -> Self {
        ModuleElement { components }
    }

    pub fn zero(rank: usize, nvars: usize) -> Self {
        ModuleElement {
            components: vec![Polynomial::zero(nvars); rank],
        }
    }

    pub fn unit(rank: usize, i: usize, nvars: usize) -> Self {
        let mut v = Self::zero(rank, nvars);
        v.components[i] = Polynomial::one(nvars);
        v
    }

    pub fn rank(&self) -> usize {
        self.components.len()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Polynomial::is_zero)
    }

    pub fn add(&self, other: &ModuleElement) -> ModuleElement {
        ModuleElement::new(
            self.components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &ModuleElement) -> ModuleElement {
        ModuleElement::new(
            self.components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn scale(&self, p: &Polynomial) -> ModuleElement {
        ModuleElement::new(self.components.iter().map(|c| c * p).collect())
    }

    pub fn truncate(&self, bound: u32) -> ModuleElement {
        ModuleElement::new(self.components.iter().map(|c| c.truncate(bound)).collect())
    }

    /// `Σ components[i] * gens[i]`.
    pub fn dot(&self, gens: &[Polynomial], nvars: usize) -> Polynomial {
        crate::ring::combination(nvars, &self.components, gens)
    }

    pub fn concat(&self, other: &ModuleElement) -> ModuleElement {
        let mut c = self.components.clone();
        c.extend(other.components.iter().cloned());
        ModuleElement::new(c)
    }
}

/// `Σ coeffs[i] * columns[i]` in `P^rank`.
pub fn module_combination(
    rank: usize,
    nvars: usize,
    coeffs: &[Polynomial],
    columns: &[ModuleElement],
) -> ModuleElement {
    let mut acc = ModuleElement::zero(rank, nvars);
    for (c, col) in coeffs.iter().zip(columns) {
        if c.is_zero() {
            continue;
        }
        for (a, x) in acc.components.iter_mut().zip(&col.components) {
            *a = &*a + &(c * x);
        }
    }
    acc
}

/// Quotients (one per divisor) and remainder of a division.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisionCertificate {
    pub quotients: Vec<Polynomial>,
    pub remainder: Polynomial,
}

impl DivisionCertificate {
    /// Re-expands `Σ q_i d_i + r` and compares it with the dividend.
    pub fn verify(&self, dividend: &Polynomial, divisors: &[Polynomial]) -> bool {
        if self.quotients.len() != divisors.len() {
            return false;
        }
        let n = dividend.nvars();
        crate::ring::combination(n, &self.quotients, divisors).add_poly(&self.remainder) == *dividend
    }
}

fn quotient_polys(nvars: usize, raw: Vec<Vec<(Monomial, Rational)>>) -> Vec<Polynomial> {
    raw.into_iter().map(|q| Polynomial::from_terms(nvars, q)).collect()
}

/// Multivariate division with divisors tried in input order (default order).
pub fn divide(p: &Polynomial, divisors: &[Polynomial]) -> DivisionCertificate {
    let order = ModuleOrder::default();
    let vs: Vec<Vector> = divisors.iter().map(|d| Vector::from_poly(d, &order)).collect();
    let refs: Vec<&Vector> = vs.iter().collect();
    let mut qs = vec![Vec::new(); vs.len()];
    let unlimited = Limits {
        max_pairs: usize::MAX,
        max_terms: usize::MAX,
    };
    let r = reduce(
        &Vector::from_poly(p, &order),
        &refs,
        &order,
        true,
        Some(&mut qs),
        &unlimited,
    )
    .expect("division without limits cannot fail");
    let n = p.nvars();
    DivisionCertificate {
        quotients: quotient_polys(n, qs),
        remainder: r.to_polys(1, n).pop().unwrap(),
    }
}

/// A reduced Gröbner basis of an ideal (`rank == 1`) or of a submodule of `P^rank`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    nvars: usize,
    rank: usize,
    order: ModuleOrder,
    elements: Vec<Vector>,
}

fn check_context(polys: &[&Polynomial]) -> Result<usize> {
    let n = polys.first().map(|p| p.nvars()).unwrap_or(0);
    for p in polys {
        if p.nvars() != n {
            return Err(Error::ContextMismatch {
                left: n,
                right: p.nvars(),
            });
        }
    }
    Ok(n)
}

/// Reduced Gröbner basis of the ideal generated by `gens`.
pub fn buchberger(gens: &[Polynomial], order: &MonomialOrder) -> Result<GroebnerBasis> {
    buchberger_with(gens, order, &Limits::default())
}

pub fn buchberger_with(gens: &[Polynomial], order: &MonomialOrder, limits: &Limits) -> Result<GroebnerBasis> {
    let nvars = check_context(&gens.iter().collect::<Vec<_>>())?;
    let order = ModuleOrder::term_over_position(order.clone());
    let vs: Vec<Vector> = gens.iter().map(|g| Vector::from_poly(g, &order)).collect();
    let elements = groebner(&vs, &order, limits)?;
    Ok(GroebnerBasis {
        nvars,
        rank: 1,
        order,
        elements,
    })
}

/// Reduced Gröbner basis of the submodule of `P^rank` generated by `gens`.
pub fn module_groebner(
    gens: &[ModuleElement],
    rank: usize,
    order: &ModuleOrder,
    limits: &Limits,
) -> Result<GroebnerBasis> {
    if let Some(g) = gens.iter().find(|g| g.rank() != rank) {
        return Err(Error::Invalid(format!(
            "module element of rank {} in a rank-{rank} context",
            g.rank()
        )));
    }
    let nvars = check_context(&gens.iter().flat_map(|g| &g.components).collect::<Vec<_>>())?;
    let vs: Vec<Vector> = gens.iter().map(|g| Vector::from_polys(&g.components, order)).collect();
    let elements = groebner(&vs, order, limits)?;
    Ok(GroebnerBasis {
        nvars,
        rank,
        order: order.clone(),
        elements,
    })
}

impl GroebnerBasis {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> &ModuleOrder {
        &self.order
    }

    /// Always true: bases are interreduced on construction.
    pub fn is_reduced(&self) -> bool {
        true
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn generators(&self) -> Vec<ModuleElement> {
        self.elements
            .iter()
            .map(|v| ModuleElement::new(v.to_polys(self.rank, self.nvars)))
            .collect()
    }

    /// The basis of an ideal as polynomials.
    pub fn polynomials(&self) -> Vec<Polynomial> {
        self.elements
            .iter()
            .map(|v| v.to_polys(1, self.nvars).pop().unwrap())
            .collect()
    }

    /// Leading positions `(component, monomial)` in basis order.
    pub fn leading_terms(&self) -> Vec<(usize, Monomial)> {
        self.elements
            .iter()
            .map(|v| {
                let l = v.lead().unwrap();
                (l.comp, l.mono.clone())
            })
            .collect()
    }

    pub fn is_unit(&self) -> bool {
        self.elements
            .iter()
            .any(|v| v.terms.len() == 1 && v.terms[0].mono.is_one())
            && self.rank == 1
    }

    fn refs(&self) -> Vec<&Vector> {
        self.elements.iter().collect()
    }

    /// Normal form with its certificate against the basis elements.
    pub fn normal_form(&self, p: &Polynomial) -> (Polynomial, DivisionCertificate) {
        let n = p.nvars();
        let mut qs = vec![Vec::new(); self.elements.len()];
        let unlimited = Limits {
            max_pairs: usize::MAX,
            max_terms: usize::MAX,
        };
        let r = reduce(
            &Vector::from_poly(p, &self.order),
            &self.refs(),
            &self.order,
            true,
            Some(&mut qs),
            &unlimited,
        )
        .expect("reduction without limits cannot fail");
        let remainder = r.to_polys(1, n).pop().unwrap();
        (
            remainder.clone(),
            DivisionCertificate {
                quotients: quotient_polys(n, qs),
                remainder,
            },
        )
    }

    pub fn reduce(&self, p: &Polynomial) -> Polynomial {
        self.normal_form(p).0
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        self.reduce(p).is_zero()
    }

    pub fn normal_form_module(&self, v: &ModuleElement) -> ModuleElement {
        let unlimited = Limits {
            max_pairs: usize::MAX,
            max_terms: usize::MAX,
        };
        let r = reduce(
            &Vector::from_polys(&v.components, &self.order),
            &self.refs(),
            &self.order,
            true,
            None,
            &unlimited,
        )
        .expect("reduction without limits cannot fail");
        let n = v.components.first().map(|c| c.nvars()).unwrap_or(self.nvars);
        ModuleElement::new(r.to_polys(v.rank(), n))
    }

    pub fn contains_module(&self, v: &ModuleElement) -> bool {
        self.normal_form_module(v).is_zero()
    }
}

/// A Gröbner basis of `⟨(g_i | e_i)⟩ ⊆ P^{rank + tracked}` under an
/// elimination order; the tails record how each element arises from the
/// first `tracked` generators.
struct Tracked {
    nvars: usize,
    rank: usize,
    tracked: usize,
    order: ModuleOrder,
    basis: Vec<Vector>,
}

impl Tracked {
    fn new(
        nvars: usize,
        rank: usize,
        tracked: &[ModuleElement],
        untracked: &[ModuleElement],
        limits: &Limits,
    ) -> Result<Tracked> {
        let order = ModuleOrder::default().with_split(rank);
        let mut gens = Vec::with_capacity(tracked.len() + untracked.len());
        for (i, g) in tracked.iter().enumerate() {
            let mut v = Vector::from_polys(&g.components, &order);
            v.terms.push(vector::unit_term(rank + i, nvars));
            gens.push(v);
        }
        for g in untracked {
            gens.push(Vector::from_polys(&g.components, &order));
        }
        let basis = groebner(&gens, &order, limits)?;
        Ok(Tracked {
            nvars,
            rank,
            tracked: tracked.len(),
            order,
            basis,
        })
    }

    /// Generators of `{c : Σ c_i g_i ∈ ⟨untracked⟩}`.
    fn relations(&self) -> Vec<ModuleElement> {
        self.basis
            .iter()
            .filter(|v| v.lead().map(|l| l.comp >= self.rank).unwrap_or(false))
            .map(|v| ModuleElement::new(v.slice_polys(self.rank, self.rank + self.tracked, self.nvars)))
            .collect()
    }

    /// Coefficients `c` with `Σ c_i g_i + (untracked part) = v`, if `v` lies in the module.
    fn express(&self, v: &ModuleElement, limits: &Limits) -> Result<Option<Vec<Polynomial>>> {
        let upper: Vec<&Vector> = self
            .basis
            .iter()
            .filter(|b| b.lead().map(|l| l.comp < self.rank).unwrap_or(false))
            .collect();
        let start = Vector::from_polys(&v.components, &self.order);
        let r = reduce(&start, &upper, &self.order, false, None, limits)?;
        if r.lead().map(|l| l.comp < self.rank).unwrap_or(false) {
            return Ok(None);
        }
        let tail = r.slice_polys(self.rank, self.rank + self.tracked, self.nvars);
        Ok(Some(tail.into_iter().map(|p| p.neg()).collect()))
    }
}

fn as_rank_one(gens: &[Polynomial]) -> Vec<ModuleElement> {
    gens.iter().map(|g| ModuleElement::new(vec![g.clone()])).collect()
}

/// Coefficients `c` with `p = Σ c_i gens_i` exactly, or `None` when `p ∉ (gens)`.
pub fn membership_certificate(p: &Polynomial, gens: &[Polynomial]) -> Result<Option<Vec<Polynomial>>> {
    membership_certificate_with(p, gens, &Limits::default())
}

pub fn membership_certificate_with(
    p: &Polynomial,
    gens: &[Polynomial],
    limits: &Limits,
) -> Result<Option<Vec<Polynomial>>> {
    let n = check_context(&gens.iter().chain(std::iter::once(p)).collect::<Vec<_>>())?;
    if p.is_zero() {
        return Ok(Some(vec![Polynomial::zero(n); gens.len()]));
    }
    let direct = divide(p, gens);
    if direct.remainder.is_zero() {
        return Ok(Some(direct.quotients));
    }
    let tracked = Tracked::new(n, 1, &as_rank_one(gens), &[], limits)?;
    tracked.express(&ModuleElement::new(vec![p.clone()]), limits)
}

/// Coefficients `c` with `v = Σ c_i gens_i` in `P^rank`, or `None`.
pub fn module_membership_certificate(
    v: &ModuleElement,
    gens: &[ModuleElement],
    limits: &Limits,
) -> Result<Option<Vec<Polynomial>>> {
    let rank = v.rank();
    let n = v.components.first().map(|c| c.nvars()).unwrap_or(0);
    if v.is_zero() {
        return Ok(Some(vec![Polynomial::zero(n); gens.len()]));
    }
    if gens.iter().any(|g| g.rank() != rank) {
        return Err(Error::Invalid("module generators of inconsistent rank".into()));
    }
    let tracked = Tracked::new(n, rank, gens, &[], limits)?;
    tracked.express(v, limits)
}

/// Generators of the module of `c` with `Σ c_i gens_i = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyzygyBasis {
    pub generators: Vec<ModuleElement>,
}

impl SyzygyBasis {
    /// Every generator expands to zero against `gens`.
    pub fn verify(&self, gens: &[Polynomial]) -> bool {
        let n = gens.first().map(|g| g.nvars()).unwrap_or(0);
        self.generators
            .iter()
            .all(|s| s.rank() == gens.len() && s.dot(gens, n).is_zero())
    }
}

pub fn syzygy_basis(gens: &[Polynomial]) -> Result<SyzygyBasis> {
    syzygy_basis_with(gens, &Limits::default())
}

pub fn syzygy_basis_with(gens: &[Polynomial], limits: &Limits) -> Result<SyzygyBasis> {
    let n = check_context(&gens.iter().collect::<Vec<_>>())?;
    if gens.is_empty() {
        return Ok(SyzygyBasis { generators: vec![] });
    }
    let tracked = Tracked::new(n, 1, &as_rank_one(gens), &[], limits)?;
    Ok(SyzygyBasis {
        generators: tracked.relations(),
    })
}

/// Syzygies of module elements of `P^rank`.
pub fn module_syzygies(gens: &[ModuleElement], rank: usize, nvars: usize, limits: &Limits) -> Result<SyzygyBasis> {
    Ok(SyzygyBasis {
        generators: preimage(nvars, rank, gens, &[], limits)?,
    })
}

/// Generators of `{c ∈ P^a : Σ c_i columns_i ∈ ⟨target⟩}` for columns in `P^rank`.
pub fn preimage(
    nvars: usize,
    rank: usize,
    columns: &[ModuleElement],
    target: &[ModuleElement],
    limits: &Limits,
) -> Result<Vec<ModuleElement>> {
    if columns.is_empty() {
        return Ok(vec![]);
    }
    if rank == 0 {
        return Ok((0..columns.len())
            .map(|i| ModuleElement::unit(columns.len(), i, nvars))
            .collect());
    }
    let tracked = Tracked::new(nvars, rank, columns, target, limits)?;
    Ok(tracked.relations())
}

/// Kernel of the map `A^a → A^b`, `A = P/J`, whose columns are `columns` (each in `P^b`).
pub fn module_kernel(
    nvars: usize,
    columns: &[ModuleElement],
    rank: usize,
    j: &[Polynomial],
    limits: &Limits,
) -> Result<Vec<ModuleElement>> {
    let mut target = Vec::with_capacity(rank * j.len());
    for k in 0..rank {
        for g in j {
            let mut e = ModuleElement::zero(rank, nvars);
            e.components[k] = g.clone();
            target.push(e);
        }
    }
    preimage(nvars, rank, columns, &target, limits)
}

/// Generators of `(I : g)`.
pub fn ideal_quotient(nvars: usize, ideal: &[Polynomial], g: &Polynomial, limits: &Limits) -> Result<Vec<Polynomial>> {
    let gens = preimage(
        nvars,
        1,
        &[ModuleElement::new(vec![g.clone()])],
        &as_rank_one(ideal),
        limits,
    )?;
    Ok(gens.into_iter().map(|c| c.components[0].clone()).collect())
}

/// Generators of `I ∩ K`.
pub fn intersection(nvars: usize, i: &[Polynomial], k: &[Polynomial], limits: &Limits) -> Result<Vec<Polynomial>> {
    // c ∈ P with c·1 ∈ I and c ∈ K: preimage of I under K's generators.
    let cols: Vec<ModuleElement> = as_rank_one(k);
    let rel = preimage(nvars, 1, &cols, &as_rank_one(i), limits)?;
    Ok(rel
        .into_iter()
        .map(|c| c.dot(k, nvars))
        .filter(|p| !p.is_zero())
        .collect())
}

/// Whether `p ∈ √(gens)`, via `1 ∈ (gens, 1 - u p)` with an auxiliary variable `u`.
pub fn radical_membership(p: &Polynomial, gens: &[Polynomial]) -> Result<bool> {
    radical_membership_with(p, gens, &Limits::default())
}

pub fn radical_membership_with(p: &Polynomial, gens: &[Polynomial], limits: &Limits) -> Result<bool> {
    let n = check_context(&gens.iter().chain(std::iter::once(p)).collect::<Vec<_>>())?;
    if p.is_zero() {
        return Ok(true);
    }
    let mut ext: Vec<Polynomial> = gens.iter().map(|g| g.widen(n + 1)).collect();
    let u = Polynomial::z(n + 1, n);
    ext.push(&Polynomial::one(n + 1) - &(&u * &p.widen(n + 1)));
    let gb = buchberger_with(&ext, &MonomialOrder::default(), limits)?;
    Ok(gb.is_unit())
}
