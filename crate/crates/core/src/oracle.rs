//! Brute-force cross-checks by finite-dimensional linear algebra over Q on
//! the box of monomials `t^a z^β` with `a < L` and `|β| <= d`.
//!
//! Nothing here goes through Gröbner bases or the cotangent module.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lifting::{FamilyPair, MapTruncation, Window};
use crate::linalg::{kernel, Echelon, SparseVector};
use crate::ring::{Monomial, Polynomial, Rational};

/// The box `t^a z^β`, `a < order`, `|β| <= degree`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TruncationBox {
    pub order: u32,
    pub degree: u32,
}

impl TruncationBox {
    pub fn new(order: u32, degree: u32) -> Result<Self> {
        if order == 0 {
            return Err(Error::Invalid("box t-order must be at least 1".into()));
        }
        Ok(TruncationBox { order, degree })
    }

    /// All monomials of the box, `t`-degree outermost.
    pub fn monomials(&self, nvars: usize) -> Vec<Monomial> {
        let z = z_monomials(nvars, self.degree);
        let mut out = Vec::with_capacity(z.len() * self.order as usize);
        for a in 0..self.order {
            for e in &z {
                out.push(Monomial::from_exponents(a, e));
            }
        }
        out
    }

    pub fn contains_monomial(&self, m: &Monomial) -> bool {
        m.t_exponent() < self.order && m.z_degree() <= self.degree
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        p.terms().iter().all(|(m, _)| self.contains_monomial(m))
    }

    /// Generators of `(t^L) + m_z^{d+1}`.
    pub fn ideal(&self, nvars: usize) -> Vec<Polynomial> {
        let mut out = vec![Polynomial::t_power(nvars, self.order)];
        for e in z_monomials_of_degree(nvars, self.degree + 1) {
            out.push(Polynomial::monomial(Monomial::from_exponents(0, &e)));
        }
        out
    }

    /// Drops every term outside the box.
    pub fn truncate(&self, p: &Polynomial) -> Polynomial {
        Polynomial::from_terms(
            p.nvars(),
            p.terms().iter().filter(|(m, _)| self.contains_monomial(m)).cloned(),
        )
    }
}

fn z_monomials_of_degree(nvars: usize, d: u32) -> Vec<Vec<u32>> {
    if nvars == 0 {
        return if d == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in z_monomials_of_degree(nvars - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn z_monomials(nvars: usize, d: u32) -> Vec<Vec<u32>> {
    (0..=d).flat_map(|k| z_monomials_of_degree(nvars, k)).collect()
}

/// Coordinates of polynomials on a fixed monomial basis.
struct Basis {
    index: HashMap<Monomial, usize>,
    monos: Vec<Monomial>,
}

impl Basis {
    fn new(monos: Vec<Monomial>) -> Self {
        let index = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        Basis { index, monos }
    }

    fn len(&self) -> usize {
        self.monos.len()
    }

    /// Coordinates of `p`, dropping monomials outside the basis, shifted by `offset`.
    fn coords(&self, p: &Polynomial, offset: usize) -> SparseVector {
        p.terms()
            .iter()
            .filter_map(|(m, c)| self.index.get(m).map(|&i| (i + offset, c.clone())))
            .collect()
    }
}

/// Outcome of [`brute_membership`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Membership {
    /// `p ∈ (gens) + (t^L, m_z^{d+1})`.
    MemberWithinBox,
    /// `p ∉ (gens) + (t^L, m_z^{d+1})`, hence `p ∉ (gens)`.
    NotMember,
}

/// Membership of `p` in `(gens) + (t^L, m_z^{d+1})` by solving over the box.
pub fn brute_membership(p: &Polynomial, gens: &[Polynomial], bx: &TruncationBox) -> Result<Membership> {
    if !bx.contains(p) {
        return Err(Error::BoxTooSmall(format!(
            "the polynomial does not fit in the box (t-order {}, degree {})",
            bx.order, bx.degree
        )));
    }
    if p.is_zero() {
        return Ok(Membership::MemberWithinBox);
    }
    let n = p.nvars();
    let basis = Basis::new(bx.monomials(n));
    let (w, _) = span_of_multiples(&basis, gens);
    Ok(if w.contains(&basis.coords(p, 0)) {
        Membership::MemberWithinBox
    } else {
        Membership::NotMember
    })
}

/// Echelon form of `{trunc(μ g) : μ in the basis, g ∈ gens}` and a basis of that span.
fn span_of_multiples(basis: &Basis, gens: &[Polynomial]) -> (Echelon, Vec<SparseVector>) {
    let mut w = Echelon::new();
    let mut rows = Vec::new();
    let one = Rational::from_integer(1.into());
    for g in gens {
        for mu in &basis.monos {
            let v = basis.coords(&g.mul_term(mu, &one), 0);
            if !v.is_empty() && w.insert(&v) {
                rows.push(v);
            }
        }
    }
    (w, rows)
}

/// Syzygies of `gens` (relations modulo `t^base_order` when given) whose
/// entries fit in the box enlarged by the degrees of `gens`, truncated back
/// to `bx`. Returns a basis of their span.
fn box_syzygies(
    nvars: usize,
    gens: &[Polynomial],
    base_order: Option<u32>,
    bx: &TruncationBox,
) -> Vec<Vec<Polynomial>> {
    let m = gens.len();
    let dt = gens.iter().map(|g| g.max_t_degree()).max().unwrap_or(0);
    let dz = gens.iter().map(|g| g.max_z_degree()).max().unwrap_or(0);
    let big = TruncationBox {
        order: bx.order + dt,
        degree: bx.degree + dz,
    };
    let unknowns = big.monomials(nvars);
    let mut image_index: HashMap<Monomial, usize> = HashMap::new();
    let mut columns: Vec<SparseVector> = Vec::with_capacity(m * unknowns.len());
    let one = Rational::from_integer(1.into());
    for g in gens {
        for mu in &unknowns {
            let prod = g.mul_term(mu, &one);
            let mut col = SparseVector::new();
            for (mono, c) in prod.terms() {
                if base_order.is_some_and(|l| mono.t_exponent() >= l) {
                    continue;
                }
                let next = image_index.len();
                let k = *image_index.entry(mono.clone()).or_insert(next);
                col.insert(k, c.clone());
            }
            columns.push(col);
        }
    }
    let u = unknowns.len();
    let mut span = Echelon::new();
    let inner = Basis::new(bx.monomials(nvars));
    let mut out = Vec::new();
    for x in kernel(&columns) {
        let mut comps = vec![Vec::new(); m];
        for (k, c) in x {
            comps[k / u].push((unknowns[k % u].clone(), c));
        }
        let s: Vec<Polynomial> = comps
            .into_iter()
            .map(|t| bx.truncate(&Polynomial::from_terms(nvars, t)))
            .collect();
        let mut key = SparseVector::new();
        for (i, p) in s.iter().enumerate() {
            key.extend(inner.coords(p, i * inner.len()));
        }
        if !key.is_empty() && span.insert(&key) {
            out.push(s);
        }
    }
    out
}

/// `dim_Q T^1(A/B, A/(t^L, m_z^{d+1})A)` by linear algebra on the box.
///
/// `base_order` computes the same module for the presentation over
/// `Q[t]/t^base_order` instead (it must be at least `bx.order`).
/// Syzygies are found among relations whose entries fit the box enlarged
/// by the generator degrees.
pub fn truncated_t1_dimension(
    nvars: usize,
    gens: &[Polynomial],
    base_order: Option<u32>,
    bx: &TruncationBox,
) -> Result<usize> {
    if let Some(l) = base_order {
        if l < bx.order {
            return Err(Error::BoxTooSmall(format!(
                "base order {l} is below the box t-order {}",
                bx.order
            )));
        }
    }
    let m = gens.len();
    if m == 0 {
        return Ok(0);
    }
    let basis = Basis::new(bx.monomials(nvars));
    let v = basis.len();
    let (w, w_rows) = span_of_multiples(&basis, gens);
    let one = Rational::from_integer(1.into());

    // rank of u ↦ (Σ_i s_i u_i mod W)_s on V^m.
    let syz = if m >= 2 || base_order.is_some() {
        box_syzygies(nvars, gens, base_order, bx)
    } else {
        Vec::new()
    };
    let mut pairing = Echelon::new();
    for i in 0..m {
        for mu in &basis.monos {
            let mut img = SparseVector::new();
            for (k, s) in syz.iter().enumerate() {
                let prod = s[i].mul_term(mu, &one);
                let reduced = w.reduce_exact(&basis.coords(&prod, 0));
                for (col, c) in reduced {
                    img.insert(k * v + col, c);
                }
            }
            if !img.is_empty() {
                pairing.insert(&img);
            }
        }
    }
    let hom_rank = m * v - pairing.rank();

    // rank of derivation images together with W^m.
    let mut den = Echelon::new();
    for i in 0..m {
        for row in &w_rows {
            den.insert(&row.iter().map(|(&k, c)| (k + i * v, c.clone())).collect());
        }
    }
    for j in 0..nvars {
        let partials: Vec<Polynomial> = gens.iter().map(|g| g.derivative(j)).collect();
        for mu in &basis.monos {
            let mut img = SparseVector::new();
            for (i, d) in partials.iter().enumerate() {
                img.extend(basis.coords(&d.mul_term(mu, &one), i * v));
            }
            img.retain(|_, c| !c.is_zero());
            if !img.is_empty() {
                den.insert(&img);
            }
        }
    }
    // Derivation images pair to zero, so they lie in the kernel.
    debug_assert!(den.rank() <= hom_rank);
    Ok(hom_rank - den.rank())
}

/// Outcome of [`truncated_iso_search`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoSearch {
    Found(MapTruncation),
    /// No map was found inside the box; this proves nothing.
    Inconclusive,
}

/// Searches order by order for `h ≡ id mod t` carrying `(f')` into `(f)`
/// modulo `t^L`, with corrections and cofactors inside the box.
///
/// At order `l` it solves `f'_i(h) + Σ_j ∂_j f'_i(h) δ_j ≡ Σ_j β_ij f_j mod t^{l+1}`
/// for `δ` of `t`-valuation at least `(l+1)/2`, which makes the linearisation exact,
/// and replaces `h` by `h + δ`.
pub fn truncated_iso_search(pair: &FamilyPair, bx: &TruncationBox) -> Result<IsoSearch> {
    let n = pair.nvars();
    let f = pair.original().generators();
    let fp = pair.perturbed().generators();
    let m = f.len();
    let one = Rational::one();
    let mut h: Vec<Polynomial> = (0..n).map(|j| Polynomial::z(n, j)).collect();
    for l in pair.k().min(bx.order)..bx.order {
        let bound = l + 1;
        let min_val = bound.div_ceil(2).max(1);
        let monos = TruncationBox {
            order: bound,
            degree: bx.degree,
        }
        .monomials(n);
        let images: Vec<Polynomial> = fp.iter().map(|p| p.substitute(&h, n, Some(bound))).collect();
        let partials: Vec<Vec<Polynomial>> = fp
            .iter()
            .map(|p| (0..n).map(|j| p.derivative(j).substitute(&h, n, Some(bound))).collect())
            .collect();

        let mut index: HashMap<(usize, Monomial), usize> = HashMap::new();
        let mut coords = |i: usize, p: &Polynomial, out: &mut SparseVector| {
            for (mono, c) in p.terms() {
                let next = index.len();
                let k = *index.entry((i, mono.clone())).or_insert(next);
                let e = out.entry(k).or_insert_with(Rational::zero);
                *e += c;
                if e.is_zero() {
                    out.remove(&k);
                }
            }
        };
        let mut columns: Vec<SparseVector> = Vec::new();
        let mut delta_cols: Vec<(usize, Monomial)> = Vec::new();
        for j in 0..n {
            for mu in monos.iter().filter(|mu| mu.t_exponent() >= min_val) {
                let mut col = SparseVector::new();
                for (i, row) in partials.iter().enumerate() {
                    coords(i, &row[j].mul_term(mu, &one).truncate(bound), &mut col);
                }
                columns.push(col);
                delta_cols.push((j, mu.clone()));
            }
        }
        for i in 0..m {
            for fj in f {
                for mu in &monos {
                    let mut col = SparseVector::new();
                    coords(i, &fj.mul_term(mu, &-one.clone()).truncate(bound), &mut col);
                    columns.push(col);
                }
            }
        }
        let mut rhs = SparseVector::new();
        for (i, p) in images.iter().enumerate() {
            coords(i, &p.neg(), &mut rhs);
        }
        let mut echelon = Echelon::new();
        for (label, col) in columns.iter().enumerate() {
            echelon.insert_labelled(col, label);
        }
        let Some(x) = echelon.solve(&rhs) else {
            return Ok(IsoSearch::Inconclusive);
        };
        for (label, c) in x {
            if let Some((j, mu)) = delta_cols.get(label) {
                h[*j] = &h[*j] + &Polynomial::term(mu.clone(), c);
            }
        }
        for p in h.iter_mut() {
            *p = p.truncate(bound);
        }
    }
    let map = MapTruncation::new(h, Window::new(bx.order, None));
    Ok(if map.is_invertible_mod_t() {
        IsoSearch::Found(map)
    } else {
        IsoSearch::Inconclusive
    })
}
