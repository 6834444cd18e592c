//! Cotangent cohomology `T^0, T^1, T^2` of a presented algebra
//! `A = Q[t][z]/(f)` over `B = Q[t]` (or over `B/t^L` after base change),
//! computed from the three-term Lichtenbaum–Schlessinger complex with
//! coefficients in `A` or in an ideal quotient `(N + J)/(D + J)`.
//!
//! Every module is returned as a [`ModulePresentation`]: a cokernel
//! `P^g / (relations + J P^g)` over `P = Q[t][z]`.

use crate::error::{Error, Result};
use crate::groebner::{
    buchberger_with, module_groebner, preimage, syzygy_basis_with, GroebnerBasis, Limits, ModuleElement, ModuleOrder,
    SyzygyBasis,
};
use crate::oracle::TruncationBox;
use crate::ring::{Monomial, MonomialOrder, Polynomial, Ring};

/// `A = B[z_1..z_n]/(f_1..f_m)` with `B = Q[t]`, or `B = Q[t]/t^L` when
/// `base_order` is set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    nvars: usize,
    generators: Vec<Polynomial>,
    base_order: Option<u32>,
    limits: Limits,
}

impl Presentation {
    pub fn new(nvars: usize, generators: Vec<Polynomial>) -> Result<Self> {
        for g in &generators {
            if g.nvars() != nvars {
                return Err(Error::ContextMismatch {
                    left: nvars,
                    right: g.nvars(),
                });
            }
        }
        Ok(Presentation {
            nvars,
            generators,
            base_order: None,
            limits: Limits::default(),
        })
    }

    /// Parses a comma-separated generator list in `ring`.
    pub fn parse(ring: &Ring, ideal: &str) -> Result<Self> {
        Self::new(ring.nvars(), ring.parse_list(ideal)?)
    }

    pub fn with_limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn base_order(&self) -> Option<u32> {
        self.base_order
    }

    /// The same presentation over `B/t^order`.
    pub fn base_change(&self, order: u32) -> Result<Presentation> {
        if order == 0 {
            return Err(Error::Invalid("base change order must be at least 1".into()));
        }
        let order = self.base_order.map_or(order, |o| o.min(order));
        Ok(Presentation {
            nvars: self.nvars,
            generators: self.generators.iter().map(|g| g.truncate(order)).collect(),
            base_order: Some(order),
            limits: self.limits,
        })
    }

    /// Generators of the ideal of `A` in `P = Q[t][z]` (including `t^L` after base change).
    pub fn ideal(&self) -> Vec<Polynomial> {
        let mut out = self.generators.clone();
        if let Some(l) = self.base_order {
            out.push(Polynomial::t_power(self.nvars, l));
        }
        out
    }

    /// `m × n` matrix of partial derivatives.
    pub fn jacobian(&self) -> Vec<Vec<Polynomial>> {
        self.generators
            .iter()
            .map(|f| (0..self.nvars).map(|j| f.derivative(j)).collect())
            .collect()
    }

    fn zero_ambient(&self) -> Vec<ModuleElement> {
        match self.base_order {
            None => vec![],
            Some(l) => {
                let m = self.generators.len();
                (0..m)
                    .map(|i| {
                        let mut e = ModuleElement::zero(m, self.nvars);
                        e.components[i] = Polynomial::t_power(self.nvars, l);
                        e
                    })
                    .collect()
            }
        }
    }
}

pub fn base_change(pres: &Presentation, order: u32) -> Result<Presentation> {
    pres.base_change(order)
}

/// The data of the three-term complex `L_2 → L_1 → L_0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CotangentComplexData {
    pub jacobian: Vec<Vec<Polynomial>>,
    /// Relations among the generators (over `B/t^L` after base change).
    pub syzygies: SyzygyBasis,
    pub koszul: Vec<ModuleElement>,
}

pub fn ls_complex(pres: &Presentation) -> Result<CotangentComplexData> {
    let n = pres.nvars;
    let f = &pres.generators;
    let m = f.len();
    let syzygies = match pres.base_order {
        None => syzygy_basis_with(f, &pres.limits)?,
        Some(l) => {
            let cols: Vec<ModuleElement> = f.iter().map(|g| ModuleElement::new(vec![g.clone()])).collect();
            let target = [ModuleElement::new(vec![Polynomial::t_power(n, l)])];
            let mut gens = preimage(n, 1, &cols, &target, &pres.limits)?;
            // Multiples of t^L e_i vanish over B/t^L.
            gens.retain(|g| !g.components.iter().all(|c| c.t_valuation().is_none_or(|v| v >= l)));
            SyzygyBasis { generators: gens }
        }
    };
    let mut koszul = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            let mut e = ModuleElement::zero(m, n);
            e.components[i] = f[j].clone();
            e.components[j] = f[i].neg();
            koszul.push(e);
        }
    }
    Ok(CotangentComplexData {
        jacobian: pres.jacobian(),
        syzygies,
        koszul,
    })
}

/// Coefficient modules: `A` itself, or `(N + J)/(D + J)` for ideals `N ⊇ D` of `P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoefficientModule {
    Ring,
    IdealQuotient {
        numerator: Vec<Polynomial>,
        denominator: Vec<Polynomial>,
    },
}

impl CoefficientModule {
    /// `(w^s) / (t^L w^s)`; with `s = 0` this is `A/t^L A`.
    pub fn divisor_power(nvars: usize, w: usize, s: u32, order: u32) -> Self {
        let ws = Polynomial::monomial(Monomial::z_power(nvars, w, s));
        CoefficientModule::IdealQuotient {
            denominator: vec![ws.mul_t_power(order)],
            numerator: vec![ws],
        }
    }

    /// The ideal `(w^s)` of `A` as a module.
    pub fn divisor_ideal(nvars: usize, w: usize, s: u32) -> Self {
        CoefficientModule::IdealQuotient {
            numerator: vec![Polynomial::monomial(Monomial::z_power(nvars, w, s))],
            denominator: vec![],
        }
    }

    /// `A / (t^L, m_z^{d+1}) A`.
    pub fn truncation(nvars: usize, bx: &TruncationBox) -> Self {
        CoefficientModule::IdealQuotient {
            numerator: vec![Polynomial::one(nvars)],
            denominator: bx.ideal(nvars),
        }
    }
}

/// `M = P^p / K`.
struct Coefficients {
    p: usize,
    k: Vec<ModuleElement>,
}

fn coefficients(pres: &Presentation, module: &CoefficientModule) -> Result<Coefficients> {
    let n = pres.nvars;
    let j = pres.ideal();
    let rank_one =
        |ps: &[Polynomial]| -> Vec<ModuleElement> { ps.iter().map(|g| ModuleElement::new(vec![g.clone()])).collect() };
    match module {
        CoefficientModule::Ring => Ok(Coefficients { p: 1, k: rank_one(&j) }),
        CoefficientModule::IdealQuotient { numerator, denominator } => {
            let mut target = denominator.clone();
            target.extend(j.iter().cloned());
            let is_unit = numerator.len() == 1 && numerator[0].is_constant() && !numerator[0].is_zero();
            if is_unit {
                return Ok(Coefficients {
                    p: 1,
                    k: rank_one(&target),
                });
            }
            if numerator.is_empty() {
                return Ok(Coefficients { p: 0, k: vec![] });
            }
            let cols = rank_one(numerator);
            let k = preimage(n, 1, &cols, &rank_one(&target), &pres.limits)?;
            Ok(Coefficients { p: numerator.len(), k })
        }
    }
}

/// Columns of `C ⊗ I_p` for a `rows × cols` matrix `C`.
#[allow(clippy::needless_range_loop)]
fn tensor_columns(c: &[Vec<Polynomial>], rows: usize, cols: usize, p: usize, nvars: usize) -> Vec<ModuleElement> {
    let mut out = Vec::with_capacity(cols * p);
    for col in 0..cols {
        for a in 0..p {
            let mut v = ModuleElement::zero(rows * p, nvars);
            for r in 0..rows {
                v.components[r * p + a] = c[r][col].clone();
            }
            out.push(v);
        }
    }
    out
}

/// `K^{⊕copies}` inside `P^{p·copies}`.
fn direct_sum(k: &[ModuleElement], p: usize, copies: usize, nvars: usize) -> Vec<ModuleElement> {
    let mut out = Vec::with_capacity(k.len() * copies);
    for b in 0..copies {
        for e in k {
            let mut v = ModuleElement::zero(p * copies, nvars);
            for a in 0..p {
                v.components[b * p + a] = e.components[a].clone();
            }
            out.push(v);
        }
    }
    out
}

fn units(rank: usize, nvars: usize) -> Vec<ModuleElement> {
    (0..rank).map(|i| ModuleElement::unit(rank, i, nvars)).collect()
}

/// A finitely presented module `P^g / (relations + J P^g)` over `A = P/J`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModulePresentation {
    nvars: usize,
    ideal: Vec<Polynomial>,
    rank: usize,
    relations: Vec<ModuleElement>,
    embedding: Vec<ModuleElement>,
    limits: Limits,
}

impl ModulePresentation {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Relations beyond the implicit `J P^g`.
    pub fn relations(&self) -> &[ModuleElement] {
        &self.relations
    }

    /// The ideal `J` of the ring the module lives over.
    pub fn ring_ideal(&self) -> &[Polynomial] {
        &self.ideal
    }

    /// The generators as elements of the ambient free module they were cut out of.
    pub fn embedding(&self) -> &[ModuleElement] {
        &self.embedding
    }

    /// `relations ∪ J e_k`.
    pub fn full_relations(&self) -> Vec<ModuleElement> {
        let mut out = self.relations.clone();
        for k in 0..self.rank {
            for g in &self.ideal {
                let mut e = ModuleElement::zero(self.rank, self.nvars);
                e.components[k] = g.clone();
                out.push(e);
            }
        }
        out
    }

    pub fn relation_basis(&self) -> Result<GroebnerBasis> {
        module_groebner(&self.full_relations(), self.rank, &ModuleOrder::default(), &self.limits)
    }

    pub fn is_zero_module(&self) -> Result<bool> {
        if self.rank == 0 {
            return Ok(true);
        }
        let gb = self.relation_basis()?;
        Ok((0..self.rank).all(|k| gb.contains_module(&ModuleElement::unit(self.rank, k, self.nvars))))
    }

    /// Generators of `Ann(M) ⊆ P` (always containing `J`; the generators of
    /// `J` itself are omitted). The zero module gives `[1]`.
    pub fn annihilator(&self) -> Result<Vec<Polynomial>> {
        let n = self.nvars;
        let g = self.rank;
        if g == 0 {
            return Ok(vec![Polynomial::one(n)]);
        }
        let mut column = ModuleElement::zero(g * g, n);
        for k in 0..g {
            column.components[k * g + k] = Polynomial::one(n);
        }
        let target = direct_sum(&self.full_relations(), g, g, n);
        let ann: Vec<Polynomial> = preimage(n, g * g, &[column], &target, &self.limits)?
            .into_iter()
            .map(|c| c.components[0].clone())
            .collect();
        prune_ideal(&self.ideal, ann, &self.limits)
    }

    /// `Ann(M) + J` as a Gröbner basis.
    pub fn annihilator_basis(&self) -> Result<GroebnerBasis> {
        let mut gens = self.annihilator()?;
        gens.extend(self.ideal.iter().cloned());
        buchberger_with(&gens, &MonomialOrder::default(), &self.limits)
    }

    /// `dim_Q` of `M / (t^L, m_z^{d+1}) M`.
    pub fn truncated_dimension(&self, bx: &TruncationBox) -> Result<usize> {
        let n = self.nvars;
        let mut rels = self.full_relations();
        for k in 0..self.rank {
            for b in bx.ideal(n) {
                let mut e = ModuleElement::zero(self.rank, n);
                e.components[k] = b;
                rels.push(e);
            }
        }
        let gb = module_groebner(&rels, self.rank, &ModuleOrder::default(), &self.limits)?;
        let leads = gb.leading_terms();
        let monos = bx.monomials(n);
        let mut count = 0;
        for k in 0..self.rank {
            for mono in &monos {
                if !leads.iter().any(|(c, l)| *c == k && l.divides(mono)) {
                    count += 1;
                }
            }
        }
        Ok(count)
    }

    /// Generators of `{x ∈ M : t^i x = 0}` as elements of `P^g`.
    pub fn t_power_kernel(&self, i: u32) -> Result<Vec<ModuleElement>> {
        let n = self.nvars;
        let g = self.rank;
        let cols: Vec<ModuleElement> = (0..g)
            .map(|k| {
                let mut e = ModuleElement::zero(g, n);
                e.components[k] = Polynomial::t_power(n, i);
                e
            })
            .collect();
        preimage(n, g, &cols, &self.full_relations(), &self.limits)
    }
}

/// Drops generators lying in `J` or in the ideal of `J` and the remaining ones.
fn prune_ideal(j: &[Polynomial], gens: Vec<Polynomial>, limits: &Limits) -> Result<Vec<Polynomial>> {
    let jgb = buchberger_with(j, &MonomialOrder::default(), limits)?;
    let mut kept: Vec<Polynomial> = Vec::new();
    for g in gens {
        let r = jgb.reduce(&g);
        if r.is_zero() {
            continue;
        }
        let r = r.monic();
        if !kept.contains(&r) {
            kept.push(r);
        }
    }
    kept.sort_by(|a, b| {
        let la = &a.leading_term().unwrap().0;
        let lb = &b.leading_term().unwrap().0;
        MonomialOrder::default()
            .compare(la, lb)
            .then_with(|| a.len().cmp(&b.len()))
    });
    let mut k = kept.len();
    while k > 0 {
        k -= 1;
        let mut others: Vec<Polynomial> = kept
            .iter()
            .enumerate()
            .filter(|&(o, _)| o != k)
            .map(|(_, p)| p.clone())
            .collect();
        others.extend(j.iter().cloned());
        let gb = buchberger_with(&others, &MonomialOrder::default(), limits)?;
        if gb.contains(&kept[k]) {
            kept.remove(k);
        }
    }
    Ok(kept)
}

/// Presentation of `gens / den` where `den ⊆ ⟨gens⟩ ⊆ P^rank`.
fn subquotient(
    pres: &Presentation,
    rank: usize,
    gens: Vec<ModuleElement>,
    den: Vec<ModuleElement>,
) -> Result<ModulePresentation> {
    let n = pres.nvars;
    let limits = &pres.limits;
    let den_gb = module_groebner(&den, rank, &ModuleOrder::default(), limits)?;
    let mut cand: Vec<ModuleElement> = Vec::new();
    for g in gens {
        let r = den_gb.normal_form_module(&g);
        if !r.is_zero() && !cand.contains(&r) {
            cand.push(r);
        }
    }
    let mut k = cand.len();
    while k > 0 {
        k -= 1;
        let mut others: Vec<ModuleElement> = cand
            .iter()
            .enumerate()
            .filter(|&(o, _)| o != k)
            .map(|(_, v)| v.clone())
            .collect();
        others.extend(den.iter().cloned());
        let gb = module_groebner(&others, rank, &ModuleOrder::default(), limits)?;
        if gb.contains_module(&cand[k]) {
            cand.remove(k);
        }
    }
    let g = cand.len();
    let ideal = pres.ideal();
    let rel = preimage(n, rank, &cand, &den, limits)?;
    let jgb = buchberger_with(&ideal, &MonomialOrder::default(), limits)?;
    let relations = rel
        .into_iter()
        .filter(|r| !r.components.iter().all(|c| jgb.contains(c)))
        .collect();
    Ok(ModulePresentation {
        nvars: n,
        ideal,
        rank: g,
        relations,
        embedding: cand,
        limits: *limits,
    })
}

/// `T^0(A/B, M) = Der_B(A, M)`.
pub fn t0(pres: &Presentation, module: &CoefficientModule) -> Result<ModulePresentation> {
    let n = pres.nvars;
    let m = pres.generators.len();
    let c = coefficients(pres, module)?;
    let den = direct_sum(&c.k, c.p, n, n);
    let gens = if m == 0 || c.p == 0 {
        units(n * c.p, n)
    } else {
        let cols = tensor_columns(&pres.jacobian(), m, n, c.p, n);
        preimage(n, m * c.p, &cols, &direct_sum(&c.k, c.p, m, n), &pres.limits)?
    };
    subquotient(pres, n * c.p, gens, den)
}

/// `T^1(A/B, M)`: homomorphisms `J/J^2 → M` modulo derivations.
pub fn t1(pres: &Presentation, module: &CoefficientModule) -> Result<ModulePresentation> {
    let n = pres.nvars;
    let m = pres.generators.len();
    let c = coefficients(pres, module)?;
    let cx = ls_complex(pres)?;
    let syz = &cx.syzygies.generators;
    let q = syz.len();
    let gens = if q == 0 || c.p == 0 {
        units(m * c.p, n)
    } else {
        let st: Vec<Vec<Polynomial>> = syz.iter().map(|s| s.components.clone()).collect();
        let cols = tensor_columns(&st, q, m, c.p, n);
        preimage(n, q * c.p, &cols, &direct_sum(&c.k, c.p, q, n), &pres.limits)?
    };
    let mut den = tensor_columns(&cx.jacobian, m, n, c.p, n);
    den.extend(direct_sum(&c.k, c.p, m, n));
    subquotient(pres, m * c.p, gens, den)
}

/// `T^2(A/B, M) = Hom(Q/Q_0, M) / Hom(F, M)`.
pub fn t2(pres: &Presentation, module: &CoefficientModule) -> Result<ModulePresentation> {
    let n = pres.nvars;
    let m = pres.generators.len();
    let c = coefficients(pres, module)?;
    let cx = ls_complex(pres)?;
    let syz = &cx.syzygies.generators;
    let q = syz.len();
    if q == 0 || c.p == 0 {
        return subquotient(pres, 0, vec![], vec![]);
    }
    // Relations of Q/Q_0 on the syzygy generators.
    let mut q0 = cx.koszul.clone();
    q0.extend(pres.zero_ambient());
    let r = preimage(n, m, syz, &q0, &pres.limits)?;
    let gens = if r.is_empty() {
        units(q * c.p, n)
    } else {
        let rt: Vec<Vec<Polynomial>> = r.iter().map(|x| x.components.clone()).collect();
        let cols = tensor_columns(&rt, r.len(), q, c.p, n);
        preimage(
            n,
            r.len() * c.p,
            &cols,
            &direct_sum(&c.k, c.p, r.len(), n),
            &pres.limits,
        )?
    };
    let st: Vec<Vec<Polynomial>> = syz.iter().map(|s| s.components.clone()).collect();
    let mut den = tensor_columns(&st, q, m, c.p, n);
    den.extend(direct_sum(&c.k, c.p, q, n));
    subquotient(pres, q * c.p, gens, den)
}

pub fn annihilator(mp: &ModulePresentation) -> Result<Vec<Polynomial>> {
    mp.annihilator()
}

pub fn is_zero_module(mp: &ModulePresentation) -> Result<bool> {
    mp.is_zero_module()
}

/// `dim_Q T^1(A/B, A/(t^L, m_z^{d+1})A)`.
pub fn truncated_t1_dimension(pres: &Presentation, bx: &TruncationBox) -> Result<usize> {
    let module = CoefficientModule::truncation(pres.nvars, bx);
    t1(pres, &module)?.truncated_dimension(bx)
}
