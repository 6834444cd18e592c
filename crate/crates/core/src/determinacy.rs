//! Determinacy bounds: the least `N_1` with `t^{N_1} T^1 = 0`, the index
//! `N_2` at which `ker(t^i on T^2)` stabilises, their maximum `N`, and the
//! divisor variant with exponents `(N, M)` of `t^N w^M`.

use crate::cotangent::{t1, t2, CoefficientModule, ModulePresentation, Presentation};
use crate::error::{Error, Result};
use crate::groebner::{
    ideal_quotient, membership_certificate_with, radical_membership_with, GroebnerBasis, ModuleElement,
};
use crate::ring::{Monomial, MonomialOrder, Polynomial};

pub const DEFAULT_CAP: u32 = 64;

/// `t^power` (times `w^w_power` in the divisor case) lies in `Ann(T^1) + J`:
/// `Σ coefficients_i * generators_i` equals it exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnihilationWitness {
    pub element: Polynomial,
    pub generators: Vec<Polynomial>,
    pub coefficients: Vec<Polynomial>,
}

impl AnnihilationWitness {
    pub fn verify(&self) -> bool {
        let n = self.element.nvars();
        self.coefficients.len() == self.generators.len()
            && crate::ring::combination(n, &self.coefficients, &self.generators) == self.element
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeterminacyReport {
    pub n1: u32,
    pub n2: u32,
    pub n: u32,
    /// `4N + 1`, the least admissible matching order.
    pub threshold_k: u32,
    /// `2N`: lifted maps agree with the identity modulo `t^{k - 2N}`.
    pub precision_loss: u32,
    /// Generators of `Ann(T^1)` beyond the defining ideal.
    pub t1_annihilator: Vec<Polynomial>,
    pub n1_witness: AnnihilationWitness,
    /// Normal form of `t^{N_1 - 1}` modulo `Ann(T^1) + J`; nonzero, so it is not a member.
    pub n1_lower_remainder: Option<Polynomial>,
    pub t2_is_zero: bool,
    /// Whether `t` is a nonzerodivisor on `A`, i.e. `(J : t) = J`.
    pub flat: bool,
}

fn ann_generators(mp: &ModulePresentation) -> Result<(Vec<Polynomial>, GroebnerBasis)> {
    let ann = mp.annihilator()?;
    let gb = mp.annihilator_basis()?;
    Ok((ann, gb))
}

fn witness(element: Polynomial, ann: &[Polynomial], pres: &Presentation) -> Result<AnnihilationWitness> {
    let mut generators = ann.to_vec();
    generators.extend(pres.ideal());
    let coefficients = membership_certificate_with(&element, &generators, pres.limits())?
        .ok_or_else(|| Error::Invalid("annihilator basis and certificate disagree".into()))?;
    Ok(AnnihilationWitness {
        element,
        generators,
        coefficients,
    })
}

fn least_t_power(gb: &GroebnerBasis, nvars: usize, cap: u32) -> Result<u32> {
    for k in 0..=cap {
        if gb.contains(&Polynomial::t_power(nvars, k)) {
            return Ok(k);
        }
    }
    Err(Error::Hypothesis {
        reason: format!("T^1 is not annihilated by t^N for any N <= {cap}: it is not supported in t = 0"),
        witness: vec![format!("normal form of t^{cap} modulo Ann(T^1) is nonzero")],
    })
}

/// Least `N_1 <= cap` with `t^{N_1} T^1(A/B, A) = 0`.
pub fn t_power_annihilating_t1(pres: &Presentation, cap: u32) -> Result<u32> {
    let mp = t1(pres, &CoefficientModule::Ring)?;
    let (_, gb) = ann_generators(&mp)?;
    least_t_power(&gb, pres.nvars(), cap)
}

fn stable_index(mp: &ModulePresentation, cap: u32) -> Result<u32> {
    if mp.is_zero_module()? {
        return Ok(0);
    }
    let rel = mp.relation_basis()?;
    let n = mp.nvars();
    for i in 0..=cap {
        let next = mp.t_power_kernel(i + 1)?;
        let ti = Polynomial::t_power(n, i);
        if next.iter().all(|g| rel.contains_module(&g.scale(&ti))) {
            return Ok(i);
        }
    }
    Err(Error::ResourceCap(format!(
        "t-power torsion of T^2 did not stabilise below index {cap}"
    )))
}

/// Least `N_2` with `ker(t^{N_2}) = ker(t^{N_2 + 1})` on `T^2(A/B, A)`.
pub fn t2_stable_index(pres: &Presentation, cap: u32) -> Result<u32> {
    stable_index(&t2(pres, &CoefficientModule::Ring)?, cap)
}

/// Whether every generator of `ker(t^{i+1})` lies in `ker(t^{i+2})`, for `i <= upto`.
pub fn t2_kernel_chain_is_monotone(pres: &Presentation, upto: u32) -> Result<bool> {
    let mp = t2(pres, &CoefficientModule::Ring)?;
    if mp.rank() == 0 {
        return Ok(true);
    }
    let rel = mp.relation_basis()?;
    let n = mp.nvars();
    for i in 0..=upto {
        let t = Polynomial::t_power(n, i + 2);
        if !mp
            .t_power_kernel(i + 1)?
            .iter()
            .all(|g| rel.contains_module(&g.scale(&t)))
        {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `(J : t) = J`.
pub fn is_t_flat(pres: &Presentation) -> Result<bool> {
    let j = pres.ideal();
    let n = pres.nvars();
    if pres.base_order().is_some() {
        return Ok(false);
    }
    let quotient = ideal_quotient(n, &j, &Polynomial::t(n), pres.limits())?;
    let gb = crate::groebner::buchberger_with(&j, &MonomialOrder::block(), pres.limits())?;
    Ok(quotient.iter().all(|q| gb.contains(q)))
}

pub fn determinacy_report(pres: &Presentation, cap: u32) -> Result<DeterminacyReport> {
    if cap == 0 {
        return Err(Error::Invalid("cap must be at least 1".into()));
    }
    let n = pres.nvars();
    let mp = t1(pres, &CoefficientModule::Ring)?;
    let (ann, gb) = ann_generators(&mp)?;
    let n1 = least_t_power(&gb, n, cap)?;
    let n1_witness = witness(Polynomial::t_power(n, n1), &ann, pres)?;
    let n1_lower_remainder = (n1 > 0).then(|| gb.reduce(&Polynomial::t_power(n, n1 - 1)));
    let t2m = t2(pres, &CoefficientModule::Ring)?;
    let t2_is_zero = t2m.is_zero_module()?;
    let n2 = stable_index(&t2m, cap)?;
    let big_n = n1.max(n2);
    Ok(DeterminacyReport {
        n1,
        n2,
        n: big_n,
        threshold_k: 4 * big_n + 1,
        precision_loss: 2 * big_n,
        t1_annihilator: ann,
        n1_witness,
        n1_lower_remainder,
        t2_is_zero,
        flat: is_t_flat(pres)?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorReport {
    /// Index of the divisor variable `w`.
    pub variable: usize,
    pub n: u32,
    pub m: u32,
    /// Exponents `s` of the coefficient modules `(w^s)` that were checked.
    pub powers_checked: Vec<u32>,
    /// One witness per checked module that `t^N w^M` annihilates its `T^1`.
    pub witnesses: Vec<AnnihilationWitness>,
    /// Whether `t` is a nonzerodivisor on `A/(w)`.
    pub t_regular_on_divisor: bool,
    pub flat: bool,
}

/// Least `(N, M)` in lexicographic order with `t^N w^M T^1(A/B, (w^s)) = 0` for `s = 0, 1`.
pub fn divisor_report(pres: &Presentation, w: usize, cap: u32) -> Result<DivisorReport> {
    let n = pres.nvars();
    if w >= n {
        return Err(Error::Invalid(format!("divisor variable index {w} out of range")));
    }
    let powers = vec![0u32, 1];
    let mut anns = Vec::new();
    for &s in &powers {
        let mp = t1(pres, &CoefficientModule::divisor_ideal(n, w, s))?;
        anns.push(ann_generators(&mp)?);
    }
    let element = |a: u32, b: u32| {
        let mut m = Monomial::z_power(n, w, b);
        m = m.mul(&Monomial::t_power(n, a));
        Polynomial::monomial(m)
    };
    let mut found = None;
    'search: for a in 0..=cap {
        for b in 0..=cap {
            let e = element(a, b);
            if anns.iter().all(|(_, gb)| gb.contains(&e)) {
                found = Some((a, b));
                break 'search;
            }
        }
    }
    let (big_n, big_m) = found.ok_or_else(|| Error::Hypothesis {
        reason: format!("no t^N w^M with N, M <= {cap} annihilates T^1: support is not in tw = 0"),
        witness: vec![],
    })?;
    let witnesses = anns
        .iter()
        .map(|(ann, _)| witness(element(big_n, big_m), ann, pres))
        .collect::<Result<Vec<_>>>()?;

    let mut divisor_ideal = pres.ideal();
    divisor_ideal.push(Polynomial::z(n, w));
    let quotient = ideal_quotient(n, &divisor_ideal, &Polynomial::t(n), pres.limits())?;
    let dgb = crate::groebner::buchberger_with(&divisor_ideal, &MonomialOrder::block(), pres.limits())?;
    let t_regular_on_divisor = quotient.iter().all(|q| dgb.contains(q));

    Ok(DivisorReport {
        variable: w,
        n: big_n,
        m: big_m,
        powers_checked: powers,
        witnesses,
        t_regular_on_divisor,
        flat: is_t_flat(pres)?,
    })
}

/// Whether the support of `T^1(A/B, A)` lies in the zero set of the product of `cutouts`.
pub fn check_t1_support(pres: &Presentation, cutouts: &[Polynomial]) -> Result<bool> {
    let n = pres.nvars();
    let product = cutouts.iter().fold(Polynomial::one(n), |acc, c| &acc * c);
    let mp = t1(pres, &CoefficientModule::Ring)?;
    let mut gens = mp.annihilator()?;
    gens.extend(pres.ideal());
    radical_membership_with(&product, &gens, pres.limits())
}

/// Module elements of `T^2` killed by `t^i`, for inspection.
pub fn t2_torsion_generators(pres: &Presentation, i: u32) -> Result<Vec<ModuleElement>> {
    t2(pres, &CoefficientModule::Ring)?.t_power_kernel(i)
}
