//! Order-by-order lifting: equations, relations and isomorphisms between two
//! families that agree modulo `t^k`, plus the polynomial system whose
//! solutions are the coordinate changes.

use crate::cotangent::Presentation;
use crate::determinacy::{determinacy_report, divisor_report, t2_stable_index};
use crate::error::{Error, Result};
use crate::groebner::{
    buchberger_with, membership_certificate_with, module_membership_certificate, GroebnerBasis, ModuleElement,
};
use crate::linalg::{rank, SparseVector};
use crate::ring::{combination, Monomial, MonomialOrder, Polynomial, Ring};

/// A divisor `w^r`: variable index of `w` and the power `r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Divisor {
    pub variable: usize,
    pub power: u32,
}

/// The monomial ideal `(t^order)`, or `(t^order w^r)` in the divisor case.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Window {
    pub order: u32,
    pub divisor: Option<Divisor>,
}

impl Window {
    pub fn new(order: u32, divisor: Option<Divisor>) -> Self {
        Window { order, divisor }
    }

    pub fn with_order(&self, order: u32) -> Window {
        Window { order, ..*self }
    }

    pub fn monomial(&self, nvars: usize) -> Monomial {
        let t = Monomial::t_power(nvars, self.order);
        match self.divisor {
            None => t,
            Some(d) => t.mul(&Monomial::z_power(nvars, d.variable, d.power)),
        }
    }

    pub fn generator(&self, nvars: usize) -> Polynomial {
        Polynomial::monomial(self.monomial(nvars))
    }

    /// Drops every term lying in the window ideal.
    pub fn reduce(&self, p: &Polynomial) -> Polynomial {
        let m = self.monomial(p.nvars());
        Polynomial::from_terms(p.nvars(), p.terms().iter().filter(|(x, _)| !m.divides(x)).cloned())
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        let m = self.monomial(p.nvars());
        p.terms().iter().all(|(x, _)| m.divides(x))
    }
}

/// Determinacy exponents used by a lifting run: `t^n` (and `w^m` with a divisor).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LiftBounds {
    pub n: u32,
    pub m: u32,
}

/// Two presentations with the same variables and generator count that agree
/// modulo `t^k` (modulo `t^k w^r` with a divisor).
#[derive(Clone, Debug)]
pub struct FamilyPair {
    original: Presentation,
    perturbed: Presentation,
    k: u32,
    divisor: Option<Divisor>,
    /// `f'_i = Σ_j forward[i][j] f_j + forward[i][m] * t^k [w^r]`.
    forward: Vec<Vec<Polynomial>>,
    /// `f_i = Σ_j backward[i][j] f'_j + backward[i][m] * t^k [w^r]`.
    backward: Vec<Vec<Polynomial>>,
}

fn with_window(gens: &[Polynomial], window: &Window, nvars: usize) -> Vec<Polynomial> {
    let mut out = gens.to_vec();
    out.push(window.generator(nvars));
    out
}

impl FamilyPair {
    pub fn new(original: Presentation, perturbed: Presentation, k: u32, divisor: Option<Divisor>) -> Result<Self> {
        let n = original.nvars();
        if perturbed.nvars() != n {
            return Err(Error::ContextMismatch {
                left: n,
                right: perturbed.nvars(),
            });
        }
        if original.generators().len() != perturbed.generators().len() {
            return Err(Error::Invalid(format!(
                "original has {} generators, perturbed has {}",
                original.generators().len(),
                perturbed.generators().len()
            )));
        }
        if k == 0 {
            return Err(Error::Invalid("matching order k must be at least 1".into()));
        }
        if original.base_order().is_some() || perturbed.base_order().is_some() {
            return Err(Error::Invalid(
                "family pairs are defined over Q[t], not a truncation".into(),
            ));
        }
        if let Some(d) = divisor {
            if d.variable >= n {
                return Err(Error::Invalid(format!(
                    "divisor variable index {} out of range",
                    d.variable
                )));
            }
            if d.power == 0 {
                return Err(Error::Invalid("divisor power r must be at least 1".into()));
            }
        }
        let window = Window::new(k, divisor);
        let limits = *original.limits();
        let certify = |from: &[Polynomial], into: &[Polynomial], label: &str| -> Result<Vec<Vec<Polynomial>>> {
            let gens = with_window(into, &window, n);
            from.iter()
                .enumerate()
                .map(|(i, p)| {
                    membership_certificate_with(p, &gens, &limits)?.ok_or_else(|| Error::Hypothesis {
                        reason: format!(
                            "{label} generator {} does not agree with the other family modulo the matching window",
                            i + 1
                        ),
                        witness: vec![p.to_string()],
                    })
                })
                .collect()
        };
        let forward = certify(perturbed.generators(), original.generators(), "perturbed")?;
        let backward = certify(original.generators(), perturbed.generators(), "original")?;
        Ok(FamilyPair {
            original,
            perturbed,
            k,
            divisor,
            forward,
            backward,
        })
    }

    pub fn original(&self) -> &Presentation {
        &self.original
    }

    pub fn perturbed(&self) -> &Presentation {
        &self.perturbed
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn divisor(&self) -> Option<Divisor> {
        self.divisor
    }

    pub fn nvars(&self) -> usize {
        self.original.nvars()
    }

    pub fn window(&self, order: u32) -> Window {
        Window::new(order, self.divisor)
    }

    /// Cofactors expressing each `f'_i` through `(f) + t^k [w^r]`.
    pub fn forward_certificate(&self) -> &[Vec<Polynomial>] {
        &self.forward
    }

    /// Cofactors expressing each `f_i` through `(f') + t^k [w^r]`.
    pub fn backward_certificate(&self) -> &[Vec<Polynomial>] {
        &self.backward
    }
}

/// Determinacy exponents for `pair.original()`: `N` from the determinacy report,
/// or `(max(N, N_2), M)` from the divisor report.
pub fn lift_bounds(pair: &FamilyPair, cap: u32) -> Result<LiftBounds> {
    match pair.divisor {
        None => Ok(LiftBounds {
            n: determinacy_report(&pair.original, cap)?.n,
            m: 0,
        }),
        Some(d) => {
            let rep = divisor_report(&pair.original, d.variable, cap)?;
            let n2 = t2_stable_index(&pair.original, cap)?;
            Ok(LiftBounds {
                n: rep.n.max(n2),
                m: rep.m,
            })
        }
    }
}

/// Rejects `k <= 4N`, and `r <= 4M` with a divisor.
pub fn check_threshold(pair: &FamilyPair, bounds: &LiftBounds) -> Result<()> {
    if pair.k <= 4 * bounds.n {
        return Err(Error::Hypothesis {
            reason: format!("matching order k = {} does not exceed 4N = {}", pair.k, 4 * bounds.n),
            witness: vec![],
        });
    }
    if let Some(d) = pair.divisor {
        if d.power <= 4 * bounds.m {
            return Err(Error::Hypothesis {
                reason: format!("divisor power r = {} does not exceed 4M = {}", d.power, 4 * bounds.m),
                witness: vec![],
            });
        }
    }
    Ok(())
}

/// Images of the fibre variables, reduced modulo a window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapTruncation {
    images: Vec<Polynomial>,
    window: Window,
}

impl MapTruncation {
    pub fn new(images: Vec<Polynomial>, window: Window) -> Self {
        let images = images.iter().map(|p| window.reduce(p)).collect();
        MapTruncation { images, window }
    }

    pub fn identity(nvars: usize, window: Window) -> Self {
        Self::new((0..nvars).map(|j| Polynomial::z(nvars, j)).collect(), window)
    }

    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    pub fn order(&self) -> u32 {
        self.window.order
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn nvars(&self) -> usize {
        self.images.len()
    }

    /// `p(images)` without any reduction.
    pub fn apply_exact(&self, p: &Polynomial) -> Polynomial {
        p.substitute(&self.images, self.nvars(), None)
    }

    /// `p(images)` reduced modulo the window.
    pub fn apply(&self, p: &Polynomial) -> Polynomial {
        let bound = self.window.divisor.is_none().then_some(self.window.order);
        self.window.reduce(&p.substitute(&self.images, self.nvars(), bound))
    }

    /// The same map modulo the smaller window of `order`.
    pub fn restrict(&self, order: u32) -> MapTruncation {
        let w = self.window.with_order(order.min(self.window.order));
        Self::new(self.images.clone(), w)
    }

    /// The same map modulo `t^order` alone, forgetting any divisor factor.
    pub fn truncate_t(&self, order: u32) -> MapTruncation {
        Self::new(self.images.clone(), Window::new(order.min(self.window.order), None))
    }

    /// Largest `a <= order` with every image congruent to its variable modulo `t^a`.
    pub fn agreement_order(&self) -> u32 {
        let n = self.nvars();
        (0..n)
            .filter_map(|j| (&self.images[j] - &Polynomial::z(n, j)).t_valuation())
            .min()
            .unwrap_or(self.window.order)
            .min(self.window.order)
    }

    /// Whether every `image_j - z_j` lies in `window`.
    pub fn agrees_with_identity(&self, window: &Window) -> bool {
        let n = self.nvars();
        (0..n).all(|j| window.contains(&(&self.images[j] - &Polynomial::z(n, j))))
    }

    /// Whether the map modulo `t` fixes the origin with invertible linear part.
    pub fn is_invertible_mod_t(&self) -> bool {
        let n = self.nvars();
        let mut rows = Vec::with_capacity(n);
        for p in &self.images {
            let mut row = SparseVector::new();
            for (m, c) in p.terms() {
                if m.t_exponent() != 0 {
                    continue;
                }
                match m.z_degree() {
                    0 => return false,
                    1 => {
                        let j = m.z_exponents().iter().position(|&e| e == 1).unwrap();
                        row.insert(j, c.clone());
                    }
                    _ => {}
                }
            }
            rows.push(row);
        }
        rank(&rows) == n
    }
}

/// `g` with `f_i + t^k g_i ∈ (f')` exactly; `g_i ∈ (w^r)` with a divisor.
pub fn lift_equations(pair: &FamilyPair) -> Result<Vec<Polynomial>> {
    let n = pair.nvars();
    let m = pair.original.generators().len();
    let wr = match pair.divisor {
        None => Polynomial::one(n),
        Some(d) => Polynomial::monomial(Monomial::z_power(n, d.variable, d.power)),
    };
    let mut out = Vec::with_capacity(m);
    for (i, row) in pair.backward.iter().enumerate() {
        let g = (&row[m] * &wr).neg();
        let lifted = &pair.original.generators()[i] + &g.mul_t_power(pair.k);
        if lifted != combination(n, &row[..m], pair.perturbed.generators()) {
            return Err(Error::Verification {
                index: i,
                reason: "lifted equation does not expand to its certificate".into(),
            });
        }
        out.push(g);
    }
    Ok(out)
}

/// Corrects `a` with `Σ a_i f_i ∈ (t^l)` to an exact relation `a + t^l a'`.
pub fn lift_relation(a: &[Polynomial], pres: &Presentation, l: u32) -> Result<Vec<Polynomial>> {
    let f = pres.generators();
    let n = pres.nvars();
    if a.len() != f.len() {
        return Err(Error::Invalid(format!(
            "{} coefficients for {} generators",
            a.len(),
            f.len()
        )));
    }
    let sum = combination(n, a, f);
    let u = sum.div_t_power(l).ok_or_else(|| Error::Hypothesis {
        reason: format!("Σ a_i f_i is not divisible by t^{l}"),
        witness: vec![sum.to_string()],
    })?;
    let c = membership_certificate_with(&u, f, pres.limits())?.ok_or_else(|| Error::Hypothesis {
        reason: "Σ a_i f_i / t^l is not in (f): t is a zerodivisor on the family".into(),
        witness: vec![u.to_string()],
    })?;
    let out: Vec<Polynomial> = a.iter().zip(&c).map(|(ai, ci)| ai - &ci.mul_t_power(l)).collect();
    let check = combination(n, &out, f);
    if !check.is_zero() {
        return Err(Error::Verification {
            index: 0,
            reason: "corrected relation does not expand to zero".into(),
        });
    }
    Ok(out)
}

/// One correction of a lifting run: `φ_{order+1} = φ_order - θ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepRecord {
    pub order: u32,
    /// The residual already vanished and no correction was needed.
    pub skipped: bool,
    pub theta: Vec<Polynomial>,
}

fn window_basis(f: &[Polynomial], window: &Window, pres: &Presentation) -> Result<GroebnerBasis> {
    buchberger_with(
        &with_window(f, window, pres.nvars()),
        &MonomialOrder::block(),
        pres.limits(),
    )
}

fn correction(
    pair: &FamilyPair,
    bounds: &LiftBounds,
    f_tilde: &[Polynomial],
    h: &MapTruncation,
) -> Result<(MapTruncation, StepRecord)> {
    let n = pair.nvars();
    let l = h.order();
    let f = pair.original.generators();
    let next = pair.window(l + 1);
    let lifted = h.window.with_order(l + 1);
    let h_wide = MapTruncation {
        images: h.images.clone(),
        window: lifted,
    };
    let rho: Vec<Polynomial> = f_tilde.iter().map(|p| h_wide.apply(p)).collect();
    let gb = window_basis(f, &next, &pair.original)?;
    if rho.iter().all(|r| gb.contains(r)) {
        let record = StepRecord {
            order: l,
            skipped: true,
            theta: vec![Polynomial::zero(n); n],
        };
        return Ok((MapTruncation::new(h.images.clone(), next), record));
    }

    let mut scale = Monomial::t_power(n, l - 2 * bounds.n);
    if let Some(d) = pair.divisor {
        scale = scale.mul(&Monomial::z_power(n, d.variable, d.power - 2 * bounds.m));
    }
    let scale = Polynomial::monomial(scale);
    let m = f.len();
    let mut gens: Vec<ModuleElement> = (0..n)
        .map(|j| ModuleElement::new(f.iter().map(|fi| &scale * &fi.derivative(j)).collect()))
        .collect();
    for i in 0..m {
        for fk in f {
            let mut e = ModuleElement::zero(m, n);
            e.components[i] = fk.clone();
            gens.push(e);
        }
        let mut e = ModuleElement::zero(m, n);
        e.components[i] = next.generator(n);
        gens.push(e);
    }
    let target = ModuleElement::new(rho.clone());
    let unsolvable = |rho: &[Polynomial]| Error::UnsolvableStep {
        order: l,
        residual: rho.iter().map(|r| gb.reduce(r).to_string()).collect(),
    };
    let c = module_membership_certificate(&target, &gens, pair.original.limits())?.ok_or_else(|| unsolvable(&rho))?;
    let theta: Vec<Polynomial> = c[..n].iter().map(|cj| next.reduce(&(&scale * cj))).collect();
    let images = h.images.iter().zip(&theta).map(|(x, th)| x - th).collect();
    let h_new = MapTruncation::new(images, next);
    let residual: Vec<Polynomial> = f_tilde.iter().map(|p| h_new.apply(p)).collect();
    if !residual.iter().all(|r| gb.contains(r)) {
        return Err(unsolvable(&residual));
    }
    Ok((
        h_new,
        StepRecord {
            order: l,
            skipped: false,
            theta,
        },
    ))
}

/// One lifting step from order `l` to `l + 1` for a map with
/// `h(f_i + t^k g_i) ∈ (f) + t^l [w^r]`.
pub fn lift_iso_step(h: &MapTruncation, pair: &FamilyPair, bounds: &LiftBounds) -> Result<(MapTruncation, StepRecord)> {
    if h.nvars() != pair.nvars() {
        return Err(Error::ContextMismatch {
            left: pair.nvars(),
            right: h.nvars(),
        });
    }
    if h.order() < pair.k {
        return Err(Error::Invalid(format!(
            "step order {} is below k = {}",
            h.order(),
            pair.k
        )));
    }
    if h.window.divisor != pair.divisor {
        return Err(Error::Invalid("map window and pair divisor differ".into()));
    }
    check_threshold(pair, bounds)?;
    let f_tilde = precondition(pair, h)?;
    correction(pair, bounds, &f_tilde, h)
}

fn precondition(pair: &FamilyPair, h: &MapTruncation) -> Result<Vec<Polynomial>> {
    let n = pair.nvars();
    let f_tilde: Vec<Polynomial> = lift_equations(pair)?
        .iter()
        .zip(pair.original.generators())
        .map(|(g, f)| f + &g.mul_t_power(pair.k))
        .collect();
    let gb = window_basis(pair.original.generators(), h.window(), &pair.original)?;
    for (i, p) in f_tilde.iter().enumerate() {
        let r = gb.reduce(&h.apply(p));
        if !r.is_zero() {
            return Err(Error::Hypothesis {
                reason: format!(
                    "the map does not carry lifted equation {} into (f) at order {}",
                    i + 1,
                    h.order()
                ),
                witness: vec![r.to_string()],
            });
        }
    }
    debug_assert!(f_tilde.iter().all(|p| p.nvars() == n));
    Ok(f_tilde)
}

/// A lifting run: the stages `φ_k, φ_{k+1}, ...` and the corrections between them.
#[derive(Clone, Debug)]
pub struct LiftSession {
    pair: FamilyPair,
    bounds: LiftBounds,
    f_tilde: Vec<Polynomial>,
    stages: Vec<MapTruncation>,
    steps: Vec<StepRecord>,
}

impl LiftSession {
    pub fn new(pair: FamilyPair, bounds: LiftBounds) -> Result<Self> {
        Self::with_initial(pair, bounds, None)
    }

    /// Starts from given images of the fibre variables instead of the identity.
    pub fn with_initial(pair: FamilyPair, bounds: LiftBounds, initial: Option<Vec<Polynomial>>) -> Result<Self> {
        check_threshold(&pair, &bounds)?;
        let n = pair.nvars();
        let window = pair.window(pair.k);
        let start = match initial {
            None => MapTruncation::identity(n, window),
            Some(images) => {
                if images.len() != n || images.iter().any(|p| p.nvars() != n) {
                    return Err(Error::ContextMismatch {
                        left: n,
                        right: images.len(),
                    });
                }
                MapTruncation::new(images, window)
            }
        };
        let f_tilde = precondition(&pair, &start)?;
        Ok(LiftSession {
            pair,
            bounds,
            f_tilde,
            stages: vec![start],
            steps: Vec::new(),
        })
    }

    pub fn pair(&self) -> &FamilyPair {
        &self.pair
    }

    pub fn bounds(&self) -> LiftBounds {
        self.bounds
    }

    /// The lifted equations `f_i + t^k g_i`.
    pub fn lifted_equations(&self) -> &[Polynomial] {
        &self.f_tilde
    }

    pub fn order(&self) -> u32 {
        self.current().order()
    }

    pub fn current(&self) -> &MapTruncation {
        self.stages.last().unwrap()
    }

    pub fn stages(&self) -> &[MapTruncation] {
        &self.stages
    }

    pub fn stage(&self, order: u32) -> Option<&MapTruncation> {
        order.checked_sub(self.pair.k).and_then(|i| self.stages.get(i as usize))
    }

    pub fn steps(&self) -> &[StepRecord] {
        &self.steps
    }

    pub fn step(&mut self) -> Result<&MapTruncation> {
        let (next, record) = correction(&self.pair, &self.bounds, &self.f_tilde, self.current())?;
        self.stages.push(next);
        self.steps.push(record);
        Ok(self.current())
    }

    pub fn run_to(&mut self, order: u32) -> Result<()> {
        while self.order() < order {
            self.step()?;
        }
        Ok(())
    }

    /// `ψ_l = φ_{max(k, l + 2N + 1)}` modulo `t^l`, when that stage exists.
    pub fn psi(&self, l: u32) -> Option<MapTruncation> {
        psi_from(&self.stages, self.pair.k, self.bounds.n, l)
    }
}

fn psi_from(stages: &[MapTruncation], k: u32, n: u32, l: u32) -> Option<MapTruncation> {
    let source = (l + 2 * n + 1).max(k);
    stages.get((source - k) as usize).map(|s| s.truncate_t(l))
}

/// Exact evidence that a map carries `(f')` into `(f)` modulo a window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftCertificate {
    pub window: Window,
    /// `h(f'_i) = Σ_j quotients[i][j] f_j + cofactors[i] * t^L`.
    pub quotients: Vec<Vec<Polynomial>>,
    pub cofactors: Vec<Polynomial>,
    pub agreement_order: u32,
    pub invertible_mod_t: bool,
    /// Exponents used by the producing run; absent for a bare verification.
    pub bounds: Option<LiftBounds>,
    pub steps: Vec<StepRecord>,
    /// `φ_k, φ_{k+1}, ...` of the producing run.
    pub stages: Vec<MapTruncation>,
}

fn fail(index: usize, reason: impl Into<String>) -> Error {
    Error::Verification {
        index,
        reason: reason.into(),
    }
}

impl LiftCertificate {
    /// Re-expands every recorded identity exactly. Uses arithmetic only.
    pub fn check(&self, map: &MapTruncation, pair: &FamilyPair) -> Result<()> {
        let n = pair.nvars();
        if map.window != self.window || self.window.divisor.is_some() {
            return Err(fail(0, "certificate window does not match the map"));
        }
        let f = pair.original.generators();
        let fp = pair.perturbed.generators();
        if self.quotients.len() != fp.len() || self.cofactors.len() != fp.len() {
            return Err(fail(0, "certificate has the wrong number of entries"));
        }
        let wg = self.window.generator(n);
        for (i, p) in fp.iter().enumerate() {
            if self.quotients[i].len() != f.len() {
                return Err(fail(i, "quotient row has the wrong length"));
            }
            let lhs = map.apply_exact(p);
            let rhs = &combination(n, &self.quotients[i], f) + &(&self.cofactors[i] * &wg);
            if lhs != rhs {
                return Err(fail(
                    i,
                    "image of the perturbed generator does not expand to its certificate",
                ));
            }
        }
        if map.is_invertible_mod_t() != self.invertible_mod_t || !self.invertible_mod_t {
            return Err(fail(0, "map is not invertible modulo t"));
        }
        if map.agreement_order() != self.agreement_order {
            return Err(fail(0, "recorded agreement order is wrong"));
        }
        let Some(b) = self.bounds else {
            return Ok(());
        };
        if self.stages.is_empty() {
            return Ok(());
        }
        if self.steps.len() + 1 != self.stages.len() {
            return Err(fail(0, "step trace and stages have inconsistent lengths"));
        }
        let k = pair.k;
        let agreement = agreement_window(pair, &b, k);
        if !map.agrees_with_identity(&agreement) {
            return Err(fail(0, "map does not agree with the identity on the agreement window"));
        }
        for (s, stage) in self.stages.iter().enumerate() {
            if stage.order() != k + s as u32 || stage.window.divisor != pair.divisor {
                return Err(fail(s, "stage has the wrong order"));
            }
        }
        for (s, pair_of) in self.stages.windows(2).enumerate() {
            let l = pair_of[0].order();
            let step = &self.steps[s];
            let recomputed = MapTruncation::new(
                pair_of[0]
                    .images
                    .iter()
                    .zip(&step.theta)
                    .map(|(x, th)| x - th)
                    .collect(),
                pair_of[1].window,
            );
            if recomputed != pair_of[1] {
                return Err(fail(s, "stage is not the previous stage minus its correction"));
            }
            let w = agreement_window(pair, &b, l);
            let diff_ok = pair_of[0]
                .images
                .iter()
                .zip(&pair_of[1].images)
                .all(|(a, c)| w.contains(&(a - c)));
            if !diff_ok {
                return Err(fail(
                    s,
                    format!("stages at orders {l} and {} disagree modulo t^(l-2N)", l + 1),
                ));
            }
        }
        let top = self.window.order;
        let mut previous: Option<MapTruncation> = None;
        for l in 1..=top {
            let Some(psi) = psi_from(&self.stages, k, b.n, l) else {
                return Err(fail(0, format!("stage needed for psi_{l} is missing")));
            };
            if let Some(p) = &previous {
                if psi.truncate_t(l - 1) != *p {
                    return Err(fail(0, format!("psi_{l} does not reduce to psi_{}", l - 1)));
                }
            }
            previous = Some(psi);
        }
        if previous.as_ref() != Some(map) {
            return Err(fail(0, "map is not the top of the psi tower"));
        }
        Ok(())
    }
}

/// `t^{l - 2N} [w^{r - 2M}]`.
fn agreement_window(pair: &FamilyPair, b: &LiftBounds, l: u32) -> Window {
    Window::new(
        l.saturating_sub(2 * b.n),
        pair.divisor.map(|d| Divisor {
            variable: d.variable,
            power: d.power.saturating_sub(2 * b.m),
        }),
    )
}

fn certify(map: &MapTruncation, pair: &FamilyPair) -> Result<(Vec<Vec<Polynomial>>, Vec<Polynomial>)> {
    let n = pair.nvars();
    let window = map.window;
    let f = pair.original.generators();
    let gens = with_window(f, &window, n);
    let mut quotients = Vec::new();
    let mut cofactors = Vec::new();
    for (i, p) in pair.perturbed.generators().iter().enumerate() {
        let image = map.apply_exact(p);
        let mut c = membership_certificate_with(&image, &gens, pair.original.limits())?.ok_or_else(|| {
            fail(
                i,
                format!("image is not in (f) modulo the window of order {}", window.order),
            )
        })?;
        let mut r = c.pop().unwrap();
        if window.divisor.is_none() {
            for q in c.iter_mut() {
                *q = q.truncate(window.order);
            }
            r = (&image - &combination(n, &c, f))
                .div_t_power(window.order)
                .ok_or_else(|| fail(i, "truncated quotients leave a residual below the window"))?;
        }
        quotients.push(c);
        cofactors.push(r);
    }
    Ok((quotients, cofactors))
}

/// A lifted isomorphism modulo `t^L` and its certificate.
#[derive(Clone, Debug)]
pub struct LiftOutcome {
    pub map: MapTruncation,
    pub certificate: LiftCertificate,
}

/// Lifts the identity to a map carrying `(f')` into `(f)` modulo `t^target`,
/// with exponents from [`lift_bounds`] at `cap`.
pub fn formal_lift(pair: &FamilyPair, target: u32, cap: u32) -> Result<LiftOutcome> {
    let bounds = lift_bounds(pair, cap)?;
    formal_lift_with(pair, target, bounds)
}

pub fn formal_lift_with(pair: &FamilyPair, target: u32, bounds: LiftBounds) -> Result<LiftOutcome> {
    if target == 0 {
        return Err(Error::Invalid("target order must be at least 1".into()));
    }
    let mut session = LiftSession::new(pair.clone(), bounds)?;
    session.run_to((target + 2 * bounds.n + 1).max(pair.k))?;
    let map = session.psi(target).expect("stage was computed");
    let (quotients, cofactors) = certify(&map, pair)?;
    let certificate = LiftCertificate {
        window: map.window,
        quotients,
        cofactors,
        agreement_order: map.agreement_order(),
        invertible_mod_t: map.is_invertible_mod_t(),
        bounds: Some(bounds),
        steps: session.steps.clone(),
        stages: session.stages.clone(),
    };
    certificate.check(&map, pair)?;
    Ok(LiftOutcome { map, certificate })
}

/// Re-derives membership certificates for `map` reduced to order `l` from
/// scratch and checks them; fails with the first generator that does not
/// expand.
pub fn verify_lift(map: &MapTruncation, pair: &FamilyPair, l: u32) -> Result<LiftCertificate> {
    if map.nvars() != pair.nvars() {
        return Err(Error::ContextMismatch {
            left: pair.nvars(),
            right: map.nvars(),
        });
    }
    if l == 0 || l > map.order() {
        return Err(Error::Invalid(format!(
            "verification order {l} is outside 1..={}",
            map.order()
        )));
    }
    let map = map.truncate_t(l);
    if !map.is_invertible_mod_t() {
        return Err(fail(0, "map is not invertible modulo t"));
    }
    let (quotients, cofactors) = certify(&map, pair)?;
    let certificate = LiftCertificate {
        window: map.window,
        quotients,
        cofactors,
        agreement_order: map.agreement_order(),
        invertible_mod_t: true,
        bounds: None,
        steps: Vec::new(),
        stages: Vec::new(),
    };
    certificate.check(&map, pair)?;
    Ok(certificate)
}

/// Equations `f'_i(a_1, ..., a_n) - Σ_j b_ij f_j` in unknowns `a_i`, `b_ij`
/// appended to the fibre variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolynomialSystem {
    pub ring: Ring,
    pub base_vars: usize,
    pub unknowns: Vec<String>,
    pub equations: Vec<Polynomial>,
}

impl PolynomialSystem {
    /// Substitutes `a_i -> a[i]`, `b_ij -> b[i][j]`, keeping `t` and the fibre variables.
    pub fn residuals(&self, a: &[Polynomial], b: &[Vec<Polynomial>]) -> Result<Vec<Polynomial>> {
        let n = self.base_vars;
        let m = b.len();
        if a.len() != n || b.iter().any(|row| row.len() != m) || self.equations.len() != m {
            return Err(Error::Invalid("substitution has the wrong shape".into()));
        }
        let mut images: Vec<Polynomial> = (0..n).map(|j| Polynomial::z(n, j)).collect();
        images.extend(a.iter().cloned());
        for row in b {
            images.extend(row.iter().cloned());
        }
        Ok(self.equations.iter().map(|e| e.substitute(&images, n, None)).collect())
    }

    pub fn render(&self) -> Vec<String> {
        self.equations.iter().map(|e| self.ring.render(e)).collect()
    }
}

/// The system whose solutions `(a, b)` are maps `z -> a` carrying `(f')` into `(f)`.
pub fn emit_artin_system(pair: &FamilyPair, ring: &Ring) -> Result<PolynomialSystem> {
    let n = pair.nvars();
    if ring.nvars() != n {
        return Err(Error::ContextMismatch {
            left: n,
            right: ring.nvars(),
        });
    }
    let m = pair.original.generators().len();
    let mut names: Vec<String> = (1..=n).map(|i| format!("a{i}")).collect();
    for i in 1..=m {
        for j in 1..=m {
            names.push(format!("b{i}_{j}"));
        }
    }
    let ext = ring.extended(names);
    let total = ext.nvars();
    let a: Vec<Polynomial> = (0..n).map(|i| Polynomial::z(total, n + i)).collect();
    let f: Vec<Polynomial> = pair.original.generators().iter().map(|p| p.widen(total)).collect();
    let equations = pair
        .perturbed
        .generators()
        .iter()
        .enumerate()
        .map(|(i, fp)| {
            let b: Vec<Polynomial> = (0..m).map(|j| Polynomial::z(total, 2 * n + i * m + j)).collect();
            &fp.substitute(&a, total, None) - &combination(total, &b, &f)
        })
        .collect();
    Ok(PolynomialSystem {
        unknowns: ext.vars()[n..].to_vec(),
        ring: ext,
        base_vars: n,
        equations,
    })
}

#[cfg(test)]
mod tests;
