//! Buchberger's algorithm on module vectors: sugar selection, Gebauer–Möller
//! pair elimination, final interreduction.

use crate::error::{Error, Result};
use crate::ring::{Monomial, Rational};

use super::vector::{ModuleOrder, Term, Vector};
use super::Limits;

/// Reduces `v` by `basis` (leading terms only unless `full`). When `quotients`
/// is given, the multiplier applied to `basis[k]` is appended to `quotients[k]`.
pub(crate) fn reduce(
    v: &Vector,
    basis: &[&Vector],
    order: &ModuleOrder,
    full: bool,
    mut quotients: Option<&mut [Vec<(Monomial, Rational)>]>,
    limits: &Limits,
) -> Result<Vector> {
    let mut done: Vec<Term> = Vec::new();
    let mut cur = v.clone();
    let mut start = 0;
    'outer: while start < cur.terms.len() {
        let (comp, mono, coeff) = {
            let lt = &cur.terms[start];
            (lt.comp, lt.mono.clone(), lt.coeff.clone())
        };
        for (k, g) in basis.iter().enumerate() {
            let gl = match g.lead() {
                Some(l) => l,
                None => continue,
            };
            if gl.comp == comp && gl.mono.divides(&mono) {
                let q = gl.mono.quotient_of(&mono);
                let c = &coeff / &gl.coeff;
                cur = cur.sub_mul_from(start, &c, &q, g, order);
                if let Some(qs) = quotients.as_deref_mut() {
                    qs[k].push((q, c));
                }
                start = 0;
                if cur.terms.len() + done.len() > limits.max_terms {
                    return Err(Error::ResourceCap(format!(
                        "intermediate vector exceeded {} terms",
                        limits.max_terms
                    )));
                }
                continue 'outer;
            }
        }
        if !full {
            break;
        }
        done.push(cur.terms[start].clone());
        start += 1;
    }
    done.extend(cur.terms.drain(start..));
    Ok(Vector { terms: done })
}

#[derive(Clone)]
struct Pair {
    i: usize,
    j: usize,
    comp: usize,
    lcm: Monomial,
    sugar: u32,
}

struct Engine<'a> {
    order: &'a ModuleOrder,
    limits: &'a Limits,
    coprime_criterion: bool,
    elems: Vec<Vector>,
    sugar: Vec<u32>,
    active: Vec<usize>,
    pairs: Vec<Pair>,
}

impl Engine<'_> {
    fn lead(&self, i: usize) -> &Term {
        self.elems[i].lead().expect("basis elements are nonzero")
    }

    fn reduce_active(&self, v: &Vector, full: bool) -> Result<Vector> {
        let basis: Vec<&Vector> = self.active.iter().map(|&i| &self.elems[i]).collect();
        reduce(v, &basis, self.order, full, None, self.limits)
    }

    fn insert(&mut self, mut h: Vector, sugar: u32) {
        h.make_monic();
        let hi = self.elems.len();
        self.elems.push(h);
        self.sugar.push(sugar);
        let (hc, hm) = {
            let l = self.lead(hi);
            (l.comp, l.mono.clone())
        };

        let candidates: Vec<Pair> = self
            .active
            .iter()
            .filter(|&&g| self.lead(g).comp == hc)
            .map(|&g| {
                let gm = &self.lead(g).mono;
                let lcm = hm.lcm(gm);
                let sh = self.sugar[hi] + lcm.total_degree() - hm.total_degree();
                let sg = self.sugar[g] + lcm.total_degree() - gm.total_degree();
                Pair {
                    i: g,
                    j: hi,
                    comp: hc,
                    lcm,
                    sugar: sh.max(sg),
                }
            })
            .collect();

        let coprime = |p: &Pair, e: &Engine| e.coprime_criterion && e.lead(p.i).mono.is_coprime(&hm);

        // Chain criterion among the new pairs.
        let mut kept: Vec<Pair> = Vec::new();
        for (idx, p) in candidates.iter().enumerate() {
            if coprime(p, self) {
                kept.push(p.clone());
                continue;
            }
            let dominated = candidates
                .iter()
                .enumerate()
                .any(|(o, q)| o != idx && q.lcm.divides(&p.lcm) && (q.lcm != p.lcm || o < idx));
            if !dominated {
                kept.push(p.clone());
            }
        }
        let kept: Vec<Pair> = kept.into_iter().filter(|p| !coprime(p, self)).collect();

        // Old pairs made redundant by the new element.
        let old = std::mem::take(&mut self.pairs);
        for p in old {
            let redundant = p.comp == hc && hm.divides(&p.lcm) && {
                let li = self.lead(p.i).mono.lcm(&hm);
                let lj = self.lead(p.j).mono.lcm(&hm);
                li != p.lcm && lj != p.lcm
            };
            if !redundant {
                self.pairs.push(p);
            }
        }
        self.pairs.extend(kept);

        let elems = &self.elems;
        self.active.retain(|&g| {
            let l = elems[g].lead().unwrap();
            !(l.comp == hc && hm.divides(&l.mono))
        });
        self.active.push(hi);
    }

    fn select(&mut self) -> Option<Pair> {
        let order = self.order;
        let best = self
            .pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                a.sugar
                    .cmp(&b.sugar)
                    .then_with(|| order.compare(a.comp, &a.lcm, b.comp, &b.lcm))
                    .then_with(|| (a.i, a.j).cmp(&(b.i, b.j)))
            })
            .map(|(k, _)| k)?;
        Some(self.pairs.swap_remove(best))
    }

    fn s_vector(&self, p: &Pair) -> Vector {
        let a = &self.elems[p.i];
        let b = &self.elems[p.j];
        let la = a.lead().unwrap();
        let lb = b.lead().unwrap();
        let ma = la.mono.quotient_of(&p.lcm);
        let mb = lb.mono.quotient_of(&p.lcm);
        let sa = a.mul_monomial(&ma);
        let c = &la.coeff / &lb.coeff;
        sa.sub_mul(&c, &mb, b, self.order)
    }
}

/// Reduced Gröbner basis of the submodule generated by `gens`, sorted by
/// ascending leading term. Every returned element is monic.
pub(crate) fn groebner(gens: &[Vector], order: &ModuleOrder, limits: &Limits) -> Result<Vec<Vector>> {
    let rank_one = gens.iter().all(|g| g.terms.iter().all(|t| t.comp == 0));
    let mut eng = Engine {
        order,
        limits,
        coprime_criterion: rank_one && order.split.is_none(),
        elems: Vec::new(),
        sugar: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
    };
    for g in gens {
        let h = eng.reduce_active(g, false)?;
        if !h.is_zero() {
            let s = g.sugar();
            eng.insert(h, s);
        }
    }
    let mut processed = 0usize;
    while let Some(p) = eng.select() {
        processed += 1;
        if processed > limits.max_pairs {
            return Err(Error::ResourceCap(format!(
                "S-pair budget of {} exhausted",
                limits.max_pairs
            )));
        }
        let s = eng.s_vector(&p);
        let h = eng.reduce_active(&s, false)?;
        if !h.is_zero() {
            let sugar = p.sugar.max(h.sugar());
            eng.insert(h, sugar);
        }
    }

    let mut basis: Vec<Vector> = eng.active.iter().map(|&i| eng.elems[i].clone()).collect();
    basis.sort_by(|a, b| {
        let (la, lb) = (a.lead().unwrap(), b.lead().unwrap());
        order.compare(la.comp, &la.mono, lb.comp, &lb.mono)
    });
    let mut out = Vec::with_capacity(basis.len());
    for k in 0..basis.len() {
        let others: Vec<&Vector> = basis
            .iter()
            .enumerate()
            .filter(|&(o, _)| o != k)
            .map(|(_, v)| v)
            .collect();
        let lead = basis[k].terms[0].clone();
        let tail = Vector {
            terms: basis[k].terms[1..].to_vec(),
        };
        let mut r = reduce(&tail, &others, order, true, None, limits)?;
        r.terms.insert(0, lead);
        r.make_monic();
        out.push(r);
    }
    Ok(out)
}
