use std::cmp::Ordering;

use smallvec::SmallVec;

/// Exponent vector of a monomial `t^a * z_1^b_1 * ... * z_n^b_n`.
///
/// Slot 0 always holds the exponent of the base parameter `t`; slots
/// `1..=n` hold the fibre variables in ring order.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial {
    exps: SmallVec<[u32; 6]>,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: SmallVec::from_elem(0, nvars + 1),
        }
    }

    pub fn from_exponents(t: u32, z: &[u32]) -> Self {
        let mut exps = SmallVec::with_capacity(z.len() + 1);
        exps.push(t);
        exps.extend_from_slice(z);
        Monomial { exps }
    }

    pub fn t_power(nvars: usize, e: u32) -> Self {
        let mut m = Self::one(nvars);
        m.exps[0] = e;
        m
    }

    /// `z_i^e` with `i` counted from zero among the fibre variables.
    pub fn z_power(nvars: usize, i: usize, e: u32) -> Self {
        let mut m = Self::one(nvars);
        m.exps[i + 1] = e;
        m
    }

    pub fn nvars(&self) -> usize {
        self.exps.len() - 1
    }

    pub fn t_exponent(&self) -> u32 {
        self.exps[0]
    }

    pub fn z_exponents(&self) -> &[u32] {
        &self.exps[1..]
    }

    pub(crate) fn raw(&self) -> &[u32] {
        &self.exps
    }

    pub(crate) fn raw_mut(&mut self) -> &mut [u32] {
        &mut self.exps
    }

    pub fn z_degree(&self) -> u32 {
        self.exps[1..].iter().sum()
    }

    pub fn total_degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        Monomial {
            exps: self.exps.iter().zip(other.exps.iter()).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self | other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: other.exps.iter().zip(self.exps.iter()).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(other.exps.iter())
                .map(|(a, b)| *a.max(b))
                .collect(),
        }
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Re-embed into a ring with `nvars` fibre variables; extra slots are zero.
    pub(crate) fn widen(&self, nvars: usize) -> Monomial {
        let mut exps = self.exps.clone();
        exps.resize(nvars + 1, 0);
        Monomial { exps }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub enum OrderKind {
    /// Fibre variables eliminated first: degrevlex on the z-block, ties broken by the `t` exponent.
    #[default]
    BlockZOverT,
    Lex,
    DegRevLex,
}

/// A monomial order together with the variable priority it uses.
///
/// `priority` lists exponent slots (0 = `t`, `i` = `z_i`) from most to least
/// significant. For the block order only the z-slots are listed.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct MonomialOrder {
    pub kind: OrderKind,
    pub priority: Option<Vec<usize>>,
}

impl MonomialOrder {
    pub fn block() -> Self {
        MonomialOrder::default()
    }

    pub fn lex() -> Self {
        MonomialOrder {
            kind: OrderKind::Lex,
            priority: None,
        }
    }

    pub fn degrevlex() -> Self {
        MonomialOrder {
            kind: OrderKind::DegRevLex,
            priority: None,
        }
    }

    pub fn with_priority(mut self, priority: Vec<usize>) -> Self {
        self.priority = Some(priority);
        self
    }

    pub fn is_default(&self) -> bool {
        self.kind == OrderKind::BlockZOverT && self.priority.is_none()
    }

    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match (&self.kind, &self.priority) {
            (OrderKind::BlockZOverT, None) => block_cmp(a.raw(), b.raw()),
            (OrderKind::BlockZOverT, Some(p)) => degrevlex_by(a.raw(), b.raw(), p).then(a.raw()[0].cmp(&b.raw()[0])),
            (OrderKind::Lex, p) => {
                let default;
                let p = match p {
                    Some(p) => p.as_slice(),
                    None => {
                        default = default_priority(a.nvars());
                        default.as_slice()
                    }
                };
                for &i in p {
                    match a.raw()[i].cmp(&b.raw()[i]) {
                        Ordering::Equal => continue,
                        o => return o,
                    }
                }
                Ordering::Equal
            }
            (OrderKind::DegRevLex, p) => {
                let default;
                let p = match p {
                    Some(p) => p.as_slice(),
                    None => {
                        default = default_priority(a.nvars());
                        default.as_slice()
                    }
                };
                degrevlex_by(a.raw(), b.raw(), p)
            }
        }
    }
}

/// z_1 > z_2 > ... > z_n > t
fn default_priority(nvars: usize) -> Vec<usize> {
    (1..=nvars).chain(std::iter::once(0)).collect()
}

fn block_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a[1..].iter().sum();
    let db: u32 = b[1..].iter().sum();
    if da != db {
        return da.cmp(&db);
    }
    for i in (1..a.len()).rev() {
        if a[i] != b[i] {
            // reverse lexicographic: smaller exponent in the last differing slot wins
            return b[i].cmp(&a[i]);
        }
    }
    a[0].cmp(&b[0])
}

fn degrevlex_by(a: &[u32], b: &[u32], priority: &[usize]) -> Ordering {
    let da: u32 = priority.iter().map(|&i| a[i]).sum();
    let db: u32 = priority.iter().map(|&i| b[i]).sum();
    if da != db {
        return da.cmp(&db);
    }
    for &i in priority.iter().rev() {
        if a[i] != b[i] {
            return b[i].cmp(&a[i]);
        }
    }
    Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(t: u32, z: &[u32]) -> Monomial {
        Monomial::from_exponents(t, z)
    }

    #[test]
    fn z_block_dominates_t_powers() {
        let o = MonomialOrder::block();
        assert_eq!(o.compare(&m(0, &[1, 0]), &m(100, &[0, 0])), Ordering::Greater);
    }

    #[test]
    fn equal_monomials_compare_equal() {
        let o = MonomialOrder::block();
        let a = m(3, &[1, 2]);
        assert_eq!(o.compare(&a, &a), Ordering::Equal);
    }

    #[test]
    fn degrevlex_inside_z_block() {
        let o = MonomialOrder::block();
        // x^2 y vs x y^2 with x > y
        assert_eq!(o.compare(&m(0, &[2, 1]), &m(0, &[1, 2])), Ordering::Greater);
        // same z-part: t breaks the tie
        assert_eq!(o.compare(&m(2, &[1, 1]), &m(1, &[1, 1])), Ordering::Greater);
    }

    #[test]
    fn lex_and_degrevlex() {
        let lex = MonomialOrder::lex();
        assert_eq!(lex.compare(&m(0, &[1, 0]), &m(0, &[0, 5])), Ordering::Greater);
        let grevlex = MonomialOrder::degrevlex();
        // total degree first, t counts
        assert_eq!(grevlex.compare(&m(3, &[0, 0]), &m(0, &[1, 0])), Ordering::Greater);
    }
}
