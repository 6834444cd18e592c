//! Exact sparse row echelon forms over Q.
//!
//! Rows are stored as primitive integer vectors: elimination is
//! `w <- a*w - b*r` followed by division by the content, so no fractions
//! appear in the pivot rows. Optionally every row remembers which rational
//! combination of the inserted vectors it equals, which gives solutions and
//! kernel vectors.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::ring::Rational;

pub type SparseVector = BTreeMap<usize, Rational>;

#[derive(Clone, Debug)]
struct Row {
    entries: BTreeMap<usize, BigInt>,
    combo: BTreeMap<usize, Rational>,
}

/// Outcome of inserting a vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Insertion {
    Independent,
    /// The vector with this label is `Σ c_j * (vector labelled j)`.
    Dependent(SparseVector),
}

#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<Row>,
    by_pivot: BTreeMap<usize, usize>,
}

fn integer_row(v: &SparseVector) -> (BTreeMap<usize, BigInt>, Rational) {
    let mut den = BigInt::one();
    for c in v.values() {
        den = den.lcm(c.denom());
    }
    let scale = Rational::from_integer(den.clone());
    let entries = v
        .iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(&k, c)| (k, (c * &scale).to_integer()))
        .collect();
    (entries, scale)
}

struct Work {
    entries: BTreeMap<usize, BigInt>,
    alpha: Rational,
    gamma: BTreeMap<usize, Rational>,
}

impl Work {
    fn normalize(&mut self) {
        let mut g = BigInt::zero();
        for c in self.entries.values() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        if let Some((_, lead)) = self.entries.iter().next() {
            if lead.is_negative() {
                g = -g;
            }
        }
        if g.is_zero() || g.is_one() {
            return;
        }
        for c in self.entries.values_mut() {
            *c = &*c / &g;
        }
        let gr = Rational::from_integer(g);
        self.alpha /= &gr;
        for c in self.gamma.values_mut() {
            *c /= &gr;
        }
    }
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.by_pivot.keys().copied()
    }

    fn eliminate(&self, mut w: Work, track: bool) -> Work {
        let mut cursor = 0usize;
        loop {
            let next = w
                .entries
                .range(cursor..)
                .find(|(col, _)| self.by_pivot.contains_key(col))
                .map(|(&col, b)| (col, b.clone()));
            let (col, b) = match next {
                Some(x) => x,
                None => return w,
            };
            let r = &self.rows[self.by_pivot[&col]];
            let a = &r.entries[&col];
            let g = a.gcd(&b);
            let (a, b) = (a / &g, &b / &g);
            for c in w.entries.values_mut() {
                *c *= &a;
            }
            for (&k, rc) in &r.entries {
                let e = w.entries.entry(k).or_insert_with(BigInt::zero);
                *e -= &b * rc;
                if e.is_zero() {
                    w.entries.remove(&k);
                }
            }
            if track {
                let ar = Rational::from_integer(a.clone());
                let br = Rational::from_integer(b.clone());
                w.alpha *= &ar;
                for c in w.gamma.values_mut() {
                    *c *= &ar;
                }
                for (&k, rc) in &r.combo {
                    let e = w.gamma.entry(k).or_insert_with(Rational::zero);
                    *e += &br * rc;
                    if e.is_zero() {
                        w.gamma.remove(&k);
                    }
                }
            }
            w.normalize();
            cursor = col + 1;
        }
    }

    fn start(v: &SparseVector) -> Work {
        let (entries, scale) = integer_row(v);
        let mut w = Work {
            entries,
            alpha: scale,
            gamma: BTreeMap::new(),
        };
        w.normalize();
        w
    }

    /// Inserts `v`, recording its combination under `label`.
    pub fn insert_labelled(&mut self, v: &SparseVector, label: usize) -> Insertion {
        let w = self.eliminate(Self::start(v), true);
        if w.entries.is_empty() {
            let combo = w.gamma.iter().map(|(&k, c)| (k, c / &w.alpha)).collect();
            return Insertion::Dependent(combo);
        }
        let mut combo: BTreeMap<usize, Rational> = w.gamma.into_iter().map(|(k, c)| (k, -c)).collect();
        combo.insert(label, w.alpha);
        self.push(w.entries, combo);
        Insertion::Independent
    }

    /// Inserts `v` without bookkeeping; returns whether the rank grew.
    pub fn insert(&mut self, v: &SparseVector) -> bool {
        let w = self.eliminate(Self::start(v), false);
        if w.entries.is_empty() {
            return false;
        }
        self.push(w.entries, BTreeMap::new());
        true
    }

    fn push(&mut self, entries: BTreeMap<usize, BigInt>, combo: BTreeMap<usize, Rational>) {
        let pivot = *entries.keys().next().unwrap();
        self.by_pivot.insert(pivot, self.rows.len());
        self.rows.push(Row { entries, combo });
    }

    pub fn contains(&self, v: &SparseVector) -> bool {
        self.eliminate(Self::start(v), false).entries.is_empty()
    }

    /// Coefficients `x` with `v = Σ x_j * (vector labelled j)`, if `v` is in the span.
    /// Only meaningful when every row was inserted with `insert_labelled`.
    pub fn solve(&self, v: &SparseVector) -> Option<SparseVector> {
        let w = self.eliminate(Self::start(v), true);
        if !w.entries.is_empty() {
            return None;
        }
        Some(w.gamma.iter().map(|(&k, c)| (k, c / &w.alpha)).collect())
    }

    /// The unique vector congruent to `v` modulo the row space with no entry in
    /// a pivot column.
    pub fn reduce_exact(&self, v: &SparseVector) -> SparseVector {
        let w = self.eliminate(Self::start(v), true);
        w.entries
            .into_iter()
            .map(|(k, c)| (k, Rational::from_integer(c) / &w.alpha))
            .collect()
    }
}

/// Rank of a list of sparse vectors.
pub fn rank(vectors: &[SparseVector]) -> usize {
    let mut e = Echelon::new();
    vectors.iter().filter(|v| e.insert(v)).count()
}

/// A basis of `{x : Σ x_j columns_j = 0}`.
pub fn kernel(columns: &[SparseVector]) -> Vec<SparseVector> {
    let mut e = Echelon::new();
    let mut out = Vec::new();
    for (j, c) in columns.iter().enumerate() {
        if let Insertion::Dependent(mut combo) = e.insert_labelled(c, j) {
            for v in combo.values_mut() {
                *v = -v.clone();
            }
            combo.insert(j, Rational::one());
            out.push(combo);
        }
    }
    out
}
