//! Buchberger's algorithm for submodules of `k[x]^m` under a [`TermOrder`].

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_traits::{One, Zero};

use super::order::TermOrder;
use super::poly::{Exponent, ModuleVector, Q};

type Key = Vec<i64>;

/// A module vector with terms keyed by their order key; the leading term is last.
#[derive(Clone, Debug)]
pub(crate) struct SortedVec {
    terms: BTreeMap<Key, (Exponent, usize, Q)>,
}

impl SortedVec {
    fn lead(&self) -> Option<&(Exponent, usize, Q)> {
        self.terms.values().next_back()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

fn divides(a: &[i32], b: &[i32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &[i32], b: &[i32]) -> Exponent {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn diff(a: &[i32], b: &[i32]) -> Exponent {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub(crate) struct Engine<'a> {
    pub order: &'a TermOrder,
    pub nvars: usize,
    pub rank: usize,
}

impl Engine<'_> {
    pub fn sorted(&self, v: &ModuleVector) -> SortedVec {
        debug_assert!(v.is_polynomial(), "Gröbner computations need polynomial vectors");
        SortedVec { terms: v.terms().map(|(e, i, c)| (self.order.key(e, i), (e.clone(), i, c.clone()))).collect() }
    }

    pub fn unsorted(&self, s: &SortedVec) -> ModuleVector {
        ModuleVector::from_terms(self.nvars, self.rank, s.terms.values().cloned()).expect("engine vectors have consistent shape")
    }

    pub fn lead_of(&self, s: &SortedVec) -> (Exponent, usize) {
        let (e, i, _) = s.lead().expect("basis elements are nonzero");
        (e.clone(), *i)
    }

    /// `f -= c · x^shift · g`
    fn sub_shifted(&self, f: &mut SortedVec, c: &Q, shift: &[i32], g: &SortedVec) {
        for (e, i, gc) in g.terms.values() {
            let e2: Exponent = e.iter().zip(shift).map(|(a, b)| a + b).collect();
            let key = self.order.key(&e2, *i);
            let delta = c * gc;
            match f.terms.get_mut(&key) {
                Some(slot) => {
                    slot.2 -= delta;
                    if slot.2.is_zero() {
                        f.terms.remove(&key);
                    }
                }
                None => {
                    f.terms.insert(key, (e2, *i, -delta));
                }
            }
        }
    }

    fn monic(&self, mut f: SortedVec) -> SortedVec {
        if let Some((_, _, c)) = f.lead() {
            let inv = c.recip();
            if !inv.is_one() {
                for t in f.terms.values_mut() {
                    t.2 = &t.2 * &inv;
                }
            }
        }
        f
    }

    /// Full normal form of `f` modulo `basis` (elements must be monic).
    pub fn reduce(&self, mut f: SortedVec, basis: &[SortedVec]) -> SortedVec {
        let mut rem = SortedVec { terms: BTreeMap::new() };
        while let Some((key, (e, i, c))) = f.terms.iter().next_back().map(|(k, v)| (k.clone(), v.clone())) {
            let divisor = basis.iter().find(|g| {
                let (ge, gi, _) = g.lead().expect("basis elements are nonzero");
                *gi == i && divides(ge, &e)
            });
            match divisor {
                Some(g) => {
                    let shift = diff(&e, &g.lead().unwrap().0);
                    self.sub_shifted(&mut f, &c, &shift, g);
                }
                None => {
                    f.terms.remove(&key);
                    rem.terms.insert(key, (e, i, c));
                }
            }
        }
        rem
    }

    fn s_vector(&self, f: &SortedVec, g: &SortedVec) -> SortedVec {
        let (fe, _, _) = f.lead().unwrap();
        let (ge, _, _) = g.lead().unwrap();
        let l = lcm(fe, ge);
        let mut s = SortedVec { terms: BTreeMap::new() };
        self.sub_shifted(&mut s, &-Q::one(), &diff(&l, fe), f);
        self.sub_shifted(&mut s, &Q::one(), &diff(&l, ge), g);
        s
    }

    /// The reduced Gröbner basis of the module generated by `gens`, sorted by
    /// ascending leading term.
    pub fn groebner_basis(&self, gens: &[ModuleVector]) -> Vec<SortedVec> {
        let mut basis: Vec<SortedVec> = Vec::new();
        let mut pairs: BTreeSet<(Key, usize, usize)> = BTreeSet::new();
        let mut pending: HashSet<(usize, usize)> = HashSet::new();

        let add = |h: SortedVec, basis: &mut Vec<SortedVec>, pairs: &mut BTreeSet<(Key, usize, usize)>, pending: &mut HashSet<(usize, usize)>| {
            let idx = basis.len();
            let (he, hi, _) = h.lead().unwrap().clone();
            for (k, g) in basis.iter().enumerate() {
                let (ge, gi, _) = g.lead().unwrap();
                if *gi == hi {
                    pairs.insert((self.order.key(&lcm(ge, &he), hi), k, idx));
                    pending.insert((k, idx));
                }
            }
            basis.push(h);
        };

        for g in gens {
            let r = self.reduce(self.sorted(g), &basis);
            if !r.is_zero() {
                add(self.monic(r), &mut basis, &mut pairs, &mut pending);
            }
        }

        while let Some((_, i, j)) = pairs.pop_first() {
            pending.remove(&(i, j));
            let (ie, comp, _) = basis[i].lead().unwrap().clone();
            let l = lcm(&ie, &basis[j].lead().unwrap().0);
            let chain = (0..basis.len()).any(|k| {
                if k == i || k == j {
                    return false;
                }
                let (ke, kc, _) = basis[k].lead().unwrap();
                *kc == comp
                    && divides(ke, &l)
                    && !pending.contains(&(i.min(k), i.max(k)))
                    && !pending.contains(&(j.min(k), j.max(k)))
            });
            if chain {
                continue;
            }
            let s = self.s_vector(&basis[i], &basis[j]);
            let r = self.reduce(s, &basis);
            if !r.is_zero() {
                add(self.monic(r), &mut basis, &mut pairs, &mut pending);
            }
        }

        // minimize, then inter-reduce
        let mut minimal: Vec<SortedVec> = Vec::new();
        for (idx, g) in basis.iter().enumerate() {
            let (ge, gi, _) = g.lead().unwrap();
            let redundant = basis.iter().enumerate().any(|(k, h)| {
                let (he, hi, _) = h.lead().unwrap();
                k != idx && hi == gi && divides(he, ge) && (he != ge || k < idx)
            });
            if !redundant {
                minimal.push(g.clone());
            }
        }
        let mut reduced: Vec<SortedVec> = Vec::with_capacity(minimal.len());
        for idx in 0..minimal.len() {
            let mut g = minimal[idx].clone();
            let (lk, lt) = g.terms.pop_last().unwrap();
            let others: Vec<SortedVec> = minimal.iter().enumerate().filter(|(k, _)| *k != idx).map(|(_, h)| h.clone()).collect();
            let mut tail = self.reduce(g, &others);
            tail.terms.insert(lk, lt);
            reduced.push(tail);
        }
        reduced.sort_by(|a, b| a.terms.keys().next_back().cmp(&b.terms.keys().next_back()));
        reduced
    }
}
