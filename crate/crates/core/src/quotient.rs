//! Quotients by the Bourne congruence of an ideal.

use alloc::vec::Vec;

use crate::error::{usage, Result};
use crate::ideals::{is_ideal, IdealKind};
use crate::tuples::Odometer;
use crate::validate::fill_around;
use crate::{AdditionTable, Element, GammaSemiring, Homomorphism, Subset};

/// A quotient `T / I` together with the class partition that defines it.
///
/// Classes are numbered by their smallest element, so the class of 0 is
/// always class 0 and becomes the zero of the quotient.
#[derive(Clone, Debug)]
pub struct QuotientStructure<'a> {
    parent: &'a GammaSemiring,
    ideal: Subset,
    class_of: Vec<Element>,
    classes: Vec<Subset>,
    quotient: GammaSemiring,
}

impl<'a> QuotientStructure<'a> {
    pub fn parent(&self) -> &'a GammaSemiring {
        self.parent
    }

    pub fn ideal(&self) -> Subset {
        self.ideal
    }

    pub fn classes(&self) -> &[Subset] {
        &self.classes
    }

    pub fn class_of(&self, x: Element) -> Element {
        self.class_of[x as usize]
    }

    pub fn quotient(&self) -> &GammaSemiring {
        &self.quotient
    }

    /// The canonical surjection onto the quotient.
    pub fn projection(&self) -> Homomorphism<'_> {
        Homomorphism::new(self.parent, &self.quotient, self.class_of.clone())
            .expect("projection is well-shaped")
    }
}

/// Quotient of `s` by the two-sided ideal `ideal`.
///
/// The partition is the smallest congruence containing
/// `{(a, b) : a + p = b + q for some p, q in the ideal}`.
pub fn bourne_quotient(s: &GammaSemiring, ideal: Subset) -> Result<QuotientStructure<'_>> {
    if !is_ideal(s, ideal, &IdealKind::TwoSided) {
        return Err(usage(alloc::format!("{ideal} is not a two-sided ideal")));
    }
    Ok(congruence_quotient(s, ideal))
}

pub(crate) fn congruence_quotient(s: &GammaSemiring, ideal: Subset) -> QuotientStructure<'_> {
    let m = s.m();
    let mut uf = UnionFind::new(m);
    let mut reached: Vec<Option<Element>> = alloc::vec![None; m];
    for a in 0..m as Element {
        for p in ideal {
            let v = s.sum(a, p) as usize;
            match reached[v] {
                Some(b) => {
                    uf.union(a, b);
                }
                None => reached[v] = Some(a),
            }
        }
    }
    close_congruence(s, &mut uf);
    build(s, ideal, &mut uf)
}

/// Quotient by an arbitrary congruence given as a class table, used when
/// comparing kernels. The table must already be a congruence.
pub(crate) fn partition_of(class_of: &[Element]) -> Vec<Subset> {
    let count = class_of.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
    let mut out = alloc::vec![Subset::EMPTY; count];
    for (x, &c) in class_of.iter().enumerate() {
        out[c as usize].insert(x as Element);
    }
    out
}

fn close_congruence(s: &GammaSemiring, uf: &mut UnionFind) {
    let (m, n) = (s.m(), s.n());
    let mut args = alloc::vec![0; n];
    loop {
        let mut changed = false;
        for a in 0..m as Element {
            let b = uf.find(a);
            if a == b {
                continue;
            }
            for c in 0..m as Element {
                changed |= uf.union(s.sum(a, c), s.sum(b, c));
            }
            for slot in 0..n {
                for g in 0..s.gamma_tuples() {
                    let mut rest = Odometer::new(n - 1, m);
                    while let Some(others) = rest.next() {
                        fill_around(&mut args, slot, others, a);
                        let x = s.mu(g, &args);
                        args[slot] = b;
                        let y = s.mu(g, &args);
                        changed |= uf.union(x, y);
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
}

fn build<'a>(s: &'a GammaSemiring, ideal: Subset, uf: &mut UnionFind) -> QuotientStructure<'a> {
    let m = s.m();
    let mut class_of = alloc::vec![0 as Element; m];
    let mut root_class: Vec<Option<Element>> = alloc::vec![None; m];
    let mut reps: Vec<Element> = Vec::new();
    for x in 0..m as Element {
        let root = uf.find(x) as usize;
        let class = *root_class[root].get_or_insert_with(|| {
            reps.push(x);
            (reps.len() - 1) as Element
        });
        class_of[x as usize] = class;
    }
    let k = reps.len();
    let add = AdditionTable::from_fn(k, |a, b| {
        class_of[s.sum(reps[a as usize], reps[b as usize]) as usize]
    })
    .expect("quotient addition is well-shaped");
    let mut lifted = alloc::vec![0; s.n()];
    let quotient = GammaSemiring::from_fn(s.n(), s.r(), add, s.assoc_mode(), |g, xs| {
        for (dst, &c) in lifted.iter_mut().zip(xs) {
            *dst = reps[c as usize];
        }
        class_of[s.mu(s.gamma_index(g), &lifted) as usize]
    })
    .expect("quotient tables are well-shaped");
    let classes = partition_of(&class_of);
    QuotientStructure {
        parent: s,
        ideal,
        class_of,
        classes,
        quotient,
    }
}

struct UnionFind {
    parent: Vec<Element>,
}

impl UnionFind {
    fn new(m: usize) -> Self {
        UnionFind {
            parent: (0..m as Element).collect(),
        }
    }

    fn find(&mut self, mut x: Element) -> Element {
        while self.parent[x as usize] != x {
            let up = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = up;
            x = up;
        }
        x
    }

    /// Merge two classes, keeping the smaller root. Returns whether they
    /// were distinct.
    fn union(&mut self, a: Element, b: Element) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi as usize] = lo;
        true
    }
}
