//! Structure-preserving maps between structures of equal arity and Γ-size.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{usage, Error, Result};
use crate::tuples::Odometer;
use crate::{Element, Gamma, GammaSemiring, Subset};

/// A candidate map `source → target` given by its element table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homomorphism<'a> {
    source: &'a GammaSemiring,
    target: &'a GammaSemiring,
    map: Vec<Element>,
}

/// The first way in which a map fails to be a homomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HomDefect {
    ZeroNotFixed {
        image: Element,
    },
    Addition {
        a: Element,
        b: Element,
    },
    Operation {
        gammas: Vec<Gamma>,
        args: Vec<Element>,
    },
}

impl<'a> Homomorphism<'a> {
    pub fn new(
        source: &'a GammaSemiring,
        target: &'a GammaSemiring,
        map: Vec<Element>,
    ) -> Result<Self> {
        if source.n() != target.n() || source.r() != target.r() {
            return Err(usage(format!(
                "homomorphism needs equal arity and Γ-size, got (n={}, r={}) and (n={}, r={})",
                source.n(),
                source.r(),
                target.n(),
                target.r()
            )));
        }
        if map.len() != source.m() {
            return Err(usage(format!(
                "map has {} entries, source has {} elements",
                map.len(),
                source.m()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&y| y as usize >= target.m()) {
            return Err(Error::OutOfRange {
                what: "map value",
                value: bad as usize,
                bound: target.m(),
            });
        }
        Ok(Homomorphism {
            source,
            target,
            map,
        })
    }

    pub fn identity(s: &'a GammaSemiring) -> Self {
        Homomorphism {
            source: s,
            target: s,
            map: (0..s.m() as Element).collect(),
        }
    }

    pub fn source(&self) -> &'a GammaSemiring {
        self.source
    }

    pub fn target(&self) -> &'a GammaSemiring {
        self.target
    }

    pub fn map(&self) -> &[Element] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, x: Element) -> Element {
        self.map[x as usize]
    }

    pub fn is_homomorphism(&self) -> bool {
        self.first_defect().is_none()
    }

    /// Scan `0 ↦ 0`, then addition cells, then operation cells, in order.
    pub fn first_defect(&self) -> Option<HomDefect> {
        let (s, t) = (self.source, self.target);
        if self.map[0] != 0 {
            return Some(HomDefect::ZeroNotFixed { image: self.map[0] });
        }
        for a in 0..s.m() as Element {
            for b in 0..s.m() as Element {
                if self.apply(s.sum(a, b)) != t.sum(self.apply(a), self.apply(b)) {
                    return Some(HomDefect::Addition { a, b });
                }
            }
        }
        let mut image = vec![0; s.n()];
        for g in 0..s.gamma_tuples() {
            let mut xs = Odometer::new(s.n(), s.m());
            while let Some(x) = xs.next() {
                for (dst, &src) in image.iter_mut().zip(x) {
                    *dst = self.apply(src);
                }
                if self.apply(s.mu(g, x)) != t.mu(g, &image) {
                    return Some(HomDefect::Operation {
                        gammas: s.gamma_tuple(g),
                        args: x.to_vec(),
                    });
                }
            }
        }
        None
    }

    pub fn image(&self) -> Subset {
        self.map.iter().copied().collect()
    }

    pub fn is_surjective(&self) -> bool {
        self.image().is_full(self.target.m())
    }

    pub fn is_injective(&self) -> bool {
        self.image().len() == self.source.m()
    }

    pub fn is_bijective(&self) -> bool {
        self.source.m() == self.target.m() && self.is_injective()
    }

    /// Preimage of a target subset.
    pub fn pullback(&self, set: Subset) -> Subset {
        (0..self.source.m() as Element)
            .filter(|&x| set.contains(self.apply(x)))
            .collect()
    }

    /// Image of a source subset.
    pub fn push_forward(&self, set: Subset) -> Subset {
        set.iter().map(|x| self.apply(x)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;

    #[test]
    fn identity_is_homomorphism() {
        let e4 = instances::guarded_first_projection();
        let id = Homomorphism::identity(&e4);
        assert!(id.is_homomorphism());
        assert!(id.is_bijective());
        assert_eq!(id.pullback(Subset::zero()), Subset::zero());
    }

    #[test]
    fn collapse_e4_onto_e2() {
        let e4 = instances::guarded_first_projection();
        let e2 = instances::boolean_and(3);
        let f = Homomorphism::new(&e4, &e2, vec![0, 1, 1]).unwrap();
        assert!(f.is_homomorphism());
        assert!(f.is_surjective());
        assert!(!f.is_injective());
        assert_eq!(f.pullback(Subset::zero()), Subset::zero());
        assert_eq!(
            f.pullback(Subset::singleton(1)),
            Subset::from_elements([1, 2])
        );
    }

    #[test]
    fn defects_and_shape_errors() {
        let e4 = instances::guarded_first_projection();
        let e2 = instances::boolean_and(3);
        let f = Homomorphism::new(&e2, &e4, vec![1, 1]).unwrap();
        assert_eq!(f.first_defect(), Some(HomDefect::ZeroNotFixed { image: 1 }));
        let swap = Homomorphism::new(&e4, &e4, vec![0, 2, 1]).unwrap();
        assert_eq!(
            swap.first_defect(),
            Some(HomDefect::Addition { a: 1, b: 2 })
        );
        let e2_4 = instances::boolean_and(4);
        assert!(matches!(
            Homomorphism::new(&e2, &e2_4, vec![0, 1]),
            Err(Error::Usage(_))
        ));
        assert!(Homomorphism::new(&e2, &e2, vec![0, 2]).is_err());
    }
}
