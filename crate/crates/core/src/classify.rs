//! Canonical forms, content digests, isomorphism testing and partitioning
//! into isomorphism classes.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use sha2::{Digest as _, Sha256};

use crate::error::{Error, Result};
use crate::modreps::permutations_fixing_zero;
use crate::{Element, Gamma, GammaSemiring};

/// Largest carrier accepted by the factorial relabeling scan.
pub const MAX_CANONICAL_CARRIER: usize = 8;
/// Largest Γ accepted when Γ-relabelings are included.
pub const MAX_CANONICAL_GAMMA: usize = 6;

/// A SHA-256 content digest.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Digest(pub [u8; 32]);

impl Digest {
    pub fn of_bytes(bytes: &[u8]) -> Self {
        Digest(Sha256::digest(bytes).into())
    }

    pub fn hex(&self) -> String {
        use core::fmt::Write;
        let mut out = String::with_capacity(64);
        for b in self.0 {
            let _ = write!(out, "{b:02x}");
        }
        out
    }
}

impl fmt::Display for Digest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.hex())
    }
}

impl fmt::Debug for Digest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Digest({})", self.hex())
    }
}

/// Digest of a structure's canonical serialization (not of its canonical form).
pub fn content_digest(s: &GammaSemiring) -> Digest {
    Digest::of_bytes(s.to_canonical_json().as_bytes())
}

/// The lexicographically least relabeling of a structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    pub structure: GammaSemiring,
    pub digest: Digest,
    /// `relabeling[x]` is the new label of element `x`.
    pub relabeling: Vec<Element>,
    /// Set only when Γ-relabelings were searched.
    pub gamma_relabeling: Option<Vec<Gamma>>,
}

/// Value at position `idx` of the serialization of `s` relabeled by
/// `(perm, inverse)` and Γ-relabeled by `gamma_inv`.
struct Relabeled<'a> {
    s: &'a GammaSemiring,
    perm: &'a [Element],
    inv: &'a [Element],
    gamma_inv: Option<&'a [Gamma]>,
}

impl Relabeled<'_> {
    fn len(&self) -> usize {
        self.s.m() * self.s.m() + self.s.mu_raw().len()
    }

    fn value(&self, idx: usize, args: &mut [Element], gammas: &mut [Gamma]) -> Element {
        let s = self.s;
        let m = s.m();
        if idx < m * m {
            let (a, b) = (idx / m, idx % m);
            return self.perm[s.sum(self.inv[a], self.inv[b]) as usize];
        }
        let cell = idx - m * m;
        let table = s.table_len();
        let (gi, ai) = (cell / table, cell % table);
        crate::tuples::decode(ai, m, args);
        for x in args.iter_mut() {
            *x = self.inv[*x as usize];
        }
        let g = match self.gamma_inv {
            None => gi,
            Some(ginv) => {
                crate::tuples::decode(gi, s.r(), gammas);
                for g in gammas.iter_mut() {
                    *g = ginv[*g as usize];
                }
                s.gamma_index(gammas)
            }
        };
        self.perm[s.mu(g, args) as usize]
    }
}

fn invert<T: Copy + Into<usize> + TryFrom<usize>>(perm: &[T]) -> Vec<T>
where
    <T as TryFrom<usize>>::Error: fmt::Debug,
{
    let mut inv: Vec<T> = perm.to_vec();
    for (i, &p) in perm.iter().enumerate() {
        inv[p.into()] = T::try_from(i).expect("fits");
    }
    inv
}

fn all_permutations(k: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut perm: Vec<u8> = (0..k as u8).collect();
    fn rec(perm: &mut Vec<u8>, at: usize, out: &mut Vec<Vec<u8>>) {
        if at >= perm.len() {
            out.push(perm.clone());
            return;
        }
        for i in at..perm.len() {
            perm.swap(at, i);
            rec(perm, at + 1, out);
            perm.swap(at, i);
        }
    }
    rec(&mut perm, 0, &mut out);
    out.sort();
    out
}

pub fn canonical_form(s: &GammaSemiring, permute_gamma: bool) -> Result<CanonicalForm> {
    let m = s.m();
    if m > MAX_CANONICAL_CARRIER {
        return Err(Error::Capacity {
            what: "carrier for canonical form",
            actual: m,
            limit: MAX_CANONICAL_CARRIER,
        });
    }
    if permute_gamma && s.r() > MAX_CANONICAL_GAMMA {
        return Err(Error::Capacity {
            what: "Γ for canonical form",
            actual: s.r(),
            limit: MAX_CANONICAL_GAMMA,
        });
    }
    let perms = permutations_fixing_zero(m);
    let gamma_perms: Vec<Option<Vec<Gamma>>> = if permute_gamma {
        all_permutations(s.r()).into_iter().map(Some).collect()
    } else {
        alloc::vec![None]
    };
    let mut args = alloc::vec![0; s.n()];
    let mut gammas = alloc::vec![0; s.n() - 1];
    let mut best: Vec<Element> = Vec::new();
    let mut best_choice = (0usize, 0usize);
    for (gpi, gp) in gamma_perms.iter().enumerate() {
        let ginv = gp.as_ref().map(|p| invert(p));
        for (pi, perm) in perms.iter().enumerate() {
            let inv = invert(perm);
            let view = Relabeled {
                s,
                perm,
                inv: &inv,
                gamma_inv: ginv.as_deref(),
            };
            if best.is_empty() {
                best = (0..view.len())
                    .map(|i| view.value(i, &mut args, &mut gammas))
                    .collect();
                best_choice = (pi, gpi);
                continue;
            }
            let mut ord = Ordering::Equal;
            let mut idx = 0;
            while idx < best.len() {
                let v = view.value(idx, &mut args, &mut gammas);
                ord = v.cmp(&best[idx]);
                if ord != Ordering::Equal {
                    break;
                }
                idx += 1;
            }
            if ord == Ordering::Less {
                for (i, slot) in best.iter_mut().enumerate().skip(idx) {
                    *slot = view.value(i, &mut args, &mut gammas);
                }
                best_choice = (pi, gpi);
            }
        }
    }
    let relabeling = perms[best_choice.0].clone();
    let gamma_relabeling = gamma_perms[best_choice.1].clone();
    let structure = s.relabel(&relabeling, gamma_relabeling.as_deref());
    debug_assert_eq!(
        structure
            .add()
            .cells()
            .iter()
            .chain(structure.mu_raw())
            .copied()
            .collect::<Vec<_>>(),
        best
    );
    let digest = content_digest(&structure);
    Ok(CanonicalForm {
        structure,
        digest,
        relabeling,
        gamma_relabeling,
    })
}

/// A witnessing isomorphism: element map and, if Γ was permuted, Γ map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isomorphism {
    pub map: Vec<Element>,
    pub gamma_map: Option<Vec<Gamma>>,
}

impl Isomorphism {
    /// Whether relabeling `a` along this map reproduces `b` exactly.
    pub fn verify(&self, a: &GammaSemiring, b: &GammaSemiring) -> bool {
        a.m() == b.m()
            && a.n() == b.n()
            && a.r() == b.r()
            && a.relabel(&self.map, self.gamma_map.as_deref()) == *b
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoOutcome {
    Isomorphic(Isomorphism),
    NotIsomorphic,
    /// Different `(m, n, r)` or associativity mode.
    ShapeMismatch,
}

fn same_shape(a: &GammaSemiring, b: &GammaSemiring) -> bool {
    (a.m(), a.n(), a.r(), a.assoc_mode()) == (b.m(), b.n(), b.r(), b.assoc_mode())
}

/// Compare canonical forms; equal digests are confirmed structurally and a
/// mismatch behind equal digests falls back to exhaustive search.
pub fn are_isomorphic(
    a: &GammaSemiring,
    b: &GammaSemiring,
    permute_gamma: bool,
) -> Result<IsoOutcome> {
    if !same_shape(a, b) {
        return Ok(IsoOutcome::ShapeMismatch);
    }
    let (ca, cb) = (
        canonical_form(a, permute_gamma)?,
        canonical_form(b, permute_gamma)?,
    );
    if ca.digest != cb.digest {
        return Ok(IsoOutcome::NotIsomorphic);
    }
    if ca.structure != cb.structure {
        return Ok(exhaustive_isomorphism(a, b, permute_gamma)
            .map_or(IsoOutcome::NotIsomorphic, IsoOutcome::Isomorphic));
    }
    let inv_b = invert(&cb.relabeling);
    let map = ca.relabeling.iter().map(|&x| inv_b[x as usize]).collect();
    let gamma_map = match (&ca.gamma_relabeling, &cb.gamma_relabeling) {
        (Some(ga), Some(gb)) => {
            let inv = invert(gb);
            Some(ga.iter().map(|&g| inv[g as usize]).collect())
        }
        _ => None,
    };
    let iso = Isomorphism { map, gamma_map };
    debug_assert!(iso.verify(a, b));
    Ok(IsoOutcome::Isomorphic(iso))
}

/// Try every relabeling fixing 0 (and every Γ-relabeling if requested).
pub fn exhaustive_isomorphism(
    a: &GammaSemiring,
    b: &GammaSemiring,
    permute_gamma: bool,
) -> Option<Isomorphism> {
    if !same_shape(a, b) {
        return None;
    }
    let gamma_perms: Vec<Option<Vec<Gamma>>> = if permute_gamma {
        all_permutations(a.r()).into_iter().map(Some).collect()
    } else {
        alloc::vec![None]
    };
    for gp in gamma_perms {
        for map in permutations_fixing_zero(a.m()) {
            let iso = Isomorphism {
                map,
                gamma_map: gp.clone(),
            };
            if iso.verify(a, b) {
                return Some(iso);
            }
        }
    }
    None
}

/// One isomorphism class in a partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoClass {
    pub shape: (usize, usize, usize),
    pub digest: Digest,
    /// Input positions, ascending.
    pub members: Vec<usize>,
    /// Members shared a digest without sharing a canonical structure.
    pub collision: bool,
}

/// Group structures into isomorphism classes, ordered by shape then digest.
pub fn partition(structures: &[GammaSemiring], permute_gamma: bool) -> Result<Vec<IsoClass>> {
    let mut keyed = Vec::with_capacity(structures.len());
    for (i, s) in structures.iter().enumerate() {
        let c = canonical_form(s, permute_gamma)?;
        keyed.push(((s.m(), s.n(), s.r()), c.digest, i, c.structure));
    }
    keyed.sort_by_key(|k| (k.0, k.1, k.2));
    let mut out: Vec<IsoClass> = Vec::new();
    let mut reps: Vec<GammaSemiring> = Vec::new();
    for (shape, digest, i, canon) in keyed {
        let same_digest: Vec<usize> = (0..out.len())
            .filter(|&c| out[c].shape == shape && out[c].digest == digest)
            .collect();
        match same_digest.iter().find(|&&c| reps[c] == canon) {
            Some(&c) => out[c].members.push(i),
            None => {
                let collision = !same_digest.is_empty();
                for &c in &same_digest {
                    out[c].collision = true;
                }
                out.push(IsoClass {
                    shape,
                    digest,
                    members: alloc::vec![i],
                    collision,
                });
                reps.push(canon);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{instances, AdditionTable};

    #[test]
    fn trivial_is_canonical() {
        let e1 = instances::trivial();
        let c = canonical_form(&e1, false).unwrap();
        assert_eq!(c.structure, e1);
        assert_eq!(c.relabeling, [0]);
    }

    #[test]
    fn swap_gives_same_digest_and_witness() {
        let e4 = instances::guarded_first_projection();
        let swapped = e4.relabel(&[0, 2, 1], None);
        let (a, b) = (
            canonical_form(&e4, false).unwrap(),
            canonical_form(&swapped, false).unwrap(),
        );
        assert_eq!(a.digest, b.digest);
        assert_eq!(
            canonical_form(&a.structure, false).unwrap(),
            CanonicalForm {
                relabeling: alloc::vec![0, 1, 2],
                ..a.clone()
            }
        );
        match are_isomorphic(&e4, &swapped, false).unwrap() {
            IsoOutcome::Isomorphic(iso) => assert_eq!(iso.map, [0, 2, 1]),
            other => panic!("{other:?}"),
        }
        assert_eq!(a.digest.hex().len(), 64);
    }

    #[test]
    fn distinct_and_mismatched() {
        let e2 = instances::boolean_and(3);
        let zero = instances::zero_operation(AdditionTable::or(), 3);
        assert_eq!(
            are_isomorphic(&e2, &zero, false).unwrap(),
            IsoOutcome::NotIsomorphic
        );
        assert_eq!(
            are_isomorphic(&e2, &instances::guarded_first_projection(), false).unwrap(),
            IsoOutcome::ShapeMismatch
        );
        match are_isomorphic(&e2, &e2, false).unwrap() {
            IsoOutcome::Isomorphic(iso) => assert_eq!(iso.map, [0, 1]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn partitions() {
        let e4 = instances::guarded_first_projection();
        let list = [
            e4.clone(),
            e4.relabel(&[0, 2, 1], None),
            instances::boolean_and(3),
        ];
        let classes = partition(&list, false).unwrap();
        assert_eq!(classes.len(), 2);
        assert!(classes.iter().any(|c| c.members == [0, 1]));
        assert!(partition(&[], false).unwrap().is_empty());
        assert_eq!(partition(&[instances::trivial()], false).unwrap().len(), 1);
    }

    #[test]
    fn gamma_permutation() {
        let add = AdditionTable::or();
        let s = GammaSemiring::from_fn(3, 2, add, crate::AssocMode::PaperEnds, |g, x| {
            (g == [0, 0] && x.iter().all(|&v| v == 1)) as Element
        })
        .unwrap();
        let t = s.relabel(&[0, 1], Some(&[1, 0]));
        assert_ne!(
            canonical_form(&s, false).unwrap().digest,
            canonical_form(&t, false).unwrap().digest
        );
        assert_eq!(
            canonical_form(&s, true).unwrap().digest,
            canonical_form(&t, true).unwrap().digest
        );
        match are_isomorphic(&s, &t, true).unwrap() {
            IsoOutcome::Isomorphic(iso) => assert!(iso.verify(&s, &t)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn large_carrier_rejected() {
        let s = instances::zero_operation(AdditionTable::max(9), 3);
        assert!(matches!(
            canonical_form(&s, false),
            Err(Error::Capacity { .. })
        ));
    }
}
