//! Axiom checking for candidate structures.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::tuples::Odometer;
use crate::{AdditionTable, Element, Gamma, GammaSemiring};

pub const DEFAULT_MAX_VIOLATIONS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum Axiom {
    /// Addition is a commutative monoid with identity 0.
    A1,
    /// Distributivity in every argument slot.
    A2,
    /// Zero absorption in every argument slot.
    A3,
    /// n-ary associativity.
    A4,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Law {
    AddIdentity,
    AddCommutative,
    AddAssociative,
    Distributive,
    ZeroAbsorbing,
    Associative,
}

/// One failed axiom instance.
///
/// * `A1`: `args` are the summands; `lhs`/`rhs` the two sides.
/// * `A2`: `slot` is the 1-based argument slot, `args` is `(x, x', rest…)`
///   with the rest in slot order; `lhs = μ(…x+x'…)`, `rhs = μ(…x…) + μ(…x'…)`.
/// * `A3`: `slot` is the first zero slot, `args` the full tuple, `lhs` the value.
/// * `A4`: `slot` is the 1-based window compared against window 1, `gammas`
///   and `args` the `2n-2` parameters and `2n-1` elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Violation {
    pub axiom: Axiom,
    pub law: Law,
    pub slot: Option<usize>,
    pub gammas: Vec<Gamma>,
    pub args: Vec<Element>,
    pub lhs: Element,
    pub rhs: Element,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} {:?}", self.axiom, self.law)?;
        if let Some(slot) = self.slot {
            write!(f, " slot {slot}")?;
        }
        if !self.gammas.is_empty() {
            write!(f, " gammas {:?}", self.gammas)?;
        }
        write!(
            f,
            " args {:?}: lhs {} != rhs {}",
            self.args, self.lhs, self.rhs
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.valid
    }

    pub fn of_axiom(&self, axiom: Axiom) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(move |v| v.axiom == axiom)
    }

    pub(crate) fn from_violations(violations: Vec<Violation>) -> Self {
        ValidationReport {
            valid: violations.is_empty(),
            violations,
        }
    }
}

/// Check axioms A1–A4, reporting at most [`DEFAULT_MAX_VIOLATIONS`] per axiom.
pub fn validate(s: &GammaSemiring) -> ValidationReport {
    validate_with(s, DEFAULT_MAX_VIOLATIONS)
}

/// Check axioms A1–A4 exhaustively, keeping the first `max_per_axiom`
/// violations of each axiom in lexicographic witness order.
pub fn validate_with(s: &GammaSemiring, max_per_axiom: usize) -> ValidationReport {
    let cap = max_per_axiom.max(1);
    let mut out = Vec::new();
    check_addition(s.add(), cap, &mut out);
    check_distributivity(s, cap, &mut out);
    check_absorption(s, cap, &mut out);
    check_associativity(s, cap, &mut out);
    ValidationReport::from_violations(out)
}

pub(crate) fn check_addition(add: &AdditionTable, cap: usize, out: &mut Vec<Violation>) {
    let m = add.size() as Element;
    let mut found = 0;
    let mut push = |out: &mut Vec<Violation>, law, args: Vec<Element>, lhs, rhs| {
        if found < cap {
            out.push(Violation {
                axiom: Axiom::A1,
                law,
                slot: None,
                gammas: Vec::new(),
                args,
                lhs,
                rhs,
            });
        }
        found += 1;
    };
    for a in 0..m {
        let v = add.sum(0, a);
        if v != a {
            push(out, Law::AddIdentity, vec![a], v, a);
        }
    }
    for a in 0..m {
        for b in 0..m {
            if add.sum(a, b) != add.sum(b, a) {
                push(
                    out,
                    Law::AddCommutative,
                    vec![a, b],
                    add.sum(a, b),
                    add.sum(b, a),
                );
            }
        }
    }
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                let lhs = add.sum(add.sum(a, b), c);
                let rhs = add.sum(a, add.sum(b, c));
                if lhs != rhs {
                    push(out, Law::AddAssociative, vec![a, b, c], lhs, rhs);
                }
            }
        }
    }
}

fn check_distributivity(s: &GammaSemiring, cap: usize, out: &mut Vec<Violation>) {
    let (m, n) = (s.m(), s.n());
    let mut found = 0;
    let mut args = vec![0; n];
    for slot in 0..n {
        for g in 0..s.gamma_tuples() {
            for x in 0..m as Element {
                for x2 in 0..m as Element {
                    let mut rest = Odometer::new(n - 1, m);
                    while let Some(others) = rest.next() {
                        fill_around(&mut args, slot, others, x);
                        let a = s.mu(g, &args);
                        args[slot] = x2;
                        let b = s.mu(g, &args);
                        args[slot] = s.sum(x, x2);
                        let lhs = s.mu(g, &args);
                        let rhs = s.sum(a, b);
                        if lhs != rhs {
                            if found < cap {
                                let mut witness = vec![x, x2];
                                witness.extend_from_slice(others);
                                out.push(Violation {
                                    axiom: Axiom::A2,
                                    law: Law::Distributive,
                                    slot: Some(slot + 1),
                                    gammas: s.gamma_tuple(g),
                                    args: witness,
                                    lhs,
                                    rhs,
                                });
                            }
                            found += 1;
                            if found >= cap {
                                return;
                            }
                        }
                    }
                }
            }
        }
    }
}

/// Write `others` into `args` around position `slot`, and `x` at `slot`.
pub(crate) fn fill_around(args: &mut [Element], slot: usize, others: &[Element], x: Element) {
    args[..slot].copy_from_slice(&others[..slot]);
    args[slot] = x;
    args[slot + 1..].copy_from_slice(&others[slot..]);
}

fn check_absorption(s: &GammaSemiring, cap: usize, out: &mut Vec<Violation>) {
    let mut found = 0;
    for g in 0..s.gamma_tuples() {
        let mut xs = Odometer::new(s.n(), s.m());
        while let Some(x) = xs.next() {
            let Some(zero_slot) = x.iter().position(|&v| v == 0) else {
                continue;
            };
            let v = s.mu(g, x);
            if v != 0 {
                if found < cap {
                    out.push(Violation {
                        axiom: Axiom::A3,
                        law: Law::ZeroAbsorbing,
                        slot: Some(zero_slot + 1),
                        gammas: s.gamma_tuple(g),
                        args: x.to_vec(),
                        lhs: v,
                        rhs: 0,
                    });
                }
                found += 1;
                if found >= cap {
                    return;
                }
            }
        }
    }
}

fn check_associativity(s: &GammaSemiring, cap: usize, out: &mut Vec<Violation>) {
    let (m, n, r) = (s.m(), s.n(), s.r());
    let mut found = 0;
    for window in s.assoc_mode().compared_windows(n) {
        let mut gs = Odometer::new(2 * n - 2, r);
        while let Some(g) = gs.next() {
            let mut zs = Odometer::new(2 * n - 1, m);
            while let Some(z) = zs.next() {
                let lhs = s.bracket(0, g, z);
                let rhs = s.bracket(window, g, z);
                if lhs != rhs {
                    if found < cap {
                        out.push(Violation {
                            axiom: Axiom::A4,
                            law: Law::Associative,
                            slot: Some(window + 1),
                            gammas: g.to_vec(),
                            args: z.to_vec(),
                            lhs,
                            rhs,
                        });
                    }
                    found += 1;
                    if found >= cap {
                        return;
                    }
                }
            }
        }
    }
}

/// Argument transpositions `(i, j)`, 1-based with `i < j`, under which some
/// operation table is not invariant. Empty iff μ is fully symmetric.
pub fn symmetry_profile(s: &GammaSemiring) -> BTreeSet<(usize, usize)> {
    let n = s.n();
    let mut out = BTreeSet::new();
    let mut swapped = vec![0; n];
    for i in 0..n {
        for j in i + 1..n {
            'pair: for g in 0..s.gamma_tuples() {
                let mut xs = Odometer::new(n, s.m());
                while let Some(x) = xs.next() {
                    swapped.copy_from_slice(x);
                    swapped.swap(i, j);
                    if s.mu(g, x) != s.mu(g, &swapped) {
                        out.insert((i + 1, j + 1));
                        break 'pair;
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{instances, AssocMode};

    #[test]
    fn reference_instances_are_valid() {
        assert!(validate(&instances::trivial()).valid);
        assert!(validate(&instances::boolean_and(3)).valid);
        assert!(validate(&instances::boolean_and(4)).valid);
        let e4 = instances::guarded_first_projection();
        assert!(validate(&e4).valid);
        assert!(validate(&e4.with_assoc_mode(AssocMode::DornteAllWindows)).valid);
    }

    #[test]
    fn illustration_breaks_distributivity_in_slot_one() {
        let report = validate(&instances::three_element_illustration());
        assert!(!report.valid);
        let first = report.of_axiom(Axiom::A2).next().expect("an A2 violation");
        assert_eq!(first.slot, Some(1));
        assert_eq!(first.args, [1, 1, 1, 1]);
        assert_eq!((first.lhs, first.rhs), (1, 2));
        assert_eq!(report.of_axiom(Axiom::A1).count(), 0);
        assert_eq!(report.of_axiom(Axiom::A3).count(), 0);
    }

    #[test]
    fn cap_and_determinism() {
        let s = instances::three_element_illustration();
        let a = validate_with(&s, 2);
        assert!(a.of_axiom(Axiom::A2).count() <= 2);
        assert_eq!(a, validate_with(&s, 2));
    }

    #[test]
    fn absorption_violation_reported() {
        let s = GammaSemiring::from_fn(3, 1, AdditionTable::or(), AssocMode::PaperEnds, |_, _| 1)
            .unwrap();
        let report = validate(&s);
        let v = report.of_axiom(Axiom::A3).next().unwrap();
        assert_eq!(
            (v.slot, v.args.as_slice(), v.lhs),
            (Some(1), &[0, 0, 0][..], 1)
        );
    }

    #[test]
    fn symmetry_profiles() {
        assert!(symmetry_profile(&instances::boolean_and(3)).is_empty());
        let p = symmetry_profile(&instances::guarded_first_projection());
        assert!(p.contains(&(1, 2)));
        assert!(p.contains(&(1, 3)));
        assert!(!p.contains(&(2, 3)));
        assert!(symmetry_profile(&instances::zero_operation(AdditionTable::max(3), 3)).is_empty());
        assert!(symmetry_profile(&instances::three_element_illustration()).is_empty());
    }
}
