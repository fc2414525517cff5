//! Ideal detection, enumeration and generation for every closure kind:
//! left, right, two-sided, positional and threshold.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{usage, Error, Result};
use crate::tuples::Odometer;
use crate::{Element, Gamma, GammaSemiring, Subset};

/// Largest carrier for which ideal lattices are scanned exhaustively.
pub const MAX_SCAN_CARRIER: usize = 16;

/// A set of 1-based argument slots.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SlotSet(u32);

impl SlotSet {
    pub fn from_slots<I: IntoIterator<Item = usize>>(slots: I) -> Self {
        SlotSet(slots.into_iter().fold(0, |acc, s| acc | (1 << (s - 1))))
    }

    pub fn contains(self, slot: usize) -> bool {
        (1..=32).contains(&slot) && self.0 & (1 << (slot - 1)) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn slots(self) -> impl Iterator<Item = usize> {
        (1..=32).filter(move |&s| self.contains(s))
    }

    /// All slot sets of the given size inside `1..=n`, in increasing bit order.
    pub fn of_size(n: usize, size: usize) -> impl Iterator<Item = SlotSet> {
        (1u32..1 << n)
            .filter(move |b| b.count_ones() as usize == size)
            .map(SlotSet)
    }
}

impl fmt::Debug for SlotSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for SlotSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, s) in self.slots().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str("}")
    }
}

/// Which argument placements force a product into the ideal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdealKind {
    /// Member in slot 2.
    Left,
    /// Member in slot n.
    Right,
    /// Member in slot 2 or slot n.
    TwoSided,
    /// Members in every listed slot.
    Positional(SlotSet),
    /// Members in at least this many slots.
    Threshold(usize),
}

impl IdealKind {
    /// Reject slot sets or thresholds that do not fit arity `n`.
    pub fn check(&self, n: usize) -> Result<()> {
        match *self {
            IdealKind::Positional(set) if set.is_empty() || set.slots().any(|s| s > n) => {
                Err(usage(format!(
                    "positional slot set {set} must be a nonempty subset of 1..={n}"
                )))
            }
            IdealKind::Threshold(k) if k == 0 || k > n => {
                Err(usage(format!("threshold {k} must lie in 1..={n}")))
            }
            _ => Ok(()),
        }
    }

    /// Whether an argument tuple with the given membership pattern must
    /// have its product in the ideal.
    #[inline]
    pub(crate) fn triggers(&self, args: &[Element], set: Subset) -> bool {
        let n = args.len();
        match *self {
            IdealKind::Left => set.contains(args[1]),
            IdealKind::Right => set.contains(args[n - 1]),
            IdealKind::TwoSided => set.contains(args[1]) || set.contains(args[n - 1]),
            IdealKind::Positional(slots) => slots.slots().all(|s| set.contains(args[s - 1])),
            IdealKind::Threshold(k) => args.iter().filter(|&&x| set.contains(x)).count() >= k,
        }
    }

    pub fn label(&self) -> String {
        match self {
            IdealKind::Left => "left".into(),
            IdealKind::Right => "right".into(),
            IdealKind::TwoSided => "two_sided".into(),
            IdealKind::Positional(s) => format!("positional{s}"),
            IdealKind::Threshold(k) => format!("threshold({k})"),
        }
    }
}

impl fmt::Display for IdealKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// A subset verified to be an ideal of each listed kind.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IdealSubset {
    pub set: Subset,
    pub kinds: Vec<IdealKind>,
}

impl IdealSubset {
    pub fn has_kind(&self, kind: &IdealKind) -> bool {
        self.kinds.contains(kind)
    }

    /// Verify `set` against `kind` and tag it on success.
    pub fn verified(s: &GammaSemiring, set: Subset, kind: IdealKind) -> Option<Self> {
        is_ideal(s, set, &kind).then(|| IdealSubset {
            set,
            kinds: alloc::vec![kind],
        })
    }
}

/// Why a subset fails to be an ideal of some kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdealDefect {
    MissingZero,
    NotAdditivelyClosed {
        a: Element,
        b: Element,
    },
    Escapes {
        gammas: Vec<Gamma>,
        args: Vec<Element>,
        value: Element,
    },
}

pub fn is_additively_closed(s: &GammaSemiring, set: Subset) -> bool {
    set.contains(0) && s.add().closure(set) == set
}

pub fn is_ideal(s: &GammaSemiring, set: Subset, kind: &IdealKind) -> bool {
    ideal_defect(s, set, kind).is_none()
}

/// First reason `set` fails to be a `kind`-ideal, in lexicographic order.
pub fn ideal_defect(s: &GammaSemiring, set: Subset, kind: &IdealKind) -> Option<IdealDefect> {
    if !set.contains(0) {
        return Some(IdealDefect::MissingZero);
    }
    for a in set {
        for b in set {
            if !set.contains(s.sum(a, b)) {
                return Some(IdealDefect::NotAdditivelyClosed { a, b });
            }
        }
    }
    escape(s, set, kind).map(|(g, args, value)| IdealDefect::Escapes {
        gammas: s.gamma_tuple(g),
        args,
        value,
    })
}

fn escape(
    s: &GammaSemiring,
    set: Subset,
    kind: &IdealKind,
) -> Option<(usize, Vec<Element>, Element)> {
    for g in 0..s.gamma_tuples() {
        let mut xs = Odometer::new(s.n(), s.m());
        while let Some(x) = xs.next() {
            let v = s.mu(g, x);
            if !set.contains(v) && kind.triggers(x, set) {
                return Some((g, x.to_vec(), v));
            }
        }
    }
    None
}

/// All subsets containing 0 and closed under addition, by increasing bits.
pub fn additively_closed_subsets(s: &GammaSemiring) -> Result<Vec<Subset>> {
    let m = s.m();
    if m > MAX_SCAN_CARRIER {
        return Err(Error::Capacity {
            what: "carrier size for subset scan",
            actual: m,
            limit: MAX_SCAN_CARRIER,
        });
    }
    Ok((0u64..1 << (m - 1))
        .map(|rest| Subset::from_bits(1 | (rest << 1)))
        .filter(|&set| s.add().closure(set) == set)
        .collect())
}

/// All ideals of the given kind, ordered by bit pattern.
pub fn all_ideals(s: &GammaSemiring, kind: &IdealKind) -> Result<Vec<IdealSubset>> {
    kind.check(s.n())?;
    Ok(additively_closed_subsets(s)?
        .into_iter()
        .filter(|&set| escape(s, set, kind).is_none())
        .map(|set| IdealSubset {
            set,
            kinds: alloc::vec![*kind],
        })
        .collect())
}

/// The smallest `kind`-ideal containing `seed`.
pub fn generated_ideal(s: &GammaSemiring, seed: Subset, kind: &IdealKind) -> Result<IdealSubset> {
    kind.check(s.n())?;
    if let Some(bad) = seed.iter().find(|&x| x as usize >= s.m()) {
        return Err(Error::OutOfRange {
            what: "seed element",
            value: bad as usize,
            bound: s.m(),
        });
    }
    let mut set = s.add().closure(seed);
    while let Some((_, _, v)) = escape(s, set, kind) {
        set = s.add().closure(set.with(v));
    }
    Ok(IdealSubset {
        set,
        kinds: alloc::vec![*kind],
    })
}

/// Result of a lattice operation together with the re-verification verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeOutcome {
    pub ideal: Subset,
    /// Whether the result is again an ideal of the common kind.
    pub closure_holds: bool,
}

fn require_kind(i: &IdealSubset, kind: &IdealKind) -> Result<()> {
    if i.has_kind(kind) {
        Ok(())
    } else {
        Err(usage(format!("{} is not tagged as a {kind} ideal", i.set)))
    }
}

pub fn sum_ideals(
    s: &GammaSemiring,
    a: &IdealSubset,
    b: &IdealSubset,
    kind: &IdealKind,
) -> Result<LatticeOutcome> {
    require_kind(a, kind)?;
    require_kind(b, kind)?;
    let ideal = s.add().closure(a.set.union(b.set));
    Ok(LatticeOutcome {
        ideal,
        closure_holds: is_ideal(s, ideal, kind),
    })
}

/// Intersection of a family; the empty family gives the whole carrier.
pub fn intersect_ideals(
    s: &GammaSemiring,
    family: &[IdealSubset],
    kind: &IdealKind,
) -> Result<LatticeOutcome> {
    let mut ideal = s.carrier();
    for i in family {
        require_kind(i, kind)?;
        ideal = ideal.intersection(i.set);
    }
    Ok(LatticeOutcome {
        ideal,
        closure_holds: is_ideal(s, ideal, kind),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InfiniteReason {
    NotAdditivelyClosed,
    NoThreshold,
}

/// The least threshold at which a subset is closed, if any.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ThresholdIndex {
    Finite(usize),
    Infinite(InfiniteReason),
}

impl ThresholdIndex {
    /// Order with every finite value below infinity.
    pub fn rank(self) -> usize {
        match self {
            ThresholdIndex::Finite(k) => k,
            ThresholdIndex::Infinite(_) => usize::MAX,
        }
    }
}

impl fmt::Display for ThresholdIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThresholdIndex::Finite(k) => write!(f, "{k}"),
            ThresholdIndex::Infinite(_) => f.write_str("inf"),
        }
    }
}

pub fn tau(s: &GammaSemiring, set: Subset) -> ThresholdIndex {
    if !is_additively_closed(s, set) {
        return ThresholdIndex::Infinite(InfiniteReason::NotAdditivelyClosed);
    }
    (1..=s.n())
        .find(|&k| escape(s, set, &IdealKind::Threshold(k)).is_none())
        .map_or(
            ThresholdIndex::Infinite(InfiniteReason::NoThreshold),
            ThresholdIndex::Finite,
        )
}

/// Outcome of rebuilding a threshold ideal from positional closures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositionalDecomposition {
    /// For every slot set of the threshold size, the least positional ideal
    /// containing the input.
    pub family: Vec<(SlotSet, Subset)>,
    pub intersection: Subset,
    pub holds: bool,
}

/// Intersect the least `Positional(S)`-ideals containing `set` over every
/// `|S| = threshold` and compare with `set`.
pub fn positional_decomposition_check(
    s: &GammaSemiring,
    set: Subset,
    threshold: usize,
) -> Result<PositionalDecomposition> {
    let kind = IdealKind::Threshold(threshold);
    kind.check(s.n())?;
    if !is_ideal(s, set, &kind) {
        return Err(usage(format!("{set} is not a threshold-{threshold} ideal")));
    }
    let mut family = Vec::new();
    let mut intersection = s.carrier();
    for slots in SlotSet::of_size(s.n(), threshold) {
        let closure = generated_ideal(s, set, &IdealKind::Positional(slots))?.set;
        intersection = intersection.intersection(closure);
        family.push((slots, closure));
    }
    Ok(PositionalDecomposition {
        family,
        intersection,
        holds: intersection == set,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;

    fn sets(list: &[IdealSubset]) -> Vec<Subset> {
        list.iter().map(|i| i.set).collect()
    }

    fn pos(slots: &[usize]) -> IdealKind {
        IdealKind::Positional(SlotSet::from_slots(slots.iter().copied()))
    }

    #[test]
    fn e4_membership() {
        let e4 = instances::guarded_first_projection();
        assert!(is_ideal(&e4, Subset::zero(), &IdealKind::Left));
        let s01 = Subset::from_elements([0, 1]);
        assert!(is_ideal(&e4, s01, &pos(&[1])));
        assert_eq!(
            ideal_defect(&e4, s01, &IdealKind::Left),
            Some(IdealDefect::Escapes {
                gammas: alloc::vec![0, 0],
                args: alloc::vec![2, 1, 1],
                value: 2
            })
        );
        let e2 = instances::boolean_and(3);
        assert!(is_ideal(&e2, e2.carrier(), &IdealKind::TwoSided));
        assert_eq!(
            ideal_defect(&e4, Subset::singleton(1), &IdealKind::Left),
            Some(IdealDefect::MissingZero)
        );
    }

    #[test]
    fn e4_lattices() {
        let e4 = instances::guarded_first_projection();
        assert_eq!(
            sets(&all_ideals(&e4, &IdealKind::TwoSided).unwrap()),
            [Subset::zero(), e4.carrier()]
        );
        assert_eq!(
            sets(&all_ideals(&e4, &pos(&[1])).unwrap()),
            [
                Subset::zero(),
                Subset::from_elements([0, 1]),
                Subset::from_elements([0, 2]),
                e4.carrier()
            ]
        );
        let e1 = instances::trivial();
        for kind in [
            IdealKind::Left,
            IdealKind::Right,
            IdealKind::TwoSided,
            IdealKind::Threshold(2),
        ] {
            assert_eq!(sets(&all_ideals(&e1, &kind).unwrap()), [Subset::zero()]);
        }
        assert!(all_ideals(&e4, &IdealKind::Threshold(4)).is_err());
        assert!(all_ideals(&e4, &pos(&[])).is_err());
    }

    #[test]
    fn generation() {
        let e4 = instances::guarded_first_projection();
        let one = Subset::singleton(1);
        assert_eq!(
            generated_ideal(&e4, one, &IdealKind::TwoSided).unwrap().set,
            e4.carrier()
        );
        assert_eq!(
            generated_ideal(&e4, one, &pos(&[1])).unwrap().set,
            Subset::from_elements([0, 1])
        );
        assert_eq!(
            generated_ideal(&e4, Subset::zero(), &IdealKind::Right)
                .unwrap()
                .set,
            Subset::zero()
        );
    }

    #[test]
    fn sums_and_intersections() {
        let e4 = instances::guarded_first_projection();
        let kind = pos(&[1]);
        let a = IdealSubset::verified(&e4, Subset::from_elements([0, 1]), kind).unwrap();
        let b = IdealSubset::verified(&e4, Subset::from_elements([0, 2]), kind).unwrap();
        let sum = sum_ideals(&e4, &a, &b, &kind).unwrap();
        assert_eq!(
            sum,
            LatticeOutcome {
                ideal: e4.carrier(),
                closure_holds: true
            }
        );
        let meet = intersect_ideals(&e4, &[a.clone(), b], &kind).unwrap();
        assert_eq!(meet.ideal, Subset::zero());
        let full = IdealSubset::verified(&e4, e4.carrier(), kind).unwrap();
        assert_eq!(
            intersect_ideals(&e4, &[full], &kind).unwrap().ideal,
            e4.carrier()
        );
        assert!(matches!(
            sum_ideals(&e4, &a, &a, &IdealKind::Left),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn threshold_index() {
        let e4 = instances::guarded_first_projection();
        assert_eq!(tau(&e4, Subset::zero()), ThresholdIndex::Finite(1));
        assert_eq!(
            tau(&e4, Subset::from_elements([0, 1])),
            ThresholdIndex::Finite(3)
        );
        assert_eq!(tau(&e4, e4.carrier()), ThresholdIndex::Finite(1));
        let illus = instances::three_element_illustration();
        assert_eq!(
            tau(&illus, Subset::from_elements([0, 1])),
            ThresholdIndex::Infinite(InfiniteReason::NotAdditivelyClosed)
        );
    }

    #[test]
    fn positional_decomposition() {
        let e4 = instances::guarded_first_projection();
        assert!(
            positional_decomposition_check(&e4, Subset::zero(), 1)
                .unwrap()
                .holds
        );
        let d = positional_decomposition_check(&e4, Subset::from_elements([0, 1]), 3).unwrap();
        assert_eq!(d.family.len(), 1);
        assert!(d.holds);
        assert!(
            positional_decomposition_check(&instances::trivial(), Subset::zero(), 2)
                .unwrap()
                .holds
        );
    }
}
