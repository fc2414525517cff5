//! Prime spectra with their Zariski-type closed sets, functoriality along
//! surjections, and the discreteness criterion.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::audit::{AuditEntry, Status};
use crate::error::{usage, Result};
use crate::ideals::{all_ideals, is_ideal};
use crate::radicals::{jacobson_radical, prime_radical_from, side_primes, Radical, Side};
use crate::{GammaSemiring, Homomorphism, Subset};

/// Subset pairs are scanned exhaustively up to this carrier size; beyond
/// it only ideals of the side are used as generators.
pub const EXHAUSTIVE_SUBSET_CARRIER: usize = 8;

/// The proper primes of one side, ordered by bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spectrum {
    pub side: Side,
    pub points: Vec<Subset>,
}

/// `V(A)`: the points containing a generator set, as point indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedSet {
    pub generator: Subset,
    pub points: BTreeSet<usize>,
}

pub fn spectrum(s: &GammaSemiring, side: Side) -> Result<Spectrum> {
    Ok(Spectrum {
        side,
        points: side_primes(s, side)?,
    })
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn all_points(&self) -> BTreeSet<usize> {
        (0..self.points.len()).collect()
    }
}

pub fn vanishing_set(spec: &Spectrum, generator: Subset) -> ClosedSet {
    let points = spec
        .points
        .iter()
        .enumerate()
        .filter(|(_, p)| generator.is_subset_of(**p))
        .map(|(i, _)| i)
        .collect();
    ClosedSet { generator, points }
}

/// `D(a)`: points not containing `a`.
pub fn basic_open(spec: &Spectrum, a: crate::Element) -> BTreeSet<usize> {
    spec.points
        .iter()
        .enumerate()
        .filter(|(_, p)| !p.contains(a))
        .map(|(i, _)| i)
        .collect()
}

fn generators(s: &GammaSemiring, side: Side) -> Result<Vec<Subset>> {
    if s.m() <= EXHAUSTIVE_SUBSET_CARRIER {
        Ok((0u64..1 << s.m()).map(Subset::from_bits).collect())
    } else {
        Ok(all_ideals(s, &side.kind())?
            .into_iter()
            .map(|i| i.set)
            .collect())
    }
}

/// Audit the closed-set axioms, the radical invariance of `V`, the T0
/// property and the spectral identification of the prime radical.
pub fn verify_zariski_axioms(s: &GammaSemiring, side: Side) -> Result<Vec<AuditEntry>> {
    let spec = spectrum(s, side)?;
    let id = |name: &str| format!("zariski.{side}.{name}");
    let finish = |name: &str, failure: Option<String>| {
        let id = id(name);
        if spec.is_empty() && failure.is_none() {
            AuditEntry::vacuous(&id)
        } else {
            AuditEntry::check(&id, failure)
        }
    };
    let v = |a: Subset| vanishing_set(&spec, a).points;
    let mut out = Vec::new();

    let mut f = None;
    if v(Subset::zero()) != spec.all_points() {
        f = Some(format!("V({{0}}) = {:?}", v(Subset::zero())));
    } else if !v(s.carrier()).is_empty() {
        f = Some(format!("V(T) = {:?}", v(s.carrier())));
    }
    out.push(finish("empty_and_full", f));

    let gens = generators(s, side)?;
    let mut f = None;
    'ii: for &a in &gens {
        let va = v(a);
        for &b in &gens {
            let lhs: BTreeSet<usize> = va.intersection(&v(b)).copied().collect();
            if lhs != v(a.union(b)) {
                f = Some(format!("A = {a}, B = {b}"));
                break 'ii;
            }
        }
    }
    out.push(finish("intersection", f));

    let ideals: Vec<Subset> = all_ideals(s, &side.kind())?
        .into_iter()
        .map(|i| i.set)
        .collect();
    let mut f = None;
    'iii: for &i in &ideals {
        let vi = v(i);
        for &j in &ideals {
            let lhs: BTreeSet<usize> = vi.union(&v(j)).copied().collect();
            let rhs = v(i.intersection(j));
            if lhs != rhs {
                let extra: Vec<Subset> = rhs.difference(&lhs).map(|&k| spec.points[k]).collect();
                f = Some(format!(
                    "I = {i}, J = {j}: V(I meet J) also contains {extra:?}"
                ));
                break 'iii;
            }
        }
    }
    out.push(finish("finite_union", f));

    let mut f = None;
    for &i in &ideals {
        let rad = prime_radical_from(s.m(), &spec.points, i).set;
        if v(i) != v(rad) {
            f = Some(format!("I = {i}, radical {rad}"));
            break;
        }
    }
    out.push(finish("radical_invariance", f));

    let mut f = None;
    'v: for (x, &p) in spec.points.iter().enumerate() {
        for &q in &spec.points[x + 1..] {
            if !(0..s.m() as crate::Element).any(|a| p.contains(a) != q.contains(a)) {
                f = Some(format!("{p} and {q} are not separated"));
                break 'v;
            }
        }
    }
    out.push(finish("t0", f));

    let mut f = None;
    for &i in &ideals {
        let by_closure = spec
            .points
            .iter()
            .copied()
            .filter(|p| i.is_subset_of(*p))
            .fold(s.carrier(), Subset::intersection);
        let direct = crate::radicals::prime_radical(s, i, side)?.set;
        if by_closure != direct {
            f = Some(format!(
                "I = {i}: closure meet {by_closure}, radical {direct}"
            ));
            break;
        }
    }
    let whole = spec
        .points
        .iter()
        .copied()
        .fold(s.carrier(), Subset::intersection);
    let direct = crate::radicals::prime_radical(s, Subset::zero(), side)?.set;
    if f.is_none() && whole != direct {
        f = Some(format!(
            "meet of all points {whole}, prime radical {direct}"
        ));
    }
    out.push(AuditEntry::check(
        &format!("spectral_identification.{side}"),
        f,
    ));
    Ok(out)
}

/// The induced map between spectra of a surjection, as pairs
/// `(target prime, its preimage)`, with audits of where it lands and of
/// continuity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PullbackMap {
    pub pairs: Vec<(Subset, Subset)>,
    pub lands_in_spectrum: AuditEntry,
    pub continuity: AuditEntry,
}

pub fn pullback_map(f: &Homomorphism<'_>, side: Side) -> Result<PullbackMap> {
    if !f.is_surjective() {
        return Err(usage(
            "spectrum pullback requires a surjective homomorphism",
        ));
    }
    let source = f.source();
    let target_spec = spectrum(f.target(), side)?;
    let source_spec = spectrum(source, side)?;
    let pairs: Vec<(Subset, Subset)> = target_spec
        .points
        .iter()
        .map(|&p| (p, f.pullback(p)))
        .collect();
    let stray = pairs
        .iter()
        .find(|(_, pre)| !source_spec.points.contains(pre));
    let lands_in_spectrum = AuditEntry::check(
        &format!("functoriality.{side}.pullback_is_prime"),
        stray.map(|(p, pre)| format!("prime {p} pulls back to {pre}")),
    );
    let mut failure = None;
    for a in generators(source, side)? {
        let preimage: BTreeSet<usize> = (0..pairs.len())
            .filter(|&k| a.is_subset_of(pairs[k].1))
            .collect();
        let expected = vanishing_set(&target_spec, f.push_forward(a)).points;
        if preimage != expected {
            failure = Some(format!("A = {a}"));
            break;
        }
    }
    let mut continuity = AuditEntry::check(&format!("functoriality.{side}.continuity"), failure);
    if target_spec.is_empty() && continuity.status == Status::Pass {
        continuity.status = Status::Vacuous;
    }
    Ok(PullbackMap {
        pairs,
        lands_in_spectrum,
        continuity,
    })
}

/// Specialization order `P ≤ Q iff P ⊆ Q` (as point-index pairs, `P ≠ Q`)
/// and the irreducible components, the closures of the minimal points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Specialization {
    pub order: Vec<(usize, usize)>,
    pub components: Vec<BTreeSet<usize>>,
}

pub fn specialization_and_components(spec: &Spectrum) -> Specialization {
    let pts = &spec.points;
    let mut order = Vec::new();
    for (i, p) in pts.iter().enumerate() {
        for (j, q) in pts.iter().enumerate() {
            if i != j && p.is_subset_of(*q) {
                order.push((i, j));
            }
        }
    }
    let components = (0..pts.len())
        .filter(|&i| !order.iter().any(|&(_, j)| j == i))
        .map(|i| vanishing_set(spec, pts[i]).points)
        .collect();
    Specialization { order, components }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscretenessReport {
    pub jacobson: Radical,
    pub jacobson_zero: bool,
    /// Every closed set is a union of isolated points.
    pub discrete: bool,
    pub audit: AuditEntry,
}

/// Compare `J = {0}` with discreteness of the two-sided spectrum.
pub fn discreteness_check(s: &GammaSemiring) -> Result<DiscretenessReport> {
    let spec = spectrum(s, Side::Two)?;
    let jacobson = jacobson_radical(s, Side::Two)?;
    let jacobson_zero = !jacobson.empty_family && jacobson.set == Subset::zero();
    let discrete = specialization_and_components(&spec).order.is_empty();
    let id = "spectra.discreteness_iff_jacobson_zero";
    let audit = if spec.is_empty() || jacobson.empty_family {
        AuditEntry::within_bound(
            id,
            "degenerate: empty spectrum or no modular maximal ideals",
        )
    } else if jacobson_zero == discrete {
        AuditEntry::pass(id)
    } else {
        AuditEntry::fail(
            id,
            format!(
                "J = {}, spectrum {:?} is {}discrete",
                jacobson.set,
                spec.points,
                if discrete { "" } else { "not " }
            ),
        )
    };
    Ok(DiscretenessReport {
        jacobson,
        jacobson_zero,
        discrete,
        audit,
    })
}

/// Whether every point of a spectrum is still an ideal of its kind; used by
/// invariant tests.
pub fn points_are_ideals(s: &GammaSemiring, spec: &Spectrum) -> bool {
    spec.points
        .iter()
        .all(|&p| is_ideal(s, p, &spec.side.kind()))
}
