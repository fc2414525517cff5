//! Prime and semiprime ideals, diagonal and prime radicals, modular maximal
//! ideals and Jacobson radicals, together with the radical audits.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::audit::{AuditEntry, Status};
use crate::error::{usage, Result};
use crate::ideals::{all_ideals, is_ideal, IdealKind};
use crate::quotient::bourne_quotient;
use crate::tuples::Odometer;
use crate::{Element, Gamma, GammaSemiring, Homomorphism, Subset};

/// Direction of primeness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    L,
    R,
    Two,
}

impl Side {
    pub const ALL: [Side; 3] = [Side::L, Side::R, Side::Two];

    /// The ideal kind a prime of this side must be.
    pub fn kind(self) -> IdealKind {
        match self {
            Side::L => IdealKind::Left,
            Side::R => IdealKind::Right,
            Side::Two => IdealKind::TwoSided,
        }
    }

    /// 0-based argument slots of which one must lie in a prime containing
    /// the product. Left primes look past the first slot, right primes
    /// before the last one.
    pub(crate) fn factor_slots(self, n: usize) -> core::ops::Range<usize> {
        match self {
            Side::L => 1..n,
            Side::R => 0..n - 1,
            Side::Two => 0..n,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Side::L => "L",
            Side::R => "R",
            Side::Two => "two",
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A failing Γ-tuple and argument tuple.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TupleWitness {
    pub gammas: Vec<Gamma>,
    pub args: Vec<Element>,
}

impl fmt::Display for TupleWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "gammas {:?} args {:?}", self.gammas, self.args)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrimeVerdict {
    Prime,
    /// The subset is not an ideal of the side's kind.
    NotIdeal,
    Counterexample(TupleWitness),
}

impl PrimeVerdict {
    pub fn is_prime(&self) -> bool {
        matches!(self, PrimeVerdict::Prime)
    }
}

/// Test a proper subset for primeness of the given side.
pub fn is_prime(s: &GammaSemiring, p: Subset, side: Side) -> Result<PrimeVerdict> {
    if p.is_full(s.m()) {
        return Err(usage("proper ideal required"));
    }
    if !is_ideal(s, p, &side.kind()) {
        return Ok(PrimeVerdict::NotIdeal);
    }
    Ok(match prime_counterexample(s, p, side) {
        None => PrimeVerdict::Prime,
        Some(w) => PrimeVerdict::Counterexample(w),
    })
}

fn prime_counterexample(s: &GammaSemiring, p: Subset, side: Side) -> Option<TupleWitness> {
    let slots = side.factor_slots(s.n());
    for g in 0..s.gamma_tuples() {
        let mut xs = Odometer::new(s.n(), s.m());
        while let Some(x) = xs.next() {
            if p.contains(s.mu(g, x)) && !x[slots.clone()].iter().any(|&v| p.contains(v)) {
                return Some(TupleWitness {
                    gammas: s.gamma_tuple(g),
                    args: x.to_vec(),
                });
            }
        }
    }
    None
}

/// `μ(a, …, a)` under the Γ-tuple with the given index.
pub fn diagonal(s: &GammaSemiring, a: Element, gamma_index: usize) -> Element {
    let args = [a; crate::MAX_ARITY];
    s.mu(gamma_index, &args[..s.n()])
}

/// First `(a, Γ-tuple)` with the diagonal inside `q` but `a` outside.
pub fn semiprime_defect(s: &GammaSemiring, q: Subset) -> Option<(Element, Vec<Gamma>)> {
    (0..s.m() as Element)
        .filter(|&a| !q.contains(a))
        .find_map(|a| {
            (0..s.gamma_tuples())
                .find(|&g| q.contains(diagonal(s, a, g)))
                .map(|g| (a, s.gamma_tuple(g)))
        })
}

pub fn is_semiprime(s: &GammaSemiring, q: Subset) -> bool {
    semiprime_defect(s, q).is_none()
}

/// Elements whose diagonal lands in `i` for some Γ-tuple. Not closed up to
/// an ideal.
pub fn diagonal_radical(s: &GammaSemiring, i: Subset) -> Subset {
    (0..s.m() as Element)
        .filter(|&a| (0..s.gamma_tuples()).any(|g| i.contains(diagonal(s, a, g))))
        .collect()
}

/// An intersection over a family of ideals; an empty family yields the
/// whole carrier with `empty_family` set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Radical {
    pub set: Subset,
    pub empty_family: bool,
}

fn meet(m: usize, family: impl IntoIterator<Item = Subset>) -> Radical {
    let mut set = Subset::full(m);
    let mut empty_family = true;
    for p in family {
        set = set.intersection(p);
        empty_family = false;
    }
    Radical { set, empty_family }
}

/// All proper primes of the given side, ordered by bits.
pub fn side_primes(s: &GammaSemiring, side: Side) -> Result<Vec<Subset>> {
    Ok(all_ideals(s, &side.kind())?
        .into_iter()
        .map(|i| i.set)
        .filter(|&p| !p.is_full(s.m()) && prime_counterexample(s, p, side).is_none())
        .collect())
}

/// Intersection of the side-primes containing `i`.
pub fn prime_radical(s: &GammaSemiring, i: Subset, side: Side) -> Result<Radical> {
    let primes = side_primes(s, side)?;
    Ok(prime_radical_from(s.m(), &primes, i))
}

pub(crate) fn prime_radical_from(m: usize, primes: &[Subset], i: Subset) -> Radical {
    meet(m, primes.iter().copied().filter(|p| i.is_subset_of(*p)))
}

/// A modular maximal ideal and the least nonzero witness `w` with
/// `a + μ(a, w, …, w, a) = a` for every `a` and every Γ-tuple.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModularMaximal {
    pub ideal: Subset,
    pub witness: Element,
}

/// Least nonzero quasi-identity witness. `w = 0` satisfies the identity in
/// every structure and is therefore not accepted.
pub fn modularity_witness(s: &GammaSemiring) -> Option<Element> {
    let n = s.n();
    let mut args = [0 as Element; crate::MAX_ARITY];
    (1..s.m() as Element).find(|&w| {
        (0..s.m() as Element).all(|a| {
            args[..n].fill(w);
            args[0] = a;
            args[n - 1] = a;
            (0..s.gamma_tuples()).all(|g| s.sum(a, s.mu(g, &args[..n])) == a)
        })
    })
}

/// Maximal proper ideals of the side's kind, provided a witness exists.
pub fn modular_maximal_ideals(s: &GammaSemiring, side: Side) -> Result<Vec<ModularMaximal>> {
    let proper: Vec<Subset> = all_ideals(s, &side.kind())?
        .into_iter()
        .map(|i| i.set)
        .filter(|p| !p.is_full(s.m()))
        .collect();
    let Some(witness) = modularity_witness(s) else {
        return Ok(Vec::new());
    };
    Ok(maximal_elements(&proper)
        .into_iter()
        .map(|ideal| ModularMaximal { ideal, witness })
        .collect())
}

pub(crate) fn maximal_elements(family: &[Subset]) -> Vec<Subset> {
    family
        .iter()
        .copied()
        .filter(|&a| !family.iter().any(|&b| b != a && a.is_subset_of(b)))
        .collect()
}

pub(crate) fn minimal_elements(family: &[Subset]) -> Vec<Subset> {
    family
        .iter()
        .copied()
        .filter(|&a| !family.iter().any(|&b| b != a && b.is_subset_of(a)))
        .collect()
}

pub fn jacobson_radical(s: &GammaSemiring, side: Side) -> Result<Radical> {
    Ok(meet(
        s.m(),
        modular_maximal_ideals(s, side)?
            .into_iter()
            .map(|mm| mm.ideal),
    ))
}

/// Every radical of a structure plus the outcome of the radical audits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadicalReport {
    pub primes: Vec<(Side, Vec<Subset>)>,
    pub prime_radicals: Vec<(Side, Radical)>,
    pub modular_maximals: Vec<(Side, Vec<ModularMaximal>)>,
    pub jacobson: Vec<(Side, Radical)>,
    /// `(ideal, diagonal radical, two-sided prime radical)` per two-sided ideal.
    pub diagonal_radicals: Vec<(Subset, Subset, Radical)>,
    pub checks: Vec<AuditEntry>,
}

impl RadicalReport {
    pub fn jacobson(&self, side: Side) -> Radical {
        self.jacobson
            .iter()
            .find(|(s, _)| *s == side)
            .map(|(_, r)| *r)
            .expect("all sides present")
    }

    pub fn prime_radical(&self, side: Side) -> Radical {
        self.prime_radicals
            .iter()
            .find(|(s, _)| *s == side)
            .map(|(_, r)| *r)
            .expect("all sides present")
    }

    pub fn discrepancies(&self) -> impl Iterator<Item = &AuditEntry> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }
}

/// Compute all radicals and audit the radical theorems on every two-sided
/// ideal.
pub fn audit_radical_theorems(s: &GammaSemiring) -> Result<RadicalReport> {
    let m = s.m();
    let mut primes = Vec::new();
    let mut prime_radicals = Vec::new();
    let mut modular_maximals = Vec::new();
    let mut jacobson = Vec::new();
    for side in Side::ALL {
        let ps = side_primes(s, side)?;
        prime_radicals.push((side, prime_radical_from(m, &ps, Subset::zero())));
        primes.push((side, ps));
        let mms = modular_maximal_ideals(s, side)?;
        jacobson.push((side, meet(m, mms.iter().map(|mm| mm.ideal))));
        modular_maximals.push((side, mms));
    }
    let two_primes = &primes[2].1;
    let two_sided: Vec<Subset> = all_ideals(s, &IdealKind::TwoSided)?
        .into_iter()
        .map(|i| i.set)
        .collect();

    let mut diagonal_radicals = Vec::new();
    let mut diag_fail = None;
    let mut semi_fail = None;
    for &i in &two_sided {
        let diag = diagonal_radical(s, i);
        let rad = prime_radical_from(m, two_primes, i);
        if diag_fail.is_none() && diag != rad.set {
            diag_fail = Some(format!(
                "ideal {i}: diagonal radical {diag}, prime radical {}",
                rad.set
            ));
        }
        if semi_fail.is_none() && is_semiprime(s, i) != (diag == i) {
            semi_fail = Some(format!(
                "ideal {i}: semiprime {} but diagonal radical {diag}",
                is_semiprime(s, i)
            ));
        }
        diagonal_radicals.push((i, diag, rad));
    }
    let vacuous = two_sided.is_empty();
    let mut checks = vec![
        entry("radical.diagonal_equals_prime_radical", vacuous, diag_fail),
        entry("radical.semiprime_iff_diagonal_fixed", vacuous, semi_fail),
        quotient_characterization(s, two_primes, &two_sided)?,
        closure_operator_check(m, two_primes, &two_sided),
    ];
    checks.push(jacobson_semiprime_check(
        s,
        &modular_maximals[2].1,
        jacobson[2].1,
    ));
    Ok(RadicalReport {
        primes,
        prime_radicals,
        modular_maximals,
        jacobson,
        diagonal_radicals,
        checks,
    })
}

fn entry(id: &str, vacuous: bool, failure: Option<String>) -> AuditEntry {
    match failure {
        Some(w) => AuditEntry::fail(id, w),
        None if vacuous => AuditEntry::vacuous(id),
        None => AuditEntry::pass(id),
    }
}

/// A proper two-sided ideal is prime exactly when the quotient has no
/// n-ary zero-divisor tuple: nonzero classes whose product is the zero class.
fn quotient_characterization(
    s: &GammaSemiring,
    primes: &[Subset],
    two_sided: &[Subset],
) -> Result<AuditEntry> {
    let mut failure = None;
    let mut any = false;
    for &p in two_sided.iter().filter(|p| !p.is_full(s.m())) {
        any = true;
        let q = bourne_quotient(s, p)?;
        let divisor = zero_divisor_tuple(q.quotient());
        let prime = primes.contains(&p);
        if prime == divisor.is_some() {
            failure = Some(match divisor {
                Some(w) => format!("prime {p} but quotient has zero-divisor tuple {w}"),
                None => format!("ideal {p} is not prime yet quotient has no zero-divisor tuple"),
            });
            break;
        }
    }
    Ok(entry(
        "radical.quotient_zero_divisor_characterization",
        !any,
        failure,
    ))
}

pub(crate) fn zero_divisor_tuple(q: &GammaSemiring) -> Option<TupleWitness> {
    for g in 0..q.gamma_tuples() {
        let mut xs = Odometer::nonzero(q.n(), q.m());
        while let Some(x) = xs.next() {
            if q.mu(g, x) == 0 {
                return Some(TupleWitness {
                    gammas: q.gamma_tuple(g),
                    args: x.to_vec(),
                });
            }
        }
    }
    None
}

/// `I ↦ prime radical of I` is extensive, isotone and idempotent.
fn closure_operator_check(m: usize, primes: &[Subset], ideals: &[Subset]) -> AuditEntry {
    let rad = |i: Subset| prime_radical_from(m, primes, i).set;
    let mut failure = None;
    'outer: for &i in ideals {
        let ri = rad(i);
        if !i.is_subset_of(ri) {
            failure = Some(format!("not extensive at {i}: radical {ri}"));
            break;
        }
        if rad(ri) != ri {
            failure = Some(format!("not idempotent at {i}: {ri} then {}", rad(ri)));
            break;
        }
        for &j in ideals {
            if i.is_subset_of(j) && !ri.is_subset_of(rad(j)) {
                failure = Some(format!(
                    "not isotone: {i} within {j} but {ri} not within {}",
                    rad(j)
                ));
                break 'outer;
            }
        }
    }
    entry("radical.closure_operator", ideals.is_empty(), failure)
}

/// The Jacobson radical is semiprime whenever every modular maximal ideal
/// is prime; the unconditional form is recorded separately.
fn jacobson_semiprime_check(s: &GammaSemiring, mms: &[ModularMaximal], j: Radical) -> AuditEntry {
    let all_prime = mms
        .iter()
        .all(|mm| prime_counterexample(s, mm.ideal, Side::Two).is_none());
    let semiprime = semiprime_defect(s, j.set);
    let id = "radical.jacobson_semiprime";
    match semiprime {
        None if mms.is_empty() => AuditEntry::vacuous(id),
        None => AuditEntry::pass(id),
        Some((a, g)) => {
            let w = format!("J = {}: diagonal of {a} under {g:?} lies in J", j.set);
            if all_prime {
                AuditEntry::fail(id, w)
            } else {
                AuditEntry::fail(id, format!("{w} (some modular maximal ideal is not prime)"))
            }
        }
    }
}

/// Pull back every side-prime of the quotient by each two-sided ideal and
/// check that the result is a side-prime of `s`.
pub fn hereditary_primeness_check(s: &GammaSemiring) -> Result<AuditEntry> {
    let mut failure = None;
    let two_sided: Vec<Subset> = all_ideals(s, &IdealKind::TwoSided)?
        .into_iter()
        .map(|i| i.set)
        .collect();
    'outer: for &i in &two_sided {
        let q = bourne_quotient(s, i)?;
        let proj: Homomorphism<'_> = q.projection();
        for side in Side::ALL {
            for p in side_primes(q.quotient(), side)? {
                let pre = proj.pullback(p);
                let ok = !pre.is_full(s.m())
                    && is_ideal(s, pre, &side.kind())
                    && prime_counterexample(s, pre, side).is_none();
                if !ok {
                    failure = Some(format!(
                        "quotient by {i}: {side}-prime {p} pulls back to {pre}"
                    ));
                    break 'outer;
                }
            }
        }
    }
    Ok(entry(
        "radical.hereditary_primeness",
        two_sided.is_empty(),
        failure,
    ))
}
