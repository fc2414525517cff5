//! Audit entries and the theorem sweep run over enumerated structures.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::decompose::{crt_check, maximal_family, reduction_modulo_radical};
use crate::error::Result;
use crate::ideals::{
    additively_closed_subsets, all_ideals, intersect_ideals, is_ideal,
    positional_decomposition_check, sum_ideals, tau, IdealKind, IdealSubset, SlotSet,
    ThresholdIndex,
};
use crate::radicals::{audit_radical_theorems, hereditary_primeness_check, is_semiprime, Side};
use crate::spectra::{discreteness_check, verify_zariski_axioms};
use crate::{GammaSemiring, Subset};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Status {
    Pass,
    Fail,
    /// Nothing to check on this instance.
    Vacuous,
    /// Holds over everything searched, but the claim quantifies over more.
    WithinBound,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Vacuous => "vacuous",
            Status::WithinBound => "within_bound",
        }
    }
}

/// Outcome of one checked claim. Failures always carry a witness.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct AuditEntry {
    pub id: String,
    pub status: Status,
    #[cfg_attr(feature = "serde", serde(skip_serializing_if = "Option::is_none"))]
    pub witness: Option<String>,
}

impl AuditEntry {
    pub fn pass(id: &str) -> Self {
        AuditEntry {
            id: id.into(),
            status: Status::Pass,
            witness: None,
        }
    }

    pub fn vacuous(id: &str) -> Self {
        AuditEntry {
            id: id.into(),
            status: Status::Vacuous,
            witness: None,
        }
    }

    pub fn within_bound(id: &str, note: impl Into<String>) -> Self {
        AuditEntry {
            id: id.into(),
            status: Status::WithinBound,
            witness: Some(note.into()),
        }
    }

    pub fn fail(id: &str, witness: impl Into<String>) -> Self {
        AuditEntry {
            id: id.into(),
            status: Status::Fail,
            witness: Some(witness.into()),
        }
    }

    /// Pass, or fail with the given witness.
    pub fn check(id: &str, failure: Option<String>) -> Self {
        match failure {
            None => Self::pass(id),
            Some(w) => Self::fail(id, w),
        }
    }

    pub fn is_fail(&self) -> bool {
        self.status == Status::Fail
    }
}

impl fmt::Display for AuditEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.status.as_str(), self.id)?;
        if let Some(w) = &self.witness {
            write!(f, ": {w}")?;
        }
        Ok(())
    }
}

/// The failing entries of a list.
pub fn failures(entries: &[AuditEntry]) -> Vec<&AuditEntry> {
    entries.iter().filter(|e| e.is_fail()).collect()
}

fn lattice_closure(s: &GammaSemiring, kind: &IdealKind) -> Result<[AuditEntry; 2]> {
    let ideals = all_ideals(s, kind)?;
    let mut meet = None;
    let mut join = None;
    'pairs: for a in &ideals {
        for b in &ideals {
            if meet.is_none() && !intersect_ideals(s, &[a.clone(), b.clone()], kind)?.closure_holds
            {
                meet = Some(format!("{} meet {}", a.set, b.set));
            }
            let sum = sum_ideals(s, a, b, kind)?;
            if join.is_none() && !sum.closure_holds {
                join = Some(format!("{} + {} = {}", a.set, b.set, sum.ideal));
            }
            if meet.is_some() && join.is_some() {
                break 'pairs;
            }
        }
    }
    Ok([
        AuditEntry::check(&format!("lattice.{kind}.intersection_closed"), meet),
        AuditEntry::check(&format!("lattice.{kind}.sum_closed"), join),
    ])
}

fn semiprime_intersections(s: &GammaSemiring) -> Result<AuditEntry> {
    let semis: Vec<Subset> = all_ideals(s, &IdealKind::TwoSided)?
        .into_iter()
        .map(|i| i.set)
        .filter(|&q| is_semiprime(s, q))
        .collect();
    let ok = |q: Subset| is_ideal(s, q, &IdealKind::TwoSided) && is_semiprime(s, q);
    let mut failure = None;
    'outer: for (x, &a) in semis.iter().enumerate() {
        for (y, &b) in semis.iter().enumerate().skip(x) {
            if !ok(a.intersection(b)) {
                failure = Some(format!("{a} meet {b}"));
                break 'outer;
            }
            for &c in &semis[y..] {
                if !ok(a.intersection(b).intersection(c)) {
                    failure = Some(format!("{a} meet {b} meet {c}"));
                    break 'outer;
                }
            }
        }
    }
    Ok(if semis.is_empty() {
        AuditEntry::vacuous("semiprime.intersection_closed")
    } else {
        AuditEntry::check("semiprime.intersection_closed", failure)
    })
}

fn threshold_hierarchy(s: &GammaSemiring) -> Result<AuditEntry> {
    let mut failure = None;
    'outer: for set in additively_closed_subsets(s)? {
        for k in 1..=s.n() {
            if is_ideal(s, set, &IdealKind::Threshold(k)) {
                if let Some(k2) =
                    (k..=s.n()).find(|&k2| !is_ideal(s, set, &IdealKind::Threshold(k2)))
                {
                    failure = Some(format!(
                        "{set} is a threshold-{k} ideal but not threshold-{k2}"
                    ));
                    break 'outer;
                }
            }
        }
    }
    Ok(AuditEntry::check("threshold.hierarchy", failure))
}

/// Claims expected to hold on every valid structure: lattice closure for
/// left, right and two-sided ideals, hereditary primeness along quotient
/// maps, closure of semiprimes under intersection, the threshold
/// hierarchy, the closed-set axioms and the spectral identification of
/// prime radicals for each side.
pub fn theorem_sweep(s: &GammaSemiring) -> Result<Vec<AuditEntry>> {
    let mut out = Vec::new();
    for side in Side::ALL {
        out.extend(lattice_closure(s, &side.kind())?);
    }
    out.push(hereditary_primeness_check(s)?);
    out.push(semiprime_intersections(s)?);
    out.push(threshold_hierarchy(s)?);
    for side in Side::ALL {
        out.extend(verify_zariski_axioms(s, side)?);
    }
    Ok(out)
}

/// Claims whose proofs do not carry over to this setting and are therefore
/// checked rather than assumed: the diagonal description of prime
/// radicals, CRT for semirings, threshold monotonicity, reduction modulo
/// the Jacobson radical, positional decomposition of threshold ideals,
/// lattice closure for threshold and positional ideals, and the remaining
/// radical and spectral statements.
pub fn contested_audits(s: &GammaSemiring) -> Result<Vec<AuditEntry>> {
    let mut out = Vec::new();
    out.extend(audit_radical_theorems(s)?.checks);

    let zero = crt_check(s, &[Subset::zero()])?;
    out.push(zero.audit("decompose.crt.zero_ideal"));
    let maximals = maximal_family(s)?;
    out.push(if maximals.len() >= 2 {
        crt_check(s, &maximals)?.audit("decompose.crt.maximal_ideals")
    } else {
        AuditEntry::vacuous("decompose.crt.maximal_ideals")
    });

    let thresholds: Vec<(Subset, usize)> = additively_closed_subsets(s)?
        .into_iter()
        .filter_map(|set| match tau(s, set) {
            ThresholdIndex::Finite(k) => Some((set, k)),
            ThresholdIndex::Infinite(_) => None,
        })
        .collect();
    let mut mono = None;
    'm: for &(i, ti) in &thresholds {
        for &(j, tj) in &thresholds {
            if i != j && i.is_subset_of(j) && tj < ti {
                mono = Some(format!("{i} within {j} but tau {ti} > {tj}"));
                break 'm;
            }
        }
    }
    out.push(AuditEntry::check("threshold.monotonicity", mono));

    out.push(reduction_modulo_radical(s)?);

    let mut decomposition = None;
    for &(set, k) in &thresholds {
        let d = positional_decomposition_check(s, set, k)?;
        if !d.holds {
            decomposition = Some(format!(
                "{set} with tau {k}: positional closures meet in {}",
                d.intersection
            ));
            break;
        }
    }
    out.push(AuditEntry::check(
        "threshold.positional_decomposition",
        decomposition,
    ));

    for k in 1..=s.n() {
        out.extend(lattice_closure(s, &IdealKind::Threshold(k))?);
    }
    for size in 1..=s.n() {
        for slots in SlotSet::of_size(s.n(), size) {
            out.extend(lattice_closure(s, &IdealKind::Positional(slots))?);
        }
    }
    out.push(discreteness_check(s)?.audit);
    Ok(out)
}

/// Tag a subset with every listed kind it satisfies.
pub fn tag_kinds(s: &GammaSemiring, set: Subset, kinds: &[IdealKind]) -> IdealSubset {
    IdealSubset {
        set,
        kinds: kinds
            .iter()
            .copied()
            .filter(|k| is_ideal(s, set, k))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;

    #[test]
    fn sweep_passes_on_references() {
        for s in [
            instances::guarded_first_projection(),
            instances::boolean_and(3),
            instances::trivial(),
        ] {
            let fails: Vec<_> = failures(&theorem_sweep(&s).unwrap())
                .into_iter()
                .cloned()
                .collect();
            assert!(fails.is_empty(), "{fails:?}");
        }
    }

    #[test]
    fn contested_audits_are_deterministic() {
        let e4 = instances::guarded_first_projection();
        let a = contested_audits(&e4).unwrap();
        assert_eq!(a, contested_audits(&e4).unwrap());
        let find = |id: &str| a.iter().find(|e| e.id == id).unwrap().status;
        assert_eq!(find("decompose.crt.zero_ideal"), Status::Pass);
        assert_eq!(find("radical.diagonal_equals_prime_radical"), Status::Pass);
        assert_eq!(find("threshold.monotonicity"), Status::Fail);
        assert!(a
            .iter()
            .all(|e| e.status != Status::Fail || e.witness.is_some()));
    }
}
