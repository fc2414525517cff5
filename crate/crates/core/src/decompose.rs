//! Comaximality, Chinese-remainder maps, Wedderburn-type decompositions,
//! pinning to a ternary operation, and the spectral decomposition audits.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::audit::AuditEntry;
use crate::error::{usage, Error, Result};
use crate::ideals::{all_ideals, is_ideal, IdealKind};
use crate::modreps::primitive_ideals;
use crate::quotient::{bourne_quotient, congruence_quotient, partition_of};
use crate::radicals::{
    diagonal, diagonal_radical, jacobson_radical, maximal_elements, minimal_elements, Side,
};
use crate::spectra::spectrum;
use crate::tuples::Odometer;
use crate::{
    validate, AdditionTable, Element, Gamma, GammaSemiring, Homomorphism, Subset, MAX_ARITY,
    MAX_CARRIER,
};

pub fn are_comaximal(s: &GammaSemiring, i: Subset, j: Subset) -> bool {
    s.add().closure(i.union(j)).is_full(s.m())
}

/// Outcome of the Chinese-remainder check for a family of ideals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrtReport {
    pub ideals: Vec<Subset>,
    pub pairwise_comaximal: bool,
    pub map_is_homomorphism: bool,
    pub surjective: bool,
    pub kernel_equals_intersection: bool,
    /// Size of the product of the quotients, when built.
    pub product_size: Option<usize>,
    pub witnesses: Vec<String>,
}

impl CrtReport {
    pub fn passed(&self) -> bool {
        self.pairwise_comaximal
            && self.map_is_homomorphism
            && self.surjective
            && self.kernel_equals_intersection
    }

    pub fn audit(&self, id: &str) -> AuditEntry {
        if self.passed() {
            AuditEntry::pass(id)
        } else {
            AuditEntry::fail(
                id,
                format!("ideals {:?}: {}", self.ideals, self.witnesses.join("; ")),
            )
        }
    }
}

/// Product of structures of equal arity and Γ-size, with elements encoded
/// in mixed radix (first factor slowest).
pub fn product(factors: &[&GammaSemiring]) -> Result<GammaSemiring> {
    let first = factors.first().ok_or_else(|| usage("empty product"))?;
    let (n, r) = (first.n(), first.r());
    if factors.iter().any(|f| f.n() != n || f.r() != r) {
        return Err(usage("product factors must share arity and Γ-size"));
    }
    let size = factors
        .iter()
        .try_fold(1usize, |acc, f| acc.checked_mul(f.m()))
        .unwrap_or(usize::MAX);
    if size > MAX_CARRIER {
        return Err(Error::Capacity {
            what: "product carrier",
            actual: size,
            limit: MAX_CARRIER,
        });
    }
    let radix: Vec<usize> = factors.iter().map(|f| f.m()).collect();
    let encode = |parts: &[Element]| {
        parts
            .iter()
            .zip(&radix)
            .fold(0usize, |acc, (&p, &k)| acc * k + p as usize) as Element
    };
    let decode = |mut x: usize, out: &mut [Element]| {
        for (slot, &k) in out.iter_mut().zip(&radix).rev() {
            *slot = (x % k) as Element;
            x /= k;
        }
    };
    let f = factors.len();
    let add = AdditionTable::from_fn(size, |a, b| {
        let (mut pa, mut pb) = (vec![0; f], vec![0; f]);
        decode(a as usize, &mut pa);
        decode(b as usize, &mut pb);
        let sum: Vec<Element> = (0..f).map(|i| factors[i].sum(pa[i], pb[i])).collect();
        encode(&sum)
    })?;
    let mut parts = vec![vec![0 as Element; f]; n];
    let mut args = vec![0 as Element; n];
    let mut out = vec![0; f];
    GammaSemiring::from_fn(n, r, add, first.assoc_mode(), |g, xs| {
        for (p, &x) in parts.iter_mut().zip(xs) {
            decode(x as usize, p);
        }
        let gi = first.gamma_index(g);
        for i in 0..f {
            for (a, p) in args.iter_mut().zip(&parts) {
                *a = p[i];
            }
            out[i] = factors[i].mu(gi, &args);
        }
        encode(&out)
    })
}

pub fn crt_check(s: &GammaSemiring, ideals: &[Subset]) -> Result<CrtReport> {
    let mut report = CrtReport {
        ideals: ideals.to_vec(),
        pairwise_comaximal: true,
        map_is_homomorphism: false,
        surjective: false,
        kernel_equals_intersection: false,
        product_size: None,
        witnesses: Vec::new(),
    };
    if ideals.is_empty() {
        return Err(usage("CRT needs a nonempty family"));
    }
    for (x, &i) in ideals.iter().enumerate() {
        for &j in &ideals[x + 1..] {
            if !are_comaximal(s, i, j) {
                report.pairwise_comaximal = false;
                report
                    .witnesses
                    .push(format!("{i} + {j} = {}", s.add().closure(i.union(j))));
                return Ok(report);
            }
        }
    }
    let quotients = ideals
        .iter()
        .map(|&i| bourne_quotient(s, i))
        .collect::<Result<Vec<_>>>()?;
    let factors: Vec<&GammaSemiring> = quotients.iter().map(|q| q.quotient()).collect();
    let prod = product(&factors)?;
    report.product_size = Some(prod.m());
    let phi: Vec<Element> = (0..s.m() as Element)
        .map(|a| {
            quotients.iter().fold(0usize, |acc, q| {
                acc * q.quotient().m() + q.class_of(a) as usize
            }) as Element
        })
        .collect();
    let map = Homomorphism::new(s, &prod, phi.clone())?;
    match map.first_defect() {
        None => report.map_is_homomorphism = true,
        Some(d) => report.witnesses.push(format!("not a homomorphism: {d:?}")),
    }
    report.surjective = map.is_surjective();
    if !report.surjective {
        let missing = map.image().complement(prod.m());
        report
            .witnesses
            .push(format!("product elements {missing} are not hit"));
    }
    let meet = ideals
        .iter()
        .fold(s.carrier(), |acc, &i| acc.intersection(i));
    let bourne = congruence_quotient(s, meet);
    let kernel = kernel_partition(&phi);
    let expected: Vec<Subset> = bourne.classes().to_vec();
    report.kernel_equals_intersection = kernel == expected;
    if !report.kernel_equals_intersection {
        report.witnesses.push(format!(
            "kernel classes {kernel:?}, Bourne classes of {meet}: {expected:?}"
        ));
    }
    Ok(report)
}

fn kernel_partition(phi: &[Element]) -> Vec<Subset> {
    let mut class_of = vec![0 as Element; phi.len()];
    let mut seen: Vec<Element> = Vec::new();
    for (x, &v) in phi.iter().enumerate() {
        class_of[x] = match seen.iter().position(|&w| w == v) {
            Some(c) => c as Element,
            None => {
                seen.push(v);
                (seen.len() - 1) as Element
            }
        };
    }
    partition_of(&class_of)
}

/// Semisimple decomposition through minimal primitive ideals found within
/// the module search bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WedderburnReport {
    pub jacobson_zero: bool,
    pub minimal_primitives: Vec<Subset>,
    pub crt: Option<CrtReport>,
    pub injective: bool,
    pub factor_count: usize,
    pub audit: AuditEntry,
}

pub fn wedderburn_check(s: &GammaSemiring, j: usize, k_max: usize) -> Result<WedderburnReport> {
    let id = "decompose.wedderburn";
    let jac = jacobson_radical(s, Side::Two)?;
    let jacobson_zero = !jac.empty_family && jac.set == Subset::zero();
    let prims = primitive_ideals(s, j, k_max)?;
    let sets: Vec<Subset> = prims.ideals.iter().map(|(p, _)| *p).collect();
    let minimal_primitives = minimal_elements(&sets);
    let mut report = WedderburnReport {
        jacobson_zero,
        minimal_primitives: minimal_primitives.clone(),
        crt: None,
        injective: false,
        factor_count: 0,
        audit: AuditEntry::vacuous(id),
    };
    if !jacobson_zero || minimal_primitives.is_empty() {
        return Ok(report);
    }
    if let Some(&bad) = minimal_primitives
        .iter()
        .find(|&&p| !is_ideal(s, p, &IdealKind::TwoSided))
    {
        report.audit = AuditEntry::fail(
            id,
            format!("minimal primitive {bad} is not a two-sided ideal"),
        );
        return Ok(report);
    }
    let crt = crt_check(s, &minimal_primitives)?;
    report.factor_count = minimal_primitives.len();
    let quotients = minimal_primitives
        .iter()
        .map(|&p| bourne_quotient(s, p))
        .collect::<Result<Vec<_>>>()?;
    report.injective = (0..s.m() as Element).all(|a| {
        (a + 1..s.m() as Element).all(|b| quotients.iter().any(|q| q.class_of(a) != q.class_of(b)))
    });
    report.audit = if crt.passed() && report.injective {
        AuditEntry::within_bound(
            id,
            format!("{} factors from minimal primitive ideals found with slot {j}, carrier at most {k_max}", report.factor_count),
        )
    } else if !report.injective {
        AuditEntry::fail(
            id,
            format!("product over {minimal_primitives:?} does not separate points"),
        )
    } else {
        crt.audit(id)
    };
    report.crt = Some(crt);
    Ok(report)
}

/// Nonzero elements `e` with `μ(e, …, e) = e` under every Γ-tuple such that
/// exchanging `e` with a neighbouring argument never changes a product.
pub fn central_idempotents(s: &GammaSemiring) -> Vec<Element> {
    (1..s.m() as Element)
        .filter(|&e| is_central_idempotent(s, e))
        .collect()
}

pub fn is_central_idempotent(s: &GammaSemiring, e: Element) -> bool {
    if e == 0 || (0..s.gamma_tuples()).any(|g| diagonal(s, e, g) != e) {
        return false;
    }
    let n = s.n();
    let mut swapped = [0; MAX_ARITY];
    for g in 0..s.gamma_tuples() {
        let mut xs = Odometer::new(n, s.m());
        while let Some(x) = xs.next() {
            for i in 0..n - 1 {
                if x[i] != e && x[i + 1] != e {
                    continue;
                }
                swapped[..n].copy_from_slice(x);
                swapped.swap(i, i + 1);
                if s.mu(g, x) != s.mu(g, &swapped[..n]) {
                    return false;
                }
            }
        }
    }
    true
}

/// How to collapse an n-ary operation to a ternary one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PinningSpec {
    pub e: Element,
    /// For each n-ary Γ-tuple (by index), the ternary Γ-pair it induces.
    pub gamma_map: Vec<(Gamma, Gamma)>,
}

impl PinningSpec {
    /// Pair each Γ-tuple with its first and last components.
    pub fn first_last(s: &GammaSemiring, e: Element) -> Self {
        let gamma_map = (0..s.gamma_tuples())
            .map(|g| {
                let t = s.gamma_tuple(g);
                (t[0], t[t.len() - 1])
            })
            .collect();
        PinningSpec { e, gamma_map }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PinnedReport {
    pub structure: GammaSemiring,
    pub audits: Vec<AuditEntry>,
}

/// The ternary operation `x ŷ z = μ(x, e, …, e, y, z)`, where each ternary
/// Γ-pair uses its lexicographically first preimage under the gamma map.
pub fn pinned_ternary(s: &GammaSemiring, spec: &PinningSpec) -> Result<PinnedReport> {
    let n = s.n();
    if n <= 3 {
        return Err(usage(format!("pinning needs arity above 3, got {n}")));
    }
    if spec.e as usize >= s.m() || !is_central_idempotent(s, spec.e) {
        return Err(usage(format!(
            "{} is not a nonzero central idempotent; candidates are {:?}",
            spec.e,
            central_idempotents(s)
        )));
    }
    if spec.gamma_map.len() != s.gamma_tuples() {
        return Err(usage("gamma map must cover every Γ-tuple"));
    }
    let r = s.r();
    let mut section: Vec<Option<usize>> = vec![None; r * r];
    for (g, &(a, b)) in spec.gamma_map.iter().enumerate() {
        if a as usize >= r || b as usize >= r {
            return Err(Error::OutOfRange {
                what: "gamma map value",
                value: a.max(b) as usize,
                bound: r,
            });
        }
        section[a as usize * r + b as usize].get_or_insert(g);
    }
    if section.iter().any(Option::is_none) {
        return Err(usage("gamma map is not surjective onto Γ-pairs"));
    }
    let pin = |g: usize, x: &[Element]| {
        let mut args = [spec.e; MAX_ARITY];
        args[0] = x[0];
        args[n - 2] = x[1];
        args[n - 1] = x[2];
        s.mu(g, &args[..n])
    };
    let structure = GammaSemiring::from_fn(3, r, s.add().clone(), s.assoc_mode(), |gp, x| {
        pin(
            section[gp[0] as usize * r + gp[1] as usize].expect("surjective"),
            x,
        )
    })?;

    let mut audits = Vec::new();
    let mut inconsistent = None;
    'c: for (g, &(a, b)) in spec.gamma_map.iter().enumerate() {
        let mut xs = Odometer::new(3, s.m());
        while let Some(x) = xs.next() {
            if pin(g, x) != structure.mu(a as usize * r + b as usize, x) {
                inconsistent = Some(format!(
                    "Γ-tuple {:?} disagrees with its section at {x:?}",
                    s.gamma_tuple(g)
                ));
                break 'c;
            }
        }
    }
    audits.push(AuditEntry::check(
        "pinning.gamma_section_consistent",
        inconsistent,
    ));
    let report = validate(&structure);
    audits.push(AuditEntry::check(
        "pinning.pinned_valid",
        report.violations.first().map(|v| format!("{v}")),
    ));

    let mut kinds = vec![IdealKind::Left, IdealKind::Right, IdealKind::TwoSided];
    kinds.extend((1..=3).map(IdealKind::Threshold));
    let mut transfer = None;
    let mut lists_differ = None;
    for kind in &kinds {
        let source: Vec<Subset> = all_ideals(s, kind)?.into_iter().map(|i| i.set).collect();
        let pinned: Vec<Subset> = all_ideals(&structure, kind)?
            .into_iter()
            .map(|i| i.set)
            .collect();
        if matches!(kind, IdealKind::Threshold(_)) && transfer.is_none() {
            if let Some(i) = source.iter().find(|i| !pinned.contains(i)) {
                transfer = Some(format!(
                    "{kind} ideal {i} is not an ideal of the pinned structure"
                ));
            }
        }
        if source != pinned && lists_differ.is_none() {
            lists_differ = Some(format!("{kind}: {source:?} versus {pinned:?}"));
        }
    }
    audits.push(AuditEntry::check(
        "pinning.threshold_ideals_transfer",
        transfer,
    ));
    audits.push(AuditEntry::check(
        "pinning.ideal_lattices_equal",
        lists_differ,
    ));

    let mut diag = None;
    for i in all_ideals(s, &IdealKind::TwoSided)? {
        let (a, b) = (
            diagonal_radical(s, i.set),
            diagonal_radical(&structure, i.set),
        );
        if a != b {
            diag = Some(format!("ideal {}: {a} versus {b}", i.set));
            break;
        }
    }
    audits.push(AuditEntry::check(
        "pinning.diagonal_radicals_transfer",
        diag,
    ));
    let (ja, jb) = (
        jacobson_radical(s, Side::Two)?,
        jacobson_radical(&structure, Side::Two)?,
    );
    audits.push(AuditEntry::check(
        "pinning.jacobson_transfer",
        (ja != jb).then(|| format!("{} versus {}", ja.set, jb.set)),
    ));
    Ok(PinnedReport { structure, audits })
}

/// Compare the two-sided spectrum with the disjoint union of the quotient
/// spectra pulled back along the projections.
pub fn spectra_disjoint_union_check(s: &GammaSemiring, ideals: &[Subset]) -> Result<AuditEntry> {
    let id = "decompose.spectra_disjoint_union";
    if !crt_check(s, ideals)?.passed() {
        return Ok(AuditEntry::vacuous(id));
    }
    let points = spectrum(s, Side::Two)?.points;
    let mut tagged: Vec<(usize, Subset)> = Vec::new();
    for (k, &i) in ideals.iter().enumerate() {
        let q = bourne_quotient(s, i)?;
        let proj = q.projection();
        for p in spectrum(q.quotient(), Side::Two)?.points {
            tagged.push((k, proj.pullback(p)));
        }
    }
    let mut union: Vec<Subset> = tagged.iter().map(|(_, p)| *p).collect();
    union.sort_by_key(|p| p.bits());
    let disjoint = union.windows(2).all(|w| w[0] != w[1]);
    union.dedup();
    Ok(if union == points && disjoint {
        AuditEntry::pass(id)
    } else {
        AuditEntry::fail(
            id,
            format!("spectrum {points:?}, pulled-back factors {tagged:?}"),
        )
    })
}

/// `T / J` should have zero Jacobson radical.
pub fn reduction_modulo_radical(s: &GammaSemiring) -> Result<AuditEntry> {
    let id = "decompose.reduction_modulo_radical";
    let jac = jacobson_radical(s, Side::Two)?;
    if jac.empty_family {
        return Ok(AuditEntry::vacuous(id));
    }
    let q = bourne_quotient(s, jac.set)?;
    let jq = jacobson_radical(q.quotient(), Side::Two)?;
    Ok(if !jq.empty_family && jq.set == Subset::zero() {
        AuditEntry::pass(id)
    } else if jq.empty_family {
        AuditEntry::fail(
            id,
            format!("T/J with J = {} has no modular maximal ideals", jac.set),
        )
    } else {
        AuditEntry::fail(
            id,
            format!("T/J with J = {} has Jacobson radical {}", jac.set, jq.set),
        )
    })
}

/// Run the CRT check on the maximal proper two-sided ideals when there are
/// at least two of them.
pub fn maximal_family(s: &GammaSemiring) -> Result<Vec<Subset>> {
    let proper: Vec<Subset> = all_ideals(s, &IdealKind::TwoSided)?
        .into_iter()
        .map(|i| i.set)
        .filter(|i| !i.is_full(s.m()))
        .collect();
    Ok(maximal_elements(&proper))
}
