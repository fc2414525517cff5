//! Analysis reports.
//!
//! Every section is built from plain owned data with a fixed field order,
//! so serializing the same structure twice yields identical bytes.

use gsr_core::audit::{contested_audits, theorem_sweep};
use gsr_core::classify::{canonical_form, content_digest};
use gsr_core::decompose::{
    central_idempotents, crt_check, maximal_family, wedderburn_check, CrtReport,
};
use gsr_core::ideals::{
    additively_closed_subsets, all_ideals, tau, IdealKind, InfiniteReason, SlotSet, ThresholdIndex,
};
use gsr_core::modreps::{
    audit_representation_theorems, enumerate_modules, is_simple, primitive_ideals,
};
use gsr_core::radicals::{audit_radical_theorems, modularity_witness, Radical, Side};
use gsr_core::spectra::{discreteness_check, specialization_and_components, spectrum};
use gsr_core::{
    symmetry_profile, validate_with, AuditEntry, Element, GammaSemiring, Subset, Violation,
};
use serde::Serialize;

/// Module search bounds used by `analyze`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModuleBounds {
    pub slot: usize,
    pub max_carrier: usize,
}

impl Default for ModuleBounds {
    fn default() -> Self {
        ModuleBounds {
            slot: 2,
            max_carrier: 2,
        }
    }
}

pub type Elements = Vec<Element>;

pub fn elements(s: Subset) -> Elements {
    s.iter().collect()
}

#[derive(Serialize, Debug, Clone, PartialEq, Eq)]
pub struct Shape {
    pub m: usize,
    pub n: usize,
    pub r: usize,
    pub assoc_mode: &'static str,
}

impl Shape {
    pub fn of(s: &GammaSemiring) -> Self {
        Shape {
            m: s.m(),
            n: s.n(),
            r: s.r(),
            assoc_mode: s.assoc_mode().as_str(),
        }
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct ValidationSection {
    pub valid: bool,
    pub violations: Vec<Violation>,
    /// Argument transpositions `[i, j]` that change some product.
    pub asymmetric_transpositions: Vec<(usize, usize)>,
}

#[derive(Serialize, Debug, Clone)]
pub struct KindIdeals {
    pub kind: String,
    pub ideals: Vec<Elements>,
}

#[derive(Serialize, Debug, Clone)]
pub struct ThresholdEntry {
    pub set: Elements,
    /// `None` when no threshold closes the set.
    pub tau: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<&'static str>,
}

#[derive(Serialize, Debug, Clone)]
pub struct IdealsSection {
    pub additively_closed: Vec<Elements>,
    pub by_kind: Vec<KindIdeals>,
    pub thresholds: Vec<ThresholdEntry>,
}

#[derive(Serialize, Debug, Clone)]
pub struct RadicalView {
    pub set: Elements,
    /// The defining family was empty, so the radical is the whole carrier.
    pub empty_family: bool,
}

impl From<Radical> for RadicalView {
    fn from(r: Radical) -> Self {
        RadicalView {
            set: elements(r.set),
            empty_family: r.empty_family,
        }
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct ModularMaximalView {
    pub ideal: Elements,
    pub witness: Element,
}

#[derive(Serialize, Debug, Clone)]
pub struct SideRadicals {
    pub side: &'static str,
    pub primes: Vec<Elements>,
    pub prime_radical: RadicalView,
    pub modular_maximals: Vec<ModularMaximalView>,
    pub jacobson: RadicalView,
}

#[derive(Serialize, Debug, Clone)]
pub struct DiagonalEntry {
    pub ideal: Elements,
    pub diagonal_radical: Elements,
    pub prime_radical: Elements,
}

#[derive(Serialize, Debug, Clone)]
pub struct RadicalsSection {
    pub modularity_witness: Option<Element>,
    pub sides: Vec<SideRadicals>,
    pub diagonal_radicals: Vec<DiagonalEntry>,
}

#[derive(Serialize, Debug, Clone)]
pub struct SpectrumSection {
    pub side: &'static str,
    pub points: Vec<Elements>,
    /// Pairs `[a, b]` of point indices with `a` in the closure of `b`.
    pub specialization: Vec<(usize, usize)>,
    pub components: Vec<Vec<usize>>,
}

#[derive(Serialize, Debug, Clone)]
pub struct SpectraSection {
    pub sides: Vec<SpectrumSection>,
    pub jacobson_zero: bool,
    pub discrete: bool,
}

#[derive(Serialize, Debug, Clone)]
pub struct PrimitiveEntry {
    pub ideal: Elements,
    pub witness: String,
}

#[derive(Serialize, Debug, Clone)]
pub struct ModulesSection {
    pub slot: usize,
    pub max_carrier: usize,
    /// `"computed"`, or `"not_run"` with a reason when a limit was hit.
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub module_classes: usize,
    pub simple_modules: usize,
    pub primitive_ideals: Vec<PrimitiveEntry>,
}

#[derive(Serialize, Debug, Clone)]
pub struct CrtView {
    pub ideals: Vec<Elements>,
    pub pairwise_comaximal: bool,
    pub map_is_homomorphism: bool,
    pub surjective: bool,
    pub kernel_equals_intersection: bool,
    pub product_size: Option<usize>,
    pub witnesses: Vec<String>,
}

impl From<CrtReport> for CrtView {
    fn from(c: CrtReport) -> Self {
        CrtView {
            ideals: c.ideals.into_iter().map(elements).collect(),
            pairwise_comaximal: c.pairwise_comaximal,
            map_is_homomorphism: c.map_is_homomorphism,
            surjective: c.surjective,
            kernel_equals_intersection: c.kernel_equals_intersection,
            product_size: c.product_size,
            witnesses: c.witnesses,
        }
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct WedderburnView {
    pub jacobson_zero: bool,
    pub minimal_primitives: Vec<Elements>,
    pub factor_count: usize,
    pub injective: bool,
    pub crt: Option<CrtView>,
}

#[derive(Serialize, Debug, Clone)]
pub struct DecompositionSection {
    pub central_idempotents: Vec<Element>,
    pub maximal_ideals: Vec<Elements>,
    pub crt_maximal: Option<CrtView>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wedderburn: Option<WedderburnView>,
}

/// The full analysis of one structure.
#[derive(Serialize, Debug, Clone)]
pub struct AnalysisReport {
    pub structure_digest: String,
    pub canonical_digest: String,
    pub shape: Shape,
    pub validation: ValidationSection,
    pub checks: Vec<AuditEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ideals: Option<IdealsSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radicals: Option<RadicalsSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectra: Option<SpectraSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modules: Option<ModulesSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompositionSection>,
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }

    pub fn failures(&self) -> impl Iterator<Item = &AuditEntry> {
        self.checks.iter().filter(|c| c.is_fail())
    }
}

fn ideal_kinds(n: usize) -> Vec<IdealKind> {
    let mut kinds = vec![IdealKind::Left, IdealKind::Right, IdealKind::TwoSided];
    kinds.extend((1..=n).map(IdealKind::Threshold));
    kinds.extend(
        (1..=n)
            .flat_map(|k| SlotSet::of_size(n, k))
            .map(IdealKind::Positional),
    );
    kinds
}

fn ideals_section(s: &GammaSemiring) -> gsr_core::Result<IdealsSection> {
    let closed = additively_closed_subsets(s)?;
    let mut by_kind = Vec::new();
    for kind in ideal_kinds(s.n()) {
        by_kind.push(KindIdeals {
            kind: kind.label(),
            ideals: all_ideals(s, &kind)?
                .into_iter()
                .map(|i| elements(i.set))
                .collect(),
        });
    }
    let thresholds = closed
        .iter()
        .map(|&set| {
            let (tau, reason) = match tau(s, set) {
                ThresholdIndex::Finite(k) => (Some(k), None),
                ThresholdIndex::Infinite(InfiniteReason::NotAdditivelyClosed) => {
                    (None, Some("not_additively_closed"))
                }
                ThresholdIndex::Infinite(InfiniteReason::NoThreshold) => {
                    (None, Some("no_threshold"))
                }
            };
            ThresholdEntry {
                set: elements(set),
                tau,
                reason,
            }
        })
        .collect();
    Ok(IdealsSection {
        additively_closed: closed.into_iter().map(elements).collect(),
        by_kind,
        thresholds,
    })
}

fn radicals_section(s: &GammaSemiring) -> gsr_core::Result<RadicalsSection> {
    let report = audit_radical_theorems(s)?;
    let mut sides = Vec::new();
    for side in Side::ALL {
        let primes = report
            .primes
            .iter()
            .find(|(sd, _)| *sd == side)
            .map(|(_, p)| p.iter().map(|&x| elements(x)).collect())
            .unwrap_or_default();
        let modular_maximals = report
            .modular_maximals
            .iter()
            .find(|(sd, _)| *sd == side)
            .map(|(_, mm)| {
                mm.iter()
                    .map(|m| ModularMaximalView {
                        ideal: elements(m.ideal),
                        witness: m.witness,
                    })
                    .collect()
            })
            .unwrap_or_default();
        sides.push(SideRadicals {
            side: side.as_str(),
            primes,
            prime_radical: report.prime_radical(side).into(),
            modular_maximals,
            jacobson: report.jacobson(side).into(),
        });
    }
    let diagonal_radicals = report
        .diagonal_radicals
        .iter()
        .map(|(i, d, p)| DiagonalEntry {
            ideal: elements(*i),
            diagonal_radical: elements(*d),
            prime_radical: elements(p.set),
        })
        .collect();
    Ok(RadicalsSection {
        modularity_witness: modularity_witness(s),
        sides,
        diagonal_radicals,
    })
}

fn spectra_section(s: &GammaSemiring) -> gsr_core::Result<SpectraSection> {
    let mut sides = Vec::new();
    for side in Side::ALL {
        let spec = spectrum(s, side)?;
        let sp = specialization_and_components(&spec);
        sides.push(SpectrumSection {
            side: side.as_str(),
            points: spec.points.iter().map(|&p| elements(p)).collect(),
            specialization: sp.order,
            components: sp
                .components
                .into_iter()
                .map(|c| c.into_iter().collect())
                .collect(),
        });
    }
    let d = discreteness_check(s)?;
    Ok(SpectraSection {
        sides,
        jacobson_zero: d.jacobson_zero,
        discrete: d.discrete,
    })
}

fn modules_section(
    s: &GammaSemiring,
    bounds: ModuleBounds,
) -> (ModulesSection, Vec<AuditEntry>, Option<WedderburnView>) {
    let not_run = |reason: String| ModulesSection {
        slot: bounds.slot,
        max_carrier: bounds.max_carrier,
        status: "not_run",
        reason: Some(reason),
        module_classes: 0,
        simple_modules: 0,
        primitive_ideals: Vec::new(),
    };
    let modules = match enumerate_modules(s, bounds.slot, bounds.max_carrier) {
        Ok(m) => m,
        Err(e) => return (not_run(e.to_string()), Vec::new(), None),
    };
    let prim = match primitive_ideals(s, bounds.slot, bounds.max_carrier) {
        Ok(p) => p,
        Err(e) => return (not_run(e.to_string()), Vec::new(), None),
    };
    let mut checks = match audit_representation_theorems(s, bounds.slot, bounds.max_carrier) {
        Ok(c) => c,
        Err(e) => return (not_run(e.to_string()), Vec::new(), None),
    };
    let wedderburn = wedderburn_check(s, bounds.slot, bounds.max_carrier).ok();
    if let Some(w) = &wedderburn {
        checks.push(w.audit.clone());
    }
    let section = ModulesSection {
        slot: bounds.slot,
        max_carrier: bounds.max_carrier,
        status: "computed",
        reason: None,
        module_classes: modules.len(),
        simple_modules: modules.iter().filter(|m| is_simple(m)).count(),
        primitive_ideals: prim
            .ideals
            .iter()
            .map(|(set, module)| PrimitiveEntry {
                ideal: elements(*set),
                witness: gsr_core::modreps::describe(module),
            })
            .collect(),
    };
    let view = wedderburn.map(|w| WedderburnView {
        jacobson_zero: w.jacobson_zero,
        minimal_primitives: w.minimal_primitives.into_iter().map(elements).collect(),
        factor_count: w.factor_count,
        injective: w.injective,
        crt: w.crt.map(CrtView::from),
    });
    (section, checks, view)
}

fn decomposition_section(
    s: &GammaSemiring,
    wedderburn: Option<WedderburnView>,
) -> gsr_core::Result<DecompositionSection> {
    let maximals = maximal_family(s)?;
    let crt_maximal = if maximals.len() >= 2 {
        Some(crt_check(s, &maximals)?.into())
    } else {
        None
    };
    Ok(DecompositionSection {
        central_idempotents: central_idempotents(s),
        maximal_ideals: maximals.into_iter().map(elements).collect(),
        crt_maximal,
        wedderburn,
    })
}

/// Validate and, if valid, analyze a structure. Invalid structures get only
/// the validation section.
pub fn analyze(
    s: &GammaSemiring,
    max_violations: usize,
    bounds: ModuleBounds,
) -> gsr_core::Result<AnalysisReport> {
    let v = validate_with(s, max_violations);
    let validation = ValidationSection {
        valid: v.valid,
        violations: v.violations,
        asymmetric_transpositions: symmetry_profile(s).into_iter().collect(),
    };
    let mut report = AnalysisReport {
        structure_digest: content_digest(s).hex(),
        canonical_digest: canonical_form(s, false)?.digest.hex(),
        shape: Shape::of(s),
        validation,
        checks: Vec::new(),
        ideals: None,
        radicals: None,
        spectra: None,
        modules: None,
        decomposition: None,
    };
    if !report.validation.valid {
        return Ok(report);
    }
    let mut checks = theorem_sweep(s)?;
    // The radical checks are part of the contested set.
    checks.extend(contested_audits(s)?);
    let radicals = radicals_section(s)?;
    let (modules, rep_checks, wedderburn) = modules_section(s, bounds);
    checks.extend(rep_checks);
    report.ideals = Some(ideals_section(s)?);
    report.radicals = Some(radicals);
    report.spectra = Some(spectra_section(s)?);
    report.modules = Some(modules);
    report.decomposition = Some(decomposition_section(s, wedderburn)?);
    report.checks = checks;
    Ok(report)
}

/// Human-readable summary.
pub fn render_text(r: &AnalysisReport) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "structure {} (m={}, n={}, r={}, {})",
        r.structure_digest, r.shape.m, r.shape.n, r.shape.r, r.shape.assoc_mode
    );
    let _ = writeln!(out, "canonical {}", r.canonical_digest);
    if !r.validation.valid {
        let _ = writeln!(out, "INVALID");
        for v in &r.validation.violations {
            let _ = writeln!(out, "  {v}");
        }
        return out;
    }
    let _ = writeln!(out, "valid");
    if let Some(rad) = &r.radicals {
        for side in &rad.sides {
            let _ = writeln!(
                out,
                "  {:>3}: {} primes, prime radical {:?}, jacobson {:?}",
                side.side,
                side.primes.len(),
                side.prime_radical.set,
                side.jacobson.set
            );
        }
    }
    if let Some(sp) = &r.spectra {
        let _ = writeln!(
            out,
            "  spectrum (two-sided) has {} points; J = 0: {}; discrete: {}",
            sp.sides
                .iter()
                .find(|s| s.side == "two")
                .map_or(0, |s| s.points.len()),
            sp.jacobson_zero,
            sp.discrete
        );
    }
    let fails: Vec<&AuditEntry> = r.failures().collect();
    let _ = writeln!(
        out,
        "checks: {} run, {} with counterexamples",
        r.checks.len(),
        fails.len()
    );
    for c in &r.checks {
        let _ = writeln!(out, "  {c}");
    }
    out
}
