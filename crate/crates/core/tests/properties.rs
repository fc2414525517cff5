use std::sync::OnceLock;

use proptest::prelude::*;

use gsr_core::classify::{are_isomorphic, canonical_form, content_digest, IsoOutcome};
use gsr_core::decompose::{
    central_idempotents, crt_check, pinned_ternary, spectra_disjoint_union_check, PinningSpec,
};
use gsr_core::enumerate::{enumerate, merge, shard, Additions, SearchSpec};
use gsr_core::ideals::{
    all_ideals, generated_ideal, is_ideal, tau, IdealKind, SlotSet, ThresholdIndex,
};
use gsr_core::modreps::{annihilators, enumerate_modules, validate_module, ModuleStructure};
use gsr_core::radicals::{
    is_prime, is_semiprime, jacobson_radical, modular_maximal_ideals, prime_radical, side_primes,
    Side,
};
use gsr_core::spectra::{spectrum, vanishing_set};
use gsr_core::{
    bourne_quotient, validate, AdditionTable, AssocMode, Element, GammaSemiring, Homomorphism,
    Subset,
};

/// Every valid structure for a handful of small shapes.
fn pool() -> &'static [GammaSemiring] {
    static POOL: OnceLock<Vec<GammaSemiring>> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut out = Vec::new();
        for m in 1..=3 {
            let res = enumerate(&SearchSpec::new(m, 3, 1, Additions::ScanAll)).unwrap();
            out.extend(res.records.into_iter().map(|r| r.structure));
        }
        for (n, r) in [(3, 2), (4, 1)] {
            let res = enumerate(&SearchSpec::new(2, n, r, Additions::ScanAll)).unwrap();
            out.extend(res.records.into_iter().map(|r| r.structure));
        }
        out
    })
}

fn ternary_pool_len() -> usize {
    pool().iter().filter(|s| s.n() == 3 && s.r() == 1).count()
}

fn structure() -> impl Strategy<Value = &'static GammaSemiring> {
    (0..pool().len()).prop_map(|i| &pool()[i])
}

/// A structure with a random relabeling fixing 0.
fn relabeled() -> impl Strategy<Value = (&'static GammaSemiring, Vec<Element>)> {
    structure().prop_flat_map(|s| {
        let rest: Vec<Element> = (1..s.m() as Element).collect();
        (Just(s), Just(rest).prop_shuffle()).prop_map(|(s, rest)| {
            let mut perm = vec![0];
            perm.extend(rest);
            (s, perm)
        })
    })
}

/// Arbitrary, usually invalid, ternary tables over a monoid addition.
fn raw_ternary() -> impl Strategy<Value = GammaSemiring> {
    (1usize..=3)
        .prop_flat_map(|m| {
            let adds = gsr_core::enumerate::enumerate_additive(m).unwrap();
            (
                Just(m),
                proptest::sample::select(adds),
                proptest::collection::vec(0..m as Element, m * m * m),
            )
        })
        .prop_map(|(_, add, mu)| GammaSemiring::new(3, 1, add, mu, AssocMode::PaperEnds).unwrap())
}

fn kinds(n: usize) -> Vec<IdealKind> {
    let mut out = vec![IdealKind::Left, IdealKind::Right, IdealKind::TwoSided];
    out.extend((1..=n).map(IdealKind::Threshold));
    out.extend(
        (1..=n)
            .flat_map(|k| SlotSet::of_size(n, k))
            .map(IdealKind::Positional),
    );
    out
}

fn two_sided(s: &GammaSemiring) -> Vec<Subset> {
    all_ideals(s, &IdealKind::TwoSided)
        .unwrap()
        .into_iter()
        .map(|i| i.set)
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn valid_structures_absorb_zero(s in structure()) {
        prop_assert!(validate(s).valid);
        for g in 0..s.gamma_tuples() {
            for (idx, &v) in s.mu_tables().nth(g).unwrap().iter().enumerate() {
                let mut rest = idx;
                let mut has_zero = false;
                for _ in 0..s.n() {
                    has_zero |= rest % s.m() == 0;
                    rest /= s.m();
                }
                if has_zero {
                    prop_assert_eq!(v, 0);
                }
            }
        }
    }

    #[test]
    fn validation_is_deterministic(s in raw_ternary()) {
        let a = validate(&s);
        let b = validate(&s);
        prop_assert_eq!(format!("{a:?}"), format!("{b:?}"));
        prop_assert_eq!(a.valid, a.violations.is_empty());
    }

    #[test]
    fn relabeling_preserves_validity((s, perm) in relabeled()) {
        prop_assert!(validate(&s.relabel(&perm, None)).valid);
    }

    #[test]
    fn quotient_projection_is_homomorphism(s in structure()) {
        for i in two_sided(s) {
            let q = bourne_quotient(s, i).unwrap();
            prop_assert!(q.projection().is_homomorphism());
            prop_assert!(q.projection().is_surjective());
        }
    }

    #[test]
    fn primes_pull_back_along_quotients(s in structure()) {
        for i in two_sided(s) {
            let q = bourne_quotient(s, i).unwrap();
            let f = q.projection();
            for side in Side::ALL {
                for p in side_primes(q.quotient(), side).unwrap() {
                    let back = f.pullback(p);
                    prop_assert!(is_prime(s, back, side).unwrap().is_prime());
                }
            }
        }
    }

    #[test]
    fn same_kind_ideals_closed_under_meet_and_sum(s in structure()) {
        for kind in kinds(s.n()) {
            let ideals: Vec<Subset> = all_ideals(s, &kind).unwrap().iter().map(|i| i.set).collect();
            for &a in &ideals {
                for &b in &ideals {
                    prop_assert!(is_ideal(s, a.intersection(b), &kind));
                    let sum = s.add().closure(a.union(b));
                    prop_assert!(is_ideal(s, sum, &kind), "{:?}", kind);
                }
            }
        }
    }

    #[test]
    fn threshold_hierarchy(s in structure()) {
        let n = s.n();
        for k in 1..=n {
            for i in all_ideals(s, &IdealKind::Threshold(k)).unwrap() {
                for k2 in k..=n {
                    prop_assert!(is_ideal(s, i.set, &IdealKind::Threshold(k2)));
                }
                match tau(s, i.set) {
                    ThresholdIndex::Finite(t) => prop_assert!(t <= k),
                    ThresholdIndex::Infinite(_) => prop_assert!(false, "tau must be finite"),
                }
            }
        }
    }

    #[test]
    fn generated_ideal_is_least(s in structure(), seed_bits in 0u64..8) {
        let seed = Subset::from_bits(seed_bits & Subset::full(s.m()).bits());
        for kind in [IdealKind::Left, IdealKind::Right, IdealKind::TwoSided] {
            let g = generated_ideal(s, seed, &kind).unwrap().set;
            prop_assert!(seed.is_subset_of(g));
            prop_assert!(is_ideal(s, g, &kind));
            for other in all_ideals(s, &kind).unwrap() {
                if seed.is_subset_of(other.set) {
                    prop_assert!(g.is_subset_of(other.set));
                }
            }
        }
    }

    #[test]
    fn semiprimes_closed_under_intersection(s in structure()) {
        let semis: Vec<Subset> = two_sided(s).into_iter().filter(|&q| is_semiprime(s, q)).collect();
        for &a in &semis {
            for &b in &semis {
                prop_assert!(is_semiprime(s, a.intersection(b)));
            }
        }
    }

    #[test]
    fn prime_radical_is_closure(s in structure()) {
        let ideals = two_sided(s);
        for side in Side::ALL {
            for &i in &ideals {
                let ri = prime_radical(s, i, side).unwrap().set;
                prop_assert!(i.is_subset_of(ri));
                prop_assert_eq!(prime_radical(s, ri, side).unwrap().set, ri);
                for &j in &ideals {
                    if i.is_subset_of(j) {
                        prop_assert!(ri.is_subset_of(prime_radical(s, j, side).unwrap().set));
                    }
                }
            }
        }
    }

    #[test]
    fn vanishing_sets_see_only_the_radical(s in structure()) {
        for side in Side::ALL {
            let spec = spectrum(s, side).unwrap();
            for i in all_ideals(s, &side.kind()).unwrap() {
                let rad = prime_radical(s, i.set, side).unwrap().set;
                let v = vanishing_set(&spec, i.set).points;
                prop_assert_eq!(&v, &vanishing_set(&spec, rad).points);
                let meet = v.iter().fold(Subset::full(s.m()), |acc, &p| acc.intersection(spec.points[p]));
                prop_assert_eq!(meet, rad);
            }
            for a in 0..spec.points.len() {
                for b in 0..a {
                    prop_assert_ne!(spec.points[a], spec.points[b]);
                }
            }
        }
    }

    #[test]
    fn jacobson_semiprime_when_maximals_prime(s in structure()) {
        let maximals = modular_maximal_ideals(s, Side::Two).unwrap();
        let all_prime = maximals
            .iter()
            .all(|mm| is_prime(s, mm.ideal, Side::Two).unwrap().is_prime());
        if all_prime {
            let j = jacobson_radical(s, Side::Two).unwrap().set;
            prop_assert!(is_semiprime(s, j));
        }
    }

    #[test]
    fn canonical_form_is_relabeling_invariant((s, perm) in relabeled()) {
        let a = canonical_form(s, false).unwrap();
        let b = canonical_form(&s.relabel(&perm, None), false).unwrap();
        prop_assert_eq!(a.digest, b.digest);
        prop_assert_eq!(&a.structure, &b.structure);
        prop_assert_eq!(&s.relabel(&a.relabeling, None), &a.structure);
        prop_assert_eq!(canonical_form(&a.structure, false).unwrap().digest, a.digest);
        prop_assert_eq!(content_digest(&a.structure), a.digest);
    }

    #[test]
    fn isomorphism_witnesses_are_homomorphisms((s, perm) in relabeled()) {
        let t = s.relabel(&perm, None);
        match are_isomorphic(s, &t, false).unwrap() {
            IsoOutcome::Isomorphic(iso) => {
                let h = Homomorphism::new(s, &t, iso.map.clone()).unwrap();
                prop_assert!(h.is_homomorphism());
                prop_assert!(h.is_bijective());
            }
            other => prop_assert!(false, "{:?}", other),
        }
    }

    #[test]
    fn zero_module_annihilated_by_everything(s in structure()) {
        for j in 1..=s.n() {
            let z = ModuleStructure::zero(s, j).unwrap();
            prop_assert!(validate_module(&z).valid);
            prop_assert_eq!(annihilators(&z).two_sided, Subset::full(s.m()));
        }
    }

    #[test]
    fn crt_success_splits_spectrum(s in structure(), pick in 0usize..64) {
        let ideals = two_sided(s);
        let proper: Vec<Subset> = ideals.into_iter().filter(|i| !i.is_full(s.m())).collect();
        if proper.is_empty() {
            return Ok(());
        }
        let a = proper[pick % proper.len()];
        let b = proper[(pick / 8) % proper.len()];
        let report = crt_check(s, &[a, b]).unwrap();
        if report.passed() {
            let entry = spectra_disjoint_union_check(s, &[a, b]).unwrap();
            prop_assert!(!entry.is_fail(), "{}", entry);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn module_annihilators_are_ideals(i in 0usize..64) {
        let s = &pool()[i % ternary_pool_len()];
        if s.m() > 2 {
            return Ok(());
        }
        for j in 1..=3 {
            for md in enumerate_modules(s, j, 2).unwrap() {
                let ann = annihilators(&md);
                prop_assert!(is_ideal(s, ann.two_sided, &IdealKind::TwoSided));
                prop_assert!(ann.two_sided.is_subset_of(ann.left));
                prop_assert!(ann.two_sided.is_subset_of(ann.right));
            }
        }
    }

    #[test]
    fn sharded_runs_merge_to_sequential(m in 1usize..=3, depth in 0usize..=3, canonical in any::<bool>()) {
        let mut spec = SearchSpec::new(m, 3, 1, Additions::ScanAll);
        spec.canonical_only = canonical;
        let depth = depth.min(spec.free_cells());
        let whole = enumerate(&spec).unwrap();
        let parts: Vec<_> = shard(&spec, depth)
            .unwrap()
            .iter()
            .map(|sp| enumerate(sp).unwrap())
            .collect();
        let merged = merge(parts).unwrap();
        prop_assert_eq!(merged.valid_count, whole.valid_count);
        prop_assert_eq!(merged.canonical_class_count, whole.canonical_class_count);
        prop_assert_eq!(merged.total_candidates_scanned, whole.total_candidates_scanned);
        prop_assert!(whole.within_prefill_bound());
        prop_assert!(whole.within_crude_bound(3, 1));
        prop_assert_eq!(merged.records, whole.records);
    }

    #[test]
    fn pinned_quaternary_tables_validate(i in 0usize..64) {
        let quaternary: Vec<&GammaSemiring> = pool().iter().filter(|s| s.n() == 4).collect();
        let s = quaternary[i % quaternary.len()];
        for e in central_idempotents(s) {
            let report = pinned_ternary(s, &PinningSpec::first_last(s, e)).unwrap();
            let v = validate(&report.structure);
            prop_assert!(v.violations.iter().all(|x| x.axiom == gsr_core::Axiom::A4));
        }
    }
}

#[test]
fn pool_is_nonempty_and_valid() {
    assert!(ternary_pool_len() > 30);
    assert!(pool().iter().all(|s| validate(s).valid));
    let or = AdditionTable::or();
    assert!(pool().iter().any(|s| s.n() == 4 && *s.add() == or));
}
