//! j-slot modules over a structure: validation, enumeration, submodules,
//! annihilators, primitive ideals and the representation audits.
//!
//! An action table is indexed by the Γ-tuple, then the `n-1` base
//! arguments (every slot except `j`, in slot order), then the module element.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::audit::AuditEntry;
use crate::enumerate::enumerate_additive;
use crate::error::{usage, Error, Result};
use crate::ideals::{ideal_defect, IdealKind};
use crate::radicals::{is_prime, jacobson_radical, PrimeVerdict, Side};
use crate::tuples::{index_of, pow, Odometer};
use crate::validate::{check_addition, Axiom, Law, ValidationReport, Violation};
use crate::{AdditionTable, AssocMode, Element, Gamma, GammaSemiring, Subset, MAX_ARITY};

/// Largest module carrier handled.
pub const MAX_MODULE_CARRIER: usize = 3;
/// Largest number of free action cells searched.
pub const MAX_FREE_ACTION_CELLS: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleStructure<'a> {
    base: &'a GammaSemiring,
    j: usize,
    madd: AdditionTable,
    action: Vec<Element>,
}

impl<'a> ModuleStructure<'a> {
    pub fn new(
        base: &'a GammaSemiring,
        j: usize,
        madd: AdditionTable,
        action: Vec<Element>,
    ) -> Result<Self> {
        check_slot(base, j)?;
        let expected = action_len(base, madd.size());
        if action.len() != expected {
            return Err(usage(format!(
                "action table has {} cells, expected {expected}",
                action.len()
            )));
        }
        if let Some(&bad) = action.iter().find(|&&v| v as usize >= madd.size()) {
            return Err(Error::OutOfRange {
                what: "action value",
                value: bad as usize,
                bound: madd.size(),
            });
        }
        Ok(ModuleStructure {
            base,
            j,
            madd,
            action,
        })
    }

    /// Build the action from a rule `f(gammas, base arguments, module element)`.
    pub fn from_fn(
        base: &'a GammaSemiring,
        j: usize,
        madd: AdditionTable,
        mut f: impl FnMut(&[Gamma], &[Element], Element) -> Element,
    ) -> Result<Self> {
        check_slot(base, j)?;
        let k = madd.size();
        let mut action = Vec::with_capacity(action_len(base, k));
        let mut gs = Odometer::new(base.n() - 1, base.r());
        while let Some(g) = gs.next() {
            let mut bs = Odometer::new(base.n() - 1, base.m());
            while let Some(b) = bs.next() {
                for x in 0..k as Element {
                    action.push(f(g, b, x));
                }
            }
        }
        Self::new(base, j, madd, action)
    }

    /// The structure acting on itself with the module element in slot `j`.
    pub fn regular(base: &'a GammaSemiring, j: usize) -> Result<Self> {
        let mut args = [0; MAX_ARITY];
        let n = base.n();
        Self::from_fn(base, j, base.add().clone(), |g, b, x| {
            insert_at(&mut args[..n], j - 1, b, x);
            base.mu(base.gamma_index(g), &args[..n])
        })
    }

    /// The one-element module.
    pub fn zero(base: &'a GammaSemiring, j: usize) -> Result<Self> {
        Self::from_fn(base, j, AdditionTable::max(1), |_, _, _| 0)
    }

    pub fn base(&self) -> &'a GammaSemiring {
        self.base
    }

    pub fn slot(&self) -> usize {
        self.j
    }

    pub fn k(&self) -> usize {
        self.madd.size()
    }

    pub fn madd(&self) -> &AdditionTable {
        &self.madd
    }

    pub fn action(&self) -> &[Element] {
        &self.action
    }

    /// Act with base arguments `bases` (slot order, slot `j` omitted).
    #[inline]
    pub fn act(&self, gamma_index: usize, bases: &[Element], x: Element) -> Element {
        self.action[cell_index(self.base, self.k(), gamma_index, bases, x)]
    }

    pub fn has_trivial_action(&self) -> bool {
        self.action.iter().all(|&v| v == 0)
    }

    /// Relabel module elements: old `x` becomes `perm[x]`.
    pub fn relabel(&self, perm: &[Element]) -> Self {
        let k = self.k();
        let mut action = vec![0; self.action.len()];
        for (cell, &v) in self.action.iter().enumerate() {
            let (stem, x) = (cell / k, cell % k);
            action[stem * k + perm[x] as usize] = perm[v as usize];
        }
        ModuleStructure {
            base: self.base,
            j: self.j,
            madd: self.madd.relabel(perm),
            action,
        }
    }
}

fn check_slot(base: &GammaSemiring, j: usize) -> Result<()> {
    if j == 0 || j > base.n() {
        return Err(usage(format!(
            "module slot {j} must lie in 1..={}",
            base.n()
        )));
    }
    Ok(())
}

fn action_len(base: &GammaSemiring, k: usize) -> usize {
    base.gamma_tuples() * pow(base.m(), base.n() - 1) * k
}

#[inline]
fn cell_index(
    base: &GammaSemiring,
    k: usize,
    gamma_index: usize,
    bases: &[Element],
    x: Element,
) -> usize {
    (gamma_index * pow(base.m(), base.n() - 1) + index_of(bases, base.m())) * k + x as usize
}

/// Write `rest` into `out` around position `at`, placing `x` there.
fn insert_at(out: &mut [Element], at: usize, rest: &[Element], x: Element) {
    out[..at].copy_from_slice(&rest[..at]);
    out[at] = x;
    out[at + 1..].copy_from_slice(&rest[at..]);
}

/// Read access to a possibly partial action table.
trait ActionLookup {
    fn get(&self, cell: usize) -> Option<Element>;
}

impl ActionLookup for [Element] {
    fn get(&self, cell: usize) -> Option<Element> {
        Some(self[cell])
    }
}

impl ActionLookup for [Option<Element>] {
    fn get(&self, cell: usize) -> Option<Element> {
        self[cell]
    }
}

struct Checker<'s, L: ?Sized> {
    base: &'s GammaSemiring,
    j: usize,
    madd: &'s AdditionTable,
    table: &'s L,
    cap: usize,
    found: usize,
    out: Option<&'s mut Vec<Violation>>,
}

impl<L: ActionLookup + ?Sized> Checker<'_, L> {
    fn k(&self) -> usize {
        self.madd.size()
    }

    fn act(&self, g: usize, bases: &[Element], x: Element) -> Option<Element> {
        self.table.get(cell_index(self.base, self.k(), g, bases, x))
    }

    fn done(&self) -> bool {
        self.found >= self.cap
    }

    #[allow(clippy::too_many_arguments)]
    fn report(
        &mut self,
        axiom: Axiom,
        law: Law,
        slot: Option<usize>,
        gammas: Vec<Gamma>,
        args: Vec<Element>,
        lhs: Element,
        rhs: Element,
    ) {
        if let Some(out) = self.out.as_deref_mut() {
            out.push(Violation {
                axiom,
                law,
                slot,
                gammas,
                args,
                lhs,
                rhs,
            });
        }
        self.found += 1;
    }

    fn run(&mut self) {
        self.absorption();
        if !self.done() {
            self.additivity();
        }
        if !self.done() {
            self.compatibility();
        }
    }

    fn absorption(&mut self) {
        let (n, m, k) = (self.base.n(), self.base.m(), self.k());
        for g in 0..self.base.gamma_tuples() {
            let mut bs = Odometer::new(n - 1, m);
            while let Some(b) = bs.next() {
                let zero_base = b.contains(&0);
                for x in 0..k as Element {
                    if !(zero_base || x == 0) {
                        continue;
                    }
                    if let Some(v) = self.act(g, b, x) {
                        if v != 0 {
                            let b = b.to_vec();
                            let mut args = b;
                            args.push(x);
                            self.report(
                                Axiom::A3,
                                Law::ZeroAbsorbing,
                                None,
                                self.base.gamma_tuple(g),
                                args,
                                v,
                                0,
                            );
                            if self.done() {
                                return;
                            }
                        }
                    }
                }
            }
        }
    }

    fn additivity(&mut self) {
        let (n, m, k) = (self.base.n(), self.base.m(), self.k());
        let mut b = [0; MAX_ARITY];
        // Base slots, in full slot order.
        let jm = self.j - 1;
        for slot in (0..n).filter(|&s| s != jm) {
            let pos = if slot < jm { slot } else { slot - 1 };
            for g in 0..self.base.gamma_tuples() {
                for x in 0..m as Element {
                    for y in 0..m as Element {
                        let mut rest = Odometer::new(n - 2, m);
                        while let Some(others) = rest.next() {
                            for z in 0..k as Element {
                                insert_at(&mut b[..n - 1], pos, others, x);
                                let a1 = self.act(g, &b[..n - 1], z);
                                b[pos] = y;
                                let a2 = self.act(g, &b[..n - 1], z);
                                b[pos] = self.base.sum(x, y);
                                let lhs = self.act(g, &b[..n - 1], z);
                                if let (Some(a1), Some(a2), Some(lhs)) = (a1, a2, lhs) {
                                    let rhs = self.madd.sum(a1, a2);
                                    if lhs != rhs {
                                        let mut args = vec![x, y];
                                        args.extend_from_slice(others);
                                        args.push(z);
                                        let gs = self.base.gamma_tuple(g);
                                        self.report(
                                            Axiom::A2,
                                            Law::Distributive,
                                            Some(slot + 1),
                                            gs,
                                            args,
                                            lhs,
                                            rhs,
                                        );
                                        if self.done() {
                                            return;
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        // Module slot.
        for g in 0..self.base.gamma_tuples() {
            let mut bs = Odometer::new(n - 1, m);
            while let Some(bb) = bs.next() {
                for z in 0..k as Element {
                    for w in 0..k as Element {
                        let parts = (
                            self.act(g, bb, z),
                            self.act(g, bb, w),
                            self.act(g, bb, self.madd.sum(z, w)),
                        );
                        if let (Some(a1), Some(a2), Some(lhs)) = parts {
                            let rhs = self.madd.sum(a1, a2);
                            if lhs != rhs {
                                let mut args = bb.to_vec();
                                args.extend_from_slice(&[z, w]);
                                let gs = self.base.gamma_tuple(g);
                                self.report(
                                    Axiom::A2,
                                    Law::Distributive,
                                    Some(self.j),
                                    gs,
                                    args,
                                    lhs,
                                    rhs,
                                );
                                if self.done() {
                                    return;
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    /// Evaluate the nesting whose inner application starts at `p`, over
    /// `2n-1` positions with the module element at `q`.
    fn window(&self, p: usize, q: usize, c: &[Gamma], z: &[Element]) -> Option<Element> {
        let n = self.base.n();
        let mut bases = [0; MAX_ARITY];
        let mut outer = [0; 2 * MAX_ARITY];
        let mut og = [0; MAX_ARITY];
        og[..p].copy_from_slice(&c[..p]);
        og[p..n - 1].copy_from_slice(&c[p + n - 1..]);
        let og = self.base.gamma_index(&og[..n - 1]);
        let ig = self.base.gamma_index(&c[p..p + n - 1]);
        if (p..p + n).contains(&q) {
            let mut t = 0;
            for (i, &v) in z[p..p + n].iter().enumerate() {
                if p + i != q {
                    bases[t] = v;
                    t += 1;
                }
            }
            let inner = self.act(ig, &bases[..n - 1], z[q])?;
            for (t, &v) in z[..p].iter().chain(&z[p + n..]).enumerate() {
                bases[t] = v;
            }
            self.act(og, &bases[..n - 1], inner)
        } else {
            let inner = self.base.mu(ig, &z[p..p + n]);
            let len = n;
            outer[..p].copy_from_slice(&z[..p]);
            outer[p] = inner;
            outer[p + 1..len].copy_from_slice(&z[p + n..]);
            let qo = if q < p { q } else { q - (n - 1) };
            let mut t = 0;
            for (i, &v) in outer[..len].iter().enumerate() {
                if i != qo {
                    bases[t] = v;
                    t += 1;
                }
            }
            self.act(og, &bases[..n - 1], outer[qo])
        }
    }

    fn compatibility(&mut self) {
        let (n, m, k, r) = (self.base.n(), self.base.m(), self.k(), self.base.r());
        let mut z = [0; 2 * MAX_ARITY];
        for q in 0..2 * n - 1 {
            let windows = compatible_windows(n, self.j, q);
            let compared: Vec<usize> = match self.base.assoc_mode() {
                AssocMode::PaperEnds if windows.len() >= 2 => vec![windows[windows.len() - 1]],
                AssocMode::PaperEnds => Vec::new(),
                AssocMode::DornteAllWindows => windows.iter().skip(1).copied().collect(),
            };
            if compared.is_empty() {
                continue;
            }
            let first = windows[0];
            let mut cs = Odometer::new(2 * n - 2, r);
            while let Some(c) = cs.next() {
                let mut bs = Odometer::new(2 * n - 2, m);
                while let Some(b) = bs.next() {
                    for x in 0..k as Element {
                        insert_at(&mut z[..2 * n - 1], q, b, x);
                        let Some(lhs) = self.window(first, q, c, &z[..2 * n - 1]) else {
                            continue;
                        };
                        for &p in &compared {
                            let Some(rhs) = self.window(p, q, c, &z[..2 * n - 1]) else {
                                continue;
                            };
                            if lhs != rhs {
                                self.report(
                                    Axiom::A4,
                                    Law::Associative,
                                    Some(p + 1),
                                    c.to_vec(),
                                    z[..2 * n - 1].to_vec(),
                                    lhs,
                                    rhs,
                                );
                                if self.done() {
                                    return;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

/// Inner-window starts for which the nesting is a well-formed action
/// expression with the module element at position `q` (0-based).
pub(crate) fn compatible_windows(n: usize, j: usize, q: usize) -> Vec<usize> {
    (0..n)
        .filter(|&p| {
            if (p..p + n).contains(&q) {
                q - p == j - 1 && p == j - 1
            } else if q < p {
                q == j - 1
            } else {
                q - (n - 1) == j - 1
            }
        })
        .collect()
}

/// Check every module axiom exhaustively. Violations of the module
/// addition are reported under `A1`, additivity under `A2`, zero
/// absorption under `A3`, and compatibility with the base operation under
/// `A4`, capped at `max_per_axiom` overall per axiom group.
pub fn validate_module(module: &ModuleStructure<'_>) -> ValidationReport {
    validate_module_with(module, crate::validate::DEFAULT_MAX_VIOLATIONS)
}

pub fn validate_module_with(
    module: &ModuleStructure<'_>,
    max_per_axiom: usize,
) -> ValidationReport {
    let mut out = Vec::new();
    check_addition(&module.madd, max_per_axiom.max(1), &mut out);
    let mut rest = Vec::new();
    let mut checker = Checker {
        base: module.base,
        j: module.j,
        madd: &module.madd,
        table: module.action.as_slice(),
        cap: usize::MAX,
        found: 0,
        out: Some(&mut rest),
    };
    checker.run();
    for axiom in [Axiom::A2, Axiom::A3, Axiom::A4] {
        out.extend(
            rest.iter()
                .filter(|v| v.axiom == axiom)
                .take(max_per_axiom.max(1))
                .cloned(),
        );
    }
    ValidationReport::from_violations(out)
}

fn partial_ok(
    base: &GammaSemiring,
    j: usize,
    madd: &AdditionTable,
    table: &[Option<Element>],
) -> bool {
    let mut checker = Checker {
        base,
        j,
        madd,
        table,
        cap: 1,
        found: 0,
        out: None,
    };
    checker.run();
    checker.found == 0
}

/// All valid `j`-slot modules with carrier size `1..=k_max`, one per
/// isomorphism class (relabelings fixing 0). Module additions range over
/// the canonical commutative monoids; within each, the action tables are
/// emitted in increasing order.
pub fn enumerate_modules(
    s: &GammaSemiring,
    j: usize,
    k_max: usize,
) -> Result<Vec<ModuleStructure<'_>>> {
    check_slot(s, j)?;
    if k_max > MAX_MODULE_CARRIER {
        return Err(Error::Capacity {
            what: "module carrier",
            actual: k_max,
            limit: MAX_MODULE_CARRIER,
        });
    }
    let mut out = Vec::new();
    for k in 1..=k_max {
        let free = s.gamma_tuples() * pow(s.m() - 1, s.n() - 1) * (k - 1);
        if free > MAX_FREE_ACTION_CELLS {
            return Err(Error::Capacity {
                what: "free action cells",
                actual: free,
                limit: MAX_FREE_ACTION_CELLS,
            });
        }
        for madd in enumerate_additive(k)? {
            search_actions(s, j, &madd, &mut out);
        }
    }
    Ok(out)
}

fn free_cells(s: &GammaSemiring, k: usize) -> Vec<usize> {
    let n = s.n();
    let mut cells = Vec::new();
    for g in 0..s.gamma_tuples() {
        let mut bs = Odometer::nonzero(n - 1, s.m());
        while let Some(b) = bs.next() {
            for x in 1..k as Element {
                cells.push(cell_index(s, k, g, b, x));
            }
        }
    }
    cells
}

fn search_actions<'a>(
    s: &'a GammaSemiring,
    j: usize,
    madd: &AdditionTable,
    out: &mut Vec<ModuleStructure<'a>>,
) {
    let k = madd.size();
    let mut table: Vec<Option<Element>> = vec![Some(0); action_len(s, k)];
    let cells = free_cells(s, k);
    for &c in &cells {
        table[c] = None;
    }
    let mut search = ActionSearch {
        s,
        j,
        madd,
        autos: automorphisms(madd),
        cells,
        table,
    };
    search.dfs(0, out);
}

struct ActionSearch<'a, 'm> {
    s: &'a GammaSemiring,
    j: usize,
    madd: &'m AdditionTable,
    autos: Vec<Vec<Element>>,
    cells: Vec<usize>,
    table: Vec<Option<Element>>,
}

impl<'a> ActionSearch<'a, '_> {
    fn dfs(&mut self, depth: usize, out: &mut Vec<ModuleStructure<'a>>) {
        if !partial_ok(self.s, self.j, self.madd, &self.table) {
            return;
        }
        if depth == self.cells.len() {
            let action: Vec<Element> = self.table.iter().map(|v| v.expect("complete")).collect();
            let module = ModuleStructure {
                base: self.s,
                j: self.j,
                madd: self.madd.clone(),
                action,
            };
            if self
                .autos
                .iter()
                .all(|p| module.relabel(p).action >= module.action)
            {
                out.push(module);
            }
            return;
        }
        for v in 0..self.madd.size() as Element {
            self.table[self.cells[depth]] = Some(v);
            self.dfs(depth + 1, out);
        }
        self.table[self.cells[depth]] = None;
    }
}

/// Permutations fixing 0 that leave an addition table unchanged.
fn automorphisms(madd: &AdditionTable) -> Vec<Vec<Element>> {
    permutations_fixing_zero(madd.size())
        .into_iter()
        .filter(|p| madd.relabel(p) == *madd)
        .collect()
}

pub(crate) fn permutations_fixing_zero(k: usize) -> Vec<Vec<Element>> {
    let mut out = Vec::new();
    let mut perm: Vec<Element> = (0..k as Element).collect();
    fn rec(perm: &mut Vec<Element>, at: usize, out: &mut Vec<Vec<Element>>) {
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
    rec(&mut perm, 1.min(k), &mut out);
    out.sort();
    out
}

/// Submodules: subsets with 0, closed under module addition and under the
/// action.
pub fn submodules(module: &ModuleStructure<'_>) -> Vec<Subset> {
    let k = module.k();
    (0u64..1 << (k - 1))
        .map(|rest| Subset::from_bits(1 | (rest << 1)))
        .filter(|&set| module.madd.closure(set) == set && action_closed(module, set))
        .collect()
}

fn action_closed(module: &ModuleStructure<'_>, set: Subset) -> bool {
    let k = module.k();
    module
        .action
        .iter()
        .enumerate()
        .all(|(cell, &v)| !set.contains((cell % k) as Element) || set.contains(v))
}

/// Simple: more than one element, only the trivial submodules, and a
/// nonzero action.
pub fn is_simple(module: &ModuleStructure<'_>) -> bool {
    module.k() > 1 && !module.has_trivial_action() && submodules(module).len() == 2
}

/// Annihilators by placement: `two_sided` quantifies over every base slot,
/// `left` over slots before `j`, `right` over slots after it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AnnihilatorSet {
    pub two_sided: Subset,
    pub left: Subset,
    pub right: Subset,
}

pub fn annihilators(module: &ModuleStructure<'_>) -> AnnihilatorSet {
    let s = module.base;
    let (n, m, j) = (s.n(), s.m(), module.j);
    let kills = |a: Element, mut slots: core::ops::Range<usize>| {
        slots.all(|pos| {
            (0..s.gamma_tuples()).all(|g| {
                let mut rest = Odometer::new(n - 2, m);
                let mut b = [0; MAX_ARITY];
                while let Some(others) = rest.next() {
                    insert_at(&mut b[..n - 1], pos, others, a);
                    if (0..module.k() as Element).any(|x| module.act(g, &b[..n - 1], x) != 0) {
                        return false;
                    }
                }
                true
            })
        })
    };
    let collect = |range: core::ops::Range<usize>| -> Subset {
        (0..m as Element)
            .filter(|&a| kills(a, range.clone()))
            .collect()
    };
    AnnihilatorSet {
        two_sided: collect(0..n - 1),
        left: collect(0..j - 1),
        right: collect(j - 1..n - 1),
    }
}

/// Annihilators of simple modules found within the carrier bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimitiveIdeals<'a> {
    /// Distinct annihilators, by bits, each with its first witness module.
    pub ideals: Vec<(Subset, ModuleStructure<'a>)>,
    pub modules_searched: usize,
    pub simple_modules: usize,
    /// Modules with only trivial submodules but zero action; not simple.
    pub zero_action_excluded: usize,
    pub k_max: usize,
}

pub fn primitive_ideals(s: &GammaSemiring, j: usize, k_max: usize) -> Result<PrimitiveIdeals<'_>> {
    let modules = enumerate_modules(s, j, k_max)?;
    Ok(primitives_from(&modules, k_max))
}

fn primitives_from<'a>(modules: &[ModuleStructure<'a>], k_max: usize) -> PrimitiveIdeals<'a> {
    let mut ideals: Vec<(Subset, ModuleStructure<'a>)> = Vec::new();
    let mut simple = 0;
    let mut excluded = 0;
    for module in modules {
        if module.k() > 1 && module.has_trivial_action() && submodules(module).len() == 2 {
            excluded += 1;
        }
        if !is_simple(module) {
            continue;
        }
        simple += 1;
        let ann = annihilators(module).two_sided;
        if !ideals.iter().any(|(i, _)| *i == ann) {
            ideals.push((ann, module.clone()));
        }
    }
    ideals.sort_by_key(|(i, _)| i.bits());
    PrimitiveIdeals {
        ideals,
        modules_searched: modules.len(),
        simple_modules: simple,
        zero_action_excluded: excluded,
        k_max,
    }
}

/// Describe a module compactly for witnesses.
pub fn describe(module: &ModuleStructure<'_>) -> String {
    format!(
        "k={} madd={:?} action={:?}",
        module.k(),
        module.madd.cells(),
        module.action
    )
}

/// Representation audits over all `j`-slot modules with carrier `≤ k_max`.
pub fn audit_representation_theorems(
    s: &GammaSemiring,
    j: usize,
    k_max: usize,
) -> Result<Vec<AuditEntry>> {
    let modules = enumerate_modules(s, j, k_max)?;
    let prims = primitives_from(&modules, k_max);
    let bound = format!("modules with slot {j} and carrier at most {k_max}");
    let mut out = Vec::new();

    let mut failure = None;
    for module in &modules {
        let ann = annihilators(module).two_sided;
        if let Some(defect) = ideal_defect(s, ann, &IdealKind::TwoSided) {
            failure = Some(format!(
                "annihilator {ann} of {}: {defect:?}",
                describe(module)
            ));
            break;
        }
    }
    out.push(AuditEntry::check(
        "representation.annihilator_is_two_sided_ideal",
        failure,
    ));

    let id = "representation.primitive_is_prime";
    if prims.ideals.is_empty() {
        out.push(AuditEntry::vacuous(id));
    } else {
        let mut failure = None;
        for (p, module) in &prims.ideals {
            let verdict = if p.is_full(s.m()) {
                Some(String::from("annihilator is the whole carrier"))
            } else {
                match is_prime(s, *p, Side::Two)? {
                    PrimeVerdict::Prime => None,
                    PrimeVerdict::NotIdeal => Some(format!(
                        "not a two-sided ideal ({:?})",
                        ideal_defect(s, *p, &IdealKind::TwoSided).expect("defect exists")
                    )),
                    PrimeVerdict::Counterexample(w) => {
                        Some(format!("prime condition fails at {w}"))
                    }
                }
            };
            if let Some(v) = verdict {
                failure = Some(format!(
                    "primitive ideal {p} from simple module {}: {v}",
                    describe(module)
                ));
                break;
            }
        }
        out.push(AuditEntry::check(id, failure));
    }

    let id = "representation.jacobson_equals_primitive_meet";
    let jac = jacobson_radical(s, Side::Two)?;
    let meet = prims
        .ideals
        .iter()
        .fold(s.carrier(), |acc, (p, _)| acc.intersection(*p));
    if jac.set == meet {
        out.push(AuditEntry::within_bound(
            id,
            format!("J = {} equals the meet over {bound}", jac.set),
        ));
    } else {
        out.push(AuditEntry::fail(
            id,
            format!(
                "J = {}, meet of primitive ideals over {bound} = {meet}",
                jac.set
            ),
        ));
    }

    out.push(first_isomorphism_audit(&modules));
    out.push(separation_audit(s, &modules));
    Ok(out)
}

/// Maps between module carriers that fix 0, preserve module addition and
/// commute with the action.
pub fn module_homomorphisms(a: &ModuleStructure<'_>, b: &ModuleStructure<'_>) -> Vec<Vec<Element>> {
    let mut out = Vec::new();
    if a.j != b.j || a.base != b.base {
        return out;
    }
    let mut maps = Odometer::new(a.k() - 1, b.k());
    while let Some(rest) = maps.next() {
        let mut phi = vec![0];
        phi.extend_from_slice(rest);
        let adds = (0..a.k()).all(|x| {
            (0..a.k()).all(|y| {
                phi[a.madd.sum(x as Element, y as Element) as usize] == b.madd.sum(phi[x], phi[y])
            })
        });
        let acts = adds
            && a.action.iter().enumerate().all(|(cell, &v)| {
                let (stem, x) = (cell / a.k(), cell % a.k());
                phi[v as usize] == b.action[stem * b.k() + phi[x] as usize]
            });
        if acts {
            out.push(phi);
        }
    }
    out
}

fn first_isomorphism_audit(modules: &[ModuleStructure<'_>]) -> AuditEntry {
    let id = "representation.first_isomorphism";
    let mut checked = 0usize;
    for a in modules {
        for b in modules {
            for phi in module_homomorphisms(a, b) {
                let image: Subset = phi.iter().copied().collect();
                if !image.is_full(b.k()) {
                    continue;
                }
                checked += 1;
                if let Some(w) = first_isomorphism_defect(a, b, &phi) {
                    return AuditEntry::fail(
                        id,
                        format!("{} onto {} via {phi:?}: {w}", describe(a), describe(b)),
                    );
                }
            }
        }
    }
    if checked == 0 {
        AuditEntry::vacuous(id)
    } else {
        AuditEntry::pass(id)
    }
}

/// Build the quotient of `a` by the kernel congruence of `phi` and check
/// that the induced map onto `b` is a well-defined isomorphism.
fn first_isomorphism_defect(
    a: &ModuleStructure<'_>,
    b: &ModuleStructure<'_>,
    phi: &[Element],
) -> Option<String> {
    let k = a.k();
    // Classes numbered by smallest member.
    let mut class_of = vec![0usize; k];
    let mut reps: Vec<usize> = Vec::new();
    for x in 0..k {
        match reps.iter().position(|&r| phi[r] == phi[x]) {
            Some(c) => class_of[x] = c,
            None => {
                class_of[x] = reps.len();
                reps.push(x);
            }
        }
    }
    for x in 0..k {
        for y in 0..k {
            if class_of[x] == class_of[y] {
                for z in 0..k {
                    let sx = a.madd.sum(x as Element, z as Element) as usize;
                    let sy = a.madd.sum(y as Element, z as Element) as usize;
                    if class_of[sx] != class_of[sy] {
                        return Some(format!("kernel is not additive at {x} ~ {y}"));
                    }
                }
            }
        }
    }
    let stems = a.action.len() / k;
    for stem in 0..stems {
        for x in 0..k {
            let y = reps[class_of[x]];
            if class_of[a.action[stem * k + x] as usize]
                != class_of[a.action[stem * k + y] as usize]
            {
                return Some(format!(
                    "kernel is not action-stable at cell {stem}, elements {x} ~ {y}"
                ));
            }
        }
    }
    let induced: Vec<Element> = reps.iter().map(|&r| phi[r]).collect();
    let mut seen = Subset::EMPTY;
    for &v in &induced {
        if !seen.insert(v) {
            return Some(String::from("induced map is not injective"));
        }
    }
    if !seen.is_full(b.k()) {
        return Some(String::from("induced map is not surjective"));
    }
    for (c1, &r1) in reps.iter().enumerate() {
        for &r2 in &reps {
            let s = class_of[a.madd.sum(r1 as Element, r2 as Element) as usize];
            if induced[s] != b.madd.sum(induced[c1], phi[r2]) {
                return Some(String::from("induced map does not preserve addition"));
            }
        }
        for stem in 0..stems {
            let v = class_of[a.action[stem * k + r1] as usize];
            if induced[v] != b.action[stem * b.k() + induced[c1] as usize] {
                return Some(String::from("induced map does not commute with the action"));
            }
        }
    }
    None
}

/// When the simple modules found have trivial common annihilator, check
/// that their actions tell every pair of distinct base elements apart.
fn separation_audit(s: &GammaSemiring, modules: &[ModuleStructure<'_>]) -> AuditEntry {
    let id = "representation.separation_of_points";
    let simple: Vec<&ModuleStructure<'_>> = modules.iter().filter(|m| is_simple(m)).collect();
    let meet = simple.iter().fold(s.carrier(), |acc, m| {
        acc.intersection(annihilators(m).two_sided)
    });
    if simple.is_empty() || meet != Subset::zero() {
        return AuditEntry::vacuous(id);
    }
    let n = s.n();
    for a in 0..s.m() as Element {
        for b in a + 1..s.m() as Element {
            let separated = simple.iter().any(|module| {
                (0..n - 1).any(|pos| {
                    (0..s.gamma_tuples()).any(|g| {
                        let mut rest = Odometer::new(n - 2, s.m());
                        let mut xa = [0; MAX_ARITY];
                        let mut xb = [0; MAX_ARITY];
                        while let Some(others) = rest.next() {
                            insert_at(&mut xa[..n - 1], pos, others, a);
                            insert_at(&mut xb[..n - 1], pos, others, b);
                            if (0..module.k() as Element).any(|x| {
                                module.act(g, &xa[..n - 1], x) != module.act(g, &xb[..n - 1], x)
                            }) {
                                return true;
                            }
                        }
                        false
                    })
                })
            });
            if !separated {
                return AuditEntry::fail(
                    id,
                    format!("elements {a} and {b} act identically on every simple module found"),
                );
            }
        }
    }
    AuditEntry::within_bound(id, "separation holds over the simple modules found")
}
