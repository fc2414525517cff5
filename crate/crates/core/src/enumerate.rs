//! Exhaustive search for valid structures with absorption prefill,
//! incremental constraint checking, canonical de-duplication and sharding.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::classify::{canonical_form, Digest};
use crate::error::{usage, Error, Result};
use crate::modreps::permutations_fixing_zero;
use crate::tuples::{decode, index_of, pow, Odometer};
use crate::{validate, AdditionTable, AssocMode, Element, GammaSemiring, MAX_ARITY};

/// Default limit on free operation cells.
pub const DEFAULT_MAX_FREE_CELLS: usize = 20;
/// Largest carrier for which additions can be scanned.
pub const MAX_ADDITIVE_CARRIER: usize = 4;

const UNSET: Element = Element::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Additions {
    Fixed(AdditionTable),
    /// Every commutative monoid on the carrier, up to relabeling.
    ScanAll,
}

/// Restriction of a search to assignments starting with `prefix` on the
/// first `prefix.len()` free cells.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Shard {
    pub prefix: Vec<Element>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchSpec {
    pub m: usize,
    pub n: usize,
    pub r: usize,
    pub additions: Additions,
    pub assoc_mode: AssocMode,
    /// Emit one canonical representative per isomorphism class.
    pub canonical_only: bool,
    pub permute_gamma: bool,
    pub shard: Option<Shard>,
    pub max_free_cells: usize,
}

impl SearchSpec {
    pub fn new(m: usize, n: usize, r: usize, additions: Additions) -> Self {
        SearchSpec {
            m,
            n,
            r,
            additions,
            assoc_mode: AssocMode::PaperEnds,
            canonical_only: false,
            permute_gamma: false,
            shard: None,
            max_free_cells: DEFAULT_MAX_FREE_CELLS,
        }
    }

    /// Number of operation cells whose arguments are all nonzero.
    pub fn free_cells(&self) -> usize {
        pow(self.r, self.n - 1) * pow(self.m.saturating_sub(1), self.n)
    }
}

/// One emitted structure. `key` orders records deterministically: the
/// index of the addition table, then the values of the free cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Record {
    pub addition_index: usize,
    pub assignment: Vec<Element>,
    pub structure: GammaSemiring,
    /// Digest of the canonical form.
    pub digest: Digest,
}

impl Record {
    pub fn key(&self) -> (usize, &[Element]) {
        (self.addition_index, &self.assignment)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationResult {
    /// Search leaves: pruned partial assignments plus complete ones.
    pub total_candidates_scanned: u64,
    pub valid_count: u64,
    pub canonical_class_count: u64,
    pub records: Vec<Record>,
    pub shard: Option<Shard>,
    /// Number of addition tables searched.
    pub additions_searched: usize,
    pub free_cells: usize,
    pub m: usize,
    canonical_only: bool,
    valid_digests: BTreeSet<Digest>,
}

impl EnumerationResult {
    /// Whether `valid_count` stays within `additions · m^(free cells)`.
    pub fn within_prefill_bound(&self) -> bool {
        log_le(
            self.valid_count,
            self.additions_searched,
            self.m,
            self.free_cells as f64,
        )
    }

    /// Whether `valid_count` stays within `additions · m^(r·m^n)`.
    pub fn within_crude_bound(&self, n: usize, r: usize) -> bool {
        log_le(
            self.valid_count,
            self.additions_searched,
            self.m,
            r as f64 * libm_pow(self.m as f64, n),
        )
    }
}

fn libm_pow(base: f64, exp: usize) -> f64 {
    (0..exp).fold(1.0, |acc, _| acc * base)
}

/// `count ≤ adds · m^exp`, compared exactly when small and in floating
/// point otherwise.
fn log_le(count: u64, adds: usize, m: usize, exp: f64) -> bool {
    if m <= 1 {
        return count <= adds as u64;
    }
    if exp < 60.0 {
        let bound = (adds as u128).saturating_mul((m as u128).saturating_pow(exp as u32));
        return (count as u128) <= bound;
    }
    true
}

/// All commutative monoids on `{0, .., m-1}` with identity 0, one per
/// relabeling class (the lexicographically least table), ascending.
pub fn enumerate_additive(m: usize) -> Result<Vec<AdditionTable>> {
    if m == 0 || m > MAX_ADDITIVE_CARRIER {
        return Err(Error::Capacity {
            what: "carrier for addition scan",
            actual: m,
            limit: MAX_ADDITIVE_CARRIER,
        });
    }
    let pairs: Vec<(usize, usize)> = (1..m).flat_map(|i| (i..m).map(move |j| (i, j))).collect();
    let perms = permutations_fixing_zero(m);
    let mut out = Vec::new();
    let mut values = Odometer::new(pairs.len(), m);
    while let Some(v) = values.next() {
        let mut cells = vec![0; m * m];
        for x in 0..m {
            cells[x] = x as Element;
            cells[x * m] = x as Element;
        }
        for (&(i, j), &val) in pairs.iter().zip(v) {
            cells[i * m + j] = val;
            cells[j * m + i] = val;
        }
        let table = AdditionTable::new(m, cells).expect("well-shaped");
        if table.is_commutative_monoid()
            && perms
                .iter()
                .all(|p| table.relabel(p).cells() >= table.cells())
        {
            out.push(table);
        }
    }
    out.sort_by(|a, b| a.cells().cmp(b.cells()));
    Ok(out)
}

/// Split a spec into `m^depth` shards, one per assignment of the first
/// `depth` free cells, in lexicographic order.
pub fn shard(spec: &SearchSpec, depth: usize) -> Result<Vec<SearchSpec>> {
    if spec.shard.is_some() {
        return Err(usage("spec is already a shard"));
    }
    if depth > spec.free_cells() {
        return Err(usage(format!(
            "shard depth {depth} exceeds {} free cells",
            spec.free_cells()
        )));
    }
    let mut out = Vec::new();
    let mut prefixes = Odometer::new(depth, spec.m);
    while let Some(p) = prefixes.next() {
        out.push(SearchSpec {
            shard: Some(Shard { prefix: p.to_vec() }),
            ..spec.clone()
        });
    }
    Ok(out)
}

/// Combine shard results into the result of the unsharded search.
pub fn merge(results: Vec<EnumerationResult>) -> Result<EnumerationResult> {
    let Some(first) = results.first() else {
        return Err(usage("no shard results to merge"));
    };
    let m = first.m;
    let canonical_only = first.canonical_only;
    let depth = first.shard.as_ref().map_or(0, |s| s.prefix.len());
    let mut seen = BTreeSet::new();
    for r in &results {
        let prefix = r.shard.as_ref().map_or(Vec::new(), |s| s.prefix.clone());
        if prefix.len() != depth || r.m != m || r.canonical_only != canonical_only {
            return Err(usage("shard results come from different searches"));
        }
        if !seen.insert(prefix.clone()) {
            return Err(usage(format!("shard prefix {prefix:?} appears twice")));
        }
    }
    if seen.len() != pow(m, depth) {
        return Err(usage(format!(
            "incomplete shard set: {} of {} prefixes",
            seen.len(),
            pow(m, depth)
        )));
    }
    let mut merged = EnumerationResult {
        total_candidates_scanned: 0,
        valid_count: 0,
        canonical_class_count: 0,
        records: Vec::new(),
        shard: None,
        additions_searched: first.additions_searched,
        free_cells: first.free_cells,
        m,
        canonical_only,
        valid_digests: BTreeSet::new(),
    };
    for r in results {
        merged.total_candidates_scanned += r.total_candidates_scanned;
        merged.valid_count += r.valid_count;
        merged.valid_digests.extend(r.valid_digests);
        merged.records.extend(r.records);
    }
    finish(&mut merged);
    Ok(merged)
}

fn finish(result: &mut EnumerationResult) {
    result.records.sort_by(|a, b| a.key().cmp(&b.key()));
    if result.canonical_only {
        let mut kept = BTreeSet::new();
        result.records.retain(|rec| kept.insert(rec.digest));
    }
    result.canonical_class_count = result.valid_digests.len() as u64;
}

/// Run the search described by `spec`.
pub fn enumerate(spec: &SearchSpec) -> Result<EnumerationResult> {
    let free = spec.free_cells();
    if spec.m == 0 || spec.n < 3 || spec.r == 0 || spec.n > MAX_ARITY {
        return Err(usage(format!(
            "invalid sizes m={}, n={}, r={}",
            spec.m, spec.n, spec.r
        )));
    }
    if free > spec.max_free_cells {
        return Err(Error::Capacity {
            what: "free operation cells",
            actual: free,
            limit: spec.max_free_cells,
        });
    }
    let additions = match &spec.additions {
        Additions::Fixed(add) => {
            if add.size() != spec.m {
                return Err(usage(format!(
                    "addition table has size {}, expected {}",
                    add.size(),
                    spec.m
                )));
            }
            if !add.is_commutative_monoid() {
                return Err(usage(
                    "addition table is not a commutative monoid with identity 0",
                ));
            }
            vec![add.clone()]
        }
        Additions::ScanAll => enumerate_additive(spec.m)?,
    };
    let prefix: &[Element] = spec.shard.as_ref().map_or(&[], |s| &s.prefix);
    if prefix.len() > free || prefix.iter().any(|&v| v as usize >= spec.m) {
        return Err(usage(format!(
            "shard prefix {prefix:?} does not fit {free} free cells over {} values",
            spec.m
        )));
    }
    let mut result = EnumerationResult {
        total_candidates_scanned: 0,
        valid_count: 0,
        canonical_class_count: 0,
        records: Vec::new(),
        shard: spec.shard.clone(),
        additions_searched: additions.len(),
        free_cells: free,
        m: spec.m,
        canonical_only: spec.canonical_only,
        valid_digests: BTreeSet::new(),
    };
    for (index, add) in additions.into_iter().enumerate() {
        let mut search = Search::new(spec, add, prefix);
        search.run(index, &mut result)?;
    }
    finish(&mut result);
    Ok(result)
}

struct Search<'a> {
    spec: &'a SearchSpec,
    add: AdditionTable,
    prefix: &'a [Element],
    /// Flat operation tables; free cells hold `UNSET` until assigned.
    mu: Vec<Element>,
    /// Positions of the free cells in `mu`, in assignment order.
    cells: Vec<usize>,
    table_len: usize,
}

impl<'a> Search<'a> {
    fn new(spec: &'a SearchSpec, add: AdditionTable, prefix: &'a [Element]) -> Self {
        let (m, n, r) = (spec.m, spec.n, spec.r);
        let table_len = pow(m, n);
        let mut mu = vec![0; pow(r, n - 1) * table_len];
        let mut cells = Vec::new();
        for g in 0..pow(r, n - 1) {
            let mut xs = Odometer::nonzero(n, m);
            while let Some(x) = xs.next() {
                let cell = g * table_len + index_of(x, m);
                mu[cell] = UNSET;
                cells.push(cell);
            }
        }
        Search {
            spec,
            add,
            prefix,
            mu,
            cells,
            table_len,
        }
    }

    #[inline]
    fn get(&self, g: usize, args: &[Element]) -> Element {
        self.mu[g * self.table_len + index_of(args, self.spec.m)]
    }

    fn run(&mut self, addition_index: usize, result: &mut EnumerationResult) -> Result<()> {
        let mut assignment = Vec::with_capacity(self.cells.len());
        self.dfs(addition_index, &mut assignment, result)
    }

    fn dfs(
        &mut self,
        addition_index: usize,
        assignment: &mut Vec<Element>,
        result: &mut EnumerationResult,
    ) -> Result<()> {
        let depth = assignment.len();
        if depth > 0 && !self.consistent(self.cells[depth - 1]) {
            // A prune above the shard depth is seen by every shard sharing
            // that prefix; only the shard continuing with zeros counts it.
            if self.prefix[depth.min(self.prefix.len())..]
                .iter()
                .all(|&v| v == 0)
            {
                result.total_candidates_scanned += 1;
            }
            return Ok(());
        }
        if depth == self.cells.len() {
            result.total_candidates_scanned += 1;
            self.emit(addition_index, assignment, result)?;
            return Ok(());
        }
        let values: core::ops::Range<Element> = match self.prefix.get(depth) {
            Some(&v) => v..v + 1,
            None => 0..self.spec.m as Element,
        };
        for v in values {
            self.mu[self.cells[depth]] = v;
            assignment.push(v);
            self.dfs(addition_index, assignment, result)?;
            assignment.pop();
        }
        self.mu[self.cells[depth]] = UNSET;
        Ok(())
    }

    fn emit(
        &self,
        addition_index: usize,
        assignment: &[Element],
        result: &mut EnumerationResult,
    ) -> Result<()> {
        let spec = self.spec;
        let s = GammaSemiring::new(
            spec.n,
            spec.r,
            self.add.clone(),
            self.mu.clone(),
            spec.assoc_mode,
        )?;
        if !validate(&s).valid {
            return Ok(());
        }
        result.valid_count += 1;
        let canon = canonical_form(&s, spec.permute_gamma)?;
        result.valid_digests.insert(canon.digest);
        let structure = if spec.canonical_only {
            if result.records.iter().any(|r| r.digest == canon.digest) {
                return Ok(());
            }
            canon.structure
        } else {
            s
        };
        result.records.push(Record {
            addition_index,
            assignment: assignment.to_vec(),
            structure,
            digest: canon.digest,
        });
        Ok(())
    }

    /// Check every distributivity and associativity instance that reads
    /// `cell` and whose other cells are assigned.
    fn consistent(&self, cell: usize) -> bool {
        let (m, n) = (self.spec.m, self.spec.n);
        let g = cell / self.table_len;
        let mut y = [0; MAX_ARITY];
        decode(cell % self.table_len, m, &mut y[..n]);
        self.distributive_at(g, &y[..n]) && self.associative_at(g, &y[..n])
    }

    fn distributive_at(&self, g: usize, y: &[Element]) -> bool {
        let (m, n) = (self.spec.m, self.spec.n);
        let mut args = [0; MAX_ARITY];
        args[..n].copy_from_slice(y);
        for slot in 0..n {
            let target = y[slot];
            for x in 0..m as Element {
                for x2 in 0..m as Element {
                    let sum = self.add.sum(x, x2);
                    if x != target && x2 != target && sum != target {
                        continue;
                    }
                    args[slot] = x;
                    let a = self.get(g, &args[..n]);
                    args[slot] = x2;
                    let b = self.get(g, &args[..n]);
                    args[slot] = sum;
                    let c = self.get(g, &args[..n]);
                    if a != UNSET && b != UNSET && c != UNSET && c != self.add.sum(a, b) {
                        return false;
                    }
                }
            }
            args[slot] = target;
        }
        true
    }

    /// Every nesting instance in which the cell `(g, y)` is the inner or
    /// the outer application of one of the compared windows.
    fn associative_at(&self, g: usize, y: &[Element]) -> bool {
        let (m, n, r) = (self.spec.m, self.spec.n, self.spec.r);
        let mut windows: Vec<usize> = vec![0];
        windows.extend(self.spec.assoc_mode.compared_windows(n));
        let mut gt = [0; MAX_ARITY];
        decode(g, r, &mut gt[..n - 1]);
        let mut c = [0; 2 * MAX_ARITY];
        let mut z = [0; 2 * MAX_ARITY];
        for &p in &windows {
            // As the inner application: fix the window, vary the rest.
            let mut outer_g = Odometer::new(n - 1, r);
            while let Some(og) = outer_g.next() {
                c[..p].copy_from_slice(&og[..p]);
                c[p..p + n - 1].copy_from_slice(&gt[..n - 1]);
                c[p + n - 1..2 * n - 2].copy_from_slice(&og[p..]);
                let mut rest = Odometer::new(n - 1, m);
                while let Some(o) = rest.next() {
                    z[..p].copy_from_slice(&o[..p]);
                    z[p..p + n].copy_from_slice(y);
                    z[p + n..2 * n - 1].copy_from_slice(&o[p..]);
                    if !self.instance_ok(&c[..2 * n - 2], &z[..2 * n - 1]) {
                        return false;
                    }
                }
            }
            // As the outer application: y[p] is the inner value.
            let mut inner_g = Odometer::new(n - 1, r);
            while let Some(ig) = inner_g.next() {
                c[..p].copy_from_slice(&gt[..p]);
                c[p..p + n - 1].copy_from_slice(ig);
                c[p + n - 1..2 * n - 2].copy_from_slice(&gt[p..n - 1]);
                let gi = index_of(ig, r);
                let mut inner = Odometer::new(n, m);
                while let Some(w) = inner.next() {
                    if self.get(gi, w) != y[p] {
                        continue;
                    }
                    z[..p].copy_from_slice(&y[..p]);
                    z[p..p + n].copy_from_slice(w);
                    z[p + n..2 * n - 1].copy_from_slice(&y[p + 1..]);
                    if !self.instance_ok(&c[..2 * n - 2], &z[..2 * n - 1]) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn instance_ok(&self, c: &[Element], z: &[Element]) -> bool {
        let Some(lhs) = self.bracket(0, c, z) else {
            return true;
        };
        self.spec
            .assoc_mode
            .compared_windows(self.spec.n)
            .all(|p| self.bracket(p, c, z).is_none_or(|rhs| rhs == lhs))
    }

    fn bracket(&self, p: usize, c: &[Element], z: &[Element]) -> Option<Element> {
        let (n, r) = (self.spec.n, self.spec.r);
        let inner = self.get(index_of(&c[p..p + n - 1], r), &z[p..p + n]);
        if inner == UNSET {
            return None;
        }
        let mut args = [0; MAX_ARITY];
        let mut og = [0; MAX_ARITY];
        args[..p].copy_from_slice(&z[..p]);
        args[p] = inner;
        args[p + 1..n].copy_from_slice(&z[p + n..]);
        og[..p].copy_from_slice(&c[..p]);
        og[p..n - 1].copy_from_slice(&c[p + n - 1..]);
        let v = self.get(index_of(&og[..n - 1], r), &args[..n]);
        (v != UNSET).then_some(v)
    }
}
