//! The carrier data model: addition tables and n-ary Γ-operation tables.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::error::{shape, Error, Result};
use crate::tuples::{decode, index_of, pow, Odometer};

/// A carrier element. Index 0 is always the additive identity.
pub type Element = u8;
/// A Γ-parameter.
pub type Gamma = u8;

/// Largest supported carrier; subsets are 64-bit sets.
pub const MAX_CARRIER: usize = 64;
pub const MAX_ARITY: usize = 16;
/// Upper bound on the total number of operation-table cells.
pub const MAX_TABLE_CELLS: usize = 1 << 24;

/// How n-ary associativity is checked.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum AssocMode {
    /// Only the leftmost and rightmost nestings are compared.
    #[default]
    PaperEnds,
    /// Every window position of the inner application is compared.
    #[cfg_attr(feature = "serde", serde(rename = "dornte"))]
    DornteAllWindows,
}

impl AssocMode {
    pub fn as_str(self) -> &'static str {
        match self {
            AssocMode::PaperEnds => "paper_ends",
            AssocMode::DornteAllWindows => "dornte",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "paper_ends" => Some(AssocMode::PaperEnds),
            "dornte" => Some(AssocMode::DornteAllWindows),
            _ => None,
        }
    }

    /// Window positions (0-based) compared against window 0.
    pub(crate) fn compared_windows(self, n: usize) -> core::ops::Range<usize> {
        match self {
            AssocMode::PaperEnds => n - 1..n,
            AssocMode::DornteAllWindows => 1..n,
        }
    }
}

/// An `m × m` addition table. Well-shaped by construction; the monoid laws
/// are checked by [`validate`](crate::validate).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AdditionTable {
    m: usize,
    cells: Vec<Element>,
}

impl AdditionTable {
    pub fn new(m: usize, cells: Vec<Element>) -> Result<Self> {
        if m == 0 || m > MAX_CARRIER {
            return Err(Error::OutOfRange {
                what: "carrier size",
                value: m,
                bound: MAX_CARRIER + 1,
            });
        }
        if cells.len() != m * m {
            return Err(shape(format!(
                "addition table has {} cells, expected {}",
                cells.len(),
                m * m
            )));
        }
        if let Some(&bad) = cells.iter().find(|&&c| c as usize >= m) {
            return Err(Error::OutOfRange {
                what: "addition table value",
                value: bad as usize,
                bound: m,
            });
        }
        Ok(AdditionTable { m, cells })
    }

    pub fn from_fn(m: usize, f: impl Fn(Element, Element) -> Element) -> Result<Self> {
        let mut cells = Vec::with_capacity(m * m);
        for a in 0..m {
            for b in 0..m {
                cells.push(f(a as Element, b as Element));
            }
        }
        Self::new(m, cells)
    }

    /// `a + b = max(a, b)` on `{0, .., m-1}`.
    pub fn max(m: usize) -> Self {
        Self::from_fn(m, |a, b| a.max(b)).expect("max table is well-shaped")
    }

    /// Boolean OR on `{0, 1}`.
    pub fn or() -> Self {
        Self::max(2)
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn sum(&self, a: Element, b: Element) -> Element {
        self.cells[a as usize * self.m + b as usize]
    }

    pub fn cells(&self) -> &[Element] {
        &self.cells
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Element]> {
        self.cells.chunks(self.m)
    }

    /// Commutative, associative, with identity 0.
    pub fn is_commutative_monoid(&self) -> bool {
        let m = self.m as Element;
        (0..m).all(|a| self.sum(0, a) == a)
            && (0..m).all(|a| (0..m).all(|b| self.sum(a, b) == self.sum(b, a)))
            && (0..m).all(|a| {
                (0..m).all(|b| {
                    (0..m).all(|c| self.sum(self.sum(a, b), c) == self.sum(a, self.sum(b, c)))
                })
            })
    }

    /// Relabel by `perm` (old element `x` becomes `perm[x]`).
    pub fn relabel(&self, perm: &[Element]) -> Self {
        let mut cells = vec![0; self.cells.len()];
        for a in 0..self.m {
            for b in 0..self.m {
                let v = perm[self.cells[a * self.m + b] as usize];
                cells[perm[a] as usize * self.m + perm[b] as usize] = v;
            }
        }
        AdditionTable { m: self.m, cells }
    }

    /// Least additively closed superset of `set ∪ {0}`.
    pub fn closure(&self, set: crate::Subset) -> crate::Subset {
        let mut s = set.with(0);
        loop {
            let mut next = s;
            for a in s {
                for b in s {
                    next.insert(self.sum(a, b));
                }
            }
            if next == s {
                return s;
            }
            s = next;
        }
    }
}

/// A finite n-ary Γ-semiring candidate: a carrier `{0, .., m-1}`, an addition
/// table, and one operation table per Γ-tuple in `[0, r)^(n-1)`.
///
/// Operation tables are flat arrays of length `m^n` indexed by the argument
/// tuple with `x1` slowest and `xn` fastest; Γ-tuples are ordered the same way.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GammaSemiring {
    m: usize,
    n: usize,
    r: usize,
    add: AdditionTable,
    mu: Vec<Element>,
    assoc_mode: AssocMode,
}

impl GammaSemiring {
    pub fn new(
        n: usize,
        r: usize,
        add: AdditionTable,
        mu: Vec<Element>,
        assoc_mode: AssocMode,
    ) -> Result<Self> {
        let m = add.size();
        check_shape(m, n, r)?;
        let expected = pow(r, n - 1) * pow(m, n);
        if mu.len() != expected {
            return Err(shape(format!(
                "operation tables have {} cells, expected {expected}",
                mu.len()
            )));
        }
        if let Some(&bad) = mu.iter().find(|&&c| c as usize >= m) {
            return Err(Error::OutOfRange {
                what: "operation table value",
                value: bad as usize,
                bound: m,
            });
        }
        Ok(GammaSemiring {
            m,
            n,
            r,
            add,
            mu,
            assoc_mode,
        })
    }

    /// Build the operation tables from a rule `f(gammas, args)`.
    pub fn from_fn(
        n: usize,
        r: usize,
        add: AdditionTable,
        assoc_mode: AssocMode,
        mut f: impl FnMut(&[Gamma], &[Element]) -> Element,
    ) -> Result<Self> {
        let m = add.size();
        check_shape(m, n, r)?;
        let mut mu = Vec::with_capacity(pow(r, n - 1) * pow(m, n));
        let mut gs = Odometer::new(n - 1, r);
        while let Some(g) = gs.next() {
            let mut xs = Odometer::new(n, m);
            while let Some(x) = xs.next() {
                mu.push(f(g, x));
            }
        }
        Self::new(n, r, add, mu, assoc_mode)
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn add(&self) -> &AdditionTable {
        &self.add
    }

    pub fn assoc_mode(&self) -> AssocMode {
        self.assoc_mode
    }

    #[must_use]
    pub fn with_assoc_mode(mut self, mode: AssocMode) -> Self {
        self.assoc_mode = mode;
        self
    }

    /// Number of Γ-tuples, `r^(n-1)`.
    #[inline]
    pub fn gamma_tuples(&self) -> usize {
        pow(self.r, self.n - 1)
    }

    /// Cells per operation table, `m^n`.
    #[inline]
    pub fn table_len(&self) -> usize {
        pow(self.m, self.n)
    }

    pub fn mu_tables(&self) -> impl Iterator<Item = &[Element]> {
        self.mu.chunks(self.table_len())
    }

    pub fn mu_raw(&self) -> &[Element] {
        &self.mu
    }

    pub fn carrier(&self) -> crate::Subset {
        crate::Subset::full(self.m)
    }

    #[inline]
    pub fn sum(&self, a: Element, b: Element) -> Element {
        self.add.sum(a, b)
    }

    /// Unchecked operation lookup by Γ-tuple index and argument tuple.
    #[inline]
    pub fn mu(&self, gamma_index: usize, args: &[Element]) -> Element {
        self.mu[gamma_index * self.table_len() + index_of(args, self.m)]
    }

    #[inline]
    pub fn mu_cell(&self, gamma_index: usize, arg_index: usize) -> Element {
        self.mu[gamma_index * self.table_len() + arg_index]
    }

    #[inline]
    pub fn gamma_index(&self, gammas: &[Gamma]) -> usize {
        index_of(gammas, self.r)
    }

    pub fn gamma_tuple(&self, index: usize) -> Vec<Gamma> {
        let mut out = vec![0; self.n - 1];
        decode(index, self.r, &mut out);
        out
    }

    /// Evaluate `μ(x1, γ1, x2, …, γ(n-1), xn)`, with bounds checking.
    pub fn eval_mu(&self, gammas: &[Gamma], args: &[Element]) -> Result<Element> {
        if gammas.len() != self.n - 1 {
            return Err(shape(format!(
                "expected {} Γ-parameters, got {}",
                self.n - 1,
                gammas.len()
            )));
        }
        if args.len() != self.n {
            return Err(shape(format!(
                "expected {} arguments, got {}",
                self.n,
                args.len()
            )));
        }
        if let Some(&g) = gammas.iter().find(|&&g| g as usize >= self.r) {
            return Err(Error::OutOfRange {
                what: "Γ-parameter",
                value: g as usize,
                bound: self.r,
            });
        }
        if let Some(&x) = args.iter().find(|&&x| x as usize >= self.m) {
            return Err(Error::OutOfRange {
                what: "element",
                value: x as usize,
                bound: self.m,
            });
        }
        Ok(self.mu(self.gamma_index(gammas), args))
    }

    /// Evaluate a nested application over `2n-1` elements and `2n-2`
    /// Γ-parameters, where the inner application covers the `n` elements
    /// starting at `window` and Γ-parameters stay in their positions.
    pub fn bracket(&self, window: usize, gammas: &[Gamma], elems: &[Element]) -> Element {
        let n = self.n;
        debug_assert!(window < n && gammas.len() == 2 * n - 2 && elems.len() == 2 * n - 1);
        let inner = self.mu(
            self.gamma_index(&gammas[window..window + n - 1]),
            &elems[window..window + n],
        );
        let mut outer_args = [0 as Element; MAX_ARITY];
        outer_args[..window].copy_from_slice(&elems[..window]);
        outer_args[window] = inner;
        outer_args[window + 1..n].copy_from_slice(&elems[window + n..]);
        let mut outer_g = [0 as Gamma; MAX_ARITY];
        outer_g[..window].copy_from_slice(&gammas[..window]);
        outer_g[window..n - 1].copy_from_slice(&gammas[window + n - 1..]);
        self.mu(self.gamma_index(&outer_g[..n - 1]), &outer_args[..n])
    }

    /// The structure transported along a relabeling: old element `x`
    /// becomes `perm[x]`, old Γ-value `g` becomes `gamma_perm[g]`.
    pub fn relabel(&self, perm: &[Element], gamma_perm: Option<&[Gamma]>) -> GammaSemiring {
        let (m, n) = (self.m, self.n);
        let table = self.table_len();
        let mut mu = vec![0; self.mu.len()];
        let mut g_new = vec![0; n - 1];
        let mut x_new = vec![0; n];
        let mut gs = Odometer::new(n - 1, self.r);
        let mut gi = 0;
        while let Some(g) = gs.next() {
            for (dst, &src) in g_new.iter_mut().zip(g) {
                *dst = gamma_perm.map_or(src, |p| p[src as usize]);
            }
            let base = index_of(&g_new, self.r) * table;
            let mut xs = Odometer::new(n, m);
            let mut xi = 0;
            while let Some(x) = xs.next() {
                for (dst, &src) in x_new.iter_mut().zip(x) {
                    *dst = perm[src as usize];
                }
                mu[base + index_of(&x_new, m)] = perm[self.mu[gi * table + xi] as usize];
                xi += 1;
            }
            gi += 1;
        }
        GammaSemiring {
            m,
            n,
            r: self.r,
            add: self.add.relabel(perm),
            mu,
            assoc_mode: self.assoc_mode,
        }
    }

    /// Canonical JSON serialization: fixed field order, no insignificant
    /// whitespace, terminated by a single newline. These are the bytes that
    /// get hashed for content digests.
    pub fn to_canonical_json(&self) -> String {
        let mut out = String::with_capacity(64 + 2 * (self.m * self.m + self.mu.len()));
        let _ = write!(
            out,
            "{{\"format_version\":1,\"m\":{},\"n\":{},\"r\":{},\"assoc_mode\":\"{}\",\"add\":[",
            self.m,
            self.n,
            self.r,
            self.assoc_mode.as_str()
        );
        for (i, row) in self.add.rows().enumerate() {
            if i > 0 {
                out.push(',');
            }
            push_array(&mut out, row);
        }
        out.push_str("],\"mu\":[");
        for (i, table) in self.mu_tables().enumerate() {
            if i > 0 {
                out.push(',');
            }
            push_array(&mut out, table);
        }
        out.push_str("]}\n");
        out
    }
}

fn push_array(out: &mut String, values: &[Element]) {
    out.push('[');
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "{v}");
    }
    out.push(']');
}

fn check_shape(m: usize, n: usize, r: usize) -> Result<()> {
    if m == 0 || m > MAX_CARRIER {
        return Err(Error::OutOfRange {
            what: "carrier size",
            value: m,
            bound: MAX_CARRIER + 1,
        });
    }
    if !(3..=MAX_ARITY).contains(&n) {
        return Err(shape(format!("arity must lie in 3..={MAX_ARITY}, got {n}")));
    }
    if r == 0 || r > 255 {
        return Err(shape(format!("Γ size must lie in 1..=255, got {r}")));
    }
    let cells = (r as u128)
        .saturating_pow(n as u32 - 1)
        .saturating_mul((m as u128).saturating_pow(n as u32));
    if cells > MAX_TABLE_CELLS as u128 {
        let actual = usize::try_from(cells).unwrap_or(usize::MAX);
        return Err(Error::Capacity {
            what: "operation table cells",
            actual,
            limit: MAX_TABLE_CELLS,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;

    #[test]
    fn eval_examples() {
        let e4 = instances::guarded_first_projection();
        assert_eq!(e4.eval_mu(&[0, 0], &[1, 2, 2]), Ok(1));
        assert_eq!(e4.eval_mu(&[0, 0], &[2, 1, 2]), Ok(2));
        let e2 = instances::boolean_and(3);
        assert_eq!(e2.eval_mu(&[0, 0], &[1, 1, 1]), Ok(1));
        assert_eq!(e2.eval_mu(&[0, 0], &[1, 0, 1]), Ok(0));
    }

    #[test]
    fn eval_rejects_bad_indices() {
        let e2 = instances::boolean_and(3);
        assert!(matches!(
            e2.eval_mu(&[1, 0], &[1, 1, 1]),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            e2.eval_mu(&[0, 0], &[1, 2, 1]),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(e2.eval_mu(&[0], &[1, 1, 1]), Err(Error::Shape(_))));
    }

    #[test]
    fn zero_absorption_on_instances() {
        for s in [
            instances::boolean_and(3),
            instances::guarded_first_projection(),
            instances::trivial(),
        ] {
            let mut xs = Odometer::new(3, s.m());
            while let Some(x) = xs.next() {
                if x.contains(&0) {
                    assert_eq!(s.mu(0, x), 0);
                }
            }
        }
    }

    #[test]
    fn canonical_json_shape() {
        let e2 = instances::boolean_and(3);
        assert_eq!(
            e2.to_canonical_json(),
            "{\"format_version\":1,\"m\":2,\"n\":3,\"r\":1,\"assoc_mode\":\"paper_ends\",\
             \"add\":[[0,1],[1,1]],\"mu\":[[0,0,0,0,0,0,0,1]]}\n"
        );
    }

    #[test]
    fn relabel_swap() {
        let e4 = instances::guarded_first_projection();
        let swapped = e4.relabel(&[0, 2, 1], None);
        assert_eq!(swapped.sum(2, 1), 1);
        assert_eq!(swapped.mu(0, &[2, 1, 1]), 2);
        assert_eq!(swapped.relabel(&[0, 2, 1], None), e4);
    }

    #[test]
    fn shape_errors() {
        assert!(
            GammaSemiring::new(2, 1, AdditionTable::or(), vec![0; 8], AssocMode::PaperEnds)
                .is_err()
        );
        assert!(
            GammaSemiring::new(3, 1, AdditionTable::or(), vec![0; 7], AssocMode::PaperEnds)
                .is_err()
        );
        assert!(AdditionTable::new(2, vec![0, 1, 1, 2]).is_err());
    }
}
