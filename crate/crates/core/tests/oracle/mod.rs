//! Naive reference implementations used to cross-check the library.
//!
//! Nothing here calls into the library's checking, search or
//! canonicalization code. Tables are plain vectors: an addition table is
//! `m*m` cells indexed `a*m + b`, an operation table is `r^(n-1)` blocks of
//! `m^n` cells with the first argument varying slowest.

#![allow(dead_code)]

pub fn power(base: usize, exp: usize) -> usize {
    (0..exp).fold(1, |acc, _| acc * base)
}

/// All tuples of length `len` over `[0, base)`, first position slowest.
pub fn tuples(len: usize, base: usize) -> Vec<Vec<u8>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * base);
        for t in &out {
            for v in 0..base {
                let mut t2 = t.clone();
                t2.push(v as u8);
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

fn encode(digits: &[u8], base: usize) -> usize {
    digits.iter().fold(0, |acc, &d| acc * base + d as usize)
}

/// All permutations of `[0, m)`, including those moving 0.
pub fn permutations(m: usize) -> Vec<Vec<u8>> {
    fn go(prefix: &mut Vec<u8>, used: &mut Vec<bool>, out: &mut Vec<Vec<u8>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v as u8);
                go(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; m], &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub m: usize,
    pub n: usize,
    pub r: usize,
    pub add: Vec<u8>,
    pub mu: Vec<u8>,
}

impl Table {
    pub fn plus(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.m + b as usize]
    }

    pub fn op(&self, gammas: &[u8], args: &[u8]) -> u8 {
        let block = encode(gammas, self.r) * power(self.m, self.n);
        self.mu[block + encode(args, self.m)]
    }
}

/// Commutative, associative, with identity 0.
pub fn is_commutative_monoid(m: usize, add: &[u8]) -> bool {
    let p = |a: usize, b: usize| add[a * m + b] as usize;
    (0..m).all(|a| p(0, a) == a && p(a, 0) == a)
        && (0..m).all(|a| (0..m).all(|b| p(a, b) == p(b, a)))
        && (0..m).all(|a| (0..m).all(|b| (0..m).all(|c| p(p(a, b), c) == p(a, p(b, c)))))
}

/// Every commutative monoid table on `[0, m)` with identity 0, unreduced.
pub fn all_additions(m: usize) -> Vec<Vec<u8>> {
    // Only the upper triangle of the nonzero block is free.
    let pairs: Vec<(usize, usize)> = (1..m).flat_map(|a| (a..m).map(move |b| (a, b))).collect();
    let mut out = Vec::new();
    for values in tuples(pairs.len(), m) {
        let mut add = vec![0u8; m * m];
        for a in 0..m {
            add[a] = a as u8;
            add[a * m] = a as u8;
        }
        for (&(a, b), &v) in pairs.iter().zip(&values) {
            add[a * m + b] = v;
            add[b * m + a] = v;
        }
        if is_commutative_monoid(m, &add) {
            out.push(add);
        }
    }
    out
}

/// Additions up to relabeling: collapse each table to the smallest image
/// under every permutation fixing 0 and count distinct results.
pub fn addition_classes(m: usize) -> Vec<Vec<u8>> {
    let perms: Vec<Vec<u8>> = permutations(m).into_iter().filter(|p| p[0] == 0).collect();
    let mut reps = std::collections::BTreeSet::new();
    for add in all_additions(m) {
        let best = perms
            .iter()
            .map(|p| {
                let mut t = vec![0u8; m * m];
                for a in 0..m {
                    for b in 0..m {
                        t[p[a] as usize * m + p[b] as usize] = p[add[a * m + b] as usize];
                    }
                }
                t
            })
            .min()
            .unwrap();
        reps.insert(best);
    }
    reps.into_iter().collect()
}

/// Axioms A1–A4, with associativity compared between the first and last
/// bracketing only.
pub fn satisfies_axioms(t: &Table) -> bool {
    let (m, n, r) = (t.m, t.n, t.r);
    if !is_commutative_monoid(m, &t.add) {
        return false;
    }
    let gtuples = tuples(n - 1, r);
    let xtuples = tuples(n, m);
    for g in &gtuples {
        for x in &xtuples {
            let v = t.op(g, x);
            // Absorption.
            if x.contains(&0) && v != 0 {
                return false;
            }
            // Additivity in each slot, splitting argument `i` as `x[i] + y`.
            for i in 0..n {
                for y in 0..m as u8 {
                    let mut left = x.clone();
                    left[i] = t.plus(x[i], y);
                    let mut other = x.clone();
                    other[i] = y;
                    if t.op(g, &left) != t.plus(v, t.op(g, &other)) {
                        return false;
                    }
                }
            }
        }
    }
    // Associativity: ((x1..xn) x(n+1)..x(2n-1)) = (x1..x(n-1) (xn..x(2n-1))).
    for g in tuples(2 * n - 2, r) {
        for x in tuples(2 * n - 1, m) {
            let head = t.op(&g[..n - 1], &x[..n]);
            let mut outer = vec![head];
            outer.extend_from_slice(&x[n..]);
            let lhs = t.op(&g[n - 1..], &outer);
            let tail = t.op(&g[n - 1..], &x[n - 1..]);
            let mut outer = x[..n - 1].to_vec();
            outer.push(tail);
            let rhs = t.op(&g[..n - 1], &outer);
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

/// All valid ternary single-Γ operation tables for a fixed addition,
/// scanning every table without any prefill.
pub fn valid_tables_unfilled(add: &[u8], m: usize) -> Vec<Vec<u8>> {
    let cells = power(m, 3);
    tuples(cells, m)
        .into_iter()
        .filter(|mu| {
            satisfies_axioms(&Table {
                m,
                n: 3,
                r: 1,
                add: add.to_vec(),
                mu: mu.clone(),
            })
        })
        .collect()
}

/// All valid tables with zero-argument cells fixed to 0 and the rest scanned.
pub fn valid_tables_prefilled(add: &[u8], m: usize, n: usize, r: usize) -> Vec<Vec<u8>> {
    let xs = tuples(n, m);
    let free_per_block: Vec<usize> = (0..xs.len()).filter(|&i| !xs[i].contains(&0)).collect();
    let blocks = power(r, n - 1);
    let free = free_per_block.len() * blocks;
    let mut out = Vec::new();
    for values in tuples(free, m) {
        let mut mu = vec![0u8; blocks * xs.len()];
        let mut it = values.iter();
        for b in 0..blocks {
            for &i in &free_per_block {
                mu[b * xs.len() + i] = *it.next().unwrap();
            }
        }
        let t = Table {
            m,
            n,
            r,
            add: add.to_vec(),
            mu,
        };
        if satisfies_axioms(&t) {
            out.push(t.mu);
        }
    }
    out
}

/// Some bijection `p` (any bijection, 0 is not assumed fixed) carrying `a`
/// onto `b` cell for cell.
pub fn find_isomorphism(a: &Table, b: &Table) -> Option<Vec<u8>> {
    if (a.m, a.n, a.r) != (b.m, b.n, b.r) {
        return None;
    }
    let (m, n, r) = (a.m, a.n, a.r);
    let xs = tuples(n, m);
    let gs = tuples(n - 1, r);
    permutations(m).into_iter().find(|p| {
        let add_ok = (0..m)
            .all(|x| (0..m).all(|y| p[a.plus(x as u8, y as u8) as usize] == b.plus(p[x], p[y])));
        add_ok
            && gs.iter().all(|g| {
                xs.iter().all(|x| {
                    let img: Vec<u8> = x.iter().map(|&v| p[v as usize]).collect();
                    p[a.op(g, x) as usize] == b.op(g, &img)
                })
            })
    })
}

/// Number of isomorphism classes by greedy pairwise grouping.
pub fn class_count(tables: &[Table]) -> usize {
    let mut reps: Vec<&Table> = Vec::new();
    for t in tables {
        if !reps.iter().any(|r| find_isomorphism(r, t).is_some()) {
            reps.push(t);
        }
    }
    reps.len()
}

/// A slot module over a ternary-or-higher base: module addition on `[0,k)`
/// and an action indexed by Γ-tuple, the `n-1` base arguments in slot order
/// skipping `j`, then the module element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleTable {
    pub k: usize,
    pub madd: Vec<u8>,
    pub action: Vec<u8>,
}

impl ModuleTable {
    fn act(&self, base: &Table, g: &[u8], bases: &[u8], x: u8) -> u8 {
        let idx = (encode(g, base.r) * power(base.m, base.n - 1) + encode(bases, base.m)) * self.k
            + x as usize;
        self.action[idx]
    }

    fn mplus(&self, a: u8, b: u8) -> u8 {
        self.madd[a as usize * self.k + b as usize]
    }
}

/// Module axioms: module addition is a commutative monoid, the action is
/// additive in each base slot and in the module slot, absorbs 0 in every
/// position, and the first and last well-formed bracketings of a length
/// `2n-1` word with one module letter agree.
pub fn module_ok(base: &Table, j: usize, md: &ModuleTable) -> bool {
    let (m, n, r, k) = (base.m, base.n, base.r, md.k);
    if !is_commutative_monoid(k, &md.madd) {
        return false;
    }
    let gs = tuples(n - 1, r);
    let bs = tuples(n - 1, m);
    for g in &gs {
        for b in &bs {
            for x in 0..k as u8 {
                let v = md.act(base, g, b, x);
                if (b.contains(&0) || x == 0) && v != 0 {
                    return false;
                }
                for y in 0..k as u8 {
                    if md.act(base, g, b, md.mplus(x, y)) != md.mplus(v, md.act(base, g, b, y)) {
                        return false;
                    }
                }
                for i in 0..n - 1 {
                    for y in 0..m as u8 {
                        let mut s = b.clone();
                        s[i] = base.plus(b[i], y);
                        let mut o = b.clone();
                        o[i] = y;
                        if md.act(base, g, &s, x) != md.mplus(v, md.act(base, g, &o, x)) {
                            return false;
                        }
                    }
                }
            }
        }
    }
    // Compatibility. A word has 2n-1 letters, exactly one of them (at `q`)
    // from the module. Bracketing at window `p` is well formed when the
    // module letter ends up in slot `j` of whichever application sees it.
    let jj = j - 1;
    for q in 0..2 * n - 1 {
        let windows: Vec<usize> = (0..n)
            .filter(|&p| {
                if q >= p && q < p + n {
                    q - p == jj && p == jj
                } else if q < p {
                    q == jj
                } else {
                    q - (n - 1) == jj
                }
            })
            .collect();
        if windows.len() < 2 {
            continue;
        }
        for g in tuples(2 * n - 2, r) {
            for w in tuples(2 * n - 2, m) {
                for x in 0..k as u8 {
                    let first = windows[0];
                    let last = windows[windows.len() - 1];
                    if bracket_module(base, md, n, q, first, &g, &w, x)
                        != bracket_module(base, md, n, q, last, &g, &w, x)
                    {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Evaluate with the inner application at window `p`; `w` lists the base
/// letters in order with the module letter `x` removed from position `q`.
#[allow(clippy::too_many_arguments)]
fn bracket_module(
    base: &Table,
    md: &ModuleTable,
    n: usize,
    q: usize,
    p: usize,
    g: &[u8],
    w: &[u8],
    x: u8,
) -> u8 {
    let inner_g = &g[p..p + n - 1];
    let outer_g: Vec<u8> = g[..p].iter().chain(&g[p + n - 1..]).copied().collect();
    // Letters as Option: None marks the module letter.
    let mut word: Vec<Option<u8>> = w.iter().map(|&v| Some(v)).collect();
    word.insert(q, None);
    let inner = &word[p..p + n];
    let inner_value: Option<u8> = if inner.contains(&None) {
        let bases: Vec<u8> = inner.iter().flatten().copied().collect();
        Some(md.act(base, inner_g, &bases, x))
    } else {
        let args: Vec<u8> = inner.iter().map(|v| v.unwrap()).collect();
        Some(base.op(inner_g, &args))
    };
    let module_inside = inner.contains(&None);
    let mut outer: Vec<Option<u8>> = word[..p].to_vec();
    outer.push(if module_inside { None } else { inner_value });
    outer.extend_from_slice(&word[p + n..]);
    let bases: Vec<u8> = outer.iter().flatten().copied().collect();
    let module_value = if module_inside {
        inner_value.unwrap()
    } else {
        x
    };
    md.act(base, &outer_g, &bases, module_value)
}

/// Every valid module with carrier size exactly `k`, over all module
/// additions and all absorption-prefilled actions, unreduced.
pub fn all_modules(base: &Table, j: usize, k: usize) -> Vec<ModuleTable> {
    let (m, n, r) = (base.m, base.n, base.r);
    let gs = tuples(n - 1, r);
    let bs = tuples(n - 1, m);
    let mut free = Vec::new();
    for (gi, _) in gs.iter().enumerate() {
        for (bi, b) in bs.iter().enumerate() {
            if b.contains(&0) {
                continue;
            }
            for x in 1..k {
                free.push((gi * bs.len() + bi) * k + x);
            }
        }
    }
    let len = gs.len() * bs.len() * k;
    let mut out = Vec::new();
    for madd in all_additions(k) {
        for values in tuples(free.len(), k) {
            let mut action = vec![0u8; len];
            for (&c, &v) in free.iter().zip(&values) {
                action[c] = v;
            }
            let md = ModuleTable {
                k,
                madd: madd.clone(),
                action,
            };
            if module_ok(base, j, &md) {
                out.push(md);
            }
        }
    }
    out
}

/// Two modules are isomorphic when a bijection of module carriers carries
/// one addition and action onto the other.
pub fn modules_isomorphic(base: &Table, a: &ModuleTable, b: &ModuleTable) -> bool {
    if a.k != b.k {
        return false;
    }
    let k = a.k;
    let gs = tuples(base.n - 1, base.r);
    let bs = tuples(base.n - 1, base.m);
    permutations(k).into_iter().any(|p| {
        (0..k).all(|x| (0..k).all(|y| p[a.mplus(x as u8, y as u8) as usize] == b.mplus(p[x], p[y])))
            && gs.iter().all(|g| {
                bs.iter().all(|bb| {
                    (0..k as u8).all(|x| {
                        p[a.act(base, g, bb, x) as usize] == b.act(base, g, bb, p[x as usize])
                    })
                })
            })
    })
}

/// Module isomorphism classes with carriers `1..=k_max`.
pub fn module_class_count(base: &Table, j: usize, k_max: usize) -> usize {
    let mut total = 0;
    for k in 1..=k_max {
        let mut reps: Vec<ModuleTable> = Vec::new();
        for md in all_modules(base, j, k) {
            if !reps.iter().any(|r| modules_isomorphic(base, r, &md)) {
                reps.push(md);
            }
        }
        total += reps.len();
    }
    total
}

/// Same-shape reference tables for the two standard examples.
pub fn boolean_and_ternary() -> Table {
    let mut mu = vec![0u8; 8];
    mu[7] = 1;
    Table {
        m: 2,
        n: 3,
        r: 1,
        add: vec![0, 1, 1, 1],
        mu,
    }
}

pub fn guarded_projection() -> Table {
    let mu = tuples(3, 3)
        .into_iter()
        .map(|x| if x.contains(&0) { 0 } else { x[0] })
        .collect();
    Table {
        m: 3,
        n: 3,
        r: 1,
        add: vec![0, 1, 2, 1, 1, 2, 2, 2, 2],
        mu,
    }
}

pub fn max_addition(m: usize) -> Vec<u8> {
    (0..m * m).map(|i| (i / m).max(i % m) as u8).collect()
}
