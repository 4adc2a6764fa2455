//! Group homology, Tate cohomology of cyclic groups, truncated Tate
//! cohomology for admissible families, and the relative Tate construction
//! on Λ-objects with a Z/p-action.
//!
//! Truncated Tate cohomology `H̄_i(G, X, M)` is graded homologically: it is
//! the homology of `(P̃ ⊗ M)^G`, where `P̃_m = P_0^{⊗m}` is the augmented
//! Čech complex of an X-surjective permutation module `P_0 = k[S]`. For
//! `X = {e}` this gives `Ť^{−i}`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;

use crate::chains::{Betti, ChainComplex, ChainMap, HomologyBasis};
use crate::cyc::{Cell, CyclicModule, MixedComplex, Quotient, SimplicialModule};
use crate::error::{Error, Result};
use crate::fincat::{check_functor, homology_with_support, Functor, TableCat};
use crate::linalg::{solve_columns, svec_from, Accumulator, Echelon, Field, SVec, SparseMatrix};

/// A finite group as a multiplication table on `0..order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinGroup {
    table: Vec<Vec<u32>>,
    inv: Vec<u32>,
    identity: usize,
    perms: Option<Vec<Vec<usize>>>,
}

impl FinGroup {
    /// Checks closure, identity, inverses and associativity on all triples.
    pub fn from_table(table: Vec<Vec<u32>>) -> Result<Self> {
        let n = table.len();
        if n == 0 || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x as usize >= n)) {
            return Err(Error::Validation("multiplication table is not square or not closed".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] as usize == a && table[a][e] as usize == a))
            .ok_or_else(|| Error::Validation("no identity element".into()))?;
        let mut inv = vec![0u32; n];
        for a in 0..n {
            inv[a] = (0..n)
                .find(|&b| table[a][b] as usize == identity && table[b][a] as usize == identity)
                .ok_or_else(|| Error::Validation(format!("element {a} has no inverse")))? as u32;
        }
        let assoc = (0..n).into_par_iter().all(|a| {
            (0..n).all(|b| {
                let ab = table[a][b] as usize;
                (0..n).all(|c| table[ab][c] == table[a][table[b][c] as usize])
            })
        });
        if !assoc {
            return Err(Error::Validation("multiplication is not associative".into()));
        }
        Ok(FinGroup { table, inv, identity, perms: None })
    }

    /// The group generated by permutations of `0..degree`, elements sorted
    /// lexicographically by their image lists; `a·b` applies `b` first.
    pub fn from_permutations(degree: usize, gens: &[Vec<usize>]) -> Result<Self> {
        for g in gens {
            let mut seen = vec![false; degree];
            if g.len() != degree || g.iter().any(|&x| x >= degree || std::mem::replace(&mut seen[x], true)) {
                return Err(Error::Validation(format!("{g:?} is not a permutation of {degree} points")));
            }
        }
        let id: Vec<usize> = (0..degree).collect();
        let mut all: BTreeSet<Vec<usize>> = BTreeSet::from([id.clone()]);
        let mut frontier = vec![id];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y: Vec<usize> = x.iter().map(|&i| g[i]).collect();
                if all.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        let elems: Vec<Vec<usize>> = all.into_iter().collect();
        let index: HashMap<&Vec<usize>, u32> = elems.iter().enumerate().map(|(i, e)| (e, i as u32)).collect();
        let table = elems
            .iter()
            .map(|a| {
                elems
                    .iter()
                    .map(|b| {
                        let ab: Vec<usize> = b.iter().map(|&i| a[i]).collect();
                        index[&ab]
                    })
                    .collect()
            })
            .collect();
        let mut g = FinGroup::from_table(table)?;
        g.perms = Some(elems);
        Ok(g)
    }

    pub fn cyclic(n: usize) -> Self {
        let gen: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        FinGroup::from_permutations(n, &[gen]).expect("a cycle is a permutation")
    }

    pub fn symmetric(n: usize) -> Self {
        let mut gens = Vec::new();
        if n >= 2 {
            let mut t: Vec<usize> = (0..n).collect();
            t.swap(0, 1);
            gens.push(t);
            gens.push((0..n).map(|i| (i + 1) % n).collect());
        }
        FinGroup::from_permutations(n, &gens).expect("generators are permutations")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn permutation(&self, a: usize) -> Option<&[usize]> {
        self.perms.as_ref().map(|p| p[a].as_slice())
    }

    /// Index of a permutation, when the group was built from permutations.
    pub fn find_permutation(&self, perm: &[usize]) -> Option<usize> {
        self.perms.as_ref()?.iter().position(|q| q == perm)
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Subgroup generated by `gens`, as a sorted element list.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut set = BTreeSet::from([self.identity]);
        let mut frontier = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        set.into_iter().collect()
    }

    pub fn is_subgroup(&self, s: &[usize]) -> bool {
        let set: BTreeSet<usize> = s.iter().copied().collect();
        set.contains(&self.identity) && s.iter().all(|&a| s.iter().all(|&b| set.contains(&self.mul(a, self.inv(b)))))
    }

    /// `g⁻¹ H g`, sorted.
    pub fn conjugate(&self, h: &[usize], g: usize) -> Vec<usize> {
        let gi = self.inv(g);
        let mut out: Vec<usize> = h.iter().map(|&x| self.mul(gi, self.mul(x, g))).collect();
        out.sort_unstable();
        out
    }

    /// Left cosets `gH`, each sorted, listed by smallest element.
    pub fn left_cosets(&self, h: &[usize]) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.order()];
        let mut out = Vec::new();
        for g in 0..self.order() {
            if seen[g] {
                continue;
            }
            let mut c: Vec<usize> = h.iter().map(|&x| self.mul(g, x)).collect();
            c.sort_unstable();
            for &x in &c {
                seen[x] = true;
            }
            out.push(c);
        }
        out
    }

    /// Every subgroup, sorted by order and then by element list.
    pub fn subgroups(&self) -> Vec<Vec<usize>> {
        let mut all: BTreeSet<Vec<usize>> = (0..self.order()).map(|g| self.generated(&[g])).collect();
        loop {
            let cur: Vec<Vec<usize>> = all.iter().cloned().collect();
            let mut grew = false;
            for a in &cur {
                for b in &cur {
                    let gens: Vec<usize> = a.iter().chain(b.iter()).copied().collect();
                    if all.insert(self.generated(&gens)) {
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        let mut v: Vec<Vec<usize>> = all.into_iter().collect();
        v.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        v
    }
}

/// A finite-dimensional representation of a finite group.
#[derive(Clone, Debug)]
pub struct GModule {
    field: Field,
    dim: usize,
    mats: Vec<SparseMatrix>,
}

impl GModule {
    /// Checks `M(e) = 1` and `M(gh) = M(g)M(h)` for all pairs.
    pub fn new(g: &FinGroup, field: Field, dim: usize, mats: Vec<SparseMatrix>) -> Result<Self> {
        if mats.len() != g.order() || mats.iter().any(|m| m.nrows() != dim || m.ncols() != dim || m.field() != field) {
            return Err(Error::Shape("one square matrix per group element is required".into()));
        }
        if mats[g.identity()] != SparseMatrix::identity(field, dim) {
            return Err(Error::InvalidAction("identity does not act trivially".into()));
        }
        let n = g.order();
        let ok = (0..n)
            .into_par_iter()
            .all(|a| (0..n).all(|b| mats[g.mul(a, b)] == mats[a].dot(&mats[b])));
        if !ok {
            return Err(Error::InvalidAction("matrices do not form a representation".into()));
        }
        Ok(GModule { field, dim, mats })
    }

    pub fn trivial(g: &FinGroup, field: Field, dim: usize) -> Self {
        GModule { field, dim, mats: vec![SparseMatrix::identity(field, dim); g.order()] }
    }

    /// Permutation module on `points` with `act(g, i)` the image of point `i`.
    pub fn permutation(g: &FinGroup, field: Field, points: usize, act: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let mats = (0..g.order())
            .map(|a| {
                let trip: Vec<_> = (0..points).map(|i| (act(a, i), i, 1i64)).collect();
                SparseMatrix::from_triplets(field, points, points, trip)
            })
            .collect::<Result<Vec<_>>>()?;
        GModule::new(g, field, points, mats)
    }

    /// `k[G]` with left multiplication.
    pub fn regular(g: &FinGroup, field: Field) -> Self {
        GModule::permutation(g, field, g.order(), |a, x| g.mul(a, x)).expect("left multiplication is an action")
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn act(&self, g: usize) -> &SparseMatrix {
        &self.mats[g]
    }

    /// Basis of `M^H` as columns.
    pub fn invariants(&self, h: &[usize]) -> SparseMatrix {
        let id = SparseMatrix::identity(self.field, self.dim);
        let parts: Vec<SparseMatrix> = h.iter().map(|&x| self.mats[x].sub(&id).expect("square")).collect();
        if parts.is_empty() {
            return id;
        }
        let refs: Vec<&SparseMatrix> = parts.iter().collect();
        SparseMatrix::vstack(&refs).expect("same width").kernel().matrix(self.field)
    }

    pub fn coinvariants_dim(&self, g: &FinGroup) -> usize {
        let id = SparseMatrix::identity(self.field, self.dim);
        let parts: Vec<SparseMatrix> = (0..g.order()).map(|x| self.mats[x].sub(&id).expect("square")).collect();
        let refs: Vec<&SparseMatrix> = parts.iter().collect();
        self.dim - SparseMatrix::hstack(&refs).expect("same height").rank()
    }
}

fn generator_of_cyclic(g: &FinGroup) -> Result<usize> {
    (0..g.order())
        .find(|&a| g.element_order(a) == g.order())
        .ok_or_else(|| Error::UnsupportedGroup(format!("group of order {} is not cyclic", g.order())))
}

fn group_norm(m: &GModule, gen: usize, g: &FinGroup) -> SparseMatrix {
    let mut acc = SparseMatrix::zero(m.field, m.dim, m.dim);
    let mut x = g.identity();
    for _ in 0..g.order() {
        acc = acc.add(&m.mats[x]).expect("same shape");
        x = g.mul(x, gen);
    }
    acc
}

/// `Ť^i(G, M)` for `|i| ≤ d`, `G` cyclic, from the 2-periodic complex
/// `⋯ → M →^{1−σ} M →^{N} M → ⋯` (`Ť^0 = M^G / N M`).
pub fn tate_cyclic(g: &FinGroup, m: &GModule, d: usize) -> Result<Vec<Betti>> {
    let gen = generator_of_cyclic(g)?;
    let f = m.field;
    let one_minus = SparseMatrix::identity(f, m.dim).sub(&m.mats[gen])?;
    let norm = group_norm(m, gen, g);
    let d = d as i64;
    // homological degree j carries Ť^{−j}; d^i = 1 − σ for i even
    let lo = -d - 1;
    let diffs = (lo + 1..=d + 1)
        .map(|j| if (-j).rem_euclid(2) == 0 { one_minus.clone() } else { norm.clone() })
        .collect();
    let c = ChainComplex::new(f, lo, vec![m.dim; (2 * d + 3) as usize], diffs)?.with_open_edges(true, true);
    let h = c.homology_dims();
    Ok((-d..=d).map(|i| h[&(-i)]).collect())
}

/// `H_n(G, M)` for `n ≤ max_degree` from the normalized bar complex
/// `M ⊗ k[G∖e]^{⊗n}`, with `M` a right module through `m·g = g⁻¹m`.
pub fn group_homology(g: &FinGroup, m: &GModule, max_degree: usize) -> Result<Vec<Betti>> {
    let f = m.field;
    let others: Vec<usize> = (0..g.order()).filter(|&x| x != g.identity()).collect();
    let slot: HashMap<usize, usize> = others.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let r = others.len();
    let top = max_degree + 1;
    let mut dims = Vec::new();
    for n in 0..=top {
        let cells = r.checked_pow(n as u32).and_then(|c| c.checked_mul(m.dim));
        let cells = cells.ok_or_else(|| Error::budget("bar complex too large"))?;
        crate::budget::check(cells as u64 * (n as u64 + 1), "bar complex")?;
        dims.push(cells);
    }
    let diffs = (1..=top)
        .into_par_iter()
        .map(|n| {
            let ntup = r.pow(n as u32);
            let encode = |t: &[usize]| t.iter().fold(0usize, |acc, &x| acc * r + x);
            let cols = (0..ntup * m.dim)
                .map(|col| {
                    let (code, i) = (col / m.dim, col % m.dim);
                    let mut tup = vec![0usize; n];
                    let mut c = code;
                    for k in (0..n).rev() {
                        tup[k] = c % r;
                        c /= r;
                    }
                    let els: Vec<usize> = tup.iter().map(|&x| others[x]).collect();
                    let mut acc = Accumulator::new(f, r.pow(n as u32 - 1) * m.dim);
                    // m·g_1 ⊗ [g_2|…]
                    let rest = encode(&tup[1..]);
                    for &(row, v) in m.mats[g.inv(els[0])].col(i) {
                        acc.add((rest * m.dim + row as usize) as u32, v);
                    }
                    for k in 0..n - 1 {
                        let prod = g.mul(els[k], els[k + 1]);
                        if prod == g.identity() {
                            continue;
                        }
                        let mut t: Vec<usize> = tup[..k].to_vec();
                        t.push(slot[&prod]);
                        t.extend_from_slice(&tup[k + 2..]);
                        acc.add((encode(&t) * m.dim + i) as u32, f.sign((k + 1) % 2 == 1));
                    }
                    let last = encode(&tup[..n - 1]);
                    acc.add((last * m.dim + i) as u32, f.sign(n % 2 == 1));
                    acc.take()
                })
                .collect();
            SparseMatrix::from_cols(f, r.pow(n as u32 - 1) * m.dim, cols)
        })
        .collect::<Result<Vec<_>>>()?;
    let c = ChainComplex::new(f, 0, dims, diffs)?.with_open_edges(false, true);
    let h = c.homology_dims();
    Ok((0..=max_degree as i64).map(|n| h[&n]).collect())
}

/// Proper subgroups closed under conjugation and intersection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupFamily {
    members: Vec<Vec<usize>>,
}

impl SubgroupFamily {
    pub fn members(&self) -> &[Vec<usize>] {
        &self.members
    }

    pub fn contains(&self, h: &[usize]) -> bool {
        self.members.binary_search_by(|m| cmp_subgroups(m, h)).is_ok()
    }

    /// One subgroup per conjugacy class: the first member of the class in
    /// family order (by order, then element list).
    pub fn conjugacy_representatives(&self, g: &FinGroup) -> Vec<Vec<usize>> {
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut reps = Vec::new();
        for h in &self.members {
            if seen.contains(h) {
                continue;
            }
            for x in 0..g.order() {
                seen.insert(g.conjugate(h, x));
            }
            reps.push(h.clone());
        }
        reps
    }
}

fn cmp_subgroups(a: &[usize], b: &[usize]) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then(a.cmp(b))
}

/// Smallest family containing `seeds`, closed under conjugation and
/// intersection; fails if it contains `G`.
pub fn family_closure(g: &FinGroup, seeds: &[Vec<usize>]) -> Result<SubgroupFamily> {
    let mut set: BTreeSet<Vec<usize>> = BTreeSet::new();
    for s in seeds {
        let mut s = s.clone();
        s.sort_unstable();
        s.dedup();
        if !g.is_subgroup(&s) {
            return Err(Error::Validation(format!("{s:?} is not a subgroup")));
        }
        set.insert(s);
    }
    loop {
        let cur: Vec<Vec<usize>> = set.iter().cloned().collect();
        let mut grew = false;
        for h in &cur {
            for x in 0..g.order() {
                grew |= set.insert(g.conjugate(h, x));
            }
        }
        let cur: Vec<Vec<usize>> = set.iter().cloned().collect();
        for a in &cur {
            for b in &cur {
                let i: Vec<usize> = a.iter().filter(|x| b.binary_search(x).is_ok()).copied().collect();
                grew |= set.insert(i);
            }
        }
        if !grew {
            break;
        }
    }
    if set.iter().any(|h| h.len() == g.order()) {
        return Err(Error::InadmissibleFamily("the closure contains the whole group".into()));
    }
    let mut members: Vec<Vec<usize>> = set.into_iter().collect();
    members.sort_by(|a, b| cmp_subgroups(a, b));
    Ok(SubgroupFamily { members })
}

/// A finite left G-set: `act[g][s]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GSet {
    act: Vec<Vec<u32>>,
}

impl GSet {
    pub fn new(g: &FinGroup, act: Vec<Vec<u32>>) -> Result<Self> {
        let n = act.first().map_or(0, |r| r.len());
        if act.len() != g.order() || act.iter().any(|r| r.len() != n || r.iter().any(|&x| x as usize >= n)) {
            return Err(Error::Shape("one image list per group element is required".into()));
        }
        let ok = (0..g.order()).all(|a| {
            (0..g.order()).all(|b| (0..n).all(|s| act[g.mul(a, b)][s] == act[a][act[b][s] as usize]))
        }) && (0..n).all(|s| act[g.identity()][s] as usize == s);
        if !ok {
            return Err(Error::InvalidAction("not a group action".into()));
        }
        Ok(GSet { act })
    }

    /// `G/H` with cosets in [`FinGroup::left_cosets`] order.
    pub fn cosets(g: &FinGroup, h: &[usize]) -> Self {
        let cos = g.left_cosets(h);
        let mut which = vec![0u32; g.order()];
        for (i, c) in cos.iter().enumerate() {
            for &x in c {
                which[x] = i as u32;
            }
        }
        let act = (0..g.order()).map(|a| cos.iter().map(|c| which[g.mul(a, c[0])]).collect()).collect();
        GSet { act }
    }

    /// Disjoint union.
    pub fn sum(&self, other: &GSet) -> GSet {
        let n = self.points() as u32;
        let act = self
            .act
            .iter()
            .zip(&other.act)
            .map(|(a, b)| a.iter().copied().chain(b.iter().map(|&x| x + n)).collect())
            .collect();
        GSet { act }
    }

    pub fn points(&self) -> usize {
        self.act.first().map_or(0, |r| r.len())
    }

    /// `k[S] → k` is onto on `H`-invariants iff some `H`-orbit has size prime to `p`.
    pub fn surjective_on_invariants(&self, h: &[usize], p: u32) -> bool {
        let mut seen = vec![false; self.points()];
        for s in 0..self.points() {
            if seen[s] {
                continue;
            }
            let orbit: BTreeSet<u32> = h.iter().map(|&x| self.act[x][s]).collect();
            for &t in &orbit {
                seen[t as usize] = true;
            }
            if !orbit.len().is_multiple_of(p as usize) {
                return true;
            }
        }
        false
    }
}

/// The cover `k[G/H]` for the largest `H ∈ X` (by order, then element
/// list) whose orbit passes the X-surjectivity check, else `⊕_{H ∈ X} k[G/H]`
/// over conjugacy representatives.
pub fn default_cover(g: &FinGroup, x: &SubgroupFamily, p: u32) -> GSet {
    let reps = x.conjugacy_representatives(g);
    for h in reps.iter().rev() {
        let s = GSet::cosets(g, h);
        if x.members().iter().all(|k| s.surjective_on_invariants(k, p)) {
            return s;
        }
    }
    let mut it = reps.iter().map(|h| GSet::cosets(g, h));
    let first = it.next().expect("families contain the trivial group after closure");
    it.fold(first, |acc, s| acc.sum(&s))
}

/// `(k[S^m] ⊗ M)^K` for `m = 0..=top` with the augmented Čech differential
/// `Σ_j (−1)^j ε_j`, cells indexed by `K`-orbits on `S^m`.
struct OrbitCech {
    field: Field,
    npts: usize,
    /// per degree: orbit id of every tuple code
    orbit_of: Vec<Vec<u32>>,
    /// per degree: representative tuple code of every orbit
    reps: Vec<Vec<u64>>,
    complex: ChainComplex,
}

fn decode(mut code: u64, n: usize, m: usize) -> Vec<u32> {
    let mut t = vec![0u32; m];
    for k in (0..m).rev() {
        t[k] = (code % n as u64) as u32;
        code /= n as u64;
    }
    t
}

fn encode(t: &[u32], n: usize) -> u64 {
    t.iter().fold(0u64, |acc, &x| acc * n as u64 + x as u64)
}

impl OrbitCech {
    fn build(k: &[usize], s: &GSet, m: &GModule, top: usize) -> Result<OrbitCech> {
        let f = m.field;
        let n = s.points();
        let size = |d: usize| (n as u64).checked_pow(d as u32).filter(|&c| c <= u32::MAX as u64 / 2);
        let total = size(top).ok_or_else(|| Error::budget("tensor power of the cover is too large"))?;
        crate::budget::check(total * (top as u64 + 1), "tensor power of the cover")?;
        let mut orbit_of = Vec::new();
        let mut reps = Vec::new();
        let mut bases = Vec::new();
        let mut dims = Vec::new();
        let mut inv_cache: HashMap<Vec<usize>, SparseMatrix> = HashMap::new();
        for d in 0..=top {
            let cnt = size(d).expect("bounded above");
            let mut of = vec![u32::MAX; cnt as usize];
            let mut rp = Vec::new();
            let mut bs = Vec::new();
            let mut off = 0usize;
            for code in 0..cnt {
                if of[code as usize] != u32::MAX {
                    continue;
                }
                let t = decode(code, n, d);
                let id = rp.len() as u32;
                let mut stab = Vec::new();
                for &x in k {
                    let y: Vec<u32> = t.iter().map(|&i| s.act[x][i as usize]).collect();
                    let c = encode(&y, n);
                    of[c as usize] = id;
                    if c == code {
                        stab.push(x);
                    }
                }
                rp.push(code);
                let basis = inv_cache.entry(stab.clone()).or_insert_with(|| m.invariants(&stab)).clone();
                let w = basis.ncols();
                bs.push((basis, off));
                off += w;
            }
            orbit_of.push(of);
            reps.push(rp);
            bases.push(bs);
            dims.push(off);
        }
        let diffs = (1..=top)
            .into_par_iter()
            .map(|d| -> Result<SparseMatrix> {
                // echelon forms for reading coordinates in the target bases
                let ech: Vec<Echelon> = bases[d - 1]
                    .iter()
                    .map(|(b, _)| {
                        let mut e = Echelon::tracked(f, m.dim);
                        for c in b.columns() {
                            e.insert(c.clone());
                        }
                        e
                    })
                    .collect();
                let mut cols = Vec::with_capacity(dims[d]);
                for (o, &code) in reps[d].iter().enumerate() {
                    let t = decode(code, n, d);
                    // one group element per point of the orbit
                    let mut moved: BTreeMap<u64, usize> = BTreeMap::new();
                    for &x in k {
                        let y: Vec<u32> = t.iter().map(|&i| s.act[x][i as usize]).collect();
                        moved.entry(encode(&y, n)).or_insert(x);
                    }
                    let (basis, _) = &bases[d][o];
                    for v in basis.columns() {
                        let mut slots: BTreeMap<u32, Accumulator> = BTreeMap::new();
                        for (&yc, &x) in &moved {
                            let y = decode(yc, n, d);
                            let gv = m.mats[x].apply(v);
                            for j in 0..d {
                                let mut z = y.clone();
                                z.remove(j);
                                let zc = encode(&z, n);
                                let o2 = orbit_of[d - 1][zc as usize];
                                if reps[d - 1][o2 as usize] != zc {
                                    continue;
                                }
                                let acc = slots.entry(o2).or_insert_with(|| Accumulator::new(f, m.dim));
                                acc.add_scaled(f.sign(j % 2 == 1), &gv);
                            }
                        }
                        let mut col: Vec<(u32, i64)> = Vec::new();
                        for (o2, mut acc) in slots {
                            let w = acc.take();
                            if w.is_empty() {
                                continue;
                            }
                            let coords = ech[o2 as usize]
                                .express(&w)
                                .ok_or_else(|| Error::Validation("image is not invariant".into()))?;
                            let off = bases[d - 1][o2 as usize].1;
                            col.extend(coords.into_iter().map(|(i, c)| ((off + i as usize) as u32, c as i64)));
                        }
                        cols.push(svec_from(f, col));
                    }
                }
                SparseMatrix::from_cols(f, dims[d - 1], cols)
            })
            .collect::<Result<Vec<_>>>()?;
        let complex = ChainComplex::new(f, 0, dims.clone(), diffs)?.with_open_edges(false, true);
        Ok(OrbitCech { field: f, npts: n, orbit_of, reps, complex })
    }

    /// Product of invariant chains for trivial one-dimensional coefficients:
    /// concatenation of tuples, read off on orbit representatives.
    fn product(&self, a: usize, x: &SVec, b: usize, y: &SVec) -> SVec {
        let f = self.field;
        let xd: HashMap<u32, u32> = x.iter().copied().collect();
        let yd: HashMap<u32, u32> = y.iter().copied().collect();
        let mut out = Vec::new();
        for (o, &code) in self.reps[a + b].iter().enumerate() {
            let t = decode(code, self.npts, a + b);
            let pa = self.orbit_of[a][encode(&t[..a], self.npts) as usize];
            let pb = self.orbit_of[b][encode(&t[a..], self.npts) as usize];
            if let (Some(&u), Some(&v)) = (xd.get(&pa), yd.get(&pb)) {
                out.push((o as u32, f.mul(u, v) as i64));
            }
        }
        svec_from(f, out)
    }
}

/// Multiplication on truncated Tate cohomology with trivial coefficients:
/// `table[(a, b)]` has column `i·dim H_b + j` equal to the class of
/// `x_i · y_j` in `H_{a+b}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingTable {
    pub dims: Vec<usize>,
    pub table: BTreeMap<(usize, usize), SparseMatrix>,
}

impl RingTable {
    /// Whether the ring is `k[ξ]` with `deg ξ = 1` through the table's range:
    /// every `H_n` is one-dimensional and spanned by `ξ^n`.
    pub fn is_polynomial_on_degree_one(&self) -> bool {
        if self.dims.iter().any(|&d| d != 1) {
            return false;
        }
        // with one-dimensional pieces, ξ^n ≠ 0 iff every product H_{n−1}·H_1 is nonzero
        (1..self.dims.len()).all(|n| self.table.get(&(n - 1, 1)).is_some_and(|m| m.rank() == 1))
    }
}

#[derive(Clone, Debug)]
pub struct TruncatedTate {
    pub dims: Vec<Betti>,
    pub ring: Option<RingTable>,
    pub cover_points: usize,
}

/// `H̄_i(G, X, M)`, `0 ≤ i ≤ max_degree`, from the augmented Čech complex of
/// the cover (default per [`default_cover`]). Checks X-surjectivity of the
/// cover and X-exactness of `P̃` in the window. With `ring` set and `M = k`,
/// also the multiplication on homology.
pub fn truncated_tate_resolution(
    g: &FinGroup,
    x: &SubgroupFamily,
    m: &GModule,
    max_degree: usize,
    cover: Option<&GSet>,
    ring: bool,
) -> Result<TruncatedTate> {
    let f = m.field;
    let s = match cover {
        Some(s) => s.clone(),
        None => default_cover(g, x, f.p()),
    };
    for h in x.members() {
        if !s.surjective_on_invariants(h, f.p()) {
            return Err(Error::InvalidCover(format!("the cover is not onto on invariants of {h:?}")));
        }
    }
    let top = max_degree + 1;
    let everything: Vec<usize> = (0..g.order()).collect();
    let oc = OrbitCech::build(&everything, &s, m, top).map_err(|e| match e {
        Error::Budget { what, completed } => {
            Error::Budget { what: format!("{what}; the orbit-category route avoids tensor powers"), completed }
        }
        e => e,
    })?;
    // X-exactness: P̃^H acyclic for every H ∈ X
    let k = GModule::trivial(g, f, 1);
    for h in x.conjugacy_representatives(g) {
        let c = OrbitCech::build(&h, &s, &k, top)?;
        let hd = c.complex.homology_dims();
        if (0..=max_degree as i64).any(|n| hd[&n] != Betti::Dim(0)) {
            return Err(Error::Validation(format!("the resolution is not exact on invariants of {h:?}")));
        }
    }
    let hd = oc.complex.homology_dims();
    let dims: Vec<Betti> = (0..=max_degree as i64).map(|n| hd[&n]).collect();
    let ring = if ring && m.dim == 1 && (0..g.order()).all(|a| m.mats[a] == SparseMatrix::identity(f, 1)) {
        let bases: Vec<HomologyBasis> = (0..=max_degree as i64).map(|n| oc.complex.homology_basis(n)).collect();
        let mut table = BTreeMap::new();
        for a in 0..=max_degree {
            for b in 0..=max_degree - a {
                let mut cols = Vec::new();
                for xa in &bases[a].reps {
                    for yb in &bases[b].reps {
                        cols.push(bases[a + b].coords(&oc.product(a, xa, b, yb)));
                    }
                }
                table.insert((a, b), SparseMatrix::from_cols(f, bases[a + b].dim(), cols)?);
            }
        }
        Some(RingTable { dims: bases.iter().map(|b| b.dim()).collect(), table })
    } else {
        None
    };
    Ok(TruncatedTate { dims, ring, cover_points: s.points() })
}

/// The augmented orbit category `O_X^>`: objects `G/H` for conjugacy
/// representatives `H ∈ X`, then `G/G`; a morphism `G/H → G/K` is a coset
/// `gK` with `g⁻¹Hg ⊆ K`, stored by its smallest element.
pub struct OrbitCategoryData {
    pub category: TableCat,
    pub subgroups: Vec<Vec<usize>>,
    /// `homs[a][b]`: coset representatives `g` of the morphisms `eH_a ↦ gH_b`
    pub homs: Vec<Vec<Vec<usize>>>,
}

impl OrbitCategoryData {
    pub fn new(g: &FinGroup, x: &SubgroupFamily) -> Result<Self> {
        let mut subgroups = x.conjugacy_representatives(g);
        subgroups.push((0..g.order()).collect());
        let n = subgroups.len();
        let cosets: Vec<Vec<Vec<usize>>> = subgroups.iter().map(|h| g.left_cosets(h)).collect();
        let homs: Vec<Vec<Vec<usize>>> = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        cosets[b]
                            .iter()
                            .map(|c| c[0])
                            .filter(|&r| {
                                let conj = g.conjugate(&subgroups[a], r);
                                conj.iter().all(|y| subgroups[b].binary_search(y).is_ok())
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        // coset of an element within G/H_b → index in homs[a][b]
        let mut coset_rep: Vec<Vec<usize>> = vec![vec![0; g.order()]; n];
        for b in 0..n {
            for c in &cosets[b] {
                for &y in c {
                    coset_rep[b][y] = c[0];
                }
            }
        }
        let names = subgroups.iter().map(|h| format!("G/H{}", h.len())).collect();
        let sizes = homs.iter().map(|r| r.iter().map(|v| v.len()).collect()).collect();
        let ident = (0..n).map(|a| homs[a][a].iter().position(|&r| r == coset_rep[a][g.identity()]).expect("identity")).collect();
        let category = TableCat::new(names, sizes, ident, |a, b, c, gi, fi| {
            let r = g.mul(homs[a][b][fi], homs[b][c][gi]);
            homs[a][c].iter().position(|&t| t == coset_rep[c][r]).expect("composite is a morphism")
        })?;
        Ok(OrbitCategoryData { category, subgroups, homs })
    }
}

/// `S ↦ (M ⊗ k[S])^G` on the orbit category, with `(M ⊗ k[G/H])^G ≅ M^H`.
struct LocFunctor<'a> {
    g: &'a FinGroup,
    m: &'a GModule,
    data: &'a OrbitCategoryData,
    bases: Vec<SparseMatrix>,
    cosets: Vec<Vec<Vec<usize>>>,
}

impl Functor for LocFunctor<'_> {
    fn field(&self) -> Field {
        self.m.field
    }

    fn dim(&self, a: usize) -> usize {
        self.bases[a].ncols()
    }

    fn act(&self, a: usize, b: usize, f: usize) -> SparseMatrix {
        let fl = self.m.field;
        let r = self.data.homs[a][b][f];
        let kb = &self.data.subgroups[b];
        let cols: Vec<SVec> = self.bases[a]
            .columns()
            .iter()
            .map(|v| {
                let mut acc = Accumulator::new(fl, self.m.dim);
                // x·v over the cosets xH_a that f sends to the base point of G/H_b
                for c in &self.cosets[a] {
                    let x = c[0];
                    if kb.binary_search(&self.g.mul(x, r)).is_ok() {
                        acc.add_scaled(1, &self.m.mats[x].apply(v));
                    }
                }
                acc.take()
            })
            .collect();
        let image = SparseMatrix::from_cols(fl, self.m.dim, cols).expect("in range");
        solve_columns(&self.bases[b], &image).expect("image is invariant")
    }
}

/// `H̄_i(G, X, M)` as homology of `O_X^>` with support at `G/G` of `Loc_X(M)`.
pub fn truncated_tate_orbit(g: &FinGroup, x: &SubgroupFamily, m: &GModule, max_degree: usize) -> Result<Vec<Betti>> {
    let data = OrbitCategoryData::new(g, x)?;
    let bases = data.subgroups.iter().map(|h| m.invariants(h)).collect();
    let cosets = data.subgroups.iter().map(|h| g.left_cosets(h)).collect();
    let loc = LocFunctor { g, m, data: &data, bases, cosets };
    check_functor(&data.category, &loc)?;
    let n = data.subgroups.len();
    let support: Vec<bool> = (0..n).map(|a| a == n - 1).collect();
    let [_, _, rel] = homology_with_support(&data.category, &loc, &support, max_degree)?;
    Ok(rel)
}

/// A simplicial module with a Z/p-action commuting with all structure maps,
/// optionally the Z/p-action of a Λ_p-module (then Connes' operator is available).
#[derive(Clone, Debug)]
pub struct RelativeTate {
    simp: SimplicialModule,
    gens: Vec<SparseMatrix>,
    p: usize,
    cyclic: Option<CyclicModule>,
}

/// The relative Tate construction on a Λ_p-module: degreewise 2-periodic
/// Tate complexes of its Z/p-action.
pub fn relative_tate_cyclic(e: &CyclicModule) -> Result<RelativeTate> {
    if e.period() < 2 {
        return Err(Error::InvalidAction("the module carries no Z/p-action".into()));
    }
    let gens = (0..=e.bound()).map(|n| e.generator(n)).collect();
    RelativeTate::from_action(e.simplicial().clone(), gens, e.period()).map(|mut r| {
        r.cyclic = Some(e.clone());
        r
    })
}

impl RelativeTate {
    /// Checks `σ^p = 1` and that `σ` commutes with faces and degeneracies.
    pub fn from_action(simp: SimplicialModule, gens: Vec<SparseMatrix>, p: usize) -> Result<Self> {
        let f = simp.field();
        if gens.len() != simp.bound() + 1 {
            return Err(Error::Shape("one generator per degree is required".into()));
        }
        for n in 0..=simp.bound() {
            let s = &gens[n];
            if s.nrows() != simp.dim(n) || s.ncols() != simp.dim(n) || s.pow(p as u64) != SparseMatrix::identity(f, simp.dim(n)) {
                return Err(Error::InvalidAction(format!("generator in degree {n} is not of order dividing {p}")));
            }
            if n >= 1 && (0..=n).any(|i| simp.face(n, i).dot(s) != gens[n - 1].dot(simp.face(n, i))) {
                return Err(Error::InvalidAction(format!("action does not commute with faces in degree {n}")));
            }
            if n < simp.bound() && (0..=n).any(|i| simp.degen(n, i).dot(s) != gens[n + 1].dot(simp.degen(n, i))) {
                return Err(Error::InvalidAction(format!("action does not commute with degeneracies in degree {n}")));
            }
        }
        Ok(RelativeTate { simp, gens, p, cyclic: None })
    }

    pub fn field(&self) -> Field {
        self.simp.field()
    }

    pub fn bound(&self) -> usize {
        self.simp.bound()
    }

    fn norm(&self, n: usize) -> SparseMatrix {
        let f = self.field();
        let mut acc = SparseMatrix::identity(f, self.simp.dim(n));
        let mut pw = acc.clone();
        for _ in 1..self.p {
            pw = self.gens[n].dot(&pw);
            acc = acc.add(&pw).expect("square");
        }
        acc
    }

    fn one_minus(&self, n: usize) -> SparseMatrix {
        SparseMatrix::identity(self.field(), self.simp.dim(n)).sub(&self.gens[n]).expect("square")
    }

    /// Differential `T_j → T_{j−1}` of the Tate complex in simplicial degree
    /// `n`: `1 − σ` for `j` odd, the norm for `j` even. Homology at `j = 0`
    /// is `ker N / (1 − σ)`.
    fn tate_diff(&self, n: usize, j: i64) -> SparseMatrix {
        if j.rem_euclid(2) == 1 {
            self.one_minus(n)
        } else {
            self.norm(n)
        }
    }

    /// The Tate complex of the `n`-th term on `[lo, hi]`, both edges open.
    pub fn term(&self, n: usize, lo: i64, hi: i64) -> Result<ChainComplex> {
        let d = self.simp.dim(n);
        let diffs = (lo + 1..=hi).map(|j| self.tate_diff(n, j)).collect();
        Ok(ChainComplex::new(self.field(), lo, vec![d; (hi - lo + 1) as usize], diffs)?.with_open_edges(true, true))
    }

    /// `N: M_{Z/p} → M^{Z/p}` in degree `n`, in bases of coinvariants
    /// (complement of `im(1 − σ)`) and invariants.
    pub fn trace_map(&self, n: usize) -> SparseMatrix {
        let f = self.field();
        let mut ech = Echelon::new(f, self.simp.dim(n));
        for c in self.one_minus(n).columns() {
            ech.insert(c.clone());
        }
        let q = Quotient::new(ech);
        let inv = self.one_minus(n).kernel().matrix(f);
        let norm = self.norm(n);
        let image = SparseMatrix::from_cols(
            f,
            self.simp.dim(n),
            q.section().iter().map(|&i| norm.col(i).clone()).collect(),
        )
        .expect("in range");
        solve_columns(&inv, &image).expect("norms are invariant")
    }

    /// The norm triangle in degree `n`: the negative part `T_{≤ −1}` is a
    /// subcomplex (the invariants side), and the cone of its inclusion must
    /// have the homology of the orbits complex `T_{≥ 0}`, that is
    /// `H_•(Z/p, M_n)`, on `[lo + 2, hi − 2]`.
    pub fn check_norm_triangle(&self, n: usize, lo: i64, hi: i64) -> Result<()> {
        let f = self.field();
        let t = self.term(n, lo, hi)?;
        let d = self.simp.dim(n);
        let neg_diffs = (lo + 1..=-1).map(|j| self.tate_diff(n, j)).collect();
        let neg = ChainComplex::new(f, lo, vec![d; (-lo) as usize], neg_diffs)?.with_open_edges(true, false);
        let mut inc = ChainMap::new(0);
        for j in lo..=-1 {
            inc.maps.insert(j, SparseMatrix::identity(f, d));
        }
        inc.check(&neg, &t)?;
        let cone = ChainComplex::cone(&inc, &neg, &t)?;
        let hc = cone.homology_dims();
        let one_minus = self.one_minus(n);
        let norm = self.norm(n);
        let (r1, rn) = (one_minus.rank(), norm.rank());
        for j in lo + 2..=hi - 2 {
            let want = match j {
                j if j < 0 => 0,
                0 => d - r1,
                j if j % 2 == 1 => d - r1 - rn,
                _ => d - rn - r1,
            };
            if hc.get(&j) != Some(&Betti::Dim(want)) {
                return Err(Error::Validation(format!(
                    "norm triangle fails in Λ-degree {n}, homological degree {j}: {:?} vs {want}",
                    hc.get(&j)
                )));
            }
        }
        Ok(())
    }

    /// Cellwise inclusion `τ_{≥hi}(T[shift]) → τ_{≥lo}(T[shift])`, `lo < hi`,
    /// in the cell bases of [`RelativeTate::mixed`], for `n ≤ n_max`, `j ≤ j_hi`.
    pub fn truncation_inclusion(
        &self,
        shift: i64,
        lo: i64,
        hi: i64,
        n_max: usize,
        j_hi: i64,
    ) -> Result<BTreeMap<Cell, SparseMatrix>> {
        if lo >= hi || n_max > self.bound() {
            return Err(Error::Domain("inclusion needs lo < hi inside the known range".into()));
        }
        let f = self.field();
        let sg = f.sign(shift.rem_euclid(2) == 1);
        let q = self.simp.degenerate_quotients();
        let mut out = BTreeMap::new();
        for (n, qn) in q.iter().enumerate().take(n_max + 1) {
            let x = if (hi - shift).rem_euclid(2) == 1 { self.one_minus(n) } else { self.norm(n) };
            let d = qn.induced(&x, qn).scale(sg);
            out.insert((n as i64, hi), d.kernel().matrix(f));
            for j in hi + 1..=j_hi {
                out.insert((n as i64, j), SparseMatrix::identity(f, qn.dim()));
            }
        }
        Ok(out)
    }

    /// Mixed complex of `τ_{≥trunc}(T[shift])` applied degreewise, on the
    /// degenerate quotient, for `n ≤ n_max` and internal degrees up to
    /// `j_hi`. Its `b` is `Σ(−1)^i d_i + (−1)^n d_T`; its `B` is
    /// `(1 − τ)sN − (−1)^n h` with `h` the periodicity homotopy
    /// `T_j → T_{j+1}` (identity from even `j`). Without a cyclic structure
    /// only `b` is built.
    pub fn mixed(&self, shift: i64, trunc: i64, n_max: usize, j_hi: i64) -> Result<MixedComplex> {
        if n_max + usize::from(self.cyclic.is_some()) > self.bound() {
            return Err(Error::budget(format!("the Λ-object is only known through degree {}", self.bound())));
        }
        let top = n_max + usize::from(self.cyclic.is_some());
        // a basis, b, d_T, B and h per cell
        let cells_per_degree = (j_hi - trunc + 2).max(1) as u64;
        let entries: u64 = (0..=top).map(|n| self.simp.dim(n) as u64 * (n as u64 + 5) * cells_per_degree).sum();
        crate::budget::check(entries, "relative Tate mixed complex")?;
        let f = self.field();
        let sg = f.sign(shift.rem_euclid(2) == 1);
        let q = self.simp.degenerate_quotients();
        // operators in quotient coordinates
        let ops: Vec<(SparseMatrix, SparseMatrix)> = (0..=top)
            .into_par_iter()
            .map(|n| (q[n].induced(&self.one_minus(n), &q[n]), q[n].induced(&self.norm(n), &q[n])))
            .collect();
        let d_p = |n: usize, j: i64| -> SparseMatrix {
            let x = if (j - shift).rem_euclid(2) == 1 { &ops[n].0 } else { &ops[n].1 };
            x.scale(sg)
        };
        // cell bases (columns in quotient coordinates)
        let cells: Vec<Vec<(i64, SparseMatrix)>> = (0..=n_max)
            .into_par_iter()
            .map(|n| {
                (trunc..=j_hi)
                    .map(|j| {
                        let id = SparseMatrix::identity(f, q[n].dim());
                        let b = if j == trunc { d_p(n, j).kernel().matrix(f) } else { id };
                        (j, b)
                    })
                    .collect()
            })
            .collect();
        let basis = |n: usize, j: i64| &cells[n][(j - trunc) as usize].1;
        let mut mc = MixedComplex::new(f, n_max as i64, trunc, Some(j_hi));
        for n in 0..=n_max {
            for j in trunc..=j_hi {
                mc.add_cell((n as i64, j), basis(n, j).ncols());
            }
        }
        let restrict = |x: &SparseMatrix, t: (usize, i64), s: (usize, i64)| -> Result<SparseMatrix> {
            let y = x.dot(basis(s.0, s.1));
            if t.1 == trunc {
                solve_columns(basis(t.0, t.1), &y)
            } else {
                Ok(y)
            }
        };
        type Piece = ((i64, i64), (i64, i64), SparseMatrix, bool);
        let pieces: Vec<Piece> = (0..=n_max)
            .into_par_iter()
            .map(|n| -> Result<Vec<Piece>> {
                let mut out = Vec::new();
                let bq = (n >= 1).then(|| q[n - 1].induced(&self.simp.alternating_face_sum(n, false), &q[n]));
                let cq = match (&self.cyclic, n < n_max) {
                    (Some(c), true) => Some(q[n + 1].induced(&c.connes_b_unnormalized(n), &q[n])),
                    _ => None,
                };
                let sn = f.sign(n % 2 == 1);
                let id = SparseMatrix::identity(f, q[n].dim());
                let ni = n as i64;
                for j in trunc..=j_hi {
                    if let Some(bq) = &bq {
                        out.push(((ni, j), (ni - 1, j), restrict(bq, (n - 1, j), (n, j))?, false));
                    }
                    if j > trunc {
                        out.push(((ni, j), (ni, j - 1), restrict(&d_p(n, j).scale(sn), (n, j - 1), (n, j))?, false));
                    }
                    if self.cyclic.is_some() {
                        if let Some(cq) = &cq {
                            out.push(((ni, j), (ni + 1, j), restrict(cq, (n + 1, j), (n, j))?, true));
                        }
                        if j < j_hi && (j - shift).rem_euclid(2) == 0 {
                            // h_P = (−1)^shift on even T-degrees, with the sign −(−1)^n
                            let h = id.scale(f.neg(f.mul(sg, sn)));
                            out.push(((ni, j), (ni, j + 1), restrict(&h, (n, j + 1), (n, j))?, true));
                        }
                    }
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        for (s, t, m, is_b) in pieces {
            if is_b {
                mc.add_connes(s, t, m)?;
            } else {
                mc.add_b(s, t, m)?;
            }
        }
        Ok(mc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> Field {
        Field::new(p).unwrap()
    }

    fn dims(v: &[Betti]) -> Vec<usize> {
        v.iter().map(|b| b.dim().expect("determinate")).collect()
    }

    #[test]
    fn group_axioms_and_sizes() {
        assert_eq!(FinGroup::symmetric(4).order(), 24);
        assert_eq!(FinGroup::cyclic(5).order(), 5);
        assert_eq!(FinGroup::symmetric(3).subgroups().len(), 6);
        let bad = vec![vec![0, 1], vec![0, 1]];
        assert!(FinGroup::from_table(bad).is_err());
    }

    #[test]
    fn tate_of_cyclic_groups() {
        let z2 = FinGroup::cyclic(2);
        let t = tate_cyclic(&z2, &GModule::trivial(&z2, f(2), 1), 6).unwrap();
        assert!(dims(&t).iter().all(|&d| d == 1));
        let z3 = FinGroup::cyclic(3);
        let t = tate_cyclic(&z3, &GModule::regular(&z3, f(3)), 4).unwrap();
        assert!(dims(&t).iter().all(|&d| d == 0));
        assert!(tate_cyclic(&FinGroup::symmetric(3), &GModule::trivial(&FinGroup::symmetric(3), f(3), 1), 2).is_err());
    }

    #[test]
    fn bar_complex_homology() {
        let z2 = FinGroup::cyclic(2);
        let h = group_homology(&z2, &GModule::trivial(&z2, f(2), 1), 6).unwrap();
        assert_eq!(dims(&h), vec![1; 7]);
        let z3 = FinGroup::cyclic(3);
        let h = group_homology(&z3, &GModule::trivial(&z3, f(2), 1), 4).unwrap();
        assert_eq!(dims(&h), vec![1, 0, 0, 0, 0]);
        // Σ_3 over F_3: H_* = 1,0,0,1,1,0,0,1 (period 4 from the Sylow 3-subgroup, sign-twisted)
        let s3 = FinGroup::symmetric(3);
        let h = group_homology(&s3, &GModule::trivial(&s3, f(3), 1), 4).unwrap();
        assert_eq!(dims(&h), vec![1, 0, 0, 1, 1]);
    }

    #[test]
    fn young_closure_for_s4() {
        let s4 = FinGroup::symmetric(4);
        let seeds = young_seeds(&s4, 4);
        let fam = family_closure(&s4, &seeds).unwrap();
        let reps = fam.conjugacy_representatives(&s4);
        let orders: Vec<usize> = reps.iter().map(|h| h.len()).collect();
        assert_eq!(orders, vec![1, 2, 4, 6]);
        assert!(family_closure(&s4, &[(0..24).collect()]).is_err());
    }

    fn young_seeds(g: &FinGroup, n: usize) -> Vec<Vec<usize>> {
        // stabilizers of set partitions with at least two blocks
        let mut out = Vec::new();
        let labels = n.pow(n as u32);
        for code in 0..labels {
            let lab: Vec<usize> = (0..n).map(|i| code / n.pow(i as u32) % n).collect();
            let blocks: BTreeSet<usize> = lab.iter().copied().collect();
            if blocks.len() < 2 {
                continue;
            }
            let h: Vec<usize> = (0..g.order())
                .filter(|&x| {
                    let p = g.permutation(x).unwrap();
                    (0..n).all(|i| lab[p[i]] == lab[i])
                })
                .collect();
            out.push(h);
        }
        out
    }

    #[test]
    fn truncated_tate_of_z2() {
        let z2 = FinGroup::cyclic(2);
        let fam = family_closure(&z2, &[vec![z2.identity()]]).unwrap();
        let k = GModule::trivial(&z2, f(2), 1);
        let r = truncated_tate_resolution(&z2, &fam, &k, 8, None, true).unwrap();
        assert_eq!(dims(&r.dims), vec![1; 9]);
        assert!(r.ring.unwrap().is_polynomial_on_degree_one());
        let o = truncated_tate_orbit(&z2, &fam, &k, 8).unwrap();
        assert_eq!(o, r.dims);
        let free = GModule::regular(&z2, f(2));
        let r = truncated_tate_resolution(&z2, &fam, &free, 5, None, false).unwrap();
        assert!(dims(&r.dims).iter().all(|&d| d == 0));
    }

    #[test]
    fn pulled_back_family() {
        let z4 = FinGroup::cyclic(4);
        let sub = z4.generated(&[z4.find_permutation(&[2, 3, 0, 1]).unwrap()]);
        let fam = family_closure(&z4, &[sub]).unwrap();
        let k = GModule::trivial(&z4, f(2), 1);
        let o = truncated_tate_orbit(&z4, &fam, &k, 5).unwrap();
        assert_eq!(dims(&o), vec![1; 6]);
    }

    #[test]
    fn invalid_cover_is_rejected() {
        let z2 = FinGroup::cyclic(2);
        let fam = family_closure(&z2, &[vec![z2.identity()]]).unwrap();
        let k = GModule::trivial(&z2, f(2), 1);
        let regular = GSet::cosets(&z2, &[z2.identity()]);
        // two copies of a free orbit are still fine, a point fixed by G is not X-surjective only if p | orbit sizes
        assert!(truncated_tate_resolution(&z2, &fam, &k, 2, Some(&regular), false).is_ok());
        let z4 = FinGroup::cyclic(4);
        let sub = z4.generated(&[z4.find_permutation(&[2, 3, 0, 1]).unwrap()]);
        let fam = family_closure(&z4, &[sub]).unwrap();
        let free = GSet::cosets(&z4, &[z4.identity()]);
        let k4 = GModule::trivial(&z4, f(2), 1);
        assert!(matches!(
            truncated_tate_resolution(&z4, &fam, &k4, 2, Some(&free), false),
            Err(Error::InvalidCover(_))
        ));
    }

    #[test]
    fn relative_tate_of_constant_subdivision() {
        let fl = f(2);
        let sd = CyclicModule::constant(fl, 11).edgewise_sd(2, 5).unwrap();
        let rt = relative_tate_cyclic(&sd).unwrap();
        for n in 0..=5 {
            let h = rt.term(n, -6, 6).unwrap().homology_dims();
            assert!((-5..=5).all(|j| h[&j] == Betti::Dim(1)));
            rt.check_norm_triangle(n, -6, 6).unwrap();
        }
    }

    #[test]
    fn relative_tate_of_free_action() {
        let fl = f(3);
        let z3 = FinGroup::cyclic(3);
        let reg = GModule::regular(&z3, fl);
        let gen = generator_of_cyclic(&z3).unwrap();
        let simp = SimplicialModule::constant(fl, 3, 3);
        let rt = RelativeTate::from_action(simp, vec![reg.act(gen).clone(); 4], 3).unwrap();
        let h = rt.term(2, -4, 4).unwrap().homology_dims();
        assert!((-3..=3).all(|j| h[&j] == Betti::Dim(0)));
        assert_eq!(rt.trace_map(0).rank(), 1);
        assert_eq!(rt.trace_map(0).ncols(), 1);
        rt.check_norm_triangle(1, -6, 6).unwrap();
    }

    #[test]
    fn non_commuting_action_is_rejected() {
        let fl = f(2);
        let z2 = FinGroup::cyclic(2);
        let reg = GModule::regular(&z2, fl);
        let simp = SimplicialModule::constant(fl, 2, 1);
        let gens = vec![reg.act(1).clone(), SparseMatrix::identity(fl, 2)];
        assert!(matches!(RelativeTate::from_action(simp, gens, 2), Err(Error::InvalidAction(_))));
    }

    #[test]
    fn mixed_model_of_constant_subdivision() {
        for p in [2u64, 3] {
            let fl = f(p);
            let sd = CyclicModule::constant(fl, (p as usize) * 8 - 1).edgewise_sd(p as usize, 7).unwrap();
            let rt = relative_tate_cyclic(&sd).unwrap();
            let mc = rt.mixed(1, 0, 6, 9).unwrap();
            mc.check_identities().unwrap();
            let hh = mc.hochschild(0, 5).unwrap();
            assert_eq!(dims(&hh), vec![1; 6]);
            let v0 = rt.mixed(0, 0, 6, 9).unwrap();
            v0.check_identities().unwrap();
            assert_eq!(dims(&v0.cyclic(0, 5).unwrap()), vec![1, 0, 1, 0, 1, 0]);
        }
    }
}
