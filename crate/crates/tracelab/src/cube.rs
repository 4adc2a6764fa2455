//! k-linear additivization. A functor is encoded by its cross-effects
//! `cr_m` with their covariant maps along surjections; the cube complex
//! has `⊕_U cr_{|U|}` in degree `n`, over subsets `U ⊆ {0,1}^n` whose
//! coordinate projections are all onto, and differential
//! `Σ_i (−1)^i cr(U ↠ U with coordinate i deleted)`.
//!
//! The cube complex computes `Tor` over the category of finite sets and
//! surjections between the cross-effects and the functor that is `k` on a
//! point and zero elsewhere. That second description is used where the
//! cube terms get too big (`Q_5` of `F_2` has about `4·10^9` cells).

use std::collections::HashMap;

use rayon::prelude::*;

use crate::budget;
use crate::chains::{Betti, ChainComplex};
use crate::error::{Error, Result};
use crate::fincat::{Category, Functor, Indicator, Lin, Resolution};
use crate::hoch::{AlgebraSpec, BimoduleSpec};
use crate::linalg::{svec_from, Field, SVec, SparseMatrix};

/// Largest ring the linearization accepts, by number of elements.
const MAX_RING_ORDER: usize = 256;

#[derive(Clone, Debug)]
enum Kind {
    /// Reduced linearization `V ↦ k[V]/k[0]` evaluated at a finite ring.
    Linearization { ring: AlgebraSpec, order: usize, add: Vec<Vec<usize>>, mul: Vec<Vec<usize>> },
    /// An additive functor with value `k^dim`.
    Additive { dim: usize },
    /// `V ↦ V^{⊗n}` at `V = k`.
    TensorPower { n: usize },
    /// `V ↦ D^n V` at `V = k`.
    DividedPower { n: usize },
}

/// Cross-effects `cr_m`, `m ≥ 1`, with their maps along surjections and,
/// for linearizations of rings, the products `cr_a ⊗ cr_b → cr_{a+b}`.
#[derive(Clone, Debug)]
pub struct CrossEffectSystem {
    field: Field,
    kind: Kind,
}

/// Surjections `[m] ↠ [m2]` as image words, in lexicographic order.
pub fn surjections(m: usize, m2: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if m2 == 0 || m2 > m {
        return out;
    }
    let mut w = vec![0usize; m];
    loop {
        let mut seen = vec![false; m2];
        for &x in &w {
            seen[x] = true;
        }
        if seen.iter().all(|&s| s) {
            out.push(w.clone());
        }
        let Some(i) = (0..m).rev().find(|&i| w[i] + 1 < m2) else {
            return out;
        };
        w[i] += 1;
        for x in &mut w[i + 1..] {
            *x = 0;
        }
    }
}

/// Compositions of `n` into `m` positive parts, in lexicographic order.
fn compositions(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if m == 0 {
            if n == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for x in 1..=n.saturating_sub(m - 1) {
            cur.push(x);
            rec(n - x, m - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if m >= 1 && n >= m {
        rec(n, m, &mut Vec::new(), &mut out);
    }
    out
}

fn multinomial(f: Field, parts: &[usize]) -> u32 {
    let mut total = 0usize;
    let mut c = 1u32;
    for &k in parts {
        c = f.mul(c, binomial_mod(f, total + k, k));
        total += k;
    }
    c
}

fn binomial_mod(f: Field, n: usize, k: usize) -> u32 {
    // Lucas' theorem
    let p = f.p() as usize;
    let (mut n, mut k) = (n, k);
    let mut out = 1u32;
    while n > 0 || k > 0 {
        let (a, b) = (n % p, k % p);
        if b > a {
            return 0;
        }
        let small = (0..b).fold(1u128, |acc, i| acc * (a - i) as u128 / (i + 1) as u128);
        out = f.mul(out, (small % p as u128) as u32);
        n /= p;
        k /= p;
    }
    out
}

impl CrossEffectSystem {
    /// Cross-effects of the reduced linearization of a finite ring `A`:
    /// `cr_m` has basis `⊗_s ([a_s] − [0])` over `a ∈ (A∖0)^m`.
    pub fn linearization(ring: &AlgebraSpec) -> Result<Self> {
        let order = ring
            .order(MAX_RING_ORDER)
            .ok_or_else(|| Error::budget(format!("rings with more than {MAX_RING_ORDER} elements")))?;
        let f = ring.field();
        let els: Vec<Vec<u32>> = (0..order).map(|c| ring.decode(c)).collect();
        let add = els
            .iter()
            .map(|x| els.iter().map(|y| ring.encode(&x.iter().zip(y).map(|(&a, &b)| f.add(a, b)).collect::<Vec<_>>())).collect())
            .collect();
        let mul = els.iter().map(|x| els.iter().map(|y| ring.encode(&ring.multiply(x, y))).collect()).collect();
        Ok(CrossEffectSystem { field: f, kind: Kind::Linearization { ring: ring.clone(), order, add, mul } })
    }

    pub fn additive(field: Field, dim: usize) -> Self {
        CrossEffectSystem { field, kind: Kind::Additive { dim } }
    }

    /// `T^n` at `k`: `cr_m` has basis the surjections `[n] ↠ [m]`.
    pub fn tensor_power(field: Field, n: usize) -> Self {
        CrossEffectSystem { field, kind: Kind::TensorPower { n } }
    }

    /// `D^n` at `k`: `cr_m` has basis `γ_{n_1} ⊗ ⋯ ⊗ γ_{n_m}`, `n_s ≥ 1`.
    pub fn divided_power(field: Field, n: usize) -> Self {
        CrossEffectSystem { field, kind: Kind::DividedPower { n } }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ring(&self) -> Option<&AlgebraSpec> {
        match &self.kind {
            Kind::Linearization { ring, .. } => Some(ring),
            _ => None,
        }
    }

    pub fn has_products(&self) -> bool {
        matches!(self.kind, Kind::Linearization { .. })
    }

    /// Dimension of `cr_m`, saturating.
    pub fn dim(&self, m: usize) -> usize {
        if m == 0 {
            return 0;
        }
        match &self.kind {
            Kind::Linearization { order, .. } => (order - 1).checked_pow(m as u32).unwrap_or(usize::MAX),
            Kind::Additive { dim } => usize::from(m == 1) * dim,
            Kind::TensorPower { n } => surjections(*n, m).len(),
            Kind::DividedPower { n } => compositions(*n, m).len(),
        }
    }

    /// Largest `m` with `cr_m ≠ 0`, if bounded.
    pub fn top(&self) -> Option<usize> {
        match &self.kind {
            Kind::Linearization { order, .. } => (*order == 1).then_some(0),
            Kind::Additive { dim } => Some(usize::from(*dim > 0)),
            Kind::TensorPower { n } | Kind::DividedPower { n } => Some(*n),
        }
    }

    /// Image of basis vector `x` of `cr_m` along `q: [m] ↠ [m2]`.
    pub fn image(&self, x: usize, q: &[usize], m2: usize) -> SVec {
        let f = self.field;
        let m = q.len();
        match &self.kind {
            Kind::Linearization { order, add, .. } => {
                let base = order - 1;
                // digits of x are the codes of a_s minus one, most significant first
                let mut a = vec![0usize; m];
                let mut r = x;
                for s in (0..m).rev() {
                    a[s] = r % base + 1;
                    r /= base;
                }
                // per target point: Σ_{T ⊆ fiber} (−1)^{|fiber∖T|} [Σ_T a], reduced
                let mut acc: Vec<(usize, u32)> = vec![(0, 1)];
                for j in 0..m2 {
                    let fiber: Vec<usize> = (0..m).filter(|&s| q[s] == j).map(|s| a[s]).collect();
                    let mut coef = vec![0u32; *order];
                    for t in 0u32..(1 << fiber.len()) {
                        let mut sum = 0usize;
                        for (i, &c) in fiber.iter().enumerate() {
                            if t >> i & 1 == 1 {
                                sum = add[sum][c];
                            }
                        }
                        let neg = (fiber.len() - t.count_ones() as usize) % 2 == 1;
                        coef[sum] = if neg { f.sub(coef[sum], 1) } else { f.add(coef[sum], 1) };
                    }
                    let mut next = Vec::new();
                    for &(idx, c) in &acc {
                        for (code, &v) in coef.iter().enumerate().skip(1) {
                            if v != 0 {
                                next.push((idx * base + code - 1, f.mul(c, v)));
                            }
                        }
                    }
                    acc = next;
                }
                svec_from(f, acc.into_iter().map(|(i, c)| (i as u32, c as i64)).collect())
            }
            Kind::Additive { .. } => {
                if m == 1 && m2 == 1 {
                    vec![(x as u32, 1)]
                } else {
                    vec![]
                }
            }
            Kind::TensorPower { n } => {
                let w = &surjections(*n, m)[x];
                let img: Vec<usize> = w.iter().map(|&i| q[i]).collect();
                let tgt = surjections(*n, m2);
                let k = tgt.binary_search(&img).expect("composite of surjections");
                vec![(k as u32, 1)]
            }
            Kind::DividedPower { n } => {
                let c = &compositions(*n, m)[x];
                let mut sums = vec![0usize; m2];
                let mut coef = 1u32;
                for j in 0..m2 {
                    let parts: Vec<usize> = (0..m).filter(|&s| q[s] == j).map(|s| c[s]).collect();
                    coef = f.mul(coef, multinomial(f, &parts));
                    sums[j] = parts.iter().sum();
                }
                if coef == 0 {
                    return vec![];
                }
                let tgt = compositions(*n, m2);
                let k = tgt.binary_search(&sums).expect("sums of positive parts");
                vec![(k as u32, coef)]
            }
        }
    }

    /// Matrix of `cr(q): cr_m → cr_{m2}`.
    pub fn along(&self, q: &[usize], m2: usize) -> SparseMatrix {
        let cols = (0..self.dim(q.len())).map(|x| self.image(x, q, m2)).collect();
        SparseMatrix::from_cols(self.field, self.dim(m2), cols).expect("images stay in range")
    }

    /// Checks `cr(q2 ∘ q1) = cr(q2) cr(q1)` for all composable surjections
    /// between sets of size at most `bound`, and that identities act as 1.
    pub fn check_functoriality(&self, bound: usize) -> Result<()> {
        for m in 1..=bound {
            let id: Vec<usize> = (0..m).collect();
            if self.along(&id, m) != SparseMatrix::identity(self.field, self.dim(m)) {
                return Err(Error::InvalidFunctor(format!("the identity of [{m}] is not sent to 1")));
            }
            for m1 in 1..=m {
                let firsts = surjections(m, m1);
                for m2 in 1..=m1 {
                    let seconds = surjections(m1, m2);
                    for q1 in &firsts {
                        let a1 = self.along(q1, m1);
                        for q2 in &seconds {
                            let comp: Vec<usize> = q1.iter().map(|&i| q2[i]).collect();
                            if self.along(&comp, m2) != self.along(q2, m2).dot(&a1) {
                                return Err(Error::InvalidFunctor(format!("not functorial on {q1:?} then {q2:?}")));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Product of `x ∈ cr_a`, `y ∈ cr_b` into `cr_{|W|}` along the pairs
    /// `W ⊆ [a] × [b]` (in the order given): the label at `(s, t)` is
    /// `x_s y_t`, and the product vanishes if one of them is zero.
    fn product(&self, a: usize, x: usize, b: usize, y: usize, pairs: &[(usize, usize)]) -> Option<usize> {
        let Kind::Linearization { order, mul, .. } = &self.kind else {
            return None;
        };
        let base = order - 1;
        let digits = |mut v: usize, len: usize| {
            let mut d = vec![0usize; len];
            for s in (0..len).rev() {
                d[s] = v % base + 1;
                v /= base;
            }
            d
        };
        let (xs, ys) = (digits(x, a), digits(y, b));
        let mut idx = 0usize;
        for &(s, t) in pairs {
            let c = mul[xs[s]][ys[t]];
            if c == 0 {
                return None;
            }
            idx = idx * base + c - 1;
        }
        Some(idx)
    }

    /// Basis index in `cr_1` of `[a]` for a nonzero ring element code.
    fn point_index(&self, code: usize) -> usize {
        code - 1
    }
}

/// Number of admissible `U ⊆ {0,1}^n` of each size `k`, by inclusion and
/// exclusion over the coordinates whose projection misses a value.
fn admissible_counts(n: usize) -> Vec<f64> {
    let pts = 1usize << n;
    let binom = |a: usize, b: usize| -> f64 {
        if b > a {
            0.0
        } else {
            (0..b).fold(1.0, |acc, i| acc * (a - i) as f64 / (i + 1) as f64)
        }
    };
    (0..=pts)
        .map(|k| {
            if k == 0 {
                return 0.0;
            }
            (0..=n)
                .map(|c| {
                    let s = if c % 2 == 0 { 1.0 } else { -1.0 };
                    s * binom(n, c) * (1u64 << c) as f64 * binom(1 << (n - c), k)
                })
                .sum::<f64>()
                .round()
        })
        .collect()
}

/// Estimated number of cells of `Q_n`.
pub fn cube_term_size(f: &CrossEffectSystem, n: usize) -> f64 {
    admissible_counts(n)
        .iter()
        .enumerate()
        .map(|(k, &c)| if c == 0.0 { 0.0 } else { c * f.dim(k) as f64 })
        .sum()
}

fn point_masks(n: usize) -> Vec<[u64; 2]> {
    (0..n)
        .map(|i| {
            let mut m = [0u64; 2];
            for x in 0..1usize << n {
                m[x >> i & 1] |= 1 << x;
            }
            m
        })
        .collect()
}

fn points(mask: u64) -> Vec<usize> {
    (0..64).filter(|&x| mask >> x & 1 == 1).collect()
}

/// Admissible subsets of `{0,1}^n` with at most `max_size` points, ascending.
fn admissible(n: usize, max_size: usize) -> Vec<u64> {
    let total = 1usize << n;
    let coords = point_masks(n);
    let ok = |u: u64| coords.iter().all(|c| u & c[0] != 0 && u & c[1] != 0);
    let mut out = Vec::new();
    for k in 1..=max_size.min(total) {
        // all k-subsets of `total` points, Gosper's hack
        let mut u: u64 = (1u64 << k) - 1;
        let limit: u128 = 1u128 << total;
        while (u as u128) < limit {
            if ok(u) {
                out.push(u);
            }
            let c = u & u.wrapping_neg();
            let r = u + c;
            if r == 0 {
                break;
            }
            u = (((r ^ u) >> 2) / c) | r;
        }
    }
    out.sort_unstable();
    out
}

/// Deletes coordinate `i` from the point `x`.
fn delete_coord(x: usize, i: usize) -> usize {
    ((x >> (i + 1)) << i) | (x & ((1 << i) - 1))
}

/// The cube complex `Q_•(F)` through a top degree, with its DG-algebra
/// product when the cross-effects carry one.
#[derive(Clone, Debug)]
pub struct CubeComplex {
    pub system: CrossEffectSystem,
    /// Degrees `0..=top`; open above.
    pub complex: ChainComplex,
    /// Per degree, the admissible subsets in order with the offset of their block.
    blocks: Vec<Vec<(u64, usize)>>,
    lookup: Vec<HashMap<u64, usize>>,
}

/// Builds `Q_n` for `n ≤ top`. Homology is exact below `top`.
pub fn cube_complex(f: &CrossEffectSystem, top: usize) -> Result<CubeComplex> {
    if top > 5 {
        return Err(Error::budget(format!("cube terms beyond degree 5 (asked for {top})")));
    }
    let mut blocks = Vec::new();
    let mut lookup = Vec::new();
    for n in 0..=top {
        let size = cube_term_size(f, n);
        budget::check(size as u64 * (n as u64 + 1), &format!("cube term Q_{n}")).map_err(|e| match e {
            Error::Budget { what, .. } => Error::Budget { what, completed: n.checked_sub(2).map(|d| d as i64) },
            other => other,
        })?;
        let max_size = f.top().unwrap_or(usize::MAX);
        let us = admissible(n, max_size);
        let mut off = 0;
        let mut bl = Vec::with_capacity(us.len());
        let mut lk = HashMap::with_capacity(us.len());
        for u in us {
            let d = f.dim(u.count_ones() as usize);
            if d == 0 {
                continue;
            }
            lk.insert(u, bl.len());
            bl.push((u, off));
            off += d;
        }
        blocks.push(bl);
        lookup.push(lk);
    }
    let dims: Vec<usize> = blocks
        .iter()
        .map(|bl| bl.last().map_or(0, |&(u, o)| o + f.dim(u.count_ones() as usize)))
        .collect();
    let fl = f.field();
    let mut diffs = Vec::new();
    for n in 1..=top {
        let cols: Vec<Vec<SVec>> = blocks[n]
            .par_iter()
            .map(|&(u, _)| {
                let pts = points(u);
                let m = pts.len();
                let mut cols: Vec<Vec<(u32, i64)>> = vec![Vec::new(); f.dim(m)];
                for i in 0..n {
                    let img: Vec<usize> = pts.iter().map(|&x| delete_coord(x, i)).collect();
                    let vmask = img.iter().fold(0u64, |acc, &y| acc | 1 << y);
                    let Some(&b) = lookup[n - 1].get(&vmask) else { continue };
                    let vpts = points(vmask);
                    let q: Vec<usize> = img.iter().map(|y| vpts.binary_search(y).expect("in image")).collect();
                    let off = blocks[n - 1][b].1;
                    for (x, col) in cols.iter_mut().enumerate() {
                        for (r, v) in f.image(x, &q, vpts.len()) {
                            let v = if i % 2 == 1 { -(v as i64) } else { v as i64 };
                            col.push(((off + r as usize) as u32, v));
                        }
                    }
                }
                cols.into_iter().map(|c| svec_from(fl, c)).collect()
            })
            .collect();
        diffs.push(SparseMatrix::from_cols(fl, dims[n - 1], cols.into_iter().flatten().collect())?);
    }
    let complex = ChainComplex::new(fl, 0, dims, diffs)?.with_open_edges(false, true);
    Ok(CubeComplex { system: f.clone(), complex, blocks, lookup })
}

impl CubeComplex {
    pub fn top(&self) -> usize {
        self.blocks.len() - 1
    }

    /// Admissible subsets indexing the blocks of `Q_n`.
    pub fn subsets(&self, n: usize) -> Vec<u64> {
        self.blocks[n].iter().map(|&(u, _)| u).collect()
    }

    /// Homology through `top − 1`.
    pub fn homology(&self) -> Vec<Betti> {
        let h = self.complex.homology_dims();
        (0..self.top() as i64).map(|d| h[&d]).collect()
    }

    fn locate(&self, n: usize, x: usize) -> (u64, usize) {
        let bl = &self.blocks[n];
        let k = bl.partition_point(|&(_, o)| o <= x) - 1;
        (bl[k].0, x - bl[k].1)
    }

    /// Product of basis elements `x ∈ Q_a`, `y ∈ Q_b` in `Q_{a+b}`: the sum
    /// over `W ⊆ U × U'` projecting onto both factors of the labels
    /// multiplied pointwise. Fails without products or beyond `top`.
    pub fn multiply(&self, a: usize, x: usize, b: usize, y: usize) -> Result<SVec> {
        if !self.system.has_products() {
            return Err(Error::Validation("these cross-effects carry no product".into()));
        }
        if a + b > self.top() {
            return Err(Error::Domain(format!("product lands in degree {} beyond {}", a + b, self.top())));
        }
        let (u, xi) = self.locate(a, x);
        let (v, yi) = self.locate(b, y);
        let (pu, pv) = (points(u), points(v));
        let pairs: Vec<(usize, usize)> = (0..pu.len()).flat_map(|s| (0..pv.len()).map(move |t| (s, t))).collect();
        if pairs.len() > 24 {
            return Err(Error::budget(format!("product over {} point pairs", pairs.len())));
        }
        let full_u = (1u64 << pu.len()) - 1;
        let full_v = (1u64 << pv.len()) - 1;
        let mut out: Vec<(u32, i64)> = Vec::new();
        for w in 1u64..(1 << pairs.len()) {
            let (mut cu, mut cv) = (0u64, 0u64);
            for (k, &(s, t)) in pairs.iter().enumerate() {
                if w >> k & 1 == 1 {
                    cu |= 1 << s;
                    cv |= 1 << t;
                }
            }
            if cu != full_u || cv != full_v {
                continue;
            }
            // points of W in {0,1}^{a+b}, first a coordinates from U
            let mut chosen: Vec<(usize, (usize, usize))> = pairs
                .iter()
                .enumerate()
                .filter(|&(k, _)| w >> k & 1 == 1)
                .map(|(_, &(s, t))| (pu[s] | pv[t] << a, (s, t)))
                .collect();
            chosen.sort_unstable();
            let wmask = chosen.iter().fold(0u64, |acc, &(pt, _)| acc | 1 << pt);
            let ordered: Vec<(usize, usize)> = chosen.iter().map(|&(_, st)| st).collect();
            let Some(label) = self.system.product(pu.len(), xi, pv.len(), yi, &ordered) else { continue };
            let Some(&blk) = self.lookup[a + b].get(&wmask) else {
                return Err(Error::Validation("product subset is not admissible".into()));
            };
            out.push(((self.blocks[a + b][blk].1 + label) as u32, 1));
        }
        Ok(svec_from(self.system.field(), out))
    }

    /// Linear extension of [`CubeComplex::multiply`].
    pub fn multiply_vectors(&self, a: usize, x: &[(u32, u32)], b: usize, y: &[(u32, u32)]) -> Result<SVec> {
        let f = self.system.field();
        let mut acc: Vec<(u32, i64)> = Vec::new();
        for &(i, c) in x {
            for &(j, d) in y {
                let c = f.mul(c, d);
                for (k, v) in self.multiply(a, i as usize, b, j as usize)? {
                    acc.push((k, f.mul(c, v) as i64));
                }
            }
        }
        Ok(svec_from(f, acc))
    }

    fn d(&self, n: usize, x: &[(u32, u32)]) -> SVec {
        if n == 0 {
            return vec![];
        }
        self.complex.diff(n as i64).expect("inside the window").apply(x)
    }

    /// Leibniz rule `d(xy) = dx·y + (−1)^a x·dy` on all basis pairs with
    /// `a + b ≤ max_total`.
    pub fn check_leibniz(&self, max_total: usize) -> Result<()> {
        let f = self.system.field();
        for a in 0..=max_total.min(self.top()) {
            for b in 0..=(max_total.min(self.top()) - a) {
                if a + b == 0 {
                    continue;
                }
                for x in 0..self.complex.dim(a as i64) {
                    for y in 0..self.complex.dim(b as i64) {
                        let ex = vec![(x as u32, 1)];
                        let ey = vec![(y as u32, 1)];
                        let lhs = self.d(a + b, &self.multiply(a, x, b, y)?);
                        let t1 = if a > 0 { self.multiply_vectors(a - 1, &self.d(a, &ex), b, &ey)? } else { vec![] };
                        let t2 = if b > 0 { self.multiply_vectors(a, &ex, b - 1, &self.d(b, &ey))? } else { vec![] };
                        let sign = if a % 2 == 1 { f.neg(1) } else { 1 };
                        let rhs = crate::linalg::axpy(f, &t1, sign, &t2);
                        if lhs != rhs {
                            return Err(Error::Validation(format!("Leibniz rule fails on Q_{a} × Q_{b} at ({x}, {y})")));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Associativity on all basis triples with total degree `≤ max_total`.
    pub fn check_associativity(&self, max_total: usize) -> Result<()> {
        let t = max_total.min(self.top());
        for a in 0..=t {
            for b in 0..=t - a {
                for c in 0..=t - a - b {
                    for x in 0..self.complex.dim(a as i64) {
                        for y in 0..self.complex.dim(b as i64) {
                            let xy = self.multiply(a, x, b, y)?;
                            for z in 0..self.complex.dim(c as i64) {
                                let ez = vec![(z as u32, 1)];
                                let lhs = self.multiply_vectors(a + b, &xy, c, &ez)?;
                                let yz = self.multiply(b, y, c, z)?;
                                let rhs = self.multiply_vectors(a, &[(x as u32, 1)], b + c, &yz)?;
                                if lhs != rhs {
                                    return Err(Error::Validation(format!("product not associative on Q_{a}×Q_{b}×Q_{c}")));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Finite sets `[1], …, [N]` with surjections, presented opposite: a
/// morphism `a → b` is a surjection `[b] ↠ [a]`, so the representables
/// `k[Hom(a, −)]` are the functors `S ↦ k[Surj(S, [a])]`.
pub struct SurjectionsOp {
    words: Vec<Vec<Vec<Vec<usize>>>>,
    index: Vec<Vec<HashMap<Vec<usize>, usize>>>,
}

impl SurjectionsOp {
    pub fn new(n: usize) -> Self {
        let words: Vec<Vec<Vec<Vec<usize>>>> =
            (0..n).map(|a| (0..n).map(|b| surjections(b + 1, a + 1)).collect()).collect();
        let index = words
            .iter()
            .map(|row| row.iter().map(|ws| ws.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect()).collect())
            .collect();
        SurjectionsOp { words, index }
    }

    /// The surjection `[b+1] ↠ [a+1]` behind morphism `f: a → b`.
    pub fn word(&self, a: usize, b: usize, f: usize) -> &[usize] {
        &self.words[a][b][f]
    }
}

impl Category for SurjectionsOp {
    fn objects(&self) -> usize {
        self.words.len()
    }

    fn name(&self, a: usize) -> String {
        format!("[{}]", a + 1)
    }

    fn hom(&self, a: usize, b: usize) -> usize {
        self.words[a][b].len()
    }

    fn compose(&self, a: usize, b: usize, c: usize, g: usize, f: usize) -> Lin {
        let (fw, gw) = (&self.words[a][b][f], &self.words[b][c][g]);
        let w: Vec<usize> = gw.iter().map(|&i| fw[i]).collect();
        vec![(self.index[a][c][&w], 1)]
    }

    fn identity(&self, a: usize) -> Lin {
        vec![(self.index[a][a][&(0..=a).collect::<Vec<_>>()], 1)]
    }
}

/// Cross-effects as a functor on the opposite of [`SurjectionsOp`].
struct CrossEffectFunctor<'a> {
    cat: &'a SurjectionsOp,
    cr: &'a CrossEffectSystem,
}

impl Functor for CrossEffectFunctor<'_> {
    fn field(&self) -> Field {
        self.cr.field()
    }

    fn dim(&self, a: usize) -> usize {
        self.cr.dim(a + 1)
    }

    fn act(&self, a: usize, b: usize, f: usize) -> SparseMatrix {
        // f: a → b opposite, i.e. the surjection [a+1] ↠ [b+1]
        self.cr.along(self.cat.word(b, a, f), b + 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StabRoute {
    /// Homology of the explicit cube complex.
    Cube,
    /// `Tor` over surjections of sets of size `≤ max_degree + 2`.
    Surjections,
}

/// Cube terms above this many cells switch the default route.
const CUBE_ROUTE_LIMIT: f64 = 2.0e6;

/// `H_•(Stab F)` through `max_degree`.
pub fn stab_window(f: &CrossEffectSystem, max_degree: usize, route: Option<StabRoute>) -> Result<Vec<Betti>> {
    let route = route.unwrap_or(if cube_term_size(f, max_degree + 1) <= CUBE_ROUTE_LIMIT {
        StabRoute::Cube
    } else {
        StabRoute::Surjections
    });
    match route {
        StabRoute::Cube => Ok(cube_complex(f, max_degree + 1)?.homology()),
        StabRoute::Surjections => stab_by_surjections(f, max_degree, max_degree + 2),
    }
}

/// `Tor` between the cross-effects and the point functor over surjections
/// of sets of size at most `size`. Generators on `[m]` first occur in
/// resolution degree `m − 1`, so degrees `≤ size − 2` are exact.
pub fn stab_by_surjections(f: &CrossEffectSystem, max_degree: usize, size: usize) -> Result<Vec<Betti>> {
    if size < max_degree + 2 {
        return Err(Error::Domain(format!("sets of size {size} only reach degree {}", size.saturating_sub(2))));
    }
    let cat = SurjectionsOp::new(size);
    let mut support = vec![false; size];
    support[0] = true;
    let point = Indicator { field: f.field(), support };
    let res = Resolution::build(&cat, &point, max_degree + 1)?;
    let y = CrossEffectFunctor { cat: &cat, cr: f };
    let c = res.tensor(&cat, &y)?;
    let h = c.homology_dims();
    Ok((0..=max_degree as i64).map(|d| h.get(&d).copied().unwrap_or(Betti::Dim(0))).collect())
}

/// `HM_•(A, M)` through `max_degree`: Hochschild homology of the DG algebra
/// `Q_•(A)` with coefficients in `M` through the augmentation `[a] ↦ a`,
/// from the normalized complex `M ⊗ Q̄^{⊗k}`, `Q̄ = Q / k·[1]`.
pub fn maclane_homology(m: &BimoduleSpec, max_degree: usize) -> Result<Vec<Betti>> {
    let a = m.algebra();
    let f = a.field();
    let cr = CrossEffectSystem::linearization(a)?;
    let top = max_degree + 1;
    let q = cube_complex(&cr, max_degree)?;
    let one = a.encode(a.unit());
    let unit_idx = cr.point_index(one);
    // Q̄_n as index lists into Q_n
    let qbar: Vec<Vec<usize>> = (0..=max_degree)
        .map(|n| (0..q.complex.dim(n as i64)).filter(|&i| n > 0 || i != unit_idx).collect())
        .collect();
    let qbar_pos: Vec<HashMap<usize, usize>> =
        qbar.iter().map(|v| v.iter().enumerate().map(|(i, &x)| (x, i)).collect()).collect();
    // cells: sequences of internal degrees with k + Σ n_i ≤ top
    let mut cells: Vec<Vec<usize>> = Vec::new();
    fn rec(rest: usize, cur: &mut Vec<usize>, qbar: &[Vec<usize>], out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        for n in 0..qbar.len() {
            if n < rest && !qbar[n].is_empty() {
                cur.push(n);
                rec(rest - n - 1, cur, qbar, out);
                cur.pop();
            }
        }
    }
    rec(top, &mut Vec::new(), &qbar, &mut cells);
    let degree = |c: &[usize]| c.len() + c.iter().sum::<usize>();
    let cell_dim = |c: &[usize]| c.iter().map(|&n| qbar[n].len()).product::<usize>() * m.dim();
    // offsets per total degree
    let mut dims = vec![0usize; top + 1];
    let mut place: HashMap<Vec<usize>, usize> = HashMap::new();
    cells.sort();
    for c in &cells {
        let d = degree(c);
        place.insert(c.clone(), dims[d]);
        dims[d] += cell_dim(c);
    }
    budget::check(dims.iter().sum::<usize>() as u64, "Mac Lane bar complex")?;
    let to_q = |n: usize, v: &[(u32, u32)]| -> SVec { v.iter().map(|&(i, c)| (qbar[n][i as usize] as u32, c)).collect() };
    let to_qbar = |n: usize, v: SVec| -> SVec {
        v.into_iter().filter_map(|(i, c)| qbar_pos[n].get(&(i as usize)).map(|&j| (j as u32, c))).collect()
    };
    // augmentation: Q_0 basis index i is the ring element with code i + 1
    let ring_el = |i: usize| a.decode(i + 1);
    let mut diffs = Vec::new();
    for deg in 1..=top {
        let src_cells: Vec<&Vec<usize>> = cells.iter().filter(|c| degree(c) == deg).collect();
        let mut cols: Vec<SVec> = Vec::new();
        for c in src_cells {
            let k = c.len();
            let sizes: Vec<usize> = c.iter().map(|&n| qbar[n].len()).collect();
            for lin in 0..cell_dim(c) {
                // decode (m, x_1, …, x_k), m most significant
                let mut r = lin;
                let mut xs = vec![0usize; k];
                for i in (0..k).rev() {
                    xs[i] = r % sizes[i];
                    r /= sizes[i];
                }
                let mi = r;
                let mut out: Vec<(u32, i64)> = Vec::new();
                let emit = |cell: &[usize], mv: &SVec, xsv: &[SVec], sign: i64, out: &mut Vec<(u32, i64)>| {
                    let Some(&off) = place.get(cell) else { return };
                    // expand tensor of sparse vectors
                    let mut acc: Vec<(usize, u32)> = mv.iter().map(|&(i, v)| (i as usize, v)).collect();
                    for (j, x) in xsv.iter().enumerate() {
                        let size = qbar[cell[j]].len();
                        let mut next = Vec::with_capacity(acc.len() * x.len());
                        for &(idx, v) in &acc {
                            for &(i, w) in x {
                                next.push((idx * size + i as usize, f.mul(v, w)));
                            }
                        }
                        acc = next;
                    }
                    for (idx, v) in acc {
                        out.push(((off + idx) as u32, sign * v as i64));
                    }
                };
                let unit_m: SVec = vec![(mi as u32, 1)];
                let unit_x: Vec<SVec> = xs.iter().map(|&x| vec![(x as u32, 1)]).collect();
                // b: first term m·x_1
                if k >= 1 && c[0] == 0 {
                    let act = m.right_by(&ring_el(qbar[0][xs[0]]));
                    let mv = act.apply(&unit_m);
                    emit(&c[1..], &mv, &unit_x[1..], 1, &mut out);
                }
                // b: inner products x_i x_{i+1}
                for i in 0..k.saturating_sub(1) {
                    let (na, nb) = (c[i], c[i + 1]);
                    let prod = q.multiply_vectors(na, &to_q(na, &unit_x[i]), nb, &to_q(nb, &unit_x[i + 1]))?;
                    let prod = to_qbar(na + nb, prod);
                    if prod.is_empty() {
                        continue;
                    }
                    let mut cell = c[..i].to_vec();
                    cell.push(na + nb);
                    cell.extend_from_slice(&c[i + 2..]);
                    let mut xsv: Vec<SVec> = unit_x[..i].to_vec();
                    xsv.push(prod);
                    xsv.extend_from_slice(&unit_x[i + 2..]);
                    let s = if (i + 1) % 2 == 0 { 1 } else { -1 };
                    emit(&cell, &unit_m, &xsv, s, &mut out);
                }
                // b: cyclic term x_k·m, only degree-0 x_k acts
                if k >= 1 && c[k - 1] == 0 {
                    let act = m.left_by(&ring_el(qbar[0][xs[k - 1]]));
                    let mv = act.apply(&unit_m);
                    let s = if k % 2 == 0 { 1 } else { -1 };
                    emit(&c[..k - 1], &mv, &unit_x[..k - 1], s, &mut out);
                }
                // (−1)^k δ
                let mut prefix = 0usize;
                for i in 0..k {
                    let n = c[i];
                    if n > 0 {
                        let dx = to_qbar(n - 1, q.d(n, &to_q(n, &unit_x[i])));
                        if !dx.is_empty() {
                            let mut cell = c.clone();
                            cell[i] = n - 1;
                            let mut xsv = unit_x.clone();
                            xsv[i] = dx;
                            let s = if (k + prefix).is_multiple_of(2) { 1 } else { -1 };
                            emit(&cell, &unit_m, &xsv, s, &mut out);
                        }
                    }
                    prefix += n;
                }
                cols.push(svec_from(f, out));
            }
        }
        diffs.push(SparseMatrix::from_cols(f, dims[deg - 1], cols)?);
    }
    let c = ChainComplex::new(f, 0, dims, diffs)?.with_open_edges(false, true);
    let h = c.homology_dims();
    Ok((0..=max_degree as i64).map(|d| h[&d]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::Betti;

    fn fl(p: u64) -> Field {
        Field::new(p).unwrap()
    }

    fn dims(v: &[Betti]) -> Vec<usize> {
        v.iter().map(|b| b.dim().unwrap()).collect()
    }

    /// Brute-force count of admissible subsets weighted by `w^{|U|}`.
    fn brute_weighted(n: usize, w: usize) -> usize {
        let pts = 1usize << n;
        (1u64..1 << pts)
            .filter(|&u| {
                (0..n).all(|i| {
                    let (mut z, mut o) = (false, false);
                    for x in 0..pts {
                        if u >> x & 1 == 1 {
                            if x >> i & 1 == 0 {
                                z = true
                            } else {
                                o = true
                            }
                        }
                    }
                    z && o
                })
            })
            .map(|u| w.pow(u.count_ones()))
            .sum()
    }

    #[test]
    fn term_sizes_match_enumeration() {
        let f2 = CrossEffectSystem::linearization(&AlgebraSpec::prime_field(fl(2))).unwrap();
        let q = cube_complex(&f2, 3).unwrap();
        let got: Vec<usize> = (0..=3).map(|n| q.complex.dim(n)).collect();
        assert_eq!(&got[..3], &[1, 1, 7]);
        for n in 0..=4usize {
            assert_eq!(cube_term_size(&f2, n) as usize, brute_weighted(n, 1));
        }
        let f3 = CrossEffectSystem::linearization(&AlgebraSpec::prime_field(fl(3))).unwrap();
        for n in 0..=3usize {
            assert_eq!(cube_term_size(&f3, n) as usize, brute_weighted(n, 2));
        }
    }

    #[test]
    fn functoriality_of_cross_effects() {
        for p in [2u64, 3] {
            let lin = CrossEffectSystem::linearization(&AlgebraSpec::prime_field(fl(p))).unwrap();
            lin.check_functoriality(4).unwrap();
            CrossEffectSystem::divided_power(fl(p), 3).check_functoriality(4).unwrap();
            CrossEffectSystem::tensor_power(fl(p), 2).check_functoriality(4).unwrap();
        }
        let dn = CrossEffectSystem::linearization(&AlgebraSpec::dual_numbers(fl(2))).unwrap();
        dn.check_functoriality(3).unwrap();
    }

    #[test]
    fn cube_homology_low_degrees() {
        let f2 = CrossEffectSystem::linearization(&AlgebraSpec::prime_field(fl(2))).unwrap();
        assert_eq!(dims(&cube_complex(&f2, 4).unwrap().homology()), vec![1, 1, 1, 2]);
        let f3 = CrossEffectSystem::linearization(&AlgebraSpec::prime_field(fl(3))).unwrap();
        assert_eq!(dims(&cube_complex(&f3, 3).unwrap().homology()), vec![1, 1, 0]);
    }

    #[test]
    fn surjection_route_matches_cube() {
        let f2 = CrossEffectSystem::linearization(&AlgebraSpec::prime_field(fl(2))).unwrap();
        assert_eq!(dims(&stab_by_surjections(&f2, 3, 5).unwrap()), vec![1, 1, 1, 2]);
        let f3 = CrossEffectSystem::linearization(&AlgebraSpec::prime_field(fl(3))).unwrap();
        assert_eq!(dims(&stab_by_surjections(&f3, 2, 4).unwrap()), vec![1, 1, 0]);
    }

    #[test]
    fn products_are_associative_and_leibniz() {
        for p in [2u64, 3] {
            let lin = CrossEffectSystem::linearization(&AlgebraSpec::prime_field(fl(p))).unwrap();
            let q = cube_complex(&lin, 3).unwrap();
            q.check_leibniz(3).unwrap();
            q.check_associativity(2).unwrap();
        }
    }

    #[test]
    fn additive_and_tensor_square() {
        let f = fl(2);
        let h = stab_window(&CrossEffectSystem::additive(f, 3), 4, None).unwrap();
        assert_eq!(dims(&h), vec![3, 0, 0, 0, 0]);
        let h = stab_window(&CrossEffectSystem::tensor_power(f, 2), 4, None).unwrap();
        assert_eq!(dims(&h), vec![0; 5]);
    }

    #[test]
    fn maclane_low_degrees() {
        let k2 = AlgebraSpec::prime_field(fl(2));
        let h = maclane_homology(&BimoduleSpec::regular(&k2), 2).unwrap();
        assert_eq!(dims(&h), vec![1, 0, 1]);
        let k3 = AlgebraSpec::prime_field(fl(3));
        let h = maclane_homology(&BimoduleSpec::regular(&k3), 1).unwrap();
        assert_eq!(dims(&h), vec![1, 0]);
        let dn = AlgebraSpec::dual_numbers(fl(2));
        let h = maclane_homology(&BimoduleSpec::regular(&dn), 0).unwrap();
        assert_eq!(dims(&h), vec![2]);
    }
}
