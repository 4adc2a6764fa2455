//! Power functors `T^n, S^n, D^n, Λ^n` and the cyclic power on spaces and
//! bounded complexes, the composition and Frobenius maps of divided powers,
//! Young families, and the stabilizations `HQ^n(V) = H̄(Σ_n, X_n, T^n V)`.
//!
//! `Σ_n` acts on `V^{⊗n}` by moving factors: `(a·w)_{a(i)} = w_i`. On
//! tensor powers of complexes each transposition of neighbours of degrees
//! `a, b` carries the Koszul sign `(−1)^{ab}`.

use std::collections::BTreeMap;

use crate::chains::{Betti, ChainComplex};
use crate::cyc::Quotient;
use crate::error::{Error, Result};
use crate::linalg::{solve_columns, svec_from, Echelon, Field, SVec, SparseMatrix};
use crate::tate::{
    family_closure, truncated_tate_orbit, truncated_tate_resolution, FinGroup, GModule, SubgroupFamily,
    TruncatedTate,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PowerKind {
    Tensor,
    Symmetric,
    Divided,
    Exterior,
    Cyclic,
}

/// What a power functor is applied to.
#[derive(Clone, Debug)]
pub enum PowerBase {
    /// `F_p^d` in degree 0.
    Space(usize),
    Complex(ChainComplex),
}

#[derive(Clone, Debug)]
pub struct PowerFunctorValue {
    pub kind: PowerKind,
    pub n: usize,
    /// Dimension per homological degree.
    pub dims: BTreeMap<i64, usize>,
    /// The resulting complex (concentrated in degree 0 for spaces).
    pub complex: ChainComplex,
    /// The group action on the underlying tensor power: `Σ_n` for
    /// [`PowerKind::Tensor`], `Z/n` for [`PowerKind::Cyclic`].
    pub action: Option<(FinGroup, GModule)>,
}

/// Tensor power of a complex with its signed `Σ_n`-action.
struct TensorPower {
    field: Field,
    n: usize,
    /// basis tuples of global basis indices, grouped by degree
    tuples: BTreeMap<i64, Vec<Vec<usize>>>,
    index: BTreeMap<Vec<usize>, (i64, usize)>,
    complex: ChainComplex,
    group: FinGroup,
    /// action matrices per degree for each element of `group`
    action: BTreeMap<i64, Vec<SparseMatrix>>,
}

impl TensorPower {
    fn new(c: &ChainComplex, n: usize) -> Result<TensorPower> {
        let f = c.field();
        // global basis of c: (degree, index within degree)
        let mut basis: Vec<(i64, usize)> = Vec::new();
        for d in c.lo()..=c.hi() {
            for i in 0..c.dim(d) {
                basis.push((d, i));
            }
        }
        let nb = basis.len();
        let count = nb.checked_pow(n as u32).ok_or_else(|| Error::budget("tensor power too large"))?;
        crate::budget::check(count as u64 * n as u64, "tensor power")?;
        let mut tuples: BTreeMap<i64, Vec<Vec<usize>>> = BTreeMap::new();
        for code in 0..count {
            let t: Vec<usize> = (0..n).map(|i| code / nb.pow((n - 1 - i) as u32) % nb).collect();
            let deg: i64 = t.iter().map(|&x| basis[x].0).sum();
            tuples.entry(deg).or_default().push(t);
        }
        let lo = c.lo() * n as i64;
        let hi = c.hi() * n as i64;
        for d in lo..=hi {
            tuples.entry(d).or_default();
        }
        let mut index = BTreeMap::new();
        for (&d, ts) in &tuples {
            for (i, t) in ts.iter().enumerate() {
                index.insert(t.clone(), (d, i));
            }
        }
        let base_of = |g: usize| -> (i64, usize) { basis[g] };
        let global = |d: i64, i: usize| -> usize { basis.iter().position(|&b| b == (d, i)).expect("basis element") };
        // Koszul differential
        let mut diffs = Vec::new();
        for d in lo + 1..=hi {
            let cols = tuples[&d]
                .iter()
                .map(|t| {
                    let mut out: Vec<(u32, i64)> = Vec::new();
                    let mut before = 0i64;
                    for pos in 0..n {
                        let (dx, ix) = base_of(t[pos]);
                        if let Some(m) = c.diff(dx) {
                            for &(row, v) in m.col(ix) {
                                let mut u = t.clone();
                                u[pos] = global(dx - 1, row as usize);
                                let (_, k) = index[&u];
                                let s = if before % 2 == 0 { v as i64 } else { -(v as i64) };
                                out.push((k as u32, s));
                            }
                        }
                        before += dx;
                    }
                    svec_from(f, out)
                })
                .collect();
            diffs.push(SparseMatrix::from_cols(f, tuples[&(d - 1)].len(), cols)?);
        }
        let dims: Vec<usize> = (lo..=hi).map(|d| tuples[&d].len()).collect();
        let complex = ChainComplex::new(f, lo, dims, diffs)?;
        let group = FinGroup::symmetric(n);
        let mut action = BTreeMap::new();
        for (&d, ts) in &tuples {
            let mats = (0..group.order())
                .map(|g| {
                    let perm = group.permutation(g).expect("built from permutations");
                    let trip: Vec<_> = ts
                        .iter()
                        .enumerate()
                        .map(|(col, t)| {
                            let mut u = vec![0usize; n];
                            for i in 0..n {
                                u[perm[i]] = t[i];
                            }
                            // Koszul sign: pairs whose order is reversed
                            let mut odd = false;
                            for i in 0..n {
                                for j in i + 1..n {
                                    if perm[i] > perm[j] {
                                        odd ^= (base_of(t[i]).0 * base_of(t[j]).0) % 2 != 0;
                                    }
                                }
                            }
                            (index[&u].1, col, if odd { -1 } else { 1 })
                        })
                        .collect();
                    SparseMatrix::from_triplets(f, ts.len(), ts.len(), trip)
                })
                .collect::<Result<Vec<_>>>()?;
            action.insert(d, mats);
        }
        Ok(TensorPower { field: f, n, tuples, index, complex, group, action })
    }

    fn adjacent_transpositions(&self) -> Vec<usize> {
        (0..self.n.saturating_sub(1))
            .map(|i| {
                let mut p: Vec<usize> = (0..self.n).collect();
                p.swap(i, i + 1);
                self.group.find_permutation(&p).expect("in Σ_n")
            })
            .collect()
    }

    /// Images of `π − ε(π)` per degree, `ε` the sign character when `signed`.
    fn relations(&self, d: i64, signed: bool) -> Vec<SVec> {
        let f = self.field;
        let dim = self.tuples[&d].len();
        let id = SparseMatrix::identity(f, dim);
        let mut out = Vec::new();
        for g in self.adjacent_transpositions() {
            let m = &self.action[&d][g];
            let r = if signed { m.add(&id) } else { m.sub(&id) }.expect("square");
            out.extend(r.columns().iter().filter(|c| !c.is_empty()).cloned());
        }
        out
    }

    fn invariants(&self) -> Result<ChainComplex> {
        let f = self.field;
        let c = &self.complex;
        let bases: Vec<SparseMatrix> = (c.lo()..=c.hi())
            .map(|d| {
                let dim = c.dim(d);
                let parts: Vec<SparseMatrix> = self
                    .adjacent_transpositions()
                    .iter()
                    .map(|&g| self.action[&d][g].sub(&SparseMatrix::identity(f, dim)).expect("square"))
                    .collect();
                if parts.is_empty() {
                    return SparseMatrix::identity(f, dim);
                }
                let refs: Vec<&SparseMatrix> = parts.iter().collect();
                SparseMatrix::vstack(&refs).expect("same width").kernel().matrix(f)
            })
            .collect();
        let diffs = (c.lo() + 1..=c.hi())
            .map(|d| {
                let k = (d - c.lo()) as usize;
                solve_columns(&bases[k - 1], &c.diff(d).expect("inside").dot(&bases[k]))
            })
            .collect::<Result<Vec<_>>>()?;
        ChainComplex::new(f, c.lo(), bases.iter().map(|b| b.ncols()).collect(), diffs)
    }

    /// Quotient of `T^n` by the relations, optionally also killing words
    /// with equal even-degree neighbours (`x ⊗ x = 0` in exterior powers).
    fn quotient(&self, signed: bool, kill_squares: bool) -> Result<ChainComplex> {
        let f = self.field;
        let c = &self.complex;
        let qs: Vec<Quotient> = (c.lo()..=c.hi())
            .map(|d| {
                let mut e = Echelon::new(f, c.dim(d));
                for r in self.relations(d, signed) {
                    e.insert(r);
                }
                if kill_squares {
                    for (i, t) in self.tuples[&d].iter().enumerate() {
                        if t.windows(2).any(|w| w[0] == w[1] && self.degree_of(w[0]) % 2 == 0) {
                            e.insert(vec![(i as u32, 1)]);
                        }
                    }
                }
                Quotient::new(e)
            })
            .collect();
        let diffs = (c.lo() + 1..=c.hi())
            .map(|d| {
                let k = (d - c.lo()) as usize;
                qs[k - 1].induced(c.diff(d).expect("inside"), &qs[k])
            })
            .collect();
        ChainComplex::new(f, c.lo(), qs.iter().map(|q| q.dim()).collect(), diffs)
    }

    fn degree_of(&self, global: usize) -> i64 {
        // tuples of length one are not stored; recover the degree from any tuple containing it
        let probe = vec![global; self.n];
        self.index[&probe].0 / self.n as i64
    }
}

fn space_complex(f: Field, d: usize) -> ChainComplex {
    ChainComplex::concentrated(f, 0, d)
}

/// `kind^n` of `base`. Dimensions of the results on spaces are checked
/// against the binomial counts.
pub fn eval_power(field: Field, kind: PowerKind, n: usize, base: &PowerBase) -> Result<PowerFunctorValue> {
    let c = match base {
        PowerBase::Space(d) => space_complex(field, *d),
        PowerBase::Complex(c) => c.clone(),
    };
    if c.field() != field {
        return Err(Error::IncompatibleField(c.field().p(), field.p()));
    }
    let tp = TensorPower::new(&c, n)?;
    let (complex, action) = match kind {
        PowerKind::Tensor => {
            let act = if let PowerBase::Space(d) = base {
                Some((tp.group.clone(), GModule::new(&tp.group, field, d.pow(n as u32), tp.action[&0].clone())?))
            } else {
                None
            };
            (tp.complex.clone(), act)
        }
        PowerKind::Divided => (tp.invariants()?, None),
        PowerKind::Symmetric => (tp.quotient(false, false)?, None),
        PowerKind::Exterior => (tp.quotient(true, true)?, None),
        PowerKind::Cyclic => {
            let act = if let PowerBase::Space(d) = base {
                let z = FinGroup::cyclic(n.max(1));
                let rot: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
                let g = tp.group.find_permutation(&rot).expect("rotation in Σ_n");
                let mut mats = Vec::new();
                let mut cur = SparseMatrix::identity(field, d.pow(n as u32));
                for _ in 0..z.order() {
                    mats.push(cur.clone());
                    cur = tp.action[&0][g].dot(&cur);
                }
                // FinGroup::cyclic lists rotations in lexicographic order of their image lists
                let order: Vec<usize> = (0..z.order())
                    .map(|a| z.permutation(a).expect("permutations")[0])
                    .collect();
                let mats = order.iter().map(|&shift| mats[shift].clone()).collect();
                Some((z.clone(), GModule::new(&z, field, d.pow(n as u32), mats)?))
            } else {
                None
            };
            (tp.complex.clone(), act)
        }
    };
    let dims: BTreeMap<i64, usize> = (complex.lo()..=complex.hi()).map(|d| (d, complex.dim(d))).collect();
    if let PowerBase::Space(d) = base {
        let want = match kind {
            PowerKind::Tensor | PowerKind::Cyclic => d.pow(n as u32),
            PowerKind::Symmetric | PowerKind::Divided => binomial(d + n - 1, n),
            PowerKind::Exterior => binomial(*d, n),
        };
        if dims.get(&0).copied().unwrap_or(0) != want {
            return Err(Error::Validation(format!("{kind:?}^{n} of a {d}-dimensional space has the wrong dimension")));
        }
    }
    Ok(PowerFunctorValue { kind, n, dims, complex, action })
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Multisets of size `n` over `0..d`, as sorted tuples in lexicographic order.
pub fn multisets(d: usize, n: usize) -> Vec<Vec<usize>> {
    fn rec(d: usize, n: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for x in start..d {
            cur.push(x);
            rec(d, n, x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, n, 0, &mut Vec::new(), &mut out);
    out
}

fn distinct_permutations(sorted: &[usize]) -> Vec<Vec<usize>> {
    let mut cur = sorted.to_vec();
    let mut out = vec![cur.clone()];
    loop {
        // next permutation in lexicographic order
        let Some(i) = (0..cur.len().saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            return out;
        };
        let j = (i + 1..cur.len()).rev().find(|&j| cur[j] > cur[i]).expect("exists");
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(cur.clone());
    }
}

/// `D^n(φ)` for `φ: F^d → F^e`, in the bases of orbit sums `γ_α` indexed by
/// [`multisets`].
pub fn divided_power_map(phi: &SparseMatrix, n: usize) -> SparseMatrix {
    let f = phi.field();
    let src = multisets(phi.ncols(), n);
    let tgt = multisets(phi.nrows(), n);
    let cols = src
        .iter()
        .map(|alpha| {
            let mut out: Vec<(u32, i64)> = Vec::new();
            let words = distinct_permutations(alpha);
            for (ti, u) in tgt.iter().enumerate() {
                let mut s = 0u32;
                for w in &words {
                    let mut prod = 1u32;
                    for i in 0..n {
                        prod = f.mul(prod, phi.get(u[i], w[i]));
                        if prod == 0 {
                            break;
                        }
                    }
                    s = f.add(s, prod);
                }
                if s != 0 {
                    out.push((ti as u32, s as i64));
                }
            }
            svec_from(f, out)
        })
        .collect();
    SparseMatrix::from_cols(f, tgt.len(), cols).expect("in range")
}

/// The inclusion `D^{mn}(V) → D^m(D^n V)` and the Frobenius dual
/// `D^{pn}(V) → D^n(V)`, `γ_α ↦ γ_{α/p}` when `p | α`, else 0.
#[derive(Clone, Debug)]
pub struct StructureMaps {
    pub composition: SparseMatrix,
    pub frobenius: SparseMatrix,
}

fn multiplicities(t: &[usize], d: usize) -> Vec<usize> {
    let mut m = vec![0; d];
    for &x in t {
        m[x] += 1;
    }
    m
}

pub fn structure_maps(field: Field, n: usize, m: usize, d: usize) -> StructureMaps {
    let p = field.p() as usize;
    let src = multisets(d, m * n);
    let inner = multisets(d, n);
    let outer = multisets(inner.len(), m);
    let cols = src
        .iter()
        .map(|alpha| {
            let ma = multiplicities(alpha, d);
            let rows: Vec<(u32, i64)> = outer
                .iter()
                .enumerate()
                .filter(|(_, betas)| {
                    let mut acc = vec![0; d];
                    for &b in betas.iter() {
                        for (x, c) in multiplicities(&inner[b], d).into_iter().enumerate() {
                            acc[x] += c;
                        }
                    }
                    acc == ma
                })
                .map(|(i, _)| (i as u32, 1))
                .collect();
            svec_from(field, rows)
        })
        .collect();
    let composition = SparseMatrix::from_cols(field, outer.len(), cols).expect("in range");
    let big = multisets(d, p * n);
    let small = multisets(d, n);
    let sidx: BTreeMap<Vec<usize>, usize> = small.iter().map(|t| multiplicities(t, d)).enumerate().map(|(i, m)| (m, i)).collect();
    let cols = big
        .iter()
        .map(|alpha| {
            let ma = multiplicities(alpha, d);
            if ma.iter().all(|&c| c % p == 0) {
                let key: Vec<usize> = ma.iter().map(|&c| c / p).collect();
                vec![(sidx[&key] as u32, 1)]
            } else {
                vec![]
            }
        })
        .collect();
    let frobenius = SparseMatrix::from_cols(field, small.len(), cols).expect("in range");
    StructureMaps { composition, frobenius }
}

/// Both naturality squares for a test map `φ: F^d → F^e`.
pub fn naturality_holds(field: Field, n: usize, m: usize, phi: &SparseMatrix) -> bool {
    let p = field.p() as usize;
    let (d, e) = (phi.ncols(), phi.nrows());
    let sv = structure_maps(field, n, m, d);
    let sw = structure_maps(field, n, m, e);
    let comp = sw.composition.dot(&divided_power_map(phi, m * n))
        == divided_power_map(&divided_power_map(phi, n), m).dot(&sv.composition);
    // φ has entries in F_p, so its Frobenius twist is φ itself
    let frob = sw.frobenius.dot(&divided_power_map(phi, p * n)) == divided_power_map(phi, n).dot(&sv.frobenius);
    comp && frob
}

/// `X_n`: the family generated by the Young subgroups `Σ_f` of surjections
/// `f: [n] ↠ [m]`, `m ≥ 2`.
#[derive(Clone, Debug)]
pub struct YoungFamilyData {
    pub n: usize,
    pub group: FinGroup,
    pub family: SubgroupFamily,
}

pub fn young_family(n: usize) -> Result<YoungFamilyData> {
    if n < 2 {
        return Err(Error::Domain(format!("Young families need n ≥ 2, got {n}")));
    }
    let group = FinGroup::symmetric(n);
    let mut seeds = Vec::new();
    for f in set_partitions(n) {
        if f.iter().max().is_some_and(|&b| b >= 1) {
            let h: Vec<usize> = (0..group.order())
                .filter(|&x| {
                    let p = group.permutation(x).expect("permutations");
                    (0..n).all(|i| f[p[i]] == f[i])
                })
                .collect();
            seeds.push(h);
        }
    }
    let family = family_closure(&group, &seeds)?;
    Ok(YoungFamilyData { n, group, family })
}

/// Set partitions of `0..n` as restricted growth strings.
fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, cur: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..=max + 1 {
            if cur.is_empty() && b > 0 {
                break;
            }
            cur.push(b);
            rec(n, cur, if cur.len() == 1 { 0 } else { max.max(b) }, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, &mut Vec::new(), 0, &mut out);
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    Resolution,
    Orbit,
}

/// `HQ^n_•(F_p^d)` through `max_degree`. Without an explicit route, `Σ_2`
/// and `Σ_3` use the resolution, larger groups the orbit category. The
/// ring table comes with the resolution route at `d = 1`.
pub fn q_n_stab(field: Field, n: usize, d: usize, max_degree: usize, route: Option<Route>) -> Result<TruncatedTate> {
    let y = young_family(n)?;
    let t = eval_power(field, PowerKind::Tensor, n, &PowerBase::Space(d))?;
    let (_, m) = t.action.expect("tensor powers of spaces carry the action");
    match route.unwrap_or(if n <= 3 { Route::Resolution } else { Route::Orbit }) {
        Route::Resolution => truncated_tate_resolution(&y.group, &y.family, &m, max_degree, None, d == 1),
        Route::Orbit => Ok(TruncatedTate {
            dims: truncated_tate_orbit(&y.group, &y.family, &m, max_degree)?,
            ring: None,
            cover_points: 0,
        }),
    }
}

/// Dimensions predicted by the recursion `HQ^{np} = HQ^n[ξ, τ]` from
/// `HQ^n`: `deg ξ = 2(pn − 1)`, `deg τ = 2n − 1`, `τ² = 0` for odd `p`;
/// for `p = 2` only `ξ`, of degree `2n − 1`.
pub fn recursion_prediction(p: usize, n: usize, base: &[usize]) -> Vec<usize> {
    let len = base.len();
    let mut series = base.to_vec();
    let xi = if p == 2 { 2 * n - 1 } else { 2 * (p * n - 1) };
    // multiply by 1/(1 − t^ξ)
    for i in xi..len {
        series[i] += series[i - xi];
    }
    if p != 2 {
        let tau = 2 * n - 1;
        let prev = series.clone();
        for i in tau..len {
            series[i] += prev[i - tau];
        }
    }
    series
}

/// `Betti` list to plain dimensions, failing on indeterminate entries.
pub fn plain_dims(v: &[Betti]) -> Result<Vec<usize>> {
    v.iter()
        .map(|b| b.dim().ok_or_else(|| Error::Validation("indeterminate degree inside the window".into())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> Field {
        Field::new(p).unwrap()
    }

    fn interval(fl: Field) -> ChainComplex {
        ChainComplex::new(fl, 0, vec![1, 1], vec![SparseMatrix::identity(fl, 1)]).unwrap()
    }

    #[test]
    fn dimensions_on_spaces() {
        let fl = f(5);
        let dim = |k| eval_power(fl, k, 2, &PowerBase::Space(3)).unwrap().dims[&0];
        assert_eq!(dim(PowerKind::Tensor), 9);
        assert_eq!(dim(PowerKind::Symmetric), 6);
        assert_eq!(dim(PowerKind::Divided), 6);
        assert_eq!(dim(PowerKind::Exterior), 3);
        let fl = f(2);
        assert_eq!(eval_power(fl, PowerKind::Exterior, 3, &PowerBase::Space(4)).unwrap().dims[&0], 4);
        assert_eq!(eval_power(fl, PowerKind::Cyclic, 3, &PowerBase::Space(2)).unwrap().dims[&0], 8);
    }

    #[test]
    fn divided_square_of_the_interval() {
        let h = eval_power(f(3), PowerKind::Divided, 2, &PowerBase::Complex(interval(f(3)))).unwrap();
        assert!(h.complex.betti().values().all(|&b| b == 0));
        let h = eval_power(f(2), PowerKind::Divided, 2, &PowerBase::Complex(interval(f(2)))).unwrap();
        let b = h.complex.betti();
        assert_eq!((b[&0], b[&1], b[&2]), (1, 0, 0));
    }

    #[test]
    fn divided_powers_of_interval_acyclic_off_p() {
        for p in [2u64, 3] {
            for m in 1..=5usize {
                if m % p as usize == 0 {
                    continue;
                }
                let h = eval_power(f(p), PowerKind::Divided, m, &PowerBase::Complex(interval(f(p)))).unwrap();
                assert!(h.complex.betti().values().all(|&b| b == 0), "p = {p}, m = {m}");
            }
        }
    }

    #[test]
    fn structure_map_examples() {
        let fl = f(3);
        let s = structure_maps(fl, 1, 1, 2);
        assert_eq!(s.composition, SparseMatrix::identity(fl, 2));
        let s = structure_maps(fl, 1, 2, 1);
        assert_eq!(s.frobenius, SparseMatrix::identity(fl, 1));
        let phi = SparseMatrix::from_dense(f(2), &[vec![1, 1]]);
        assert!(naturality_holds(f(2), 2, 2, &phi));
        let phi = SparseMatrix::from_dense(f(3), &[vec![1, 2], vec![0, 1]]);
        assert!(naturality_holds(f(3), 2, 2, &phi));
    }

    #[test]
    fn young_family_classes() {
        assert!(young_family(1).is_err());
        let counts: Vec<usize> = (2..=4)
            .map(|n| {
                let y = young_family(n).unwrap();
                y.family.conjugacy_representatives(&y.group).len()
            })
            .collect();
        assert_eq!(counts, vec![1, 2, 4]);
    }

    #[test]
    fn stabilizations_small() {
        let h = q_n_stab(f(2), 2, 1, 6, None).unwrap();
        assert_eq!(plain_dims(&h.dims).unwrap(), vec![1; 7]);
        assert!(h.ring.unwrap().is_polynomial_on_degree_one());
        let h = q_n_stab(f(3), 3, 1, 5, None).unwrap();
        assert_eq!(plain_dims(&h.dims).unwrap(), vec![1, 1, 0, 0, 1, 1]);
        let h = q_n_stab(f(3), 2, 1, 5, None).unwrap();
        assert_eq!(plain_dims(&h.dims).unwrap(), vec![0; 6]);
    }

    #[test]
    fn recursion_series() {
        assert_eq!(recursion_prediction(2, 1, &[1, 0, 0, 0, 0, 0]), vec![1; 6]);
        assert_eq!(recursion_prediction(2, 2, &[1; 6]), vec![1, 1, 1, 2, 2, 2]);
        assert_eq!(recursion_prediction(3, 1, &[1, 0, 0, 0, 0, 0]), vec![1, 1, 0, 0, 1, 1]);
    }

    #[test]
    fn sigma4_orbit_route() {
        let h = q_n_stab(f(2), 4, 1, 5, None).unwrap();
        assert_eq!(plain_dims(&h.dims).unwrap(), vec![1, 1, 1, 2, 2, 2]);
    }
}
