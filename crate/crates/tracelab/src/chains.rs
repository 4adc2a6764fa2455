//! Chain complexes on finite degree windows.
//!
//! A window `[lo, hi]` holds the terms that were built. Terms outside are zero
//! unless the corresponding edge is flagged open, in which case they are
//! unknown and homology at that edge is reported as indeterminate.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{solve_columns, svec_from, Echelon, Field, SVec, SparseMatrix};

/// A homology dimension, or the admission that it depends on unseen terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Betti {
    Dim(usize),
    Indeterminate,
}

impl Betti {
    pub fn dim(self) -> Option<usize> {
        match self {
            Betti::Dim(d) => Some(d),
            Betti::Indeterminate => None,
        }
    }
}

impl fmt::Display for Betti {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Betti::Dim(d) => write!(f, "{d}"),
            Betti::Indeterminate => write!(f, "?"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    AtOrAbove,
    AtOrBelow,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    field: Field,
    lo: i64,
    dims: Vec<usize>,
    /// `d[k]` is the differential out of degree `lo + k + 1`.
    d: Vec<SparseMatrix>,
    open_below: bool,
    open_above: bool,
}

impl ChainComplex {
    /// `dims[k]` is the term in degree `lo + k`; `diffs[k]` maps degree
    /// `lo + k + 1` to `lo + k`.
    pub fn new(field: Field, lo: i64, dims: Vec<usize>, diffs: Vec<SparseMatrix>) -> Result<Self> {
        if diffs.len() + 1 != dims.len().max(1) {
            return Err(Error::Shape(format!(
                "{} terms need {} differentials, got {}",
                dims.len(),
                dims.len().saturating_sub(1),
                diffs.len()
            )));
        }
        for (k, m) in diffs.iter().enumerate() {
            if m.field() != field {
                return Err(Error::IncompatibleField(m.field().p(), field.p()));
            }
            if m.ncols() != dims[k + 1] || m.nrows() != dims[k] {
                return Err(Error::Shape(format!(
                    "d_{} is {}×{}, expected {}×{}",
                    lo + k as i64 + 1,
                    m.nrows(),
                    m.ncols(),
                    dims[k],
                    dims[k + 1]
                )));
            }
        }
        let c = ChainComplex { field, lo, dims, d: diffs, open_below: false, open_above: false };
        c.check_square_zero()?;
        Ok(c)
    }

    /// The zero complex on `[lo, lo]`.
    pub fn zero(field: Field, lo: i64) -> Self {
        ChainComplex { field, lo, dims: vec![0], d: vec![], open_below: false, open_above: false }
    }

    /// A single term `k^dim` in degree `n`.
    pub fn concentrated(field: Field, n: i64, dim: usize) -> Self {
        ChainComplex { field, lo: n, dims: vec![dim], d: vec![], open_below: false, open_above: false }
    }

    pub fn with_open_edges(mut self, below: bool, above: bool) -> Self {
        self.open_below = below;
        self.open_above = above;
        self
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.dims.len() as i64 - 1
    }

    pub fn open_below(&self) -> bool {
        self.open_below
    }

    pub fn open_above(&self) -> bool {
        self.open_above
    }

    pub fn dim(&self, n: i64) -> usize {
        if n < self.lo || n > self.hi() {
            0
        } else {
            self.dims[(n - self.lo) as usize]
        }
    }

    /// `d_n : C_n → C_{n-1}` when both ends are in the window.
    pub fn diff(&self, n: i64) -> Option<&SparseMatrix> {
        if n <= self.lo || n > self.hi() {
            None
        } else {
            Some(&self.d[(n - self.lo - 1) as usize])
        }
    }

    /// `d_n`, with zero maps supplied past closed edges.
    pub fn diff_or_zero(&self, n: i64) -> SparseMatrix {
        self.diff(n)
            .cloned()
            .unwrap_or_else(|| SparseMatrix::zero(self.field, self.dim(n - 1), self.dim(n)))
    }

    fn check_square_zero(&self) -> Result<()> {
        let bad = (1..self.d.len()).into_par_iter().find_first(|&k| {
            let m = self.d[k - 1].dot(&self.d[k]);
            !m.is_zero()
        });
        match bad {
            Some(k) => Err(Error::InvalidComplex { degree: self.lo + k as i64 }),
            None => Ok(()),
        }
    }

    /// Whether degree `n` is affected by terms outside the window.
    pub fn is_indeterminate(&self, n: i64) -> bool {
        (self.open_below && n <= self.lo) || (self.open_above && n >= self.hi())
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.d.par_iter().map(|m| m.rank()).collect()
    }

    /// `dim H_n = dim ker d_n − rank d_{n+1}` over the window.
    pub fn homology_dims(&self) -> BTreeMap<i64, Betti> {
        let ranks = self.ranks();
        let rank_out = |n: i64| -> usize {
            if n <= self.lo || n > self.hi() {
                0
            } else {
                ranks[(n - self.lo - 1) as usize]
            }
        };
        (self.lo..=self.hi())
            .map(|n| {
                let b = if self.is_indeterminate(n) {
                    Betti::Indeterminate
                } else {
                    Betti::Dim(self.dim(n) - rank_out(n) - rank_out(n + 1))
                };
                (n, b)
            })
            .collect()
    }

    /// Homology dims as plain numbers for degrees that are determined.
    pub fn betti(&self) -> BTreeMap<i64, usize> {
        self.homology_dims().into_iter().filter_map(|(n, b)| b.dim().map(|d| (n, d))).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        (self.lo..=self.hi()).map(|n| if n % 2 == 0 { 1 } else { -1 } * self.dim(n) as i64).sum()
    }

    /// `C[k]_n = C_{n-k}`, differential multiplied by `(−1)^k`.
    pub fn shift(&self, k: i64) -> ChainComplex {
        let d = if k % 2 == 0 { self.d.clone() } else { self.d.iter().map(|m| m.neg()).collect() };
        ChainComplex { lo: self.lo + k, d, dims: self.dims.clone(), ..self.clone() }
    }

    /// Basis of `H_n` with a coordinate map for cycles.
    pub fn homology_basis(&self, n: i64) -> HomologyBasis {
        let dim = self.dim(n);
        let mut e = Echelon::tracked(self.field, dim);
        let mut tag = 0u32;
        if let Some(m) = self.diff(n + 1) {
            for c in m.columns() {
                e.insert(c.clone());
                tag += 1;
            }
        }
        let kernel = match self.diff(n) {
            Some(m) => m.kernel().basis,
            None => (0..dim).map(|i| vec![(i as u32, 1)]).collect(),
        };
        let mut reps = Vec::new();
        let mut rep_tags = Vec::new();
        for k in kernel {
            if e.insert(k.clone()) {
                reps.push(k);
                rep_tags.push(tag);
            }
            tag += 1;
        }
        HomologyBasis { degree: n, ambient: dim, reps, rep_tags, ech: e, field: self.field }
    }

    /// Canonical truncation, keeping homology on the retained side.
    pub fn truncate(&self, side: Side, n: i64) -> Result<ChainComplex> {
        Ok(self.truncate_with_map(side, n)?.0)
    }

    /// Truncation together with the comparison map: the inclusion into `self`
    /// for `AtOrAbove`, the projection from `self` for `AtOrBelow` (matrix in
    /// the edge degree; other degrees are identities).
    pub fn truncate_with_map(&self, side: Side, n: i64) -> Result<(ChainComplex, SparseMatrix)> {
        if n < self.lo || n > self.hi() {
            return Err(Error::Domain(format!(
                "truncation degree {n} outside window [{}, {}]",
                self.lo,
                self.hi()
            )));
        }
        let f = self.field;
        match side {
            Side::AtOrAbove => {
                if n == self.lo && self.open_below {
                    return Err(Error::IndeterminateTruncation(n));
                }
                let k = match self.diff(n) {
                    Some(m) => m.kernel(),
                    None => crate::linalg::Subspace {
                        ambient: self.dim(n),
                        basis: (0..self.dim(n)).map(|i| vec![(i as u32, 1)]).collect(),
                    },
                };
                let incl = k.matrix(f);
                let mut dims = vec![k.dim()];
                let mut d = Vec::new();
                if let Some(up) = self.diff(n + 1) {
                    d.push(solve_columns(&incl, up)?);
                }
                for m in (n + 1)..=self.hi() {
                    dims.push(self.dim(m));
                    if m < self.hi() {
                        d.push(self.diff(m + 1).unwrap().clone());
                    }
                }
                let mut c = ChainComplex::new(f, n, dims, d)?;
                c.open_above = self.open_above;
                Ok((c, incl))
            }
            Side::AtOrBelow => {
                if n == self.hi() && self.open_above {
                    return Err(Error::IndeterminateTruncation(n));
                }
                let dim = self.dim(n);
                let mut e = Echelon::new(f, dim);
                if let Some(m) = self.diff(n + 1) {
                    for c in m.columns() {
                        e.insert(c.clone());
                    }
                }
                // complement: unit vectors at non-pivot rows
                let keep: Vec<usize> = (0..dim).filter(|&i| !e.is_pivot(i)).collect();
                let mut pos = vec![u32::MAX; dim];
                for (a, &i) in keep.iter().enumerate() {
                    pos[i] = a as u32;
                }
                let proj_cols: Vec<SVec> = (0..dim)
                    .map(|i| {
                        let (r, _) = e.reduce_full(vec![(i as u32, 1)]);
                        r.into_iter().map(|(k, v)| (pos[k as usize], v)).collect()
                    })
                    .collect();
                let proj = SparseMatrix::from_cols(f, keep.len(), proj_cols)?;
                let mut dims = Vec::new();
                let mut d = Vec::new();
                for m in self.lo..n {
                    dims.push(self.dim(m));
                    if m > self.lo {
                        d.push(self.diff(m).unwrap().clone());
                    }
                }
                dims.push(keep.len());
                if let Some(down) = self.diff(n) {
                    d.push(down.select_cols(&keep));
                }
                let mut c = ChainComplex::new(f, self.lo, dims, d)?;
                c.open_below = self.open_below;
                Ok((c, proj))
            }
        }
    }

    /// Termwise direct sum on the union of the windows.
    pub fn direct_sum(&self, other: &ChainComplex) -> Result<ChainComplex> {
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        let mut b = Assembly::new(self.field);
        for (tag, c) in [(0u8, self), (1u8, other)] {
            for n in c.lo..=c.hi() {
                b.add_cell((tag, n), n, c.dim(n));
                if let Some(m) = c.diff(n) {
                    b.add_map(&(tag, n), &(tag, n - 1), m.clone())?;
                }
            }
        }
        let (mut out, _) = b.build(lo, hi)?;
        out.open_below = self.open_below || other.open_below;
        out.open_above = self.open_above || other.open_above;
        Ok(out)
    }

    /// Tensor product `a ⊗ b`, totalized with the Koszul sign on the second factor.
    pub fn tensor(a: &ChainComplex, b: &ChainComplex) -> Result<ChainComplex> {
        let mut m = Multicomplex::new(a.field, vec![a.lo, b.lo], vec![a.hi(), b.hi()]);
        for i in a.lo..=a.hi() {
            for j in b.lo..=b.hi() {
                m.set_dim(&[i, j], a.dim(i) * b.dim(j));
            }
        }
        for i in a.lo..=a.hi() {
            for j in b.lo..=b.hi() {
                if let Some(da) = a.diff(i) {
                    m.set_diff(0, &[i, j], da.kronecker(&SparseMatrix::identity(a.field, b.dim(j)))?)?;
                }
                if let Some(db) = b.diff(j) {
                    m.set_diff(1, &[i, j], SparseMatrix::identity(a.field, a.dim(i)).kronecker(db)?)?;
                }
            }
        }
        let mut t = m.totalize()?;
        t.open_below = a.open_below || b.open_below;
        t.open_above = a.open_above || b.open_above;
        Ok(t)
    }

    /// Cone of `f: C → D` (degree 0): `cone_n = D_n ⊕ C_{n−1}`,
    /// `d(y, x) = (d y + f x, −d x)`.
    pub fn cone(map: &ChainMap, src: &ChainComplex, tgt: &ChainComplex) -> Result<ChainComplex> {
        if map.degree != 0 {
            return Err(Error::Shape("cone needs a degree-0 chain map".into()));
        }
        let f = src.field;
        let neg1 = f.neg(1);
        let mut b = Assembly::new(f);
        for n in tgt.lo..=tgt.hi() {
            b.add_cell((0u8, n), n, tgt.dim(n));
            if let Some(m) = tgt.diff(n) {
                b.add_map(&(0, n), &(0, n - 1), m.clone())?;
            }
        }
        for n in src.lo..=src.hi() {
            b.add_cell((1u8, n), n + 1, src.dim(n));
            if let Some(m) = src.diff(n) {
                b.add_map(&(1, n), &(1, n - 1), m.scale(neg1))?;
            }
            if let Some(m) = map.maps.get(&n) {
                if tgt.dim(n) > 0 || m.nrows() == 0 {
                    b.add_map(&(1, n), &(0, n), m.clone())?;
                }
            }
        }
        let lo = tgt.lo.min(src.lo + 1);
        let hi = tgt.hi().max(src.hi() + 1);
        let (mut out, _) = b.build(lo, hi)?;
        out.open_below = src.open_below || tgt.open_below;
        out.open_above = src.open_above || tgt.open_above;
        Ok(out)
    }
}

/// A map of graded spaces `C_n → D_{n+degree}`, given on source degrees.
#[derive(Clone, Debug, Default)]
pub struct ChainMap {
    pub degree: i64,
    pub maps: BTreeMap<i64, SparseMatrix>,
}

impl ChainMap {
    pub fn new(degree: i64) -> Self {
        ChainMap { degree, maps: BTreeMap::new() }
    }

    /// Checks `d f = ε f d` on the overlap, with `ε = (−1)^degree`.
    pub fn check(&self, src: &ChainComplex, tgt: &ChainComplex) -> Result<()> {
        let f = src.field;
        let eps = f.sign(self.degree.rem_euclid(2) == 1);
        for (&n, m) in &self.maps {
            let lhs = tgt.diff(n + self.degree).map(|d| d.dot(m));
            let rhs = match (self.maps.get(&(n - 1)), src.diff(n)) {
                (Some(g), Some(d)) => Some(g.dot(d).scale(eps)),
                _ => None,
            };
            if let (Some(l), Some(r)) = (lhs, rhs) {
                if l != r {
                    return Err(Error::InvalidComplex { degree: n });
                }
            }
        }
        Ok(())
    }

    /// Matrix of the induced map `H_n(src) → H_{n+degree}(tgt)`.
    pub fn on_homology(&self, n: i64, src: &HomologyBasis, tgt: &HomologyBasis) -> SparseMatrix {
        let f = src.field;
        let cols = src
            .reps
            .iter()
            .map(|z| match self.maps.get(&n) {
                Some(m) => tgt.coords(&m.apply(z)),
                None => Vec::new(),
            })
            .collect();
        SparseMatrix::from_cols(f, tgt.dim(), cols).expect("coordinates are normalized")
    }
}

/// Representatives of `H_n` and a way to read off the class of a cycle.
#[derive(Clone, Debug)]
pub struct HomologyBasis {
    pub degree: i64,
    pub ambient: usize,
    pub reps: Vec<SVec>,
    rep_tags: Vec<u32>,
    ech: Echelon,
    field: Field,
}

impl HomologyBasis {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    /// Class of a cycle in the representative basis. Panics on non-cycles
    /// outside the span of cycles.
    pub fn coords(&self, z: &[(u32, u32)]) -> SVec {
        self.try_coords(z).expect("vector is not a cycle")
    }

    pub fn try_coords(&self, z: &[(u32, u32)]) -> Option<SVec> {
        let combo = self.ech.express(z)?;
        let mut out: Vec<(u32, i64)> = Vec::new();
        for (tag, v) in combo {
            if let Ok(i) = self.rep_tags.binary_search(&tag) {
                out.push((i as u32, v as i64));
            }
        }
        Some(svec_from(self.field, out))
    }
}

/// A graded collection of labelled blocks with maps between them, assembled
/// into one chain complex. Total complexes of all kinds are built this way.
pub struct Assembly<K: Ord + Clone> {
    field: Field,
    cells: BTreeMap<K, (i64, usize)>,
    maps: BTreeMap<(K, K), SparseMatrix>,
}

/// Where each block landed: degree and offset inside that degree's term.
#[derive(Clone, Debug)]
pub struct Layout<K: Ord> {
    pub place: BTreeMap<K, (i64, usize)>,
}

impl<K: Ord> Layout<K> {
    /// Embeds a block vector into the total term.
    pub fn embed(&self, k: &K, v: &[(u32, u32)]) -> SVec {
        let off = self.place[k].1 as u32;
        v.iter().map(|&(i, x)| (i + off, x)).collect()
    }
}

impl<K: Ord + Clone + fmt::Debug> Assembly<K> {
    pub fn new(field: Field) -> Self {
        Assembly { field, cells: BTreeMap::new(), maps: BTreeMap::new() }
    }

    pub fn add_cell(&mut self, k: K, degree: i64, dim: usize) {
        self.cells.insert(k, (degree, dim));
    }

    pub fn has_cell(&self, k: &K) -> bool {
        self.cells.contains_key(k)
    }

    pub fn cell(&self, k: &K) -> Option<(i64, usize)> {
        self.cells.get(k).copied()
    }

    pub fn cells(&self) -> impl Iterator<Item = (&K, &(i64, usize))> {
        self.cells.iter()
    }

    /// Adds `m` to the component `src → tgt`. Missing cells are ignored.
    pub fn add_map(&mut self, src: &K, tgt: &K, m: SparseMatrix) -> Result<()> {
        let (Some(&(ds, ns)), Some(&(dt, nt))) = (self.cells.get(src), self.cells.get(tgt)) else {
            return Ok(());
        };
        if ds != dt + 1 {
            return Err(Error::Shape(format!("component {src:?} → {tgt:?} is not of degree −1")));
        }
        if m.ncols() != ns || m.nrows() != nt {
            return Err(Error::Shape(format!(
                "component {src:?} → {tgt:?} is {}×{}, expected {nt}×{ns}",
                m.nrows(),
                m.ncols()
            )));
        }
        let key = (src.clone(), tgt.clone());
        let merged = match self.maps.remove(&key) {
            Some(old) => old.add(&m)?,
            None => m,
        };
        self.maps.insert(key, merged);
        Ok(())
    }

    pub fn layout(&self) -> Layout<K> {
        let mut off: BTreeMap<i64, usize> = BTreeMap::new();
        let mut place = BTreeMap::new();
        for (k, &(deg, dim)) in &self.cells {
            let o = off.entry(deg).or_insert(0);
            place.insert(k.clone(), (deg, *o));
            *o += dim;
        }
        Layout { place }
    }

    /// Builds the total complex on `[lo, hi]`; blocks outside are dropped.
    pub fn build(&self, lo: i64, hi: i64) -> Result<(ChainComplex, Layout<K>)> {
        let layout = self.layout();
        let mut dims = vec![0usize; (hi - lo + 1).max(0) as usize];
        for &(deg, dim) in self.cells.values() {
            if deg >= lo && deg <= hi {
                dims[(deg - lo) as usize] += dim;
            }
        }
        let mut cols: Vec<Vec<Vec<(u32, i64)>>> =
            dims.iter().skip(1).map(|&n| vec![Vec::new(); n]).collect();
        for ((s, t), m) in &self.maps {
            let (ds, os) = layout.place[s];
            let (_, ot) = layout.place[t];
            if ds <= lo || ds > hi {
                continue;
            }
            let target = &mut cols[(ds - lo - 1) as usize];
            for (j, c) in m.columns().iter().enumerate() {
                target[os + j].extend(c.iter().map(|&(i, v)| ((i as usize + ot) as u32, v as i64)));
            }
        }
        let f = self.field;
        let d = cols
            .into_iter()
            .enumerate()
            .map(|(k, cs)| {
                let cs = cs.into_iter().map(|c| svec_from(f, c)).collect();
                SparseMatrix::from_cols(f, dims[k], cs)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((ChainComplex::new(f, lo, dims, d)?, layout))
    }
}

/// Lattice-graded complex with one differential per axis. The supplied axis
/// differentials commute; totalization inserts the Koszul sign
/// `(−1)^(sum of degrees on earlier axes)`.
#[derive(Clone, Debug)]
pub struct Multicomplex {
    field: Field,
    lo: Vec<i64>,
    hi: Vec<i64>,
    dims: BTreeMap<Vec<i64>, usize>,
    diffs: BTreeMap<(usize, Vec<i64>), SparseMatrix>,
}

impl Multicomplex {
    pub fn new(field: Field, lo: Vec<i64>, hi: Vec<i64>) -> Self {
        assert_eq!(lo.len(), hi.len());
        Multicomplex { field, lo, hi, dims: BTreeMap::new(), diffs: BTreeMap::new() }
    }

    pub fn arity(&self) -> usize {
        self.lo.len()
    }

    fn in_box(&self, c: &[i64]) -> bool {
        c.iter().zip(&self.lo).zip(&self.hi).all(|((x, l), h)| x >= l && x <= h)
    }

    pub fn set_dim(&mut self, cell: &[i64], dim: usize) {
        assert!(self.in_box(cell), "cell {cell:?} outside the window");
        self.dims.insert(cell.to_vec(), dim);
    }

    pub fn dim(&self, cell: &[i64]) -> usize {
        self.dims.get(cell).copied().unwrap_or(0)
    }

    /// Differential along `axis` out of `cell`.
    pub fn set_diff(&mut self, axis: usize, cell: &[i64], m: SparseMatrix) -> Result<()> {
        let mut t = cell.to_vec();
        t[axis] -= 1;
        if m.ncols() != self.dim(cell) || m.nrows() != self.dim(&t) {
            return Err(Error::Shape(format!("axis {axis} differential at {cell:?} has wrong shape")));
        }
        self.diffs.insert((axis, cell.to_vec()), m);
        Ok(())
    }

    fn diff(&self, axis: usize, cell: &[i64]) -> Option<&SparseMatrix> {
        self.diffs.get(&(axis, cell.to_vec()))
    }

    /// Squares vanish and distinct axes commute.
    pub fn validate(&self) -> Result<()> {
        let step = |c: &[i64], a: usize| {
            let mut t = c.to_vec();
            t[a] -= 1;
            t
        };
        for c in self.dims.keys() {
            let total: i64 = c.iter().sum();
            for a in 0..self.arity() {
                let Some(da) = self.diff(a, c) else { continue };
                let ca = step(c, a);
                if let Some(da2) = self.diff(a, &ca) {
                    if !da2.dot(da).is_zero() {
                        return Err(Error::InvalidComplex { degree: total });
                    }
                }
                for b in (a + 1)..self.arity() {
                    let Some(db) = self.diff(b, c) else { continue };
                    let cb = step(c, b);
                    let lhs = self.diff(b, &ca).map(|m| m.dot(da));
                    let rhs = self.diff(a, &cb).map(|m| m.dot(db));
                    let ok = match (lhs, rhs) {
                        (Some(l), Some(r)) => l == r,
                        (Some(l), None) => l.is_zero(),
                        (None, Some(r)) => r.is_zero(),
                        (None, None) => true,
                    };
                    if !ok {
                        return Err(Error::InvalidComplex { degree: total });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn totalize(&self) -> Result<ChainComplex> {
        self.validate()?;
        let f = self.field;
        let mut b = Assembly::new(f);
        for (c, &dim) in &self.dims {
            b.add_cell(c.clone(), c.iter().sum(), dim);
        }
        for ((a, c), m) in &self.diffs {
            let earlier: i64 = c[..*a].iter().sum();
            let mut t = c.clone();
            t[*a] -= 1;
            let m = if earlier.rem_euclid(2) == 1 { m.neg() } else { m.clone() };
            b.add_map(c, &t, m)?;
        }
        let lo: i64 = self.lo.iter().sum();
        let hi: i64 = self.hi.iter().sum();
        Ok(b.build(lo, hi)?.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> Field {
        Field::new(p).unwrap()
    }

    /// The acyclic complex `k → k` (identity) in degrees 1 → 0.
    fn interval(fl: Field) -> ChainComplex {
        ChainComplex::new(fl, 0, vec![1, 1], vec![SparseMatrix::identity(fl, 1)]).unwrap()
    }

    #[test]
    fn identity_two_term_complex_is_acyclic() {
        let h = interval(f(3)).homology_dims();
        assert!(h.values().all(|b| *b == Betti::Dim(0)));
    }

    #[test]
    fn zero_differentials_give_term_dims() {
        let fl = f(5);
        let c = ChainComplex::new(
            fl,
            0,
            vec![2, 3, 1],
            vec![SparseMatrix::zero(fl, 2, 3), SparseMatrix::zero(fl, 3, 1)],
        )
        .unwrap();
        assert_eq!(c.betti().into_values().collect::<Vec<_>>(), vec![2, 3, 1]);
    }

    #[test]
    fn identity_then_zero() {
        // degrees 2 → 1 → 0 with maps id then 0
        let fl = f(2);
        let c = ChainComplex::new(
            fl,
            0,
            vec![1, 1, 1],
            vec![SparseMatrix::zero(fl, 1, 1), SparseMatrix::identity(fl, 1)],
        )
        .unwrap();
        assert_eq!(c.betti().into_values().collect::<Vec<_>>(), vec![1, 0, 0]);
    }

    #[test]
    fn square_nonzero_is_rejected() {
        let fl = f(2);
        let e = ChainComplex::new(
            fl,
            0,
            vec![1, 1, 1],
            vec![SparseMatrix::identity(fl, 1), SparseMatrix::identity(fl, 1)],
        );
        assert_eq!(e, Err(Error::InvalidComplex { degree: 1 }));
    }

    #[test]
    fn open_edges_are_indeterminate() {
        let fl = f(2);
        let c = ChainComplex::concentrated(fl, 0, 1).with_open_edges(false, true);
        assert_eq!(c.homology_dims()[&0], Betti::Indeterminate);
    }

    #[test]
    fn tensor_of_acyclic_is_acyclic() {
        let fl = f(3);
        let t = ChainComplex::tensor(&interval(fl), &interval(fl)).unwrap();
        assert_eq!((t.lo(), t.hi()), (0, 2));
        assert!(t.betti().values().all(|&d| d == 0));
    }

    #[test]
    fn single_lattice_entry_totalizes_to_one_term() {
        let fl = f(7);
        let mut m = Multicomplex::new(fl, vec![0, 0], vec![2, 3]);
        m.set_dim(&[1, 2], 4);
        let t = m.totalize().unwrap();
        assert_eq!(t.dim(3), 4);
        assert_eq!((0..=5).map(|n| t.dim(n)).sum::<usize>(), 4);
    }

    #[test]
    fn truncations_compose_to_single_degree() {
        let fl = f(2);
        // Tate-like periodic complex of k with zero maps, degrees -2..3
        let c = ChainComplex::new(
            fl,
            -2,
            vec![1; 6],
            (0..5).map(|_| SparseMatrix::zero(fl, 1, 1)).collect(),
        )
        .unwrap();
        let t = c.truncate(Side::AtOrAbove, 1).unwrap().truncate(Side::AtOrBelow, 1).unwrap();
        assert_eq!(t.betti(), BTreeMap::from([(1, 1)]));
    }

    #[test]
    fn cone_of_identity_is_acyclic() {
        let fl = f(3);
        let c = ChainComplex::new(
            fl,
            0,
            vec![2, 2],
            vec![SparseMatrix::from_dense(fl, &[vec![1, 0], vec![0, 0]])],
        )
        .unwrap();
        let mut id = ChainMap::new(0);
        for n in 0..=1 {
            id.maps.insert(n, SparseMatrix::identity(fl, 2));
        }
        id.check(&c, &c).unwrap();
        let cone = ChainComplex::cone(&id, &c, &c).unwrap();
        assert!(cone.betti().values().all(|&d| d == 0));
    }

    #[test]
    fn shift_moves_homology() {
        let fl = f(5);
        let c = ChainComplex::concentrated(fl, 2, 3);
        assert_eq!(c.shift(1).betti(), BTreeMap::from([(3, 3)]));
    }

    #[test]
    fn homology_coordinates() {
        let fl = f(3);
        // k^2 → k^2 with image spanned by (1,1): H_0 = k
        let c = ChainComplex::new(
            fl,
            0,
            vec![2, 2],
            vec![SparseMatrix::from_dense(fl, &[vec![1, 0], vec![1, 0]])],
        )
        .unwrap();
        let hb = c.homology_basis(0);
        assert_eq!(hb.dim(), 1);
        assert!(hb.coords(&[(0, 1), (1, 1)]).is_empty());
        assert_eq!(hb.coords(&[(0, 1), (1, 2)]).len(), 1);
    }
}
