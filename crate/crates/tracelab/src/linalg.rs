//! Sparse linear algebra over prime fields F_p.
//!
//! Matrices are stored column-wise. Elimination always pivots on the leftmost
//! column first and, inside a column, on the lowest row index carrying a
//! nonzero entry, so bases come out the same on every run.

use crate::error::{Error, Result};

/// A sparse vector: strictly increasing indices, residues in `1..p`.
pub type SVec = Vec<(u32, u32)>;

/// Column count at or below which elimination runs on dense columns.
pub const DENSE_COLS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Field {
    p: u32,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn new(p: u64) -> Result<Field> {
        if p >= 1 << 31 || !is_prime(p) {
            return Err(Error::Validation(format!("p = {p} is not a prime below 2^31")));
        }
        Ok(Field { p: p as u32 })
    }

    #[inline]
    pub fn p(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.p as u64 - b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn pow(self, mut a: u32, mut e: u64) -> u32 {
        let mut r = 1u32 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    pub fn inv(self, a: u32) -> u32 {
        assert!(!a.is_multiple_of(self.p), "inverse of zero in F_{}", self.p);
        self.pow(a, self.p as u64 - 2)
    }

    #[inline]
    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.p as i64) as u32
    }

    /// Residue of ±1: `sign(true) = -1`.
    #[inline]
    pub fn sign(self, negative: bool) -> u32 {
        if negative {
            self.neg(1 % self.p)
        } else {
            1 % self.p
        }
    }
}

/// `y + c·x`.
pub fn axpy(f: Field, y: &[(u32, u32)], c: u32, x: &[(u32, u32)]) -> SVec {
    if c == 0 {
        return y.to_vec();
    }
    let mut out = Vec::with_capacity(y.len() + x.len());
    let (mut i, mut j) = (0, 0);
    while i < y.len() && j < x.len() {
        let (a, b) = (y[i], x[j]);
        if a.0 < b.0 {
            out.push(a);
            i += 1;
        } else if b.0 < a.0 {
            out.push((b.0, f.mul(c, b.1)));
            j += 1;
        } else {
            let v = f.add(a.1, f.mul(c, b.1));
            if v != 0 {
                out.push((a.0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out.extend_from_slice(&y[i..]);
    out.extend(x[j..].iter().map(|&(k, v)| (k, f.mul(c, v))));
    out
}

pub fn scale(f: Field, c: u32, x: &[(u32, u32)]) -> SVec {
    if c == 0 {
        return Vec::new();
    }
    x.iter().map(|&(k, v)| (k, f.mul(c, v))).collect()
}

/// Builds a sparse vector from unsorted `(index, integer)` pairs, summing repeats.
pub fn svec_from(f: Field, mut items: Vec<(u32, i64)>) -> SVec {
    items.sort_unstable_by_key(|e| e.0);
    let mut out: SVec = Vec::with_capacity(items.len());
    let mut acc: i64 = 0;
    let mut cur: Option<u32> = None;
    for (k, v) in items {
        if cur != Some(k) {
            if let Some(c) = cur {
                let r = f.reduce(acc);
                if r != 0 {
                    out.push((c, r));
                }
            }
            cur = Some(k);
            acc = 0;
        }
        acc = (acc + v).rem_euclid(f.p as i64);
    }
    if let Some(c) = cur {
        let r = f.reduce(acc);
        if r != 0 {
            out.push((c, r));
        }
    }
    out
}

/// Dense accumulator used by matrix products and repeated vector sums.
pub struct Accumulator {
    f: Field,
    vals: Vec<u64>,
    touched: Vec<u32>,
    seen: Vec<bool>,
}

impl Accumulator {
    pub fn new(f: Field, dim: usize) -> Self {
        Accumulator { f, vals: vec![0; dim], touched: Vec::new(), seen: vec![false; dim] }
    }

    #[inline]
    pub fn add(&mut self, k: u32, v: u32) {
        let i = k as usize;
        if !self.seen[i] {
            self.seen[i] = true;
            self.touched.push(k);
        }
        self.vals[i] = (self.vals[i] + v as u64) % self.f.p as u64;
    }

    pub fn add_scaled(&mut self, c: u32, x: &[(u32, u32)]) {
        if c == 0 {
            return;
        }
        for &(k, v) in x {
            self.add(k, self.f.mul(c, v));
        }
    }

    /// Drains into a sparse vector and resets.
    pub fn take(&mut self) -> SVec {
        self.touched.sort_unstable();
        let mut out = Vec::with_capacity(self.touched.len());
        for &k in &self.touched {
            let i = k as usize;
            let v = self.vals[i] as u32;
            if v != 0 {
                out.push((k, v));
            }
            self.vals[i] = 0;
            self.seen[i] = false;
        }
        self.touched.clear();
        out
    }
}

/// Rectangular matrix over F_p, stored by columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    field: Field,
    rows: usize,
    cols: Vec<SVec>,
}

/// Rank, kernel and image of a matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankKernelImage {
    pub rank: usize,
    pub kernel: Subspace,
    pub image: Subspace,
}

/// A subspace of F_p^ambient given by an independent basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    pub ambient: usize,
    pub basis: Vec<SVec>,
}

impl Subspace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Basis vectors as the columns of an `ambient × dim` matrix.
    pub fn matrix(&self, f: Field) -> SparseMatrix {
        SparseMatrix { field: f, rows: self.ambient, cols: self.basis.clone() }
    }
}

impl SparseMatrix {
    pub fn zero(field: Field, rows: usize, cols: usize) -> Self {
        SparseMatrix { field, rows, cols: vec![Vec::new(); cols] }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        Self::scalar(field, n, 1)
    }

    pub fn scalar(field: Field, n: usize, c: u32) -> Self {
        let c = c % field.p;
        let cols = (0..n).map(|i| if c == 0 { vec![] } else { vec![(i as u32, c)] }).collect();
        SparseMatrix { field, rows: n, cols }
    }

    /// Accepts integer entries; repeated positions are summed.
    pub fn from_triplets(
        field: Field,
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, i64)>,
    ) -> Result<Self> {
        let mut per_col: Vec<Vec<(u32, i64)>> = vec![Vec::new(); cols];
        for (r, c, v) in entries {
            if r >= rows || c >= cols {
                return Err(Error::MalformedMatrix(format!(
                    "entry ({r}, {c}) outside a {rows}×{cols} matrix"
                )));
            }
            per_col[c].push((r as u32, v));
        }
        let cols = per_col.into_iter().map(|c| svec_from(field, c)).collect();
        Ok(SparseMatrix { field, rows, cols })
    }

    /// Columns must already be normalized sparse vectors.
    pub fn from_cols(field: Field, rows: usize, cols: Vec<SVec>) -> Result<Self> {
        for (j, c) in cols.iter().enumerate() {
            let mut last: Option<u32> = None;
            for &(r, v) in c {
                if r as usize >= rows || v == 0 || v >= field.p || last.is_some_and(|l| l >= r) {
                    return Err(Error::MalformedMatrix(format!("bad entry ({r}, {j}) = {v}")));
                }
                last = Some(r);
            }
        }
        Ok(SparseMatrix { field, rows, cols })
    }

    /// Row-major integer rows.
    pub fn from_dense(field: Field, data: &[Vec<i64>]) -> Self {
        let rows = data.len();
        let cols = data.first().map_or(0, |r| r.len());
        let trip = data
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().enumerate().map(move |(j, &v)| (i, j, v)));
        Self::from_triplets(field, rows, cols, trip).expect("dense data is in range")
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn col(&self, j: usize) -> &SVec {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[SVec] {
        &self.cols
    }

    pub fn into_columns(self) -> Vec<SVec> {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        match self.cols[j].binary_search_by_key(&(i as u32), |e| e.0) {
            Ok(k) => self.cols[j][k].1,
            Err(_) => 0,
        }
    }

    /// `(row, col, value)` sorted by column then row.
    pub fn triplets(&self) -> Vec<(usize, usize, u32)> {
        self.cols
            .iter()
            .enumerate()
            .flat_map(|(j, c)| c.iter().map(move |&(i, v)| (i as usize, j, v)))
            .collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<u32>> {
        let mut out = vec![vec![0; self.ncols()]; self.rows];
        for (i, j, v) in self.triplets() {
            out[i][j] = v;
        }
        out
    }

    fn same_field(&self, other: &SparseMatrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::IncompatibleField(self.field.p, other.field.p));
        }
        Ok(())
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut per_row: Vec<SVec> = vec![Vec::new(); self.rows];
        for (j, c) in self.cols.iter().enumerate() {
            for &(i, v) in c {
                per_row[i as usize].push((j as u32, v));
            }
        }
        SparseMatrix { field: self.field, rows: self.ncols(), cols: per_row }
    }

    pub fn apply(&self, x: &[(u32, u32)]) -> SVec {
        let mut acc = Accumulator::new(self.field, self.rows);
        for &(k, v) in x {
            acc.add_scaled(v, &self.cols[k as usize]);
        }
        acc.take()
    }

    /// `self · other`.
    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        self.same_field(other)?;
        if self.ncols() != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}×{} by {}×{}",
                self.rows,
                self.ncols(),
                other.rows,
                other.ncols()
            )));
        }
        let mut acc = Accumulator::new(self.field, self.rows);
        let cols = other
            .cols
            .iter()
            .map(|c| {
                for &(k, v) in c {
                    acc.add_scaled(v, &self.cols[k as usize]);
                }
                acc.take()
            })
            .collect();
        Ok(SparseMatrix { field: self.field, rows: self.rows, cols })
    }

    /// Panicking product for internal use where shapes are known.
    pub fn dot(&self, other: &SparseMatrix) -> SparseMatrix {
        self.mul(other).expect("compatible shapes")
    }

    pub fn add(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        self.add_scaled(1, other)
    }

    pub fn sub(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        self.add_scaled(self.field.neg(1), other)
    }

    /// `self + c·other`.
    pub fn add_scaled(&self, c: u32, other: &SparseMatrix) -> Result<SparseMatrix> {
        self.same_field(other)?;
        if self.rows != other.rows || self.ncols() != other.ncols() {
            return Err(Error::Shape(format!(
                "cannot add {}×{} and {}×{}",
                self.rows,
                self.ncols(),
                other.rows,
                other.ncols()
            )));
        }
        let cols =
            self.cols.iter().zip(&other.cols).map(|(a, b)| axpy(self.field, a, c, b)).collect();
        Ok(SparseMatrix { field: self.field, rows: self.rows, cols })
    }

    pub fn scale(&self, c: u32) -> SparseMatrix {
        let cols = self.cols.iter().map(|col| scale(self.field, c % self.field.p, col)).collect();
        SparseMatrix { field: self.field, rows: self.rows, cols }
    }

    pub fn neg(&self) -> SparseMatrix {
        self.scale(self.field.neg(1))
    }

    pub fn pow(&self, e: u64) -> SparseMatrix {
        assert_eq!(self.rows, self.ncols(), "power of a non-square matrix");
        let mut r = SparseMatrix::identity(self.field, self.rows);
        for _ in 0..e {
            r = self.dot(&r);
        }
        r
    }

    /// Block matrix `(a_ij · b)`; rows of `a ⊗ b` are indexed `i·rows(b) + k`.
    pub fn kronecker(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        self.same_field(other)?;
        let f = self.field;
        let br = other.rows;
        let mut cols = Vec::with_capacity(self.ncols() * other.ncols());
        for a in &self.cols {
            for b in &other.cols {
                let mut col = Vec::with_capacity(a.len() * b.len());
                for &(i, x) in a {
                    for &(k, y) in b {
                        col.push(((i as usize * br + k as usize) as u32, f.mul(x, y)));
                    }
                }
                cols.push(col);
            }
        }
        Ok(SparseMatrix { field: f, rows: self.rows * br, cols })
    }

    pub fn hstack(parts: &[&SparseMatrix]) -> Result<SparseMatrix> {
        let first = parts.first().ok_or_else(|| Error::Shape("empty hstack".into()))?;
        let mut cols = Vec::new();
        for m in parts {
            first.same_field(m)?;
            if m.rows != first.rows {
                return Err(Error::Shape("hstack row mismatch".into()));
            }
            cols.extend(m.cols.iter().cloned());
        }
        Ok(SparseMatrix { field: first.field, rows: first.rows, cols })
    }

    pub fn vstack(parts: &[&SparseMatrix]) -> Result<SparseMatrix> {
        let first = parts.first().ok_or_else(|| Error::Shape("empty vstack".into()))?;
        let n = first.ncols();
        let mut cols: Vec<SVec> = vec![Vec::new(); n];
        let mut off = 0u32;
        for m in parts {
            first.same_field(m)?;
            if m.ncols() != n {
                return Err(Error::Shape("vstack column mismatch".into()));
            }
            for (j, c) in m.cols.iter().enumerate() {
                cols[j].extend(c.iter().map(|&(i, v)| (i + off, v)));
            }
            off += m.rows as u32;
        }
        Ok(SparseMatrix { field: first.field, rows: off as usize, cols })
    }

    /// Keeps the listed columns, in order.
    pub fn select_cols(&self, idx: &[usize]) -> SparseMatrix {
        SparseMatrix {
            field: self.field,
            rows: self.rows,
            cols: idx.iter().map(|&j| self.cols[j].clone()).collect(),
        }
    }

    /// Keeps the listed rows, renumbered in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> SparseMatrix {
        let mut map = vec![u32::MAX; self.rows];
        for (new, &old) in idx.iter().enumerate() {
            map[old] = new as u32;
        }
        let cols = self
            .cols
            .iter()
            .map(|c| {
                let mut v: SVec = c
                    .iter()
                    .filter(|e| map[e.0 as usize] != u32::MAX)
                    .map(|&(i, x)| (map[i as usize], x))
                    .collect();
                v.sort_unstable_by_key(|e| e.0);
                v
            })
            .collect();
        SparseMatrix { field: self.field, rows: idx.len(), cols }
    }

    pub fn rank(&self) -> usize {
        if self.ncols() <= DENSE_COLS && self.rows <= 4096 {
            return dense_elimination(self, false).rank;
        }
        let mut e = Echelon::new(self.field, self.rows);
        for c in &self.cols {
            e.insert(c.clone());
        }
        e.len()
    }

    /// Rank, kernel basis (one vector per non-pivot column) and image basis
    /// (the pivot columns themselves).
    pub fn rank_kernel_image(&self) -> RankKernelImage {
        let out = if self.ncols() <= DENSE_COLS && self.rows <= 4096 {
            dense_elimination(self, true)
        } else {
            sparse_elimination(self, true)
        };
        debug_assert_eq!(out.rank + out.kernel.dim(), self.ncols(), "rank-nullity");
        out
    }

    pub fn kernel(&self) -> Subspace {
        self.rank_kernel_image().kernel
    }
}

/// The elimination shared by both paths: columns left to right, each reduced
/// against earlier pivots at its lowest nonzero row.
pub(crate) fn sparse_elimination(m: &SparseMatrix, track: bool) -> RankKernelImage {
    let f = m.field;
    let mut pivot_of_row: Vec<u32> = vec![u32::MAX; m.rows];
    let mut vecs: Vec<SVec> = Vec::new();
    let mut combos: Vec<SVec> = Vec::new();
    let mut kernel = Vec::new();
    let mut image = Vec::new();
    for (j, col) in m.cols.iter().enumerate() {
        let mut v = col.clone();
        let mut combo: SVec = if track { vec![(j as u32, 1)] } else { Vec::new() };
        loop {
            let Some(&(r, c)) = v.first() else {
                if track {
                    kernel.push(combo);
                }
                break;
            };
            let k = pivot_of_row[r as usize];
            if k == u32::MAX {
                let inv = f.inv(c);
                pivot_of_row[r as usize] = vecs.len() as u32;
                vecs.push(scale(f, inv, &v));
                if track {
                    combos.push(scale(f, inv, &combo));
                }
                image.push(col.clone());
                break;
            }
            let neg = f.neg(c);
            v = axpy(f, &v, neg, &vecs[k as usize]);
            if track {
                combo = axpy(f, &combo, neg, &combos[k as usize]);
            }
        }
    }
    for k in kernel.iter_mut() {
        k.sort_unstable_by_key(|e| e.0);
    }
    RankKernelImage {
        rank: vecs.len(),
        kernel: Subspace { ambient: m.ncols(), basis: kernel },
        image: Subspace { ambient: m.rows, basis: image },
    }
}

fn dense_elimination(m: &SparseMatrix, track: bool) -> RankKernelImage {
    let f = m.field;
    let (rows, ncols) = (m.rows, m.ncols());
    let mut pivot_of_row: Vec<usize> = vec![usize::MAX; rows];
    let mut vecs: Vec<Vec<u32>> = Vec::new();
    let mut combos: Vec<Vec<u32>> = Vec::new();
    let mut kernel = Vec::new();
    let mut image = Vec::new();
    let to_sparse = |d: &[u32]| -> SVec {
        d.iter().enumerate().filter(|e| *e.1 != 0).map(|(i, &v)| (i as u32, v)).collect()
    };
    for (j, col) in m.cols.iter().enumerate() {
        let mut v = vec![0u32; rows];
        for &(i, x) in col {
            v[i as usize] = x;
        }
        let mut combo = vec![0u32; if track { ncols } else { 0 }];
        if track {
            combo[j] = 1;
        }
        let mut start = 0;
        loop {
            let Some(r) = (start..rows).find(|&i| v[i] != 0) else {
                if track {
                    kernel.push(to_sparse(&combo));
                }
                break;
            };
            start = r;
            let c = v[r];
            let k = pivot_of_row[r];
            if k == usize::MAX {
                let inv = f.inv(c);
                pivot_of_row[r] = vecs.len();
                vecs.push(v.iter().map(|&x| f.mul(x, inv)).collect());
                if track {
                    combos.push(combo.iter().map(|&x| f.mul(x, inv)).collect());
                }
                image.push(col.clone());
                break;
            }
            let neg = f.neg(c);
            for (x, &y) in v.iter_mut().zip(&vecs[k]).skip(r) {
                *x = f.add(*x, f.mul(neg, y));
            }
            if track {
                for (x, &y) in combo.iter_mut().zip(&combos[k]) {
                    *x = f.add(*x, f.mul(neg, y));
                }
            }
        }
    }
    RankKernelImage {
        rank: vecs.len(),
        kernel: Subspace { ambient: ncols, basis: kernel },
        image: Subspace { ambient: rows, basis: image },
    }
}

/// Incremental echelon basis. Every stored vector has a distinct pivot (its
/// lowest index) normalized to 1. With tracking on, each stored vector also
/// remembers how it was combined from the inserted vectors, so membership
/// tests can return coordinates.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    dim: usize,
    pivot_of: Vec<u32>,
    vecs: Vec<SVec>,
    combos: Option<Vec<SVec>>,
    inserted: usize,
}

impl Echelon {
    pub fn new(field: Field, dim: usize) -> Self {
        Echelon { field, dim, pivot_of: vec![u32::MAX; dim], vecs: Vec::new(), combos: None, inserted: 0 }
    }

    pub fn tracked(field: Field, dim: usize) -> Self {
        Echelon { combos: Some(Vec::new()), ..Echelon::new(field, dim) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vecs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vecs.is_empty()
    }

    /// Pivot rows in insertion order of the surviving vectors.
    pub fn pivots(&self) -> Vec<usize> {
        self.vecs.iter().map(|v| v[0].0 as usize).collect()
    }

    pub fn is_pivot(&self, row: usize) -> bool {
        self.pivot_of[row] != u32::MAX
    }

    /// Reduces at the lowest index until it is not a pivot; returns the
    /// remainder and (if tracking) the combination that was subtracted.
    fn reduce_low(&self, mut v: SVec) -> (SVec, SVec) {
        let f = self.field;
        let mut combo = Vec::new();
        while let Some(&(r, c)) = v.first() {
            let k = self.pivot_of[r as usize];
            if k == u32::MAX {
                break;
            }
            v = axpy(f, &v, f.neg(c), &self.vecs[k as usize]);
            if let Some(cs) = &self.combos {
                combo = axpy(f, &combo, c, &cs[k as usize]);
            }
        }
        (v, combo)
    }

    /// Eliminates every pivot index; the remainder is a canonical
    /// representative of `v` modulo the span.
    pub fn reduce_full(&self, mut v: SVec) -> (SVec, SVec) {
        let f = self.field;
        let mut combo = Vec::new();
        let mut i = 0;
        while i < v.len() {
            let (r, c) = v[i];
            let k = self.pivot_of[r as usize];
            if k == u32::MAX {
                i += 1;
                continue;
            }
            v = axpy(f, &v, f.neg(c), &self.vecs[k as usize]);
            if let Some(cs) = &self.combos {
                combo = axpy(f, &combo, c, &cs[k as usize]);
            }
        }
        (v, combo)
    }

    /// Adds `v`; returns whether it was independent of the current span.
    /// Every call counts as an insertion for the purpose of coordinates.
    pub fn insert(&mut self, v: SVec) -> bool {
        let tag = self.inserted as u32;
        self.inserted += 1;
        let (rem, combo) = self.reduce_low(v);
        let Some(&(r, c)) = rem.first() else {
            return false;
        };
        let f = self.field;
        let inv = f.inv(c);
        self.pivot_of[r as usize] = self.vecs.len() as u32;
        self.vecs.push(scale(f, inv, &rem));
        if let Some(cs) = &mut self.combos {
            // rem = v - combo, with v the inserted vector number `tag`
            let mut own = scale(f, f.neg(1), &combo);
            own = axpy(f, &own, 1, &[(tag, 1)]);
            cs.push(scale(f, inv, &own));
        }
        true
    }

    pub fn contains(&self, v: &[(u32, u32)]) -> bool {
        self.reduce_low(v.to_vec()).0.is_empty()
    }

    /// Coordinates of `v` in terms of the inserted vectors (by insertion
    /// number), or `None` if `v` is outside the span. Needs tracking.
    pub fn express(&self, v: &[(u32, u32)]) -> Option<SVec> {
        assert!(self.combos.is_some(), "express needs a tracked basis");
        let (rem, combo) = self.reduce_low(v.to_vec());
        rem.is_empty().then_some(combo)
    }
}

/// Coordinates `X` with `basis · X = m`, for `basis` with independent columns
/// and every column of `m` in their span.
pub fn solve_columns(basis: &SparseMatrix, m: &SparseMatrix) -> Result<SparseMatrix> {
    let f = basis.field();
    let mut e = Echelon::tracked(f, basis.nrows());
    for c in basis.columns() {
        if !e.insert(c.clone()) {
            return Err(Error::Shape("basis columns are dependent".into()));
        }
    }
    let cols = m
        .columns()
        .iter()
        .map(|c| e.express(c).ok_or_else(|| Error::Shape("column outside the span".into())))
        .collect::<Result<Vec<_>>>()?;
    SparseMatrix::from_cols(f, basis.ncols(), cols)
}

/// Helpers for writing `n × n` permutation-like matrices from index maps.
pub fn matrix_from_map(
    field: Field,
    rows: usize,
    cols: usize,
    mut image: impl FnMut(usize) -> Vec<(usize, i64)>,
) -> SparseMatrix {
    let cols_v = (0..cols)
        .map(|j| svec_from(field, image(j).into_iter().map(|(i, v)| (i as u32, v)).collect()))
        .collect();
    let m = SparseMatrix { field, rows, cols: cols_v };
    debug_assert!(m.cols.iter().all(|c| c.iter().all(|e| (e.0 as usize) < rows)));
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> Field {
        Field::new(p).unwrap()
    }

    #[test]
    fn rejects_composites_and_large_moduli() {
        assert!(Field::new(4).is_err());
        assert!(Field::new(1).is_err());
        assert!(Field::new((1 << 31) + 11).is_err());
        assert!(Field::new(2_147_483_647).is_ok());
    }

    #[test]
    fn identity_has_full_rank() {
        let r = SparseMatrix::identity(f(5), 3).rank_kernel_image();
        assert_eq!((r.rank, r.kernel.dim(), r.image.dim()), (3, 0, 3));
    }

    #[test]
    fn all_ones_over_f2() {
        let m = SparseMatrix::from_dense(f(2), &[vec![1, 1], vec![1, 1]]);
        let r = m.rank_kernel_image();
        assert_eq!(r.rank, 1);
        assert_eq!(r.kernel.basis, vec![vec![(0, 1), (1, 1)]]);
    }

    #[test]
    fn out_of_range_entry_is_malformed() {
        let e = SparseMatrix::from_triplets(f(3), 2, 2, [(2, 0, 1)]);
        assert!(matches!(e, Err(Error::MalformedMatrix(_))));
    }

    #[test]
    fn kronecker_of_identities() {
        let a = SparseMatrix::identity(f(7), 2);
        let b = SparseMatrix::identity(f(7), 3);
        assert_eq!(a.kronecker(&b).unwrap(), SparseMatrix::identity(f(7), 6));
    }

    #[test]
    fn kronecker_with_zero() {
        let z = SparseMatrix::zero(f(3), 1, 1);
        let m = SparseMatrix::from_dense(f(3), &[vec![1, 2, 0], vec![0, 1, 1]]);
        let k = z.kronecker(&m).unwrap();
        assert_eq!((k.nrows(), k.ncols()), (2, 3));
        assert!(k.is_zero());
    }

    #[test]
    fn kronecker_field_mismatch() {
        let a = SparseMatrix::identity(f(2), 1);
        let b = SparseMatrix::identity(f(3), 1);
        assert_eq!(a.kronecker(&b), Err(Error::IncompatibleField(2, 3)));
    }

    #[test]
    fn echelon_expresses_coordinates() {
        let fl = f(5);
        let mut e = Echelon::tracked(fl, 3);
        assert!(e.insert(vec![(0, 1), (1, 2)]));
        assert!(e.insert(vec![(1, 1), (2, 1)]));
        assert!(!e.insert(vec![(0, 2), (1, 4)]));
        // 3·v0 + 4·v1 = (3, 6+4, 4) = (3, 0, 4)
        let c = e.express(&[(0, 3), (2, 4)]).unwrap();
        assert_eq!(c, vec![(0, 3), (1, 4)]);
        assert!(e.express(&[(2, 1)]).is_none());
    }

    #[test]
    fn full_reduction_is_canonical() {
        let fl = f(3);
        let mut e = Echelon::new(fl, 4);
        e.insert(vec![(1, 1), (3, 2)]);
        let (a, _) = e.reduce_full(vec![(0, 1), (1, 2)]);
        let (b, _) = e.reduce_full(vec![(0, 1), (3, 2)]);
        assert_eq!(a, b);
    }
}
