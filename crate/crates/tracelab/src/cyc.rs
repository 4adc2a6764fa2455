//! Simplicial and cyclic modules.
//!
//! A cyclic module stores its faces, degeneracies and the signed cyclic
//! operator `T_n = (−1)^n t_n`, the one that acts on `A^{⊗(n+1)}` by rotating
//! factors with sign `(−1)^n`. In these terms the cyclic identities read
//!
//! ```text
//! d_0 T = (−1)^n d_n,   d_i T = −T d_{i−1},   s_0 T = (−1)^n T² s_n,   s_i T = −T s_{i−1}
//! ```
//!
//! and `T^{p(n+1)} = 1`, with `p = 1` for cyclic modules and `p > 1` for the
//! edgewise subdivisions, whose Z/p generator is `T^{n+1}`.
//!
//! Cyclic homology is computed two ways: from the `(b, −b′; 1 − T, N)`
//! bicomplex, and from the mixed complex on the degenerate quotient with
//! `B = (1 − T)·s·N`, `s = (−1)^{n+1} T s_n` the extra degeneracy.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::chains::{Assembly, Betti, ChainComplex, ChainMap, HomologyBasis, Layout};
use crate::error::{Error, Result};
use crate::linalg::{Echelon, Field, SVec, SparseMatrix};

/// A monotone map `[n] → [m]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaMap {
    n: usize,
    m: usize,
    values: Vec<usize>,
}

impl DeltaMap {
    pub fn new(n: usize, m: usize, values: Vec<usize>) -> Result<Self> {
        if values.len() != n + 1 || values.iter().any(|&v| v > m) || values.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Domain(format!("{values:?} is not a monotone map [{n}] → [{m}]")));
        }
        Ok(DeltaMap { n, m, values })
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DeltaFlags {
    pub special: bool,
    pub antispecial: bool,
    pub bispecial: bool,
    pub anchor: bool,
    pub left_anchor: bool,
    pub right_anchor: bool,
    pub surjective: bool,
    pub injective: bool,
}

/// Special: `f(0) = 0`; antispecial: `f(n) = m`; anchor: `[n]` goes onto a
/// segment of `[m]`, a left anchor onto an initial one, a right anchor onto
/// a final one.
pub fn classify_delta_map(f: &DeltaMap) -> DeltaFlags {
    let v = &f.values;
    let special = v[0] == 0;
    let antispecial = v[f.n] == f.m;
    let anchor = v.windows(2).all(|w| w[1] == w[0] + 1);
    let injective = v.windows(2).all(|w| w[1] > w[0]);
    let surjective = special && antispecial && v.windows(2).all(|w| w[1] <= w[0] + 1);
    DeltaFlags {
        special,
        antispecial,
        bispecial: special && antispecial,
        anchor,
        left_anchor: anchor && special,
        right_anchor: anchor && antispecial,
        surjective,
        injective,
    }
}

/// Faces `d_0..d_n` from degree `n ≥ 1` and degeneracies `s_0..s_n` from
/// degree `n < bound`, on degrees `0..=bound`.
#[derive(Clone, Debug)]
pub struct SimplicialModule {
    field: Field,
    dims: Vec<usize>,
    faces: Vec<Vec<SparseMatrix>>,
    degens: Vec<Vec<SparseMatrix>>,
}

fn check_eq(a: &SparseMatrix, b: &SparseMatrix, what: impl FnOnce() -> String) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::Validation(what()))
    }
}

impl SimplicialModule {
    /// Checks shapes and every simplicial identity.
    pub fn new(
        field: Field,
        dims: Vec<usize>,
        faces: Vec<Vec<SparseMatrix>>,
        degens: Vec<Vec<SparseMatrix>>,
    ) -> Result<Self> {
        let s = SimplicialModule { field, dims, faces, degens };
        s.check_shapes()?;
        s.check_identities()?;
        Ok(s)
    }

    fn check_shapes(&self) -> Result<()> {
        let nb = self.dims.len();
        if nb == 0 || self.faces.len() != nb || self.degens.len() != nb {
            return Err(Error::Shape("faces and degeneracies must be listed for every degree".into()));
        }
        for n in 0..nb {
            let want = if n == 0 { 0 } else { n + 1 };
            if self.faces[n].len() != want {
                return Err(Error::Shape(format!("degree {n} needs {want} faces")));
            }
            for m in &self.faces[n] {
                if m.nrows() != self.dims[n - 1] || m.ncols() != self.dims[n] || m.field() != self.field {
                    return Err(Error::Shape(format!("face out of degree {n} has the wrong shape")));
                }
            }
            let want = if n + 1 < nb { n + 1 } else { 0 };
            if self.degens[n].len() != want {
                return Err(Error::Shape(format!("degree {n} needs {want} degeneracies")));
            }
            for m in &self.degens[n] {
                if m.nrows() != self.dims[n + 1] || m.ncols() != self.dims[n] || m.field() != self.field {
                    return Err(Error::Shape(format!("degeneracy out of degree {n} has the wrong shape")));
                }
            }
        }
        Ok(())
    }

    fn check_identities(&self) -> Result<()> {
        let nb = self.dims.len();
        (0..nb).into_par_iter().try_for_each(|n| -> Result<()> {
            let d = |n: usize, i: usize| &self.faces[n][i];
            let s = |n: usize, i: usize| &self.degens[n][i];
            // d_i d_j = d_{j−1} d_i, i < j, out of degree n
            if n >= 2 {
                for j in 0..=n {
                    for i in 0..j {
                        check_eq(&d(n - 1, i).dot(d(n, j)), &d(n - 1, j - 1).dot(d(n, i)), || {
                            format!("d_{i} d_{j} ≠ d_{} d_{i} in degree {n}", j - 1)
                        })?;
                    }
                }
            }
            // s_i s_j = s_{j+1} s_i, i ≤ j, out of degree n
            if n + 2 < nb {
                for j in 0..=n {
                    for i in 0..=j {
                        check_eq(&s(n + 1, i).dot(s(n, j)), &s(n + 1, j + 1).dot(s(n, i)), || {
                            format!("s_{i} s_{j} ≠ s_{} s_{i} in degree {n}", j + 1)
                        })?;
                    }
                }
            }
            // d_i s_j out of degree n
            if n + 1 < nb {
                let id = SparseMatrix::identity(self.field, self.dims[n]);
                for j in 0..=n {
                    for i in 0..=n + 1 {
                        let lhs = d(n + 1, i).dot(s(n, j));
                        let rhs = if i < j {
                            s(n - 1, j - 1).dot(d(n, i))
                        } else if i == j || i == j + 1 {
                            id.clone()
                        } else {
                            s(n - 1, j).dot(d(n, i - 1))
                        };
                        check_eq(&lhs, &rhs, || format!("d_{i} s_{j} identity fails in degree {n}"))?;
                    }
                }
            }
            Ok(())
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn bound(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dim(&self, n: usize) -> usize {
        self.dims[n]
    }

    pub fn face(&self, n: usize, i: usize) -> &SparseMatrix {
        &self.faces[n][i]
    }

    pub fn degen(&self, n: usize, i: usize) -> &SparseMatrix {
        &self.degens[n][i]
    }

    /// Constant simplicial module with value `k^dim`.
    pub fn constant(field: Field, dim: usize, bound: usize) -> Self {
        let id = SparseMatrix::identity(field, dim);
        let faces = (0..=bound).map(|n| if n == 0 { vec![] } else { vec![id.clone(); n + 1] }).collect();
        let degens = (0..=bound).map(|n| if n < bound { vec![id.clone(); n + 1] } else { vec![] }).collect();
        SimplicialModule { field, dims: vec![dim; bound + 1], faces, degens }
    }

    /// `b = Σ (−1)^i d_i` out of degree `n`, optionally without the last face (`b′`).
    pub fn alternating_face_sum(&self, n: usize, skip_last: bool) -> SparseMatrix {
        let f = self.field;
        let top = if skip_last { n } else { n + 1 };
        let mut acc = SparseMatrix::zero(f, self.dims[n - 1], self.dims[n]);
        for i in 0..top {
            acc = acc.add_scaled(f.sign(i % 2 == 1), &self.faces[n][i]).expect("same shape");
        }
        acc
    }

    /// The alternating-sum complex on degrees `0..=bound`; the top degree is open.
    pub fn unnormalized_complex(&self) -> ChainComplex {
        let diffs = (1..=self.bound()).map(|n| self.alternating_face_sum(n, false)).collect();
        ChainComplex::new(self.field, 0, self.dims.clone(), diffs)
            .expect("simplicial identities give b² = 0")
            .with_open_edges(false, true)
    }

    /// Moore complex: `∩_{i ≥ 1} ker d_i` with differential `d_0`.
    pub fn normalized_complex(&self) -> ChainComplex {
        let f = self.field;
        let bases: Vec<SparseMatrix> = (0..=self.bound())
            .into_par_iter()
            .map(|n| {
                if n == 0 {
                    return SparseMatrix::identity(f, self.dims[0]);
                }
                let parts: Vec<&SparseMatrix> = self.faces[n][1..].iter().collect();
                let stacked = SparseMatrix::vstack(&parts).expect("same column count");
                stacked.kernel().matrix(f)
            })
            .collect();
        let diffs = (1..=self.bound())
            .map(|n| {
                let image = self.faces[n][0].dot(&bases[n]);
                crate::linalg::solve_columns(&bases[n - 1], &image).expect("d_0 preserves the Moore complex")
            })
            .collect();
        ChainComplex::new(f, 0, bases.iter().map(|b| b.ncols()).collect(), diffs)
            .expect("d_0² = 0 on the Moore complex")
            .with_open_edges(false, true)
    }

    /// Per degree, the quotient by the images of `s_0..s_{n−1}`.
    pub fn degenerate_quotients(&self) -> Vec<Quotient> {
        (0..=self.bound())
            .into_par_iter()
            .map(|n| {
                let mut ech = Echelon::new(self.field, self.dims[n]);
                if n > 0 {
                    for s in &self.degens[n - 1] {
                        for c in s.columns() {
                            ech.insert(c.clone());
                        }
                    }
                }
                Quotient::new(ech)
            })
            .collect()
    }
}

/// `V / D` for a subspace `D` in echelon form, with basis the unit vectors
/// at non-pivot positions.
#[derive(Clone, Debug)]
pub struct Quotient {
    ech: Echelon,
    keep: Vec<usize>,
    slot: Vec<u32>,
}

impl Quotient {
    pub fn new(ech: Echelon) -> Self {
        let n = ech.dim();
        let keep: Vec<usize> = (0..n).filter(|&i| !ech.is_pivot(i)).collect();
        let mut slot = vec![u32::MAX; n];
        for (k, &i) in keep.iter().enumerate() {
            slot[i] = k as u32;
        }
        Quotient { ech, keep, slot }
    }

    pub fn dim(&self) -> usize {
        self.keep.len()
    }

    pub fn ambient(&self) -> usize {
        self.ech.dim()
    }

    pub fn project(&self, v: &[(u32, u32)]) -> SVec {
        let (rem, _) = self.ech.reduce_full(v.to_vec());
        rem.into_iter().map(|(i, c)| (self.slot[i as usize], c)).collect()
    }

    /// Unit vectors of the ambient space representing the quotient basis.
    pub fn section(&self) -> &[usize] {
        &self.keep
    }

    /// `Q_t · X · S_s` for `X` from the ambient of `src` to the ambient of `self`.
    pub fn induced(&self, x: &SparseMatrix, src: &Quotient) -> SparseMatrix {
        let f = x.field();
        let cols = src.keep.par_iter().map(|&j| self.project(x.col(j))).collect();
        SparseMatrix::from_cols(f, self.dim(), cols).expect("projection is in range")
    }
}

/// A simplicial module with a signed cyclic operator of period `p(n+1)`.
#[derive(Clone, Debug)]
pub struct CyclicModule {
    simp: SimplicialModule,
    t: Vec<SparseMatrix>,
    p: usize,
}

impl CyclicModule {
    /// Checks the cyclic identities in the signed form of the module docs.
    pub fn new(simp: SimplicialModule, t: Vec<SparseMatrix>, p: usize) -> Result<Self> {
        let c = CyclicModule { simp, t, p };
        c.check()?;
        Ok(c)
    }

    fn check(&self) -> Result<()> {
        let s = &self.simp;
        let f = s.field;
        let nb = s.dims.len();
        if self.t.len() != nb || self.p == 0 {
            return Err(Error::Shape("cyclic operator must be given in every degree".into()));
        }
        (0..nb).into_par_iter().try_for_each(|n| -> Result<()> {
            let t = &self.t[n];
            if t.nrows() != s.dims[n] || t.ncols() != s.dims[n] {
                return Err(Error::Shape(format!("cyclic operator in degree {n} is not square of size {}", s.dims[n])));
            }
            check_eq(&t.pow((self.p * (n + 1)) as u64), &SparseMatrix::identity(f, s.dims[n]), || {
                format!("T^{} ≠ 1 in degree {n}", self.p * (n + 1))
            })?;
            let sg = f.sign(n % 2 == 1);
            if n >= 1 {
                check_eq(&s.faces[n][0].dot(t), &s.faces[n][n].scale(sg), || format!("d_0 T ≠ ±d_n in degree {n}"))?;
                for i in 1..=n {
                    check_eq(&s.faces[n][i].dot(t), &self.t[n - 1].dot(&s.faces[n][i - 1]).neg(), || {
                        format!("d_{i} T ≠ −T d_{} in degree {n}", i - 1)
                    })?;
                }
            }
            if n + 1 < nb {
                let t1 = &self.t[n + 1];
                check_eq(&s.degens[n][0].dot(t), &t1.dot(t1).dot(&s.degens[n][n]).scale(sg), || {
                    format!("s_0 T ≠ ±T² s_n in degree {n}")
                })?;
                for i in 1..=n {
                    check_eq(&s.degens[n][i].dot(t), &t1.dot(&s.degens[n][i - 1]).neg(), || {
                        format!("s_{i} T ≠ −T s_{} in degree {n}", i - 1)
                    })?;
                }
            }
            if self.p > 1 {
                // the Z/p generator commutes with everything
                let g = self.generator(n);
                if n >= 1 {
                    let g0 = self.generator(n - 1);
                    for i in 0..=n {
                        check_eq(&s.faces[n][i].dot(&g), &g0.dot(&s.faces[n][i]), || {
                            format!("Z/p action does not commute with d_{i} in degree {n}")
                        })?;
                    }
                }
                if n + 1 < nb {
                    let g1 = self.generator(n + 1);
                    for i in 0..=n {
                        check_eq(&s.degens[n][i].dot(&g), &g1.dot(&s.degens[n][i]), || {
                            format!("Z/p action does not commute with s_{i} in degree {n}")
                        })?;
                    }
                }
            }
            Ok(())
        })
    }

    /// The constant cyclic module `k`, with `T_n = (−1)^n`.
    pub fn constant(field: Field, bound: usize) -> Self {
        let simp = SimplicialModule::constant(field, 1, bound);
        let t = (0..=bound).map(|n| SparseMatrix::scalar(field, 1, field.sign(n % 2 == 1))).collect();
        CyclicModule { simp, t, p: 1 }
    }

    pub fn simplicial(&self) -> &SimplicialModule {
        &self.simp
    }

    pub fn field(&self) -> Field {
        self.simp.field
    }

    pub fn bound(&self) -> usize {
        self.simp.bound()
    }

    pub fn period(&self) -> usize {
        self.p
    }

    pub fn t(&self, n: usize) -> &SparseMatrix {
        &self.t[n]
    }

    /// `T^{n+1}`, the Z/p generator in degree `n`.
    pub fn generator(&self, n: usize) -> SparseMatrix {
        self.t[n].pow((n + 1) as u64)
    }

    /// `N = Σ_{i=0}^{n} T^i`.
    pub fn norm(&self, n: usize) -> SparseMatrix {
        let f = self.field();
        let mut acc = SparseMatrix::identity(f, self.simp.dims[n]);
        let mut pw = acc.clone();
        for _ in 0..n {
            pw = self.t[n].dot(&pw);
            acc = acc.add(&pw).expect("same shape");
        }
        acc
    }

    /// Extra degeneracy `(−1)^{n+1} T s_n` out of degree `n`.
    pub fn extra_degeneracy(&self, n: usize) -> SparseMatrix {
        let f = self.field();
        self.t[n + 1].dot(&self.simp.degens[n][n]).scale(f.sign(n.is_multiple_of(2)))
    }

    /// `(1 − T) s N` out of degree `n` on the unnormalized terms.
    pub fn connes_b_unnormalized(&self, n: usize) -> SparseMatrix {
        let f = self.field();
        let one_minus_t = SparseMatrix::identity(f, self.simp.dims[n + 1]).sub(&self.t[n + 1]).expect("square");
        one_minus_t.dot(&self.extra_degeneracy(n)).dot(&self.norm(n))
    }

    /// Edgewise subdivision: degree `n` is `E_{p(n+1)−1}`, faces
    /// `d_i d_{i+(n+1)} ⋯ d_{i+(p−1)(n+1)}` and degeneracies
    /// `s_i s_{i+(n+1)} ⋯ s_{i+(p−1)(n+1)}`, each product applied from the
    /// highest index down so that lower indices stay put. The cyclic
    /// operator is `(−1)^n` times the unsigned rotation of `E_{p(n+1)−1}`.
    pub fn edgewise_sd(&self, p: usize, bound: usize) -> Result<CyclicModule> {
        if self.p != 1 {
            return Err(Error::MissingCyclic("edgewise subdivision needs a cyclic module".into()));
        }
        if p == 0 || p * (bound + 1) - 1 > self.bound() {
            return Err(Error::budget(format!(
                "subdivision to degree {bound} needs the module through degree {}",
                p * (bound + 1) - 1
            )));
        }
        let f = self.field();
        let s = &self.simp;
        let top = |n: usize| p * (n + 1) - 1;
        let dims: Vec<usize> = (0..=bound).map(|n| s.dims[top(n)]).collect();
        let faces = (0..=bound)
            .into_par_iter()
            .map(|n| {
                if n == 0 {
                    return vec![];
                }
                (0..=n)
                    .map(|i| {
                        let mut m = SparseMatrix::identity(f, s.dims[top(n)]);
                        let mut deg = top(n);
                        for blk in (0..p).rev() {
                            m = s.faces[deg][i + blk * (n + 1)].dot(&m);
                            deg -= 1;
                        }
                        m
                    })
                    .collect()
            })
            .collect();
        let degens = (0..=bound)
            .into_par_iter()
            .map(|n| {
                if n == bound {
                    return vec![];
                }
                (0..=n)
                    .map(|i| {
                        let mut m = SparseMatrix::identity(f, s.dims[top(n)]);
                        let mut deg = top(n);
                        for blk in (0..p).rev() {
                            m = s.degens[deg][i + blk * (n + 1)].dot(&m);
                            deg += 1;
                        }
                        m
                    })
                    .collect()
            })
            .collect();
        let t = (0..=bound)
            .map(|n| {
                // unsigned rotation is (−1)^{top} T_{top}
                let sign = f.sign((n + top(n)) % 2 == 1);
                self.t[top(n)].scale(sign)
            })
            .collect();
        let simp = SimplicialModule::new(f, dims, faces, degens)?;
        CyclicModule::new(simp, t, p)
    }

    /// The mixed complex `(b, B)` on the degenerate quotient, in internal
    /// degree 0. Requires `p = 1`.
    pub fn normalized_mixed(&self) -> Result<MixedComplex> {
        if self.p != 1 {
            return Err(Error::MissingCyclic("Connes' B needs a cyclic module".into()));
        }
        let f = self.field();
        let nb = self.bound();
        let q = self.simp.degenerate_quotients();
        let mut mc = MixedComplex::new(f, nb as i64, 0, None);
        for n in 0..=nb {
            mc.add_cell((n as i64, 0), q[n].dim());
        }
        let pieces: Vec<(usize, Option<SparseMatrix>, Option<SparseMatrix>)> = (0..=nb)
            .into_par_iter()
            .map(|n| {
                let b = (n >= 1).then(|| q[n - 1].induced(&self.simp.alternating_face_sum(n, false), &q[n]));
                let bb = (n < nb).then(|| q[n + 1].induced(&self.connes_b_unnormalized(n), &q[n]));
                (n, b, bb)
            })
            .collect();
        for (n, b, bb) in pieces {
            let n = n as i64;
            if let Some(b) = b {
                mc.add_b((n, 0), (n - 1, 0), b)?;
            }
            if let Some(bb) = bb {
                mc.add_connes((n, 0), (n + 1, 0), bb)?;
            }
        }
        Ok(mc)
    }
}

/// Connes' operator on the normalized complex, checked: the mixed complex
/// of `E` with `B² = 0` and `bB + Bb = 0`.
pub fn connes_b(e: &CyclicModule) -> Result<MixedComplex> {
    let mc = e.normalized_mixed()?;
    mc.check_identities()?;
    Ok(mc)
}

/// Cyclic homology through `max_degree` from the Connes bicomplex with
/// `columns` columns, with the matrices of `u: H_n → H_{n−2}` on homology.
#[derive(Clone, Debug)]
pub struct LambdaHomology {
    pub dims: Vec<Betti>,
    /// `u_maps[n]` for `n ≥ 2`, in the bases of [`LambdaHomology::bases`].
    pub u_maps: BTreeMap<i64, SparseMatrix>,
    pub bases: BTreeMap<i64, HomologyBasis>,
}

/// `H_*(Λ, E)` from the `(b, −b′; 1 − T, N)` bicomplex. Stability is checked
/// by recomputing with one more column.
pub fn lambda_homology(e: &CyclicModule, max_degree: usize, columns: usize) -> Result<LambdaHomology> {
    if e.p != 1 {
        return Err(Error::MissingCyclic("the cyclic bicomplex needs a cyclic module".into()));
    }
    if columns < max_degree + 2 || e.bound() < max_degree + 1 {
        return Err(Error::budget(format!(
            "degree {max_degree} needs at least {} columns and the module through degree {}",
            max_degree + 2,
            max_degree + 1
        )));
    }
    let a = bicomplex_homology(e, max_degree, columns)?;
    let b = bicomplex_homology(e, max_degree, columns + 1)?;
    if a.dims != b.dims {
        return Err(Error::Validation("cyclic bicomplex is not stable in the window".into()));
    }
    Ok(a)
}

fn bicomplex_homology(e: &CyclicModule, max_degree: usize, columns: usize) -> Result<LambdaHomology> {
    let f = e.field();
    let s = &e.simp;
    let top = (max_degree + 1) as i64;
    let mut asm: Assembly<(i64, i64)> = Assembly::new(f);
    for q in 0..columns as i64 {
        for n in 0..=s.bound() as i64 {
            if q + n <= top {
                asm.add_cell((q, n), q + n, s.dims[n as usize]);
            }
        }
    }
    let cells: Vec<(i64, i64)> = asm.cells().map(|(k, _)| *k).collect();
    for &(q, n) in &cells {
        let nu = n as usize;
        if n >= 1 {
            let v = if q % 2 == 0 { s.alternating_face_sum(nu, false) } else { s.alternating_face_sum(nu, true).neg() };
            asm.add_map(&(q, n), &(q, n - 1), v)?;
        }
        if q >= 1 {
            let h = if q % 2 == 1 {
                SparseMatrix::identity(f, s.dims[nu]).sub(&e.t[nu])?
            } else {
                e.norm(nu)
            };
            asm.add_map(&(q, n), &(q - 1, n), h)?;
        }
    }
    let (cx, layout) = asm.build(0, top)?;
    let cx = cx.with_open_edges(false, true);
    let h = cx.homology_dims();
    let dims: Vec<Betti> = (0..=max_degree as i64).map(|n| h[&n]).collect();
    let bases: BTreeMap<i64, HomologyBasis> =
        (0..=max_degree as i64).map(|n| (n, cx.homology_basis(n))).collect();
    // u drops the first two columns
    let mut u = ChainMap::new(-2);
    for d in 2..=top {
        u.maps.insert(d, shift_map(f, &layout, &cx, d, |&(q, n)| (q >= 2).then_some((q - 2, n))));
    }
    let mut u_maps = BTreeMap::new();
    for n in 2..=max_degree as i64 {
        u_maps.insert(n, u.on_homology(n, &bases[&n], &bases[&(n - 2)]));
    }
    Ok(LambdaHomology { dims, u_maps, bases })
}

/// Matrix sending each block of degree `d` to the block named by `to`, as
/// the identity; blocks without a target are dropped.
fn shift_map<K: Ord + Clone + std::fmt::Debug>(
    f: Field,
    layout: &Layout<K>,
    cx: &ChainComplex,
    d: i64,
    to: impl Fn(&K) -> Option<K>,
) -> SparseMatrix {
    let mut trip = Vec::new();
    let mut tdeg = None;
    for (k, &(deg, off)) in &layout.place {
        if deg != d {
            continue;
        }
        let Some(t) = to(k) else { continue };
        let Some(&(dt, ot)) = layout.place.get(&t) else { continue };
        tdeg = Some(dt);
        // blocks of the same label have the same size
        let size = block_size(layout, cx, k);
        for i in 0..size {
            trip.push((ot + i, off + i, 1i64));
        }
    }
    let tdeg = tdeg.unwrap_or(d - 2);
    SparseMatrix::from_triplets(f, cx.dim(tdeg), cx.dim(d), trip).expect("blocks fit")
}

fn block_size<K: Ord>(layout: &Layout<K>, cx: &ChainComplex, k: &K) -> usize {
    let (deg, off) = layout.place[k];
    let next = layout
        .place
        .values()
        .filter(|&&(d, o)| d == deg && o > off)
        .map(|&(_, o)| o)
        .min()
        .unwrap_or(cx.dim(deg));
    next - off
}

/// A cell `(n, j)`: simplicial degree `n`, internal degree `j`.
pub type Cell = (i64, i64);

/// Mixed complex on cells `(n, j)` of total degree `n + j`, with `b` of
/// degree −1 and `B` of degree +1. Cells exist for `n ≤ n_max` and
/// `j_lo ≤ j`, and `j ≤ j_hi` when an upper limit is given. The lower `j`
/// bound is a genuine truncation, the other two are construction limits.
#[derive(Clone, Debug)]
pub struct MixedComplex {
    field: Field,
    n_max: i64,
    j_lo: i64,
    j_hi: Option<i64>,
    dims: BTreeMap<Cell, usize>,
    b: BTreeMap<(Cell, Cell), SparseMatrix>,
    bb: BTreeMap<(Cell, Cell), SparseMatrix>,
}

/// Dimensions per degree with a stability verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Windowed {
    pub degree: i64,
    pub dim: Option<usize>,
}

impl MixedComplex {
    pub fn new(field: Field, n_max: i64, j_lo: i64, j_hi: Option<i64>) -> Self {
        MixedComplex { field, n_max, j_lo, j_hi, dims: BTreeMap::new(), b: BTreeMap::new(), bb: BTreeMap::new() }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn add_cell(&mut self, c: Cell, dim: usize) {
        if dim > 0 {
            self.dims.insert(c, dim);
        }
    }

    pub fn dim(&self, c: Cell) -> usize {
        self.dims.get(&c).copied().unwrap_or(0)
    }

    pub fn cells(&self) -> impl Iterator<Item = (&Cell, &usize)> {
        self.dims.iter()
    }

    fn add_to(
        map: &mut BTreeMap<(Cell, Cell), SparseMatrix>,
        dims: &BTreeMap<Cell, usize>,
        s: Cell,
        t: Cell,
        m: SparseMatrix,
    ) -> Result<()> {
        let (Some(&ds), Some(&dt)) = (dims.get(&s), dims.get(&t)) else {
            return Ok(());
        };
        if m.ncols() != ds || m.nrows() != dt {
            return Err(Error::Shape(format!("component {s:?} → {t:?} has the wrong shape")));
        }
        if m.is_zero() {
            return Ok(());
        }
        let merged = match map.remove(&(s, t)) {
            Some(old) => old.add(&m)?,
            None => m,
        };
        map.insert((s, t), merged);
        Ok(())
    }

    pub fn add_b(&mut self, s: Cell, t: Cell, m: SparseMatrix) -> Result<()> {
        if t.0 + t.1 != s.0 + s.1 - 1 {
            return Err(Error::Shape("b must lower the total degree by one".into()));
        }
        Self::add_to(&mut self.b, &self.dims, s, t, m)
    }

    pub fn add_connes(&mut self, s: Cell, t: Cell, m: SparseMatrix) -> Result<()> {
        if t.0 + t.1 != s.0 + s.1 + 1 {
            return Err(Error::Shape("B must raise the total degree by one".into()));
        }
        Self::add_to(&mut self.bb, &self.dims, s, t, m)
    }

    /// The `B` component from cell `s` to cell `t`, if nonzero.
    pub fn connes_component(&self, s: Cell, t: Cell) -> Option<&SparseMatrix> {
        self.bb.get(&(s, t))
    }

    /// Highest total degree whose homology sees every cell it needs.
    pub fn exact_through(&self) -> i64 {
        (self.n_max + self.j_lo).min(self.j_hi.unwrap_or(i64::MAX)) - 1
    }

    fn apply(map: &BTreeMap<(Cell, Cell), SparseMatrix>, src: Cell) -> Vec<(Cell, &SparseMatrix)> {
        map.range((src, (i64::MIN, i64::MIN))..=(src, (i64::MAX, i64::MAX))).map(|((_, t), m)| (*t, m)).collect()
    }

    /// Composite of two component maps out of `src`, grouped by target.
    fn compose(
        &self,
        first: &BTreeMap<(Cell, Cell), SparseMatrix>,
        second: &BTreeMap<(Cell, Cell), SparseMatrix>,
        src: Cell,
    ) -> BTreeMap<Cell, SparseMatrix> {
        let mut out: BTreeMap<Cell, SparseMatrix> = BTreeMap::new();
        for (mid, m1) in Self::apply(first, src) {
            for (tgt, m2) in Self::apply(second, mid) {
                let prod = m2.dot(m1);
                let e = out.remove(&tgt);
                out.insert(tgt, match e {
                    Some(old) => old.add(&prod).expect("same shape"),
                    None => prod,
                });
            }
        }
        out
    }

    /// `b² = 0`, `B² = 0`, `bB + Bb = 0` on every source cell far enough
    /// from the construction limits for all terms to be present.
    pub fn check_identities(&self) -> Result<()> {
        let inner: Vec<Cell> = self
            .dims
            .keys()
            .copied()
            .filter(|&(n, j)| n + 2 <= self.n_max && self.j_hi.is_none_or(|h| j + 2 <= h))
            .collect();
        inner.par_iter().try_for_each(|&c| -> Result<()> {
            for (what, m) in [("b²", self.compose(&self.b, &self.b, c)), ("B²", self.compose(&self.bb, &self.bb, c))] {
                if m.values().any(|x| !x.is_zero()) {
                    return Err(Error::Validation(format!("{what} ≠ 0 on cell {c:?}")));
                }
            }
            let mut bb_b = self.compose(&self.b, &self.bb, c);
            for (t, m) in self.compose(&self.bb, &self.b, c) {
                let e = bb_b.remove(&t);
                bb_b.insert(t, match e {
                    Some(old) => old.add(&m)?,
                    None => m,
                });
            }
            if bb_b.values().any(|x| !x.is_zero()) {
                return Err(Error::Validation(format!("bB + Bb ≠ 0 on cell {c:?}")));
            }
            Ok(())
        })
    }

    /// Hochschild complex (`b` only) on total degrees `[lo, hi + 1]`.
    pub fn hochschild_complex(&self, lo: i64, hi: i64) -> Result<(ChainComplex, Layout<Cell>)> {
        let hi = hi.min(self.exact_through());
        let mut asm: Assembly<Cell> = Assembly::new(self.field);
        for (&(n, j), &d) in &self.dims {
            asm.add_cell((n, j), n + j, d);
        }
        for ((s, t), m) in &self.b {
            asm.add_map(s, t, m.clone())?;
        }
        let (c, l) = asm.build(lo, hi + 1)?;
        Ok((c.with_open_edges(false, true), l))
    }

    /// `HH` dims on `[lo, hi]`; degrees past [`MixedComplex::exact_through`] are indeterminate.
    pub fn hochschild(&self, lo: i64, hi: i64) -> Result<Vec<Betti>> {
        let (c, _) = self.hochschild_complex(lo, hi)?;
        let h = c.homology_dims();
        Ok((lo..=hi).map(|n| h.get(&n).copied().unwrap_or(Betti::Indeterminate)).collect())
    }

    /// Matrix of `B` on Hochschild homology, `HH_d → HH_{d+1}`.
    pub fn connes_on_homology(&self, d: i64) -> Result<(HomologyBasis, HomologyBasis, SparseMatrix)> {
        let (c, layout) = self.hochschild_complex(d.min(0), d + 1)?;
        let src = c.homology_basis(d);
        let tgt = c.homology_basis(d + 1);
        let mut trip = Vec::new();
        for ((s, t), m) in &self.bb {
            if s.0 + s.1 != d {
                continue;
            }
            let (Some(&(_, os)), Some(&(_, ot))) = (layout.place.get(s), layout.place.get(t)) else { continue };
            for (i, j, v) in m.triplets() {
                trip.push((ot + i, os + j, v as i64));
            }
        }
        let bmat = SparseMatrix::from_triplets(self.field, c.dim(d + 1), c.dim(d), trip)?;
        let cols = src.reps.iter().map(|z| tgt.coords(&bmat.apply(z))).collect();
        let m = SparseMatrix::from_cols(self.field, tgt.dim(), cols)?;
        Ok((src, tgt, m))
    }

    /// Cyclic complex `⊕_{i ≥ 0} u^{−i}`: cell `(n, j, i)` in degree `n + j + 2i`,
    /// `d(x)_i = b x_i + B x_{i+1}`; built on `[lo, hi + 1]`.
    pub fn cyclic_complex(&self, lo: i64, hi: i64) -> Result<(ChainComplex, Layout<(i64, i64, i64)>)> {
        let hi = hi.min(self.exact_through());
        let mut asm: Assembly<(i64, i64, i64)> = Assembly::new(self.field);
        for (&(n, j), &d) in &self.dims {
            let mut i = 0;
            while n + j + 2 * i <= hi + 1 {
                if n + j + 2 * i >= lo - 1 {
                    asm.add_cell((n, j, i), n + j + 2 * i, d);
                }
                i += 1;
            }
        }
        let keys: Vec<(i64, i64, i64)> = asm.cells().map(|(k, _)| *k).collect();
        for &(n, j, i) in &keys {
            for (t, m) in Self::apply(&self.b, (n, j)) {
                asm.add_map(&(n, j, i), &(t.0, t.1, i), m.clone())?;
            }
            if i >= 1 {
                for (t, m) in Self::apply(&self.bb, (n, j)) {
                    asm.add_map(&(n, j, i), &(t.0, t.1, i - 1), m.clone())?;
                }
            }
        }
        let (c, l) = asm.build(lo, hi + 1)?;
        Ok((c.with_open_edges(false, true), l))
    }

    /// `HC` dims on `[lo, hi]`.
    pub fn cyclic(&self, lo: i64, hi: i64) -> Result<Vec<Betti>> {
        let (c, _) = self.cyclic_complex(lo, hi)?;
        let h = c.homology_dims();
        Ok((lo..=hi).map(|n| h.get(&n).copied().unwrap_or(Betti::Indeterminate)).collect())
    }

    /// Matrix of the map `HC_d(self) → HC_d(tgt)` induced by a cellwise
    /// morphism of mixed complexes; cells missing from `cells` map to zero.
    pub fn cyclic_map_on_homology(
        &self,
        tgt: &MixedComplex,
        cells: &BTreeMap<Cell, SparseMatrix>,
        d: i64,
    ) -> Result<SparseMatrix> {
        if d > self.exact_through() || d > tgt.exact_through() {
            return Err(Error::budget(format!("degree {d} is past the construction limits")));
        }
        let (cs, ls) = self.cyclic_complex(d - 1, d)?;
        let (ct, lt) = tgt.cyclic_complex(d - 1, d)?;
        let mut trip = Vec::new();
        for (k, &(deg, off)) in &ls.place {
            let (Some(m), Some(&(_, ot))) = (cells.get(&(k.0, k.1)), lt.place.get(k)) else { continue };
            if deg != d {
                continue;
            }
            for (i, j, v) in m.triplets() {
                trip.push((ot + i, off + j, v as i64));
            }
        }
        let mat = SparseMatrix::from_triplets(self.field, ct.dim(d), cs.dim(d), trip)?;
        let src = cs.homology_basis(d);
        let tb = ct.homology_basis(d);
        let cols = src
            .reps
            .iter()
            .map(|z| {
                tb.try_coords(&mat.apply(z))
                    .ok_or_else(|| Error::Validation(format!("cell maps do not send cycles to cycles in degree {d}")))
            })
            .collect::<Result<Vec<_>>>()?;
        SparseMatrix::from_cols(self.field, tb.dim(), cols)
    }

    /// Rank of `S^k: HC_{n+2k} → HC_n`.
    pub fn s_power_rank(&self, n: i64, k: i64) -> Result<Option<usize>> {
        let top = n + 2 * k;
        if top > self.exact_through() {
            return Ok(None);
        }
        let (c, layout) = self.cyclic_complex(n.min(0), top)?;
        let src = c.homology_basis(top);
        let tgt = c.homology_basis(n);
        let m = shift_map(self.field, &layout, &c, top, |&(a, b, i)| (i >= k).then_some((a, b, i - k)));
        let cols: Vec<SVec> = src.reps.iter().map(|z| tgt.coords(&m.apply(z))).collect();
        Ok(Some(SparseMatrix::from_cols(self.field, tgt.dim(), cols)?.rank()))
    }

    /// `HP_n` as the stable image of `S^k` in `HC_n`, for `k = window` and
    /// `window + 1`; `None` unless both ranks agree and `S` maps the stable
    /// image in degree `n + 2` onto that in degree `n` isomorphically.
    pub fn periodic(&self, n: i64, window: i64) -> Result<Option<usize>> {
        let a = self.s_power_rank(n, window)?;
        let b = self.s_power_rank(n, window + 1)?;
        let c = self.s_power_rank(n + 2, window)?;
        Ok(match (a, b, c) {
            (Some(a), Some(b), Some(c)) if a == b && b == c => Some(a),
            _ => None,
        })
    }

    /// Co-periodic complex: cell `(n, j, m)` is `x u^m` in degree
    /// `n + j − 2m`, with `m ≤ window`; differential `b + uB`. Dropping
    /// `m > window` is a quotient by a subcomplex.
    pub fn coperiodic_complex(&self, lo: i64, hi: i64, window: i64) -> Result<ChainComplex> {
        let mut asm: Assembly<(i64, i64, i64)> = Assembly::new(self.field);
        for (&(n, j), &d) in &self.dims {
            for m in ((n + j - hi - 1) as f64 / 2.0).ceil() as i64..=window {
                let deg = n + j - 2 * m;
                if deg >= lo - 1 && deg <= hi + 1 {
                    asm.add_cell((n, j, m), deg, d);
                }
            }
        }
        let keys: Vec<(i64, i64, i64)> = asm.cells().map(|(k, _)| *k).collect();
        for &(n, j, m) in &keys {
            for (t, x) in Self::apply(&self.b, (n, j)) {
                asm.add_map(&(n, j, m), &(t.0, t.1, m), x.clone())?;
            }
            for (t, x) in Self::apply(&self.bb, (n, j)) {
                asm.add_map(&(n, j, m), &(t.0, t.1, m + 1), x.clone())?;
            }
        }
        let (c, _) = asm.build(lo - 1, hi + 1)?;
        Ok(c.with_open_edges(true, true))
    }

    /// Co-periodic dims on `[lo, hi]` at windows `window` and `window + 1`;
    /// a degree is reported only where the two agree and the mixed complex
    /// holds every cell both windows touch.
    pub fn coperiodic(&self, lo: i64, hi: i64, window: i64) -> Result<Vec<Windowed>> {
        let need = hi + 1 + 2 * (window + 1);
        let a = self.coperiodic_complex(lo, hi, window)?.homology_dims();
        let b = self.coperiodic_complex(lo, hi, window + 1)?.homology_dims();
        Ok((lo..=hi)
            .map(|d| {
                let dim = match (a.get(&d), b.get(&d)) {
                    (Some(Betti::Dim(x)), Some(Betti::Dim(y))) if x == y && need <= self.exact_through() + 1 => Some(*x),
                    _ => None,
                };
                Windowed { degree: d, dim }
            })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> Field {
        Field::new(p).unwrap()
    }

    #[test]
    fn delta_map_flags() {
        let id = classify_delta_map(&DeltaMap::new(2, 2, vec![0, 1, 2]).unwrap());
        assert!(id.special && id.antispecial && id.bispecial && id.anchor && id.left_anchor && id.right_anchor);
        let s = classify_delta_map(&DeltaMap::new(1, 3, vec![0, 1]).unwrap());
        assert!(s.left_anchor && s.special && !s.antispecial && !s.right_anchor);
        let sur = classify_delta_map(&DeltaMap::new(2, 1, vec![0, 0, 1]).unwrap());
        assert!(sur.bispecial && sur.surjective && !sur.anchor && !sur.injective);
        let mid = classify_delta_map(&DeltaMap::new(1, 3, vec![1, 2]).unwrap());
        assert!(mid.anchor && !mid.left_anchor && !mid.right_anchor && mid.injective);
        assert!(DeltaMap::new(1, 2, vec![2, 1]).is_err());
    }

    #[test]
    fn constant_module_homology() {
        let c = CyclicModule::constant(f(3), 7);
        let norm = c.simplicial().normalized_complex().betti();
        assert_eq!(norm[&0], 1);
        assert!((1..7).all(|n| norm[&n] == 0));
        let lh = lambda_homology(&c, 4, 6).unwrap();
        let dims: Vec<_> = lh.dims.iter().map(|b| b.dim().unwrap()).collect();
        assert_eq!(dims, vec![1, 0, 1, 0, 1]);
        assert_eq!(lh.u_maps[&2].rank(), 1);
        assert_eq!(lh.u_maps[&4].rank(), 1);
    }

    #[test]
    fn constant_module_mixed_route_agrees() {
        let c = CyclicModule::constant(f(2), 12);
        let mc = connes_b(&c).unwrap();
        let hc: Vec<_> = mc.cyclic(0, 6).unwrap().iter().map(|b| b.dim().unwrap()).collect();
        assert_eq!(hc, vec![1, 0, 1, 0, 1, 0, 1]);
        assert_eq!(mc.periodic(0, 2).unwrap(), Some(1));
        assert_eq!(mc.periodic(1, 2).unwrap(), Some(0));
        let cp = mc.coperiodic(-4, 2, 2).unwrap();
        for w in cp {
            assert_eq!(w.dim, Some(usize::from(w.degree % 2 == 0)), "degree {}", w.degree);
        }
    }

    #[test]
    fn bad_cyclic_operator_is_rejected() {
        let fl = f(3);
        let simp = SimplicialModule::constant(fl, 1, 3);
        let t = (0..=3).map(|_| SparseMatrix::identity(fl, 1)).collect();
        assert!(CyclicModule::new(simp, t, 1).is_err());
    }

    #[test]
    fn subdivision_of_constant_module() {
        for p in [2usize, 3] {
            let c = CyclicModule::constant(f(p as u64), p * 5 - 1);
            let sd = c.edgewise_sd(p, 4).unwrap();
            assert_eq!(sd.period(), p);
            for n in 0..=4 {
                assert_eq!(sd.generator(n), SparseMatrix::identity(f(p as u64), 1));
            }
            assert!(c.edgewise_sd(p, 5).is_err());
        }
    }
}
