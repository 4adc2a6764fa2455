//! Hochschild, cyclic, periodic and co-periodic homology of finite
//! dimensional algebras over `F_p`, the p-cyclic-power trace and the
//! conjugate-filtration model of THH.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::chains::{Betti, ChainComplex};
use crate::cyc::{lambda_homology, CyclicModule, MixedComplex, SimplicialModule, Windowed};
use crate::error::{Error, Result};
use crate::fincat::{coend_trace, triangle_consistent, LinearCat, Opposite, Product, Representation};
use crate::linalg::{svec_from, Field, SVec, SparseMatrix};
use crate::tate::{relative_tate_cyclic, RelativeTate};

/// A finite dimensional unital associative algebra, given by structure
/// constants `e_i e_j = Σ_k c_{ij}^k e_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraSpec {
    field: Field,
    labels: Vec<String>,
    /// `mult[i][j]` is `e_i e_j` as a dense coefficient vector.
    mult: Vec<Vec<Vec<u32>>>,
    unit: Vec<u32>,
}

impl AlgebraSpec {
    /// Checks associativity and unitality on all basis triples.
    pub fn new(field: Field, labels: Vec<String>, mult: Vec<Vec<Vec<i64>>>, unit: Vec<i64>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::Validation("an algebra needs a nonzero basis".into()));
        }
        if mult.len() != n || mult.iter().any(|r| r.len() != n || r.iter().any(|v| v.len() != n)) || unit.len() != n {
            return Err(Error::Shape("structure constants do not match the basis".into()));
        }
        let red = |v: &[i64]| v.iter().map(|&x| field.reduce(x)).collect::<Vec<u32>>();
        let a = AlgebraSpec {
            field,
            labels,
            mult: mult.iter().map(|r| r.iter().map(|v| red(v)).collect()).collect(),
            unit: red(&unit),
        };
        for i in 0..n {
            let e = a.basis_vector(i);
            if a.multiply(&a.unit, &e) != e || a.multiply(&e, &a.unit) != e {
                return Err(Error::Validation(format!("the unit does not act trivially on {}", a.labels[i])));
            }
            for j in 0..n {
                for k in 0..n {
                    let lhs = a.multiply(&a.mult[i][j], &a.basis_vector(k));
                    let rhs = a.multiply(&e, &a.mult[j][k]);
                    if lhs != rhs {
                        return Err(Error::Validation(format!(
                            "not associative on ({}, {}, {})",
                            a.labels[i], a.labels[j], a.labels[k]
                        )));
                    }
                }
            }
        }
        Ok(a)
    }

    pub fn prime_field(field: Field) -> Self {
        Self::new(field, vec!["1".into()], vec![vec![vec![1]]], vec![1]).expect("k is an algebra")
    }

    /// `k[x]/x^n` with basis `1, x, …, x^{n−1}`.
    pub fn truncated_polynomial(field: Field, n: usize) -> Self {
        let mult = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut v = vec![0; n];
                        if i + j < n {
                            v[i + j] = 1;
                        }
                        v
                    })
                    .collect()
            })
            .collect();
        let mut unit = vec![0; n];
        unit[0] = 1;
        let labels = (0..n).map(|i| if i == 0 { "1".into() } else { format!("x^{i}") }).collect();
        Self::new(field, labels, mult, unit).expect("truncated polynomials are algebras")
    }

    /// `k[ε]/ε²`.
    pub fn dual_numbers(field: Field) -> Self {
        let mut a = Self::truncated_polynomial(field, 2);
        a.labels[1] = "e".into();
        a
    }

    /// Upper triangular 2×2 matrices, basis `e11, e12, e22`.
    pub fn upper_triangular(field: Field) -> Self {
        let unit_of = |k: usize| {
            let mut v = vec![0; 3];
            v[k] = 1;
            v
        };
        let zero = vec![0; 3];
        // e11 e11 = e11, e11 e12 = e12, e12 e22 = e12, e22 e22 = e22
        let mult = vec![
            vec![unit_of(0), unit_of(1), zero.clone()],
            vec![zero.clone(), zero.clone(), unit_of(1)],
            vec![zero.clone(), zero, unit_of(2)],
        ];
        let labels = vec!["e11".into(), "e12".into(), "e22".into()];
        Self::new(field, labels, mult, vec![1, 0, 1]).expect("matrices form an algebra")
    }

    /// The group algebra `k[Z/n]`.
    pub fn cyclic_group_algebra(field: Field, n: usize) -> Self {
        let mult = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut v = vec![0; n];
                        v[(i + j) % n] = 1;
                        v
                    })
                    .collect()
            })
            .collect();
        let mut unit = vec![0; n];
        unit[0] = 1;
        let labels = (0..n).map(|i| format!("g{i}")).collect();
        Self::new(field, labels, mult, unit).expect("group algebras are algebras")
    }

    /// `A ⊗ B` with basis `a_i ⊗ b_j` at index `i·dim B + j`.
    pub fn tensor(&self, other: &AlgebraSpec) -> Result<AlgebraSpec> {
        if self.field != other.field {
            return Err(Error::IncompatibleField(self.field.p(), other.field.p()));
        }
        let (n, m) = (self.dim(), other.dim());
        let f = self.field;
        let mut mult = vec![vec![vec![0i64; n * m]; n * m]; n * m];
        for (x, row) in mult.iter_mut().enumerate() {
            for (y, v) in row.iter_mut().enumerate() {
                let (a1, b1, a2, b2) = (x / m, x % m, y / m, y % m);
                for (i, &c) in self.mult[a1][a2].iter().enumerate() {
                    for (j, &d) in other.mult[b1][b2].iter().enumerate() {
                        v[i * m + j] = f.add(v[i * m + j] as u32, f.mul(c, d)) as i64;
                    }
                }
            }
        }
        let mut unit = vec![0i64; n * m];
        for (i, &c) in self.unit.iter().enumerate() {
            for (j, &d) in other.unit.iter().enumerate() {
                unit[i * m + j] = f.mul(c, d) as i64;
            }
        }
        let labels = (0..n * m).map(|x| format!("{}⊗{}", self.labels[x / m], other.labels[x % m])).collect();
        AlgebraSpec::new(f, labels, mult, unit)
    }

    /// `A × B` with the basis of `A` first.
    pub fn product(&self, other: &AlgebraSpec) -> Result<AlgebraSpec> {
        if self.field != other.field {
            return Err(Error::IncompatibleField(self.field.p(), other.field.p()));
        }
        let (n, m) = (self.dim(), other.dim());
        let mut mult = vec![vec![vec![0i64; n + m]; n + m]; n + m];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    mult[i][j][k] = self.mult[i][j][k] as i64;
                }
            }
        }
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    mult[n + i][n + j][n + k] = other.mult[i][j][k] as i64;
                }
            }
        }
        let unit = self.unit.iter().chain(&other.unit).map(|&c| c as i64).collect();
        let labels = self.labels.iter().map(|l| format!("{l}.0")).chain(other.labels.iter().map(|l| format!("{l}.1"))).collect();
        AlgebraSpec::new(self.field, labels, mult, unit)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn unit(&self) -> &[u32] {
        &self.unit
    }

    /// `e_i e_j`.
    pub fn structure(&self, i: usize, j: usize) -> &[u32] {
        &self.mult[i][j]
    }

    pub fn basis_vector(&self, i: usize) -> Vec<u32> {
        let mut v = vec![0; self.dim()];
        v[i] = 1;
        v
    }

    pub fn multiply(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        let f = self.field;
        let mut out = vec![0u32; self.dim()];
        for (i, &a) in x.iter().enumerate().filter(|(_, &a)| a != 0) {
            for (j, &b) in y.iter().enumerate().filter(|(_, &b)| b != 0) {
                let c = f.mul(a, b);
                for (k, &s) in self.mult[i][j].iter().enumerate() {
                    out[k] = f.add(out[k], f.mul(c, s));
                }
            }
        }
        out
    }

    /// Matrix of left multiplication by `e_i`.
    pub fn left_matrix(&self, i: usize) -> SparseMatrix {
        let n = self.dim();
        let trip: Vec<_> = (0..n).flat_map(|j| self.mult[i][j].iter().enumerate().map(move |(k, &c)| (k, j, c as i64))).collect();
        SparseMatrix::from_triplets(self.field, n, n, trip).expect("in range")
    }

    /// Matrix of right multiplication by `e_i`.
    pub fn right_matrix(&self, i: usize) -> SparseMatrix {
        let n = self.dim();
        let trip: Vec<_> = (0..n).flat_map(|j| self.mult[j][i].iter().enumerate().map(move |(k, &c)| (k, j, c as i64))).collect();
        SparseMatrix::from_triplets(self.field, n, n, trip).expect("in range")
    }

    /// Number of elements, `p^dim`, if it fits in `limit`.
    pub fn order(&self, limit: usize) -> Option<usize> {
        let mut o = 1usize;
        for _ in 0..self.dim() {
            o = o.checked_mul(self.field.p() as usize)?;
            if o > limit {
                return None;
            }
        }
        Some(o)
    }

    /// Element with the given code: the base-`p` digits, lowest first.
    pub fn decode(&self, mut code: usize) -> Vec<u32> {
        let p = self.field.p() as usize;
        (0..self.dim())
            .map(|_| {
                let d = (code % p) as u32;
                code /= p;
                d
            })
            .collect()
    }

    pub fn encode(&self, x: &[u32]) -> usize {
        let p = self.field.p() as usize;
        x.iter().rev().fold(0, |acc, &d| acc * p + d as usize)
    }
}

/// An `A`-bimodule given by left and right action matrices of the basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BimoduleSpec {
    algebra: AlgebraSpec,
    dim: usize,
    left: Vec<SparseMatrix>,
    right: Vec<SparseMatrix>,
}

impl BimoduleSpec {
    /// Checks the bimodule axioms on basis pairs.
    pub fn new(algebra: &AlgebraSpec, dim: usize, left: Vec<SparseMatrix>, right: Vec<SparseMatrix>) -> Result<Self> {
        let n = algebra.dim();
        let f = algebra.field();
        if left.len() != n || right.len() != n {
            return Err(Error::Shape("one action matrix per basis element is needed".into()));
        }
        if left.iter().chain(&right).any(|m| m.nrows() != dim || m.ncols() != dim || m.field() != f) {
            return Err(Error::Shape("action matrices must be square of the module dimension".into()));
        }
        let m = BimoduleSpec { algebra: algebra.clone(), dim, left, right };
        let id = SparseMatrix::identity(f, dim);
        if m.left_by(algebra.unit()) != id || m.right_by(algebra.unit()) != id {
            return Err(Error::Validation("the unit does not act as the identity".into()));
        }
        for i in 0..n {
            for j in 0..n {
                let prod = algebra.structure(i, j);
                if m.left[i].dot(&m.left[j]) != m.left_by(prod) {
                    return Err(Error::Validation(format!("left action fails on ({i}, {j})")));
                }
                if m.right[j].dot(&m.right[i]) != m.right_by(prod) {
                    return Err(Error::Validation(format!("right action fails on ({i}, {j})")));
                }
                if m.left[i].dot(&m.right[j]) != m.right[j].dot(&m.left[i]) {
                    return Err(Error::Validation(format!("left and right actions do not commute on ({i}, {j})")));
                }
            }
        }
        Ok(m)
    }

    /// `A` as a bimodule over itself.
    pub fn regular(algebra: &AlgebraSpec) -> Self {
        let n = algebra.dim();
        BimoduleSpec {
            algebra: algebra.clone(),
            dim: n,
            left: (0..n).map(|i| algebra.left_matrix(i)).collect(),
            right: (0..n).map(|i| algebra.right_matrix(i)).collect(),
        }
    }

    pub fn direct_sum(&self, other: &BimoduleSpec) -> Result<Self> {
        if self.algebra != other.algebra {
            return Err(Error::Validation("direct sum of bimodules over different algebras".into()));
        }
        let blk = |a: &SparseMatrix, b: &SparseMatrix| {
            let mut t: Vec<(usize, usize, i64)> = a.triplets().into_iter().map(|(i, j, v)| (i, j, v as i64)).collect();
            t.extend(b.triplets().into_iter().map(|(i, j, v)| (i + self.dim, j + self.dim, v as i64)));
            SparseMatrix::from_triplets(self.algebra.field(), self.dim + other.dim, self.dim + other.dim, t).expect("in range")
        };
        let left = self.left.iter().zip(&other.left).map(|(a, b)| blk(a, b)).collect();
        let right = self.right.iter().zip(&other.right).map(|(a, b)| blk(a, b)).collect();
        BimoduleSpec::new(&self.algebra, self.dim + other.dim, left, right)
    }

    pub fn algebra(&self) -> &AlgebraSpec {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn left(&self, i: usize) -> &SparseMatrix {
        &self.left[i]
    }

    pub fn right(&self, i: usize) -> &SparseMatrix {
        &self.right[i]
    }

    /// Left action of an arbitrary element.
    pub fn left_by(&self, x: &[u32]) -> SparseMatrix {
        self.combine(&self.left, x)
    }

    pub fn right_by(&self, x: &[u32]) -> SparseMatrix {
        self.combine(&self.right, x)
    }

    fn combine(&self, mats: &[SparseMatrix], x: &[u32]) -> SparseMatrix {
        let mut acc = SparseMatrix::zero(self.algebra.field(), self.dim, self.dim);
        for (m, &c) in mats.iter().zip(x) {
            if c != 0 {
                acc = acc.add_scaled(c, m).expect("same shape");
            }
        }
        acc
    }
}

type Lin = Vec<(usize, u32)>;

fn sparse(v: &[u32]) -> Lin {
    v.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (i, c)).collect()
}

fn column(m: &SparseMatrix, j: usize) -> Lin {
    m.col(j).iter().map(|&(r, c)| (r as usize, c)).collect()
}

/// One factor of an elementary tensor: a basis digit or a combination.
#[derive(Clone, Copy)]
enum Fac<'a> {
    Digit(usize),
    Sum(&'a [(usize, u32)]),
}

/// Coordinates of `c · f_1 ⊗ ⋯ ⊗ f_k` in the mixed-radix basis, pushed onto `out`.
fn expand(f: Field, radix: &[usize], factors: &[Fac], c: u32, out: &mut Vec<(u32, i64)>) {
    let mut acc: Vec<(usize, u32)> = vec![(0, c)];
    for (fac, &r) in factors.iter().zip(radix) {
        match *fac {
            Fac::Digit(d) => acc.iter_mut().for_each(|e| e.0 = e.0 * r + d),
            Fac::Sum(terms) => {
                let mut next = Vec::with_capacity(acc.len() * terms.len());
                for &(i, a) in &acc {
                    for &(d, b) in terms {
                        next.push((i * r + d, f.mul(a, b)));
                    }
                }
                acc = next;
            }
        }
        if acc.is_empty() {
            return;
        }
    }
    out.extend(acc.into_iter().map(|(i, a)| (i as u32, a as i64)));
}

fn decode(radix: &[usize], mut idx: usize, out: &mut Vec<usize>) {
    out.resize(radix.len(), 0);
    for k in (0..radix.len()).rev() {
        out[k] = idx % radix[k];
        idx /= radix[k];
    }
}

/// Matrix whose column at each source basis tensor is computed by `col`.
fn tensor_map(
    f: Field,
    tgt: &[usize],
    src: &[usize],
    col: impl Fn(&[usize], &mut Vec<(u32, i64)>) + Sync,
) -> SparseMatrix {
    let rows: usize = tgt.iter().product();
    let ncols: usize = src.iter().product();
    let cols: Vec<SVec> = (0..ncols)
        .into_par_iter()
        .map_init(
            || (Vec::new(), Vec::new()),
            |(digits, items), j| {
                decode(src, j, digits);
                items.clear();
                col(digits, items);
                svec_from(f, std::mem::take(items))
            },
        )
        .collect();
    SparseMatrix::from_cols(f, rows, cols).expect("images are in range")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Slot {
    A,
    M,
}

/// Products of `A` and its actions on `M` as sparse vectors.
struct Tables {
    field: Field,
    a: usize,
    m: usize,
    aa: Vec<Vec<Lin>>,
    ma: Vec<Vec<Lin>>,
    am: Vec<Vec<Lin>>,
    unit: Lin,
}

impl Tables {
    fn new(m: &BimoduleSpec) -> Self {
        let alg = m.algebra();
        let a = alg.dim();
        Tables {
            field: alg.field(),
            a,
            m: m.dim(),
            aa: (0..a).map(|i| (0..a).map(|j| sparse(alg.structure(i, j))).collect()).collect(),
            ma: (0..m.dim()).map(|x| (0..a).map(|j| column(m.right(j), x)).collect()).collect(),
            am: (0..a).map(|i| (0..m.dim()).map(|x| column(m.left(i), x)).collect()).collect(),
            unit: sparse(alg.unit()),
        }
    }

    fn radix(&self, s: Slot) -> usize {
        match s {
            Slot::A => self.a,
            Slot::M => self.m,
        }
    }

    fn product(&self, s: Slot, x: usize, t: Slot, y: usize) -> &[(usize, u32)] {
        match (s, t) {
            (Slot::A, Slot::A) => &self.aa[x][y],
            (Slot::M, Slot::A) => &self.ma[x][y],
            (Slot::A, Slot::M) => &self.am[x][y],
            (Slot::M, Slot::M) => unreachable!("marked slots are never adjacent"),
        }
    }
}

/// Output slot of a structure map, in terms of the source slots.
#[derive(Clone, Copy, Debug)]
enum Out {
    Src(usize),
    Mul(usize, usize),
    Unit,
}

fn word_map(t: &Tables, src: &[Slot], out: &[Out]) -> SparseMatrix {
    let kinds: Vec<Slot> = out
        .iter()
        .map(|o| match *o {
            Out::Src(q) => src[q],
            Out::Mul(q, r) => {
                if src[q] == Slot::M || src[r] == Slot::M {
                    Slot::M
                } else {
                    Slot::A
                }
            }
            Out::Unit => Slot::A,
        })
        .collect();
    let tgt: Vec<usize> = kinds.iter().map(|&k| t.radix(k)).collect();
    let srad: Vec<usize> = src.iter().map(|&k| t.radix(k)).collect();
    tensor_map(t.field, &tgt, &srad, |d, items| {
        let factors: Vec<Fac> = out
            .iter()
            .map(|o| match *o {
                Out::Src(q) => Fac::Digit(d[q]),
                Out::Mul(q, r) => Fac::Sum(t.product(src[q], d[q], src[r], d[r])),
                Out::Unit => Fac::Sum(&t.unit),
            })
            .collect();
        expand(t.field, &tgt, &factors, 1, items);
    })
}

/// Slots of degree `n` of the `p`-block object: `(M ⊗ A^{⊗n})^{⊗p}`.
fn block_slots(p: usize, n: usize) -> Vec<Slot> {
    (0..p * (n + 1)).map(|q| if q % (n + 1) == 0 { Slot::M } else { Slot::A }).collect()
}

/// `d_i` out of degree `n`: multiply positions `i, i + 1` of every block, the
/// last position of a block with the first of the next.
fn block_face(p: usize, n: usize, i: usize) -> Vec<Out> {
    let len = p * (n + 1);
    let mut out = Vec::with_capacity(p * n);
    if i == n {
        out.push(Out::Mul(len - 1, 0));
        let mut q = 1;
        while q + 1 < len {
            if q % (n + 1) == n {
                out.push(Out::Mul(q, q + 1));
                q += 2;
            } else {
                out.push(Out::Src(q));
                q += 1;
            }
        }
    } else {
        let mut q = 0;
        while q < len {
            if q % (n + 1) == i {
                out.push(Out::Mul(q, q + 1));
                q += 2;
            } else {
                out.push(Out::Src(q));
                q += 1;
            }
        }
    }
    out
}

/// `s_i` out of degree `n`: a unit after position `i` of every block.
fn block_degeneracy(p: usize, n: usize, i: usize) -> Vec<Out> {
    let mut out = Vec::with_capacity(p * (n + 2));
    for q in 0..p * (n + 1) {
        out.push(Out::Src(q));
        if q % (n + 1) == i {
            out.push(Out::Unit);
        }
    }
    out
}

/// Cyclic shift of the positions by `by` to the right.
fn rotation(len: usize, by: usize) -> Vec<Out> {
    (0..len).map(|q| Out::Src((q + len - by % len) % len)).collect()
}

/// The simplicial module with terms `(M ⊗ A^{⊗n})^{⊗p}` through degree
/// `bound`, and the Z/p-action moving each block to the next.
fn block_object(m: &BimoduleSpec, p: usize, bound: usize) -> Result<(SimplicialModule, Vec<SparseMatrix>)> {
    let t = Tables::new(m);
    let dim = |n: usize| -> Option<usize> {
        let per = t.a.checked_pow(n as u32)?.checked_mul(t.m)?;
        per.checked_pow(p as u32)
    };
    let top = dim(bound).ok_or_else(|| Error::budget("tensor powers overflow"))?;
    crate::budget::check(top as u64 * (2 * bound as u64 + 3), "cyclic tensor object")?;
    let dims: Vec<usize> = (0..=bound).map(|n| dim(n).expect("below the top")).collect();
    let faces = (0..=bound)
        .map(|n| {
            if n == 0 {
                return vec![];
            }
            let src = block_slots(p, n);
            (0..=n).map(|i| word_map(&t, &src, &block_face(p, n, i))).collect()
        })
        .collect();
    let degens = (0..=bound)
        .map(|n| {
            if n == bound {
                return vec![];
            }
            let src = block_slots(p, n);
            (0..=n).map(|i| word_map(&t, &src, &block_degeneracy(p, n, i))).collect()
        })
        .collect();
    let gens = (0..=bound).map(|n| word_map(&t, &block_slots(p, n), &rotation(p * (n + 1), n + 1))).collect();
    Ok((SimplicialModule::new(t.field, dims, faces, degens)?, gens))
}

/// `sd_p A_♯` built directly: the block object of `A` with the cyclic
/// operator `(−1)^n` times the rotation by one position. For `p = 1` this
/// is `A_♯` with `T_n = (−1)^n t_n`, `t(a_0, …, a_n) = (a_n, a_0, …, a_{n−1})`.
pub fn subdivided_object(a: &AlgebraSpec, p: usize, bound: usize) -> Result<CyclicModule> {
    let reg = BimoduleSpec::regular(a);
    let (simp, _) = block_object(&reg, p, bound)?;
    let t = Tables::new(&reg);
    let f = a.field();
    let ts = (0..=bound)
        .map(|n| word_map(&t, &block_slots(p, n), &rotation(p * (n + 1), 1)).scale(f.sign(n % 2 == 1)))
        .collect();
    CyclicModule::new(simp, ts, p)
}

/// `A_♯`, or `(M/A)_♯` with `M` in the marked slot when `M` is not `A`.
#[derive(Clone, Debug)]
pub enum HochschildObject {
    Cyclic(CyclicModule),
    Simplicial(SimplicialModule),
}

impl HochschildObject {
    pub fn simplicial(&self) -> &SimplicialModule {
        match self {
            HochschildObject::Cyclic(c) => c.simplicial(),
            HochschildObject::Simplicial(s) => s,
        }
    }
}

/// The cyclic object of `A` (or the simplicial object of `M`) through
/// degree `bound`; its normalized complex is the Hochschild complex.
pub fn cyclic_object(a: &AlgebraSpec, m: Option<&BimoduleSpec>, bound: usize) -> Result<HochschildObject> {
    match m {
        Some(m) if *m != BimoduleSpec::regular(a) => {
            if m.algebra() != a {
                return Err(Error::Validation("the bimodule is over a different algebra".into()));
            }
            Ok(HochschildObject::Simplicial(block_object(m, 1, bound)?.0))
        }
        _ => Ok(HochschildObject::Cyclic(subdivided_object(a, 1, bound)?)),
    }
}

/// Products on `M ⊗ Ā^{⊗n}` with `Ā = A / k·1`; the basis of `Ā` is that of
/// `A` without one coordinate where the unit is nonzero.
struct BarTables {
    field: Field,
    m: usize,
    abar: usize,
    aa: Vec<Vec<Lin>>,
    ma: Vec<Vec<Lin>>,
    am: Vec<Vec<Lin>>,
    /// `A → Ā` on basis vectors.
    to_bar: Vec<Lin>,
    unit: Lin,
}

impl BarTables {
    fn new(m: &BimoduleSpec) -> Self {
        let alg = m.algebra();
        let f = alg.field();
        let n = alg.dim();
        let unit = alg.unit();
        let u0 = unit.iter().position(|&c| c != 0).expect("the unit is nonzero");
        let keep: Vec<usize> = (0..n).filter(|&i| i != u0).collect();
        let slot: Vec<Option<usize>> = (0..n).map(|i| keep.iter().position(|&k| k == i)).collect();
        let inv = f.inv(unit[u0]);
        let proj = |v: &[u32]| -> Lin {
            let c = f.mul(v[u0], inv);
            (0..n)
                .filter_map(|i| {
                    let s = slot[i]?;
                    let x = f.sub(v[i], f.mul(c, unit[i]));
                    (x != 0).then_some((s, x))
                })
                .collect()
        };
        BarTables {
            field: f,
            m: m.dim(),
            abar: keep.len(),
            aa: keep.iter().map(|&i| keep.iter().map(|&j| proj(alg.structure(i, j))).collect()).collect(),
            ma: (0..m.dim()).map(|x| keep.iter().map(|&j| column(m.right(j), x)).collect()).collect(),
            am: keep.iter().map(|&i| (0..m.dim()).map(|x| column(m.left(i), x)).collect()).collect(),
            to_bar: (0..n).map(|i| proj(&alg.basis_vector(i))).collect(),
            unit: sparse(unit),
        }
    }

    fn radix(&self, n: usize) -> Vec<usize> {
        std::iter::once(self.m).chain(std::iter::repeat_n(self.abar, n)).collect()
    }

    /// `b` out of `M ⊗ Ā^{⊗n}`.
    fn b(&self, n: usize) -> SparseMatrix {
        let f = self.field;
        let (src, tgt) = (self.radix(n), self.radix(n - 1));
        tensor_map(f, &tgt, &src, |d, items| {
            let mut fac: Vec<Fac> = Vec::with_capacity(n);
            fac.push(Fac::Sum(&self.ma[d[0]][d[1]]));
            fac.extend(d[2..].iter().map(|&x| Fac::Digit(x)));
            expand(f, &tgt, &fac, 1, items);
            for i in 1..n {
                fac.clear();
                fac.extend(d[..i].iter().map(|&x| Fac::Digit(x)));
                fac.push(Fac::Sum(&self.aa[d[i]][d[i + 1]]));
                fac.extend(d[i + 2..].iter().map(|&x| Fac::Digit(x)));
                expand(f, &tgt, &fac, f.sign(i % 2 == 1), items);
            }
            fac.clear();
            fac.push(Fac::Sum(&self.am[d[n]][d[0]]));
            fac.extend(d[1..n].iter().map(|&x| Fac::Digit(x)));
            expand(f, &tgt, &fac, f.sign(n % 2 == 1), items);
        })
    }

    /// Connes' `B(a_0 ⊗ ⋯ ⊗ a_n) = Σ_i (−1)^{ni} 1 ⊗ a_i ⊗ ⋯ ⊗ a_n ⊗ a_0 ⊗ ⋯ ⊗ a_{i−1}`
    /// for `M = A`.
    fn connes(&self, n: usize) -> SparseMatrix {
        let f = self.field;
        let (src, tgt) = (self.radix(n), self.radix(n + 1));
        tensor_map(f, &tgt, &src, |d, items| {
            let mut fac: Vec<Fac> = Vec::with_capacity(n + 2);
            for i in 0..=n {
                fac.clear();
                fac.push(Fac::Sum(&self.unit));
                for k in (i..=n).chain(0..i) {
                    fac.push(if k == 0 { Fac::Sum(&self.to_bar[d[0]]) } else { Fac::Digit(d[k]) });
                }
                expand(f, &tgt, &fac, f.sign((n * i) % 2 == 1), items);
            }
        })
    }
}

fn check_algebra(a: &AlgebraSpec, m: &BimoduleSpec) -> Result<()> {
    if m.algebra() != a {
        return Err(Error::Validation("the bimodule is over a different algebra".into()));
    }
    Ok(())
}

/// The normalized Hochschild complex `M ⊗ Ā^{⊗n}` on degrees
/// `0..=max_degree + 1`, open above.
pub fn hochschild_complex(a: &AlgebraSpec, m: &BimoduleSpec, max_degree: usize) -> Result<ChainComplex> {
    check_algebra(a, m)?;
    let bt = BarTables::new(m);
    let top = max_degree + 1;
    let dims: Vec<usize> = (0..=top).map(|n| bt.radix(n).iter().product()).collect();
    crate::budget::check(dims.iter().map(|&d| d as u64 * (top as u64 + 1)).sum(), "Hochschild complex")?;
    let diffs = (1..=top).map(|n| bt.b(n)).collect();
    Ok(ChainComplex::new(a.field(), 0, dims, diffs)?.with_open_edges(false, true))
}

/// `dim Tr_A(M)`, the coend of `M` over the one-object linear category of `A`.
pub fn trace_dim(m: &BimoduleSpec) -> Result<usize> {
    let a = m.algebra();
    let f = a.field();
    let n = a.dim();
    let cat = LinearCat::from_algebra(f, n, |g, h| sparse(a.structure(g, h)), sparse(a.unit()))?;
    let op = Opposite(&cat);
    let env = Product::new(&op, &cat, f);
    // (u, v) ∈ A^o × A acts by x ↦ v x u
    let rep = Representation::new(&env, f, vec![m.dim()], |_, _, idx| m.left(idx % n).dot(m.right(idx / n)))?;
    Ok(coend_trace(&cat, &rep))
}

/// `HH_•(A, M)` in degrees `0..=max_degree`, with `HH_0` checked against the trace.
pub fn hochschild(a: &AlgebraSpec, m: &BimoduleSpec, max_degree: usize) -> Result<Vec<Betti>> {
    let h = hochschild_complex(a, m, max_degree)?.homology_dims();
    let dims: Vec<Betti> = (0..=max_degree as i64).map(|n| h[&n]).collect();
    let tr = trace_dim(m)?;
    if dims[0] != Betti::Dim(tr) {
        return Err(Error::Validation(format!("HH_0 = {} but the trace has dimension {tr}", dims[0])));
    }
    Ok(dims)
}

/// The normalized mixed complex `(M ⊗ Ā^{⊗n}, b, B)` of `A` for `n ≤ n_max`,
/// with the mixed identities checked.
pub fn mixed_window(a: &AlgebraSpec, n_max: usize) -> Result<MixedComplex> {
    let bt = BarTables::new(&BimoduleSpec::regular(a));
    let f = a.field();
    let dims: Vec<usize> = (0..=n_max).map(|n| bt.radix(n).iter().product()).collect();
    crate::budget::check(dims.iter().map(|&d| d as u64 * (n_max as u64 + 1)).sum(), "mixed complex")?;
    let mut mc = MixedComplex::new(f, n_max as i64, 0, None);
    for (n, &d) in dims.iter().enumerate() {
        mc.add_cell((n as i64, 0), d);
    }
    for n in 0..=n_max {
        let ni = n as i64;
        if n >= 1 {
            mc.add_b((ni, 0), (ni - 1, 0), bt.b(n))?;
        }
        if n < n_max {
            mc.add_connes((ni, 0), (ni + 1, 0), bt.connes(n))?;
        }
    }
    mc.check_identities()?;
    Ok(mc)
}

/// Hochschild, cyclic and periodic homology of one algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicReport {
    pub hh: Vec<Betti>,
    pub hc: Vec<Betti>,
    /// `HP_n` where the `u`-tower is stable across two windows.
    pub hp: Vec<Windowed>,
}

/// `HC` by the Connes bicomplex of `A_♯`, cross-checked against the mixed
/// complex; `HP` from the mixed complex at windows `window` and `window + 1`;
/// the long exact sequence `HH → HC → HC[−2]` is checked for consistency.
pub fn hc_hp(a: &AlgebraSpec, max_degree: usize, window: usize) -> Result<CyclicReport> {
    let n_max = max_degree + 2 * window + 3;
    let mc = mixed_window(a, n_max)?;
    let top = max_degree as i64;
    let hh = mc.hochschild(0, top)?;
    let hc = mc.cyclic(0, top)?;
    let HochschildObject::Cyclic(sharp) = cyclic_object(a, None, max_degree + 1)? else {
        unreachable!("A over itself is cyclic")
    };
    let lam = lambda_homology(&sharp, max_degree, max_degree + 2)?;
    if lam.dims != hc {
        return Err(Error::Validation("cyclic bicomplex and mixed complex disagree".into()));
    }
    let shifted: Vec<Betti> =
        (0..=max_degree).map(|n| if n < 2 { Betti::Dim(0) } else { hc[n - 2] }).collect();
    if !triangle_consistent(&hh, &hc, &shifted) {
        return Err(Error::Validation("HH → HC → HC[−2] admits no long exact sequence".into()));
    }
    let hp = (0..=top)
        .map(|n| Ok(Windowed { degree: n, dim: mc.periodic(n, window as i64)? }))
        .collect::<Result<Vec<_>>>()?;
    Ok(CyclicReport { hh, hc, hp })
}

/// How co-periodic homology is computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoperiodicRoute {
    /// `b + uB` on the mixed complex, truncated in `u`.
    Direct,
    /// Cyclic homology of the degreewise Tate complexes of `sd_p A_♯`.
    Tate,
}

/// The prime field for a characteristic given on input; 0 is refused.
pub fn characteristic(p: u64) -> Result<Field> {
    if p == 0 {
        return Err(Error::UnsupportedCharacteristic(
            "co-periodic and Tate constructions need a prime characteristic".into(),
        ));
    }
    Field::new(p)
}

/// Co-periodic homology in degrees `−max_degree..=max_degree`. Every degree
/// is computed at two windows and reported only where they agree.
pub fn cpbar(a: &AlgebraSpec, max_degree: usize, window: usize, route: CoperiodicRoute) -> Result<Vec<Windowed>> {
    let (lo, hi) = (-(max_degree as i64), max_degree as i64);
    match route {
        CoperiodicRoute::Direct => {
            let mc = mixed_window(a, max_degree + 2 * window + 3)?;
            mc.coperiodic(lo, hi, window as i64)
        }
        CoperiodicRoute::Tate => {
            let p = a.field().p() as usize;
            let widths = [2 * window as i64, 2 * window as i64 + 2];
            let n_max = (hi + 1 + widths[1]) as usize;
            let sd = subdivided_object(a, p, n_max + 1)?;
            let rt = relative_tate_cyclic(&sd)?;
            let runs = widths
                .iter()
                .map(|&w| {
                    let mc = rt.mixed(0, -w, (hi + 1 + w) as usize, hi + 1)?;
                    mc.check_identities()?;
                    mc.cyclic(lo, hi)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((lo..=hi)
                .zip(runs[0].iter().zip(&runs[1]))
                .map(|(degree, (x, y))| Windowed {
                    degree,
                    dim: match (x, y) {
                        (Betti::Dim(x), Betti::Dim(y)) if x == y => Some(*x),
                        _ => None,
                    },
                })
                .collect())
        }
    }
}

/// `HH^{(p)}_•` with, when the coefficients are `A` itself, the ranks of
/// Connes' operator `HH^{(p)}_d → HH^{(p)}_{d+1}` for `d < max_degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceReport {
    pub dims: Vec<Betti>,
    pub connes_ranks: Option<Vec<usize>>,
}

/// The p-cyclic-power trace: `τ_{≥0}` of the Tate complexes of the Z/p-action
/// on `(M ⊗ A^{⊗n})^{⊗p}` shifted by one, totalized over Δ^o. For `A = M = k`
/// degree `i + 1` is `H_i(Z/p, k)`, and `B` out of it is the group-homology `B_i`.
pub fn hh_p_trace(a: &AlgebraSpec, m: Option<&BimoduleSpec>, max_degree: usize) -> Result<TraceReport> {
    let p = a.field().p() as usize;
    let top = max_degree as i64;
    match m {
        Some(m) if *m != BimoduleSpec::regular(a) => {
            check_algebra(a, m)?;
            let (simp, gens) = block_object(m, p, max_degree + 1)?;
            let rt = RelativeTate::from_action(simp, gens, p)?;
            let mc = rt.mixed(1, 0, max_degree + 1, top + 1)?;
            Ok(TraceReport { dims: mc.hochschild(0, top)?, connes_ranks: None })
        }
        _ => {
            let sd = subdivided_object(a, p, max_degree + 3)?;
            let rt = relative_tate_cyclic(&sd)?;
            let mc = rt.mixed(1, 0, max_degree + 2, top + 2)?;
            mc.check_identities()?;
            let dims = mc.hochschild(0, top)?;
            let ranks = (0..top).map(|d| Ok(mc.connes_on_homology(d)?.2.rank())).collect::<Result<Vec<_>>>()?;
            Ok(TraceReport { dims, connes_ranks: Some(ranks) })
        }
    }
}

/// The conjugate-filtration model: cyclic homology of `V_0 = τ_{≥0}` of the
/// Tate complexes of `sd_p A_♯`, the Tate periodicity on it, and the graded
/// pieces of `V_i = τ_{≥−2i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugateReport {
    pub dims: Vec<Betti>,
    /// Rank of the periodicity `H_n → H_{n+2}`: the identification
    /// `V_0[2] ≅ τ_{≥2}` followed by the inclusion `τ_{≥2} ⊂ V_0`.
    pub u_ranks: BTreeMap<i64, usize>,
    /// `graded[i]`: `dim H(V_i) − dim H(V_{i−1})` by cohomological degree,
    /// zero entries omitted.
    pub graded: Vec<BTreeMap<i64, i64>>,
}

pub fn thh_conjugate(a: &AlgebraSpec, max_degree: usize, window: usize) -> Result<ConjugateReport> {
    let p = a.field().p() as usize;
    let top = max_degree as i64;
    let w = window as i64;
    let n_max = max_degree + 1 + 2 * window;
    let sd = subdivided_object(a, p, n_max + 1)?;
    let rt = relative_tate_cyclic(&sd)?;
    let filtered = |i: i64| -> Result<MixedComplex> {
        let mc = rt.mixed(0, -2 * i, (top + 1 + 2 * i.max(0)) as usize, top + 1)?;
        mc.check_identities()?;
        Ok(mc)
    };
    let v0 = filtered(0)?;
    let above = filtered(-1)?;
    let dims = v0.cyclic(0, top)?;
    let shifted = above.cyclic(0, top)?;
    let incl = rt.truncation_inclusion(0, 0, 2, max_degree + 1, top + 1)?;
    let mut u_ranks = BTreeMap::new();
    for n in 0..=top - 2 {
        if shifted[(n + 2) as usize] != dims[n as usize] {
            return Err(Error::Validation(format!("τ_{{≥2}} is not V_0 shifted by two in degree {n}")));
        }
        u_ranks.insert(n, above.cyclic_map_on_homology(&v0, &incl, n + 2)?.rank());
    }
    let lo = -2 * w;
    let mut prev = above.cyclic(lo, top)?;
    let mut graded = Vec::new();
    for i in 0..=w {
        let cur = if i == 0 { v0.cyclic(lo, top)? } else { filtered(i)?.cyclic(lo, top)? };
        let mut g = BTreeMap::new();
        for (k, (x, y)) in cur.iter().zip(&prev).enumerate() {
            let (Some(x), Some(y)) = (x.dim(), y.dim()) else {
                return Err(Error::Validation("filtration step is not determinate in the window".into()));
            };
            if x != y {
                g.insert(-(lo + k as i64), x as i64 - y as i64);
            }
        }
        graded.push(g);
        prev = cur;
    }
    Ok(ConjugateReport { dims, u_ranks, graded })
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

    fn hh(a: &AlgebraSpec, n: usize) -> Vec<usize> {
        dims(&hochschild(a, &BimoduleSpec::regular(a), n).unwrap())
    }

    #[test]
    fn hochschild_of_small_algebras() {
        for p in [2, 3] {
            assert_eq!(hh(&AlgebraSpec::prime_field(f(p)), 4), vec![1, 0, 0, 0, 0]);
        }
        assert_eq!(hh(&AlgebraSpec::dual_numbers(f(2)), 4), vec![2; 5]);
        assert_eq!(hh(&AlgebraSpec::dual_numbers(f(3)), 4), vec![2, 1, 1, 1, 1]);
        assert_eq!(hh(&AlgebraSpec::upper_triangular(f(3)), 3), vec![2, 0, 0, 0]);
        assert_eq!(hh(&AlgebraSpec::cyclic_group_algebra(f(3), 3), 3), vec![3; 4]);
    }

    #[test]
    fn kunneth_for_dual_numbers() {
        let d = AlgebraSpec::dual_numbers(f(2));
        let dd = d.tensor(&d).unwrap();
        let one = hh(&d, 3);
        let two = hh(&dd, 3);
        let conv: Vec<usize> = (0..=3).map(|n| (0..=n).map(|i| one[i] * one[n - i]).sum()).collect();
        assert_eq!(two, conv);
    }

    #[test]
    fn bimodule_coefficients() {
        let a = AlgebraSpec::dual_numbers(f(2));
        let reg = BimoduleSpec::regular(&a);
        let two = reg.direct_sum(&reg).unwrap();
        assert_eq!(dims(&hochschild(&a, &two, 3).unwrap()), vec![4; 4]);
        let other = AlgebraSpec::prime_field(f(2));
        assert!(hochschild(&other, &reg, 2).is_err());
    }

    #[test]
    fn cyclic_object_matches_hochschild_complex() {
        let a = AlgebraSpec::cyclic_group_algebra(f(3), 3);
        let HochschildObject::Cyclic(c) = cyclic_object(&a, None, 3).unwrap() else { panic!() };
        for n in 0..=3 {
            assert_eq!(c.simplicial().dim(n), 3usize.pow(n as u32 + 1));
        }
        let d = AlgebraSpec::dual_numbers(f(2));
        let obj = cyclic_object(&d, None, 5).unwrap();
        let norm = obj.simplicial().normalized_complex().homology_dims();
        let unnorm = obj.simplicial().unnormalized_complex().homology_dims();
        for n in 0..=4 {
            assert_eq!(norm[&n], Betti::Dim(2));
            assert_eq!(unnorm[&n], Betti::Dim(2));
        }
        let k = AlgebraSpec::prime_field(f(5));
        let norm = cyclic_object(&k, None, 4).unwrap().simplicial().normalized_complex();
        assert_eq!(norm.dim(0), 1);
        assert!((1..=4).all(|n| norm.dim(n) == 0));
        // marked slot: M = A ⊕ A
        let reg = BimoduleSpec::regular(&d);
        let m = reg.direct_sum(&reg).unwrap();
        let HochschildObject::Simplicial(s) = cyclic_object(&d, Some(&m), 4).unwrap() else { panic!() };
        assert_eq!(s.dim(2), 4 * 4);
        let h = s.normalized_complex().homology_dims();
        assert!((0..=3).all(|n| h[&n] == Betti::Dim(4)));
    }

    #[test]
    fn direct_subdivision_matches_edgewise() {
        let d = AlgebraSpec::dual_numbers(f(2));
        let HochschildObject::Cyclic(c) = cyclic_object(&d, None, 7).unwrap() else { panic!() };
        let sd = c.edgewise_sd(2, 3).unwrap();
        let direct = subdivided_object(&d, 2, 3).unwrap();
        for n in 0..=3 {
            assert_eq!(sd.t(n), direct.t(n));
            for i in 0..=n {
                if n > 0 {
                    assert_eq!(sd.simplicial().face(n, i), direct.simplicial().face(n, i));
                }
                if n < 3 {
                    assert_eq!(sd.simplicial().degen(n, i), direct.simplicial().degen(n, i));
                }
            }
        }
    }

    #[test]
    fn cyclic_and_periodic_homology() {
        for p in [2, 3] {
            let r = hc_hp(&AlgebraSpec::prime_field(f(p)), 4, 2).unwrap();
            assert_eq!(dims(&r.hc), vec![1, 0, 1, 0, 1]);
            for w in &r.hp {
                assert_eq!(w.dim, Some(usize::from(w.degree % 2 == 0)));
            }
        }
        let k = AlgebraSpec::prime_field(f(2));
        let kk = k.product(&k).unwrap();
        let r = hc_hp(&kk, 4, 2).unwrap();
        assert_eq!(dims(&r.hc), vec![2, 0, 2, 0, 2]);
        for w in &r.hp {
            assert_eq!(w.dim, Some(2 * usize::from(w.degree % 2 == 0)));
        }
        hc_hp(&AlgebraSpec::dual_numbers(f(3)), 3, 1).unwrap();
    }

    #[test]
    fn coperiodic_routes() {
        for p in [2, 3] {
            let k = AlgebraSpec::prime_field(f(p));
            for route in [CoperiodicRoute::Direct, CoperiodicRoute::Tate] {
                let cp = cpbar(&k, 3, 2, route).unwrap();
                for w in cp {
                    assert_eq!(w.dim, Some(usize::from(w.degree % 2 == 0)), "{route:?} degree {}", w.degree);
                }
            }
        }
        assert!(matches!(characteristic(0), Err(Error::UnsupportedCharacteristic(_))));
    }

    #[test]
    fn p_cyclic_trace_of_the_prime_field() {
        for p in [2, 3] {
            let k = AlgebraSpec::prime_field(f(p));
            let r = hh_p_trace(&k, None, 8).unwrap();
            assert_eq!(dims(&r.dims), vec![1; 9]);
            let ranks = r.connes_ranks.unwrap();
            // B_i on H_i(Z/p, k) = HH^{(p)}_{i+1}: identity for i even, zero for i odd
            assert_eq!(ranks[0], 0);
            for (i, &rk) in ranks[1..].iter().enumerate() {
                assert_eq!(rk, usize::from(i % 2 == 0), "B_{i}");
            }
            let reg = BimoduleSpec::regular(&k);
            let m = reg.direct_sum(&reg).unwrap();
            let r = hh_p_trace(&k, Some(&m), 4).unwrap();
            assert_eq!(dims(&r.dims), vec![2; 5]);
        }
    }

    #[test]
    fn conjugate_filtration_of_the_prime_field() {
        for p in [2, 3] {
            let r = thh_conjugate(&AlgebraSpec::prime_field(f(p)), 6, 2).unwrap();
            assert_eq!(dims(&r.dims), vec![1, 0, 1, 0, 1, 0, 1]);
            for (&n, &rk) in &r.u_ranks {
                assert_eq!(rk, usize::from(n % 2 == 0), "periodicity out of degree {n}");
            }
            for (i, g) in r.graded.iter().enumerate() {
                assert_eq!(g, &BTreeMap::from([(2 * i as i64, 1)]));
            }
        }
    }
}
