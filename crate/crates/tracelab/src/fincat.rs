//! Finite categories and functor homology.
//!
//! A category exposes its hom-sets through a basis: for an ordinary category
//! the basis is the set of morphisms and composites are single basis
//! elements; for a k-linear category given by structure constants composites
//! are linear combinations. Functors are matrices on basis morphisms.
//!
//! Derived functors are computed from projective resolutions by
//! representables. Each resolution step covers the current kernel greedily,
//! object by object in declaration order, adding a generator only for kernel
//! vectors not yet reached by earlier generators.

use std::collections::HashMap;

use crate::budget;
use crate::chains::{Betti, ChainComplex};
use crate::error::{Error, Result};
use crate::linalg::{svec_from, Accumulator, Echelon, Field, SVec, SparseMatrix};

/// Linear combination of basis morphisms: `(index, coefficient)`.
pub type Lin = Vec<(usize, u32)>;

pub trait Category: Sync {
    fn objects(&self) -> usize;

    fn name(&self, a: usize) -> String {
        a.to_string()
    }

    /// Size of the basis of `Hom(a, b)`.
    fn hom(&self, a: usize, b: usize) -> usize;

    /// `g ∘ f` for basis elements `f: a → b`, `g: b → c`.
    fn compose(&self, a: usize, b: usize, c: usize, g: usize, f: usize) -> Lin;

    fn identity(&self, a: usize) -> Lin;
}

/// An ordinary finite category with a full composition table.
#[derive(Clone, Debug)]
pub struct TableCat {
    names: Vec<String>,
    homs: Vec<Vec<usize>>,
    ident: Vec<usize>,
    /// `comp[(a·n + b)·n + c][g·hom(a,b) + f]`
    comp: Vec<Vec<u32>>,
}

impl TableCat {
    /// Fills the composition table from `compose(a, b, c, g, f)` and checks
    /// unit and associativity laws on every composable triple.
    pub fn new(
        names: Vec<String>,
        homs: Vec<Vec<usize>>,
        ident: Vec<usize>,
        compose: impl Fn(usize, usize, usize, usize, usize) -> usize,
    ) -> Result<Self> {
        let n = names.len();
        if homs.len() != n || homs.iter().any(|r| r.len() != n) || ident.len() != n {
            return Err(Error::InvalidFunctor("hom table does not match object list".into()));
        }
        let mut comp = vec![Vec::new(); n * n * n];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let (ab, bc, ac) = (homs[a][b], homs[b][c], homs[a][c]);
                    let mut t = Vec::with_capacity(ab * bc);
                    for g in 0..bc {
                        for f in 0..ab {
                            let h = compose(a, b, c, g, f);
                            if h >= ac {
                                return Err(Error::InvalidFunctor(format!(
                                    "composite of morphisms {f}: {a}→{b} and {g}: {b}→{c} out of range"
                                )));
                            }
                            t.push(h as u32);
                        }
                    }
                    comp[(a * n + b) * n + c] = t;
                }
            }
        }
        let cat = TableCat { names, homs, ident, comp };
        cat.verify()?;
        Ok(cat)
    }

    /// A group (or monoid) as a one-object category, `g ∘ f = g·f`.
    pub fn one_object(name: &str, order: usize, mult: impl Fn(usize, usize) -> usize, unit: usize) -> Result<Self> {
        TableCat::new(vec![name.to_string()], vec![vec![order]], vec![unit], |_, _, _, g, f| mult(g, f))
    }

    /// The poset `[n] = {0 < 1 < … < n}`.
    pub fn ordinal(n: usize) -> Self {
        let m = n + 1;
        let homs = (0..m).map(|a| (0..m).map(|b| usize::from(a <= b)).collect()).collect();
        TableCat::new((0..m).map(|i| i.to_string()).collect(), homs, vec![0; m], |_, _, _, _, _| 0)
            .expect("posets are categories")
    }

    fn c(&self, a: usize, b: usize, c: usize, g: usize, f: usize) -> usize {
        let n = self.names.len();
        self.comp[(a * n + b) * n + c][g * self.homs[a][b] + f] as usize
    }

    fn verify(&self) -> Result<()> {
        let n = self.names.len();
        for a in 0..n {
            if self.ident[a] >= self.homs[a][a] {
                return Err(Error::InvalidFunctor(format!("object {a} has no identity")));
            }
            for b in 0..n {
                for f in 0..self.homs[a][b] {
                    if self.c(a, b, b, self.ident[b], f) != f || self.c(a, a, b, f, self.ident[a]) != f {
                        return Err(Error::InvalidFunctor(format!("unit law fails for {f}: {a}→{b}")));
                    }
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        for f in 0..self.homs[a][b] {
                            for g in 0..self.homs[b][c] {
                                let gf = self.c(a, b, c, g, f);
                                for h in 0..self.homs[c][d] {
                                    let l = self.c(a, c, d, h, gf);
                                    let r = self.c(a, b, d, self.c(b, c, d, h, g), f);
                                    if l != r {
                                        return Err(Error::InvalidFunctor(format!(
                                            "associativity fails on {a}→{b}→{c}→{d}"
                                        )));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Twisted arrow category: objects are morphisms `f: a → b`; a map from
    /// `f` to `f'` is a pair `(u: a' → a, v: b → b')` with `f' = v f u`.
    /// Returns the category and, per object, its `(source, target)`; per
    /// morphism, the pair `(u, v)`.
    pub fn twisted_arrows(&self) -> Result<TwistedArrows> {
        let n = self.names.len();
        let mut objs = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for f in 0..self.homs[a][b] {
                    objs.push((a, b, f));
                }
            }
        }
        let m = objs.len();
        let mut pairs: Vec<Vec<Vec<(usize, usize)>>> = vec![vec![Vec::new(); m]; m];
        let mut index: HashMap<(usize, usize, usize, usize), usize> = HashMap::new();
        for (x, &(a, b, f)) in objs.iter().enumerate() {
            for (y, &(a2, b2, f2)) in objs.iter().enumerate() {
                for u in 0..self.homs[a2][a] {
                    for v in 0..self.homs[b][b2] {
                        let vf = self.c(a, b, b2, v, f);
                        if self.c(a2, a, b2, vf, u) == f2 {
                            index.insert((x, y, u, v), pairs[x][y].len());
                            pairs[x][y].push((u, v));
                        }
                    }
                }
            }
        }
        let homs = (0..m).map(|x| (0..m).map(|y| pairs[x][y].len()).collect()).collect();
        let ident = objs
            .iter()
            .enumerate()
            .map(|(x, &(a, b, _))| index[&(x, x, self.ident[a], self.ident[b])])
            .collect();
        let names = objs.iter().map(|&(a, b, f)| format!("{f}:{}→{}", self.names[a], self.names[b])).collect();
        let cat = TableCat::new(names, homs, ident, |x, y, z, g, f| {
            // f = (u1, v1): x → y, g = (u2, v2): y → z; composite (u1 u2, v2 v1)
            let (u1, v1) = pairs[x][y][f];
            let (u2, v2) = pairs[y][z][g];
            let (ax, bx, _) = objs[x];
            let (ay, by, _) = objs[y];
            let (az, bz, _) = objs[z];
            let u = self.c(az, ay, ax, u1, u2);
            let v = self.c(bx, by, bz, v2, v1);
            index[&(x, z, u, v)]
        })?;
        Ok(TwistedArrows { cat, objs, pairs })
    }
}

impl Category for TableCat {
    fn objects(&self) -> usize {
        self.names.len()
    }

    fn name(&self, a: usize) -> String {
        self.names[a].clone()
    }

    fn hom(&self, a: usize, b: usize) -> usize {
        self.homs[a][b]
    }

    fn compose(&self, a: usize, b: usize, c: usize, g: usize, f: usize) -> Lin {
        vec![(self.c(a, b, c, g, f), 1)]
    }

    fn identity(&self, a: usize) -> Lin {
        vec![(self.ident[a], 1)]
    }
}

/// Twisted arrow category together with its projection to `I^o × I`.
pub struct TwistedArrows {
    pub cat: TableCat,
    pub objs: Vec<(usize, usize, usize)>,
    pairs: Vec<Vec<Vec<(usize, usize)>>>,
}

impl TwistedArrows {
    /// The pair `(u, v)` of the `k`-th morphism `x → y`.
    pub fn pair(&self, x: usize, y: usize, k: usize) -> (usize, usize) {
        self.pairs[x][y][k]
    }
}

/// A k-linear category presented by bases of hom-spaces and structure constants.
#[derive(Clone, Debug)]
pub struct LinearCat {
    field: Field,
    names: Vec<String>,
    homs: Vec<Vec<usize>>,
    ident: Vec<Lin>,
    /// `consts[(a·n + b)·n + c][g·hom(a,b) + f]`
    consts: Vec<Vec<Lin>>,
}

impl LinearCat {
    /// A one-object category from an algebra: `g ∘ f = g·f`.
    pub fn from_algebra(field: Field, dim: usize, mult: impl Fn(usize, usize) -> Lin, unit: Lin) -> Result<Self> {
        let mut t = Vec::with_capacity(dim * dim);
        for g in 0..dim {
            for f in 0..dim {
                t.push(normalize(field, mult(g, f)));
            }
        }
        let cat = LinearCat {
            field,
            names: vec!["*".into()],
            homs: vec![vec![dim]],
            ident: vec![normalize(field, unit)],
            consts: vec![t],
        };
        cat.verify()?;
        Ok(cat)
    }

    /// Linearization of an ordinary category.
    pub fn linearize(field: Field, c: &dyn Category) -> Result<Self> {
        let n = c.objects();
        let mut consts = vec![Vec::new(); n * n * n];
        for a in 0..n {
            for b in 0..n {
                for cc in 0..n {
                    let mut t = Vec::new();
                    for g in 0..c.hom(b, cc) {
                        for f in 0..c.hom(a, b) {
                            t.push(normalize(field, c.compose(a, b, cc, g, f)));
                        }
                    }
                    consts[(a * n + b) * n + cc] = t;
                }
            }
        }
        let cat = LinearCat {
            field,
            names: (0..n).map(|a| c.name(a)).collect(),
            homs: (0..n).map(|a| (0..n).map(|b| c.hom(a, b)).collect()).collect(),
            ident: (0..n).map(|a| normalize(field, c.identity(a))).collect(),
            consts,
        };
        cat.verify()?;
        Ok(cat)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    fn verify(&self) -> Result<()> {
        let n = self.names.len();
        let f = self.field;
        // bilinear extension of composition
        let comp = |a: usize, b: usize, c: usize, g: &Lin, h: &Lin| -> Lin {
            let mut items = Vec::new();
            for &(gi, gc) in g {
                for &(hi, hc) in h {
                    for &(k, v) in &self.compose(a, b, c, gi, hi) {
                        items.push((k as u32, f.mul(f.mul(gc, hc), v) as i64));
                    }
                }
            }
            svec_from(f, items).into_iter().map(|(k, v)| (k as usize, v)).collect()
        };
        for a in 0..n {
            for b in 0..n {
                for x in 0..self.homs[a][b] {
                    let e = vec![(x, 1)];
                    if comp(a, b, b, &self.ident[b], &e) != e || comp(a, a, b, &e, &self.ident[a]) != e {
                        return Err(Error::InvalidFunctor(format!("unit law fails on basis {x}: {a}→{b}")));
                    }
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        for x in 0..self.homs[a][b] {
                            for y in 0..self.homs[b][c] {
                                let yx = self.compose(a, b, c, y, x);
                                for z in 0..self.homs[c][d] {
                                    let l = comp(a, c, d, &vec![(z, 1)], &yx);
                                    let zy = self.compose(b, c, d, z, y);
                                    let r = comp(a, b, d, &zy, &vec![(x, 1)]);
                                    if l != r {
                                        return Err(Error::InvalidFunctor(format!(
                                            "associativity fails on {a}→{b}→{c}→{d}"
                                        )));
                                    }
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

fn normalize(f: Field, l: Lin) -> Lin {
    svec_from(f, l.into_iter().map(|(k, v)| (k as u32, v as i64)).collect())
        .into_iter()
        .map(|(k, v)| (k as usize, v))
        .collect()
}

impl Category for LinearCat {
    fn objects(&self) -> usize {
        self.names.len()
    }

    fn name(&self, a: usize) -> String {
        self.names[a].clone()
    }

    fn hom(&self, a: usize, b: usize) -> usize {
        self.homs[a][b]
    }

    fn compose(&self, a: usize, b: usize, c: usize, g: usize, f: usize) -> Lin {
        let n = self.names.len();
        self.consts[(a * n + b) * n + c][g * self.homs[a][b] + f].clone()
    }

    fn identity(&self, a: usize) -> Lin {
        self.ident[a].clone()
    }
}

/// The opposite category; hom bases are shared with the original.
pub struct Opposite<'a>(pub &'a dyn Category);

impl Category for Opposite<'_> {
    fn objects(&self) -> usize {
        self.0.objects()
    }

    fn name(&self, a: usize) -> String {
        self.0.name(a)
    }

    fn hom(&self, a: usize, b: usize) -> usize {
        self.0.hom(b, a)
    }

    fn compose(&self, a: usize, b: usize, c: usize, g: usize, f: usize) -> Lin {
        self.0.compose(c, b, a, f, g)
    }

    fn identity(&self, a: usize) -> Lin {
        self.0.identity(a)
    }
}

/// Product category; object `(a, b)` is numbered `a·|B| + b`, morphism
/// `(u, v)` is numbered `u·|Hom_B| + v`. The field reduces products of
/// structure constants.
pub struct Product<'a> {
    pub left: &'a dyn Category,
    pub right: &'a dyn Category,
    pub field: Field,
}

impl<'a> Product<'a> {
    pub fn new(left: &'a dyn Category, right: &'a dyn Category, field: Field) -> Self {
        Product { left, right, field }
    }

    pub fn split(&self, x: usize) -> (usize, usize) {
        let nb = self.right.objects();
        (x / nb, x % nb)
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        a * self.right.objects() + b
    }
}

impl Category for Product<'_> {
    fn objects(&self) -> usize {
        self.left.objects() * self.right.objects()
    }

    fn name(&self, x: usize) -> String {
        let (a, b) = self.split(x);
        format!("({},{})", self.left.name(a), self.right.name(b))
    }

    fn hom(&self, x: usize, y: usize) -> usize {
        let ((a, b), (c, d)) = (self.split(x), self.split(y));
        self.left.hom(a, c) * self.right.hom(b, d)
    }

    fn compose(&self, x: usize, y: usize, z: usize, g: usize, f: usize) -> Lin {
        let ((a0, b0), (a1, b1), (a2, b2)) = (self.split(x), self.split(y), self.split(z));
        let (nf, ng) = (self.right.hom(b0, b1), self.right.hom(b1, b2));
        let u = self.left.compose(a0, a1, a2, g / ng, f / nf);
        let v = self.right.compose(b0, b1, b2, g % ng, f % nf);
        tensor_lin(self.field, &u, &v, self.right.hom(b0, b2))
    }

    fn identity(&self, x: usize) -> Lin {
        let (a, b) = self.split(x);
        tensor_lin(self.field, &self.left.identity(a), &self.right.identity(b), self.right.hom(b, b))
    }
}

fn tensor_lin(f: Field, u: &[(usize, u32)], v: &[(usize, u32)], nv: usize) -> Lin {
    let mut out = Vec::with_capacity(u.len() * v.len());
    for &(i, a) in u {
        for &(j, b) in v {
            out.push((i * nv + j, f.mul(a % f.p(), b % f.p())));
        }
    }
    out.sort_unstable();
    out
}

/// A covariant functor to finite-dimensional F_p-spaces.
pub trait Functor: Sync {
    fn field(&self) -> Field;

    fn dim(&self, a: usize) -> usize;

    /// Matrix of the basis morphism `f: a → b`, of shape `dim(b) × dim(a)`.
    fn act(&self, a: usize, b: usize, f: usize) -> SparseMatrix;
}

/// Composite-respecting check on every composable pair of basis morphisms.
pub fn check_functor(cat: &dyn Category, m: &dyn Functor) -> Result<()> {
    let n = cat.objects();
    let fl = m.field();
    let lin_act = |a: usize, b: usize, l: &Lin| -> SparseMatrix {
        let mut acc = SparseMatrix::zero(fl, m.dim(b), m.dim(a));
        for &(k, c) in l {
            acc = acc.add_scaled(c % fl.p(), &m.act(a, b, k)).expect("same shape");
        }
        acc
    };
    for a in 0..n {
        if lin_act(a, a, &cat.identity(a)) != SparseMatrix::identity(fl, m.dim(a)) {
            return Err(Error::InvalidFunctor(format!("identity of {} is not sent to 1", cat.name(a))));
        }
        for b in 0..n {
            for f in 0..cat.hom(a, b) {
                let mf = m.act(a, b, f);
                if mf.nrows() != m.dim(b) || mf.ncols() != m.dim(a) {
                    return Err(Error::InvalidFunctor(format!("morphism {f}: {a}→{b} has a wrongly shaped matrix")));
                }
                for c in 0..n {
                    for g in 0..cat.hom(b, c) {
                        let lhs = lin_act(a, c, &cat.compose(a, b, c, g, f));
                        let rhs = m.act(b, c, g).dot(&mf);
                        if lhs != rhs {
                            return Err(Error::InvalidFunctor(format!(
                                "not functorial on {f}: {a}→{b} followed by {g}: {b}→{c}"
                            )));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// A functor stored as explicit matrices for every basis morphism.
#[derive(Clone, Debug)]
pub struct Representation {
    field: Field,
    dims: Vec<usize>,
    maps: HashMap<(usize, usize, usize), SparseMatrix>,
}

impl Representation {
    /// Builds from a closure and verifies functoriality exhaustively.
    pub fn new(
        cat: &dyn Category,
        field: Field,
        dims: Vec<usize>,
        act: impl Fn(usize, usize, usize) -> SparseMatrix,
    ) -> Result<Self> {
        let r = Self::new_unchecked(cat, field, dims, act);
        check_functor(cat, &r)?;
        Ok(r)
    }

    pub fn new_unchecked(
        cat: &dyn Category,
        field: Field,
        dims: Vec<usize>,
        act: impl Fn(usize, usize, usize) -> SparseMatrix,
    ) -> Self {
        let n = cat.objects();
        let mut maps = HashMap::new();
        for a in 0..n {
            for b in 0..n {
                for f in 0..cat.hom(a, b) {
                    maps.insert((a, b, f), act(a, b, f));
                }
            }
        }
        Representation { field, dims, maps }
    }

    /// Snapshot of any functor.
    pub fn of(cat: &dyn Category, m: &dyn Functor) -> Self {
        let dims = (0..cat.objects()).map(|a| m.dim(a)).collect();
        Self::new_unchecked(cat, m.field(), dims, |a, b, f| m.act(a, b, f))
    }
}

impl Functor for Representation {
    fn field(&self) -> Field {
        self.field
    }

    fn dim(&self, a: usize) -> usize {
        self.dims[a]
    }

    fn act(&self, a: usize, b: usize, f: usize) -> SparseMatrix {
        self.maps[&(a, b, f)].clone()
    }
}

/// The constant functor with value k (ordinary categories).
pub struct Constant {
    pub field: Field,
}

impl Functor for Constant {
    fn field(&self) -> Field {
        self.field
    }

    fn dim(&self, _: usize) -> usize {
        1
    }

    fn act(&self, _: usize, _: usize, _: usize) -> SparseMatrix {
        SparseMatrix::identity(self.field, 1)
    }
}

/// k on a chosen set of objects and 0 elsewhere. A functor only when no
/// morphism leaves the support towards the complement or enters it from
/// the complement, depending on variance; checked by [`check_functor`].
pub struct Indicator {
    pub field: Field,
    pub support: Vec<bool>,
}

impl Functor for Indicator {
    fn field(&self) -> Field {
        self.field
    }

    fn dim(&self, a: usize) -> usize {
        usize::from(self.support[a])
    }

    fn act(&self, a: usize, b: usize, _: usize) -> SparseMatrix {
        if self.support[a] && self.support[b] {
            SparseMatrix::identity(self.field, 1)
        } else {
            SparseMatrix::zero(self.field, self.dim(b), self.dim(a))
        }
    }
}

/// The representable functor `k[Hom(obj, −)]`.
pub struct Representable<'a> {
    pub cat: &'a dyn Category,
    pub obj: usize,
    pub field: Field,
}

impl Functor for Representable<'_> {
    fn field(&self) -> Field {
        self.field
    }

    fn dim(&self, a: usize) -> usize {
        self.cat.hom(self.obj, a)
    }

    fn act(&self, a: usize, b: usize, f: usize) -> SparseMatrix {
        let (o, fl) = (self.obj, self.field);
        let cols = (0..self.cat.hom(o, a))
            .map(|x| lin_to_svec(fl, self.cat.compose(o, a, b, f, x)))
            .collect();
        SparseMatrix::from_cols(fl, self.cat.hom(o, b), cols).expect("composites are in range")
    }
}

fn lin_to_svec(f: Field, l: Lin) -> SVec {
    svec_from(f, l.into_iter().map(|(k, v)| (k as u32, v as i64)).collect())
}

/// Pullback of a bifunctor on `I^o × I` to the opposite of the twisted
/// arrow category: an arrow `f: a → b` goes to `M(b, a)`, the term the
/// trace pairs `f` with.
pub struct TwistedPullback<'a> {
    pub tw: &'a TwistedArrows,
    pub base: &'a TableCat,
    pub m: &'a dyn Functor,
}

impl Functor for TwistedPullback<'_> {
    fn field(&self) -> Field {
        self.m.field()
    }

    fn dim(&self, x: usize) -> usize {
        let (a, b, _) = self.tw.objs[x];
        self.m.dim(b * self.base.objects() + a)
    }

    fn act(&self, x: usize, y: usize, k: usize) -> SparseMatrix {
        let n = self.base.objects();
        let (a, b, _) = self.tw.objs[x];
        let (a2, b2, _) = self.tw.objs[y];
        // k numbers twisted morphisms y → x: u: a → a2, v: b2 → b
        let (u, v) = self.tw.pair(y, x, k);
        // in I^o × I this is (v, u): (b, a) → (b2, a2)
        let idx = v * self.base.hom(a, a2) + u;
        self.m.act(b * n + a, b2 * n + a2, idx)
    }
}

/// The bifunctor `(i, i') ↦ k[Hom(i', i)]`, as a functor on `I × I^o`, the
/// opposite of `I^o × I`. Tensoring a bifunctor with it is the trace.
pub struct DiagonalBifunctor<'a> {
    pub cat: &'a dyn Category,
    pub field: Field,
}

impl Functor for DiagonalBifunctor<'_> {
    fn field(&self) -> Field {
        self.field
    }

    fn dim(&self, x: usize) -> usize {
        let n = self.cat.objects();
        let (a, b) = (x / n, x % n);
        self.cat.hom(b, a)
    }

    fn act(&self, x: usize, y: usize, idx: usize) -> SparseMatrix {
        let n = self.cat.objects();
        let (a, b) = (x / n, x % n);
        let (a2, b2) = (y / n, y % n);
        // idx numbers Hom_{I^o × I}((a2, b2), (a, b)) = Hom(a, a2) × Hom(b2, b)
        let nv = self.cat.hom(b2, b);
        let (u, v) = (idx / nv, idx % nv);
        let fl = self.field;
        let cols = (0..self.cat.hom(b, a))
            .map(|h| {
                // h: b → a  ↦  u ∘ h ∘ v : b2 → a2
                let mut items = Vec::new();
                for (hv, c1) in self.cat.compose(b2, b, a, h, v) {
                    for (k, c2) in self.cat.compose(b2, a, a2, u, hv) {
                        items.push((k as u32, fl.mul(c1 % fl.p(), c2 % fl.p()) as i64));
                    }
                }
                svec_from(fl, items)
            })
            .collect();
        SparseMatrix::from_cols(fl, self.cat.hom(b2, a2), cols).expect("composites are in range")
    }
}

/// A projective resolution `P_• → X` of a covariant functor by sums of
/// representables `k[Hom(a, −)]`.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub field: Field,
    /// `gens[n][h]`: object carrying generator `h` of `P_n`.
    pub gens: Vec<Vec<usize>>,
    /// `images[0][h] ∈ X(a_h)`; for `n ≥ 1`, `images[n][h] ∈ P_{n-1}(a_h)`.
    pub images: Vec<Vec<SVec>>,
    /// True if the last kernel vanished, so the resolution is finite.
    pub complete: bool,
}

/// Basis offsets of `P(j)` for a list of generator objects.
fn offsets(cat: &dyn Category, gens: &[usize], j: usize) -> Vec<usize> {
    let mut o = Vec::with_capacity(gens.len() + 1);
    o.push(0);
    for &a in gens {
        o.push(o.last().unwrap() + cat.hom(a, j));
    }
    o
}

/// Splits a vector of `P(j)` into `(generator, morphism, coefficient)`.
fn decompose(off: &[usize], v: &[(u32, u32)]) -> Vec<(usize, usize, u32)> {
    let mut g = 0;
    v.iter()
        .map(|&(idx, c)| {
            let idx = idx as usize;
            while off[g + 1] <= idx {
                g += 1;
            }
            (g, idx - off[g], c)
        })
        .collect()
}

/// Pushes `v` forward along `phi: j → j2`, either in `X` (stage 0) or in
/// the free module on `prev`.
#[allow(clippy::too_many_arguments)]
fn push_prev(
    cat: &dyn Category,
    x: &dyn Functor,
    f: Field,
    stage: usize,
    prev: &[usize],
    v: &[(u32, u32)],
    j: usize,
    j2: usize,
    phi: usize,
    acc: &mut Accumulator,
) -> SVec {
    if stage == 0 {
        return x.act(j, j2, phi).apply(v);
    }
    let (os, ot) = (offsets(cat, prev, j), offsets(cat, prev, j2));
    for (g, m, c) in decompose(&os, v) {
        for (k, cc) in cat.compose(prev[g], j, j2, phi, m) {
            acc.add((ot[g] + k) as u32, f.mul(c, cc % f.p()));
        }
    }
    acc.take()
}

#[allow(clippy::too_many_arguments)]
fn stage_matrix(
    cat: &dyn Category,
    x: &dyn Functor,
    f: Field,
    stage: usize,
    prev: &[usize],
    gens: &[usize],
    images: &[SVec],
    j: usize,
) -> SparseMatrix {
    let rows = if stage == 0 { x.dim(j) } else { *offsets(cat, prev, j).last().unwrap() };
    let mut acc = Accumulator::new(f, rows);
    let mut cols = Vec::new();
    for (h, &a) in gens.iter().enumerate() {
        for m in 0..cat.hom(a, j) {
            cols.push(push_prev(cat, x, f, stage, prev, &images[h], a, j, m, &mut acc));
        }
    }
    SparseMatrix::from_cols(f, rows, cols).expect("pushforwards stay in range")
}

impl Resolution {
    /// Resolves `x` through `P_depth`, checking exactness at every object.
    pub fn build(cat: &dyn Category, x: &dyn Functor, depth: usize) -> Result<Resolution> {
        let f = x.field();
        let n = cat.objects();
        let mut res = Resolution { field: f, gens: Vec::new(), images: Vec::new(), complete: false };
        // what the next stage must cover, per object; at stage 0 all of X
        let mut kernels: Vec<Vec<SVec>> =
            (0..n).map(|j| (0..x.dim(j)).map(|i| vec![(i as u32, 1)]).collect()).collect();
        let mut prev: Vec<usize> = Vec::new();
        for stage in 0..=depth {
            if kernels.iter().all(|k| k.is_empty()) {
                res.complete = true;
                break;
            }
            let mut gens: Vec<usize> = Vec::new();
            let mut images: Vec<SVec> = Vec::new();
            for j in 0..n {
                let dim = if stage == 0 { x.dim(j) } else { *offsets(cat, &prev, j).last().unwrap() };
                let mut span = Echelon::new(f, dim);
                let mut acc = Accumulator::new(f, dim);
                for (g, &a) in gens.iter().enumerate() {
                    for phi in 0..cat.hom(a, j) {
                        span.insert(push_prev(cat, x, f, stage, &prev, &images[g], a, j, phi, &mut acc));
                    }
                }
                for k in &kernels[j] {
                    if span.len() == kernels[j].len() {
                        break;
                    }
                    if span.contains(k) {
                        continue;
                    }
                    gens.push(j);
                    images.push(k.clone());
                    for phi in 0..cat.hom(j, j) {
                        span.insert(push_prev(cat, x, f, stage, &prev, k, j, j, phi, &mut acc));
                    }
                }
                if span.len() != kernels[j].len() {
                    return Err(Error::Validation(format!(
                        "cover at stage {stage} leaves the kernel at {} partly unreached",
                        cat.name(j)
                    )));
                }
            }
            let mut new_kernels = Vec::with_capacity(n);
            for j in 0..n {
                let m = stage_matrix(cat, x, f, stage, &prev, &gens, &images, j);
                budget::check(m.nnz() as u64 + m.ncols() as u64, "resolution stage")?;
                let rki = m.rank_kernel_image();
                if rki.rank != kernels[j].len() {
                    return Err(Error::Validation(format!(
                        "resolution not exact at stage {stage}, object {}",
                        cat.name(j)
                    )));
                }
                new_kernels.push(rki.kernel.basis);
            }
            res.gens.push(gens.clone());
            res.images.push(images);
            kernels = new_kernels;
            prev = gens;
        }
        if kernels.iter().all(|k| k.is_empty()) {
            res.complete = true;
        }
        Ok(res)
    }

    /// Matrix of `P_n(j) → P_{n−1}(j)`, or of the augmentation for `n = 0`.
    pub fn matrix(&self, cat: &dyn Category, x: &dyn Functor, n: usize, j: usize) -> SparseMatrix {
        let prev: &[usize] = if n == 0 { &[] } else { &self.gens[n - 1] };
        stage_matrix(cat, x, self.field, n, prev, &self.gens[n], &self.images[n], j)
    }

    /// `Y ⊗_C P_•` for a contravariant `Y`, given as a functor on `C^o`.
    /// The top degree is open unless the resolution is finite.
    pub fn tensor(&self, cat: &dyn Category, y: &dyn Functor) -> Result<ChainComplex> {
        self.tensor_restricted(cat, y, &|_| true)
    }

    /// As [`Resolution::tensor`], keeping only generators whose object
    /// passes `keep`. Meaningful when the dropped generators span a subcomplex.
    pub fn tensor_restricted(
        &self,
        cat: &dyn Category,
        y: &dyn Functor,
        keep: &dyn Fn(usize) -> bool,
    ) -> Result<ChainComplex> {
        let f = self.field;
        let len = self.gens.len();
        if len == 0 {
            return Ok(ChainComplex::zero(f, 0));
        }
        // position of each kept generator's block in the tensor complex
        let pos: Vec<Vec<Option<usize>>> = self
            .gens
            .iter()
            .map(|g| {
                let mut at = 0;
                g.iter()
                    .map(|&a| {
                        keep(a).then(|| {
                            let p = at;
                            at += y.dim(a);
                            p
                        })
                    })
                    .collect()
            })
            .collect();
        let dims: Vec<usize> = self
            .gens
            .iter()
            .map(|g| g.iter().filter(|&&a| keep(a)).map(|&a| y.dim(a)).sum())
            .collect();
        let mut diffs = Vec::with_capacity(len.saturating_sub(1));
        for n in 1..len {
            let prev = &self.gens[n - 1];
            let mut cols: Vec<Vec<(u32, i64)>> = vec![Vec::new(); dims[n]];
            for (h, &ah) in self.gens[n].iter().enumerate() {
                let Some(ph) = pos[n][h] else { continue };
                let off = offsets(cat, prev, ah);
                for (g, xm, c) in decompose(&off, &self.images[n][h]) {
                    let Some(pg) = pos[n - 1][g] else { continue };
                    // Y(x): Y(a_h) → Y(a_g); x: a_g → a_h read in C^o
                    let m = y.act(ah, prev[g], xm);
                    for (j, col) in m.columns().iter().enumerate() {
                        for &(i, v) in col {
                            cols[ph + j].push(((pg + i as usize) as u32, f.mul(v, c) as i64));
                        }
                    }
                }
            }
            let cols = cols.into_iter().map(|c| svec_from(f, c)).collect();
            diffs.push(SparseMatrix::from_cols(f, dims[n - 1], cols)?);
        }
        Ok(ChainComplex::new(f, 0, dims, diffs)?.with_open_edges(false, !self.complete))
    }
}

/// `Tor^C_*(Y, X)` through `max_degree`, resolving `X` (covariant on `C`)
/// and tensoring with `Y` (a functor on `C^o`).
pub fn derived_tensor(
    cat: &dyn Category,
    y: &dyn Functor,
    x: &dyn Functor,
    max_degree: usize,
) -> Result<Vec<Betti>> {
    let res = Resolution::build(cat, x, max_degree + 1)?;
    Ok(betti_upto(&res.tensor(cat, y)?, max_degree))
}

fn betti_upto(c: &ChainComplex, max_degree: usize) -> Vec<Betti> {
    let h = c.homology_dims();
    (0..=max_degree as i64).map(|n| h.get(&n).copied().unwrap_or(Betti::Dim(0))).collect()
}

/// `H_*(I, M) = Tor^{I}(k, M)`, resolving the constant contravariant functor.
pub fn functor_homology(cat: &dyn Category, m: &dyn Functor, max_degree: usize) -> Result<Vec<Betti>> {
    let op = Opposite(cat);
    let k = Constant { field: m.field() };
    let res = Resolution::build(&op, &k, max_degree + 1)?;
    Ok(betti_upto(&res.tensor(&op, m)?, max_degree))
}

/// Same groups, resolving `M` instead; used as a cross-check.
pub fn functor_homology_by_covariant(
    cat: &dyn Category,
    m: &dyn Functor,
    max_degree: usize,
) -> Result<Vec<Betti>> {
    derived_tensor(cat, &Constant { field: m.field() }, m, max_degree)
}

/// Homology of `I` with support in the objects where `in_support` holds,
/// the cone of `C(I_0, E) → C(I, E)` with `I_0` the complement. The
/// complement must be closed under incoming morphisms: no morphism runs
/// from the support into the complement.
///
/// Returns `(H(I_0), H(I), H(I, I_1))`. Computed from one resolution of
/// `E`: its generators on `I_0` resolve the restriction of `E`, and the
/// remaining generators give the quotient complex.
pub fn homology_with_support(
    cat: &dyn Category,
    e: &dyn Functor,
    in_support: &[bool],
    max_degree: usize,
) -> Result<[Vec<Betti>; 3]> {
    let n = cat.objects();
    for a in 0..n {
        for b in 0..n {
            if in_support[a] && !in_support[b] && cat.hom(a, b) > 0 {
                return Err(Error::InvalidProjection(format!(
                    "morphism from {} in the support to {} outside it",
                    cat.name(a),
                    cat.name(b)
                )));
            }
        }
    }
    let res = Resolution::build(cat, e, max_degree + 1)?;
    let k = Constant { field: e.field() };
    let whole = res.tensor(cat, &k)?;
    let sub = res.tensor_restricted(cat, &k, &|a| !in_support[a])?;
    let quot = res.tensor_restricted(cat, &k, &|a| in_support[a])?;
    let out = [betti_upto(&sub, max_degree), betti_upto(&whole, max_degree), betti_upto(&quot, max_degree)];
    if !triangle_consistent(&out[0], &out[1], &out[2]) {
        return Err(Error::Validation("long exact sequence of the support triangle fails".into()));
    }
    Ok(out)
}

/// Whether dimensions `a, b, c` admit the long exact sequence
/// `… → A_n → B_n → C_n → A_{n−1} → … → C_0 → 0`: solving for the ranks
/// of the three maps from degree 0 upwards never produces a negative rank.
pub fn triangle_consistent(a: &[Betti], b: &[Betti], c: &[Betti]) -> bool {
    let mut gamma = 0i64; // rank of C_n → A_{n−1}
    for n in 0..a.len().min(b.len()).min(c.len()) {
        let (Some(an), Some(bn), Some(cn)) = (a[n].dim(), b[n].dim(), c[n].dim()) else {
            break;
        };
        let beta = cn as i64 - gamma;
        let alpha = bn as i64 - beta;
        let next = an as i64 - alpha;
        if beta < 0 || alpha < 0 || next < 0 {
            return false;
        }
        gamma = next;
    }
    true
}

/// Matrix of a linear combination of basis morphisms.
fn act_lin(m: &dyn Functor, a: usize, b: usize, l: &Lin) -> SparseMatrix {
    let f = m.field();
    let mut acc = SparseMatrix::zero(f, m.dim(b), m.dim(a));
    for &(k, c) in l {
        acc = acc.add_scaled(c % f.p(), &m.act(a, b, k)).expect("same shape");
    }
    acc
}

/// Trace `∫^i M(i, i)` of a bifunctor on `I^o × I`: the cokernel of
/// `⊕_{f: i → i'} M(i', i) → ⊕_i M(i, i)`, `x ↦ M(f, 1)x − M(1, f)x`.
pub fn coend_trace(cat: &dyn Category, m: &dyn Functor) -> usize {
    let n = cat.objects();
    let f = m.field();
    let obj = |a: usize, b: usize| a * n + b;
    let mut diag_off = vec![0usize; n + 1];
    for i in 0..n {
        diag_off[i + 1] = diag_off[i] + m.dim(obj(i, i));
    }
    let mut cols = Vec::new();
    for i in 0..n {
        for i2 in 0..n {
            for fm in 0..cat.hom(i, i2) {
                // (i2, i) → (i, i) is (f, 1); (i2, i) → (i2, i2) is (1, f)
                let left = tensor_lin(f, &[(fm, 1)], &cat.identity(i), cat.hom(i, i));
                let right = tensor_lin(f, &cat.identity(i2), &[(fm, 1)], cat.hom(i, i2));
                let ml = act_lin(m, obj(i2, i), obj(i, i), &left);
                let mr = act_lin(m, obj(i2, i), obj(i2, i2), &right);
                for j in 0..m.dim(obj(i2, i)) {
                    let mut items = Vec::new();
                    for &(r, v) in ml.col(j) {
                        items.push((r + diag_off[i] as u32, v as i64));
                    }
                    for &(r, v) in mr.col(j) {
                        items.push((r + diag_off[i2] as u32, -(v as i64)));
                    }
                    cols.push(svec_from(f, items));
                }
            }
        }
    }
    let total = diag_off[n];
    let rank = SparseMatrix::from_cols(f, total, cols).expect("in range").rank();
    total - rank
}

/// `HH_*(I, M)` for an ordinary category, as functor homology of the
/// opposite twisted arrow category with the pulled-back coefficients.
pub fn bifunctor_homology(cat: &TableCat, m: &dyn Functor, max_degree: usize) -> Result<Vec<Betti>> {
    let tw = cat.twisted_arrows()?;
    let op = Opposite(&tw.cat);
    let pulled = TwistedPullback { tw: &tw, base: cat, m };
    functor_homology(&op, &pulled, max_degree)
}

/// `HH_*(I, M) = Tor^{I^o × I}(k[Hom], M)`; works for linear categories.
pub fn bifunctor_homology_enveloping(
    cat: &dyn Category,
    m: &dyn Functor,
    max_degree: usize,
) -> Result<Vec<Betti>> {
    let op = Opposite(cat);
    let env = Product::new(&op, cat, m.field());
    let diag = DiagonalBifunctor { cat, field: m.field() };
    derived_tensor(&env, &diag, m, max_degree)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> Field {
        Field::new(p).unwrap()
    }

    fn cyclic(n: usize) -> TableCat {
        TableCat::one_object("*", n, |a, b| (a + b) % n, 0).unwrap()
    }

    fn dims(v: &[Betti]) -> Vec<usize> {
        v.iter().map(|b| b.dim().expect("determinate")).collect()
    }

    /// `k[G]` with generator acting by `sign`.
    fn character(g: &TableCat, fl: Field, sign: u32) -> Representation {
        Representation::new(g, fl, vec![1], |_, _, x| SparseMatrix::scalar(fl, 1, fl.pow(sign, x as u64))).unwrap()
    }

    #[test]
    fn cyclic_group_homology_with_trivial_coefficients() {
        let g = cyclic(2);
        assert_eq!(dims(&functor_homology(&g, &Constant { field: f(2) }, 5).unwrap()), vec![1; 6]);
        assert_eq!(dims(&functor_homology(&g, &Constant { field: f(3) }, 5).unwrap()), vec![1, 0, 0, 0, 0, 0]);
        let g3 = cyclic(3);
        assert_eq!(dims(&functor_homology(&g3, &Constant { field: f(3) }, 4).unwrap()), vec![1; 5]);
    }

    #[test]
    fn sign_character_over_odd_prime_is_acyclic() {
        let g = cyclic(2);
        let fl = f(3);
        let sgn = character(&g, fl, fl.neg(1));
        assert_eq!(dims(&functor_homology(&g, &sgn, 4).unwrap()), vec![0; 5]);
        assert_eq!(dims(&functor_homology_by_covariant(&g, &sgn, 4).unwrap()), vec![0; 5]);
    }

    #[test]
    fn representables_have_homology_k_in_degree_zero() {
        let c = TableCat::ordinal(3);
        for a in 0..4 {
            let r = Representable { cat: &c, obj: a, field: f(5) };
            check_functor(&c, &r).unwrap();
            assert_eq!(dims(&functor_homology(&c, &r, 3).unwrap()), vec![1, 0, 0, 0]);
        }
    }

    #[test]
    fn terminal_object_computes_colimit() {
        let c = TableCat::ordinal(2);
        let fl = f(7);
        // 1 → 2 → 1 with the composite zero
        let m = Representation::new(&c, fl, vec![1, 2, 1], |a, b, _| match (a, b) {
            (0, 1) => SparseMatrix::from_dense(fl, &[vec![1], vec![0]]),
            (1, 2) => SparseMatrix::from_dense(fl, &[vec![0, 1]]),
            (0, 2) => SparseMatrix::zero(fl, 1, 1),
            (a, _) => SparseMatrix::identity(fl, [1, 2, 1][a]),
        })
        .unwrap();
        assert_eq!(dims(&functor_homology(&c, &m, 3).unwrap()), vec![1, 0, 0, 0]);
    }

    #[test]
    fn point_category_is_identity() {
        let pt = TableCat::ordinal(0);
        let fl = f(2);
        let m = Representation::new(&pt, fl, vec![3], |_, _, _| SparseMatrix::identity(fl, 3)).unwrap();
        assert_eq!(dims(&functor_homology(&pt, &m, 2).unwrap()), vec![3, 0, 0]);
    }

    #[test]
    fn non_functor_is_rejected() {
        let g = cyclic(2);
        let fl = f(5);
        // the generator squares to the identity but 2² = 4
        assert!(Representation::new(&g, fl, vec![1], |_, _, x| SparseMatrix::scalar(fl, 1, fl.pow(2, x as u64))).is_err());
    }

    #[test]
    fn broken_composition_table_is_rejected() {
        let r = TableCat::one_object("*", 3, |a, b| if a == 2 && b == 2 { 0 } else { (a + b) % 3 }, 0);
        assert!(r.is_err());
    }

    #[test]
    fn dual_numbers_have_two_dimensional_hochschild_groups_in_characteristic_two() {
        let fl = f(2);
        // basis 1, x with x² = 0
        let a = LinearCat::from_algebra(fl, 2, |g, h| if g + h < 2 { vec![(g + h, 1)] } else { vec![] }, vec![(0, 1)])
            .unwrap();
        let op = Opposite(&a);
        let env = Product::new(&op, &a, fl);
        // the diagonal bimodule
        let bimod = Representation::new(&env, fl, vec![2], |_, _, idx| {
            let (u, v) = (idx / 2, idx % 2);
            // h ↦ v h u
            let cols = (0..2)
                .map(|h| if u + v + h < 2 { vec![((u + v + h) as u32, 1)] } else { vec![] })
                .collect();
            SparseMatrix::from_cols(fl, 2, cols).unwrap()
        })
        .unwrap();
        assert_eq!(coend_trace(&a, &bimod), 2);
        let hh = bifunctor_homology_enveloping(&a, &bimod, 3).unwrap();
        assert_eq!(dims(&hh), vec![2, 2, 2, 2]);
        let fl3 = f(3);
        let a3 = LinearCat::from_algebra(fl3, 2, |g, h| if g + h < 2 { vec![(g + h, 1)] } else { vec![] }, vec![(0, 1)])
            .unwrap();
        let bimod3 = Representation::new(&Product::new(&Opposite(&a3), &a3, fl3), fl3, vec![2], |_, _, idx| {
            let (u, v) = (idx / 2, idx % 2);
            let cols = (0..2)
                .map(|h| if u + v + h < 2 { vec![((u + v + h) as u32, 1)] } else { vec![] })
                .collect();
            SparseMatrix::from_cols(fl3, 2, cols).unwrap()
        })
        .unwrap();
        // odd characteristic: HH_0 = 2, then 1 in each positive degree
        assert_eq!(dims(&bifunctor_homology_enveloping(&a3, &bimod3, 3).unwrap()), vec![2, 1, 1, 1]);
    }

    /// `k[Hom]` as a bifunctor on `I^o × I` for an ordinary category.
    fn hom_bimodule<'a>(c: &'a TableCat, env: &Product<'a>, fl: Field) -> Representation {
        let n = c.objects();
        let dims = (0..n * n).map(|x| c.hom(x / n, x % n)).collect();
        Representation::new(env, fl, dims, |x, y, idx| {
            let ((a, b), (a2, b2)) = ((x / n, x % n), (y / n, y % n));
            let nv = c.hom(b, b2);
            let (u, v) = (idx / nv, idx % nv);
            let cols = (0..c.hom(a, b))
                .map(|h| {
                    let vh = c.compose(a, b, b2, v, h)[0].0;
                    vec![(c.compose(a2, a, b2, vh, u)[0].0 as u32, 1)]
                })
                .collect();
            SparseMatrix::from_cols(fl, c.hom(a2, b2), cols).unwrap()
        })
        .unwrap()
    }

    #[test]
    fn twisted_arrow_route_matches_enveloping_route() {
        for (c, p) in [(cyclic(2), 2), (cyclic(3), 3), (TableCat::ordinal(2), 2)] {
            let fl = f(p);
            let op = Opposite(&c);
            let env = Product::new(&op, &c, fl);
            let m = hom_bimodule(&c, &env, fl);
            let tw = bifunctor_homology(&c, &m, 3).unwrap();
            let lin = LinearCat::linearize(fl, &c).unwrap();
            let en = bifunctor_homology_enveloping(&lin, &m, 3).unwrap();
            assert_eq!(tw, en);
            assert_eq!(tw[0].dim(), Some(coend_trace(&c, &m)));
        }
        // Z/2 over F_2: two conjugacy classes, each contributing H_*(Z/2)
        let c = cyclic(2);
        let fl = f(2);
        let op = Opposite(&c);
        let m = hom_bimodule(&c, &Product::new(&op, &c, fl), fl);
        assert_eq!(dims(&bifunctor_homology(&c, &m, 3).unwrap()), vec![2; 4]);
    }

    #[test]
    fn twisted_arrows_of_an_arrow() {
        let tw = TableCat::ordinal(1).twisted_arrows().unwrap();
        assert_eq!(tw.cat.objects(), 3);
        // the identity of 0 and of 1 both map to the arrow 0 → 1
        let total: usize = (0..3).flat_map(|x| (0..3).map(move |y| (x, y))).map(|(x, y)| tw.cat.hom(x, y)).sum();
        assert_eq!(total, 5);
    }

    #[test]
    fn support_on_top_of_an_arrow_kills_constant_coefficients() {
        let c = TableCat::ordinal(1);
        let k = Constant { field: f(2) };
        let [sub, whole, rel] = homology_with_support(&c, &k, &[false, true], 2).unwrap();
        assert_eq!(dims(&sub), vec![1, 0, 0]);
        assert_eq!(dims(&whole), vec![1, 0, 0]);
        assert_eq!(dims(&rel), vec![0, 0, 0]);
        assert!(homology_with_support(&c, &k, &[true, false], 2).is_err());
    }

    #[test]
    fn triangle_consistency_detects_impossible_dimensions() {
        let d = |v: &[usize]| v.iter().map(|&x| Betti::Dim(x)).collect::<Vec<_>>();
        assert!(triangle_consistent(&d(&[1, 0]), &d(&[1, 0]), &d(&[0, 0])));
        assert!(triangle_consistent(&d(&[1, 0]), &d(&[0, 0]), &d(&[0, 1])));
        assert!(!triangle_consistent(&d(&[0, 0]), &d(&[1, 0]), &d(&[0, 0])));
    }

    #[test]
    fn resolution_differentials_square_to_zero_and_augment() {
        let c = TableCat::ordinal(2);
        let op = Opposite(&c);
        let k = Constant { field: f(3) };
        let res = Resolution::build(&op, &k, 3).unwrap();
        for j in 0..3 {
            for n in 1..res.gens.len() {
                let prod = res.matrix(&op, &k, n - 1, j).dot(&res.matrix(&op, &k, n, j));
                assert!(prod.is_zero());
            }
        }
        assert!(res.complete);
    }
}
