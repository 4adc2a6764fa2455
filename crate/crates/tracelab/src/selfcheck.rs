//! Named checks shared by the `selfcheck` subcommand and the acceptance
//! tests. [`quick`] holds the small worked examples and the invariant
//! suites; [`acceptance`] holds the numbered acceptance rows.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chains::{Betti, ChainComplex, Side};
use crate::cube::{maclane_homology, stab_window, CrossEffectSystem};
use crate::cyc::{classify_delta_map, lambda_homology, CyclicModule, DeltaMap, SimplicialModule};
use crate::fincat::{functor_homology, Constant, TableCat};
use crate::hoch::{
    characteristic, cpbar, cyclic_object, hc_hp, hh_p_trace, hochschild, hochschild_complex, mixed_window,
    thh_conjugate, AlgebraSpec, BimoduleSpec, CoperiodicRoute, HochschildObject,
};
use crate::linalg::{Field, SparseMatrix};
use crate::powfun::{eval_power, plain_dims, q_n_stab, structure_maps, young_family, PowerBase, PowerKind, Route};
use crate::tate::{
    family_closure, group_homology, tate_cyclic, truncated_tate_orbit, truncated_tate_resolution, FinGroup, GModule,
    RelativeTate, SubgroupFamily,
};
use crate::{Error, Result};

pub struct Check {
    pub id: &'static str,
    pub title: &'static str,
    pub run: fn() -> Result<()>,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: &'static str,
    pub title: &'static str,
    /// `None` on success, else the first failing assertion.
    pub failure: Option<String>,
    pub seconds: f64,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Runs one check, turning panics into failures.
pub fn run(check: &Check) -> Outcome {
    let start = Instant::now();
    let failure = match catch_unwind(AssertUnwindSafe(check.run)) {
        Ok(Ok(())) => None,
        Ok(Err(e)) => Some(e.to_string()),
        Err(panic) => Some(
            panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()),
        ),
    };
    Outcome { id: check.id, title: check.title, failure, seconds: start.elapsed().as_secs_f64() }
}

fn expect<T: PartialEq + Debug>(what: &str, got: T, want: T) -> Result<()> {
    if got == want {
        Ok(())
    } else {
        Err(Error::Validation(format!("{what}: got {got:?}, expected {want:?}")))
    }
}

fn ensure(what: &str, cond: bool) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Validation(what.to_string()))
    }
}

fn fl(p: u64) -> Field {
    Field::new(p).expect("small primes")
}

fn dims(v: &[Betti]) -> Result<Vec<usize>> {
    plain_dims(v)
}

fn nonzero(c: &ChainComplex) -> BTreeMap<i64, usize> {
    c.betti().into_iter().filter(|&(_, b)| b > 0).collect()
}

fn cyclic_group_family_e(g: &FinGroup) -> Result<SubgroupFamily> {
    family_closure(g, &[vec![g.identity()]])
}

// ---------------------------------------------------------------- quick

pub fn quick() -> Vec<Check> {
    vec![
        Check { id: "linalg.examples", title: "rank, kernel and Kronecker examples", run: linalg_examples },
        Check { id: "linalg.rank_nullity", title: "rank–nullity on random matrices", run: rank_nullity },
        Check { id: "chains.examples", title: "homology, tensor and truncation examples", run: chains_examples },
        Check { id: "fincat.examples", title: "functor homology of a point and of [2]", run: fincat_examples },
        Check { id: "cyc.examples", title: "Δ-map classes, constant and subdivided cyclic modules", run: cyc_examples },
        Check { id: "tate.examples", title: "Tate and group homology, families, free coefficients", run: tate_examples },
        Check { id: "powfun.examples", title: "power functor dimensions and unital structure maps", run: powfun_examples },
        Check { id: "cube.additive", title: "an additive functor stabilizes to itself", run: cube_additive },
        Check { id: "hoch.examples", title: "HH of F_p, dimensions of A_♯, characteristic 0 refused", run: hoch_examples },
        Check { id: "hoch.mixed_identities", title: "b² = B² = bB + Bb = 0 on small algebras", run: mixed_identities_small },
        Check { id: "hoch.sign_mutation", title: "a sign-flipped B is caught by the mixed-complex identities", run: sign_mutation },
    ]
}

fn linalg_examples() -> Result<()> {
    let id = SparseMatrix::identity(fl(5), 3);
    let r = id.rank_kernel_image();
    expect("rank of I_3 over F_5", (r.rank, r.kernel.basis.len(), r.image.basis.len()), (3, 0, 3))?;
    let ones = SparseMatrix::from_dense(fl(2), &[vec![1, 1], vec![1, 1]]);
    let r = ones.rank_kernel_image();
    expect("rank of the all-ones 2×2 over F_2", r.rank, 1)?;
    expect("kernel of the all-ones 2×2 over F_2", r.kernel.basis, vec![vec![(0, 1), (1, 1)]])?;
    let k = SparseMatrix::identity(fl(3), 2).kronecker(&SparseMatrix::identity(fl(3), 3))?;
    expect("I_2 ⊗ I_3", k, SparseMatrix::identity(fl(3), 6))?;
    let z = SparseMatrix::zero(fl(3), 1, 1).kronecker(&SparseMatrix::from_dense(fl(3), &[vec![1, 2, 0], vec![0, 1, 1]]))?;
    expect("0 ⊗ m", z, SparseMatrix::zero(fl(3), 2, 3))
}

fn rank_nullity() -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for p in [2u64, 3, 5, 7] {
        let f = fl(p);
        for _ in 0..40 {
            let (r, c) = (rng.gen_range(1..12), rng.gen_range(1..12));
            let data: Vec<Vec<i64>> = (0..r)
                .map(|_| (0..c).map(|_| if rng.gen_bool(0.4) { rng.gen_range(0..p as i64) } else { 0 }).collect())
                .collect();
            let m = SparseMatrix::from_dense(f, &data);
            let rki = m.rank_kernel_image();
            expect("rank + nullity = columns", rki.rank + rki.kernel.basis.len(), c)?;
            expect("image dimension = rank", rki.image.basis.len(), rki.rank)?;
            for v in &rki.kernel.basis {
                ensure("kernel vector is annihilated", m.apply(v).is_empty())?;
            }
        }
    }
    Ok(())
}

fn chains_examples() -> Result<()> {
    let f = fl(2);
    let flat = ChainComplex::new(f, 0, vec![2, 3, 1], vec![SparseMatrix::zero(f, 2, 3), SparseMatrix::zero(f, 3, 1)])?;
    expect("zero differentials", flat.betti(), BTreeMap::from([(0, 2), (1, 3), (2, 1)]))?;
    let c = ChainComplex::new(f, 0, vec![1, 1, 1], vec![SparseMatrix::zero(f, 1, 1), SparseMatrix::identity(f, 1)])?;
    expect("F_2 →id F_2 →0 F_2", c.betti(), BTreeMap::from([(0, 1), (1, 0), (2, 0)]))?;
    let interval = ChainComplex::new(f, 0, vec![1, 1], vec![SparseMatrix::identity(f, 1)])?;
    let t = ChainComplex::tensor(&interval, &interval)?;
    ensure("I ⊗ I is acyclic", t.betti().values().all(|&b| b == 0))?;
    let tr = c.truncate(Side::AtOrAbove, 0)?;
    expect("τ_{≥0} of a complex in degrees ≥ 0", tr.betti(), c.betti())?;
    let hump = ChainComplex::new(f, 0, vec![1, 2, 1], vec![SparseMatrix::from_dense(f, &[vec![1, 0]]), SparseMatrix::zero(f, 2, 1)])?;
    let pinned = hump.truncate(Side::AtOrAbove, 1)?.truncate(Side::AtOrBelow, 1)?;
    let h = pinned.betti();
    expect("τ_{≤1} τ_{≥1} keeps H_1", h.get(&1).copied(), Some(1))?;
    ensure("τ_{≤1} τ_{≥1} is concentrated in degree 1", h.iter().all(|(&d, &b)| d == 1 || b == 0))
}

fn fincat_examples() -> Result<()> {
    let f = fl(3);
    let point = TableCat::ordinal(0);
    expect("point, constant k", dims(&functor_homology(&point, &Constant { field: f }, 3)?)?, vec![1, 0, 0, 0])?;
    let line = TableCat::ordinal(2);
    expect("[2] has a terminal object", dims(&functor_homology(&line, &Constant { field: f }, 3)?)?, vec![1, 0, 0, 0])
}

fn cyc_examples() -> Result<()> {
    let id = classify_delta_map(&DeltaMap::new(3, 3, vec![0, 1, 2, 3])?);
    ensure("identity is special, antispecial, bispecial and an anchor", id.special && id.antispecial && id.bispecial && id.anchor)?;
    let s = classify_delta_map(&DeltaMap::new(1, 3, vec![0, 1])?);
    ensure("(0,1): [1] → [3] is a special left anchor", s.special && s.left_anchor && !s.antispecial)?;
    let f = fl(3);
    let k = CyclicModule::constant(f, 5);
    expect("constant k, normalized", nonzero(&k.simplicial().normalized_complex()), BTreeMap::from([(0, 1)]))?;
    let mc = k.normalized_mixed()?;
    ensure("B vanishes on k_♯", mc.connes_component((0, 0), (1, 0)).is_none())?;
    let HochschildObject::Cyclic(sharp) = cyclic_object(&AlgebraSpec::prime_field(f), None, 5)? else {
        return Err(Error::Validation("F_p over itself is cyclic".into()));
    };
    expect("A_♯ of F_p, normalized", nonzero(&sharp.simplicial().normalized_complex()), BTreeMap::from([(0, 1)]))?;
    expect(
        "HC of A_♯(F_p) and of constant k",
        lambda_homology(&sharp, 4, 6)?.dims,
        lambda_homology(&k, 4, 6)?.dims,
    )?;
    let sd = k.edgewise_sd(3, 1)?;
    ensure("sd_3 of k_♯ is one-dimensional", (0..=1).all(|n| sd.simplicial().dim(n) == 1))?;
    let HochschildObject::Cyclic(dual) = cyclic_object(&AlgebraSpec::dual_numbers(f), None, 6)? else {
        return Err(Error::Validation("A over itself is cyclic".into()));
    };
    expect("(sd_3 E)_0 = E_2", dual.edgewise_sd(3, 1)?.simplicial().dim(0), dual.simplicial().dim(2))
}

fn tate_examples() -> Result<()> {
    let z3 = FinGroup::cyclic(3);
    let free = tate_cyclic(&z3, &GModule::regular(&z3, fl(3)), 4)?;
    ensure("Ť(Z/3, k[Z/3]) = 0", dims(&free)?.iter().all(|&d| d == 0))?;
    let z5 = FinGroup::cyclic(5);
    let t = tate_cyclic(&z5, &GModule::trivial(&z5, fl(5), 2), 0)?;
    expect("Ť^0(Z/5, trivial k²)", dims(&t)?, vec![2])?;
    let s3 = FinGroup::symmetric(3);
    let reg = GModule::regular(&s3, fl(3));
    expect("H_0 = coinvariants", dims(&group_homology(&s3, &reg, 0)?)?, vec![reg.coinvariants_dim(&s3)])?;
    expect("H_•(Z/3, F_2)", dims(&group_homology(&z3, &GModule::trivial(&z3, fl(2), 1), 4)?)?, vec![1, 0, 0, 0, 0])?;
    let z4 = FinGroup::cyclic(4);
    let fam = cyclic_group_family_e(&z4)?;
    expect("family generated by {e} in Z/4", fam.members().to_vec(), vec![vec![z4.identity()]])?;
    ensure(
        "a family containing G is refused",
        matches!(family_closure(&z4, &[(0..4).collect()]), Err(Error::InadmissibleFamily(_))),
    )?;
    let z2 = FinGroup::cyclic(2);
    let e = cyclic_group_family_e(&z2)?;
    let r = truncated_tate_resolution(&z2, &e, &GModule::regular(&z2, fl(2)), 4, None, false)?;
    ensure("free coefficients give zero", dims(&r.dims)?.iter().all(|&d| d == 0))?;
    let regz3 = GModule::regular(&z3, fl(3));
    let gen = z3.find_permutation(&[1, 2, 0]).ok_or_else(|| Error::Validation("rotation in Z/3".into()))?;
    let rt = RelativeTate::from_action(SimplicialModule::constant(fl(3), 3, 3), vec![regz3.act(gen).clone(); 4], 3)?;
    let h = rt.term(2, -4, 4)?.homology_dims();
    ensure("degreewise free input gives acyclic Tate terms", (-3..=3).all(|j| h[&j] == Betti::Dim(0)))?;
    expect("trace map on k[Z/3] is an isomorphism", rt.trace_map(0).rank(), 1)
}

fn powfun_examples() -> Result<()> {
    let f = fl(3);
    let dim = |k| -> Result<usize> { Ok(eval_power(f, k, 2, &PowerBase::Space(3))?.dims[&0]) };
    expect(
        "T², S², D², Λ² of F_3³",
        [dim(PowerKind::Tensor)?, dim(PowerKind::Symmetric)?, dim(PowerKind::Divided)?, dim(PowerKind::Exterior)?],
        [9, 6, 6, 3],
    )?;
    expect("D¹ ∘ D² composition", structure_maps(f, 1, 2, 2).composition, SparseMatrix::identity(f, 3))?;
    expect("D² ∘ D¹ composition", structure_maps(f, 2, 1, 2).composition, SparseMatrix::identity(f, 3))?;
    let y = young_family(2)?;
    expect("X_2", y.family.members().to_vec(), vec![vec![y.group.identity()]])
}

fn cube_additive() -> Result<()> {
    let h = stab_window(&CrossEffectSystem::additive(fl(2), 3), 4, None)?;
    expect("Stab of an additive functor", dims(&h)?, vec![3, 0, 0, 0, 0])
}

fn hoch_examples() -> Result<()> {
    for p in [2, 3] {
        let k = AlgebraSpec::prime_field(fl(p));
        expect("HH(F_p)", dims(&hochschild(&k, &BimoduleSpec::regular(&k), 3)?)?, vec![1, 0, 0, 0])?;
    }
    let a = AlgebraSpec::dual_numbers(fl(3));
    let HochschildObject::Cyclic(sharp) = cyclic_object(&a, None, 3)? else {
        return Err(Error::Validation("A over itself is cyclic".into()));
    };
    expect("dims of A_♯", (0..=3).map(|n| sharp.simplicial().dim(n)).collect::<Vec<_>>(), vec![2, 4, 8, 16])?;
    ensure("characteristic 0 is refused", matches!(characteristic(0), Err(Error::UnsupportedCharacteristic(_))))
}

fn small_algebras() -> Vec<AlgebraSpec> {
    let mut out = Vec::new();
    for p in [2, 3] {
        let f = fl(p);
        let k = AlgebraSpec::prime_field(f);
        out.push(k.clone());
        out.push(AlgebraSpec::dual_numbers(f));
        out.push(AlgebraSpec::upper_triangular(f));
        out.push(AlgebraSpec::cyclic_group_algebra(f, p as usize));
        out.push(k.product(&k).expect("same field"));
    }
    out
}

fn mixed_identities_small() -> Result<()> {
    for a in small_algebras() {
        mixed_window(&a, 4)?.check_identities()?;
    }
    Ok(())
}

/// Negates single components of `B` over F_3 and expects each mutation to
/// break `bB + Bb = 0`. The algebra is noncommutative so that `b` does not
/// vanish next to `B_0`.
fn sign_mutation() -> Result<()> {
    let a = AlgebraSpec::upper_triangular(fl(3));
    let clean = mixed_window(&a, 5)?;
    let mut tried = 0;
    for n in 0..3 {
        let (s, t) = ((n, 0), (n + 1, 0));
        let Some(comp) = clean.connes_component(s, t) else { continue };
        let mut mc = clean.clone();
        mc.add_connes(s, t, comp.scale(a.field().reduce(-2)))?;
        tried += 1;
        match mc.check_identities() {
            Err(Error::Validation(msg)) if msg.contains("bB + Bb") => {}
            Err(e) => return Err(Error::Validation(format!("flip of B_{n} caught by the wrong check: {e}"))),
            Ok(()) => return Err(Error::Validation(format!("flip of B_{n} passed the mixed-complex identities"))),
        }
    }
    ensure("some B component was mutated", tried > 0)
}

// ----------------------------------------------------------- acceptance

pub fn acceptance() -> Vec<Check> {
    vec![
        Check { id: "1", title: "Tate periodicity of the cyclic power", run: criterion_1 },
        Check { id: "2", title: "truncated Tate recursion HQ² (F_2), HQ³ (F_3)", run: criterion_2 },
        Check { id: "3", title: "vanishing of HQ off p-powers", run: criterion_3 },
        Check { id: "4", title: "Σ_4 orbit route over F_2", run: criterion_4 },
        Check { id: "5", title: "orbit and resolution routes agree", run: criterion_5 },
        Check { id: "6", title: "cube complex of F_2 and F_3", run: criterion_6 },
        Check { id: "7", title: "additivization laws", run: criterion_7 },
        Check { id: "8", title: "Mac Lane homology in low degrees", run: criterion_8 },
        Check { id: "9", title: "p-cyclic trace of F_p and its B-pattern", run: criterion_9 },
        Check { id: "10", title: "conjugate filtration of F_p and its periodicity", run: criterion_10 },
        Check { id: "11", title: "property suites", run: criterion_11 },
    ]
}

/// `Ť^i(Z/p, V^{⊗p})` with the cyclic permutation action is `V` in every degree.
fn criterion_1() -> Result<()> {
    for p in [2u64, 3] {
        for d in 1..=2 {
            let v = eval_power(fl(p), PowerKind::Cyclic, p as usize, &PowerBase::Space(d))?;
            let (g, m) = v.action.ok_or_else(|| Error::Validation("cyclic power carries Z/p".into()))?;
            let t = tate_cyclic(&g, &m, 6)?;
            expect(&format!("Ť^i(Z/{p}, (F_{p}^{d})^⊗{p}), |i| ≤ 6"), dims(&t)?, vec![d; 13])?;
        }
    }
    Ok(())
}

fn criterion_2() -> Result<()> {
    let h = q_n_stab(fl(2), 2, 1, 6, Some(Route::Resolution))?;
    expect("HQ² over F_2", dims(&h.dims)?, vec![1; 7])?;
    let ring = h.ring.ok_or_else(|| Error::Validation("HQ² over F_2 has a ring table".into()))?;
    expect("ring table range", ring.dims.len(), 7)?;
    ensure("HQ² over F_2 is polynomial on a degree-1 class", ring.is_polynomial_on_degree_one())?;
    let h = q_n_stab(fl(3), 3, 1, 5, Some(Route::Resolution))?;
    expect("HQ³ over F_3", dims(&h.dims)?, vec![1, 1, 0, 0, 1, 1])
}

fn criterion_3() -> Result<()> {
    expect("HQ² over F_3", dims(&q_n_stab(fl(3), 2, 1, 5, None)?.dims)?, vec![0; 6])?;
    expect("HQ³ over F_2", dims(&q_n_stab(fl(2), 3, 1, 5, None)?.dims)?, vec![0; 6])
}

fn criterion_4() -> Result<()> {
    let h = q_n_stab(fl(2), 4, 1, 5, Some(Route::Orbit))?;
    expect("H̄(Σ_4, X_4, F_2)", dims(&h.dims)?, vec![1, 1, 1, 2, 2, 2])
}

fn criterion_5() -> Result<()> {
    let z2 = FinGroup::cyclic(2);
    let e = cyclic_group_family_e(&z2)?;
    let k = GModule::trivial(&z2, fl(2), 1);
    let res = truncated_tate_resolution(&z2, &e, &k, 8, None, false)?.dims;
    let orb = truncated_tate_orbit(&z2, &e, &k, 8)?;
    expect("(Z/2, {e}) resolution vs orbit", dims(&res)?, dims(&orb)?)?;
    let y = young_family(3)?;
    for p in [2, 3] {
        let k = GModule::trivial(&y.group, fl(p), 1);
        let res = truncated_tate_resolution(&y.group, &y.family, &k, 5, None, false)?.dims;
        let orb = truncated_tate_orbit(&y.group, &y.family, &k, 5)?;
        expect(&format!("(Σ_3, X_3) over F_{p}, resolution vs orbit"), dims(&res)?, dims(&orb)?)?;
    }
    Ok(())
}

fn criterion_6() -> Result<()> {
    let lin = |p| CrossEffectSystem::linearization(&AlgebraSpec::prime_field(fl(p)));
    expect("H(Q_•(F_2)), degrees 0–4", dims(&stab_window(&lin(2)?, 4, None)?)?, vec![1, 1, 1, 2, 2])?;
    expect("H(Q_•(F_3)), degrees 0–4", dims(&stab_window(&lin(3)?, 4, None)?)?, vec![1, 1, 0, 0, 1])
}

fn criterion_7() -> Result<()> {
    for (p, d) in [(2, 1), (2, 3), (3, 2)] {
        let h = stab_window(&CrossEffectSystem::additive(fl(p), d), 4, None)?;
        let mut want = vec![0; 5];
        want[0] = d;
        expect(&format!("Stab of F_{p}^{d} ⊗ −"), dims(&h)?, want)?;
    }
    let h = stab_window(&CrossEffectSystem::tensor_power(fl(2), 2), 4, None)?;
    expect("Stab(T²) over F_2", dims(&h)?, vec![0; 5])
}

fn criterion_8() -> Result<()> {
    let k2 = AlgebraSpec::prime_field(fl(2));
    expect("HM_{0,1,2}(F_2)", dims(&maclane_homology(&BimoduleSpec::regular(&k2), 2)?)?, vec![1, 0, 1])?;
    let k3 = AlgebraSpec::prime_field(fl(3));
    let h = dims(&maclane_homology(&BimoduleSpec::regular(&k3), 1)?)?;
    expect("HM_1(F_3)", h[1], 0)
}

/// In group-homology degrees `HH^{(p)}_{i+1} = H_i(Z/p, k)`: `B_i` is an
/// isomorphism for even `i`, zero for odd `i`, and `B` out of degree 0 is zero.
fn criterion_9() -> Result<()> {
    for p in [2u64, 3] {
        let k = AlgebraSpec::prime_field(fl(p));
        let r = hh_p_trace(&k, None, 8)?;
        expect(&format!("HH^({p})_i(F_{p}), 0 ≤ i ≤ 8"), dims(&r.dims)?, vec![1; 9])?;
        let ranks = r.connes_ranks.ok_or_else(|| Error::Validation("B ranks are reported for M = A".into()))?;
        expect("rank of B out of HH^(p)_0", ranks[0], 0)?;
        for (i, &rk) in ranks[1..].iter().enumerate() {
            expect(&format!("rank of B_{i} over F_{p}"), rk, usize::from(i % 2 == 0))?;
        }
    }
    Ok(())
}

fn criterion_10() -> Result<()> {
    for p in [2u64, 3] {
        let r = thh_conjugate(&AlgebraSpec::prime_field(fl(p)), 6, 2)?;
        expect(&format!("HC(V_0) over F_{p}, degrees 0–6"), dims(&r.dims)?, vec![1, 0, 1, 0, 1, 0, 1])?;
        for (&n, &rk) in &r.u_ranks {
            if n % 2 == 0 {
                expect(&format!("u out of degree {n} over F_{p} is an isomorphism"), rk, 1)?;
            }
        }
    }
    Ok(())
}

fn criterion_11() -> Result<()> {
    // b² = B² = bB + Bb = 0, with d² = 0 on every Hochschild complex
    let mut algebras = small_algebras();
    for p in [2, 3] {
        let d = AlgebraSpec::dual_numbers(fl(p));
        algebras.push(AlgebraSpec::truncated_polynomial(fl(p), 3));
        algebras.push(d.tensor(&d)?);
        algebras.push(d.product(&AlgebraSpec::prime_field(fl(p)))?);
    }
    for a in &algebras {
        let top = if a.dim() >= 4 { 4 } else { 6 };
        mixed_window(a, top)?.check_identities()?;
        let c = hochschild_complex(a, &BimoduleSpec::regular(a), top - 1)?;
        for n in c.lo() + 2..=c.hi() {
            ensure("d² = 0 on the Hochschild complex", c.diff_or_zero(n - 1).dot(&c.diff_or_zero(n)).is_zero())?;
        }
    }
    rank_nullity()?;
    // Künneth on algebras of total dimension ≤ 4
    for p in [2, 3] {
        let f = fl(p);
        let parts = [
            AlgebraSpec::dual_numbers(f),
            AlgebraSpec::cyclic_group_algebra(f, 2),
            AlgebraSpec::prime_field(f).product(&AlgebraSpec::prime_field(f))?,
        ];
        for x in &parts {
            for y in &parts {
                let hx = dims(&hochschild(x, &BimoduleSpec::regular(x), 3)?)?;
                let hy = dims(&hochschild(y, &BimoduleSpec::regular(y), 3)?)?;
                let xy = x.tensor(y)?;
                let hxy = dims(&hochschild(&xy, &BimoduleSpec::regular(&xy), 3)?)?;
                let conv: Vec<usize> = (0..=3).map(|n| (0..=n).map(|i| hx[i] * hy[n - i]).sum()).collect();
                expect(&format!("Künneth over F_{p}"), hxy, conv)?;
            }
        }
    }
    // window double runs: stable entries must not move with the window
    for p in [2, 3] {
        let k = AlgebraSpec::prime_field(fl(p));
        let kk = k.product(&k)?;
        for a in [&k, &kk] {
            let (r1, r2) = (hc_hp(a, 4, 1)?, hc_hp(a, 4, 2)?);
            for (x, y) in r1.hp.iter().zip(&r2.hp) {
                if let (Some(x), Some(y)) = (x.dim, y.dim) {
                    expect("HP across windows", x, y)?;
                }
            }
            // sd_p of a two-dimensional algebra has terms of size 2^{p(n+1)}: the
            // Tate route runs at windows 0 and 1 for p = 2 and not at all for p = 3
            let mut runs = vec![(CoperiodicRoute::Direct, 1, 2)];
            match (p, a.dim()) {
                (_, 1) => runs.push((CoperiodicRoute::Tate, 1, 2)),
                (2, _) => runs.push((CoperiodicRoute::Tate, 0, 1)),
                _ => {}
            }
            for (route, w1, w2) in runs {
                let (c1, c2) = (cpbar(a, 2, w1, route)?, cpbar(a, 2, w2, route)?);
                for (x, y) in c1.iter().zip(&c2) {
                    if let (Some(x), Some(y)) = (x.dim, y.dim) {
                        expect(&format!("CP̄ across windows ({route:?})"), x, y)?;
                    }
                }
            }
        }
    }
    // X-exactness is asserted inside every resolution run
    let z4 = FinGroup::cyclic(4);
    let sub = z4.generated(&[z4.find_permutation(&[2, 3, 0, 1]).expect("rotation by two")]);
    truncated_tate_resolution(&z4, &family_closure(&z4, &[sub])?, &GModule::trivial(&z4, fl(2), 1), 4, None, false)?;
    for n in [2, 3] {
        let y = young_family(n)?;
        for p in [2, 3] {
            truncated_tate_resolution(&y.group, &y.family, &GModule::trivial(&y.group, fl(p), 1), 4, None, false)?;
        }
    }
    Ok(())
}
