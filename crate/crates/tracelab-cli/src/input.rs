//! JSON input documents and the built-in names accepted in their place.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Deserialize;
use tracelab::hoch::{AlgebraSpec, BimoduleSpec};
use tracelab::tate::{family_closure, FinGroup, SubgroupFamily};
use tracelab::{Error, Field, Result, SparseMatrix};

pub const SCHEMA_VERSION: u32 = 1;

/// `structure` lists `(i, j, k, c)`: the product `e_i e_j` has coefficient
/// `c` on `e_k`. Repeated entries add up.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraDoc {
    schema_version: Option<u32>,
    p: Option<u64>,
    labels: Vec<String>,
    structure: Vec<(usize, usize, usize, i64)>,
    unit: Vec<i64>,
}

/// `left[i]` and `right[i]` are the actions of `e_i` as `(row, col, value)`.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BimoduleDoc {
    schema_version: Option<u32>,
    dim: usize,
    left: Vec<Vec<(usize, usize, i64)>>,
    right: Vec<Vec<(usize, usize, i64)>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupDoc {
    schema_version: Option<u32>,
    degree: usize,
    generators: Vec<Vec<usize>>,
}

/// Each seed is a list of permutations generating one subgroup.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyDoc {
    schema_version: Option<u32>,
    seeds: Vec<Vec<Vec<usize>>>,
}

fn read<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Validation(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Validation(format!("{}: {e}", path.display())))
}

fn check_version(v: Option<u32>, path: &Path) -> Result<()> {
    match v {
        None | Some(SCHEMA_VERSION) => Ok(()),
        Some(v) => Err(Error::Validation(format!("{}: unsupported schema version {v}", path.display()))),
    }
}

fn suffix_number(name: &str, prefix: &str) -> Option<usize> {
    name.strip_prefix(prefix)?.parse().ok()
}

pub fn builtin_algebra(name: &str, field: Field) -> Result<AlgebraSpec> {
    if let Some(n) = suffix_number(name, "group_algebra:") {
        return Ok(AlgebraSpec::cyclic_group_algebra(field, n));
    }
    if let Some(n) = suffix_number(name, "truncated:") {
        return Ok(AlgebraSpec::truncated_polynomial(field, n));
    }
    match name {
        "prime_field" => Ok(AlgebraSpec::prime_field(field)),
        "dual_numbers" => Ok(AlgebraSpec::dual_numbers(field)),
        "upper_triangular" => Ok(AlgebraSpec::upper_triangular(field)),
        _ => Err(Error::Validation(format!(
            "unknown algebra {name:?}; known: prime_field, dual_numbers, upper_triangular, group_algebra:N, truncated:N"
        ))),
    }
}

pub fn algebra_file(path: &Path, field: Field) -> Result<AlgebraSpec> {
    let doc: AlgebraDoc = read(path)?;
    check_version(doc.schema_version, path)?;
    if let Some(p) = doc.p {
        if p != field.p() as u64 {
            return Err(Error::Validation(format!("{} is over F_{p}, the job asks for F_{}", path.display(), field.p())));
        }
    }
    let n = doc.labels.len();
    let mut mult = vec![vec![vec![0i64; n]; n]; n];
    for (i, j, k, c) in doc.structure {
        if i >= n || j >= n || k >= n {
            return Err(Error::Validation(format!("structure entry ({i}, {j}, {k}) outside a basis of {n}")));
        }
        mult[i][j][k] += c;
    }
    AlgebraSpec::new(field, doc.labels, mult, doc.unit)
}

pub fn bimodule_file(path: &Path, algebra: &AlgebraSpec) -> Result<BimoduleSpec> {
    let doc: BimoduleDoc = read(path)?;
    check_version(doc.schema_version, path)?;
    let f = algebra.field();
    let mats = |side: Vec<Vec<(usize, usize, i64)>>| -> Result<Vec<SparseMatrix>> {
        side.into_iter().map(|t| SparseMatrix::from_triplets(f, doc.dim, doc.dim, t)).collect()
    };
    BimoduleSpec::new(algebra, doc.dim, mats(doc.left)?, mats(doc.right)?)
}

/// `S<n>`, `C<n>`, or a group document.
pub fn group(spec: &str) -> Result<FinGroup> {
    if let Some(n) = suffix_number(spec, "S") {
        return Ok(FinGroup::symmetric(n));
    }
    if let Some(n) = suffix_number(spec, "C") {
        return Ok(FinGroup::cyclic(n));
    }
    let path = Path::new(spec);
    let doc: GroupDoc = read(path)?;
    check_version(doc.schema_version, path)?;
    FinGroup::from_permutations(doc.degree, &doc.generators)
}

/// Symmetric degree of a `S<n>` group name.
pub fn symmetric_degree(spec: &str) -> Option<usize> {
    suffix_number(spec, "S")
}

/// `trivial` for `{e}`, or a family document; `young` is resolved by the caller.
pub fn family(spec: &str, g: &FinGroup) -> Result<SubgroupFamily> {
    if spec == "trivial" {
        return family_closure(g, &[vec![g.identity()]]);
    }
    let path = Path::new(spec);
    let doc: FamilyDoc = read(path)?;
    check_version(doc.schema_version, path)?;
    let seeds = doc
        .seeds
        .iter()
        .map(|gens| {
            let idx = gens
                .iter()
                .map(|perm| {
                    g.find_permutation(perm)
                        .ok_or_else(|| Error::Validation(format!("{perm:?} is not an element of the group")))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(g.generated(&idx))
        })
        .collect::<Result<Vec<_>>>()?;
    family_closure(g, &seeds)
}
