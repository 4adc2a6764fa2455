//! `tracelab`: runs one computation and writes a JSON report.
//!
//! Exit status 0 on success, 1 on invalid input or a failed check, 2 when
//! the memory budget (`TRACELAB_BUDGET_MB`) runs out. On budget exhaustion
//! the largest degree bound that still fits is reported.

mod input;
mod report;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use tracelab::cube::{maclane_homology, stab_window, CrossEffectSystem, StabRoute};
use tracelab::hoch::{self, AlgebraSpec, BimoduleSpec, CoperiodicRoute};
use tracelab::powfun::{eval_power, q_n_stab, young_family, PowerBase, PowerKind, Route};
use tracelab::selfcheck;
use tracelab::tate::{tate_cyclic, truncated_tate_orbit, truncated_tate_resolution, FinGroup, GModule, SubgroupFamily};
use tracelab::{Error, Field, Result};

use report::{rows_from, rows_windowed, ErrorDoc, MatrixDoc, Payload, Report};

#[derive(Parser, Serialize)]
#[command(name = "tracelab", version, about = "Exact homological algebra over prime fields")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Characteristic of the ground field.
    #[arg(long, global = true, default_value_t = 2)]
    p: u64,
    #[arg(long, global = true, default_value_t = 4)]
    max_degree: usize,
    /// Window for the u-completed theories (HP, CP̄, the conjugate filtration).
    #[arg(long, global = true, default_value_t = 2)]
    window: usize,
    /// orbit|resolution (ttate, divpow), direct|tate (cpbar), cube|surjections (cube).
    #[arg(long, global = true)]
    route: Option<String>,
    /// Worker threads; results do not depend on it.
    #[serde(skip)]
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write the report here instead of standard output.
    #[serde(skip)]
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Add wall-clock figures, which makes reports differ between runs.
    #[serde(skip)]
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Args, Serialize, Clone)]
struct AlgebraArgs {
    /// Algebra document (labels, structure triplets, unit).
    #[arg(long, conflicts_with = "builtin")]
    algebra: Option<PathBuf>,
    /// prime_field, dual_numbers, upper_triangular, group_algebra:N, truncated:N.
    #[arg(long)]
    builtin: Option<String>,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "subcommand")]
enum Cmd {
    /// Hochschild homology HH_•(A, M).
    Hh {
        #[command(flatten)]
        #[serde(flatten)]
        alg: AlgebraArgs,
        /// Bimodule document; the regular bimodule when absent.
        #[arg(long)]
        bimodule: Option<PathBuf>,
    },
    /// Hochschild and cyclic homology.
    Hc {
        #[command(flatten)]
        #[serde(flatten)]
        alg: AlgebraArgs,
    },
    /// Periodic cyclic homology, stable degrees flagged.
    Hp {
        #[command(flatten)]
        #[serde(flatten)]
        alg: AlgebraArgs,
    },
    /// Co-periodic cyclic homology in degrees −max..max.
    Cpbar {
        #[command(flatten)]
        #[serde(flatten)]
        alg: AlgebraArgs,
    },
    /// The p-cyclic-power trace HH^(p), with Connes' B for M = A.
    Hhp {
        #[command(flatten)]
        #[serde(flatten)]
        alg: AlgebraArgs,
        #[arg(long)]
        bimodule: Option<PathBuf>,
    },
    /// Cyclic homology of the conjugate-filtration model of THH.
    ThhConj {
        #[command(flatten)]
        #[serde(flatten)]
        alg: AlgebraArgs,
    },
    /// Tate cohomology of a cyclic group in degrees −max..max.
    Tate {
        /// C<n>.
        #[arg(long, default_value = "C2")]
        group: String,
        #[arg(long, value_enum, default_value_t = ModuleKind::Trivial)]
        module: ModuleKind,
        /// Dimension of the trivial module, or of V for the cyclic power V^⊗n.
        #[arg(long, default_value_t = 1)]
        dim: usize,
    },
    /// Truncated Tate cohomology H̄_•(G, X, k^dim).
    Ttate {
        /// S<n>, C<n>, or a group document.
        #[arg(long, default_value = "S2")]
        group: String,
        /// young (symmetric groups), trivial, or a family document.
        #[arg(long, default_value = "young")]
        family: String,
        #[arg(long, default_value_t = 1)]
        dim: usize,
        /// Also report the multiplication (resolution route, dim 1).
        #[arg(long)]
        ring: bool,
    },
    /// Stabilized divided powers HQ^n_•(F_p^dim).
    Divpow {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        dim: usize,
    },
    /// Homology of the additivization Stab F.
    Cube {
        #[arg(long, value_enum, default_value_t = FunctorKind::Linearization)]
        functor: FunctorKind,
        /// Exponent for tensor and divided powers.
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Dimension for additive functors.
        #[arg(long, default_value_t = 1)]
        dim: usize,
        #[command(flatten)]
        #[serde(flatten)]
        alg: AlgebraArgs,
    },
    /// Mac Lane homology HM_•(A, A).
    Maclane {
        #[command(flatten)]
        #[serde(flatten)]
        alg: AlgebraArgs,
    },
    /// Built-in checks: quick examples and invariants, or full acceptance.
    Selfcheck {
        #[arg(long, value_enum, default_value_t = Level::Quick)]
        level: Level,
    },
}

#[derive(ValueEnum, Serialize, Clone, Copy, Debug)]
#[serde(rename_all = "kebab-case")]
enum ModuleKind {
    Trivial,
    Regular,
    CyclicPower,
}

#[derive(ValueEnum, Serialize, Clone, Copy, Debug)]
#[serde(rename_all = "kebab-case")]
enum FunctorKind {
    Linearization,
    Additive,
    Tensor,
    Divided,
}

#[derive(ValueEnum, Serialize, Clone, Copy, Debug)]
#[serde(rename_all = "kebab-case")]
enum Level {
    Quick,
    Full,
}

fn field(cli: &Cli) -> Result<Field> {
    hoch::characteristic(cli.p)
}

fn algebra(cli: &Cli, a: &AlgebraArgs) -> Result<AlgebraSpec> {
    let f = field(cli)?;
    match (&a.algebra, &a.builtin) {
        (Some(path), _) => input::algebra_file(path, f),
        (None, Some(name)) => input::builtin_algebra(name, f),
        (None, None) => Ok(AlgebraSpec::prime_field(f)),
    }
}

fn bimodule(a: &AlgebraSpec, path: &Option<PathBuf>) -> Result<Option<BimoduleSpec>> {
    path.as_deref().map(|p| input::bimodule_file(p, a)).transpose()
}

fn no_route(cli: &Cli) -> Result<()> {
    match &cli.route {
        None => Ok(()),
        Some(r) => Err(Error::Validation(format!("this subcommand takes no route, got {r:?}"))),
    }
}

fn route<T: Copy>(cli: &Cli, options: &[(&str, T)]) -> Result<Option<T>> {
    let Some(r) = &cli.route else { return Ok(None) };
    options.iter().find(|(name, _)| name == r).map(|&(_, v)| Some(v)).ok_or_else(|| {
        let names: Vec<&str> = options.iter().map(|(n, _)| *n).collect();
        Error::Validation(format!("route {r:?} is not one of {names:?}"))
    })
}

/// Group and family for truncated Tate cohomology; `young` needs `S<n>`.
fn group_and_family(group: &str, family: &str) -> Result<(FinGroup, SubgroupFamily)> {
    if family == "young" {
        let n = input::symmetric_degree(group)
            .ok_or_else(|| Error::Validation("the young family needs a group S<n>".into()))?;
        let y = young_family(n)?;
        return Ok((y.group, y.family));
    }
    let g = input::group(group)?;
    let x = input::family(family, &g)?;
    Ok((g, x))
}

fn ring_doc(r: &tracelab::tate::RingTable) -> serde_json::Value {
    let products: Vec<_> = r
        .table
        .iter()
        .map(|(&(a, b), m)| json!({ "a": a, "b": b, "matrix": MatrixDoc::from(m) }))
        .collect();
    json!({ "dims": r.dims, "products": products })
}

/// One computation through degree bound `top`.
fn compute(cli: &Cli, top: usize) -> Result<Payload> {
    let f = field(cli)?;
    let w = cli.window;
    match &cli.cmd {
        Cmd::Hh { alg, bimodule: bm } => {
            no_route(cli)?;
            let a = algebra(cli, alg)?;
            let m = bimodule(&a, bm)?.unwrap_or_else(|| BimoduleSpec::regular(&a));
            Ok(Payload::default().table("hh", rows_from(0, &hoch::hochschild(&a, &m, top)?)))
        }
        Cmd::Hc { alg } => {
            no_route(cli)?;
            let r = hoch::hc_hp(&algebra(cli, alg)?, top, w)?;
            Ok(Payload::default().table("hh", rows_from(0, &r.hh)).table("hc", rows_from(0, &r.hc)))
        }
        Cmd::Hp { alg } => {
            no_route(cli)?;
            let r = hoch::hc_hp(&algebra(cli, alg)?, top, w)?;
            Ok(Payload::default().table("hp", rows_windowed(&r.hp)))
        }
        Cmd::Cpbar { alg } => {
            let r = route(cli, &[("direct", CoperiodicRoute::Direct), ("tate", CoperiodicRoute::Tate)])?
                .unwrap_or(CoperiodicRoute::Direct);
            Ok(Payload::default().table("cpbar", rows_windowed(&hoch::cpbar(&algebra(cli, alg)?, top, w, r)?)))
        }
        Cmd::Hhp { alg, bimodule: bm } => {
            no_route(cli)?;
            let a = algebra(cli, alg)?;
            let m = bimodule(&a, bm)?;
            let r = hoch::hh_p_trace(&a, m.as_ref(), top)?;
            let mut p = Payload::default().table("hhp", rows_from(0, &r.dims));
            if let Some(ranks) = r.connes_ranks {
                // ranks[d]: B from HH^(p)_d to HH^(p)_{d+1}
                p = p.with("connes_ranks", ranks);
            }
            Ok(p)
        }
        Cmd::ThhConj { alg } => {
            no_route(cli)?;
            let r = hoch::thh_conjugate(&algebra(cli, alg)?, top, w)?;
            let graded: Vec<_> = r
                .graded
                .iter()
                .enumerate()
                .map(|(i, g)| json!({ "filtration": i, "pieces": g.iter().map(|(d, n)| json!({ "degree": d, "dim": n })).collect::<Vec<_>>() }))
                .collect();
            let u: Vec<_> = r.u_ranks.iter().map(|(n, rk)| json!({ "from_degree": n, "rank": rk })).collect();
            Ok(Payload::default().table("thh_conj", rows_from(0, &r.dims)).with("u_ranks", u).with("graded", graded))
        }
        Cmd::Tate { group, module, dim } => {
            no_route(cli)?;
            let g = input::group(group)?;
            let (g, m) = match module {
                ModuleKind::Trivial => (g.clone(), GModule::trivial(&g, f, *dim)),
                ModuleKind::Regular => (g.clone(), GModule::regular(&g, f)),
                ModuleKind::CyclicPower => {
                    let v = eval_power(f, PowerKind::Cyclic, g.order(), &PowerBase::Space(*dim))?;
                    v.action.ok_or_else(|| Error::Validation("the cyclic power carries its rotation".into()))?
                }
            };
            let t = tate_cyclic(&g, &m, top)?;
            Ok(Payload::default().table("tate", rows_from(-(top as i64), &t)))
        }
        Cmd::Ttate { group, family, dim, ring } => {
            let (g, x) = group_and_family(group, family)?;
            let m = GModule::trivial(&g, f, *dim);
            let r = route(cli, &[("orbit", Route::Orbit), ("resolution", Route::Resolution)])?.unwrap_or(Route::Resolution);
            match r {
                Route::Orbit => {
                    if *ring {
                        return Err(Error::Validation("the ring table comes with the resolution route".into()));
                    }
                    Ok(Payload::default().table("ttate", rows_from(0, &truncated_tate_orbit(&g, &x, &m, top)?)))
                }
                Route::Resolution => {
                    let t = truncated_tate_resolution(&g, &x, &m, top, None, *ring)?;
                    let mut p = Payload::default().table("ttate", rows_from(0, &t.dims)).with("cover_points", t.cover_points);
                    if let Some(r) = &t.ring {
                        p = p.with("ring", ring_doc(r));
                    }
                    Ok(p)
                }
            }
        }
        Cmd::Divpow { n, dim } => {
            let r = route(cli, &[("orbit", Route::Orbit), ("resolution", Route::Resolution)])?;
            let t = q_n_stab(f, *n, *dim, top, r)?;
            let mut p = Payload::default().table("divpow", rows_from(0, &t.dims));
            if let Some(r) = &t.ring {
                p = p.with("ring", ring_doc(r));
            }
            Ok(p)
        }
        Cmd::Cube { functor, n, dim, alg } => {
            let r = route(cli, &[("cube", StabRoute::Cube), ("surjections", StabRoute::Surjections)])?;
            let cr = match functor {
                FunctorKind::Linearization => CrossEffectSystem::linearization(&algebra(cli, alg)?)?,
                FunctorKind::Additive => CrossEffectSystem::additive(f, *dim),
                FunctorKind::Tensor => CrossEffectSystem::tensor_power(f, *n),
                FunctorKind::Divided => CrossEffectSystem::divided_power(f, *n),
            };
            Ok(Payload::default().table("stab", rows_from(0, &stab_window(&cr, top, r)?)))
        }
        Cmd::Maclane { alg } => {
            no_route(cli)?;
            let a = algebra(cli, alg)?;
            Ok(Payload::default().table("maclane", rows_from(0, &maclane_homology(&BimoduleSpec::regular(&a), top)?)))
        }
        Cmd::Selfcheck { .. } => unreachable!("handled before dispatch"),
    }
}

fn selfcheck(cli: &Cli, level: Level, job: serde_json::Value) -> (Report, ExitCode) {
    let mut checks = selfcheck::quick();
    if matches!(level, Level::Full) {
        checks.extend(selfcheck::acceptance());
    }
    let mut results = Vec::new();
    let mut first_failure = None;
    for c in &checks {
        let o = selfcheck::run(c);
        eprintln!("{} {:<24} {}", if o.passed() { "PASS" } else { "FAIL" }, o.id, o.title);
        if let (None, Some(why)) = (&first_failure, &o.failure) {
            first_failure = Some(json!({ "id": o.id, "message": why }));
        }
        let mut entry = json!({ "id": o.id, "title": o.title, "passed": o.passed(), "failure": o.failure });
        if cli.timings {
            entry["seconds"] = json!(o.seconds);
        }
        results.push(entry);
    }
    let failed = first_failure.is_some();
    let mut report = Report::new(if failed { "failed" } else { "ok" }, job);
    report.extra = BTreeMap::from([("checks".to_string(), json!(results))]);
    if let Some(f) = first_failure {
        eprintln!("first failure: {}: {}", f["id"].as_str().unwrap_or(""), f["message"].as_str().unwrap_or(""));
        report.extra.insert("first_failure".into(), f);
    }
    (report, if failed { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

/// Runs the job; on budget exhaustion retries with smaller degree bounds
/// and keeps the largest table that fits.
fn execute(cli: &Cli, job: serde_json::Value) -> (Report, ExitCode) {
    if let Cmd::Selfcheck { level } = cli.cmd {
        return selfcheck(cli, level, job);
    }
    match compute(cli, cli.max_degree) {
        Ok(p) => (Report::new("ok", job).fill(p), ExitCode::SUCCESS),
        Err(e @ Error::Budget { .. }) => {
            let partial = (0..cli.max_degree).rev().find_map(|top| match compute(cli, top) {
                Ok(p) => Some((top, p)),
                Err(_) => None,
            });
            let mut report = match partial {
                Some((top, p)) => {
                    let mut r = Report::new("partial", job).fill(p);
                    r.extra.insert("completed_max_degree".into(), json!(top));
                    r
                }
                None => Report::new("budget_exhausted", job),
            };
            report.error = Some(ErrorDoc::from(&e));
            (report, ExitCode::from(2))
        }
        Err(e) => {
            let mut report = Report::new("error", job);
            report.error = Some(ErrorDoc::from(&e));
            (report, ExitCode::from(1))
        }
    }
}

fn emit(report: &Report, out: Option<&PathBuf>) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(report).expect("reports serialize");
    text.push('\n');
    match out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            if code == 1 {
                let mut r = Report::new("error", serde_json::Value::Null);
                r.error = Some(ErrorDoc { kind: "usage", message: e.to_string() });
                let _ = emit(&r, None);
            }
            return ExitCode::from(code);
        }
    };
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global() {
            eprintln!("cannot size the worker pool: {e}");
        }
    }
    let job = serde_json::to_value(&cli).expect("job echo serializes");
    let start = Instant::now();
    let (mut report, code) = execute(&cli, job);
    if cli.timings {
        report.wall_clock_seconds = Some(start.elapsed().as_secs_f64());
    }
    if let Err(e) = emit(&report, cli.out.as_ref()) {
        eprintln!("cannot write the report: {e}");
        return ExitCode::from(1);
    }
    code
}
