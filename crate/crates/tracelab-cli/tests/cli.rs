use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn tracelab(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_tracelab"));
    cmd.args(args).env_remove("TRACELAB_BUDGET_MB");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("the binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn dims(r: &Value, table: &str) -> Vec<Option<u64>> {
    r["tables"][table].as_array().expect("table present").iter().map(|row| row["dim"].as_u64()).collect()
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).to_string_lossy().into_owned()
}

#[test]
fn hochschild_of_the_dual_numbers_from_a_document() {
    let out = tracelab(&["hh", "--p", "2", "--max-degree", "4", "--algebra", &data("dual_numbers.json")], &[]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["schema_version"], 1);
    assert_eq!(dims(&r, "hh"), vec![Some(2); 5]);
    assert!(r["tables"]["hh"].as_array().unwrap().iter().all(|row| row["stable"] == true));
}

#[test]
fn truncated_tate_of_sigma3_by_orbits() {
    let out = tracelab(&["ttate", "--group", "S3", "--family", "young", "--p", "3", "--max-degree", "5", "--route", "orbit"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let want: Vec<Option<u64>> = [1, 1, 0, 0, 1, 1].into_iter().map(Some).collect();
    assert_eq!(dims(&report(&out), "ttate"), want);
}

#[test]
fn group_and_family_documents() {
    // the family generated by one transposition is X_3
    let args = ["ttate", "--group", &data("s3.json"), "--family", &data("s3_transpositions.json"), "--p", "3", "--max-degree", "5"];
    let out = tracelab(&args, &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let want: Vec<Option<u64>> = [1, 1, 0, 0, 1, 1].into_iter().map(Some).collect();
    assert_eq!(dims(&report(&out), "ttate"), want);
}

#[test]
fn conjugate_filtration_of_f2() {
    let out = tracelab(&["thh-conj", "--p", "2", "--max-degree", "6"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let want: Vec<Option<u64>> = [1, 0, 1, 0, 1, 0, 1].into_iter().map(Some).collect();
    assert_eq!(dims(&r, "thh_conj"), want);
    for u in r["u_ranks"].as_array().unwrap() {
        let even = u["from_degree"].as_i64().unwrap() % 2 == 0;
        assert_eq!(u["rank"].as_u64(), Some(u64::from(even)));
    }
}

#[test]
fn reports_do_not_depend_on_workers() {
    let args = ["cpbar", "--p", "3", "--max-degree", "2", "--window", "1", "--builtin", "dual_numbers"];
    let one = tracelab(&[&args[..], &["--jobs", "1"]].concat(), &[]);
    let two = tracelab(&[&args[..], &["--jobs", "2"]].concat(), &[]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, two.stdout);
    assert_eq!(report(&one)["status"], "ok");
    assert_eq!(dims(&report(&one), "cpbar").len(), 5);
}

#[test]
fn invalid_input_exits_with_one() {
    let out = tracelab(&["hh", "--route", "orbit"], &[]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["error"]["kind"], "validation");
    let out = tracelab(&["cpbar", "--p", "0"], &[]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["error"]["kind"], "unsupported_characteristic");
    let out = tracelab(&["no-such-subcommand"], &[]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["error"]["kind"], "usage");
}

#[test]
fn budget_exhaustion_exits_with_two_and_keeps_a_partial_table() {
    let out = tracelab(&["hh", "--p", "3", "--builtin", "truncated:4", "--max-degree", "9"], &[("TRACELAB_BUDGET_MB", "1")]);
    assert_eq!(out.status.code(), Some(2));
    let r = report(&out);
    assert_eq!(r["status"], "partial");
    assert_eq!(r["error"]["kind"], "budget");
    let done = r["completed_max_degree"].as_u64().unwrap() as usize;
    assert!(done < 9);
    assert_eq!(dims(&r, "hh").len(), done + 1);
}

#[test]
fn out_flag_writes_the_same_report() {
    let dir = std::env::temp_dir().join(format!("tracelab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("r.json");
    let args = ["cube", "--functor", "additive", "--dim", "2", "--max-degree", "3"];
    let direct = tracelab(&args, &[]);
    let written = tracelab(&[&args[..], &["--out", path.to_str().unwrap()]].concat(), &[]);
    assert_eq!(written.status.code(), Some(0));
    assert!(written.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
    let want: Vec<Option<u64>> = [2, 0, 0, 0].into_iter().map(Some).collect();
    assert_eq!(dims(&report(&direct), "stab"), want);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn tate_of_the_cyclic_power() {
    let out = tracelab(&["tate", "--group", "C3", "--module", "cyclic-power", "--dim", "2", "--p", "3", "--max-degree", "3"], &[]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(dims(&report(&out), "tate"), vec![Some(2); 7]);
}

#[test]
fn quick_selfcheck_passes() {
    let out = tracelab(&["selfcheck", "--level", "quick"], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(r["status"], "ok");
    assert!(r["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}
