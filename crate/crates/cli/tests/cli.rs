use std::process::{Command, Output};

use heegner1::eulerlab::{eval_point, CMPointSpec};
use heegner1_cli::{CliError, PointCache};
use serde_json::Value;

fn bin(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_heegner1"));
    cmd.args(args).env_remove("HEEGNER1_PREC_BITS").env_remove("HEEGNER1_TOL_LOG2").env_remove("HEEGNER1_CACHE_DIR");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cache = PointCache::new(dir.path());
    let spec = CMPointSpec::new(-7, 1, 0, 11).unwrap();
    assert!(cache.load(&spec, 200).unwrap().is_none());
    let p = eval_point(&spec, 200).unwrap();
    cache.store(&p).unwrap();
    let q = cache.load(&spec, 200).unwrap().unwrap();
    assert_eq!(q.b.to_decimal_strings(), p.b.to_decimal_strings());
    assert_eq!(q.c.to_decimal_strings(), p.c.to_decimal_strings());
    assert_eq!((q.err_exp(), q.prec_bits, q.level), (p.err_exp(), p.prec_bits, p.level));
    assert_eq!(q.source, p.source);
    assert!(q.residual_log2.unwrap() < -100.0);
    // the key includes the precision
    assert!(cache.load(&spec, 300).unwrap().is_none());
    let text = std::fs::read_to_string(cache.path(&spec, 200)).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    for key in ["D", "N", "c", "a", "tauDesc", "precBits", "b", "cVal", "errExp"] {
        assert!(v.get(key).is_some(), "{key}");
    }
}

#[test]
fn corrupt_cache_entries() {
    let dir = tempfile::tempdir().unwrap();
    let cache = PointCache::new(dir.path());
    let spec = CMPointSpec::new(-7, 1, 0, 11).unwrap();
    std::fs::write(cache.path(&spec, 300), "{\"D\": -7}").unwrap();
    assert!(matches!(cache.load(&spec, 300), Err(CliError::CorruptCache { .. })));
    let dir_arg = dir.path().to_str().unwrap();
    let out = bin(&["eval-point", "--D", "-7", "--N", "11", "--cache-dir", dir_arg], &[]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("corrupt cache entry"));
    assert!(cache.load(&spec, 300).unwrap().is_some());
    // second run is served from the cache
    let out = bin(&["eval-point", "--D", "-7", "--N", "11"], &[("HEEGNER1_CACHE_DIR", dir_arg)]);
    let v = json_of(&out);
    assert!(v["result"]["cache"][0].as_str().unwrap().starts_with("loaded from"));
}

#[test]
fn configuration_precedence() {
    let out = bin(&["eval-point", "--D", "-2", "--N", "5"], &[]);
    assert_eq!(json_of(&out)["result"]["precBits"], 300);
    let out = bin(&["eval-point", "--D", "-2", "--N", "5"], &[("HEEGNER1_PREC_BITS", "600")]);
    assert_eq!(json_of(&out)["result"]["precBits"], 600);
    let out = bin(&["eval-point", "--D", "-2", "--N", "5", "--prec-bits", "1200"], &[("HEEGNER1_PREC_BITS", "600")]);
    assert_eq!(json_of(&out)["result"]["precBits"], 1200);
    let out = bin(&["eval-point", "--D", "-2", "--N", "5", "--prec-bits", "32"], &[]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("precBits"));
    let out = bin(&["eval-point", "--D", "-2", "--N", "5"], &[("HEEGNER1_TOL_LOG2", "-8")]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn rawform_and_nmult() {
    let out = bin(&["rawform", "--N", "11"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["result"]["terms"], 11);
    assert!(v["result"]["poly"].as_str().unwrap().contains("b*c^7"));
    let out = bin(&["nmult", "--n", "4", "--format", "text"], &[]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("x  (b^2 - b*c)/c^2"), "{text}");
    assert!(text.contains("y  (b^2*c^2 - b^3 + b^2*c)/c^3"), "{text}");
}

#[test]
fn verify_distribution_exit_codes() {
    let args = ["verify-distribution", "--D", "-2", "--N", "4", "--c", "1", "--a", "0", "--p", "5"];
    let out = bin(&args, &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v = json_of(&out);
    assert_eq!(v["verdict"], "verified");
    let layers: Vec<&str> = v["details"].as_array().unwrap().iter().map(|d| d["layer"].as_str().unwrap()).collect();
    for l in ["lattice", "coset", "divisor"] {
        assert!(layers.contains(&l), "{l} missing");
    }
    let mut control = args.to_vec();
    control.extend(["--replace-b", "2"]);
    let out = bin(&control, &[]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out)["verdict"], "falsified");
    // split prime
    let out = bin(&["verify-distribution", "--D", "-2", "--N", "4", "--p", "3"], &[]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn exact_failure_and_precision_shortfall() {
    let out = bin(&["verify-sj", "--D", "-2", "--N", "4", "--c", "3", "--a", "1", "--p", "3"], &[]);
    assert_eq!(out.status.code(), Some(1));
    let out = bin(&["minpoly", "--re", "1.5", "--degree", "4", "--height-bits", "64"], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_of(&out)["verdict"], "inconclusive");
    let out = bin(&["nonsense"], &[]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn every_command_emits_the_envelope() {
    let runs: Vec<Vec<&str>> = vec![
        vec!["eval-point", "--D", "-7", "--N", "11"],
        vec!["rawform", "--N", "7"],
        vec!["nmult", "--n", "5"],
        vec!["classgroup", "--disc", "-23"],
        vec!["splitting", "--D", "-2", "--p", "5"],
        vec!["cosets", "--D", "-2", "--p", "5"],
        vec!["verify-sj", "--D", "-2", "--N", "4", "--p", "5"],
        vec!["vienna", "--D", "-2", "--N", "4", "--t", "1", "--s", "1"],
        vec!["galois-orbit", "--D", "-2", "--N", "4", "--prec-bits", "200"],
        vec!["minpoly", "--re", "1.4142135623730950488016887242096980785696718753769480731766797379907324784621", "--degree", "2", "--height-bits", "4", "--prec-bits", "256"],
        vec!["invariance", "--N", "5", "--tau-re", "0.1", "--tau-im", "0.8"],
    ];
    for args in runs {
        let out = bin(&args, &[]);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        let v = json_of(&out);
        assert_eq!(v["command"], args[0]);
        for key in ["verdict", "maxMatchError", "details", "result"] {
            assert!(v.get(key).is_some(), "{key} missing for {}", args[0]);
        }
    }
}
