use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use irslab::selftest::{selftest, Fixtures};
use irslab::ExperimentConfig;
use irslab_core::spectral::cycle_rho0;
use serde_json::Value;

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn irslab(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_irslab"))
        .args(args)
        .env("IRSLAB_OUTPUT_DIR", out)
        .output()
        .unwrap()
}

fn run_sample(name: &str) -> (tempfile::TempDir, Value) {
    let out = tempfile::tempdir().unwrap();
    let cfg = configs().join(name);
    let res = irslab(&["run", cfg.to_str().unwrap()], out.path());
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let report = std::fs::read_to_string(out.path().join("report.json")).unwrap();
    (out, serde_json::from_str(&report).unwrap())
}

#[test]
fn cycle_csv_matches_the_closed_form() {
    let (out, _) = run_sample("cycle_spectra.toml");
    let csv = std::fs::read_to_string(out.path().join("schreier-spectra.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("index,rho0,bs_distance_R2"));
    let mut rows = 0;
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        let n: usize = cols[0].parse().unwrap();
        let rho: f64 = cols[1].parse().unwrap();
        assert!((rho - cycle_rho0(n)).abs() < 1e-9, "n = {n}: {rho}");
        rows += 1;
    }
    assert_eq!(rows, 6);
    assert!(out.path().join("schreier-spectra.svg").exists());
}

#[test]
fn s3_stabilizers_are_an_ergodic_invariant_measure() {
    let (_, report) = run_sample("s3_irs_check.toml");
    let r = &report["results"];
    assert_eq!(r["invariant"], true);
    assert_eq!(r["normal_closure"]["description"], "S3");
    assert_eq!(r["spanning"], true);
    assert_eq!(r["ergodic_components"], 1);
}

#[test]
fn haar_ratio_sample() {
    let (_, report) = run_sample("haar_ratio.toml");
    assert_eq!(report["results"]["ratio"], "2/1");
    assert_eq!(report["results"]["agree"], true);
}

#[test]
fn every_sample_config_runs() {
    for entry in std::fs::read_dir(configs()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "toml") {
            let (_, report) = run_sample(path.file_name().unwrap().to_str().unwrap());
            assert_eq!(report["schema_version"], 1);
            assert!(report["wall_clock_seconds"].as_f64().unwrap() >= 0.0);
        }
    }
}

#[test]
fn cone_sample_reproduces_the_klein_barycenter() {
    let (out, report) = run_sample("cone_barycenter.toml");
    assert_eq!(report["results"]["barycenter_fixed"], true);
    assert_eq!(report["results"]["measure_invariant"], true);
    let bary = std::fs::read_to_string(out.path().join("barycenter.txt")).unwrap();
    let expected = irslab_core::convex::ConvexBody::from_text(&Fixtures::bundled().klein_barycenter).unwrap();
    assert_eq!(irslab_core::convex::ConvexBody::from_text(&bary).unwrap(), expected);
}

#[test]
fn reruns_are_byte_identical_apart_from_timings() {
    let cfg = ExperimentConfig::load(&configs().join("bs_convergence.toml")).unwrap();
    let a = irslab::run::execute(&cfg).unwrap();
    let b = irslab::run::execute(&cfg).unwrap();
    assert_eq!(a.files, b.files);
    assert_eq!(a.results, b.results);
    let (out_a, ra) = run_sample("folner_search.toml");
    let (out_b, rb) = run_sample("folner_search.toml");
    assert_eq!(ra["results"], rb["results"]);
    assert_eq!(
        std::fs::read(out_a.path().join("certificate.json")).unwrap(),
        std::fs::read(out_b.path().join("certificate.json")).unwrap()
    );
}

#[test]
fn output_dir_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::copy(configs().join("haar_ratio.toml"), &cfg).unwrap();
    let target = dir.path().join("elsewhere");
    let res = irslab(&["run", cfg.to_str().unwrap()], &target);
    assert!(res.status.success());
    assert!(target.join("report.json").exists());
    assert!(!dir.path().join("irslab-out").exists());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "kind = \"haar-ratio\"\ncolour = 1\n").unwrap();
    let res = irslab(&["run", bad.to_str().unwrap()], dir.path());
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("line 2"));

    // parses, but the Følner search rejects a representative outside the ambient group
    let cfg = dir.path().join("folner.toml");
    std::fs::write(
        &cfg,
        "kind = \"folner-search\"\n[group]\nfamily = \"tree\"\narity = 2\ndepth = 2\n\
         [folner-search]\nambient = [\"01 | 10 01\"]\nq = [\"10 | 01 01\"]\nn = 2\n",
    )
    .unwrap();
    let res = irslab(&["run", cfg.to_str().unwrap()], dir.path());
    assert_eq!(res.status.code(), Some(1), "{}", String::from_utf8_lossy(&res.stderr));

    let missing = dir.path().join("missing.toml");
    assert_eq!(irslab(&["run", missing.to_str().unwrap()], dir.path()).status.code(), Some(1));
    assert_eq!(irslab(&["selftest", "--filter", "nope"], dir.path()).status.code(), Some(2));
    assert_eq!(irslab(&["version"], dir.path()).status.code(), Some(0));
}

#[test]
fn export_dot_writes_a_digraph() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("g.dot");
    let res = irslab(&["export-dot", "cycle:6", "-o", file.to_str().unwrap()], dir.path());
    assert!(res.status.success());
    let dot = std::fs::read_to_string(file).unwrap();
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches("->").count(), 12);
}

#[test]
fn a_corrupted_fixture_names_its_criterion() {
    let mut fx = Fixtures::bundled();
    fx.factorial = fx.factorial.replace("3 6", "3 7");
    let (_, results) = selftest(Some("subgroup-space"), &fx).unwrap();
    assert_eq!(results.len(), 1);
    assert_eq!(results[0].id, 9);
    assert!(!results[0].passed);
    let failed: Vec<_> = results[0].failed_checks().map(|c| c.name.as_str()).collect();
    assert_eq!(failed, ["3!Z first differs from the trivial subgroup at the listed radius"]);

    let mut fx = Fixtures::bundled();
    fx.klein_barycenter = fx.klein_barycenter.replace("1/4 1/4", "1/3 1/4");
    let (_, results) = selftest(Some("8"), &fx).unwrap();
    assert!(!results[0].passed);
    assert!(results[0].failed_checks().any(|c| c.name == "barycenter matches the fixture"));
}

#[test]
fn selftest_filter_and_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("st.json");
    let res = irslab(&["selftest", "--filter", "tdlc", "--report", report.to_str().unwrap()], dir.path());
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stdout));
    let stdout = String::from_utf8_lossy(&res.stdout);
    assert_eq!(stdout.lines().filter(|l| l.starts_with("criterion")).count(), 2);
    let json: Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(json["results"]["passed"], true);
    assert_eq!(json["results"]["criteria"].as_array().unwrap().len(), 2);
}
