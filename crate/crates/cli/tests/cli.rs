use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn l2k(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_l2k"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(
        o.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    String::from_utf8(o.stdout.clone()).unwrap()
}

const MODEL: &str = "\
# test model
seed = 42
insertion-rate = 0.01
insert r = 1.0
sub l n = 0.20
sub th t = 0.10
";

const NATIVE_MODEL: &str = "seed = 9\nsub a eo = 0.02\n";

fn simulate(dir: &Path, model: &str, l1: &str, seed: &str) -> String {
    let model_path = dir.join(format!("{l1}.model"));
    fs::write(&model_path, model).unwrap();
    let out = dir.join(format!("{l1}.tsv"));
    stdout(&l2k(&[
        "simulate",
        "--model",
        model_path.to_str().unwrap(),
        "--tokens",
        "8000",
        "--l1",
        l1,
        "--seed",
        seed,
        "--out",
        out.to_str().unwrap(),
    ]));
    fs::read_to_string(out).unwrap()
}

/// Three learner groups plus a native manifest in `dir`.
fn corpus(dir: &Path) -> (String, String) {
    let mut learners = String::new();
    for (l1, seed) in [("VI", "1"), ("JP", "2"), ("ZH", "3")] {
        learners.push_str(&simulate(dir, MODEL, l1, seed));
    }
    let manifest = dir.join("learners.tsv");
    fs::write(&manifest, learners).unwrap();
    simulate(dir, NATIVE_MODEL, "NATIVE", "4");
    (
        manifest.to_str().unwrap().to_string(),
        dir.join("NATIVE.tsv").to_str().unwrap().to_string(),
    )
}

#[test]
fn g2p_prints_phones_and_trace() {
    let out = stdout(&l2k(&["g2p", "--trace", "학교"]));
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("h a k> kk yo"));
    assert!(out.contains("tensification"));
}

#[test]
fn g2p_strict_rejects_latin() {
    let o = l2k(&["g2p", "--strict", "abc"]);
    assert!(!o.status.success());
    let lenient = l2k(&["g2p", "학교!"]);
    assert_eq!(stdout(&lenient).trim(), "h a k> kk yo");
    assert!(String::from_utf8_lossy(&lenient.stderr).contains("warning"));
}

#[test]
fn align_reports_ops_and_per() {
    let out = stdout(&l2k(&["align", "--canonical", "k a t>", "--realized", "k a"]));
    assert!(out.contains("C:k->k C:a->a D:t>->*"));
    assert!(out.contains("cost 3"));
    let out = stdout(&l2k(&["align", "--canonical", "l", "--realized", "n"]));
    assert!(out.starts_with("S:l->n"));
}

#[test]
fn invalid_shared_flags_are_rejected() {
    assert!(!l2k(&["--weights", "sub=7,ins=3,del=3", "g2p", "가"]).status.success());
    assert!(!l2k(&["--alpha-stars", ".01,.05,.001", "g2p", "가"]).status.success());
    assert!(!l2k(&["align", "--canonical", "zz", "--realized", "a"]).status.success());
}

#[test]
fn analyze_writes_all_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let (manifest, native) = corpus(dir.path());
    let out = dir.path().join("out");
    stdout(&l2k(&[
        "--seed",
        "42",
        "analyze",
        "--manifest",
        &manifest,
        "--native",
        &native,
        "--out",
        out.to_str().unwrap(),
    ]));
    for f in [
        "report.json",
        "report.md",
        "matrices/VI.csv",
        "matrices/VI.adjusted.csv",
        "matrices/ALL.csv",
        "matrices/NATIVE.csv",
        "heatmaps/JP-vowels.svg",
        "heatmaps/ZH-consonants.svg",
        "heatmaps/ALL-all.svg",
    ] {
        assert!(out.join(f).is_file(), "{f} missing");
    }
    let csv = fs::read_to_string(out.join("matrices/VI.csv")).unwrap();
    assert_eq!(csv.lines().count(), 42);
    assert!(csv.starts_with(",p,pp,ph,"));
    let md = fs::read_to_string(out.join("report.md")).unwrap();
    assert!(md.contains("- seed: 42"));
    assert!(md.contains("| L1 | Canon | Real | L1 Freq. (%) | Average Freq. (%) | P-value |"));

    // `report` re-renders the saved JSON identically.
    let again = stdout(&l2k(&["report", out.join("report.json").to_str().unwrap()]));
    assert_eq!(again, md);
    let json = stdout(&l2k(&[
        "report",
        "--format",
        "json",
        out.join("report.json").to_str().unwrap(),
    ]));
    assert_eq!(json, fs::read_to_string(out.join("report.json")).unwrap());
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (manifest, native) = corpus(dir.path());
    let run = |name: &str| {
        let out = dir.path().join(name);
        stdout(&l2k(&[
            "analyze",
            "--manifest",
            &manifest,
            "--native",
            &native,
            "--out",
            out.to_str().unwrap(),
        ]));
        out
    };
    let (a, b) = (run("a"), run("b"));
    for f in ["report.json", "matrices/VI.adjusted.csv", "heatmaps/VI-vowels.svg"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn patterns_without_baseline() {
    let dir = tempfile::tempdir().unwrap();
    let (manifest, _) = corpus(dir.path());
    let out = stdout(&l2k(&["--bonferroni", "patterns", "--manifest", &manifest]));
    assert!(out.contains("no baseline subtraction"));
    assert!(out.contains("multiple-comparison correction: Bonferroni"));
    assert!(out.contains("| th | t |"));
}

#[test]
fn manifest_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.tsv");
    fs::write(&path, "u1\tVI\t-\t학교\t-\th a k> kk yo\nu2\tXX\t-\t학교\t-\th a\n").unwrap();
    let o = l2k(&["patterns", "--manifest", path.to_str().unwrap()]);
    assert!(!o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 2"), "{err}");
    assert!(err.contains("XX"), "{err}");
}

#[test]
fn simulate_recovery_table() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("m.model");
    fs::write(&model, MODEL).unwrap();
    let out = stdout(&l2k(&[
        "simulate",
        "--model",
        model.to_str().unwrap(),
        "--tokens",
        "20000",
        "--corpus",
        "uniform",
        "--recover",
    ]));
    assert!(out.contains("| l | n | 20.00 |"));
    assert!(out.contains("| * | r | 100.00 |"));
}
