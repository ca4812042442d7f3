use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use symcone::cone::{classify_point, Membership};
use symcone::sampling::SampleBatch;
use symcone::verify::AggregateReport;

fn symcone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symcone"))
        .args(args)
        .env_remove("SYMCONE_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn classify_verdicts() {
    for (args, verdict) in [
        (
            ["--algebra", "sym-real", "--size", "3", "--alpha", "0.5"],
            "DiscreteWallach(1)",
        ),
        (
            ["--algebra", "lorentz", "--size", "4", "--alpha", "1.0"],
            "DiscreteWallach(1)",
        ),
        (
            [
                "--algebra",
                "herm-complex",
                "--size",
                "2",
                "--alpha",
                "0.9+0.1i",
            ],
            "NotAMeasure",
        ),
    ] {
        let o = symcone(&[&["classify"][..], &args[..]].concat());
        assert!(o.status.success());
        assert!(
            stdout(&o).contains(&format!("verdict: {verdict}\n")),
            "{}",
            stdout(&o)
        );
    }
}

#[test]
fn bad_flags_exit_2_with_a_diagnostic() {
    let o = symcone(&["classify", "--algebra", "sym-real", "--alpha", "one"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("one"), "{}", stderr(&o));
}

fn sample_file(dir: &Path, name: &str, extra: &[&str]) -> (Output, String) {
    let path = dir.join(name);
    let p = path.to_str().unwrap();
    let o = symcone(&[&["--format", "machine", "sample", "--out", p][..], extra].concat());
    (o, fs::read_to_string(&path).unwrap_or_default())
}

#[test]
fn sample_writes_a_batch_and_self_checks() {
    let dir = tempfile::tempdir().unwrap();
    let flags = [
        "--algebra",
        "sym-real",
        "--size",
        "2",
        "--alpha",
        "1.5",
        "--count",
        "100000",
        "--seed",
        "42",
    ];
    let (o, text) = sample_file(dir.path(), "a.txt", &flags);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        text.lines().filter(|l| !l.starts_with('#')).count(),
        100_000
    );
    let check: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert!((check["target"]["re"].as_f64().unwrap() - 0.125).abs() < 1e-15);
    assert_eq!(check["passed"], true);
    assert!((check["estimate"]["re"].as_f64().unwrap() - 0.125).abs() < 0.005);

    let (_, again) = sample_file(dir.path(), "b.txt", &flags);
    assert_eq!(text, again);

    let batch = SampleBatch::from_text(&text).unwrap();
    assert_eq!(batch.seed, 42);
    assert_eq!(batch.len(), 100_000);
}

#[test]
fn seed_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.txt");
    let o = Command::new(env!("CARGO_BIN_EXE_symcone"))
        .args([
            "sample",
            "--algebra",
            "lorentz",
            "--size",
            "4",
            "--alpha",
            "3",
            "--count",
            "10",
            "--out",
        ])
        .arg(&path)
        .env("SYMCONE_SEED", "77")
        .output()
        .unwrap();
    assert!(o.status.success());
    assert_eq!(
        SampleBatch::from_text(&fs::read_to_string(&path).unwrap())
            .unwrap()
            .seed,
        77
    );
}

#[test]
fn discrete_lorentz_samples_lie_on_the_boundary() {
    let dir = tempfile::tempdir().unwrap();
    let (o, text) = sample_file(
        dir.path(),
        "k1.txt",
        &[
            "--algebra",
            "lorentz",
            "--size",
            "4",
            "--k",
            "1",
            "--count",
            "5000",
            "--seed",
            "3",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let batch = SampleBatch::from_text(&text).unwrap();
    for x in &batch.elements {
        assert_eq!(
            classify_point(x).unwrap().verdict,
            Membership::BoundaryRank(1)
        );
    }
}

#[test]
fn octonionic_sampling_exits_3() {
    let o = symcone(&[
        "sample",
        "--algebra",
        "herm-octonion",
        "--alpha",
        "9",
        "--count",
        "5",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("octonion"), "{}", stderr(&o));
}

#[test]
fn verify_stieltjes_config() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("c.toml");
    fs::write(
        &config,
        "[[check]]\nkind = \"stieltjes\"\nmoments = [0, 1, 2, 3, 4, 5, 6, 7, 8]\n",
    )
    .unwrap();
    let out = dir.path().join("reports");
    let o = symcone(&[
        "--format",
        "machine",
        "verify",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let printed = AggregateReport::from_jsonl(&stdout(&o)).unwrap();
    assert_eq!(printed.reports.len(), 9);
    let written = fs::read_to_string(out.join("report.jsonl")).unwrap();
    assert_eq!(written, stdout(&o));
    assert_eq!(AggregateReport::from_jsonl(&written).unwrap(), printed);
    let text = fs::read_to_string(out.join("report.txt")).unwrap();
    assert!(
        text.ends_with("# summary: 9 checks, 9 passed, 0 failed\n"),
        "{text}"
    );
}

#[test]
fn verify_failures_and_config_errors_are_distinct() {
    let dir = tempfile::tempdir().unwrap();
    let faulty = dir.path().join("fault.toml");
    fs::write(
        &faulty,
        "samples = 50000\n[[check]]\nkind = \"gamma_integral\"\nalgebra = \"sym-real:2\"\nalphas = [2.0]\ny_scales = [1.0]\nfault_exponent_shift = 1.0\n",
    )
    .unwrap();
    let o = symcone(&["verify", "--config", faulty.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("passed = false"));

    let malformed = dir.path().join("bad.toml");
    fs::write(
        &malformed,
        "[[check]]\nkind = \"gamma_integral\"\nalphas = \"x\"\n",
    )
    .unwrap();
    let o = symcone(&["verify", "--config", malformed.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("config error"), "{}", stderr(&o));

    let o = symcone(&[
        "verify",
        "--config",
        dir.path().join("missing.toml").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
}
