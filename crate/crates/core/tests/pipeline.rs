use symcone::cli::{run, EXIT_OK};
use symcone::verify::config::{run_all, VerifyConfig};
use symcone::verify::AggregateReport;

#[test]
fn default_suite_passes() {
    let report = run_all(&VerifyConfig::default_suite());
    let failures: Vec<String> = report.failures().map(|r| r.to_text()).collect();
    assert!(failures.is_empty(), "{}", failures.join("\n"));
    assert!(report.reports.len() > 200);
}

#[test]
fn machine_output_round_trips_through_the_library_entry_point() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(
        [
            "symcone",
            "--format",
            "machine",
            "verify",
            "--seed",
            "9",
            "--samples",
            "20000",
            "--config",
            "/dev/null",
        ],
        &mut out,
        &mut err,
    );
    assert_eq!(code, EXIT_OK, "{}", String::from_utf8_lossy(&err));
    assert!(out.is_empty());

    let config = VerifyConfig::from_toml(
        "seed = 9\nsamples = 20000\n[[check]]\nkind = \"convolution\"\nalgebra = \"lorentz:4\"\npairs = [[1.0, 2.0]]\n\n[[check]]\nkind = \"cayley\"\nalgebra = \"herm-complex:2\"\nlambdas = [0.5]\n",
    )
    .unwrap();
    let report = run_all(&config);
    let parsed = AggregateReport::from_jsonl(&report.to_jsonl()).unwrap();
    assert_eq!(parsed, report);
    assert_eq!(parsed.to_jsonl(), report.to_jsonl());
}
