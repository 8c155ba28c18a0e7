use std::path::PathBuf;

use scissors::harness::{run_suite, verify, Report, Status, SuiteConfig};

fn f5_config() -> SuiteConfig {
    SuiteConfig::from_toml(
        r#"
rings = ["gf:5^1"]
checks = ["c01", "c02", "c03", "c04", "c05", "c06", "c09", "c10", "c11"]
threads = 2
"#,
    )
    .unwrap()
}

fn golden_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/f5.json")
}

#[test]
fn f5_report_matches_golden_file() {
    let json = verify(&f5_config()).unwrap().without_timing().to_json();
    if std::env::var_os("SCISSORS_UPDATE_GOLDEN").is_some() {
        std::fs::write(golden_path(), &json).unwrap();
    }
    let golden = std::fs::read_to_string(golden_path()).unwrap();
    assert_eq!(json, golden);
}

#[test]
fn f5_suite_passes() {
    let results = run_suite(&f5_config()).unwrap();
    assert_eq!(results.len(), 9);
    for r in &results {
        assert_eq!(r.status, Status::Pass, "{r:?}");
    }
}

#[test]
fn warm_cache_gives_identical_results() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = SuiteConfig::from_toml(
        r#"
rings = ["zmod:9", "gf:7^1"]
checks = ["c01", "c02", "c03", "c05"]
"#,
    )
    .unwrap();
    cfg.cache_dir = Some(dir.path().to_path_buf());
    let cold = Report::new(&cfg, run_suite(&cfg).unwrap()).without_timing();
    let files = walk(dir.path());
    assert!(files.len() >= 6, "{files:?}");
    let warm = Report::new(&cfg, run_suite(&cfg).unwrap()).without_timing();
    assert_eq!(cold.to_json(), warm.to_json());
}

fn walk(p: &std::path::Path) -> Vec<PathBuf> {
    let mut out = Vec::new();
    for e in std::fs::read_dir(p).unwrap() {
        let path = e.unwrap().path();
        if path.is_dir() {
            out.extend(walk(&path));
        } else {
            out.push(path);
        }
    }
    out
}

#[test]
fn zero_bar_budget_skips_homology_checks() {
    let cfg = SuiteConfig::from_toml(
        r#"
rings = ["gf:5^1"]
checks = ["c07", "c08", "c09"]
bar_max_order = [0, 0, 0, 0]
bar_max_dense = 0
"#,
    )
    .unwrap();
    let results = run_suite(&cfg).unwrap();
    assert!(!results.is_empty());
    for r in &results {
        assert_eq!(r.status, Status::Skipped, "{r:?}");
        assert!(r.detail.as_deref().unwrap().contains("budget"), "{r:?}");
    }
}

#[test]
fn unknown_ring_is_a_usage_error() {
    let err = SuiteConfig::from_toml("rings = [\"gf:5^1\", \"quux:3\"]").unwrap_err();
    assert!(err.to_string().contains("quux"), "{err}");
}

#[test]
fn hypotheses_become_skips() {
    let cfg = SuiteConfig::from_toml(
        r#"
rings = ["zmod:6"]
checks = ["c03", "c04", "c05", "c10"]
"#,
    )
    .unwrap();
    for r in run_suite(&cfg).unwrap() {
        assert_eq!(r.status, Status::Skipped, "{r:?}");
    }
}

#[test]
fn csv_and_markdown_cover_every_result() {
    let rep = verify(&f5_config()).unwrap();
    assert_eq!(rep.to_csv().unwrap().lines().count(), rep.results.len() + 1);
    let md = rep.to_markdown();
    assert_eq!(md.lines().filter(|l| l.starts_with("| c")).count(), rep.results.len());
}
