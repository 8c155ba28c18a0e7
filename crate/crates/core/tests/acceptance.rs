//! Runs every acceptance criterion, prints one line per criterion and exits
//! nonzero if any criterion misses in a way that is not a recorded deviation.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use scissors::harness::{run_suite, CheckResult, Status, SuiteConfig};

struct Criterion {
    number: usize,
    check: &'static str,
    limit: Duration,
    /// Targets the criterion names, as canonical specs.
    targets: &'static [&'static str],
    extra: fn(&[CheckResult]) -> Result<(), String>,
}

const MIN: u64 = 60;

fn no_extra(_: &[CheckResult]) -> Result<(), String> {
    Ok(())
}

fn computed<'a>(results: &'a [CheckResult], ring: &str, key: &str) -> Result<&'a [String], String> {
    results
        .iter()
        .find(|r| r.ring == ring)
        .and_then(|r| r.computed.get(key))
        .map(Vec::as_slice)
        .ok_or_else(|| format!("{ring}: no value for {key}"))
}

fn c1_depths(results: &[CheckResult]) -> Result<(), String> {
    // H_k = 0 for k < min(4, |A/m|) on the listed local rings
    for (ring, top) in [("gf:5^1", 3), ("gf:7^1", 3), ("zmod:9", 2), ("zmod:25", 3), ("dual:gf:5^1", 3)] {
        let r = results.iter().find(|r| r.ring == ring).ok_or(format!("{ring} missing"))?;
        let degrees = r.computed.len();
        if degrees != top + 1 {
            return Err(format!("{ring}: computed {degrees} degrees, need {}", top + 1));
        }
    }
    Ok(())
}

fn c2_dichotomy(results: &[CheckResult]) -> Result<(), String> {
    for r in results {
        let vanishes = computed(results, &r.ring, "H1 vanishes")?[0] == "true";
        let want = !matches!(r.ring.as_str(), "zmod:6" | "prod:zmod:2+zmod:2");
        if vanishes != want {
            return Err(format!("{}: H1 vanishes = {vanishes}", r.ring));
        }
    }
    Ok(())
}

fn c5_residue_two(results: &[CheckResult]) -> Result<(), String> {
    for (ring, want) in [("zmod:4", ["2", "2"].as_slice()), ("zmod:8", &["2", "2", "2"])] {
        let got = computed(results, ring, "H1(PGL2)")?;
        if got != want {
            return Err(format!("{ring}: H1 = {got:?}"));
        }
    }
    Ok(())
}

fn c6_fields_odd(results: &[CheckResult]) -> Result<(), String> {
    for ring in ["gf:5^1", "gf:7^1", "gf:3^2"] {
        if computed(results, ring, "odd part")? != ["1"] {
            return Err(format!("{ring}: odd part of H2 is not 1"));
        }
    }
    Ok(())
}

fn c8_bounds(results: &[CheckResult]) -> Result<(), String> {
    let lower: u64 = computed(results, "Z", "|H3| lower bound")?[0].parse().map_err(|e| format!("{e}"))?;
    if lower != 12 && lower != 24 {
        return Err(format!("degree-3 cokernel order {lower}"));
    }
    if computed(results, "Z", "|H3|")? != ["24"] || computed(results, "Z", "H2")? != ["2"] {
        return Err("H3 order or H2 not pinned".into());
    }
    Ok(())
}

fn c9_orders(_: &[CheckResult]) -> Result<(), String> {
    let f5 = scissors::rings::FiniteRing::parse("gf:5^1").map_err(|e| e.to_string())?;
    let b = scissors::finhom::pb2(&f5).map_err(|e| e.to_string())?.order();
    let t = scissors::finhom::pt2(&f5).map_err(|e| e.to_string())?.order();
    if (b, t) != (20, 4) {
        return Err(format!("|PB2| = {b}, |PT2| = {t}"));
    }
    Ok(())
}

fn c10_both_routes(results: &[CheckResult]) -> Result<(), String> {
    for r in results {
        for key in ["|H3(PGL2)|", "|K3ind|"] {
            computed(results, &r.ring, key)?;
        }
    }
    Ok(())
}

const ABELIAN_16: usize = 24;

fn criteria() -> Vec<Criterion> {
    vec![
        Criterion {
            number: 1,
            check: "c01",
            limit: Duration::from_secs(5 * MIN),
            targets: &[
                "gf:5^1",
                "gf:7^1",
                "gf:3^2",
                "zmod:4",
                "zmod:8",
                "zmod:9",
                "zmod:25",
                "zmod:6",
                "prod:zmod:2+zmod:2",
                "dual:gf:5^1",
            ],
            extra: c1_depths,
        },
        Criterion {
            number: 2,
            check: "c02",
            limit: Duration::from_secs(2 * MIN),
            targets: &[
                "gf:5^1",
                "gf:7^1",
                "gf:3^2",
                "zmod:4",
                "zmod:8",
                "zmod:9",
                "zmod:25",
                "dual:gf:5^1",
                "zmod:6",
                "prod:zmod:2+zmod:2",
            ],
            extra: c2_dichotomy,
        },
        Criterion {
            number: 3,
            check: "c03",
            limit: Duration::from_secs(5 * MIN),
            targets: &["gf:5^1", "gf:7^1", "gf:3^2", "gf:11^1", "zmod:25", "dual:gf:5^1"],
            extra: no_extra,
        },
        Criterion {
            number: 4,
            check: "c04",
            limit: Duration::from_secs(3 * MIN),
            targets: &[
                "gf:5^1", "gf:7^1", "gf:2^3", "gf:3^2", "gf:11^1", "gf:13^1", "gf:2^4", "gf:17^1", "gf:19^1",
                "gf:23^1", "gf:5^2", "gf:3^3",
            ],
            extra: no_extra,
        },
        Criterion {
            number: 5,
            check: "c05",
            limit: Duration::from_secs(3 * MIN),
            targets: &["gf:2^2", "gf:5^1", "gf:7^1", "gf:3^2", "zmod:4", "zmod:8", "zmod:9", "zmod:25"],
            extra: c5_residue_two,
        },
        Criterion {
            number: 6,
            check: "c06",
            limit: Duration::from_secs(2 * MIN),
            targets: &["gf:5^1", "gf:7^1", "gf:3^2", "zmod:25", "dual:gf:5^1"],
            extra: c6_fields_odd,
        },
        Criterion {
            number: 7,
            check: "c07",
            limit: Duration::from_secs(10 * MIN),
            targets: &["dihedral:1", "dihedral:2", "dihedral:3"],
            extra: |results| {
                let abelian = results.iter().filter(|r| r.ring.starts_with("abelian:")).count();
                if abelian != ABELIAN_16 {
                    return Err(format!("{abelian} abelian groups, expected {ABELIAN_16}"));
                }
                Ok(())
            },
        },
        Criterion {
            number: 8,
            check: "c08",
            limit: Duration::from_secs(MIN),
            targets: &["Z"],
            extra: c8_bounds,
        },
        Criterion {
            number: 9,
            check: "c09",
            limit: Duration::from_secs(2 * MIN),
            targets: &["gf:5^1"],
            extra: c9_orders,
        },
        Criterion {
            number: 10,
            check: "c10",
            limit: Duration::from_secs(3 * MIN),
            targets: &["gf:5^1", "gf:7^1", "gf:3^2", "gf:11^1", "gf:13^1"],
            extra: c10_both_routes,
        },
    ]
}

/// The one known miss: the listed `H_2(D_3) = Z/2` against the computed
/// `H_2(S_3) = 0`. Everything else in the criterion must pass.
fn documented_deviation(failures: &[&CheckResult]) -> Option<String> {
    match failures {
        [only] if only.id == "c07"
            && only.ring == "dihedral:3"
            && only.computed.get("H2").is_some_and(Vec::is_empty)
            && only.expected.get("H2").is_some_and(|e| e == &["2"])
            && only.computed.get("H1") == only.expected.get("H1")
            && only.computed.get("H3") == only.expected.get("H3") =>
        {
            Some("listed H2(D3) = Z/2, computed H2(D3) = 0 (S_3 has trivial Schur multiplier)".into())
        }
        _ => None,
    }
}

fn config(check: &str, threads: usize) -> SuiteConfig {
    SuiteConfig {
        checks: vec![check.to_string()],
        threads,
        ..SuiteConfig::default()
    }
}

fn fingerprints(results: &[CheckResult]) -> BTreeMap<(String, String), String> {
    results
        .iter()
        .map(|r| ((r.id.clone(), r.ring.clone()), r.fingerprint()))
        .collect()
}

fn main() -> ExitCode {
    let mut unexpected = 0;
    let mut first_run = Vec::new();
    for c in criteria() {
        let start = Instant::now();
        let results = match run_suite(&config(c.check, 0)) {
            Ok(r) => r,
            Err(e) => {
                println!("criterion {:>2}: FAIL  suite error: {e}", c.number);
                unexpected += 1;
                continue;
            }
        };
        let elapsed = start.elapsed();
        let mut problems = Vec::new();
        for t in c.targets {
            if !results.iter().any(|r| r.ring == *t) {
                problems.push(format!("{t} not checked"));
            }
        }
        let failures: Vec<&CheckResult> = results
            .iter()
            .filter(|r| match r.status {
                Status::Pass | Status::Flagged => false,
                // extra targets beyond the criterion may skip on budget
                Status::Skipped => c.targets.contains(&r.ring.as_str()),
                Status::Fail => true,
            })
            .collect();
        let deviation = documented_deviation(&failures);
        if deviation.is_none() {
            problems.extend(
                failures
                    .iter()
                    .map(|r| format!("{} {:?}: {}", r.ring, r.status, r.detail.as_deref().unwrap_or(""))),
            );
        }
        if let Err(e) = (c.extra)(&results) {
            problems.push(e);
        }
        if elapsed > c.limit {
            problems.push(format!("took {elapsed:?}, limit {:?}", c.limit));
        }
        let flagged = results.iter().filter(|r| r.status == Status::Flagged).count();
        let summary = format!(
            "{} results, {} flagged, {:.2}s (limit {}s)",
            results.len(),
            flagged,
            elapsed.as_secs_f64(),
            c.limit.as_secs()
        );
        if !problems.is_empty() {
            unexpected += 1;
            println!("criterion {:>2}: FAIL  {summary}; {}", c.number, problems.join("; "));
        } else if let Some(d) = deviation {
            println!("criterion {:>2}: FAIL  {summary}; documented deviation: {d}", c.number);
        } else {
            println!("criterion {:>2}: PASS  {summary}", c.number);
        }
        first_run.extend(results);
    }

    let start = Instant::now();
    let reference = fingerprints(&first_run);
    let mut mismatches = Vec::new();
    for threads in [1, 4] {
        let all = SuiteConfig {
            checks: (1..=10).map(|i| format!("c{i:02}")).collect(),
            threads,
            ..SuiteConfig::default()
        };
        match run_suite(&all) {
            Ok(again) => {
                let again = fingerprints(&again);
                if again != reference {
                    let keys: Vec<String> = again
                        .iter()
                        .filter(|(k, v)| reference.get(*k) != Some(*v))
                        .map(|((id, ring), _)| format!("{id} {ring}"))
                        .collect();
                    mismatches.push(format!("{threads} threads: {} differ ({})", keys.len(), keys.join(", ")));
                }
            }
            Err(e) => mismatches.push(format!("{threads} threads: {e}")),
        }
    }
    let summary = format!(
        "{} results compared across default, 1 and 4 threads, {:.2}s",
        reference.len(),
        start.elapsed().as_secs_f64()
    );
    if mismatches.is_empty() {
        println!("criterion 11: PASS  {summary}");
    } else {
        unexpected += 1;
        println!("criterion 11: FAIL  {summary}; {}", mismatches.join("; "));
    }

    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} criteria failed unexpectedly");
        ExitCode::FAILURE
    }
}
