//! Check suites over ring families, with JSON, CSV and markdown reports.

mod cache;
mod checks;
mod config;
mod report;

use std::collections::BTreeMap;

use rayon::prelude::*;

pub use cache::{Cache, CACHE_VERSION};
pub use checks::{abelian_invariant_factors, describe, CHECK_IDS, FAMILY};
pub use config::{Format, SuiteConfig, CACHE_ENV};
pub use report::{CheckResult, Report, Source, Status, Values, REPORT_VERSION};

use crate::error::{Error, Result};
use checks::{plan, Ctx};

fn pool(threads: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::internal(format!("thread pool: {e}")))
}

fn run_jobs(cfg: &SuiteConfig, cache: Cache, threads: usize) -> Result<Vec<CheckResult>> {
    let ctx = Ctx { cfg, cache };
    let jobs = plan(cfg);
    let mut results: Vec<CheckResult> = pool(threads)?.install(|| jobs.par_iter().map(|j| j.execute(&ctx)).collect());
    // the plan lists targets of one check in a fixed order; keep it
    results.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(results)
}

/// Thread counts compared by the determinism check.
pub const DETERMINISM_THREADS: [usize; 2] = [1, 4];

/// Reruns the other checks without the cache on each thread count and
/// compares every result with the first run.
fn determinism(cfg: &SuiteConfig, first: &[CheckResult]) -> CheckResult {
    let start = std::time::Instant::now();
    let mut res = CheckResult::new("c11", "-", Source::Trivial);
    let reference: BTreeMap<(String, String), String> = first
        .iter()
        .map(|r| ((r.id.clone(), r.ring.clone()), r.fingerprint()))
        .collect();
    res.computed_value("results compared", first.len());
    for t in DETERMINISM_THREADS {
        match run_jobs(cfg, Cache::disabled(), t) {
            Ok(again) => {
                let differing: Vec<String> = again
                    .iter()
                    .filter(|r| reference.get(&(r.id.clone(), r.ring.clone())) != Some(&r.fingerprint()))
                    .map(|r| format!("{} {}", r.id, r.ring))
                    .collect();
                let same_len = again.len() == first.len();
                res.computed_value(&format!("identical with {t} threads"), differing.is_empty() && same_len);
                res.require(same_len, || format!("{t} threads produced {} results", again.len()));
                res.require(differing.is_empty(), || {
                    format!("{t} threads changed {}", differing.join(", "))
                });
            }
            Err(e) => {
                res.require(false, || format!("rerun with {t} threads: {e}"));
            }
        }
        res.expected_value(&format!("identical with {t} threads"), true);
    }
    res.ms = start.elapsed().as_millis() as u64;
    res
}

/// Runs every enabled check. Results are sorted by check id, then by the
/// order of the ring list.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Vec<CheckResult>> {
    cfg.validate()?;
    let cache = Cache::new(cfg.resolved_cache_dir());
    let mut results = run_jobs(cfg, cache, cfg.threads)?;
    if cfg.enabled("c11") {
        let d = determinism(cfg, &results);
        results.push(d);
    }
    Ok(results)
}

/// `run_suite` wrapped in a report.
pub fn verify(cfg: &SuiteConfig) -> Result<Report> {
    Ok(Report::new(cfg, run_suite(cfg)?))
}
