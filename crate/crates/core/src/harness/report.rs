use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use super::config::{Format, SuiteConfig};
use crate::abelian::FinAbGroup;
use crate::error::{Error, Result};

pub const REPORT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
    Flagged,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
            Status::Flagged => "flagged",
        }
    }
}

/// Where the expected value of a check comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    /// A stated theorem or an entry of the constants file.
    Constant,
    /// A second, independent computation.
    Oracle,
    /// Elementary facts such as group orders.
    Trivial,
    /// A value from outside the theory under test; mismatches only flag.
    Literature,
}

impl Source {
    pub fn as_str(self) -> &'static str {
        match self {
            Source::Constant => "constant",
            Source::Oracle => "oracle",
            Source::Trivial => "trivial",
            Source::Literature => "literature",
        }
    }
}

/// Named values as invariant-factor lists. Scalars are one-element lists.
pub type Values = BTreeMap<String, Vec<String>>;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub ring: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    pub computed: Values,
    pub expected: Values,
    pub source: Source,
    pub ms: u64,
}

impl CheckResult {
    pub fn new(id: &str, ring: &str, source: Source) -> CheckResult {
        CheckResult {
            id: id.to_string(),
            ring: ring.to_string(),
            status: Status::Pass,
            detail: None,
            computed: Values::new(),
            expected: Values::new(),
            source,
            ms: 0,
        }
    }

    pub fn computed(&mut self, name: &str, g: &FinAbGroup) -> &mut Self {
        self.computed.insert(name.to_string(), g.to_strings());
        self
    }

    pub fn expected(&mut self, name: &str, g: &FinAbGroup) -> &mut Self {
        self.expected.insert(name.to_string(), g.to_strings());
        self
    }

    pub fn computed_value(&mut self, name: &str, v: impl ToString) -> &mut Self {
        self.computed.insert(name.to_string(), vec![v.to_string()]);
        self
    }

    pub fn expected_value(&mut self, name: &str, v: impl ToString) -> &mut Self {
        self.expected.insert(name.to_string(), vec![v.to_string()]);
        self
    }

    /// Marks the result failed unless `ok`; the first failure's reason is kept.
    pub fn require(&mut self, ok: bool, why: impl FnOnce() -> String) -> &mut Self {
        if !ok && self.status != Status::Fail {
            self.status = Status::Fail;
            self.detail = Some(why());
        }
        self
    }

    /// Flags a passing result unless `ok`.
    pub fn flag_unless(&mut self, ok: bool, why: impl FnOnce() -> String) -> &mut Self {
        if !ok && self.status == Status::Pass {
            self.status = Status::Flagged;
            self.detail = Some(why());
        }
        self
    }

    pub fn skipped(id: &str, ring: &str, source: Source, reason: impl ToString) -> CheckResult {
        let mut r = CheckResult::new(id, ring, source);
        r.status = Status::Skipped;
        r.detail = Some(reason.to_string());
        r
    }

    /// `id / ring / status / computed` rendered canonically, for comparing
    /// runs.
    pub fn fingerprint(&self) -> String {
        serde_json::to_string(&(&self.id, &self.ring, self.status, &self.computed)).expect("serializable")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub version: String,
    pub config_echo: SuiteConfig,
    pub results: Vec<CheckResult>,
}

impl Report {
    pub fn new(config: &SuiteConfig, results: Vec<CheckResult>) -> Report {
        Report {
            version: REPORT_VERSION.to_string(),
            config_echo: config.clone(),
            results,
        }
    }

    pub fn any_failed(&self) -> bool {
        self.results.iter().any(|r| r.status == Status::Fail)
    }

    /// 0 when nothing failed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        i32::from(self.any_failed())
    }

    /// Copy with every `ms` set to 0.
    pub fn without_timing(&self) -> Report {
        let mut r = self.clone();
        for x in &mut r.results {
            x.ms = 0;
        }
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    pub fn to_csv(&self) -> Result<String> {
        let flat = |v: &Values| {
            v.iter()
                .map(|(k, f)| format!("{k}={}", f.join(" ")))
                .collect::<Vec<_>>()
                .join("; ")
        };
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::Format(e.to_string());
        w.write_record(["id", "ring", "status", "detail", "computed", "expected", "source", "ms"])
            .map_err(csv_err)?;
        for r in &self.results {
            w.write_record([
                r.id.as_str(),
                r.ring.as_str(),
                r.status.as_str(),
                r.detail.as_deref().unwrap_or(""),
                &flat(&r.computed),
                &flat(&r.expected),
                r.source.as_str(),
                &r.ms.to_string(),
            ])
            .map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Format(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv of utf-8 fields"))
    }

    pub fn to_markdown(&self) -> String {
        let mut out = format!("# scissors verify {}\n\n", self.version);
        let count = |s: Status| self.results.iter().filter(|r| r.status == s).count();
        let _ = writeln!(
            out,
            "{} results: {} pass, {} fail, {} skipped, {} flagged\n",
            self.results.len(),
            count(Status::Pass),
            count(Status::Fail),
            count(Status::Skipped),
            count(Status::Flagged)
        );
        out.push_str("| id | ring | status | computed | source | ms |\n");
        out.push_str("|---|---|---|---|---|---|\n");
        for r in &self.results {
            let computed = r
                .computed
                .iter()
                .map(|(k, v)| format!("{k}: {}", group_text(v)))
                .collect::<Vec<_>>()
                .join(", ");
            let status = match &r.detail {
                Some(d) if r.status != Status::Pass => format!("{} ({})", r.status.as_str(), d.replace('|', "/")),
                _ => r.status.as_str().to_string(),
            };
            let _ = writeln!(
                out,
                "| {} | `{}` | {} | {} | {} | {} |",
                r.id,
                r.ring,
                status,
                computed.replace('|', "/"),
                r.source.as_str(),
                r.ms
            );
        }
        out
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => Ok(self.to_json()),
            Format::Csv => self.to_csv(),
            Format::Md => Ok(self.to_markdown()),
        }
    }
}

fn group_text(factors: &[String]) -> String {
    if factors.is_empty() {
        return "0".into();
    }
    factors
        .iter()
        .map(|f| if f == "0" { "Z".to_string() } else { format!("Z/{f}") })
        .collect::<Vec<_>>()
        .join("+")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_is_valid() {
        let r = Report::new(&SuiteConfig::default(), vec![]);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["results"].as_array().unwrap().len(), 0);
        assert_eq!(r.to_csv().unwrap().lines().count(), 1);
        assert!(r.to_markdown().contains("0 results"));
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn pass_and_fail() {
        let mut a = CheckResult::new("c01", "gf:5^1", Source::Constant);
        a.computed("H0", &FinAbGroup::trivial());
        let mut b = CheckResult::new("c02", "zmod:6", Source::Oracle);
        b.computed("H1", &FinAbGroup::free(2)).expected("H1", &FinAbGroup::trivial());
        b.require(false, || "nonzero".into());
        let r = Report::new(&SuiteConfig::default(), vec![a, b]);
        assert_eq!(r.exit_code(), 1);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["results"][1]["status"], "fail");
        assert_eq!(v["results"][1]["computed"]["H1"], serde_json::json!(["0", "0"]));
        assert_eq!(v["results"][1]["expected"]["H1"], serde_json::json!([]));
        assert!(r.to_csv().unwrap().contains("H1=0 0"));
        assert!(r.to_markdown().contains("Z+Z"));
    }

    #[test]
    fn flag_never_overrides_fail() {
        let mut a = CheckResult::new("c10", "gf:5^1", Source::Oracle);
        a.require(false, || "broken".into());
        a.flag_unless(false, || "differs".into());
        assert_eq!(a.status, Status::Fail);
        let mut b = CheckResult::new("c10", "gf:5^1", Source::Oracle);
        b.flag_unless(false, || "differs".into());
        assert_eq!((b.status, b.detail.as_deref()), (Status::Flagged, Some("differs")));
    }
}
