//! Plain-text cache of computed groups.
//!
//! One file per `(operation, ring spec)` under `<dir>/<version>/<operation>/`.
//! The first line repeats the key; every further line is one group written
//! as its invariant factors separated by spaces (an empty line is the
//! trivial group, `0` is a copy of `Z`).

use std::fs;
use std::path::PathBuf;

use crate::abelian::FinAbGroup;
use crate::error::Result;

pub const CACHE_VERSION: &str = concat!("v", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Debug, Default)]
pub struct Cache {
    dir: Option<PathBuf>,
}

fn file_name(spec: &str) -> String {
    spec.chars()
        .map(|c| if c.is_ascii_alphanumeric() || "^+=,.-".contains(c) { c } else { '_' })
        .collect()
}

fn header(op: &str, spec: &str) -> String {
    format!("# {CACHE_VERSION} {op} {spec}")
}

impl Cache {
    pub fn new(dir: Option<PathBuf>) -> Cache {
        Cache { dir }
    }

    pub fn disabled() -> Cache {
        Cache { dir: None }
    }

    pub fn is_enabled(&self) -> bool {
        self.dir.is_some()
    }

    fn path(&self, op: &str, spec: &str) -> Option<PathBuf> {
        let dir = self.dir.as_ref()?;
        Some(dir.join(CACHE_VERSION).join(file_name(op)).join(file_name(spec) + ".txt"))
    }

    pub fn get(&self, op: &str, spec: &str) -> Option<Vec<FinAbGroup>> {
        let text = fs::read_to_string(self.path(op, spec)?).ok()?;
        let mut lines = text.lines();
        if lines.next()? != header(op, spec) {
            return None;
        }
        lines
            .map(|l| {
                let factors = l.split_whitespace().map(|f| f.parse().ok()).collect::<Option<Vec<_>>>()?;
                FinAbGroup::new(factors).ok()
            })
            .collect()
    }

    /// Write failures are logged and otherwise ignored.
    pub fn put(&self, op: &str, spec: &str, groups: &[FinAbGroup]) {
        let Some(path) = self.path(op, spec) else {
            return;
        };
        let mut text = header(op, spec);
        for g in groups {
            text.push('\n');
            text.push_str(&g.to_strings().join(" "));
        }
        text.push('\n');
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        let written = path
            .parent()
            .map_or(Ok(()), fs::create_dir_all)
            .and_then(|_| fs::write(&tmp, text))
            .and_then(|_| fs::rename(&tmp, &path));
        if let Err(e) = written {
            log::warn!("cache write to {} failed: {e}", path.display());
        }
    }

    pub fn groups(
        &self,
        op: &str,
        spec: &str,
        compute: impl FnOnce() -> Result<Vec<FinAbGroup>>,
    ) -> Result<Vec<FinAbGroup>> {
        if let Some(g) = self.get(op, spec) {
            log::debug!("cache hit {op} {spec}");
            return Ok(g);
        }
        let g = compute()?;
        self.put(op, spec, &g);
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let c = Cache::new(Some(dir.path().to_path_buf()));
        let groups = vec![FinAbGroup::trivial(), FinAbGroup::cyclic(6), FinAbGroup::free(2)];
        assert!(c.get("op", "prod:zmod:2+zmod:2").is_none());
        c.put("op", "prod:zmod:2+zmod:2", &groups);
        assert_eq!(c.get("op", "prod:zmod:2+zmod:2").unwrap(), groups);
        assert!(c.get("op", "zmod:4").is_none());
        let mut calls = 0;
        let g = c
            .groups("op", "zmod:4", || {
                calls += 1;
                Ok(vec![FinAbGroup::cyclic(2)])
            })
            .unwrap();
        let again = c.groups("op", "zmod:4", || unreachable!()).unwrap();
        assert_eq!((g, calls), (again, 1));
    }
}
