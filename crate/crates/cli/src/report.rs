use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;

use yangian_core::checker::CheckResult;

use crate::config::{ConfigEcho, Format};
use crate::run::Evaluation;
use crate::CliError;

/// Central constants in their documented order; absent ones are null.
#[derive(Debug, Default, Serialize)]
pub struct Centrals {
    pub g: Option<String>,
    pub h: Option<String>,
    pub m2: Option<String>,
    pub c26: Option<String>,
    pub c28: Option<String>,
    pub alpha: Option<String>,
}

impl Centrals {
    fn from_map(m: &BTreeMap<String, String>) -> Self {
        let get = |k: &str| m.get(k).cloned();
        Centrals {
            g: get("g"),
            h: get("h"),
            m2: get("m2"),
            c26: get("c26"),
            c28: get("c28"),
            alpha: get("alpha"),
        }
    }

    fn pairs(&self) -> [(&'static str, &Option<String>); 6] {
        [
            ("g", &self.g),
            ("h", &self.h),
            ("m2", &self.m2),
            ("c26", &self.c26),
            ("c28", &self.c28),
            ("alpha", &self.alpha),
        ]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Zero,
    Nonzero,
}

/// Everything written to the report file. Timing goes to standard error
/// so that reports stay byte-identical across runs.
#[derive(Debug, Serialize)]
pub struct Report {
    pub config: ConfigEcho,
    pub results: Vec<CheckResult>,
    pub centrals: Centrals,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub disagreements: Option<Vec<String>>,
    pub verdict: Verdict,
}

impl Report {
    pub fn new(config: ConfigEcho, eval: Evaluation) -> Self {
        let o = eval.outcome;
        let verdict = if o.results.iter().all(CheckResult::is_zero) {
            Verdict::Zero
        } else {
            Verdict::Nonzero
        };
        let centrals = Centrals::from_map(&o.centrals);
        Report {
            config,
            results: o.results,
            centrals,
            values: o.values,
            notes: o.notes,
            disagreements: eval.disagreements,
            verdict,
        }
    }

    pub fn has_disagreements(&self) -> bool {
        self.disagreements.as_ref().is_some_and(|d| !d.is_empty())
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Text => self.render_text(),
        }
    }

    fn render_text(&self) -> String {
        let c = &self.config;
        let mut s = String::new();
        let rep = c.rep.as_deref().unwrap_or("-");
        let _ = writeln!(
            s,
            "check {} on {}({}), rep {rep}, backend {}, relation {}",
            flag(&c.check),
            c.algebra,
            c.n,
            flag(&c.backend),
            flag(&c.relation)
        );
        for r in &self.results {
            let _ = writeln!(s, "{r}");
            for note in &r.notes {
                let _ = writeln!(s, "  note: {note}");
            }
        }
        for (k, v) in self.centrals.pairs() {
            if let Some(v) = v {
                let _ = writeln!(s, "{k} = {v}");
            }
        }
        for (k, v) in &self.values {
            let _ = writeln!(s, "{k} = {v}");
        }
        for note in &self.notes {
            let _ = writeln!(s, "note: {note}");
        }
        if let Some(d) = &self.disagreements {
            if d.is_empty() {
                let _ = writeln!(s, "backends agree");
            } else {
                let _ = writeln!(s, "backends disagree on: {}", d.join(", "));
            }
        }
        let _ = writeln!(
            s,
            "verdict: {}",
            match self.verdict {
                Verdict::Zero => "zero",
                Verdict::Nonzero => "nonzero",
            }
        );
        s
    }
}

fn flag<T: ValueEnum>(v: &T) -> String {
    v.to_possible_value()
        .map(|p| p.get_name().to_string())
        .unwrap_or_default()
}

/// Writes through a temporary file in the target directory and renames it
/// into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atomic_write_replaces_contents() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.json");
        write_atomic(&path, "first").unwrap();
        write_atomic(&path, "second").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "second");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
