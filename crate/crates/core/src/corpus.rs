//! The bundled example corpus: problem files plus a manifest of expected statuses.

use crate::analysis::InfRegistry;
use crate::syntax::Type;
use crate::tptp::{parse_file, parse_type, ParseOptions};
use crate::syntax::Problem;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

/// Known satisfiability status of a problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expected {
    /// Has a finite model with at most this many elements in total.
    Sat(usize),
    Unsat,
}

impl FromStr for Expected {
    type Err = String;

    fn from_str(s: &str) -> Result<Expected, String> {
        if s == "unsat" {
            return Ok(Expected::Unsat);
        }
        s.strip_prefix("sat:")
            .and_then(|n| n.parse().ok())
            .map(Expected::Sat)
            .ok_or_else(|| format!("bad status `{s}` (expected `sat:N` or `unsat`)"))
    }
}

impl fmt::Display for Expected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expected::Sat(n) => write!(f, "sat:{n}"),
            Expected::Unsat => write!(f, "unsat"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Entry {
    pub path: PathBuf,
    pub expected: Expected,
    pub infinite: Vec<Type>,
}

impl Entry {
    pub fn name(&self) -> String {
        self.path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
    }

    pub fn problem(&self) -> Result<Problem, String> {
        parse_file(&self.path, &ParseOptions::default()).map(|p| p.problem).map_err(|e| format!("{}: {e}", self.path.display()))
    }

    pub fn inf(&self) -> InfRegistry {
        InfRegistry::new(self.infinite.clone())
    }
}

/// Reads `manifest.txt`: one `file status [inf;...]` line per problem, `#` comments.
pub fn load_manifest(dir: &Path) -> Result<Vec<Entry>, String> {
    let path = dir.join("manifest.txt");
    let text = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut cols = line.split_whitespace();
        let (Some(file), Some(status)) = (cols.next(), cols.next()) else {
            return Err(format!("{}:{}: expected `file status`", path.display(), i + 1));
        };
        let expected = status.parse().map_err(|e| format!("{}:{}: {e}", path.display(), i + 1))?;
        let mut infinite = Vec::new();
        for t in cols.flat_map(|c| c.split(';')).filter(|t| !t.is_empty()) {
            infinite.push(parse_type(t).map_err(|e| format!("{}:{}: {e}", path.display(), i + 1))?);
        }
        out.push(Entry { path: dir.join(file), expected, infinite });
    }
    Ok(out)
}
