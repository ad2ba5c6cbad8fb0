//! Plain-text representation files:
//!
//! ```text
//! algebra: so
//! n: 2
//! families: clifford c
//! G[1][1] = 1/2 - c^1*c_1
//! ...
//! H[1][1] = ...        (optional block)
//! ```
//!
//! Families are `;`-separated, each a relation class followed by its
//! generator names. Lines starting with `#` are comments.

use std::path::Path;
use std::sync::Arc;

use super::{GeneratorMatrix, RepError};
use crate::metric::{make_metric, AlgebraKind, Metric};
use crate::ncalgebra::{parse, print, AlgebraSpec, Family, NCElement, RelationClass};

#[derive(Clone, Debug)]
pub struct RepFile {
    pub metric: Metric,
    pub spec: Arc<AlgebraSpec>,
    pub g: GeneratorMatrix<NCElement>,
    pub h: Option<GeneratorMatrix<NCElement>>,
}

fn format_err(line: usize, message: impl Into<String>) -> RepError {
    RepError::Format {
        line,
        message: message.into(),
    }
}

fn parse_families(text: &str, metric: &Metric, line: usize) -> Result<Vec<Family>, RepError> {
    let mut out = Vec::new();
    for chunk in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let words: Vec<&str> = chunk.split_whitespace().collect();
        let (class, names) = words.split_first().expect("chunk is non-empty");
        let need = |k: usize| -> Result<(), RepError> {
            if names.len() == k {
                Ok(())
            } else {
                Err(format_err(
                    line,
                    format!("`{class}` takes {k} generator name(s)"),
                ))
            }
        };
        let fam = match *class {
            "clifford" => {
                need(1)?;
                Family::clifford(names[0], metric)
            }
            "heisenberg-bosonic" | "heisenberg-fermionic" => {
                need(2)?;
                Family::heisenberg(names[0], names[1], metric, *class == "heisenberg-fermionic")
            }
            "matrix-units" => {
                need(1)?;
                Family::matrix_units(names[0], metric)
            }
            "free" => {
                if names.is_empty() {
                    return Err(format_err(line, "`free` needs at least one label"));
                }
                Family::free(names, metric)
            }
            other => {
                return Err(RepError::UnknownAlgebraSpec(format!(
                    "relation class `{other}`"
                )))
            }
        };
        out.push(fam);
    }
    Ok(out)
}

/// `G[a][b]` or `H[a][b]` with 1-based indices.
fn parse_target(lhs: &str, line: usize) -> Result<(char, usize, usize), RepError> {
    let lhs = lhs.trim();
    let mut chars = lhs.chars();
    let which = chars
        .next()
        .ok_or_else(|| format_err(line, "empty left side"))?;
    if which != 'G' && which != 'H' {
        return Err(format_err(
            line,
            format!("expected G[a][b] or H[a][b], got `{lhs}`"),
        ));
    }
    let rest: String = chars.collect::<String>().replace(' ', "");
    let inner = rest
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| format_err(line, format!("malformed indices in `{lhs}`")))?;
    let (a, b) = inner
        .split_once("][")
        .ok_or_else(|| format_err(line, format!("malformed indices in `{lhs}`")))?;
    let idx = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| format_err(line, format!("bad index `{s}`")))
    };
    Ok((which, idx(a)?, idx(b)?))
}

pub fn load_rep_str(text: &str) -> Result<RepFile, RepError> {
    load_rep_str_capped(text, None)
}

/// As [`load_rep_str`], rejecting entries whose words exceed `max_degree`.
pub fn load_rep_str_capped(text: &str, max_degree: Option<usize>) -> Result<RepFile, RepError> {
    let mut kind = None;
    let mut n = None;
    let mut families_text = None;
    let mut entries: Vec<(usize, char, usize, usize, String)> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        if let Some((lhs, rhs)) = t.split_once('=') {
            let (which, a, b) = parse_target(lhs, line)?;
            entries.push((line, which, a, b, rhs.trim().to_string()));
            continue;
        }
        let (key, value) = t
            .split_once(':')
            .ok_or_else(|| format_err(line, format!("unrecognized line `{t}`")))?;
        let value = value.trim();
        match key.trim() {
            "algebra" => {
                kind = Some(
                    AlgebraKind::parse(value)
                        .ok_or_else(|| RepError::UnknownAlgebraSpec(value.to_string()))?,
                )
            }
            "n" => {
                n = Some(
                    value
                        .parse::<usize>()
                        .map_err(|_| format_err(line, format!("bad dimension `{value}`")))?,
                )
            }
            "families" => families_text = Some((line, value.to_string())),
            other => return Err(format_err(line, format!("unknown header `{other}`"))),
        }
    }
    let kind = kind.ok_or_else(|| format_err(0, "missing `algebra:` header"))?;
    let n = n.ok_or_else(|| format_err(0, "missing `n:` header"))?;
    let metric = make_metric(kind, n)?;
    let (fline, ftext) =
        families_text.ok_or_else(|| format_err(0, "missing `families:` header"))?;
    let mut spec = AlgebraSpec::new(&metric, parse_families(&ftext, &metric, fline)?)?;
    if let Some(cap) = max_degree {
        spec = spec.with_max_degree(cap);
    }

    let mut g: Vec<Vec<Option<NCElement>>> = vec![vec![None; n]; n];
    let mut h: Vec<Vec<Option<NCElement>>> = vec![vec![None; n]; n];
    let mut has_h = false;
    for (line, which, a, b, expr) in entries {
        if a == 0 || b == 0 || a > n || b > n {
            return Err(RepError::DimensionMismatch(format!(
                "line {line}: entry [{a}][{b}] outside a {n}x{n} matrix"
            )));
        }
        let e = parse(&expr, &spec)?;
        let target = if which == 'G' { &mut g } else { &mut h };
        has_h |= which == 'H';
        if target[a - 1][b - 1].replace(e).is_some() {
            return Err(format_err(
                line,
                format!("entry {which}[{a}][{b}] given twice"),
            ));
        }
    }
    let complete =
        |m: Vec<Vec<Option<NCElement>>>, which: char| -> Result<Vec<Vec<NCElement>>, RepError> {
            m.into_iter()
                .enumerate()
                .map(|(a, row)| {
                    row.into_iter()
                        .enumerate()
                        .map(|(b, e)| {
                            e.ok_or_else(|| {
                                RepError::DimensionMismatch(format!(
                                    "missing entry {which}[{}][{}] for n = {n}",
                                    a + 1,
                                    b + 1
                                ))
                            })
                        })
                        .collect()
                })
                .collect()
        };
    let g = GeneratorMatrix::new(&metric, complete(g, 'G')?, "file G")?;
    let h = if has_h {
        Some(GeneratorMatrix::new(&metric, complete(h, 'H')?, "file H")?)
    } else {
        None
    };
    Ok(RepFile { metric, spec, g, h })
}

pub fn load_rep(path: impl AsRef<Path>) -> Result<RepFile, RepError> {
    load_rep_str(&std::fs::read_to_string(path)?)
}

/// Text form accepted by [`load_rep_str`].
pub fn write_rep(g: &GeneratorMatrix<NCElement>, h: Option<&GeneratorMatrix<NCElement>>) -> String {
    let spec = g.proto().spec();
    let metric = &g.metric;
    let families: Vec<String> = spec
        .families
        .iter()
        .map(|f| {
            let class = match f.class {
                RelationClass::Clifford => "clifford",
                RelationClass::HeisenbergBosonic => "heisenberg-bosonic",
                RelationClass::HeisenbergFermionic => "heisenberg-fermionic",
                RelationClass::MatrixUnits => "matrix-units",
                RelationClass::Free => "free",
            };
            format!("{} {}", class, f.parts.join(" "))
        })
        .collect();
    let mut out = format!(
        "algebra: {}\nn: {}\nfamilies: {}\n",
        metric.kind.short(),
        metric.n,
        families.join("; ")
    );
    for (which, m) in [('G', Some(g)), ('H', h)] {
        if let Some(m) = m {
            for a in 0..m.n() {
                for b in 0..m.n() {
                    out.push_str(&format!(
                        "{which}[{}][{}] = {}\n",
                        a + 1,
                        b + 1,
                        print(&m.entries[a][b])
                    ));
                }
            }
        }
    }
    out
}
