//! Text input format for the command-line tools: generator files over
//! partial maps, gallery dispatch lines, and direct Rees matrix blocks.

use std::collections::HashSet;

use crate::engine::{rees_to_semigroup, ReesSpec};
use crate::error::{Error, Result};
use crate::gallery::{self, GALLERY_CAP};
use crate::groups;
use crate::pmap::{parse_image_list, parse_orbits, PartialMap};
use crate::semigroup::GeneratedSemigroup;

fn parse_err(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, col, msg: msg.into() }
}

fn parse_usize(line_no: usize, value: &str, what: &str) -> Result<usize> {
    value
        .trim()
        .parse::<usize>()
        .map_err(|_| parse_err(line_no, 1, format!("{what}: expected a number, got `{}`", value.trim())))
}

/// Parses a full input file into a semigroup.
///
/// Grammar, one directive per line (blank lines ignored):
/// - `points: n` followed by `gen <name> = <orbits | image-list>` lines and
///   optionally `adjoin-identity: true`;
/// - `gallery: <id>` dispatching to the named-example builder;
/// - `rees:` followed by `group:`, `rows:`, `cols:`, `sandwich:` and one
///   bracketed row per sandwich-matrix column (`#` for the zero entry).
pub fn parse_input(text: &str) -> Result<GeneratedSemigroup> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();
    let Some(&(first_no, first)) = lines.first() else {
        return Err(parse_err(1, 1, "empty input"));
    };

    if let Some(rest) = first.strip_prefix("gallery:") {
        if lines.len() > 1 {
            return Err(parse_err(lines[1].0, 1, "gallery input must be a single line"));
        }
        let id = gallery::parse(rest.trim())?;
        return gallery::build(&id);
    }

    if first == "rees:" {
        return parse_rees_block(&lines[1..]);
    }

    let Some(count) = first.strip_prefix("points:") else {
        return Err(parse_err(
            first_no,
            1,
            "expected `points:`, `gallery:` or `rees:` header",
        ));
    };
    let degree = parse_usize(first_no, count, "points")?;
    if degree == 0 {
        return Err(Error::Semantic("points must be positive".into()));
    }

    let mut gens: Vec<(String, PartialMap)> = Vec::new();
    let mut names: HashSet<String> = HashSet::new();
    let mut adjoin = false;
    for &(line_no, line) in &lines[1..] {
        if let Some(flag) = line.strip_prefix("adjoin-identity:") {
            match flag.trim() {
                "true" => adjoin = true,
                "false" => adjoin = false,
                other => {
                    return Err(parse_err(
                        line_no,
                        1,
                        format!("adjoin-identity: expected true or false, got `{other}`"),
                    ))
                }
            }
            continue;
        }
        let Some(rest) = line.strip_prefix("gen ") else {
            return Err(parse_err(line_no, 1, format!("unrecognized directive `{line}`")));
        };
        let Some((name, body)) = rest.split_once('=') else {
            return Err(parse_err(line_no, 1, "generator line needs `= <map>`"));
        };
        let name = name.trim().to_string();
        if name.is_empty() || name.contains(char::is_whitespace) {
            return Err(parse_err(line_no, 1, "generator name must be a single token"));
        }
        if !names.insert(name.clone()) {
            return Err(Error::Semantic(format!("duplicate generator name `{name}`")));
        }
        let body = body.trim();
        let map = if body.starts_with('[') {
            parse_image_list(degree, body)?
        } else {
            parse_orbits(degree, body)?
        };
        gens.push((name, map));
    }
    if gens.is_empty() {
        return Err(Error::Semantic("no generators given".into()));
    }
    let s = GeneratedSemigroup::close_named_generators(&gens, GALLERY_CAP)?;
    if adjoin {
        s.adjoin_identity(GALLERY_CAP)
    } else {
        Ok(s)
    }
}

fn parse_sandwich_row(line_no: usize, line: &str, n_rows: usize) -> Result<Vec<Option<usize>>> {
    let inner = line
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| parse_err(line_no, 1, "sandwich row must be bracketed"))?;
    let entries: Vec<Option<usize>> = inner
        .split(',')
        .map(|tok| {
            let tok = tok.trim();
            if tok == "#" {
                Ok(None)
            } else {
                tok.parse::<usize>()
                    .map(Some)
                    .map_err(|_| parse_err(line_no, 1, format!("bad sandwich entry `{tok}`")))
            }
        })
        .collect::<Result<_>>()?;
    if entries.len() != n_rows {
        return Err(Error::Semantic(format!(
            "sandwich row on line {line_no} has {} entries, expected {n_rows}",
            entries.len()
        )));
    }
    Ok(entries)
}

fn parse_rees_block(lines: &[(usize, &str)]) -> Result<GeneratedSemigroup> {
    let mut group = None;
    let mut n_rows = None;
    let mut n_cols = None;
    let mut sandwich: Vec<Vec<Option<usize>>> = Vec::new();
    let mut in_sandwich = false;
    for &(line_no, line) in lines {
        if in_sandwich {
            sandwich.push(parse_sandwich_row(
                line_no,
                line,
                n_rows.ok_or_else(|| parse_err(line_no, 1, "`rows:` must precede `sandwich:`"))?,
            )?);
            continue;
        }
        if let Some(name) = line.strip_prefix("group:") {
            let name = name.trim();
            group = Some(
                groups::by_name(name)
                    .ok_or_else(|| Error::Semantic(format!("unknown group `{name}`")))?,
            );
        } else if let Some(v) = line.strip_prefix("rows:") {
            n_rows = Some(parse_usize(line_no, v, "rows")?);
        } else if let Some(v) = line.strip_prefix("cols:") {
            n_cols = Some(parse_usize(line_no, v, "cols")?);
        } else if line == "sandwich:" {
            in_sandwich = true;
        } else {
            return Err(parse_err(line_no, 1, format!("unrecognized directive `{line}`")));
        }
    }
    let spec = ReesSpec {
        group: group.ok_or_else(|| Error::Semantic("rees block missing `group:`".into()))?,
        n_rows: n_rows.ok_or_else(|| Error::Semantic("rees block missing `rows:`".into()))?,
        n_cols: n_cols.ok_or_else(|| Error::Semantic("rees block missing `cols:`".into()))?,
        sandwich,
    };
    spec.validate()?;
    rees_to_semigroup(&spec)
}
