use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::Design;
use crate::error::{Error, Result};

pub const FORMAT_HEADER: &str = "cliquepart-design v1";

/// Canonical text of a design: header, parameter line, one block per line,
/// LF endings.
pub fn render_design(d: &Design) -> String {
    let mut out = String::with_capacity(16 + d.len() * 4 * d.r());
    out.push_str(FORMAT_HEADER);
    out.push('\n');
    let _ = writeln!(out, "n={} r={} label={}", d.n(), d.r(), quote(d.label()));
    for b in d.blocks() {
        let mut first = true;
        for x in b {
            if !first {
                out.push(' ');
            }
            first = false;
            let _ = write!(out, "{x}");
        }
        out.push('\n');
    }
    out
}

pub fn write_design(d: &Design, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, render_design(d))?;
    Ok(())
}

pub fn read_design(path: impl AsRef<Path>) -> Result<Design> {
    parse_design(&fs::read_to_string(path)?)
}

pub fn parse_design(text: &str) -> Result<Design> {
    let mut lines = text
        .split('\n')
        .enumerate()
        .map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));

    let (hl, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty file".into(),
    })?;
    if header.trim_end() != FORMAT_HEADER {
        return Err(Error::Parse {
            line: hl,
            msg: format!("expected header `{FORMAT_HEADER}`"),
        });
    }
    let (pl, params) = lines.next().ok_or(Error::Parse {
        line: hl + 1,
        msg: "missing parameter line".into(),
    })?;
    let (n, r, label) = parse_params(params).map_err(|msg| Error::Parse { line: pl, msg })?;

    let mut blocks = Vec::new();
    for (ln, line) in lines {
        let mut block = Vec::new();
        for tok in line.split_whitespace() {
            let x: u32 = tok.parse().map_err(|_| Error::Parse {
                line: ln,
                msg: format!("`{tok}` is not a point index"),
            })?;
            if block.last().is_some_and(|&prev| prev >= x) {
                return Err(Error::Parse {
                    line: ln,
                    msg: "block entries must be strictly increasing".into(),
                });
            }
            block.push(x);
        }
        blocks.push(block);
    }
    Design::new(n, r, blocks, label)
}

fn parse_params(line: &str) -> std::result::Result<(usize, usize, String), String> {
    let rest = line
        .strip_prefix("n=")
        .ok_or_else(|| "expected `n=<int> r=<int> label=\"...\"`".to_string())?;
    let (n, rest) = rest.split_once(' ').ok_or("missing `r=`")?;
    let n: usize = n.parse().map_err(|_| format!("bad point count `{n}`"))?;
    let rest = rest.strip_prefix("r=").ok_or("missing `r=`")?;
    let (r, rest) = rest.split_once(' ').ok_or("missing `label=`")?;
    let r: usize = r.parse().map_err(|_| format!("bad uniformity `{r}`"))?;
    let quoted = rest.strip_prefix("label=").ok_or("missing `label=`")?;
    Ok((n, r, unquote(quoted.trim_end())?))
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn unquote(s: &str) -> std::result::Result<String, String> {
    let inner = s
        .strip_prefix('"')
        .and_then(|t| t.strip_suffix('"'))
        .filter(|_| s.len() >= 2)
        .ok_or("label must be a double-quoted string")?;
    let mut out = String::with_capacity(inner.len());
    let mut chars = inner.chars();
    while let Some(c) = chars.next() {
        match c {
            '\\' => match chars.next() {
                Some('"') => out.push('"'),
                Some('\\') => out.push('\\'),
                Some('n') => out.push('\n'),
                Some('r') => out.push('\r'),
                Some('t') => out.push('\t'),
                other => return Err(format!("bad escape `\\{}`", other.unwrap_or(' '))),
            },
            '"' => return Err("unescaped quote inside label".into()),
            c => out.push(c),
        }
    }
    Ok(out)
}
