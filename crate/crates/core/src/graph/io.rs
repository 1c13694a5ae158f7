//! Canonical edge-list files.
//!
//! ```text
//! # optional comment lines
//! <n> <m>
//! <u> <v>      (m lines, u < v, strictly increasing in lexicographic order)
//! ```
//!
//! ASCII with LF line endings. Writing always produces the canonical form,
//! so a graph has exactly one serialization.

use std::fmt::Write as _;
use std::io::{self, BufRead, Write};
use std::path::Path;

use thiserror::Error;

use super::{Edge, Graph, Vertex};

#[derive(Debug, Error)]
pub enum EdgeListError {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

fn parse_err(line: usize, msg: impl Into<String>) -> EdgeListError {
    EdgeListError::Parse {
        line,
        msg: msg.into(),
    }
}

pub fn to_edge_list_string(g: &Graph) -> String {
    let mut s = String::with_capacity(16 + g.m() * 12);
    writeln!(s, "{} {}", g.n(), g.m()).unwrap();
    for (u, v) in g.edges() {
        writeln!(s, "{u} {v}").unwrap();
    }
    s
}

pub fn write_edge_list<W: Write>(g: &Graph, mut w: W) -> io::Result<()> {
    w.write_all(to_edge_list_string(g).as_bytes())?;
    w.flush()
}

/// Writes through a temporary file in the target directory, then renames.
pub fn save(g: &Graph, path: &Path) -> io::Result<()> {
    write_atomic(path, to_edge_list_string(g).as_bytes())
}

pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

pub fn load(path: &Path) -> Result<Graph, EdgeListError> {
    let f = std::fs::File::open(path)?;
    read_edge_list(io::BufReader::new(f))
}

fn parse_pair(line: &str, lineno: usize) -> Result<(u64, u64), EdgeListError> {
    let mut it = line.split(' ');
    let mut num = || -> Result<u64, EdgeListError> {
        let tok = it
            .next()
            .ok_or_else(|| parse_err(lineno, "expected two integers"))?;
        if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
            return Err(parse_err(lineno, format!("invalid integer {tok:?}")));
        }
        tok.parse()
            .map_err(|_| parse_err(lineno, format!("integer {tok:?} too large")))
    };
    let a = num()?;
    let b = num()?;
    if it.next().is_some() {
        return Err(parse_err(lineno, "trailing tokens"));
    }
    Ok((a, b))
}

/// Parses the canonical format, rejecting anything a writer would not emit
/// (apart from `#` comment lines).
pub fn read_edge_list<R: BufRead>(r: R) -> Result<Graph, EdgeListError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<Edge> = Vec::new();
    let mut last: Option<Edge> = None;
    let mut lines = 0;
    for (idx, line) in r.split(b'\n').enumerate() {
        let lineno = idx + 1;
        lines = lineno;
        let raw = line?;
        let line = std::str::from_utf8(&raw)
            .ok()
            .filter(|s| s.is_ascii())
            .ok_or_else(|| parse_err(lineno, "non-ASCII content"))?;
        if line.starts_with('#') {
            continue;
        }
        if line.ends_with('\r') {
            return Err(parse_err(lineno, "CR line ending"));
        }
        let (a, b) = parse_pair(line, lineno)?;
        match header {
            None => {
                header = Some((a as usize, b as usize));
                edges.reserve(b as usize);
            }
            Some((n, m)) => {
                if edges.len() == m {
                    return Err(parse_err(lineno, format!("more than the declared {m} edges")));
                }
                if a >= b {
                    return Err(parse_err(lineno, format!("edge {a} {b} is not written as u < v")));
                }
                if b as usize >= n {
                    return Err(parse_err(lineno, format!("vertex {b} out of range for n={n}")));
                }
                let e = (a as Vertex, b as Vertex);
                if let Some(prev) = last {
                    if e <= prev {
                        return Err(parse_err(
                            lineno,
                            format!("edge {a} {b} out of canonical order after {} {}", prev.0, prev.1),
                        ));
                    }
                }
                last = Some(e);
                edges.push(e);
            }
        }
    }
    let (n, m) = header.ok_or_else(|| parse_err(1, "missing header line"))?;
    if edges.len() != m {
        // reported against the line where the next edge was expected
        return Err(parse_err(
            lines + 1,
            format!("header declares {m} edges but {} were read", edges.len()),
        ));
    }
    Ok(Graph::from_canonical(n, &edges))
}
