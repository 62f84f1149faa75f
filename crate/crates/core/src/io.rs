//! Whitespace-separated edge-list text format.
//!
//! One edge per line as two labels, `#` starts a comment, blank lines are
//! skipped. Labels are remapped to dense ids in order of first appearance.
//! Both orientations of an edge collapse to a single undirected edge, so
//! directed inputs come out symmetrized.

use std::collections::BTreeSet;
use std::fs;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{EdgeRef, Graph};

/// What ingestion saw besides the graph itself.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IngestSummary {
    pub lines: usize,
    pub edge_lines: usize,
    pub duplicates: usize,
}

pub fn load_edge_list(path: impl AsRef<Path>) -> Result<Graph> {
    load_edge_list_with_summary(path).map(|(g, _)| g)
}

pub fn load_edge_list_with_summary(path: impl AsRef<Path>) -> Result<(Graph, IngestSummary)> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_edge_list(BufReader::new(file)).map_err(|e| match e {
        Error::Io { source, .. } => Error::Io {
            path: path.to_path_buf(),
            source,
        },
        other => other,
    })
}

pub fn parse_edge_list(text: &str) -> Result<(Graph, IngestSummary)> {
    read_edge_list(text.as_bytes())
}

pub fn read_edge_list<R: Read>(reader: R) -> Result<(Graph, IngestSummary)> {
    let mut g = Graph::new();
    let mut summary = IngestSummary::default();
    let mut pending = Vec::new();
    for (idx, line) in BufReader::new(reader).lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|source| Error::Io {
            path: Default::default(),
            source,
        })?;
        summary.lines += 1;
        let content = match line.find('#') {
            Some(pos) => &line[..pos],
            None => &line[..],
        };
        let mut fields = content.split_whitespace();
        let Some(a) = fields.next() else {
            continue;
        };
        let b = fields.next().ok_or_else(|| Error::Parse {
            line: line_no,
            message: format!("expected two node labels, found one ('{a}')"),
        })?;
        if let Some(extra) = fields.next() {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected two node labels, found extra field '{extra}'"),
            });
        }
        if a == b {
            return Err(Error::SelfLoopInput {
                line: line_no,
                label: a.to_string(),
            });
        }
        let (ia, ib) = (g.add_node(a), g.add_node(b));
        summary.edge_lines += 1;
        pending.push(EdgeRef::new(ia, ib).expect("distinct labels map to distinct ids"));
    }
    let (added, _) = g.apply_edits(&pending, &[]);
    summary.duplicates = pending.len() - added;
    Ok((g, summary))
}

/// Writes canonical edges sorted by `(u, v)`, one `label label` line each.
pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> std::io::Result<()> {
    for e in g.edges() {
        writeln!(out, "{} {}", g.label(e.u), g.label(e.v))?;
    }
    out.flush()
}

pub fn save_edge_list(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = fs::File::create(path).map_err(io_err)?;
    write_edge_list(g, std::io::BufWriter::new(file)).map_err(io_err)
}

pub fn edge_list_string(g: &Graph) -> String {
    let mut buf = Vec::new();
    write_edge_list(g, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("labels are valid UTF-8")
}

/// Edge set expressed in labels, each pair ordered lexicographically.
/// Two graphs with equal label edge sets are the same graph up to the
/// choice of dense ids.
pub fn labelled_edge_set(g: &Graph) -> BTreeSet<(String, String)> {
    g.edges()
        .iter()
        .map(|e| {
            let (a, b) = (g.label(e.u).to_string(), g.label(e.v).to_string());
            if a <= b {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect()
}
