//! Per-edge curvature.
//!
//! The augmented Forman curvatures are integer formulas in degrees and
//! edge-local motif counts:
//!
//! ```text
//! AF3(u, v) = 4 - deg(u) - deg(v) + 3·triangles(u, v)
//! AF4(u, v) = AF3(u, v) + 2·quadrangles(u, v)
//! ```
//!
//! With `m >= n` the sorted endpoint degrees, both are bounded below by
//! `4 - m - n`; AF3 is bounded above by `n + 1` and AF4 by `2mn - 3n + 3`.
//!
//! An exact Ollivier-Ricci value is also available as a cross-check. It is
//! cubic in degree, so it is refused on endpoints above a configurable
//! degree guard.

mod orc;
mod stats;
pub mod transport;

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeRef, Graph};
use crate::motifs;

pub use orc::{orc_edge_reference, orc_edge_reference_with_guard};
pub(crate) use stats::percentile_sorted;
pub use stats::{curvature_stats, summarize, CurvatureStats, Histogram, SummaryStats};

/// Endpoint-degree ceiling for exact transport.
pub const DEFAULT_TRANSPORT_GUARD: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CurvatureKind {
    #[serde(rename = "af3")]
    Af3,
    #[serde(rename = "af4")]
    Af4,
    #[serde(rename = "orc-ref")]
    OrcRef,
}

impl CurvatureKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CurvatureKind::Af3 => "af3",
            CurvatureKind::Af4 => "af4",
            CurvatureKind::OrcRef => "orc-ref",
        }
    }

    /// AF3 and AF4 values are integers on simple graphs.
    pub fn is_integral(self) -> bool {
        !matches!(self, CurvatureKind::OrcRef)
    }
}

impl fmt::Display for CurvatureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CurvatureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "af3" => Ok(CurvatureKind::Af3),
            "af4" => Ok(CurvatureKind::Af4),
            "orc-ref" | "orc_ref" | "orc" => Ok(CurvatureKind::OrcRef),
            other => Err(Error::InvalidConfig(format!("unknown curvature kind '{other}'"))),
        }
    }
}

/// Curvature of every edge, aligned with [`Graph::edges`] of the graph it
/// was computed on.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvatureMap {
    pub kind: CurvatureKind,
    pub values: Vec<f64>,
    pub graph_fingerprint: u64,
}

impl CurvatureMap {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_fresh_for(&self, g: &Graph) -> bool {
        self.graph_fingerprint == g.fingerprint() && self.values.len() == g.edge_count()
    }

    pub fn ensure_fresh(&self, g: &Graph) -> Result<()> {
        if self.is_fresh_for(g) {
            Ok(())
        } else {
            Err(Error::Stale {
                expected: self.graph_fingerprint,
                actual: g.fingerprint(),
            })
        }
    }

    /// Value for `e`, looked up through the graph's edge index.
    pub fn get(&self, g: &Graph, e: EdgeRef) -> Option<f64> {
        g.edge_index(e).and_then(|i| self.values.get(i).copied())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurvatureBounds {
    pub lower: f64,
    pub upper_af3: f64,
    pub upper_af4: f64,
}

impl CurvatureBounds {
    /// Bounds from the sorted degree pair `m >= n`.
    pub fn from_degrees(m: usize, n: usize) -> Self {
        let (m, n) = if m >= n { (m, n) } else { (n, m) };
        let (m, n) = (m as f64, n as f64);
        CurvatureBounds {
            lower: 4.0 - m - n,
            upper_af3: n + 1.0,
            upper_af4: 2.0 * m * n - 3.0 * n + 3.0,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CurvatureOptions {
    pub parallel: bool,
    pub transport_guard: usize,
}

impl Default for CurvatureOptions {
    fn default() -> Self {
        Self {
            parallel: true,
            transport_guard: DEFAULT_TRANSPORT_GUARD,
        }
    }
}

pub fn af3_edge(g: &Graph, e: EdgeRef) -> Result<f64> {
    g.require_edge(e)?;
    Ok(af3_unchecked(g, e))
}

pub fn af4_edge(g: &Graph, e: EdgeRef) -> Result<f64> {
    g.require_edge(e)?;
    Ok(af4_unchecked(g, e))
}

#[inline]
fn af3_unchecked(g: &Graph, e: EdgeRef) -> f64 {
    let t = motifs::triangles_unchecked(g, e) as i64;
    (4 - g.degree(e.u) as i64 - g.degree(e.v) as i64 + 3 * t) as f64
}

#[inline]
fn af4_unchecked(g: &Graph, e: EdgeRef) -> f64 {
    let q = motifs::quadrangles_unchecked(g, e) as i64;
    af3_unchecked(g, e) + (2 * q) as f64
}

pub fn curvature_bounds(g: &Graph, e: EdgeRef) -> Result<CurvatureBounds> {
    g.require_edge(e)?;
    Ok(CurvatureBounds::from_degrees(g.degree(e.u), g.degree(e.v)))
}

pub fn compute_all(g: &Graph, kind: CurvatureKind) -> Result<CurvatureMap> {
    compute_all_with(g, kind, &CurvatureOptions::default())
}

/// Curvature of every edge. Each slot depends only on the graph, so the
/// parallel and sequential paths produce identical maps.
pub fn compute_all_with(g: &Graph, kind: CurvatureKind, opts: &CurvatureOptions) -> Result<CurvatureMap> {
    if kind == CurvatureKind::OrcRef {
        if let Some(&e) = g.edges().iter().find(|e| {
            g.degree(e.u) > opts.transport_guard || g.degree(e.v) > opts.transport_guard
        }) {
            return Err(Error::Capability {
                edge: e,
                deg_u: g.degree(e.u),
                deg_v: g.degree(e.v),
                guard: opts.transport_guard,
            });
        }
    }
    let eval = |e: &EdgeRef| -> f64 {
        match kind {
            CurvatureKind::Af3 => af3_unchecked(g, *e),
            CurvatureKind::Af4 => af4_unchecked(g, *e),
            CurvatureKind::OrcRef => orc::orc_unchecked(g, *e),
        }
    };
    let values = if opts.parallel {
        g.edges().par_iter().map(eval).collect()
    } else {
        g.edges().iter().map(eval).collect()
    };
    Ok(CurvatureMap {
        kind,
        values,
        graph_fingerprint: g.fingerprint(),
    })
}

/// Tab-separated `u v kind value` records under a versioned header.
pub fn write_curvature_report<W: Write>(g: &Graph, map: &CurvatureMap, mut out: W) -> Result<()> {
    map.ensure_fresh(g)?;
    let io = |source| Error::Io {
        path: Default::default(),
        source,
    };
    writeln!(out, "# afrc-curvature v1").map_err(io)?;
    writeln!(out, "u\tv\tkind\tvalue").map_err(io)?;
    for (e, &value) in g.edges().iter().zip(&map.values) {
        writeln!(
            out,
            "{}\t{}\t{}\t{}",
            g.label(e.u),
            g.label(e.v),
            map.kind,
            format_value(map.kind, value)
        )
        .map_err(io)?;
    }
    out.flush().map_err(io)
}

pub(crate) fn format_value(kind: CurvatureKind, value: f64) -> String {
    if kind.is_integral() {
        format!("{}", value as i64)
    } else {
        format!("{value}")
    }
}
