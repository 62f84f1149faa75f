use serde::Serialize;

use crate::curvature::{CurvatureKind, CurvatureMap};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SummaryStats {
    pub kind: CurvatureKind,
    pub count: usize,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    /// Population standard deviation.
    pub std: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvatureStats {
    pub summaries: Vec<SummaryStats>,
    /// Pearson correlation, present when exactly two maps were given.
    pub correlation: Option<f64>,
}

pub fn summarize(kind: CurvatureKind, values: &[f64]) -> Result<SummaryStats> {
    if values.is_empty() {
        return Err(Error::EmptyInput("curvature map has no edges"));
    }
    let n = values.len() as f64;
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    Ok(SummaryStats {
        kind,
        count: values.len(),
        min,
        max,
        // clamp rounding so that min <= mean <= max holds exactly
        mean: mean.clamp(min, max),
        std: var.sqrt(),
    })
}

/// Summary per map, plus the correlation between two maps. Maps must come
/// from the same graph.
///
/// When either map is constant the correlation is 1 if the maps are equal
/// and undefined otherwise.
pub fn curvature_stats(maps: &[&CurvatureMap]) -> Result<CurvatureStats> {
    let first = maps.first().ok_or(Error::EmptyInput("no curvature maps"))?;
    for m in &maps[1..] {
        if m.graph_fingerprint != first.graph_fingerprint || m.values.len() != first.values.len() {
            return Err(Error::Stale {
                expected: first.graph_fingerprint,
                actual: m.graph_fingerprint,
            });
        }
    }
    let summaries = maps
        .iter()
        .map(|m| summarize(m.kind, &m.values))
        .collect::<Result<Vec<_>>>()?;
    let correlation = match maps {
        [a, b] => Some(pearson(&a.values, &b.values)?),
        _ => None,
    };
    Ok(CurvatureStats {
        summaries,
        correlation,
    })
}

pub(crate) fn pearson(a: &[f64], b: &[f64]) -> Result<f64> {
    let n = a.len() as f64;
    let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
    let mut sab = 0.0;
    let mut saa = 0.0;
    let mut sbb = 0.0;
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma).powi(2);
        sbb += (y - mb).powi(2);
    }
    if saa == 0.0 || sbb == 0.0 {
        return if a == b {
            Ok(1.0)
        } else {
            Err(Error::UndefinedCorrelation("one map is constant and the maps differ"))
        };
    }
    Ok((sab / (saa.sqrt() * sbb.sqrt())).clamp(-1.0, 1.0))
}

/// Histogram with Freedman–Diaconis bin width. For integer-valued kinds the
/// width is rounded up to a whole number and edges sit at half-integers, so
/// every integer falls inside a bin.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Histogram {
    pub kind: CurvatureKind,
    pub bin_edges: Vec<f64>,
    pub counts: Vec<usize>,
}

const MAX_BINS: usize = 4096;

impl Histogram {
    pub fn freedman_diaconis(kind: CurvatureKind, values: &[f64]) -> Histogram {
        if values.is_empty() {
            return Histogram {
                kind,
                bin_edges: Vec::new(),
                counts: Vec::new(),
            };
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let (min, max) = (sorted[0], sorted[sorted.len() - 1]);
        let iqr = percentile_sorted(&sorted, 0.75) - percentile_sorted(&sorted, 0.25);
        let mut width = 2.0 * iqr / (sorted.len() as f64).cbrt();
        let start;
        if kind.is_integral() {
            width = width.ceil().max(1.0);
            start = min.floor() - 0.5;
        } else {
            if !(width > 0.0) {
                width = if max > min { max - min } else { 1.0 };
            }
            start = if max > min { min } else { min - 0.5 * width };
        }
        let span = max - start;
        let mut bins = ((span / width).floor() as usize + 1).max(1);
        if bins > MAX_BINS {
            bins = MAX_BINS;
            width = span / (MAX_BINS as f64 - 0.5);
        }
        let bin_edges: Vec<f64> = (0..=bins).map(|i| start + i as f64 * width).collect();
        let mut counts = vec![0usize; bins];
        for &x in &sorted {
            let idx = (((x - start) / width).floor() as usize).min(bins - 1);
            counts[idx] += 1;
        }
        Histogram {
            kind,
            bin_edges,
            counts,
        }
    }
}

/// Linear-interpolation percentile on sorted data, `q` in `[0, 1]`.
pub(crate) fn percentile_sorted(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}
