//! Timing of whole-graph curvature over a ladder of generated graphs.
//!
//! Each row times `compute_all` on the sequential path, taking the minimum
//! over at least three repeats (more for fast instances). The fitted slope is the least-squares
//! slope of `ln(time)` against `ln(work)`, with `work = |E|·d_max` for AF3
//! and `|E|·d_max²` for AF4 and ORC.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::curvature::{compute_all_with, CurvatureKind, CurvatureOptions};
use crate::error::{Error, Result};
use crate::generators;
use crate::graph::Graph;
use crate::rng::SeededRng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BenchGenerator {
    /// `G(n, c/n)` with mean degree `c`.
    Gnp,
    /// Circulant graph of fixed degree.
    Regular,
    /// Two cliques of the given size joined by a bridge.
    Barbell,
}

impl std::str::FromStr for BenchGenerator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gnp" => Ok(Self::Gnp),
            "regular" => Ok(Self::Regular),
            "barbell" => Ok(Self::Barbell),
            other => Err(Error::InvalidConfig(format!("unknown generator `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchConfig {
    pub generator: BenchGenerator,
    /// Node counts (clique size for the barbell), ascending.
    pub sizes: Vec<usize>,
    pub kinds: Vec<CurvatureKind>,
    pub mean_degree: usize,
    pub seed: u64,
    /// Keep repeating a measurement until this much time has been spent.
    pub min_sample_time: Duration,
    pub min_repeats: usize,
    pub max_repeats: usize,
}

impl BenchConfig {
    pub fn new(generator: BenchGenerator) -> Self {
        Self {
            generator,
            sizes: default_ladder(generator),
            kinds: vec![CurvatureKind::Af3, CurvatureKind::Af4],
            mean_degree: 8,
            seed: crate::rng::DEFAULT_SEED,
            min_sample_time: Duration::from_millis(500),
            min_repeats: 3,
            max_repeats: 7,
        }
    }
}

/// Five doubling sizes; the gnp and regular ladders end near 10⁶ edges.
pub fn default_ladder(generator: BenchGenerator) -> Vec<usize> {
    match generator {
        BenchGenerator::Gnp | BenchGenerator::Regular => (0..5).map(|i| 15_625 << i).collect(),
        BenchGenerator::Barbell => (0..5).map(|i| 40 << i).collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub kind: CurvatureKind,
    pub size: usize,
    pub nodes: usize,
    pub edges: usize,
    pub max_degree: usize,
    pub work: f64,
    pub seconds: f64,
    pub repeats: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    /// Log–log slope per kind; `None` with fewer than two distinct sizes.
    pub slopes: Vec<(CurvatureKind, Option<f64>)>,
}

impl BenchReport {
    pub fn slope(&self, kind: CurvatureKind) -> Option<f64> {
        self.slopes.iter().find(|(k, _)| *k == kind).and_then(|(_, s)| *s)
    }
}

pub fn work_measure(kind: CurvatureKind, edges: usize, max_degree: usize) -> f64 {
    let (e, d) = (edges as f64, max_degree.max(1) as f64);
    match kind {
        CurvatureKind::Af3 => e * d,
        CurvatureKind::Af4 | CurvatureKind::OrcRef => e * d * d,
    }
}

pub fn generate(generator: BenchGenerator, size: usize, mean_degree: usize, seed: u64) -> Graph {
    match generator {
        BenchGenerator::Gnp => {
            let p = (mean_degree as f64 / size.max(2) as f64).min(1.0);
            generators::gnp(size, p, &mut SeededRng::new(seed ^ size as u64))
        }
        BenchGenerator::Regular => generators::circulant_regular(size, mean_degree.min(size.saturating_sub(1))),
        BenchGenerator::Barbell => generators::barbell(size),
    }
}

pub fn run_bench(config: &BenchConfig) -> Result<BenchReport> {
    if config.sizes.is_empty() {
        return Err(Error::InvalidConfig("no sizes given".into()));
    }
    if config.sizes.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidConfig("sizes must be ascending".into()));
    }
    let opts = CurvatureOptions {
        parallel: false,
        ..CurvatureOptions::default()
    };
    let mut rows = Vec::new();
    for &size in &config.sizes {
        let g = generate(config.generator, size, config.mean_degree, config.seed);
        log::info!("bench size {size}: {} nodes, {} edges", g.node_count(), g.edge_count());
        for &kind in &config.kinds {
            let mut best = Duration::MAX;
            let mut spent = Duration::ZERO;
            let mut repeats = 0;
            let floor = config.min_repeats.max(1);
            while repeats < floor || (repeats < config.max_repeats && spent < config.min_sample_time) {
                let start = Instant::now();
                let map = compute_all_with(&g, kind, &opts)?;
                let elapsed = start.elapsed();
                std::hint::black_box(&map);
                best = best.min(elapsed);
                spent += elapsed;
                repeats += 1;
            }
            rows.push(BenchRow {
                kind,
                size,
                nodes: g.node_count(),
                edges: g.edge_count(),
                max_degree: g.max_degree(),
                work: work_measure(kind, g.edge_count(), g.max_degree()),
                seconds: best.as_secs_f64(),
                repeats,
            });
        }
    }
    let slopes = config
        .kinds
        .iter()
        .map(|&kind| {
            let (x, y): (Vec<f64>, Vec<f64>) = rows
                .iter()
                .filter(|r| r.kind == kind)
                .map(|r| (r.work.ln(), r.seconds.max(1e-9).ln()))
                .unzip();
            (kind, least_squares_slope(&x, &y))
        })
        .collect();
    Ok(BenchReport { rows, slopes })
}

pub fn least_squares_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() < 2 || x.len() != y.len() {
        return None;
    }
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    if sxx <= 0.0 {
        return None;
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    Some(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let x: Vec<f64> = (1..6).map(|i| (i as f64).ln()).collect();
        let y: Vec<f64> = x.iter().map(|a| 1.5 * a + 0.2).collect();
        assert!((least_squares_slope(&x, &y).unwrap() - 1.5).abs() < 1e-12);
        assert_eq!(least_squares_slope(&x[..1], &y[..1]), None);
    }

    #[test]
    fn single_size_has_no_slope() {
        let mut config = BenchConfig::new(BenchGenerator::Barbell);
        config.sizes = vec![6];
        config.min_sample_time = Duration::ZERO;
        config.min_repeats = 1;
        let r = run_bench(&config).unwrap();
        assert_eq!(r.rows.len(), 2);
        assert_eq!(r.slope(CurvatureKind::Af3), None);
        assert_eq!(r.rows[0].edges, 31);
    }

    #[test]
    fn rejects_descending_sizes() {
        let mut config = BenchConfig::new(BenchGenerator::Gnp);
        config.sizes = vec![100, 50];
        assert!(run_bench(&config).is_err());
    }

    #[test]
    fn ladder_doubles() {
        let l = default_ladder(BenchGenerator::Gnp);
        assert_eq!(l.len(), 5);
        assert!(l.windows(2).all(|w| w[1] == 2 * w[0]));
        assert!(l[4] * 4 >= 900_000);
    }
}
