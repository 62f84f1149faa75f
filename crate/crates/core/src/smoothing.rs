//! Message-passing simulator and numerical checks of the curvature bounds.
//!
//! One layer updates every node from its closed neighborhood
//! `Ñ(u) = N(u) ∪ {u}`:
//!
//! ```text
//! X'_u = φ( ⊕_{p ∈ Ñ(u)} ψ(X_p) )
//! ```
//!
//! with `ψ(x) = M·x` and `φ(x) = L·x` (or `L·tanh(x)` componentwise in the
//! stress mode), so the Lipschitz and message-bound constants are met
//! exactly. `⊕` is a sum or a mean over `Ñ(u)`.
//!
//! Checks compare observed feature differences to the closed-form bounds.
//! A row passes when `observed <= bound + 1e-9`. A row is *vacuous* when its
//! bound is no tighter than what bounded features give for free; such rows
//! still pass but are reported separately.

use rayon::prelude::*;
use serde::Serialize;

use crate::curvature::{compute_all, CurvatureBounds, CurvatureKind};
use crate::error::{Error, Result};
use crate::graph::{EdgeRef, Graph, NodeId};
use crate::motifs;
use crate::rng::SeededRng;

pub const BOUND_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregation {
    Sum,
    Mean,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UpdateMap {
    /// `φ(x) = L·x`
    Linear,
    /// `φ(x) = L·tanh(x)` componentwise
    Tanh,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MpConfig {
    /// Lipschitz constant `L` of the update map.
    pub lipschitz: f64,
    /// Bound `M` of the message map, `|ψ(x)| <= M|x|`.
    pub message_bound: f64,
    /// Bound `C` on initial feature norms.
    pub feature_bound: f64,
    pub aggregation: Aggregation,
    pub layers: usize,
    pub dimension: usize,
    pub seed: u64,
    pub update: UpdateMap,
}

impl Default for MpConfig {
    fn default() -> Self {
        Self {
            lipschitz: 1.0,
            message_bound: 1.0,
            feature_bound: 1.0,
            aggregation: Aggregation::Sum,
            layers: 1,
            dimension: 4,
            seed: crate::rng::DEFAULT_SEED,
            update: UpdateMap::Linear,
        }
    }
}

impl MpConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(self.lipschitz) || !positive(self.message_bound) || !positive(self.feature_bound) {
            return Err(Error::InvalidConfig("L, M and C must be positive".into()));
        }
        if self.layers == 0 || self.dimension == 0 {
            return Err(Error::InvalidConfig("layers and dimension must be at least 1".into()));
        }
        Ok(())
    }

    fn phi(&self, x: f64) -> f64 {
        match self.update {
            UpdateMap::Linear => self.lipschitz * x,
            UpdateMap::Tanh => self.lipschitz * x.tanh(),
        }
    }
}

/// Node features at one layer, stored row-major (`node_count × dim`).
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureState {
    dim: usize,
    data: Vec<f64>,
    pub layer: usize,
}

impl FeatureState {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let dim = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * dim);
        for r in rows {
            if r.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: r.len(),
                });
            }
            if r.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidConfig("features must be finite".into()));
            }
            data.extend(r);
        }
        Ok(Self { dim, data, layer: 0 })
    }

    pub fn constant(nodes: usize, value: &[f64]) -> Self {
        Self {
            dim: value.len(),
            data: value.iter().copied().cycle().take(nodes * value.len()).collect(),
            layer: 0,
        }
    }

    /// Independent features with `|X_p| <= bound`: a uniform direction with
    /// radius `bound` half of the time and uniform in the ball otherwise.
    pub fn random_bounded(nodes: usize, dim: usize, bound: f64, rng: &mut SeededRng) -> Self {
        let mut data = Vec::with_capacity(nodes * dim);
        for _ in 0..nodes {
            let mut dir: Vec<f64> = (0..dim).map(|_| rng.gaussian()).collect();
            let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
            let radius = if rng.bernoulli(0.5) {
                bound
            } else {
                bound * rng.unit().powf(1.0 / dim as f64)
            };
            if norm > 0.0 {
                dir.iter_mut().for_each(|x| *x *= radius / norm);
            }
            data.extend(dir);
        }
        Self { dim, data, layer: 0 }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn node_count(&self) -> usize {
        self.data.len().checked_div(self.dim).unwrap_or(0)
    }

    pub fn row(&self, u: NodeId) -> &[f64] {
        &self.data[u.index() * self.dim..(u.index() + 1) * self.dim]
    }

    pub fn distance(&self, a: NodeId, b: NodeId) -> f64 {
        self.row(a)
            .iter()
            .zip(self.row(b))
            .map(|(x, y)| (x - y).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_norm(&self) -> f64 {
        self.data
            .chunks(self.dim.max(1))
            .map(|r| r.iter().map(|x| x * x).sum::<f64>().sqrt())
            .fold(0.0, f64::max)
    }
}

/// One message-passing layer.
pub fn mp_step(g: &Graph, state: &FeatureState, config: &MpConfig) -> Result<FeatureState> {
    if state.dim != config.dimension {
        return Err(Error::DimensionMismatch {
            expected: config.dimension,
            got: state.dim,
        });
    }
    if state.node_count() != g.node_count() || g.node_count() == 0 {
        return Err(Error::DimensionMismatch {
            expected: g.node_count(),
            got: state.node_count(),
        });
    }
    let dim = state.dim;
    let mut data = vec![0.0; state.data.len()];
    data.par_chunks_mut(dim).enumerate().for_each(|(u, out)| {
        let u = NodeId::from(u);
        // sorted order, so nodes with the same closed neighborhood agree bitwise
        let nbrs = g.neighbors(u);
        let split = nbrs.partition_point(|&p| p < u);
        let closed = nbrs[..split].iter().chain(std::iter::once(&u)).chain(&nbrs[split..]);
        let mut acc = vec![0.0; dim];
        for &p in closed {
            for (a, x) in acc.iter_mut().zip(state.row(p)) {
                *a += x;
            }
        }
        let scale = match config.aggregation {
            Aggregation::Sum => config.message_bound,
            Aggregation::Mean => config.message_bound / (g.degree(u) + 1) as f64,
        };
        for (o, a) in out.iter_mut().zip(&acc) {
            *o = config.phi(scale * a);
        }
    });
    Ok(FeatureState {
        dim,
        data,
        layer: state.layer + 1,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowScope {
    Edge,
    /// Worst adjacent pair at one layer.
    Adjacent,
    /// Worst pair of any nodes at one layer.
    AllPairs,
    /// Symmetric-difference bound on an edge.
    Lemma1,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundRow {
    pub edge: Option<EdgeRef>,
    pub layer: Option<usize>,
    pub scope: RowScope,
    pub observed: f64,
    /// Lower side of a two-sided bound.
    pub lower: Option<f64>,
    pub bound: f64,
    pub slack: f64,
    pub pass: bool,
    pub vacuous: bool,
}

impl BoundRow {
    fn upper(edge: Option<EdgeRef>, layer: Option<usize>, scope: RowScope, observed: f64, bound: f64, vacuous: bool) -> Self {
        let slack = bound - observed;
        BoundRow {
            edge,
            layer,
            scope,
            observed,
            lower: None,
            bound,
            slack,
            pass: slack >= -BOUND_TOLERANCE,
            vacuous,
        }
    }

    fn sandwich(edge: EdgeRef, lower: f64, observed: f64, upper: f64) -> Self {
        let slack = (upper - observed).min(observed - lower);
        BoundRow {
            edge: Some(edge),
            layer: None,
            scope: RowScope::Edge,
            observed,
            lower: Some(lower),
            bound: upper,
            slack,
            pass: slack >= -BOUND_TOLERANCE,
            vacuous: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    /// Every row passed but no row carried an informative bound.
    VacuousPass,
    /// No edge satisfied the hypotheses.
    EmptyScope,
    Fail,
}

/// Least-squares fit of `C1·exp(-C2·k)` to a per-layer series.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnvelopeFit {
    pub c1: f64,
    pub c2: f64,
    pub r_squared: f64,
    /// Smallest `C1` for which `C1·exp(-C2·k)` dominates every point.
    pub dominating_c1: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundCheckResult {
    pub check: &'static str,
    pub rows: Vec<BoundRow>,
    /// Edges outside the hypotheses, with the reason.
    pub excluded: Vec<(EdgeRef, String)>,
    pub status: CheckStatus,
    pub pass: bool,
    pub envelope: Option<EnvelopeFit>,
    pub series: Vec<f64>,
}

impl BoundCheckResult {
    fn new(check: &'static str, rows: Vec<BoundRow>, excluded: Vec<(EdgeRef, String)>) -> Self {
        let pass = rows.iter().all(|r| r.pass);
        let status = if rows.is_empty() {
            CheckStatus::EmptyScope
        } else if !pass {
            CheckStatus::Fail
        } else if rows.iter().all(|r| r.vacuous) {
            CheckStatus::VacuousPass
        } else {
            CheckStatus::Pass
        };
        BoundCheckResult {
            check,
            rows,
            excluded,
            status,
            pass,
            envelope: None,
            series: Vec::new(),
        }
    }

    pub fn worst(&self) -> Option<&BoundRow> {
        self.rows.iter().min_by(|a, b| a.slack.total_cmp(&b.slack))
    }

    pub fn min_slack(&self) -> Option<f64> {
        self.worst().map(|r| r.slack)
    }
}

/// Degree sandwich on both augmented curvatures, every edge.
pub fn check_thm31(g: &Graph) -> Result<BoundCheckResult> {
    let af3 = compute_all(g, CurvatureKind::Af3)?;
    let af4 = compute_all(g, CurvatureKind::Af4)?;
    let mut rows = Vec::with_capacity(2 * g.edge_count());
    for (i, &e) in g.edges().iter().enumerate() {
        let b = CurvatureBounds::from_degrees(g.degree(e.u), g.degree(e.v));
        rows.push(BoundRow::sandwich(e, b.lower, af3.values[i], b.upper_af3));
        rows.push(BoundRow::sandwich(e, b.lower, af4.values[i], b.upper_af4));
    }
    Ok(BoundCheckResult::new("thm31", rows, Vec::new()))
}

/// `(m, n)` sorted degrees of an edge.
fn sorted_degrees(g: &Graph, e: EdgeRef) -> (f64, f64) {
    let (a, b) = (g.degree(e.u), g.degree(e.v));
    (a.max(b) as f64, a.min(b) as f64)
}

pub fn sum_bound(config: &MpConfig, m: f64, n: f64, af4: f64) -> f64 {
    config.lipschitz * config.feature_bound * config.message_bound * (2.0 * m * n - 3.0 * n + 3.0 - af4)
}

/// `2LCM·(n + 1 - AF3)/AF3`; zero when AF3 sits at its upper bound.
pub fn mean_af3_bound(config: &MpConfig, n: f64, af3: f64) -> f64 {
    2.0 * config.lipschitz * config.feature_bound * config.message_bound * (n + 1.0 - af3) / af3
}

/// Largest `|X_u - X_v|` after one layer, per listed edge, over `trials`
/// independent bounded initializations.
fn one_layer_max_differences(g: &Graph, edges: &[EdgeRef], config: &MpConfig, trials: usize) -> Result<Vec<f64>> {
    let per_trial: Vec<Vec<f64>> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = SeededRng::new(config.seed ^ t.wrapping_mul(0x9e37_79b9_7f4a_7c15));
            let x0 = FeatureState::random_bounded(g.node_count(), config.dimension, config.feature_bound, &mut rng);
            let x1 = mp_step(g, &x0, config)?;
            Ok(edges.iter().map(|e| x1.distance(e.u, e.v)).collect())
        })
        .collect::<Result<_>>()?;
    let mut best = vec![0.0f64; edges.len()];
    for diffs in per_trial {
        for (b, d) in best.iter_mut().zip(diffs) {
            *b = b.max(d);
        }
    }
    Ok(best)
}

/// Sum aggregation: `|X_u - X_v| <= LCM·(2mn - 3n + 3 - AF4)` on edges with
/// `AF4 > 0` and `n > 1`.
pub fn check_thm32_sum(g: &Graph, config: &MpConfig, trials: usize) -> Result<BoundCheckResult> {
    let config = MpConfig {
        aggregation: Aggregation::Sum,
        ..config.clone()
    };
    config.validate()?;
    let af4 = compute_all(g, CurvatureKind::Af4)?;
    let mut edges = Vec::new();
    let mut excluded = Vec::new();
    for (i, &e) in g.edges().iter().enumerate() {
        let (_, n) = sorted_degrees(g, e);
        if af4.values[i] <= 0.0 {
            excluded.push((e, format!("AF4 = {} is not positive", af4.values[i])));
        } else if n <= 1.0 {
            excluded.push((e, "minimum degree is 1".into()));
        } else {
            edges.push((i, e));
        }
    }
    let targets: Vec<EdgeRef> = edges.iter().map(|&(_, e)| e).collect();
    let observed = if targets.is_empty() {
        Vec::new()
    } else {
        one_layer_max_differences(g, &targets, &config, trials)?
    };
    let lmc = config.lipschitz * config.message_bound * config.feature_bound;
    let rows = edges
        .iter()
        .zip(observed)
        .map(|(&(i, e), obs)| {
            let (m, n) = sorted_degrees(g, e);
            let bound = sum_bound(&config, m, n, af4.values[i]);
            // |X_u|, |X_v| <= LCM·(deg + 1) without any curvature input
            let trivial = lmc * (m + n + 2.0);
            BoundRow::upper(Some(e), Some(1), RowScope::Edge, obs, bound, bound >= trivial)
        })
        .collect();
    Ok(BoundCheckResult::new("thm32-sum", rows, excluded))
}

/// Mean aggregation: `|X_u - X_v| <= 2LCM·(n + 1 - AF3)/AF3` on edges with
/// `AF3 > 0` and `n > 1`.
pub fn check_thm32_mean_af3(g: &Graph, config: &MpConfig, trials: usize) -> Result<BoundCheckResult> {
    let config = MpConfig {
        aggregation: Aggregation::Mean,
        ..config.clone()
    };
    config.validate()?;
    let af3 = compute_all(g, CurvatureKind::Af3)?;
    let mut edges = Vec::new();
    let mut excluded = Vec::new();
    for (i, &e) in g.edges().iter().enumerate() {
        let (_, n) = sorted_degrees(g, e);
        if af3.values[i] <= 0.0 {
            excluded.push((e, format!("AF3 = {} is not positive", af3.values[i])));
        } else if n <= 1.0 {
            excluded.push((e, "minimum degree is 1".into()));
        } else {
            edges.push((i, e));
        }
    }
    let targets: Vec<EdgeRef> = edges.iter().map(|&(_, e)| e).collect();
    let observed = if targets.is_empty() {
        Vec::new()
    } else {
        one_layer_max_differences(g, &targets, &config, trials)?
    };
    let trivial = 2.0 * config.lipschitz * config.message_bound * config.feature_bound;
    let rows = edges
        .iter()
        .zip(observed)
        .map(|(&(i, e), obs)| {
            let (_, n) = sorted_degrees(g, e);
            let bound = mean_af3_bound(&config, n, af3.values[i]);
            BoundRow::upper(Some(e), Some(1), RowScope::Edge, obs, bound, bound >= trivial)
        })
        .collect();
    Ok(BoundCheckResult::new("thm32-mean-af3", rows, excluded))
}

/// Which curvature drives the decay bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayCurvature {
    /// base `3LM(2mn - 3n + 3 - δ)/(n + 1)`
    Af4,
    /// base `3LM(n + 1 - δ)/(n + 1)`
    Af3,
}

/// Ratio of the geometric decay bound on a `degree`-regular graph.
pub fn decay_base(config: &MpConfig, degree: usize, delta: f64, variant: DecayCurvature) -> f64 {
    let (m, n) = (degree as f64, degree as f64);
    let gap = match variant {
        DecayCurvature::Af4 => 2.0 * m * n - 3.0 * n + 3.0 - delta,
        DecayCurvature::Af3 => n + 1.0 - delta,
    };
    3.0 * config.lipschitz * config.message_bound * gap / (n + 1.0)
}

/// Exponential decay on a regular graph under mean aggregation.
///
/// Runs `config.layers` layers from one bounded initialization and checks,
/// for every layer `k >= 1`, the adjacent-pair bound `C/3·base^k` and, on a
/// connected graph of diameter `D`, the all-pairs bound `D·C/3·base^k`.
/// When `base < 1` the per-layer edge sums are also fitted to an
/// exponential envelope. `delta` defaults to the smallest edge curvature.
pub fn check_prop33_decay(
    g: &Graph,
    config: &MpConfig,
    delta: Option<f64>,
    variant: DecayCurvature,
) -> Result<BoundCheckResult> {
    config.validate()?;
    if config.aggregation != Aggregation::Mean {
        return Err(Error::Hypothesis("the decay bound needs mean aggregation".into()));
    }
    let Some(degree) = g.is_regular() else {
        return Err(Error::Hypothesis("graph is not regular".into()));
    };
    if g.is_empty() {
        return Err(Error::Hypothesis("graph has no edges".into()));
    }
    let kind = match variant {
        DecayCurvature::Af4 => CurvatureKind::Af4,
        DecayCurvature::Af3 => CurvatureKind::Af3,
    };
    let curv = compute_all(g, kind)?;
    let min_curv = curv.values.iter().copied().fold(f64::INFINITY, f64::min);
    let delta = delta.unwrap_or(min_curv);
    if !(delta > 0.0) {
        return Err(Error::Hypothesis(format!("delta = {delta} must be positive")));
    }
    if let Some((e, v)) = g.edges().iter().zip(&curv.values).find(|(_, &v)| v < delta) {
        return Err(Error::Hypothesis(format!(
            "edge {e} has {kind} = {v} below delta = {delta}"
        )));
    }
    let base = decay_base(config, degree, delta, variant);
    let vacuous = base >= 1.0;
    let c = config.feature_bound;
    let diameter = g.diameter();
    let all_pairs = diameter.is_some() && g.node_count() <= 2000;

    let mut rng = SeededRng::new(config.seed);
    let mut state = FeatureState::random_bounded(g.node_count(), config.dimension, c, &mut rng);
    let edge_sum = |s: &FeatureState| g.edges().iter().map(|e| s.distance(e.u, e.v)).sum::<f64>();
    let mut series = vec![edge_sum(&state)];
    let mut rows = Vec::new();
    for k in 1..=config.layers {
        state = mp_step(g, &state, config)?;
        let (worst_edge, worst) = g
            .edges()
            .iter()
            .map(|e| (*e, state.distance(e.u, e.v)))
            .fold((g.edges()[0], f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
        let bound = c / 3.0 * base.powi(k as i32);
        rows.push(BoundRow::upper(Some(worst_edge), Some(k), RowScope::Adjacent, worst, bound, vacuous));
        if all_pairs {
            let d = diameter.unwrap() as f64;
            let mut widest = 0.0f64;
            for a in 0..g.node_count() {
                for b in a + 1..g.node_count() {
                    widest = widest.max(state.distance(NodeId::from(a), NodeId::from(b)));
                }
            }
            rows.push(BoundRow::upper(None, Some(k), RowScope::AllPairs, widest, d * bound, vacuous));
        }
        series.push(edge_sum(&state));
    }
    let check = match variant {
        DecayCurvature::Af4 => "prop33",
        DecayCurvature::Af3 => "prop33-af3",
    };
    let mut result = BoundCheckResult::new(check, rows, Vec::new());
    if !vacuous {
        result.envelope = Some(fit_exponential_envelope(&series));
    }
    result.series = series;
    Ok(result)
}

/// Fits `y_k ≈ C1·exp(-C2·k)` by least squares in the original scale.
/// For fixed `C2` the optimal `C1` is closed-form, so only `C2` is searched
/// (log-spaced grid, then golden-section refinement).
pub fn fit_exponential_envelope(series: &[f64]) -> EnvelopeFit {
    let sse_at = |c2: f64| -> (f64, f64) {
        let (mut num, mut den) = (0.0, 0.0);
        for (k, &y) in series.iter().enumerate() {
            let e = (-c2 * k as f64).exp();
            num += y * e;
            den += e * e;
        }
        let c1 = if den > 0.0 { num / den } else { 0.0 };
        let sse = series
            .iter()
            .enumerate()
            .map(|(k, &y)| (y - c1 * (-c2 * k as f64).exp()).powi(2))
            .sum();
        (sse, c1)
    };
    let (lo, hi) = (1e-6f64.ln(), 60f64.ln());
    let steps = 400;
    let mut best = (f64::INFINITY, lo);
    for i in 0..=steps {
        let t = lo + (hi - lo) * i as f64 / steps as f64;
        let (sse, _) = sse_at(t.exp());
        if sse < best.0 {
            best = (sse, t);
        }
    }
    let width = (hi - lo) / steps as f64;
    let (mut a, mut b) = ((best.1 - width).max(lo), (best.1 + width).min(hi));
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..100 {
        let x1 = b - phi * (b - a);
        let x2 = a + phi * (b - a);
        if sse_at(x1.exp()).0 <= sse_at(x2.exp()).0 {
            b = x2;
        } else {
            a = x1;
        }
    }
    let t = if sse_at(((a + b) / 2.0).exp()).0 <= best.0 { (a + b) / 2.0 } else { best.1 };
    let c2 = t.exp();
    let (sse, c1) = sse_at(c2);
    let mean = series.iter().sum::<f64>() / series.len().max(1) as f64;
    let sst: f64 = series.iter().map(|y| (y - mean).powi(2)).sum();
    let r_squared = if sst > 0.0 { 1.0 - sse / sst } else { 1.0 };
    let dominating_c1 = series
        .iter()
        .enumerate()
        .map(|(k, &y)| y * (c2 * k as f64).exp())
        .fold(0.0, f64::max);
    EnvelopeFit {
        c1,
        c2,
        r_squared,
        dominating_c1,
    }
}

/// Bridging-set bound `|S| <= (AF4 + deg u + deg v - 4)/2` on every edge,
/// together with the symmetric-difference bound.
pub fn check_prop34(g: &Graph) -> Result<BoundCheckResult> {
    let af4 = compute_all(g, CurvatureKind::Af4)?;
    let mut rows = Vec::with_capacity(2 * g.edge_count());
    for (i, &e) in g.edges().iter().enumerate() {
        let s = motifs::bridging_set_size(g, e)? as f64;
        let bound = (af4.values[i] + g.degree(e.u) as f64 + g.degree(e.v) as f64 - 4.0) / 2.0;
        rows.push(BoundRow::upper(Some(e), None, RowScope::Edge, s, bound, false));
        rows.push(lemma1_row(g, e)?);
    }
    Ok(BoundCheckResult::new("prop34", rows, Vec::new()))
}

/// `|Ñ(u) Δ Ñ(v)| <= deg u + deg v - 2t - 2` on every edge.
pub fn check_lemma1(g: &Graph) -> Result<BoundCheckResult> {
    let rows = g.edges().iter().map(|&e| lemma1_row(g, e)).collect::<Result<_>>()?;
    Ok(BoundCheckResult::new("lemma1", rows, Vec::new()))
}

fn lemma1_row(g: &Graph, e: EdgeRef) -> Result<BoundRow> {
    let sym = motifs::closed_neighborhood_symmetric_difference(g, e)? as f64;
    let t = motifs::triangle_count(g, e)? as f64;
    let bound = g.degree(e.u) as f64 + g.degree(e.v) as f64 - 2.0 * t - 2.0;
    Ok(BoundRow::upper(Some(e), None, RowScope::Lemma1, sym, bound, false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    fn unit_config() -> MpConfig {
        MpConfig {
            dimension: 1,
            ..MpConfig::default()
        }
    }

    #[test]
    fn single_edge_sum_step() {
        let g = generators::path(2);
        let x0 = FeatureState::from_rows(vec![vec![1.0], vec![0.0]]).unwrap();
        let x1 = mp_step(&g, &x0, &unit_config()).unwrap();
        assert_eq!(x1.row(NodeId(0)), &[1.0]);
        assert_eq!(x1.row(NodeId(1)), &[1.0]);
        assert_eq!(x1.layer, 1);
    }

    #[test]
    fn mean_of_constant_scales_by_lm() {
        let g = generators::barbell(4);
        let config = MpConfig {
            lipschitz: 0.5,
            message_bound: 3.0,
            aggregation: Aggregation::Mean,
            dimension: 2,
            ..MpConfig::default()
        };
        let x0 = FeatureState::constant(g.node_count(), &[2.0, -1.0]);
        let x1 = mp_step(&g, &x0, &config).unwrap();
        for u in g.nodes() {
            let r = x1.row(u);
            assert!((r[0] - 3.0).abs() < 1e-12 && (r[1] + 1.5).abs() < 1e-12);
        }
    }

    #[test]
    fn isolated_node_keeps_self_message() {
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        let config = MpConfig {
            lipschitz: 2.0,
            message_bound: 0.5,
            dimension: 1,
            ..MpConfig::default()
        };
        let x0 = FeatureState::from_rows(vec![vec![1.0], vec![1.0], vec![4.0]]).unwrap();
        let x1 = mp_step(&g, &x0, &config).unwrap();
        assert_eq!(x1.row(NodeId(2)), &[4.0]);
    }

    #[test]
    fn dimension_mismatch() {
        let g = generators::path(2);
        let x0 = FeatureState::constant(2, &[1.0, 1.0]);
        assert!(matches!(
            mp_step(&g, &x0, &unit_config()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn realized_constants_are_exact() {
        let mut rng = SeededRng::new(4);
        for update in [UpdateMap::Linear, UpdateMap::Tanh] {
            let c = MpConfig {
                lipschitz: 0.7,
                update,
                ..MpConfig::default()
            };
            for _ in 0..100 {
                let (x, y) = (rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0));
                let ratio = (c.phi(x) - c.phi(y)).abs() / (x - y).abs();
                match update {
                    UpdateMap::Linear => assert!((ratio - 0.7).abs() < 1e-12),
                    UpdateMap::Tanh => assert!(ratio <= 0.7 + 1e-12),
                }
            }
        }
    }

    #[test]
    fn random_features_are_bounded() {
        let s = FeatureState::random_bounded(200, 5, 2.5, &mut SeededRng::new(1));
        assert!(s.max_norm() <= 2.5 + 1e-12);
    }

    #[test]
    fn sum_bound_fixtures() {
        let config = MpConfig::default();
        let k5 = check_thm32_sum(&generators::complete(5), &config, 100).unwrap();
        assert!(k5.pass);
        assert!(k5.rows.iter().all(|r| r.bound == 18.0));
        let c4 = check_thm32_sum(&generators::cycle(4), &config, 100).unwrap();
        assert!(c4.pass);
        assert!(c4.rows.iter().all(|r| r.bound == 3.0));
    }

    #[test]
    fn equal_features_give_zero() {
        let g = generators::cycle(4);
        let x0 = FeatureState::constant(4, &[0.3; 4]);
        let x1 = mp_step(&g, &x0, &MpConfig::default()).unwrap();
        assert!(g.edges().iter().all(|e| x1.distance(e.u, e.v) == 0.0));
    }

    #[test]
    fn mean_bound_on_triangle_is_exactly_zero() {
        let r = check_thm32_mean_af3(&generators::complete(3), &MpConfig::default(), 50).unwrap();
        assert!(r.pass);
        assert!(r.rows.iter().all(|row| row.bound == 0.0 && row.observed == 0.0));
        let k5 = check_thm32_mean_af3(&generators::complete(5), &MpConfig::default(), 50).unwrap();
        assert!(k5.rows.iter().all(|row| row.bound == 0.0 && row.observed == 0.0));
    }

    #[test]
    fn mean_bound_excludes_flat_edges() {
        let r = check_thm32_mean_af3(&generators::cycle(5), &MpConfig::default(), 10).unwrap();
        assert_eq!(r.status, CheckStatus::EmptyScope);
        assert_eq!(r.excluded.len(), 5);
    }

    #[test]
    fn mean_bound_vanishes_at_upper_curvature() {
        let c = MpConfig::default();
        for n in 2..10 {
            let n = n as f64;
            assert_eq!(mean_af3_bound(&c, n, n + 1.0), 0.0);
            let mut prev = f64::INFINITY;
            for step in 1..=10 {
                let af3 = n + 1.0 - 1.0 / step as f64;
                let b = mean_af3_bound(&c, n, af3);
                assert!(b < prev && b >= 0.0);
                prev = b;
            }
        }
    }

    #[test]
    fn decay_on_k5() {
        let g = generators::complete(5);
        let config = MpConfig {
            lipschitz: 0.2,
            message_bound: 0.2,
            aggregation: Aggregation::Mean,
            layers: 40,
            ..MpConfig::default()
        };
        assert!((decay_base(&config, 4, 5.0, DecayCurvature::Af4) - 0.432).abs() < 1e-12);
        let r = check_prop33_decay(&g, &config, Some(5.0), DecayCurvature::Af4).unwrap();
        assert_eq!(r.status, CheckStatus::Pass);
        assert!(r.envelope.as_ref().unwrap().r_squared >= 0.99);
    }

    #[test]
    fn decay_hypotheses() {
        let config = MpConfig {
            aggregation: Aggregation::Mean,
            ..MpConfig::default()
        };
        let path = generators::path(5);
        assert!(matches!(
            check_prop33_decay(&path, &config, None, DecayCurvature::Af4),
            Err(Error::Hypothesis(_))
        ));
        let k5 = generators::complete(5);
        let err = check_prop33_decay(&k5, &config, Some(6.0), DecayCurvature::Af4).unwrap_err();
        assert!(err.to_string().contains("(0, 1)"), "{err}");
        let sum = MpConfig::default();
        assert!(check_prop33_decay(&k5, &sum, None, DecayCurvature::Af4).is_err());
    }

    #[test]
    fn decay_with_large_ratio_is_vacuous() {
        let config = MpConfig {
            aggregation: Aggregation::Mean,
            layers: 5,
            ..MpConfig::default()
        };
        let r = check_prop33_decay(&generators::complete(5), &config, Some(5.0), DecayCurvature::Af4).unwrap();
        assert_eq!(r.status, CheckStatus::VacuousPass);
        assert!(r.envelope.is_none());
    }

    #[test]
    fn bridging_bound_tight_on_c4() {
        let r = check_prop34(&generators::cycle(4)).unwrap();
        assert!(r.pass);
        for row in r.rows.iter().filter(|r| r.scope == RowScope::Edge) {
            assert_eq!((row.observed, row.bound, row.slack), (1.0, 1.0, 0.0));
        }
        let k4 = check_prop34(&generators::complete(4)).unwrap();
        assert!(k4
            .rows
            .iter()
            .filter(|r| r.scope == RowScope::Edge)
            .all(|r| r.observed == 0.0 && r.bound == 3.0));
    }

    #[test]
    fn envelope_of_pure_exponential() {
        let series: Vec<f64> = (0..30).map(|k| 5.0 * (-0.3 * k as f64).exp()).collect();
        let fit = fit_exponential_envelope(&series);
        assert!((fit.c2 - 0.3).abs() < 1e-6, "{fit:?}");
        assert!((fit.c1 - 5.0).abs() < 1e-5);
        assert!(fit.r_squared > 0.999_999);
    }

    #[test]
    fn degree_sandwich_passes_on_barbell() {
        let r = check_thm31(&generators::barbell(10)).unwrap();
        assert!(r.pass);
        assert_eq!(r.min_slack(), Some(0.0));
    }
}
