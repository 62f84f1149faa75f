//! Curvature-guided rewiring.
//!
//! Each round computes the configured curvature, picks addition targets
//! among the most negatively curved edges and removal targets among the
//! most positively curved ones, then applies additions before removals.
//!
//! For an addition target `(u, v)` oriented so that `deg(u) >= deg(v)`
//! (ties: the smaller id plays `u`), a node `w` is drawn uniformly from
//! `N(u) \ (N(v) ∪ {v})` and the edge `(w, v)` is added. Targets with an
//! empty candidate set are skipped.
//!
//! Targets come either from fixed budgets (the `h` lowest and `l` highest
//! values, ties broken by canonical edge order) or from thresholds fitted
//! to the curvature distribution (strictly below the lower threshold,
//! strictly above the upper one).

use log::warn;
use serde::Serialize;

use crate::curvature::{compute_all, CurvatureKind, CurvatureMap, Histogram};
use crate::error::{Error, Result};
use crate::graph::{EdgeRef, Graph, NodeId};
use crate::mixture::{fit_gmm2, EmConfig, MixtureFit, Thresholds};
use crate::motifs::exclusive_neighborhoods;
use crate::rng::SeededRng;

pub const REPORT_SCHEMA: &str = "afrc-rewire-report/v1";

/// Round cap for [`Iterations::UntilStable`].
pub const MAX_ROUNDS: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum RewireMode {
    Heuristic,
    Fixed { add: usize, remove: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Iterations {
    Count(usize),
    /// Repeat until a round changes nothing, at most [`MAX_ROUNDS`] times.
    UntilStable,
}

impl Iterations {
    fn rounds(self) -> usize {
        match self {
            Iterations::Count(n) => n,
            Iterations::UntilStable => MAX_ROUNDS,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RewireConfig {
    pub kind: CurvatureKind,
    pub mode: RewireMode,
    pub iterations: Iterations,
    pub seed: u64,
    #[serde(skip)]
    pub em: EmConfig,
}

impl RewireConfig {
    pub fn heuristic(kind: CurvatureKind, seed: u64) -> Self {
        Self {
            kind,
            mode: RewireMode::Heuristic,
            iterations: Iterations::Count(1),
            seed,
            em: EmConfig::default(),
        }
    }

    pub fn fixed(kind: CurvatureKind, add: usize, remove: usize, seed: u64) -> Self {
        Self {
            kind,
            mode: RewireMode::Fixed { add, remove },
            iterations: Iterations::Count(1),
            seed,
            em: EmConfig::default(),
        }
    }

    pub fn with_iterations(mut self, iterations: Iterations) -> Self {
        self.iterations = iterations;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.kind == CurvatureKind::OrcRef {
            return Err(Error::InvalidConfig(
                "rewiring is driven by af3 or af4 curvature".into(),
            ));
        }
        if self.iterations == Iterations::Count(0) {
            return Err(Error::InvalidConfig("iterations must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Addition {
    pub source_edge: EdgeRef,
    pub new_edge: EdgeRef,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SkipReason {
    /// `N(u) \ (N(v) ∪ {v})` is empty.
    NoCandidate,
    /// The drawn edge is already in the graph.
    AlreadyPresent,
    /// An earlier target in the same round drew the same edge.
    DuplicateInPlan,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SkippedTarget {
    pub source_edge: EdgeRef,
    pub reason: SkipReason,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AdditionPlan {
    pub additions: Vec<Addition>,
    pub skipped: Vec<SkippedTarget>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RewirePlan {
    pub additions: Vec<Addition>,
    pub removals: Vec<EdgeRef>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RemovalSelector {
    Budget(usize),
    Above(f64),
}

/// Draws one new edge per target, against the graph as it was before any
/// of them is applied.
pub fn plan_additions(
    g: &Graph,
    cmap: &CurvatureMap,
    targets: &[EdgeRef],
    rng: &mut SeededRng,
) -> Result<AdditionPlan> {
    cmap.ensure_fresh(g)?;
    let mut plan = AdditionPlan::default();
    let mut emitted: Vec<EdgeRef> = Vec::new();
    for &target in targets {
        g.require_edge(target)?;
        let (u, v) = orient(g, target);
        let (of_low, of_high) = exclusive_neighborhoods(g, target);
        let candidates = if u == target.u { of_low } else { of_high };
        let Some(&w) = rng.choose(&candidates) else {
            plan.skipped.push(SkippedTarget {
                source_edge: target,
                reason: SkipReason::NoCandidate,
            });
            continue;
        };
        let new_edge = EdgeRef::new(w, v).expect("w is a neighbor of u other than v");
        let reason = if g.contains(new_edge) {
            Some(SkipReason::AlreadyPresent)
        } else if emitted.contains(&new_edge) {
            Some(SkipReason::DuplicateInPlan)
        } else {
            None
        };
        match reason {
            Some(reason) => plan.skipped.push(SkippedTarget {
                source_edge: target,
                reason,
            }),
            None => {
                emitted.push(new_edge);
                plan.additions.push(Addition {
                    source_edge: target,
                    new_edge,
                });
            }
        }
    }
    Ok(plan)
}

/// `(u, v)` with `deg(u) >= deg(v)`; equal degrees put the smaller id first.
fn orient(g: &Graph, e: EdgeRef) -> (NodeId, NodeId) {
    if g.degree(e.v) > g.degree(e.u) {
        (e.v, e.u)
    } else {
        (e.u, e.v)
    }
}

pub fn plan_removals(g: &Graph, cmap: &CurvatureMap, selector: RemovalSelector) -> Result<Vec<EdgeRef>> {
    cmap.ensure_fresh(g)?;
    Ok(match selector {
        RemovalSelector::Budget(l) => {
            if l > g.edge_count() {
                warn!("removal budget {l} exceeds the {} edges present; clipped", g.edge_count());
            }
            highest(g, cmap, l)
        }
        RemovalSelector::Above(threshold) => g
            .edges()
            .iter()
            .zip(&cmap.values)
            .filter(|(_, &x)| x > threshold)
            .map(|(&e, _)| e)
            .collect(),
    })
}

/// The `k` lowest-curvature edges, ties in canonical order.
pub fn lowest(g: &Graph, cmap: &CurvatureMap, k: usize) -> Vec<EdgeRef> {
    let mut idx: Vec<usize> = (0..g.edge_count()).collect();
    idx.sort_by(|&a, &b| cmap.values[a].total_cmp(&cmap.values[b]).then(a.cmp(&b)));
    idx.into_iter().take(k).map(|i| g.edges()[i]).collect()
}

/// The `k` highest-curvature edges, ties in canonical order.
pub fn highest(g: &Graph, cmap: &CurvatureMap, k: usize) -> Vec<EdgeRef> {
    let mut idx: Vec<usize> = (0..g.edge_count()).collect();
    idx.sort_by(|&a, &b| cmap.values[b].total_cmp(&cmap.values[a]).then(a.cmp(&b)));
    idx.into_iter().take(k).map(|i| g.edges()[i]).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub edges_before: usize,
    pub fit: Option<MixtureFit>,
    pub thresholds: Option<Thresholds>,
    pub budgets: Option<(usize, usize)>,
    pub addition_targets: usize,
    pub additions_applied: Vec<Addition>,
    pub additions_skipped: Vec<SkippedTarget>,
    pub removals_applied: Vec<EdgeRef>,
    pub edges_after: usize,
    pub components_after: usize,
    pub warnings: Vec<String>,
}

impl IterationRecord {
    pub fn changed(&self) -> bool {
        !self.additions_applied.is_empty() || !self.removals_applied.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RewireReport {
    pub schema: &'static str,
    pub config: RewireConfig,
    pub input_edges: usize,
    pub iterations: Vec<IterationRecord>,
    /// Why the run ended before the requested number of rounds, if it did.
    pub stopped_early: Option<String>,
    pub final_edge_count: usize,
    pub histogram_before: Histogram,
    pub histogram_after: Histogram,
}

impl RewireReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is always serializable")
    }

    pub fn total_added(&self) -> usize {
        self.iterations.iter().map(|r| r.additions_applied.len()).sum()
    }

    pub fn total_removed(&self) -> usize {
        self.iterations.iter().map(|r| r.removals_applied.len()).sum()
    }
}

/// Runs the configured rewiring on a copy of `g`.
pub fn afr_rewire(g: &Graph, config: &RewireConfig) -> Result<(Graph, RewireReport)> {
    config.validate()?;
    let mut graph = g.clone();
    let mut rng = SeededRng::new(config.seed);
    let mut records = Vec::new();
    let mut stopped_early = None;
    let initial = compute_all(&graph, config.kind)?;
    let histogram_before = Histogram::freedman_diaconis(config.kind, &initial.values);
    let mut cmap = initial;
    let rounds = config.iterations.rounds();
    for iteration in 1..=rounds {
        if iteration > 1 {
            cmap = compute_all(&graph, config.kind)?;
        }
        let record = run_round(&mut graph, &cmap, config, iteration, &mut rng)?;
        let changed = record.changed();
        records.push(record);
        if !changed {
            if iteration < rounds || config.iterations == Iterations::UntilStable {
                stopped_early = Some(format!("round {iteration} changed nothing"));
            }
            break;
        }
        if iteration == rounds && config.iterations == Iterations::UntilStable {
            stopped_early = Some(format!("round cap {MAX_ROUNDS} reached"));
        }
    }
    let after = compute_all(&graph, config.kind)?;
    let report = RewireReport {
        schema: REPORT_SCHEMA,
        config: config.clone(),
        input_edges: g.edge_count(),
        iterations: records,
        stopped_early,
        final_edge_count: graph.edge_count(),
        histogram_before,
        histogram_after: Histogram::freedman_diaconis(config.kind, &after.values),
    };
    Ok((graph, report))
}

fn run_round(
    graph: &mut Graph,
    cmap: &CurvatureMap,
    config: &RewireConfig,
    iteration: usize,
    rng: &mut SeededRng,
) -> Result<IterationRecord> {
    let mut record = IterationRecord {
        iteration,
        edges_before: graph.edge_count(),
        fit: None,
        thresholds: None,
        budgets: None,
        addition_targets: 0,
        additions_applied: Vec::new(),
        additions_skipped: Vec::new(),
        removals_applied: Vec::new(),
        edges_after: graph.edge_count(),
        components_after: graph.connected_components(),
        warnings: Vec::new(),
    };
    let (targets, selector) = match config.mode {
        RewireMode::Fixed { add, remove } => {
            record.budgets = Some((add, remove));
            if remove > graph.edge_count() {
                record
                    .warnings
                    .push(format!("removal budget {remove} clipped to {}", graph.edge_count()));
            }
            (lowest(graph, cmap, add), RemovalSelector::Budget(remove))
        }
        RewireMode::Heuristic => {
            let fit = match fit_gmm2(&cmap.values, &config.em) {
                Ok(fit) => fit,
                Err(e) => {
                    let msg = format!("threshold fit unavailable ({e}); round skipped");
                    warn!("{msg}");
                    record.warnings.push(msg);
                    return Ok(record);
                }
            };
            let thresholds = Thresholds::from_fit(&fit);
            record.fit = Some(fit);
            record.thresholds = Some(thresholds);
            if !thresholds.usable {
                let msg = "fitted thresholds are unusable; round skipped".to_string();
                warn!("{msg}");
                record.warnings.push(msg);
                return Ok(record);
            }
            let targets: Vec<EdgeRef> = graph
                .edges()
                .iter()
                .zip(&cmap.values)
                .filter(|(_, &x)| x < thresholds.delta_lower)
                .map(|(&e, _)| e)
                .collect();
            (targets, RemovalSelector::Above(thresholds.delta_upper))
        }
    };
    record.addition_targets = targets.len();
    let additions = plan_additions(graph, cmap, &targets, rng)?;
    let removals = plan_removals(graph, cmap, selector)?;
    let new_edges: Vec<EdgeRef> = additions.additions.iter().map(|a| a.new_edge).collect();
    let (added, removed) = graph.apply_edits(&new_edges, &removals);
    debug_assert_eq!((added, removed), (new_edges.len(), removals.len()));
    record.additions_applied = additions.additions;
    record.additions_skipped = additions.skipped;
    record.removals_applied = removals;
    record.edges_after = graph.edge_count();
    record.components_after = graph.connected_components();
    Ok(record)
}
