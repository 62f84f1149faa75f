mod common;

use afrc::curvature::{compute_all, CurvatureKind};
use afrc::generators;
use afrc::io::labelled_edge_set;
use afrc::motifs;
use afrc::rewiring::{afr_rewire, lowest, plan_additions, Iterations, RewireConfig};
use afrc::rng::SeededRng;

#[test]
fn edge_count_is_conserved() {
    let mut rng = SeededRng::new(21);
    for _ in 0..100 {
        let g = generators::gnp(30, rng.uniform(0.05, 0.4), &mut rng);
        let (add, remove) = (rng.below(6), rng.below(6));
        let (out, report) = afr_rewire(&g, &RewireConfig::fixed(CurvatureKind::Af3, add, remove, 5)).unwrap();
        let r = &report.iterations[0];
        assert_eq!(
            out.edge_count(),
            g.edge_count() + r.additions_applied.len() - r.removals_applied.len()
        );
        assert_eq!(r.additions_applied.len() + r.additions_skipped.len(), add.min(g.edge_count()));
        assert_eq!(r.removals_applied.len(), remove.min(g.edge_count()));
        assert_eq!(out.node_count(), g.node_count());
    }
}

#[test]
fn added_edges_close_a_path_around_the_target() {
    let mut rng = SeededRng::new(22);
    for _ in 0..100 {
        let g = generators::gnp(25, rng.uniform(0.05, 0.3), &mut rng);
        let map = compute_all(&g, CurvatureKind::Af3).unwrap();
        let targets = lowest(&g, &map, 5);
        let plan = plan_additions(&g, &map, &targets, &mut rng).unwrap();
        for a in &plan.additions {
            let t = a.source_edge;
            assert!(!g.contains(a.new_edge));
            // the new edge joins one endpoint to a neighbor of the other
            let (x, y) = (a.new_edge.u, a.new_edge.v);
            let ok = (x == t.u && g.has_edge(y, t.v))
                || (x == t.v && g.has_edge(y, t.u))
                || (y == t.u && g.has_edge(x, t.v))
                || (y == t.v && g.has_edge(x, t.u));
            assert!(ok, "{a:?}");
        }
    }
}

#[test]
fn complete_graphs_gain_nothing() {
    for n in 3..9 {
        let g = generators::complete(n);
        let map = compute_all(&g, CurvatureKind::Af3).unwrap();
        let plan = plan_additions(&g, &map, g.edges(), &mut SeededRng::new(1)).unwrap();
        assert!(plan.additions.is_empty());
        assert_eq!(plan.skipped.len(), g.edge_count());
    }
}

#[test]
fn bridge_addition_crosses_between_cliques() {
    let g = generators::barbell(10);
    let bridge = generators::barbell_bridge(10);
    let map = compute_all(&g, CurvatureKind::Af3).unwrap();
    for seed in 0..20 {
        let plan = plan_additions(&g, &map, &[bridge], &mut SeededRng::new(seed)).unwrap();
        let e = plan.additions[0].new_edge;
        assert!(e.u.index() < 10 && e.v.index() >= 10, "{e}");
    }
}

#[test]
fn barbell_heuristic_raises_connectivity() {
    let g = generators::barbell(10);
    let (out, report) = afr_rewire(&g, &RewireConfig::heuristic(CurvatureKind::Af3, 42)).unwrap();
    assert_eq!((report.total_added(), report.total_removed()), (1, 0));
    assert!(common::algebraic_connectivity(&out) > common::algebraic_connectivity(&g));
    let bridge = generators::barbell_bridge(10);
    assert!(motifs::triangle_count(&out, bridge).unwrap() >= 1);
}

#[test]
fn two_bridge_barbell_runs_two_rounds() {
    let g = generators::two_bridge_barbell(10);
    let config = RewireConfig::heuristic(CurvatureKind::Af3, 7).with_iterations(Iterations::Count(2));
    let (_, report) = afr_rewire(&g, &config).unwrap();
    assert_eq!(report.iterations.len(), 2);
    assert!(report.iterations.iter().all(|r| r.thresholds.is_some()));
}

#[test]
fn same_seed_same_result() {
    let g = generators::gnp(60, 0.1, &mut SeededRng::new(4));
    for kind in [CurvatureKind::Af3, CurvatureKind::Af4] {
        let config = RewireConfig::heuristic(kind, 9).with_iterations(Iterations::UntilStable);
        let (a, ra) = afr_rewire(&g, &config).unwrap();
        let (b, rb) = afr_rewire(&g, &config).unwrap();
        assert_eq!(labelled_edge_set(&a), labelled_edge_set(&b));
        assert_eq!(ra.to_json(), rb.to_json());
    }
}

#[test]
fn rewiring_rejects_the_transport_reference() {
    let g = generators::cycle(5);
    assert!(afr_rewire(&g, &RewireConfig::heuristic(CurvatureKind::OrcRef, 1)).is_err());
}
