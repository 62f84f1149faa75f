//! Exact balanced transportation with integer masses and costs.
//!
//! Solved as a min-cost flow from a super-source through supply nodes,
//! demand nodes and a super-sink, using successive shortest paths with
//! Johnson potentials (dense Dijkstra, since instances are at most a few
//! hundred nodes). Integer data keeps the optimum exact.

const INF: i64 = i64::MAX / 4;

struct Arc {
    to: usize,
    cap: i64,
    cost: i64,
    rev: usize,
}

struct FlowNetwork {
    arcs: Vec<Vec<Arc>>,
}

impl FlowNetwork {
    fn new(n: usize) -> Self {
        Self {
            arcs: (0..n).map(|_| Vec::new()).collect(),
        }
    }

    fn add_arc(&mut self, from: usize, to: usize, cap: i64, cost: i64) {
        let rev_from = self.arcs[to].len();
        let rev_to = self.arcs[from].len();
        self.arcs[from].push(Arc { to, cap, cost, rev: rev_from });
        self.arcs[to].push(Arc {
            to: from,
            cap: 0,
            cost: -cost,
            rev: rev_to,
        });
    }

    /// Pushes as much flow as possible from `s` to `t`; returns
    /// `(flow, cost)`. All forward costs must be non-negative.
    fn min_cost_max_flow(&mut self, s: usize, t: usize) -> (i64, i64) {
        let n = self.arcs.len();
        let mut potential = vec![0i64; n];
        let (mut flow, mut cost) = (0i64, 0i64);
        loop {
            let mut dist = vec![INF; n];
            let mut prev: Vec<Option<(usize, usize)>> = vec![None; n];
            let mut done = vec![false; n];
            dist[s] = 0;
            loop {
                let mut x = None;
                for i in 0..n {
                    if !done[i] && dist[i] < INF && x.is_none_or(|j: usize| dist[i] < dist[j]) {
                        x = Some(i);
                    }
                }
                let Some(x) = x else { break };
                done[x] = true;
                for (k, a) in self.arcs[x].iter().enumerate() {
                    if a.cap <= 0 {
                        continue;
                    }
                    let nd = dist[x] + a.cost + potential[x] - potential[a.to];
                    if nd < dist[a.to] {
                        dist[a.to] = nd;
                        prev[a.to] = Some((x, k));
                    }
                }
            }
            if dist[t] >= INF {
                break;
            }
            for i in 0..n {
                if dist[i] < INF {
                    potential[i] += dist[i];
                }
            }
            let mut push = INF;
            let mut y = t;
            while let Some((x, k)) = prev[y] {
                push = push.min(self.arcs[x][k].cap);
                y = x;
            }
            let mut y = t;
            while let Some((x, k)) = prev[y] {
                let rev = self.arcs[x][k].rev;
                self.arcs[x][k].cap -= push;
                self.arcs[y][rev].cap += push;
                cost += push * self.arcs[x][k].cost;
                y = x;
            }
            flow += push;
        }
        (flow, cost)
    }
}

/// Minimum total cost of moving `supply` onto `demand` where one unit from
/// `i` to `j` costs `cost[i][j]`. Totals must match.
pub fn min_transport_cost(supply: &[u64], demand: &[u64], cost: &[Vec<u64>]) -> u64 {
    let total: u64 = supply.iter().sum();
    assert_eq!(total, demand.iter().sum::<u64>(), "unbalanced transport problem");
    assert_eq!(cost.len(), supply.len());
    let (a, b) = (supply.len(), demand.len());
    let (s, t) = (a + b, a + b + 1);
    let mut net = FlowNetwork::new(a + b + 2);
    for (i, &mass) in supply.iter().enumerate() {
        net.add_arc(s, i, mass as i64, 0);
        assert_eq!(cost[i].len(), b);
        for (j, &c) in cost[i].iter().enumerate() {
            net.add_arc(i, a + j, mass as i64, c as i64);
        }
    }
    for (j, &mass) in demand.iter().enumerate() {
        net.add_arc(a + j, t, mass as i64, 0);
    }
    let (flow, total_cost) = net.min_cost_max_flow(s, t);
    debug_assert_eq!(flow as u64, total);
    total_cost as u64
}
