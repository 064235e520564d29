//! Exact integer transportation via successive shortest augmenting paths.

/// Optimal plan of a balanced transportation problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransportPlan {
    pub cost: u64,
    /// `flow[i][j]` units moved from source `i` to sink `j`.
    pub flow: Vec<Vec<u64>>,
}

struct Arc {
    to: usize,
    cap: u64,
    cost: i64,
}

/// Minimum-cost plan moving `supply` onto `demand` with per-unit `cost[i][j]`.
///
/// Panics if the totals differ or `cost` is not `supply.len() × demand.len()`.
pub fn min_cost_transport(supply: &[u64], demand: &[u64], cost: &[Vec<u64>]) -> TransportPlan {
    assert_eq!(supply.iter().sum::<u64>(), demand.iter().sum::<u64>(), "unbalanced problem");
    assert_eq!(cost.len(), supply.len());
    let (m, n) = (supply.len(), demand.len());
    let source = m + n;
    let sink = m + n + 1;
    let mut arcs: Vec<Arc> = Vec::new();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); m + n + 2];
    let mut add = |arcs: &mut Vec<Arc>, from: usize, to: usize, cap: u64, c: i64| {
        adj[from].push(arcs.len());
        arcs.push(Arc { to, cap, cost: c });
        adj[to].push(arcs.len());
        arcs.push(Arc { to: from, cap: 0, cost: -c });
    };
    for (i, &s) in supply.iter().enumerate() {
        add(&mut arcs, source, i, s, 0);
    }
    let mut cell_arc = vec![vec![0usize; n]; m];
    for (i, row) in cost.iter().enumerate() {
        assert_eq!(row.len(), n);
        for (j, &c) in row.iter().enumerate() {
            cell_arc[i][j] = arcs.len();
            add(&mut arcs, i, m + j, u64::MAX, c as i64);
        }
    }
    for (j, &d) in demand.iter().enumerate() {
        add(&mut arcs, m + j, sink, d, 0);
    }

    let nodes = m + n + 2;
    let mut total: u64 = 0;
    loop {
        // Bellman-Ford; residual costs may be negative.
        let mut dist = vec![i64::MAX; nodes];
        let mut via = vec![usize::MAX; nodes];
        dist[source] = 0;
        for _ in 0..nodes {
            let mut changed = false;
            for u in 0..nodes {
                if dist[u] == i64::MAX {
                    continue;
                }
                for &a in &adj[u] {
                    let arc = &arcs[a];
                    if arc.cap > 0 && dist[u] + arc.cost < dist[arc.to] {
                        dist[arc.to] = dist[u] + arc.cost;
                        via[arc.to] = a;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        if dist[sink] == i64::MAX {
            break;
        }
        let mut push = u64::MAX;
        let mut v = sink;
        while v != source {
            let a = via[v];
            push = push.min(arcs[a].cap);
            v = arcs[a ^ 1].to;
        }
        let mut v = sink;
        while v != source {
            let a = via[v];
            arcs[a].cap -= push;
            arcs[a ^ 1].cap += push;
            v = arcs[a ^ 1].to;
        }
        total += push * dist[sink] as u64;
    }

    let flow = cell_arc
        .iter()
        .map(|row| row.iter().map(|&a| arcs[a ^ 1].cap).collect())
        .collect();
    TransportPlan { cost: total, flow }
}
