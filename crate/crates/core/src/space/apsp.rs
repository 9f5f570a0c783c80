use rayon::prelude::*;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

#[derive(PartialEq)]
struct State {
    cost: f64,
    node: usize,
}

impl Eq for State {}

impl Ord for State {
    // min-heap on cost, then node id
    fn cmp(&self, other: &Self) -> Ordering {
        other.cost.total_cmp(&self.cost).then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for State {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All-pairs shortest directed path lengths, row-major, `+∞` when unreachable.
///
/// Runs Dijkstra from every source; weights must be finite and non-negative.
pub fn shortest_path_matrix(n: usize, edges: &[(usize, usize, f64)]) -> Vec<f64> {
    let mut adjacency: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for &(u, v, w) in edges {
        adjacency[u].push((v, w));
    }

    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|source| {
            let mut dist = vec![f64::INFINITY; n];
            let mut heap = BinaryHeap::new();
            dist[source] = 0.0;
            heap.push(State { cost: 0.0, node: source });
            while let Some(State { cost, node }) = heap.pop() {
                if cost > dist[node] {
                    continue;
                }
                for &(next, w) in &adjacency[node] {
                    let candidate = cost + w;
                    if candidate < dist[next] {
                        dist[next] = candidate;
                        heap.push(State { cost: candidate, node: next });
                    }
                }
            }
            dist
        })
        .collect();
    rows.concat()
}
