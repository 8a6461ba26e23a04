//! Weighted-graph helpers: adjacency lists, Dijkstra, all-pairs distances.

use crate::scalar::Scalar;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Undirected edge list with positive lengths, plus an adjacency view.
#[derive(Clone, Debug)]
pub struct GraphData<T> {
    pub edges: Vec<(usize, usize, T)>,
    pub adjacency: Vec<Vec<(usize, T)>>,
}

impl<T: Scalar> GraphData<T> {
    pub fn new(n: usize, edges: Vec<(usize, usize, T)>) -> Self {
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b, len) in &edges {
            adjacency[a].push((b, len));
            adjacency[b].push((a, len));
        }
        for row in &mut adjacency {
            row.sort_by(|x, y| x.0.cmp(&y.0));
        }
        GraphData { edges, adjacency }
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }
}

/// Min-heap entry ordered by cost then vertex index, so ties resolve
/// deterministically.
struct HeapEntry<T> {
    cost: T,
    node: usize,
}

impl<T: Scalar> PartialEq for HeapEntry<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cost == other.cost && self.node == other.node
    }
}
impl<T: Scalar> Eq for HeapEntry<T> {}
impl<T: Scalar> Ord for HeapEntry<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        // Reverse: BinaryHeap is a max-heap, we want smallest cost first.
        other
            .cost
            .partial_cmp(&self.cost)
            .expect("finite edge costs")
            .then(other.node.cmp(&self.node))
    }
}
impl<T: Scalar> PartialOrd for HeapEntry<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Single-source shortest paths over explicit adjacency with a cost per
/// edge supplied by `edge_cost` (so callers can reweight edges without
/// rebuilding the graph). Returns (distances, predecessor).
pub fn dijkstra_by<T: Scalar>(
    adjacency: &[Vec<(usize, T)>],
    source: usize,
    mut edge_cost: impl FnMut(usize, usize, T) -> T,
) -> (Vec<T>, Vec<usize>) {
    let n = adjacency.len();
    let mut dist = vec![T::infinity(); n];
    let mut prev = vec![usize::MAX; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[source] = T::zero();
    heap.push(HeapEntry {
        cost: T::zero(),
        node: source,
    });
    while let Some(HeapEntry { cost, node }) = heap.pop() {
        if done[node] {
            continue;
        }
        done[node] = true;
        for &(next, len) in &adjacency[node] {
            let step = edge_cost(node, next, len);
            let cand = cost + step;
            if cand < dist[next] {
                dist[next] = cand;
                prev[next] = node;
                heap.push(HeapEntry {
                    cost: cand,
                    node: next,
                });
            }
        }
    }
    (dist, prev)
}

/// Shortest-path distances from `source` using the stored edge lengths.
pub fn dijkstra<T: Scalar>(graph: &GraphData<T>, source: usize) -> Vec<T> {
    dijkstra_by(&graph.adjacency, source, |_, _, len| len).0
}

/// Reconstructs the vertex sequence source → target from a predecessor
/// array produced by `dijkstra_by`.
pub fn walk_back(prev: &[usize], source: usize, target: usize) -> Vec<usize> {
    let mut path = vec![target];
    let mut at = target;
    while at != source {
        at = prev[at];
        path.push(at);
    }
    path.reverse();
    path
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shortest_paths_on_a_square() {
        // 4-cycle with unit edges: opposite corners at distance 2.
        let g = GraphData::new(
            4,
            vec![
                (0, 1, 1.0f64),
                (1, 2, 1.0),
                (2, 3, 1.0),
                (3, 0, 1.0),
            ],
        );
        let d = dijkstra(&g, 0);
        assert_eq!(d, vec![0.0, 1.0, 2.0, 1.0]);
    }

    #[test]
    fn predecessors_reconstruct_a_path() {
        let g = GraphData::new(3, vec![(0, 1, 1.0f64), (1, 2, 1.0)]);
        let (_, prev) = dijkstra_by(&g.adjacency, 0, |_, _, len| len);
        assert_eq!(walk_back(&prev, 0, 2), vec![0, 1, 2]);
    }
}
