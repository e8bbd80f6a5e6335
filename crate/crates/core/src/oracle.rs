//! Independent static reference implementations used for property testing.
//!
//! Deliberately naive: these bound test sizes, not production use. The
//! incremental engines are checked against them, so nothing here may share
//! code with the engines.

use std::collections::VecDeque;

use crate::stream::{ArcStream, VertexId};

/// A static adjacency-list digraph.
#[derive(Debug, Clone, Default)]
pub struct StaticGraph {
    pub n: u32,
    pub adjacency: Vec<Vec<VertexId>>,
}

impl StaticGraph {
    pub fn new(n: u32) -> Self {
        StaticGraph {
            n,
            adjacency: vec![Vec::new(); n as usize],
        }
    }

    pub fn add_arc(&mut self, tail: VertexId, head: VertexId) {
        assert!(tail < self.n && head < self.n);
        self.adjacency[tail as usize].push(head);
    }

    pub fn from_arcs<I: IntoIterator<Item = (VertexId, VertexId)>>(n: u32, arcs: I) -> Self {
        let mut g = StaticGraph::new(n);
        for (t, h) in arcs {
            g.add_arc(t, h);
        }
        g
    }
}

/// DFS reverse postorder, which is a topological order when the graph is
/// acyclic. Returns `Err(cycle)` with an explicit back-arc cycle otherwise.
///
/// Start vertices are taken in decreasing id order so an arcless graph
/// yields the identity order.
pub fn static_toposort(g: &StaticGraph) -> Result<Vec<VertexId>, Vec<VertexId>> {
    const WHITE: u8 = 0;
    const GRAY: u8 = 1;
    const BLACK: u8 = 2;
    let n = g.n as usize;
    let mut color = vec![WHITE; n];
    let mut postorder = Vec::with_capacity(n);
    // path of the iterative DFS, used both for control and cycle extraction
    let mut path: Vec<(u32, usize)> = Vec::new();
    for root in (0..g.n).rev() {
        if color[root as usize] != WHITE {
            continue;
        }
        color[root as usize] = GRAY;
        path.push((root, 0));
        while let Some(&mut (v, ref mut next)) = path.last_mut() {
            if *next < g.adjacency[v as usize].len() {
                let w = g.adjacency[v as usize][*next];
                *next += 1;
                match color[w as usize] {
                    WHITE => {
                        color[w as usize] = GRAY;
                        path.push((w, 0));
                    }
                    GRAY => {
                        // back arc (v, w): the cycle is the path segment from w to v
                        let start = path.iter().position(|&(x, _)| x == w).unwrap();
                        return Err(path[start..].iter().map(|&(x, _)| x).collect());
                    }
                    _ => {}
                }
            } else {
                color[v as usize] = BLACK;
                postorder.push(v);
                path.pop();
            }
        }
    }
    postorder.reverse();
    Ok(postorder)
}

/// Single-pass strong components (Tarjan), iterative. Components are
/// returned in topological order of the component DAG, members sorted
/// ascending within each component. Roots are taken in decreasing id
/// order so mutually unconstrained components fall back to id order.
pub fn tarjan_scc(g: &StaticGraph) -> Vec<Vec<VertexId>> {
    let n = g.n as usize;
    const UNSET: u32 = u32::MAX;
    let mut index = vec![UNSET; n];
    let mut lowlink = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<u32> = Vec::new();
    let mut next_index = 0u32;
    let mut components: Vec<Vec<VertexId>> = Vec::new();
    let mut call: Vec<(u32, usize)> = Vec::new();

    for root in (0..g.n).rev() {
        if index[root as usize] != UNSET {
            continue;
        }
        index[root as usize] = next_index;
        lowlink[root as usize] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root as usize] = true;
        call.push((root, 0));
        while let Some(&mut (v, ref mut next)) = call.last_mut() {
            if *next < g.adjacency[v as usize].len() {
                let w = g.adjacency[v as usize][*next];
                *next += 1;
                if index[w as usize] == UNSET {
                    index[w as usize] = next_index;
                    lowlink[w as usize] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w as usize] = true;
                    call.push((w, 0));
                } else if on_stack[w as usize] {
                    lowlink[v as usize] = lowlink[v as usize].min(index[w as usize]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    lowlink[parent as usize] =
                        lowlink[parent as usize].min(lowlink[v as usize]);
                }
                if lowlink[v as usize] == index[v as usize] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w as usize] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    components.push(comp);
                }
            }
        }
    }
    // Tarjan emits components in reverse topological order
    components.reverse();
    components
}

/// Number of vertices with a path to `v`, including `v` itself.
pub fn size_of(g: &StaticGraph, v: VertexId) -> usize {
    let preds = predecessor_lists(g);
    reverse_reach_count(&preds, v)
}

/// `size_of` for every vertex at once.
pub fn all_sizes(g: &StaticGraph) -> Vec<usize> {
    let preds = predecessor_lists(g);
    (0..g.n).map(|v| reverse_reach_count(&preds, v)).collect()
}

fn predecessor_lists(g: &StaticGraph) -> Vec<Vec<VertexId>> {
    let mut preds = vec![Vec::new(); g.n as usize];
    for v in 0..g.n {
        for &w in &g.adjacency[v as usize] {
            preds[w as usize].push(v);
        }
    }
    preds
}

fn reverse_reach_count(preds: &[Vec<VertexId>], v: VertexId) -> usize {
    let mut seen = vec![false; preds.len()];
    let mut queue = VecDeque::new();
    seen[v as usize] = true;
    queue.push_back(v);
    let mut count = 0usize;
    while let Some(x) = queue.pop_front() {
        count += 1;
        for &p in &preds[x as usize] {
            if !seen[p as usize] {
                seen[p as usize] = true;
                queue.push_back(p);
            }
        }
    }
    count
}

/// Replays a stream with a static acyclicity check after each insertion;
/// returns the index of the first event that makes the graph cyclic, or
/// `None` if the whole stream stays acyclic. Ground truth for the
/// incremental engines.
pub fn first_cycle_index(stream: &ArcStream) -> Option<usize> {
    let n = stream.vertex_count();
    let mut g = StaticGraph::new(n);
    for (idx, arc) in stream.events.iter().enumerate() {
        g.add_arc(arc.tail, arc.head);
        if static_toposort(&g).is_err() {
            return Some(idx);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stream::Arc;
    use proptest::prelude::*;

    fn chain(n: u32) -> StaticGraph {
        StaticGraph::from_arcs(n, (0..n - 1).map(|i| (i, i + 1)))
    }

    #[test]
    fn toposort_chain() {
        assert_eq!(static_toposort(&chain(3)).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn toposort_triangle_cycle() {
        let g = StaticGraph::from_arcs(3, [(0, 1), (1, 2), (2, 0)]);
        let cycle = static_toposort(&g).unwrap_err();
        assert_eq!(cycle.len(), 3);
    }

    #[test]
    fn toposort_empty_graph_is_id_order() {
        let g = StaticGraph::new(3);
        assert_eq!(static_toposort(&g).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn scc_two_cycle_plus_isolated() {
        let g = StaticGraph::from_arcs(3, [(0, 1), (1, 0)]);
        assert_eq!(tarjan_scc(&g), vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn scc_dag_is_singletons() {
        assert_eq!(tarjan_scc(&chain(4)).len(), 4);
    }

    #[test]
    fn scc_joined_two_cycles_source_first() {
        let g = StaticGraph::from_arcs(4, [(0, 1), (1, 0), (2, 3), (3, 2), (1, 2)]);
        assert_eq!(tarjan_scc(&g), vec![vec![0, 1], vec![2, 3]]);
        // brute-force mutual reachability agrees
        assert_eq!(tarjan_scc(&g), brute_scc(&g));
    }

    #[test]
    fn size_examples() {
        let g = StaticGraph::new(3);
        assert_eq!(size_of(&g, 1), 1);
        let g = chain(3);
        assert_eq!(size_of(&g, 2), 3);
        let diamond = StaticGraph::from_arcs(4, [(0, 1), (0, 2), (1, 3), (2, 3)]);
        assert_eq!(size_of(&diamond, 3), 4);
    }

    #[test]
    fn first_cycle_examples() {
        let s = ArcStream::new(vec![Arc::new(0, 1), Arc::new(1, 0)]);
        assert_eq!(first_cycle_index(&s), Some(1));
        let s = ArcStream::new(vec![Arc::new(0, 1), Arc::new(1, 2)]);
        assert_eq!(first_cycle_index(&s), None);
        let s = ArcStream::new(vec![
            Arc::new(0, 1),
            Arc::new(1, 2),
            Arc::new(2, 0),
            Arc::new(0, 2),
        ]);
        assert_eq!(first_cycle_index(&s), Some(2));
    }

    fn brute_scc(g: &StaticGraph) -> Vec<Vec<VertexId>> {
        // pairwise mutual reachability partition
        let n = g.n as usize;
        let mut reach = vec![vec![false; n]; n];
        for v in 0..g.n {
            let mut stack = vec![v];
            while let Some(x) = stack.pop() {
                if reach[v as usize][x as usize] {
                    continue;
                }
                reach[v as usize][x as usize] = true;
                stack.extend(g.adjacency[x as usize].iter().copied());
            }
        }
        let mut assigned = vec![false; n];
        let mut comps = Vec::new();
        for v in 0..n {
            if assigned[v] {
                continue;
            }
            let comp: Vec<u32> = (v..n)
                .filter(|&w| reach[v][w] && reach[w][v])
                .map(|w| w as u32)
                .collect();
            for &w in &comp {
                assigned[w as usize] = true;
            }
            comps.push(comp);
        }
        comps
    }

    fn partition_key(mut p: Vec<Vec<VertexId>>) -> Vec<Vec<VertexId>> {
        p.sort_by_key(|c| c[0]);
        p
    }

    #[test]
    fn tarjan_matches_brute_force_exhaustively_on_n4() {
        // all 2^12 labeled digraphs on 4 vertices
        let pairs: Vec<(u32, u32)> = (0..4u32)
            .flat_map(|a| (0..4u32).filter(move |&b| b != a).map(move |b| (a, b)))
            .collect();
        assert_eq!(pairs.len(), 12);
        for mask in 0u32..(1 << 12) {
            let arcs = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &p)| p);
            let g = StaticGraph::from_arcs(4, arcs);
            assert_eq!(
                partition_key(tarjan_scc(&g)),
                partition_key(brute_scc(&g)),
                "mask {mask}"
            );
        }
    }

    proptest! {
        #[test]
        fn tarjan_matches_brute_force_random_n12(
            raw in proptest::collection::vec((0u32..12, 0u32..12), 0..60)
        ) {
            let arcs: Vec<_> = raw.into_iter().filter(|&(a, b)| a != b).collect();
            let g = StaticGraph::from_arcs(12, arcs);
            prop_assert_eq!(partition_key(tarjan_scc(&g)), partition_key(brute_scc(&g)));
        }

        #[test]
        fn toposort_places_every_arc_forward(
            raw in proptest::collection::vec((0u32..30, 0u32..30), 0..120)
        ) {
            let arcs: Vec<_> = raw.into_iter().filter(|&(a, b)| a != b).collect();
            let g = StaticGraph::from_arcs(30, arcs.iter().copied());
            if let Ok(order) = static_toposort(&g) {
                let mut pos = vec![0usize; 30];
                for (p, &v) in order.iter().enumerate() {
                    pos[v as usize] = p;
                }
                for &(a, b) in &arcs {
                    prop_assert!(pos[a as usize] < pos[b as usize]);
                }
            }
        }

        #[test]
        fn size_lemma_predecessors(
            raw in proptest::collection::vec((0u32..15, 0u32..15), 0..40)
        ) {
            // if v has j predecessors each of size >= s in an acyclic graph,
            // size_of(v) >= s + j
            let arcs: Vec<_> = raw
                .into_iter()
                .filter(|&(a, b)| a < b) // forward arcs only: acyclic
                .collect();
            let mut uniq = arcs.clone();
            uniq.sort_unstable();
            uniq.dedup();
            let g = StaticGraph::from_arcs(15, uniq.iter().copied());
            let sizes = all_sizes(&g);
            for v in 0..15u32 {
                let preds: Vec<u32> = uniq
                    .iter()
                    .filter(|&&(_, h)| h == v)
                    .map(|&(t, _)| t)
                    .collect();
                if preds.is_empty() {
                    continue;
                }
                let j = preds.len();
                let s = preds.iter().map(|&p| sizes[p as usize]).min().unwrap();
                prop_assert!(sizes[v as usize] >= s + j);
            }
        }
    }
}
