//! One-way-search strong-component engine.
//!
//! Two passes per out-of-order insertion: a cycle search floods forward
//! from the new arc's head component, raising every component below the
//! tail's level up to it; the components that can reach the tail through
//! the traversed arcs form the new strong component. After merging, an
//! update pass replays the traversed arcs through the counter/bound
//! machinery on canonical vertices, dropping arcs inside one component
//! and repeats between the same pair.

use std::collections::{HashMap, VecDeque};

use crate::scc::reachable;

use crate::dense::BucketHeap;
use crate::scc::{snapshot, DisjointSets, PairMatrix};
use crate::stream::{Arc, EngineError, InsertionOutcome, TraversalCounters, VertexId};

/// Incremental strong components with a weak topological numbering of
/// components, by one-way search.
pub struct SccDenseEngine {
    n: u32,
    sets: DisjointSets,
    /// level, bounds, counts, heap: valid at canonical vertices only
    k: Vec<u64>,
    b: Vec<Vec<u64>>,
    c: Vec<Vec<u64>>,
    out: Vec<BucketHeap>,
    matrix: PairMatrix,
    m: u64,
    counters: TraversalCounters,
    components_created: u64,
}

fn scale_count(n: u32) -> usize {
    if n == 0 {
        0
    } else {
        n.ilog2() as usize + 1
    }
}

impl SccDenseEngine {
    pub fn new(n: u32) -> Self {
        let n_us = n as usize;
        let scales = scale_count(n);
        SccDenseEngine {
            n,
            sets: DisjointSets::new(n),
            k: vec![1; n_us],
            b: vec![vec![0; scales]; n_us],
            c: vec![vec![0; scales]; n_us],
            out: vec![BucketHeap::new(); n_us],
            matrix: PairMatrix::new(n),
            m: 0,
            counters: TraversalCounters::default(),
            components_created: n as u64,
        }
    }

    pub fn vertex_count(&self) -> u32 {
        self.n
    }

    pub fn arc_count(&self) -> u64 {
        self.m
    }

    pub fn counters(&self) -> &TraversalCounters {
        &self.counters
    }

    /// Components ever in existence, live plus superseded.
    pub fn components_created(&self) -> u64 {
        self.components_created
    }

    pub fn find(&mut self, v: VertexId) -> Result<VertexId, EngineError> {
        if v >= self.n {
            return Err(EngineError::UnknownVertex(v));
        }
        Ok(self.sets.find(v))
    }

    /// Level of v's component.
    pub fn level(&mut self, v: VertexId) -> Result<u64, EngineError> {
        let c = self.find(v)? as usize;
        Ok(self.k[c])
    }

    /// Current partition: members ascending, parts by smallest member.
    pub fn components_snapshot(&mut self) -> Vec<Vec<VertexId>> {
        snapshot(&mut self.sets, self.n)
    }

    /// Stored arcs with original endpoints, pulled out of the heaps.
    pub fn arcs(&self) -> impl Iterator<Item = Arc> + '_ {
        self.out.iter().flat_map(|h| h.iter())
    }

    pub fn insert_arc(&mut self, v: VertexId, w: VertexId) -> Result<InsertionOutcome, EngineError> {
        if v >= self.n {
            return Err(EngineError::UnknownVertex(v));
        }
        if w >= self.n {
            return Err(EngineError::UnknownVertex(w));
        }
        if v == w {
            return Ok(InsertionOutcome::NoOp);
        }
        let u = self.sets.find(v);
        let z = self.sets.find(w);
        if u == z {
            return Ok(InsertionOutcome::NoOp);
        }
        self.m += 1;
        if self.k[u as usize] < self.k[z as usize] {
            let pri = self.k[z as usize];
            self.out[u as usize].insert(pri, Arc::new(v, w));
            return Ok(InsertionOutcome::Accepted);
        }

        // Step 1 (search for cycles): flood forward from z, raising
        // levels below k(u) up to k(u); every traversed arc moves to A.
        let ku = self.k[u as usize];
        let mut s: VecDeque<(u32, u32)> = VecDeque::new();
        let mut a: VecDeque<(u32, u32)> = VecDeque::new();
        s.push_back((v, w));
        while let Some((x, y)) = s.pop_front() {
            a.push_back((x, y));
            self.counters.arc_traversals += 1;
            let fy = self.sets.find(y);
            if self.k[fy as usize] < ku {
                self.k[fy as usize] = ku;
                self.counters.level_increases += 1;
                for arc in self.out[fy as usize].extract_upto(ku) {
                    s.push_back((arc.tail, arc.head));
                }
            }
        }

        // Step 2 (form component): the new component is the canonical
        // vertices that reach u through the traversed arcs. Each is a
        // raised vertex, hence reachable from z, so it lies on a cycle
        // through the new arc; conversely every component member had
        // level below k(u), so its whole path to u was traversed.
        let mut rev: HashMap<u32, Vec<u32>> = HashMap::new();
        for &(x, y) in &a {
            let fx = self.sets.find(x);
            let fy = self.sets.find(y);
            if fx != fy {
                rev.entry(fy).or_default().push(fx);
            }
        }
        let in_comp = reachable(&rev, u);
        let mut merged: Vec<u32> = Vec::new();
        if in_comp.contains(&z) {
            merged = in_comp.into_iter().collect();
            merged.sort_unstable();
            for &t in &merged {
                if t != z {
                    // meld: drain the smaller heap into the larger,
                    // leaving the result in z's slot; bounds and counts
                    // of the designated canonical survive
                    let mut other = std::mem::take(&mut self.out[t as usize]);
                    if other.len() > self.out[z as usize].len() {
                        std::mem::swap(&mut other, &mut self.out[z as usize]);
                    }
                    let target = &mut self.out[z as usize];
                    for (pri, arc) in other.drain() {
                        target.insert(pri, arc);
                    }
                    self.sets.link(z, t);
                }
            }
            self.components_created += 1;
        }

        // Step 3 (update levels, bounds, and counts)
        //
        // An M hit alone does not justify deletion: the arc that set the
        // bit is re-extracted whenever its tail's level rises again and
        // must then be reprocessed, not dropped as its own duplicate.
        // pair_stored records whether a copy of the pair currently sits
        // in a heap; only then is a repeat redundant.
        let mut pair_stored: HashMap<(u32, u32), bool> = HashMap::new();
        while let Some((x, y)) = a.pop_front() {
            self.counters.arc_traversals += 1;
            let fx = self.sets.find(x);
            let fy = self.sets.find(y);
            if fx == fy {
                continue; // dead arc
            }
            if !self.matrix.set(fx, fy) && pair_stored.get(&(fx, fy)) == Some(&true) {
                continue; // redundant repeat between the pair
            }
            if self.k[fx as usize] >= self.k[fy as usize] {
                self.k[fy as usize] = self.k[fx as usize] + 1;
                self.counters.level_increases += 1;
            } else {
                let gap = self.k[fy as usize] - self.k[fx as usize];
                let i = (gap.ilog2() as usize).min(scale_count(self.n) - 1);
                self.c[fy as usize][i] += 1;
                if self.c[fy as usize][i] == 3 << (i + 1) {
                    self.c[fy as usize][i] = 0;
                    self.counters.counter_resets += 1;
                    let candidate = self.b[fy as usize][i] + 3 * (1 << i);
                    if candidate > self.k[fy as usize] {
                        self.k[fy as usize] = candidate;
                        self.counters.level_increases += 1;
                    }
                    self.b[fy as usize][i] = self.k[fy as usize] - (1 << (i + 1));
                }
            }
            let kfy = self.k[fy as usize];
            for arc in self.out[fy as usize].extract_upto(kfy) {
                let fh = self.sets.find(arc.head);
                pair_stored.insert((fy, fh), false);
                a.push_back((arc.tail, arc.head));
            }
            self.out[fx as usize].insert(kfy, Arc::new(x, y));
            pair_stored.insert((fx, fy), true);
        }

        // Step 4 (reset M)
        self.matrix.reset();

        if merged.is_empty() {
            Ok(InsertionOutcome::Accepted)
        } else {
            Ok(InsertionOutcome::ComponentsMerged {
                merged,
                canonical: z,
            })
        }
    }

}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{size_of, tarjan_scc, StaticGraph};
    use proptest::prelude::*;

    #[test]
    fn two_cycle_merges_and_level_reflects_size() {
        let mut e = SccDenseEngine::new(2);
        assert_eq!(e.insert_arc(0, 1).unwrap(), InsertionOutcome::Accepted);
        match e.insert_arc(1, 0).unwrap() {
            InsertionOutcome::ComponentsMerged { merged, canonical } => {
                assert_eq!(merged, vec![0, 1]);
                assert_eq!(canonical, 0);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(e.components_snapshot(), vec![vec![0, 1]]);
        assert!(e.level(0).unwrap() >= 2);
    }

    #[test]
    fn long_cycle_collapses_to_one_component() {
        let n = 10;
        let mut e = SccDenseEngine::new(n);
        for i in 0..n - 1 {
            assert_eq!(e.insert_arc(i, i + 1).unwrap(), InsertionOutcome::Accepted);
        }
        match e.insert_arc(n - 1, 0).unwrap() {
            InsertionOutcome::ComponentsMerged { merged, .. } => {
                assert_eq!(merged.len(), n as usize);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(e.components_snapshot(), vec![(0..n).collect::<Vec<_>>()]);
    }

    #[test]
    fn intra_component_arcs_are_noops_and_never_stored() {
        let mut e = SccDenseEngine::new(3);
        assert_eq!(e.insert_arc(2, 2).unwrap(), InsertionOutcome::NoOp);
        e.insert_arc(0, 1).unwrap();
        e.insert_arc(1, 0).unwrap();
        assert_eq!(e.insert_arc(0, 1).unwrap(), InsertionOutcome::NoOp);
        // nothing with both ends inside the merged component survives
        for arc in e.arcs().collect::<Vec<_>>() {
            let ft = e.find(arc.tail).unwrap();
            let fh = e.find(arc.head).unwrap();
            assert_ne!(ft, fh, "stored intra-component arc {arc}");
        }
    }

    /// Replay, checking partition equality and k(find(v)) <= size(v)
    /// after every insertion.
    fn check_stream(n: u32, arcs: &[(u32, u32)]) {
        let mut e = SccDenseEngine::new(n);
        let mut g = StaticGraph::new(n);
        for &(v, w) in arcs {
            e.insert_arc(v, w).unwrap();
            g.add_arc(v, w);
            // snapshot order is by smallest member, the oracle's is
            // topological; compare as partitions
            let mut oracle = tarjan_scc(&g);
            oracle.sort_by_key(|p| p[0]);
            assert_eq!(
                e.components_snapshot(),
                oracle,
                "partition mismatch after ({v}, {w})"
            );
            for x in 0..n {
                assert!(
                    e.level(x).unwrap() <= size_of(&g, x) as u64,
                    "k(find({x})) exceeds size"
                );
            }
            assert!(e.components_created() <= 2 * n as u64 - 1);
        }
    }

    #[test]
    fn worked_small_streams() {
        check_stream(4, &[(0, 1), (1, 2), (2, 1), (2, 3), (3, 0)]);
        check_stream(5, &[(4, 3), (3, 2), (2, 4), (1, 2), (0, 1), (4, 0), (0, 4)]);
        check_stream(2, &[(1, 0), (0, 1), (1, 0)]);
    }

    proptest! {
        #[test]
        fn matches_tarjan_on_random_streams(
            raw in proptest::collection::vec((0u32..10, 0u32..10), 1..70)
        ) {
            let arcs: Vec<_> = raw.into_iter().filter(|&(a, b)| a != b).collect();
            check_stream(10, &arcs);
        }
    }
}
