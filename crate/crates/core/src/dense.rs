//! One-way-search engine for dense graphs.
//!
//! Maintains a weak topological numbering k: every stored arc (x, y)
//! satisfies k(x) < k(y), and while the graph is acyclic k(v) never
//! exceeds the number of vertices that can reach v. Arcs live in
//! per-vertex bucket heaps keyed by priority; an arc (x, y) is stored at
//! priority k(y) and is re-examined only after k(x) catches up to that
//! priority. Counter/bound pairs on roughly lg n scales ration how often
//! small level gaps may trigger re-examination.
//!
//! Witness parents are recorded only when a level actually increases.
//! That suffices: an arc enters the pending queue only when extracted
//! from its tail's heap, extraction yields arcs only at pops where the
//! tail's level increased (stored priorities always exceed the tail's
//! level at storage time), and the first pop of an insertion raises the
//! head directly. So every queue arc's tail has a parent chain back to
//! the inserted arc's head.

use std::collections::VecDeque;

use crate::order_list::OrderList;
use crate::stream::{
    Arc, EngineError, InsertionOutcome, TraversalCounters, VertexId, WitnessCycle,
};

const NO_PARENT: u32 = u32::MAX;

/// Priority-bucketed arc storage with a low watermark below which all
/// buckets are empty.
///
/// Buckets are kept sparsely so growing the vertex count never
/// reallocates per-heap arrays.
#[derive(Debug, Clone, Default)]
pub struct BucketHeap {
    buckets: std::collections::BTreeMap<u64, Vec<Arc>>,
    low: u64,
    count: usize,
}

impl BucketHeap {
    pub fn new() -> Self {
        BucketHeap {
            buckets: Default::default(),
            low: 1,
            count: 0,
        }
    }

    pub fn low(&self) -> u64 {
        self.low
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.buckets.is_empty()
    }

    /// The watermark steps back when an arc lands between the last
    /// extraction threshold and the previously smallest bucket; the
    /// insert pays for the extra scan distance, so extraction stays O(1)
    /// amortized per arc.
    pub fn insert(&mut self, priority: u64, arc: Arc) {
        self.low = self.low.min(priority);
        self.buckets.entry(priority).or_default().push(arc);
        self.count += 1;
    }

    /// Removes and returns all arcs with priority at most `p`, advancing
    /// the watermark to the next nonempty bucket (or past `p`). Repeated
    /// calls with a non-growing threshold are O(1).
    pub fn extract_upto(&mut self, p: u64) -> Vec<Arc> {
        if p < self.low {
            return Vec::new();
        }
        let mut extracted = Vec::new();
        loop {
            match self.buckets.first_entry() {
                Some(entry) if *entry.key() <= p => extracted.extend(entry.remove()),
                _ => break,
            }
        }
        self.low = self.buckets.keys().next().copied().unwrap_or(p + 1);
        self.count -= extracted.len();
        extracted
    }

    /// Empties the heap, returning every (priority, arc) pair; used when
    /// melding component heaps.
    pub fn drain(&mut self) -> Vec<(u64, Arc)> {
        self.count = 0;
        let buckets = std::mem::take(&mut self.buckets);
        buckets
            .into_iter()
            .flat_map(|(p, arcs)| arcs.into_iter().map(move |a| (p, a)))
            .collect()
    }

    /// All stored arcs, in priority order.
    pub fn iter(&self) -> impl Iterator<Item = Arc> + '_ {
        self.buckets.values().flatten().copied()
    }
}

/// Number of counter scales for n vertices: one per i in 0..=floor(lg n).
fn scale_count(n: u32) -> usize {
    if n == 0 {
        0
    } else {
        n.ilog2() as usize + 1
    }
}

/// Incremental cycle detection and topological ordering by one-way search.
pub struct DenseEngine {
    n: u32,
    k: Vec<u64>,
    tie_index: Vec<i64>,
    index_floor: i64,
    /// b[v][i], c[v][i]: per-scale bound and count
    b: Vec<Vec<u64>>,
    c: Vec<Vec<u64>>,
    out: Vec<BucketHeap>,
    parent: Vec<u32>,
    order: OrderList,
    m: u64,
    counters: TraversalCounters,
    poisoned: bool,
    witness: Option<WitnessCycle>,
}

impl DenseEngine {
    /// All levels 1, bounds and counts 0, tie_index(v) = v - n.
    pub fn new(n: u32) -> Self {
        let n_us = n as usize;
        let scales = scale_count(n);
        DenseEngine {
            n,
            k: vec![1; n_us],
            tie_index: (0..n as i64).map(|v| v - n as i64).collect(),
            index_floor: -(n as i64),
            b: vec![vec![0; scales]; n_us],
            c: vec![vec![0; scales]; n_us],
            out: vec![BucketHeap::new(); n_us],
            parent: vec![NO_PARENT; n_us],
            order: OrderList::new(n),
            m: 0,
            counters: TraversalCounters::default(),
            poisoned: false,
            witness: None,
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

    pub fn is_poisoned(&self) -> bool {
        self.poisoned
    }

    pub fn witness(&self) -> Option<&WitnessCycle> {
        self.witness.as_ref()
    }

    pub fn scales(&self) -> usize {
        scale_count(self.n)
    }

    pub fn level(&self, v: VertexId) -> Result<u64, EngineError> {
        if v >= self.n {
            return Err(EngineError::UnknownVertex(v));
        }
        Ok(self.k[v as usize])
    }

    /// (level, tie index); lexicographic order is topological.
    pub fn order_key(&self, v: VertexId) -> Result<(u64, i64), EngineError> {
        if v >= self.n {
            return Err(EngineError::UnknownVertex(v));
        }
        Ok((self.k[v as usize], self.tie_index[v as usize]))
    }

    /// The maintained vertex list, sorted by (level, tie index).
    pub fn topological_list(&self) -> Vec<VertexId> {
        self.order.to_vec()
    }

    /// Stored arcs (duplicates included), pulled out of the heaps.
    pub fn arcs(&self) -> impl Iterator<Item = Arc> + '_ {
        self.out.iter().flat_map(|h| h.iter())
    }

    pub fn scale_state(&self, v: VertexId, i: usize) -> (u64, u64) {
        (self.b[v as usize][i], self.c[v as usize][i])
    }

    /// New vertex on level 1; a new counter scale is appended to every
    /// vertex whenever floor(lg n) grows.
    pub fn add_vertex(&mut self) -> VertexId {
        let id = self.n;
        self.n += 1;
        let scales = scale_count(self.n);
        self.k.push(1);
        self.index_floor -= 1;
        self.tie_index.push(self.index_floor);
        self.b.push(vec![0; scales]);
        self.c.push(vec![0; scales]);
        for v in 0..id as usize {
            self.b[v].resize(scales, 0);
            self.c[v].resize(scales, 0);
        }
        self.out.push(BucketHeap::new());
        self.parent.push(NO_PARENT);
        let list_id = self.order.add_vertex();
        debug_assert_eq!(list_id, id);
        id
    }

    pub fn insert_arc(&mut self, v: VertexId, w: VertexId) -> Result<InsertionOutcome, EngineError> {
        if self.poisoned {
            return Err(EngineError::Poisoned);
        }
        if v >= self.n {
            return Err(EngineError::UnknownVertex(v));
        }
        if w >= self.n {
            return Err(EngineError::UnknownVertex(w));
        }
        if v == w {
            let witness = WitnessCycle::new(vec![v]);
            self.poisoned = true;
            self.witness = Some(witness.clone());
            return Ok(InsertionOutcome::CycleDetected(witness));
        }
        self.m += 1;
        // even an in-order arc goes through a traversal step: it feeds
        // the counter machinery and is stored at priority k(w) there
        let mut pending: VecDeque<(u32, u32)> = VecDeque::new();
        pending.push_back((v, w));
        while let Some((x, y)) = pending.pop_front() {
            self.counters.arc_traversals += 1;
            if y == v {
                let witness = self.extract_witness(v, w, x);
                self.poisoned = true;
                self.witness = Some(witness.clone());
                return Ok(InsertionOutcome::CycleDetected(witness));
            }
            self.traversal_step(x, y, &mut pending);
        }
        Ok(InsertionOutcome::Accepted)
    }

    /// Processes pending arc (x, y): raises k(y) directly or via the
    /// counter machinery, re-queues out-arcs of y that fall under the
    /// new level, and re-stores (x, y) at priority k(y).
    fn traversal_step(&mut self, x: u32, y: u32, pending: &mut VecDeque<(u32, u32)>) {
        let kx = self.k[x as usize];
        let mut increased = false;
        if kx >= self.k[y as usize] {
            self.k[y as usize] = kx + 1;
            increased = true;
        } else {
            let gap = self.k[y as usize] - kx;
            // gap can only outrun the top scale mid-cycle-insertion,
            // when k is already past its acyclic bound
            let i = (gap.ilog2() as usize).min(self.scales() - 1);
            self.c[y as usize][i] += 1;
            if self.c[y as usize][i] == 3 << (i + 1) {
                self.c[y as usize][i] = 0;
                self.counters.counter_resets += 1;
                let candidate = self.b[y as usize][i] + 3 * (1 << i);
                if candidate > self.k[y as usize] {
                    self.k[y as usize] = candidate;
                    increased = true;
                }
                self.b[y as usize][i] = self.k[y as usize] - (1 << (i + 1));
            }
        }
        let ky = self.k[y as usize];
        if increased {
            self.counters.level_increases += 1;
            self.parent[y as usize] = x;
            self.index_floor -= 1;
            self.tie_index[y as usize] = self.index_floor;
            self.order.move_group(&[y], ky);
            self.counters.reindex_moves += 1;
        }
        for arc in self.out[y as usize].extract_upto(ky) {
            pending.push_back((arc.tail, arc.head));
        }
        self.out[x as usize].insert(ky, Arc::new(x, y));
    }

    /// Cycle closed by traversing (x, v): v -> w -> ... -> x along the
    /// parent out-tree, plus the closing arc (x, v).
    fn extract_witness(&self, v: u32, w: u32, x: u32) -> WitnessCycle {
        let mut chain = Vec::new();
        let mut cur = x;
        loop {
            chain.push(cur);
            if cur == w {
                break;
            }
            let p = self.parent[cur as usize];
            debug_assert!(p != NO_PARENT && p != cur);
            if p == NO_PARENT || p == cur || p == v {
                break;
            }
            cur = p;
        }
        chain.push(v);
        chain.reverse();
        WitnessCycle::new(chain)
    }
}
