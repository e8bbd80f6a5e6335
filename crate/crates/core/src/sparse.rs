//! Two-way-search engine for sparse graphs.
//!
//! Maintains a lexicographic (level, index) numbering whose order is
//! topological while the graph stays acyclic. Inserting an arc (v, w) that
//! is out of order triggers a backward depth-first search from v over
//! same-level in-arcs, budgeted at Δ arc traversals; if the budget is hit,
//! w jumps one level above v instead. A forward search from w then raises
//! every vertex reachable below w's new level, and the visited vertices
//! are re-indexed with fresh indices below all existing ones.
//!
//! Both searches grow parent trees so a detected cycle can be returned
//! explicitly. Searches use explicit stacks; recursion depth never depends
//! on the call stack.

use std::collections::HashSet;

use crate::order_list::OrderList;
use crate::stream::{
    Arc, EngineError, InsertionOutcome, TraversalCounters, VertexId, WitnessCycle,
};

const NO_PARENT: u32 = u32::MAX;

/// Smallest integer `t` with `t*t >= m`.
pub(crate) fn ceil_sqrt(m: u64) -> u64 {
    if m == 0 {
        return 0;
    }
    let mut t = (m as f64).sqrt() as u64;
    while t.saturating_mul(t) >= m {
        t -= 1;
        if t == 0 {
            break;
        }
    }
    while t * t < m {
        t += 1;
    }
    t
}

/// Smallest integer `t` with `t^3 >= n^2`, i.e. `ceil(n^(2/3))`.
pub(crate) fn ceil_pow_2_3(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let sq = (n as u128) * (n as u128);
    let mut t = (n as f64).powf(2.0 / 3.0) as u64;
    while t > 0 && (t as u128).pow(3) >= sq {
        t -= 1;
    }
    while (t as u128).pow(3) < sq {
        t += 1;
    }
    t
}

/// Δ = min{ceil(m^(1/2)), ceil(n^(2/3))}, floored at 1.
pub fn delta_for(n: u64, m: u64) -> u64 {
    ceil_sqrt(m).min(ceil_pow_2_3(n)).max(1)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum DeltaMode {
    /// Δ fixed at construction (m known in advance, or pinned by a test).
    Fixed,
    /// n and m unknown in advance: recompute Δ when either doubles,
    /// replace it only if it doubles.
    Adaptive { last_n: u64, last_m: u64 },
}

/// The backward-search arc budget and its adjustment rule.
#[derive(Debug, Clone, Copy)]
pub(crate) struct DeltaPolicy {
    delta: u64,
    mode: DeltaMode,
}

impl DeltaPolicy {
    /// Fixed Δ from `m_hint` when given, otherwise adaptive from Δ = 1.
    pub fn from_hint(n: u32, m_hint: Option<u64>) -> Self {
        match m_hint {
            Some(m) => DeltaPolicy {
                delta: delta_for(n as u64, m),
                mode: DeltaMode::Fixed,
            },
            None => DeltaPolicy {
                delta: 1,
                mode: DeltaMode::Adaptive {
                    last_n: (n as u64).max(1),
                    last_m: 1,
                },
            },
        }
    }

    pub fn fixed(delta: u64) -> Self {
        assert!(delta >= 1);
        DeltaPolicy {
            delta,
            mode: DeltaMode::Fixed,
        }
    }

    pub fn delta(&self) -> u64 {
        self.delta
    }

    /// Called after n or m changes; recomputes when either has doubled
    /// and replaces Δ only if the recomputed value has doubled too.
    pub fn observe(&mut self, n: u64, m: u64) {
        if let DeltaMode::Adaptive { last_n, last_m } = self.mode {
            let m = m.max(1);
            if n >= 2 * last_n || m >= 2 * last_m {
                let candidate = delta_for(n, m);
                if candidate >= 2 * self.delta {
                    self.delta = candidate;
                }
                self.mode = DeltaMode::Adaptive {
                    last_n: n,
                    last_m: m,
                };
            }
        }
    }
}

/// Incremental cycle detection and topological ordering by two-way search.
pub struct SparseEngine {
    n: u32,
    level: Vec<u64>,
    index: Vec<i64>,
    index_floor: i64,
    /// out(v): heads w of stored arcs (v, w), in insertion order
    out: Vec<Vec<u32>>,
    /// in(v): tails u of stored arcs (u, v) with k(u) = k(v)
    in_same_level: Vec<Vec<u32>>,
    stored: HashSet<(u32, u32)>,
    m: u64,
    delta_policy: DeltaPolicy,
    order: OrderList,
    marked: Vec<bool>,
    bparent: Vec<u32>,
    fparent: Vec<u32>,
    counters: TraversalCounters,
    last_backward_arcs: u64,
    poisoned: bool,
    witness: Option<WitnessCycle>,
}

enum SearchHit {
    /// Backward traversal reached w via arc (w, y).
    Backward { y: u32 },
    /// Forward traversal of (x, y) hit v or a member of B.
    Forward { x: u32, y: u32 },
}

impl SparseEngine {
    /// All levels 1, i(v) = v - n, Δ fixed from `m_hint` when given,
    /// adaptive otherwise.
    pub fn new(n: u32, m_hint: Option<u64>) -> Self {
        Self::with_policy(n, DeltaPolicy::from_hint(n, m_hint))
    }

    /// Engine with a pinned Δ, used by tests and the adversarial replays.
    pub fn with_delta(n: u32, delta: u64) -> Self {
        Self::with_policy(n, DeltaPolicy::fixed(delta))
    }

    fn with_policy(n: u32, delta_policy: DeltaPolicy) -> Self {
        let n_us = n as usize;
        SparseEngine {
            n,
            level: vec![1; n_us],
            index: (0..n as i64).map(|v| v - n as i64).collect(),
            index_floor: -(n as i64),
            out: vec![Vec::new(); n_us],
            in_same_level: vec![Vec::new(); n_us],
            stored: HashSet::new(),
            m: 0,
            delta_policy,
            order: OrderList::new(n),
            marked: vec![false; n_us],
            bparent: vec![NO_PARENT; n_us],
            fparent: vec![NO_PARENT; n_us],
            counters: TraversalCounters::default(),
            last_backward_arcs: 0,
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

    pub fn delta(&self) -> u64 {
        self.delta_policy.delta()
    }

    pub fn counters(&self) -> &TraversalCounters {
        &self.counters
    }

    pub fn index_floor(&self) -> i64 {
        self.index_floor
    }

    /// Arcs traversed by the most recent backward search (always <= Δ).
    pub fn last_backward_arcs(&self) -> u64 {
        self.last_backward_arcs
    }

    pub fn is_poisoned(&self) -> bool {
        self.poisoned
    }

    /// The witness that poisoned the engine, if any.
    pub fn witness(&self) -> Option<&WitnessCycle> {
        self.witness.as_ref()
    }

    /// Stored arcs, in no particular order.
    pub fn arcs(&self) -> impl Iterator<Item = Arc> + '_ {
        self.stored.iter().map(|&(t, h)| Arc::new(t, h))
    }

    /// (level, index) pair; lexicographic order on these is topological.
    pub fn order_key(&self, v: VertexId) -> Result<(u64, i64), EngineError> {
        if v >= self.n {
            return Err(EngineError::UnknownVertex(v));
        }
        Ok((self.level[v as usize], self.index[v as usize]))
    }

    pub fn max_level(&self) -> u64 {
        self.level.iter().copied().max().unwrap_or(1)
    }

    /// The maintained vertex list, sorted by (level, index).
    pub fn topological_list(&self) -> Vec<VertexId> {
        self.order.to_vec()
    }

    /// New vertex on level 1 with a fresh smallest index.
    pub fn add_vertex(&mut self) -> VertexId {
        let id = self.n;
        self.n += 1;
        self.level.push(1);
        self.index_floor -= 1;
        self.index.push(self.index_floor);
        self.out.push(Vec::new());
        self.in_same_level.push(Vec::new());
        self.marked.push(false);
        self.bparent.push(NO_PARENT);
        self.fparent.push(NO_PARENT);
        let list_id = self.order.add_vertex();
        debug_assert_eq!(list_id, id);
        self.maybe_adapt_delta();
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
        if self.stored.contains(&(v, w)) {
            return Ok(InsertionOutcome::NoOp);
        }

        // Step 1 (test order): in-order arcs skip straight to insertion.
        let kv = self.level[v as usize];
        if (kv, self.index[v as usize]) < (self.level[w as usize], self.index[w as usize]) {
            self.store_arc(v, w);
            return Ok(InsertionOutcome::Accepted);
        }

        self.bparent[v as usize] = v;
        let mut b: Vec<u32> = Vec::new();
        let backward = self.backward_search(v, w);
        let result = match backward {
            BackwardEnd::Cycle(hit) => {
                let witness = self.extract_witness(v, w, hit);
                self.poisoned = true;
                self.witness = Some(witness.clone());
                return Ok(InsertionOutcome::CycleDetected(witness));
            }
            BackwardEnd::Completed(found) => {
                b = found;
                if self.level[w as usize] == kv {
                    Ok(()) // same level: skip the forward search
                } else {
                    // k(w) < k(v): raise w to v's level and search forward
                    self.level[w as usize] = kv;
                    self.counters.level_increases += 1;
                    self.in_same_level[w as usize].clear();
                    Err(())
                }
            }
            BackwardEnd::Aborted => {
                // w jumps one level above v; B is discarded
                self.level[w as usize] = kv + 1;
                self.counters.level_increases += 1;
                self.in_same_level[w as usize].clear();
                Err(())
            }
        };

        let mut f: Vec<u32> = Vec::new();
        if result.is_err() {
            // Step 3 (forward search)
            self.fparent[w as usize] = w;
            match self.forward_search(v, w) {
                Ok(found) => f = found,
                Err(hit) => {
                    let witness = self.extract_witness(v, w, hit);
                    self.poisoned = true;
                    self.witness = Some(witness.clone());
                    return Ok(InsertionOutcome::CycleDetected(witness));
                }
            }
        }

        // Step 4 (re-index): L = B & F gets fresh decreasing indices,
        // assigned from the rear, then moves to the front of its level.
        let mut l = b;
        l.extend_from_slice(&f);
        for &x in l.iter().rev() {
            self.index_floor -= 1;
            self.index[x as usize] = self.index_floor;
        }
        self.counters.reindex_moves += l.len() as u64;
        if !l.is_empty() {
            let k_new = self.level[w as usize];
            debug_assert!(l.iter().all(|&x| self.level[x as usize] == k_new));
            self.order.move_group(&l, k_new);
        }

        self.clear_scratch();

        // Step 5 (insert arc)
        self.store_arc(v, w);
        Ok(InsertionOutcome::Accepted)
    }

    fn store_arc(&mut self, v: u32, w: u32) {
        self.out[v as usize].push(w);
        if self.level[v as usize] == self.level[w as usize] {
            self.in_same_level[w as usize].push(v);
        }
        self.stored.insert((v, w));
        self.m += 1;
        self.maybe_adapt_delta();
    }

    fn maybe_adapt_delta(&mut self) {
        self.delta_policy.observe(self.n as u64, self.m);
    }

    /// Step 2: depth-first backward search from v over same-level
    /// in-arcs, appending vertices to B post-visit.
    fn backward_search(&mut self, v: u32, w: u32) -> BackwardEnd {
        let mut b = Vec::new();
        let mut arcs = 0u64;
        self.last_backward_arcs = 0;
        self.marked[v as usize] = true;
        let mut stack: Vec<(u32, usize)> = vec![(v, 0)];
        while let Some(&mut (y, ref mut next)) = stack.last_mut() {
            if *next < self.in_same_level[y as usize].len() {
                let x = self.in_same_level[y as usize][*next];
                *next += 1;
                // Btraverse(x, y)
                if x == w {
                    return BackwardEnd::Cycle(SearchHit::Backward { y });
                }
                arcs += 1;
                self.counters.arc_traversals += 1;
                self.last_backward_arcs = arcs;
                if arcs >= self.delta_policy.delta() {
                    self.counters.backward_aborts += 1;
                    for &z in &b {
                        self.marked[z as usize] = false;
                    }
                    for &(z, _) in &stack {
                        self.marked[z as usize] = false;
                    }
                    return BackwardEnd::Aborted;
                }
                if !self.marked[x as usize] {
                    self.marked[x as usize] = true;
                    self.bparent[x as usize] = y;
                    stack.push((x, 0));
                }
            } else {
                stack.pop();
                b.push(y);
            }
        }
        BackwardEnd::Completed(b)
    }

    /// Step 3: depth-first forward search from w raising every reachable
    /// vertex below k(w) to k(w); F is built in reverse finish order.
    fn forward_search(&mut self, v: u32, w: u32) -> Result<Vec<u32>, SearchHit> {
        let kw = self.level[w as usize];
        let mut finish_order = Vec::new();
        let mut stack: Vec<(u32, usize)> = vec![(w, 0)];
        while let Some(&mut (x, ref mut next)) = stack.last_mut() {
            if *next < self.out[x as usize].len() {
                let y = self.out[x as usize][*next];
                *next += 1;
                // Ftraverse(x, y)
                self.counters.arc_traversals += 1;
                if y == v || self.marked[y as usize] {
                    return Err(SearchHit::Forward { x, y });
                }
                if self.level[y as usize] < kw {
                    self.level[y as usize] = kw;
                    self.counters.level_increases += 1;
                    self.in_same_level[y as usize].clear();
                    self.in_same_level[y as usize].push(x);
                    self.fparent[y as usize] = x;
                    stack.push((y, 0));
                } else if self.level[y as usize] == kw {
                    self.in_same_level[y as usize].push(x);
                }
            } else {
                stack.pop();
                finish_order.push(x);
            }
        }
        finish_order.reverse(); // F = [x] & F prepends at finish
        Ok(finish_order)
    }

    fn extract_witness(&self, v: u32, w: u32, hit: SearchHit) -> WitnessCycle {
        let mut vertices = Vec::new();
        match hit {
            SearchHit::Backward { y } => {
                // cycle: w -> y -> (bparent path) -> v, closed by (v, w)
                vertices.push(w);
                let mut cur = y;
                loop {
                    vertices.push(cur);
                    if cur == v {
                        break;
                    }
                    let p = self.bparent[cur as usize];
                    debug_assert!(p != NO_PARENT);
                    if p == NO_PARENT || p == cur {
                        break;
                    }
                    cur = p;
                }
            }
            SearchHit::Forward { x, y } => {
                // cycle: w -> (fparent path reversed) -> x -> y ->
                // (bparent path) -> v, closed by (v, w)
                let mut up = Vec::new();
                let mut cur = x;
                loop {
                    up.push(cur);
                    if cur == w {
                        break;
                    }
                    let p = self.fparent[cur as usize];
                    debug_assert!(p != NO_PARENT);
                    if p == NO_PARENT || p == cur {
                        break;
                    }
                    cur = p;
                }
                up.reverse();
                vertices.extend_from_slice(&up);
                let mut cur = y;
                loop {
                    vertices.push(cur);
                    if cur == v {
                        break;
                    }
                    let p = self.bparent[cur as usize];
                    debug_assert!(p != NO_PARENT);
                    if p == NO_PARENT || p == cur {
                        break;
                    }
                    cur = p;
                }
            }
        }
        WitnessCycle::new(vertices)
    }

    fn clear_scratch(&mut self) {
        // marks and parents are cleared eagerly after every insertion
        for flag in &mut self.marked {
            *flag = false;
        }
        for p in &mut self.bparent {
            *p = NO_PARENT;
        }
        for p in &mut self.fparent {
            *p = NO_PARENT;
        }
    }
}

enum BackwardEnd {
    Completed(Vec<u32>),
    Aborted,
    Cycle(SearchHit),
}
