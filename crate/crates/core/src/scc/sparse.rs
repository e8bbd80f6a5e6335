//! Two-way-search strong-component engine.
//!
//! Runs the budgeted backward/forward searches of the sparse engine over
//! canonical component vertices. Instead of stopping on a cycle, the
//! insertion records every surviving traversed arc; the canonical
//! vertices with a recorded path both from the head's component and to
//! the tail's component form the new strong component and are united.
//! Arcs whose endpoints have merged, and repeat arcs between the same
//! pair of components, are deleted on sight during traversal; a
//! journaled pair matrix identifies the repeats.

use std::collections::HashMap;

use crate::scc::{reachable, snapshot, DisjointSets, PairMatrix};
use crate::sparse::DeltaPolicy;
use crate::stream::{EngineError, InsertionOutcome, TraversalCounters, VertexId};

const NONE: u32 = u32::MAX;

/// Incremental strong components with topologically ordered component
/// keys, by two-way search.
pub struct SccSparseEngine {
    n: u32,
    sets: DisjointSets,
    /// level, index, arc lists: valid at canonical vertices only
    level: Vec<u64>,
    index: Vec<i64>,
    index_floor: i64,
    /// out(t): stored arcs (x, y) with find(x) = t, original endpoints
    out: Vec<Vec<(u32, u32)>>,
    /// in(t): stored arcs (x, y) with find(y) = t and equal levels
    inl: Vec<Vec<(u32, u32)>>,
    m: u64,
    delta_policy: DeltaPolicy,
    matrix: PairMatrix,
    parent: Vec<u32>,
    parent_touched: Vec<u32>,
    /// surviving arcs traversed by the current insertion's searches, as
    /// canonical (tail, head) pairs
    traversed: Vec<(u32, u32)>,
    counters: TraversalCounters,
    components_created: u64,
}

enum BackwardEnd {
    Completed,
    Aborted,
}

impl SccSparseEngine {
    pub fn new(n: u32, m_hint: Option<u64>) -> Self {
        Self::with_policy(n, DeltaPolicy::from_hint(n, m_hint))
    }

    pub fn with_delta(n: u32, delta: u64) -> Self {
        Self::with_policy(n, DeltaPolicy::fixed(delta))
    }

    fn with_policy(n: u32, delta_policy: DeltaPolicy) -> Self {
        let n_us = n as usize;
        SccSparseEngine {
            n,
            sets: DisjointSets::new(n),
            level: vec![1; n_us],
            index: (0..n as i64).map(|v| v - n as i64).collect(),
            index_floor: -(n as i64),
            out: vec![Vec::new(); n_us],
            inl: vec![Vec::new(); n_us],
            m: 0,
            delta_policy,
            matrix: PairMatrix::new(n),
            parent: vec![NONE; n_us],
            parent_touched: Vec::new(),
            traversed: Vec::new(),
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

    pub fn delta(&self) -> u64 {
        self.delta_policy.delta()
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

    /// (level, index) of v's component; lexicographic order on these is
    /// topological across components.
    pub fn order_key(&mut self, v: VertexId) -> Result<(u64, i64), EngineError> {
        let c = self.find(v)? as usize;
        Ok((self.level[c], self.index[c]))
    }

    pub fn max_level(&mut self) -> u64 {
        (0..self.n)
            .map(|v| {
                let c = self.sets.find(v) as usize;
                self.level[c]
            })
            .max()
            .unwrap_or(1)
    }

    /// Current partition: members ascending, parts by smallest member.
    pub fn components_snapshot(&mut self) -> Vec<Vec<VertexId>> {
        snapshot(&mut self.sets, self.n)
    }

    /// Stored arcs as (tail, head) with original endpoints. Lazily
    /// deleted dead arcs may still appear until a search touches them.
    pub fn arcs(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.out.iter().flatten().copied()
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

        // Step 1 (test order)
        if (self.level[u as usize], self.index[u as usize])
            < (self.level[z as usize], self.index[z as usize])
        {
            self.store_arc(v, w);
            return Ok(InsertionOutcome::Accepted);
        }

        // Step 2 (search backward)
        self.touch_parent(u, u);
        self.touch_parent(z, z);
        let mut b: Vec<u32> = Vec::new();
        let outcome = self.backward_search(u, z, &mut b);
        let run_forward = match outcome {
            BackwardEnd::Aborted => true,
            BackwardEnd::Completed => {
                if self.level[z as usize] == self.level[u as usize] {
                    false
                } else {
                    self.level[z as usize] = self.level[u as usize];
                    self.counters.level_increases += 1;
                    self.inl[z as usize].clear();
                    true
                }
            }
        };

        // Step 3 (search forward)
        let mut f: Vec<u32> = Vec::new();
        if run_forward {
            self.forward_search(z, &mut f);
        }

        // Step 4 (form component): a canonical vertex is in the new
        // component exactly when the traversed arcs give a path from z
        // to it and a path from it to u. (Both searches traverse every
        // arc on every such two-legged route, in all three level cases.)
        let mut fwd_adj: HashMap<u32, Vec<u32>> = HashMap::new();
        let mut rev_adj: HashMap<u32, Vec<u32>> = HashMap::new();
        for &(a, bb) in &self.traversed {
            fwd_adj.entry(a).or_default().push(bb);
            rev_adj.entry(bb).or_default().push(a);
        }
        let mut l = b.clone();
        l.extend_from_slice(&f);
        let mut merged: Vec<u32> = Vec::new();
        let reaches_u = reachable(&rev_adj, u);
        if reaches_u.contains(&z) {
            let from_z = reachable(&fwd_adj, z);
            merged = reaches_u.intersection(&from_z).copied().collect();
            merged.sort_unstable();
            for &t in &merged {
                if t != z {
                    let moved_out = std::mem::take(&mut self.out[t as usize]);
                    self.out[z as usize].extend(moved_out);
                    let moved_in = std::mem::take(&mut self.inl[t as usize]);
                    self.inl[z as usize].extend(moved_in);
                    self.sets.link(z, t);
                }
            }
            self.components_created += 1;
            // the union survives on L under z so it gets a fresh index;
            // the swallowed components drop off
            l.retain(|&x| x == z || !from_z.contains(&x) || !reaches_u.contains(&x));
        }

        // Step 5 (re-index)
        for &x in l.iter().rev() {
            self.index_floor -= 1;
            self.index[x as usize] = self.index_floor;
        }
        self.counters.reindex_moves += l.len() as u64;

        while let Some(t) = self.parent_touched.pop() {
            self.parent[t as usize] = NONE;
        }
        self.matrix.reset();
        self.traversed.clear();

        // Step 6 (add arc)
        if self.sets.find(v) != self.sets.find(w) {
            self.store_arc(v, w);
        }
        if merged.is_empty() {
            Ok(InsertionOutcome::Accepted)
        } else {
            Ok(InsertionOutcome::ComponentsMerged {
                merged,
                canonical: z,
            })
        }
    }

    fn store_arc(&mut self, v: u32, w: u32) {
        let fv = self.sets.find(v) as usize;
        let fw = self.sets.find(w) as usize;
        self.out[fv].push((v, w));
        if self.level[fv] == self.level[fw] {
            self.inl[fw].push((v, w));
        }
        self.m += 1;
        self.delta_policy.observe(self.n as u64, self.m);
    }

    fn touch_parent(&mut self, t: u32, value: u32) {
        self.parent[t as usize] = value;
        self.parent_touched.push(t);
    }

    /// Depth-first backward search from u over same-level in-arcs of
    /// components, appending finished components to B. Deletes dead and
    /// duplicate arcs, records surviving traversals; aborts after Δ
    /// surviving arc traversals.
    fn backward_search(&mut self, u: u32, z: u32, b: &mut Vec<u32>) -> BackwardEnd {
        let mut arcs = 0u64;
        let mut stack: Vec<(u32, usize)> = vec![(u, 0)];
        while let Some(&mut (t, ref mut cursor)) = stack.last_mut() {
            if *cursor < self.inl[t as usize].len() {
                let (x, y) = self.inl[t as usize][*cursor];
                // EBtraverse(x, y), with find(y) = t
                let fx = self.sets.find(x);
                debug_assert_eq!(self.sets.find(y), t);
                self.counters.arc_traversals += 1;
                if fx == t || self.matrix.test(fx, t) {
                    self.inl[t as usize].swap_remove(*cursor);
                    Self::remove_arc(&mut self.out[fx as usize], (x, y));
                    continue;
                }
                *cursor += 1;
                self.matrix.set(fx, t);
                self.traversed.push((fx, t));
                arcs += 1;
                if arcs >= self.delta_policy.delta() {
                    // budget hit: z jumps above u and B is discarded
                    // (traversal records stay: they are real arcs)
                    self.counters.backward_aborts += 1;
                    self.level[z as usize] = self.level[u as usize] + 1;
                    self.counters.level_increases += 1;
                    self.inl[z as usize].clear();
                    b.clear();
                    return BackwardEnd::Aborted;
                }
                if self.parent[fx as usize] == NONE {
                    self.touch_parent(fx, t);
                    stack.push((fx, 0));
                }
            } else {
                stack.pop();
                b.push(t);
            }
        }
        BackwardEnd::Completed
    }

    /// Depth-first forward search from z raising reachable components to
    /// z's level, recording surviving traversals. F is built in reverse
    /// finish order.
    fn forward_search(&mut self, z: u32, f: &mut Vec<u32>) {
        let kz = self.level[z as usize];
        let mut finish: Vec<u32> = Vec::new();
        let mut stack: Vec<(u32, usize)> = vec![(z, 0)];
        while let Some(&mut (t, ref mut cursor)) = stack.last_mut() {
            if *cursor < self.out[t as usize].len() {
                let (x, y) = self.out[t as usize][*cursor];
                // EFtraverse(x, y), with find(x) = t
                let fy = self.sets.find(y);
                debug_assert_eq!(self.sets.find(x), t);
                self.counters.arc_traversals += 1;
                if fy == t {
                    self.out[t as usize].swap_remove(*cursor);
                    continue;
                }
                *cursor += 1;
                self.traversed.push((t, fy));
                if self.level[fy as usize] < kz {
                    self.level[fy as usize] = kz;
                    self.counters.level_increases += 1;
                    self.inl[fy as usize].clear();
                    self.inl[fy as usize].push((x, y));
                    stack.push((fy, 0));
                } else if self.level[fy as usize] == kz {
                    self.inl[fy as usize].push((x, y));
                }
            } else {
                stack.pop();
                finish.push(t);
            }
        }
        finish.reverse();
        *f = finish;
    }

    fn remove_arc(list: &mut Vec<(u32, u32)>, arc: (u32, u32)) {
        if let Some(pos) = list.iter().position(|&a| a == arc) {
            list.swap_remove(pos);
        }
    }
}
