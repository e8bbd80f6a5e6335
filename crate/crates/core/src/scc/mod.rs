//! Strong-component maintenance under arc insertions.
//!
//! Both engines keep every vertex in a disjoint-set component and run
//! their searches over canonical vertices, merging components instead of
//! reporting cycles. Arcs between merged endpoints and repeat arcs
//! between the same component pair are deleted lazily during searches.

pub mod dense;
pub mod sparse;

pub use dense::SccDenseEngine;
pub use sparse::SccSparseEngine;

use std::collections::{HashMap, HashSet};

use crate::stream::VertexId;

/// Disjoint sets with an explicitly designated canonical element.
///
/// Union by rank with path compression keeps the amortized bound; a
/// redirect on the internal root lets `link(x, y)` make `x` the
/// externally visible canonical element regardless of which root wins
/// the rank comparison.
#[derive(Debug, Clone)]
pub struct DisjointSets {
    parent: Vec<u32>,
    rank: Vec<u8>,
    /// canonical element designated for each internal root
    canon: Vec<u32>,
}

impl DisjointSets {
    pub fn new(n: u32) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            rank: vec![0; n as usize],
            canon: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    fn root(&mut self, x: u32) -> u32 {
        let mut r = x;
        while self.parent[r as usize] != r {
            r = self.parent[r as usize];
        }
        let mut cur = x;
        while cur != r {
            let next = self.parent[cur as usize];
            self.parent[cur as usize] = r;
            cur = next;
        }
        r
    }

    /// Canonical element of the set containing `x`.
    ///
    /// Panics on an unknown element.
    pub fn find(&mut self, x: VertexId) -> VertexId {
        assert!((x as usize) < self.parent.len(), "unknown element {x}");
        let r = self.root(x);
        self.canon[r as usize]
    }

    /// Unites the sets with canonical elements `x` and `y`; the union's
    /// canonical element is `x`.
    ///
    /// Panics unless `x` and `y` are distinct canonical elements.
    pub fn link(&mut self, x: VertexId, y: VertexId) {
        assert!(self.find(x) == x, "link: {x} is not canonical");
        assert!(self.find(y) == y, "link: {y} is not canonical");
        assert_ne!(x, y, "link: arguments must differ");
        let rx = self.root(x);
        let ry = self.root(y);
        let winner = match self.rank[rx as usize].cmp(&self.rank[ry as usize]) {
            std::cmp::Ordering::Less => {
                self.parent[rx as usize] = ry;
                ry
            }
            std::cmp::Ordering::Greater => {
                self.parent[ry as usize] = rx;
                rx
            }
            std::cmp::Ordering::Equal => {
                self.parent[ry as usize] = rx;
                self.rank[rx as usize] += 1;
                rx
            }
        };
        self.canon[winner as usize] = x;
    }
}

/// Bit matrix over canonical-vertex pairs with a journal so resetting
/// costs one step per set bit. Backed by a contiguous bitset for small n
/// and a hashed pair set above that (the bitset needs n² bits).
#[derive(Debug, Clone)]
pub struct PairMatrix {
    n: usize,
    bits: Option<Vec<u64>>,
    set: HashSet<(u32, u32)>,
    journal: Vec<(u32, u32)>,
}

const DENSE_MATRIX_LIMIT: usize = 8192;

impl PairMatrix {
    pub fn new(n: u32) -> Self {
        let n = n as usize;
        let bits = if n <= DENSE_MATRIX_LIMIT {
            Some(vec![0u64; (n * n + 63) / 64])
        } else {
            None
        };
        PairMatrix {
            n,
            bits,
            set: HashSet::new(),
            journal: Vec::new(),
        }
    }

    pub fn test(&self, a: u32, b: u32) -> bool {
        match &self.bits {
            Some(bits) => {
                let idx = a as usize * self.n + b as usize;
                bits[idx / 64] >> (idx % 64) & 1 == 1
            }
            None => self.set.contains(&(a, b)),
        }
    }

    /// Sets bit (a, b); returns false if it was already set.
    pub fn set(&mut self, a: u32, b: u32) -> bool {
        let fresh = match &mut self.bits {
            Some(bits) => {
                let idx = a as usize * self.n + b as usize;
                let fresh = bits[idx / 64] >> (idx % 64) & 1 == 0;
                bits[idx / 64] |= 1 << (idx % 64);
                fresh
            }
            None => self.set.insert((a, b)),
        };
        if fresh {
            self.journal.push((a, b));
        }
        fresh
    }

    pub fn set_bit_count(&self) -> usize {
        self.journal.len()
    }

    /// Clears exactly the set bits via the journal.
    pub fn reset(&mut self) {
        match &mut self.bits {
            Some(bits) => {
                for &(a, b) in &self.journal {
                    let idx = a as usize * self.n + b as usize;
                    bits[idx / 64] &= !(1 << (idx % 64));
                }
            }
            None => self.set.clear(),
        }
        self.journal.clear();
    }
}

/// Vertices reachable from `start` over the given adjacency lists,
/// including `start` itself.
pub(crate) fn reachable(adj: &HashMap<u32, Vec<u32>>, start: u32) -> HashSet<u32> {
    let mut seen = HashSet::new();
    seen.insert(start);
    let mut queue = vec![start];
    while let Some(q) = queue.pop() {
        if let Some(nexts) = adj.get(&q) {
            for &t in nexts {
                if seen.insert(t) {
                    queue.push(t);
                }
            }
        }
    }
    seen
}

/// Groups vertices by canonical element: members ascending, components
/// ordered by smallest member.
pub(crate) fn snapshot(sets: &mut DisjointSets, n: u32) -> Vec<Vec<VertexId>> {
    let mut by_canon: std::collections::HashMap<u32, Vec<u32>> = Default::default();
    for v in 0..n {
        by_canon.entry(sets.find(v)).or_default().push(v);
    }
    let mut parts: Vec<Vec<u32>> = by_canon.into_values().collect();
    for p in &mut parts {
        p.sort_unstable();
    }
    parts.sort_by_key(|p| p[0]);
    parts
}
