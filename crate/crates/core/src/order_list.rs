//! Doubly-linked vertex list kept sorted by (level, index), with a tail
//! pointer per nonempty level.
//!
//! Both the sparse and dense engines maintain this list so a topological
//! order can be read off without sorting. All vertices that move during
//! one insertion move to a common level and receive fresh indices smaller
//! than every existing index, so a moved group always lands at the front
//! of its new level's region. The splice below places it there directly;
//! this keeps the list identical to sorting by (level, index) at all
//! times.

use std::collections::BTreeMap;

use crate::stream::VertexId;

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone)]
pub(crate) struct OrderList {
    prev: Vec<u32>,
    next: Vec<u32>,
    level: Vec<u64>,
    head: u32,
    tail: u32,
    /// last list node on each nonempty level
    tails: BTreeMap<u64, u32>,
}

impl OrderList {
    /// Identity order, all vertices on level 1.
    pub fn new(n: u32) -> Self {
        let n_us = n as usize;
        let mut list = OrderList {
            prev: Vec::with_capacity(n_us),
            next: Vec::with_capacity(n_us),
            level: vec![1; n_us],
            head: NONE,
            tail: NONE,
            tails: BTreeMap::new(),
        };
        for v in 0..n {
            list.prev.push(if v == 0 { NONE } else { v - 1 });
            list.next.push(if v + 1 == n { NONE } else { v + 1 });
        }
        if n > 0 {
            list.head = 0;
            list.tail = n - 1;
            list.tails.insert(1, n - 1);
        }
        list
    }

    /// Adds the next vertex id at the front of level 1's region (it
    /// carries the smallest index).
    pub fn add_vertex(&mut self) -> VertexId {
        let id = self.level.len() as u32;
        self.prev.push(NONE);
        self.next.push(NONE);
        self.level.push(1);
        self.insert_front_of_level(id, 1);
        id
    }

    /// Moves `group` (in order, all to the same `new_level`) to the front
    /// of `new_level`'s region. Members may already be on `new_level`:
    /// they still move to the front, keeping `group`'s relative order.
    pub fn move_group(&mut self, group: &[VertexId], new_level: u64) {
        for &x in group {
            self.unlink(x);
        }
        // splice in reverse so each insert_front lands before the previous
        for &x in group.iter().rev() {
            self.level[x as usize] = new_level;
            self.insert_front_of_level(x, new_level);
        }
    }

    fn insert_front_of_level(&mut self, x: u32, lv: u64) {
        // anchor: tail of the greatest nonempty level below lv
        let anchor = self
            .tails
            .range(..lv)
            .next_back()
            .map(|(_, &node)| node);
        match anchor {
            None => {
                // front of the whole list
                let old_head = self.head;
                self.prev[x as usize] = NONE;
                self.next[x as usize] = old_head;
                if old_head != NONE {
                    self.prev[old_head as usize] = x;
                } else {
                    self.tail = x;
                }
                self.head = x;
            }
            Some(a) => {
                let after = self.next[a as usize];
                self.prev[x as usize] = a;
                self.next[x as usize] = after;
                self.next[a as usize] = x;
                if after != NONE {
                    self.prev[after as usize] = x;
                } else {
                    self.tail = x;
                }
            }
        }
        self.tails.entry(lv).or_insert(x);
    }

    fn unlink(&mut self, x: u32) {
        let lv = self.level[x as usize];
        let p = self.prev[x as usize];
        let n = self.next[x as usize];
        if self.tails.get(&lv) == Some(&x) {
            if p != NONE && self.level[p as usize] == lv {
                self.tails.insert(lv, p);
            } else {
                self.tails.remove(&lv);
            }
        }
        if p != NONE {
            self.next[p as usize] = n;
        } else {
            self.head = n;
        }
        if n != NONE {
            self.prev[n as usize] = p;
        } else {
            self.tail = p;
        }
        self.prev[x as usize] = NONE;
        self.next[x as usize] = NONE;
    }

    pub fn to_vec(&self) -> Vec<VertexId> {
        let mut out = Vec::with_capacity(self.level.len());
        let mut cur = self.head;
        while cur != NONE {
            out.push(cur);
            cur = self.next[cur as usize];
        }
        out
    }
}
