//! Deterministic arc-stream generators.
//!
//! Two adversarial constructions that force worst-case traversal counts
//! (one per engine), plus seeded random DAG and general streams. All
//! randomness comes from ChaCha8 (`rand_chacha`) seeded with a single
//! u64, so identical parameters produce identical streams on every
//! platform.

use std::collections::HashSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::sparse::delta_for;
use crate::stream::{Arc, ArcStream};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WorkloadError {
    #[error("parameter out of bounds: {0}")]
    Bounds(String),
}

fn isqrt(x: u64) -> u64 {
    if x < 2 {
        return x;
    }
    let mut s = (x as f64).sqrt() as u64;
    while s.saturating_mul(s) > x {
        s -= 1;
    }
    while (s + 1) * (s + 1) <= x {
        s += 1;
    }
    s
}

/// Shape parameters of the budget-abort adversary stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SparseAdversaryShape {
    /// vertices in the main clique: floor(sqrt(m)/2)
    pub main_clique: u32,
    /// vertices per anchor clique: ceil(sqrt(2Δ)) + 1, so each anchor
    /// clique holds at least Δ arcs
    pub anchor_clique: u32,
    /// number of anchor cliques
    pub anchors: u32,
    /// backward-search budget for (n, m)
    pub delta: u64,
}

fn sparse_bounds(n: u32, m: u64) -> Result<(), WorkloadError> {
    if n < 64 {
        return Err(WorkloadError::Bounds(format!("n = {n} < 64")));
    }
    if m < 2 * n as u64 {
        return Err(WorkloadError::Bounds(format!("m = {m} < 2n = {}", 2 * n)));
    }
    let cap = n as u64 * (n as u64 - 1) / 2;
    if m > cap {
        return Err(WorkloadError::Bounds(format!("m = {m} > n(n-1)/2 = {cap}")));
    }
    Ok(())
}

pub fn sparse_adversary_shape(n: u32, m: u64) -> Result<SparseAdversaryShape, WorkloadError> {
    sparse_bounds(n, m)?;
    let delta = delta_for(n as u64, m);
    let r1 = (isqrt(m) / 2) as u32;
    let r2 = (isqrt(2 * delta - 1) + 2) as u32; // ceil(sqrt(2Δ)) + 1
    let budget = m / 2;
    let mut arcs = r1 as u64 * (r1 as u64 - 1) / 2;
    let per_anchor = r2 as u64 * (r2 as u64 - 1) / 2;
    let mut next = r1;
    let mut anchors = 0;
    while next + r2 <= n && arcs + per_anchor <= budget {
        anchors += 1;
        next += r2;
        arcs += per_anchor;
    }
    Ok(SparseAdversaryShape {
        main_clique: r1,
        anchor_clique: r2,
        anchors,
        delta,
    })
}

/// Adversary for the two-way-search engine: a main clique, a ladder of
/// anchor cliques each holding at least Δ arcs, back arcs down the
/// ladder that each exhaust the backward-search budget, and final back
/// arcs into the main clique whose forward searches re-traverse it over
/// and over. Acyclic throughout; at most m arcs.
pub fn gen_sparse_adversary(n: u32, m: u64) -> Result<ArcStream, WorkloadError> {
    let shape = sparse_adversary_shape(n, m)?;
    let r1 = shape.main_clique;
    let r2 = shape.anchor_clique;
    let k = shape.anchors;
    let mut events: Vec<Arc> = Vec::new();
    let clique = |events: &mut Vec<Arc>, start: u32, r: u32| {
        for i in start..start + r {
            for j in i + 1..start + r {
                events.push(Arc::new(i, j));
            }
        }
    };
    clique(&mut events, 0, r1);
    let anchor_start = |q: u32| r1 + (q - 1) * r2; // cliques numbered 1..=k
    for q in 1..=k {
        clique(&mut events, anchor_start(q), r2);
    }
    // back arcs from the last vertex of each anchor clique to every
    // vertex of the clique below, heads in decreasing order
    for j in (1..k).rev() {
        let tail = anchor_start(j + 1) + r2 - 1;
        for head in (anchor_start(j)..anchor_start(j) + r2).rev() {
            events.push(Arc::new(tail, head));
        }
    }
    // back arcs from anchor cliques k-2..1 into the main clique's first
    // vertex; each forward search sweeps the whole main clique
    if k >= 2 {
        for q in (1..=k - 2).rev() {
            events.push(Arc::new(anchor_start(q), 0));
        }
    }
    debug_assert!(events.len() as u64 <= m);
    let m_actual = events.len() as u64;
    Ok(ArcStream::with_sizes(n, m_actual, events))
}

/// Adversary for the one-way-search engine: a chain of anchors, a fan
/// target set T, and per-scale sets S_j sized to trip each counter
/// c_j(t) to exactly its wrap threshold once per qualifying phase.
/// Requires r a power of two, r ≥ 8; uses 5r − 6 vertices.
pub fn gen_dense_adversary(r: u32) -> Result<ArcStream, WorkloadError> {
    if r < 8 || !r.is_power_of_two() {
        return Err(WorkloadError::Bounds(format!(
            "r = {r} must be a power of two, at least 8"
        )));
    }
    let lg = r.ilog2();
    let n = 5 * r - 6;
    let u = |i: u32| i - 1; // anchors u_1..u_r, 1-based in the construction
    let t_base = r;
    let s_base = |j: u32| 2 * r + 3 * ((1u32 << (j + 1)) - 2);
    let s_size = |j: u32| 3 * (1u32 << (j + 1));
    let mut events: Vec<Arc> = Vec::new();
    for i in 1..r {
        events.push(Arc::new(u(i), u(i + 1)));
    }
    for i in 2..=r {
        for t in t_base..t_base + r {
            events.push(Arc::new(u(i - 1), t));
        }
        for j in 0..=lg - 2 {
            let step = 1u32 << j;
            if i % step != 0 {
                continue;
            }
            let c = i / step;
            if c < 3 {
                continue;
            }
            let (start, size) = (s_base(j), s_size(j));
            if c == 3 {
                // lift S_j to level 2^{j+1}, then aim it at T; the T
                // counters on scale j wrap for the first time
                for s in start..start + size {
                    events.push(Arc::new(u(i - step - 1), s));
                }
                for s in start..start + size {
                    for t in t_base..t_base + r {
                        events.push(Arc::new(s, t));
                    }
                }
            } else {
                // push S_j up by one multiple of 2^j; every (s, t) arc
                // is re-extracted and wraps the scale-j counters again
                for s in start..start + size {
                    events.push(Arc::new(u(i - step - 1), s));
                }
            }
        }
    }
    let m = events.len() as u64;
    Ok(ArcStream::with_sizes(n, m, events))
}

/// `count` distinct values in [0, space) without replacement,
/// deterministic in `rng`. Rejection-samples when sparse, partially
/// shuffles the full range when dense.
fn sample_distinct(rng: &mut ChaCha8Rng, space: u64, count: u64) -> Vec<u64> {
    if count * 2 <= space {
        let mut seen = HashSet::new();
        let mut picks = Vec::with_capacity(count as usize);
        while (picks.len() as u64) < count {
            let x = rng.gen_range(0..space);
            if seen.insert(x) {
                picks.push(x);
            }
        }
        picks
    } else {
        let mut all: Vec<u64> = (0..space).collect();
        for i in 0..count as usize {
            let j = rng.gen_range(i..space as usize);
            all.swap(i, j);
        }
        all.truncate(count as usize);
        all
    }
}

/// m distinct arcs that all agree with a random permutation order:
/// guaranteed acyclic.
pub fn gen_random_dag_stream(n: u32, m: u64, seed: u64) -> Result<ArcStream, WorkloadError> {
    let cap = n as u64 * n.saturating_sub(1) as u64 / 2;
    if m > cap {
        return Err(WorkloadError::Bounds(format!("m = {m} > n(n-1)/2 = {cap}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<u32> = (0..n).collect();
    for i in (1..n as usize).rev() {
        let j = rng.gen_range(0..=i);
        perm.swap(i, j);
    }
    let mut pos = vec![0u32; n as usize];
    for (p, &v) in perm.iter().enumerate() {
        pos[v as usize] = p as u32;
    }
    // sample unordered pairs, then orient each by permutation position
    let events = sample_distinct(&mut rng, cap, m)
        .into_iter()
        .map(|code| {
            // pair index -> (a, b) with a < b
            let a = ((1.0 + 8.0 * code as f64).sqrt() as u64 + 1) / 2;
            let a = {
                let mut a = a;
                while a * (a - 1) / 2 > code {
                    a -= 1;
                }
                while (a + 1) * a / 2 <= code {
                    a += 1;
                }
                a as u32
            };
            let b = (code - a as u64 * (a as u64 - 1) / 2) as u32;
            debug_assert!(b < a);
            if pos[a as usize] < pos[b as usize] {
                Arc::new(a, b)
            } else {
                Arc::new(b, a)
            }
        })
        .collect();
    Ok(ArcStream::with_sizes(n, m, events))
}

/// m distinct loop-free arcs uniformly without replacement; cycles
/// likely.
pub fn gen_random_stream(n: u32, m: u64, seed: u64) -> Result<ArcStream, WorkloadError> {
    let cap = n as u64 * n.saturating_sub(1) as u64;
    if m > cap {
        return Err(WorkloadError::Bounds(format!("m = {m} > n(n-1) = {cap}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let events = sample_distinct(&mut rng, cap, m)
        .into_iter()
        .map(|code| {
            let tail = (code / (n as u64 - 1)) as u32;
            let rest = (code % (n as u64 - 1)) as u32;
            let head = if rest >= tail { rest + 1 } else { rest };
            Arc::new(tail, head)
        })
        .collect();
    Ok(ArcStream::with_sizes(n, m, events))
}
