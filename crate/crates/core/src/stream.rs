//! Shared identifiers, arc-stream parsing, insertion outcomes, witness
//! cycles, and instrumentation counters used by every engine.
//!
//! The line-oriented arc-stream text format is the interchange format of
//! the whole crate:
//!
//! ```text
//! # comment lines start with '#'
//! p 4 3       <- optional header: vertex count, arc count
//! 0 1
//! 1 2
//! 2 3
//! ```

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

/// Vertex identifier, dense in `[0, n)`.
pub type VertexId = u32;

/// A directed arc from `tail` to `head`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Arc {
    pub tail: VertexId,
    pub head: VertexId,
}

impl Arc {
    pub fn new(tail: VertexId, head: VertexId) -> Self {
        Arc { tail, head }
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.tail, self.head)
    }
}

/// An ordered sequence of arc insertions, optionally with declared sizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcStream {
    pub declared_n: Option<u32>,
    pub declared_m: Option<u64>,
    pub events: Vec<Arc>,
}

impl ArcStream {
    pub fn new(events: Vec<Arc>) -> Self {
        ArcStream {
            declared_n: None,
            declared_m: None,
            events,
        }
    }

    pub fn with_sizes(n: u32, m: u64, events: Vec<Arc>) -> Self {
        ArcStream {
            declared_n: Some(n),
            declared_m: Some(m),
            events,
        }
    }

    /// The vertex count: declared if present, otherwise `max id + 1`.
    pub fn vertex_count(&self) -> u32 {
        self.declared_n.unwrap_or_else(|| {
            self.events
                .iter()
                .map(|a| a.tail.max(a.head) + 1)
                .max()
                .unwrap_or(0)
        })
    }

    /// Serializes to the text format; `parse_arc_stream` round-trips it.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        if let (Some(n), Some(m)) = (self.declared_n, self.declared_m) {
            s.push_str(&format!("p {} {}\n", n, m));
        }
        for a in &self.events {
            s.push_str(&format!("{} {}\n", a.tail, a.head));
        }
        s
    }
}

/// Errors raised while parsing the arc-stream text format.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: malformed line {text:?}")]
    Malformed { line: usize, text: String },
    #[error("line {line}: endpoint {id} out of range (declared n = {n})")]
    OutOfRange { line: usize, id: u64, n: u32 },
}

/// Parses the line-oriented arc-stream format.
///
/// Comment lines start with `#`. An optional header `p n m` must be the
/// first non-comment line. Every other non-empty line is `u v`.
pub fn parse_arc_stream(text: &str) -> Result<ArcStream, ParseError> {
    let mut stream = ArcStream::new(Vec::new());
    let mut seen_data = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let malformed = || ParseError::Malformed {
            line: line_no,
            text: raw.to_string(),
        };
        let mut fields = line.split_whitespace();
        let first = fields.next().ok_or_else(malformed)?;
        if first == "p" {
            if seen_data || stream.declared_n.is_some() {
                return Err(malformed());
            }
            let n: u32 = fields
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(malformed)?;
            let m: u64 = fields
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(malformed)?;
            if fields.next().is_some() {
                return Err(malformed());
            }
            stream.declared_n = Some(n);
            stream.declared_m = Some(m);
            continue;
        }
        let tail: u64 = first.parse().map_err(|_| malformed())?;
        let head: u64 = fields
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(malformed)?;
        if fields.next().is_some() {
            return Err(malformed());
        }
        if let Some(n) = stream.declared_n {
            for id in [tail, head] {
                if id >= n as u64 {
                    return Err(ParseError::OutOfRange {
                        line: line_no,
                        id,
                        n,
                    });
                }
            }
        }
        if tail > u32::MAX as u64 || head > u32::MAX as u64 {
            return Err(malformed());
        }
        stream.events.push(Arc::new(tail as u32, head as u32));
        seen_data = true;
    }
    Ok(stream)
}

/// An explicit cycle recovered from search parent links.
///
/// For consecutive entries `u, v` the arc `(u, v)` is in the graph, as is
/// the closing arc `(last, first)`; the cycle contains the arc whose
/// insertion triggered detection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessCycle {
    pub vertices: Vec<VertexId>,
}

impl WitnessCycle {
    pub fn new(vertices: Vec<VertexId>) -> Self {
        debug_assert!(!vertices.is_empty());
        WitnessCycle { vertices }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Checks that this is a closed walk over `arcs` containing `trigger`.
    /// `arcs` should be the accumulated arc set including the trigger.
    pub fn validates(&self, arcs: &HashSet<(VertexId, VertexId)>, trigger: Arc) -> bool {
        let vs = &self.vertices;
        if vs.is_empty() {
            return false;
        }
        let mut contains_trigger = false;
        for i in 0..vs.len() {
            let a = vs[i];
            let b = vs[(i + 1) % vs.len()];
            if vs.len() == 1 {
                // length-1 witness: the self-loop itself
                if !(trigger.tail == a && trigger.head == a) {
                    return false;
                }
                return true;
            }
            if !arcs.contains(&(a, b)) && !(trigger.tail == a && trigger.head == b) {
                return false;
            }
            if trigger.tail == a && trigger.head == b {
                contains_trigger = true;
            }
        }
        contains_trigger
    }
}

/// Per-insertion result reported by an engine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InsertionOutcome {
    /// The arc was stored and the graph remains acyclic.
    Accepted,
    /// The insertion closed a cycle (non-SCC engines only).
    CycleDetected(WitnessCycle),
    /// The insertion merged strong components (SCC engines only).
    ComponentsMerged {
        merged: Vec<VertexId>,
        canonical: VertexId,
    },
    /// Nothing to do: duplicate arc, or both endpoints already share a
    /// component.
    NoOp,
}

/// Errors from engine misuse (as opposed to cycle/merge outcomes).
#[derive(Debug, Error, PartialEq, Eq)]
pub enum EngineError {
    #[error("engine is poisoned: a cycle was already reported")]
    Poisoned,
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
}

/// Instrumentation counters; all fields are monotonically nondecreasing
/// over an engine's lifetime.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TraversalCounters {
    /// One unit per arc processed by a search; the unit of the amortized
    /// analysis.
    pub arc_traversals: u64,
    /// Backward searches stopped by the per-search arc budget.
    pub backward_aborts: u64,
    /// Individual vertex (or component) level increases.
    pub level_increases: u64,
    /// Count wraps back to zero on some scale.
    pub counter_resets: u64,
    /// Vertices assigned a fresh index and moved in the ordered list.
    pub reindex_moves: u64,
}
