//! Reachable-vertex closure.
//!
//! A vertex is reachable if it is in the seed, or if it shares an edge with a
//! reachable vertex and that edge's label is reachable. Orientation plays no
//! role. The closure is the least fixed point of that rule.

use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{GraphError, LogGraph, VertexId};

/// One derivation step: `vertex` became reachable through `via_edge`, whose
/// other endpoint and `label` were already reachable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Step {
    pub vertex: VertexId,
    pub via_edge: usize,
    pub label: VertexId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReachabilityResult {
    /// Sorted, deduplicated seed.
    pub seed: Vec<VertexId>,
    /// Sorted closure.
    pub closure: Vec<VertexId>,
    pub trace: Vec<Step>,
    pub complete: bool,
}

impl ReachabilityResult {
    pub fn contains(&self, v: VertexId) -> bool {
        self.closure.binary_search(&v).is_ok()
    }

    /// Replays the trace against `g` from the seed, checking every step.
    /// Returns the rebuilt closure on success, or the index of the first
    /// invalid step.
    pub fn replay(&self, g: &LogGraph) -> Result<Vec<VertexId>, usize> {
        replay_trace(g, &self.seed, &self.trace)
    }
}

/// Replays a derivation from `seed`. Fails with the index of the first step
/// whose premises are not yet established.
pub fn replay_trace(g: &LogGraph, seed: &[VertexId], trace: &[Step]) -> Result<Vec<VertexId>, usize> {
    let mut known = vec![false; g.vertex_count()];
    for v in seed {
        *known.get_mut(v.index()).ok_or(0usize)? = true;
    }
    for (i, step) in trace.iter().enumerate() {
        let edge = g.edge(step.via_edge).ok_or(i)?;
        let other = edge.other(step.vertex).ok_or(i)?;
        if edge.label != step.label || !known[other.index()] || !known[step.label.index()] || known[step.vertex.index()] {
            return Err(i);
        }
        known[step.vertex.index()] = true;
    }
    Ok(g.vertices().filter(|v| known[v.index()]).collect())
}

fn check_seed(g: &LogGraph, seed: &[VertexId]) -> Result<(), GraphError> {
    match seed.iter().find(|v| v.index() >= g.vertex_count()) {
        Some(v) => Err(GraphError::VertexOutOfRange(v.index())),
        None => Ok(()),
    }
}

/// Computes the closure of `seed` with a full derivation trace.
pub fn closure(g: &LogGraph, seed: &[VertexId]) -> Result<ReachabilityResult, GraphError> {
    check_seed(g, seed)?;
    let m = g.vertex_count();
    let mut reached = vec![false; m];
    let mut queue = Vec::with_capacity(m);
    for &v in seed {
        if !core::mem::replace(&mut reached[v.index()], true) {
            queue.push(v);
        }
    }
    let mut seed_sorted = queue.clone();
    seed_sorted.sort_unstable();
    let mut trace = Vec::new();
    let mut head = 0;
    while head < queue.len() {
        let v = queue[head];
        head += 1;
        // v as an endpoint: the far side follows if the label is known.
        for &i in g.incident(v) {
            let e = g.edges()[i];
            let u = e.other(v).expect("incident edge");
            if reached[e.label.index()] && !reached[u.index()] {
                reached[u.index()] = true;
                queue.push(u);
                trace.push(Step { vertex: u, via_edge: i, label: e.label });
            }
        }
        // v as a label: an edge with one known endpoint yields the other.
        for &i in g.labeled_by(v) {
            let e = g.edges()[i];
            let (s, t) = (e.source.index(), e.target.index());
            let newly = match (reached[s], reached[t]) {
                (true, false) => e.target,
                (false, true) => e.source,
                _ => continue,
            };
            reached[newly.index()] = true;
            queue.push(newly);
            trace.push(Step { vertex: newly, via_edge: i, label: v });
        }
    }
    let mut closure = queue;
    closure.sort_unstable();
    let complete = closure.len() == m;
    Ok(ReachabilityResult { seed: seed_sorted, closure, trace, complete })
}

/// Whether every vertex is reachable from `seed`.
pub fn is_reachable_from(g: &LogGraph, seed: &[VertexId]) -> Result<bool, GraphError> {
    check_seed(g, seed)?;
    Ok(Reacher::new(g).reaches_all(seed))
}

/// Reusable scratch space for repeated trace-free closures over one graph.
///
/// On connected interior-reduced graphs the search stops as soon as all but
/// one vertex is reachable: the last vertex is then always reachable too.
pub struct Reacher<'g> {
    graph: &'g LogGraph,
    reached: Vec<bool>,
    queue: Vec<VertexId>,
    shortcut: bool,
}

impl<'g> Reacher<'g> {
    pub fn new(graph: &'g LogGraph) -> Self {
        let m = graph.vertex_count();
        Reacher {
            graph,
            reached: vec![false; m],
            queue: Vec::with_capacity(m),
            shortcut: graph.is_connected() && graph.is_interior_reduced(),
        }
    }

    /// Disables the all-but-one shortcut. Used to cross-check it.
    pub fn without_shortcut(mut self) -> Self {
        self.shortcut = false;
        self
    }

    pub fn reaches_all(&mut self, seed: &[VertexId]) -> bool {
        let m = self.graph.vertex_count();
        let target = if self.shortcut { m.saturating_sub(1).max(1) } else { m };
        self.run(seed, target) >= target
    }

    /// Size of the closure of `seed` (no shortcut applied).
    pub fn closure_size(&mut self, seed: &[VertexId]) -> usize {
        self.run(seed, usize::MAX)
    }

    /// Membership of the last computed closure.
    pub fn reached(&self) -> &[bool] {
        &self.reached
    }

    fn run(&mut self, seed: &[VertexId], stop_at: usize) -> usize {
        let g = self.graph;
        self.reached.iter_mut().for_each(|r| *r = false);
        self.queue.clear();
        for &v in seed {
            if !core::mem::replace(&mut self.reached[v.index()], true) {
                self.queue.push(v);
            }
        }
        let mut head = 0;
        while head < self.queue.len() {
            if self.queue.len() >= stop_at {
                return self.queue.len();
            }
            let v = self.queue[head];
            head += 1;
            for &i in g.incident(v) {
                let e = g.edges()[i];
                let u = e.other(v).expect("incident edge");
                if self.reached[e.label.index()] && !self.reached[u.index()] {
                    self.reached[u.index()] = true;
                    self.queue.push(u);
                }
            }
            for &i in g.labeled_by(v) {
                let e = g.edges()[i];
                let (s, t) = (e.source.index(), e.target.index());
                if self.reached[s] != self.reached[t] {
                    let u = if self.reached[s] { t } else { s };
                    self.reached[u] = true;
                    self.queue.push(VertexId::new(u));
                }
            }
        }
        self.queue.len()
    }
}

/// Closure by repeated full sweeps over the edge list until nothing changes.
///
/// Quadratic and independent of the worklist implementation; serves as the
/// reference when auditing it.
pub fn naive_closure(g: &LogGraph, seed: &[VertexId]) -> Vec<bool> {
    let mut reached = vec![false; g.vertex_count()];
    for v in seed {
        reached[v.index()] = true;
    }
    loop {
        let mut changed = false;
        for e in g.edges() {
            if !reached[e.label.index()] {
                continue;
            }
            let (s, t) = (e.source.index(), e.target.index());
            if reached[s] != reached[t] {
                reached[s] = true;
                reached[t] = true;
                changed = true;
            }
        }
        if !changed {
            return reached;
        }
    }
}
