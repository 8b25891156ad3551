//! The labeled oriented graph model.
//!
//! A [`LogGraph`] owns its vertex names and a list of directed edges, each
//! carrying a vertex as its label. Graphs are immutable once built and are
//! always simple: self-loops and parallel edges are rejected at construction.
//! Candidate graphs that may violate those rules are described by [`RawLog`]
//! and inspected with [`validate`].

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Dense index of a vertex inside one [`LogGraph`].
///
/// Identity across graphs is by name; indices are only meaningful relative
/// to the graph that produced them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(usize);

impl VertexId {
    pub const fn new(index: usize) -> Self {
        VertexId(index)
    }

    pub const fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A directed edge `source -> target` labeled by a vertex.
///
/// Encodes the relation `label source label^-1 = target`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabeledEdge {
    pub source: VertexId,
    pub target: VertexId,
    pub label: VertexId,
}

impl LabeledEdge {
    pub const fn new(source: VertexId, target: VertexId, label: VertexId) -> Self {
        LabeledEdge { source, target, label }
    }

    pub fn touches(&self, v: VertexId) -> bool {
        self.source == v || self.target == v
    }

    /// The endpoint opposite to `v`, if `v` is an endpoint.
    pub fn other(&self, v: VertexId) -> Option<VertexId> {
        if self.source == v {
            Some(self.target)
        } else if self.target == v {
            Some(self.source)
        } else {
            None
        }
    }

    /// Endpoints as an unordered pair `(min, max)`.
    pub fn unordered(&self) -> (VertexId, VertexId) {
        if self.source <= self.target {
            (self.source, self.target)
        } else {
            (self.target, self.source)
        }
    }

    pub fn reversed(&self) -> Self {
        LabeledEdge::new(self.target, self.source, self.label)
    }

    pub fn is_interior_reduced(&self) -> bool {
        !self.touches(self.label)
    }
}

/// An edge of a candidate graph, referring to vertices by name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawEdge {
    pub source: String,
    pub target: String,
    pub label: String,
}

impl RawEdge {
    pub fn new(source: impl Into<String>, target: impl Into<String>, label: impl Into<String>) -> Self {
        RawEdge { source: source.into(), target: target.into(), label: label.into() }
    }
}

/// A candidate graph by names, possibly violating simplicity.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawLog {
    pub vertices: Vec<String>,
    pub edges: Vec<RawEdge>,
}

impl RawLog {
    pub fn new<S: Into<String>>(vertices: impl IntoIterator<Item = S>) -> Self {
        RawLog { vertices: vertices.into_iter().map(Into::into).collect(), edges: Vec::new() }
    }

    pub fn edge(mut self, source: &str, target: &str, label: &str) -> Self {
        self.edges.push(RawEdge::new(source, target, label));
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("graph has no vertices")]
    Empty,
    #[error("invalid vertex name {0:?}")]
    InvalidName(String),
    #[error("vertex {0:?} declared twice")]
    DuplicateVertex(String),
    #[error("edge {edge} references unknown vertex {name:?}")]
    UnknownVertex { edge: usize, name: String },
    #[error("edge {edge} is a self-loop")]
    SelfLoop { edge: usize },
    #[error("edge {edge} joins the same vertex pair as edge {first}")]
    DuplicateEdge { edge: usize, first: usize },
    #[error("vertex index {0} out of range")]
    VertexOutOfRange(usize),
    #[error("graph is not connected")]
    Disconnected,
}

/// Cached structural predicates of a graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Flags {
    pub connected: bool,
    pub tree: bool,
    pub interior_reduced: bool,
    pub injective: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Violation {
    SelfLoop {
        edge: usize,
    },
    ParallelEdge {
        edge: usize,
        first: usize,
    },
    /// The label coincides with one of the edge's endpoints.
    LabelOnEndpoint {
        edge: usize,
    },
}

impl Violation {
    pub fn edge(&self) -> usize {
        match *self {
            Violation::SelfLoop { edge } | Violation::ParallelEdge { edge, .. } | Violation::LabelOnEndpoint { edge } => edge,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub flags: Flags,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Whether `name` matches `[A-Za-z_][A-Za-z0-9_]*`.
pub fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn resolve_names(vertices: &[String]) -> Result<BTreeMap<String, VertexId>, GraphError> {
    if vertices.is_empty() {
        return Err(GraphError::Empty);
    }
    let mut lookup = BTreeMap::new();
    for (i, name) in vertices.iter().enumerate() {
        if !is_valid_name(name) {
            return Err(GraphError::InvalidName(name.clone()));
        }
        if lookup.insert(name.clone(), VertexId(i)).is_some() {
            return Err(GraphError::DuplicateVertex(name.clone()));
        }
    }
    Ok(lookup)
}

fn resolve_edges(raw: &RawLog, lookup: &BTreeMap<String, VertexId>) -> Result<Vec<LabeledEdge>, GraphError> {
    raw.edges
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let get = |name: &String| lookup.get(name).copied().ok_or_else(|| GraphError::UnknownVertex { edge: i, name: name.clone() });
            Ok(LabeledEdge::new(get(&e.source)?, get(&e.target)?, get(&e.label)?))
        })
        .collect()
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[rb] = ra;
        true
    }
}

fn compute_flags(vertex_count: usize, edges: &[LabeledEdge]) -> Flags {
    let mut sets = DisjointSets::new(vertex_count);
    let mut components = vertex_count;
    for e in edges {
        if sets.union(e.source.0, e.target.0) {
            components -= 1;
        }
    }
    let connected = components == 1;
    let mut seen_labels = vec![false; vertex_count];
    let mut injective = true;
    for e in edges {
        if core::mem::replace(&mut seen_labels[e.label.0], true) {
            injective = false;
        }
    }
    Flags {
        connected,
        tree: connected && edges.len() + 1 == vertex_count,
        interior_reduced: edges.iter().all(LabeledEdge::is_interior_reduced),
        injective,
    }
}

fn find_violations(edges: &[LabeledEdge]) -> Vec<Violation> {
    let mut violations = Vec::new();
    let mut pairs: BTreeMap<(VertexId, VertexId), usize> = BTreeMap::new();
    for (i, e) in edges.iter().enumerate() {
        if e.source == e.target {
            violations.push(Violation::SelfLoop { edge: i });
            continue;
        }
        if let Some(&first) = pairs.get(&e.unordered()) {
            violations.push(Violation::ParallelEdge { edge: i, first });
        } else {
            pairs.insert(e.unordered(), i);
        }
        if !e.is_interior_reduced() {
            violations.push(Violation::LabelOnEndpoint { edge: i });
        }
    }
    violations
}

/// Computes the structural flags of a candidate graph and lists every edge
/// that breaks simplicity or interior reducedness.
///
/// Only fails when the candidate cannot be interpreted at all (bad or
/// unknown names).
pub fn validate(raw: &RawLog) -> Result<ValidationReport, GraphError> {
    let lookup = resolve_names(&raw.vertices)?;
    let edges = resolve_edges(raw, &lookup)?;
    Ok(ValidationReport { flags: compute_flags(raw.vertices.len(), &edges), violations: find_violations(&edges) })
}

/// A simple labeled oriented graph.
#[derive(Clone, Debug)]
pub struct LogGraph {
    names: Vec<String>,
    lookup: BTreeMap<String, VertexId>,
    edges: Vec<LabeledEdge>,
    incident: Vec<Vec<usize>>,
    labeled: Vec<Vec<usize>>,
    flags: Flags,
}

impl PartialEq for LogGraph {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.edges == other.edges
    }
}

impl Eq for LogGraph {}

impl LogGraph {
    /// Builds a graph from names, rejecting self-loops and parallel edges.
    pub fn from_raw(raw: &RawLog) -> Result<Self, GraphError> {
        let lookup = resolve_names(&raw.vertices)?;
        let edges = resolve_edges(raw, &lookup)?;
        Self::assemble(raw.vertices.clone(), lookup, edges)
    }

    /// Builds a graph from names and index-based edges.
    pub fn from_parts(names: Vec<String>, edges: Vec<LabeledEdge>) -> Result<Self, GraphError> {
        let lookup = resolve_names(&names)?;
        for e in &edges {
            for v in [e.source, e.target, e.label] {
                if v.0 >= names.len() {
                    return Err(GraphError::VertexOutOfRange(v.0));
                }
            }
        }
        Self::assemble(names, lookup, edges)
    }

    fn assemble(names: Vec<String>, lookup: BTreeMap<String, VertexId>, edges: Vec<LabeledEdge>) -> Result<Self, GraphError> {
        for v in find_violations(&edges) {
            match v {
                Violation::SelfLoop { edge } => return Err(GraphError::SelfLoop { edge }),
                Violation::ParallelEdge { edge, first } => return Err(GraphError::DuplicateEdge { edge, first }),
                Violation::LabelOnEndpoint { .. } => {}
            }
        }
        let m = names.len();
        let mut incident = vec![Vec::new(); m];
        let mut labeled = vec![Vec::new(); m];
        for (i, e) in edges.iter().enumerate() {
            incident[e.source.0].push(i);
            incident[e.target.0].push(i);
            labeled[e.label.0].push(i);
        }
        let flags = compute_flags(m, &edges);
        Ok(LogGraph { names, lookup, edges, incident, labeled, flags })
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.names.len()).map(VertexId)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v.0]
    }

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.lookup.get(name).copied()
    }

    pub fn edges(&self) -> &[LabeledEdge] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> Option<&LabeledEdge> {
        self.edges.get(index)
    }

    /// Indices of edges with `v` as an endpoint.
    pub fn incident(&self, v: VertexId) -> &[usize] {
        &self.incident[v.0]
    }

    /// Indices of edges labeled by `v`.
    pub fn labeled_by(&self, v: VertexId) -> &[usize] {
        &self.labeled[v.0]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.incident[v.0].len()
    }

    pub fn edge_between(&self, a: VertexId, b: VertexId) -> Option<usize> {
        self.incident[a.0].iter().copied().find(|&i| self.edges[i].other(a) == Some(b))
    }

    /// Position of `edge` in this graph, orientation ignored.
    pub fn find_edge(&self, edge: &LabeledEdge) -> Option<usize> {
        if edge.source.0 >= self.vertex_count() || edge.target.0 >= self.vertex_count() {
            return None;
        }
        self.edge_between(edge.source, edge.target).filter(|&i| self.edges[i].label == edge.label)
    }

    pub fn flags(&self) -> Flags {
        self.flags
    }

    pub fn is_connected(&self) -> bool {
        self.flags.connected
    }

    pub fn is_tree(&self) -> bool {
        self.flags.tree
    }

    pub fn is_interior_reduced(&self) -> bool {
        self.flags.interior_reduced
    }

    pub fn is_injective(&self) -> bool {
        self.flags.injective
    }

    /// Number of distinct vertices used as labels.
    pub fn label_image_size(&self) -> usize {
        self.labeled.iter().filter(|l| !l.is_empty()).count()
    }

    pub fn validate(&self) -> ValidationReport {
        ValidationReport { flags: self.flags, violations: find_violations(&self.edges) }
    }

    pub fn to_raw(&self) -> RawLog {
        RawLog {
            vertices: self.names.clone(),
            edges: self.edges.iter().map(|e| RawEdge::new(self.name(e.source), self.name(e.target), self.name(e.label))).collect(),
        }
    }

    /// Spanning tree keeping edges in input order and dropping every edge
    /// that would close a cycle.
    pub fn spanning_tree(&self) -> Result<LogGraph, GraphError> {
        if !self.is_connected() {
            return Err(GraphError::Disconnected);
        }
        let mut sets = DisjointSets::new(self.vertex_count());
        let kept = self.edges.iter().copied().filter(|e| sets.union(e.source.0, e.target.0)).collect();
        Self::from_parts(self.names.clone(), kept)
    }

    /// Same graph with the orientation of the listed edges flipped.
    pub fn with_reversed(&self, edge_indices: &[usize]) -> LogGraph {
        let mut edges = self.edges.clone();
        for &i in edge_indices {
            edges[i] = edges[i].reversed();
        }
        Self::from_parts(self.names.clone(), edges).expect("reversal keeps the graph simple")
    }

    /// Same graph with one more edge appended.
    pub fn with_edge(&self, edge: LabeledEdge) -> Result<LogGraph, GraphError> {
        let mut edges = self.edges.clone();
        edges.push(edge);
        Self::from_parts(self.names.clone(), edges)
    }

    /// Same vertex names (as a set) and same edge set, ignoring order.
    pub fn same_structure(&self, other: &LogGraph) -> bool {
        if self.vertex_count() != other.vertex_count() || self.edge_count() != other.edge_count() {
            return false;
        }
        let mut ours: Vec<[&str; 3]> = self.edges.iter().map(|e| [self.name(e.source), self.name(e.target), self.name(e.label)]).collect();
        let mut theirs: Vec<[&str; 3]> =
            other.edges.iter().map(|e| [other.name(e.source), other.name(e.target), other.name(e.label)]).collect();
        ours.sort_unstable();
        theirs.sort_unstable();
        self.names.iter().all(|n| other.vertex(n).is_some()) && ours == theirs
    }

    /// Renders an edge as `src->dst:label`.
    pub fn describe_edge(&self, e: &LabeledEdge) -> String {
        let mut s = self.name(e.source).to_string();
        s.push_str("->");
        s.push_str(self.name(e.target));
        s.push(':');
        s.push_str(self.name(e.label));
        s
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn fig1_flags() {
        let r = fig1().validate();
        assert_eq!(r.flags, Flags { connected: true, tree: true, interior_reduced: true, injective: false });
        assert!(r.is_clean());
    }

    #[test]
    fn single_vertex_is_a_tree() {
        let f = single().flags();
        assert!(f.connected && f.tree && f.interior_reduced && f.injective);
    }

    #[test]
    fn label_on_endpoint_is_reported() {
        let raw = RawLog::new(["a", "b"]).edge("a", "b", "a");
        let r = validate(&raw).unwrap();
        assert!(!r.flags.interior_reduced);
        assert_eq!(r.violations, vec![Violation::LabelOnEndpoint { edge: 0 }]);
    }

    #[test]
    fn unknown_name_is_malformed() {
        let raw = RawLog::new(["a", "b"]).edge("a", "q", "b");
        assert_eq!(validate(&raw), Err(GraphError::UnknownVertex { edge: 0, name: "q".into() }));
    }

    #[test]
    fn simplicity_enforced_at_construction() {
        let loops = RawLog::new(["a", "b"]).edge("a", "a", "b");
        assert_eq!(LogGraph::from_raw(&loops), Err(GraphError::SelfLoop { edge: 0 }));
        let parallel = RawLog::new(["a", "b", "c"]).edge("a", "b", "c").edge("b", "a", "c");
        assert_eq!(LogGraph::from_raw(&parallel), Err(GraphError::DuplicateEdge { edge: 1, first: 0 }));
        let report = validate(&parallel).unwrap();
        assert_eq!(report.violations, vec![Violation::ParallelEdge { edge: 1, first: 0 }]);
        assert!(!report.flags.tree);
    }

    #[test]
    fn bad_names() {
        assert_eq!(LogGraph::from_raw(&RawLog::new(["1a"])), Err(GraphError::InvalidName("1a".into())));
        assert_eq!(LogGraph::from_raw(&RawLog::new(["a", "a"])), Err(GraphError::DuplicateVertex("a".into())));
        assert_eq!(LogGraph::from_raw(&RawLog::default()), Err(GraphError::Empty));
    }

    #[test]
    fn spanning_tree_of_tree_is_identity() {
        assert_eq!(fig1().spanning_tree().unwrap(), fig1());
    }

    #[test]
    fn spanning_tree_drops_cycle_closer() {
        let g = fig1();
        let b = g.vertex("b").unwrap();
        let c = g.vertex("c").unwrap();
        let d = g.vertex("d").unwrap();
        let extended = g.with_edge(LabeledEdge::new(b, c, d)).unwrap();
        assert!(!extended.is_tree());
        assert_eq!(extended.spanning_tree().unwrap(), g);
    }

    #[test]
    fn spanning_tree_of_triangle_keeps_first_two() {
        let tri = LogGraph::from_raw(&RawLog::new(["a", "b", "c"]).edge("a", "b", "c").edge("b", "c", "a").edge("c", "a", "b")).unwrap();
        let t = tri.spanning_tree().unwrap();
        assert_eq!(t.edges(), &tri.edges()[..2]);
        assert!(t.is_tree() && t.is_interior_reduced());
    }

    #[test]
    fn spanning_tree_rejects_disconnected() {
        let g = LogGraph::from_raw(&RawLog::new(["a", "b"])).unwrap();
        assert_eq!(g.spanning_tree(), Err(GraphError::Disconnected));
    }

    #[test]
    fn structure_ignores_order() {
        let g = fig1();
        let raw = RawLog::new(["d", "c", "b", "a"]).edge("d", "c", "a").edge("a", "d", "c").edge("d", "b", "c");
        let h = LogGraph::from_raw(&raw).unwrap();
        assert!(g.same_structure(&h));
        assert!(!g.same_structure(&g.with_reversed(&[0])));
    }
}
