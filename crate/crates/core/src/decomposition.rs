//! Rosebrock LOTs, the gluing operator and unique decomposition.
//!
//! A Rosebrock LOT has three vertices `a, b, c` and two edges: `a–b`
//! labeled `c` and `b–c` labeled `a`, in either orientation. Gluing two LOTs
//! with disjoint vertex sets at one vertex each is written `g1 ⊔ g2`. A LOT
//! has maximal complexity exactly when it is a gluing of Rosebrock LOTs, and
//! that gluing is unique.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{GraphError, LabeledEdge, LogGraph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecompositionError {
    #[error("graph is not a tree")]
    NotTree,
    #[error("graph is not interior reduced")]
    NotInteriorReduced,
    #[error("edge is not part of the graph")]
    UnknownEdge,
    #[error("vertex {0:?} is not part of the graph")]
    UnknownVertex(String),
    #[error("vertex name {0:?} occurs in both graphs")]
    NameClash(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A Rosebrock sub-LOT of some graph: `e1 = {a,b}` labeled `c` and
/// `e2 = {b,c}` labeled `a`. `e1` is the edge with the lower index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RosebrockSubLot {
    pub a: VertexId,
    pub b: VertexId,
    pub c: VertexId,
    pub e1: LabeledEdge,
    pub e2: LabeledEdge,
}

impl RosebrockSubLot {
    pub fn vertices(&self) -> [VertexId; 3] {
        [self.a, self.b, self.c]
    }

    /// Whether the two edges realize the pattern and both exist in `g`.
    pub fn is_valid_in(&self, g: &LogGraph) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        a != b
            && b != c
            && a != c
            && self.e1.unordered() == ordered(a, b)
            && self.e1.label == c
            && self.e2.unordered() == ordered(b, c)
            && self.e2.label == a
            && g.find_edge(&self.e1).is_some()
            && g.find_edge(&self.e2).is_some()
    }

    /// The sub-LOT as a standalone graph, keeping the names and orientations
    /// it has in `g`.
    pub fn to_graph(&self, g: &LogGraph) -> LogGraph {
        let names = self.vertices().iter().map(|&v| String::from(g.name(v))).collect();
        let local = |v: VertexId| VertexId::new(self.vertices().iter().position(|&w| w == v).expect("part vertex"));
        let edges = [self.e1, self.e2].iter().map(|e| LabeledEdge::new(local(e.source), local(e.target), local(e.label))).collect();
        LogGraph::from_parts(names, edges).expect("Rosebrock parts are simple")
    }
}

fn ordered(x: VertexId, y: VertexId) -> (VertexId, VertexId) {
    if x <= y {
        (x, y)
    } else {
        (y, x)
    }
}

/// A Rosebrock sub-LOT of `g` containing `g.edges()[index]`, if any.
pub fn cover_of_edge(g: &LogGraph, index: usize) -> Option<RosebrockSubLot> {
    let e = *g.edge(index)?;
    if !e.is_interior_reduced() {
        return None;
    }
    let (u, v, l) = (e.source, e.target, e.label);
    // The companion edge joins the label to one endpoint and is labeled by
    // the other endpoint; that shared endpoint plays the middle role.
    let candidates = [(v, u), (u, v)]
        .into_iter()
        .filter_map(|(middle, far)| g.edge_between(middle, l).filter(|&j| g.edges()[j].label == far).map(|j| (j, middle, far)));
    let (j, middle, far) = candidates.min_by_key(|&(j, _, _)| j)?;
    let partner = g.edges()[j];
    Some(if index < j {
        RosebrockSubLot { a: far, b: middle, c: l, e1: e, e2: partner }
    } else {
        RosebrockSubLot { a: l, b: middle, c: far, e1: partner, e2: e }
    })
}

/// A Rosebrock sub-LOT of `g` containing `edge` (orientation ignored).
pub fn rosebrock_cover(g: &LogGraph, edge: &LabeledEdge) -> Result<Option<RosebrockSubLot>, DecompositionError> {
    let index = g.find_edge(edge).ok_or(DecompositionError::UnknownEdge)?;
    Ok(cover_of_edge(g, index))
}

pub fn is_rosebrock(g: &LogGraph) -> bool {
    g.vertex_count() == 3 && g.edge_count() == 2 && cover_of_edge(g, 0).is_some()
}

/// Glues `g2` onto `g1` by identifying `v2` with `v1`.
///
/// Every occurrence of `v2`, as endpoint or label, is renamed to `v1`. All
/// other names must be distinct between the two graphs.
pub fn compose(g1: &LogGraph, v1: VertexId, g2: &LogGraph, v2: VertexId) -> Result<LogGraph, DecompositionError> {
    if v1.index() >= g1.vertex_count() {
        return Err(DecompositionError::UnknownVertex(alloc::format!("{v1}")));
    }
    if v2.index() >= g2.vertex_count() {
        return Err(DecompositionError::UnknownVertex(alloc::format!("{v2}")));
    }
    if let Some(clash) = g2.names().iter().find(|n| g1.vertex(n).is_some()) {
        return Err(DecompositionError::NameClash(clash.clone()));
    }
    let offset = g1.vertex_count();
    let mut names: Vec<String> = g1.names().to_vec();
    let mut map = vec![v1; g2.vertex_count()];
    for w in g2.vertices().filter(|&w| w != v2) {
        map[w.index()] = VertexId::new(names.len());
        names.push(g2.name(w).into());
    }
    debug_assert_eq!(names.len(), offset + g2.vertex_count() - 1);
    let edges = g1
        .edges()
        .iter()
        .copied()
        .chain(g2.edges().iter().map(|e| LabeledEdge::new(map[e.source.index()], map[e.target.index()], map[e.label.index()])))
        .collect();
    Ok(LogGraph::from_parts(names, edges)?)
}

/// `part` was glued onto the union of parts `0..part` at `vertex`, which it
/// shares with part `attaches_to`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Identification {
    pub part: usize,
    pub attaches_to: usize,
    pub vertex: VertexId,
}

/// Rosebrock parts ordered so that each part after the first meets the
/// union of its predecessors in exactly one vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub parts: Vec<RosebrockSubLot>,
    pub identifications: Vec<Identification>,
}

impl Decomposition {
    pub fn s(&self) -> usize {
        self.parts.len()
    }

    /// Edge indices of each part, in `g`.
    pub fn edge_partition(&self, g: &LogGraph) -> Option<Vec<[usize; 2]>> {
        self.parts.iter().map(|p| Some([g.find_edge(&p.e1)?, g.find_edge(&p.e2)?])).collect()
    }

    /// Rebuilds the graph by gluing the parts in order with [`compose`].
    pub fn replay(&self, g: &LogGraph) -> Result<LogGraph, DecompositionError> {
        let Some(first) = self.parts.first() else {
            // An empty decomposition stands for a single vertex.
            return Ok(g.clone());
        };
        if self.identifications.len() + 1 != self.parts.len() {
            return Err(DecompositionError::UnknownEdge);
        }
        let mut built = first.to_graph(g);
        for id in &self.identifications {
            let part = self.parts.get(id.part).ok_or(DecompositionError::UnknownEdge)?;
            let shared = g.name(id.vertex);
            let piece = part.to_graph(g);
            let local = piece.vertex(shared).ok_or_else(|| DecompositionError::UnknownVertex(shared.into()))?;
            let fresh = fresh_name(shared, |n| g.vertex(n).is_some());
            let mut names = piece.names().to_vec();
            names[local.index()] = fresh;
            let piece = LogGraph::from_parts(names, piece.edges().to_vec())?;
            let anchor = built.vertex(shared).ok_or_else(|| DecompositionError::UnknownVertex(shared.into()))?;
            built = compose(&built, anchor, &piece, local)?;
        }
        Ok(built)
    }

    /// Checks every claim of the decomposition against `g` without trusting
    /// how it was produced.
    pub fn verify(&self, g: &LogGraph) -> bool {
        let m = g.vertex_count();
        if m.is_multiple_of(2) || self.s() != (m - 1) / 2 || !self.parts.iter().all(|p| p.is_valid_in(g)) {
            return false;
        }
        let Some(partition) = self.edge_partition(g) else { return false };
        let mut used = vec![false; g.edge_count()];
        for i in partition.into_iter().flatten() {
            if core::mem::replace(&mut used[i], true) {
                return false;
            }
        }
        used.iter().all(|&u| u) && self.replay(g).is_ok_and(|h| h.same_structure(g))
    }
}

pub(crate) fn fresh_name(base: &str, taken: impl Fn(&str) -> bool) -> String {
    let mut name = String::from(base);
    loop {
        name.push('_');
        if !taken(&name) {
            return name;
        }
    }
}

fn require_reduced_tree(g: &LogGraph) -> Result<(), DecompositionError> {
    if !g.is_tree() {
        return Err(DecompositionError::NotTree);
    }
    if !g.is_interior_reduced() {
        return Err(DecompositionError::NotInteriorReduced);
    }
    Ok(())
}

/// Decomposes a connected interior-reduced LOT into Rosebrock LOTs.
///
/// Returns `None` if no such decomposition exists.
pub fn decompose(g: &LogGraph) -> Result<Option<Decomposition>, DecompositionError> {
    let priority: Vec<usize> = (0..g.vertex_count()).collect();
    decompose_with_priority(g, &priority)
}

/// As [`decompose`], peeling leaves in increasing `priority[v]` order
/// instead of by index. The resulting edge partition does not depend on it.
pub fn decompose_with_priority(g: &LogGraph, priority: &[usize]) -> Result<Option<Decomposition>, DecompositionError> {
    require_reduced_tree(g)?;
    let m = g.vertex_count();
    if m.is_multiple_of(2) {
        return Ok(None);
    }
    let mut alive = vec![true; g.edge_count()];
    let mut degree: Vec<usize> = g.vertices().map(|v| g.degree(v)).collect();
    let mut parts = Vec::with_capacity((m - 1) / 2);
    for _ in 0..(m - 1) / 2 {
        let leaf = g
            .vertices()
            .filter(|v| degree[v.index()] == 1)
            .min_by_key(|v| (priority[v.index()], v.index()))
            .expect("a forest with edges has a leaf");
        let i1 = g.incident(leaf).iter().copied().find(|&i| alive[i]).expect("leaf edge");
        let e1 = g.edges()[i1];
        let middle = e1.other(leaf).expect("incident");
        let far = e1.label;
        let Some(i2) = g.edge_between(middle, far).filter(|&j| alive[j] && g.edges()[j].label == leaf) else {
            return Ok(None);
        };
        let e2 = g.edges()[i2];
        for (i, e) in [(i1, e1), (i2, e2)] {
            alive[i] = false;
            degree[e.source.index()] -= 1;
            degree[e.target.index()] -= 1;
        }
        parts.push(if i1 < i2 {
            RosebrockSubLot { a: leaf, b: middle, c: far, e1, e2 }
        } else {
            RosebrockSubLot { a: far, b: middle, c: leaf, e1: e2, e2: e1 }
        });
    }
    Ok(Some(order_parts(parts, m)))
}

/// Reorders parts so each one touches the union of the earlier ones:
/// start from the part peeled first, then repeatedly take the earliest
/// remaining part sharing a vertex with what has been placed.
fn order_parts(mut pending: Vec<RosebrockSubLot>, m: usize) -> Decomposition {
    let mut owner: Vec<Option<usize>> = vec![None; m];
    let mut parts: Vec<RosebrockSubLot> = Vec::with_capacity(pending.len());
    let mut identifications = Vec::new();
    while !pending.is_empty() {
        let pick = if parts.is_empty() {
            Some((0, None))
        } else {
            pending.iter().enumerate().find_map(|(i, p)| p.vertices().iter().find_map(|v| owner[v.index()].map(|o| (i, Some((o, *v))))))
        };
        let (i, link) = pick.expect("parts of a tree decomposition are connected");
        let part = pending.remove(i);
        let index = parts.len();
        if let Some((attaches_to, vertex)) = link {
            identifications.push(Identification { part: index, attaches_to, vertex });
        }
        for v in part.vertices() {
            owner[v.index()].get_or_insert(index);
        }
        parts.push(part);
    }
    Decomposition { parts, identifications }
}

/// Whether `g` has complexity `(m+1)/2`, decided through decomposability.
pub fn is_maximal_complexity(g: &LogGraph) -> Result<bool, DecompositionError> {
    Ok(decompose(g)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::RawLog;

    fn rosebrock_named(a: &str, b: &str, c: &str) -> LogGraph {
        LogGraph::from_raw(&RawLog::new([a, b, c]).edge(a, b, c).edge(b, c, a)).unwrap()
    }

    #[test]
    fn recognizes_fig3() {
        assert!(is_rosebrock(&fig3()));
        assert!(is_rosebrock(&fig3().with_reversed(&[0, 1])));
        assert!(!is_rosebrock(&fig1()));
        let broken = LogGraph::from_raw(&RawLog::new(["a", "b", "c"]).edge("a", "b", "c").edge("b", "c", "b")).unwrap();
        assert!(!is_rosebrock(&broken));
    }

    #[test]
    fn covers() {
        let g = fig3();
        for e in g.edges() {
            let cover = rosebrock_cover(&g, e).unwrap().unwrap();
            assert_eq!(cover.to_graph(&g), g);
        }
        let f = fig1();
        let cover = rosebrock_cover(&f, &f.edges()[0]).unwrap().unwrap();
        assert_eq!(cover.vertices(), ids(&f, &["a", "d", "c"])[..]);
        assert_eq!(rosebrock_cover(&f, &f.edges()[1]).unwrap(), None);
        let p = five_path();
        assert_eq!(rosebrock_cover(&p, &p.edges()[0]).unwrap(), None);
        let stranger = LabeledEdge::new(VertexId::new(0), VertexId::new(2), VertexId::new(1));
        assert_eq!(rosebrock_cover(&g, &stranger), Err(DecompositionError::UnknownEdge));
    }

    #[test]
    fn compose_two_rosebrocks() {
        let g1 = rosebrock_named("a", "b", "c");
        let g2 = rosebrock_named("d", "e", "f");
        let glued = compose(&g1, g1.vertex("a").unwrap(), &g2, g2.vertex("d").unwrap()).unwrap();
        assert_eq!(glued, double_rosebrock());
        assert!(glued.is_tree());
    }

    #[test]
    fn compose_errors() {
        let g = fig3();
        assert_eq!(compose(&g, VertexId::new(0), &g, VertexId::new(0)), Err(DecompositionError::NameClash("a".into())));
        let h = rosebrock_named("d", "e", "f");
        assert!(matches!(compose(&g, VertexId::new(9), &h, VertexId::new(0)), Err(DecompositionError::UnknownVertex(_))));
    }

    #[test]
    fn compose_with_single_vertex() {
        let g = fig3();
        let lone = LogGraph::from_raw(&RawLog::new(["z"])).unwrap();
        assert_eq!(compose(&g, VertexId::new(1), &lone, VertexId::new(0)).unwrap(), g);
    }

    #[test]
    fn compose_is_associative() {
        let a = rosebrock_named("a", "b", "c");
        let b = rosebrock_named("d", "e", "f");
        let c = rosebrock_named("g", "h", "i");
        let id = |g: &LogGraph, n: &str| g.vertex(n).unwrap();
        let ab = compose(&a, id(&a, "c"), &b, id(&b, "d")).unwrap();
        let left = compose(&ab, id(&ab, "f"), &c, id(&c, "g")).unwrap();
        let bc = compose(&b, id(&b, "f"), &c, id(&c, "g")).unwrap();
        let right = compose(&a, id(&a, "c"), &bc, id(&bc, "d")).unwrap();
        assert!(left.same_structure(&right));
        assert_eq!(left.vertex_count(), 7);
    }

    #[test]
    fn decompose_fixtures() {
        let one = decompose(&fig3()).unwrap().unwrap();
        assert_eq!(one.s(), 1);
        assert!(one.verify(&fig3()));

        let g = double_rosebrock();
        let two = decompose(&g).unwrap().unwrap();
        assert_eq!(two.s(), 2);
        assert_eq!(two.identifications, [Identification { part: 1, attaches_to: 0, vertex: g.vertex("a").unwrap() }]);
        assert!(two.replay(&g).unwrap().same_structure(&g));
        assert!(two.verify(&g));

        assert_eq!(decompose(&fig1()).unwrap(), None);
        assert_eq!(decompose(&five_path()).unwrap(), None);
        assert_eq!(decompose(&single()).unwrap().unwrap().s(), 0);
    }

    #[test]
    fn decompose_preconditions() {
        let tri = LogGraph::from_raw(&RawLog::new(["a", "b", "c"]).edge("a", "b", "c").edge("b", "c", "a").edge("c", "a", "b")).unwrap();
        assert_eq!(decompose(&tri), Err(DecompositionError::NotTree));
        let unreduced = LogGraph::from_raw(&RawLog::new(["a", "b", "c"]).edge("a", "b", "a").edge("b", "c", "a")).unwrap();
        assert_eq!(decompose(&unreduced), Err(DecompositionError::NotInteriorReduced));
    }

    #[test]
    fn maximal_predicate() {
        assert!(is_maximal_complexity(&fig3()).unwrap());
        assert!(!is_maximal_complexity(&fig2()).unwrap());
        assert!(!is_maximal_complexity(&five_path()).unwrap());
    }

    #[test]
    fn verify_rejects_tampering() {
        let g = double_rosebrock();
        let mut d = decompose(&g).unwrap().unwrap();
        d.parts[1] = d.parts[0];
        assert!(!d.verify(&g));
    }
}
