//! Asphericity certificates.
//!
//! A certificate names a sufficient condition for the 2-complex of a LOT to
//! be aspherical and carries evidence that can be rechecked from scratch:
//!
//! * complexity two: an exact seed of size two;
//! * maximal complexity: a decomposition into Rosebrock LOTs;
//! * injective labeling: the list of edge labels, all distinct;
//! * amalgam: a split `g = left ⊔ right` with a certificate for each side.
//!
//! Absence of a certificate says nothing about asphericity.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::complexity::{exact_complexity_with, ComplexityReport, ExactOptions, Method, DEFAULT_MAX_VERTICES};
use crate::decomposition::{compose, decompose, fresh_name, Decomposition};
use crate::graph::{LabeledEdge, LogGraph, VertexId};
use crate::reachability::naive_closure;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Effort {
    /// Linear-time checks only.
    Cheap,
    /// Also runs the exponential exact search and amalgam splitting.
    Exhaustive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Reason {
    ComplexityTwo,
    MaximalComplexity,
    InjectiveLabeling,
    AmalgamOfAspherical,
}

impl Reason {
    pub fn as_str(self) -> &'static str {
        match self {
            Reason::ComplexityTwo => "complexity_two",
            Reason::MaximalComplexity => "maximal_complexity",
            Reason::InjectiveLabeling => "injective_labeling",
            Reason::AmalgamOfAspherical => "amalgam_of_aspherical",
        }
    }
}

/// `whole = left ⊔ right`, glued at the vertex both share by name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmalgamSplit {
    pub vertex: String,
    pub left: LogGraph,
    pub right: LogGraph,
    pub left_certificate: AsphericityCertificate,
    pub right_certificate: AsphericityCertificate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evidence {
    ComplexityTwo(ComplexityReport),
    MaximalComplexity(Decomposition),
    /// Label of every edge, in edge order.
    InjectiveLabeling(Vec<VertexId>),
    Amalgam(Box<AmalgamSplit>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AsphericityCertificate {
    pub reason: Reason,
    pub evidence: Evidence,
}

impl AsphericityCertificate {
    fn new(evidence: Evidence) -> Self {
        let reason = match evidence {
            Evidence::ComplexityTwo(_) => Reason::ComplexityTwo,
            Evidence::MaximalComplexity(_) => Reason::MaximalComplexity,
            Evidence::InjectiveLabeling(_) => Reason::InjectiveLabeling,
            Evidence::Amalgam(_) => Reason::AmalgamOfAspherical,
        };
        AsphericityCertificate { reason, evidence }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CertifyError {
    #[error("graph is not a tree")]
    NotTree,
    #[error("graph is not interior reduced")]
    NotInteriorReduced,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("graph is not an interior-reduced tree")]
    Precondition,
    #[error("evidence does not match the stated reason")]
    ReasonMismatch,
    #[error("witness is not a complete seed of size two")]
    BadWitness,
    #[error("a single vertex already reaches the whole graph")]
    NotMinimal,
    #[error("decomposition does not reproduce the graph")]
    BadDecomposition,
    #[error("labeling audit does not match the graph or repeats a label")]
    BadLabeling,
    #[error("amalgam split does not reproduce the graph")]
    BadSplit,
}

fn require_reduced_tree(g: &LogGraph) -> Result<(), CertifyError> {
    if !g.is_tree() {
        return Err(CertifyError::NotTree);
    }
    if !g.is_interior_reduced() {
        return Err(CertifyError::NotInteriorReduced);
    }
    Ok(())
}

/// Looks for a certificate, cheapest condition first: Rosebrock
/// decomposition, injective labeling, then (exhaustive effort only) exact
/// complexity two and amalgam splitting at cut vertices.
pub fn certify_aspherical(g: &LogGraph, effort: Effort) -> Result<Option<AsphericityCertificate>, CertifyError> {
    require_reduced_tree(g)?;
    Ok(search(g, effort))
}

fn search(g: &LogGraph, effort: Effort) -> Option<AsphericityCertificate> {
    if let Ok(Some(d)) = decompose(g) {
        return Some(AsphericityCertificate::new(Evidence::MaximalComplexity(d)));
    }
    if g.is_injective() {
        let labels = g.edges().iter().map(|e| e.label).collect();
        return Some(AsphericityCertificate::new(Evidence::InjectiveLabeling(labels)));
    }
    if effort == Effort::Cheap {
        return None;
    }
    let options = ExactOptions { budget: Some(2), max_vertices: DEFAULT_MAX_VERTICES };
    if let Ok(report) = exact_complexity_with(g, &options) {
        if report.value == 2 {
            return Some(AsphericityCertificate::new(Evidence::ComplexityTwo(report)));
        }
    }
    amalgam_splits(g).into_iter().find_map(|(vertex, left, right)| {
        let left_certificate = search(&left, effort)?;
        let right_certificate = search(&right, effort)?;
        Some(AsphericityCertificate::new(Evidence::Amalgam(Box::new(AmalgamSplit {
            vertex,
            left,
            right,
            left_certificate,
            right_certificate,
        }))))
    })
}

/// Splits `g` at each cut vertex `v` into two sub-LOTs meeting only at `v`
/// whose edges take labels from their own side. Branches of `g - v` that
/// borrow labels from one another stay on the same side.
pub fn amalgam_splits(g: &LogGraph) -> Vec<(String, LogGraph, LogGraph)> {
    let m = g.vertex_count();
    let mut splits = Vec::new();
    for v in g.vertices().filter(|&v| g.degree(v) >= 2) {
        // branch[u] = index of the component of g - v containing u.
        let mut branch: Vec<Option<usize>> = vec![None; m];
        let roots: Vec<VertexId> = g.incident(v).iter().map(|&i| g.edges()[i].other(v).expect("incident")).collect();
        for (b, &root) in roots.iter().enumerate() {
            let mut stack = vec![root];
            branch[root.index()] = Some(b);
            while let Some(u) = stack.pop() {
                for &i in g.incident(u) {
                    let w = g.edges()[i].other(u).expect("incident");
                    if w != v && branch[w.index()].is_none() {
                        branch[w.index()] = Some(b);
                        stack.push(w);
                    }
                }
            }
        }
        let edge_branch = |e: &LabeledEdge| {
            let inner = if e.source == v { e.target } else { e.source };
            branch[inner.index()].expect("every non-cut vertex lies in a branch")
        };
        let mut class: Vec<usize> = (0..roots.len()).collect();
        let find = |class: &Vec<usize>, mut x: usize| {
            while class[x] != x {
                x = class[x];
            }
            x
        };
        for e in g.edges() {
            if let Some(lb) = branch[e.label.index()] {
                let (a, b) = (find(&class, edge_branch(e)), find(&class, lb));
                if a != b {
                    class[a.max(b)] = a.min(b);
                }
            }
        }
        let first = find(&class, 0);
        if (0..roots.len()).all(|b| find(&class, b) == first) {
            continue;
        }
        let on_left = |e: &LabeledEdge| find(&class, edge_branch(e)) == first;
        let left = induced(g, v, |e| on_left(e));
        let right = induced(g, v, |e| !on_left(e));
        splits.push((String::from(g.name(v)), left, right));
    }
    splits
}

/// Subgraph made of the selected edges, their endpoints and labels, and `v`.
fn induced(g: &LogGraph, v: VertexId, keep: impl Fn(&LabeledEdge) -> bool) -> LogGraph {
    let edges: Vec<LabeledEdge> = g.edges().iter().copied().filter(|e| keep(e)).collect();
    let mut used = vec![false; g.vertex_count()];
    used[v.index()] = true;
    for e in &edges {
        used[e.source.index()] = true;
        used[e.target.index()] = true;
        used[e.label.index()] = true;
    }
    let mut local = vec![VertexId::new(usize::MAX); g.vertex_count()];
    let mut names = Vec::new();
    for w in g.vertices().filter(|w| used[w.index()]) {
        local[w.index()] = VertexId::new(names.len());
        names.push(String::from(g.name(w)));
    }
    let edges = edges.iter().map(|e| LabeledEdge::new(local[e.source.index()], local[e.target.index()], local[e.label.index()])).collect();
    LogGraph::from_parts(names, edges).expect("subgraph of a simple graph")
}

/// Rechecks a certificate against `g` using only its evidence.
pub fn verify_certificate(g: &LogGraph, certificate: &AsphericityCertificate) -> Result<(), VerifyError> {
    if !g.is_tree() || !g.is_interior_reduced() {
        return Err(VerifyError::Precondition);
    }
    match (&certificate.reason, &certificate.evidence) {
        (Reason::ComplexityTwo, Evidence::ComplexityTwo(report)) => verify_complexity_two(g, report),
        (Reason::MaximalComplexity, Evidence::MaximalComplexity(d)) => {
            if d.verify(g) {
                Ok(())
            } else {
                Err(VerifyError::BadDecomposition)
            }
        }
        (Reason::InjectiveLabeling, Evidence::InjectiveLabeling(labels)) => verify_labeling(g, labels),
        (Reason::AmalgamOfAspherical, Evidence::Amalgam(split)) => verify_split(g, split),
        _ => Err(VerifyError::ReasonMismatch),
    }
}

fn verify_complexity_two(g: &LogGraph, report: &ComplexityReport) -> Result<(), VerifyError> {
    let m = g.vertex_count();
    let w = &report.witness;
    if report.method != Method::Exact
        || report.value != 2
        || w.len() != 2
        || w[0] == w[1]
        || w.iter().any(|v| v.index() >= m)
        || !naive_closure(g, w).iter().all(|&r| r)
    {
        return Err(VerifyError::BadWitness);
    }
    if g.vertices().any(|v| naive_closure(g, &[v]).iter().all(|&r| r)) {
        return Err(VerifyError::NotMinimal);
    }
    Ok(())
}

fn verify_labeling(g: &LogGraph, labels: &[VertexId]) -> Result<(), VerifyError> {
    if labels.len() != g.edge_count() || g.edges().iter().zip(labels).any(|(e, l)| e.label != *l) {
        return Err(VerifyError::BadLabeling);
    }
    let mut sorted = labels.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(VerifyError::BadLabeling);
    }
    Ok(())
}

fn verify_split(g: &LogGraph, split: &AmalgamSplit) -> Result<(), VerifyError> {
    let (left, right) = (&split.left, &split.right);
    let (Some(anchor), Some(shared)) = (left.vertex(&split.vertex), right.vertex(&split.vertex)) else {
        return Err(VerifyError::BadSplit);
    };
    if left.vertex_count() < 2 || right.vertex_count() < 2 {
        return Err(VerifyError::BadSplit);
    }
    let fresh = fresh_name(&split.vertex, |n| g.vertex(n).is_some() || right.vertex(n).is_some());
    let mut names = right.names().to_vec();
    names[shared.index()] = fresh;
    let renamed = LogGraph::from_parts(names, right.edges().to_vec()).map_err(|_| VerifyError::BadSplit)?;
    let glued = compose(left, anchor, &renamed, shared).map_err(|_| VerifyError::BadSplit)?;
    if !glued.same_structure(g) {
        return Err(VerifyError::BadSplit);
    }
    verify_certificate(left, &split.left_certificate)?;
    verify_certificate(right, &split.right_certificate)
}
