//! Complexity: the least size of a seed from which every vertex is reachable.
//!
//! Three routes are provided: the greedy construction that never needs more
//! than `⌊(m+1)/2⌋` seeds on connected interior-reduced graphs, an exact
//! search over subsets in lexicographic order, and closed-form bounds.
//! [`submaximal_seed`] builds a seed one smaller than that bound around an
//! edge that no Rosebrock sub-LOT covers.

use alloc::vec;
use alloc::vec::Vec;

use crate::decomposition::cover_of_edge;
use crate::graph::{LabeledEdge, LogGraph, VertexId};
use crate::reachability::Reacher;
use crate::subsets::Combinations;

/// Exact search refuses graphs above this many vertices unless overridden.
pub const DEFAULT_MAX_VERTICES: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Exact,
    Greedy,
    TrivialBound,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Greedy => "greedy",
            Method::TrivialBound => "trivial-bound",
        }
    }
}

/// Configuration around an uncovered edge `{x, y}` labeled `z`, with `x`
/// the endpoint nearer to `z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SubmaximalCase {
    /// `z` is adjacent to `x`.
    Adjacent,
    /// The path from `z` to `x` carries no label in `{x, y}`.
    PathFree,
    /// Some path edge other than the last is labeled `x` or `y`.
    PathInterior,
    /// The last path edge is labeled `y`.
    PathFinal,
}

impl SubmaximalCase {
    pub fn as_str(self) -> &'static str {
        match self {
            SubmaximalCase::Adjacent => "case-1",
            SubmaximalCase::PathFree => "case-2.1",
            SubmaximalCase::PathInterior => "case-2.2",
            SubmaximalCase::PathFinal => "case-2.3",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexityReport {
    /// Exact complexity for [`Method::Exact`], otherwise an upper bound.
    pub value: usize,
    /// A seed of size `value` from which the whole graph is reachable.
    pub witness: Vec<VertexId>,
    pub method: Method,
    pub lower_bound: usize,
    pub subsets_examined: u64,
    /// Closure size after each greedy step (empty for other methods).
    pub closure_sizes: Vec<usize>,
    pub case: Option<SubmaximalCase>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComplexityError {
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph is not interior reduced")]
    NotInteriorReduced,
    #[error("graph is not a tree")]
    NotTree,
    #[error("graph has {m} vertices, above the exact-search limit of {limit}")]
    TooLarge { m: usize, limit: usize },
    #[error("complexity exceeds the budget; it lies in [{lower}, {upper}]")]
    BudgetExceeded { lower: usize, upper: usize, witness: Vec<VertexId> },
    #[error("edge is not part of the graph")]
    UnknownEdge,
    #[error("edge is covered by a Rosebrock sub-LOT")]
    EdgeIsCovered,
    #[error("graph has an even number of vertices")]
    EvenVertexCount,
}

fn require_connected(g: &LogGraph) -> Result<(), ComplexityError> {
    if g.is_connected() {
        Ok(())
    } else {
        Err(ComplexityError::Disconnected)
    }
}

/// `⌊(m+1)/2⌋`.
pub fn upper_bound_for(m: usize) -> usize {
    m.div_ceil(2)
}

/// Extends `seed` greedily until the whole graph is reachable.
///
/// While the closure is incomplete, some edge joins a reachable vertex to an
/// unreachable one, and its label is unreachable; the label of such an edge
/// is added, choosing the lowest label index (then lowest edge index).
/// Returns the closure size after each extension.
fn extend_greedily(g: &LogGraph, seed: &mut Vec<VertexId>) -> Vec<usize> {
    let m = g.vertex_count();
    let mut reacher = Reacher::new(g).without_shortcut();
    let mut sizes = Vec::new();
    loop {
        let size = reacher.closure_size(seed);
        sizes.push(size);
        if size == m {
            return sizes;
        }
        let reached = reacher.reached();
        let pick = g
            .edges()
            .iter()
            .filter(|e| reached[e.source.index()] != reached[e.target.index()])
            .map(|e| e.label)
            .min()
            .expect("a connected graph with an incomplete closure has a boundary edge");
        debug_assert!(!reached[pick.index()]);
        seed.push(pick);
    }
}

fn greedy_from(g: &LogGraph, mut seed: Vec<VertexId>, case: Option<SubmaximalCase>) -> ComplexityReport {
    let closure_sizes = extend_greedily(g, &mut seed);
    ComplexityReport {
        value: seed.len(),
        witness: seed,
        method: Method::Greedy,
        lower_bound: trivial_lower(g),
        subsets_examined: 0,
        closure_sizes,
        case,
    }
}

/// Greedy seed starting from the lowest-index vertex.
///
/// Each extension after the first reaches at least two new vertices, so the
/// result has at most `⌊(m+1)/2⌋` elements.
pub fn greedy_seed(g: &LogGraph) -> Result<ComplexityReport, ComplexityError> {
    require_connected(g)?;
    if !g.is_interior_reduced() {
        return Err(ComplexityError::NotInteriorReduced);
    }
    Ok(greedy_from(g, vec![VertexId::new(0)], None))
}

fn trivial_lower(g: &LogGraph) -> usize {
    if g.is_interior_reduced() && g.vertex_count() >= 2 {
        2
    } else {
        1
    }
}

/// One plus the label image, or every vertex, whichever is smaller.
fn trivial_witness(g: &LogGraph) -> Vec<VertexId> {
    let mut labels: Vec<VertexId> = g.vertices().filter(|&v| !g.labeled_by(v).is_empty()).collect();
    if labels.len() + 1 >= g.vertex_count() {
        return g.vertices().collect();
    }
    if let Some(extra) = g.vertices().find(|v| !labels.contains(v)) {
        labels.push(extra);
        labels.sort_unstable();
    }
    labels
}

/// Best known upper bound together with a seed attaining it.
fn best_upper(g: &LogGraph) -> ComplexityReport {
    let trivial = trivial_witness(g);
    if g.is_interior_reduced() {
        let greedy = greedy_from(g, vec![VertexId::new(0)], None);
        if greedy.value <= trivial.len() {
            return greedy;
        }
    }
    ComplexityReport {
        value: trivial.len(),
        witness: trivial,
        method: Method::TrivialBound,
        lower_bound: trivial_lower(g),
        subsets_examined: 0,
        closure_sizes: Vec::new(),
        case: None,
    }
}

/// `(lower, upper)` bounds on the complexity of a connected graph.
///
/// The lower bound is 2 for interior-reduced graphs with two or more
/// vertices and 1 otherwise. The upper bound is the least of `m`, one plus
/// the number of distinct labels, and, on interior-reduced graphs,
/// `⌊(m+1)/2⌋` and the greedy seed size.
pub fn complexity_bounds(g: &LogGraph) -> Result<(usize, usize), ComplexityError> {
    require_connected(g)?;
    let m = g.vertex_count();
    let mut upper = m.min(1 + g.label_image_size());
    if g.is_interior_reduced() {
        upper = upper.min(upper_bound_for(m)).min(best_upper(g).value);
    }
    Ok((trivial_lower(g), upper))
}

/// The lexicographically least `k`-subset (by vertex index) from which the
/// graph is reachable, optionally only among subsets whose smallest element
/// is `first`. Also returns the number of subsets tried.
pub fn first_witness(g: &LogGraph, k: usize, first: Option<usize>) -> (Option<Vec<VertexId>>, u64) {
    let m = g.vertex_count();
    let mut subsets = match first {
        Some(f) => Combinations::with_first(m, k, f),
        None => Combinations::new(m, k),
    };
    let mut reacher = Reacher::new(g);
    let mut seed = Vec::with_capacity(k);
    let mut examined = 0;
    while let Some(subset) = subsets.next() {
        examined += 1;
        seed.clear();
        seed.extend(subset.iter().map(|&i| VertexId::new(i)));
        if reacher.reaches_all(&seed) {
            return (Some(seed), examined);
        }
    }
    (None, examined)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactOptions {
    /// Largest subset size to try.
    pub budget: Option<usize>,
    pub max_vertices: usize,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions { budget: None, max_vertices: DEFAULT_MAX_VERTICES }
    }
}

/// Search plan shared by sequential and sharded exact searches.
#[derive(Clone, Debug)]
pub struct ExactPlan {
    pub lower: usize,
    /// Largest subset size the search will try.
    pub last_size: usize,
    /// Best seed known before searching.
    pub fallback: ComplexityReport,
}

pub fn plan_exact(g: &LogGraph, options: &ExactOptions) -> Result<ExactPlan, ComplexityError> {
    require_connected(g)?;
    let m = g.vertex_count();
    if m > options.max_vertices {
        return Err(ComplexityError::TooLarge { m, limit: options.max_vertices });
    }
    let fallback = best_upper(g);
    let last_size = options.budget.map_or(fallback.value, |b| b.min(fallback.value));
    Ok(ExactPlan { lower: trivial_lower(g), last_size, fallback })
}

impl ExactPlan {
    /// Turns the outcome of the search into a report or a budget error.
    pub fn finish(&self, found: Option<Vec<VertexId>>, examined: u64) -> Result<ComplexityReport, ComplexityError> {
        match found {
            Some(witness) => Ok(ComplexityReport {
                value: witness.len(),
                lower_bound: self.lower.min(witness.len()),
                witness,
                method: Method::Exact,
                subsets_examined: examined,
                closure_sizes: Vec::new(),
                case: None,
            }),
            None => Err(ComplexityError::BudgetExceeded {
                lower: self.lower.max(self.last_size + 1),
                upper: self.fallback.value,
                witness: self.fallback.witness.clone(),
            }),
        }
    }
}

/// Exact complexity with the default vertex limit.
pub fn exact_complexity(g: &LogGraph, budget: Option<usize>) -> Result<ComplexityReport, ComplexityError> {
    exact_complexity_with(g, &ExactOptions { budget, ..ExactOptions::default() })
}

/// Tries subset sizes `1, 2, …` and returns the lexicographically least
/// witness of the first size that works.
pub fn exact_complexity_with(g: &LogGraph, options: &ExactOptions) -> Result<ComplexityReport, ComplexityError> {
    let plan = plan_exact(g, options)?;
    let mut examined = 0;
    for k in 1..=plan.last_size {
        let (found, tried) = first_witness(g, k, None);
        examined += tried;
        if found.is_some() {
            return plan.finish(found, examined);
        }
    }
    plan.finish(None, examined)
}

/// Vertices on the tree path from `from` to `to`, both included.
fn tree_path(g: &LogGraph, from: VertexId, to: VertexId) -> Vec<VertexId> {
    let mut parent: Vec<Option<VertexId>> = vec![None; g.vertex_count()];
    let mut queue = vec![from];
    parent[from.index()] = Some(from);
    let mut head = 0;
    while head < queue.len() {
        let v = queue[head];
        head += 1;
        for &i in g.incident(v) {
            let u = g.edges()[i].other(v).expect("incident");
            if parent[u.index()].is_none() {
                parent[u.index()] = Some(v);
                queue.push(u);
            }
        }
    }
    let mut path = vec![to];
    let mut v = to;
    while v != from {
        v = parent[v.index()].expect("tree is connected");
        path.push(v);
    }
    path.reverse();
    path
}

/// A seed of size at most `⌊(m+1)/2⌋ − 1` for an odd-order interior-reduced
/// LOT, built around `uncovered`, an edge lying in no Rosebrock sub-LOT.
///
/// With `uncovered = {x, y}` labeled `z` and `x` the endpoint nearer to `z`,
/// the initial seed is chosen so that it reaches at least twice as many
/// vertices as it has elements, then grown greedily:
///
/// * `z` adjacent to `x` via an edge labeled `w`: seed `{z, w}` reaches
///   `x, y, z, w` (and `w ≠ y` because the edge is uncovered);
/// * last edge of the path `z … x` labeled `y`: seed `{z, x}` reaches `y` and
///   the second-to-last path vertex;
/// * otherwise walk the path from `z`, adding the label of each edge whose
///   far vertex is not yet reachable; reaching `x` brings `y` for free.
pub fn submaximal_seed(g: &LogGraph, uncovered: &LabeledEdge) -> Result<ComplexityReport, ComplexityError> {
    if !g.is_tree() {
        return Err(ComplexityError::NotTree);
    }
    if !g.is_interior_reduced() {
        return Err(ComplexityError::NotInteriorReduced);
    }
    if g.vertex_count().is_multiple_of(2) {
        return Err(ComplexityError::EvenVertexCount);
    }
    let index = g.find_edge(uncovered).ok_or(ComplexityError::UnknownEdge)?;
    if cover_of_edge(g, index).is_some() {
        return Err(ComplexityError::EdgeIsCovered);
    }
    let e = g.edges()[index];
    let z = e.label;

    for (near, _far) in [(e.source, e.target), (e.target, e.source)] {
        if let Some(j) = g.edge_between(z, near) {
            let w = g.edges()[j].label;
            return Ok(greedy_from(g, vec![z, w], Some(SubmaximalCase::Adjacent)));
        }
    }

    let to_source = tree_path(g, z, e.source);
    let (path, far) = if to_source.contains(&e.target) { (tree_path(g, z, e.target), e.source) } else { (to_source, e.target) };
    let near = *path.last().expect("nonempty path");
    let path_edges: Vec<usize> =
        path.windows(2).map(|w| g.edge_between(w[0], w[1]).expect("consecutive path vertices are adjacent")).collect();
    let label_of = |i: usize| g.edges()[i].label;
    let last = *path_edges.last().expect("z is not adjacent to x");

    if label_of(last) == far {
        return Ok(greedy_from(g, vec![z, near], Some(SubmaximalCase::PathFinal)));
    }
    let case = if path_edges.iter().any(|&i| label_of(i) == near || label_of(i) == far) {
        SubmaximalCase::PathInterior
    } else {
        SubmaximalCase::PathFree
    };
    let mut seed = vec![z];
    let mut reacher = Reacher::new(g).without_shortcut();
    for (step, &i) in path_edges.iter().enumerate() {
        reacher.closure_size(&seed);
        let reached = reacher.reached();
        if reached[near.index()] {
            break;
        }
        if !reached[path[step + 1].index()] {
            seed.push(label_of(i));
        }
    }
    Ok(greedy_from(g, seed, Some(case)))
}
