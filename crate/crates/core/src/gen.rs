//! Fixture generators: Rosebrock chains, random interior-reduced LOTs and
//! exhaustive censuses of small LOTs.
//!
//! Vertex names follow spreadsheet columns: `a … z, aa, ab, …`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decomposition::compose;
use crate::graph::{LabeledEdge, LogGraph, VertexId};

/// Largest vertex count enumerated without an explicit override.
pub const DEFAULT_CENSUS_CAP: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("no interior-reduced LOT has {0} vertices")]
    InvalidSize(usize),
    #[error("census of {m} vertices exceeds the cap of {cap}")]
    SizeTooLarge { m: usize, cap: usize },
    #[error("a chain needs at least one part")]
    NoParts,
}

/// Where each new Rosebrock part is glued onto the graph built so far.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Attachment {
    /// The most recently created vertex.
    Chain,
    /// The first vertex.
    Star,
    /// A uniformly random existing vertex.
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenMode {
    Random,
    Exhaustive,
    RosebrockChain { parts: usize, attachment: Attachment },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenSpec {
    pub m: usize,
    pub rng_seed: u64,
    pub mode: GenMode,
}

impl GenSpec {
    /// Runs the generator. Chains ignore `m` (it is always `2s + 1`); the
    /// census honours [`DEFAULT_CENSUS_CAP`].
    pub fn generate(&self) -> Result<Vec<LogGraph>, GenError> {
        match self.mode {
            GenMode::Random => Ok(vec![random_lot(self.m, self.rng_seed)?]),
            GenMode::Exhaustive => Ok(enumerate_lots(self.m, DEFAULT_CENSUS_CAP)?.collect()),
            GenMode::RosebrockChain { parts, attachment } => Ok(vec![rosebrock_chain(parts, attachment, self.rng_seed)?]),
        }
    }
}

/// `a, b, …, z, aa, ab, …`
pub fn vertex_name(mut index: usize) -> String {
    let mut bytes = Vec::new();
    loop {
        bytes.push(b'a' + (index % 26) as u8);
        if index < 26 {
            break;
        }
        index = index / 26 - 1;
    }
    bytes.reverse();
    String::from_utf8(bytes).expect("ascii")
}

fn names(m: usize) -> Vec<String> {
    (0..m).map(vertex_name).collect()
}

fn rosebrock_part(first: usize) -> LogGraph {
    let [a, b, c] = [0, 1, 2].map(VertexId::new);
    LogGraph::from_parts((first..first + 3).map(vertex_name).collect(), vec![LabeledEdge::new(a, b, c), LabeledEdge::new(b, c, a)])
        .expect("Rosebrock LOT")
}

/// Glues `parts` Rosebrock LOTs together. Part `k` is created on the names
/// `3k, 3k+1, 3k+2`, and its first vertex is identified with the
/// attachment vertex.
pub fn rosebrock_chain(parts: usize, attachment: Attachment, rng_seed: u64) -> Result<LogGraph, GenError> {
    if parts == 0 {
        return Err(GenError::NoParts);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut g = rosebrock_part(0);
    for k in 1..parts {
        let anchor = match attachment {
            Attachment::Chain => VertexId::new(g.vertex_count() - 1),
            Attachment::Star => VertexId::new(0),
            Attachment::Random => VertexId::new(rng.gen_range(0..g.vertex_count())),
        };
        g = compose(&g, anchor, &rosebrock_part(3 * k), VertexId::new(0)).expect("fresh names never clash");
    }
    Ok(g)
}

/// Decodes a Prüfer sequence over `0..m` into tree edges `(min, max)`.
pub fn prufer_decode(m: usize, sequence: &[usize]) -> Vec<(usize, usize)> {
    debug_assert_eq!(sequence.len() + 2, m);
    let mut degree = vec![1usize; m];
    for &v in sequence {
        degree[v] += 1;
    }
    let mut edges = Vec::with_capacity(m - 1);
    for &v in sequence {
        let leaf = (0..m).find(|&u| degree[u] == 1).expect("a leaf always exists");
        edges.push((leaf.min(v), leaf.max(v)));
        degree[leaf] -= 1;
        degree[v] -= 1;
    }
    let last: Vec<usize> = (0..m).filter(|&u| degree[u] == 1).collect();
    edges.push((last[0], last[1]));
    edges
}

fn lot_from(m: usize, tree: &[(usize, usize)], labels: &[usize]) -> LogGraph {
    let edges =
        tree.iter().zip(labels).map(|(&(s, t), &l)| LabeledEdge::new(VertexId::new(s), VertexId::new(t), VertexId::new(l))).collect();
    LogGraph::from_parts(names(m), edges).expect("trees are simple")
}

/// The `choice`-th vertex (in index order) that is neither `s` nor `t`.
fn off_edge(s: usize, t: usize, choice: usize) -> usize {
    let (lo, hi) = (s.min(t), s.max(t));
    let mut v = choice;
    if v >= lo {
        v += 1;
    }
    if v >= hi {
        v += 1;
    }
    v
}

/// A uniformly random labeled tree (random Prüfer sequence) with every edge
/// labeled uniformly among the vertices off that edge.
pub fn random_lot(m: usize, rng_seed: u64) -> Result<LogGraph, GenError> {
    if m == 1 {
        return Ok(LogGraph::from_parts(names(1), Vec::new()).expect("single vertex"));
    }
    if m < 3 {
        return Err(GenError::InvalidSize(m));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let sequence: Vec<usize> = (0..m - 2).map(|_| rng.gen_range(0..m)).collect();
    let tree = prufer_decode(m, &sequence);
    let labels: Vec<usize> = tree.iter().map(|&(s, t)| off_edge(s, t, rng.gen_range(0..m - 2))).collect();
    Ok(lot_from(m, &tree, &labels))
}

/// Closed-form census size `m^(m-2) · (m-2)^(m-1)` (1 for `m = 1`).
pub fn census_size(m: usize) -> u64 {
    match m {
        0 => 0,
        1 => 1,
        _ => (m as u64).pow(m as u32 - 2) * ((m - 2) as u64).pow(m as u32 - 1),
    }
}

/// Number of labeled trees on `m` vertices.
pub fn tree_count(m: usize) -> u64 {
    match m {
        0 => 0,
        1 => 1,
        _ => (m as u64).pow(m as u32 - 2),
    }
}

/// Edges of the tree whose Prüfer sequence has lexicographic rank `index`.
pub fn census_tree(m: usize, index: u64) -> Vec<(usize, usize)> {
    if m < 2 {
        return Vec::new();
    }
    let mut sequence = vec![0; m - 2];
    let mut rest = index;
    for slot in sequence.iter_mut().rev() {
        *slot = (rest % m as u64) as usize;
        rest /= m as u64;
    }
    prufer_decode(m, &sequence)
}

/// Every interior-reduced labeling of one tree, in odometer order.
pub fn labelings(m: usize, tree: Vec<(usize, usize)>) -> impl Iterator<Item = LogGraph> {
    let choices = if tree.is_empty() { 1 } else { m.saturating_sub(2) };
    let mut digits = vec![0usize; tree.len()];
    let mut done = choices == 0;
    core::iter::from_fn(move || {
        if done {
            return None;
        }
        let labels: Vec<usize> = tree.iter().zip(&digits).map(|(&(s, t), &d)| off_edge(s, t, d)).collect();
        let g = lot_from(m, &tree, &labels);
        done = true;
        for d in digits.iter_mut() {
            *d += 1;
            if *d < choices {
                done = false;
                break;
            }
            *d = 0;
        }
        Some(g)
    })
}

/// Every interior-reduced LOT on the names `a, b, …` with `m` vertices:
/// trees in Prüfer order, each crossed with all its labelings.
pub fn enumerate_lots(m: usize, cap: usize) -> Result<impl Iterator<Item = LogGraph>, GenError> {
    if m > cap {
        return Err(GenError::SizeTooLarge { m, cap });
    }
    if m == 0 {
        return Err(GenError::InvalidSize(0));
    }
    Ok((0..tree_count(m)).flat_map(move |i| labelings(m, census_tree(m, i))))
}
