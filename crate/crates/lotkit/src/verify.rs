//! Invariant sweep over the exhaustive census and random samples.
//!
//! Every check that asks "does this seed reach everything" goes through a
//! pluggable closure oracle, so a deliberately broken oracle can prove the
//! harness actually reports failures.

use std::io;
use std::path::{Path, PathBuf};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use lotkit_core::certify::{certify_aspherical, verify_certificate, Effort};
use lotkit_core::complexity::{exact_complexity, greedy_seed, submaximal_seed, upper_bound_for};
use lotkit_core::decomposition::{cover_of_edge, decompose};
use lotkit_core::gen::{census_tree, labelings, random_lot, tree_count};
use lotkit_core::graph::{LogGraph, VertexId};
use lotkit_core::reachability::naive_closure;

use crate::formats::serialize_lot;

/// `oracle(g, seed)[v]` says whether `v` is in the closure of `seed`.
pub type ClosureOracle = fn(&LogGraph, &[VertexId]) -> Vec<bool>;

/// Minimality of exact witnesses is rechecked up to this many vertices.
const MINIMALITY_LIMIT: usize = 12;

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    /// Census sizes `3..=max_m`.
    pub max_m: usize,
    /// Random LOTs drawn at each of `sample_sizes`.
    pub samples: usize,
    pub sample_sizes: Vec<usize>,
    pub seed: u64,
    pub oracle: ClosureOracle,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { max_m: 5, samples: 0, sample_sizes: vec![6, 7], seed: 0, oracle: naive_closure }
    }
}

#[derive(Clone, Debug)]
pub struct Finding {
    pub check: &'static str,
    pub detail: String,
    pub graph: LogGraph,
}

#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    /// `(m, graphs checked)` for each census size.
    pub census: Vec<(usize, u64)>,
    pub sampled: Vec<(usize, u64)>,
    /// Sorted smallest graph first.
    pub findings: Vec<Finding>,
}

impl VerifyReport {
    pub fn checked(&self) -> u64 {
        self.census.iter().chain(&self.sampled).map(|(_, n)| n).sum()
    }

    /// `checked 3+128+10125 graphs, 0 violations`
    pub fn summary(&self) -> String {
        let join = |xs: &[(usize, u64)]| xs.iter().map(|(_, n)| n.to_string()).collect::<Vec<_>>().join("+");
        let mut line = format!("checked {} graphs", if self.census.is_empty() { "0".into() } else { join(&self.census) });
        if !self.sampled.is_empty() {
            let sizes: Vec<String> = self.sampled.iter().map(|(m, _)| m.to_string()).collect();
            line.push_str(&format!(" (+ {} sampled at m={})", join(&self.sampled), sizes.join(",")));
        }
        line.push_str(&format!(", {} violations", self.findings.len()));
        line
    }
}

fn complete(oracle: ClosureOracle, g: &LogGraph, seed: &[VertexId]) -> bool {
    oracle(g, seed).iter().all(|&r| r)
}

/// All size-`k` subsets of `0..m`, for the minimality recheck.
fn any_subset_completes(oracle: ClosureOracle, g: &LogGraph, k: usize) -> Option<Vec<VertexId>> {
    let m = g.vertex_count();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let seed: Vec<VertexId> = idx.iter().map(|&i| VertexId::new(i)).collect();
        if complete(oracle, g, &seed) {
            return Some(seed);
        }
        let pos = (0..k).rev().find(|&i| idx[i] < m - k + i)?;
        idx[pos] += 1;
        for j in pos + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Runs every invariant on one connected interior-reduced LOT.
pub fn check_graph(g: &LogGraph, oracle: ClosureOracle) -> Vec<Finding> {
    let mut out = Vec::new();
    let mut fail = |check: &'static str, detail: String| out.push(Finding { check, detail, graph: g.clone() });
    let m = g.vertex_count();
    let bound = upper_bound_for(m);
    let name_list = |vs: &[VertexId]| vs.iter().map(|&v| g.name(v)).collect::<Vec<_>>().join(",");

    let greedy = match greedy_seed(g) {
        Ok(r) => r,
        Err(e) => {
            fail("greedy", e.to_string());
            return out;
        }
    };
    if greedy.value > bound {
        fail("greedy_bound", format!("greedy seed of size {} exceeds {bound}", greedy.value));
    }
    if !complete(oracle, g, &greedy.witness) {
        fail("greedy_witness", format!("greedy seed {{{}}} does not reach every vertex", name_list(&greedy.witness)));
    }

    let exact = match exact_complexity(g, None) {
        Ok(r) => r,
        Err(e) => {
            fail("exact", e.to_string());
            return out;
        }
    };
    if exact.value > bound || exact.value > greedy.value {
        fail("exact_bound", format!("exact {} against bound {bound} and greedy {}", exact.value, greedy.value));
    }
    if !complete(oracle, g, &exact.witness) {
        fail("exact_witness", format!("exact seed {{{}}} does not reach every vertex", name_list(&exact.witness)));
    }
    if m <= MINIMALITY_LIMIT && exact.value > 1 {
        if let Some(smaller) = any_subset_completes(oracle, g, exact.value - 1) {
            fail("exact_minimal", format!("seed {{{}}} is smaller than the exact value {}", name_list(&smaller), exact.value));
        }
    }

    let decomposition = match decompose(g) {
        Ok(d) => d,
        Err(e) => {
            fail("decompose", e.to_string());
            return out;
        }
    };
    let maximal = m % 2 == 1 && exact.value == bound;
    if decomposition.is_some() != maximal {
        fail("maximality", format!("decomposable = {} but exact = {} with m = {m}", decomposition.is_some(), exact.value));
    }
    if let Some(d) = &decomposition {
        if !d.verify(g) {
            fail("decomposition_replay", "decomposition does not glue back to the input".into());
        }
    }

    if m % 2 == 1 && decomposition.is_none() {
        match (0..g.edge_count()).find(|&i| cover_of_edge(g, i).is_none()) {
            None => fail("uncovered_edge", "not decomposable yet every edge is covered".into()),
            Some(i) => match submaximal_seed(g, &g.edges()[i]) {
                Err(e) => fail("submaximal", e.to_string()),
                Ok(r) => {
                    if r.value + 1 > bound {
                        fail("submaximal", format!("seed of size {} is not below {bound}", r.value));
                    }
                    if !complete(oracle, g, &r.witness) {
                        fail("submaximal_witness", format!("seed {{{}}} does not reach every vertex", name_list(&r.witness)));
                    }
                }
            },
        }
    }

    match certify_aspherical(g, Effort::Exhaustive) {
        Err(e) => fail("certificate", e.to_string()),
        Ok(Some(cert)) => {
            if let Err(e) = verify_certificate(g, &cert) {
                fail("certificate", format!("{} certificate rejected: {e}", cert.reason.as_str()));
            }
        }
        Ok(None) => {}
    }
    out
}

fn sort_findings(findings: &mut [Finding]) {
    findings.sort_by_cached_key(|f| (f.graph.vertex_count(), f.check, serialize_lot(&f.graph)));
}

pub fn run(config: &VerifyConfig) -> VerifyReport {
    let oracle = config.oracle;
    let mut report = VerifyReport::default();
    for m in 3..=config.max_m {
        let (count, mut findings) = (0..tree_count(m))
            .into_par_iter()
            .map(|i| {
                let mut n = 0u64;
                let mut found = Vec::new();
                for g in labelings(m, census_tree(m, i)) {
                    n += 1;
                    found.extend(check_graph(&g, oracle));
                }
                (n, found)
            })
            .reduce(
                || (0, Vec::new()),
                |(a, mut fa), (b, fb)| {
                    fa.extend(fb);
                    (a + b, fa)
                },
            );
        report.census.push((m, count));
        report.findings.append(&mut findings);
    }
    if config.samples > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        for &m in &config.sample_sizes {
            let seeds: Vec<u64> = (0..config.samples).map(|_| rng.next_u64()).collect();
            let mut findings: Vec<Finding> =
                seeds.par_iter().flat_map_iter(|&s| check_graph(&random_lot(m, s).expect("sample sizes are at least 3"), oracle)).collect();
            report.sampled.push((m, seeds.len() as u64));
            report.findings.append(&mut findings);
        }
    }
    sort_findings(&mut report.findings);
    report
}

/// Writes each finding as a LOT file with the failed check in a comment
/// header, smallest first. Returns the paths written.
pub fn dump_findings(findings: &[Finding], dir: &Path, limit: usize) -> io::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut paths = Vec::new();
    for (i, f) in findings.iter().take(limit).enumerate() {
        let path = dir.join(format!("violation-{:04}-{}.lot", i + 1, f.check));
        let text = format!("# check: {}\n# detail: {}\n{}", f.check, f.detail, serialize_lot(&f.graph));
        std::fs::write(&path, text)?;
        paths.push(path);
    }
    Ok(paths)
}
