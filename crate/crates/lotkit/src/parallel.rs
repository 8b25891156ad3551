//! Exact complexity with each subset size sharded across threads by the
//! first (smallest) element of the candidate seed.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use lotkit_core::complexity::{first_witness, plan_exact, ComplexityError, ComplexityReport, ExactOptions};
use lotkit_core::graph::{LogGraph, VertexId};

/// Same result as the sequential search, `subsets_examined` included: the
/// count only covers shards the sequential order would have visited.
pub fn exact_complexity_par(g: &LogGraph, options: &ExactOptions) -> Result<ComplexityReport, ComplexityError> {
    let plan = plan_exact(g, options)?;
    let m = g.vertex_count();
    let mut examined = 0;
    for k in 1..=plan.last_size {
        let (found, tried) = search_size(g, m, k);
        examined += tried;
        if found.is_some() {
            return plan.finish(found, examined);
        }
    }
    plan.finish(None, examined)
}

fn search_size(g: &LogGraph, m: usize, k: usize) -> (Option<Vec<VertexId>>, u64) {
    // Shards are lexicographically ordered by `first`, so the least
    // successful shard holds the least witness. Later shards give up early.
    let best = AtomicUsize::new(usize::MAX);
    let shards: Vec<(usize, Option<Vec<VertexId>>, u64)> = (0..=m - k)
        .into_par_iter()
        .map(|first| {
            if first > best.load(Ordering::Relaxed) {
                return (first, None, 0);
            }
            let (found, tried) = first_witness(g, k, Some(first));
            if found.is_some() {
                best.fetch_min(first, Ordering::Relaxed);
            }
            (first, found, tried)
        })
        .collect();
    let winner = best.into_inner();
    let examined = shards.iter().filter(|(first, ..)| *first <= winner).map(|(_, _, tried)| tried).sum();
    let found = shards.into_iter().find(|(first, ..)| *first == winner).and_then(|(_, found, _)| found);
    (found, examined)
}
