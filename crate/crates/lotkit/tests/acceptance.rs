//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.
//!
//! Every "does this seed reach everything" question is answered here by a
//! bitmask fixpoint that shares no code with the library.

use std::process::ExitCode;
use std::time::Instant;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use lotkit::core::certify::{certify_aspherical, verify_certificate, Effort, Evidence};
use lotkit::core::complexity::{exact_complexity, greedy_seed, submaximal_seed};
use lotkit::core::decomposition::{cover_of_edge, decompose};
use lotkit::core::gen::{enumerate_lots, random_lot, rosebrock_chain, Attachment};
use lotkit::core::graph::{LabeledEdge, LogGraph, VertexId};
use lotkit::core::presentation::LotPresentation;
use lotkit::core::reachability::closure;
use lotkit::document::CertificateDoc;
use lotkit::formats::{parse_lot_file, parse_presentation, serialize_lot};

fn oracle_closure(g: &LogGraph, seed: u32) -> u32 {
    let mut reached = seed;
    loop {
        let before = reached;
        for e in g.edges() {
            let (s, t, l) = (e.source.index(), e.target.index(), e.label.index());
            if reached >> l & 1 == 1 && (reached >> s & 1 == 1 || reached >> t & 1 == 1) {
                reached |= 1 << s | 1 << t;
            }
        }
        if reached == before {
            return reached;
        }
    }
}

fn full(g: &LogGraph) -> u32 {
    (1u32 << g.vertex_count()) - 1
}

fn mask(seed: &[VertexId]) -> u32 {
    seed.iter().fold(0, |m, v| m | 1 << v.index())
}

fn oracle_complete(g: &LogGraph, seed: &[VertexId]) -> bool {
    oracle_closure(g, mask(seed)) == full(g)
}

/// Least complete seed size and the lexicographically least such seed.
fn oracle_cp(g: &LogGraph) -> (usize, Vec<usize>) {
    let m = g.vertex_count();
    (1u32..1 << m)
        .filter(|&s| oracle_closure(g, s) == full(g))
        .map(|s| (s.count_ones() as usize, (0..m).filter(|i| s >> i & 1 == 1).collect::<Vec<_>>()))
        .min()
        .expect("the full set is complete")
}

fn bound(m: usize) -> usize {
    m.div_ceil(2)
}

fn names(g: &LogGraph, vs: &[usize]) -> String {
    vs.iter().map(|&i| g.name(VertexId::new(i))).collect::<Vec<_>>().join(",")
}

fn samples(m: usize, n: usize, seed: u64) -> Vec<LogGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| random_lot(m, rng.next_u64()).unwrap()).collect()
}

fn census(ms: &[usize]) -> Vec<LogGraph> {
    ms.iter().flat_map(|&m| enumerate_lots(m, 5).unwrap()).collect()
}

/// Collects up to a few failure descriptions from a parallel sweep.
fn sweep(graphs: &[LogGraph], check: impl Fn(&LogGraph) -> Result<(), String> + Sync) -> Vec<String> {
    let mut failures: Vec<String> = graphs.par_iter().filter_map(|g| check(g).err().map(|e| format!("{e} in {:?}", g.to_raw()))).collect();
    failures.sort();
    failures
}

struct Outcome {
    detail: String,
    failures: Vec<String>,
}

fn upper_bound_check(g: &LogGraph) -> Result<(), String> {
    let m = g.vertex_count();
    let greedy = greedy_seed(g).map_err(|e| e.to_string())?;
    if greedy.value > bound(m) || !oracle_complete(g, &greedy.witness) {
        return Err(format!("greedy seed of size {} (bound {})", greedy.value, bound(m)));
    }
    let exact = exact_complexity(g, None).map_err(|e| e.to_string())?;
    let (value, witness) = oracle_cp(g);
    let got: Vec<usize> = exact.witness.iter().map(|v| v.index()).collect();
    if exact.value > bound(m) || exact.value != value || got != witness {
        return Err(format!("exact {} {{{}}}, oracle {value} {{{}}}", exact.value, names(g, &got), names(g, &witness)));
    }
    Ok(())
}

fn criterion_1() -> Outcome {
    let graphs = census(&[1, 3, 4, 5]);
    let counts: Vec<usize> = [1, 3, 4, 5].iter().map(|&m| graphs.iter().filter(|g| g.vertex_count() == m).count()).collect();
    let mut failures = sweep(&graphs, upper_bound_check);
    if counts != [1, 3, 128, 10125] {
        failures.push(format!("census counts {counts:?}"));
    }
    Outcome { detail: format!("census m=1,3,4,5: {} graphs", counts.iter().map(usize::to_string).collect::<Vec<_>>().join("+")), failures }
}

fn criterion_2() -> Outcome {
    let graphs: Vec<LogGraph> = [6, 7].iter().flat_map(|&m| samples(m, 10_000, 0xacce_0002 + m as u64)).collect();
    Outcome { detail: format!("{} random LOTs at m=6,7", graphs.len()), failures: sweep(&graphs, upper_bound_check) }
}

fn criterion_3() -> Outcome {
    let mut graphs = census(&[3, 5]);
    graphs.extend(samples(7, 2_000, 0xacce_0003));
    let maximal = std::sync::atomic::AtomicUsize::new(0);
    let failures = sweep(&graphs, |g| {
        let m = g.vertex_count();
        let (value, _) = oracle_cp(g);
        let exact = exact_complexity(g, None).map_err(|e| e.to_string())?.value;
        let decomposes = decompose(g).map_err(|e| e.to_string())?.is_some();
        if exact == bound(m) {
            maximal.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
        }
        if exact != value || (exact == bound(m)) != decomposes {
            return Err(format!("exact {exact}, oracle {value}, decomposes {decomposes}"));
        }
        Ok(())
    });
    Outcome { detail: format!("{} graphs, {} of maximal complexity", graphs.len(), maximal.into_inner()), failures }
}

fn criterion_4() -> Outcome {
    let mut failures = Vec::new();
    let fig1 = parse_lot_file("vertices: a b c d\nedge a d c\nedge d b c\nedge d c a\n").unwrap();
    let fig2 =
        parse_lot_file("vertices: x1 x2 x3 x4 x5 x6\nedge x5 x6 x4\nedge x6 x3 x2\nedge x3 x1 x4\nedge x2 x6 x1\nedge x6 x4 x5\n").unwrap();
    let ids = |g: &LogGraph, ns: &[&str]| ns.iter().map(|n| g.vertex(n).unwrap()).collect::<Vec<_>>();
    let expectations: [(&[&str], &[&str]); 3] = [
        (&["x1", "x4"], &["x1", "x3", "x4"]),
        (&["x1", "x6"], &["x1", "x2", "x3", "x6"]),
        (&["x1", "x4", "x6"], &["x1", "x2", "x3", "x4", "x5", "x6"]),
    ];
    for (seed, expected) in expectations {
        let got = closure(&fig2, &ids(&fig2, seed)).unwrap().closure;
        let oracle = oracle_closure(&fig2, mask(&ids(&fig2, seed)));
        if got != ids(&fig2, expected) || oracle != mask(&ids(&fig2, expected)) {
            failures.push(format!("closure of {seed:?} is {got:?}"));
        }
    }
    for (g, want) in [(&fig1, 2), (&fig2, 3)] {
        let exact = exact_complexity(g, None).unwrap().value;
        if exact != want || oracle_cp(g).0 != want {
            failures.push(format!("exact cp {exact}, expected {want}"));
        }
    }
    Outcome { detail: "three closures, cp(fig1)=2, cp(fig2)=3".into(), failures }
}

fn criterion_5() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    for s in 1..=6 {
        for (k, attachment) in [Attachment::Chain, Attachment::Star, Attachment::Random].into_iter().enumerate() {
            checked += 1;
            let g = rosebrock_chain(s, attachment, 0xacce_0005 + k as u64).unwrap();
            let m = g.vertex_count();
            let exact = exact_complexity(&g, None).unwrap().value;
            let d = decompose(&g).unwrap();
            let replayed = d.as_ref().map(|d| d.replay(&g).map(|h| h.same_structure(&g)));
            if m != 2 * s + 1 || exact != s + 1 || exact != bound(m) {
                failures.push(format!("s={s} {attachment:?}: m={m}, exact cp {exact}"));
            }
            if d.as_ref().map(|d| d.s()) != Some(s) || replayed != Some(Ok(true)) || !d.as_ref().is_some_and(|d| d.verify(&g)) {
                failures.push(format!("s={s} {attachment:?}: decomposition {d:?}"));
            }
            if s <= 4 && oracle_cp(&g).0 != exact {
                failures.push(format!("s={s} {attachment:?}: oracle disagrees"));
            }
        }
    }
    Outcome { detail: format!("{checked} chains, s=1..6, three attachment rules"), failures }
}

fn submaximal_check(g: &LogGraph) -> Result<(), String> {
    let m = g.vertex_count();
    let exact = exact_complexity(g, None).map_err(|e| e.to_string())?.value;
    if exact >= bound(m) {
        return Err(format!("exact cp {exact} is not below {}", bound(m)));
    }
    for (i, e) in g.edges().iter().enumerate().filter(|(i, _)| cover_of_edge(g, *i).is_none()) {
        let r = submaximal_seed(g, e).map_err(|err| format!("edge {i}: {err}"))?;
        if r.value + 1 > bound(m) || r.witness.len() != r.value || !oracle_complete(g, &r.witness) {
            return Err(format!("edge {i}: seed of size {} ({:?})", r.value, r.case));
        }
    }
    Ok(())
}

fn criterion_6() -> Outcome {
    let has_uncovered = |g: &LogGraph| (0..g.edge_count()).any(|i| cover_of_edge(g, i).is_none());
    let mut graphs: Vec<LogGraph> = census(&[5]).into_iter().filter(|g| decompose(g).unwrap().is_none()).collect();
    let from_census = graphs.len();
    let mut failures: Vec<String> =
        graphs.iter().filter(|g| !has_uncovered(g)).map(|g| format!("no uncovered edge in {:?}", g.to_raw())).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0006);
    let mut sampled = 0;
    while sampled < 1_000 {
        let g = random_lot(7, rng.next_u64()).unwrap();
        if has_uncovered(&g) {
            sampled += 1;
            graphs.push(g);
        }
    }
    failures.extend(sweep(&graphs, submaximal_check));
    Outcome { detail: format!("{from_census} non-decomposable m=5 LOTs + {sampled} sampled at m=7, every uncovered edge"), failures }
}

fn random_log(rng: &mut ChaCha8Rng) -> LogGraph {
    let m = rng.gen_range(3..=9);
    let mut g = random_lot(m, rng.next_u64()).unwrap();
    for _ in 0..rng.gen_range(0..4) {
        let (a, b, l) = (rng.gen_range(0..m), rng.gen_range(0..m), rng.gen_range(0..m));
        if a != b && l != a && l != b {
            if let Ok(h) = g.with_edge(LabeledEdge::new(VertexId::new(a), VertexId::new(b), VertexId::new(l))) {
                g = h;
            }
        }
    }
    g
}

fn graph_strategy() -> impl Strategy<Value = (LogGraph, u64)> {
    any::<(u64, u64)>().prop_map(|(s, extra)| (random_log(&mut ChaCha8Rng::seed_from_u64(s)), extra))
}

const PROPERTY_CASES: u32 = 1_100;

type Property = fn(&LogGraph, u64) -> Result<(), String>;

fn seed_of(g: &LogGraph, bits: u64) -> Vec<VertexId> {
    g.vertices().filter(|v| bits >> v.index() & 1 == 1).collect()
}

fn prop_monotone(g: &LogGraph, x: u64) -> Result<(), String> {
    let (small, large) = (x & x >> 16, x);
    let (a, b) = (closure(g, &seed_of(g, small)).unwrap().closure, closure(g, &seed_of(g, large)).unwrap().closure);
    a.iter().all(|v| b.contains(v)).then_some(()).ok_or("closure shrank".into())
}

fn prop_idempotent(g: &LogGraph, x: u64) -> Result<(), String> {
    let once = closure(g, &seed_of(g, x)).unwrap().closure;
    (closure(g, &once).unwrap().closure == once).then_some(()).ok_or("closure moved".into())
}

fn prop_order(g: &LogGraph, x: u64) -> Result<(), String> {
    let mut edges = g.edges().to_vec();
    edges.shuffle(&mut ChaCha8Rng::seed_from_u64(x));
    let h = LogGraph::from_parts(g.names().to_vec(), edges).unwrap();
    let seed = seed_of(g, x);
    (closure(g, &seed).unwrap().closure == closure(&h, &seed).unwrap().closure).then_some(()).ok_or("edge order matters".into())
}

fn flipped(g: &LogGraph, x: u64) -> LogGraph {
    g.with_reversed(&(0..g.edge_count()).filter(|i| x >> (i + 32) & 1 == 1).collect::<Vec<_>>())
}

fn prop_orientation_closure(g: &LogGraph, x: u64) -> Result<(), String> {
    let h = flipped(g, x);
    let seed = seed_of(g, x);
    (oracle_closure(g, mask(&seed)) == oracle_closure(&h, mask(&seed))
        && closure(g, &seed).unwrap().closure == closure(&h, &seed).unwrap().closure)
        .then_some(())
        .ok_or("orientation changes the closure".into())
}

fn prop_orientation_cp(g: &LogGraph, x: u64) -> Result<(), String> {
    let (a, b) = (exact_complexity(g, None).unwrap(), exact_complexity(&flipped(g, x), None).unwrap());
    (a.value == b.value && a.witness == b.witness).then_some(()).ok_or("orientation changes cp".into())
}

fn prop_edge_addition(g: &LogGraph, x: u64) -> Result<(), String> {
    let m = g.vertex_count();
    let pick = |k: u32| VertexId::new((x >> k) as usize % m);
    let e = LabeledEdge::new(pick(0), pick(8), pick(16));
    if !e.is_interior_reduced() || e.source == e.target {
        return Ok(());
    }
    let Ok(h) = g.with_edge(e) else { return Ok(()) };
    let (before, after) = (exact_complexity(g, None).unwrap().value, exact_complexity(&h, None).unwrap().value);
    (after <= before && oracle_cp(&h).0 == after).then_some(()).ok_or(format!("cp rose from {before} to {after}"))
}

fn prop_all_reachable(g: &LogGraph, x: u64) -> Result<(), String> {
    let m = g.vertex_count();
    let size = closure(g, &seed_of(g, x)).unwrap().closure.len();
    let oracle = oracle_closure(g, (x as u32) & full(g)).count_ones() as usize;
    (size + 1 != m && oracle + 1 != m && size == oracle).then_some(()).ok_or(format!("closure of size {size} with m = {m}"))
}

fn prop_file_roundtrip(g: &LogGraph, _: u64) -> Result<(), String> {
    let text = serialize_lot(g);
    let back = parse_lot_file(&text).map_err(|e| e.to_string())?;
    (back == *g && serialize_lot(&back) == text).then_some(()).ok_or("LOT file roundtrip changed the graph".into())
}

fn prop_presentation_roundtrip(g: &LogGraph, _: u64) -> Result<(), String> {
    let p = LotPresentation::from_log(g);
    let parsed = parse_presentation(&p.to_string()).map_err(|e| e.to_string())?;
    let back = parsed.to_log().map_err(|e| e.to_string())?;
    (parsed == p && back == *g).then_some(()).ok_or("presentation roundtrip changed the graph".into())
}

fn prop_certificate_json(g: &LogGraph, _: u64) -> Result<(), String> {
    if !g.is_tree() {
        return Ok(());
    }
    let Some(cert) = certify_aspherical(g, Effort::Exhaustive).unwrap() else { return Ok(()) };
    let (h, back) =
        CertificateDoc::from_json(&CertificateDoc::new(g, &cert).to_json()).and_then(|d| d.to_certificate()).map_err(|e| e.to_string())?;
    (h == *g && back == cert && verify_certificate(&h, &back).is_ok()).then_some(()).ok_or("certificate JSON roundtrip".into())
}

fn criterion_7() -> Outcome {
    let properties: [(&str, Property); 11] = [
        ("closure monotone", prop_monotone),
        ("closure idempotent", prop_idempotent),
        ("closure order-independent", prop_order),
        ("closure orientation-invariant", prop_orientation_closure),
        ("cp orientation-invariant", prop_orientation_cp),
        ("cp edge-addition monotone", prop_edge_addition),
        ("no fixpoint of size m-1", prop_all_reachable),
        ("LOT file roundtrip", prop_file_roundtrip),
        ("presentation roundtrip", prop_presentation_roundtrip),
        ("certificate JSON roundtrip", prop_certificate_json),
        ("closure matches oracle", |g, x| {
            let r = closure(g, &seed_of(g, x)).unwrap();
            (mask(&r.closure) == oracle_closure(g, (x as u32) & full(g))).then_some(()).ok_or("closure differs from oracle".into())
        }),
    ];
    let results: Vec<(usize, Option<String>)> = properties
        .par_iter()
        .map(|(name, property)| {
            let config = Config { cases: PROPERTY_CASES, failure_persistence: None, ..Config::default() };
            let mut runner = TestRunner::new_with_rng(
                config,
                proptest::test_runner::TestRng::deterministic_rng(proptest::test_runner::RngAlgorithm::ChaCha),
            );
            let result = runner.run(&graph_strategy(), |(g, x)| property(&g, x).map_err(TestCaseError::fail));
            (PROPERTY_CASES as usize, result.err().map(|e| format!("{name}: {e}")))
        })
        .collect();
    let total: usize = results.iter().map(|(n, _)| n).sum();
    let failures: Vec<String> = results.into_iter().filter_map(|(_, f)| f).collect();
    Outcome { detail: format!("{} properties, {total} cases", properties.len()), failures }
}

/// Mutations of a valid certificate that must all be rejected.
fn mutants(
    g: &LogGraph,
    cert: &lotkit::core::certify::AsphericityCertificate,
) -> Vec<(&'static str, lotkit::core::certify::AsphericityCertificate)> {
    use lotkit::core::certify::Reason;
    let mut out = Vec::new();
    let wrong_reason = if cert.reason == Reason::InjectiveLabeling { Reason::ComplexityTwo } else { Reason::InjectiveLabeling };
    out.push(("reason", lotkit::core::certify::AsphericityCertificate { reason: wrong_reason, evidence: cert.evidence.clone() }));
    let mut push = |what, evidence| out.push((what, lotkit::core::certify::AsphericityCertificate { reason: cert.reason, evidence }));
    let m = g.vertex_count();
    match &cert.evidence {
        Evidence::ComplexityTwo(r) => {
            let bad_pair =
                (0..m).flat_map(|a| (a + 1..m).map(move |b| [a, b])).map(|p| p.map(VertexId::new)).find(|p| !oracle_complete(g, p));
            if let Some(p) = bad_pair {
                let mut r = r.clone();
                r.witness = p.to_vec();
                push("incomplete witness", Evidence::ComplexityTwo(r));
            }
            let mut r = r.clone();
            r.witness.truncate(1);
            r.value = 1;
            push("singleton witness", Evidence::ComplexityTwo(r));
        }
        Evidence::MaximalComplexity(d) if !d.parts.is_empty() => {
            let mut fewer = d.clone();
            fewer.parts.pop();
            fewer.identifications.pop();
            push("dropped part", Evidence::MaximalComplexity(fewer));
            let mut relabeled = d.clone();
            let p = &mut relabeled.parts[0];
            p.e1.label = p.a;
            push("relabeled part", Evidence::MaximalComplexity(relabeled));
            if d.parts.len() > 1 {
                let mut doubled = d.clone();
                doubled.parts[1] = doubled.parts[0];
                push("repeated part", Evidence::MaximalComplexity(doubled));
            }
        }
        Evidence::InjectiveLabeling(labels) if !labels.is_empty() => {
            let mut wrong = labels.clone();
            wrong[0] = VertexId::new((wrong[0].index() + 1) % m);
            push("wrong label", Evidence::InjectiveLabeling(wrong));
            let mut short = labels.clone();
            short.pop();
            push("short audit", Evidence::InjectiveLabeling(short));
        }
        Evidence::Amalgam(split) => {
            let mut moved = split.clone();
            moved.vertex = "nowhere".into();
            push("unknown cut vertex", Evidence::Amalgam(moved));
            let mut swapped = split.clone();
            std::mem::swap(&mut swapped.left, &mut swapped.right);
            swapped.left_certificate = split.right_certificate.clone();
            swapped.right_certificate = split.right_certificate.clone();
            push("mismatched side", Evidence::Amalgam(swapped));
        }
        Evidence::InjectiveLabeling(_) | Evidence::MaximalComplexity(_) => {}
    }
    out
}

fn criterion_8() -> Outcome {
    let graphs = census(&[1, 3, 4, 5]);
    let emitted = std::sync::atomic::AtomicUsize::new(0);
    let rejected = std::sync::atomic::AtomicUsize::new(0);
    let failures = sweep(&graphs, |g| {
        // A label moved onto an endpoint breaks interior reduction.
        if let Some(e) = g.edges().first() {
            let mut edges = g.edges().to_vec();
            edges[0].label = e.source;
            let broken = LogGraph::from_parts(g.names().to_vec(), edges).unwrap();
            if certify_aspherical(&broken, Effort::Exhaustive).is_ok() {
                return Err("certified a graph that is not interior reduced".into());
            }
        }
        let Some(cert) = certify_aspherical(g, Effort::Exhaustive).map_err(|e| e.to_string())? else { return Ok(()) };
        emitted.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
        verify_certificate(g, &cert).map_err(|e| format!("{} rejected: {e}", cert.reason.as_str()))?;
        let (h, back) = CertificateDoc::from_json(&CertificateDoc::new(g, &cert).to_json())
            .and_then(|d| d.to_certificate())
            .map_err(|e| e.to_string())?;
        verify_certificate(&h, &back).map_err(|e| format!("JSON copy rejected: {e}"))?;
        for (what, bad) in mutants(g, &cert) {
            if verify_certificate(g, &bad).is_ok() {
                return Err(format!("mutant '{what}' of a {} certificate verified", cert.reason.as_str()));
            }
            rejected.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
        }
        Ok(())
    });
    Outcome {
        detail: format!(
            "{} census graphs, {} certificates re-verified, {} mutants rejected",
            graphs.len(),
            emitted.into_inner(),
            rejected.into_inner()
        ),
        failures,
    }
}

type Criterion = fn() -> Outcome;

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 8] = [
        ("upper bound, exhaustive", criterion_1),
        ("upper bound, randomized", criterion_2),
        ("maximal complexity iff decomposable", criterion_3),
        ("figure fixtures", criterion_4),
        ("Rosebrock chains", criterion_5),
        ("sub-maximal construction", criterion_6),
        ("property suites", criterion_7),
        ("certificate soundness", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let status = if outcome.failures.is_empty() { "PASS" } else { "FAIL" };
        println!(
            "criterion {} [{status}] {name}: {}, {} violations ({:.1}s)",
            i + 1,
            outcome.detail,
            outcome.failures.len(),
            start.elapsed().as_secs_f64()
        );
        for f in outcome.failures.iter().take(5) {
            println!("    {f}");
        }
        failed += usize::from(!outcome.failures.is_empty());
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
