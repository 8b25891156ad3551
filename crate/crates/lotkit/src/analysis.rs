//! Single-graph analysis: validation, bounds, greedy and exact seeds,
//! decomposition and a certificate, collected into an [`AnalysisDocument`].

use std::fmt::Write as _;
use std::time::Instant;

use lotkit_core::certify::{certify_aspherical, AsphericityCertificate, Effort};
use lotkit_core::complexity::{complexity_bounds, greedy_seed, ComplexityReport, ExactOptions};
use lotkit_core::decomposition::{decompose, Decomposition};
use lotkit_core::graph::{validate, LogGraph, ValidationReport, VertexId};

use crate::document::{
    digest, AnalysisDocument, BoundsDoc, CertificateDoc, ComplexityDoc, DecompositionDoc, GraphDoc, InputDoc, ValidationDoc,
    ANALYSIS_SCHEMA,
};
use crate::formats::{parse_any, InputFormat, ParseError};
use crate::parallel::exact_complexity_par;

#[derive(Clone, Copy, Debug, Default)]
pub struct AnalyzeOptions {
    pub exact: bool,
    pub exact_options: ExactOptions,
}

#[derive(Clone, Debug)]
pub struct Analysis {
    pub format: InputFormat,
    pub validation: ValidationReport,
    /// `None` when the input is not a simple graph.
    pub graph: Option<LogGraph>,
    pub greedy: Option<ComplexityReport>,
    pub exact: Option<ComplexityReport>,
    pub decomposition: Option<Decomposition>,
    pub certificate: Option<AsphericityCertificate>,
    pub document: AnalysisDocument,
}

impl Analysis {
    /// The input is a simple, connected, interior-reduced graph.
    pub fn is_valid(&self) -> bool {
        self.validation.is_clean() && self.validation.flags.connected
    }

    /// Vertices to highlight in a drawing: the best seed found.
    pub fn highlight(&self) -> Vec<VertexId> {
        self.exact.as_ref().or(self.greedy.as_ref()).map(|r| r.witness.clone()).unwrap_or_default()
    }
}

/// Parses and analyzes `text`. Only syntax errors are returned as `Err`;
/// validation problems are recorded in the analysis.
pub fn analyze_text(text: &str, options: &AnalyzeOptions) -> Result<Analysis, ParseError> {
    let start = Instant::now();
    let (format, raw) = parse_any(text)?;
    let validation = validate(&raw).map_err(|e| ParseError::Line { line: 1, message: e.to_string() })?;
    let graph = LogGraph::from_raw(&raw).ok();
    let mut notes = Vec::new();
    let (mut bounds, mut greedy, mut exact, mut maximal, mut decomposition, mut certificate) = (None, None, None, None, None, None);

    if let Some(g) = graph.as_ref().filter(|_| validation.is_clean() && validation.flags.connected) {
        bounds = complexity_bounds(g).ok();
        greedy = greedy_seed(g).ok();
        if options.exact {
            match exact_complexity_par(g, &options.exact_options) {
                Ok(r) => exact = Some(r),
                Err(e) => notes.push(format!("exact search skipped: {e}")),
            }
        }
        if g.is_tree() {
            decomposition = decompose(g).ok().flatten();
            maximal = Some(decomposition.is_some());
            let effort = if options.exact { Effort::Exhaustive } else { Effort::Cheap };
            certificate = certify_aspherical(g, effort).ok().flatten();
        } else {
            notes.push("not a tree: decomposition and certificate skipped".into());
        }
    }

    let doc_for = |r: &ComplexityReport| ComplexityDoc::new(graph.as_ref().expect("reports need a graph"), r);
    let document = AnalysisDocument {
        schema: ANALYSIS_SCHEMA.into(),
        input: InputDoc { digest: digest(text.as_bytes()), format: format.as_str().into(), graph: GraphDoc::from_raw(&raw) },
        validation: ValidationDoc::from(&validation),
        bounds: bounds.map(|(lower, upper)| BoundsDoc { lower, upper }),
        greedy: greedy.as_ref().map(doc_for),
        exact: exact.as_ref().map(doc_for),
        maximal_complexity: maximal,
        decomposition: decomposition.as_ref().map(|d| DecompositionDoc::new(graph.as_ref().expect("graph"), d)),
        certificate: certificate.as_ref().map(|c| CertificateDoc::new(graph.as_ref().expect("graph"), c)),
        notes,
        timing_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    Ok(Analysis { format, validation, graph, greedy, exact, decomposition, certificate, document })
}

/// Plain-text rendering of an analysis.
pub fn render_text(a: &Analysis) -> String {
    let d = &a.document;
    let mut out = String::new();
    let g = &d.input.graph;
    let _ = writeln!(out, "input: {} ({} vertices, {} edges, {})", d.input.format, g.vertices.len(), g.edges.len(), d.input.digest);
    let v = &d.validation;
    let flag = |b: bool| if b { "yes" } else { "no" };
    let _ = writeln!(
        out,
        "connected: {}  tree: {}  interior reduced: {}  injective: {}",
        flag(v.connected),
        flag(v.tree),
        flag(v.interior_reduced),
        flag(v.injective)
    );
    for violation in &v.violations {
        let [s, t, l] = &g.edges[violation.edge];
        let _ = writeln!(out, "violation: {} at edge {} ({s} -> {t} : {l})", violation.kind, violation.edge);
    }
    if !a.is_valid() {
        return out;
    }
    if let Some(b) = &d.bounds {
        let _ = writeln!(out, "bounds: {} <= cp <= {}", b.lower, b.upper);
    }
    let seed = |r: &ComplexityDoc| format!("{} {{{}}}", r.value, r.witness.join(", "));
    if let Some(r) = &d.greedy {
        let _ = writeln!(out, "greedy: {}", seed(r));
    }
    if let Some(r) = &d.exact {
        let _ = writeln!(out, "exact: {} after {} subsets", seed(r), r.subsets_examined);
    }
    if let Some(m) = d.maximal_complexity {
        let _ = writeln!(out, "maximal complexity: {}", flag(m));
    }
    if let Some(dec) = &d.decomposition {
        let parts: Vec<String> = dec.parts.iter().map(|p| format!("{{{}, {}, {}}}", p.a, p.b, p.c)).collect();
        let _ = writeln!(out, "decomposition: {} parts {}", dec.s, parts.join(" "));
    }
    match &d.certificate {
        Some(c) => {
            let _ = writeln!(out, "certificate: {}", c.reason);
        }
        None if a.graph.as_ref().is_some_and(|g| g.is_tree()) => {
            let _ = writeln!(out, "certificate: none found");
        }
        None => {}
    }
    for note in &d.notes {
        let _ = writeln!(out, "note: {note}");
    }
    out
}
