//! JSON documents. Vertices are referred to by name everywhere so that
//! documents stay meaningful outside the process that wrote them. The
//! layout is described in `docs/json.md`.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use lotkit_core::certify::{AmalgamSplit, AsphericityCertificate, Evidence, Reason};
use lotkit_core::complexity::{ComplexityReport, Method, SubmaximalCase};
use lotkit_core::decomposition::{Decomposition, Identification, RosebrockSubLot};
use lotkit_core::graph::{Flags, GraphError, LabeledEdge, LogGraph, RawEdge, RawLog, ValidationReport, VertexId, Violation};

pub const ANALYSIS_SCHEMA: &str = "lotkit.analysis/1";
pub const CERTIFICATE_SCHEMA: &str = "lotkit.certificate/1";

#[derive(Debug, thiserror::Error)]
pub enum DocumentError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema {0:?}")]
    Schema(String),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("unknown {kind} {value:?}")]
    UnknownTag { kind: &'static str, value: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// `sha256:<hex>` of the raw input bytes.
pub fn digest(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub vertices: Vec<String>,
    /// `[source, target, label]`
    pub edges: Vec<[String; 3]>,
}

impl GraphDoc {
    pub fn from_raw(raw: &RawLog) -> Self {
        GraphDoc {
            vertices: raw.vertices.clone(),
            edges: raw.edges.iter().map(|e| [e.source.clone(), e.target.clone(), e.label.clone()]).collect(),
        }
    }

    pub fn from_graph(g: &LogGraph) -> Self {
        Self::from_raw(&g.to_raw())
    }

    pub fn to_graph(&self) -> Result<LogGraph, GraphError> {
        let edges = self.edges.iter().map(|[s, t, l]| RawEdge::new(s, t, l)).collect();
        LogGraph::from_raw(&RawLog { vertices: self.vertices.clone(), edges })
    }
}

fn names(g: &LogGraph, vs: &[VertexId]) -> Vec<String> {
    vs.iter().map(|&v| g.name(v).to_string()).collect()
}

fn lookup(g: &LogGraph, name: &str) -> Result<VertexId, DocumentError> {
    g.vertex(name).ok_or_else(|| DocumentError::UnknownVertex(name.to_string()))
}

fn lookup_all(g: &LogGraph, names: &[String]) -> Result<Vec<VertexId>, DocumentError> {
    names.iter().map(|n| lookup(g, n)).collect()
}

fn edge_doc(g: &LogGraph, e: &LabeledEdge) -> [String; 3] {
    [e.source, e.target, e.label].map(|v| g.name(v).to_string())
}

fn edge_from_doc(g: &LogGraph, [s, t, l]: &[String; 3]) -> Result<LabeledEdge, DocumentError> {
    Ok(LabeledEdge::new(lookup(g, s)?, lookup(g, t)?, lookup(g, l)?))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationDoc {
    /// `self_loop`, `parallel_edge` or `label_on_endpoint`.
    pub kind: String,
    pub edge: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub first: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationDoc {
    pub connected: bool,
    pub tree: bool,
    pub interior_reduced: bool,
    pub injective: bool,
    pub violations: Vec<ViolationDoc>,
}

impl From<&ValidationReport> for ValidationDoc {
    fn from(r: &ValidationReport) -> Self {
        let Flags { connected, tree, interior_reduced, injective } = r.flags;
        let violations = r
            .violations
            .iter()
            .map(|v| match *v {
                Violation::SelfLoop { edge } => ViolationDoc { kind: "self_loop".into(), edge, first: None },
                Violation::ParallelEdge { edge, first } => ViolationDoc { kind: "parallel_edge".into(), edge, first: Some(first) },
                Violation::LabelOnEndpoint { edge } => ViolationDoc { kind: "label_on_endpoint".into(), edge, first: None },
            })
            .collect();
        ValidationDoc { connected, tree, interior_reduced, injective, violations }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsDoc {
    pub lower: usize,
    pub upper: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityDoc {
    pub value: usize,
    pub witness: Vec<String>,
    pub method: String,
    pub lower_bound: usize,
    pub subsets_examined: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub closure_sizes: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<String>,
}

fn parse_method(s: &str) -> Result<Method, DocumentError> {
    [Method::Exact, Method::Greedy, Method::TrivialBound]
        .into_iter()
        .find(|m| m.as_str() == s)
        .ok_or_else(|| DocumentError::UnknownTag { kind: "method", value: s.into() })
}

fn parse_case(s: &str) -> Result<SubmaximalCase, DocumentError> {
    use SubmaximalCase::*;
    [Adjacent, PathFree, PathInterior, PathFinal]
        .into_iter()
        .find(|c| c.as_str() == s)
        .ok_or_else(|| DocumentError::UnknownTag { kind: "case", value: s.into() })
}

fn parse_reason(s: &str) -> Result<Reason, DocumentError> {
    use Reason::*;
    [ComplexityTwo, MaximalComplexity, InjectiveLabeling, AmalgamOfAspherical]
        .into_iter()
        .find(|r| r.as_str() == s)
        .ok_or_else(|| DocumentError::UnknownTag { kind: "reason", value: s.into() })
}

impl ComplexityDoc {
    pub fn new(g: &LogGraph, r: &ComplexityReport) -> Self {
        ComplexityDoc {
            value: r.value,
            witness: names(g, &r.witness),
            method: r.method.as_str().into(),
            lower_bound: r.lower_bound,
            subsets_examined: r.subsets_examined,
            closure_sizes: r.closure_sizes.clone(),
            case: r.case.map(|c| c.as_str().into()),
        }
    }

    pub fn to_report(&self, g: &LogGraph) -> Result<ComplexityReport, DocumentError> {
        Ok(ComplexityReport {
            value: self.value,
            witness: lookup_all(g, &self.witness)?,
            method: parse_method(&self.method)?,
            lower_bound: self.lower_bound,
            subsets_examined: self.subsets_examined,
            closure_sizes: self.closure_sizes.clone(),
            case: self.case.as_deref().map(parse_case).transpose()?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartDoc {
    pub a: String,
    pub b: String,
    pub c: String,
    /// `{a, b}` labeled `c`, then `{b, c}` labeled `a`, as they appear in
    /// the graph.
    pub edges: [[String; 3]; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentificationDoc {
    pub part: usize,
    pub attaches_to: usize,
    pub vertex: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionDoc {
    pub s: usize,
    pub parts: Vec<PartDoc>,
    pub identifications: Vec<IdentificationDoc>,
}

impl DecompositionDoc {
    pub fn new(g: &LogGraph, d: &Decomposition) -> Self {
        DecompositionDoc {
            s: d.s(),
            parts: d
                .parts
                .iter()
                .map(|p| PartDoc {
                    a: g.name(p.a).into(),
                    b: g.name(p.b).into(),
                    c: g.name(p.c).into(),
                    edges: [edge_doc(g, &p.e1), edge_doc(g, &p.e2)],
                })
                .collect(),
            identifications: d
                .identifications
                .iter()
                .map(|i| IdentificationDoc { part: i.part, attaches_to: i.attaches_to, vertex: g.name(i.vertex).into() })
                .collect(),
        }
    }

    pub fn to_decomposition(&self, g: &LogGraph) -> Result<Decomposition, DocumentError> {
        let parts = self
            .parts
            .iter()
            .map(|p| {
                Ok(RosebrockSubLot {
                    a: lookup(g, &p.a)?,
                    b: lookup(g, &p.b)?,
                    c: lookup(g, &p.c)?,
                    e1: edge_from_doc(g, &p.edges[0])?,
                    e2: edge_from_doc(g, &p.edges[1])?,
                })
            })
            .collect::<Result<_, DocumentError>>()?;
        let identifications = self
            .identifications
            .iter()
            .map(|i| Ok(Identification { part: i.part, attaches_to: i.attaches_to, vertex: lookup(g, &i.vertex)? }))
            .collect::<Result<_, DocumentError>>()?;
        Ok(Decomposition { parts, identifications })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EvidenceDoc {
    ComplexityTwo { report: ComplexityDoc },
    MaximalComplexity { decomposition: DecompositionDoc },
    InjectiveLabeling { labels: Vec<String> },
    AmalgamOfAspherical { vertex: String, left: Box<CertificateDoc>, right: Box<CertificateDoc> },
}

/// A self-contained certificate: it carries the graph it talks about.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub schema: String,
    pub graph: GraphDoc,
    pub reason: String,
    pub evidence: EvidenceDoc,
}

impl CertificateDoc {
    pub fn new(g: &LogGraph, cert: &AsphericityCertificate) -> Self {
        let evidence = match &cert.evidence {
            Evidence::ComplexityTwo(r) => EvidenceDoc::ComplexityTwo { report: ComplexityDoc::new(g, r) },
            Evidence::MaximalComplexity(d) => EvidenceDoc::MaximalComplexity { decomposition: DecompositionDoc::new(g, d) },
            Evidence::InjectiveLabeling(labels) => EvidenceDoc::InjectiveLabeling { labels: names(g, labels) },
            Evidence::Amalgam(split) => EvidenceDoc::AmalgamOfAspherical {
                vertex: split.vertex.clone(),
                left: Box::new(CertificateDoc::new(&split.left, &split.left_certificate)),
                right: Box::new(CertificateDoc::new(&split.right, &split.right_certificate)),
            },
        };
        CertificateDoc { schema: CERTIFICATE_SCHEMA.into(), graph: GraphDoc::from_graph(g), reason: cert.reason.as_str().into(), evidence }
    }

    /// Rebuilds the graph and certificate. The stated reason is kept as
    /// written, so a mismatch with the evidence surfaces at verification.
    pub fn to_certificate(&self) -> Result<(LogGraph, AsphericityCertificate), DocumentError> {
        if self.schema != CERTIFICATE_SCHEMA {
            return Err(DocumentError::Schema(self.schema.clone()));
        }
        let g = self.graph.to_graph()?;
        let reason = parse_reason(&self.reason)?;
        let evidence = match &self.evidence {
            EvidenceDoc::ComplexityTwo { report } => Evidence::ComplexityTwo(report.to_report(&g)?),
            EvidenceDoc::MaximalComplexity { decomposition } => Evidence::MaximalComplexity(decomposition.to_decomposition(&g)?),
            EvidenceDoc::InjectiveLabeling { labels } => Evidence::InjectiveLabeling(lookup_all(&g, labels)?),
            EvidenceDoc::AmalgamOfAspherical { vertex, left, right } => {
                let (left, left_certificate) = left.to_certificate()?;
                let (right, right_certificate) = right.to_certificate()?;
                Evidence::Amalgam(Box::new(AmalgamSplit { vertex: vertex.clone(), left, right, left_certificate, right_certificate }))
            }
        };
        Ok((g, AsphericityCertificate { reason, evidence }))
    }

    pub fn from_json(text: &str) -> Result<Self, DocumentError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDoc {
    pub digest: String,
    /// `lot` or `presentation`.
    pub format: String,
    pub graph: GraphDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisDocument {
    pub schema: String,
    pub input: InputDoc,
    pub validation: ValidationDoc,
    pub bounds: Option<BoundsDoc>,
    pub greedy: Option<ComplexityDoc>,
    pub exact: Option<ComplexityDoc>,
    /// Present for interior-reduced trees.
    pub maximal_complexity: Option<bool>,
    pub decomposition: Option<DecompositionDoc>,
    pub certificate: Option<CertificateDoc>,
    /// Why a requested step was skipped, if one was.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub timing_ms: f64,
}

impl AnalysisDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, DocumentError> {
        let doc: AnalysisDocument = serde_json::from_str(text)?;
        if doc.schema != ANALYSIS_SCHEMA {
            return Err(DocumentError::Schema(doc.schema));
        }
        Ok(doc)
    }
}
