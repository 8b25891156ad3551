//! Conjugation-form presentations and their graphs.
//!
//! A relation `k i k^-1 = j` becomes the edge `i -> j` labeled `k`; every
//! generator becomes a vertex. The translation preserves generator and
//! relation order in both directions.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::{GraphError, LogGraph, RawEdge, RawLog};

/// `conjugator left conjugator^-1 = right`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub conjugator: String,
    pub left: String,
    pub right: String,
}

impl Relation {
    pub fn new(conjugator: impl Into<String>, left: impl Into<String>, right: impl Into<String>) -> Self {
        Relation { conjugator: conjugator.into(), left: left.into(), right: right.into() }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LotPresentation {
    pub generators: Vec<String>,
    pub relations: Vec<Relation>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PresentationError {
    #[error("relation {relation} uses unknown generator {name:?}")]
    UnknownGenerator { relation: usize, name: String },
    #[error("relation {relation} conjugates a generator to itself")]
    TrivialRelation { relation: usize },
    #[error("relations {first} and {relation} join the same pair of generators")]
    DuplicateEdge { relation: usize, first: usize },
    #[error(transparent)]
    Graph(GraphError),
}

impl LotPresentation {
    pub fn check(&self) -> Result<(), PresentationError> {
        for (i, r) in self.relations.iter().enumerate() {
            for name in [&r.conjugator, &r.left, &r.right] {
                if !self.generators.contains(name) {
                    return Err(PresentationError::UnknownGenerator { relation: i, name: name.clone() });
                }
            }
            if r.left == r.right {
                return Err(PresentationError::TrivialRelation { relation: i });
            }
        }
        Ok(())
    }

    /// One vertex per generator, one edge `left -> right` labeled by the
    /// conjugator per relation.
    pub fn to_log(&self) -> Result<LogGraph, PresentationError> {
        self.check()?;
        let raw = RawLog {
            vertices: self.generators.clone(),
            edges: self.relations.iter().map(|r| RawEdge::new(&*r.left, &*r.right, &*r.conjugator)).collect(),
        };
        LogGraph::from_raw(&raw).map_err(|e| match e {
            GraphError::DuplicateEdge { edge, first } => PresentationError::DuplicateEdge { relation: edge, first },
            GraphError::SelfLoop { edge } => PresentationError::TrivialRelation { relation: edge },
            other => PresentationError::Graph(other),
        })
    }

    pub fn from_log(g: &LogGraph) -> Self {
        LotPresentation {
            generators: g.names().to_vec(),
            relations: g.edges().iter().map(|e| Relation::new(g.name(e.label), g.name(e.source), g.name(e.target))).collect(),
        }
    }
}

/// Renders the presentation as `< a, b | k i k^-1 = j, ... >`.
impl fmt::Display for LotPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("< ")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(g)?;
        }
        f.write_str(" |")?;
        for (i, r) in self.relations.iter().enumerate() {
            f.write_str(if i > 0 { ", " } else { " " })?;
            write!(f, "{k} {i} {k}^-1 = {j}", k = r.conjugator, i = r.left, j = r.right)?;
        }
        f.write_str(" >")
    }
}

pub fn presentation_to_log(p: &LotPresentation) -> Result<LogGraph, PresentationError> {
    p.to_log()
}

pub fn log_to_presentation(g: &LogGraph) -> LotPresentation {
    LotPresentation::from_log(g)
}
