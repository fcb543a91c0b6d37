//! Triples, graphs and the Turtle subset used for manifests on disk.
//!
//! The graph layer is deliberately small: terms are IRIs (stored as plain
//! strings so relative references survive parsing), blank nodes, string
//! literals and integer literals. [`turtle`] reads and writes text,
//! [`mapping`] converts between graphs and [`crate::model::Manifest`].

pub mod canon;
pub mod mapping;
pub mod turtle;
pub mod vocab;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

use crate::model::ModelError;

pub use mapping::{graph_to_model, model_to_graph};
pub use turtle::{parse_turtle, serialize_turtle};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RdfError {
    #[error("syntax error at {line}:{col}: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("unknown prefix `{prefix}` at {line}:{col}")]
    UnknownPrefix { line: usize, col: usize, prefix: String },
    #[error("graph has no sc:Manifest node")]
    NoManifestNode,
    #[error("graph has several sc:Manifest nodes: {0:?}")]
    MultipleManifestNodes(Vec<String>),
    #[error("broken rdf:List at {0}")]
    BrokenList(String),
    #[error("{0} is typed both sc:Canvas and sc:Zone")]
    TypeClash(String),
    #[error("cannot decode {node}: {message}")]
    Decode { node: String, message: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Iri(String),
    Blank(String),
    Str(String),
    Int(i64),
}

impl Term {
    pub fn iri(s: impl Into<String>) -> Self {
        Term::Iri(s.into())
    }

    pub fn as_iri(&self) -> Option<&str> {
        match self {
            Term::Iri(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_blank(&self) -> bool {
        matches!(self, Term::Blank(_))
    }

    pub fn is_resource(&self) -> bool {
        matches!(self, Term::Iri(_) | Term::Blank(_))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(s) => write!(f, "<{s}>"),
            Term::Blank(b) => write!(f, "_:{b}"),
            Term::Str(s) => write!(f, "\"{}\"", turtle::escape_string(s)),
            Term::Int(n) => write!(f, "{n}"),
        }
    }
}

/// A statement. The subject is an IRI or blank node.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub subject: Term,
    pub predicate: String,
    pub object: Term,
}

impl Triple {
    pub fn new(subject: Term, predicate: impl Into<String>, object: Term) -> Self {
        debug_assert!(subject.is_resource());
        Triple { subject, predicate: predicate.into(), object }
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <{}> {} .", self.subject, self.predicate, self.object)
    }
}

/// A set of triples plus the prefixes used to print them.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    pub triples: BTreeSet<Triple>,
    pub prefixes: BTreeMap<String, String>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_prefixes<'a>(prefixes: impl IntoIterator<Item = (&'a str, &'a str)>) -> Self {
        Graph {
            triples: BTreeSet::new(),
            prefixes: prefixes.into_iter().map(|(p, n)| (p.to_string(), n.to_string())).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn insert(&mut self, subject: Term, predicate: &str, object: Term) -> bool {
        self.triples.insert(Triple::new(subject, predicate, object))
    }

    pub fn contains(&self, subject: &Term, predicate: &str, object: &Term) -> bool {
        self.triples.contains(&Triple {
            subject: subject.clone(),
            predicate: predicate.to_string(),
            object: object.clone(),
        })
    }

    /// Triples with the given subject, in sorted order.
    pub fn about<'a>(&'a self, subject: &Term) -> impl Iterator<Item = &'a Triple> + use<'a> {
        let subject = subject.clone();
        let start = Triple { subject: subject.clone(), predicate: String::new(), object: Term::Iri(String::new()) };
        self.triples.range(start..).take_while(move |t| t.subject == subject)
    }

    pub fn objects<'a>(&'a self, subject: &Term, predicate: &str) -> impl Iterator<Item = &'a Term> + use<'a> {
        let predicate = predicate.to_string();
        self.about(subject).filter(move |t| t.predicate == predicate).map(|t| &t.object)
    }

    pub fn subjects_with<'a>(&'a self, predicate: &str, object: &Term) -> impl Iterator<Item = &'a Term> + use<'a> {
        let (predicate, object) = (predicate.to_string(), object.clone());
        self.triples.iter().filter(move |t| t.predicate == predicate && t.object == object).map(|t| &t.subject)
    }

    pub fn has_type(&self, subject: &Term, class: &str) -> bool {
        self.contains(subject, vocab::RDF_TYPE, &Term::iri(class))
    }

    /// Every node used as a subject or object (excluding literals).
    pub fn nodes(&self) -> BTreeSet<&Term> {
        self.triples
            .iter()
            .flat_map(|t| [&t.subject, &t.object])
            .filter(|t| t.is_resource())
            .collect()
    }
}

/// Members of the rdf:List starting at `head`.
pub fn read_list(graph: &Graph, head: &Term) -> Result<Vec<Term>, RdfError> {
    read_list_cells(graph, head).map(|(members, _)| members)
}

/// Members plus the cell nodes visited (excluding `rdf:nil`).
pub(crate) fn read_list_cells(graph: &Graph, head: &Term) -> Result<(Vec<Term>, Vec<Term>), RdfError> {
    let nil = Term::iri(vocab::RDF_NIL);
    let mut members = Vec::new();
    let mut cells = Vec::new();
    let mut seen = HashSet::new();
    let mut cur = head.clone();
    while cur != nil {
        let broken = |why: &str| RdfError::BrokenList(format!("{cur} ({why})"));
        if !cur.is_resource() {
            return Err(broken("literal in list position"));
        }
        if !seen.insert(cur.clone()) {
            return Err(broken("cycle"));
        }
        let firsts: Vec<&Term> = graph.objects(&cur, vocab::RDF_FIRST).collect();
        let rests: Vec<&Term> = graph.objects(&cur, vocab::RDF_REST).collect();
        match (firsts.as_slice(), rests.as_slice()) {
            ([first], [rest]) => {
                members.push((*first).clone());
                cells.push(cur.clone());
                cur = (*rest).clone();
            }
            ([], _) => return Err(broken("missing rdf:first")),
            (_, []) => return Err(broken("missing rdf:rest")),
            _ => return Err(broken("several rdf:first or rdf:rest")),
        }
    }
    Ok((members, cells))
}

/// Heads of every list chain in the graph: nodes carrying rdf:first or
/// rdf:rest that are not the rdf:rest of another node.
pub fn list_heads(graph: &Graph) -> Vec<Term> {
    let cells: BTreeSet<&Term> = graph
        .triples
        .iter()
        .filter(|t| t.predicate == vocab::RDF_FIRST || t.predicate == vocab::RDF_REST)
        .map(|t| &t.subject)
        .collect();
    let tails: HashSet<&Term> = graph.triples.iter().filter(|t| t.predicate == vocab::RDF_REST).map(|t| &t.object).collect();
    let mut heads: Vec<Term> = cells.iter().filter(|c| !tails.contains(**c)).map(|c| (*c).clone()).collect();
    let mut covered: HashSet<Term> = heads.iter().flat_map(|h| walk_rest(graph, h)).collect();
    // a chain that loops back on itself has no head; report one member of it
    for c in cells {
        if !covered.contains(c) {
            covered.extend(walk_rest(graph, c));
            heads.push(c.clone());
        }
    }
    heads
}

fn walk_rest(graph: &Graph, head: &Term) -> Vec<Term> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    let mut cur = head.clone();
    while seen.insert(cur.clone()) {
        out.push(cur.clone());
        match graph.objects(&cur, vocab::RDF_REST).next() {
            Some(next) => cur = next.clone(),
            None => break,
        }
    }
    out
}
