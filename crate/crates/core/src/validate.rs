//! Structural checks on manifests and graphs.
//!
//! | rule | severity | checks |
//! |------|----------|--------|
//! | V1   | error    | canvas, zone and image dimensions are positive |
//! | V2   | error    | annotation targets, zone bodies, sequence members, list entries and range sequences resolve (or are external) |
//! | V3   | error    | target selectors of non-placement annotations and range targets lie within the target |
//! | V4   | error    | sequence aggregates equal the canvases reachable through its items; items well formed |
//! | V5   | error    | range targets belong to the range's sequence |
//! | V6   | error    | choices are non-empty and homogeneous; bodies suit annotation and list kinds |
//! | V7   | warning  | every text annotation reaching a canvas is in some text order |
//! | V8   | error    | zone placements use quarter-turn rotations, fit their target and do not nest past depth 8 |
//! | V9   | warning  | a canvas has at least one image, directly or through a zone |
//! | V10  | error    | every rdf:List in a graph is well formed (graph input only) |
//!
//! Graph input can also yield `TypeClash`, `NoManifest` and
//! `MultipleManifests` errors, raised before any decoding is attempted.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::fragments::selector_within;
use crate::model::*;
use crate::rdf::{list_heads, read_list, vocab, Graph, Term};

/// Deepest zone-in-zone nesting that is followed.
pub const MAX_ZONE_DEPTH: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    V1,
    V2,
    V3,
    V4,
    V5,
    V6,
    V7,
    V8,
    V9,
    V10,
    TypeClash,
    NoManifest,
    MultipleManifests,
}

impl Rule {
    pub fn severity(self) -> Severity {
        match self {
            Rule::V7 | Rule::V9 => Severity::Warning,
            _ => Severity::Error,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "ERROR",
            Severity::Warning => "WARNING",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Diagnostic {
    pub rule: Rule,
    pub severity: Severity,
    pub subject: String,
    pub message: String,
}

impl Diagnostic {
    fn new(rule: Rule, subject: impl fmt::Display, message: impl Into<String>) -> Self {
        Diagnostic { rule, severity: rule.severity(), subject: subject.to_string(), message: message.into() }
    }
}

/// `RULE SEVERITY subject message`
impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} {}", self.rule, self.severity, self.subject, self.message)
    }
}

pub fn has_errors(diagnostics: &[Diagnostic]) -> bool {
    diagnostics.iter().any(|d| d.severity == Severity::Error)
}

/// One line per diagnostic.
pub fn format_report(diagnostics: &[Diagnostic]) -> String {
    diagnostics.iter().map(|d| format!("{d}\n")).collect()
}

fn finish(mut out: Vec<Diagnostic>) -> Vec<Diagnostic> {
    out.sort();
    out.dedup();
    out
}

/// Canvas or zone itself plus every zone placed on it, transitively, with
/// the nesting depth at which each zone is first reached.
pub fn surfaces(manifest: &Manifest, root: &Iri) -> Vec<(Iri, usize)> {
    let mut out = vec![(root.clone(), 0)];
    let mut seen: HashSet<Iri> = HashSet::from([root.clone()]);
    let mut i = 0;
    while i < out.len() {
        let (surface, depth) = out[i].clone();
        i += 1;
        if depth >= MAX_ZONE_DEPTH {
            continue;
        }
        for placement in manifest.placements_on(&surface) {
            if let Body::Zone(z) = &placement.body {
                if seen.insert(z.clone()) {
                    out.push((z.clone(), depth + 1));
                }
            }
        }
    }
    out
}

/// Runs rules V1 to V9 over a model.
pub fn validate_manifest(m: &Manifest) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let canvases: HashMap<&Iri, &Canvas> = m.canvases.iter().map(|c| (&c.id, c)).collect();
    let zones: HashMap<&Iri, &Zone> = m.zones.iter().map(|z| (&z.id, z)).collect();
    let annotations: HashMap<&Iri, &Annotation> = m.annotations.iter().map(|a| (&a.id, a)).collect();
    let resources: HashSet<&Iri> = m.annotations.iter().flat_map(Annotation::body_resources).map(|r| &r.id).collect();
    let bounds = |i: &Iri| m.bounds_of(i);

    // V1
    for c in &m.canvases {
        if c.width == 0 || c.height == 0 {
            out.push(Diagnostic::new(Rule::V1, &c.id, format!("canvas has non-positive size {}x{}", c.width, c.height)));
        }
    }
    for z in &m.zones {
        if z.width == 0 || z.height == 0 {
            out.push(Diagnostic::new(Rule::V1, &z.id, format!("zone has non-positive size {}x{}", z.width, z.height)));
        }
    }
    let mut seen_resources = HashSet::new();
    for r in m.annotations.iter().flat_map(Annotation::body_resources) {
        if seen_resources.insert(&r.id) && (r.width == Some(0) || r.height == Some(0)) {
            out.push(Diagnostic::new(Rule::V1, &r.id, "resource has a zero dimension"));
        }
    }

    // V2
    for a in &m.annotations {
        let resolved = match &a.target {
            Target::Canvas(i) => canvases.contains_key(i),
            Target::Zone(i) => zones.contains_key(i),
            Target::Annotation(i) => annotations.contains_key(i),
            Target::Resource(i) => resources.contains(i),
            Target::External(i) => m.is_external(i),
        };
        if !resolved {
            out.push(Diagnostic::new(Rule::V2, &a.id, format!("target {} does not resolve", a.target.iri())));
        }
        if let Body::Zone(z) = &a.body {
            if !zones.contains_key(z) {
                out.push(Diagnostic::new(Rule::V2, &a.id, format!("zone {z} does not resolve")));
            }
        }
    }
    for s in &m.sequences {
        for c in s.items.iter().flat_map(SequenceItem::canvases).chain(&s.aggregates).collect::<BTreeSet<_>>() {
            if !canvases.contains_key(c) {
                out.push(Diagnostic::new(Rule::V2, &s.id, format!("canvas {c} does not resolve")));
            }
        }
    }
    for l in &m.annotation_lists {
        for e in &l.entries {
            if !annotations.contains_key(e) {
                out.push(Diagnostic::new(Rule::V2, &l.id, format!("entry {e} does not resolve")));
            }
        }
    }
    for r in &m.ranges {
        if m.sequence(&r.sequence).is_none() {
            out.push(Diagnostic::new(Rule::V2, &r.id, format!("sequence {} does not resolve", r.sequence)));
        }
    }

    // V3
    for a in m.annotations.iter().filter(|a| a.kind != AnnotationKind::PlaceZone) {
        if let (Some(sel), Some((w, h))) = (&a.target_selector, bounds(a.target.iri())) {
            if !selector_within(sel, w, h) {
                out.push(Diagnostic::new(Rule::V3, &a.id, format!("target selector {sel} exceeds {w}x{h}")));
            }
        }
    }
    for r in &m.ranges {
        for t in &r.targets {
            if let (Some(sel), Some((w, h))) = (&t.selector, bounds(&t.canvas)) {
                if !selector_within(sel, w, h) {
                    out.push(Diagnostic::new(Rule::V3, &r.id, format!("selector {sel} on {} exceeds {w}x{h}", t.canvas)));
                }
            }
        }
    }

    // V4
    if m.sequences.is_empty() {
        out.push(Diagnostic::new(Rule::V4, &m.id, "manifest has no sequences"));
    }
    for s in &m.sequences {
        if s.items.is_empty() {
            out.push(Diagnostic::new(Rule::V4, &s.id, "sequence has no items"));
        }
        let mut reachable = BTreeSet::new();
        for item in &s.items {
            if let SequenceItem::Alternatives(paths) = item {
                if paths.len() < 2 || paths.iter().any(Vec::is_empty) {
                    out.push(Diagnostic::new(Rule::V4, &s.id, "alternative group needs two or more non-empty paths"));
                }
            }
            for c in item.canvases() {
                if !reachable.insert(c) {
                    out.push(Diagnostic::new(Rule::V4, &s.id, format!("canvas {c} appears twice")));
                }
            }
        }
        let aggregated: BTreeSet<&Iri> = s.aggregates.iter().collect();
        if reachable != aggregated {
            let missing: Vec<String> = reachable.difference(&aggregated).map(|c| c.to_string()).collect();
            let extra: Vec<String> = aggregated.difference(&reachable).map(|c| c.to_string()).collect();
            out.push(Diagnostic::new(
                Rule::V4,
                &s.id,
                format!("aggregates differ from reachable canvases (not aggregated: [{}]; unreachable: [{}])", missing.join(", "), extra.join(", ")),
            ));
        }
    }

    // V5
    for r in &m.ranges {
        if let Some(s) = m.sequence(&r.sequence) {
            for t in &r.targets {
                if !s.aggregates.contains(&t.canvas) {
                    out.push(Diagnostic::new(Rule::V5, &r.id, format!("target {} is not in sequence {}", t.canvas, s.id)));
                }
            }
        }
    }

    // V6
    let mut seen_choices = HashSet::new();
    for a in &m.annotations {
        if let Body::Choice(c) = &a.body {
            if seen_choices.insert(&c.id) {
                if c.options.is_empty() {
                    out.push(Diagnostic::new(Rule::V6, &c.id, "choice has no options"));
                }
                if let Some(o) = c.options.iter().find(|o| o.kind != c.kind.resource_kind()) {
                    out.push(Diagnostic::new(Rule::V6, &c.id, format!("option {} does not match {:?}", o.id, c.kind)));
                }
            }
        }
        let body_ok = match (a.kind, &a.body) {
            (AnnotationKind::PaintImage, Body::Resource(r)) => r.kind == ResourceKind::Image,
            (AnnotationKind::PaintImage, Body::Choice(c)) => c.kind == ChoiceKind::ImageChoice,
            (AnnotationKind::PaintText, Body::Resource(r)) => r.kind == ResourceKind::Text,
            (AnnotationKind::PaintText, Body::Choice(c)) => c.kind == ChoiceKind::TextChoice,
            (AnnotationKind::PaintText, Body::Inline(_)) => true,
            (AnnotationKind::PlaceZone, Body::Zone(_)) => true,
            (AnnotationKind::Comment | AnnotationKind::Describe, Body::Resource(r)) => r.kind == ResourceKind::Text,
            (AnnotationKind::Comment | AnnotationKind::Describe, Body::Inline(_)) => true,
            _ => false,
        };
        if !body_ok {
            out.push(Diagnostic::new(Rule::V6, &a.id, format!("body does not suit a {:?} annotation", a.kind)));
        }
    }
    for l in &m.annotation_lists {
        let mut seen = HashSet::new();
        for e in &l.entries {
            if !seen.insert(e) {
                out.push(Diagnostic::new(Rule::V6, &l.id, format!("entry {e} is listed twice")));
            }
            let fits = match (l.kind, annotations.get(e)) {
                (ListKind::TextOrder, Some(a)) => a.kind == AnnotationKind::PaintText,
                (ListKind::ImageList, Some(a)) => a.kind == AnnotationKind::PaintImage,
                _ => true,
            };
            if !fits {
                out.push(Diagnostic::new(Rule::V6, &l.id, format!("entry {e} does not belong in a {:?}", l.kind)));
            }
        }
    }

    // V7 and V9
    let ordered: HashSet<&Iri> = m
        .annotation_lists
        .iter()
        .filter(|l| l.kind == ListKind::TextOrder)
        .flat_map(|l| &l.entries)
        .collect();
    for c in &m.canvases {
        let reach: HashSet<Iri> = surfaces(m, &c.id).into_iter().map(|(s, _)| s).collect();
        let reach = &reach;
        let on_canvas = |kind: AnnotationKind| {
            m.annotations.iter().filter(move |a| a.kind == kind && matches!(a.target, Target::Canvas(_) | Target::Zone(_)) && reach.contains(a.target.iri()))
        };
        let unordered: Vec<&Iri> = on_canvas(AnnotationKind::PaintText).map(|a| &a.id).filter(|id| !ordered.contains(id)).collect();
        if !unordered.is_empty() {
            let ids: Vec<String> = unordered.iter().map(|i| i.to_string()).collect();
            out.push(Diagnostic::new(Rule::V7, &c.id, format!("text without a reading order: {}", ids.join(", "))));
        }
        if on_canvas(AnnotationKind::PaintImage).next().is_none() {
            out.push(Diagnostic::new(Rule::V9, &c.id, "canvas has no image"));
        }
    }

    // V8
    for a in &m.annotations {
        if a.kind != AnnotationKind::PlaceZone {
            if a.rotation != 0 {
                out.push(Diagnostic::new(Rule::V8, &a.id, format!("rotation {} on a non-placement annotation", a.rotation)));
            }
            continue;
        }
        if Rotation::from_degrees(a.rotation).is_err() {
            out.push(Diagnostic::new(Rule::V8, &a.id, format!("rotation {} is not a quarter turn", a.rotation)));
        }
        if let (Some(sel), Some((w, h))) = (&a.target_selector, bounds(a.target.iri())) {
            if !selector_within(sel, w, h) {
                out.push(Diagnostic::new(Rule::V8, &a.id, format!("placement {sel} exceeds {w}x{h}")));
            }
        }
    }
    for z in &m.zones {
        if surfaces(m, &z.id).iter().any(|(s, d)| *d > 0 && s == &z.id) || zone_depth_exceeded(m, &z.id) {
            out.push(Diagnostic::new(Rule::V8, &z.id, format!("zone nesting is cyclic or deeper than {MAX_ZONE_DEPTH}")));
        }
    }

    finish(out)
}

/// True when a chain of placements starting at `zone` loops or runs past
/// the depth limit.
fn zone_depth_exceeded(m: &Manifest, zone: &Iri) -> bool {
    fn walk(m: &Manifest, z: &Iri, path: &mut Vec<Iri>) -> bool {
        if path.contains(z) || path.len() > MAX_ZONE_DEPTH {
            return true;
        }
        path.push(z.clone());
        let bad = m.placements_on(z).any(|p| match &p.body {
            Body::Zone(inner) => walk(m, inner, path),
            _ => false,
        });
        path.pop();
        bad
    }
    walk(m, zone, &mut Vec::new())
}

/// Graph-level checks run before decoding: manifest count, type clashes
/// and list well-formedness (V10).
pub fn validate_graph(graph: &Graph) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let manifests: Vec<&Term> = graph.subjects_with(vocab::RDF_TYPE, &Term::iri(vocab::SC_MANIFEST)).collect();
    match manifests.len() {
        0 => out.push(Diagnostic::new(Rule::NoManifest, "-", "graph has no sc:Manifest node")),
        1 => {}
        _ => {
            for m in &manifests {
                out.push(Diagnostic::new(Rule::MultipleManifests, m, "one of several sc:Manifest nodes"));
            }
        }
    }
    for c in graph.subjects_with(vocab::RDF_TYPE, &Term::iri(vocab::SC_CANVAS)) {
        if graph.has_type(c, vocab::SC_ZONE) {
            out.push(Diagnostic::new(Rule::TypeClash, c, "typed both sc:Canvas and sc:Zone"));
        }
    }
    for head in list_heads(graph) {
        if let Err(e) = read_list(graph, &head) {
            out.push(Diagnostic::new(Rule::V10, &head, e.to_string()));
        }
    }
    finish(out)
}
