//! In-memory object model for canvas-based manuscript descriptions.
//!
//! A [`Canvas`] is an empty, dimensioned coordinate space standing for one
//! page. Everything else is attached to canvases by [`Annotation`]s: images
//! and transcriptions are painted onto them, [`Zone`]s are placed on them,
//! and scholarly comments point at them. [`Sequence`]s order canvases,
//! [`Range`]s pick out (parts of) canvases from one sequence, and a
//! [`Manifest`] collects it all.
//!
//! Values built through [`ManifestBuilder`] and the free builder functions
//! satisfy the structural invariants checked by [`crate::validate`]. Fields
//! stay public so that models decoded from foreign graphs (which may break
//! those invariants) can be represented and diagnosed.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use thiserror::Error;

pub use crate::fragments::{Point, Polygon, Rect, RegionSelector};
use crate::fragments::{selector_within, FragmentError};
use crate::rdf::Triple;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("invalid IRI `{0}`")]
    InvalidIri(String),
    #[error("non-positive dimension {width}x{height} for {id}")]
    NonPositiveDimension { id: String, width: i64, height: i64 },
    #[error("selector {selector} exceeds {width}x{height} bounds of {target}")]
    SelectorOutOfBounds { target: Iri, selector: String, width: u32, height: u32 },
    #[error("kind mismatch: {0}")]
    KindMismatch(String),
    #[error("choice {0} has no options")]
    EmptyChoice(Iri),
    #[error("canvas {canvas} appears twice in sequence {sequence}")]
    DuplicateCanvasInSequence { sequence: Iri, canvas: Iri },
    #[error("sequence {0} has no items")]
    EmptySequence(Iri),
    #[error("alternative group in {0} needs at least two non-empty paths")]
    InvalidAlternatives(Iri),
    #[error("range target {canvas} is not in sequence {sequence}")]
    RangeTargetNotInSequence { sequence: Iri, canvas: Iri },
    #[error("dangling reference to {0}")]
    DanglingReference(Iri),
    #[error("manifest has no sequences")]
    NoSequences,
    #[error("rotation {0} is not a quarter turn")]
    InvalidRotation(u16),
    #[error("{0} is defined more than once with different content")]
    ConflictingDefinition(Iri),
    #[error(transparent)]
    Selector(#[from] FragmentError),
}

pub type Result<T, E = ModelError> = std::result::Result<T, E>;

/// An absolute IRI, optionally carrying a fragment.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Iri(String);

impl Iri {
    pub fn new(value: impl Into<String>) -> Result<Self> {
        let value = value.into();
        if is_valid_iri(&value) {
            Ok(Iri(value))
        } else {
            Err(ModelError::InvalidIri(value))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Part before `#`.
    pub fn base(&self) -> &str {
        self.0.split_once('#').map_or(&self.0, |(b, _)| b)
    }

    pub fn fragment(&self) -> Option<&str> {
        self.0.split_once('#').map(|(_, f)| f)
    }

    /// Scheme plus host (`http://example.org`), or just the scheme for
    /// IRIs without an authority component.
    pub fn authority(&self) -> &str {
        let colon = self.0.find(':').unwrap_or(0);
        let rest = &self.0[colon + 1..];
        match rest.strip_prefix("//") {
            Some(after) => {
                let end = after.find(['/', '#', '?']).unwrap_or(after.len());
                &self.0[..colon + 3 + end]
            }
            None => &self.0[..=colon],
        }
    }

    /// Appends a path segment, e.g. `base.join("canvas-1")`.
    pub fn join(&self, segment: &str) -> Result<Iri> {
        let base = self.base();
        let sep = if base.ends_with('/') { "" } else { "/" };
        Iri::new(format!("{base}{sep}{segment}"))
    }
}

fn is_valid_iri(s: &str) -> bool {
    let Some(colon) = s.find(':') else { return false };
    let scheme = &s[..colon];
    let mut chars = scheme.chars();
    let scheme_ok = chars.next().is_some_and(|c| c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'));
    scheme_ok
        && s.matches('#').count() <= 1
        && !s.chars().any(|c| c.is_whitespace() || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '\\' | '^' | '`'))
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for Iri {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// A blank page-sized coordinate space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Canvas {
    pub id: Iri,
    pub label: String,
    pub width: u32,
    pub height: u32,
}

/// Width used when a canvas is only known by its aspect ratio.
pub const ASPECT_NORMALIZED_WIDTH: u32 = 1000;

/// Creates a canvas. Units are abstract and independent of any image.
pub fn new_canvas(id: Iri, label: impl Into<String>, width: i64, height: i64) -> Result<Canvas> {
    if width <= 0 || height <= 0 || width > i64::from(u32::MAX) || height > i64::from(u32::MAX) {
        return Err(ModelError::NonPositiveDimension { id: id.to_string(), width, height });
    }
    Ok(Canvas { id, label: label.into(), width: width as u32, height: height as u32 })
}

impl Canvas {
    /// Canvas of width 1000 and height `round(1000 / ratio)` where
    /// `ratio = width / height`.
    pub fn from_aspect_ratio(id: Iri, label: impl Into<String>, ratio: f64) -> Result<Canvas> {
        let height = if ratio.is_finite() && ratio > 0.0 {
            (f64::from(ASPECT_NORMALIZED_WIDTH) / ratio).round() as i64
        } else {
            0
        };
        new_canvas(id, label, i64::from(ASPECT_NORMALIZED_WIDTH), height)
    }
}

/// A reusable area that collects annotations and can be placed on canvases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Zone {
    pub id: Iri,
    pub width: u32,
    pub height: u32,
}

pub fn new_zone(id: Iri, width: i64, height: i64) -> Result<Zone> {
    let canvas = new_canvas(id, "", width, height)?;
    Ok(Zone { id: canvas.id, width: canvas.width, height: canvas.height })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ResourceKind {
    Image,
    Text,
}

/// An image or text that can be painted onto a canvas or zone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContentResource {
    pub id: Iri,
    pub kind: ResourceKind,
    pub media_type: String,
    /// Pixel size, images only.
    pub width: Option<u32>,
    pub height: Option<u32>,
    /// Embedded transcription, texts only.
    pub chars: Option<String>,
    /// Free-form selection properties such as `scale`, `lighting` or `author`.
    pub metadata: BTreeMap<String, String>,
}

impl ContentResource {
    pub fn image(id: Iri, media_type: impl Into<String>, size: Option<(u32, u32)>) -> Self {
        ContentResource {
            id,
            kind: ResourceKind::Image,
            media_type: media_type.into(),
            width: size.map(|s| s.0),
            height: size.map(|s| s.1),
            chars: None,
            metadata: BTreeMap::new(),
        }
    }

    pub fn text(id: Iri, media_type: impl Into<String>, chars: Option<String>) -> Self {
        ContentResource {
            id,
            kind: ResourceKind::Text,
            media_type: media_type.into(),
            width: None,
            height: None,
            chars,
            metadata: BTreeMap::new(),
        }
    }

    pub fn with_metadata(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.metadata.insert(key.into(), value.into());
        self
    }

    pub fn size(&self) -> Option<(u32, u32)> {
        self.width.zip(self.height)
    }

    fn check(&self) -> Result<()> {
        if self.kind == ResourceKind::Image && self.chars.is_some() {
            return Err(ModelError::KindMismatch(format!("image {} carries characters", self.id)));
        }
        if self.width.is_some() != self.height.is_some() {
            return Err(ModelError::KindMismatch(format!("{} has only one of width/height", self.id)));
        }
        if self.width == Some(0) || self.height == Some(0) {
            return Err(ModelError::NonPositiveDimension {
                id: self.id.to_string(),
                width: self.width.map_or(0, i64::from),
                height: self.height.map_or(0, i64::from),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ChoiceKind {
    ImageChoice,
    TextChoice,
}

impl ChoiceKind {
    pub fn resource_kind(self) -> ResourceKind {
        match self {
            ChoiceKind::ImageChoice => ResourceKind::Image,
            ChoiceKind::TextChoice => ResourceKind::Text,
        }
    }
}

/// Equivalent resources; a renderer picks one. Option order is the default
/// preference.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Choice {
    pub id: Iri,
    pub kind: ChoiceKind,
    pub options: Vec<ContentResource>,
}

impl Choice {
    pub fn option_metadata(&self, index: usize) -> Option<&BTreeMap<String, String>> {
        self.options.get(index).map(|o| &o.metadata)
    }
}

/// Builds a choice. `metadata`, when non-empty, is merged into the options
/// position by position.
pub fn make_choice(
    id: Iri,
    kind: ChoiceKind,
    options: Vec<ContentResource>,
    metadata: Vec<BTreeMap<String, String>>,
) -> Result<Choice> {
    if options.is_empty() {
        return Err(ModelError::EmptyChoice(id));
    }
    if !metadata.is_empty() && metadata.len() != options.len() {
        return Err(ModelError::KindMismatch(format!("{id}: metadata does not match options")));
    }
    let mut options = options;
    for (opt, meta) in options.iter_mut().zip(metadata) {
        opt.metadata.extend(meta);
    }
    for opt in &options {
        opt.check()?;
        if opt.kind != kind.resource_kind() {
            return Err(ModelError::KindMismatch(format!("{} in {:?} {id}", opt.id, kind)));
        }
    }
    Ok(Choice { id, kind, options })
}

/// Quarter-turn clockwise rotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum Rotation {
    #[default]
    R0,
    R90,
    R180,
    R270,
}

impl Rotation {
    pub fn degrees(self) -> u16 {
        match self {
            Rotation::R0 => 0,
            Rotation::R90 => 90,
            Rotation::R180 => 180,
            Rotation::R270 => 270,
        }
    }

    pub fn from_degrees(degrees: u16) -> Result<Self> {
        match degrees {
            0 => Ok(Rotation::R0),
            90 => Ok(Rotation::R90),
            180 => Ok(Rotation::R180),
            270 => Ok(Rotation::R270),
            d => Err(ModelError::InvalidRotation(d)),
        }
    }

    pub fn quarter_turns(self) -> u8 {
        (self.degrees() / 90) as u8
    }

    pub fn from_quarter_turns(n: u8) -> Self {
        match n % 4 {
            0 => Rotation::R0,
            1 => Rotation::R90,
            2 => Rotation::R180,
            _ => Rotation::R270,
        }
    }

    /// True for 90 and 270, which swap width and height.
    pub fn is_odd(self) -> bool {
        self.quarter_turns() % 2 == 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AnnotationKind {
    PaintImage,
    PaintText,
    PlaceZone,
    Comment,
    Describe,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Body {
    Resource(ContentResource),
    Choice(Choice),
    Zone(Iri),
    /// Short transcription or note stored on the annotation itself.
    Inline(String),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Target {
    Canvas(Iri),
    Zone(Iri),
    Annotation(Iri),
    Resource(Iri),
    /// A resource held elsewhere, under a different authority than the manifest.
    External(Iri),
}

impl Target {
    pub fn iri(&self) -> &Iri {
        match self {
            Target::Canvas(i) | Target::Zone(i) | Target::Annotation(i) | Target::Resource(i) | Target::External(i) => i,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Annotation {
    pub id: Iri,
    pub kind: AnnotationKind,
    pub body: Body,
    pub body_selector: Option<RegionSelector>,
    pub target: Target,
    pub target_selector: Option<RegionSelector>,
    /// Clockwise degrees; non-zero only for zone placements.
    pub rotation: u16,
    pub author: Option<String>,
    pub certainty: Option<String>,
}

impl Annotation {
    fn new(id: Iri, kind: AnnotationKind, body: Body, target: Target) -> Self {
        Annotation {
            id,
            kind,
            body,
            body_selector: None,
            target,
            target_selector: None,
            rotation: 0,
            author: None,
            certainty: None,
        }
    }

    /// Body resources, including every option of a choice.
    pub fn body_resources(&self) -> Vec<&ContentResource> {
        match &self.body {
            Body::Resource(r) => vec![r],
            Body::Choice(c) => c.options.iter().collect(),
            Body::Zone(_) | Body::Inline(_) => Vec::new(),
        }
    }

    /// Checks the body/kind/rotation pairing.
    pub fn check_kind(&self) -> Result<()> {
        let mismatch = |what: &str| Err(ModelError::KindMismatch(format!("{}: {what}", self.id)));
        let ok = match (self.kind, &self.body) {
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
        if !ok {
            return mismatch("body does not suit the annotation type");
        }
        if self.kind == AnnotationKind::PlaceZone {
            if !matches!(self.target, Target::Canvas(_) | Target::Zone(_)) {
                return mismatch("zones are placed on canvases or zones");
            }
        } else if self.rotation != 0 {
            return mismatch("only zone placements rotate");
        }
        if matches!(self.body, Body::Inline(_) | Body::Zone(_)) && self.body_selector.is_some() {
            return mismatch("inline and zone bodies cannot be region-selected");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SequenceItem {
    Single(Iri),
    /// Parallel paths, e.g. a spread canvas versus its two page canvases.
    Alternatives(Vec<Vec<Iri>>),
}

impl SequenceItem {
    pub fn canvases(&self) -> Vec<&Iri> {
        match self {
            SequenceItem::Single(c) => vec![c],
            SequenceItem::Alternatives(paths) => paths.iter().flatten().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequence {
    pub id: Iri,
    pub label: String,
    pub items: Vec<SequenceItem>,
    /// Every canvas reachable through `items`.
    pub aggregates: BTreeSet<Iri>,
}

impl Sequence {
    /// Reachable canvases in first-appearance order.
    pub fn reachable(&self) -> Vec<&Iri> {
        let mut seen = HashSet::new();
        self.items
            .iter()
            .flat_map(SequenceItem::canvases)
            .filter(|c| seen.insert(*c))
            .collect()
    }

    pub fn has_alternatives(&self) -> bool {
        self.items.iter().any(|i| matches!(i, SequenceItem::Alternatives(_)))
    }
}

pub fn build_sequence(id: Iri, label: impl Into<String>, items: Vec<SequenceItem>) -> Result<Sequence> {
    if items.is_empty() {
        return Err(ModelError::EmptySequence(id));
    }
    let mut aggregates = BTreeSet::new();
    for item in &items {
        if let SequenceItem::Alternatives(paths) = item {
            if paths.len() < 2 || paths.iter().any(Vec::is_empty) {
                return Err(ModelError::InvalidAlternatives(id));
            }
        }
        for canvas in item.canvases() {
            if !aggregates.insert(canvas.clone()) {
                return Err(ModelError::DuplicateCanvasInSequence { sequence: id, canvas: canvas.clone() });
            }
        }
    }
    Ok(Sequence { id, label: label.into(), items, aggregates })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RangeTarget {
    pub canvas: Iri,
    pub selector: Option<RegionSelector>,
}

impl RangeTarget {
    pub fn whole(canvas: Iri) -> Self {
        RangeTarget { canvas, selector: None }
    }

    pub fn part(canvas: Iri, selector: impl Into<RegionSelector>) -> Self {
        RangeTarget { canvas, selector: Some(selector.into()) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Range {
    pub id: Iri,
    pub label: String,
    pub sequence: Iri,
    pub targets: Vec<RangeTarget>,
}

pub fn build_range(id: Iri, label: impl Into<String>, sequence: &Sequence, targets: Vec<RangeTarget>) -> Result<Range> {
    for t in &targets {
        if !sequence.aggregates.contains(&t.canvas) {
            return Err(ModelError::RangeTargetNotInSequence {
                sequence: sequence.id.clone(),
                canvas: t.canvas.clone(),
            });
        }
    }
    Ok(Range { id, label: label.into(), sequence: sequence.id.clone(), targets })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ListKind {
    /// Reading order of transcribed lines.
    TextOrder,
    ImageList,
    CommentList,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotationList {
    pub id: Iri,
    pub kind: ListKind,
    pub entries: Vec<Iri>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Manifest {
    pub id: Iri,
    pub label: String,
    /// Ordered by first appearance across sequences, then unsequenced canvases.
    pub canvases: Vec<Canvas>,
    /// The first sequence is the default.
    pub sequences: Vec<Sequence>,
    pub ranges: Vec<Range>,
    pub annotation_lists: Vec<AnnotationList>,
    pub zones: Vec<Zone>,
    /// Declaration order; within a paint layer this is the stacking order.
    pub annotations: Vec<Annotation>,
    pub metadata: BTreeMap<String, String>,
    /// Triples from a decoded graph that the model does not interpret.
    pub extra_triples: Vec<Triple>,
}

/// What an IRI names inside a manifest.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Canvas,
    Zone,
    Annotation,
    Resource,
    Choice,
    Sequence,
    Range,
    List,
}

impl Manifest {
    pub fn canvas(&self, id: &Iri) -> Option<&Canvas> {
        self.canvases.iter().find(|c| &c.id == id)
    }

    pub fn zone(&self, id: &Iri) -> Option<&Zone> {
        self.zones.iter().find(|z| &z.id == id)
    }

    pub fn annotation(&self, id: &Iri) -> Option<&Annotation> {
        self.annotations.iter().find(|a| &a.id == id)
    }

    pub fn sequence(&self, id: &Iri) -> Option<&Sequence> {
        self.sequences.iter().find(|s| &s.id == id)
    }

    pub fn default_sequence(&self) -> Option<&Sequence> {
        self.sequences.first()
    }

    /// First body resource with this id.
    pub fn resource(&self, id: &Iri) -> Option<&ContentResource> {
        self.annotations.iter().flat_map(Annotation::body_resources).find(|r| &r.id == id)
    }

    /// True when `iri` lives under a different authority than the manifest.
    pub fn is_external(&self, iri: &Iri) -> bool {
        iri.authority() != self.id.authority()
    }

    /// Classifies an IRI by what it names in this manifest.
    pub fn kind_of(&self, iri: &Iri) -> Option<NodeKind> {
        node_index(self).get(iri).copied()
    }

    /// Dimensions of a canvas or zone.
    pub fn bounds_of(&self, iri: &Iri) -> Option<(u32, u32)> {
        self.canvas(iri)
            .map(|c| (c.width, c.height))
            .or_else(|| self.zone(iri).map(|z| (z.width, z.height)))
    }

    /// Zone placements whose target is `target` (a canvas or zone), in
    /// declaration order.
    pub fn placements_on<'a>(&'a self, target: &Iri) -> impl Iterator<Item = &'a Annotation> + use<'a> {
        let target = target.clone();
        self.annotations
            .iter()
            .filter(move |a| a.kind == AnnotationKind::PlaceZone && a.target.iri() == &target)
    }
}

fn node_index(m: &Manifest) -> HashMap<Iri, NodeKind> {
    let mut idx = HashMap::new();
    for c in &m.canvases {
        idx.insert(c.id.clone(), NodeKind::Canvas);
    }
    for z in &m.zones {
        idx.insert(z.id.clone(), NodeKind::Zone);
    }
    for a in &m.annotations {
        idx.insert(a.id.clone(), NodeKind::Annotation);
        if let Body::Choice(c) = &a.body {
            idx.entry(c.id.clone()).or_insert(NodeKind::Choice);
        }
        for r in a.body_resources() {
            idx.entry(r.id.clone()).or_insert(NodeKind::Resource);
        }
    }
    for s in &m.sequences {
        idx.insert(s.id.clone(), NodeKind::Sequence);
    }
    for r in &m.ranges {
        idx.insert(r.id.clone(), NodeKind::Range);
    }
    for l in &m.annotation_lists {
        idx.insert(l.id.clone(), NodeKind::List);
    }
    idx
}

/// Assembles and checks a manifest.
///
/// Internal references (same authority as `id`) must resolve; references
/// under another authority are accepted as external. Canvases are reordered
/// by first appearance across sequences.
#[allow(clippy::too_many_arguments)]
pub fn build_manifest(
    id: Iri,
    label: impl Into<String>,
    canvases: Vec<Canvas>,
    sequences: Vec<Sequence>,
    ranges: Vec<Range>,
    annotation_lists: Vec<AnnotationList>,
    zones: Vec<Zone>,
    annotations: Vec<Annotation>,
    metadata: BTreeMap<String, String>,
) -> Result<Manifest> {
    if sequences.is_empty() {
        return Err(ModelError::NoSequences);
    }
    let mut manifest = Manifest {
        id,
        label: label.into(),
        canvases,
        sequences,
        ranges,
        annotation_lists,
        zones,
        annotations,
        metadata,
        extra_triples: Vec::new(),
    };
    check_unique_ids(&manifest)?;
    check_resources(&manifest)?;
    let index = node_index(&manifest);
    let resolves = |iri: &Iri, want: &[NodeKind]| -> Result<()> {
        match index.get(iri) {
            Some(k) if want.contains(k) => Ok(()),
            Some(_) => Err(ModelError::KindMismatch(format!("{iri} is not a {want:?}"))),
            None => Err(ModelError::DanglingReference(iri.clone())),
        }
    };
    for seq in &manifest.sequences {
        for canvas in &seq.aggregates {
            resolves(canvas, &[NodeKind::Canvas])?;
        }
    }
    for range in &manifest.ranges {
        let seq = manifest.sequence(&range.sequence).ok_or_else(|| ModelError::DanglingReference(range.sequence.clone()))?;
        build_range(range.id.clone(), "", seq, range.targets.clone())?;
    }
    for list in &manifest.annotation_lists {
        for entry in &list.entries {
            resolves(entry, &[NodeKind::Annotation])?;
        }
    }
    for anno in &manifest.annotations {
        anno.check_kind()?;
        if let Body::Zone(z) = &anno.body {
            resolves(z, &[NodeKind::Zone])?;
        }
        let want = match &anno.target {
            Target::Canvas(_) => NodeKind::Canvas,
            Target::Zone(_) => NodeKind::Zone,
            Target::Annotation(_) => NodeKind::Annotation,
            Target::Resource(_) => NodeKind::Resource,
            Target::External(iri) => {
                if !manifest.is_external(iri) {
                    return Err(ModelError::DanglingReference(iri.clone()));
                }
                continue;
            }
        };
        resolves(anno.target.iri(), &[want])?;
    }
    normalize_canvas_order(&mut manifest);
    Ok(manifest)
}

fn check_unique_ids(m: &Manifest) -> Result<()> {
    let mut seen = HashSet::new();
    let ids = m
        .canvases
        .iter()
        .map(|c| &c.id)
        .chain(m.zones.iter().map(|z| &z.id))
        .chain(m.annotations.iter().map(|a| &a.id))
        .chain(m.sequences.iter().map(|s| &s.id))
        .chain(m.ranges.iter().map(|r| &r.id))
        .chain(m.annotation_lists.iter().map(|l| &l.id))
        .chain(std::iter::once(&m.id));
    for id in ids {
        if !seen.insert(id) {
            return Err(ModelError::ConflictingDefinition(id.clone()));
        }
    }
    Ok(())
}

/// The same resource (or choice) may be reused by several annotations, but
/// every use must describe it identically.
fn check_resources(m: &Manifest) -> Result<()> {
    let mut resources: HashMap<&Iri, &ContentResource> = HashMap::new();
    let mut choices: HashMap<&Iri, &Choice> = HashMap::new();
    for anno in &m.annotations {
        if let Body::Choice(c) = &anno.body {
            if choices.insert(&c.id, c).is_some_and(|prev| prev != c) {
                return Err(ModelError::ConflictingDefinition(c.id.clone()));
            }
        }
        for r in anno.body_resources() {
            r.check()?;
            if resources.insert(&r.id, r).is_some_and(|prev| prev != r) {
                return Err(ModelError::ConflictingDefinition(r.id.clone()));
            }
        }
    }
    Ok(())
}

/// Orders canvases by first appearance across sequences; canvases in no
/// sequence keep their relative order at the end.
pub fn normalize_canvas_order(m: &mut Manifest) {
    let mut rank: HashMap<Iri, usize> = HashMap::new();
    for seq in &m.sequences {
        for c in seq.reachable() {
            let next = rank.len();
            rank.entry(c.clone()).or_insert(next);
        }
    }
    let total = rank.len();
    let mut keyed: Vec<(usize, usize, Canvas)> = m
        .canvases
        .drain(..)
        .enumerate()
        .map(|(i, c)| (rank.get(&c.id).copied().unwrap_or(total), i, c))
        .collect();
    keyed.sort_by_key(|(r, i, _)| (*r, *i));
    m.canvases = keyed.into_iter().map(|(_, _, c)| c).collect();
}

/// Incremental construction of a [`Manifest`] with bounds checking as
/// annotations are added.
#[derive(Debug, Clone)]
pub struct ManifestBuilder {
    id: Iri,
    label: String,
    canvases: Vec<Canvas>,
    zones: Vec<Zone>,
    annotations: Vec<Annotation>,
    sequences: Vec<Sequence>,
    ranges: Vec<Range>,
    lists: Vec<AnnotationList>,
    metadata: BTreeMap<String, String>,
}

impl ManifestBuilder {
    pub fn new(id: Iri, label: impl Into<String>) -> Self {
        ManifestBuilder {
            id,
            label: label.into(),
            canvases: Vec::new(),
            zones: Vec::new(),
            annotations: Vec::new(),
            sequences: Vec::new(),
            ranges: Vec::new(),
            lists: Vec::new(),
            metadata: BTreeMap::new(),
        }
    }

    pub fn id(&self) -> &Iri {
        &self.id
    }

    pub fn canvas(&mut self, id: Iri, label: impl Into<String>, width: i64, height: i64) -> Result<Iri> {
        let canvas = new_canvas(id, label, width, height)?;
        let id = canvas.id.clone();
        self.canvases.push(canvas);
        Ok(id)
    }

    pub fn add_canvas(&mut self, canvas: Canvas) -> Iri {
        let id = canvas.id.clone();
        self.canvases.push(canvas);
        id
    }

    pub fn zone(&mut self, id: Iri, width: i64, height: i64) -> Result<Iri> {
        let zone = new_zone(id, width, height)?;
        let id = zone.id.clone();
        self.zones.push(zone);
        Ok(id)
    }

    pub fn metadata(&mut self, key: impl Into<String>, value: impl Into<String>) -> &mut Self {
        self.metadata.insert(key.into(), value.into());
        self
    }

    fn bounds(&self, iri: &Iri) -> Option<(u32, u32)> {
        self.canvases
            .iter()
            .find(|c| &c.id == iri)
            .map(|c| (c.width, c.height))
            .or_else(|| self.zones.iter().find(|z| &z.id == iri).map(|z| (z.width, z.height)))
    }

    fn surface(&self, iri: &Iri) -> Result<Target> {
        if self.canvases.iter().any(|c| &c.id == iri) {
            Ok(Target::Canvas(iri.clone()))
        } else if self.zones.iter().any(|z| &z.id == iri) {
            Ok(Target::Zone(iri.clone()))
        } else {
            Err(ModelError::DanglingReference(iri.clone()))
        }
    }

    fn check_target_selector(&self, target: &Iri, selector: Option<&RegionSelector>) -> Result<()> {
        if let (Some(sel), Some((w, h))) = (selector, self.bounds(target)) {
            if !selector_within(sel, w, h) {
                return Err(ModelError::SelectorOutOfBounds {
                    target: target.clone(),
                    selector: sel.to_string(),
                    width: w,
                    height: h,
                });
            }
        }
        Ok(())
    }

    fn push(&mut self, anno: Annotation) -> Result<&Annotation> {
        anno.check_kind()?;
        self.annotations.push(anno);
        Ok(self.annotations.last().expect("just pushed"))
    }

    /// Paints an image, text, choice or inline transcription onto a canvas
    /// or zone. The annotation type follows from the body.
    pub fn paint(
        &mut self,
        id: Iri,
        target: &Iri,
        body: Body,
        target_selector: Option<RegionSelector>,
        body_selector: Option<RegionSelector>,
    ) -> Result<&Annotation> {
        let kind = match &body {
            Body::Resource(r) if r.kind == ResourceKind::Image => AnnotationKind::PaintImage,
            Body::Resource(_) | Body::Inline(_) => AnnotationKind::PaintText,
            Body::Choice(c) if c.kind == ChoiceKind::ImageChoice => AnnotationKind::PaintImage,
            Body::Choice(_) => AnnotationKind::PaintText,
            Body::Zone(_) => return Err(ModelError::KindMismatch(format!("{id}: use place_zone for zones"))),
        };
        let target_ref = self.surface(target)?;
        self.check_target_selector(target, target_selector.as_ref())?;
        if let (Some(sel), Body::Resource(r)) = (&body_selector, &body) {
            if let Some((w, h)) = r.size() {
                if !selector_within(sel, w, h) {
                    return Err(ModelError::SelectorOutOfBounds {
                        target: r.id.clone(),
                        selector: sel.to_string(),
                        width: w,
                        height: h,
                    });
                }
            }
        }
        let mut anno = Annotation::new(id, kind, body, target_ref);
        anno.target_selector = target_selector;
        anno.body_selector = body_selector;
        self.push(anno)
    }

    /// Places a zone on a canvas (or on another zone) at a region, rotated
    /// clockwise by a quarter-turn multiple.
    pub fn place_zone(&mut self, id: Iri, zone: &Iri, target: &Iri, region: RegionSelector, rotation: Rotation) -> Result<&Annotation> {
        if !self.zones.iter().any(|z| &z.id == zone) {
            return Err(ModelError::DanglingReference(zone.clone()));
        }
        let target_ref = self.surface(target)?;
        self.check_target_selector(target, Some(&region))?;
        let mut anno = Annotation::new(id, AnnotationKind::PlaceZone, Body::Zone(zone.clone()), target_ref);
        anno.target_selector = Some(region);
        anno.rotation = rotation.degrees();
        self.push(anno)
    }

    fn resolve_any(&self, iri: &Iri) -> Result<Target> {
        if let Ok(t) = self.surface(iri) {
            return Ok(t);
        }
        if self.annotations.iter().any(|a| &a.id == iri) {
            return Ok(Target::Annotation(iri.clone()));
        }
        if self.annotations.iter().flat_map(Annotation::body_resources).any(|r| &r.id == iri) {
            return Ok(Target::Resource(iri.clone()));
        }
        if iri.authority() != self.id.authority() {
            return Ok(Target::External(iri.clone()));
        }
        Err(ModelError::DanglingReference(iri.clone()))
    }

    fn commentary(
        &mut self,
        kind: AnnotationKind,
        id: Iri,
        target: &Iri,
        body: Body,
        target_selector: Option<RegionSelector>,
        author: Option<String>,
    ) -> Result<&Annotation> {
        let target_ref = self.resolve_any(target)?;
        self.check_target_selector(target, target_selector.as_ref())?;
        let mut anno = Annotation::new(id, kind, body, target_ref);
        anno.target_selector = target_selector;
        anno.author = author;
        self.push(anno)
    }

    /// A scholarly comment on a canvas, zone, annotation, resource or
    /// external IRI.
    pub fn comment(&mut self, id: Iri, target: &Iri, body: Body, target_selector: Option<RegionSelector>, author: Option<String>) -> Result<&Annotation> {
        self.commentary(AnnotationKind::Comment, id, target, body, target_selector, author)
    }

    /// A description of content (as opposed to a transcription of it), e.g.
    /// of a lost page.
    pub fn describe(&mut self, id: Iri, target: &Iri, body: Body, target_selector: Option<RegionSelector>, author: Option<String>) -> Result<&Annotation> {
        self.commentary(AnnotationKind::Describe, id, target, body, target_selector, author)
    }

    /// Sets author and certainty on the most recently added annotation.
    pub fn attribute_last(&mut self, author: Option<String>, certainty: Option<String>) -> &mut Self {
        if let Some(a) = self.annotations.last_mut() {
            a.author = author;
            a.certainty = certainty;
        }
        self
    }

    pub fn sequence(&mut self, id: Iri, label: impl Into<String>, items: Vec<SequenceItem>) -> Result<Iri> {
        let seq = build_sequence(id, label, items)?;
        let id = seq.id.clone();
        self.sequences.push(seq);
        Ok(id)
    }

    pub fn range(&mut self, id: Iri, label: impl Into<String>, sequence: &Iri, targets: Vec<RangeTarget>) -> Result<Iri> {
        let seq = self
            .sequences
            .iter()
            .find(|s| &s.id == sequence)
            .ok_or_else(|| ModelError::DanglingReference(sequence.clone()))?;
        for t in &targets {
            self.check_target_selector(&t.canvas, t.selector.as_ref())?;
        }
        let range = build_range(id, label, seq, targets)?;
        let id = range.id.clone();
        self.ranges.push(range);
        Ok(id)
    }

    pub fn list(&mut self, id: Iri, kind: ListKind, entries: Vec<Iri>) -> Result<Iri> {
        let mut seen = HashSet::new();
        for e in &entries {
            let anno = self
                .annotations
                .iter()
                .find(|a| &a.id == e)
                .ok_or_else(|| ModelError::DanglingReference(e.clone()))?;
            let fits = match kind {
                ListKind::TextOrder => anno.kind == AnnotationKind::PaintText,
                ListKind::ImageList => anno.kind == AnnotationKind::PaintImage,
                ListKind::CommentList => true,
            };
            if !fits {
                return Err(ModelError::KindMismatch(format!("{e} does not belong in a {kind:?}")));
            }
            if !seen.insert(e) {
                return Err(ModelError::ConflictingDefinition(e.clone()));
            }
        }
        self.lists.push(AnnotationList { id: id.clone(), kind, entries });
        Ok(id)
    }

    pub fn build(self) -> Result<Manifest> {
        build_manifest(
            self.id,
            self.label,
            self.canvases,
            self.sequences,
            self.ranges,
            self.lists,
            self.zones,
            self.annotations,
            self.metadata,
        )
    }
}
