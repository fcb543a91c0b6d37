//! From a manifest to what should be drawn on each canvas.
//!
//! [`flatten_canvas`] gathers the annotations painted directly on a canvas
//! and those painted on zones placed on it (following zone-in-zone chains),
//! maps their regions into canvas coordinates, picks one option from each
//! choice and orders everything for painting: images, then text, then
//! commentary, each class in declaration order.

pub mod transform;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use transform::{compose, map_point, round_half_up, QPoint, Transform, Q};

use crate::fragments::{format_xywh, Rect, RegionSelector};
use crate::model::*;
use crate::validate::{surfaces, MAX_ZONE_DEPTH};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolveError {
    #[error("no canvas {0} in the manifest")]
    UnknownCanvas(Iri),
    #[error("{annotation} maps to {region}, outside the {width}x{height} canvas")]
    TransformOverflow { annotation: Iri, region: String, width: u32, height: u32 },
    #[error("zone chain through {0} is cyclic or deeper than {MAX_ZONE_DEPTH}")]
    ZoneDepth(Iri),
    #[error("placement {0} has no quarter-turn rotation")]
    BadRotation(Iri),
    #[error("placement {0} refers to an unknown zone or surface")]
    Unresolved(Iri),
}

/// How alternative paths in a sequence are walked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum PathPolicy {
    /// The first declared path.
    #[default]
    FirstPath,
    /// The longest path, e.g. two separate pages instead of a spread.
    PreferSinglePage,
    /// The shortest path, e.g. a spread instead of its two pages.
    PreferCombined,
}

impl PathPolicy {
    pub const ALL: [PathPolicy; 3] = [PathPolicy::FirstPath, PathPolicy::PreferSinglePage, PathPolicy::PreferCombined];

    pub fn name(self) -> &'static str {
        match self {
            PathPolicy::FirstPath => "first",
            PathPolicy::PreferSinglePage => "single",
            PathPolicy::PreferCombined => "combined",
        }
    }
}

impl fmt::Display for PathPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PathPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "first" => Ok(PathPolicy::FirstPath),
            "single" => Ok(PathPolicy::PreferSinglePage),
            "combined" => Ok(PathPolicy::PreferCombined),
            other => Err(format!("unknown path policy `{other}` (expected first, single or combined)")),
        }
    }
}

/// One canvas list for a sequence. Ties between equally long paths go to
/// the earlier one.
pub fn linearize_sequence(sequence: &Sequence, policy: PathPolicy) -> Vec<Iri> {
    let mut out = Vec::new();
    for item in &sequence.items {
        match item {
            SequenceItem::Single(c) => out.push(c.clone()),
            SequenceItem::Alternatives(paths) => {
                let chosen = match policy {
                    PathPolicy::FirstPath => paths.first(),
                    PathPolicy::PreferCombined => paths.iter().min_by_key(|p| p.len()),
                    PathPolicy::PreferSinglePage => paths.iter().rev().max_by_key(|p| p.len()),
                };
                out.extend(chosen.into_iter().flatten().cloned());
            }
        }
    }
    out
}

/// Preferences used to pick one option out of a choice.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ChoicePolicy {
    /// Display size in pixels.
    pub viewport: Option<(u32, u32)>,
    /// Metadata pairs an option must carry, e.g. `("author", "X")`.
    pub prefer: Vec<(String, String)>,
}

/// Picks an option. Options carrying every preferred metadata pair are the
/// candidates (all options if none qualifies). With a viewport, the
/// smallest candidate covering it wins, otherwise the largest; without
/// one, the first candidate.
pub fn select_from_choice<'c>(choice: &'c Choice, policy: &ChoicePolicy) -> &'c ContentResource {
    let matching: Vec<&ContentResource> = choice
        .options
        .iter()
        .filter(|o| policy.prefer.iter().all(|(k, v)| o.metadata.get(k) == Some(v)))
        .collect();
    let candidates = if matching.is_empty() { choice.options.iter().collect() } else { matching };
    let first = candidates[0];
    let Some((vw, vh)) = policy.viewport else { return first };
    let area = |r: &ContentResource| r.size().map(|(w, h)| u64::from(w) * u64::from(h));
    let covering = candidates
        .iter()
        .filter(|r| r.size().is_some_and(|(w, h)| w >= vw && h >= vh))
        .min_by_key(|r| area(r));
    if let Some(r) = covering {
        return r;
    }
    // max_by_key keeps the last maximum; reverse so the earliest wins ties
    candidates.iter().rev().filter(|r| r.size().is_some()).max_by_key(|r| area(r)).copied().unwrap_or(first)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Layer {
    Image,
    Text,
    Commentary,
}

impl Layer {
    pub fn name(self) -> &'static str {
        match self {
            Layer::Image => "image",
            Layer::Text => "text",
            Layer::Commentary => "commentary",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Content {
    Resource(ContentResource),
    /// Characters stored on the annotation itself.
    Inline(String),
}

impl Content {
    /// The characters to show for text and commentary.
    pub fn text(&self) -> Option<&str> {
        match self {
            Content::Inline(s) => Some(s),
            Content::Resource(r) => r.chars.as_deref(),
        }
    }
}

/// Something drawn on a canvas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Placement {
    pub origin_annotation: Iri,
    pub kind: AnnotationKind,
    pub layer: Layer,
    pub content: Content,
    /// Part of the content shown, in content coordinates.
    pub source_region: Option<RegionSelector>,
    /// Where it lands, in canvas coordinates.
    pub dest_region: RegionSelector,
    /// Where it lands, in the coordinates of the canvas or zone it targets.
    pub surface_region: RegionSelector,
    /// Accumulated clockwise turn of the zone chain.
    pub rotation: Rotation,
    /// Zones passed through from the canvas inwards; empty when direct.
    pub via_zones: Vec<Iri>,
    /// From the annotation's target surface to canvas coordinates.
    pub transform: Transform,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderPlan {
    pub canvas: Canvas,
    /// Paint order.
    pub placements: Vec<Placement>,
    /// Text annotations in reading order.
    pub reading_order: Vec<Iri>,
    pub warnings: Vec<String>,
}

/// A surface (the canvas or a zone) and how it maps onto the canvas.
struct Frame {
    surface: Iri,
    width: u32,
    height: u32,
    transform: Transform,
    rotation: Rotation,
    via: Vec<Iri>,
}

fn frames(m: &Manifest, canvas: &Canvas) -> Result<Vec<Frame>, ResolveError> {
    let mut out = Vec::new();
    let root = Frame {
        surface: canvas.id.clone(),
        width: canvas.width,
        height: canvas.height,
        transform: Transform::identity(),
        rotation: Rotation::R0,
        via: Vec::new(),
    };
    collect_frames(m, root, &mut out)?;
    Ok(out)
}

fn collect_frames(m: &Manifest, frame: Frame, out: &mut Vec<Frame>) -> Result<(), ResolveError> {
    let children: Vec<&Annotation> = m.placements_on(&frame.surface).collect();
    let depth = frame.via.len();
    let (parent_t, parent_rot, parent_via) = (frame.transform, frame.rotation, frame.via.clone());
    let (pw, ph) = (frame.width, frame.height);
    out.push(frame);
    for p in children {
        let Body::Zone(zid) = &p.body else { continue };
        if depth >= MAX_ZONE_DEPTH || parent_via.contains(zid) {
            return Err(ResolveError::ZoneDepth(zid.clone()));
        }
        let zone = m.zone(zid).ok_or_else(|| ResolveError::Unresolved(p.id.clone()))?;
        let rotation = Rotation::from_degrees(p.rotation).map_err(|_| ResolveError::BadRotation(p.id.clone()))?;
        let dest = match &p.target_selector {
            Some(sel) => sel.bounding_box(),
            None => Rect::full(pw, ph).map_err(|_| ResolveError::Unresolved(p.id.clone()))?,
        };
        let local = Transform::placement(zone.width, zone.height, &dest, rotation);
        let mut via = parent_via.clone();
        via.push(zid.clone());
        let child = Frame {
            surface: zid.clone(),
            width: zone.width,
            height: zone.height,
            transform: compose(&parent_t, &local),
            rotation: Rotation::from_quarter_turns(parent_rot.quarter_turns() + rotation.quarter_turns()),
            via,
        };
        collect_frames(m, child, out)?;
    }
    Ok(())
}

fn layer_of(kind: AnnotationKind) -> Option<Layer> {
    match kind {
        AnnotationKind::PaintImage => Some(Layer::Image),
        AnnotationKind::PaintText => Some(Layer::Text),
        AnnotationKind::Comment | AnnotationKind::Describe => Some(Layer::Commentary),
        AnnotationKind::PlaceZone => None,
    }
}

fn content_of(a: &Annotation, policy: &ChoicePolicy) -> Option<Content> {
    match &a.body {
        Body::Resource(r) => Some(Content::Resource(r.clone())),
        Body::Choice(c) if !c.options.is_empty() => Some(Content::Resource(select_from_choice(c, policy).clone())),
        Body::Inline(s) => Some(Content::Inline(s.clone())),
        Body::Choice(_) | Body::Zone(_) => None,
    }
}

/// Flattens everything shown on one canvas into a paint-ordered plan.
pub fn flatten_canvas(m: &Manifest, canvas_id: &Iri, policy: &ChoicePolicy) -> Result<RenderPlan, ResolveError> {
    let canvas = m.canvas(canvas_id).ok_or_else(|| ResolveError::UnknownCanvas(canvas_id.clone()))?;
    let frames = frames(m, canvas)?;
    let (cw, ch) = (Q::from_integer(canvas.width.into()), Q::from_integer(canvas.height.into()));
    let zero = Q::from_integer(0);
    // (layer, declaration index, placement)
    let mut placed: Vec<(Layer, usize, Placement)> = Vec::new();

    for (index, a) in m.annotations.iter().enumerate() {
        let Some(layer) = layer_of(a.kind) else { continue };
        if !matches!(a.target, Target::Canvas(_) | Target::Zone(_)) {
            continue;
        }
        for frame in frames.iter().filter(|f| &f.surface == a.target.iri()) {
            let Some(content) = content_of(a, policy) else { continue };
            let local = match &a.target_selector {
                Some(sel) => sel.clone(),
                None => match Rect::full(frame.width, frame.height) {
                    Ok(r) => r.into(),
                    Err(_) => continue,
                },
            };
            let outside = frame
                .transform
                .exact_corners(&local)
                .iter()
                .any(|p| p.x < zero || p.y < zero || p.x > cw || p.y > ch);
            let dest = frame.transform.map_region(&local);
            if outside {
                return Err(ResolveError::TransformOverflow {
                    annotation: a.id.clone(),
                    region: dest.to_string(),
                    width: canvas.width,
                    height: canvas.height,
                });
            }
            placed.push((
                layer,
                index,
                Placement {
                    origin_annotation: a.id.clone(),
                    kind: a.kind,
                    layer,
                    content,
                    source_region: a.body_selector.clone(),
                    dest_region: dest,
                    surface_region: local,
                    rotation: frame.rotation,
                    via_zones: frame.via.clone(),
                    transform: frame.transform,
                },
            ));
        }
    }

    // commentary on annotations or resources follows its host placements
    for (index, a) in m.annotations.iter().enumerate() {
        if !matches!(a.kind, AnnotationKind::Comment | AnnotationKind::Describe) {
            continue;
        }
        let hosts: Vec<Placement> = match &a.target {
            Target::Annotation(host) => placed.iter().filter(|(_, _, p)| &p.origin_annotation == host).map(|(_, _, p)| p.clone()).collect(),
            Target::Resource(r) => placed
                .iter()
                .filter(|(_, _, p)| matches!(&p.content, Content::Resource(c) if &c.id == r))
                .map(|(_, _, p)| p.clone())
                .collect(),
            _ => continue,
        };
        let Some(content) = content_of(a, policy) else { continue };
        for host in hosts {
            placed.push((
                Layer::Commentary,
                index,
                Placement {
                    origin_annotation: a.id.clone(),
                    kind: a.kind,
                    layer: Layer::Commentary,
                    content: content.clone(),
                    source_region: None,
                    dest_region: host.dest_region.clone(),
                    surface_region: host.surface_region.clone(),
                    rotation: host.rotation,
                    via_zones: host.via_zones.clone(),
                    transform: host.transform,
                },
            ));
        }
    }

    placed.sort_by_key(|(layer, index, _)| (*layer, *index));
    let (reading_order, warning) = reading_order_checked(m, canvas);
    Ok(RenderPlan {
        canvas: canvas.clone(),
        placements: placed.into_iter().map(|(_, _, p)| p).collect(),
        reading_order,
        warnings: warning.into_iter().collect(),
    })
}

/// Text annotations reaching a canvas directly or through zones, in
/// declaration order.
fn texts_on(m: &Manifest, canvas: &Canvas) -> Vec<Iri> {
    let reach: HashSet<Iri> = surfaces(m, &canvas.id).into_iter().map(|(s, _)| s).collect();
    m.annotations
        .iter()
        .filter(|a| a.kind == AnnotationKind::PaintText && matches!(a.target, Target::Canvas(_) | Target::Zone(_)))
        .filter(|a| reach.contains(a.target.iri()))
        .map(|a| a.id.clone())
        .collect()
}

fn reading_order_checked(m: &Manifest, canvas: &Canvas) -> (Vec<Iri>, Option<String>) {
    let texts = texts_on(m, canvas);
    let wanted: HashSet<&Iri> = texts.iter().collect();
    let mut seen = HashSet::new();
    let listed: Vec<Iri> = m
        .annotation_lists
        .iter()
        .filter(|l| l.kind == ListKind::TextOrder)
        .flat_map(|l| &l.entries)
        .filter(|e| wanted.contains(e) && seen.insert(*e))
        .cloned()
        .collect();
    if listed.len() == texts.len() {
        (listed, None)
    } else {
        let warning = format!("V7 no text order covers every text annotation on {}; using declaration order", canvas.id);
        (texts, Some(warning))
    }
}

/// Text annotations of a canvas in reading order: the order given by the
/// text-order lists when they cover every text on the canvas, otherwise
/// declaration order.
pub fn reading_order(m: &Manifest, canvas: &Canvas) -> Vec<Iri> {
    reading_order_checked(m, canvas).0
}

fn region_text(r: Option<&RegionSelector>) -> String {
    match r {
        None => "-".to_string(),
        Some(RegionSelector::Rect(r)) => format_xywh(r),
        Some(other) => other.to_string(),
    }
}

impl Placement {
    /// `layer origin source src=<region> dest=<region> rot=<deg> via=<zones>`
    pub fn line(&self) -> String {
        let source = match &self.content {
            Content::Resource(r) => r.id.to_string(),
            Content::Inline(_) => "inline".to_string(),
        };
        let via = if self.via_zones.is_empty() {
            "-".to_string()
        } else {
            self.via_zones.iter().map(Iri::as_str).collect::<Vec<_>>().join(",")
        };
        format!(
            "{} {} {} src={} dest={} rot={} via={}",
            self.layer.name(),
            self.origin_annotation,
            source,
            region_text(self.source_region.as_ref()),
            region_text(Some(&self.dest_region)),
            self.rotation.degrees(),
            via
        )
    }
}

impl RenderPlan {
    /// Line-oriented text form used by the command line and golden tests.
    pub fn to_text(&self) -> String {
        let mut out = format!("canvas {} {}x{}\n", self.canvas.id, self.canvas.width, self.canvas.height);
        for p in &self.placements {
            out.push_str(&p.line());
            out.push('\n');
        }
        let order: Vec<&str> = self.reading_order.iter().map(Iri::as_str).collect();
        out.push_str(&format!("reading-order {}\n", if order.is_empty() { "-".to_string() } else { order.join(" ") }));
        for w in &self.warnings {
            out.push_str(&format!("warning {w}\n"));
        }
        out
    }
}

/// Plans for every canvas of a manifest, in manifest order.
pub fn flatten_all(m: &Manifest, policy: &ChoicePolicy) -> Result<Vec<RenderPlan>, ResolveError> {
    m.canvases.iter().map(|c| flatten_canvas(m, &c.id, policy)).collect()
}
