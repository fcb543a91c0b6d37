//! A neutral JSON format for describing a manuscript by hand or from other
//! catalogue data, and its conversion to and from [`Manifest`].
//!
//! ```json
//! {
//!   "manuscript": {"id": "http://example.org/ms/manifest", "label": "MS 1"},
//!   "canvases": [{"id": "http://example.org/ms/p1", "label": "p. 1", "width": 800, "height": 1200}],
//!   "zones": [],
//!   "images": [{"id": "http://example.org/ms/anno/i1", "canvas": "http://example.org/ms/p1",
//!               "image": "http://images.example.org/p1.jpg", "format": "image/jpeg",
//!               "width": 1600, "height": 2400}],
//!   "texts": [],
//!   "comments": [],
//!   "sequences": [{"id": "http://example.org/ms/seq", "label": "Binding",
//!                  "items": ["http://example.org/ms/p1"]}]
//! }
//! ```
//!
//! Regions are given as `"xywh": "xywh=x,y,w,h"` or as
//! `"polygon": "x1,y1 x2,y2 ..."`. Sequence items are canvas IRIs or
//! `{"alternatives": [[...], [...]]}`. Annotations are created in document
//! order: images, texts, zone placements (zone by zone), then comments.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::fragments::{format_xywh, parse_svg_polygon, parse_xywh, RegionSelector};
use crate::model::*;

/// A problem in a description, located by a JSON path such as
/// `$.images[0].canvas`.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct SchemaError {
    pub path: String,
    pub message: String,
}

impl fmt::Display for SchemaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

impl SchemaError {
    fn new(path: impl Into<String>, message: impl fmt::Display) -> Self {
        SchemaError { path: path.into(), message: message.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DescriptionDocument {
    pub manuscript: ManuscriptDesc,
    #[serde(default)]
    pub canvases: Vec<CanvasDesc>,
    #[serde(default)]
    pub zones: Vec<ZoneDesc>,
    #[serde(default)]
    pub images: Vec<ImageDesc>,
    #[serde(default)]
    pub texts: Vec<TextDesc>,
    #[serde(default)]
    pub comments: Vec<CommentDesc>,
    #[serde(default)]
    pub sequences: Vec<SequenceDesc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ranges: Vec<RangeDesc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lists: Vec<ListDesc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManuscriptDesc {
    pub id: String,
    #[serde(default)]
    pub label: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CanvasDesc {
    pub id: String,
    #[serde(default)]
    pub label: String,
    pub width: i64,
    pub height: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZoneDesc {
    pub id: String,
    pub width: i64,
    pub height: i64,
    #[serde(default)]
    pub placements: Vec<PlacementDesc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlacementDesc {
    pub id: String,
    /// Canvas, or zone for a zone nested in another.
    pub canvas: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xywh: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polygon: Option<String>,
    #[serde(default)]
    pub rotation: u16,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChoiceDesc {
    pub id: String,
    pub options: Vec<OptionDesc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionDesc {
    pub id: String,
    pub format: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub height: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chars: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, String>,
}

/// An image painted on a canvas or zone: either a single `image` resource
/// or a `choice` of images.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImageDesc {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub canvas: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zone: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xywh: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polygon: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub body_xywh: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub image: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub height: Option<u32>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub choice: Option<ChoiceDesc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub author: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certainty: Option<String>,
}

/// A transcription: inline `chars`, a text `resource` (optionally with its
/// characters) or a `choice` of texts.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TextDesc {
    pub id: String,
    pub target: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xywh: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polygon: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chars: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resource: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub choice: Option<ChoiceDesc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub author: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certainty: Option<String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CommentKind {
    #[default]
    Comment,
    Describe,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommentDesc {
    pub id: String,
    #[serde(default)]
    pub kind: CommentKind,
    pub target: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xywh: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polygon: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chars: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resource: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub author: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certainty: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ItemDesc {
    Canvas(String),
    Alternatives { alternatives: Vec<Vec<String>> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceDesc {
    pub id: String,
    #[serde(default)]
    pub label: String,
    pub items: Vec<ItemDesc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangeTargetDesc {
    pub canvas: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xywh: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polygon: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangeDesc {
    pub id: String,
    #[serde(default)]
    pub label: String,
    pub sequence: String,
    pub targets: Vec<RangeTargetDesc>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ListKindDesc {
    TextOrder,
    ImageList,
    CommentList,
}

impl From<ListKindDesc> for ListKind {
    fn from(k: ListKindDesc) -> Self {
        match k {
            ListKindDesc::TextOrder => ListKind::TextOrder,
            ListKindDesc::ImageList => ListKind::ImageList,
            ListKindDesc::CommentList => ListKind::CommentList,
        }
    }
}

impl From<ListKind> for ListKindDesc {
    fn from(k: ListKind) -> Self {
        match k {
            ListKind::TextOrder => ListKindDesc::TextOrder,
            ListKind::ImageList => ListKindDesc::ImageList,
            ListKind::CommentList => ListKindDesc::CommentList,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ListDesc {
    pub id: String,
    pub kind: ListKindDesc,
    pub entries: Vec<String>,
}

/// Parses description JSON, reporting the path of the first offending value.
pub fn parse_description(json: &str) -> Result<DescriptionDocument, SchemaError> {
    let de = &mut serde_json::Deserializer::from_str(json);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let path = if path == "." { "$".to_string() } else { format!("$.{path}") };
        SchemaError::new(path, e.into_inner())
    })
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_json(doc: &DescriptionDocument) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("description documents always serialize");
    s.push('\n');
    s
}

fn iri_at(path: &str, s: &str) -> Result<Iri, SchemaError> {
    Iri::new(s).map_err(|e| SchemaError::new(path, e))
}

fn region_at(path: &str, xywh: &Option<String>, polygon: &Option<String>) -> Result<Option<RegionSelector>, SchemaError> {
    match (xywh, polygon) {
        (Some(_), Some(_)) => Err(SchemaError::new(path, "give either xywh or polygon, not both")),
        (Some(x), None) => parse_xywh(x).map(|r| Some(r.into())).map_err(|e| SchemaError::new(format!("{path}.xywh"), e)),
        (None, Some(p)) => parse_svg_polygon(p).map(|p| Some(p.into())).map_err(|e| SchemaError::new(format!("{path}.polygon"), e)),
        (None, None) => Ok(None),
    }
}

/// Reports a dangling reference at the field that holds it and any other
/// builder error at the entry.
fn builder_error(path: &str, field: &str, e: ModelError) -> SchemaError {
    match e {
        ModelError::DanglingReference(_) => SchemaError::new(format!("{path}.{field}"), e),
        e => SchemaError::new(path, e),
    }
}

fn choice_at(path: &str, c: &ChoiceDesc, kind: ChoiceKind) -> Result<Choice, SchemaError> {
    let mut options = Vec::new();
    for (i, o) in c.options.iter().enumerate() {
        let opath = format!("{path}.options[{i}]");
        let id = iri_at(&format!("{opath}.id"), &o.id)?;
        let mut r = match kind {
            ChoiceKind::ImageChoice => ContentResource::image(id, o.format.clone(), None),
            ChoiceKind::TextChoice => ContentResource::text(id, o.format.clone(), o.chars.clone()),
        };
        r.width = o.width;
        r.height = o.height;
        if kind == ChoiceKind::ImageChoice {
            r.chars = o.chars.clone();
        }
        r.metadata = o.metadata.clone();
        options.push(r);
    }
    make_choice(iri_at(&format!("{path}.id"), &c.id)?, kind, options, vec![]).map_err(|e| SchemaError::new(path, e))
}

fn text_body(path: &str, chars: &Option<String>, resource: &Option<String>, format: &Option<String>, metadata: &BTreeMap<String, String>) -> Result<Body, SchemaError> {
    match (resource, chars) {
        (Some(r), chars) => {
            let mut res = ContentResource::text(iri_at(&format!("{path}.resource"), r)?, format.clone().unwrap_or_default(), chars.clone());
            res.metadata = metadata.clone();
            Ok(Body::Resource(res))
        }
        (None, Some(c)) => Ok(Body::Inline(c.clone())),
        (None, None) => Err(SchemaError::new(path, "needs chars or a resource")),
    }
}

/// Builds a manifest from a description. Every reference must name
/// something defined earlier in the document (or, for comments, an IRI
/// under another authority).
pub fn ingest(doc: &DescriptionDocument) -> Result<Manifest, SchemaError> {
    let ms = &doc.manuscript;
    let mut b = ManifestBuilder::new(iri_at("$.manuscript.id", &ms.id)?, ms.label.clone());
    for (k, v) in &ms.metadata {
        b.metadata(k.clone(), v.clone());
    }
    let canvas_ids: HashSet<&str> = doc.canvases.iter().map(|c| c.id.as_str()).collect();
    let zone_ids: HashSet<&str> = doc.zones.iter().map(|z| z.id.as_str()).collect();

    for (i, c) in doc.canvases.iter().enumerate() {
        let path = format!("$.canvases[{i}]");
        let id = iri_at(&format!("{path}.id"), &c.id)?;
        b.canvas(id, c.label.clone(), c.width, c.height).map_err(|e| SchemaError::new(&path, e))?;
    }
    for (i, z) in doc.zones.iter().enumerate() {
        let path = format!("$.zones[{i}]");
        let id = iri_at(&format!("{path}.id"), &z.id)?;
        b.zone(id, z.width, z.height).map_err(|e| SchemaError::new(&path, e))?;
    }

    for (i, img) in doc.images.iter().enumerate() {
        let path = format!("$.images[{i}]");
        let (field, target) = match (&img.canvas, &img.zone) {
            (Some(c), None) if canvas_ids.contains(c.as_str()) => ("canvas", c),
            (None, Some(z)) if zone_ids.contains(z.as_str()) => ("zone", z),
            (Some(c), None) => return Err(SchemaError::new(format!("{path}.canvas"), format!("undefined canvas {c}"))),
            (None, Some(z)) => return Err(SchemaError::new(format!("{path}.zone"), format!("undefined zone {z}"))),
            _ => return Err(SchemaError::new(&path, "give exactly one of canvas or zone")),
        };
        let target = iri_at(&format!("{path}.{field}"), target)?;
        let body = match (&img.image, &img.choice) {
            (Some(r), None) => {
                let size = match (img.width, img.height) {
                    (Some(w), Some(h)) => Some((w, h)),
                    (None, None) => None,
                    _ => return Err(SchemaError::new(&path, "give both width and height or neither")),
                };
                let mut res = ContentResource::image(iri_at(&format!("{path}.image"), r)?, img.format.clone().unwrap_or_default(), size);
                res.metadata = img.metadata.clone();
                Body::Resource(res)
            }
            (None, Some(c)) => Body::Choice(choice_at(&format!("{path}.choice"), c, ChoiceKind::ImageChoice)?),
            _ => return Err(SchemaError::new(&path, "give exactly one of image or choice")),
        };
        let target_sel = region_at(&path, &img.xywh, &img.polygon)?;
        let body_sel = region_at(&path, &img.body_xywh, &None)?;
        b.paint(iri_at(&format!("{path}.id"), &img.id)?, &target, body, target_sel, body_sel)
            .map_err(|e| builder_error(&path, field, e))?;
        b.attribute_last(img.author.clone(), img.certainty.clone());
    }

    for (i, t) in doc.texts.iter().enumerate() {
        let path = format!("$.texts[{i}]");
        let target = iri_at(&format!("{path}.target"), &t.target)?;
        let body = match &t.choice {
            Some(c) => Body::Choice(choice_at(&format!("{path}.choice"), c, ChoiceKind::TextChoice)?),
            None => text_body(&path, &t.chars, &t.resource, &t.format, &t.metadata)?,
        };
        let sel = region_at(&path, &t.xywh, &t.polygon)?;
        b.paint(iri_at(&format!("{path}.id"), &t.id)?, &target, body, sel, None)
            .map_err(|e| builder_error(&path, "target", e))?;
        b.attribute_last(t.author.clone(), t.certainty.clone());
    }

    for (i, z) in doc.zones.iter().enumerate() {
        let zone = iri_at(&format!("$.zones[{i}].id"), &z.id)?;
        for (j, p) in z.placements.iter().enumerate() {
            let path = format!("$.zones[{i}].placements[{j}]");
            let target = iri_at(&format!("{path}.canvas"), &p.canvas)?;
            let region = region_at(&path, &p.xywh, &p.polygon)?.ok_or_else(|| SchemaError::new(&path, "a placement needs xywh or polygon"))?;
            let rotation = Rotation::from_degrees(p.rotation).map_err(|e| SchemaError::new(format!("{path}.rotation"), e))?;
            b.place_zone(iri_at(&format!("{path}.id"), &p.id)?, &zone, &target, region, rotation)
                .map_err(|e| builder_error(&path, "canvas", e))?;
        }
    }

    for (i, c) in doc.comments.iter().enumerate() {
        let path = format!("$.comments[{i}]");
        let target = iri_at(&format!("{path}.target"), &c.target)?;
        let body = text_body(&path, &c.chars, &c.resource, &c.format, &c.metadata)?;
        let sel = region_at(&path, &c.xywh, &c.polygon)?;
        let id = iri_at(&format!("{path}.id"), &c.id)?;
        match c.kind {
            CommentKind::Comment => b.comment(id, &target, body, sel, c.author.clone()),
            CommentKind::Describe => b.describe(id, &target, body, sel, c.author.clone()),
        }
        .map_err(|e| builder_error(&path, "target", e))?;
        b.attribute_last(c.author.clone(), c.certainty.clone());
    }

    for (i, s) in doc.sequences.iter().enumerate() {
        let path = format!("$.sequences[{i}]");
        let mut items = Vec::new();
        for (j, item) in s.items.iter().enumerate() {
            let ipath = format!("{path}.items[{j}]");
            let canvas = |p: String, c: &str| {
                if canvas_ids.contains(c) {
                    iri_at(&p, c)
                } else {
                    Err(SchemaError::new(p, format!("undefined canvas {c}")))
                }
            };
            items.push(match item {
                ItemDesc::Canvas(c) => SequenceItem::Single(canvas(ipath, c)?),
                ItemDesc::Alternatives { alternatives } => {
                    let mut paths = Vec::new();
                    for (k, alt) in alternatives.iter().enumerate() {
                        let mut cs = Vec::new();
                        for (l, c) in alt.iter().enumerate() {
                            cs.push(canvas(format!("{ipath}.alternatives[{k}][{l}]"), c)?);
                        }
                        paths.push(cs);
                    }
                    SequenceItem::Alternatives(paths)
                }
            });
        }
        b.sequence(iri_at(&format!("{path}.id"), &s.id)?, s.label.clone(), items).map_err(|e| SchemaError::new(&path, e))?;
    }

    for (i, r) in doc.ranges.iter().enumerate() {
        let path = format!("$.ranges[{i}]");
        let sequence = iri_at(&format!("{path}.sequence"), &r.sequence)?;
        let mut targets = Vec::new();
        for (j, t) in r.targets.iter().enumerate() {
            let tpath = format!("{path}.targets[{j}]");
            targets.push(RangeTarget { canvas: iri_at(&format!("{tpath}.canvas"), &t.canvas)?, selector: region_at(&tpath, &t.xywh, &t.polygon)? });
        }
        b.range(iri_at(&format!("{path}.id"), &r.id)?, r.label.clone(), &sequence, targets)
            .map_err(|e| builder_error(&path, "sequence", e))?;
    }

    for (i, l) in doc.lists.iter().enumerate() {
        let path = format!("$.lists[{i}]");
        let mut entries = Vec::new();
        for (j, e) in l.entries.iter().enumerate() {
            entries.push(iri_at(&format!("{path}.entries[{j}]"), e)?);
        }
        b.list(iri_at(&format!("{path}.id"), &l.id)?, l.kind.into(), entries).map_err(|e| builder_error(&path, "entries", e))?;
    }

    b.build().map_err(|e| SchemaError::new("$", e))
}

fn region_fields(sel: &Option<RegionSelector>) -> (Option<String>, Option<String>) {
    match sel {
        None => (None, None),
        Some(RegionSelector::Rect(r)) => (Some(format_xywh(r)), None),
        Some(RegionSelector::Polygon(p)) => (None, Some(p.points_attr())),
    }
}

fn choice_desc(c: &Choice) -> ChoiceDesc {
    ChoiceDesc {
        id: c.id.to_string(),
        options: c
            .options
            .iter()
            .map(|o| OptionDesc {
                id: o.id.to_string(),
                format: o.media_type.clone(),
                width: o.width,
                height: o.height,
                chars: o.chars.clone(),
                metadata: o.metadata.clone(),
            })
            .collect(),
    }
}

fn category(kind: AnnotationKind) -> u8 {
    match kind {
        AnnotationKind::PaintImage => 0,
        AnnotationKind::PaintText => 1,
        AnnotationKind::PlaceZone => 2,
        AnnotationKind::Comment | AnnotationKind::Describe => 3,
    }
}

/// Writes a manifest as a description. Fails on what the format cannot
/// carry: extra triples, annotations out of description order, and body
/// selectors other than rectangles on images.
pub fn description_of(m: &Manifest) -> Result<DescriptionDocument, SchemaError> {
    if !m.extra_triples.is_empty() {
        return Err(SchemaError::new("$", "manifest carries triples outside the model"));
    }
    let zone_rank: BTreeMap<&Iri, usize> = m.zones.iter().enumerate().map(|(i, z)| (&z.id, i)).collect();
    let key = |a: &Annotation| {
        let zone = match &a.body {
            Body::Zone(z) if a.kind == AnnotationKind::PlaceZone => zone_rank.get(z).copied().unwrap_or(usize::MAX),
            _ => 0,
        };
        (category(a.kind), zone)
    };
    if let Some(i) = m.annotations.windows(2).position(|w| key(&w[0]) > key(&w[1])) {
        return Err(SchemaError::new(format!("annotations[{}]", i + 1), "annotations are not in description order"));
    }

    let mut doc = DescriptionDocument {
        manuscript: ManuscriptDesc { id: m.id.to_string(), label: m.label.clone(), metadata: m.metadata.clone() },
        canvases: m.canvases.iter().map(|c| CanvasDesc { id: c.id.to_string(), label: c.label.clone(), width: c.width.into(), height: c.height.into() }).collect(),
        zones: m.zones.iter().map(|z| ZoneDesc { id: z.id.to_string(), width: z.width.into(), height: z.height.into(), placements: vec![] }).collect(),
        images: vec![],
        texts: vec![],
        comments: vec![],
        sequences: vec![],
        ranges: vec![],
        lists: vec![],
    };

    for a in &m.annotations {
        let at = || format!("annotations[{}]", a.id);
        let (xywh, polygon) = region_fields(&a.target_selector);
        match a.kind {
            AnnotationKind::PaintImage => {
                let mut d = ImageDesc { id: a.id.to_string(), xywh, polygon, author: a.author.clone(), certainty: a.certainty.clone(), ..Default::default() };
                match &a.target {
                    Target::Canvas(c) => d.canvas = Some(c.to_string()),
                    Target::Zone(z) => d.zone = Some(z.to_string()),
                    _ => return Err(SchemaError::new(at(), "images must target a canvas or zone")),
                }
                match &a.body_selector {
                    None => {}
                    Some(RegionSelector::Rect(r)) => d.body_xywh = Some(format_xywh(r)),
                    Some(_) => return Err(SchemaError::new(at(), "polygon body selectors are not supported")),
                }
                match &a.body {
                    Body::Resource(r) => {
                        d.image = Some(r.id.to_string());
                        d.format = Some(r.media_type.clone());
                        d.width = r.width;
                        d.height = r.height;
                        d.metadata = r.metadata.clone();
                    }
                    Body::Choice(c) => d.choice = Some(choice_desc(c)),
                    _ => return Err(SchemaError::new(at(), "image body is neither an image nor a choice")),
                }
                doc.images.push(d);
            }
            AnnotationKind::PaintText => {
                if a.body_selector.is_some() {
                    return Err(SchemaError::new(at(), "text body selectors are not supported"));
                }
                let mut d = TextDesc { id: a.id.to_string(), target: a.target.iri().to_string(), xywh, polygon, author: a.author.clone(), certainty: a.certainty.clone(), ..Default::default() };
                match &a.body {
                    Body::Inline(s) => d.chars = Some(s.clone()),
                    Body::Resource(r) => {
                        d.resource = Some(r.id.to_string());
                        d.format = Some(r.media_type.clone());
                        d.chars = r.chars.clone();
                        d.metadata = r.metadata.clone();
                    }
                    Body::Choice(c) => d.choice = Some(choice_desc(c)),
                    Body::Zone(_) => return Err(SchemaError::new(at(), "text body is a zone")),
                }
                doc.texts.push(d);
            }
            AnnotationKind::PlaceZone => {
                let Body::Zone(z) = &a.body else { return Err(SchemaError::new(at(), "placement body is not a zone")) };
                let Some(i) = zone_rank.get(z) else { return Err(SchemaError::new(at(), format!("undefined zone {z}"))) };
                doc.zones[*i].placements.push(PlacementDesc { id: a.id.to_string(), canvas: a.target.iri().to_string(), xywh, polygon, rotation: a.rotation });
            }
            AnnotationKind::Comment | AnnotationKind::Describe => {
                if a.body_selector.is_some() {
                    return Err(SchemaError::new(at(), "comment body selectors are not supported"));
                }
                let kind = if a.kind == AnnotationKind::Comment { CommentKind::Comment } else { CommentKind::Describe };
                let mut d = CommentDesc { id: a.id.to_string(), kind, target: a.target.iri().to_string(), xywh, polygon, author: a.author.clone(), certainty: a.certainty.clone(), ..Default::default() };
                match &a.body {
                    Body::Inline(s) => d.chars = Some(s.clone()),
                    Body::Resource(r) => {
                        d.resource = Some(r.id.to_string());
                        d.format = Some(r.media_type.clone());
                        d.chars = r.chars.clone();
                        d.metadata = r.metadata.clone();
                    }
                    _ => return Err(SchemaError::new(at(), "comment body must be text")),
                }
                doc.comments.push(d);
            }
        }
    }

    doc.sequences = m
        .sequences
        .iter()
        .map(|s| SequenceDesc {
            id: s.id.to_string(),
            label: s.label.clone(),
            items: s
                .items
                .iter()
                .map(|i| match i {
                    SequenceItem::Single(c) => ItemDesc::Canvas(c.to_string()),
                    SequenceItem::Alternatives(paths) => ItemDesc::Alternatives { alternatives: paths.iter().map(|p| p.iter().map(Iri::to_string).collect()).collect() },
                })
                .collect(),
        })
        .collect();
    doc.ranges = m
        .ranges
        .iter()
        .map(|r| RangeDesc {
            id: r.id.to_string(),
            label: r.label.clone(),
            sequence: r.sequence.to_string(),
            targets: r
                .targets
                .iter()
                .map(|t| {
                    let (xywh, polygon) = region_fields(&t.selector);
                    RangeTargetDesc { canvas: t.canvas.to_string(), xywh, polygon }
                })
                .collect(),
        })
        .collect();
    doc.lists = m
        .annotation_lists
        .iter()
        .map(|l| ListDesc { id: l.id.to_string(), kind: l.kind.into(), entries: l.entries.iter().map(Iri::to_string).collect() })
        .collect();
    Ok(doc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    const MINIMAL: &str = r#"{
      "manuscript": {"id": "http://example.org/ms/manifest", "label": "MS 1"},
      "canvases": [{"id": "http://example.org/ms/p1", "label": "p. 1", "width": 800, "height": 1200}],
      "images": [{"id": "http://example.org/ms/anno/i1", "canvas": "http://example.org/ms/p1",
                  "image": "http://images.example.org/p1.jpg", "format": "image/jpeg",
                  "width": 1600, "height": 2400}],
      "sequences": [{"id": "http://example.org/ms/seq", "label": "Binding", "items": ["http://example.org/ms/p1"]}]
    }"#;

    #[test]
    fn minimal_document() {
        let m = ingest(&parse_description(MINIMAL).unwrap()).unwrap();
        assert_eq!(m.canvases.len(), 1);
        assert_eq!(m.annotations.len(), 1);
        assert_eq!(m.sequences[0].aggregates.len(), 1);
    }

    #[test]
    fn undefined_canvas_is_located() {
        let bad = MINIMAL.replace(r#""canvas": "http://example.org/ms/p1""#, r#""canvas": "http://example.org/ms/p9""#);
        let err = ingest(&parse_description(&bad).unwrap()).unwrap_err();
        assert_eq!(err.path, "$.images[0].canvas");
    }

    #[test]
    fn parse_errors_are_located() {
        let bad = MINIMAL.replace(r#""width": 800"#, r#""width": "wide""#);
        assert_eq!(parse_description(&bad).unwrap_err().path, "$.canvases[0].width");
        let bad = MINIMAL.replace(r#""label": "MS 1""#, r#""label": "MS 1", "colour": "red""#);
        assert_eq!(parse_description(&bad).unwrap_err().path, "$.manuscript.colour");
    }

    #[test]
    fn region_errors_are_located() {
        let bad = MINIMAL.replace(r#""width": 1600"#, r#""xywh": "xywh=0,0,900,10", "width": 1600"#);
        let err = ingest(&parse_description(&bad).unwrap()).unwrap_err();
        assert_eq!(err.path, "$.images[0]");
        let bad = MINIMAL.replace(r#""width": 1600"#, r#""xywh": "0,0,9,9", "width": 1600"#);
        assert_eq!(ingest(&parse_description(&bad).unwrap()).unwrap_err().path, "$.images[0].xywh");
    }

    #[test]
    fn fixtures_survive_description() {
        for (name, m) in fixtures::all() {
            let doc = description_of(&m).unwrap();
            let text = to_json(&doc);
            assert_eq!(ingest(&parse_description(&text).unwrap()).unwrap(), m, "{name}");
        }
    }
}
