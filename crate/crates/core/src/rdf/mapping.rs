//! Conversion between [`Manifest`] values and graphs. The vocabulary table
//! lives in [`super::vocab`].

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use super::{canon, read_list_cells, vocab::*, Graph, RdfError, Term, Triple};
use crate::fragments::{format_xywh, parse_svg_polygon_element, parse_xywh, RegionSelector};
use crate::model::*;

/// Namespace for the `:` prefix: the manifest IRI up to its last `/` or `#`.
fn local_namespace(id: &Iri) -> String {
    let s = id.as_str();
    match s.rfind(['/', '#']) {
        Some(i) if i + 1 < s.len() => s[..=i].to_string(),
        _ => s.to_string(),
    }
}

/// Encodes a manifest as triples.
pub fn model_to_graph(manifest: &Manifest) -> Graph {
    let mut e = Emitter {
        g: Graph::with_prefixes(PREFIXES),
        next: 0,
    };
    e.g.prefixes.insert(String::new(), local_namespace(&manifest.id));
    e.manifest(manifest);
    e.g
}

struct Emitter {
    g: Graph,
    next: usize,
}

fn iri(i: &Iri) -> Term {
    Term::iri(i.as_str())
}

fn str_lit(s: &str) -> Term {
    Term::Str(s.to_string())
}

impl Emitter {
    fn blank(&mut self) -> Term {
        let b = Term::Blank(format!("b{}", self.next));
        self.next += 1;
        b
    }

    fn add(&mut self, s: &Term, p: &str, o: Term) {
        self.g.insert(s.clone(), p, o);
    }

    fn list(&mut self, items: Vec<Term>) -> Term {
        let mut head = Term::iri(RDF_NIL);
        for item in items.into_iter().rev() {
            let cell = self.blank();
            self.add(&cell, RDF_FIRST, item);
            self.add(&cell, RDF_REST, head);
            head = cell;
        }
        head
    }

    fn title(&mut self, s: &Term, label: &str) {
        if !label.is_empty() {
            self.add(s, DC_TITLE, str_lit(label));
        }
    }

    fn properties(&mut self, s: &Term, metadata: &BTreeMap<String, String>) {
        for (k, v) in metadata {
            let p = self.blank();
            self.add(&p, SC_KEY, str_lit(k));
            self.add(&p, SC_VALUE, str_lit(v));
            self.add(s, SC_PROPERTY, p);
        }
    }

    fn optional_list(&mut self, s: &Term, p: &str, items: Vec<Term>) {
        if !items.is_empty() {
            let head = self.list(items);
            self.add(s, p, head);
        }
    }

    /// The IRI itself, a fragment IRI, or a blank constraint node.
    fn selected(&mut self, id: &Iri, selector: Option<&RegionSelector>) -> Term {
        match selector {
            None => iri(id),
            Some(RegionSelector::Rect(r)) if id.fragment().is_none() => Term::iri(format!("{id}#{}", format_xywh(r))),
            Some(sel) => {
                let literal = match sel {
                    RegionSelector::Rect(r) => format_xywh(r),
                    RegionSelector::Polygon(p) => p.to_svg_element(),
                };
                let c = self.blank();
                self.add(&c, RDF_TYPE, Term::iri(OAC_CONSTRAINT));
                self.add(&c, OAC_CONSTRAINS, iri(id));
                self.add(&c, OAC_CONSTRAINED_BY, Term::Str(literal));
                c
            }
        }
    }

    fn manifest(&mut self, m: &Manifest) {
        let s = iri(&m.id);
        self.add(&s, RDF_TYPE, Term::iri(SC_MANIFEST));
        self.title(&s, &m.label);
        let seqs = m.sequences.iter().map(|q| iri(&q.id)).collect();
        let head = self.list(seqs);
        self.add(&s, SC_HAS_SEQUENCES, head);
        self.optional_list(&s, SC_HAS_RANGES, m.ranges.iter().map(|r| iri(&r.id)).collect());
        self.optional_list(&s, SC_HAS_LISTS, m.annotation_lists.iter().map(|l| iri(&l.id)).collect());
        self.optional_list(&s, SC_HAS_ZONES, m.zones.iter().map(|z| iri(&z.id)).collect());
        self.optional_list(&s, SC_HAS_ANNOTATIONS, m.annotations.iter().map(|a| iri(&a.id)).collect());
        let sequenced: HashSet<&Iri> = m.sequences.iter().flat_map(|q| q.reachable()).collect();
        let loose = m.canvases.iter().filter(|c| !sequenced.contains(&c.id)).map(|c| iri(&c.id)).collect();
        self.optional_list(&s, SC_HAS_CANVASES, loose);
        self.properties(&s, &m.metadata);

        for c in &m.canvases {
            let n = iri(&c.id);
            self.add(&n, RDF_TYPE, Term::iri(SC_CANVAS));
            self.add(&n, EXIF_WIDTH, Term::Int(c.width.into()));
            self.add(&n, EXIF_HEIGHT, Term::Int(c.height.into()));
            self.title(&n, &c.label);
        }
        for z in &m.zones {
            let n = iri(&z.id);
            self.add(&n, RDF_TYPE, Term::iri(SC_ZONE));
            self.add(&n, EXIF_WIDTH, Term::Int(z.width.into()));
            self.add(&n, EXIF_HEIGHT, Term::Int(z.height.into()));
        }
        for q in &m.sequences {
            self.sequence(q);
        }
        for r in &m.ranges {
            let n = iri(&r.id);
            self.add(&n, RDF_TYPE, Term::iri(SC_RANGE));
            self.title(&n, &r.label);
            self.add(&n, SC_IN_SEQUENCE, iri(&r.sequence));
            let targets = r.targets.iter().map(|t| self.selected(&t.canvas, t.selector.as_ref())).collect();
            let head = self.list(targets);
            self.add(&n, SC_HAS_TARGETS, head);
        }
        for l in &m.annotation_lists {
            let n = iri(&l.id);
            let kind = match l.kind {
                ListKind::TextOrder => SC_TEXT_ORDER,
                ListKind::ImageList => SC_IMAGE_LIST,
                ListKind::CommentList => SC_COMMENT_LIST,
            };
            self.add(&n, RDF_TYPE, Term::iri(SC_ANNOTATION_LIST));
            self.add(&n, RDF_TYPE, Term::iri(kind));
            let head = self.list(l.entries.iter().map(iri).collect());
            self.add(&n, SC_HAS_ENTRIES, head);
        }
        for a in &m.annotations {
            self.annotation(a);
        }
        for t in &m.extra_triples {
            let relabel = |t: &Term| match t {
                Term::Blank(b) => Term::Blank(format!("e{b}")),
                other => other.clone(),
            };
            self.add(&relabel(&t.subject), &t.predicate, relabel(&t.object));
        }
    }

    fn sequence(&mut self, q: &Sequence) {
        let n = iri(&q.id);
        self.add(&n, RDF_TYPE, Term::iri(ORE_AGGREGATION));
        self.add(&n, RDF_TYPE, Term::iri(RDF_LIST));
        self.title(&n, &q.label);
        for c in &q.aggregates {
            self.add(&n, ORE_AGGREGATES, iri(c));
        }
        let mut items = Vec::new();
        for item in &q.items {
            items.push(match item {
                SequenceItem::Single(c) => iri(c),
                SequenceItem::Alternatives(paths) => {
                    let lists = paths.iter().map(|p| self.list(p.iter().map(iri).collect())).collect();
                    let group = self.blank();
                    self.add(&group, RDF_TYPE, Term::iri(SC_ALTERNATIVE_GROUP));
                    let head = self.list(lists);
                    self.add(&group, SC_HAS_PATHS, head);
                    group
                }
            });
        }
        // the sequence node is itself the first cell of its list
        let mut items = items.into_iter();
        if let Some(first) = items.next() {
            self.add(&n, RDF_FIRST, first);
            let rest = self.list(items.collect());
            self.add(&n, RDF_REST, rest);
        }
    }

    fn resource(&mut self, r: &ContentResource) -> Term {
        let n = iri(&r.id);
        let class = match r.kind {
            ResourceKind::Image => SC_IMAGE,
            ResourceKind::Text => SC_TEXT,
        };
        if self.g.has_type(&n, class) {
            return n;
        }
        self.add(&n, RDF_TYPE, Term::iri(class));
        self.add(&n, DC_FORMAT, str_lit(&r.media_type));
        if let Some((w, h)) = r.size() {
            self.add(&n, EXIF_WIDTH, Term::Int(w.into()));
            self.add(&n, EXIF_HEIGHT, Term::Int(h.into()));
        }
        if let Some(chars) = &r.chars {
            self.add(&n, SC_CHARS, str_lit(chars));
        }
        self.properties(&n, &r.metadata);
        n
    }

    fn annotation(&mut self, a: &Annotation) {
        let n = iri(&a.id);
        let subtype = match a.kind {
            AnnotationKind::PaintImage => SC_IMAGE_ANNOTATION,
            AnnotationKind::PaintText => SC_TEXT_ANNOTATION,
            AnnotationKind::PlaceZone => SC_ZONE_ANNOTATION,
            AnnotationKind::Comment => SC_COMMENT_ANNOTATION,
            AnnotationKind::Describe => SC_DESCRIPTION_ANNOTATION,
        };
        self.add(&n, RDF_TYPE, Term::iri(OAC_ANNOTATION));
        self.add(&n, RDF_TYPE, Term::iri(subtype));
        let body = match &a.body {
            Body::Resource(r) => {
                self.resource(r);
                self.selected(&r.id, a.body_selector.as_ref())
            }
            Body::Choice(c) => {
                let cn = iri(&c.id);
                if !self.g.has_type(&cn, OAC_CHOICE) {
                    let kind = match c.kind {
                        ChoiceKind::ImageChoice => SC_IMAGE_CHOICE,
                        ChoiceKind::TextChoice => SC_TEXT_CHOICE,
                    };
                    self.add(&cn, RDF_TYPE, Term::iri(OAC_CHOICE));
                    self.add(&cn, RDF_TYPE, Term::iri(kind));
                    let options = c.options.iter().map(|o| self.resource(o)).collect();
                    let head = self.list(options);
                    self.add(&cn, SC_HAS_OPTIONS, head);
                }
                self.selected(&c.id, a.body_selector.as_ref())
            }
            Body::Zone(z) => iri(z),
            Body::Inline(s) => str_lit(s),
        };
        self.add(&n, OAC_HAS_BODY, body);
        let target = self.selected(a.target.iri(), a.target_selector.as_ref());
        self.add(&n, OAC_HAS_TARGET, target);
        if a.rotation != 0 {
            self.add(&n, SC_ROTATION, Term::Int(a.rotation.into()));
        }
        if let Some(author) = &a.author {
            self.add(&n, DC_CREATOR, str_lit(author));
        }
        if let Some(c) = &a.certainty {
            self.add(&n, SC_CERTAINTY, str_lit(c));
        }
    }
}

/// Decodes the single manifest described by a graph.
///
/// Structural problems that the validator can describe (dangling targets,
/// inconsistent aggregates, empty choices, bad rotations) are carried into
/// the model unchanged rather than rejected. Triples the mapping does not
/// understand land in [`Manifest::extra_triples`].
pub fn graph_to_model(graph: &Graph) -> Result<Manifest, RdfError> {
    let manifests: Vec<&Term> = graph.subjects_with(RDF_TYPE, &Term::iri(SC_MANIFEST)).collect();
    let m = match manifests.as_slice() {
        [] => return Err(RdfError::NoManifestNode),
        [one] => (*one).clone(),
        many => return Err(RdfError::MultipleManifestNodes(many.iter().map(|t| t.to_string()).collect())),
    };
    if let Some(clash) = type_clash(graph) {
        return Err(RdfError::TypeClash(clash.to_string()));
    }
    Decoder { g: graph, used: HashSet::new() }.manifest(&m)
}

/// First node typed both sc:Canvas and sc:Zone.
pub(crate) fn type_clash(graph: &Graph) -> Option<&Term> {
    graph
        .subjects_with(RDF_TYPE, &Term::iri(SC_CANVAS))
        .find(|s| graph.has_type(s, SC_ZONE))
}

struct Decoder<'g> {
    g: &'g Graph,
    used: HashSet<&'g Triple>,
}

fn decode_err(node: &Term, message: impl Into<String>) -> RdfError {
    RdfError::Decode { node: node.to_string(), message: message.into() }
}

impl<'g> Decoder<'g> {
    fn take(&mut self, s: &Term, p: &str) -> Vec<&'g Term> {
        let g = self.g;
        let mut out = Vec::new();
        for t in g.about(s).filter(|t| t.predicate == p) {
            self.used.insert(t);
            out.push(&t.object);
        }
        out
    }

    fn one(&mut self, s: &Term, p: &str) -> Result<Option<&'g Term>, RdfError> {
        let all = self.take(s, p);
        match all.as_slice() {
            [] => Ok(None),
            [t] => Ok(Some(*t)),
            _ => Err(decode_err(s, format!("several values for <{p}>"))),
        }
    }

    fn string(&mut self, s: &Term, p: &str) -> Result<Option<String>, RdfError> {
        match self.one(s, p)? {
            None => Ok(None),
            Some(Term::Str(v)) => Ok(Some(v.clone())),
            Some(other) => Err(decode_err(s, format!("<{p}> must be a string, found {other}"))),
        }
    }

    fn uint(&mut self, s: &Term, p: &str) -> Result<Option<u32>, RdfError> {
        match self.one(s, p)? {
            None => Ok(None),
            Some(Term::Int(v)) => u32::try_from(*v).map(Some).map_err(|_| decode_err(s, format!("<{p}> out of range: {v}"))),
            Some(other) => Err(decode_err(s, format!("<{p}> must be an integer, found {other}"))),
        }
    }

    fn typed(&mut self, s: &Term, class: &str) -> bool {
        let g = self.g;
        let t = Triple::new(s.clone(), RDF_TYPE, Term::iri(class));
        match g.triples.get(&t) {
            Some(t) => {
                self.used.insert(t);
                true
            }
            None => false,
        }
    }

    fn list(&mut self, head: &Term) -> Result<Vec<Term>, RdfError> {
        let (members, cells) = read_list_cells(self.g, head)?;
        for c in &cells {
            self.take(c, RDF_FIRST);
            self.take(c, RDF_REST);
        }
        Ok(members)
    }

    fn list_of(&mut self, s: &Term, p: &str) -> Result<Vec<Term>, RdfError> {
        match self.one(s, p)? {
            Some(head) => self.list(head),
            None => Ok(Vec::new()),
        }
    }

    fn iri(&self, t: &Term) -> Result<Iri, RdfError> {
        match t {
            Term::Iri(s) => Ok(Iri::new(s.as_str())?),
            other => Err(decode_err(other, "expected an IRI")),
        }
    }

    fn label(&mut self, s: &Term) -> Result<String, RdfError> {
        Ok(self.string(s, DC_TITLE)?.unwrap_or_default())
    }

    fn properties(&mut self, s: &Term) -> Result<BTreeMap<String, String>, RdfError> {
        let mut out = BTreeMap::new();
        for p in self.take(s, SC_PROPERTY) {
            let key = self.string(p, SC_KEY)?.ok_or_else(|| decode_err(p, "property without sc:key"))?;
            let value = self.string(p, SC_VALUE)?.ok_or_else(|| decode_err(p, "property without sc:value"))?;
            out.insert(key, value);
        }
        Ok(out)
    }

    /// Reverses the fragment-IRI / constraint encoding of a selected resource.
    fn selected(&mut self, t: &Term) -> Result<(Iri, Option<RegionSelector>), RdfError> {
        match t {
            Term::Iri(s) => {
                if let Some((base, frag)) = s.split_once('#') {
                    if frag.starts_with("xywh=") {
                        let rect = parse_xywh(frag).map_err(|e| decode_err(t, e.to_string()))?;
                        return Ok((Iri::new(base)?, Some(rect.into())));
                    }
                }
                Ok((Iri::new(s.as_str())?, None))
            }
            Term::Blank(_) if self.typed(t, OAC_CONSTRAINT) => {
                let target = self.one(t, OAC_CONSTRAINS)?.ok_or_else(|| decode_err(t, "constraint without oac:constrains"))?;
                let target = self.iri(target)?;
                let literal = self
                    .string(t, OAC_CONSTRAINED_BY)?
                    .ok_or_else(|| decode_err(t, "constraint without oac:constrainedBy"))?;
                let selector: RegionSelector = if literal.starts_with("xywh=") {
                    parse_xywh(&literal).map_err(|e| decode_err(t, e.to_string()))?.into()
                } else {
                    parse_svg_polygon_element(&literal).map_err(|e| decode_err(t, e.to_string()))?.into()
                };
                Ok((target, Some(selector)))
            }
            other => Err(decode_err(other, "expected an IRI or oac:Constraint")),
        }
    }

    /// Members of an optional ordering list followed by any other node of
    /// the class, sorted.
    fn ordered_nodes(&mut self, m: &Term, list: &str, class: &str) -> Result<Vec<Term>, RdfError> {
        let mut out = self.list_of(m, list)?;
        let listed: HashSet<Term> = out.iter().cloned().collect();
        let mut rest: Vec<Term> = self
            .g
            .subjects_with(RDF_TYPE, &Term::iri(class))
            .filter(|t| !listed.contains(*t))
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        out.append(&mut rest);
        Ok(out)
    }

    fn manifest(mut self, m: &Term) -> Result<Manifest, RdfError> {
        self.typed(m, SC_MANIFEST);
        let id = self.iri(m)?;
        let label = self.label(m)?;
        let metadata = self.properties(m)?;

        let mut canvases = Vec::new();
        for c in self.ordered_nodes(m, SC_HAS_CANVASES, SC_CANVAS)? {
            canvases.push(self.canvas(&c)?);
        }
        let mut zones = Vec::new();
        for z in self.ordered_nodes(m, SC_HAS_ZONES, SC_ZONE)? {
            self.typed(&z, SC_ZONE);
            let width = self.uint(&z, EXIF_WIDTH)?.unwrap_or(0);
            let height = self.uint(&z, EXIF_HEIGHT)?.unwrap_or(0);
            zones.push(Zone { id: self.iri(&z)?, width, height });
        }
        let mut sequences = Vec::new();
        for s in self.list_of(m, SC_HAS_SEQUENCES)? {
            sequences.push(self.sequence(&s)?);
        }
        let mut ranges = Vec::new();
        for r in self.ordered_nodes(m, SC_HAS_RANGES, SC_RANGE)? {
            ranges.push(self.range(&r)?);
        }
        let mut annotation_lists = Vec::new();
        for l in self.ordered_nodes(m, SC_HAS_LISTS, SC_ANNOTATION_LIST)? {
            annotation_lists.push(self.annotation_list(&l)?);
        }
        let mut annotations = Vec::new();
        let known = KnownNodes::collect(self.g);
        for a in self.ordered_nodes(m, SC_HAS_ANNOTATIONS, OAC_ANNOTATION)? {
            annotations.push(self.annotation(&a, &known, &id)?);
        }

        let ranks = canon::blank_ranks(self.g);
        let relabel = |t: &Term| match t {
            Term::Blank(b) => Term::Blank(format!("x{}", ranks[b])),
            other => other.clone(),
        };
        let mut extra: Vec<Triple> = self
            .g
            .triples
            .iter()
            .filter(|t| !self.used.contains(t))
            .map(|t| Triple::new(relabel(&t.subject), t.predicate.clone(), relabel(&t.object)))
            .collect();
        extra.sort();

        let mut manifest = Manifest {
            id,
            label,
            canvases,
            sequences,
            ranges,
            annotation_lists,
            zones,
            annotations,
            metadata,
            extra_triples: extra,
        };
        normalize_canvas_order(&mut manifest);
        Ok(manifest)
    }

    fn canvas(&mut self, c: &Term) -> Result<Canvas, RdfError> {
        self.typed(c, SC_CANVAS);
        Ok(Canvas {
            id: self.iri(c)?,
            label: self.label(c)?,
            width: self.uint(c, EXIF_WIDTH)?.unwrap_or(0),
            height: self.uint(c, EXIF_HEIGHT)?.unwrap_or(0),
        })
    }

    fn sequence(&mut self, s: &Term) -> Result<Sequence, RdfError> {
        self.typed(s, ORE_AGGREGATION);
        self.typed(s, RDF_LIST);
        self.typed(s, SC_SEQUENCE);
        let id = self.iri(s)?;
        let label = self.label(s)?;
        let mut aggregates = BTreeSet::new();
        for c in self.take(s, ORE_AGGREGATES) {
            aggregates.insert(self.iri(c)?);
        }
        let mut items = Vec::new();
        let members = if self.g.objects(s, RDF_FIRST).next().is_some() { self.list(s)? } else { Vec::new() };
        for item in members {
            match &item {
                Term::Blank(_) if self.typed(&item, SC_ALTERNATIVE_GROUP) => {
                    let mut paths = Vec::new();
                    for path in self.list_of(&item, SC_HAS_PATHS)? {
                        let canvases = self.list(&path)?;
                        paths.push(canvases.iter().map(|c| self.iri(c)).collect::<Result<Vec<_>, _>>()?);
                    }
                    items.push(SequenceItem::Alternatives(paths));
                }
                other => items.push(SequenceItem::Single(self.iri(other)?)),
            }
        }
        Ok(Sequence { id, label, items, aggregates })
    }

    fn range(&mut self, r: &Term) -> Result<Range, RdfError> {
        self.typed(r, SC_RANGE);
        let id = self.iri(r)?;
        let label = self.label(r)?;
        let sequence = match self.one(r, SC_IN_SEQUENCE)? {
            Some(s) => self.iri(s)?,
            None => return Err(decode_err(r, "range without sc:inSequence")),
        };
        let mut targets = Vec::new();
        for t in self.list_of(r, SC_HAS_TARGETS)? {
            let (canvas, selector) = self.selected(&t)?;
            targets.push(RangeTarget { canvas, selector });
        }
        Ok(Range { id, label, sequence, targets })
    }

    fn annotation_list(&mut self, l: &Term) -> Result<AnnotationList, RdfError> {
        self.typed(l, SC_ANNOTATION_LIST);
        let kind = if self.typed(l, SC_TEXT_ORDER) {
            ListKind::TextOrder
        } else if self.typed(l, SC_IMAGE_LIST) {
            ListKind::ImageList
        } else if self.typed(l, SC_COMMENT_LIST) {
            ListKind::CommentList
        } else {
            return Err(decode_err(l, "annotation list without a kind"));
        };
        let id = self.iri(l)?;
        let entries = self.list_of(l, SC_HAS_ENTRIES)?.iter().map(|e| self.iri(e)).collect::<Result<_, _>>()?;
        Ok(AnnotationList { id, kind, entries })
    }

    fn resource(&mut self, r: &Term) -> Result<ContentResource, RdfError> {
        let kind = if self.typed(r, SC_IMAGE) {
            ResourceKind::Image
        } else if self.typed(r, SC_TEXT) {
            ResourceKind::Text
        } else {
            return Err(decode_err(r, "resource is neither sc:Image nor sc:Text"));
        };
        Ok(ContentResource {
            id: self.iri(r)?,
            kind,
            media_type: self.string(r, DC_FORMAT)?.unwrap_or_default(),
            width: self.uint(r, EXIF_WIDTH)?,
            height: self.uint(r, EXIF_HEIGHT)?,
            chars: self.string(r, SC_CHARS)?,
            metadata: self.properties(r)?,
        })
    }

    fn choice(&mut self, c: &Term) -> Result<Choice, RdfError> {
        self.typed(c, OAC_CHOICE);
        let kind = if self.typed(c, SC_IMAGE_CHOICE) {
            ChoiceKind::ImageChoice
        } else if self.typed(c, SC_TEXT_CHOICE) {
            ChoiceKind::TextChoice
        } else {
            return Err(decode_err(c, "choice without sc:ImageChoice or sc:TextChoice"));
        };
        let mut options = Vec::new();
        for o in self.list_of(c, SC_HAS_OPTIONS)? {
            options.push(self.resource(&o)?);
        }
        Ok(Choice { id: self.iri(c)?, kind, options })
    }

    fn annotation(&mut self, a: &Term, known: &KnownNodes, manifest: &Iri) -> Result<Annotation, RdfError> {
        self.typed(a, OAC_ANNOTATION);
        let kinds = [
            (SC_IMAGE_ANNOTATION, AnnotationKind::PaintImage),
            (SC_TEXT_ANNOTATION, AnnotationKind::PaintText),
            (SC_ZONE_ANNOTATION, AnnotationKind::PlaceZone),
            (SC_COMMENT_ANNOTATION, AnnotationKind::Comment),
            (SC_DESCRIPTION_ANNOTATION, AnnotationKind::Describe),
        ];
        let kind = kinds
            .iter()
            .find(|(class, _)| self.typed(a, class))
            .map(|(_, k)| *k)
            .ok_or_else(|| decode_err(a, "annotation without a SharedCanvas subtype"))?;
        let id = self.iri(a)?;

        let body_term = self.one(a, OAC_HAS_BODY)?.ok_or_else(|| decode_err(a, "annotation without oac:hasBody"))?;
        let (body, body_selector) = match body_term {
            Term::Str(s) => (Body::Inline(s.clone()), None),
            other => {
                let (body_iri, selector) = self.selected(other)?;
                let node = Term::iri(body_iri.as_str());
                let body = if self.g.has_type(&node, OAC_CHOICE) {
                    Body::Choice(self.choice(&node)?)
                } else if self.g.has_type(&node, SC_IMAGE) || self.g.has_type(&node, SC_TEXT) {
                    Body::Resource(self.resource(&node)?)
                } else if kind == AnnotationKind::PlaceZone || self.g.has_type(&node, SC_ZONE) {
                    Body::Zone(body_iri)
                } else {
                    return Err(decode_err(other, "body is not a resource, choice or zone"));
                };
                (body, selector)
            }
        };

        let target_term = self.one(a, OAC_HAS_TARGET)?.ok_or_else(|| decode_err(a, "annotation without oac:hasTarget"))?;
        let (target_iri, target_selector) = self.selected(target_term)?;
        let target = match known.kinds.get(target_iri.as_str()) {
            Some(NodeKind::Canvas) => Target::Canvas(target_iri),
            Some(NodeKind::Zone) => Target::Zone(target_iri),
            Some(NodeKind::Annotation) => Target::Annotation(target_iri),
            Some(_) => Target::Resource(target_iri),
            None if target_iri.authority() != manifest.authority() => Target::External(target_iri),
            // unresolved internal reference, left for the validator
            None => Target::Canvas(target_iri),
        };

        let rotation = match self.one(a, SC_ROTATION)? {
            None => 0,
            Some(Term::Int(d)) => u16::try_from(*d).map_err(|_| decode_err(a, format!("rotation out of range: {d}")))?,
            Some(other) => return Err(decode_err(a, format!("rotation must be an integer, found {other}"))),
        };
        Ok(Annotation {
            id,
            kind,
            body,
            body_selector,
            target,
            target_selector,
            rotation,
            author: self.string(a, DC_CREATOR)?,
            certainty: self.string(a, SC_CERTAINTY)?,
        })
    }
}

/// Type of every typed IRI node, used to classify annotation targets.
struct KnownNodes {
    kinds: HashMap<String, NodeKind>,
}

impl KnownNodes {
    fn collect(g: &Graph) -> Self {
        let mut kinds = HashMap::new();
        let classes = [
            (SC_CANVAS, NodeKind::Canvas),
            (SC_ZONE, NodeKind::Zone),
            (OAC_ANNOTATION, NodeKind::Annotation),
            (SC_IMAGE, NodeKind::Resource),
            (SC_TEXT, NodeKind::Resource),
            (OAC_CHOICE, NodeKind::Choice),
        ];
        for (class, kind) in classes {
            for s in g.subjects_with(RDF_TYPE, &Term::iri(class)) {
                if let Term::Iri(i) = s {
                    kinds.entry(i.clone()).or_insert(kind);
                }
            }
        }
        KnownNodes { kinds }
    }
}
