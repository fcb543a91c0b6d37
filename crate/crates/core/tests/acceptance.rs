//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines are always printed; exits non-zero on any failure.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Component, Path};
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use sharedcanvas::fixtures;
use sharedcanvas::fragments::{format_xywh, parse_xywh, Point, Rect};
use sharedcanvas::model::*;
use sharedcanvas::rdf::{graph_to_model, model_to_graph, parse_turtle, read_list, serialize_turtle, vocab, Term, Triple};
use sharedcanvas::render::{render_manifest_html, RenderOptions};
use sharedcanvas::resolve::*;
use sharedcanvas::validate::{validate_graph, validate_manifest, Rule, Severity};

type Outcome = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn within(limit: Duration, start: Instant) -> Outcome {
    let spent = start.elapsed();
    ensure!(spent < limit, "took {spent:?}, limit {limit:?}");
    Ok(())
}

// 1
fn turtle_fidelity() -> Outcome {
    let start = Instant::now();
    let listing = "\
@prefix : <http://example.org/ms/> .
@prefix oac: <http://www.openannotation.org/ns/> .
@prefix sc: <http://www.shared-canvas.org/ns/> .
@prefix exif: <http://www.w3.org/2003/12/exif/ns#> .
@prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .

:myAnno a oac:Annotation;
  oac:hasTarget :canvas1;
  oac:hasBody <image1#xywh=10,10,640,480> .
:canvas1 a sc:Canvas;
  exif:height 1024;
  exif:width 768 .
";
    let graph = parse_turtle(listing).map_err(|e| e.to_string())?;
    let ex = |l: &str| Term::iri(format!("http://example.org/ms/{l}"));
    let t = |s: Term, p: &str, o: Term| Triple::new(s, p, o);
    let expected: BTreeSet<Triple> = [
        t(ex("myAnno"), vocab::RDF_TYPE, Term::iri("http://www.openannotation.org/ns/Annotation")),
        t(ex("myAnno"), "http://www.openannotation.org/ns/hasTarget", ex("canvas1")),
        t(ex("myAnno"), "http://www.openannotation.org/ns/hasBody", Term::iri("image1#xywh=10,10,640,480")),
        t(ex("canvas1"), vocab::RDF_TYPE, Term::iri("http://www.shared-canvas.org/ns/Canvas")),
        t(ex("canvas1"), "http://www.w3.org/2003/12/exif/ns#height", Term::Int(1024)),
        t(ex("canvas1"), "http://www.w3.org/2003/12/exif/ns#width", Term::Int(768)),
    ]
    .into();
    ensure!(graph.triples == expected, "got {:#?}", graph.triples);
    within(Duration::from_secs(1), start)
}

// 2
fn dual_typing() -> Outcome {
    let start = Instant::now();
    let ex = |l: &str| Iri::new(format!("http://example.org/ms/{l}")).unwrap();
    let mut b = ManifestBuilder::new(ex("manifest"), "");
    let pages: Vec<Iri> = (1..=3).map(|i| b.canvas(ex(&format!("page{i}")), "", 768, 1024).unwrap()).collect();
    b.sequence(ex("mySequence"), "", pages.iter().cloned().map(SequenceItem::Single).collect()).unwrap();
    let m = b.build().map_err(|e| e.to_string())?;
    let g = model_to_graph(&m);
    let seq = Term::iri(ex("mySequence").as_str());
    ensure!(g.has_type(&seq, "http://www.openarchives.org/ore/terms/Aggregation"), "not an Aggregation");
    ensure!(g.has_type(&seq, vocab::RDF_LIST), "not a List");
    let aggregated = g.objects(&seq, "http://www.openarchives.org/ore/terms/aggregates").count();
    ensure!(aggregated == 3, "{aggregated} ore:aggregates triples");
    let members = read_list(&g, &seq).map_err(|e| e.to_string())?;
    let expected: Vec<Term> = pages.iter().map(|p| Term::iri(p.as_str())).collect();
    ensure!(members == expected, "list order {members:?}");
    let text = serialize_turtle(&g);
    ensure!(text.contains(":mySequence a ore:Aggregation, rdf:List;"), "serialization lacks the dual type line:\n{text}");
    within(Duration::from_secs(1), start)
}

// 3
fn round_trip() -> Outcome {
    for (name, m) in fixtures::all() {
        let g = model_to_graph(&m);
        let text = serialize_turtle(&g);
        ensure!(serialize_turtle(&model_to_graph(&m)) == text, "{name}: serialization differs between runs");
        let g2 = parse_turtle(&text).map_err(|e| format!("{name}: {e}"))?;
        ensure!(serialize_turtle(&g2) == text, "{name}: re-serialization differs");
        let back = graph_to_model(&g2).map_err(|e| format!("{name}: {e}"))?;
        ensure!(back == m, "{name}: decoded manifest differs");
    }
    Ok(())
}

// 4
fn fragment_parser() -> Outcome {
    let literal = parse_xywh("xywh=10,10,640,480").map_err(|e| e.to_string())?;
    ensure!(literal == Rect::new(10, 10, 640, 480).unwrap(), "literal parsed as {literal:?}");
    ensure!(format_xywh(&literal) == "xywh=10,10,640,480", "literal formatted differently");
    let strategy = (0u32..=100_000, 0u32..=100_000, 1u32..=100_000, 1u32..=100_000);
    runner(1000)
        .run(&strategy, |(x, y, w, h)| {
            let r = Rect::new(x, y, w, h).unwrap();
            let text = format_xywh(&r);
            prop_assert_eq!(parse_xywh(&text).unwrap(), r);
            prop_assert_eq!(text, format!("xywh={x},{y},{w},{h}"));
            Ok(())
        })
        .map_err(|e| e.to_string())
}

// 5
fn parker() -> Outcome {
    let m = fixtures::parker();
    ensure!(m.sequences.len() == 2, "{} sequences", m.sequences.len());
    let (current, original) = (&m.sequences[0], &m.sequences[1]);
    ensure!(original.aggregates.len() == current.aggregates.len() + 2, "original has {} canvases, current {}", original.aggregates.len(), current.aggregates.len());
    ensure!(current.aggregates.is_subset(&original.aggregates), "current canvases are not all in the original");
    let extra: Vec<&Iri> = original.aggregates.difference(&current.aggregates).collect();
    for c in &extra {
        let on = |kind| m.annotations.iter().filter(|a| a.kind == kind && a.target.iri() == *c).count();
        ensure!(on(AnnotationKind::Describe) >= 1, "{c} has no description");
        ensure!(on(AnnotationKind::PaintText) == 0, "{c} carries a transcription");
    }
    // one canvas node per IRI, shared by both sequences
    let ids: BTreeSet<&Iri> = m.canvases.iter().map(|c| &c.id).collect();
    ensure!(ids.len() == m.canvases.len(), "duplicate canvas nodes");
    let g = model_to_graph(&m);
    for c in &current.aggregates {
        let node = Term::iri(c.as_str());
        let holders = g.subjects_with("http://www.openarchives.org/ore/terms/aggregates", &node).count();
        ensure!(holders == 2, "{c} aggregated by {holders} sequences");
    }
    let d = validate_manifest(&m);
    ensure!(!d.iter().any(|d| d.severity == Severity::Error), "errors: {d:?}");
    let warned: BTreeSet<String> = d.iter().filter(|d| d.rule == Rule::V9).map(|d| d.subject.clone()).collect();
    let expected: BTreeSet<String> = extra.iter().map(|c| c.to_string()).collect();
    ensure!(d.len() == 2 && warned == expected, "diagnostics {d:?}");
    Ok(())
}

// 6
fn bnf() -> Outcome {
    let start = Instant::now();
    let m = fixtures::bnf();
    ensure!(m.sequences.len() == 5 && m.ranges.len() == 4, "{} sequences, {} ranges", m.sequences.len(), m.ranges.len());
    let d = validate_manifest(&m);
    ensure!(!d.iter().any(|d| d.rule == Rule::V5), "V5: {d:?}");
    let single = m.sequences.iter().find(|s| s.label == "L. du Lac").ok_or("no single-volume sequence")?;
    ensure!(!m.ranges.iter().any(|r| r.sequence == single.id), "single volume has a range");
    for s in m.sequences.iter().filter(|s| s.id != single.id) {
        let range = m.ranges.iter().find(|r| r.sequence == s.id && r.label == "Content").ok_or(format!("{} has no Content range", s.id))?;
        let content: Vec<&Iri> = range.targets.iter().map(|t| &t.canvas).collect();
        let order = linearize_sequence(s, PathPolicy::FirstPath);
        let (first, last) = (order.first().unwrap(), order.last().unwrap());
        ensure!(!content.contains(&first) && !content.contains(&last), "{}: ends are in the Content range", s.label);
        // the range is exactly the sequence with its fly-leaves trimmed
        let lead = order.iter().take_while(|c| !content.contains(c)).count();
        let trail = order.iter().rev().take_while(|c| !content.contains(c)).count();
        let middle: Vec<&Iri> = order[lead..order.len() - trail].iter().collect();
        ensure!(middle == content, "{}: Content range is not the trimmed sequence", s.label);
        ensure!(lead > 0 && trail > 0, "{}: no fly-leaves", s.label);
        for fly in order[..lead].iter().chain(&order[order.len() - trail..]) {
            ensure!(!single.aggregates.contains(fly), "{fly} is a fly-leaf in the original volume");
        }
    }
    within(Duration::from_secs(1), start)
}

/// Independent placement oracle: scale a zone onto its axis-aligned
/// destination without rotation and map one corner.
fn oracle_point(zone: &Zone, dest: &Rect, p: Point) -> (Q, Q) {
    let sx = Q::new(dest.w.into(), zone.width.into());
    let sy = Q::new(dest.h.into(), zone.height.into());
    (Q::from_integer(dest.x.into()) + sx * Q::from_integer(p.x), Q::from_integer(dest.y.into()) + sy * Q::from_integer(p.y))
}

fn round(v: Q) -> i64 {
    (v + Q::new(1, 2)).floor().to_integer()
}

// 7
fn y112() -> Outcome {
    let m = fixtures::y112();
    let s = &m.sequences[0];
    let combined = linearize_sequence(s, PathPolicy::PreferCombined).len();
    let single = linearize_sequence(s, PathPolicy::PreferSinglePage).len();
    ensure!(single == combined + 1, "combined {combined}, single {single}");

    let comment = m
        .annotations
        .iter()
        .find(|a| a.kind == AnnotationKind::Comment && matches!(a.target, Target::Zone(_)))
        .ok_or("no comment on a zone")?;
    let zone = m.zone(comment.target.iri()).ok_or("comment zone missing")?;
    let region = comment.target_selector.as_ref().ok_or("comment has no region")?.bounding_box();
    let policy = ChoicePolicy::default();
    let placements: Vec<&Annotation> = m.annotations.iter().filter(|a| a.body == Body::Zone(zone.id.clone())).collect();
    ensure!(placements.len() == 2, "zone placed {} times", placements.len());
    for placement in placements {
        let canvas = m.canvas(placement.target.iri()).ok_or("placement not on a canvas")?;
        let plan = flatten_canvas(&m, &canvas.id, &policy).map_err(|e| e.to_string())?;
        let shown = plan.placements.iter().find(|p| p.origin_annotation == comment.id).ok_or(format!("comment missing from {}", canvas.id))?;
        let dest = placement.target_selector.as_ref().ok_or("placement has no region")?.bounding_box();
        let (x0, y0) = oracle_point(zone, &dest, Point::new(region.x.into(), region.y.into()));
        let (x1, y1) = oracle_point(zone, &dest, Point::new(region.right(), region.bottom()));
        let expected = Rect::new(round(x0) as u32, round(y0) as u32, (round(x1) - round(x0)) as u32, (round(y1) - round(y0)) as u32).unwrap();
        ensure!(shown.dest_region.bounding_box() == expected, "{}: {:?} != oracle {expected:?}", canvas.id, shown.dest_region);
        let exact = map_point(&shown.transform, Point::new(region.x.into(), region.y.into()));
        ensure!((exact.x, exact.y) == (x0, y0), "{}: map_point {exact:?} != oracle ({x0}, {y0})", canvas.id);
    }
    Ok(())
}

/// Independent transform oracle: 2x3 rational matrices.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Affine([Q; 6]);

impl Affine {
    fn of(t: &Transform) -> Affine {
        let z = Q::from_integer(0);
        let (sx, sy) = (t.scale_x, t.scale_y);
        // rows: x' = a x + c y + e, y' = b x + d y + f
        let (a, b, c, d) = match t.rotation {
            Rotation::R0 => (sx, z, z, sy),
            Rotation::R90 => (z, sx, -sy, z),
            Rotation::R180 => (-sx, z, z, -sy),
            Rotation::R270 => (z, -sx, sy, z),
        };
        Affine([a, b, c, d, t.translate_x, t.translate_y])
    }

    fn apply(&self, x: Q, y: Q) -> (Q, Q) {
        let [a, b, c, d, e, f] = self.0;
        (a * x + c * y + e, b * x + d * y + f)
    }
}

fn rotation_strategy() -> impl Strategy<Value = Rotation> {
    prop_oneof![Just(Rotation::R0), Just(Rotation::R90), Just(Rotation::R180), Just(Rotation::R270)]
}

fn placement_strategy() -> impl Strategy<Value = Transform> {
    (1u32..2000, 1u32..2000, 0u32..5000, 0u32..5000, 1u32..3000, 1u32..3000, rotation_strategy())
        .prop_map(|(sw, sh, x, y, w, h, r)| Transform::placement(sw, sh, &Rect::new(x, y, w, h).unwrap(), r))
}

// 8
fn transform_oracle() -> Outcome {
    let strategy = (prop::collection::vec(placement_strategy(), 1..=4), -5000i64..5000, -5000i64..5000);
    runner(1000)
        .run(&strategy, |(chain, x, y)| {
            let composed = chain.iter().fold(Transform::identity(), |acc, t| compose(&acc, t));
            let p = Point::new(x, y);
            let mut step = QPoint::from_point(p);
            let mut oracle = (Q::from_integer(x), Q::from_integer(y));
            for t in chain.iter().rev() {
                step = t.apply(step);
                oracle = Affine::of(t).apply(oracle.0, oracle.1);
            }
            let mapped = map_point(&composed, p);
            prop_assert_eq!(mapped, step);
            prop_assert_eq!((mapped.x, mapped.y), oracle);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// An IRI next to the manifest's own.
fn iri_in(m: &Manifest, local: &str) -> Iri {
    let base = &m.id.as_str()[..=m.id.as_str().rfind('/').unwrap()];
    Iri::new(format!("{base}{local}")).unwrap()
}

fn single_rule(label: &str, diagnostics: Vec<sharedcanvas::validate::Diagnostic>, rule: Rule) -> Outcome {
    ensure!(diagnostics.len() == 1 && diagnostics[0].rule == rule, "{label}: expected one {rule}, got {diagnostics:?}");
    Ok(())
}

// 9
fn mutation_suite() -> Outcome {
    let mut m = fixtures::y112();
    m.canvases.iter_mut().find(|c| c.id.as_str().ends_with("/f3r")).unwrap().width = 0;
    single_rule("V1 canvas width 0", validate_manifest(&m), Rule::V1)?;

    let mut m = fixtures::y112();
    let gone = iri_in(&m, "no-such-zone");
    m.annotations.iter_mut().find(|a| a.kind == AnnotationKind::Comment).unwrap().target = Target::Zone(gone);
    single_rule("V2 dangling comment target", validate_manifest(&m), Rule::V2)?;

    let mut m = fixtures::fragments();
    let a = m.annotations.iter_mut().find(|a| a.id.as_str().ends_with("/frag-3")).unwrap();
    a.target_selector = Some(Rect::new(900, 200, 500, 700).unwrap().into());
    single_rule("V3 image selector out of bounds", validate_manifest(&m), Rule::V3)?;

    let mut m = fixtures::y112();
    let last = iri_in(&m, "f4v");
    ensure!(m.sequences[0].aggregates.remove(&last), "f4v was not aggregated");
    single_rule("V4 aggregate dropped", validate_manifest(&m), Rule::V4)?;

    let mut m = fixtures::bnf();
    let other = m.ranges[1].targets[0].canvas.clone();
    m.ranges[0].targets[0].canvas = other;
    single_rule("V5 cross-volume range target", validate_manifest(&m), Rule::V5)?;

    let mut m = fixtures::bnf();
    let a = m.annotations.iter_mut().find(|a| matches!(a.body, Body::Choice(_))).unwrap();
    if let Body::Choice(c) = &mut a.body {
        c.options.clear();
    }
    single_rule("V6 empty choice", validate_manifest(&m), Rule::V6)?;

    let mut m = fixtures::palimpsest();
    let order = m.annotation_lists.iter_mut().find(|l| l.kind == ListKind::TextOrder).unwrap();
    order.entries.pop();
    single_rule("V7 text order entry removed", validate_manifest(&m), Rule::V7)?;

    let mut m = fixtures::palimpsest();
    m.annotations.iter_mut().find(|a| a.kind == AnnotationKind::PlaceZone).unwrap().rotation = 45;
    single_rule("V8 rotation 45", validate_manifest(&m), Rule::V8)?;

    let mut m = fixtures::y112();
    m.annotations.retain(|a| !a.id.as_str().ends_with("/img-f4v"));
    single_rule("V9 only image removed", validate_manifest(&m), Rule::V9)?;

    let mut g = model_to_graph(&fixtures::parker());
    let head = Term::iri(iri_in(&fixtures::parker(), "sequence-original").as_str());
    let mut cell = head;
    loop {
        let next = g.objects(&cell, vocab::RDF_REST).next().cloned().ok_or("list without rdf:rest")?;
        if next == Term::iri(vocab::RDF_NIL) {
            break;
        }
        cell = next;
    }
    g.triples.remove(&Triple::new(cell.clone(), vocab::RDF_REST, Term::iri(vocab::RDF_NIL)));
    g.insert(cell.clone(), vocab::RDF_REST, cell);
    single_rule("V10 rest cycle", validate_graph(&g), Rule::V10)
}

fn resolve_link(from: &str, href: &str) -> String {
    let mut parts: Vec<String> = Vec::new();
    let base = Path::new(from).parent().unwrap_or(Path::new(""));
    for c in base.join(href).components() {
        match c {
            Component::ParentDir => {
                parts.pop();
            }
            Component::Normal(p) => parts.push(p.to_string_lossy().into_owned()),
            _ => {}
        }
    }
    parts.join("/")
}

fn check_site(name: &str, plans: &[RenderPlan], files: &BTreeMap<String, String>) -> Outcome {
    let by_canvas: BTreeMap<&str, &RenderPlan> = plans.iter().map(|p| (p.canvas.id.as_str(), p)).collect();
    for (path, text) in files {
        let options = roxmltree::ParsingOptions { allow_dtd: true, ..Default::default() };
        let doc = roxmltree::Document::parse_with_options(text, options).map_err(|e| format!("{name}/{path}: {e}"))?;
        if path.ends_with(".svg") {
            let canvas = doc.root_element().attribute("data-canvas").ok_or(format!("{name}/{path}: no data-canvas"))?;
            let plan = by_canvas.get(canvas).ok_or(format!("{name}/{path}: no plan"))?;
            let drawn = doc.descendants().filter(|n| n.has_attribute("data-placement")).count();
            ensure!(drawn == plan.placements.len(), "{name}/{path}: {drawn} elements for {} placements", plan.placements.len());
        } else {
            for n in doc.descendants().filter(|n| n.is_element()) {
                for attr in ["href", "src"] {
                    if let Some(link) = n.attribute(attr) {
                        let target = resolve_link(path, link);
                        ensure!(files.contains_key(&target), "{name}/{path}: broken link {link}");
                    }
                }
            }
        }
    }
    Ok(())
}

// 10
fn render_integrity() -> Outcome {
    let start = Instant::now();
    for (name, m) in fixtures::all() {
        let plans = flatten_all(&m, &ChoicePolicy::default()).map_err(|e| format!("{name}: {e}"))?;
        for policy in PathPolicy::ALL {
            let opts = RenderOptions::default().with_path_policy(policy);
            let files = render_manifest_html(&m, &plans, &opts).map_err(|e| format!("{name}: {e}"))?;
            check_site(name, &plans, &files)?;
            ensure!(files == render_manifest_html(&m, &plans, &opts).unwrap(), "{name}: output differs between runs");
        }
    }
    within(Duration::from_secs(30), start)
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("turtle fidelity", turtle_fidelity),
        ("dual typing", dual_typing),
        ("round-trip", round_trip),
        ("fragment parser", fragment_parser),
        ("parker fixture", parker),
        ("bnf fixture", bnf),
        ("y112 fixture", y112),
        ("transform oracle", transform_oracle),
        ("validator mutation suite", mutation_suite),
        ("render integrity", render_integrity),
    ];
    // skip when libtest filters or lists (e.g. `cargo test some_name`)
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.iter().any(|a| a == "--list") {
        return;
    }
    let mut failed = 0;
    for (i, (name, criterion)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(criterion).unwrap_or_else(|_| Err("panicked".into()));
        let ms = start.elapsed().as_millis();
        match result {
            Ok(()) => println!("PASS {:>2} {name} ({ms} ms)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({ms} ms): {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
