use std::collections::BTreeMap;

use proptest::prelude::*;

use sharedcanvas::description::{description_of, ingest, parse_description, to_json};
use sharedcanvas::fixtures;
use sharedcanvas::fragments::{parse_svg_polygon, selector_within, Point, Polygon, Rect, RegionSelector};
use sharedcanvas::model::*;
use sharedcanvas::rdf::{graph_to_model, model_to_graph, parse_turtle, serialize_turtle, Graph, Term};
use sharedcanvas::resolve::*;
use sharedcanvas::validate::validate_manifest;

/// Canonical text of a graph whose blank nodes form trees hanging off IRIs
/// (or free-standing roots): every blank is replaced by the sorted text of
/// what it says, recursively. Two such graphs are isomorphic exactly when
/// their canonical texts are equal.
fn canonical(g: &Graph) -> Vec<String> {
    fn term(g: &Graph, t: &Term, depth: usize) -> String {
        match t {
            Term::Blank(_) if depth < 64 => {
                let mut parts: Vec<String> = g.about(t).map(|x| format!("{} {}", x.predicate, term(g, &x.object, depth + 1))).collect();
                parts.sort();
                format!("[{}]", parts.join("; "))
            }
            Term::Blank(_) => "[...]".into(),
            other => other.to_string(),
        }
    }
    let referenced: Vec<&Term> = g.triples.iter().map(|t| &t.object).filter(|o| o.is_blank()).collect();
    let mut out: Vec<String> = g
        .triples
        .iter()
        .filter(|t| !t.subject.is_blank() || !referenced.contains(&&t.subject))
        .map(|t| match &t.subject {
            Term::Blank(_) => format!("root {}", term(g, &t.subject, 0)),
            s => format!("{s} {} {}", t.predicate, term(g, &t.object, 0)),
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

#[test]
fn fixture_graphs_are_isomorphic_after_reparse() {
    for (name, m) in fixtures::all() {
        let g = model_to_graph(&m);
        let back = parse_turtle(&serialize_turtle(&g)).unwrap();
        assert_eq!(back.len(), g.len(), "{name}");
        assert_eq!(canonical(&back), canonical(&g), "{name}");
    }
}

#[test]
fn descriptions_rebuild_fixtures() {
    for (name, m) in fixtures::all() {
        let json = to_json(&description_of(&m).unwrap());
        assert_eq!(ingest(&parse_description(&json).unwrap()).unwrap(), m, "{name}");
        assert_eq!(to_json(&description_of(&m).unwrap()), json, "{name}: description output is not deterministic");
    }
}

fn rect_in(w: u32, h: u32) -> impl Strategy<Value = Rect> {
    (0..w, 0..h).prop_flat_map(move |(x, y)| (Just(x), Just(y), 1..=w - x, 1..=h - y)).prop_map(|(x, y, w, h)| Rect::new(x, y, w, h).unwrap())
}

fn rotation() -> impl Strategy<Value = Rotation> {
    prop_oneof![Just(Rotation::R0), Just(Rotation::R90), Just(Rotation::R180), Just(Rotation::R270)]
}

fn ex(s: &str) -> Iri {
    Iri::new(format!("http://example.org/p/{s}")).unwrap()
}

/// A canvas with a zone placed on it and one comment region on the zone.
fn placed_zone() -> impl Strategy<Value = (Manifest, Rect)> {
    (50u32..2000, 50u32..2000, 10u32..1500, 10u32..1500, rotation())
        .prop_flat_map(|(cw, ch, zw, zh, rot)| (Just((cw, ch, zw, zh, rot)), rect_in(cw, ch), rect_in(zw, zh)))
        .prop_map(|((cw, ch, zw, zh, rot), dest, mark)| {
            let mut b = ManifestBuilder::new(ex("m"), "m");
            let c = b.canvas(ex("c"), "c", cw.into(), ch.into()).unwrap();
            let z = b.zone(ex("z"), zw.into(), zh.into()).unwrap();
            let img = ContentResource::image(ex("img"), "image/jpeg", Some((zw, zh)));
            b.paint(ex("i"), &z, Body::Resource(img), None, None).unwrap();
            b.place_zone(ex("p"), &z, &c, dest.into(), rot).unwrap();
            b.comment(ex("note"), &z, Body::Inline("note".into()), Some(mark.into()), None).unwrap();
            b.sequence(ex("s"), "s", vec![SequenceItem::Single(c)]).unwrap();
            (b.build().unwrap(), dest)
        })
}

proptest! {
    #[test]
    fn polygon_points_round_trip(points in prop::collection::vec((0i64..10_000, 0i64..10_000), 3..12)) {
        let vertices: Vec<Point> = points.iter().map(|&(x, y)| Point::new(x, y)).collect();
        if let Ok(poly) = Polygon::new(vertices) {
            prop_assert_eq!(parse_svg_polygon(&poly.points_attr()).unwrap(), poly);
        }
    }

    #[test]
    fn bounding_box_contains_region(r in rect_in(5000, 5000)) {
        let sel: RegionSelector = r.into();
        prop_assert_eq!(sel.bounding_box(), r);
        prop_assert!(selector_within(&sel, r.x + r.w, r.y + r.h));
    }

    #[test]
    fn placed_content_stays_inside_its_destination((m, dest) in placed_zone()) {
        prop_assert!(validate_manifest(&m).is_empty());
        let plan = flatten_canvas(&m, &ex("c"), &ChoicePolicy::default()).unwrap();
        prop_assert_eq!(plan.placements.len(), 2);
        for p in &plan.placements {
            let b = p.dest_region.bounding_box();
            prop_assert!(b.x >= dest.x && b.y >= dest.y, "{:?} outside {:?}", b, dest);
            prop_assert!(b.x + b.w <= dest.x + dest.w && b.y + b.h <= dest.y + dest.h, "{:?} outside {:?}", b, dest);
        }
        // the image fills the destination exactly
        prop_assert_eq!(plan.placements[0].dest_region.bounding_box(), dest);
    }

    #[test]
    fn compose_is_associative(
        a in (1u32..500, 1u32..500, rect_in(800, 800), rotation()),
        b in (1u32..500, 1u32..500, rect_in(800, 800), rotation()),
        c in (1u32..500, 1u32..500, rect_in(800, 800), rotation()),
    ) {
        let t = |(w, h, r, rot): (u32, u32, Rect, Rotation)| Transform::placement(w, h, &r, rot);
        let (a, b, c) = (t(a), t(b), t(c));
        prop_assert_eq!(compose(&compose(&a, &b), &c), compose(&a, &compose(&b, &c)));
        prop_assert_eq!(compose(&a, &Transform::identity()), a);
    }

    #[test]
    fn generated_manifests_round_trip(
        pages in prop::collection::vec((1u32..3000, 1u32..3000, "[a-z ]{0,12}"), 1..6),
        meta in prop::collection::btree_map("[a-z]{1,6}", "[ -~]{0,10}", 0..3),
        with_alternative in any::<bool>(),
    ) {
        let mut b = ManifestBuilder::new(ex("manifest"), "generated \"manifest\"");
        for (k, v) in &meta {
            b.metadata(k.clone(), v.clone());
        }
        let ids: Vec<Iri> = pages
            .iter()
            .enumerate()
            .map(|(i, (w, h, label))| b.canvas(ex(&format!("c{i}")), label.clone(), (*w).into(), (*h).into()).unwrap())
            .collect();
        for (i, c) in ids.iter().enumerate() {
            let (w, h, _) = pages[i];
            let img = ContentResource::image(Iri::new(format!("http://img.example.org/{i}.jpg")).unwrap(), "image/jpeg", Some((w, h)));
            b.paint(ex(&format!("a{i}")), c, Body::Resource(img), None, None).unwrap();
        }
        let mut items: Vec<SequenceItem> = ids.iter().cloned().map(SequenceItem::Single).collect();
        if with_alternative && items.len() >= 3 {
            let tail = items.split_off(items.len() - 2);
            let paths = tail.into_iter().map(|i| match i {
                SequenceItem::Single(c) => vec![c],
                other => other.canvases().into_iter().cloned().collect(),
            });
            items.push(SequenceItem::Alternatives(paths.collect()));
        }
        b.sequence(ex("seq"), "s", items).unwrap();
        let m = b.build().unwrap();

        let text = serialize_turtle(&model_to_graph(&m));
        let g = parse_turtle(&text).unwrap();
        prop_assert_eq!(&serialize_turtle(&g), &text);
        prop_assert_eq!(graph_to_model(&g).unwrap(), m);
    }

    #[test]
    fn escaped_strings_survive(s in "[ -~\\n\\t\"\\\\é]{0,40}") {
        let mut b = ManifestBuilder::new(ex("m"), s.clone());
        let c = b.canvas(ex("c"), s.clone(), 10, 10).unwrap();
        b.sequence(ex("s"), s.clone(), vec![SequenceItem::Single(c)]).unwrap();
        let m = b.build().unwrap();
        let back = graph_to_model(&parse_turtle(&serialize_turtle(&model_to_graph(&m))).unwrap()).unwrap();
        prop_assert_eq!(back, m);
    }
}

#[test]
fn choice_policy_prefers_metadata_then_viewport() {
    let m = fixtures::palimpsest();
    let zone_image = m.annotations.iter().find(|a| matches!(a.body, Body::Choice(_))).unwrap();
    let Body::Choice(choice) = &zone_image.body else { unreachable!() };
    let raking = ChoicePolicy { viewport: None, prefer: vec![("lighting".into(), "raking".into())] };
    assert_eq!(select_from_choice(choice, &raking).metadata["lighting"], "raking");
    assert_eq!(select_from_choice(choice, &ChoicePolicy::default()).id, choice.options[0].id);

    let bnf = fixtures::bnf();
    let Body::Choice(pages) = &bnf.annotations.iter().find(|a| matches!(a.body, Body::Choice(_))).unwrap().body else { unreachable!() };
    let small = ChoicePolicy { viewport: Some((200, 200)), prefer: vec![] };
    assert_eq!(select_from_choice(pages, &small).metadata, BTreeMap::from([("quality".to_string(), "thumbnail".to_string())]));
    let large = ChoicePolicy { viewport: Some((1000, 1400)), prefer: vec![] };
    assert_eq!(select_from_choice(pages, &large).metadata["quality"], "full");
}

#[test]
fn reading_order_follows_the_text_order_list() {
    let m = fixtures::palimpsest();
    let plan = flatten_canvas(&m, &m.canvases[0].id, &ChoicePolicy::default()).unwrap();
    let locals: Vec<&str> = plan.reading_order.iter().map(|i| i.as_str().rsplit('/').next().unwrap()).collect();
    assert_eq!(locals, ["line-1", "line-2", "interlinear", "line-3", "margin", "under-1"]);
    assert!(plan.warnings.is_empty());
}
