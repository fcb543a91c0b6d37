use std::collections::BTreeMap;

use roxmltree::{Document, Node, ParsingOptions};

use sharedcanvas::fixtures;
use sharedcanvas::fragments::RegionSelector;
use sharedcanvas::model::{AnnotationKind, Body, Iri, Manifest, Target};
use sharedcanvas::render::{render_canvas_svg, render_manifest_html, RenderOptions};
use sharedcanvas::resolve::{flatten_all, flatten_canvas, linearize_sequence, ChoicePolicy, PathPolicy};

fn local(m: &Manifest, name: &str) -> Iri {
    let base = &m.id.as_str()[..=m.id.as_str().rfind('/').unwrap()];
    Iri::new(format!("{base}{name}")).unwrap()
}

fn svg_for(m: &Manifest, canvas: &str) -> String {
    let plan = flatten_canvas(m, &local(m, canvas), &ChoicePolicy::default()).unwrap();
    render_canvas_svg(&plan, &RenderOptions::default())
}

fn site(m: &Manifest) -> BTreeMap<String, String> {
    let plans = flatten_all(m, &ChoicePolicy::default()).unwrap();
    render_manifest_html(m, &plans, &RenderOptions::default()).unwrap()
}

fn parse(text: &str) -> Document<'_> {
    Document::parse_with_options(text, ParsingOptions { allow_dtd: true, ..Default::default() }).unwrap()
}

fn links<'a>(doc: &'a Document<'a>, nav_class: &str) -> Vec<(&'a str, String)> {
    doc.descendants()
        .filter(|n| n.has_tag_name("nav") && n.attribute("class") == Some(nav_class))
        .flat_map(|nav| nav.descendants().filter(|n| n.has_tag_name("a")))
        .map(|a| (a.attribute("href").unwrap(), a.text().unwrap_or_default().to_string()))
        .collect()
}

#[test]
fn reconstructed_page_clips_each_fragment() {
    let m = fixtures::fragments();
    let svg = svg_for(&m, "page-a");
    let doc = parse(&svg);
    let images: Vec<Node> = doc.descendants().filter(|n| n.attribute("class") == Some("image")).collect();
    assert_eq!(images.len(), 2);

    let polygons = m
        .annotations
        .iter()
        .filter(|a| a.kind == AnnotationKind::PaintImage && matches!(&a.target, Target::Canvas(c) if *c == local(&m, "page-a")))
        .filter(|a| matches!(a.target_selector, Some(RegionSelector::Polygon(_))))
        .count();
    let clips: Vec<Node> = doc.descendants().filter(|n| n.has_tag_name("clipPath")).collect();
    assert_eq!(clips.len(), polygons);
    for g in images {
        let url = g.attribute("clip-path").unwrap();
        let id = url.trim_start_matches("url(#").trim_end_matches(')');
        assert!(clips.iter().any(|c| c.attribute("id") == Some(id)), "{url} has no clipPath");
    }
}

#[test]
fn rotated_text_is_anchored_at_the_mapped_corner() {
    let m = fixtures::palimpsest();
    let under = m.annotations.iter().find(|a| a.id == local(&m, "anno/under-1")).unwrap();
    let Some(RegionSelector::Rect(r)) = &under.target_selector else { panic!("undertext line is not a rectangle") };
    let placement = m.annotations.iter().find(|a| a.kind == AnnotationKind::PlaceZone).unwrap();
    let Some(RegionSelector::Rect(dest)) = &placement.target_selector else { panic!() };
    let Body::Zone(zone_id) = &placement.body else { panic!("placement without a zone") };
    let zone = m.zones.iter().find(|z| z.id == *zone_id).unwrap();
    assert_eq!(placement.rotation, 90);

    // a quarter turn clockwise sends the zone's width down the canvas and its
    // top edge to the right-hand side of the destination
    let (sx, sy) = (dest.w as f64 / zone.height as f64, dest.h as f64 / zone.width as f64);
    let anchor_x = dest.x as f64 + dest.w as f64 - r.y as f64 * sx;
    let anchor_y = dest.y as f64 + r.x as f64 * sy;

    let svg = svg_for(&m, "f12r");
    let doc = parse(&svg);
    let text = doc.descendants().find(|n| n.attribute("data-annotation") == Some(under.id.as_str())).unwrap();
    let num = |k: &str| text.attribute(k).unwrap().parse::<f64>().unwrap();
    assert_eq!((num("x"), num("y")), (anchor_x, anchor_y));
    assert_eq!(num("font-size"), r.h as f64 * sx);
    assert_eq!(num("textLength"), r.w as f64 * sy);
    assert_eq!(text.attribute("transform"), Some(format!("rotate(90 {anchor_x} {anchor_y})").as_str()));
}

#[test]
fn contents_skip_the_fly_leaves() {
    let m = fixtures::bnf();
    let files = site(&m);
    let index = parse(&files["index.html"]);
    let toc = links(&index, "toc");
    assert_eq!(toc.len(), m.ranges.len());
    for ((href, label), range) in toc.iter().zip(&m.ranges) {
        assert_eq!(label, "Content");
        let seq = m.sequences.iter().find(|s| s.id == range.sequence).unwrap();
        let order = linearize_sequence(seq, PathPolicy::FirstPath);
        let first_content = &order[fixtures::BNF_FLY_LEAVES_PER_END];
        let n = m.canvases.iter().position(|c| c.id == *first_content).unwrap() + 1;
        assert_eq!(*href, format!("canvas/{n}.html"));
    }
}

#[test]
fn spread_and_pages_link_to_each_other() {
    let m = fixtures::y112();
    let files = site(&m);
    let number = |name: &str| m.canvases.iter().position(|c| c.id == local(&m, name)).unwrap() + 1;
    let (spread, f3v, f4r) = (number("spread-f3v-f4r"), number("f3v"), number("f4r"));

    let page = parse(&files[&format!("canvas/{spread}.html")]);
    let related: Vec<&str> = links(&page, "related").into_iter().map(|(h, _)| h).collect();
    assert_eq!(related, [format!("../canvas/{f3v}.html"), format!("../canvas/{f4r}.html")]);
    for n in [f3v, f4r] {
        let page = parse(&files[&format!("canvas/{n}.html")]);
        let related: Vec<&str> = links(&page, "related").into_iter().map(|(h, _)| h).collect();
        assert_eq!(related, [format!("../canvas/{spread}.html")]);
    }

    // the spread follows f3r in the first path, the separate pages in the other
    let f3r = number("f3r");
    let first = parse(&files[&format!("canvas/{f3r}.html")]);
    let nexts: Vec<String> = links(&first, "sequence").into_iter().map(|(h, _)| h.to_string()).collect();
    assert!(nexts.contains(&format!("../canvas/{spread}.html")), "{nexts:?}");
    assert!(nexts.contains(&format!("../canvas/{f3v}.html")), "{nexts:?}");
}

#[test]
fn layers_and_scale_shape_the_output() {
    let m = fixtures::y112();
    let plan = flatten_canvas(&m, &local(&m, "spread-f3v-f4r"), &ChoicePolicy::default()).unwrap();
    let all = render_canvas_svg(&plan, &RenderOptions::default());
    let doc = parse(&all);
    assert_eq!(doc.descendants().filter(|n| n.attribute("data-placement").is_some()).count(), plan.placements.len());

    let layers = [sharedcanvas::resolve::Layer::Image].into_iter().collect();
    let opts = RenderOptions::new(sharedcanvas::resolve::Q::new(1, 4), layers, PathPolicy::FirstPath).unwrap();
    let images_only = render_canvas_svg(&plan, &opts);
    let doc = parse(&images_only);
    let root = doc.root_element();
    assert_eq!((root.attribute("width"), root.attribute("height")), (Some("400"), Some("300")));
    assert_eq!(root.attribute("viewBox"), Some("0 0 1600 1200"));
    assert!(doc.descendants().filter(|n| n.attribute("data-placement").is_some()).all(|n| n.attribute("class") == Some("image")));
}
