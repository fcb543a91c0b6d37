use std::fmt::Write as _;

use num_traits::Zero;

use super::{escape_xml, num, RenderOptions};
use crate::fragments::{Rect, RegionSelector};
use crate::model::Rotation;
use crate::resolve::{round_half_up, Content, Layer, Placement, QPoint, RenderPlan, Transform, Q};

fn q(v: u32) -> Q {
    Q::from_integer(i64::from(v))
}

/// `matrix(a b c d e f)` for a transform, or `None` for the identity.
fn matrix(t: &Transform) -> Option<String> {
    if *t == Transform::identity() {
        return None;
    }
    let z = Q::zero();
    let (sx, sy) = (t.scale_x, t.scale_y);
    let (a, b, c, d) = match t.rotation {
        Rotation::R0 => (sx, z, z, sy),
        Rotation::R90 => (z, sx, -sy, z),
        Rotation::R180 => (-sx, z, z, -sy),
        Rotation::R270 => (z, -sx, sy, z),
    };
    Some(format!(
        "matrix({} {} {} {} {} {})",
        num(a),
        num(b),
        num(c),
        num(d),
        num(t.translate_x),
        num(t.translate_y)
    ))
}

fn rect_attrs(r: &Rect) -> String {
    format!(r#"x="{}" y="{}" width="{}" height="{}""#, r.x, r.y, r.w, r.h)
}

fn points(region: &RegionSelector) -> Option<String> {
    match region {
        RegionSelector::Polygon(p) => Some(p.points_attr()),
        RegionSelector::Rect(_) => None,
    }
}

fn marker_attrs(p: &Placement, index: usize) -> String {
    format!(r#"data-placement="{index}" data-annotation="{}""#, escape_xml(p.origin_annotation.as_str()))
}

/// Image drawn in its surface's coordinates: the source region (or the
/// whole image) stretched over the placement's surface region.
fn image_element(p: &Placement, out: &mut String) {
    let Content::Resource(r) = &p.content else { return };
    let dest = p.surface_region.bounding_box();
    let href = escape_xml(r.id.as_str());
    match &p.source_region {
        None => {
            let _ = write!(out, r#"<image {} preserveAspectRatio="none" xlink:href="{href}"/>"#, rect_attrs(&dest));
        }
        Some(src) => {
            let s = src.bounding_box();
            let (iw, ih) = r.size().map(|(w, h)| (i64::from(w), i64::from(h))).unwrap_or((s.right(), s.bottom()));
            let _ = write!(
                out,
                r#"<svg {} viewBox="{} {} {} {}" preserveAspectRatio="none" overflow="hidden"><image x="0" y="0" width="{iw}" height="{ih}" preserveAspectRatio="none" xlink:href="{href}"/></svg>"#,
                rect_attrs(&dest),
                s.x,
                s.y,
                s.w,
                s.h
            );
        }
    }
}

/// Text set on the top edge of its region, stretched to the region's width,
/// turned with the zone chain about the region's mapped top-left corner.
fn text_element(p: &Placement, index: usize, out: &mut String) {
    let local = p.surface_region.bounding_box();
    let anchor = p.transform.apply(QPoint::new(q(local.x), q(local.y)));
    let length = q(local.w) * p.transform.scale_x;
    let size = q(local.h) * p.transform.scale_y;
    let (x, y) = (num(anchor.x), num(anchor.y));
    let rotate = match p.rotation {
        Rotation::R0 => String::new(),
        r => format!(r#" transform="rotate({} {x} {y})""#, r.degrees()),
    };
    let source = match &p.content {
        Content::Resource(r) => format!(r#" data-source="{}""#, escape_xml(r.id.as_str())),
        Content::Inline(_) => String::new(),
    };
    let _ = write!(
        out,
        r#"<text {}{source} class="text" x="{x}" y="{y}" font-size="{}" textLength="{}" lengthAdjust="spacingAndGlyphs" dominant-baseline="hanging"{rotate}>{}</text>"#,
        marker_attrs(p, index),
        num(size),
        num(length),
        escape_xml(p.content.text().unwrap_or(""))
    );
}

fn commentary_element(p: &Placement, index: usize, out: &mut String) {
    let title = match (&p.content, p.content.text()) {
        (_, Some(t)) => t.to_string(),
        (Content::Resource(r), None) => r.id.to_string(),
        (Content::Inline(_), None) => String::new(),
    };
    let shape = match points(&p.dest_region) {
        Some(pts) => format!(r#"polygon points="{pts}""#),
        None => format!("rect {}", rect_attrs(&p.dest_region.bounding_box())),
    };
    let tag = shape.split(' ').next().unwrap_or("rect");
    let _ = write!(
        out,
        r##"<{shape} {} class="commentary" fill="none" stroke="#c0392b"><title>{}</title></{tag}>"##,
        marker_attrs(p, index),
        escape_xml(&title)
    );
}

/// One SVG 1.1 document for a plan. Each drawn placement is a single
/// top-level element carrying `data-placement` (its index in the plan),
/// emitted in paint order; layers left out of `opts` are skipped.
pub fn render_canvas_svg(plan: &RenderPlan, opts: &RenderOptions) -> String {
    let c = &plan.canvas;
    let scale = opts.scale();
    let width = round_half_up(q(c.width) * scale).max(1);
    let height = round_half_up(q(c.height) * scale).max(1);
    let drawn: Vec<(usize, &Placement)> = plan.placements.iter().enumerate().filter(|(_, p)| opts.includes(p.layer)).collect();

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" xmlns:xlink="http://www.w3.org/1999/xlink" version="1.1" width="{width}" height="{height}" viewBox="0 0 {} {}" data-canvas="{}">"#,
        c.width,
        c.height,
        escape_xml(c.id.as_str())
    );

    let clips: Vec<(usize, String)> = drawn
        .iter()
        .filter(|(_, p)| p.layer == Layer::Image)
        .filter_map(|(i, p)| points(&p.surface_region).map(|pts| (*i, pts)))
        .collect();
    if !clips.is_empty() {
        out.push_str("<defs>\n");
        for (i, pts) in &clips {
            let _ = writeln!(out, r#"<clipPath id="clip-{i}" clipPathUnits="userSpaceOnUse"><polygon points="{pts}"/></clipPath>"#);
        }
        out.push_str("</defs>\n");
    }

    for (i, p) in drawn {
        match p.layer {
            Layer::Image => {
                let transform = matrix(&p.transform).map(|m| format!(r#" transform="{m}""#)).unwrap_or_default();
                let clip = if points(&p.surface_region).is_some() { format!(r#" clip-path="url(#clip-{i})""#) } else { String::new() };
                let _ = write!(out, r#"<g {} class="image"{transform}{clip}>"#, marker_attrs(p, i));
                image_element(p, &mut out);
                out.push_str("</g>");
            }
            Layer::Text => text_element(p, i, &mut out),
            Layer::Commentary => commentary_element(p, i, &mut out),
        }
        out.push('\n');
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fragments::{Point, Polygon};
    use crate::model::*;
    use crate::resolve::{flatten_canvas, ChoicePolicy};

    fn iri(s: &str) -> Iri {
        Iri::new(format!("http://example.org/r/{s}")).unwrap()
    }

    fn plan(m: &Manifest, c: &str) -> RenderPlan {
        flatten_canvas(m, &iri(c), &ChoicePolicy::default()).unwrap()
    }

    #[test]
    fn full_canvas_image() {
        let mut b = ManifestBuilder::new(iri("m"), "m");
        let c = b.canvas(iri("c"), "c", 300, 400).unwrap();
        let img = ContentResource::image(iri("img.jpg"), "image/jpeg", Some((600, 800)));
        b.paint(iri("a"), &c, Body::Resource(img), None, None).unwrap();
        b.sequence(iri("s"), "s", vec![SequenceItem::Single(c)]).unwrap();
        let m = b.build().unwrap();
        let svg = render_canvas_svg(&plan(&m, "c"), &RenderOptions::default());
        assert!(svg.contains(r#"width="300" height="400" viewBox="0 0 300 400""#));
        assert!(svg.contains(r#"<image x="0" y="0" width="300" height="400" preserveAspectRatio="none" xlink:href="http://example.org/r/img.jpg"/>"#));
        assert!(!svg.contains("transform="));
    }

    #[test]
    fn scale_changes_display_size_only() {
        let mut b = ManifestBuilder::new(iri("m"), "m");
        let c = b.canvas(iri("c"), "c", 300, 401).unwrap();
        b.sequence(iri("s"), "s", vec![SequenceItem::Single(c)]).unwrap();
        let m = b.build().unwrap();
        let opts = RenderOptions::new(Q::new(1, 2), [Layer::Image].into(), Default::default()).unwrap();
        let svg = render_canvas_svg(&plan(&m, "c"), &opts);
        assert!(svg.contains(r#"width="150" height="201" viewBox="0 0 300 401""#));
    }

    #[test]
    fn polygon_crop_and_rotated_text() {
        let mut b = ManifestBuilder::new(iri("m"), "m");
        let c = b.canvas(iri("c"), "c", 300, 400).unwrap();
        let z = b.zone(iri("z"), 400, 300).unwrap();
        let img = ContentResource::image(iri("frag.jpg"), "image/jpeg", Some((1000, 1000)));
        let poly = Polygon::new(vec![Point::new(10, 10), Point::new(200, 20), Point::new(100, 300)]).unwrap();
        b.paint(iri("i"), &c, Body::Resource(img), Some(poly.into()), Some(Rect::new(100, 100, 500, 500).unwrap().into()))
            .unwrap();
        b.paint(iri("t"), &z, Body::Inline("under <text>".into()), Some(Rect::new(0, 0, 400, 30).unwrap().into()), None)
            .unwrap();
        b.place_zone(iri("p"), &z, &c, Rect::new(0, 0, 300, 400).unwrap().into(), Rotation::R90).unwrap();
        b.list(iri("o"), ListKind::TextOrder, vec![iri("t")]).unwrap();
        b.sequence(iri("s"), "s", vec![SequenceItem::Single(c)]).unwrap();
        let m = b.build().unwrap();
        let svg = render_canvas_svg(&plan(&m, "c"), &RenderOptions::default());
        assert!(svg.contains(r#"<clipPath id="clip-0" clipPathUnits="userSpaceOnUse"><polygon points="10,10 200,20 100,300"/></clipPath>"#));
        assert!(svg.contains(r#"clip-path="url(#clip-0)""#));
        assert!(svg.contains(r#"viewBox="100 100 500 500""#));
        // zone origin lands on the canvas's top-right corner
        assert!(svg.contains(r#"x="300" y="0" font-size="30" textLength="400""#));
        assert!(svg.contains(r#"transform="rotate(90 300 0)""#));
        assert!(svg.contains("under &lt;text&gt;"));
    }

    #[test]
    fn matrices() {
        assert_eq!(matrix(&Transform::identity()), None);
        let t = Transform::placement(400, 300, &Rect::new(0, 0, 300, 400).unwrap(), Rotation::R90);
        assert_eq!(matrix(&t).unwrap(), "matrix(0 1 -1 0 300 0)");
        let t = Transform::placement(400, 600, &Rect::new(800, 0, 800, 1200).unwrap(), Rotation::R0);
        assert_eq!(matrix(&t).unwrap(), "matrix(2 0 0 2 800 0)");
    }
}
