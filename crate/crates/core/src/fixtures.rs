//! Worked example manuscripts.
//!
//! Geometry is invented but fixed: it only has to be self-consistent, and
//! tests derive their expectations from these builders rather than from
//! real page sizes. Annotations are declared images first, then texts, then
//! zone placements (zone by zone), then commentary, which is the order the
//! JSON description format uses.
//!
//! | fixture | what it exercises |
//! |---------|-------------------|
//! | [`fragments`] | polygon placements from two source images, disputed attribution, a described lost region |
//! | [`y112`] | a spread canvas and its two pages sharing zones, alternative reading paths |
//! | [`parker`] | a removed leaf: current and original sequences, descriptions on imageless canvases |
//! | [`bnf`] | four rebound volumes plus the original single volume, per-volume content ranges, image choices |
//! | [`palimpsest`] | a perpendicular undertext zone, interlinear and marginal lines in an explicit reading order |

use crate::fragments::{parse_svg_polygon, Rect, RegionSelector};
use crate::model::*;

fn iri(s: &str) -> Iri {
    Iri::new(s).expect("fixture IRIs are absolute")
}

/// IRIs under `http://example.org/<name>/`, images under
/// `http://images.example.org/<name>/`.
struct Names {
    base: String,
    images: String,
}

impl Names {
    fn new(name: &str) -> Self {
        Names { base: format!("http://example.org/{name}/"), images: format!("http://images.example.org/{name}/") }
    }

    fn at(&self, local: &str) -> Iri {
        iri(&format!("{}{local}", self.base))
    }

    fn image(&self, file: &str) -> Iri {
        iri(&format!("{}{file}", self.images))
    }
}

fn rect(x: u32, y: u32, w: u32, h: u32) -> RegionSelector {
    Rect::new(x, y, w, h).expect("fixture rectangles are non-empty").into()
}

fn polygon(points: &str) -> RegionSelector {
    parse_svg_polygon(points).expect("fixture polygons are valid").into()
}

fn jpeg(id: Iri, w: u32, h: u32) -> Body {
    Body::Resource(ContentResource::image(id, "image/jpeg", Some((w, h))))
}

fn inline(s: &str) -> Body {
    Body::Inline(s.to_string())
}

/// A reconstructed page assembled from fragments: two polygonal pieces
/// from different photographs, a described lost portion, and one piece
/// whose placement on a second page is disputed.
pub fn fragments() -> Manifest {
    let n = Names::new("fragments");
    let mut b = ManifestBuilder::new(n.at("manifest"), "Collected fragments");
    b.metadata("shelfmark", "Cod. Sang. 1394");
    let a = b.canvas(n.at("page-a"), "Reconstructed page A", 1000, 1400).unwrap();
    let pb = b.canvas(n.at("page-b"), "Reconstructed page B", 1000, 1400).unwrap();
    let slide = || jpeg(n.image("slide-63.jpg"), 3000, 2000);

    b.paint(
        n.at("anno/frag-1"),
        &a,
        jpeg(n.image("frag-1.jpg"), 1200, 900),
        Some(polygon("100,100 600,80 650,500 120,560")),
        Some(rect(100, 100, 600, 500)),
    )
    .unwrap();
    b.paint(n.at("anno/frag-2"), &a, slide(), Some(polygon("300,800 900,760 880,1300 280,1250")), Some(rect(1800, 200, 700, 600)))
        .unwrap();
    b.attribute_last(Some("Scholar A".into()), Some("probable".into()));
    b.paint(n.at("anno/frag-3"), &pb, slide(), Some(rect(200, 200, 500, 700)), Some(rect(200, 900, 500, 700))).unwrap();
    b.attribute_last(Some("Scholar B".into()), Some("possible".into()));
    b.describe(
        n.at("anno/lost"),
        &a,
        inline("Lost portion of the leaf; the hymn presumably continued here."),
        Some(polygon("660,100 950,100 960,700 680,720")),
        Some("Scholar A".into()),
    )
    .unwrap();

    b.sequence(n.at("sequence"), "Reconstruction", vec![SequenceItem::Single(a), SequenceItem::Single(pb)]).unwrap();
    b.build().unwrap()
}

/// A map drawn across an opening. The spread is photographed as one canvas
/// and the two pages as their own canvases; each page's content sits on a
/// zone placed both on its page and on its half of the spread.
pub fn y112() -> Manifest {
    let n = Names::new("y112");
    let mut b = ManifestBuilder::new(n.at("manifest"), "Y112");
    let f3r = b.canvas(n.at("f3r"), "f. 3r", 800, 1200).unwrap();
    let f3v = b.canvas(n.at("f3v"), "f. 3v", 800, 1200).unwrap();
    let f4r = b.canvas(n.at("f4r"), "f. 4r", 800, 1200).unwrap();
    let f4v = b.canvas(n.at("f4v"), "f. 4v", 800, 1200).unwrap();
    let spread = b.canvas(n.at("spread-f3v-f4r"), "f. 3v-4r (spread)", 1600, 1200).unwrap();
    let z3v = b.zone(n.at("zone-f3v"), 400, 600).unwrap();
    let z4r = b.zone(n.at("zone-f4r"), 400, 600).unwrap();

    b.paint(n.at("anno/img-f3r"), &f3r, jpeg(n.image("f3r.jpg"), 2400, 3600), None, None).unwrap();
    b.paint(n.at("anno/img-f3v"), &z3v, jpeg(n.image("f3v.jpg"), 2400, 3600), None, None).unwrap();
    b.paint(n.at("anno/img-f4r"), &z4r, jpeg(n.image("f4r.jpg"), 2400, 3600), None, None).unwrap();
    b.paint(n.at("anno/img-f4v"), &f4v, jpeg(n.image("f4v.jpg"), 2400, 3600), None, None).unwrap();
    b.paint(n.at("anno/legend"), &z4r, inline("Situs Monasterij Sanctae Mariae"), Some(rect(20, 520, 360, 40)), None)
        .unwrap();

    b.place_zone(n.at("anno/place-f3v-page"), &z3v, &f3v, rect(0, 0, 800, 1200), Rotation::R0).unwrap();
    b.place_zone(n.at("anno/place-f3v-spread"), &z3v, &spread, rect(0, 0, 800, 1200), Rotation::R0).unwrap();
    b.place_zone(n.at("anno/place-f4r-page"), &z4r, &f4r, rect(0, 0, 800, 1200), Rotation::R0).unwrap();
    b.place_zone(n.at("anno/place-f4r-spread"), &z4r, &spread, rect(800, 0, 800, 1200), Rotation::R0).unwrap();

    b.comment(n.at("anno/compass"), &z4r, inline("Compass rose drawn across the fold."), Some(rect(10, 10, 100, 50)), None)
        .unwrap();

    b.list(n.at("text-order"), ListKind::TextOrder, vec![n.at("anno/legend")]).unwrap();
    b.sequence(
        n.at("sequence"),
        "Y112",
        vec![
            SequenceItem::Single(f3r),
            SequenceItem::Alternatives(vec![vec![spread], vec![f3v, f4r]]),
            SequenceItem::Single(f4v),
        ],
    )
    .unwrap();
    b.build().unwrap()
}

/// A gospel book missing a leaf between its second and third pages. The
/// current binding has four pages; the original adds the two sides of the
/// lost leaf, known only from descriptions.
pub fn parker() -> Manifest {
    let n = Names::new("parker");
    let mut b = ManifestBuilder::new(n.at("manifest"), "Parker CCC 286");
    let pages: Vec<Iri> = ["1", "2", "3", "4"]
        .iter()
        .map(|p| b.canvas(n.at(&format!("canvas-{p}")), format!("Canvas {p}"), 600, 900).unwrap())
        .collect();
    let c2a = b.canvas(n.at("canvas-2a"), "Canvas 2a", 600, 900).unwrap();
    let c2b = b.canvas(n.at("canvas-2b"), "Canvas 2b", 600, 900).unwrap();

    for (i, c) in pages.iter().enumerate() {
        let k = i + 1;
        b.paint(n.at(&format!("anno/img-{k}")), c, jpeg(n.image(&format!("page-{k}.jpg")), 1800, 2700), None, None).unwrap();
    }
    let lines = [
        "Incipit prologus",
        "Matheus ex iudaeis sicut in ordine primus ponitur",
        "Liber generationis Iesu Christi",
        "Christi autem generatio sic erat",
    ];
    for (i, (c, line)) in pages.iter().zip(lines).enumerate() {
        b.paint(n.at(&format!("anno/text-{}", i + 1)), c, inline(line), Some(rect(60, 80, 480, 40)), None).unwrap();
    }
    b.describe(n.at("anno/describe-2a"), &c2a, inline("Recto of the removed leaf; its text is not recorded."), None, None)
        .unwrap();
    b.describe(
        n.at("anno/describe-2b"),
        &c2b,
        inline("Verso of the removed leaf: an illustrated frontispiece to the Gospel of Matthew."),
        None,
        None,
    )
    .unwrap();

    b.list(n.at("text-order"), ListKind::TextOrder, (1..=4).map(|k| n.at(&format!("anno/text-{k}"))).collect()).unwrap();
    let single = |c: &Iri| SequenceItem::Single(c.clone());
    b.sequence(n.at("sequence-current"), "286 Curr", pages.iter().map(single).collect()).unwrap();
    let original = [&pages[0], &pages[1], &c2a, &c2b, &pages[2], &pages[3]];
    b.sequence(n.at("sequence-original"), "286 Orig", original.into_iter().map(single).collect()).unwrap();
    b.build().unwrap()
}

/// Content folios per volume in [`bnf`].
pub const BNF_CONTENT_PER_VOLUME: usize = 4;
/// Fly-leaf canvases at each end of a volume in [`bnf`].
pub const BNF_FLY_LEAVES_PER_END: usize = 2;

/// One romance rebound into four volumes. Each volume has its own sequence
/// with fly-leaves added at both ends and a "Content" range skipping them;
/// a fifth sequence restores the original single volume. Content pages
/// offer a full-size and a thumbnail image.
pub fn bnf() -> Manifest {
    let n = Names::new("bnf");
    let mut b = ManifestBuilder::new(n.at("manifest"), "Lancelot du Lac");
    b.metadata("shelfmarks", "Fonds Francais 113-116");
    let volumes = [113, 114, 115, 116];
    let mut folio = 0;
    // (volume, canvases in binding order, content canvases)
    let mut bound: Vec<(u32, Vec<Iri>, Vec<Iri>)> = Vec::new();
    for v in volumes {
        let fly = |b: &mut ManifestBuilder, tag: &str, i: usize| {
            b.canvas(n.at(&format!("v{v}-fly-{tag}{i}")), format!("{v} fly-leaf {tag}{i}"), 700, 1000).unwrap()
        };
        let front: Vec<Iri> = (1..=BNF_FLY_LEAVES_PER_END).map(|i| fly(&mut b, "front", i)).collect();
        let mut content = Vec::new();
        for _ in 0..BNF_CONTENT_PER_VOLUME / 2 {
            folio += 1;
            for side in ["r", "v"] {
                content.push(b.canvas(n.at(&format!("f{folio}{side}")), format!("f. {folio}{side}"), 700, 1000).unwrap());
            }
        }
        let back: Vec<Iri> = (1..=BNF_FLY_LEAVES_PER_END).map(|i| fly(&mut b, "back", i)).collect();
        let all = front.into_iter().chain(content.iter().cloned()).chain(back).collect();
        bound.push((v, all, content));
    }

    for (_, all, content) in &bound {
        for c in all {
            let local = c.as_str().rsplit('/').next().unwrap_or_default().to_string();
            let anno = n.at(&format!("anno/img-{local}"));
            if content.contains(c) {
                let full = ContentResource::image(n.image(&format!("{local}.jpg")), "image/jpeg", Some((2100, 3000)))
                    .with_metadata("quality", "full");
                let thumb = ContentResource::image(n.image(&format!("{local}-thumb.jpg")), "image/jpeg", Some((210, 300)))
                    .with_metadata("quality", "thumbnail");
                let choice = make_choice(n.at(&format!("choice-{local}")), ChoiceKind::ImageChoice, vec![full, thumb], vec![]).unwrap();
                b.paint(anno, c, Body::Choice(choice), None, None).unwrap();
            } else {
                b.paint(anno, c, jpeg(n.image(&format!("{local}.jpg")), 2100, 3000), None, None).unwrap();
            }
        }
    }

    for (v, all, _) in &bound {
        let items = all.iter().cloned().map(SequenceItem::Single).collect();
        b.sequence(n.at(&format!("sequence-{v}")), format!("f.fr. {v}"), items).unwrap();
    }
    let original = bound.iter().flat_map(|(_, _, content)| content.iter().cloned()).map(SequenceItem::Single).collect();
    b.sequence(n.at("sequence-original"), "L. du Lac", original).unwrap();
    for (v, _, content) in &bound {
        let targets = content.iter().cloned().map(RangeTarget::whole).collect();
        b.range(n.at(&format!("range-{v}-content")), "Content", &n.at(&format!("sequence-{v}")), targets).unwrap();
    }
    b.build().unwrap()
}

/// A reused leaf: the later text runs across the page with an interlinear
/// insertion and a marginal note, while the erased earlier text runs
/// perpendicular to it on a zone turned a quarter clockwise. The undertext
/// image is offered under two lightings.
pub fn palimpsest() -> Manifest {
    let n = Names::new("palimpsest");
    let mut b = ManifestBuilder::new(n.at("manifest"), "Palimpsest leaf");
    let recto = b.canvas(n.at("f12r"), "f. 12r", 800, 1200).unwrap();
    let verso = b.canvas(n.at("f12v"), "f. 12v", 800, 1200).unwrap();
    let under = b.zone(n.at("undertext"), 1000, 600).unwrap();

    b.paint(n.at("anno/img-f12r"), &recto, jpeg(n.image("f12r.jpg"), 1600, 2400), None, None).unwrap();
    b.paint(n.at("anno/img-f12v"), &verso, jpeg(n.image("f12v.jpg"), 1600, 2400), None, None).unwrap();
    let uv = ContentResource::image(n.image("f12r-uv.jpg"), "image/tiff", Some((2000, 1200))).with_metadata("lighting", "ultraviolet");
    let raking = ContentResource::image(n.image("f12r-raking.jpg"), "image/tiff", Some((2000, 1200))).with_metadata("lighting", "raking");
    let choice = make_choice(n.at("choice-undertext"), ChoiceKind::ImageChoice, vec![uv, raking], vec![]).unwrap();
    b.paint(n.at("anno/img-undertext"), &under, Body::Choice(choice), None, None).unwrap();

    b.paint(n.at("anno/line-1"), &recto, inline("In principio erat verbum"), Some(rect(100, 150, 600, 50)), None).unwrap();
    b.paint(n.at("anno/line-2"), &recto, inline("et verbum erat apud deum"), Some(rect(100, 250, 600, 50)), None).unwrap();
    b.paint(n.at("anno/line-3"), &recto, inline("hoc erat in principio apud deum"), Some(rect(100, 350, 600, 50)), None)
        .unwrap();
    b.paint(n.at("anno/interlinear"), &recto, inline("et deus erat verbum"), Some(rect(150, 305, 400, 30)), None).unwrap();
    b.paint(n.at("anno/margin"), &recto, inline("nota bene"), Some(rect(720, 200, 60, 300)), None).unwrap();
    b.paint(n.at("anno/under-1"), &under, inline("[erased homily, line 1]"), Some(rect(50, 40, 900, 60)), None).unwrap();

    b.place_zone(n.at("anno/place-undertext"), &under, &recto, rect(100, 100, 600, 1000), Rotation::R90).unwrap();

    b.comment(n.at("anno/note-margin"), &n.at("anno/margin"), inline("Later hand."), None, Some("Cataloguer".into())).unwrap();

    let order = ["line-1", "line-2", "interlinear", "line-3", "margin"];
    b.list(n.at("text-order"), ListKind::TextOrder, order.iter().map(|l| n.at(&format!("anno/{l}"))).collect()).unwrap();
    b.list(n.at("undertext-order"), ListKind::TextOrder, vec![n.at("anno/under-1")]).unwrap();
    b.sequence(n.at("sequence"), "Current binding", vec![SequenceItem::Single(recto), SequenceItem::Single(verso)]).unwrap();
    b.build().unwrap()
}

/// Every fixture with its file stem.
pub fn all() -> Vec<(&'static str, Manifest)> {
    vec![("fragments", fragments()), ("y112", y112()), ("parker", parker()), ("bnf", bnf()), ("palimpsest", palimpsest())]
}
