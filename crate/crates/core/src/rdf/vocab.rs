//! Namespaces and terms.
//!
//! | model                      | graph                                                              |
//! |----------------------------|--------------------------------------------------------------------|
//! | Manifest                   | `a sc:Manifest`, `dc:title`, `sc:hasSequences ( .. )`, optional `sc:hasRanges`, `sc:hasLists`, `sc:hasZones`, `sc:hasAnnotations`, `sc:hasCanvases` lists, `sc:property [ sc:key; sc:value ]` |
//! | Canvas / Zone              | `a sc:Canvas` / `a sc:Zone`, `exif:width`, `exif:height`, `dc:title` |
//! | Sequence                   | `a ore:Aggregation, rdf:List`, `ore:aggregates` per canvas, `rdf:first`/`rdf:rest` over items |
//! | Alternatives item          | `[ a sc:AlternativeGroup; sc:hasPaths ( ( .. ) ( .. ) ) ]`          |
//! | Range                      | `a sc:Range`, `sc:inSequence`, `sc:hasTargets ( .. )`              |
//! | AnnotationList             | `a sc:AnnotationList, sc:TextOrder` (or ImageList/CommentList), `sc:hasEntries ( .. )` |
//! | Annotation                 | `a oac:Annotation, sc:<Kind>Annotation`, `oac:hasBody`, `oac:hasTarget`, `sc:rotation`, `dc:creator`, `sc:certainty` |
//! | ContentResource            | `a sc:Image` / `a sc:Text`, `dc:format`, `exif:width`, `exif:height`, `sc:chars` |
//! | Choice                     | `a oac:Choice, sc:ImageChoice` (or TextChoice), `sc:hasOptions ( .. )` |
//! | Rect selector              | `<iri#xywh=x,y,w,h>`                                               |
//! | Polygon selector           | `[ a oac:Constraint; oac:constrains <iri>; oac:constrainedBy "<polygon points=\"..\"/>" ]` |
//!
//! Empty labels, zero rotations and empty optional lists are omitted, so a
//! manifest with one unlabelled canvas in one unlabelled sequence maps to
//! exactly 12 triples: four for the manifest (type, `sc:hasSequences` and
//! its one list cell), five for the sequence and three for the canvas.

pub const RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const SC: &str = "http://www.shared-canvas.org/ns/";
pub const OAC: &str = "http://www.openannotation.org/ns/";
pub const ORE: &str = "http://www.openarchives.org/ore/terms/";
pub const EXIF: &str = "http://www.w3.org/2003/12/exif/ns#";
pub const DC: &str = "http://purl.org/dc/elements/1.1/";

macro_rules! terms {
    ($ns:literal { $($name:ident = $local:literal),* $(,)? }) => {
        $(pub const $name: &str = concat!($ns, $local);)*
    };
}

terms!("http://www.w3.org/1999/02/22-rdf-syntax-ns#" {
    RDF_TYPE = "type",
    RDF_FIRST = "first",
    RDF_REST = "rest",
    RDF_NIL = "nil",
    RDF_LIST = "List",
});

terms!("http://www.shared-canvas.org/ns/" {
    SC_MANIFEST = "Manifest",
    SC_CANVAS = "Canvas",
    SC_ZONE = "Zone",
    SC_SEQUENCE = "Sequence",
    SC_RANGE = "Range",
    SC_ANNOTATION_LIST = "AnnotationList",
    SC_TEXT_ORDER = "TextOrder",
    SC_IMAGE_LIST = "ImageList",
    SC_COMMENT_LIST = "CommentList",
    SC_ALTERNATIVE_GROUP = "AlternativeGroup",
    SC_HAS_PATHS = "hasPaths",
    SC_ROTATION = "rotation",
    SC_CERTAINTY = "certainty",
    SC_HAS_SEQUENCES = "hasSequences",
    SC_HAS_RANGES = "hasRanges",
    SC_HAS_LISTS = "hasLists",
    SC_HAS_ZONES = "hasZones",
    SC_HAS_ANNOTATIONS = "hasAnnotations",
    SC_HAS_CANVASES = "hasCanvases",
    SC_IN_SEQUENCE = "inSequence",
    SC_HAS_TARGETS = "hasTargets",
    SC_HAS_ENTRIES = "hasEntries",
    SC_HAS_OPTIONS = "hasOptions",
    SC_IMAGE_CHOICE = "ImageChoice",
    SC_TEXT_CHOICE = "TextChoice",
    SC_IMAGE = "Image",
    SC_TEXT = "Text",
    SC_CHARS = "chars",
    SC_PROPERTY = "property",
    SC_KEY = "key",
    SC_VALUE = "value",
    SC_IMAGE_ANNOTATION = "ImageAnnotation",
    SC_TEXT_ANNOTATION = "TextAnnotation",
    SC_ZONE_ANNOTATION = "ZoneAnnotation",
    SC_COMMENT_ANNOTATION = "CommentAnnotation",
    SC_DESCRIPTION_ANNOTATION = "DescriptionAnnotation",
});

terms!("http://www.openannotation.org/ns/" {
    OAC_ANNOTATION = "Annotation",
    OAC_HAS_BODY = "hasBody",
    OAC_HAS_TARGET = "hasTarget",
    OAC_CHOICE = "Choice",
    OAC_CONSTRAINT = "Constraint",
    OAC_CONSTRAINS = "constrains",
    OAC_CONSTRAINED_BY = "constrainedBy",
});

terms!("http://www.openarchives.org/ore/terms/" {
    ORE_AGGREGATION = "Aggregation",
    ORE_AGGREGATES = "aggregates",
});

terms!("http://www.w3.org/2003/12/exif/ns#" {
    EXIF_WIDTH = "width",
    EXIF_HEIGHT = "height",
});

terms!("http://purl.org/dc/elements/1.1/" {
    DC_TITLE = "title",
    DC_FORMAT = "format",
    DC_CREATOR = "creator",
});

/// Prefixes declared on every emitted graph.
pub const PREFIXES: [(&str, &str); 6] = [
    ("dc", DC),
    ("exif", EXIF),
    ("oac", OAC),
    ("ore", ORE),
    ("rdf", RDF),
    ("sc", SC),
];
