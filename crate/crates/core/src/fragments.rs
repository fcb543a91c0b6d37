//! Region selectors and their two textual encodings.
//!
//! A rectangular region travels as a Media Fragment suffix (`xywh=x,y,w,h`)
//! appended to an IRI after `#`. A non-rectangular region travels as the
//! `points` attribute of an SVG `<polygon>` element. Coordinates are integers
//! in the coordinate space of the resource being selected, with the origin at
//! the top-left corner and y growing downwards.

use std::fmt;

use thiserror::Error;

/// Errors raised while reading region selectors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FragmentError {
    #[error("malformed fragment `{0}`")]
    MalformedFragment(String),
    #[error("unsupported media fragment unit in `{0}`")]
    UnsupportedUnit(String),
    #[error("zero extent in `{0}`")]
    ZeroExtent(String),
    #[error("malformed polygon points `{0}`")]
    MalformedPoints(String),
    #[error("degenerate polygon `{0}`")]
    DegeneratePolygon(String),
}

/// An integer point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    pub const fn new(x: i64, y: i64) -> Self {
        Point { x, y }
    }
}

/// An axis-aligned rectangle with a non-negative origin and positive extent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rect {
    pub x: u32,
    pub y: u32,
    pub w: u32,
    pub h: u32,
}

impl Rect {
    /// Builds a rectangle, rejecting zero width or height.
    pub fn new(x: u32, y: u32, w: u32, h: u32) -> Result<Self, FragmentError> {
        if w == 0 || h == 0 {
            return Err(FragmentError::ZeroExtent(format!("{x},{y},{w},{h}")));
        }
        Ok(Rect { x, y, w, h })
    }

    /// Rectangle `(0, 0, w, h)` covering a whole resource.
    pub fn full(w: u32, h: u32) -> Result<Self, FragmentError> {
        Rect::new(0, 0, w, h)
    }

    pub fn right(&self) -> i64 {
        i64::from(self.x) + i64::from(self.w)
    }

    pub fn bottom(&self) -> i64 {
        i64::from(self.y) + i64::from(self.h)
    }

    /// True when this rectangle lies inside a `width` x `height` space.
    pub fn fits_within(&self, width: u32, height: u32) -> bool {
        self.right() <= i64::from(width) && self.bottom() <= i64::from(height)
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= i64::from(self.x) && p.x <= self.right() && p.y >= i64::from(self.y) && p.y <= self.bottom()
    }

    pub fn corners(&self) -> [Point; 4] {
        let (l, t, r, b) = (i64::from(self.x), i64::from(self.y), self.right(), self.bottom());
        [Point::new(l, t), Point::new(r, t), Point::new(r, b), Point::new(l, b)]
    }
}

impl fmt::Display for Rect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_xywh(self))
    }
}

/// A simple closed polygon with at least three vertices and non-zero area.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Polygon {
    vertices: Vec<Point>,
}

impl Polygon {
    pub fn new(vertices: Vec<Point>) -> Result<Self, FragmentError> {
        let poly = Polygon { vertices };
        if poly.vertices.len() < 3 || poly.doubled_area() == 0 {
            return Err(FragmentError::DegeneratePolygon(poly.points_attr()));
        }
        Ok(poly)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Twice the unsigned area, by the shoelace formula.
    pub fn doubled_area(&self) -> i64 {
        let n = self.vertices.len();
        let mut acc: i64 = 0;
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            acc += a.x * b.y - b.x * a.y;
        }
        acc.abs()
    }

    /// The canonical `points` attribute: `x,y` pairs separated by single spaces.
    pub fn points_attr(&self) -> String {
        self.vertices
            .iter()
            .map(|p| format!("{},{}", p.x, p.y))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// A standalone `<polygon points="..."/>` element.
    pub fn to_svg_element(&self) -> String {
        format!("<polygon points=\"{}\"/>", self.points_attr())
    }

    /// Even-odd containment; points on an edge count as inside.
    pub fn contains(&self, p: Point) -> bool {
        let n = self.vertices.len();
        let mut inside = false;
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            if on_segment(a, b, p) {
                return true;
            }
            if (a.y > p.y) != (b.y > p.y) {
                // p.x < a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y), cross-multiplied
                let dy = b.y - a.y;
                let lhs = (p.x - a.x) * dy;
                let rhs = (p.y - a.y) * (b.x - a.x);
                if (dy > 0 && lhs < rhs) || (dy < 0 && lhs > rhs) {
                    inside = !inside;
                }
            }
        }
        inside
    }
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    let cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
    cross == 0
        && p.x >= a.x.min(b.x)
        && p.x <= a.x.max(b.x)
        && p.y >= a.y.min(b.y)
        && p.y <= a.y.max(b.y)
}

/// A selection of part of a resource.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RegionSelector {
    Rect(Rect),
    Polygon(Polygon),
}

impl RegionSelector {
    pub fn bounding_box(&self) -> Rect {
        bounding_box(self)
    }

    pub fn contains_point(&self, p: Point) -> bool {
        contains_point(self, p)
    }

    pub fn as_rect(&self) -> Option<&Rect> {
        match self {
            RegionSelector::Rect(r) => Some(r),
            RegionSelector::Polygon(_) => None,
        }
    }
}

impl From<Rect> for RegionSelector {
    fn from(r: Rect) -> Self {
        RegionSelector::Rect(r)
    }
}

impl From<Polygon> for RegionSelector {
    fn from(p: Polygon) -> Self {
        RegionSelector::Polygon(p)
    }
}

impl fmt::Display for RegionSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegionSelector::Rect(r) => f.write_str(&format_xywh(r)),
            RegionSelector::Polygon(p) => write!(f, "polygon={}", p.points_attr()),
        }
    }
}

/// An IRI split into its base and an optional rectangular region.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FragmentIri {
    pub base: String,
    pub region: Option<Rect>,
}

impl FragmentIri {
    pub fn to_iri_string(&self) -> String {
        match &self.region {
            Some(r) => format!("{}#{}", self.base, format_xywh(r)),
            None => self.base.clone(),
        }
    }
}

fn parse_uint(s: &str) -> Option<u32> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Parses `xywh=x,y,w,h` into a [`Rect`].
pub fn parse_xywh(fragment: &str) -> Result<Rect, FragmentError> {
    let malformed = || FragmentError::MalformedFragment(fragment.to_string());
    let value = fragment.strip_prefix("xywh=").ok_or_else(malformed)?;
    if value.starts_with("pixel:") || value.starts_with("percent:") {
        return Err(FragmentError::UnsupportedUnit(fragment.to_string()));
    }
    let parts: Vec<&str> = value.split(',').collect();
    if parts.len() != 4 {
        return Err(malformed());
    }
    let mut nums = [0u32; 4];
    for (slot, part) in nums.iter_mut().zip(&parts) {
        *slot = parse_uint(part).ok_or_else(malformed)?;
    }
    let [x, y, w, h] = nums;
    if w == 0 || h == 0 {
        return Err(FragmentError::ZeroExtent(fragment.to_string()));
    }
    Ok(Rect { x, y, w, h })
}

/// Canonical media fragment for a rectangle.
pub fn format_xywh(rect: &Rect) -> String {
    format!("xywh={},{},{},{}", rect.x, rect.y, rect.w, rect.h)
}

/// Splits an IRI at `#`, reading the suffix as an `xywh` fragment.
pub fn split_fragment_iri(iri: &str) -> Result<FragmentIri, FragmentError> {
    match iri.split_once('#') {
        None => Ok(FragmentIri { base: iri.to_string(), region: None }),
        Some((base, frag)) => {
            if frag.contains('#') {
                return Err(FragmentError::MalformedFragment(iri.to_string()));
            }
            Ok(FragmentIri { base: base.to_string(), region: Some(parse_xywh(frag)?) })
        }
    }
}

fn parse_int(s: &str) -> Option<i64> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Parses an SVG `points` attribute. Separators are any mix of whitespace
/// and commas.
pub fn parse_svg_polygon(points_attr: &str) -> Result<Polygon, FragmentError> {
    let malformed = || FragmentError::MalformedPoints(points_attr.to_string());
    let numbers = points_attr
        .split(|c: char| c == ',' || c.is_ascii_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| parse_int(s).ok_or_else(malformed))
        .collect::<Result<Vec<_>, _>>()?;
    // a comma must separate two numbers, never stand alone
    let mut expect_number = true;
    for tok in points_attr.split_ascii_whitespace().flat_map(split_keep_commas) {
        if tok == "," {
            if expect_number {
                return Err(malformed());
            }
            expect_number = true;
        } else {
            expect_number = false;
        }
    }
    if expect_number && !numbers.is_empty() {
        return Err(malformed());
    }
    if numbers.len() % 2 != 0 {
        return Err(malformed());
    }
    let vertices = numbers.chunks(2).map(|c| Point::new(c[0], c[1])).collect();
    Polygon::new(vertices).map_err(|_| FragmentError::DegeneratePolygon(points_attr.to_string()))
}

fn split_keep_commas(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, c) in s.char_indices() {
        if c == ',' {
            if start < i {
                out.push(&s[start..i]);
            }
            out.push(",");
            start = i + 1;
        }
    }
    if start < s.len() {
        out.push(&s[start..]);
    }
    out
}

/// Reads the `points` attribute out of a standalone `<polygon .../>` element.
pub fn parse_svg_polygon_element(element: &str) -> Result<Polygon, FragmentError> {
    let malformed = || FragmentError::MalformedPoints(element.to_string());
    let inner = element
        .trim()
        .strip_prefix("<polygon")
        .and_then(|s| s.strip_suffix("/>"))
        .ok_or_else(malformed)?;
    let start = inner.find("points=\"").ok_or_else(malformed)? + "points=\"".len();
    let len = inner[start..].find('"').ok_or_else(malformed)?;
    parse_svg_polygon(&inner[start..start + len])
}

/// Smallest rectangle containing the selector.
///
/// Polygon vertices left of or above the origin are clamped to zero, which
/// only happens for polygons that would already fail bounds checks.
pub fn bounding_box(selector: &RegionSelector) -> Rect {
    match selector {
        RegionSelector::Rect(r) => *r,
        RegionSelector::Polygon(p) => {
            let xs = p.vertices().iter().map(|v| v.x);
            let ys = p.vertices().iter().map(|v| v.y);
            let (min_x, max_x) = (xs.clone().min().unwrap_or(0), xs.max().unwrap_or(0));
            let (min_y, max_y) = (ys.clone().min().unwrap_or(0), ys.max().unwrap_or(0));
            let clamp = |v: i64| v.clamp(0, i64::from(u32::MAX)) as u32;
            Rect {
                x: clamp(min_x),
                y: clamp(min_y),
                w: clamp(max_x - min_x).max(1),
                h: clamp(max_y - min_y).max(1),
            }
        }
    }
}

/// Boundary-inclusive point containment.
pub fn contains_point(selector: &RegionSelector, p: Point) -> bool {
    match selector {
        RegionSelector::Rect(r) => r.contains(p),
        RegionSelector::Polygon(poly) => poly.contains(p),
    }
}

/// True when the selector's bounding box fits a `width` x `height` space and
/// no polygon vertex is negative.
pub fn selector_within(selector: &RegionSelector, width: u32, height: u32) -> bool {
    match selector {
        RegionSelector::Rect(r) => r.fits_within(width, height),
        RegionSelector::Polygon(p) => p.vertices().iter().all(|v| {
            v.x >= 0 && v.y >= 0 && v.x <= i64::from(width) && v.y <= i64::from(height)
        }),
    }
}
