//! Exact plane transforms built from positive scaling, quarter-turn rotation
//! and translation.
//!
//! Every transform is kept in the form `p ↦ R(S·p) + t`: scale by
//! `diag(sx, sy)`, rotate clockwise by a multiple of 90° about the origin
//! (y grows downwards, so `(x, y) ↦ (-y, x)` is a quarter turn), then
//! translate. The form is closed under composition, so chains of zone
//! placements collapse into a single transform without rounding.

use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::fragments::{Point, Polygon, Rect, RegionSelector};
use crate::model::Rotation;

pub type Q = Ratio<i64>;

/// A point with rational coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QPoint {
    pub x: Q,
    pub y: Q,
}

impl QPoint {
    pub fn new(x: Q, y: Q) -> Self {
        QPoint { x, y }
    }

    pub fn from_point(p: Point) -> Self {
        QPoint { x: Q::from_integer(p.x), y: Q::from_integer(p.y) }
    }

    /// Rounds each coordinate half-up (towards positive infinity on ties).
    pub fn round(self) -> Point {
        Point::new(round_half_up(self.x), round_half_up(self.y))
    }
}

pub fn round_half_up(v: Q) -> i64 {
    (v + Q::new(1, 2)).floor().to_integer()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Transform {
    pub scale_x: Q,
    pub scale_y: Q,
    pub rotation: Rotation,
    pub translate_x: Q,
    pub translate_y: Q,
}

impl Default for Transform {
    fn default() -> Self {
        Self::identity()
    }
}

fn rotate(r: Rotation, x: Q, y: Q) -> (Q, Q) {
    match r {
        Rotation::R0 => (x, y),
        Rotation::R90 => (-y, x),
        Rotation::R180 => (-x, -y),
        Rotation::R270 => (y, -x),
    }
}

impl Transform {
    pub fn identity() -> Self {
        Transform {
            scale_x: Q::one(),
            scale_y: Q::one(),
            rotation: Rotation::R0,
            translate_x: Q::zero(),
            translate_y: Q::zero(),
        }
    }

    pub fn translate(dx: i64, dy: i64) -> Self {
        Transform { translate_x: Q::from_integer(dx), translate_y: Q::from_integer(dy), ..Self::identity() }
    }

    /// Positive scaling. Panics on a non-positive factor.
    pub fn scale(sx: Q, sy: Q) -> Self {
        assert!(sx > Q::zero() && sy > Q::zero(), "scale factors must be positive");
        Transform { scale_x: sx, scale_y: sy, ..Self::identity() }
    }

    pub fn rotate(rotation: Rotation) -> Self {
        Transform { rotation, ..Self::identity() }
    }

    /// Maps a `src_w` x `src_h` space onto `dest`, turned clockwise by
    /// `rotation`, so that the source exactly fills the destination box.
    pub fn placement(src_w: u32, src_h: u32, dest: &Rect, rotation: Rotation) -> Self {
        let (sw, sh) = (i64::from(src_w), i64::from(src_h));
        let (dx, dy, dw, dh) = (i64::from(dest.x), i64::from(dest.y), i64::from(dest.w), i64::from(dest.h));
        let (scale_x, scale_y) = if rotation.is_odd() {
            (Q::new(dh, sw), Q::new(dw, sh))
        } else {
            (Q::new(dw, sw), Q::new(dh, sh))
        };
        let (tx, ty) = match rotation {
            Rotation::R0 => (dx, dy),
            Rotation::R90 => (dx + dw, dy),
            Rotation::R180 => (dx + dw, dy + dh),
            Rotation::R270 => (dx, dy + dh),
        };
        Transform { scale_x, scale_y, rotation, translate_x: Q::from_integer(tx), translate_y: Q::from_integer(ty) }
    }

    pub fn apply(&self, p: QPoint) -> QPoint {
        let (x, y) = rotate(self.rotation, self.scale_x * p.x, self.scale_y * p.y);
        QPoint::new(x + self.translate_x, y + self.translate_y)
    }

    /// Maps a rectangle to the axis-aligned box of its image, rounding the
    /// corners half-up. An extent that rounds to zero becomes the unit cell
    /// holding the exact minimum, so the result never leaves the exact box.
    pub fn map_rect(&self, r: &Rect) -> Rect {
        let exact = r.corners().map(|c| self.apply(QPoint::from_point(c)));
        let axis = |get: fn(&QPoint) -> Q| -> (i64, i64) {
            let lo = exact.iter().map(get).min().unwrap_or_default();
            let hi = exact.iter().map(get).max().unwrap_or_default();
            let (a, b) = (round_half_up(lo), round_half_up(hi));
            if b > a {
                (a, b - a)
            } else {
                (lo.floor().to_integer(), 1)
            }
        };
        let (x, w) = axis(|p| p.x);
        let (y, h) = axis(|p| p.y);
        let clamp = |v: i64| v.clamp(0, i64::from(u32::MAX)) as u32;
        Rect { x: clamp(x), y: clamp(y), w: clamp(w), h: clamp(h) }
    }

    /// Maps a region. Polygons keep their vertex order; one that collapses
    /// under rounding falls back to its mapped bounding box.
    pub fn map_region(&self, region: &RegionSelector) -> RegionSelector {
        match region {
            RegionSelector::Rect(r) => self.map_rect(r).into(),
            RegionSelector::Polygon(p) => {
                let vertices = p.vertices().iter().map(|v| self.apply(QPoint::from_point(*v)).round()).collect();
                match Polygon::new(vertices) {
                    Ok(poly) => poly.into(),
                    Err(_) => self.map_rect(&region.bounding_box()).into(),
                }
            }
        }
    }

    /// Raw mapped corners of a region before rounding, used to detect
    /// placements escaping the canvas.
    pub fn exact_corners(&self, region: &RegionSelector) -> Vec<QPoint> {
        match region {
            RegionSelector::Rect(r) => r.corners().iter().map(|c| self.apply(QPoint::from_point(*c))).collect(),
            RegionSelector::Polygon(p) => p.vertices().iter().map(|v| self.apply(QPoint::from_point(*v))).collect(),
        }
    }
}

/// `compose(outer, inner)` applies `inner` first.
pub fn compose(outer: &Transform, inner: &Transform) -> Transform {
    // S_o · R_i = R_i · S_o' where S_o' swaps its axes for odd turns
    let (osx, osy) = if inner.rotation.is_odd() { (outer.scale_y, outer.scale_x) } else { (outer.scale_x, outer.scale_y) };
    let t = outer.apply(QPoint::new(inner.translate_x, inner.translate_y));
    Transform {
        scale_x: osx * inner.scale_x,
        scale_y: osy * inner.scale_y,
        rotation: Rotation::from_quarter_turns(outer.rotation.quarter_turns() + inner.rotation.quarter_turns()),
        translate_x: t.x,
        translate_y: t.y,
    }
}

/// Exact image of an integer point.
pub fn map_point(t: &Transform, p: Point) -> QPoint {
    t.apply(QPoint::from_point(p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Q {
        Q::from_integer(n)
    }

    fn qp(x: i64, y: i64) -> QPoint {
        QPoint::new(q(x), q(y))
    }

    #[test]
    fn identity_and_translation() {
        let id = Transform::identity();
        assert_eq!(map_point(&id, Point::new(7, 9)), qp(7, 9));
        let t = compose(&Transform::translate(10, 0), &Transform::translate(0, 5));
        assert_eq!(map_point(&t, Point::new(0, 0)), qp(10, 5));
        let s = Transform::placement(10, 20, &Rect::new(3, 4, 30, 40).unwrap(), Rotation::R90);
        assert_eq!(compose(&id, &s), s);
        assert_eq!(compose(&s, &id), s);
    }

    #[test]
    fn half_turn_swaps_corners() {
        let (w, h) = (30, 40);
        let t = Transform::placement(w, h, &Rect::new(0, 0, w, h).unwrap(), Rotation::R180);
        assert_eq!(map_point(&t, Point::new(0, 0)), qp(30, 40));
        assert_eq!(map_point(&t, Point::new(30, 40)), qp(0, 0));
    }

    #[test]
    fn quarter_turn_corners() {
        // a 400x300 zone turned clockwise into a 300x400 page: the zone's
        // top-left lands at the page's top-right
        let t = Transform::placement(400, 300, &Rect::new(0, 0, 300, 400).unwrap(), Rotation::R90);
        assert_eq!(map_point(&t, Point::new(0, 0)), qp(300, 0));
        assert_eq!(map_point(&t, Point::new(400, 0)), qp(300, 400));
        assert_eq!(map_point(&t, Point::new(400, 300)), qp(0, 400));
        assert_eq!(map_point(&t, Point::new(0, 300)), qp(0, 0));
        let t = Transform::placement(400, 300, &Rect::new(0, 0, 300, 400).unwrap(), Rotation::R270);
        assert_eq!(map_point(&t, Point::new(0, 0)), qp(0, 400));
        assert_eq!(map_point(&t, Point::new(400, 300)), qp(300, 0));
    }

    #[test]
    fn scaled_offset_placement() {
        let t = Transform::placement(400, 600, &Rect::new(800, 0, 800, 1200).unwrap(), Rotation::R0);
        assert_eq!(map_point(&t, Point::new(10, 10)), qp(820, 20));
        assert_eq!(t.map_rect(&Rect::new(10, 10, 100, 50).unwrap()), Rect::new(820, 20, 200, 100).unwrap());
    }

    #[test]
    fn rounding_is_half_up() {
        assert_eq!(round_half_up(Q::new(1, 2)), 1);
        assert_eq!(round_half_up(Q::new(-1, 2)), 0);
        assert_eq!(round_half_up(Q::new(5, 3)), 2);
        assert_eq!(round_half_up(Q::new(-5, 3)), -2);
    }

    #[test]
    fn stepwise_equals_composed() {
        let outer = compose(&Transform::translate(100, 0), &Transform::scale(q(2), q(2)));
        let inner = Transform::rotate(Rotation::R90);
        let both = compose(&outer, &inner);
        for c in Rect::new(0, 0, 10, 20).unwrap().corners() {
            let p = QPoint::from_point(c);
            assert_eq!(both.apply(p), outer.apply(inner.apply(p)));
        }
    }
}
