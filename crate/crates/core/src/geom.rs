//! Plane-geometry primitives: complex points, circles, axis-aligned
//! ellipses, lines, polygons, inversion, polarity and coaxial pencils.
//!
//! Points are complex numbers. Every type is an immutable value and every
//! operation is a pure function.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::compensated_sum;
use crate::tol;

/// A point of the plane, used interchangeably as a complex number.
pub type CPoint = Complex64;

#[inline]
pub fn pt(x: f64, y: f64) -> CPoint {
    CPoint::new(x, y)
}

#[inline]
pub(crate) fn cross(a: CPoint, b: CPoint) -> f64 {
    a.re * b.im - a.im * b.re
}

#[inline]
pub(crate) fn dot(a: CPoint, b: CPoint) -> f64 {
    a.re * b.re + a.im * b.im
}

fn is_finite(p: CPoint) -> bool {
    p.re.is_finite() && p.im.is_finite()
}

/// Diameter of the bounding box of `points`, floored at 1.
pub fn bbox_scale<'a, I: IntoIterator<Item = &'a CPoint>>(points: I) -> f64 {
    let (mut x0, mut x1, mut y0, mut y1) = (
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
    );
    for p in points {
        x0 = x0.min(p.re);
        x1 = x1.max(p.re);
        y0 = y0.min(p.im);
        y1 = y1.max(p.im);
    }
    if !x0.is_finite() {
        return 1.0;
    }
    (x1 - x0).hypot(y1 - y0).max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: CPoint,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: CPoint, radius: f64) -> Result<Self> {
        if !is_finite(center) || !radius.is_finite() {
            return Err(Error::NonFinite("Circle::new"));
        }
        if radius <= 0.0 {
            return Err(crate::error::out_of_range("radius", radius, "radius > 0"));
        }
        Ok(Circle { center, radius })
    }

    pub fn unit() -> Self {
        Circle {
            center: pt(0.0, 0.0),
            radius: 1.0,
        }
    }

    /// Signed distance of `p` from the circle (negative inside).
    pub fn residual(&self, p: CPoint) -> f64 {
        (p - self.center).norm() - self.radius
    }

    pub fn power(&self, p: CPoint) -> f64 {
        (p - self.center).norm_sqr() - self.radius * self.radius
    }

    pub fn point_at(&self, angle: f64) -> CPoint {
        self.center + CPoint::from_polar(self.radius, angle)
    }

    pub fn map(&self, f: &Similarity) -> Circle {
        Circle {
            center: f.apply(self.center),
            radius: self.radius * f.scale(),
        }
    }
}

/// Ellipse with axes parallel to the coordinate axes, centered at `(cx, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisEllipse {
    pub cx: f64,
    /// x-semiaxis
    pub a: f64,
    /// y-semiaxis
    pub b: f64,
}

impl AxisEllipse {
    pub fn new(cx: f64, a: f64, b: f64) -> Result<Self> {
        if !(cx.is_finite() && a.is_finite() && b.is_finite()) {
            return Err(Error::NonFinite("AxisEllipse::new"));
        }
        if a <= 0.0 || b <= 0.0 {
            return Err(crate::error::out_of_range(
                "semiaxis",
                a.min(b),
                "a > 0 and b > 0",
            ));
        }
        Ok(AxisEllipse { cx, a, b })
    }

    pub fn center(&self) -> CPoint {
        pt(self.cx, 0.0)
    }

    /// Half the distance between the foci.
    pub fn focal_half_distance(&self) -> f64 {
        (self.a * self.a - self.b * self.b).abs().sqrt()
    }

    /// Foci ordered by increasing x (or increasing y when the major axis is
    /// vertical).
    pub fn foci(&self) -> [CPoint; 2] {
        let c = self.focal_half_distance();
        if self.a >= self.b {
            [pt(self.cx - c, 0.0), pt(self.cx + c, 0.0)]
        } else {
            [pt(self.cx, -c), pt(self.cx, c)]
        }
    }

    pub fn eccentricity(&self) -> f64 {
        self.focal_half_distance() / self.a.max(self.b)
    }

    pub fn point_at(&self, angle: f64) -> CPoint {
        pt(self.cx + self.a * angle.cos(), self.b * angle.sin())
    }

    pub fn scaled(&self, factor: f64) -> AxisEllipse {
        AxisEllipse {
            cx: self.cx,
            a: self.a * factor,
            b: self.b * factor,
        }
    }
}

/// Zero iff `p` lies on `e`.
pub fn point_on_ellipse_residual(p: CPoint, e: &AxisEllipse) -> f64 {
    let x = (p.re - e.cx) / e.a;
    let y = p.im / e.b;
    x * x + y * y - 1.0
}

/// Zero iff `l` is tangent to `e`.
///
/// For the unit normal `(u, v)` and offset `w` of the line, compares the
/// squared support distance `a²u² + b²v²` with the squared distance of the
/// line from the center, normalized by the squared major semiaxis.
pub fn line_tangency_residual(l: &Line, e: &AxisEllipse) -> f64 {
    let n = l.normal();
    let w = l.offset();
    let support = e.a * e.a * n.re * n.re + e.b * e.b * n.im * n.im;
    let dist = w - n.re * e.cx;
    let scale = e.a.max(e.b);
    (support - dist * dist).abs() / (scale * scale)
}

/// A line through `point` with unit direction `dir`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Line {
    pub point: CPoint,
    pub dir: CPoint,
}

impl Line {
    pub fn through(p: CPoint, q: CPoint) -> Result<Self> {
        Self::from_point_dir(p, q - p)
    }

    pub fn from_point_dir(point: CPoint, dir: CPoint) -> Result<Self> {
        if !is_finite(point) || !is_finite(dir) {
            return Err(Error::NonFinite("Line"));
        }
        let len = dir.norm();
        if len == 0.0 {
            return Err(Error::InconsistentInput("line direction is zero".into()));
        }
        Ok(Line {
            point,
            dir: dir / len,
        })
    }

    /// Left-hand unit normal.
    pub fn normal(&self) -> CPoint {
        pt(-self.dir.im, self.dir.re)
    }

    /// `w` in the normal form `n · p = w`.
    pub fn offset(&self) -> f64 {
        dot(self.normal(), self.point)
    }

    pub fn signed_distance(&self, p: CPoint) -> f64 {
        dot(self.normal(), p) - self.offset()
    }

    pub fn distance(&self, p: CPoint) -> f64 {
        self.signed_distance(p).abs()
    }

    pub fn foot(&self, p: CPoint) -> CPoint {
        self.point + self.dir * dot(p - self.point, self.dir)
    }

    pub fn intersect(&self, other: &Line) -> Option<CPoint> {
        let denom = cross(self.dir, other.dir);
        if denom.abs() < 1e-300 {
            return None;
        }
        let s = cross(other.point - self.point, other.dir) / denom;
        Some(self.point + self.dir * s)
    }

    /// Rotate the line by `angle` about `pivot`.
    pub fn rotated_about(&self, pivot: CPoint, angle: f64) -> Line {
        let r = CPoint::from_polar(1.0, angle);
        Line {
            point: pivot + (self.point - pivot) * r,
            dir: self.dir * r,
        }
    }

    pub fn map(&self, f: &Similarity) -> Line {
        Line {
            point: f.apply(self.point),
            dir: self.dir * f.rotation(),
        }
    }
}

/// Orientation-preserving similarity `z -> a z + b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Similarity {
    pub a: CPoint,
    pub b: CPoint,
}

impl Similarity {
    pub fn apply(&self, z: CPoint) -> CPoint {
        self.a * z + self.b
    }

    pub fn inverse(&self) -> Similarity {
        let ai = self.a.inv();
        Similarity {
            a: ai,
            b: -self.b * ai,
        }
    }

    pub fn scale(&self) -> f64 {
        self.a.norm()
    }

    pub fn rotation(&self) -> CPoint {
        self.a / self.a.norm()
    }
}

/// Closed polygon with at least three pairwise distinct vertices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polygon {
    vertices: Vec<CPoint>,
}

impl Polygon {
    pub fn new(vertices: Vec<CPoint>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::DegeneratePolygon(format!(
                "{} vertices, need at least 3",
                vertices.len()
            )));
        }
        if !vertices.iter().all(|&p| is_finite(p)) {
            return Err(Error::NonFinite("Polygon::new"));
        }
        let eps = tol::DIRECT * bbox_scale(&vertices);
        for i in 0..vertices.len() {
            for j in i + 1..vertices.len() {
                if (vertices[i] - vertices[j]).norm() <= eps {
                    return Err(Error::DegeneratePolygon(format!(
                        "vertices {i} and {j} coincide"
                    )));
                }
            }
        }
        Ok(Polygon { vertices })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[CPoint] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> CPoint {
        self.vertices[i % self.len()]
    }

    pub fn scale(&self) -> f64 {
        bbox_scale(&self.vertices)
    }

    /// Shoelace area, positive for counterclockwise order.
    pub fn signed_area(&self) -> f64 {
        let n = self.len();
        0.5 * compensated_sum((0..n).map(|i| cross(self.vertices[i], self.vertices[(i + 1) % n])))
    }

    pub fn area(&self) -> f64 {
        self.signed_area().abs()
    }

    /// `s[k] = |P_{k+1} - P_k|`.
    pub fn sidelengths(&self) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| (self.vertices[(i + 1) % n] - self.vertices[i]).norm())
            .collect()
    }

    pub fn perimeter(&self) -> f64 {
        compensated_sum(self.sidelengths())
    }

    /// Line through `P_k` and `P_{k+1}`.
    pub fn sideline(&self, k: usize) -> Line {
        let n = self.len();
        // vertices are distinct, so the direction is nonzero
        Line::through(self.vertices[k % n], self.vertices[(k + 1) % n])
            .expect("distinct polygon vertices")
    }

    /// Interior angle at each vertex, in `(0, 2π)`.
    pub fn internal_angles(&self) -> Vec<f64> {
        let n = self.len();
        let ccw = self.signed_area() >= 0.0;
        (0..n)
            .map(|i| {
                let p = self.vertices[i];
                let u = self.vertices[(i + n - 1) % n] - p;
                let v = self.vertices[(i + 1) % n] - p;
                let (x, y) = if ccw { (v, u) } else { (u, v) };
                let ang = cross(x, y).atan2(dot(x, y));
                if ang <= 0.0 {
                    ang + std::f64::consts::TAU
                } else {
                    ang
                }
            })
            .collect()
    }

    pub fn map<F: Fn(CPoint) -> CPoint>(&self, f: F) -> Result<Polygon> {
        Polygon::new(self.vertices.iter().map(|&p| f(p)).collect())
    }

    pub fn try_map<F: Fn(CPoint) -> Result<CPoint>>(&self, f: F) -> Result<Polygon> {
        let v = self
            .vertices
            .iter()
            .map(|&p| f(p))
            .collect::<Result<Vec<_>>>()?;
        Polygon::new(v)
    }

    /// Smallest max-vertex distance to `other` over cyclic re-indexings and
    /// reversal. `None` if the vertex counts differ.
    pub fn match_distance(&self, other: &Polygon) -> Option<f64> {
        let n = self.len();
        if other.len() != n {
            return None;
        }
        let mut best = f64::INFINITY;
        for reversed in [false, true] {
            for shift in 0..n {
                let mut worst = 0.0_f64;
                for i in 0..n {
                    let j = if reversed {
                        (shift + n - i) % n
                    } else {
                        (shift + i) % n
                    };
                    worst = worst.max((self.vertices[i] - other.vertices[j]).norm());
                }
                best = best.min(worst);
            }
        }
        Some(best)
    }
}

/// Inversion of `p` in circle `c`.
pub fn invert_point(p: CPoint, c: &Circle) -> Result<CPoint> {
    let v = p - c.center;
    let n2 = v.norm_sqr();
    if n2 <= (tol::DIRECT * tol::DIRECT * c.radius * c.radius).max(f64::MIN_POSITIVE) {
        return Err(Error::InversionCenter);
    }
    let q = c.center + v * (c.radius * c.radius / n2);
    if !is_finite(q) {
        return Err(Error::NonFinite("invert_point"));
    }
    Ok(q)
}

/// Polar of `p` with respect to `c`.
pub fn polar_line(p: CPoint, c: &Circle) -> Result<Line> {
    let foot = invert_point(p, c)?;
    let radial = p - c.center;
    Line::from_point_dir(foot, radial * CPoint::i())
}

/// Pole of `l` with respect to `c`.
pub fn pole(l: &Line, c: &Circle) -> Result<CPoint> {
    let foot = l.foot(c.center);
    if (foot - c.center).norm() <= tol::DIRECT * c.radius {
        return Err(Error::DegenerateDual { index: 0 });
    }
    invert_point(foot, c)
}

/// Polygon whose vertex `i` is the pole of sideline `(P_i, P_{i+1})`.
pub fn polar_dual_polygon(p: &Polygon, c: &Circle) -> Result<Polygon> {
    let vs = (0..p.len())
        .map(|i| {
            pole(&p.sideline(i), c).map_err(|e| match e {
                Error::DegenerateDual { .. } => Error::DegenerateDual { index: i },
                other => other,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Polygon::new(vs)
}

/// Circle through three non-collinear points.
pub fn circle_through(p1: CPoint, p2: CPoint, p3: CPoint) -> Result<Circle> {
    let scale = bbox_scale(&[p1, p2, p3]);
    let b = p2 - p1;
    let c = p3 - p1;
    let det = 2.0 * cross(b, c);
    if det.abs() <= tol::DIRECT * scale * scale {
        return Err(Error::CollinearPoints);
    }
    let b2 = b.norm_sqr();
    let c2 = c.norm_sqr();
    let ux = (c.im * b2 - b.im * c2) / det;
    let uy = (b.re * c2 - c.re * b2) / det;
    let off = pt(ux, uy);
    Circle::new(p1 + off, off.norm())
}

/// The intersection of `l` with `c` other than `known`.
pub fn second_intersection(l: &Line, c: &Circle, known: CPoint) -> Result<CPoint> {
    let scale = c.radius.max(1.0);
    if l.distance(known) > tol::DERIVED * scale {
        return Err(Error::InconsistentInput(
            "known point is not on the line".into(),
        ));
    }
    if c.residual(known).abs() > tol::DERIVED * scale {
        return Err(Error::InconsistentInput(
            "known point is not on the circle".into(),
        ));
    }
    let s = -2.0 * dot(l.dir, known - c.center);
    Ok(known + l.dir * s)
}

/// Radical axis of two non-concentric circles.
pub fn radical_axis(c1: &Circle, c2: &Circle) -> Result<Line> {
    let (e, dist) = center_axis(c1, c2)?;
    let xm = (dist * dist + c1.radius * c1.radius - c2.radius * c2.radius) / (2.0 * dist);
    Line::from_point_dir(c1.center + e * xm, e * CPoint::i())
}

fn center_axis(c1: &Circle, c2: &Circle) -> Result<(CPoint, f64)> {
    let v = c2.center - c1.center;
    let dist = v.norm();
    if dist <= tol::DIRECT * c1.radius.max(c2.radius) {
        return Err(Error::ConcentricCircles);
    }
    Ok((v / dist, dist))
}

/// Non-intersecting (hyperbolic) coaxial pencil given by its limiting points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CirclePencil {
    /// Limiting point inside the generating circle.
    pub l1: CPoint,
    pub l2: CPoint,
    pub radical_axis: Line,
}

impl CirclePencil {
    pub fn from_limiting_points(l1: CPoint, l2: CPoint) -> Result<Self> {
        if (l1 - l2).norm() <= tol::DIRECT * bbox_scale(&[l1, l2]) {
            return Err(Error::InconsistentInput("limiting points coincide".into()));
        }
        let mid = (l1 + l2) * 0.5;
        let radical_axis = Line::from_point_dir(mid, (l2 - l1) * CPoint::i())?;
        Ok(CirclePencil {
            l1,
            l2,
            radical_axis,
        })
    }

    pub fn midpoint(&self) -> CPoint {
        (self.l1 + self.l2) * 0.5
    }

    /// Unit vector from `l1` towards `l2`.
    pub fn axis_dir(&self) -> CPoint {
        let v = self.l2 - self.l1;
        v / v.norm()
    }

    /// Member circle with the given center on the axis:
    /// `r² = (c - l1)·(c - l2)`.
    pub fn member_at(&self, center: CPoint) -> Result<Circle> {
        let axis = Line::from_point_dir(self.l1, self.axis_dir())?;
        let scale = bbox_scale(&[self.l1, self.l2, center]);
        if axis.distance(center) > tol::DERIVED * scale {
            return Err(Error::InconsistentInput(
                "member center is off the pencil axis".into(),
            ));
        }
        let r2 = dot(center - self.l1, center - self.l2);
        if r2 <= 0.0 {
            return Err(crate::error::out_of_range(
                "pencil member r²",
                r2,
                "center outside the segment between the limiting points",
            ));
        }
        Circle::new(center, r2.sqrt())
    }

    /// Member whose center sits at distance `offset > 0` beyond `l1` (away
    /// from `l2`), or beyond `l2` when `near_l1` is false.
    pub fn member_beyond(&self, near_l1: bool, offset: f64) -> Result<Circle> {
        let e = self.axis_dir();
        let center = if near_l1 {
            self.l1 - e * offset
        } else {
            self.l2 + e * offset
        };
        self.member_at(center)
    }

    pub fn map(&self, f: &Similarity) -> CirclePencil {
        CirclePencil {
            l1: f.apply(self.l1),
            l2: f.apply(self.l2),
            radical_axis: self.radical_axis.map(f),
        }
    }
}

/// Pencil spanned by two non-intersecting, non-concentric circles.
/// `l1` is the limiting point inside `c1`.
pub fn pencil_from_circles(c1: &Circle, c2: &Circle) -> Result<CirclePencil> {
    let (e, dist) = center_axis(c1, c2)?;
    let xm = (dist * dist + c1.radius * c1.radius - c2.radius * c2.radius) / (2.0 * dist);
    let power = xm * xm - c1.radius * c1.radius;
    let scale = c1.radius.max(c2.radius).max(dist);
    if power <= tol::DIRECT * scale * scale {
        return Err(Error::EllipticPencil);
    }
    let h = power.sqrt();
    let a = c1.center + e * (xm - h);
    let b = c1.center + e * (xm + h);
    let (l1, l2) = if (a - c1.center).norm() < c1.radius {
        (a, b)
    } else {
        (b, a)
    };
    let mut pencil = CirclePencil::from_limiting_points(l1, l2)?;
    pencil.radical_axis = Line::from_point_dir(c1.center + e * xm, e * CPoint::i())?;
    Ok(pencil)
}
