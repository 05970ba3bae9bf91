//! Harmonic polygon families.
//!
//! Three constructions are provided and cross-checked against each other:
//!
//! * Casey: `w_k` is the second intersection of the line through `d` and the
//!   regular vertex `z_k = exp(i(2αk + t))` with the unit circle.
//! * Inversive: the regular vertices inverted in the unit circle centered at
//!   `(x0, 0)`, evaluated through explicit coordinates.
//! * Projective: from a circumcircle and a symmedian point `K`, through the
//!   polar of `K` and the tangent circle centered at `K'`.
//!
//! All associated objects come from closed forms in the inversive frame and
//! are carried to the Casey frame by [`FamilySpec::frame_map`].

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{out_of_range, Error, Result};
use crate::geom::{
    bbox_scale, circle_through, cross, invert_point, line_tangency_residual, polar_line, pt,
    second_intersection, AxisEllipse, CPoint, Circle, CirclePencil, Line, Polygon, Similarity,
};
use crate::numeric::{compensated_sum, uniform_grid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Frame {
    Casey,
    Inversive,
}

/// `N`, the frame, and the frame parameter (`d` for Casey, `x0` for
/// inversive).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    n: usize,
    frame: Frame,
    param: f64,
}

fn check_param(name: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() || value.abs() >= 1.0 {
        return Err(out_of_range(name, value, "|param| < 1"));
    }
    Ok(())
}

fn check_n(n: usize) -> Result<()> {
    if n < 3 {
        return Err(out_of_range("N", n as f64, "N >= 3"));
    }
    Ok(())
}

impl FamilySpec {
    pub fn new(n: usize, frame: Frame, param: f64) -> Result<Self> {
        check_n(n)?;
        check_param(
            match frame {
                Frame::Casey => "d",
                Frame::Inversive => "x0",
            },
            param,
        )?;
        Ok(FamilySpec { n, frame, param })
    }

    pub fn inversive(n: usize, x0: f64) -> Result<Self> {
        Self::new(n, Frame::Inversive, x0)
    }

    pub fn casey(n: usize, d: f64) -> Result<Self> {
        Self::new(n, Frame::Casey, d)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn param(&self) -> f64 {
        self.param
    }

    /// `π / N`.
    pub fn alpha(&self) -> f64 {
        PI / self.n as f64
    }

    /// The canonical (inversive-frame) parameter.
    pub fn x0(&self) -> f64 {
        match self.frame {
            Frame::Inversive => self.param,
            Frame::Casey => casey_to_inversive(self.param),
        }
    }

    /// Length of one Poncelet period in `t`.
    pub fn period(&self) -> f64 {
        2.0 * self.alpha()
    }

    pub fn t_grid(&self, samples: usize) -> Vec<f64> {
        uniform_grid(0.0, self.period(), samples)
    }

    /// Same family expressed in the other frame.
    pub fn with_frame(&self, frame: Frame) -> FamilySpec {
        let param = match frame {
            Frame::Inversive => self.x0(),
            Frame::Casey => inversive_to_casey(self.x0()),
        };
        FamilySpec {
            n: self.n,
            frame,
            param,
        }
    }

    /// Map from the inversive frame into this spec's frame.
    pub fn frame_map(&self) -> Similarity {
        match self.frame {
            Frame::Inversive => Similarity {
                a: pt(1.0, 0.0),
                b: pt(0.0, 0.0),
            },
            Frame::Casey => inversive_to_casey_map(self.x0()),
        }
    }

    pub fn vertices(&self, t: f64) -> Result<Polygon> {
        match self.frame {
            Frame::Casey => vertices_casey(self.n, self.param, t),
            Frame::Inversive => vertices_inversive(self.n, self.param, t),
        }
    }

    pub fn snapshot(&self, t: f64) -> Result<PolygonSnapshot> {
        Ok(PolygonSnapshot::new(t, self.vertices(t)?))
    }

    /// Associated objects in this spec's frame.
    pub fn brocard_objects(&self) -> BrocardObjects {
        let inv = BrocardObjects::inversive(self.n, self.x0());
        match self.frame {
            Frame::Inversive => inv,
            Frame::Casey => inv.map(&self.frame_map()),
        }
    }
}

/// Frame identification: both frames share the parameter.
pub fn casey_to_inversive(d: f64) -> f64 {
    d
}

pub fn inversive_to_casey(x0: f64) -> f64 {
    x0
}

/// Similarity `z -> (O - z) / R` taking the inversive-frame circumcircle to
/// the unit circle and `l1 = (x0, 0)` to `(x0, 0)`.
pub fn inversive_to_casey_map(x0: f64) -> Similarity {
    let (o, r) = circumcircle_inversive(x0);
    Similarity {
        a: pt(-1.0 / r, 0.0),
        b: pt(o / r, 0.0),
    }
}

/// `z_k = exp(i(2αk + t))`, `k = 1..=N`.
pub fn regular_vertices(n: usize, t: f64) -> Vec<CPoint> {
    let alpha = PI / n as f64;
    (1..=n)
        .map(|k| CPoint::from_polar(1.0, 2.0 * alpha * k as f64 + t))
        .collect()
}

/// Casey construction on the unit circle.
pub fn vertices_casey(n: usize, d: f64, t: f64) -> Result<Polygon> {
    check_n(n)?;
    check_param("d", d)?;
    let w = regular_vertices(n, t)
        .into_iter()
        .map(|z| {
            let zb = z.conj();
            (zb * d - 1.0) / (zb - d)
        })
        .collect();
    Polygon::new(w)
}

/// Explicit coordinates of the inverted regular vertices.
pub fn vertices_inversive(n: usize, x0: f64, t: f64) -> Result<Polygon> {
    check_n(n)?;
    check_param("x0", x0)?;
    let alpha = PI / n as f64;
    let x2 = x0 * x0;
    let v = (1..=n)
        .map(|i| {
            let phi = 2.0 * alpha * i as f64 + t;
            let (s, c) = phi.sin_cos();
            let den = 2.0 * x0 * c - 1.0 - x2;
            pt(-((1.0 - 2.0 * x2) * c + x2 * x0) / den, -s / den)
        })
        .collect();
    Polygon::new(v)
}

/// Inversive vertices by applying the inversion directly.
pub fn vertices_inversive_direct(n: usize, x0: f64, t: f64) -> Result<Polygon> {
    check_n(n)?;
    check_param("x0", x0)?;
    let c = Circle::new(pt(x0, 0.0), 1.0)?;
    let v = regular_vertices(n, t)
        .into_iter()
        .map(|z| invert_point(z, &c))
        .collect::<Result<Vec<_>>>()?;
    Polygon::new(v)
}

/// Intermediate objects of the projective construction.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveConstruction {
    pub polygon: Polygon,
    pub regular: Polygon,
    /// Intersection of `OK` with the polar of `K`.
    pub k_prime: CPoint,
    pub tangent_point: CPoint,
    /// Center of projection, on the same side of `K'` as `O`.
    pub s: CPoint,
    pub s_prime: CPoint,
    pub polar_of_k: Line,
}

/// Harmonic polygon from a circumcircle and a symmedian point.
///
/// The regular vertices are `O + R u exp(i(2αk + t))` with `u` the unit
/// vector from `O` towards `K`; `P_k` is the second intersection of `S R_k`
/// with the circle.
pub fn vertices_projective(
    circle: &Circle,
    k: CPoint,
    n: usize,
    t: f64,
) -> Result<ProjectiveConstruction> {
    check_n(n)?;
    let o = circle.center;
    let r = circle.radius;
    let dist = (k - o).norm();
    if dist <= crate::tol::DIRECT * r {
        return Err(Error::InconsistentInput(
            "symmedian at the circumcenter: its polar is the line at infinity".into(),
        ));
    }
    if dist >= r {
        return Err(Error::InconsistentInput(
            "symmedian must lie strictly inside the circumcircle".into(),
        ));
    }
    let u = (k - o) / dist;
    let polar = polar_line(k, circle)?;
    let ok = Line::through(o, k)?;
    let k_prime = ok
        .intersect(&polar)
        .ok_or_else(|| Error::InconsistentInput("polar parallel to OK".into()))?;
    let dk = (k_prime - o).norm();
    let beta = (r / dk).acos();
    let tangent_point = o + u * CPoint::from_polar(r, beta);
    let rho = (tangent_point - k_prime).norm();
    let s = k_prime - u * rho;
    let s_prime = k_prime + u * rho;

    let regular: Vec<CPoint> = regular_vertices(n, t)
        .into_iter()
        .map(|z| o + u * z * r)
        .collect();
    let verts = regular
        .iter()
        .map(|&ri| second_intersection(&Line::through(s, ri)?, circle, ri))
        .collect::<Result<Vec<_>>>()?;
    Ok(ProjectiveConstruction {
        polygon: Polygon::new(verts)?,
        regular: Polygon::new(regular)?,
        k_prime,
        tangent_point,
        s,
        s_prime,
        polar_of_k: polar,
    })
}

/// One member of a family with cached measurements.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolygonSnapshot {
    pub t: f64,
    pub polygon: Polygon,
    pub sidelengths: Vec<f64>,
    pub angles: Vec<f64>,
    pub signed_area: f64,
    pub area: f64,
    pub perimeter: f64,
}

impl PolygonSnapshot {
    pub fn new(t: f64, polygon: Polygon) -> Self {
        let sidelengths = polygon.sidelengths();
        let angles = polygon.internal_angles();
        let signed_area = polygon.signed_area();
        let perimeter = compensated_sum(sidelengths.iter().copied());
        PolygonSnapshot {
            t,
            sidelengths,
            angles,
            signed_area,
            area: signed_area.abs(),
            perimeter,
            polygon,
        }
    }

    pub fn n(&self) -> usize {
        self.polygon.len()
    }

    pub fn sum_sq_sides(&self) -> f64 {
        compensated_sum(self.sidelengths.iter().map(|s| s * s))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BrocardObjects {
    pub circumcircle: Circle,
    pub symmedian: CPoint,
    /// `[Ω1, Ω2]`; `Ω1` is reached by rotating each side about its first
    /// endpoint towards the interior.
    pub brocard_points: [CPoint; 2],
    pub inellipse: AxisEllipse,
    pub eccentricity: f64,
    /// `None` for the regular polygon (`K = O`).
    pub brocard_circle: Option<Circle>,
    /// `l1` is interior; `l2` is `None` for the regular polygon.
    pub limiting_points: (CPoint, Option<CPoint>),
    pub lemoine_axis: Option<Line>,
    pub pencil: Option<CirclePencil>,
    pub brocard_angle: f64,
    /// `|K - O|`.
    pub delta: f64,
}

/// `(O_x, R)` of the inversive-frame circumcircle.
pub fn circumcircle_inversive(x0: f64) -> (f64, f64) {
    let x2 = x0 * x0;
    (x0 * (x2 - 2.0) / (x2 - 1.0), 1.0 / (x2 - 1.0).abs())
}

/// Brocard angle from the closed form `tan ω = |1 - x0²| / (1 + x0²) cot α`.
pub fn brocard_angle_closed(n: usize, x0: f64) -> f64 {
    let alpha = PI / n as f64;
    let x2 = x0 * x0;
    ((1.0 - x2).abs() / (1.0 + x2) / alpha.tan()).atan()
}

/// The two parameters compatible with a given `δ / R`; their product is 1.
pub fn x0_from_delta_ratio(q: f64) -> Option<(f64, f64)> {
    if !(q > 0.0 && q <= 1.0) {
        return None;
    }
    let root = (1.0 - q * q).sqrt();
    Some(((1.0 - root) / q, (1.0 + root) / q))
}

impl BrocardObjects {
    /// Closed forms in the inversive frame.
    pub fn inversive(n: usize, x0: f64) -> Self {
        let alpha = PI / n as f64;
        let x2 = x0 * x0;
        let x4 = x2 * x2;
        let (ox, r) = circumcircle_inversive(x0);
        let circumcircle = Circle {
            center: pt(ox, 0.0),
            radius: r,
        };
        let symmedian = pt(x0 * x2 / (x2 + 1.0), 0.0);

        // 1/k = x0 / (2 x0² cos 2α - x0⁴ - 1), finite at x0 = 0
        let (s2, c2) = (2.0 * alpha).sin_cos();
        let inv_k = x0 / (2.0 * x2 * c2 - x4 - 1.0);
        let bx = ((2.0 * x2 - 1.0) * c2 - x4 + x2 - 1.0) * inv_k;
        let by = s2 * inv_k;
        let brocard_points = [pt(bx, by), pt(bx, -by)];

        let ca = alpha.cos();
        let kp = (x2 + 1.0).powi(2) - (2.0 * x0 * ca).powi(2);
        let inellipse = AxisEllipse {
            cx: bx,
            a: (1.0 - x2) * ca / kp,
            b: ca / kp.sqrt(),
        };
        let eccentricity = 2.0 * x0.abs() * alpha.sin() / kp.sqrt();

        let delta = (symmedian - circumcircle.center).norm();
        let (brocard_circle, l2, lemoine_axis, pencil) = if x0 == 0.0 {
            (None, None, None, None)
        } else {
            let bc = Circle {
                center: pt(x0 * (x4 - x2 - 1.0) / (x4 - 1.0), 0.0),
                radius: (x0 / (x4 - 1.0)).abs(),
            };
            let l1 = pt(x0, 0.0);
            let l2 = pt((x2 - 1.0) / x0, 0.0);
            let mid = (l1 + l2) * 0.5;
            let lemoine = Line {
                point: mid,
                dir: pt(0.0, 1.0),
            };
            let pencil = CirclePencil {
                l1,
                l2,
                radical_axis: lemoine,
            };
            (Some(bc), Some(l2), Some(lemoine), Some(pencil))
        };

        BrocardObjects {
            circumcircle,
            symmedian,
            brocard_points,
            inellipse,
            eccentricity,
            brocard_circle,
            limiting_points: (pt(x0, 0.0), l2),
            lemoine_axis,
            pencil,
            brocard_angle: brocard_angle_closed(n, x0),
            delta,
        }
    }

    /// Image under a similarity that maps the x-axis onto itself.
    pub fn map(&self, f: &Similarity) -> Self {
        debug_assert!(f.a.im == 0.0, "axis-preserving similarity");
        let s = f.scale();
        let e = &self.inellipse;
        BrocardObjects {
            circumcircle: self.circumcircle.map(f),
            symmedian: f.apply(self.symmedian),
            brocard_points: [
                f.apply(self.brocard_points[0]),
                f.apply(self.brocard_points[1]),
            ],
            inellipse: AxisEllipse {
                cx: f.apply(pt(e.cx, 0.0)).re,
                a: e.a * s,
                b: e.b * s,
            },
            eccentricity: self.eccentricity,
            brocard_circle: self.brocard_circle.map(|c| c.map(f)),
            limiting_points: (
                f.apply(self.limiting_points.0),
                self.limiting_points.1.map(|p| f.apply(p)),
            ),
            lemoine_axis: self.lemoine_axis.map(|l| l.map(f)),
            pencil: self.pencil.map(|p| p.map(f)),
            brocard_angle: self.brocard_angle,
            delta: self.delta * s,
        }
    }

    /// Casey's relation `tan ω = sqrt(1 - (δ/R)²) cot α`, as an angle.
    pub fn brocard_angle_from_delta(&self, n: usize) -> f64 {
        let q = self.delta / self.circumcircle.radius;
        ((1.0 - q * q).max(0.0).sqrt() / (PI / n as f64).tan()).atan()
    }
}

/// Least-squares concurrence point of a set of lines and the RMS distance of
/// that point to them.
pub fn least_squares_concurrence(lines: &[Line]) -> Result<(CPoint, f64)> {
    let (mut sxx, mut sxy, mut syy, mut bx, mut by) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for l in lines {
        let n = l.normal();
        let w = l.offset();
        sxx += n.re * n.re;
        sxy += n.re * n.im;
        syy += n.im * n.im;
        bx += n.re * w;
        by += n.im * w;
    }
    let det = sxx * syy - sxy * sxy;
    if det.abs() <= 1e-14 * (sxx + syy).powi(2) {
        return Err(Error::InconsistentInput("lines are parallel".into()));
    }
    let p = pt((syy * bx - sxy * by) / det, (sxx * by - sxy * bx) / det);
    let ms =
        compensated_sum(lines.iter().map(|l| l.signed_distance(p).powi(2))) / lines.len() as f64;
    Ok((p, ms.sqrt()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Concurrence {
    pub omega1: CPoint,
    pub omega2: CPoint,
    pub rms1: f64,
    pub rms2: f64,
}

/// Brocard points as the concurrence of the sides rotated by `±ω`.
///
/// Sides are rotated about their first endpoint (for `Ω1`) or second
/// endpoint (for `Ω2`) towards the interior, whichever the orientation.
pub fn brocard_points_by_concurrence(snap: &PolygonSnapshot, omega: f64) -> Result<Concurrence> {
    let p = &snap.polygon;
    let n = p.len();
    let w = if snap.signed_area >= 0.0 {
        omega
    } else {
        -omega
    };
    let first: Vec<Line> = (0..n)
        .map(|i| p.sideline(i).rotated_about(p.vertex(i), w))
        .collect();
    let second: Vec<Line> = (0..n)
        .map(|i| p.sideline(i).rotated_about(p.vertex(i + 1), -w))
        .collect();
    let (o1, rms1) = least_squares_concurrence(&first)?;
    let (o2, rms2) = least_squares_concurrence(&second)?;
    let tolerance = 1e-9 * p.scale();
    let worst = rms1.max(rms2);
    if worst > tolerance {
        return Err(Error::NotHarmonic {
            residual: worst,
            tolerance,
        });
    }
    Ok(Concurrence {
        omega1: o1,
        omega2: o2,
        rms1,
        rms2,
    })
}

/// `arccot(Σ s² / (4A))`.
pub fn brocard_angle_measured(snap: &PolygonSnapshot) -> Result<f64> {
    let scale = snap.polygon.scale();
    if snap.area <= crate::tol::DIRECT * scale * scale {
        return Err(Error::DegeneratePolygon("zero area".into()));
    }
    Ok((4.0 * snap.area).atan2(snap.sum_sq_sides()))
}

/// Coefficient of variation of `dist(K, side_k) / s_k`.
pub fn symmedian_residual(snap: &PolygonSnapshot, k: CPoint) -> f64 {
    let p = &snap.polygon;
    let ratios: Vec<f64> = (0..p.len())
        .map(|i| p.sideline(i).distance(k) / snap.sidelengths[i])
        .collect();
    let m = compensated_sum(ratios.iter().copied()) / ratios.len() as f64;
    let var = compensated_sum(ratios.iter().map(|r| (r - m).powi(2))) / ratios.len() as f64;
    var.sqrt() / m.abs()
}

/// Least-squares point whose signed side distances are proportional to the
/// sidelengths, and its [`symmedian_residual`].
pub fn fit_symmedian(snap: &PolygonSnapshot) -> Result<(CPoint, f64)> {
    let p = &snap.polygon;
    let sign = if snap.signed_area >= 0.0 { 1.0 } else { -1.0 };
    // rows: [n.re, n.im, -s] · (Kx, Ky, λ) = w, normals oriented inwards
    let mut ata = [[0.0_f64; 3]; 3];
    let mut atb = [0.0_f64; 3];
    for i in 0..p.len() {
        let l = p.sideline(i);
        let n = l.normal() * sign;
        let w = l.offset() * sign;
        let row = [n.re, n.im, -snap.sidelengths[i]];
        for r in 0..3 {
            for c in 0..3 {
                ata[r][c] += row[r] * row[c];
            }
            atb[r] += row[r] * w;
        }
    }
    let sol = solve3(ata, atb)
        .ok_or_else(|| Error::DegeneratePolygon("symmedian system is singular".into()))?;
    let k = pt(sol[0], sol[1]);
    Ok((k, symmedian_residual(snap, k)))
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn solve3(m: [[f64; 3]; 3], b: [f64; 3]) -> Option<[f64; 3]> {
    let d = det3(&m);
    let norm: f64 = m.iter().flatten().map(|v| v.abs()).fold(0.0, f64::max);
    if d.abs() <= 1e-14 * norm.powi(3) {
        return None;
    }
    let mut out = [0.0; 3];
    for (col, slot) in out.iter_mut().enumerate() {
        let mut mc = m;
        for r in 0..3 {
            mc[r][col] = b[r];
        }
        *slot = det3(&mc) / d;
    }
    Some(out)
}

/// Largest side-to-ellipse tangency residual.
pub fn closure_residual_against(p: &Polygon, e: &AxisEllipse) -> f64 {
    (0..p.len())
        .map(|i| line_tangency_residual(&p.sideline(i), e))
        .fold(0.0, f64::max)
}

/// Tangency of every side of the snapshot at `t` to the Brocard inellipse.
pub fn closure_residual(spec: &FamilySpec, t: f64) -> Result<f64> {
    let p = spec.vertices(t)?;
    Ok(closure_residual_against(
        &p,
        &spec.brocard_objects().inellipse,
    ))
}

/// Largest deviation of the central angles of a cyclic polygon from
/// `2π / N`.
pub fn regularity_defect(p: &Polygon) -> Result<f64> {
    let c = circle_through(p.vertex(0), p.vertex(1), p.vertex(2))?;
    let n = p.len();
    let step = 2.0 * PI / n as f64;
    let mut worst = 0.0_f64;
    for i in 0..n {
        let a = p.vertex(i) - c.center;
        let b = p.vertex(i + 1) - c.center;
        let ang = cross(a, b).atan2(crate::geom::dot(a, b)).abs();
        worst = worst.max((ang - step).abs());
    }
    let radial = p
        .vertices()
        .iter()
        .map(|v| (c.residual(*v) / c.radius).abs())
        .fold(0.0, f64::max);
    Ok(worst.max(radial))
}

/// Largest distance of the polygon's vertices from `c`, relative to the
/// configuration scale.
pub fn concyclicity_residual(p: &Polygon, c: &Circle) -> f64 {
    let scale = bbox_scale(p.vertices()).max(c.radius);
    p.vertices()
        .iter()
        .map(|v| c.residual(*v).abs())
        .fold(0.0, f64::max)
        / scale
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: CPoint, b: CPoint, eps: f64) -> bool {
        (a - b).norm() <= eps
    }

    // Independent second intersection of the line through `d` and `z` with
    // the unit circle: solve |d + s (z - d)|² = 1 for the root other than 1.
    fn casey_oracle(d: f64, z: CPoint) -> CPoint {
        let dv = z - pt(d, 0.0);
        let a = dv.norm_sqr();
        let c = d * d - 1.0;
        // product of the roots is c/a and one root is 1
        let s = c / a;
        pt(d, 0.0) + dv * s
    }

    #[test]
    fn casey_d_zero_is_regular() {
        let p = vertices_casey(6, 0.0, 0.4).unwrap();
        for (w, z) in p.vertices().iter().zip(regular_vertices(6, 0.4)) {
            assert!(close(*w, -z, 1e-15));
        }
    }

    #[test]
    fn casey_vertices_on_unit_circle() {
        for &(d, t) in &[(0.3, 0.1), (-0.8, 2.0), (0.95, -1.3)] {
            let p = vertices_casey(7, d, t).unwrap();
            for w in p.vertices() {
                assert!((w.norm() - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn casey_matches_second_intersection_oracle() {
        let (n, d, t) = (5, 0.4, 0.3);
        let p = vertices_casey(n, d, t).unwrap();
        for (w, z) in p.vertices().iter().zip(regular_vertices(n, t)) {
            assert!(close(*w, casey_oracle(d, z), 1e-14));
            let l = Line::through(pt(d, 0.0), z).unwrap();
            let s = second_intersection(&l, &Circle::unit(), z).unwrap();
            assert!(close(*w, s, 1e-14));
        }
    }

    #[test]
    fn casey_rejects_out_of_range() {
        assert!(matches!(
            vertices_casey(5, 1.0, 0.0),
            Err(Error::ParameterOutOfRange { .. })
        ));
        assert!(vertices_inversive(5, -1.0, 0.0).is_err());
        assert!(FamilySpec::inversive(2, 0.3).is_err());
    }

    #[test]
    fn explicit_vertices_match_direct_inversion() {
        for n in 3..=8 {
            for j in 0..64 {
                let t = j as f64 * 2.0 * PI / (n as f64 * 64.0);
                let a = vertices_inversive(n, 0.5, t).unwrap();
                let b = vertices_inversive_direct(n, 0.5, t).unwrap();
                for (p, q) in a.vertices().iter().zip(b.vertices()) {
                    assert!(close(*p, *q, 1e-12));
                }
            }
        }
    }

    #[test]
    fn inversive_vertices_on_closed_form_circumcircle() {
        let (o, r) = circumcircle_inversive(0.5);
        let c = Circle::new(pt(o, 0.0), r).unwrap();
        let p = vertices_inversive(5, 0.5, 0.77).unwrap();
        assert!(concyclicity_residual(&p, &c) < 1e-12);
    }

    #[test]
    fn casey_frame_is_similar_image() {
        for &x0 in &[0.0, 0.2, 0.5, -0.6, 0.9] {
            let f = inversive_to_casey_map(x0);
            let a = vertices_inversive(6, x0, 0.35).unwrap();
            let b = vertices_casey(6, x0, 0.35).unwrap();
            for (p, q) in a.vertices().iter().zip(b.vertices()) {
                assert!(close(f.apply(*p), *q, 1e-12), "x0={x0}");
            }
            // l1 goes to (x0, 0)
            assert!(close(f.apply(pt(x0, 0.0)), pt(x0, 0.0), 1e-14));
        }
    }

    #[test]
    fn projective_at_center_errors() {
        assert!(vertices_projective(&Circle::unit(), pt(0.0, 0.0), 5, 0.0).is_err());
        assert!(vertices_projective(&Circle::unit(), pt(1.5, 0.0), 5, 0.0).is_err());
    }

    #[test]
    fn projective_matches_inversive() {
        let spec = FamilySpec::inversive(5, 0.5).unwrap();
        let bo = spec.brocard_objects();
        for &t in &[0.0, 0.3, 1.1] {
            let pc = vertices_projective(&bo.circumcircle, bo.symmedian, 5, t).unwrap();
            let inv = vertices_inversive(5, 0.5, t).unwrap();
            for (p, q) in pc.polygon.vertices().iter().zip(inv.vertices()) {
                assert!(close(*p, *q, 1e-9));
            }
            let (l1, l2) = bo.limiting_points;
            assert!(close(pc.s, l1, 1e-10));
            assert!(close(pc.s_prime, l2.unwrap(), 1e-10));
        }
    }

    #[test]
    fn regular_objects() {
        let n = 7;
        let bo = FamilySpec::inversive(n, 0.0).unwrap().brocard_objects();
        let alpha = PI / n as f64;
        assert!(close(bo.symmedian, pt(0.0, 0.0), 0.0));
        assert!(close(bo.circumcircle.center, pt(0.0, 0.0), 0.0));
        assert!((bo.brocard_angle - (PI / 2.0 - alpha)).abs() < 1e-15);
        assert!((bo.inellipse.a - alpha.cos()).abs() < 1e-15);
        assert!((bo.inellipse.b - alpha.cos()).abs() < 1e-15);
        assert!(bo.brocard_circle.is_none());
        assert!(bo.limiting_points.1.is_none());
    }

    #[test]
    fn symmedian_appendix_value() {
        let bo = FamilySpec::inversive(5, 0.5).unwrap().brocard_objects();
        assert!(close(bo.symmedian, pt(0.1, 0.0), 1e-15));
    }

    #[test]
    fn brocard_circle_has_diameter_ko() {
        for &x0 in &[0.2, 0.5, -0.7] {
            let bo = FamilySpec::inversive(6, x0).unwrap().brocard_objects();
            let bc = bo.brocard_circle.unwrap();
            assert!(bc.residual(bo.symmedian).abs() < 1e-12);
            assert!(bc.residual(bo.circumcircle.center).abs() < 1e-12);
            for w in bo.brocard_points {
                assert!(bc.residual(w).abs() < 1e-12);
            }
            assert!((bo.delta - 2.0 * bc.radius).abs() < 1e-12);
        }
    }

    #[test]
    fn foci_are_brocard_points() {
        for &x0 in &[0.2, 0.5, -0.4] {
            let bo = FamilySpec::inversive(5, x0).unwrap().brocard_objects();
            let f = bo.inellipse.foci();
            assert!(
                close(f[1], bo.brocard_points[0], 1e-12)
                    || close(f[0], bo.brocard_points[0], 1e-12)
            );
            assert!((bo.inellipse.eccentricity() - bo.eccentricity).abs() < 1e-12);
        }
    }

    #[test]
    fn casey_relation_for_brocard_angle() {
        for &x0 in &[0.0, 0.1, 0.5, 0.8, -0.3] {
            for n in 3..9 {
                let bo = FamilySpec::inversive(n, x0).unwrap().brocard_objects();
                assert!((bo.brocard_angle - bo.brocard_angle_from_delta(n)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn delta_ratio_roots_multiply_to_one() {
        let bo = FamilySpec::inversive(5, 0.35).unwrap().brocard_objects();
        let (a, b) = x0_from_delta_ratio(bo.delta / bo.circumcircle.radius).unwrap();
        assert!((a - 0.35).abs() < 1e-12);
        assert!((a * b - 1.0).abs() < 1e-12);
    }

    #[test]
    fn measured_brocard_angle() {
        let eq = PolygonSnapshot::new(0.0, Polygon::new(regular_vertices(3, 0.0)).unwrap());
        assert!((brocard_angle_measured(&eq).unwrap() - PI / 6.0).abs() < 1e-14);
        let spec = FamilySpec::inversive(7, 0.6).unwrap();
        let snap = spec.snapshot(0.2).unwrap();
        let closed = brocard_angle_closed(7, 0.6);
        assert!((brocard_angle_measured(&snap).unwrap() - closed).abs() < 1e-10);
    }

    #[test]
    fn triangle_brocard_angle_is_arccot_of_cot_sum() {
        let spec = FamilySpec::inversive(3, 0.45).unwrap();
        let snap = spec.snapshot(0.9).unwrap();
        let cot_sum: f64 = snap.angles.iter().map(|a| 1.0 / a.tan()).sum();
        let w = brocard_angle_measured(&snap).unwrap();
        assert!((1.0 / w.tan() - cot_sum).abs() < 1e-12);
    }

    #[test]
    fn concurrence_regular_and_closed_form() {
        let n = 6;
        let snap = FamilySpec::inversive(n, 0.0)
            .unwrap()
            .snapshot(0.3)
            .unwrap();
        let c = brocard_points_by_concurrence(&snap, PI / 2.0 - PI / n as f64).unwrap();
        assert!(c.omega1.norm() < 1e-12 && c.omega2.norm() < 1e-12);

        let spec = FamilySpec::inversive(4, 0.5).unwrap();
        let bo = spec.brocard_objects();
        let c =
            brocard_points_by_concurrence(&spec.snapshot(0.2).unwrap(), bo.brocard_angle).unwrap();
        assert!(close(c.omega1, bo.brocard_points[0], 1e-9));
        assert!(close(c.omega2, bo.brocard_points[1], 1e-9));
    }

    #[test]
    fn concurrence_rejects_perturbed_polygon() {
        let spec = FamilySpec::inversive(5, 0.5).unwrap();
        let snap = spec.snapshot(0.2).unwrap();
        let mut v = snap.polygon.vertices().to_vec();
        v[2] += pt(1e-3, 0.0);
        let bad = PolygonSnapshot::new(0.2, Polygon::new(v).unwrap());
        assert!(matches!(
            brocard_points_by_concurrence(&bad, spec.brocard_objects().brocard_angle),
            Err(Error::NotHarmonic { .. })
        ));
    }

    #[test]
    fn symmedian_residual_controls() {
        let reg = FamilySpec::inversive(5, 0.0)
            .unwrap()
            .snapshot(0.1)
            .unwrap();
        assert!(symmedian_residual(&reg, pt(0.0, 0.0)) < 1e-14);
        let spec = FamilySpec::inversive(5, 0.5).unwrap();
        let snap = spec.snapshot(0.1).unwrap();
        let k = spec.brocard_objects().symmedian;
        assert!(symmedian_residual(&snap, k) < 1e-10);
        assert!(symmedian_residual(&snap, k + pt(0.01, 0.0)) > 1e-4);
        let (fit, res) = fit_symmedian(&snap).unwrap();
        assert!(close(fit, k, 1e-10));
        assert!(res < 1e-10);
    }

    #[test]
    fn closure_controls() {
        for n in 3..8 {
            let spec = FamilySpec::inversive(n, 0.0).unwrap();
            assert!(closure_residual(&spec, 0.4).unwrap() < 1e-14);
        }
        let spec = FamilySpec::inversive(5, 0.5).unwrap();
        for t in spec.t_grid(64) {
            assert!(closure_residual(&spec, t).unwrap() < 1e-9);
        }
        let mut e = spec.brocard_objects().inellipse;
        e.b *= 1.01;
        let p = spec.vertices(0.3).unwrap();
        assert!(closure_residual_against(&p, &e) > 1e-4);
    }

    #[test]
    fn casey_spec_objects_match_its_vertices() {
        let spec = FamilySpec::casey(5, 0.5).unwrap();
        let bo = spec.brocard_objects();
        assert!((bo.circumcircle.radius - 1.0).abs() < 1e-14);
        assert!(bo.circumcircle.center.norm() < 1e-14);
        assert!(close(bo.limiting_points.0, pt(0.5, 0.0), 1e-14));
        assert!(close(bo.limiting_points.1.unwrap(), pt(2.0, 0.0), 1e-14));
        assert!(close(bo.symmedian, pt(2.0 * 0.5 / 1.25, 0.0), 1e-14));
        for t in spec.t_grid(16) {
            assert!(closure_residual(&spec, t).unwrap() < 1e-9);
            let snap = spec.snapshot(t).unwrap();
            let c = brocard_points_by_concurrence(&snap, bo.brocard_angle).unwrap();
            assert!(close(c.omega1, bo.brocard_points[0], 1e-9));
            assert!(close(c.omega2, bo.brocard_points[1], 1e-9));
        }
    }

    #[test]
    fn casey_measured_angle_matches_inversive_closed_form() {
        let spec = FamilySpec::casey(5, 0.5).unwrap();
        let w = brocard_angle_measured(&spec.snapshot(0.123).unwrap()).unwrap();
        assert!((w - brocard_angle_closed(5, casey_to_inversive(0.5))).abs() < 1e-10);
    }

    #[test]
    fn inversion_about_limiting_points_is_regular() {
        for &x0 in &[0.3, 0.5, -0.6] {
            let spec = FamilySpec::inversive(6, x0).unwrap();
            let bo = spec.brocard_objects();
            let p = spec.vertices(0.4).unwrap();
            for l in [bo.limiting_points.0, bo.limiting_points.1.unwrap()] {
                let c = Circle::new(l, 1.0).unwrap();
                let img = p.try_map(|v| invert_point(v, &c)).unwrap();
                assert!(regularity_defect(&img).unwrap() < 1e-10);
            }
        }
    }
}
