//! Deterministic SVG 1.1 figures: fixed viewBox, six-decimal coordinates,
//! y-axis pointing up.

use std::fmt::Write as _;

use crate::error::Result;
use crate::family::FamilySpec;
use crate::geom::{circle_through, pt, AxisEllipse, CPoint, Circle, Line, Polygon};
use crate::invariants::apollonius_radii;
use crate::isocurves::{contour, member_offsets, Bbox, OmegaField, RowKind};
use crate::transforms::{lateral_polygons, HomotheticPair};

/// Accumulates SVG elements over a fixed world-coordinate window.
#[derive(Debug, Clone)]
pub struct Canvas {
    view: Bbox,
    width_px: u32,
    body: String,
}

fn f6(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

impl Canvas {
    pub fn new(view: Bbox, width_px: u32) -> Self {
        Canvas {
            view,
            width_px,
            body: String::new(),
        }
    }

    fn stroke(&self) -> f64 {
        0.003 * (self.view.xmax - self.view.xmin).max(self.view.ymax - self.view.ymin)
    }

    fn xy(&self, p: CPoint) -> String {
        format!("{},{}", f6(p.re), f6(-p.im))
    }

    pub fn polygon(&mut self, p: &Polygon, stroke: &str, fill: &str) {
        let pts: Vec<String> = p.vertices().iter().map(|v| self.xy(*v)).collect();
        let _ = writeln!(
            self.body,
            r#"<polygon points="{}" fill="{fill}" stroke="{stroke}" stroke-width="{}"/>"#,
            pts.join(" "),
            f6(self.stroke())
        );
    }

    pub fn circle(&mut self, c: &Circle, stroke: &str, dashed: bool) {
        let dash = if dashed {
            format!(r#" stroke-dasharray="{}""#, f6(4.0 * self.stroke()))
        } else {
            String::new()
        };
        let _ = writeln!(
            self.body,
            r#"<circle cx="{}" cy="{}" r="{}" fill="none" stroke="{stroke}" stroke-width="{}"{dash}/>"#,
            f6(c.center.re),
            f6(-c.center.im),
            f6(c.radius),
            f6(self.stroke())
        );
    }

    pub fn ellipse(&mut self, e: &AxisEllipse, stroke: &str) {
        let _ = writeln!(
            self.body,
            r#"<ellipse cx="{}" cy="0.000000" rx="{}" ry="{}" fill="none" stroke="{stroke}" stroke-width="{}"/>"#,
            f6(e.cx),
            f6(e.a),
            f6(e.b),
            f6(self.stroke())
        );
    }

    pub fn segment(&mut self, a: CPoint, b: CPoint, stroke: &str) {
        let _ = writeln!(
            self.body,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{stroke}" stroke-width="{}"/>"#,
            f6(a.re),
            f6(-a.im),
            f6(b.re),
            f6(-b.im),
            f6(self.stroke())
        );
    }

    /// The part of an infinite line crossing the window.
    pub fn line(&mut self, l: &Line, stroke: &str) {
        let v = &self.view;
        let center = pt(0.5 * (v.xmin + v.xmax), 0.5 * (v.ymin + v.ymax));
        let reach = (v.xmax - v.xmin).hypot(v.ymax - v.ymin);
        let foot = l.foot(center);
        self.segment(foot - l.dir * reach, foot + l.dir * reach, stroke);
    }

    pub fn dot(&mut self, p: CPoint, fill: &str) {
        let _ = writeln!(
            self.body,
            r#"<circle cx="{}" cy="{}" r="{}" fill="{fill}"/>"#,
            f6(p.re),
            f6(-p.im),
            f6(2.5 * self.stroke())
        );
    }

    /// Axis-aligned cell from `lo` to `hi` in world coordinates.
    pub fn cell(&mut self, lo: CPoint, hi: CPoint, fill: &str) {
        let _ = writeln!(
            self.body,
            r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{fill}"/>"#,
            f6(lo.re),
            f6(-hi.im),
            f6(hi.re - lo.re),
            f6(hi.im - lo.im)
        );
    }

    pub fn finish(&self) -> String {
        let v = &self.view;
        let (w, h) = (v.xmax - v.xmin, v.ymax - v.ymin);
        let height_px = (self.width_px as f64 * h / w).round() as u32;
        format!(
            concat!(
                r#"<?xml version="1.0" encoding="UTF-8"?>"#,
                "\n",
                r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="{} {} {} {}">"#,
                "\n",
                r#"<rect x="{}" y="{}" width="{}" height="{}" fill="white"/>"#,
                "\n{}</svg>\n"
            ),
            self.width_px,
            height_px,
            f6(v.xmin),
            f6(-v.ymax),
            f6(w),
            f6(h),
            f6(v.xmin),
            f6(-v.ymax),
            f6(w),
            f6(h),
            self.body
        )
    }
}

/// Window containing `pts` with a 10% margin, centered on their bounding
/// box.
pub fn fit_view(pts: &[CPoint]) -> Bbox {
    let xmin = pts.iter().map(|p| p.re).fold(f64::INFINITY, f64::min);
    let xmax = pts.iter().map(|p| p.re).fold(f64::NEG_INFINITY, f64::max);
    let ymin = pts.iter().map(|p| p.im).fold(f64::INFINITY, f64::min);
    let ymax = pts.iter().map(|p| p.im).fold(f64::NEG_INFINITY, f64::max);
    let m = 0.1 * (xmax - xmin).max(ymax - ymin).max(1e-9);
    Bbox {
        xmin: xmin - m,
        xmax: xmax + m,
        ymin: ymin - m,
        ymax: ymax + m,
    }
}

fn circle_extent(c: &Circle) -> [CPoint; 2] {
    [
        c.center - pt(c.radius, c.radius),
        c.center + pt(c.radius, c.radius),
    ]
}

/// Polygon, circumcircle, Brocard inellipse, Brocard circle, Brocard and
/// limiting points, symmedian point and Lemoine axis.
pub fn brocard_figure(spec: &FamilySpec, t: f64) -> Result<String> {
    let o = spec.brocard_objects();
    let p = spec.vertices(t)?;
    let mut pts = circle_extent(&o.circumcircle).to_vec();
    pts.extend(o.limiting_points.1);
    let mut c = Canvas::new(fit_view(&pts), 800);
    c.circle(&o.circumcircle, "#c00000", true);
    c.ellipse(&o.inellipse, "#008000");
    if let Some(b) = o.brocard_circle {
        c.circle(&b, "#8b4513", true);
    }
    if let Some(l) = o.lemoine_axis {
        c.line(&l, "#b000b0");
    }
    c.polygon(&p, "#0000c0", "none");
    for q in o.brocard_points {
        c.dot(q, "#008000");
    }
    c.dot(o.symmedian, "#000000");
    c.dot(o.limiting_points.0, "#808080");
    if let Some(l2) = o.limiting_points.1 {
        c.dot(l2, "#808080");
    }
    Ok(c.finish())
}

/// Homothetic pair, its polygon at `t`, and the two lateral polar images
/// about the inner foci.
pub fn homothetic_figure(pair: &HomotheticPair, t: f64) -> Result<String> {
    let lateral = lateral_polygons(pair, t)?;
    let poly = pair.vertices(t)?;
    let o = &pair.outer;
    let mut pts = vec![pt(o.cx - o.a, -o.b), pt(o.cx + o.a, o.b)];
    for l in &lateral {
        pts.extend_from_slice(l.vertices());
    }
    let mut c = Canvas::new(fit_view(&pts), 800);
    c.ellipse(&pair.outer, "#000000");
    c.ellipse(&pair.inner, "#8b4513");
    c.polygon(&poly, "#0000c0", "none");
    for l in &lateral {
        c.polygon(l, "#b000b0", "none");
    }
    for f in pair.inner_foci() {
        c.dot(f, "#000000");
    }
    Ok(c.finish())
}

/// Polygon with the circle through each vertex and both limiting points.
pub fn apollonius_figure(spec: &FamilySpec, t: f64) -> Result<String> {
    let o = spec.brocard_objects();
    let p = spec.vertices(t)?;
    let snap = spec.snapshot(t)?;
    let mut pts = circle_extent(&o.circumcircle).to_vec();
    let l1 = o.limiting_points.0;
    let mut circles = Vec::new();
    if let Some(l2) = o.limiting_points.1 {
        pts.push(l2);
        for (v, r) in p.vertices().iter().zip(apollonius_radii(&snap, l1, l2)) {
            if r.is_finite() && r < 20.0 * o.circumcircle.radius {
                let a = circle_through(*v, l1, l2)?;
                pts.extend(circle_extent(&a));
                circles.push(a);
            }
        }
    }
    let mut c = Canvas::new(fit_view(&pts), 800);
    c.circle(&o.circumcircle, "#c00000", true);
    for a in &circles {
        c.circle(a, "#008080", false);
    }
    c.polygon(&p, "#0000c0", "none");
    c.dot(l1, "#808080");
    if let Some(l2) = o.limiting_points.1 {
        c.dot(l2, "#808080");
    }
    Ok(c.finish())
}

/// Sampled pencil members, circumcircle, Brocard circle and Lemoine axis.
pub fn pencil_figure(spec: &FamilySpec, t: f64, n_circles: usize) -> Result<String> {
    let o = spec.brocard_objects();
    let p = spec.vertices(t)?;
    let view = Bbox::around(spec);
    let mut c = Canvas::new(view, 800);
    if let Some(pencil) = o.pencil {
        for (kind, offset) in member_offsets(&pencil, &o.circumcircle, n_circles) {
            let m = pencil.member_beyond(kind != RowKind::L2, offset)?;
            c.circle(&m, "#a0a0a0", false);
        }
        c.line(&pencil.radical_axis, "#b000b0");
    }
    c.circle(&o.circumcircle, "#c00000", false);
    if let Some(b) = o.brocard_circle {
        c.circle(&b, "#8b4513", true);
    }
    c.polygon(&p, "#0000c0", "none");
    c.dot(o.limiting_points.0, "#000000");
    if let Some(l2) = o.limiting_points.1 {
        c.dot(l2, "#000000");
    }
    Ok(c.finish())
}

/// Piecewise-linear blue-to-yellow color ramp on `[0, 1]`.
pub fn ramp(s: f64) -> String {
    const STOPS: [(f64, [f64; 3]); 4] = [
        (0.0, [68.0, 1.0, 84.0]),
        (0.33, [59.0, 82.0, 139.0]),
        (0.66, [33.0, 145.0, 140.0]),
        (1.0, [253.0, 231.0, 37.0]),
    ];
    let s = if s.is_finite() {
        s.clamp(0.0, 1.0)
    } else {
        0.0
    };
    let k = STOPS
        .iter()
        .rposition(|(x, _)| *x <= s)
        .unwrap_or(0)
        .min(STOPS.len() - 2);
    let (x0, c0) = STOPS[k];
    let (x1, c1) = STOPS[k + 1];
    let u = (s - x0) / (x1 - x0);
    let ch = |i: usize| (c0[i] + (c1[i] - c0[i]) * u).round() as u8;
    format!("#{:02x}{:02x}{:02x}", ch(0), ch(1), ch(2))
}

/// Heatmap of `ω'` with contours at `levels` and the analytic pencil
/// circles overlaid.
pub fn field_figure(
    spec: &FamilySpec,
    field: &OmegaField,
    levels: &[f64],
    n_circles: usize,
) -> Result<String> {
    let o = spec.brocard_objects();
    let mut c = Canvas::new(field.bbox, 800);
    let finite = field.values.iter().filter(|v| v.is_finite());
    let lo = finite.clone().fold(f64::INFINITY, |a, b| a.min(*b));
    let hi = finite.fold(f64::NEG_INFINITY, |a, b| a.max(*b));
    let (nx, ny) = (field.xs.len(), field.ys.len());
    let hx = 0.5 * (field.xs[1] - field.xs[0]);
    let hy = 0.5 * (field.ys[1] - field.ys[0]);
    for j in 0..ny {
        for i in 0..nx {
            let v = field.at(i, j);
            let fill = if v.is_finite() {
                ramp((v - lo) / (hi - lo).max(1e-300))
            } else {
                "#ffffff".to_string()
            };
            let q = pt(field.xs[i], field.ys[j]);
            c.cell(q - pt(hx, hy), q + pt(hx, hy), &fill);
        }
    }
    if let Some(pencil) = o.pencil {
        for (kind, offset) in member_offsets(&pencil, &o.circumcircle, n_circles) {
            let m = pencil.member_beyond(kind != RowKind::L2, offset)?;
            c.circle(&m, "#ffffff", true);
        }
    }
    for &level in levels {
        for (a, b) in contour(field, level) {
            c.segment(a, b, "#000000");
        }
    }
    c.circle(&o.circumcircle, "#c00000", false);
    Ok(c.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figures_are_deterministic() {
        let spec = FamilySpec::inversive(5, 0.5).unwrap();
        let a = brocard_figure(&spec, 0.3).unwrap();
        let b = brocard_figure(&spec, 0.3).unwrap();
        assert_eq!(a, b);
        assert!(a.starts_with("<?xml"));
        assert!(a.contains("viewBox="));
        assert!(a.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn six_decimal_coordinates() {
        let mut c = Canvas::new(
            Bbox {
                xmin: -1.0,
                xmax: 1.0,
                ymin: -1.0,
                ymax: 1.0,
            },
            100,
        );
        c.dot(pt(1.0 / 3.0, -0.0), "#000");
        let s = c.finish();
        assert!(s.contains(r#"cx="0.333333" cy="0.000000""#), "{s}");
    }

    #[test]
    fn ramp_endpoints() {
        assert_eq!(ramp(0.0), "#440154");
        assert_eq!(ramp(1.0), "#fde725");
        assert_eq!(ramp(f64::NAN), "#440154");
    }

    #[test]
    fn regular_polygon_figures_render() {
        let spec = FamilySpec::casey(3, 0.0).unwrap();
        assert!(brocard_figure(&spec, 0.0).is_ok());
        assert!(apollonius_figure(&spec, 0.0).is_ok());
        assert!(pencil_figure(&spec, 0.0, 6).is_ok());
    }
}
