//! Brocard angle `ω'(Q)` of the inversive image of a harmonic polygon about
//! a point `Q`, its level sets, and the evidence that they are circles of
//! the pencil spanned by the circumcircle and the Brocard circle.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{brocard_angle_measured, fit_symmedian, FamilySpec, PolygonSnapshot};
use crate::geom::{bbox_scale, invert_point, pt, CPoint, Circle, CirclePencil, Polygon};

/// Distance from the circumcircle, relative to its radius, below which `Q`
/// is treated as lying on it.
pub const ON_CIRCUMCIRCLE: f64 = 1e-9;

/// Vertex-wise inversion of `p` in the circle of the given radius centered
/// at `q`.
pub fn inverted_polygon(p: &Polygon, q: CPoint, radius: f64) -> Result<Polygon> {
    let c = Circle::new(q, radius)?;
    let scale = p.scale();
    if p.vertices().iter().any(|v| (v - q).norm() <= 1e-12 * scale) {
        return Err(Error::InversionCenter);
    }
    p.try_map(|v| invert_point(v, &c))
}

fn check_off_circumcircle(spec: &FamilySpec, q: CPoint) -> Result<()> {
    let c = spec.brocard_objects().circumcircle;
    if ((q - c.center).norm() - c.radius).abs() <= ON_CIRCUMCIRCLE * c.radius {
        return Err(Error::OnCircumcircle);
    }
    Ok(())
}

/// Snapshot of the inverted polygon at phase `t`.
pub fn inverted_snapshot(spec: &FamilySpec, t: f64, q: CPoint) -> Result<PolygonSnapshot> {
    check_off_circumcircle(spec, q)?;
    Ok(PolygonSnapshot::new(
        t,
        inverted_polygon(&spec.vertices(t)?, q, 1.0)?,
    ))
}

/// `ω' = arccot(Σs'² / (4A'))` of the inverted polygon.
pub fn omega_prime(spec: &FamilySpec, t: f64, q: CPoint) -> Result<f64> {
    brocard_angle_measured(&inverted_snapshot(spec, t, q)?)
}

/// `ω'` together with the harmonicity residual of the image.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OmegaPrime {
    pub omega_prime: f64,
    /// Symmedian residual of the image at its fitted symmedian point.
    pub harmonic_residual: f64,
    pub symmedian: CPoint,
}

pub fn omega_prime_checked(spec: &FamilySpec, t: f64, q: CPoint) -> Result<OmegaPrime> {
    let snap = inverted_snapshot(spec, t, q)?;
    let (k, harmonic_residual) = fit_symmedian(&snap)?;
    Ok(OmegaPrime {
        omega_prime: brocard_angle_measured(&snap)?,
        harmonic_residual,
        symmedian: k,
    })
}

/// Largest deviation of `ω'(Q)` over `phases` equally spaced phases.
pub fn phase_deviation(spec: &FamilySpec, q: CPoint, phases: usize) -> Result<f64> {
    let vals = spec
        .t_grid(phases)
        .into_iter()
        .map(|t| omega_prime(spec, t + 0.1, q))
        .collect::<Result<Vec<_>>>()?;
    let (lo, hi) = vals
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| {
            (l.min(*v), h.max(*v))
        });
    Ok(hi - lo)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowKind {
    /// Pencil member around `ℓ1`, inside the circumcircle.
    InnerL1,
    /// Pencil member around `ℓ1`, outside the circumcircle.
    OuterL1,
    /// Pencil member around `ℓ2`.
    L2,
    Circumcircle,
    BrocardCircle,
    LemoineAxis,
}

/// `ω'` sampled along one curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsocurveRow {
    pub kind: RowKind,
    /// Member circle; `None` for the Lemoine axis.
    pub circle: Option<Circle>,
    /// Distance of the member's center from its limiting point.
    pub offset: f64,
    pub mean: f64,
    pub max_dev: f64,
    /// Largest symmedian residual of the inverted polygons.
    pub harmonic_residual: f64,
    pub skipped: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConjectureVerdict {
    Supported,
    Violated,
    Inconclusive,
}

impl ConjectureVerdict {
    /// Supported below `supported`, violated above `violated`.
    pub fn from_deviation(dev: f64, supported: f64, violated: f64) -> Self {
        if dev < supported {
            ConjectureVerdict::Supported
        } else if dev > violated || dev.is_nan() {
            ConjectureVerdict::Violated
        } else {
            ConjectureVerdict::Inconclusive
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsocurveReport {
    pub n: usize,
    pub x0: f64,
    pub t: f64,
    pub omega: f64,
    pub rows: Vec<IsocurveRow>,
    /// Largest per-circle deviation over the sampled members.
    pub max_member_dev: f64,
    /// `|mean ω' - ω|` on the Brocard circle.
    pub brocard_dev: f64,
    /// Largest `|ω' - ω|` along the Lemoine axis.
    pub lemoine_dev: f64,
    /// Means strictly monotone in the offset along each branch.
    pub monotone: bool,
    pub harmonicity_failures: usize,
    pub verdict: ConjectureVerdict,
}

/// Thresholds of [`isocurve_test`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IsocurveConfig {
    pub supported: f64,
    pub violated: f64,
    /// Harmonicity residual of an inverted polygon above which it is
    /// counted as a failure.
    pub harmonic_tol: f64,
    /// Lemoine axis samples span `|y| <= lemoine_extent · R`.
    pub lemoine_extent: f64,
}

impl Default for IsocurveConfig {
    fn default() -> Self {
        IsocurveConfig {
            supported: 1e-7,
            violated: 1e-4,
            harmonic_tol: 1e-8,
            lemoine_extent: 10.0,
        }
    }
}

fn geometric(lo: f64, hi: f64, m: usize) -> Vec<f64> {
    if m == 1 {
        return vec![(lo * hi).sqrt()];
    }
    (0..m)
        .map(|j| lo * (hi / lo).powf(j as f64 / (m - 1) as f64))
        .collect()
}

/// Offsets of the sampled pencil members from their limiting points on
/// the three branches, `n_circles` in total.
pub fn member_offsets(
    pencil: &CirclePencil,
    circumcircle: &Circle,
    n_circles: usize,
) -> Vec<(RowKind, f64)> {
    let r = circumcircle.radius;
    let s_c = (circumcircle.center - pencil.l1).norm();
    let span = (pencil.l2 - pencil.l1).norm();
    let band = (0.02 * r).max(1e-3 * r);
    let inner = n_circles.div_ceil(3);
    let outer = (n_circles - inner).div_ceil(2);
    let l2 = n_circles - inner - outer;
    let mut out = Vec::with_capacity(n_circles);
    let inner_hi = (s_c - band).max(0.5 * s_c);
    out.extend(
        geometric(0.05 * s_c, inner_hi, inner)
            .into_iter()
            .map(|s| (RowKind::InnerL1, s)),
    );
    out.extend(
        geometric(band, 4.0 * r, outer)
            .into_iter()
            .map(|g| (RowKind::OuterL1, s_c + g)),
    );
    out.extend(
        geometric(0.02 * span, 4.0 * r.max(span), l2)
            .into_iter()
            .map(|s| (RowKind::L2, s)),
    );
    out
}

fn sample_curve<I>(spec: &FamilySpec, t: f64, pts: I) -> Result<(Vec<f64>, f64)>
where
    I: IntoIterator<Item = CPoint>,
{
    let mut vals = Vec::new();
    let mut harm = 0.0_f64;
    for q in pts {
        let o = omega_prime_checked(spec, t, q)?;
        vals.push(o.omega_prime);
        harm = harm.max(o.harmonic_residual);
    }
    Ok((vals, harm))
}

fn mean_and_dev(vals: &[f64], target: Option<f64>) -> (f64, f64) {
    let mean = vals.iter().sum::<f64>() / vals.len() as f64;
    let center = target.unwrap_or(mean);
    let dev = vals.iter().map(|v| (v - center).abs()).fold(0.0, f64::max);
    (mean, dev)
}

fn ring(c: &Circle, n_points: usize) -> impl Iterator<Item = CPoint> + '_ {
    (0..n_points).map(move |j| c.point_at(2.0 * PI * (j as f64 + 0.25) / n_points as f64))
}

/// Evaluates `ω'` around `n_circles` pencil members, the Brocard circle and
/// the Lemoine axis at `n_points` points each.
pub fn isocurve_test(
    spec: &FamilySpec,
    n_circles: usize,
    n_points: usize,
    cfg: &IsocurveConfig,
) -> Result<IsocurveReport> {
    if n_points < 3 || n_circles == 0 {
        return Err(Error::InconsistentInput(
            "isocurve test needs at least one circle and three points".into(),
        ));
    }
    let objs = spec.brocard_objects();
    let (pencil, brocard, lemoine) = match (objs.pencil, objs.brocard_circle, objs.lemoine_axis) {
        (Some(p), Some(b), Some(l)) => (p, b, l),
        _ => {
            return Err(Error::InconsistentInput(
                "the regular polygon has no Brocard circle or pencil".into(),
            ))
        }
    };
    let omega = objs.brocard_angle;
    let c = objs.circumcircle;
    let t = 0.3 * spec.period();
    let mut rows = Vec::new();
    let mut harmonicity_failures = 0;

    for (kind, offset) in member_offsets(&pencil, &c, n_circles) {
        let circle = pencil.member_beyond(kind != RowKind::L2, offset)?;
        let (vals, harm) = sample_curve(spec, t, ring(&circle, n_points))?;
        if harm > cfg.harmonic_tol {
            harmonicity_failures += 1;
        }
        let (mean, max_dev) = mean_and_dev(&vals, None);
        rows.push(IsocurveRow {
            kind,
            circle: Some(circle),
            offset,
            mean,
            max_dev,
            harmonic_residual: harm,
            skipped: None,
        });
    }
    rows.push(IsocurveRow {
        kind: RowKind::Circumcircle,
        circle: Some(c),
        offset: (c.center - pencil.l1).norm(),
        mean: 0.0,
        max_dev: 0.0,
        harmonic_residual: 0.0,
        skipped: Some("inverted polygon is collinear on the circumcircle".into()),
    });

    let (vals, harm) = sample_curve(spec, t, ring(&brocard, n_points))?;
    let (bmean, bdev) = mean_and_dev(&vals, Some(omega));
    rows.push(IsocurveRow {
        kind: RowKind::BrocardCircle,
        circle: Some(brocard),
        offset: (brocard.center - pencil.l1).norm(),
        mean: bmean,
        max_dev: bdev,
        harmonic_residual: harm,
        skipped: None,
    });

    let extent = cfg.lemoine_extent * c.radius;
    let lpts = (0..n_points).map(|j| {
        let y = extent * (2.0 * j as f64 / (n_points - 1) as f64 - 1.0);
        lemoine.point + lemoine.dir * y
    });
    let (vals, lharm) = sample_curve(spec, t, lpts)?;
    let (lmean, ldev) = mean_and_dev(&vals, Some(omega));
    rows.push(IsocurveRow {
        kind: RowKind::LemoineAxis,
        circle: None,
        offset: f64::INFINITY,
        mean: lmean,
        max_dev: ldev,
        harmonic_residual: lharm,
        skipped: None,
    });
    for h in [harm, lharm] {
        if h > cfg.harmonic_tol {
            harmonicity_failures += 1;
        }
    }

    let member_rows = || {
        rows.iter()
            .filter(|r| matches!(r.kind, RowKind::InnerL1 | RowKind::OuterL1 | RowKind::L2))
    };
    let max_member_dev = member_rows().map(|r| r.max_dev).fold(0.0, f64::max);
    let monotone = [RowKind::InnerL1, RowKind::OuterL1, RowKind::L2]
        .iter()
        .all(|&k| {
            let means: Vec<f64> = member_rows()
                .filter(|r| r.kind == k)
                .map(|r| r.mean)
                .collect();
            let gaps: Vec<f64> = means.windows(2).map(|w| w[1] - w[0]).collect();
            let min_gap = cfg.supported;
            gaps.iter().all(|g| *g > min_gap) || gaps.iter().all(|g| *g < -min_gap)
        });
    let worst = max_member_dev.max(bdev).max(ldev);
    let mut verdict = ConjectureVerdict::from_deviation(worst, cfg.supported, cfg.violated);
    if !monotone && verdict == ConjectureVerdict::Supported {
        verdict = ConjectureVerdict::Inconclusive;
    }
    Ok(IsocurveReport {
        n: spec.n(),
        x0: spec.x0(),
        t,
        omega,
        rows,
        max_member_dev,
        brocard_dev: bdev,
        lemoine_dev: ldev,
        monotone,
        harmonicity_failures,
        verdict,
    })
}

/// Axis-aligned sampling window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bbox {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

impl Bbox {
    /// Window symmetric about the x-axis containing the circumcircle and
    /// both limiting points with a margin.
    pub fn around(spec: &FamilySpec) -> Bbox {
        let o = spec.brocard_objects();
        let c = o.circumcircle;
        let mut pts = vec![
            c.center - c.radius,
            c.center + c.radius,
            o.limiting_points.0,
        ];
        if let Some(l2) = o.limiting_points.1 {
            pts.push(l2);
        }
        let xmin = pts.iter().map(|p| p.re).fold(f64::INFINITY, f64::min);
        let xmax = pts.iter().map(|p| p.re).fold(f64::NEG_INFINITY, f64::max);
        let margin = 0.25 * (xmax - xmin);
        let half = 0.5 * (xmax - xmin) + margin;
        Bbox {
            xmin: xmin - margin,
            xmax: xmax + margin,
            ymin: -half,
            ymax: half,
        }
    }
}

/// `ω'` on a rectangular lattice; masked nodes hold `NaN`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OmegaField {
    pub bbox: Bbox,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    /// Row-major, `values[j * xs.len() + i]` at `(xs[i], ys[j])`.
    pub values: Vec<f64>,
    pub mask: Vec<bool>,
}

impl OmegaField {
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.xs.len() + i]
    }

    pub fn cell_size(&self) -> f64 {
        let dx = self.xs[1] - self.xs[0];
        let dy = self.ys[1] - self.ys[0];
        dx.hypot(dy)
    }

    /// Largest `|ω'(x, y) - ω'(x, -y)|` over unmasked mirrored nodes; the
    /// y-lattice must be symmetric.
    pub fn mirror_asymmetry(&self) -> f64 {
        let (nx, ny) = (self.xs.len(), self.ys.len());
        let mut worst = 0.0_f64;
        for j in 0..ny / 2 {
            for i in 0..nx {
                let (a, b) = (self.at(i, j), self.at(i, ny - 1 - j));
                if a.is_finite() && b.is_finite() {
                    worst = worst.max((a - b).abs());
                }
            }
        }
        worst
    }

    /// Node holding the largest value.
    pub fn argmax(&self) -> Option<CPoint> {
        let nx = self.xs.len();
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_finite())
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(idx, _)| pt(self.xs[idx % nx], self.ys[idx / nx]))
    }
}

/// Dense evaluation of `ω'` at phase 0. Nodes within `1e-3 R` of the
/// circumcircle, or where the inversion fails, are masked.
pub fn omega_field(spec: &FamilySpec, bbox: Bbox, resolution: usize) -> Result<OmegaField> {
    if resolution < 16 {
        return Err(crate::error::out_of_range(
            "resolution",
            resolution as f64,
            "resolution >= 16",
        ));
    }
    let c = spec.brocard_objects().circumcircle;
    let axis = |lo: f64, hi: f64| -> Vec<f64> {
        (0..resolution)
            .map(|k| lo + (hi - lo) * k as f64 / (resolution - 1) as f64)
            .collect()
    };
    let xs = axis(bbox.xmin, bbox.xmax);
    let ys = axis(bbox.ymin, bbox.ymax);
    let poly = spec.vertices(0.0)?;
    let mut values = Vec::with_capacity(resolution * resolution);
    let mut mask = Vec::with_capacity(resolution * resolution);
    for &y in &ys {
        for &x in &xs {
            let q = pt(x, y);
            let near = ((q - c.center).norm() - c.radius).abs() < 1e-3 * c.radius;
            let v = if near {
                None
            } else {
                inverted_polygon(&poly, q, 1.0)
                    .ok()
                    .and_then(|p| brocard_angle_measured(&PolygonSnapshot::new(0.0, p)).ok())
            };
            mask.push(v.is_none());
            values.push(v.unwrap_or(f64::NAN));
        }
    }
    Ok(OmegaField {
        bbox,
        xs,
        ys,
        values,
        mask,
    })
}

/// Level-set segments of a field by marching squares. Cells touching a
/// masked node are skipped; saddle cells are resolved by the cell average.
pub fn contour(field: &OmegaField, level: f64) -> Vec<(CPoint, CPoint)> {
    let (nx, ny) = (field.xs.len(), field.ys.len());
    let mut segs = Vec::new();
    for j in 0..ny.saturating_sub(1) {
        for i in 0..nx.saturating_sub(1) {
            // corners counter-clockwise from bottom-left
            let idx = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
            let v = idx.map(|(a, b)| field.at(a, b) - level);
            if v.iter().any(|x| !x.is_finite()) {
                continue;
            }
            let p = idx.map(|(a, b)| pt(field.xs[a], field.ys[b]));
            let cross = |k: usize| -> Option<CPoint> {
                let (a, b) = (v[k], v[(k + 1) % 4]);
                if (a > 0.0) != (b > 0.0) {
                    let s = a / (a - b);
                    Some(p[k] + (p[(k + 1) % 4] - p[k]) * s)
                } else {
                    None
                }
            };
            let hits: Vec<(usize, CPoint)> =
                (0..4).filter_map(|k| cross(k).map(|q| (k, q))).collect();
            match hits.len() {
                2 => segs.push((hits[0].1, hits[1].1)),
                4 => {
                    let center_above = v.iter().sum::<f64>() / 4.0 > 0.0;
                    let corner0_above = v[0] > 0.0;
                    if center_above == corner0_above {
                        segs.push((hits[0].1, hits[1].1));
                        segs.push((hits[2].1, hits[3].1));
                    } else {
                        segs.push((hits[3].1, hits[0].1));
                        segs.push((hits[1].1, hits[2].1));
                    }
                }
                _ => {}
            }
        }
    }
    segs
}

/// Largest distance of segment endpoints from a circle.
pub fn contour_circle_residual(segs: &[(CPoint, CPoint)], c: &Circle) -> f64 {
    segs.iter()
        .flat_map(|(a, b)| [*a, *b])
        .map(|p| ((p - c.center).norm() - c.radius).abs())
        .fold(0.0, f64::max)
}

/// Configuration scale used for relative tolerances of `Q` positions.
pub fn configuration_scale(spec: &FamilySpec) -> f64 {
    let o = spec.brocard_objects();
    let mut pts = vec![o.circumcircle.center, o.limiting_points.0];
    pts.extend(o.limiting_points.1);
    bbox_scale(&pts).max(o.circumcircle.radius)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::regularity_defect;

    #[test]
    fn inversion_about_limiting_points_is_regular() {
        let spec = FamilySpec::inversive(5, 0.5).unwrap();
        let (l1, l2) = spec.brocard_objects().limiting_points;
        let p = spec.vertices(0.4).unwrap();
        for q in [l1, l2.unwrap()] {
            let img = inverted_polygon(&p, q, 1.0).unwrap();
            assert!(regularity_defect(&img).unwrap() < 1e-10);
            let w = omega_prime(&spec, 0.4, q).unwrap();
            assert!((w - (PI / 2.0 - PI / 5.0)).abs() < 1e-10);
        }
    }

    #[test]
    fn vertex_and_circumcircle_rejected() {
        let spec = FamilySpec::casey(4, 0.5).unwrap();
        let p = spec.vertices(0.0).unwrap();
        assert_eq!(
            inverted_polygon(&p, p.vertex(1), 1.0),
            Err(Error::InversionCenter)
        );
        assert_eq!(
            omega_prime(&spec, 0.0, pt(0.0, 1.0)),
            Err(Error::OnCircumcircle)
        );
    }

    #[test]
    fn radius_is_irrelevant() {
        let spec = FamilySpec::casey(5, 0.3).unwrap();
        let p = spec.vertices(0.2).unwrap();
        let q = pt(0.1, 0.4);
        let a = brocard_angle_measured(&PolygonSnapshot::new(
            0.0,
            inverted_polygon(&p, q, 1.0).unwrap(),
        ))
        .unwrap();
        let b = brocard_angle_measured(&PolygonSnapshot::new(
            0.0,
            inverted_polygon(&p, q, 2.0).unwrap(),
        ))
        .unwrap();
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn brocard_circle_and_lemoine_axis_preserve_omega() {
        let spec = FamilySpec::casey(4, 0.5).unwrap();
        let o = spec.brocard_objects();
        let b = o.brocard_circle.unwrap();
        let l = o.lemoine_axis.unwrap();
        for q in [
            b.point_at(0.7),
            b.point_at(2.0),
            l.point + l.dir * 3.0,
            l.point - l.dir * 9.0,
        ] {
            let w = omega_prime_checked(&spec, 0.1, q).unwrap();
            assert!((w.omega_prime - o.brocard_angle).abs() < 1e-8, "{q}");
            assert!(w.harmonic_residual < 1e-8);
        }
    }

    #[test]
    fn independent_of_phase() {
        let spec = FamilySpec::inversive(5, 0.3).unwrap();
        for q in [pt(0.2, 0.3), pt(-2.0, 1.0), pt(0.9, -0.1)] {
            assert!(phase_deviation(&spec, q, 8).unwrap() < 1e-9);
        }
    }

    #[test]
    fn conjecture_supported() {
        let spec = FamilySpec::inversive(4, 0.5).unwrap();
        let r = isocurve_test(&spec, 12, 64, &IsocurveConfig::default()).unwrap();
        assert_eq!(r.verdict, ConjectureVerdict::Supported, "{r:#?}");
        assert!(r.monotone);
        assert_eq!(r.harmonicity_failures, 0);
        assert!(r.rows.iter().any(|row| row.skipped.is_some()));
        assert!(r.brocard_dev < 1e-8);
    }

    #[test]
    fn field_symmetry_and_maximum() {
        let spec = FamilySpec::casey(5, 0.4).unwrap();
        let bbox = Bbox::around(&spec);
        let f = omega_field(&spec, bbox, 41).unwrap();
        assert!(f.mirror_asymmetry() < 1e-10);
        assert!(f.mask.iter().any(|m| !m));
        let (l1, l2) = spec.brocard_objects().limiting_points;
        let top = f.argmax().unwrap();
        let near = (top - l1).norm().min((top - l2.unwrap()).norm());
        assert!(near < 2.0 * f.cell_size(), "argmax {top}");
        assert!(omega_field(&spec, bbox, 8).is_err());
    }

    #[test]
    fn contour_follows_pencil_circle() {
        let spec = FamilySpec::casey(4, 0.5).unwrap();
        let o = spec.brocard_objects();
        let pencil = o.pencil.unwrap();
        let member = pencil.member_beyond(true, 0.25).unwrap();
        let level = omega_prime(&spec, 0.0, member.point_at(0.3)).unwrap();
        let f = omega_field(
            &spec,
            Bbox {
                xmin: -1.0,
                xmax: 1.0,
                ymin: -1.0,
                ymax: 1.0,
            },
            81,
        )
        .unwrap();
        let segs: Vec<_> = contour(&f, level)
            .into_iter()
            .filter(|(a, _)| a.norm() < 0.95)
            .collect();
        assert!(!segs.is_empty());
        assert!(contour_circle_residual(&segs, &member) < f.cell_size());
    }

    #[test]
    fn marching_squares_on_radial_field() {
        let xs: Vec<f64> = (0..21).map(|k| -1.0 + 0.1 * k as f64).collect();
        let ys = xs.clone();
        let values = ys
            .iter()
            .flat_map(|y| xs.iter().map(move |x| x.hypot(*y)))
            .collect::<Vec<_>>();
        let f = OmegaField {
            bbox: Bbox {
                xmin: -1.0,
                xmax: 1.0,
                ymin: -1.0,
                ymax: 1.0,
            },
            mask: vec![false; values.len()],
            xs,
            ys,
            values,
        };
        let segs = contour(&f, 0.5);
        let c = Circle::new(pt(0.0, 0.0), 0.5).unwrap();
        assert!(segs.len() > 10);
        assert!(contour_circle_residual(&segs, &c) < 0.02);
    }
}
