//! Maps between the regular, harmonic and homothetic families: polar images
//! about the symmedian point and the inner foci, lateral areas, and the
//! parameter relations closing the loop.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{out_of_range, Error, Result};
use crate::family::{
    brocard_angle_measured, regular_vertices, vertices_casey, FamilySpec, PolygonSnapshot,
};
use crate::geom::{
    circle_through, line_tangency_residual, point_on_ellipse_residual, polar_dual_polygon, pt,
    AxisEllipse, CPoint, Circle, Polygon,
};
use crate::invariants::{InvariantReport, QuantityId, SweepConfig};
use crate::numeric::{compensated_sum, median, solve_linear, uniform_grid};

/// Two concentric, homothetic ellipses between which a Poncelet family of
/// `N`-gons is interscribed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HomotheticPair {
    pub outer: AxisEllipse,
    pub inner: AxisEllipse,
    pub n: usize,
}

impl HomotheticPair {
    /// Validates concentricity and the closure ratio `1/cos α`.
    pub fn new(n: usize, outer: AxisEllipse, inner: AxisEllipse) -> Result<Self> {
        check_n(n)?;
        let ratio = 1.0 / (PI / n as f64).cos();
        let scale = outer.a.max(outer.b);
        if (outer.cx - inner.cx).abs() > 1e-12 * scale.max(outer.cx.abs()) {
            return Err(Error::InconsistentInput(
                "ellipses are not concentric".into(),
            ));
        }
        for (o, i) in [(outer.a, inner.a), (outer.b, inner.b)] {
            if ((o / i) / ratio - 1.0).abs() > 1e-10 {
                return Err(Error::InconsistentInput(format!(
                    "semiaxis ratio {} differs from the closure ratio 1/cos(pi/{n}) = {ratio}",
                    o / i
                )));
            }
        }
        Ok(HomotheticPair { outer, inner, n })
    }

    pub fn from_inner(n: usize, cx: f64, a_h: f64, b_h: f64) -> Result<Self> {
        check_n(n)?;
        let inner = AxisEllipse::new(cx, a_h, b_h)?;
        let outer = inner.scaled(1.0 / (PI / n as f64).cos());
        Ok(HomotheticPair { outer, inner, n })
    }

    pub fn from_outer(n: usize, cx: f64, a_big: f64, b_big: f64) -> Result<Self> {
        check_n(n)?;
        let outer = AxisEllipse::new(cx, a_big, b_big)?;
        let inner = outer.scaled((PI / n as f64).cos());
        Ok(HomotheticPair { outer, inner, n })
    }

    pub fn alpha(&self) -> f64 {
        PI / self.n as f64
    }

    /// `c_h`, half the focal distance of the inner ellipse.
    pub fn c_h(&self) -> f64 {
        self.inner.focal_half_distance()
    }

    pub fn inner_foci(&self) -> [CPoint; 2] {
        self.inner.foci()
    }

    /// The pair translated so that its center is the origin.
    pub fn centered(&self) -> HomotheticPair {
        HomotheticPair {
            outer: AxisEllipse {
                cx: 0.0,
                ..self.outer
            },
            inner: AxisEllipse {
                cx: 0.0,
                ..self.inner
            },
            n: self.n,
        }
    }

    /// The pair with the semiaxes exchanged (a quarter turn about the
    /// center).
    pub fn swapped(&self) -> HomotheticPair {
        let swap = |e: AxisEllipse| AxisEllipse {
            cx: e.cx,
            a: e.b,
            b: e.a,
        };
        HomotheticPair {
            outer: swap(self.outer),
            inner: swap(self.inner),
            n: self.n,
        }
    }

    /// Polygon at phase `t`: the affine image of the regular polygon.
    pub fn vertices(&self, t: f64) -> Result<Polygon> {
        let o = &self.outer;
        Polygon::new(
            regular_vertices(self.n, t)
                .into_iter()
                .map(|z| pt(o.cx + o.a * z.re, o.b * z.im))
                .collect(),
        )
    }

    /// Period of the family in `t`.
    pub fn period(&self) -> f64 {
        2.0 * self.alpha()
    }

    /// Polar image of the polygon at `t` in the unit circle centered at
    /// `center`.
    pub fn polar_image(&self, t: f64, center: CPoint) -> Result<Polygon> {
        polar_dual_polygon(&self.vertices(t)?, &Circle::new(center, 1.0)?)
    }
}

fn check_n(n: usize) -> Result<()> {
    if n < 3 {
        return Err(out_of_range("N", n as f64, "N >= 3"));
    }
    Ok(())
}

/// The homothetic pair of the polar image of the inversive-frame harmonic
/// family in the unit circle centered at its symmedian point.
pub fn harmonic_to_homothetic(n: usize, x0: f64) -> Result<HomotheticPair> {
    check_n(n)?;
    if !x0.is_finite() {
        return Err(Error::NonFinite("harmonic_to_homothetic"));
    }
    if x0.abs() >= 1.0 {
        return Err(out_of_range("x0", x0, "|x0| < 1"));
    }
    let x2 = x0 * x0;
    let x4 = x2 * x2;
    let a_h = (x2 + 1.0).powi(2) / (1.0 - x2).abs();
    let b_h = x2 + 1.0;
    let x_h = x0 * (3.0 * x4 + 3.0 * x2 + 2.0) / (x4 - 1.0);
    HomotheticPair::from_inner(n, x_h, a_h, b_h)
}

/// Largest incidence residual of the dual vertices on the outer ellipse and
/// tangency residual of the dual sides to the inner ellipse, over `samples`
/// phases of the inversive-frame family.
pub fn homothetic_image_residuals(
    n: usize,
    x0: f64,
    pair: &HomotheticPair,
    samples: usize,
) -> Result<(f64, f64)> {
    let spec = FamilySpec::inversive(n, x0)?;
    let k = spec.brocard_objects().symmedian;
    let polar = Circle::new(k, 1.0)?;
    let mut incidence = 0.0_f64;
    let mut tangency = 0.0_f64;
    for t in spec.t_grid(samples) {
        let dual = polar_dual_polygon(&spec.vertices(t)?, &polar)?;
        for (i, v) in dual.vertices().iter().enumerate() {
            incidence = incidence.max(point_on_ellipse_residual(*v, &pair.outer).abs());
            tangency = tangency.max(line_tangency_residual(&dual.sideline(i), &pair.inner));
        }
    }
    Ok((incidence, tangency))
}

/// Harmonic family obtained as the polar image of a centered homothetic
/// pair in the unit circle at the inner focus `(-c_h, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HarmonicImage {
    /// The centered pair the image was computed from, after the axis swap.
    pub pair: HomotheticPair,
    /// The input had `a_h < b_h` and was rotated a quarter turn.
    pub swapped: bool,
    pub circumcircle: Circle,
    pub caustic: AxisEllipse,
    /// `K1 = f_h`.
    pub symmedian: CPoint,
    /// `|K1 - O1|`.
    pub delta: f64,
    /// `|(δ/R1)² - (1 - (b_h/a_h)²)|`
    pub corollary_residual: f64,
}

impl HarmonicImage {
    /// Harmonic polygon at phase `t`.
    pub fn polygon(&self, t: f64) -> Result<Polygon> {
        self.pair.polar_image(t, self.symmedian)
    }

    /// `arctan(sqrt(1 - (δ/R1)²) cot α)`.
    pub fn brocard_angle(&self) -> f64 {
        let q = self.delta / self.circumcircle.radius;
        ((1.0 - q * q).max(0.0).sqrt() / self.pair.alpha().tan()).atan()
    }

    /// Largest circumcircle incidence and caustic tangency residuals over
    /// `samples` phases.
    pub fn residuals(&self, samples: usize) -> Result<(f64, f64)> {
        let mut incidence = 0.0_f64;
        let mut tangency = 0.0_f64;
        let r = self.circumcircle.radius;
        for t in uniform_grid(0.0, self.pair.period(), samples) {
            let p = self.polygon(t)?;
            for (i, v) in p.vertices().iter().enumerate() {
                incidence = incidence.max((self.circumcircle.residual(*v) / r).abs());
                tangency = tangency.max(line_tangency_residual(&p.sideline(i), &self.caustic));
            }
        }
        Ok((incidence, tangency))
    }
}

pub fn homothetic_to_harmonic(pair: &HomotheticPair) -> Result<HarmonicImage> {
    let scale = pair.outer.a.max(pair.outer.b);
    if pair.outer.cx.abs() > 1e-12 * scale {
        return Err(Error::InconsistentInput(
            "homothetic pair must be centered at the origin".into(),
        ));
    }
    let swapped = pair.inner.a < pair.inner.b;
    let pair = if swapped { pair.swapped() } else { *pair };
    let (a, b) = (pair.inner.a, pair.inner.b);
    let c = pair.c_h();
    let cos2 = pair.alpha().cos().powi(2);
    let k2 = a * a - c * c * cos2;
    let ca = a * pair.alpha().cos();
    let o1 = pt(-c * (1.0 + b * b) / (b * b), 0.0);
    let r1 = a / (b * b);
    let x1 = -c * (a * a + (1.0 - c * c) * cos2) / k2;
    let caustic = AxisEllipse::new(x1, ca / k2, ca / (b * k2.sqrt()))?;
    let symmedian = pt(-c, 0.0);
    let delta = (symmedian - o1).norm();
    let corollary_residual = ((delta / r1).powi(2) - (1.0 - (b / a).powi(2))).abs();
    Ok(HarmonicImage {
        pair,
        swapped,
        circumcircle: Circle::new(o1, r1)?,
        caustic,
        symmedian,
        delta,
        corollary_residual,
    })
}

/// Brocard angles of a harmonic family and of its image after the round
/// trip harmonic -> homothetic -> harmonic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RoundTrip {
    pub omega: f64,
    pub omega_image: f64,
    pub omega_image_measured: f64,
}

pub fn round_trip(n: usize, x0: f64, t: f64) -> Result<RoundTrip> {
    let pair = harmonic_to_homothetic(n, x0)?.centered();
    let image = homothetic_to_harmonic(&pair)?;
    let snap = PolygonSnapshot::new(t, image.polygon(t)?);
    Ok(RoundTrip {
        omega: FamilySpec::inversive(n, x0)?
            .brocard_objects()
            .brocard_angle,
        omega_image: image.brocard_angle(),
        omega_image_measured: brocard_angle_measured(&snap)?,
    })
}

/// Areas of the two polar images of a homothetic polygon in the unit
/// circles centered at the inner foci.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LateralAreas {
    pub t: f64,
    pub a1: f64,
    pub a2: f64,
}

impl LateralAreas {
    /// `1/A1 + 1/A2`
    pub fn inv_sum(&self) -> f64 {
        1.0 / self.a1 + 1.0 / self.a2
    }

    pub fn harmonic_mean(&self) -> f64 {
        2.0 / self.inv_sum()
    }
}

pub fn lateral_polygons(pair: &HomotheticPair, t: f64) -> Result<[Polygon; 2]> {
    let [f1, f2] = pair.inner_foci();
    Ok([pair.polar_image(t, f1)?, pair.polar_image(t, f2)?])
}

pub fn lateral_areas(pair: &HomotheticPair, t: f64) -> Result<LateralAreas> {
    let [p1, p2] = lateral_polygons(pair, t)?;
    Ok(LateralAreas {
        t,
        a1: p1.area(),
        a2: p2.area(),
    })
}

/// Closed form of `1/A1 + 1/A2` for `N = 3` and `N = 5`, with `(a, b)` the
/// outer semiaxes, `a` along the focal axis.
pub fn lateral_inv_area_sum_closed(n: usize, a: f64, b: f64) -> Option<f64> {
    let (a2, b2) = (a * a, b * b);
    match n {
        3 => Some(3f64.sqrt() / 18.0 * (b / a) * (a2 + 3.0 * b2)),
        5 => {
            let num = (a2 * a2 + 10.0 * b2 * a2 + 5.0 * b2 * b2)
                * (5f64.sqrt() * (a2 + 3.0 * b2) + 5.0 * a2 + 7.0 * b2);
            let den = 5.0 * a2 * a2 + 10.0 * b2 * a2 + b2 * b2;
            Some(b / (40.0 * (2.0 * PI / 5.0).sin() * a) * num / den)
        }
        _ => None,
    }
}

impl HomotheticPair {
    /// [`lateral_inv_area_sum_closed`] for this pair.
    pub fn lateral_closed_form(&self) -> Option<f64> {
        let o = &self.outer;
        lateral_inv_area_sum_closed(self.n, o.a.max(o.b), o.a.min(o.b))
    }
}

struct LateralSample {
    areas: [f64; 2],
    sum_sq: [f64; 2],
    sum_sin2: [f64; 2],
    omega: [f64; 2],
}

fn lateral_sample(pair: &HomotheticPair, t: f64) -> Result<LateralSample> {
    let [p1, p2] = lateral_polygons(pair, t)?;
    let s1 = PolygonSnapshot::new(t, p1);
    let s2 = PolygonSnapshot::new(t, p2);
    let sin2 = |s: &PolygonSnapshot| compensated_sum(s.angles.iter().map(|a| (2.0 * a).sin()));
    Ok(LateralSample {
        areas: [s1.area, s2.area],
        sum_sq: [s1.sum_sq_sides(), s2.sum_sq_sides()],
        sum_sin2: [sin2(&s1), sin2(&s2)],
        omega: [brocard_angle_measured(&s1)?, brocard_angle_measured(&s2)?],
    })
}

fn finite(v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite("lateral sum"))
    }
}

/// Sweeps of `1/A1 + 1/A2`, `1/Σs1² + 1/Σs2²` and `1/Σsin 2θ1 + 1/Σsin 2θ2`.
pub fn lateral_sweep(pair: &HomotheticPair, cfg: &SweepConfig) -> Result<Vec<InvariantReport>> {
    let ts = uniform_grid(0.0, pair.period(), cfg.samples);
    let samples = ts
        .iter()
        .map(|&t| lateral_sample(pair, t))
        .collect::<Result<Vec<_>>>()?;
    let collect = |f: &dyn Fn(&LateralSample) -> f64| -> Result<Vec<f64>> {
        samples.iter().map(|s| finite(f(s))).collect()
    };
    let inv_sum = |v: [f64; 2]| 1.0 / v[0] + 1.0 / v[1];
    Ok(vec![
        InvariantReport::from_samples(
            QuantityId::LateralInvAreaSum,
            pair.lateral_closed_form(),
            ts.clone(),
            collect(&|s| inv_sum(s.areas))?,
            cfg,
        ),
        InvariantReport::from_samples(
            QuantityId::LateralInvSumSqSides,
            None,
            ts.clone(),
            collect(&|s| inv_sum(s.sum_sq))?,
            cfg,
        ),
        InvariantReport::from_samples(
            QuantityId::LateralInvSumSin2Theta,
            None,
            ts,
            collect(&|s| inv_sum(s.sum_sin2))?,
            cfg,
        ),
    ])
}

/// Largest `|A1 - A2| / A1` over `samples` phases.
pub fn lateral_symmetry_defect(pair: &HomotheticPair, samples: usize) -> Result<f64> {
    let mut worst = 0.0_f64;
    for t in uniform_grid(0.0, pair.period(), samples) {
        let la = lateral_areas(pair, t)?;
        worst = worst.max((la.a1 - la.a2).abs() / la.a1);
    }
    Ok(worst)
}

/// Evidence for the corollaries of the lateral-area invariance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LateralCorollaries {
    pub reports: Vec<InvariantReport>,
    /// Brocard angle shared by both lateral families.
    pub omega: f64,
    /// Largest `|ω1 - ω2|` and `|ω_i - ω|` over the sweep.
    pub omega_defect: f64,
    /// Largest relative gap in `Σs² = 4A cot ω` and in
    /// `1/Σs1² + 1/Σs2² = (tan ω / 4)(1/A1 + 1/A2)`.
    pub identity_residual: f64,
}

pub fn lateral_corollaries(pair: &HomotheticPair, cfg: &SweepConfig) -> Result<LateralCorollaries> {
    let reports = lateral_sweep(pair, cfg)?;
    let omega = lateral_brocard_angle(pair);
    let mut omega_defect = 0.0_f64;
    let mut identity_residual = 0.0_f64;
    for t in uniform_grid(0.0, pair.period(), cfg.samples) {
        let s = lateral_sample(pair, t)?;
        for i in 0..2 {
            omega_defect = omega_defect.max((s.omega[i] - omega).abs());
            let lhs = s.sum_sq[i];
            let rhs = 4.0 * s.areas[i] / omega.tan();
            identity_residual = identity_residual.max((lhs - rhs).abs() / lhs);
        }
        let lhs = 1.0 / s.sum_sq[0] + 1.0 / s.sum_sq[1];
        let rhs = omega.tan() / 4.0 * (1.0 / s.areas[0] + 1.0 / s.areas[1]);
        identity_residual = identity_residual.max((lhs - rhs).abs() / lhs);
    }
    Ok(LateralCorollaries {
        reports,
        omega,
        omega_defect,
        identity_residual,
    })
}

/// Brocard angle of either lateral family: `tan ω = (b_h / a_h) cot α`.
pub fn lateral_brocard_angle(pair: &HomotheticPair) -> f64 {
    let (a, b) = (
        pair.inner.a.max(pair.inner.b),
        pair.inner.a.min(pair.inner.b),
    );
    (b / a / pair.alpha().tan()).atan()
}

fn check_omega(n: usize, omega: f64) -> Result<f64> {
    check_n(n)?;
    let alpha = PI / n as f64;
    if omega.is_nan() || omega <= 0.0 {
        return Err(out_of_range("omega", omega, "omega > 0"));
    }
    let p = alpha.tan() * omega.tan();
    if p.is_nan() || p > 1.0 || omega >= PI / 2.0 {
        return Err(out_of_range("omega", omega, "tan(alpha) tan(omega) <= 1"));
    }
    Ok(alpha)
}

/// `x0 = sqrt((1 - tan α tan ω) / (1 + tan α tan ω))`.
pub fn x0_from_omega(n: usize, omega: f64) -> Result<f64> {
    let alpha = check_omega(n, omega)?;
    let p = alpha.tan() * omega.tan();
    Ok(((1.0 - p) / (1.0 + p)).sqrt())
}

/// `x0 = sqrt((cot α - tan ω) / (cot α + tan ω))`.
pub fn x0_from_omega_explicit(n: usize, omega: f64) -> Result<f64> {
    let alpha = check_omega(n, omega)?;
    let c = 1.0 / alpha.tan();
    Ok(((c - omega.tan()) / (c + omega.tan())).sqrt())
}

/// Affine stretch `k = cot α cot ω` of the regular family.
pub fn stretch_from_omega(n: usize, omega: f64) -> Result<f64> {
    let alpha = check_omega(n, omega)?;
    Ok(1.0 / (alpha.tan() * omega.tan()))
}

/// The relation between the inner semiaxes and `x0` as printed:
/// `sqrt((a + b) / (a - b))`.
pub fn x0_from_inner_printed(a: f64, b: f64) -> Result<f64> {
    if !(b > 0.0 && a > b) {
        return Err(out_of_range("a", a, "a > b > 0"));
    }
    Ok(((a + b) / (a - b)).sqrt())
}

/// `sqrt((a - b) / (a + b))`, the reciprocal of the printed root.
pub fn x0_from_inner(a: f64, b: f64) -> Result<f64> {
    if !(b > 0.0 && a >= b) {
        return Err(out_of_range("a", a, "a >= b > 0"));
    }
    Ok(((a - b) / (a + b)).sqrt())
}

/// Affine image `(x, y) -> (k x, y)` of the regular family: outer `(k, 1)`,
/// inner `(k cos α, cos α)`.
pub fn affine_pair(n: usize, k: f64) -> Result<HomotheticPair> {
    HomotheticPair::from_outer(n, 0.0, k, 1.0)
}

/// Similarity sending the circumcircle of a harmonic polygon to the unit
/// circle and its symmedian point `k` onto the positive x-axis.
pub fn normalize_harmonic(p: &Polygon, k: CPoint) -> Result<Polygon> {
    let c = circle_through(p.vertex(0), p.vertex(1), p.vertex(2))?;
    let v = k - c.center;
    let u = if v.norm() <= 1e-12 * c.radius {
        pt(1.0, 0.0)
    } else {
        v / v.norm()
    };
    p.map(|z| (z - c.center) * u.conj() / c.radius)
}

/// Phase `t` of the Casey polygon with parameter `d` that has `w` as its
/// first vertex.
pub fn casey_phase(w: CPoint, d: f64, n: usize) -> f64 {
    let wb = w.conj();
    let z = (wb * d - 1.0) / (wb - d);
    z.arg() - 2.0 * PI / n as f64
}

/// Distance of a unit-circumradius harmonic polygon from the nearest member
/// of the Casey family with parameter `d`, allowing a reflection in the
/// x-axis.
pub fn casey_match_distance(normalized: &Polygon, d: f64) -> Result<f64> {
    let n = normalized.len();
    let mut best = f64::INFINITY;
    for cand in [normalized.clone(), normalized.map(|z| z.conj())?] {
        let t = casey_phase(cand.vertex(0), d, n);
        let reference = vertices_casey(n, d, t)?;
        if let Some(dist) = cand.match_distance(&reference) {
            best = best.min(dist);
        }
    }
    Ok(best)
}

/// The three loop-closing relations evaluated for one `(N, ω)`, with the
/// families they produce compared against each other.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LoopReport {
    pub n: usize,
    pub omega: f64,
    /// `sqrt((1 - tan α tan ω) / (1 + tan α tan ω))`.
    pub x0: f64,
    /// The same parameter written with `cot α - tan ω`.
    pub x0_explicit: f64,
    /// Stretch `k = cot α cot ω`.
    pub k: f64,
    /// Inner semiaxes of the affine family.
    pub inner_a: f64,
    pub inner_b: f64,
    /// `sqrt((a + b) / (a - b))` from the inner semiaxes, as printed.
    pub x0_printed: f64,
    /// `sqrt((a - b) / (a + b))`, the reciprocal root.
    pub x0_reciprocal: f64,
    /// Measured Brocard angle of the inversive family at `x0`.
    pub omega_inversive: f64,
    /// Measured Brocard angle of the polar image of the affine family.
    pub omega_affine_polar: f64,
    /// Vertex distance of the normalized affine+polar polygon from the
    /// Casey family at `x0`.
    pub vertex_match: f64,
    /// Same for the inversive polygon.
    pub inversive_match: f64,
}

impl LoopReport {
    /// Largest disagreement among the relations and the two families.
    pub fn consistency(&self) -> f64 {
        [
            (self.x0 - self.x0_explicit).abs(),
            (self.x0 - self.x0_reciprocal).abs(),
            (self.omega - self.omega_inversive).abs(),
            (self.omega - self.omega_affine_polar).abs(),
            self.vertex_match,
            self.inversive_match,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// Whether the printed root is the reciprocal of `x0`.
    pub fn printed_is_reciprocal(&self, tol: f64) -> bool {
        (self.x0_printed * self.x0 - 1.0).abs() < tol
    }
}

pub fn loop_closure(n: usize, omega: f64, t: f64) -> Result<LoopReport> {
    let x0 = x0_from_omega(n, omega)?;
    let x0_explicit = x0_from_omega_explicit(n, omega)?;
    let k = stretch_from_omega(n, omega)?;
    let pair = affine_pair(n, k)?;
    let (inner_a, inner_b) = (pair.inner.a, pair.inner.b);
    let x0_printed = if inner_a > inner_b {
        x0_from_inner_printed(inner_a, inner_b)?
    } else {
        f64::INFINITY
    };
    let x0_reciprocal = x0_from_inner(inner_a, inner_b)?;

    let spec = FamilySpec::inversive(n, x0)?;
    let inv = spec.snapshot(t)?;
    let omega_inversive = brocard_angle_measured(&inv)?;
    let inversive_match = casey_match_distance(
        &normalize_harmonic(&inv.polygon, spec.brocard_objects().symmedian)?,
        x0,
    )?;

    let focus = pair.inner_foci()[0];
    let dual = pair.polar_image(t, focus)?;
    let omega_affine_polar = brocard_angle_measured(&PolygonSnapshot::new(t, dual.clone()))?;
    let vertex_match = casey_match_distance(&normalize_harmonic(&dual, focus)?, x0)?;

    Ok(LoopReport {
        n,
        omega,
        x0,
        x0_explicit,
        k,
        inner_a,
        inner_b,
        x0_printed,
        x0_reciprocal,
        omega_inversive,
        omega_affine_polar,
        vertex_match,
        inversive_match,
    })
}

/// Coefficients `[A, B, C, D, E, F]` of the conic
/// `A x² + B xy + C y² + D xw + E yw + F w² = 0` through five homogeneous
/// points.
pub fn fit_conic(rows: &[[f64; 3]; 5]) -> Result<[f64; 6]> {
    let m: Vec<[f64; 6]> = rows
        .iter()
        .map(|&[x, y, w]| [x * x, x * y, y * y, x * w, y * w, w * w])
        .collect();
    let mut best: Option<[f64; 6]> = None;
    let mut best_norm = f64::INFINITY;
    for fixed in 0..6 {
        let a: Vec<Vec<f64>> = m
            .iter()
            .map(|r| (0..6).filter(|&j| j != fixed).map(|j| r[j]).collect())
            .collect();
        let b: Vec<f64> = m.iter().map(|r| -r[fixed]).collect();
        if let Some(x) = solve_linear(a, b) {
            let mut c = [0.0; 6];
            let mut it = x.into_iter();
            for (j, slot) in c.iter_mut().enumerate() {
                *slot = if j == fixed {
                    1.0
                } else {
                    it.next().unwrap_or(0.0)
                };
            }
            let norm = c.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
            if norm < best_norm {
                best_norm = norm;
                best = Some(c);
            }
        }
    }
    best.ok_or_else(|| Error::InconsistentInput("five points do not determine a conic".into()))
}

/// Axis-aligned ellipse centered on the x-axis from conic coefficients.
pub fn conic_to_axis_ellipse(c: &[f64; 6]) -> Result<AxisEllipse> {
    let [a, b, cc, d, e, f] = *c;
    let scale = c.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if b.abs() > 1e-8 * scale || e.abs() > 1e-8 * scale {
        return Err(Error::InconsistentInput(
            "conic is not an ellipse with axes on the coordinate directions".into(),
        ));
    }
    let cx = -d / (2.0 * a);
    let g = a * cx * cx - f;
    AxisEllipse::new(cx, (g / a).sqrt(), (g / cc).sqrt())
}

fn adjugate(m: [[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            let (r1, r2) = ((j + 1) % 3, (j + 2) % 3);
            let (c1, c2) = ((i + 1) % 3, (i + 2) % 3);
            *slot = m[r1][c1] * m[r2][c2] - m[r1][c2] * m[r2][c1];
        }
    }
    out
}

/// Conic tangent to five lines, each given by two points.
pub fn fit_conic_to_lines(lines: &[(CPoint, CPoint); 5]) -> Result<[f64; 6]> {
    let mut rows = [[0.0; 3]; 5];
    for (row, (p, q)) in rows.iter_mut().zip(lines) {
        *row = [p.im - q.im, q.re - p.re, p.re * q.im - q.re * p.im];
    }
    let l = fit_conic(&rows)?;
    let lm = [
        [l[0], l[1] / 2.0, l[3] / 2.0],
        [l[1] / 2.0, l[2], l[4] / 2.0],
        [l[3] / 2.0, l[4] / 2.0, l[5]],
    ];
    let m = adjugate(lm);
    Ok([
        m[0][0],
        2.0 * m[0][1],
        m[1][1],
        2.0 * m[0][2],
        2.0 * m[1][2],
        m[2][2],
    ])
}

/// Outer and inner ellipses fitted to the polar images of the
/// inversive-frame family about its symmedian point, from five-point solves
/// over disjoint phase groups, medianed per parameter.
pub fn fit_dual_family(n: usize, x0: f64, groups: usize) -> Result<(AxisEllipse, AxisEllipse)> {
    let spec = FamilySpec::inversive(n, x0)?;
    let polar = Circle::new(spec.brocard_objects().symmedian, 1.0)?;
    let count = 5 * groups;
    let duals = spec
        .t_grid(count)
        .into_iter()
        .map(|t| polar_dual_polygon(&spec.vertices(t)?, &polar))
        .collect::<Result<Vec<_>>>()?;
    let mut outer = Vec::new();
    let mut inner = Vec::new();
    for g in 0..groups {
        let mut pts = [[0.0; 3]; 5];
        let mut lines = [(pt(0.0, 0.0), pt(0.0, 0.0)); 5];
        for j in 0..5 {
            let idx = g + j * groups;
            let p = &duals[idx];
            let v = p.vertex(idx + j);
            pts[j] = [v.re, v.im, 1.0];
            let s = idx + 2 * j;
            lines[j] = (p.vertex(s), p.vertex(s + 1));
        }
        outer.push(conic_to_axis_ellipse(&fit_conic(&pts)?)?);
        inner.push(conic_to_axis_ellipse(&fit_conic_to_lines(&lines)?)?);
    }
    let med = |es: &[AxisEllipse]| AxisEllipse {
        cx: median(&es.iter().map(|e| e.cx).collect::<Vec<_>>()),
        a: median(&es.iter().map(|e| e.a).collect::<Vec<_>>()),
        b: median(&es.iter().map(|e| e.b).collect::<Vec<_>>()),
    };
    Ok((med(&outer), med(&inner)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::brocard_angle_closed;
    use crate::invariants::Verdict;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn regular_dual_pair() {
        let pair = harmonic_to_homothetic(5, 0.0).unwrap();
        assert_eq!(pair.inner.a, 1.0);
        assert_eq!(pair.inner.b, 1.0);
        assert_eq!(pair.inner.cx, 0.0);
        let ratio = 1.0 / (PI / 5.0).cos();
        assert!((pair.outer.a - ratio).abs() < 1e-15);
    }

    #[test]
    fn polar_image_lies_between_formula_ellipses() {
        for n in 3..8 {
            for &x0 in &[0.0, 0.2, 0.5, -0.6, 0.8] {
                let pair = harmonic_to_homothetic(n, x0).unwrap();
                let (inc, tan) = homothetic_image_residuals(n, x0, &pair, 64).unwrap();
                assert!(inc < 1e-9 && tan < 1e-9, "n={n} x0={x0}: {inc:e} {tan:e}");
            }
        }
        assert!(harmonic_to_homothetic(5, 1.0).is_err());
    }

    #[test]
    fn fitted_dual_ellipses_match_formula() {
        let pair = harmonic_to_homothetic(5, 0.5).unwrap();
        let (outer, inner) = fit_dual_family(5, 0.5, 7).unwrap();
        for (fit, exact) in [(outer, pair.outer), (inner, pair.inner)] {
            assert!((fit.cx - exact.cx).abs() < 1e-9, "{fit:?} {exact:?}");
            assert!((fit.a - exact.a).abs() < 1e-9);
            assert!((fit.b - exact.b).abs() < 1e-9);
        }
    }

    #[test]
    fn symmedian_is_an_inner_focus() {
        for &x0 in &[0.3, 0.5, 0.7] {
            let pair = harmonic_to_homothetic(5, x0).unwrap();
            let k = FamilySpec::inversive(5, x0)
                .unwrap()
                .brocard_objects()
                .symmedian;
            let foci = pair.inner_foci();
            assert!((k - foci[1]).norm() < 1e-12, "x0={x0}");
        }
    }

    #[test]
    fn circle_pair_gives_regular_family() {
        let pair = HomotheticPair::from_inner(6, 0.0, 2.0, 2.0).unwrap();
        let img = homothetic_to_harmonic(&pair).unwrap();
        assert!(img.circumcircle.center.norm() < 1e-15);
        assert!((img.circumcircle.radius - 0.5).abs() < 1e-15);
        let ca = (PI / 6.0).cos();
        assert!((img.caustic.a - ca / 2.0).abs() < 1e-15);
        assert!((img.caustic.b - ca / 2.0).abs() < 1e-15);
    }

    #[test]
    fn homothetic_to_harmonic_incidence_and_corollary() {
        for (n, a, b) in [(3, 2.0, 1.0), (5, 1.3, 1.0), (4, 1.0, 3.0), (7, 5.0, 0.5)] {
            let pair = HomotheticPair::from_inner(n, 0.0, a, b).unwrap();
            let img = homothetic_to_harmonic(&pair).unwrap();
            assert_eq!(img.swapped, a < b);
            let (inc, tan) = img.residuals(64).unwrap();
            assert!(inc < 1e-9 && tan < 1e-9, "n={n}: {inc:e} {tan:e}");
            assert!(img.corollary_residual < 1e-12);
            let snap = PolygonSnapshot::new(0.3, img.polygon(0.3).unwrap());
            let (k, res) = crate::family::fit_symmedian(&snap).unwrap();
            assert!(res < 1e-9 && (k - img.symmedian).norm() < 1e-8);
        }
        let off = HomotheticPair::from_inner(3, 1.0, 2.0, 1.0).unwrap();
        assert!(homothetic_to_harmonic(&off).is_err());
    }

    #[test]
    fn round_trip_preserves_brocard_angle() {
        for n in [3, 5, 8] {
            for &x0 in &[0.1, 0.5, 0.9] {
                let r = round_trip(n, x0, 0.2).unwrap();
                assert!((r.omega - r.omega_image).abs() < 1e-10);
                assert!((r.omega - r.omega_image_measured).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn equilateral_lateral_areas() {
        let pair = HomotheticPair::new(
            3,
            AxisEllipse::new(0.0, 1.0, 1.0).unwrap(),
            AxisEllipse::new(0.0, 0.5, 0.5).unwrap(),
        )
        .unwrap();
        let la = lateral_areas(&pair, 0.4).unwrap();
        assert!(rel(la.a1, 3.0 * 3f64.sqrt()) < 1e-12);
        let expected = 2.0 * 3f64.sqrt() / 9.0;
        assert!(rel(la.inv_sum(), expected) < 1e-12);
        assert!(rel(pair.lateral_closed_form().unwrap(), expected) < 1e-15);
        assert!(rel(la.harmonic_mean(), 3.0 * 3f64.sqrt()) < 1e-12);
        // the inner-semiaxes reading is off by a factor of 4
        let inner = lateral_inv_area_sum_closed(3, 0.5, 0.5).unwrap();
        assert!(rel(expected / inner, 4.0) < 1e-12);
    }

    #[test]
    fn regular_pentagon_closed_form() {
        let alpha = PI / 5.0;
        let area = 2.5 * (2.0 * alpha).sin() / alpha.cos().powi(2);
        let c = lateral_inv_area_sum_closed(5, 1.0, 1.0).unwrap();
        assert!(rel(c, 2.0 / area) < 1e-14);
    }

    #[test]
    fn lateral_sums_on_ellipse_pairs() {
        let cfg = SweepConfig::default();
        for (n, a, b, frozen) in [(3, 2.0, 1.0, 1.34715), (5, 1.3, 1.0, 0.61643)] {
            let pair = HomotheticPair::from_inner(n, 0.0, a, b).unwrap();
            let rs = lateral_sweep(&pair, &cfg).unwrap();
            assert_eq!(rs[0].verdict, Verdict::Invariant);
            assert!(
                rs[0].closed_form_error.unwrap() < 1e-8,
                "{:?}",
                rs[0].closed_form_error
            );
            assert!((rs[0].mean - frozen).abs() < 1e-5);
        }
    }

    #[test]
    fn seven_gon_conjecture_support() {
        let pair = HomotheticPair::from_inner(7, 0.0, 1.5, 1.0).unwrap();
        let rs = lateral_sweep(&pair, &SweepConfig::default()).unwrap();
        assert!(rs[0].closed_form.is_none());
        assert!(rs[0].relative_dev < 1e-8);
    }

    #[test]
    fn even_n_lateral_areas_equal_and_vary() {
        let pair = HomotheticPair::from_inner(4, 0.0, 1.5, 1.0).unwrap();
        assert!(lateral_symmetry_defect(&pair, 64).unwrap() < 1e-10);
        let a0 = lateral_areas(&pair, 0.0).unwrap().a1;
        let a1 = lateral_areas(&pair, 0.3).unwrap().a1;
        assert!(rel(a0, a1) > 1e-4);
    }

    #[test]
    fn corollaries_hold() {
        let pair = HomotheticPair::from_inner(5, 0.0, 1.3, 1.0).unwrap();
        let c = lateral_corollaries(&pair, &SweepConfig::default()).unwrap();
        for r in &c.reports {
            assert!(
                r.relative_dev < 1e-8,
                "{}: {:e}",
                r.quantity,
                r.relative_dev
            );
        }
        assert!(c.omega_defect < 1e-10);
        assert!(c.identity_residual < 1e-12);
    }

    #[test]
    fn polar_radius_scales_areas_by_fourth_power() {
        let pair = HomotheticPair::from_inner(5, 0.0, 1.3, 1.0).unwrap();
        let f = pair.inner_foci()[0];
        let p = pair.vertices(0.2).unwrap();
        let unit = polar_dual_polygon(&p, &Circle::new(f, 1.0).unwrap()).unwrap();
        let big = polar_dual_polygon(&p, &Circle::new(f, 2.0).unwrap()).unwrap();
        assert!(rel(big.area(), 16.0 * unit.area()) < 1e-12);
    }

    #[test]
    fn loop_relations() {
        // ω = π/2 - α gives the regular family
        let alpha = PI / 5.0;
        assert!(x0_from_omega(5, PI / 2.0 - alpha).unwrap().abs() < 1e-7);
        assert!((stretch_from_omega(5, PI / 2.0 - alpha).unwrap() - 1.0).abs() < 1e-15);
        for n in 3..9 {
            let omega = 0.5 * (PI / 2.0 - PI / n as f64);
            let x0 = x0_from_omega(n, omega).unwrap();
            assert!((brocard_angle_closed(n, x0) - omega).abs() < 1e-13);
            assert!((x0 - x0_from_omega_explicit(n, omega).unwrap()).abs() < 1e-15);
        }
        assert!(x0_from_omega(5, 1.3).is_err());
        assert!(x0_from_omega(5, -0.1).is_err());
        assert!(x0_from_inner_printed(1.0, 1.0).is_err());
    }

    #[test]
    fn loop_closes() {
        for n in [3, 5, 6] {
            let r = loop_closure(n, 0.4, 0.3).unwrap();
            assert!(r.consistency() < 1e-8, "n={n}: {r:?}");
            assert!(r.printed_is_reciprocal(1e-12));
        }
    }

    #[test]
    fn conic_fit_recovers_ellipse() {
        let e = AxisEllipse::new(0.7, 2.0, 0.5).unwrap();
        let pts: Vec<[f64; 3]> = [0.1, 1.0, 2.5, 3.7, 5.0]
            .iter()
            .map(|&a| {
                let p = e.point_at(a);
                [p.re, p.im, 1.0]
            })
            .collect();
        let fit = conic_to_axis_ellipse(&fit_conic(&pts.try_into().unwrap()).unwrap()).unwrap();
        assert!(
            (fit.cx - 0.7).abs() < 1e-12
                && (fit.a - 2.0).abs() < 1e-12
                && (fit.b - 0.5).abs() < 1e-12
        );
    }
}
