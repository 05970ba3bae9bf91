//! Conserved quantities of the harmonic family: closed forms and sweep-based
//! verification over one Poncelet period.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{FamilySpec, PolygonSnapshot};
use crate::geom::{circle_through, CPoint};
use crate::numeric::{compensated_sum, elementary_symmetric, uniform_grid, SampleStats};

/// A measured quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum QuantityId {
    SumInvSqSides,
    SumInvSqApollonius,
    /// `Σ cot^k θ_i`
    SumCotPow(u32),
    /// `e_k(cot θ_1, .., cot θ_N)`
    ElemSym(u32),
    SumSin2ThetaOverA,
    SumSin2ThetaOverSumSqSides,
    SumSqSidesOverA,
    Area,
    Perimeter,
    /// `1/A1 + 1/A2` of the two lateral polar images of a homothetic family.
    LateralInvAreaSum,
    /// `1/Σs1² + 1/Σs2²`
    LateralInvSumSqSides,
    /// `1/Σsin 2θ1 + 1/Σsin 2θ2`
    LateralInvSumSin2Theta,
}

impl QuantityId {
    pub fn validate(&self, n: usize) -> Result<()> {
        match *self {
            QuantityId::SumCotPow(0) => Err(Error::InconsistentInput(
                "cotangent power must be at least 1".into(),
            )),
            QuantityId::ElemSym(k) if k == 0 || k as usize > n => Err(Error::InconsistentInput(
                format!("elementary symmetric index {k} outside 1..={n}"),
            )),
            _ => Ok(()),
        }
    }

    pub fn is_lateral(&self) -> bool {
        matches!(
            self,
            QuantityId::LateralInvAreaSum
                | QuantityId::LateralInvSumSqSides
                | QuantityId::LateralInvSumSin2Theta
        )
    }
}

impl fmt::Display for QuantityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuantityId::SumInvSqSides => write!(f, "sum-inv-sq-sides"),
            QuantityId::SumInvSqApollonius => write!(f, "sum-inv-sq-apollonius"),
            QuantityId::SumCotPow(k) => write!(f, "cotpow:{k}"),
            QuantityId::ElemSym(k) => write!(f, "elemsym:{k}"),
            QuantityId::SumSin2ThetaOverA => write!(f, "sin2theta-over-area"),
            QuantityId::SumSin2ThetaOverSumSqSides => write!(f, "sin2theta-over-sum-sq-sides"),
            QuantityId::SumSqSidesOverA => write!(f, "sum-sq-sides-over-area"),
            QuantityId::Area => write!(f, "area"),
            QuantityId::Perimeter => write!(f, "perimeter"),
            QuantityId::LateralInvAreaSum => write!(f, "lateral-inv-area-sum"),
            QuantityId::LateralInvSumSqSides => write!(f, "lateral-inv-sum-sq-sides"),
            QuantityId::LateralInvSumSin2Theta => write!(f, "lateral-inv-sum-sin2theta"),
        }
    }
}

impl FromStr for QuantityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let indexed = |prefix: &str| -> Option<Result<u32>> {
            s.strip_prefix(prefix).map(|rest| {
                rest.parse::<u32>()
                    .map_err(|_| Error::InconsistentInput(format!("bad index in quantity '{s}'")))
            })
        };
        if let Some(k) = indexed("cotpow:") {
            return Ok(QuantityId::SumCotPow(k?));
        }
        if let Some(k) = indexed("elemsym:") {
            return Ok(QuantityId::ElemSym(k?));
        }
        Ok(match s {
            "sum-inv-sq-sides" => QuantityId::SumInvSqSides,
            "sum-inv-sq-apollonius" => QuantityId::SumInvSqApollonius,
            "sin2theta-over-area" => QuantityId::SumSin2ThetaOverA,
            "sin2theta-over-sum-sq-sides" => QuantityId::SumSin2ThetaOverSumSqSides,
            "sum-sq-sides-over-area" => QuantityId::SumSqSidesOverA,
            "area" => QuantityId::Area,
            "perimeter" => QuantityId::Perimeter,
            "lateral-inv-area-sum" => QuantityId::LateralInvAreaSum,
            "lateral-inv-sum-sq-sides" => QuantityId::LateralInvSumSqSides,
            "lateral-inv-sum-sin2theta" => QuantityId::LateralInvSumSin2Theta,
            _ => return Err(Error::InconsistentInput(format!("unknown quantity '{s}'"))),
        })
    }
}

impl From<QuantityId> for String {
    fn from(q: QuantityId) -> String {
        q.to_string()
    }
}

impl TryFrom<String> for QuantityId {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Invariant,
    Varies,
    /// Identically zero over the sweep.
    Zero,
    /// Relative deviation between the invariant and varies thresholds, even
    /// after refining the grid.
    Inconclusive,
}

impl Verdict {
    /// Invariant or identically zero.
    pub fn is_conserved(&self) -> bool {
        matches!(self, Verdict::Invariant | Verdict::Zero)
    }
}

/// Grid size and thresholds for sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub samples: usize,
    /// Relative deviation below which a quantity is declared invariant.
    pub invariant_tol: f64,
    /// Relative deviation above which a quantity is declared varying.
    pub varies_tol: f64,
    /// `max |sample|` below which a quantity is declared zero.
    pub zero_tol: f64,
    pub scale_floor: f64,
    /// Relative agreement required between samples and a closed form.
    pub closed_form_tol: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            samples: 256,
            invariant_tol: 1e-8,
            varies_tol: 1e-4,
            zero_tol: 1e-9,
            scale_floor: 1e-12,
            closed_form_tol: 1e-9,
        }
    }
}

impl SweepConfig {
    pub fn with_samples(samples: usize) -> Self {
        SweepConfig {
            samples,
            ..Default::default()
        }
    }

    pub fn classify(&self, stats: &SampleStats) -> (f64, Verdict) {
        let rel = stats.max_abs_dev / stats.mean.abs().max(self.scale_floor);
        let verdict = if stats.max_abs < self.zero_tol {
            Verdict::Zero
        } else if rel < self.invariant_tol {
            Verdict::Invariant
        } else if rel > self.varies_tol {
            Verdict::Varies
        } else {
            Verdict::Inconclusive
        };
        (rel, verdict)
    }
}

/// Sweep record for one quantity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantReport {
    pub quantity: QuantityId,
    pub closed_form: Option<f64>,
    pub ts: Vec<f64>,
    pub samples: Vec<f64>,
    pub mean: f64,
    pub max_abs_dev: f64,
    pub relative_dev: f64,
    /// `max - min` over the sweep.
    pub range: f64,
    pub verdict: Verdict,
    /// `max_t |sample - closed| / max(1, |closed|)`.
    pub closed_form_error: Option<f64>,
    /// The grid was refined after an inconclusive first pass.
    pub refined: bool,
}

impl InvariantReport {
    pub fn from_samples(
        quantity: QuantityId,
        closed_form: Option<f64>,
        ts: Vec<f64>,
        samples: Vec<f64>,
        cfg: &SweepConfig,
    ) -> Self {
        let stats = SampleStats::of(&samples);
        let (relative_dev, verdict) = cfg.classify(&stats);
        let closed_form_error = closed_form
            .map(|c| samples.iter().map(|s| (s - c).abs()).fold(0.0, f64::max) / c.abs().max(1.0));
        InvariantReport {
            quantity,
            closed_form,
            ts,
            samples,
            mean: stats.mean,
            max_abs_dev: stats.max_abs_dev,
            relative_dev,
            range: stats.range(),
            verdict,
            closed_form_error,
            refined: false,
        }
    }

    /// `false` only when a closed form exists and disagrees with the sweep.
    pub fn closed_form_ok(&self, cfg: &SweepConfig) -> bool {
        self.closed_form_error
            .is_none_or(|e| e < cfg.closed_form_tol)
    }
}

/// Evaluate `f` over one period; an inconclusive verdict triggers a single
/// ×4 refinement.
pub fn sweep<F>(
    quantity: QuantityId,
    closed_form: Option<f64>,
    period: f64,
    cfg: &SweepConfig,
    f: F,
) -> Result<InvariantReport>
where
    F: Fn(f64) -> Result<f64>,
{
    let run = |samples: usize| -> Result<InvariantReport> {
        let ts = uniform_grid(0.0, period, samples);
        let vals = ts.iter().map(|&t| f(t)).collect::<Result<Vec<_>>>()?;
        Ok(InvariantReport::from_samples(
            quantity,
            closed_form,
            ts,
            vals,
            cfg,
        ))
    };
    let first = run(cfg.samples)?;
    if first.verdict != Verdict::Inconclusive {
        return Ok(first);
    }
    let mut refined = run(cfg.samples * 4)?;
    refined.refined = true;
    Ok(refined)
}

/// `Σ 1/s_k²` for unit circumradius.
pub fn sum_inv_sq_sides_closed(n: usize, d: f64) -> f64 {
    let alpha = PI / n as f64;
    let d2 = d * d;
    n as f64 * (d2 * alpha.cos().powi(2) + (d2 * d2 + 1.0) / 4.0)
        / ((1.0 - d2).powi(2) * alpha.sin().powi(2))
}

/// `Σ 1/r_k² = 2N / (1/d - d)²` for unit circumradius, written so that
/// `d = 0` gives 0.
pub fn sum_inv_sq_apollonius_closed(n: usize, d: f64) -> f64 {
    2.0 * n as f64 * d * d / (1.0 - d * d).powi(2)
}

/// `ρ = (1 + d²) / (d² - 1)`.
pub fn rho(d: f64) -> f64 {
    (1.0 + d * d) / (d * d - 1.0)
}

fn cot(x: f64) -> f64 {
    x.cos() / x.sin()
}

/// Interior-angle cotangent at vertex `k` (1-based) of the snapshot at `t`.
pub fn cot_theta_closed(spec: &FamilySpec, t: f64, k: usize) -> f64 {
    let d = spec.x0();
    let two_alpha = 2.0 * spec.alpha();
    -2.0 * d * (two_alpha * k as f64 + t).cos() / ((d * d - 1.0) * two_alpha.sin())
        + rho(d) * cot(two_alpha)
}

/// `Σ cot θ = N ρ cot 2α`.
pub fn sum_cot_closed(n: usize, d: f64) -> f64 {
    n as f64 * rho(d) * cot(2.0 * PI / n as f64)
}

/// `Σ cot² θ = N (ρ²(2 + cos 4α) - 1) / (1 - cos 4α)`.
pub fn sum_cot_sq_closed(n: usize, d: f64) -> f64 {
    let c4 = (4.0 * PI / n as f64).cos();
    let r = rho(d);
    n as f64 * (r * r * (2.0 + c4) - 1.0) / (1.0 - c4)
}

/// Radii of the circles through each vertex and both limiting points;
/// `INFINITY` where a vertex is collinear with them.
pub fn apollonius_radii(snap: &PolygonSnapshot, l1: CPoint, l2: CPoint) -> Vec<f64> {
    snap.polygon
        .vertices()
        .iter()
        .map(|&w| circle_through(w, l1, l2).map_or(f64::INFINITY, |c| c.radius))
        .collect()
}

/// Closed form for `q` in the spec's frame, where one is known.
pub fn closed_form(spec: &FamilySpec, q: QuantityId) -> Option<f64> {
    let n = spec.n();
    let d = spec.x0();
    let r = spec.brocard_objects().circumcircle.radius;
    match q {
        QuantityId::SumInvSqSides => Some(sum_inv_sq_sides_closed(n, d) / (r * r)),
        QuantityId::SumInvSqApollonius => Some(sum_inv_sq_apollonius_closed(n, d) / (r * r)),
        QuantityId::SumCotPow(1) | QuantityId::ElemSym(1) => Some(sum_cot_closed(n, d)),
        QuantityId::SumCotPow(2) => Some(sum_cot_sq_closed(n, d)),
        QuantityId::SumCotPow(k) if n == 4 && k % 2 == 1 => Some(0.0),
        QuantityId::SumSqSidesOverA => Some(4.0 / spec.brocard_objects().brocard_angle.tan()),
        _ => None,
    }
}

/// Evaluate `q` on one snapshot of `spec`.
pub fn measure(spec: &FamilySpec, q: QuantityId, snap: &PolygonSnapshot) -> Result<f64> {
    q.validate(spec.n())?;
    let cots = || snap.angles.iter().map(|a| cot(*a));
    let sum_sin2 = || compensated_sum(snap.angles.iter().map(|a| (2.0 * a).sin()));
    Ok(match q {
        QuantityId::SumInvSqSides => {
            compensated_sum(snap.sidelengths.iter().map(|s| 1.0 / (s * s)))
        }
        QuantityId::SumInvSqApollonius => match spec.brocard_objects().limiting_points {
            (l1, Some(l2)) => {
                compensated_sum(apollonius_radii(snap, l1, l2).into_iter().map(|r| {
                    if r.is_finite() {
                        1.0 / (r * r)
                    } else {
                        0.0
                    }
                }))
            }
            (_, None) => 0.0,
        },
        QuantityId::SumCotPow(k) => compensated_sum(cots().map(|c| c.powi(k as i32))),
        QuantityId::ElemSym(k) => {
            let lambda: Vec<f64> = cots().collect();
            elementary_symmetric(&lambda)[k as usize]
        }
        QuantityId::SumSin2ThetaOverA => sum_sin2() / snap.area,
        QuantityId::SumSin2ThetaOverSumSqSides => sum_sin2() / snap.sum_sq_sides(),
        QuantityId::SumSqSidesOverA => snap.sum_sq_sides() / snap.area,
        QuantityId::Area => snap.area,
        QuantityId::Perimeter => snap.perimeter,
        QuantityId::LateralInvAreaSum
        | QuantityId::LateralInvSumSqSides
        | QuantityId::LateralInvSumSin2Theta => {
            return Err(Error::InconsistentInput(format!(
                "{q} is defined for homothetic pairs, not harmonic families"
            )))
        }
    })
}

/// Sweep several quantities over a shared grid of snapshots.
pub fn sweep_family(
    spec: &FamilySpec,
    quantities: &[QuantityId],
    cfg: &SweepConfig,
) -> Result<Vec<InvariantReport>> {
    for q in quantities {
        q.validate(spec.n())?;
    }
    let ts = spec.t_grid(cfg.samples);
    let snaps = ts
        .iter()
        .map(|&t| spec.snapshot(t))
        .collect::<Result<Vec<_>>>()?;
    quantities
        .iter()
        .map(|&q| {
            let vals = snaps
                .iter()
                .map(|s| measure(spec, q, s))
                .collect::<Result<Vec<_>>>()?;
            let report =
                InvariantReport::from_samples(q, closed_form(spec, q), ts.clone(), vals, cfg);
            if report.verdict == Verdict::Inconclusive {
                sweep(q, closed_form(spec, q), spec.period(), cfg, |t| {
                    measure(spec, q, &spec.snapshot(t)?)
                })
            } else {
                Ok(report)
            }
        })
        .collect()
}

pub fn sum_inv_sq_sides(spec: &FamilySpec, cfg: &SweepConfig) -> Result<InvariantReport> {
    single(spec, QuantityId::SumInvSqSides, cfg)
}

pub fn sum_inv_sq_apollonius(spec: &FamilySpec, cfg: &SweepConfig) -> Result<InvariantReport> {
    single(spec, QuantityId::SumInvSqApollonius, cfg)
}

fn single(spec: &FamilySpec, q: QuantityId, cfg: &SweepConfig) -> Result<InvariantReport> {
    Ok(sweep_family(spec, &[q], cfg)?.remove(0))
}

/// `Σ cot^k θ` for `k = 1..=kmax`.
pub fn cot_power_sums(
    spec: &FamilySpec,
    kmax: u32,
    cfg: &SweepConfig,
) -> Result<Vec<InvariantReport>> {
    let qs: Vec<_> = (1..=kmax).map(QuantityId::SumCotPow).collect();
    sweep_family(spec, &qs, cfg)
}

/// Default upper power for [`cot_power_sums`]: `N + 2`.
pub fn default_kmax(n: usize) -> u32 {
    n as u32 + 2
}

/// `e_1..=e_N` of the interior-angle cotangents.
pub fn elementary_symmetric_reports(
    spec: &FamilySpec,
    cfg: &SweepConfig,
) -> Result<Vec<InvariantReport>> {
    let qs: Vec<_> = (1..=spec.n() as u32).map(QuantityId::ElemSym).collect();
    sweep_family(spec, &qs, cfg)
}

/// `Σs²/A`, `Σ sin 2θ / A` and `Σ sin 2θ / Σs²`.
pub fn ratio_invariants(spec: &FamilySpec, cfg: &SweepConfig) -> Result<Vec<InvariantReport>> {
    sweep_family(
        spec,
        &[
            QuantityId::SumSqSidesOverA,
            QuantityId::SumSin2ThetaOverA,
            QuantityId::SumSin2ThetaOverSumSqSides,
        ],
        cfg,
    )
}

/// Every harmonic-family quantity, including the area and perimeter
/// negative controls.
pub fn all_quantities(n: usize) -> Vec<QuantityId> {
    let mut qs = vec![QuantityId::SumInvSqSides, QuantityId::SumInvSqApollonius];
    qs.extend((1..=default_kmax(n)).map(QuantityId::SumCotPow));
    qs.extend((1..=n as u32).map(QuantityId::ElemSym));
    qs.extend([
        QuantityId::SumSqSidesOverA,
        QuantityId::SumSin2ThetaOverA,
        QuantityId::SumSin2ThetaOverSumSqSides,
        QuantityId::Area,
        QuantityId::Perimeter,
    ]);
    qs
}

/// Verdicts of `Σ cot^k θ` for each `(N, k)`.
pub fn cot_power_table(
    d: f64,
    ns: impl IntoIterator<Item = usize>,
    kmax: u32,
    cfg: &SweepConfig,
) -> Result<Vec<(usize, u32, Verdict)>> {
    let mut out = Vec::new();
    for n in ns {
        let spec = FamilySpec::casey(n, d)?;
        for r in cot_power_sums(&spec, kmax, cfg)? {
            if let QuantityId::SumCotPow(k) = r.quantity {
                out.push((n, k, r.verdict));
            }
        }
    }
    Ok(out)
}
