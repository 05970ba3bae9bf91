//! Command-line front end.
//!
//! Exit codes: 0 success, 1 output could not be written, 2 invalid
//! configuration, 3 a check exceeded its tolerance.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::family::{brocard_angle_measured, closure_residual, BrocardObjects, FamilySpec, Frame};
use crate::geom::CPoint;
use crate::invariants::{
    all_quantities, closed_form, cot_theta_closed, measure, sweep_family, InvariantReport,
    QuantityId, SweepConfig, Verdict,
};
use crate::isocurves::{
    isocurve_test, member_offsets, omega_field, omega_prime, Bbox, ConjectureVerdict,
    IsocurveConfig, IsocurveReport, RowKind,
};
use crate::report::{cell, fmt_f64, invariants_csv, table_csv, to_json};
use crate::svg;
use crate::transforms::{
    harmonic_to_homothetic, homothetic_image_residuals, homothetic_to_harmonic,
    lateral_corollaries, lateral_symmetry_defect, loop_closure, HarmonicImage, HomotheticPair,
    LoopReport,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_TOLERANCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "harmonic",
    version,
    about = "Poncelet harmonic polygons: constructions, invariants, conjectures and figures"
)]
pub struct Cli {
    /// JSON file with default values for any flag; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Vertices and associated objects of one polygon.
    Construct(Common),
    /// Sweep conserved quantities over one period.
    Invariants(InvariantsArgs),
    /// Evidence for the conjectures.
    #[command(subcommand)]
    Conjectures(ConjectureCmd),
    /// Maps between the harmonic and homothetic families.
    #[command(subcommand)]
    Transform(TransformCmd),
    /// SVG figures.
    Plot(PlotArgs),
}

#[derive(Debug, Subcommand)]
pub enum ConjectureCmd {
    /// `1/A1 + 1/A2` of the lateral polar images of a homothetic family.
    AreaSum(Common),
    /// `Σ sin 2θ / A` of a harmonic family.
    Sin2theta(Common),
    /// Level sets of the Brocard angle of inversive images.
    Isocurves(IsocurveArgs),
}

#[derive(Debug, Subcommand)]
pub enum TransformCmd {
    /// Polar image about the symmedian point.
    ToHomothetic(Common),
    /// Polar image of a homothetic pair about an inner focus.
    ToHarmonic(Common),
    /// The three loop-closing parameter relations.
    Loop(LoopArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlotKind {
    Brocard,
    Homothetic,
    Apollonius,
    Pencil,
    Field,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// Number of vertices.
    #[arg(long)]
    pub n: Option<usize>,
    /// Inversive-frame parameter.
    #[arg(long, allow_negative_numbers = true, conflicts_with = "casey_d")]
    pub x0: Option<f64>,
    /// Casey-frame parameter (interior limiting point on the unit circle).
    #[arg(long = "casey-d", allow_negative_numbers = true)]
    pub casey_d: Option<f64>,
    /// Inner semiaxis along x of a homothetic pair.
    #[arg(long)]
    pub ah: Option<f64>,
    /// Inner semiaxis along y of a homothetic pair.
    #[arg(long)]
    pub bh: Option<f64>,
    /// Phase.
    #[arg(long, allow_negative_numbers = true)]
    pub t: Option<f64>,
    /// Samples per period.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Tolerance override for the command's pass/fail check.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Seed for randomized spot-checks.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Accept negative parameters (mirror-image families).
    #[arg(long)]
    pub allow_negative: bool,
}

#[derive(Debug, Clone, Args)]
pub struct InvariantsArgs {
    #[command(flatten)]
    pub common: Common,
    /// Restrict to these quantities, e.g. `cotpow:3`, `elemsym:2`, `area`.
    #[arg(long)]
    pub quantity: Vec<String>,
}

#[derive(Debug, Clone, Args)]
pub struct IsocurveArgs {
    #[command(flatten)]
    pub common: Common,
    /// Pencil members sampled.
    #[arg(long)]
    pub circles: Option<usize>,
    /// Points per member.
    #[arg(long)]
    pub points: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct LoopArgs {
    #[command(flatten)]
    pub common: Common,
    /// Brocard angle.
    #[arg(long)]
    pub omega: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct PlotArgs {
    #[arg(value_enum)]
    pub kind: PlotKind,
    #[command(flatten)]
    pub common: Common,
    /// Pencil members drawn.
    #[arg(long)]
    pub circles: Option<usize>,
    /// Grid nodes per side of the field.
    #[arg(long)]
    pub resolution: Option<usize>,
}

/// Values read from `--config`; every field is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub n: Option<usize>,
    pub x0: Option<f64>,
    pub casey_d: Option<f64>,
    pub ah: Option<f64>,
    pub bh: Option<f64>,
    pub t: Option<f64>,
    pub samples: Option<usize>,
    pub tol: Option<f64>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub allow_negative: Option<bool>,
    pub omega: Option<f64>,
    pub circles: Option<usize>,
    pub points: Option<usize>,
    pub resolution: Option<usize>,
    pub quantity: Option<Vec<String>>,
}

/// Flags merged over the config file and the defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub n: usize,
    pub frame: Frame,
    pub param: f64,
    pub ah: f64,
    pub bh: f64,
    pub t: f64,
    pub samples: usize,
    pub tol: Option<f64>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub allow_negative: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Invalid(String),
    Tolerance(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => EXIT_INVALID,
            CliError::Tolerance(_) => EXIT_TOLERANCE,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NotHarmonic { .. } => CliError::Tolerance(e.to_string()),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

impl Settings {
    pub fn resolve(c: &Common, file: &ConfigFile) -> CliResult<Self> {
        let (frame, param) = match (c.x0, c.casey_d) {
            (Some(x), _) => (Frame::Inversive, x),
            (None, Some(d)) => (Frame::Casey, d),
            (None, None) => match (file.x0, file.casey_d) {
                (Some(_), Some(_)) => {
                    return Err(CliError::Invalid("config sets both x0 and casey_d".into()))
                }
                (Some(x), None) => (Frame::Inversive, x),
                (None, Some(d)) => (Frame::Casey, d),
                (None, None) => (Frame::Inversive, 0.5),
            },
        };
        let s = Settings {
            n: c.n.or(file.n).unwrap_or(5),
            frame,
            param,
            ah: c.ah.or(file.ah).unwrap_or(1.5),
            bh: c.bh.or(file.bh).unwrap_or(1.0),
            t: c.t.or(file.t).unwrap_or(0.0),
            samples: c.samples.or(file.samples).unwrap_or(256),
            tol: c.tol.or(file.tol),
            format: c.format.or(file.format).unwrap_or(Format::Json),
            out: c.out.clone().or_else(|| file.out.clone()),
            seed: c.seed.or(file.seed).unwrap_or(0),
            allow_negative: c.allow_negative || file.allow_negative.unwrap_or(false),
        };
        if s.samples < 2 {
            return Err(CliError::Invalid(format!(
                "samples = {} violates samples >= 2",
                s.samples
            )));
        }
        if let Some(t) = s.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(CliError::Invalid(format!("tol = {t} violates tol > 0")));
            }
        }
        if !s.t.is_finite() {
            return Err(CliError::Invalid("t must be finite".into()));
        }
        Ok(s)
    }

    pub fn family(&self) -> CliResult<FamilySpec> {
        if self.param < 0.0 && !self.allow_negative {
            let name = match self.frame {
                Frame::Inversive => "x0",
                Frame::Casey => "casey-d",
            };
            return Err(CliError::Invalid(format!(
                "{name} = {} is negative; pass --allow-negative for the mirrored family",
                self.param
            )));
        }
        Ok(FamilySpec::new(self.n, self.frame, self.param)?)
    }

    pub fn pair(&self) -> CliResult<HomotheticPair> {
        Ok(HomotheticPair::from_inner(self.n, 0.0, self.ah, self.bh)?)
    }

    fn sweep_config(&self) -> SweepConfig {
        let mut cfg = SweepConfig::with_samples(self.samples);
        if let Some(t) = self.tol {
            cfg.closed_form_tol = t;
        }
        cfg
    }
}

fn load_config(path: Option<&Path>) -> CliResult<ConfigFile> {
    match path {
        None => Ok(ConfigFile::default()),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| {
                CliError::Invalid(format!("cannot read config {}: {e}", p.display()))
            })?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::Invalid(format!("invalid config {}: {e}", p.display())))
        }
    }
}

/// Output of a command: the rendered text and, when a check failed, the
/// reason.
struct Outcome {
    text: String,
    failure: Option<String>,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome {
            text,
            failure: None,
        }
    }
}

fn json<T: Serialize>(kind: &str, payload: &T) -> CliResult<String> {
    to_json(kind, payload).map_err(|e| CliError::Io(e.to_string()))
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Io(e.to_string())
}

fn no_csv(s: &Settings, what: &str) -> CliResult<()> {
    if s.format == Format::Csv {
        return Err(CliError::Invalid(format!(
            "csv output is not available for {what}"
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct ConstructOut {
    n: usize,
    frame: Frame,
    param: f64,
    x0: f64,
    t: f64,
    vertices: Vec<CPoint>,
    sidelengths: Vec<f64>,
    angles: Vec<f64>,
    signed_area: f64,
    perimeter: f64,
    brocard_angle_measured: f64,
    closure_residual: f64,
    objects: BrocardObjects,
}

fn cmd_construct(s: &Settings) -> CliResult<Outcome> {
    let spec = s.family()?;
    let snap = spec.snapshot(s.t)?;
    if s.format == Format::Csv {
        let rows: Vec<Vec<String>> = (0..snap.n())
            .map(|i| {
                let v = snap.polygon.vertex(i);
                vec![
                    (i + 1).to_string(),
                    fmt_f64(v.re),
                    fmt_f64(v.im),
                    fmt_f64(snap.sidelengths[i]),
                    fmt_f64(snap.angles[i]),
                ]
            })
            .collect();
        return Ok(Outcome::ok(
            table_csv(&["vertex", "x", "y", "sidelength", "angle"], &rows).map_err(csv_err)?,
        ));
    }
    let out = ConstructOut {
        n: spec.n(),
        frame: spec.frame(),
        param: spec.param(),
        x0: spec.x0(),
        t: s.t,
        vertices: snap.polygon.vertices().to_vec(),
        sidelengths: snap.sidelengths.clone(),
        angles: snap.angles.clone(),
        signed_area: snap.signed_area,
        perimeter: snap.perimeter,
        brocard_angle_measured: brocard_angle_measured(&snap)?,
        closure_residual: closure_residual(&spec, s.t)?,
        objects: spec.brocard_objects(),
    };
    Ok(Outcome::ok(json("construct", &out)?))
}

#[derive(Debug, Clone, Serialize)]
struct SpotCheck {
    check: String,
    t: f64,
    value: f64,
    expected: f64,
    error: f64,
}

#[derive(Serialize)]
struct InvariantsOut {
    n: usize,
    frame: Frame,
    param: f64,
    samples: usize,
    seed: u64,
    closed_form_tol: f64,
    reports: Vec<InvariantReport>,
    spot_checks: Vec<SpotCheck>,
    failures: Vec<String>,
}

fn spot_checks(spec: &FamilySpec, qs: &[QuantityId], seed: u64) -> CliResult<Vec<SpotCheck>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for _ in 0..8 {
        let t = rng.random_range(0.0..spec.period());
        let snap = spec.snapshot(t)?;
        for &q in qs {
            if let Some(c) = closed_form(spec, q) {
                let v = measure(spec, q, &snap)?;
                out.push(SpotCheck {
                    check: q.to_string(),
                    t,
                    value: v,
                    expected: c,
                    error: (v - c).abs() / c.abs().max(1.0),
                });
            }
        }
        let k = rng.random_range(1..=spec.n());
        let v = 1.0 / snap.angles[k - 1].tan();
        let c = cot_theta_closed(spec, t, k);
        out.push(SpotCheck {
            check: format!("cot-theta:{k}"),
            t,
            value: v,
            expected: c,
            error: (v - c).abs() / c.abs().max(1.0),
        });
    }
    Ok(out)
}

fn cmd_invariants(s: &Settings, quantities: &[String]) -> CliResult<Outcome> {
    let spec = s.family()?;
    let cfg = s.sweep_config();
    let qs = if quantities.is_empty() {
        all_quantities(spec.n())
    } else {
        quantities
            .iter()
            .map(|q| q.parse::<QuantityId>())
            .collect::<Result<Vec<_>, _>>()?
    };
    if let Some(q) = qs.iter().find(|q| q.is_lateral()) {
        return Err(CliError::Invalid(format!(
            "{q} belongs to homothetic pairs; use `conjectures area-sum`"
        )));
    }
    let reports = sweep_family(&spec, &qs, &cfg)?;
    let checks = spot_checks(&spec, &qs, s.seed)?;
    let mut failures: Vec<String> = reports
        .iter()
        .filter(|r| !r.closed_form_ok(&cfg))
        .map(|r| {
            format!(
                "{}: closed form off by {:e}",
                r.quantity,
                r.closed_form_error.unwrap_or(f64::NAN)
            )
        })
        .collect();
    failures.extend(
        checks
            .iter()
            .filter(|c| c.error.is_nan() || c.error >= 1e3 * cfg.closed_form_tol.max(1e-13))
            .map(|c| format!("spot check {} at t = {}: error {:e}", c.check, c.t, c.error)),
    );
    let text = match s.format {
        Format::Csv => invariants_csv(&reports).map_err(csv_err)?,
        Format::Json => json(
            "invariants",
            &InvariantsOut {
                n: spec.n(),
                frame: spec.frame(),
                param: spec.param(),
                samples: cfg.samples,
                seed: s.seed,
                closed_form_tol: cfg.closed_form_tol,
                reports,
                spot_checks: checks,
                failures: failures.clone(),
            },
        )?,
    };
    Ok(Outcome {
        text,
        failure: (!failures.is_empty()).then(|| failures.join("; ")),
    })
}

#[derive(Serialize)]
struct AreaSumOut {
    n: usize,
    pair: HomotheticPair,
    closed_form: Option<f64>,
    reports: Vec<InvariantReport>,
    lateral_omega: f64,
    omega_defect: f64,
    identity_residual: f64,
    symmetry_defect: f64,
    max_relative_dev: f64,
    verdict: ConjectureVerdict,
    note: String,
}

fn verdict_label(v: ConjectureVerdict) -> &'static str {
    match v {
        ConjectureVerdict::Supported => "Supported",
        ConjectureVerdict::Violated => "Violated",
        ConjectureVerdict::Inconclusive => "Inconclusive",
    }
}

fn sweep_verdict(r: &InvariantReport, tol: f64) -> ConjectureVerdict {
    if r.verdict == Verdict::Zero {
        ConjectureVerdict::Supported
    } else {
        ConjectureVerdict::from_deviation(r.relative_dev, tol, 1e-4)
    }
}

fn cmd_area_sum(s: &Settings) -> CliResult<Outcome> {
    let pair = s.pair()?;
    let cfg = s.sweep_config();
    let tol = s.tol.unwrap_or(1e-8);
    let cor = lateral_corollaries(&pair, &cfg)?;
    let symmetry_defect = lateral_symmetry_defect(&pair, cfg.samples)?;
    let area = &cor.reports[0];
    let (verdict, note) = if pair.n % 2 == 1 {
        let mut v = sweep_verdict(area, tol);
        if let Some(e) = area.closed_form_error {
            if e > tol {
                v = ConjectureVerdict::Violated;
            }
        }
        (v, "odd N: 1/A1 + 1/A2 tested for invariance".to_string())
    } else {
        (
            ConjectureVerdict::from_deviation(symmetry_defect, 1e-10, 1e-4),
            "even N: the conjecture concerns odd N; A1 = A2 tested instead".to_string(),
        )
    };
    let max_relative_dev = cor
        .reports
        .iter()
        .map(|r| r.relative_dev)
        .fold(0.0, f64::max);
    if s.format == Format::Csv {
        let text = invariants_csv(&cor.reports).map_err(csv_err)?;
        return Ok(finish_verdict(text, verdict, max_relative_dev));
    }
    let out = AreaSumOut {
        n: pair.n,
        pair,
        closed_form: pair.lateral_closed_form(),
        lateral_omega: cor.omega,
        omega_defect: cor.omega_defect,
        identity_residual: cor.identity_residual,
        reports: cor.reports,
        symmetry_defect,
        max_relative_dev,
        verdict,
        note,
    };
    Ok(finish_verdict(
        json("conjecture-area-sum", &out)?,
        verdict,
        max_relative_dev,
    ))
}

fn finish_verdict(text: String, verdict: ConjectureVerdict, dev: f64) -> Outcome {
    Outcome {
        text,
        failure: (verdict == ConjectureVerdict::Violated).then(|| {
            format!(
                "{} (max relative deviation {:e})",
                verdict_label(verdict),
                dev
            )
        }),
    }
}

#[derive(Serialize)]
struct Sin2Out {
    n: usize,
    frame: Frame,
    param: f64,
    reports: Vec<InvariantReport>,
    max_relative_dev: f64,
    verdict: ConjectureVerdict,
}

fn cmd_sin2theta(s: &Settings) -> CliResult<Outcome> {
    let spec = s.family()?;
    let cfg = s.sweep_config();
    let tol = s.tol.unwrap_or(1e-8);
    let reports = sweep_family(
        &spec,
        &[
            QuantityId::SumSin2ThetaOverA,
            QuantityId::SumSin2ThetaOverSumSqSides,
        ],
        &cfg,
    )?;
    let verdicts: Vec<ConjectureVerdict> = reports.iter().map(|r| sweep_verdict(r, tol)).collect();
    let verdict = if verdicts.contains(&ConjectureVerdict::Violated) {
        ConjectureVerdict::Violated
    } else if verdicts.iter().all(|v| *v == ConjectureVerdict::Supported) {
        ConjectureVerdict::Supported
    } else {
        ConjectureVerdict::Inconclusive
    };
    let dev = reports
        .iter()
        .filter(|r| r.verdict != Verdict::Zero)
        .map(|r| r.relative_dev)
        .fold(0.0, f64::max);
    if s.format == Format::Csv {
        return Ok(finish_verdict(
            invariants_csv(&reports).map_err(csv_err)?,
            verdict,
            dev,
        ));
    }
    let out = Sin2Out {
        n: spec.n(),
        frame: spec.frame(),
        param: spec.param(),
        reports,
        max_relative_dev: dev,
        verdict,
    };
    Ok(finish_verdict(
        json("conjecture-sin2theta", &out)?,
        verdict,
        dev,
    ))
}

fn cmd_isocurves(s: &Settings, circles: usize, points: usize) -> CliResult<Outcome> {
    let spec = s.family()?;
    let mut cfg = IsocurveConfig::default();
    if let Some(t) = s.tol {
        cfg.supported = t;
    }
    let r: IsocurveReport = isocurve_test(&spec, circles, points, &cfg)?;
    let worst = r.max_member_dev.max(r.brocard_dev).max(r.lemoine_dev);
    let text = match s.format {
        Format::Json => json("conjecture-isocurves", &r)?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = r
                .rows
                .iter()
                .map(|row| {
                    vec![
                        serde_json::to_value(row.kind)
                            .ok()
                            .and_then(|v| v.as_str().map(str::to_string))
                            .unwrap_or_default(),
                        fmt_f64(row.offset),
                        cell(row.circle.map(|c| c.center.re)),
                        cell(row.circle.map(|c| c.radius)),
                        fmt_f64(row.mean),
                        fmt_f64(row.max_dev),
                        fmt_f64(row.harmonic_residual),
                        row.skipped.clone().unwrap_or_default(),
                    ]
                })
                .collect();
            table_csv(
                &[
                    "kind",
                    "offset",
                    "center_x",
                    "radius",
                    "mean",
                    "max_dev",
                    "harmonic_residual",
                    "skipped",
                ],
                &rows,
            )
            .map_err(csv_err)?
        }
    };
    Ok(finish_verdict(text, r.verdict, worst))
}

#[derive(Serialize)]
struct ToHomotheticOut {
    n: usize,
    x0: f64,
    pair: HomotheticPair,
    symmedian: CPoint,
    incidence_residual: f64,
    tangency_residual: f64,
}

fn cmd_to_homothetic(s: &Settings) -> CliResult<Outcome> {
    no_csv(s, "transform")?;
    let spec = s.family()?;
    let x0 = spec.x0();
    let pair = harmonic_to_homothetic(spec.n(), x0)?;
    let (inc, tan) = homothetic_image_residuals(spec.n(), x0, &pair, s.samples)?;
    let tol = s.tol.unwrap_or(1e-9);
    let out = ToHomotheticOut {
        n: spec.n(),
        x0,
        pair,
        symmedian: FamilySpec::inversive(spec.n(), x0)?
            .brocard_objects()
            .symmedian,
        incidence_residual: inc,
        tangency_residual: tan,
    };
    Ok(Outcome {
        text: json("transform-to-homothetic", &out)?,
        failure: (inc.max(tan) >= tol)
            .then(|| format!("residual {:e} exceeds {tol:e}", inc.max(tan))),
    })
}

#[derive(Serialize)]
struct ToHarmonicOut {
    image: HarmonicImage,
    brocard_angle: f64,
    incidence_residual: f64,
    tangency_residual: f64,
}

fn cmd_to_harmonic(s: &Settings) -> CliResult<Outcome> {
    no_csv(s, "transform")?;
    let image = homothetic_to_harmonic(&s.pair()?)?;
    let (inc, tan) = image.residuals(s.samples)?;
    let tol = s.tol.unwrap_or(1e-9);
    let mut failure = None;
    if inc.max(tan) >= tol {
        failure = Some(format!("residual {:e} exceeds {tol:e}", inc.max(tan)));
    } else if image.corollary_residual >= 1e-12 {
        failure = Some(format!("corollary residual {:e}", image.corollary_residual));
    }
    let out = ToHarmonicOut {
        brocard_angle: image.brocard_angle(),
        image,
        incidence_residual: inc,
        tangency_residual: tan,
    };
    Ok(Outcome {
        text: json("transform-to-harmonic", &out)?,
        failure,
    })
}

#[derive(Serialize)]
struct LoopOut {
    report: LoopReport,
    consistency: f64,
    printed_root_is_reciprocal: bool,
}

fn cmd_loop(s: &Settings, omega: f64) -> CliResult<Outcome> {
    no_csv(s, "transform")?;
    let report = loop_closure(s.n, omega, s.t)?;
    let tol = s.tol.unwrap_or(1e-8);
    let consistency = report.consistency();
    let out = LoopOut {
        printed_root_is_reciprocal: report.printed_is_reciprocal(1e-12),
        report,
        consistency,
    };
    Ok(Outcome {
        text: json("transform-loop", &out)?,
        failure: (consistency >= tol)
            .then(|| format!("loop inconsistency {consistency:e} exceeds {tol:e}")),
    })
}

fn cmd_plot(s: &Settings, kind: PlotKind, circles: usize, resolution: usize) -> CliResult<Outcome> {
    no_csv(s, "plot")?;
    let text = match kind {
        PlotKind::Brocard => svg::brocard_figure(&s.family()?, s.t)?,
        PlotKind::Homothetic => svg::homothetic_figure(&s.pair()?, s.t)?,
        PlotKind::Apollonius => svg::apollonius_figure(&s.family()?, s.t)?,
        PlotKind::Pencil => svg::pencil_figure(&s.family()?, s.t, circles)?,
        PlotKind::Field => {
            let spec = s.family()?;
            let o = spec.brocard_objects();
            let field = omega_field(&spec, Bbox::around(&spec), resolution)?;
            let mut levels = vec![o.brocard_angle];
            if let Some(pencil) = o.pencil {
                for (k, off) in member_offsets(&pencil, &o.circumcircle, circles) {
                    let m = pencil.member_beyond(k != RowKind::L2, off)?;
                    levels.push(omega_prime(&spec, 0.0, m.point_at(0.5))?);
                }
            }
            svg::field_figure(&spec, &field, &levels, circles)?
        }
    };
    Ok(Outcome::ok(text))
}

fn dispatch(cli: &Cli) -> CliResult<(Outcome, Option<PathBuf>)> {
    let file = load_config(cli.config.as_deref())?;
    let settings = |c: &Common| Settings::resolve(c, &file);
    let (outcome, s) = match &cli.command {
        Command::Construct(c) => {
            let s = settings(c)?;
            (cmd_construct(&s)?, s)
        }
        Command::Invariants(a) => {
            let s = settings(&a.common)?;
            let qs = if a.quantity.is_empty() {
                file.quantity.clone().unwrap_or_default()
            } else {
                a.quantity.clone()
            };
            (cmd_invariants(&s, &qs)?, s)
        }
        Command::Conjectures(ConjectureCmd::AreaSum(c)) => {
            let s = settings(c)?;
            (cmd_area_sum(&s)?, s)
        }
        Command::Conjectures(ConjectureCmd::Sin2theta(c)) => {
            let s = settings(c)?;
            (cmd_sin2theta(&s)?, s)
        }
        Command::Conjectures(ConjectureCmd::Isocurves(a)) => {
            let s = settings(&a.common)?;
            let circles = a.circles.or(file.circles).unwrap_or(12);
            let points = a.points.or(file.points).unwrap_or(64);
            (cmd_isocurves(&s, circles, points)?, s)
        }
        Command::Transform(TransformCmd::ToHomothetic(c)) => {
            let s = settings(c)?;
            (cmd_to_homothetic(&s)?, s)
        }
        Command::Transform(TransformCmd::ToHarmonic(c)) => {
            let s = settings(c)?;
            (cmd_to_harmonic(&s)?, s)
        }
        Command::Transform(TransformCmd::Loop(a)) => {
            let s = settings(&a.common)?;
            let omega = a.omega.or(file.omega).unwrap_or(0.4);
            (cmd_loop(&s, omega)?, s)
        }
        Command::Plot(a) => {
            let s = settings(&a.common)?;
            let circles = a.circles.or(file.circles).unwrap_or(12);
            let resolution = a.resolution.or(file.resolution).unwrap_or(121);
            (cmd_plot(&s, a.kind, circles, resolution)?, s)
        }
    };
    Ok((outcome, s.out))
}

/// Parse `args`, run the command, write its output, and return the exit
/// code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let target: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let (outcome, out) = match dispatch(&cli) {
        Ok(v) => v,
        Err(e) => {
            let msg = match &e {
                CliError::Invalid(m) => format!("invalid configuration: {m}"),
                CliError::Tolerance(m) => format!("tolerance failure: {m}"),
                CliError::Io(m) => format!("output error: {m}"),
            };
            let _ = writeln!(stderr, "error: {msg}");
            return e.exit_code();
        }
    };
    let written = match &out {
        Some(path) => fs::write(path, &outcome.text),
        None => stdout.write_all(outcome.text.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: output error: {e}");
        return EXIT_IO;
    }
    match outcome.failure {
        Some(m) => {
            let _ = writeln!(stderr, "error: tolerance failure: {m}");
            EXIT_TOLERANCE
        }
        None => EXIT_OK,
    }
}
