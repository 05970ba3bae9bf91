//! Poncelet harmonic polygons: constructions, closed-form Brocard geometry,
//! conserved-quantity sweeps, polar maps to the homothetic family, and
//! Brocard-angle isocurves of inversive images.
//!
//! The canonical frame is the inversive one: the regular `N`-gon inscribed
//! in the unit circle is inverted in the unit circle centered at `(x0, 0)`.
//! The Casey frame (unit circumcircle, interior limiting point at `d`) is
//! related to it by a similarity and shares the parameter, `d = x0`.

pub mod cli;
pub mod error;
pub mod family;
pub mod geom;
pub mod invariants;
pub mod isocurves;
pub mod numeric;
pub mod report;
pub mod svg;
pub mod transforms;

pub use error::{Error, Result};
pub use family::{BrocardObjects, FamilySpec, Frame, PolygonSnapshot};
pub use geom::{pt, AxisEllipse, CPoint, Circle, CirclePencil, Line, Polygon};
pub use invariants::{InvariantReport, QuantityId, SweepConfig, Verdict};

/// Default relative tolerances, scaled by the configuration's bounding-box
/// diameter.
pub mod tol {
    /// Direct closed-form evaluations.
    pub const DIRECT: f64 = 1e-12;
    /// Quantities obtained through a chain of constructions.
    pub const DERIVED: f64 = 1e-10;
}
