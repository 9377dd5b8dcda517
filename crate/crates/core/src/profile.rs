//! Temperature profile representations.
//!
//! Two encodings of a time-varying temperature on `t ∈ [0, 1]` compete in
//! the same population:
//!
//! * [`PiecewiseLinearProfile`]: an initial temperature followed by `n_t`
//!   segments. Segment `i` takes the fraction `ft[i]` of the time still
//!   remaining and changes the temperature by `fT[i] * ΔT_max` over that
//!   span. The last temperature is held until `t = 1`.
//! * [`QuadraticSplineProfile`]: two quadratics joined at `t_meet`, with
//!   zero slope at both ends and matching slopes at the joint.
//!
//! Every encoded value decodes to a usable profile; temperatures are
//! clamped to `[T_min, T_max]`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::format_real;
use crate::point::{Domain, Genotype};

pub const PIECEWISE_LINEAR_TAG: &str = "piecewise-linear";
pub const QUADRATIC_SPLINE_TAG: &str = "quadratic-spline";

/// Number of segments in the piecewise-linear encoding used by the reactor
/// study.
pub const DEFAULT_SEGMENTS: usize = 4;

const MEET_LOWER: f64 = 0.25;
const MEET_UPPER: f64 = 0.75;

/// Temperature bounds (K) and the largest per-segment change.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileLimits {
    pub t_min: f64,
    pub t_max: f64,
    pub delta_t_max: f64,
}

impl Default for ProfileLimits {
    fn default() -> Self {
        Self { t_min: 298.0, t_max: 398.0, delta_t_max: 50.0 }
    }
}

impl ProfileLimits {
    fn clamp(&self, temperature: f64) -> f64 {
        temperature.clamp(self.t_min, self.t_max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinearProfile {
    /// Fraction of the remaining time taken by each segment, in `[0, 1]`.
    pub time_fractions: Vec<f64>,
    /// Temperature change of each segment as a fraction of `ΔT_max`, in `[-1, 1]`.
    pub temperature_changes: Vec<f64>,
    /// Temperature at `t = 0` (K).
    pub initial_temperature: f64,
}

impl PiecewiseLinearProfile {
    pub fn new(time_fractions: Vec<f64>, temperature_changes: Vec<f64>, initial_temperature: f64) -> Result<Self> {
        if time_fractions.len() != temperature_changes.len() || time_fractions.is_empty() {
            return Err(Error::MalformedGenotype(format!(
                "{} time fractions against {} temperature changes",
                time_fractions.len(),
                temperature_changes.len()
            )));
        }
        Ok(Self { time_fractions, temperature_changes, initial_temperature })
    }

    pub fn segments(&self) -> usize {
        self.time_fractions.len()
    }

    /// End time of each segment.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut start = 0.0;
        self.time_fractions
            .iter()
            .map(|f| {
                start += f * (1.0 - start);
                start
            })
            .collect()
    }

    fn temperature(&self, t: f64, limits: &ProfileLimits) -> f64 {
        let mut start = 0.0;
        let mut current = self.initial_temperature;
        for (fraction, change) in self.time_fractions.iter().zip(&self.temperature_changes) {
            if t <= start {
                return limits.clamp(current);
            }
            let length = fraction * (1.0 - start);
            let end = start + length;
            let next = current + change * limits.delta_t_max;
            if length > 0.0 && t <= end {
                return limits.clamp(current + (next - current) * (t - start) / length);
            }
            start = end;
            current = next;
        }
        limits.clamp(current)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticSplineProfile {
    /// Temperature at `t = 0` (K).
    pub start: f64,
    /// Temperature at `t = 1` (K).
    pub end: f64,
    /// Time at which the two quadratics meet, in `[0.25, 0.75]`.
    pub meet: f64,
}

impl QuadraticSplineProfile {
    pub fn new(start: f64, end: f64, meet: f64) -> Self {
        Self { start, end, meet }
    }

    /// Closed form of the two-piece quadratic with `T(0) = start`,
    /// `T(1) = end`, `T'(0) = T'(1) = 0` and a C¹ joint at `meet`:
    /// `start + Δ t² / m` before the joint, `end + Δ (t - 1)² / (m - 1)` after.
    fn temperature(&self, t: f64, limits: &ProfileLimits) -> f64 {
        let delta = self.end - self.start;
        let value = if t <= self.meet {
            self.start + delta * t * t / self.meet
        } else {
            self.end + delta * (t - 1.0) * (t - 1.0) / (self.meet - 1.0)
        };
        limits.clamp(value)
    }
}

/// Representation labels, used to look up bounds and to track the make-up
/// of a population.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Representation {
    PiecewiseLinear,
    QuadraticSpline,
}

impl Representation {
    pub fn tag(self) -> &'static str {
        match self {
            Self::PiecewiseLinear => PIECEWISE_LINEAR_TAG,
            Self::QuadraticSpline => QUADRATIC_SPLINE_TAG,
        }
    }

    /// Lower and upper bounding profiles for this representation. `segments`
    /// only matters for the piecewise-linear encoding.
    pub fn bounds(self, limits: &ProfileLimits, segments: usize) -> (TemperatureProfile, TemperatureProfile) {
        match self {
            Self::PiecewiseLinear => (
                TemperatureProfile::PiecewiseLinear(PiecewiseLinearProfile {
                    time_fractions: vec![0.0; segments],
                    temperature_changes: vec![-1.0; segments],
                    initial_temperature: limits.t_min,
                }),
                TemperatureProfile::PiecewiseLinear(PiecewiseLinearProfile {
                    time_fractions: vec![1.0; segments],
                    temperature_changes: vec![1.0; segments],
                    initial_temperature: limits.t_max,
                }),
            ),
            Self::QuadraticSpline => (
                TemperatureProfile::QuadraticSpline(QuadraticSplineProfile::new(
                    limits.t_min,
                    limits.t_min,
                    MEET_LOWER,
                )),
                TemperatureProfile::QuadraticSpline(QuadraticSplineProfile::new(
                    limits.t_max,
                    limits.t_max,
                    MEET_UPPER,
                )),
            ),
        }
    }
}

impl FromStr for Representation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            PIECEWISE_LINEAR_TAG => Ok(Self::PiecewiseLinear),
            QUADRATIC_SPLINE_TAG => Ok(Self::QuadraticSpline),
            other => Err(Error::UnknownRepresentation(other.to_owned())),
        }
    }
}

/// A temperature profile in either representation.
#[derive(Debug, Clone, PartialEq)]
pub enum TemperatureProfile {
    PiecewiseLinear(PiecewiseLinearProfile),
    QuadraticSpline(QuadraticSplineProfile),
}

impl TemperatureProfile {
    pub fn representation(&self) -> Representation {
        match self {
            Self::PiecewiseLinear(_) => Representation::PiecewiseLinear,
            Self::QuadraticSpline(_) => Representation::QuadraticSpline,
        }
    }

    /// Temperature (K) at time `t ∈ [0, 1]`.
    pub fn temperature_at(&self, t: f64, limits: &ProfileLimits) -> Result<f64> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::TimeOutOfRange(t));
        }
        Ok(self.temperature_unchecked(t, limits))
    }

    /// Like [`temperature_at`](Self::temperature_at) but clamps `t` into
    /// `[0, 1]`, for integrators whose stage times may overshoot by an ulp.
    pub fn temperature_unchecked(&self, t: f64, limits: &ProfileLimits) -> f64 {
        let t = t.clamp(0.0, 1.0);
        match self {
            Self::PiecewiseLinear(p) => p.temperature(t, limits),
            Self::QuadraticSpline(q) => q.temperature(t, limits),
        }
    }

    /// Semicolon-separated form: `pwl;T0;ft..;fT..` or `qsp;Tstart;Tend;tmeet`.
    pub fn encode(&self) -> String {
        let (prefix, values) = match self {
            Self::PiecewiseLinear(_) => ("pwl", self.coordinates()),
            Self::QuadraticSpline(_) => ("qsp", self.coordinates()),
        };
        std::iter::once(prefix.to_owned()).chain(values.into_iter().map(format_real)).collect::<Vec<_>>().join(";")
    }
}

impl fmt::Display for TemperatureProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}

impl FromStr for TemperatureProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let malformed = || Error::MalformedGenotype(s.to_owned());
        let mut fields = s.split(';');
        let prefix = fields.next().ok_or_else(malformed)?;
        let values = fields
            .map(|v| v.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| malformed())?;
        match prefix {
            "pwl" if values.len() >= 3 && values.len() % 2 == 1 => {
                let n = (values.len() - 1) / 2;
                Ok(Self::PiecewiseLinear(PiecewiseLinearProfile {
                    initial_temperature: values[0],
                    time_fractions: values[1..=n].to_vec(),
                    temperature_changes: values[n + 1..].to_vec(),
                }))
            }
            "qsp" if values.len() == 3 => {
                Ok(Self::QuadraticSpline(QuadraticSplineProfile::new(values[0], values[1], values[2])))
            }
            _ => Err(malformed()),
        }
    }
}

impl Genotype for TemperatureProfile {
    fn tag(&self) -> &'static str {
        self.representation().tag()
    }

    fn coordinates(&self) -> Vec<f64> {
        match self {
            Self::PiecewiseLinear(p) => std::iter::once(p.initial_temperature)
                .chain(p.time_fractions.iter().copied())
                .chain(p.temperature_changes.iter().copied())
                .collect(),
            Self::QuadraticSpline(q) => vec![q.start, q.end, q.meet],
        }
    }

    fn with_coordinates(&self, coords: &[f64]) -> Self {
        match self {
            Self::PiecewiseLinear(p) => {
                let n = p.segments();
                Self::PiecewiseLinear(PiecewiseLinearProfile {
                    initial_temperature: coords[0],
                    time_fractions: coords[1..=n].to_vec(),
                    temperature_changes: coords[n + 1..=2 * n].to_vec(),
                })
            }
            Self::QuadraticSpline(_) => {
                Self::QuadraticSpline(QuadraticSplineProfile::new(coords[0], coords[1], coords[2]))
            }
        }
    }
}

/// Bounding profiles for the representation labelled `tag`.
pub fn default_bounds(tag: &str, limits: &ProfileLimits) -> Result<(TemperatureProfile, TemperatureProfile)> {
    Ok(tag.parse::<Representation>()?.bounds(limits, DEFAULT_SEGMENTS))
}

/// Search domain covering both representations; each point is bounded by
/// the box of its own representation (and segment count).
pub fn profile_domain(limits: ProfileLimits) -> Domain<TemperatureProfile> {
    let segments = |p: &TemperatureProfile| match p {
        TemperatureProfile::PiecewiseLinear(p) => p.segments(),
        TemperatureProfile::QuadraticSpline(_) => 0,
    };
    Domain::new(
        move |p: &TemperatureProfile| p.representation().bounds(&limits, segments(p)).0,
        move |p: &TemperatureProfile| p.representation().bounds(&limits, segments(p)).1,
    )
}

/// The two starting points of the reactor study: a flat spline and a flat
/// piecewise-linear profile, both at 323 K.
pub fn initial_profiles() -> Vec<TemperatureProfile> {
    vec![
        TemperatureProfile::QuadraticSpline(QuadraticSplineProfile::new(323.0, 323.0, 0.5)),
        TemperatureProfile::PiecewiseLinear(PiecewiseLinearProfile {
            time_fractions: vec![0.5; DEFAULT_SEGMENTS],
            temperature_changes: vec![0.0; DEFAULT_SEGMENTS],
            initial_temperature: 323.0,
        }),
    ]
}
