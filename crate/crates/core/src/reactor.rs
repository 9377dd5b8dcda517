//! Batch reactor with the consecutive reactions A → B → C.
//!
//! ```text
//! dC_A/dt = -k1 C_A²
//! dC_B/dt =  k1 C_A² - k2 C_B
//! dC_C/dt =  k2 C_B
//! k1 = 4000 exp(-2500 / T),  k2 = 620000 exp(-5000 / T)
//! ```
//!
//! integrated over `t ∈ [0, 1]` with classical fixed-step RK4, sampling the
//! temperature profile at the stage times.

use crate::error::{Error, Result};
use crate::point::{Evaluation, Objective};
use crate::profile::{ProfileLimits, TemperatureProfile};

pub const DEFAULT_STEP: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateConstants {
    pub k1: f64,
    pub k2: f64,
}

pub fn rates(temperature: f64) -> Result<RateConstants> {
    if temperature.is_nan() || temperature <= 0.0 {
        return Err(Error::NonPositiveTemperature(temperature));
    }
    Ok(rates_unchecked(temperature))
}

fn rates_unchecked(temperature: f64) -> RateConstants {
    RateConstants { k1: 4000.0 * (-2500.0 / temperature).exp(), k2: 620_000.0 * (-5000.0 / temperature).exp() }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReactorState {
    pub c_a: f64,
    pub c_b: f64,
    pub c_c: f64,
    pub t: f64,
}

impl ReactorState {
    pub fn total(&self) -> f64 {
        self.c_a + self.c_b + self.c_c
    }

    fn concentrations(&self) -> [f64; 3] {
        [self.c_a, self.c_b, self.c_c]
    }

    fn from_concentrations(c: [f64; 3], t: f64) -> Self {
        Self { c_a: c[0], c_b: c[1], c_c: c[2], t }
    }
}

fn rhs(c: [f64; 3], k: RateConstants) -> [f64; 3] {
    let first = k.k1 * c[0] * c[0];
    let second = k.k2 * c[1];
    [-first, first - second, second]
}

/// Time derivatives `(dC_A, dC_B, dC_C)` at `temperature` (K).
pub fn derivatives(state: &ReactorState, temperature: f64) -> Result<[f64; 3]> {
    Ok(rhs(state.concentrations(), rates(temperature)?))
}

fn axpy(y: [f64; 3], a: f64, x: [f64; 3]) -> [f64; 3] {
    [y[0] + a * x[0], y[1] + a * x[1], y[2] + a * x[2]]
}

/// Reactor configuration: temperature limits, initial charge and the
/// integration step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BatchReactor {
    pub limits: ProfileLimits,
    /// Concentrations of A, B and C at `t = 0`.
    pub initial: [f64; 3],
    pub step: f64,
}

impl Default for BatchReactor {
    fn default() -> Self {
        Self { limits: ProfileLimits::default(), initial: [1.0, 0.0, 0.0], step: DEFAULT_STEP }
    }
}

impl BatchReactor {
    pub fn with_step(self, step: f64) -> Self {
        Self { step, ..self }
    }

    fn steps(&self) -> Result<usize> {
        let step = self.step;
        if !(step.is_finite() && step > 0.0 && step <= 1.0) {
            return Err(Error::InvalidStep(step));
        }
        let n = (1.0 / step).round();
        if ((1.0 / step) - n).abs() > 1e-9 * n {
            return Err(Error::InvalidStep(step));
        }
        Ok(n as usize)
    }

    /// State at `t = 1`.
    pub fn simulate(&self, profile: &TemperatureProfile) -> Result<ReactorState> {
        self.integrate(profile, |_| {})
    }

    /// Integrates to `t = 1`, handing `observer` the initial state and the
    /// state after every step.
    pub fn integrate(
        &self,
        profile: &TemperatureProfile,
        mut observer: impl FnMut(&ReactorState),
    ) -> Result<ReactorState> {
        let n = self.steps()?;
        let h = 1.0 / n as f64;
        let k_at = |t: f64| rates_unchecked(profile.temperature_unchecked(t, &self.limits));

        let mut c = self.initial;
        observer(&ReactorState::from_concentrations(c, 0.0));
        for i in 0..n {
            let t = i as f64 * h;
            let mid = k_at(t + 0.5 * h);
            let s1 = rhs(c, k_at(t));
            let s2 = rhs(axpy(c, 0.5 * h, s1), mid);
            let s3 = rhs(axpy(c, 0.5 * h, s2), mid);
            let s4 = rhs(axpy(c, h, s3), k_at(t + h));
            for j in 0..3 {
                c[j] += h / 6.0 * (s1[j] + 2.0 * s2[j] + 2.0 * s3[j] + s4[j]);
            }
            let t_next = (i + 1) as f64 * h;
            if c.iter().any(|v| !v.is_finite()) {
                return Err(Error::Diverged { t: t_next });
            }
            observer(&ReactorState::from_concentrations(c, t_next));
        }
        Ok(ReactorState::from_concentrations(c, 1.0))
    }

    /// `[-C_B(1)]`: maximising the yield of B, posed as minimisation.
    pub fn objective_single(&self, profile: &TemperatureProfile) -> Result<Evaluation> {
        let end = self.simulate(profile)?;
        Ok(Evaluation::new(vec![-end.c_b], 0.0))
    }

    /// `[-C_B(1), C_C(1)]`: maximise B while keeping C low.
    pub fn objective_multi(&self, profile: &TemperatureProfile) -> Result<Evaluation> {
        let end = self.simulate(profile)?;
        Ok(Evaluation::new(vec![-end.c_b, end.c_c], 0.0))
    }
}

/// Which reactor objective to optimise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Problem {
    #[default]
    Single,
    Multi,
}

impl Problem {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Single => "single",
            Self::Multi => "multi",
        }
    }
}

impl std::str::FromStr for Problem {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "single" => Ok(Self::Single),
            "multi" => Ok(Self::Multi),
            other => Err(format!("unknown problem `{other}` (expected single or multi)")),
        }
    }
}

/// A reactor bound to one of its objectives, usable by the solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReactorObjective {
    pub reactor: BatchReactor,
    pub problem: Problem,
}

impl Objective<TemperatureProfile> for ReactorObjective {
    fn evaluate(&self, profile: &TemperatureProfile) -> Result<Evaluation> {
        match self.problem {
            Problem::Single => self.reactor.objective_single(profile),
            Problem::Multi => self.reactor.objective_multi(profile),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::{initial_profiles, QuadraticSplineProfile};
    use approx::assert_relative_eq;

    fn flat(t: f64) -> TemperatureProfile {
        TemperatureProfile::QuadraticSpline(QuadraticSplineProfile::new(t, t, 0.5))
    }

    #[test]
    fn rate_limits() {
        let k = rates(2500.0).unwrap();
        assert_relative_eq!(k.k1, 4000.0 / std::f64::consts::E, max_relative = 1e-15);
        let k = rates(1e12).unwrap();
        assert_relative_eq!(k.k1, 4000.0, max_relative = 1e-8);
        assert_relative_eq!(k.k2, 620_000.0, max_relative = 1e-8);
        assert!(rates(0.0).is_err());
        assert!(rates(-5.0).is_err());
    }

    #[test]
    fn rates_cross_where_exponentials_balance() {
        // Bisection on k1 - k2, independent of the closed form 2500 / ln 155.
        let diff = |t: f64| {
            let k = rates(t).unwrap();
            k.k1 - k.k2
        };
        let (mut lo, mut hi) = (300.0, 1000.0);
        assert!(diff(lo) > 0.0 && diff(hi) < 0.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if diff(mid) > 0.0 {
                lo = mid
            } else {
                hi = mid
            }
        }
        assert_relative_eq!(lo, 2500.0 / 155f64.ln(), max_relative = 1e-12);
        assert!((lo - 495.69).abs() < 0.01);
    }

    #[test]
    fn derivative_identities() {
        let empty = ReactorState { c_a: 0.0, c_b: 0.0, c_c: 0.3, t: 0.2 };
        assert_eq!(derivatives(&empty, 350.0).unwrap(), [0.0, 0.0, 0.0]);

        let fresh = ReactorState { c_a: 1.0, c_b: 0.0, c_c: 0.0, t: 0.0 };
        let d = derivatives(&fresh, 323.0).unwrap();
        assert_eq!(d[1], rates(323.0).unwrap().k1);

        let mixed = ReactorState { c_a: 0.4, c_b: 0.35, c_c: 0.25, t: 0.5 };
        let d = derivatives(&mixed, 371.0).unwrap();
        assert!((d[0] + d[1] + d[2]).abs() < 1e-12);
    }

    #[test]
    fn rejects_steps_that_do_not_tile_the_horizon() {
        let r = BatchReactor::default();
        assert_eq!(r.with_step(0.3).simulate(&flat(323.0)), Err(Error::InvalidStep(0.3)));
        assert!(r.with_step(0.0).simulate(&flat(323.0)).is_err());
        assert!(r.with_step(0.25).simulate(&flat(323.0)).is_ok());
    }

    #[test]
    fn diverging_kinetics_are_reported() {
        let r = BatchReactor { initial: [1e200, 0.0, 0.0], ..BatchReactor::default() };
        assert!(matches!(r.simulate(&flat(398.0)), Err(Error::Diverged { .. })));
    }

    #[test]
    fn both_initial_profiles_give_the_same_yield() {
        let r = BatchReactor::default();
        let [a, b] = <[TemperatureProfile; 2]>::try_from(initial_profiles()).unwrap();
        let (a, b) = (r.simulate(&a).unwrap(), r.simulate(&b).unwrap());
        assert!((a.c_b - b.c_b).abs() < 1e-12);
    }

    #[test]
    fn multi_objective_shares_first_component() {
        let r = BatchReactor::default();
        let p = flat(340.0);
        let single = r.objective_single(&p).unwrap();
        let multi = r.objective_multi(&p).unwrap();
        assert_eq!(single.objectives[0], multi.objectives[0]);
        assert_eq!(multi.objectives.len(), 2);
        assert_eq!(multi.constraint, 0.0);
    }
}
