//! The iterated maps and closed-form pair-correlation statistics.
//!
//! Both maps are pure functions returning the next state together with the
//! analytic derivative d(next)/d(current), which the Lyapunov machinery in
//! [`crate::dynamics`] consumes directly.

use std::f64::consts::PI;
use thiserror::Error;

/// States closer to zero than this are rejected: `sin(pi/x)` oscillates
/// infinitely fast there and any evaluated value would be noise.
pub const EPS_SING: f64 = 1e-12;

/// Escape cap. Orbits whose magnitude exceeds this are treated as diverged
/// (the voltage-collapse proxy).
pub const X_MAX: f64 = 1e12;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum MapError {
    #[error("state {x:e} is within the singularity guard (|x| < {EPS_SING:e})")]
    SingularState { x: f64 },
    #[error("map evaluation produced a non-finite value")]
    Overflow,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

/// Parameters of the electrical map: resistance, inductance, capacitance and
/// the dimensionless scaling parameter `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElectricalParams {
    pub r: f64,
    pub resistance: f64,
    pub inductance: f64,
    pub capacitance: f64,
}

impl ElectricalParams {
    /// Arguments follow the conventional symbol order (r, R, L, C).
    pub fn new(r: f64, resistance: f64, inductance: f64, capacitance: f64) -> Result<Self, MapError> {
        let p = Self { r, resistance, inductance, capacitance };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), MapError> {
        let all_finite = self.r.is_finite()
            && self.resistance.is_finite()
            && self.inductance.is_finite()
            && self.capacitance.is_finite();
        if !all_finite {
            return Err(MapError::InvalidParams("all fields must be finite".into()));
        }
        if self.r <= 0.0 {
            return Err(MapError::InvalidParams(format!("r must be > 0, got {}", self.r)));
        }
        if self.inductance <= 0.0 {
            return Err(MapError::InvalidParams(format!("L must be > 0, got {}", self.inductance)));
        }
        if self.capacitance <= 0.0 {
            return Err(MapError::InvalidParams(format!("C must be > 0, got {}", self.capacitance)));
        }
        if self.resistance < 0.0 {
            return Err(MapError::InvalidParams(format!("R must be >= 0, got {}", self.resistance)));
        }
        Ok(())
    }
}

/// Parameters of the appendix map x/2 + 1/(4x) - alpha/x^3.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AppendixParams {
    pub alpha: f64,
}

impl AppendixParams {
    pub fn new(alpha: f64) -> Result<Self, MapError> {
        if !alpha.is_finite() {
            return Err(MapError::InvalidParams("alpha must be finite".into()));
        }
        Ok(Self { alpha })
    }
}

/// Next state and its derivative with respect to the current state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapEval {
    pub value: f64,
    pub derivative: f64,
}

/// Evaluates the electrical map
/// `x' = 1 - (sin(pi/x) / (r pi / x))^2 + R/L + 1/(C x)`
/// together with its analytic derivative.
pub fn eval_electrical_map(x: f64, p: &ElectricalParams) -> Result<MapEval, MapError> {
    if x.abs() < EPS_SING {
        return Err(MapError::SingularState { x });
    }
    let s = (PI / x).sin();
    let c = (PI / x).cos();
    let rpi = p.r * PI;
    let sinc_scaled = x * s / rpi;
    let value = 1.0 - sinc_scaled * sinc_scaled
        + p.resistance / p.inductance
        + 1.0 / (p.capacitance * x);
    // d/dx [-(x s / (r pi))^2] = -2 x s (s - (pi/x) c) / (r pi)^2
    let derivative =
        -2.0 * x * s * (s - (PI / x) * c) / (rpi * rpi) - 1.0 / (p.capacitance * x * x);
    if !value.is_finite() || !derivative.is_finite() {
        return Err(MapError::Overflow);
    }
    Ok(MapEval { value, derivative })
}

/// Evaluates the appendix map `x' = x/2 + 1/(4x) - alpha/x^3` with its
/// analytic derivative `1/2 - 1/(4x^2) + 3 alpha/x^4`.
pub fn eval_appendix_map(x: f64, p: &AppendixParams) -> Result<MapEval, MapError> {
    if x.abs() < EPS_SING {
        return Err(MapError::SingularState { x });
    }
    let x2 = x * x;
    let value = 0.5 * x + 0.25 / x - p.alpha / (x2 * x);
    let derivative = 0.5 - 0.25 / x2 + 3.0 * p.alpha / (x2 * x2);
    if !value.is_finite() || !derivative.is_finite() {
        return Err(MapError::Overflow);
    }
    Ok(MapEval { value, derivative })
}

/// Which map an orbit runs on, with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MapParams {
    Electrical(ElectricalParams),
    Appendix(AppendixParams),
}

impl MapParams {
    pub fn eval(&self, x: f64) -> Result<MapEval, MapError> {
        match self {
            MapParams::Electrical(p) => eval_electrical_map(x, p),
            MapParams::Appendix(p) => eval_appendix_map(x, p),
        }
    }

    /// The scan parameter: `r` for the electrical map, `alpha` for the
    /// appendix map.
    pub fn scan_param(&self) -> f64 {
        match self {
            MapParams::Electrical(p) => p.r,
            MapParams::Appendix(p) => p.alpha,
        }
    }

    /// Same map with the scan parameter replaced.
    pub fn with_scan_param(&self, v: f64) -> MapParams {
        match *self {
            MapParams::Electrical(p) => MapParams::Electrical(ElectricalParams { r: v, ..p }),
            MapParams::Appendix(_) => MapParams::Appendix(AppendixParams { alpha: v }),
        }
    }
}

/// Montgomery's pair correlation density `g(u) = 1 - sinc^2(pi u) + delta`,
/// with the sinc limit 1 at u = 0. The deviation term is caller-supplied.
pub fn pair_correlation_g(u: f64, delta_term: Option<f64>) -> f64 {
    let sinc = if u == 0.0 { 1.0 } else { (PI * u).sin() / (PI * u) };
    1.0 - sinc * sinc + delta_term.unwrap_or(0.0)
}

/// The sine-form pair correlation
/// `R2(d) = (2/pi) (d sin(pi d / 2) + sin^2(pi d / 2) / 2)`.
pub fn pair_correlation_r2(delta: f64) -> f64 {
    let s = (PI * delta / 2.0).sin();
    (2.0 / PI) * (delta * s + s * s / 2.0)
}
