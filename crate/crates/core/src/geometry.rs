//! Phase-space constructions over orbits: delay-coordinate phase portraits,
//! Poincaré sections, and the 3-D attractor embedding
//! (x, sin x, cos x).

use crate::dynamics::Orbit;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum GeometryError {
    #[error("orbit has too few samples ({got}); need at least {need}")]
    TooShort { got: usize, need: usize },
    #[error("orbit did not complete")]
    Incomplete,
    #[error("stroboscopic stride must be >= 1")]
    InvalidStride,
}

/// How the Poincaré surface is realized for a 1-D map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SectionMode {
    /// Delay pairs (x_n, x_{n+1}) that straddle the threshold.
    Crossing,
    /// Every k-th delay pair.
    Stroboscopic(usize),
}

/// Points of a Poincaré section in delay coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct SectionPoints {
    pub section_value: f64,
    pub points: Vec<(f64, f64)>,
    pub mode: SectionMode,
}

/// Orbit embedded as (x, sin x, cos x) triples.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedOrbit<'a> {
    pub points: Vec<(f64, f64, f64)>,
    pub source: &'a Orbit,
}

/// Consecutive delay pairs (x_n, x_{n+1}) of a completed orbit.
pub fn phase_portrait(orbit: &Orbit) -> Result<Vec<(f64, f64)>, GeometryError> {
    if !orbit.status.is_completed() {
        return Err(GeometryError::Incomplete);
    }
    if orbit.samples.len() < 2 {
        return Err(GeometryError::TooShort { got: orbit.samples.len(), need: 2 });
    }
    Ok(orbit.samples.windows(2).map(|w| (w[0], w[1])).collect())
}

fn median(samples: &[f64]) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted[sorted.len() / 2]
}

/// Poincaré section of a completed orbit. In `Crossing` mode the retained
/// pairs straddle the threshold (default: the median of the retained
/// samples); `Stroboscopic(k)` keeps every k-th delay pair.
pub fn poincare_section(
    orbit: &Orbit,
    section_value: Option<f64>,
    mode: SectionMode,
) -> Result<SectionPoints, GeometryError> {
    let pairs = phase_portrait(orbit)?;
    match mode {
        SectionMode::Crossing => {
            let s = section_value.unwrap_or_else(|| median(&orbit.samples));
            let points = pairs
                .into_iter()
                .filter(|&(a, b)| (a - s) * (b - s) <= 0.0)
                .collect();
            Ok(SectionPoints { section_value: s, points, mode })
        }
        SectionMode::Stroboscopic(k) => {
            if k == 0 {
                return Err(GeometryError::InvalidStride);
            }
            let s = section_value.unwrap_or_else(|| median(&orbit.samples));
            let points = pairs.into_iter().step_by(k).collect();
            Ok(SectionPoints { section_value: s, points, mode })
        }
    }
}

/// Pointwise embedding (x, sin x, cos x); length preserved. Valid for
/// completed and escaped orbits alike.
pub fn attractor_embedding(orbit: &Orbit) -> EmbeddedOrbit<'_> {
    let points = orbit.samples.iter().map(|&x| (x, x.sin(), x.cos())).collect();
    EmbeddedOrbit { points, source: orbit }
}
