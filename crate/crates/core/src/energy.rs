//! Circuit-interpretation energy metrics over orbits.
//!
//! The state x is read as the inductor current analog and the charge analog
//! at once: E_L = L x^2 / 2, E_C = x^2 / (2 C), and the transfer rate is the
//! per-step change of the inductor energy. Sums are left-to-right so results
//! are bit-reproducible.

use crate::dynamics::{generate_orbit, OrbitStatus};
use crate::dynamics::Orbit;
use crate::maps::{ElectricalParams, MapParams};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum EnergyError {
    #[error("orbit has too few samples ({got}); need at least 2")]
    TooShort { got: usize },
}

/// Per-step energy series over an orbit.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergySeries {
    pub e_inductor: Vec<f64>,
    pub e_capacitor: Vec<f64>,
    /// transfer_rate[k] = e_inductor[k+1] - e_inductor[k]
    pub transfer_rate: Vec<f64>,
}

pub fn energy_series(orbit: &Orbit, p: &ElectricalParams) -> Result<EnergySeries, EnergyError> {
    if orbit.samples.len() < 2 {
        return Err(EnergyError::TooShort { got: orbit.samples.len() });
    }
    let e_inductor: Vec<f64> =
        orbit.samples.iter().map(|&x| 0.5 * p.inductance * x * x).collect();
    let e_capacitor: Vec<f64> =
        orbit.samples.iter().map(|&x| 0.5 * x * x / p.capacitance).collect();
    let transfer_rate = e_inductor.windows(2).map(|w| w[1] - w[0]).collect();
    Ok(EnergySeries { e_inductor, e_capacitor, transfer_rate })
}

fn mean_ltr(values: &[f64]) -> f64 {
    let mut sum = 0.0;
    for &v in values {
        sum += v;
    }
    sum / values.len() as f64
}

/// One entry of an energy sweep; aborted orbits carry no numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyPoint {
    pub r: f64,
    pub mean_e_inductor: Option<f64>,
    pub mean_e_capacitor: Option<f64>,
    pub status: OrbitStatus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransferPoint {
    pub r: f64,
    pub mean_transfer_rate: Option<f64>,
    pub status: OrbitStatus,
}

pub fn energy_point(
    base: &ElectricalParams,
    r: f64,
    x0: f64,
    n: usize,
    transient: usize,
) -> EnergyPoint {
    let p = ElectricalParams { r, ..*base };
    let orbit = generate_orbit(&MapParams::Electrical(p), x0, n, transient);
    if !orbit.status.is_completed() || orbit.samples.is_empty() {
        return EnergyPoint { r, mean_e_inductor: None, mean_e_capacitor: None, status: orbit.status };
    }
    let series = energy_series(&orbit, &p).ok();
    match series {
        Some(s) => EnergyPoint {
            r,
            mean_e_inductor: Some(mean_ltr(&s.e_inductor)),
            mean_e_capacitor: Some(mean_ltr(&s.e_capacitor)),
            status: orbit.status,
        },
        None => EnergyPoint { r, mean_e_inductor: None, mean_e_capacitor: None, status: orbit.status },
    }
}

/// Time-averaged post-transient energies per r over the grid.
pub fn energy_vs_r(
    base: &ElectricalParams,
    r_range: (f64, f64),
    steps: usize,
    x0: f64,
    n: usize,
    transient: usize,
) -> Vec<EnergyPoint> {
    crate::dynamics::scan_grid(r_range.0, r_range.1, steps)
        .into_iter()
        .map(|r| energy_point(base, r, x0, n, transient))
        .collect()
}

pub fn transfer_point(
    base: &ElectricalParams,
    r: f64,
    x0: f64,
    n: usize,
    transient: usize,
) -> TransferPoint {
    let p = ElectricalParams { r, ..*base };
    let orbit = generate_orbit(&MapParams::Electrical(p), x0, n, transient);
    if !orbit.status.is_completed() {
        return TransferPoint { r, mean_transfer_rate: None, status: orbit.status };
    }
    match energy_series(&orbit, &p) {
        Ok(s) => TransferPoint {
            r,
            mean_transfer_rate: Some(mean_ltr(&s.transfer_rate)),
            status: orbit.status,
        },
        Err(_) => TransferPoint { r, mean_transfer_rate: None, status: orbit.status },
    }
}

/// Mean per-step inductor-energy change per r; sign free.
pub fn transfer_rate_vs_r(
    base: &ElectricalParams,
    r_range: (f64, f64),
    steps: usize,
    x0: f64,
    n: usize,
    transient: usize,
) -> Vec<TransferPoint> {
    crate::dynamics::scan_grid(r_range.0, r_range.1, steps)
        .into_iter()
        .map(|r| transfer_point(base, r, x0, n, transient))
        .collect()
}
