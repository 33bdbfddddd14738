//! Orbit generation, fixed-point solving, Lyapunov exponents, and
//! bifurcation/Lyapunov parameter scans.

use crate::maps::{MapError, MapParams, EPS_SING, X_MAX};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum DynamicsError {
    #[error("orbit aborted before the averaging window completed: {status:?}")]
    OrbitAborted { status: OrbitStatus },
    #[error("derivative magnitude underflowed at step {step} (|f'| = {value:e})")]
    DegenerateDerivative { step: usize, value: f64 },
    #[error("invalid arguments: {0}")]
    InvalidArguments(String),
}

/// How an orbit terminated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OrbitStatus {
    Completed,
    /// |x| exceeded the escape cap at `step`; voltage-collapse proxy.
    Escaped { step: usize, last: f64 },
    /// The state entered the singularity guard band at `step`.
    Singular { step: usize },
}

impl OrbitStatus {
    pub fn is_completed(&self) -> bool {
        matches!(self, OrbitStatus::Completed)
    }

    pub fn label(&self) -> &'static str {
        match self {
            OrbitStatus::Completed => "completed",
            OrbitStatus::Escaped { .. } => "escaped",
            OrbitStatus::Singular { .. } => "singular",
        }
    }
}

/// A trajectory record: retained post-transient iterates plus termination
/// status. Samples are the iterates `transient+1 ..= n`, in order.
#[derive(Debug, Clone, PartialEq)]
pub struct Orbit {
    pub params: MapParams,
    pub x0: f64,
    pub transient: usize,
    pub samples: Vec<f64>,
    pub status: OrbitStatus,
}

/// Iterates the map `n` times from `x0`, discarding the first `transient`
/// iterates. Abnormal termination is recorded in the status, never raised.
pub fn generate_orbit(params: &MapParams, x0: f64, n: usize, transient: usize) -> Orbit {
    let mut samples = Vec::with_capacity(n.saturating_sub(transient));
    let mut status = OrbitStatus::Completed;
    if x0.abs() < EPS_SING {
        status = OrbitStatus::Singular { step: 0 };
    } else {
        let mut x = x0;
        for step in 1..=n {
            match params.eval(x) {
                Ok(e) => x = e.value,
                Err(_) => {
                    status = OrbitStatus::Singular { step };
                    break;
                }
            }
            if x.abs() > X_MAX {
                status = OrbitStatus::Escaped { step, last: x };
                break;
            }
            if step > transient {
                samples.push(x);
            }
        }
    }
    Orbit { params: *params, x0, transient, samples, status }
}

/// Stability class of a fixed point, from the multiplier magnitude.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stability {
    Attracting,
    Repelling,
    Neutral,
}

impl Stability {
    pub const EPS_NEUTRAL: f64 = 1e-9;

    pub fn classify(multiplier: f64) -> Stability {
        let m = multiplier.abs();
        if m < 1.0 - Self::EPS_NEUTRAL {
            Stability::Attracting
        } else if m > 1.0 + Self::EPS_NEUTRAL {
            Stability::Repelling
        } else {
            Stability::Neutral
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Stability::Attracting => "attracting",
            Stability::Repelling => "repelling",
            Stability::Neutral => "neutral",
        }
    }
}

/// A solved fixed point with its multiplier and classification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointRecord {
    /// Scan parameter at which the point was found (r or alpha).
    pub r: f64,
    pub x_star: f64,
    pub multiplier: f64,
    pub stability: Stability,
    pub residual: f64,
}

const NEWTON_MAX_ITER: usize = 100;
const NEWTON_STEP_TOL: f64 = 1e-13;
const ROOT_RESIDUAL_TOL: f64 = 1e-10;
const ROOT_MERGE_TOL: f64 = 1e-8;

fn newton_fixed_point(params: &MapParams, seed: f64) -> Option<f64> {
    let mut x = seed;
    for _ in 0..NEWTON_MAX_ITER {
        let e = params.eval(x).ok()?;
        let g = e.value - x;
        let mut gp = e.derivative - 1.0;
        if gp.abs() < 1e-12 {
            // derivative degenerate at this point: secant-style fallback
            let h = 1e-7 * x.abs().max(1e-7);
            let fp = params.eval(x + h).ok()?.value;
            let fm = params.eval(x - h).ok()?.value;
            gp = (fp - fm) / (2.0 * h) - 1.0;
            if gp.abs() < 1e-12 {
                return None;
            }
        }
        let step = g / gp;
        x -= step;
        if !x.is_finite() || x.abs() < EPS_SING {
            return None;
        }
        if step.abs() <= NEWTON_STEP_TOL * x.abs().max(1.0) {
            return Some(x);
        }
    }
    None
}

/// Newton search for fixed points f(x) = x from uniform seeds over the
/// interval. Non-converging seeds are dropped; duplicates within 1e-8 are
/// merged keeping the smaller residual; records are sorted by x_star.
pub fn find_fixed_points(
    params: &MapParams,
    search_interval: (f64, f64),
    n_seeds: usize,
) -> Vec<FixedPointRecord> {
    let (lo, hi) = search_interval;
    // NaN endpoints fail the ordering check and yield an empty result
    if lo.partial_cmp(&hi) != Some(std::cmp::Ordering::Less) || n_seeds == 0 {
        return Vec::new();
    }
    let mut records: Vec<FixedPointRecord> = Vec::new();
    for i in 0..n_seeds {
        let t = if n_seeds == 1 { 0.5 } else { i as f64 / (n_seeds - 1) as f64 };
        let seed = lo + t * (hi - lo);
        if seed.abs() < EPS_SING {
            continue;
        }
        let Some(x_star) = newton_fixed_point(params, seed) else { continue };
        if !(lo..=hi).contains(&x_star) {
            continue;
        }
        let Ok(e) = params.eval(x_star) else { continue };
        let residual = (e.value - x_star).abs();
        if residual >= ROOT_RESIDUAL_TOL {
            continue;
        }
        let rec = FixedPointRecord {
            r: params.scan_param(),
            x_star,
            multiplier: e.derivative,
            stability: Stability::classify(e.derivative),
            residual,
        };
        match records.iter_mut().find(|r| (r.x_star - x_star).abs() < ROOT_MERGE_TOL) {
            Some(existing) => {
                if rec.residual < existing.residual {
                    *existing = rec;
                }
            }
            None => records.push(rec),
        }
    }
    records.sort_by(|a, b| a.x_star.total_cmp(&b.x_star));
    records
}

/// Lyapunov exponent: mean of log|f'(x_k)| over the post-transient iterates
/// x_{transient+1} ..= x_n, using the analytic derivative.
pub fn lyapunov_exponent(
    params: &MapParams,
    x0: f64,
    n: usize,
    transient: usize,
) -> Result<f64, DynamicsError> {
    if n <= transient {
        return Err(DynamicsError::InvalidArguments(format!(
            "n ({n}) must exceed transient ({transient})"
        )));
    }
    if x0.abs() < EPS_SING {
        return Err(DynamicsError::OrbitAborted {
            status: OrbitStatus::Singular { step: 0 },
        });
    }
    let mut x = x0;
    let mut sum = 0.0;
    let mut count = 0usize;
    for step in 1..=n {
        let e = match params.eval(x) {
            Ok(e) => e,
            Err(MapError::SingularState { .. }) | Err(MapError::Overflow) => {
                return Err(DynamicsError::OrbitAborted {
                    status: OrbitStatus::Singular { step },
                });
            }
            Err(MapError::InvalidParams(m)) => {
                return Err(DynamicsError::InvalidArguments(m));
            }
        };
        x = e.value;
        if x.abs() > X_MAX {
            return Err(DynamicsError::OrbitAborted {
                status: OrbitStatus::Escaped { step, last: x },
            });
        }
        if step > transient {
            let d = match params.eval(x) {
                Ok(e) => e.derivative,
                Err(_) => {
                    return Err(DynamicsError::OrbitAborted {
                        status: OrbitStatus::Singular { step },
                    });
                }
            };
            if d.abs() < 1e-300 {
                return Err(DynamicsError::DegenerateDerivative { step, value: d.abs() });
            }
            sum += d.abs().ln();
            count += 1;
        }
    }
    Ok(sum / count as f64)
}

/// One entry of a parameter scan, fully determined by the grid value.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanEntry {
    pub retained: Vec<f64>,
    pub lyapunov: Option<f64>,
    pub status: OrbitStatus,
}

/// Bifurcation/Lyapunov scan over a parameter grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub parameter_grid: Vec<f64>,
    pub retained_points: Vec<Vec<f64>>,
    pub lyapunov: Vec<Option<f64>>,
    pub status: Vec<OrbitStatus>,
}

/// Uniform grid of `steps` values over [lo, hi], endpoints exact.
pub fn scan_grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    assert!(steps >= 2, "scan needs at least two grid points");
    (0..steps)
        .map(|i| {
            if i == steps - 1 {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (steps - 1) as f64
            }
        })
        .collect()
}

/// Computes one scan grid point. Pure: the CLI sweep runner calls this from
/// worker threads and merges by grid index.
pub fn scan_point(
    base: &MapParams,
    value: f64,
    x0: f64,
    n: usize,
    transient: usize,
    retain: usize,
) -> ScanEntry {
    let params = base.with_scan_param(value);
    let orbit = generate_orbit(&params, x0, n, transient);
    let lyapunov = match orbit.status {
        OrbitStatus::Completed => lyapunov_exponent(&params, x0, n, transient).ok(),
        _ => None,
    };
    let keep = retain.min(orbit.samples.len());
    let retained = orbit.samples[orbit.samples.len() - keep..].to_vec();
    let retained = if orbit.status.is_completed() { retained } else { Vec::new() };
    ScanEntry { retained, lyapunov, status: orbit.status }
}

/// Runs `generate_orbit` and `lyapunov_exponent` at every grid value with
/// identical x0, keeping the last `retain` samples per point. Per-point
/// failures are recorded in the status column and never abort the scan.
pub fn parameter_scan(
    base: &MapParams,
    r_range: (f64, f64),
    steps: usize,
    x0: f64,
    n: usize,
    transient: usize,
    retain: usize,
) -> ScanResult {
    let grid = scan_grid(r_range.0, r_range.1, steps);
    let mut result = ScanResult {
        parameter_grid: grid.clone(),
        retained_points: Vec::with_capacity(steps),
        lyapunov: Vec::with_capacity(steps),
        status: Vec::with_capacity(steps),
    };
    for &v in &grid {
        let entry = scan_point(base, v, x0, n, transient, retain);
        result.retained_points.push(entry.retained);
        result.lyapunov.push(entry.lyapunov);
        result.status.push(entry.status);
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{AppendixParams, ElectricalParams};

    fn table_map(r: f64) -> MapParams {
        MapParams::Electrical(ElectricalParams::new(r, 0.000025, 0.00045, 0.73).unwrap())
    }

    /// Newton-refine a fixed point next to a seed; test-local helper.
    fn refined_fixed_point(map: &MapParams, seed: f64) -> f64 {
        newton_fixed_point(map, seed).unwrap()
    }

    #[test]
    fn orbit_first_iterate_forced_by_sine_zero() {
        let p = MapParams::Electrical(ElectricalParams::new(0.8, 1.0, 1.5, 0.5).unwrap());
        let orbit = generate_orbit(&p, 0.1, 3, 0);
        assert_eq!(orbit.samples.len(), 3);
        assert!((orbit.samples[0] - (1.0 + 1.0 / 1.5 + 20.0)).abs() < 1e-12);
    }

    #[test]
    fn orbit_near_table_fixed_point_drifts_away() {
        // The tabulated point at r = 0.7 is a true fixed point of the map
        // but a repelling one (|f'| > 1), so an orbit seeded on it leaves
        // the 1e-3 band within a few dozen iterates.
        let p = table_map(0.7);
        let orbit = generate_orbit(&p, 1.54574, 120, 0);
        assert!(orbit.status.is_completed());
        assert_eq!(orbit.samples.len(), 120);
        for &s in &orbit.samples[..5] {
            assert!((s - 1.54574).abs() < 1e-3, "early samples stay pinned, got {s}");
        }
        assert!(
            orbit.samples.iter().any(|&s| (s - 1.54574).abs() > 1e-3),
            "repelling multiplier must push the orbit off the fixed point"
        );
    }

    #[test]
    fn appendix_orbit_constant_at_sqrt_half() {
        let p = MapParams::Appendix(AppendixParams::new(0.0).unwrap());
        let x = 0.5f64.sqrt();
        let orbit = generate_orbit(&p, x, 50, 0);
        assert!(orbit.status.is_completed());
        assert_eq!(orbit.samples.len(), 50);
        for &s in &orbit.samples {
            assert!((s - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-8);
        }
    }

    #[test]
    fn orbit_singular_start_recorded() {
        let p = table_map(0.7);
        let orbit = generate_orbit(&p, 0.0, 10, 0);
        assert_eq!(orbit.status, OrbitStatus::Singular { step: 0 });
        assert!(orbit.samples.is_empty());
    }

    #[test]
    fn find_fixed_points_matches_table_rows() {
        for (r, expected) in [(0.5, 1.44081), (0.7, 1.54574), (0.95, 1.63195)] {
            let recs = find_fixed_points(&table_map(r), (0.5, 3.0), 64);
            let hit = recs.iter().find(|fp| (fp.x_star - expected).abs() < 5e-4);
            let hit = hit.unwrap_or_else(|| panic!("no root near {expected} for r={r}"));
            assert!(hit.residual < 1e-10);
            // the tabulated points are repelling under the analytic
            // multiplier (|f'| ranges 1.07..2.64 across the table)
            assert_eq!(hit.stability, Stability::Repelling, "r={r} mult={}", hit.multiplier);
        }
    }

    #[test]
    fn fixed_point_records_are_sorted_and_consistent() {
        let map = table_map(0.7);
        let recs = find_fixed_points(&map, (0.5, 3.0), 64);
        assert!(!recs.is_empty());
        for w in recs.windows(2) {
            assert!(w[0].x_star < w[1].x_star);
            assert!((w[1].x_star - w[0].x_star).abs() >= ROOT_MERGE_TOL);
        }
        for fp in &recs {
            let e = map.eval(fp.x_star).unwrap();
            assert!((e.value - fp.x_star).abs() < 1e-10);
            assert_eq!(Stability::classify(e.derivative), fp.stability);
        }
    }

    #[test]
    fn appendix_fixed_point_superattracting() {
        let map = MapParams::Appendix(AppendixParams::new(0.0).unwrap());
        let recs = find_fixed_points(&map, (0.2, 2.0), 32);
        let fp = recs
            .iter()
            .find(|fp| (fp.x_star - 0.5f64.sqrt()).abs() < 1e-9)
            .expect("1/sqrt(2) root");
        assert_eq!(fp.stability, Stability::Attracting);
        assert!(fp.multiplier.abs() < 1e-10);
    }

    #[test]
    fn lyapunov_at_pinned_fixed_point_is_log_multiplier() {
        // Short window: the point is repelling, so roundoff drift compounds
        // by |f'| ~ 1.6 per step and a long average would wander off.
        let map = table_map(0.7);
        let x_star = refined_fixed_point(&map, 1.54574);
        let mult = map.eval(x_star).unwrap().derivative;
        let lam = lyapunov_exponent(&map, x_star, 40, 0).unwrap();
        assert!((lam - mult.abs().ln()).abs() < 1e-6, "lam={lam} log|m|={}", mult.abs().ln());
    }

    #[test]
    fn lyapunov_positive_in_lower_chaos_band() {
        let lam = lyapunov_exponent(&table_map(0.55), 1.2, 2000, 1000).unwrap();
        assert!(lam > 0.0, "expected chaos at r=0.55, got {lam}");
    }

    #[test]
    fn lyapunov_matches_two_trajectory_divergence_oracle() {
        // Independent oracle: renormalized two-trajectory divergence rate
        // over the same window.
        let map = table_map(0.55);
        let (x0, n, tr) = (1.2, 2000usize, 1000usize);
        let lam = lyapunov_exponent(&map, x0, n, tr).unwrap();

        let mut x = x0;
        for _ in 0..tr {
            x = map.eval(x).unwrap().value;
        }
        let d0 = 1e-9;
        let mut y = x + d0;
        let mut acc = 0.0;
        for _ in 0..(n - tr) {
            let xn = map.eval(x).unwrap().value;
            let yn = map.eval(y).unwrap().value;
            let d = (yn - xn).abs();
            acc += (d / d0).ln();
            x = xn;
            y = xn + if yn >= xn { d0 } else { -d0 };
        }
        let oracle = acc / (n - tr) as f64;
        assert!((lam - oracle).abs() < 0.05, "lam={lam} oracle={oracle}");
    }

    #[test]
    fn lyapunov_degenerate_derivative_at_superattracting_point() {
        // alpha tuned so f'(1) = 0.5 - 0.25 + 3*alpha evaluates to exactly
        // zero in binary64 (at the nearby superattracting point of alpha = 0
        // the representable derivative is ~1e-16, above the threshold); x0
        // chosen so the first iterate lands on 1.0 exactly, where the
        // post-iterate derivative sample degenerates
        let map = MapParams::Appendix(AppendixParams::new(-(0.25 / 3.0)).unwrap());
        let x = 1.663_132_512_582_223_2;
        assert_eq!(map.eval(x).unwrap().value, 1.0);
        match lyapunov_exponent(&map, x, 10, 0) {
            Err(DynamicsError::DegenerateDerivative { .. }) => {}
            other => panic!("expected DegenerateDerivative, got {other:?}"),
        }
    }

    #[test]
    fn period_cycle_lyapunov_identity() {
        // A period-1 cycle: lambda equals log|f'| over the cycle.
        let map = MapParams::Appendix(AppendixParams::new(-0.1).unwrap());
        let recs = find_fixed_points(&map, (0.2, 2.0), 64);
        let fp = recs.iter().find(|f| f.multiplier.abs() > 1e-6).expect("nondegenerate root");
        let lam = lyapunov_exponent(&map, fp.x_star, 20, 0).unwrap();
        assert!((lam - fp.multiplier.abs().ln()).abs() < 1e-6);
    }

    #[test]
    fn scan_grid_endpoints_exact() {
        let g = scan_grid(0.5, 0.95, 2);
        assert_eq!(g, vec![0.5, 0.95]);
        let g = scan_grid(0.5, 0.95, 19);
        assert_eq!(g.len(), 19);
        assert_eq!(g[0], 0.5);
        assert_eq!(g[18], 0.95);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn scan_isolates_failed_entries() {
        // At r = 1e-7 the sinc term amplifies to ~1/r^2 and the orbit blows
        // past the escape cap on the first iterate; the neighbor entry is
        // unaffected.
        let base = table_map(0.7);
        let scan = parameter_scan(&base, (1e-7, 0.7), 2, 1.2, 200, 100, 10);
        assert!(matches!(scan.status[0], OrbitStatus::Escaped { step: 1, .. }));
        assert!(scan.retained_points[0].is_empty());
        assert!(scan.lyapunov[0].is_none());
        assert!(scan.status[1].is_completed());
        assert_eq!(scan.retained_points[1].len(), 10);
        assert!(scan.lyapunov[1].is_some());
    }

    #[test]
    fn scan_matches_pointwise_recomputation() {
        let base = table_map(0.7);
        let scan = parameter_scan(&base, (0.5, 0.95), 7, 1.2, 400, 200, 3);
        for (i, &r) in scan.parameter_grid.iter().enumerate() {
            let entry = scan_point(&base, r, 1.2, 400, 200, 3);
            assert_eq!(entry.retained, scan.retained_points[i]);
            assert_eq!(entry.lyapunov, scan.lyapunov[i]);
            assert_eq!(entry.status, scan.status[i]);
        }
    }
}
