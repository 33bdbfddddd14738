//! Numeric frequency analysis of orbits: one-sided periodogram and
//! dominant-frequency extraction.

use crate::dynamics::Orbit;
use rustfft::{num_complex::Complex64, FftPlanner};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SpectralError {
    #[error("orbit has too few samples ({got}); need at least 4")]
    TooShort { got: usize },
    #[error("orbit did not complete")]
    Incomplete,
}

/// Optional tapering applied before the transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Window {
    #[default]
    Rectangular,
    Hann,
}

/// One-sided power spectrum. Frequencies are in cycles/iteration over
/// [0, 0.5]; the fold sums the mirrored negative-frequency bins so that
/// the total power satisfies Parseval's identity
/// `sum(power) = n * variance` (mean removed, rectangular window).
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub frequencies: Vec<f64>,
    pub power: Vec<f64>,
    pub n_samples: usize,
    pub mean_removed: bool,
}

/// One-sided periodogram of a completed orbit with normalization
/// `power[k] = (|X_k|^2 + |X_{n-k}|^2) / n` (edge bins unmirrored).
pub fn power_spectrum(orbit: &Orbit, remove_mean: bool) -> Result<Spectrum, SpectralError> {
    power_spectrum_with_window(orbit, remove_mean, Window::Rectangular)
}

pub fn power_spectrum_with_window(
    orbit: &Orbit,
    remove_mean: bool,
    window: Window,
) -> Result<Spectrum, SpectralError> {
    if !orbit.status.is_completed() {
        return Err(SpectralError::Incomplete);
    }
    let n = orbit.samples.len();
    if n < 4 {
        return Err(SpectralError::TooShort { got: n });
    }
    let mean = if remove_mean {
        orbit.samples.iter().sum::<f64>() / n as f64
    } else {
        0.0
    };
    let mut buf: Vec<Complex64> = orbit
        .samples
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let w = match window {
                Window::Rectangular => 1.0,
                Window::Hann => {
                    let t = std::f64::consts::PI * i as f64 / n as f64;
                    t.sin() * t.sin()
                }
            };
            Complex64::new(w * (x - mean), 0.0)
        })
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);

    let half = n / 2;
    let mut frequencies = Vec::with_capacity(half + 1);
    let mut power = Vec::with_capacity(half + 1);
    for k in 0..=half {
        frequencies.push(k as f64 / n as f64);
        let mut p = buf[k].norm_sqr();
        let mirror = (n - k) % n;
        if mirror != k {
            p += buf[mirror].norm_sqr();
        }
        power.push(p / n as f64);
    }
    Ok(Spectrum { frequencies, power, n_samples: n, mean_removed: remove_mean })
}

/// The `top_k` bins by power, sorted by descending power; ties break toward
/// the lower frequency.
pub fn dominant_frequencies(s: &Spectrum, top_k: usize) -> Vec<(f64, f64)> {
    let mut idx: Vec<usize> = (0..s.power.len()).collect();
    idx.sort_by(|&a, &b| {
        s.power[b]
            .total_cmp(&s.power[a])
            .then_with(|| s.frequencies[a].total_cmp(&s.frequencies[b]))
    });
    idx.into_iter()
        .take(top_k)
        .map(|i| (s.frequencies[i], s.power[i]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::OrbitStatus;
    use crate::maps::{AppendixParams, MapParams};
    use proptest::prelude::*;

    fn fake_orbit(samples: Vec<f64>) -> Orbit {
        Orbit {
            params: MapParams::Appendix(AppendixParams::new(0.0).unwrap()),
            x0: 1.0,
            transient: 0,
            samples,
            status: OrbitStatus::Completed,
        }
    }

    #[test]
    fn constant_orbit_concentrates_at_dc() {
        let orbit = fake_orbit(vec![2.0; 16]);
        let s = power_spectrum(&orbit, false).unwrap();
        assert_eq!(s.frequencies.len(), 9);
        assert!((s.power[0] - 16.0 * 4.0).abs() < 1e-9);
        for &p in &s.power[1..] {
            assert!(p < 1e-20);
        }
    }

    #[test]
    fn mean_removed_constant_orbit_is_zero() {
        let orbit = fake_orbit(vec![2.0; 16]);
        let s = power_spectrum(&orbit, true).unwrap();
        assert!(s.power.iter().all(|&p| p < 1e-24));
    }

    #[test]
    fn period_two_orbit_peaks_at_nyquist() {
        let samples: Vec<f64> = (0..32).map(|i| if i % 2 == 0 { 1.0 } else { 3.0 }).collect();
        let orbit = fake_orbit(samples);
        let s = power_spectrum(&orbit, true).unwrap();
        let top = dominant_frequencies(&s, 1);
        assert_eq!(top[0].0, 0.5);
        for (k, &p) in s.power.iter().enumerate() {
            if s.frequencies[k] != 0.5 {
                assert!(p < 1e-20, "leakage at {}", s.frequencies[k]);
            }
        }
    }

    #[test]
    fn commensurate_cosine_peaks_at_eighth() {
        // closed-form DFT: X_8 has magnitude n/2, all other bins zero;
        // the one-sided fold doubles it to power n/2
        let n = 64usize;
        let samples: Vec<f64> = (0..n)
            .map(|k| (2.0 * std::f64::consts::PI * k as f64 / 8.0).cos())
            .collect();
        let orbit = fake_orbit(samples);
        let s = power_spectrum(&orbit, false).unwrap();
        let top = dominant_frequencies(&s, 1);
        assert_eq!(top[0].0, 0.125);
        assert!((top[0].1 - n as f64 / 2.0).abs() < 1e-9, "peak power {}", top[0].1);
    }

    #[test]
    fn dominant_frequency_ties_break_low() {
        let orbit = fake_orbit(vec![0.0; 16]);
        let s = power_spectrum(&orbit, false).unwrap();
        let top = dominant_frequencies(&s, 3);
        assert_eq!(top.len(), 3);
        assert_eq!(top[0], (0.0, 0.0));
        assert!(top[1].0 < top[2].0);
    }

    #[test]
    fn rejects_short_orbits() {
        let orbit = fake_orbit(vec![1.0, 2.0, 3.0]);
        assert!(matches!(power_spectrum(&orbit, false), Err(SpectralError::TooShort { .. })));
    }

    #[test]
    fn hann_window_tapers_total_power() {
        let samples: Vec<f64> = (0..64).map(|i| (i as f64 * 0.37).sin()).collect();
        let rect = power_spectrum(&fake_orbit(samples.clone()), true).unwrap();
        let hann = power_spectrum_with_window(&fake_orbit(samples), true, Window::Hann).unwrap();
        let sum = |s: &Spectrum| s.power.iter().sum::<f64>();
        assert!(sum(&hann) < sum(&rect));
    }

    proptest! {
        #[test]
        fn parseval_identity(xs in prop::collection::vec(-100.0f64..100.0, 4..256)) {
            let n = xs.len() as f64;
            let mean = xs.iter().sum::<f64>() / n;
            let var_times_n: f64 = xs.iter().map(|x| (x - mean) * (x - mean)).sum();
            let s = power_spectrum(&fake_orbit(xs), true).unwrap();
            let total: f64 = s.power.iter().sum();
            prop_assert!((total - var_times_n).abs() <= 1e-9 * var_times_n.max(1e-6),
                "total={total} expected={var_times_n}");
        }

        #[test]
        fn dominant_subset_of_bins(xs in prop::collection::vec(-10.0f64..10.0, 8..64), k in 1usize..8) {
            let s = power_spectrum(&fake_orbit(xs), false).unwrap();
            let top = dominant_frequencies(&s, k);
            prop_assert_eq!(top.len(), k.min(s.power.len()));
            for (f, p) in top {
                let i = s.frequencies.iter().position(|&x| x == f).unwrap();
                prop_assert_eq!(s.power[i], p);
            }
        }
    }
}
