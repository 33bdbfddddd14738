//! Per-subcommand execution: resolve settings, validate, compute, emit
//! artifacts plus a manifest.

use std::path::{Path, PathBuf};
use std::time::Instant;

use zetadyn_core::dynamics::{
    find_fixed_points, generate_orbit, scan_grid, scan_point, Orbit, OrbitStatus,
};
use zetadyn_core::energy::{energy_point, transfer_point};
use zetadyn_core::geometry::{attractor_embedding, poincare_section, GeometryError, SectionMode};
use zetadyn_core::maps::{pair_correlation_g, pair_correlation_r2};
use zetadyn_core::quantum::{
    build_hamiltonian, eigensolve, evaluate_potential, EigenMethod, GridSpec, PotentialSpec,
    QuantumError, SolverUsed,
};
use zetadyn_core::spectral::{power_spectrum_with_window, Window};
use zetadyn_core::{AppendixParams, ElectricalParams, MapParams};

use crate::cli::{
    EigenArgs, EnergyArgs, FixedPointsArgs, MapArgs, OrbitArgs, OutArgs, PairCorrelationArgs,
    PoincareArgs, ScanArgs, SpectrumArgs, WindowArgs,
};
use crate::errors::CliError;
use crate::output::{
    fmt_f64, manifest_path, render_svg, write_csv, write_manifest, PlotKind,
};
use crate::resolve::Resolver;
use crate::sweep::run_indexed;

const DEFAULT_RESISTANCE: f64 = 0.000025;
const DEFAULT_INDUCTANCE: f64 = 0.00045;
const DEFAULT_CAPACITANCE: f64 = 0.73;
const SINGULARITY_GUARD: f64 = 1e-12;

fn resolve_single_map(rv: &mut Resolver, a: &MapArgs) -> Result<MapParams, CliError> {
    let kind = rv.choice(a.map.clone(), "map", &["electrical", "appendix"], "electrical")?;
    if kind == "electrical" {
        let r = rv.value(a.r, "r", None)?;
        let resistance = rv.value(a.resistance, "R", Some(DEFAULT_RESISTANCE))?;
        let inductance = rv.value(a.inductance, "L", Some(DEFAULT_INDUCTANCE))?;
        let capacitance = rv.value(a.capacitance, "C", Some(DEFAULT_CAPACITANCE))?;
        ElectricalParams::new(r, resistance, inductance, capacitance)
            .map(MapParams::Electrical)
            .map_err(|e| CliError::Validation(e.to_string()))
    } else {
        let alpha = rv.value(a.alpha, "alpha", Some(0.0))?;
        AppendixParams::new(alpha)
            .map(MapParams::Appendix)
            .map_err(|e| CliError::Validation(e.to_string()))
    }
}

fn resolve_window(rv: &mut Resolver, w: &WindowArgs) -> Result<(f64, usize, usize), CliError> {
    let x0 = rv.value(w.x0, "x0", Some(1.2))?;
    let n = rv.value(w.n, "n", Some(2000))?;
    let transient = rv.value(w.transient, "transient", Some(1000))?;
    if x0.abs() < SINGULARITY_GUARD {
        return Err(CliError::Validation(format!(
            "x0 violates the singularity guard: |x0| = {} < 1e-12",
            x0.abs()
        )));
    }
    if n <= transient {
        return Err(CliError::Validation(format!(
            "n ({n}) must exceed transient ({transient})"
        )));
    }
    Ok((x0, n, transient))
}

struct OutputSpec {
    path: PathBuf,
    format: String,
}

fn resolve_out(rv: &mut Resolver, o: &OutArgs) -> Result<OutputSpec, CliError> {
    let path = rv.value(o.out.clone(), "out", None)?;
    let format = rv.choice(o.format.clone(), "format", &["csv", "svg"], "csv")?;
    Ok(OutputSpec { path: PathBuf::from(path), format })
}

fn orbit_or_runtime_error(map: &MapParams, x0: f64, n: usize, transient: usize) -> Result<Orbit, CliError> {
    let orbit = generate_orbit(map, x0, n, transient);
    match orbit.status {
        OrbitStatus::Completed => Ok(orbit),
        OrbitStatus::Escaped { step, last } => Err(CliError::Runtime(format!(
            "orbit escaped at step {step} (|x| = {} exceeded the escape cap); \
             interpreted as voltage collapse",
            last.abs()
        ))),
        OrbitStatus::Singular { step } => Err(CliError::Runtime(format!(
            "orbit hit the singularity guard at step {step}"
        ))),
    }
}

fn emit(
    command: &str,
    resolved: Vec<(String, String)>,
    outputs: Vec<(PathBuf, String)>,
    t0: Instant,
) -> Result<(), CliError> {
    let mpath = manifest_path(&outputs[0].0);
    write_manifest(command, &resolved, &outputs, t0.elapsed().as_millis(), &mpath)
}

fn emit_table(
    out: &OutputSpec,
    header: &str,
    rows: &[Vec<String>],
    points: &[(f64, f64)],
    kind: PlotKind,
) -> Result<String, CliError> {
    if out.format == "csv" {
        write_csv(header, rows, &out.path)
    } else {
        render_svg(points, kind, &out.path)
    }
}

pub fn run_orbit(args: &OrbitArgs, config: Option<&Path>) -> Result<(), CliError> {
    let t0 = Instant::now();
    let mut rv = Resolver::new(config)?;
    let map = resolve_single_map(&mut rv, &args.map)?;
    let (x0, n, transient) = resolve_window(&mut rv, &args.window)?;
    let out = resolve_out(&mut rv, &args.out)?;
    let resolved = rv.finish()?;

    let orbit = orbit_or_runtime_error(&map, x0, n, transient)?;
    let rows: Vec<Vec<String>> = orbit
        .samples
        .iter()
        .enumerate()
        .map(|(i, &x)| vec![(transient + 1 + i).to_string(), fmt_f64(x)])
        .collect();
    let points: Vec<(f64, f64)> = orbit
        .samples
        .iter()
        .enumerate()
        .map(|(i, &x)| ((transient + 1 + i) as f64, x))
        .collect();
    let checksum = emit_table(&out, "step,x", &rows, &points, PlotKind::Line)?;
    emit("orbit", resolved, vec![(out.path, checksum)], t0)
}

pub fn run_fixed_points(args: &FixedPointsArgs, config: Option<&Path>) -> Result<(), CliError> {
    let t0 = Instant::now();
    let mut rv = Resolver::new(config)?;
    let map = resolve_single_map(&mut rv, &args.map)?;
    let x_min = rv.value(args.x_min, "x-min", Some(0.1))?;
    let x_max = rv.value(args.x_max, "x-max", Some(3.0))?;
    let seeds = rv.value(args.seeds, "seeds", Some(200))?;
    if x_min.partial_cmp(&x_max) != Some(std::cmp::Ordering::Less) {
        return Err(CliError::Validation(format!(
            "search interval needs x-min < x-max (got [{x_min}, {x_max}])"
        )));
    }
    if seeds == 0 {
        return Err(CliError::Validation("seeds must be >= 1".into()));
    }
    let out = resolve_out(&mut rv, &args.out)?;
    let resolved = rv.finish()?;

    let records = find_fixed_points(&map, (x_min, x_max), seeds);
    if records.is_empty() {
        return Err(CliError::Runtime(format!(
            "no fixed points located in [{x_min}, {x_max}] with {seeds} seeds"
        )));
    }
    let rows: Vec<Vec<String>> = records
        .iter()
        .map(|f| {
            vec![
                fmt_f64(f.r),
                fmt_f64(f.x_star),
                fmt_f64(f.multiplier),
                f.stability.label().to_string(),
                fmt_f64(f.residual),
            ]
        })
        .collect();
    let points: Vec<(f64, f64)> = records.iter().map(|f| (f.x_star, f.multiplier)).collect();
    let checksum = emit_table(
        &out,
        "r,x_star,multiplier,stability,residual",
        &rows,
        &points,
        PlotKind::Scatter,
    )?;
    emit("fixed-points", resolved, vec![(out.path, checksum)], t0)
}

pub fn run_scan(args: &ScanArgs, config: Option<&Path>) -> Result<(), CliError> {
    let t0 = Instant::now();
    let mut rv = Resolver::new(config)?;
    let kind = rv.choice(args.map.clone(), "map", &["electrical", "appendix"], "electrical")?;
    let r_min = rv.value(args.r_min, "r-min", None)?;
    let r_max = rv.value(args.r_max, "r-max", None)?;
    let steps = rv.value(args.steps, "steps", None)?;
    if steps < 2 {
        return Err(CliError::Validation(format!("steps must be >= 2 (got {steps})")));
    }
    if r_min.partial_cmp(&r_max).is_none_or(|o| o == std::cmp::Ordering::Greater) {
        return Err(CliError::Validation(format!(
            "scan range needs r-min <= r-max (got [{r_min}, {r_max}])"
        )));
    }
    let base = if kind == "electrical" {
        let resistance = rv.value(args.resistance, "R", Some(DEFAULT_RESISTANCE))?;
        let inductance = rv.value(args.inductance, "L", Some(DEFAULT_INDUCTANCE))?;
        let capacitance = rv.value(args.capacitance, "C", Some(DEFAULT_CAPACITANCE))?;
        let seed_r = if r_min > 0.0 { r_min } else { r_max.max(1.0) };
        ElectricalParams::new(seed_r, resistance, inductance, capacitance)
            .map(MapParams::Electrical)
            .map_err(|e| CliError::Validation(e.to_string()))?
    } else {
        MapParams::Appendix(
            AppendixParams::new(r_min).map_err(|e| CliError::Validation(e.to_string()))?,
        )
    };
    let (x0, n, transient) = resolve_window(&mut rv, &args.window)?;
    let retain = rv.value(args.retain, "retain", Some(120))?;
    let workers = rv.workers(args.workers)?;
    let out = resolve_out(&mut rv, &args.out)?;
    let bifurcation_out = rv.optional(args.bifurcation_out.clone(), "bifurcation-out")?;
    let note_out = rv.optional(args.discrepancy_note.clone(), "discrepancy-note")?;
    let resolved = rv.finish()?;

    let grid = scan_grid(r_min, r_max, steps);
    let entries = run_indexed(grid.len(), workers, |i| {
        scan_point(&base, grid[i], x0, n, transient, retain)
    });

    let rows: Vec<Vec<String>> = grid
        .iter()
        .zip(&entries)
        .map(|(&r, e)| {
            vec![
                fmt_f64(r),
                e.lyapunov.map(fmt_f64).unwrap_or_default(),
                e.status.label().to_string(),
            ]
        })
        .collect();
    let points: Vec<(f64, f64)> = grid
        .iter()
        .zip(&entries)
        .filter_map(|(&r, e)| e.lyapunov.map(|l| (r, l)))
        .collect();
    let checksum = emit_table(&out, "r,lyapunov,status", &rows, &points, PlotKind::Line)?;
    let mut outputs = vec![(out.path.clone(), checksum)];

    if let Some(bpath) = bifurcation_out {
        let bpath = PathBuf::from(bpath);
        let brows: Vec<Vec<String>> = grid
            .iter()
            .zip(&entries)
            .flat_map(|(&r, e)| {
                e.retained.iter().map(move |&x| vec![fmt_f64(r), fmt_f64(x)])
            })
            .collect();
        let bsum = write_csv("r,x", &brows, &bpath)?;
        outputs.push((bpath, bsum));
    }

    if let Some(npath) = note_out {
        let npath = PathBuf::from(npath);
        let text = discrepancy_note(&base, &grid, &entries);
        std::fs::write(&npath, text.as_bytes())
            .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", npath.display())))?;
        outputs.push((npath, crate::output::sha256_hex(text.as_bytes())));
    }
    emit("scan", resolved, outputs, t0)
}

/// Cross-check of the scan against fixed-point multipliers on the same grid,
/// flagging where the two classifications cannot both support an
/// attracting-fixed-point reading.
fn discrepancy_note(
    base: &MapParams,
    grid: &[f64],
    entries: &[zetadyn_core::dynamics::ScanEntry],
) -> String {
    let mut text = String::from(
        "classification cross-check: per-parameter Lyapunov exponent vs fixed-point multipliers\n\n",
    );
    let mut any_attracting = false;
    let mut chaotic: Vec<f64> = Vec::new();
    for (&r, entry) in grid.iter().zip(entries) {
        let params = base.with_scan_param(r);
        let fps = find_fixed_points(&params, (0.1, 3.0), 200);
        let lam = entry
            .lyapunov
            .map(|l| format!("{l:.6}"))
            .unwrap_or_else(|| format!("n/a ({})", entry.status.label()));
        if let Some(l) = entry.lyapunov {
            if l > 0.0 {
                chaotic.push(r);
            }
        }
        if fps.is_empty() {
            text.push_str(&format!("r={r}: lambda={lam}; no fixed point in [0.1, 3]\n"));
            continue;
        }
        for fp in &fps {
            if fp.stability.label() == "attracting" {
                any_attracting = true;
            }
            text.push_str(&format!(
                "r={r}: lambda={lam}; x*={:.6} |f'(x*)|={:.6} ({})\n",
                fp.x_star,
                fp.multiplier.abs(),
                fp.stability.label()
            ));
        }
    }
    text.push('\n');
    if !any_attracting {
        text.push_str(
            "discrepancy: every fixed point located on this grid is repelling \
             (|f'(x*)| > 1), so no orbit settles onto them; any tabulated claim of \
             attracting fixed points over this parameter range conflicts with the \
             computed multipliers.\n",
        );
    }
    if chaotic.is_empty() {
        text.push_str("no positive Lyapunov exponents on this grid.\n");
    } else {
        let list: Vec<String> = chaotic.iter().map(|r| fmt_f64(*r)).collect();
        text.push_str(&format!(
            "positive Lyapunov exponents (chaotic response) at r in {{{}}}.\n",
            list.join(", ")
        ));
    }
    text
}

pub fn run_poincare(args: &PoincareArgs, config: Option<&Path>) -> Result<(), CliError> {
    let t0 = Instant::now();
    let mut rv = Resolver::new(config)?;
    let map = resolve_single_map(&mut rv, &args.map)?;
    let (x0, n, transient) = resolve_window(&mut rv, &args.window)?;
    let section = rv.optional(args.section, "section")?;
    let mode_name =
        rv.choice(args.mode.clone(), "mode", &["crossing", "stroboscopic"], "crossing")?;
    let stride = rv.value(args.stride, "stride", Some(1))?;
    if mode_name == "stroboscopic" && stride == 0 {
        return Err(CliError::Validation("stride must be >= 1".into()));
    }
    let out = resolve_out(&mut rv, &args.out)?;
    let mut resolved = rv.finish()?;

    let mode = if mode_name == "crossing" {
        SectionMode::Crossing
    } else {
        SectionMode::Stroboscopic(stride)
    };
    let orbit = orbit_or_runtime_error(&map, x0, n, transient)?;
    let sec = poincare_section(&orbit, section, mode).map_err(|e| match e {
        GeometryError::InvalidStride => CliError::Validation(e.to_string()),
        _ => CliError::Runtime(e.to_string()),
    })?;
    if sec.points.is_empty() {
        return Err(CliError::Runtime(format!(
            "the orbit never intersects the section at {}",
            fmt_f64(sec.section_value)
        )));
    }
    resolved.push(("derived.section-value".to_string(), fmt_f64(sec.section_value)));
    resolved.sort();
    let rows: Vec<Vec<String>> =
        sec.points.iter().map(|&(a, b)| vec![fmt_f64(a), fmt_f64(b)]).collect();
    let checksum = emit_table(&out, "x,x_next", &rows, &sec.points, PlotKind::Scatter)?;
    emit("poincare", resolved, vec![(out.path, checksum)], t0)
}

pub fn run_attractor(args: &OrbitArgs, config: Option<&Path>) -> Result<(), CliError> {
    let t0 = Instant::now();
    let mut rv = Resolver::new(config)?;
    let map = resolve_single_map(&mut rv, &args.map)?;
    let (x0, n, transient) = resolve_window(&mut rv, &args.window)?;
    let out = resolve_out(&mut rv, &args.out)?;
    let mut resolved = rv.finish()?;

    // escape is part of the attractor picture (voltage-collapse proxy): embed
    // whatever the orbit produced and record the termination status
    let orbit = generate_orbit(&map, x0, n, transient);
    if orbit.samples.is_empty() {
        return Err(CliError::Runtime(format!(
            "orbit retained no samples (status: {})",
            orbit.status.label()
        )));
    }
    resolved.push(("derived.status".to_string(), orbit.status.label().to_string()));
    resolved.sort();
    let emb = attractor_embedding(&orbit);
    let rows: Vec<Vec<String>> = emb
        .points
        .iter()
        .enumerate()
        .map(|(i, &(x, y, z))| {
            vec![(transient + 1 + i).to_string(), fmt_f64(x), fmt_f64(y), fmt_f64(z)]
        })
        .collect();
    let points: Vec<(f64, f64)> = emb.points.iter().map(|&(x, y, _)| (x, y)).collect();
    let checksum = emit_table(&out, "step,x,y,z", &rows, &points, PlotKind::Scatter)?;
    emit("attractor", resolved, vec![(out.path, checksum)], t0)
}

pub fn run_spectrum(args: &SpectrumArgs, config: Option<&Path>) -> Result<(), CliError> {
    let t0 = Instant::now();
    let mut rv = Resolver::new(config)?;
    let map = resolve_single_map(&mut rv, &args.map)?;
    let (x0, n, transient) = resolve_window(&mut rv, &args.window)?;
    let mean = rv.choice(args.mean.clone(), "mean", &["remove", "keep"], "remove")?;
    let window_name =
        rv.choice(args.window_fn.clone(), "window", &["rectangular", "hann"], "rectangular")?;
    let out = resolve_out(&mut rv, &args.out)?;
    let resolved = rv.finish()?;

    let window = if window_name == "hann" { Window::Hann } else { Window::Rectangular };
    let orbit = orbit_or_runtime_error(&map, x0, n, transient)?;
    let spectrum = power_spectrum_with_window(&orbit, mean == "remove", window)
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    let rows: Vec<Vec<String>> = spectrum
        .frequencies
        .iter()
        .zip(&spectrum.power)
        .map(|(&f, &p)| vec![fmt_f64(f), fmt_f64(p)])
        .collect();
    let points: Vec<(f64, f64)> =
        spectrum.frequencies.iter().zip(&spectrum.power).map(|(&f, &p)| (f, p)).collect();
    let checksum = emit_table(&out, "frequency,power", &rows, &points, PlotKind::Line)?;
    emit("spectrum", resolved, vec![(out.path, checksum)], t0)
}

pub fn run_energy(args: &EnergyArgs, transfer: bool, config: Option<&Path>) -> Result<(), CliError> {
    let t0 = Instant::now();
    let mut rv = Resolver::new(config)?;
    let r_min = rv.value(args.r_min, "r-min", None)?;
    let r_max = rv.value(args.r_max, "r-max", None)?;
    let steps = rv.value(args.steps, "steps", None)?;
    if steps < 2 {
        return Err(CliError::Validation(format!("steps must be >= 2 (got {steps})")));
    }
    if r_min.partial_cmp(&r_max).is_none_or(|o| o == std::cmp::Ordering::Greater) {
        return Err(CliError::Validation(format!(
            "sweep range needs r-min <= r-max (got [{r_min}, {r_max}])"
        )));
    }
    let resistance = rv.value(args.resistance, "R", Some(DEFAULT_RESISTANCE))?;
    let inductance = rv.value(args.inductance, "L", Some(DEFAULT_INDUCTANCE))?;
    let capacitance = rv.value(args.capacitance, "C", Some(DEFAULT_CAPACITANCE))?;
    let seed_r = if r_min > 0.0 { r_min } else { r_max.max(1.0) };
    let base = ElectricalParams::new(seed_r, resistance, inductance, capacitance)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    let (x0, n, transient) = resolve_window(&mut rv, &args.window)?;
    let workers = rv.workers(args.workers)?;
    let out = resolve_out(&mut rv, &args.out)?;
    let resolved = rv.finish()?;

    let grid = scan_grid(r_min, r_max, steps);
    let (command, header, rows, points) = if transfer {
        let pts = run_indexed(grid.len(), workers, |i| {
            transfer_point(&base, grid[i], x0, n, transient)
        });
        let rows: Vec<Vec<String>> = pts
            .iter()
            .map(|p| {
                vec![
                    fmt_f64(p.r),
                    p.mean_transfer_rate.map(fmt_f64).unwrap_or_default(),
                    p.status.label().to_string(),
                ]
            })
            .collect();
        let line: Vec<(f64, f64)> =
            pts.iter().filter_map(|p| p.mean_transfer_rate.map(|v| (p.r, v))).collect();
        ("transfer", "r,mean_transfer_rate,status", rows, line)
    } else {
        let pts =
            run_indexed(grid.len(), workers, |i| energy_point(&base, grid[i], x0, n, transient));
        let rows = pts
            .iter()
            .map(|p| {
                vec![
                    fmt_f64(p.r),
                    p.mean_e_inductor.map(fmt_f64).unwrap_or_default(),
                    p.mean_e_capacitor.map(fmt_f64).unwrap_or_default(),
                    p.status.label().to_string(),
                ]
            })
            .collect();
        let line = pts.iter().filter_map(|p| p.mean_e_inductor.map(|v| (p.r, v))).collect();
        ("energy", "r,mean_e_inductor,mean_e_capacitor,status", rows, line)
    };
    let checksum = emit_table(&out, header, &rows, &points, PlotKind::Line)?;
    emit(command, resolved, vec![(out.path, checksum)], t0)
}

fn quantum_validation(e: QuantumError) -> CliError {
    match e {
        QuantumError::NoConvergence { .. } => CliError::Runtime(e.to_string()),
        _ => CliError::Validation(e.to_string()),
    }
}

pub fn run_eigen(args: &EigenArgs, config: Option<&Path>) -> Result<(), CliError> {
    let t0 = Instant::now();
    let mut rv = Resolver::new(config)?;
    let kind = rv.choice(
        args.potential.clone(),
        "potential",
        &["zero", "montgomery-approx", "montgomery-appendix", "yitang"],
        "montgomery-approx",
    )?;
    let mass = rv.value(args.mass, "mass", Some(1.0))?;
    let (default_lo, default_hi) = match kind.as_str() {
        "zero" => (0.0, 1.0),
        "yitang" => (1.5, 50.0),
        _ => (0.1, 20.0),
    };
    let potential = match kind.as_str() {
        "zero" => PotentialSpec::Zero,
        "montgomery-approx" => {
            let a = rv.value(args.a_coefficient, "A", Some(0.06))?;
            let c = rv.value(args.c_coefficient, "C", Some(0.73))?;
            PotentialSpec::MontgomeryApprox { a, c }
        }
        "montgomery-appendix" => {
            let alpha = rv.value(args.alpha, "alpha", Some(1.0))?;
            PotentialSpec::MontgomeryAppendix { alpha, m: mass }
        }
        _ => {
            let c = rv.value(args.yitang_c, "yitang-c", Some(1.0))?;
            let alpha = rv.value(args.alpha, "alpha", Some(1.0))?;
            PotentialSpec::Yitang { c, m: mass, alpha }
        }
    };
    let x_min = rv.value(args.x_min, "x-min", Some(default_lo))?;
    let x_max = rv.value(args.x_max, "x-max", Some(default_hi))?;
    let n_points_raw = rv.value(args.n_points.clone(), "n-points", Some("1000".to_string()))?;
    let mut sizes = Vec::new();
    for item in n_points_raw.split(',') {
        let v: usize = item.trim().parse().map_err(|_| {
            CliError::Validation(format!("n-points entry `{}` is not a positive integer", item.trim()))
        })?;
        sizes.push(v);
    }
    sizes.sort_unstable();
    sizes.dedup();
    let k = rv.value(args.k, "k", Some(5))?;
    let method_name = rv.choice(args.method.clone(), "method", &["auto", "dense", "arnoldi"], "auto")?;
    let workers = rv.workers(args.workers)?;
    let out = resolve_out(&mut rv, &args.out)?;
    let resolved = rv.finish()?;

    // pre-compute validation: grids, k bound, potential domain at the
    // extreme grid points
    let mut grids = Vec::with_capacity(sizes.len());
    for &np in &sizes {
        let grid = GridSpec::new(x_min, x_max, np).map_err(quantum_validation)?;
        if k == 0 || k > np {
            return Err(CliError::Validation(format!(
                "k must satisfy 1 <= k <= n-points (k = {k}, n-points = {np})"
            )));
        }
        evaluate_potential(&potential, grid.point(0)).map_err(quantum_validation)?;
        evaluate_potential(&potential, grid.point(np - 1)).map_err(quantum_validation)?;
        grids.push(grid);
    }
    let method = match method_name.as_str() {
        "dense" => EigenMethod::Dense,
        "arnoldi" => EigenMethod::Arnoldi,
        _ => EigenMethod::Auto,
    };

    let results = run_indexed(grids.len(), workers, |i| {
        build_hamiltonian(&potential, &grids[i], mass, None)
            .and_then(|h| eigensolve(&h, k, method))
    });
    let mut rows = Vec::new();
    let mut points = Vec::new();
    for (grid, result) in grids.iter().zip(results) {
        let res = result.map_err(quantum_validation)?;
        let method_label = match res.method {
            SolverUsed::Dense => "dense",
            SolverUsed::Arnoldi { .. } => "arnoldi",
        };
        for (idx, (lam, r)) in res.eigenvalues.iter().zip(&res.residual_norms).enumerate() {
            rows.push(vec![
                grid.n_points.to_string(),
                idx.to_string(),
                fmt_f64(lam.re),
                fmt_f64(lam.im),
                fmt_f64(*r),
                method_label.to_string(),
            ]);
            points.push((grid.n_points as f64, lam.re));
        }
    }
    let checksum = emit_table(
        &out,
        "n_points,index,eigenvalue_re,eigenvalue_im,residual,method",
        &rows,
        &points,
        PlotKind::Scatter,
    )?;
    emit("eigen", resolved, vec![(out.path, checksum)], t0)
}

pub fn run_pair_correlation(
    args: &PairCorrelationArgs,
    config: Option<&Path>,
) -> Result<(), CliError> {
    let t0 = Instant::now();
    let mut rv = Resolver::new(config)?;
    let statistic = rv.choice(args.statistic.clone(), "statistic", &["g", "r2"], "g")?;
    let u_min = rv.value(args.u_min, "u-min", Some(0.05))?;
    let u_max = rv.value(args.u_max, "u-max", Some(3.0))?;
    let steps = rv.value(args.steps, "steps", Some(300))?;
    if steps < 2 {
        return Err(CliError::Validation(format!("steps must be >= 2 (got {steps})")));
    }
    if u_min.partial_cmp(&u_max) != Some(std::cmp::Ordering::Less) {
        return Err(CliError::Validation(format!(
            "range needs u-min < u-max (got [{u_min}, {u_max}])"
        )));
    }
    let delta = rv.optional(args.delta, "delta")?;
    let out = resolve_out(&mut rv, &args.out)?;
    let resolved = rv.finish()?;

    let grid = scan_grid(u_min, u_max, steps);
    let rows: Vec<Vec<String>> = grid
        .iter()
        .map(|&u| {
            let v = if statistic == "g" {
                pair_correlation_g(u, delta)
            } else {
                pair_correlation_r2(u)
            };
            vec![fmt_f64(u), fmt_f64(v)]
        })
        .collect();
    let points: Vec<(f64, f64)> = grid
        .iter()
        .zip(&rows)
        .map(|(&u, row)| (u, row[1].parse::<f64>().unwrap_or(f64::NAN)))
        .collect();
    let checksum = emit_table(&out, "u,value", &rows, &points, PlotKind::Line)?;
    emit("pair-correlation", resolved, vec![(out.path, checksum)], t0)
}
