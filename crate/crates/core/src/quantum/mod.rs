//! Grid-discretized Schrödinger operators and their spectra.
//!
//! The kinetic term -(1/2m) d²/dx² is discretized with second-order central
//! differences on a uniform interior grid with Dirichlet boundaries (ħ = 1),
//! yielding a symmetric tridiagonal matrix: diagonal 1/(m h²) + V(x_i),
//! off-diagonal -1/(2 m h²), h = (x_max - x_min)/(n_points + 1).
//!
//! Potentials may be real (symmetric real operator) or complex (complex
//! symmetric operator); eigenvalues come from bisection + inverse iteration,
//! a complex Hessenberg QR, or restarted shift-invert Arnoldi.

mod arnoldi;
mod linalg;

use num_complex::Complex64;
use thiserror::Error;

use crate::maps::ElectricalParams;
use arnoldi::{apply_tridiag, shift_invert_arnoldi};
use linalg::{hessenberg_eigenvalues, normalize, sym_tridiag_smallest_eigenvalues, TriDiagLu};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum QuantumError {
    #[error("potential undefined at x = {x}: {reason}")]
    Domain { x: f64, reason: String },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("eigensolver did not converge after {restarts} restarts (best residuals: {best_residuals:?})")]
    NoConvergence { restarts: usize, best_residuals: Vec<f64> },
    #[error("analytic eigenfunction requires E > A (E = {energy}, A = {a_coefficient})")]
    EvanescentRegime { energy: f64, a_coefficient: f64 },
}

/// Uniform interior grid with Dirichlet boundaries. The endpoints themselves
/// carry the (implicit, zero) boundary values; the `n_points` interior nodes
/// are x_i = x_min + (i+1) h with h = (x_max - x_min)/(n_points + 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
    pub boundary: Boundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Boundary {
    #[default]
    Dirichlet,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<GridSpec, QuantumError> {
        if !x_min.is_finite() || !x_max.is_finite() {
            return Err(QuantumError::InvalidInput("grid endpoints must be finite".into()));
        }
        if x_max <= x_min {
            return Err(QuantumError::InvalidInput(format!(
                "grid needs x_max > x_min (got [{x_min}, {x_max}])"
            )));
        }
        if n_points < 3 {
            return Err(QuantumError::InvalidInput(format!(
                "grid needs at least 3 interior points (got {n_points})"
            )));
        }
        Ok(GridSpec { x_min, x_max, n_points, boundary: Boundary::Dirichlet })
    }

    pub fn h(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points as f64 + 1.0)
    }

    pub fn point(&self, i: usize) -> f64 {
        self.x_min + (i as f64 + 1.0) * self.h()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.point(i)).collect()
    }
}

/// Potential families. Parameters named as in the module docs; each variant
/// that divides by x (or takes log x) demands x > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PotentialSpec {
    Zero,
    /// V(x) = A + 1/(C x)
    MontgomeryApprox { a: f64, c: f64 },
    /// V(x) = -alpha²/(2 m x²) + 1/(4 m x²) + alpha/(m x⁶)
    MontgomeryAppendix { alpha: f64, m: f64 },
    /// V(x) = -c²/(m x^{2 alpha}) (log x)^{-2 alpha}, principal branch for
    /// 0 < x < 1 (the only route to a complex operator)
    Yitang { c: f64, m: f64, alpha: f64 },
}

impl PotentialSpec {
    fn validate(&self) -> Result<(), QuantumError> {
        let finite = match *self {
            PotentialSpec::Zero => true,
            PotentialSpec::MontgomeryApprox { a, c } => a.is_finite() && c.is_finite() && c != 0.0,
            PotentialSpec::MontgomeryAppendix { alpha, m } => {
                alpha.is_finite() && m.is_finite() && m > 0.0
            }
            PotentialSpec::Yitang { c, m, alpha } => {
                c.is_finite() && m.is_finite() && m > 0.0 && alpha.is_finite()
            }
        };
        if finite {
            Ok(())
        } else {
            Err(QuantumError::InvalidInput("potential parameters must be finite (m, C nonzero)".into()))
        }
    }
}

/// The A coefficient of the approximated potential, read off the electrical
/// parameters: A = 1 - 1/r² + R/L.
pub fn montgomery_a_from(p: &ElectricalParams) -> f64 {
    1.0 - 1.0 / (p.r * p.r) + p.resistance / p.inductance
}

/// Potential value at x; complex only for the sub-unit Yitang branch.
pub fn evaluate_potential(spec: &PotentialSpec, x: f64) -> Result<Complex64, QuantumError> {
    spec.validate()?;
    match *spec {
        PotentialSpec::Zero => Ok(Complex64::new(0.0, 0.0)),
        PotentialSpec::MontgomeryApprox { a, c } => {
            if x <= 0.0 {
                return Err(QuantumError::Domain { x, reason: "1/(Cx) needs x > 0".into() });
            }
            Ok(Complex64::new(a + 1.0 / (c * x), 0.0))
        }
        PotentialSpec::MontgomeryAppendix { alpha, m } => {
            if x <= 0.0 {
                return Err(QuantumError::Domain { x, reason: "inverse powers need x > 0".into() });
            }
            let x2 = x * x;
            let v = -alpha * alpha / (2.0 * m * x2) + 1.0 / (4.0 * m * x2)
                + alpha / (m * x2 * x2 * x2);
            Ok(Complex64::new(v, 0.0))
        }
        PotentialSpec::Yitang { c, m, alpha } => {
            if x <= 0.0 {
                return Err(QuantumError::Domain { x, reason: "log x needs x > 0".into() });
            }
            let lx = x.ln();
            if lx == 0.0 {
                return Err(QuantumError::Domain { x, reason: "log x = 0 (x = 1)".into() });
            }
            let prefactor = -c * c / (m * x.powf(2.0 * alpha));
            // (log x)^(-2 alpha) with the principal branch for log x < 0
            let log_pow = Complex64::new(lx, 0.0).powc(Complex64::new(-2.0 * alpha, 0.0));
            Ok(prefactor * log_pow)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarField {
    Real,
    Complex,
}

/// Symmetric tridiagonal operator on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianMatrix {
    pub grid: GridSpec,
    pub diagonal: Vec<Complex64>,
    /// Shared sub/super-diagonal (symmetric structure), length n_points - 1.
    pub off_diagonal: Vec<Complex64>,
    pub scalar_field: ScalarField,
    pub hermitian: bool,
}

impl HamiltonianMatrix {
    pub fn n(&self) -> usize {
        self.diagonal.len()
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        apply_tridiag(&self.diagonal, &self.off_diagonal, v)
    }
}

/// Scalar multipliers for the assembled operator's four terms: Laplacian
/// stencil, the -psi1/(4m) barrier, the alpha-dependent terms, and the
/// Von Mangoldt diagonal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChaoticOperatorSpec {
    pub a_coeff: f64,
    pub b_coeff: f64,
    pub d_coeff: f64,
    pub e_coeff: f64,
}

impl Default for ChaoticOperatorSpec {
    fn default() -> Self {
        ChaoticOperatorSpec { a_coeff: 1.0, b_coeff: 1.0, d_coeff: 1.0, e_coeff: 0.0 }
    }
}

fn finalize_matrix(
    grid: GridSpec,
    diagonal: Vec<Complex64>,
    off_diagonal: Vec<Complex64>,
) -> HamiltonianMatrix {
    let real = diagonal.iter().chain(&off_diagonal).all(|z| z.im == 0.0);
    HamiltonianMatrix {
        grid,
        diagonal,
        off_diagonal,
        scalar_field: if real { ScalarField::Real } else { ScalarField::Complex },
        hermitian: real,
    }
}

/// Discretized Hamiltonian -(1/2m) d²/dx² + V with Dirichlet boundaries.
/// With `extra`, the appendix-family terms are weighted by the coefficients;
/// see [`assemble_chaotic_operator`].
pub fn build_hamiltonian(
    spec: &PotentialSpec,
    grid: &GridSpec,
    mass: f64,
    extra: Option<&ChaoticOperatorSpec>,
) -> Result<HamiltonianMatrix, QuantumError> {
    if !(mass.is_finite() && mass > 0.0) {
        return Err(QuantumError::InvalidInput(format!("mass must be positive (got {mass})")));
    }
    spec.validate()?;
    if let Some(cs) = extra {
        return assemble_with_coefficients(spec, grid, mass, cs);
    }
    let h = grid.h();
    let kinetic_diag = 1.0 / (mass * h * h);
    let off = Complex64::new(-0.5 * kinetic_diag, 0.0);
    let mut diagonal = Vec::with_capacity(grid.n_points);
    for i in 0..grid.n_points {
        let x = grid.point(i);
        diagonal.push(Complex64::new(kinetic_diag, 0.0) + evaluate_potential(spec, x)?);
    }
    Ok(finalize_matrix(*grid, diagonal, vec![off; grid.n_points - 1]))
}

fn assemble_with_coefficients(
    spec: &PotentialSpec,
    grid: &GridSpec,
    mass: f64,
    cs: &ChaoticOperatorSpec,
) -> Result<HamiltonianMatrix, QuantumError> {
    for v in [cs.a_coeff, cs.b_coeff, cs.d_coeff, cs.e_coeff] {
        if !v.is_finite() {
            return Err(QuantumError::InvalidInput("operator coefficients must be finite".into()));
        }
    }
    let (alpha, m_pot) = match *spec {
        PotentialSpec::Zero => (0.0, mass),
        PotentialSpec::MontgomeryAppendix { alpha, m } => (alpha, m),
        _ => {
            return Err(QuantumError::InvalidInput(
                "coefficient-weighted assembly is defined for the Zero and \
                 MontgomeryAppendix potentials only"
                    .into(),
            ))
        }
    };
    let points = grid.points();
    if cs.e_coeff != 0.0 {
        for &x in &points {
            let rounded = x.round();
            if rounded < 1.0 || (x - rounded).abs() > 1e-9 {
                return Err(QuantumError::InvalidInput(format!(
                    "Von Mangoldt term needs an integer-aligned grid; point {x} is not \
                     within 1e-9 of a positive integer"
                )));
            }
        }
    }
    let h = grid.h();
    let kinetic_diag = cs.a_coeff / (mass * h * h);
    let off = Complex64::new(-0.5 * kinetic_diag, 0.0);
    let mut diagonal = Vec::with_capacity(grid.n_points);
    for &x in &points {
        let barrier = if cs.b_coeff != 0.0 {
            if x <= 0.0 {
                return Err(QuantumError::Domain { x, reason: "inverse powers need x > 0".into() });
            }
            cs.b_coeff / (4.0 * m_pot * x * x)
        } else {
            0.0
        };
        let alpha_terms = if cs.d_coeff != 0.0 && alpha != 0.0 {
            if x <= 0.0 {
                return Err(QuantumError::Domain { x, reason: "inverse powers need x > 0".into() });
            }
            let x2 = x * x;
            cs.d_coeff * (-alpha * alpha / (2.0 * m_pot * x2) + alpha / (m_pot * x2 * x2 * x2))
        } else {
            0.0
        };
        let lambda_term = if cs.e_coeff != 0.0 {
            cs.e_coeff * von_mangoldt(x.round() as u64)?
        } else {
            0.0
        };
        diagonal.push(Complex64::new(kinetic_diag + barrier + alpha_terms + lambda_term, 0.0));
    }
    Ok(finalize_matrix(*grid, diagonal, vec![off; grid.n_points - 1]))
}

/// Coefficient-weighted assembly of the appendix operator `a·(kinetic
/// stencil) + b·1/(4 m x²) + d·(-alpha²/(2 m x²) + alpha/(m x⁶)) +
/// e·Λ(round(x_i))`; with (1, 1, 1, 0) and a `MontgomeryAppendix` potential
/// this reproduces [`build_hamiltonian`] exactly. The Λ term is accepted only
/// on integer-aligned grids.
pub fn assemble_chaotic_operator(
    spec: &PotentialSpec,
    grid: &GridSpec,
    mass: f64,
    coefficients: &ChaoticOperatorSpec,
) -> Result<HamiltonianMatrix, QuantumError> {
    if !(mass.is_finite() && mass > 0.0) {
        return Err(QuantumError::InvalidInput(format!("mass must be positive (got {mass})")));
    }
    spec.validate()?;
    assemble_with_coefficients(spec, grid, mass, coefficients)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EigenMethod {
    #[default]
    Auto,
    Dense,
    Arnoldi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverUsed {
    Dense,
    Arnoldi { krylov_dim: usize, restarts: usize },
}

/// Eigenvalues of smallest real part, ascending, with unit eigenvectors and
/// independently recomputable residuals ‖Hv - λv‖ (v normalized).
#[derive(Debug, Clone, PartialEq)]
pub struct EigenResult {
    pub eigenvalues: Vec<Complex64>,
    pub eigenvectors: Vec<Vec<Complex64>>,
    pub residual_norms: Vec<f64>,
    pub method: SolverUsed,
}

const DENSE_AUTO_LIMIT: usize = 2000;

pub fn eigensolve(
    h: &HamiltonianMatrix,
    k: usize,
    method: EigenMethod,
) -> Result<EigenResult, QuantumError> {
    let n = h.n();
    if k == 0 || k > n {
        return Err(QuantumError::InvalidInput(format!(
            "requested {k} eigenvalues of an operator with {n} grid points"
        )));
    }
    let method = match method {
        EigenMethod::Auto => {
            if n <= DENSE_AUTO_LIMIT {
                EigenMethod::Dense
            } else {
                EigenMethod::Arnoldi
            }
        }
        m => m,
    };
    match method {
        EigenMethod::Dense => dense_eigensolve(h, k),
        EigenMethod::Arnoldi => arnoldi_eigensolve(h, k),
        EigenMethod::Auto => unreachable!(),
    }
}

fn matrix_scale(h: &HamiltonianMatrix) -> f64 {
    let d = h.diagonal.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let e = h.off_diagonal.iter().map(|z| z.norm()).fold(0.0, f64::max);
    (d + 2.0 * e).max(1.0)
}

fn residual_of(h: &HamiltonianMatrix, lambda: Complex64, v: &[Complex64]) -> f64 {
    h.apply(v)
        .iter()
        .zip(v)
        .map(|(a, x)| (a - lambda * x).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Inverse iteration on the tridiagonal bands at a slightly perturbed shift,
/// orthogonalizing against already-found vectors of nearby eigenvalues.
fn tridiag_inverse_iteration(
    h: &HamiltonianMatrix,
    lambda: Complex64,
    neighbors: &[Vec<Complex64>],
) -> Option<Vec<Complex64>> {
    let n = h.n();
    let scale = matrix_scale(h);
    for attempt in 0..4 {
        let eps = scale * 1e-13 * (attempt + 1) as f64;
        let shift = lambda + Complex64::new(eps, if h.hermitian { 0.0 } else { eps });
        let diag: Vec<Complex64> = h.diagonal.iter().map(|&d| d - shift).collect();
        let lu = match TriDiagLu::factor(&h.off_diagonal, &diag, &h.off_diagonal) {
            Some(lu) => lu,
            None => continue,
        };
        let mut v: Vec<Complex64> = (0..n)
            .map(|i| {
                let t = (i + 1) as f64 * (0.7 + 0.13 * attempt as f64);
                Complex64::new(t.sin() + 0.5, 0.1 * t.cos())
            })
            .collect();
        if normalize(&mut v).is_none() {
            continue;
        }
        let mut ok = true;
        for _ in 0..4 {
            for q in neighbors {
                let c: Complex64 = q.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
                for (vv, qv) in v.iter_mut().zip(q) {
                    *vv -= c * qv;
                }
            }
            lu.solve(&mut v);
            if normalize(&mut v).is_none() {
                ok = false;
                break;
            }
        }
        if ok {
            return Some(v);
        }
    }
    None
}

fn dense_eigensolve(h: &HamiltonianMatrix, k: usize) -> Result<EigenResult, QuantumError> {
    let n = h.n();
    let scale = matrix_scale(h);
    let eigenvalues: Vec<Complex64> = if h.hermitian {
        let d: Vec<f64> = h.diagonal.iter().map(|z| z.re).collect();
        let e: Vec<f64> = h.off_diagonal.iter().map(|z| z.re).collect();
        sym_tridiag_smallest_eigenvalues(&d, &e, k)
            .into_iter()
            .map(|l| Complex64::new(l, 0.0))
            .collect()
    } else {
        let mut dense = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            dense[i * n + i] = h.diagonal[i];
            if i + 1 < n {
                dense[i * n + i + 1] = h.off_diagonal[i];
                dense[(i + 1) * n + i] = h.off_diagonal[i];
            }
        }
        let mut all = hessenberg_eigenvalues(&mut dense, n).ok_or(QuantumError::NoConvergence {
            restarts: 0,
            best_residuals: Vec::new(),
        })?;
        all.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        all.truncate(k);
        all
    };
    let mut eigenvectors: Vec<Vec<Complex64>> = Vec::with_capacity(k);
    let mut residual_norms = Vec::with_capacity(k);
    for (j, &lambda) in eigenvalues.iter().enumerate() {
        let neighbors: Vec<Vec<Complex64>> = eigenvalues[..j]
            .iter()
            .zip(&eigenvectors)
            .filter(|(&l, _)| (l - lambda).norm() < 1e-6 * scale)
            .map(|(_, v)| v.clone())
            .collect();
        let v = tridiag_inverse_iteration(h, lambda, &neighbors).ok_or_else(|| {
            QuantumError::NoConvergence { restarts: 0, best_residuals: residual_norms.clone() }
        })?;
        residual_norms.push(residual_of(h, lambda, &v));
        eigenvectors.push(v);
    }
    Ok(EigenResult { eigenvalues, eigenvectors, residual_norms, method: SolverUsed::Dense })
}

fn arnoldi_eigensolve(h: &HamiltonianMatrix, k: usize) -> Result<EigenResult, QuantumError> {
    match shift_invert_arnoldi(&h.diagonal, &h.off_diagonal, k) {
        Ok(out) => {
            let mut eigenvalues = Vec::with_capacity(k);
            let mut eigenvectors = Vec::with_capacity(k);
            let mut residual_norms = Vec::with_capacity(k);
            for (lambda, v, res) in out.pairs {
                eigenvalues.push(lambda);
                eigenvectors.push(v);
                residual_norms.push(res);
            }
            Ok(EigenResult {
                eigenvalues,
                eigenvectors,
                residual_norms,
                method: SolverUsed::Arnoldi { krylov_dim: out.krylov_dim, restarts: out.restarts },
            })
        }
        Err(fail) => Err(QuantumError::NoConvergence {
            restarts: fail.restarts,
            best_residuals: fail.best_residuals,
        }),
    }
}

/// Constant-k closed form ψ(x) = C₁ sin(kx) + C₂ cos(kx) with
/// k = sqrt(2 m (E - A)), ħ = 1; only valid in the oscillatory regime E > A.
pub fn analytic_eigenfunction(
    a: f64,
    c_coeffs: (f64, f64),
    m: f64,
    energy: f64,
    x: f64,
) -> Result<f64, QuantumError> {
    if !(m.is_finite() && m > 0.0) {
        return Err(QuantumError::InvalidInput(format!("mass must be positive (got {m})")));
    }
    if energy <= a {
        return Err(QuantumError::EvanescentRegime { energy, a_coefficient: a });
    }
    let k = (2.0 * m * (energy - a)).sqrt();
    Ok(c_coeffs.0 * (k * x).sin() + c_coeffs.1 * (k * x).cos())
}

/// Von Mangoldt function: log p when n = p^j for a prime p, else 0.
pub fn von_mangoldt(n: u64) -> Result<f64, QuantumError> {
    if n == 0 {
        return Err(QuantumError::InvalidInput("Von Mangoldt function needs n >= 1".into()));
    }
    if n == 1 {
        return Ok(0.0);
    }
    let mut rest = n;
    let mut p = 0u64;
    let mut d = 2u64;
    while d * d <= rest {
        if rest.is_multiple_of(d) {
            p = d;
            while rest.is_multiple_of(d) {
                rest /= d;
            }
            break;
        }
        d += 1;
    }
    if p == 0 {
        // n itself is prime
        return Ok((n as f64).ln());
    }
    if rest == 1 {
        Ok((p as f64).ln())
    } else {
        Ok(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn free_grid(n: usize) -> GridSpec {
        GridSpec::new(0.0, 1.0, n).unwrap()
    }

    #[test]
    fn grid_validation_and_points() {
        assert!(GridSpec::new(0.0, 1.0, 2).is_err());
        assert!(GridSpec::new(1.0, 1.0, 10).is_err());
        assert!(GridSpec::new(0.0, f64::INFINITY, 10).is_err());
        let g = GridSpec::new(0.0, 1.0, 3).unwrap();
        assert_eq!(g.h(), 0.25);
        assert_eq!(g.points(), vec![0.25, 0.5, 0.75]);
        let g = GridSpec::new(0.0, 51.0, 50).unwrap();
        assert_eq!(g.h(), 1.0);
        assert_eq!(g.point(0), 1.0);
        assert_eq!(g.point(49), 50.0);
    }

    #[test]
    fn montgomery_approx_value() {
        let spec = PotentialSpec::MontgomeryApprox { a: 0.06, c: 0.73 };
        let v = evaluate_potential(&spec, 1.0).unwrap();
        assert!((v.re - 1.429_863_013_698_630_2).abs() < 1e-12);
        assert_eq!(v.im, 0.0);
        assert!(matches!(
            evaluate_potential(&spec, 0.0),
            Err(QuantumError::Domain { .. })
        ));
        assert!(matches!(
            evaluate_potential(&spec, -1.0),
            Err(QuantumError::Domain { .. })
        ));
    }

    #[test]
    fn a_coefficient_from_electrical_parameters() {
        let p = ElectricalParams::new(1.0, 0.0, 1.5, 0.5).unwrap();
        assert_eq!(montgomery_a_from(&p), 0.0);
        let p = ElectricalParams::new(0.5, 1.0, 2.0, 0.5).unwrap();
        assert!((montgomery_a_from(&p) - (1.0 - 4.0 + 0.5)).abs() < 1e-15);
    }

    #[test]
    fn yitang_value_at_e() {
        let spec = PotentialSpec::Yitang { c: 1.0, m: 1.0, alpha: 1.0 };
        let v = evaluate_potential(&spec, std::f64::consts::E).unwrap();
        assert!((v.re - (-0.135_335_283_236_612_7)).abs() < 1e-12);
        assert!(v.im.abs() < 1e-15);
        assert!(matches!(
            evaluate_potential(&spec, 1.0),
            Err(QuantumError::Domain { .. })
        ));
    }

    #[test]
    fn yitang_sub_unit_branch_is_complex() {
        let spec = PotentialSpec::Yitang { c: 1.0, m: 1.0, alpha: 0.3 };
        let v = evaluate_potential(&spec, 0.5).unwrap();
        assert!(v.im.abs() > 1e-3, "expected a genuinely complex value, got {v}");
    }

    #[test]
    fn appendix_potential_terms() {
        let spec = PotentialSpec::MontgomeryAppendix { alpha: 0.4, m: 1.3 };
        let x = 1.7f64;
        let v = evaluate_potential(&spec, x).unwrap();
        let expect = -0.16 / (2.0 * 1.3 * x * x) + 1.0 / (4.0 * 1.3 * x * x)
            + 0.4 / (1.3 * x.powi(6));
        assert!((v.re - expect).abs() < 1e-15);
    }

    #[test]
    fn free_particle_stencil_values() {
        let h = build_hamiltonian(&PotentialSpec::Zero, &free_grid(3), 1.0, None).unwrap();
        assert_eq!(h.diagonal, vec![Complex64::new(16.0, 0.0); 3]);
        assert_eq!(h.off_diagonal, vec![Complex64::new(-8.0, 0.0); 2]);
        assert!(h.hermitian);
        assert_eq!(h.scalar_field, ScalarField::Real);
    }

    #[test]
    fn montgomery_operator_is_hermitian() {
        let grid = GridSpec::new(0.1, 20.0, 50).unwrap();
        let spec = PotentialSpec::MontgomeryApprox { a: 0.06, c: 0.73 };
        let h = build_hamiltonian(&spec, &grid, 1.0, None).unwrap();
        assert!(h.hermitian);
    }

    #[test]
    fn sub_unit_yitang_operator_is_complex() {
        let grid = GridSpec::new(0.2, 0.8, 20).unwrap();
        let spec = PotentialSpec::Yitang { c: 1.0, m: 1.0, alpha: 0.3 };
        let h = build_hamiltonian(&spec, &grid, 1.0, None).unwrap();
        assert_eq!(h.scalar_field, ScalarField::Complex);
        assert!(!h.hermitian);
    }

    #[test]
    fn free_particle_spectrum_matches_closed_form() {
        for n in [50usize, 200, 500] {
            let h = build_hamiltonian(&PotentialSpec::Zero, &free_grid(n), 1.0, None).unwrap();
            let res = eigensolve(&h, 5, EigenMethod::Auto).unwrap();
            assert_eq!(res.method, SolverUsed::Dense);
            let inv_h2 = (n as f64 + 1.0).powi(2);
            for (j, lam) in res.eigenvalues.iter().enumerate() {
                let exact =
                    inv_h2 * (1.0 - ((j as f64 + 1.0) * std::f64::consts::PI / (n as f64 + 1.0)).cos());
                assert!(
                    (lam.re - exact).abs() <= 1e-10 * exact,
                    "n={n} j={j}: {} vs {exact}",
                    lam.re
                );
                assert!(lam.im.abs() < 1e-10);
            }
            for &r in &res.residual_norms {
                assert!(r < 1e-8, "residual {r}");
            }
        }
    }

    #[test]
    fn arnoldi_agrees_with_dense_oracle() {
        let grid = GridSpec::new(0.1, 20.0, 500).unwrap();
        let spec = PotentialSpec::MontgomeryApprox { a: 0.06, c: 0.73 };
        let h = build_hamiltonian(&spec, &grid, 1.0, None).unwrap();
        let dense = eigensolve(&h, 5, EigenMethod::Dense).unwrap();
        let arn = eigensolve(&h, 5, EigenMethod::Arnoldi).unwrap();
        assert!(matches!(arn.method, SolverUsed::Arnoldi { .. }));
        for (d, a) in dense.eigenvalues.iter().zip(&arn.eigenvalues) {
            assert!(
                (d.re - a.re).abs() <= 1e-8 * d.re.abs().max(1e-30),
                "dense {} vs arnoldi {}",
                d.re,
                a.re
            );
            assert!(a.im.abs() < 1e-10);
            assert!(d.im.abs() < 1e-10);
        }
        for &r in dense.residual_norms.iter().chain(&arn.residual_norms) {
            assert!(r < 1e-8);
        }
    }

    #[test]
    fn spectrum_shifts_with_constant_potential_offset() {
        let grid = GridSpec::new(0.1, 20.0, 120).unwrap();
        let base = PotentialSpec::MontgomeryApprox { a: 0.06, c: 0.73 };
        let shifted = PotentialSpec::MontgomeryApprox { a: 0.06 + 2.5, c: 0.73 };
        let e0 = eigensolve(&build_hamiltonian(&base, &grid, 1.0, None).unwrap(), 4, EigenMethod::Dense)
            .unwrap();
        let e1 =
            eigensolve(&build_hamiltonian(&shifted, &grid, 1.0, None).unwrap(), 4, EigenMethod::Dense)
                .unwrap();
        for (a, b) in e0.eigenvalues.iter().zip(&e1.eigenvalues) {
            assert!(((b.re - a.re) - 2.5).abs() < 1e-10, "{} -> {}", a.re, b.re);
        }
    }

    #[test]
    fn complex_dense_solve_has_small_residuals() {
        let grid = GridSpec::new(0.2, 0.8, 60).unwrap();
        let spec = PotentialSpec::Yitang { c: 1.0, m: 1.0, alpha: 0.3 };
        let h = build_hamiltonian(&spec, &grid, 1.0, None).unwrap();
        let res = eigensolve(&h, 3, EigenMethod::Dense).unwrap();
        assert_eq!(res.eigenvalues.len(), 3);
        for w in res.eigenvalues.windows(2) {
            assert!(w[0].re <= w[1].re + 1e-12);
        }
        for (lam, v) in res.eigenvalues.iter().zip(&res.eigenvectors) {
            assert!(residual_of(&h, *lam, v) < 1e-8);
        }
    }

    #[test]
    fn eigensolve_rejects_bad_k() {
        let h = build_hamiltonian(&PotentialSpec::Zero, &free_grid(10), 1.0, None).unwrap();
        assert!(matches!(eigensolve(&h, 0, EigenMethod::Auto), Err(QuantumError::InvalidInput(_))));
        assert!(matches!(eigensolve(&h, 11, EigenMethod::Auto), Err(QuantumError::InvalidInput(_))));
    }

    #[test]
    fn analytic_eigenfunction_values() {
        // at x = 0 only the cosine survives
        assert_eq!(analytic_eigenfunction(0.06, (1.0, 1.7), 3.8, 0.5, 0.0).unwrap(), 1.7);
        let k = (2.0f64 * 3.8 * 0.44).sqrt();
        assert!((k - 1.828_660_713).abs() < 1e-9);
        let x = 1.3;
        let got = analytic_eigenfunction(0.06, (1.0, 1.7), 3.8, 0.5, x).unwrap();
        assert!((got - ((k * x).sin() + 1.7 * (k * x).cos())).abs() < 1e-14);
        assert!(matches!(
            analytic_eigenfunction(0.06, (1.0, 1.7), 3.8, 0.06, 0.0),
            Err(QuantumError::EvanescentRegime { .. })
        ));
        assert!(matches!(
            analytic_eigenfunction(0.5, (1.0, 1.0), 1.0, 0.1, 0.0),
            Err(QuantumError::EvanescentRegime { .. })
        ));
    }

    #[test]
    fn von_mangoldt_values() {
        assert!(matches!(von_mangoldt(0), Err(QuantumError::InvalidInput(_))));
        assert_eq!(von_mangoldt(1).unwrap(), 0.0);
        assert_eq!(von_mangoldt(2).unwrap(), 2.0f64.ln());
        assert_eq!(von_mangoldt(8).unwrap(), 2.0f64.ln());
        assert_eq!(von_mangoldt(9).unwrap(), 3.0f64.ln());
        assert_eq!(von_mangoldt(12).unwrap(), 0.0);
        assert_eq!(von_mangoldt(97).unwrap(), 97.0f64.ln());
        assert_eq!(von_mangoldt(1024).unwrap(), 2.0f64.ln());
    }

    #[test]
    fn chebyshev_identity_holds() {
        // sum of Lambda(d) over divisors d of n equals log n
        for n in 1u64..=2000 {
            let mut acc = 0.0;
            for d in 1..=n {
                if n % d == 0 {
                    acc += von_mangoldt(d).unwrap();
                }
            }
            assert!((acc - (n as f64).ln()).abs() < 1e-9, "n={n}: {acc}");
        }
    }

    #[test]
    fn assembly_reduces_to_free_stencil() {
        let cs = ChaoticOperatorSpec { a_coeff: 1.0, b_coeff: 0.0, d_coeff: 0.0, e_coeff: 0.0 };
        let assembled =
            assemble_chaotic_operator(&PotentialSpec::Zero, &free_grid(3), 1.0, &cs).unwrap();
        let free = build_hamiltonian(&PotentialSpec::Zero, &free_grid(3), 1.0, None).unwrap();
        assert_eq!(assembled, free);
    }

    #[test]
    fn default_assembly_matches_appendix_hamiltonian() {
        let spec = PotentialSpec::MontgomeryAppendix { alpha: 0.4, m: 1.3 };
        let grid = GridSpec::new(0.5, 3.0, 40).unwrap();
        let cs = ChaoticOperatorSpec::default();
        assert_eq!(cs, ChaoticOperatorSpec { a_coeff: 1.0, b_coeff: 1.0, d_coeff: 1.0, e_coeff: 0.0 });
        let assembled = assemble_chaotic_operator(&spec, &grid, 1.3, &cs).unwrap();
        let built = build_hamiltonian(&spec, &grid, 1.3, None).unwrap();
        assert_eq!(assembled.off_diagonal, built.off_diagonal);
        for (a, b) in assembled.diagonal.iter().zip(&built.diagonal) {
            assert!((a - b).norm() < 1e-12 * b.norm().max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn mangoldt_diagonal_on_integer_grid() {
        let grid = GridSpec::new(0.0, 51.0, 50).unwrap();
        let cs = ChaoticOperatorSpec { a_coeff: 0.0, b_coeff: 0.0, d_coeff: 0.0, e_coeff: 1.0 };
        let h = assemble_chaotic_operator(&PotentialSpec::Zero, &grid, 1.0, &cs).unwrap();
        for (i, d) in h.diagonal.iter().enumerate() {
            assert_eq!(d.re, von_mangoldt(i as u64 + 1).unwrap(), "n = {}", i + 1);
            assert_eq!(d.im, 0.0);
        }
        assert!(h.off_diagonal.iter().all(|z| *z == Complex64::new(0.0, 0.0)));
    }

    #[test]
    fn mangoldt_term_rejects_misaligned_grids() {
        let grid = GridSpec::new(0.1, 20.0, 50).unwrap();
        let cs = ChaoticOperatorSpec { a_coeff: 1.0, b_coeff: 0.0, d_coeff: 0.0, e_coeff: 1.0 };
        assert!(matches!(
            assemble_chaotic_operator(&PotentialSpec::Zero, &grid, 1.0, &cs),
            Err(QuantumError::InvalidInput(_))
        ));
    }

    proptest! {
        #[test]
        fn mangoldt_nonzero_only_on_prime_powers(n in 1u64..5000) {
            let lam = von_mangoldt(n).unwrap();
            // count distinct prime factors by trial division
            let mut rest = n;
            let mut distinct = 0u32;
            let mut d = 2u64;
            while d * d <= rest {
                if rest % d == 0 {
                    distinct += 1;
                    while rest % d == 0 { rest /= d; }
                }
                d += 1;
            }
            if rest > 1 { distinct += 1; }
            if distinct == 1 {
                prop_assert!(lam > 0.0);
            } else {
                prop_assert_eq!(lam, 0.0);
            }
        }

        #[test]
        fn hermitian_flag_tracks_imaginary_parts(n in 3usize..30, x0 in 0.2f64..0.9) {
            let grid = GridSpec::new(x0 * 0.5, x0, n).unwrap();
            let spec = PotentialSpec::Yitang { c: 1.0, m: 1.0, alpha: 0.3 };
            let h = build_hamiltonian(&spec, &grid, 1.0, None).unwrap();
            let any_imag = h.diagonal.iter().any(|z| z.im != 0.0);
            prop_assert_eq!(h.hermitian, !any_imag);
        }
    }
}
