//! Dense and banded linear-algebra kernels behind the eigensolvers:
//! Sturm-sequence bisection for real symmetric tridiagonal matrices,
//! pivoted tridiagonal LU, small dense LU, and a complex Hessenberg QR
//! eigenvalue iteration.

use num_complex::Complex64;

/// Number of eigenvalues of the real symmetric tridiagonal (d, e) strictly
/// below `lambda`, via the Sturm sequence of leading-minor pivots.
pub fn sturm_count(d: &[f64], e: &[f64], lambda: f64) -> usize {
    let n = d.len();
    let mut count = 0usize;
    let mut q = 1.0f64;
    for i in 0..n {
        let off = if i > 0 {
            let ei = e[i - 1];
            ei * ei / q
        } else {
            0.0
        };
        q = d[i] - lambda - off;
        if q == 0.0 {
            q = f64::MIN_POSITIVE;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Gershgorin bounds on the spectrum of the symmetric tridiagonal (d, e).
pub fn gershgorin_bounds(d: &[f64], e: &[f64]) -> (f64, f64) {
    let n = d.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let mut radius = 0.0;
        if i > 0 {
            radius += e[i - 1].abs();
        }
        if i < n - 1 {
            radius += e[i].abs();
        }
        lo = lo.min(d[i] - radius);
        hi = hi.max(d[i] + radius);
    }
    (lo, hi)
}

/// The k smallest eigenvalues of the real symmetric tridiagonal (d, e),
/// each bisected to machine precision.
pub fn sym_tridiag_smallest_eigenvalues(d: &[f64], e: &[f64], k: usize) -> Vec<f64> {
    let (glo, ghi) = gershgorin_bounds(d, e);
    let scale = glo.abs().max(ghi.abs()).max(1.0);
    (0..k)
        .map(|j| {
            let mut lo = glo;
            let mut hi = ghi;
            // invariant: count(lo) <= j < count(hi)
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if sturm_count(d, e, mid) <= j {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo <= 4.0 * f64::EPSILON * scale {
                    break;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

/// LU factorization of a complex tridiagonal matrix with partial pivoting
/// (gttrf-style; pivoting introduces one extra superdiagonal).
pub struct TriDiagLu {
    n: usize,
    dl: Vec<Complex64>,
    d: Vec<Complex64>,
    du: Vec<Complex64>,
    du2: Vec<Complex64>,
    swap: Vec<bool>,
}

impl TriDiagLu {
    /// `sub`, `diag`, `sup` are the three bands; returns None on exact
    /// singularity.
    pub fn factor(sub: &[Complex64], diag: &[Complex64], sup: &[Complex64]) -> Option<TriDiagLu> {
        let n = diag.len();
        let mut dl = sub.to_vec();
        let mut d = diag.to_vec();
        let mut du = sup.to_vec();
        let mut du2 = vec![Complex64::new(0.0, 0.0); n.saturating_sub(2)];
        let mut swap = vec![false; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            if d[i].norm_sqr() >= dl[i].norm_sqr() {
                if d[i].norm_sqr() == 0.0 {
                    return None;
                }
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i < n - 2 {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du[i + 1];
                }
                swap[i] = true;
            }
        }
        if d[n - 1].norm_sqr() == 0.0 {
            return None;
        }
        Some(TriDiagLu { n, dl, d, du, du2, swap })
    }

    pub fn solve(&self, b: &mut [Complex64]) {
        let n = self.n;
        for i in 0..n - 1 {
            if self.swap[i] {
                b.swap(i, i + 1);
            }
            let update = self.dl[i] * b[i];
            b[i + 1] -= update;
        }
        b[n - 1] /= self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}

/// Solves a small dense complex system in place via partially pivoted LU.
/// Returns false on exact singularity.
pub fn dense_solve(a: &mut [Complex64], n: usize, b: &mut [Complex64]) -> bool {
    debug_assert_eq!(a.len(), n * n);
    let mut piv: Vec<usize> = (0..n).collect();
    for col in 0..n {
        let mut best = col;
        let mut best_mag = a[piv[col] * n + col].norm_sqr();
        for row in col + 1..n {
            let mag = a[piv[row] * n + col].norm_sqr();
            if mag > best_mag {
                best = row;
                best_mag = mag;
            }
        }
        if best_mag == 0.0 {
            return false;
        }
        piv.swap(col, best);
        let pivot = a[piv[col] * n + col];
        for row in col + 1..n {
            let factor = a[piv[row] * n + col] / pivot;
            a[piv[row] * n + col] = factor;
            for j in col + 1..n {
                let sub = factor * a[piv[col] * n + j];
                a[piv[row] * n + j] -= sub;
            }
        }
    }
    // forward
    let mut y = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..n {
        let mut acc = b[piv[i]];
        for j in 0..i {
            acc -= a[piv[i] * n + j] * y[j];
        }
        y[i] = acc;
    }
    // back
    for i in (0..n).rev() {
        let mut acc = y[i];
        for j in i + 1..n {
            acc -= a[piv[i] * n + j] * b[j];
        }
        b[i] = acc / a[piv[i] * n + i];
    }
    true
}

fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let na = a.norm();
    if na == 0.0 {
        return (0.0, Complex64::new(1.0, 0.0));
    }
    let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
    let c = na / r;
    let s = (a / na) * b.conj() / r;
    (c, s)
}

/// Eigenvalues of a dense complex upper Hessenberg matrix (row-major) via
/// explicitly shifted QR with Givens rotations and deflation. The input may
/// be any Hessenberg matrix; tridiagonal matrices qualify directly.
pub fn hessenberg_eigenvalues(h: &mut [Complex64], n: usize) -> Option<Vec<Complex64>> {
    debug_assert_eq!(h.len(), n * n);
    let at = |h: &[Complex64], i: usize, j: usize| h[i * n + j];
    let mut eigs: Vec<Complex64> = Vec::with_capacity(n);
    let mut hi = n;
    let mut iters_since_deflation = 0usize;
    let max_total = 60 * n.max(1);
    let mut total = 0usize;
    while hi > 0 {
        if total > max_total {
            return None;
        }
        // deflation scan
        let mut lo = hi - 1;
        while lo > 0 {
            let sub = at(h, lo, lo - 1).norm();
            let scale = at(h, lo - 1, lo - 1).norm() + at(h, lo, lo).norm();
            if sub <= f64::EPSILON * scale.max(f64::MIN_POSITIVE) {
                h[lo * n + (lo - 1)] = Complex64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi - 1 {
            eigs.push(at(h, hi - 1, hi - 1));
            hi -= 1;
            iters_since_deflation = 0;
            continue;
        }
        total += 1;
        iters_since_deflation += 1;
        // Wilkinson shift from the trailing 2x2 of the active block
        let a = at(h, hi - 2, hi - 2);
        let b = at(h, hi - 2, hi - 1);
        let c = at(h, hi - 1, hi - 2);
        let dd = at(h, hi - 1, hi - 1);
        let tr = a + dd;
        let det = a * dd - b * c;
        let disc = (tr * tr - 4.0 * det).sqrt();
        let l1 = (tr + disc) / 2.0;
        let l2 = (tr - disc) / 2.0;
        let mut shift = if (l1 - dd).norm() <= (l2 - dd).norm() { l1 } else { l2 };
        if iters_since_deflation.is_multiple_of(12) {
            // exceptional shift to break symmetric stalls
            let kick = at(h, hi - 1, hi - 2).norm() + if hi >= 3 { at(h, hi - 2, hi - 3).norm() } else { 0.0 };
            shift = dd + Complex64::new(kick, 0.0);
        }
        for i in lo..hi {
            h[i * n + i] -= shift;
        }
        // QR by Givens on the subdiagonal, then RQ
        let mut rots: Vec<(f64, Complex64)> = Vec::with_capacity(hi - lo - 1);
        for i in lo..hi - 1 {
            let (cr, sr) = givens(at(h, i, i), at(h, i + 1, i));
            for j in i..hi {
                let x = h[i * n + j];
                let y = h[(i + 1) * n + j];
                h[i * n + j] = cr * x + sr * y;
                h[(i + 1) * n + j] = -sr.conj() * x + cr * y;
            }
            rots.push((cr, sr));
        }
        for (idx, &(cr, sr)) in rots.iter().enumerate() {
            let i = lo + idx;
            let row_top = lo;
            for row in row_top..(i + 2).min(hi) {
                let x = h[row * n + i];
                let y = h[row * n + i + 1];
                h[row * n + i] = cr * x + sr.conj() * y;
                h[row * n + i + 1] = -sr * x + cr * y;
            }
        }
        for i in lo..hi {
            h[i * n + i] += shift;
        }
    }
    Some(eigs)
}

/// Eigenvector of a dense complex matrix for a known eigenvalue, by inverse
/// iteration on a slightly perturbed shift. `a` is row-major n x n.
pub fn dense_inverse_iteration(a: &[Complex64], n: usize, lambda: Complex64) -> Option<Vec<Complex64>> {
    let scale: f64 = (0..n).map(|i| a[i * n + i].norm()).fold(0.0, f64::max).max(1.0);
    let mut v: Vec<Complex64> = (0..n)
        .map(|i| Complex64::new((0.7 * (i as f64 + 1.0)).sin() + 0.5, (0.3 * i as f64).cos() * 0.25))
        .collect();
    normalize(&mut v)?;
    for attempt in 0..3 {
        let eps = scale * 1e-13 * (attempt + 1) as f64;
        let shifted = lambda + Complex64::new(eps, eps);
        let mut m = a.to_vec();
        for i in 0..n {
            m[i * n + i] -= shifted;
        }
        let mut ok = true;
        for _ in 0..4 {
            let mut mm = m.clone();
            let mut b = v.clone();
            if !dense_solve(&mut mm, n, &mut b) {
                ok = false;
                break;
            }
            if normalize(&mut b).is_none() {
                ok = false;
                break;
            }
            v = b;
        }
        if ok {
            return Some(v);
        }
    }
    None
}

pub fn normalize(v: &mut [Complex64]) -> Option<f64> {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if !norm.is_finite() || norm == 0.0 {
        return None;
    }
    for z in v.iter_mut() {
        *z /= norm;
    }
    Some(norm)
}
