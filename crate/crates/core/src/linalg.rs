//! Dense helpers over Taylor-coefficient vectors.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::circlefn::CircleFunction;
use crate::error::Result;

pub type CMat = DMatrix<Complex64>;

/// Columns are the Taylor coefficients `0..len` of each function.
pub fn coeff_matrix(fns: &[CircleFunction], len: usize) -> CMat {
    CMat::from_fn(len, fns.len(), |i, j| fns[j].taylor().get(i).copied().unwrap_or_default())
}

pub fn column_to_function(m: &CMat, col: usize, n_samples: usize) -> Result<CircleFunction> {
    let taylor: Vec<Complex64> = m.column(col).iter().copied().collect();
    CircleFunction::from_taylor(&taylor, n_samples)
}

/// Left singular vectors with `σ ≥ rel_tol·σ_max`, in descending order, and
/// the full singular spectrum.
pub fn range_basis(a: &CMat, rel_tol: f64) -> (CMat, Vec<f64>) {
    if a.ncols() == 0 || a.nrows() == 0 {
        return (CMat::zeros(a.nrows(), 0), Vec::new());
    }
    let svd = a.clone().svd(true, false);
    let u = svd.u.expect("requested U");
    let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    let mut order: Vec<usize> = (0..sv.len()).collect();
    order.sort_by(|&i, &j| sv[j].total_cmp(&sv[i]).then(i.cmp(&j)));
    let top = sv.iter().copied().fold(0.0, f64::max);
    let keep: Vec<usize> = order.iter().copied().filter(|&i| top > 0.0 && sv[i] >= rel_tol * top).collect();
    let basis = CMat::from_fn(a.nrows(), keep.len(), |r, c| u[(r, keep[c])]);
    let sorted = order.iter().map(|&i| sv[i]).collect();
    (basis, sorted)
}

/// `(I − QQ*) a` for orthonormal `q`, applied twice for stability.
pub fn project_out(q: &CMat, a: &CMat) -> CMat {
    if q.ncols() == 0 {
        return a.clone();
    }
    let once = a - q * (q.adjoint() * a);
    &once - q * (q.adjoint() * &once)
}

/// Largest singular value.
pub fn spectral_norm(a: &CMat) -> f64 {
    if a.ncols() == 0 || a.nrows() == 0 {
        return 0.0;
    }
    a.singular_values().iter().copied().fold(0.0, f64::max)
}

/// `max |Q*Q − I|` entrywise.
pub fn gram_defect(q: &CMat) -> f64 {
    let g = q.adjoint() * q;
    let mut worst: f64 = 0.0;
    for i in 0..g.nrows() {
        for j in 0..g.ncols() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g[(i, j)] - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

/// Sine of the largest principal angle between the column spans of two
/// orthonormal matrices; 1 when the dimensions differ.
pub fn principal_sine(a: &CMat, b: &CMat) -> f64 {
    if a.ncols() != b.ncols() {
        return 1.0;
    }
    spectral_norm(&project_out(b, a)).max(spectral_norm(&project_out(a, b))).min(1.0)
}
