//! Seeded random test objects shared by the verification suites and
//! experiments.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::blaschke::BlaschkeSpec;
use crate::circlefn::CircleFunction;
use crate::error::Result;
use crate::invariance::ConstrainedSpec;

/// Uniform in the square `[-1/2, 1/2]²`.
pub fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
}

/// Uniform in the disk of radius `r_max`.
pub fn random_in_disk(rng: &mut ChaCha8Rng, r_max: f64) -> Complex64 {
    let r = r_max * rng.random::<f64>().sqrt();
    Complex64::from_polar(r, 2.0 * std::f64::consts::PI * rng.random::<f64>())
}

pub fn random_unimodular(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * rng.random::<f64>())
}

/// Polynomial of exact degree `deg` with uniform-square coefficients.
pub fn random_polynomial(rng: &mut ChaCha8Rng, deg: usize, n_samples: usize) -> Result<CircleFunction> {
    let mut taylor: Vec<Complex64> = (0..=deg).map(|_| random_complex(rng)).collect();
    if taylor[deg].norm() < 1e-3 {
        taylor[deg] = Complex64::new(0.5, 0.0);
    }
    CircleFunction::from_taylor(&taylor, n_samples)
}

/// `n` zeros in `|α| ≤ r_max`; when `zero_first` the first zero is 0.
pub fn random_blaschke(rng: &mut ChaCha8Rng, n: usize, r_max: f64, zero_first: bool) -> Result<BlaschkeSpec> {
    let zeros = (0..n)
        .map(|i| if i == 0 && zero_first { Complex64::default() } else { random_in_disk(rng, r_max) })
        .collect();
    BlaschkeSpec::new(zeros)
}

/// Unimodular constant times a product of `factors` Möbius maps with zeros
/// in `|a| ≤ r_max`.
pub fn random_inner(rng: &mut ChaCha8Rng, factors: usize, r_max: f64, n_samples: usize) -> Result<CircleFunction> {
    let zeros: Vec<Complex64> = (0..factors).map(|_| random_in_disk(rng, r_max)).collect();
    let c = random_unimodular(rng);
    CircleFunction::from_fn(n_samples, |z| zeros.iter().fold(c, |acc, a| acc * (z - a) / (1.0 - a.conj() * z)))
}

/// `rows × cols` matrix with orthonormal columns (`cols ≤ rows`).
pub fn random_isometry(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DMatrix<Complex64> {
    let g = DMatrix::from_fn(rows, cols, |_, _| random_complex(rng));
    g.qr().q().columns(0, cols).into_owned()
}

/// `2r × k` isometry whose first row has entries of modulus in
/// `[lead_min, lead_max]`; `lead_min = lead_max = 0` gives a vanishing row.
pub fn random_beta(rng: &mut ChaCha8Rng, r: usize, k: usize, lead_min: f64, lead_max: f64) -> Vec<Vec<Complex64>> {
    let x: Vec<Complex64> = (0..k)
        .map(|_| Complex64::from_polar(lead_min + (lead_max - lead_min) * rng.random::<f64>(), 2.0 * std::f64::consts::PI * rng.random::<f64>()))
        .collect();
    let x_norm_sq: f64 = x.iter().map(|v| v.norm_sqr()).sum();
    // Rows 2.. are U·S with S = (I − x*x)^{1/2} and U an isometry.
    let xv = DMatrix::from_fn(k, 1, |i, _| x[i].conj());
    let s = if x_norm_sq > 0.0 {
        let shrink = 1.0 - (1.0 - x_norm_sq).sqrt();
        DMatrix::identity(k, k) - (&xv * xv.adjoint()) * Complex64::new(shrink / x_norm_sq, 0.0)
    } else {
        DMatrix::identity(k, k)
    };
    let rest = random_isometry(rng, 2 * r - 1, k) * s;
    (0..k)
        .map(|c| std::iter::once(x[c]).chain(rest.column(c).iter().copied()).collect())
        .collect()
}

/// Jointly `z^n`-inner `J_i = (Σ_l U_{li} z^l)·m(z)`, `U` an `n × r` isometry
/// and `m` a Möbius product, with a `2r × k` coefficient matrix.
pub fn random_constrained_spec(rng: &mut ChaCha8Rng, n: usize, r: usize, k: usize, lead_min: f64, n_samples: usize) -> Result<ConstrainedSpec> {
    let u = random_isometry(rng, n, r);
    let factors = rng.random_range(1..=2);
    let m = random_inner(rng, factors, 0.5, n_samples)?;
    let inners = (0..r)
        .map(|i| {
            let taylor: Vec<Complex64> = u.column(i).iter().copied().collect();
            CircleFunction::from_taylor(&taylor, n_samples)?.times(&m)
        })
        .collect::<Result<Vec<_>>>()?;
    let lead_max = if lead_min > 0.0 { (0.95 / k as f64).sqrt().max(lead_min) } else { 0.0 };
    Ok(ConstrainedSpec {
        inners,
        beta: random_beta(rng, r, k, lead_min, lead_max),
        blaschke: BlaschkeSpec::monomial(n)?,
    })
}
