//! Functions on the unit circle, held simultaneously as samples on the
//! N-th roots of unity and as Fourier coefficients.
//!
//! Sample `k` is the value at `z_k = exp(2πik/N)`. Coefficient `j` is the
//! grid quadrature of `∫ f z^{-j} dm`, indexed over the symmetric band
//! `-N/2..N/2`. Both views are computed once at construction and never
//! mutated afterwards.

use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{HardyError, Result};

/// Default grid size.
pub const DEFAULT_N: usize = 1024;
/// Negative-frequency ℓ² mass below which a function counts as analytic.
pub const TOL_ANALYTIC: f64 = 1e-8;
/// Modulus floor for logarithms and division.
pub const EPS_LOG: f64 = 1e-12;
/// Coefficients at or below this magnitude do not count toward bandwidth.
pub const BANDWIDTH_FLOOR: f64 = 1e-13;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn fft_in_place(buf: &mut [Complex64], inverse: bool) {
    PLANNER.with(|p| {
        let mut planner = p.borrow_mut();
        let plan = if inverse {
            planner.plan_fft_inverse(buf.len())
        } else {
            planner.plan_fft_forward(buf.len())
        };
        plan.process(buf);
    });
}

fn check_size(n: usize) -> Result<()> {
    if n < 2 || !n.is_power_of_two() {
        return Err(HardyError::Size(format!(
            "grid size {n} is not a power of two >= 2"
        )));
    }
    Ok(())
}

/// The grid point `exp(2πik/N)`.
pub fn grid_point(k: usize, n: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * (k as f64) / (n as f64))
}

/// Position of coefficient `j` in FFT storage order.
fn slot(j: i64, n: usize) -> usize {
    j.rem_euclid(n as i64) as usize
}

/// Coefficient index held in FFT storage slot `s`.
fn index_of_slot(s: usize, n: usize) -> i64 {
    if s < n / 2 {
        s as i64
    } else {
        s as i64 - n as i64
    }
}

/// Fourier coefficients of grid samples, returned in symmetric order:
/// entry `i` holds `a_{i - N/2}`.
pub fn analyze(samples: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = samples.len();
    check_size(n)?;
    let fft = forward(samples);
    Ok((0..n)
        .map(|i| fft[slot(i as i64 - (n / 2) as i64, n)])
        .collect())
}

fn forward(samples: &[Complex64]) -> Vec<Complex64> {
    let n = samples.len();
    let mut buf = samples.to_vec();
    fft_in_place(&mut buf, false);
    let scale = 1.0 / n as f64;
    buf.iter_mut().for_each(|c| *c *= scale);
    buf
}

/// Builds a function from `(j, a_j)` pairs. Repeated indices accumulate.
pub fn synthesize(coeffs: &[(i64, Complex64)], n_samples: usize) -> Result<CircleFunction> {
    check_size(n_samples)?;
    let half = (n_samples / 2) as i64;
    let mut spectrum = vec![Complex64::new(0.0, 0.0); n_samples];
    for &(j, a) in coeffs {
        if a == Complex64::new(0.0, 0.0) {
            continue;
        }
        if j >= half || j < -half {
            return Err(HardyError::truncation(
                format!("coefficient index {j} outside representable band [-{half}, {half}) for N = {n_samples}"),
                a.norm(),
            ));
        }
        spectrum[slot(j, n_samples)] += a;
    }
    Ok(CircleFunction::from_spectrum(spectrum))
}

/// Analyticity diagnostic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardyFlag {
    pub is_analytic: bool,
    pub negative_energy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointwiseOp {
    Mul,
    Div,
    Abs,
    /// `log|f|`; with `regularize` the modulus is clamped to `EPS_LOG`
    /// instead of raising a singularity error.
    LogModulus { regularize: bool },
    Exp,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CircleFunction {
    samples: Vec<Complex64>,
    /// FFT storage order: slot `s` holds `a_s` for `s < N/2`, else `a_{s-N}`.
    coeffs: Vec<Complex64>,
}

impl CircleFunction {
    pub fn from_samples(samples: Vec<Complex64>) -> Result<Self> {
        check_size(samples.len())?;
        let coeffs = forward(&samples);
        Ok(Self { samples, coeffs })
    }

    /// Builds from a full spectrum in FFT storage order.
    fn from_spectrum(coeffs: Vec<Complex64>) -> Self {
        let mut samples = coeffs.clone();
        fft_in_place(&mut samples, true);
        Self { samples, coeffs }
    }

    /// Samples `g(z_k)` for a closure evaluated on the grid.
    pub fn from_fn(n_samples: usize, g: impl Fn(Complex64) -> Complex64) -> Result<Self> {
        check_size(n_samples)?;
        Self::from_samples((0..n_samples).map(|k| g(grid_point(k, n_samples))).collect())
    }

    /// Analytic function with the given Taylor coefficients `a_0, a_1, …`.
    pub fn from_taylor(taylor: &[Complex64], n_samples: usize) -> Result<Self> {
        let pairs: Vec<(i64, Complex64)> = taylor
            .iter()
            .enumerate()
            .map(|(j, &a)| (j as i64, a))
            .collect();
        synthesize(&pairs, n_samples)
    }

    pub fn constant(c: Complex64, n_samples: usize) -> Result<Self> {
        synthesize(&[(0, c)], n_samples)
    }

    /// `z^k`.
    pub fn monomial(k: i64, n_samples: usize) -> Result<Self> {
        synthesize(&[(k, Complex64::new(1.0, 0.0))], n_samples)
    }

    pub fn zero(n_samples: usize) -> Result<Self> {
        check_size(n_samples)?;
        Ok(Self {
            samples: vec![Complex64::new(0.0, 0.0); n_samples],
            coeffs: vec![Complex64::new(0.0, 0.0); n_samples],
        })
    }

    pub fn n_samples(&self) -> usize {
        self.samples.len()
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    /// Fourier coefficient `a_j`; zero outside the representable band.
    pub fn coeff(&self, j: i64) -> Complex64 {
        let n = self.n_samples() as i64;
        if j >= n / 2 || j < -n / 2 {
            return Complex64::new(0.0, 0.0);
        }
        self.coeffs[slot(j, self.n_samples())]
    }

    /// Coefficients in symmetric order, entry `i` holding `a_{i - N/2}`.
    pub fn coeffs_symmetric(&self) -> Vec<Complex64> {
        let n = self.n_samples() as i64;
        (-n / 2..n / 2).map(|j| self.coeff(j)).collect()
    }

    /// `a_0, …, a_{N/2-1}`.
    pub fn taylor(&self) -> &[Complex64] {
        &self.coeffs[..self.n_samples() / 2]
    }

    /// Nonzero coefficients as `(j, a_j)` in increasing `j`.
    pub fn nonzero_coeffs(&self, drop_below: f64) -> Vec<(i64, Complex64)> {
        let n = self.n_samples() as i64;
        (-n / 2..n / 2)
            .map(|j| (j, self.coeff(j)))
            .filter(|(_, a)| a.norm() > drop_below)
            .collect()
    }

    pub fn negative_energy(&self) -> f64 {
        let n = self.n_samples();
        self.coeffs[n / 2..]
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn hardy_flag(&self) -> HardyFlag {
        let negative_energy = self.negative_energy();
        HardyFlag {
            is_analytic: negative_energy <= TOL_ANALYTIC,
            negative_energy,
        }
    }

    pub fn is_analytic(&self) -> bool {
        self.hardy_flag().is_analytic
    }

    pub(crate) fn require_analytic(&self, what: &str) -> Result<()> {
        let flag = self.hardy_flag();
        if !flag.is_analytic {
            return Err(HardyError::Domain(format!(
                "{what} requires an analytic function (negative-frequency energy {:.3e} > {TOL_ANALYTIC:e})",
                flag.negative_energy
            )));
        }
        Ok(())
    }

    /// Largest `|j|` whose coefficient exceeds `BANDWIDTH_FLOOR` (scaled by
    /// the largest coefficient when that exceeds one).
    pub fn bandwidth(&self) -> usize {
        let n = self.n_samples();
        let peak = self.coeffs.iter().map(|a| a.norm()).fold(0.0, f64::max);
        let floor = BANDWIDTH_FLOOR * peak.max(1.0);
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > floor)
            .map(|(s, _)| index_of_slot(s, n).unsigned_abs() as usize)
            .max()
            .unwrap_or(0)
    }

    /// `((1/N) Σ |f(z_k)|²)^{1/2}`.
    pub fn norm2(&self) -> f64 {
        inner_product_unchecked(self, self).re.max(0.0).sqrt()
    }

    pub fn sup_norm(&self) -> f64 {
        self.samples.iter().map(|s| s.norm()).fold(0.0, f64::max)
    }

    /// ℓ¹ norm of the coefficient sequence (dominates the sup norm).
    pub fn coefficient_l1(&self) -> f64 {
        self.coeffs.iter().map(|a| a.norm()).sum()
    }

    pub fn min_modulus(&self) -> (usize, f64) {
        self.samples
            .iter()
            .enumerate()
            .map(|(k, s)| (k, s.norm()))
            .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc })
    }

    /// Largest imaginary part over the grid.
    pub fn max_imag(&self) -> f64 {
        self.samples.iter().map(|s| s.im.abs()).fold(0.0, f64::max)
    }

    pub fn map_samples(&self, g: impl Fn(Complex64) -> Complex64) -> Self {
        let samples = self.samples.iter().map(|&s| g(s)).collect();
        Self::from_samples(samples).expect("grid size already validated")
    }

    fn zip_samples(&self, other: &Self, g: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        debug_assert_eq!(self.n_samples(), other.n_samples());
        let samples = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(&a, &b)| g(a, b))
            .collect();
        Self::from_samples(samples).expect("grid size already validated")
    }

    fn zip_spectrum(&self, other: &Self, g: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| g(a, b))
            .collect();
        Self::from_spectrum(coeffs)
    }

    fn same_grid(&self, other: &Self) -> Result<()> {
        if self.n_samples() != other.n_samples() {
            return Err(HardyError::Size(format!(
                "grid sizes differ: {} vs {}",
                self.n_samples(),
                other.n_samples()
            )));
        }
        Ok(())
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        self.same_grid(other)?;
        Ok(self.zip_spectrum(other, |a, b| a + b))
    }

    pub fn minus(&self, other: &Self) -> Result<Self> {
        self.same_grid(other)?;
        Ok(self.zip_spectrum(other, |a, b| a - b))
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self {
            samples: self.samples.iter().map(|s| s * c).collect(),
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Sample-wise product without the aliasing guard of [`pointwise`].
    /// Exact on the grid; coefficients alias once the true product's
    /// bandwidth reaches N/2.
    pub fn times(&self, other: &Self) -> Result<Self> {
        self.same_grid(other)?;
        Ok(self.zip_samples(other, |a, b| a * b))
    }

    /// Sample-wise quotient; errors where `|other| < EPS_LOG`.
    pub fn divided_by(&self, other: &Self) -> Result<Self> {
        self.same_grid(other)?;
        check_floor(other, EPS_LOG)?;
        Ok(self.zip_samples(other, |a, b| a / b))
    }

    pub fn conj(&self) -> Self {
        self.map_samples(|s| s.conj())
    }

    /// Multiplies coefficient `j` by `w^j`, i.e. `z ↦ f(wz)` for unimodular `w`.
    pub(crate) fn with_coeff_weights(&self, weight: impl Fn(i64) -> Complex64) -> Self {
        let n = self.n_samples();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(s, &a)| a * weight(index_of_slot(s, n)))
            .collect();
        Self::from_spectrum(coeffs)
    }

    /// Cyclic shift of samples: result sample `k` is `f(z_{k+shift})`.
    pub(crate) fn shifted_samples(&self, shift: usize) -> Self {
        let n = self.n_samples();
        let samples = (0..n).map(|k| self.samples[(k + shift) % n]).collect();
        Self::from_samples(samples).expect("grid size already validated")
    }

    /// Keeps only coefficients with index in `lo..=hi`.
    pub fn band_limited(&self, lo: i64, hi: i64) -> Self {
        let n = self.n_samples();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(s, &a)| {
                let j = index_of_slot(s, n);
                if j >= lo && j <= hi {
                    a
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        Self::from_spectrum(coeffs)
    }

    /// Resamples onto a grid of size `n` by copying coefficients within the
    /// band shared by both grids.
    pub fn resampled(&self, n: usize) -> Result<Self> {
        check_size(n)?;
        let half = (n.min(self.n_samples()) / 2) as i64;
        let pairs: Vec<(i64, Complex64)> = (-half..half).map(|j| (j, self.coeff(j))).collect();
        synthesize(&pairs, n)
    }

    /// Power series value `Σ_{j≥0} a_j z^j` over the truncation band.
    pub fn evaluate_at(&self, z: Complex64) -> Result<Complex64> {
        self.require_analytic("evaluate_at")?;
        if z.norm() > 1.0 + 1e-12 {
            return Err(HardyError::Domain(format!(
                "evaluation point {z} lies outside the closed disk"
            )));
        }
        Ok(horner(self.taylor(), z))
    }
}

pub(crate) fn horner(taylor: &[Complex64], z: Complex64) -> Complex64 {
    taylor
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
}

pub(crate) fn check_floor(f: &CircleFunction, floor: f64) -> Result<()> {
    let indices: Vec<usize> = f
        .samples
        .iter()
        .enumerate()
        .filter(|(_, s)| s.norm() < floor)
        .map(|(k, _)| k)
        .collect();
    if let Some(&index) = indices.first() {
        return Err(HardyError::Singularity {
            index,
            modulus: f.samples[index].norm(),
            floor,
            indices,
        });
    }
    Ok(())
}

/// `∫ f ḡ dm` at grid resolution.
pub fn inner_product(f: &CircleFunction, g: &CircleFunction) -> Result<Complex64> {
    f.same_grid(g)?;
    Ok(inner_product_unchecked(f, g))
}

fn inner_product_unchecked(f: &CircleFunction, g: &CircleFunction) -> Complex64 {
    let n = f.n_samples() as f64;
    f.samples
        .iter()
        .zip(&g.samples)
        .map(|(a, b)| a * b.conj())
        .sum::<Complex64>()
        / n
}

/// Sample-wise algebra. `g` is required for `Mul` and `Div` and ignored
/// otherwise. Products are refused when the grid is smaller than four
/// times the sum of the operand bandwidths.
pub fn pointwise(
    f: &CircleFunction,
    g: Option<&CircleFunction>,
    op: PointwiseOp,
) -> Result<CircleFunction> {
    let second = |what: &str| {
        g.ok_or_else(|| HardyError::Parameter(format!("{what} needs a second operand")))
    };
    match op {
        PointwiseOp::Mul => {
            let g = second("mul")?;
            f.same_grid(g)?;
            let needed = 4 * (f.bandwidth() + g.bandwidth());
            if f.n_samples() < needed {
                return Err(HardyError::Size(format!(
                    "product needs N >= {needed} to avoid aliasing, grid has {}",
                    f.n_samples()
                )));
            }
            f.times(g)
        }
        PointwiseOp::Div => f.divided_by(second("div")?),
        PointwiseOp::Abs => Ok(f.map_samples(|s| Complex64::new(s.norm(), 0.0))),
        PointwiseOp::LogModulus { regularize } => {
            if !regularize {
                check_floor(f, EPS_LOG)?;
            }
            Ok(f.map_samples(|s| Complex64::new(s.norm().max(EPS_LOG).ln(), 0.0)))
        }
        PointwiseOp::Exp => Ok(f.map_samples(|s| s.exp())),
    }
}
