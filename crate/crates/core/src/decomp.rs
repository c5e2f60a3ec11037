//! Direct-sum decompositions of analytic functions: along the orthonormal
//! family of a Blaschke product, and along residues of exponents modulo n
//! via roots-of-unity averaging. Also Cesàro means.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::blaschke::{BasisIndex, BlaschkeSpec};
use crate::circlefn::{grid_point, inner_product, CircleFunction};
use crate::error::{HardyError, Result};
use crate::norms::{check_rotational_symmetry, gauge_eval, GaugeNormSpec, AXIOM_TOL};

/// Largest acceptable recomposition residual.
pub const TOL_DECOMP: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionResult {
    /// Component functions in the z variable (series in B or in z^n).
    pub components: Vec<CircleFunction>,
    /// `e_{j0}` or `z^j`.
    pub carriers: Vec<CircleFunction>,
    /// Coefficients of each component as a power series in B (or z^n).
    pub series: Vec<Vec<Complex64>>,
    /// `‖f − Σ carrier_i · component_i‖₂`.
    pub residual: f64,
    /// For the roots-of-unity route: largest ℓ² gap between the literal
    /// averaging formula and the exact index selection.
    pub averaging_defect: Option<f64>,
}

impl DecompositionResult {
    /// `‖carrier_i · component_i‖₂²` for each summand.
    pub fn summand_energies(&self) -> Result<Vec<f64>> {
        self.carriers
            .iter()
            .zip(&self.components)
            .map(|(c, f)| Ok(c.times(f)?.norm2().powi(2)))
            .collect()
    }

    pub fn recompose(&self) -> Result<CircleFunction> {
        let n = self.components[0].n_samples();
        self.carriers
            .iter()
            .zip(&self.components)
            .try_fold(CircleFunction::zero(n)?, |acc, (c, f)| acc.plus(&c.times(f)?))
    }
}

/// Splits `f = Σ_j e_{j0} f^{(j+1)}` with `f^{(j+1)} = Σ_{m ≤ m_max} ⟨f, e_{jm}⟩ B^m`.
///
/// Returns a truncation error only when the residual exceeds
/// [`TOL_DECOMP`] and `f` is wider than `n·m_max/2`.
pub fn decompose_blaschke(f: &CircleFunction, spec: &BlaschkeSpec, m_max: usize) -> Result<DecompositionResult> {
    f.require_analytic("decompose_blaschke")?;
    let n_samples = f.n_samples();
    let b = spec.as_circle_function(n_samples)?;
    let powers: Vec<CircleFunction> = std::iter::successors(Some(CircleFunction::constant(Complex64::new(1.0, 0.0), n_samples)?), |p| p.times(&b).ok())
        .take(m_max + 1)
        .collect();

    let mut components = Vec::with_capacity(spec.degree());
    let mut carriers = Vec::with_capacity(spec.degree());
    let mut series = Vec::with_capacity(spec.degree());
    for j in 0..spec.degree() {
        let carrier = spec.basis_element(BasisIndex { j, m: 0 }, n_samples)?;
        let mut coeffs = Vec::with_capacity(m_max + 1);
        let mut component = CircleFunction::zero(n_samples)?;
        for (m, bm) in powers.iter().enumerate() {
            let e = carrier.times(bm)?;
            debug_assert!(m <= m_max);
            let c = inner_product(f, &e)?;
            coeffs.push(c);
            component = component.plus(&bm.scaled(c))?;
        }
        components.push(component);
        carriers.push(carrier);
        series.push(coeffs);
    }
    let mut result = DecompositionResult {
        components,
        carriers,
        series,
        residual: 0.0,
        averaging_defect: None,
    };
    result.residual = f.minus(&result.recompose()?)?.norm2();
    if result.residual > TOL_DECOMP && f.bandwidth() > spec.degree() * m_max / 2 {
        return Err(HardyError::truncation(
            format!(
                "m_max = {m_max} cannot resolve bandwidth {} with a degree-{} product",
                f.bandwidth(),
                spec.degree()
            ),
            result.residual,
        ));
    }
    Ok(result)
}

/// Sum `Σ_{k<n} ω^{k(j+m)}` in closed form: `n` when `n | j+m`, else 0.
pub fn selection_factor(n: usize, j: usize, m: usize) -> usize {
    if (j + m).is_multiple_of(n) {
        n
    } else {
        0
    }
}

/// `z ↦ f(wz)` for any unimodular `w`; a sample shift when `w` is a grid
/// point, a per-coefficient phase otherwise.
pub(crate) fn rotate_any(f: &CircleFunction, w: Complex64) -> CircleFunction {
    match grid_index(w, f.n_samples()) {
        Some(k) => f.shifted_samples(k),
        None => f.with_coeff_weights(|j| w.powi(j as i32)),
    }
}

fn grid_index(w: Complex64, n: usize) -> Option<usize> {
    let k = (w.arg().rem_euclid(2.0 * PI) * n as f64 / (2.0 * PI)).round() as usize % n;
    ((grid_point(k, n) - w).norm() < 1e-12).then_some(k)
}

/// `f(wz)` for a grid root of unity `w`.
pub fn rotate(f: &CircleFunction, w: Complex64) -> Result<CircleFunction> {
    match grid_index(w, f.n_samples()) {
        Some(k) => Ok(f.shifted_samples(k)),
        None => Err(HardyError::Parameter(format!(
            "rotation {w} is not an {}-th root of unity",
            f.n_samples()
        ))),
    }
}

/// Splits `f = h_0 + z h_1 + ⋯ + z^{n−1} h_{n−1}` with each `h_i` a series
/// in `z^n`.
///
/// `z^{n−j} h_{n−j}` is the average `(1/n) Σ_k ω^{jk} f(ω^k z)`,
/// `ω = e^{2πi/n}`. The returned components come from the exact index
/// selection of that average; the sample-level average is computed as well
/// and its deviation is reported in `averaging_defect`.
pub fn decompose_zn(f: &CircleFunction, n: usize) -> Result<DecompositionResult> {
    f.require_analytic("decompose_zn")?;
    if n == 0 {
        return Err(HardyError::Parameter("n must be >= 1".into()));
    }
    let n_samples = f.n_samples();
    let half = n_samples / 2;
    let omega = Complex64::from_polar(1.0, 2.0 * PI / n as f64);
    let rotations: Vec<CircleFunction> = (0..n).map(|k| rotate_any(f, omega.powu(k as u32))).collect();

    let mut components = vec![CircleFunction::zero(n_samples)?; n];
    let mut carriers = vec![CircleFunction::zero(n_samples)?; n];
    let mut series = vec![Vec::new(); n];
    let mut averaging_defect: f64 = 0.0;
    for j in 1..=n {
        let i = n - j;
        // Literal average, summed in fixed order.
        let averaged = rotations
            .iter()
            .enumerate()
            .try_fold(CircleFunction::zero(n_samples)?, |acc, (k, r)| {
                acc.plus(&r.scaled(omega.powu((j * k % n) as u32)))
            })?
            .scaled(Complex64::new(1.0 / n as f64, 0.0));
        let literal = averaged.times(&CircleFunction::monomial(-(i as i64), n_samples)?)?;

        let mut pairs = Vec::new();
        let mut s = Vec::new();
        for m in (i..half).step_by(n) {
            let a = f.coeff(m as i64) * (selection_factor(n, j, m) as f64) / n as f64;
            pairs.push(((m - i) as i64, a));
            s.push(a);
        }
        let component = crate::circlefn::synthesize(&pairs, n_samples)?;
        averaging_defect = averaging_defect.max(literal.minus(&component)?.norm2());
        components[i] = component;
        carriers[i] = CircleFunction::monomial(i as i64, n_samples)?;
        series[i] = s;
    }
    let mut result = DecompositionResult {
        components,
        carriers,
        series,
        residual: 0.0,
        averaging_defect: Some(averaging_defect),
    };
    result.residual = f.minus(&result.recompose()?)?.norm2();
    Ok(result)
}

/// σ_l(f): coefficient `j` scaled by `1 − j/(l+1)` for `j ≤ l`, dropped above.
pub fn cesaro_mean(f: &CircleFunction, l: usize) -> Result<CircleFunction> {
    f.require_analytic("cesaro_mean")?;
    let taylor: Vec<Complex64> = f
        .taylor()
        .iter()
        .enumerate()
        .take(l + 1)
        .map(|(j, a)| a * (1.0 - j as f64 / (l as f64 + 1.0)))
        .collect();
    CircleFunction::from_taylor(&taylor, f.n_samples())
}

/// α(σ_l(f) − f) for a single `l`.
pub fn cesaro_error(f: &CircleFunction, spec: &GaugeNormSpec, l: usize) -> Result<f64> {
    gauge_eval(spec, &cesaro_mean(f, l)?.minus(f)?)
}

/// α(σ_l(f) − f) for `l = 0..=l_max`. The norm must be rotation invariant
/// on the grid.
pub fn cesaro_convergence_profile(f: &CircleFunction, spec: &GaugeNormSpec, l_max: usize) -> Result<Vec<f64>> {
    f.require_analytic("cesaro_convergence_profile")?;
    let deviation = check_rotational_symmetry(spec, f)?;
    if deviation > AXIOM_TOL {
        return Err(HardyError::Domain(format!(
            "norm is not rotation invariant on this input (deviation {deviation:.3e})"
        )));
    }
    (0..=l_max).map(|l| cesaro_error(f, spec, l)).collect()
}
