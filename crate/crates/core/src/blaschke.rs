//! Finite Blaschke products, their partial products, the orthonormal
//! family `e_{jm}` and composition `f ↦ f∘B`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circlefn::{horner, inner_product, CircleFunction};
use crate::error::{HardyError, Result};

/// Zeros must satisfy `|α| ≤ 1 − ZERO_MARGIN`.
pub const ZERO_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BlaschkeFile", into = "BlaschkeFile")]
pub struct BlaschkeSpec {
    zeros: Vec<Complex64>,
}

/// On-disk form: `{"zeros": [[re, im], ...]}`.
#[derive(Serialize, Deserialize)]
struct BlaschkeFile {
    zeros: Vec<[f64; 2]>,
}

impl TryFrom<BlaschkeFile> for BlaschkeSpec {
    type Error = HardyError;
    fn try_from(file: BlaschkeFile) -> Result<Self> {
        BlaschkeSpec::new(file.zeros.iter().map(|z| Complex64::new(z[0], z[1])).collect())
    }
}

impl From<BlaschkeSpec> for BlaschkeFile {
    fn from(spec: BlaschkeSpec) -> Self {
        BlaschkeFile {
            zeros: spec.zeros.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

/// Index `(j, m)` of `e_{jm}`; `j < degree`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisIndex {
    pub j: usize,
    pub m: usize,
}

impl BlaschkeSpec {
    pub fn new(zeros: Vec<Complex64>) -> Result<Self> {
        if zeros.is_empty() {
            return Err(HardyError::Parameter("a Blaschke product needs at least one zero".into()));
        }
        if let Some(bad) = zeros.iter().find(|a| !(a.norm() <= 1.0 - ZERO_MARGIN)) {
            return Err(HardyError::Parameter(format!(
                "zero {bad} violates |α| <= 1 - {ZERO_MARGIN:e}"
            )));
        }
        Ok(Self { zeros })
    }

    /// `B(z) = z^n`.
    pub fn monomial(n: usize) -> Result<Self> {
        Self::new(vec![Complex64::new(0.0, 0.0); n])
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    /// True when every zero is at the origin, i.e. `B = z^n`.
    pub fn is_monomial(&self) -> bool {
        self.zeros.iter().all(|a| a.norm() == 0.0)
    }

    /// Operations whose classical statements put the first zero at the
    /// origin log a warning otherwise.
    pub(crate) fn warn_if_first_zero_nonzero(&self, op: &str) {
        if self.zeros[0].norm() != 0.0 {
            log::warn!(
                "{op}: first zero {} is not at the origin; results hold up to the conformal normalization",
                self.zeros[0]
            );
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        partial_eval(&self.zeros, z)
    }

    pub fn as_circle_function(&self, n_samples: usize) -> Result<CircleFunction> {
        CircleFunction::from_fn(n_samples, |z| self.eval(z))
    }

    /// `B_j = Π_{i ≤ j} (z − α_i)/(1 − ᾱ_i z)`, with `B_0 ≡ 1`.
    pub fn partial_product(&self, j: usize, n_samples: usize) -> Result<CircleFunction> {
        if j > self.degree() {
            return Err(HardyError::Parameter(format!(
                "partial product index {j} exceeds degree {}",
                self.degree()
            )));
        }
        CircleFunction::from_fn(n_samples, |z| partial_eval(&self.zeros[..j], z))
    }

    /// `e_{jm} = √(1−|α_{j+1}|²)/(1 − ᾱ_{j+1} z) · B_j · B^m`.
    pub fn basis_element(&self, idx: BasisIndex, n_samples: usize) -> Result<CircleFunction> {
        if idx.j >= self.degree() {
            return Err(HardyError::Parameter(format!(
                "basis index j = {} out of range for degree {}",
                idx.j,
                self.degree()
            )));
        }
        let a = self.zeros[idx.j];
        let scale = (1.0 - a.norm_sqr()).sqrt();
        CircleFunction::from_fn(n_samples, |z| {
            scale / (1.0 - a.conj() * z)
                * partial_eval(&self.zeros[..idx.j], z)
                * self.eval(z).powu(idx.m as u32)
        })
    }

    /// `max |⟨e_{jm}, e_{j'm'}⟩ − δ|` over `j, j' < n`, `m, m' ≤ m_max`.
    pub fn check_basis_orthonormality(&self, m_max: usize, n_samples: usize) -> Result<f64> {
        if m_max < 1 {
            return Err(HardyError::Parameter("m_max must be >= 1".into()));
        }
        let mut family = Vec::new();
        for m in 0..=m_max {
            for j in 0..self.degree() {
                family.push(self.basis_element(BasisIndex { j, m }, n_samples)?);
            }
        }
        gram_deviation(&family)
    }
}

fn partial_eval(zeros: &[Complex64], z: Complex64) -> Complex64 {
    zeros
        .iter()
        .map(|a| (z - a) / (1.0 - a.conj() * z))
        .product()
}

/// `max |G − I|` for the Gram matrix of `family`.
pub fn gram_deviation(family: &[CircleFunction]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (a, fa) in family.iter().enumerate() {
        for (b, fb) in family.iter().enumerate().skip(a) {
            let g = inner_product(fa, fb)?;
            let target = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((g - target).norm());
        }
    }
    Ok(worst)
}

/// Evaluates the power series of `f` at the sample values of `inner`.
/// `inner` must map the grid into the closed disk.
pub(crate) fn compose_samples(f: &CircleFunction, inner: &CircleFunction) -> Result<CircleFunction> {
    f.require_analytic("composition")?;
    let taylor = &f.taylor()[..=f.bandwidth().min(f.n_samples() / 2 - 1)];
    let samples = inner.samples().iter().map(|&w| horner(taylor, w)).collect();
    CircleFunction::from_samples(samples)
}

/// `f∘B`, evaluated sample-wise through the power series of `f`.
pub fn compose(f: &CircleFunction, spec: &BlaschkeSpec) -> Result<CircleFunction> {
    f.require_analytic("compose")?;
    let needed = 4 * spec.degree() * f.bandwidth();
    if f.n_samples() < needed {
        return Err(HardyError::Size(format!(
            "composition with a degree-{} Blaschke product needs N >= {needed}, grid has {}",
            spec.degree(),
            f.n_samples()
        )));
    }
    spec.warn_if_first_zero_nonzero("compose");
    compose_samples(f, &spec.as_circle_function(f.n_samples())?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eval_examples() {
        let w = c(0.3, -0.4);
        assert!((BlaschkeSpec::monomial(1).unwrap().eval(w) - w).norm() < 1e-15);
        assert!((BlaschkeSpec::monomial(2).unwrap().eval(c(0.0, 1.0)) - c(-1.0, 0.0)).norm() < 1e-15);
        let b = BlaschkeSpec::new(vec![c(0.0, 0.0), c(0.5, 0.0)]).unwrap();
        assert_eq!(b.eval(c(0.0, 0.0)), c(0.0, 0.0));
        assert!((b.eval(c(1.0, 0.0)) - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn rejects_badly_conditioned_zeros() {
        assert!(BlaschkeSpec::new(vec![c(1.0, 0.0)]).is_err());
        assert!(BlaschkeSpec::new(vec![c(0.0, 1.0 - 1e-7)]).is_err());
        assert!(BlaschkeSpec::new(vec![]).is_err());
        assert!(BlaschkeSpec::new(vec![c(0.0, 1.0 - 2e-6)]).is_ok());
    }

    #[test]
    fn single_mobius_coefficients() {
        // (z − 1/2)/(1 − z/2) = −1/2 + Σ_{j≥1} (3/4)(1/2)^{j−1} z^j.
        let b = BlaschkeSpec::new(vec![c(0.5, 0.0)]).unwrap().as_circle_function(256).unwrap();
        assert!((b.coeff(0) - c(-0.5, 0.0)).norm() < 1e-15);
        for j in 1..40 {
            let expected = 0.75 * 0.5f64.powi(j - 1);
            assert!((b.coeff(j as i64) - c(expected, 0.0)).norm() < 1e-15, "j = {j}");
        }
        assert!(b.negative_energy() < 1e-10);
        let z = BlaschkeSpec::monomial(1).unwrap().as_circle_function(64).unwrap();
        assert!((z.coeff(1) - c(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(z.bandwidth(), 1);
    }

    #[test]
    fn partial_products() {
        let b = BlaschkeSpec::new(vec![c(0.0, 0.0), c(0.5, 0.0)]).unwrap();
        let b0 = b.partial_product(0, 64).unwrap();
        assert!(b0.samples().iter().all(|s| (s - c(1.0, 0.0)).norm() < 1e-15));
        assert_eq!(b.partial_product(2, 64).unwrap(), b.as_circle_function(64).unwrap());
        let b1 = b.partial_product(1, 64).unwrap();
        assert!((b1.coeff(1) - c(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(b1.bandwidth(), 1);
        assert!(matches!(b.partial_product(3, 64), Err(HardyError::Parameter(_))));
    }

    #[test]
    fn basis_elements_for_z_squared() {
        let b = BlaschkeSpec::monomial(2).unwrap();
        for (j, m, power) in [(0, 0, 0), (1, 0, 1), (0, 1, 2)] {
            let e = b.basis_element(BasisIndex { j, m }, 64).unwrap();
            let z = CircleFunction::monomial(power, 64).unwrap();
            assert!(e.minus(&z).unwrap().norm2() < 1e-15);
        }
        assert!(b.basis_element(BasisIndex { j: 2, m: 0 }, 64).is_err());
    }

    #[test]
    fn basis_element_with_nonzero_second_zero() {
        let b = BlaschkeSpec::new(vec![c(0.0, 0.0), c(0.5, 0.0)]).unwrap();
        let e = b.basis_element(BasisIndex { j: 1, m: 0 }, 256).unwrap();
        let expected = CircleFunction::from_fn(256, |z| 3f64.sqrt() / 2.0 * z / (1.0 - z / 2.0)).unwrap();
        assert!(e.minus(&expected).unwrap().sup_norm() < 1e-14);
        assert!((e.norm2() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn orthonormality_examples() {
        let n = 1024;
        assert!(BlaschkeSpec::monomial(2).unwrap().check_basis_orthonormality(4, n).unwrap() <= 1e-10);
        let b = BlaschkeSpec::new(vec![c(0.0, 0.0), c(0.5, 0.0)]).unwrap();
        assert!(b.check_basis_orthonormality(6, n).unwrap() <= 1e-8);
        let b = BlaschkeSpec::new(vec![c(0.0, 0.0), c(0.0, 0.3), c(-0.4, 0.0)]).unwrap();
        assert!(b.check_basis_orthonormality(4, n).unwrap() <= 1e-8);
    }

    #[test]
    fn compose_examples() {
        let n = 256;
        let z = CircleFunction::monomial(1, n).unwrap();
        let b = BlaschkeSpec::new(vec![c(0.2, 0.1), c(-0.3, 0.0)]).unwrap();
        let zb = compose(&z, &b).unwrap();
        assert!(zb.minus(&b.as_circle_function(n).unwrap()).unwrap().sup_norm() < 1e-14);
        let z2 = CircleFunction::monomial(2, n).unwrap();
        let z6 = compose(&z2, &BlaschkeSpec::monomial(3).unwrap()).unwrap();
        assert!(z6.minus(&CircleFunction::monomial(6, n).unwrap()).unwrap().sup_norm() < 1e-13);
        let zbar = CircleFunction::monomial(-1, n).unwrap();
        assert!(matches!(compose(&zbar, &b), Err(HardyError::Domain(_))));
        let wide = CircleFunction::monomial(40, n).unwrap();
        assert!(matches!(compose(&wide, &b), Err(HardyError::Size(_))));
    }

    #[test]
    fn json_shape() {
        let b: BlaschkeSpec = serde_json::from_str(r#"{"zeros": [[0, 0], [0.5, -0.25]]}"#).unwrap();
        assert_eq!(b.zeros()[1], c(0.5, -0.25));
        assert!(serde_json::from_str::<BlaschkeSpec>(r#"{"zeros": [[1.5, 0]]}"#).is_err());
    }
}
