//! Open-question explorations. These record measurements; they assert
//! nothing.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::decomp::{decompose_zn, rotate_any};
use crate::error::{HardyError, Result};
use crate::invariance::build_constrained;
use crate::invariance::verify_constrained;
use crate::norms::{check_rotational_symmetry, gauge_eval, GaugeNormSpec};
use crate::sampling::{random_constrained_spec, random_isometry, random_polynomial};
use crate::verify::constrained_truncation;

pub const EXPERIMENTS: &[(&str, &str)] = &[
    ("component-norms", "does α(z^i h_i) ≤ α(f) hold for norms that are not rotation-invariant?"),
    ("maximal-k", "which k admit the constrained construction for a given r?"),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentRow {
    pub trial: usize,
    pub component: usize,
    pub alpha_f: f64,
    pub alpha_component: f64,
    pub ratio: f64,
    /// `max(0, ratio − 1)`.
    pub excess: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentNormReport {
    pub spec: GaugeNormSpec,
    pub n: usize,
    pub seed: u64,
    /// Largest deviation `|α(f(ωz)) − α(f)|` over the trial inputs.
    pub rotation_spread: f64,
    pub max_excess: f64,
    pub rows: Vec<ComponentRow>,
}

/// Ratios `α(z^i h_i)/α(f)` over random polynomials `f`.
pub fn component_norms(spec: &GaugeNormSpec, n: usize, trials: usize, seed: u64, n_samples: usize) -> Result<ComponentNormReport> {
    spec.validate()?;
    if n == 0 {
        return Err(HardyError::Parameter("n must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let omega = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / n as f64);
    let mut rows = Vec::new();
    let (mut spread, mut max_excess): (f64, f64) = (0.0, 0.0);
    for trial in 0..trials {
        let deg = rng.random_range(0..=16);
        let f = random_polynomial(&mut rng, deg, n_samples)?;
        let alpha_f = gauge_eval(spec, &f)?;
        spread = spread.max(check_rotational_symmetry(spec, &f)?);
        for k in 1..n {
            let rotated = rotate_any(&f, omega.powu(k as u32));
            spread = spread.max((gauge_eval(spec, &rotated)? - alpha_f).abs());
        }
        let d = decompose_zn(&f, n)?;
        for (i, (h, z_i)) in d.components.iter().zip(&d.carriers).enumerate() {
            let alpha_component = gauge_eval(spec, &z_i.times(h)?)?;
            let ratio = alpha_component / alpha_f;
            let excess = (ratio - 1.0).max(0.0);
            max_excess = max_excess.max(excess);
            rows.push(ComponentRow { trial, component: i, alpha_f, alpha_component, ratio, excess });
        }
    }
    Ok(ComponentNormReport { spec: spec.clone(), n, seed, rotation_spread: spread, max_excess, rows })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaximalKRow {
    pub k: usize,
    pub accepted: bool,
    pub defect_b2: Option<f64>,
    pub defect_b3: Option<f64>,
    pub defect_b: Option<f64>,
    pub pass: Option<bool>,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaximalKReport {
    pub r: usize,
    pub n: usize,
    pub seed: u64,
    pub rows: Vec<MaximalKRow>,
}

/// Tries `k = 1..=2r` with `B = z^n`, `n = max(r, 2)`. `k = 2r` is expected
/// to be rejected: a `2r × 2r` unitary leaves no room for the construction.
pub fn maximal_k(r: usize, seed: u64, n_samples: usize) -> Result<MaximalKReport> {
    if r == 0 {
        return Err(HardyError::Parameter("r must be >= 1".into()));
    }
    let n = r.max(2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for k in 1..=2 * r {
        let spec = if k < 2 * r {
            random_constrained_spec(&mut rng, n, r, k, 0.3_f64.min((0.95 / k as f64).sqrt()), n_samples)?
        } else {
            // A full 2r × 2r unitary; the leading-row constraint cannot be met.
            let mut spec = random_constrained_spec(&mut rng, n, r, 1, 0.3, n_samples)?;
            let u = random_isometry(&mut rng, 2 * r, k);
            spec.beta = (0..k).map(|c| u.column(c).iter().copied().collect()).collect();
            spec
        };
        if let Err(e) = spec.validate() {
            rows.push(MaximalKRow { k, accepted: false, defect_b2: None, defect_b3: None, defect_b: None, pass: None, note: e.to_string() });
            continue;
        }
        let (d, k_max) = constrained_truncation(n, n_samples);
        let report = verify_constrained(&build_constrained(&spec, d, k_max)?, &spec)?;
        rows.push(MaximalKRow {
            k,
            accepted: true,
            defect_b2: Some(report.defect_b2),
            defect_b3: Some(report.defect_b3),
            defect_b: Some(report.defect_b),
            pass: Some(report.pass),
            note: String::new(),
        });
    }
    Ok(MaximalKReport { r, n, seed, rows })
}
