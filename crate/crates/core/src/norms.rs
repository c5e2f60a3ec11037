//! Gauge norms on grid functions.
//!
//! A gauge norm here is a norm α that depends only on |f|, satisfies
//! α(1) = 1 and dominates the L¹ norm. Built-in constructors cover the
//! p-norms, the sup norm, maxima and convex combinations of gauge norms,
//! and an arc-weighted splice that is generally not rotation invariant.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circlefn::{grid_point, CircleFunction};
use crate::error::{HardyError, Result};

/// Absolute tolerance for every axiom audit.
pub const AXIOM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", try_from = "NormFile")]
pub enum GaugeNormSpec {
    PNorm {
        p: f64,
    },
    SupNorm,
    MaxOf {
        parts: Vec<GaugeNormSpec>,
    },
    ConvexCombo {
        weights: Vec<f64>,
        parts: Vec<GaugeNormSpec>,
    },
    /// `renorm · (inside(f·χ_A) + outside(f·χ_{T∖A}))` for the arc
    /// `A = [arc[0], arc[1])` (radians). `renorm` is fixed by α(1) = 1 on
    /// the evaluation grid, see [`GaugeNormSpec::arc_renorm`].
    ArcWeighted {
        arc: [f64; 2],
        inside: Box<GaugeNormSpec>,
        outside: Box<GaugeNormSpec>,
    },
}

/// Flat reading form of a spec. Internally tagged enums buffer their input,
/// which loses arbitrary-precision numbers, so `kind` is dispatched by hand.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NormFile {
    kind: String,
    p: Option<f64>,
    parts: Option<Vec<GaugeNormSpec>>,
    weights: Option<Vec<f64>>,
    arc: Option<[f64; 2]>,
    inside: Option<Box<GaugeNormSpec>>,
    outside: Option<Box<GaugeNormSpec>>,
}

impl TryFrom<NormFile> for GaugeNormSpec {
    type Error = String;
    fn try_from(f: NormFile) -> std::result::Result<Self, String> {
        fn need<T>(v: Option<T>, kind: &str, field: &str) -> std::result::Result<T, String> {
            v.ok_or_else(|| format!("{kind} needs field '{field}'"))
        }
        let k = f.kind.as_str();
        Ok(match k {
            "p_norm" => GaugeNormSpec::PNorm { p: need(f.p, k, "p")? },
            "sup_norm" => GaugeNormSpec::SupNorm,
            "max_of" => GaugeNormSpec::MaxOf { parts: need(f.parts, k, "parts")? },
            "convex_combo" => GaugeNormSpec::ConvexCombo {
                weights: need(f.weights, k, "weights")?,
                parts: need(f.parts, k, "parts")?,
            },
            "arc_weighted" => GaugeNormSpec::ArcWeighted {
                arc: need(f.arc, k, "arc")?,
                inside: need(f.inside, k, "inside")?,
                outside: need(f.outside, k, "outside")?,
            },
            other => return Err(format!("unknown norm kind '{other}'")),
        })
    }
}

impl GaugeNormSpec {
    pub fn p_norm(p: f64) -> Result<Self> {
        let spec = GaugeNormSpec::PNorm { p };
        spec.validate()?;
        Ok(spec)
    }

    pub fn max_of(parts: Vec<GaugeNormSpec>) -> Result<Self> {
        let spec = GaugeNormSpec::MaxOf { parts };
        spec.validate()?;
        Ok(spec)
    }

    pub fn convex_combo(weights: Vec<f64>, parts: Vec<GaugeNormSpec>) -> Result<Self> {
        let spec = GaugeNormSpec::ConvexCombo { weights, parts };
        spec.validate()?;
        Ok(spec)
    }

    pub fn arc_weighted(arc: [f64; 2], inside: GaugeNormSpec, outside: GaugeNormSpec) -> Result<Self> {
        let spec = GaugeNormSpec::ArcWeighted {
            arc,
            inside: Box::new(inside),
            outside: Box::new(outside),
        };
        spec.validate()?;
        Ok(spec)
    }

    /// The specs every audit in this crate is expected to pass.
    pub fn builtins() -> Vec<GaugeNormSpec> {
        use GaugeNormSpec::*;
        vec![
            PNorm { p: 1.0 },
            PNorm { p: 1.5 },
            PNorm { p: 2.0 },
            PNorm { p: 3.0 },
            PNorm { p: 4.0 },
            SupNorm,
            MaxOf {
                parts: vec![PNorm { p: 1.0 }, PNorm { p: 2.0 }],
            },
            ConvexCombo {
                weights: vec![0.25, 0.75],
                parts: vec![PNorm { p: 3.0 }, SupNorm],
            },
            ArcWeighted {
                arc: [0.0, PI],
                inside: Box::new(PNorm { p: 2.0 }),
                outside: Box::new(PNorm { p: 2.0 }),
            },
        ]
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            GaugeNormSpec::PNorm { p } => {
                if !(p.is_finite() && *p >= 1.0) {
                    return Err(HardyError::Parameter(format!(
                        "p-norm exponent must be a finite p >= 1, got {p}"
                    )));
                }
            }
            GaugeNormSpec::SupNorm => {}
            GaugeNormSpec::MaxOf { parts } => {
                if parts.is_empty() {
                    return Err(HardyError::Parameter("max_of needs at least one part".into()));
                }
                parts.iter().try_for_each(|p| p.validate())?;
            }
            GaugeNormSpec::ConvexCombo { weights, parts } => {
                if parts.is_empty() || weights.len() != parts.len() {
                    return Err(HardyError::Parameter(format!(
                        "convex_combo needs matching nonempty weights and parts ({} vs {})",
                        weights.len(),
                        parts.len()
                    )));
                }
                let total: f64 = weights.iter().sum();
                if weights.iter().any(|w| !(*w >= 0.0)) || (total - 1.0).abs() > 1e-12 {
                    return Err(HardyError::Parameter(format!(
                        "convex_combo weights must be nonnegative and sum to 1 (sum = {total})"
                    )));
                }
                parts.iter().try_for_each(|p| p.validate())?;
            }
            GaugeNormSpec::ArcWeighted { arc, inside, outside } => {
                let len = arc[1] - arc[0];
                if !(arc[0].is_finite() && len > 0.0 && len <= 2.0 * PI) {
                    return Err(HardyError::Parameter(format!(
                        "arc [{}, {}) must have length in (0, 2π]",
                        arc[0], arc[1]
                    )));
                }
                inside.validate()?;
                outside.validate()?;
            }
        }
        Ok(())
    }

    /// Normalization constant of an arc-weighted spec on an `n`-point grid.
    pub fn arc_renorm(&self, n: usize) -> Option<f64> {
        match self {
            GaugeNormSpec::ArcWeighted { arc, inside, outside } => {
                let mask = arc_mask(*arc, n);
                let on: Vec<f64> = mask.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
                let off: Vec<f64> = on.iter().map(|v| 1.0 - v).collect();
                Some(1.0 / (inside.eval_modulus(&on) + outside.eval_modulus(&off)))
            }
            _ => None,
        }
    }

    /// Evaluates on sampled moduli `|f(z_k)|`.
    pub fn eval_modulus(&self, m: &[f64]) -> f64 {
        let n = m.len() as f64;
        match self {
            GaugeNormSpec::PNorm { p } => {
                let peak = m.iter().copied().fold(0.0, f64::max);
                if peak == 0.0 {
                    return 0.0;
                }
                let mean = m.iter().map(|v| (v / peak).powf(*p)).sum::<f64>() / n;
                peak * mean.powf(1.0 / p)
            }
            GaugeNormSpec::SupNorm => m.iter().copied().fold(0.0, f64::max),
            GaugeNormSpec::MaxOf { parts } => parts
                .iter()
                .map(|s| s.eval_modulus(m))
                .fold(0.0, f64::max),
            GaugeNormSpec::ConvexCombo { weights, parts } => weights
                .iter()
                .zip(parts)
                .map(|(w, s)| w * s.eval_modulus(m))
                .sum(),
            GaugeNormSpec::ArcWeighted { arc, inside, outside } => {
                let mask = arc_mask(*arc, m.len());
                let on: Vec<f64> = m.iter().zip(&mask).map(|(v, &b)| if b { *v } else { 0.0 }).collect();
                let off: Vec<f64> = m.iter().zip(&mask).map(|(v, &b)| if b { 0.0 } else { *v }).collect();
                let renorm = self.arc_renorm(m.len()).expect("arc-weighted");
                renorm * (inside.eval_modulus(&on) + outside.eval_modulus(&off))
            }
        }
    }

    /// The conjugate norm when it has a closed form (p-norms and sup).
    pub fn exact_dual(&self, h: &CircleFunction) -> Option<f64> {
        let m = moduli(h);
        match self {
            GaugeNormSpec::PNorm { p } if *p == 1.0 => Some(GaugeNormSpec::SupNorm.eval_modulus(&m)),
            GaugeNormSpec::PNorm { p } => {
                let q = p / (p - 1.0);
                Some(GaugeNormSpec::PNorm { p: q }.eval_modulus(&m))
            }
            GaugeNormSpec::SupNorm => Some(GaugeNormSpec::PNorm { p: 1.0 }.eval_modulus(&m)),
            _ => None,
        }
    }

    fn arcs(&self, out: &mut Vec<[f64; 2]>) {
        match self {
            GaugeNormSpec::MaxOf { parts } | GaugeNormSpec::ConvexCombo { parts, .. } => {
                parts.iter().for_each(|p| p.arcs(out))
            }
            GaugeNormSpec::ArcWeighted { arc, inside, outside } => {
                out.push(*arc);
                inside.arcs(out);
                outside.arcs(out);
            }
            _ => {}
        }
    }
}

/// Grid points `θ_k = 2πk/N` lying in `[a, b)` modulo 2π.
pub fn arc_mask(arc: [f64; 2], n: usize) -> Vec<bool> {
    let len = arc[1] - arc[0];
    (0..n)
        .map(|k| {
            let theta = 2.0 * PI * k as f64 / n as f64;
            (theta - arc[0]).rem_euclid(2.0 * PI) < len
        })
        .collect()
}

fn moduli(f: &CircleFunction) -> Vec<f64> {
    f.samples().iter().map(|s| s.norm()).collect()
}

fn l1(m: &[f64]) -> f64 {
    m.iter().sum::<f64>() / m.len() as f64
}

pub fn gauge_eval(spec: &GaugeNormSpec, f: &CircleFunction) -> Result<f64> {
    spec.validate()?;
    Ok(spec.eval_modulus(&moduli(f)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomReport {
    pub trials: usize,
    /// |α(1) − 1|.
    pub normalization: f64,
    /// Worst |α(f) − α(|f|)| and |α(f) − α(e^{iφ} f)|.
    pub phase_invariance: f64,
    /// Worst max(0, ‖f‖₁ − α(f)).
    pub l1_domination: f64,
    /// Worst max(0, α(f + g) − α(f) − α(g)).
    pub triangle: f64,
    /// Worst |α(cf) − |c| α(f)|.
    pub homogeneity: f64,
    pub failed: Vec<String>,
    pub pass: bool,
}

/// A bounded test function on the grid drawn from one of several families:
/// trigonometric polynomials, scaled arc indicators, step functions and
/// raw bounded samples.
pub fn random_bounded(rng: &mut ChaCha8Rng, n: usize) -> CircleFunction {
    let family = rng.random_range(0..4);
    let samples: Vec<Complex64> = match family {
        0 => {
            let deg = rng.random_range(0..9i64);
            let terms: Vec<(i64, Complex64)> = (-deg..=deg)
                .map(|j| (j, Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))))
                .collect();
            (0..n)
                .map(|k| {
                    let z = grid_point(k, n);
                    terms.iter().map(|(j, a)| a * z.powi(*j as i32)).sum::<Complex64>()
                        / (2 * deg + 1) as f64
                })
                .collect()
        }
        1 => {
            let start = rng.random_range(0.0..2.0 * PI);
            let len = rng.random_range(0.0..2.0 * PI);
            let amp = Complex64::from_polar(rng.random_range(0.1..2.0), rng.random_range(0.0..2.0 * PI));
            arc_mask([start, start + len], n)
                .into_iter()
                .map(|b| if b { amp } else { Complex64::new(0.0, 0.0) })
                .collect()
        }
        2 => {
            let pieces = rng.random_range(2..9);
            let levels: Vec<Complex64> = (0..pieces)
                .map(|_| Complex64::from_polar(rng.random_range(0.0..1.5), rng.random_range(0.0..2.0 * PI)))
                .collect();
            (0..n).map(|k| levels[k * pieces / n]).collect()
        }
        _ => (0..n)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect(),
    };
    CircleFunction::from_samples(samples).expect("grid size is a power of two")
}

/// Randomized audit of the gauge-norm axioms plus the norm axioms.
pub fn check_gauge_axioms(spec: &GaugeNormSpec, trials: usize, seed: u64, n: usize) -> Result<AxiomReport> {
    spec.validate()?;
    if trials == 0 {
        return Err(HardyError::Parameter("trials must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alpha = |m: &[f64]| spec.eval_modulus(m);

    let normalization = (alpha(&vec![1.0; n]) - 1.0).abs();
    let mut phase_invariance: f64 = 0.0;
    let mut l1_domination: f64 = 0.0;
    let mut triangle: f64 = 0.0;
    let mut homogeneity: f64 = 0.0;

    let mut probe = |f: &CircleFunction, g: &CircleFunction, rng: &mut ChaCha8Rng| {
        let mf = moduli(f);
        let af = alpha(&mf);
        let phase = Complex64::from_polar(1.0, rng.random_range(0.0..2.0 * PI));
        let rotated: Vec<f64> = f.samples().iter().map(|s| (s * phase).norm()).collect();
        phase_invariance = phase_invariance.max((af - alpha(&rotated)).abs());
        let abs: Vec<f64> = mf.iter().map(|v| v.abs()).collect();
        phase_invariance = phase_invariance.max((af - alpha(&abs)).abs());
        l1_domination = l1_domination.max(l1(&mf) - af);
        let sum: Vec<f64> = f.samples().iter().zip(g.samples()).map(|(a, b)| (a + b).norm()).collect();
        triangle = triangle.max(alpha(&sum) - af - alpha(&moduli(g)));
        let c = Complex64::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
        let scaled: Vec<f64> = mf.iter().map(|v| v * c.norm()).collect();
        homogeneity = homogeneity.max((alpha(&scaled) - c.norm() * af).abs());
    };

    // Arc indicators of the spec itself and of dyadic arcs are the
    // extremal functions for L¹ domination.
    let mut arcs = Vec::new();
    spec.arcs(&mut arcs);
    for k in 0..8 {
        let a = 2.0 * PI * k as f64 / 8.0;
        arcs.push([a, a + PI / 4.0]);
        arcs.push([a, a + PI]);
    }
    let indicator = |mask: Vec<bool>| {
        CircleFunction::from_samples(
            mask.into_iter()
                .map(|b| Complex64::new(if b { 1.0 } else { 0.0 }, 0.0))
                .collect(),
        )
        .expect("grid size is a power of two")
    };
    for arc in arcs {
        let inside = indicator(arc_mask(arc, n));
        let outside = indicator(arc_mask(arc, n).into_iter().map(|b| !b).collect());
        probe(&inside, &outside, &mut rng);
        probe(&outside, &inside, &mut rng);
    }
    for _ in 0..trials {
        let f = random_bounded(&mut rng, n);
        let g = random_bounded(&mut rng, n);
        probe(&f, &g, &mut rng);
    }

    let mut failed = Vec::new();
    for (name, v) in [
        ("normalization", normalization),
        ("phase_invariance", phase_invariance),
        ("l1_domination", l1_domination),
        ("triangle", triangle),
        ("homogeneity", homogeneity),
    ] {
        if v > AXIOM_TOL {
            failed.push(name.to_string());
        }
    }
    Ok(AxiomReport {
        trials,
        normalization,
        phase_invariance,
        l1_domination: l1_domination.max(0.0),
        triangle: triangle.max(0.0),
        homogeneity,
        pass: failed.is_empty(),
        failed,
    })
}

/// Largest change of α(f) over all grid rotations `f(w̄z)`.
pub fn check_rotational_symmetry(spec: &GaugeNormSpec, f: &CircleFunction) -> Result<f64> {
    spec.validate()?;
    let m = moduli(f);
    let n = m.len();
    let base = spec.eval_modulus(&m);
    let mut rotated = vec![0.0; n];
    let mut worst: f64 = 0.0;
    for shift in 1..n {
        for k in 0..n {
            rotated[k] = m[(k + shift) % n];
        }
        worst = worst.max((spec.eval_modulus(&rotated) - base).abs());
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContinuityProfile {
    /// Arc measures `2^{-k}`, k = 1..log₂N−2.
    pub measures: Vec<f64>,
    /// α(χ_E) for the arcs `[0, 2π·2^{-k})`.
    pub values: Vec<f64>,
    pub monotone: bool,
    pub pass: bool,
}

/// Evaluates α on shrinking arc indicators; passes when the values strictly
/// decrease and end below 0.1.
pub fn check_continuity(spec: &GaugeNormSpec, n: usize) -> Result<ContinuityProfile> {
    spec.validate()?;
    let levels = n.trailing_zeros() as usize;
    let mut measures = Vec::new();
    let mut values = Vec::new();
    for k in 1..levels.saturating_sub(1) {
        let measure = 0.5f64.powi(k as i32);
        let mask = arc_mask([0.0, 2.0 * PI * measure], n);
        let m: Vec<f64> = mask.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
        measures.push(measure);
        values.push(spec.eval_modulus(&m));
    }
    let monotone = values.windows(2).all(|w| w[1] < w[0]);
    let pass = monotone && values.last().is_some_and(|v| *v < 0.1);
    Ok(ContinuityProfile {
        measures,
        values,
        monotone,
        pass,
    })
}

/// Certified lower bound for α′(h) = sup{∫|fh| dm : α(f) ≤ 1}.
///
/// Every candidate is a nonnegative modulus profile `s`, scored as
/// `∫ s|h| dm / α(s)`; phase alignment with h is implicit. Candidates are
/// the Hölder extremals `|h|^t`, superlevel-set indicators of |h|, and
/// random simple functions, `budget` in total.
pub fn dual_norm_estimate(spec: &GaugeNormSpec, h: &CircleFunction, budget: usize, seed: u64) -> Result<f64> {
    spec.validate()?;
    if budget == 0 {
        return Err(HardyError::Parameter("budget must be >= 1".into()));
    }
    let mh = moduli(h);
    let n = mh.len();
    let score = |s: &[f64]| {
        let a = spec.eval_modulus(s);
        if a <= 0.0 {
            return 0.0;
        }
        s.iter().zip(&mh).map(|(x, y)| x * y).sum::<f64>() / n as f64 / a
    };

    let mut candidates: Vec<Vec<f64>> = Vec::new();
    if let GaugeNormSpec::PNorm { p } = spec {
        if *p > 1.0 {
            let t = 1.0 / (p - 1.0);
            candidates.push(mh.iter().map(|v| v.powf(t)).collect());
        }
    }
    candidates.push(vec![1.0; n]);
    let peak = mh.iter().copied().fold(0.0, f64::max);
    for q in [1.0, 0.999, 0.99, 0.9, 0.75, 0.5] {
        candidates.push(mh.iter().map(|v| if *v >= q * peak { 1.0 } else { 0.0 }).collect());
    }
    for t in [0.25, 0.5, 1.0, 2.0, 4.0, 8.0] {
        candidates.push(mh.iter().map(|v| v.powf(t)).collect());
    }

    let mut best = 0.0f64;
    for s in candidates.iter().take(budget) {
        best = best.max(score(s));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in candidates.len().min(budget)..budget {
        let pieces = rng.random_range(1..17);
        let offset = rng.random_range(0..n);
        let levels: Vec<f64> = (0..pieces).map(|_| rng.random_range(0.0..1.0)).collect();
        let s: Vec<f64> = (0..n).map(|k| levels[((k + offset) % n) * pieces / n]).collect();
        best = best.max(score(&s));
    }
    Ok(best)
}

/// `‖fh‖₁ − α(f)·dual_value`; nonpositive when Hölder holds.
pub fn holder_gap(f: &CircleFunction, h: &CircleFunction, spec: &GaugeNormSpec, dual_value: f64) -> Result<f64> {
    let lhs = l1(&f.samples().iter().zip(h.samples()).map(|(a, b)| (a * b).norm()).collect::<Vec<_>>());
    Ok(lhs - gauge_eval(spec, f)? * dual_value)
}

/// `‖fh‖₁ ≤ α(f)·dual_value + 1e−9`.
pub fn holder_check(f: &CircleFunction, h: &CircleFunction, spec: &GaugeNormSpec, dual_value: f64) -> Result<bool> {
    Ok(holder_gap(f, h, spec, dual_value)? <= AXIOM_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn gauge_eval_examples() {
        let n = 1024;
        let z = CircleFunction::monomial(1, n).unwrap();
        assert!((gauge_eval(&GaugeNormSpec::PNorm { p: 2.0 }, &z).unwrap() - 1.0).abs() < 1e-14);
        let one = CircleFunction::constant(c(1.0), n).unwrap();
        let mx = GaugeNormSpec::max_of(vec![GaugeNormSpec::PNorm { p: 1.0 }, GaugeNormSpec::PNorm { p: 2.0 }]).unwrap();
        assert!((gauge_eval(&mx, &one).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn l1_of_one_plus_z() {
        // Oracle: (2/π)∫₀^π cos(θ/2) dθ = 4/π. The grid rule for this
        // periodic integrand with a kink converges at O(N^-2).
        let f = CircleFunction::from_taylor(&[c(1.0), c(1.0)], 1024).unwrap();
        let v = gauge_eval(&GaugeNormSpec::PNorm { p: 1.0 }, &f).unwrap();
        assert!((v - 4.0 / PI).abs() < 1e-5, "{v}");
    }

    #[test]
    fn p_below_one_is_rejected() {
        let f = CircleFunction::constant(c(1.0), 8).unwrap();
        assert!(matches!(
            gauge_eval(&GaugeNormSpec::PNorm { p: 0.5 }, &f),
            Err(HardyError::Parameter(_))
        ));
        assert!(GaugeNormSpec::convex_combo(vec![0.5, 0.6], vec![GaugeNormSpec::SupNorm, GaugeNormSpec::SupNorm]).is_err());
    }

    #[test]
    fn axioms_pass_for_p_norms() {
        for p in [1.0, 2.0] {
            let r = check_gauge_axioms(&GaugeNormSpec::PNorm { p }, 200, 7, 256).unwrap();
            assert!(r.pass, "p = {p}: {r:?}");
        }
    }

    #[test]
    fn quarter_arc_splice_fails_l1_domination() {
        // Off the arc, α(χ) = renorm·√(3/4) ≈ 0.634 < 3/4 = ‖χ‖₁.
        let spec = GaugeNormSpec::arc_weighted(
            [0.0, PI / 2.0],
            GaugeNormSpec::PNorm { p: 2.0 },
            GaugeNormSpec::PNorm { p: 2.0 },
        )
        .unwrap();
        let r = check_gauge_axioms(&spec, 50, 3, 256).unwrap();
        assert!(!r.pass);
        assert_eq!(r.failed, vec!["l1_domination".to_string()]);
        let expected = 0.75 - 0.75f64.sqrt() / (0.5 + 0.75f64.sqrt());
        assert!((r.l1_domination - expected).abs() < 1e-12);
    }

    #[test]
    fn rotational_symmetry_examples() {
        let n = 256;
        let f = CircleFunction::from_taylor(&[c(1.0), c(0.3), c(-0.2)], n).unwrap();
        assert!(check_rotational_symmetry(&GaugeNormSpec::PNorm { p: 3.0 }, &f).unwrap() < 1e-13);
        assert!(check_rotational_symmetry(&GaugeNormSpec::SupNorm, &f).unwrap() == 0.0);
        // A bump sitting inside the half arc, then straddling its boundary.
        let bump = CircleFunction::from_samples(
            arc_mask([PI / 4.0, PI / 2.0], n)
                .into_iter()
                .map(|b| c(if b { 1.0 } else { 0.0 }))
                .collect(),
        )
        .unwrap();
        let spec = GaugeNormSpec::builtins().pop().unwrap();
        assert!(check_rotational_symmetry(&spec, &bump).unwrap() > 0.01);
    }

    #[test]
    fn continuity_profiles() {
        let n = 1024;
        let p2 = check_continuity(&GaugeNormSpec::PNorm { p: 2.0 }, n).unwrap();
        assert!(p2.pass);
        for (m, v) in p2.measures.iter().zip(&p2.values) {
            assert!((v - m.sqrt()).abs() < 1e-14);
        }
        let p1 = check_continuity(&GaugeNormSpec::PNorm { p: 1.0 }, n).unwrap();
        assert!(p1.pass);
        assert!(p1.measures.iter().zip(&p1.values).all(|(m, v)| (m - v).abs() < 1e-14));
        let sup = check_continuity(&GaugeNormSpec::SupNorm, n).unwrap();
        assert!(!sup.pass);
        assert!(sup.values.iter().all(|v| *v == 1.0));
        assert_eq!(sup.values.len(), 8);
    }

    #[test]
    fn dual_estimates() {
        let n = 512;
        let one = CircleFunction::constant(c(1.0), n).unwrap();
        let z = CircleFunction::monomial(1, n).unwrap();
        let p2 = GaugeNormSpec::PNorm { p: 2.0 };
        assert!((dual_norm_estimate(&p2, &one, 10, 1).unwrap() - 1.0).abs() < 1e-12);
        assert!(dual_norm_estimate(&p2, &z, 10, 1).unwrap() >= 1.0 - 1e-6);
        let three = CircleFunction::constant(c(3.0), n).unwrap();
        let est = dual_norm_estimate(&GaugeNormSpec::PNorm { p: 1.0 }, &three, 10, 1).unwrap();
        assert!(est >= 3.0 - 1e-6);
    }

    #[test]
    fn holder_examples() {
        let n = 1024;
        let one = CircleFunction::constant(c(1.0), n).unwrap();
        let p2 = GaugeNormSpec::PNorm { p: 2.0 };
        assert!(holder_check(&one, &one, &p2, 1.0).unwrap());
        // ‖(1+z)²‖₁ = ∫|1+e^{iθ}|² dm = 2 = √2·√2, equality case.
        let f = CircleFunction::from_taylor(&[c(1.0), c(1.0)], n).unwrap();
        let dual = p2.exact_dual(&f).unwrap();
        assert!((dual - 2f64.sqrt()).abs() < 1e-14);
        assert!(holder_check(&f, &f, &p2, dual).unwrap());
        assert!(!holder_check(&f, &f, &p2, 0.99 * dual).unwrap());
    }
}
