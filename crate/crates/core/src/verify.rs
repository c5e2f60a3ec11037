//! Seeded verification suites. Each suite draws its own random inputs from
//! the seed, runs the corresponding checks and returns a report whose
//! serialized form is byte-identical across runs.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::blaschke::BlaschkeSpec;
use crate::circlefn::{inner_product, CircleFunction, DEFAULT_N};
use crate::decomp::{cesaro_error, decompose_blaschke, decompose_zn};
use crate::error::{HardyError, Result};
use crate::factor::{inner_outer, is_outer, n_inner_outer_factorize, NFactorOptions};
use crate::invariance::{build_constrained, span_invariant, verify_constrained, wandering_basis, ConstrainedSpec};
use crate::norms::{gauge_eval, holder_gap, random_bounded, GaugeNormSpec};
use crate::sampling::{random_blaschke, random_constrained_spec, random_in_disk, random_inner, random_polynomial, random_unimodular};

/// Suite ids and what they check.
pub const REGISTRY: &[(&str, &str)] = &[
    ("blaschke-basis", "orthonormality of the e_jm family for random finite Blaschke products"),
    ("blaschke-decomposition", "recomposition and Pythagoras for the split along e_j0·H²(B)"),
    ("zn-decomposition", "roots-of-unity averaging splits f into z^i·H²(z^n) parts exactly"),
    ("holder", "‖fh‖₁ ≤ α(f)α′(h) for p-norms with exact conjugates"),
    ("cesaro", "Fejér-rate convergence of Cesàro means under rotation-invariant norms"),
    ("beurling", "the wandering vector of [J·H²] recovers an inner J"),
    ("n-inner-outer", "f = Σ J_i f_i with J_i jointly z^n-inner and f_i n-outer"),
    ("constrained", "spaces ⟨φ⟩ ⊕ B²[J H²(B)] are B²-, B³- but not B-invariant"),
    ("inner-outer", "classical inner–outer factorization and the Jensen gap"),
    ("isometry", "multiplication by a finite Blaschke product preserves gauge norms"),
];

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub n_samples: usize,
    pub seed: u64,
    /// Restricts suites that sweep over `n` to a single value.
    pub n: Option<usize>,
    /// Threshold overrides keyed by check name.
    pub tol: BTreeMap<String, f64>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            n_samples: DEFAULT_N,
            seed: 0,
            n: None,
            tol: BTreeMap::new(),
        }
    }
}

impl SuiteConfig {
    fn threshold(&self, name: &str, default: f64) -> f64 {
        self.tol.get(name).copied().unwrap_or(default)
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub relation: Relation,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub seed: u64,
    pub n_samples: usize,
    pub checks: Vec<Check>,
    pub pass: bool,
    /// Not serialized: it would break byte-identical reports.
    #[serde(skip)]
    pub wall_time: Duration,
}

struct Checks<'a> {
    cfg: &'a SuiteConfig,
    out: Vec<Check>,
}

impl<'a> Checks<'a> {
    fn new(cfg: &'a SuiteConfig) -> Self {
        Checks { cfg, out: Vec::new() }
    }

    fn at_most(&mut self, name: &str, measured: f64, default: f64) {
        let threshold = self.cfg.threshold(name, default);
        self.out.push(Check {
            name: name.into(),
            measured,
            relation: Relation::AtMost,
            threshold,
            pass: measured <= threshold,
        });
    }

    fn at_least(&mut self, name: &str, measured: f64, default: f64) {
        let threshold = self.cfg.threshold(name, default);
        self.out.push(Check {
            name: name.into(),
            measured,
            relation: Relation::AtLeast,
            threshold,
            pass: measured >= threshold,
        });
    }
}

pub fn suite_ids() -> Vec<&'static str> {
    REGISTRY.iter().map(|(id, _)| *id).collect()
}

pub fn run_suite(id: &str, cfg: &SuiteConfig) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut c = Checks::new(cfg);
    match id {
        "blaschke-basis" => blaschke_basis(&mut c)?,
        "blaschke-decomposition" => blaschke_decomposition(&mut c)?,
        "zn-decomposition" => zn_decomposition(&mut c)?,
        "holder" => holder(&mut c)?,
        "cesaro" => cesaro(&mut c)?,
        "beurling" => beurling(&mut c)?,
        "n-inner-outer" => n_inner_outer(&mut c)?,
        "constrained" => constrained(&mut c)?,
        "inner-outer" => classical_inner_outer(&mut c)?,
        "isometry" => isometry(&mut c)?,
        other => {
            return Err(HardyError::Parameter(format!(
                "unknown suite '{other}'; known suites: {}",
                suite_ids().join(", ")
            )))
        }
    }
    let pass = c.out.iter().all(|k| k.pass);
    Ok(VerificationReport {
        suite: id.into(),
        seed: cfg.seed,
        n_samples: cfg.n_samples,
        checks: c.out,
        pass,
        wall_time: start.elapsed(),
    })
}

/// Random finite Blaschke products used by the two Blaschke suites.
fn blaschke_specs(rng: &mut ChaCha8Rng, zero_first: bool) -> Result<Vec<BlaschkeSpec>> {
    (0..20)
        .map(|_| {
            let n = rng.random_range(1..=4);
            random_blaschke(rng, n, 0.8, zero_first)
        })
        .collect()
}

fn blaschke_basis(c: &mut Checks) -> Result<()> {
    let n_samples = c.cfg.n_samples;
    let mut rng = c.cfg.rng(1);
    let mut worst: f64 = 0.0;
    for spec in blaschke_specs(&mut rng, false)? {
        worst = worst.max(spec.check_basis_orthonormality(6, n_samples)?);
    }
    c.at_most("gram deviation", worst, 1e-8);
    Ok(())
}

fn blaschke_decomposition(c: &mut Checks) -> Result<()> {
    let n_samples = c.cfg.n_samples;
    let m_max = 6;
    let mut rng = c.cfg.rng(2);
    let (mut residual, mut pythagoras): (f64, f64) = (0.0, 0.0);
    // The truncated expansion is exact for polynomials of degree ≤ m_max
    // when B(0) = 0.
    for spec in blaschke_specs(&mut rng, true)? {
        for _ in 0..50 {
            let deg = rng.random_range(0..=m_max);
            let f = random_polynomial(&mut rng, deg, n_samples)?;
            let d = decompose_blaschke(&f, &spec, m_max)?;
            residual = residual.max(d.residual);
            let parts: f64 = d.summand_energies()?.iter().sum();
            pythagoras = pythagoras.max((f.norm2().powi(2) - parts).abs());
        }
    }
    c.at_most("recomposition residual", residual, 1e-8);
    c.at_most("pythagoras gap", pythagoras, 1e-9);
    Ok(())
}

fn zn_decomposition(c: &mut Checks) -> Result<()> {
    let n_samples = c.cfg.n_samples;
    let ns: Vec<usize> = match c.cfg.n {
        Some(n) => vec![n],
        None => (1..=8).filter(|n| n_samples.is_multiple_of(*n)).collect(),
    };
    let mut rng = c.cfg.rng(3);
    let (mut residual, mut averaging, mut off_support): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for &n in &ns {
        for _ in 0..100 {
            let deg = rng.random_range(0..=256.min(n_samples / 2 - 1));
            let f = random_polynomial(&mut rng, deg, n_samples)?;
            let d = decompose_zn(&f, n)?;
            residual = residual.max(d.residual);
            averaging = averaging.max(d.averaging_defect.unwrap_or(f64::INFINITY));
            for h in &d.components {
                for (j, a) in h.nonzero_coeffs(0.0) {
                    if j.rem_euclid(n as i64) != 0 {
                        off_support = off_support.max(a.norm());
                    }
                }
            }
        }
    }
    c.at_most("recomposition residual", residual, 1e-12);
    c.at_most("averaging defect", averaging, 1e-12);
    c.at_most("off-support coefficient", off_support, 0.0);
    Ok(())
}

fn holder(c: &mut Checks) -> Result<()> {
    let n_samples = c.cfg.n_samples;
    let mut rng = c.cfg.rng(4);
    let mut worst = f64::NEG_INFINITY;
    for p in [1.0, 1.5, 2.0, 3.0] {
        let spec = GaugeNormSpec::p_norm(p)?;
        for _ in 0..1000 {
            let f = random_bounded(&mut rng, n_samples);
            let h = random_bounded(&mut rng, n_samples);
            let dual = spec.exact_dual(&h).expect("p-norms have closed-form duals");
            worst = worst.max(holder_gap(&f, &h, &spec, dual)?);
        }
    }
    c.at_most("holder gap", worst, 1e-9);
    Ok(())
}

/// `l` values probed for bandwidth `b`: dense up to `4b`, then geometric,
/// always ending at `1000b`.
pub fn cesaro_probe_points(b: usize) -> Vec<usize> {
    let mut ls: Vec<usize> = (0..=4 * b).collect();
    let mut l = 4 * b + 1;
    while l < 1000 * b {
        ls.push(l);
        l = (l as f64 * 1.25).ceil() as usize;
    }
    ls.push(1000 * b);
    ls
}

fn cesaro(c: &mut Checks) -> Result<()> {
    let n_samples = c.cfg.n_samples;
    let mut rng = c.cfg.rng(5);
    let specs = [
        GaugeNormSpec::PNorm { p: 1.0 },
        GaugeNormSpec::PNorm { p: 2.0 },
        GaugeNormSpec::PNorm { p: 4.0 },
        GaugeNormSpec::SupNorm,
    ];
    let (mut excess, mut final_err) = (f64::NEG_INFINITY, 0.0f64);
    for spec in &specs {
        for _ in 0..10 {
            let b = rng.random_range(1..=8);
            let f = random_polynomial(&mut rng, b, n_samples)?;
            // ‖f‖ is the Wiener norm Σ|a_j|; normalize it to 1.
            let f = f.scaled(Complex64::new(1.0 / f.coefficient_l1(), 0.0));
            for l in cesaro_probe_points(b) {
                let err = cesaro_error(&f, spec, l)?;
                excess = excess.max(err - b as f64 / (l as f64 + 1.0));
                if l == 1000 * b {
                    final_err = final_err.max(err);
                }
            }
        }
    }
    c.at_most("excess over b/(l+1)", excess, 1e-12);
    c.at_most("error at l = 1000b", final_err, 1e-3);
    Ok(())
}

/// Distance from `a` to the unimodular multiples of `b`.
pub fn distance_mod_phase(a: &CircleFunction, b: &CircleFunction) -> Result<f64> {
    let ip = inner_product(a, b)?;
    let phase = if ip.norm() > 0.0 { ip / ip.norm() } else { Complex64::new(1.0, 0.0) };
    Ok(a.minus(&b.scaled(phase))?.norm2())
}

fn beurling(c: &mut Checks) -> Result<()> {
    let n_samples = c.cfg.n_samples;
    let mut rng = c.cfg.rng(6);
    let z = CircleFunction::monomial(1, n_samples)?;
    let d = 240.min(n_samples / 2 - 1);
    let (mut err, mut rank_gap): (f64, f64) = (0.0, 0.0);
    for _ in 0..20 {
        let factors = rng.random_range(1..=3);
        let j = random_inner(&mut rng, factors, 0.7, n_samples)?;
        let space = span_invariant(std::slice::from_ref(&j), &z, 24, d)?;
        let w = wandering_basis(&space, &z)?;
        rank_gap = rank_gap.max((w.len() as f64 - 1.0).abs());
        err = err.max(distance_mod_phase(&w[0], &j)?);
    }
    c.at_most("wandering dimension - 1", rank_gap, 0.0);
    c.at_most("recovery error", err, 1e-6);
    Ok(())
}

fn n_inner_outer(c: &mut Checks) -> Result<()> {
    let n_samples = c.cfg.n_samples;
    let ns = c.cfg.n.map(|n| vec![n]).unwrap_or_else(|| vec![2, 3, 4]);
    let mut rng = c.cfg.rng(7);
    let (mut residual, mut gram, mut parseval, mut rank_excess): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, f64::NEG_INFINITY);
    let (mut non_outer, mut failures) = (0usize, 0usize);
    for &n in &ns {
        for _ in 0..50 {
            let deg = rng.random_range(0..=24);
            let f = random_polynomial(&mut rng, deg, n_samples)?;
            match n_inner_outer_factorize(&f, n, &NFactorOptions::default()) {
                Ok(b) => {
                    residual = residual.max(b.residual);
                    gram = gram.max(b.gram_defect);
                    rank_excess = rank_excess.max(b.r as f64 - n as f64);
                    let parts: f64 = b.outers.iter().map(|o| o.norm2().powi(2)).sum();
                    parseval = parseval.max((parts - f.norm2().powi(2)).abs());
                    non_outer += b.outer_checks.iter().filter(|k| !k.n_outer).count();
                }
                Err(HardyError::Factorization(diag)) => {
                    failures += 1;
                    residual = residual.max(diag.residual);
                    gram = gram.max(diag.gram_defect);
                    non_outer += diag.non_outer.len();
                }
                Err(_) => failures += 1,
            }
        }
    }
    c.at_most("residual", residual, 1e-6);
    c.at_most("joint gram defect", gram, 1e-6);
    c.at_most("r - n", rank_excess, 0.0);
    c.at_most("parseval gap", parseval, 1e-6);
    c.at_most("outer parts failing the n-outer test", non_outer as f64, 0.0);
    c.at_most("failed factorizations", failures as f64, 0.0);
    Ok(())
}

/// Truncation parameters that keep `B^{k_max+2}·J` inside the band.
pub fn constrained_truncation(n: usize, n_samples: usize) -> (usize, usize) {
    let k_max = 6;
    let d = (n * (k_max + 3) + 60).min(n_samples / 2 - 1);
    (d, k_max)
}

fn constrained(c: &mut Checks) -> Result<()> {
    let n_samples = c.cfg.n_samples;
    let mut rng = c.cfg.rng(8);
    let (mut b2, mut b3, mut b1) = (0.0f64, 0.0f64, f64::INFINITY);
    for _ in 0..20 {
        let n = rng.random_range(2..=3);
        let r = rng.random_range(1..=2);
        let k = rng.random_range(1..=2 * r - 1);
        let spec = random_constrained_spec(&mut rng, n, r, k, 0.3, n_samples)?;
        let (d, k_max) = constrained_truncation(n, n_samples);
        let report = verify_constrained(&build_constrained(&spec, d, k_max)?, &spec)?;
        b2 = b2.max(report.defect_b2);
        b3 = b3.max(report.defect_b3);
        b1 = b1.min(report.defect_b);
    }
    c.at_most("B^2 defect", b2, 1e-6);
    c.at_most("B^3 defect", b3, 1e-6);
    c.at_least("B defect (generic-case check)", b1, 0.05);

    // β₁ = 0: φ = B·J and the space collapses to B·J·H²(B).
    let j = random_inner(&mut rng, 1, 0.5, n_samples)?;
    let spec = ConstrainedSpec {
        inners: vec![j],
        beta: vec![vec![Complex64::default(), Complex64::new(1.0, 0.0)]],
        blaschke: BlaschkeSpec::monomial(2)?,
    };
    let (d, k_max) = constrained_truncation(2, n_samples);
    let report = verify_constrained(&build_constrained(&spec, d, k_max)?, &spec)?;
    c.at_most("degenerate case B defect", report.defect_b, 1e-6);
    c.at_least("degenerate case flagged", if report.degenerate { 1.0 } else { 0.0 }, 1.0);
    Ok(())
}

fn classical_inner_outer(c: &mut Checks) -> Result<()> {
    let n_samples = c.cfg.n_samples;
    let mut rng = c.cfg.rng(9);
    let (mut residual, mut unimodular) = (0.0f64, 0.0f64);
    let mut accepted = 0;
    while accepted < 200 {
        let deg = rng.random_range(0..=24);
        let f = random_polynomial(&mut rng, deg, n_samples)?;
        if f.min_modulus().1 < 1e-6 {
            continue;
        }
        accepted += 1;
        let pair = inner_outer(&f, false)?;
        residual = residual.max(pair.residual);
        unimodular = unimodular.max(pair.unimodularity_defect);
    }
    c.at_most("residual", residual, 1e-7);
    c.at_most("unimodularity defect", unimodular, 1e-7);

    let mut jensen: f64 = 0.0;
    for _ in 0..20 {
        let a = Complex64::from_polar(rng.random_range(0.1..0.9), rng.random_range(0.0..std::f64::consts::TAU));
        let outer_zeros: Vec<Complex64> = (0..rng.random_range(0..=3)).map(|_| random_in_disk(&mut rng, 0.8)).collect();
        let scale = random_unimodular(&mut rng) * rng.random_range(0.5..2.0);
        let f = CircleFunction::from_fn(n_samples, |z| outer_zeros.iter().fold((z - a) * scale, |acc, b| acc * (1.0 - b * z)))?;
        let check = is_outer(&f)?;
        jensen = jensen.max((check.defect + a.norm().ln()).abs());
    }
    c.at_most("jensen gap error", jensen, 1e-5);
    Ok(())
}

fn isometry(c: &mut Checks) -> Result<()> {
    let n_samples = c.cfg.n_samples;
    let mut rng = c.cfg.rng(10);
    let mut products: Vec<CircleFunction> = (1..=4).map(|n| CircleFunction::monomial(n, n_samples)).collect::<Result<_>>()?;
    for _ in 0..5 {
        let n = rng.random_range(1..=4);
        products.push(random_blaschke(&mut rng, n, 0.8, false)?.as_circle_function(n_samples)?);
    }
    let mut worst: f64 = 0.0;
    for spec in GaugeNormSpec::builtins() {
        for b in &products {
            for _ in 0..20 {
                let f = random_bounded(&mut rng, n_samples);
                let lhs = gauge_eval(&spec, &b.times(&f)?)?;
                worst = worst.max((lhs - gauge_eval(&spec, &f)?).abs());
            }
        }
    }
    c.at_most("norm change under B", worst, 1e-9);
    Ok(())
}
