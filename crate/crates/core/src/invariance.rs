//! Truncated invariant subspaces: spans of multiplier orbits, invariance
//! defects, wandering subspaces, and the constrained shape
//! `⟨φ_1⟩ ⊕ ⋯ ⊕ ⟨φ_k⟩ ⊕ B²[J_1 H²(B) ⊕ ⋯ ⊕ J_r H²(B)]`.
//!
//! Coefficient vectors live in `0..=D`. A space remembers how it was
//! generated so that the edge of the truncation can be handled exactly: the
//! orbit element `g·T^{k_max}` has no image inside the truncated space, and
//! testing it would register a false defect.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::blaschke::{compose_samples, BlaschkeSpec};
use crate::circlefn::CircleFunction;
use crate::decomp::cesaro_mean;
use crate::error::{HardyError, Result};
use crate::linalg::{gram_defect, principal_sine, project_out, range_basis, spectral_norm, CMat};

/// Relative tail energy beyond `D` tolerated when truncating.
pub const TOL_TAIL: f64 = 1e-10;
/// Rank cliff for orthonormalizing generators.
const RANK_TOL: f64 = 1e-10;
/// Rank cliff for wandering vectors.
pub const WANDERING_TOL: f64 = 1e-6;
/// Largest invariance defect accepted by [`wandering_basis`].
pub const TOL_INVARIANT: f64 = 1e-6;
/// Heuristic flag for "clearly not invariant" (generic-case check).
pub const GENERIC_NON_INVARIANCE: f64 = 0.05;

/// How a space was generated: `fixed ∪ {seed·T^k : k ≤ k_max}`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub fixed: Vec<CircleFunction>,
    pub seeds: Vec<CircleFunction>,
    pub multiplier: Option<CircleFunction>,
    pub k_max: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceBasis {
    pub ambient_bandwidth: usize,
    pub n_samples: usize,
    /// Orthonormal columns, rows are coefficients `0..=D`.
    pub q: CMat,
    pub generators: Provenance,
}

#[derive(Serialize, Deserialize)]
struct SubspaceFile {
    n_samples: usize,
    ambient_bandwidth: usize,
    basis: Vec<Vec<Complex64>>,
    generators: Provenance,
}

impl Serialize for SubspaceBasis {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SubspaceFile {
            n_samples: self.n_samples,
            ambient_bandwidth: self.ambient_bandwidth,
            basis: (0..self.dim()).map(|c| self.q.column(c).iter().copied().collect()).collect(),
            generators: self.generators.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SubspaceBasis {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let file = SubspaceFile::deserialize(d)?;
        let rows = file.ambient_bandwidth + 1;
        if file.basis.iter().any(|v| v.len() > rows) {
            return Err(serde::de::Error::custom("basis vector longer than ambient_bandwidth + 1"));
        }
        let q = CMat::from_fn(rows, file.basis.len(), |i, j| file.basis[j].get(i).copied().unwrap_or_default());
        let defect = gram_defect(&q);
        if defect > 1e-10 {
            return Err(serde::de::Error::custom(format!("basis is not orthonormal (Gram defect {defect:.3e})")));
        }
        Ok(SubspaceBasis {
            ambient_bandwidth: file.ambient_bandwidth,
            n_samples: file.n_samples,
            q,
            generators: file.generators,
        })
    }
}

impl SubspaceBasis {
    pub fn dim(&self) -> usize {
        self.q.ncols()
    }

    pub fn basis(&self) -> Result<Vec<CircleFunction>> {
        (0..self.dim()).map(|c| crate::linalg::column_to_function(&self.q, c, self.n_samples)).collect()
    }

    /// Orthonormal basis of everything with coefficients in `0..=d`.
    pub fn full(d: usize, n_samples: usize) -> Self {
        SubspaceBasis {
            ambient_bandwidth: d,
            n_samples,
            q: CMat::identity(d + 1, d + 1),
            generators: Provenance::default(),
        }
    }

    /// Orthogonal projection of `f` onto the space.
    pub fn project(&self, f: &CircleFunction) -> Result<CircleFunction> {
        let (v, _) = truncate(f, self.ambient_bandwidth);
        let p = &self.q * (self.q.adjoint() * v);
        crate::linalg::column_to_function(&p, 0, self.n_samples)
    }
}

/// Coefficients `0..=d` of `f` as a column, and the ℓ² mass left outside.
fn truncate(f: &CircleFunction, d: usize) -> (CMat, f64) {
    let t = f.taylor();
    let col = CMat::from_fn(d + 1, 1, |i, _| t.get(i).copied().unwrap_or_default());
    let half = f.n_samples() as i64 / 2;
    let tail: f64 = (-half..half)
        .filter(|&j| j < 0 || j > d as i64)
        .map(|j| f.coeff(j).norm_sqr())
        .sum();
    (col, tail.sqrt())
}

fn truncate_checked(f: &CircleFunction, d: usize) -> Result<CMat> {
    let (col, tail) = truncate(f, d);
    let scale = f.norm2().max(f64::MIN_POSITIVE);
    if tail > TOL_TAIL * scale {
        return Err(HardyError::truncation(
            format!("generator orbit leaves the band 0..={d}; raise D or lower k_max"),
            tail,
        ));
    }
    Ok(col)
}

fn columns(fns: &[CircleFunction], d: usize) -> Result<CMat> {
    let cols = fns.iter().map(|f| truncate_checked(f, d)).collect::<Result<Vec<_>>>()?;
    Ok(CMat::from_fn(d + 1, cols.len(), |i, j| cols[j][(i, 0)]))
}

fn require_unimodular(t: &CircleFunction) -> Result<()> {
    t.require_analytic("multiplier")?;
    let worst = t.samples().iter().map(|s| (s.norm() - 1.0).abs()).fold(0.0, f64::max);
    if worst > 1e-8 {
        return Err(HardyError::Domain(format!("multiplier is not unimodular on the grid (deviation {worst:.3e})")));
    }
    Ok(())
}

fn orbit(seeds: &[CircleFunction], t: &CircleFunction, k_max: usize) -> Result<Vec<CircleFunction>> {
    let mut out = Vec::with_capacity(seeds.len() * (k_max + 1));
    for g in seeds {
        let mut v = g.clone();
        for _ in 0..=k_max {
            let next = v.times(t)?;
            out.push(std::mem::replace(&mut v, next));
        }
    }
    Ok(out)
}

fn from_generators(fixed: Vec<CircleFunction>, seeds: Vec<CircleFunction>, t: &CircleFunction, k_max: usize, d: usize) -> Result<SubspaceBasis> {
    let n_samples = t.n_samples();
    if d + 1 > n_samples / 2 {
        return Err(HardyError::Size(format!("D = {d} does not fit the analytic band of an N = {n_samples} grid")));
    }
    let mut all = fixed.clone();
    all.extend(orbit(&seeds, t, k_max)?);
    let (q, _) = range_basis(&columns(&all, d)?, RANK_TOL);
    Ok(SubspaceBasis {
        ambient_bandwidth: d,
        n_samples,
        q,
        generators: Provenance {
            fixed,
            seeds,
            multiplier: Some(t.clone()),
            k_max,
        },
    })
}

/// Orthonormalized `{T^k g : g ∈ generators, k ≤ k_max}` truncated to `0..=D`.
pub fn span_invariant(generators: &[CircleFunction], multiplier: &CircleFunction, k_max: usize, d: usize) -> Result<SubspaceBasis> {
    require_unimodular(multiplier)?;
    for g in generators {
        g.require_analytic("span_invariant")?;
    }
    from_generators(Vec::new(), generators.to_vec(), multiplier, k_max, d)
}

/// `p` with `T = T0^p`, if any `p ≤ k_max` matches on the grid.
fn power_of(t: &CircleFunction, t0: &CircleFunction, k_max: usize) -> Result<Option<usize>> {
    let mut pw = t0.clone();
    for p in 1..=k_max.max(1) {
        let gap = t.samples().iter().zip(pw.samples()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        if gap < 1e-9 {
            return Ok(Some(p));
        }
        pw = pw.times(t0)?;
    }
    Ok(None)
}

/// Orthonormal basis of the part of the space whose image under `t` is
/// still represented, or `None` when the provenance does not cover `t`.
fn interior(space: &SubspaceBasis, t: &CircleFunction) -> Result<Option<CMat>> {
    let g = &space.generators;
    let Some(t0) = &g.multiplier else { return Ok(None) };
    let Some(p) = power_of(t, t0, g.k_max)? else { return Ok(None) };
    let mut inner = g.fixed.clone();
    if g.k_max >= p {
        inner.extend(orbit(&g.seeds, t0, g.k_max - p)?);
    }
    let (q, _) = range_basis(&columns(&inner, space.ambient_bandwidth)?, RANK_TOL);
    Ok(Some(q))
}

/// The part of the space whose image under `t` has no mass beyond `D`.
fn band_interior(space: &SubspaceBasis, t: &CircleFunction) -> Result<CMat> {
    let half = space.n_samples as i64 / 2;
    let d = space.ambient_bandwidth as i64;
    let outside: Vec<i64> = (-half..half).filter(|&j| j < 0 || j > d).collect();
    let mut tail = CMat::zeros(outside.len(), space.dim());
    for c in 0..space.dim() {
        let f = crate::linalg::column_to_function(&space.q, c, space.n_samples)?.times(t)?;
        for (r, &j) in outside.iter().enumerate() {
            tail[(r, c)] = f.coeff(j);
        }
    }
    let eig = (tail.adjoint() * &tail).symmetric_eigen();
    let keep: Vec<usize> = (0..space.dim()).filter(|&i| eig.eigenvalues[i] <= 1e-16).collect();
    let null = CMat::from_fn(space.dim(), keep.len(), |i, j| eig.eigenvectors[(i, keep[j])]);
    Ok(&space.q * null)
}

/// Multiplies each column (a function with coefficients `0..=D`) by `t`.
fn apply(t: &CircleFunction, q: &CMat, n_samples: usize, d: usize) -> Result<(CMat, f64)> {
    let mut out = CMat::zeros(d + 1, q.ncols());
    let mut tail: f64 = 0.0;
    for c in 0..q.ncols() {
        let f = crate::linalg::column_to_function(q, c, n_samples)?.times(t)?;
        let (col, lost) = truncate(&f, d);
        tail = tail.max(lost);
        out.set_column(c, &col.column(0));
    }
    Ok((out, tail))
}

/// How far `T·M` sticks out of `M`.
///
/// Spaces built here use their generators: the defect is the operator norm
/// of `(I − P_M) T` on the part of `M` whose image is represented. Other
/// spaces get the generic edge correction: each `T·v` is cut to bandwidth
/// `D − bandwidth(T)` and the largest distance to `M` is reported.
pub fn invariance_defect(space: &SubspaceBasis, multiplier: &CircleFunction) -> Result<f64> {
    require_unimodular(multiplier)?;
    let d = space.ambient_bandwidth;
    if let Some(q_int) = interior(space, multiplier)? {
        let (tq, _) = apply(multiplier, &q_int, space.n_samples, d)?;
        return Ok(spectral_norm(&project_out(&space.q, &tq)));
    }
    let keep = d.saturating_sub(multiplier.bandwidth());
    let (mut tq, _) = apply(multiplier, &space.q, space.n_samples, d)?;
    for r in keep + 1..=d {
        tq.row_mut(r).fill(Complex64::default());
    }
    let residual = project_out(&space.q, &tq);
    Ok((0..residual.ncols()).map(|c| residual.column(c).norm()).fold(0.0, f64::max))
}

/// Column order used when orthogonalizing wandering candidates.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum PivotOrder {
    /// SVD of the candidate block (order independent).
    #[default]
    Svd,
    /// Modified Gram–Schmidt, first column first.
    Forward,
    /// Modified Gram–Schmidt, last column first.
    Reverse,
}

fn gram_schmidt(a: &CMat, order: impl Iterator<Item = usize>, rel_tol: f64) -> CMat {
    let top = (0..a.ncols()).map(|c| a.column(c).norm()).fold(0.0, f64::max);
    let mut picked: Vec<nalgebra::DVector<Complex64>> = Vec::new();
    for c in order {
        let mut v = a.column(c).into_owned();
        for _ in 0..2 {
            for q in &picked {
                let coef = q.dotc(&v);
                v -= q * coef;
            }
        }
        let norm = v.norm();
        if top > 0.0 && norm >= rel_tol * top {
            picked.push(v / Complex64::new(norm, 0.0));
        }
    }
    CMat::from_fn(a.nrows(), picked.len(), |i, j| picked[j][i])
}

/// Orthonormal basis of `M ⊖ T·M` (edge-corrected: `T·M` means the image
/// of the generator orbit minus its last step, or for spaces without
/// provenance the image of the part of `M` that `T` keeps inside the band).
pub fn wandering_basis(space: &SubspaceBasis, multiplier: &CircleFunction) -> Result<Vec<CircleFunction>> {
    wandering_basis_with(space, multiplier, PivotOrder::Svd)
}

pub fn wandering_basis_with(space: &SubspaceBasis, multiplier: &CircleFunction, order: PivotOrder) -> Result<Vec<CircleFunction>> {
    let defect = invariance_defect(space, multiplier)?;
    if defect > TOL_INVARIANT {
        return Err(HardyError::Domain(format!("space is not invariant under the multiplier (defect {defect:.3e})")));
    }
    let d = space.ambient_bandwidth;
    let image = match interior(space, multiplier)? {
        Some(q_int) => apply(multiplier, &q_int, space.n_samples, d)?.0,
        None => apply(multiplier, &band_interior(space, multiplier)?, space.n_samples, d)?.0,
    };
    let (q_image, _) = range_basis(&image, RANK_TOL);
    let candidates = project_out(&q_image, &space.q);
    let w = match order {
        PivotOrder::Svd => range_basis(&candidates, WANDERING_TOL).0,
        PivotOrder::Forward => gram_schmidt(&candidates, 0..candidates.ncols(), WANDERING_TOL),
        PivotOrder::Reverse => gram_schmidt(&candidates, (0..candidates.ncols()).rev(), WANDERING_TOL),
    };
    if w.ncols() == 0 {
        return Err(HardyError::Degenerate("space equals its image under the multiplier".into()));
    }
    (0..w.ncols()).map(|c| crate::linalg::column_to_function(&w, c, space.n_samples)).collect()
}

/// Sine of the largest principal angle; both spaces are padded to the
/// larger ambient bandwidth.
pub fn subspace_distance(a: &SubspaceBasis, b: &SubspaceBasis) -> f64 {
    let rows = a.q.nrows().max(b.q.nrows());
    let pad = |q: &CMat| CMat::from_fn(rows, q.ncols(), |i, j| if i < q.nrows() { q[(i, j)] } else { Complex64::default() });
    principal_sine(&pad(&a.q), &pad(&b.q))
}

/// Orthonormal basis of the span of `fns` truncated to `0..=d`.
pub fn span_of(fns: &[CircleFunction], d: usize) -> Result<SubspaceBasis> {
    let n_samples = fns.first().map(|f| f.n_samples()).ok_or_else(|| HardyError::Parameter("empty family".into()))?;
    let (q, _) = range_basis(&columns(fns, d)?, RANK_TOL);
    Ok(SubspaceBasis {
        ambient_bandwidth: d,
        n_samples,
        q,
        generators: Provenance {
            fixed: fns.to_vec(),
            ..Default::default()
        },
    })
}

/// Inner functions `J_1..J_r`, a `2r × k` coefficient matrix stored as `k`
/// columns, and the Blaschke product `B`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstrainedSpec {
    pub inners: Vec<CircleFunction>,
    pub beta: Vec<Vec<Complex64>>,
    pub blaschke: BlaschkeSpec,
}

impl ConstrainedSpec {
    pub fn validate(&self) -> Result<()> {
        let r = self.inners.len();
        if r == 0 {
            return Err(HardyError::Construction("need at least one inner function".into()));
        }
        let k = self.beta.len();
        if k == 0 || k > 2 * r - 1 {
            return Err(HardyError::Construction(format!("need 1 <= k <= 2r - 1 = {}, got k = {k}", 2 * r - 1)));
        }
        for (i, col) in self.beta.iter().enumerate() {
            if col.len() != 2 * r {
                return Err(HardyError::Construction(format!("beta column {i} has {} entries, expected {}", col.len(), 2 * r)));
            }
            let norm = col.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > 1e-10 {
                return Err(HardyError::Construction(format!("beta column {i} has norm {norm}, expected 1")));
            }
        }
        Ok(())
    }

    /// `φ_i = Σ_j (β_{2j,i} + β_{2j+1,i} B) J_j` (0-based rows).
    pub fn phis(&self) -> Result<Vec<CircleFunction>> {
        let n_samples = self.inners[0].n_samples();
        let b = self.blaschke.as_circle_function(n_samples)?;
        self.beta
            .iter()
            .map(|col| {
                self.inners.iter().enumerate().try_fold(CircleFunction::zero(n_samples)?, |acc, (j, jj)| {
                    let lin = b.scaled(col[2 * j + 1]).plus(&CircleFunction::constant(col[2 * j], n_samples)?)?;
                    acc.plus(&lin.times(jj)?)
                })
            })
            .collect()
    }

    /// Whether every `β_{1i}` vanishes.
    pub fn leading_beta_vanishes(&self) -> bool {
        self.beta.iter().all(|col| col[0].norm() < 1e-12)
    }
}

/// Span of `{φ_i} ∪ {B²·B^m·J_j : m ≤ k_max}` truncated to `0..=D`.
pub fn build_constrained(spec: &ConstrainedSpec, d: usize, k_max: usize) -> Result<SubspaceBasis> {
    spec.validate()?;
    for j in &spec.inners {
        j.require_analytic("build_constrained")?;
    }
    let phis = spec.phis()?;
    for a in 0..phis.len() {
        for b in a + 1..phis.len() {
            let ip = crate::circlefn::inner_product(&phis[a], &phis[b])?;
            if ip.norm() > 1e-8 {
                return Err(HardyError::Construction(format!("φ_{} and φ_{} are not orthogonal (|⟨·,·⟩| = {:.3e})", a + 1, b + 1, ip.norm())));
            }
        }
    }
    let n_samples = spec.inners[0].n_samples();
    let b = spec.blaschke.as_circle_function(n_samples)?;
    let b2 = b.times(&b)?;
    let seeds = spec.inners.iter().map(|j| j.times(&b2)).collect::<Result<Vec<_>>>()?;
    from_generators(phis, seeds, &b, k_max, d)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstrainedCheck {
    pub name: String,
    pub measured: f64,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstrainedReport {
    pub defect_b2: f64,
    pub defect_b3: f64,
    pub defect_b: f64,
    /// The space is invariant under B itself (the β₁ = 0 shape).
    pub degenerate: bool,
    pub leading_beta_vanishes: bool,
    pub checks: Vec<ConstrainedCheck>,
    pub pass: bool,
}

/// Defects under `B²`, `B³` (must vanish) and `B` (generic-case check:
/// must be at least [`GENERIC_NON_INVARIANCE`]).
pub fn verify_constrained(space: &SubspaceBasis, spec: &ConstrainedSpec) -> Result<ConstrainedReport> {
    let b = spec.blaschke.as_circle_function(space.n_samples)?;
    let b2 = b.times(&b)?;
    let b3 = b2.times(&b)?;
    let defect_b2 = invariance_defect(space, &b2)?;
    let defect_b3 = invariance_defect(space, &b3)?;
    let defect_b = invariance_defect(space, &b)?;
    let degenerate = defect_b <= TOL_INVARIANT;
    let check = |name: &str, measured: f64, threshold: f64, pass: bool| ConstrainedCheck {
        name: name.into(),
        measured,
        threshold,
        pass,
    };
    let checks = vec![
        check("B^2-invariant", defect_b2, TOL_INVARIANT, defect_b2 <= TOL_INVARIANT),
        check("B^3-invariant", defect_b3, TOL_INVARIANT, defect_b3 <= TOL_INVARIANT),
        check("not B-invariant (generic-case check)", defect_b, GENERIC_NON_INVARIANCE, defect_b >= GENERIC_NON_INVARIANCE),
    ];
    Ok(ConstrainedReport {
        defect_b2,
        defect_b3,
        defect_b,
        degenerate,
        leading_beta_vanishes: spec.leading_beta_vanishes(),
        pass: checks.iter().all(|c| c.pass),
        checks,
    })
}

/// `‖σ_l(k)(B)·h − k(B)·h‖₂` for `l = 0..=l_max`; `k_element` is a series in
/// `w` composed with `B`. Strong L² convergence on band-limited data stands
/// in for weak* convergence.
pub fn density_check(multiplier: &CircleFunction, h: &CircleFunction, k_element: &CircleFunction, l_max: usize) -> Result<Vec<f64>> {
    k_element.require_analytic("density_check")?;
    let target = compose_samples(k_element, multiplier)?.times(h)?;
    (0..=l_max)
        .map(|l| {
            let approx = compose_samples(&cesaro_mean(k_element, l)?, multiplier)?.times(h)?;
            Ok(approx.minus(&target)?.norm2())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const N: usize = 512;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn z(k: i64) -> CircleFunction {
        CircleFunction::monomial(k, N).unwrap()
    }

    fn one() -> CircleFunction {
        z(0)
    }

    fn mobius(a: f64) -> CircleFunction {
        CircleFunction::from_fn(N, |w| (w - a) / (1.0 - w * a)).unwrap()
    }

    fn monomials(ks: impl Iterator<Item = i64>, d: usize) -> SubspaceBasis {
        span_of(&ks.map(z).collect::<Vec<_>>(), d).unwrap()
    }

    #[test]
    fn span_examples() {
        let s = span_invariant(&[one()], &z(1), 16, 16).unwrap();
        assert_eq!(s.dim(), 17);
        assert!(subspace_distance(&s, &SubspaceBasis::full(16, N)) < 1e-12);

        let s = span_invariant(&[z(1)], &z(2), 7, 16).unwrap();
        assert!(subspace_distance(&s, &monomials((1..16).step_by(2), 16)) < 1e-12);

        let err = span_invariant(&[one()], &z(1), 20, 16).unwrap_err();
        assert!(matches!(err, HardyError::Truncation { .. }));
    }

    #[test]
    fn defect_examples() {
        let full = span_invariant(&[one()], &z(1), 16, 16).unwrap();
        assert!(invariance_defect(&full, &z(1)).unwrap() < 1e-10);
        // Same space without provenance: generic edge correction.
        assert!(invariance_defect(&SubspaceBasis::full(16, N), &z(1)).unwrap() < 1e-10);

        let constants = span_of(&[one()], 16).unwrap();
        assert!((invariance_defect(&constants, &z(1)).unwrap() - 1.0).abs() < 1e-12);

        let odd = span_invariant(&[z(1)], &z(2), 7, 16).unwrap();
        assert!(invariance_defect(&odd, &z(2)).unwrap() < 1e-10);
        assert!(invariance_defect(&monomials((1..16).step_by(2), 16), &z(2)).unwrap() < 1e-10);
    }

    #[test]
    fn wandering_examples() {
        let full = span_invariant(&[one()], &z(1), 16, 16).unwrap();
        let w = wandering_basis(&full, &z(1)).unwrap();
        assert_eq!(w.len(), 1);
        let ip = crate::circlefn::inner_product(&w[0], &one()).unwrap();
        assert!((ip.norm() - 1.0).abs() < 1e-12);

        let j = mobius(0.5);
        let s = span_invariant(std::slice::from_ref(&j), &z(1), 20, 120).unwrap();
        let w = wandering_basis(&s, &z(1)).unwrap();
        assert_eq!(w.len(), 1);
        let ip = crate::circlefn::inner_product(&w[0], &j).unwrap();
        assert!(w[0].minus(&j.scaled(ip / ip.norm())).unwrap().norm2() < 1e-6);

        let full = SubspaceBasis::full(16, N);
        let w = wandering_basis(&full, &z(2)).unwrap();
        assert_eq!(w.len(), 2);
        let got = span_of(&w, 16).unwrap();
        assert!(subspace_distance(&got, &monomials(0..2, 16)) < 1e-12);
    }

    #[test]
    fn wandering_pivot_orders_agree_up_to_unitary() {
        let full = span_invariant(&[one(), z(1).plus(&z(3)).unwrap()], &z(3), 8, 40).unwrap();
        let a = wandering_basis_with(&full, &z(3), PivotOrder::Forward).unwrap();
        let b = wandering_basis_with(&full, &z(3), PivotOrder::Reverse).unwrap();
        assert_eq!(a.len(), b.len());
        assert!(subspace_distance(&span_of(&a, 40).unwrap(), &span_of(&b, 40).unwrap()) < 1e-8);
    }

    #[test]
    fn degenerate_wandering_space() {
        let constants = span_of(&[one()], 4).unwrap();
        // Constants are not z-invariant: refused before the rank question.
        assert!(matches!(wandering_basis(&constants, &z(1)), Err(HardyError::Domain(_))));
        // Under the trivial multiplier every space equals its image.
        assert!(matches!(wandering_basis(&constants, &one()), Err(HardyError::Degenerate(_))));
    }

    fn spec(inner: CircleFunction, beta: &[f64], n: usize) -> ConstrainedSpec {
        ConstrainedSpec {
            inners: vec![inner],
            beta: vec![beta.iter().map(|&b| c(b)).collect()],
            blaschke: BlaschkeSpec::monomial(n).unwrap(),
        }
    }

    #[test]
    fn constrained_example_shape() {
        let sp = spec(one(), &[1.0, 0.0], 1);
        let m = build_constrained(&sp, 40, 30).unwrap();
        let expected = monomials(std::iter::once(0).chain(2..=32), 40);
        assert!(subspace_distance(&m, &expected) < 1e-12);
        let rep = verify_constrained(&m, &sp).unwrap();
        assert!(rep.defect_b2 < 1e-10 && rep.defect_b3 < 1e-10);
        assert!(rep.defect_b >= 0.9 && rep.pass && !rep.degenerate);
    }

    #[test]
    fn constrained_mobius_and_degenerate() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let sp = spec(mobius(0.5), &[s, s], 1);
        let m = build_constrained(&sp, 120, 30).unwrap();
        let rep = verify_constrained(&m, &sp).unwrap();
        assert!(rep.pass, "{rep:?}");
        // |β₁|² is the B-defect for a single φ.
        assert!((rep.defect_b - 0.5).abs() < 1e-8);

        let sp = spec(mobius(0.5), &[0.0, 1.0], 1);
        let m = build_constrained(&sp, 120, 30).unwrap();
        let rep = verify_constrained(&m, &sp).unwrap();
        assert!(rep.degenerate && rep.leading_beta_vanishes && !rep.pass);
        assert!(rep.defect_b < 1e-8);
    }

    #[test]
    fn constrained_z_squared() {
        let sp = spec(z(1), &[1.0, 0.0], 2);
        let m = build_constrained(&sp, 80, 30).unwrap();
        let rep = verify_constrained(&m, &sp).unwrap();
        assert!(rep.defect_b2 <= 1e-6 && rep.defect_b3 <= 1e-6);
    }

    #[test]
    fn constrained_validation() {
        let mut sp = spec(one(), &[1.0, 1.0], 1);
        assert!(matches!(build_constrained(&sp, 20, 4), Err(HardyError::Construction(_))));
        sp.beta = vec![vec![c(1.0), c(0.0)], vec![c(1.0), c(0.0)]];
        assert!(matches!(build_constrained(&sp, 20, 4), Err(HardyError::Construction(_))));
        let mut sp2 = spec(one(), &[1.0, 0.0], 1);
        sp2.inners.push(z(1));
        sp2.beta = vec![vec![c(1.0), c(0.0), c(0.0), c(0.0)], vec![c(1.0), c(0.0), c(0.0), c(0.0)]];
        assert!(matches!(build_constrained(&sp2, 20, 4), Err(HardyError::Construction(_))));
    }

    #[test]
    fn density_examples() {
        let h = CircleFunction::from_taylor(&[c(1.0), c(-0.5), c(0.25)], N).unwrap();
        let b = z(2);
        let identity = z(1);
        // The error is exactly ‖h‖/(l+1) here.
        let errs = density_check(&b, &h, &identity, 1200).unwrap();
        assert!((errs[1000] - h.norm2() / 1001.0).abs() < 1e-12);
        assert!(errs[1200] <= 1e-3);
        assert!(errs.windows(2).all(|w| w[1] <= w[0] + 1e-15));

        let errs = density_check(&b, &h, &one(), 20).unwrap();
        assert!(errs.iter().all(|e| *e < 1e-14));

        let geo = CircleFunction::from_fn(N, |w| 1.0 / (1.0 - w * 0.5)).unwrap();
        let errs = density_check(&b, &h, &geo, 60).unwrap();
        assert!(errs[60] < errs[1] && errs[60] < 0.05);
    }

    #[test]
    fn subspace_file_round_trip() {
        let s = span_invariant(&[z(1)], &z(2), 3, 10).unwrap();
        let text = crate::io::to_json_string(&s).unwrap();
        let back: SubspaceBasis = crate::io::parse_json(&text, "subspace").unwrap();
        assert!(subspace_distance(&s, &back) < 1e-15);
        assert!(invariance_defect(&back, &z(2)).unwrap() < 1e-10);
    }
}
