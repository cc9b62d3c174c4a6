//! k-uniform quantum-information maskers and pure quantum error-correcting
//! code checks.
//!
//! A masker sends basis state `|j>` to `|psi_j>`; it k-uniformly masks every
//! superposition iff, for each k-party set `A`,
//! `Tr_{A^c} |psi_s><psi_t| = delta_st rho_A` for a common `rho_A`. That is
//! the criterion [`verify_masker`] checks. [`sample_masker`] tries random
//! superpositions instead and serves as an independent sanity check.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{self, ExistenceVerdict, Recipe};
use crate::codes::binomial;
use crate::states::{
    cross_reduction, Amplitudes, DensityJson, DensityOperator, GaussInt, InnerProduct, PureState, Verdict,
};
use crate::{Caps, Error, Result};

/// Tolerance for float-mode Pauli matrix elements and sampled reductions.
pub const QECC_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct Masker {
    dim: usize,
    parties: usize,
    images: Vec<PureState>,
    verified_k: Option<usize>,
    provenance: String,
}

impl Masker {
    /// Wraps `d` images `psi_0 .. psi_{d-1}`, checking they share a shape and
    /// are orthonormal.
    pub fn from_images(images: Vec<PureState>, provenance: impl Into<String>) -> Result<Self> {
        let first = images.first().ok_or_else(|| Error::InvalidArgument("a masker needs at least one image".into()))?;
        let (parties, dim) = (first.parties(), first.dim());
        if images.len() != dim {
            return Err(Error::ShapeMismatch(format!("{} images for input dimension {dim}", images.len())));
        }
        check_orthonormal(&images)?;
        Ok(Masker { dim, parties, images, verified_k: None, provenance: provenance.into() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn parties(&self) -> usize {
        self.parties
    }

    pub fn images(&self) -> &[PureState] {
        &self.images
    }

    pub fn image(&self, j: usize) -> &PureState {
        &self.images[j]
    }

    pub fn verified_k(&self) -> Option<usize> {
        self.verified_k
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    /// Runs [`verify_masker`] and records `k` on success.
    pub fn verify(&mut self, k: usize) -> Result<MaskingReport> {
        let report = verify_masker(self, k)?;
        if report.passed() && self.verified_k.map_or(true, |v| v < k) {
            self.verified_k = Some(k);
        }
        Ok(report)
    }

    /// Image of `sum_j alpha_j |j>`.
    pub fn apply(&self, alpha: &[Complex64]) -> Result<PureState> {
        let refs: Vec<&PureState> = self.images.iter().collect();
        PureState::linear_combination(&refs, alpha)
    }
}

/// Checks `<psi_s|psi_t> = delta_st`, exactly where possible.
pub fn check_orthonormal(states: &[PureState]) -> Result<()> {
    for (s, a) in states.iter().enumerate() {
        for (t, b) in states.iter().enumerate().skip(s) {
            let ip = a.inner_product(b)?;
            let ok = match ip {
                InnerProduct::Exact { .. } => if s == t { ip.is_one() } else { ip.is_zero() },
                InnerProduct::Float(z) => (z - if s == t { 1.0 } else { 0.0 }).norm() <= QECC_TOLERANCE,
            };
            if !ok {
                return Err(Error::NotOrthonormal { s, t, value: format!("{:.6}", ip.value()) });
            }
        }
    }
    Ok(())
}

/// Splits a `(k+1)`-uniform state on `N+1` parties at `split_party`:
/// `|psi> = d^{-1/2} sum_j |j>_split |psi_j>`, and returns the masker
/// `|j> -> |psi_j>` after checking it masks at level `k`.
pub fn build_masker(psi: &PureState, split_party: usize, k: usize) -> Result<Masker> {
    let (n, d) = (psi.parties(), psi.dim());
    if split_party >= n || n < 2 {
        return Err(Error::InvalidArgument(format!("split party {split_party} out of range for {n} parties")));
    }
    if !psi.reduction(&[split_party])?.is_maximally_mixed() {
        return Err(Error::SplitNotMaximallyMixed { party: split_party });
    }
    if !psi.verify_k_uniform(k + 1)?.passed() {
        return Err(Error::NotUniform { k: k + 1 });
    }
    let strip = |idx: &[u16]| -> Vec<u16> {
        idx.iter().enumerate().filter(|&(p, _)| p != split_party).map(|(_, &x)| x).collect()
    };
    let images = match psi.amplitudes() {
        Amplitudes::Exact { norm_sq, terms } if norm_sq % d as u64 == 0 => (0..d)
            .map(|j| {
                let part = terms.iter().filter(|(i, _)| i[split_party] as usize == j).map(|(i, z)| (strip(i), *z));
                PureState::from_exact_terms(n - 1, d, norm_sq / d as u64, part)
            })
            .collect::<Result<Vec<_>>>()?,
        _ => {
            let scale = (d as f64).sqrt();
            let terms = psi.float_terms();
            (0..d)
                .map(|j| {
                    let part =
                        terms.iter().filter(|(i, _)| i[split_party] as usize == j).map(|(i, z)| (strip(i), z * scale));
                    PureState::from_float_terms(n - 1, d, part)
                })
                .collect::<Result<Vec<_>>>()?
        }
    };
    let mut masker = Masker::from_images(images, format!("split of a {}-uniform state at party {split_party}", k + 1))?;
    let report = masker.verify(k)?;
    if !report.passed() {
        return Err(Error::NotUniform { k });
    }
    Ok(masker)
}

#[derive(Debug, Clone, Serialize)]
pub struct MaskingViolation {
    pub subset: Vec<usize>,
    pub s: usize,
    pub t: usize,
    pub max_abs_dev: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SubsetReduction {
    pub subset: Vec<usize>,
    pub rho: DensityJson,
}

#[derive(Debug, Clone, Serialize)]
pub struct MaskingReport {
    pub d: usize,
    #[serde(rename = "N")]
    pub parties: usize,
    pub k: usize,
    pub exact: bool,
    pub subsets_checked: usize,
    pub pairs_checked: usize,
    /// Common reduction `rho_A` (taken from `psi_0`) for every subset.
    pub reductions: Vec<SubsetReduction>,
    pub violations: Vec<MaskingViolation>,
    pub verdict: Verdict,
}

impl MaskingReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Cross-reduction check over every k-party subset and every image pair.
pub fn verify_masker(m: &Masker, k: usize) -> Result<MaskingReport> {
    let n = m.parties;
    if k > n {
        return Err(Error::InvalidArgument(format!("k = {k} exceeds N = {n}")));
    }
    Caps::check("party subsets", binomial(n, k), Caps::global().column_subsets)?;
    let subsets: Vec<Vec<usize>> = (0..n).combinations(k).collect();
    let per_subset: Vec<Result<(DensityOperator, Vec<MaskingViolation>)>> = subsets
        .par_iter()
        .map(|a| {
            let rho = cross_reduction(&m.images[0], &m.images[0], a)?;
            let mut bad = Vec::new();
            for (s, t) in (0..m.dim).cartesian_product(0..m.dim) {
                if s == 0 && t == 0 {
                    continue;
                }
                let cross = cross_reduction(&m.images[s], &m.images[t], a)?;
                let ok = if s == t { cross.approx_eq(&rho) } else { cross.is_zero() };
                if !ok {
                    let dev = if s == t { cross.max_abs_diff(&rho) } else { cross.max_abs_entry() };
                    bad.push(MaskingViolation { subset: a.clone(), s, t, max_abs_dev: dev });
                }
            }
            Ok((rho, bad))
        })
        .collect();
    let mut reductions = Vec::with_capacity(subsets.len());
    let mut violations = Vec::new();
    for (a, r) in subsets.iter().zip(per_subset) {
        let (rho, bad) = r?;
        reductions.push(SubsetReduction { subset: a.clone(), rho: DensityJson::from(&rho) });
        violations.extend(bad);
    }
    Ok(MaskingReport {
        d: m.dim,
        parties: n,
        k,
        exact: m.images.iter().all(PureState::is_exact),
        subsets_checked: subsets.len(),
        pairs_checked: subsets.len() * m.dim * m.dim,
        reductions,
        verdict: if violations.is_empty() { Verdict::Pass } else { Verdict::Fail },
        violations,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SamplingReport {
    pub seed: u64,
    pub samples: usize,
    pub k: usize,
    pub max_abs_dev: f64,
    pub passed: bool,
}

/// Number of random superpositions tried by [`sample_masker`].
pub const SAMPLES: usize = 32;

/// Maps [`SAMPLES`] seeded random superpositions through the masker and
/// compares every k-party reduction with that of `psi_0`.
pub fn sample_masker(m: &Masker, k: usize, seed: u64) -> Result<SamplingReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let subsets: Vec<Vec<usize>> = (0..m.parties).combinations(k).collect();
    let reference: Vec<DensityOperator> =
        subsets.iter().map(|a| m.images[0].reduction(a)).collect::<Result<_>>()?;
    let mut worst = 0.0f64;
    for _ in 0..SAMPLES {
        let mut alpha: Vec<Complex64> =
            (0..m.dim).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let norm = alpha.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        alpha.iter_mut().for_each(|z| *z /= norm);
        let phi = m.apply(&alpha)?;
        for (a, rho) in subsets.iter().zip(&reference) {
            worst = worst.max(phi.reduction(a)?.max_abs_diff(rho));
        }
    }
    Ok(SamplingReport { seed, samples: SAMPLES, k, max_abs_dev: worst, passed: worst <= QECC_TOLERANCE })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Feasibility {
    Feasible,
    Infeasible,
    Unknown,
}

#[derive(Debug, Clone, Serialize)]
pub struct MaskingFeasibility {
    #[serde(rename = "N")]
    pub parties: usize,
    pub d: u32,
    pub verdict: Feasibility,
    pub reason: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Recipe>,
}

/// Citation attached to the even-`N` verdict.
pub const EVEN_N_CITATION: &str = "generalized no-masking theorem: strong masking is impossible for even N";

/// Whether every qudit state of dimension `d` can be strongly
/// (`floor(N/2)`-uniformly) masked into `N` qudits. Even `N` never works;
/// odd `N` works when an AME state on `N + 1` qudits is known.
pub fn strong_masking_feasible(parties: usize, d: u32) -> Result<MaskingFeasibility> {
    if parties < 2 || d < 2 {
        return Err(Error::InvalidArgument(format!("need N >= 2 and d >= 2, got N={parties}, d={d}")));
    }
    let mut out = MaskingFeasibility { parties, d, verdict: Feasibility::Infeasible, reason: EVEN_N_CITATION.into(), witness: None };
    if parties % 2 == 0 {
        return Ok(out);
    }
    let k = parties.div_ceil(2);
    match catalog::exists_k_uniform(k, d, parties + 1) {
        ExistenceVerdict::Exists { citation, recipe } => {
            out.verdict = Feasibility::Feasible;
            out.reason = format!("AME({}, {d}) state gives the masker: {citation}", parties + 1);
            out.witness = recipe;
        }
        _ => {
            out.verdict = Feasibility::Unknown;
            out.reason = format!("no AME({}, {d}) state is known to the catalog", parties + 1);
        }
    }
    Ok(out)
}

/// Quantum Singleton bound `K <= d^(N - 2k)`.
pub fn singleton_check(parties: usize, dim_k: u64, k: usize, d: u64) -> bool {
    if 2 * k > parties {
        return false;
    }
    let e = (parties - 2 * k) as u32;
    match d.checked_pow(e) {
        Some(bound) => dim_k <= bound,
        None => true,
    }
}

/// Generalized Pauli `X^a Z^b` on each listed party; identity elsewhere.
/// `X|j> = |j+1 mod d>`, `Z|j> = w^j |j>` with `w = exp(2 pi i / d)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ErrorOperator {
    pub positions: Vec<usize>,
    /// `(a, b)` per position, never `(0, 0)`.
    pub locals: Vec<(u16, u16)>,
}

impl ErrorOperator {
    pub fn weight(&self) -> usize {
        self.positions.len()
    }

    /// All operators of weight `1 ..= max_weight` on `n` parties, ordered by
    /// weight, then positions, then local labels.
    pub fn enumerate(n: usize, d: usize, max_weight: usize) -> Result<Vec<ErrorOperator>> {
        let locals: Vec<(u16, u16)> =
            (0..d as u16).cartesian_product(0..d as u16).filter(|&ab| ab != (0, 0)).collect();
        let total: u128 = (1..=max_weight.min(n))
            .map(|w| binomial(n, w).saturating_mul((locals.len() as u128).saturating_pow(w as u32)))
            .fold(0u128, u128::saturating_add);
        Caps::check("error operators", total, Caps::global().error_operators)?;
        let mut out = Vec::with_capacity(total as usize);
        for w in 1..=max_weight.min(n) {
            for positions in (0..n).combinations(w) {
                for labels in (0..w).map(|_| locals.iter().copied()).multi_cartesian_product() {
                    out.push(ErrorOperator { positions: positions.clone(), locals: labels });
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Display for ErrorOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = self.positions.iter().zip(&self.locals).map(|(p, (a, b))| format!("X^{a}Z^{b}@{p}"));
        write!(f, "{}", parts.format(" "))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct QeccViolation {
    pub operator: String,
    pub s: usize,
    pub t: usize,
    pub value: (f64, f64),
    pub abs: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct QeccReport {
    #[serde(rename = "N")]
    pub parties: usize,
    pub d: usize,
    #[serde(rename = "K")]
    pub code_dim: usize,
    pub delta: usize,
    pub exact: bool,
    pub operators_checked: usize,
    pub violations: usize,
    pub worst_violation: Option<QeccViolation>,
    pub verdict: Verdict,
}

impl QeccReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// `i^e` as a Gaussian integer.
fn i_pow(e: usize) -> GaussInt {
    match e % 4 {
        0 => GaussInt::new(1, 0),
        1 => GaussInt::new(0, 1),
        2 => GaussInt::new(-1, 0),
        _ => GaussInt::new(0, -1),
    }
}

/// Sparse `<s| E |t>` for the two representations.
enum Element {
    Exact(GaussInt),
    Float(Complex64),
}

fn apply_index(e: &ErrorOperator, idx: &[u16], d: usize) -> (Vec<u16>, usize) {
    // X^a Z^b |i> = w^{b i} |i + a>; returns the shifted index and the total
    // phase exponent of w.
    let mut out = idx.to_vec();
    let mut phase = 0usize;
    for (&p, &(a, b)) in e.positions.iter().zip(&e.locals) {
        phase += b as usize * idx[p] as usize;
        out[p] = ((idx[p] as usize + a as usize) % d) as u16;
    }
    (out, phase % d)
}

fn matrix_element(e: &ErrorOperator, s: &PureState, t: &PureState, exact_ok: bool) -> Element {
    let d = s.dim();
    if exact_ok {
        if let (Amplitudes::Exact { terms: ts, .. }, Amplitudes::Exact { terms: tt, .. }) = (s.amplitudes(), t.amplitudes()) {
            let step = 4 / d;
            let mut acc = GaussInt::new(0, 0);
            for (idx, zt) in tt {
                let (img, phase) = apply_index(e, idx, d);
                if let Some(zs) = ts.get(&img) {
                    acc += zs.conj() * i_pow(phase * step) * zt;
                }
            }
            return Element::Exact(acc);
        }
    }
    let fs: BTreeMap<_, _> = s.float_terms().into_iter().collect();
    let omega = |m: usize| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * m as f64 / d as f64);
    let mut acc = Complex64::default();
    for (idx, zt) in t.float_terms() {
        let (img, phase) = apply_index(e, &idx, d);
        if let Some(zs) = fs.get(&img) {
            acc += zs.conj() * omega(phase) * zt;
        }
    }
    Element::Float(acc)
}

/// Pure-code check: `<psi_s| E |psi_t> = 0` for every generalized Pauli `E`
/// with `1 <= wt(E) < delta` (these are traceless, so the pure condition
/// forces zero). Exact for `d` in `{2, 4}` when the numerator scales agree.
pub fn verify_pure_qecc(basis: &[PureState], delta: usize) -> Result<QeccReport> {
    let first = basis.first().ok_or_else(|| Error::InvalidArgument("empty code basis".into()))?;
    let (n, d) = (first.parties(), first.dim());
    check_orthonormal(basis)?;
    Caps::check("state space dimension", (d as u128).saturating_pow(n as u32), u64::MAX)?;
    let ops = ErrorOperator::enumerate(n, d, delta.saturating_sub(1))?;
    let same_scale = basis.iter().all(|b| match b.amplitudes() {
        Amplitudes::Exact { norm_sq, .. } => matches!(first.amplitudes(), Amplitudes::Exact { norm_sq: r, .. } if r == norm_sq),
        Amplitudes::Float(_) => false,
    });
    let exact = same_scale && 4 % d == 0;
    let scale = match first.amplitudes() {
        Amplitudes::Exact { norm_sq, .. } => *norm_sq as f64,
        Amplitudes::Float(_) => 1.0,
    };
    let pairs: Vec<(usize, usize)> = (0..basis.len()).cartesian_product(0..basis.len()).collect();
    let found: Vec<QeccViolation> = ops
        .par_iter()
        .flat_map_iter(|e| {
            pairs.iter().filter_map(move |&(s, t)| {
                let value = match matrix_element(e, &basis[s], &basis[t], exact) {
                    Element::Exact(z) if z == GaussInt::new(0, 0) => return None,
                    Element::Exact(z) => Complex64::new(z.re as f64, z.im as f64) / scale,
                    Element::Float(z) if z.norm() <= QECC_TOLERANCE => return None,
                    Element::Float(z) => z,
                };
                Some(QeccViolation { operator: e.to_string(), s, t, value: (value.re, value.im), abs: value.norm() })
            })
        })
        .collect();
    let worst = found.iter().cloned().max_by(|a, b| a.abs.total_cmp(&b.abs));
    Ok(QeccReport {
        parties: n,
        d,
        code_dim: basis.len(),
        delta,
        exact,
        operators_checked: ops.len(),
        violations: found.len(),
        worst_violation: worst,
        verdict: if found.is_empty() { Verdict::Pass } else { Verdict::Fail },
    })
}

/// Every unit vector in the span of `basis` is k-uniform: each basis state
/// is k-uniform and all cross reductions `Tr_{A^c} |psi_s><psi_t|`, `s != t`,
/// vanish.
pub fn kuniform_subspace_check(basis: &[PureState], k: usize) -> Result<bool> {
    if basis.is_empty() {
        return Err(Error::InvalidArgument("empty basis".into()));
    }
    check_orthonormal(basis)?;
    for b in basis {
        if !b.verify_k_uniform(k)?.passed() {
            return Ok(false);
        }
    }
    let n = basis[0].parties();
    Caps::check("party subsets", binomial(n, k), Caps::global().column_subsets)?;
    let subsets: Vec<Vec<usize>> = (0..n).combinations(k).collect();
    let ok: Result<Vec<bool>> = subsets
        .par_iter()
        .map(|a| {
            for (s, t) in (0..basis.len()).tuple_combinations() {
                if !cross_reduction(&basis[s], &basis[t], a)?.is_zero() {
                    return Ok(false);
                }
            }
            Ok(true)
        })
        .collect();
    Ok(ok?.into_iter().all(|x| x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singleton_examples() {
        assert!(!singleton_check(4, 2, 2, 2));
        assert!(singleton_check(5, 2, 2, 2));
        for n in (2..=12).step_by(2) {
            assert!(singleton_check(n, 1, n / 2, 3));
        }
    }

    #[test]
    fn error_operator_count() {
        let ops = ErrorOperator::enumerate(5, 2, 2).unwrap();
        assert_eq!(ops.len(), 3 * 5 + 9 * 10);
        assert!(ops.iter().all(|e| e.locals.iter().all(|&l| l != (0, 0))));
    }

    #[test]
    fn product_basis_fails_distance_two() {
        let b = vec![PureState::basis(2, &[0, 0]).unwrap(), PureState::basis(2, &[1, 1]).unwrap()];
        let r = verify_pure_qecc(&b, 2).unwrap();
        assert!(!r.passed());
        assert_eq!(r.worst_violation.unwrap().abs, 1.0);
        assert!(verify_pure_qecc(&b, 1).unwrap().passed());
        assert!(!kuniform_subspace_check(&b, 1).unwrap());
    }

    #[test]
    fn ghz_split_gives_trivial_masker() {
        let g = PureState::ghz(3, 4).unwrap();
        let m = build_masker(&g, 2, 0).unwrap();
        assert_eq!(m.verified_k(), Some(0));
        for j in 0..3 {
            assert_eq!(m.image(j), &PureState::basis(3, &[j as u16; 3]).unwrap());
        }
        assert!(!verify_masker(&m, 1).unwrap().passed());
    }

    #[test]
    fn even_n_is_infeasible() {
        let r = strong_masking_feasible(4, 2).unwrap();
        assert_eq!(r.verdict, Feasibility::Infeasible);
        assert_eq!(r.reason, EVEN_N_CITATION);
    }

    #[test]
    fn non_orthonormal_images_rejected() {
        let a = PureState::basis(2, &[0]).unwrap();
        assert!(matches!(Masker::from_images(vec![a.clone(), a], "x"), Err(Error::NotOrthonormal { .. })));
    }
}
