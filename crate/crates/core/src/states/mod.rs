//! Sparse pure states on `N` parties of dimension `d`, exact reductions and
//! k-uniformity reports.
//!
//! Exact states store Gaussian-integer numerators over a common `sqrt(r)`, so
//! a state built from an orthogonal array with `r` runs has every amplitude
//! equal to `1 / sqrt(r)` and every reduction is a rational matrix.

mod density;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use itertools::Itertools;
use num_complex::{Complex, Complex64};
use rayon::prelude::*;
use serde::Serialize;

use crate::codes::{binomial, content_lines};
use crate::oa::OrthogonalArray;
use crate::{Caps, Error, Result};

pub use density::{DensityJson, DensityOperator, Entries, FLOAT_TOLERANCE};
pub(crate) use density::partial_trace_terms;

/// Gaussian integer.
pub type GaussInt = Complex<i64>;
/// A computational basis index, one digit per party.
pub type BasisIndex = Vec<u16>;

#[derive(Debug, Clone, PartialEq)]
pub enum Amplitudes {
    /// Amplitude of `i` is `terms[i] / sqrt(norm_sq)`.
    Exact { norm_sq: u64, terms: BTreeMap<BasisIndex, GaussInt> },
    Float(BTreeMap<BasisIndex, Complex64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    parties: usize,
    dim: usize,
    amps: Amplitudes,
}

/// `<a|b>`, antilinear in the first argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InnerProduct {
    /// `numer / denom`.
    Exact { numer: GaussInt, denom: u64 },
    Float(Complex64),
}

impl InnerProduct {
    pub fn value(&self) -> Complex64 {
        match *self {
            InnerProduct::Exact { numer, denom } => Complex64::new(numer.re as f64, numer.im as f64) / denom as f64,
            InnerProduct::Float(z) => z,
        }
    }

    pub fn is_zero(&self) -> bool {
        match *self {
            InnerProduct::Exact { numer, .. } => numer == GaussInt::new(0, 0),
            InnerProduct::Float(z) => z.norm() <= FLOAT_TOLERANCE,
        }
    }

    pub fn is_one(&self) -> bool {
        match *self {
            InnerProduct::Exact { numer, denom } => numer == GaussInt::new(denom as i64, 0),
            InnerProduct::Float(z) => (z - 1.0).norm() <= FLOAT_TOLERANCE,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// `k > N/2`: no pure state can be k-uniform.
    Impossible,
}

#[derive(Debug, Clone, Serialize)]
pub struct SubsetFailure {
    pub subset: Vec<usize>,
    pub max_abs_dev: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct UniformityReport {
    #[serde(rename = "N")]
    pub parties: usize,
    pub d: usize,
    pub k: usize,
    pub exact: bool,
    pub subsets_checked: usize,
    pub failures: Vec<SubsetFailure>,
    pub verdict: Verdict,
}

impl UniformityReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

fn to_c64(z: GaussInt) -> Complex64 {
    Complex64::new(z.re as f64, z.im as f64)
}

fn perfect_sqrt(n: u128) -> Option<u64> {
    let r = (n as f64).sqrt().round() as u128;
    (r.saturating_sub(1)..=r + 1).find(|s| s * s == n).map(|s| s as u64)
}

impl PureState {
    /// Exact state `sum_i terms[i] / sqrt(norm_sq) |i>`. The numerators must
    /// satisfy `sum |terms[i]|^2 == norm_sq`.
    pub fn from_exact_terms(
        parties: usize,
        dim: usize,
        norm_sq: u64,
        terms: impl IntoIterator<Item = (BasisIndex, GaussInt)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (idx, z) in terms {
            check_index(&idx, parties, dim)?;
            if z != GaussInt::new(0, 0) {
                let slot = map.entry(idx).or_insert(GaussInt::new(0, 0));
                *slot += z;
            }
        }
        map.retain(|_, z| *z != GaussInt::new(0, 0));
        let total: i128 = map.values().map(|z| z.norm_sqr() as i128).sum();
        if total != norm_sq as i128 {
            return Err(Error::NormViolation { found: total.to_string(), expected: norm_sq.to_string() });
        }
        Ok(PureState { parties, dim, amps: Amplitudes::Exact { norm_sq, terms: map } })
    }

    /// Float state; the norm must be 1 within `1e-9`.
    pub fn from_float_terms(
        parties: usize,
        dim: usize,
        terms: impl IntoIterator<Item = (BasisIndex, Complex64)>,
    ) -> Result<Self> {
        let mut map: BTreeMap<BasisIndex, Complex64> = BTreeMap::new();
        for (idx, z) in terms {
            check_index(&idx, parties, dim)?;
            *map.entry(idx).or_default() += z;
        }
        map.retain(|_, z| z.norm() > 0.0);
        let total: f64 = map.values().map(|z| z.norm_sqr()).sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::NormViolation { found: format!("{total:.12}"), expected: "1".into() });
        }
        Ok(PureState { parties, dim, amps: Amplitudes::Float(map) })
    }

    /// Uniform superposition of the rows of an irredundant orthogonal array
    /// of strength `k`. Fails with [`Error::NotIrredundant`] otherwise.
    pub fn from_iroa(oa: &OrthogonalArray, k: usize) -> Result<Self> {
        if let Some(criterion) = oa.irredundancy_violation(k) {
            return Err(Error::NotIrredundant { k, criterion });
        }
        let terms = oa.rows().map(|r| (r.to_vec(), GaussInt::new(1, 0)));
        PureState::from_exact_terms(oa.factors(), oa.levels(), oa.runs() as u64, terms)
    }

    /// `(|0...0> + ... + |d-1...d-1>) / sqrt(d)`, which is 1-uniform.
    pub fn ghz(dim: usize, parties: usize) -> Result<Self> {
        if dim < 2 || parties < 2 {
            return Err(Error::InvalidArgument(format!("GHZ needs d >= 2 and N >= 2, got d={dim}, N={parties}")));
        }
        let terms = (0..dim).map(|i| (vec![i as u16; parties], GaussInt::new(1, 0)));
        PureState::from_exact_terms(parties, dim, dim as u64, terms)
    }

    /// Computational basis state `|index>`.
    pub fn basis(dim: usize, index: &[u16]) -> Result<Self> {
        PureState::from_exact_terms(index.len(), dim, 1, [(index.to_vec(), GaussInt::new(1, 0))])
    }

    /// `sum_j coeffs[j] |states[j]>`, in float mode. The result must be
    /// normalized within `1e-9`.
    pub fn linear_combination(states: &[&PureState], coeffs: &[Complex64]) -> Result<Self> {
        let first = states.first().ok_or_else(|| Error::InvalidArgument("empty linear combination".into()))?;
        if states.len() != coeffs.len() {
            return Err(Error::ShapeMismatch(format!("{} states, {} coefficients", states.len(), coeffs.len())));
        }
        let mut acc: BTreeMap<BasisIndex, Complex64> = BTreeMap::new();
        for (s, &c) in states.iter().zip(coeffs) {
            s.same_shape(first)?;
            for (idx, z) in s.float_terms() {
                *acc.entry(idx).or_default() += c * z;
            }
        }
        PureState::from_float_terms(first.parties, first.dim, acc)
    }

    pub fn parties(&self) -> usize {
        self.parties
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn amplitudes(&self) -> &Amplitudes {
        &self.amps
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.amps, Amplitudes::Exact { .. })
    }

    /// Number of nonzero amplitudes.
    pub fn support_len(&self) -> usize {
        match &self.amps {
            Amplitudes::Exact { terms, .. } => terms.len(),
            Amplitudes::Float(m) => m.len(),
        }
    }

    pub fn amplitude(&self, index: &[u16]) -> Complex64 {
        match &self.amps {
            Amplitudes::Exact { norm_sq, terms } => {
                terms.get(index).map_or(Complex64::default(), |&z| to_c64(z) / (*norm_sq as f64).sqrt())
            }
            Amplitudes::Float(m) => m.get(index).copied().unwrap_or_default(),
        }
    }

    /// Normalized amplitudes as floats.
    pub fn float_terms(&self) -> Vec<(BasisIndex, Complex64)> {
        match &self.amps {
            Amplitudes::Exact { norm_sq, terms } => {
                let s = (*norm_sq as f64).sqrt();
                terms.iter().map(|(i, &z)| (i.clone(), to_c64(z) / s)).collect()
            }
            Amplitudes::Float(m) => m.iter().map(|(i, &z)| (i.clone(), z)).collect(),
        }
    }

    pub fn to_float(&self) -> PureState {
        PureState { parties: self.parties, dim: self.dim, amps: Amplitudes::Float(self.float_terms().into_iter().collect()) }
    }

    fn same_shape(&self, other: &PureState) -> Result<()> {
        if self.parties != other.parties || self.dim != other.dim {
            return Err(Error::ShapeMismatch(format!(
                "states on (N={}, d={}) and (N={}, d={})",
                self.parties, self.dim, other.parties, other.dim
            )));
        }
        Ok(())
    }

    /// `self ⊗ other` with parties paired up: party `i` of the result has
    /// dimension `d1 * d2` and digit `a_i * d2 + b_i`.
    pub fn tensor_parties(&self, other: &PureState) -> Result<PureState> {
        if self.parties != other.parties {
            return Err(Error::ShapeMismatch(format!("{} parties vs {}", self.parties, other.parties)));
        }
        let dim = self.dim * other.dim;
        if dim > u16::MAX as usize + 1 {
            return Err(Error::InvalidArgument(format!("combined local dimension {dim} is too large")));
        }
        let support = self.support_len() as u128 * other.support_len() as u128;
        Caps::check("tensor product support", support, Caps::global().oa_rows)?;
        let pair = |a: &[u16], b: &[u16]| -> BasisIndex {
            a.iter().zip(b).map(|(&x, &y)| x * other.dim as u16 + y).collect()
        };
        match (&self.amps, &other.amps) {
            (Amplitudes::Exact { norm_sq: ra, terms: ta }, Amplitudes::Exact { norm_sq: rb, terms: tb }) => {
                if let Some(norm_sq) = ra.checked_mul(*rb) {
                    let terms = ta.iter().flat_map(|(ia, za)| tb.iter().map(move |(ib, zb)| (ia, ib, za * zb)));
                    let terms: Vec<_> = terms.map(|(ia, ib, z)| (pair(ia, ib), z)).collect();
                    return PureState::from_exact_terms(self.parties, dim, norm_sq, terms);
                }
                self.to_float().tensor_parties(&other.to_float())
            }
            _ => {
                let (fa, fb) = (self.float_terms(), other.float_terms());
                let terms: Vec<_> =
                    fa.iter().flat_map(|(ia, za)| fb.iter().map(move |(ib, zb)| (pair(ia, ib), za * zb))).collect();
                PureState::from_float_terms(self.parties, dim, terms)
            }
        }
    }

    /// `<self|other>`, exact when `r_self * r_other` is a perfect square.
    pub fn inner_product(&self, other: &PureState) -> Result<InnerProduct> {
        self.same_shape(other)?;
        if let (Amplitudes::Exact { norm_sq: ra, terms: ta }, Amplitudes::Exact { norm_sq: rb, terms: tb }) =
            (&self.amps, &other.amps)
        {
            if let Some(denom) = perfect_sqrt(*ra as u128 * *rb as u128) {
                let numer = ta.iter().filter_map(|(i, za)| tb.get(i).map(|zb| za.conj() * zb)).sum();
                return Ok(InnerProduct::Exact { numer, denom });
            }
        }
        let fb: BTreeMap<_, _> = other.float_terms().into_iter().collect();
        let z = self.float_terms().into_iter().filter_map(|(i, za)| fb.get(&i).map(|zb| za.conj() * zb)).sum();
        Ok(InnerProduct::Float(z))
    }

    /// Reduced density operator on `parties` (kept in the given order).
    pub fn reduction(&self, parties: &[usize]) -> Result<DensityOperator> {
        cross_reduction(self, self, parties)
    }

    /// Checks every `k`-party reduction against `I / d^k`.
    pub fn verify_k_uniform(&self, k: usize) -> Result<UniformityReport> {
        let mut report = UniformityReport {
            parties: self.parties,
            d: self.dim,
            k,
            exact: self.is_exact(),
            subsets_checked: 0,
            failures: Vec::new(),
            verdict: Verdict::Pass,
        };
        if 2 * k > self.parties {
            report.verdict = Verdict::Impossible;
            return Ok(report);
        }
        Caps::check("party subsets", binomial(self.parties, k), Caps::global().column_subsets)?;
        let subsets: Vec<Vec<usize>> = (0..self.parties).combinations(k).collect();
        let outcomes: Vec<Result<Option<SubsetFailure>>> = subsets
            .par_iter()
            .map(|s| {
                let rho = self.reduction(s)?;
                Ok((!rho.is_maximally_mixed())
                    .then(|| SubsetFailure { subset: s.clone(), max_abs_dev: rho.deviation_from_maximally_mixed() }))
            })
            .collect();
        for o in outcomes {
            if let Some(f) = o? {
                report.failures.push(f);
            }
        }
        report.subsets_checked = subsets.len();
        if !report.failures.is_empty() {
            report.verdict = Verdict::Fail;
        }
        Ok(report)
    }

    /// Text form: header `state N d r mode`, then one line per nonzero
    /// amplitude with the `N` digits followed by the real and imaginary
    /// parts. Exact files store numerators over `sqrt(r)`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match &self.amps {
            Amplitudes::Exact { norm_sq, terms } => {
                let _ = writeln!(out, "state {} {} {} exact", self.parties, self.dim, norm_sq);
                for (idx, z) in terms {
                    let _ = writeln!(out, "{} {} {}", idx.iter().join(" "), z.re, z.im);
                }
            }
            Amplitudes::Float(m) => {
                let _ = writeln!(out, "state {} {} 1 float", self.parties, self.dim);
                for (idx, z) in m {
                    let _ = writeln!(out, "{} {:e} {:e}", idx.iter().join(" "), z.re, z.im);
                }
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<PureState> {
        let mut lines = content_lines(text);
        let (hl, header) = lines.next().ok_or(Error::Parse { line: 0, message: "empty state file".into() })?;
        let h: Vec<&str> = header.split_whitespace().collect();
        let bad = |message: String| Error::Parse { line: hl, message };
        if h.len() != 5 || h[0] != "state" {
            return Err(bad("expected header `state N d r exact|float`".into()));
        }
        let num = |s: &str| s.parse::<u64>().map_err(|e| bad(format!("bad header field `{s}`: {e}")));
        let (parties, dim, norm_sq) = (num(h[1])? as usize, num(h[2])? as usize, num(h[3])?);
        if dim < 2 || dim > u16::MAX as usize + 1 || parties == 0 {
            return Err(bad(format!("unsupported shape N={parties}, d={dim}")));
        }
        let exact = match h[4] {
            "exact" => true,
            "float" => false,
            other => return Err(bad(format!("unknown mode `{other}`"))),
        };
        let mut exact_terms = Vec::new();
        let mut float_terms = Vec::new();
        for (ln, content) in lines {
            let f: Vec<&str> = content.split_whitespace().collect();
            if f.len() != parties + 2 {
                return Err(Error::Parse { line: ln, message: format!("expected {} fields, found {}", parties + 2, f.len()) });
            }
            let idx = f[..parties]
                .iter()
                .map(|s| s.parse::<u16>())
                .collect::<std::result::Result<BasisIndex, _>>()
                .map_err(|e| Error::Parse { line: ln, message: format!("bad digit: {e}") })?;
            if exact {
                let p = |s: &str| s.parse::<i64>().map_err(|e| Error::Parse { line: ln, message: format!("bad numerator: {e}") });
                exact_terms.push((idx, GaussInt::new(p(f[parties])?, p(f[parties + 1])?)));
            } else {
                let p = |s: &str| s.parse::<f64>().map_err(|e| Error::Parse { line: ln, message: format!("bad amplitude: {e}") });
                float_terms.push((idx, Complex64::new(p(f[parties])?, p(f[parties + 1])?)));
            }
        }
        if exact {
            PureState::from_exact_terms(parties, dim, norm_sq, exact_terms)
        } else {
            PureState::from_float_terms(parties, dim, float_terms)
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<PureState> {
        PureState::parse(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        Ok(std::fs::write(path, self.to_text())?)
    }
}

fn check_index(idx: &[u16], parties: usize, dim: usize) -> Result<()> {
    if idx.len() != parties {
        return Err(Error::ShapeMismatch(format!("basis index of length {} on {parties} parties", idx.len())));
    }
    if let Some(&bad) = idx.iter().find(|&&x| x as usize >= dim) {
        return Err(Error::ElementOutOfRange { value: bad as u64, order: dim as u32 });
    }
    Ok(())
}

fn check_parties(parties: &[usize], n: usize) -> Result<()> {
    if parties.iter().any(|&p| p >= n) || parties.iter().duplicates().next().is_some() {
        return Err(Error::InvalidArgument(format!("party list {parties:?} is not a set of distinct parties below {n}")));
    }
    Ok(())
}

/// `Tr_{complement}(|a><b|)` restricted to `parties`. Exact when both states
/// are exact and `r_a * r_b` is a perfect square.
pub fn cross_reduction(a: &PureState, b: &PureState, parties: &[usize]) -> Result<DensityOperator> {
    a.same_shape(b)?;
    check_parties(parties, a.parties)?;
    let (n, d) = (a.parties, a.dim);
    Caps::check("reduction side", (d as u128).pow(parties.len() as u32), u64::MAX)?;
    if let (Amplitudes::Exact { norm_sq: ra, terms: ta }, Amplitudes::Exact { norm_sq: rb, terms: tb }) = (&a.amps, &b.amps) {
        if let Some(denom) = perfect_sqrt(*ra as u128 * *rb as u128) {
            let numer = partial_trace_terms(
                ta.iter().map(|(i, z)| (i.as_slice(), *z)),
                tb.iter().map(|(i, z)| (i.as_slice(), *z)),
                parties,
                n,
                d,
            );
            return Ok(DensityOperator::exact(d, parties.to_vec(), denom, numer));
        }
    }
    let (fa, fb) = (a.float_terms(), b.float_terms());
    let entries = partial_trace_terms(
        fa.iter().map(|(i, z)| (i.as_slice(), *z)),
        fb.iter().map(|(i, z)| (i.as_slice(), *z)),
        parties,
        n,
        d,
    );
    Ok(DensityOperator::float(d, parties.to_vec(), entries))
}

/// States shipped with the crate.
pub mod bundled {
    use super::*;

    pub const SIX_QUBIT_AME: &str = include_str!("../../data/six_qubit_ame.state");

    /// A 3-uniform state of six qubits with amplitudes `±1/4`.
    pub fn six_qubit_ame() -> Result<PureState> {
        PureState::parse(SIX_QUBIT_AME)
    }

    pub fn by_name(name: &str) -> Result<PureState> {
        match name {
            "six_qubit_ame" => six_qubit_ame(),
            other => Err(Error::InvalidArgument(format!("no bundled state named `{other}`"))),
        }
    }
}
