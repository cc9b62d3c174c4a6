use std::collections::{BTreeMap, HashMap};
use std::ops::Neg;

use nalgebra::DMatrix;
use num_complex::{Complex, Complex64};
use num_rational::Ratio;
use num_traits::{Num, Zero};
use serde::Serialize;

use crate::{Caps, Result};

use super::GaussInt;

/// Entrywise tolerance for float-mode comparisons of reductions.
pub const FLOAT_TOLERANCE: f64 = 1e-10;

/// Sparse reduced density operator on the parties in `parties`, in that
/// order (first party is the most significant digit of a row index).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    local_dim: usize,
    parties: Vec<usize>,
    entries: Entries,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Entries {
    /// Entry `(u, v)` is `numer[(u, v)] / denom`.
    Exact { denom: u64, numer: BTreeMap<(usize, usize), GaussInt> },
    Float(BTreeMap<(usize, usize), Complex64>),
}

impl DensityOperator {
    pub fn exact(local_dim: usize, parties: Vec<usize>, denom: u64, numer: BTreeMap<(usize, usize), GaussInt>) -> Self {
        let numer = numer.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        DensityOperator { local_dim, parties, entries: Entries::Exact { denom, numer } }
    }

    pub fn float(local_dim: usize, parties: Vec<usize>, entries: BTreeMap<(usize, usize), Complex64>) -> Self {
        let entries = entries.into_iter().filter(|(_, v)| v.norm() > 0.0).collect();
        DensityOperator { local_dim, parties, entries: Entries::Float(entries) }
    }

    /// Side length `d^k`.
    pub fn dim(&self) -> usize {
        self.local_dim.pow(self.parties.len() as u32)
    }

    pub fn parties(&self) -> &[usize] {
        &self.parties
    }

    pub fn entries(&self) -> &Entries {
        &self.entries
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.entries, Entries::Exact { .. })
    }

    pub fn entry(&self, u: usize, v: usize) -> Complex64 {
        match &self.entries {
            Entries::Exact { denom, numer } => numer
                .get(&(u, v))
                .map_or(Complex64::zero(), |z| Complex64::new(z.re as f64, z.im as f64) / *denom as f64),
            Entries::Float(m) => m.get(&(u, v)).copied().unwrap_or_default(),
        }
    }

    pub fn exact_entry(&self, u: usize, v: usize) -> Option<Complex<Ratio<i64>>> {
        match &self.entries {
            Entries::Exact { denom, numer } => {
                let z = numer.get(&(u, v)).copied().unwrap_or_default();
                let d = *denom as i64;
                Some(Complex::new(Ratio::new(z.re, d), Ratio::new(z.im, d)))
            }
            Entries::Float(_) => None,
        }
    }

    /// Positions of stored (nonzero) entries.
    pub fn support(&self) -> Vec<(usize, usize)> {
        match &self.entries {
            Entries::Exact { numer, .. } => numer.keys().copied().collect(),
            Entries::Float(m) => m.keys().copied().collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.entry(i, i)).sum()
    }

    /// Exact unit trace (exact mode) or within tolerance (float mode).
    pub fn has_unit_trace(&self) -> bool {
        match &self.entries {
            Entries::Exact { denom, numer } => {
                let t: GaussInt = numer.iter().filter(|((u, v), _)| u == v).map(|(_, z)| *z).sum();
                t == GaussInt::new(*denom as i64, 0)
            }
            Entries::Float(_) => (self.trace() - 1.0).norm() <= FLOAT_TOLERANCE,
        }
    }

    pub fn is_hermitian(&self) -> bool {
        match &self.entries {
            Entries::Exact { numer, .. } => {
                numer.iter().all(|(&(u, v), z)| numer.get(&(v, u)).copied().unwrap_or_default() == z.conj())
            }
            Entries::Float(m) => m
                .iter()
                .all(|(&(u, v), z)| (m.get(&(v, u)).copied().unwrap_or_default() - z.conj()).norm() <= FLOAT_TOLERANCE),
        }
    }

    /// Largest entrywise deviation from `I / dim`.
    pub fn deviation_from_maximally_mixed(&self) -> f64 {
        let target = 1.0 / self.dim() as f64;
        let diag_missing = (0..self.dim()).any(|i| !self.support().contains(&(i, i)));
        let mut worst = if diag_missing { target } else { 0.0 };
        for (u, v) in self.support() {
            let want = if u == v { target } else { 0.0 };
            worst = f64::max(worst, (self.entry(u, v) - want).norm());
        }
        worst
    }

    /// Equals `I / d^k`: exactly in exact mode, within [`FLOAT_TOLERANCE`]
    /// otherwise.
    pub fn is_maximally_mixed(&self) -> bool {
        match &self.entries {
            Entries::Exact { denom, numer } => {
                let dim = self.dim();
                numer.len() == dim
                    && numer.iter().all(|(&(u, v), z)| u == v && z.im == 0 && z.re as u128 * dim as u128 == *denom as u128)
            }
            Entries::Float(_) => self.deviation_from_maximally_mixed() <= FLOAT_TOLERANCE,
        }
    }

    /// Entrywise maximum of `|self - other|`.
    pub fn max_abs_diff(&self, other: &DensityOperator) -> f64 {
        let mut keys = self.support();
        keys.extend(other.support());
        keys.into_iter().map(|(u, v)| (self.entry(u, v) - other.entry(u, v)).norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.support().into_iter().map(|(u, v)| self.entry(u, v).norm()).fold(0.0, f64::max)
    }

    /// Exact equality when both operands are exact; `None` otherwise.
    pub fn exact_eq(&self, other: &DensityOperator) -> Option<bool> {
        match (&self.entries, &other.entries) {
            (Entries::Exact { denom: da, numer: na }, Entries::Exact { denom: db, numer: nb }) => {
                if self.dim() != other.dim() || na.len() != nb.len() {
                    return Some(false);
                }
                Some(na.iter().all(|(key, za)| {
                    nb.get(key).is_some_and(|zb| *za * (*db as i64) == *zb * (*da as i64))
                }))
            }
            _ => None,
        }
    }

    /// Same operator: exactly when possible, else within tolerance.
    pub fn approx_eq(&self, other: &DensityOperator) -> bool {
        self.exact_eq(other).unwrap_or_else(|| self.max_abs_diff(other) <= FLOAT_TOLERANCE)
    }

    /// All entries vanish.
    pub fn is_zero(&self) -> bool {
        match &self.entries {
            Entries::Exact { numer, .. } => numer.is_empty(),
            Entries::Float(m) => m.values().all(|z| z.norm() <= FLOAT_TOLERANCE),
        }
    }

    pub fn to_dense(&self) -> Result<DMatrix<Complex64>> {
        let dim = self.dim();
        Caps::check("dense reduction matrix", dim as u128, Caps::global().matrix_dim)?;
        let mut m = DMatrix::zeros(dim, dim);
        for (u, v) in self.support() {
            m[(u, v)] = self.entry(u, v);
        }
        Ok(m)
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        let m = self.to_dense()?;
        let h = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = h.symmetric_eigenvalues();
        Ok(eig.iter().copied().fold(f64::INFINITY, f64::min))
    }

    /// Positive semidefinite with eigenvalue floor `-1e-10`.
    pub fn is_positive_semidefinite(&self) -> Result<bool> {
        Ok(self.min_eigenvalue()? >= -FLOAT_TOLERANCE)
    }
}

/// Sparse JSON view: `{dim, parties, denom?, entries: [[u, v, re, im], ...]}`.
#[derive(Debug, Clone, Serialize)]
pub struct DensityJson {
    pub dim: usize,
    pub parties: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub denom: Option<u64>,
    pub entries: Vec<(usize, usize, String, String)>,
}

impl From<&DensityOperator> for DensityJson {
    fn from(rho: &DensityOperator) -> Self {
        let (denom, entries) = match &rho.entries {
            Entries::Exact { denom, numer } => (
                Some(*denom),
                numer.iter().map(|(&(u, v), z)| (u, v, z.re.to_string(), z.im.to_string())).collect(),
            ),
            Entries::Float(m) => {
                (None, m.iter().map(|(&(u, v), z)| (u, v, format!("{:.12e}", z.re), format!("{:.12e}", z.im))).collect())
            }
        };
        DensityJson { dim: rho.dim(), parties: rho.parties.clone(), denom, entries }
    }
}

/// Splits a basis index into the row index on `parties` and the key on the
/// remaining parties.
fn split_index(index: &[u16], parties: &[usize], in_subset: &[bool], dim: usize) -> (usize, Vec<u16>) {
    let row = parties.iter().fold(0usize, |acc, &p| acc * dim + index[p] as usize);
    let rest = index.iter().zip(in_subset).filter(|(_, &s)| !s).map(|(&x, _)| x).collect();
    (row, rest)
}

/// Unnormalized `Tr_{complement}(|a><b|)` entries: `Σ_y a(u, y) conj(b(v, y))`.
///
/// Support of `b` is grouped by complement key, so the cost is the number of
/// matching `(a, b)` term pairs.
pub(crate) fn partial_trace_terms<'a, T>(
    a: impl IntoIterator<Item = (&'a [u16], Complex<T>)>,
    b: impl IntoIterator<Item = (&'a [u16], Complex<T>)>,
    parties: &[usize],
    n: usize,
    dim: usize,
) -> BTreeMap<(usize, usize), Complex<T>>
where
    T: Clone + Num + Neg<Output = T>,
{
    let mut in_subset = vec![false; n];
    for &p in parties {
        in_subset[p] = true;
    }
    let mut groups: HashMap<Vec<u16>, Vec<(usize, Complex<T>)>> = HashMap::new();
    for (idx, amp) in b {
        let (row, rest) = split_index(idx, parties, &in_subset, dim);
        groups.entry(rest).or_default().push((row, amp.conj()));
    }
    let mut out: BTreeMap<(usize, usize), Complex<T>> = BTreeMap::new();
    for (idx, amp) in a {
        let (u, rest) = split_index(idx, parties, &in_subset, dim);
        if let Some(group) = groups.get(&rest) {
            for (v, bconj) in group {
                let slot = out.entry((u, *v)).or_insert_with(Complex::zero);
                *slot = slot.clone() + amp.clone() * bconj.clone();
            }
        }
    }
    out
}
