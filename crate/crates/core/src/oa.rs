//! Orthogonal arrays.
//!
//! An `OA(r, N, d, k)` is an `r x N` array over `d` symbols in which every
//! choice of `k` columns contains each `k`-tuple exactly `r / d^k` times. It
//! is *irredundant* when the rows stay distinct after deleting any `k`
//! columns, which happens exactly when the minimum row distance exceeds `k`.
//! Irredundant arrays are what [`PureState::from_iroa`](crate::states::PureState::from_iroa)
//! turns into k-uniform states.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::fs;
use std::path::Path;

use itertools::Itertools;
use rayon::prelude::*;

use crate::codes::{content_lines, parse_row, Distance, LinearCode};
use crate::{Caps, Error, Result};

pub type Symbol = u16;

#[derive(Clone, PartialEq, Eq)]
pub struct OrthogonalArray {
    levels: usize,
    factors: usize,
    /// Row-major, `runs * factors`.
    cells: Vec<Symbol>,
    strength: usize,
    provenance: String,
    /// Rows form a subgroup of Z^N under some field addition (possibly with
    /// repetition), so distances reduce to weights.
    linear: bool,
}

impl OrthogonalArray {
    /// Array from explicit rows. `strength` is the claimed strength; it is not
    /// checked here (see [`verify_strength`](Self::verify_strength)).
    pub fn new(levels: usize, rows: Vec<Vec<Symbol>>, strength: usize, provenance: impl Into<String>) -> Result<Self> {
        let factors = rows.first().map_or(0, Vec::len);
        if factors == 0 || levels < 1 {
            return Err(Error::ShapeMismatch("array needs at least one row, one column and one level".into()));
        }
        let mut cells = Vec::with_capacity(rows.len() * factors);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != factors {
                return Err(Error::ShapeMismatch(format!("row {i} has {} entries, expected {factors}", row.len())));
            }
            if let Some(&s) = row.iter().find(|&&s| s as usize >= levels) {
                return Err(Error::ShapeMismatch(format!("symbol {s} in row {i} exceeds {} levels", levels)));
            }
            cells.extend_from_slice(row);
        }
        Ok(OrthogonalArray { levels, factors, cells, strength, provenance: provenance.into(), linear: false })
    }

    /// All codewords of `code` as rows; strength is `dual distance - 1`.
    pub fn from_code(code: &LinearCode) -> Result<Self> {
        Caps::check("orthogonal array rows", code.size(), Caps::global().oa_rows)?;
        let strength = match code.dual_distance()? {
            Distance::Finite(w) => w - 1,
            Distance::Infinite => code.length(),
        };
        let rows = code.codewords()?;
        let mut oa = OrthogonalArray::new(code.field().order() as usize, rows, strength, format!("from {code:?}"))?;
        oa.linear = true;
        Ok(oa)
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn factors(&self) -> usize {
        self.factors
    }

    pub fn runs(&self) -> usize {
        self.cells.len() / self.factors
    }

    /// Claimed strength.
    pub fn strength(&self) -> usize {
        self.strength
    }

    /// `r / d^k` for the claimed strength, if integral.
    pub fn index(&self) -> Option<usize> {
        let dk = checked_pow(self.levels, self.strength)?;
        (self.runs() % dk == 0).then(|| self.runs() / dk)
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn is_linear(&self) -> bool {
        self.linear
    }

    pub fn row(&self, i: usize) -> &[Symbol] {
        &self.cells[i * self.factors..(i + 1) * self.factors]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Symbol]> {
        self.cells.chunks(self.factors)
    }

    /// Every `k` columns see every `k`-tuple equally often.
    pub fn verify_strength(&self, k: usize) -> bool {
        if k > self.factors {
            return false;
        }
        let Some(dk) = checked_pow(self.levels, k) else {
            return false;
        };
        let r = self.runs();
        if r % dk != 0 {
            return false;
        }
        let lambda = (r / dk) as u32;
        (0..self.factors).combinations(k).par_bridge().all(|cols| {
            let mut tally = vec![0u32; dk];
            for row in self.rows() {
                let key = cols.iter().fold(0usize, |acc, &c| acc * self.levels + row[c] as usize);
                tally[key] += 1;
            }
            tally.iter().all(|&c| c == lambda)
        })
    }

    /// Largest `k` passing [`verify_strength`](Self::verify_strength).
    pub fn actual_strength(&self) -> usize {
        (0..=self.factors).take_while(|&k| self.verify_strength(k)).last().unwrap_or(0)
    }

    /// Minimum Hamming distance between distinct row positions; 0 when two
    /// rows coincide.
    pub fn min_distance(&self) -> Result<usize> {
        if self.runs() < 2 {
            return Ok(self.factors);
        }
        if self.linear {
            let mut zeros = 0;
            let mut best = usize::MAX;
            for row in self.rows() {
                let w = row.iter().filter(|&&s| s != 0).count();
                if w == 0 {
                    zeros += 1;
                } else {
                    best = best.min(w);
                }
            }
            return Ok(if zeros > 1 { 0 } else { best });
        }
        self.pairwise_min_distance()
    }

    /// Quadratic scan over row pairs; independent of the linear shortcut.
    pub fn pairwise_min_distance(&self) -> Result<usize> {
        let r = self.runs();
        Caps::check("pairwise distance rows", r as u128, Caps::global().pairwise_rows)?;
        let best = (0..r)
            .into_par_iter()
            .map(|i| {
                let a = self.row(i);
                (i + 1..r)
                    .map(|j| a.iter().zip(self.row(j)).filter(|(x, y)| x != y).count())
                    .min()
                    .unwrap_or(usize::MAX)
            })
            .min()
            .unwrap_or(usize::MAX);
        Ok(best.min(self.factors))
    }

    /// Strength `k` holds and the minimum distance is at least `k + 1`.
    pub fn is_irredundant(&self, k: usize) -> bool {
        self.irredundancy_violation(k).is_none()
    }

    /// Which criterion fails, if any.
    pub fn irredundancy_violation(&self, k: usize) -> Option<&'static str> {
        if !self.verify_strength(k) {
            return Some("strength");
        }
        match self.min_distance() {
            Ok(w) if w > k => None,
            Ok(_) => Some("minimum distance"),
            Err(_) => Some("minimum distance not computable under caps"),
        }
    }

    /// Definition-level check: strength `k`, and deleting any `k` columns
    /// leaves `r` distinct rows.
    pub fn is_irredundant_by_deletion(&self, k: usize) -> bool {
        if !self.verify_strength(k) {
            return false;
        }
        (0..self.factors).combinations(k).par_bridge().all(|removed| {
            let keep: Vec<usize> = (0..self.factors).filter(|c| !removed.contains(c)).collect();
            let mut seen = HashSet::with_capacity(self.runs());
            self.rows().all(|row| seen.insert(keep.iter().map(|&c| row[c]).collect::<Vec<_>>()))
        })
    }

    /// Removes the given columns; the claimed strength is kept (clamped to
    /// the new width).
    pub fn delete_columns(&self, cols: &[usize]) -> Result<Self> {
        let drop: BTreeSet<usize> = cols.iter().copied().collect();
        if let Some(&bad) = drop.iter().find(|&&c| c >= self.factors) {
            return Err(Error::InvalidColumns(format!("column {bad} out of range for {} factors", self.factors)));
        }
        if drop.len() >= self.factors {
            return Err(Error::InvalidColumns("cannot delete every column".into()));
        }
        if drop.is_empty() {
            return Ok(self.clone());
        }
        let keep: Vec<usize> = (0..self.factors).filter(|c| !drop.contains(c)).collect();
        let cells = self.rows().flat_map(|row| keep.iter().map(move |&c| row[c])).collect();
        Ok(OrthogonalArray {
            levels: self.levels,
            factors: keep.len(),
            cells,
            strength: self.strength.min(keep.len()),
            provenance: format!("{} minus columns {:?}", self.provenance, drop),
            linear: self.linear,
        })
    }

    /// All concatenations `(a, b)` of a row of `self` and a row of `other`.
    /// Strength is the smaller of the two.
    pub fn direct_sum(&self, other: &OrthogonalArray) -> Result<Self> {
        if self.levels != other.levels {
            return Err(Error::ShapeMismatch(format!("{} levels vs {}", self.levels, other.levels)));
        }
        let runs = self.runs() as u128 * other.runs() as u128;
        Caps::check("orthogonal array rows", runs, Caps::global().oa_rows)?;
        let mut cells = Vec::with_capacity(runs as usize * (self.factors + other.factors));
        for a in self.rows() {
            for b in other.rows() {
                cells.extend_from_slice(a);
                cells.extend_from_slice(b);
            }
        }
        Ok(OrthogonalArray {
            levels: self.levels,
            factors: self.factors + other.factors,
            cells,
            strength: self.strength.min(other.strength),
            provenance: format!("({}) + ({})", self.provenance, other.provenance),
            linear: self.linear && other.linear,
        })
    }

    /// Deletes trailing columns down to `target` factors; the result is
    /// irredundant for `k` whenever `target` is inside `[N - w + k + 1, N]`.
    pub fn trim_to_iroa(&self, k: usize, target: usize) -> Result<Self> {
        if !self.verify_strength(k) {
            return Err(Error::NotIrredundant { k, criterion: "strength" });
        }
        let n = self.factors;
        let w = self.min_distance()?;
        let low = (n + k + 1).saturating_sub(w);
        if w <= k || target < low.max(1) || target > n {
            return Err(Error::TrimWindow { target, low, high: if w <= k { 0 } else { n } });
        }
        let cols: Vec<usize> = (target..n).collect();
        let mut out = self.delete_columns(&cols)?;
        out.strength = k;
        out.provenance = format!("{} trimmed to {target}", self.provenance);
        Ok(out)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("oa {} {} {} {}\n", self.runs(), self.factors, self.levels, self.strength);
        for row in self.rows() {
            s.push_str(&row.iter().join(" "));
            s.push('\n');
        }
        s
    }

    /// Parses `oa r N d k` followed by `r` rows of `N` symbols.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        let (hline, header) = lines.next().ok_or(Error::Parse { line: 1, message: "empty array file".into() })?;
        let f: Vec<&str> = header.split_whitespace().collect();
        if f.len() != 5 || f[0] != "oa" {
            return Err(Error::Parse { line: hline, message: "expected header `oa r N d k`".into() });
        }
        let nums: Vec<usize> = f[1..]
            .iter()
            .map(|s| s.parse())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse { line: hline, message: format!("bad header number: {e}") })?;
        let (r, n, d, k) = (nums[0], nums[1], nums[2], nums[3]);
        let mut rows = Vec::with_capacity(r);
        for (line, content) in lines {
            let row = parse_row(line, content, n)?;
            if let Some(&s) = row.iter().find(|&&s| s as usize >= d) {
                return Err(Error::Parse { line, message: format!("symbol {s} outside [0, {d})") });
            }
            rows.push(row.into_iter().map(|s| s as Symbol).collect());
        }
        if rows.len() != r {
            return Err(Error::Parse { line: 0, message: format!("header promises {r} rows, found {}", rows.len()) });
        }
        OrthogonalArray::new(d, rows, k, "file")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_text())?;
        Ok(())
    }
}

impl fmt::Debug for OrthogonalArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OA({}, {}, {}, {}) [{}]", self.runs(), self.factors, self.levels, self.strength, self.provenance)
    }
}

fn checked_pow(base: usize, exp: usize) -> Option<usize> {
    base.checked_pow(u32::try_from(exp).ok()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FiniteField;

    fn example_rows() -> Vec<Vec<Symbol>> {
        vec![
            vec![0, 0, 0, 0],
            vec![0, 1, 1, 1],
            vec![0, 2, 2, 2],
            vec![1, 0, 2, 1],
            vec![1, 1, 0, 2],
            vec![1, 2, 1, 0],
            vec![2, 0, 1, 2],
            vec![2, 1, 2, 0],
            vec![2, 2, 0, 1],
        ]
    }

    fn example() -> OrthogonalArray {
        OrthogonalArray::new(3, example_rows(), 2, "example").unwrap()
    }

    #[test]
    fn example_strength_and_distance() {
        let a = example();
        assert!(a.verify_strength(2));
        assert!(!a.verify_strength(3));
        assert_eq!(a.min_distance().unwrap(), 3);
        assert!(a.is_irredundant(2));
        assert!(a.is_irredundant_by_deletion(2));
        assert_eq!(a.index(), Some(1));
    }

    #[test]
    fn deleting_a_row_breaks_strength() {
        let mut rows = example_rows();
        rows.pop();
        let a = OrthogonalArray::new(3, rows, 2, "short").unwrap();
        assert!(!a.verify_strength(2));
        assert!(!a.verify_strength(1));
    }

    #[test]
    fn duplicate_row_has_distance_zero() {
        let mut rows = example_rows();
        rows.push(rows[4].clone());
        let a = OrthogonalArray::new(3, rows, 2, "dup").unwrap();
        assert_eq!(a.min_distance().unwrap(), 0);
    }

    #[test]
    fn all_pairs_is_redundant() {
        let rows = vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]];
        let a = OrthogonalArray::new(2, rows, 2, "pairs").unwrap();
        assert!(a.verify_strength(2));
        assert_eq!(a.min_distance().unwrap(), 1);
        assert!(!a.is_irredundant(2));
        assert!(!a.is_irredundant_by_deletion(2));
    }

    #[test]
    fn column_deletion() {
        let a = example();
        let b = a.delete_columns(&[3]).unwrap();
        assert_eq!((b.runs(), b.factors()), (9, 3));
        assert!(b.verify_strength(2));
        assert_eq!(a.delete_columns(&[]).unwrap(), a);
        assert!(a.delete_columns(&[0, 1, 2, 3]).is_err());
        assert!(a.delete_columns(&[7]).is_err());
    }

    #[test]
    fn trim_windows() {
        let f = FiniteField::new(5, 1).unwrap().into_shared();
        let a = OrthogonalArray::from_code(&LinearCode::mds(&f, 2).unwrap()).unwrap();
        assert_eq!((a.runs(), a.factors(), a.strength()), (25, 6, 2));
        let t = a.trim_to_iroa(2, 4).unwrap();
        assert_eq!(t.factors(), 4);
        assert!(t.is_irredundant(2));
        assert_eq!(a.trim_to_iroa(2, 6).unwrap().factors(), 6);
        assert!(matches!(a.trim_to_iroa(2, 3), Err(Error::TrimWindow { low: 4, high: 6, .. })));
        let two_dropped = a.delete_columns(&[1, 4]).unwrap();
        assert!(two_dropped.verify_strength(2));

        let e = example();
        assert!(matches!(e.trim_to_iroa(2, 3), Err(Error::TrimWindow { low: 4, high: 4, .. })));
    }

    #[test]
    fn linear_shortcut_agrees_with_pairwise() {
        let f = FiniteField::new(3, 1).unwrap().into_shared();
        let c = LinearCode::mds(&f, 2).unwrap();
        let a = OrthogonalArray::from_code(&c.direct_sum(&c).unwrap()).unwrap();
        assert_eq!((a.runs(), a.factors()), (81, 8));
        assert!(a.verify_strength(2));
        assert_eq!(a.min_distance().unwrap(), 3);
        assert_eq!(a.pairwise_min_distance().unwrap(), 3);
        assert!(a.is_irredundant(2) && a.is_irredundant_by_deletion(2));
    }

    #[test]
    fn text_round_trip() {
        let a = example();
        let b = OrthogonalArray::parse(&a.to_text()).unwrap();
        assert_eq!(b.rows().collect::<Vec<_>>(), a.rows().collect::<Vec<_>>());
        assert!(OrthogonalArray::parse("oa 2 2 2 1\n0 0\n1 2\n").is_err());
        assert!(OrthogonalArray::parse("oa 3 2 2 1\n0 0\n1 1\n").is_err());
    }
}
