//! Existence verdicts for k-uniform states and the recipes that build them.
//!
//! Verdicts are decided in a fixed order: the Schmidt bound `k <= N/2`, then
//! constructive rules, then the cited fact table in `data/facts.toml`, then
//! tensor closure over factorizations `d = d1 * d2`. Anything left is
//! `Unknown`.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::ops::RangeInclusive;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::codes::{self, LinearCode};
use crate::gf::{is_prime, prime_power, FiniteField};
use crate::oa::OrthogonalArray;
use crate::states::{self, PureState};
use crate::{Error, Result};

pub const FACTS_TOML: &str = include_str!("../data/facts.toml");

/// How to build a state. Executing a recipe always ends in an exact
/// uniformity check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Recipe {
    /// GHZ state, 1-uniform.
    Ghz { d: u32, n: usize },
    /// Extended Reed-Solomon `[q+1, k]_q` array trimmed to `n` columns.
    MdsTrim { q: u32, k: usize, n: usize },
    /// Direct sum of trimmed Reed-Solomon arrays with the given widths.
    DirectSum { q: u32, k: usize, parts: Vec<usize> },
    /// Bundled self-dual code, array trimmed to `n` columns.
    BundledCode { name: String, k: usize, n: usize },
    BundledState { name: String },
    /// Party-wise tensor product; local dimensions multiply.
    Tensor { factors: Vec<Recipe> },
}

impl Recipe {
    /// Builds the state without checking uniformity.
    pub fn execute(&self) -> Result<PureState> {
        match self {
            Recipe::Ghz { d, n } => PureState::ghz(*d as usize, *n),
            Recipe::MdsTrim { q, k, n } => PureState::from_iroa(&mds_array(*q, *k, *n)?, *k),
            Recipe::DirectSum { q, k, parts } => {
                let mut arrays = parts.iter().map(|&n| mds_array(*q, *k, n));
                let first = arrays.next().ok_or_else(|| Error::InvalidArgument("empty direct sum".into()))??;
                let oa = arrays.try_fold(first, |acc, next| acc.direct_sum(&next?))?;
                PureState::from_iroa(&oa, *k)
            }
            Recipe::BundledCode { name, k, n } => {
                let code = codes::bundled::by_name(name)?;
                let oa = OrthogonalArray::from_code(&code)?.trim_to_iroa(*k, *n)?;
                PureState::from_iroa(&oa, *k)
            }
            Recipe::BundledState { name } => states::bundled::by_name(name),
            Recipe::Tensor { factors } => {
                let mut parts = factors.iter().map(Recipe::execute);
                let first = parts.next().ok_or_else(|| Error::InvalidArgument("empty tensor product".into()))??;
                parts.try_fold(first, |acc, next| acc.tensor_parties(&next?))
            }
        }
    }

    /// One-line description.
    pub fn describe(&self) -> String {
        match self {
            Recipe::Ghz { d, n } => format!("GHZ state of {n} parties, d = {d}"),
            Recipe::MdsTrim { q, k, n } => format!("extended Reed-Solomon [{}, {k}]_{q} array trimmed to {n} columns", q + 1),
            Recipe::DirectSum { q, k, parts } => {
                format!("direct sum of Reed-Solomon [., {k}]_{q} arrays of widths {parts:?}")
            }
            Recipe::BundledCode { name, n, .. } => format!("bundled self-dual code {name} trimmed to {n} columns"),
            Recipe::BundledState { name } => format!("bundled state {name}"),
            Recipe::Tensor { factors } => {
                let inner: Vec<String> = factors.iter().map(Recipe::describe).collect();
                format!("tensor product of [{}]", inner.join("; "))
            }
        }
    }
}

/// Extended Reed-Solomon array over GF(q) with strength `k`, trimmed to `n` columns.
pub fn mds_array(q: u32, k: usize, n: usize) -> Result<OrthogonalArray> {
    let f = FiniteField::of_order(q)?.into_shared();
    OrthogonalArray::from_code(&LinearCode::mds(&f, k)?)?.trim_to_iroa(k, n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    ExistsConstructive,
    ExistsCited,
    NotExists,
    Unknown,
}

impl Status {
    /// Table symbol: `√`, `×` or `?`.
    pub fn symbol(self) -> char {
        match self {
            Status::ExistsConstructive | Status::ExistsCited => '√',
            Status::NotExists => '×',
            Status::Unknown => '?',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExistenceVerdict {
    /// A recipe means the verdict is constructive.
    Exists { citation: String, recipe: Option<Recipe> },
    NotExists { citation: String },
    Unknown { reason: String },
}

impl ExistenceVerdict {
    pub fn status(&self) -> Status {
        match self {
            ExistenceVerdict::Exists { recipe: Some(_), .. } => Status::ExistsConstructive,
            ExistenceVerdict::Exists { recipe: None, .. } => Status::ExistsCited,
            ExistenceVerdict::NotExists { .. } => Status::NotExists,
            ExistenceVerdict::Unknown { .. } => Status::Unknown,
        }
    }

    pub fn exists(&self) -> bool {
        matches!(self, ExistenceVerdict::Exists { .. })
    }

    pub fn recipe(&self) -> Option<&Recipe> {
        match self {
            ExistenceVerdict::Exists { recipe, .. } => recipe.as_ref(),
            _ => None,
        }
    }

    /// Citation, construction description, or reason for `Unknown`.
    pub fn provenance(&self) -> &str {
        match self {
            ExistenceVerdict::Exists { citation, .. } | ExistenceVerdict::NotExists { citation } => citation,
            ExistenceVerdict::Unknown { reason } => reason,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum DimSelector {
    Keyword(String),
    List(Vec<u32>),
    Residue { modulus: u32, excluded: u32 },
}

impl DimSelector {
    fn matches(&self, d: u32) -> bool {
        match self {
            DimSelector::Keyword(k) => match k.as_str() {
                "all" => true,
                "prime" => is_prime(d as u64),
                "prime_power" => prime_power(d as u64).is_some(),
                _ => false,
            },
            DimSelector::List(ds) => ds.contains(&d),
            DimSelector::Residue { modulus, excluded } => d % modulus != *excluded,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
enum FactStatus {
    Exists,
    NotExists,
}

#[derive(Debug, Clone, Deserialize)]
struct Fact {
    k: usize,
    d: DimSelector,
    n_min: usize,
    n_max: Option<usize>,
    #[serde(default)]
    except: Vec<(u32, usize)>,
    status: FactStatus,
    citation: String,
}

impl Fact {
    fn covers(&self, k: usize, d: u32, n: usize) -> bool {
        self.k == k
            && self.d.matches(d)
            && n >= self.n_min
            && self.n_max.map_or(true, |m| n <= m)
            && !self.except.contains(&(d, n))
    }
}

/// Cited existence facts, parsed once from the bundled TOML file.
#[derive(Debug, Clone, Deserialize)]
pub struct FactTable {
    pub version: u32,
    #[serde(rename = "fact")]
    facts: Vec<Fact>,
}

impl FactTable {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse { line: 0, message: e.to_string() })
    }

    pub fn global() -> &'static FactTable {
        static TABLE: OnceLock<FactTable> = OnceLock::new();
        TABLE.get_or_init(|| FactTable::parse(FACTS_TOML).expect("bundled fact table parses"))
    }

    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    /// First matching entry. A `NotExists` entry wins over an `Exists` one.
    pub fn lookup(&self, k: usize, d: u32, n: usize) -> Option<ExistenceVerdict> {
        let hits: Vec<&Fact> = self.facts.iter().filter(|f| f.covers(k, d, n)).collect();
        let pick = hits.iter().find(|f| f.status == FactStatus::NotExists).or_else(|| hits.first())?;
        Some(match pick.status {
            FactStatus::Exists => ExistenceVerdict::Exists { citation: pick.citation.clone(), recipe: None },
            FactStatus::NotExists => ExistenceVerdict::NotExists { citation: pick.citation.clone() },
        })
    }
}

/// Version of the bundled fact table.
pub fn facts_version() -> u32 {
    FactTable::global().version
}

pub const SCHMIDT_CITATION: &str = "Schmidt decomposition: a k-uniform state needs k <= floor(N/2)";

/// Widths for the direct-sum rule: take the largest admissible part while
/// the remainder stays at least `2k`.
pub fn greedy_parts(n: usize, k: usize, max_part: usize) -> Option<Vec<usize>> {
    if n < 2 * k || max_part < 2 * k {
        return None;
    }
    let mut parts = Vec::new();
    let mut rest = n;
    while rest > max_part {
        let part = max_part.min(rest - 2 * k);
        if part < 2 * k {
            return None;
        }
        parts.push(part);
        rest -= part;
    }
    parts.push(rest);
    Some(parts)
}

/// Bundled self-dual codes `(name, q, length, distance)`.
const BUNDLED_CODES: [(&str, u32, usize, usize); 2] = [("golay12_3", 3, 12, 6), ("sd12_4", 4, 12, 6)];

/// Constructive rules, in priority order.
fn constructive(k: usize, d: u32, n: usize) -> Option<(Recipe, String)> {
    if k == 1 {
        return Some((Recipe::Ghz { d, n }, "GHZ state (1-uniform for every d, N)".into()));
    }
    let q = d as usize;
    if prime_power(d as u64).is_some() {
        if q + 1 >= 2 * k && (2 * k..=q + 1).contains(&n) {
            let why = format!("extended Reed-Solomon [{}, {k}, {}]_{d} code trimmed to N = {n}", q + 1, q - k + 2);
            return Some((Recipe::MdsTrim { q: d, k, n }, why));
        }
        if q + 2 >= 4 * k && n > q + 1 {
            let parts = greedy_parts(n, k, q + 1)?;
            let why = format!("direct sum of trimmed Reed-Solomon arrays over GF({d}), widths {parts:?}");
            return Some((Recipe::DirectSum { q: d, k, parts }, why));
        }
    }
    for (name, cq, len, w) in BUNDLED_CODES {
        if cq == d && k < w && (len + k + 1 - w..=len).contains(&n) {
            let why = format!("self-dual [{len}, {}, {w}]_{cq} code ({name}) trimmed to N = {n}", len / 2);
            return Some((Recipe::BundledCode { name: name.into(), k, n }, why));
        }
    }
    if d == 2 && n == 6 && k <= 3 {
        return Some((Recipe::BundledState { name: "six_qubit_ame".into() }, "bundled 3-uniform six-qubit state".into()));
    }
    None
}

/// Ordered factorizations `d = a * b` with `2 <= a <= b`.
fn factor_pairs(d: u32) -> Vec<(u32, u32)> {
    (2..).take_while(|a| a * a <= d).filter(|a| d % a == 0).map(|a| (a, d / a)).collect()
}

/// Flattens nested tensor recipes.
fn tensor_of(a: Recipe, b: Recipe) -> Recipe {
    let mut factors = Vec::new();
    for r in [a, b] {
        match r {
            Recipe::Tensor { factors: inner } => factors.extend(inner),
            other => factors.push(other),
        }
    }
    Recipe::Tensor { factors }
}

/// Decides whether a k-uniform state of `n` parties with local dimension `d`
/// exists, preferring verdicts that come with a construction.
pub fn exists_k_uniform(k: usize, d: u32, n: usize) -> ExistenceVerdict {
    if k == 0 || d < 2 || n < 2 {
        return ExistenceVerdict::Unknown { reason: format!("parameters outside k >= 1, d >= 2, N >= 2: ({k}, {d}, {n})") };
    }
    if 2 * k > n {
        return ExistenceVerdict::NotExists { citation: SCHMIDT_CITATION.into() };
    }
    if let Some((recipe, citation)) = constructive(k, d, n) {
        return ExistenceVerdict::Exists { citation, recipe: Some(recipe) };
    }
    let fact = FactTable::global().lookup(k, d, n);
    if let Some(v @ ExistenceVerdict::NotExists { .. }) = &fact {
        return v.clone();
    }
    let mut cited: Option<ExistenceVerdict> = fact;
    for (a, b) in factor_pairs(d) {
        let (va, vb) = (exists_k_uniform(k, a, n), exists_k_uniform(k, b, n));
        if !(va.exists() && vb.exists()) {
            continue;
        }
        let citation = format!("tensor product of d = {a} ({}) and d = {b} ({})", va.provenance(), vb.provenance());
        match (va.recipe(), vb.recipe()) {
            (Some(ra), Some(rb)) => {
                return ExistenceVerdict::Exists { citation, recipe: Some(tensor_of(ra.clone(), rb.clone())) };
            }
            _ => {
                cited.get_or_insert(ExistenceVerdict::Exists { citation, recipe: None });
            }
        }
    }
    cited.unwrap_or_else(|| ExistenceVerdict::Unknown {
        reason: format!("no implemented rule or cited fact covers k = {k}, d = {d}, N = {n}"),
    })
}

/// Builds a k-uniform state through the catalog's recipe and checks it
/// exactly. Fails with [`Error::Unsupported`] when no recipe is known.
pub fn construct_k_uniform(k: usize, d: u32, n: usize) -> Result<PureState> {
    let verdict = exists_k_uniform(k, d, n);
    let Some(recipe) = verdict.recipe() else {
        let reason = match &verdict {
            ExistenceVerdict::Exists { citation, .. } => format!("exists by citation only ({citation})"),
            other => other.provenance().to_string(),
        };
        return Err(Error::Unsupported { k, d, n, reason: nearest_rule(k, d, n, &reason) });
    };
    let psi = recipe.execute()?;
    if !psi.verify_k_uniform(k)?.passed() {
        return Err(Error::NotUniform { k });
    }
    Ok(psi)
}

fn nearest_rule(k: usize, d: u32, n: usize, reason: &str) -> String {
    let hint = if prime_power(d as u64).is_some() {
        if (d as usize) + 1 < 2 * k {
            format!("Reed-Solomon rule needs d >= {}", 2 * k - 1)
        } else if n > d as usize + 1 {
            format!("Reed-Solomon rule needs N <= {}; direct sums need d >= {}", d + 1, 4 * k - 2)
        } else {
            "no rule applies".to_string()
        }
    } else {
        "composite d needs every tensor factor to be constructible".to_string()
    };
    format!("{reason}; {hint}")
}

#[derive(Debug, Clone, Serialize)]
pub struct TableCell {
    pub d: u32,
    #[serde(rename = "N")]
    pub n: usize,
    pub status: Status,
    pub symbol: char,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub citation: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recipe: Option<Recipe>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TableGrid {
    pub k: usize,
    pub facts_version: u32,
    #[serde(rename = "N")]
    pub columns: Vec<usize>,
    pub rows: Vec<TableRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TableRow {
    pub d: u32,
    pub cells: Vec<TableCell>,
}

impl TableGrid {
    pub fn cell(&self, d: u32, n: usize) -> Option<&TableCell> {
        self.rows.iter().find(|r| r.d == d)?.cells.iter().find(|c| c.n == n)
    }

    /// Symbols of row `d`, left to right.
    pub fn row_symbols(&self, d: u32) -> Option<String> {
        Some(self.rows.iter().find(|r| r.d == d)?.cells.iter().map(|c| c.symbol).collect())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = write!(out, "k = {}\n{:>5} |", self.k, "d\\N");
        for n in &self.columns {
            let _ = write!(out, "{n:>4}");
        }
        out.push('\n');
        let _ = writeln!(out, "{}", "-".repeat(7 + 4 * self.columns.len()));
        for row in &self.rows {
            let _ = write!(out, "{:>5} |", row.d);
            for c in &row.cells {
                let _ = write!(out, "{:>4}", c.symbol);
            }
            out.push('\n');
        }
        out
    }
}

/// Verdict grid over `d_rows x n_range`, with per-cell provenance.
pub fn emit_table(k: usize, d_rows: &[u32], n_range: RangeInclusive<usize>) -> TableGrid {
    let columns: Vec<usize> = n_range.collect();
    let rows = d_rows
        .iter()
        .map(|&d| TableRow {
            d,
            cells: columns
                .iter()
                .map(|&n| {
                    let v = exists_k_uniform(k, d, n);
                    TableCell {
                        d,
                        n,
                        status: v.status(),
                        symbol: v.status().symbol(),
                        citation: Some(v.provenance().to_string()),
                        recipe: v.recipe().cloned(),
                    }
                })
                .collect(),
        })
        .collect();
    TableGrid { k, facts_version: facts_version(), columns, rows }
}

/// `(k, d, N)` triples that are constructively `Exists` yet listed as
/// `NotExists` in the fact table. Empty for a consistent table.
pub fn inconsistencies(ks: RangeInclusive<usize>, ds: RangeInclusive<u32>, ns: RangeInclusive<usize>) -> Vec<(usize, u32, usize)> {
    let table = FactTable::global();
    let mut bad = BTreeSet::new();
    for k in ks {
        for d in ds.clone() {
            for n in ns.clone() {
                if constructive(k, d, n).is_some() && matches!(table.lookup(k, d, n), Some(ExistenceVerdict::NotExists { .. })) {
                    bad.insert((k, d, n));
                }
            }
        }
    }
    bad.into_iter().collect()
}
