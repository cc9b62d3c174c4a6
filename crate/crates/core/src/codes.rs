//! Linear codes over GF(q).
//!
//! A [`LinearCode`] is stored by its generator matrix only. Minimum and dual
//! distances are computed exactly on first use and cached. A code of
//! dimension zero (the dual of a full space) has distance [`Distance::Infinite`].
//!
//! Two independent routes to the dual distance exist: enumerating the dual
//! code, and finding the smallest linearly dependent set of generator
//! columns. [`LinearCode::dual_distance`] picks the cheaper one; both are
//! public so they can be checked against each other.

use std::fmt;
use std::fs;
use std::path::Path;
use std::sync::OnceLock;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::gf::{Elem, Field, FiniteField};
use crate::linalg::{self, Matrix};
use crate::{Caps, Error, Result};

/// Hamming distance, or the sentinel for "no nonzero codeword".
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Distance {
    Finite(usize),
    Infinite,
}

impl Distance {
    pub fn finite(self) -> Option<usize> {
        match self {
            Distance::Finite(w) => Some(w),
            Distance::Infinite => None,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(w) => write!(f, "{w}"),
            Distance::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Distance {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Distance::Finite(w) => s.serialize_u64(*w as u64),
            Distance::Infinite => s.serialize_str("inf"),
        }
    }
}

#[derive(Clone)]
pub struct LinearCode {
    field: Field,
    length: usize,
    generator: Matrix,
    min_distance: OnceLock<Distance>,
    dual_distance: OnceLock<Distance>,
}

/// Parity-check matrix `H` with `H c^T = 0` exactly for codewords `c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityCheck {
    pub matrix: Matrix,
}

impl LinearCode {
    /// Builds a code from generator rows, which must be linearly independent.
    pub fn new(field: &Field, length: usize, generator: Matrix) -> Result<Self> {
        if length == 0 {
            return Err(Error::DimensionOutOfRange { dim: 0, reason: "code length must be positive".into() });
        }
        for row in &generator {
            if row.len() != length {
                return Err(Error::ShapeMismatch(format!("generator row of length {} in a code of length {length}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&x| x as u32 >= field.order()) {
                return Err(Error::ElementOutOfRange { value: bad as u64, order: field.order() });
            }
        }
        let rank = linalg::rank(field, &generator);
        if rank != generator.len() {
            return Err(Error::RankDeficient { rank, expected: generator.len() });
        }
        Ok(LinearCode {
            field: field.clone(),
            length,
            generator,
            min_distance: OnceLock::new(),
            dual_distance: OnceLock::new(),
        })
    }

    /// Extended Reed-Solomon `[q+1, t, q-t+2]_q` code.
    ///
    /// Column `x` (one per field element, in encoding order) is
    /// `(1, x, ..., x^{t-1})`; the last column is the point at infinity
    /// `(0, ..., 0, 1)`.
    pub fn mds(field: &Field, t: usize) -> Result<Self> {
        let q = field.order() as usize;
        if t < 1 || t > q + 1 {
            return Err(Error::DimensionOutOfRange { dim: t, reason: format!("MDS dimension must lie in [1, {}]", q + 1) });
        }
        let mut g = vec![vec![0 as Elem; q + 1]; t];
        for x in field.elements() {
            for (i, row) in g.iter_mut().enumerate() {
                row[x as usize] = field.pow(x, i as u64);
            }
        }
        g[t - 1][q] = 1;
        let code = LinearCode::new(field, q + 1, g)?;
        let _ = code.min_distance.set(Distance::Finite(q + 2 - t));
        let _ = code.dual_distance.set(if t == q + 1 { Distance::Infinite } else { Distance::Finite(t + 1) });
        Ok(code)
    }

    /// `[n, 1, n]` repetition code.
    pub fn repetition(field: &Field, n: usize) -> Result<Self> {
        LinearCode::new(field, n, vec![vec![1; n]])
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn dimension(&self) -> usize {
        self.generator.len()
    }

    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    /// Number of codewords, `q^t`, saturating.
    pub fn size(&self) -> u128 {
        (self.field.order() as u128).saturating_pow(self.dimension() as u32)
    }

    pub fn parity_check(&self) -> ParityCheck {
        ParityCheck { matrix: linalg::null_space(&self.field, &self.generator, self.length) }
    }

    pub fn dual(&self) -> LinearCode {
        let code = LinearCode {
            field: self.field.clone(),
            length: self.length,
            generator: self.parity_check().matrix,
            min_distance: OnceLock::new(),
            dual_distance: OnceLock::new(),
        };
        if let Some(&w) = self.min_distance.get() {
            let _ = code.dual_distance.set(w);
        }
        code
    }

    pub fn encode(&self, message: &[Elem]) -> Vec<Elem> {
        let f = &self.field;
        let mut out = vec![0; self.length];
        for (&c, row) in message.iter().zip(&self.generator) {
            if c != 0 {
                for (o, &g) in out.iter_mut().zip(row) {
                    *o = f.add(*o, f.mul(c, g));
                }
            }
        }
        out
    }

    /// All `q^t` codewords. Message digits are taken with generator row 0
    /// most significant, so row `i` of the result encodes the base-`q`
    /// expansion of `i`.
    pub fn codewords(&self) -> Result<Vec<Vec<Elem>>> {
        Caps::check("codeword listing", self.size(), Caps::global().oa_rows)?;
        let q = self.field.order() as usize;
        let t = self.dimension();
        let multiples = self.row_multiples();
        let mut out: Vec<Vec<Elem>> = Vec::with_capacity(self.size() as usize);
        let mut stack: Vec<Vec<Elem>> = vec![vec![0; self.length]];
        // depth-first in message order
        fn walk(
            f: &FiniteField,
            depth: usize,
            t: usize,
            q: usize,
            multiples: &[Vec<Vec<Elem>>],
            stack: &mut Vec<Vec<Elem>>,
            out: &mut Vec<Vec<Elem>>,
        ) {
            if depth == t {
                out.push(stack.last().unwrap().clone());
                return;
            }
            for c in 0..q {
                let next: Vec<Elem> =
                    stack.last().unwrap().iter().zip(&multiples[depth][c]).map(|(&a, &b)| f.add(a, b)).collect();
                stack.push(next);
                walk(f, depth + 1, t, q, multiples, stack, out);
                stack.pop();
            }
        }
        walk(&self.field, 0, t, q, &multiples, &mut stack, &mut out);
        Ok(out)
    }

    /// `multiples[i][c] = c * row_i`.
    fn row_multiples(&self) -> Vec<Vec<Vec<Elem>>> {
        let f = &self.field;
        self.generator
            .iter()
            .map(|row| f.elements().map(|c| row.iter().map(|&g| f.mul(c, g)).collect()).collect())
            .collect()
    }

    /// Exact minimum Hamming weight over nonzero codewords.
    ///
    /// Enumerates one representative per projective point (first nonzero
    /// message coefficient equal to 1), which covers every weight.
    pub fn min_distance(&self) -> Result<Distance> {
        if let Some(&w) = self.min_distance.get() {
            return Ok(w);
        }
        Caps::check("minimum-distance enumeration", self.size(), Caps::global().codewords)?;
        let w = self.enumerate_min_weight();
        Ok(*self.min_distance.get_or_init(|| w))
    }

    fn enumerate_min_weight(&self) -> Distance {
        let t = self.dimension();
        if t == 0 {
            return Distance::Infinite;
        }
        let q = self.field.order() as usize;
        let multiples = self.row_multiples();
        let f = &*self.field;
        let n = self.length;
        // tasks: leading row `lead` with coefficient 1, and the coefficient of
        // the following row (if any) fixed to split the work
        let tasks: Vec<(usize, Option<usize>)> = (0..t)
            .flat_map(|lead| {
                if lead + 1 < t {
                    (0..q).map(|c| (lead, Some(c))).collect::<Vec<_>>()
                } else {
                    vec![(lead, None)]
                }
            })
            .collect();
        let best = tasks
            .par_iter()
            .map(|&(lead, second)| {
                let mut start: Vec<Elem> = multiples[lead][1].clone();
                let mut from = lead + 1;
                if let Some(c) = second {
                    for (s, &m) in start.iter_mut().zip(&multiples[lead + 1][c]) {
                        *s = f.add(*s, m);
                    }
                    from += 1;
                }
                let mut best = n;
                min_weight_dfs(f, &multiples, from, q, &mut start, &mut best);
                best
            })
            .min()
            .unwrap_or(n);
        Distance::Finite(best)
    }

    /// Dual distance through whichever exact route is cheaper.
    pub fn dual_distance(&self) -> Result<Distance> {
        if let Some(&w) = self.dual_distance.get() {
            return Ok(w);
        }
        let t = self.dimension();
        let n = self.length;
        let enum_cost = (self.field.order() as u128).saturating_pow((n - t) as u32);
        let column_cost: u128 = (1..=(t + 1).min(n)).map(|s| binomial(n, s)).sum::<u128>() * (t as u128 + 1);
        let w = if enum_cost <= column_cost && enum_cost <= Caps::global().codewords as u128 {
            self.dual_distance_by_enumeration()?
        } else {
            self.dual_distance_by_columns()?
        };
        Ok(*self.dual_distance.get_or_init(|| w))
    }

    /// Minimum distance of the explicitly constructed dual code.
    pub fn dual_distance_by_enumeration(&self) -> Result<Distance> {
        self.dual().min_distance()
    }

    /// One more than the largest `s` such that every `s` generator columns
    /// are linearly independent.
    pub fn dual_distance_by_columns(&self) -> Result<Distance> {
        let t = self.dimension();
        let n = self.length;
        if t == n {
            return Ok(Distance::Infinite);
        }
        let cap = Caps::global().column_subsets as u128;
        let mut spent: u128 = 0;
        for s in 1..=(t + 1).min(n) {
            spent += binomial(n, s);
            Caps::check("column-subset rank checks", spent, cap as u64)?;
            let dependent = (0..n)
                .combinations(s)
                .par_bridge()
                .any(|cols| linalg::column_rank(&self.field, &self.generator, &cols) < s);
            if dependent {
                return Ok(Distance::Finite(s));
            }
        }
        unreachable!("t + 1 columns of a rank-t matrix are dependent")
    }

    /// Block-diagonal generator: codewords are all concatenations `(c1, c2)`.
    pub fn direct_sum(&self, other: &LinearCode) -> Result<LinearCode> {
        if self.field != other.field {
            return Err(Error::FieldMismatch { left: self.field.order(), right: other.field.order() });
        }
        let n = self.length + other.length;
        let mut g = Vec::with_capacity(self.dimension() + other.dimension());
        for row in &self.generator {
            let mut r = row.clone();
            r.resize(n, 0);
            g.push(r);
        }
        for row in &other.generator {
            let mut r = vec![0; self.length];
            r.extend_from_slice(row);
            g.push(r);
        }
        LinearCode::new(&self.field, n, g)
    }

    /// True iff `N = 2t` and `G G^T = 0`.
    pub fn is_self_dual(&self) -> bool {
        self.length == 2 * self.dimension()
            && linalg::mul_transpose(&self.field, &self.generator, &self.generator)
                .iter()
                .all(|row| row.iter().all(|&x| x == 0))
    }

    /// Drops the given columns. Fails if the generator loses rank.
    pub fn puncture(&self, cols: &[usize]) -> Result<LinearCode> {
        let drop: std::collections::BTreeSet<usize> = cols.iter().copied().collect();
        if drop.iter().any(|&c| c >= self.length) || drop.len() >= self.length {
            return Err(Error::InvalidColumns(format!("cannot drop {drop:?} from a code of length {}", self.length)));
        }
        let g = self
            .generator
            .iter()
            .map(|row| row.iter().enumerate().filter(|(i, _)| !drop.contains(i)).map(|(_, &x)| x).collect())
            .collect();
        LinearCode::new(&self.field, self.length - drop.len(), g)
    }

    /// Keeps the first `n` coordinates.
    pub fn truncate(&self, n: usize) -> Result<LinearCode> {
        if n == self.length {
            return Ok(self.clone());
        }
        let cols: Vec<usize> = (n..self.length).collect();
        self.puncture(&cols)
    }

    pub fn contains(&self, word: &[Elem]) -> bool {
        word.len() == self.length
            && self.parity_check().matrix.iter().all(|h| linalg::dot(&self.field, h, word) == 0)
    }

    /// Text form: `code p m N t` followed by the generator rows.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "code {} {} {} {}\n",
            self.field.characteristic(),
            self.field.degree(),
            self.length,
            self.dimension()
        );
        for row in &self.generator {
            s.push_str(&row.iter().join(" "));
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str) -> Result<LinearCode> {
        let mut lines = content_lines(text);
        let (hline, header) = lines.next().ok_or(Error::Parse { line: 1, message: "empty code file".into() })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 5 || fields[0] != "code" {
            return Err(Error::Parse { line: hline, message: "expected header `code p m N t`".into() });
        }
        let nums: Vec<u64> = fields[1..]
            .iter()
            .map(|s| s.parse::<u64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse { line: hline, message: format!("bad header number: {e}") })?;
        let field = FiniteField::new(nums[0] as u32, nums[1] as u32)?.into_shared();
        let (n, t) = (nums[2] as usize, nums[3] as usize);
        let mut g = Vec::with_capacity(t);
        for (line, content) in lines {
            if g.len() == t {
                return Err(Error::Parse { line, message: format!("more than {t} generator rows") });
            }
            let row = parse_row(line, content, n)?;
            if let Some(&bad) = row.iter().find(|&&x| x >= field.order() as u64) {
                return Err(Error::Parse { line, message: format!("entry {bad} is outside GF({})", field.order()) });
            }
            g.push(row.into_iter().map(|x| x as Elem).collect());
        }
        if g.len() != t {
            return Err(Error::Parse { line: 0, message: format!("expected {t} generator rows, found {}", g.len()) });
        }
        LinearCode::new(&field, n, g)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<LinearCode> {
        LinearCode::parse(&fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_text())?;
        Ok(())
    }
}

impl fmt::Debug for LinearCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]_{}", self.length, self.dimension(), self.field.order())?;
        if let Some(w) = self.min_distance.get() {
            write!(f, " w={w}")?;
        }
        if let Some(w) = self.dual_distance.get() {
            write!(f, " w_dual={w}")?;
        }
        Ok(())
    }
}

fn min_weight_dfs(
    f: &FiniteField,
    multiples: &[Vec<Vec<Elem>>],
    depth: usize,
    q: usize,
    word: &mut Vec<Elem>,
    best: &mut usize,
) {
    if *best == 1 {
        return;
    }
    if depth == multiples.len() {
        let mut w = 0;
        for &x in word.iter() {
            if x != 0 {
                w += 1;
                if w >= *best {
                    return;
                }
            }
        }
        *best = w;
        return;
    }
    let saved = word.clone();
    for c in 0..q {
        if c > 0 {
            for ((x, &s), &m) in word.iter_mut().zip(&saved).zip(&multiples[depth][c]) {
                *x = f.add(s, m);
            }
        }
        min_weight_dfs(f, multiples, depth + 1, q, word, best);
    }
    word.copy_from_slice(&saved);
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Non-empty lines with `#` comments removed, numbered from 1.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

pub(crate) fn parse_row(line: usize, content: &str, expected: usize) -> Result<Vec<u64>> {
    let row: Vec<u64> = content
        .split_whitespace()
        .map(|s| s.parse::<u64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::Parse { line, message: format!("bad entry: {e}") })?;
    if row.len() != expected {
        return Err(Error::Parse { line, message: format!("expected {expected} entries, found {}", row.len()) });
    }
    Ok(row)
}

/// Self-dual codes shipped with the crate. Each is checked for self-duality
/// and its stated minimum distance when loaded.
pub mod bundled {
    use super::*;

    pub const GOLAY12_3: &str = include_str!("../data/golay12_3.code");
    pub const SELF_DUAL12_4: &str = include_str!("../data/sd12_4.code");

    /// Extended ternary Golay code `[12, 6, 6]_3`.
    pub fn golay12_3() -> Result<LinearCode> {
        load_verified(GOLAY12_3, 6)
    }

    /// A Euclidean self-dual `[12, 6, 6]_4` code (bordered double circulant).
    pub fn self_dual12_4() -> Result<LinearCode> {
        load_verified(SELF_DUAL12_4, 6)
    }

    pub fn by_name(name: &str) -> Result<LinearCode> {
        match name {
            "golay12_3" => golay12_3(),
            "sd12_4" => self_dual12_4(),
            other => Err(Error::InvalidArgument(format!("no bundled code named `{other}`"))),
        }
    }

    fn load_verified(text: &str, distance: usize) -> Result<LinearCode> {
        let code = LinearCode::parse(text)?;
        if !code.is_self_dual() {
            return Err(Error::InvalidArgument("bundled code failed the self-duality check".into()));
        }
        if code.min_distance()? != Distance::Finite(distance) {
            return Err(Error::InvalidArgument("bundled code failed its distance check".into()));
        }
        let _ = code.dual_distance.set(Distance::Finite(distance));
        Ok(code)
    }
}
