//! Enumeration caps.
//!
//! Every exhaustive loop in the crate is bounded by one of these limits and
//! refuses (with [`Error::CapExceeded`](crate::Error::CapExceeded)) rather
//! than approximating. Defaults can be raised through the `KUF_CAPS`
//! environment variable, e.g. `KUF_CAPS=codewords=1e8,matrix_dim=8192`.

use std::sync::OnceLock;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Largest field order p^m.
    pub field_order: u64,
    /// Codewords enumerated by a distance computation.
    pub codewords: u64,
    /// Rows materialized by an orthogonal array or a state support.
    pub oa_rows: u64,
    /// Rows for the quadratic pairwise distance on non-linear arrays.
    pub pairwise_rows: u64,
    /// Side of a reduced density matrix, d^k.
    pub matrix_dim: u64,
    /// Local error operators enumerated by a code check.
    pub error_operators: u64,
    /// Column subsets examined by the rank-based dual distance.
    pub column_subsets: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            field_order: 1 << 16,
            codewords: 1 << 24,
            oa_rows: 1 << 20,
            pairwise_rows: 1 << 13,
            matrix_dim: 4096,
            error_operators: 1 << 22,
            column_subsets: 1 << 24,
        }
    }
}

impl Caps {
    /// Caps in effect for this process: defaults overridden by `KUF_CAPS`.
    ///
    /// A malformed `KUF_CAPS` is ignored here; call [`Caps::parse`] to see the error.
    pub fn global() -> &'static Caps {
        static CAPS: OnceLock<Caps> = OnceLock::new();
        CAPS.get_or_init(|| {
            std::env::var("KUF_CAPS")
                .ok()
                .and_then(|s| Caps::parse(&s).ok())
                .unwrap_or_default()
        })
    }

    /// Parses `name=value` pairs separated by commas. Values accept plain
    /// integers, `2^k` and `1eK`.
    pub fn parse(list: &str) -> Result<Caps> {
        let mut caps = Caps::default();
        for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (name, value) = item
                .split_once('=')
                .ok_or_else(|| Error::InvalidArgument(format!("KUF_CAPS entry `{item}` lacks `=`")))?;
            let value = parse_amount(value.trim())
                .ok_or_else(|| Error::InvalidArgument(format!("KUF_CAPS value `{value}` is not a number")))?;
            let slot = match name.trim() {
                "field_order" => &mut caps.field_order,
                "codewords" => &mut caps.codewords,
                "oa_rows" => &mut caps.oa_rows,
                "pairwise_rows" => &mut caps.pairwise_rows,
                "matrix_dim" => &mut caps.matrix_dim,
                "error_operators" => &mut caps.error_operators,
                "column_subsets" => &mut caps.column_subsets,
                other => return Err(Error::InvalidArgument(format!("unknown cap `{other}`"))),
            };
            *slot = value;
        }
        Ok(caps)
    }

    pub(crate) fn check(what: &'static str, needed: u128, cap: u64) -> Result<()> {
        if needed > cap as u128 {
            Err(Error::CapExceeded { what, needed, cap })
        } else {
            Ok(())
        }
    }
}

fn parse_amount(s: &str) -> Option<u64> {
    if let Some((base, exp)) = s.split_once('^') {
        return base.parse::<u64>().ok()?.checked_pow(exp.parse().ok()?);
    }
    if let Some((mant, exp)) = s.split_once(['e', 'E']) {
        return mant.parse::<u64>().ok()?.checked_mul(10u64.checked_pow(exp.parse().ok()?)?);
    }
    s.parse().ok()
}
