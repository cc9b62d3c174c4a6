//! Constructions and exact verification of k-uniform multipartite states.
//!
//! A pure state on `N` parties of local dimension `d` is *k-uniform* when
//! every reduction to `k` parties equals `I / d^k`. This crate builds such
//! states from linear codes over finite fields, going through orthogonal
//! arrays, and checks uniformity with exact partial traces. On top of that it
//! builds quantum-information maskers and checks pure quantum error-correcting
//! code conditions.
//!
//! The pipeline, bottom-up:
//!
//! - [`gf`]: arithmetic in GF(p^m) with a canonical modulus.
//! - [`codes`]: linear codes, duals, exact minimum and dual distances.
//! - [`oa`]: orthogonal arrays, strength and irredundancy checks.
//! - [`states`]: sparse pure states, exact reductions, uniformity reports.
//! - [`masking`]: maskers, the cross-reduction criterion, Pauli-basis code checks.
//! - [`catalog`]: existence verdicts and the 4/5-uniform existence tables.
//!
//! ```
//! use kuniform::codes::LinearCode;
//! use kuniform::gf::FiniteField;
//! use kuniform::oa::OrthogonalArray;
//! use kuniform::states::PureState;
//!
//! let f = FiniteField::new(3, 1)?.into_shared();
//! let code = LinearCode::mds(&f, 2)?;
//! let oa = OrthogonalArray::from_code(&code)?;
//! assert!(oa.is_irredundant(2));
//! let psi = PureState::from_iroa(&oa, 2)?;
//! assert!(psi.verify_k_uniform(2)?.passed());
//! # Ok::<(), kuniform::Error>(())
//! ```

pub mod caps;
pub mod catalog;
pub mod codes;
mod error;
pub mod gf;
pub mod linalg;
pub mod masking;
pub mod oa;
pub mod states;

pub use caps::Caps;
pub use error::{Error, Result};
