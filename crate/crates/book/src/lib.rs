//! Chapters of the guide, compiled as doctests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/finite-fields.md")]
pub mod finite_fields {}

#[doc = include_str!("../../../book/src/codes-and-arrays.md")]
pub mod codes_and_arrays {}

#[doc = include_str!("../../../book/src/uniform-states.md")]
pub mod uniform_states {}

#[doc = include_str!("../../../book/src/masking.md")]
pub mod masking {}

#[doc = include_str!("../../../book/src/existence-tables.md")]
pub mod existence_tables {}

#[doc = include_str!("../../../book/src/command-line.md")]
pub mod command_line {}

#[doc = include_str!("../../../README.md")]
pub mod readme {}
