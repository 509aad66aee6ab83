// SPDX-License-Identifier: Apache-2.0
//! Selmer groups of 3-isogenies across quadratic twist families.

pub mod arith;
pub mod cli;
pub mod curves;
pub mod cubic;
pub mod descent;
pub mod globalsel;
pub mod localsel;
