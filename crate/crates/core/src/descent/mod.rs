// SPDX-License-Identifier: Apache-2.0
//! Desk-scale descent: `|Sel_φ(E_s)|` and `|Sel_φ̂(E′_s)|` from locally
//! soluble integral binary cubic forms, checked against Cassels' formula.

pub mod padic;
pub mod selmer;
pub mod sweep;

pub use padic::{find_point, IntCubic, LocalSolubilityCertificate, Verdict, Witness};
pub use selmer::{
    integral_scaling, selmer_size, twisting_factor, DescentConfig, DescentContext, SelmerCountReport, SideCount,
};
pub use sweep::{read_cache, sweep, sweep_twists, within, CacheLine, Stratum, SweepConfig, SweepError, SweepReport};

use crate::cubic::EnumError;
use crate::localsel::LocalError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DescentError {
    #[error(transparent)]
    Enum(#[from] EnumError),
    #[error(transparent)]
    Local(#[from] LocalError),
    #[error(transparent)]
    Cubic(#[from] crate::cubic::CubicError),
    #[error("form with zero discriminant")]
    Degenerate,
    #[error("identity class {0} was not found among the soluble forms")]
    IdentityMissing(String),
}
