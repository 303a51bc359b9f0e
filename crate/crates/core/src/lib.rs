//! Mean-field model of optical mode conversion between two cavity modes
//! mediated by a bulk acoustic phonon mode.

pub mod cli;
pub mod closed_form;
pub mod config;
pub mod dark_bright;
pub mod dynamics;
pub mod error;
pub mod ledger;
pub mod params;
pub mod steady;
pub mod sweep;

pub use error::{Error, Result};
pub use params::{CrystalParams, SystemParams};
pub use steady::ModeAmplitudes;
