//! Two-component signal model of costly information acquisition: posterior
//! dynamics, willingness to pay for the second component, acquisition sets,
//! belief patterns (polarization, confirmation, disconfirmation, under- and
//! over-reaction), a brute-force oracle and the run-configuration I/O layer.

pub mod error;
pub mod incentives;
pub mod io;
pub mod model;
mod numeric;
pub mod oracle;
pub mod patterns;
pub mod sets;

pub use error::{ModelError, Result};
pub use incentives::*;
pub use model::*;
pub use patterns::*;
pub use sets::*;
