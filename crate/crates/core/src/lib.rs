//! Simulator for jamming of cellular receivers, secure texting split across
//! untrusted networks, and the dollar losses of messages that do not get
//! through.
//!
//! The three models run in sequence:
//!
//! - [`jamgrid`] sweeps a receiver over an integer grid and computes the
//!   free-space link budget ([`propagation`]) against every transmitter while
//!   the interceptors jam.
//! - [`textsim`] samples interception probabilities for messages sent over one,
//!   three or five networks, and can enumerate the exact distribution.
//! - [`econ`] prices every undelivered message by mode and sector.
//!
//! [`harness`] ties them together behind a JSON config and a CLI.

pub mod econ;
pub mod error;
pub mod harness;
pub mod jamgrid;
pub mod propagation;
pub mod textsim;

pub use error::{Error, Result};
