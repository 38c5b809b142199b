//! Bound states of the Dirac equation with a generalized Morse potential,
//! solved in closed form by the parametric Nikiforov-Uvarov method and
//! checked against direct numerical integration.
//!
//! Three settings are covered: position-dependent mass, exact pseudospin
//! symmetry and exact spin symmetry. The centrifugal term uses the Pekeris
//! approximation.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod eigensolver;
pub mod morse_model;
pub mod nu_core;
pub mod ode_oracle;
pub mod special_functions;
pub mod units_presets;
pub mod wavefunctions;
