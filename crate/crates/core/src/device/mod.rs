//! Device models evaluated by the circuit engine.

mod memristor;
mod mosfet;
mod source;

pub use memristor::{
    advance_state, memristor_conductance, memristor_current, memristor_eval, state_rate,
    validate_params, window, MemristorOp, MemristorParams, EXP_LIMIT, MAX_STATE_STEP,
};
pub use mosfet::{mosfet_current, MosfetOp, MosfetParams, Polarity};
pub use source::{source_value, SourceSpec};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DeviceError {
    #[error("parameter {name} = {value} violates {constraint}")]
    Constraint {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },
    #[error("{what} = {value} outside {range}")]
    Domain {
        what: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("non-finite {what}: {value}")]
    NonFinite { what: &'static str, value: f64 },
}
