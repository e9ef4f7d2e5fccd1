//! Library side of the experiment driver: command configs and runners,
//! deterministic output writers, and the schema checker used by the tests.

pub mod commands;
pub mod output;
pub mod schema;
