//! Grading service for first-order logic translation exercises: an HTTP/JSON
//! API over an append-only store, and the `folgrade` command line.

pub mod api;
pub mod auth;
pub mod cli;
pub mod config;
pub mod records;
pub mod server;
pub mod store;

pub use api::{router, AppState};
pub use auth::{Principal, Role, TokenTable};
pub use config::Config;
pub use records::{ExerciseRecord, SubmissionRecord, VerdictDoc};
pub use store::Store;
