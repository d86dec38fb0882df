//! Harness library behind the `qkit` binary: run configuration, Monte-Carlo
//! statistics, the exhaustive classical-ceiling certifier, device analysis
//! reports and the TCP transport for split verifier/prover runs.

pub mod certify;
pub mod config;
pub mod report;
pub mod runner;
pub mod stats;
pub mod wire;

use qkit_core::Error;

/// Exit codes: 0 success, 2 validation, 3 protocol violation, 4 I/O.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::ProtocolViolation { .. } | Error::ProtocolMismatch { .. } | Error::Integrity(_) => 3,
        Error::Io(_) => 4,
        _ => 2,
    }
}
