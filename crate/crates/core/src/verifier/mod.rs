//! Claim checks and the suites that run them.

pub mod checks;
pub mod grid;
pub mod printed;
pub mod report;
pub mod suite;

pub use checks::{
    endpoint_check, verify_abs_monotone, verify_convexity, verify_monotone, verify_range,
    verify_sequence, verify_series_coeffs, verify_sign, EndpointCheck, SequenceClaim,
};
pub use grid::{GridSpec, Spacing};
pub use printed::printed_coefficients;
pub use report::{ReportKind, Status, VerificationReport, Witness};
pub use suite::{run_all, run_suite, suite_passed, Suite, SuiteOptions};
