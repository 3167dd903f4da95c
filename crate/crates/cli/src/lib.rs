//! Spec files, pipelines and report rendering for the `weakhopf` binary.

pub mod output;
pub mod pipeline;
pub mod spec;

/// Exit status when every identity passed.
pub const EXIT_PASS: i32 = 0;
/// Exit status when some identity failed.
pub const EXIT_FAIL: i32 = 1;
/// Exit status for unreadable or malformed input.
pub const EXIT_INPUT: i32 = 2;
