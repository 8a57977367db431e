//! Acceptance checks for `trapdet`. Everything lives in `tests/acceptance.rs`;
//! run it with `cargo test -p trapdet-acceptance`.
