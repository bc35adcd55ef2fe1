//! Acceptance criteria for pnlab-core live in `tests/acceptance.rs`. They sit
//! in their own package so that a failing criterion does not stop the other
//! suites from running.
