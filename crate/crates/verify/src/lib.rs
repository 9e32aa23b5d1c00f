//! Hosts the acceptance integration test in `tests/acceptance.rs`.
