//! Verification harness for scrollkit: a JSON codec for its objects and the
//! seeded suites behind the `scrollkit verify` and `scrollkit report`
//! commands.

pub mod codec;
pub mod suites;
