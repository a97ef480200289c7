//! Report types shared between the covkit binary and its tests.

pub mod report;
