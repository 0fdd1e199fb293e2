//! Brute-force reference implementations used to check the optimized
//! code paths. Shared by this crate's tests and the CLI acceptance suite.
#![allow(dead_code)]

pub mod datalog;
pub mod pattern;
pub mod sat;
pub mod tensor;
pub mod turtle;
