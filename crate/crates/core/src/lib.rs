//! Workbench for developing domain-specific usability heuristics.
//!
//! The crate covers the computational side of an eight-stage methodology:
//! characteristic dimensions of a domain, a catalog of candidate heuristics,
//! their specificity and normalization, prioritization, structured
//! descriptions, and the quantitative indicators that compare a new set
//! against a control set after a heuristic evaluation. All arithmetic is
//! exact.

pub mod advisor;
pub mod indicators;
pub mod model;
pub mod normalization;
pub mod rational;
pub mod specificity;
pub mod template;
pub mod workbench;

pub use rational::{ParseRationalError, RateValue, Rational};
