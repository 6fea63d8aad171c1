//! Event-by-event simulator for an orientation-dependent Cl(3,0) model of
//! EPR-Bohm correlations, with the estimator pipelines, CHSH analysis and
//! invariant suites used to check it.

pub mod chsh;
pub mod estimators;
pub mod ga;
pub mod harness;
pub mod spin;
