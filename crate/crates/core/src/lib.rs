//! White-box test generation for first-order ontologies.

pub mod fol;
pub mod localize;
pub mod normal;
pub mod oracle;
pub mod testgen;
pub mod tptp;
pub mod prover;
pub mod campaign;
pub mod cli;
