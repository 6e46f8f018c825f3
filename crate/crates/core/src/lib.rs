//! Enrich PlantUML class diagrams with methods derived from natural-language
//! use-case tables.
//!
//! The pipeline is: parse a diagram ([`plantuml`]), load use cases
//! ([`usecase`]), obtain additive suggestions per use case from an LLM or a
//! deterministic rules file ([`suggest`]), review them, merge the accepted
//! ones ([`merge`]), and validate the result ([`report`]). [`pipeline`]
//! drives the loop and persists a resumable [`session::Session`].

pub mod cli;
pub mod fixtures;
pub mod merge;
pub mod model;
pub mod pipeline;
pub mod plantuml;
pub mod report;
pub mod session;
pub mod suggest;
pub mod usecase;
