//! Batch linter and evaluation harness for item-writing flaws (IWFs) in
//! multiple-choice questions.
//!
//! The crate detects 19 common question-authoring flaws with deterministic
//! rules ([`detect`]), can ask an external LLM judge the same questions over
//! a pluggable HTTP backend ([`judge`]), and scores any labeling method
//! against gold annotations with a full agreement-metrics battery
//! ([`metrics`]). Corpora and labels travel as JSONL ([`io`]); the `iwf`
//! binary binds it all together ([`cli`]).

pub mod cli;
pub mod detect;
pub mod io;
pub mod judge;
pub mod metrics;
pub mod model;
pub mod textkit;
