//! Keeps the guide honest: every fenced Rust block in `book/` compiles and
//! runs under `cargo test --doc`. (mdBook itself cannot link against the
//! crate when testing snippets, so the chapters are mounted here as doc
//! comments instead.)

#[doc = include_str!("../../../book/src/introduction.md")]
mod introduction {}

#[doc = include_str!("../../../book/src/hopf-variables.md")]
mod hopf_variables {}

#[doc = include_str!("../../../book/src/quadratic-models.md")]
mod quadratic_models {}

#[doc = include_str!("../../../book/src/octupole-model.md")]
mod octupole_model {}

#[doc = include_str!("../../../book/src/scanning-and-sequences.md")]
mod scanning_and_sequences {}

#[doc = include_str!("../../../book/src/flows-sections-portraits.md")]
mod flows_sections_portraits {}

#[doc = include_str!("../../../book/src/oracles.md")]
mod oracles {}

#[doc = include_str!("../../../book/src/cli.md")]
mod cli {}
