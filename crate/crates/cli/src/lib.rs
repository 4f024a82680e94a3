//! Library half of the `modtheory` command: spec loading, fixtures, reports,
//! lattice export and fuzzing.

pub mod fuzz;
pub mod lattice;
pub mod report;
pub mod spec;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Spec(#[from] spec::SpecError),
    #[error("no registered statement matches `{0}`")]
    UnknownStatementId(String),
    #[error(transparent)]
    Engine(#[from] modtheory::Error),
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("{0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl CliError {
    /// Input and configuration problems all exit with 2.
    pub fn exit_code(&self) -> i32 {
        2
    }
}

pub const FIXTURES: &[(&str, &str)] = &[
    ("z2", include_str!("../fixtures/z2.json")),
    ("z4", include_str!("../fixtures/z4.json")),
    ("z6", include_str!("../fixtures/z6.json")),
    ("e28", include_str!("../fixtures/e28.json")),
    ("e28-regular", include_str!("../fixtures/e28-regular.json")),
    ("z6-truncated-2.3", include_str!("../fixtures/z6-truncated-2.3.json")),
];

pub fn fixture_text(name: &str) -> Result<&'static str, CliError> {
    FIXTURES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| CliError::UnknownFixture(name.to_string()))
}

/// The module `M` of a shipped fixture.
pub fn fixture_module(name: &str, caps: &modtheory::Caps) -> Result<modtheory::FiniteModule, CliError> {
    let spec = spec::parse_spec(fixture_text(name)?)?;
    let algebra = spec::Algebra::build(&spec, caps)?;
    Ok(algebra.module("M")?.clone())
}
