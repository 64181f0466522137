//! Exit-code classification.

use std::fmt::Display;

pub const DOMAIN: u8 = 1;
pub const INPUT: u8 = 2;
pub const NONCONVERGED: u8 = 3;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    /// `None` when diagnostics were already printed.
    pub error: Option<anyhow::Error>,
}

impl Failure {
    pub fn silent(code: u8) -> Failure {
        Failure { code, error: None }
    }

    pub fn input(e: impl Into<anyhow::Error>) -> Failure {
        Failure { code: INPUT, error: Some(e.into()) }
    }

    pub fn domain(e: impl Into<anyhow::Error>) -> Failure {
        Failure { code: DOMAIN, error: Some(e.into()) }
    }
}

pub type Outcome<T = ()> = Result<T, Failure>;

pub trait Classify<T> {
    fn input_err(self) -> Outcome<T>;
    fn domain_err(self) -> Outcome<T>;
    fn input_ctx(self, ctx: impl Display + Send + Sync + 'static) -> Outcome<T>;
}

impl<T, E: Into<anyhow::Error>> Classify<T> for Result<T, E> {
    fn input_err(self) -> Outcome<T> {
        self.map_err(Failure::input)
    }

    fn domain_err(self) -> Outcome<T> {
        self.map_err(Failure::domain)
    }

    fn input_ctx(self, ctx: impl Display + Send + Sync + 'static) -> Outcome<T> {
        self.map_err(|e| Failure::input(e.into().context(ctx)))
    }
}
