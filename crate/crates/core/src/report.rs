//! Verification reports shared by every identity checker.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Violated,
}

/// Outcome of an exhaustive identity check.
///
/// Serializes as `{identity, n, params, checked_count, status, counterexample?}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub identity: String,
    pub n: usize,
    pub params: BTreeMap<String, String>,
    pub checked_count: usize,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

impl VerifyReport {
    pub fn new(identity: impl Into<String>, n: usize) -> Self {
        VerifyReport {
            identity: identity.into(),
            n,
            params: BTreeMap::new(),
            checked_count: 0,
            status: Status::Ok,
            counterexample: None,
        }
    }

    pub fn with_param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    /// Records one checked instance; the first failure is kept as the counterexample.
    pub fn check(&mut self, holds: bool, counterexample: impl FnOnce() -> String) {
        self.checked_count += 1;
        if !holds && self.status == Status::Ok {
            self.status = Status::Violated;
            self.counterexample = Some(counterexample());
        }
    }

    /// Folds another report's outcome into this one.
    pub fn absorb(&mut self, other: &VerifyReport) {
        self.checked_count += other.checked_count;
        if other.status == Status::Violated && self.status == Status::Ok {
            self.status = Status::Violated;
            self.counterexample = other.counterexample.clone();
        }
    }

    pub fn is_ok(&self) -> bool {
        self.status == Status::Ok
    }

    pub fn into_result(self) -> Result<VerifyReport> {
        match self.status {
            Status::Ok => Ok(self),
            Status::Violated => Err(Error::IdentityViolated {
                identity: self.identity,
                counterexample: self.counterexample.unwrap_or_default(),
            }),
        }
    }
}
