//! Check outcomes shared by every suite.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One line of a report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckEntry {
    pub name: String,
    pub params: Vec<(String, String)>,
    pub status: Status,
    pub witness: Option<String>,
    pub millis: u64,
}

impl CheckEntry {
    pub fn new(name: impl Into<String>) -> Self {
        CheckEntry {
            name: name.into(),
            params: Vec::new(),
            status: Status::Pass,
            witness: None,
            millis: 0,
        }
    }

    pub fn param(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.set_param(key, value);
        self
    }

    /// Sets or replaces a parameter.
    pub fn set_param(&mut self, key: &str, value: impl fmt::Display) {
        let value = value.to_string();
        match self.params.iter_mut().find(|(k, _)| k == key) {
            Some(slot) => slot.1 = value,
            None => self.params.push((key.to_string(), value)),
        }
    }

    pub fn get_param(&self, key: &str) -> Option<&str> {
        self.params
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// Records a failure; the first witness wins.
    pub fn fail(&mut self, witness: impl Into<String>) {
        if self.status == Status::Pass {
            self.status = Status::Fail;
            self.witness = Some(witness.into());
        }
    }

    /// Records an error that stopped the check.
    pub fn error(&mut self, witness: impl Into<String>) {
        if self.status != Status::Error {
            self.status = Status::Error;
            self.witness = Some(witness.into());
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Ordering key: name, then rendered parameters.
    pub fn sort_key(&self) -> (String, String) {
        let mut p = String::new();
        for (k, v) in &self.params {
            p.push_str(k);
            p.push('=');
            p.push_str(v);
            p.push(';');
        }
        (self.name.clone(), p)
    }
}

/// Converts an engine error inside a check into an error entry.
pub fn record<T>(entry: &mut CheckEntry, r: Result<T, crate::Error>) -> Option<T> {
    match r {
        Ok(v) => Some(v),
        Err(e) => {
            entry.error(e.to_string());
            None
        }
    }
}

/// An inclusive range of mode indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModeWindow {
    pub lo: i64,
    pub hi: i64,
}

impl ModeWindow {
    pub fn new(lo: i64, hi: i64) -> Self {
        ModeWindow { lo, hi }
    }

    pub fn iter(self) -> impl Iterator<Item = i64> + Clone {
        self.lo..=self.hi
    }

    pub fn pairs(self) -> impl Iterator<Item = (i64, i64)> {
        self.iter()
            .flat_map(move |m| self.iter().map(move |k| (m, k)))
    }

    pub fn is_empty(self) -> bool {
        self.lo > self.hi
    }
}

impl fmt::Display for ModeWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

/// Runs `f` over `items` and returns the first failure in item order,
/// as `(status, witness)`. Runs in parallel with the `parallel` feature;
/// the result does not depend on scheduling.
pub fn first_failure<T, F>(items: &[T], f: F) -> Option<(Status, String)>
where
    T: Sync,
    F: Fn(&T) -> Result<Option<String>, crate::Error> + Sync + Send,
{
    let judge = |t: &T| match f(t) {
        Ok(None) => None,
        Ok(Some(w)) => Some((Status::Fail, w)),
        Err(e) => Some((Status::Error, e.to_string())),
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().find_map_first(judge)
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().find_map(judge)
    }
}

impl CheckEntry {
    /// Records the outcome of [`first_failure`]; returns whether it passed.
    pub fn absorb(&mut self, outcome: Option<(Status, String)>) -> bool {
        match outcome {
            None => true,
            Some((Status::Error, w)) => {
                self.error(w);
                false
            }
            Some((_, w)) => {
                self.fail(w);
                false
            }
        }
    }
}
