//! Structured check reports with stable JSON rendering.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    /// Passed, but some part of the window could not be searched.
    WindowLimited,
    Fail,
}

impl Status {
    pub fn passed(self) -> bool {
        self != Status::Fail
    }

    pub fn and(self, other: Status) -> Status {
        match (self, other) {
            (Status::Fail, _) | (_, Status::Fail) => Status::Fail,
            (Status::WindowLimited, _) | (_, Status::WindowLimited) => Status::WindowLimited,
            _ => Status::Pass,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::WindowLimited => "pass (window-limited)",
            Status::Fail => "FAIL",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub law: String,
    pub instance: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub name: String,
    pub status: Status,
    pub window: String,
    pub checked: u64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub data: Vec<(String, String)>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<Failure>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<Report>,
}

impl Report {
    pub fn new(name: impl Into<String>, window: impl Into<String>) -> Report {
        Report {
            name: name.into(),
            status: Status::Pass,
            window: window.into(),
            checked: 0,
            data: Vec::new(),
            notes: Vec::new(),
            failure: None,
            children: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status.passed()
    }

    /// Records a failure; the first one is kept.
    pub fn fail(&mut self, law: impl Into<String>, instance: impl Into<String>, detail: impl Into<String>) {
        self.status = Status::Fail;
        if self.failure.is_none() {
            self.failure = Some(Failure {
                law: law.into(),
                instance: instance.into(),
                detail: detail.into(),
            });
        }
    }

    pub fn limit(&mut self, note: impl Into<String>) {
        self.status = self.status.and(Status::WindowLimited);
        self.notes.push(note.into());
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn datum(&mut self, key: impl Into<String>, value: impl fmt::Display) {
        self.data.push((key.into(), value.to_string()));
    }

    pub fn push(&mut self, child: Report) {
        self.status = self.status.and(child.status);
        if self.failure.is_none() {
            if let Some(f) = &child.failure {
                self.failure = Some(Failure {
                    law: format!("{}/{}", child.name, f.law),
                    instance: f.instance.clone(),
                    detail: f.detail.clone(),
                });
            }
        }
        self.checked += child.checked;
        self.children.push(child);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialise")
    }

    /// Indented text rendering.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out, 0);
        out
    }

    fn render_into(&self, out: &mut String, depth: usize) {
        use std::fmt::Write;
        let pad = "  ".repeat(depth);
        let _ = writeln!(
            out,
            "{pad}{}: {} [{} checked; {}]",
            self.name, self.status, self.checked, self.window
        );
        for (k, v) in &self.data {
            let _ = writeln!(out, "{pad}  {k} = {v}");
        }
        for n in &self.notes {
            let _ = writeln!(out, "{pad}  note: {n}");
        }
        if let Some(f) = &self.failure {
            let _ = writeln!(out, "{pad}  failure: {} at {}: {}", f.law, f.instance, f.detail);
        }
        for c in &self.children {
            c.render_into(out, depth + 1);
        }
    }
}

/// The size window of a check, optionally narrowed to one instance id.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Window {
    pub bound: usize,
    pub only: Option<String>,
}

impl Window {
    pub fn new(bound: usize) -> Window {
        Window { bound, only: None }
    }

    pub fn only(self, id: impl Into<String>) -> Window {
        Window { only: Some(id.into()), ..self }
    }

    /// Whether the instance named by `id` is to be run.
    pub fn selects(&self, id: impl FnOnce() -> String) -> bool {
        self.only.as_ref().map_or(true, |o| *o == id())
    }

    pub fn describe(&self) -> String {
        format!("objects of size <= {}", self.bound)
    }
}

/// Runs named law instances against a window, stopping at the first failure.
///
/// Budget and cap errors mark the instance as out of window rather than failed.
pub struct Sweep<'w> {
    report: Report,
    window: &'w Window,
    skipped: u64,
    first_skip: Option<String>,
}

impl<'w> Sweep<'w> {
    pub fn new(name: impl Into<String>, window: &'w Window) -> Sweep<'w> {
        Sweep { report: Report::new(name, window.describe()), window, skipped: 0, first_skip: None }
    }

    pub fn window(&self) -> &Window {
        self.window
    }

    pub fn failed(&self) -> bool {
        self.report.status == Status::Fail
    }

    /// Checks one instance. `check` returns `Some(detail)` on violation.
    pub fn case(
        &mut self,
        law: &str,
        id: impl Fn() -> String,
        check: impl FnOnce() -> Result<Option<String>>,
    ) -> bool {
        if self.failed() {
            return false;
        }
        if let Some(only) = &self.window.only {
            if *only != id() {
                return true;
            }
        }
        self.report.checked += 1;
        match check() {
            Ok(None) => true,
            Ok(Some(detail)) => {
                self.report.fail(law, id(), detail);
                false
            }
            Err(e @ (Error::BudgetExceeded { .. } | Error::CapExceeded { .. })) => {
                self.skip(format!("{}: {e}", id()));
                true
            }
            Err(e) => {
                self.report.fail(law, id(), e.to_string());
                false
            }
        }
    }

    /// Records an instance that could not be searched.
    pub fn skip(&mut self, what: String) {
        self.skipped += 1;
        self.first_skip.get_or_insert(what);
    }

    pub fn report_mut(&mut self) -> &mut Report {
        &mut self.report
    }

    pub fn finish(mut self) -> Report {
        if let Some(first) = self.first_skip.take() {
            self.report.limit(format!("{} instance(s) outside the search budget, first {first}", self.skipped));
        }
        self.report
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_combination() {
        assert_eq!(Status::Pass.and(Status::WindowLimited), Status::WindowLimited);
        assert_eq!(Status::WindowLimited.and(Status::Fail), Status::Fail);
        assert!(Status::WindowLimited.passed());
    }

    #[test]
    fn first_failure_wins_and_propagates() {
        let mut child = Report::new("leaf", "n<=1");
        child.checked = 3;
        child.fail("law-a", "#1", "first");
        child.fail("law-b", "#2", "second");
        let mut root = Report::new("root", "n<=1");
        root.push(child);
        assert_eq!(root.status, Status::Fail);
        assert_eq!(root.checked, 3);
        assert_eq!(root.failure.as_ref().unwrap().law, "leaf/law-a");
        assert!(root.to_json().contains("\"first\""));
    }
}
