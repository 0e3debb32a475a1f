//! Check reports shared by every axiom suite.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;

const MAX_WITNESSES: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Informational,
}

impl Status {
    fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Informational => "INFO",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckEntry {
    pub id: String,
    pub tag: String,
    pub status: Status,
    pub witness: String,
    pub residual: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub informational: usize,
    pub instances: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub suite: String,
    pub entries: Vec<CheckEntry>,
    pub summary: Summary,
}

/// Accumulates the instances of one check before it is turned into entries.
#[derive(Clone, Debug)]
pub struct Tally {
    id: String,
    tag: String,
    instances: usize,
    failures: Vec<(String, String)>,
}

impl Tally {
    pub fn new(id: &str, tag: &str) -> Tally {
        Tally { id: id.to_string(), tag: tag.to_string(), instances: 0, failures: Vec::new() }
    }

    pub fn pass(&mut self) {
        self.instances += 1;
    }

    pub fn fail(&mut self, witness: String, residual: String) {
        self.instances += 1;
        self.failures.push((witness, residual));
    }

    /// Records an instance: it fails iff `residual` is `Some`.
    pub fn record(&mut self, witness: impl FnOnce() -> String, residual: Option<String>) {
        match residual {
            None => self.pass(),
            Some(r) => self.fail(witness(), r),
        }
    }

    pub fn instances(&self) -> usize {
        self.instances
    }

    pub fn failures(&self) -> usize {
        self.failures.len()
    }
}

impl Report {
    pub fn new(suite: &str) -> Report {
        Report { suite: suite.to_string(), entries: Vec::new(), summary: Summary::default() }
    }

    fn push_entry(&mut self, e: CheckEntry) {
        match e.status {
            Status::Pass => self.summary.passed += 1,
            Status::Fail => self.summary.failed += 1,
            Status::Informational => self.summary.informational += 1,
        }
        self.entries.push(e);
    }

    pub fn push_tally(&mut self, t: Tally) {
        self.summary.instances += t.instances;
        if t.failures.is_empty() {
            self.push_entry(CheckEntry {
                id: t.id,
                tag: t.tag,
                status: Status::Pass,
                witness: format!("{} instances", t.instances),
                residual: "0".into(),
            });
            return;
        }
        let extra = t.failures.len().saturating_sub(MAX_WITNESSES);
        for (w, r) in t.failures.into_iter().take(MAX_WITNESSES) {
            self.push_entry(CheckEntry { id: t.id.clone(), tag: t.tag.clone(), status: Status::Fail, witness: w, residual: r });
        }
        if extra > 0 {
            self.push_entry(CheckEntry {
                id: t.id,
                tag: t.tag,
                status: Status::Fail,
                witness: format!("{} further failing instances", extra),
                residual: "omitted".into(),
            });
        }
    }

    pub fn push_info(&mut self, id: &str, tag: &str, witness: String, residual: String) {
        self.push_entry(CheckEntry {
            id: id.into(),
            tag: tag.into(),
            status: Status::Informational,
            witness,
            residual,
        });
    }

    pub fn push_status(&mut self, id: &str, tag: &str, ok: bool, witness: String, residual: String) {
        self.push_entry(CheckEntry {
            id: id.into(),
            tag: tag.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            witness,
            residual,
        });
    }

    /// Appends another report's entries, prefixing their ids with its suite name.
    pub fn absorb(&mut self, other: Report) {
        self.summary.instances += other.summary.instances;
        for mut e in other.entries {
            e.id = format!("{}/{}", other.suite, e.id);
            self.push_entry(e);
        }
    }

    /// Downgrades failures to informational entries.
    pub fn demote_failures(&mut self) {
        for e in &mut self.entries {
            if e.status == Status::Fail {
                e.status = Status::Informational;
                self.summary.failed -= 1;
                self.summary.informational += 1;
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn failing_tags(&self) -> BTreeSet<String> {
        self.entries.iter().filter(|e| e.status == Status::Fail).map(|e| e.tag.clone()).collect()
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckEntry> {
        self.entries.iter().filter(|e| e.status == Status::Fail)
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "suite: {}", self.suite);
        for e in &self.entries {
            let _ = writeln!(
                s,
                "[{}] {} ({}) witness: {} residual: {}",
                e.status.label(),
                e.id,
                e.tag,
                e.witness,
                e.residual
            );
        }
        let _ = writeln!(
            s,
            "summary: {} passed, {} failed, {} informational, {} instances",
            self.summary.passed, self.summary.failed, self.summary.informational, self.summary.instances
        );
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tally_to_entries() {
        let mut r = Report::new("demo");
        let mut t = Tally::new("a", "CD.a");
        t.pass();
        t.pass();
        r.push_tally(t);
        let mut t = Tally::new("c", "CD.c");
        t.pass();
        t.fail("(x, x)".into(), "1 ox 1".into());
        r.push_tally(t);
        assert_eq!(r.summary, Summary { passed: 1, failed: 1, informational: 0, instances: 4 });
        assert_eq!(r.failing_tags().into_iter().collect::<Vec<_>>(), vec!["CD.c".to_string()]);
        assert!(r.render_text().contains("[FAIL] c (CD.c) witness: (x, x) residual: 1 ox 1"));
        r.demote_failures();
        assert!(r.passed());
    }
}
