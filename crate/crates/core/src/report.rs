//! Line-oriented result records.
//!
//! A report is a versioned header followed by one record per line:
//! `kind key=value key=value ...`. The human-readable form is rendered from
//! the same records, so the two never disagree.

use std::fmt::Write as _;

use crate::cosets::FtReport;
use crate::gf2::StandardForm;
use crate::paulisim::{McResult, ScalingReport, ScanEvent, ScanResult};
use crate::schedule::Schedule;

pub const HEADER: &str = "#ftfilter-report v1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Record {
    pub kind: String,
    pub fields: Vec<(String, String)>,
}

impl Record {
    pub fn new(kind: impl Into<String>) -> Self {
        Record {
            kind: kind.into(),
            fields: Vec::new(),
        }
    }

    pub fn field(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.fields.push((key.into(), value.to_string()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub command: String,
    pub records: Vec<Record>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            records: Vec::new(),
        }
    }

    pub fn push(&mut self, record: Record) {
        self.records.push(record);
    }

    pub fn extend(&mut self, records: impl IntoIterator<Item = Record>) {
        self.records.extend(records);
    }

    pub fn find<'a>(&'a self, kind: &'a str) -> impl Iterator<Item = &'a Record> + 'a {
        self.records.iter().filter(move |r| r.kind == kind)
    }

    /// Values never contain spaces: callers pass numbers, bit strings and
    /// identifiers. Anything else has its whitespace replaced by `_`.
    pub fn to_structured(&self) -> String {
        let mut out = format!("{HEADER} {}\n", self.command);
        for r in &self.records {
            out.push_str(&r.kind);
            for (k, v) in &r.fields {
                let v: String = v
                    .chars()
                    .map(|c| if c.is_whitespace() { '_' } else { c })
                    .collect();
                let _ = write!(out, " {k}={v}");
            }
            out.push('\n');
        }
        out
    }

    pub fn to_human(&self) -> String {
        let mut out = String::new();
        let mut last_kind = "";
        for r in &self.records {
            if r.kind != last_kind {
                if !last_kind.is_empty() {
                    out.push('\n');
                }
                let _ = writeln!(out, "[{}]", r.kind);
                last_kind = &r.kind;
            }
            let line: Vec<String> = r.fields.iter().map(|(k, v)| format!("{k}: {v}")).collect();
            let _ = writeln!(out, "  {}", line.join(", "));
        }
        out
    }

    /// Parse the structured form back; used by tests and downstream tools.
    pub fn parse(text: &str) -> Option<Report> {
        let mut lines = text.lines();
        let command = lines.next()?.strip_prefix(HEADER)?.trim().to_string();
        let mut records = Vec::new();
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let mut parts = line.split_whitespace();
            let mut rec = Record::new(parts.next()?);
            for p in parts {
                let (k, v) = p.split_once('=')?;
                rec.fields.push((k.to_string(), v.to_string()));
            }
            records.push(rec);
        }
        Some(Report { command, records })
    }
}

pub fn standard_form_records(sf: &StandardForm) -> Vec<Record> {
    let perm: Vec<String> = sf.perm.iter().map(|p| p.to_string()).collect();
    let mut out = vec![Record::new("standard_form")
        .field("n", sf.n)
        .field("r", sf.r)
        .field("rank_deficient", sf.rank_deficient)
        .field("perm", perm.join(","))];
    for i in 0..sf.a.row_count() {
        out.push(
            Record::new("a_row")
                .field("row", i)
                .field("bits", sf.a.row(i)),
        );
    }
    out
}

pub fn ft_records(report: &FtReport) -> Vec<Record> {
    let mut out = vec![Record::new("ft_condition")
        .field("t", report.t)
        .field("pass", report.pass)
        .field("violations", report.violations.len())];
    for v in &report.violations {
        let leader = v.leader.as_ref().map_or("-".to_string(), |l| l.to_string());
        let lw = v.leader_weight.map_or(">t".to_string(), |w| w.to_string());
        out.push(
            Record::new("ft_violation")
                .field("syndrome", &v.syndrome)
                .field("syndrome_weight", v.syndrome_weight)
                .field("leader", leader)
                .field("leader_weight", lw),
        );
    }
    out
}

pub fn schedule_records(label: &str, sched: &Schedule) -> Vec<Record> {
    let mut out = vec![Record::new("schedule")
        .field("network", label)
        .field("rows", sched.rows)
        .field("cols", sched.cols)
        .field("n", sched.n_symbols)];
    for &(r, c, t) in &sched.entries {
        out.push(
            Record::new("slot")
                .field("network", label)
                .field("row", r)
                .field("col", c)
                .field("time", t),
        );
    }
    out
}

fn event_record(kind: &str, k: usize, e: &ScanEvent) -> Record {
    let injected = e
        .injected
        .as_ref()
        .map_or("-".to_string(), |v| v.to_string());
    Record::new(kind)
        .field("k", k)
        .field("faults", &e.faults)
        .field("injected", injected)
        .field("residual", &e.residual_x)
        .field("effective_weight", e.effective_weight)
}

/// Summary, histogram and stored violations of each scan level.
pub fn scan_records(results: &[ScanResult], max_events: usize) -> Vec<Record> {
    let mut out = Vec::new();
    for r in results {
        out.push(
            Record::new("scan")
                .field("k", r.k)
                .field("events", r.events)
                .field("accepted", r.accepted)
                .field("violations", r.violation_count)
                .field("strict_violations", r.strict_violation_count),
        );
        for (&(inj, w), &n) in &r.accepted_by_weight {
            out.push(
                Record::new("accepted")
                    .field("k", r.k)
                    .field("injected", inj)
                    .field("effective_weight", w)
                    .field("count", n),
            );
        }
    }
    for r in results {
        for e in r.violations.iter().take(max_events) {
            out.push(event_record("violation", r.k, e));
        }
    }
    for r in results {
        for e in r.strict_violations.iter().take(max_events) {
            out.push(event_record("strict_violation", r.k, e));
        }
    }
    out
}

pub fn mc_records(results: &[McResult]) -> Vec<Record> {
    let mut out = Vec::new();
    for r in results {
        out.push(
            Record::new("mc")
                .field("epsilon", r.epsilon)
                .field("trials", r.trials)
                .field("accepted", r.accepted()),
        );
        for (&(acc, w), &n) in &r.counts {
            out.push(
                Record::new("outcome")
                    .field("epsilon", r.epsilon)
                    .field("accepted", acc)
                    .field("effective_weight", w)
                    .field("count", n),
            );
        }
    }
    out
}

pub fn scaling_records(report: &ScalingReport) -> Vec<Record> {
    let mut out = Vec::new();
    for fit in report.fits.values() {
        for p in &fit.points {
            let mut rec = Record::new("point")
                .field("weight", p.weight)
                .field("epsilon", p.epsilon)
                .field("probability", format!("{:.6e}", p.probability));
            if let Some((lo, hi)) = p.ci {
                rec = rec
                    .field("ci_low", format!("{lo:.6e}"))
                    .field("ci_high", format!("{hi:.6e}"));
            }
            out.push(rec);
        }
        let rec = Record::new("fit").field("weight", fit.weight);
        out.push(match (fit.exponent, fit.prefactor) {
            (Some(s), Some(a)) => rec
                .field("exponent", format!("{s:.4}"))
                .field("prefactor", format!("{a:.4e}"))
                .field("correlated", fit.correlated()),
            _ => rec.field("exponent", "indeterminate"),
        });
    }
    out
}
