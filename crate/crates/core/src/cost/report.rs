//! Report emission: aligned tables for people, tab-separated records for
//! tools. Both forms are deterministic.

use std::fmt::Write as _;

use super::pass::{CostReport, VariantComparison};
use super::profile::MIB;

pub const REPORT_SCHEMA: &str = "# rns-ckks report v1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Record {
    pub metric: String,
    pub variant: String,
    pub value: String,
    pub unit: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Table {
    pub title: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(title: &str, header: &[&str]) -> Self {
        Table {
            title: title.to_string(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    pub fn render(&self) -> String {
        let cols = self.header.len();
        let mut width = vec![0; cols];
        for r in std::iter::once(&self.header).chain(&self.rows) {
            for (w, c) in width.iter_mut().zip(r) {
                *w = (*w).max(c.chars().count());
            }
        }
        let line = |r: &[String]| {
            let mut s = String::new();
            for (i, (c, w)) in r.iter().zip(&width).enumerate() {
                if i == 0 {
                    write!(s, "{c:<w$}").unwrap();
                } else {
                    write!(s, "  {c:>w$}").unwrap();
                }
            }
            s.trim_end().to_string()
        };
        let mut out = format!("{}\n", self.title);
        out.push_str(&line(&self.header));
        out.push('\n');
        let rule: usize = width.iter().sum::<usize>() + 2 * cols.saturating_sub(1);
        out.push_str(&"-".repeat(rule));
        out.push('\n');
        for r in &self.rows {
            out.push_str(&line(r));
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    /// measured value or reason, shown next to the verdict
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub tables: Vec<Table>,
    pub records: Vec<Record>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, metric: &str, variant: &str, value: String, unit: &str) {
        self.records.push(Record {
            metric: metric.to_string(),
            variant: variant.to_string(),
            value,
            unit: unit.to_string(),
        });
    }

    pub fn bytes(&mut self, metric: &str, variant: &str, bytes: u64) {
        self.record(metric, variant, bytes.to_string(), "B");
        self.record(metric, variant, fmt(bytes as f64 / MIB as f64), "MiB");
        self.record(metric, variant, fmt(bytes as f64 / 1e6), "MB");
    }

    pub fn check(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.to_string(),
            pass,
            detail: detail.into(),
        });
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.pass).count()
    }

    pub fn extend(&mut self, other: Report) {
        self.tables.extend(other.tables);
        self.records.extend(other.records);
        self.checks.extend(other.checks);
    }

    pub fn cost(&mut self, c: &CostReport) {
        let v = c.variant.name();
        let m = |s: &str| format!("{}.{}.{s}", c.profile, c.label);
        self.bytes(&m("offchip.evk"), v, c.offchip.evk);
        self.bytes(&m("offchip.plaintext"), v, c.offchip.plaintext);
        self.bytes(&m("offchip.ciphertext"), v, c.offchip.ciphertext);
        self.bytes(&m("offchip.twist"), v, c.offchip.twist);
        self.bytes(&m("offchip.total"), v, c.offchip_bytes());
        self.record(&m("modular_mults"), v, c.modular_mults.to_string(), "ops");
        self.record(&m("evk_loads"), v, c.evk_loads.to_string(), "keys");
        self.record(&m("ops_per_byte"), v, fmt(c.ops_per_byte), "ops/B");
        for (i, it) in c.iterations.iter().enumerate() {
            let p = |s: &str| m(&format!("iter{i}.{s}"));
            self.record(&p("level"), v, it.level.to_string(), "level");
            self.record(&p("evk_loads"), v, it.evk_loads.to_string(), "keys");
            self.record(&p("offchip"), v, it.offchip.total().to_string(), "B");
            self.record(&p("modular_mults"), v, it.modular_mults.to_string(), "ops");
        }
    }

    /// Table and records for all three variants of one pass.
    pub fn comparison(&mut self, c: &VariantComparison) {
        let b = &c.baseline;
        let mut t = Table::new(
            &format!(
                "{} on {}: off-chip traffic and arithmetic intensity",
                b.label, b.profile
            ),
            &[
                "variant",
                "evk MB",
                "plaintext MB",
                "total MB",
                "mults (1e9)",
                "evk loads",
                "ops/byte",
            ],
        );
        for r in [&c.baseline, &c.minks, &c.oflimb] {
            self.cost(r);
            t.row(vec![
                r.variant.name().to_string(),
                fmt1(r.offchip.evk as f64 / 1e6),
                fmt1(r.offchip.plaintext as f64 / 1e6),
                fmt1(r.offchip_bytes() as f64 / 1e6),
                fmt1(r.modular_mults as f64 / 1e9),
                r.evk_loads.to_string(),
                format!("{:.2}", r.ops_per_byte),
            ]);
        }
        self.tables.push(t);
        let m = |s: &str| format!("{}.{}.{s}", b.profile, b.label);
        self.record(&m("minks_intensity_gain"), "minks", fmt(c.minks_gain()), "x");
        self.record(
            &m("traffic_reduction"),
            "minks-oflimb",
            fmt(100.0 * c.traffic_reduction()),
            "%",
        );
        self.record(
            &m("of_limb_overhead"),
            "minks-oflimb",
            fmt(100.0 * c.of_limb_overhead()),
            "%",
        );
        self.record(&m("plaintext_share"), "baseline", fmt(100.0 * b.plaintext_share()), "%");
    }

    pub fn to_records(&self) -> String {
        let mut s = format!("{REPORT_SCHEMA}\n# metric\tvariant\tvalue\tunit\n");
        for r in &self.records {
            writeln!(s, "{}\t{}\t{}\t{}", r.metric, r.variant, r.value, r.unit).unwrap();
        }
        for c in &self.checks {
            writeln!(s, "check.{}\t-\t{}\tbool", c.name, if c.pass { "pass" } else { "fail" }).unwrap();
        }
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{REPORT_SCHEMA}\n");
        for t in &self.tables {
            s.push('\n');
            s.push_str(&t.render());
        }
        if !self.checks.is_empty() {
            s.push('\n');
            for c in &self.checks {
                let verdict = if c.pass { "PASS" } else { "FAIL" };
                if c.detail.is_empty() {
                    writeln!(s, "[{verdict}] {}", c.name).unwrap();
                } else {
                    writeln!(s, "[{verdict}] {}: {}", c.name, c.detail).unwrap();
                }
            }
            writeln!(
                s,
                "{} of {} checks passed",
                self.checks.len() - self.failures(),
                self.checks.len()
            )
            .unwrap();
        }
        s
    }
}

/// Six significant digits, no exponent for ordinary magnitudes.
pub fn fmt(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = (5 - x.abs().log10().floor() as i32).clamp(0, 12) as usize;
    let s = format!("{x:.digits$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn fmt1(x: f64) -> String {
    format!("{x:.1}")
}
