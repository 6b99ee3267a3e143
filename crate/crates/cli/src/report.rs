//! Command reports and their renderings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::definition::SCHEMA;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Table {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// A two-column `n`, `value` table over degrees `0..`.
    pub fn by_degree<T: ToString>(name: &str, column: &str, values: &[T]) -> Self {
        let mut t = Table::new(name, &["n", column]);
        for (n, v) in values.iter().enumerate() {
            t.push(vec![n.to_string(), v.to_string()]);
        }
        t
    }

    pub fn column(&self, name: &str) -> Option<Vec<&str>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j].as_str()).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Verdict {
    pub fn new(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        Verdict {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub min: usize,
    pub max: usize,
}

/// The computed part of a report; this is what the cache stores.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct Body {
    /// Scalar results, in order.
    pub summary: Vec<(String, String)>,
    pub tables: Vec<Table>,
    pub verdicts: Vec<Verdict>,
}

impl Body {
    pub fn summary(&mut self, key: &str, value: impl ToString) {
        self.summary.push((key.into(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.summary
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheStats {
    pub hits: u64,
    pub misses: u64,
    pub writes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meta {
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub cache: CacheStats,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    /// Input description as ordered key/value pairs.
    pub inputs: Vec<(String, String)>,
    pub window: Option<Window>,
    #[serde(flatten)]
    pub body: Body,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<Meta>,
}

impl Report {
    pub fn new(
        command: &str,
        inputs: Vec<(String, String)>,
        window: Option<Window>,
        body: Body,
    ) -> Self {
        Report {
            schema: SCHEMA,
            command: command.into(),
            inputs,
            window,
            body,
            meta: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.body.passed()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# command\t{}", self.command);
        for (k, v) in &self.inputs {
            let _ = writeln!(out, "# {k}\t{v}");
        }
        if !self.body.summary.is_empty() {
            let _ = writeln!(out, "## summary\nkey\tvalue");
            for (k, v) in &self.body.summary {
                let _ = writeln!(out, "{k}\t{v}");
            }
        }
        for t in &self.body.tables {
            let _ = writeln!(out, "## {}", t.name);
            let _ = writeln!(out, "{}", t.columns.join("\t"));
            for r in &t.rows {
                let _ = writeln!(out, "{}", r.join("\t"));
            }
        }
        if !self.body.verdicts.is_empty() {
            let _ = writeln!(out, "## verdicts\nname\tpass\tdetail");
            for v in &self.body.verdicts {
                let _ = writeln!(out, "{}\t{}\t{}", v.name, v.pass, v.detail);
            }
        }
        out
    }

    pub fn to_human(&self) -> String {
        let mut out = String::new();
        let inputs: Vec<String> = self
            .inputs
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        let _ = writeln!(out, "{} [{}]", self.command, inputs.join(" "));
        if let Some(w) = &self.window {
            let _ = writeln!(out, "window: degrees {}..={}", w.min, w.max);
        }
        for (k, v) in &self.body.summary {
            let _ = writeln!(out, "{k} = {v}");
        }
        for t in &self.body.tables {
            let _ = writeln!(out, "\n{}", t.name);
            let widths: Vec<usize> = (0..t.columns.len())
                .map(|j| {
                    t.rows
                        .iter()
                        .map(|r| r[j].chars().count())
                        .chain([t.columns[j].chars().count()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let line = |cells: &[String]| {
                cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:>w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
            };
            let _ = writeln!(out, "  {}", line(&t.columns));
            for r in &t.rows {
                let _ = writeln!(out, "  {}", line(r));
            }
        }
        if !self.body.verdicts.is_empty() {
            out.push('\n');
        }
        for v in &self.body.verdicts {
            let mark = if v.pass { "PASS" } else { "FAIL" };
            if v.detail.is_empty() {
                let _ = writeln!(out, "{mark}  {}", v.name);
            } else {
                let _ = writeln!(out, "{mark}  {}: {}", v.name, v.detail);
            }
        }
        if let Some(m) = &self.meta {
            let _ = writeln!(
                out,
                "\ncache: {} hits, {} misses, {} writes",
                m.cache.hits, m.cache.misses, m.cache.writes
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut body = Body::default();
        body.summary("t0", 1);
        body.tables
            .push(Table::by_degree("dims", "dim", &[1, 0, 0]));
        body.verdicts.push(Verdict::new("ok", true, ""));
        Report::new(
            "dims",
            vec![("module".into(), "k0".into())],
            Some(Window { min: 0, max: 2 }),
            body,
        )
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert!(r.to_json().contains("\"schema\": 1"));
    }

    #[test]
    fn renderings() {
        let r = sample();
        let tsv = r.to_tsv();
        assert!(tsv.contains("## dims\nn\tdim\n0\t1\n1\t0\n2\t0\n"), "{tsv}");
        let human = r.to_human();
        assert!(human.contains("t0 = 1"));
        assert!(human.contains("PASS  ok"));
    }
}
