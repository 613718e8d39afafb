//! Report assembly: one JSON value plus titled tables, emitted in the
//! requested format.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Summary {
    Verified,
    WithinCaps,
    Inconclusive,
    Failed,
}

impl Summary {
    /// `exact`: every value is exact. `conclusive`: nothing was left open.
    pub fn of(exact: bool, conclusive: bool) -> Summary {
        match (conclusive, exact) {
            (false, _) => Summary::Inconclusive,
            (true, true) => Summary::Verified,
            (true, false) => Summary::WithinCaps,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Summary::Verified => "verified",
            Summary::WithinCaps => "verified within caps",
            Summary::Inconclusive => "inconclusive",
            Summary::Failed => "failed",
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub title: Option<String>,
    headers: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Table {
        Table {
            title: None,
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn titled(mut self, title: impl Into<String>) -> Table {
        self.title = Some(title.into());
        self
    }

    pub fn row<S: ToString>(&mut self, cells: impl IntoIterator<Item = S>) {
        self.rows
            .push(cells.into_iter().map(|c| c.to_string()).collect());
    }

    /// Two-column field/value table.
    pub fn fields<K: ToString, V: ToString>(pairs: impl IntoIterator<Item = (K, V)>) -> Table {
        let mut t = Table::new(["field", "value"]);
        for (k, v) in pairs {
            t.row([k.to_string(), v.to_string()]);
        }
        t
    }

    pub fn render(&self) -> String {
        let width = |c: usize| {
            self.rows
                .iter()
                .filter_map(|r| r.get(c))
                .chain(std::iter::once(&self.headers[c]))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        };
        let widths: Vec<usize> = (0..self.headers.len()).map(width).collect();
        let line = |cells: &[String]| {
            let mut s = String::new();
            for (c, w) in widths.iter().enumerate() {
                let cell = cells.get(c).map_or("", String::as_str);
                if c + 1 == widths.len() {
                    s.push_str(cell);
                } else {
                    let _ = write!(s, "{cell:<w$}  ");
                }
            }
            s.trim_end().to_string()
        };
        let mut out = String::new();
        if let Some(t) = &self.title {
            let _ = writeln!(out, "{t}");
        }
        let _ = writeln!(out, "{}", line(&self.headers));
        let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
        let _ = writeln!(out, "{}", line(&rule));
        for r in &self.rows {
            let _ = writeln!(out, "{}", line(r));
        }
        out
    }

    pub fn csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.headers).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
    }
}

pub struct Report {
    pub json: Value,
    pub tables: Vec<Table>,
    pub summary: Summary,
    pub code: i32,
}

impl Report {
    pub fn new(json: Value, tables: Vec<Table>, summary: Summary) -> Report {
        Report {
            json,
            tables,
            summary,
            code: 0,
        }
    }

    pub fn with_code(mut self, code: i32) -> Report {
        self.code = code;
        self
    }

    /// Standard output text; for CSV the summary goes to stderr instead.
    pub fn render(&self, format: Format) -> (String, Option<String>) {
        let summary = format!("summary: {}", self.summary.label());
        match format {
            Format::Json => {
                let mut v = self.json.clone();
                if let Value::Object(m) = &mut v {
                    m.insert("summary".into(), Value::String(self.summary.label().into()));
                }
                let mut s = serde_json::to_string_pretty(&v).expect("json values serialize");
                s.push('\n');
                (s, None)
            }
            Format::Table => {
                let mut s = String::new();
                for t in &self.tables {
                    s.push_str(&t.render());
                    s.push('\n');
                }
                s.push_str(&summary);
                s.push('\n');
                (s, None)
            }
            Format::Csv => {
                let mut s = String::new();
                for (k, t) in self.tables.iter().enumerate() {
                    if k > 0 {
                        s.push('\n');
                    }
                    if let Some(title) = &t.title {
                        let _ = writeln!(s, "# {title}");
                    }
                    s.push_str(&t.csv());
                }
                (s, Some(summary))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aligned() {
        let mut t = Table::new(["n", "value"]);
        t.row(["10", "2"]);
        t.row(["2", "0"]);
        assert_eq!(t.render(), "n   value\n--  -----\n10  2\n2   0\n");
    }

    #[test]
    fn csv_quotes() {
        let mut t = Table::new(["word"]);
        t.row(["x, y"]);
        assert_eq!(t.csv(), "word\n\"x, y\"\n");
    }

    #[test]
    fn summaries() {
        assert_eq!(Summary::of(true, true).label(), "verified");
        assert_eq!(Summary::of(false, true).label(), "verified within caps");
        assert_eq!(Summary::of(true, false).label(), "inconclusive");
    }
}
