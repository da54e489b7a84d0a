//! Row records and their CSV / JSON / markdown renderings.

use std::fmt::Write as _;

use scanex_core::display::{table_bound, table_fixed, table_probability};
use scanex_core::pipeline::{Cell, Table};
use serde_json::{Map, Number, Value as Json};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Md,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Number {
        value: f64,
        display: String,
    },
    Text(String),
    /// Inapplicable; a dash in the tables.
    Dash,
}

/// How a number is rendered unless raw output is requested.
#[derive(Debug, Clone, Copy)]
pub enum Style {
    Probability,
    Bound,
    Fixed(usize),
    Scientific,
    Full,
}

impl Value {
    pub fn number(value: f64, style: Style, raw: bool) -> Self {
        let display = if raw {
            format!("{value}")
        } else {
            match style {
                Style::Probability => table_probability(value),
                Style::Bound => table_bound(value),
                Style::Fixed(d) => table_fixed(value, d),
                Style::Scientific => format!("{value:.5e}"),
                Style::Full => format!("{value}"),
            }
        };
        Value::Number { value, display }
    }

    pub fn maybe(value: Option<f64>, style: Style, raw: bool) -> Self {
        value.map_or(Value::Dash, |v| Value::number(v, style, raw))
    }

    pub fn int(v: impl Into<u64>) -> Self {
        let v = v.into();
        Value::Number {
            value: v as f64,
            display: v.to_string(),
        }
    }

    fn csv(&self) -> String {
        match self {
            Value::Number { display, .. } => display.clone(),
            Value::Text(t) => t.clone(),
            Value::Dash => String::new(),
        }
    }

    fn markdown(&self) -> String {
        match self {
            Value::Number { display, .. } => display.clone(),
            Value::Text(t) => t.clone(),
            Value::Dash => "−".to_string(),
        }
    }

    fn json(&self) -> Json {
        match self {
            Value::Number { display, .. } => {
                // the rendered digits, so JSON and CSV agree cell for cell
                let parsed: f64 = display.parse().unwrap_or(f64::NAN);
                if parsed.fract() == 0.0 && parsed.abs() < 9.0e15 && !display.contains(['.', 'e']) {
                    Json::Number(Number::from(parsed as i64))
                } else {
                    Number::from_f64(parsed).map_or(Json::Null, Json::Number)
                }
            }
            Value::Text(t) => Json::String(t.clone()),
            Value::Dash => Json::Null,
        }
    }
}

impl From<&Cell> for Value {
    fn from(c: &Cell) -> Self {
        match c {
            Cell::Value { value, display } => Value::Number {
                value: *value,
                display: display.clone(),
            },
            Cell::Dash => Value::Dash,
        }
    }
}

/// A command's output: column keys, optional markdown labels, and rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Sheet {
    pub command: String,
    pub title: Option<String>,
    pub keys: Vec<String>,
    pub labels: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

/// One record of a single command invocation, built field by field.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputRecord {
    command: String,
    fields: Vec<(String, Value)>,
}

impl OutputRecord {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            fields: Vec::new(),
        }
    }

    pub fn push(&mut self, key: &str, value: Value) -> &mut Self {
        self.fields.push((key.to_string(), value));
        self
    }

    pub fn into_sheet(self) -> Sheet {
        let keys: Vec<String> = self.fields.iter().map(|(k, _)| k.clone()).collect();
        Sheet {
            command: self.command,
            title: None,
            labels: keys.clone(),
            keys,
            rows: vec![self.fields.into_iter().map(|(_, v)| v).collect()],
        }
    }
}

impl Sheet {
    pub fn from_table(command: &str, table: &Table) -> Self {
        Sheet {
            command: command.to_string(),
            title: Some(format!("Table {}: {}", table.id, table.title)),
            keys: table.columns.iter().map(|c| c.key.to_string()).collect(),
            labels: table.columns.iter().map(|c| c.label.to_string()).collect(),
            rows: table
                .rows
                .iter()
                .map(|r| r.iter().map(Value::from).collect())
                .collect(),
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.csv(),
            Format::Json => self.json(),
            Format::Md => self.markdown(),
        }
    }

    fn csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.keys).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(Value::csv))
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 output")
    }

    fn json(&self) -> String {
        let rows: Vec<Json> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Json> = self
                    .keys
                    .iter()
                    .cloned()
                    .zip(row.iter().map(Value::json))
                    .collect();
                Json::Object(obj)
            })
            .collect();
        let mut top = Map::new();
        top.insert("command".into(), Json::String(self.command.clone()));
        top.insert("rows".into(), Json::Array(rows));
        let mut s = serde_json::to_string_pretty(&Json::Object(top)).expect("json");
        s.push('\n');
        s
    }

    fn markdown(&self) -> String {
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(Value::markdown).collect())
            .collect();
        let widths: Vec<usize> = self
            .labels
            .iter()
            .enumerate()
            .map(|(i, l)| {
                cells
                    .iter()
                    .map(|r| r[i].chars().count())
                    .chain(std::iter::once(l.chars().count()))
                    .max()
                    .unwrap_or(1)
                    .max(3)
            })
            .collect();
        let pad = |s: &str, w: usize| format!("{s}{}", " ".repeat(w - s.chars().count()));
        let mut out = String::new();
        if let Some(t) = &self.title {
            let _ = writeln!(out, "{t}\n");
        }
        let header: Vec<String> = self
            .labels
            .iter()
            .zip(&widths)
            .map(|(l, &w)| pad(l, w))
            .collect();
        let _ = writeln!(out, "| {} |", header.join(" | "));
        let rule: Vec<String> = widths
            .iter()
            .map(|&w| format!("{}:", "-".repeat(w - 1)))
            .collect();
        let _ = writeln!(
            out,
            "|{}|",
            rule.iter()
                .map(|r| format!(" {r} "))
                .collect::<Vec<_>>()
                .join("|")
        );
        for r in &cells {
            let row: Vec<String> = r.iter().zip(&widths).map(|(c, &w)| pad(c, w)).collect();
            let _ = writeln!(out, "| {} |", row.join(" | "));
        }
        out
    }
}
