//! Tables and their TSV / JSON rendering.

use leafpath::exact::{fmt_rational, fmt_real, Rational};
use serde_json::{Map, Value};

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Rat(Rational),
    Real(f64),
    Int(i128),
    Text(String),
    Bool(bool),
    Empty,
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    pub fn int(n: impl TryInto<i128>) -> Self {
        Cell::Int(n.try_into().unwrap_or(i128::MAX))
    }

    pub fn opt_rat(q: Option<&Rational>) -> Self {
        q.map_or(Cell::Empty, |q| Cell::Rat(q.clone()))
    }

    fn tsv(&self) -> String {
        match self {
            Cell::Rat(q) => fmt_rational(q),
            Cell::Real(x) => fmt_real(*x),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.replace(['\t', '\n'], " "),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => "-".into(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Rat(q) => Value::String(fmt_rational(q)),
            Cell::Real(x) => {
                let v: f64 = fmt_real(*x).parse().unwrap_or(f64::NAN);
                serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
            }
            Cell::Int(n) => match i64::try_from(*n) {
                Ok(n) => Value::from(n),
                Err(_) => Value::String(n.to_string()),
            },
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<Rational> for Cell {
    fn from(q: Rational) -> Self {
        Cell::Rat(q)
    }
}

impl From<&Rational> for Cell {
    fn from(q: &Rational) -> Self {
        Cell::Rat(q.clone())
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Real(x)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::int(n)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::text(s)
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

#[derive(Clone, Debug)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Table { name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len(), "table {}", self.name);
        self.rows.push(row);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Tsv,
    Json,
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub command: String,
    pub input: Option<String>,
    pub tables: Vec<Table>,
}

impl Report {
    pub fn new(command: &str, input: Option<&str>) -> Self {
        Report { command: command.into(), input: input.map(str::to_string), tables: Vec::new() }
    }

    pub fn add(&mut self, t: Table) {
        self.tables.push(t);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Tsv => {
                let mut out = String::new();
                for (i, t) in self.tables.iter().enumerate() {
                    if i > 0 {
                        out.push('\n');
                    }
                    out.push_str(&format!("# {}\n", t.name));
                    out.push_str(&t.columns.join("\t"));
                    out.push('\n');
                    for r in &t.rows {
                        let cells: Vec<String> = r.iter().map(Cell::tsv).collect();
                        out.push_str(&cells.join("\t"));
                        out.push('\n');
                    }
                }
                out
            }
            Format::Json => {
                let mut top = Map::new();
                top.insert("command".into(), Value::String(self.command.clone()));
                top.insert("input".into(), self.input.clone().map_or(Value::Null, Value::String));
                let tables = self
                    .tables
                    .iter()
                    .map(|t| {
                        let rows = t
                            .rows
                            .iter()
                            .map(|r| {
                                let obj: Map<String, Value> =
                                    t.columns.iter().cloned().zip(r.iter().map(Cell::json)).collect();
                                Value::Object(obj)
                            })
                            .collect();
                        let mut m = Map::new();
                        m.insert("name".into(), Value::String(t.name.clone()));
                        m.insert("rows".into(), Value::Array(rows));
                        Value::Object(m)
                    })
                    .collect();
                top.insert("tables".into(), Value::Array(tables));
                let mut s = serde_json::to_string_pretty(&Value::Object(top)).unwrap();
                s.push('\n');
                s
            }
        }
    }
}
