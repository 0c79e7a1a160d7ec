//! Row-oriented output rendered as CSV or as a JSON array of objects.

use serde_json::{Map, Number, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

/// 17 significant digits in scientific notation; independent of locale.
fn number(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table { columns: columns.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let fields: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Num(x) => number(*x),
                    Cell::Text(s) => s.clone(),
                    Cell::Empty => String::new(),
                })
                .collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (name, cell) in self.columns.iter().zip(row) {
                    let value = match cell {
                        Cell::Num(x) => Number::from_f64(*x).map_or(Value::Null, Value::Number),
                        Cell::Text(s) => Value::String(s.clone()),
                        Cell::Empty => Value::Null,
                    };
                    obj.insert(name.clone(), value);
                }
                Value::Object(obj)
            })
            .collect();
        let mut out = serde_json::to_string_pretty(&Value::Array(rows)).expect("json values are serializable");
        out.push('\n');
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_header_and_seventeen_digits() {
        let mut t = Table::new(["energy", "kind"]);
        t.push(vec![Cell::Num(0.1), "x".into()]);
        t.push(vec![Cell::Empty, "y".into()]);
        assert_eq!(t.to_csv(), "energy,kind\n1.0000000000000001e-1,x\n,y\n");
    }

    #[test]
    fn json_mirrors_columns() {
        let mut t = Table::new(["b", "a"]);
        t.push(vec![Cell::Num(2.5), Cell::Empty]);
        let v: Value = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(v[0]["b"], 2.5);
        assert!(v[0]["a"].is_null());
        let keys: Vec<&String> = v[0].as_object().unwrap().keys().collect();
        assert_eq!(keys, ["b", "a"]);
    }
}
