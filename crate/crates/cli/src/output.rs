use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use serde_json::{Map, Value};

use crate::args::Format;

pub const SCHEMA_VERSION: u32 = 1;

/// A command's result: a JSON document plus, for tabular data, a CSV table.
pub struct Report {
    pub json: Value,
    pub table: Option<Table>,
}

pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
}

impl Cell {
    fn render(&self, out: &mut String) {
        match self {
            // 17 significant digits: parses back to the identical f64
            Cell::Num(x) => write!(out, "{x:.16e}").unwrap(),
            Cell::Int(n) => write!(out, "{n}").unwrap(),
            Cell::Text(s) => out.push_str(s),
        }
    }
}

impl Report {
    pub fn new(command: &str, body: Value) -> Self {
        let mut doc = Map::new();
        doc.insert("schema_version".into(), SCHEMA_VERSION.into());
        doc.insert("command".into(), command.into());
        if let Value::Object(fields) = body {
            doc.extend(fields);
        }
        Report {
            json: Value::Object(doc),
            table: None,
        }
    }

    pub fn with_table(mut self, table: Table) -> Self {
        self.table = Some(table);
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("serializable");
                s.push('\n');
                s
            }
            Format::Csv => match &self.table {
                Some(t) => render_table(t),
                None => render_table(&flatten(&self.json)),
            },
        }
    }

    pub fn emit(&self, format: Format, path: Option<&Path>) -> std::io::Result<()> {
        let text = self.render(format);
        match path {
            Some(p) => std::fs::write(p, text),
            None => std::io::stdout().lock().write_all(text.as_bytes()),
        }
    }
}

fn render_table(t: &Table) -> String {
    let mut out = t.header.join(",");
    out.push('\n');
    for row in &t.rows {
        for (k, cell) in row.iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            cell.render(&mut out);
        }
        out.push('\n');
    }
    out
}

/// `key,value` rows with dotted paths for nested JSON.
fn flatten(v: &Value) -> Table {
    fn walk(prefix: &str, v: &Value, rows: &mut Vec<Vec<Cell>>) {
        match v {
            Value::Object(m) => {
                for (k, x) in m {
                    let key = if prefix.is_empty() {
                        k.clone()
                    } else {
                        format!("{prefix}.{k}")
                    };
                    walk(&key, x, rows);
                }
            }
            Value::Array(a) => {
                for (i, x) in a.iter().enumerate() {
                    walk(&format!("{prefix}.{i}"), x, rows);
                }
            }
            Value::Number(n) if n.is_f64() => rows.push(vec![
                Cell::Text(prefix.to_string()),
                Cell::Num(n.as_f64().unwrap_or(f64::NAN)),
            ]),
            other => {
                let text = match other {
                    Value::String(s) => s.replace(',', ";"),
                    x => x.to_string(),
                };
                rows.push(vec![Cell::Text(prefix.to_string()), Cell::Text(text)]);
            }
        }
    }
    let mut rows = Vec::new();
    walk("", v, &mut rows);
    Table {
        header: vec!["key", "value"],
        rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn json_carries_schema_version() {
        let r = Report::new("prob", json!({"probability": 0.5}));
        assert_eq!(r.json["schema_version"], 1);
        assert_eq!(r.json["command"], "prob");
    }

    #[test]
    fn flattened_csv() {
        let r = Report::new("x", json!({"a": {"b": 0.25, "c": [1, "p,q"]}}));
        let csv = r.render(Format::Csv);
        assert_eq!(
            csv,
            "key,value\nschema_version,1\ncommand,x\na.b,2.5000000000000000e-1\na.c.0,1\na.c.1,p;q\n"
        );
    }

    #[test]
    fn numbers_round_trip() {
        for x in [0.1, 1.0 / 3.0, 0.090_169_943_749_474_24, 3.7e-33, 0.0] {
            let mut s = String::new();
            Cell::Num(x).render(&mut s);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
    }
}
