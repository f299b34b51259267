//! Row-oriented output in table, JSON or CSV form.

use std::io::{self, Write};

use clap::ValueEnum;
use qeuler_core::Polynomial;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

pub enum Cell {
    Str(String),
    Int(i64),
    Bool(bool),
    List(Vec<usize>),
    Poly(Polynomial),
}

impl Cell {
    pub fn int(v: usize) -> Cell {
        Cell::Int(v as i64)
    }

    fn json(&self) -> Value {
        match self {
            Cell::Str(s) => Value::from(s.as_str()),
            Cell::Int(v) => Value::from(*v),
            Cell::Bool(b) => Value::from(*b),
            Cell::List(v) => Value::from(v.clone()),
            Cell::Poly(p) => serde_json::to_value(p).expect("polynomials serialize"),
        }
    }

    fn text(&self) -> String {
        match self {
            Cell::Str(s) => s.clone(),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::List(v) => v
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" "),
            Cell::Poly(p) => p.to_string(),
        }
    }
}

pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Streams rows under fixed column names. Table columns are padded to the
/// given minimum widths; JSON is an array of objects.
pub struct Sink<'a> {
    out: &'a mut dyn Write,
    format: Format,
    columns: Vec<(&'static str, usize)>,
    rows: usize,
}

impl<'a> Sink<'a> {
    pub fn new(
        out: &'a mut dyn Write,
        format: Format,
        columns: &[(&'static str, usize)],
    ) -> io::Result<Self> {
        let columns: Vec<(&'static str, usize)> = columns
            .iter()
            .map(|&(name, w)| (name, w.max(name.len())))
            .collect();
        let mut sink = Sink {
            out,
            format,
            columns,
            rows: 0,
        };
        match format {
            Format::Table => {
                let header: Vec<String> = sink.columns.iter().map(|c| c.0.to_string()).collect();
                sink.write_table_line(&header)?;
            }
            Format::Csv => {
                let header: Vec<&str> = sink.columns.iter().map(|c| c.0).collect();
                writeln!(sink.out, "{}", header.join(","))?;
            }
            Format::Json => write!(sink.out, "[")?,
        }
        Ok(sink)
    }

    fn write_table_line(&mut self, cells: &[String]) -> io::Result<()> {
        let last = cells.len().saturating_sub(1);
        let mut line = String::new();
        for (i, cell) in cells.iter().enumerate() {
            if i == last {
                line.push_str(cell);
            } else {
                line.push_str(&format!("{:<w$}  ", cell, w = self.columns[i].1));
            }
        }
        writeln!(self.out, "{}", line.trim_end())
    }

    pub fn row(&mut self, cells: Vec<Cell>) -> io::Result<()> {
        assert_eq!(cells.len(), self.columns.len());
        match self.format {
            Format::Table => {
                let text: Vec<String> = cells.iter().map(Cell::text).collect();
                self.write_table_line(&text)?;
            }
            Format::Csv => {
                let text: Vec<String> = cells.iter().map(|c| csv_field(&c.text())).collect();
                writeln!(self.out, "{}", text.join(","))?;
            }
            Format::Json => {
                let mut obj = Map::new();
                for ((name, _), cell) in self.columns.iter().zip(&cells) {
                    obj.insert(name.to_string(), cell.json());
                }
                let sep = if self.rows == 0 { "\n" } else { ",\n" };
                write!(self.out, "{sep}  {}", Value::Object(obj))?;
            }
        }
        self.rows += 1;
        Ok(())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn finish(self) -> io::Result<()> {
        if self.format == Format::Json {
            let close = if self.rows == 0 { "]" } else { "\n]" };
            writeln!(self.out, "{close}")?;
        }
        self.out.flush()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn render(format: Format) -> String {
        let mut buf = Vec::new();
        let mut sink = Sink::new(&mut buf, format, &[("tau", 4), ("s", 0)]).unwrap();
        sink.row(vec![Cell::Str("*21".into()), Cell::List(vec![1, 1])])
            .unwrap();
        sink.row(vec![Cell::Str("12".into()), Cell::List(vec![1, 2])])
            .unwrap();
        sink.finish().unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn formats() {
        assert_eq!(render(Format::Table), "tau   s\n*21   1 1\n12    1 2\n");
        assert_eq!(render(Format::Csv), "tau,s\n*21,1 1\n12,1 2\n");
        assert_eq!(
            render(Format::Json),
            "[\n  {\"s\":[1,1],\"tau\":\"*21\"},\n  {\"s\":[1,2],\"tau\":\"12\"}\n]\n"
        );
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("x\"y"), "\"x\"\"y\"");
        assert_eq!(csv_field("plain"), "plain");
    }
}
