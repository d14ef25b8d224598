use std::fmt::Write as _;

use super::config::{ExperimentConfig, Format};

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i128),
    Float(f64),
    Text(String),
    Bool(bool),
    Empty,
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i128)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i128)
    }
}

impl From<u128> for Cell {
    fn from(v: u128) -> Self {
        Cell::Int(v as i128)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

/// Floats print with 17 significant digits, which round-trips any `f64`.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x:.16e}")
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(x) => format_float(*x),
            Cell::Text(s) => csv_field(s),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(x) if x.is_finite() => format_float(*x),
            Cell::Float(_) | Cell::Empty => "null".to_string(),
            Cell::Text(s) => serde_json::to_string(s).expect("string serializes"),
            Cell::Bool(b) => b.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Metadata {
    pub command: String,
    pub config: ExperimentConfig,
    pub version: String,
    /// Wall-clock seconds, only recorded when asked for.
    pub elapsed: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResultTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub metadata: Metadata,
}

impl ResultTable {
    pub fn new(command: &str, config: &ExperimentConfig, columns: &[&str]) -> Self {
        ResultTable {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            metadata: Metadata {
                command: command.to_string(),
                config: config.clone(),
                version: env!("CARGO_PKG_VERSION").to_string(),
                elapsed: None,
            },
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "rows must match the header");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let meta = &self.metadata;
        writeln!(out, "# command: {}", meta.command).unwrap();
        writeln!(out, "# version: {}", meta.version).unwrap();
        writeln!(out, "# config: {}", meta.config.to_json()).unwrap();
        if let Some(t) = meta.elapsed {
            writeln!(out, "# elapsed_seconds: {}", format_float(t)).unwrap();
        }
        let header: Vec<String> = self.columns.iter().map(|c| csv_field(c)).collect();
        writeln!(out, "{}", header.join(",")).unwrap();
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            writeln!(out, "{}", cells.join(",")).unwrap();
        }
        out
    }

    pub fn to_json(&self) -> String {
        let meta = &self.metadata;
        let mut out = String::from("{\n  \"metadata\": {");
        write!(
            out,
            "\"command\": {}",
            serde_json::to_string(&meta.command).unwrap()
        )
        .unwrap();
        write!(
            out,
            ", \"version\": {}",
            serde_json::to_string(&meta.version).unwrap()
        )
        .unwrap();
        write!(out, ", \"config\": {}", meta.config.to_json()).unwrap();
        if let Some(t) = meta.elapsed {
            write!(out, ", \"elapsed_seconds\": {}", format_float(t)).unwrap();
        }
        out.push_str("},\n  \"columns\": ");
        out.push_str(&serde_json::to_string(&self.columns).unwrap());
        out.push_str(",\n  \"rows\": [");
        for (i, row) in self.rows.iter().enumerate() {
            out.push_str(if i == 0 { "\n    [" } else { ",\n    [" });
            let cells: Vec<String> = row.iter().map(Cell::json).collect();
            out.push_str(&cells.join(", "));
            out.push(']');
        }
        out.push_str(if self.rows.is_empty() {
            "]\n}\n"
        } else {
            "\n  ]\n}\n"
        });
        out
    }
}

/// Pulls the config echo back out of rendered output.
pub fn config_from_output(text: &str) -> Option<ExperimentConfig> {
    if let Some(line) = text.lines().find_map(|l| l.strip_prefix("# config: ")) {
        return ExperimentConfig::from_json(line).ok();
    }
    let value: serde_json::Value = serde_json::from_str(text).ok()?;
    let config = value.get("metadata")?.get("config")?;
    ExperimentConfig::from_json(&config.to_string()).ok()
}
