//! Report envelope and its JSON / CSV renderings.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::Write;

/// Bumped on any change to a command's result payload.
pub const SCHEMA_VERSION: &str = "1.0.0";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Unit {
    #[serde(rename = "hbar")]
    Hbar,
    #[serde(rename = "p0-units")]
    P0Units,
    #[serde(rename = "probability")]
    Probability,
    #[serde(rename = "radians")]
    Radians,
    #[serde(rename = "length")]
    Length,
    #[serde(rename = "dimensionless")]
    Dimensionless,
    #[serde(rename = "index")]
    Index,
}

impl Unit {
    pub fn tag(self) -> &'static str {
        match self {
            Unit::Hbar => "hbar",
            Unit::P0Units => "p0-units",
            Unit::Probability => "probability",
            Unit::Radians => "radians",
            Unit::Length => "length",
            Unit::Dimensionless => "dimensionless",
            Unit::Index => "index",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Quantity {
    pub value: f64,
    pub unit: Unit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub values: Vec<f64>,
    pub unit: Unit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Column {
    pub name: String,
    pub unit: Unit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Field {
    Quantity(Quantity),
    Series(Series),
    Table(Table),
    Text(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEnvelope {
    pub schema_version: String,
    pub command: String,
    pub config: serde_json::Value,
    pub results: BTreeMap<String, Field>,
    /// Wall-clock seconds per phase.
    pub timings: BTreeMap<String, f64>,
    pub tolerances: BTreeMap<String, f64>,
}

impl ReportEnvelope {
    pub fn new(command: &str, config: serde_json::Value) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            command: command.to_string(),
            config,
            results: BTreeMap::new(),
            timings: BTreeMap::new(),
            tolerances: amflow_core::tolerance::all()
                .iter()
                .map(|(k, v)| (k.to_string(), *v))
                .collect(),
        }
    }

    pub fn quantity(&mut self, name: &str, value: f64, unit: Unit) {
        self.results
            .insert(name.into(), Field::Quantity(Quantity { value, unit }));
    }

    pub fn series(&mut self, name: &str, values: Vec<f64>, unit: Unit) {
        self.results
            .insert(name.into(), Field::Series(Series { values, unit }));
    }

    pub fn table(&mut self, name: &str, columns: &[(&str, Unit)], rows: Vec<Vec<f64>>) {
        let columns = columns
            .iter()
            .map(|(n, u)| Column {
                name: n.to_string(),
                unit: *u,
            })
            .collect();
        self.results
            .insert(name.into(), Field::Table(Table { columns, rows }));
    }

    pub fn text(&mut self, name: &str, lines: Vec<String>) {
        self.results.insert(name.into(), Field::Text(lines));
    }

    pub fn write_json<W: Write>(&self, out: W) -> serde_json::Result<()> {
        let mut out = out;
        serde_json::to_writer_pretty(&mut out, self)?;
        writeln!(out).map_err(serde_json::Error::io)
    }

    /// One row per scalar: `section,name,index,value,unit`.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["section", "name", "index", "value", "unit"])?;
        let meta = [
            ("schema_version", &self.schema_version),
            ("command", &self.command),
        ];
        for (name, v) in meta {
            w.write_record(["meta", name, "", v.as_str(), ""])?;
        }
        for (name, field) in &self.results {
            match field {
                Field::Quantity(q) => {
                    w.write_record(["result", name, "", &q.value.to_string(), q.unit.tag()])?
                }
                Field::Series(s) => {
                    for (i, v) in s.values.iter().enumerate() {
                        w.write_record([
                            "result",
                            name,
                            &(i + 1).to_string(),
                            &v.to_string(),
                            s.unit.tag(),
                        ])?;
                    }
                }
                Field::Table(t) => {
                    for (i, row) in t.rows.iter().enumerate() {
                        for (col, v) in t.columns.iter().zip(row) {
                            let key = format!("{name}.{}", col.name);
                            w.write_record([
                                "result",
                                &key,
                                &i.to_string(),
                                &v.to_string(),
                                col.unit.tag(),
                            ])?;
                        }
                    }
                }
                Field::Text(lines) => {
                    for (i, line) in lines.iter().enumerate() {
                        w.write_record(["result", name, &i.to_string(), line, ""])?;
                    }
                }
            }
        }
        for (name, secs) in &self.timings {
            w.write_record(["timing", name, "", &secs.to_string(), "seconds"])?;
        }
        for (name, tol) in &self.tolerances {
            w.write_record(["tolerance", name, "", &tol.to_string(), ""])?;
        }
        w.flush()?;
        Ok(())
    }
}
