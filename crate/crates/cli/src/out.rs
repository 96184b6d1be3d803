use std::io::{self, Write};

use hecke_core::json;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// What a command produced, in every output format, plus whether all its
/// checks passed.
pub struct Output {
    pub text: String,
    pub json: Value,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub ok: bool,
}

impl Output {
    pub fn write(&self, format: Format) -> io::Result<()> {
        let stdout = io::stdout();
        let mut lock = stdout.lock();
        match format {
            Format::Text => lock.write_all(self.text.as_bytes()),
            Format::Json => lock.write_all(json::emit(&self.json).as_bytes()),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(lock);
                w.write_record(&self.header)?;
                for row in &self.rows {
                    w.write_record(row)?;
                }
                w.flush()
            }
        }
    }
}
