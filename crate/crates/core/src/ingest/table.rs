use std::io::{BufRead, BufReader};
use std::path::Path;

use crate::error::{Error, Result};

/// A delimited text table held as raw strings. Rows keep their original
/// field count so callers can detect malformed lines.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.headers.iter().position(|h| h == name)
    }

    pub fn require(&self, path: &Path, names: &[&str]) -> Result<()> {
        for name in names {
            if self.column(name).is_none() {
                return Err(Error::MissingColumn {
                    path: path.to_path_buf(),
                    column: (*name).to_string(),
                });
            }
        }
        Ok(())
    }
}

/// Reads a UTF-8 table with a header row. Tab-separated when the header line
/// contains a tab (unquoted), comma-separated otherwise (RFC 4180 quoting).
pub fn read_table(path: &Path) -> Result<Table> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = BufReader::new(file);
    let mut first = String::new();
    reader.read_line(&mut first).map_err(|e| Error::io(path, e))?;
    if first.trim().is_empty() {
        return Err(Error::format(path, "missing header row"));
    }
    let tab = first.contains('\t');

    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut csv = csv::ReaderBuilder::new()
        .delimiter(if tab { b'\t' } else { b',' })
        .quoting(!tab)
        .flexible(true)
        .has_headers(true)
        .from_reader(file);
    let headers = csv
        .headers()
        .map_err(|e| Error::format(path, e.to_string()))?
        .iter()
        .map(|h| h.trim().trim_start_matches('\u{feff}').to_string())
        .collect();
    let mut rows = Vec::new();
    for record in csv.byte_records() {
        let record = record.map_err(|e| Error::format(path, e.to_string()))?;
        if record.len() == 1 && record[0].iter().all(u8::is_ascii_whitespace) {
            continue;
        }
        // A row with invalid UTF-8 is kept as an empty field list, which
        // every caller counts as malformed.
        let fields: Option<Vec<String>> = record
            .iter()
            .map(|f| std::str::from_utf8(f).ok().map(str::to_string))
            .collect();
        rows.push(fields.unwrap_or_default());
    }
    Ok(Table { headers, rows })
}
