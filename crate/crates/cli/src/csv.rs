//! Deterministic CSV output: `#`-prefixed metadata lines, a header row, and
//! 12-significant-digit scientific notation so files diff cleanly against
//! oracles. No timestamps or environment-dependent content.

use std::io::Write;
use std::path::Path;

use crate::CliError;

pub struct CsvDocument {
    metadata: Vec<String>,
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl CsvDocument {
    pub fn new(command_echo: &str, config_echo: &str, columns: &[&str]) -> Self {
        Self {
            metadata: vec![
                format!("qdil v{}", env!("CARGO_PKG_VERSION")),
                format!("command: {command_echo}"),
                format!("config: {config_echo}"),
            ],
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for line in &self.metadata {
            out.push_str("# ");
            out.push_str(line);
            out.push('\n');
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&x| format_sig(x)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn write_to(&self, path: &Path) -> Result<(), CliError> {
        let mut file = std::fs::File::create(path)
            .map_err(|e| CliError::Io(format!("cannot create {}: {e}", path.display())))?;
        file.write_all(self.render().as_bytes())
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
        Ok(())
    }
}

/// 12 significant digits, scientific, `.` decimal separator.
pub fn format_sig(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{x:.11e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_metadata_header_and_rows() {
        let mut doc = CsvDocument::new("figure fig2", "lambda=0.5", &["x", "y"]);
        doc.push_row(vec![0.5, 1.0 / 3.0]);
        let text = doc.render();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# qdil v"));
        assert_eq!(lines[1], "# command: figure fig2");
        assert_eq!(lines[2], "# config: lambda=0.5");
        assert_eq!(lines[3], "x,y");
        assert_eq!(lines[4], "5.00000000000e-1,3.33333333333e-1");
    }

    #[test]
    fn formatting_is_twelve_significant_digits() {
        assert_eq!(format_sig(0.028), "2.80000000000e-2");
        assert_eq!(format_sig(1.0), "1.00000000000e0");
        assert_eq!(format_sig(-0.399093), "-3.99093000000e-1");
    }
}
