//! Output formats and the plain-text writers.

use clap::ValueEnum;

/// How a command renders its result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    /// Human-aligned text columns.
    Table,
    /// Comma-separated values with a header row.
    Csv,
    /// Schema-stable JSON documents.
    Json,
}

/// Renders rows as aligned text columns.
pub fn render_table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            if cell.len() > widths[i] {
                widths[i] = cell.len();
            }
        }
    }
    let mut out = String::new();
    let mut write_row = |cells: &[String]| {
        let line: Vec<String> = cells
            .iter()
            .enumerate()
            .map(|(i, c)| format!("{:<width$}", c, width = widths[i]))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    };
    write_row(&headers.iter().map(|h| h.to_string()).collect::<Vec<_>>());
    for row in rows {
        write_row(row);
    }
    out
}

/// Renders rows as CSV with a header. Cells never contain commas; tuple
/// cells use `;` separators.
pub fn render_csv(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(&headers.join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Joins a label tuple for a single table/CSV cell.
pub fn join_tuple(values: &[u64]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(";")
}
