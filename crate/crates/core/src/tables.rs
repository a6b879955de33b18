//! Evidence tables: typed cells, linearization and the numeric inventory.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::number::{parse_number, scan_numbers, Decimal};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TableError {
    #[error("table grid is empty")]
    EmptyGrid,
    #[error("header_row_count {header} exceeds row count {rows}")]
    HeaderRows { header: usize, rows: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", content = "value", rename_all = "snake_case")]
pub enum CellValue {
    Number(Decimal),
    Percent(Decimal),
    Text(String),
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub raw: String,
    pub value: CellValue,
    pub row: usize,
    pub col: usize,
}

const EMPTY_MARKERS: [&str; 3] = ["\u{2014}", "-", ""];

impl Cell {
    pub fn new(raw: &str, row: usize, col: usize) -> Self {
        Cell { raw: raw.to_string(), value: type_cell(raw), row, col }
    }

    pub fn is_empty(&self) -> bool {
        self.value == CellValue::Empty
    }

    /// Numeric value of number and percentage cells.
    pub fn number(&self) -> Option<&Decimal> {
        match &self.value {
            CellValue::Number(d) | CellValue::Percent(d) => Some(d),
            _ => None,
        }
    }
}

fn type_cell(raw: &str) -> CellValue {
    let trimmed = raw.trim();
    if EMPTY_MARKERS.contains(&trimmed) {
        return CellValue::Empty;
    }
    match parse_number(trimmed) {
        Some(tok) if tok.percent => CellValue::Percent(tok.value),
        Some(tok) if !tok.plus => CellValue::Number(tok.value),
        _ => CellValue::Text(trimmed.to_string()),
    }
}

/// Wire form of a table as found in dataset files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRecord {
    #[serde(default)]
    pub caption: String,
    #[serde(default = "default_header_rows")]
    pub header_row_count: usize,
    pub rows: Vec<Vec<String>>,
}

fn default_header_rows() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub caption: String,
    pub rows: Vec<Vec<Cell>>,
    pub header_row_count: usize,
    pub source_id: String,
}

impl Table {
    pub fn width(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn cells(&self) -> impl Iterator<Item = &Cell> {
        self.rows.iter().flatten()
    }

    pub fn header_rows(&self) -> &[Vec<Cell>] {
        &self.rows[..self.header_row_count]
    }

    pub fn data_rows(&self) -> &[Vec<Cell>] {
        &self.rows[self.header_row_count..]
    }

    /// Raw cell strings; padded cells come back as "".
    pub fn to_record(&self) -> TableRecord {
        TableRecord {
            caption: self.caption.clone(),
            header_row_count: self.header_row_count,
            rows: self.rows.iter().map(|r| r.iter().map(|c| c.raw.clone()).collect()).collect(),
        }
    }

    pub fn from_record(record: &TableRecord, source_id: &str) -> Result<Table, TableError> {
        let mut table = parse_table(&record.rows, &record.caption, record.header_row_count)?;
        table.source_id = source_id.to_string();
        Ok(table)
    }
}

/// Builds a typed table; ragged rows are right-padded with empty cells.
pub fn parse_table<S: AsRef<str>>(
    raw_grid: &[Vec<S>],
    caption: &str,
    header_row_count: usize,
) -> Result<Table, TableError> {
    let width = raw_grid.iter().map(Vec::len).max().unwrap_or(0);
    if raw_grid.is_empty() || width == 0 {
        return Err(TableError::EmptyGrid);
    }
    if header_row_count > raw_grid.len() {
        return Err(TableError::HeaderRows { header: header_row_count, rows: raw_grid.len() });
    }
    let rows = raw_grid
        .iter()
        .enumerate()
        .map(|(r, raw_row)| {
            (0..width)
                .map(|c| Cell::new(raw_row.get(c).map_or("", |s| s.as_ref()), r, c))
                .collect()
        })
        .collect();
    Ok(Table { caption: caption.to_string(), rows, header_row_count, source_id: String::new() })
}

/// Caption line (when non-empty) followed by one `" | "`-joined line per row.
pub fn linearize(table: &Table) -> String {
    let mut lines = Vec::with_capacity(table.rows.len() + 1);
    if !table.caption.is_empty() {
        lines.push(table.caption.clone());
    }
    for row in &table.rows {
        lines.push(row.iter().map(|c| c.raw.as_str()).collect::<Vec<_>>().join(" | "));
    }
    lines.join("\n")
}

/// Tables in dataset order, separated by a blank line.
pub fn linearize_all(tables: &[Table]) -> String {
    tables.iter().map(linearize).collect::<Vec<_>>().join("\n\n")
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumberInventory {
    pub numbers: BTreeSet<Decimal>,
}

impl NumberInventory {
    pub fn contains(&self, value: &Decimal) -> bool {
        self.numbers.contains(value)
    }

    pub fn len(&self) -> usize {
        self.numbers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.numbers.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Decimal> {
        self.numbers.iter()
    }

    fn add_text(&mut self, text: &str) {
        self.numbers.extend(scan_numbers(text).into_iter().map(|t| t.value));
    }
}

/// Every number token found inside any cell, so header cells such as
/// "Pop. (2011)" contribute 2011.
pub fn extract_numbers(tables: &[Table]) -> NumberInventory {
    let mut inv = NumberInventory::default();
    for cell in tables.iter().flat_map(Table::cells) {
        inv.add_text(&cell.raw);
    }
    inv
}

/// Cell numbers plus numbers mentioned in captions: the set a generated
/// extraction may cite.
pub fn permissible_numbers(tables: &[Table]) -> NumberInventory {
    let mut inv = extract_numbers(tables);
    for table in tables {
        inv.add_text(&table.caption);
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cell_typing() {
        let t = parse_table(&[vec!["Cariño", "4,374", "3,945"], vec!["50.85%", "\u{2014}", "-"]], "", 0).unwrap();
        assert_eq!(t.rows[0][0].value, CellValue::Text("Cariño".into()));
        assert_eq!(t.rows[0][1].value, CellValue::Number(Decimal::from_int(4374)));
        assert_eq!(t.rows[1][0].value, CellValue::Percent(Decimal::from_ratio(5085, 100)));
        assert!(t.rows[1][1].is_empty());
        assert!(t.rows[1][2].is_empty());
    }

    #[test]
    fn ragged_rows_are_padded() {
        let t = parse_table(&[vec!["a", "b", "c"], vec!["d"]], "", 1).unwrap();
        assert_eq!(t.rows[1].len(), 3);
        assert!(t.rows[1][2].is_empty());
        assert_eq!(t.rows[1][2].col, 2);
    }

    #[test]
    fn structural_errors() {
        let empty: Vec<Vec<&str>> = vec![];
        assert_eq!(parse_table(&empty, "", 0), Err(TableError::EmptyGrid));
        assert_eq!(parse_table(&[Vec::<&str>::new()], "", 0), Err(TableError::EmptyGrid));
        assert!(matches!(parse_table(&[vec!["a"]], "", 2), Err(TableError::HeaderRows { .. })));
    }

    #[test]
    fn linearization() {
        let t = parse_table(&[vec!["a"]], "X", 0).unwrap();
        assert_eq!(linearize(&t), "X\na");
        let t = parse_table(&[vec!["a", "b"]], "", 0).unwrap();
        assert_eq!(linearize(&t), "a | b");
    }

    #[test]
    fn caption_numbers_are_only_permissible() {
        let t = parse_table(&[vec!["John McCain", "16"]], "2008 primary", 0).unwrap();
        let tables = [t];
        assert!(!extract_numbers(&tables).contains(&Decimal::from_int(2008)));
        assert!(permissible_numbers(&tables).contains(&Decimal::from_int(2008)));
    }
}
