//! CSV and JSON emission.
//!
//! Every output is first turned into a [`Table`]: a header plus rows of
//! [`Cell`]s. CSV writes the header and rows verbatim; JSON writes an array
//! of objects keyed by the header. Reals carry 10 significant digits.

use std::io::Write;

use serde_json::{Map, Number, Value};

use crate::experiments::{LogMeanRow, RemarkVRow, ReportRow, ScanKind, ScanReport, ShellCensus, Exact};
use crate::sweep::ProfileTable;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(u64),
    Real(f64),
    Text(String),
    Null,
}

/// `v` rounded to 10 significant digits.
pub fn round_sig10(v: f64) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v;
    }
    format!("{v:.9e}").parse().expect("formatted float parses")
}

impl Cell {
    fn to_csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Real(v) => round_sig10(*v).to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Null => String::new(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::Number((*v).into()),
            Cell::Real(v) => Number::from_f64(round_sig10(*v)).map_or(Value::Null, Value::Number),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Null => Value::Null,
        }
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Null, Cell::Real)
    }
}

impl From<Exact> for Cell {
    fn from(v: Exact) -> Self {
        match v {
            Exact::Int(i) => Cell::Int(i),
            Exact::Real(r) => Cell::Real(r),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> Result<()> {
        match format {
            Format::Csv => {
                let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
                w.write_record(&self.header)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::to_csv))?;
                }
                w.flush()?;
            }
            Format::Json => {
                let items: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> =
                            self.header.iter().cloned().zip(row.iter().map(Cell::to_json)).collect();
                        Value::Object(obj)
                    })
                    .collect();
                serde_json::to_writer_pretty(&mut *out, &items)?;
                writeln!(out)?;
            }
        }
        Ok(())
    }
}

/// Header `x,exact,predicted,ratio`.
pub fn report_rows(rows: &[ReportRow]) -> Table {
    let mut t = Table::new(&["x", "exact", "predicted", "ratio"]);
    for r in rows {
        t.push(vec![Cell::Int(r.x), r.exact.into(), r.predicted.into(), r.ratio.into()]);
    }
    t
}

/// Key/value table: `x`, `k`, `j`, `checked`, `violations` (and
/// `ties_found` for a census), then one `violation` row per offender.
pub fn scan_report(r: &ScanReport) -> Table {
    let mut t = Table::new(&["field", "value"]);
    let kv = |k: &str, v: Cell| vec![Cell::Text(k.to_string()), v];
    t.push(kv("x", Cell::Int(r.x)));
    t.push(kv("k", Cell::Int(r.k.into())));
    if let Some(j) = r.j {
        t.push(kv("j", Cell::Int(j.into())));
    }
    t.push(kv("checked", Cell::Int(r.checked)));
    t.push(kv("violations", Cell::Int(r.violations.len() as u64)));
    if r.kind == ScanKind::Census {
        t.push(kv("ties_found", Cell::Int(r.violations.len() as u64)));
    }
    for v in &r.violations {
        t.push(kv("violation", Cell::Text(format!("n={} {}", v.n, v.detail))));
    }
    t
}

/// Header `ell,count`.
pub fn shell_counts(c: &ShellCensus) -> Table {
    let mut t = Table::new(&["ell", "count"]);
    for (&ell, &count) in &c.counts {
        t.push(vec![Cell::Int(ell.into()), Cell::Int(count)]);
    }
    t
}

/// Header `x,sum_log,c_hat`.
pub fn log_mean_rows(rows: &[LogMeanRow]) -> Table {
    let mut t = Table::new(&["x", "sum_log", "c_hat"]);
    for r in rows {
        t.push(vec![Cell::Int(r.x), Cell::Real(r.sum_log), Cell::Real(r.c_hat)]);
    }
    t
}

/// Header `x,reduced_sum,full_sum,ratio`.
pub fn remark_v_rows(rows: &[RemarkVRow]) -> Table {
    let mut t = Table::new(&["x", "reduced_sum", "full_sum", "ratio"]);
    for r in rows {
        t.push(vec![Cell::Int(r.x), Cell::Int(r.reduced_sum), Cell::Int(r.full_sum), Cell::Real(r.ratio)]);
    }
    t
}

/// Header `n,rho_1,...,rho_k,surface_num,ties`.
pub fn profiles(table: &ProfileTable) -> Table {
    let k = table.k();
    let mut header = vec!["n".to_string()];
    header.extend((1..=k).map(|j| format!("rho_{j}")));
    header.push("surface_num".into());
    header.push("ties".into());
    let mut t = Table { header, rows: Vec::with_capacity(table.x() as usize) };
    for n in 1..=table.x() {
        let mut row = Vec::with_capacity(k + 3);
        row.push(Cell::Int(n));
        row.extend(table.rho(n).iter().map(|&d| Cell::Int(d.into())));
        row.push(Cell::Int(table.surface_num(n)));
        row.push(Cell::Int(table.ties(n).into()));
        t.rows.push(row);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::Violation;

    fn csv_of(t: &Table) -> String {
        let mut buf = Vec::new();
        t.write(Format::Csv, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    fn json_of(t: &Table) -> String {
        let mut buf = Vec::new();
        t.write(Format::Json, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn significant_digits() {
        assert_eq!(round_sig10(1_085.736_204_758_129_6), 1085.736205);
        assert_eq!(round_sig10(0.976_303_847_112_7), 0.9763038471);
        assert_eq!(round_sig10(59_532_149_027.238_29), 59_532_149_030.0);
        assert_eq!(round_sig10(0.0), 0.0);
    }

    #[test]
    fn report_row_csv() {
        let row = ReportRow::new(10, Exact::Int(35), Some(35.718_289_3));
        let s = csv_of(&report_rows(&[row]));
        assert_eq!(s, "x,exact,predicted,ratio\n10,35,35.7182893,0.9798901539\n");
    }

    #[test]
    fn empty_outputs() {
        assert_eq!(csv_of(&report_rows(&[])), "x,exact,predicted,ratio\n");
        assert_eq!(json_of(&report_rows(&[])).trim(), "[]");
    }

    #[test]
    fn scan_report_csv() {
        let r = ScanReport {
            kind: ScanKind::Structure,
            x: 100,
            k: 2,
            j: Some(2),
            checked: 42,
            violations: vec![],
        };
        let s = csv_of(&scan_report(&r));
        assert!(s.contains("\nchecked,42\nviolations,0\n"), "{s}");
        let census = ScanReport {
            kind: ScanKind::Census,
            j: None,
            violations: vec![Violation { n: 12, detail: "ties=2 optimal=(1,2,6) (2,2,3)".into() }],
            ..r
        };
        let s = csv_of(&scan_report(&census));
        assert!(s.contains("ties_found,1\n"));
        assert!(s.contains("violation,\"n=12 ties=2 optimal=(1,2,6) (2,2,3)\"\n") || s.contains("violation,n=12 ties=2"));
    }

    #[test]
    fn json_mirrors_csv_fields() {
        let rows = vec![
            ReportRow::new(100, Exact::Int(1060), Some(1_085.736_204_758_129_6)),
            ReportRow::new(3, Exact::Real(0.0), None),
        ];
        let s = json_of(&report_rows(&rows));
        let back: Vec<ReportRow> = serde_json::from_str(&s).unwrap();
        assert_eq!(back.len(), 2);
        assert_eq!(back[0].x, 100);
        assert_eq!(back[0].exact, Exact::Int(1060));
        assert_eq!(back[0].predicted, Some(1085.736205));
        assert_eq!(back[1].predicted, None);
    }
}
