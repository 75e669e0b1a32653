//! Tabular fit reports shared by the CLI's JSON and CSV outputs.
//!
//! Every numeric cell is rounded to six significant digits before either
//! serializer runs, so the JSON and CSV forms of one run carry exactly the
//! same values (CSV cells deserialize to the identical floats).

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::dist::Family;
use crate::error::{Error, Result};
use crate::gof::GofReport;
use crate::measurement::Scenario;
use crate::numfmt::round_sig;

/// Which normalized quantity a row describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantity {
    Power,
    Delay,
}

impl std::fmt::Display for Quantity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Quantity::Power => "power",
            Quantity::Delay => "delay",
        })
    }
}

/// One fit outcome row. Parameter columns are flattened (`shape1`,
/// `shape2`) so the CSV header is stable across families; absent values
/// serialize as empty cells / JSON null.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitRow {
    pub location: String,
    pub scenario: Scenario,
    pub quantity: Quantity,
    pub family: Family,
    pub p_value: Option<f64>,
    pub qq_r: Option<f64>,
    pub loc: Option<f64>,
    pub scale: Option<f64>,
    pub shape1: Option<f64>,
    pub shape2: Option<f64>,
    pub ks_d: Option<f64>,
    pub n: usize,
    pub status: String,
}

/// Significant digits carried by report cells.
const REPORT_DIGITS: u32 = 6;

impl FitRow {
    /// A successful fit, rounded for emission.
    pub fn from_report(
        location: &str,
        scenario: Scenario,
        quantity: Quantity,
        report: &GofReport,
    ) -> Self {
        let r6 = |x: f64| Some(round_sig(x, REPORT_DIGITS));
        let shapes = report.spec.shapes();
        FitRow {
            location: location.to_string(),
            scenario,
            quantity,
            family: report.spec.family(),
            p_value: r6(report.p_value),
            qq_r: r6(report.qq_r),
            loc: r6(report.spec.loc()),
            scale: r6(report.spec.scale()),
            shape1: shapes.first().copied().and_then(r6),
            shape2: shapes.get(1).copied().and_then(r6),
            ks_d: r6(report.ks_d),
            n: report.n,
            status: "ok".to_string(),
        }
    }

    /// A failed fit: parameter and score columns stay empty and the status
    /// carries the error text.
    pub fn failed(
        location: &str,
        scenario: Scenario,
        quantity: Quantity,
        family: Family,
        n: usize,
        error: &Error,
    ) -> Self {
        FitRow {
            location: location.to_string(),
            scenario,
            quantity,
            family,
            p_value: None,
            qq_r: None,
            loc: None,
            scale: None,
            shape1: None,
            shape2: None,
            ks_d: None,
            n,
            status: format!("error: {error}"),
        }
    }

    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }
}

/// Writes rows as CSV (header + one line per row).
pub fn write_csv<W: Write>(rows: &[FitRow], writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    for row in rows {
        wtr.serialize(row)?;
    }
    // serde-driven CSV writing emits headers with the first row; make the
    // empty table still carry its header.
    if rows.is_empty() {
        wtr.write_record([
            "location", "scenario", "quantity", "family", "p_value", "qq_r", "loc", "scale",
            "shape1", "shape2", "ks_d", "n", "status",
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Writes rows as pretty-printed JSON.
pub fn write_json<W: Write>(rows: &[FitRow], writer: W) -> Result<()> {
    serde_json::to_writer_pretty(writer, rows)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::DistributionSpec;

    fn sample_row() -> FitRow {
        let spec =
            DistributionSpec::new(Family::LogNormal, -35.50000037, 17.4, vec![0.37]).unwrap();
        let report = GofReport {
            spec,
            ks_d: 0.03123456789,
            p_value: 0.6543219876,
            qq_r: 0.9912345678,
            n: 304,
        };
        FitRow::from_report("Sello", Scenario::Los, Quantity::Power, &report)
    }

    #[test]
    fn rows_round_to_six_significant_digits() {
        let row = sample_row();
        assert_eq!(row.p_value, Some(0.654322));
        assert_eq!(row.qq_r, Some(0.991235));
        assert_eq!(row.loc, Some(-35.5));
        assert_eq!(row.ks_d, Some(0.0312346));
        assert_eq!(row.shape1, Some(0.37));
        assert_eq!(row.shape2, None);
        assert!(row.is_ok());
    }

    #[test]
    fn csv_layout_matches_the_mandated_column_order() {
        let mut buf = Vec::new();
        write_csv(&[sample_row()], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next(),
            Some(
                "location,scenario,quantity,family,p_value,qq_r,loc,scale,shape1,shape2,ks_d,n,status"
            )
        );
        let data = lines.next().unwrap();
        assert!(data.starts_with("Sello,LOS,power,LogNormal,"), "{data}");
        assert!(data.ends_with(",304,ok"), "{data}");

        // Empty report still has a header.
        let mut empty = Vec::new();
        write_csv(&[], &mut empty).unwrap();
        assert!(String::from_utf8(empty).unwrap().starts_with("location,"));
    }

    #[test]
    fn json_and_csv_values_agree() {
        let rows = vec![sample_row()];
        let mut json_buf = Vec::new();
        write_json(&rows, &mut json_buf).unwrap();
        let parsed: Vec<FitRow> = serde_json::from_slice(&json_buf).unwrap();
        assert_eq!(parsed, rows);

        let mut csv_buf = Vec::new();
        write_csv(&rows, &mut csv_buf).unwrap();
        let mut rdr = csv::Reader::from_reader(csv_buf.as_slice());
        let from_csv: Vec<FitRow> = rdr.deserialize().map(|r| r.unwrap()).collect();
        assert_eq!(from_csv, rows, "CSV must carry the identical values");
    }

    #[test]
    fn failed_rows_carry_the_error_text() {
        let err = Error::DegenerateData("zero variance".into());
        let row = FitRow::failed("Sello", Scenario::Nlos, Quantity::Delay, Family::Weibull, 7, &err);
        assert!(!row.is_ok());
        assert!(row.status.contains("zero variance"));
        assert_eq!(row.p_value, None);

        let mut buf = Vec::new();
        write_csv(&[row], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("Weibull,,,,,,,,7,error: degenerate data: zero variance"));
    }
}
