use std::collections::HashMap;

use csv::{ReaderBuilder, StringRecord, Trim, WriterBuilder};

use super::{DerivedRecord, MeasurementRecord};
use crate::polarization::DEFAULT_SOURCE_POWER_MW;
use crate::{Error, Result};

pub const MEASUREMENT_COLUMNS: [&str; 7] = [
    "sample",
    "concentration_percent",
    "rotation_deg",
    "path_length_dm",
    "temperature_c",
    "wavelength_nm",
    "source_power_mw",
];

pub const DERIVED_COLUMNS: [&str; 8] = [
    "sample",
    "concentration_percent",
    "specific_rotation",
    "absorbed_mw",
    "transmitted_mw",
    "gamma_left_rad",
    "gamma_right_rad",
    "cos_theta",
];

/// A schema or invariant problem in a measurement file.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    /// 1-based line in the file, when the problem belongs to a row.
    pub line: Option<u64>,
    /// Stable machine-readable tag, e.g. `negative_power`.
    pub code: &'static str,
    pub message: String,
}

impl Violation {
    fn row(line: u64, code: &'static str, message: String) -> Self {
        Violation {
            line: Some(line),
            code,
            message,
        }
    }

    fn into_error(self) -> Error {
        match (self.code, self.line) {
            ("missing_column", _) => Error::MissingColumn(self.message),
            (_, Some(line)) => Error::row(line, self.message),
            (_, None) => Error::Csv(self.message),
        }
    }
}

struct Columns(HashMap<&'static str, usize>);

impl Columns {
    fn from_header(header: &StringRecord) -> std::result::Result<Self, Vec<Violation>> {
        let mut map = HashMap::new();
        let mut missing = Vec::new();
        for name in MEASUREMENT_COLUMNS {
            match header.iter().position(|h| h == name) {
                Some(i) => {
                    map.insert(name, i);
                }
                None => missing.push(Violation {
                    line: Some(1),
                    code: "missing_column",
                    message: name.to_string(),
                }),
            }
        }
        if missing.is_empty() {
            Ok(Columns(map))
        } else {
            Err(missing)
        }
    }

    fn get<'r>(&self, record: &'r StringRecord, name: &'static str) -> &'r str {
        record.get(self.0[name]).unwrap_or("")
    }
}

fn number(
    record: &StringRecord,
    cols: &Columns,
    line: u64,
    name: &'static str,
) -> std::result::Result<f64, Violation> {
    let raw = cols.get(record, name);
    raw.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| {
            Violation::row(
                line,
                "non_numeric",
                format!("column `{name}`: `{raw}` is not a number"),
            )
        })
}

fn parse_row(
    record: &StringRecord,
    cols: &Columns,
    line: u64,
) -> std::result::Result<MeasurementRecord, Violation> {
    let sample_name = cols.get(record, "sample").to_string();
    if sample_name.is_empty() {
        return Err(Violation::row(
            line,
            "empty_sample",
            "sample name is empty".into(),
        ));
    }
    let concentration_percent = number(record, cols, line, "concentration_percent")?;
    let observed_rotation_deg = number(record, cols, line, "rotation_deg")?;
    let path_length_dm = number(record, cols, line, "path_length_dm")?;
    let temperature_c = number(record, cols, line, "temperature_c")?;
    let wavelength_nm = number(record, cols, line, "wavelength_nm")?;
    let source_power_mw = if cols.get(record, "source_power_mw").is_empty() {
        DEFAULT_SOURCE_POWER_MW
    } else {
        number(record, cols, line, "source_power_mw")?
    };

    if concentration_percent < 0.0 {
        return Err(Violation::row(
            line,
            "negative_concentration",
            format!("concentration_percent must be >= 0, got {concentration_percent}"),
        ));
    }
    if path_length_dm <= 0.0 {
        return Err(Violation::row(
            line,
            "nonpositive_path_length",
            format!("path_length_dm must be > 0, got {path_length_dm}"),
        ));
    }
    if source_power_mw < 0.0 {
        return Err(Violation::row(
            line,
            "negative_power",
            format!("source_power_mw must be >= 0, got {source_power_mw}"),
        ));
    }
    if wavelength_nm <= 0.0 {
        return Err(Violation::row(
            line,
            "nonpositive_wavelength",
            format!("wavelength_nm must be > 0, got {wavelength_nm}"),
        ));
    }

    Ok(MeasurementRecord {
        sample_name,
        concentration_percent,
        observed_rotation_deg,
        path_length_dm,
        temperature_c,
        wavelength_nm,
        source_power_mw,
    })
}

type Row = (u64, std::result::Result<MeasurementRecord, Violation>);

/// Reads every row, keeping per-row outcomes. Header problems abort.
fn read_rows(text: &str) -> std::result::Result<Vec<Row>, Vec<Violation>> {
    let mut reader = ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| {
        vec![Violation {
            line: None,
            code: "malformed_csv",
            message: e.to_string(),
        }]
    })?;
    let cols = Columns::from_header(header)?;
    let width = header.len();

    let mut rows = Vec::new();
    for result in reader.records() {
        let row = match result {
            Err(e) => {
                let line = e.position().map(|p| p.line()).unwrap_or(0);
                (
                    line,
                    Err(Violation::row(line, "malformed_csv", e.to_string())),
                )
            }
            Ok(record) => {
                let line = record.position().map(|p| p.line()).unwrap_or(0);
                if record.len() != width {
                    let msg = format!("expected {width} fields, found {}", record.len());
                    (line, Err(Violation::row(line, "wrong_field_count", msg)))
                } else {
                    (line, parse_row(&record, &cols, line))
                }
            }
        };
        rows.push(row);
    }
    Ok(rows)
}

/// Parses a measurement CSV. `#` lines are comments; an empty
/// `source_power_mw` cell means the default 0.55 mW source.
pub fn parse_measurements(text: &str) -> Result<Vec<MeasurementRecord>> {
    let rows = read_rows(text).map_err(|v| v.into_iter().next().unwrap().into_error())?;
    rows.into_iter()
        .map(|(_, r)| r.map_err(Violation::into_error))
        .collect()
}

/// Every schema and invariant violation in a measurement CSV, including
/// concentrations repeated within one sample. Empty means clean.
pub fn validate_measurements(text: &str) -> Vec<Violation> {
    let rows = match read_rows(text) {
        Ok(rows) => rows,
        Err(header) => return header,
    };
    let mut violations = Vec::new();
    let mut seen: Vec<(String, f64, u64)> = Vec::new();
    for (line, row) in rows {
        match row {
            Err(v) => violations.push(v),
            Ok(m) => {
                if let Some((_, _, first)) = seen
                    .iter()
                    .find(|(s, c, _)| *s == m.sample_name && *c == m.concentration_percent)
                {
                    violations.push(Violation::row(
                        line,
                        "duplicate_concentration",
                        format!(
                            "sample `{}` repeats concentration {}% (first on line {first})",
                            m.sample_name, m.concentration_percent
                        ),
                    ));
                } else {
                    seen.push((m.sample_name, m.concentration_percent, line));
                }
            }
        }
    }
    violations
}

fn to_text(buf: Vec<u8>) -> String {
    String::from_utf8(buf).expect("csv writer emits UTF-8 for UTF-8 input")
}

fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

pub fn write_measurements(records: &[MeasurementRecord]) -> String {
    let mut w = WriterBuilder::new().from_writer(Vec::new());
    w.write_record(MEASUREMENT_COLUMNS)
        .expect("in-memory write");
    for m in records {
        w.write_record([
            m.sample_name.clone(),
            fmt_f64(m.concentration_percent),
            fmt_f64(m.observed_rotation_deg),
            fmt_f64(m.path_length_dm),
            fmt_f64(m.temperature_c),
            fmt_f64(m.wavelength_nm),
            fmt_f64(m.source_power_mw),
        ])
        .expect("in-memory write");
    }
    to_text(w.into_inner().expect("in-memory flush"))
}

/// Derived table at full precision. An undefined specific rotation (zero
/// concentration) is written as an empty cell.
pub fn write_derived(records: &[DerivedRecord]) -> String {
    let mut w = WriterBuilder::new().from_writer(Vec::new());
    w.write_record(DERIVED_COLUMNS).expect("in-memory write");
    for d in records {
        w.write_record([
            d.sample_name.clone(),
            fmt_f64(d.concentration_percent),
            d.specific_rotation.map(fmt_f64).unwrap_or_default(),
            fmt_f64(d.absorbed_mw),
            fmt_f64(d.transmitted_mw),
            fmt_f64(d.gamma_left),
            fmt_f64(d.gamma_right),
            fmt_f64(d.cos_theta),
        ])
        .expect("in-memory write");
    }
    to_text(w.into_inner().expect("in-memory flush"))
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str =
        "sample,concentration_percent,rotation_deg,path_length_dm,temperature_c,wavelength_nm,source_power_mw\n";

    #[test]
    fn header_only_is_empty() {
        assert!(parse_measurements(HEADER).unwrap().is_empty());
    }

    #[test]
    fn parses_documented_row() {
        let text = format!("{HEADER}L-Lysine,2.0,1.5,1.0,18,650,0.55\n");
        let recs = parse_measurements(&text).unwrap();
        assert_eq!(recs.len(), 1);
        let r = &recs[0];
        assert_eq!(r.sample_name, "L-Lysine");
        assert!((r.concentration_g_per_ml() - 0.02).abs() < 1e-15);
        assert_eq!(r.observed_rotation_deg, 1.5);
        assert_eq!(r.temperature_c, 18.0);
        assert_eq!(r.source_power_mw, 0.55);
    }

    #[test]
    fn comments_blank_power_and_column_order() {
        let text = "# campaign 1\n\
            wavelength_nm,sample,rotation_deg,concentration_percent,path_length_dm,temperature_c,source_power_mw\n\
            # a comment row\n\
            589, L-Valine ,0.4,1.0,2.0,18,\n";
        let recs = parse_measurements(text).unwrap();
        assert_eq!(recs[0].sample_name, "L-Valine");
        assert_eq!(recs[0].path_length_dm, 2.0);
        assert_eq!(recs[0].source_power_mw, DEFAULT_SOURCE_POWER_MW);
    }

    #[test]
    fn negative_concentration_names_the_row() {
        let text = format!("{HEADER}A,1.0,0.1,1,18,589,0.55\nA,-1,0.1,1,18,589,0.55\n");
        match parse_measurements(&text) {
            Err(Error::Row { line, message }) => {
                assert_eq!(line, 3);
                assert!(message.contains("concentration"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn non_numeric_and_missing_column() {
        let text = format!("{HEADER}A,abc,0.1,1,18,589,0.55\n");
        assert!(matches!(
            parse_measurements(&text),
            Err(Error::Row { line: 2, .. })
        ));

        let text = "sample,concentration_percent,rotation_deg\nA,1,2\n";
        assert_eq!(
            parse_measurements(text),
            Err(Error::MissingColumn("path_length_dm".into()))
        );
    }

    #[test]
    fn validate_collects_everything() {
        let text = format!(
            "{HEADER}A,1.0,0.1,1,18,589,0.55\nA,1.0,0.2,1,18,589,0.55\nB,0.5,0.1,1,18,589,-0.2\nC,x,0.1,1,18,589,0.5\n"
        );
        let v = validate_measurements(&text);
        let codes: Vec<_> = v.iter().map(|v| (v.line, v.code)).collect();
        assert_eq!(
            codes,
            vec![
                (Some(3), "duplicate_concentration"),
                (Some(4), "negative_power"),
                (Some(5), "non_numeric"),
            ]
        );
        assert!(validate_measurements(&format!("{HEADER}A,1.0,0.1,1,18,589,0.55\n")).is_empty());
    }

    #[test]
    fn measurements_round_trip() {
        let recs = vec![MeasurementRecord {
            sample_name: "L-Arginine, salt".into(),
            concentration_percent: 0.25,
            observed_rotation_deg: -0.123456789012345,
            path_length_dm: 1.0,
            temperature_c: 18.0,
            wavelength_nm: 589.3,
            source_power_mw: 0.55,
        }];
        let text = write_measurements(&recs);
        assert_eq!(parse_measurements(&text).unwrap(), recs);
    }
}
