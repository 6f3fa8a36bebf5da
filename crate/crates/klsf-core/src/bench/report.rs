//! Raw result CSV and the per-group markdown table.

use std::io::{Read, Write};

use thiserror::Error;

use crate::bench::{GroupSummary, RunRow, RunStatus};

pub const CSV_HEADER: [&str; 11] = [
    "instance_path",
    "n",
    "l",
    "k",
    "algorithm",
    "seed",
    "objective",
    "labels_used",
    "time_to_best_ms",
    "total_time_ms",
    "status",
];

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("row {row}: {message}")]
    Field { row: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Floats are written in shortest round-trip form, so reading the file
/// back reproduces the exact values.
pub fn write_rows_csv<W: Write>(rows: &[RunRow], sink: W) -> Result<(), ReportError> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.write_record([
            row.instance_path.clone(),
            row.n.to_string(),
            row.labels.to_string(),
            row.k.to_string(),
            row.algorithm.clone(),
            row.seed.to_string(),
            row.objective.map(|v| v.to_string()).unwrap_or_default(),
            row.labels_used.map(|v| v.to_string()).unwrap_or_default(),
            row.time_to_best_ms
                .map(|v| v.to_string())
                .unwrap_or_default(),
            row.total_time_ms.to_string(),
            row.status.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_rows_csv<R: Read>(source: R) -> Result<Vec<RunRow>, ReportError> {
    let mut reader = csv::Reader::from_reader(source);
    let mut rows = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let record = record?;
        let field = |i: usize| -> Result<&str, ReportError> {
            record.get(i).ok_or_else(|| ReportError::Field {
                row: idx + 1,
                message: format!("missing column {}", CSV_HEADER[i]),
            })
        };
        let parse_usize = |i: usize| -> Result<usize, ReportError> {
            field(i)?.parse().map_err(|_| ReportError::Field {
                row: idx + 1,
                message: format!("column {} is not an integer", CSV_HEADER[i]),
            })
        };
        let parse_opt_usize = |i: usize| -> Result<Option<usize>, ReportError> {
            let text = field(i)?;
            if text.is_empty() {
                Ok(None)
            } else {
                text.parse().map(Some).map_err(|_| ReportError::Field {
                    row: idx + 1,
                    message: format!("column {} is not an integer", CSV_HEADER[i]),
                })
            }
        };
        let parse_opt_f64 = |i: usize| -> Result<Option<f64>, ReportError> {
            let text = field(i)?;
            if text.is_empty() {
                Ok(None)
            } else {
                text.parse().map(Some).map_err(|_| ReportError::Field {
                    row: idx + 1,
                    message: format!("column {} is not a number", CSV_HEADER[i]),
                })
            }
        };
        let status_text = field(10)?;
        let status = if status_text == "ok" {
            RunStatus::Ok
        } else if status_text == "nf" {
            RunStatus::NotFound
        } else if let Some(msg) = status_text.strip_prefix("error: ") {
            RunStatus::Error(msg.to_string())
        } else {
            return Err(ReportError::Field {
                row: idx + 1,
                message: format!("unknown status {status_text:?}"),
            });
        };
        rows.push(RunRow {
            instance_path: field(0)?.to_string(),
            n: parse_usize(1)?,
            labels: parse_usize(2)?,
            k: parse_usize(3)?,
            algorithm: field(4)?.to_string(),
            seed: field(5)?.parse().map_err(|_| ReportError::Field {
                row: idx + 1,
                message: "column seed is not an integer".into(),
            })?,
            objective: parse_opt_usize(6)?,
            labels_used: parse_opt_usize(7)?,
            time_to_best_ms: parse_opt_f64(8)?,
            total_time_ms: parse_opt_f64(9)?.ok_or_else(|| ReportError::Field {
                row: idx + 1,
                message: "column total_time_ms is empty".into(),
            })?,
            status,
        });
    }
    Ok(rows)
}

/// Comparison table: one row per group ascending in (n, l), an
/// objective/time column pair per algorithm, NF where the exhaustive
/// search timed out and err where runs crashed.
pub fn write_summary_markdown<W: Write>(
    summaries: &[GroupSummary],
    table_labels: &[String],
    mut sink: W,
) -> std::io::Result<()> {
    write!(sink, "| n | l | k |")?;
    for label in table_labels {
        write!(sink, " {label} Obj | {label} Time (ms) |")?;
    }
    writeln!(sink)?;
    write!(sink, "|---|---|---|")?;
    for _ in table_labels {
        write!(sink, "---|---|")?;
    }
    writeln!(sink)?;
    for group in summaries {
        let k = if group.k_min == group.k_max {
            group.k_min.to_string()
        } else {
            format!("{}-{}", group.k_min, group.k_max)
        };
        write!(sink, "| {} | {} | {k} |", group.n, group.labels)?;
        for algo in &group.algorithms {
            match (&algo.mean_objective, &algo.mean_time_to_best_ms) {
                (Some(obj), Some(ttb)) => write!(sink, " {obj:.1} | {ttb:.1} |")?,
                _ if algo.error_runs > 0 => write!(sink, " err | err |")?,
                _ => write!(sink, " NF | NF |")?,
            }
        }
        writeln!(sink)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::summarize;

    fn sample_rows() -> Vec<RunRow> {
        vec![
            RunRow {
                instance_path: "a.klsf".into(),
                n: 10,
                labels: 5,
                k: 2,
                algorithm: "bvns".into(),
                seed: 1,
                objective: Some(2),
                labels_used: Some(2),
                time_to_best_ms: Some(0.1234567890123),
                total_time_ms: 5.5,
                status: RunStatus::Ok,
            },
            RunRow {
                instance_path: "b.klsf".into(),
                n: 10,
                labels: 5,
                k: 2,
                algorithm: "bvns".into(),
                seed: 2,
                objective: Some(3),
                labels_used: Some(1),
                time_to_best_ms: Some(1.5),
                total_time_ms: 5.0,
                status: RunStatus::Ok,
            },
            RunRow {
                instance_path: "a.klsf".into(),
                n: 10,
                labels: 5,
                k: 2,
                algorithm: "exact".into(),
                seed: 0,
                objective: None,
                labels_used: None,
                time_to_best_ms: None,
                total_time_ms: 1000.0,
                status: RunStatus::NotFound,
            },
            RunRow {
                instance_path: "b.klsf".into(),
                n: 10,
                labels: 5,
                k: 2,
                algorithm: "exact".into(),
                seed: 0,
                objective: None,
                labels_used: None,
                time_to_best_ms: None,
                total_time_ms: 2.0,
                status: RunStatus::Error("boom, with a comma".into()),
            },
        ]
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let rows = sample_rows();
        let mut buf = Vec::new();
        write_rows_csv(&rows, &mut buf).unwrap();
        let back = read_rows_csv(buf.as_slice()).unwrap();
        assert_eq!(back, rows);
    }

    #[test]
    fn summaries_recomputed_from_csv_match() {
        let rows = sample_rows();
        let labels = vec!["bvns".to_string(), "exact".to_string()];
        let direct = summarize(&rows, &labels);
        let mut buf = Vec::new();
        write_rows_csv(&rows, &mut buf).unwrap();
        let reread = summarize(&read_rows_csv(buf.as_slice()).unwrap(), &labels);
        assert_eq!(direct, reread);
        assert_eq!(
            direct[0].algorithm("bvns").unwrap().mean_objective,
            Some(2.5)
        );
        assert_eq!(direct[0].algorithm("exact").unwrap().mean_objective, None);
        assert_eq!(direct[0].algorithm("exact").unwrap().nf_runs, 1);
        assert_eq!(direct[0].algorithm("exact").unwrap().error_runs, 1);
    }

    #[test]
    fn markdown_renders_nf_and_sorts_groups() {
        let mut rows = sample_rows();
        rows.push(RunRow {
            instance_path: "c.klsf".into(),
            n: 5,
            labels: 3,
            k: 1,
            algorithm: "bvns".into(),
            seed: 3,
            objective: Some(1),
            labels_used: Some(1),
            time_to_best_ms: Some(0.5),
            total_time_ms: 1.0,
            status: RunStatus::Ok,
        });
        let labels = vec!["bvns".to_string(), "exact".to_string()];
        let summaries = summarize(&rows, &labels);
        assert_eq!((summaries[0].n, summaries[0].labels), (5, 3));
        assert_eq!((summaries[1].n, summaries[1].labels), (10, 5));
        let mut buf = Vec::new();
        write_summary_markdown(
            &summaries,
            &["BVNS".to_string(), "EXACT".to_string()],
            &mut buf,
        )
        .unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("| 5 | 3 | 1 |"));
        assert!(text.contains("err"));
        assert!(text.lines().count() >= 4);
    }
}
