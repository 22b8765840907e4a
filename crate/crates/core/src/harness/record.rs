use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fitness::FitnessValue;

/// Outcome of one run, one CSV row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub run_id: u32,
    pub seed: u64,
    pub n: usize,
    pub encoding: String,
    pub algo: String,
    pub ls: String,
    pub pop_size: usize,
    pub budget: u64,
    pub evals_used: u64,
    /// Six-decimal text, truncated so the integer part is the nonlinearity.
    pub best_fitness: String,
    pub best_nl: u64,
    pub wall_time_s: f64,
    /// Truth table in hex, or a tree in prefix notation.
    pub best_solution: String,
}

/// `nl.dddddd` with the fraction truncated, never rounded up.
pub fn format_fitness(f: &FitnessValue) -> String {
    let (nl, rem) = (f.numer() / f.denom(), f.numer() % f.denom());
    let micro = (rem as u128 * 1_000_000) / f.denom() as u128;
    format!("{nl}.{micro:06}")
}

impl RunRecord {
    pub fn fitness(&self) -> f64 {
        self.best_fitness.parse().unwrap_or(f64::NAN)
    }
}

pub const CSV_HEADER: [&str; 13] = [
    "run_id",
    "seed",
    "n",
    "encoding",
    "algo",
    "ls",
    "pop_size",
    "budget",
    "evals_used",
    "best_fitness",
    "best_nl",
    "wall_time_s",
    "best_solution",
];

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn csv_err(path: &Path, source: csv::Error) -> Error {
    Error::Csv {
        path: path.to_path_buf(),
        source,
    }
}

/// Appends records to a CSV file, writing the header only to an empty file
/// and flushing after every row, so an interrupted campaign leaves a
/// readable prefix.
pub struct RecordWriter {
    path: PathBuf,
    inner: csv::Writer<File>,
}

impl RecordWriter {
    pub fn append(path: &Path) -> Result<Self> {
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(|e| io_err(path, e))?;
        let empty = file.metadata().map_err(|e| io_err(path, e))?.len() == 0;
        let mut inner = csv::WriterBuilder::new()
            .has_headers(false)
            .from_writer(file);
        if empty {
            inner
                .write_record(CSV_HEADER)
                .map_err(|e| csv_err(path, e))?;
            inner.flush().map_err(|e| io_err(path, e))?;
        }
        Ok(RecordWriter {
            path: path.to_path_buf(),
            inner,
        })
    }

    pub fn write(&mut self, record: &RunRecord) -> Result<()> {
        self.inner
            .serialize(record)
            .map_err(|e| csv_err(&self.path, e))?;
        self.inner.flush().map_err(|e| io_err(&self.path, e))
    }
}

/// Writes a header row and `records` to any sink.
pub fn write_records<W: Write>(
    records: &[RunRecord],
    sink: W,
) -> std::result::Result<(), csv::Error> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(sink);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `records` to a fresh file with a header row.
pub fn emit_csv(records: &[RunRecord], path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    write_records(records, file).map_err(|e| csv_err(path, e))
}

/// Parses every well-formed row; malformed rows, such as a final line cut
/// short by an interrupted write, are skipped.
pub fn read_records(path: &Path) -> Result<Vec<RunRecord>> {
    let mut r = csv::ReaderBuilder::new()
        .flexible(true)
        .from_path(path)
        .map_err(|e| csv_err(path, e))?;
    Ok(r.deserialize::<RunRecord>()
        .filter_map(|row| row.ok())
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SummaryStats {
    pub count: usize,
    pub max: f64,
    pub avg: f64,
    /// Sample standard deviation; 0 for a single value.
    pub std: f64,
}

pub fn summarize_values(values: &[f64]) -> Result<SummaryStats> {
    if values.is_empty() {
        return Err(Error::EmptyRecords);
    }
    let count = values.len();
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let avg = values.iter().sum::<f64>() / count as f64;
    let std = if count < 2 {
        0.0
    } else {
        (values.iter().map(|v| (v - avg).powi(2)).sum::<f64>() / (count - 1) as f64).sqrt()
    };
    Ok(SummaryStats {
        count,
        max,
        avg,
        std,
    })
}

/// Statistics of the best fitness over a set of runs.
pub fn summarize(records: &[RunRecord]) -> Result<SummaryStats> {
    summarize_values(&records.iter().map(RunRecord::fitness).collect::<Vec<_>>())
}

/// One `label,runs,max,avg,std` row per group.
pub fn emit_summary_csv(rows: &[(String, SummaryStats)], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    w.write_record(["label", "runs", "max", "avg", "std"])
        .map_err(|e| csv_err(path, e))?;
    for (label, s) in rows {
        w.write_record([
            label.clone(),
            s.count.to_string(),
            format!("{:.6}", s.max),
            format!("{:.6}", s.avg),
            format!("{:.6}", s.std),
        ])
        .map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

/// Long-format `label,run_id,best_fitness` rows for box plots.
pub fn emit_plot_data(groups: &[(String, Vec<RunRecord>)], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    w.write_record(["label", "run_id", "best_fitness"])
        .map_err(|e| csv_err(path, e))?;
    for (label, records) in groups {
        for r in records {
            w.write_record([label.as_str(), &r.run_id.to_string(), &r.best_fitness])
                .map_err(|e| csv_err(path, e))?;
        }
    }
    let mut inner = w.into_inner().map_err(|e| io_err(path, e.into_error()))?;
    inner.flush().map_err(|e| io_err(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn record(run_id: u32, fitness: &str) -> RunRecord {
        RunRecord {
            run_id,
            seed: 7,
            n: 9,
            encoding: "gp".into(),
            algo: "sst".into(),
            ls: "none".into(),
            pop_size: 100,
            budget: 1000,
            evals_used: 1000,
            best_fitness: fitness.into(),
            best_nl: fitness.split('.').next().unwrap().parse().unwrap(),
            wall_time_s: 0.25,
            best_solution: "XOR(x1,AND(x2,x3))".into(),
        }
    }

    #[test]
    fn fitness_text_truncates() {
        let f = FitnessValue::from_spectrum_stats(9, 240, 184);
        assert_eq!(format_fitness(&f), "240.640625");
        let near = FitnessValue::from_spectrum_stats(22, 5, 1);
        assert_eq!(format_fitness(&near), "5.999999");
        assert_eq!(
            format_fitness(&FitnessValue::from_spectrum_stats(3, 0, 1)),
            "0.875000"
        );
    }

    #[test]
    fn summary_examples() {
        let s = summarize_values(&[1.0, 3.0]).unwrap();
        assert_eq!((s.max, s.avg), (3.0, 2.0));
        assert!((s.std - std::f64::consts::SQRT_2).abs() < 1e-6);
        let s = summarize_values(&[4.5]).unwrap();
        assert_eq!((s.max, s.avg, s.std), (4.5, 4.5, 0.0));
        assert_eq!(summarize_values(&[2.0; 5]).unwrap().std, 0.0);
        assert!(matches!(summarize(&[]), Err(Error::EmptyRecords)));
    }

    #[test]
    fn csv_round_trip_and_truncated_tail() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.csv");
        let records = vec![record(0, "240.640625"), record(1, "238.500000")];
        emit_csv(&records, &path).unwrap();
        assert_eq!(read_records(&path).unwrap(), records);

        let path = dir.path().join("append.csv");
        for r in &records {
            let mut w = RecordWriter::append(&path).unwrap();
            w.write(r).unwrap();
        }
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().next().unwrap(), CSV_HEADER.join(","));
        assert_eq!(text.lines().count(), 3);
        assert_eq!(read_records(&path).unwrap(), records);
        std::fs::write(&path, format!("{text}2,99,9,gp,s")).unwrap();
        assert_eq!(read_records(&path).unwrap(), records);
    }

    #[test]
    fn empty_outputs_are_header_only() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("plot.csv");
        emit_plot_data(&[], &p).unwrap();
        assert_eq!(
            std::fs::read_to_string(&p).unwrap(),
            "label,run_id,best_fitness\n"
        );
        let p = dir.path().join("runs.csv");
        emit_csv(&[], &p).unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap().lines().count(), 1);
        let p = dir.path().join("sum.csv");
        emit_summary_csv(&[], &p).unwrap();
        assert_eq!(
            std::fs::read_to_string(&p).unwrap(),
            "label,runs,max,avg,std\n"
        );
    }

    #[test]
    fn unwritable_path_reports_it() {
        let err = emit_csv(&[], Path::new("/nonexistent-dir/x.csv")).unwrap_err();
        assert!(err.to_string().contains("/nonexistent-dir/x.csv"), "{err}");
    }
}
