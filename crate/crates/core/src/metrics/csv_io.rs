use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use super::{MetricsError, TrialRecord};

pub const CSV_HEADER: [&str; 11] = [
    "trial_idx",
    "seed",
    "device",
    "strategy",
    "technique",
    "gaze_error_cm",
    "thumb_distance_cm",
    "completion_time_s",
    "success",
    "gesture",
    "timestamp_s",
];

fn fixed(v: f64) -> String {
    let s = format!("{v:.6}");
    // avoid "-0.000000" for tiny negatives from rounding
    if s.starts_with('-') && s[1..].bytes().all(|b| b == b'0' || b == b'.') {
        s[1..].to_string()
    } else {
        s
    }
}

pub fn write_csv<W: Write>(w: W, records: &[TrialRecord]) -> Result<(), MetricsError> {
    let mut out = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
    out.write_record(CSV_HEADER)?;
    for r in records {
        out.write_record([
            r.trial_idx.to_string(),
            r.seed.to_string(),
            r.device.clone(),
            r.strategy.clone(),
            r.technique.clone(),
            fixed(r.gaze_error_cm),
            fixed(r.thumb_distance_cm),
            fixed(r.completion_time_s),
            r.success.to_string(),
            r.gesture.clone(),
            fixed(r.timestamp_s),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn export_csv(records: &[TrialRecord], path: &Path) -> Result<(), MetricsError> {
    let file = BufWriter::new(File::create(path)?);
    write_csv(file, records)
}

fn field<T: std::str::FromStr>(row: &csv::StringRecord, i: usize, n: usize) -> Result<T, MetricsError> {
    let raw = row.get(i).unwrap_or_default();
    raw.parse().map_err(|_| MetricsError::BadRow { row: n, reason: format!("bad {} value {raw:?}", CSV_HEADER[i]) })
}

pub fn read_csv<R: Read>(r: R) -> Result<Vec<TrialRecord>, MetricsError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(r);
    let header = rdr.headers()?.clone();
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(MetricsError::BadHeader(header.iter().collect::<Vec<_>>().join(",")));
    }
    let mut records = Vec::new();
    for (n, row) in rdr.records().enumerate() {
        let row = row?;
        let n = n + 2;
        if row.len() != CSV_HEADER.len() {
            return Err(MetricsError::BadRow { row: n, reason: format!("expected 11 fields, got {}", row.len()) });
        }
        records.push(TrialRecord {
            trial_idx: field(&row, 0, n)?,
            seed: field(&row, 1, n)?,
            device: row[2].to_string(),
            strategy: row[3].to_string(),
            technique: row[4].to_string(),
            gaze_error_cm: field(&row, 5, n)?,
            thumb_distance_cm: field(&row, 6, n)?,
            completion_time_s: field(&row, 7, n)?,
            success: field(&row, 8, n)?,
            gesture: row[9].to_string(),
            timestamp_s: field(&row, 10, n)?,
        });
    }
    Ok(records)
}

pub fn import_csv(path: &Path) -> Result<Vec<TrialRecord>, MetricsError> {
    read_csv(File::open(path)?)
}
