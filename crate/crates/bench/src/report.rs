use std::io::{Read, Write};
use std::path::Path;

use crate::{BenchError, CellStatus, GraphKind, Op, Structure, Workload};

/// One timed operation of one cell.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub structure: Structure,
    pub workload: Workload,
    pub graph: GraphKind,
    pub n: usize,
    pub k: usize,
    pub threads: usize,
    pub op: Op,
    pub status: CellStatus,
    /// `None` unless the cell ran.
    pub median_seconds: Option<f64>,
    pub trial_seconds: Vec<f64>,
    pub note: String,
}

pub const HEADER: [&str; 11] = [
    "structure",
    "workload",
    "graph",
    "n",
    "k",
    "threads",
    "op",
    "status",
    "median_seconds",
    "trial_seconds",
    "note",
];

/// Median; the mean of the middle pair for even lengths.
pub fn median(xs: &[f64]) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    let mut s = xs.to_vec();
    s.sort_by(f64::total_cmp);
    let m = s.len() / 2;
    Some(if s.len() % 2 == 1 { s[m] } else { (s[m - 1] + s[m]) / 2.0 })
}

pub fn write_csv<W: Write>(records: &[BenchRecord], out: W) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for r in records {
        let trials: Vec<String> = r.trial_seconds.iter().map(f64::to_string).collect();
        w.write_record([
            r.structure.name().to_string(),
            r.workload.name().to_string(),
            r.graph.name().to_string(),
            r.n.to_string(),
            r.k.to_string(),
            r.threads.to_string(),
            r.op.name().to_string(),
            r.status.name().to_string(),
            r.median_seconds.map(|m| m.to_string()).unwrap_or_default(),
            trials.join(";"),
            r.note.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes the header and one row per record.
pub fn emit_csv(records: &[BenchRecord], path: &Path) -> Result<(), BenchError> {
    write_csv(records, std::fs::File::create(path)?)
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<BenchRecord>, BenchError> {
    let mut rd = csv::Reader::from_reader(input);
    if rd.headers()?.iter().ne(HEADER) {
        return Err(BenchError::Parse("unexpected CSV header".into()));
    }
    let num = |s: &str| s.parse::<usize>().map_err(|e| BenchError::Parse(format!("{s:?}: {e}")));
    let float = |s: &str| s.parse::<f64>().map_err(|e| BenchError::Parse(format!("{s:?}: {e}")));
    let mut out = Vec::new();
    for row in rd.records() {
        let row = row?;
        if row.len() != HEADER.len() {
            return Err(BenchError::Parse(format!("row with {} fields", row.len())));
        }
        out.push(BenchRecord {
            structure: Structure::parse(&row[0])?,
            workload: Workload::parse(&row[1])?,
            graph: GraphKind::parse(&row[2])?,
            n: num(&row[3])?,
            k: num(&row[4])?,
            threads: num(&row[5])?,
            op: Op::parse(&row[6])?,
            status: CellStatus::parse(&row[7])?,
            median_seconds: match &row[8] {
                "" => None,
                s => Some(float(s)?),
            },
            trial_seconds: row[9]
                .split(';')
                .filter(|s| !s.is_empty())
                .map(float)
                .collect::<Result<_, _>>()?,
            note: row[10].to_string(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_odd_and_even() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), Some(2.5));
        assert_eq!(median(&[]), None);
    }

    #[test]
    fn empty_records_give_header_only() {
        let mut buf = Vec::new();
        write_csv(&[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), HEADER.join(",") + "\n");
    }
}
