//! CSV points: one point per line, comma-separated decimals, no header.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use kdemode::PointSet;

pub fn parse_points<R: Read>(reader: R) -> Result<PointSet> {
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (line, record) in csv.records().enumerate() {
        let record = record.with_context(|| format!("line {}", line + 1))?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let row = record
            .iter()
            .map(|field| {
                field
                    .parse::<f64>()
                    .with_context(|| format!("line {}: `{field}` is not a number", line + 1))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        bail!("no points in input");
    }
    Ok(PointSet::new(&rows)?)
}

pub fn read_points(path: &Path) -> Result<PointSet> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    parse_points(BufReader::new(file))
}

/// Writes every coordinate in its shortest round-trip form.
pub fn write_points<W: Write>(writer: W, points: &PointSet) -> Result<()> {
    let mut csv = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(writer);
    for p in points.iter() {
        csv.write_record(p.iter().map(f64::to_string))?;
    }
    csv.flush()?;
    Ok(())
}

pub fn write_points_file(path: &Path, points: &PointSet) -> Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    write_points(BufWriter::new(file), points)
}
