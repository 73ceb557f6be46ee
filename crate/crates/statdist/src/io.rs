//! File formats: density CSV (`t,mass` header, one support point per row)
//! and sample files (one numeric value per line). Both are UTF-8 with
//! '.'-decimal numbers, independent of any locale.

use crate::densities::{DensityError, DiscreteDensity, Sample};
use std::io::{BufRead, Write};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: expected {expected}, got {got:?}")]
    Malformed {
        line: usize,
        expected: &'static str,
        got: String,
    },
    #[error("line {line}: {source}")]
    BadNumber {
        line: usize,
        source: std::num::ParseFloatError,
    },
    #[error("invalid density: {0}")]
    Density(#[from] DensityError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn open(path: &Path) -> Result<std::io::BufReader<std::fs::File>, IoError> {
    std::fs::File::open(path)
        .map(std::io::BufReader::new)
        .map_err(|source| IoError::File {
            path: path.display().to_string(),
            source,
        })
}

/// Reads a `t,mass` CSV into a density. The header row is required; errors
/// carry the 1-based line number of the offending row.
pub fn read_density_csv(path: &Path) -> Result<DiscreteDensity, IoError> {
    parse_density_csv(open(path)?)
}

pub fn parse_density_csv(reader: impl BufRead) -> Result<DiscreteDensity, IoError> {
    let mut support = Vec::new();
    let mut masses = Vec::new();
    let mut lines = reader.lines().enumerate();
    let (_, header) = lines.next().ok_or(IoError::Malformed {
        line: 1,
        expected: "header `t,mass`",
        got: String::new(),
    })?;
    let header = header?;
    if header.trim() != "t,mass" {
        return Err(IoError::Malformed {
            line: 1,
            expected: "header `t,mass`",
            got: header,
        });
    }
    for (index, line) in lines {
        let line = line?;
        let row = line.trim();
        if row.is_empty() {
            continue;
        }
        let mut fields = row.split(',');
        let (t, mass) = match (fields.next(), fields.next(), fields.next()) {
            (Some(t), Some(mass), None) => (t.trim(), mass.trim()),
            _ => {
                return Err(IoError::Malformed {
                    line: index + 1,
                    expected: "two comma-separated fields",
                    got: row.to_string(),
                })
            }
        };
        let parse = |s: &str| {
            s.parse::<f64>().map_err(|source| IoError::BadNumber {
                line: index + 1,
                source,
            })
        };
        support.push(parse(t)?);
        masses.push(parse(mass)?);
    }
    Ok(DiscreteDensity::new(support, masses)?)
}

/// Writes the density in the same format [`read_density_csv`] accepts.
/// Values round-trip bit-exactly: the shortest decimal form that parses
/// back to the identical f64 is written.
pub fn write_density_csv(density: &DiscreteDensity, mut writer: impl Write) -> Result<(), IoError> {
    writeln!(writer, "t,mass")?;
    for (t, mass) in density.support().iter().zip(density.masses()) {
        writeln!(writer, "{t},{mass}")?;
    }
    Ok(())
}

pub fn write_density_csv_path(density: &DiscreteDensity, path: &Path) -> Result<(), IoError> {
    let file = std::fs::File::create(path).map_err(|source| IoError::File {
        path: path.display().to_string(),
        source,
    })?;
    write_density_csv(density, std::io::BufWriter::new(file))
}

/// Reads one numeric value per line; blank lines are skipped.
pub fn read_sample(path: &Path) -> Result<Sample, IoError> {
    let mut values = Vec::new();
    for (index, line) in open(path)?.lines().enumerate() {
        let line = line?;
        let row = line.trim();
        if row.is_empty() {
            continue;
        }
        values.push(row.parse::<f64>().map_err(|source| IoError::BadNumber {
            line: index + 1,
            source,
        })?);
    }
    Ok(Sample::new(values)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    #[test]
    fn density_round_trip_is_bit_exact() {
        let d = DiscreteDensity::new(
            vec![0.0, 1.0, 2.5],
            vec![1.0 / 3.0, 1.0 / 3.0, 1.0 - 2.0 / 3.0],
        )
        .unwrap();
        let mut buffer = Vec::new();
        write_density_csv(&d, &mut buffer).unwrap();
        let back = parse_density_csv(Cursor::new(buffer)).unwrap();
        assert_eq!(back.support(), d.support());
        assert_eq!(back.masses(), d.masses());
    }

    #[test]
    fn missing_header_is_named() {
        let err = parse_density_csv(Cursor::new("0,0.5\n1,0.5\n")).unwrap_err();
        match err {
            IoError::Malformed { line, .. } => assert_eq!(line, 1),
            other => panic!("unexpected: {other}"),
        }
    }

    #[test]
    fn bad_row_is_named() {
        let err = parse_density_csv(Cursor::new("t,mass\n0,0.5\noops\n")).unwrap_err();
        match err {
            IoError::Malformed { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected: {other}"),
        }
    }

    #[test]
    fn bad_number_is_named() {
        let err = parse_density_csv(Cursor::new("t,mass\n0,1/2\n")).unwrap_err();
        match err {
            IoError::BadNumber { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected: {other}"),
        }
    }

    #[test]
    fn invalid_density_is_reported() {
        let err = parse_density_csv(Cursor::new("t,mass\n0,0.5\n1,0.6\n")).unwrap_err();
        assert!(matches!(
            err,
            IoError::Density(DensityError::MassSumOutOfTolerance { .. })
        ));
    }
}
