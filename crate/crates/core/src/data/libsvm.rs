//! LIBSVM text format: `<label> <index>:<value> ...`, indices 1-based.

use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use super::{Dataset, Label, Sample};
use crate::error::{Error, LineErrorKind, Result};

fn parse_label(token: &str) -> std::result::Result<Label, LineErrorKind> {
    let value: f64 = token
        .parse()
        .map_err(|_| LineErrorKind::BadLabel(token.to_string()))?;
    // {0, 1} files are mapped onto {-1, +1}
    if value == 1.0 {
        Ok(Label::Positive)
    } else if value == -1.0 || value == 0.0 {
        Ok(Label::Negative)
    } else {
        Err(LineErrorKind::UnknownLabel(token.to_string()))
    }
}

fn parse_line(line: &str) -> std::result::Result<Option<Sample>, LineErrorKind> {
    let mut tokens = line.split_whitespace();
    let Some(label) = tokens.next() else {
        return Ok(None);
    };
    let label = parse_label(label)?;

    let mut features: Vec<(usize, f64)> = Vec::new();
    for token in tokens {
        let (index, value) = token
            .split_once(':')
            .ok_or_else(|| LineErrorKind::MalformedToken(token.to_string()))?;
        let index: usize = index
            .parse()
            .ok()
            .filter(|&i| i >= 1)
            .ok_or_else(|| LineErrorKind::BadIndex(index.to_string()))?;
        let value: f64 = value
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite())
            .ok_or_else(|| LineErrorKind::BadValue(value.to_string()))?;
        let index = index - 1;
        if let Some(&(previous, _)) = features.last() {
            if index <= previous {
                return Err(LineErrorKind::NonIncreasingIndex {
                    previous: previous + 1,
                    current: index + 1,
                });
            }
        }
        features.push((index, value));
    }
    Ok(Some(Sample { features, label }))
}

/// Parse a LIBSVM stream. Blank lines are skipped; the dimension is one past
/// the largest index seen (at least 1).
pub fn parse_libsvm<R: Read>(reader: R) -> Result<Dataset> {
    let mut samples = Vec::new();
    let mut dim = 0;
    for (i, line) in BufReader::new(reader).lines().enumerate() {
        let line = line?;
        match parse_line(&line) {
            Ok(Some(sample)) => {
                if let Some(max) = sample.max_index() {
                    dim = dim.max(max + 1);
                }
                samples.push(sample);
            }
            Ok(None) => {}
            Err(kind) => return Err(Error::Parse { line: i + 1, kind }),
        }
    }
    Dataset::new(samples, dim.max(1))
}

pub fn read_libsvm<P: AsRef<Path>>(path: P) -> Result<Dataset> {
    parse_libsvm(File::open(path)?)
}

/// Canonical text form: labels `+1`/`-1`, 1-based indices, shortest
/// round-trip float formatting.
pub fn serialize_libsvm(dataset: &Dataset) -> String {
    use std::fmt::Write as _;

    let mut out = String::new();
    for sample in dataset.samples() {
        out.push_str(match sample.label() {
            Label::Positive => "+1",
            Label::Negative => "-1",
        });
        for &(i, v) in sample.features() {
            let _ = write!(out, " {}:{}", i + 1, v);
        }
        out.push('\n');
    }
    out
}

pub fn write_libsvm<W: Write>(dataset: &Dataset, mut writer: W) -> Result<()> {
    writer.write_all(serialize_libsvm(dataset).as_bytes())?;
    Ok(())
}
