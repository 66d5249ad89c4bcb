//! JSON file formats for states and generators.
//!
//! A state is an array of `[re, im]` pairs. A generator is
//! `{"dim": n, "entries": [[re, im], …]}` with `n²` entries in row-major order.

use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::dynamics::HermitianGenerator;
use crate::error::{Error, Result};
use crate::hilbert::{CVector, StateVector, C64};

/// State files may be off unit norm by this much; they are renormalized.
pub const FILE_NORM_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Serialize, Deserialize)]
struct GeneratorFile {
    dim: usize,
    entries: Vec<[f64; 2]>,
}

fn to_pairs(values: &[C64]) -> Vec<[f64; 2]> {
    values.iter().map(|z| [z.re, z.im]).collect()
}

fn from_pairs(pairs: &[[f64; 2]]) -> Result<Vec<C64>> {
    let values: Vec<C64> = pairs.iter().map(|&[re, im]| C64::new(re, im)).collect();
    if values
        .iter()
        .any(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(Error::NonFinite);
    }
    Ok(values)
}

pub fn parse_state(text: &str) -> Result<StateVector> {
    let pairs: Vec<[f64; 2]> =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("state: {e}")))?;
    let amps = CVector::from_vec(from_pairs(&pairs)?);
    if amps.is_empty() {
        return Err(Error::InvalidDimension(0));
    }
    let norm = amps.norm();
    if (norm - 1.0).abs() > FILE_NORM_TOLERANCE {
        return Err(Error::NotNormalized { norm });
    }
    StateVector::normalize(amps)
}

pub fn state_to_json(state: &StateVector) -> String {
    serde_json::to_string(&to_pairs(state.as_slice())).expect("pairs serialize")
}

pub fn parse_generator(text: &str) -> Result<HermitianGenerator> {
    let file: GeneratorFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("generator: {e}")))?;
    if file.dim == 0 {
        return Err(Error::InvalidDimension(0));
    }
    let expected = file
        .dim
        .checked_mul(file.dim)
        .ok_or(Error::InvalidDimension(file.dim))?;
    if file.entries.len() != expected {
        return Err(Error::Parse(format!(
            "generator: dim {} needs {expected} entries, found {}",
            file.dim,
            file.entries.len()
        )));
    }
    let entries = from_pairs(&file.entries)?;
    HermitianGenerator::deferred(DMatrix::from_row_slice(file.dim, file.dim, &entries))
}

pub fn generator_to_json(generator: &HermitianGenerator) -> String {
    let m = generator.matrix();
    let entries: Vec<C64> = m.transpose().iter().copied().collect();
    let file = GeneratorFile {
        dim: m.nrows(),
        entries: to_pairs(&entries),
    };
    serde_json::to_string(&file).expect("generator serializes")
}

pub fn read_state(path: impl AsRef<Path>) -> Result<StateVector> {
    parse_state(&fs::read_to_string(path)?)
}

pub fn read_generator(path: impl AsRef<Path>) -> Result<HermitianGenerator> {
    parse_generator(&fs::read_to_string(path)?)
}

/// Rows of serializable records as CSV with a header line.
pub fn to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer
            .serialize(row)
            .map_err(|e| Error::Parse(format!("csv: {e}")))?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::Parse(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
