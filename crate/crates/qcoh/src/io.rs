//! JSON serialization for states and channels.
//!
//! State files: `{"dims": [d1,...,dN], "matrix": [[[re,im],...],...]}` with
//! the matrix in row-major order. Channel files:
//! `{"dim": d, "kraus": [matrix, ...]}` with the same complex-entry
//! convention. Writers emit 17-significant-digit reals so values round-trip
//! bit-exactly through the text form.

use crate::cmat::CMatrix;
use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::state::DensityMatrix;
use num_complex::Complex64;
use serde::Deserialize;
use std::fmt::Write as _;

#[derive(Deserialize)]
struct StateFile {
    dims: Vec<usize>,
    matrix: Vec<Vec<[f64; 2]>>,
}

#[derive(Deserialize)]
struct ChannelFile {
    dim: usize,
    kraus: Vec<Vec<Vec<[f64; 2]>>>,
}

fn matrix_from_entries(entries: &[Vec<[f64; 2]>], rows: usize, cols: usize) -> Result<CMatrix> {
    if entries.len() != rows {
        return Err(Error::Parse(format!(
            "matrix has {} rows, expected {rows}",
            entries.len()
        )));
    }
    let mut m = CMatrix::zeros(rows, cols);
    for (i, row) in entries.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::Parse(format!(
                "row {i} has {} entries, expected {cols}",
                row.len()
            )));
        }
        for (j, &[re, im]) in row.iter().enumerate() {
            if !re.is_finite() || !im.is_finite() {
                return Err(Error::Parse(format!("non-finite entry at ({i}, {j})")));
            }
            m[(i, j)] = Complex64::new(re, im);
        }
    }
    Ok(m)
}

fn write_matrix(out: &mut String, m: &CMatrix) {
    out.push('[');
    for i in 0..m.rows() {
        if i > 0 {
            out.push(',');
        }
        out.push('[');
        for j in 0..m.cols() {
            if j > 0 {
                out.push(',');
            }
            let z = m[(i, j)];
            let _ = write!(out, "[{:.16e},{:.16e}]", z.re, z.im);
        }
        out.push(']');
    }
    out.push(']');
}

/// Parses and validates a density matrix from its JSON text form.
pub fn parse_state_json(text: &str) -> Result<DensityMatrix> {
    let file: StateFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("state file: {e}")))?;
    if file.dims.is_empty() || file.dims.iter().any(|&d| d < 2) {
        return Err(Error::Parse(format!(
            "dims must list subsystem dimensions >= 2, got {:?}",
            file.dims
        )));
    }
    let side: usize = file.dims.iter().product();
    let mat = matrix_from_entries(&file.matrix, side, side)?;
    DensityMatrix::validate(&file.dims, mat)
}

/// Serializes a state to the JSON text form read by [`parse_state_json`].
pub fn state_to_json(rho: &DensityMatrix) -> String {
    let mut out = String::new();
    out.push_str("{\"dims\":[");
    for (i, d) in rho.dims().iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "{d}");
    }
    out.push_str("],\"matrix\":");
    write_matrix(&mut out, rho.matrix());
    out.push('}');
    out
}

/// Parses a channel (square Kraus operators of side `dim`) from JSON and
/// verifies completeness.
pub fn parse_channel_json(text: &str) -> Result<KrausChannel> {
    let file: ChannelFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("channel file: {e}")))?;
    if file.dim < 2 {
        return Err(Error::Parse(format!("dim must be >= 2, got {}", file.dim)));
    }
    let mut operators = Vec::with_capacity(file.kraus.len());
    for (k, entries) in file.kraus.iter().enumerate() {
        let m = matrix_from_entries(entries, file.dim, file.dim)
            .map_err(|e| Error::Parse(format!("kraus operator {k}: {e}")))?;
        operators.push(m);
    }
    KrausChannel::new(operators)
}

/// Serializes a channel to the JSON text form read by
/// [`parse_channel_json`].
pub fn channel_to_json(channel: &KrausChannel) -> String {
    let mut out = String::new();
    let _ = write!(out, "{{\"dim\":{},\"kraus\":[", channel.input_dim());
    for (k, op) in channel.operators().iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        write_matrix(&mut out, op);
    }
    out.push_str("]}");
    out
}
