//! On-disk channel description: JSON with explicit [re, im] entries.

use std::path::Path;

use esq_core::FiniteChannel;
use nalgebra::DMatrix;
use serde::Deserialize;

use crate::{CliError, INPUT_ERROR, IO_ERROR};

type C64 = nalgebra::Complex<f64>;

/// Serialized channel: Kraus operators as nested rows of `[re, im]`
/// pairs, `out_dim` rows by `in_dim` columns each.
#[derive(Debug, Deserialize)]
pub struct ChannelFile {
    pub in_dim: usize,
    pub out_dim: usize,
    pub kraus: Vec<Vec<Vec<[f64; 2]>>>,
}

impl ChannelFile {
    /// Validate shapes and build the channel; Kraus closure is enforced
    /// by the [`FiniteChannel`] constructor.
    pub fn into_channel(self) -> Result<FiniteChannel, CliError> {
        if self.kraus.is_empty() {
            return Err(CliError::new(
                INPUT_ERROR,
                "channel file lists no Kraus operators",
            ));
        }
        let mut operators = Vec::with_capacity(self.kraus.len());
        for (index, rows) in self.kraus.iter().enumerate() {
            if rows.len() != self.out_dim || rows.iter().any(|r| r.len() != self.in_dim) {
                return Err(CliError::new(
                    INPUT_ERROR,
                    format!(
                        "Kraus operator {index} is not {}x{} (out_dim x in_dim)",
                        self.out_dim, self.in_dim
                    ),
                ));
            }
            let m = DMatrix::from_fn(self.out_dim, self.in_dim, |r, c| {
                let [re, im] = rows[r][c];
                C64::new(re, im)
            });
            operators.push(m);
        }
        FiniteChannel::new(operators)
            .map_err(|e| CliError::new(INPUT_ERROR, format!("channel file: {e}")))
    }
}

/// Read and parse a channel file. Read failures are I/O errors; parse
/// failures report the line and column.
pub fn load_channel(path: &Path) -> Result<FiniteChannel, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        CliError::new(IO_ERROR, format!("cannot read {}: {e}", path.display()))
    })?;
    let parsed: ChannelFile = serde_json::from_str(&text).map_err(|e| {
        CliError::new(
            INPUT_ERROR,
            format!(
                "{}: parse error at line {}, column {}: {e}",
                path.display(),
                e.line(),
                e.column()
            ),
        )
    })?;
    parsed.into_channel()
}
