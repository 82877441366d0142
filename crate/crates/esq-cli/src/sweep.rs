//! Parameter sweeps and figure-ready CSV emission.

use std::io::Write;
use std::path::Path;

use esq_core::pauli::{
    dephasing_bound, depolarizing_bound, reverse_coherent_information, PauliProbabilities,
};
use esq_core::gaussian::{pure_loss_bound_limit, pure_loss_lower_bound};

use crate::render::fmt_sig;
use crate::{CliError, INPUT_ERROR, IO_ERROR};

/// An inclusive, evenly spaced scan of one parameter.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub parameter: &'static str,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl SweepSpec {
    pub fn new(
        parameter: &'static str,
        start: f64,
        stop: f64,
        points: usize,
    ) -> Result<Self, CliError> {
        let spec = SweepSpec {
            parameter,
            start,
            stop,
            points,
        };
        if spec.points < 2 {
            return Err(CliError::new(
                INPUT_ERROR,
                format!(
                    "sweep over {} needs at least 2 points, got {}",
                    spec.parameter, spec.points
                ),
            ));
        }
        if !(spec.start < spec.stop) {
            return Err(CliError::new(
                INPUT_ERROR,
                format!(
                    "sweep over {} needs start < stop, got [{}, {}]",
                    spec.parameter, spec.start, spec.stop
                ),
            ));
        }
        Ok(spec)
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        let width = (self.stop - self.start) / (self.points - 1) as f64;
        (0..self.points).map(move |k| self.start + k as f64 * width)
    }
}

/// Which of the three canned figures to emit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FigureName {
    Dephasing,
    Depolarizing,
    PureLoss,
}

impl FigureName {
    pub fn file_stem(self) -> &'static str {
        match self {
            FigureName::Dephasing => "dephasing",
            FigureName::Depolarizing => "depolarizing",
            FigureName::PureLoss => "pure-loss",
        }
    }
}

/// Compute the rows of one figure: `(param, upper, lower)` per sweep
/// point.
pub fn figure_rows(name: FigureName, points: Option<usize>) -> Result<Vec<[f64; 3]>, CliError> {
    match name {
        FigureName::Dephasing => {
            let sweep = SweepSpec::new("p", 0.0, 1.0, points.unwrap_or(101))?;
            sweep
                .values()
                .map(|p| {
                    let upper = dephasing_bound(p)?;
                    let probs = PauliProbabilities::dephasing(p)?;
                    Ok([p, upper, reverse_coherent_information(&probs)])
                })
                .collect::<Result<_, esq_core::Error>>()
                .map_err(CliError::from)
        }
        FigureName::Depolarizing => {
            let sweep = SweepSpec::new("p", 0.0, 1.0, points.unwrap_or(101))?;
            sweep
                .values()
                .map(|p| {
                    let upper = depolarizing_bound(p)?.value;
                    let probs = PauliProbabilities::depolarizing(p)?;
                    Ok([p, upper, reverse_coherent_information(&probs)])
                })
                .collect::<Result<_, esq_core::Error>>()
                .map_err(CliError::from)
        }
        FigureName::PureLoss => {
            let sweep = SweepSpec::new("eta", 0.0, 0.99, points.unwrap_or(100))?;
            sweep
                .values()
                .map(|eta| {
                    Ok([
                        eta,
                        pure_loss_bound_limit(eta)?,
                        pure_loss_lower_bound(eta)?,
                    ])
                })
                .collect::<Result<_, esq_core::Error>>()
                .map_err(CliError::from)
        }
    }
}

/// Render rows as CSV text with the fixed header.
pub fn rows_to_csv(rows: &[[f64; 3]]) -> String {
    let mut out = String::from("param,upper_bound,lower_bound\n");
    for [param, upper, lower] in rows {
        out.push_str(&fmt_sig(*param));
        out.push(',');
        out.push_str(&fmt_sig(*upper));
        out.push(',');
        out.push_str(&fmt_sig(*lower));
        out.push('\n');
    }
    out
}

/// Write a figure CSV to `path`.
pub fn write_figure(
    name: FigureName,
    points: Option<usize>,
    path: &Path,
) -> Result<usize, CliError> {
    let rows = figure_rows(name, points)?;
    let csv = rows_to_csv(&rows);
    let mut file = std::fs::File::create(path).map_err(|e| {
        CliError::new(IO_ERROR, format!("cannot write {}: {e}", path.display()))
    })?;
    file.write_all(csv.as_bytes())
        .map_err(|e| CliError::new(IO_ERROR, format!("cannot write {}: {e}", path.display())))?;
    Ok(rows.len())
}
