use std::path::Path;

use ultragrowth_core::assocfn::WeightFn;
use ultragrowth_core::conjugate::matrix_of_weight;
use ultragrowth_core::lambdanorms::{CoefficientFamily, CoefficientFile};
use ultragrowth_core::matrices::WeightMatrix;
use ultragrowth_core::oscillator::Target;
use ultragrowth_core::weightspec::{load_sequence, WeightSpec};
use ultragrowth_core::{LogSequence, RunConfig};

use crate::CliError;

/// A command-line operand: a weight spec, or a JSON file.
pub enum Operand {
    Sequence(LogSequence),
    Weight(WeightFn),
}

pub fn operand(arg: &str, cfg: &RunConfig) -> Result<Operand, CliError> {
    match arg.parse::<WeightSpec>() {
        Ok(spec) => Ok(match spec.sequence(cfg)? {
            Some(s) => Operand::Sequence(s),
            None => Operand::Weight(spec.weight(cfg)?),
        }),
        Err(_) if Path::new(arg).is_file() => Ok(Operand::Sequence(load_sequence(Path::new(arg))?)),
        Err(e) => Err(e.into()),
    }
}

pub fn sequence(arg: &str, cfg: &RunConfig) -> Result<LogSequence, CliError> {
    match operand(arg, cfg)? {
        Operand::Sequence(s) => Ok(s),
        Operand::Weight(_) => Err(CliError::Usage(format!("{arg:?} names a weight function, not a sequence"))),
    }
}

pub fn weight(arg: &str, cfg: &RunConfig) -> Result<WeightFn, CliError> {
    Ok(match operand(arg, cfg)? {
        Operand::Sequence(s) => WeightFn::associated(s),
        Operand::Weight(w) => w,
    })
}

/// `matrix:<file>` reads a stored matrix; a sequence gives the constant
/// matrix and a weight its generated matrix over the configured grid.
pub fn matrix(arg: &str, cfg: &RunConfig) -> Result<WeightMatrix, CliError> {
    if let Some(path) = arg.strip_prefix("matrix:") {
        let text = std::fs::read_to_string(path).map_err(ultragrowth_core::Error::from)?;
        return serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{path}: {e}")));
    }
    Ok(match operand(arg, cfg)? {
        Operand::Sequence(s) => WeightMatrix::constant(arg, &s, &cfg.lambdas)?,
        Operand::Weight(w) => matrix_of_weight(&w, &cfg.lambdas, cfg.truncation, cfg)?,
    })
}

pub fn target(arg: &str, cfg: &RunConfig) -> Result<Target, CliError> {
    if let Ok(WeightSpec::Gevrey(s)) = arg.parse::<WeightSpec>() {
        return Ok(Target::Gevrey { s });
    }
    Ok(Target::Sequence { sequence: sequence(arg, cfg)? })
}

/// Inline JSON (starting with `{`) or a path to a JSON file.
pub fn coefficients(arg: &str, cfg: &RunConfig) -> Result<CoefficientFamily, CliError> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(ultragrowth_core::Error::from)?
    };
    let file: CoefficientFile = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{arg}: {e}")))?;
    Ok(file.family(cfg)?)
}
