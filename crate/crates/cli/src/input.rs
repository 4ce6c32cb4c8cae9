//! Model files and population vectors.
//!
//! A model file is a JSON object in one of two shapes:
//!
//! ```json
//! {"transition": [[0.0, 0.0], [0.5, 0.0]], "fertility": [[1.0, 1.0], [0.0, 0.0]]}
//! {"leslie": {"survival": [0.5], "fertility": [1.0, 1.0]}}
//! ```

use std::fs;
use std::path::Path;

use popdyn_core::{assemble, validate_model_with, LeslieModel, Matrix, PopulationModel, Tolerances};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    transition: Option<Vec<Vec<f64>>>,
    fertility: Option<Vec<Vec<f64>>>,
    leslie: Option<LeslieSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LeslieSpec {
    survival: Vec<f64>,
    fertility: Vec<f64>,
}

pub fn read_model(path: &Path, tol: Tolerances) -> Result<PopulationModel, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    parse_model(&text, tol).map_err(|e| match e {
        CliError::Input(msg) => CliError::Input(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn parse_model(text: &str, tol: Tolerances) -> Result<PopulationModel, CliError> {
    let file: ModelFile = serde_json::from_str(text).map_err(|e| CliError::Input(e.to_string()))?;
    match file {
        ModelFile { transition: Some(t), fertility: Some(f), leslie: None } => {
            let t = Matrix::from_rows(&t).map_err(|e| CliError::Input(format!("field `transition`: {e}")))?;
            let f = Matrix::from_rows(&f).map_err(|e| CliError::Input(format!("field `fertility`: {e}")))?;
            Ok(validate_model_with(t, f, tol)?)
        }
        ModelFile { transition: None, fertility: None, leslie: Some(l) } => {
            let l = LeslieModel::new(l.survival, l.fertility)?;
            let m = assemble(&l)?;
            Ok(validate_model_with(m.transition().clone(), m.fertility().clone(), tol)?)
        }
        ModelFile { leslie: Some(_), .. } => {
            Err(CliError::Input("give either `leslie` or `transition` and `fertility`, not both".into()))
        }
        ModelFile { transition: None, .. } => Err(CliError::Input("missing field `transition`".into())),
        ModelFile { fertility: None, .. } => Err(CliError::Input("missing field `fertility`".into())),
    }
}

/// `--x0` is either a comma-separated list or a file with one number per line.
pub fn read_population(arg: &str) -> Result<Vec<f64>, CliError> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {arg}: {e}")))?;
        text.lines()
            .enumerate()
            .filter(|(_, line)| !line.trim().is_empty())
            .map(|(i, line)| {
                line.trim()
                    .parse::<f64>()
                    .map_err(|e| CliError::Input(format!("{arg}, line {}: {e}", i + 1)))
            })
            .collect()
    } else {
        arg.split(',')
            .enumerate()
            .map(|(i, item)| {
                item.trim()
                    .parse::<f64>()
                    .map_err(|e| CliError::Input(format!("--x0 entry {}: `{}`: {e}", i + 1, item.trim())))
            })
            .collect()
    }
}
