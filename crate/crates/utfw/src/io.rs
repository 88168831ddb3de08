//! Input formats: two-column density tables, molecule documents, and
//! numeric arguments that may be written as fractions.

use std::fs;
use std::path::Path;

use serde_json::{Map, Value};
use utfw_core::geometry::{MoleculeConfig, Nucleus};
use utfw_core::quadrature::{RadialDensity, RadialGrid};
use utfw_core::ALPHA_PHYSICAL;

use crate::error::{CliError, InputError};

/// Parses `x` or `p/q` as a positive finite number.
pub fn parse_positive(text: &str) -> Result<f64, String> {
    let text = text.trim();
    let value = match text.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num.trim().parse().map_err(|_| format!("invalid numerator in {text:?}"))?;
            let den: f64 = den.trim().parse().map_err(|_| format!("invalid denominator in {text:?}"))?;
            num / den
        }
        None => text.parse().map_err(|_| format!("invalid number {text:?}"))?,
    };
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(format!("{text:?} is not a positive finite number"))
    }
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

/// Reads `radius value` pairs, one per line. Blank lines and lines starting
/// with `#` are skipped; commas also separate columns. The radii must form a
/// log-spaced or linear grid.
pub fn parse_density(text: &str, source_name: &str) -> Result<RadialDensity, InputError> {
    let mut problems = Vec::new();
    let mut radii = Vec::new();
    let mut values = Vec::new();
    for (number, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|f| !f.is_empty())
            .collect();
        if fields.len() != 2 {
            problems.push(format!("line {}: expected 2 columns, found {}", number + 1, fields.len()));
            continue;
        }
        match (fields[0].parse::<f64>(), fields[1].parse::<f64>()) {
            (Ok(r), Ok(v)) => {
                radii.push(r);
                values.push(v);
            }
            (r, v) => {
                if r.is_err() {
                    problems.push(format!("line {}: invalid radius {:?}", number + 1, fields[0]));
                }
                if v.is_err() {
                    problems.push(format!("line {}: invalid value {:?}", number + 1, fields[1]));
                }
            }
        }
    }
    if !problems.is_empty() {
        return Err(InputError::new(source_name, problems));
    }
    let grid = RadialGrid::from_nodes(&radii).map_err(|e| InputError::new(source_name, vec![format!("radii: {e}")]))?;
    RadialDensity::new(grid, values).map_err(|e| InputError::new(source_name, vec![format!("values: {e}")]))
}

pub fn read_density(path: &Path) -> Result<RadialDensity, CliError> {
    let text = read_text(path)?;
    Ok(parse_density(&text, &path.display().to_string())?)
}

/// A parsed molecule document.
#[derive(Debug, Clone, PartialEq)]
pub struct MoleculeFile {
    pub lambda: Option<f64>,
    /// `1/137` when absent.
    pub alpha: f64,
    pub config: MoleculeConfig,
}

fn positive_field(map: &Map<String, Value>, key: &str, problems: &mut Vec<String>) -> Option<f64> {
    match map.get(key) {
        None | Some(Value::Null) => None,
        Some(Value::Number(n)) => match n.as_f64() {
            Some(v) if v > 0.0 && v.is_finite() => Some(v),
            _ => {
                problems.push(format!("{key}: must be positive, got {n}"));
                None
            }
        },
        Some(other) => {
            problems.push(format!("{key}: expected a number, found {}", kind(other)));
            None
        }
    }
}

fn kind(value: &Value) -> &'static str {
    match value {
        Value::Null => "null",
        Value::Bool(_) => "a boolean",
        Value::Number(_) => "a number",
        Value::String(_) => "a string",
        Value::Array(_) => "an array",
        Value::Object(_) => "an object",
    }
}

fn nucleus(index: usize, value: &Value, problems: &mut Vec<String>) -> Option<Nucleus> {
    let Value::Object(map) = value else {
        problems.push(format!("nuclei[{index}]: expected an object, found {}", kind(value)));
        return None;
    };
    for key in map.keys().filter(|k| !matches!(k.as_str(), "z" | "position")) {
        problems.push(format!("nuclei[{index}].{key}: unknown field"));
    }
    let z = match map.get("z") {
        Some(Value::Number(n)) => match n.as_f64() {
            Some(v) if v >= 0.0 && v.is_finite() => Some(v),
            _ => {
                problems.push(format!("nuclei[{index}].z: must be nonnegative, got {n}"));
                None
            }
        },
        Some(other) => {
            problems.push(format!("nuclei[{index}].z: expected a number, found {}", kind(other)));
            None
        }
        None => {
            problems.push(format!("nuclei[{index}].z: missing"));
            None
        }
    };
    let position = match map.get("position") {
        Some(Value::Array(items)) if items.len() == 3 => {
            let coords: Vec<Option<f64>> = items.iter().map(Value::as_f64).collect();
            if coords.iter().all(Option::is_some) {
                Some([coords[0].unwrap(), coords[1].unwrap(), coords[2].unwrap()])
            } else {
                problems.push(format!("nuclei[{index}].position: coordinates must be numbers"));
                None
            }
        }
        Some(Value::Array(items)) => {
            problems.push(format!(
                "nuclei[{index}].position: expected 3 coordinates, found {}",
                items.len()
            ));
            None
        }
        Some(other) => {
            problems.push(format!("nuclei[{index}].position: expected an array, found {}", kind(other)));
            None
        }
        None => {
            problems.push(format!("nuclei[{index}].position: missing"));
            None
        }
    };
    Some(Nucleus {
        z: z?,
        position: position?,
    })
}

/// Parses `{"lambda": .., "alpha": .., "nuclei": [{"z": .., "position": [x, y, z]}, ..]}`.
pub fn parse_molecule(text: &str, source_name: &str) -> Result<MoleculeFile, InputError> {
    let value: Value = serde_json::from_str(text).map_err(|e| InputError::new(source_name, vec![e.to_string()]))?;
    let Value::Object(map) = value else {
        return Err(InputError::new(
            source_name,
            vec![format!("expected an object, found {}", kind(&value))],
        ));
    };
    let mut problems = Vec::new();
    for key in map.keys().filter(|k| !matches!(k.as_str(), "lambda" | "alpha" | "nuclei")) {
        problems.push(format!("{key}: unknown field"));
    }
    let lambda = positive_field(&map, "lambda", &mut problems);
    let alpha = positive_field(&map, "alpha", &mut problems).unwrap_or(ALPHA_PHYSICAL);
    let nuclei: Vec<Option<Nucleus>> = match map.get("nuclei") {
        Some(Value::Array(items)) if items.is_empty() => {
            problems.push("nuclei: at least one nucleus is required".to_string());
            Vec::new()
        }
        Some(Value::Array(items)) => items
            .iter()
            .enumerate()
            .map(|(i, v)| nucleus(i, v, &mut problems))
            .collect(),
        Some(other) => {
            problems.push(format!("nuclei: expected an array, found {}", kind(other)));
            Vec::new()
        }
        None => {
            problems.push("nuclei: missing".to_string());
            Vec::new()
        }
    };
    if !problems.is_empty() {
        return Err(InputError::new(source_name, problems));
    }
    let nuclei: Vec<Nucleus> = nuclei.into_iter().flatten().collect();
    let config = MoleculeConfig::new(nuclei).map_err(|e| InputError::new(source_name, vec![format!("nuclei: {e}")]))?;
    Ok(MoleculeFile { lambda, alpha, config })
}

pub fn read_molecule(path: &Path) -> Result<MoleculeFile, CliError> {
    let text = read_text(path)?;
    Ok(parse_molecule(&text, &path.display().to_string())?)
}
