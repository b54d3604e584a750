//! The `rod-v1` JSON format.
//!
//! ```json
//! { "format": "rod-v1", "A": 2, "kinks": [{ "z": 0, "a": 1 }], "angles": [1, 1] }
//! ```
//!
//! `format` and `angles` are optional on input; missing angles default to one.
//! Output always carries both, at full precision.

use alf_core::{Error, RodFunction, RodStructure};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const ROD_FORMAT: &str = "rod-v1";

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct KinkJson {
    z: f64,
    a: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RodJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    format: Option<String>,
    #[serde(rename = "A")]
    base: f64,
    kinks: Vec<KinkJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    angles: Option<Vec<f64>>,
}

fn field_path(e: &Error) -> String {
    match e {
        Error::NoKinks => "kinks".into(),
        Error::NonPositiveA { .. } => "A".into(),
        Error::NonIncreasingKinks { index, .. } => format!("kinks[{index}].z"),
        Error::NonPositiveWeight { index, .. } => format!("kinks[{index}].a"),
        Error::WeightsNotNormalized { .. } => "kinks[*].a".into(),
        Error::NonFinite { field } => (*field).into(),
        Error::AngleCount { .. } => "angles".into(),
        Error::NonPositiveAngle { index, .. } => format!("angles[{index}]"),
        _ => "(root)".into(),
    }
}

pub fn parse_rod_file(text: &str) -> CliResult<RodStructure> {
    let raw: RodJson = serde_json::from_str(text).map_err(|e| {
        CliError::Input(format!("rod file parse error at line {} column {}: {e}", e.line(), e.column()))
    })?;
    if let Some(f) = &raw.format {
        if f != ROD_FORMAT {
            return Err(CliError::Input(format!("format: expected \"{ROD_FORMAT}\", got \"{f}\"")));
        }
    }
    let invalid = |e: Error| CliError::Input(format!("{}: {e}", field_path(&e)));
    let kinks: Vec<(f64, f64)> = raw.kinks.iter().map(|k| (k.z, k.a)).collect();
    let f = RodFunction::new(raw.base, &kinks).map_err(invalid)?;
    let angles = raw.angles.unwrap_or_else(|| vec![1.0; f.rank() + 1]);
    RodStructure::new(f, angles).map_err(invalid)
}

pub fn serialize_rod(rod: &RodStructure) -> String {
    let raw = RodJson {
        format: Some(ROD_FORMAT.into()),
        base: rod.f.base(),
        kinks: rod.f.kinks().iter().map(|k| KinkJson { z: k.z, a: k.weight }).collect(),
        angles: Some(rod.angles.clone()),
    };
    let mut s = serde_json::to_string_pretty(&raw).expect("serializable");
    s.push('\n');
    s
}
