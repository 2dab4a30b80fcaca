//! JSON calibration files.

use std::collections::BTreeMap;
use std::path::Path;

use fpk_core::{CameraModel, Intrinsics, ModelKind, Projection};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

fn unit_aspect() -> [f64; 2] {
    [1.0, 1.0]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrationFile {
    pub model: String,
    pub params: BTreeMap<String, f64>,
    pub principal_point: [f64; 2],
    #[serde(default = "unit_aspect")]
    pub aspect: [f64; 2],
    pub size: [usize; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_max: Option<f64>,
}

impl CalibrationFile {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::format(path, e.to_string()))
    }

    pub fn to_model(&self) -> CliResult<CameraModel> {
        let kind = ModelKind::from_name(&self.model).ok_or_else(|| {
            let known: Vec<&str> = ModelKind::ALL.iter().map(|k| k.name()).collect();
            CliError::Invalid(format!("unknown model '{}', expected one of {}", self.model, known.join(", ")))
        })?;
        let names = kind.param_names();
        if let Some(extra) = self.params.keys().find(|k| !names.contains(&k.as_str())) {
            return Err(CliError::Invalid(format!("model {} has no parameter '{extra}'", kind.name())));
        }
        let values = names
            .iter()
            .map(|n| {
                self.params
                    .get(*n)
                    .copied()
                    .ok_or_else(|| CliError::Invalid(format!("model {} is missing parameter '{n}'", kind.name())))
            })
            .collect::<CliResult<Vec<f64>>>()?;
        let projection = Projection::from_params(kind, &values)?;
        let intrinsics = Intrinsics { principal_point: self.principal_point, aspect: self.aspect, size: self.size };
        Ok(match self.theta_max {
            Some(t) => CameraModel::with_theta_max(projection, intrinsics, t)?,
            None => CameraModel::new(projection, intrinsics)?,
        })
    }

    pub fn from_model(model: &CameraModel) -> Self {
        let kind = model.kind();
        let params = kind.param_names().iter().map(|n| n.to_string()).zip(model.projection().params()).collect();
        let i = model.intrinsics();
        Self {
            model: kind.name().to_string(),
            params,
            principal_point: i.principal_point,
            aspect: i.aspect,
            size: i.size,
            theta_max: Some(model.theta_max()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CAM: &str = r#"{"model":"equidistant","params":{"f":320.0},"principal_point":[320,240],"size":[640,480]}"#;

    #[test]
    fn parses_and_builds() {
        let c: CalibrationFile = serde_json::from_str(CAM).unwrap();
        let m = c.to_model().unwrap();
        assert_eq!(m.kind(), ModelKind::Equidistant);
        assert_eq!(m.principal_point(), [320.0, 240.0]);
        let back = CalibrationFile::from_model(&m);
        assert_eq!(back.to_model().unwrap(), m);
    }

    #[test]
    fn rejects_unknown_fields_and_params() {
        let extra = CAM.replace("\"size\"", "\"lens\":1,\"size\"");
        assert!(serde_json::from_str::<CalibrationFile>(&extra).is_err());
        let c: CalibrationFile = serde_json::from_str(&CAM.replace("\"f\"", "\"g\"")).unwrap();
        assert!(c.to_model().is_err());
        let c: CalibrationFile = serde_json::from_str(&CAM.replace("equidistant", "kb8")).unwrap();
        assert!(c.to_model().is_err());
    }
}
