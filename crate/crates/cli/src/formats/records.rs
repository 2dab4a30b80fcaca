//! JSON representations and detection / ground-truth records.

use std::path::{Path, PathBuf};

use fpk_core::reps::{CurvedBox, Ellipse, OrientedBox, PolygonMode, PolygonRep, Representation, StandardBox};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum RepRecord {
    StandardBox {
        cx: f64,
        cy: f64,
        w: f64,
        h: f64,
    },
    OrientedBox {
        cx: f64,
        cy: f64,
        w: f64,
        h: f64,
        theta: f64,
    },
    Ellipse {
        cx: f64,
        cy: f64,
        semi_major: f64,
        semi_minor: f64,
        theta: f64,
    },
    CurvedBox {
        cx: f64,
        cy: f64,
        r1: f64,
        r2: f64,
        theta1: f64,
        theta2: f64,
    },
    Polygon {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mode: Option<String>,
        vertices: Vec<[f64; 2]>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        radii: Option<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        star_violation: Option<bool>,
    },
}

impl From<&Representation> for RepRecord {
    fn from(r: &Representation) -> Self {
        match r {
            Representation::Standard(b) => Self::StandardBox { cx: b.cx, cy: b.cy, w: b.w, h: b.h },
            Representation::Oriented(b) => Self::OrientedBox { cx: b.cx, cy: b.cy, w: b.w, h: b.h, theta: b.theta },
            Representation::Ellipse(e) => Self::Ellipse {
                cx: e.center[0],
                cy: e.center[1],
                semi_major: e.semi_major,
                semi_minor: e.semi_minor,
                theta: e.theta,
            },
            Representation::Curved(c) => {
                let ([cx, cy], (r1, r2), (theta1, theta2)) = (c.center(), c.radii(), c.angles());
                Self::CurvedBox { cx, cy, r1, r2, theta1, theta2 }
            }
            Representation::Polygon(p) => {
                let (radii, star_violation) = match p {
                    PolygonRep::Angular { radii, star_violation, .. } => (Some(radii.clone()), Some(*star_violation)),
                    PolygonRep::Vertices { .. } => (None, None),
                };
                Self::Polygon { mode: Some(p.mode().name().to_string()), vertices: p.vertices(), radii, star_violation }
            }
        }
    }
}

impl RepRecord {
    pub fn to_rep(&self) -> CliResult<Representation> {
        Ok(match self {
            Self::StandardBox { cx, cy, w, h } => {
                Representation::Standard(StandardBox { cx: *cx, cy: *cy, w: *w, h: *h })
            }
            Self::OrientedBox { cx, cy, w, h, theta } => {
                Representation::Oriented(OrientedBox { cx: *cx, cy: *cy, w: *w, h: *h, theta: *theta })
            }
            Self::Ellipse { cx, cy, semi_major, semi_minor, theta } => {
                if !(*semi_major > 0.0 && *semi_minor > 0.0) {
                    return Err(CliError::Invalid("ellipse axes must be positive".into()));
                }
                Representation::Ellipse(Ellipse {
                    center: [*cx, *cy],
                    semi_major: *semi_major,
                    semi_minor: *semi_minor,
                    theta: *theta,
                })
            }
            Self::CurvedBox { cx, cy, r1, r2, theta1, theta2 } => {
                Representation::Curved(CurvedBox::new([*cx, *cy], *r1, *r2, *theta1, *theta2)?)
            }
            Self::Polygon { mode, vertices, .. } => {
                if vertices.len() < 3 {
                    return Err(CliError::Invalid("polygon needs at least 3 vertices".into()));
                }
                let mode = match mode.as_deref() {
                    Some("adaptive") => PolygonMode::Adaptive,
                    Some("angular") => PolygonMode::UniformAngular,
                    _ => PolygonMode::UniformPerimeter,
                };
                // angular input is already expanded to vertices
                let mode = if mode == PolygonMode::UniformAngular { PolygonMode::UniformPerimeter } else { mode };
                Representation::Polygon(PolygonRep::Vertices { mode, centroid: [0.0, 0.0], offsets: vertices.clone() })
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectionRecord {
    pub image_id: String,
    pub class: String,
    pub score: f64,
    pub representation: RepRecord,
}

/// Ground truth given either inline or as a mask PNG (relative paths resolve
/// against the record file's directory).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroundTruthRecord {
    pub image_id: String,
    pub class: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub representation: Option<RepRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mask: Option<PathBuf>,
}

/// One JSON value per non-empty line.
pub fn read_jsonl<T: for<'de> Deserialize<'de>>(path: &Path) -> CliResult<Vec<T>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| serde_json::from_str(l).map_err(|e| CliError::format(path, format!("line {}: {e}", i + 1))))
        .collect()
}
