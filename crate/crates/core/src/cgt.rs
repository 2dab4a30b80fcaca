//! Camera geometry tensor: centred coordinates, incidence angles and
//! normalised coordinates as six per-pixel channels.

use alloc::vec::Vec;

use crate::camera::lut::InverseLut;
use crate::camera::{CameraModel, ModelKind};
use crate::error::{bail, Result};
use crate::map::{Map, ScalarMap};
use crate::sampling::resize_bilinear;

pub const CHANNEL_NAMES: [&str; 6] = ["cc_x", "cc_y", "a_x", "a_y", "nc_x", "nc_y"];

/// Entries inside the table cell this many samples wide are refined on
/// lookup, so the table size only affects speed.
const LUT_SAMPLES: usize = 2048;

#[derive(Debug, Clone, PartialEq)]
pub struct CgTensor {
    /// Channels in the order of [`CHANNEL_NAMES`].
    pub channels: [ScalarMap; 6],
    pub model: ModelKind,
}

impl CgTensor {
    pub fn width(&self) -> usize {
        self.channels[0].width()
    }

    pub fn height(&self) -> usize {
        self.channels[0].height()
    }

    /// Corner-aligned bilinear resize of every channel.
    pub fn resized(&self, width: usize, height: usize) -> Self {
        let channels = core::array::from_fn(|i| resize_bilinear(&self.channels[i], width, height));
        Self { channels, model: self.model }
    }
}

/// `cc_x = x − c_x`, `cc_y = y − c_y` for column `x` and row `y`.
pub fn centered_coord_maps(w: usize, h: usize, cx: f64, cy: f64) -> Result<(ScalarMap, ScalarMap)> {
    if w == 0 || h == 0 {
        bail!(InvalidParameter, "map size must be at least 1x1");
    }
    Ok((Map::from_fn(w, h, |x, _| x as f64 - cx), Map::from_fn(w, h, |_, y| y as f64 - cy)))
}

/// Signed field angle of the pixel offset `cc` along one axis.
fn axis_angles(model: &CameraModel, lut: Option<&InverseLut>, offsets: &[f64], horizontal: bool) -> Vec<f64> {
    let [cx, cy] = model.principal_point();
    let aspect = model.intrinsics().aspect[if horizontal { 0 } else { 1 }];
    offsets
        .iter()
        .map(|&cc| {
            if cc == 0.0 {
                return 0.0;
            }
            let theta = match (lut, model.kind()) {
                (_, ModelKind::Pinhole) => {
                    let p = if horizontal { [cx + cc, cy] } else { [cx, cy + cc] };
                    model.pixel_theta(p)
                }
                (Some(l), _) => l.lookup(cc.abs() / aspect),
                (None, _) => model.radial_inverse(cc.abs() / aspect),
            };
            match theta {
                Ok(t) => t.copysign(cc),
                Err(_) => f64::NAN,
            }
        })
        .collect()
}

/// Incidence angle maps; beyond-domain entries are NaN.
pub fn incidence_angle_maps(model: &CameraModel, w: usize, h: usize) -> Result<(ScalarMap, ScalarMap)> {
    let [cx, cy] = model.principal_point();
    let (cc_x, cc_y) = centered_coord_maps(w, h, cx, cy)?;
    let lut = if model.kind() == ModelKind::Polynomial4 { Some(InverseLut::build(model, LUT_SAMPLES)?) } else { None };
    let cols: Vec<f64> = cc_x.row(0).to_vec();
    let rows: Vec<f64> = (0..h).map(|y| cc_y.at(0, y)).collect();
    let ax = axis_angles(model, lut.as_ref(), &cols, true);
    let ay = axis_angles(model, lut.as_ref(), &rows, false);
    Ok((Map::from_fn(w, h, |x, _| ax[x]), Map::from_fn(w, h, |_, y| ay[y])))
}

/// Linear ramps from −1 at the first column/row to +1 at the last.
pub fn normalized_coord_maps(w: usize, h: usize) -> Result<(ScalarMap, ScalarMap)> {
    if w < 2 || h < 2 {
        bail!(InvalidParameter, "normalised maps need at least 2x2, got {w}x{h}");
    }
    let ramp = |i: usize, n: usize| {
        if i == n - 1 {
            1.0
        } else {
            -1.0 + 2.0 * i as f64 / (n - 1) as f64
        }
    };
    Ok((Map::from_fn(w, h, |x, _| ramp(x, w)), Map::from_fn(w, h, |_, y| ramp(y, h))))
}

pub fn assemble_cgt(model: &CameraModel, w: usize, h: usize) -> Result<CgTensor> {
    let [cx, cy] = model.principal_point();
    let (cc_x, cc_y) = centered_coord_maps(w, h, cx, cy)?;
    let (a_x, a_y) = incidence_angle_maps(model, w, h)?;
    let (nc_x, nc_y) = normalized_coord_maps(w, h)?;
    Ok(CgTensor { channels: [cc_x, cc_y, a_x, a_y, nc_x, nc_y], model: model.kind() })
}
