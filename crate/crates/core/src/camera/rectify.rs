//! Cylindrical rectification of a fisheye image.

#[allow(unused_imports)]
use num_traits::Float;

use super::CameraModel;
use crate::error::{bail, Result};
use crate::geom::Vec3;
use crate::map::{Image, Map, Mask};
use crate::sampling::bilinear;

/// For every output pixel, the source pixel it samples and whether that
/// sample is usable.
#[derive(Debug, Clone, PartialEq)]
pub struct RectifyMap {
    pub coords: Map<[f64; 2]>,
    pub valid: Mask,
}

/// Output pixel `(x, y)` views the ray `(sin θx, y_I / f, cos θx)` where
/// `θx = x_I / f` and `(x_I, y_I)` are relative to the output centre.
pub fn cylindrical_map(model: &CameraModel, width: usize, height: usize, f_out: f64) -> Result<RectifyMap> {
    if !(f_out > 0.0) || !f_out.is_finite() {
        bail!(InvalidParameter, "output focal length must be positive, got {f_out}");
    }
    if width == 0 || height == 0 {
        bail!(InvalidParameter, "output size must be non-zero");
    }
    let (ox, oy) = ((width as f64 - 1.0) * 0.5, (height as f64 - 1.0) * 0.5);
    let [sw, sh] = model.size();
    let mut valid = Map::filled(width, height, false);
    let coords = Map::from_fn(width, height, |x, y| {
        let theta_x = (x as f64 - ox) / f_out;
        let yn = (y as f64 - oy) / f_out;
        let (s, c) = theta_x.sin_cos();
        match model.project(Vec3::new(s, yn, c)) {
            Ok(p) => {
                let inside = p[0] >= 0.0 && p[1] >= 0.0 && p[0] <= sw as f64 - 1.0 && p[1] <= sh as f64 - 1.0;
                valid.set(x, y, inside);
                p
            }
            Err(_) => [f64::NAN, f64::NAN],
        }
    });
    Ok(RectifyMap { coords, valid })
}

/// Resamples `image` through `map`; invalid pixels are zero.
pub fn remap(image: &Image, map: &RectifyMap) -> Image {
    let (w, h) = map.coords.dims();
    let mut out = Image::filled(w, h, image.channels(), 0.0);
    for y in 0..h {
        for x in 0..w {
            if !map.valid.at(x, y) {
                continue;
            }
            let [u, v] = map.coords.at(x, y);
            let px = out.pixel_mut(x, y);
            for (c, o) in px.iter_mut().enumerate() {
                *o = bilinear(image, c, u, v);
            }
        }
    }
    out
}

/// Convenience wrapper: build the map and resample.
pub fn cylindrical_rectify(
    image: &Image,
    model: &CameraModel,
    width: usize,
    height: usize,
    f_out: f64,
) -> Result<(Image, Mask)> {
    if image.width() != model.size()[0] || image.height() != model.size()[1] {
        bail!(ShapeMismatch, "image {}x{} does not match sensor {:?}", image.width(), image.height(), model.size());
    }
    let map = cylindrical_map(model, width, height, f_out)?;
    Ok((remap(image, &map), map.valid))
}

/// Horizontal field of view covered by an output of the given width.
pub fn horizontal_fov(width: usize, f_out: f64) -> f64 {
    (width as f64 - 1.0) / f_out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::camera::{Intrinsics, Projection};

    #[test]
    fn centre_maps_to_principal_point() {
        let m = CameraModel::new(Projection::Equidistant { f: 200.0 }, Intrinsics::new([320.0, 240.0], [640, 480]))
            .unwrap();
        let map = cylindrical_map(&m, 101, 51, 150.0).unwrap();
        let p = map.coords.at(50, 25);
        assert!((p[0] - 320.0).abs() < 1e-9 && (p[1] - 240.0).abs() < 1e-9);
        assert!(map.valid.at(50, 25));
    }

    #[test]
    fn centre_row_is_horizontal_in_source() {
        // rays on the horizon stay on the principal row for any radial model
        let m = CameraModel::new(
            Projection::Eucm { f: 250.0, alpha: 0.6, beta: 1.0 },
            Intrinsics::new([320.0, 240.0], [640, 480]),
        )
        .unwrap();
        let map = cylindrical_map(&m, 61, 41, 100.0).unwrap();
        for x in 0..61 {
            let p = map.coords.at(x, 20);
            assert!((p[1] - 240.0).abs() < 1e-9);
        }
    }

    #[test]
    fn far_pixels_are_invalid() {
        let m = CameraModel::new(Projection::pinhole(100.0), Intrinsics::new([50.0, 50.0], [101, 101])).unwrap();
        let map = cylindrical_map(&m, 401, 11, 50.0).unwrap();
        assert!(!map.valid.at(0, 5));
        assert!(map.valid.at(200, 5));
    }
}
