#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{bail, Result};
use crate::map::{Image, ScalarMap};

fn channel_mean_diff(img: &Image, x0: usize, y0: usize, x1: usize, y1: usize) -> f64 {
    let c = img.channels();
    (0..c).map(|k| img.get(x1, y1, k) - img.get(x0, y0, k)).sum::<f64>() / c as f64
}

/// Edge-aware smoothness of the mean-normalised inverse distance.
pub fn smoothness_loss(distance: &ScalarMap, image: &Image) -> Result<f64> {
    if distance.dims() != image.dims() {
        bail!(ShapeMismatch, "distance map and image differ in size");
    }
    if let Some(&d) = distance.data().iter().find(|&&d| !(d > 0.0) || !d.is_finite()) {
        bail!(InvalidParameter, "distances must be positive and finite, found {d}");
    }
    if distance.is_empty() {
        bail!(Empty, "empty distance map");
    }
    let mean_inv = distance.data().iter().map(|d| 1.0 / d).sum::<f64>() / distance.len() as f64;
    let dn = distance.map(|d| (1.0 / d) / mean_inv);
    let (w, h) = distance.dims();
    let mut gx = 0.0;
    for y in 0..h {
        for x in 0..w.saturating_sub(1) {
            gx += (dn.at(x + 1, y) - dn.at(x, y)).abs() * (-channel_mean_diff(image, x, y, x + 1, y).abs()).exp();
        }
    }
    let mut gy = 0.0;
    for y in 0..h.saturating_sub(1) {
        for x in 0..w {
            gy += (dn.at(x, y + 1) - dn.at(x, y)).abs() * (-channel_mean_diff(image, x, y, x, y + 1).abs()).exp();
        }
    }
    let nx = (w.saturating_sub(1) * h) as f64;
    let ny = (w * h.saturating_sub(1)) as f64;
    Ok(if nx > 0.0 { gx / nx } else { 0.0 } + if ny > 0.0 { gy / ny } else { 0.0 })
}

/// `(L_dis, L_cvt)`: means over the first- and second-order stencil domains.
pub fn feature_regularizers(features: &Image, image: &Image) -> Result<(f64, f64)> {
    if features.dims() != image.dims() {
        bail!(ShapeMismatch, "feature map and image differ in size");
    }
    let (w, h) = features.dims();
    let grad1 = |img: &Image, x: usize, y: usize| -> f64 {
        (0..img.channels())
            .map(|c| {
                let v = img.get(x, y, c);
                (img.get(x + 1, y, c) - v + img.get(x, y + 1, c) - v).abs()
            })
            .sum()
    };
    let mut dis = 0.0;
    let mut n1 = 0usize;
    for y in 0..h.saturating_sub(1) {
        for x in 0..w.saturating_sub(1) {
            dis -= (-grad1(image, x, y)).exp() * grad1(features, x, y);
            n1 += 1;
        }
    }
    let mut cvt = 0.0;
    let mut n2 = 0usize;
    for y in 0..h.saturating_sub(2) {
        for x in 0..w.saturating_sub(2) {
            for c in 0..features.channels() {
                let f = |dx: usize, dy: usize| features.get(x + dx, y + dy, c);
                let dxx = f(2, 0) - 2.0 * f(1, 0) + f(0, 0);
                let dyy = f(0, 2) - 2.0 * f(0, 1) + f(0, 0);
                let dxy = f(1, 1) - f(1, 0) - f(0, 1) + f(0, 0);
                cvt += (dxx + 2.0 * dxy + dyy).abs();
            }
            n2 += 1;
        }
    }
    Ok((if n1 > 0 { dis / n1 as f64 } else { 0.0 }, if n2 > 0 { cvt / n2 as f64 } else { 0.0 }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::Map;

    #[test]
    fn constant_distance_is_smooth() {
        let d = Map::filled(5, 4, 3.0);
        let img = Image::from_fn(5, 4, 3, |x, y, c| (x + y + c) as f64 * 0.1);
        assert_eq!(smoothness_loss(&d, &img).unwrap(), 0.0);
    }

    #[test]
    fn linear_fixture_by_hand() {
        let d = Map::from_vec(4, 1, alloc::vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let img = Image::filled(4, 1, 3, 0.5);
        // 1/D = 1, 1/2, 1/3, 1/4; mean = 25/48
        // |Δ D*| sum = (1 - 1/4) * 48/25 = 1.44, over 3 differences
        assert!((smoothness_loss(&d, &img).unwrap() - 0.48).abs() < 1e-14);
    }

    #[test]
    fn image_edge_damps_penalty() {
        let d = Map::from_fn(6, 3, |x, _| if x < 3 { 1.0 } else { 5.0 });
        let flat = Image::filled(6, 3, 1, 0.5);
        let edge = Image::from_fn(6, 3, 1, |x, _, _| if x < 3 { 0.0 } else { 1.0 });
        assert!(smoothness_loss(&d, &edge).unwrap() < smoothness_loss(&d, &flat).unwrap());
    }

    #[test]
    fn rejects_nonpositive_distance() {
        let d = Map::from_vec(2, 1, alloc::vec![1.0, 0.0]).unwrap();
        assert!(smoothness_loss(&d, &Image::filled(2, 1, 1, 0.0)).is_err());
    }

    #[test]
    fn constant_features() {
        let f = Image::filled(4, 4, 2, 0.3);
        let i = Image::from_fn(4, 4, 3, |x, _, _| x as f64);
        assert_eq!(feature_regularizers(&f, &i).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn ramp_features() {
        let f = Image::from_fn(5, 5, 1, |x, y, _| 0.5 * x as f64 + 0.25 * y as f64);
        let i = Image::filled(5, 5, 1, 0.1);
        let (dis, cvt) = feature_regularizers(&f, &i).unwrap();
        assert!((dis + 0.75).abs() < 1e-15);
        assert_eq!(cvt, 0.0);
    }

    #[test]
    fn three_by_three_fixture() {
        let fv = [1.0, 4.0, 2.0, 0.0, 3.0, 5.0, 2.0, 1.0, 7.0];
        let iv = [0.0, 0.5, 1.0, 0.2, 0.2, 0.9, 0.4, 0.1, 0.0];
        let f = Image::from_vec(3, 3, 1, fv.to_vec()).unwrap();
        let i = Image::from_vec(3, 3, 1, iv.to_vec()).unwrap();
        let at = |v: &[f64; 9], x: usize, y: usize| v[y * 3 + x];
        let mut dis = 0.0;
        for y in 0..2 {
            for x in 0..2 {
                let g = |v: &[f64; 9]| (at(v, x + 1, y) - at(v, x, y) + at(v, x, y + 1) - at(v, x, y)).abs();
                dis -= (-g(&iv)).exp() * g(&fv);
            }
        }
        let dxx = at(&fv, 2, 0) - 2.0 * at(&fv, 1, 0) + at(&fv, 0, 0);
        let dyy = at(&fv, 0, 2) - 2.0 * at(&fv, 0, 1) + at(&fv, 0, 0);
        let dxy = at(&fv, 1, 1) - at(&fv, 1, 0) - at(&fv, 0, 1) + at(&fv, 0, 0);
        let (d, c) = feature_regularizers(&f, &i).unwrap();
        assert!((d - dis / 4.0).abs() < 1e-14);
        assert!((c - (dxx + 2.0 * dxy + dyy).abs()).abs() < 1e-14);
    }
}
