//! Object representations fitted to instance contours and their IoU
//! against masks.
//!
//! Coordinates here follow the crack convention of [`Contour`]: pixel
//! `(x, y)` spans `[x, x+1] × [y, y+1]` and is sampled at its centre.

mod boxes;
mod contour;
mod curved;
mod ellipse;
mod polygon;
mod raster;

pub use boxes::{convex_hull, fit_oriented_box, fit_standard_box, OrientedBox, StandardBox};
pub use contour::{Contour, Point};
pub use curved::{fit_curved_box, CurvedBox};
pub use ellipse::{fit_ellipse, Ellipse};
pub use polygon::{is_star_shaped_about, resample_arclength, sample_polygon, PolygonMode, PolygonRep};
pub use raster::{mask_iou, rasterize_fn, rasterize_polygon};

use crate::error::{bail, Result};
use crate::map::Mask;

#[derive(Debug, Clone, PartialEq)]
pub enum Representation {
    Standard(StandardBox),
    Oriented(OrientedBox),
    Ellipse(Ellipse),
    Curved(CurvedBox),
    Polygon(PolygonRep),
}

impl Representation {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Standard(_) => "standard_box",
            Self::Oriented(_) => "oriented_box",
            Self::Ellipse(_) => "ellipse",
            Self::Curved(_) => "curved_box",
            Self::Polygon(p) => match p.mode() {
                PolygonMode::UniformAngular => "polygon_angular",
                PolygonMode::UniformPerimeter => "polygon_perimeter",
                PolygonMode::Adaptive => "polygon_adaptive",
            },
        }
    }

    pub fn rasterize(&self, width: usize, height: usize) -> Mask {
        match self {
            Self::Standard(b) => rasterize_fn(width, height, |p| b.contains(p)),
            Self::Oriented(b) => rasterize_fn(width, height, |p| b.contains(p)),
            Self::Ellipse(e) => rasterize_fn(width, height, |p| e.contains(p)),
            Self::Curved(c) => rasterize_fn(width, height, |p| c.contains(p)),
            Self::Polygon(p) => rasterize_polygon(&p.vertices(), width, height),
        }
    }
}

/// IoU of the rasterised representation against `mask`; an empty union
/// scores 0.
pub fn rep_iou(rep: &Representation, mask: &Mask) -> f64 {
    let r = rep.rasterize(mask.width(), mask.height());
    mask_iou(&r, mask).unwrap_or_else(|| {
        log::warn!("empty union while scoring {}", rep.name());
        0.0
    })
}

/// IoU between two representations on a `width × height` raster.
pub fn pairwise_iou(a: &Representation, b: &Representation, width: usize, height: usize) -> f64 {
    mask_iou(&a.rasterize(width, height), &b.rasterize(width, height)).unwrap_or(0.0)
}

/// Every representation for the largest component of `mask`, polygons
/// with `n` vertices.
pub fn fit_all(mask: &Mask, n: usize) -> Result<alloc::vec::Vec<Representation>> {
    if mask.count() == 0 {
        bail!(Empty, "mask has no foreground pixels");
    }
    let c = Contour::from_mask(mask)?;
    Ok(alloc::vec![
        Representation::Standard(fit_standard_box(&c)?),
        Representation::Oriented(fit_oriented_box(&c)?),
        Representation::Ellipse(fit_ellipse(&c)?),
        Representation::Curved(fit_curved_box(mask, &c)?),
        Representation::Polygon(sample_polygon(&c, PolygonMode::UniformAngular, n)?),
        Representation::Polygon(sample_polygon(&c, PolygonMode::UniformPerimeter, n)?),
        Representation::Polygon(sample_polygon(&c, PolygonMode::Adaptive, n)?),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::Map;

    #[test]
    fn exact_and_disjoint() {
        let mask = Map::from_fn(20, 20, |x, y| (3..9).contains(&x) && (4..10).contains(&y));
        let c = Contour::from_mask(&mask).unwrap();
        let poly = Representation::Polygon(sample_polygon(&c, PolygonMode::UniformPerimeter, 4).unwrap());
        assert_eq!(rep_iou(&poly, &mask), 1.0);
        let sb = Representation::Standard(fit_standard_box(&c).unwrap());
        assert_eq!(rep_iou(&sb, &mask), 1.0);
        let far = Representation::Standard(StandardBox { cx: 16.0, cy: 3.0, w: 4.0, h: 4.0 });
        assert_eq!(rep_iou(&far, &mask), 0.0);
        assert_eq!(rep_iou(&far, &Map::filled(5, 5, false)), 0.0);
    }

    #[test]
    fn enclosing_fits_cover_mask() {
        let mask = Map::from_fn(50, 40, |x, y| {
            let (dx, dy) = (x as f64 - 24.0, y as f64 - 19.0);
            (dx * 0.8 + dy * 0.6).powi(2) / 250.0 + (-dx * 0.6 + dy * 0.8).powi(2) / 40.0 <= 1.0
        });
        let reps = fit_all(&mask, 24).unwrap();
        for rep in &reps[..4] {
            let r = rep.rasterize(50, 40);
            let covered = mask.data().iter().zip(r.data()).filter(|(&m, &r)| m && r).count();
            assert!(covered as f64 >= 0.99 * mask.count() as f64, "{}", rep.name());
        }
    }
}
