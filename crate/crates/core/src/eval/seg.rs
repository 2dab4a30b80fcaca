use alloc::vec::Vec;

use crate::error::{bail, Result};
use crate::map::LabelMap;

#[derive(Debug, Clone, PartialEq)]
pub struct SegMetrics {
    pub pixel_accuracy: f64,
    /// Mean per-class accuracy over classes present in the ground truth.
    pub mean_pixel_accuracy: f64,
    /// `None` for classes absent from both maps.
    pub class_iou: Vec<Option<f64>>,
    pub mean_iou: f64,
    /// Row = ground truth, column = prediction.
    pub confusion: Vec<Vec<u64>>,
}

pub fn seg_metrics(pred: &LabelMap, gt: &LabelMap, classes: usize) -> Result<SegMetrics> {
    if !pred.same_dims(gt) {
        bail!(ShapeMismatch, "prediction and ground truth differ in size");
    }
    if gt.is_empty() {
        bail!(Empty, "empty label maps");
    }
    let mut conf = alloc::vec![alloc::vec![0u64; classes]; classes];
    for (&p, &g) in pred.data().iter().zip(gt.data()) {
        let (pi, gi) = (p as usize, g as usize);
        if pi >= classes || gi >= classes {
            bail!(InvalidParameter, "label {} out of range for {classes} classes", pi.max(gi));
        }
        conf[gi][pi] += 1;
    }
    let total: u64 = conf.iter().flatten().sum();
    let correct: u64 = (0..classes).map(|k| conf[k][k]).sum();
    let (mut acc_sum, mut acc_n) = (0.0, 0usize);
    let mut class_iou = Vec::with_capacity(classes);
    for k in 0..classes {
        let gt_k: u64 = conf[k].iter().sum();
        let pred_k: u64 = conf.iter().map(|row| row[k]).sum();
        if gt_k > 0 {
            acc_sum += conf[k][k] as f64 / gt_k as f64;
            acc_n += 1;
        }
        let union = gt_k + pred_k - conf[k][k];
        class_iou.push((union > 0).then(|| conf[k][k] as f64 / union as f64));
    }
    let defined: Vec<f64> = class_iou.iter().flatten().copied().collect();
    Ok(SegMetrics {
        pixel_accuracy: correct as f64 / total as f64,
        mean_pixel_accuracy: acc_sum / acc_n as f64,
        mean_iou: defined.iter().sum::<f64>() / defined.len() as f64,
        class_iou,
        confusion: conf,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::Map;

    #[test]
    fn perfect() {
        let g = Map::from_fn(4, 3, |x, y| ((x + y) % 3) as u32);
        let m = seg_metrics(&g, &g, 5).unwrap();
        assert_eq!((m.pixel_accuracy, m.mean_iou, m.mean_pixel_accuracy), (1.0, 1.0, 1.0));
        assert_eq!(m.class_iou[4], None);
    }

    #[test]
    fn one_wrong_pixel() {
        let g = Map::from_vec(2, 2, alloc::vec![0, 1, 1, 1]).unwrap();
        let p = Map::from_vec(2, 2, alloc::vec![0, 0, 1, 1]).unwrap();
        let m = seg_metrics(&p, &g, 2).unwrap();
        assert_eq!(m.pixel_accuracy, 0.75);
        // class 0: tp 1, union 2; class 1: tp 2, union 3
        assert_eq!(m.class_iou, alloc::vec![Some(0.5), Some(2.0 / 3.0)]);
        assert_eq!(m.mean_pixel_accuracy, 0.5 * (1.0 + 2.0 / 3.0));
    }

    #[test]
    fn all_background_prediction() {
        let g = Map::from_fn(10, 1, |x, _| u32::from(x < 3));
        let p = Map::filled(10, 1, 0u32);
        let m = seg_metrics(&p, &g, 2).unwrap();
        assert_eq!(m.class_iou, alloc::vec![Some(0.7), Some(0.0)]);
    }

    #[test]
    fn label_out_of_range() {
        let g = Map::filled(2, 2, 3u32);
        assert!(seg_metrics(&g, &g, 3).is_err());
    }
}
