use alloc::vec::Vec;

use crate::error::{bail, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Detection<R> {
    pub image: usize,
    pub score: f64,
    pub item: R,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth<G> {
    pub image: usize,
    pub item: G,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Interpolation {
    ElevenPoint,
    AllPoint,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrPoint {
    pub recall: f64,
    pub precision: f64,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrCurve {
    pub points: Vec<PrPoint>,
    pub num_gt: usize,
}

/// Detection indices by descending score; equal scores keep input order.
fn ranking<R>(dets: &[Detection<R>]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..dets.len()).collect();
    order.sort_by(|&a, &b| dets[b].score.total_cmp(&dets[a].score).then(a.cmp(&b)));
    order
}

/// Greedy matching in rank order: each detection takes the unmatched
/// ground truth of its image with the highest IoU (lowest index on ties) and
/// is a true positive when that IoU reaches `thresh`. Returned in rank
/// order as `(detection index, true positive)`.
pub fn match_detections<R, G>(
    dets: &[Detection<R>],
    gts: &[GroundTruth<G>],
    thresh: f64,
    iou: impl Fn(&R, &G) -> f64,
) -> Vec<(usize, bool)> {
    let mut taken = alloc::vec![false; gts.len()];
    ranking(dets)
        .into_iter()
        .map(|d| {
            let mut best: Option<(f64, usize)> = None;
            for (g, gt) in gts.iter().enumerate() {
                if taken[g] || gt.image != dets[d].image {
                    continue;
                }
                let v = iou(&dets[d].item, &gt.item);
                if best.is_none_or(|(b, _)| v > b) {
                    best = Some((v, g));
                }
            }
            match best {
                Some((v, g)) if v >= thresh => {
                    taken[g] = true;
                    (d, true)
                }
                _ => (d, false),
            }
        })
        .collect()
}

pub fn pr_curve<R, G>(
    dets: &[Detection<R>],
    gts: &[GroundTruth<G>],
    thresh: f64,
    iou: impl Fn(&R, &G) -> f64,
) -> Result<PrCurve> {
    if gts.is_empty() {
        bail!(Empty, "average precision is undefined without ground truth");
    }
    let (mut tp, mut fp) = (0usize, 0usize);
    let points = match_detections(dets, gts, thresh, iou)
        .into_iter()
        .map(|(d, hit)| {
            if hit {
                tp += 1;
            } else {
                fp += 1;
            }
            PrPoint {
                recall: tp as f64 / gts.len() as f64,
                precision: tp as f64 / (tp + fp) as f64,
                score: dets[d].score,
            }
        })
        .collect();
    Ok(PrCurve { points, num_gt: gts.len() })
}

/// Area under a precision/recall curve with the given interpolation.
pub fn interpolated_ap(curve: &PrCurve, interp: Interpolation) -> f64 {
    let pts = &curve.points;
    if pts.is_empty() {
        return 0.0;
    }
    match interp {
        Interpolation::ElevenPoint => {
            (0..=10)
                .map(|i| {
                    let t = i as f64 / 10.0;
                    pts.iter().filter(|p| p.recall >= t - 1e-12).map(|p| p.precision).fold(0.0, f64::max)
                })
                .sum::<f64>()
                / 11.0
        }
        Interpolation::AllPoint => {
            let rec: Vec<f64> = core::iter::once(0.0).chain(pts.iter().map(|p| p.recall)).chain([1.0]).collect();
            let mut pre: Vec<f64> = core::iter::once(0.0).chain(pts.iter().map(|p| p.precision)).chain([0.0]).collect();
            for i in (0..pre.len() - 1).rev() {
                pre[i] = pre[i].max(pre[i + 1]);
            }
            (1..rec.len()).map(|i| (rec[i] - rec[i - 1]) * pre[i]).sum()
        }
    }
}

pub fn average_precision<R, G>(
    dets: &[Detection<R>],
    gts: &[GroundTruth<G>],
    thresh: f64,
    interp: Interpolation,
    iou: impl Fn(&R, &G) -> f64,
) -> Result<f64> {
    Ok(interpolated_ap(&pr_curve(dets, gts, thresh, iou)?, interp))
}

/// Detections and ground truth for one class.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassEval<R, G> {
    pub detections: Vec<Detection<R>>,
    pub ground_truth: Vec<GroundTruth<G>>,
}

/// Mean AP over classes with ground truth and over `thresholds`.
pub fn mean_ap<R, G>(
    classes: &[ClassEval<R, G>],
    thresholds: &[f64],
    interp: Interpolation,
    iou: impl Fn(&R, &G) -> f64,
) -> Result<f64> {
    if thresholds.is_empty() {
        bail!(InvalidParameter, "mean AP needs at least one IoU threshold");
    }
    let mut sum = 0.0;
    let mut n = 0usize;
    for class in classes.iter().filter(|c| !c.ground_truth.is_empty()) {
        for &t in thresholds {
            sum += average_precision(&class.detections, &class.ground_truth, t, interp, &iou)?;
            n += 1;
        }
    }
    if n == 0 {
        bail!(Empty, "no class has ground truth");
    }
    Ok(sum / n as f64)
}
