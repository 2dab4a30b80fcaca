//! Depth, segmentation and detection metrics.

mod depth;
mod detection;
mod seg;

pub use depth::{depth_metrics, median_scale, DepthEvalConfig, DepthMetrics};
pub use detection::{
    average_precision, interpolated_ap, match_detections, mean_ap, pr_curve, ClassEval, Detection, GroundTruth,
    Interpolation, PrCurve, PrPoint,
};
pub use seg::{seg_metrics, SegMetrics};
