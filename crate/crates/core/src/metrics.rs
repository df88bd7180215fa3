//! Per-frame overlap metrics and their sequence aggregates: IoU, IoGT, ATB,
//! match-threshold F-score, area-based F1 and object tracking accuracy.
//!
//! Only frames carrying a ground-truth box are evaluated. Counting follows
//! the single-object rule: a prediction matching the ground truth at the
//! threshold is one true positive; a non-matching prediction is one false
//! positive and one false negative; a missing prediction is one false
//! negative. Under this rule precision equals recall whenever every
//! annotated frame has a prediction, and OTA ranges over [-1, 1].

use alloc::vec::Vec;

use crate::geometry::BBox;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MetricError {
    #[error("both boxes are degenerate; overlap is undefined")]
    DegeneratePair,
    #[error("ground-truth box has zero area")]
    DegenerateGroundTruth,
    #[error("no annotated frames to evaluate")]
    NothingToEvaluate,
}

/// One frame of a tracked sequence: ground truth is present only on
/// annotated frames, and a tracker may fail to produce a prediction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FramePair {
    pub frame_index: usize,
    pub gt: Option<BBox>,
    pub pred: Option<BBox>,
}

impl FramePair {
    pub fn new(frame_index: usize, gt: Option<BBox>, pred: Option<BBox>) -> Self {
        Self {
            frame_index,
            gt,
            pred,
        }
    }
}

/// True-positive / false-positive / false-negative tallies.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MatchCounts {
    pub n_tp: usize,
    pub n_fp: usize,
    pub n_fn: usize,
}

/// Which overlap ratio drives the match decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OverlapKind {
    Iou,
    Iogt,
}

impl OverlapKind {
    pub fn apply(self, gt: &BBox, pred: &BBox) -> Result<f64, MetricError> {
        match self {
            OverlapKind::Iou => iou(gt, pred),
            OverlapKind::Iogt => iogt(gt, pred),
        }
    }
}

/// Intersection over union: shared area over combined area.
pub fn iou(gt: &BBox, pred: &BBox) -> Result<f64, MetricError> {
    let union = gt.union_area(pred);
    if union == 0.0 {
        return Err(MetricError::DegeneratePair);
    }
    Ok(gt.intersection_area(pred) / union)
}

/// Intersection over ground truth: shared area over ground-truth area.
pub fn iogt(gt: &BBox, pred: &BBox) -> Result<f64, MetricError> {
    if gt.area() == 0.0 {
        return Err(MetricError::DegenerateGroundTruth);
    }
    Ok(gt.intersection_area(pred) / gt.area())
}

/// Tracked-to-truth area ratio.
pub fn atb(gt: &BBox, pred: &BBox) -> Result<f64, MetricError> {
    if gt.area() == 0.0 {
        return Err(MetricError::DegenerateGroundTruth);
    }
    Ok(pred.area() / gt.area())
}

/// Match check: overlap at or above the threshold.
pub fn is_match(
    gt: &BBox,
    pred: &BBox,
    threshold: f64,
    overlap: OverlapKind,
) -> Result<bool, MetricError> {
    Ok(overlap.apply(gt, pred)? >= threshold)
}

/// Single-object match counting over the annotated frames.
pub fn count_matches(
    frames: &[FramePair],
    threshold: f64,
    overlap: OverlapKind,
) -> Result<MatchCounts, MetricError> {
    let mut counts = MatchCounts::default();
    let mut evaluated = 0usize;
    for f in frames {
        let Some(gt) = f.gt else { continue };
        evaluated += 1;
        match f.pred {
            None => counts.n_fn += 1,
            Some(pred) => {
                if is_match(&gt, &pred, threshold, overlap)? {
                    counts.n_tp += 1;
                } else {
                    counts.n_fp += 1;
                    counts.n_fn += 1;
                }
            }
        }
    }
    if evaluated == 0 {
        return Err(MetricError::NothingToEvaluate);
    }
    Ok(counts)
}

/// Precision, recall, and F-score from the match counts; all three are zero
/// when nothing matches.
pub fn fscore(
    frames: &[FramePair],
    threshold: f64,
    overlap: OverlapKind,
) -> Result<(f64, f64, f64), MetricError> {
    let c = count_matches(frames, threshold, overlap)?;
    let precision = ratio(c.n_tp, c.n_tp + c.n_fp);
    let recall = ratio(c.n_tp, c.n_tp + c.n_fn);
    let f = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    };
    Ok((precision, recall, f))
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Area-based F1: mean over annotated frames of the harmonic mean of the
/// per-frame area precision `|∩|/|T|` and recall `|∩|/|GT|`. A frame with no
/// overlap (or no prediction) scores zero.
pub fn af1(frames: &[FramePair]) -> Result<f64, MetricError> {
    let mut total = 0.0;
    let mut evaluated = 0usize;
    for f in frames {
        let Some(gt) = f.gt else { continue };
        evaluated += 1;
        total += af1_frame(&gt, f.pred.as_ref());
    }
    if evaluated == 0 {
        return Err(MetricError::NothingToEvaluate);
    }
    Ok(total / evaluated as f64)
}

fn af1_frame(gt: &BBox, pred: Option<&BBox>) -> f64 {
    let Some(pred) = pred else { return 0.0 };
    let shared = gt.intersection_area(pred);
    if shared == 0.0 {
        return 0.0;
    }
    let precision = shared / pred.area();
    let recall = shared / gt.area();
    2.0 * precision * recall / (precision + recall)
}

/// Object tracking accuracy: `1 - Σ(fn + fp) / Σ g`, with one ground-truth
/// box per annotated frame.
pub fn ota(frames: &[FramePair], threshold: f64) -> Result<f64, MetricError> {
    let c = count_matches(frames, threshold, OverlapKind::Iou)?;
    let annotated = frames.iter().filter(|f| f.gt.is_some()).count();
    Ok(1.0 - (c.n_fn + c.n_fp) as f64 / annotated as f64)
}

/// The seven-column aggregate over one set of frames. The F-scores use the
/// same threshold for the IoU and IoGT match rules; means are unweighted
/// over annotated frames.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricReport {
    pub iou_mean: f64,
    pub fscore_iou: f64,
    pub af1: f64,
    pub ota: f64,
    pub iogt_mean: f64,
    pub fscore_iogt: f64,
    pub atb_mean: f64,
    pub frames_evaluated: usize,
}

pub fn aggregate(frames: &[FramePair], threshold: f64) -> Result<MetricReport, MetricError> {
    let mut iou_sum = 0.0;
    let mut iogt_sum = 0.0;
    let mut atb_sum = 0.0;
    let mut predicted = 0usize;
    let mut evaluated = 0usize;
    for f in frames {
        let Some(gt) = f.gt else { continue };
        evaluated += 1;
        if let Some(pred) = f.pred {
            iou_sum += iou(&gt, &pred)?;
            iogt_sum += iogt(&gt, &pred)?;
            atb_sum += atb(&gt, &pred)?;
            predicted += 1;
        }
    }
    if evaluated == 0 {
        return Err(MetricError::NothingToEvaluate);
    }
    let (_, _, f_iou) = fscore(frames, threshold, OverlapKind::Iou)?;
    let (_, _, f_iogt) = fscore(frames, threshold, OverlapKind::Iogt)?;
    Ok(MetricReport {
        iou_mean: iou_sum / evaluated as f64,
        fscore_iou: f_iou,
        af1: af1(frames)?,
        ota: ota(frames, threshold)?,
        iogt_mean: iogt_sum / evaluated as f64,
        fscore_iogt: f_iogt,
        atb_mean: if predicted > 0 {
            atb_sum / predicted as f64
        } else {
            0.0
        },
        frames_evaluated: evaluated,
    })
}
