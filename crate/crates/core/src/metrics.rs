//! Evaluation: ring assignment with precision/recall/F-score, mean average
//! recall over IoU thresholds, adapted Rand error, and the weighted
//! cross-entropy + Dice segmentation loss.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::labels::{rasterize_instancemap, Annotation};
use crate::model::{ClassMap, DiskDetection, InstanceMap, Mask, PixelClass, ProbabilityMaps, DEFAULT_THETA};

pub const DEFAULT_CLOSE_FRAC: f64 = 0.6;
pub const DEFAULT_DIST_FRAC: f64 = 0.5;
/// IoU thresholds 0.50, 0.55, …, 0.95 in percent.
pub const IOU_THRESHOLDS_PCT: [u32; 10] = [50, 55, 60, 65, 70, 75, 80, 85, 90, 95];
/// Probability clamp applied before logarithms.
pub const LOSS_EPSILON: f64 = 1e-7;

/// Weights of the background cross-entropy, boundary Dice and pith
/// cross-entropy terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossWeights {
    pub background: f64,
    pub boundary: f64,
    pub pith: f64,
}

impl Default for LossWeights {
    fn default() -> Self {
        Self {
            background: 0.01,
            boundary: 1.0,
            pith: 0.1,
        }
    }
}

impl std::str::FromStr for LossWeights {
    type Err = String;

    /// Parses `"l1,l2,l3"`.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<f64> = s
            .split(',')
            .map(|p| p.trim().parse::<f64>().map_err(|e| format!("bad weight {p:?}: {e}")))
            .collect::<std::result::Result<_, _>>()?;
        match parts[..] {
            [background, boundary, pith] if parts.iter().all(|w| *w >= 0.0 && w.is_finite()) => Ok(Self {
                background,
                boundary,
                pith,
            }),
            _ => Err(format!("expected three non-negative weights, got {s:?}")),
        }
    }
}

/// Ring assignment thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AssignParams {
    /// Fraction of rays that must be close for a pair to be admissible.
    pub close_frac: f64,
    /// A ray is close when its radial error is at most this fraction of the
    /// local ground-truth ring width.
    pub dist_frac: f64,
}

impl Default for AssignParams {
    fn default() -> Self {
        Self {
            close_frac: DEFAULT_CLOSE_FRAC,
            dist_frac: DEFAULT_DIST_FRAC,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchedRing {
    pub gt: usize,
    pub det: usize,
    /// Absolute radial error on every ray of the ground-truth fan.
    pub errors: Vec<f64>,
}

impl MatchedRing {
    pub fn mean_error(&self) -> f64 {
        self.errors.iter().sum::<f64>() / self.errors.len() as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssignmentResult {
    pub pairs: Vec<MatchedRing>,
    pub unmatched_gt: Vec<usize>,
    pub unmatched_det: Vec<usize>,
    pub params: AssignParams,
}

impl AssignmentResult {
    pub fn true_positives(&self) -> usize {
        self.pairs.len()
    }

    pub fn false_positives(&self) -> usize {
        self.unmatched_det.len()
    }

    pub fn false_negatives(&self) -> usize {
        self.unmatched_gt.len()
    }

    pub fn pair_for_gt(&self, gt: usize) -> Option<&MatchedRing> {
        self.pairs.iter().find(|p| p.gt == gt)
    }
}

/// Local width of ground-truth ring `g` along ray `j`.
fn gt_ring_width(gt: &DiskDetection, g: usize, j: usize) -> f64 {
    let rings = gt.rings();
    let r = rings[g].radii()[j];
    let inner = if g == 0 { gt.pith().radii()[j] } else { rings[g - 1].radii()[j] };
    let inward = r - inner;
    match rings.get(g + 1) {
        Some(next) => 0.5 * (inward + (next.radii()[j] - r)),
        None => inward,
    }
}

/// One-to-one greedy assignment of detected rings to ground-truth rings.
///
/// A ray of detection `d` is close to ground truth `g` when the radial gap is
/// within `dist_frac` of the local ring width; pairs with at least
/// `close_frac · Θ` close rays are admissible and matched in increasing
/// order of mean radial error. Detections are re-expressed on the
/// ground-truth ray fan first.
pub fn assign_rings(det: &DiskDetection, gt: &DiskDetection, params: AssignParams) -> Result<AssignmentResult> {
    let det = det.resample(gt.origin(), gt.theta())?;
    let theta = gt.theta();
    let (n_gt, n_det) = (gt.rings().len(), det.rings().len());

    let widths: Vec<Vec<f64>> = (0..n_gt)
        .map(|g| (0..theta).map(|j| gt_ring_width(gt, g, j)).collect())
        .collect();
    let needed = params.close_frac * theta as f64;

    let mut candidates: Vec<(f64, usize, usize, Vec<f64>)> = Vec::new();
    for (g, gt_ring) in gt.rings().iter().enumerate() {
        for (d, det_ring) in det.rings().iter().enumerate() {
            let errors: Vec<f64> = gt_ring
                .radii()
                .iter()
                .zip(det_ring.radii())
                .map(|(a, b)| (a - b).abs())
                .collect();
            let close = errors
                .iter()
                .zip(&widths[g])
                .filter(|(e, w)| **e <= params.dist_frac * **w)
                .count();
            if close as f64 >= needed {
                let mean = errors.iter().sum::<f64>() / theta as f64;
                candidates.push((mean, g, d, errors));
            }
        }
    }
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let mut gt_used = vec![false; n_gt];
    let mut det_used = vec![false; n_det];
    let mut pairs = Vec::new();
    for (_, g, d, errors) in candidates {
        if !gt_used[g] && !det_used[d] {
            gt_used[g] = true;
            det_used[d] = true;
            pairs.push(MatchedRing { gt: g, det: d, errors });
        }
    }
    pairs.sort_by_key(|p| p.gt);
    Ok(AssignmentResult {
        pairs,
        unmatched_gt: (0..n_gt).filter(|&g| !gt_used[g]).collect(),
        unmatched_det: (0..n_det).filter(|&d| !det_used[d]).collect(),
        params,
    })
}

/// Precision, recall and F-score in percent.
pub fn precision_recall_fscore(assignment: &AssignmentResult) -> (f64, f64, f64) {
    prf_from_counts(
        assignment.true_positives(),
        assignment.false_positives(),
        assignment.false_negatives(),
    )
}

pub fn prf_from_counts(tp: usize, fp: usize, fn_: usize) -> (f64, f64, f64) {
    if tp == 0 {
        return if fp == 0 && fn_ == 0 {
            (100.0, 100.0, 100.0)
        } else {
            (0.0, 0.0, 0.0)
        };
    }
    let p = 100.0 * tp as f64 / (tp + fp) as f64;
    let r = 100.0 * tp as f64 / (tp + fn_) as f64;
    (p, r, harmonic_mean(p, r))
}

pub fn harmonic_mean(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

fn check_same_dims(a: &InstanceMap, b: &InstanceMap) -> Result<()> {
    if a.dims() != b.dims() {
        return Err(Error::validation(format!(
            "instance maps differ in size: {}x{} vs {}x{}",
            a.width(),
            a.height(),
            b.width(),
            b.height()
        )));
    }
    Ok(())
}

/// Adapted Rand error over pixels that are foreground in both maps.
///
/// `1 − 2·P·R/(P+R)` with Rand precision `Σn²/Σa²` and recall `Σn²/Σb²`
/// from the contingency table `n` (detection rows `a`, ground-truth columns
/// `b`). Zero when neither map has foreground; one when only one does.
pub fn adapted_rand_error(det: &InstanceMap, gt: &InstanceMap) -> Result<f64> {
    check_same_dims(det, gt)?;
    let mut table: HashMap<(u32, u32), u64> = HashMap::new();
    for (&d, &g) in det.data().iter().zip(gt.data()) {
        if d != 0 && g != 0 {
            *table.entry((d, g)).or_default() += 1;
        }
    }
    if table.is_empty() {
        let any_fg = |m: &InstanceMap| m.data().iter().any(|&v| v != 0);
        return Ok(if any_fg(det) || any_fg(gt) { 1.0 } else { 0.0 });
    }
    let mut rows: HashMap<u32, u64> = HashMap::new();
    let mut cols: HashMap<u32, u64> = HashMap::new();
    let mut sum_n2: u128 = 0;
    for (&(d, g), &n) in &table {
        *rows.entry(d).or_default() += n;
        *cols.entry(g).or_default() += n;
        sum_n2 += (n as u128) * (n as u128);
    }
    let sq = |m: &HashMap<u32, u64>| m.values().map(|&v| (v as u128) * (v as u128)).sum::<u128>();
    let precision = sum_n2 as f64 / sq(&rows) as f64;
    let recall = sum_n2 as f64 / sq(&cols) as f64;
    Ok(1.0 - 2.0 * precision * recall / (precision + recall))
}

/// Pixel areas per positive id and their pairwise intersections.
struct Overlaps {
    det_area: BTreeMap<u32, u64>,
    gt_area: BTreeMap<u32, u64>,
    inter: BTreeMap<(u32, u32), u64>,
}

fn overlaps(det: &InstanceMap, gt: &InstanceMap) -> Overlaps {
    let mut o = Overlaps {
        det_area: BTreeMap::new(),
        gt_area: BTreeMap::new(),
        inter: BTreeMap::new(),
    };
    for (&d, &g) in det.data().iter().zip(gt.data()) {
        if d != 0 {
            *o.det_area.entry(d).or_default() += 1;
        }
        if g != 0 {
            *o.gt_area.entry(g).or_default() += 1;
        }
        if d != 0 && g != 0 {
            *o.inter.entry((d, g)).or_default() += 1;
        }
    }
    o
}

/// Recall averaged over IoU thresholds 0.50:0.05:0.95.
///
/// For each threshold detections and ground-truth instances are matched
/// greedily by descending IoU (ties: lower ground-truth id, then lower
/// detection id); a pair counts when its IoU reaches the threshold.
/// IoU comparisons are exact rational comparisons on pixel counts.
pub fn mean_average_recall(det: &InstanceMap, gt: &InstanceMap) -> Result<f64> {
    check_same_dims(det, gt)?;
    let o = overlaps(det, gt);
    if o.gt_area.is_empty() {
        return Ok(if o.det_area.is_empty() { 1.0 } else { 0.0 });
    }
    // (intersection, union, gt, det)
    let mut pairs: Vec<(u64, u64, u32, u32)> = o
        .inter
        .iter()
        .map(|(&(d, g), &i)| (i, o.det_area[&d] + o.gt_area[&g] - i, g, d))
        .collect();
    pairs.sort_by(|a, b| {
        let lhs = a.0 as u128 * b.1 as u128;
        let rhs = b.0 as u128 * a.1 as u128;
        rhs.cmp(&lhs).then(a.2.cmp(&b.2)).then(a.3.cmp(&b.3))
    });
    let n_gt = o.gt_area.len() as f64;
    let mut total = 0.0;
    for &t in &IOU_THRESHOLDS_PCT {
        let mut used_gt = BTreeSet::new();
        let mut used_det = BTreeSet::new();
        for &(i, u, g, d) in &pairs {
            if 100 * i as u128 >= t as u128 * u as u128
                && !used_gt.contains(&g)
                && !used_det.contains(&d)
            {
                used_gt.insert(g);
                used_det.insert(d);
            }
        }
        total += used_gt.len() as f64 / n_gt;
    }
    Ok(total / IOU_THRESHOLDS_PCT.len() as f64)
}

/// Copy of `map` with instance `id` turned into background.
pub fn drop_instance(map: &InstanceMap, id: u32) -> InstanceMap {
    map.map(|&v| if v == id { 0 } else { v })
}

/// `λ1·CE(background) + λ2·Dice(boundary) + λ3·CE(pith)`.
///
/// Cross-entropies are pixel means of binary cross-entropy with
/// probabilities clamped to `[ε, 1−ε]`. The Dice term is
/// `1 − 2Σpg / (Σp + Σg + ε)`, taken as 0 when both sums vanish.
pub fn segmentation_loss(pred: &ProbabilityMaps, gt: &ClassMap, w: &LossWeights) -> Result<f64> {
    if (pred.width(), pred.height()) != gt.dims() {
        return Err(Error::validation(format!(
            "prediction is {}x{} but ground truth is {}x{}",
            pred.width(),
            pred.height(),
            gt.width(),
            gt.height()
        )));
    }
    let bce = |class: PixelClass| -> f64 {
        let plane = pred.plane(class);
        let sum: f64 = plane
            .data()
            .iter()
            .zip(gt.data())
            .map(|(&p, &g)| {
                let p = (p as f64).clamp(LOSS_EPSILON, 1.0 - LOSS_EPSILON);
                if g == class { -p.ln() } else { -(1.0 - p).ln() }
            })
            .sum();
        sum / plane.data().len() as f64
    };
    let dice = {
        let plane = pred.plane(PixelClass::Boundary);
        let (mut inter, mut sum_p, mut sum_g) = (0.0f64, 0.0f64, 0.0f64);
        for (&p, &g) in plane.data().iter().zip(gt.data()) {
            let g = (g == PixelClass::Boundary) as u8 as f64;
            inter += p as f64 * g;
            sum_p += p as f64;
            sum_g += g;
        }
        if sum_p + sum_g == 0.0 {
            0.0
        } else {
            1.0 - 2.0 * inter / (sum_p + sum_g + LOSS_EPSILON)
        }
    };
    let mut loss = 0.0;
    if w.background != 0.0 {
        loss += w.background * bce(PixelClass::Background);
    }
    if w.boundary != 0.0 {
        loss += w.boundary * dice;
    }
    if w.pith != 0.0 {
        loss += w.pith * bce(PixelClass::Pith);
    }
    Ok(loss.max(0.0))
}

/// One row of the per-disk evaluation table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub disk: String,
    #[serde(rename = "P")]
    pub precision: f64,
    #[serde(rename = "R")]
    pub recall: f64,
    #[serde(rename = "F")]
    pub fscore: f64,
    #[serde(rename = "mAR")]
    pub mar: f64,
    #[serde(rename = "ARAND")]
    pub arand: f64,
    #[serde(rename = "TP")]
    pub tp: usize,
    #[serde(rename = "FP")]
    pub fp: usize,
    #[serde(rename = "FN")]
    pub fn_: usize,
}

impl MetricsReport {
    pub const CSV_HEADER: &'static str = "disk,P,R,F,mAR,ARAND";

    /// Percents with one decimal, ratios with three.
    pub fn csv_row(&self) -> String {
        format!(
            "{},{:.1},{:.1},{:.1},{:.3},{:.3}",
            self.disk, self.precision, self.recall, self.fscore, self.mar, self.arand
        )
    }
}

/// Unweighted per-disk mean of every score; counts are summed.
pub fn aggregate_reports(reports: &[MetricsReport], name: &str) -> Result<MetricsReport> {
    if reports.is_empty() {
        return Err(Error::validation("cannot aggregate an empty list of reports"));
    }
    let n = reports.len() as f64;
    let mean = |f: fn(&MetricsReport) -> f64| reports.iter().map(f).sum::<f64>() / n;
    Ok(MetricsReport {
        disk: name.to_string(),
        precision: mean(|r| r.precision),
        recall: mean(|r| r.recall),
        fscore: mean(|r| r.fscore),
        mar: mean(|r| r.mar),
        arand: mean(|r| r.arand),
        tp: reports.iter().map(|r| r.tp).sum(),
        fp: reports.iter().map(|r| r.fp).sum(),
        fn_: reports.iter().map(|r| r.fn_).sum(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalOptions {
    pub assign: AssignParams,
    /// Drop the pith instance from both maps before mAR and ARAND.
    pub exclude_pith: bool,
    pub theta: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            assign: AssignParams::default(),
            exclude_pith: false,
            theta: DEFAULT_THETA,
        }
    }
}

/// Full per-disk evaluation of a detection document against ground truth.
/// Both are expressed on a fan centered at the ground-truth pith centroid.
pub fn evaluate_disk(
    det: &Annotation,
    gt: &Annotation,
    mask: &Mask,
    opts: &EvalOptions,
) -> Result<(MetricsReport, AssignmentResult)> {
    let gt_det = gt.to_detection(opts.theta)?;
    let det_det = det.to_detection_from(gt_det.origin(), opts.theta)?;
    let assignment = assign_rings(&det_det, &gt_det, opts.assign)?;
    let (precision, recall, fscore) = precision_recall_fscore(&assignment);

    let mut det_map = rasterize_instancemap(det, mask)?;
    let mut gt_map = rasterize_instancemap(gt, mask)?;
    if opts.exclude_pith {
        det_map = drop_instance(&det_map, 1);
        gt_map = drop_instance(&gt_map, 1);
    }
    let report = MetricsReport {
        disk: gt.image_name.clone(),
        precision,
        recall,
        fscore,
        mar: mean_average_recall(&det_map, &gt_map)?,
        arand: adapted_rand_error(&det_map, &gt_map)?,
        tp: assignment.true_positives(),
        fp: assignment.false_positives(),
        fn_: assignment.false_negatives(),
    };
    Ok((report, assignment))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Grid, RingCurve};

    fn disk(radii: &[f64], pith: f64) -> DiskDetection {
        let o = [200.0, 200.0];
        DiskDetection::new(
            RingCurve::circle(o, pith, 360).unwrap(),
            radii.iter().map(|&r| RingCurve::circle(o, r, 360).unwrap()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn identical_detection_matches_everything() {
        let gt = disk(&[30.0, 60.0, 90.0], 5.0);
        let a = assign_rings(&gt, &gt, AssignParams::default()).unwrap();
        assert_eq!(a.true_positives(), 3);
        assert!(a.pairs.iter().all(|p| p.errors.iter().all(|&e| e == 0.0)));
    }

    #[test]
    fn far_detection_is_unmatched() {
        let gt = disk(&[30.0, 60.0], 5.0);
        let det = disk(&[150.0], 5.0);
        let a = assign_rings(&det, &gt, AssignParams::default()).unwrap();
        assert_eq!(a.true_positives(), 0);
        assert_eq!(a.unmatched_det, vec![0]);
    }

    #[test]
    fn three_ring_hand_example() {
        // widths: ring0 = (25+30)/2, ring1 = 30, ring2 = 30
        let gt = disk(&[30.0, 60.0, 90.0], 5.0);
        let det = disk(&[31.0, 59.0, 150.0], 5.0);
        let a = assign_rings(&det, &gt, AssignParams::default()).unwrap();
        let pairs: Vec<_> = a.pairs.iter().map(|p| (p.gt, p.det)).collect();
        assert_eq!(pairs, vec![(0, 0), (1, 1)]);
        assert_eq!(a.unmatched_gt, vec![2]);
        assert_eq!(a.unmatched_det, vec![2]);
        assert_eq!((a.true_positives(), a.false_positives(), a.false_negatives()), (2, 1, 1));
    }

    #[test]
    fn empty_ground_truth_leaves_detections_unmatched() {
        let gt = disk(&[], 5.0);
        let det = disk(&[20.0, 40.0], 5.0);
        let a = assign_rings(&det, &gt, AssignParams::default()).unwrap();
        assert_eq!(a.unmatched_det, vec![0, 1]);
        assert_eq!(precision_recall_fscore(&a), (0.0, 0.0, 0.0));
    }

    #[test]
    fn prf_conventions() {
        let (p, r, f) = prf_from_counts(21, 2, 1);
        assert_eq!(format!("{p:.1} {r:.1} {f:.1}"), "91.3 95.5 93.3");
        assert_eq!(prf_from_counts(0, 5, 5), (0.0, 0.0, 0.0));
        assert_eq!(prf_from_counts(10, 0, 0), (100.0, 100.0, 100.0));
        assert_eq!(prf_from_counts(0, 0, 0), (100.0, 100.0, 100.0));
    }

    fn map(w: usize, h: usize, v: &[u32]) -> InstanceMap {
        Grid::from_vec(w, h, v.to_vec()).unwrap()
    }

    #[test]
    fn arand_hand_example() {
        let gt = map(2, 2, &[1, 1, 2, 2]);
        let det = map(2, 2, &[1, 1, 1, 2]);
        let v = adapted_rand_error(&det, &gt).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-12, "{v}");
        assert_eq!(adapted_rand_error(&gt, &gt).unwrap(), 0.0);
        let empty = map(2, 2, &[0; 4]);
        assert_eq!(adapted_rand_error(&empty, &empty).unwrap(), 0.0);
        assert_eq!(adapted_rand_error(&empty, &gt).unwrap(), 1.0);
        assert!(adapted_rand_error(&map(1, 4, &[1; 4]), &gt).is_err());
    }

    #[test]
    fn mar_examples() {
        let gt = map(2, 2, &[1, 1, 2, 2]);
        assert_eq!(mean_average_recall(&gt, &gt).unwrap(), 1.0);
        assert_eq!(mean_average_recall(&map(2, 2, &[0; 4]), &gt).unwrap(), 0.0);
        assert_eq!(mean_average_recall(&map(2, 2, &[0; 4]), &map(2, 2, &[0; 4])).unwrap(), 1.0);
        assert_eq!(mean_average_recall(&gt, &map(2, 2, &[0; 4])).unwrap(), 0.0);

        // gt instance 1 has 7 pixels; det covers exactly 7 of 10 in its union
        let mut g = vec![0u32; 20];
        let mut d = vec![0u32; 20];
        g[..7].fill(1);
        g[10..15].fill(2);
        d[..7].fill(1);
        d[7..10].fill(1);
        let v = mean_average_recall(&map(20, 1, &d), &map(20, 1, &g)).unwrap();
        assert!((v - 0.25).abs() < 1e-12, "{v}");
    }

    #[test]
    fn loss_hand_example() {
        let zero_one = |v: [f32; 2]| Grid::from_vec(2, 1, v.to_vec()).unwrap();
        let q = zero_one([0.25, 0.25]);
        let maps = ProbabilityMaps::new([q.clone(), q.clone(), q.clone(), q], 1e-6).unwrap();
        let gt = Grid::from_vec(2, 1, vec![PixelClass::Background, PixelClass::Boundary]).unwrap();
        let l = segmentation_loss(&maps, &gt, &LossWeights::default()).unwrap();
        let expected = 0.01 * (-(0.25f64).ln() - (0.75f64).ln()) / 2.0
            + 1.0 * (1.0 - 0.5 / 1.5)
            + 0.1 * -(0.75f64).ln();
        assert!((l - expected).abs() < 1e-6);
        assert!((l - 0.7038).abs() < 1e-3, "{l}");
        let zero = LossWeights { background: 0.0, boundary: 0.0, pith: 0.0 };
        assert_eq!(segmentation_loss(&maps, &gt, &zero).unwrap(), 0.0);
    }

    #[test]
    fn perfect_prediction_loss_vanishes() {
        let classes = [PixelClass::Background, PixelClass::Boundary, PixelClass::Pith, PixelClass::Ring];
        let gt = Grid::from_vec(2, 2, classes.to_vec()).unwrap();
        let l = segmentation_loss(&ProbabilityMaps::one_hot(&gt), &gt, &LossWeights::default()).unwrap();
        assert!(l <= 1e-5, "{l}");
    }

    #[test]
    fn weights_parse() {
        let w: LossWeights = "0.01,1.0,0.1".parse().unwrap();
        assert_eq!(w, LossWeights::default());
        assert!("1,2".parse::<LossWeights>().is_err());
        assert!("1,-2,3".parse::<LossWeights>().is_err());
    }

    #[test]
    fn aggregate() {
        let r = |f: f64| MetricsReport {
            disk: "d".into(),
            precision: f,
            recall: f,
            fscore: f,
            mar: 0.5,
            arand: 0.1,
            tp: 1,
            fp: 0,
            fn_: 0,
        };
        let single = aggregate_reports(&[r(90.0)], "d").unwrap();
        assert_eq!(single, r(90.0));
        assert_eq!(aggregate_reports(&[r(90.0), r(70.0)], "m").unwrap().fscore, 80.0);
        assert!(aggregate_reports(&[], "m").is_err());
        assert_eq!(r(93.33).csv_row(), "d,93.3,93.3,93.3,0.500,0.100");
    }
}
