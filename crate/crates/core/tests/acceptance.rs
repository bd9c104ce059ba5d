//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any fail.
//!
//! Reference values come from oracles written here, independently of the
//! library code paths they check.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use ringtrace::labels::ingest_annotation;
use ringtrace::metrics::{
    adapted_rand_error, evaluate_disk, harmonic_mean, mean_average_recall, segmentation_loss, EvalOptions,
    LossWeights, IOU_THRESHOLDS_PCT,
};
use ringtrace::resample::{lanczos_kernel, resize_longest, sample_polar_strip, PolarStrip};
use ringtrace::scorer::{gradient_scorer, map_scorer, GradientScorer, ScorerPrediction};
use ringtrace::synth::{generate_disk, SynthConfig, SyntheticDisk};
use ringtrace::tracer::{resume_trace, trace_rings, TraceConfig};
use ringtrace::{Annotation, Grid, ImageRGB, InstanceMap, PixelClass, ProbabilityMaps, RingCurve};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn round1(v: f64) -> f64 {
    (v * 10.0).round() / 10.0
}

// ---------------------------------------------------------------- 1

/// (disk, P, R, F) as published.
const TABLE_1: [(&str, f64, f64, f64); 9] = [
    ("F07d", 91.3, 95.5, 93.3),
    ("F08b", 91.7, 95.7, 93.6),
    ("F03c", 95.7, 92.7, 93.6),
    ("F04c", 76.9, 95.2, 85.1),
    ("L03c", 82.4, 87.5, 84.9),
    ("F03e", 60.9, 66.7, 63.6),
    ("L02a", 16.7, 18.8, 17.7),
    ("L04e", 17.7, 20.0, 18.8),
    ("L02b", 18.8, 20.0, 19.4),
];

fn table_consistency() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    for (disk, p, r, f) in TABLE_1 {
        let got = round1(harmonic_mean(p, r));
        if (got - f).abs() > 0.1 + 1e-9 {
            bad.push(format!("{disk}: 2PR/(P+R) = {got:.1}, published {f:.1}"));
        }
    }
    check(start.elapsed() < Duration::from_secs(1), || "took over 1 s".into())?;
    if bad.is_empty() {
        Ok(format!("{} rows within 0.1", TABLE_1.len()))
    } else {
        Err(bad.join("; "))
    }
}

// ---------------------------------------------------------------- 2

fn loss_fixture() -> Outcome {
    let q = Grid::filled(2, 1, 0.25f32);
    let uniform = ProbabilityMaps::new([q.clone(), q.clone(), q.clone(), q], 1e-6).map_err(|e| e.to_string())?;
    let gt = Grid::from_vec(2, 1, vec![PixelClass::Background, PixelClass::Boundary]).unwrap();
    let l = segmentation_loss(&uniform, &gt, &LossWeights::default()).map_err(|e| e.to_string())?;
    check((l - 0.7038).abs() <= 1e-3, || format!("hand example gives {l}"))?;

    let classes = Grid::from_vec(2, 2, PixelClass::ALL.to_vec()).unwrap();
    let one_hot = segmentation_loss(&ProbabilityMaps::one_hot(&classes), &classes, &LossWeights::default())
        .map_err(|e| e.to_string())?;
    check(one_hot <= 1e-5, || format!("one-hot gives {one_hot}"))?;

    let d = LossWeights::default();
    check((d.background, d.boundary, d.pith) == (0.01, 1.0, 0.1), || format!("defaults are {d:?}"))?;
    let out = Command::new(env!("CARGO_BIN_EXE_ringtrace"))
        .args(["loss", "--help"])
        .output()
        .map_err(|e| e.to_string())?;
    let help = String::from_utf8_lossy(&out.stdout);
    check(help.contains("[default: 0.01,1.0,0.1]"), || format!("help lacks default: {help}"))?;
    let parsed: LossWeights = "0.01,1.0,0.1".parse()?;
    check(parsed == d, || "help default does not parse to the compiled default".into())?;
    Ok(format!("loss {l:.4}, one-hot {one_hot:.1e}, help default matches"))
}

// ---------------------------------------------------------------- 3

/// Random Voronoi partitions with some cells left as background.
fn random_instance_map(rng: &mut ChaCha8Rng, w: usize, h: usize, max_ids: u32) -> InstanceMap {
    let n_ids = rng.random_range(0..=max_ids);
    let n_cells = rng.random_range(1..=6);
    let seeds: Vec<(f64, f64, u32)> = (0..n_cells)
        .map(|_| {
            (
                rng.random::<f64>() * w as f64,
                rng.random::<f64>() * h as f64,
                if n_ids == 0 { 0 } else { rng.random_range(0..=n_ids) },
            )
        })
        .collect();
    let data = (0..w * h)
        .map(|i| {
            let (x, y) = ((i % w) as f64 + 0.5, (i / w) as f64 + 0.5);
            seeds
                .iter()
                .min_by(|a, b| {
                    let da = (a.0 - x).powi(2) + (a.1 - y).powi(2);
                    let db = (b.0 - x).powi(2) + (b.1 - y).powi(2);
                    da.total_cmp(&db)
                })
                .unwrap()
                .2
        })
        .collect();
    Grid::from_vec(w, h, data).unwrap()
}

/// A ground-truth map and a detection derived from it by moving cell
/// boundaries, flipping pixels and relabeling.
fn random_pair(seed: u64) -> (InstanceMap, InstanceMap) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = rng.random_range(1..=32);
    let h = rng.random_range(1..=32);
    let gt = random_instance_map(&mut rng, w, h, 4);
    if rng.random_bool(0.3) {
        return (random_instance_map(&mut rng, w, h, 4), gt);
    }
    let mut perm = [1u32, 2, 3, 4];
    for i in (1..perm.len()).rev() {
        perm.swap(i, rng.random_range(0..=i));
    }
    let flip = rng.random::<f64>() * 0.3;
    let data = gt
        .data()
        .iter()
        .map(|&v| {
            if rng.random_bool(flip) {
                rng.random_range(0..=4)
            } else if v == 0 {
                0
            } else {
                perm[v as usize - 1]
            }
        })
        .collect();
    (Grid::from_vec(w, h, data).unwrap(), gt)
}

/// Rand error from explicit ordered pixel pairs.
fn arand_oracle(det: &InstanceMap, gt: &InstanceMap) -> f64 {
    let (d, g) = (det.data(), gt.data());
    let fg: Vec<usize> = (0..d.len()).filter(|&i| d[i] != 0 && g[i] != 0).collect();
    if fg.is_empty() {
        let any = d.iter().chain(g).any(|&v| v != 0);
        return if any { 1.0 } else { 0.0 };
    }
    let (mut both, mut same_det, mut same_gt) = (0u64, 0u64, 0u64);
    for &i in &fg {
        for &j in &fg {
            let sd = d[i] == d[j];
            let sg = g[i] == g[j];
            both += (sd && sg) as u64;
            same_det += sd as u64;
            same_gt += sg as u64;
        }
    }
    let p = both as f64 / same_det as f64;
    let r = both as f64 / same_gt as f64;
    1.0 - 2.0 * p * r / (p + r)
}

fn max_matching(adj: &[Vec<usize>], n_right: usize) -> usize {
    fn augment(u: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                if owner[v].is_none() || augment(owner[v].unwrap(), adj, seen, owner) {
                    owner[v] = Some(u);
                    return true;
                }
            }
        }
        false
    }
    let mut owner = vec![None; n_right];
    (0..adj.len())
        .filter(|&u| augment(u, adj, &mut vec![false; n_right], &mut owner))
        .count()
}

/// Per threshold: maximum one-to-one matching among pairs whose IoU,
/// counted pixel by pixel, reaches the threshold.
fn mar_oracle(det: &InstanceMap, gt: &InstanceMap) -> f64 {
    let ids = |m: &InstanceMap| {
        let mut v: Vec<u32> = m.data().iter().copied().filter(|&x| x != 0).collect();
        v.sort();
        v.dedup();
        v
    };
    let (dids, gids) = (ids(det), ids(gt));
    if gids.is_empty() {
        return if dids.is_empty() { 1.0 } else { 0.0 };
    }
    let iou = |g: u32, d: u32| -> (u64, u64) {
        let (mut inter, mut union) = (0u64, 0u64);
        for (&a, &b) in det.data().iter().zip(gt.data()) {
            inter += (a == d && b == g) as u64;
            union += (a == d || b == g) as u64;
        }
        (inter, union)
    };
    let table: Vec<Vec<(u64, u64)>> = gids.iter().map(|&g| dids.iter().map(|&d| iou(g, d)).collect()).collect();
    let mut total = 0.0;
    for &t in &IOU_THRESHOLDS_PCT {
        let adj: Vec<Vec<usize>> = table
            .iter()
            .map(|row| {
                (0..row.len())
                    .filter(|&k| row[k].0 > 0 && 100 * row[k].0 >= t as u64 * row[k].1)
                    .collect()
            })
            .collect();
        total += max_matching(&adj, dids.len()) as f64 / gids.len() as f64;
    }
    total / IOU_THRESHOLDS_PCT.len() as f64
}

fn metric_oracles() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for seed in 0..50 {
        let (det, gt) = random_pair(1000 + seed);
        let a = adapted_rand_error(&det, &gt).map_err(|e| e.to_string())?;
        let o = arand_oracle(&det, &gt);
        worst = worst.max((a - o).abs());
        check((a - o).abs() <= 1e-9, || format!("seed {seed}: ARAND {a} vs oracle {o}"))?;
        let m = mean_average_recall(&det, &gt).map_err(|e| e.to_string())?;
        let mo = mar_oracle(&det, &gt);
        check(m == mo, || format!("seed {seed}: mAR {m} vs oracle {mo}"))?;
    }
    let t = start.elapsed();
    check(t < Duration::from_secs(10), || format!("took {t:.2?}"))?;
    Ok(format!("50 pairs, max ARAND deviation {worst:.1e}, mAR exact, {t:.2?}"))
}

// ---------------------------------------------------------------- 4

fn kernel_closed_forms() -> Outcome {
    check(lanczos_kernel(0.0, 3) == 1.0, || "L(0) != 1".into())?;
    for k in [-2.0, -1.0, 1.0, 2.0] {
        let v = lanczos_kernel(k, 3);
        check(v == 0.0, || format!("L({k}) = {v}"))?;
    }
    let half = lanczos_kernel(0.5, 3);
    let expected = 6.0 / (std::f64::consts::PI * std::f64::consts::PI);
    check((half - expected).abs() <= 1e-12, || format!("L(0.5) = {half}, expected {expected}"))?;
    Ok(format!("L(0.5) = {half:.15}"))
}

// ---------------------------------------------------------------- 5

fn synthetic_disks() -> Vec<SyntheticDisk> {
    (1..=10u64)
        .into_par_iter()
        .map(|seed| {
            generate_disk(&SynthConfig::new(1500, 8, seed).with_noise(0.02).with_eccentricity(0.1)).unwrap()
        })
        .collect()
}

fn end_to_end(disks: &[SyntheticDisk]) -> Outcome {
    let mut lines = Vec::new();
    let mut slowest = Duration::ZERO;
    for disk in disks {
        let gt = disk.annotation.to_detection(360).map_err(|e| e.to_string())?;
        let start = Instant::now();
        let out = trace_rings(&disk.image, gt.pith(), &disk.mask, &GradientScorer::default(), &TraceConfig::default())
            .map_err(|e| e.to_string())?;
        let t = start.elapsed();
        slowest = slowest.max(t);
        let det = Annotation::from_detection(&out.detection, "det", 1500, 1500, None);
        let (r, _) = evaluate_disk(&det, &disk.annotation, &disk.mask, &EvalOptions::default())
            .map_err(|e| e.to_string())?;
        let name = &disk.annotation.image_name;
        check(r.fscore >= 95.0 && r.mar >= 0.90 && r.arand <= 0.05, || {
            format!("{name}: F {:.1} mAR {:.3} ARAND {:.3}", r.fscore, r.mar, r.arand)
        })?;
        check(t <= Duration::from_secs(10), || format!("{name}: trace took {t:.2?}"))?;
        lines.push(format!("{:.0}/{:.2}/{:.3}", r.fscore, r.mar, r.arand));
    }
    Ok(format!("F/mAR/ARAND {}; slowest trace {slowest:.2?}", lines.join(" ")))
}

// ---------------------------------------------------------------- 6

fn mean_abs_error(a: &RingCurve, b: &RingCurve) -> f64 {
    a.radii().iter().zip(b.radii()).map(|(x, y)| (x - y).abs()).sum::<f64>() / a.radii().len() as f64
}

fn error_propagation(disk: &SyntheticDisk) -> Outcome {
    let gt = disk.annotation.to_detection(360).map_err(|e| e.to_string())?;
    let perturbed = gt.rings()[0].offset(10.0).map_err(|e| e.to_string())?;
    // predicts one ring width from wherever the current curve is, so its
    // window never contains the true boundary 10 px further in
    let gap = SynthConfig::new(1500, 8, 1).ring_gap;
    let step = move |strip: &PolarStrip| -> ringtrace::Result<ScorerPrediction> {
        let n = strip.theta();
        Ok(ScorerPrediction {
            offsets: vec![gap; n],
            background: vec![false; n],
            confidence: vec![1.0; n],
        })
    };
    let cfg = TraceConfig {
        max_rings: gt.rings().len(),
        ..TraceConfig::default()
    };
    let out = resume_trace(&disk.image, gt.pith(), vec![perturbed], &disk.mask, &step, &cfg)
        .map_err(|e| e.to_string())?;
    let later = &out.detection.rings()[1..];
    check(!later.is_empty(), || "no rings traced after the perturbed one".into())?;
    let errors: Vec<f64> = later
        .iter()
        .zip(&gt.rings()[1..])
        .map(|(d, g)| mean_abs_error(d, g))
        .collect();
    check(errors.iter().all(|&e| e >= 5.0), || format!("errors {errors:.2?}"))?;
    Ok(format!("{} later rings, errors {:.1?} px", errors.len(), errors))
}

// ---------------------------------------------------------------- 7

fn resize_contract() -> Outcome {
    let constant = ImageRGB::filled(3500, 2000, [137, 61, 200]).unwrap();
    let out = resize_longest(&constant, 1500, 3).map_err(|e| e.to_string())?;
    check((out.width(), out.height()) == (1500, 857), || {
        format!("3500x2000 -> {}x{}", out.width(), out.height())
    })?;
    check(out.data().chunks(3).all(|p| p == [137, 61, 200]), || "constant not preserved".into())?;

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let data: Vec<u8> = (0..640 * 410 * 3).map(|_| rng.random()).collect();
    let noisy = ImageRGB::new(640, 410, data).unwrap();
    let a = resize_longest(&noisy, 333, 3).map_err(|e| e.to_string())?;
    let b = resize_longest(&noisy, 333, 3).map_err(|e| e.to_string())?;
    check(a == b, || "repeated resize differs".into())?;
    Ok(format!("1500x857, constant kept, repeat bit-identical ({}x{})", a.width(), a.height()))
}

// ---------------------------------------------------------------- 8

fn round_trip(disks: &[SyntheticDisk]) -> Outcome {
    for disk in disks {
        let back = ingest_annotation(&disk.annotation.to_json()).map_err(|e| e.to_string())?;
        let (r, _) = evaluate_disk(&back, &back, &disk.mask, &EvalOptions::default()).map_err(|e| e.to_string())?;
        let name = &disk.annotation.image_name;
        check(r.fscore == 100.0 && r.arand == 0.0 && r.mar == 1.0, || {
            format!("{name}: F {} ARAND {} mAR {}", r.fscore, r.arand, r.mar)
        })?;
    }
    Ok(format!("{} seeds: F 100, ARAND 0, mAR 1", disks.len()))
}

// ---------------------------------------------------------------- 9

fn relabel(map: &InstanceMap, rng: &mut ChaCha8Rng) -> InstanceMap {
    let mut fresh: Vec<u32> = Vec::new();
    while fresh.len() < 5 {
        let v = rng.random_range(1..10_000);
        if !fresh.contains(&v) {
            fresh.push(v);
        }
    }
    map.map(|&v| if v == 0 { 0 } else { fresh[v as usize - 1] })
}

/// Quarter turn clockwise on screen (y down): pixel (x, y) moves to
/// (n−1−y, x), which advances ray j by Θ/4.
fn rotate_grid<T: Clone>(g: &Grid<T>) -> Grid<T> {
    let n = g.width();
    let mut data = Vec::with_capacity(n * n);
    for y in 0..n {
        for x in 0..n {
            data.push(g.get(y, n - 1 - x).clone());
        }
    }
    Grid::from_vec(n, n, data).unwrap()
}

fn rotate_image(img: &ImageRGB) -> ImageRGB {
    let n = img.width();
    let mut out = ImageRGB::filled(n, n, [0, 0, 0]).unwrap();
    for y in 0..n {
        for x in 0..n {
            out.put_pixel(n - 1 - y, x, img.pixel(x, y));
        }
    }
    out
}

fn rotate_curve(c: &RingCurve) -> RingCurve {
    let theta = c.theta();
    let mut radii = vec![0.0; theta];
    for (j, &r) in c.radii().iter().enumerate() {
        radii[(j + theta / 4) % theta] = r;
    }
    RingCurve::new(c.origin(), radii).unwrap()
}

fn same_up_to_rotation(a: &ScorerPrediction, b: &ScorerPrediction, quarter: usize) -> Result<(), String> {
    let theta = a.offsets.len();
    for j in 0..theta {
        let k = (j + quarter) % theta;
        check((a.offsets[j] - b.offsets[k]).abs() <= 1e-9 && a.background[j] == b.background[k], || {
            format!("ray {j}: {} vs {}", a.offsets[j], b.offsets[k])
        })?;
    }
    Ok(())
}

struct RotationCase {
    image: ImageRGB,
    maps: ProbabilityMaps,
    base: RingCurve,
    width: f64,
    samples: usize,
}

fn rotation_case(rng: &mut ChaCha8Rng) -> RotationCase {
    let n = rng.random_range(48..=96);
    let c = n as f64 / 2.0;
    let circles: Vec<(f64, f64, f64, u8)> = (0..4)
        .map(|_| {
            (
                c + rng.random_range(-6.0..6.0),
                c + rng.random_range(-6.0..6.0),
                rng.random_range(8.0..c),
                rng.random_range(20..120),
            )
        })
        .collect();
    let mut image = ImageRGB::filled(n, n, [210, 200, 190]).unwrap();
    for y in 0..n {
        for x in 0..n {
            let (px, py) = (x as f64 + 0.5, y as f64 + 0.5);
            let mut v = 210.0f64;
            for &(cx, cy, r, dark) in &circles {
                if (px - cx).hypot(py - cy) < r {
                    v -= dark as f64 / 3.0;
                }
            }
            v += rng.random_range(-15.0..15.0);
            let v = v.clamp(0.0, 255.0) as u8;
            image.put_pixel(x, y, [v, v.saturating_sub(10), v.saturating_sub(20)]);
        }
    }
    let boundary: Vec<f32> = (0..n * n).map(|_| rng.random()).collect();
    let bg_share: Vec<f32> = (0..n * n).map(|_| rng.random()).collect();
    let b = Grid::from_vec(n, n, boundary).unwrap();
    let bg = Grid::from_vec(n, n, b.data().iter().zip(&bg_share).map(|(p, s)| (1.0 - p) * s).collect()).unwrap();
    let ring = Grid::from_vec(n, n, b.data().iter().zip(bg.data()).map(|(p, q)| 1.0 - p - q).collect()).unwrap();
    let maps = ProbabilityMaps::new([bg, ring, b, Grid::filled(n, n, 0.0)], 1e-4).unwrap();

    let theta = 4 * rng.random_range(2..=24);
    let radii: Vec<f64> = (0..theta).map(|_| rng.random_range(4.0..10.0)).collect();
    let base = RingCurve::new([c, c], radii).unwrap();
    let width = rng.random_range(8.0..c - 12.0);
    let samples = rng.random_range(8..=60);
    RotationCase { image, maps, base, width, samples }
}

fn rotate_maps(m: &ProbabilityMaps) -> ProbabilityMaps {
    let planes = PixelClass::ALL.map(|c| rotate_grid(m.plane(c)));
    ProbabilityMaps::new(planes, 1e-4).unwrap()
}

fn invariances() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for trial in 0..100 {
        let (det, gt) = random_pair(5000 + trial);
        let ab = adapted_rand_error(&det, &gt).unwrap();
        let ba = adapted_rand_error(&gt, &det).unwrap();
        check((ab - ba).abs() <= 1e-12, || format!("trial {trial}: ARAND asymmetric {ab} vs {ba}"))?;
    }
    for trial in 0..100 {
        let (det, gt) = random_pair(6000 + trial);
        let (rd, rg) = (relabel(&det, &mut rng), relabel(&gt, &mut rng));
        let a0 = adapted_rand_error(&det, &gt).unwrap();
        let a1 = adapted_rand_error(&rd, &rg).unwrap();
        check((a0 - a1).abs() <= 1e-12, || format!("trial {trial}: ARAND {a0} vs relabeled {a1}"))?;
    }
    for trial in 0..100 {
        let (det, gt) = random_pair(7000 + trial);
        let (rd, rg) = (relabel(&det, &mut rng), relabel(&gt, &mut rng));
        let m0 = mean_average_recall(&det, &gt).unwrap();
        let m1 = mean_average_recall(&rd, &rg).unwrap();
        check(m0 == m1, || format!("trial {trial}: mAR {m0} vs relabeled {m1}"))?;
    }
    let params = GradientScorer::default();
    for trial in 0..100 {
        let case = rotation_case(&mut rng);
        let quarter = case.base.theta() / 4;
        let strip = sample_polar_strip(&case.image, &case.base, case.width, case.samples).unwrap();
        let g0 = gradient_scorer(&strip, &params).unwrap();
        let m0 = map_scorer(&strip, &case.maps).unwrap();
        let (mut image, mut maps, mut base) = (case.image.clone(), case.maps.clone(), case.base.clone());
        for turn in 1..=3 {
            image = rotate_image(&image);
            maps = rotate_maps(&maps);
            base = rotate_curve(&base);
            let strip = sample_polar_strip(&image, &base, case.width, case.samples).unwrap();
            let g = gradient_scorer(&strip, &params).unwrap();
            same_up_to_rotation(&g0, &g, turn * quarter)
                .map_err(|e| format!("trial {trial}, gradient, {turn} turns: {e}"))?;
            let m = map_scorer(&strip, &maps).unwrap();
            same_up_to_rotation(&m0, &m, turn * quarter)
                .map_err(|e| format!("trial {trial}, maps, {turn} turns: {e}"))?;
        }
    }
    Ok("ARAND symmetry, ARAND/mAR relabeling, scorer rotation: 100 trials each, 0 failures".into())
}

// ----------------------------------------------------------------

fn run(id: u32, name: &str, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    });
    let t = start.elapsed();
    match &result {
        Ok(detail) => println!("PASS  {id}. {name} ({t:.2?}): {detail}"),
        Err(detail) => println!("FAIL  {id}. {name} ({t:.2?}): {detail}"),
    }
    result.is_ok()
}

fn main() {
    let disks = synthetic_disks();
    let results = [
        run(1, "published P/R/F rows are harmonic-mean consistent", table_consistency),
        run(2, "segmentation loss fixture and default weights", loss_fixture),
        run(3, "ARAND and mAR agree with brute-force oracles", metric_oracles),
        run(4, "Lanczos kernel closed forms", kernel_closed_forms),
        run(5, "synthetic disks traced end to end", || end_to_end(&disks)),
        run(6, "a perturbed inner ring propagates outward", || error_propagation(&disks[0])),
        run(7, "resize contract", resize_contract),
        run(8, "annotation round trip evaluates as perfect", || round_trip(&disks)),
        run(9, "metric and scorer invariances", invariances),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!("{} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
