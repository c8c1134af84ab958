//! End-to-end acceptance checks. Each test prints one `criterion N: PASS|FAIL`
//! line with the measured values before asserting.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use ccf::analysis::{centroid_distances, latent_dispersion, temperature_sweep, SweepSettings};
use ccf::featurestore::{
    generate_synthetic, load_bank, BankFormat, FeatureBank, Split, SyntheticSpec,
};
use ccf::fewshot::{
    evaluate, fit_classifier, sample_episode, Classifier, ClassifierSpec, EpisodeConfig,
    EvalReport, LabeledSet,
};
use ccf::model::{
    gradients, loss, train_with_validation, Architecture, Batch, CcfModel, LossWeights, TrainConfig,
};
use ccf::numcore::{Matrix, Rng};
use ccf::pipeline::{prepare, BoxCoxConfig};
use ccf::preprocess::boxcox_scalar;

const SEEDS: [u64; 3] = [0, 1, 2];
const EVAL_SEED: u64 = 99;

fn report(n: u32, pass: bool, detail: impl AsRef<str>) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("criterion {n}: {verdict}  {}", detail.as_ref());
}

// ---------------------------------------------------------------------------
// 1. analytic gradients against central differences

fn random_matrix(rng: &mut Rng, rows: usize, cols: usize, scale: f64) -> Matrix {
    Matrix::new(
        rows,
        cols,
        (0..rows * cols).map(|_| scale * rng.normal()).collect(),
    )
    .unwrap()
}

fn random_vec(rng: &mut Rng, n: usize, scale: f64) -> Vec<f64> {
    (0..n).map(|_| scale * rng.normal()).collect()
}

/// Smallest |pre-activation| at a LeakyReLU for any sample; finite
/// differences are only meaningful away from the kink.
fn kink_margin(model: &CcfModel, x: &Matrix) -> f64 {
    let cache = model.forward(x).unwrap();
    let arch = model.architecture();
    let mut margin = f64::INFINITY;
    if arch.encoder_activation {
        margin = cache
            .hidden_pre
            .data()
            .iter()
            .fold(margin, |m, v| m.min(v.abs()));
    }
    if arch.decoder_activation {
        margin = cache
            .output_pre
            .data()
            .iter()
            .fold(margin, |m, v| m.min(v.abs()));
    }
    margin
}

#[test]
fn criterion_1_gradient_check() {
    let start = Instant::now();
    let h = 1e-5;
    let mut worst = 0.0f64;
    let mut checked = 0usize;
    let mut rng = Rng::new(2024);
    let mut configs = 0;
    while configs < 100 {
        let d = 2 + rng.below(5) as usize;
        let hidden = 2 + rng.below(7) as usize;
        let c = 2 + rng.below(4) as usize;
        let n = 1 + rng.below(6) as usize;
        let arch = Architecture {
            hidden_dim: hidden,
            leaky_slope: [0.0, 0.01, 0.2][rng.below(3) as usize],
            encoder_activation: rng.below(4) != 0,
            decoder_activation: rng.below(2) == 0,
        };
        let weights = LossWeights {
            temperature: rng.uniform(0.05, 2.0),
            beta: rng.uniform(0.0, 0.5),
            ce_weight: if rng.below(5) == 0 {
                0.0
            } else {
                rng.uniform(0.5, 2.0)
            },
        };
        let mut model = CcfModel::from_parts(
            arch,
            random_matrix(&mut rng, d, hidden, 0.7),
            random_vec(&mut rng, hidden, 0.3),
            random_matrix(&mut rng, hidden, c, 0.7),
            random_vec(&mut rng, c, 0.3),
            random_matrix(&mut rng, c, d, 0.7),
            random_vec(&mut rng, d, 0.3),
        )
        .unwrap();
        let x = random_matrix(&mut rng, n, d, 1.0);
        if kink_margin(&model, &x) < 1e-3 {
            continue;
        }
        configs += 1;
        let targets = (0..n).map(|_| rng.below(c as u64) as usize).collect();
        let batch = Batch::new(x, targets).unwrap();
        let analytic: Vec<Vec<f64>> = gradients(&model, &batch, &weights)
            .unwrap()
            .1
            .buffers()
            .iter()
            .map(|b| b.to_vec())
            .collect();
        for (k, grads) in analytic.iter().enumerate() {
            for (j, &g) in grads.iter().enumerate() {
                let orig = model.buffers()[k][j];
                model.buffers_mut()[k][j] = orig + h;
                let up = loss(&model, &batch, &weights).unwrap().total;
                model.buffers_mut()[k][j] = orig - h;
                let down = loss(&model, &batch, &weights).unwrap().total;
                model.buffers_mut()[k][j] = orig;
                let numeric = (up - down) / (2.0 * h);
                let rel = (g - numeric).abs() / g.abs().max(numeric.abs()).max(1e-6);
                worst = worst.max(rel);
                checked += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = worst < 1e-4 && elapsed < Duration::from_secs(30);
    report(
        1,
        pass,
        format!("100 configs, {checked} parameters, max relative error {worst:.2e}, {elapsed:.1?}"),
    );
    assert!(pass);
}

// ---------------------------------------------------------------------------
// 2 and 3 share one trained model per seed.

struct Run {
    bank: FeatureBank,
    model: CcfModel,
    train_time: Duration,
}

fn full_size_config(seed: u64) -> TrainConfig {
    TrainConfig {
        temperature: 0.1,
        learning_rate: 1e-3,
        max_epochs: 40,
        seed,
        architecture: Architecture {
            decoder_activation: false,
            ..Architecture::default()
        },
        ..TrainConfig::default()
    }
}

/// Training time of all shared runs, charged to every criterion using them.
fn shared_training_time() -> Duration {
    runs().iter().map(|r| r.train_time).sum()
}

fn runs() -> &'static [Run] {
    static RUNS: OnceLock<Vec<Run>> = OnceLock::new();
    RUNS.get_or_init(|| {
        SEEDS
            .iter()
            .map(|&seed| {
                let bank = generate_synthetic(&SyntheticSpec {
                    seed,
                    ..SyntheticSpec::default()
                })
                .unwrap();
                let start = Instant::now();
                let trained = train_with_validation(
                    &bank,
                    &full_size_config(seed),
                    EpisodeConfig::default(),
                    &ClassifierSpec::default(),
                )
                .unwrap();
                Run {
                    bank,
                    model: trained.model,
                    train_time: start.elapsed(),
                }
            })
            .collect()
    })
}

#[test]
fn criterion_2_rectification_direction() {
    let runs = runs();
    let start = Instant::now();
    let mut pass = true;
    let mut parts = Vec::new();
    for (seed, run) in SEEDS.iter().zip(runs) {
        let r = centroid_distances(&run.bank, Split::Novel, &run.model).unwrap();
        pass &= r.mean_d_hat <= 0.95 * r.mean_d;
        parts.push(format!(
            "seed {seed}: d={:.4} d_hat={:.4} ratio={:.3}",
            r.mean_d,
            r.mean_d_hat,
            r.ratio()
        ));
    }
    let elapsed = start.elapsed() + shared_training_time();
    pass &= elapsed < Duration::from_secs(180);
    report(
        2,
        pass,
        format!("{}; {elapsed:.1?} including training", parts.join("; ")),
    );
    assert!(pass);
}

#[test]
fn criterion_3_end_to_end_gain() {
    let runs = runs();
    let start = Instant::now();
    let clf = ClassifierSpec::default();
    let episodes = EpisodeConfig::default();
    let (mut gain, mut base) = (0.0, 0.0);
    let mut parts = Vec::new();
    for (seed, run) in SEEDS.iter().zip(runs) {
        let plain = evaluate(
            &run.bank,
            Split::Novel,
            None,
            &clf,
            episodes,
            600,
            EVAL_SEED,
        )
        .unwrap();
        let ccf = evaluate(
            &run.bank,
            Split::Novel,
            Some(&run.model),
            &clf,
            episodes,
            600,
            EVAL_SEED,
        )
        .unwrap();
        gain += ccf.mean_accuracy - plain.mean_accuracy;
        base += plain.mean_accuracy;
        parts.push(format!(
            "seed {seed}: baseline {:.4} ccf {:.4} (trained in {:.1?})",
            plain.mean_accuracy, ccf.mean_accuracy, run.train_time
        ));
    }
    let n = SEEDS.len() as f64;
    let (gain, base) = (100.0 * gain / n, base / n);
    let elapsed = start.elapsed() + shared_training_time();
    let pass = gain >= 1.0 && (0.60..=0.85).contains(&base) && elapsed < Duration::from_secs(300);
    report(
        3,
        pass,
        format!(
            "mean baseline {base:.4}, mean gain {gain:+.2} points; {}; {elapsed:.1?} including training",
            parts.join("; ")
        ),
    );
    assert!(pass);
}

// ---------------------------------------------------------------------------

#[test]
fn criterion_4_temperature_tradeoff() {
    let start = Instant::now();
    let bank = generate_synthetic(&SyntheticSpec::default()).unwrap();
    let settings = SweepSettings {
        train: TrainConfig {
            beta: 0.01,
            learning_rate: 3e-3,
            max_epochs: 50,
            val_episodes: 0,
            architecture: Architecture {
                hidden_dim: 128,
                decoder_activation: false,
                ..Architecture::default()
            },
            ..TrainConfig::default()
        },
        episodes: EpisodeConfig::default(),
        classifier: ClassifierSpec::default(),
        eval_episodes: 50,
    };
    let temps = [0.02, 0.05, 0.1, 0.5, 1.0, 2.0];
    let report_ = temperature_sweep(&bank, &settings, &temps, &SEEDS).unwrap();
    let rhos: Vec<f64> = report_
        .error_correlations()
        .into_iter()
        .map(|r| r.unwrap_or(0.0))
        .collect();
    let mean = rhos.iter().sum::<f64>() / rhos.len() as f64;
    let pass = mean >= 0.8;
    let errors: Vec<String> = report_
        .rows
        .iter()
        .map(|r| {
            format!(
                "T={} s={}: {:.4}",
                r.temperature, r.seed, r.reconstruction_error
            )
        })
        .collect();
    report(
        4,
        pass,
        format!(
            "spearman per seed {rhos:.3?}, mean {mean:.3}; {}; {:.1?}",
            errors.join(", "),
            start.elapsed()
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_5_latent_clustering() {
    let bank = generate_synthetic(&SyntheticSpec::default()).unwrap();
    let config = |ce_weight: f64| TrainConfig {
        temperature: 0.5,
        ce_weight,
        learning_rate: 1e-3,
        max_epochs: 20,
        val_episodes: 0,
        seed: 5,
        architecture: Architecture {
            hidden_dim: 256,
            decoder_activation: false,
            ..Architecture::default()
        },
        ..TrainConfig::default()
    };
    let train = |c: TrainConfig| ccf::model::train(&bank, &c, |_| Ok(0.0)).unwrap().model;
    let with_ce = latent_dispersion(&bank, &train(config(1.0)), Split::Base).unwrap();
    let without = latent_dispersion(&bank, &train(config(0.0)), Split::Base).unwrap();
    let pass = with_ce.intra_class_variance < without.intra_class_variance;
    report(
        5,
        pass,
        format!(
            "intra-class z variance with CE {:.4} vs without {:.4}; \
             within-class share of z variance {:.3} vs {:.3}; between-class spread {:.3} vs {:.3}",
            with_ce.intra_class_variance,
            without.intra_class_variance,
            with_ce.within_class_fraction,
            without.within_class_fraction,
            with_ce.between_class_spread,
            without.between_class_spread,
        ),
    );
    assert!(pass);
}

// ---------------------------------------------------------------------------
// 6. Box-Cox against an independent evaluation that avoids libm's ln/exp

/// Neumaier-compensated sum.
#[derive(Default)]
struct Sum {
    s: f64,
    c: f64,
}

impl Sum {
    fn add(&mut self, v: f64) {
        let t = self.s + v;
        if self.s.abs() >= v.abs() {
            self.c += (self.s - t) + v;
        } else {
            self.c += (v - t) + self.s;
        }
        self.s = t;
    }

    fn value(&self) -> f64 {
        self.s + self.c
    }
}

/// ln x via exponent extraction and the atanh series on [√½, √2].
fn oracle_ln(x: f64) -> f64 {
    const LN2_HI: f64 = std::f64::consts::LN_2;
    const LN2_LO: f64 = 2.319_046_813_846_299_6e-17;
    let bits = x.to_bits();
    let mut e = ((bits >> 52) & 0x7ff) as i64 - 1023;
    let mut m = f64::from_bits((bits & !(0x7ff << 52)) | (1023 << 52));
    if m > std::f64::consts::SQRT_2 {
        m /= 2.0;
        e += 1;
    }
    let s = (m - 1.0) / (m + 1.0);
    let s2 = s * s;
    let mut sum = Sum::default();
    let mut p = s;
    let mut k = 1.0;
    while p.abs() > 1e-40 {
        sum.add(p / k);
        p *= s2;
        k += 2.0;
    }
    let mut total = Sum::default();
    total.add(e as f64 * LN2_HI);
    total.add(e as f64 * LN2_LO);
    total.add(2.0 * sum.value());
    total.value()
}

/// expm1(u) for u ≥ 0 by its all-positive Taylor series.
fn expm1_pos(u: f64) -> f64 {
    let mut sum = Sum::default();
    let mut term = u;
    let mut k = 1.0;
    while term > 1e-300 && term > sum.value() * 1e-20 {
        sum.add(term);
        k += 1.0;
        term *= u / k;
    }
    sum.value()
}

fn oracle_boxcox(x: f64, lambda: f64) -> f64 {
    let l = oracle_ln(x);
    if lambda == 0.0 {
        return l;
    }
    let u = lambda * l;
    let em1 = if u >= 0.0 {
        expm1_pos(u)
    } else {
        let v = expm1_pos(-u);
        -v / (1.0 + v)
    };
    em1 / lambda
}

/// Reference values computed with 50-digit arithmetic.
#[allow(clippy::excessive_precision)]
const FROZEN: &[(f64, f64, f64)] = &[
    (0.5, 0.5, -0.5857864376269049511983113),
    (2.0, 0.5, 0.8284271247461900976033774),
    (0.001, -2.0, -499999.4999999999791833183),
    (1000.0, 2.0, 499999.5),
    (1000.0, -2.0, 0.4999995),
    (0.001, 2.0, -0.4999994999999999999999792),
    (1.0000001, 0.3, 9.999999655838691192912895e-8),
    (0.9999999, -0.7, -0.0000001000000084473651712723832),
    (3.7, 1e-09, 1.308332820506046192219895),
    (3.7, -1e-09, 1.308332818794311425246108),
    (3.7, 0.0, 1.308332819650178808359749),
    (0.25, 0.0, -1.386294361119890618834464),
    (12.5, -1.5, 0.651581722001353652812782),
    (0.07, 1.75, -0.5659850050714923284945937),
    (123.456, 0.125, 6.605923182023818869064929),
    (0.3, -0.25, -1.404800619228137625944852),
    (5.0, 1.0, 4.0),
    (1.5, 1e-06, 0.4054651903091524384378518),
    (42.0, -1e-12, 3.73766961827638321883012),
    (0.001953125, 0.6, -1.627194881080458438022936),
];

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

#[test]
fn criterion_6_boxcox_exactness() {
    let mut frozen_worst = 0.0f64;
    let mut oracle_on_frozen = 0.0f64;
    for &(x, l, want) in FROZEN {
        frozen_worst = frozen_worst.max(rel_err(boxcox_scalar(x, l), want));
        oracle_on_frozen = oracle_on_frozen.max(rel_err(oracle_boxcox(x, l), want));
    }
    let mut rng = Rng::new(6);
    let mut worst = 0.0f64;
    for i in 0..100_000 {
        let x = 10f64.powf(rng.uniform(-3.0, 3.0));
        let lambda = match i % 50 {
            0 => 0.0,
            1 => 1.0,
            2 => rng.uniform(-1e-6, 1e-6),
            _ => rng.uniform(-2.0, 2.0),
        };
        worst = worst.max(rel_err(boxcox_scalar(x, lambda), oracle_boxcox(x, lambda)));
    }
    let mut continuity = 0.0f64;
    for _ in 0..1000 {
        let x = 10f64.powf(rng.uniform(-3.0, 3.0));
        if (x - 1.0).abs() < 1e-3 {
            continue;
        }
        let at0 = boxcox_scalar(x, 0.0);
        for l in [1e-9, -1e-9] {
            continuity = continuity.max(rel_err(boxcox_scalar(x, l), at0));
        }
    }
    let pass =
        worst <= 1e-12 && frozen_worst <= 1e-12 && oracle_on_frozen <= 1e-13 && continuity <= 1e-6;
    report(
        6,
        pass,
        format!(
            "1e5 draws max rel err {worst:.2e}; frozen refs {frozen_worst:.2e} (oracle {oracle_on_frozen:.2e}); \
             lambda=+-1e-9 vs ln max rel diff {continuity:.2e}"
        ),
    );
    assert!(pass);
}

// ---------------------------------------------------------------------------

#[test]
fn criterion_7_protocol_arithmetic() {
    let r = EvalReport::from_accuracies(vec![0.8, 0.9]).unwrap();
    let ci_ok = (r.mean_accuracy - 0.85).abs() < 1e-12 && (r.ci95_halfwidth - 0.0980).abs() < 5e-5;

    let bank = generate_synthetic(&SyntheticSpec::default()).unwrap();
    let mut rng = Rng::new(7);
    let ep = sample_episode(&bank, Split::Novel, EpisodeConfig::default(), &mut rng).unwrap();
    let sizes_ok = ep.support.len() == 5 && ep.query.len() == 75;

    let same = Matrix::from_rows(&[[1.0, 0.0], [1.0, 0.0], [1.0, 0.0]]).unwrap();
    let ties_ok = Classifier::NearestCentroid {
        prototypes: same.clone(),
    }
    .predict(&[0.3, 0.2])
        == 0
        && Classifier::Cosine { prototypes: same }.predict(&[0.3, 0.2]) == 0;
    let support = LabeledSet {
        features: Matrix::from_rows(&[[0.5, 0.5], [0.5, 0.5]]).unwrap(),
        labels: vec![0, 1],
    };
    let lr = fit_classifier(&support, &ClassifierSpec::default()).unwrap();
    let lr_tie_ok = lr.predict(&[0.5, 0.5]) == 0;

    let pass = ci_ok && sizes_ok && ties_ok && lr_tie_ok;
    report(
        7,
        pass,
        format!(
            "two episodes 0.8/0.9 -> {:.4} +- {:.4}; 5-way 1-shot 15-query episode has {} support / {} query; \
             ties resolve to label 0: {}",
            r.mean_accuracy,
            r.ci95_halfwidth,
            ep.support.len(),
            ep.query.len(),
            ties_ok && lr_tie_ok
        ),
    );
    assert!(pass);
}

// ---------------------------------------------------------------------------
// 8. every CLI command is byte-reproducible, also across thread counts

fn ccf(args: &[&str]) {
    let out = Command::new(env!("CARGO_BIN_EXE_ccf"))
        .args(args)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "ccf {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

fn bytes(p: &Path) -> Vec<u8> {
    std::fs::read(p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

/// Runs every command once with fixed output names and returns each output
/// file's bytes.
fn run_all_commands(dir: &Path, threads: &str) -> Vec<(String, Vec<u8>)> {
    let p = |name: &str| dir.join(name).to_str().unwrap().to_string();
    let (bank, csv, ckpt) = (p("bank.fbk"), p("bank.csv"), p("model.ckpt"));
    let t = ["--threads", threads];
    let run = |args: &[&str]| ccf(&[&t[..], args].concat());
    run(&[
        "gen-synthetic",
        "--seed",
        "3",
        "--base",
        "8",
        "--val",
        "5",
        "--novel",
        "6",
        "--dim",
        "12",
        "--per-class",
        "25",
        "-o",
        &bank,
    ]);
    run(&["convert", &bank, &csv]);
    run(&[
        "train",
        "--bank",
        &bank,
        "--seed",
        "4",
        "--hidden",
        "16",
        "--epochs",
        "4",
        "--learning-rate",
        "0.001",
        "--set",
        "train.val_episodes=20",
        "--set",
        "train.batch_size=32",
        "-o",
        &ckpt,
    ]);
    let common = [
        "eval",
        "--checkpoint",
        &ckpt,
        "--bank",
        &bank,
        "--seed",
        "5",
        "--episodes",
        "40",
    ];
    run(&[&common[..], &["-o", &p("eval-ccf.json")]].concat());
    run(&[&common[..], &["--baseline", "-o", &p("eval-baseline.json")]].concat());
    run(&[
        "sweep",
        "--bank",
        &bank,
        "--seed",
        "0",
        "--seeds",
        "2",
        "--temps",
        "0.1,1",
        "--episodes",
        "10",
        "--set",
        "train.architecture.hidden_dim=8",
        "--set",
        "train.max_epochs=2",
        "--set",
        "train.val_episodes=5",
        "-o",
        &p("sweep.csv"),
    ]);
    run(&[
        "analyze",
        "--checkpoint",
        &ckpt,
        "--bank",
        &bank,
        "--split",
        "novel",
        "-o",
        &p("analyze.json"),
        "--csv",
        &p("distances.csv"),
        "--export-latent",
        &p("latent.csv"),
        "--export-rectified",
        &p("rectified.csv"),
    ]);
    let mut names: Vec<String> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    names
        .into_iter()
        .map(|n| {
            let b = bytes(&dir.join(&n));
            (n, b)
        })
        .collect()
}

#[test]
fn criterion_8_cli_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let first = run_all_commands(dir.path(), "1");
    let again = run_all_commands(dir.path(), "1");
    let threaded = run_all_commands(dir.path(), "8");
    let names: Vec<&str> = first.iter().map(|(n, _)| n.as_str()).collect();
    let differing: Vec<&str> = first
        .iter()
        .zip(&again)
        .zip(&threaded)
        .filter(|(((n1, a), (n2, b)), (n3, c))| !(n1 == n2 && n2 == n3 && a == b && b == c))
        .map(|(((n, _), _), _)| n.as_str())
        .collect();
    let pass = first.len() == 13 && differing.is_empty() && first.len() == threaded.len();
    report(
        8,
        pass,
        format!(
            "{} output files from gen-synthetic, convert, train, eval, sweep, analyze; \
             rerun and --threads 8 differ in: {:?}; files: {}",
            first.len(),
            differing,
            names.join(" ")
        ),
    );
    assert!(pass);
}

// ---------------------------------------------------------------------------

#[test]
fn criterion_9_external_bank() {
    let Some(path) = std::env::var_os("CCF_EXTERNAL_BANK") else {
        println!("criterion 9: SKIPPED  set CCF_EXTERNAL_BANK to a feature bank file to run it");
        return;
    };
    let path = PathBuf::from(path);
    let raw = load_bank(&path, BankFormat::from_path(&path)).unwrap();
    let (_, bank) = prepare(&raw, &BoxCoxConfig::default()).unwrap();
    let trained = train_with_validation(
        &bank,
        &TrainConfig::default(),
        EpisodeConfig::default(),
        &ClassifierSpec::default(),
    )
    .unwrap();
    let clf = ClassifierSpec::default();
    let episodes = EpisodeConfig::default();
    let plain = evaluate(&bank, Split::Novel, None, &clf, episodes, 2000, EVAL_SEED).unwrap();
    let ccf = evaluate(
        &bank,
        Split::Novel,
        Some(&trained.model),
        &clf,
        episodes,
        2000,
        EVAL_SEED,
    )
    .unwrap();
    let gain = 100.0 * (ccf.mean_accuracy - plain.mean_accuracy);
    let pass = gain >= 2.0;
    report(
        9,
        pass,
        format!(
            "{}: baseline {:.4} +- {:.4}, ccf {:.4} +- {:.4}, gain {gain:+.2} points",
            path.display(),
            plain.mean_accuracy,
            plain.ci95_halfwidth,
            ccf.mean_accuracy,
            ccf.ci95_halfwidth
        ),
    );
    assert!(pass);
}
