use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;

use super::config::{ConfigBuilder, FlatConfig, RunConfig};
use super::{
    AnalyzeArgs, Command, ConfigArgs, ConvertArgs, EpisodeArgs, EvalArgs, GenSyntheticArgs,
    SweepArgs, TrainArgs,
};
use crate::analysis::{
    centroid_distances, latent_dispersion, temperature_sweep, write_distance_csv,
    write_labeled_matrix_csv, write_sweep_csv, SweepSettings,
};
use crate::error::{Error, Result};
use crate::featurestore::{
    generate_synthetic, load_bank, load_csv, save_bank, splits_path_for, BankFormat, FeatureBank,
    SyntheticSpec,
};
use crate::fewshot::evaluate;
use crate::model::{
    load_checkpoint, save_checkpoint, train_with_validation, Checkpoint, CheckpointMeta,
};
use crate::pipeline;

pub(super) fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::GenSynthetic(a) => gen_synthetic(a),
        Command::Train(a) => train(a),
        Command::Eval(a) => eval(a),
        Command::Sweep(a) => sweep(a),
        Command::Analyze(a) => analyze(a),
        Command::Convert(a) => convert(a),
    }
}

fn base_builder(args: &ConfigArgs) -> Result<ConfigBuilder> {
    let mut b = ConfigBuilder::default().with_file(args.config.as_deref())?;
    for s in &args.set {
        b = b.set_assignment(s)?;
    }
    Ok(b)
}

fn with_episode_flags(b: ConfigBuilder, e: &EpisodeArgs) -> Result<ConfigBuilder> {
    b.set_opt("episode.way", e.way)?
        .set_opt("episode.shot", e.shot)?
        .set_opt("episode.query", e.query)?
        .set_opt("episode.episodes", e.episodes)?
        .set_opt("classifier.kind", e.classifier)
}

fn bank_path(config: &RunConfig) -> Result<&Path> {
    config
        .bank
        .path
        .as_deref()
        .ok_or_else(|| Error::InvalidArgument("no feature bank given (--bank or bank.path)".into()))
}

fn read_bank(path: &Path) -> Result<FeatureBank> {
    load_bank(path, BankFormat::from_path(path))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

fn write_json<T: Serialize>(value: &T, path: Option<&Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::io(p, e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Error::io("<stdout>", e))
        }
    }
}

fn with_file<F>(path: &Path, f: F) -> Result<()>
where
    F: FnOnce(&mut BufWriter<File>) -> Result<()>,
{
    let mut w = create(path)?;
    f(&mut w)?;
    w.flush().map_err(|e| Error::io(path, e))
}

fn gen_synthetic(a: GenSyntheticArgs) -> Result<()> {
    let spec = SyntheticSpec {
        n_base_classes: a.base,
        n_val_classes: a.val,
        n_novel_classes: a.novel,
        feature_dim: a.dim,
        samples_per_class: a.per_class,
        centroid_offset: a.centroid_offset,
        centroid_scale: a.centroid_scale,
        within_class_stddev: a.stddev,
        novel_correlation: a.correlation,
        seed: a.seed,
    };
    let bank = generate_synthetic(&spec)?;
    let format = a.format.unwrap_or_else(|| BankFormat::from_path(&a.output));
    save_bank(&bank, &a.output, format)?;
    eprintln!(
        "wrote {} samples of {} classes to {}",
        bank.n_samples(),
        bank.n_classes(),
        a.output.display()
    );
    Ok(())
}

fn train(a: TrainArgs) -> Result<()> {
    let builder = base_builder(&a.config)?
        .set_opt("bank.path", a.bank.clone())?
        .set_opt("train.seed", Some(a.seed))?
        .set_opt("train.temperature", a.temperature)?
        .set_opt("train.beta", a.beta)?
        .set_opt("train.learning_rate", a.learning_rate)?
        .set_opt("train.max_epochs", a.epochs)?
        .set_opt("train.architecture.hidden_dim", a.hidden)?;
    let (config, flat) = with_episode_flags(builder, &a.episode)?.build()?;
    let raw = read_bank(bank_path(&config)?)?;
    let (boxcox, bank) = pipeline::prepare(&raw, &config.boxcox)?;
    let trained = train_with_validation(
        &bank,
        &config.train,
        config.episode.config(),
        &config.classifier,
    )?;
    let checkpoint = Checkpoint {
        model: trained.model,
        meta: CheckpointMeta {
            train_config: config.train.clone(),
            boxcox,
            provenance: serde_json::to_value(&flat)?,
        },
    };
    save_checkpoint(&checkpoint, &a.output)?;
    let log_path = a.log.unwrap_or_else(|| a.output.with_extension("log.json"));
    write_json(
        &json!({ "config": flat, "boxcox": boxcox, "log": trained.log }),
        Some(&log_path),
    )?;
    eprintln!(
        "trained {} epochs (best {}), checkpoint {}",
        trained.log.epochs.len(),
        trained.log.best_epoch,
        a.output.display()
    );
    Ok(())
}

fn eval(a: EvalArgs) -> Result<()> {
    let builder = base_builder(&a.config)?.set_opt("bank.path", a.bank.clone())?;
    let (config, mut flat) = with_episode_flags(builder, &a.episode)?.build()?;
    let raw = read_bank(bank_path(&config)?)?;
    let checkpoint = a.checkpoint.as_deref().map(load_checkpoint).transpose()?;
    let boxcox = match &checkpoint {
        Some(c) => c.meta.boxcox,
        None if a.baseline => pipeline::resolve_boxcox(&raw, &config.boxcox)?,
        None => {
            return Err(Error::InvalidArgument(
                "eval needs --checkpoint unless --baseline is given".into(),
            ))
        }
    };
    let bank = pipeline::apply(&raw, boxcox.as_ref())?;
    let model = match (&checkpoint, a.baseline) {
        (Some(c), false) => Some(&c.model),
        _ => None,
    };
    let report = evaluate(
        &bank,
        a.split,
        model,
        &config.classifier,
        config.episode.config(),
        config.episode.episodes,
        a.seed,
    )?;
    flat.insert("eval.seed".into(), json!(a.seed));
    flat.insert("eval.split".into(), json!(a.split));
    flat.insert("eval.baseline".into(), json!(a.baseline));
    flat.insert("eval.checkpoint".into(), json!(a.checkpoint));
    let mode = if a.baseline { "baseline" } else { "ccf" };
    write_json(
        &json!({ "config": flat, "mode": mode, "boxcox": boxcox, "report": report }),
        a.output.as_deref(),
    )
}

fn sweep(a: SweepArgs) -> Result<()> {
    if a.seeds == 0 {
        return Err(Error::InvalidArgument("--seeds must be positive".into()));
    }
    let builder = base_builder(&a.config)?.set_opt("bank.path", a.bank.clone())?;
    let (config, mut flat) = with_episode_flags(builder, &a.episode)?.build()?;
    let raw = read_bank(bank_path(&config)?)?;
    let (boxcox, bank) = pipeline::prepare(&raw, &config.boxcox)?;
    let seeds: Vec<u64> = (0..a.seeds).map(|i| a.seed + i).collect();
    let settings = SweepSettings {
        train: config.train.clone(),
        episodes: config.episode.config(),
        classifier: config.classifier,
        eval_episodes: config.episode.episodes,
    };
    let report = temperature_sweep(&bank, &settings, &a.temps, &seeds)?;
    with_file(&a.output, |w| write_sweep_csv(&report, w))?;
    flat.insert("sweep.temps".into(), json!(a.temps));
    flat.insert("sweep.seeds".into(), json!(seeds));
    let json_path = a.output.with_extension("json");
    write_json(
        &json!({
            "config": flat,
            "boxcox": boxcox,
            "report": report,
            "error_correlations": report.error_correlations(),
        }),
        Some(&json_path),
    )
}

fn analyze(a: AnalyzeArgs) -> Result<()> {
    let checkpoint = load_checkpoint(&a.checkpoint)?;
    let raw = read_bank(&a.bank)?;
    let bank = pipeline::apply(&raw, checkpoint.meta.boxcox.as_ref())?;
    let model = &checkpoint.model;
    let distances = centroid_distances(&bank, a.split, model)?;
    let dispersion = latent_dispersion(&bank, model, a.split)?;
    if let Some(path) = &a.csv {
        with_file(path, |w| write_distance_csv(&distances, w))?;
    }
    if a.export_latent.is_some() || a.export_rectified.is_some() {
        let samples = bank.samples_in(a.split);
        let x = bank.features().select_rows(&samples);
        let labels: Vec<u32> = samples.iter().map(|&i| bank.labels()[i]).collect();
        let exports: [(&Option<PathBuf>, &str); 2] =
            [(&a.export_latent, "z"), (&a.export_rectified, "x")];
        for (path, prefix) in exports {
            if let Some(path) = path {
                let m = if prefix == "z" {
                    model.encode_batch(&x)?
                } else {
                    model.rectify_batch(&x)?
                };
                with_file(path, |w| write_labeled_matrix_csv(&m, &labels, prefix, w))?;
            }
        }
    }
    let mut config: FlatConfig =
        serde_json::from_value(checkpoint.meta.provenance.clone()).unwrap_or_default();
    config.insert("analyze.checkpoint".into(), json!(a.checkpoint));
    config.insert("analyze.bank".into(), json!(a.bank));
    config.insert("analyze.split".into(), json!(a.split));
    write_json(
        &json!({
            "config": config,
            "distances": distances,
            "ratio": distances.ratio(),
            "dispersion": dispersion,
        }),
        a.output.as_deref(),
    )
}

fn convert(a: ConvertArgs) -> Result<()> {
    let from = a.from.unwrap_or_else(|| BankFormat::from_path(&a.input));
    let to = a.to.unwrap_or_else(|| BankFormat::from_path(&a.output));
    let bank = match from {
        BankFormat::Csv => {
            let splits = a
                .splits
                .clone()
                .unwrap_or_else(|| splits_path_for(&a.input));
            load_csv(&a.input, &splits)?
        }
        BankFormat::Binary => load_bank(&a.input, BankFormat::Binary)?,
    };
    save_bank(&bank, &a.output, to)
}
