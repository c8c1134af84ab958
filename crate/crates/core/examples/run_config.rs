//! Layered run configuration as used by the command-line tool: defaults, a
//! JSON file of dotted keys, then individual overrides.

use ccf::cli::ConfigBuilder;

fn main() -> ccf::Result<()> {
    let path = std::env::temp_dir().join("ccf-run-config.json");
    std::fs::write(&path, r#"{"train.temperature": 0.02, "episode.shot": 5}"#)
        .map_err(|e| ccf::Error::io(&path, e))?;

    let (config, flat) = ConfigBuilder::default()
        .with_file(Some(&path))?
        .set_assignment("classifier.kind=cosine")?
        .set_opt("train.seed", Some(42u64))?
        .build()?;
    println!(
        "T = {}, shot = {}, classifier = {}, seed = {}",
        config.train.temperature, config.episode.shot, config.classifier.kind, config.train.seed
    );
    println!("effective configuration:");
    for (key, value) in &flat {
        println!("  {key} = {value}");
    }

    match ConfigBuilder::default().set_assignment("train.temprature=1") {
        Err(e) => println!("typo rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
