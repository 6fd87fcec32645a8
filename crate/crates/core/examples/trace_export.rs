//! Runs an experiment described in TOML and writes its trace as CSV.
//!
//! cargo run --example trace_export -- configs/two_box_case_iii.toml out.csv

use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use halpern::cli::run_experiment;
use halpern::ExperimentConfig;

fn main() -> halpern::Result<()> {
    let mut args = std::env::args().skip(1);
    let config = args.next().map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs/two_box_case_iii.toml")
    });
    let out = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("trace.csv"));

    let mut cfg = ExperimentConfig::from_path(&config)?;
    cfg.trace_stride = 1000;
    let exp = cfg.build()?;
    let trace = run_experiment(&exp)?;
    trace.write_csv(BufWriter::new(File::create(&out)?))?;

    println!("{} rows -> {}", trace.rows.len(), out.display());
    print!(
        "{}",
        trace
            .to_csv_string()
            .lines()
            .take(4)
            .collect::<Vec<_>>()
            .join("\n")
    );
    println!("\n...");
    Ok(())
}
