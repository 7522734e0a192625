mod args;
mod manifest;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use args::{
    BenchArgs, Cli, Command, DetectArgs, EvalArgs, ExactArgs, GenerateArgs, Init, ReplayArgs,
    SourceArgs, TableFormat,
};
use catout::eval::{coverage_at_counts, coverage_table, format_table, top_count, write_csv};
use catout::ingest::{generate, write_delimited};
use catout::{lsa, InitStrategy, RareClassSpec, SearchConfig};
use clap::Parser;
use manifest::{execute, solve, Coverage, Downsample, RunManifest, Solver, Source};

type CmdResult = Result<(), Box<dyn std::error::Error>>;

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Detect(a) => detect(a),
        Command::Exact(a) => exact(a),
        Command::Eval(a) => eval(a),
        Command::Bench(a) => bench(a),
        Command::Generate(a) => generate_cmd(a),
        Command::Replay(a) => replay(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        // a closed downstream pipe (`catout ... | head`) is not a failure
        Err(e) if e.downcast_ref::<io::Error>().map(io::Error::kind) == Some(io::ErrorKind::BrokenPipe) => {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn source(args: &SourceArgs, seed: u64) -> Source {
    match (&args.input, args.synth) {
        (_, Some(shape)) => Source::Synth {
            spec: shape.with_seed(seed),
        },
        (Some(path), None) => Source::File {
            path: path.clone(),
            ingest: args.ingest_spec(),
            drop_incomplete: args.drop_incomplete,
            downsample: args.downsample.clone().map(|(label, keep)| Downsample {
                label,
                keep,
                seed,
            }),
        },
        (None, None) => unreachable!("clap requires an input or --synth"),
    }
}

fn emit_manifest(manifest: &RunManifest, out: Option<&Path>) -> CmdResult {
    let text = serde_json::to_string_pretty(manifest)?;
    if let Some(path) = out {
        std::fs::write(path, format!("{text}\n"))?;
    }
    writeln!(io::stdout().lock(), "{text}")?;
    Ok(())
}

fn detect(a: DetectArgs) -> CmdResult {
    let src = source(&a.source, a.search.seed);
    let run = execute("detect", src, Solver::LocalSearch, a.search.config())?;
    emit_manifest(&run.manifest, a.out.as_deref())
}

fn exact(a: ExactArgs) -> CmdResult {
    let src = source(&a.source, a.seed);
    let run = execute(
        "exact",
        src,
        Solver::Exhaustive { cap: a.cap },
        SearchConfig::new(a.k),
    )?;
    emit_manifest(&run.manifest, a.out.as_deref())
}

fn eval(a: EvalArgs) -> CmdResult {
    let src = source(&a.source, a.seed);
    let started = Instant::now();
    let dataset = src.load()?;
    let load_time = started.elapsed();
    let labels = dataset.labels().ok_or(catout::Error::MissingLabels)?.to_vec();
    let rare = RareClassSpec::new(a.rare_labels.iter().cloned())?;
    rare.validate(&labels)?;

    let n = dataset.n();
    let cutoffs: Vec<usize> = if a.counts.is_empty() {
        a.ratios.iter().map(|&r| top_count(r, n)).collect()
    } else {
        a.counts.clone()
    };
    let k = a
        .k
        .unwrap_or_else(|| cutoffs.iter().copied().max().unwrap_or(0).min(n));
    let init = match a.init {
        Init::First => InitStrategy::FirstK,
        Init::Random => InitStrategy::SeededRandom { seed: a.seed },
    };
    let config = SearchConfig {
        k,
        init,
        epsilon: a.epsilon,
        max_sweeps: a.max_sweeps,
    };
    let mut run = solve("eval", src, dataset, load_time, Solver::LocalSearch, config)?;
    let ranked = &run.manifest.result.ranked;
    let rows = if a.counts.is_empty() {
        coverage_table(ranked, &labels, &rare, &a.ratios)?
    } else {
        coverage_at_counts(ranked, &labels, &rare, &a.counts)?
    };

    let stdout = io::stdout();
    let mut out = stdout.lock();
    match a.format {
        TableFormat::Text => {
            writeln!(
                out,
                "records {}  rare {}  k {}  objective {:.6} bits  sweeps {}",
                n,
                rare.count_rare(&labels),
                k,
                run.result.objective(),
                run.result.sweeps
            )?;
            out.write_all(format_table(&rows).as_bytes())?;
        }
        TableFormat::Csv => write_csv(&rows, &mut out)?,
    }
    if let Some(path) = &a.out {
        run.manifest.coverage = Some(Coverage {
            rare_labels: rare.labels().map(str::to_owned).collect(),
            total_rare: rare.count_rare(&labels),
            rows,
        });
        let text = serde_json::to_string_pretty(&run.manifest)?;
        std::fs::write(path, format!("{text}\n"))?;
    }
    Ok(())
}

fn bench(a: BenchArgs) -> CmdResult {
    let mut out: Box<dyn Write> = match &a.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    };
    writeln!(out, "n,k,m,sweeps,seconds")?;
    let repeats = a.repeats.max(1);
    for &rows in &a.rows {
        let dataset = generate(&catout::SynthSpec {
            rows,
            attributes: a.attrs,
            values_per_attribute: a.values,
            classes: a.classes,
            seed: a.seed,
        })?;
        for &k in &a.ks {
            let mut times = Vec::with_capacity(repeats);
            let mut sweeps = 0;
            for _ in 0..repeats {
                let started = Instant::now();
                let result = lsa(&dataset, &SearchConfig::new(k))?;
                times.push(started.elapsed().as_secs_f64());
                sweeps = result.sweeps;
            }
            times.sort_by(f64::total_cmp);
            let median = times[times.len() / 2];
            writeln!(out, "{rows},{k},{},{sweeps},{median:.6}", a.attrs)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn generate_cmd(a: GenerateArgs) -> CmdResult {
    let dataset = generate(&a.synth.with_seed(a.seed))?;
    match &a.out {
        Some(path) => write_delimited(&dataset, BufWriter::new(File::create(path)?), a.delimiter)?,
        None => write_delimited(&dataset, io::stdout().lock(), a.delimiter)?,
    }
    Ok(())
}

fn replay(a: ReplayArgs) -> CmdResult {
    let text = std::fs::read_to_string(&a.manifest)?;
    let recorded: RunManifest = serde_json::from_str(&text)?;
    let run = execute(
        &recorded.command,
        recorded.source.clone(),
        recorded.solver,
        recorded.config,
    )?;
    emit_manifest(&run.manifest, None)?;
    if run.manifest.result.outliers != recorded.result.outliers {
        return Err(format!(
            "replay found outliers {:?}, manifest records {:?}",
            run.manifest.result.outliers, recorded.result.outliers
        )
        .into());
    }
    Ok(())
}
