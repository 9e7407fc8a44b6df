use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crypto_mine::harness::{
    default_jobs, individual_secrecy_probe, preset, run_scenario, sweep_alpha, write_rows_csv, write_rows_json,
    Profile, Report, ResultRow, Scenario, SweepSpec,
};
use crypto_mine::huncc::{build_pair_dataset, dataset_digest, write_dataset, HunccSpec};
use crypto_mine::oracle::{entropy, exact_mi, JointTable};
use crypto_mine::{Error, Result};

#[derive(Parser)]
#[command(name = "crypto-mine", version, about = "Neural MI estimation between plaintexts and ciphertexts")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfileArg {
    Quick,
    Paper,
}

impl From<ProfileArg> for Profile {
    fn from(p: ProfileArg) -> Self {
        match p {
            ProfileArg::Quick => Profile::Quick,
            ProfileArg::Paper => Profile::Paper,
        }
    }
}

#[derive(clap::Args)]
struct Output {
    /// Directory for results, traces and reports; results go to stdout otherwise.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a named scenario, a scenario group, or a scenario JSON file.
    Run {
        #[arg(long)]
        scenario: String,
        #[arg(long, value_enum, default_value = "quick")]
        profile: ProfileArg,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        output: Output,
    },
    /// Run the alpha-by-scheme uniformity sweep.
    Sweep {
        /// `table1` or a sweep JSON file.
        #[arg(long, default_value = "table1")]
        spec: String,
        #[arg(long, value_enum, default_value = "quick")]
        profile: ProfileArg,
        /// Comma-separated seeds, overriding the spec's.
        #[arg(long, value_delimiter = ',')]
        seeds: Vec<u64>,
        #[arg(long)]
        jobs: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Estimate MI between an all-ones message and the HUNCC links.
    Probe {
        #[arg(long, value_enum, default_value = "quick")]
        profile: ProfileArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        n_encrypted: usize,
        #[arg(long)]
        n_samples: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Exact MI of a joint probability (or count) table in JSON.
    Oracle {
        #[arg(long)]
        table: PathBuf,
    },
    /// Write a scenario's pair dataset in `.cmin` format.
    Dataset {
        #[arg(long)]
        scenario: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "quick")]
        profile: ProfileArg,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn load_scenarios(arg: &str, profile: Profile, seed: Option<u64>) -> Result<Vec<Scenario>> {
    let path = Path::new(arg);
    let mut v = if path.extension().is_some_and(|e| e == "json") || path.is_file() {
        vec![Scenario::from_json(&fs::read_to_string(path)?)?]
    } else {
        preset(arg, profile)?
    };
    if let Some(seed) = seed {
        v.iter_mut().for_each(|s| s.seed = seed);
    }
    Ok(v)
}

fn file_stem(name: &str) -> String {
    name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '.' || c == '_' { c } else { '_' }).collect()
}

fn emit(reports: &[Report], output: &Output) -> Result<()> {
    let rows: Vec<ResultRow> = reports.iter().map(ResultRow::from).collect();
    let write = |w: &mut dyn Write| match output.format {
        Format::Csv => write_rows_csv(&rows, w),
        Format::Json => write_rows_json(&rows, w),
    };
    let Some(dir) = &output.out else {
        let stdout = io::stdout();
        let mut lock = stdout.lock();
        write(&mut lock)?;
        if matches!(output.format, Format::Json) {
            writeln!(lock)?;
        }
        return Ok(());
    };
    fs::create_dir_all(dir)?;
    let ext = match output.format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    let mut f = BufWriter::new(File::create(dir.join(format!("results.{ext}")))?);
    write(&mut f)?;
    f.flush()?;
    for r in reports {
        let stem = file_stem(&r.scenario);
        r.trace.write_csv(File::create(dir.join(format!("{stem}.trace.csv")))?)?;
        let mut f = BufWriter::new(File::create(dir.join(format!("{stem}.report.json")))?);
        serde_json::to_writer_pretty(&mut f, r)?;
        f.flush()?;
    }
    Ok(())
}

#[derive(Deserialize)]
#[serde(untagged)]
enum TableFile {
    Probabilities(Vec<Vec<f64>>),
    Wrapped {
        #[serde(default)]
        p: Option<Vec<Vec<f64>>>,
        #[serde(default)]
        counts: Option<Vec<Vec<u64>>>,
    },
}

fn oracle(path: &Path) -> Result<()> {
    let table = match serde_json::from_str::<TableFile>(&fs::read_to_string(path)?)? {
        TableFile::Probabilities(p) | TableFile::Wrapped { p: Some(p), counts: None } => JointTable::new(p)?,
        TableFile::Wrapped { p: None, counts: Some(c) } => JointTable::from_counts(&c)?,
        _ => return Err(Error::InvalidTable("give exactly one of `p` or `counts`".into())),
    };
    let out = serde_json::json!({
        "mi_nats": exact_mi(&table),
        "h_x_nats": entropy(&table.marginal_x()),
        "h_y_nats": entropy(&table.marginal_y()),
    });
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(())
}

fn execute(cmd: Cmd) -> Result<()> {
    match cmd {
        Cmd::Run { scenario, profile, seed, output } => {
            let reports = load_scenarios(&scenario, profile.into(), seed)?
                .iter()
                .map(run_scenario)
                .collect::<Result<Vec<_>>>()?;
            emit(&reports, &output)
        }
        Cmd::Sweep { spec, profile, seeds, jobs, output } => {
            let mut sweep = if spec == "table1" {
                SweepSpec::table1(profile.into())
            } else {
                serde_json::from_str(&fs::read_to_string(&spec)?)?
            };
            if !seeds.is_empty() {
                sweep.seeds = seeds;
            }
            let result = sweep_alpha(&sweep, jobs.unwrap_or_else(default_jobs))?;
            emit(&result.reports, &output)?;
            match result.failures.into_iter().next() {
                None => Ok(()),
                Some(f) => Err(f.error),
            }
        }
        Cmd::Probe { profile, seed, n_encrypted, n_samples, output } => {
            let r = individual_secrecy_probe(HunccSpec { n_encrypted }, profile.into(), n_samples, seed)?;
            emit(&[r], &output)
        }
        Cmd::Oracle { table } => oracle(&table),
        Cmd::Dataset { scenario, out, profile, seed } => {
            let scenarios = load_scenarios(&scenario, profile.into(), seed)?;
            let [s] = scenarios.as_slice() else {
                return Err(Error::InvalidScenario(format!("`{scenario}` names {} scenarios, need one", scenarios.len())));
            };
            let ds = build_pair_dataset(&s.pair_spec(), s.n_samples, s.seed)?;
            write_dataset(&ds, BufWriter::new(File::create(&out)?))?;
            eprintln!("{} samples, dx {}, dy {}, sha256 {}", ds.len(), ds.dx(), ds.dy(), dataset_digest(&ds));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_config() { 1 } else { 2 })
        }
    }
}
