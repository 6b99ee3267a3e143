//! `vishift`: command-line front end for exact VI-module computations.

pub mod cache;
pub mod commands;
pub mod definition;
pub mod error;
pub mod report;

use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use vishift_core::exactmat::CoeffRing;

use cache::Cache;
use commands::Loaded;
use definition::parse_ring;
use error::{CliError, CliResult, EXIT_FAILED, EXIT_OK};
use report::{Body, Meta, Report, Window};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
    Tsv,
}

#[derive(Debug, Parser)]
#[command(
    name = "vishift",
    version,
    about = "Exact computations with VI-modules over finite fields"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, global = true, value_enum, default_value = "human")]
    pub format: Format,

    /// Cache directory; the VISHIFT_CACHE_DIR environment variable takes precedence.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,

    #[arg(long, global = true)]
    pub no_cache: bool,

    /// Omit the timestamp and cache statistics, for byte comparison of reports.
    #[arg(long, global = true)]
    pub compare: bool,
}

#[derive(Debug, Args)]
pub struct ModuleArgs {
    /// A .vimod file, or the name of a bundled module (A, k0, itriv1, itriv2, itriv1_k0).
    pub module: String,

    /// Largest degree of the window (default 5 for q = 2, 4 for q = 3, else 3).
    #[arg(long)]
    pub max: Option<usize>,

    /// Coefficient ring override: "rational" or "mod <p>".
    #[arg(long)]
    pub coeff: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// dim M(F^n) on the window.
    Dims(ModuleArgs),
    /// VI-homology H0 and the generation degree t0.
    H0(ModuleArgs),
    /// VI-homology H1 and the relation degree t1.
    H1(ModuleArgs),
    /// Torsion submodule along standard inclusions.
    Torsion {
        #[command(flatten)]
        m: ModuleArgs,
        /// Also compare against the union over all injections.
        #[arg(long)]
        oracle: bool,
    },
    /// Semi-induced certificate, optionally after applying the reduced shift.
    Certify {
        #[command(flatten)]
        m: ModuleArgs,
        /// Number of reduced shifts to apply first.
        #[arg(long, default_value_t = 0)]
        bar: usize,
    },
    /// Dimensions of the shift or reduced shift.
    Shift {
        #[command(flatten)]
        m: ModuleArgs,
        /// Use the reduced shift (coinvariants of the unipotent radical).
        #[arg(long)]
        bar: bool,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// Local cohomology from the shift complex.
    Localcoh(ModuleArgs),
    /// Stable degree.
    Delta(ModuleArgs),
    /// Regularity bound r(M) and the check t1 - 1 <= r.
    Regularity(ModuleArgs),
    /// Exact polynomial P with dim M(F^n) = P(q^n).
    Fit {
        #[command(flatten)]
        m: ModuleArgs,
        /// First degree of the fit (default: one past the top local cohomology degree).
        #[arg(long)]
        from: Option<usize>,
        /// Degree bound (default: two fewer than the number of points).
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Identity suites at the default window sizes.
    Selftest {
        /// Field sizes to test; repeatable.
        #[arg(long = "q", default_values_t = [2u32, 3])]
        q: Vec<u32>,
        #[arg(long, default_value = "rational")]
        coeff: String,
    },
}

/// What the process should print and return.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

fn pair(k: &str, v: impl ToString) -> (String, String) {
    (k.to_string(), v.to_string())
}

struct Job {
    name: &'static str,
    inputs: Vec<(String, String)>,
    window: Option<Window>,
    key: Vec<String>,
}

fn module_job(name: &'static str, l: &Loaded, args: &[(String, String)]) -> Job {
    let mut inputs = vec![
        pair("module", l.def.display_name()),
        pair("hash", &l.hash),
        pair("q", l.def.q),
        pair("coeff", l.ring.label()),
        pair("max", l.window),
    ];
    inputs.extend_from_slice(args);
    let key = std::iter::once(name.to_string())
        .chain(
            inputs
                .iter()
                .filter(|(k, _)| k != "module")
                .map(|(k, v)| format!("{k}={v}")),
        )
        .collect();
    Job {
        name,
        inputs,
        window: Some(Window {
            min: 0,
            max: l.window,
        }),
        key,
    }
}

fn execute(cli: &Cli) -> CliResult<Report> {
    let mut cache = if cli.no_cache {
        Cache::disabled()
    } else {
        Cache::new(cache::resolve_dir(cli.cache_dir.clone()))
    };
    let load = |m: &ModuleArgs| Loaded::new(&m.module, m.max, m.coeff.as_deref());
    let (job, body) = match &cli.command {
        Command::Selftest { q, coeff } => {
            let ring: CoeffRing = parse_ring(coeff)?;
            let qs = q.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
            let job = Job {
                name: "selftest",
                inputs: vec![pair("q", &qs), pair("coeff", ring.label())],
                window: None,
                key: vec!["selftest".into(), qs, ring.label()],
            };
            let body = cached(&mut cache, &job, || commands::selftest(q, ring))?;
            (job, body)
        }
        Command::Dims(m) => run_module(&mut cache, "dims", &load(m)?, &[], commands::dims)?,
        Command::H0(m) => run_module(&mut cache, "h0", &load(m)?, &[], commands::h0)?,
        Command::H1(m) => run_module(&mut cache, "h1", &load(m)?, &[], commands::h1)?,
        Command::Torsion { m, oracle } => run_module(
            &mut cache,
            "torsion",
            &load(m)?,
            &[pair("oracle", oracle)],
            |l| commands::torsion_cmd(l, *oracle),
        )?,
        Command::Certify { m, bar } => {
            run_module(&mut cache, "certify", &load(m)?, &[pair("bar", bar)], |l| {
                commands::certify(l, *bar)
            })?
        }
        Command::Shift { m, bar, count } => run_module(
            &mut cache,
            "shift",
            &load(m)?,
            &[pair("bar", bar), pair("count", count)],
            |l| commands::shift(l, *bar, *count),
        )?,
        Command::Localcoh(m) => {
            run_module(&mut cache, "localcoh", &load(m)?, &[], commands::localcoh)?
        }
        Command::Delta(m) => run_module(&mut cache, "delta", &load(m)?, &[], commands::delta)?,
        Command::Regularity(m) => run_module(
            &mut cache,
            "regularity",
            &load(m)?,
            &[],
            commands::regularity,
        )?,
        Command::Fit { m, from, degree } => {
            let opt = |v: &Option<usize>| v.map_or("auto".to_string(), |x| x.to_string());
            run_module(
                &mut cache,
                "fit",
                &load(m)?,
                &[pair("from", opt(from)), pair("degree", opt(degree))],
                |l| commands::fit(l, *from, *degree),
            )?
        }
    };
    let mut report = Report::new(job.name, job.inputs, job.window, body);
    if !cli.compare {
        let timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_secs());
        report.meta = Some(Meta {
            timestamp,
            cache: cache.stats.clone(),
        });
    }
    Ok(report)
}

fn cached(
    cache: &mut Cache,
    job: &Job,
    compute: impl FnOnce() -> CliResult<Body>,
) -> CliResult<Body> {
    let parts: Vec<&str> = job.key.iter().map(String::as_str).collect();
    cache.get_or_compute(&Cache::key(&parts), compute)
}

fn run_module(
    cache: &mut Cache,
    name: &'static str,
    l: &Loaded,
    args: &[(String, String)],
    f: impl FnOnce(&Loaded) -> CliResult<Body>,
) -> CliResult<(Job, Body)> {
    let job = module_job(name, l, args);
    let body = cached(cache, &job, || f(l))?;
    Ok((job, body))
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Outcome {
    match execute(cli) {
        Ok(report) => {
            let stdout = match cli.format {
                Format::Human => report.to_human(),
                Format::Json => report.to_json(),
                Format::Tsv => report.to_tsv(),
            };
            let failed: Vec<&str> = report
                .body
                .verdicts
                .iter()
                .filter(|v| !v.pass)
                .map(|v| v.name.as_str())
                .collect();
            let (code, stderr) = if failed.is_empty() {
                (EXIT_OK, String::new())
            } else {
                (
                    EXIT_FAILED,
                    format!("verification failed: {}\n", failed.join("; ")),
                )
            };
            Outcome {
                stdout,
                stderr,
                code,
            }
        }
        Err(e) => e.into(),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) if e.use_stderr() => Outcome {
            stdout: String::new(),
            stderr: e.render().to_string(),
            code: error::EXIT_INVALID,
        },
        Err(e) => Outcome {
            stdout: e.render().to_string(),
            stderr: String::new(),
            code: EXIT_OK,
        },
    }
}

impl From<CliError> for Outcome {
    fn from(e: CliError) -> Self {
        Outcome {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            code: e.exit_code(),
        }
    }
}
