use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use ordlab::badseq::{self, Grid};
use ordlab::engine::{self, AlgoConfig, Budget, EvalError};
use ordlab::numerics::{FormatMode, Rational};
use ordlab::odf::FuncDesc;
use ordlab::ordinal::{self, Ordinal, OrdinalError, ParseOrdinalError};
use ordlab::partition::{self, PartitionError};
use ordlab::plot;

#[derive(Parser)]
#[command(name = "ordlab", version, about = "Exact ordinal-decreasing recursions, partitions and ordinal notations")]
struct Cli {
    /// Algorithm configuration as JSON
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    max_calls: Option<u64>,
    #[arg(long, global = true)]
    max_depth: Option<usize>,
    /// Lift the call and depth limits
    #[arg(long, global = true)]
    unbounded: bool,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate M at one point
    Eval {
        #[command(flatten)]
        algo: AlgoArgs,
        #[arg(long, allow_hyphen_values = true)]
        x: Rational,
    },
    /// Sample M on a range
    Plot {
        #[command(flatten)]
        algo: AlgoArgs,
        #[arg(long, allow_hyphen_values = true)]
        from: Rational,
        #[arg(long, allow_hyphen_values = true)]
        to: Rational,
        #[arg(long, default_value_t = 261)]
        samples: usize,
    },
    /// Ordinal arithmetic on notations
    Ordinal {
        #[command(subcommand)]
        op: OrdinalOp,
    },
    /// Height bound for a recursion with k inner functions
    Bound {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        of: String,
        #[arg(long)]
        os: String,
        /// Comma-separated inner heights
        #[arg(long)]
        og: String,
    },
    /// Interval endpoints by the slope-1 climb
    Partition {
        #[command(flatten)]
        algo: AlgoArgs,
        /// Descriptor in short form, e.g. `const:1` or `affine:1,1`
        #[arg(long, conflicts_with = "preset")]
        desc: Option<FuncDesc>,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        start: Rational,
        #[arg(long, allow_hyphen_values = true)]
        cap: Option<Rational>,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        /// Nesting level for engine configurations
        #[arg(long, default_value_t = 1)]
        level: usize,
        /// Coarser endpoints, comma-separated; defaults to all zeros
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        prefix: Vec<Rational>,
    },
    /// Longest bad chain of a grid CSV (`x,v`) or the randomized lemma checks
    Badseq {
        #[command(subcommand)]
        action: Option<BadseqAction>,
        #[arg(long)]
        grid: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum BadseqAction {
    /// Run the composition, split and sum checks on random instances
    Check {
        #[arg(long, default_value_t = 1000)]
        instances: usize,
    },
}

#[derive(Subcommand)]
enum OrdinalOp {
    Nsum { a: String, b: String },
    Nprod { a: String, b: String },
    Osum { a: String, b: String },
    Oprod { a: String, b: String },
    Cmp { a: String, b: String },
    Veblen { n: u32, a: String },
}

#[derive(Args)]
struct AlgoArgs {
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    n: Option<usize>,
}

enum CliError {
    Usage(String),
    Budget(String),
    Domain(String),
    Range(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Budget(_) => 3,
            CliError::Domain(_) => 4,
            CliError::Range(_) => 5,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Budget(m) | CliError::Domain(m) | CliError::Range(m) => m,
        }
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::BudgetExhausted { .. } | EvalError::PieceBudget(_) => CliError::Budget(e.to_string()),
            EvalError::DomainViolation { .. } | EvalError::SelfCheck(_) => CliError::Domain(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<PartitionError> for CliError {
    fn from(e: PartitionError) -> Self {
        match e {
            PartitionError::Engine(e) => e.into(),
            PartitionError::NotPositive(_) | PartitionError::Odf(_) => CliError::Domain(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<ParseOrdinalError> for CliError {
    fn from(e: ParseOrdinalError) -> Self {
        match e {
            ParseOrdinalError::Range { .. } => CliError::Range(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<OrdinalError> for CliError {
    fn from(e: OrdinalError) -> Self {
        match e {
            OrdinalError::Range(_) => CliError::Range(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn budget(cli: &Cli) -> Budget {
    if cli.unbounded {
        return Budget::unbounded();
    }
    let mut b = Budget::default();
    if let Some(c) = cli.max_calls {
        b.max_calls = Some(c);
    }
    if let Some(d) = cli.max_depth {
        b.max_depth = Some(d);
    }
    b
}

fn load_config(cli: &Cli, algo: &AlgoArgs) -> Result<AlgoConfig, CliError> {
    match (&cli.config, &algo.preset) {
        (Some(_), Some(_)) => Err(CliError::Usage("give either --config or --preset, not both".into())),
        (Some(path), None) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            Ok(AlgoConfig::from_json(&text)?)
        }
        (None, Some(name)) => Ok(AlgoConfig::preset(name, algo.n)?),
        (None, None) => Err(CliError::Usage("an algorithm is required: --preset or --config".into())),
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => write_file(path, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| CliError::Usage(e.to_string()))
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn parse_ord(text: &str) -> Result<Ordinal, CliError> {
    Ok(text.parse::<Ordinal>()?)
}

/// Splits at commas outside parentheses, so `phi(1,0),1` has two items.
fn split_top_level(text: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(text[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(text[start..].trim());
    parts
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Eval { algo, x } => {
            let cfg = load_config(cli, algo)?;
            let (value, stats) = engine::eval_m(&cfg, x, budget(cli))?;
            let text = if cli.format == Some(Format::Json) {
                json!({ "x": x, "value": value, "stats": stats }).to_string() + "\n"
            } else {
                eprintln!(
                    "calls={} distinct={} depth={}",
                    stats.total_calls, stats.distinct_args, stats.max_depth
                );
                format!("{}\n", value.format(FormatMode::Pow2))
            };
            emit(cli, &text)
        }
        Command::Plot { algo, from, to, samples } => {
            let cfg = load_config(cli, algo)?;
            let series = engine::sample_range(&cfg, from, to, *samples, budget(cli))?;
            let text = match cli.format {
                Some(Format::Svg) => plot::to_svg(&series),
                Some(Format::Json) => {
                    let rows: Vec<_> = series
                        .iter()
                        .map(|s| json!({ "x": s.x, "value": s.value.as_ref().ok() }))
                        .collect();
                    serde_json::Value::from(rows).to_string() + "\n"
                }
                _ => plot::to_csv(&series),
            };
            emit(cli, &text)
        }
        Command::Ordinal { op } => {
            let text = match op {
                OrdinalOp::Nsum { a, b } => ordinal::nat_sum(&parse_ord(a)?, &parse_ord(b)?).to_string(),
                OrdinalOp::Nprod { a, b } => ordinal::nat_prod(&parse_ord(a)?, &parse_ord(b)?).to_string(),
                OrdinalOp::Osum { a, b } => ordinal::ord_sum(&parse_ord(a)?, &parse_ord(b)?).to_string(),
                OrdinalOp::Oprod { a, b } => ordinal::ord_prod(&parse_ord(a)?, &parse_ord(b)?).to_string(),
                OrdinalOp::Cmp { a, b } => match ordinal::ord_cmp(&parse_ord(a)?, &parse_ord(b)?) {
                    std::cmp::Ordering::Less => "less".into(),
                    std::cmp::Ordering::Equal => "equal".into(),
                    std::cmp::Ordering::Greater => "greater".into(),
                },
                OrdinalOp::Veblen { n, a } => ordinal::veblen(*n, &parse_ord(a)?).to_string(),
            };
            emit(cli, &format!("{text}\n"))
        }
        Command::Bound { k, of, os, og } => {
            let o_g = split_top_level(og).into_iter().map(parse_ord).collect::<Result<Vec<_>, _>>()?;
            let b = ordinal::theorem2_bound(*k, &parse_ord(of)?, &parse_ord(os)?, &o_g)?;
            emit(cli, &format!("gamma={} bound={}\n", b.gamma, b.bound))
        }
        Command::Partition { algo, desc, start, cap, steps, level, prefix } => {
            let run = match desc {
                Some(d) => {
                    if cli.config.is_some() {
                        return Err(CliError::Usage("give either --desc or --config, not both".into()));
                    }
                    partition::iterate_endpoints(d, start, cap.as_ref(), *steps)?
                }
                None => {
                    let cfg = load_config(cli, algo)?;
                    let prefix = if prefix.is_empty() {
                        vec![Rational::zero(); level.saturating_sub(1)]
                    } else {
                        prefix.clone()
                    };
                    partition::engine_partition(&cfg, *level, &prefix, *steps)?
                }
            };
            let text = if cli.format == Some(Format::Json) {
                serde_json::to_string(&run).expect("serializable") + "\n"
            } else {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(["index", "endpoint"]).expect("in-memory write");
                for (i, p) in run.endpoints.iter().enumerate() {
                    w.write_record([i.to_string(), p.to_string()]).expect("in-memory write");
                }
                String::from_utf8(w.into_inner().expect("flushed")).expect("utf-8")
            };
            emit(cli, &text)
        }
        Command::Badseq { action: Some(BadseqAction::Check { instances }), .. } => {
            let s = badseq::run_lemma_suite(cli.seed, *instances).map_err(|e| CliError::Domain(e.to_string()))?;
            let text = format!(
                "seed={} instances={} composition_violations={} split_violations={} sum_violations={} embedding_violations={}\n",
                cli.seed,
                s.instances,
                s.composition_violations,
                s.split_violations,
                s.sum_violations,
                s.embedding_violations
            );
            emit(cli, &text)?;
            if s.clean() {
                Ok(())
            } else {
                Err(CliError::Domain("lemma check violated".into()))
            }
        }
        Command::Badseq { action: None, grid } => {
            let path = grid.as_ref().ok_or_else(|| CliError::Usage("badseq needs --grid FILE or `check`".into()))?;
            let grid = read_grid(path)?;
            let lb = badseq::longest_bad(&grid);
            let witness: Vec<String> = lb.witness.iter().map(usize::to_string).collect();
            let text = if cli.format == Some(Format::Json) {
                json!({ "length": lb.length, "witness": lb.witness }).to_string() + "\n"
            } else {
                format!("length={}\nwitness={}\n", lb.length, witness.join(","))
            };
            emit(cli, &text)
        }
    }
}

fn read_grid(path: &Path) -> Result<Grid, CliError> {
    let usage = |e: String| CliError::Usage(format!("{}: {e}", path.display()));
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path).map_err(|e| usage(e.to_string()))?;
    let mut points = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| usage(e.to_string()))?;
        let cell = |i: usize| -> Result<Rational, CliError> {
            rec.get(i)
                .ok_or_else(|| usage("expected columns x,v".into()))?
                .parse()
                .map_err(|e: ordlab::numerics::ParseRationalError| usage(e.to_string()))
        };
        points.push((cell(0)?, cell(1)?));
    }
    Grid::new(points).map_err(|e| usage(e.to_string()))
}
