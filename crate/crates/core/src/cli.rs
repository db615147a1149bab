//! Command-line front end.
//!
//! Exit codes: 0 success, 1 the matrix is not an SHF of the given type,
//! 2 bad input (arguments, file format, violated hypotheses), 3 I/O failure.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bigcomb::BigCount;
use crate::bounds::{
    baztran2011_bound, baztran2013_bound, besz_bound, implied_max_n, main_min_n, render_scientific,
    sshf_implied_max_n, sshf_min_n, Bt2013Variant, ExpMode, GammaMode, Rounding,
};
use crate::constructor::write_construction;
use crate::error::ShfError;
use crate::model::{parse_matrix, ShfType};
use crate::report::{BoundReport, VerdictReport};
use crate::table::{build_table, default_grid, grid, render_csv, render_markdown, TableOptions};
use crate::verifier::verify_with_threads;

pub const EXIT_OK: u8 = 0;
pub const EXIT_NOT_SHF: u8 = 1;
pub const EXIT_BAD_INPUT: u8 = 2;
pub const EXIT_IO: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "shf",
    version,
    about = "Separating hash families of type {w1^(q-1), w2}"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write the optimal representation matrix for type {w1^(q-1), w2}.
    Construct {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        w1: usize,
        #[arg(long)]
        w2: usize,
        /// Output file, or `-` for stdout.
        #[arg(long)]
        out: PathBuf,
    },
    /// Check that a matrix file is an SHF of the given type.
    Verify {
        matrix: PathBuf,
        /// Comma list of block sizes, e.g. `1,1,2`.
        #[arg(long = "type")]
        ty: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Worker threads; 0 uses every core, 1 is the sequential reference path.
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
    /// Evaluate one bound.
    Bound {
        #[command(subcommand)]
        method: BoundCommand,
    },
    /// Regenerate the bound comparison table.
    Table {
        #[arg(long, value_enum, default_value_t = TableFormat::Md)]
        format: TableFormat,
        #[arg(long, value_enum, default_value_t = Grid::Default)]
        grid: Grid,
        /// Alphabet sizes for a custom grid.
        #[arg(long = "qs", value_delimiter = ',')]
        qs: Vec<u64>,
        #[arg(long = "w1s", value_delimiter = ',')]
        w1s: Vec<u64>,
        #[arg(long = "w2s", value_delimiter = ',')]
        w2s: Vec<u64>,
        #[arg(long, value_enum, default_value_t = Conventions::Published)]
        conventions: Conventions,
    },
}

#[derive(Debug, Subcommand)]
enum BoundCommand {
    /// Tight lower bound on N (with --n) or the implied bound on n (with --N).
    Main {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        w1: u64,
        #[arg(long)]
        w2: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Strong separating hash family bound C(n, q-1) for type {1^t1, t2}.
    Sshf {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        t1: u64,
        #[arg(long)]
        t2: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    Besz {
        #[command(flatten)]
        general: General,
        #[arg(long, value_enum, default_value_t = GammaArg::TwoSmallest)]
        gamma: GammaArg,
        /// The designated pair for `--gamma designated`, e.g. `2,3`.
        #[arg(long, value_delimiter = ',')]
        pair: Vec<usize>,
    },
    Bt2011 {
        #[command(flatten)]
        general: General,
    },
    Bt2013 {
        #[command(flatten)]
        general: General,
        #[arg(long, value_enum, default_value_t = VariantArg::Printed)]
        variant: VariantArg,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct Target {
    /// Number of columns: report the minimum number of rows.
    #[arg(long)]
    n: Option<u64>,
    /// Number of rows: report the implied maximum number of columns.
    #[arg(long = "N", alias = "rows")]
    rows: Option<BigCount>,
}

#[derive(Debug, Args)]
struct General {
    #[arg(long = "N", alias = "rows")]
    rows: BigCount,
    #[arg(long)]
    q: u64,
    #[arg(long = "type")]
    ty: String,
    #[arg(long, value_enum, default_value_t = ExpArg::Ceil)]
    exp: ExpArg,
    #[arg(long, value_enum, default_value_t = RoundingArg::HalfEven)]
    rounding: RoundingArg,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TableFormat {
    Md,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Grid {
    Default,
    Custom,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Conventions {
    /// Reproduce the published table.
    Published,
    /// Exact N and the bounds as originally stated.
    Printed,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ExpArg {
    Ceil,
    FloorPlusOne,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GammaArg {
    TwoSmallest,
    Designated,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum VariantArg {
    Printed,
    Tabulated,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RoundingArg {
    HalfEven,
    Truncate,
}

impl From<ExpArg> for ExpMode {
    fn from(e: ExpArg) -> Self {
        match e {
            ExpArg::Ceil => ExpMode::Ceil,
            ExpArg::FloorPlusOne => ExpMode::FloorPlusOne,
        }
    }
}

impl From<RoundingArg> for Rounding {
    fn from(r: RoundingArg) -> Self {
        match r {
            RoundingArg::HalfEven => Rounding::HalfEven,
            RoundingArg::Truncate => Rounding::Truncate,
        }
    }
}

impl From<VariantArg> for Bt2013Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Printed => Bt2013Variant::Printed,
            VariantArg::Tabulated => Bt2013Variant::Tabulated,
        }
    }
}

enum Failure {
    BadInput(String),
    Io(String),
}

impl From<ShfError> for Failure {
    fn from(e: ShfError) -> Self {
        Failure::BadInput(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_BAD_INPUT
            } else {
                EXIT_OK
            };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(Failure::BadInput(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_BAD_INPUT
        }
        Err(Failure::Io(msg)) => {
            let _ = writeln!(err, "I/O error: {msg}");
            EXIT_IO
        }
    }
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8, Failure> {
    match command {
        Command::Construct {
            n,
            q,
            w1,
            w2,
            out: path,
        } => {
            crate::constructor::construct_rows(n, q, w1, w2)?;
            if path.as_os_str() == "-" {
                let rows = write_construction(out, n, q, w1, w2)?;
                writeln!(err, "N = {rows}")?;
            } else {
                let mut file = BufWriter::new(File::create(&path)?);
                let rows = write_construction(&mut file, n, q, w1, w2)?;
                file.flush()?;
                writeln!(out, "{rows}")?;
            }
            Ok(EXIT_OK)
        }
        Command::Verify {
            matrix,
            ty,
            format,
            threads,
        } => {
            let text = std::fs::read_to_string(&matrix)?;
            let m = parse_matrix(&text)?;
            let ty: ShfType = ty.parse()?;
            let verdict = verify_with_threads(&m, &ty, threads)?;
            match format {
                Format::Json => {
                    let json = serde_json::to_string(&VerdictReport::from(&verdict))
                        .expect("verdict serializes");
                    writeln!(out, "{json}")?;
                }
                Format::Text => match &verdict.witness {
                    None => writeln!(
                        out,
                        "ok: {}x{} matrix over q = {} is an SHF of type {ty} ({} families checked)",
                        m.rows(),
                        m.cols(),
                        m.q(),
                        verdict.families_checked
                    )?,
                    Some(w) => writeln!(
                        out,
                        "not an SHF of type {ty}: no row separates {w} (family #{} in canonical order)",
                        verdict.families_checked
                    )?,
                },
            }
            Ok(if verdict.ok { EXIT_OK } else { EXIT_NOT_SHF })
        }
        Command::Bound { method } => bound(method, out),
        Command::Table {
            format,
            grid: which,
            qs,
            w1s,
            w2s,
            conventions,
        } => {
            let cells = match which {
                Grid::Default => default_grid(),
                Grid::Custom => {
                    if qs.is_empty() || w1s.is_empty() || w2s.is_empty() {
                        return Err(Failure::BadInput(
                            "a custom grid needs --qs, --w1s and --w2s".into(),
                        ));
                    }
                    grid(&qs, &w1s, &w2s)
                }
            };
            let opts = match conventions {
                Conventions::Published => TableOptions::published(),
                Conventions::Printed => TableOptions::printed(),
            };
            let rows = build_table(&cells, &opts)?;
            let text = match format {
                TableFormat::Md => render_markdown(&rows),
                TableFormat::Csv => render_csv(&rows),
            };
            out.write_all(text.as_bytes())?;
            Ok(EXIT_OK)
        }
    }
}

fn emit(out: &mut dyn Write, format: Format, report: &BoundReport) -> Result<u8, Failure> {
    match format {
        Format::Json => {
            let json = serde_json::to_string(report).expect("bound report serializes");
            writeln!(out, "{json}")?;
        }
        Format::Text => {
            let value = report.value.as_deref().unwrap_or("-");
            writeln!(out, "{value}")?;
            writeln!(out, "rendering: {}", report.rendering)?;
            writeln!(out, "omega: {}", report.omega)?;
            if report.reconstructed {
                writeln!(out, "conventions: reconstructed from the published table")?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn bound(method: BoundCommand, out: &mut dyn Write) -> Result<u8, Failure> {
    match method {
        BoundCommand::Main {
            target,
            q,
            w1,
            w2,
            format,
        } => {
            let report = match (target.n, target.rows) {
                (Some(n), _) => {
                    let v = main_min_n(n, q, w1, w2)?;
                    BoundReport::min_rows("main", &v, render_scientific(&v, Rounding::HalfEven))
                }
                (None, Some(rows)) => {
                    BoundReport::implied("main", implied_max_n(&rows, q, w1, w2)?)
                }
                (None, None) => unreachable!("clap requires one target"),
            };
            emit(out, format, &report)
        }
        BoundCommand::Sshf {
            target,
            q,
            t1,
            t2,
            format,
        } => {
            let report = match (target.n, target.rows) {
                (Some(n), _) => {
                    let v = sshf_min_n(n, q, t1, t2)?;
                    BoundReport::min_rows("sshf", &v, render_scientific(&v, Rounding::HalfEven))
                }
                (None, Some(rows)) => {
                    BoundReport::implied("sshf", sshf_implied_max_n(&rows, q, t1, t2)?)
                }
                (None, None) => unreachable!("clap requires one target"),
            };
            emit(out, format, &report)
        }
        BoundCommand::Besz {
            general,
            gamma,
            pair,
        } => {
            let ty: ShfType = general.ty.parse()?;
            let gamma = match gamma {
                GammaArg::TwoSmallest => GammaMode::TwoSmallest,
                GammaArg::Designated => match pair[..] {
                    [a, b] => GammaMode::DesignatedPair(a, b),
                    _ => {
                        return Err(Failure::BadInput(
                            "--gamma designated needs --pair a,b".into(),
                        ))
                    }
                },
            };
            let r = besz_bound(
                &general.rows,
                general.q,
                &ty,
                gamma,
                general.exp.into(),
                general.rounding.into(),
            )?;
            emit(out, general.format, &BoundReport::general("besz", &r))
        }
        BoundCommand::Bt2011 { general } => {
            let ty: ShfType = general.ty.parse()?;
            let r = baztran2011_bound(
                &general.rows,
                general.q,
                &ty,
                general.exp.into(),
                general.rounding.into(),
            )?;
            emit(out, general.format, &BoundReport::general("bt2011", &r))
        }
        BoundCommand::Bt2013 { general, variant } => {
            let ty: ShfType = general.ty.parse()?;
            let r = baztran2013_bound(
                &general.rows,
                general.q,
                &ty,
                general.exp.into(),
                variant.into(),
                general.rounding.into(),
            )?;
            emit(out, general.format, &BoundReport::general("bt2013", &r))
        }
    }
}
