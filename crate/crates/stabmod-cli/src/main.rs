//! Batch front end: parse flags, resolve the run configuration, dispatch.
//!
//! Exit codes: 0 on success or a passing check, 1 on a failing check or a
//! computation error, 2 on a usage error. Set `STABMOD_CACHE` to a
//! directory to reuse reports across identical invocations.

mod expr;
mod report;
mod run;

use clap::{Parser, Subcommand, ValueEnum};
use run::{Command, RunConfig};
use stabmod::localize::Side;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "stabmod",
    version,
    about = "Margolis homology, stable module categories, and segmental localization over F2",
    after_help = "Module expressions combine named modules with '*' (tensor), '+' (direct sum), \
                  dual(...), S^t (shift), and O^s (syzygy; negative s for cosyzygies). Names: \
                  'unit', 'rand' (seeded), 'joker'/'J' over A1, and the stem of every --module file."
)]
struct Cli {
    /// Named algebra preset: A1, E1, E2, or lambda(k).
    #[arg(long, global = true, value_name = "NAME")]
    preset: Option<String>,

    /// Algebra presentation from a JSON file.
    #[arg(long, global = true, value_name = "FILE", conflicts_with = "preset")]
    algebra: Option<PathBuf>,

    /// Module JSON file, named by its file stem in expressions. Repeatable.
    #[arg(long, global = true, value_name = "FILE")]
    module: Vec<PathBuf>,

    /// Seed for the built-in 'rand' module.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Upper bound on worker threads; the current kernels are single-threaded.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Below,
    Above,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check every Hopf axiom of the algebra and print the table.
    Validate,
    /// Margolis homology dimensions of a module, per operation.
    Margolis {
        /// Module expression.
        expr: String,
    },
    /// Decide freeness; exits 1 when the module is not free.
    FreeCheck {
        expr: String,
    },
    /// Split off free summands and report what remains.
    Strip {
        expr: String,
    },
    /// Syzygies of a module; negative powers take cosyzygies.
    Omega {
        expr: String,
        /// How many times to loop.
        #[arg(long, default_value_t = 1)]
        power: i64,
    },
    /// Bigraded stable Ext chart between two modules.
    Ext {
        /// Source module expression.
        #[arg(default_value = "unit")]
        source: String,
        /// Target module expression.
        #[arg(default_value = "unit")]
        target: String,
        /// Homological degree range.
        #[arg(long, value_name = "LO:HI", default_value = "0:5", value_parser = parse_i64_pair)]
        s_range: (i64, i64),
        /// Internal degree range.
        #[arg(long, value_name = "LO:HI", default_value = "0:14", value_parser = parse_i64_pair)]
        window: (i64, i64),
    },
    /// Tensor product of two modules.
    Tensor {
        left: String,
        right: String,
    },
    /// Vector space dual with flipped grading.
    Dual {
        expr: String,
    },
    /// Concentration profile, and point membership over A1.
    Support {
        expr: String,
    },
    /// Decide whether segments partition the operation range.
    CoverCheck {
        /// Segments, e.g. 1:1,2:2.
        #[arg(long, value_name = "A:B,...", value_parser = parse_cover)]
        cover: Cover,
    },
    /// Localize a module at a segment of operations.
    Localize {
        expr: String,
        /// The segment of operations to keep.
        #[arg(long, value_name = "A:B", value_parser = parse_usize_pair)]
        segment: (usize, usize),
        /// Which half of the degree axis the model grows into.
        #[arg(long, value_enum)]
        side: SideArg,
        /// Degree window for the finite model.
        #[arg(long, value_name = "LO:HI", value_parser = parse_i64_pair)]
        window: (i64, i64),
    },
    /// Split a module into colocal and local parts after an operation.
    Postnikov {
        expr: String,
        /// Last operation of the colocal block.
        #[arg(long, value_name = "K")]
        split: usize,
        #[arg(long, value_name = "LO:HI", value_parser = parse_i64_pair)]
        window: (i64, i64),
    },
    /// Mayer-Vietoris exactness of localized hom tables over a cover.
    MvCheck {
        source: String,
        target: String,
        #[arg(long, value_name = "A:B,...", value_parser = parse_cover)]
        cover: Cover,
        #[arg(long, value_name = "LO:HI", value_parser = parse_i64_pair)]
        window: (i64, i64),
    },
    /// Round-trip a module through restriction to a cover and gluing.
    Glue {
        expr: String,
        #[arg(long, value_name = "A:B,...", value_parser = parse_cover)]
        cover: Cover,
        #[arg(long, value_name = "LO:HI", value_parser = parse_i64_pair)]
        window: (i64, i64),
    },
    /// Invertibility and degree-vector separation of sample modules.
    PicCheck {
        /// Module expressions forming the sample.
        #[arg(required = true)]
        exprs: Vec<String>,
        /// Partition for the separation test; defaults to singletons.
        #[arg(long, value_name = "A:B,...", value_parser = parse_cover)]
        cover: Option<Cover>,
    },
    /// Minimal free resolution: generators per stage, minimality.
    Resolve {
        expr: String,
        /// Homological degrees to compute.
        #[arg(long, default_value_t = 4)]
        stages: usize,
        /// Internal degree cutoff; defaults to a bound fitting the stages.
        #[arg(long, value_name = "T")]
        t_cut: Option<i64>,
    },
}

/// Newtype so clap can carry a parsed cover list.
#[derive(Clone, Debug)]
struct Cover(Vec<(usize, usize)>);

fn parse_i64_pair(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("'{s}' is not of the form LO:HI"))?;
    let lo = a.trim().parse::<i64>().map_err(|_| format!("'{a}' is not an integer"))?;
    let hi = b.trim().parse::<i64>().map_err(|_| format!("'{b}' is not an integer"))?;
    if lo > hi {
        return Err(format!("empty range {lo}:{hi}"));
    }
    Ok((lo, hi))
}

fn parse_usize_pair(s: &str) -> Result<(usize, usize), String> {
    let (lo, hi) = parse_i64_pair(s)?;
    if lo < 0 {
        return Err(format!("'{s}' must be nonnegative"));
    }
    Ok((lo as usize, hi as usize))
}

fn parse_cover(s: &str) -> Result<Cover, String> {
    let segs = s
        .split(',')
        .map(parse_usize_pair)
        .collect::<Result<Vec<_>, _>>()?;
    if segs.is_empty() {
        return Err("empty cover".into());
    }
    Ok(Cover(segs))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = match cli.cmd {
        Cmd::Validate => Command::Validate,
        Cmd::Margolis { expr } => Command::Margolis { expr },
        Cmd::FreeCheck { expr } => Command::FreeCheck { expr },
        Cmd::Strip { expr } => Command::Strip { expr },
        Cmd::Omega { expr, power } => Command::Omega { expr, power },
        Cmd::Ext { source, target, s_range, window } => {
            Command::Ext { source, target, s_range, window }
        }
        Cmd::Tensor { left, right } => Command::Tensor { left, right },
        Cmd::Dual { expr } => Command::Dual { expr },
        Cmd::Support { expr } => Command::Support { expr },
        Cmd::CoverCheck { cover } => Command::CoverCheck { cover: cover.0 },
        Cmd::Localize { expr, segment, side, window } => Command::Localize {
            expr,
            segment,
            side: match side {
                SideArg::Below => Side::Below,
                SideArg::Above => Side::Above,
            },
            window,
        },
        Cmd::Postnikov { expr, split, window } => Command::Postnikov { expr, split, window },
        Cmd::MvCheck { source, target, cover, window } => {
            Command::MvCheck { source, target, cover: cover.0, window }
        }
        Cmd::Glue { expr, cover, window } => Command::Glue { expr, cover: cover.0, window },
        Cmd::PicCheck { exprs, cover } => {
            Command::PicCheck { exprs, cover: cover.map(|c| c.0) }
        }
        Cmd::Resolve { expr, stages, t_cut } => Command::Resolve { expr, stages, t_cut },
    };
    let config = RunConfig {
        command,
        preset: cli.preset,
        algebra_file: cli.algebra,
        module_files: cli.module,
        seed: cli.seed,
        json_output: matches!(cli.format, Format::Json),
        threads: cli.threads,
        cache_dir: std::env::var_os("STABMOD_CACHE").map(PathBuf::from),
    };
    ExitCode::from(run::run(&config) as u8)
}
