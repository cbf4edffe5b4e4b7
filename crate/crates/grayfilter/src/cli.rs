//! Command-line front end. Images are read and written as PGM; diagnostics
//! go to standard error and data only to files.
//!
//! Exit status: 0 success, 1 usage error, 2 I/O or format error, 3 domain
//! error (for example adding images of different sizes).

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use grayfilter_core::{
    compute_histogram, render_histogram, BorderPolicy, DisplayMode, LaplacianVariant, Lut,
    Threshold,
};

use crate::bench::{bench_convolve, BenchConfig};
use crate::error::{Error, Result};
use crate::fsio::{load_image, read_text, save_image, write_atomic};
use crate::pgm::PgmFormat;
use crate::pipeline::{run_ops_with, Addend, Op, PipelineSpec};
use crate::text::{histogram_csv, parse_kernel, parse_lut};
use crate::threads::Threaded;

#[derive(Parser, Debug)]
#[command(name = "grayfilter", version, about = "Spatial-domain filters for 8-bit grayscale PGM images")]
pub struct Cli {
    /// Worker threads; defaults to one per core. Output does not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct IoArgs {
    /// Input PGM (P2 or P5).
    #[arg(short, long)]
    input: PathBuf,

    /// Output PGM.
    #[arg(short, long)]
    output: PathBuf,

    /// Output encoding: p2 or p5.
    #[arg(long, default_value = "p5")]
    format: PgmFormat,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Photographic negative, 255 - r.
    Negate(IoArgs),

    /// Power-law gray-scale stretch, 255 * (r / 255)^gamma.
    Stretch {
        #[command(flatten)]
        io: IoArgs,
        #[arg(long, default_value_t = 2.0)]
        gamma: f64,
    },

    /// Apply a 256-entry lookup table read from a text file.
    Lut {
        #[command(flatten)]
        io: IoArgs,
        /// Text file with 256 whitespace-separated gray levels.
        #[arg(long)]
        table: PathBuf,
    },

    /// Discrete Laplacian response.
    Laplacian {
        #[command(flatten)]
        io: IoArgs,
        /// four or eight.
        #[arg(long, default_value = "four")]
        variant: LaplacianVariant,
        /// clamp or rescale.
        #[arg(long, default_value = "clamp")]
        display: DisplayMode,
        /// replicate or zero.
        #[arg(long, default_value = "replicate")]
        border: BorderPolicy,
    },

    /// Laplacian sharpening, f - ∇²f.
    Sharpen {
        #[command(flatten)]
        io: IoArgs,
        #[arg(long, default_value = "four")]
        variant: LaplacianVariant,
        #[arg(long, default_value = "replicate")]
        border: BorderPolicy,
    },

    /// Unsharp masking, f - box_blur(f).
    Unsharp {
        #[command(flatten)]
        io: IoArgs,
        #[arg(long, default_value_t = 1)]
        radius: usize,
        #[arg(long, default_value = "clamp")]
        display: DisplayMode,
        #[arg(long, default_value = "replicate")]
        border: BorderPolicy,
    },

    /// Convolve with a kernel file ("kheight kwidth" then the rows).
    Convolve {
        #[command(flatten)]
        io: IoArgs,
        #[arg(long)]
        kernel: PathBuf,
        #[arg(long, default_value = "replicate")]
        border: BorderPolicy,
        #[arg(long, default_value = "clamp")]
        display: DisplayMode,
    },

    /// Threshold to a 0/255 image (levels >= threshold become 255).
    Binarize {
        #[command(flatten)]
        io: IoArgs,
        #[arg(long, default_value_t = 128)]
        threshold: u8,
    },

    /// Binary edge points of the thresholded image, rendered as 0/255.
    Edges {
        #[command(flatten)]
        io: IoArgs,
        #[arg(long, default_value_t = 128)]
        threshold: u8,
    },

    /// Saturating pixelwise sum of the input and a second image.
    Add {
        #[command(flatten)]
        io: IoArgs,
        /// Second input PGM.
        #[arg(short = 'j', long = "second")]
        second: PathBuf,
    },

    /// North-east relief shadow around intensity steps.
    Shadow {
        #[command(flatten)]
        io: IoArgs,
        /// Negate the shadow rendering.
        #[arg(long)]
        invert: bool,
    },

    /// Gray-level histogram as CSV, optionally rendered as a bar chart.
    Histogram {
        #[arg(short, long)]
        input: PathBuf,
        /// CSV destination ("level,count" plus 256 rows).
        #[arg(long)]
        csv: PathBuf,
        /// Optional 256x100 bar-chart PGM destination.
        #[arg(long)]
        render: Option<PathBuf>,
        #[arg(long, default_value = "p5")]
        format: PgmFormat,
    },

    /// Run a JSON pipeline: {"stages":[{"op":"negate"}, ...]}.
    Pipeline {
        #[command(flatten)]
        io: IoArgs,
        /// Pipeline JSON. Relative file references resolve against its directory.
        #[arg(long)]
        spec: PathBuf,
    },

    /// Time repeated correlation of a seeded random image with a ones kernel.
    Bench {
        #[arg(long, default_value_t = 512)]
        size: usize,
        #[arg(long, default_value_t = 3)]
        ksize: usize,
        #[arg(long, default_value_t = 10)]
        iters: usize,
        /// Also write the report to this file.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("grayfilter: {e}");
            e.exit_code()
        }
    }
}

fn filter(exec: &Threaded, io: &IoArgs, op: Op) -> Result<()> {
    let img = load_image(&io.input)?;
    let out = run_ops_with(exec, std::slice::from_ref(&op), &img).map_err(unwrap_stage)?;
    save_image(&io.output, &out, io.format)
}

/// Single-op runs report the bare error, not a stage wrapper.
fn unwrap_stage(e: Error) -> Error {
    match e {
        Error::Stage { source, .. } => *source,
        other => other,
    }
}

fn execute(cli: Cli) -> Result<()> {
    let exec = cli.threads.map(Threaded::new).unwrap_or_default();
    match cli.command {
        Command::Negate(io) => filter(&exec, &io, Op::Negate),
        Command::Stretch { io, gamma } => filter(&exec, &io, Op::Stretch(Lut::power_law(gamma)?)),
        Command::Lut { io, table } => {
            let lut = parse_lut(&read_text(&table)?).map_err(|source| Error::Text {
                path: table.clone(),
                source,
            })?;
            filter(&exec, &io, Op::Lut(lut))
        }
        Command::Laplacian {
            io,
            variant,
            display,
            border,
        } => filter(
            &exec,
            &io,
            Op::Laplacian {
                variant,
                display,
                border,
            },
        ),
        Command::Sharpen {
            io,
            variant,
            border,
        } => filter(&exec, &io, Op::Sharpen { variant, border }),
        Command::Unsharp {
            io,
            radius,
            display,
            border,
        } => {
            grayfilter_core::enhance::validate_radius(radius)?;
            filter(
                &exec,
                &io,
                Op::Unsharp {
                    radius,
                    display,
                    border,
                },
            )
        }
        Command::Convolve {
            io,
            kernel,
            border,
            display,
        } => {
            let k = parse_kernel(&read_text(&kernel)?).map_err(|source| Error::Text {
                path: kernel.clone(),
                source,
            })?;
            filter(
                &exec,
                &io,
                Op::Convolve {
                    kernel: k,
                    border,
                    display,
                },
            )
        }
        Command::Binarize { io, threshold } => filter(&exec, &io, Op::Binarize(Threshold(threshold))),
        Command::Edges { io, threshold } => filter(&exec, &io, Op::Edges(Threshold(threshold))),
        Command::Add { io, second } => {
            let other = load_image(&second)?;
            filter(&exec, &io, Op::Add(Addend::Image(other)))
        }
        Command::Shadow { io, invert } => filter(&exec, &io, Op::Shadow { invert }),
        Command::Histogram {
            input,
            csv,
            render,
            format,
        } => {
            let h = compute_histogram(&load_image(&input)?);
            write_atomic(&csv, histogram_csv(&h).as_bytes())?;
            if let Some(path) = render {
                save_image(&path, &render_histogram(&h), format)?;
            }
            Ok(())
        }
        Command::Pipeline { io, spec } => {
            let text = read_text(&spec)?;
            let parsed = PipelineSpec::from_json(&text).map_err(|source| Error::Json {
                path: spec.clone(),
                source,
            })?;
            let base = spec.parent().unwrap_or(Path::new("."));
            let ops = parsed.prepare(base)?;
            let img = load_image(&io.input)?;
            let out = run_ops_with(&exec, &ops, &img)?;
            save_image(&io.output, &out, io.format)
        }
        Command::Bench {
            size,
            ksize,
            iters,
            output,
        } => {
            let config = BenchConfig { size, ksize, iters };
            let report = bench_convolve(&exec, exec.threads(), config)?;
            eprint!("{report}");
            if let Some(path) = output {
                write_atomic(&path, report.to_string().as_bytes())?;
            }
            Ok(())
        }
    }
}
