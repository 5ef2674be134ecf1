use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use tlsfit_cli::{
    dataset_csv, gen_bumblebee, run_compare, run_economy, run_fit, CliError, CommandOutput,
    CompareRequest, EconomyRequest, FitRequest, Geometry, OutputFormat, Result, OUT_DIR_ENV,
};
use tlsfit_core::{ErrorMetric, LineCloudSpec};

#[derive(Parser)]
#[command(
    name = "tlsfit",
    version,
    about = "Orthogonal (total least squares) fitting of lines and planes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum GeometryArg {
    Line,
    Plane,
}

#[derive(Subcommand)]
enum Command {
    /// Fit a line or hyperplane to the selected columns of a CSV file.
    Fit {
        /// CSV path, or `builtin:v4`.
        input: String,
        #[arg(long, value_enum, default_value = "plane")]
        geometry: GeometryArg,
        /// Coordinate columns by name or 0-based index.
        #[arg(long, value_delimiter = ',')]
        columns: Vec<String>,
        /// Column used to label points.
        #[arg(long)]
        label: Option<String>,
        /// Keep only rows whose `country` column equals this value.
        #[arg(long)]
        country: Option<String>,
        #[arg(long, default_value = "text")]
        format: OutputFormat,
        #[arg(long, default_value = "sum_abs")]
        metric: ErrorMetric,
        /// Write fit.svg to the output directory.
        #[arg(long)]
        plot: bool,
        /// Coordinate indices drawn on the plot axes.
        #[arg(long, value_delimiter = ',', num_args = 2, default_values_t = [0usize, 1])]
        projection: Vec<usize>,
        #[arg(long, default_value_t = ',')]
        delimiter: char,
    },
    /// Compare classical and orthogonal regression lines on 2D data.
    Compare {
        input: String,
        /// The x and y columns.
        #[arg(long, value_delimiter = ',')]
        columns: Vec<String>,
        #[arg(long)]
        label: Option<String>,
        #[arg(long, default_value = "text")]
        format: OutputFormat,
        /// Write compare.svg to the output directory.
        #[arg(long)]
        plot: bool,
        #[arg(long, default_value_t = ',')]
        delimiter: char,
    },
    /// Economy planes, pairwise angles and slopes from an indicator table.
    Economy {
        #[arg(long, default_value = "builtin:v4")]
        input: String,
        /// Countries to include, in order.
        #[arg(long = "country", value_delimiter = ',')]
        countries: Vec<String>,
        #[arg(long, default_value = "sum_abs")]
        metric: ErrorMetric,
        #[arg(long, default_value = "text")]
        format: OutputFormat,
        /// Write one time-series SVG per indicator.
        #[arg(long)]
        plot: bool,
        /// Write economy_scene.json.
        #[arg(long)]
        scene: bool,
    },
    /// Generate a noisy 3D line cloud as CSV.
    GenBumblebee {
        #[arg(long, value_delimiter = ',', num_args = 3, default_values_t = [0.0, 0.0, 0.0])]
        a: Vec<f64>,
        #[arg(long, value_delimiter = ',', num_args = 3, default_values_t = [10.0, 10.0, 10.0])]
        b: Vec<f64>,
        #[arg(long, default_value_t = 50)]
        n: usize,
        #[arg(long, default_value_t = 0.1)]
        sigma: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Write to this file instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Print a builtin dataset as CSV.
    Dataset {
        #[arg(default_value = "builtin:v4")]
        name: String,
    },
}

fn delimiter_byte(c: char) -> Result<u8> {
    u8::try_from(c).ok().filter(u8::is_ascii).ok_or_else(|| {
        CliError::Usage(format!(
            "delimiter must be a single ASCII character, got `{c}`"
        ))
    })
}

fn point3(v: &[f64]) -> [f64; 3] {
    [v[0], v[1], v[2]]
}

fn execute(command: Command) -> Result<CommandOutput> {
    match command {
        Command::Fit {
            input,
            geometry,
            columns,
            label,
            country,
            format,
            metric,
            plot,
            projection,
            delimiter,
        } => run_fit(&FitRequest {
            input,
            geometry: match geometry {
                GeometryArg::Line => Geometry::Line,
                GeometryArg::Plane => Geometry::Plane,
            },
            columns,
            label,
            country,
            format,
            plot,
            projection: (projection[0], projection[1]),
            metric,
            delimiter: delimiter_byte(delimiter)?,
        }),
        Command::Compare {
            input,
            columns,
            label,
            format,
            plot,
            delimiter,
        } => run_compare(&CompareRequest {
            input,
            columns,
            label,
            format,
            plot,
            delimiter: delimiter_byte(delimiter)?,
        }),
        Command::Economy {
            input,
            countries,
            metric,
            format,
            plot,
            scene,
        } => run_economy(&EconomyRequest {
            input,
            countries,
            metric,
            format,
            plot,
            scene,
        }),
        Command::GenBumblebee {
            a,
            b,
            n,
            sigma,
            seed,
            output,
        } => {
            let csv = gen_bumblebee(&LineCloudSpec {
                a: point3(&a),
                b: point3(&b),
                n,
                sigma,
                seed,
            })?;
            match output {
                Some(path) => {
                    std::fs::write(path, csv)?;
                    Ok(CommandOutput::default())
                }
                None => Ok(CommandOutput {
                    stdout: csv,
                    artifacts: Vec::new(),
                }),
            }
        }
        Command::Dataset { name } => Ok(CommandOutput {
            stdout: dataset_csv(&name)?,
            artifacts: Vec::new(),
        }),
    }
}

fn emit(out: CommandOutput) -> Result<()> {
    if !out.artifacts.is_empty() {
        let dir = std::env::var_os(OUT_DIR_ENV).map_or_else(|| PathBuf::from("."), PathBuf::from);
        std::fs::create_dir_all(&dir)?;
        for artifact in &out.artifacts {
            std::fs::write(dir.join(&artifact.name), &artifact.contents)?;
        }
    }
    let mut stdout = std::io::stdout().lock();
    stdout.write_all(out.stdout.as_bytes())?;
    stdout.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match execute(cli.command).and_then(emit) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
