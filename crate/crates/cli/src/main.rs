use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use banach_reduce::Field;
use banach_reduce_cli::manifest::{
    Command, DemoName, FixtureName, Format, FunctionSource, InstanceSpec, JobManifest, OutputSpec,
};
use banach_reduce_cli::{run, CliError, EXIT_ERROR};
use clap::{Args, Parser, Subcommand};

/// Reducibility decisions and checkable witnesses for tuples of functions.
#[derive(Parser)]
#[command(name = "banach-reduce", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Holes of the zero set {|g| <= eps} and whether they escape the domain.
    Holes(Job),
    /// Hole condition and boundary-principle decisions for g.
    Check(Job),
    /// Find a with f + a g invertible, or the winding obstruction.
    Reduce(Job),
    /// Find a with f + a g in the principal component.
    Principal(Job),
    /// Extend the row (f, g) to a determinant-one product of exponentials.
    ExtendRow(Job),
    /// Exponential reducibility of the pair (f, g).
    ExpReduce(Job),
    /// Re-verify a certificate file.
    Certify {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Run one of the bundled demos.
    Demo {
        #[arg(value_enum)]
        name: DemoName,
        #[arg(long)]
        resolution: Option<f64>,
        #[command(flatten)]
        out: Output,
    },
    /// Replay a job manifest.
    Run { manifest: PathBuf },
}

#[derive(Args)]
struct Output {
    /// Directory for summaries, certificates and renders.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct Job {
    /// annulus, disk, circle:N, finite:M, mask:PATH, interval:EXPR, or an
    /// expression E for the planar region {re(E) >= 0}.
    #[arg(long)]
    domain: String,
    /// Coordinate of f (repeatable): an expression, a JSON value list, or @FILE.
    #[arg(long = "f")]
    f: Vec<String>,
    #[arg(long)]
    g: String,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    /// Grid step.
    #[arg(long, default_value_t = 1.0 / 64.0)]
    resolution: f64,
    #[arg(long, value_parser = parse_field, default_value = "C")]
    field: Field,
    #[command(flatten)]
    out: Output,
}

fn parse_field(s: &str) -> Result<Field, String> {
    match s {
        "R" | "r" | "real" => Ok(Field::Real),
        "C" | "c" | "complex" => Ok(Field::Complex),
        _ => Err(format!("field must be R or C, got {s}")),
    }
}

fn parse_count(s: &str, what: &str) -> Result<usize, CliError> {
    s.parse()
        .map_err(|_| CliError::new("invalid_domain", format!("{what} needs a count, got {s}")))
}

fn instance(domain: &str, field: Field, resolution: f64) -> Result<InstanceSpec, CliError> {
    let region = |expr: &str, interval| InstanceSpec::Region {
        expr: expr.to_string(),
        resolution,
        field,
        half_width: banach_reduce::fixtures::FRAME,
        interval,
        margin: banach_reduce::fixtures::MARGIN,
    };
    Ok(match domain.split_once(':') {
        Some(("circle", n)) => InstanceSpec::Circle {
            n: parse_count(n, "circle")?,
            field,
        },
        Some(("finite", m)) => InstanceSpec::Finite {
            m: parse_count(m, "finite")?,
            field,
        },
        Some(("mask", path)) => InstanceSpec::Mask {
            path: path.into(),
            field,
        },
        Some(("interval", expr)) => region(expr, true),
        _ => match domain {
            "annulus" => InstanceSpec::Fixture {
                name: FixtureName::Annulus,
                resolution,
                field,
            },
            "disk" => InstanceSpec::Fixture {
                name: FixtureName::Disk,
                resolution,
                field,
            },
            expr => region(expr, false),
        },
    })
}

fn output(o: Output) -> OutputSpec {
    OutputSpec {
        dir: o.out_dir,
        format: o.format,
    }
}

fn job(command: Command, j: Job) -> Result<JobManifest, CliError> {
    let mut m = JobManifest::new(command);
    m.instance = Some(instance(&j.domain, j.field, j.resolution)?);
    m.functions.f =
        j.f.iter()
            .map(|s| FunctionSource::parse_arg(s))
            .collect::<Result<_, _>>()?;
    m.functions.g = Some(FunctionSource::parse_arg(&j.g)?);
    m.eps = j.eps;
    m.tol = j.tol;
    m.output = output(j.out);
    Ok(m)
}

fn manifest(cmd: Cmd) -> Result<JobManifest, CliError> {
    match cmd {
        Cmd::Holes(j) => job(Command::Holes, j),
        Cmd::Check(j) => job(Command::Check, j),
        Cmd::Reduce(j) => job(Command::Reduce, j),
        Cmd::Principal(j) => job(Command::Principal, j),
        Cmd::ExtendRow(j) => job(Command::ExtendRow, j),
        Cmd::ExpReduce(j) => job(Command::ExpReduce, j),
        Cmd::Certify { file, out } => {
            let mut m = JobManifest::new(Command::Certify);
            m.certificate = Some(file);
            m.output = output(out);
            Ok(m)
        }
        Cmd::Demo {
            name,
            resolution,
            out,
        } => {
            let mut m = JobManifest::new(Command::Demo);
            m.demo = Some(name);
            m.resolution = resolution;
            m.output = output(out);
            Ok(m)
        }
        Cmd::Run { manifest } => {
            let text =
                std::fs::read_to_string(&manifest).map_err(|e| CliError::io(&manifest, e))?;
            JobManifest::from_json(&text)
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("BANACH_REDUCE_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::new("invalid_env", format!("BANACH_REDUCE_THREADS={v}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::new("invalid_env", e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads()
        .and_then(|()| manifest(cli.command))
        .and_then(|m| run(&m));
    match result {
        Ok(o) => {
            let text = serde_json::to_string_pretty(&o.summary).unwrap_or_default();
            let _ = writeln!(std::io::stdout(), "{text}");
            ExitCode::from(o.exit as u8)
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
