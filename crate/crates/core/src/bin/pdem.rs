use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use pdem_core::cli::{
    self, load_config, MethodSel, ParamOverrides, ProfileKind, ProfileSpec, SideSel, SweepSpec,
};
use pdem_core::selftest;
use pdem_core::{DeviceParams, Error, Method, Result};

#[derive(Parser)]
#[command(name = "pdem", version, about = "PT-symmetric PDEM double heterojunction: scattering, bound states, sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// key=value file with any of g, mu1, mu2, a0
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Mass scale g (default 1.5)
    #[arg(long, global = true, allow_negative_numbers = true)]
    g: Option<f64>,
    /// Well depth mu1 (default 4)
    #[arg(long, global = true, allow_negative_numbers = true)]
    mu1: Option<f64>,
    /// Non-Hermitian coupling mu2 (default 0.3)
    #[arg(long, global = true, allow_negative_numbers = true)]
    mu2: Option<f64>,
    /// Junction half-width a0 (default 2.5)
    #[arg(long, global = true, allow_negative_numbers = true)]
    a0: Option<f64>,
    /// Write CSV here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Also write an SVG chart next to --out
    #[arg(long, global = true)]
    svg: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Analytic,
    Oracle,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Left,
    Right,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// |T|^2, |R_L|^2, |R_R|^2 over an energy grid and a list of mu2 values
    Scatter {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "analytic")]
        method: MethodArg,
        #[arg(long, value_enum, default_value = "both")]
        side: SideArg,
        /// Lowest energy; defaults to one grid step above V0
        #[arg(long, allow_negative_numbers = true)]
        e_min: Option<f64>,
        #[arg(long, default_value_t = 60.0, allow_negative_numbers = true)]
        e_max: f64,
        #[arg(long, default_value_t = 200)]
        n_e: usize,
        /// Comma-separated mu2 values; defaults to the device mu2
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        mu2_values: Vec<f64>,
    },
    /// Bound-state energies from the determinant and from shooting
    Bound {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "both")]
        method: MethodArg,
    },
    /// Follow the ground state as mu2 grows and locate Re E0 = 0
    Switch {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 80.0)]
        mu2_max: f64,
        #[arg(long, default_value_t = 1595)]
        n_mu2: usize,
    },
    /// Wavefunction and device profile on a z grid
    Profile {
        #[command(flatten)]
        common: Common,
        /// scatter-left, scatter-right or bound-N
        #[arg(long, default_value = "scatter-left")]
        kind: String,
        #[arg(long, default_value_t = 44.0, allow_negative_numbers = true)]
        energy: f64,
        #[arg(long, default_value_t = -8.0, allow_negative_numbers = true)]
        z_min: f64,
        #[arg(long, default_value_t = 8.0, allow_negative_numbers = true)]
        z_max: f64,
        #[arg(long, default_value_t = 801)]
        n_z: usize,
        #[arg(long, value_enum, default_value = "analytic")]
        method: MethodArg,
    },
    /// Run the acceptance checks and print a pass/fail table
    Selftest {
        /// Replacement for the embedded hypergeometric fixture
        #[arg(long)]
        fixture: Option<PathBuf>,
    },
}

fn params(common: &Common) -> Result<DeviceParams> {
    let file = match &common.config {
        Some(path) => load_config(path)?,
        None => ParamOverrides::default(),
    };
    let flags = ParamOverrides {
        g: common.g,
        mu1: common.mu1,
        mu2: common.mu2,
        a0: common.a0,
    };
    flags.over(file).resolve()
}

fn method_sel(m: MethodArg) -> MethodSel {
    match m {
        MethodArg::Analytic => MethodSel::Analytic,
        MethodArg::Oracle => MethodSel::Oracle,
        MethodArg::Both => MethodSel::Both,
    }
}

fn single_method(m: MethodArg) -> Result<Method> {
    match m {
        MethodArg::Analytic => Ok(Method::Analytic),
        MethodArg::Oracle => Ok(Method::NumericOracle),
        MethodArg::Both => Err(Error::Usage("profile takes --method analytic or oracle".into())),
    }
}

fn parse_kind(s: &str) -> Result<ProfileKind> {
    match s {
        "scatter-left" => Ok(ProfileKind::ScatterLeft),
        "scatter-right" => Ok(ProfileKind::ScatterRight),
        _ => s
            .strip_prefix("bound-")
            .and_then(|n| n.parse().ok())
            .map(ProfileKind::Bound)
            .ok_or_else(|| Error::Usage(format!("unknown profile kind `{s}`"))),
    }
}

/// Writes CSV to --out (or stdout) and, with --svg, the chart beside it.
fn emit(common: &Common, csv: &str, svg: Option<String>) -> Result<()> {
    match &common.out {
        Some(path) => std::fs::write(path, csv).map_err(|e| io_error(path, e))?,
        None => std::io::stdout().write_all(csv.as_bytes())?,
    }
    if common.svg {
        let Some(out) = &common.out else {
            return Err(Error::Usage("--svg needs --out".into()));
        };
        let Some(chart) = svg else {
            return Err(Error::Usage("this command has no chart".into()));
        };
        let path = out.with_extension("svg");
        std::fs::write(&path, chart).map_err(|e| io_error(&path, e))?;
    }
    Ok(())
}

fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::Io(format!("{}: {e}", path.display()))
}

fn run(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Scatter {
            common,
            method,
            side,
            e_min,
            e_max,
            n_e,
            mu2_values,
        } => {
            let p = params(&common)?;
            let mu2_values = if mu2_values.is_empty() { vec![p.mu2] } else { mu2_values };
            let base = SweepSpec::above_floor(&p, e_max, n_e, mu2_values);
            let spec = SweepSpec {
                e_min: e_min.unwrap_or(base.e_min),
                side: match side {
                    SideArg::Left => SideSel::Left,
                    SideArg::Right => SideSel::Right,
                    SideArg::Both => SideSel::Both,
                },
                method: method_sel(method),
                ..base
            };
            let report = cli::cmd_scatter(&spec, &p)?;
            emit(&common, &report.to_csv(), Some(report.to_svg()))?;
            Ok(report.status().code())
        }
        Command::Bound { common, method } => {
            let p = params(&common)?;
            let report = cli::cmd_bound(&p, method_sel(method))?;
            if common.out.is_some() {
                emit(&common, &report.to_csv(), None)?;
            }
            print!("{}", report.to_table());
            Ok(report.status().code())
        }
        Command::Switch { common, mu2_max, n_mu2 } => {
            let p = params(&common)?;
            let report = cli::cmd_switch(&p, mu2_max, n_mu2)?;
            emit(&common, &report.to_csv(), Some(report.to_svg()))?;
            eprintln!("{}", report.summary());
            Ok(report.status().code())
        }
        Command::Profile {
            common,
            kind,
            energy,
            z_min,
            z_max,
            n_z,
            method,
        } => {
            let p = params(&common)?;
            let spec = ProfileSpec {
                energy,
                kind: parse_kind(&kind)?,
                z_min,
                z_max,
                n_z,
                method: single_method(method)?,
            };
            let report = cli::cmd_profile(&p, &spec)?;
            emit(&common, &report.to_csv(), Some(report.to_svg()))?;
            Ok(cli::EXIT_OK)
        }
        Command::Selftest { fixture } => {
            let text = match fixture {
                Some(path) => std::fs::read_to_string(&path).map_err(|e| io_error(&path, e))?,
                None => selftest::EMBEDDED_FIXTURE.to_string(),
            };
            let results = selftest::run_all(&text);
            for r in &results {
                println!("{}", r.line());
            }
            let failed = results.iter().filter(|r| !r.passed).count();
            println!("{} of {} checks passed", results.len() - failed, results.len());
            Ok(if failed > 0 { cli::EXIT_NUMERIC } else { cli::EXIT_OK })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version land here too and are not failures.
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { cli::EXIT_USAGE as u8 } else { cli::EXIT_OK as u8 });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("pdem: {e}");
            ExitCode::from(cli::exit_code(&e) as u8)
        }
    }
}
