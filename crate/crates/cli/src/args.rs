use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "reflpos", version, about = "Positivity checks for functions on intervals")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write a two-column (t, value) table.
    #[arg(long, global = true, value_name = "FILE")]
    pub csv: Option<PathBuf>,
}

/// `a,b` with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval(pub f64, pub f64);

impl FromStr for Interval {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s.split_once(',').ok_or("expected `a,b`")?;
        let a: f64 = a.trim().parse().map_err(|e| format!("bad lower end: {e}"))?;
        let b: f64 = b.trim().parse().map_err(|e| format!("bad upper end: {e}"))?;
        if !(a < b) {
            return Err(format!("need a < b, got {a},{b}"));
        }
        Ok(Interval(a, b))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GridChoice {
    Cheb,
    Uniform,
    /// Sorted uniform draws from the seeded generator.
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelChoice {
    /// `f((x+y)/2)`
    Plus,
    /// `f((x-y)/2)`
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SynthForm {
    Bernstein,
    Increasing,
    Interval,
    ReflectionNegative,
    Laplace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AnalyzeForm {
    Interval,
    Increasing,
}

/// Which function to test.
#[derive(Args, Debug, Clone, Serialize)]
pub struct FuncArgs {
    /// `catalog:NAME`, `rep:FILE` (tagged representation) or `measure:FILE`.
    #[arg(long, value_name = "SOURCE")]
    pub function: String,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub c: Option<f64>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct GridArgs {
    /// Sampling interval; defaults to the catalog entry's check interval.
    #[arg(long, value_name = "A,B")]
    pub interval: Option<Interval>,
    #[arg(long, default_value_t = 12)]
    pub points: usize,
    #[arg(long, value_enum, default_value = "cheb")]
    pub grid_kind: GridChoice,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Decision tolerance; defaults to 1e-9 times the number of points.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Positive definiteness of a kernel built from the function.
    CheckPd {
        #[command(flatten)]
        func: FuncArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, value_enum, default_value = "plus")]
        kernel: KernelChoice,
    },
    /// Conditional negative definiteness, cross-checked through e^{-h psi}.
    CheckNd {
        #[command(flatten)]
        func: FuncArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, value_enum, default_value = "plus")]
        kernel: KernelChoice,
        #[arg(long, value_delimiter = ',')]
        h_list: Vec<f64>,
    },
    /// Reflection positivity on (-a, a).
    CheckRp {
        #[command(flatten)]
        func: FuncArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        a: Option<f64>,
    },
    /// Reflection negativity on (-a, a), and on the line unless --interval-only.
    CheckRn {
        #[command(flatten)]
        func: FuncArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        a: Option<f64>,
        #[arg(long, value_delimiter = ',')]
        h_list: Vec<f64>,
        /// Skip the Bernstein test required on the whole line.
        #[arg(long)]
        interval_only: bool,
    },
    /// Complete monotonicity by differences.
    CheckCm {
        #[command(flatten)]
        func: FuncArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = 6)]
        k_max: usize,
        #[arg(long, value_delimiter = ',')]
        deltas: Vec<f64>,
    },
    /// Bernstein property by differences.
    CheckBernstein {
        #[command(flatten)]
        func: FuncArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = 6)]
        k_max: usize,
        #[arg(long, value_delimiter = ',')]
        deltas: Vec<f64>,
    },
    /// Hankel matrix of derivatives at a point.
    Hankel {
        #[command(flatten)]
        func: FuncArgs,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        center: f64,
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Use -f^{(1+i+j)} instead of f^{(i+j)}.
        #[arg(long)]
        shifted: bool,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Evaluate a representation.
    Synth {
        #[arg(long, value_enum)]
        form: SynthForm,
        #[arg(long, value_name = "FILE")]
        rep: PathBuf,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        t: Vec<f64>,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = 1e-10)]
        quad_tol: f64,
    },
    /// Recover a representation from samples.
    Analyze {
        #[command(flatten)]
        func: FuncArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, value_enum, default_value = "interval")]
        form: AnalyzeForm,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        t0: f64,
        #[arg(long, value_delimiter = ',')]
        lambda_grid: Vec<f64>,
    },
    /// Polya's sufficient condition on [0, inf).
    Polya {
        #[command(flatten)]
        func: FuncArgs,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Boundary-derivative test for the transform of a measure.
    Thm59 {
        #[arg(long, value_name = "FILE")]
        measure: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// List catalog entries with their claims.
    Gallery {
        /// Only this family.
        #[arg(long)]
        name: Option<String>,
        /// Run the checker behind every claim.
        #[arg(long)]
        verify: bool,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::CheckPd { .. } => "check-pd",
            Command::CheckNd { .. } => "check-nd",
            Command::CheckRp { .. } => "check-rp",
            Command::CheckRn { .. } => "check-rn",
            Command::CheckCm { .. } => "check-cm",
            Command::CheckBernstein { .. } => "check-bernstein",
            Command::Hankel { .. } => "hankel",
            Command::Synth { .. } => "synth",
            Command::Analyze { .. } => "analyze",
            Command::Polya { .. } => "polya",
            Command::Thm59 { .. } => "thm59",
            Command::Gallery { .. } => "gallery",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn interval_parsing() {
        assert_eq!("0, 2".parse::<Interval>().unwrap(), Interval(0.0, 2.0));
        assert!("2,0".parse::<Interval>().is_err());
        assert!("1".parse::<Interval>().is_err());
        assert!("a,1".parse::<Interval>().is_err());
    }

    #[test]
    fn parses_spec_examples() {
        let c = Cli::try_parse_from(["reflpos", "check-rn", "--function", "catalog:abs_power", "--alpha", "0.5"]).unwrap();
        assert_eq!(c.command.name(), "check-rn");
        let c = Cli::try_parse_from(["reflpos", "synth", "--form", "bernstein", "--rep", "rep.json", "--t", "1.0", "--json"]).unwrap();
        assert!(c.json);
        let c = Cli::try_parse_from(["reflpos", "check-nd", "--function", "catalog:log", "--h-list", "0.5,1,2", "--interval", "-1,2"]);
        assert!(c.is_err());
        let c = Cli::try_parse_from(["reflpos", "check-nd", "--function", "catalog:log", "--h-list", "0.5,1,2", "--interval=0.5,2"]).unwrap();
        match c.command {
            Command::CheckNd { h_list, grid, .. } => {
                assert_eq!(h_list, vec![0.5, 1.0, 2.0]);
                assert_eq!(grid.interval, Some(Interval(0.5, 2.0)));
            }
            _ => unreachable!(),
        }
    }
}
