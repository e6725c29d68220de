//! Turning flags and files into functions and grids.

use std::fmt;
use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;

use reflpos::catalog::{self, CatalogEntry, LkData, Params, SYNTH_TOL};
use reflpos::grid::MAX_POINTS;
use reflpos::{FuncHandle, GridKind, GridOptions};

use crate::args::{FuncArgs, GridArgs, GridChoice};

/// Anything that ends the run before a verdict.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Lib(reflpos::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib(reflpos::Error::NotConverged { .. }) => 3,
            _ => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

impl From<reflpos::Error> for CliError {
    fn from(e: reflpos::Error) -> Self {
        CliError::Lib(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

/// Reads and parses a JSON file; both failures are usage errors.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: malformed JSON: {e}", path.display())))
}

/// The function under test and, for catalog names, its entry.
pub struct Target {
    pub func: FuncHandle,
    pub entry: Option<CatalogEntry>,
}

impl Target {
    pub fn resolve(args: &FuncArgs) -> CliResult<Target> {
        let (kind, rest) = args
            .function
            .split_once(':')
            .ok_or_else(|| CliError::Usage(format!("--function needs a prefix: catalog:, rep: or measure:, got `{}`", args.function)))?;
        match kind {
            "catalog" => {
                let params = Params { alpha: args.alpha, lambda: args.lambda, beta: args.beta, c: args.c };
                let entry = catalog::get(rest, &params)?;
                Ok(Target { func: entry.func.clone(), entry: Some(entry) })
            }
            "rep" => {
                let lk: LkData = read_json(Path::new(rest))?;
                validate_lk(&lk)?;
                Ok(Target { func: lk.to_func(SYNTH_TOL).renamed(format!("rep:{rest}")), entry: None })
            }
            "measure" => {
                let text = fs::read_to_string(rest).map_err(|e| CliError::Usage(format!("cannot read {rest}: {e}")))?;
                let measure = reflpos::Measure::from_json(&text).map_err(|e| CliError::Usage(format!("{rest}: {e}")))?;
                let lk = LkData::Laplace { measure, even: false };
                Ok(Target { func: lk.to_func(SYNTH_TOL).renamed(format!("measure:{rest}")), entry: None })
            }
            other => usage(format!("unknown function source `{other}`")),
        }
    }

    /// The explicit interval, else the catalog check interval, else a finite domain.
    pub fn interval(&self, grid: &GridArgs) -> CliResult<(f64, f64)> {
        if let Some(i) = grid.interval {
            return Ok((i.0, i.1));
        }
        if let Some(e) = &self.entry {
            return Ok(e.check_interval);
        }
        let d = self.func.domain();
        if d.lo.is_finite() && d.hi.is_finite() {
            Ok((d.lo, d.hi))
        } else {
            usage("--interval is required for functions on an unbounded domain")
        }
    }
}

fn validate_lk(lk: &LkData) -> CliResult<()> {
    let r = match lk {
        LkData::Bernstein { rep, .. } => rep.validate(),
        LkData::Increasing { rep } => rep.validate(),
        LkData::Interval { rep } => rep.validate(),
        LkData::Laplace { measure, .. } => measure.validate(),
    };
    r.map_err(|e| CliError::Usage(format!("invalid representation: {e}")))
}

fn check_points(n: usize) -> CliResult<()> {
    if n == 0 || n > MAX_POINTS {
        return usage(format!("--points must lie in 1..={MAX_POINTS}, got {n}"));
    }
    Ok(())
}

/// Sample points for the grid-based checks.
pub fn points(grid: &GridArgs, (lo, hi): (f64, f64)) -> CliResult<Vec<f64>> {
    check_points(grid.points)?;
    match grid.grid_kind {
        GridChoice::Cheb => Ok(GridKind::Cheb.points(lo, hi, grid.points)?),
        GridChoice::Uniform => Ok(GridKind::Uniform.points(lo, hi, grid.points)?),
        GridChoice::Random => {
            if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
                return usage(format!("need a finite interval, got ({lo}, {hi})"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(grid.seed);
            let mut pts: Vec<f64> = (0..grid.points).map(|_| rng.random_range(lo..hi)).collect();
            pts.sort_by(f64::total_cmp);
            pts.dedup();
            Ok(pts)
        }
    }
}

/// Settings for the reflection checks, which only take deterministic grids.
pub fn grid_options(grid: &GridArgs) -> CliResult<GridOptions> {
    check_points(grid.points)?;
    let kind = match grid.grid_kind {
        GridChoice::Cheb => GridKind::Cheb,
        GridChoice::Uniform => GridKind::Uniform,
        GridChoice::Random => return usage("--grid-kind random is not available for this command"),
    };
    Ok(GridOptions { n: grid.points, kind, tol: grid.tol })
}

pub fn tol(grid: &GridArgs, n: usize) -> CliResult<f64> {
    let t = grid.tol.unwrap_or_else(|| reflpos::kernelcheck::default_tol(n));
    if !(t > 0.0) || !t.is_finite() {
        return usage(format!("--tol must be positive, got {t}"));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::args::Interval;

    fn grid(kind: GridChoice, seed: u64) -> GridArgs {
        GridArgs { interval: Some(Interval(0.0, 1.0)), points: 8, grid_kind: kind, seed, tol: None }
    }

    fn func(src: &str) -> FuncArgs {
        FuncArgs { function: src.into(), alpha: None, lambda: None, beta: None, c: None }
    }

    #[test]
    fn random_grids_follow_the_seed() {
        let a = points(&grid(GridChoice::Random, 7), (0.0, 1.0)).unwrap();
        let b = points(&grid(GridChoice::Random, 7), (0.0, 1.0)).unwrap();
        let c = points(&grid(GridChoice::Random, 8), (0.0, 1.0)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(a.windows(2).all(|w| w[0] < w[1]));
        assert!(a.iter().all(|x| (0.0..1.0).contains(x)));
    }

    #[test]
    fn random_is_rejected_for_reflection_options() {
        assert!(matches!(grid_options(&grid(GridChoice::Random, 0)), Err(CliError::Usage(_))));
        assert_eq!(grid_options(&grid(GridChoice::Uniform, 0)).unwrap().kind, GridKind::Uniform);
    }

    #[test]
    fn point_count_is_bounded() {
        let mut g = grid(GridChoice::Cheb, 0);
        g.points = 0;
        assert!(points(&g, (0.0, 1.0)).is_err());
        g.points = MAX_POINTS + 1;
        assert!(points(&g, (0.0, 1.0)).is_err());
    }

    #[test]
    fn catalog_targets_default_to_their_check_interval() {
        let t = Target::resolve(&func("catalog:triangle")).unwrap();
        let mut g = grid(GridChoice::Cheb, 0);
        g.interval = None;
        assert_eq!(t.interval(&g).unwrap(), t.entry.as_ref().unwrap().check_interval);
    }

    #[test]
    fn bad_sources_are_usage_errors() {
        assert_eq!(Target::resolve(&func("nope")).err().unwrap().exit_code(), 2);
        assert_eq!(Target::resolve(&func("catalog:nope")).err().unwrap().exit_code(), 2);
        assert_eq!(Target::resolve(&func("rep:/nonexistent.json")).err().unwrap().exit_code(), 2);
    }

    #[test]
    fn malformed_rep_file_is_a_usage_error() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("bad.json");
        fs::write(&p, "{\"form\": \"bernstein\", ").unwrap();
        let e = Target::resolve(&func(&format!("rep:{}", p.display()))).err().unwrap();
        assert!(matches!(e, CliError::Usage(ref m) if m.contains("malformed")));
    }

    #[test]
    fn unbounded_domains_need_an_interval() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("mu.json");
        fs::write(&p, r#"{"atoms": [{"lambda": 1, "weight": 1}]}"#).unwrap();
        let t = Target::resolve(&func(&format!("measure:{}", p.display()))).unwrap();
        let mut g = grid(GridChoice::Cheb, 0);
        g.interval = None;
        assert!(t.interval(&g).is_err());
        assert!((t.func.value(1.0) - (-1f64).exp()).abs() < 1e-12);
    }
}
