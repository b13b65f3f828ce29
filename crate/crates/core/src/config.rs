//! Run configuration: command-line flags, optionally layered over a flat
//! `key = value` file.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};

use crate::reservoir::DEFAULT_GRID_POINTS;
use crate::selftest::{HARDCORE_RATIOS, RESERVOIR_NBARS};

/// Smallest grid that resolves every Fourier order this circuit family
/// produces.
pub const MIN_GRID_POINTS: usize = 15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// One teleportation run, reported as JSON.
    Teleport,
    /// Teleportation over a seeded corpus of input states.
    Sweep,
    /// Hard-core limit scan, reported as CSV.
    Hardcore,
    /// Resolved-reservoir scan, reported as CSV.
    Reservoir,
    /// Dense coding through the single-particle pair.
    Densecoding,
    /// The built-in acceptance checks.
    Selftest,
}

#[derive(Debug, Parser)]
#[command(
    name = "modeport",
    version,
    about = "Teleportation of a spatial-mode qubit using a condensate phase reference"
)]
struct Cli {
    command: Command,
    /// Rotation half-angle of the input state, in radians.
    #[arg(long, allow_hyphen_values = true)]
    theta_prime: Option<f64>,
    /// Bias phase of the input state, in radians.
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<f64>,
    /// Phase-grid points per reservoir.
    #[arg(long)]
    grid: Option<usize>,
    /// Use one condensate for preparation and analysis.
    #[arg(long)]
    shared_reservoir: bool,
    /// Corpus size for `sweep`.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated U/J values for `hardcore`.
    #[arg(long, value_delimiter = ',')]
    ratios: Option<Vec<f64>>,
    /// Comma-separated mean occupations for `reservoir`.
    #[arg(long, value_delimiter = ',')]
    nbars: Option<Vec<f64>>,
    /// Message for `densecoding`; all four when absent.
    #[arg(long)]
    message: Option<u8>,
    /// Flat `key = value` file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error(transparent)]
    Usage(#[from] clap::Error),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("config line {line}: {message}")]
    File { line: usize, message: String },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub theta_prime: f64,
    pub phi: f64,
    pub grid: usize,
    pub shared_reservoir: bool,
    pub n: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub ratios: Vec<f64>,
    pub nbars: Vec<f64>,
    pub message: Option<u8>,
}

impl RunConfig {
    pub fn defaults(command: Command) -> Self {
        RunConfig {
            command,
            theta_prime: 0.0,
            phi: 0.0,
            grid: DEFAULT_GRID_POINTS,
            shared_reservoir: false,
            n: 100,
            seed: 0,
            out: None,
            ratios: HARDCORE_RATIOS.to_vec(),
            nbars: RESERVOIR_NBARS.to_vec(),
            message: None,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: String| Err(ConfigError::Invalid(m));
        if self.grid < MIN_GRID_POINTS {
            return bad(format!(
                "grid too coarse: {} points, need at least {MIN_GRID_POINTS}",
                self.grid
            ));
        }
        if !(self.theta_prime.is_finite() && self.phi.is_finite()) {
            return bad("angles must be finite".into());
        }
        if self.n == 0 {
            return bad("n must be at least 1".into());
        }
        if let Some(m) = self.message.filter(|m| *m > 3) {
            return bad(format!("message must be 0..=3, got {m}"));
        }
        for (name, list) in [("ratios", &self.ratios), ("nbars", &self.nbars)] {
            if list.is_empty() || list.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
                return bad(format!(
                    "{name} must be a non-empty list of positive numbers"
                ));
            }
            if list.windows(2).any(|w| w[1] <= w[0]) {
                return bad(format!("{name} must be ascending"));
            }
        }
        Ok(())
    }
}

/// Parse a flat `key = value` document. Blank lines and `#` comments are
/// skipped; keys may use `-` or `_`.
pub fn parse_config_file(text: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| ConfigError::File {
            line: i + 1,
            message: format!("expected `key = value`, got `{line}`"),
        })?;
        let key = k.trim().replace('-', "_");
        if map.insert(key.clone(), v.trim().to_string()).is_some() {
            return Err(ConfigError::File {
                line: i + 1,
                message: format!("duplicate key `{key}`"),
            });
        }
    }
    Ok(map)
}

fn parse_value<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, ConfigError> {
    v.parse()
        .map_err(|_| ConfigError::Invalid(format!("bad value for {key}: `{v}`")))
}

fn parse_list(key: &str, v: &str) -> Result<Vec<f64>, ConfigError> {
    v.split(',').map(|x| parse_value(key, x.trim())).collect()
}

fn apply_file(cfg: &mut RunConfig, map: &BTreeMap<String, String>) -> Result<(), ConfigError> {
    for (k, v) in map {
        match k.as_str() {
            "theta_prime" => cfg.theta_prime = parse_value(k, v)?,
            "phi" => cfg.phi = parse_value(k, v)?,
            "grid" => cfg.grid = parse_value(k, v)?,
            "shared_reservoir" => cfg.shared_reservoir = parse_value(k, v)?,
            "n" => cfg.n = parse_value(k, v)?,
            "seed" => cfg.seed = parse_value(k, v)?,
            "out" => cfg.out = Some(PathBuf::from(v)),
            "ratios" => cfg.ratios = parse_list(k, v)?,
            "nbars" => cfg.nbars = parse_list(k, v)?,
            "message" => cfg.message = Some(parse_value(k, v)?),
            _ => return Err(ConfigError::Invalid(format!("unknown config key `{k}`"))),
        }
    }
    Ok(())
}

pub fn load_config_file(path: &Path) -> Result<BTreeMap<String, String>, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config_file(&text)
}

/// Parse `argv` (program name first) into a validated configuration.
pub fn parse_config<I, T>(argv: I) -> Result<RunConfig, ConfigError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv)?;
    let mut cfg = RunConfig::defaults(cli.command);
    if let Some(path) = &cli.config {
        apply_file(&mut cfg, &load_config_file(path)?)?;
    }
    macro_rules! over {
        ($($f:ident),*) => { $( if let Some(v) = cli.$f { cfg.$f = v; } )* };
    }
    over!(theta_prime, phi, grid, n, seed, ratios, nbars);
    if cli.out.is_some() {
        cfg.out = cli.out;
    }
    if cli.message.is_some() {
        cfg.message = cli.message;
    }
    cfg.shared_reservoir |= cli.shared_reservoir;
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &str) -> Result<RunConfig, ConfigError> {
        parse_config(std::iter::once("modeport").chain(args.split_whitespace()))
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn teleport_flags() {
        let c = parse("teleport --theta-prime 0.7854 --phi 0.5").unwrap();
        assert_eq!(c.command, Command::Teleport);
        assert_eq!(
            (c.theta_prime, c.phi, c.grid, c.shared_reservoir, c.seed),
            (0.7854, 0.5, 16, false, 0)
        );
        assert_eq!(parse("teleport --phi -1.5").unwrap().phi, -1.5);
    }

    #[test]
    fn sweep_flags() {
        let c = parse("sweep --n 100 --seed 7").unwrap();
        assert_eq!((c.command, c.n, c.seed), (Command::Sweep, 100, 7));
    }

    #[test]
    fn invariants() {
        assert!(
            matches!(parse("teleport --grid 8"), Err(ConfigError::Invalid(m)) if m.contains("grid too coarse"))
        );
        assert!(parse("teleport --grid 15").is_ok());
        assert!(parse("hardcore --ratios 10,1").is_err());
        assert!(parse("hardcore --ratios 0,1").is_err());
        assert!(parse("reservoir --nbars 4,16").is_ok());
        assert!(parse("densecoding --message 4").is_err());
        assert!(matches!(
            parse("teleport --bogus 1"),
            Err(ConfigError::Usage(_))
        ));
        assert!(matches!(parse("fly"), Err(ConfigError::Usage(_))));
    }

    #[test]
    fn file_then_flags() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        std::fs::write(&path, "# run\ntheta-prime = 0.3\nphi = 1.0  # bias\n\ngrid = 20\nshared_reservoir = true\nratios = 1, 2, 3\n").unwrap();
        let c = parse(&format!("teleport --config {} --phi 2.0", path.display())).unwrap();
        assert_eq!(
            (c.theta_prime, c.phi, c.grid, c.shared_reservoir),
            (0.3, 2.0, 20, true)
        );
        assert_eq!(c.ratios, [1.0, 2.0, 3.0]);
    }

    #[test]
    fn file_errors() {
        assert!(matches!(
            parse_config_file("grid 16"),
            Err(ConfigError::File { line: 1, .. })
        ));
        assert!(matches!(
            parse_config_file("a=1\na=2"),
            Err(ConfigError::File { line: 2, .. })
        ));
        let mut c = RunConfig::defaults(Command::Teleport);
        assert!(apply_file(&mut c, &parse_config_file("colour = red").unwrap()).is_err());
        assert!(apply_file(&mut c, &parse_config_file("grid = many").unwrap()).is_err());
        assert!(matches!(
            parse("teleport --config /nonexistent/x.conf"),
            Err(ConfigError::Io { .. })
        ));
    }
}
