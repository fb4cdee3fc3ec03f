use crate::error::CliError;
use clap::{Args, Parser, Subcommand, ValueEnum};
use multiplet_core::grid::AxisRange;
use multiplet_core::MultipletSpec;
use serde::Serialize;
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Debug, Parser)]
#[command(name = "multiplets", version, about = "Squeezed multiplet scans and phase-space grids")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GlobalArgs {
    /// Fock-space truncation: higher-order states (default 200) and the
    /// numeric engine's oracle (default: sized from the grid).
    #[arg(long, global = true)]
    pub nmax: Option<usize>,
    /// Directory for output files (created if missing).
    #[arg(long, global = true, default_value = ".")]
    pub out_dir: PathBuf,
    /// Accepted for compatibility; every command is deterministic.
    #[arg(long, global = true)]
    pub seedless: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Overlap magnitudes between an ordinary and a higher-order multiplet member.
    OverlapScan(OverlapArgs),
    /// Characteristic function C(x + ip) on a grid.
    CharGrid(GridArgs),
    /// Wigner function W(x + ip) = C(2(x + ip))/pi on a grid.
    WignerGrid(GridArgs),
    /// First zeros of C along rays and whether they close into a ring.
    ZeroScan(ZeroArgs),
    /// Runs the invariant suite and prints a pass/fail table.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OverlapArgs {
    /// Ordinary member, e.g. `D=2,m=0`.
    #[arg(long)]
    pub ordinary: SpecTemplate,
    /// Higher-order member, e.g. `p=4,D=1,m=0`.
    #[arg(long)]
    pub higher: SpecTemplate,
    /// Ordinary strengths `start:stop:count`.
    #[arg(long, default_value = "0:2.5:60")]
    pub r: AxisRange,
    /// Higher-order strengths; defaults to 0:0.4:60 for p = 4 and 0:0.6:60 otherwise.
    #[arg(long)]
    pub rp: Option<AxisRange>,
    /// Also compute every higher-order state at twice the truncation and
    /// report the largest overlap change.
    #[arg(long)]
    pub check_doubling: bool,
    /// Report the grid argmax without golden-section refinement.
    #[arg(long)]
    pub no_refine: bool,
    /// File-name tag; derived from the two members when omitted.
    #[arg(long)]
    pub tag: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Engine {
    /// Closed form (p = 2 only).
    Analytic,
    /// Dense Fock-space evaluation (any p).
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quadrant {
    Full,
    UpperRight,
    UpperLeft,
    LowerLeft,
    LowerRight,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GridArgs {
    /// Multiplet size D.
    #[arg(long = "D", value_name = "D")]
    pub size: usize,
    /// Member index m.
    #[arg(long = "m", value_name = "M")]
    pub member: usize,
    /// Squeezing strengths, comma separated; one file per value.
    #[arg(long = "r", value_name = "R", value_delimiter = ',', required = true)]
    pub strengths: Vec<f64>,
    /// Squeeze order p.
    #[arg(long, default_value_t = 2)]
    pub order: u32,
    /// Half-width of the square window in x and p.
    #[arg(long, default_value_t = 6.0)]
    pub range: f64,
    /// Points per axis; 1 samples the origin only.
    #[arg(long, default_value_t = 121)]
    pub res: usize,
    #[arg(long, value_enum, default_value_t = Quadrant::Full)]
    pub quadrant: Quadrant,
    #[arg(long, value_enum, default_value_t = Engine::Analytic)]
    pub engine: Engine,
    /// Also write one file per diagonal and per pair term (analytic engine).
    #[arg(long)]
    pub breakdown: bool,
    /// Use the diagonal exponent with p_b unsquared (deliberately wrong; for validation runs).
    #[arg(long)]
    pub use_paper_exponents: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ZeroArgs {
    #[arg(long = "D", value_name = "D")]
    pub size: usize,
    #[arg(long = "m", value_name = "M")]
    pub member: usize,
    /// Squeezing strengths, comma separated.
    #[arg(long = "r", value_name = "R", value_delimiter = ',', required = true)]
    pub strengths: Vec<f64>,
    /// Rays in the symmetry slice [0, pi/D).
    #[arg(long, default_value_t = 64)]
    pub rays: usize,
    /// Largest radius searched along each ray.
    #[arg(long, default_value_t = 6.0)]
    pub rmax: f64,
    /// Radial sampling step used to bracket sign changes.
    #[arg(long, default_value_t = multiplet_core::phase_space::RADIAL_STEP)]
    pub step: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ValidateArgs {
    /// Reduced sweep that finishes well under a minute.
    #[arg(long)]
    pub quick: bool,
    /// Check the analytic engine with the unsquared diagonal exponent; the
    /// oracle comparison is then expected to fail.
    #[arg(long)]
    pub use_paper_exponents: bool,
}

/// `key=value` list naming a member without its strength, e.g. `p=4,D=2,m=1`.
/// `p` defaults to 2; an `r` entry is accepted and ignored by scans.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpecTemplate {
    pub order: u32,
    pub size: usize,
    pub member: usize,
}

impl SpecTemplate {
    pub fn at(&self, strength: f64) -> Result<MultipletSpec, CliError> {
        Ok(MultipletSpec::new(self.order, self.size, self.member, strength)?)
    }

    pub fn tag(&self) -> String {
        format!("p{}D{}m{}", self.order, self.size, self.member)
    }
}

impl FromStr for SpecTemplate {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (mut order, mut size, mut member) = (2u32, None, None);
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| format!("`{part}` is not key=value"))?;
            let bad = |_| format!("`{value}` is not a valid value for {key}");
            match key.trim() {
                "p" => order = value.trim().parse().map_err(bad)?,
                "D" => size = Some(value.trim().parse().map_err(bad)?),
                "m" => member = Some(value.trim().parse().map_err(bad)?),
                "r" => {
                    value.trim().parse::<f64>().map_err(|_| format!("`{value}` is not a number"))?;
                }
                other => return Err(format!("unknown key `{other}` (expected p, D, m or r)")),
            }
        }
        let size = size.ok_or("missing D")?;
        let member = member.ok_or("missing m")?;
        MultipletSpec::new(order, size, member, 0.0).map_err(|e| e.to_string())?;
        Ok(SpecTemplate { order, size, member })
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
    fn parses_templates() {
        let t: SpecTemplate = "p=4, D=2, m=1".parse().unwrap();
        assert_eq!(t, SpecTemplate { order: 4, size: 2, member: 1 });
        let t: SpecTemplate = "D=3,m=0,r=1.2".parse().unwrap();
        assert_eq!(t.order, 2);
        assert!("D=2".parse::<SpecTemplate>().is_err());
        assert!("D=2,m=2".parse::<SpecTemplate>().is_err());
        assert!("D=2,m=0,q=1".parse::<SpecTemplate>().is_err());
        assert!("p=1,D=1,m=0".parse::<SpecTemplate>().is_err());
    }
}
