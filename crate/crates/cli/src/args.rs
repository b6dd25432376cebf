use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use schubert_core::{CellSelector, FieldSpec, FiniteField, Partition, PivotSet};

#[derive(Debug, Parser)]
#[command(name = "schubert", version, about = "Association schemes on Schubert cells over finite fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the Schubert cells of Gr(m, n) with their sizes and relation counts.
    Cells(CellsArgs),
    /// Build the scheme X_α of one cell and print its parameters.
    Scheme(SchemeArgs),
    /// Run the verification suite on selected cells.
    Verify(VerifyArgs),
    /// Build and verify a generalized wreath product over a poset file.
    Gwp(GwpArgs),
    /// Check the Gaussian binomial identities for Gr(m, n).
    Gaussian(GaussianArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct FieldArgs {
    /// Field order: a prime `p`, a prime power `q`, or `p^k`.
    #[arg(long)]
    pub q: String,
    /// Coefficients c0,c1,…,ck of a monic irreducible modulus (low degree first).
    #[arg(long)]
    pub modulus: Option<String>,
}

impl FieldArgs {
    pub fn field(&self) -> Result<FiniteField> {
        let spec = FieldSpec::parse(&self.q, self.modulus.as_deref())?;
        Ok(FiniteField::new(spec)?)
    }
}

#[derive(Debug, Args)]
pub struct SelectorArgs {
    /// Pivot set as `i,j` pairs separated by `;`, e.g. `2,4;4,3;5,2;7,1`.
    #[arg(long, conflicts_with = "lambda")]
    pub alpha: Option<String>,
    /// Partition as a comma list, e.g. `4,3,1`.
    #[arg(long)]
    pub lambda: Option<String>,
}

impl SelectorArgs {
    pub fn selector(&self) -> Result<Option<CellSelector>> {
        if let Some(a) = &self.alpha {
            return Ok(Some(CellSelector::Alpha(parse_alpha(a)?)));
        }
        if let Some(l) = &self.lambda {
            return Ok(Some(CellSelector::Lambda(parse_lambda(l)?)));
        }
        Ok(None)
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CellsArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: usize,
    #[command(flatten)]
    pub field: FieldArgs,
    #[command(flatten)]
    pub select: SelectorArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SchemeArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: usize,
    #[command(flatten)]
    pub field: FieldArgs,
    /// Cell to build; the top cell λ = (m, …, m) when neither is given.
    #[command(flatten)]
    pub select: SelectorArgs,
    #[arg(long, default_value_t = 4096)]
    pub max_cell_size: u128,
    /// Accept cells above --max-cell-size; axioms are then checked on sampled pairs.
    #[arg(long)]
    pub allow_large: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[command(flatten)]
    pub jobs: JobsArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub n: usize,
    /// Required unless --all-m.
    #[arg(long, required_unless_present = "all_m", conflicts_with = "all_m")]
    pub m: Option<usize>,
    /// Verify every m in 1..n.
    #[arg(long)]
    pub all_m: bool,
    #[command(flatten)]
    pub field: FieldArgs,
    #[command(flatten)]
    pub select: SelectorArgs,
    /// Cells above this many points are reported SKIPPED.
    #[arg(long, default_value_t = 4096)]
    pub max_cell_size: u128,
    /// Verify cells above --max-cell-size with sampled pairs instead of skipping them.
    #[arg(long)]
    pub allow_large: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random trials per cell for the group-action checks.
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    /// Also run the pair-witness identity trial (known to fail on some cells).
    #[arg(long)]
    pub pair_witness: bool,
    /// Include per-check wall time in the report (makes output nondeterministic).
    #[arg(long)]
    pub timings: bool,
    #[command(flatten)]
    pub jobs: JobsArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct GwpArgs {
    /// Poset JSON: `{"elements": [...], "covers": [[lower, upper], ...]}`.
    #[arg(long)]
    pub poset: PathBuf,
    /// Component per element, in element order: `k` for the one-class scheme
    /// on k points, `zk` for the cyclic difference scheme on Z/k. A single
    /// entry applies to every element.
    #[arg(long)]
    pub components: String,
    #[arg(long, default_value_t = 1 << 16)]
    pub max_size: u128,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub jobs: JobsArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct GaussianArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: usize,
    #[command(flatten)]
    pub field: FieldArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct JobsArgs {
    /// Worker threads; 1 runs everything sequentially.
    #[arg(long, env = "SCHUBERT_JOBS")]
    pub jobs: Option<usize>,
}

pub fn parse_alpha(s: &str) -> Result<PivotSet> {
    let pairs = s
        .split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let (i, j) = p.split_once(',').with_context(|| format!("pivot `{p}` is not `i,j`"))?;
            Ok((i.trim().parse()?, j.trim().parse()?))
        })
        .collect::<Result<Vec<(usize, usize)>>>()
        .with_context(|| format!("cannot parse --alpha `{s}`"))?;
    Ok(PivotSet::from_pairs(&pairs)?)
}

pub fn parse_lambda(s: &str) -> Result<Partition> {
    let parts = s
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| p.trim().parse::<u32>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .with_context(|| format!("cannot parse --lambda `{s}`"))?;
    Ok(Partition::new(parts)?)
}

/// Parses one `--components` entry.
pub enum ComponentSpec {
    OneClass(usize),
    Cyclic(usize),
}

pub fn parse_components(s: &str) -> Result<Vec<ComponentSpec>> {
    s.split(',')
        .map(|c| {
            let c = c.trim().to_ascii_lowercase();
            let (cyclic, digits) = match c.strip_prefix('z') {
                Some(rest) => (true, rest),
                None => (false, c.as_str()),
            };
            let k: usize = digits.parse().with_context(|| format!("bad component `{c}`"))?;
            if k < 2 {
                bail!("component `{c}` needs at least 2 points");
            }
            Ok(if cyclic { ComponentSpec::Cyclic(k) } else { ComponentSpec::OneClass(k) })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_syntax() {
        let a = parse_alpha("2,4;4,3; 5,2;7,1").unwrap();
        assert_eq!(a, PivotSet::from_pairs(&[(2, 4), (4, 3), (5, 2), (7, 1)]).unwrap());
        assert!(parse_alpha("2;4").is_err());
        assert!(parse_alpha("1,1;2,2").is_err(), "comparable pivots");
    }

    #[test]
    fn lambda_syntax() {
        assert_eq!(parse_lambda("4,3,1").unwrap().parts(), &[4, 3, 1]);
        assert!(parse_lambda("").unwrap().is_empty());
        assert!(parse_lambda("1,3").is_err());
        assert!(parse_lambda("a").is_err());
    }

    #[test]
    fn component_syntax() {
        let c = parse_components("2, z3,5").unwrap();
        assert!(matches!(c[..], [ComponentSpec::OneClass(2), ComponentSpec::Cyclic(3), ComponentSpec::OneClass(5)]));
        assert!(parse_components("1").is_err());
        assert!(parse_components("zz").is_err());
    }
}
