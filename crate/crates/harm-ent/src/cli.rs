//! Command-line arguments.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "harm-ent", version, about = "Entanglement and criticality of harmonic lattices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Override a numerical tolerance, e.g. `positivity=1e-10`. Repeatable.
    #[arg(long = "tol-override", value_name = "NAME=VALUE", global = true)]
    pub tol_override: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify the symbol as regular (gapped) or singular (critical); JSON on stdout.
    Classify {
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Entropy, mutual information and bounds for one block.
    Report {
        #[command(flatten)]
        spec: SpecArgs,
        /// Block side length (a segment in 1D, an N1^d box otherwise).
        #[arg(long)]
        n1: usize,
        /// What to print on stdout.
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Also write report.json and report.csv here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rows of V^{1/2} and V^{-1/2} as CSV.
    Kernel {
        #[command(flatten)]
        spec: SpecArgs,
        /// Write kernel.csv here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Entropy against block size for several η chains on a ring; CSV per η plus an SVG plot.
    Fig1 {
        /// η values to plot.
        #[arg(long = "eta", num_args = 1.., default_values_t = [0.2, 0.6, 1.2, 1.6])]
        etas: Vec<f64>,
        /// Ring size.
        #[arg(long, default_value_t = 512)]
        n: usize,
        /// Block sizes.
        #[arg(long, default_value = "2:128")]
        sizes: SizeList,
        #[arg(long, default_value = "fig1")]
        out: PathBuf,
    },
    /// Entanglement over a list of ring sizes (half/half) or block sizes (fixed ring).
    Sweep {
        #[command(flatten)]
        spec: SpecArgs,
        /// Ring sizes for `half`, block sizes for `block`.
        #[arg(long)]
        sizes: SizeList,
        #[arg(long, value_enum, default_value_t = Rule::Half)]
        rule: Rule,
        /// Write sweep.csv and sweep_fit.json here instead of printing the CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Growth of the half/half mutual information with ring size.
    Widom {
        #[command(flatten)]
        spec: SpecArgs,
        /// Nominal ring sizes; each is moved to the nearest odd size far from resonance.
        #[arg(long, default_value = "65,129,257,513,1025,2049")]
        sizes: SizeList,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fourier coefficients of ln λ^{1/2} and the block determinant asymptotics.
    Szego {
        #[command(flatten)]
        spec: SpecArgs,
        /// Number of coefficients past c_0.
        #[arg(long, default_value_t = 200)]
        order: usize,
        /// Block sizes for the determinant check. The ring defaults to 8x the largest.
        #[arg(long, default_value = "8,16,32,64,128,256")]
        sizes: SizeList,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Entropy of n x n squares on a 2D torus.
    AreaLaw {
        /// η of the two chains whose product gives the 2D coupling.
        #[arg(long, default_value_t = 1.2, conflicts_with = "spec")]
        eta: f64,
        /// Torus side (η chains).
        #[arg(long, default_value_t = 64)]
        n: usize,
        /// 2D coupling spec JSON file, instead of the η product.
        #[arg(long, value_name = "JSON")]
        spec: Option<PathBuf>,
        /// Square sides.
        #[arg(long, default_value = "4:12")]
        sizes: SizeList,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct SpecArgs {
    /// η of the chain V_0 = 4η²+2, V_±1 = -4η, V_±2 = 1.
    #[arg(long, conflicts_with = "spec")]
    pub eta: Option<f64>,
    /// Ring size for η chains, or a new extent for a 1D spec file.
    #[arg(long)]
    pub n: Option<usize>,
    /// Coupling spec JSON file.
    #[arg(long, value_name = "JSON")]
    pub spec: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Rule {
    /// Ring sizes N, block (N-1)/2 for odd N and N/2 for even N.
    Half,
    /// Block sizes on a ring of size --n.
    Block,
}

/// `a:b`, `a:b:step` (inclusive) or a comma list `a,b,c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizeList(pub Vec<usize>);

impl FromStr for SizeList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let int = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("not a size: {t:?}"));
        let sizes: Vec<usize> = if s.contains(',') {
            s.split(',').map(int).collect::<Result<_, _>>()?
        } else {
            let parts: Vec<&str> = s.split(':').collect();
            let (a, b, step) = match parts.as_slice() {
                [a] => (int(a)?, int(a)?, 1),
                [a, b] => (int(a)?, int(b)?, 1),
                [a, b, c] => (int(a)?, int(b)?, int(c)?),
                _ => return Err(format!("expected a:b[:step], got {s:?}")),
            };
            if step == 0 || a > b {
                return Err(format!("empty range {s:?}"));
            }
            (a..=b).step_by(step).collect()
        };
        if sizes.contains(&0) {
            return Err("sizes must be positive".into());
        }
        if sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err("sizes must be strictly increasing".into());
        }
        Ok(SizeList(sizes))
    }
}

impl fmt::Display for SizeList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|n| n.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}
