//! Command-line front end for `filquiv`: JSON documents in, JSON reports out.
//!
//! Exit codes: 0 computed, 2 validation or parse error, 3 resource cap hit,
//! 4 inconclusive (`certify` only). Diagnostics go to stderr as one JSON
//! object per line with a machine-readable `error` id.

pub mod commands;
pub mod doc;
pub mod error;

use std::io::Read;

use clap::{Args, Parser, Subcommand, ValueEnum};
use filquiv::stability::DEFAULT_SUBREP_CAP;

pub use doc::{Document, Kind, SCHEMA_VERSION};
pub use error::{CliError, EXIT_INCONCLUSIVE, EXIT_OK, EXIT_RESOURCE, EXIT_VALIDATION};

#[derive(Debug, Parser)]
#[command(name = "filquiv", version, about = "Filtered representations of ladder quivers")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// `q` or `fp:<p>`; must agree with the field of every input document.
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// Overrides the convention of the stability document.
    #[arg(long, global = true, value_enum)]
    pub convention: Option<ConventionArg>,
    /// Cap on enumerated candidates (subobjects, points, group elements).
    #[arg(long, global = true, default_value_t = DEFAULT_SUBREP_CAP as u64)]
    pub cap: u64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for sweeps; results do not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Semistability criterion used by `stability`.
    #[arg(long, global = true, default_value = "slope")]
    pub criterion: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    Subgeq,
    Subleq,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LocusArg {
    Rel,
    Fil,
}

/// Where a ladder comes from: a ladder document, or a base quiver and a
/// level count.
#[derive(Debug, Clone, Args)]
pub struct LadderSource {
    /// Ladder document.
    #[arg(long, conflicts_with_all = ["base", "quiver"])]
    pub ladder: Option<String>,
    /// `trivial`, `linear:<n>` or `square`.
    #[arg(long, conflicts_with = "quiver")]
    pub base: Option<String>,
    /// Quiver document for the base.
    #[arg(long)]
    pub quiver: Option<String>,
    #[arg(long)]
    pub levels: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build `A_l x Q` and print the ladder document.
    Ladder {
        #[command(flatten)]
        src: LadderSource,
    },
    /// Relations and filteredness of a representation.
    Check {
        #[arg(long)]
        rep: String,
    },
    /// The indecomposable projective at a vertex, e.g. `--vertex "(1,q1)"`.
    Projective {
        #[command(flatten)]
        src: LadderSource,
        #[arg(long)]
        vertex: String,
    },
    /// Torsion part and torsion-free quotient.
    Torsion {
        #[arg(long)]
        rep: String,
    },
    /// κ of a representation, or the κ-class of a presentation.
    Kappa {
        #[arg(long, required_unless_present = "pres", conflicts_with = "pres")]
        rep: Option<String>,
        #[arg(long)]
        pres: Option<String>,
    },
    /// Two-term resolution by filtered representations.
    Resolve {
        #[arg(long)]
        rep: String,
    },
    /// Semistability verdicts for one representation, or a sweep over all
    /// points of a dimension vector (`--dims` with a ladder source).
    Stability {
        #[arg(long)]
        stab: String,
        #[arg(long, conflicts_with = "dims")]
        rep: Option<String>,
        #[command(flatten)]
        src: LadderSource,
        /// Comma-separated, in ladder vertex order.
        #[arg(long, required_unless_present = "rep")]
        dims: Option<String>,
        #[arg(long, value_enum, default_value = "rel")]
        locus: LocusArg,
    },
    /// Harder–Narasimhan filtration.
    Hn {
        #[arg(long)]
        rep: String,
        #[arg(long)]
        stab: String,
    },
    /// Strict Jordan–Hölder filtration, if one exists.
    Jh {
        #[arg(long)]
        rep: String,
        #[arg(long)]
        stab: String,
    },
    /// Maximal flag and its graded object.
    Grmax {
        #[arg(long)]
        rep: String,
        #[arg(long)]
        stab: Option<String>,
    },
    /// S-equivalence (and S^JH-equivalence when `--stab` is given).
    Sequiv {
        #[arg(long)]
        rep: String,
        #[arg(long)]
        other: String,
        #[arg(long)]
        stab: Option<String>,
    },
    /// Type-1 / Type-2 classification of a semistable point.
    Pointtype {
        #[arg(long)]
        rep: String,
        #[arg(long)]
        stab: String,
    },
    /// Limit under a diagonal one-parameter subgroup.
    Limit {
        #[arg(long)]
        rep: String,
        /// Weights per vertex, vertices separated by `;`, e.g. `0,1;1`.
        #[arg(long)]
        weights: String,
        #[arg(long, value_enum, default_value = "fil")]
        locus: LocusArg,
        #[arg(long)]
        stab: Option<String>,
    },
    /// Hilbert–Mumford test over two-step gradings.
    Hm {
        #[arg(long)]
        rep: String,
        #[arg(long)]
        stab: String,
        #[arg(long, value_enum, default_value = "fil")]
        locus: LocusArg,
    },
    /// Evaluate determinantal semi-invariants.
    Theta {
        #[arg(long)]
        rep: String,
        #[arg(long, required = true)]
        pres: Vec<String>,
    },
    /// Search for a nonvanishing semi-invariant.
    Certify {
        #[arg(long)]
        rep: String,
        #[arg(long)]
        stab: String,
        #[arg(long, default_value_t = 2)]
        n_max: i64,
        #[arg(long, default_value_t = 1)]
        entry_degree: usize,
        #[arg(long, default_value_t = 2000)]
        trials: usize,
    },
    /// S-equivalence classes of semistable points over a prime field.
    Enumerate {
        #[command(flatten)]
        src: LadderSource,
        #[arg(long)]
        dims: String,
        #[arg(long)]
        stab: String,
        #[arg(long, value_enum, default_value = "fil")]
        locus: LocusArg,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parse `args` (including the program name) and run. Inputs named `-`
/// are read from `stdin`.
pub fn run<I, S>(args: I, stdin: &mut dyn Read) -> RunOutput
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                RunOutput {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                RunOutput {
                    code,
                    stdout: String::new(),
                    stderr: CliError::new("usage", text.trim_end(), EXIT_VALIDATION).to_json() + "\n",
                }
            };
        }
    };
    match commands::execute(&cli, stdin) {
        Ok(out) => RunOutput {
            code: out.code,
            stdout: out.doc.to_json() + "\n",
            stderr: out
                .diagnostic
                .map(|d| d.to_json() + "\n")
                .unwrap_or_default(),
        },
        Err(e) => RunOutput {
            code: e.exit_code,
            stdout: String::new(),
            stderr: e.to_json() + "\n",
        },
    }
}
