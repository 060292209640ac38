use clap::{Args, Parser, Subcommand, ValueEnum};

/// Exact computations for quivers with potential, framed stability, weight
/// windows and the DT/PT wall-crossing index sets.
#[derive(Debug, Parser)]
#[command(name = "wallcross", version)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Json)]
    pub out: OutFormat,
    /// Seed for the randomized stability checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// JSON input: a file path, `-` for stdin, or an inline object.
    #[arg(long, global = true)]
    pub input: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Json,
    Table,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print one of the built-in quivers.
    Quiver(QuiverArgs),
    /// Gradient of the trace of a potential at a representation.
    Grad(PotentialArgs),
    /// Whether a representation is a critical point of a potential.
    Crit(PotentialArgs),
    /// DT and PT semistability of a framed representation.
    Stab(StabArgs),
    /// Window polytopes and membership certificates.
    Poly(PolyArgs),
    /// Summand descriptors of the semiorthogonal decomposition, one JSON line each.
    Sod(SodArgs),
    /// Decompose a dominant weight, or sweep every admissible weight.
    Decomp(DecompArgs),
    /// Degree-zero series and the product identity.
    Series(SeriesArgs),
}

#[derive(Debug, Args)]
pub struct QuiverArgs {
    /// conifold, framed_conifold, reduced, adhm, dtpt, dtpt_loops, extended_adhm, triple_loop.
    #[arg(long)]
    pub kind: String,
    #[arg(long)]
    pub a: Option<i64>,
    #[arg(long)]
    pub r: Option<i64>,
    #[arg(long)]
    pub m: Option<i64>,
    /// Number of loops at the framing vertex (dtpt_loops).
    #[arg(long = "N")]
    pub n: Option<i64>,
}

/// The representation comes from `--input`, either alone or as
/// `{"representation": ..., "potential": ...}`.
#[derive(Debug, Args)]
pub struct PotentialArgs {
    /// Built-in potential (conifold, reduced, triple_loop, dtpt) used when
    /// the input carries none.
    #[arg(long)]
    pub potential: Option<String>,
    #[arg(long)]
    pub a: Option<i64>,
    #[arg(long)]
    pub r: Option<i64>,
}

#[derive(Debug, Args)]
pub struct StabArgs {
    /// Sampler trials for the one-parameter subgroup search.
    #[arg(long, default_value_t = 500)]
    pub trials: usize,
    /// Random base changes for the gauge check.
    #[arg(long, default_value_t = 100)]
    pub conjugations: usize,
}

#[derive(Debug, Args)]
pub struct PolyArgs {
    #[command(subcommand)]
    pub action: PolyAction,
}

#[derive(Debug, Subcommand)]
pub enum PolyAction {
    /// Print the generators of a window.
    Show(KindArgs),
    /// Membership of a point, or of `point + eps direction` for small eps > 0.
    Member {
        #[command(flatten)]
        kind: KindArgs,
        /// Comma-separated rationals.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, allow_hyphen_values = true)]
        direction: Option<String>,
    },
}

#[derive(Debug, Args)]
pub struct KindArgs {
    /// W, WSlice, V, Wa or Va.
    #[arg(long)]
    pub kind: String,
    #[arg(long)]
    pub d: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub w: Option<i64>,
    #[arg(long)]
    pub a: Option<u32>,
    #[arg(long)]
    pub r: Option<u32>,
}

#[derive(Debug, Args)]
pub struct SodArgs {
    #[arg(long)]
    pub d: u32,
    #[arg(long)]
    pub r: u32,
    #[arg(long)]
    pub a: u32,
    /// `p/q`, `p/q+eps` or `p/q-eps`.
    #[arg(long, allow_hyphen_values = true)]
    pub mu: String,
    #[arg(long, default_value = "closed")]
    pub mode: String,
}

#[derive(Debug, Args)]
pub struct DecompArgs {
    /// Comma-separated integer weight; without it every admissible weight
    /// of dimension `--d` is checked for a unique decomposition.
    #[arg(long, allow_hyphen_values = true)]
    pub chi: Option<String>,
    #[arg(long)]
    pub d: Option<u32>,
    #[arg(long)]
    pub r: u32,
    #[arg(long)]
    pub a: u32,
    #[arg(long, allow_hyphen_values = true)]
    pub mu: String,
}

#[derive(Debug, Args)]
pub struct SeriesArgs {
    #[command(subcommand)]
    pub action: SeriesAction,
}

#[derive(Debug, Subcommand)]
pub enum SeriesAction {
    /// Compare the three expressions for the degree-zero series.
    Verify(SeriesOrder),
    /// Coefficients from the summand enumeration.
    Dt(SeriesOrder),
    /// The product over slopes.
    Euler(SeriesOrder),
    /// Plane partitions, raised to the power `r`.
    Macmahon(SeriesOrder),
}

#[derive(Debug, Args)]
pub struct SeriesOrder {
    #[arg(long, default_value_t = 1)]
    pub r: u32,
    /// Truncation order.
    #[arg(long = "D")]
    pub order: usize,
}
