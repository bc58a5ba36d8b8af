use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lbconn::connection::ConnectionKind;

#[derive(Debug, Parser)]
#[command(
    name = "lbconn",
    version,
    about = "Exact Čech computations for line bundles with connections on toric atlases"
)]
pub struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Inspect atlases.
    #[command(subcommand)]
    Atlas(AtlasCommand),
    /// Line bundle predicates and invariants.
    #[command(subcommand)]
    Bundle(BundleCommand),
    /// Connections: existence, curvature, integrability, regularity.
    #[command(subcommand)]
    Conn(ConnCommand),
    /// Picard-group structure of an atlas.
    #[command(subcommand)]
    Picard(PicardCommand),
    /// Run the regression suite of worked examples.
    PaperExamples {
        /// Negate every computed curvature (checks that the suite catches it).
        #[arg(long, hide = true)]
        mutate_curvature: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum AtlasCommand {
    /// List the built-in atlases.
    List,
    /// Show an atlas given by built-in name or JSON file.
    Show { atlas: String },
}

/// A bundle file, given positionally or with `--bundle`.
#[derive(Debug, Args)]
pub struct BundleInput {
    #[arg(value_name = "FILE", required_unless_present = "bundle")]
    pub file: Option<PathBuf>,
    #[arg(long, value_name = "FILE", conflicts_with = "file")]
    pub bundle: Option<PathBuf>,
}

impl BundleInput {
    pub fn path(&self) -> &PathBuf {
        self.file
            .as_ref()
            .or(self.bundle.as_ref())
            .expect("enforced by clap")
    }
}

/// A connection file, given positionally or with `--connection`.
#[derive(Debug, Args)]
pub struct ConnectionInput {
    #[arg(value_name = "FILE", required_unless_present = "connection")]
    pub file: Option<PathBuf>,
    #[arg(long, value_name = "FILE", conflicts_with = "file")]
    pub connection: Option<PathBuf>,
}

impl ConnectionInput {
    pub fn path(&self) -> &PathBuf {
        self.file
            .as_ref()
            .or(self.connection.as_ref())
            .expect("enforced by clap")
    }
}

#[derive(Debug, Subcommand)]
pub enum BundleCommand {
    /// Check the cocycle identities and unit conditions.
    Check(BundleInput),
    /// First Chern class (one- or two-chart atlases).
    Chern(BundleInput),
    /// Decide triviality and print a trivialization.
    Trivial(BundleInput),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Kind {
    Any,
    Integrable,
    RegularIntegrable,
}

impl From<Kind> for ConnectionKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Any => ConnectionKind::Any,
            Kind::Integrable => ConnectionKind::Integrable,
            Kind::RegularIntegrable => ConnectionKind::RegularIntegrable,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum ConnCommand {
    /// Find a connection of the given kind on a bundle.
    Solve {
        #[command(flatten)]
        input: BundleInput,
        #[arg(long, value_enum, default_value = "any")]
        kind: Kind,
    },
    /// Curvature 2-form of a connection.
    Curvature(ConnectionInput),
    /// Logarithmic regularity along the compactification boundary.
    CheckRegular(ConnectionInput),
    /// Vanishing of the curvature.
    CheckIntegrable(ConnectionInput),
}

#[derive(Debug, Subcommand)]
pub enum PicardCommand {
    /// Global forms, dlog units, Pic, Pic_c and Pic_ci data.
    Report {
        #[arg(long)]
        atlas: String,
        /// Multidegrees of global forms are listed in [-B, B]^n.
        #[arg(long, default_value_t = lbconn::picard::DEFAULT_DEGREE_BOUND)]
        degree_bound: i64,
    },
}
