use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Workbench for developing domain-specific usability heuristics.
#[derive(Debug, Parser)]
#[command(name = "heurbench", version, about)]
pub struct Cli {
    /// Project file to operate on.
    #[arg(long, global = true, default_value = "project.json")]
    pub project: PathBuf,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Create a new project for a domain.
    Init {
        domain: String,
        /// Overwrite an existing project file.
        #[arg(long)]
        force: bool,
    },
    /// Search keywords for the domain (stage 1).
    #[command(subcommand)]
    Keyword(KeywordCommand),
    /// Characteristic dimension items (stage 1).
    #[command(subcommand)]
    Dimension(DimensionCommand),
    /// Candidate heuristics (stage 2).
    #[command(subcommand)]
    Heuristic(HeuristicCommand),
    /// Initial specificity indicators (stage 3, revisable in stage 4).
    #[command(subcommand)]
    Isi(IsiCommand),
    /// Duplication and overlap resolution (stage 4).
    #[command(subcommand)]
    Normalize(NormalizeCommand),
    /// Specificity scores per dimension item (stage 5).
    #[command(subcommand)]
    Gsi(GsiCommand),
    /// Specificity matrix and selection (stage 5).
    #[command(subcommand)]
    Matrix(MatrixCommand),
    /// Standard template descriptions (stage 6).
    #[command(subcommand)]
    Template(TemplateCommand),
    /// Heuristic evaluation results (stage 7).
    #[command(subcommand)]
    Eval(EvalCommand),
    /// Mark a stage complete.
    #[command(subcommand)]
    Stage(StageCommand),
    /// Show the quality indicators of each evaluation.
    Indicators {
        /// Only this case study.
        #[arg(long)]
        case: Option<String>,
        /// Emit JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Show refinement advice for each evaluation.
    Advise {
        #[arg(long)]
        case: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Reopen an earlier stage and start a new iteration.
    Loopback {
        stage: u8,
        #[arg(long)]
        reason: String,
        /// Accept a stage outside the advice's suggestions.
        #[arg(long = "override")]
        override_advice: bool,
    },
    /// Export data for charts.
    #[command(subcommand)]
    Export(ExportCommand),
    /// Summarize the project.
    Status,
}

#[derive(Debug, Subcommand)]
pub enum KeywordCommand {
    Add { keyword: String },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
#[value(rename_all = "UPPER")]
pub enum Dimension {
    Uc,
    Pd,
    Ld,
    Up,
}

#[derive(Debug, Subcommand)]
pub enum DimensionCommand {
    Add {
        dimension: Dimension,
        label: String,
        /// Initial specificity of the item, 0-4.
        #[arg(long, default_value_t = 2)]
        specificity: i64,
    },
    List,
}

#[derive(Debug, Subcommand)]
pub enum HeuristicCommand {
    /// Import heuristics from CSV: set_id,index,name,statement,isi.
    Import { csv: PathBuf },
    List,
}

#[derive(Debug, Subcommand)]
pub enum IsiCommand {
    Set { heuristic: String, score: i64 },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Kind {
    Duplication,
    Overlap,
}

#[derive(Debug, Subcommand)]
pub enum NormalizeCommand {
    /// Record a conflict among heuristics.
    Declare {
        #[arg(long)]
        kind: Kind,
        #[arg(required = true)]
        members: Vec<String>,
        #[arg(long, default_value = "")]
        note: String,
    },
    /// Apply a normalization action read from a JSON file.
    Apply { action: PathBuf },
    Status,
}

#[derive(Debug, Subcommand)]
pub enum GsiCommand {
    /// Score one heuristic against every item of a dimension, as label=score pairs.
    Set {
        heuristic: String,
        dimension: Dimension,
        #[arg(required = true)]
        scores: Vec<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum MatrixCommand {
    /// Build the matrix; with a threshold, select heuristics whose FSI reaches it.
    Build {
        #[arg(long)]
        threshold: Option<String>,
    },
    Show,
}

#[derive(Debug, Subcommand)]
pub enum TemplateCommand {
    /// Store a template from a JSON file or a rendered text document.
    Set { file: PathBuf },
    /// Check a template file without storing it.
    Validate { file: PathBuf },
    /// Print the stored template of a heuristic.
    Render { heuristic: String },
}

#[derive(Debug, Args)]
pub struct EvalImport {
    /// Problems CSV: id,description,classification,domain_heuristic,control_heuristic,severity,control_specificity.
    pub csv: PathBuf,
    /// Case study name.
    #[arg(long)]
    pub case: String,
}

#[derive(Debug, Subcommand)]
pub enum EvalCommand {
    Import(EvalImport),
}

#[derive(Debug, Subcommand)]
pub enum StageCommand {
    Advance {
        stage: u8,
        /// Stage 2 only: an existing validated set suits the domain.
        #[arg(long)]
        exit_early: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum ExportCommand {
    /// Indicator values as CSV with a reference line at 1.
    Chart {
        /// Write to a file instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}
