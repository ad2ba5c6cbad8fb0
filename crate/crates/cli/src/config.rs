use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use yangian_core::checker::Gh7Form;
use yangian_core::metric::{make_metric, AlgebraKind, Metric};
use yangian_core::reps::{load_rep_str_capped, RepFile};

use crate::CliError;

#[derive(Parser, Debug)]
#[command(
    name = "yangian",
    version,
    about = "Exact verification of so/sp R-matrices and evaluation L-operators"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run one check and write a report.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub check: Check,
    #[arg(long, value_enum)]
    pub algebra: Option<Algebra>,
    #[arg(long)]
    pub n: Option<usize>,
    /// fundamental, spinor, js, r-quadratic or file:<path>
    #[arg(long)]
    pub rep: Option<RepChoice>,
    #[arg(long, value_enum, default_value_t = Backend::Symbolic)]
    pub backend: Backend,
    /// Report path; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Longest generator word accepted in representation entries.
    #[arg(long)]
    pub max_degree: Option<usize>,
    /// How the central constants of the Lie-algebra resolution are fixed,
    /// and which prefactors the free-algebra reconstruction uses.
    #[arg(long, value_enum, default_value_t = Relation::Stated)]
    pub relation: Relation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    Ybe,
    Rll,
    Linear,
    Quadratic,
    LieResolution,
    SpinConditions,
    Center,
    Fuse,
    Decompose,
    Charpoly,
}

impl Check {
    pub fn needs_rep(self) -> bool {
        !matches!(self, Check::Ybe | Check::Decompose | Check::Charpoly)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algebra {
    So,
    Sp,
}

impl From<Algebra> for AlgebraKind {
    fn from(a: Algebra) -> Self {
        match a {
            Algebra::So => AlgebraKind::Orthogonal,
            Algebra::Sp => AlgebraKind::Symplectic,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Symbolic,
    Matrix,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Stated,
    Derived,
}

impl From<Relation> for Gh7Form {
    fn from(r: Relation) -> Self {
        match r {
            Relation::Stated => Gh7Form::AsStated,
            Relation::Derived => Gh7Form::Derived,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RepChoice {
    Fundamental,
    Spinor,
    Js,
    RQuadratic,
    File(PathBuf),
}

impl FromStr for RepChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fundamental" => Ok(RepChoice::Fundamental),
            "spinor" => Ok(RepChoice::Spinor),
            "js" => Ok(RepChoice::Js),
            "r-quadratic" => Ok(RepChoice::RQuadratic),
            _ => match s.strip_prefix("file:") {
                Some(p) if !p.is_empty() => Ok(RepChoice::File(PathBuf::from(p))),
                _ => Err(format!(
                    "unknown representation `{s}` (expected fundamental, spinor, js, r-quadratic or file:<path>)"
                )),
            },
        }
    }
}

impl fmt::Display for RepChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepChoice::Fundamental => f.write_str("fundamental"),
            RepChoice::Spinor => f.write_str("spinor"),
            RepChoice::Js => f.write_str("js"),
            RepChoice::RQuadratic => f.write_str("r-quadratic"),
            RepChoice::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

/// Echo of the resolved configuration, as written into reports.
#[derive(Clone, Debug, Serialize)]
pub struct ConfigEcho {
    pub check: Check,
    pub algebra: String,
    pub n: usize,
    pub rep: Option<String>,
    pub backend: Backend,
    pub format: Format,
    pub max_degree: Option<usize>,
    pub relation: Relation,
}

/// Validated flags plus whatever had to be loaded to validate them.
pub struct RunConfig {
    pub check: Check,
    pub metric: Metric,
    pub rep: Option<RepChoice>,
    pub file: Option<RepFile>,
    pub backend: Backend,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub max_degree: Option<usize>,
    pub relation: Relation,
}

impl RunConfig {
    pub fn from_args(args: VerifyArgs) -> Result<Self, CliError> {
        if args.check.needs_rep() && args.rep.is_none() {
            return Err(CliError::Usage(format!(
                "--check {} needs --rep",
                args.check
                    .to_possible_value()
                    .expect("no skipped variants")
                    .get_name()
            )));
        }
        if !args.check.needs_rep() && args.backend != Backend::Symbolic {
            return Err(CliError::Usage(
                "the matrix backend needs a representation-based check".into(),
            ));
        }
        if args.max_degree == Some(0) {
            return Err(CliError::Usage("--max-degree must be positive".into()));
        }
        let file = match &args.rep {
            Some(RepChoice::File(path)) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
                Some(load_rep_str_capped(&text, args.max_degree)?)
            }
            _ => None,
        };
        let metric = match &file {
            Some(f) => {
                if args
                    .algebra
                    .is_some_and(|a| AlgebraKind::from(a) != f.metric.kind)
                    || args.n.is_some_and(|n| n != f.metric.n)
                {
                    return Err(CliError::Usage(format!(
                        "--algebra/--n disagree with the representation file ({})",
                        f.metric
                    )));
                }
                f.metric.clone()
            }
            None => {
                let algebra = args
                    .algebra
                    .ok_or_else(|| CliError::Usage("--algebra is required".into()))?;
                let n = args
                    .n
                    .ok_or_else(|| CliError::Usage("--n is required".into()))?;
                make_metric(algebra.into(), n)?
            }
        };
        Ok(RunConfig {
            check: args.check,
            metric,
            rep: args.rep,
            file,
            backend: args.backend,
            format: args.format,
            out: args.out,
            max_degree: args.max_degree,
            relation: args.relation,
        })
    }

    pub fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            check: self.check,
            algebra: self.metric.kind.short().to_string(),
            n: self.metric.n,
            rep: self.rep.as_ref().map(ToString::to_string),
            backend: self.backend,
            format: self.format,
            max_degree: self.max_degree,
            relation: self.relation,
        }
    }
}
