use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, ValueEnum};
use trendspectra::{
    Algebra, BoundaryFill, BoundaryPolicy, CutoffMode, KernelKind, LocalPolySpec, MmsreFamily,
    MmsreSpec, ReplaceScope, MUSGRAVE_NOISE_RATIO,
};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FilterArg {
    Henderson,
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundaryArg {
    Lpr,
    Lc,
    Ql,
    Cq,
    Reflecting,
    Circulant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgebraArg {
    Tau11,
    Circulant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScopeArg {
    All,
    Realtime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FillArg {
    Reflecting,
    Circulant,
}

/// `auto | k=<int> | xi=<real> | period=<real>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffArg(pub CutoffMode);

impl FromStr for CutoffArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad =
            || format!("invalid cutoff `{s}`, expected auto, k=<int>, xi=<real> or period=<real>");
        if s == "auto" {
            return Ok(CutoffArg(CutoffMode::Auto));
        }
        let (key, val) = s.split_once('=').ok_or_else(bad)?;
        let mode = match key {
            "k" => CutoffMode::Count(val.parse().map_err(|_| bad())?),
            "xi" => CutoffMode::Threshold(val.parse().map_err(|_| bad())?),
            "period" => CutoffMode::Period(val.parse().map_err(|_| bad())?),
            _ => return Err(bad()),
        };
        Ok(CutoffArg(mode))
    }
}

/// Flags shared by every command.
#[derive(Debug, Clone, Args)]
pub struct Shared {
    /// Kernel of the local polynomial filter.
    #[arg(long, value_enum, default_value = "henderson", global = true)]
    pub filter: FilterArg,

    /// Bandwidth; the symmetric filter has 2h+1 terms.
    #[arg(long, default_value_t = 6, global = true)]
    pub h: usize,

    /// Degree of the local polynomial.
    #[arg(long, default_value_t = 3, global = true)]
    pub p: usize,

    /// Series length (taken from --input when smoothing).
    #[arg(long, global = true)]
    pub n: Option<usize>,

    /// Boundary rows of the smoother matrix.
    #[arg(long, value_enum, default_value = "lc", global = true)]
    pub boundary: BoundaryArg,

    /// Bias to noise ratio of the LC, QL and CQ filters.
    #[arg(long, default_value_t = MUSGRAVE_NOISE_RATIO, global = true)]
    pub noise_ratio: f64,

    #[arg(long, value_enum, default_value = "tau11", global = true)]
    pub algebra: AlgebraArg,

    /// Eigenvalue cutoff: auto, k=<int>, xi=<real> or period=<real>.
    #[arg(long, global = true)]
    pub cutoff: Option<CutoffArg>,

    /// Replace all boundary rows, or only the real-time rows.
    #[arg(long, value_enum, default_value = "all", global = true)]
    pub replace_scope: ScopeArg,

    /// Rows left alone by --replace-scope realtime.
    #[arg(long, value_enum, default_value = "reflecting", global = true)]
    pub fill: FillArg,

    /// Input series, CSV with header `t,value`.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,

    /// Main output file; standard output when absent.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Secondary report file (bound: per-eigenvalue table; design: per-row diagnostics).
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
}

impl Shared {
    pub fn poly_spec(&self) -> Result<LocalPolySpec, CliError> {
        let kind = match self.filter {
            FilterArg::Henderson => KernelKind::Henderson,
            FilterArg::Uniform => KernelKind::Uniform,
        };
        Ok(LocalPolySpec::new(kind, self.h, self.p)?)
    }

    pub fn policy(&self) -> Result<BoundaryPolicy, CliError> {
        let mmsre = |family| -> Result<BoundaryPolicy, CliError> {
            Ok(BoundaryPolicy::mmsre(MmsreSpec::new(
                family,
                self.noise_ratio,
            )?))
        };
        let policy = match self.boundary {
            BoundaryArg::Lpr => BoundaryPolicy::lpr(self.poly_spec()?),
            BoundaryArg::Lc => mmsre(MmsreFamily::Lc)?,
            BoundaryArg::Ql => mmsre(MmsreFamily::Ql)?,
            BoundaryArg::Cq => mmsre(MmsreFamily::Cq)?,
            BoundaryArg::Reflecting => BoundaryPolicy::reflecting(),
            BoundaryArg::Circulant => BoundaryPolicy::circulant(),
        };
        let scope = match self.replace_scope {
            ScopeArg::All => ReplaceScope::AllBoundaryRows,
            ScopeArg::Realtime => ReplaceScope::RealtimeRowOnly,
        };
        let fill = match self.fill {
            FillArg::Reflecting => BoundaryFill::Reflecting,
            FillArg::Circulant => BoundaryFill::Circulant,
        };
        Ok(policy.with_scope(scope).with_fill(fill))
    }

    pub fn algebra(&self) -> Algebra {
        match self.algebra {
            AlgebraArg::Tau11 => Algebra::Tau11,
            AlgebraArg::Circulant => Algebra::Circulant,
        }
    }

    /// `--n`, required and checked against `2h`.
    pub fn length(&self) -> Result<usize, CliError> {
        let n = self
            .n
            .ok_or_else(|| CliError::Config("--n is required for this command".into()))?;
        self.check_length(n)?;
        Ok(n)
    }

    pub fn check_length(&self, n: usize) -> Result<(), CliError> {
        if n <= 2 * self.h {
            return Err(CliError::Config(format!(
                "series length n={n} must exceed 2h={}",
                2 * self.h
            )));
        }
        Ok(())
    }

    pub fn boundary_name(&self) -> &'static str {
        match self.boundary {
            BoundaryArg::Lpr => "lpr",
            BoundaryArg::Lc => "lc",
            BoundaryArg::Ql => "ql",
            BoundaryArg::Cq => "cq",
            BoundaryArg::Reflecting => "reflecting",
            BoundaryArg::Circulant => "circulant",
        }
    }
}
