//! Run configuration: strict TOML with one table per module.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{GridKind, RadialGrid};
use crate::nonlinearity::{Kind, NonlinearitySpec, Potential};
use crate::radial::{BoundaryCondition, Damping, SolverConfig};
use crate::source::{Forcing, RadialSource};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub nonlinearity: NonlinearityConfig,
    pub solver: SolverSection,
    pub branch: BranchSection,
    pub blowup: BlowupSection,
    pub pohozaev: PohozaevSection,
    pub green: GreenSection,
    pub counterexample: CounterexampleSection,
    pub output: OutputSection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KindName {
    PureExp,
    ExpPoly,
    PowerExp,
    LogPowerExp,
    /// `f ≡ 1`, so that `h(x, t) = a(|x|)` is a prescribed load.
    Forcing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NonlinearityConfig {
    pub kind: KindName,
    pub gamma: f64,
    pub q: f64,
    pub p: f64,
    pub alpha: f64,
    pub theta: f64,
    /// Coefficients of `a(r) = Σ c_k r^k`.
    pub potential: Vec<f64>,
    /// Multiplier applied to `f`.
    pub scale: f64,
}

impl Default for NonlinearityConfig {
    fn default() -> Self {
        Self {
            kind: KindName::PureExp,
            gamma: 1.0,
            q: 1.0,
            p: 2.0,
            alpha: 0.5,
            theta: 1.0,
            potential: vec![1.0],
            scale: 1.0,
        }
    }
}

impl NonlinearityConfig {
    fn potential(&self) -> Result<Potential> {
        match self.potential.as_slice() {
            [] => Err(Error::Config("nonlinearity.potential needs at least one coefficient".into())),
            [c] => Ok(Potential::Constant(*c)),
            cs => Ok(Potential::RadialPolynomial(cs.to_vec())),
        }
    }

    /// The catalog member, or an error for a pure load.
    pub fn spec(&self) -> Result<NonlinearitySpec> {
        let kind = match self.kind {
            KindName::PureExp => Kind::PureExp { gamma: self.gamma },
            KindName::ExpPoly => Kind::ExpPoly {
                gamma: self.gamma,
                q: self.q,
            },
            KindName::PowerExp => Kind::PowerExp {
                p: self.p,
                alpha: self.alpha,
            },
            KindName::LogPowerExp => Kind::LogPowerExp {
                theta: self.theta,
                p: self.p,
                alpha: self.alpha,
            },
            KindName::Forcing => {
                return Err(Error::Config("a prescribed load is not a catalog nonlinearity".into()));
            }
        };
        let spec = NonlinearitySpec::new(kind, self.potential()?)?;
        if self.scale == 1.0 {
            Ok(spec)
        } else {
            spec.with_scale(self.scale)
        }
    }

    pub fn source(&self) -> Result<Box<dyn RadialSource>> {
        if self.kind == KindName::Forcing {
            let coeffs: Vec<f64> = self.potential.iter().map(|c| c * self.scale).collect();
            Ok(Box::new(Forcing::new(coeffs)?))
        } else {
            Ok(Box::new(self.spec()?))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridName {
    Uniform,
    Graded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BcName {
    Dirichlet,
    Navier,
}

impl From<BcName> for BoundaryCondition {
    fn from(b: BcName) -> Self {
        match b {
            BcName::Dirichlet => BoundaryCondition::Dirichlet,
            BcName::Navier => BoundaryCondition::Navier,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSection {
    pub nodes: usize,
    pub grid: GridName,
    pub stretch0: f64,
    pub stretch1: f64,
    pub bc: BcName,
    pub lambda: f64,
    pub newton_tol: f64,
    pub max_iters: usize,
    /// Step halvings per Newton iteration; 0 disables the line search.
    pub max_halvings: u32,
}

impl Default for SolverSection {
    fn default() -> Self {
        let GridKind::Graded { stretch0, stretch1 } = GridKind::DEFAULT else {
            unreachable!()
        };
        Self {
            nodes: 513,
            grid: GridName::Graded,
            stretch0,
            stretch1,
            bc: BcName::Dirichlet,
            lambda: 1.0,
            newton_tol: 1e-10,
            max_iters: 50,
            max_halvings: 20,
        }
    }
}

fn make_grid(nodes: usize, grid: GridName, stretch0: f64, stretch1: f64) -> Result<RadialGrid> {
    let kind = match grid {
        GridName::Uniform => GridKind::Uniform,
        GridName::Graded => GridKind::Graded { stretch0, stretch1 },
    };
    RadialGrid::new(nodes, kind)
}

impl SolverSection {
    pub fn grid(&self) -> Result<RadialGrid> {
        make_grid(self.nodes, self.grid, self.stretch0, self.stretch1)
    }

    pub fn solver_config(&self) -> Result<SolverConfig> {
        let cfg = SolverConfig {
            newton_tol: self.newton_tol,
            max_iters: self.max_iters,
            damping: if self.max_halvings == 0 {
                Damping::None
            } else {
                Damping::LineSearchHalving {
                    max_halvings: self.max_halvings,
                }
            },
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn bc(&self) -> BoundaryCondition {
        self.bc.into()
    }
}

/// Continuation in `M`, on its own grid (concentrating solutions need nodes near the origin).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BranchSection {
    pub m_start: f64,
    pub m_end: f64,
    pub dm: f64,
    pub nodes: usize,
    pub grid: GridName,
    pub stretch0: f64,
    pub stretch1: f64,
}

impl Default for BranchSection {
    fn default() -> Self {
        Self {
            m_start: 0.25,
            m_end: 25.0,
            dm: 0.25,
            nodes: 2049,
            grid: GridName::Graded,
            stretch0: 10.0,
            stretch1: 1.0,
        }
    }
}

impl BranchSection {
    pub fn grid(&self) -> Result<RadialGrid> {
        make_grid(self.nodes, self.grid, self.stretch0, self.stretch1)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.m_start > 0.0 && self.m_start <= self.m_end && self.dm > 0.0) {
            return Err(Error::Config(format!(
                "branch needs 0 < m_start <= m_end and dm > 0 (got {} .. {} step {})",
                self.m_start, self.m_end, self.dm
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BlowupSection {
    /// Branch points to rescale (nearest traced `M`).
    pub m_values: Vec<f64>,
    pub r_max: f64,
    /// Rescaled radii for the local energy table.
    pub radii: Vec<f64>,
    pub lp_order: u32,
    pub lp_p: f64,
    /// Smallest physical radius of the geometric `L^p` radii.
    pub lp_r_min: f64,
    pub lp_radii: usize,
}

impl Default for BlowupSection {
    fn default() -> Self {
        Self {
            m_values: vec![15.0, 20.0, 25.0],
            r_max: 5.0,
            radii: vec![0.5, 1.0, 2.0, 3.0, 4.0, 5.0],
            lp_order: 2,
            lp_p: 1.0,
            lp_r_min: 1e-3,
            lp_radii: 16,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PohozaevSection {
    /// First coordinate of `y` for the whole-ball identity.
    pub y: f64,
    /// `[centre, radius]` of sub-balls `B_radius(centre e1)`.
    pub sub_balls: Vec<[f64; 2]>,
}

impl Default for PohozaevSection {
    fn default() -> Self {
        Self {
            y: 0.0,
            sub_balls: vec![[0.3, 0.4], [1.0, 0.5]],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GreenSection {
    pub samples: usize,
    pub seed: u64,
    pub fd_step: f64,
}

impl Default for GreenSection {
    fn default() -> Self {
        Self {
            samples: 10_000,
            seed: crate::green::DEFAULT_SEED,
            fd_step: 1e-5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CounterexampleSection {
    pub alpha: f64,
    pub ell_rho: f64,
    pub ell_max: f64,
    pub samples: usize,
}

impl Default for CounterexampleSection {
    fn default() -> Self {
        Self {
            alpha: 1.5,
            ell_rho: 1e3,
            ell_max: 1e6,
            samples: 400,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub dir: PathBuf,
    pub formats: Vec<Format>,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("out"),
            formats: vec![Format::Csv, Format::Json],
        }
    }
}

impl OutputSection {
    pub fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }
}

/// 1-based line of a byte offset.
fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].bytes().filter(|&b| b == b'\n').count() + 1
}

impl RunConfig {
    /// Parses TOML text, rejecting unknown keys with a line-numbered message.
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| {
            let line = e.span().map(|s| line_of(text, s.start));
            let msg = e.message().trim().to_string();
            match line {
                Some(l) => Error::Config(format!("line {l}: {msg}")),
                None => Error::Config(msg),
            }
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    /// Cross-field checks that do not need any computation.
    pub fn validate(&self) -> Result<()> {
        self.nonlinearity.source().map_err(|e| Error::Config(format!("[nonlinearity] {e}")))?;
        self.solver.grid().map_err(|e| Error::Config(format!("[solver] {e}")))?;
        self.solver
            .solver_config()
            .map_err(|e| Error::Config(format!("[solver] {e}")))?;
        self.branch.validate()?;
        self.branch.grid().map_err(|e| Error::Config(format!("[branch] {e}")))?;
        if self.output.formats.is_empty() {
            return Err(Error::Config("[output] formats must not be empty".into()));
        }
        if !(self.blowup.r_max > 0.0) || self.blowup.lp_radii < 2 || !(self.blowup.lp_r_min > 0.0 && self.blowup.lp_r_min < 1.0) {
            return Err(Error::Config("[blowup] needs r_max > 0, lp_radii >= 2 and lp_r_min in (0, 1)".into()));
        }
        if self.green.samples < crate::green::MIN_TWO_SIDED_SAMPLES {
            return Err(Error::Config(format!(
                "[green] samples must be at least {}",
                crate::green::MIN_TWO_SIDED_SAMPLES
            )));
        }
        if self.counterexample.samples < 2 {
            return Err(Error::Config("[counterexample] samples must be at least 2".into()));
        }
        Ok(())
    }

    /// Canonical TOML text of the resolved configuration.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration is always serializable")
    }
}
