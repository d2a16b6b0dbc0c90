//! Declarative run configuration.
//!
//! A run is described by one TOML file: the command, the input family
//! (generator or points file), the size and time schedules, output paths,
//! and tolerance/threshold overrides. Unknown keys are rejected so that a
//! typo cannot silently change a run.

use std::path::{Path, PathBuf};

use equidist::GeneratorSpec;
use serde::Deserialize;

use crate::CliError;

/// Golden ratio conjugate, the default Kronecker rotation number.
pub const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Commands the driver can run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Energy,
    Profile,
    Discrepancy,
    Paircorr,
    Bound,
    Report,
}

impl std::fmt::Display for Command {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Command::Energy => "energy",
            Command::Profile => "profile",
            Command::Discrepancy => "discrepancy",
            Command::Paircorr => "paircorr",
            Command::Bound => "bound",
            Command::Report => "report",
        })
    }
}

/// Where the points come from: a named generator or a points file.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputSpec {
    /// Generator kind: `kronecker` | `van_der_corput` | `uniform_random` |
    /// `duplicated` | `clustered` | `lattice` | `sphere_fibonacci` |
    /// `sphere_random`.
    pub kind: Option<String>,
    /// Path to a points file instead of a generator.
    pub file: Option<PathBuf>,
    /// Rotation number for `kronecker` (default: golden ratio conjugate).
    pub alpha: Option<f64>,
    /// Base for `van_der_corput` (default 2).
    pub base: Option<u32>,
    /// Seed for the random kinds; required for them, meaningless otherwise.
    pub seed: Option<u64>,
    /// Cluster interval endpoints for `clustered`.
    pub a: Option<f64>,
    pub b: Option<f64>,
}

impl InputSpec {
    /// Resolves the generator description, with `seed_override` (the
    /// `--seed` flag) taking precedence over the configured seed for the
    /// seeded kinds.
    pub fn generator(&self, seed_override: Option<u64>) -> Result<GeneratorSpec, CliError> {
        let kind = self
            .kind
            .as_deref()
            .ok_or_else(|| CliError::Config("input.kind is required for generator inputs".into()))?;
        let seed = seed_override.or(self.seed);
        let need_seed = || {
            seed.ok_or_else(|| {
                CliError::Config(format!("generator '{kind}' needs input.seed (or --seed)"))
            })
        };
        let reject = |field: &str, present: bool| {
            if present {
                Err(CliError::Config(format!(
                    "input.{field} does not apply to generator '{kind}'"
                )))
            } else {
                Ok(())
            }
        };
        let spec = match kind {
            "kronecker" => {
                reject("base", self.base.is_some())?;
                reject("seed", self.seed.is_some())?;
                reject("a", self.a.is_some())?;
                reject("b", self.b.is_some())?;
                GeneratorSpec::Kronecker { alpha: self.alpha.unwrap_or(GOLDEN) }
            }
            "van_der_corput" => {
                reject("alpha", self.alpha.is_some())?;
                reject("seed", self.seed.is_some())?;
                reject("a", self.a.is_some())?;
                reject("b", self.b.is_some())?;
                GeneratorSpec::VanDerCorput { base: self.base.unwrap_or(2) }
            }
            "uniform_random" => {
                reject("alpha", self.alpha.is_some())?;
                reject("base", self.base.is_some())?;
                reject("a", self.a.is_some())?;
                reject("b", self.b.is_some())?;
                GeneratorSpec::UniformRandom { seed: need_seed()? }
            }
            "duplicated" => {
                reject("alpha", self.alpha.is_some())?;
                reject("base", self.base.is_some())?;
                reject("a", self.a.is_some())?;
                reject("b", self.b.is_some())?;
                GeneratorSpec::Duplicated { seed: need_seed()? }
            }
            "clustered" => {
                reject("alpha", self.alpha.is_some())?;
                reject("base", self.base.is_some())?;
                let (a, b) = match (self.a, self.b) {
                    (Some(a), Some(b)) => (a, b),
                    _ => {
                        return Err(CliError::Config(
                            "clustered input needs interval endpoints a and b".into(),
                        ))
                    }
                };
                GeneratorSpec::Clustered { seed: need_seed()?, a, b }
            }
            "lattice" => {
                reject("alpha", self.alpha.is_some())?;
                reject("base", self.base.is_some())?;
                reject("seed", self.seed.is_some())?;
                reject("a", self.a.is_some())?;
                reject("b", self.b.is_some())?;
                GeneratorSpec::Lattice
            }
            "sphere_fibonacci" => {
                reject("alpha", self.alpha.is_some())?;
                reject("base", self.base.is_some())?;
                reject("seed", self.seed.is_some())?;
                reject("a", self.a.is_some())?;
                reject("b", self.b.is_some())?;
                GeneratorSpec::SphereFibonacci
            }
            "sphere_random" => {
                reject("alpha", self.alpha.is_some())?;
                reject("base", self.base.is_some())?;
                reject("a", self.a.is_some())?;
                reject("b", self.b.is_some())?;
                GeneratorSpec::SphereRandom { seed: need_seed()? }
            }
            other => {
                return Err(CliError::Config(format!("unknown generator kind '{other}'")))
            }
        };
        Ok(spec)
    }
}

/// Time schedule: an explicit list, or a size-dependent rule.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TSchedule {
    /// Explicit times, used as-is for every family size.
    pub explicit: Option<Vec<f64>>,
    /// Rule tag: `constant` | `log-over-n2` | `sqrt-log-over-n2` | `pow`.
    /// The rules evaluate to `value`, `ln(N)/N^2`, `sqrt(ln N)/N^2`, and
    /// `N^(-2*value)` respectively.
    pub rule: Option<String>,
    /// Rule parameter: the time for `constant`, the exponent for `pow`.
    pub value: Option<f64>,
}

impl TSchedule {
    pub fn validate(&self) -> Result<(), CliError> {
        let err = |m: String| Err(CliError::Config(m));
        match (&self.explicit, &self.rule) {
            (Some(_), Some(_)) => err("t_schedule takes either explicit or rule, not both".into()),
            (None, None) => err("t_schedule needs explicit times or a rule".into()),
            (Some(list), None) => {
                if self.value.is_some() {
                    return err("t_schedule.value applies only to rules".into());
                }
                if list.is_empty() {
                    return err("t_schedule.explicit must be nonempty".into());
                }
                for &t in list {
                    if !t.is_finite() || t <= 0.0 {
                        return err(format!("t values must be positive and finite, got {t}"));
                    }
                }
                Ok(())
            }
            (None, Some(rule)) => match rule.as_str() {
                "constant" => match self.value {
                    Some(v) if v.is_finite() && v > 0.0 => Ok(()),
                    _ => err("rule 'constant' needs a positive finite value".into()),
                },
                "pow" => match self.value {
                    Some(v) if v.is_finite() && v > 0.0 => Ok(()),
                    _ => err("rule 'pow' needs a positive finite exponent value".into()),
                },
                "log-over-n2" | "sqrt-log-over-n2" => {
                    if self.value.is_some() {
                        err(format!("rule '{rule}' takes no value"))
                    } else {
                        Ok(())
                    }
                }
                other => err(format!("unknown t_schedule rule '{other}'")),
            },
        }
    }

    /// The times this schedule produces at family size `n`.
    pub fn times_for(&self, n: usize) -> Vec<f64> {
        if let Some(list) = &self.explicit {
            return list.clone();
        }
        let nf = n as f64;
        match self.rule.as_deref().expect("validated schedule") {
            "constant" => vec![self.value.expect("validated value")],
            "log-over-n2" => vec![nf.ln() / (nf * nf)],
            "sqrt-log-over-n2" => vec![nf.ln().sqrt() / (nf * nf)],
            "pow" => vec![nf.powf(-2.0 * self.value.expect("validated value"))],
            other => unreachable!("rule '{other}' passed validation"),
        }
    }
}

/// Output file locations, resolved relative to `--out`.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    /// CSV file of per-evaluation rows.
    pub csv: Option<PathBuf>,
    /// JSON summary (for `report`: the report document itself).
    pub json: Option<PathBuf>,
}

/// Numerical tolerance overrides.
#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Absolute error budget for each energy evaluation.
    pub energy: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { energy: equidist::ENERGY_DEFAULT_TOL }
    }
}

/// Pair-correlation settings, also the report's verdict thresholds.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PairCorrSettings {
    /// Scale grid, strictly ascending and positive.
    pub s_grid: Vec<f64>,
    /// Scale exponent in (0, 1]; 1 is the Poissonian regime.
    pub alpha: f64,
    /// Whether to count the diagonal pairs.
    pub include_diagonal: bool,
    /// Verdict band: pass when `|pc(s) - 2s| <= poissonian_tol` on the grid.
    pub poissonian_tol: f64,
    /// Exponent for the report's weak-regime diagnostic.
    pub weak_alpha: f64,
}

impl Default for PairCorrSettings {
    fn default() -> Self {
        PairCorrSettings {
            s_grid: (1..=8).map(|s| s as f64).collect(),
            alpha: 1.0,
            include_diagonal: false,
            poissonian_tol: 0.2,
            weak_alpha: 0.5,
        }
    }
}

/// Discrepancy-bound settings.
#[derive(Clone, Copy, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoundSettings {
    /// Constant for the discrepancy-energy inequality; calibrated over the
    /// run's own families when absent.
    pub c: Option<f64>,
}

/// Report verdict thresholds.
#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ReportSettings {
    /// Largest acceptable unit-time energy excess at the final size.
    pub e1_max: f64,
    /// Acceptance band around sqrt(pi) for the Gaussian-energy diagnostic.
    pub gaussian_band: f64,
}

impl Default for ReportSettings {
    fn default() -> Self {
        ReportSettings { e1_max: 1e-3, gaussian_band: 0.15 }
    }
}

fn default_method() -> String {
    "fast".into()
}

/// One declarative run.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    pub input: InputSpec,
    /// Family sizes; required for generator inputs, absent for file inputs.
    #[serde(default)]
    pub n_schedule: Vec<usize>,
    pub t_schedule: Option<TSchedule>,
    /// Energy route: `direct` | `fast` | `spectral` | `gaussian`.
    #[serde(default = "default_method")]
    pub method: String,
    #[serde(default)]
    pub output: OutputSpec,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub paircorr: PairCorrSettings,
    #[serde(default)]
    pub bound: BoundSettings,
    #[serde(default)]
    pub report: ReportSettings,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Config(format!("cannot read config {}: {e}", path.display()))
        })?;
        let cfg: RunConfig =
            toml::from_str(&text).map_err(|e| CliError::Config(format!("config parse error: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let err = |m: String| Err(CliError::Config(m));

        match (&self.input.kind, &self.input.file) {
            (Some(_), Some(_)) => {
                return err("input has both kind and file; pick one".into());
            }
            (None, None) => return err("input needs a generator kind or a file".into()),
            (Some(_), None) => {
                if self.n_schedule.is_empty() {
                    return err("n_schedule must be nonempty for generator inputs".into());
                }
                if self.n_schedule[0] == 0 {
                    return err("n_schedule sizes must be positive".into());
                }
                for w in self.n_schedule.windows(2) {
                    if w[0] >= w[1] {
                        return err("n_schedule must be strictly ascending".into());
                    }
                }
            }
            (None, Some(_)) => {
                if !self.n_schedule.is_empty() {
                    return err("n_schedule applies only to generator inputs".into());
                }
            }
        }

        match self.command {
            Command::Energy | Command::Profile => match &self.t_schedule {
                Some(ts) => ts.validate()?,
                None => return err(format!("command '{}' needs a t_schedule", self.command)),
            },
            Command::Report => {
                if let Some(ts) = &self.t_schedule {
                    ts.validate()?;
                    if ts.explicit.is_some() {
                        return err(
                            "report takes a t_schedule rule (one time per size), not an explicit list"
                                .into(),
                        );
                    }
                }
            }
            Command::Discrepancy | Command::Paircorr | Command::Bound => {
                if self.t_schedule.is_some() {
                    return err(format!(
                        "t_schedule does not apply to command '{}'",
                        self.command
                    ));
                }
            }
        }

        match self.method.as_str() {
            "direct" | "fast" | "spectral" | "gaussian" => {}
            other => return err(format!("unknown energy method '{other}'")),
        }

        let t = &self.tolerances;
        if !(t.energy > 0.0 && t.energy < 1.0) {
            return err(format!("tolerances.energy must lie in (0, 1), got {}", t.energy));
        }

        let pc = &self.paircorr;
        if pc.s_grid.is_empty() {
            return err("paircorr.s_grid must be nonempty".into());
        }
        for &s in &pc.s_grid {
            if !s.is_finite() || s <= 0.0 {
                return err(format!("paircorr.s_grid values must be positive, got {s}"));
            }
        }
        for w in pc.s_grid.windows(2) {
            if w[0] >= w[1] {
                return err("paircorr.s_grid must be strictly ascending".into());
            }
        }
        for (name, a) in [("alpha", pc.alpha), ("weak_alpha", pc.weak_alpha)] {
            if !a.is_finite() || !(0.0 < a && a <= 1.0) {
                return err(format!("paircorr.{name} must lie in (0, 1], got {a}"));
            }
        }
        if !(pc.poissonian_tol > 0.0) || !pc.poissonian_tol.is_finite() {
            return err(format!(
                "paircorr.poissonian_tol must be positive, got {}",
                pc.poissonian_tol
            ));
        }

        if let Some(c) = self.bound.c {
            if !c.is_finite() || c <= 0.0 {
                return err(format!("bound.c must be positive and finite, got {c}"));
            }
        }

        let r = &self.report;
        if !(r.e1_max > 0.0) || !(r.gaussian_band > 0.0) {
            return err("report thresholds must be positive".into());
        }

        if self.command == Command::Report {
            if self.output.json.is_none() {
                return err("report needs output.json".into());
            }
            if self.output.csv.is_some() {
                return err("report writes only output.json, not csv".into());
            }
        }

        Ok(())
    }
}
