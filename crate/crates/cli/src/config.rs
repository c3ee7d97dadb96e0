//! Experiment configuration: built-in defaults per experiment, overridden by
//! a TOML file and then by command-line flags.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use topress::covers::{half_arc_partition, JoinBudget};
use topress::dynsys::{make_circle_doubling, make_disk_system, FiniteSystem, Potential};
use topress::solver::SolverLimits;
use topress::topological::PressureOptions;

use crate::error::{config_error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    LatticeCheck,
    Doubling,
    Leakage,
    FiniteVp,
    Fullshift,
}

impl Experiment {
    pub fn id(self) -> &'static str {
        match self {
            Experiment::LatticeCheck => "lattice-check",
            Experiment::Doubling => "doubling",
            Experiment::Leakage => "leakage",
            Experiment::FiniteVp => "finite-vp",
            Experiment::Fullshift => "fullshift",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SystemSpec {
    Doubling {
        m: usize,
    },
    Disk {
        rings: usize,
        sectors: usize,
    },
    /// Commuting generator arrays on states `0..M`, optionally with marked states.
    Custom {
        maps: Vec<Vec<u32>>,
        #[serde(default)]
        marked: Vec<usize>,
    },
}

impl SystemSpec {
    pub fn build(&self) -> Result<FiniteSystem> {
        Ok(match self {
            SystemSpec::Doubling { m } => make_circle_doubling(*m)?,
            SystemSpec::Disk { rings, sectors } => make_disk_system(*rings, *sectors)?,
            SystemSpec::Custom { maps, marked } => {
                let m = maps.first().map(Vec::len).ok_or_else(|| config_error("custom system needs a map"))?;
                FiniteSystem::new(m, maps.clone(), marked)?
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PotentialSpec {
    Constant { value: f64 },
    /// `a` on the upper half arc of a circle system, 0 elsewhere.
    ArcIndicator { a: f64 },
    PerState { values: Vec<f64> },
}

impl PotentialSpec {
    pub fn build(&self, system: &SystemSpec, state_count: usize) -> Result<Potential> {
        Ok(match self {
            PotentialSpec::Constant { value } => Potential::new(vec![*value; state_count])?,
            PotentialSpec::ArcIndicator { a } => {
                let SystemSpec::Doubling { m } = system else {
                    return Err(config_error("arc-indicator needs a doubling system"));
                };
                let arcs = half_arc_partition(*m);
                let mut v = vec![0.0; *m];
                for &x in &arcs.members()[1] {
                    v[x as usize] = *a;
                }
                Potential::new(v)?
            }
            PotentialSpec::PerState { values } => {
                if values.len() != state_count {
                    return Err(config_error(format!(
                        "per-state potential has {} values for {state_count} states",
                        values.len()
                    )));
                }
                Potential::new(values.clone())?
            }
        })
    }

    /// The arc height, or 0 for a constant 0 potential.
    pub fn arc_height(&self) -> Option<f64> {
        match self {
            PotentialSpec::ArcIndicator { a } => Some(*a),
            PotentialSpec::Constant { value } if *value == 0.0 => Some(0.0),
            _ => None,
        }
    }
}

/// The third leakage track's cover.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AdmissibleCover {
    /// Outer annulus, holding the marked ring, and the inner disk as a second member.
    Annulus,
    Trivial,
}

/// Every setting an experiment reads, fully resolved.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub system: SystemSpec,
    pub potential: PotentialSpec,
    pub n_max: u64,
    pub exact_limit: usize,
    pub member_budget: usize,
    pub seed: u64,
    /// Allowed distance between the final rate and its reference value.
    pub tolerance: f64,
    /// Band width of the potential cover joined onto the arc partition.
    pub eps: f64,
    pub slices: usize,
    pub admissible_cover: AdmissibleCover,
    /// Bowen-distance threshold of the euclidean separated counts.
    pub separation: f64,
    pub instances: usize,
    pub max_states: usize,
    pub cases: usize,
    pub q_max: u64,
    pub symbols: usize,
    pub dim: usize,
    pub phi: Vec<f64>,
    pub random_specs: usize,
    pub bernoulli_samples: usize,
    pub enumeration_budget: u64,
    /// Measure for the custom finite-vp run, as `state,weight` lines.
    pub measure: Option<PathBuf>,
    pub csv_name: String,
    pub svg_name: String,
}

impl ExperimentConfig {
    pub fn defaults(experiment: Experiment) -> Self {
        let (system, potential, n_max, member_budget) = match experiment {
            Experiment::Doubling => (
                SystemSpec::Doubling { m: 100_003 },
                PotentialSpec::ArcIndicator { a: 0.0 },
                14,
                1 << 16,
            ),
            Experiment::Leakage => (
                SystemSpec::Disk { rings: 64, sectors: 256 },
                PotentialSpec::Constant { value: 0.0 },
                12,
                1 << 14,
            ),
            _ => (
                SystemSpec::Doubling { m: 101 },
                PotentialSpec::Constant { value: 0.0 },
                4,
                4096,
            ),
        };
        ExperimentConfig {
            experiment,
            system,
            potential,
            n_max,
            exact_limit: SolverLimits::default().exact_limit,
            member_budget,
            seed: 1,
            tolerance: 0.05,
            eps: 0.5,
            slices: 2,
            admissible_cover: AdmissibleCover::Annulus,
            separation: 0.1,
            instances: 50,
            max_states: 12,
            cases: 1000,
            q_max: 6,
            symbols: 2,
            dim: 1,
            phi: vec![0.0, 0.0],
            random_specs: 0,
            bernoulli_samples: 200,
            enumeration_budget: 19_683,
            measure: None,
            csv_name: format!("{}.csv", experiment.id()),
            svg_name: format!("{}.svg", experiment.id()),
        }
    }

    /// Defaults for `experiment` with the file's settings applied.
    pub fn from_file(experiment: Experiment, path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg = Self::defaults(experiment);
        cfg.apply(&text)?;
        if let Some(m) = cfg.measure.as_mut() {
            if m.is_relative() {
                *m = path.parent().unwrap_or(Path::new(".")).join(&*m);
            }
        }
        Ok(cfg)
    }

    pub fn apply(&mut self, text: &str) -> Result<()> {
        let file: ConfigFile = toml::from_str(text)?;
        if let Some(e) = file.experiment {
            if e != self.experiment {
                return Err(config_error(format!("config is for {e}, not {}", self.experiment)));
            }
        }
        macro_rules! take {
            ($($field:ident),*) => {
                $(if let Some(v) = file.$field { self.$field = v; })*
            };
        }
        take!(
            system, potential, n_max, exact_limit, member_budget, seed, tolerance, eps, slices,
            admissible_cover, separation, instances, max_states, cases, q_max, symbols, dim, phi,
            random_specs, bernoulli_samples, enumeration_budget
        );
        if let Some(m) = file.measure {
            self.measure = Some(m);
        }
        if let Some(out) = file.output {
            if let Some(c) = out.csv {
                self.csv_name = c;
            }
            if let Some(s) = out.svg {
                self.svg_name = s;
            }
        }
        self.validate()
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("n_max", self.n_max as usize),
            ("exact_limit", self.exact_limit),
            ("member_budget", self.member_budget),
            ("slices", self.slices),
            ("instances", self.instances),
            ("max_states", self.max_states),
            ("cases", self.cases),
            ("q_max", self.q_max as usize),
            ("symbols", self.symbols),
            ("dim", self.dim),
            ("enumeration_budget", self.enumeration_budget as usize),
        ];
        if let Some((name, _)) = positive.iter().find(|(_, v)| *v == 0) {
            return Err(config_error(format!("{name} must be positive")));
        }
        for (name, v) in [("tolerance", self.tolerance), ("eps", self.eps), ("separation", self.separation)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(config_error(format!("{name} must be a positive number")));
            }
        }
        if self.phi.len() != self.symbols {
            return Err(config_error(format!(
                "phi has {} values for {} symbols",
                self.phi.len(),
                self.symbols
            )));
        }
        Ok(())
    }

    pub fn limits(&self) -> SolverLimits {
        SolverLimits::with_exact_limit(self.exact_limit)
    }

    pub fn budget(&self) -> JoinBudget {
        JoinBudget {
            max_members: self.member_budget,
            ..JoinBudget::default()
        }
    }

    pub fn pressure_options(&self) -> PressureOptions {
        PressureOptions {
            limits: self.limits(),
            budget: self.budget(),
            ..PressureOptions::default()
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutputFile {
    csv: Option<String>,
    svg: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct ConfigFile {
    experiment: Option<Experiment>,
    system: Option<SystemSpec>,
    potential: Option<PotentialSpec>,
    n_max: Option<u64>,
    exact_limit: Option<usize>,
    member_budget: Option<usize>,
    seed: Option<u64>,
    tolerance: Option<f64>,
    eps: Option<f64>,
    slices: Option<usize>,
    admissible_cover: Option<AdmissibleCover>,
    separation: Option<f64>,
    instances: Option<usize>,
    max_states: Option<usize>,
    cases: Option<usize>,
    q_max: Option<u64>,
    symbols: Option<usize>,
    dim: Option<usize>,
    phi: Option<Vec<f64>>,
    random_specs: Option<usize>,
    bernoulli_samples: Option<usize>,
    enumeration_budget: Option<u64>,
    measure: Option<PathBuf>,
    output: Option<OutputFile>,
}
