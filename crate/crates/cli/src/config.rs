//! TOML scenario configuration.
//!
//! Every table rejects unknown keys. Frequencies are given in the declared
//! `unit`; with `unit = "2pi MHz"` the stored numbers are ν and are multiplied
//! by 2π on load, times are then in μs.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use superatom::analysis::Window;
use superatom::dynamics::{MasterOptions, Method, Tolerances};
use superatom::models::{CoolingParams, Cutoffs, LongDistanceParams, PhysicalParams};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Unit {
    /// Values are ν in MHz; angular frequency ω = 2πν in rad/μs.
    #[serde(rename = "2pi MHz")]
    TwoPiMHz,
    /// Angular frequencies in rad/μs.
    #[serde(rename = "rad/us")]
    RadPerUs,
    /// Dimensionless (units of a reference rate chosen by the user).
    #[serde(rename = "1")]
    Dimensionless,
}

impl Unit {
    /// Multiplier from config numbers to internal angular frequency.
    pub fn factor(self) -> f64 {
        match self {
            Unit::TwoPiMHz => 2.0 * PI,
            Unit::RadPerUs | Unit::Dimensionless => 1.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Unit::TwoPiMHz => "2π·MHz",
            Unit::RadPerUs => "rad/μs",
            Unit::Dimensionless => "",
        }
    }

    /// Internal angular frequency → a printable value in this unit.
    pub fn show(self, omega: f64) -> String {
        match self {
            Unit::TwoPiMHz => format!("2π·{:.6} MHz", omega / self.factor()),
            Unit::RadPerUs => format!("{omega:.6} rad/μs"),
            Unit::Dimensionless => format!("{omega:.6}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Initial {
    /// One phonon, atoms and cavity in the ground state.
    #[default]
    Membrane,
    /// Symmetric single Rydberg excitation `|E⁰R⟩`, bosonic modes empty.
    Rydberg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Microscopic,
    Symmetric,
    Effective,
    EffectiveExact,
    LongDistancePositional,
    LongDistanceResonant,
    Cooling,
    Semiclassical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunMethod {
    #[default]
    AdaptiveRk,
    ExpmKrylov,
    Trajectories,
    SteadyState,
}

fn one() -> f64 {
    1.0
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Scenario {
    /// Microscopic blockaded trajectories with symmetric / non-symmetric populations.
    /// Starts from `phonons` membrane quanta with the atoms in `|G⟩`, or in
    /// `|E⁰R⟩` with `rydberg = true`; at least two excitations are needed to
    /// reach `|E¹R⟩`, the state whose local decay leaves the symmetric subspace.
    Fig2Trajectory {
        #[serde(default = "Scenario::default_fig2_phonons")]
        phonons: usize,
        #[serde(default)]
        rydberg: bool,
    },
    /// Driven resonant-limit long-distance model from thermal states.
    Fig4StatePrep {
        #[serde(default = "Scenario::default_n_m_values")]
        n_m_values: Vec<f64>,
        /// Drive η in units of `Ḡ_eff`: one value, or one per `N_m`.
        #[serde(default = "Scenario::default_drive_ratio")]
        drive_ratio: DriveRatio,
        /// Phonon Fock states kept; 0 picks one from the largest `N_m`.
        #[serde(default)]
        phonon_cutoff: usize,
        /// Number of `p_n` columns written.
        #[serde(default = "Scenario::default_fock_columns")]
        fock_columns: usize,
    },
    /// Intermediate-state Rabi-oscillation linewidth of the semiclassical ensemble.
    Fig5Linewidth {
        #[serde(default = "Scenario::default_fig5_atoms")]
        n_atoms: usize,
        #[serde(default = "one")]
        omega: f64,
        #[serde(default = "Scenario::default_omega_int")]
        omega_int: f64,
        /// `Γ_e / Ω_int`.
        #[serde(default = "Scenario::default_gamma_ratio")]
        gamma_e_ratio: f64,
        /// Detunings in units of `Ω`.
        #[serde(default = "Scenario::default_detunings")]
        detunings: Vec<f64>,
        #[serde(default)]
        window: Window,
        #[serde(default = "yes")]
        detrend: bool,
        /// Spectral peaks below this (units of `Ω`) are ignored.
        #[serde(default)]
        min_frequency: f64,
    },
    StrongCouplingTable {
        #[serde(default = "Scenario::default_margin")]
        margin: f64,
    },
    /// Symmetric-basis model against the eliminated Jaynes–Cummings model.
    EffectiveVsFull {
        #[serde(default)]
        use_exact_rates: bool,
        #[serde(default)]
        initial: Initial,
    },
    CoolingSweep {
        gamma_cool: Vec<f64>,
        gamma_cl: f64,
        #[serde(default = "Scenario::default_cooling_cutoff")]
        phonon_cutoff: usize,
    },
    Custom {
        model: ModelKind,
        #[serde(default)]
        method: RunMethod,
        /// Basis index of the initial pure state.
        #[serde(default)]
        initial: usize,
        /// Basis indices whose populations are written; empty means all (up to 64).
        #[serde(default)]
        observe: Vec<usize>,
        /// Excitation manifold of effective and cooling models.
        #[serde(default = "Scenario::default_excitations")]
        excitations: usize,
        /// Semiclassical model only.
        #[serde(default)]
        delta: f64,
        #[serde(default)]
        omega_int: f64,
    },
}

/// State-preparation drive strength; hotter membranes need stronger pumping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DriveRatio {
    One(f64),
    PerRun(Vec<f64>),
}

impl DriveRatio {
    pub fn get(&self, run: usize) -> f64 {
        match self {
            DriveRatio::One(r) => *r,
            DriveRatio::PerRun(rs) => rs[run],
        }
    }
}

impl Scenario {
    fn default_fig2_phonons() -> usize {
        2
    }
    fn default_n_m_values() -> Vec<f64> {
        vec![1.0, 7.0]
    }
    fn default_drive_ratio() -> DriveRatio {
        DriveRatio::One(0.3)
    }
    fn default_fock_columns() -> usize {
        8
    }
    fn default_fig5_atoms() -> usize {
        4
    }
    fn default_omega_int() -> f64 {
        0.7
    }
    fn default_gamma_ratio() -> f64 {
        0.5
    }
    fn default_detunings() -> Vec<f64> {
        vec![0.0, 10.0]
    }
    fn default_margin() -> f64 {
        superatom::models::DEFAULT_MARGIN
    }
    fn default_cooling_cutoff() -> usize {
        8
    }
    fn default_excitations() -> usize {
        1
    }

    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Fig2Trajectory { .. } => "fig2_trajectory",
            Scenario::Fig4StatePrep { .. } => "fig4_state_prep",
            Scenario::Fig5Linewidth { .. } => "fig5_linewidth",
            Scenario::StrongCouplingTable { .. } => "strong_coupling_table",
            Scenario::EffectiveVsFull { .. } => "effective_vs_full",
            Scenario::CoolingSweep { .. } => "cooling_sweep",
            Scenario::Custom { .. } => "custom",
        }
    }
}

/// Master-equation integrator settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Solver {
    pub method: Method,
    pub atol: f64,
    pub rtol: f64,
}

impl Default for Solver {
    fn default() -> Self {
        let d = MasterOptions::default();
        Solver { method: d.method, atol: d.tol.atol, rtol: d.tol.rtol }
    }
}

impl Solver {
    pub fn options(&self) -> MasterOptions {
        MasterOptions { method: self.method, tol: Tolerances { atol: self.atol, rtol: self.rtol }, ..Default::default() }
    }

    fn validate(&self) -> CliResult<()> {
        if !(self.atol > 0.0) || !(self.rtol > 0.0) || !self.atol.is_finite() || !self.rtol.is_finite() {
            return Err(CliError::validation("solver: atol and rtol must be positive"));
        }
        Ok(())
    }
}

/// Output grid `t_k = k·t_end/n_steps`, `k = 0..=n_steps`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    /// Absolute end time (μs for the MHz units).
    #[serde(default)]
    pub t_end: Option<f64>,
    /// End time in units of `1/G_eff` of the scenario's reference coupling.
    #[serde(default)]
    pub t_end_g_eff: Option<f64>,
    pub n_steps: usize,
}

impl TimeGrid {
    pub fn validate(&self) -> CliResult<()> {
        let t = match (self.t_end, self.t_end_g_eff) {
            (Some(t), None) | (None, Some(t)) => t,
            _ => return Err(CliError::validation("time: give exactly one of t_end, t_end_g_eff")),
        };
        if !(t > 0.0) || !t.is_finite() {
            return Err(CliError::validation("time: the grid must have positive length"));
        }
        if self.n_steps == 0 {
            return Err(CliError::validation("time: n_steps must be at least 1"));
        }
        Ok(())
    }

    /// Grid for a reference coupling `g_ref` (used with `t_end_g_eff`).
    pub fn grid(&self, g_ref: f64) -> CliResult<Vec<f64>> {
        self.validate()?;
        let t_end = match (self.t_end, self.t_end_g_eff) {
            (Some(t), _) => t,
            (None, Some(x)) => {
                if !(g_ref.abs() > 0.0) || !g_ref.is_finite() {
                    return Err(CliError::validation("t_end_g_eff needs a nonzero reference coupling"));
                }
                x / g_ref.abs()
            }
            _ => unreachable!(),
        };
        Ok((0..=self.n_steps).map(|k| t_end * k as f64 / self.n_steps as f64).collect())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub unit: Unit,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "ScenarioConfig::default_n_traj")]
    pub n_traj: usize,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub params: PhysicalParams,
    #[serde(default)]
    pub long_distance: LongDistanceParams,
    #[serde(default)]
    pub cooling: Option<CoolingParams>,
    #[serde(default)]
    pub cutoffs: Option<Cutoffs>,
    #[serde(default)]
    pub time: Option<TimeGrid>,
    #[serde(default)]
    pub solver: Solver,
}

/// Command-line overrides applied after parsing.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub n_traj: Option<usize>,
}

impl ScenarioConfig {
    fn default_n_traj() -> usize {
        100
    }

    pub fn from_toml(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::validation(e.to_string().replace('\n', " ").trim().to_string()))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::validation(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(s) = o.seed {
            self.seed = s;
        }
        if let Some(p) = &o.out {
            self.out = Some(p.clone());
        }
        if let Some(n) = o.n_traj {
            self.n_traj = n;
        }
    }

    /// Structural checks that need no computation.
    pub fn validate(&self) -> CliResult<Vec<String>> {
        let mut warnings = self.params.validate()?;
        self.long_distance.validate()?;
        if let Some(c) = &self.cooling {
            c.validate()?;
        }
        if let Some(t) = &self.time {
            t.validate()?;
        }
        self.solver.validate()?;
        let needs_time = !matches!(
            self.scenario,
            Scenario::StrongCouplingTable { .. }
                | Scenario::CoolingSweep { .. }
                | Scenario::Custom { method: RunMethod::SteadyState, .. }
        );
        if needs_time && self.time.is_none() {
            return Err(CliError::validation(format!("scenario {} needs a [time] table", self.scenario.name())));
        }
        let needs_cutoffs = matches!(
            self.scenario,
            Scenario::Fig2Trajectory { .. } | Scenario::EffectiveVsFull { .. }
        ) || matches!(
            self.scenario,
            Scenario::Custom {
                model: ModelKind::Microscopic
                    | ModelKind::Symmetric
                    | ModelKind::LongDistancePositional
                    | ModelKind::LongDistanceResonant,
                ..
            }
        );
        if needs_cutoffs && self.cutoffs.is_none() {
            return Err(CliError::validation(format!("scenario {} needs a [cutoffs] table", self.scenario.name())));
        }
        if let Some(c) = &self.cutoffs {
            if c.phonon == 0 || c.cavity == 0 {
                return Err(CliError::validation("cutoffs must keep at least one Fock state"));
            }
        }
        match &self.scenario {
            Scenario::Fig2Trajectory { .. } => {
                if self.n_traj == 0 {
                    return Err(CliError::validation("n_traj must be at least 1"));
                }
            }
            Scenario::Fig4StatePrep { n_m_values, drive_ratio, fock_columns, .. } => {
                if n_m_values.is_empty() || n_m_values.iter().any(|&n| !(n >= 0.0) || !n.is_finite()) {
                    return Err(CliError::validation("n_m_values must be a non-empty list of non-negative numbers"));
                }
                let ratios = match drive_ratio {
                    DriveRatio::One(r) => std::slice::from_ref(r),
                    DriveRatio::PerRun(rs) => {
                        if rs.len() != n_m_values.len() {
                            return Err(CliError::validation(format!(
                                "drive_ratio lists {} values for {} n_m_values",
                                rs.len(),
                                n_m_values.len()
                            )));
                        }
                        rs.as_slice()
                    }
                };
                if ratios.iter().any(|r| !r.is_finite()) || *fock_columns == 0 {
                    return Err(CliError::validation("drive_ratio must be finite and fock_columns positive"));
                }
            }
            Scenario::Fig5Linewidth { n_atoms, omega, omega_int, gamma_e_ratio, detunings, min_frequency, .. } => {
                if !(*min_frequency >= 0.0) || !min_frequency.is_finite() {
                    return Err(CliError::validation("min_frequency must be finite and non-negative"));
                }
                if *n_atoms == 0 {
                    return Err(CliError::validation("n_atoms must be at least 1"));
                }
                if !(*omega > 0.0) || !(*omega_int > 0.0) || !(*gamma_e_ratio >= 0.0) {
                    return Err(CliError::validation("omega, omega_int must be positive and gamma_e_ratio non-negative"));
                }
                if detunings.is_empty() || detunings.iter().any(|d| !d.is_finite()) {
                    return Err(CliError::validation("detunings must be a non-empty list of finite numbers"));
                }
            }
            Scenario::StrongCouplingTable { margin } => {
                if !(*margin > 0.0) {
                    return Err(CliError::validation("margin must be positive"));
                }
            }
            Scenario::EffectiveVsFull { .. } => {}
            Scenario::CoolingSweep { gamma_cool, gamma_cl, phonon_cutoff } => {
                if gamma_cool.is_empty() || gamma_cool.iter().any(|&g| !(g > 0.0) || !g.is_finite()) {
                    return Err(CliError::validation("gamma_cool must be a non-empty list of positive rates"));
                }
                if !(*gamma_cl > 0.0) || *phonon_cutoff < 2 {
                    return Err(CliError::validation("gamma_cl must be positive and phonon_cutoff at least 2"));
                }
            }
            Scenario::Custom { method, excitations, .. } => {
                if *method == RunMethod::Trajectories && self.n_traj == 0 {
                    return Err(CliError::validation("n_traj must be at least 1"));
                }
                if *excitations == 0 {
                    return Err(CliError::validation("excitations must be at least 1"));
                }
            }
        }
        warnings.dedup();
        Ok(warnings)
    }

    /// Copy with every frequency converted to internal angular units.
    pub fn to_internal(&self) -> ScenarioConfig {
        let f = self.unit.factor();
        let mut c = self.clone();
        let p = &mut c.params;
        for x in [
            &mut p.omega_m,
            &mut p.omega_0,
            &mut p.omega_p,
            &mut p.omega_ge,
            &mut p.omega_gr,
            &mut p.omega_l,
            &mut p.omega_l_m,
            &mut p.g0,
            &mut p.g,
            &mut p.big_g,
            &mut p.rabi,
            &mut p.e_p,
            &mut p.kappa,
            &mut p.gamma_e,
            &mut p.gamma_r,
            &mut p.gamma_m,
        ] {
            *x *= f;
        }
        // Ḡ_eff = g_m g_at √N and γ_m^diff = 2g_m² are rates: g_m, g_at scale as √f
        c.long_distance.g_m *= f.sqrt();
        c.long_distance.g_at *= f.sqrt();
        c.long_distance.drive *= f;
        if let Some(cool) = &mut c.cooling {
            cool.omega_d *= f;
            cool.gamma_cl *= f;
        }
        match &mut c.scenario {
            Scenario::Fig5Linewidth { omega, omega_int, .. } => {
                *omega *= f;
                *omega_int *= f;
            }
            Scenario::CoolingSweep { gamma_cool, gamma_cl, .. } => {
                gamma_cool.iter_mut().for_each(|g| *g *= f);
                *gamma_cl *= f;
            }
            Scenario::Custom { delta, omega_int, .. } => {
                *delta *= f;
                *omega_int *= f;
            }
            _ => {}
        }
        c
    }
}
