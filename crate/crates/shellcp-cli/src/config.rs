//! Run configuration: layered intake (built-in preset, TOML file, flag
//! overrides, in that precedence order), validation with field paths, and
//! reduction to the concrete system + sweep the evaluator consumes.
//!
//! Config keys mirror the command-line flag names section by section:
//!
//! ```toml
//! [system]
//! radius_m = 3.42e-10
//! separation_over_radius = 0.5      # or separation_m
//! temperature_k = 300.0
//! plasma_q = 4.94e-2                # or plasma_omega_per_m
//! atom_energy_ev = 11.65            # or atom_omega_rad_s
//! alpha0_m3 = 6.67e-31
//! polarizability = "single_oscillator"   # or "static"
//!
//! [sweep]
//! variable = "temperature"          # temperature | separation | radius | plasma_q
//! min = 1.0
//! max = 1.0e6
//! count = 61
//! spacing = "log"                   # lin | log
//!
//! [control]
//! rel_tol = 1.0e-8
//!
//! [output]
//! format = "csv"                    # csv | json
//! path = "rows.csv"
//! outputs = ["free_energy", "breakdown"]
//! ```

use crate::error::{CliError, Result};
use serde::Deserialize;
use shellcp_core::constants::{C, EV, HBAR};
use shellcp_core::matsubara::SeriesControl;
use shellcp_core::model::{PhysicalSystem, Polarizability};
use std::path::{Path, PathBuf};

// ---------------------------------------------------------------------------
// Enums shared by config file, flags, and writers
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    Temperature,
    Separation,
    Radius,
    PlasmaQ,
}

impl SweepVariable {
    /// Header name of the leading column (the swept quantity).
    pub fn column_name(self) -> &'static str {
        match self {
            SweepVariable::Temperature => "temperature_k",
            SweepVariable::Separation => "separation_m",
            SweepVariable::Radius => "radius_m",
            SweepVariable::PlasmaQ => "plasma_q",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "temperature" => Ok(SweepVariable::Temperature),
            "separation" => Ok(SweepVariable::Separation),
            "radius" => Ok(SweepVariable::Radius),
            "plasma_q" => Ok(SweepVariable::PlasmaQ),
            other => Err(CliError::config(format!(
                "sweep.variable: unknown variable {other:?} (expected temperature, separation, radius, or plasma_q)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    Lin,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Column groups a run can emit. The emitted order is the declaration order
/// here, independent of the order requested.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputKind {
    FreeEnergy,
    Breakdown,
    Entropy,
    Sigma,
    Regimes,
}

impl OutputKind {
    pub const ALL: [OutputKind; 5] = [
        OutputKind::FreeEnergy,
        OutputKind::Breakdown,
        OutputKind::Entropy,
        OutputKind::Sigma,
        OutputKind::Regimes,
    ];

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "free_energy" => Ok(OutputKind::FreeEnergy),
            "breakdown" => Ok(OutputKind::Breakdown),
            "entropy" => Ok(OutputKind::Entropy),
            "sigma" => Ok(OutputKind::Sigma),
            "regimes" => Ok(OutputKind::Regimes),
            other => Err(CliError::config(format!(
                "output.outputs: unknown group {other:?} (expected free_energy, breakdown, entropy, sigma, or regimes)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolarizabilityKind {
    SingleOscillator,
    Static,
}

// ---------------------------------------------------------------------------
// Patch layers
// ---------------------------------------------------------------------------

/// One layer of (partial) configuration. Later layers override earlier ones
/// field by field; within each alternative pair (separation, plasma strength,
/// atom frequency) setting one representation clears the other.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemPatch {
    pub radius_m: Option<f64>,
    pub separation_m: Option<f64>,
    pub separation_over_radius: Option<f64>,
    pub temperature_k: Option<f64>,
    pub plasma_q: Option<f64>,
    pub plasma_omega_per_m: Option<f64>,
    pub atom_energy_ev: Option<f64>,
    pub atom_omega_rad_s: Option<f64>,
    pub alpha0_m3: Option<f64>,
    pub polarizability: Option<PolarizabilityKind>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepPatch {
    pub variable: Option<SweepVariable>,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub count: Option<usize>,
    pub spacing: Option<Spacing>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControlPatch {
    pub rel_tol: Option<f64>,
    pub abs_floor: Option<f64>,
    pub l_max_cap: Option<u32>,
    pub n_max_cap: Option<u64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPatch {
    pub format: Option<OutputFormat>,
    pub path: Option<PathBuf>,
    pub outputs: Option<Vec<OutputKind>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigPatch {
    #[serde(default)]
    pub system: SystemPatch,
    #[serde(default)]
    pub sweep: Option<SweepPatch>,
    #[serde(default)]
    pub control: ControlPatch,
    #[serde(default)]
    pub output: OutputPatch,
}

fn overlay<T: Clone>(dst: &mut Option<T>, src: &Option<T>) {
    if src.is_some() {
        *dst = src.clone();
    }
}

/// Overlay `src` onto `dst`; for each exclusive pair, a value in `src` clears
/// the sibling representation in `dst`.
fn overlay_system(dst: &mut SystemPatch, src: &SystemPatch) {
    overlay(&mut dst.radius_m, &src.radius_m);
    if src.separation_m.is_some() || src.separation_over_radius.is_some() {
        dst.separation_m = None;
        dst.separation_over_radius = None;
    }
    overlay(&mut dst.separation_m, &src.separation_m);
    overlay(&mut dst.separation_over_radius, &src.separation_over_radius);
    if src.plasma_q.is_some() || src.plasma_omega_per_m.is_some() {
        dst.plasma_q = None;
        dst.plasma_omega_per_m = None;
    }
    overlay(&mut dst.plasma_q, &src.plasma_q);
    overlay(&mut dst.plasma_omega_per_m, &src.plasma_omega_per_m);
    if src.atom_energy_ev.is_some() || src.atom_omega_rad_s.is_some() {
        dst.atom_energy_ev = None;
        dst.atom_omega_rad_s = None;
    }
    overlay(&mut dst.atom_energy_ev, &src.atom_energy_ev);
    overlay(&mut dst.atom_omega_rad_s, &src.atom_omega_rad_s);
    overlay(&mut dst.temperature_k, &src.temperature_k);
    overlay(&mut dst.alpha0_m3, &src.alpha0_m3);
    overlay(&mut dst.polarizability, &src.polarizability);
}

pub fn overlay_config(dst: &mut ConfigPatch, src: &ConfigPatch) {
    overlay_system(&mut dst.system, &src.system);
    if let Some(s) = &src.sweep {
        let d = dst.sweep.get_or_insert_with(SweepPatch::default);
        overlay(&mut d.variable, &s.variable);
        overlay(&mut d.min, &s.min);
        overlay(&mut d.max, &s.max);
        overlay(&mut d.count, &s.count);
        overlay(&mut d.spacing, &s.spacing);
    }
    overlay(&mut dst.control.rel_tol, &src.control.rel_tol);
    overlay(&mut dst.control.abs_floor, &src.control.abs_floor);
    overlay(&mut dst.control.l_max_cap, &src.control.l_max_cap);
    overlay(&mut dst.control.n_max_cap, &src.control.n_max_cap);
    overlay(&mut dst.output.format, &src.output.format);
    overlay(&mut dst.output.path, &src.output.path);
    overlay(&mut dst.output.outputs, &src.output.outputs);
}

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

pub const PRESET_NAMES: [&str; 1] = ["c60-hydrogen"];

/// Built-in named parameter sets. `c60-hydrogen`: a hydrogen atom half a
/// radius away from a C60-sized shell (R = 0.342 nm, atom transition
/// 11.65 eV, alpha(0) = 0.667 A^3, Q = 4.94e-2) at room temperature.
pub fn preset(name: &str) -> Result<ConfigPatch> {
    match name {
        "c60-hydrogen" => Ok(ConfigPatch {
            system: SystemPatch {
                radius_m: Some(0.342e-9),
                separation_over_radius: Some(0.5),
                temperature_k: Some(300.0),
                plasma_q: Some(4.94e-2),
                atom_energy_ev: Some(11.65),
                alpha0_m3: Some(0.667e-30),
                polarizability: Some(PolarizabilityKind::SingleOscillator),
                ..SystemPatch::default()
            },
            ..ConfigPatch::default()
        }),
        other => Err(CliError::config(format!(
            "unknown preset {other:?} (available: {})",
            PRESET_NAMES.join(", ")
        ))),
    }
}

pub fn load_config_file(path: &Path) -> Result<ConfigPatch> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::io(&format!("reading config {}", path.display()), e))?;
    toml::from_str(&text)
        .map_err(|e| CliError::config(format!("{}: {e}", path.display())))
}

// ---------------------------------------------------------------------------
// Resolution
// ---------------------------------------------------------------------------

/// Fully resolved sweep axis. A config without a [sweep] section degenerates
/// to a single temperature point at the configured value.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub variable: SweepVariable,
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl Sweep {
    /// The sweep grid, in sweep order. A single-point sweep yields `min`.
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let n = self.count;
        match self.spacing {
            Spacing::Lin => {
                let step = (self.max - self.min) / (n - 1) as f64;
                (0..n).map(|i| self.min + step * i as f64).collect()
            }
            Spacing::Log => {
                let (a, b) = (self.min.ln(), self.max.ln());
                let step = (b - a) / (n - 1) as f64;
                (0..n).map(|i| (a + step * i as f64).exp()).collect()
            }
        }
    }
}

/// A validated, ready-to-run configuration.
#[derive(Debug, Clone)]
pub struct ResolvedConfig {
    /// System at the configured (un-swept) point.
    pub base: PhysicalSystem,
    pub pol: Polarizability,
    pub sweep: Sweep,
    pub control: SeriesControl,
    /// Requested column groups, deduplicated, in canonical order.
    pub outputs: Vec<OutputKind>,
    pub format: OutputFormat,
    /// Output file; stdout when absent.
    pub path: Option<PathBuf>,
}

fn require(field: &str, v: Option<f64>) -> Result<f64> {
    v.ok_or_else(|| CliError::config(format!("{field}: required value missing")))
}

fn positive(field: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(CliError::config(format!("{field}: must be a finite value > 0 (got {v})")))
    }
}

fn non_negative(field: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(CliError::config(format!("{field}: must be a finite value >= 0 (got {v})")))
    }
}

fn exclusive(section: &str, a: (&str, Option<f64>), b: (&str, Option<f64>)) -> Result<()> {
    if a.1.is_some() && b.1.is_some() {
        return Err(CliError::config(format!(
            "{section}: {} and {} are alternatives; give exactly one",
            a.0, b.0
        )));
    }
    Ok(())
}

/// Validate a merged patch stack and produce the runnable configuration.
pub fn resolve(patch: &ConfigPatch) -> Result<ResolvedConfig> {
    let s = &patch.system;
    exclusive("system", ("separation_m", s.separation_m), ("separation_over_radius", s.separation_over_radius))?;
    exclusive("system", ("plasma_q", s.plasma_q), ("plasma_omega_per_m", s.plasma_omega_per_m))?;
    exclusive("system", ("atom_energy_ev", s.atom_energy_ev), ("atom_omega_rad_s", s.atom_omega_rad_s))?;

    let radius = positive("system.radius_m", require("system.radius_m", s.radius_m)?)?;
    let separation = match (s.separation_m, s.separation_over_radius) {
        (Some(d), None) => positive("system.separation_m", d)?,
        (None, Some(r)) => positive("system.separation_over_radius", r)? * radius,
        (None, None) => return Err(CliError::config(
            "system: separation missing (give separation_m or separation_over_radius)".to_string(),
        )),
        (Some(_), Some(_)) => unreachable!("rejected above"),
    };
    let plasma_omega = match (s.plasma_q, s.plasma_omega_per_m) {
        (Some(q), None) => non_negative("system.plasma_q", q)? / radius,
        (None, Some(w)) => non_negative("system.plasma_omega_per_m", w)?,
        (None, None) => return Err(CliError::config(
            "system: plasma strength missing (give plasma_q or plasma_omega_per_m)".to_string(),
        )),
        (Some(_), Some(_)) => unreachable!("rejected above"),
    };
    let atom_omega = match (s.atom_energy_ev, s.atom_omega_rad_s) {
        (Some(ev), None) => positive("system.atom_energy_ev", ev)? * EV / HBAR,
        (None, Some(w)) => positive("system.atom_omega_rad_s", w)?,
        (None, None) => return Err(CliError::config(
            "system: atom frequency missing (give atom_energy_ev or atom_omega_rad_s)".to_string(),
        )),
        (Some(_), Some(_)) => unreachable!("rejected above"),
    };
    let alpha0 = positive("system.alpha0_m3", require("system.alpha0_m3", s.alpha0_m3)?)?;
    let temperature = non_negative(
        "system.temperature_k",
        require("system.temperature_k", s.temperature_k)?,
    )?;

    let base = PhysicalSystem {
        radius_r: radius,
        plasma_omega,
        atom_omega_a: atom_omega,
        alpha0,
        separation_d: separation,
        temperature_t: temperature,
    };
    base.validate()?;

    let pol = match s.polarizability.unwrap_or(PolarizabilityKind::SingleOscillator) {
        PolarizabilityKind::SingleOscillator => Polarizability::single_oscillator(alpha0, atom_omega),
        PolarizabilityKind::Static => Polarizability::static_mode(alpha0),
    };

    let sweep = match &patch.sweep {
        None => Sweep {
            variable: SweepVariable::Temperature,
            min: temperature,
            max: temperature,
            count: 1,
            spacing: Spacing::Lin,
        },
        Some(sw) => {
            let variable = sw.variable.ok_or_else(|| {
                CliError::config("sweep.variable: required value missing".to_string())
            })?;
            let min = require("sweep.min", sw.min)?;
            let max = require("sweep.max", sw.max)?;
            let count = sw.count.unwrap_or(1);
            let spacing = sw.spacing.unwrap_or(Spacing::Lin);
            if count < 1 {
                return Err(CliError::config("sweep.count: must be >= 1".to_string()));
            }
            if !(min.is_finite() && max.is_finite()) {
                return Err(CliError::config("sweep: min and max must be finite".to_string()));
            }
            if count > 1 && !(max > min) {
                return Err(CliError::config(
                    "sweep: max must exceed min when count > 1".to_string(),
                ));
            }
            if spacing == Spacing::Log && !(min > 0.0) {
                return Err(CliError::config(
                    "sweep: log spacing requires min > 0".to_string(),
                ));
            }
            let floor_ok = match variable {
                SweepVariable::Temperature | SweepVariable::PlasmaQ => min >= 0.0,
                SweepVariable::Separation | SweepVariable::Radius => min > 0.0,
            };
            if !floor_ok {
                return Err(CliError::config(format!(
                    "sweep.min: out of range for variable {:?}",
                    variable.column_name()
                )));
            }
            Sweep { variable, min, max, count, spacing }
        }
    };

    let mut control = SeriesControl::default();
    if let Some(v) = patch.control.rel_tol {
        control.rel_tol = v;
    }
    if let Some(v) = patch.control.abs_floor {
        control.abs_floor = v;
    }
    if let Some(v) = patch.control.l_max_cap {
        control.l_max_cap = v;
    }
    if let Some(v) = patch.control.n_max_cap {
        control.n_max_cap = v;
    }
    control.validate().map_err(|e| CliError::config(format!("control: {e}")))?;

    let requested = patch
        .output
        .outputs
        .clone()
        .unwrap_or_else(|| vec![OutputKind::FreeEnergy, OutputKind::Breakdown]);
    if requested.is_empty() {
        return Err(CliError::config("output.outputs: at least one group required".to_string()));
    }
    let outputs: Vec<OutputKind> =
        OutputKind::ALL.into_iter().filter(|k| requested.contains(k)).collect();

    Ok(ResolvedConfig {
        base,
        pol,
        sweep,
        control,
        outputs,
        format: patch.output.format.unwrap_or(OutputFormat::Csv),
        path: patch.output.path.clone(),
    })
}

/// The system with the sweep variable replaced by `value`.
///
/// Sweeping `radius` holds the SI separation and plasma wavenumber fixed;
/// sweeping `plasma_q` rescales the plasma wavenumber against the base
/// radius.
pub fn system_at(cfg: &ResolvedConfig, value: f64) -> PhysicalSystem {
    let mut sys = cfg.base;
    match cfg.sweep.variable {
        SweepVariable::Temperature => sys.temperature_t = value,
        SweepVariable::Separation => sys.separation_d = value,
        SweepVariable::Radius => sys.radius_r = value,
        SweepVariable::PlasmaQ => sys.plasma_omega = value / cfg.base.radius_r,
    }
    sys
}

/// Parse the `--sweep var:min:max:count:lin|log` shorthand.
pub fn parse_sweep_flag(spec: &str) -> Result<SweepPatch> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 5 {
        return Err(CliError::config(format!(
            "--sweep {spec:?}: expected var:min:max:count:lin|log"
        )));
    }
    let variable = SweepVariable::parse(parts[0])?;
    let min: f64 = parts[1]
        .parse()
        .map_err(|_| CliError::config(format!("--sweep: bad min {:?}", parts[1])))?;
    let max: f64 = parts[2]
        .parse()
        .map_err(|_| CliError::config(format!("--sweep: bad max {:?}", parts[2])))?;
    let count: usize = parts[3]
        .parse()
        .map_err(|_| CliError::config(format!("--sweep: bad count {:?}", parts[3])))?;
    let spacing = match parts[4] {
        "lin" => Spacing::Lin,
        "log" => Spacing::Log,
        other => {
            return Err(CliError::config(format!(
                "--sweep: bad spacing {other:?} (expected lin or log)"
            )))
        }
    };
    Ok(SweepPatch {
        variable: Some(variable),
        min: Some(min),
        max: Some(max),
        count: Some(count),
        spacing: Some(spacing),
    })
}

/// Parse the comma-separated `--outputs` flag.
pub fn parse_outputs_flag(spec: &str) -> Result<Vec<OutputKind>> {
    spec.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(OutputKind::parse)
        .collect()
}

/// Parse the `--polarizability` flag.
pub fn parse_polarizability_flag(spec: &str) -> Result<PolarizabilityKind> {
    match spec {
        "single_oscillator" => Ok(PolarizabilityKind::SingleOscillator),
        "static" => Ok(PolarizabilityKind::Static),
        other => Err(CliError::config(format!(
            "--polarizability: unknown mode {other:?} (expected single_oscillator or static)"
        ))),
    }
}

/// Dimensionless summary printed by `presets` and used by `verify`.
pub fn derived_line(sys: &PhysicalSystem) -> Result<String> {
    let point = shellcp_core::model::reduce(sys)?;
    let temps = shellcp_core::model::effective_temperatures(sys)?;
    Ok(format!(
        "q = {}\n  q_a = {}\n  r = {}\n  t_omega_k = {}\n  t_r_k = {}\n  t_d_k = {}",
        point.q, point.q_a, point.r, temps.t_omega, temps.t_r, temps.t_d
    ))
}

#[allow(dead_code)]
pub const SPEED_OF_LIGHT: f64 = C;

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal() -> ConfigPatch {
        preset("c60-hydrogen").unwrap()
    }

    #[test]
    fn preset_resolves_to_the_documented_dimensionless_point() {
        let cfg = resolve(&minimal()).unwrap();
        let point = shellcp_core::model::reduce(&cfg.base).unwrap();
        assert!((point.q - 4.94e-2).abs() < 1e-12);
        assert!((point.r - 0.5).abs() < 1e-12);
        assert!((point.q_a - 0.0202).abs() / 0.0202 < 1e-2);
        assert_eq!(cfg.sweep.count, 1);
        assert_eq!(cfg.sweep.variable, SweepVariable::Temperature);
    }

    #[test]
    fn later_layers_override_and_clear_siblings() {
        let mut stack = minimal();
        let flags = ConfigPatch {
            system: SystemPatch {
                separation_m: Some(1.0e-10),
                ..SystemPatch::default()
            },
            ..ConfigPatch::default()
        };
        overlay_config(&mut stack, &flags);
        let cfg = resolve(&stack).unwrap();
        assert!((cfg.base.separation_d - 1.0e-10).abs() < 1e-22);
    }

    #[test]
    fn both_members_of_a_pair_in_one_layer_is_rejected() {
        let mut patch = minimal();
        patch.system.separation_m = Some(1.0e-10);
        // separation_over_radius is still set from the preset
        let err = resolve(&patch).unwrap_err();
        assert!(matches!(err, CliError::Config(_)), "{err}");
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn missing_required_field_reports_its_path() {
        let mut patch = minimal();
        patch.system.radius_m = None;
        let err = resolve(&patch).unwrap_err();
        assert!(err.to_string().contains("system.radius_m"), "{err}");
    }

    #[test]
    fn sweep_grids_have_exact_endpoints_and_count() {
        let lin = Sweep {
            variable: SweepVariable::Temperature,
            min: 10.0,
            max: 20.0,
            count: 5,
            spacing: Spacing::Lin,
        };
        assert_eq!(lin.values(), vec![10.0, 12.5, 15.0, 17.5, 20.0]);
        let log = Sweep { spacing: Spacing::Log, min: 1.0, max: 100.0, count: 3, ..lin };
        let v = log.values();
        assert_eq!(v.len(), 3);
        assert!((v[0] - 1.0).abs() < 1e-12 && (v[1] - 10.0).abs() < 1e-12);
    }

    #[test]
    fn sweep_flag_round_trips() {
        let p = parse_sweep_flag("temperature:1:1e6:61:log").unwrap();
        assert_eq!(p.variable, Some(SweepVariable::Temperature));
        assert_eq!(p.count, Some(61));
        assert_eq!(p.spacing, Some(Spacing::Log));
        assert!(parse_sweep_flag("temperature:1:1e6:61").is_err());
        assert!(parse_sweep_flag("bogus:1:2:3:lin").is_err());
    }

    #[test]
    fn outputs_are_deduplicated_into_canonical_order() {
        let mut patch = minimal();
        patch.output.outputs = Some(vec![
            OutputKind::Sigma,
            OutputKind::FreeEnergy,
            OutputKind::Sigma,
        ]);
        let cfg = resolve(&patch).unwrap();
        assert_eq!(cfg.outputs, vec![OutputKind::FreeEnergy, OutputKind::Sigma]);
    }

    #[test]
    fn unknown_keys_in_a_config_file_are_rejected() {
        let err = toml::from_str::<ConfigPatch>("[system]\nradius_nm = 1.0\n").unwrap_err();
        assert!(err.to_string().contains("radius_nm"), "{err}");
    }
}
