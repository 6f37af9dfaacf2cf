//! Command implementations behind the `qif` binary.
//!
//! Each command returns a structured report that renders to the text the
//! binary prints. Failures carry the process exit code: 2 for a parse error
//! in a `.qif` file, 3 for everything else.

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::path::Path as FsPath;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bec::{protocol_state, select_internal, InternalState};
use crate::circuitfile::{execute, parse, ParseError};
use crate::error::{Error, Result};
use crate::feasibility::{
    electron_report, ElectronScenario, FeasibilityReport, GRATING_PATH_SEPARATION_M,
    GRATING_SEPARATION_DISTANCE_M,
};
use crate::gaussian_oracle::{closed_form_stats, linspace, MziParams};
use crate::interferometer::{
    apply_kick, conservation_residual, recombine, run_mzi, split, BeamSplitter, PhaseSetting,
};
use crate::schrodinger::{apply_impulse_momentum, kick_fidelity, ImpulsePulse, PropagationConfig};
use crate::wavepacket::{gaussian_init, GaussianParams, GridSpec, MomentumWavefunction};

/// Environment variable overriding the default number of grid points.
pub const GRID_N_ENV: &str = "QIF_GRID_N";

/// Per-row tolerances checked before a sweep is written.
pub const UNITARITY_TOLERANCE: f64 = 1e-9;
pub const CONSERVATION_TOLERANCE: f64 = 1e-8;

#[derive(Debug)]
pub enum CliError {
    Parse(ParseError),
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(e) => write!(f, "parse error: {e}"),
            CliError::Runtime(msg) => f.write_str(msg),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Grid on `[-p_max, p_max)`. The point count is `n` if given, else
/// `$QIF_GRID_N`, else 4096.
pub fn resolve_grid(n: Option<usize>, p_max: f64) -> CliResult<GridSpec> {
    let n = match n {
        Some(n) => n,
        None => match std::env::var(GRID_N_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| CliError::Runtime(format!("{GRID_N_ENV}={v} is not a positive integer")))?,
            Err(_) => GridSpec::default().n_points(),
        },
    };
    Ok(GridSpec::symmetric(n, p_max)?)
}

fn unit_gaussian(grid: GridSpec) -> Result<MomentumWavefunction> {
    gaussian_init(GaussianParams::default(), grid)
}

pub fn cmd_simulate(path: &FsPath, grid: GridSpec) -> CliResult<String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Runtime(format!("cannot read {}: {e}", path.display())))?;
    let program = parse(&text).map_err(CliError::Parse)?;
    let exec = execute(&program, grid).map_err(|e| CliError::Runtime(e.to_string()))?;
    Ok(exec.text)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Oracle,
    Grid,
}

/// Inclusive `[lo, hi]` sampled at `steps` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisRange {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl AxisRange {
    pub fn new(lo: f64, hi: f64, steps: usize) -> Self {
        Self { lo, hi, steps }
    }

    pub fn values(&self) -> Vec<f64> {
        linspace(self.lo, self.hi, self.steps).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub t: AxisRange,
    pub delta: AxisRange,
    pub alpha: f64,
    pub backend: Backend,
}

impl SweepSpec {
    /// `t ∈ [0.01, 0.99]`, `δ ∈ [0.01, 2]`, 200 × 200, `α = 0`.
    pub fn figure_domain(backend: Backend) -> Self {
        Self {
            t: AxisRange::new(0.01, 0.99, 200),
            delta: AxisRange::new(0.01, 2.0, 200),
            alpha: 0.0,
            backend,
        }
    }

    pub fn validate(&self, grid: &GridSpec) -> Result<()> {
        let bad = |name, value, expected| Error::OutOfRange {
            name,
            value,
            expected,
        };
        for (name, axis) in [("t steps", self.t), ("delta steps", self.delta)] {
            if axis.steps < 2 {
                return Err(bad(name, axis.steps as f64, ">= 2"));
            }
        }
        if !(0.0 <= self.t.lo && self.t.lo <= self.t.hi && self.t.hi <= 1.0) {
            return Err(bad("t range", self.t.lo, "0 <= lo <= hi <= 1"));
        }
        if !(0.0 <= self.delta.lo && self.delta.lo <= self.delta.hi && self.delta.hi.is_finite()) {
            return Err(bad("delta range", self.delta.lo, "0 <= lo <= hi"));
        }
        if self.backend == Backend::Grid && self.delta.hi >= grid.shift_limit() {
            return Err(Error::Aliasing {
                delta: self.delta.hi,
                limit: grid.shift_limit(),
            });
        }
        if !self.alpha.is_finite() {
            return Err(bad("alpha", self.alpha, "finite"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub t: f64,
    pub delta: f64,
    pub alpha: f64,
    pub p_c: f64,
    pub mean_c: Option<f64>,
    pub p_d: f64,
    pub mean_d: Option<f64>,
    pub residual: f64,
}

pub const CSV_HEADER: [&str; 8] = ["t", "delta", "alpha", "p_c", "mean_c", "p_d", "mean_d", "residual"];

fn sweep_row(
    t: f64,
    delta: f64,
    alpha: f64,
    backend: Backend,
    input: Option<&MomentumWavefunction>,
) -> Result<SweepRow> {
    match backend {
        Backend::Oracle => {
            let params = MziParams::new(t, delta, alpha)?;
            let s = closed_form_stats(&params);
            Ok(SweepRow {
                t,
                delta,
                alpha,
                p_c: s.p_c,
                mean_c: s.mean_c,
                p_d: s.p_d,
                mean_d: s.mean_d,
                residual: s.conservation_residual(&params),
            })
        }
        Backend::Grid => {
            let input = input.expect("grid backend needs an input state");
            let (c, d) = run_mzi(input, t, delta, PhaseSetting::from_alpha(alpha))?;
            Ok(SweepRow {
                t,
                delta,
                alpha,
                p_c: c.probability,
                mean_c: c.mean_p,
                p_d: d.probability,
                mean_d: d.mean_p,
                residual: conservation_residual(&c, &d, t, delta, 0.0),
            })
        }
    }
}

/// All rows of a sweep, `t`-major. Rows are computed in parallel and
/// collected in order.
pub fn sweep_rows(spec: &SweepSpec, grid: GridSpec) -> Result<Vec<SweepRow>> {
    spec.validate(&grid)?;
    let input = match spec.backend {
        Backend::Grid => Some(unit_gaussian(grid)?),
        Backend::Oracle => None,
    };
    let deltas = spec.delta.values();
    let cells: Vec<(f64, f64)> = spec
        .t
        .values()
        .into_iter()
        .flat_map(|t| deltas.iter().map(move |&d| (t, d)))
        .collect();
    cells
        .par_iter()
        .map(|&(t, d)| sweep_row(t, d, spec.alpha, spec.backend, input.as_ref()))
        .collect()
}

fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "nan".to_string(), fmt_f64)
}

/// Checks unitarity and conservation on every row, then writes the CSV.
pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> CliResult<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER).map_err(|e| CliError::Runtime(e.to_string()))?;
    for row in rows {
        if (row.p_c + row.p_d - 1.0).abs() > UNITARITY_TOLERANCE {
            return Err(CliError::Runtime(format!(
                "unitarity violated at t={} delta={}: P_C + P_D = {}",
                row.t,
                row.delta,
                row.p_c + row.p_d
            )));
        }
        if row.residual > CONSERVATION_TOLERANCE {
            return Err(CliError::Runtime(format!(
                "conservation violated at t={} delta={}: residual {:e}",
                row.t, row.delta, row.residual
            )));
        }
        w.write_record([
            fmt_f64(row.t),
            fmt_f64(row.delta),
            fmt_f64(row.alpha),
            fmt_f64(row.p_c),
            fmt_opt(row.mean_c),
            fmt_f64(row.p_d),
            fmt_opt(row.mean_d),
            fmt_f64(row.residual),
        ])
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSummary {
    pub rows: usize,
    pub min_mean_c: f64,
    pub argmin_t: f64,
    pub argmin_delta: f64,
    pub negative_cells: usize,
    pub min_mean_d: f64,
}

impl fmt::Display for SweepSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "rows: {}", self.rows)?;
        writeln!(
            f,
            "min mean_c = {:.6} W at t = {:.6}, delta = {:.6} W",
            self.min_mean_c, self.argmin_t, self.argmin_delta
        )?;
        writeln!(f, "cells with mean_c < 0: {}", self.negative_cells)?;
        write!(f, "min mean_d = {:.6} W", self.min_mean_d)
    }
}

pub fn summarize(rows: &[SweepRow]) -> SweepSummary {
    let mut s = SweepSummary {
        rows: rows.len(),
        min_mean_c: f64::INFINITY,
        argmin_t: f64::NAN,
        argmin_delta: f64::NAN,
        negative_cells: 0,
        min_mean_d: f64::INFINITY,
    };
    for row in rows {
        if let Some(m) = row.mean_c {
            if m < s.min_mean_c {
                s.min_mean_c = m;
                s.argmin_t = row.t;
                s.argmin_delta = row.delta;
            }
            if m < 0.0 {
                s.negative_cells += 1;
            }
        }
        if let Some(m) = row.mean_d {
            s.min_mean_d = s.min_mean_d.min(m);
        }
    }
    s
}

/// Runs the sweep and writes the CSV to `out` (stdout when `None`).
pub fn cmd_sweep(spec: &SweepSpec, grid: GridSpec, out: Option<&FsPath>) -> CliResult<SweepSummary> {
    let rows = sweep_rows(spec, grid)?;
    match out {
        Some(path) => {
            let file = std::fs::File::create(path)
                .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
            write_csv(&rows, std::io::BufWriter::new(file))?;
        }
        None => write_csv(&rows, std::io::stdout().lock())?,
    }
    Ok(summarize(&rows))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleCheck {
    pub samples: usize,
    pub seed: u64,
    pub grid_points: usize,
    pub max_deviation: f64,
    /// `(t, δ, α)` at the largest deviation.
    pub worst: Option<(f64, f64, f64)>,
}

impl fmt::Display for OracleCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "samples: {}  seed: {}  grid points: {}",
            self.samples, self.seed, self.grid_points
        )?;
        write!(f, "max |grid - closed form| over P_C, <p>_C, P_D, <p>_D: {:.3e}", self.max_deviation)?;
        if let Some((t, d, a)) = self.worst {
            write!(f, "\nworst at t = {t:.6}, delta = {d:.6}, alpha = {a:.6}")?;
        }
        Ok(())
    }
}

/// Grid pipeline against the closed forms at `samples` random
/// `(t ∈ [0,1], δ ∈ [0,2], α ∈ [0,2π))`.
pub fn cmd_oracle_check(samples: usize, seed: u64, grid: GridSpec) -> CliResult<OracleCheck> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params: Vec<(f64, f64, f64)> = (0..samples)
        .map(|_| (rng.gen::<f64>(), 2.0 * rng.gen::<f64>(), 2.0 * PI * rng.gen::<f64>()))
        .collect();
    let mut check = OracleCheck {
        samples,
        seed,
        grid_points: grid.n_points(),
        max_deviation: 0.0,
        worst: None,
    };
    if samples == 0 {
        return Ok(check);
    }
    let input = unit_gaussian(grid)?;
    let deviations: Vec<f64> = params
        .par_iter()
        .map(|&(t, d, a)| -> Result<f64> {
            let (c, dd) = run_mzi(&input, t, d, PhaseSetting::from_alpha(a))?;
            let s = closed_form_stats(&MziParams::new(t, d, a)?);
            let mean_dev = |x: Option<f64>, y: Option<f64>| match (x, y) {
                (Some(x), Some(y)) => (x - y).abs(),
                _ => 0.0,
            };
            Ok([
                (c.probability - s.p_c).abs(),
                (dd.probability - s.p_d).abs(),
                mean_dev(c.mean_p, s.mean_c),
                mean_dev(dd.mean_p, s.mean_d),
            ]
            .into_iter()
            .fold(0.0, f64::max))
        })
        .collect::<Result<_>>()?;
    for (dev, p) in deviations.iter().zip(&params) {
        if *dev > check.max_deviation || check.worst.is_none() {
            check.max_deviation = *dev;
            check.worst = Some(*p);
        }
    }
    Ok(check)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagateReport {
    pub force: f64,
    pub duration: f64,
    pub substeps: usize,
    pub mass: f64,
    pub kick: f64,
    pub mean_shift: f64,
    pub fidelity: f64,
    pub norm_drift: f64,
}

impl fmt::Display for PropagateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "pulse: F = {} over tau = {} in {} steps, mass = {}",
            self.force, self.duration, self.substeps, self.mass
        )?;
        writeln!(f, "kick F*tau = {:.12}", self.kick)?;
        writeln!(
            f,
            "mean momentum shift = {:.12}  (error {:.3e})",
            self.mean_shift,
            (self.mean_shift - self.kick).abs()
        )?;
        writeln!(f, "kick fidelity = {:.12}", self.fidelity)?;
        write!(f, "norm drift = {:.3e}", self.norm_drift)
    }
}

/// Applies a linear-potential pulse to a unit Gaussian and compares the
/// result with a rigid momentum shift.
pub fn cmd_propagate(
    force: f64,
    duration: f64,
    substeps: usize,
    mass: f64,
    grid: GridSpec,
) -> CliResult<PropagateReport> {
    let pulse = ImpulsePulse::new(force, duration, substeps)?;
    let config = PropagationConfig::new(mass)?;
    let before = unit_gaussian(grid)?;
    let after = apply_impulse_momentum(&before, &pulse, &config)?;
    let kick = pulse.kick();
    Ok(PropagateReport {
        force,
        duration,
        substeps,
        mass,
        kick,
        mean_shift: after.mean_momentum()? - before.mean_momentum()?,
        fidelity: kick_fidelity(&before, &after, kick)?,
        norm_drift: (after.norm() - before.norm()).abs(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibilitySummary {
    pub scenario: ElectronScenario,
    pub report: FeasibilityReport,
}

impl fmt::Display for FeasibilitySummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (s, r) = (&self.scenario, &self.report);
        writeln!(
            f,
            "scenario: {} eV, slit {:.3e} m, drift {} m, plates {:.3e} m apart x {:.3e} m long at {:.3e} V",
            s.kinetic_energy_ev, s.slit_width, s.drift_distance, s.plate_separation, s.plate_length, s.voltage
        )?;
        writeln!(f, "speed = {:.6e} m/s", r.speed)?;
        writeln!(f, "momentum = {:.6e} kg m/s", r.momentum)?;
        writeln!(f, "time of flight = {:.6e} s", r.time_of_flight)?;
        writeln!(f, "initial width = {:.6e} m", r.initial_width)?;
        writeln!(f, "beam width after drift = {:.6e} m ({:.3} um)", r.beam_width_at_drift, r.beam_width_at_drift * 1e6)?;
        writeln!(f, "momentum width W = {:.6e} kg m/s", r.momentum_width)?;
        writeln!(f, "kick delta = {:.6e} kg m/s", r.kick)?;
        writeln!(f, "delta / W = {:.6}", r.ratio)?;
        write!(
            f,
            "path separation (100 nm grating): {:.0} um at {} m",
            GRATING_PATH_SEPARATION_M * 1e6,
            GRATING_SEPARATION_DISTANCE_M
        )
    }
}

pub fn cmd_feasibility(scenario: ElectronScenario) -> CliResult<FeasibilitySummary> {
    Ok(FeasibilitySummary {
        scenario,
        report: electron_report(&scenario)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BecReport {
    pub t: f64,
    pub delta_a: f64,
    pub delta_b: f64,
    pub probability: f64,
    pub mean: Option<f64>,
    /// Largest nodewise difference from interferometer port C at
    /// `δ = δ_b - δ_a`, `α = 0`.
    pub max_diff_vs_mzi: f64,
}

impl fmt::Display for BecReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "protocol: t = {}, delta_a = {}, delta_b = {} (relative kick {:.12})",
            self.t,
            self.delta_a,
            self.delta_b,
            self.delta_b - self.delta_a
        )?;
        writeln!(f, "P(A) = {:.12}", self.probability)?;
        match self.mean {
            Some(m) => writeln!(f, "<p>_A = {m:.12} W")?,
            None => writeln!(f, "<p>_A undefined (dark selection)")?,
        }
        write!(f, "max |protocol - interferometer port C| = {:.3e}", self.max_diff_vs_mzi)
    }
}

pub fn cmd_bec(t: f64, delta_a: f64, delta_b: f64, grid: GridSpec) -> CliResult<BecReport> {
    let input = unit_gaussian(grid)?;
    let state = protocol_state(&input, t, delta_a, delta_b)?;
    let selected = select_internal(&state, InternalState::A);

    let inside = apply_kick(
        &split(&input, &BeamSplitter::new(t)?),
        delta_b - delta_a,
        PhaseSetting::default(),
    )?;
    let (raw_c, _) = recombine(&inside)?;
    let max_diff_vs_mzi = state
        .component(InternalState::A)
        .amplitudes()
        .iter()
        .zip(raw_c.amplitudes())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    Ok(BecReport {
        t,
        delta_a,
        delta_b,
        probability: selected.probability,
        mean: selected.mean_p,
        max_diff_vs_mzi,
    })
}
