//! Declarative experiment runs: config files, result records, the summary
//! report and the solver benchmark behind the command-line tool.
//!
//! A config is TOML with one `[[experiments]]` table per run. Each run
//! writes `<output>/<name>.json` (an [`ExperimentRecord`]) and
//! `<output>/<name>.trace.csv` (`eval,energy,weight`).

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::circuit::{efficient_su2, Entanglement};
use crate::error::{Error, Result};
use crate::hamiltonians::{get_hamiltonian, Model};
use crate::lattice::{
    custom_lattice, kagome_lattice, line_lattice, square_lattice, triangular_lattice, LatticeGraph,
};
use crate::sim::{EstimatorConfig, EstimatorMode, NoiseModel};
use crate::solver::{sector_spectrum, solve_auto};
use crate::vqe::{guided_vqe, GuidedVqeConfig, WarmStart};

/// Convergence tolerance for classically resolved targets.
pub const SOLVER_TOL: f64 = 1e-8;
/// Hamiltonian applications allowed to the classical solver.
pub const SOLVER_MAX_ITER: usize = 20_000;
pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");

fn one() -> f64 {
    1.0
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LatticeShape {
    Line {
        n: usize,
        periodic: bool,
    },
    Square {
        rows: usize,
        cols: usize,
        periodic: bool,
    },
    Triangular {
        rows: usize,
        cols: usize,
        periodic: bool,
    },
    /// The 12-site star-of-David cluster.
    Kagome,
    Custom {
        n: usize,
        edges: Vec<(usize, usize, f64)>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeSpec {
    #[serde(flatten)]
    pub shape: LatticeShape,
    /// Edge weight for generated lattices; custom edges carry their own.
    #[serde(default = "one")]
    pub weight: f64,
}

impl LatticeSpec {
    pub fn build(&self) -> Result<LatticeGraph> {
        let w = self.weight;
        match &self.shape {
            LatticeShape::Line { n, periodic } => line_lattice(*n, *periodic, w),
            LatticeShape::Square {
                rows,
                cols,
                periodic,
            } => square_lattice(*rows, *cols, *periodic, w),
            LatticeShape::Triangular {
                rows,
                cols,
                periodic,
            } => triangular_lattice(*rows, *cols, *periodic, w),
            LatticeShape::Kagome => Ok(kagome_lattice(w)),
            LatticeShape::Custom { n, edges } => custom_lattice(*n, edges),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnsatzSpec {
    pub reps: usize,
    pub entanglement: Entanglement,
}

impl Default for AnsatzSpec {
    fn default() -> Self {
        AnsatzSpec {
            reps: 2,
            entanglement: Entanglement::Linear,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizerSpec {
    pub max_iter: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reset_interval: Option<usize>,
}

impl Default for OptimizerSpec {
    fn default() -> Self {
        OptimizerSpec {
            max_iter: 100,
            reset_interval: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GuidanceSpec {
    pub threshold_pct: f64,
    pub initial_weight: f64,
    pub bias_step: f64,
    pub delta_trigger: f64,
    pub weight_floor: f64,
    pub max_recursions: usize,
    pub recursion_base_step: f64,
    /// Weight at which a classical target is computed.
    pub reference_weight: f64,
    pub warm_start: WarmStart,
}

impl Default for GuidanceSpec {
    fn default() -> Self {
        GuidanceSpec {
            threshold_pct: 1.0,
            initial_weight: 1.6,
            bias_step: 0.25,
            delta_trigger: 10.0,
            weight_floor: 1.0,
            max_recursions: 5,
            recursion_base_step: 0.3,
            reference_weight: 1.0,
            warm_start: WarmStart::InitialPoint,
        }
    }
}

/// Where the target energy comes from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum ExpectedSource {
    Explicit {
        value: f64,
    },
    /// Exact ground energy at the reference weight, optionally restricted to
    /// a particle-number sector.
    Classical {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        particles: Option<u32>,
    },
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub name: String,
    pub model: Model,
    pub lattice: LatticeSpec,
    #[serde(default)]
    pub ansatz: AnsatzSpec,
    #[serde(default)]
    pub optimizer: OptimizerSpec,
    #[serde(default)]
    pub guidance: GuidanceSpec,
    #[serde(default)]
    pub estimator: EstimatorConfig,
    pub expected: ExpectedSource,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output")]
    pub output: PathBuf,
    /// Drop guidance instead of failing when the classical solve does not
    /// converge.
    #[serde(default = "yes")]
    pub unguided_on_solver_failure: bool,
}

fn default_output() -> PathBuf {
    PathBuf::from("results")
}

impl ExperimentSpec {
    fn check_name(&self) -> Result<()> {
        let ok = !self.name.is_empty()
            && self
                .name
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c))
            && !self.name.starts_with('.');
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!(
                "experiment name {:?} must be nonempty [A-Za-z0-9._-]",
                self.name
            )))
        }
    }

    pub fn record_path(&self) -> PathBuf {
        self.output.join(format!("{}.json", self.name))
    }

    pub fn trace_path(&self) -> PathBuf {
        self.output.join(format!("{}.trace.csv", self.name))
    }
}

/// Contents of a config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub experiments: Vec<ExperimentSpec>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: ConfigFile =
            toml::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        if cfg.experiments.is_empty() {
            return Err(Error::InvalidConfig("no [[experiments]] tables".into()));
        }
        let mut seen = BTreeSet::new();
        for e in &cfg.experiments {
            e.check_name()?;
            if !seen.insert((&e.output, &e.name)) {
                return Err(Error::InvalidConfig(format!(
                    "duplicate experiment {:?} in {}",
                    e.name,
                    e.output.display()
                )));
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| e.context(path.display().to_string()))
    }
}

/// `--expected` on the command line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExpectedOverride {
    Value(f64),
    Classical,
    None,
}

impl std::str::FromStr for ExpectedOverride {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "classical" => Ok(Self::Classical),
            "none" => Ok(Self::None),
            v => v
                .parse()
                .map(Self::Value)
                .map_err(|_| format!("expected a number, 'classical' or 'none', got {v:?}")),
        }
    }
}

/// Parses `readout=0.02,cx=0.01`; omitted keys keep their defaults.
pub fn parse_noise(s: &str) -> std::result::Result<NoiseModel, String> {
    let mut noise = NoiseModel::default();
    for part in s.split(',').filter(|p| !p.is_empty()) {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| format!("expected key=value, got {part:?}"))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| format!("bad probability {value:?}"))?;
        match key.trim() {
            "readout" => noise.readout_flip_prob = value,
            "cx" => noise.cx_depolarizing_prob = value,
            other => return Err(format!("unknown noise key {other:?}")),
        }
    }
    Ok(noise)
}

/// Command-line overrides applied on top of every spec in a config.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub shots: Option<usize>,
    pub noise: Option<NoiseModel>,
    pub reps: Option<usize>,
    pub max_iter: Option<usize>,
    pub expected: Option<ExpectedOverride>,
    pub output: Option<PathBuf>,
}

impl Overrides {
    pub fn apply(&self, spec: &mut ExperimentSpec) {
        if let Some(seed) = self.seed {
            spec.seed = seed;
            spec.estimator.seed = seed;
        }
        if let Some(shots) = self.shots {
            spec.estimator.mode = EstimatorMode::Shots { shots };
        }
        if let Some(noise) = self.noise {
            spec.estimator.noise = Some(noise);
        }
        if let Some(reps) = self.reps {
            spec.ansatz.reps = reps;
        }
        if let Some(max_iter) = self.max_iter {
            spec.optimizer.max_iter = max_iter;
        }
        match self.expected {
            Some(ExpectedOverride::Value(value)) => {
                spec.expected = ExpectedSource::Explicit { value }
            }
            Some(ExpectedOverride::Classical) => {
                if !matches!(spec.expected, ExpectedSource::Classical { .. }) {
                    spec.expected = ExpectedSource::Classical { particles: None };
                }
            }
            Some(ExpectedOverride::None) => spec.expected = ExpectedSource::None,
            None => {}
        }
        if let Some(out) = &self.output {
            spec.output = out.clone();
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub spec: ExperimentSpec,
    pub toolkit_version: String,
    pub computed_energy: f64,
    pub expected_energy: Option<f64>,
    pub relative_error_pct: Option<f64>,
    pub wall_seconds: f64,
    pub evaluations: usize,
    pub recursions_used: usize,
    pub task_done: bool,
    pub final_weight: f64,
    pub thetas: Vec<f64>,
    pub seed: u64,
    /// `Some(false)` when a classical target was requested but the solver
    /// did not converge.
    pub solver_converged: Option<bool>,
}

impl ExperimentRecord {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))
    }
}

/// Exact ground energy for `spec` at `weight`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalSolution {
    pub energy: f64,
    pub residual: f64,
    pub converged: bool,
    pub num_qubits: usize,
    pub wall_seconds: f64,
    pub peak_state_bytes: usize,
}

fn solve_classical(
    model: &Model,
    lattice: &LatticeGraph,
    weight: f64,
    particles: Option<u32>,
    seed: u64,
) -> Result<ClassicalSolution> {
    let start = Instant::now();
    let h = get_hamiltonian(model, lattice, weight)?;
    let n = h.num_qubits();
    let out = match particles {
        Some(k) => {
            let spec = sector_spectrum(&h, k)?;
            let energy = *spec
                .first()
                .ok_or_else(|| Error::InvalidConfig(format!("empty {k}-particle sector")))?;
            ClassicalSolution {
                energy,
                residual: 0.0,
                converged: true,
                num_qubits: n,
                wall_seconds: 0.0,
                peak_state_bytes: 0,
            }
        }
        None => {
            let r = solve_auto(&h, SOLVER_TOL, SOLVER_MAX_ITER, seed)?;
            ClassicalSolution {
                energy: r.ground_energy,
                residual: r.residual,
                converged: r.converged,
                num_qubits: n,
                wall_seconds: 0.0,
                peak_state_bytes: r.peak_state_bytes,
            }
        }
    };
    Ok(ClassicalSolution {
        wall_seconds: start.elapsed().as_secs_f64(),
        ..out
    })
}

/// Classical ground energy of the spec's model at its reference weight.
/// The sector given by a `classical` target is honored.
pub fn solve_only(spec: &ExperimentSpec) -> Result<ClassicalSolution> {
    let lattice = spec.lattice.build()?;
    let particles = match spec.expected {
        ExpectedSource::Classical { particles } => particles,
        _ => None,
    };
    solve_classical(
        &spec.model,
        &lattice,
        spec.guidance.reference_weight,
        particles,
        spec.seed,
    )
}

/// Appends one row to a solver benchmark CSV, writing the header for a new
/// file.
pub fn append_solve_csv(path: &Path, name: &str, s: &ClassicalSolution) -> Result<()> {
    use std::io::Write;
    let fresh = !path.exists();
    let mut f = fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut text = String::new();
    if fresh {
        text.push_str("name,num_qubits,ground_energy,residual,converged,wall_seconds\n");
    }
    text.push_str(&format!(
        "{name},{},{},{:e},{},{}\n",
        s.num_qubits, s.energy, s.residual, s.converged, s.wall_seconds
    ));
    f.write_all(text.as_bytes())
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Outcome of [`run_experiment`] beyond the record itself.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub record: ExperimentRecord,
    pub warnings: Vec<String>,
}

/// Runs one spec and writes its record and trace under `spec.output`.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<RunOutcome> {
    spec.check_name()?;
    let start = Instant::now();
    let lattice = spec.lattice.build()?;
    let mut warnings = Vec::new();

    let (expected, solver_converged) = match spec.expected {
        ExpectedSource::Explicit { value } => (Some(value), None),
        ExpectedSource::None => (None, None),
        ExpectedSource::Classical { particles } => {
            let s = solve_classical(
                &spec.model,
                &lattice,
                spec.guidance.reference_weight,
                particles,
                spec.seed,
            )?;
            if s.converged {
                (Some(s.energy), Some(true))
            } else if spec.unguided_on_solver_failure {
                warnings.push(format!(
                    "{}: classical solve did not converge (residual {:e}); running unguided",
                    spec.name, s.residual
                ));
                (None, Some(false))
            } else {
                return Err(Error::InvalidConfig(format!(
                    "{}: classical solve did not converge (residual {:e})",
                    spec.name, s.residual
                )));
            }
        }
    };

    let num_qubits = spec.model.num_qubits(&lattice);
    let ansatz = efficient_su2(num_qubits, spec.ansatz.reps, spec.ansatz.entanglement)?;
    let g = &spec.guidance;
    let cfg = GuidedVqeConfig {
        expected_energy: expected,
        threshold_pct: g.threshold_pct,
        initial_weight: g.initial_weight,
        bias_step: g.bias_step,
        delta_trigger: g.delta_trigger,
        weight_floor: g.weight_floor,
        max_recursions: g.max_recursions,
        recursion_base_step: g.recursion_base_step,
        optimizer_max_iter: spec.optimizer.max_iter,
        nft_reset_interval: spec.optimizer.reset_interval,
        estimator: spec.estimator,
        seed: spec.seed,
        warm_start: g.warm_start,
        initial_point: None,
        ..GuidedVqeConfig::new(spec.model, lattice)
    };
    let result = guided_vqe(&cfg, &ansatz, None)?;

    let record = ExperimentRecord {
        spec: spec.clone(),
        toolkit_version: TOOLKIT_VERSION.to_string(),
        computed_energy: result.value,
        expected_energy: expected,
        relative_error_pct: result.relative_error_pct,
        wall_seconds: start.elapsed().as_secs_f64(),
        evaluations: result.evaluations,
        recursions_used: result.recursions_used,
        task_done: result.task_done,
        final_weight: result.final_weight,
        thetas: result.thetas.clone(),
        seed: spec.seed,
        solver_converged,
    };

    let io = |p: &Path, e: std::io::Error| Error::Io(format!("{}: {e}", p.display()));
    fs::create_dir_all(&spec.output).map_err(|e| io(&spec.output, e))?;
    let rp = spec.record_path();
    fs::write(&rp, record.to_json()? + "\n").map_err(|e| io(&rp, e))?;
    let tp = spec.trace_path();
    fs::write(&tp, result.trace_csv()).map_err(|e| io(&tp, e))?;
    Ok(RunOutcome { record, warnings })
}

/// Runs every spec on up to `jobs` worker threads. Results keep the input
/// order.
pub fn run_batch(specs: &[ExperimentSpec], jobs: usize) -> Vec<Result<RunOutcome>> {
    let jobs = jobs.max(1).min(specs.len().max(1));
    let next = std::sync::atomic::AtomicUsize::new(0);
    let mut slots: Vec<Option<Result<RunOutcome>>> = (0..specs.len()).map(|_| None).collect();
    let finished = std::sync::Mutex::new(Vec::new());
    std::thread::scope(|s| {
        for _ in 0..jobs {
            s.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                let Some(spec) = specs.get(i) else { break };
                let out = run_experiment(spec);
                finished.lock().expect("worker panicked").push((i, out));
            });
        }
    });
    for (i, out) in finished.into_inner().expect("worker panicked") {
        slots[i] = Some(out);
    }
    slots
        .into_iter()
        .map(|o| o.expect("every spec is claimed by a worker"))
        .collect()
}

/// Reference energies keyed by experiment name.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ReferenceValues {
    pub energies: BTreeMap<String, f64>,
}

impl ReferenceValues {
    pub fn load(path: &Path) -> Result<Self> {
        let text =
            fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))
    }
}

/// Every `*.json` record in `dir`, sorted by file name.
pub fn load_records(dir: &Path) -> Result<Vec<ExperimentRecord>> {
    let entries = fs::read_dir(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    let mut out = Vec::with_capacity(paths.len());
    for p in paths {
        let text =
            fs::read_to_string(&p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
        out.push(
            ExperimentRecord::from_json(&text).map_err(|e| e.context(p.display().to_string()))?,
        );
    }
    if out.is_empty() {
        return Err(Error::InvalidConfig(format!(
            "no records found in {}",
            dir.display()
        )));
    }
    Ok(out)
}

/// Aligned summary table, one row per record. With `reference`, a column
/// holds the reference energy for each record name.
pub fn report(records: &[ExperimentRecord], reference: Option<&ReferenceValues>) -> String {
    let mut header = vec!["name", "energy", "expected", "error %", "evals", "wall s"];
    if reference.is_some() {
        header.push("reference");
    }
    let mut rows: Vec<Vec<String>> = vec![header.iter().map(|s| s.to_string()).collect()];
    for r in records {
        let opt =
            |v: Option<f64>, digits: usize| v.map_or(String::new(), |x| format!("{x:.digits$}"));
        let mut row = vec![
            r.spec.name.clone(),
            format!("{:.8}", r.computed_energy),
            opt(r.expected_energy, 8),
            opt(r.relative_error_pct, 5),
            r.evaluations.to_string(),
            format!("{:.2}", r.wall_seconds),
        ];
        if let Some(refs) = reference {
            row.push(opt(refs.energies.get(&r.spec.name).copied(), 8));
        }
        rows.push(row);
    }
    let widths: Vec<usize> = (0..rows[0].len())
        .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in &rows {
        let cells: Vec<String> = row
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(i, (cell, w))| {
                if i == 0 {
                    format!("{cell:<w$}")
                } else {
                    format!("{cell:>w$}")
                }
            })
            .collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub num_qubits: usize,
    pub wall_seconds: f64,
    pub peak_state_memory: usize,
    pub ground_energy: f64,
}

/// Times the classical solver on periodic Heisenberg rings of
/// `min_qubits..=max_qubits` sites in increments of `step`, always using the
/// iterative path.
pub fn bench_solver(min_qubits: usize, max_qubits: usize, step: usize) -> Result<Vec<BenchRow>> {
    if min_qubits < 3 || min_qubits > max_qubits || step == 0 {
        return Err(Error::InvalidConfig(format!(
            "need 3 <= min <= max and step >= 1, got {min_qubits}..={max_qubits} by {step}"
        )));
    }
    let mut rows = Vec::new();
    for n in (min_qubits..=max_qubits).step_by(step) {
        let ring = line_lattice(n, true, 1.0)?;
        let h = get_hamiltonian(&Model::heisenberg(), &ring, 1.0)?;
        let start = Instant::now();
        let r = crate::solver::solve_iterative(&h, SOLVER_TOL, SOLVER_MAX_ITER, 0)?;
        rows.push(BenchRow {
            num_qubits: n,
            wall_seconds: start.elapsed().as_secs_f64(),
            peak_state_memory: r.peak_state_bytes,
            ground_energy: r.ground_energy,
        });
    }
    Ok(rows)
}

pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from("num_qubits,wall_seconds,peak_state_memory\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{}\n",
            r.num_qubits, r.wall_seconds, r.peak_state_memory
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const RING: &str = r#"
[[experiments]]
name = "ring6"
model = { type = "heisenberg" }
lattice = { kind = "line", n = 6, periodic = true }
ansatz = { reps = 2, entanglement = "linear" }
optimizer = { max_iter = 30 }
expected = { source = "classical" }
seed = 3
"#;

    #[test]
    fn parses_minimal_config() {
        let cfg = ConfigFile::parse(RING).unwrap();
        let e = &cfg.experiments[0];
        assert_eq!(e.lattice.weight, 1.0);
        assert_eq!(e.guidance, GuidanceSpec::default());
        assert_eq!(e.estimator, EstimatorConfig::exact());
        assert_eq!(e.expected, ExpectedSource::Classical { particles: None });
        assert!(e.unguided_on_solver_failure);
        assert_eq!(e.lattice.build().unwrap().num_edges(), 6);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(ConfigFile::parse("experiments = []").is_err());
        let dup = format!("{RING}\n{}", RING.replace("seed = 3", "seed = 4"));
        assert!(ConfigFile::parse(&dup).is_err());
        assert!(ConfigFile::parse(&RING.replace("ring6", "../x")).is_err());
        assert!(ConfigFile::parse(&RING.replace("reps = 2", "reps = 2, extra = 1")).is_err());
    }

    #[test]
    fn noise_and_expected_flags() {
        let n = parse_noise("readout=0.05,cx=0.2").unwrap();
        assert_eq!((n.readout_flip_prob, n.cx_depolarizing_prob), (0.05, 0.2));
        assert_eq!(parse_noise("cx=0.1").unwrap().readout_flip_prob, 0.02);
        assert!(parse_noise("gate=0.1").is_err());
        assert_eq!(
            "none".parse::<ExpectedOverride>(),
            Ok(ExpectedOverride::None)
        );
        assert_eq!(
            "-18".parse::<ExpectedOverride>(),
            Ok(ExpectedOverride::Value(-18.0))
        );
        assert!("abc".parse::<ExpectedOverride>().is_err());
    }

    #[test]
    fn overrides_apply() {
        let mut e = ConfigFile::parse(RING).unwrap().experiments.remove(0);
        Overrides {
            seed: Some(9),
            shots: Some(128),
            noise: Some(NoiseModel::default()),
            reps: Some(1),
            max_iter: Some(7),
            expected: Some(ExpectedOverride::Value(-1.0)),
            output: Some("out".into()),
        }
        .apply(&mut e);
        assert_eq!(e.seed, 9);
        assert_eq!(e.estimator.seed, 9);
        assert_eq!(e.estimator.mode, EstimatorMode::Shots { shots: 128 });
        assert_eq!(e.ansatz.reps, 1);
        assert_eq!(e.optimizer.max_iter, 7);
        assert_eq!(e.expected, ExpectedSource::Explicit { value: -1.0 });
        assert_eq!(e.record_path(), PathBuf::from("out/ring6.json"));
    }

    #[test]
    fn report_blanks_missing_fields() {
        let spec = ConfigFile::parse(RING).unwrap().experiments.remove(0);
        let rec = ExperimentRecord {
            spec,
            toolkit_version: TOOLKIT_VERSION.into(),
            computed_energy: -11.0,
            expected_energy: None,
            relative_error_pct: None,
            wall_seconds: 0.5,
            evaluations: 12,
            recursions_used: 0,
            task_done: false,
            final_weight: 1.6,
            thetas: vec![],
            seed: 3,
            solver_converged: None,
        };
        let t = report(&[rec], None);
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].starts_with("name"));
        assert!(lines[1].starts_with("ring6"));
        assert!(lines[1].contains("-11.00000000"));
        assert!(!lines[1].contains("NaN"));
    }
}
