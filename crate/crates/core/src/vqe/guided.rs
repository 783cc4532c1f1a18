//! Target-guided VQE.
//!
//! Given a classically computed target energy, the run steers the uniform
//! interaction (`weight`) of the Hamiltonian:
//!
//! * during optimization, a value that undershoots the target by more than
//!   `delta_trigger` (in absolute magnitude) lowers the weight by `bias_step`,
//!   as long as `|weight| > weight_floor`. The rebuilt operator is swapped in
//!   by the *following* evaluation, after that evaluation's own estimate, so
//!   it prices from the one after;
//! * once a value lands within `threshold_pct` of the target the run is
//!   done, and further objective calls return the last value unmeasured;
//! * after an optimizer pass that missed the threshold, the weight moves by
//!   `|Δ|/100 + recursion_base_step` (up when `Δ < 0`, down otherwise) and
//!   the optimization restarts, at most `max_recursions` times.
//!
//! `Δ = |value| − |expected|`. The reported energy belongs to the operator
//! at the final weight; both are recorded so the bias stays auditable.

use std::f64::consts::FRAC_PI_4;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::nft::{nft_minimize, NftOptions, Objective};
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::hamiltonians::{get_hamiltonian, Model};
use crate::lattice::LatticeGraph;
use crate::pauli::PauliSum;
use crate::sim::{EnergyEstimator, Estimator, EstimatorConfig};

/// `|value − expected| / |expected|` as a fraction.
pub fn compute_relative_error(expected: f64, value: f64) -> Result<f64> {
    if expected == 0.0 {
        return Err(Error::ZeroReference);
    }
    Ok((value - expected).abs() / expected.abs())
}

/// Starting point used when a recursion restarts the optimizer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WarmStart {
    /// Reuse the pass's original starting point.
    #[default]
    InitialPoint,
    /// Continue from the pass's optimized point.
    FinalPoint,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GuidedVqeConfig {
    pub model: Model,
    pub lattice: LatticeGraph,
    pub expected_energy: Option<f64>,
    pub threshold_pct: f64,
    pub initial_weight: f64,
    pub bias_step: f64,
    pub delta_trigger: f64,
    pub weight_floor: f64,
    pub max_recursions: usize,
    pub recursion_base_step: f64,
    pub optimizer_max_iter: usize,
    /// NFT cache refresh interval; `None` refreshes once per sweep.
    pub nft_reset_interval: Option<usize>,
    pub estimator: EstimatorConfig,
    pub seed: u64,
    pub warm_start: WarmStart,
    /// Explicit starting angles; drawn as `π/4 · U[0,1)` when absent.
    pub initial_point: Option<Vec<f64>>,
}

impl GuidedVqeConfig {
    pub fn new(model: Model, lattice: LatticeGraph) -> Self {
        GuidedVqeConfig {
            model,
            lattice,
            expected_energy: None,
            threshold_pct: 1.0,
            initial_weight: 1.6,
            bias_step: 0.25,
            delta_trigger: 10.0,
            weight_floor: 1.0,
            max_recursions: 5,
            recursion_base_step: 0.3,
            optimizer_max_iter: 100,
            nft_reset_interval: None,
            estimator: EstimatorConfig::exact(),
            seed: 0,
            warm_start: WarmStart::InitialPoint,
            initial_point: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.threshold_pct.is_nan() || self.threshold_pct <= 0.0 {
            return Err(Error::InvalidConfig("threshold_pct must be > 0".into()));
        }
        self.estimator.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub eval: usize,
    pub energy: f64,
    /// Weight of the Hamiltonian this value was measured against.
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VqeResult {
    pub value: f64,
    pub thetas: Vec<f64>,
    /// `100 · relative error`; absent without a (nonzero) target.
    pub relative_error_pct: Option<f64>,
    pub recursions_used: usize,
    /// Fresh estimator calls; equals `trace.len()`.
    pub evaluations: usize,
    pub task_done: bool,
    pub trace: Vec<TracePoint>,
    pub final_weight: f64,
    /// Starting angles of the first optimizer pass.
    pub initial_point: Vec<f64>,
    /// Hamiltonian rebuilds after initialization.
    pub rebuilds: usize,
}

impl VqeResult {
    /// Trace as CSV with header `eval,energy,weight`.
    pub fn trace_csv(&self) -> String {
        let mut out = String::from("eval,energy,weight\n");
        for p in &self.trace {
            out.push_str(&format!("{},{},{}\n", p.eval, p.energy, p.weight));
        }
        out
    }
}

pub type Callback<'a> = &'a mut dyn FnMut(usize, f64);

struct GuidedObjective<'a, 'c, E: ?Sized> {
    cfg: &'a GuidedVqeConfig,
    ansatz: &'a Circuit,
    estimator: &'a mut E,
    callback: Option<Callback<'c>>,
    ham: PauliSum,
    ham_weight: f64,
    weight: f64,
    fix_hamiltonian: bool,
    task_done: bool,
    last_value: f64,
    trace: Vec<TracePoint>,
    rebuilds: usize,
}

impl<E: EnergyEstimator + ?Sized> GuidedObjective<'_, '_, E> {
    fn rebuild(&mut self) -> Result<()> {
        self.ham = get_hamiltonian(&self.cfg.model, &self.cfg.lattice, self.weight)?;
        self.ham_weight = self.weight;
        self.rebuilds += 1;
        Ok(())
    }
}

impl<E: EnergyEstimator + ?Sized> Objective for GuidedObjective<'_, '_, E> {
    fn evaluate(&mut self, thetas: &[f64]) -> Result<f64> {
        if self.task_done {
            return Ok(self.last_value);
        }
        let index = self.trace.len();
        let used_weight = self.ham_weight;
        let value = self
            .estimator
            .estimate(self.ansatz, &self.ham, thetas)
            .map_err(|e| e.context(format!("evaluation {index} at weight {used_weight}")))?;

        if self.fix_hamiltonian {
            self.rebuild()?;
            self.fix_hamiltonian = false;
        }
        self.last_value = value;

        if let Some(expected) = self.cfg.expected_energy {
            if value < expected {
                let delta = value.abs() - expected.abs();
                if delta > self.cfg.delta_trigger && self.weight.abs() > self.cfg.weight_floor {
                    self.weight -= self.cfg.bias_step;
                    self.fix_hamiltonian = true;
                }
            }
            if expected != 0.0 {
                let err = 100.0 * compute_relative_error(expected, value)?;
                if err <= self.cfg.threshold_pct {
                    self.task_done = true;
                }
            }
        }

        self.trace.push(TracePoint {
            eval: index,
            energy: value,
            weight: used_weight,
        });
        if let Some(cb) = self.callback.as_mut() {
            cb(index, value);
        }
        Ok(value)
    }

    fn is_done(&self) -> bool {
        self.task_done
    }
}

/// Guided VQE with the statevector estimator described by `cfg.estimator`.
pub fn guided_vqe(
    cfg: &GuidedVqeConfig,
    ansatz: &Circuit,
    callback: Option<Callback<'_>>,
) -> Result<VqeResult> {
    let mut estimator = Estimator::new(cfg.estimator)?;
    guided_vqe_with(cfg, ansatz, &mut estimator, callback)
}

/// Guided VQE against any [`EnergyEstimator`].
pub fn guided_vqe_with<E: EnergyEstimator + ?Sized>(
    cfg: &GuidedVqeConfig,
    ansatz: &Circuit,
    estimator: &mut E,
    callback: Option<Callback<'_>>,
) -> Result<VqeResult> {
    cfg.validate()?;
    let width = cfg.model.num_qubits(&cfg.lattice);
    if ansatz.num_qubits() != width {
        return Err(Error::QubitMismatch {
            left: ansatz.num_qubits(),
            right: width,
        });
    }
    let num_params = ansatz.num_parameters();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut initial_point = match &cfg.initial_point {
        Some(p) => {
            ansatz.check_params(p)?;
            Some(p.clone())
        }
        None => None,
    };
    let nft_opts = NftOptions {
        max_iter: cfg.optimizer_max_iter,
        reset_interval: cfg.nft_reset_interval,
        final_evaluation: true,
    };

    let mut obj = GuidedObjective {
        cfg,
        ansatz,
        estimator,
        callback,
        ham: get_hamiltonian(&cfg.model, &cfg.lattice, cfg.initial_weight)?,
        ham_weight: cfg.initial_weight,
        weight: cfg.initial_weight,
        fix_hamiltonian: false,
        task_done: false,
        last_value: f64::NAN,
        trace: Vec::new(),
        rebuilds: 0,
    };

    let mut recursions = 0;
    let mut first_x0: Option<Vec<f64>> = None;
    let result = loop {
        let x0 = initial_point.take().unwrap_or_else(|| {
            (0..num_params)
                .map(|_| FRAC_PI_4 * rng.gen::<f64>())
                .collect()
        });
        first_x0.get_or_insert_with(|| x0.clone());
        let result = nft_minimize(&mut obj, &x0, &nft_opts)?;

        let Some(expected) = cfg.expected_energy.filter(|e| *e != 0.0) else {
            break result;
        };
        let delta = result.value.abs() - expected.abs();
        let err = 100.0 * compute_relative_error(expected, result.value)?;
        if err > cfg.threshold_pct && recursions < cfg.max_recursions && !obj.task_done {
            recursions += 1;
            let step = delta.abs() / 100.0 + cfg.recursion_base_step;
            if delta < 0.0 {
                obj.weight += step;
            } else {
                obj.weight -= step;
            }
            obj.rebuild()?;
            initial_point = Some(match cfg.warm_start {
                WarmStart::InitialPoint => x0,
                WarmStart::FinalPoint => result.x.clone(),
            });
            continue;
        }
        break result;
    };

    let relative_error_pct = match cfg.expected_energy {
        Some(e) if e != 0.0 => Some(100.0 * compute_relative_error(e, result.value)?),
        _ => None,
    };
    Ok(VqeResult {
        value: result.value,
        thetas: result.x,
        relative_error_pct,
        recursions_used: recursions,
        evaluations: obj.trace.len(),
        task_done: obj.task_done,
        final_weight: obj.weight,
        initial_point: first_x0.unwrap_or_default(),
        rebuilds: obj.rebuilds,
        trace: obj.trace,
    })
}
