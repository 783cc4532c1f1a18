//! Statevector simulation and energy estimation.
//!
//! The estimator runs either exactly (`⟨ψ|H|ψ⟩` on the simulated state) or
//! by sampling: every Pauli term is measured separately in its own rotated
//! basis. Optional noise flips readout bits and, per shot, inserts a
//! uniformly random two-qubit Pauli after a CX with the configured
//! probability.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{Angle, Circuit, Gate};
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString, PauliSum, STATE_TOL};

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn zero_state(num_qubits: usize) -> Self {
        let mut amps = vec![Complex64::default(); 1 << num_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        StateVector { num_qubits, amps }
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let n = amps.len().trailing_zeros() as usize;
        if amps.is_empty() || amps.len() != 1 << n {
            return Err(Error::StateLength {
                got: amps.len(),
                num_qubits: n,
            });
        }
        let s = StateVector {
            num_qubits: n,
            amps,
        };
        let norm = s.norm();
        if (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::Unnormalized(norm));
        }
        Ok(s)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `|⟨self|other⟩|`; 1 means equal up to global phase.
    pub fn overlap(&self, other: &StateVector) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .norm()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Applies the 2×2 matrix `[[m00, m01], [m10, m11]]` to qubit `q`.
    fn apply_1q(&mut self, q: usize, m: [Complex64; 4]) {
        let bit = 1usize << q;
        let dim = self.amps.len();
        for block in (0..dim).step_by(bit << 1) {
            for i in block..block + bit {
                let (a0, a1) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = m[0] * a0 + m[1] * a1;
                self.amps[i | bit] = m[2] * a0 + m[3] * a1;
            }
        }
    }

    pub fn ry(&mut self, q: usize, theta: f64) {
        let (s, c) = (theta / 2.0).sin_cos();
        let (c, s) = (Complex64::new(c, 0.0), Complex64::new(s, 0.0));
        self.apply_1q(q, [c, -s, s, c]);
    }

    pub fn rz(&mut self, q: usize, theta: f64) {
        let bit = 1usize << q;
        let lo = Complex64::from_polar(1.0, -theta / 2.0);
        let hi = Complex64::from_polar(1.0, theta / 2.0);
        for (i, a) in self.amps.iter_mut().enumerate() {
            *a *= if i & bit == 0 { lo } else { hi };
        }
    }

    pub fn cx(&mut self, control: usize, target: usize) {
        let (cb, tb) = (1usize << control, 1usize << target);
        for i in 0..self.amps.len() {
            if i & cb != 0 && i & tb == 0 {
                self.amps.swap(i, i | tb);
            }
        }
    }

    pub fn hadamard(&mut self, q: usize) {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        self.apply_1q(q, [h, h, h, -h]);
    }

    /// `S† = diag(1, -i)`.
    pub fn s_dagger(&mut self, q: usize) {
        let bit = 1usize << q;
        let mi = Complex64::new(0.0, -1.0);
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & bit != 0 {
                *a *= mi;
            }
        }
    }

    pub fn pauli(&mut self, q: usize, p: Pauli) {
        let (o, z, i) = (
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
        );
        match p {
            Pauli::I => {}
            Pauli::X => self.apply_1q(q, [o, z, z, o]),
            Pauli::Y => self.apply_1q(q, [o, -i, i, o]),
            Pauli::Z => self.apply_1q(q, [z, o, o, -z]),
        }
    }

    /// Rotates so that a Z-basis measurement of `support(p)` samples `p`.
    fn rotate_to_basis(&mut self, p: &PauliString) {
        for q in 0..p.num_qubits() {
            match p.get(q) {
                Pauli::X => self.hadamard(q),
                Pauli::Y => {
                    self.s_dagger(q);
                    self.hadamard(q);
                }
                _ => {}
            }
        }
    }
}

fn bind(angle: Angle, params: &[f64]) -> f64 {
    match angle {
        Angle::Param(p) => params[p],
        Angle::Fixed(x) => x,
    }
}

/// Pauli pair inserted after the CX at a given gate index.
type CxFault = (usize, Pauli, Pauli);

fn run_with_faults(c: &Circuit, params: &[f64], faults: &[CxFault]) -> Result<StateVector> {
    c.check_params(params)?;
    let mut psi = StateVector::zero_state(c.num_qubits());
    let mut pending = faults.iter().peekable();
    for (k, g) in c.gates().iter().enumerate() {
        match *g {
            Gate::Ry { qubit, angle } => psi.ry(qubit, bind(angle, params)),
            Gate::Rz { qubit, angle } => psi.rz(qubit, bind(angle, params)),
            Gate::Cx { control, target } => {
                psi.cx(control, target);
                while let Some(&&(idx, pc, pt)) = pending.peek() {
                    if idx != k {
                        break;
                    }
                    psi.pauli(control, pc);
                    psi.pauli(target, pt);
                    pending.next();
                }
            }
        }
    }
    Ok(psi)
}

/// `U(params)|0…0⟩`.
pub fn run_circuit(c: &Circuit, params: &[f64]) -> Result<StateVector> {
    run_with_faults(c, params, &[])
}

/// Per-gate error rates. The defaults (2% readout, 1% per CX) are
/// illustrative device-scale figures, not a calibration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    #[serde(rename = "readout")]
    pub readout_flip_prob: f64,
    #[serde(rename = "cx")]
    pub cx_depolarizing_prob: f64,
}

impl Default for NoiseModel {
    fn default() -> Self {
        NoiseModel {
            readout_flip_prob: 0.02,
            cx_depolarizing_prob: 0.01,
        }
    }
}

impl NoiseModel {
    fn validate(&self) -> Result<()> {
        for (name, p) in [
            ("readout", self.readout_flip_prob),
            ("cx", self.cx_depolarizing_prob),
        ] {
            if !(0.0..1.0).contains(&p) {
                return Err(Error::InvalidConfig(format!(
                    "{name} probability {p} outside [0, 1)"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum EstimatorMode {
    Exact,
    Shots { shots: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimatorConfig {
    #[serde(flatten)]
    pub mode: EstimatorMode,
    #[serde(default)]
    pub noise: Option<NoiseModel>,
    #[serde(default)]
    pub seed: u64,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        EstimatorConfig {
            mode: EstimatorMode::Exact,
            noise: None,
            seed: 0,
        }
    }
}

impl EstimatorConfig {
    pub fn exact() -> Self {
        Self::default()
    }

    pub fn shots(shots: usize, seed: u64) -> Self {
        EstimatorConfig {
            mode: EstimatorMode::Shots { shots },
            noise: None,
            seed,
        }
    }

    pub fn with_noise(mut self, noise: NoiseModel) -> Self {
        self.noise = Some(noise);
        self
    }

    pub fn validate(&self) -> Result<()> {
        match self.mode {
            EstimatorMode::Exact if self.noise.is_some() => {
                Err(Error::InvalidConfig("noise requires shots mode".into()))
            }
            EstimatorMode::Shots { shots: 0 } => {
                Err(Error::InvalidConfig("shot count must be >= 1".into()))
            }
            _ => self.noise.as_ref().map_or(Ok(()), NoiseModel::validate),
        }
    }
}

/// Anything that can price a bound ansatz against a Hamiltonian.
pub trait EnergyEstimator {
    fn estimate(&mut self, circuit: &Circuit, h: &PauliSum, params: &[f64]) -> Result<f64>;
}

/// Statevector-backed estimator with its own seeded random stream.
#[derive(Debug, Clone)]
pub struct Estimator {
    cfg: EstimatorConfig,
    rng: ChaCha8Rng,
}

impl Estimator {
    pub fn new(cfg: EstimatorConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Estimator {
            cfg,
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        })
    }

    pub fn config(&self) -> &EstimatorConfig {
        &self.cfg
    }

    fn sample_faults(&mut self, c: &Circuit, p: f64) -> Vec<CxFault> {
        const PAULIS: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
        let mut faults = Vec::new();
        if p == 0.0 {
            return faults;
        }
        for (k, g) in c.gates().iter().enumerate() {
            if matches!(g, Gate::Cx { .. }) && self.rng.gen::<f64>() < p {
                let r = self.rng.gen_range(0..16);
                faults.push((k, PAULIS[r % 4], PAULIS[r / 4]));
            }
        }
        faults
    }

    fn sample_index(&mut self, cdf: &[f64]) -> usize {
        let total = *cdf.last().expect("nonempty distribution");
        let r = self.rng.gen::<f64>() * total;
        cdf.partition_point(|&x| x <= r).min(cdf.len() - 1)
    }

    fn shots_estimate(
        &mut self,
        c: &Circuit,
        h: &PauliSum,
        params: &[f64],
        shots: usize,
    ) -> Result<f64> {
        let noise = self.cfg.noise.unwrap_or(NoiseModel {
            readout_flip_prob: 0.0,
            cx_depolarizing_prob: 0.0,
        });
        let ideal = run_circuit(c, params)?;
        let mut total = 0.0;
        for (p, coeff) in h.terms() {
            if p.is_identity() {
                total += coeff.re;
                continue;
            }
            let mut rotated = ideal.clone();
            rotated.rotate_to_basis(p);
            let cdf = cumulative(&rotated.probabilities());
            let support = p.support() as usize;
            let mut sum = 0i64;
            for _ in 0..shots {
                let faults = self.sample_faults(c, noise.cx_depolarizing_prob);
                let mut bits = if faults.is_empty() {
                    self.sample_index(&cdf)
                } else {
                    let mut noisy = run_with_faults(c, params, &faults)?;
                    noisy.rotate_to_basis(p);
                    let noisy_cdf = cumulative(&noisy.probabilities());
                    self.sample_index(&noisy_cdf)
                };
                if noise.readout_flip_prob > 0.0 {
                    for q in 0..p.num_qubits() {
                        if support >> q & 1 == 1 && self.rng.gen::<f64>() < noise.readout_flip_prob
                        {
                            bits ^= 1 << q;
                        }
                    }
                }
                sum += if (bits & support).count_ones() % 2 == 1 {
                    -1
                } else {
                    1
                };
            }
            total += coeff.re * sum as f64 / shots as f64;
        }
        Ok(total)
    }
}

fn cumulative(probs: &[f64]) -> Vec<f64> {
    probs
        .iter()
        .scan(0.0, |acc, p| {
            *acc += p;
            Some(*acc)
        })
        .collect()
}

impl EnergyEstimator for Estimator {
    fn estimate(&mut self, c: &Circuit, h: &PauliSum, params: &[f64]) -> Result<f64> {
        if h.num_qubits() != c.num_qubits() {
            return Err(Error::QubitMismatch {
                left: c.num_qubits(),
                right: h.num_qubits(),
            });
        }
        if !h.is_hermitian() {
            return Err(Error::NonHermitian);
        }
        match self.cfg.mode {
            EstimatorMode::Exact => h.expectation(run_circuit(c, params)?.amplitudes()),
            EstimatorMode::Shots { shots } => self.shots_estimate(c, h, params, shots),
        }
    }
}

/// One-off estimate with a fresh generator seeded from `cfg`.
pub fn estimate(c: &Circuit, h: &PauliSum, params: &[f64], cfg: &EstimatorConfig) -> Result<f64> {
    Estimator::new(*cfg)?.estimate(c, h, params)
}
