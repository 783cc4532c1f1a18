//! Independent dense oracles shared by the integration tests. Nothing here
//! goes through the crate's own matrix or simulator code.

#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use lattice_vqe::circuit::{Angle, Circuit, Gate};
use lattice_vqe::fermion::FermionicOp;
use lattice_vqe::lattice::LatticeGraph;
use lattice_vqe::pauli::{PauliString, PauliSum};
use lattice_vqe::sim::EnergyEstimator;

pub type CMat = DMatrix<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn single(ch: char) -> CMat {
    let (o, l, i) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
    let e = match ch {
        'I' => [l, o, o, l],
        'X' => [o, l, l, o],
        'Y' => [o, -i, i, o],
        'Z' => [l, o, o, -l],
        _ => panic!("bad Pauli {ch}"),
    };
    DMatrix::from_row_slice(2, 2, &e)
}

/// Label character `k` acts on qubit `k`, which is bit `k` of the basis
/// index, so the leftmost character is the least significant factor.
pub fn dense_label(label: &str) -> CMat {
    label
        .chars()
        .fold(DMatrix::identity(1, 1), |acc: CMat, ch| {
            single(ch).kronecker(&acc)
        })
}

pub fn dense_sum(h: &PauliSum) -> CMat {
    let dim = 1 << h.num_qubits();
    let mut m = CMat::zeros(dim, dim);
    for (p, coeff) in h.terms() {
        m += dense_label(&p.label()) * *coeff;
    }
    m
}

fn gate_1q(n: usize, q: usize, g: &CMat) -> CMat {
    (0..n).fold(DMatrix::identity(1, 1), |acc: CMat, k| {
        let f = if k == q { g.clone() } else { single('I') };
        f.kronecker(&acc)
    })
}

pub fn ry_matrix(theta: f64) -> CMat {
    let (s, co) = (theta / 2.0).sin_cos();
    DMatrix::from_row_slice(2, 2, &[c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0)])
}

pub fn rz_matrix(theta: f64) -> CMat {
    DMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::from_polar(1.0, -theta / 2.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            Complex64::from_polar(1.0, theta / 2.0),
        ],
    )
}

fn cx_matrix(n: usize, control: usize, target: usize) -> CMat {
    let dim = 1 << n;
    CMat::from_fn(dim, dim, |r, col| {
        let image = if col >> control & 1 == 1 {
            col ^ (1 << target)
        } else {
            col
        };
        if r == image {
            c(1.0, 0.0)
        } else {
            c(0.0, 0.0)
        }
    })
}

/// Unitary of a bound circuit, built from Kronecker products.
pub fn dense_unitary(circ: &Circuit, params: &[f64]) -> CMat {
    let n = circ.num_qubits();
    let bind = |a: Angle| match a {
        Angle::Param(p) => params[p],
        Angle::Fixed(x) => x,
    };
    circ.gates()
        .iter()
        .fold(CMat::identity(1 << n, 1 << n), |u, g| {
            let m = match *g {
                Gate::Ry { qubit, angle } => gate_1q(n, qubit, &ry_matrix(bind(angle))),
                Gate::Rz { qubit, angle } => gate_1q(n, qubit, &rz_matrix(bind(angle))),
                Gate::Cx { control, target } => cx_matrix(n, control, target),
            };
            m * u
        })
}

pub fn dense_state(circ: &Circuit, params: &[f64]) -> Vec<Complex64> {
    dense_unitary(circ, params)
        .column(0)
        .iter()
        .copied()
        .collect()
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn spectrum(m: &CMat) -> Vec<f64> {
    let mut v: Vec<f64> = m
        .clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .collect();
    v.sort_by(f64::total_cmp);
    v
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub fn random_label(rng: &mut impl Rng, n: usize) -> String {
    (0..n)
        .map(|_| ['I', 'X', 'Y', 'Z'][rng.gen_range(0..4)])
        .collect()
}

/// Random Hermitian Pauli sum with `terms` real-weighted strings.
pub fn random_hermitian(rng: &mut impl Rng, n: usize, terms: usize) -> PauliSum {
    let labels: Vec<String> = (0..terms).map(|_| random_label(rng, n)).collect();
    let pairs: Vec<(&str, f64)> = labels
        .iter()
        .map(|l| (l.as_str(), rng.gen_range(-2.0..2.0)))
        .collect();
    PauliSum::from_labels(&pairs).unwrap()
}

pub fn random_state(rng: &mut impl Rng, n: usize) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = (0..1usize << n)
        .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|a| *a /= norm);
    v
}

/// Occupation-number matrix of `Σ coeff · f_0 f_1 ⋯` built by acting on
/// Fock states directly: `c†_p |n⟩ = (−1)^{Σ_{j<p} n_j} |n + e_p⟩`.
pub fn fock_matrix(op: &FermionicOp) -> CMat {
    let modes = op.num_modes();
    let dim = 1usize << modes;
    let mut m = CMat::zeros(dim, dim);
    for col in 0..dim {
        for (coeff, factors) in op.terms() {
            let mut state = Some((col, 1.0f64));
            for f in factors.iter().rev() {
                state = state.and_then(|(s, sign)| {
                    let occupied = s >> f.mode & 1 == 1;
                    if occupied == f.dagger {
                        return None;
                    }
                    let below = (s & ((1 << f.mode) - 1)).count_ones();
                    let sign = if below % 2 == 1 { -sign } else { sign };
                    Some((s ^ (1 << f.mode), sign))
                });
            }
            if let Some((row, sign)) = state {
                m[(row, col)] += coeff * sign;
            }
        }
    }
    m
}

/// Hubbard Hamiltonian assembled straight in the Fock basis, block layout.
pub fn hubbard_fock(lattice: &LatticeGraph, t: f64, u: f64) -> CMat {
    let sites = lattice.num_vertices();
    let dim = 1usize << (2 * sites);
    let mut m = CMat::zeros(dim, dim);
    let hop = |s: usize, from: usize, to: usize| -> Option<(usize, f64)> {
        if s >> from & 1 == 0 || s >> to & 1 == 1 {
            return None;
        }
        let after = s ^ (1 << from);
        let sign_a = (s & ((1 << from) - 1)).count_ones();
        let sign_c = (after & ((1 << to) - 1)).count_ones();
        let sign = if (sign_a + sign_c) % 2 == 1 {
            -1.0
        } else {
            1.0
        };
        Some((after ^ (1 << to), sign))
    };
    for s in 0..dim {
        for e in lattice.edges() {
            for offset in [0, sites] {
                let (a, b) = (e.u + offset, e.v + offset);
                for (from, to) in [(a, b), (b, a)] {
                    if let Some((r, sign)) = hop(s, from, to) {
                        m[(r, s)] += Complex64::new(-t * e.weight * sign, 0.0);
                    }
                }
            }
        }
        let doubles = (0..sites)
            .filter(|i| s >> i & 1 == 1 && s >> (i + sites) & 1 == 1)
            .count();
        m[(s, s)] += Complex64::new(u * doubles as f64, 0.0);
    }
    m
}

/// Random bound circuit biased toward reducible patterns: repeated CX,
/// opposite rotations, zero and full-turn angles.
pub fn random_circuit(rng: &mut impl Rng, n: usize, len: usize) -> (Circuit, Vec<f64>) {
    let mut gates = Vec::new();
    let mut params = Vec::new();
    let special = [0.0, PI, -PI, TAU, 2.0 * TAU, 1e-14];
    while gates.len() < len {
        match rng.gen_range(0..10) {
            0..=3 if n >= 2 => {
                let control = rng.gen_range(0..n);
                let mut target = rng.gen_range(0..n - 1);
                if target >= control {
                    target += 1;
                }
                let g = Gate::Cx { control, target };
                gates.push(g);
                if rng.gen_bool(0.3) {
                    gates.push(g);
                }
            }
            k => {
                let qubit = rng.gen_range(0..n);
                let theta = if rng.gen_bool(0.2) {
                    special[rng.gen_range(0..special.len())]
                } else {
                    rng.gen_range(-TAU..TAU)
                };
                let push =
                    |theta: f64, fixed: bool, gates: &mut Vec<Gate>, params: &mut Vec<f64>| {
                        let angle = if fixed {
                            Angle::Fixed(theta)
                        } else {
                            params.push(theta);
                            Angle::Param(params.len() - 1)
                        };
                        gates.push(if k % 2 == 0 {
                            Gate::Ry { qubit, angle }
                        } else {
                            Gate::Rz { qubit, angle }
                        });
                    };
                push(theta, rng.gen_bool(0.2), &mut gates, &mut params);
                if rng.gen_bool(0.25) {
                    push(-theta, rng.gen_bool(0.2), &mut gates, &mut params);
                }
            }
        }
    }
    (Circuit::new(n, gates).unwrap(), params)
}

/// Largest entrywise difference after aligning global phase.
pub fn phase_aligned_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    let inner: Complex64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
    let phase = if inner.norm() > 0.0 {
        inner / inner.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    a.iter()
        .zip(b)
        .map(|(x, y)| (x * phase - y).norm())
        .fold(0.0, f64::max)
}

/// Replays `values` (repeating the last one) and records the weight of
/// every Hamiltonian it is asked to price, read off the XX coefficient on
/// qubits 0 and 1.
pub struct Scripted {
    pub values: Vec<f64>,
    pub calls: usize,
    pub weights: Vec<f64>,
    pub params: Vec<Vec<f64>>,
}

impl Scripted {
    pub fn new(values: &[f64]) -> Self {
        Scripted {
            values: values.to_vec(),
            calls: 0,
            weights: Vec::new(),
            params: Vec::new(),
        }
    }
}

impl EnergyEstimator for Scripted {
    fn estimate(&mut self, _c: &Circuit, h: &PauliSum, params: &[f64]) -> lattice_vqe::Result<f64> {
        let mut label = vec!['I'; h.num_qubits()];
        label[0] = 'X';
        label[1] = 'X';
        let xx = PauliString::from_label(&label.into_iter().collect::<String>()).unwrap();
        self.weights.push(h.coeff(&xx).re);
        self.params.push(params.to_vec());
        let v = self.values[self.calls.min(self.values.len() - 1)];
        self.calls += 1;
        Ok(v)
    }
}
