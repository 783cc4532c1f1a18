//! Exact ground-state energies: dense diagonalization for small operators
//! and a matrix-free restarted Lanczos iteration for up to 24 qubits.
//!
//! The Lanczos solver touches the Hamiltonian only through
//! [`PauliSum::apply_into`]. Each cycle builds a Krylov basis with full
//! reorthogonalization, extracts the lowest Ritz pair, and restarts from
//! that Ritz vector until `‖Hx − Ex‖ ≤ tol`.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::pauli::{PauliSum, Phase, DENSE_LIMIT};
use crate::sim::StateVector;

/// Largest width accepted by [`solve_iterative`].
pub const ITERATIVE_LIMIT: usize = 24;
/// Memory budget for the stored Krylov basis.
const BASIS_BUDGET_BYTES: usize = 1 << 30;
const MAX_KRYLOV: usize = 64;
const MIN_KRYLOV: usize = 8;

#[derive(Debug, Clone)]
pub struct EigenResult {
    pub ground_energy: f64,
    pub ground_state: Option<StateVector>,
    /// Hamiltonian applications (Lanczos steps); 0 for dense solves.
    pub iterations: usize,
    /// `‖H v − E v‖` for the returned state.
    pub residual: f64,
    pub converged: bool,
    /// Bytes held in state-sized vectors at peak.
    pub peak_state_bytes: usize,
}

fn check_hermitian(h: &PauliSum) -> Result<()> {
    if !h.is_hermitian() {
        return Err(Error::NonHermitian);
    }
    Ok(())
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// `‖H v − e v‖`.
pub fn residual_norm(h: &PauliSum, v: &[Complex64], e: f64) -> Result<f64> {
    let hv = h.apply(v)?;
    Ok(hv
        .iter()
        .zip(v)
        .map(|(a, b)| (a - b * e).norm_sqr())
        .sum::<f64>()
        .sqrt())
}

/// Eigenvalues (ascending) and eigenvectors of a Hermitian dense matrix.
/// Purely real matrices take the real symmetric path.
fn hermitian_eigen(m: DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let is_real = m.iter().all(|c| c.im == 0.0);
    let (values, vectors): (Vec<f64>, DMatrix<Complex64>) = if is_real {
        let eig = m.map(|c| c.re).symmetric_eigen();
        (
            eig.eigenvalues.iter().copied().collect(),
            eig.eigenvectors.map(|x| Complex64::new(x, 0.0)),
        )
    } else {
        let eig = m.symmetric_eigen();
        (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
    };
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let sorted = order.iter().map(|&i| values[i]).collect();
    let cols: Vec<_> = order
        .iter()
        .map(|&i| vectors.column(i).into_owned())
        .collect();
    (sorted, DMatrix::from_columns(&cols))
}

/// Full spectrum, ascending.
pub fn dense_spectrum(h: &PauliSum) -> Result<Vec<f64>> {
    check_hermitian(h)?;
    Ok(hermitian_eigen(h.to_dense()?).0)
}

/// Spectrum restricted to computational basis states with `particles` ones.
/// Meaningful for number-conserving operators such as JW-mapped Hubbard
/// models. The sector block is assembled directly, so only its own
/// dimension (at most `2^DENSE_LIMIT`) is bounded.
pub fn sector_spectrum(h: &PauliSum, particles: u32) -> Result<Vec<f64>> {
    check_hermitian(h)?;
    let n = h.num_qubits();
    if n > ITERATIVE_LIMIT {
        return Err(Error::TooLarge {
            what: "sector solver",
            limit: ITERATIVE_LIMIT,
            got: n,
        });
    }
    let idx: Vec<usize> = (0..1usize << n)
        .filter(|i| i.count_ones() == particles)
        .collect();
    if idx.len() > 1 << DENSE_LIMIT {
        return Err(Error::TooLarge {
            what: "sector dimension (log2)",
            limit: DENSE_LIMIT,
            got: idx.len().ilog2() as usize + 1,
        });
    }
    let pos: HashMap<usize, usize> = idx.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let mut sub = DMatrix::<Complex64>::zeros(idx.len(), idx.len());
    for (p, c) in h.terms() {
        let (x, z) = (p.x_mask() as usize, p.z_mask() as usize);
        let base = *c * Phase::from_power((x & z).count_ones()).to_complex();
        for (col, &a) in idx.iter().enumerate() {
            if let Some(&row) = pos.get(&(a ^ x)) {
                let sign = if (z & a).count_ones() % 2 == 1 {
                    -1.0
                } else {
                    1.0
                };
                sub[(row, col)] += base * sign;
            }
        }
    }
    Ok(hermitian_eigen(sub).0)
}

pub fn solve_dense(h: &PauliSum) -> Result<EigenResult> {
    check_hermitian(h)?;
    let (values, vectors) = hermitian_eigen(h.to_dense()?);
    let amps: Vec<Complex64> = vectors.column(0).iter().copied().collect();
    let ground_energy = values[0];
    let residual = residual_norm(h, &amps, ground_energy)?;
    let dim = amps.len();
    Ok(EigenResult {
        ground_energy,
        ground_state: Some(StateVector::from_amplitudes(amps)?),
        iterations: 0,
        residual,
        converged: true,
        peak_state_bytes: dim * dim * std::mem::size_of::<Complex64>(),
    })
}

fn krylov_dim(dim: usize) -> usize {
    let per_vec = dim * std::mem::size_of::<Complex64>();
    (BASIS_BUDGET_BYTES / per_vec)
        .clamp(MIN_KRYLOV, MAX_KRYLOV)
        .min(dim)
}

/// Lowest eigenpair by restarted Lanczos. `max_iter` bounds the total
/// number of Hamiltonian applications; hitting it returns the best
/// estimate with `converged = false`.
pub fn solve_iterative(h: &PauliSum, tol: f64, max_iter: usize, seed: u64) -> Result<EigenResult> {
    check_hermitian(h)?;
    let n = h.num_qubits();
    if n > ITERATIVE_LIMIT {
        return Err(Error::TooLarge {
            what: "iterative solver",
            limit: ITERATIVE_LIMIT,
            got: n,
        });
    }
    let dim = 1usize << n;
    let m = krylov_dim(dim);
    let vec_bytes = dim * std::mem::size_of::<Complex64>();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut start: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect();
    let s = norm(&start);
    start.iter_mut().for_each(|a| *a /= s);

    let mut w = vec![Complex64::default(); dim];
    let mut iterations = 0;
    let mut peak_vectors = 0;

    loop {
        let mut basis: Vec<Vec<Complex64>> = vec![start];
        let mut alpha: Vec<f64> = Vec::with_capacity(m);
        let mut beta: Vec<f64> = Vec::with_capacity(m);
        loop {
            let q = basis.last().expect("basis is nonempty");
            h.apply_into(q, &mut w)?;
            iterations += 1;
            let a = dot(q, &w).re;
            alpha.push(a);
            // two Gram-Schmidt passes against the whole basis
            for _ in 0..2 {
                for q in &basis {
                    let c = dot(q, &w);
                    w.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
                }
            }
            let b = norm(&w);
            let scale = alpha.iter().fold(1.0f64, |acc, x| acc.max(x.abs()));
            if b <= 1e-12 * scale || basis.len() == m || iterations >= max_iter {
                break;
            }
            beta.push(b);
            basis.push(w.iter().map(|x| x / b).collect());
        }
        peak_vectors = peak_vectors.max(basis.len() + 2);

        let k = alpha.len();
        let t = DMatrix::from_fn(k, k, |r, c| {
            if r == c {
                alpha[r]
            } else if r + 1 == c {
                beta[r]
            } else if c + 1 == r {
                beta[c]
            } else {
                0.0
            }
        });
        let eig = t.symmetric_eigen();
        let lowest = (0..k)
            .min_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]))
            .expect("nonempty tridiagonal");
        let coeffs: DVector<f64> = eig.eigenvectors.column(lowest).into_owned();

        let mut x = vec![Complex64::default(); dim];
        for (ci, q) in coeffs.iter().zip(&basis) {
            x.iter_mut().zip(q).for_each(|(a, b)| *a += b * *ci);
        }
        let nx = norm(&x);
        x.iter_mut().for_each(|a| *a /= nx);
        drop(basis);

        h.apply_into(&x, &mut w)?;
        let energy = dot(&x, &w).re;
        let residual = w
            .iter()
            .zip(&x)
            .map(|(hx, xv)| (hx - xv * energy).norm_sqr())
            .sum::<f64>()
            .sqrt();

        let converged = residual <= tol;
        if converged || iterations >= max_iter {
            return Ok(EigenResult {
                ground_energy: energy,
                ground_state: Some(StateVector::from_amplitudes(x)?),
                iterations,
                residual,
                converged,
                peak_state_bytes: peak_vectors * vec_bytes,
            });
        }
        start = x;
    }
}

/// Dense diagonalization up to 8 qubits, Lanczos beyond.
pub fn solve_auto(h: &PauliSum, tol: f64, max_iter: usize, seed: u64) -> Result<EigenResult> {
    if h.num_qubits() <= DENSE_LIMIT.min(8) {
        solve_dense(h)
    } else {
        solve_iterative(h, tol, max_iter, seed)
    }
}
