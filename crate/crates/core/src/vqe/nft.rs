//! Nakanishi-Fujii-Todo sequential minimal optimization.
//!
//! For a Pauli-rotation ansatz the energy along any single angle is
//! `a·cos(θ − b) + c`. Three values at `θ, θ ± π/2` pin down the sinusoid,
//! and the coordinate jumps straight to its minimum `c − |a|`.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::Result;

/// Function being minimized. Plain closures `FnMut(&[f64]) -> f64` qualify.
pub trait Objective {
    fn evaluate(&mut self, x: &[f64]) -> Result<f64>;

    /// Signals that optimization should stop now.
    fn is_done(&self) -> bool {
        false
    }
}

impl<F: FnMut(&[f64]) -> f64> Objective for F {
    fn evaluate(&mut self, x: &[f64]) -> Result<f64> {
        Ok(self(x))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NftOptions {
    /// Coordinate updates to perform.
    pub max_iter: usize,
    /// Re-measure the cached value every this many updates; `None` means
    /// once per full sweep, `Some(1)` spends three fresh evaluations on every
    /// update.
    pub reset_interval: Option<usize>,
    /// Evaluate the final point once more so the reported value is a
    /// measurement rather than the fitted prediction.
    pub final_evaluation: bool,
}

impl Default for NftOptions {
    fn default() -> Self {
        NftOptions {
            max_iter: 100,
            reset_interval: None,
            final_evaluation: true,
        }
    }
}

impl NftOptions {
    pub fn with_max_iter(max_iter: usize) -> Self {
        NftOptions {
            max_iter,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NftResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub iterations: usize,
    /// The objective reported completion before `max_iter`.
    pub stopped_early: bool,
}

/// Minimum of `a·cos(θ − b) + c` from its values at `θ`, `θ + π/2`, `θ − π/2`.
/// Returns `(argmin, min)`; a flat coordinate keeps `theta`.
pub fn sinusoid_step(theta: f64, at: f64, plus: f64, minus: f64) -> (f64, f64) {
    let c = (plus + minus) / 2.0;
    let cos_part = at - c;
    let sin_part = (minus - plus) / 2.0;
    let amp = cos_part.hypot(sin_part);
    if amp <= f64::EPSILON * c.abs().max(1.0) {
        return (theta, at);
    }
    (theta - sin_part.atan2(cos_part) + PI, c - amp)
}

pub fn nft_minimize<O: Objective + ?Sized>(
    objective: &mut O,
    x0: &[f64],
    opts: &NftOptions,
) -> Result<NftResult> {
    let mut x = x0.to_vec();
    let dim = x.len();
    let mut evaluations = 0;

    let eval = |obj: &mut O, x: &[f64], evaluations: &mut usize| -> Result<f64> {
        *evaluations += 1;
        obj.evaluate(x)
    };

    if dim == 0 {
        let value = eval(objective, &x, &mut evaluations)?;
        return Ok(NftResult {
            x,
            value,
            evaluations,
            iterations: 0,
            stopped_early: objective.is_done(),
        });
    }

    let reset = opts.reset_interval.unwrap_or(dim).max(1);
    let mut cached: Option<f64> = None;
    let mut iterations = 0;

    while iterations < opts.max_iter {
        let j = iterations % dim;
        if iterations % reset == 0 {
            cached = None;
        }
        let at = match cached {
            Some(v) => v,
            None => {
                let v = eval(objective, &x, &mut evaluations)?;
                if objective.is_done() {
                    return Ok(early(x, v, evaluations, iterations));
                }
                v
            }
        };
        let theta = x[j];
        x[j] = theta + FRAC_PI_2;
        let plus = eval(objective, &x, &mut evaluations)?;
        if objective.is_done() {
            return Ok(early(x, plus, evaluations, iterations));
        }
        x[j] = theta - FRAC_PI_2;
        let minus = eval(objective, &x, &mut evaluations)?;
        if objective.is_done() {
            return Ok(early(x, minus, evaluations, iterations));
        }
        let (best, value) = sinusoid_step(theta, at, plus, minus);
        x[j] = best;
        cached = Some(value);
        iterations += 1;
    }

    let value = match cached {
        Some(v) if !opts.final_evaluation => v,
        _ => eval(objective, &x, &mut evaluations)?,
    };
    Ok(NftResult {
        stopped_early: objective.is_done(),
        x,
        value,
        evaluations,
        iterations,
    })
}

fn early(x: Vec<f64>, value: f64, evaluations: usize, iterations: usize) -> NftResult {
    NftResult {
        x,
        value,
        evaluations,
        iterations,
        stopped_early: true,
    }
}
