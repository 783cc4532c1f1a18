//! Second-quantized fermionic operators and the Jordan-Wigner map.
//!
//! Canonical (normal-ordered) form: creators before annihilators, each
//! group sorted by ascending mode. Spin orbitals of a lattice use the block
//! layout `Up -> site`, `Down -> num_sites + site`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString, PauliSum, SIMPLIFY_TOL};

/// A creation (`dagger`) or annihilation operator on one mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ladder {
    pub mode: usize,
    pub dagger: bool,
}

impl Ladder {
    pub fn create(mode: usize) -> Self {
        Ladder { mode, dagger: true }
    }

    pub fn annihilate(mode: usize) -> Self {
        Ladder {
            mode,
            dagger: false,
        }
    }

    fn order_key(self) -> (u8, usize) {
        (if self.dagger { 0 } else { 1 }, self.mode)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spin {
    Up,
    Down,
}

/// Qubit index of a spin orbital in the block layout.
pub fn mode_index(site: usize, spin: Spin, num_sites: usize) -> Result<usize> {
    if site >= num_sites {
        return Err(Error::SiteOutOfRange { site, num_sites });
    }
    Ok(match spin {
        Spin::Up => site,
        Spin::Down => num_sites + site,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FermionicOp {
    num_modes: usize,
    terms: Vec<(Complex64, Vec<Ladder>)>,
}

impl FermionicOp {
    pub fn new(num_modes: usize) -> Self {
        FermionicOp {
            num_modes,
            terms: Vec::new(),
        }
    }

    pub fn num_modes(&self) -> usize {
        self.num_modes
    }

    pub fn terms(&self) -> &[(Complex64, Vec<Ladder>)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Appends `coeff · f_0 f_1 ⋯` (product in the given order).
    pub fn push(&mut self, coeff: impl Into<Complex64>, factors: Vec<Ladder>) -> Result<()> {
        if let Some(bad) = factors.iter().find(|f| f.mode >= self.num_modes) {
            return Err(Error::ModeOutOfRange {
                mode: bad.mode,
                num_modes: self.num_modes,
            });
        }
        self.terms.push((coeff.into(), factors));
        Ok(())
    }

    pub fn with_term(mut self, coeff: impl Into<Complex64>, factors: Vec<Ladder>) -> Result<Self> {
        self.push(coeff, factors)?;
        Ok(self)
    }

    /// `c†_p c_p`.
    pub fn number(num_modes: usize, p: usize) -> Result<Self> {
        Self::new(num_modes).with_term(1.0, vec![Ladder::create(p), Ladder::annihilate(p)])
    }

    pub fn add(&self, other: &FermionicOp) -> Result<FermionicOp> {
        if self.num_modes != other.num_modes {
            return Err(Error::QubitMismatch {
                left: self.num_modes,
                right: other.num_modes,
            });
        }
        let mut out = self.clone();
        out.terms.extend(other.terms.iter().cloned());
        Ok(out)
    }

    pub fn scale(&self, c: impl Into<Complex64>) -> FermionicOp {
        let c = c.into();
        FermionicOp {
            num_modes: self.num_modes,
            terms: self.terms.iter().map(|(k, f)| (k * c, f.clone())).collect(),
        }
    }

    pub fn adjoint(&self) -> FermionicOp {
        let terms = self
            .terms
            .iter()
            .map(|(c, f)| {
                let rev = f
                    .iter()
                    .rev()
                    .map(|l| Ladder {
                        mode: l.mode,
                        dagger: !l.dagger,
                    })
                    .collect();
                (c.conj(), rev)
            })
            .collect();
        FermionicOp {
            num_modes: self.num_modes,
            terms,
        }
    }

    /// Rewrites every term into canonical order using the anticommutation
    /// relations and merges like terms.
    pub fn normal_order(&self) -> FermionicOp {
        let mut acc: BTreeMap<Vec<Ladder>, Complex64> = BTreeMap::new();
        let mut work: Vec<(Complex64, Vec<Ladder>)> = self.terms.clone();

        // One adjacent transposition per visit: a swap flips the sign, and
        // c_p c†_p additionally spawns the contracted term.
        'term: while let Some((coeff, mut f)) = work.pop() {
            for i in 0..f.len().saturating_sub(1) {
                let (a, b) = (f[i], f[i + 1]);
                if a == b {
                    continue 'term;
                }
                if a.order_key() > b.order_key() {
                    if !a.dagger && b.dagger && a.mode == b.mode {
                        let mut contracted = f.clone();
                        contracted.drain(i..i + 2);
                        work.push((coeff, contracted));
                    }
                    f.swap(i, i + 1);
                    work.push((-coeff, f));
                    continue 'term;
                }
            }
            *acc.entry(f).or_default() += coeff;
        }

        FermionicOp {
            num_modes: self.num_modes,
            terms: acc
                .into_iter()
                .filter(|(_, c)| c.norm() > SIMPLIFY_TOL)
                .map(|(f, c)| (c, f))
                .collect(),
        }
    }
}

fn ladder_image(l: Ladder, num_modes: usize) -> Result<PauliSum> {
    let mut ops: Vec<(usize, Pauli)> = (0..l.mode).map(|q| (q, Pauli::Z)).collect();
    ops.push((l.mode, Pauli::X));
    let xs = PauliString::from_ops(num_modes, &ops)?;
    ops.pop();
    ops.push((l.mode, Pauli::Y));
    let ys = PauliString::from_ops(num_modes, &ops)?;
    // c† = (X - iY)/2 · Z-string, c = (X + iY)/2 · Z-string
    let y_coeff = if l.dagger { -0.5 } else { 0.5 };
    PauliSum::from_terms(
        num_modes,
        [
            (xs, Complex64::new(0.5, 0.0)),
            (ys, Complex64::new(0.0, y_coeff)),
        ],
    )
}

/// Jordan-Wigner image: one qubit per mode, Z strings on lower modes.
pub fn jordan_wigner(op: &FermionicOp) -> Result<PauliSum> {
    let n = op.num_modes();
    let mut images: BTreeMap<Ladder, PauliSum> = BTreeMap::new();
    let mut total = PauliSum::zero(n)?;
    for (coeff, factors) in op.terms() {
        let mut prod = PauliSum::identity(n, *coeff)?;
        for f in factors {
            if !images.contains_key(f) {
                images.insert(*f, ladder_image(*f, n)?);
            }
            prod = prod.matmul(&images[f])?;
        }
        total = total.add(&prod)?;
    }
    Ok(total)
}
