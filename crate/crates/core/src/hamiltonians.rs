//! Heisenberg and Fermi-Hubbard Hamiltonians on a lattice.
//!
//! Heisenberg convention:
//! `H = s · Σ_(i,j) w_ij (X_i X_j + Y_i Y_j + Z_i Z_j) + h · Σ_i P_i`. Positive `s` is antiferromagnetic; at `s = 1, h = 0` the
//! 12-site ring has ground energy -21.5496.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fermion::{jordan_wigner, mode_index, FermionicOp, Ladder, Spin};
use crate::lattice::LatticeGraph;
use crate::pauli::{Pauli, PauliString, PauliSum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldAxis {
    X,
    Y,
    #[default]
    Z,
}

impl From<FieldAxis> for Pauli {
    fn from(a: FieldAxis) -> Pauli {
        match a {
            FieldAxis::X => Pauli::X,
            FieldAxis::Y => Pauli::Y,
            FieldAxis::Z => Pauli::Z,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeisenbergParams {
    pub coupling_scale: f64,
    pub field_h: f64,
    pub field_axis: FieldAxis,
}

impl Default for HeisenbergParams {
    fn default() -> Self {
        HeisenbergParams {
            coupling_scale: 1.0,
            field_h: 0.0,
            field_axis: FieldAxis::Z,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HubbardParams {
    /// Kinetic coefficient is `-hopping_t · w_ij`.
    pub hopping_t: f64,
    pub onsite_u: f64,
}

fn check_nonempty(lattice: &LatticeGraph) -> Result<()> {
    if lattice.num_edges() == 0 {
        return Err(Error::EmptyLattice);
    }
    Ok(())
}

pub fn heisenberg(lattice: &LatticeGraph, p: &HeisenbergParams) -> Result<PauliSum> {
    check_nonempty(lattice)?;
    if p.coupling_scale == 0.0 {
        return Err(Error::InvalidConfig(
            "coupling_scale must be nonzero".into(),
        ));
    }
    let n = lattice.num_vertices();
    let mut h = PauliSum::zero(n)?;
    for e in lattice.edges() {
        let j = Complex64::new(p.coupling_scale * e.weight, 0.0);
        for axis in [Pauli::X, Pauli::Y, Pauli::Z] {
            h.add_term(PauliString::from_ops(n, &[(e.u, axis), (e.v, axis)])?, j)?;
        }
    }
    if p.field_h != 0.0 {
        let axis: Pauli = p.field_axis.into();
        for q in 0..n {
            h.add_term(
                PauliString::single(n, q, axis)?,
                Complex64::new(p.field_h, 0.0),
            )?;
        }
    }
    h.simplify();
    Ok(h)
}

/// Hubbard model over `2 · num_vertices` spin orbitals (block layout).
pub fn fermi_hubbard(lattice: &LatticeGraph, p: &HubbardParams) -> Result<FermionicOp> {
    check_nonempty(lattice)?;
    let sites = lattice.num_vertices();
    let mut op = FermionicOp::new(2 * sites);
    for e in lattice.edges() {
        let t = -p.hopping_t * e.weight;
        if t == 0.0 {
            continue;
        }
        for spin in [Spin::Up, Spin::Down] {
            let a = mode_index(e.u, spin, sites)?;
            let b = mode_index(e.v, spin, sites)?;
            op.push(t, vec![Ladder::create(a), Ladder::annihilate(b)])?;
            op.push(t, vec![Ladder::create(b), Ladder::annihilate(a)])?;
        }
    }
    if p.onsite_u != 0.0 {
        for i in 0..sites {
            let up = mode_index(i, Spin::Up, sites)?;
            let down = mode_index(i, Spin::Down, sites)?;
            op.push(
                p.onsite_u,
                vec![
                    Ladder::create(up),
                    Ladder::annihilate(up),
                    Ladder::create(down),
                    Ladder::annihilate(down),
                ],
            )?;
        }
    }
    Ok(op)
}

/// Model selector for [`get_hamiltonian`]; the uniform weight is supplied
/// separately so a run can rebuild the operator at a new weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Model {
    Heisenberg {
        #[serde(default)]
        field_h: f64,
        #[serde(default)]
        field_axis: FieldAxis,
    },
    FermiHubbard {
        onsite_u: f64,
    },
}

impl Model {
    pub fn heisenberg() -> Self {
        Model::Heisenberg {
            field_h: 0.0,
            field_axis: FieldAxis::Z,
        }
    }

    /// Qubits needed for `lattice`.
    pub fn num_qubits(&self, lattice: &LatticeGraph) -> usize {
        match self {
            Model::Heisenberg { .. } => lattice.num_vertices(),
            Model::FermiHubbard { .. } => 2 * lattice.num_vertices(),
        }
    }
}

/// Qubit Hamiltonian for `model` with uniform interaction `weight`
/// (Heisenberg coupling scale, or Hubbard hopping amplitude).
pub fn get_hamiltonian(model: &Model, lattice: &LatticeGraph, weight: f64) -> Result<PauliSum> {
    match *model {
        Model::Heisenberg {
            field_h,
            field_axis,
        } => heisenberg(
            lattice,
            &HeisenbergParams {
                coupling_scale: weight,
                field_h,
                field_axis,
            },
        ),
        Model::FermiHubbard { onsite_u } => jordan_wigner(&fermi_hubbard(
            lattice,
            &HubbardParams {
                hopping_t: weight,
                onsite_u,
            },
        )?),
    }
}
