//! Ground-state toolkit for lattice spin and fermion models.
//!
//! Lattices ([`lattice`]) feed Heisenberg and Fermi-Hubbard Hamiltonians
//! ([`hamiltonians`], [`fermion`]) expressed as sparse Pauli sums
//! ([`pauli`]). A statevector simulator ([`sim`]) prices EfficientSU2
//! circuits ([`circuit`]) for the NFT-driven, target-guided VQE ([`vqe`]),
//! and an exact Lanczos solver ([`solver`]) supplies reference energies.
//! [`experiment`] runs batches from config files and writes result records.

pub mod circuit;
pub mod error;
pub mod experiment;
pub mod fermion;
pub mod hamiltonians;
pub mod lattice;
pub mod pauli;
pub mod sim;
pub mod solver;
pub mod vqe;

pub use error::{Error, Result};
