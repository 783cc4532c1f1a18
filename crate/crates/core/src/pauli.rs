//! Sparse Pauli-string algebra on up to 64 qubits.
//!
//! A string is stored phase-free as a pair of bitmasks: bit `q` of
//! `(x, z)` is `(0,0)=I`, `(1,0)=X`, `(1,1)=Y`, `(0,1)=Z`. The string then
//! denotes `i^{|x&z|} X^x Z^z`, so every string is Hermitian and a Hermitian
//! sum has real coefficients. Basis-state index bit `q` is qubit `q`; in text
//! labels qubit 0 is the leftmost character.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Coefficients with magnitude at or below this are dropped.
pub const SIMPLIFY_TOL: f64 = 1e-12;
/// Norm and imaginary-residue tolerance for expectation values.
pub const STATE_TOL: f64 = 1e-9;
/// Largest width `to_dense` will materialize.
pub const DENSE_LIMIT: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Power of `i`: `Phase(k)` is `i^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_power(k: u32) -> Self {
        Phase((k % 4) as u8)
    }

    pub fn power(self) -> u32 {
        self.0 as u32
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    num_qubits: usize,
    x: u64,
    z: u64,
}

fn check_width(n: usize) -> Result<()> {
    if n == 0 || n > 64 {
        return Err(Error::UnsupportedWidth(n));
    }
    Ok(())
}

fn mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl PauliString {
    pub fn new(num_qubits: usize, x: u64, z: u64) -> Result<Self> {
        check_width(num_qubits)?;
        if (x | z) & !mask(num_qubits) != 0 {
            return Err(Error::InvalidLabel(format!(
                "masks exceed {num_qubits} qubits"
            )));
        }
        Ok(PauliString { num_qubits, x, z })
    }

    pub fn identity(num_qubits: usize) -> Result<Self> {
        Self::new(num_qubits, 0, 0)
    }

    /// Single-qubit Pauli `p` on qubit `q`.
    pub fn single(num_qubits: usize, q: usize, p: Pauli) -> Result<Self> {
        check_width(num_qubits)?;
        if q >= num_qubits {
            return Err(Error::InvalidLabel(format!("qubit {q} >= {num_qubits}")));
        }
        let (x, z) = p.bits();
        Self::new(num_qubits, (x as u64) << q, (z as u64) << q)
    }

    /// Builds a string from `(qubit, Pauli)` pairs; later entries overwrite.
    pub fn from_ops(num_qubits: usize, ops: &[(usize, Pauli)]) -> Result<Self> {
        let mut s = Self::identity(num_qubits)?;
        for &(q, p) in ops {
            if q >= num_qubits {
                return Err(Error::InvalidLabel(format!("qubit {q} >= {num_qubits}")));
            }
            let (x, z) = p.bits();
            let bit = 1u64 << q;
            s.x = (s.x & !bit) | if x { bit } else { 0 };
            s.z = (s.z & !bit) | if z { bit } else { 0 };
        }
        Ok(s)
    }

    /// Parses a word such as `"XIZY"` (qubit 0 leftmost).
    pub fn from_label(label: &str) -> Result<Self> {
        let n = label.chars().count();
        check_width(n)?;
        let mut x = 0u64;
        let mut z = 0u64;
        for (q, ch) in label.chars().enumerate() {
            let p = match ch {
                'I' => Pauli::I,
                'X' => Pauli::X,
                'Y' => Pauli::Y,
                'Z' => Pauli::Z,
                _ => return Err(Error::InvalidLabel(label.to_string())),
            };
            let (bx, bz) = p.bits();
            x |= (bx as u64) << q;
            z |= (bz as u64) << q;
        }
        Self::new(n, x, z)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    /// Qubits acted on non-trivially.
    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    pub fn is_identity(&self) -> bool {
        self.support() == 0
    }

    pub fn get(&self, q: usize) -> Pauli {
        Pauli::from_bits(self.x >> q & 1 == 1, self.z >> q & 1 == 1)
    }

    pub fn label(&self) -> String {
        (0..self.num_qubits).map(|q| self.get(q).symbol()).collect()
    }

    /// `self · other = phase · result`.
    pub fn mul(&self, other: &PauliString) -> Result<(PauliString, Phase)> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::QubitMismatch {
                left: self.num_qubits,
                right: other.num_qubits,
            });
        }
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        // i^{|x1 z1|} X^x1 Z^z1 · i^{|x2 z2|} X^x2 Z^z2
        //   = i^{|x1 z1| + |x2 z2| + 2|z1 x2|} X^x Z^z, and X^x Z^z = i^{-|x z|} P
        let k = (self.x & self.z).count_ones()
            + (other.x & other.z).count_ones()
            + 2 * (self.z & other.x).count_ones()
            + 3 * (x & z).count_ones();
        Ok((
            PauliString {
                num_qubits: self.num_qubits,
                x,
                z,
            },
            Phase::from_power(k),
        ))
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()).is_multiple_of(2)
    }

    /// `i^{|x&z|}`: the factor relating the string to `X^x Z^z`.
    fn y_phase(&self) -> Complex64 {
        Phase::from_power((self.x & self.z).count_ones()).to_complex()
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

fn state_dim(num_qubits: usize, len: usize) -> Result<usize> {
    if num_qubits >= usize::BITS as usize || len != 1usize << num_qubits {
        return Err(Error::StateLength {
            got: len,
            num_qubits,
        });
    }
    Ok(len)
}

#[inline]
fn parity(bits: u64) -> bool {
    bits.count_ones() & 1 == 1
}

/// Sum of Pauli strings with complex coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    num_qubits: usize,
    terms: BTreeMap<PauliString, Complex64>,
}

impl PauliSum {
    pub fn zero(num_qubits: usize) -> Result<Self> {
        check_width(num_qubits)?;
        Ok(PauliSum {
            num_qubits,
            terms: BTreeMap::new(),
        })
    }

    pub fn identity(num_qubits: usize, coeff: impl Into<Complex64>) -> Result<Self> {
        let mut s = Self::zero(num_qubits)?;
        s.add_term(PauliString::identity(num_qubits)?, coeff.into())?;
        s.simplify();
        Ok(s)
    }

    pub fn from_terms<I>(num_qubits: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (PauliString, Complex64)>,
    {
        let mut s = Self::zero(num_qubits)?;
        for (p, c) in terms {
            s.add_term(p, c)?;
        }
        s.simplify();
        Ok(s)
    }

    /// Real-coefficient sum from text labels, e.g. `[("XX", 1.0), ("ZZ", 0.5)]`.
    pub fn from_labels(terms: &[(&str, f64)]) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| Error::InvalidLabel("empty term list".into()))?;
        let n = first.0.chars().count();
        let parsed = terms
            .iter()
            .map(|(l, c)| Ok((PauliString::from_label(l)?, Complex64::new(*c, 0.0))))
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(n, parsed)
    }

    pub fn from_string(p: PauliString, coeff: impl Into<Complex64>) -> Result<Self> {
        Self::from_terms(p.num_qubits(), [(p, coeff.into())])
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PauliString, &Complex64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, p: &PauliString) -> Complex64 {
        self.terms.get(p).copied().unwrap_or_default()
    }

    /// Accumulates `c · p` without simplifying.
    pub fn add_term(&mut self, p: PauliString, c: Complex64) -> Result<()> {
        if p.num_qubits() != self.num_qubits {
            return Err(Error::QubitMismatch {
                left: self.num_qubits,
                right: p.num_qubits(),
            });
        }
        *self.terms.entry(p).or_default() += c;
        Ok(())
    }

    pub fn simplify(&mut self) {
        self.terms.retain(|_, c| c.norm() > SIMPLIFY_TOL);
    }

    fn check_same(&self, other: &PauliSum) -> Result<()> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::QubitMismatch {
                left: self.num_qubits,
                right: other.num_qubits,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &PauliSum) -> Result<PauliSum> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (p, c) in &other.terms {
            *out.terms.entry(*p).or_default() += c;
        }
        out.simplify();
        Ok(out)
    }

    pub fn scale(&self, c: impl Into<Complex64>) -> PauliSum {
        let c = c.into();
        let mut out = PauliSum {
            num_qubits: self.num_qubits,
            terms: self.terms.iter().map(|(p, v)| (*p, v * c)).collect(),
        };
        out.simplify();
        out
    }

    /// Operator product `self · other`.
    pub fn matmul(&self, other: &PauliSum) -> Result<PauliSum> {
        self.check_same(other)?;
        let mut out = PauliSum {
            num_qubits: self.num_qubits,
            terms: BTreeMap::new(),
        };
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let (p, phase) = a.mul(b)?;
                *out.terms.entry(p).or_default() += ca * cb * phase.to_complex();
            }
        }
        out.simplify();
        Ok(out)
    }

    /// Hermitian conjugate. Strings are Hermitian, so only coefficients change.
    pub fn adjoint(&self) -> PauliSum {
        PauliSum {
            num_qubits: self.num_qubits,
            terms: self.terms.iter().map(|(p, c)| (*p, c.conj())).collect(),
        }
    }

    pub fn is_hermitian(&self) -> bool {
        self.terms.values().all(|c| c.im.abs() <= SIMPLIFY_TOL)
    }

    /// Matrix-free `H · v`.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        let mut out = vec![Complex64::default(); v.len()];
        self.apply_into(v, &mut out)?;
        Ok(out)
    }

    /// `out = H · v`, reusing the output buffer.
    pub fn apply_into(&self, v: &[Complex64], out: &mut [Complex64]) -> Result<()> {
        let dim = state_dim(self.num_qubits, v.len())?;
        state_dim(self.num_qubits, out.len())?;
        out.iter_mut().for_each(|a| *a = Complex64::default());
        for (p, c) in &self.terms {
            let coeff = c * p.y_phase();
            let (x, z) = (p.x as usize, p.z as usize);
            if x == 0 {
                for a in 0..dim {
                    let s = if parity((z & a) as u64) {
                        -coeff
                    } else {
                        coeff
                    };
                    out[a] += s * v[a];
                }
            } else {
                for a in 0..dim {
                    let s = if parity((z & a) as u64) {
                        -coeff
                    } else {
                        coeff
                    };
                    out[a ^ x] += s * v[a];
                }
            }
        }
        Ok(())
    }

    /// `⟨v|H|v⟩` for a Hermitian `H` and unit `v`.
    pub fn expectation(&self, v: &[Complex64]) -> Result<f64> {
        let dim = state_dim(self.num_qubits, v.len())?;
        if !self.is_hermitian() {
            return Err(Error::NonHermitian);
        }
        let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::Unnormalized(norm));
        }
        let mut total = Complex64::default();
        for (p, c) in &self.terms {
            let coeff = c * p.y_phase();
            let (x, z) = (p.x as usize, p.z as usize);
            let mut acc = Complex64::default();
            for a in 0..dim {
                let t = v[a ^ x].conj() * v[a];
                if parity((z & a) as u64) {
                    acc -= t;
                } else {
                    acc += t;
                }
            }
            total += coeff * acc;
        }
        if total.im.abs() > STATE_TOL {
            return Err(Error::ImaginaryResidue(total.im));
        }
        Ok(total.re)
    }

    /// Dense `2^n × 2^n` matrix; test-oracle use only.
    pub fn to_dense(&self) -> Result<DMatrix<Complex64>> {
        if self.num_qubits > DENSE_LIMIT {
            return Err(Error::TooLarge {
                what: "dense matrix",
                limit: DENSE_LIMIT,
                got: self.num_qubits,
            });
        }
        let dim = 1usize << self.num_qubits;
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        for (p, c) in &self.terms {
            let coeff = c * p.y_phase();
            let (x, z) = (p.x as usize, p.z as usize);
            for a in 0..dim {
                let s = if parity((z & a) as u64) {
                    -coeff
                } else {
                    coeff
                };
                m[(a ^ x, a)] += s;
            }
        }
        Ok(m)
    }
}

fn fmt_coeff(c: &Complex64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else {
        format!("({}{:+}i)", c.re, c.im)
    }
}

/// One `coeff * WORD` line per term.
impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 * {}", "I".repeat(self.num_qubits));
        }
        for (i, (p, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{} * {}", fmt_coeff(c), p)?;
        }
        Ok(())
    }
}
