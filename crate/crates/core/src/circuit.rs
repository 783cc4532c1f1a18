//! Parameterized RY/RZ/CX circuits, the EfficientSU2 ansatz, and a
//! peephole reduction pass for bound circuits.

use std::f64::consts::TAU;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Angles within this of a multiple of 2π are treated as zero by [`reduce`].
pub const ANGLE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Angle {
    Param(usize),
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    Ry { qubit: usize, angle: Angle },
    Rz { qubit: usize, angle: Angle },
    Cx { control: usize, target: usize },
}

impl Gate {
    pub fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            Gate::Ry { qubit, .. } | Gate::Rz { qubit, .. } => (qubit, None),
            Gate::Cx { control, target } => (control, Some(target)),
        }
    }

    fn angle(&self) -> Option<Angle> {
        match *self {
            Gate::Ry { angle, .. } | Gate::Rz { angle, .. } => Some(angle),
            Gate::Cx { .. } => None,
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rot = |f: &mut fmt::Formatter<'_>, name: &str, q: usize, a: Angle| match a {
            Angle::Param(p) => write!(f, "{name} q{q} p{p}"),
            Angle::Fixed(x) => write!(f, "{name} q{q} {x}"),
        };
        match *self {
            Gate::Ry { qubit, angle } => rot(f, "RY", qubit, angle),
            Gate::Rz { qubit, angle } => rot(f, "RZ", qubit, angle),
            Gate::Cx { control, target } => write!(f, "CX q{control} q{target}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Entanglement {
    #[default]
    Linear,
    Full,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
    num_parameters: usize,
}

impl Circuit {
    /// Validates qubit indices and that parameter slots are exactly `0..k`.
    pub fn new(num_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        if num_qubits == 0 {
            return Err(Error::InvalidCircuit(
                "circuit needs at least one qubit".into(),
            ));
        }
        let mut used: Vec<bool> = Vec::new();
        for g in &gates {
            let (a, b) = g.qubits();
            if a >= num_qubits || b.is_some_and(|b| b >= num_qubits) {
                return Err(Error::InvalidCircuit(format!(
                    "{g} exceeds width {num_qubits}"
                )));
            }
            if b == Some(a) {
                return Err(Error::InvalidCircuit(format!("{g} repeats a qubit")));
            }
            if let Some(Angle::Param(p)) = g.angle() {
                if used.len() <= p {
                    used.resize(p + 1, false);
                }
                used[p] = true;
            }
        }
        if let Some(missing) = used.iter().position(|u| !u) {
            return Err(Error::InvalidCircuit(format!(
                "parameter slot {missing} is never used"
            )));
        }
        Ok(Circuit {
            num_qubits,
            gates,
            num_parameters: used.len(),
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn num_parameters(&self) -> usize {
        self.num_parameters
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Line-per-gate text dump (`RY q0 p3`, `CX q0 q1`).
    pub fn dump(&self) -> String {
        self.gates.iter().map(|g| format!("{g}\n")).collect()
    }

    pub fn check_params(&self, params: &[f64]) -> Result<()> {
        if params.len() != self.num_parameters {
            return Err(Error::ParameterCount {
                expected: self.num_parameters,
                got: params.len(),
            });
        }
        Ok(())
    }
}

/// Hardware-efficient ansatz: `reps + 1` layers of RY then RZ on every
/// qubit, separated by CX entanglers. Layer `l` uses RY slots
/// `2nl .. 2nl+n` and RZ slots `2nl+n .. 2n(l+1)`.
pub fn efficient_su2(
    num_qubits: usize,
    reps: usize,
    entanglement: Entanglement,
) -> Result<Circuit> {
    if num_qubits < 2 || reps < 1 {
        return Err(Error::InvalidCircuit(format!(
            "efficient_su2 needs n >= 2 and reps >= 1, got n={num_qubits}, reps={reps}"
        )));
    }
    let n = num_qubits;
    let mut gates = Vec::new();
    for layer in 0..=reps {
        let base = 2 * n * layer;
        gates.extend((0..n).map(|q| Gate::Ry {
            qubit: q,
            angle: Angle::Param(base + q),
        }));
        gates.extend((0..n).map(|q| Gate::Rz {
            qubit: q,
            angle: Angle::Param(base + n + q),
        }));
        if layer < reps {
            match entanglement {
                Entanglement::Linear => {
                    gates.extend((0..n - 1).map(|q| Gate::Cx {
                        control: q,
                        target: q + 1,
                    }));
                }
                Entanglement::Full => {
                    for i in 0..n {
                        for j in i + 1..n {
                            gates.push(Gate::Cx {
                                control: i,
                                target: j,
                            });
                        }
                    }
                }
            }
        }
    }
    Circuit::new(n, gates)
}

fn normalize_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r <= ANGLE_TOL || TAU - r <= ANGLE_TOL {
        0.0
    } else {
        r
    }
}

/// Binds `params` and cancels redundant gates: same-axis rotations adjacent
/// on a qubit merge (mod 2π), zero rotations vanish, back-to-back identical
/// CX pairs cancel. The action is preserved up to global phase.
pub fn reduce(c: &Circuit, params: &[f64]) -> Result<Circuit> {
    c.check_params(params)?;
    let bind = |a: Angle| match a {
        Angle::Param(p) => params[p],
        Angle::Fixed(x) => x,
    };

    // out[i] is None once removed; stacks[q] holds live gates touching q
    let mut out: Vec<Option<Gate>> = Vec::with_capacity(c.len());
    let mut stacks: Vec<Vec<usize>> = vec![Vec::new(); c.num_qubits()];

    for g in c.gates() {
        match *g {
            Gate::Ry { qubit, angle } | Gate::Rz { qubit, angle } => {
                let theta = bind(angle);
                let is_ry = matches!(g, Gate::Ry { .. });
                let merge_with = stacks[qubit].last().copied().filter(|&i| match out[i] {
                    Some(Gate::Ry { .. }) => is_ry,
                    Some(Gate::Rz { .. }) => !is_ry,
                    _ => false,
                });
                let total = match merge_with.and_then(|i| out[i]).and_then(|p| p.angle()) {
                    Some(Angle::Fixed(prev)) => normalize_angle(prev + theta),
                    _ => normalize_angle(theta),
                };
                if let Some(i) = merge_with {
                    out[i] = None;
                    stacks[qubit].pop();
                }
                if total != 0.0 {
                    let angle = Angle::Fixed(total);
                    let gate = if is_ry {
                        Gate::Ry { qubit, angle }
                    } else {
                        Gate::Rz { qubit, angle }
                    };
                    stacks[qubit].push(out.len());
                    out.push(Some(gate));
                }
            }
            Gate::Cx { control, target } => {
                let top_c = stacks[control].last().copied();
                let top_t = stacks[target].last().copied();
                let cancels = match (top_c, top_t) {
                    (Some(i), Some(j)) if i == j => out[i] == Some(*g),
                    _ => false,
                };
                if cancels {
                    let i = top_c.unwrap();
                    out[i] = None;
                    stacks[control].pop();
                    stacks[target].pop();
                } else {
                    stacks[control].push(out.len());
                    stacks[target].push(out.len());
                    out.push(Some(*g));
                }
            }
        }
    }
    Circuit::new(c.num_qubits(), out.into_iter().flatten().collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateMetrics {
    pub cx_count: usize,
    pub depth: usize,
    pub param_count: usize,
}

pub fn gate_metrics(c: &Circuit) -> GateMetrics {
    let mut level = vec![0usize; c.num_qubits()];
    let mut cx_count = 0;
    for g in c.gates() {
        match g.qubits() {
            (q, None) => level[q] += 1,
            (a, Some(b)) => {
                cx_count += 1;
                let l = level[a].max(level[b]) + 1;
                level[a] = l;
                level[b] = l;
            }
        }
    }
    GateMetrics {
        cx_count,
        depth: level.into_iter().max().unwrap_or(0),
        param_count: c.num_parameters(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn su2_counts() {
        let c = efficient_su2(6, 1, Entanglement::Linear).unwrap();
        assert_eq!(c.num_parameters(), 24);
        assert_eq!(gate_metrics(&c).cx_count, 5);
        let c = efficient_su2(2, 1, Entanglement::Linear).unwrap();
        assert_eq!(c.num_parameters(), 8);
        assert_eq!(gate_metrics(&c).cx_count, 1);
        let c = efficient_su2(4, 2, Entanglement::Full).unwrap();
        assert_eq!(c.num_parameters(), 24);
        assert_eq!(gate_metrics(&c).cx_count, 12);
        assert!(efficient_su2(1, 1, Entanglement::Linear).is_err());
        assert!(efficient_su2(3, 0, Entanglement::Linear).is_err());
    }

    #[test]
    fn su2_closed_forms() {
        for n in 2..=10 {
            for r in 1..=3 {
                let lin = gate_metrics(&efficient_su2(n, r, Entanglement::Linear).unwrap());
                assert_eq!(lin.param_count, 2 * n * (r + 1));
                assert_eq!(lin.cx_count, (n - 1) * r);
                let full = gate_metrics(&efficient_su2(n, r, Entanglement::Full).unwrap());
                assert_eq!(full.cx_count, n * (n - 1) / 2 * r);
            }
        }
    }

    #[test]
    fn su2_golden_dump() {
        let c = efficient_su2(2, 1, Entanglement::Linear).unwrap();
        let want = "RY q0 p0\nRY q1 p1\nRZ q0 p2\nRZ q1 p3\nCX q0 q1\n\
                    RY q0 p4\nRY q1 p5\nRZ q0 p6\nRZ q1 p7\n";
        assert_eq!(c.dump(), want);
    }

    #[test]
    fn metrics_small() {
        let empty = Circuit::new(2, vec![]).unwrap();
        assert_eq!(
            gate_metrics(&empty),
            GateMetrics {
                cx_count: 0,
                depth: 0,
                param_count: 0
            }
        );
        let cx = Circuit::new(
            2,
            vec![Gate::Cx {
                control: 0,
                target: 1,
            }],
        )
        .unwrap();
        assert_eq!(
            gate_metrics(&cx),
            GateMetrics {
                cx_count: 1,
                depth: 1,
                param_count: 0
            }
        );
        let c = efficient_su2(3, 1, Entanglement::Linear).unwrap();
        // RY RZ, CX(0,1), CX(1,2), RY RZ
        assert_eq!(gate_metrics(&c).depth, 6);
    }

    #[test]
    fn circuit_validation() {
        assert!(Circuit::new(
            2,
            vec![Gate::Cx {
                control: 1,
                target: 1
            }]
        )
        .is_err());
        assert!(Circuit::new(
            2,
            vec![Gate::Cx {
                control: 0,
                target: 2
            }]
        )
        .is_err());
        let gap = vec![Gate::Ry {
            qubit: 0,
            angle: Angle::Param(1),
        }];
        assert!(Circuit::new(1, gap).is_err());
    }

    #[test]
    fn reduce_cancellations() {
        let c = Circuit::new(
            1,
            vec![
                Gate::Ry {
                    qubit: 0,
                    angle: Angle::Param(0),
                },
                Gate::Ry {
                    qubit: 0,
                    angle: Angle::Param(1),
                },
            ],
        )
        .unwrap();
        assert!(reduce(&c, &[0.4, -0.4]).unwrap().is_empty());

        let cx = Gate::Cx {
            control: 0,
            target: 1,
        };
        assert!(reduce(&Circuit::new(2, vec![cx, cx]).unwrap(), &[])
            .unwrap()
            .is_empty());

        // CX(0,1) CX(1,0) must survive
        let cx_rev = Gate::Cx {
            control: 1,
            target: 0,
        };
        assert_eq!(
            reduce(&Circuit::new(2, vec![cx, cx_rev]).unwrap(), &[])
                .unwrap()
                .len(),
            2
        );

        // cascading: RZ(a) CX CX RZ(-a) collapses completely
        let c = Circuit::new(
            2,
            vec![
                Gate::Rz {
                    qubit: 0,
                    angle: Angle::Param(0),
                },
                cx,
                cx,
                Gate::Rz {
                    qubit: 0,
                    angle: Angle::Param(1),
                },
            ],
        )
        .unwrap();
        assert!(reduce(&c, &[1.1, -1.1]).unwrap().is_empty());

        // a gate on another qubit does not block merging
        let c = Circuit::new(
            2,
            vec![
                Gate::Ry {
                    qubit: 0,
                    angle: Angle::Param(0),
                },
                Gate::Ry {
                    qubit: 1,
                    angle: Angle::Param(1),
                },
                Gate::Ry {
                    qubit: 0,
                    angle: Angle::Param(2),
                },
            ],
        )
        .unwrap();
        let r = reduce(&c, &[0.1, 0.2, 0.3]).unwrap();
        assert_eq!(r.len(), 2);
        assert!(reduce(&c, &[0.1]).is_err());
    }
}
