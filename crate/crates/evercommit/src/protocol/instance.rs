//! Proof instances: projective checks over a small witness register.
//!
//! An instance is a list of m checks, each a projector on at most five of
//! the n witness qubits. Yes-instances may bundle an exact witness state
//! that every check accepts with certainty; its reduced states double as the
//! locally-simulatable views the simulator draws from. Two fixture
//! instances ship with the crate: a three-qubit stabilizer yes-instance
//! ([`Instance::ghz3`]) and a deliberately frustrated no-instance whose two
//! checks cannot be satisfied simultaneously ([`Instance::frustrated3`]).

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::backend::dense::{hermitian_max_eigenvalue, spread_table};
use crate::backend::{DenseState, Povm, MAX_DENSE_QUBITS};
use crate::error::{Error, Result};

/// Maximum qubits a single check may touch.
pub const MAX_CHECK_SUPPORT: usize = 5;

/// Tolerance for the yes-instance witness condition Tr(P rho) >= 1 - tol.
pub const WITNESS_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InstanceKind {
    Yes,
    No,
}

/// A verification instance: n witness qubits, m projective checks, and an
/// optional exact witness.
#[derive(Clone, Debug)]
pub struct Instance {
    n: usize,
    kind: InstanceKind,
    checks: Vec<Povm>,
    witness: Option<DenseState>,
}

impl Instance {
    pub fn new(
        n: usize,
        kind: InstanceKind,
        checks: Vec<Povm>,
        witness: Option<DenseState>,
    ) -> Result<Self> {
        let inst = Instance { n, kind, checks, witness };
        inst.validate()?;
        Ok(inst)
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n > MAX_DENSE_QUBITS {
            return Err(Error::InvalidInstance(format!(
                "witness register must hold 1..={MAX_DENSE_QUBITS} qubits, got {}",
                self.n
            )));
        }
        if self.checks.is_empty() {
            return Err(Error::InvalidInstance("instance needs at least one check".into()));
        }
        for (c, check) in self.checks.iter().enumerate() {
            if check.support().len() > MAX_CHECK_SUPPORT {
                return Err(Error::InvalidInstance(format!(
                    "check {c} touches {} qubits, cap is {MAX_CHECK_SUPPORT}",
                    check.support().len()
                )));
            }
            if check.support().iter().any(|&q| q >= self.n) {
                return Err(Error::InvalidInstance(format!(
                    "check {c} addresses a qubit outside the {}-qubit register",
                    self.n
                )));
            }
        }
        if let Some(w) = &self.witness {
            if w.num_qubits() != self.n {
                return Err(Error::InvalidInstance(format!(
                    "witness has {} qubits, instance has {}",
                    w.num_qubits(),
                    self.n
                )));
            }
            if self.kind == InstanceKind::Yes {
                for (c, check) in self.checks.iter().enumerate() {
                    let p = check.prob(w)?;
                    if p < 1.0 - WITNESS_TOL {
                        return Err(Error::InvalidInstance(format!(
                            "bundled witness fails check {c}: acceptance {p}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> InstanceKind {
        self.kind
    }

    /// Number of checks m.
    pub fn m(&self) -> usize {
        self.checks.len()
    }

    pub fn checks(&self) -> &[Povm] {
        &self.checks
    }

    pub fn witness(&self) -> Option<&DenseState> {
        self.witness.as_ref()
    }

    /// The reduced witness state on `s` (ascending, 0-based): the locally
    /// simulatable view the simulator is allowed to prepare.
    pub fn local_sim(&self, s: &[usize]) -> Result<DenseState> {
        let w = self.witness.as_ref().ok_or(Error::MissingWitness)?;
        w.partial_trace(s)
    }

    /// Largest eigenvalue of the averaged check operator
    /// (1/m) sum_c (P_c tensor I): the acceptance ceiling for any prover
    /// state, hence the protocol's single-round soundness bound.
    pub fn soundness_bound(&self) -> Result<f64> {
        Ok(hermitian_max_eigenvalue(&self.averaged_check_operator()?))
    }

    /// The averaged check operator itself (identity-padded embeddings).
    pub(crate) fn averaged_check_operator(&self) -> Result<DMatrix<Complex64>> {
        let dim = 1usize << self.n;
        let mut acc = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
        for check in &self.checks {
            let k = check.support().len();
            let spread_s = spread_table(check.support(), self.n, k);
            let env: Vec<usize> =
                (0..self.n).filter(|q| !check.support().contains(q)).collect();
            let spread_e = spread_table(&env, self.n, env.len());
            let p = check.projector();
            for &e in &spread_e {
                for a in 0..spread_s.len() {
                    for b in 0..spread_s.len() {
                        acc[(spread_s[a] | e, spread_s[b] | e)] += p[(a, b)];
                    }
                }
            }
        }
        Ok(acc / Complex64::new(self.checks.len() as f64, 0.0))
    }

    /// Three-qubit stabilizer yes-instance: checks Z1 Z2 on {1,2}, Z2 Z3 on
    /// {2,3}, X1 X2 X3 on {1,2,3} (1-based), with the (|000> + |111>)/sqrt(2)
    /// witness, which all three accept with certainty.
    pub fn ghz3() -> Instance {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let zz = DMatrix::from_fn(4, 4, |a, b| {
            if a != b {
                zero
            } else if a == 0 || a == 3 {
                one
            } else {
                zero
            }
        });
        // (I + XXX)/2 flips all three bits: 1/2 on the diagonal and on the
        // anti-diagonal pairing v with !v.
        let xxx = DMatrix::from_fn(8, 8, |a, b| {
            if a == b || a == (b ^ 7) {
                Complex64::new(0.5, 0.0)
            } else {
                zero
            }
        });
        let inv_sqrt2 = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let mut amps = vec![zero; 8];
        amps[0] = inv_sqrt2;
        amps[7] = inv_sqrt2;
        let witness = DenseState::pure(3, &amps).expect("GHZ amplitudes are normalised");
        Instance::new(
            3,
            InstanceKind::Yes,
            vec![
                Povm::new(vec![0, 1], zz.clone()).expect("ZZ is a projector"),
                Povm::new(vec![1, 2], zz).expect("ZZ is a projector"),
                Povm::new(vec![0, 1, 2], xxx).expect("XXX parity is a projector"),
            ],
            Some(witness),
        )
        .expect("fixture instance is valid")
    }

    /// Three-qubit frustrated no-instance: (I+Z)/2 and (I+X)/2 both on the
    /// first qubit. No state satisfies both; the best average acceptance is
    /// 1/2 + sqrt(2)/4.
    pub fn frustrated3() -> Instance {
        let zero = Complex64::new(0.0, 0.0);
        let plus_z = DMatrix::from_fn(2, 2, |a, b| {
            if a == 0 && b == 0 {
                Complex64::new(1.0, 0.0)
            } else {
                zero
            }
        });
        let plus_x = DMatrix::from_element(2, 2, Complex64::new(0.5, 0.0));
        Instance::new(
            3,
            InstanceKind::No,
            vec![
                Povm::new(vec![0], plus_z).expect("|0><0| is a projector"),
                Povm::new(vec![0], plus_x).expect("|+><+| is a projector"),
            ],
            None,
        )
        .expect("fixture instance is valid")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&InstanceWire::from(self))
            .expect("instance wire form serialises")
    }

    pub fn from_json(text: &str) -> Result<Instance> {
        let wire: InstanceWire = serde_json::from_str(text)
            .map_err(|e| Error::InvalidInstance(format!("bad instance JSON: {e}")))?;
        wire.try_into()
    }
}

// --- wire form (1-based qubit indices) --------------------------------------

#[derive(Serialize, Deserialize)]
struct CheckWire {
    support: Vec<usize>,
    projector: Vec<Vec<[f64; 2]>>,
}

#[derive(Serialize, Deserialize)]
struct InstanceWire {
    n: usize,
    kind: InstanceKind,
    checks: Vec<CheckWire>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<DenseState>,
}

fn matrix_to_wire(m: &DMatrix<Complex64>) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|a| (0..m.ncols()).map(|b| [m[(a, b)].re, m[(a, b)].im]).collect())
        .collect()
}

fn matrix_from_wire(rows: &[Vec<[f64; 2]>]) -> Result<DMatrix<Complex64>> {
    let dim = rows.len();
    if dim == 0 || rows.iter().any(|r| r.len() != dim) {
        return Err(Error::InvalidInstance("projector matrix is not square".into()));
    }
    Ok(DMatrix::from_fn(dim, dim, |a, b| Complex64::new(rows[a][b][0], rows[a][b][1])))
}

impl From<&Instance> for InstanceWire {
    fn from(inst: &Instance) -> Self {
        InstanceWire {
            n: inst.n,
            kind: inst.kind,
            checks: inst
                .checks
                .iter()
                .map(|c| CheckWire {
                    support: c.support().iter().map(|&q| q + 1).collect(),
                    projector: matrix_to_wire(c.projector()),
                })
                .collect(),
            witness: inst.witness.clone(),
        }
    }
}

impl TryFrom<InstanceWire> for Instance {
    type Error = Error;

    fn try_from(wire: InstanceWire) -> Result<Instance> {
        let mut checks = Vec::with_capacity(wire.checks.len());
        for (c, cw) in wire.checks.iter().enumerate() {
            if cw.support.contains(&0) {
                return Err(Error::InvalidInstance(format!(
                    "check {c}: qubit indices are 1-based, found 0"
                )));
            }
            let support: Vec<usize> = cw.support.iter().map(|&q| q - 1).collect();
            checks.push(Povm::new(support, matrix_from_wire(&cw.projector)?)?);
        }
        Instance::new(wire.n, wire.kind, checks, wire.witness)
    }
}
