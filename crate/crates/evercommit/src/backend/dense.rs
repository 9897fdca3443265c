//! Dense density-matrix simulation for small registers.
//!
//! States are full 2^n x 2^n complex density matrices, capped at
//! [`MAX_DENSE_QUBITS`] qubits. Qubit 0 occupies the most significant index
//! bit, so basis index b encodes |q0 q1 ... q_{n-1}> with
//! b = sum_i q_i * 2^(n-1-i).

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bits::Bits;
use crate::error::{Error, Result};

/// Hard cap on dense-simulation register width.
pub const MAX_DENSE_QUBITS: usize = 12;

/// Tolerance for the density-matrix invariants (Hermiticity, unit trace,
/// positive semidefiniteness) and projector checks.
pub const STATE_TOL: f64 = 1e-9;

/// A Pauli mask X^x Z^z acting qubit-wise; bit i of `x`/`z` addresses
/// qubit i.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PauliMask {
    pub x: Bits,
    pub z: Bits,
}

impl PauliMask {
    pub fn new(x: Bits, z: Bits) -> Self {
        PauliMask { x, z }
    }

    /// Uniformly random mask over n qubits.
    pub fn random<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        PauliMask { x: Bits::random(n, rng), z: Bits::random(n, rng) }
    }
}

/// Density matrix of an n-qubit register.
#[derive(Clone, Debug)]
pub struct DenseState {
    n: usize,
    rho: DMatrix<Complex64>,
}

impl DenseState {
    /// Validate and wrap a raw matrix: Hermitian, unit trace, and positive
    /// semidefinite, all within [`STATE_TOL`].
    pub fn from_matrix(n: usize, rho: DMatrix<Complex64>) -> Result<Self> {
        if n == 0 || n > MAX_DENSE_QUBITS {
            return Err(Error::TooManyQubits { got: n, cap: MAX_DENSE_QUBITS });
        }
        let dim = 1usize << n;
        if rho.nrows() != dim || rho.ncols() != dim {
            return Err(Error::InvalidState(format!(
                "expected a {dim}x{dim} matrix, got {}x{}",
                rho.nrows(),
                rho.ncols()
            )));
        }
        for i in 0..dim {
            for j in 0..dim {
                if (rho[(i, j)] - rho[(j, i)].conj()).norm() > STATE_TOL {
                    return Err(Error::InvalidState("matrix is not Hermitian".into()));
                }
            }
        }
        let tr = rho.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace is {tr}, not 1")));
        }
        let min_eig = hermitian_eigenvalues(&rho)
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -STATE_TOL {
            return Err(Error::InvalidState(format!(
                "matrix has negative eigenvalue {min_eig}"
            )));
        }
        Ok(DenseState { n, rho })
    }

    /// Wrap a matrix produced by an invariant-preserving internal operation.
    pub(crate) fn from_matrix_unchecked(n: usize, rho: DMatrix<Complex64>) -> Self {
        DenseState { n, rho }
    }

    /// Pure state |psi><psi| from amplitudes in the computational basis.
    pub fn pure(n: usize, amplitudes: &[Complex64]) -> Result<Self> {
        if n == 0 || n > MAX_DENSE_QUBITS {
            return Err(Error::TooManyQubits { got: n, cap: MAX_DENSE_QUBITS });
        }
        let dim = 1usize << n;
        if amplitudes.len() != dim {
            return Err(Error::InvalidState(format!(
                "expected {dim} amplitudes, got {}",
                amplitudes.len()
            )));
        }
        let norm2: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm2 - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("amplitude norm^2 is {norm2}, not 1")));
        }
        let rho = DMatrix::from_fn(dim, dim, |i, j| amplitudes[i] * amplitudes[j].conj());
        Ok(DenseState { n, rho })
    }

    /// |0...0><0...0| on n qubits.
    pub fn zero_state(n: usize) -> Result<Self> {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1usize << n.min(MAX_DENSE_QUBITS)];
        amps[0] = Complex64::new(1.0, 0.0);
        Self::pure(n, &amps)
    }

    /// I / 2^n.
    pub fn maximally_mixed(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_DENSE_QUBITS {
            return Err(Error::TooManyQubits { got: n, cap: MAX_DENSE_QUBITS });
        }
        let dim = 1usize << n;
        let rho = DMatrix::from_diagonal_element(dim, dim, Complex64::new(1.0 / dim as f64, 0.0));
        Ok(DenseState { n, rho })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1usize << self.n
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.rho
    }

    /// Conjugate by X^x Z^z. Applying the same mask twice restores the state,
    /// since the conjugation is involutive up to a global phase.
    pub fn apply_pauli_mask(&self, mask: &PauliMask) -> Result<DenseState> {
        if mask.x.len() != self.n || mask.z.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, got: mask.x.len().max(mask.z.len()) });
        }
        let x = qubit_bits_to_index_mask(&mask.x, self.n);
        let z = qubit_bits_to_index_mask(&mask.z, self.n);
        let dim = self.dim();
        let sign = |v: usize| -> f64 {
            if ((z & v).count_ones() & 1) == 1 {
                -1.0
            } else {
                1.0
            }
        };
        let rho = DMatrix::from_fn(dim, dim, |a, b| {
            self.rho[(a ^ x, b ^ x)] * (sign(a ^ x) * sign(b ^ x))
        });
        Ok(DenseState { n: self.n, rho })
    }

    /// Reduced state on `keep` (0-based, strictly ascending).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DenseState> {
        validate_support(keep, self.n)?;
        let k = keep.len();
        let env: Vec<usize> = (0..self.n).filter(|q| !keep.contains(q)).collect();
        let spread_keep = spread_table(keep, self.n, k);
        let spread_env = spread_table(&env, self.n, env.len());
        let dim_k = 1usize << k;
        let mut rho = DMatrix::from_element(dim_k, dim_k, Complex64::new(0.0, 0.0));
        for a in 0..dim_k {
            for b in 0..dim_k {
                let mut acc = Complex64::new(0.0, 0.0);
                for &e in &spread_env {
                    acc += self.rho[(spread_keep[a] | e, spread_keep[b] | e)];
                }
                rho[(a, b)] = acc;
            }
        }
        Ok(DenseState { n: k, rho })
    }

    /// Embed this k-qubit state at positions `support` (ascending) of an
    /// n-qubit register, with every other qubit in |0><0|.
    pub fn embed_with_zeros(&self, support: &[usize], n: usize) -> Result<DenseState> {
        validate_support(support, n)?;
        if support.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, got: support.len() });
        }
        if n > MAX_DENSE_QUBITS {
            return Err(Error::TooManyQubits { got: n, cap: MAX_DENSE_QUBITS });
        }
        let spread = spread_table(support, n, self.n);
        let dim = 1usize << n;
        let mut rho = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
        for a in 0..self.dim() {
            for b in 0..self.dim() {
                rho[(spread[a], spread[b])] = self.rho[(a, b)];
            }
        }
        Ok(DenseState { n, rho })
    }

    /// Trace distance (1/2) * sum |eigenvalues of rho - sigma|.
    pub fn trace_distance(&self, other: &DenseState) -> Result<f64> {
        if self.n != other.n {
            return Err(Error::LengthMismatch { expected: self.n, got: other.n });
        }
        let diff = &self.rho - &other.rho;
        Ok(hermitian_eigenvalues(&diff).iter().map(|l| l.abs()).sum::<f64>() / 2.0)
    }
}

/// Real eigenvalues of a Hermitian complex matrix.
pub(crate) fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    m.clone().symmetric_eigen().eigenvalues.iter().copied().collect()
}

/// Largest eigenvalue of a Hermitian complex matrix.
pub(crate) fn hermitian_max_eigenvalue(m: &DMatrix<Complex64>) -> f64 {
    hermitian_eigenvalues(m).into_iter().fold(f64::NEG_INFINITY, f64::max)
}

/// Map qubit-indexed bits (bit i addresses qubit i) to an index mask where
/// qubit i sits at index bit n-1-i.
pub(crate) fn qubit_bits_to_index_mask(bits: &Bits, n: usize) -> usize {
    (0..n).filter(|&i| bits.get(i)).map(|i| 1usize << (n - 1 - i)).sum()
}

/// Check a support set: non-empty, strictly ascending, within range.
pub(crate) fn validate_support(support: &[usize], n: usize) -> Result<()> {
    let ok = !support.is_empty()
        && support.windows(2).all(|w| w[0] < w[1])
        && support.iter().all(|&q| q < n);
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidSupport(support.to_vec()))
    }
}

/// For each value v of `positions.len()` bits, the n-qubit index with v's
/// bits placed at those qubit positions (v's bit j, counted from the most
/// significant end, lands on qubit positions[j]).
pub(crate) fn spread_table(positions: &[usize], n: usize, k: usize) -> Vec<usize> {
    debug_assert_eq!(positions.len(), k);
    (0..(1usize << k))
        .map(|v| {
            positions
                .iter()
                .enumerate()
                .filter(|&(j, _)| (v >> (k - 1 - j)) & 1 == 1)
                .map(|(_, &q)| 1usize << (n - 1 - q))
                .sum()
        })
        .collect()
}

// --- wire form -------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct DenseStateWire {
    n: usize,
    rho: Vec<Vec<[f64; 2]>>,
}

impl Serialize for DenseState {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rho = (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| [self.rho[(i, j)].re, self.rho[(i, j)].im]).collect())
            .collect();
        DenseStateWire { n: self.n, rho }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DenseState {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = DenseStateWire::deserialize(deserializer)?;
        let dim = 1usize
            .checked_shl(wire.n as u32)
            .filter(|_| wire.n >= 1 && wire.n <= MAX_DENSE_QUBITS)
            .ok_or_else(|| serde::de::Error::custom("qubit count out of range"))?;
        if wire.rho.len() != dim || wire.rho.iter().any(|r| r.len() != dim) {
            return Err(serde::de::Error::custom("matrix shape does not match qubit count"));
        }
        let rho = DMatrix::from_fn(dim, dim, |i, j| {
            Complex64::new(wire.rho[i][j][0], wire.rho[i][j][1])
        });
        DenseState::from_matrix(wire.n, rho).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plus_state() -> DenseState {
        let a = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        DenseState::pure(1, &[a, a]).unwrap()
    }

    #[test]
    fn validation_rejects_bad_matrices() {
        // Non-unit trace.
        let m = DMatrix::from_diagonal_element(2, 2, Complex64::new(1.0, 0.0));
        assert!(DenseState::from_matrix(1, m).is_err());
        // Hermitian, unit trace, but indefinite.
        let m = DMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => Complex64::new(1.5, 0.0),
            (1, 1) => Complex64::new(-0.5, 0.0),
            _ => Complex64::new(0.0, 0.0),
        });
        assert!(DenseState::from_matrix(1, m).is_err());
        // Not Hermitian.
        let m = DMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 1) => Complex64::new(0.3, 0.0),
            (0, 0) | (1, 1) => Complex64::new(0.5, 0.0),
            _ => Complex64::new(0.0, 0.0),
        });
        assert!(DenseState::from_matrix(1, m).is_err());
    }

    #[test]
    fn trace_distance_zero_vs_plus() {
        let zero = DenseState::zero_state(1).unwrap();
        let plus = plus_state();
        let td = zero.trace_distance(&plus).unwrap();
        assert!((td - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12, "td {td}");
        assert!(zero.trace_distance(&zero).unwrap() < 1e-12);
    }

    #[test]
    fn pauli_mask_is_involutive_and_moves_populations() {
        let zero = DenseState::zero_state(2).unwrap();
        let mask = PauliMask::new(Bits::from_uint(0b01, 2), Bits::from_uint(0b10, 2));
        let masked = zero.apply_pauli_mask(&mask).unwrap();
        // X on qubit 0 moves |00> to |10>, i.e. index 2.
        assert!((masked.matrix()[(2, 2)].re - 1.0).abs() < 1e-12);
        let back = masked.apply_pauli_mask(&mask).unwrap();
        assert!(zero.trace_distance(&back).unwrap() < 1e-12);
    }

    #[test]
    fn partial_trace_of_product_recovers_factor() {
        // |0><0| (x) |+><+|: tracing out either side gives the other factor.
        let a = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let z = Complex64::new(0.0, 0.0);
        let prod = DenseState::pure(2, &[a, a, z, z]).unwrap();
        let q0 = prod.partial_trace(&[0]).unwrap();
        assert!(q0.trace_distance(&DenseState::zero_state(1).unwrap()).unwrap() < 1e-12);
        let q1 = prod.partial_trace(&[1]).unwrap();
        assert!(q1.trace_distance(&plus_state()).unwrap() < 1e-12);
    }

    #[test]
    fn embed_places_factors_on_support() {
        let plus = plus_state();
        let embedded = plus.embed_with_zeros(&[1], 2).unwrap();
        assert!(embedded
            .partial_trace(&[1])
            .unwrap()
            .trace_distance(&plus)
            .unwrap()
            < 1e-12);
        assert!(embedded
            .partial_trace(&[0])
            .unwrap()
            .trace_distance(&DenseState::zero_state(1).unwrap())
            .unwrap()
            < 1e-12);
    }

    #[test]
    fn wire_round_trip() {
        let plus = plus_state();
        let json = serde_json::to_string(&plus).unwrap();
        let back: DenseState = serde_json::from_str(&json).unwrap();
        assert!(plus.trace_distance(&back).unwrap() < 1e-12);
    }

    #[test]
    fn support_validation() {
        assert!(validate_support(&[0, 1], 3).is_ok());
        assert!(validate_support(&[], 3).is_err());
        assert!(validate_support(&[1, 0], 3).is_err());
        assert!(validate_support(&[0, 3], 3).is_err());
    }
}
