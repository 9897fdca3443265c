//! Symbolic product-state register of conjugate-coded qubits.
//!
//! Every qubit is prepared in either the computational basis {|0>, |1>} or
//! the Hadamard basis {|+>, |->} and never entangles with anything, so the
//! exact quantum behaviour reduces to two rules:
//!
//! * measuring in the basis the qubit currently occupies returns its recorded
//!   bit and leaves it unchanged;
//! * measuring in the conjugate basis returns a fresh uniform bit and
//!   re-collapses the qubit onto the measured basis with that outcome.
//!
//! The register tracks (preparation basis, value) per cell plus the most
//! recent collapse, which is all that is needed to reproduce the statistics
//! of any sequence of single-qubit basis measurements.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::error::{Error, Result};

/// Measurement or preparation basis of a single cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Basis {
    Computational,
    Hadamard,
}

impl Basis {
    pub fn conjugate(self) -> Basis {
        match self {
            Basis::Computational => Basis::Hadamard,
            Basis::Hadamard => Basis::Computational,
        }
    }

    /// Convention used by basis strings: 0 selects computational, 1 Hadamard.
    pub fn from_bit(b: bool) -> Basis {
        if b {
            Basis::Hadamard
        } else {
            Basis::Computational
        }
    }
}

#[derive(Clone, Debug)]
struct Cell {
    prepared_basis: Basis,
    prepared_value: bool,
    collapsed: Option<(Basis, bool)>,
}

impl Cell {
    fn current(&self) -> (Basis, bool) {
        self.collapsed
            .unwrap_or((self.prepared_basis, self.prepared_value))
    }
}

/// A product of conjugate-coded qubits.
///
/// `Clone` exists for harness-side bookkeeping (for example exhaustive
/// opening audits that must re-run a destructive verification); adversary
/// code inside the security games only ever receives `&mut` access, keeping
/// the no-cloning discipline at the game level.
#[derive(Clone, Debug)]
pub struct Bb84Register {
    cells: Vec<Cell>,
}

impl Bb84Register {
    /// Prepare `values[i]` in basis `bases[i]` (0 = computational,
    /// 1 = Hadamard).
    pub fn new(bases: &Bits, values: &Bits) -> Result<Self> {
        if bases.len() != values.len() {
            return Err(Error::LengthMismatch { expected: bases.len(), got: values.len() });
        }
        if bases.is_empty() {
            return Err(Error::InvalidParams("register must hold at least one qubit".into()));
        }
        Ok(Bb84Register {
            cells: bases
                .iter()
                .zip(values.iter())
                .map(|(b, v)| Cell {
                    prepared_basis: Basis::from_bit(b),
                    prepared_value: v,
                    collapsed: None,
                })
                .collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Measure one cell in the given basis.
    pub fn measure_at<R: Rng + ?Sized>(&mut self, index: usize, basis: Basis, rng: &mut R) -> bool {
        let (cur_basis, cur_value) = self.cells[index].current();
        let outcome = if basis == cur_basis { cur_value } else { rng.random() };
        self.cells[index].collapsed = Some((basis, outcome));
        outcome
    }

    /// Measure every cell, position i in basis `bases[i]` (0 = computational,
    /// 1 = Hadamard). Destructive: cells re-collapse onto the measured bases.
    pub fn measure_all<R: Rng + ?Sized>(&mut self, bases: &Bits, rng: &mut R) -> Result<Bits> {
        if bases.len() != self.len() {
            return Err(Error::LengthMismatch { expected: self.len(), got: bases.len() });
        }
        Ok((0..self.len())
            .map(|i| self.measure_at(i, Basis::from_bit(bases.get(i)), rng))
            .collect())
    }

    /// Snapshot for debug transcripts: preparation data plus any collapse.
    /// Never handed to adversary strategies.
    pub fn debug_snapshot(&self) -> Bb84Snapshot {
        Bb84Snapshot {
            theta: self
                .cells
                .iter()
                .map(|c| c.prepared_basis == Basis::Hadamard)
                .collect(),
            r: self.cells.iter().map(|c| c.prepared_value).collect(),
            collapsed: self.cells.iter().map(|c| c.collapsed).collect(),
        }
    }
}

/// Serializable view of a register's internals for debug transcripts.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Bb84Snapshot {
    pub theta: Bits,
    pub r: Bits,
    pub collapsed: Vec<Option<(Basis, bool)>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::trial_rng;

    #[test]
    fn matching_basis_is_deterministic() {
        let mut rng = trial_rng(1, 0);
        let bases = Bits::from_uint(0b0101, 4);
        let values = Bits::from_uint(0b0011, 4);
        let mut reg = Bb84Register::new(&bases, &values).unwrap();
        let got = reg.measure_all(&bases, &mut rng).unwrap();
        assert_eq!(got, values);
        // Re-measuring in the same bases repeats the outcomes.
        let again = reg.measure_all(&bases, &mut rng).unwrap();
        assert_eq!(again, values);
    }

    #[test]
    fn conjugate_measurement_destroys_the_value() {
        // Measure a computational qubit in Hadamard, then back: the original
        // bit must be statistically lost (probability 1/2 per round trip).
        let mut rng = trial_rng(2, 0);
        let mut recovered = 0u32;
        let trials = 4000;
        for _ in 0..trials {
            let bases = Bits::zeros(1);
            let values = Bits::from_uint(1, 1);
            let mut reg = Bb84Register::new(&bases, &values).unwrap();
            reg.measure_at(0, Basis::Hadamard, &mut rng);
            if reg.measure_at(0, Basis::Computational, &mut rng) {
                recovered += 1;
            }
        }
        let rate = f64::from(recovered) / f64::from(trials);
        assert!((rate - 0.5).abs() < 0.03, "rate {rate}");
    }

    #[test]
    fn collapse_is_sticky_per_basis() {
        let mut rng = trial_rng(3, 0);
        let bases = Bits::zeros(1);
        let values = Bits::zeros(1);
        let mut reg = Bb84Register::new(&bases, &values).unwrap();
        let h1 = reg.measure_at(0, Basis::Hadamard, &mut rng);
        let h2 = reg.measure_at(0, Basis::Hadamard, &mut rng);
        assert_eq!(h1, h2);
    }

    #[test]
    fn width_mismatch_is_rejected() {
        assert!(Bb84Register::new(&Bits::zeros(3), &Bits::zeros(2)).is_err());
        let mut reg = Bb84Register::new(&Bits::zeros(3), &Bits::zeros(3)).unwrap();
        let mut rng = trial_rng(4, 0);
        assert!(reg.measure_all(&Bits::zeros(2), &mut rng).is_err());
    }
}
