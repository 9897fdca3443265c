//! Binary projective measurements on a subset of qubits.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::backend::dense::{
    spread_table, validate_support, DenseState, STATE_TOL,
};
use crate::error::{Error, Result};

/// A two-outcome measurement {P, I - P} where the projector P acts on
/// `support` (0-based, ascending) and identity everywhere else.
#[derive(Clone, Debug)]
pub struct Povm {
    support: Vec<usize>,
    projector: DMatrix<Complex64>,
}

impl Povm {
    /// Validate the projector (Hermitian and idempotent within 1e-9) and the
    /// support shape. Range against a concrete register is checked when the
    /// measurement is applied.
    pub fn new(support: Vec<usize>, projector: DMatrix<Complex64>) -> Result<Self> {
        if support.is_empty() || support.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSupport(support));
        }
        let dim = 1usize << support.len();
        if projector.nrows() != dim || projector.ncols() != dim {
            return Err(Error::NotAProjector(format!(
                "expected {dim}x{dim} for a {}-qubit support, got {}x{}",
                support.len(),
                projector.nrows(),
                projector.ncols()
            )));
        }
        let max_norm =
            |m: &DMatrix<Complex64>| m.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
        let herm_err = max_norm(&(&projector - projector.adjoint()));
        if herm_err > STATE_TOL {
            return Err(Error::NotAProjector(format!("not Hermitian (error {herm_err:.2e})")));
        }
        let idem_err = max_norm(&(&projector * &projector - &projector));
        if idem_err > STATE_TOL {
            return Err(Error::NotAProjector(format!("not idempotent (error {idem_err:.2e})")));
        }
        Ok(Povm { support, projector })
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn projector(&self) -> &DMatrix<Complex64> {
        &self.projector
    }

    /// Acceptance probability Tr[(P (x) I) rho], computed by contraction
    /// without materialising the embedded operator.
    pub fn prob(&self, state: &DenseState) -> Result<f64> {
        let (spread_s, spread_e) = self.spreads(state.num_qubits())?;
        let rho = state.matrix();
        let k_dim = spread_s.len();
        let mut p = 0.0;
        for &e in &spread_e {
            for a in 0..k_dim {
                for b in 0..k_dim {
                    // Tr(E rho) term: E[(a,e),(b,e)] * rho[(b,e),(a,e)].
                    p += (self.projector[(a, b)] * rho[(spread_s[b] | e, spread_s[a] | e)]).re;
                }
            }
        }
        Ok(p.clamp(0.0, 1.0))
    }

    /// Sample the measurement: returns the outcome and the renormalised
    /// post-measurement state (the complement projection on reject).
    pub fn measure<R: Rng + ?Sized>(
        &self,
        state: &DenseState,
        rng: &mut R,
    ) -> Result<(bool, DenseState)> {
        let p = self.prob(state)?;
        let accept = rng.random::<f64>() < p;
        let effective = if accept {
            self.projector.clone()
        } else {
            DMatrix::identity(self.projector.nrows(), self.projector.ncols()) - &self.projector
        };
        let projected = self.sandwich(state, &effective)?;
        let norm = if accept { p } else { 1.0 - p };
        let post = DenseState::from_matrix_unchecked(
            state.num_qubits(),
            projected / Complex64::new(norm, 0.0),
        );
        Ok((accept, post))
    }

    /// (P (x) I) rho (P (x) I) for an arbitrary operator P on the support.
    fn sandwich(&self, state: &DenseState, op: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
        let (spread_s, spread_e) = self.spreads(state.num_qubits())?;
        let rho = state.matrix();
        let dim = state.dim();
        let k_dim = spread_s.len();
        // Left multiply: T[(a,e), col] = sum_c P[a,c] rho[(c,e), col].
        let mut t = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
        for &e in &spread_e {
            for a in 0..k_dim {
                let row = spread_s[a] | e;
                for c in 0..k_dim {
                    let coeff = op[(a, c)];
                    if coeff.norm_sqr() == 0.0 {
                        continue;
                    }
                    let src = spread_s[c] | e;
                    for col in 0..dim {
                        t[(row, col)] += coeff * rho[(src, col)];
                    }
                }
            }
        }
        // Right multiply: out[row, (b,e)] = sum_d T[row, (d,e)] P[d,b].
        let mut out = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
        for &e in &spread_e {
            for b in 0..k_dim {
                let col = spread_s[b] | e;
                for d in 0..k_dim {
                    let coeff = op[(d, b)];
                    if coeff.norm_sqr() == 0.0 {
                        continue;
                    }
                    let src = spread_s[d] | e;
                    for row in 0..dim {
                        out[(row, col)] += t[(row, src)] * coeff;
                    }
                }
            }
        }
        Ok(out)
    }

    fn spreads(&self, n: usize) -> Result<(Vec<usize>, Vec<usize>)> {
        validate_support(&self.support, n)?;
        let env: Vec<usize> = (0..n).filter(|q| !self.support.contains(q)).collect();
        Ok((
            spread_table(&self.support, n, self.support.len()),
            spread_table(&env, n, env.len()),
        ))
    }
}
