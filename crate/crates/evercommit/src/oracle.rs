//! Lazily-sampled random oracles and the classical commitment built on them.
//!
//! An oracle maps bit strings to fixed-width bit strings; outputs are drawn
//! on first query and memoised, so repeated queries agree. Two extras support
//! the security experiments:
//!
//! * a query log, appended once per query, so a game can check whether a
//!   phase touched a point;
//! * reprogramming patches. A patched point answers from the patch in the
//!   *patched view* and from the base table in the *base view*; exactly one
//!   source answers any query in a given view, and a later patch of the same
//!   point wins.
//!
//! The classical commitment is plain hashing: committing to R with opening
//! randomness R' publishes f = O(R || R'). It binds statistically (the output
//! is 64 bits wider than the input, so collisions are vanishing at toy sizes)
//! and hides nothing; an unbounded extractor recovers R from f by exhausting
//! the input space.

use std::collections::HashMap;

use rand::Rng;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::rng::{fork_rng, TrialRng};

/// Largest s + t the brute-force extractor will scan (2^24 inputs).
pub const EXTRACT_CAP_BITS: usize = 24;

/// A lazily-sampled random function {0,1}^* -> {0,1}^out_len.
#[derive(Clone, Debug)]
pub struct RandomOracle {
    out_len: usize,
    table: HashMap<Bits, Bits>,
    patches: HashMap<Bits, Bits>,
    query_log: Vec<Bits>,
    stream: TrialRng,
}

impl RandomOracle {
    /// A fresh oracle; its sampling sub-stream is forked from `rng` now, so
    /// later draws by the caller cannot shift the oracle's values.
    pub fn new<R: Rng + ?Sized>(out_len: usize, rng: &mut R) -> Self {
        RandomOracle {
            out_len,
            table: HashMap::new(),
            patches: HashMap::new(),
            query_log: Vec::new(),
            stream: fork_rng(rng),
        }
    }

    pub fn out_len(&self) -> usize {
        self.out_len
    }

    /// Query in the patched view: a reprogrammed point answers from its
    /// patch, anything else from the (lazily sampled) base table.
    pub fn query(&mut self, input: &Bits) -> Bits {
        self.query_log.push(input.clone());
        if let Some(v) = self.patches.get(input) {
            return v.clone();
        }
        self.base_value(input)
    }

    /// Query in the base view, ignoring patches. Used for the phase of a
    /// hybrid experiment that must not see a reprogrammed point.
    pub fn query_base(&mut self, input: &Bits) -> Bits {
        self.query_log.push(input.clone());
        self.base_value(input)
    }

    /// Overwrite the answer at `point` in the patched view. The most recent
    /// patch of a point wins.
    pub fn reprogram(&mut self, point: Bits, value: Bits) -> Result<()> {
        if value.len() != self.out_len {
            return Err(Error::LengthMismatch { expected: self.out_len, got: value.len() });
        }
        self.patches.insert(point, value);
        Ok(())
    }

    /// All queries made so far, in order, through either view.
    pub fn query_log(&self) -> &[Bits] {
        &self.query_log
    }

    /// Base-view lookup that bypasses the query log; the brute-force
    /// extractor uses this because its sweep is analysis, not an in-game
    /// query.
    fn eval_unlogged(&mut self, input: &Bits) -> Bits {
        self.base_value(input)
    }

    fn base_value(&mut self, input: &Bits) -> Bits {
        if let Some(v) = self.table.get(input) {
            return v.clone();
        }
        let v = Bits::random(self.out_len, &mut self.stream);
        self.table.insert(input.clone(), v.clone());
        v
    }
}

/// Width parameters of the classical commitment: R has s bits, the opening
/// randomness R' has t bits, and the oracle output has q = s + t + 64 bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct CommitParams {
    pub s: usize,
    pub t: usize,
}

impl CommitParams {
    pub fn new(s: usize, t: usize) -> Result<Self> {
        if s == 0 || t == 0 || s > 64 || t > 64 {
            return Err(Error::InvalidParams(format!(
                "commitment widths must be in 1..=64, got s={s}, t={t}"
            )));
        }
        Ok(CommitParams { s, t })
    }

    /// Oracle output width.
    pub fn q(&self) -> usize {
        self.s + self.t + 64
    }

    /// A fresh oracle of the right shape for these widths.
    pub fn fresh_oracle<R: Rng + ?Sized>(&self, rng: &mut R) -> RandomOracle {
        RandomOracle::new(self.q(), rng)
    }
}

/// f = O(R || R').
pub fn commit_classical(
    oracle: &mut RandomOracle,
    params: &CommitParams,
    r: &Bits,
    rp: &Bits,
) -> Result<Bits> {
    check_widths(oracle, params, r, rp)?;
    Ok(oracle.query(&r.concat(rp)))
}

/// Does (R, R') open f?
pub fn verify_opening(
    oracle: &mut RandomOracle,
    params: &CommitParams,
    f: &Bits,
    r: &Bits,
    rp: &Bits,
) -> Result<bool> {
    check_widths(oracle, params, r, rp)?;
    if f.len() != params.q() {
        return Err(Error::LengthMismatch { expected: params.q(), got: f.len() });
    }
    Ok(&oracle.query(&r.concat(rp)) == f)
}

/// Unbounded extraction: sweep every (R, R') and return the unique R that
/// opens f, `None` if nothing does, or an error if two distinct committed
/// values collide (a broken-oracle event at these widths).
pub fn extract_classical(
    oracle: &mut RandomOracle,
    params: &CommitParams,
    f: &Bits,
) -> Result<Option<Bits>> {
    if params.s + params.t > EXTRACT_CAP_BITS {
        return Err(Error::SearchSpaceTooLarge(params.s + params.t));
    }
    if f.len() != params.q() {
        return Err(Error::LengthMismatch { expected: params.q(), got: f.len() });
    }
    let mut found: Option<Bits> = None;
    for r_val in 0..(1u64 << params.s) {
        let r = Bits::from_uint(r_val, params.s);
        for rp_val in 0..(1u64 << params.t) {
            let input = r.concat(&Bits::from_uint(rp_val, params.t));
            if &oracle.eval_unlogged(&input) == f {
                match &found {
                    None => found = Some(r.clone()),
                    Some(prev) if prev == &r => {}
                    Some(_) => return Err(Error::OracleCollision),
                }
            }
        }
    }
    Ok(found)
}

fn check_widths(
    oracle: &RandomOracle,
    params: &CommitParams,
    r: &Bits,
    rp: &Bits,
) -> Result<()> {
    if r.len() != params.s {
        return Err(Error::LengthMismatch { expected: params.s, got: r.len() });
    }
    if rp.len() != params.t {
        return Err(Error::LengthMismatch { expected: params.t, got: rp.len() });
    }
    if oracle.out_len() != params.q() {
        return Err(Error::LengthMismatch { expected: params.q(), got: oracle.out_len() });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::trial_rng;

    #[test]
    fn repeated_queries_agree_and_log_everything() {
        let mut rng = trial_rng(10, 0);
        let mut oracle = RandomOracle::new(16, &mut rng);
        let x = Bits::from_uint(5, 8);
        let y = Bits::from_uint(9, 8);
        let vx = oracle.query(&x);
        let vy = oracle.query(&y);
        assert_eq!(oracle.query(&x), vx);
        assert_ne!(vx, vy, "distinct points should not collide at 16 output bits");
        assert_eq!(oracle.query_log().len(), 3);
        assert_eq!(vx.len(), 16);
    }

    #[test]
    fn patches_shadow_base_and_last_write_wins() {
        let mut rng = trial_rng(11, 0);
        let mut oracle = RandomOracle::new(8, &mut rng);
        let p = Bits::from_uint(3, 4);
        let base = oracle.query(&p);
        oracle.reprogram(p.clone(), Bits::from_uint(0xAA, 8)).unwrap();
        assert_eq!(oracle.query(&p), Bits::from_uint(0xAA, 8));
        assert_eq!(oracle.query_base(&p), base);
        oracle.reprogram(p.clone(), Bits::from_uint(0x55, 8)).unwrap();
        assert_eq!(oracle.query(&p), Bits::from_uint(0x55, 8));
        assert!(oracle.reprogram(p, Bits::from_uint(0, 4)).is_err());
    }

    #[test]
    fn commit_verify_extract_round_trip() {
        let mut rng = trial_rng(12, 0);
        let params = CommitParams::new(8, 8).unwrap();
        let mut oracle = params.fresh_oracle(&mut rng);
        let r = Bits::random(8, &mut rng);
        let rp = Bits::random(8, &mut rng);
        let f = commit_classical(&mut oracle, &params, &r, &rp).unwrap();
        assert!(verify_opening(&mut oracle, &params, &f, &r, &rp).unwrap());
        let wrong = r.xor(&Bits::from_uint(1, 8));
        assert!(!verify_opening(&mut oracle, &params, &f, &wrong, &rp).unwrap());
        assert_eq!(extract_classical(&mut oracle, &params, &f).unwrap(), Some(r));
    }

    #[test]
    fn extract_refuses_oversized_spaces_and_reports_no_opening() {
        let mut rng = trial_rng(13, 0);
        let params = CommitParams::new(16, 16).unwrap();
        let mut oracle = params.fresh_oracle(&mut rng);
        let f = Bits::zeros(params.q());
        assert!(matches!(
            extract_classical(&mut oracle, &params, &f),
            Err(Error::SearchSpaceTooLarge(32))
        ));
        let params = CommitParams::new(6, 6).unwrap();
        let mut oracle = params.fresh_oracle(&mut rng);
        // An all-zero target is unopened with overwhelming probability.
        let f = Bits::zeros(params.q());
        assert_eq!(extract_classical(&mut oracle, &params, &f).unwrap(), None);
    }
}
