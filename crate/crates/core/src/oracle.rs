//! Exhaustive search for the best linear symmetric rate on tiny instances.
//!
//! Each cell `(T, m)` with `1 <= m <= T <= max_T` is searched completely:
//! messages are assigned `m`-dimensional subspaces of GF(q)^T (one reduced
//! echelon representative per subspace) by backtracking, and a destination
//! is checked as soon as every message it involves has been assigned.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::gf::{union_dim, FieldMatrix};
use crate::instance::Instance;
use crate::scheme::{verify_scheme, PrecodingScheme};
use crate::Rational;

pub const MAX_MESSAGES: usize = 5;
pub const MAX_BLOCK_LEN: usize = 3;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("oracle handles at most {MAX_MESSAGES} messages, got {0}")]
    TooManyMessages(usize),
    #[error("oracle handles block lengths 1..={MAX_BLOCK_LEN}, got {0}")]
    BlockLength(usize),
    #[error("oracle handles GF(2) and GF(3), got GF({0})")]
    Field(u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    /// Best verified `m/T`, `None` when no cell admits a scheme.
    pub rate: Option<Rational>,
    pub scheme: Option<PrecodingScheme>,
    /// Sum over cells of (number of subspaces)^N.
    pub space_size: u128,
    /// Assignments visited by the backtracking search.
    pub nodes: u64,
    pub exhaustive: bool,
}

/// All `m`-dimensional subspaces of GF(q)^t, as `t x m` column bases in
/// canonical (reduced echelon) form, sorted.
pub fn subspaces(t: usize, m: usize, q: u64) -> Vec<FieldMatrix> {
    let total = (q as usize).pow((t * m) as u32);
    let mut found = BTreeSet::new();
    for code in 0..total {
        let mut rest = code;
        let rows: Vec<Vec<u64>> = (0..m)
            .map(|_| {
                (0..t)
                    .map(|_| {
                        let d = rest % q as usize;
                        rest /= q as usize;
                        d as u64
                    })
                    .collect()
            })
            .collect();
        let a = FieldMatrix::from_rows(&rows, q).expect("entries are reduced");
        let (r, pivots) = a.rref();
        if pivots.len() < m {
            continue;
        }
        // the rows of `r` span the subspace; store them as columns
        let key: Vec<Vec<u64>> = (0..m).map(|i| (0..t).map(|j| r.get(i, j)).collect()).collect();
        found.insert(key);
    }
    found.into_iter().map(|cols| FieldMatrix::from_columns(&cols, t, q)).collect()
}

struct Search<'a> {
    inst: &'a Instance,
    m: usize,
    spaces: &'a [FieldMatrix],
    /// Destinations to check once message `i` (0-based) is assigned.
    checks: Vec<Vec<usize>>,
    chosen: Vec<usize>,
    nodes: u64,
}

impl Search<'_> {
    fn decodes(&self, k: usize) -> bool {
        let d = &self.inst.destinations()[k];
        let pick = |s: crate::MessageSet| -> Vec<&FieldMatrix> {
            s.iter().map(|i| &self.spaces[self.chosen[i as usize - 1]]).collect()
        };
        let interference = union_dim(&pick(d.interferers)).unwrap_or(0);
        let all = union_dim(&pick(d.interferers.union(d.desired))).expect("same shape");
        all == d.desired.len() * self.m + interference
    }

    fn run(&mut self, i: usize) -> bool {
        if i == self.checks.len() {
            return true;
        }
        for s in 0..self.spaces.len() {
            self.nodes += 1;
            self.chosen.push(s);
            if self.checks[i].iter().all(|&k| self.decodes(k)) && self.run(i + 1) {
                return true;
            }
            self.chosen.pop();
        }
        false
    }
}

/// Best verified linear rate over all cells `m <= T <= max_t` over GF(q).
pub fn brute_force_linear_rate(inst: &Instance, max_t: usize, q: u64) -> Result<OracleResult, OracleError> {
    let n = inst.message_count();
    if n > MAX_MESSAGES {
        return Err(OracleError::TooManyMessages(n));
    }
    if max_t == 0 || max_t > MAX_BLOCK_LEN {
        return Err(OracleError::BlockLength(max_t));
    }
    if q != 2 && q != 3 {
        return Err(OracleError::Field(q));
    }
    let mut checks = vec![Vec::new(); n];
    for (k, d) in inst.destinations().iter().enumerate() {
        let last = d.desired.union(d.interferers).max_id();
        checks[last as usize - 1].push(k);
    }
    let mut result = OracleResult { rate: None, scheme: None, space_size: 0, nodes: 0, exhaustive: true };
    for t in 1..=max_t {
        for m in 1..=t {
            let spaces = subspaces(t, m, q);
            result.space_size += (spaces.len() as u128).pow(n as u32);
            let mut search = Search { inst, m, spaces: &spaces, checks: checks.clone(), chosen: Vec::new(), nodes: 0 };
            let found = search.run(0);
            result.nodes += search.nodes;
            let rate = Rational::new(m as i128, t as i128);
            if found && result.rate.is_none_or(|r| rate > r) {
                let matrices = search.chosen.iter().map(|&s| spaces[s].clone()).collect();
                let scheme = PrecodingScheme::new(t, m, q, matrices).expect("subspaces have the cell shape");
                debug_assert!(verify_scheme(inst, &scheme).map(|r| r.pass).unwrap_or(false));
                result.rate = Some(rate);
                result.scheme = Some(scheme);
            }
        }
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::builtin_fixture;
    use crate::ratio;

    #[test]
    fn subspace_counts() {
        // Gaussian binomials: [3 choose 1]_2 = 7, [3 choose 2]_3 = 13, [2 choose 1]_3 = 4
        assert_eq!(subspaces(3, 1, 2).len(), 7);
        assert_eq!(subspaces(3, 2, 3).len(), 13);
        assert_eq!(subspaces(2, 1, 3).len(), 4);
        assert_eq!(subspaces(3, 3, 2).len(), 1);
    }

    #[test]
    fn toy_rates() {
        for (name, want) in [
            ("toy-single", ratio(1, 1)),
            ("toy-pair", ratio(1, 2)),
            ("toy-complete3", ratio(1, 1)),
            ("toy-delta1", ratio(1, 3)),
        ] {
            let inst = builtin_fixture(name).unwrap();
            let r = brute_force_linear_rate(&inst, 3, 2).unwrap();
            assert_eq!(r.rate, Some(want), "{name}");
            assert!(r.exhaustive);
            assert!(verify_scheme(&inst, r.scheme.as_ref().unwrap()).unwrap().pass);
        }
    }

    #[test]
    fn complete_side_information_at_one_use() {
        let inst = builtin_fixture("toy-complete3").unwrap();
        let r = brute_force_linear_rate(&inst, 1, 2).unwrap();
        assert_eq!(r.rate, Some(ratio(1, 1)));
        assert_eq!(r.scheme.unwrap().block_len(), 1);
    }

    #[test]
    fn limits() {
        let big = builtin_fixture("groupcast6").unwrap();
        assert_eq!(brute_force_linear_rate(&big, 3, 2), Err(OracleError::TooManyMessages(6)));
        let toy = builtin_fixture("toy-pair").unwrap();
        assert_eq!(brute_force_linear_rate(&toy, 4, 2), Err(OracleError::BlockLength(4)));
        assert_eq!(brute_force_linear_rate(&toy, 3, 5), Err(OracleError::Field(5)));
    }
}
