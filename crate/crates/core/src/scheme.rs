//! Linear precoding schemes: verification, the cycle-graph builder, the
//! explicit 5/13 diamond scheme and a randomized structured search.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::fixtures::builtin_fixture;
use crate::gf::{intersect_dim, sample_general_position, union_dim, FieldMatrix, GfError};
use crate::graph::{
    alignment_sets, build_alignment_graph, build_conflict_graph, has_overlapping_cycles, internal_conflicts, Edge,
};
use crate::instance::Instance;
use crate::lp::EntropyProfile;
use crate::set::MessageSet;
use crate::Rational;

pub const BUILD_RETRIES: u64 = 10;
pub const DEFAULT_TRIALS: usize = 500;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SchemeError {
    #[error("scheme has {scheme} messages, instance has {instance}")]
    MessageCountMismatch { scheme: usize, instance: usize },
    #[error("message {message}: expected a {rows}x{cols} matrix over GF({prime})")]
    Shape { message: usize, rows: usize, cols: usize, prime: u64 },
    #[error("scheme file: {0}")]
    Parse(String),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error("alignment set {0} has overlapping cycles")]
    OverlappingCycles(MessageSet),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("no verified scheme after {0} attempts")]
    RetriesExhausted(u64),
    #[error("search found no verified scheme in {0} trials (inconclusive)")]
    SearchFailed(usize),
}

/// Per-message `T x m` precoding matrices over GF(p).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrecodingScheme {
    block_len: usize,
    symbols: usize,
    prime: u64,
    matrices: Vec<FieldMatrix>,
}

impl PrecodingScheme {
    pub fn new(block_len: usize, symbols: usize, prime: u64, matrices: Vec<FieldMatrix>) -> Result<Self, SchemeError> {
        for (i, m) in matrices.iter().enumerate() {
            if m.rows() != block_len || m.cols() != symbols || m.prime() != prime {
                return Err(SchemeError::Shape { message: i + 1, rows: block_len, cols: symbols, prime });
            }
        }
        Ok(PrecodingScheme { block_len, symbols, prime, matrices })
    }

    pub fn block_len(&self) -> usize {
        self.block_len
    }

    pub fn symbols(&self) -> usize {
        self.symbols
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn message_count(&self) -> usize {
        self.matrices.len()
    }

    /// Precoding matrix of message `id` (1-based).
    pub fn matrix(&self, id: u32) -> &FieldMatrix {
        &self.matrices[id as usize - 1]
    }

    pub fn rate(&self) -> Rational {
        Rational::new(self.symbols as i128, self.block_len as i128)
    }

    /// Dimension of the joint span of the messages in `s`.
    pub fn span_dim(&self, s: MessageSet) -> usize {
        let parts: Vec<&FieldMatrix> = s.iter().map(|i| self.matrix(i)).collect();
        union_dim(&parts).expect("scheme matrices share a shape")
    }

    pub fn intersect_dim(&self, i: u32, j: u32) -> usize {
        intersect_dim(self.matrix(i), self.matrix(j)).expect("scheme matrices share a shape")
    }

    /// The profile `h_A = dim(span V_A) / T`.
    pub fn linear_profile(&self) -> EntropyProfile {
        let t = self.block_len as i128;
        EntropyProfile::from_fn(self.message_count(), |s| Rational::new(self.span_dim(s) as i128, t))
    }

    /// Header `blocklen T symbols m prime p messages N`, then `message i`
    /// followed by the `T` rows of its matrix.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "blocklen {} symbols {} prime {} messages {}\n",
            self.block_len,
            self.symbols,
            self.prime,
            self.matrices.len()
        );
        for (i, m) in self.matrices.iter().enumerate() {
            writeln!(out, "message {}", i + 1).unwrap();
            for r in 0..m.rows() {
                let row: Vec<String> = (0..m.cols()).map(|c| m.get(r, c).to_string()).collect();
                writeln!(out, "{}", row.join(" ")).unwrap();
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, SchemeError> {
        let perr = |m: String| SchemeError::Parse(m);
        let mut lines = text.lines().map(|l| l.split('#').next().unwrap().trim()).filter(|l| !l.is_empty());
        let header: Vec<&str> = lines.next().ok_or_else(|| perr("empty file".into()))?.split_whitespace().collect();
        let keys = ["blocklen", "symbols", "prime", "messages"];
        if header.len() != 8 || (0..4).any(|i| header[2 * i] != keys[i]) {
            return Err(perr("expected `blocklen T symbols m prime p messages N`".into()));
        }
        let num = |s: &str| s.parse::<u64>().map_err(|e| perr(format!("{s:?}: {e}")));
        let (t, m, p, n) = (num(header[1])? as usize, num(header[3])? as usize, num(header[5])?, num(header[7])? as usize);
        if !crate::gf::is_prime(p) {
            return Err(SchemeError::Field(GfError::NotPrime(p)));
        }
        let mut matrices = Vec::with_capacity(n);
        for i in 1..=n {
            let tag = lines.next().ok_or_else(|| perr(format!("missing message {i}")))?;
            if tag != format!("message {i}") {
                return Err(perr(format!("expected `message {i}`, found {tag:?}")));
            }
            let mut rows = Vec::with_capacity(t);
            for r in 0..t {
                let line = lines.next().ok_or_else(|| perr(format!("message {i}: missing row {}", r + 1)))?;
                let row = line.split_whitespace().map(num).collect::<Result<Vec<u64>, _>>()?;
                if row.len() != m || row.iter().any(|&x| x >= p) {
                    return Err(perr(format!("message {i} row {}: need {m} entries below {p}", r + 1)));
                }
                rows.push(row);
            }
            matrices.push(if t == 0 { FieldMatrix::zeros(0, m, p) } else { FieldMatrix::from_rows(&rows, p)? });
        }
        if let Some(extra) = lines.next() {
            return Err(perr(format!("trailing content {extra:?}")));
        }
        Self::new(t, m, p, matrices)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DestinationVerdict {
    /// 0-based destination index.
    pub dest: usize,
    pub pass: bool,
    pub interference_dim: usize,
    /// Dimension of desired plus interference spans.
    pub union_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub destinations: Vec<DestinationVerdict>,
    /// `dim(V_i, V_j)` for every alignment edge.
    pub edge_unions: Vec<(Edge, usize)>,
    pub rate: Rational,
    pub pass: bool,
}

impl VerificationReport {
    pub fn failures(&self) -> impl Iterator<Item = &DestinationVerdict> {
        self.destinations.iter().filter(|d| !d.pass)
    }
}

/// A destination decodes iff its desired columns are independent of each
/// other and of the interference span.
pub fn verify_scheme(inst: &Instance, s: &PrecodingScheme) -> Result<VerificationReport, SchemeError> {
    if s.message_count() != inst.message_count() {
        return Err(SchemeError::MessageCountMismatch { scheme: s.message_count(), instance: inst.message_count() });
    }
    let mut destinations = Vec::new();
    for (k, d) in inst.destinations().iter().enumerate() {
        let interference_dim = s.span_dim(d.interferers);
        let union = s.span_dim(d.interferers.union(d.desired));
        let pass = union == d.desired.len() * s.symbols() + interference_dim;
        destinations.push(DestinationVerdict { dest: k, pass, interference_dim, union_dim: union });
    }
    let edge_unions = build_alignment_graph(inst)
        .edges()
        .map(|(i, j)| ((i, j), s.span_dim(MessageSet::from_ids([i, j]))))
        .collect();
    let pass = destinations.iter().all(|d| d.pass);
    Ok(VerificationReport { destinations, edge_unions, rate: s.rate(), pass })
}

fn check_prime(p: u64) -> Result<(), SchemeError> {
    if crate::gf::is_prime(p) {
        Ok(())
    } else {
        Err(SchemeError::Field(GfError::NotPrime(p)))
    }
}

fn no_overlap_attempt(inst: &Instance, delta: usize, rng: &mut ChaCha8Rng, p: u64) -> Result<PrecodingScheme, SchemeError> {
    let t = 2 * delta + 1;
    let a = build_alignment_graph(inst);
    let c = build_conflict_graph(inst);
    let conflicts = internal_conflicts(&a, &c);
    let blocks = a.blocks();
    let mut v: Vec<Option<FieldMatrix>> = vec![None; inst.message_count() + 1];
    for set in alignment_sets(&a) {
        let conflicted = conflicts.iter().any(|((x, y), _)| set.contains(*x) && set.contains(*y));
        if !conflicted {
            let shared = FieldMatrix::random(t, delta, p, rng);
            for i in set.iter() {
                v[i as usize] = Some(shared.clone());
            }
            continue;
        }
        let center = set.iter().next().unwrap();
        v[center as usize] = Some(FieldMatrix::random(t, delta, p, rng));
        let mut done = vec![false; blocks.len()];
        let mut queue = VecDeque::from([center]);
        while let Some(cur) = queue.pop_front() {
            let vc = v[cur as usize].clone().unwrap();
            for (bi, block) in blocks.iter().enumerate() {
                if done[bi] || !block.nodes.contains(cur) {
                    continue;
                }
                done[bi] = true;
                if block.is_bridge() {
                    let other = block.nodes.without(cur).iter().next().unwrap();
                    let q = FieldMatrix::random(delta, delta - 1, p, rng);
                    let fresh = FieldMatrix::random(t, 1, p, rng);
                    let m = if delta > 1 { FieldMatrix::hcat(&[&vc.mul(&q)?, &fresh])? } else { fresh };
                    v[other as usize] = Some(m);
                    queue.push_back(other);
                    continue;
                }
                let order = block.cycle_from(cur).expect("blocks of a graph without overlapping cycles are cycles or bridges");
                let l = order.len();
                let common = delta.saturating_sub(l / 2);
                let w = delta - common;
                let mixed = vc.mul(&FieldMatrix::random(delta, delta, p, rng))?;
                let mut pool: Vec<Vec<u64>> = (common..delta).map(|j| mixed.column(j)).collect();
                while pool.len() < l {
                    pool.push(FieldMatrix::random(t, 1, p, rng).column(0));
                }
                let common_cols: Vec<usize> = (0..common).collect();
                let u = mixed.select_columns(&common_cols);
                for (pos, &node) in order.iter().enumerate().skip(1) {
                    let window: Vec<Vec<u64>> = (0..w).map(|x| pool[(pos + x) % l].clone()).collect();
                    let m = FieldMatrix::hcat(&[&u, &FieldMatrix::from_columns(&window, t, p)])?;
                    v[node as usize] = Some(m);
                    queue.push_back(node);
                }
            }
        }
    }
    let matrices = v.into_iter().skip(1).map(|m| m.expect("every message belongs to an alignment set")).collect();
    PrecodingScheme::new(t, delta, p, matrices)
}

/// Rate `Δ/(2Δ+1)` scheme for instances whose alignment sets have no
/// overlapping cycles; re-seeds up to [`BUILD_RETRIES`] times until the
/// scheme verifies.
pub fn build_no_overlap(inst: &Instance, delta: usize, seed: u64, p: u64) -> Result<PrecodingScheme, SchemeError> {
    check_prime(p)?;
    if delta == 0 {
        return Err(SchemeError::InvalidParameter("Δ must be at least 1".into()));
    }
    let a = build_alignment_graph(inst);
    if let Some((set, _)) = has_overlapping_cycles(&a).into_iter().find(|(_, o)| *o) {
        return Err(SchemeError::OverlappingCycles(set));
    }
    for attempt in 0..BUILD_RETRIES {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt));
        let s = no_overlap_attempt(inst, delta, &mut rng, p)?;
        if verify_scheme(inst, &s)?.pass {
            return Ok(s);
        }
    }
    Err(SchemeError::RetriesExhausted(BUILD_RETRIES))
}

/// Column indices into the 43-vector family for messages 1..=6.
const UNICAST11_CORE: [[usize; 5]; 6] = {
    // t1 t2 a23 a24 a35 a45 g3 g4 = 0..8, then private vectors
    const T1: usize = 0;
    const T2: usize = 1;
    const A23: usize = 2;
    const A24: usize = 3;
    const A35: usize = 4;
    const A45: usize = 5;
    const G3: usize = 6;
    const G4: usize = 7;
    [
        [A23, G3, 12, 13, 14],
        [T1, A23, A24, 8, 9],
        [T1, T2, A23, A35, G3],
        [T1, T2, A24, A45, G4],
        [T2, A35, A45, 10, 11],
        [A45, G4, 15, 16, 17],
    ]
};

/// The 13-channel-use, 5-symbol scheme for `unicast11`.
pub fn build_unicast11(seed: u64, p: u64) -> Result<PrecodingScheme, SchemeError> {
    check_prime(p)?;
    let inst = builtin_fixture("unicast11").expect("built-in fixture");
    for attempt in 0..BUILD_RETRIES {
        let family = sample_general_position(13, 43, seed.wrapping_add(attempt), p)?;
        let mut matrices: Vec<FieldMatrix> = UNICAST11_CORE.iter().map(|cols| family.select_columns(cols)).collect();
        for k in 0..5 {
            let cols: Vec<usize> = (18 + 5 * k..23 + 5 * k).collect();
            matrices.push(family.select_columns(&cols));
        }
        let s = PrecodingScheme::new(13, 5, p, matrices)?;
        if verify_scheme(&inst, &s)?.pass {
            return Ok(s);
        }
    }
    Err(SchemeError::RetriesExhausted(BUILD_RETRIES))
}

/// Target `dim(V_i, V_j)` per alignment edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverlapSpec {
    default_union: usize,
    unions: BTreeMap<Edge, usize>,
}

impl OverlapSpec {
    pub fn uniform(union: usize) -> Self {
        OverlapSpec { default_union: union, unions: BTreeMap::new() }
    }

    pub fn with_edge(mut self, i: u32, j: u32, union: usize) -> Self {
        self.unions.insert((i.min(j), i.max(j)), union);
        self
    }

    pub fn union_for(&self, i: u32, j: u32) -> usize {
        *self.unions.get(&(i.min(j), i.max(j))).unwrap_or(&self.default_union)
    }
}

/// Intersection of the spans of `mats`, as a column basis.
fn joint_intersection(mats: &[&FieldMatrix]) -> Result<FieldMatrix, GfError> {
    let mut acc = mats[0].column_basis();
    for m in &mats[1..] {
        if acc.cols() == 0 {
            break;
        }
        acc = crate::gf::intersection_basis(&acc, m)?;
    }
    Ok(acc)
}

fn generic_in(pool: &FieldMatrix, rng: &mut ChaCha8Rng) -> Result<FieldMatrix, GfError> {
    let coeffs = FieldMatrix::random(pool.cols(), 1, pool.prime(), rng);
    pool.mul(&coeffs)
}

fn search_attempt(
    inst: &Instance,
    m: usize,
    t: usize,
    spec: &OverlapSpec,
    rng: &mut ChaCha8Rng,
    p: u64,
) -> Result<Option<PrecodingScheme>, SchemeError> {
    let a = build_alignment_graph(inst);
    let n = inst.message_count();
    let mut v: Vec<Option<FieldMatrix>> = vec![None; n + 1];
    // random breadth-first order over each alignment set
    let mut order = Vec::new();
    let mut seen = MessageSet::EMPTY;
    let mut starts: Vec<u32> = (1..=n as u32).collect();
    starts.shuffle(rng);
    for s in starts {
        if seen.contains(s) {
            continue;
        }
        let mut queue = VecDeque::from([s]);
        seen = seen.with(s);
        while let Some(x) = queue.pop_front() {
            order.push(x);
            let mut nb: Vec<u32> = a.neighbors(x).difference(seen).iter().collect();
            nb.shuffle(rng);
            for y in nb {
                seen = seen.with(y);
                queue.push_back(y);
            }
        }
    }
    for &i in &order {
        let built: Vec<u32> = a.neighbors(i).iter().filter(|j| v[*j as usize].is_some()).collect();
        let mut need: BTreeMap<u32, usize> =
            built.iter().map(|&j| (j, (2 * m).saturating_sub(spec.union_for(i, j)))).filter(|(_, s)| *s > 0).collect();
        let mut cols = FieldMatrix::zeros(t, 0, p);
        while cols.cols() < m && !need.is_empty() {
            let open: Vec<u32> = need.keys().copied().collect();
            let mut cands: Vec<(Vec<u32>, FieldMatrix)> = Vec::new();
            for mask in 1u32..(1 << open.len()) {
                if mask.count_ones() > 3 {
                    continue;
                }
                let group: Vec<u32> = (0..open.len()).filter(|b| mask & (1 << b) != 0).map(|b| open[b]).collect();
                let mats: Vec<&FieldMatrix> = group.iter().map(|j| v[*j as usize].as_ref().unwrap()).collect();
                let pool = joint_intersection(&mats)?;
                if pool.cols() > intersect_dim(&cols, &pool)? {
                    cands.push((group, pool));
                }
            }
            let Some((group, pool)) = cands.choose(rng) else { break };
            let x = generic_in(pool, rng)?;
            cols = FieldMatrix::hcat(&[&cols, &x])?;
            for j in group {
                let left = need[j] - 1;
                if left == 0 {
                    need.remove(j);
                } else {
                    need.insert(*j, left);
                }
            }
        }
        if cols.cols() < m {
            let fresh = FieldMatrix::random(t, m - cols.cols(), p, rng);
            cols = FieldMatrix::hcat(&[&cols, &fresh])?;
        }
        if cols.rank() < m {
            return Ok(None);
        }
        v[i as usize] = Some(cols);
    }
    let matrices = v.into_iter().skip(1).map(|x| x.unwrap()).collect();
    let s = PrecodingScheme::new(t, m, p, matrices)?;
    Ok(verify_scheme(inst, &s)?.pass.then_some(s))
}

/// Randomized search over structured assignments at rate `m/T`.
///
/// Messages are placed in a random breadth-first order. Each new message
/// takes generic vectors from intersections of the spans of up to three
/// already placed alignment neighbours until it shares `2m - union` dimensions
/// with each (the union target coming from `spec`), then fresh vectors. The
/// first trial whose scheme verifies is returned; exhausting `trials` is
/// inconclusive.
pub fn build_pattern_search(
    inst: &Instance,
    m: usize,
    t: usize,
    spec: &OverlapSpec,
    seed: u64,
    p: u64,
    trials: usize,
) -> Result<PrecodingScheme, SchemeError> {
    check_prime(p)?;
    if m == 0 || m > t || trials == 0 {
        return Err(SchemeError::InvalidParameter(format!("need 1 <= m <= T and trials >= 1 (m={m}, T={t}, trials={trials})")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let mut trial_rng = ChaCha8Rng::seed_from_u64(rng.gen());
        if let Some(s) = search_attempt(inst, m, t, spec, &mut trial_rng, p)? {
            return Ok(s);
        }
    }
    Err(SchemeError::SearchFailed(trials))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::DEFAULT_PRIME;
    use crate::graph::internal_conflict_distance;
    use crate::instance::Destination;
    use crate::lp::check_profile_feasible;
    use crate::ratio;

    const P: u64 = DEFAULT_PRIME;

    #[test]
    fn unicast11_scheme_facts() {
        let inst = builtin_fixture("unicast11").unwrap();
        let s = build_unicast11(7, P).unwrap();
        let rep = verify_scheme(&inst, &s).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.rate, ratio(5, 13));
        assert_eq!(rep.edge_unions.len(), 7);
        assert!(rep.edge_unions.iter().all(|(_, d)| *d == 8));
        assert_eq!(s.intersect_dim(2, 3), 2);
        assert_eq!(s.intersect_dim(2, 5), 0);
        let triple = |ids: [u32; 3]| {
            let b = crate::gf::intersection_basis(s.matrix(ids[0]), s.matrix(ids[1])).unwrap();
            intersect_dim(&b, s.matrix(ids[2])).unwrap()
        };
        assert_eq!(triple([2, 3, 4]), 1);
        assert_eq!(triple([3, 4, 5]), 1);
        assert_eq!(s, build_unicast11(7, P).unwrap());
    }

    #[test]
    fn corrupted_scheme_fails_at_that_destination() {
        let inst = builtin_fixture("unicast11").unwrap();
        let s = build_unicast11(1, P).unwrap();
        // message 1 moved inside span(V4, V5): destination 1 sees W4, W5 and
        // destination 4 sees W1, which now overlaps V4
        let inside = FieldMatrix::hcat(&[s.matrix(4), s.matrix(5)]).unwrap().select_columns(&[0, 1, 2, 3, 6]);
        let mut ms: Vec<FieldMatrix> = (1..=11).map(|i| s.matrix(i).clone()).collect();
        ms[0] = inside;
        let bad = PrecodingScheme::new(13, 5, P, ms).unwrap();
        let rep = verify_scheme(&inst, &bad).unwrap();
        assert!(!rep.pass);
        assert_eq!(rep.failures().map(|d| d.dest).collect::<Vec<_>>(), vec![0, 3]);
    }

    #[test]
    fn linear_profile_is_shannon_feasible() {
        let inst = builtin_fixture("unicast11").unwrap();
        let s = build_unicast11(3, P).unwrap();
        let report = check_profile_feasible(&inst, &s.linear_profile(), s.rate());
        assert!(report.is_feasible(), "{:?}", report.violations.first());
    }

    #[test]
    fn scheme_text_round_trip() {
        let s = build_unicast11(2, P).unwrap();
        assert_eq!(PrecodingScheme::from_text(&s.to_text()).unwrap(), s);
        assert!(PrecodingScheme::from_text("blocklen 1 symbols 1 prime 4 messages 0").is_err());
    }

    #[test]
    fn message_count_mismatch() {
        let inst = builtin_fixture("toy-pair").unwrap();
        let s = build_unicast11(2, P).unwrap();
        assert!(matches!(verify_scheme(&inst, &s), Err(SchemeError::MessageCountMismatch { .. })));
    }

    #[test]
    fn fig7_scheme() {
        let inst = builtin_fixture("fig7").unwrap();
        let s = build_no_overlap(&inst, 3, 11, P).unwrap();
        let rep = verify_scheme(&inst, &s).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.rate, ratio(3, 7));
        assert!(rep.edge_unions.iter().all(|(_, d)| *d <= 4));
    }

    #[test]
    fn cycle_overlaps_follow_distance() {
        let inst = builtin_fixture("fig7").unwrap();
        let a = build_alignment_graph(&inst);
        let delta = 3;
        let s = build_no_overlap(&inst, delta, 4, P).unwrap();
        for i in 1..=6u32 {
            for j in i + 1..=6 {
                let d = a.distance(i, j).unwrap();
                assert_eq!(s.intersect_dim(i, j), delta.saturating_sub(d), "{i}-{j}");
            }
        }
    }

    #[test]
    fn conflict_free_set_shares_one_matrix() {
        let inst = Instance::new(
            4,
            vec![Destination::unicast(4, [1, 2]), Destination::unicast(4, [2, 3]), Destination::unicast(1, [])],
            "t",
        )
        .unwrap();
        let s = build_no_overlap(&inst, 2, 0, P).unwrap();
        assert_eq!(s.matrix(1), s.matrix(2));
        assert_eq!(s.matrix(2), s.matrix(3));
        assert!(verify_scheme(&inst, &s).unwrap().pass);
    }

    #[test]
    fn path_with_distance_two_conflict() {
        // path 1-2-3-4-5 with W1 interfered by W3
        let inst = Instance::new(
            6,
            vec![
                Destination::unicast(6, [1, 2]),
                Destination::unicast(6, [2, 3]),
                Destination::unicast(6, [3, 4]),
                Destination::unicast(6, [4, 5]),
                Destination::unicast(1, [3]),
            ],
            "path",
        )
        .unwrap();
        let a = build_alignment_graph(&inst);
        assert_eq!(internal_conflict_distance(&a, &build_conflict_graph(&inst)), Some(2));
        let s = build_no_overlap(&inst, 2, 5, P).unwrap();
        assert_eq!(s.rate(), ratio(2, 5));
        assert!(verify_scheme(&inst, &s).unwrap().pass);
    }

    #[test]
    fn delta_one_uses_fresh_vectors() {
        let inst = builtin_fixture("toy-delta1").unwrap();
        let s = build_no_overlap(&inst, 1, 0, P).unwrap();
        assert_eq!(s.rate(), ratio(1, 3));
    }

    #[test]
    fn overlapping_cycles_are_rejected() {
        let inst = builtin_fixture("unicast11").unwrap();
        assert!(matches!(build_no_overlap(&inst, 2, 0, P), Err(SchemeError::OverlappingCycles(_))));
    }

    #[test]
    fn search_finds_groupcast6() {
        let inst = builtin_fixture("groupcast6").unwrap();
        let s = build_pattern_search(&inst, 5, 13, &OverlapSpec::uniform(8), 1, P, DEFAULT_TRIALS).unwrap();
        assert_eq!(s.rate(), ratio(5, 13));
        assert!(verify_scheme(&inst, &s).unwrap().pass);
    }

    #[test]
    fn search_finds_fig4e() {
        let inst = builtin_fixture("fig4e").unwrap();
        let s = build_pattern_search(&inst, 2, 5, &OverlapSpec::uniform(3), 1, P, DEFAULT_TRIALS).unwrap();
        assert!(verify_scheme(&inst, &s).unwrap().pass);
    }

    #[test]
    fn search_above_linear_capacity_fails() {
        let inst = builtin_fixture("unicast11").unwrap();
        let r = build_pattern_search(&inst, 2, 5, &OverlapSpec::uniform(3), 1, P, 50);
        assert_eq!(r, Err(SchemeError::SearchFailed(50)));
    }
}
