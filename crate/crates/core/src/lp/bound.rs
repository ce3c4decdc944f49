//! Lazy-separation driver maximizing the symmetric rate.

use std::collections::HashSet;

use num_traits::Zero;
use serde_json::{json, Value};

use super::guide::{float_guide, rationalize};
use super::rows::{
    cap_row, elemental_mono, elemental_submod, gen_decoding_rows, gen_shannon_rows, mono_row, submod_row, InequalityRow,
    RowKind,
};
use super::simplex::{RowId, Simplex, VarId};
use super::{EntropyProfile, LpError};
use crate::instance::Instance;
use crate::set::MessageSet;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverOptions {
    /// Upper limit on rows held by the LP before giving up.
    pub max_rows: usize,
    /// Most-violated rows added per separation round.
    pub batch: usize,
    pub max_pivots: usize,
    /// Seed the exact LP from a floating-point solve of the full row set.
    pub guided: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { max_rows: 20_000, batch: 64, max_pivots: 5_000_000, guided: true }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolverStats {
    pub rounds: usize,
    pub lp_rows: usize,
    pub lp_vars: usize,
    pub pivots: usize,
    /// Rows evaluated across all separation scans.
    pub rows_scanned: usize,
    /// The floating-point guide supplied the rows and the returned profile.
    pub guided: bool,
}

/// A row held by the final LP at zero slack, with its dual multiplier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActiveRow {
    pub row: InequalityRow,
    pub dual: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundResult {
    pub rate: Rational,
    pub profile: EntropyProfile,
    /// Tight rows, including `h_A >= 0` bounds (as `mono({},A)`) carrying a
    /// positive multiplier.
    pub active: Vec<ActiveRow>,
    pub stats: SolverStats,
}

impl BoundResult {
    pub fn to_json_value(&self) -> Value {
        let active: Vec<Value> = self
            .active
            .iter()
            .map(|a| json!({ "row": a.row.dump(), "dual": a.dual.to_string() }))
            .collect();
        json!({
            "rate": self.rate.to_string(),
            "profile": self.profile.to_json_value(),
            "active": active,
            "stats": {
                "rounds": self.stats.rounds,
                "lp_rows": self.stats.lp_rows,
                "lp_vars": self.stats.lp_vars,
                "pivots": self.stats.pivots,
                "rows_scanned": self.stats.rows_scanned,
                "guided": self.stats.guided,
            },
        })
    }

    /// Rows with a positive multiplier, i.e. the support of the dual certificate.
    pub fn dual_support(&self) -> impl Iterator<Item = &ActiveRow> {
        self.active.iter().filter(|a| !a.dual.is_zero())
    }
}

struct LazyLp {
    n: usize,
    lp: Simplex,
    rate: VarId,
    vars: Vec<Option<VarId>>,
    rows: Vec<(InequalityRow, RowId)>,
    held: HashSet<RowKind>,
}

impl LazyLp {
    fn new(n: usize, max_pivots: usize) -> Self {
        let mut lp = Simplex::new(max_pivots);
        let rate = lp.add_var(Rational::from_integer(1));
        LazyLp { n, lp, rate, vars: vec![None; 1 << n], rows: Vec::new(), held: HashSet::new() }
    }

    fn var(&mut self, s: MessageSet) -> Result<VarId, LpError> {
        if let Some(v) = self.vars[s.bits() as usize] {
            return Ok(v);
        }
        let v = self.lp.add_var(Rational::zero());
        self.vars[s.bits() as usize] = Some(v);
        // keeps every restricted LP bounded through the cap
        let full = MessageSet::full(self.n);
        if s != full {
            self.add(mono_row(s, full))?;
        }
        Ok(v)
    }

    fn add(&mut self, row: InequalityRow) -> Result<(), LpError> {
        if row.is_trivial() || !self.held.insert(row.kind.clone()) {
            return Ok(());
        }
        if row.equality || row.constant < Rational::zero() {
            return Err(LpError::Internal(format!("row not in <= form with nonnegative bound: {}", row.dump())));
        }
        let mut coeffs = Vec::with_capacity(row.terms.len() + 1);
        for &(s, c) in &row.terms {
            if !s.is_empty() {
                coeffs.push((self.var(s)?, -c));
            }
        }
        if !row.rate.is_zero() {
            coeffs.push((self.rate, -row.rate));
        }
        let id = self.lp.add_row(&coeffs, row.constant)?;
        self.rows.push((row, id));
        Ok(())
    }

    /// Values of LP variables, extended to every subset by the minimum over
    /// held supersets (the full set is always held).
    fn completed_profile(&self) -> EntropyProfile {
        let size = 1usize << self.n;
        let mut vals = vec![Rational::zero(); size];
        for bits in (1..size).rev() {
            vals[bits] = match self.vars[bits] {
                Some(v) => self.lp.value(v),
                None => (0..self.n)
                    .filter(|i| bits & (1 << i) == 0)
                    .map(|i| vals[bits | (1 << i)])
                    .min()
                    .expect("the full set is always held"),
            };
        }
        EntropyProfile::from_fn(self.n, |s| vals[s.bits() as usize])
    }
}

/// Keeps the `cap` most violated rows seen, ordered by violation then scan order.
struct Worst {
    cap: usize,
    items: Vec<(Rational, usize, RowKind)>,
    total: usize,
}

impl Worst {
    fn offer(&mut self, value: Rational, order: usize, kind: impl FnOnce() -> RowKind) {
        if value >= Rational::zero() {
            return;
        }
        self.total += 1;
        if self.items.len() == self.cap && value >= self.items.last().unwrap().0 {
            return;
        }
        let pos = self.items.partition_point(|(v, o, _)| (*v, *o) <= (value, order));
        self.items.insert(pos, (value, order, kind()));
        self.items.truncate(self.cap);
    }
}

fn scan_violations(
    n: usize,
    p: &EntropyProfile,
    r: Rational,
    fixed: &[InequalityRow],
    batch: usize,
    stats: &mut SolverStats,
) -> Vec<RowKind> {
    let mut worst = Worst { cap: batch, items: Vec::new(), total: 0 };
    let mut order = 0;
    for row in fixed {
        worst.offer(row.evaluate(p, r), order, || row.kind.clone());
        order += 1;
    }
    worst.offer(Rational::from_integer(1) - p.get(MessageSet::full(n)), order, || RowKind::Cap);
    order += 1;
    for (lower, upper) in elemental_mono(n) {
        worst.offer(p.get(upper) - p.get(lower), order, || RowKind::Mono { lower, upper });
        order += 1;
    }
    for (a, b) in elemental_submod(n) {
        let v = p.get(a) + p.get(b) - p.get(a.union(b)) - p.get(a.intersection(b));
        worst.offer(v, order, || RowKind::Submod { a, b });
        order += 1;
    }
    stats.rows_scanned += order;
    worst.items.into_iter().map(|(_, _, k)| k).collect()
}

fn shannon_kind_row(kind: &RowKind, n: usize) -> InequalityRow {
    match *kind {
        RowKind::Cap => cap_row(n),
        RowKind::Mono { lower, upper } => mono_row(lower, upper),
        RowKind::Submod { a, b } => submod_row(a, b),
        _ => unreachable!("only Shannon rows are separated lazily"),
    }
}

/// Maximizes `R` subject to the Shannon rows, the decoding rows of `inst` and
/// `extra`.
///
/// With `opts.guided`, a floating-point solve of the full row set picks the
/// rows carrying its dual; the exact LP over those rows gives an upper bound
/// with an exact dual certificate, and the rationalized float profile is
/// accepted only if it satisfies every row exactly at that rate. Otherwise
/// Shannon rows are separated lazily: the decoding rows and `extra` are held
/// from the start and the most violated elemental rows are added each round.
/// Either way the returned profile satisfies every row exactly.
pub fn solve_with_rows(inst: &Instance, extra: &[InequalityRow], opts: &SolverOptions) -> Result<BoundResult, LpError> {
    let n = inst.message_count();
    if n > 20 {
        return Err(LpError::TooManyMessages(n));
    }
    let mut fixed = gen_decoding_rows(inst);
    fixed.extend(extra.iter().filter(|r| !r.is_trivial()).cloned());
    let mut lazy = LazyLp::new(n, opts.max_pivots);
    lazy.add(cap_row(n))?;
    for row in &fixed {
        lazy.add(row.clone())?;
    }
    let mut stats = SolverStats::default();
    if opts.guided {
        if let Some(done) = guided_attempt(n, &fixed, &mut lazy, &mut stats)? {
            return Ok(done);
        }
    }
    loop {
        stats.rounds += 1;
        let rate = lazy.lp.solve()?;
        let profile = lazy.completed_profile();
        let violated = scan_violations(n, &profile, rate, &fixed, opts.batch, &mut stats);
        if violated.is_empty() {
            return Ok(finish(&lazy, profile, rate, stats));
        }
        for kind in violated {
            let row = match kind {
                RowKind::Cap | RowKind::Mono { .. } | RowKind::Submod { .. } => shannon_kind_row(&kind, n),
                _ => return Err(LpError::Internal(format!("held row {kind} violated by the LP solution"))),
            };
            lazy.add(row)?;
        }
        if lazy.lp.row_count() > opts.max_rows {
            return Err(LpError::RowLimit(opts.max_rows));
        }
    }
}

fn guided_attempt(
    n: usize,
    fixed: &[InequalityRow],
    lazy: &mut LazyLp,
    stats: &mut SolverStats,
) -> Result<Option<BoundResult>, LpError> {
    let mut rows = fixed.to_vec();
    rows.extend(gen_shannon_rows(n).filter(|r| !r.equality && !r.is_trivial()));
    let Some(guide) = float_guide(n, &rows) else { return Ok(None) };
    for &k in &guide.support {
        lazy.add(rows[k].clone())?;
    }
    stats.rounds += 1;
    let rate = lazy.lp.solve()?;
    let profile = EntropyProfile::from_fn(n, |s| rationalize(guide.values[s.bits() as usize]));
    stats.rows_scanned += rows.len();
    if !rows.iter().all(|r| r.is_satisfied(&profile, rate)) {
        return Ok(None);
    }
    stats.guided = true;
    Ok(Some(finish(lazy, profile, rate, std::mem::take(stats))))
}

fn finish(lazy: &LazyLp, profile: EntropyProfile, rate: Rational, mut stats: SolverStats) -> BoundResult {
    stats.lp_rows = lazy.lp.row_count();
    stats.lp_vars = lazy.lp.var_count();
    stats.pivots = lazy.lp.pivots();
    let active = active_rows(lazy, &profile, rate);
    BoundResult { rate, profile, active, stats }
}

/// Rows of the exact LP that are tight at `(profile, rate)`, with their duals.
fn active_rows(lazy: &LazyLp, profile: &EntropyProfile, rate: Rational) -> Vec<ActiveRow> {
    let mut active: Vec<ActiveRow> = lazy
        .rows
        .iter()
        .filter(|(row, _)| row.evaluate(profile, rate).is_zero())
        .map(|(row, id)| ActiveRow { row: row.clone(), dual: lazy.lp.dual(*id) })
        .collect();
    for (bits, v) in lazy.vars.iter().enumerate() {
        if let Some(v) = v {
            let d = -lazy.lp.reduced_cost(*v);
            if !d.is_zero() {
                active.push(ActiveRow { row: mono_row(MessageSet::EMPTY, MessageSet::from_bits(bits as u32)), dual: d });
            }
        }
    }
    active
}

/// The Shannon-only bound.
pub fn solve_symmetric_bound(inst: &Instance, opts: &SolverOptions) -> Result<BoundResult, LpError> {
    solve_with_rows(inst, &[], opts)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub row: InequalityRow,
    /// Value of the row's left-hand side (negative, or nonzero for equalities).
    pub slack: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityReport {
    pub rows_checked: usize,
    pub violations: Vec<Violation>,
}

impl FeasibilityReport {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `rows` at `(p, r)`.
pub fn check_rows<'a>(p: &EntropyProfile, r: Rational, rows: impl IntoIterator<Item = &'a InequalityRow>) -> FeasibilityReport {
    let mut report = FeasibilityReport { rows_checked: 0, violations: Vec::new() };
    for row in rows {
        report.rows_checked += 1;
        if !row.is_satisfied(p, r) {
            report.violations.push(Violation { row: row.clone(), slack: row.evaluate(p, r) });
        }
    }
    report
}

/// Checks every Shannon and decoding row of `inst` at `(p, r)`.
pub fn check_profile_feasible(inst: &Instance, p: &EntropyProfile, r: Rational) -> FeasibilityReport {
    let n = inst.message_count();
    assert_eq!(p.message_count(), n, "profile and instance disagree on the message count");
    let decoding = gen_decoding_rows(inst);
    let mut report = FeasibilityReport { rows_checked: 0, violations: Vec::new() };
    for row in gen_shannon_rows(n).chain(decoding) {
        report.rows_checked += 1;
        if !row.is_satisfied(p, r) {
            let slack = row.evaluate(p, r);
            report.violations.push(Violation { row, slack });
        }
    }
    report
}
