//! Zhang-Yeung and Ingleton rows, tuple enumeration and certificates.
//!
//! Both inequalities are stated for the composite variables
//! `X_A = (S, W_{A^c})`. A joint entropy over a collection of composites is
//! `H(S, W_{(∩A_i)^c}) = n·(h_∩ + (N - |∩|)·R)` because the messages are
//! independent, each carrying `n·R`.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use thiserror::Error;

use crate::fixtures::builtin_certificate_text;
use crate::graph::{alignment_sets, build_alignment_graph, build_conflict_graph, internal_conflicts};
use crate::instance::Instance;
use crate::lp::{solve_symmetric_bound, solve_with_rows, BoundResult, InequalityRow, LpError, RowBuilder, RowError, RowKind, SolverOptions};
use crate::set::MessageSet;
use crate::{fixtures, parse_rational, Rational};

pub const DEFAULT_BUDGET: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FourTuple {
    pub a: MessageSet,
    pub b: MessageSet,
    pub c: MessageSet,
    pub d: MessageSet,
}

impl FourTuple {
    pub fn new(a: MessageSet, b: MessageSet, c: MessageSet, d: MessageSet) -> Self {
        FourTuple { a, b, c, d }
    }

    pub fn parts(&self) -> [MessageSet; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn swap_ab(&self) -> Self {
        FourTuple { a: self.b, b: self.a, ..*self }
    }
}

impl fmt::Display for FourTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.a, self.b, self.c, self.d)
    }
}

fn check_range(family: &'static str, n: usize, t: &FourTuple) -> Result<(), RowError> {
    let all = MessageSet::full(n);
    match t.parts().iter().find(|s| !s.is_subset(all)) {
        Some(s) => Err(RowError::new(family, format!("{s} is not a subset of {all}"))),
        None => Ok(()),
    }
}

/// Adds `coef·H(X_S : S ∈ group)` to the builder.
fn joint(b: &mut RowBuilder, n: usize, coef: i128, group: &[MessageSet]) {
    let common = group.iter().fold(MessageSet::full(n), |acc, s| acc.intersection(*s));
    b.h(common, coef).rate(coef * (n - common.len()) as i128);
}

/// `3H(A,C) + 3H(A,D) + 3H(C,D) + H(B,C) + H(B,D)
///   >= 2H(C) + 2H(D) + H(A,B) + H(A) + H(B,C,D) + 4H(A,C,D)`
/// over the composites of `t`. A tuple whose coefficients all cancel yields a
/// trivial row (see [`InequalityRow::is_trivial`]).
pub fn gen_zy_row(n: usize, t: &FourTuple) -> Result<InequalityRow, RowError> {
    check_range("zy", n, t)?;
    let FourTuple { a, b, c, d } = *t;
    let mut r = RowBuilder::default();
    joint(&mut r, n, 3, &[a, c]);
    joint(&mut r, n, 3, &[a, d]);
    joint(&mut r, n, 3, &[c, d]);
    joint(&mut r, n, 1, &[b, c]);
    joint(&mut r, n, 1, &[b, d]);
    joint(&mut r, n, -2, &[c]);
    joint(&mut r, n, -2, &[d]);
    joint(&mut r, n, -1, &[a, b]);
    joint(&mut r, n, -1, &[a]);
    joint(&mut r, n, -1, &[b, c, d]);
    joint(&mut r, n, -4, &[a, c, d]);
    Ok(r.build(RowKind::ZhangYeung(*t)))
}

/// Ingleton in rank form for disjoint `p, q, r, s`:
/// `h_pr + h_ps + h_rs + h_rq + h_sq >= h_r + h_s + h_pq + h_prs + h_qrs`.
pub fn gen_ingleton_row(n: usize, t: &FourTuple) -> Result<InequalityRow, RowError> {
    check_range("ingleton", n, t)?;
    let [p, q, r, s] = t.parts();
    for (i, x) in t.parts().iter().enumerate() {
        for y in &t.parts()[i + 1..] {
            if !x.is_disjoint(*y) {
                return Err(RowError::new("ingleton", format!("{x} and {y} overlap")));
            }
        }
    }
    let mut b = RowBuilder::default();
    b.h(p.union(r), 1).h(p.union(s), 1).h(r.union(s), 1).h(r.union(q), 1).h(s.union(q), 1);
    b.h(r, -1).h(s, -1).h(p.union(q), -1).h(p.union(r).union(s), -1).h(q.union(r).union(s), -1);
    Ok(b.build(RowKind::Ingleton(*t)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Shannon,
    ZhangYeung,
    Ingleton,
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "shannon" => Ok(Family::Shannon),
            "zy" | "zhang-yeung" => Ok(Family::ZhangYeung),
            "ingleton" => Ok(Family::Ingleton),
            other => Err(format!("unknown family {other:?} (expected shannon, zy or ingleton)")),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Shannon => "shannon",
            Family::ZhangYeung => "zy",
            Family::Ingleton => "ingleton",
        })
    }
}

/// Two triangles of the alignment graph sharing the edge `{r, s}`; `p` is the
/// tip of the lexicographically smaller triangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Diamond {
    p: u32,
    q: u32,
    r: u32,
    s: u32,
}

fn diamonds(set: MessageSet, triangles: &[[u32; 3]]) -> Vec<Diamond> {
    let tris: Vec<MessageSet> = triangles
        .iter()
        .map(|t| MessageSet::from_ids(t.iter().copied()))
        .filter(|t| t.is_subset(set))
        .collect();
    let mut out = Vec::new();
    for (i, t1) in tris.iter().enumerate() {
        for t2 in &tris[i + 1..] {
            let shared = t1.intersection(*t2);
            if shared.len() != 2 {
                continue;
            }
            let (lo, hi) = if t1.iter().lt(t2.iter()) { (t1, t2) } else { (t2, t1) };
            let mut sh = shared.iter();
            let (r, s) = (sh.next().unwrap(), sh.next().unwrap());
            out.push(Diamond { p: lo.difference(shared).max_id(), q: hi.difference(shared).max_id(), r, s });
        }
    }
    out
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let v = [a, b, c, d];
                    if (0..4).all(|x| v.contains(&x)) {
                        out.push(v);
                    }
                }
            }
        }
    }
    out
}

/// Candidate tuples for `family`, at most `budget`, in a deterministic order.
///
/// Only alignment sets holding an internal conflict contribute. For
/// Zhang-Yeung each diamond `p-{r,s}-q` yields the tuple
/// `({p,q,s}, {p,q,r}, {p,r,s}, {q,r,s})`, its `A/B` swap, then the remaining
/// orderings of the same four triples. For Ingleton each diamond yields
/// `({p},{q},{r},{s})`, followed by every ordered 4-tuple of distinct
/// messages of the set. Tuples producing a row already emitted are skipped.
pub fn enumerate_tuples(inst: &Instance, family: Family, budget: usize) -> Vec<FourTuple> {
    let a = build_alignment_graph(inst);
    let c = build_conflict_graph(inst);
    let conflicts = internal_conflicts(&a, &c);
    let triangles = a.triangles();
    let n = inst.message_count();
    let mut out = Vec::new();
    let mut seen_rows = HashSet::new();
    let mut push = |t: FourTuple, out: &mut Vec<FourTuple>| {
        if out.len() >= budget {
            return;
        }
        let row = match family {
            Family::ZhangYeung => gen_zy_row(n, &t),
            Family::Ingleton => gen_ingleton_row(n, &t),
            Family::Shannon => return,
        };
        let Ok(row) = row else { return };
        if !row.is_trivial() && seen_rows.insert((row.terms.clone(), row.rate)) {
            out.push(t);
        }
    };
    for set in alignment_sets(&a) {
        if !conflicts.iter().any(|((x, y), _)| set.contains(*x) && set.contains(*y)) {
            continue;
        }
        let ds = diamonds(set, &triangles);
        match family {
            Family::Shannon => {}
            Family::ZhangYeung => {
                for d in &ds {
                    let ms = |ids: [u32; 3]| MessageSet::from_ids(ids);
                    let first = FourTuple::new(ms([d.p, d.q, d.s]), ms([d.p, d.q, d.r]), ms([d.p, d.r, d.s]), ms([d.q, d.r, d.s]));
                    push(first, &mut out);
                    push(first.swap_ab(), &mut out);
                    let mut triples = first.parts();
                    triples.sort();
                    for perm in permutations4() {
                        push(FourTuple::new(triples[perm[0]], triples[perm[1]], triples[perm[2]], triples[perm[3]]), &mut out);
                    }
                }
            }
            Family::Ingleton => {
                let one = MessageSet::singleton;
                for d in &ds {
                    push(FourTuple::new(one(d.p), one(d.q), one(d.r), one(d.s)), &mut out);
                }
                let ids: Vec<u32> = set.iter().collect();
                for &p in &ids {
                    for &q in &ids {
                        for &r in &ids {
                            for &s in &ids {
                                if MessageSet::from_ids([p, q, r, s]).len() == 4 {
                                    push(FourTuple::new(one(p), one(q), one(r), one(s)), &mut out);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

pub fn family_rows(n: usize, family: Family, tuples: &[FourTuple]) -> Result<Vec<InequalityRow>, RowError> {
    tuples
        .iter()
        .filter_map(|t| match family {
            Family::Shannon => None,
            Family::ZhangYeung => Some(gen_zy_row(n, t)),
            Family::Ingleton => Some(gen_ingleton_row(n, t)),
        })
        .filter(|r| !matches!(r, Ok(row) if row.is_trivial()))
        .collect()
}

/// Shannon + decoding rows plus the rows of the given tuples.
pub fn bound_with_tuples(inst: &Instance, family: Family, tuples: &[FourTuple], opts: &SolverOptions) -> Result<BoundResult, LpError> {
    let rows = family_rows(inst.message_count(), family, tuples)?;
    solve_with_rows(inst, &rows, opts)
}

/// Bound for `family` with the default tuple enumeration.
pub fn augmented_bound(inst: &Instance, family: Family, budget: usize, opts: &SolverOptions) -> Result<BoundResult, LpError> {
    match family {
        Family::Shannon => solve_symmetric_bound(inst, opts),
        _ => bound_with_tuples(inst, family, &enumerate_tuples(inst, family, budget), opts),
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CertError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: reference to undefined row: {message}")]
    UndefinedRow { line: usize, message: String },
    #[error("line {line}: negative weight {weight}")]
    NegativeWeight { line: usize, weight: Rational },
    #[error("unknown certificate {0:?}")]
    Unknown(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertStep {
    pub kind: RowKind,
    pub weight: Rational,
}

/// Weighted rows whose sum should read `c·R <= v` with `v/c <= claim`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub steps: Vec<CertStep>,
    pub claim: Rational,
}

/// Splits on whitespace outside braces.
fn tokens(line: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0;
    for ch in line.chars() {
        match ch {
            '{' => depth += 1,
            '}' => depth -= 1,
            c if c.is_whitespace() && depth == 0 => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

impl Certificate {
    /// Parses the `family params weight` / `claims R <= v` text form. Row
    /// parameters are checked against an instance by [`check_certificate`].
    pub fn parse(text: &str) -> Result<Certificate, CertError> {
        let mut steps = Vec::new();
        let mut claim = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap().trim();
            if body.is_empty() {
                continue;
            }
            let toks = tokens(body);
            let perr = |message: String| CertError::Parse { line, message };
            if toks[0] == "claims" {
                if toks.len() != 4 || toks[1] != "R" || toks[2] != "<=" {
                    return Err(perr("expected `claims R <= num/den`".into()));
                }
                claim = Some(parse_rational(&toks[3]).ok_or_else(|| perr(format!("bad bound {:?}", toks[3])))?);
                continue;
            }
            if claim.is_some() {
                return Err(perr("steps after the claims line".into()));
            }
            let (weight_tok, params) = toks[1..].split_last().ok_or_else(|| perr("missing weight".into()))?;
            let weight = parse_rational(weight_tok).ok_or_else(|| perr(format!("bad weight {weight_tok:?}")))?;
            if weight < Rational::zero() {
                return Err(CertError::NegativeWeight { line, weight });
            }
            let undefined = |message: String| CertError::UndefinedRow { line, message };
            let set = |s: &String| s.parse::<MessageSet>().map_err(|e| undefined(e.to_string()));
            let dest = |s: &String| match s.parse::<usize>() {
                Ok(k) if k >= 1 => Ok(k - 1),
                _ => Err(undefined(format!("bad destination {s:?}"))),
            };
            let arity = |k: usize| {
                if params.len() == k {
                    Ok(())
                } else {
                    Err(undefined(format!("{} takes {k} parameters, got {}", toks[0], params.len())))
                }
            };
            let kind = match toks[0].as_str() {
                "zero" => arity(0).map(|_| RowKind::Empty)?,
                "cap" => arity(0).map(|_| RowKind::Cap)?,
                "mono" => {
                    arity(2)?;
                    RowKind::Mono { lower: set(&params[0])?, upper: set(&params[1])? }
                }
                "submod" => {
                    arity(2)?;
                    RowKind::Submod { a: set(&params[0])?, b: set(&params[1])? }
                }
                "interf" => {
                    arity(1)?;
                    RowKind::Interference { dest: dest(&params[0])? }
                }
                "decode" => {
                    arity(2)?;
                    RowKind::Decoding { dest: dest(&params[0])?, side: set(&params[1])? }
                }
                fam @ ("zy" | "ingleton") => {
                    arity(4)?;
                    let t = FourTuple::new(set(&params[0])?, set(&params[1])?, set(&params[2])?, set(&params[3])?);
                    if fam == "zy" {
                        RowKind::ZhangYeung(t)
                    } else {
                        RowKind::Ingleton(t)
                    }
                }
                other => return Err(undefined(format!("unknown family {other:?}"))),
            };
            steps.push(CertStep { kind, weight });
        }
        let claim = claim.ok_or(CertError::Parse { line: text.lines().count(), message: "missing claims line".into() })?;
        Ok(Certificate { steps, claim })
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            let mut parts = vec![s.kind.family().to_string()];
            parts.extend(s.kind.params());
            parts.push(s.weight.to_string());
            writeln!(f, "{}", parts.join(" "))?;
        }
        writeln!(f, "claims R <= {}", self.claim)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertVerdict {
    pub valid: bool,
    /// `c` in the residual `c·R <= v`.
    pub rate_coefficient: Rational,
    /// `v` in the residual `c·R <= v`.
    pub constant: Rational,
    /// `v/c` when `c > 0`.
    pub implied_bound: Option<Rational>,
    /// Profile coefficients that failed to cancel.
    pub leftover: Vec<(MessageSet, Rational)>,
    pub reason: String,
}

/// Instantiates every step on `inst` and forms the weighted sum, independently
/// of any LP. `h_∅` is taken as zero.
pub fn check_certificate(inst: &Instance, cert: &Certificate) -> Result<CertVerdict, CertError> {
    let mut terms: BTreeMap<MessageSet, Rational> = BTreeMap::new();
    let mut rate = Rational::zero();
    let mut constant = Rational::zero();
    for (i, step) in cert.steps.iter().enumerate() {
        if step.weight < Rational::zero() {
            return Err(CertError::NegativeWeight { line: i + 1, weight: step.weight });
        }
        let row = step
            .kind
            .instantiate(inst)
            .map_err(|e| CertError::UndefinedRow { line: i + 1, message: e.to_string() })?;
        for (s, c) in &row.terms {
            if !s.is_empty() {
                *terms.entry(*s).or_insert_with(Rational::zero) += *c * step.weight;
            }
        }
        rate += row.rate * step.weight;
        constant += row.constant * step.weight;
    }
    let leftover: Vec<(MessageSet, Rational)> = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    // sum reads rate·R + constant >= 0, i.e. (-rate)·R <= constant
    let c = -rate;
    let implied_bound = (c > Rational::zero()).then(|| constant / c);
    let reason = if !leftover.is_empty() {
        format!("{} profile coefficients do not cancel", leftover.len())
    } else if implied_bound.is_none() {
        "no positive R coefficient in the residual".to_string()
    } else if implied_bound.unwrap() > cert.claim {
        format!("residual gives R <= {}, weaker than the claimed {}", implied_bound.unwrap(), cert.claim)
    } else {
        String::new()
    };
    Ok(CertVerdict { valid: reason.is_empty(), rate_coefficient: c, constant, implied_bound, leftover, reason })
}

/// Certificate built from the LP's dual multipliers.
pub fn dual_certificate(result: &BoundResult) -> Certificate {
    let steps = result
        .dual_support()
        .filter(|a| a.row.kind != RowKind::Empty)
        .map(|a| CertStep { kind: a.row.kind.clone(), weight: a.dual })
        .collect();
    Certificate { steps, claim: result.rate }
}

pub use fixtures::CERTIFICATE_NAMES;

/// A frozen certificate with the fixture it refers to.
pub fn builtin_certificate(name: &str) -> Result<(Instance, Certificate), CertError> {
    let (fixture, text) = builtin_certificate_text(name).ok_or_else(|| CertError::Unknown(name.to_string()))?;
    let inst = fixtures::builtin_fixture(fixture).expect("certificate fixtures exist");
    Ok((inst, Certificate::parse(text)?))
}
