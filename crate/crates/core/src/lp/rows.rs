//! Inequality rows over the profile variables `h_A` and the symmetric rate `R`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use super::EntropyProfile;
use crate::instance::Instance;
use crate::nonshannon::{self, FourTuple};
use crate::set::MessageSet;
use crate::Rational;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid {family} row: {reason}")]
pub struct RowError {
    pub family: &'static str,
    pub reason: String,
}

impl RowError {
    pub(crate) fn new(family: &'static str, reason: impl Into<String>) -> Self {
        RowError { family, reason: reason.into() }
    }
}

/// Which constraint a row instantiates. Destination indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RowKind {
    /// `h_∅ = 0`.
    Empty,
    /// `h_full <= 1`.
    Cap,
    /// `h_upper >= h_lower` for `lower ⊆ upper`.
    Mono { lower: MessageSet, upper: MessageSet },
    /// `h_a + h_b >= h_{a∪b} + h_{a∩b}`.
    Submod { a: MessageSet, b: MessageSet },
    /// `h_I <= 1 - |D|·R` at a destination.
    Interference { dest: usize },
    /// `h_{B∪D} >= h_B + |D|·R` for `B ⊆ I` at a destination.
    Decoding { dest: usize, side: MessageSet },
    ZhangYeung(FourTuple),
    Ingleton(FourTuple),
}

impl RowKind {
    pub fn family(&self) -> &'static str {
        match self {
            RowKind::Empty => "zero",
            RowKind::Cap => "cap",
            RowKind::Mono { .. } => "mono",
            RowKind::Submod { .. } => "submod",
            RowKind::Interference { .. } => "interf",
            RowKind::Decoding { .. } => "decode",
            RowKind::ZhangYeung(_) => "zy",
            RowKind::Ingleton(_) => "ingleton",
        }
    }

    /// Parameters in their textual form (destinations 1-based).
    pub fn params(&self) -> Vec<String> {
        match self {
            RowKind::Empty | RowKind::Cap => vec![],
            RowKind::Mono { lower, upper } => vec![lower.to_string(), upper.to_string()],
            RowKind::Submod { a, b } => vec![a.to_string(), b.to_string()],
            RowKind::Interference { dest } => vec![(dest + 1).to_string()],
            RowKind::Decoding { dest, side } => vec![(dest + 1).to_string(), side.to_string()],
            RowKind::ZhangYeung(t) | RowKind::Ingleton(t) => t.parts().iter().map(|s| s.to_string()).collect(),
        }
    }

    /// Builds the row this kind denotes for `inst`, validating its parameters.
    pub fn instantiate(&self, inst: &Instance) -> Result<InequalityRow, RowError> {
        let n = inst.message_count();
        let all = MessageSet::full(n);
        let in_range = |s: MessageSet| s.is_subset(all);
        let fam = self.family();
        let dest = |k: usize| {
            inst.destinations().get(k).ok_or_else(|| RowError::new(fam, format!("no destination {}", k + 1)))
        };
        let mut b = RowBuilder::default();
        match self {
            RowKind::Empty => {
                b.h(MessageSet::EMPTY, 1);
                return Ok(b.build_eq(self.clone()));
            }
            RowKind::Cap => {
                b.h(all, -1).constant(1);
            }
            RowKind::Mono { lower, upper } => {
                if !in_range(*upper) || !lower.is_subset(*upper) {
                    return Err(RowError::new(fam, format!("need {lower} ⊆ {upper} ⊆ {all}")));
                }
                b.h(*upper, 1).h(*lower, -1);
            }
            RowKind::Submod { a, b: c } => {
                if !in_range(a.union(*c)) {
                    return Err(RowError::new(fam, format!("{a} or {c} outside {all}")));
                }
                b.h(*a, 1).h(*c, 1).h(a.union(*c), -1).h(a.intersection(*c), -1);
            }
            RowKind::Interference { dest: k } => {
                let d = dest(*k)?;
                b.h(d.interferers, -1).rate(-(d.desired.len() as i128)).constant(1);
            }
            RowKind::Decoding { dest: k, side } => {
                let d = dest(*k)?;
                if !side.is_subset(d.interferers) {
                    return Err(RowError::new(fam, format!("{side} is not inside the interferers {}", d.interferers)));
                }
                b.h(side.union(d.desired), 1).h(*side, -1).rate(-(d.desired.len() as i128));
            }
            RowKind::ZhangYeung(t) => return nonshannon::gen_zy_row(n, t),
            RowKind::Ingleton(t) => return nonshannon::gen_ingleton_row(n, t),
        }
        Ok(b.build(self.clone()))
    }
}

impl fmt::Display for RowKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.family(), self.params().join(","))
    }
}

/// `Σ c_A·h_A + rate·R + constant >= 0` (or `= 0` when `equality`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InequalityRow {
    pub kind: RowKind,
    /// Nonzero coefficients in subset bitmask order.
    pub terms: Vec<(MessageSet, Rational)>,
    pub rate: Rational,
    pub constant: Rational,
    pub equality: bool,
}

impl InequalityRow {
    /// True when every coefficient vanishes (the row reads `c >= 0`).
    pub fn is_trivial(&self) -> bool {
        self.terms.is_empty() && self.rate.is_zero()
    }

    pub fn coefficient(&self, s: MessageSet) -> Rational {
        self.terms.iter().find(|(t, _)| *t == s).map_or(Rational::zero(), |(_, c)| *c)
    }

    /// Left-hand side at `(p, r)`; the row holds iff this is `>= 0` (`= 0` for equalities).
    pub fn evaluate(&self, p: &EntropyProfile, r: Rational) -> Rational {
        self.terms.iter().fold(self.rate * r + self.constant, |acc, (s, c)| acc + *c * p.get(*s))
    }

    pub fn is_satisfied(&self, p: &EntropyProfile, r: Rational) -> bool {
        let v = self.evaluate(p, r);
        if self.equality {
            v.is_zero()
        } else {
            v >= Rational::zero()
        }
    }

    /// `family(params): Σ coeff·h{subset} + coeff·R + c >= 0`.
    pub fn dump(&self) -> String {
        let mut parts: Vec<(Rational, String)> = self.terms.iter().map(|(s, c)| (*c, format!("h{s}"))).collect();
        if !self.rate.is_zero() {
            parts.push((self.rate, "R".into()));
        }
        let mut lhs = String::new();
        for (i, (c, name)) in parts.iter().enumerate() {
            let neg = *c < Rational::zero();
            let mag = if neg { -*c } else { *c };
            match (i, neg) {
                (0, true) => lhs.push('-'),
                (0, false) => {}
                (_, true) => lhs.push_str(" - "),
                (_, false) => lhs.push_str(" + "),
            }
            if mag != Rational::from_integer(1) {
                lhs.push_str(&format!("{mag}·"));
            }
            lhs.push_str(name);
        }
        if !self.constant.is_zero() {
            let neg = self.constant < Rational::zero();
            let mag = if neg { -self.constant } else { self.constant };
            if lhs.is_empty() {
                lhs = self.constant.to_string();
            } else {
                lhs.push_str(if neg { " - " } else { " + " });
                lhs.push_str(&mag.to_string());
            }
        }
        if lhs.is_empty() {
            lhs.push('0');
        }
        format!("{}: {lhs} {} 0", self.kind, if self.equality { "=" } else { ">=" })
    }
}

/// Accumulates coefficients, merging repeated subsets and dropping zeros.
#[derive(Debug, Default, Clone)]
pub struct RowBuilder {
    terms: BTreeMap<MessageSet, Rational>,
    rate: Rational,
    constant: Rational,
}

impl RowBuilder {
    pub fn h(&mut self, s: MessageSet, c: i128) -> &mut Self {
        self.h_ratio(s, Rational::from_integer(c))
    }

    pub fn h_ratio(&mut self, s: MessageSet, c: Rational) -> &mut Self {
        *self.terms.entry(s).or_insert_with(Rational::zero) += c;
        self
    }

    pub fn rate(&mut self, c: i128) -> &mut Self {
        self.rate += Rational::from_integer(c);
        self
    }

    pub fn constant(&mut self, c: i128) -> &mut Self {
        self.constant += Rational::from_integer(c);
        self
    }

    fn terms(&self) -> Vec<(MessageSet, Rational)> {
        self.terms.iter().filter(|(_, c)| !c.is_zero()).map(|(s, c)| (*s, *c)).collect()
    }

    /// Builds `terms + rate·R + constant >= 0`; `h_∅` terms are dropped.
    pub fn build(&self, kind: RowKind) -> InequalityRow {
        let mut terms = self.terms();
        terms.retain(|(s, _)| !s.is_empty());
        InequalityRow { kind, terms, rate: self.rate, constant: self.constant, equality: false }
    }

    fn build_eq(&self, kind: RowKind) -> InequalityRow {
        InequalityRow { kind, terms: self.terms(), rate: self.rate, constant: self.constant, equality: true }
    }
}

fn shannon_row(kind: RowKind, n: usize) -> InequalityRow {
    let all = MessageSet::full(n);
    let mut b = RowBuilder::default();
    match kind {
        RowKind::Empty => return b.h(MessageSet::EMPTY, 1).build_eq(kind),
        RowKind::Cap => b.h(all, -1).constant(1),
        RowKind::Mono { lower, upper } => b.h(upper, 1).h(lower, -1),
        RowKind::Submod { a, b: c } => b.h(a, 1).h(c, 1).h(a.union(c), -1).h(a.intersection(c), -1),
        _ => unreachable!("not a Shannon row"),
    };
    b.build(kind)
}

pub fn empty_row() -> InequalityRow {
    shannon_row(RowKind::Empty, 0)
}

pub fn cap_row(n: usize) -> InequalityRow {
    shannon_row(RowKind::Cap, n)
}

/// `h_upper >= h_lower`; the caller guarantees `lower ⊆ upper`.
pub fn mono_row(lower: MessageSet, upper: MessageSet) -> InequalityRow {
    shannon_row(RowKind::Mono { lower, upper }, 0)
}

pub fn submod_row(a: MessageSet, b: MessageSet) -> InequalityRow {
    shannon_row(RowKind::Submod { a, b }, 0)
}

/// Elemental monotonicity kinds `(A, A∪{i})` in bitmask order of `A`.
pub fn elemental_mono(n: usize) -> impl Iterator<Item = (MessageSet, MessageSet)> {
    let all = MessageSet::full(n);
    all.subsets().flat_map(move |a| all.difference(a).iter().map(move |i| (a, a.with(i))))
}

/// Elemental submodularity pairs `(A∪{i}, A∪{j})`, `i < j ∉ A`, in bitmask order of `A`.
pub fn elemental_submod(n: usize) -> impl Iterator<Item = (MessageSet, MessageSet)> {
    let all = MessageSet::full(n);
    all.subsets().flat_map(move |a| {
        let rest: Vec<u32> = all.difference(a).iter().collect();
        let mut pairs = Vec::new();
        for (x, &i) in rest.iter().enumerate() {
            for &j in &rest[x + 1..] {
                pairs.push((a.with(i), a.with(j)));
            }
        }
        pairs
    })
}

/// The polymatroid rows: `h_∅ = 0`, the cap, elemental monotonicity and
/// elemental submodularity.
pub fn gen_shannon_rows(n: usize) -> impl Iterator<Item = InequalityRow> {
    [empty_row(), cap_row(n)]
        .into_iter()
        .chain(elemental_mono(n).map(|(l, u)| mono_row(l, u)))
        .chain(elemental_submod(n).map(|(a, b)| submod_row(a, b)))
}

/// Per destination: the interference row, then one decoding row per `B ⊆ I`.
pub fn gen_decoding_rows(inst: &Instance) -> Vec<InequalityRow> {
    let mut rows = Vec::new();
    for (k, d) in inst.destinations().iter().enumerate() {
        let kind = RowKind::Interference { dest: k };
        rows.push(kind.instantiate(inst).expect("interference row is valid by construction"));
        for side in d.interferers.subsets() {
            let kind = RowKind::Decoding { dest: k, side };
            rows.push(kind.instantiate(inst).expect("decoding row is valid by construction"));
        }
    }
    rows
}
