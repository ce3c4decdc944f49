use std::fmt::Write as _;

use serde_json::{Map, Value};

use crate::set::MessageSet;
use crate::Rational;

/// A set function `A -> h_A` over all subsets of `{1..n}`, stored densely by bitmask.
#[derive(Clone, PartialEq, Eq)]
pub struct EntropyProfile {
    n: usize,
    values: Vec<Rational>,
}

impl EntropyProfile {
    pub fn zero(n: usize) -> Self {
        assert!(n <= 24, "dense profiles are limited to 24 messages");
        EntropyProfile { n, values: vec![Rational::from_integer(0); 1 << n] }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(MessageSet) -> Rational) -> Self {
        let mut p = Self::zero(n);
        for (bits, v) in p.values.iter_mut().enumerate() {
            *v = f(MessageSet::from_bits(bits as u32));
        }
        p
    }

    pub fn message_count(&self) -> usize {
        self.n
    }

    pub fn get(&self, s: MessageSet) -> Rational {
        self.values[s.bits() as usize]
    }

    pub fn set(&mut self, s: MessageSet, v: Rational) {
        self.values[s.bits() as usize] = v;
    }

    /// `(subset, value)` pairs in bitmask order.
    pub fn iter(&self) -> impl Iterator<Item = (MessageSet, Rational)> + '_ {
        self.values.iter().enumerate().map(|(b, v)| (MessageSet::from_bits(b as u32), *v))
    }

    /// Object keyed by subset text with exact `num/den` values.
    pub fn to_json_value(&self) -> Value {
        let mut map = Map::new();
        for (s, v) in self.iter() {
            map.insert(s.to_string(), Value::String(v.to_string()));
        }
        Value::Object(map)
    }

    /// One `{subset} value` line per subset.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (s, v) in self.iter() {
            writeln!(out, "{s} {v}").unwrap();
        }
        out
    }
}

impl std::fmt::Debug for EntropyProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_text())
    }
}
