use std::fmt;
use std::str::FromStr;

/// A set of 1-based message ids packed into a bitmask (bit `i - 1` is message `i`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MessageSet(u32);

/// Largest message id a [`MessageSet`] can hold.
pub const MAX_MESSAGES: usize = 32;

impl MessageSet {
    pub const EMPTY: MessageSet = MessageSet(0);

    pub fn from_bits(bits: u32) -> Self {
        MessageSet(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// All messages `1..=n`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_MESSAGES);
        if n == MAX_MESSAGES {
            MessageSet(u32::MAX)
        } else {
            MessageSet((1u32 << n) - 1)
        }
    }

    pub fn singleton(id: u32) -> Self {
        assert!((1..=MAX_MESSAGES as u32).contains(&id), "message id {id} out of range");
        MessageSet(1 << (id - 1))
    }

    pub fn from_ids<I: IntoIterator<Item = u32>>(ids: I) -> Self {
        ids.into_iter().fold(Self::EMPTY, |s, id| s.with(id))
    }

    pub fn contains(self, id: u32) -> bool {
        id >= 1 && id as usize <= MAX_MESSAGES && self.0 & (1 << (id - 1)) != 0
    }

    pub fn with(self, id: u32) -> Self {
        MessageSet(self.0 | Self::singleton(id).0)
    }

    pub fn without(self, id: u32) -> Self {
        MessageSet(self.0 & !Self::singleton(id).0)
    }

    pub fn union(self, other: Self) -> Self {
        MessageSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        MessageSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        MessageSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Largest id in the set, or 0 when empty.
    pub fn max_id(self) -> u32 {
        32 - self.0.leading_zeros()
    }

    /// Ids in increasing order.
    pub fn iter(self) -> impl Iterator<Item = u32> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let low = bits.trailing_zeros();
            bits &= bits - 1;
            Some(low + 1)
        })
    }

    /// All subsets of `self`, in increasing bitmask order, starting with the empty set.
    pub fn subsets(self) -> impl Iterator<Item = MessageSet> {
        let mask = self.0;
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == mask { None } else { Some((cur.wrapping_sub(mask)) & mask) };
            Some(MessageSet(cur))
        })
    }
}

impl fmt::Display for MessageSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, id) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{id}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for MessageSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromIterator<u32> for MessageSet {
    fn from_iter<T: IntoIterator<Item = u32>>(iter: T) -> Self {
        Self::from_ids(iter)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseSetError(pub String);

impl fmt::Display for ParseSetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid message set `{}`", self.0)
    }
}

impl std::error::Error for ParseSetError {}

/// Accepts `{1,3,4}`, `{}` and `∅`.
impl FromStr for MessageSet {
    type Err = ParseSetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t == "∅" {
            return Ok(Self::EMPTY);
        }
        let inner = t
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| ParseSetError(s.to_string()))?;
        let mut set = Self::EMPTY;
        for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let id: u32 = part.parse().map_err(|_| ParseSetError(s.to_string()))?;
            if id == 0 || id as usize > MAX_MESSAGES {
                return Err(ParseSetError(s.to_string()));
            }
            set = set.with(id);
        }
        Ok(set)
    }
}
