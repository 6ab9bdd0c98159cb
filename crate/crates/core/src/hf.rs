//! Hereditarily finite sets, ordered and keyed by their Ackermann codes.

use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigUint;
use thiserror::Error;

/// Ranks above this are never enumerated: rank 5 alone has 2^65536 sets.
pub const HARD_RANK_LIMIT: usize = 4;
/// Default cap for exhaustive work; rank 4 needs an explicit opt-in.
pub const DEFAULT_RANK_CAP: usize = 3;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Error)]
#[error("rank {requested} exceeds the configured cap of {cap}")]
pub struct RankCapExceeded {
    pub requested: usize,
    pub cap: usize,
}

/// Checks `requested` against `cap` (itself clamped to [`HARD_RANK_LIMIT`]).
pub fn check_rank(requested: usize, cap: usize) -> Result<(), RankCapExceeded> {
    let cap = cap.min(HARD_RANK_LIMIT);
    if requested > cap {
        return Err(RankCapExceeded { requested, cap });
    }
    Ok(())
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Error)]
#[error("Ackermann code has {bits} or more bits, above the cap of {cap}")]
pub struct CodeTooLarge {
    pub bits: u128,
    pub cap: u64,
}

/// Bit cap used by [`HfSet::ackermann_code`].
pub const DEFAULT_CODE_BITS: u64 = 1 << 24;

struct Node {
    // ascending, no duplicates
    children: Vec<HfSet>,
    rank: usize,
    small_code: Option<u64>,
    hash: u64,
}

/// A hereditarily finite set. Cloning is cheap.
#[derive(Clone)]
pub struct HfSet(Arc<Node>);

impl HfSet {
    pub fn empty() -> Self {
        HfSet::from_sorted(Vec::new())
    }

    /// The set of the given members; duplicates are dropped.
    pub fn from_children(children: impl IntoIterator<Item = HfSet>) -> Self {
        let mut children: Vec<HfSet> = children.into_iter().collect();
        children.sort();
        children.dedup();
        HfSet::from_sorted(children)
    }

    fn from_sorted(children: Vec<HfSet>) -> Self {
        let rank = children.iter().map(|c| c.rank() + 1).max().unwrap_or(0);
        let small_code = children.iter().try_fold(0u64, |acc, c| match c.small_code() {
            Some(k) if k < 64 => Some(acc | (1u64 << k)),
            _ => None,
        });
        let mut h = DefaultHasher::new();
        children.len().hash(&mut h);
        for c in &children {
            c.0.hash.hash(&mut h);
        }
        HfSet(Arc::new(Node {
            children,
            rank,
            small_code,
            hash: h.finish(),
        }))
    }

    pub fn singleton(s: HfSet) -> Self {
        HfSet::from_sorted(vec![s])
    }

    /// The set with Ackermann code `n`.
    pub fn from_code(n: u64) -> Self {
        HfSet::from_sorted((0..64).filter(|i| n >> i & 1 == 1).map(HfSet::from_code).collect())
    }

    /// Members in ascending Ackermann order.
    pub fn children(&self) -> &[HfSet] {
        &self.0.children
    }

    pub fn len(&self) -> usize {
        self.0.children.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.children.is_empty()
    }

    pub fn contains(&self, s: &HfSet) -> bool {
        self.0.children.binary_search(s).is_ok()
    }

    pub fn rank(&self) -> usize {
        self.0.rank
    }

    /// The Ackermann code when it is below 2^64.
    pub fn small_code(&self) -> Option<u64> {
        self.0.small_code
    }

    /// `N(s) = sum of 2^N(t)` over members `t`, guarded by [`DEFAULT_CODE_BITS`].
    pub fn ackermann_code(&self) -> Result<BigUint, CodeTooLarge> {
        self.ackermann_code_capped(DEFAULT_CODE_BITS)
    }

    pub fn ackermann_code_capped(&self, max_bits: u64) -> Result<BigUint, CodeTooLarge> {
        if let Some(k) = self.small_code() {
            return Ok(BigUint::from(k));
        }
        let mut code = BigUint::default();
        for c in self.children() {
            let exp = match c.small_code() {
                Some(e) if e < max_bits => e,
                Some(e) => return Err(CodeTooLarge { bits: e as u128 + 1, cap: max_bits }),
                None => return Err(CodeTooLarge { bits: 1 << 64, cap: max_bits }),
            };
            code.set_bit(exp, true);
        }
        Ok(code)
    }

    /// Transitive closure of membership, including `self`, ascending.
    pub fn transitive_closure(&self) -> Vec<HfSet> {
        let mut out = vec![self.clone()];
        let mut i = 0;
        while i < out.len() {
            let next = out[i].clone();
            for c in next.children() {
                if !out.contains(c) {
                    out.push(c.clone());
                }
            }
            i += 1;
        }
        out.sort();
        out
    }
}

impl PartialEq for HfSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.hash == other.0.hash && self.cmp(other) == Ordering::Equal)
    }
}

impl Eq for HfSet {}

impl Hash for HfSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash.hash(state);
    }
}

impl Ord for HfSet {
    /// Ackermann order: the larger largest differing member wins.
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        match (self.small_code(), other.small_code()) {
            (Some(a), Some(b)) => return a.cmp(&b),
            (Some(_), None) => return Ordering::Less,
            (None, Some(_)) => return Ordering::Greater,
            (None, None) => {}
        }
        for (a, b) in self.children().iter().rev().zip(other.children().iter().rev()) {
            match a.cmp(b) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        self.len().cmp(&other.len())
    }
}

impl PartialOrd for HfSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for HfSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, c) in self.children().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for HfSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
#[error("malformed set at byte {position}: {message}")]
pub struct HfParseError {
    pub position: usize,
    pub message: String,
}

impl FromStr for HfSet {
    type Err = HfParseError;

    /// Parses `{}`, `{{}}`, `{{},{{}}}`; whitespace is ignored, member order
    /// and repetition are free.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bytes: Vec<(usize, u8)> = s.bytes().enumerate().filter(|(_, b)| !b.is_ascii_whitespace()).collect();
        let mut pos = 0;
        let set = parse_set(&bytes, &mut pos, s.len())?;
        if let Some(&(at, _)) = bytes.get(pos) {
            return Err(HfParseError { position: at, message: "trailing input".into() });
        }
        Ok(set)
    }
}

fn parse_set(bytes: &[(usize, u8)], pos: &mut usize, end: usize) -> Result<HfSet, HfParseError> {
    let at = |p: usize| bytes.get(p).map_or(end, |&(i, _)| i);
    let expect = |p: usize, c: u8| -> Result<(), HfParseError> {
        match bytes.get(p) {
            Some(&(_, b)) if b == c => Ok(()),
            _ => Err(HfParseError { position: at(p), message: format!("expected `{}`", c as char) }),
        }
    };
    expect(*pos, b'{')?;
    *pos += 1;
    let mut children = Vec::new();
    if matches!(bytes.get(*pos), Some(&(_, b'}'))) {
        *pos += 1;
        return Ok(HfSet::empty());
    }
    loop {
        children.push(parse_set(bytes, pos, end)?);
        match bytes.get(*pos) {
            Some(&(_, b',')) => *pos += 1,
            Some(&(_, b'}')) => {
                *pos += 1;
                return Ok(HfSet::from_children(children));
            }
            _ => return Err(HfParseError { position: at(*pos), message: "expected `,` or `}`".into() }),
        }
    }
}

/// `f(0) = 1`, `f(k+1) = 2^f(k)`: the number of sets of rank at most `k`.
pub fn count_up_to_rank(k: usize) -> Option<u64> {
    (0..k).try_fold(1u64, |n, _| if n < 64 { Some(1u64 << n) } else { None })
}

/// All sets of rank at most `max_rank`, ascending; these are exactly the
/// sets with code below `f(max_rank)`.
pub fn enumerate(max_rank: usize, cap: usize) -> Result<Vec<HfSet>, RankCapExceeded> {
    check_rank(max_rank, cap)?;
    let n = count_up_to_rank(max_rank).expect("rank within hard limit") as usize;
    let mut out: Vec<HfSet> = Vec::with_capacity(n);
    for code in 0..n {
        let members = (0..usize::BITS as usize).filter(|i| code >> i & 1 == 1).map(|i| out[i].clone()).collect();
        out.push(HfSet::from_sorted(members));
    }
    Ok(out)
}
