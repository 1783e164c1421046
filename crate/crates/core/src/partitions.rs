//! Integer partitions indexing the trace monomials `p_λ = p_{m_1} ⋯ p_{m_s}`.
//!
//! A [`Partition`] is stored without trailing zeros; the empty partition is
//! the unique partition of 0 and stands for the constant function 1.
//!
//! The total order on partitions is the flag order used everywhere else in
//! the crate: degree ascending, then parts compared lexicographically in
//! descending order, so `(4) < (3,1) < (2,2) < (2,1,1) < (1,1,1,1)`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A canonical integer partition: parts are positive and non-increasing.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// The empty partition (degree 0), i.e. the constant function 1.
    pub fn empty() -> Self {
        Self { parts: Vec::new() }
    }

    /// Builds a partition from arbitrary parts: zeros are dropped and the
    /// rest sorted into non-increasing order.
    pub fn new(parts: impl IntoIterator<Item = u32>) -> Self {
        let mut parts: Vec<u32> = parts.into_iter().filter(|&p| p > 0).collect();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self { parts }
    }

    /// The single-part partition `(m)`, or the empty partition for `m = 0`.
    pub fn single(m: u32) -> Self {
        Self::new([m])
    }

    /// `(2^twos, 1^ones)`, the index of `p_1^ones · p_2^twos`.
    pub fn ones_twos(ones: u32, twos: u32) -> Self {
        let mut parts = vec![2; twos as usize];
        parts.extend(std::iter::repeat(1).take(ones as usize));
        Self { parts }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// The `k` in `λ ⊢ k`.
    pub fn degree(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Number of (nonzero) parts, `s`.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Number of parts that are at least 2, `r`.
    pub fn num_large_parts(&self) -> usize {
        self.parts.iter().take_while(|&&p| p >= 2).count()
    }

    /// Number of parts equal to `m`.
    pub fn multiplicity(&self, m: u32) -> usize {
        self.parts.iter().filter(|&&p| p == m).count()
    }

    /// `p_λ · p_μ = p_{sort(λ ⧺ μ)}`.
    pub fn concat(&self, other: &Partition) -> Partition {
        let mut parts = Vec::with_capacity(self.len() + other.len());
        // merge of two non-increasing lists
        let (mut i, mut j) = (0, 0);
        while i < self.parts.len() && j < other.parts.len() {
            if self.parts[i] >= other.parts[j] {
                parts.push(self.parts[i]);
                i += 1;
            } else {
                parts.push(other.parts[j]);
                j += 1;
            }
        }
        parts.extend_from_slice(&self.parts[i..]);
        parts.extend_from_slice(&other.parts[j..]);
        Partition { parts }
    }

    /// The partition with the part at `index` removed.
    pub fn without(&self, index: usize) -> Partition {
        let mut parts = self.parts.clone();
        parts.remove(index);
        Partition { parts }
    }

    /// The partition with the parts at `i` and `j` removed (`i != j`).
    pub fn without_pair(&self, i: usize, j: usize) -> Partition {
        debug_assert_ne!(i, j);
        let parts = self
            .parts
            .iter()
            .enumerate()
            .filter(|&(idx, _)| idx != i && idx != j)
            .map(|(_, &p)| p)
            .collect();
        Partition { parts }
    }

    /// True when every part is 1 (includes the empty partition).
    pub fn is_power_of_p1(&self) -> bool {
        self.parts.iter().all(|&p| p == 1)
    }

    /// True when every part lies in {1, 2}.
    pub fn is_p1_p2_monomial(&self) -> bool {
        self.parts.iter().all(|&p| p == 1 || p == 2)
    }

    /// Renders the parts zero-padded to the degree, e.g. `(2,1,0)`.
    pub fn padded(&self) -> String {
        let deg = self.degree() as usize;
        let mut out: Vec<String> = self.parts.iter().map(u32::to_string).collect();
        while out.len() < deg {
            out.push("0".into());
        }
        format!("({})", out.join(","))
    }

    fn is_canonical(parts: &[u32]) -> bool {
        parts.iter().all(|&p| p > 0) && parts.windows(2).all(|w| w[0] >= w[1])
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.parts.cmp(&self.parts))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// Comma-joined parts; the empty partition prints as `0`.
impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "0");
        }
        let s: Vec<String> = self.parts.iter().map(u32::to_string).collect();
        write!(f, "{}", s.join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::empty());
        }
        let parts = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("invalid partition part `{t}` in `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(parts))
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;

    fn try_from(parts: Vec<u32>) -> Result<Self> {
        Ok(Self::new(parts))
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

/// All partitions of exactly `k`, parts lexicographically descending.
pub fn partitions_of(k: u32) -> Vec<Partition> {
    fn rec(remaining: u32, max_part: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition {
                parts: prefix.clone(),
            });
            return;
        }
        for part in (1..=remaining.min(max_part)).rev() {
            prefix.push(part);
            rec(remaining - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, k, &mut Vec::new(), &mut out);
    debug_assert!(out.iter().all(|p| Partition::is_canonical(&p.parts)));
    out
}

/// Every partition of every `j ≤ k`, in flag order, empty partition first.
pub fn enumerate_upto(k: u32) -> Vec<Partition> {
    (0..=k).flat_map(partitions_of).collect()
}

/// The partition function `P(k)`.
pub fn count(k: u32) -> u64 {
    // p(n) by the generating product, one coin per part size
    let k = k as usize;
    let mut table = vec![0u64; k + 1];
    table[0] = 1;
    for part in 1..=k {
        for total in part..=k {
            table[total] += table[total - part];
        }
    }
    table[k]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force(k: u32) -> Vec<Vec<u32>> {
        // all non-increasing positive sequences summing to k, by filtering
        // every composition
        fn compositions(k: u32) -> Vec<Vec<u32>> {
            if k == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for first in 1..=k {
                for mut rest in compositions(k - first) {
                    rest.insert(0, first);
                    out.push(rest);
                }
            }
            out
        }
        compositions(k)
            .into_iter()
            .filter(|c| c.windows(2).all(|w| w[0] >= w[1]))
            .collect()
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(enumerate_upto(0), vec![Partition::empty()]);
        let two: Vec<String> = enumerate_upto(2).iter().map(|p| format!("{p:?}")).collect();
        assert_eq!(two, ["()", "(1)", "(2)", "(1,1)"]);
        assert_eq!(enumerate_upto(4).len(), 12);
        let four: Vec<String> = partitions_of(4).iter().map(|p| format!("{p:?}")).collect();
        assert_eq!(four, ["(4)", "(3,1)", "(2,2)", "(2,1,1)", "(1,1,1,1)"]);
    }

    #[test]
    fn counts_match_brute_force() {
        assert_eq!(count(0), 1);
        assert_eq!(count(4), 5);
        assert_eq!(count(7), 15);
        for k in 0..=12 {
            assert_eq!(count(k) as usize, brute_force(k).len(), "k = {k}");
        }
    }

    #[test]
    fn slices_and_prefixes() {
        for k in 0..=20u32 {
            let all = enumerate_upto(k);
            let slice = all.iter().filter(|p| p.degree() == k).count();
            assert_eq!(count(k) as usize, slice);
            assert!(all.windows(2).all(|w| w[0] < w[1]), "order is strict");
            if k < 20 {
                let next = enumerate_upto(k + 1);
                assert_eq!(&next[..all.len()], &all[..]);
            }
        }
    }

    #[test]
    fn canonicalization_and_parsing() {
        let p = Partition::new([1, 0, 2]);
        assert_eq!(p.parts(), &[2, 1]);
        assert_eq!(p.padded(), "(2,1,0)");
        assert_eq!("2,1".parse::<Partition>().unwrap(), p);
        assert_eq!("2,1,0".parse::<Partition>().unwrap(), p);
        assert_eq!("0".parse::<Partition>().unwrap(), Partition::empty());
        assert_eq!(Partition::empty().to_string(), "0");
        assert!("2,x".parse::<Partition>().is_err());
        assert_eq!(Partition::ones_twos(2, 1).parts(), &[2, 1, 1]);
        assert_eq!(p.num_large_parts(), 1);
        let q = Partition::new([3, 1, 1]);
        assert_eq!(p.concat(&q).parts(), &[3, 2, 1, 1, 1]);
        assert_eq!(q.without_pair(0, 2).parts(), &[1]);
    }
}
