//! Integer partitions, dominance order and the type-D shape predicates.
//!
//! Row lengths are padded with implicit zeros: asking for a row past the last
//! part returns `0`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("parts must be positive and weakly decreasing: {0:?}")]
    NotPartition(Vec<u32>),
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(u32, u32),
    #[error("partition {0} has odd size")]
    OddSize(Partition),
    #[error("partition {0} is not a D-partition")]
    NotDPartition(Partition),
    #[error("cannot parse partition from {0:?}")]
    Parse(String),
}

/// A weakly decreasing sequence of positive integers.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition {
    parts: Vec<u32>,
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = PartitionError;

    fn try_from(parts: Vec<u32>) -> Result<Self, Self::Error> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self, PartitionError> {
        let ok = parts.iter().all(|&x| x > 0) && parts.windows(2).all(|w| w[0] >= w[1]);
        if ok {
            Ok(Partition { parts })
        } else {
            Err(PartitionError::NotPartition(parts))
        }
    }

    /// Builds a partition from arbitrary nonnegative row lengths, dropping
    /// zeros and sorting.
    pub fn from_unsorted(mut parts: Vec<u32>) -> Self {
        parts.retain(|&x| x > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Length of row `row` (1-based), zero past the last part.
    pub fn row_len(&self, row: usize) -> u32 {
        if row == 0 {
            return 0;
        }
        self.parts.get(row - 1).copied().unwrap_or(0)
    }

    /// Length of column `col` (1-based).
    pub fn col_len(&self, col: u32) -> usize {
        self.parts.iter().take_while(|&&p| p >= col).count()
    }

    pub fn contains(&self, row: usize, col: u32) -> bool {
        col >= 1 && col <= self.row_len(row)
    }

    pub fn transpose(&self) -> Partition {
        let first = self.parts.first().copied().unwrap_or(0);
        let parts = (1..=first).map(|c| self.col_len(c) as u32).collect();
        Partition { parts }
    }

    fn prefix_sums(&self, len: usize) -> impl Iterator<Item = u32> + '_ {
        (1..=len).scan(0u32, move |acc, i| {
            *acc += self.row_len(i);
            Some(*acc)
        })
    }

    /// `true` iff `self` lies weakly below `other` in dominance order.
    pub fn dominance_le(&self, other: &Partition) -> Result<bool, PartitionError> {
        if self.size() != other.size() {
            return Err(PartitionError::SizeMismatch(self.size(), other.size()));
        }
        let len = self.len().max(other.len());
        Ok(self
            .prefix_sums(len)
            .zip(other.prefix_sums(len))
            .all(|(a, b)| a <= b))
    }

    /// Strictly below in dominance order.
    pub fn dominance_lt(&self, other: &Partition) -> Result<bool, PartitionError> {
        Ok(self != other && self.dominance_le(other)?)
    }

    pub fn multiplicity(&self, part: u32) -> usize {
        self.parts.iter().filter(|&&p| p == part).count()
    }

    /// Every even part occurs with even multiplicity.
    pub fn is_d_partition(&self) -> bool {
        self.parts
            .iter()
            .filter(|&&p| p % 2 == 0)
            .all(|&p| self.multiplicity(p) % 2 == 0)
    }

    pub fn is_very_even(&self) -> bool {
        self.is_d_partition() && self.parts.iter().all(|&p| p % 2 == 0)
    }

    /// At most one part exceeds one, i.e. the shape is `(a, 1, ..., 1)`.
    pub fn is_hook(&self) -> bool {
        !self.is_empty() && self.parts.iter().skip(1).all(|&p| p == 1)
    }

    /// Removes rim dominoes until none is left; the diagram is tileable iff
    /// this reaches the empty partition (its 2-core is empty).
    pub fn is_domino_tileable(&self) -> bool {
        self.two_core().is_empty()
    }

    pub fn two_core(&self) -> Partition {
        let mut rows = self.parts.clone();
        'outer: loop {
            for i in 0..rows.len() {
                let below = rows.get(i + 1).copied().unwrap_or(0);
                if rows[i] >= below + 2 {
                    rows[i] -= 2;
                    rows.retain(|&x| x > 0);
                    continue 'outer;
                }
                let below2 = rows.get(i + 2).copied().unwrap_or(0);
                if i + 1 < rows.len() && rows[i] == rows[i + 1] && rows[i + 1] > below2 {
                    rows[i] -= 1;
                    rows[i + 1] -= 1;
                    rows.retain(|&x| x > 0);
                    continue 'outer;
                }
            }
            break;
        }
        Partition { parts: rows }
    }

    /// Dominance-greatest D-partition lying weakly below `self`.
    ///
    /// Repeatedly take the largest even part `q` of odd multiplicity, lower its
    /// last occurrence to `q - 1` and raise the first later part smaller than
    /// `q - 1` by one (appending a part `1` if there is none).
    pub fn collapse_d(&self) -> Result<Partition, PartitionError> {
        if self.size() % 2 != 0 {
            return Err(PartitionError::OddSize(self.clone()));
        }
        let mut rows = self.parts.clone();
        loop {
            let current = Partition { parts: rows.clone() };
            let bad = rows
                .iter()
                .copied()
                .filter(|&p| p % 2 == 0 && current.multiplicity(p) % 2 == 1)
                .max();
            let Some(q) = bad else {
                return Ok(current);
            };
            let last = rows.iter().rposition(|&p| p == q).expect("part present");
            rows[last] -= 1;
            match rows.iter().skip(last + 1).position(|&p| p < q - 1) {
                Some(off) => rows[last + 1 + off] += 1,
                None => rows.push(1),
            }
            rows.retain(|&x| x > 0);
        }
    }

    /// `collapse_d` of the transpose.
    pub fn duality_d(&self) -> Result<Partition, PartitionError> {
        if self.size() % 2 != 0 {
            return Err(PartitionError::OddSize(self.clone()));
        }
        self.transpose().collapse_d()
    }

    /// A D-partition fixed by the double duality.
    pub fn is_special(&self) -> Result<bool, PartitionError> {
        if !self.is_d_partition() {
            return Err(PartitionError::NotDPartition(self.clone()));
        }
        Ok(&self.duality_d()?.duality_d()? == self)
    }

    /// Ordering that extends dominance: if `a` is strictly below `b` in
    /// dominance then `a` sorts first.
    pub fn dominance_linear_cmp(&self, other: &Partition) -> Ordering {
        self.parts.cmp(&other.parts)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text: Vec<String> = self.parts.iter().map(u32::to_string).collect();
        f.write_str(&text.join(","))
    }
}

impl FromStr for Partition {
    type Err = PartitionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|t| t.parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| PartitionError::Parse(s.to_string()))?;
        Partition::new(parts)
    }
}

/// All partitions of `n`, in reverse lexicographic order (starting at `(n)`).
pub fn partitions_of(n: u32) -> Vec<Partition> {
    fn go(rest: u32, max: u32, acc: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition { parts: acc.clone() });
            return;
        }
        for part in (1..=max.min(rest)).rev() {
            acc.push(part);
            go(rest - part, part, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// All D-partitions of `n`.
pub fn d_partitions_of(n: u32) -> Vec<Partition> {
    partitions_of(n)
        .into_iter()
        .filter(Partition::is_d_partition)
        .collect()
}

/// Memo table for `is_special`, useful when many shapes are tested.
#[derive(Debug, Default)]
pub struct SpecialCache {
    seen: HashMap<Partition, bool>,
}

impl SpecialCache {
    pub fn is_special(&mut self, p: &Partition) -> bool {
        if !p.is_d_partition() {
            return false;
        }
        if let Some(&v) = self.seen.get(p) {
            return v;
        }
        let v = p.is_special().unwrap_or(false);
        self.seen.insert(p.clone(), v);
        v
    }
}
