//! Signed permutations and the type-D simple roots they act on.
//!
//! A signed permutation of rank `n` is stored in one-line notation
//! `w(1), ..., w(n)`. It acts on the coordinate vectors by
//! `w(e_j) = sign(w(j)) e_|w(j)|`. The root system acted on is always `D_n`,
//! with positive roots `e_j +- e_i` for `j > i`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const MAX_RANK: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeylError {
    #[error("not a signed permutation: {0:?}")]
    Invalid(Vec<i32>),
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("rank {0} out of range 1..={MAX_RANK}")]
    RankOutOfRange(usize),
    #[error("cannot parse signed permutation from {0:?}")]
    Parse(String),
    #[error("root {root} does not exist in rank {rank}")]
    NoSuchRoot { root: SimpleRoot, rank: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i32>", into = "Vec<i32>")]
pub struct SignedPermutation {
    images: Vec<i32>,
}

impl TryFrom<Vec<i32>> for SignedPermutation {
    type Error = WeylError;

    fn try_from(v: Vec<i32>) -> Result<Self, Self::Error> {
        SignedPermutation::new(v)
    }
}

impl From<SignedPermutation> for Vec<i32> {
    fn from(w: SignedPermutation) -> Self {
        w.images
    }
}

impl SignedPermutation {
    pub fn new(images: Vec<i32>) -> Result<Self, WeylError> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &x in &images {
            let a = x.unsigned_abs() as usize;
            if a == 0 || a > n || seen[a] {
                return Err(WeylError::Invalid(images));
            }
            seen[a] = true;
        }
        Ok(SignedPermutation { images })
    }

    pub fn identity(n: usize) -> Self {
        SignedPermutation {
            images: (1..=n as i32).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[i32] {
        &self.images
    }

    /// `w(i)` for `1 <= i <= n`.
    pub fn image(&self, i: usize) -> i32 {
        self.images[i - 1]
    }

    /// `(self o other)(i) = sign(other(i)) * self(|other(i)|)`.
    pub fn compose(&self, other: &SignedPermutation) -> Result<SignedPermutation, WeylError> {
        if self.rank() != other.rank() {
            return Err(WeylError::RankMismatch(self.rank(), other.rank()));
        }
        let images = other
            .images
            .iter()
            .map(|&v| v.signum() * self.images[v.unsigned_abs() as usize - 1])
            .collect();
        Ok(SignedPermutation { images })
    }

    pub fn inverse(&self) -> SignedPermutation {
        let mut images = vec![0; self.rank()];
        for (i, &v) in self.images.iter().enumerate() {
            images[v.unsigned_abs() as usize - 1] = v.signum() * (i as i32 + 1);
        }
        SignedPermutation { images }
    }

    pub fn negative_count(&self) -> usize {
        self.images.iter().filter(|&&v| v < 0).count()
    }

    /// Image of a root given by its coefficient vector.
    pub fn act(&self, root: &Root) -> Root {
        let mut coeffs = vec![0; self.rank()];
        for (j, &c) in root.coeffs.iter().enumerate() {
            if c != 0 {
                let v = self.images[j];
                coeffs[v.unsigned_abs() as usize - 1] += v.signum() * c;
            }
        }
        Root { coeffs }
    }

    pub fn act_on_root(&self, alpha: SimpleRoot) -> Result<Root, WeylError> {
        Ok(self.act(&alpha.root(self.rank())?))
    }

    /// Simple roots sent to negative roots.
    pub fn tau_right(&self) -> Vec<SimpleRoot> {
        simple_roots(self.rank())
            .into_iter()
            .filter(|&a| a.root(self.rank()).map(|r| !self.act(&r).is_positive()).unwrap_or(false))
            .collect()
    }

    pub fn has_right_descent(&self, alpha: SimpleRoot) -> bool {
        alpha
            .root(self.rank())
            .map(|r| !self.act(&r).is_positive())
            .unwrap_or(false)
    }

    /// Right multiplication by the reflection `s_alpha`.
    pub fn times_reflection(&self, alpha: SimpleRoot) -> Result<SignedPermutation, WeylError> {
        self.compose(&alpha.reflection(self.rank())?)
    }

    /// Flips the sign of `w(1)`; right multiplication by the sign change of
    /// the first coordinate, the element of `W'` outside `W(D_n)`.
    pub fn times_first_sign_change(&self) -> SignedPermutation {
        let mut images = self.images.clone();
        if let Some(x) = images.first_mut() {
            *x = -*x;
        }
        SignedPermutation { images }
    }
}

impl fmt::Display for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text: Vec<String> = self.images.iter().map(i32::to_string).collect();
        f.write_str(&text.join(","))
    }
}

impl FromStr for SignedPermutation {
    type Err = WeylError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let images = s
            .trim()
            .split(',')
            .map(|t| t.trim().parse::<i32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| WeylError::Parse(s.to_string()))?;
        SignedPermutation::new(images)
    }
}

/// A vector in the coordinate basis `e_1, ..., e_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Root {
    pub coeffs: Vec<i32>,
}

impl Root {
    /// The coefficient on the largest index with nonzero coefficient is
    /// positive.
    pub fn is_positive(&self) -> bool {
        self.coeffs.iter().rev().find(|&&c| c != 0).is_some_and(|&c| c > 0)
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            let mag = if c.abs() == 1 { String::new() } else { c.abs().to_string() };
            write!(f, "{sign}{mag}e{}", i + 1)?;
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Simple roots of `D_n`: `Branch = e_1 + e_2` and `Chain(i) = e_{i+1} - e_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SimpleRoot {
    Branch,
    Chain(usize),
}

impl SimpleRoot {
    fn check(self, n: usize) -> Result<(), WeylError> {
        let ok = match self {
            SimpleRoot::Branch => n >= 2,
            SimpleRoot::Chain(i) => i >= 1 && i < n,
        };
        if ok {
            Ok(())
        } else {
            Err(WeylError::NoSuchRoot { root: self, rank: n })
        }
    }

    pub fn root(self, n: usize) -> Result<Root, WeylError> {
        self.check(n)?;
        let mut coeffs = vec![0; n];
        match self {
            SimpleRoot::Branch => {
                coeffs[0] = 1;
                coeffs[1] = 1;
            }
            SimpleRoot::Chain(i) => {
                coeffs[i] = 1;
                coeffs[i - 1] = -1;
            }
        }
        Ok(Root { coeffs })
    }

    pub fn reflection(self, n: usize) -> Result<SignedPermutation, WeylError> {
        self.check(n)?;
        let mut images: Vec<i32> = (1..=n as i32).collect();
        match self {
            SimpleRoot::Branch => {
                images[0] = -2;
                images[1] = -1;
            }
            SimpleRoot::Chain(i) => images.swap(i - 1, i),
        }
        Ok(SignedPermutation { images })
    }

    /// Coordinate indices the root involves.
    pub fn support(self) -> [usize; 2] {
        match self {
            SimpleRoot::Branch => [1, 2],
            SimpleRoot::Chain(i) => [i, i + 1],
        }
    }

    /// Adjacent in the `D_n` Dynkin diagram: the supports share exactly one
    /// index.
    pub fn is_adjacent(self, other: SimpleRoot) -> bool {
        let [a, b] = self.support();
        let shared = other.support().iter().filter(|&&x| x == a || x == b).count();
        shared == 1
    }
}

impl fmt::Display for SimpleRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimpleRoot::Branch => f.write_str("e1+e2"),
            SimpleRoot::Chain(i) => write!(f, "e{}-e{}", i + 1, i),
        }
    }
}

impl FromStr for SimpleRoot {
    type Err = WeylError;

    /// Accepts `e1+e2`, `e{i+1}-e{i}`, `branch` and `chain{i}`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().to_ascii_lowercase();
        let err = || WeylError::Parse(s.to_string());
        if t == "branch" || t == "e1+e2" || t == "e2+e1" {
            return Ok(SimpleRoot::Branch);
        }
        if let Some(rest) = t.strip_prefix("chain") {
            return rest.parse().map(SimpleRoot::Chain).map_err(|_| err());
        }
        let (a, b) = t.split_once('-').ok_or_else(err)?;
        let a: usize = a.strip_prefix('e').ok_or_else(err)?.parse().map_err(|_| err())?;
        let b: usize = b.strip_prefix('e').ok_or_else(err)?.parse().map_err(|_| err())?;
        if b >= 1 && a == b + 1 {
            Ok(SimpleRoot::Chain(b))
        } else {
            Err(err())
        }
    }
}

/// The `n` simple roots of `D_n` (`n >= 2`), branch first.
pub fn simple_roots(n: usize) -> Vec<SimpleRoot> {
    if n < 2 {
        return Vec::new();
    }
    std::iter::once(SimpleRoot::Branch)
        .chain((1..n).map(SimpleRoot::Chain))
        .collect()
}

/// Unordered adjacent pairs of simple roots.
pub fn adjacent_pairs(n: usize) -> Vec<(SimpleRoot, SimpleRoot)> {
    let roots = simple_roots(n);
    let mut out = Vec::new();
    for (i, &a) in roots.iter().enumerate() {
        for &b in &roots[i + 1..] {
            if a.is_adjacent(b) {
                out.push((a, b));
            }
        }
    }
    out
}

/// All `2^n n!` signed permutations in lexicographic order of one-line
/// notation.
pub fn enumerate_group(n: usize) -> Result<Vec<SignedPermutation>, WeylError> {
    if !(1..=MAX_RANK).contains(&n) {
        return Err(WeylError::RankOutOfRange(n));
    }
    fn go(n: usize, used: &mut Vec<bool>, acc: &mut Vec<i32>, out: &mut Vec<SignedPermutation>) {
        if acc.len() == n {
            out.push(SignedPermutation { images: acc.clone() });
            return;
        }
        let candidates = (1..=n as i32).rev().map(|v| -v).chain(1..=n as i32);
        for v in candidates {
            let a = v.unsigned_abs() as usize;
            if used[a] {
                continue;
            }
            used[a] = true;
            acc.push(v);
            go(n, used, acc, out);
            acc.pop();
            used[a] = false;
        }
    }
    let mut out = Vec::with_capacity((1..=n).product::<usize>() << n);
    go(n, &mut vec![false; n + 1], &mut Vec::with_capacity(n), &mut out);
    Ok(out)
}
