//! Standard domino tableaux.
//!
//! A tableau stores, for each label `k = 1..=n`, the two squares of its
//! domino. Equality is equality of that mapping.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::partitions::Partition;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableauError {
    #[error("squares {0} and {1} are not adjacent")]
    NotDomino(Square, Square),
    #[error("square {0} is covered twice")]
    Overlap(Square),
    #[error("tableau is not standard")]
    NotStandard,
    #[error("label {k} out of range for rank {rank}")]
    LabelOutOfRange { k: usize, rank: usize },
    #[error("cannot parse tableau: {0}")]
    Parse(String),
}

/// A cell of a Young diagram; both coordinates 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Square {
    pub row: u32,
    pub col: u32,
}

impl Square {
    pub const fn new(row: u32, col: u32) -> Self {
        Square { row, col }
    }

    /// Sum of coordinates; its parity decides fixed squares.
    pub fn parity(self) -> u32 {
        (self.row + self.col) % 2
    }

    pub fn is_adjacent(self, other: Square) -> bool {
        self.row.abs_diff(other.row) + self.col.abs_diff(other.col) == 1
    }
}

impl fmt::Display for Square {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

/// Two adjacent squares, stored in increasing order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Domino {
    first: Square,
    second: Square,
}

impl Domino {
    pub fn new(a: Square, b: Square) -> Result<Self, TableauError> {
        if !a.is_adjacent(b) || a.row == 0 || a.col == 0 || b.row == 0 || b.col == 0 {
            return Err(TableauError::NotDomino(a, b));
        }
        let (first, second) = if a < b { (a, b) } else { (b, a) };
        Ok(Domino { first, second })
    }

    pub fn horizontal(row: u32, col: u32) -> Self {
        Domino {
            first: Square::new(row, col),
            second: Square::new(row, col + 1),
        }
    }

    pub fn vertical(row: u32, col: u32) -> Self {
        Domino {
            first: Square::new(row, col),
            second: Square::new(row + 1, col),
        }
    }

    /// Top or left square.
    pub fn first(self) -> Square {
        self.first
    }

    /// Bottom or right square.
    pub fn second(self) -> Square {
        self.second
    }

    pub fn squares(self) -> [Square; 2] {
        [self.first, self.second]
    }

    pub fn is_vertical(self) -> bool {
        self.first.col == self.second.col
    }

    pub fn contains(self, s: Square) -> bool {
        self.first == s || self.second == s
    }

    pub fn intersects(self, other: Domino) -> bool {
        other.squares().iter().any(|&s| self.contains(s))
    }

    /// The square other than `s`.
    pub fn other(self, s: Square) -> Square {
        if self.first == s {
            self.second
        } else {
            self.first
        }
    }

    pub fn transpose(self) -> Domino {
        let t = |s: Square| Square::new(s.col, s.row);
        let (a, b) = (t(self.first), t(self.second));
        if a < b {
            Domino { first: a, second: b }
        } else {
            Domino { first: b, second: a }
        }
    }
}

impl fmt::Display for Domino {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{};{},{}",
            self.first.row, self.first.col, self.second.row, self.second.col
        )
    }
}

/// Row lengths of a set of squares, if the set is a Young diagram.
pub fn diagram_of(squares: impl IntoIterator<Item = Square>) -> Option<Partition> {
    let mut rows: Vec<BTreeSet<u32>> = Vec::new();
    for s in squares {
        if s.row == 0 || s.col == 0 {
            return None;
        }
        let r = s.row as usize;
        if rows.len() < r {
            rows.resize_with(r, BTreeSet::new);
        }
        if !rows[r - 1].insert(s.col) {
            return None;
        }
    }
    let mut lens = Vec::with_capacity(rows.len());
    for row in &rows {
        let len = row.len() as u32;
        if row.iter().next_back().copied().unwrap_or(0) != len {
            return None;
        }
        lens.push(len);
    }
    while lens.last() == Some(&0) {
        lens.pop();
    }
    Partition::new(lens).ok()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DominoTableau {
    dominoes: Vec<Domino>,
}

impl DominoTableau {
    /// Builds a tableau with `dominoes[k-1]` labeled `k`; checks disjointness
    /// but not standardness.
    pub fn from_dominoes(dominoes: Vec<Domino>) -> Result<Self, TableauError> {
        let mut seen = BTreeSet::new();
        for d in &dominoes {
            for s in d.squares() {
                if !seen.insert(s) {
                    return Err(TableauError::Overlap(s));
                }
            }
        }
        Ok(DominoTableau { dominoes })
    }

    /// As `from_dominoes`, and also requires standardness.
    pub fn standard(dominoes: Vec<Domino>) -> Result<Self, TableauError> {
        let t = Self::from_dominoes(dominoes)?;
        if t.is_standard() {
            Ok(t)
        } else {
            Err(TableauError::NotStandard)
        }
    }

    pub(crate) fn from_dominoes_unchecked(dominoes: Vec<Domino>) -> Self {
        DominoTableau { dominoes }
    }

    pub fn empty() -> Self {
        DominoTableau { dominoes: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.dominoes.len()
    }

    /// Domino labeled `k` (1-based).
    pub fn domino(&self, k: usize) -> Domino {
        self.dominoes[k - 1]
    }

    pub fn dominoes(&self) -> &[Domino] {
        &self.dominoes
    }

    pub fn labeled(&self) -> impl Iterator<Item = (usize, Domino)> + '_ {
        self.dominoes.iter().enumerate().map(|(i, &d)| (i + 1, d))
    }

    pub fn squares(&self) -> impl Iterator<Item = Square> + '_ {
        self.dominoes.iter().flat_map(|d| d.squares())
    }

    pub fn is_standard(&self) -> bool {
        let mut rows: Vec<u32> = Vec::new();
        for d in &self.dominoes {
            // Adding the domino must extend rows at their ends and keep the
            // row lengths weakly decreasing.
            let mut next = rows.clone();
            let squares = d.squares();
            for s in squares {
                let r = s.row as usize;
                if next.len() < r {
                    next.resize(r, 0);
                }
            }
            // Squares in the same row must be consecutive at the row end.
            let mut sq = squares.to_vec();
            sq.sort();
            for s in sq {
                let r = s.row as usize - 1;
                if next[r] + 1 != s.col {
                    return false;
                }
                next[r] += 1;
            }
            if next.windows(2).any(|w| w[0] < w[1]) {
                return false;
            }
            rows = next;
        }
        true
    }

    pub fn shape(&self) -> Result<Partition, TableauError> {
        if !self.is_standard() {
            return Err(TableauError::NotStandard);
        }
        Ok(self.shape_unchecked())
    }

    /// Row lengths of the union of squares, assuming standardness.
    pub fn shape_unchecked(&self) -> Partition {
        let mut rows: Vec<u32> = Vec::new();
        for s in self.squares() {
            let r = s.row as usize;
            if rows.len() < r {
                rows.resize(r, 0);
            }
            rows[r - 1] += 1;
        }
        Partition::from_unsorted(rows)
    }

    pub fn vertical_count(&self) -> usize {
        self.dominoes.iter().filter(|d| d.is_vertical()).count()
    }

    /// Restriction to labels `<= k`.
    pub fn first_k_subtableau(&self, k: usize) -> Result<DominoTableau, TableauError> {
        if k > self.rank() {
            return Err(TableauError::LabelOutOfRange { k, rank: self.rank() });
        }
        Ok(DominoTableau {
            dominoes: self.dominoes[..k].to_vec(),
        })
    }

    /// Label of the domino covering `s`.
    pub fn label_at(&self, s: Square) -> Option<usize> {
        self.dominoes.iter().position(|d| d.contains(s)).map(|i| i + 1)
    }

    pub fn label_grid(&self) -> LabelGrid {
        LabelGrid::new(self)
    }

    pub fn transpose(&self) -> DominoTableau {
        DominoTableau {
            dominoes: self.dominoes.iter().map(|d| d.transpose()).collect(),
        }
    }

    /// Replaces the domino of label `k`.
    pub fn with_domino(&self, k: usize, d: Domino) -> DominoTableau {
        let mut dominoes = self.dominoes.clone();
        dominoes[k - 1] = d;
        DominoTableau { dominoes }
    }

    /// Lines `k:r1,c1;r2,c2`, sorted by `k`.
    pub fn serialize(&self) -> String {
        self.labeled()
            .map(|(k, d)| format!("{k}:{d}"))
            .collect::<Vec<_>>()
            .join("\n")
    }

    /// Same entries on one line, separated by spaces.
    pub fn serialize_inline(&self) -> String {
        self.serialize().replace('\n', " ")
    }

    /// Grid of labels with `.` for cells of the bounding box not covered.
    pub fn render_grid(&self) -> String {
        let rows = self.squares().map(|s| s.row).max().unwrap_or(0);
        let cols = self.squares().map(|s| s.col).max().unwrap_or(0);
        let width = self.rank().to_string().len();
        let grid = self.label_grid();
        let mut out = Vec::new();
        for r in 1..=rows {
            let mut line = Vec::new();
            for c in 1..=cols {
                match grid.get(Square::new(r, c)) {
                    Some(k) => line.push(format!("{k:>width$}")),
                    None => line.push(format!("{:>width$}", ".")),
                }
            }
            out.push(line.join(" ").trim_end().to_string());
        }
        out.join("\n")
    }
}

impl fmt::Display for DominoTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_grid())
    }
}

impl FromStr for DominoTableau {
    type Err = TableauError;

    /// Parses entries `k:r1,c1;r2,c2` separated by whitespace; labels must
    /// be exactly `1..=n`. Standardness is checked.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut entries: Vec<(usize, Domino)> = Vec::new();
        for tok in s.split_whitespace() {
            let bad = || TableauError::Parse(tok.to_string());
            let (k, rest) = tok.split_once(':').ok_or_else(bad)?;
            let k: usize = k.parse().map_err(|_| bad())?;
            let (a, b) = rest.split_once(';').ok_or_else(bad)?;
            let sq = |t: &str| -> Result<Square, TableauError> {
                let (r, c) = t.split_once(',').ok_or_else(bad)?;
                Ok(Square::new(
                    r.parse().map_err(|_| bad())?,
                    c.parse().map_err(|_| bad())?,
                ))
            };
            entries.push((k, Domino::new(sq(a)?, sq(b)?)?));
        }
        entries.sort_by_key(|e| e.0);
        if entries.iter().enumerate().any(|(i, e)| e.0 != i + 1) {
            return Err(TableauError::Parse("labels must be 1..n".into()));
        }
        DominoTableau::standard(entries.into_iter().map(|e| e.1).collect())
    }
}

/// Square-to-label index of a tableau.
#[derive(Debug, Clone)]
pub struct LabelGrid {
    cells: Vec<Vec<u8>>,
}

impl LabelGrid {
    pub fn new(t: &DominoTableau) -> Self {
        let mut cells: Vec<Vec<u8>> = Vec::new();
        for (k, d) in t.labeled() {
            for s in d.squares() {
                let (r, c) = (s.row as usize - 1, s.col as usize - 1);
                if cells.len() <= r {
                    cells.resize_with(r + 1, Vec::new);
                }
                if cells[r].len() <= c {
                    cells[r].resize(c + 1, 0);
                }
                cells[r][c] = k as u8;
            }
        }
        LabelGrid { cells }
    }

    pub fn get(&self, s: Square) -> Option<usize> {
        if s.row == 0 || s.col == 0 {
            return None;
        }
        let v = *self
            .cells
            .get(s.row as usize - 1)?
            .get(s.col as usize - 1)?;
        (v != 0).then_some(v as usize)
    }
}

/// Dominoes that can be removed from `p` leaving a partition.
pub fn removable_dominoes(p: &Partition) -> Vec<Domino> {
    let mut out = Vec::new();
    for r in 1..=p.len() {
        let len = p.row_len(r);
        let below = p.row_len(r + 1);
        if len >= below + 2 {
            out.push(Domino::horizontal(r as u32, len - 1));
        }
        if len == below && len > p.row_len(r + 2) {
            out.push(Domino::vertical(r as u32, len));
        }
    }
    out
}

fn remove_domino(p: &Partition, d: Domino) -> Partition {
    let mut rows = p.parts().to_vec();
    for s in d.squares() {
        rows[s.row as usize - 1] -= 1;
    }
    Partition::from_unsorted(rows)
}

/// All standard domino tableaux of shape `p`, built by removing a terminal
/// domino recursively. Empty when `p` is not tileable.
pub fn enumerate_sdt(p: &Partition) -> Vec<DominoTableau> {
    if !p.is_domino_tileable() {
        return Vec::new();
    }
    fn go(p: &Partition, memo: &mut HashMap<Partition, Vec<Vec<Domino>>>) -> Vec<Vec<Domino>> {
        if p.is_empty() {
            return vec![Vec::new()];
        }
        if let Some(v) = memo.get(p) {
            return v.clone();
        }
        let mut out = Vec::new();
        for d in removable_dominoes(p) {
            let smaller = remove_domino(p, d);
            if !smaller.is_domino_tileable() {
                continue;
            }
            for mut prefix in go(&smaller, memo) {
                prefix.push(d);
                out.push(prefix);
            }
        }
        memo.insert(p.clone(), out.clone());
        out
    }
    let mut list: Vec<DominoTableau> = go(p, &mut HashMap::new())
        .into_iter()
        .map(|dominoes| DominoTableau { dominoes })
        .collect();
    list.sort();
    list
}

/// Number of standard domino tableaux of shape `p`.
pub fn count_sdt(p: &Partition) -> u64 {
    fn go(p: &Partition, memo: &mut HashMap<Partition, u64>) -> u64 {
        if p.is_empty() {
            return 1;
        }
        if let Some(&v) = memo.get(p) {
            return v;
        }
        let v = removable_dominoes(p)
            .into_iter()
            .map(|d| remove_domino(p, d))
            .filter(Partition::is_domino_tileable)
            .map(|q| go(&q, memo))
            .sum();
        memo.insert(p.clone(), v);
        v
    }
    if !p.is_domino_tileable() {
        return 0;
    }
    go(p, &mut HashMap::new())
}

/// All standard domino tableaux of rank `n` (all shapes of size `2n`).
pub fn enumerate_all_sdt(n: usize) -> Vec<DominoTableau> {
    crate::partitions::partitions_of(2 * n as u32)
        .iter()
        .flat_map(enumerate_sdt)
        .collect()
}
