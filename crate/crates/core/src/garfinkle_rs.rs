//! Garfinkle's domino Robinson–Schensted correspondence for signed
//! permutations.
//!
//! Inserting `a` with `l = |a|`: the dominoes labeled below `l` stay put; the
//! new domino goes horizontally at the end of row 1 when `a > 0` and
//! vertically at the bottom of column 1 when `a < 0`. Larger labels are then
//! revisited in increasing order. Writing `D` for the old position of `k` and
//! `S` for the squares now held by smaller labels:
//!
//! - `D` misses `S`: `D` stays.
//! - `D` lies inside `S`: a horizontal `D` moves to the end of the next row, a
//!   vertical `D` to the bottom of the next column.
//! - `D` meets `S` in its top-left square: `D` pivots about its other square,
//!   horizontal `{(i,j),(i,j+1)}` to `{(i,j+1),(i+1,j+1)}` and vertical
//!   `{(i,j),(i+1,j)}` to `{(i+1,j),(i+1,j+1)}`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::partitions::Partition;
use crate::tableaux::{Domino, DominoTableau, Square};
use crate::weyl::SignedPermutation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RsError {
    #[error("insertion left a non-domino difference at step {0}")]
    BadGrowth(usize),
    #[error("bumping inconsistency at label {0}")]
    Bump(usize),
    #[error("tableau pair is not in the image of the correspondence: {0}")]
    NotInImage(String),
}

/// Left (insertion) and right (recording) tableaux of equal shape.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TableauPair {
    pub left: DominoTableau,
    pub right: DominoTableau,
}

impl TableauPair {
    pub fn new(left: DominoTableau, right: DominoTableau) -> Result<Self, RsError> {
        let ok = left.rank() == right.rank()
            && left.is_standard()
            && right.is_standard()
            && left.shape_unchecked() == right.shape_unchecked();
        if ok {
            Ok(TableauPair { left, right })
        } else {
            Err(RsError::NotInImage("tableaux differ in rank or shape, or are not standard".into()))
        }
    }

    pub fn rank(&self) -> usize {
        self.left.rank()
    }

    pub fn shape(&self) -> Partition {
        self.left.shape_unchecked()
    }

    pub fn swapped(&self) -> TableauPair {
        TableauPair {
            left: self.right.clone(),
            right: self.left.clone(),
        }
    }
}

/// Row lengths of a growing Young diagram.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct Rows(Vec<u32>);

impl Rows {
    fn row(&self, r: u32) -> u32 {
        self.0.get(r as usize - 1).copied().unwrap_or(0)
    }

    fn col(&self, c: u32) -> u32 {
        self.0.iter().take_while(|&&l| l >= c).count() as u32
    }

    fn contains(&self, s: Square) -> bool {
        s.col <= self.row(s.row)
    }

    fn add(&mut self, s: Square) {
        let r = s.row as usize;
        if self.0.len() < r {
            self.0.resize(r, 0);
        }
        self.0[r - 1] += 1;
    }

    fn remove(&mut self, s: Square) {
        self.0[s.row as usize - 1] -= 1;
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
    }

    fn is_diagram(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= w[1])
    }
}

/// Insertion tableau under construction: `slots[l]` is the domino labeled
/// `l`, if inserted.
#[derive(Debug, Clone)]
struct Partial {
    slots: Vec<Option<Domino>>,
}

impl Partial {
    fn new(n: usize) -> Self {
        Partial { slots: vec![None; n + 1] }
    }

    fn rows(&self) -> Rows {
        let mut rows = Rows::default();
        for d in self.slots.iter().flatten() {
            for s in d.squares() {
                rows.add(s);
            }
        }
        rows
    }

    fn insert(&mut self, value: i32) -> Result<(), RsError> {
        let l = value.unsigned_abs() as usize;
        let mut held = Rows::default();
        for d in self.slots[..l].iter().flatten() {
            for s in d.squares() {
                held.add(s);
            }
        }
        let placed = if value > 0 {
            Domino::horizontal(1, held.row(1) + 1)
        } else {
            Domino::vertical(held.col(1) + 1, 1)
        };
        self.slots[l] = Some(placed);
        for s in placed.squares() {
            held.add(s);
        }
        for k in l + 1..self.slots.len() {
            let Some(old) = self.slots[k] else { continue };
            let [a, b] = old.squares();
            let new = match (held.contains(a), held.contains(b)) {
                (false, false) => old,
                (true, true) => {
                    if old.is_vertical() {
                        let c = a.col + 1;
                        Domino::vertical(held.col(c) + 1, c)
                    } else {
                        let r = a.row + 1;
                        Domino::horizontal(r, held.row(r) + 1)
                    }
                }
                (true, false) => {
                    if old.is_vertical() {
                        Domino::horizontal(b.row, b.col)
                    } else {
                        Domino::vertical(b.row, b.col)
                    }
                }
                (false, true) => return Err(RsError::Bump(k)),
            };
            for s in new.squares() {
                if held.contains(s) {
                    return Err(RsError::Bump(k));
                }
                held.add(s);
            }
            if !held.is_diagram() {
                return Err(RsError::Bump(k));
            }
            self.slots[k] = Some(new);
        }
        Ok(())
    }

    /// Undoes the insertion that added the squares `grown`; returns the
    /// inserted value.
    fn uninsert(&mut self, grown: Domino) -> Result<i32, RsError> {
        let not_in_image = |msg: &str| RsError::NotInImage(msg.to_string());
        let mut extra: BTreeSet<Square> = grown.squares().into_iter().collect();
        for k in (1..self.slots.len()).rev() {
            let Some(new) = self.slots[k] else { continue };
            let hit: Vec<Square> = new.squares().into_iter().filter(|s| extra.contains(s)).collect();
            match hit.len() {
                0 => {}
                2 => {
                    let [a, _] = new.squares();
                    if (!new.is_vertical() && a.row == 1) || (new.is_vertical() && a.col == 1) {
                        self.slots[k] = None;
                        let rest: Vec<&Option<Domino>> = self.slots[..k].iter().collect();
                        debug_assert!(rest.iter().all(|d| d.is_none_or(|d| !d.intersects(new))));
                        return Ok(if new.is_vertical() { -(k as i32) } else { k as i32 });
                    }
                    // Old shape of labels <= k.
                    let mut old_rows = Rows::default();
                    for d in self.slots[..=k].iter().flatten() {
                        for s in d.squares() {
                            old_rows.add(s);
                        }
                    }
                    for s in &extra {
                        old_rows.remove(*s);
                    }
                    let old = if new.is_vertical() {
                        let c = a.col - 1;
                        let len = old_rows.col(c);
                        if len < 2 {
                            return Err(not_in_image("reverse column bump"));
                        }
                        Domino::vertical(len - 1, c)
                    } else {
                        let r = a.row - 1;
                        let len = old_rows.row(r);
                        if len < 2 {
                            return Err(not_in_image("reverse row bump"));
                        }
                        Domino::horizontal(r, len - 1)
                    };
                    self.slots[k] = Some(old);
                    extra = old.squares().into_iter().collect();
                }
                1 => {
                    let z = hit[0];
                    let y = new.other(z);
                    if z != new.second() {
                        return Err(not_in_image("reverse pivot"));
                    }
                    if (new.is_vertical() && y.col < 2) || (!new.is_vertical() && y.row < 2) {
                        return Err(not_in_image("reverse pivot at edge"));
                    }
                    let (x, old) = if new.is_vertical() {
                        let x = Square::new(y.row, y.col - 1);
                        (x, Domino::horizontal(y.row, y.col - 1))
                    } else {
                        let x = Square::new(y.row - 1, y.col);
                        (x, Domino::vertical(y.row - 1, y.col))
                    };
                    self.slots[k] = Some(old);
                    extra.remove(&z);
                    extra.insert(x);
                }
                _ => unreachable!(),
            }
        }
        Err(not_in_image("no inserted domino found"))
    }

    fn into_tableau(self) -> DominoTableau {
        DominoTableau::from_dominoes_unchecked(self.slots.into_iter().skip(1).flatten().collect())
    }
}

/// `(T_L(w), T_R(w))`: insertion tableau of `w(1), ..., w(n)` and the
/// recording tableau whose domino `i` is the growth at step `i`.
pub fn rs(w: &SignedPermutation) -> Result<TableauPair, RsError> {
    let n = w.rank();
    let mut tab = Partial::new(n);
    let mut recording = Vec::with_capacity(n);
    let mut before = Rows::default();
    for (step, &v) in w.images().iter().enumerate() {
        tab.insert(v)?;
        let after = tab.rows();
        let grown: Vec<Square> = (1..=after.0.len() as u32)
            .flat_map(|r| {
                (before.row(r) + 1..=after.row(r)).map(move |c| Square::new(r, c))
            })
            .collect();
        if grown.len() != 2 {
            return Err(RsError::BadGrowth(step + 1));
        }
        let d = Domino::new(grown[0], grown[1]).map_err(|_| RsError::BadGrowth(step + 1))?;
        recording.push(d);
        before = after;
    }
    Ok(TableauPair {
        left: tab.into_tableau(),
        right: DominoTableau::from_dominoes_unchecked(recording),
    })
}

/// The signed permutation with the given tableau pair, by reverse bumping in
/// decreasing order of recording labels.
pub fn rs_inverse(pair: &TableauPair) -> Result<SignedPermutation, RsError> {
    let n = pair.rank();
    if pair.right.rank() != n
        || !pair.left.is_standard()
        || !pair.right.is_standard()
        || pair.left.shape_unchecked() != pair.right.shape_unchecked()
    {
        return Err(RsError::NotInImage("tableaux differ in rank or shape, or are not standard".into()));
    }
    let mut tab = Partial::new(n);
    for (k, d) in pair.left.labeled() {
        tab.slots[k] = Some(d);
    }
    let mut images = vec![0i32; n];
    for i in (1..=n).rev() {
        images[i - 1] = tab.uninsert(pair.right.domino(i))?;
    }
    SignedPermutation::new(images).map_err(|e| RsError::NotInImage(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::partitions_of;
    use crate::tableaux::count_sdt;
    use crate::weyl::enumerate_group;
    use std::collections::HashSet;

    fn sp(v: &[i32]) -> SignedPermutation {
        SignedPermutation::new(v.to_vec()).unwrap()
    }

    fn t(ds: &[Domino]) -> DominoTableau {
        DominoTableau::standard(ds.to_vec()).unwrap()
    }

    #[test]
    fn small_examples() {
        let one = rs(&sp(&[1])).unwrap();
        assert_eq!(one.left, t(&[Domino::horizontal(1, 1)]));
        assert_eq!(one.right, one.left);

        let neg = rs(&sp(&[-1])).unwrap();
        assert_eq!(neg.left, t(&[Domino::vertical(1, 1)]));
        assert_eq!(neg.right, neg.left);

        let swap = rs(&sp(&[2, 1])).unwrap();
        let rows = t(&[Domino::horizontal(1, 1), Domino::horizontal(2, 1)]);
        assert_eq!(swap.left, rows);
        assert_eq!(swap.right, rows);

        let both = rs(&sp(&[-2, -1])).unwrap();
        let cols = t(&[Domino::vertical(1, 1), Domino::vertical(1, 2)]);
        assert_eq!(both.left, cols);
        assert_eq!(both.right, cols);
    }

    /// Every element of rank 2, computed by hand from the bumping rules.
    #[test]
    fn rank_two_table() {
        use Domino as D;
        let h = D::horizontal;
        let v = D::vertical;
        let cases: Vec<(Vec<i32>, Vec<Domino>, Vec<Domino>)> = vec![
            (vec![1, 2], vec![h(1, 1), h(1, 3)], vec![h(1, 1), h(1, 3)]),
            (vec![2, 1], vec![h(1, 1), h(2, 1)], vec![h(1, 1), h(2, 1)]),
            (vec![-1, -2], vec![v(1, 1), v(3, 1)], vec![v(1, 1), v(3, 1)]),
            (vec![-2, -1], vec![v(1, 1), v(1, 2)], vec![v(1, 1), v(1, 2)]),
            // 1 then -2: vertical 2 below nothing smaller in column 1.
            (vec![1, -2], vec![h(1, 1), v(2, 1)], vec![h(1, 1), v(2, 1)]),
            // 2 then -1: 2 is pushed off (1,1) and pivots to (1,2),(2,2)... it
            // is horizontal, meets the new vertical in its left square.
            (vec![2, -1], vec![v(1, 1), v(1, 2)], vec![h(1, 1), h(2, 1)]),
            (vec![-1, 2], vec![v(1, 1), h(1, 2)], vec![v(1, 1), h(1, 2)]),
            (vec![-2, 1], vec![h(1, 1), h(2, 1)], vec![v(1, 1), v(1, 2)]),
        ];
        for (w, left, right) in cases {
            let pair = rs(&sp(&w)).unwrap();
            assert_eq!(pair.left, t(&left), "left of {w:?}");
            assert_eq!(pair.right, t(&right), "right of {w:?}");
        }
    }

    #[test]
    fn bijective_up_to_rank_five() {
        for n in 1..=5 {
            let mut seen = HashSet::new();
            for w in enumerate_group(n).unwrap() {
                let pair = rs(&w).unwrap();
                assert!(pair.left.is_standard() && pair.right.is_standard());
                assert_eq!(pair.left.shape().unwrap(), pair.right.shape().unwrap());
                assert!(seen.insert(pair), "collision at {w}");
            }
            let total: u64 = partitions_of(2 * n as u32).iter().map(|q| count_sdt(q).pow(2)).sum();
            assert_eq!(seen.len() as u64, total);
        }
    }

    #[test]
    fn inverse_swaps_tableaux() {
        for n in 1..=5 {
            for w in enumerate_group(n).unwrap() {
                assert_eq!(rs(&w.inverse()).unwrap(), rs(&w).unwrap().swapped(), "{w}");
            }
        }
    }

    #[test]
    fn reverse_bumping_inverts() {
        for n in 1..=5 {
            for w in enumerate_group(n).unwrap() {
                assert_eq!(rs_inverse(&rs(&w).unwrap()).unwrap(), w);
            }
        }
        let single = TableauPair::new(t(&[Domino::horizontal(1, 1)]), t(&[Domino::horizontal(1, 1)])).unwrap();
        assert_eq!(rs_inverse(&single).unwrap(), sp(&[1]));
        let cols = t(&[Domino::vertical(1, 1), Domino::vertical(1, 2)]);
        let pair = TableauPair::new(cols.clone(), cols).unwrap();
        assert_eq!(rs_inverse(&pair).unwrap(), sp(&[-2, -1]));
    }

    #[test]
    fn mismatched_pair_rejected() {
        let a = t(&[Domino::horizontal(1, 1)]);
        let b = t(&[Domino::vertical(1, 1)]);
        assert!(TableauPair::new(a.clone(), b.clone()).is_err());
        let bogus = TableauPair { left: a, right: b };
        assert!(rs_inverse(&bogus).is_err());
    }
}
