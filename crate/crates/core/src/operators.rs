//! Wall-crossing operators acting on the right.
//!
//! `T_ab` is defined on group elements by the descent-complement rule. The
//! other operators act on tableau pairs and reach group elements through
//! [`rs`] / [`rs_inverse`]:
//!
//! - [`h_op`]: both tableaux of a hook-shaped pair move through the single open
//!   cycle covering the hook.
//! - [`v_cprime_r`]: extended type-C move of the 6-domino, then the 5- and
//!   6-dominoes of the right tableau swap orientation inside their 2×2 box.
//! - [`v_c_r`]: the `{C, α₁'}` operator of the `B_2` pair formed by the short
//!   root `C = -e_1` and the branch root `α₁' = e_1 + e_2`, truncated to a
//!   single value on a fixed set of leading right subtableaux.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cycles::{cycles, extended_move, move_through, Convention, CycleError};
use crate::garfinkle_rs::{rs, rs_inverse, RsError, TableauPair};
use crate::partitions::Partition;
use crate::tableaux::{Domino, DominoTableau, Square};
use crate::weyl::{adjacent_pairs, enumerate_group, SignedPermutation, SimpleRoot, WeylError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OperatorError {
    #[error("{op} is not defined here: {reason}")]
    Domain { op: OperatorId, reason: String },
    #[error("{op}: internal inconsistency: {reason}")]
    Inconsistent { op: OperatorId, reason: String },
    #[error("{op}: unimplemented case: {reason}")]
    UnimplementedCase { op: OperatorId, reason: String },
    #[error("{0} and {1} are not adjacent simple roots")]
    NotAdjacent(SimpleRoot, SimpleRoot),
    #[error(transparent)]
    Rs(#[from] RsError),
    #[error(transparent)]
    Cycle(#[from] CycleError),
    #[error(transparent)]
    Weyl(#[from] WeylError),
}

impl OperatorError {
    /// True when the input simply lies outside the operator's domain.
    pub fn is_domain(&self) -> bool {
        matches!(self, OperatorError::Domain { .. } | OperatorError::NotAdjacent(..))
    }
}

/// A right operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OperatorId {
    Tab(SimpleRoot, SimpleRoot),
    VC,
    VCprime,
    H,
}

impl fmt::Display for OperatorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperatorId::Tab(a, b) => write!(f, "T[{a},{b}]"),
            OperatorId::VC => f.write_str("V_C"),
            OperatorId::VCprime => f.write_str("V_C'"),
            OperatorId::H => f.write_str("H"),
        }
    }
}

impl FromStr for OperatorId {
    type Err = WeylError;

    /// `T[a,b]`, `V_C`, `V_C'` (or `vc`, `vcprime`), `H`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        match t.to_ascii_lowercase().as_str() {
            "v_c" | "vc" => return Ok(OperatorId::VC),
            "v_c'" | "vcprime" | "v_cprime" => return Ok(OperatorId::VCprime),
            "h" => return Ok(OperatorId::H),
            _ => {}
        }
        let inner = t
            .strip_prefix("T[")
            .or_else(|| t.strip_prefix("t["))
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| WeylError::Parse(s.to_string()))?;
        let (a, b) = inner.split_once(',').ok_or_else(|| WeylError::Parse(s.to_string()))?;
        Ok(OperatorId::Tab(a.parse()?, b.parse()?))
    }
}

/// The family used by generalized τ-invariants at rank `n`.
pub fn operator_family(n: usize) -> Vec<OperatorId> {
    let mut ops: Vec<OperatorId> = adjacent_pairs(n)
        .into_iter()
        .map(|(a, b)| OperatorId::Tab(a, b))
        .collect();
    ops.extend([OperatorId::VC, OperatorId::VCprime, OperatorId::H]);
    ops
}

fn domain(op: OperatorId, reason: impl Into<String>) -> OperatorError {
    OperatorError::Domain {
        op,
        reason: reason.into(),
    }
}

fn inconsistent(op: OperatorId, reason: impl Into<String>) -> OperatorError {
    OperatorError::Inconsistent {
        op,
        reason: reason.into(),
    }
}

/// Selects the unique candidate whose descents among `{a, b}` are the
/// complement of those of `w`.
fn flip_descents<F>(
    op: OperatorId,
    w: &SignedPermutation,
    descent: F,
    candidates: [SignedPermutation; 2],
) -> Result<Vec<SignedPermutation>, OperatorError>
where
    F: Fn(&SignedPermutation) -> [bool; 2],
{
    let [da, db] = descent(w);
    if da == db {
        return Err(domain(op, "needs exactly one descent in the pair"));
    }
    Ok(candidates
        .into_iter()
        .filter(|c| descent(c) == [!da, !db])
        .collect())
}

/// `T_ab` on the right: the unique `w' ∈ {w s_a, w s_b}` whose descents in
/// `{a, b}` are complementary to those of `w`.
pub fn t_ab_r(w: &SignedPermutation, a: SimpleRoot, b: SimpleRoot) -> Result<SignedPermutation, OperatorError> {
    let op = OperatorId::Tab(a, b);
    if a == b || !a.is_adjacent(b) {
        return Err(OperatorError::NotAdjacent(a, b));
    }
    let candidates = [w.times_reflection(a)?, w.times_reflection(b)?];
    let hits = flip_descents(
        op,
        w,
        |x| [x.has_right_descent(a), x.has_right_descent(b)],
        candidates,
    )?;
    match <[SignedPermutation; 1]>::try_from(hits) {
        Ok([one]) => Ok(one),
        Err(hits) => Err(inconsistent(op, format!("{} candidates", hits.len()))),
    }
}

/// Shapes of `rs(w)` and `rs(t_ab_r(w))`.
pub fn t_ab_shape_effect(
    w: &SignedPermutation,
    a: SimpleRoot,
    b: SimpleRoot,
) -> Result<(Partition, Partition), OperatorError> {
    let after = t_ab_r(w, a, b)?;
    Ok((rs(w)?.shape(), rs(&after)?.shape()))
}

/// The single open cycle covering all of `t`, if exactly one convention
/// provides one.
pub(crate) fn hook_cycle(t: &DominoTableau, conv: Convention) -> Result<Option<DominoTableau>, OperatorError> {
    let open: Vec<_> = cycles(t, conv)?.into_iter().filter(|c| c.is_open()).collect();
    match open.as_slice() {
        [c] if c.is_movable_open() && c.labels.len() == t.rank() => Ok(Some(move_through(t, c)?)),
        _ => Ok(None),
    }
}

/// Moves each tableau of a hook-shaped pair through its covering open cycle.
pub fn h_op(pair: &TableauPair) -> Result<TableauPair, OperatorError> {
    let op = OperatorId::H;
    let shape = pair.shape();
    if !shape.is_hook() {
        return Err(domain(op, format!("shape {shape} is not a hook")));
    }
    let mut results = Vec::new();
    for conv in Convention::BOTH {
        if let (Some(left), Some(right)) = (hook_cycle(&pair.left, conv)?, hook_cycle(&pair.right, conv)?) {
            results.push(TableauPair { left, right });
        }
    }
    match results.as_slice() {
        [] => Err(inconsistent(op, "no convention gives a covering open cycle")),
        [one] => finish(op, one.clone()),
        [x, y] if x == y => finish(op, x.clone()),
        _ => Err(inconsistent(op, "conventions disagree")),
    }
}

fn finish(op: OperatorId, pair: TableauPair) -> Result<TableauPair, OperatorError> {
    if pair.left.shape_unchecked() != pair.right.shape_unchecked() {
        return Err(inconsistent(op, "output shapes differ"));
    }
    if !pair.left.is_standard() || !pair.right.is_standard() {
        return Err(inconsistent(op, "output not standard"));
    }
    Ok(pair)
}

fn leading_shape(t: &DominoTableau, k: usize) -> Option<Partition> {
    if t.rank() < k {
        return None;
    }
    t.first_k_subtableau(k).ok().map(|s| s.shape_unchecked())
}

fn parts(p: &[u32]) -> Partition {
    Partition::new(p.to_vec()).expect("literal partition")
}

/// Defined when the first six dominoes of the right tableau have shape
/// `(5,4,2,1)` with the 3- and 5-dominoes vertical.
pub fn v_cprime_r(pair: &TableauPair) -> Result<TableauPair, OperatorError> {
    let op = OperatorId::VCprime;
    if pair.rank() < 6 {
        return Err(domain(op, "rank below 6"));
    }
    if leading_shape(&pair.right, 6) != Some(parts(&[5, 4, 2, 1])) {
        return Err(domain(op, "first six right dominoes are not (5,4,2,1)"));
    }
    if !pair.right.domino(3).is_vertical() || !pair.right.domino(5).is_vertical() {
        return Err(domain(op, "3- or 5-domino is horizontal"));
    }
    let moved = extended_move(pair, 6, Convention::C)?;
    let right = transpose_box(&moved.right, 5, 6)
        .ok_or_else(|| inconsistent(op, "5- and 6-dominoes do not tile a 2x2 box"))?;
    finish(op, TableauPair { left: moved.left, right })
}

/// Turns two dominoes tiling a 2×2 box the other way, smaller label first.
fn transpose_box(t: &DominoTableau, a: usize, b: usize) -> Option<DominoTableau> {
    let (da, db) = (t.domino(a), t.domino(b));
    let corner = da.first().min(db.first());
    let Square { row, col } = corner;
    let box_squares = [
        Square::new(row, col),
        Square::new(row, col + 1),
        Square::new(row + 1, col),
        Square::new(row + 1, col + 1),
    ];
    let covered = da.squares().into_iter().chain(db.squares());
    if !covered.clone().all(|s| box_squares.contains(&s)) || da.is_vertical() != db.is_vertical() {
        return None;
    }
    let (na, nb) = if da.is_vertical() {
        (Domino::horizontal(row, col), Domino::horizontal(row + 1, col))
    } else {
        (Domino::vertical(row, col), Domino::vertical(row, col + 1))
    };
    let out = t.with_domino(a, na).with_domino(b, nb);
    out.is_standard().then_some(out)
}

/// Leading right subtableau shapes on which [`v_c_r`] is defined.
pub fn v_c_domain_shapes() -> (Partition, Vec<Partition>) {
    (
        parts(&[4, 2]),
        vec![
            parts(&[4, 3, 1]),
            parts(&[4, 2, 2]),
            parts(&[4, 2, 1, 1]),
            parts(&[3, 3, 2]),
        ],
    )
}

fn in_v_c_domain(right: &DominoTableau) -> bool {
    let (three, fours) = v_c_domain_shapes();
    leading_shape(right, 3).as_ref() == Some(&three)
        || leading_shape(right, 4).is_some_and(|s| fours.contains(&s))
}

/// `w(C) < 0` for `C = -e_1`.
fn c_descent(w: &SignedPermutation) -> bool {
    w.image(1) > 0
}

/// Among `w s_C`, `w s_α₁'` with complementary descents in `{C, α₁'}`, keeps
/// the candidate whose shape is unchanged or whose first four right dominoes
/// form `(3,3,1,1)`. No survivor means the pair is outside the domain; two
/// survivors are reported as an unimplemented case.
pub fn v_c_r(pair: &TableauPair) -> Result<TableauPair, OperatorError> {
    let op = OperatorId::VC;
    if pair.rank() < 3 || !in_v_c_domain(&pair.right) {
        return Err(domain(op, "leading right subtableau outside the domain"));
    }
    let w = rs_inverse(pair)?;
    let branch = SimpleRoot::Branch;
    let candidates = [w.times_first_sign_change(), w.times_reflection(branch)?];
    let hits = flip_descents(op, &w, |x| [c_descent(x), x.has_right_descent(branch)], candidates)?;
    let shape = pair.shape();
    let target = parts(&[3, 3, 1, 1]);
    let mut kept = Vec::new();
    for x in hits {
        let p = rs(&x)?;
        if p.shape() == shape || leading_shape(&p.right, 4).as_ref() == Some(&target) {
            kept.push(p);
        }
    }
    match <[TableauPair; 1]>::try_from(kept) {
        Ok([one]) => finish(op, one),
        Err(kept) if kept.is_empty() => Err(domain(op, "no image of an allowed shape")),
        Err(kept) => Err(OperatorError::UnimplementedCase {
            op,
            reason: format!("{} admissible images", kept.len()),
        }),
    }
}

/// Applies `op` to a group element, tableau-level operators going through
/// `rs` and `rs_inverse`.
pub fn apply(op: OperatorId, w: &SignedPermutation) -> Result<SignedPermutation, OperatorError> {
    match op {
        OperatorId::Tab(a, b) => t_ab_r(w, a, b),
        _ => {
            let pair = rs(w)?;
            let out = apply_pair(op, &pair)?;
            Ok(rs_inverse(&out)?)
        }
    }
}

/// Applies `op` to a tableau pair; `T_ab` goes through the group.
pub fn apply_pair(op: OperatorId, pair: &TableauPair) -> Result<TableauPair, OperatorError> {
    match op {
        OperatorId::Tab(a, b) => Ok(rs(&t_ab_r(&rs_inverse(pair)?, a, b)?)?),
        OperatorId::VC => v_c_r(pair),
        OperatorId::VCprime => v_cprime_r(pair),
        OperatorId::H => h_op(pair),
    }
}

/// `Some(image)` inside the domain, `None` outside it; other errors propagate.
pub fn try_apply(op: OperatorId, w: &SignedPermutation) -> Result<Option<SignedPermutation>, OperatorError> {
    match apply(op, w) {
        Ok(x) => Ok(Some(x)),
        Err(e) if e.is_domain() => Ok(None),
        Err(e) => Err(e),
    }
}

/// Same as [`try_apply`] but treating unimplemented cases as undefined too.
pub fn defined_image(op: OperatorId, w: &SignedPermutation) -> Result<Option<SignedPermutation>, OperatorError> {
    match apply(op, w) {
        Ok(x) => Ok(Some(x)),
        Err(e) if e.is_domain() || matches!(e, OperatorError::UnimplementedCase { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Which descent set seeds the invariant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum TauSide {
    /// Right descents of `w`, operators by right multiplication.
    #[default]
    Right,
    /// Everything applied to `w⁻¹`: left descents, operators on the left.
    Mirrored,
}

fn oriented(w: &SignedPermutation, side: TauSide) -> SignedPermutation {
    match side {
        TauSide::Right => w.clone(),
        TauSide::Mirrored => w.inverse(),
    }
}

/// Recursive generalized τ-invariant comparison.
pub fn generalized_tau_equivalent(w1: &SignedPermutation, w2: &SignedPermutation, depth: usize) -> bool {
    generalized_tau_equivalent_on(w1, w2, depth, TauSide::Right)
}

pub fn generalized_tau_equivalent_on(
    w1: &SignedPermutation,
    w2: &SignedPermutation,
    depth: usize,
    side: TauSide,
) -> bool {
    if w1.rank() != w2.rank() {
        return false;
    }
    tau_equiv(&oriented(w1, side), &oriented(w2, side), depth)
}

fn tau_equiv(w1: &SignedPermutation, w2: &SignedPermutation, depth: usize) -> bool {
    if w1 == w2 {
        return true;
    }
    if w1.tau_right() != w2.tau_right() {
        return false;
    }
    if depth == 0 {
        return true;
    }
    operator_family(w1.rank()).into_iter().all(|op| {
        match (defined_image(op, w1), defined_image(op, w2)) {
            (Ok(None), Ok(None)) => true,
            (Ok(Some(x)), Ok(Some(y))) => tau_equiv(&x, &y, depth - 1),
            _ => false,
        }
    })
}

/// Generalized τ-equivalence classes of `W'_n` at `depth`, computed by
/// refinement; each class sorted, classes sorted by first element.
pub fn tau_classes(n: usize, depth: usize, side: TauSide) -> Result<Vec<Vec<SignedPermutation>>, OperatorError> {
    let group: Vec<SignedPermutation> = enumerate_group(n)?.iter().map(|w| oriented(w, side)).collect();
    let index: HashMap<&SignedPermutation, usize> = group.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let ops = operator_family(n);
    let images: Vec<Vec<Option<usize>>> = group
        .par_iter()
        .map(|w| {
            ops.iter()
                .map(|&op| defined_image(op, w).map(|x| x.map(|x| index[&x])))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;
    let mut class = relabel(group.iter().map(|w| w.tau_right()).collect::<Vec<_>>());
    for _ in 0..depth {
        let keys: Vec<(usize, Vec<Option<usize>>)> = images
            .iter()
            .enumerate()
            .map(|(i, imgs)| (class[i], imgs.iter().map(|x| x.map(|j| class[j])).collect()))
            .collect();
        class = relabel(keys);
    }
    let mut out: Vec<Vec<SignedPermutation>> = vec![Vec::new(); class.iter().max().map_or(0, |m| m + 1)];
    for (i, &c) in class.iter().enumerate() {
        out[c].push(oriented(&group[i], side));
    }
    for c in &mut out {
        c.sort();
    }
    out.sort();
    Ok(out)
}

fn relabel<K: std::hash::Hash + Eq>(keys: Vec<K>) -> Vec<usize> {
    let mut ids: HashMap<K, usize> = HashMap::new();
    let mut out = Vec::with_capacity(keys.len());
    for k in keys {
        let next = ids.len();
        out.push(*ids.entry(k).or_insert(next));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tableaux::enumerate_sdt;

    fn sp(v: &[i32]) -> SignedPermutation {
        SignedPermutation::new(v.to_vec()).unwrap()
    }

    #[test]
    fn identity_is_outside_every_t_ab() {
        for (a, b) in adjacent_pairs(4) {
            assert!(t_ab_r(&SignedPermutation::identity(4), a, b).unwrap_err().is_domain());
        }
    }

    #[test]
    fn reflection_goes_to_product() {
        let (a, b) = (SimpleRoot::Chain(1), SimpleRoot::Chain(2));
        let sa = a.reflection(3).unwrap();
        let want = sa.compose(&b.reflection(3).unwrap()).unwrap();
        assert_eq!(t_ab_r(&sa, a, b).unwrap(), want);
    }

    #[test]
    fn non_adjacent_pair_rejected() {
        let w = sp(&[2, 1, 3]);
        assert_eq!(
            t_ab_r(&w, SimpleRoot::Branch, SimpleRoot::Chain(1)),
            Err(OperatorError::NotAdjacent(SimpleRoot::Branch, SimpleRoot::Chain(1)))
        );
    }

    #[test]
    fn t_ab_is_an_involution() {
        for n in 3..=4 {
            for w in enumerate_group(n).unwrap() {
                for (a, b) in adjacent_pairs(n) {
                    if let Ok(x) = t_ab_r(&w, a, b) {
                        assert_eq!(t_ab_r(&x, a, b).unwrap(), w);
                    }
                }
            }
        }
    }

    #[test]
    fn op_ids_round_trip() {
        for op in operator_family(5) {
            assert_eq!(op.to_string().parse::<OperatorId>().unwrap(), op);
        }
        assert_eq!("vcprime".parse::<OperatorId>().unwrap(), OperatorId::VCprime);
    }

    fn hook_pairs(n: usize) -> Vec<TableauPair> {
        let mut out = Vec::new();
        for a in (1..=2 * n as u32).rev() {
            let mut p = vec![a];
            p.extend(std::iter::repeat(1).take(2 * n - a as usize));
            let shape = Partition::new(p).unwrap();
            let ts = enumerate_sdt(&shape);
            for l in &ts {
                for r in &ts {
                    out.push(TableauPair::new(l.clone(), r.clone()).unwrap());
                }
            }
        }
        out
    }

    #[test]
    fn h_on_a_row() {
        let t = DominoTableau::standard(vec![Domino::horizontal(1, 1), Domino::horizontal(1, 3)]).unwrap();
        let out = h_op(&TableauPair::new(t.clone(), t).unwrap()).unwrap();
        assert_eq!(out.shape(), parts(&[3, 1]));
    }

    #[test]
    fn h_is_an_involution_on_hooks() {
        for n in 1..=3 {
            for pair in hook_pairs(n) {
                let once = h_op(&pair).unwrap();
                assert!(once.shape().is_hook());
                assert_eq!(h_op(&once).unwrap(), pair);
            }
        }
    }

    #[test]
    fn h_rejects_a_square() {
        let t = DominoTableau::standard(vec![Domino::horizontal(1, 1), Domino::horizontal(2, 1)]).unwrap();
        assert!(h_op(&TableauPair::new(t.clone(), t).unwrap()).unwrap_err().is_domain());
    }

    #[test]
    fn v_cprime_domain() {
        let w = SignedPermutation::identity(5);
        assert!(v_cprime_r(&rs(&w).unwrap()).unwrap_err().is_domain());
    }

    #[test]
    fn v_cprime_golden() {
        let w: SignedPermutation = "-1,2,-5,6,-4,3".parse().unwrap();
        let out = v_cprime_r(&rs(&w).unwrap()).unwrap();
        assert_eq!(out.shape(), parts(&[5, 3, 3, 1]));
        assert_eq!(out.left.render_grid(), "1 2 2 3 3\n1 5 6 . .\n4 5 6 . .\n4 . . . .");
        assert_eq!(out.right.render_grid(), "1 2 2 4 4\n1 5 5 . .\n3 6 6 . .\n3 . . . .");
    }

    #[test]
    fn v_cprime_needs_vertical_three() {
        // same shape (5,4,2,1), but the 3-domino lies flat
        let w: SignedPermutation = "-1,2,-5,6,-4,3".parse().unwrap();
        let pair = rs(&w).unwrap();
        let d = |a: u32, b: u32, c: u32, e: u32| Domino::new(Square::new(a, b), Square::new(c, e)).unwrap();
        let right = DominoTableau::standard(vec![
            d(1, 1, 2, 1),
            d(1, 2, 1, 3),
            d(1, 4, 1, 5),
            d(3, 1, 4, 1),
            d(2, 2, 3, 2),
            d(2, 3, 2, 4),
        ])
        .unwrap();
        assert_eq!(right.shape().unwrap(), parts(&[5, 4, 2, 1]));
        let bad = TableauPair::new(pair.left, right).unwrap();
        assert!(v_cprime_r(&bad).unwrap_err().is_domain());
    }

    #[test]
    fn v_c_shapes_at_rank_four() {
        let target = parts(&[3, 3, 1, 1]);
        let mut hits = 0;
        for w in enumerate_group(4).unwrap() {
            let pair = rs(&w).unwrap();
            if let Ok(out) = v_c_r(&pair) {
                hits += 1;
                assert!(out.shape() == pair.shape() || out.shape() == target);
            }
        }
        assert!(hits > 0);
    }

    #[test]
    fn v_c_domain() {
        let w = SignedPermutation::identity(4);
        // shape (8): leading (4,2) fails, leading four is (8)
        assert!(v_c_r(&rs(&w).unwrap()).unwrap_err().is_domain());
    }

    #[test]
    fn tau_is_reflexive() {
        for w in enumerate_group(3).unwrap() {
            for d in 0..3 {
                assert!(generalized_tau_equivalent(&w, &w, d));
            }
        }
    }

    #[test]
    fn different_descents_differ_at_depth_zero() {
        let (a, b) = (SignedPermutation::identity(3), sp(&[2, 1, 3]));
        assert_ne!(a.tau_right(), b.tau_right());
        assert!(!generalized_tau_equivalent(&a, &b, 0));
    }

    #[test]
    fn refinement_agrees_with_recursion() {
        for side in [TauSide::Right, TauSide::Mirrored] {
            let classes = tau_classes(3, 2, side).unwrap();
            for c in &classes {
                for w in c {
                    assert!(generalized_tau_equivalent_on(&c[0], w, 2, side));
                }
            }
            for pair in classes.windows(2) {
                assert!(!generalized_tau_equivalent_on(&pair[0][0], &pair[1][0], 2, side));
            }
        }
    }
}
