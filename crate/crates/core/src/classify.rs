//! From a left tableau to the tableau and orbit label of its orbital variety.
//!
//! [`normalize`] repeatedly moves through admissible open cycles until the
//! shape is a D-partition. One step moves a set of open cycles of a single
//! convention at once; every cycle's boundary squares must pass the
//! configured [`RowPolicy`] and the combined move must strictly lower the
//! shape in dominance order. With the default [`Selection`], steps landing
//! on a D-partition win, and among the rest only the dominance-maximal
//! results count. Hook shapes take the single covering cycle instead.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cycles::{cycles, move_through, move_through_all, Convention, Cycle, CycleError};
use crate::garfinkle_rs::{rs, RsError};
use crate::operators::{defined_image, hook_cycle, operator_family, OperatorError};
use crate::partitions::{d_partitions_of, Partition, PartitionError, SpecialCache};
use crate::tableaux::{count_sdt, DominoTableau};
use crate::weyl::{enumerate_group, SignedPermutation, WeylError};

pub const ROW_POLICY_ENV: &str = "DOMINO_ROW_POLICY";
pub const NAMING_ENV: &str = "DOMINO_CONVENTION_NAMING";
pub const SELECTION_ENV: &str = "DOMINO_MOVE_SELECTION";
pub const MOVES_ENV: &str = "DOMINO_MOVE_SET";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("no admissible move from shape {shape}:\n{tableau}")]
    Stuck { shape: Partition, tableau: String },
    #[error("shape {0} is not a D-partition")]
    NotDPartition(Partition),
    #[error("tableau is not standard")]
    NonStandard,
    #[error("no special shape reachable from:\n{0}")]
    NoSpecial(String),
    #[error("unknown setting {0:?}")]
    Setting(String),
    #[error(transparent)]
    Cycle(#[from] CycleError),
    #[error(transparent)]
    Rs(#[from] RsError),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Weyl(#[from] WeylError),
}

/// How "holes and corners lie in rows of even length" is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum RowPolicy {
    /// Both rows measured in the shape before the move.
    #[default]
    BeforeMove,
    /// Vacated square's row before the move, new square's row after it.
    Containing,
    /// Both rows measured after the move.
    AfterMove,
    /// Only the vacated square's row, before the move.
    HoleOnly,
    /// No parity condition.
    Unrestricted,
}

impl RowPolicy {
    pub const ALL: [RowPolicy; 5] = [
        RowPolicy::BeforeMove,
        RowPolicy::Containing,
        RowPolicy::AfterMove,
        RowPolicy::HoleOnly,
        RowPolicy::Unrestricted,
    ];

    pub fn admits(self, before: &Partition, after: &Partition, c: &Cycle) -> bool {
        let (Some(hole), Some(corner)) = (c.removed_square, c.added_square) else {
            return false;
        };
        let len = |p: &Partition, row: u32| p.row_len(row as usize);
        let even = |x: u32| x % 2 == 0;
        match self {
            RowPolicy::BeforeMove => even(len(before, hole.row)) && even(len(before, corner.row)),
            RowPolicy::Containing => even(len(before, hole.row)) && even(len(after, corner.row)),
            RowPolicy::AfterMove => even(len(after, hole.row)) && even(len(after, corner.row)),
            RowPolicy::HoleOnly => even(len(before, hole.row)),
            RowPolicy::Unrestricted => true,
        }
    }
}

impl fmt::Display for RowPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RowPolicy::BeforeMove => "before-move",
            RowPolicy::Containing => "containing",
            RowPolicy::AfterMove => "after-move",
            RowPolicy::HoleOnly => "hole-only",
            RowPolicy::Unrestricted => "unrestricted",
        })
    }
}

impl FromStr for RowPolicy {
    type Err = ClassifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RowPolicy::ALL
            .into_iter()
            .find(|p| p.to_string() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| ClassifyError::Setting(s.to_string()))
    }
}

/// Which checkerboard parity is called type D.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Naming {
    /// Type D fixes `(1,1)`.
    #[default]
    Standard,
    Swapped,
}

impl fmt::Display for Naming {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Naming::Standard => "standard",
            Naming::Swapped => "swapped",
        })
    }
}

impl FromStr for Naming {
    type Err = ClassifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "standard" => Ok(Naming::Standard),
            "swapped" => Ok(Naming::Swapped),
            _ => Err(ClassifyError::Setting(s.to_string())),
        }
    }
}

/// Which candidate moves are admissible.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Selection {
    /// Moves reaching a D-partition if there are any; among those, the
    /// dominance-maximal results.
    #[default]
    DFirst,
    /// Dominance-maximal results.
    Greatest,
    /// Dominance-minimal results.
    Least,
    /// Every strictly lowering move.
    Any,
}

impl Selection {
    pub const ALL: [Selection; 4] = [Selection::DFirst, Selection::Greatest, Selection::Least, Selection::Any];
}

impl fmt::Display for Selection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Selection::DFirst => "d-first",
            Selection::Greatest => "greatest",
            Selection::Least => "least",
            Selection::Any => "any",
        })
    }
}

impl FromStr for Selection {
    type Err = ClassifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Selection::ALL
            .into_iter()
            .find(|x| x.to_string() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| ClassifyError::Setting(s.to_string()))
    }
}

/// Whether one step moves a single cycle or any set of cycles of one
/// convention at once.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum MoveSet {
    #[default]
    Simultaneous,
    Single,
}

impl fmt::Display for MoveSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MoveSet::Simultaneous => "simultaneous",
            MoveSet::Single => "single",
        })
    }
}

impl FromStr for MoveSet {
    type Err = ClassifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "simultaneous" => Ok(MoveSet::Simultaneous),
            "single" => Ok(MoveSet::Single),
            _ => Err(ClassifyError::Setting(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Settings {
    pub policy: RowPolicy,
    pub naming: Naming,
    pub selection: Selection,
    pub moves: MoveSet,
}

impl Settings {
    /// Defaults overridden by `DOMINO_ROW_POLICY`, `DOMINO_CONVENTION_NAMING`,
    /// `DOMINO_MOVE_SELECTION` and `DOMINO_MOVE_SET`.
    pub fn from_env() -> Result<Settings, ClassifyError> {
        let mut s = Settings::default();
        if let Ok(v) = std::env::var(ROW_POLICY_ENV) {
            s.policy = v.parse()?;
        }
        if let Ok(v) = std::env::var(NAMING_ENV) {
            s.naming = v.parse()?;
        }
        if let Ok(v) = std::env::var(SELECTION_ENV) {
            s.selection = v.parse()?;
        }
        if let Ok(v) = std::env::var(MOVES_ENV) {
            s.moves = v.parse()?;
        }
        Ok(s)
    }

    /// The parity convention called type D.
    pub fn type_d(&self) -> Convention {
        match self.naming {
            Naming::Standard => Convention::D,
            Naming::Swapped => Convention::C,
        }
    }

    /// Type D first.
    pub fn conventions(&self) -> [Convention; 2] {
        [self.type_d(), self.type_d().other()]
    }
}

impl fmt::Display for Settings {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "policy={} naming={} selection={} moves={}",
            self.policy, self.naming, self.selection, self.moves
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Numeral {
    I,
    II,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrbitLabel {
    pub partition: Partition,
    pub numeral: Option<Numeral>,
}

impl fmt::Display for OrbitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.partition)?;
        match self.numeral {
            Some(Numeral::I) => f.write_str(" I"),
            Some(Numeral::II) => f.write_str(" II"),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub convention: Convention,
    /// Labels of each cycle moved.
    pub cycles: Vec<Vec<usize>>,
    pub before: Partition,
    pub after: Partition,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizationTrace {
    pub steps: Vec<Step>,
}

impl NormalizationTrace {
    pub fn is_strictly_decreasing(&self) -> bool {
        self.steps
            .iter()
            .all(|s| s.after.dominance_lt(&s.before).unwrap_or(false))
    }
}

/// One admissible move.
#[derive(Debug, Clone)]
pub struct Move {
    pub step: Step,
    pub result: DominoTableau,
}

/// All admissible moves from `t`, best first (the first one is the move
/// [`normalize`] takes). Empty when the shape is a D-partition.
///
/// Ties are broken by dominance-greater result (smaller for `Least`), fewer
/// cycles, smaller labels, then type D before type C.
pub fn admissible_moves(t: &DominoTableau, settings: &Settings) -> Result<Vec<Move>, ClassifyError> {
    let before = t.shape().map_err(|_| ClassifyError::NonStandard)?;
    if before.is_d_partition() {
        return Ok(Vec::new());
    }
    if before.is_hook() {
        return hook_move(t, &before, settings).map(|m| vec![m]);
    }
    let mut moves = Vec::new();
    for conv in settings.conventions() {
        let pool: Vec<Cycle> = cycles(t, conv)?
            .into_iter()
            .filter(|c| c.is_movable_open() && settings.policy.admits(&before, &c.moved_shape(&before), c))
            .collect();
        for set in cycle_sets(&pool, settings.moves) {
            let result = match move_through_all(t, &set) {
                Ok(r) => r,
                Err(CycleError::NonStandard(_)) => continue,
                Err(e) => return Err(e.into()),
            };
            let after = result.shape_unchecked();
            if !after.dominance_lt(&before)? {
                continue;
            }
            moves.push(Move {
                step: Step {
                    convention: conv,
                    cycles: set.into_iter().map(|c| c.labels).collect(),
                    before: before.clone(),
                    after,
                },
                result,
            });
        }
    }
    if settings.selection == Selection::DFirst && moves.iter().any(|m| m.step.after.is_d_partition()) {
        moves.retain(|m| m.step.after.is_d_partition());
    }
    let shapes: Vec<Partition> = moves.iter().map(|m| m.step.after.clone()).collect();
    match settings.selection {
        Selection::DFirst | Selection::Greatest => {
            moves.retain(|m| !shapes.iter().any(|s| m.step.after.dominance_lt(s).unwrap_or(false)))
        }
        Selection::Least => moves.retain(|m| !shapes.iter().any(|s| s.dominance_lt(&m.step.after).unwrap_or(false))),
        Selection::Any => {}
    }
    // conventions were visited in tie-break order; the sort is stable
    moves.sort_by(|a, b| {
        let by_shape = a.step.after.dominance_linear_cmp(&b.step.after);
        let by_shape = if settings.selection == Selection::Least {
            by_shape
        } else {
            by_shape.reverse()
        };
        by_shape
            .then(a.step.cycles.len().cmp(&b.step.cycles.len()))
            .then(a.step.cycles.cmp(&b.step.cycles))
    });
    Ok(moves)
}

/// Nonempty subsets of `pool` (singletons only for `MoveSet::Single`).
fn cycle_sets(pool: &[Cycle], moves: MoveSet) -> Vec<Vec<Cycle>> {
    match moves {
        MoveSet::Single => pool.iter().map(|c| vec![c.clone()]).collect(),
        MoveSet::Simultaneous => (1u64..1 << pool.len())
            .map(|mask| {
                pool.iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, c)| c.clone())
                    .collect()
            })
            .collect(),
    }
}

fn hook_move(t: &DominoTableau, before: &Partition, settings: &Settings) -> Result<Move, ClassifyError> {
    for conv in settings.conventions() {
        if let Some(result) = hook_cycle(t, conv)? {
            return Ok(Move {
                step: Step {
                    convention: conv,
                    cycles: vec![(1..=t.rank()).collect()],
                    before: before.clone(),
                    after: result.shape_unchecked(),
                },
                result,
            });
        }
    }
    Err(stuck(t, before))
}

fn stuck(t: &DominoTableau, shape: &Partition) -> ClassifyError {
    ClassifyError::Stuck {
        shape: shape.clone(),
        tableau: t.render_grid(),
    }
}

pub fn normalize(t: &DominoTableau) -> Result<(DominoTableau, NormalizationTrace), ClassifyError> {
    normalize_with(t, &Settings::default())
}

pub fn normalize_with(
    t: &DominoTableau,
    settings: &Settings,
) -> Result<(DominoTableau, NormalizationTrace), ClassifyError> {
    let mut cur = t.clone();
    let mut trace = NormalizationTrace::default();
    loop {
        let shape = cur.shape().map_err(|_| ClassifyError::NonStandard)?;
        if shape.is_d_partition() {
            return Ok((cur, trace));
        }
        let Some(m) = admissible_moves(&cur, settings)?.into_iter().next() else {
            return Err(stuck(&cur, &shape));
        };
        trace.steps.push(m.step);
        cur = m.result;
    }
}

/// Every final tableau reachable by some order of admissible moves, and the
/// dead ends met on the way (non-D shapes with no admissible move).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Exploration {
    pub finals: BTreeSet<DominoTableau>,
    pub dead_ends: BTreeSet<DominoTableau>,
}

impl Exploration {
    pub fn is_confluent(&self) -> bool {
        self.finals.len() == 1 && self.dead_ends.is_empty()
    }
}

pub fn explore_normalizations(t: &DominoTableau, settings: &Settings) -> Result<Exploration, ClassifyError> {
    let mut out = Exploration::default();
    let mut seen = BTreeSet::new();
    let mut stack = vec![t.clone()];
    while let Some(cur) = stack.pop() {
        if !seen.insert(cur.clone()) {
            continue;
        }
        if cur.shape_unchecked().is_d_partition() {
            out.finals.insert(cur);
            continue;
        }
        let moves = match admissible_moves(&cur, settings) {
            Ok(m) => m,
            Err(ClassifyError::Stuck { .. }) => Vec::new(),
            Err(e) => return Err(e),
        };
        if moves.is_empty() {
            out.dead_ends.insert(cur);
        }
        stack.extend(moves.into_iter().map(|m| m.result));
    }
    Ok(out)
}

/// Numeral I for `n_v ≡ 0 (mod 4)`, II for `n_v ≡ 2`.
pub fn orbit_label(t: &DominoTableau) -> Result<OrbitLabel, ClassifyError> {
    let partition = t.shape().map_err(|_| ClassifyError::NonStandard)?;
    if !partition.is_d_partition() {
        return Err(ClassifyError::NotDPartition(partition));
    }
    let numeral = partition.is_very_even().then(|| {
        if t.vertical_count() % 4 == 0 {
            Numeral::I
        } else {
            Numeral::II
        }
    });
    Ok(OrbitLabel { partition, numeral })
}

pub fn classify(w: &SignedPermutation) -> Result<(OrbitLabel, DominoTableau), ClassifyError> {
    classify_with(w, &Settings::default())
}

pub fn classify_with(w: &SignedPermutation, settings: &Settings) -> Result<(OrbitLabel, DominoTableau), ClassifyError> {
    let (t, _) = normalize_with(&rs(w)?.left, settings)?;
    Ok((orbit_label(&t)?, t))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecialResult {
    pub tableau: DominoTableau,
    /// Labels of the type-D cycles moved, in order.
    pub trace: Vec<Vec<usize>>,
    /// Special-shape tableaux in the whole move class of the input.
    pub special_in_class: usize,
}

impl SpecialResult {
    pub fn is_unique(&self) -> bool {
        self.special_in_class == 1
    }
}

pub fn special_normalize(t: &DominoTableau) -> Result<SpecialResult, ClassifyError> {
    special_normalize_with(t, &Settings::default())
}

/// Breadth-first search through open type-D cycle moves in either direction.
/// Returns the nearest special-shape tableau (ties broken by tableau order)
/// and counts every special-shape tableau in the connected move class.
pub fn special_normalize_with(t: &DominoTableau, settings: &Settings) -> Result<SpecialResult, ClassifyError> {
    if !t.is_standard() {
        return Err(ClassifyError::NonStandard);
    }
    let conv = settings.type_d();
    let mut cache = SpecialCache::default();
    let mut parent: HashMap<DominoTableau, Option<(DominoTableau, Vec<usize>)>> = HashMap::new();
    parent.insert(t.clone(), None);
    let mut queue = VecDeque::from([(t.clone(), 0usize)]);
    let mut best: Option<(usize, DominoTableau)> = None;
    let mut special_in_class = 0;
    while let Some((cur, dist)) = queue.pop_front() {
        if cache.is_special(&cur.shape_unchecked()) {
            special_in_class += 1;
            match &best {
                Some((d, b)) if (*d, b) <= (dist, &cur) => {}
                _ => best = Some((dist, cur.clone())),
            }
        }
        for c in cycles(&cur, conv)? {
            if !c.is_movable_open() {
                continue;
            }
            let next = move_through(&cur, &c)?;
            if !parent.contains_key(&next) {
                parent.insert(next.clone(), Some((cur.clone(), c.labels.clone())));
                queue.push_back((next, dist + 1));
            }
        }
    }
    let (_, tableau) = best.ok_or_else(|| ClassifyError::NoSpecial(t.render_grid()))?;
    let mut trace = Vec::new();
    let mut at = tableau.clone();
    while let Some(Some((prev, labels))) = parent.get(&at) {
        trace.push(labels.clone());
        at = prev.clone();
    }
    trace.reverse();
    Ok(SpecialResult {
        tableau,
        trace,
        special_in_class,
    })
}

/// Generalized τ-invariants of geometric cells.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarietyTau {
    /// Elements grouped by equivalence, each group sorted.
    pub classes: Vec<Vec<SignedPermutation>>,
    /// Number of fibers of [`classify`].
    pub fibers: usize,
    /// Representatives of one fiber that disagree on descents or images.
    pub inconsistencies: Vec<String>,
}

impl VarietyTau {
    pub fn separates_fibers(&self) -> bool {
        self.classes.len() == self.fibers
    }
}

/// τ-equivalence on the fibers of [`classify`] at `depth`.
///
/// A fiber is represented by the elements whose left tableau already is the
/// fiber's tableau. Its descents are the left descents of a representative
/// (right descents of the inverse), and an operator sends it to the fiber of
/// `op(r⁻¹)⁻¹`; undefined and unimplemented cases count as undefined. Every
/// representative is checked to give the same answers.
pub fn variety_tau_classes(n: usize, depth: usize, settings: &Settings) -> Result<VarietyTau, ClassifyError> {
    let group = enumerate_group(n)?;
    let classified: Vec<(OrbitLabel, DominoTableau)> = group
        .par_iter()
        .map(|w| classify_with(w, settings))
        .collect::<Result<_, _>>()?;
    let mut fiber_of: HashMap<&(OrbitLabel, DominoTableau), usize> = HashMap::new();
    let mut fiber = Vec::with_capacity(group.len());
    for c in &classified {
        let next = fiber_of.len();
        fiber.push(*fiber_of.entry(c).or_insert(next));
    }
    let index: HashMap<&SignedPermutation, usize> = group.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let ops = operator_family(n);
    let m = fiber_of.len();
    let answers: Vec<Option<(Vec<_>, Vec<Option<usize>>)>> = group
        .par_iter()
        .enumerate()
        .map(|(i, w)| {
            if rs(w)?.left != classified[i].1 {
                return Ok(None);
            }
            let inv = w.inverse();
            let images = ops
                .iter()
                .map(|&op| Ok(defined_image(op, &inv)?.map(|x| fiber[index[&x.inverse()]])))
                .collect::<Result<Vec<_>, ClassifyError>>()?;
            Ok(Some((inv.tau_right(), images)))
        })
        .collect::<Result<_, ClassifyError>>()?;
    let mut rep: Vec<Option<(Vec<_>, Vec<Option<usize>>)>> = vec![None; m];
    let mut inconsistencies = Vec::new();
    for (i, a) in answers.into_iter().enumerate() {
        let Some(a) = a else { continue };
        match &rep[fiber[i]] {
            None => rep[fiber[i]] = Some(a),
            Some(r) if *r == a => {}
            Some(_) => inconsistencies.push(format!("{}: representatives disagree", group[i])),
        }
    }
    let rep: Vec<(Vec<_>, Vec<Option<usize>>)> = rep
        .into_iter()
        .map(|r| r.expect("every D-shaped tableau is a left tableau"))
        .collect();
    let mut key = relabel(rep.iter().map(|(tau, _)| tau.clone()).collect());
    for _ in 0..depth {
        key = relabel(
            rep.iter()
                .enumerate()
                .map(|(f, (_, imgs))| (key[f], imgs.iter().map(|x| x.map(|g| key[g])).collect::<Vec<_>>()))
                .collect(),
        );
    }
    let mut classes: Vec<Vec<SignedPermutation>> = vec![Vec::new(); key.iter().max().map_or(0, |k| k + 1)];
    for (i, w) in group.into_iter().enumerate() {
        classes[key[fiber[i]]].push(w);
    }
    classes.sort();
    Ok(VarietyTau {
        classes,
        fibers: m,
        inconsistencies,
    })
}

fn relabel<K: std::hash::Hash + Eq>(keys: Vec<K>) -> Vec<usize> {
    let mut ids: HashMap<K, usize> = HashMap::new();
    keys.into_iter()
        .map(|k| {
            let next = ids.len();
            *ids.entry(k).or_insert(next)
        })
        .collect()
}

/// One census line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusEntry {
    pub element: SignedPermutation,
    pub label: OrbitLabel,
    pub tableau: DominoTableau,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeCount {
    pub shape: Partition,
    pub classes: usize,
    pub tableaux: u64,
    /// Classes with numeral I and II (very even shapes only).
    pub numerals: Option<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Census {
    pub rank: usize,
    pub settings: Settings,
    pub entries: Vec<CensusEntry>,
    /// Fiber size per class, keyed by `(label, serialized tableau)`.
    pub fibers: BTreeMap<(OrbitLabel, String), usize>,
    pub expected_classes: u64,
    pub shapes: Vec<ShapeCount>,
    /// Elements whose final shape equals the D-collapse of their left shape.
    pub collapse_agreements: usize,
    pub failures: Vec<String>,
}

impl Census {
    pub fn class_count(&self) -> usize {
        self.fibers.len()
    }

    pub fn count_identity_holds(&self) -> bool {
        self.class_count() as u64 == self.expected_classes
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.count_identity_holds()
    }

    /// Tab-separated lines, one per element.
    pub fn tsv(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&format!("{}\t{}\t{}\n", e.element, e.label, e.tableau.serialize_inline()));
        }
        out
    }

    pub fn summary(&self) -> String {
        let mut out = format!(
            "# rank {}\n# settings {}\n# elements {}\n# classes {}\n# expected {}\n# collapse agreements {}/{}\n",
            self.rank,
            self.settings,
            self.entries.len(),
            self.class_count(),
            self.expected_classes,
            self.collapse_agreements,
            self.entries.len()
        );
        for s in &self.shapes {
            out.push_str(&format!("# shape ({}) classes {} tableaux {}", s.shape, s.classes, s.tableaux));
            if let Some((i, ii)) = s.numerals {
                out.push_str(&format!(" I {i} II {ii}"));
            }
            out.push('\n');
        }
        for f in &self.failures {
            out.push_str(&format!("# failure {f}\n"));
        }
        out
    }
}

/// Classifies all of `W'_n` and checks the counting identity. Work is spread
/// over the current rayon pool; results are in group order.
pub fn cell_census(n: usize, settings: &Settings) -> Result<Census, ClassifyError> {
    let group = enumerate_group(n)?;
    let results: Vec<(SignedPermutation, Result<(OrbitLabel, DominoTableau, bool), ClassifyError>)> = group
        .into_par_iter()
        .map(|w| {
            let r = (|| {
                let left = rs(&w)?.left;
                let (t, trace) = normalize_with(&left, settings)?;
                if !trace.is_strictly_decreasing() {
                    return Err(ClassifyError::Stuck {
                        shape: left.shape_unchecked(),
                        tableau: "trace not strictly decreasing".into(),
                    });
                }
                let agrees = left.shape_unchecked().collapse_d()? == t.shape_unchecked();
                Ok((orbit_label(&t)?, t, agrees))
            })();
            (w, r)
        })
        .collect();
    let mut entries = Vec::with_capacity(results.len());
    let mut failures = Vec::new();
    let mut fibers = BTreeMap::new();
    let mut collapse_agreements = 0;
    for (w, r) in results {
        match r {
            Ok((label, tableau, agrees)) => {
                collapse_agreements += usize::from(agrees);
                *fibers.entry((label.clone(), tableau.serialize_inline())).or_insert(0) += 1;
                entries.push(CensusEntry {
                    element: w,
                    label,
                    tableau,
                });
            }
            Err(e) => failures.push(format!("{w}: {e}")),
        }
    }
    let qs = d_partitions_of(2 * n as u32);
    let expected_classes = qs.iter().map(count_sdt).sum();
    let shapes = qs
        .into_iter()
        .map(|q| {
            let of_shape: Vec<&OrbitLabel> = fibers.keys().map(|(l, _)| l).filter(|l| l.partition == q).collect();
            let numerals = q.is_very_even().then(|| {
                let i = of_shape.iter().filter(|l| l.numeral == Some(Numeral::I)).count();
                (i, of_shape.len() - i)
            });
            ShapeCount {
                tableaux: count_sdt(&q),
                classes: of_shape.len(),
                numerals,
                shape: q,
            }
        })
        .collect();
    Ok(Census {
        rank: n,
        settings: *settings,
        entries,
        fibers,
        expected_classes,
        shapes,
        collapse_agreements,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tableaux::{enumerate_all_sdt, enumerate_sdt, Domino};

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn tab(ds: &[Domino]) -> DominoTableau {
        DominoTableau::standard(ds.to_vec()).unwrap()
    }

    #[test]
    fn d_shapes_are_fixed() {
        let t = tab(&[Domino::vertical(1, 1), Domino::horizontal(1, 2)]);
        let (out, trace) = normalize(&t).unwrap();
        assert_eq!(out, t);
        assert!(trace.steps.is_empty());
    }

    #[test]
    fn row_goes_to_three_one() {
        let t = tab(&[Domino::horizontal(1, 1), Domino::horizontal(1, 3)]);
        let (out, trace) = normalize(&t).unwrap();
        assert_eq!(out.shape().unwrap(), p("3,1"));
        assert_eq!(trace.steps.len(), 1);
    }

    #[test]
    fn hook_two_one_one() {
        let t = tab(&[Domino::horizontal(1, 1), Domino::vertical(2, 1)]);
        let (out, _) = normalize(&t).unwrap();
        assert_eq!(out, tab(&[Domino::vertical(1, 1), Domino::vertical(3, 1)]));
    }

    #[test]
    fn labels() {
        let flat = tab(&[Domino::horizontal(1, 1), Domino::horizontal(2, 1)]);
        let tall = tab(&[Domino::vertical(1, 1), Domino::vertical(1, 2)]);
        assert_eq!(orbit_label(&flat).unwrap().to_string(), "(2,2) I");
        assert_eq!(orbit_label(&tall).unwrap().to_string(), "(2,2) II");
        let t = tab(&[Domino::vertical(1, 1), Domino::horizontal(1, 2)]);
        assert_eq!(orbit_label(&t).unwrap().to_string(), "(3,1)");
        let row = tab(&[Domino::horizontal(1, 1), Domino::horizontal(1, 3)]);
        assert!(orbit_label(&row).is_err());
    }

    #[test]
    fn small_classifications() {
        let (l, t) = classify(&SignedPermutation::identity(2)).unwrap();
        assert_eq!(l.to_string(), "(3,1)");
        assert_eq!(t.shape().unwrap(), p("3,1"));
        let (l, t) = classify(&"-2,-1".parse().unwrap()).unwrap();
        assert_eq!(l.to_string(), "(2,2) II");
        assert_eq!(t.vertical_count(), 2);
    }

    #[test]
    fn rank_two_census() {
        let c = cell_census(2, &Settings::default()).unwrap();
        assert!(c.passed(), "{}", c.summary());
        assert_eq!(c.class_count(), 4);
        assert_eq!(c.fibers.values().sum::<usize>(), 8);
    }

    #[test]
    fn very_even_parity() {
        for n in 1..=5u32 {
            for q in d_partitions_of(2 * n).into_iter().filter(Partition::is_very_even) {
                for t in enumerate_sdt(&q) {
                    assert_eq!(t.vertical_count() % 2, 0);
                }
            }
        }
    }

    #[test]
    fn normalize_fixes_exactly_d_shapes() {
        for n in 1..=4 {
            for t in enumerate_all_sdt(n) {
                let (out, trace) = normalize(&t).unwrap();
                assert!(trace.is_strictly_decreasing());
                assert_eq!(out == t, t.shape().unwrap().is_d_partition());
                orbit_label(&out).unwrap();
            }
        }
    }

    #[test]
    fn special_normalize_is_idempotent() {
        for n in 1..=3 {
            for t in enumerate_all_sdt(n) {
                let once = special_normalize(&t).unwrap().tableau;
                assert!(once.shape().unwrap().is_special().unwrap());
                assert_eq!(special_normalize(&once).unwrap().tableau, once);
            }
        }
    }

    #[test]
    fn variety_tau_rank_two() {
        let vt = variety_tau_classes(2, 3, &Settings::default()).unwrap();
        assert_eq!(vt.classes.len(), 4);
        assert!(vt.separates_fibers());
        assert!(vt.inconsistencies.is_empty());
    }

    #[test]
    fn settings_parse() {
        for pol in RowPolicy::ALL {
            assert_eq!(pol.to_string().parse::<RowPolicy>().unwrap(), pol);
        }
        assert_eq!("swapped".parse::<Naming>().unwrap(), Naming::Swapped);
        assert!("sideways".parse::<Naming>().is_err());
    }
}
