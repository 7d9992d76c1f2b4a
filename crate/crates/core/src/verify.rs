//! Exhaustive small-rank verification, one check per acceptance criterion.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::{
    cell_census, classify_with, explore_normalizations, normalize_with, special_normalize_with, variety_tau_classes,
    Numeral, OrbitLabel, Settings,
};
use crate::cycles::{cycles, move_through, Convention};
use crate::garfinkle_rs::{rs, rs_inverse};
use crate::operators::{apply, operator_family, t_ab_shape_effect, OperatorError, OperatorId};
use crate::partitions::{d_partitions_of, partitions_of};
use crate::tableaux::{count_sdt, enumerate_all_sdt, enumerate_sdt, DominoTableau};
use crate::weyl::{adjacent_pairs, enumerate_group, SignedPermutation, SimpleRoot};

pub const CRITERIA: [u32; 10] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub id: u32,
    pub title: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{mark}] {:>2} {}: {}", self.id, self.title, self.detail)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub settings: Settings,
    pub criteria: Vec<CriterionReport>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "settings: {}", self.settings)?;
        for c in &self.criteria {
            writeln!(f, "{c}")?;
        }
        let failed = self.criteria.iter().filter(|c| !c.passed).count();
        write!(f, "{} passed, {failed} failed", self.criteria.len() - failed)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub settings: Settings,
    /// Repeat the cell-preservation sweep at rank 6 (slow).
    pub rank_six: bool,
}

pub fn run(config: &VerifyConfig) -> Report {
    Report {
        settings: config.settings,
        criteria: CRITERIA.iter().map(|&id| criterion(id, config)).collect(),
    }
}

pub fn title(id: u32) -> &'static str {
    match id {
        1 => "rs bijection",
        2 => "inverse symmetry",
        3 => "rs_inverse after rs",
        4 => "cycle laws",
        5 => "classification census",
        6 => "operator cell preservation",
        7 => "T_ab shape behaviour",
        8 => "generalized tau separation",
        9 => "specialness",
        10 => "normalization confluence",
        _ => "unknown",
    }
}

/// Runs one criterion; internal errors count as failures.
pub fn criterion(id: u32, config: &VerifyConfig) -> CriterionReport {
    let s = &config.settings;
    let outcome = match id {
        1 => rs_bijection(5),
        2 => inverse_symmetry(5),
        3 => rs_round_trip(4),
        4 => cycle_laws(4),
        5 => census(&[2, 3, 4], s),
        6 => {
            let ranks: &[usize] = if config.rank_six { &[4, 6] } else { &[4] };
            cell_preservation(ranks, s)
        }
        7 => t_ab_shapes(4),
        8 => tau_separation(&[2, 3], 3, s),
        9 => specialness(16, 3, s),
        10 => confluence(3, s),
        _ => Err(format!("no criterion {id}")),
    };
    let (passed, detail) = match outcome {
        Ok(o) => o,
        Err(e) => (false, format!("error: {e}")),
    };
    CriterionReport {
        id,
        title: title(id).to_string(),
        passed,
        detail,
    }
}

type Outcome = Result<(bool, String), String>;

fn err<E: fmt::Display>(e: E) -> String {
    e.to_string()
}

fn group(n: usize) -> Result<Vec<SignedPermutation>, String> {
    enumerate_group(n).map_err(err)
}

fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

pub fn rs_bijection(max_rank: usize) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for n in 1..=max_rank {
        let g = group(n)?;
        let pairs: Vec<_> = g.par_iter().map(rs).collect::<Result<_, _>>().map_err(err)?;
        let distinct = pairs.iter().collect::<HashSet<_>>().len();
        let squares: u64 = partitions_of(2 * n as u32).iter().map(|p| count_sdt(p).pow(2)).sum();
        let order = (1u64 << n) * factorial(n as u64);
        ok &= distinct == g.len() && squares == order;
        parts.push(format!("n={n}: {distinct}/{} distinct, sum of squares {squares}", g.len()));
    }
    Ok((ok, parts.join("; ")))
}

pub fn inverse_symmetry(max_rank: usize) -> Outcome {
    let mut bad = Vec::new();
    let mut total = 0;
    for n in 1..=max_rank {
        let g = group(n)?;
        total += g.len();
        let fails: Vec<String> = g
            .par_iter()
            .filter_map(|w| match (rs(w), rs(&w.inverse())) {
                (Ok(a), Ok(b)) if b == a.swapped() => None,
                _ => Some(w.to_string()),
            })
            .collect();
        bad.extend(fails);
    }
    Ok((bad.is_empty(), summary(total, &bad)))
}

pub fn rs_round_trip(max_rank: usize) -> Outcome {
    let mut bad = Vec::new();
    let mut total = 0;
    for n in 1..=max_rank {
        let g = group(n)?;
        total += g.len();
        bad.extend(g.iter().filter_map(|w| {
            let back = rs(w).ok().and_then(|p| rs_inverse(&p).ok());
            (back.as_ref() != Some(w)).then(|| w.to_string())
        }));
    }
    Ok((bad.is_empty(), summary(total, &bad)))
}

fn summary(total: usize, bad: &[String]) -> String {
    if bad.is_empty() {
        format!("{total} elements checked")
    } else {
        format!("{} of {total} fail, first: {}", bad.len(), bad[0])
    }
}

fn check_cycle_laws(t: &DominoTableau, conv: Convention) -> Result<(usize, usize), String> {
    let n = t.rank();
    let cs = cycles(t, conv).map_err(err)?;
    let mut labels: Vec<usize> = cs.iter().flat_map(|c| c.labels.iter().copied()).collect();
    labels.sort();
    if labels != (1..=n).collect::<Vec<_>>() {
        return Err(format!("cycles do not partition the labels of\n{}", t.render_grid()));
    }
    let shape = t.shape_unchecked();
    let (mut moves, mut anchored) = (0, 0);
    for c in &cs {
        if c.is_anchored() {
            anchored += 1;
            if conv != Convention::C || !c.contains(1) {
                return Err(format!("unexpected anchored cycle {:?}", c.labels));
            }
            continue;
        }
        let moved = move_through(t, c).map_err(err)?;
        let back = cycles(&moved, conv)
            .map_err(err)?
            .into_iter()
            .find(|d| d.contains(c.min_label()))
            .ok_or("cycle vanished")?;
        if back.labels != c.labels || move_through(&moved, &back).map_err(err)? != *t {
            return Err(format!("move through {:?} is not an involution on\n{}", c.labels, t.render_grid()));
        }
        let after = moved.shape_unchecked();
        let law = match (c.removed_square, c.added_square) {
            (Some(r), Some(a)) => {
                let removed = t.label_at(r).is_some() && moved.label_at(r).is_none();
                let added = t.label_at(a).is_none() && moved.label_at(a).is_some();
                removed && added && after == c.moved_shape(&shape)
            }
            _ => after == shape,
        };
        if !law {
            return Err(format!("shape law fails for {:?} on\n{}", c.labels, t.render_grid()));
        }
        moves += 1;
    }
    Ok((moves, anchored))
}

pub fn cycle_laws(max_rank: usize) -> Outcome {
    let (mut tableaux, mut moves, mut anchored) = (0, 0, 0);
    for n in 1..=max_rank {
        for t in enumerate_all_sdt(n) {
            tableaux += 1;
            for conv in Convention::BOTH {
                let (m, a) = check_cycle_laws(&t, conv)?;
                moves += m;
                anchored += a;
            }
        }
    }
    Ok((
        true,
        format!("{tableaux} tableaux, {moves} moves checked, {anchored} anchored cycles (convention C, label 1) skipped"),
    ))
}

pub fn census(ranks: &[usize], settings: &Settings) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for &n in ranks {
        let c = cell_census(n, settings).map_err(err)?;
        let mut good = c.passed();
        good &= c.entries.iter().all(|e| e.tableau.shape_unchecked().is_d_partition());
        good &= c.shapes.iter().all(|s| s.classes as u64 == s.tableaux);
        for s in c.shapes.iter().filter(|s| s.numerals.is_some()) {
            let split = enumerate_sdt(&s.shape)
                .iter()
                .fold((0, 0), |(i, ii), t| if t.vertical_count() % 4 == 0 { (i + 1, ii) } else { (i, ii + 1) });
            good &= s.numerals == Some(split);
        }
        if n == 2 {
            good &= c.class_count() == 4;
        }
        ok &= good;
        parts.push(format!(
            "n={n}: {} classes (expected {}), {} failures, collapse agreement {}/{}",
            c.class_count(),
            c.expected_classes,
            c.failures.len(),
            c.collapse_agreements,
            c.entries.len()
        ));
        if let Some(f) = c.failures.first() {
            parts.push(format!("first failure {f}"));
        }
    }
    Ok((ok, parts.join("; ")))
}

fn op_group(op: OperatorId) -> String {
    match op {
        OperatorId::Tab(a, b) => format!("T[{a},{b}]"),
        other => other.to_string(),
    }
}

pub fn cell_preservation(ranks: &[usize], settings: &Settings) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for &n in ranks {
        let g = group(n)?;
        let class: HashMap<&SignedPermutation, (OrbitLabel, DominoTableau)> = g
            .par_iter()
            .map(|w| classify_with(w, settings).map(|c| (w, c)))
            .collect::<Result<_, _>>()
            .map_err(err)?;
        // per operator: (applied, violations, unimplemented)
        let per_w: Vec<Vec<(String, usize, usize, usize, Option<String>)>> = g
            .par_iter()
            .map(|w| {
                operator_family(n)
                    .into_iter()
                    .map(|op| match apply(op, w) {
                        Ok(x) => {
                            let same = class[&x] == class[w];
                            let note = (!same).then(|| format!("{op} at {w} -> {x}"));
                            (op_group(op), 1, usize::from(!same), 0, note)
                        }
                        Err(e) if e.is_domain() => (op_group(op), 0, 0, 0, None),
                        Err(OperatorError::UnimplementedCase { .. }) => (op_group(op), 0, 0, 1, None),
                        Err(e) => (op_group(op), 0, 1, 0, Some(format!("{op} at {w}: {e}"))),
                    })
                    .collect()
            })
            .collect();
        let mut stats: BTreeMap<String, (usize, usize, usize)> = BTreeMap::new();
        let mut first = None;
        for (name, a, v, u, note) in per_w.into_iter().flatten() {
            let e = stats.entry(name).or_default();
            e.0 += a;
            e.1 += v;
            e.2 += u;
            if first.is_none() {
                first = note;
            }
        }
        let violations: usize = stats.values().map(|s| s.1).sum();
        ok &= violations == 0;
        let body: Vec<String> = stats
            .iter()
            .map(|(k, (a, v, u))| {
                let extra = if *u > 0 { format!(", {u} unimplemented") } else { String::new() };
                format!("{k} {a} applied/{v} moved{extra}")
            })
            .collect();
        parts.push(format!("n={n}: {}", body.join(", ")));
        if let Some(f) = first {
            parts.push(format!("first violation {f}"));
        }
    }
    Ok((ok, parts.join("; ")))
}

pub fn t_ab_shapes(max_rank: usize) -> Outcome {
    let branch = |a: SimpleRoot, b: SimpleRoot| {
        let pair = [a, b];
        pair.contains(&SimpleRoot::Branch) && pair.contains(&SimpleRoot::Chain(2))
    };
    let (mut chain_checked, mut chain_changed, mut branch_checked, mut branch_changed) = (0, 0, 0, 0);
    let mut example = None;
    for n in 2..=max_rank {
        for w in group(n)? {
            for (a, b) in adjacent_pairs(n) {
                let (before, after) = match t_ab_shape_effect(&w, a, b) {
                    Ok(x) => x,
                    Err(e) if e.is_domain() => continue,
                    Err(e) => return Err(err(e)),
                };
                if branch(a, b) {
                    branch_checked += 1;
                    if before != after {
                        branch_changed += 1;
                        example.get_or_insert(format!("{w}: ({before}) -> ({after})"));
                    }
                } else {
                    chain_checked += 1;
                    chain_changed += usize::from(before != after);
                }
            }
        }
    }
    Ok((
        chain_changed == 0 && branch_changed > 0,
        format!(
            "non-branch {chain_checked} applications, {chain_changed} shape changes; branch {branch_checked} applications, {branch_changed} shape changes (e.g. {})",
            example.unwrap_or_else(|| "none".into())
        ),
    ))
}

pub fn tau_separation(ranks: &[usize], depth: usize, settings: &Settings) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for &n in ranks {
        let vt = variety_tau_classes(n, depth, settings).map_err(err)?;
        ok &= vt.separates_fibers() && vt.inconsistencies.is_empty();
        parts.push(format!(
            "n={n}: {} classes at depth {depth}, {} fibers, {} inconsistencies",
            vt.classes.len(),
            vt.fibers,
            vt.inconsistencies.len()
        ));
    }
    Ok((ok, parts.join("; ")))
}

pub fn specialness(max_size: u32, max_rank: usize, settings: &Settings) -> Outcome {
    let mut triples = 0;
    for size in (0..=max_size).step_by(2) {
        for q in d_partitions_of(size) {
            let d = q.duality_d().map_err(err)?;
            let ddd = d.duality_d().and_then(|x| x.duality_d()).map_err(err)?;
            if ddd != d {
                return Ok((false, format!("d∘d∘d ≠ d at ({q})")));
            }
            triples += 1;
        }
    }
    let (mut checked, mut unique) = (0, 0);
    for n in 1..=max_rank {
        for w in group(n)? {
            let right = rs(&w).map_err(err)?.right;
            let r = special_normalize_with(&right, settings).map_err(err)?;
            let special = r.tableau.shape_unchecked().is_special().unwrap_or(false);
            let again = special_normalize_with(&r.tableau, settings).map_err(err)?;
            if !special || again.tableau != r.tableau {
                return Ok((false, format!("special_normalize fails at {w}")));
            }
            checked += 1;
            unique += usize::from(r.is_unique());
        }
    }
    Ok((
        true,
        format!("d∘d∘d = d on {triples} D-partitions; {checked} right tableaux normalized, special and idempotent; unique special tableau in {unique}/{checked} move classes"),
    ))
}

pub fn confluence(max_rank: usize, settings: &Settings) -> Outcome {
    let mut checked = 0;
    for n in 1..=max_rank {
        for t in enumerate_all_sdt(n) {
            let ex = explore_normalizations(&t, settings).map_err(err)?;
            let chosen = normalize_with(&t, settings).map_err(err)?.0;
            if !ex.is_confluent() || !ex.finals.contains(&chosen) {
                let finals: Vec<String> = ex.finals.iter().map(|f| f.render_grid()).collect();
                return Ok((
                    false,
                    format!(
                        "counterexample\n{}\nreaches {} normal forms and {} dead ends:\n{}",
                        t.render_grid(),
                        ex.finals.len(),
                        ex.dead_ends.len(),
                        finals.join("\n--\n")
                    ),
                ));
            }
            checked += 1;
        }
    }
    Ok((true, format!("{checked} tableaux of rank ≤ {max_rank}, each with one normal form")))
}

/// Numeral split of very even classes by vertical count, as a sanity view.
pub fn numeral_of(t: &DominoTableau) -> Option<Numeral> {
    let p = t.shape_unchecked();
    p.is_very_even().then(|| if t.vertical_count() % 4 == 0 { Numeral::I } else { Numeral::II })
}
