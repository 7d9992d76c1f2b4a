//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Counts that the library derives are compared against small oracles
//! defined here (domino tableau counts by corner removal, partitions of n,
//! the D-partition predicate). Set `ACCEPTANCE_RANK_SIX=1` to also sweep
//! operator cell preservation at rank 6.

use std::collections::HashMap;
use std::process::ExitCode;

use domino_orbits::classify::{cell_census, Settings};
use domino_orbits::verify::{self, CriterionReport, VerifyConfig};
use domino_orbits::weyl::enumerate_group;
use domino_orbits::{rs, Partition};

fn oracle_partitions(n: u32, max: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=n.min(max)).rev() {
        for mut rest in oracle_partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn oracle_is_d(p: &[u32]) -> bool {
    p.iter()
        .filter(|&&x| x % 2 == 0)
        .all(|&x| p.iter().filter(|&&y| y == x).count() % 2 == 0)
}

/// Standard domino tableaux of shape `p`, counted by removing the largest domino.
fn oracle_count(p: &[u32], memo: &mut HashMap<Vec<u32>, u64>) -> u64 {
    let p: Vec<u32> = p.iter().copied().filter(|&x| x > 0).collect();
    if p.is_empty() {
        return 1;
    }
    if let Some(&c) = memo.get(&p) {
        return c;
    }
    let row = |i: usize| p.get(i).copied().unwrap_or(0);
    let mut total = 0;
    for i in 0..p.len() {
        if row(i) >= 2 && row(i) - 2 >= row(i + 1) {
            let mut q = p.clone();
            q[i] -= 2;
            total += oracle_count(&q, memo);
        }
        if row(i) == row(i + 1) && row(i + 1) > row(i + 2) {
            let mut q = p.clone();
            q[i] -= 1;
            q[i + 1] -= 1;
            total += oracle_count(&q, memo);
        }
    }
    memo.insert(p, total);
    total
}

fn with_oracles(mut r: CriterionReport, check: impl FnOnce() -> Result<String, String>) -> CriterionReport {
    match check() {
        Ok(note) => r.detail = format!("{}; oracle: {note}", r.detail),
        Err(e) => {
            r.passed = false;
            r.detail = format!("{}; oracle mismatch: {e}", r.detail);
        }
    }
    r
}

fn oracle_rs(max_rank: usize) -> Result<String, String> {
    let mut memo = HashMap::new();
    for n in 1..=max_rank {
        let order: u64 = (1u64 << n) * (1..=n as u64).product::<u64>();
        let squares: u64 = oracle_partitions(2 * n as u32, 2 * n as u32)
            .iter()
            .map(|p| oracle_count(p, &mut memo).pow(2))
            .sum();
        if squares != order {
            return Err(format!("n={n}: {squares} ≠ {order}"));
        }
        // every tableau pair shape produced by rs is a common shape, and the count
        // of elements per shape is f(shape)^2
        let mut per_shape: HashMap<Vec<u32>, u64> = HashMap::new();
        for w in enumerate_group(n).map_err(|e| e.to_string())? {
            let pair = rs(&w).map_err(|e| e.to_string())?;
            *per_shape.entry(pair.left.shape_unchecked().parts().to_vec()).or_default() += 1;
        }
        for (shape, count) in per_shape {
            let f = oracle_count(&shape, &mut memo);
            if count != f * f {
                return Err(format!("n={n}: shape {shape:?} has {count} elements, expected {}", f * f));
            }
        }
    }
    Ok(format!("per-shape counts f(λ)² for n ≤ {max_rank}"))
}

fn oracle_census(settings: &Settings, ranks: &[usize]) -> Result<String, String> {
    let mut memo = HashMap::new();
    let mut seen = Vec::new();
    for &n in ranks {
        let expected: u64 = oracle_partitions(2 * n as u32, 2 * n as u32)
            .iter()
            .filter(|p| oracle_is_d(p))
            .map(|p| oracle_count(p, &mut memo))
            .sum();
        let c = cell_census(n, settings).map_err(|e| e.to_string())?;
        if c.class_count() as u64 != expected {
            return Err(format!("n={n}: {} classes, oracle {expected}", c.class_count()));
        }
        for s in &c.shapes {
            let f = oracle_count(s.shape.parts(), &mut memo);
            if s.tableaux != f || s.classes as u64 != f {
                return Err(format!("n={n}: shape ({}) {} classes, oracle {f}", s.shape, s.classes));
            }
        }
        let non_d = c
            .entries
            .iter()
            .find(|e| !oracle_is_d(e.label.partition.parts()));
        if let Some(e) = non_d {
            return Err(format!("{} labelled by non-D shape ({})", e.element, e.label.partition));
        }
        seen.push(format!("n={n}: {expected}"));
    }
    if ranks.contains(&2) && !seen.iter().any(|s| s == "n=2: 4") {
        return Err("rank 2 must have four classes".into());
    }
    Ok(seen.join(", "))
}

fn oracle_d_partitions() -> Result<String, String> {
    for size in (0..=16u32).step_by(2) {
        let ours: Vec<Vec<u32>> = oracle_partitions(size, size).into_iter().filter(|p| oracle_is_d(p)).collect();
        let lib: Vec<Vec<u32>> = domino_orbits::partitions::d_partitions_of(size)
            .iter()
            .map(|p: &Partition| p.parts().to_vec())
            .collect();
        let (mut a, mut b) = (ours, lib);
        a.sort();
        b.sort();
        if a != b {
            return Err(format!("D-partitions of {size} differ"));
        }
    }
    Ok("D-partition lists match to size 16".into())
}

fn main() -> ExitCode {
    let settings = match Settings::from_env() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("bad settings: {e}");
            return ExitCode::FAILURE;
        }
    };
    let rank_six = std::env::var("ACCEPTANCE_RANK_SIX").is_ok_and(|v| v == "1");
    let config = VerifyConfig { settings, rank_six };
    println!("acceptance ({settings})");
    let mut failed = 0;
    for id in verify::CRITERIA {
        let r = verify::criterion(id, &config);
        let r = match id {
            1 => with_oracles(r, || oracle_rs(5)),
            5 => with_oracles(r, || oracle_census(&settings, &[2, 3, 4])),
            9 => with_oracles(r, oracle_d_partitions),
            _ => r,
        };
        failed += usize::from(!r.passed);
        println!("{r}");
    }
    println!("{} passed, {failed} failed", verify::CRITERIA.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
