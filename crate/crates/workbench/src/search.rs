//! Koch-variant search: substitute a candidate rooted chirotope for the
//! level-3 Koch chain, run the same alternating recursion on `P`, and rank
//! candidates by the size of the final level.

use std::fmt::Write as _;

use chiro_core::oracle::{brute_p, OracleConfig};
use chiro_core::poly::calc::{compose_p, count_weak_join, q_from_p};
use chiro_core::{BivarPoly, Chirotope, ComposeKind, Label, RootedChirotope};
use num_bigint::BigInt;
use rayon::prelude::*;

use crate::error::{Result, WorkbenchError};

/// The level the candidate stands in for.
pub const SEED_LEVEL: usize = 3;
pub const MAX_LEVELS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    /// Weak triangulations of the final level, from its two operands.
    Weak,
    /// Triangulations of the final level, from its full `P`.
    Count,
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub levels: usize,
    pub metric: Metric,
    pub oracle: OracleConfig,
}

#[derive(Clone, Debug)]
pub struct Candidate {
    pub record: usize,
    pub root: Label,
    pub rc: RootedChirotope,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScoredRow {
    pub record: usize,
    pub root: Label,
    pub score: BigInt,
}

/// Join on odd levels, meet on even ones.
pub fn level_kind(level: usize) -> ComposeKind {
    if level % 2 == 1 {
        ComposeKind::Join
    } else {
        ComposeKind::Meet
    }
}

/// One candidate per requested root, or per extreme element when `roots`
/// is `None`. Non-extreme requests come back as notes.
pub fn candidates(record: usize, chi: &Chirotope, roots: Option<&[Label]>) -> (Vec<Candidate>, Vec<String>) {
    let roots: Vec<Label> = match roots {
        Some(r) => r.to_vec(),
        None => chi.extreme_elements().into_iter().collect(),
    };
    let mut out = Vec::new();
    let mut notes = Vec::new();
    for root in roots {
        match RootedChirotope::new(chi.clone(), root) {
            Ok(rc) => out.push(Candidate { record, root, rc }),
            Err(e) => notes.push(format!("record {record}, root {root}: skipped ({e})")),
        }
    }
    (out, notes)
}

/// `P` of every level from the seed up to `upto`, starting at the seed.
pub fn level_polys(seed: BivarPoly, upto: usize) -> Result<Vec<BivarPoly>> {
    let mut ps = vec![seed];
    for level in SEED_LEVEL + 1..=upto {
        let prev = ps.last().expect("seed present");
        let next = compose_p(prev, prev, level_kind(level))?;
        ps.push(next);
    }
    Ok(ps)
}

pub fn score(seed: BivarPoly, cfg: &SearchConfig) -> Result<BigInt> {
    let l = cfg.levels;
    let before = level_polys(seed, l - 1)?.pop().expect("seed present");
    Ok(match cfg.metric {
        Metric::Weak => count_weak_join(&before, &before, level_kind(l))?,
        Metric::Count => q_from_p(&compose_p(&before, &before, level_kind(l))?)?.eval_at_one(),
    })
}

fn check_levels(levels: usize) -> Result<()> {
    if !(SEED_LEVEL + 1..=MAX_LEVELS).contains(&levels) {
        return Err(WorkbenchError::Usage(format!(
            "levels must lie in {}..={MAX_LEVELS}, got {levels}",
            SEED_LEVEL + 1
        )));
    }
    Ok(())
}

/// Scores all candidates in parallel and ranks them by score, highest
/// first, ties by (record, root).
pub fn search(cands: &[Candidate], cfg: &SearchConfig) -> Result<Vec<ScoredRow>> {
    check_levels(cfg.levels)?;
    let mut rows = cands
        .par_iter()
        .map(|c| {
            let seed = brute_p(&c.rc, &cfg.oracle)?;
            Ok(ScoredRow {
                record: c.record,
                root: c.root,
                score: score(seed, cfg)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| {
        b.score
            .cmp(&a.score)
            .then(a.record.cmp(&b.record))
            .then(a.root.cmp(&b.root))
    });
    Ok(rows)
}

pub fn to_csv(rows: &[ScoredRow], top: Option<usize>) -> String {
    let mut s = String::from("record,root,score\n");
    for r in rows.iter().take(top.unwrap_or(usize::MAX)) {
        writeln!(s, "{},{},{}", r.record, r.root, r.score).expect("writing to a String");
    }
    s
}
