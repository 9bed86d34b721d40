//! Search on top of the stability constraint: complete enumeration and
//! sex-equal optimization.
//!
//! Both searches post the constraint in both directions and branch on the
//! first man whose rank variable is still undecided, trying his best
//! remaining partner first (left: assign the minimum, right: remove it).
//! With both directions propagating, every node's domains still contain a
//! stable matching, so enumeration never hits a dead end; the statistics
//! report the fail count so callers can check that.
//!
//! The sex-equal solver minimizes the absolute difference between the two
//! sides' summed scores by branch and bound: each improving solution
//! tightens a global incumbent, and nodes are pruned when an interval bound
//! over the two sums proves they cannot beat it. Scores must grow strictly
//! along each preference list, so per-variable score bounds follow directly
//! from the rank bounds. Ties are broken by search order: the first matching
//! found with the optimal objective is returned.

use crate::constraint::{Orientation, StabilityConstraint};
use crate::instance::{Instance, Side};
use crate::kernel::Solver;
use crate::matching::Matching;
use std::rc::Rc;
use thiserror::Error;

/// Counters reported by every search.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Nodes visited, the root included.
    pub nodes: u64,
    /// Propagation wipeouts encountered during the search.
    pub fails: u64,
}

/// All stable matchings, in lexicographic order by the men's partners,
/// together with search statistics.
pub fn enumerate_all(inst: &Instance) -> (Vec<Matching>, SearchStats) {
    let mut stats = SearchStats::default();
    let mut found = Vec::new();
    let mut s = Solver::new();
    let posted = StabilityConstraint::post(&mut s, Rc::new(inst.clone()), Orientation::Full);
    match posted {
        Ok(c) if s.fixpoint().is_ok() => {
            enumerate_node(&mut s, &c, &mut found, &mut stats);
        }
        _ => stats.fails += 1,
    }
    found.sort();
    (found, stats)
}

fn enumerate_node(
    s: &mut Solver,
    c: &StabilityConstraint,
    found: &mut Vec<Matching>,
    stats: &mut SearchStats,
) {
    stats.nodes += 1;
    match first_unfixed_man(s, c) {
        None => found.push(leaf_matching(s, c)),
        Some(var) => {
            let best = s.min(var);
            for keep in [true, false] {
                s.push_state();
                let moved = if keep { s.set_val(var, best) } else { s.rem_val(var, best) };
                if moved.and_then(|()| s.fixpoint()).is_ok() {
                    enumerate_node(s, c, found, stats);
                } else {
                    stats.fails += 1;
                }
                s.pop_state();
            }
        }
    }
}

fn first_unfixed_man(s: &Solver, c: &StabilityConstraint) -> Option<crate::kernel::VarId> {
    (1..=c.instance().n() as u32)
        .map(|i| c.man_var(i))
        .find(|&v| !s.is_fixed(v))
}

fn leaf_matching(s: &Solver, c: &StabilityConstraint) -> Matching {
    let ranks: Vec<u32> = (1..=c.instance().n() as u32)
        .map(|i| s.min(c.man_var(i)))
        .collect();
    Matching::from_man_ranks(c.instance(), &ranks)
        .expect("a drained fixpoint cannot leave two men on one woman")
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScoreError {
    #[error("weighted scores need complete preference lists; staying single has no score")]
    IncompleteInstance,
    #[error("score row for {} {person} has {found} entries, expected {expected}", side.label())]
    WrongShape {
        side: Side,
        person: u32,
        expected: usize,
        found: usize,
    },
    #[error(
        "{} {person} prefers {} {better} (score {better_score}) over {} {worse} \
         (score {worse_score}), but scores must rise strictly down the list",
        side.label(), side.opposite().label(), side.opposite().label()
    )]
    NotIncreasing {
        side: Side,
        person: u32,
        better: u32,
        worse: u32,
        better_score: u64,
        worse_score: u64,
    },
}

/// Per-person partner scores, stored by rank so that a variable's score
/// bounds follow from its rank bounds.
///
/// Scores must be order-consistent: the better a person ranks a partner, the
/// lower the score. The unweighted tables score every partner by rank, which
/// satisfies that by construction; explicit tables are validated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoreTables {
    men_by_rank: Vec<Vec<u64>>,
    women_by_rank: Vec<Vec<u64>>,
}

impl ScoreTables {
    /// Rank-is-score tables; staying single costs its sentinel rank.
    pub fn unweighted(inst: &Instance) -> ScoreTables {
        let l = inst.list_len();
        let row: Vec<u64> = (1..=l as u64).collect();
        ScoreTables {
            men_by_rank: vec![row.clone(); inst.n()],
            women_by_rank: vec![row; inst.n()],
        }
    }

    /// Builds tables from explicit partner-indexed score matrices:
    /// `men_scores[i-1][j-1]` is man `i`'s score for woman `j`. Rejects
    /// incomplete instances and rows that do not rise strictly in
    /// preference order.
    pub fn weighted(
        inst: &Instance,
        men_scores: &[Vec<u64>],
        women_scores: &[Vec<u64>],
    ) -> Result<ScoreTables, ScoreError> {
        if inst.is_smi() {
            return Err(ScoreError::IncompleteInstance);
        }
        let by_rank = |side: Side, scores: &[Vec<u64>]| {
            if scores.len() != inst.n() {
                return Err(ScoreError::WrongShape {
                    side,
                    person: 0,
                    expected: inst.n(),
                    found: scores.len(),
                });
            }
            let mut rows = Vec::with_capacity(inst.n());
            for (idx, row) in scores.iter().enumerate() {
                let person = idx as u32 + 1;
                if row.len() != inst.n() {
                    return Err(ScoreError::WrongShape {
                        side,
                        person,
                        expected: inst.n(),
                        found: row.len(),
                    });
                }
                let ranked: Vec<u64> = (1..=inst.n() as u32)
                    .map(|a| row[inst.pref(side, person, a) as usize - 1])
                    .collect();
                for a in 1..ranked.len() {
                    if ranked[a] <= ranked[a - 1] {
                        return Err(ScoreError::NotIncreasing {
                            side,
                            person,
                            better: inst.pref(side, person, a as u32),
                            worse: inst.pref(side, person, a as u32 + 1),
                            better_score: ranked[a - 1],
                            worse_score: ranked[a],
                        });
                    }
                }
                rows.push(ranked);
            }
            Ok(rows)
        };
        Ok(ScoreTables {
            men_by_rank: by_rank(Side::Men, men_scores)?,
            women_by_rank: by_rank(Side::Women, women_scores)?,
        })
    }

    pub fn score(&self, side: Side, person: u32, rank: u32) -> u64 {
        let rows = match side {
            Side::Men => &self.men_by_rank,
            Side::Women => &self.women_by_rank,
        };
        rows[person as usize - 1][rank as usize - 1]
    }

    /// One side's total score under `matching`.
    pub fn side_sum(&self, inst: &Instance, matching: &Matching, side: Side) -> u64 {
        (1..=inst.n() as u32)
            .map(|p| self.score(side, p, matching.rank(inst, side, p)))
            .sum()
    }

    /// The sex-equality measure of a matching: the absolute difference
    /// between the two sides' total scores.
    pub fn objective(&self, inst: &Instance, matching: &Matching) -> u64 {
        let m = self.side_sum(inst, matching, Side::Men);
        let w = self.side_sum(inst, matching, Side::Women);
        m.abs_diff(w)
    }
}

/// A stable matching minimizing the absolute score-sum difference, its
/// objective value, and search statistics. Among equally balanced matchings
/// the first one found is returned.
pub fn solve_sex_equal(
    inst: &Instance,
    scores: &ScoreTables,
) -> (Matching, u64, SearchStats) {
    let mut stats = SearchStats::default();
    let mut best: Option<(Matching, u64)> = None;
    let mut s = Solver::new();
    let posted = StabilityConstraint::post(&mut s, Rc::new(inst.clone()), Orientation::Full);
    match posted {
        Ok(c) if s.fixpoint().is_ok() => {
            branch_and_bound(&mut s, &c, scores, &mut best, &mut stats);
        }
        _ => stats.fails += 1,
    }
    let (matching, objective) =
        best.expect("every instance admits a stable matching");
    (matching, objective, stats)
}

fn branch_and_bound(
    s: &mut Solver,
    c: &StabilityConstraint,
    scores: &ScoreTables,
    best: &mut Option<(Matching, u64)>,
    stats: &mut SearchStats,
) {
    stats.nodes += 1;
    if let Some((_, incumbent)) = best {
        if balance_lower_bound(s, c, scores) >= *incumbent {
            return;
        }
    }
    match first_unfixed_man(s, c) {
        None => {
            let matching = leaf_matching(s, c);
            let objective = scores.objective(c.instance(), &matching);
            if best.as_ref().is_none_or(|&(_, d)| objective < d) {
                *best = Some((matching, objective));
            }
        }
        Some(var) => {
            let head = s.min(var);
            for keep in [true, false] {
                s.push_state();
                let moved = if keep { s.set_val(var, head) } else { s.rem_val(var, head) };
                if moved.and_then(|()| s.fixpoint()).is_ok() {
                    branch_and_bound(s, c, scores, best, stats);
                } else {
                    stats.fails += 1;
                }
                s.pop_state();
            }
        }
    }
}

/// Interval bound on the objective: each side's sum is bracketed by scoring
/// every variable's rank bounds (sound because scores rise with rank), and
/// the difference cannot shrink below the gap between the intervals.
fn balance_lower_bound(s: &Solver, c: &StabilityConstraint, scores: &ScoreTables) -> u64 {
    let mut sums = [(0u64, 0u64); 2];
    for (slot, side) in [Side::Men, Side::Women].into_iter().enumerate() {
        for p in 1..=c.instance().n() as u32 {
            let var = match side {
                Side::Men => c.man_var(p),
                Side::Women => c.woman_var(p),
            };
            sums[slot].0 += scores.score(side, p, s.min(var));
            sums[slot].1 += scores.score(side, p, s.max(var));
        }
    }
    let [(men_lo, men_hi), (women_lo, women_hi)] = sums;
    men_lo.saturating_sub(women_hi).max(women_lo.saturating_sub(men_hi))
}
