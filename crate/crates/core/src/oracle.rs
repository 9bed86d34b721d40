//! Brute-force reference: stability checking and exhaustive enumeration.
//!
//! Everything here trades speed for obviousness so the propagation-based
//! solvers have something independent to be checked against. Enumeration
//! walks every assignment of partners to men (with a sound partial pruning
//! step) and is therefore capped at small sizes.

use crate::instance::{Instance, Side};
use crate::matching::Matching;
use thiserror::Error;

/// Largest instance size [`enumerate_stable`] accepts.
pub const SIZE_LIMIT: usize = 9;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance size {n} exceeds the brute-force limit {limit}")]
    TooLarge { n: usize, limit: usize },
}

/// Why a matching is not stable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Instability {
    /// The two strictly prefer each other to their assigned situations.
    BlockingPair { man: u32, woman: u32 },
    /// A matched couple where at least one finds the other unacceptable.
    UnacceptableCouple { man: u32, woman: u32 },
}

/// Returns the first instability in scan order, or `None` for stable.
pub fn instability(inst: &Instance, m: &Matching) -> Option<Instability> {
    let n = inst.n() as u32;
    for (man, woman) in m.pairs() {
        if inst.rank_of(Side::Men, man, woman) > inst.single_rank(Side::Men, man)
            || inst.rank_of(Side::Women, woman, man) > inst.single_rank(Side::Women, woman)
        {
            return Some(Instability::UnacceptableCouple { man, woman });
        }
    }
    for man in 1..=n {
        let man_rank = m.rank(inst, Side::Men, man);
        for woman in 1..=n {
            if inst.rank_of(Side::Men, man, woman) < man_rank
                && inst.rank_of(Side::Women, woman, man) < m.rank(inst, Side::Women, woman)
            {
                return Some(Instability::BlockingPair { man, woman });
            }
        }
    }
    None
}

pub fn is_stable(inst: &Instance, m: &Matching) -> bool {
    instability(inst, m).is_none()
}

/// All stable matchings of `inst`, in canonical order.
pub fn enumerate_stable(inst: &Instance) -> Result<Vec<Matching>, OracleError> {
    if inst.n() > SIZE_LIMIT {
        return Err(OracleError::TooLarge {
            n: inst.n(),
            limit: SIZE_LIMIT,
        });
    }
    let mut found = Vec::new();
    let mut partners: Vec<Option<u32>> = vec![None; inst.n()];
    let mut taken = vec![false; inst.n()];
    extend(inst, 1, &mut partners, &mut taken, &mut found);
    found.sort();
    Ok(found)
}

fn extend(
    inst: &Instance,
    man: u32,
    partners: &mut Vec<Option<u32>>,
    taken: &mut Vec<bool>,
    found: &mut Vec<Matching>,
) {
    let n = inst.n() as u32;
    if man > n {
        let m = Matching::new(inst.n(), partners.clone()).expect("construction keeps it valid");
        if is_stable(inst, &m) {
            found.push(m);
        }
        return;
    }
    let mut options: Vec<Option<u32>> = inst
        .acceptable(Side::Men, man)
        .iter()
        .filter(|&&w| !taken[w as usize - 1])
        .map(|&w| Some(w))
        .collect();
    if inst.is_smi() {
        options.push(None);
    }
    for choice in options {
        if blocked_among_assigned(inst, man, choice, partners) {
            continue;
        }
        partners[man as usize - 1] = choice;
        if let Some(w) = choice {
            taken[w as usize - 1] = true;
        }
        extend(inst, man + 1, partners, taken, found);
        if let Some(w) = choice {
            taken[w as usize - 1] = false;
        }
        partners[man as usize - 1] = None;
    }
}

/// Sound pruning: a blocking pair confined to already-assigned couples can
/// never be repaired by later assignments. Pairs involving a still-free
/// woman are left to the final check.
fn blocked_among_assigned(
    inst: &Instance,
    man: u32,
    choice: Option<u32>,
    partners: &[Option<u32>],
) -> bool {
    let my_rank = match choice {
        Some(w) => inst.rank_of(Side::Men, man, w),
        None => inst.single_rank(Side::Men, man),
    };
    for (idx, &other_choice) in partners.iter().enumerate().take(man as usize - 1) {
        let other = idx as u32 + 1;
        let other_rank = match other_choice {
            Some(w) => inst.rank_of(Side::Men, other, w),
            None => inst.single_rank(Side::Men, other),
        };
        if let Some(w) = other_choice {
            // Would (man, w) run off together?
            if inst.rank_of(Side::Men, man, w) < my_rank
                && inst.rank_of(Side::Women, w, man) < inst.rank_of(Side::Women, w, other)
            {
                return true;
            }
        }
        if let Some(w) = choice {
            // Would (other, w) run off together?
            if inst.rank_of(Side::Men, other, w) < other_rank
                && inst.rank_of(Side::Women, w, other) < inst.rank_of(Side::Women, w, man)
            {
                return true;
            }
        }
    }
    false
}
