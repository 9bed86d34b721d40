//! Matchings and their rank profiles.

use crate::instance::{Instance, Side};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatchingError {
    #[error("expected {expected} partner entries, found {found}")]
    WrongLength { expected: usize, found: usize },
    #[error("man {man}: partner {partner} out of range")]
    OutOfRange { man: u32, partner: u32 },
    #[error("woman {woman} is matched to both man {first} and man {second}")]
    Bigamous { woman: u32, first: u32, second: u32 },
}

/// A (possibly partial) matching, stored from the men's side.
///
/// Ordering is lexicographic over the partner sequence with unmatched
/// sorting first, which is the canonical order used when listing solutions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Matching {
    partners: Vec<Option<u32>>,
}

impl Matching {
    /// `partners[i]` is the woman matched to man `i+1`, or `None` for single.
    /// Rejects out-of-range partners and women matched twice.
    pub fn new(n: usize, partners: Vec<Option<u32>>) -> Result<Matching, MatchingError> {
        if partners.len() != n {
            return Err(MatchingError::WrongLength {
                expected: n,
                found: partners.len(),
            });
        }
        let mut taken: Vec<Option<u32>> = vec![None; n];
        for (idx, &p) in partners.iter().enumerate() {
            let man = idx as u32 + 1;
            if let Some(w) = p {
                if w == 0 || w > n as u32 {
                    return Err(MatchingError::OutOfRange { man, partner: w });
                }
                if let Some(first) = taken[w as usize - 1] {
                    return Err(MatchingError::Bigamous {
                        woman: w,
                        first,
                        second: man,
                    });
                }
                taken[w as usize - 1] = Some(man);
            }
        }
        Ok(Matching { partners })
    }

    /// Builds a matching from each man's assigned preference rank, where the
    /// stay-single rank of an incomplete instance means unmatched.
    pub fn from_man_ranks(inst: &Instance, ranks: &[u32]) -> Result<Matching, MatchingError> {
        let partners = ranks
            .iter()
            .enumerate()
            .map(|(idx, &rank)| {
                let woman = inst.pref(Side::Men, idx as u32 + 1, rank);
                (woman != inst.stay_single()).then_some(woman)
            })
            .collect();
        Matching::new(inst.n(), partners)
    }

    pub fn n(&self) -> usize {
        self.partners.len()
    }

    pub fn partner_of_man(&self, man: u32) -> Option<u32> {
        self.partners[man as usize - 1]
    }

    pub fn partner_of_woman(&self, woman: u32) -> Option<u32> {
        self.partners
            .iter()
            .position(|&p| p == Some(woman))
            .map(|idx| idx as u32 + 1)
    }

    /// Matched couples as `(man, woman)`, in man order.
    pub fn pairs(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.partners
            .iter()
            .enumerate()
            .filter_map(|(idx, &p)| p.map(|w| (idx as u32 + 1, w)))
    }

    /// Rank `person` gives their partner; the stay-single rank when single.
    pub fn rank(&self, inst: &Instance, side: Side, person: u32) -> u32 {
        let partner = match side {
            Side::Men => self.partner_of_man(person),
            Side::Women => self.partner_of_woman(person),
        };
        match partner {
            Some(p) => inst.rank_of(side, person, p),
            None => inst.single_rank(side, person),
        }
    }

    /// Sum of partner ranks over one side, the unweighted happiness measure
    /// (lower is better).
    pub fn rank_sum(&self, inst: &Instance, side: Side) -> u64 {
        (1..=self.n() as u32)
            .map(|p| self.rank(inst, side, p) as u64)
            .sum()
    }
}
