//! Reference implementation of the extended Gale-Shapley algorithm.
//!
//! A proposal pass runs over doubly-linked preference lists: each free
//! proposer approaches the head of their list, displaces any worse fiancé,
//! and everyone the receiver likes less than the new fiancé is deleted from
//! her list (and she from theirs). Deletions are always paired, so list
//! membership stays symmetric. The result of the men's pass is the
//! men-oriented reduced lists; running the women's pass on top of those
//! yields the fully reduced lists, in which every person's list head is
//! their best stable partner and the tail their worst.

use crate::instance::{Instance, Side};

/// Reduced preference lists, one row per person, partners in preference
/// order. Empty rows mean the person is single in every stable matching.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GsLists {
    pub men: Vec<Vec<u32>>,
    pub women: Vec<Vec<u32>>,
}

impl GsLists {
    /// Plain-text rendering, one `person: partners...` line per person:
    ///
    /// ```text
    /// men:
    /// 1: 3 2
    /// women:
    /// 1:
    /// ```
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (label, rows) in [("men:", &self.men), ("women:", &self.women)] {
            out.push_str(label);
            out.push('\n');
            for (idx, row) in rows.iter().enumerate() {
                out.push_str(&(idx + 1).to_string());
                out.push(':');
                for p in row {
                    out.push(' ');
                    out.push_str(&p.to_string());
                }
                out.push('\n');
            }
        }
        out
    }
}

/// Reduced lists plus the number of proposals it took to produce them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub lists: GsLists,
    pub proposals: u64,
}

/// Men-oriented reduced lists (men propose).
pub fn male_reduction(inst: &Instance) -> Reduction {
    let mut men = LinkedLists::full(inst, Side::Men);
    let mut women = LinkedLists::full(inst, Side::Women);
    let proposals = propose_pass(inst, Side::Men, &mut men, &mut women);
    Reduction {
        lists: extract(inst, &men, &women),
        proposals,
    }
}

/// Women-oriented reduced lists (women propose).
pub fn female_reduction(inst: &Instance) -> Reduction {
    let mut men = LinkedLists::full(inst, Side::Men);
    let mut women = LinkedLists::full(inst, Side::Women);
    let proposals = propose_pass(inst, Side::Women, &mut women, &mut men);
    Reduction {
        lists: extract(inst, &men, &women),
        proposals,
    }
}

/// Fully reduced lists: the women's pass run on the men-oriented lists.
/// Proposal counts of the two passes are summed.
pub fn full_reduction(inst: &Instance) -> Reduction {
    let mut men = LinkedLists::full(inst, Side::Men);
    let mut women = LinkedLists::full(inst, Side::Women);
    let mut proposals = propose_pass(inst, Side::Men, &mut men, &mut women);
    proposals += propose_pass(inst, Side::Women, &mut women, &mut men);
    Reduction {
        lists: extract(inst, &men, &women),
        proposals,
    }
}

/// One side's current lists as chains over acceptable ranks. Rank 0 and
/// `len+1` are head/tail sentinels.
struct LinkedLists {
    next: Vec<Vec<u32>>,
    prev: Vec<Vec<u32>>,
    live: Vec<Vec<bool>>,
}

impl LinkedLists {
    fn full(inst: &Instance, side: Side) -> LinkedLists {
        let mut lists = LinkedLists {
            next: Vec::new(),
            prev: Vec::new(),
            live: Vec::new(),
        };
        for person in 1..=inst.n() as u32 {
            let len = inst.acceptable(side, person).len() as u32;
            // Positions 1..=len chained between sentinels 0 and len+1; both
            // arrays get a slot for each sentinel so unlinking stays branch
            // free.
            lists.next.push((1..=len + 1).chain([len + 1]).collect());
            lists.prev.push([0].into_iter().chain(0..=len).collect());
            lists.live.push(vec![true; len as usize + 2]);
        }
        lists
    }

    fn end(&self, idx: usize) -> u32 {
        self.next[idx].len() as u32 - 1
    }

    fn head(&self, person: u32) -> Option<u32> {
        let idx = person as usize - 1;
        let first = self.next[idx][0];
        (first != self.end(idx)).then_some(first)
    }

    fn tail(&self, person: u32) -> Option<u32> {
        let idx = person as usize - 1;
        let last = self.prev[idx][self.end(idx) as usize];
        (last != 0).then_some(last)
    }

    fn delete(&mut self, person: u32, rank: u32) {
        let idx = person as usize - 1;
        debug_assert!(self.live[idx][rank as usize], "paired deletions ran twice");
        self.live[idx][rank as usize] = false;
        let (p, n) = (self.prev[idx][rank as usize], self.next[idx][rank as usize]);
        self.next[idx][p as usize] = n;
        self.prev[idx][n as usize] = p;
    }

    fn ranks(&self, person: u32) -> Vec<u32> {
        let idx = person as usize - 1;
        let end = self.end(idx);
        let mut out = Vec::new();
        let mut r = self.next[idx][0];
        while r != end {
            out.push(r);
            r = self.next[idx][r as usize];
        }
        out
    }
}

/// Runs proposals from `proposer_side` until no proposer with a non-empty
/// list is free. Returns the proposal count.
fn propose_pass(
    inst: &Instance,
    proposer_side: Side,
    proposers: &mut LinkedLists,
    receivers: &mut LinkedLists,
) -> u64 {
    let receiver_side = proposer_side.opposite();
    let n = inst.n();
    let mut fiance: Vec<Option<u32>> = vec![None; n];
    let mut free: Vec<u32> = (1..=n as u32).rev().collect();
    let mut proposals = 0;
    while let Some(m) = free.pop() {
        let Some(head_rank) = proposers.head(m) else {
            // List exhausted: stays single.
            continue;
        };
        proposals += 1;
        let w = inst.pref(proposer_side, m, head_rank);
        if let Some(p) = fiance[w as usize - 1] {
            free.push(p);
        }
        fiance[w as usize - 1] = Some(m);
        let new_rank = inst.rank_of(receiver_side, w, m);
        while let Some(tail_rank) = receivers.tail(w) {
            if tail_rank <= new_rank {
                break;
            }
            let p = inst.pref(receiver_side, w, tail_rank);
            receivers.delete(w, tail_rank);
            proposers.delete(p, inst.rank_of(proposer_side, p, w));
        }
    }
    proposals
}

fn extract(inst: &Instance, men: &LinkedLists, women: &LinkedLists) -> GsLists {
    let rows = |side: Side, lists: &LinkedLists| {
        (1..=inst.n() as u32)
            .map(|person| {
                lists
                    .ranks(person)
                    .into_iter()
                    .map(|r| inst.pref(side, person, r))
                    .collect()
            })
            .collect()
    };
    GsLists {
        men: rows(Side::Men, men),
        women: rows(Side::Women, women),
    }
}
