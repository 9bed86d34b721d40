//! The n-ary stability constraint.
//!
//! One variable per person, whose values are preference ranks: `x[i] = a`
//! reads "man `i` marries the woman he ranks `a`-th" (symmetrically for
//! women), and on incomplete instances the stay-single rank means exactly
//! that. The constraint can propagate in one direction (men propose, women
//! veto), the mirror image, or both at once; its four methods per direction
//! are driven entirely by domain events:
//!
//! * min change on a proposer: propose to the new favourite, and every
//!   partner skipped since the last call must now do strictly better than
//!   the proposer (`propose`);
//! * max change on a receiver: suitors she no longer reaches lose her rank
//!   from their domains (`sweep_rejections`);
//! * instantiation of a proposer: his partner is bound to him, everyone he
//!   prefers must beat him, everyone else loses him (`assign`);
//! * interior removal on a proposer: the skipped partner loses him
//!   (`lose_interior`).
//!
//! Each direction keeps two reversible cursors so re-runs only touch what
//! moved: per proposer the lowest rank already swept (`swept_min`), per
//! receiver the highest rank already swept (`swept_max`). All methods are
//! idempotent, so the fixpoint is the same under any execution order. In a
//! single direction it equals the proposer-oriented reduced lists of the
//! extended Gale-Shapley algorithm; with both directions it equals the fully
//! reduced lists.

use crate::egs::GsLists;
use crate::instance::{Instance, Side};
use crate::kernel::{EventKind, Failure, Propagate, PropResult, RevInt, Slot, Solver, VarId};
use std::cell::Cell;
use std::rc::Rc;

/// Which side(s) propose during propagation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Male,
    Female,
    Full,
}

impl Orientation {
    fn proposes(self, side: Side) -> bool {
        match self {
            Orientation::Male => side == Side::Men,
            Orientation::Female => side == Side::Women,
            Orientation::Full => true,
        }
    }
}

// Method tags: a direction offset plus the method kind.
const PROPOSE: u32 = 0;
const SWEEP: u32 = 1;
const ASSIGN: u32 = 2;
const LOSE: u32 = 3;
const WOMEN_BASE: u32 = 4;

pub struct StabilityConstraint {
    inst: Rc<Instance>,
    men_vars: Vec<VarId>,
    women_vars: Vec<VarId>,
    men_swept_min: Vec<RevInt>,
    men_swept_max: Vec<RevInt>,
    women_swept_min: Vec<RevInt>,
    women_swept_max: Vec<RevInt>,
    proposals: Cell<u64>,
}

/// One propagation direction: proposers' tables and cursors on the left,
/// receivers' on the right.
struct Dir<'a> {
    rs: Side,
    p_vars: &'a [VarId],
    r_vars: &'a [VarId],
    swept_min: &'a [RevInt],
    swept_max: &'a [RevInt],
}

impl StabilityConstraint {
    /// Creates the 2n rank variables, registers both directions' watchers as
    /// `orientation` demands, and schedules the opening proposals. The
    /// caller runs [`Solver::fixpoint`] to actually propagate.
    pub fn post(
        s: &mut Solver,
        inst: Rc<Instance>,
        orientation: Orientation,
    ) -> Result<Rc<StabilityConstraint>, Failure> {
        let n = inst.n();
        let l = inst.list_len() as u32;
        let men_vars: Vec<VarId> = (0..n).map(|_| s.new_var(1, l)).collect();
        let women_vars: Vec<VarId> = (0..n).map(|_| s.new_var(1, l)).collect();
        let cursors = |s: &mut Solver, init: i64| -> Vec<RevInt> {
            (0..n).map(|_| s.new_rev_int(init)).collect()
        };
        let constraint = Rc::new(StabilityConstraint {
            men_swept_min: cursors(s, 1),
            men_swept_max: cursors(s, l as i64),
            women_swept_min: cursors(s, 1),
            women_swept_max: cursors(s, l as i64),
            inst: Rc::clone(&inst),
            men_vars,
            women_vars,
            proposals: Cell::new(0),
        });
        let prop = s.post(Rc::clone(&constraint) as Rc<dyn Propagate>);

        let mut opening: Vec<(Slot, usize)> = Vec::new();
        for ps in [Side::Men, Side::Women] {
            if !orientation.proposes(ps) {
                continue;
            }
            let base = if ps == Side::Men { 0 } else { WOMEN_BASE };
            let propose = s.new_slot(prop, base + PROPOSE, n as u32);
            let sweep = s.new_slot(prop, base + SWEEP, n as u32);
            let assign = s.new_slot(prop, base + ASSIGN, n as u32);
            let lose = s.new_slot(prop, base + LOSE, n as u32 * (l + 1));
            let (p_vars, r_vars) = match ps {
                Side::Men => (&constraint.men_vars, &constraint.women_vars),
                Side::Women => (&constraint.women_vars, &constraint.men_vars),
            };
            for (i, &v) in p_vars.iter().enumerate() {
                s.watch(v, EventKind::Min, propose, i as u32);
                s.watch(v, EventKind::Inst, assign, i as u32);
                s.watch(v, EventKind::Rem, lose, i as u32 * (l + 1));
            }
            for (j, &v) in r_vars.iter().enumerate() {
                s.watch(v, EventKind::Max, sweep, j as u32);
            }
            opening.push((propose, n));
        }

        if inst.is_smi() {
            // Nobody sits below their stay-single rank; unacceptable
            // partners disappear via the rejection sweeps this triggers.
            for (i, &v) in constraint.men_vars.iter().enumerate() {
                s.set_max(v, inst.single_rank(Side::Men, i as u32 + 1))?;
            }
            for (j, &v) in constraint.women_vars.iter().enumerate() {
                s.set_max(v, inst.single_rank(Side::Women, j as u32 + 1))?;
            }
        }
        for (slot, count) in opening {
            for i in 0..count {
                s.schedule(slot, i as u32);
            }
        }
        Ok(constraint)
    }

    pub fn man_var(&self, man: u32) -> VarId {
        self.men_vars[man as usize - 1]
    }

    pub fn woman_var(&self, woman: u32) -> VarId {
        self.women_vars[woman as usize - 1]
    }

    pub fn instance(&self) -> &Instance {
        &self.inst
    }

    /// Proposals made so far, summed over the active directions.
    pub fn proposal_count(&self) -> u64 {
        self.proposals.get()
    }

    /// The man currently engaged to `woman` under men-propose reduction: the
    /// worst man she can still reach. `None` when that is staying single.
    pub fn fiance(&self, s: &Solver, woman: u32) -> Option<u32> {
        let man = self.inst.pref(Side::Women, woman, s.max(self.woman_var(woman)));
        (man != self.inst.stay_single()).then_some(man)
    }

    /// Current domains as reduced preference lists (stay-single excluded).
    pub fn lists(&self, s: &Solver) -> GsLists {
        let rows = |side: Side, vars: &[VarId]| {
            vars.iter()
                .enumerate()
                .map(|(idx, &v)| {
                    let person = idx as u32 + 1;
                    let single = self.inst.single_rank(side, person);
                    s.domain_values(v)
                        .into_iter()
                        .filter(|&rank| rank < single)
                        .map(|rank| self.inst.pref(side, person, rank))
                        .collect()
                })
                .collect()
        };
        GsLists {
            men: rows(Side::Men, &self.men_vars),
            women: rows(Side::Women, &self.women_vars),
        }
    }

    fn dir(&self, ps: Side) -> Dir<'_> {
        match ps {
            Side::Men => Dir {
                rs: Side::Women,
                p_vars: &self.men_vars,
                r_vars: &self.women_vars,
                swept_min: &self.men_swept_min,
                swept_max: &self.women_swept_max,
            },
            Side::Women => Dir {
                rs: Side::Men,
                p_vars: &self.women_vars,
                r_vars: &self.men_vars,
                swept_min: &self.women_swept_min,
                swept_max: &self.men_swept_max,
            },
        }
    }

    /// Min change on proposer `i`: propose to the new favourite, and every
    /// partner lost from the head of the list since the last call must now
    /// take someone strictly better than `i`.
    fn propose(&self, s: &mut Solver, ps: Side, i: u32) -> PropResult {
        let d = self.dir(ps);
        let single = self.inst.stay_single();
        let a_min = s.min(d.p_vars[i as usize - 1]);
        let favourite = self.inst.pref(ps, i, a_min);
        if favourite != single {
            self.proposals.set(self.proposals.get() + 1);
            let rank = self.inst.rank_of(d.rs, favourite, i);
            s.set_max(d.r_vars[favourite as usize - 1], rank)?;
        }
        let from = s.rev_get(d.swept_min[i as usize - 1]) as u32;
        for a in from..a_min {
            let w = self.inst.pref(ps, i, a);
            if w == single {
                continue;
            }
            let rank = self.inst.rank_of(d.rs, w, i);
            // rank 1 caps her at 0: a genuine wipeout, she has nobody left.
            s.set_max(d.r_vars[w as usize - 1], rank - 1)?;
        }
        s.rev_set(d.swept_min[i as usize - 1], a_min as i64);
        Ok(())
    }

    /// Max change on receiver `j`: every suitor between the new and the
    /// previously swept bound loses her rank.
    fn sweep_rejections(&self, s: &mut Solver, ps: Side, j: u32) -> PropResult {
        let d = self.dir(ps);
        let single = self.inst.stay_single();
        let cur_max = s.max(d.r_vars[j as usize - 1]);
        let upto = s.rev_get(d.swept_max[j as usize - 1]) as u32;
        for b in cur_max + 1..=upto {
            let m = self.inst.pref(d.rs, j, b);
            if m == single {
                continue;
            }
            let rank = self.inst.rank_of(ps, m, j);
            s.rem_val(d.p_vars[m as usize - 1], rank)?;
        }
        s.rev_set(d.swept_max[j as usize - 1], cur_max as i64);
        Ok(())
    }

    /// Proposer `i` got instantiated: partners he prefers must beat him, his
    /// assigned partner is bound to him, all others lose him.
    fn assign(&self, s: &mut Solver, ps: Side, i: u32) -> PropResult {
        let d = self.dir(ps);
        let single = self.inst.stay_single();
        let x = d.p_vars[i as usize - 1];
        debug_assert!(s.is_fixed(x));
        let a = s.min(x);
        for k in 1..a {
            let w = self.inst.pref(ps, i, k);
            if w == single {
                continue;
            }
            let rank = self.inst.rank_of(d.rs, w, i);
            s.set_max(d.r_vars[w as usize - 1], rank - 1)?;
        }
        let partner = self.inst.pref(ps, i, a);
        if partner != single {
            let rank = self.inst.rank_of(d.rs, partner, i);
            s.set_val(d.r_vars[partner as usize - 1], rank)?;
        }
        for k in a + 1..=self.inst.list_len() as u32 {
            let w = self.inst.pref(ps, i, k);
            if w == single {
                continue;
            }
            let rank = self.inst.rank_of(d.rs, w, i);
            s.rem_val(d.r_vars[w as usize - 1], rank)?;
        }
        Ok(())
    }

    /// Proposer `i` lost the strictly interior rank `a`: the partner at that
    /// rank loses him.
    fn lose_interior(&self, s: &mut Solver, ps: Side, i: u32, a: u32) -> PropResult {
        let d = self.dir(ps);
        let w = self.inst.pref(ps, i, a);
        if w == self.inst.stay_single() {
            return Ok(());
        }
        let rank = self.inst.rank_of(d.rs, w, i);
        s.rem_val(d.r_vars[w as usize - 1], rank)
    }
}

impl Propagate for StabilityConstraint {
    fn run(&self, s: &mut Solver, method: u32, key: u32) -> PropResult {
        let stride = self.inst.list_len() as u32 + 1;
        let (side, method) = if method < WOMEN_BASE {
            (Side::Men, method)
        } else {
            (Side::Women, method - WOMEN_BASE)
        };
        match method {
            PROPOSE => self.propose(s, side, key + 1),
            SWEEP => self.sweep_rejections(s, side, key + 1),
            ASSIGN => self.assign(s, side, key + 1),
            LOSE => self.lose_interior(s, side, key / stride + 1, key % stride),
            _ => unreachable!("unknown propagation method tag"),
        }
    }
}

/// Posts the constraint on a fresh solver and propagates to the fixpoint.
pub fn reduce(
    inst: &Instance,
    orientation: Orientation,
) -> Result<(Solver, Rc<StabilityConstraint>), Failure> {
    reduce_ordered(inst, orientation, crate::kernel::QueueOrder::Lifo)
}

pub fn reduce_ordered(
    inst: &Instance,
    orientation: Orientation,
    order: crate::kernel::QueueOrder,
) -> Result<(Solver, Rc<StabilityConstraint>), Failure> {
    let mut s = Solver::with_queue_order(order);
    let c = StabilityConstraint::post(&mut s, Rc::new(inst.clone()), orientation)?;
    s.fixpoint()?;
    Ok((s, c))
}
