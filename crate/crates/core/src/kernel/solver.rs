//! The solver: variables, events, method slots, fixpoint, and state marks.

use super::domain::IntDomain;
use super::queue::{CallQueue, QueueOrder};
use super::trail::{Entry, Trail};
use super::{Failure, PropResult};
use std::rc::Rc;

/// A finite-domain integer variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VarId(usize);

/// A reversible integer: restored to its earlier value when a state mark is
/// popped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RevInt(usize);

/// A posted propagator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PropId(usize);

/// A registered (propagator, method) pair; the schedulable unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Slot(usize);

/// What happened to a domain. `Rem` fires only for strictly interior
/// removals; removals at a bound fire `Min`/`Max` instead, and a domain
/// shrinking to one value fires `Inst` on top of any bound event.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EventKind {
    Min,
    Max,
    Rem,
    Inst,
}

/// One fired event, as recorded by the optional log: the new bound for
/// `Min`/`Max`, the removed value for `Rem`, the remaining value for `Inst`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LoggedEvent {
    pub var: VarId,
    pub kind: EventKind,
    pub value: u32,
}

/// Constraint side of the kernel contract. `run` receives the solver, the
/// method tag passed at slot registration, and the scheduled key. For `Rem`
/// watchers the key is the watcher's base key plus the removed value.
pub trait Propagate {
    fn run(&self, solver: &mut Solver, method: u32, key: u32) -> PropResult;
}

#[derive(Clone, Copy)]
struct SlotInfo {
    prop: usize,
    method: u32,
}

#[derive(Default)]
struct Watchers {
    min: Vec<(usize, u32)>,
    max: Vec<(usize, u32)>,
    rem: Vec<(usize, u32)>,
    inst: Vec<(usize, u32)>,
}

pub struct Solver {
    doms: Vec<IntDomain>,
    watchers: Vec<Watchers>,
    queue: CallQueue,
    trail: Trail,
    props: Vec<Rc<dyn Propagate>>,
    slots: Vec<SlotInfo>,
    rev: Vec<i64>,
    removals: u64,
    event_log: Option<Vec<LoggedEvent>>,
}

impl Default for Solver {
    fn default() -> Solver {
        Solver::new()
    }
}

impl Solver {
    pub fn new() -> Solver {
        Solver::with_queue_order(QueueOrder::Lifo)
    }

    pub fn with_queue_order(order: QueueOrder) -> Solver {
        Solver {
            doms: Vec::new(),
            watchers: Vec::new(),
            queue: CallQueue::new(order),
            trail: Trail::default(),
            props: Vec::new(),
            slots: Vec::new(),
            rev: Vec::new(),
            removals: 0,
            event_log: None,
        }
    }

    pub fn new_var(&mut self, lo: u32, hi: u32) -> VarId {
        self.doms.push(IntDomain::new(lo, hi));
        self.watchers.push(Watchers::default());
        VarId(self.doms.len() - 1)
    }

    pub fn min(&self, v: VarId) -> u32 {
        self.doms[v.0].lo
    }

    pub fn max(&self, v: VarId) -> u32 {
        self.doms[v.0].hi
    }

    pub fn size(&self, v: VarId) -> u32 {
        self.doms[v.0].size
    }

    pub fn is_fixed(&self, v: VarId) -> bool {
        self.doms[v.0].size == 1
    }

    /// The assigned value of a fixed variable.
    pub fn value(&self, v: VarId) -> Option<u32> {
        let d = &self.doms[v.0];
        (d.size == 1).then_some(d.lo)
    }

    pub fn contains(&self, v: VarId, val: u32) -> bool {
        self.doms[v.0].contains(val)
    }

    pub fn domain_values(&self, v: VarId) -> Vec<u32> {
        self.doms[v.0].values()
    }

    /// Total values removed from all domains since construction. Monotonic;
    /// callers measure a phase by differencing.
    pub fn removal_count(&self) -> u64 {
        self.removals
    }

    /// Keeps every fired event from now on; [`take_event_log`] drains it.
    pub fn enable_event_log(&mut self) {
        self.event_log = Some(Vec::new());
    }

    pub fn take_event_log(&mut self) -> Vec<LoggedEvent> {
        self.event_log.take().unwrap_or_default()
    }

    pub fn post(&mut self, prop: Rc<dyn Propagate>) -> PropId {
        self.props.push(prop);
        PropId(self.props.len() - 1)
    }

    /// Registers a schedulable method of `prop` accepting keys in
    /// `0..key_space`.
    pub fn new_slot(&mut self, prop: PropId, method: u32, key_space: u32) -> Slot {
        let idx = self.queue.register_slot(key_space);
        debug_assert_eq!(idx, self.slots.len());
        self.slots.push(SlotInfo {
            prop: prop.0,
            method,
        });
        Slot(idx)
    }

    /// Schedules `slot` with `key` whenever `kind` fires on `v`. For
    /// [`EventKind::Rem`] the removed value is added to `key` at schedule
    /// time.
    pub fn watch(&mut self, v: VarId, kind: EventKind, slot: Slot, key: u32) {
        let w = &mut self.watchers[v.0];
        match kind {
            EventKind::Min => w.min.push((slot.0, key)),
            EventKind::Max => w.max.push((slot.0, key)),
            EventKind::Rem => w.rem.push((slot.0, key)),
            EventKind::Inst => w.inst.push((slot.0, key)),
        }
    }

    pub fn schedule(&mut self, slot: Slot, key: u32) {
        self.queue.schedule(slot.0, key);
    }

    /// Runs pending calls until none remain. On failure the queue is cleared
    /// and domains are left as the failed attempt made them; pop the
    /// enclosing state mark to recover.
    pub fn fixpoint(&mut self) -> PropResult {
        while let Some((slot, key)) = self.queue.pop() {
            let info = self.slots[slot];
            let prop = Rc::clone(&self.props[info.prop]);
            if let Err(f) = prop.run(self, info.method, key) {
                self.queue.clear();
                return Err(f);
            }
        }
        Ok(())
    }

    /// Marks the current state. Only meaningful at a fixpoint (the pending
    /// queue must be empty).
    pub fn push_state(&mut self) {
        debug_assert!(self.queue.is_empty(), "push_state with calls pending");
        self.trail.marks.push(self.trail.entries.len());
    }

    /// Restores every domain and reversible integer to its state at the
    /// matching [`push_state`](Solver::push_state).
    pub fn pop_state(&mut self) {
        let mark = self.trail.marks.pop().expect("pop_state without a mark");
        debug_assert!(self.queue.is_empty(), "pop_state with calls pending");
        while self.trail.entries.len() > mark {
            match self.trail.entries.pop().unwrap() {
                Entry::Lo { var, lo, size } => {
                    let d = &mut self.doms[var];
                    d.lo = lo;
                    d.size = size;
                }
                Entry::Hi { var, hi, size } => {
                    let d = &mut self.doms[var];
                    d.hi = hi;
                    d.size = size;
                }
                Entry::Bounds { var, lo, hi, size } => {
                    let d = &mut self.doms[var];
                    d.lo = lo;
                    d.hi = hi;
                    d.size = size;
                }
                Entry::Hole { var, val } => {
                    let d = &mut self.doms[var];
                    d.clear_hole(val);
                    d.size += 1;
                }
                Entry::Rev { idx, val } => self.rev[idx] = val,
            }
        }
    }

    pub fn new_rev_int(&mut self, init: i64) -> RevInt {
        self.rev.push(init);
        RevInt(self.rev.len() - 1)
    }

    pub fn rev_get(&self, r: RevInt) -> i64 {
        self.rev[r.0]
    }

    pub fn rev_set(&mut self, r: RevInt, val: i64) {
        let old = self.rev[r.0];
        if old == val {
            return;
        }
        if self.trail.active() {
            self.trail.push(Entry::Rev { idx: r.0, val: old });
        }
        self.rev[r.0] = val;
    }

    /// Caps the domain of `v` at `val` (no-op when already lower).
    pub fn set_max(&mut self, v: VarId, val: u32) -> PropResult {
        let d = &self.doms[v.0];
        if val >= d.hi {
            return Ok(());
        }
        if val < d.lo {
            return Err(Failure);
        }
        let mut new_hi = val;
        while d.is_hole(new_hi) {
            new_hi -= 1;
        }
        let removed = d.live_between(new_hi + 1, d.hi);
        if self.trail.active() {
            self.trail.push(Entry::Hi {
                var: v.0,
                hi: d.hi,
                size: d.size,
            });
        }
        let d = &mut self.doms[v.0];
        d.hi = new_hi;
        d.size -= removed;
        self.removals += removed as u64;
        let inst = d.size == 1;
        self.fire(v, false, true, None, inst);
        Ok(())
    }

    /// Raises the domain of `v` to at least `val`.
    pub fn set_min(&mut self, v: VarId, val: u32) -> PropResult {
        let d = &self.doms[v.0];
        if val <= d.lo {
            return Ok(());
        }
        if val > d.hi {
            return Err(Failure);
        }
        let mut new_lo = val;
        while d.is_hole(new_lo) {
            new_lo += 1;
        }
        let removed = d.live_between(d.lo, new_lo - 1);
        if self.trail.active() {
            self.trail.push(Entry::Lo {
                var: v.0,
                lo: d.lo,
                size: d.size,
            });
        }
        let d = &mut self.doms[v.0];
        d.lo = new_lo;
        d.size -= removed;
        self.removals += removed as u64;
        let inst = d.size == 1;
        self.fire(v, true, false, None, inst);
        Ok(())
    }

    /// Binds `v` to `val`; fails without mutating if `val` is not in the
    /// domain.
    pub fn set_val(&mut self, v: VarId, val: u32) -> PropResult {
        let d = &self.doms[v.0];
        if !d.contains(val) {
            return Err(Failure);
        }
        if d.size == 1 {
            return Ok(());
        }
        if self.trail.active() {
            self.trail.push(Entry::Bounds {
                var: v.0,
                lo: d.lo,
                hi: d.hi,
                size: d.size,
            });
        }
        let d = &mut self.doms[v.0];
        let min_changed = d.lo != val;
        let max_changed = d.hi != val;
        self.removals += (d.size - 1) as u64;
        d.lo = val;
        d.hi = val;
        d.size = 1;
        self.fire(v, min_changed, max_changed, None, true);
        Ok(())
    }

    /// Removes `val` from the domain of `v`; removing the last value fails
    /// without mutating.
    pub fn rem_val(&mut self, v: VarId, val: u32) -> PropResult {
        let d = &self.doms[v.0];
        if val < d.lo || val > d.hi || d.is_hole(val) {
            return Ok(());
        }
        if d.size == 1 {
            return Err(Failure);
        }
        if val == d.lo {
            let mut new_lo = val + 1;
            while d.is_hole(new_lo) {
                new_lo += 1;
            }
            if self.trail.active() {
                self.trail.push(Entry::Lo {
                    var: v.0,
                    lo: d.lo,
                    size: d.size,
                });
            }
            let d = &mut self.doms[v.0];
            d.lo = new_lo;
            d.size -= 1;
            self.removals += 1;
            let inst = d.size == 1;
            self.fire(v, true, false, None, inst);
        } else if val == d.hi {
            let mut new_hi = val - 1;
            while d.is_hole(new_hi) {
                new_hi -= 1;
            }
            if self.trail.active() {
                self.trail.push(Entry::Hi {
                    var: v.0,
                    hi: d.hi,
                    size: d.size,
                });
            }
            let d = &mut self.doms[v.0];
            d.hi = new_hi;
            d.size -= 1;
            self.removals += 1;
            let inst = d.size == 1;
            self.fire(v, false, true, None, inst);
        } else {
            if self.trail.active() {
                self.trail.push(Entry::Hole { var: v.0, val });
            }
            let d = &mut self.doms[v.0];
            d.set_hole(val);
            d.size -= 1;
            self.removals += 1;
            // lo and hi both remain, so the domain cannot have hit size 1.
            self.fire(v, false, false, Some(val), false);
        }
        Ok(())
    }

    fn fire(
        &mut self,
        v: VarId,
        min_changed: bool,
        max_changed: bool,
        removed: Option<u32>,
        inst: bool,
    ) {
        let (lo, hi) = (self.doms[v.0].lo, self.doms[v.0].hi);
        let ws = &self.watchers[v.0];
        if min_changed {
            for &(slot, key) in &ws.min {
                self.queue.schedule(slot, key);
            }
        }
        if max_changed {
            for &(slot, key) in &ws.max {
                self.queue.schedule(slot, key);
            }
        }
        if let Some(val) = removed {
            for &(slot, key) in &ws.rem {
                self.queue.schedule(slot, key + val);
            }
        }
        if inst {
            for &(slot, key) in &ws.inst {
                self.queue.schedule(slot, key);
            }
        }
        if let Some(log) = &mut self.event_log {
            if min_changed {
                log.push(LoggedEvent {
                    var: v,
                    kind: EventKind::Min,
                    value: lo,
                });
            }
            if max_changed {
                log.push(LoggedEvent {
                    var: v,
                    kind: EventKind::Max,
                    value: hi,
                });
            }
            if let Some(val) = removed {
                log.push(LoggedEvent {
                    var: v,
                    kind: EventKind::Rem,
                    value: val,
                });
            }
            if inst {
                log.push(LoggedEvent {
                    var: v,
                    kind: EventKind::Inst,
                    value: lo,
                });
            }
        }
    }
}
