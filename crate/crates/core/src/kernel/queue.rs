//! The pending-call queue: (method slot, key) pairs awaiting execution.
//!
//! A pair is held at most once while pending; scheduling it again while
//! queued is a no-op. Popping clears the pending flag, so a method may
//! legitimately be re-scheduled by its own effects.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Order in which pending calls are executed. The fixpoint must not depend
/// on it; `SeededRandom` exists so tests can check exactly that.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueueOrder {
    Lifo,
    SeededRandom(u64),
}

#[derive(Debug, Clone, Copy)]
struct Call {
    slot: u32,
    key: u32,
}

pub(crate) struct CallQueue {
    entries: Vec<Call>,
    pending: Vec<Vec<u64>>,
    rng: Option<ChaCha8Rng>,
}

impl CallQueue {
    pub fn new(order: QueueOrder) -> CallQueue {
        CallQueue {
            entries: Vec::new(),
            pending: Vec::new(),
            rng: match order {
                QueueOrder::Lifo => None,
                QueueOrder::SeededRandom(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
            },
        }
    }

    /// Registers a slot accepting keys in `0..key_space`.
    pub fn register_slot(&mut self, key_space: u32) -> usize {
        self.pending.push(vec![0; (key_space as usize).div_ceil(64)]);
        self.pending.len() - 1
    }

    pub fn schedule(&mut self, slot: usize, key: u32) {
        let word = &mut self.pending[slot][(key / 64) as usize];
        let bit = 1 << (key % 64);
        if *word & bit == 0 {
            *word |= bit;
            self.entries.push(Call {
                slot: slot as u32,
                key,
            });
        }
    }

    pub fn pop(&mut self) -> Option<(usize, u32)> {
        let call = match &mut self.rng {
            None => self.entries.pop()?,
            Some(rng) => {
                if self.entries.is_empty() {
                    return None;
                }
                let idx = (rng.next_u64() % self.entries.len() as u64) as usize;
                self.entries.swap_remove(idx)
            }
        };
        self.pending[call.slot as usize][(call.key / 64) as usize] &= !(1 << (call.key % 64));
        Some((call.slot as usize, call.key))
    }

    pub fn clear(&mut self) {
        while let Some(call) = self.entries.pop() {
            self.pending[call.slot as usize][(call.key / 64) as usize] &=
                !(1 << (call.key % 64));
        }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_schedules_coalesce_until_popped() {
        let mut q = CallQueue::new(QueueOrder::Lifo);
        let s = q.register_slot(8);
        q.schedule(s, 3);
        q.schedule(s, 3);
        q.schedule(s, 4);
        assert_eq!(q.pop(), Some((s, 4)));
        assert_eq!(q.pop(), Some((s, 3)));
        assert_eq!(q.pop(), None);
        // Once popped the pair may be queued again.
        q.schedule(s, 3);
        assert_eq!(q.pop(), Some((s, 3)));
    }

    #[test]
    fn clear_resets_pending_flags() {
        let mut q = CallQueue::new(QueueOrder::Lifo);
        let s = q.register_slot(70);
        q.schedule(s, 69);
        q.clear();
        assert!(q.is_empty());
        q.schedule(s, 69);
        assert_eq!(q.pop(), Some((s, 69)));
    }
}
