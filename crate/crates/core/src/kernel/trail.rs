//! Value-level undo records. Mutations made while at least one state mark is
//! active push the overwritten values; popping a mark replays them in
//! reverse.

#[derive(Debug, Clone, Copy)]
pub(crate) enum Entry {
    Lo { var: usize, lo: u32, size: u32 },
    Hi { var: usize, hi: u32, size: u32 },
    Bounds { var: usize, lo: u32, hi: u32, size: u32 },
    Hole { var: usize, val: u32 },
    Rev { idx: usize, val: i64 },
}

#[derive(Default)]
pub(crate) struct Trail {
    pub entries: Vec<Entry>,
    pub marks: Vec<usize>,
}

impl Trail {
    /// Mutations are only recorded between a push and its pop; anything done
    /// outside a mark is permanent.
    pub fn active(&self) -> bool {
        !self.marks.is_empty()
    }

    pub fn push(&mut self, e: Entry) {
        self.entries.push(e);
    }
}
