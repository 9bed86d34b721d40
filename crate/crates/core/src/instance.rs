//! Problem instances: preference tables and their inverses.
//!
//! An instance holds, for `n` men and `n` women, each person's ranking of the
//! opposite sex. With incomplete lists every row is stretched to length `n+1`:
//! the acceptable partners come first in preference order, then the value
//! `n+1` as a stay-single marker, then everyone unacceptable in ascending
//! order. A person "prefers" the marker to anyone listed after it, so being
//! single beats every unacceptable partner and the tables stay rectangular.
//!
//! The text format read by [`Instance::parse`]:
//!
//! ```text
//! # comment lines start with '#'
//! 3
//! SMI            <- optional marker line; absent for complete instances
//! 3 2            <- men's rows, one per man, most preferred first
//! ...
//! 1              <- then the women's rows
//! ...
//! ```
//!
//! Complete instances list all `n` partners per row and blank lines are
//! ignored. After an `SMI` marker every line is one row, so an empty line is
//! an empty preference list; rows list only the acceptable partners.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use std::fmt::Write as _;
use thiserror::Error;

/// Which sex a person index refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Men,
    Women,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Men => Side::Women,
            Side::Women => Side::Men,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Side::Men => "man",
            Side::Women => "woman",
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InstanceError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{} {person}: row is not a permutation of 1..={n}", side.label())]
    NotPermutation { side: Side, person: u32, n: usize },
    #[error("{} {person}: bad list entry {value}", side.label())]
    BadListEntry { side: Side, person: u32, value: u32 },
    #[error("man {man} and woman {woman} disagree on acceptability")]
    AsymmetricAcceptability { man: u32, woman: u32 },
}

/// Preference tables for `n` men and `n` women, with precomputed inverses.
///
/// Rows have length [`list_len`](Instance::list_len): `n` for a complete
/// instance, `n+1` with incomplete lists. All person and rank arguments of
/// the accessors are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    n: usize,
    smi: bool,
    men_prefs: Vec<Vec<u32>>,
    women_prefs: Vec<Vec<u32>>,
    men_ranks: Vec<Vec<u32>>,
    women_ranks: Vec<Vec<u32>>,
}

impl Instance {
    /// Builds a complete instance from full preference rows, men first.
    pub fn from_complete(
        men: Vec<Vec<u32>>,
        women: Vec<Vec<u32>>,
    ) -> Result<Instance, InstanceError> {
        let n = men.len();
        if n == 0 || women.len() != n {
            return Err(InstanceError::Parse {
                line: 0,
                msg: format!("expected two sets of {n} non-empty rows"),
            });
        }
        let men_ranks = invert_rows(&men, Side::Men, n)?;
        let women_ranks = invert_rows(&women, Side::Women, n)?;
        Ok(Instance {
            n,
            smi: false,
            men_prefs: men,
            women_prefs: women,
            men_ranks,
            women_ranks,
        })
    }

    /// Builds an incomplete-list instance from per-person acceptable lists,
    /// most preferred first. Lists must be mutually consistent: man `i`
    /// listing woman `j` requires woman `j` to list man `i`.
    pub fn from_acceptable_lists(
        n: usize,
        men: Vec<Vec<u32>>,
        women: Vec<Vec<u32>>,
    ) -> Result<Instance, InstanceError> {
        if n == 0 || men.len() != n || women.len() != n {
            return Err(InstanceError::Parse {
                line: 0,
                msg: format!("expected two sets of {n} rows"),
            });
        }
        let men_accept = acceptance_sets(&men, Side::Men, n)?;
        let women_accept = acceptance_sets(&women, Side::Women, n)?;
        for i in 0..n {
            for j in 0..n {
                if men_accept[i][j] != women_accept[j][i] {
                    return Err(InstanceError::AsymmetricAcceptability {
                        man: i as u32 + 1,
                        woman: j as u32 + 1,
                    });
                }
            }
        }
        let men_prefs = pad_rows(men, n);
        let women_prefs = pad_rows(women, n);
        let men_ranks = invert_rows(&men_prefs, Side::Men, n + 1)?;
        let women_ranks = invert_rows(&women_prefs, Side::Women, n + 1)?;
        Ok(Instance {
            n,
            smi: true,
            men_prefs,
            women_prefs,
            men_ranks,
            women_ranks,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_smi(&self) -> bool {
        self.smi
    }

    /// Row length: `n`, or `n+1` when the rows carry a stay-single marker.
    pub fn list_len(&self) -> usize {
        if self.smi {
            self.n + 1
        } else {
            self.n
        }
    }

    /// The value that stands for staying single inside a row. Never a valid
    /// person index.
    pub fn stay_single(&self) -> u32 {
        self.n as u32 + 1
    }

    /// Partner of `person` at preference rank `rank` (1 = most preferred).
    /// May return [`stay_single`](Instance::stay_single) on an incomplete
    /// instance.
    pub fn pref(&self, side: Side, person: u32, rank: u32) -> u32 {
        self.prefs(side)[person as usize - 1][rank as usize - 1]
    }

    /// Rank that `person` gives to `other`, the inverse of
    /// [`pref`](Instance::pref).
    pub fn rank_of(&self, side: Side, person: u32, other: u32) -> u32 {
        self.ranks(side)[person as usize - 1][other as usize - 1]
    }

    /// Rank of the stay-single option for `person`. Everyone ranked after it
    /// is unacceptable. On complete instances this is `n+1`, one past every
    /// real rank, so the "acceptable" range `1..single_rank` is uniform.
    pub fn single_rank(&self, side: Side, person: u32) -> u32 {
        if self.smi {
            self.rank_of(side, person, self.stay_single())
        } else {
            self.n as u32 + 1
        }
    }

    /// Acceptable partners of `person` in preference order.
    pub fn acceptable(&self, side: Side, person: u32) -> &[u32] {
        let end = self.single_rank(side, person) as usize - 1;
        &self.prefs(side)[person as usize - 1][..end]
    }

    /// The same instance with the sexes swapped.
    pub fn swap_roles(&self) -> Instance {
        Instance {
            n: self.n,
            smi: self.smi,
            men_prefs: self.women_prefs.clone(),
            women_prefs: self.men_prefs.clone(),
            men_ranks: self.women_ranks.clone(),
            women_ranks: self.men_ranks.clone(),
        }
    }

    fn prefs(&self, side: Side) -> &[Vec<u32>] {
        match side {
            Side::Men => &self.men_prefs,
            Side::Women => &self.women_prefs,
        }
    }

    fn ranks(&self, side: Side) -> &[Vec<u32>] {
        match side {
            Side::Men => &self.men_ranks,
            Side::Women => &self.women_ranks,
        }
    }

    /// Parses the text format described in the module docs.
    pub fn parse(text: &str) -> Result<Instance, InstanceError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(idx, line)| (idx + 1, line))
            .filter(|(_, line)| !line.trim_start().starts_with('#'));

        let (line_no, header) = lines
            .by_ref()
            .find(|(_, l)| !l.trim().is_empty())
            .ok_or_else(|| InstanceError::Parse {
                line: 0,
                msg: "empty input".into(),
            })?;
        let n: usize = header.trim().parse().map_err(|_| InstanceError::Parse {
            line: line_no,
            msg: format!("expected instance size, found {:?}", header.trim()),
        })?;
        if n == 0 {
            return Err(InstanceError::Parse {
                line: line_no,
                msg: "instance size must be at least 1".into(),
            });
        }

        let mut rest = lines.peekable();
        while matches!(rest.peek(), Some((_, l)) if l.trim().is_empty()) {
            rest.next();
        }
        let smi = matches!(rest.peek(), Some((_, l)) if l.trim() == "SMI");
        if smi {
            rest.next();
        }

        let mut rows: Vec<Vec<u32>> = Vec::with_capacity(2 * n);
        let mut last_line = 0;
        for (line_no, line) in rest {
            last_line = line_no;
            if rows.len() == 2 * n {
                if line.trim().is_empty() {
                    continue;
                }
                return Err(InstanceError::Parse {
                    line: line_no,
                    msg: "unexpected content after the last preference row".into(),
                });
            }
            if !smi && line.trim().is_empty() {
                continue;
            }
            let row = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<u32>().map_err(|_| InstanceError::Parse {
                        line: line_no,
                        msg: format!("expected a person index, found {tok:?}"),
                    })
                })
                .collect::<Result<Vec<u32>, _>>()?;
            if !smi && row.len() != n {
                return Err(InstanceError::Parse {
                    line: line_no,
                    msg: format!("expected {n} entries, found {}", row.len()),
                });
            }
            rows.push(row);
        }
        if rows.len() != 2 * n {
            return Err(InstanceError::Parse {
                line: last_line,
                msg: format!("expected {} preference rows, found {}", 2 * n, rows.len()),
            });
        }
        let women = rows.split_off(n);
        if smi {
            Instance::from_acceptable_lists(n, rows, women)
        } else {
            Instance::from_complete(rows, women)
        }
    }

    /// Renders the instance in the format accepted by
    /// [`parse`](Instance::parse). `parse(render(i))` reproduces `i` exactly.
    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{}", self.n).unwrap();
        if self.smi {
            writeln!(out, "SMI").unwrap();
        }
        for side in [Side::Men, Side::Women] {
            for person in 1..=self.n as u32 {
                let row = self.acceptable(side, person);
                let mut first = true;
                for &other in row {
                    if !first {
                        out.push(' ');
                    }
                    write!(out, "{other}").unwrap();
                    first = false;
                }
                out.push('\n');
            }
        }
        out
    }

    /// A pseudorandom complete instance, reproducible from `(n, seed)`.
    ///
    /// The generator is ChaCha8 keyed with `seed_from_u64(seed)`. Rows are
    /// produced in order (men 1..n, then women 1..n); each starts as the
    /// identity and is shuffled by a Fisher-Yates pass that swaps index `i`
    /// (from `n-1` down to 1) with `next_u64() % (i+1)`.
    pub fn random(n: usize, seed: u64) -> Instance {
        assert!(n >= 1, "instance size must be at least 1");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let men = (0..n).map(|_| random_row(n, &mut rng)).collect();
        let women = (0..n).map(|_| random_row(n, &mut rng)).collect();
        Instance::from_complete(men, women).expect("generated rows are permutations")
    }

    /// A pseudorandom incomplete-list instance.
    ///
    /// Draws a complete instance exactly as [`random`](Instance::random),
    /// then keeps each (man, woman) pair with probability `keep_prob`, using
    /// one further draw per pair in row-major order (`(next_u64() >> 11) as
    /// f64 / 2^53 < keep_prob`). Acceptability is symmetric by construction;
    /// empty lists are possible.
    pub fn random_smi(n: usize, seed: u64, keep_prob: f64) -> Instance {
        let base = Instance::random(n, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..2 * n {
            random_row(n, &mut rng);
        }
        let mut keep = vec![vec![false; n]; n];
        for row in keep.iter_mut() {
            for cell in row.iter_mut() {
                let draw = (rng.next_u64() >> 11) as f64 / 9007199254740992.0;
                *cell = draw < keep_prob;
            }
        }
        let men = (1..=n as u32)
            .map(|i| {
                base.acceptable(Side::Men, i)
                    .iter()
                    .copied()
                    .filter(|&j| keep[i as usize - 1][j as usize - 1])
                    .collect()
            })
            .collect();
        let women = (1..=n as u32)
            .map(|j| {
                base.acceptable(Side::Women, j)
                    .iter()
                    .copied()
                    .filter(|&i| keep[i as usize - 1][j as usize - 1])
                    .collect()
            })
            .collect();
        Instance::from_acceptable_lists(n, men, women).expect("kept pairs are symmetric")
    }
}

fn random_row(n: usize, rng: &mut ChaCha8Rng) -> Vec<u32> {
    let mut row: Vec<u32> = (1..=n as u32).collect();
    for i in (1..n).rev() {
        let r = (rng.next_u64() % (i as u64 + 1)) as usize;
        row.swap(i, r);
    }
    row
}

/// Appends the stay-single marker and the missing people (ascending) so that
/// every row becomes a permutation of `1..=n+1`.
fn pad_rows(rows: Vec<Vec<u32>>, n: usize) -> Vec<Vec<u32>> {
    rows.into_iter()
        .map(|row| {
            let mut listed = vec![false; n + 1];
            for &p in &row {
                listed[p as usize - 1] = true;
            }
            let mut full = row;
            full.push(n as u32 + 1);
            full.extend((1..=n as u32).filter(|&p| !listed[p as usize - 1]));
            full
        })
        .collect()
}

fn acceptance_sets(
    rows: &[Vec<u32>],
    side: Side,
    n: usize,
) -> Result<Vec<Vec<bool>>, InstanceError> {
    rows.iter()
        .enumerate()
        .map(|(idx, row)| {
            let mut seen = vec![false; n];
            for &p in row {
                if p == 0 || p > n as u32 || seen[p as usize - 1] {
                    return Err(InstanceError::BadListEntry {
                        side,
                        person: idx as u32 + 1,
                        value: p,
                    });
                }
                seen[p as usize - 1] = true;
            }
            Ok(seen)
        })
        .collect()
}

fn invert_rows(rows: &[Vec<u32>], side: Side, len: usize) -> Result<Vec<Vec<u32>>, InstanceError> {
    rows.iter()
        .enumerate()
        .map(|(idx, row)| {
            let mut inv = vec![0u32; len];
            if row.len() != len {
                return Err(InstanceError::NotPermutation {
                    side,
                    person: idx as u32 + 1,
                    n: len,
                });
            }
            for (pos, &p) in row.iter().enumerate() {
                if p == 0 || p > len as u32 || inv[p as usize - 1] != 0 {
                    return Err(InstanceError::NotPermutation {
                        side,
                        person: idx as u32 + 1,
                        n: len,
                    });
                }
                inv[p as usize - 1] = pos as u32 + 1;
            }
            Ok(inv)
        })
        .collect()
}
