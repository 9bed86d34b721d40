//! Shared fixtures for the integration tests.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stable_marriage::egs::GsLists;
use stable_marriage::instance::{Instance, Side};
use stable_marriage::search::ScoreTables;

/// The running six-person example.
pub const SIX: &str = "\
6
1 3 6 2 4 5
4 6 1 2 5 3
1 4 5 3 6 2
6 5 3 4 2 1
2 3 1 4 5 6
3 1 2 6 5 4
1 5 6 3 2 4
2 4 6 1 3 5
4 3 6 2 5 1
1 3 5 4 2 6
3 2 6 1 4 5
5 1 3 6 4 2
";

/// The fully reduced lists of [`SIX`], as rendered text.
pub const SIX_FULL_LISTS: &str = "\
men:
1: 1
2: 2
3: 4
4: 6 5 3
5: 5 6
6: 3 6 5
women:
1: 1
2: 2
3: 4 6
4: 3
5: 6 4 5
6: 5 6 4
";

pub fn six() -> Instance {
    Instance::parse(SIX).expect("fixture parses")
}

pub fn six_full_lists() -> GsLists {
    GsLists {
        men: vec![
            vec![1],
            vec![2],
            vec![4],
            vec![6, 5, 3],
            vec![5, 6],
            vec![3, 6, 5],
        ],
        women: vec![
            vec![1],
            vec![2],
            vec![4, 6],
            vec![3],
            vec![6, 4, 5],
            vec![5, 6, 4],
        ],
    }
}

/// Random score tables that rise strictly along every preference list.
pub fn random_weighted(inst: &Instance, seed: u64) -> ScoreTables {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = inst.n();
    let mut build = |side: Side| -> Vec<Vec<u64>> {
        let mut rows = vec![vec![0u64; n]; n];
        for person in 1..=n as u32 {
            let mut score = 0u64;
            for rank in 1..=n as u32 {
                score += 1 + rng.next_u64() % 5;
                let partner = inst.pref(side, person, rank);
                rows[person as usize - 1][partner as usize - 1] = score;
            }
        }
        rows
    };
    let men = build(Side::Men);
    let women = build(Side::Women);
    ScoreTables::weighted(inst, &men, &women).expect("generated scores are order-consistent")
}
