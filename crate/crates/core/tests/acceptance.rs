//! The acceptance gate: nine checks covering the golden reduction, engine
//! equivalence, enumeration against the oracle, failure-freeness, the
//! proposal and removal bounds, order-independence, sex-equal optimality,
//! incomplete-list handling, and backtracking exactness. Each check prints
//! one pass/fail line (visible under `--nocapture`) and fails its test on
//! any violation. Tolerances are pinned as constants below.

mod common;

use common::{random_weighted, six, six_full_lists, SIX_FULL_LISTS};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stable_marriage::constraint::{reduce, reduce_ordered, Orientation, StabilityConstraint};
use stable_marriage::egs;
use stable_marriage::instance::{Instance, Side};
use stable_marriage::kernel::{QueueOrder, Solver};
use stable_marriage::matching::Matching;
use stable_marriage::oracle;
use stable_marriage::search::{enumerate_all, solve_sex_equal, ScoreTables};
use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::rc::Rc;
use std::time::{Duration, Instant};

const GOLDEN_DEADLINE: Duration = Duration::from_secs(1);
const EQUIVALENCE_DEADLINE: Duration = Duration::from_secs(60);
const ENUMERATION_DEADLINE: Duration = Duration::from_secs(120);
const SEX_EQUAL_DEADLINE: Duration = Duration::from_secs(120);
/// Wall-clock budget for one root reduction at the largest tested size.
const LARGE_REDUCTION_DEADLINE: Duration = Duration::from_secs(5);
const LARGE_REDUCTION_SIZES: [usize; 4] = [250, 500, 1000, 2000];
const KERNEL_FUZZ_MIN_OPS: u64 = 100_000;

fn report<F: FnOnce()>(number: u32, label: &str, run: F) {
    match catch_unwind(AssertUnwindSafe(run)) {
        Ok(()) => println!("criterion {number} ({label}): pass"),
        Err(payload) => {
            let msg = payload
                .downcast_ref::<String>()
                .map(String::as_str)
                .or_else(|| payload.downcast_ref::<&str>().copied())
                .unwrap_or("panic without message");
            println!("criterion {number} ({label}): FAIL: {msg}");
            panic!("criterion {number} ({label}) failed");
        }
    }
}

#[test]
fn criterion_1_six_person_full_lists_are_reproduced_by_both_engines() {
    report(1, "golden full lists", || {
        let started = Instant::now();
        let inst = six();
        let (s, c) = reduce(&inst, Orientation::Full).expect("root reduction succeeds");
        let via_constraint = c.lists(&s);
        let via_reference = egs::full_reduction(&inst).lists;
        assert_eq!(via_constraint, six_full_lists());
        assert_eq!(via_reference, six_full_lists());
        assert_eq!(via_constraint.render(), SIX_FULL_LISTS);
        assert_eq!(via_constraint.render(), via_reference.render());
        assert!(started.elapsed() < GOLDEN_DEADLINE, "took {:?}", started.elapsed());
    });
}

fn permutations(n: u32) -> Vec<Vec<u32>> {
    fn go(rest: &mut Vec<u32>, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        for i in 0..rest.len() {
            let v = rest.remove(i);
            cur.push(v);
            go(rest, cur, out);
            cur.pop();
            rest.insert(i, v);
        }
    }
    let mut out = Vec::new();
    go(&mut (1..=n).collect(), &mut Vec::new(), &mut out);
    out
}

fn men_lists_agree(inst: &Instance) -> bool {
    let (s, c) = reduce(inst, Orientation::Male).expect("root reduction succeeds");
    c.lists(&s).men == egs::male_reduction(inst).lists.men
}

#[test]
fn criterion_2_propagation_equals_the_reference_reduction() {
    report(2, "reference equivalence", || {
        let started = Instant::now();
        // Every complete instance with up to three people per side.
        for n in 2..=3u32 {
            let perms = permutations(n);
            let rows = 2 * n as usize;
            let total = (perms.len() as u64).pow(rows as u32);
            for code in 0..total {
                let mut digits = code;
                let mut pick = || {
                    let row = perms[(digits % perms.len() as u64) as usize].clone();
                    digits /= perms.len() as u64;
                    row
                };
                let men = (0..n).map(|_| pick()).collect();
                let women = (0..n).map(|_| pick()).collect();
                let inst = Instance::from_complete(men, women).expect("permutations are valid");
                assert!(men_lists_agree(&inst), "mismatch at n={n} code={code}");
            }
        }
        for seed in 0..500u64 {
            let n = 2 + (seed as usize) % 31;
            let inst = Instance::random(n, seed);
            assert!(men_lists_agree(&inst), "mismatch at n={n} seed={seed}");
        }
        assert!(
            started.elapsed() < EQUIVALENCE_DEADLINE,
            "took {:?}",
            started.elapsed()
        );
    });
}

#[test]
fn criterion_3_enumeration_matches_the_bruteforce_oracle() {
    report(3, "oracle equivalence", || {
        let started = Instant::now();
        for seed in 0..500u64 {
            let n = 2 + (seed as usize) % 7;
            let inst = Instance::random(n, seed);
            let (found, _) = enumerate_all(&inst);
            let expected = oracle::enumerate_stable(&inst).expect("n is under the oracle cap");
            assert_eq!(found, expected, "stable sets differ at n={n} seed={seed}");
            for m in &found {
                assert!(oracle::is_stable(&inst, m), "unstable output at seed={seed}");
            }
        }
        assert!(
            started.elapsed() < ENUMERATION_DEADLINE,
            "took {:?}",
            started.elapsed()
        );
    });
}

#[test]
fn criterion_4_enumeration_never_hits_a_dead_end() {
    report(4, "failure-free enumeration", || {
        for seed in 0..500u64 {
            let n = 2 + (seed as usize) % 7;
            let inst = Instance::random(n, seed);
            let (_, stats) = enumerate_all(&inst);
            assert_eq!(stats.fails, 0, "dead ends at n={n} seed={seed}");
        }
    });
}

#[test]
fn criterion_5_root_reduction_respects_the_proposal_and_removal_bounds() {
    report(5, "work bounds at scale", || {
        for n in LARGE_REDUCTION_SIZES {
            let inst = Instance::random(n, n as u64);
            let mut s = Solver::new();
            let c = StabilityConstraint::post(&mut s, Rc::new(inst), Orientation::Male)
                .expect("posting cannot wipe out");
            let started = Instant::now();
            s.fixpoint().expect("complete instances reduce without failure");
            let elapsed = started.elapsed();
            let proposal_bound = (n as u64) * (n as u64 - 1) + 1;
            let removal_bound = 2 * (n as u64) * (n as u64);
            assert!(
                c.proposal_count() <= proposal_bound,
                "n={n}: {} proposals exceed {proposal_bound}",
                c.proposal_count()
            );
            assert!(
                s.removal_count() <= removal_bound,
                "n={n}: {} removals exceed {removal_bound}",
                s.removal_count()
            );
            if n == 2000 {
                assert!(
                    elapsed < LARGE_REDUCTION_DEADLINE,
                    "n={n} reduction took {elapsed:?}"
                );
            }
        }
    });
}

#[test]
fn criterion_6_fixpoint_is_independent_of_propagation_order() {
    report(6, "order independence", || {
        for seed in 0..50u64 {
            let inst = Instance::random(16, seed);
            let (s, c) = reduce(&inst, Orientation::Full).expect("root reduction succeeds");
            let domains_of = |s: &Solver, c: &StabilityConstraint| -> Vec<Vec<u32>> {
                (1..=16u32)
                    .map(|p| s.domain_values(c.man_var(p)))
                    .chain((1..=16u32).map(|p| s.domain_values(c.woman_var(p))))
                    .collect()
            };
            let reference = domains_of(&s, &c);
            for order in 0..20u64 {
                let (s, c) =
                    reduce_ordered(&inst, Orientation::Full, QueueOrder::SeededRandom(order))
                        .expect("root reduction succeeds");
                assert_eq!(
                    domains_of(&s, &c),
                    reference,
                    "order {order} diverged on seed {seed}"
                );
            }
        }
    });
}

#[test]
fn criterion_7_sex_equal_search_finds_the_oracle_minimum() {
    report(7, "sex-equal optimality", || {
        let started = Instant::now();
        let inst = six();
        let scores = ScoreTables::unweighted(&inst);
        let man_optimal =
            Matching::new(6, [1, 2, 4, 6, 5, 3].iter().map(|&w| Some(w)).collect()).unwrap();
        assert_eq!(scores.side_sum(&inst, &man_optimal, Side::Men), 14);
        assert_eq!(scores.side_sum(&inst, &man_optimal, Side::Women), 18);
        let (_, objective, _) = solve_sex_equal(&inst, &scores);
        assert!(objective <= 4);
        assert_eq!(objective, 3);

        for seed in 0..200u64 {
            let n = 2 + (seed as usize) % 7;
            let inst = Instance::random(n, seed);
            let scores = ScoreTables::unweighted(&inst);
            let (best, objective, _) = solve_sex_equal(&inst, &scores);
            assert!(oracle::is_stable(&inst, &best), "unstable at seed={seed}");
            let oracle_best = oracle::enumerate_stable(&inst)
                .expect("n is under the oracle cap")
                .iter()
                .map(|m| scores.objective(&inst, m))
                .min()
                .expect("stable set is never empty");
            assert_eq!(objective, oracle_best, "unweighted seed={seed}");
        }
        for seed in 0..50u64 {
            let n = 3 + (seed as usize) % 6;
            let inst = Instance::random(n, seed ^ 0x5eed);
            let scores = random_weighted(&inst, seed);
            let (best, objective, _) = solve_sex_equal(&inst, &scores);
            assert!(oracle::is_stable(&inst, &best), "unstable at seed={seed}");
            let oracle_best = oracle::enumerate_stable(&inst)
                .expect("n is under the oracle cap")
                .iter()
                .map(|m| scores.objective(&inst, m))
                .min()
                .expect("stable set is never empty");
            assert_eq!(objective, oracle_best, "weighted seed={seed}");
        }
        assert!(
            started.elapsed() < SEX_EQUAL_DEADLINE,
            "took {:?}",
            started.elapsed()
        );
    });
}

#[test]
fn criterion_8_incomplete_lists_agree_with_the_oracle_and_the_encoding() {
    report(8, "incomplete lists", || {
        // Acceptable list (3, 2) in a three-a-side instance encodes as the
        // padded row (3, 2, 4, 1) with rank row (4, 2, 1, 3).
        let inst = Instance::from_acceptable_lists(
            3,
            vec![vec![3, 2], vec![1], vec![2]],
            vec![vec![2], vec![1, 3], vec![1]],
        )
        .expect("acceptability is symmetric");
        let padded: Vec<u32> = (1..=4).map(|a| inst.pref(Side::Men, 1, a)).collect();
        let ranks: Vec<u32> = (1..=4).map(|p| inst.rank_of(Side::Men, 1, p)).collect();
        assert_eq!(padded, vec![3, 2, 4, 1]);
        assert_eq!(ranks, vec![4, 2, 1, 3]);
        assert_eq!(inst.stay_single(), 4);

        // Unmatched people report no partner on both engines.
        let lonely = Instance::from_acceptable_lists(
            2,
            vec![vec![2, 1], vec![]],
            vec![vec![1], vec![1]],
        )
        .expect("acceptability is symmetric");
        let (found, _) = enumerate_all(&lonely);
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].partner_of_man(1), Some(2));
        assert_eq!(found[0].partner_of_man(2), None);
        assert_eq!(found[0].partner_of_woman(1), None);
        assert_eq!(found, oracle::enumerate_stable(&lonely).expect("small instance"));

        for seed in 0..200u64 {
            let n = 2 + (seed as usize) % 7;
            let inst = Instance::random_smi(n, seed, 0.5);
            let (found, _) = enumerate_all(&inst);
            let expected = oracle::enumerate_stable(&inst).expect("n is under the oracle cap");
            assert_eq!(found, expected, "stable sets differ at n={n} seed={seed}");
        }
    });
}

#[test]
fn criterion_9_backtracking_restores_state_exactly_under_fuzz() {
    report(9, "backtracking exactness", || {
        let mut rng = ChaCha8Rng::seed_from_u64(0xFEED);
        let mut ops = 0u64;
        while ops < KERNEL_FUZZ_MIN_OPS {
            ops += fuzz_round(&mut rng);
        }
        assert!(ops >= KERNEL_FUZZ_MIN_OPS);
    });
}

/// One round of random mutations, pushes, and pops on a fresh solver,
/// mirrored against plain sets; returns the number of operations applied.
fn fuzz_round(rng: &mut ChaCha8Rng) -> u64 {
    let var_count = 6;
    let lo = 1u32;
    let hi = 1 + (rng.next_u64() % 24) as u32;
    let mut s = Solver::new();
    let vars: Vec<_> = (0..var_count).map(|_| s.new_var(lo, hi)).collect();
    let mut model: Vec<BTreeSet<u32>> = vec![(lo..=hi).collect(); var_count];
    let mut snapshots: Vec<Vec<BTreeSet<u32>>> = Vec::new();
    let mut ops = 0u64;

    for _ in 0..400 {
        ops += 1;
        match rng.next_u64() % 8 {
            // Mutations, each checked against the set model.
            kind @ 0..=5 => {
                let which = (rng.next_u64() % var_count as u64) as usize;
                let v = vars[which];
                let val = lo + (rng.next_u64() % (hi - lo + 1) as u64) as u32;
                let attempt: BTreeSet<u32> = match kind {
                    0 | 1 => model[which].iter().copied().filter(|&x| x >= val).collect(),
                    2 | 3 => model[which].iter().copied().filter(|&x| x <= val).collect(),
                    4 => model[which].iter().copied().filter(|&x| x != val).collect(),
                    _ => model[which].iter().copied().filter(|&x| x == val).collect(),
                };
                let outcome = match kind {
                    0 | 1 => s.set_min(v, val),
                    2 | 3 => s.set_max(v, val),
                    4 => s.rem_val(v, val),
                    _ => s.set_val(v, val),
                };
                if attempt.is_empty() {
                    assert!(outcome.is_err(), "wipeout not reported");
                } else {
                    assert!(outcome.is_ok(), "legal mutation rejected");
                    model[which] = attempt;
                }
                let got = s.domain_values(v);
                let want: Vec<u32> = model[which].iter().copied().collect();
                assert_eq!(got, want, "domain diverged from the model");
            }
            6 => {
                s.push_state();
                snapshots.push(model.clone());
            }
            _ => {
                if let Some(saved) = snapshots.pop() {
                    s.pop_state();
                    model = saved;
                    for (which, v) in vars.iter().enumerate() {
                        let want: Vec<u32> = model[which].iter().copied().collect();
                        assert_eq!(s.domain_values(*v), want, "pop diverged");
                    }
                }
            }
        }
    }
    while let Some(saved) = snapshots.pop() {
        ops += 1;
        s.pop_state();
        model = saved;
        for (which, v) in vars.iter().enumerate() {
            let want: Vec<u32> = model[which].iter().copied().collect();
            assert_eq!(s.domain_values(*v), want, "final pop diverged");
        }
    }
    ops
}
