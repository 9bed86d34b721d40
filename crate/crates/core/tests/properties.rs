//! Cross-engine invariants checked over randomized instances.

use proptest::prelude::*;
use stable_marriage::constraint::{reduce, Orientation};
use stable_marriage::egs;
use stable_marriage::instance::{Instance, Side};
use stable_marriage::matching::Matching;
use stable_marriage::oracle;
use stable_marriage::search::enumerate_all;

fn complete_instances(max_n: usize) -> BoxedStrategy<Instance> {
    (1..=max_n, any::<u64>())
        .prop_map(|(n, seed)| Instance::random(n, seed))
        .boxed()
}

fn mixed_instances(max_n: usize) -> BoxedStrategy<Instance> {
    prop_oneof![
        complete_instances(max_n),
        (1..=max_n, any::<u64>(), 0.0f64..=1.0)
            .prop_map(|(n, seed, keep)| Instance::random_smi(n, seed, keep)),
    ]
    .boxed()
}

proptest! {
    /// Propagating both directions reaches exactly the two-pass reference
    /// reduction, on complete and incomplete instances alike.
    #[test]
    fn full_fixpoint_equals_the_two_pass_reference(inst in mixed_instances(10)) {
        let (s, c) = reduce(&inst, Orientation::Full).expect("root reduction succeeds");
        prop_assert_eq!(c.lists(&s), egs::full_reduction(&inst).lists);
    }

    /// A single propagation direction reproduces the proposing side of the
    /// corresponding one-pass reference reduction.
    #[test]
    fn single_directions_reproduce_the_proposing_side(inst in mixed_instances(10)) {
        let (s, c) = reduce(&inst, Orientation::Male).expect("root reduction succeeds");
        prop_assert_eq!(&c.lists(&s).men, &egs::male_reduction(&inst).lists.men);
        let (s, c) = reduce(&inst, Orientation::Female).expect("root reduction succeeds");
        prop_assert_eq!(&c.lists(&s).women, &egs::female_reduction(&inst).lists.women);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// The men-propose reduction's minimum ranks form a stable matching in
    /// which no man does better in any other stable matching, and they
    /// agree with the reference reduction's list heads.
    #[test]
    fn minimum_ranks_after_mens_reduction_are_the_man_optimal_matching(
        inst in complete_instances(7)
    ) {
        let (s, c) = reduce(&inst, Orientation::Male).expect("root reduction succeeds");
        let ranks: Vec<u32> = (1..=inst.n() as u32).map(|i| s.min(c.man_var(i))).collect();
        let man_optimal = Matching::from_man_ranks(&inst, &ranks).expect("mins are monogamous");
        prop_assert!(oracle::is_stable(&inst, &man_optimal));

        let heads = egs::male_reduction(&inst).lists;
        for man in 1..=inst.n() as u32 {
            prop_assert_eq!(
                man_optimal.partner_of_man(man),
                heads.men[man as usize - 1].first().copied()
            );
        }
        for other in oracle::enumerate_stable(&inst).expect("under the oracle cap") {
            for man in 1..=inst.n() as u32 {
                prop_assert!(
                    other.rank(&inst, Side::Men, man)
                        >= man_optimal.rank(&inst, Side::Men, man),
                    "a stable matching beats the man-optimal one for man {}", man
                );
            }
        }
    }

    /// Search enumerates exactly the oracle's stable set, without dead ends
    /// on complete instances.
    #[test]
    fn enumeration_equals_the_oracle_stable_set(inst in mixed_instances(7)) {
        let (found, stats) = enumerate_all(&inst);
        prop_assert_eq!(found, oracle::enumerate_stable(&inst).expect("under the oracle cap"));
        if !inst.is_smi() {
            prop_assert_eq!(stats.fails, 0);
        }
    }
}
