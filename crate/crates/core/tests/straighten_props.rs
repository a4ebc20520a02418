mod common;

use common::{oracle, tree_strategy};
use proptest::prelude::*;
use wpp::straighten::{is_straightened, Side, Straightener, TreeSum};
use wpp::trees::families::is_comb;

fn side_strategy() -> impl Strategy<Value = Side> {
    prop_oneof![Just(Side::Cohomology), Just(Side::Lie2), Just(Side::FullPoset)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn straightening_is_sound(t in tree_strategy(2, 5), side in side_strategy()) {
        let n = t.leaf_count();
        prop_assume!(side != Side::FullPoset || n <= 4);
        let s = Straightener::new(side);
        let out = s.straighten(&t).unwrap();
        prop_assert!(is_straightened(&out));
        for u in out.terms.keys() {
            prop_assert!(u.mask() == t.mask());
            if side != Side::FullPoset {
                prop_assert!(is_comb(u));
                prop_assert_eq!(u.red_count(), t.red_count());
            }
        }
        let input = TreeSum::single(side, t.clone(), 1);
        prop_assert!(oracle(n).certifies(&input, &out).unwrap(), "{} on {}", t, side);
    }

    #[test]
    fn straightening_is_linear(a in tree_strategy(4, 4), b in tree_strategy(4, 4), k in -3i64..=3) {
        let side = Side::Cohomology;
        let s = Straightener::new(side);
        let mut sum = TreeSum::single(side, a.clone(), 1);
        sum.add_term(b.clone(), k).unwrap();
        let mut expected = s.straighten(&a).unwrap();
        expected.add_scaled(&s.straighten(&b).unwrap(), k).unwrap();
        prop_assert_eq!(s.straighten_sum(&sum).unwrap(), expected);
    }

    #[test]
    fn traces_are_deterministic(t in tree_strategy(3, 5)) {
        let run = || {
            let s = Straightener::with_trace(Side::Lie2);
            let out = s.straighten(&t).unwrap();
            let steps: Vec<String> = s.take_trace().iter().map(|x| x.to_string()).collect();
            (out, steps)
        };
        prop_assert_eq!(run(), run());
    }
}
