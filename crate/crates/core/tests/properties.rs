use cesaro::evaluators::{cesaro_average, discounted_partial, discounted_value};
use cesaro::orderings::{compare_catching_up, compare_cesaro, compare_fixed_step, Verdict};
use cesaro::rational::{frac, int, to_f64};
use cesaro::stream::format::{ep_to_value, stream_from_value};
use cesaro::{EpStream, FinitePermutation, FixedStepPermutation, Rational, Stream};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn ep_strategy() -> impl Strategy<Value = EpStream> {
    (
        prop::collection::vec(-3i64..=3, 0..=4),
        prop::collection::vec(-3i64..=3, 1..=6),
    )
        .prop_map(|(h, c)| EpStream::from_ints(&h, &c).unwrap())
}

fn bijection(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((1..=n).collect::<Vec<_>>()).prop_shuffle()
}

fn fixed_step_strategy() -> impl Strategy<Value = FixedStepPermutation> {
    (1usize..=4).prop_flat_map(|k| {
        (prop::collection::vec(bijection(k), 0..=3), bijection(k)).prop_map(
            move |(blocks, tail)| FixedStepPermutation::new(k as u64, blocks, tail).unwrap(),
        )
    })
}

type Rel = fn(&EpStream, &EpStream) -> cesaro::ComparisonResult;

const RELATIONS: [(&str, Rel); 3] = [
    ("cesaro", compare_cesaro),
    ("catching_up", compare_catching_up),
    ("fixed_step", compare_fixed_step),
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn equality_matches_agreement_horizon(u in ep_strategy(), v in ep_strategy()) {
        let horizon = u.agreement_horizon(&v);
        let agree = (1..=horizon).all(|t| u.value_at(t) == v.value_at(t));
        prop_assert_eq!(agree, u == v);
    }

    #[test]
    fn add_and_scale_are_pointwise(u in ep_strategy(), v in ep_strategy(), t in 1u64..=10_000, n in -5i64..=5, d in 1i64..=4) {
        let alpha = frac(n, d);
        prop_assert_eq!(u.add(&v).value_at(t).clone(), u.value_at(t) + v.value_at(t));
        prop_assert_eq!(u.scale(&alpha).value_at(t).clone(), u.value_at(t) * &alpha);
    }

    #[test]
    fn finite_permutation_fixes_the_tail(u in ep_strategy(), map in (1usize..=8).prop_flat_map(bijection)) {
        let pi = FinitePermutation::new(map).unwrap();
        let w = u.apply_finite_permutation(&pi);
        let n = pi.horizon();
        for t in n + 1..n + 40 {
            prop_assert_eq!(w.value_at(t), u.value_at(t));
        }
        let mut a: Vec<_> = (1..=n).map(|t| u.value_at(t).clone()).collect();
        let mut b: Vec<_> = (1..=n).map(|t| w.value_at(t).clone()).collect();
        a.sort();
        b.sort();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn fixed_step_permutation_preserves_block_multisets(u in ep_strategy(), pi in fixed_step_strategy(), m in 0u64..=4) {
        let k = pi.step();
        let w = u.apply_fixed_step_permutation(&pi);
        for block in m..m + 8 {
            let range = block * k + 1..=(block + 1) * k;
            let mut a: Vec<_> = range.clone().map(|t| u.value_at(t).clone()).collect();
            let mut b: Vec<_> = range.map(|t| w.value_at(t).clone()).collect();
            a.sort();
            b.sort();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn transfer_preserves_partial_sums(u in ep_strategy(), i in 1u64..=10, j in 1u64..=10, n in -4i64..=4) {
        prop_assume!(i != j);
        let w = u.transfer(i, j, &frac(n, 2)).unwrap();
        for horizon in i.max(j)..i.max(j) + 20 {
            prop_assert_eq!(w.partial_sum(horizon), u.partial_sum(horizon));
        }
        prop_assert_eq!(w.transfer(i, j, &-frac(n, 2)).unwrap(), u);
    }

    #[test]
    fn spec_round_trip(u in ep_strategy()) {
        let back = stream_from_value(&ep_to_value(&u), "stream").unwrap();
        prop_assert_eq!(back.as_ep(), Some(&u));
    }

    #[test]
    fn relations_are_reflexive_and_mirrored(u in ep_strategy(), v in ep_strategy()) {
        for (name, rel) in RELATIONS {
            prop_assert_eq!(rel(&u, &u).verdict, Verdict::Equivalent, "{}", name);
            prop_assert_eq!(rel(&u, &v).verdict.mirror(), rel(&v, &u).verdict, "{}", name);
        }
        prop_assert_ne!(compare_cesaro(&u, &v).verdict, Verdict::Incomparable);
    }

    #[test]
    fn relations_are_transitive(u in ep_strategy(), v in ep_strategy(), w in ep_strategy()) {
        for (name, rel) in RELATIONS {
            if rel(&u, &v).verdict.at_least() && rel(&v, &w).verdict.at_least() {
                prop_assert!(rel(&u, &w).verdict.at_least(), "{}", name);
            }
        }
    }

    #[test]
    fn cesaro_refines_catching_up(u in ep_strategy(), v in ep_strategy()) {
        for verdict in [compare_catching_up(&u, &v).verdict, compare_fixed_step(&u, &v).verdict] {
            if verdict == Verdict::StrictlyBetter {
                prop_assert!(cesaro_average(&u) >= cesaro_average(&v));
            }
        }
    }

    #[test]
    fn uniform_dominance_is_strict_for_both_criteria(v in ep_strategy(), noise in ep_strategy(), e in 1i64..=4) {
        let nonneg = EpStream::new(
            noise.head().iter().map(|x| x.abs()).collect(),
            noise.cycle().iter().map(|x| x.abs()).collect(),
        ).unwrap();
        let u = v.shift(&frac(1, e)).add(&nonneg);
        prop_assert_eq!(compare_catching_up(&u, &v).verdict, Verdict::StrictlyBetter);
        prop_assert_eq!(compare_fixed_step(&u, &v).verdict, Verdict::StrictlyBetter);
        prop_assert_eq!(compare_cesaro(&u, &v).verdict, Verdict::StrictlyBetter);
    }

    #[test]
    fn tail_dominance_is_strict_for_catching_up(v in ep_strategy(), head in prop::collection::vec(-3i64..=3, 0..=4), skip in 0u64..=4) {
        // u agrees with an arbitrary prefix, then dominates v's tail by 1/2
        let dominant = v.tail(skip).shift(&frac(1, 2));
        let mut prefix: Vec<Rational> = head.iter().map(|&x| int(x)).collect();
        prefix.resize(skip as usize, Rational::zero());
        let mut u_head = prefix;
        u_head.extend(dominant.head().iter().cloned());
        let u = EpStream::new(u_head, dominant.cycle().to_vec()).unwrap();
        prop_assert_eq!(compare_catching_up(&u, &v).verdict, Verdict::StrictlyBetter);
    }

    #[test]
    fn cesaro_average_ignores_heads(u in ep_strategy(), skip in 0u64..=12) {
        prop_assert_eq!(cesaro_average(&u.tail(skip)), cesaro_average(&u));
    }

    #[test]
    fn discounted_closed_form_matches_truncation(u in ep_strategy(), j in 1u32..=6) {
        let delta = 1.0 - 2f64.powi(-(j as i32));
        let bound = to_f64(&u.sup_abs()).max(1.0);
        let n = ((1e-12 / bound).ln() / delta.ln()).ceil() as u64;
        let direct = discounted_partial(&Stream::Ep(u.clone()), delta, n).unwrap();
        let closed = discounted_value(&u, delta).unwrap();
        prop_assert!((direct - closed).abs() < 1e-9, "{} vs {}", direct, closed);
    }
}
