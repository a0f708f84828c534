use powfree_core::delta::{gamma_holds, GammaTriple};
use powfree_core::oracle::{brute_is_free, brute_max_exponent, enumerate_power_free};
use powfree_core::power::check_all;
use powfree_core::streams::RightInfiniteWord;
use powfree_core::words::fractional_power;
use powfree_core::{is_power_free, max_exponent, suffix_violations, Exec, Exponent, PowerBound, Word};
use proptest::prelude::*;

fn word(k: u8, max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..k, 1..=max).prop_map(Word::from)
}

fn bound() -> impl Strategy<Value = PowerBound> {
    (2u64..13, 1u64..4, any::<bool>()).prop_filter_map("bound above 1", |(n, d, plus)| {
        let t = Exponent::new(n, d).ok()?;
        (n > d).then_some(if plus { PowerBound::plus(t) } else { PowerBound::plain(t) })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn max_exponent_matches_the_oracle(w in word(4, 48)) {
        let fast = max_exponent(&w).unwrap();
        let slow = brute_max_exponent(&w).unwrap();
        prop_assert_eq!(fast.exponent, slow.exponent);
        prop_assert!(fast.holds_in(&w));
    }

    #[test]
    fn freeness_matches_the_oracle(w in word(3, 40), b in bound()) {
        let v = is_power_free(&w, b);
        prop_assert_eq!(v.free, brute_is_free(&w, b).unwrap());
        if let Some(r) = v.witness {
            prop_assert!(r.holds_in(&w) && b.forbids(r.exponent));
        }
    }

    #[test]
    fn exponent_is_invariant_under_reversal(w in word(3, 64)) {
        prop_assert_eq!(max_exponent(&w).unwrap().exponent, max_exponent(&w.reversed()).unwrap().exponent);
    }

    #[test]
    fn a_power_has_at_least_its_exponent(r in word(3, 8), num in 1u64..20, den in 1u64..5) {
        let a = Exponent::new(num, den).unwrap();
        prop_assume!(a.times_len(r.len()).is_some_and(|n| n >= 1));
        let p = fractional_power(&r, a).unwrap();
        prop_assert!(max_exponent(&p).unwrap().exponent >= a);
    }

    #[test]
    fn suffix_violations_are_forbidden_suffixes(w in word(3, 40), b in bound()) {
        let n = w.len();
        for r in suffix_violations(&w, b, n) {
            prop_assert_eq!(r.end, n);
            prop_assert!(r.holds_in(&w) && b.forbids(r.exponent));
        }
        // the longest forbidden suffix for each period is reported
        let reported: Vec<usize> = suffix_violations(&w, b, n).iter().map(|r| r.period_len).collect();
        for p in 1..n {
            let len = (p..=n).take_while(|&l| (n - l..n - p).all(|i| w[i] == w[i + p])).last();
            if let Some(len) = len {
                if b.forbids_ratio(len, p) {
                    prop_assert!(reported.contains(&p), "period {} missing", p);
                }
            }
        }
    }

    #[test]
    fn execution_mode_does_not_change_results(ws in prop::collection::vec(word(3, 30), 0..20), b in bound()) {
        prop_assert_eq!(check_all(&ws, b, Exec::Sequential), check_all(&ws, b, Exec::Parallel));
    }

    #[test]
    fn gamma_is_monotone_in_eta(w_len in 1usize..4, u_len in 0usize..3, eta in 0usize..2000, num in 5u64..13, den in 1u64..3) {
        let alpha = Exponent::new(num, den).unwrap();
        let t = |eta_len: usize| GammaTriple {
            w: Word::from(vec![0; w_len]),
            eta: Word::from(vec![1; eta_len]),
            u: Word::from(vec![2; u_len]),
            alpha,
        };
        if gamma_holds(&t(eta)) {
            prop_assert!(gamma_holds(&t(eta + 1)));
        }
    }

    #[test]
    fn stream_windows_agree_with_prefixes(from in 0i64..5000, len in 0i64..300) {
        let tm = RightInfiniteWord::thue_morse(0, 1).unwrap();
        let win = tm.window(from, from + len).unwrap();
        let prefix = tm.prefix((from + len) as usize);
        prop_assert_eq!(win.word.letters(), &prefix[from as usize..]);
        let left = tm.reversed();
        for i in 0..len.min(20) {
            prop_assert_eq!(left.letter_at(-1 - i), tm.letter_at(i as u64));
        }
    }
}

#[test]
fn enumeration_modes_and_oracle_agree() {
    for b in ["2", "2+", "5/2", "3"] {
        let b: PowerBound = b.parse().unwrap();
        let seq = enumerate_power_free(3, b, 9, u64::MAX, true, Exec::Sequential).unwrap();
        let par = enumerate_power_free(3, b, 9, u64::MAX, false, Exec::Parallel).unwrap();
        assert_eq!(seq.counts, par.counts);
        for (n, words) in seq.words.unwrap().iter().enumerate().skip(1) {
            assert_eq!(words.len() as u64, seq.counts[n]);
            assert!(words.iter().all(|w| brute_is_free(w, b).unwrap()));
        }
    }
}
