mod common;

use common::{all_strings, gen_machine, rich_machine, test_rng};
use sfstkit::minimize::{is_empty_language, is_onward};
use sfstkit::ostia::{build_ptt, make_onward};
use sfstkit::{
    equivalent, ostia_infer, ostia_infer_with, trim, FinalityPolicy, OstiaConfig, Sfst, Symbol,
    TokenString,
};

type Pairs = Vec<(TokenString, TokenString)>;

/// Every accepted input up to `max_len` with its output.
fn exhaustive(m: &Sfst, sigma: u32, max_len: usize) -> Pairs {
    all_strings(sigma, max_len)
        .into_iter()
        .filter_map(|w| m.transduce(&w).unwrap().map(|o| (w, o)))
        .collect()
}

fn assert_consistent(learned: &Sfst, pairs: &Pairs) {
    for (i, o) in pairs {
        assert_eq!(learned.transduce(i).unwrap().as_ref(), Some(o), "input {i}");
    }
}

#[test]
fn identity_over_two_symbols() {
    let pairs: Pairs = all_strings(2, 4).into_iter().map(|w| (w.clone(), w)).collect();
    let learned = ostia_infer(&pairs).unwrap();
    let mut b = Sfst::builder(1);
    b.add_transition(0, Symbol(0), [0], 0).unwrap();
    b.add_transition(0, Symbol(1), [1], 0).unwrap();
    b.set_final(0, TokenString::empty()).unwrap();
    assert!(equivalent(&learned, &b.build().unwrap()));
    assert_eq!(learned.num_states(), 1);
}

/// Agreement on every string the target accepts, up to `max_len`.
fn agrees_on_domain(learned: &Sfst, target: &Sfst, sigma: u32, max_len: usize) -> bool {
    all_strings(sigma, max_len).iter().all(|w| match target.transduce(w).unwrap() {
        Some(o) => learned.transduce(w).unwrap() == Some(o),
        None => true,
    })
}

#[test]
fn three_state_targets_from_characteristic_length() {
    for seed in 0..20 {
        let target = gen_machine(3, 2, seed);
        let pairs = exhaustive(&target, 2, 2 * 3 + 2);
        let learned = ostia_infer(&pairs).unwrap();
        assert_consistent(&learned, &pairs);
        // positive data cannot reveal a missing edge, so only agreement on
        // the domain is guaranteed; total targets are recovered exactly
        assert!(agrees_on_domain(&learned, &target, 2, 11), "seed {seed}");
        if target.num_transitions() == 2 * target.num_states() {
            assert!(equivalent(&learned, &target), "seed {seed}");
        }

        let cfg = OstiaConfig {
            domain: Some(target.clone()),
            ..OstiaConfig::default()
        };
        let (with_domain, _) = ostia_infer_with(&pairs, &cfg).unwrap();
        assert_consistent(&with_domain, &pairs);
        assert!(equivalent(&with_domain, &target), "seed {seed}");
    }
}

#[test]
fn domain_must_cover_the_sample() {
    let mut b = Sfst::builder(1).input_alphabet([Symbol(0), Symbol(1)]);
    b.add_transition(0, Symbol(0), [5], 0).unwrap();
    b.set_final(0, TokenString::empty()).unwrap();
    let cfg = OstiaConfig {
        domain: Some(b.build().unwrap()),
        ..OstiaConfig::default()
    };
    let pairs: Pairs = vec![(TokenString::from([1]), TokenString::from([5]))];
    assert!(ostia_infer_with(&pairs, &cfg).is_err());
}

#[test]
fn learned_machines_are_onward_and_consistent_on_partial_samples() {
    let mut rng = test_rng(21);
    let mut done = 0;
    while done < 60 {
        let m = trim(&rich_machine(&mut rng, 4, 2, 3));
        if is_empty_language(&m) {
            continue;
        }
        let pairs = exhaustive(&m, 2, 5);
        for policy in [FinalityPolicy::Strict, FinalityPolicy::Classic] {
            let (learned, stats) =
                ostia_infer_with(&pairs, &OstiaConfig { finality: policy, ..Default::default() }).unwrap();
            assert_consistent(&learned, &pairs);
            assert!(is_onward(&learned) || pairs.is_empty());
            assert_eq!(stats.learned_states, learned.num_states());
            assert!(stats.learned_states <= stats.ptt_states);
            // the learned states are the root plus every promoted node
            assert_eq!(stats.promotions + 1, stats.learned_states);
        }
        done += 1;
    }
}

#[test]
fn more_data_never_hurts_once_converged() {
    for seed in 0..10 {
        let target = gen_machine(3, 2, 100 + seed);
        let mut converged = false;
        for len in 1..=9 {
            let pairs = exhaustive(&target, 2, len);
            let learned = ostia_infer(&pairs).unwrap();
            assert_consistent(&learned, &pairs);
            let ok = equivalent(&learned, &target);
            if converged {
                assert!(ok, "seed {seed} lost the target at length {len}");
            }
            converged |= ok && len >= 2 * 3 + 2;
        }
    }
}

#[test]
fn ptt_and_onward_hand_examples() {
    let pairs: Pairs = vec![
        (TokenString::from([0]), TokenString::from([10])),
        (TokenString::from([0, 1]), TokenString::from([10, 11])),
    ];
    let t = make_onward(build_ptt(&pairs).unwrap());
    assert_eq!(t.num_states(), 3);
    assert_eq!(t.arc(0, Symbol(0)).unwrap().output, TokenString::from([10]));
    assert_eq!(t.arc(1, Symbol(1)).unwrap().output, TokenString::from([11]));
    assert_eq!(t.final_output(1), Some(&TokenString::empty()));
    assert_eq!(t.final_output(2), Some(&TokenString::empty()));
    assert!(t.is_onward());

    let lone: Pairs = vec![(TokenString::from([0]), TokenString::empty())];
    let t = make_onward(build_ptt(&lone).unwrap());
    assert_eq!(t.arc(0, Symbol(0)).unwrap().output, TokenString::empty());
    assert_eq!(t.final_output(1), Some(&TokenString::empty()));
}

#[test]
fn contradictory_samples_are_rejected() {
    let pairs: Pairs = vec![
        (TokenString::from([0]), TokenString::from([1])),
        (TokenString::from([0]), TokenString::from([2])),
    ];
    assert!(build_ptt(&pairs).is_err());
    assert!(ostia_infer(&pairs).is_err());
}
