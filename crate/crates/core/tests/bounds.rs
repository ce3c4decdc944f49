//! Cross-checks between the LP, its certificates, the builders and the oracle.

use alignbound::fixtures::{builtin_fixture, TOY_NAMES};
use alignbound::generate::random_no_overlap_instance;
use alignbound::graph::conflict_bound;
use alignbound::lp::{check_profile_feasible, solve_symmetric_bound, BoundResult, SolverOptions};
use alignbound::nonshannon::{augmented_bound, check_certificate, dual_certificate, Family};
use alignbound::oracle::brute_force_linear_rate;
use alignbound::scheme::{build_no_overlap, verify_scheme};
use alignbound::{ratio, Destination, Instance, MessageSet};
use proptest::prelude::*;

const PRIME: u64 = 2_147_483_647;

fn exact_only() -> SolverOptions {
    SolverOptions { guided: false, ..SolverOptions::default() }
}

fn assert_certified(inst: &Instance, r: &BoundResult) {
    let verdict = check_certificate(inst, &dual_certificate(r)).unwrap();
    assert!(verdict.valid, "{}: {}", inst.label(), verdict.reason);
    assert_eq!(verdict.implied_bound, Some(r.rate));
}

fn instance() -> impl Strategy<Value = Instance> {
    (2usize..=4).prop_flat_map(|n| {
        let mask = (1u32 << n) - 1;
        proptest::collection::vec((1..=mask, 0..=mask), 1..=n + 1).prop_map(move |raw| {
            let mut dests: Vec<Destination> = raw
                .into_iter()
                .map(|(d, i)| {
                    let desired = MessageSet::from_bits(d);
                    Destination::new(desired, MessageSet::from_bits(i).difference(desired))
                })
                .collect();
            for w in 1..=n as u32 {
                if !dests.iter().any(|d| d.desired.contains(w)) {
                    dests.push(Destination::unicast(w, []));
                }
            }
            Instance::new(n, dests, "random").unwrap()
        })
    })
}

#[test]
fn guided_and_exact_routes_agree_on_fixtures() {
    for name in TOY_NAMES.iter().chain(&["groupcast6"]) {
        let inst = builtin_fixture(name).unwrap();
        let guided = solve_symmetric_bound(&inst, &SolverOptions::default()).unwrap();
        let exact = solve_symmetric_bound(&inst, &exact_only()).unwrap();
        assert_eq!(guided.rate, exact.rate, "{name}");
        assert!(!exact.stats.guided);
        assert_certified(&inst, &guided);
        assert_certified(&inst, &exact);
    }
}

#[test]
fn groupcast6_family_bounds_both_routes() {
    let inst = builtin_fixture("groupcast6").unwrap();
    for (family, rate) in [(Family::ZhangYeung, ratio(11, 28)), (Family::Ingleton, ratio(5, 13))] {
        for opts in [SolverOptions::default(), exact_only()] {
            let r = augmented_bound(&inst, family, 64, &opts).unwrap();
            assert_eq!(r.rate, rate, "{family} guided={}", opts.guided);
            assert_certified(&inst, &r);
        }
    }
}

#[test]
fn generated_instances_meet_their_conflict_bound() {
    // achievability from the builder and the LP optimum must coincide
    for (seed, delta, n) in [(7u64, 2usize, 6usize), (8, 2, 8), (9, 3, 8), (10, 1, 5)] {
        let inst = random_no_overlap_instance(n, delta, seed).unwrap();
        let s = build_no_overlap(&inst, delta, seed, PRIME).unwrap();
        assert!(verify_scheme(&inst, &s).unwrap().pass);
        assert_eq!(s.rate(), conflict_bound(Some(delta)).unwrap());
        let report = check_profile_feasible(&inst, &s.linear_profile(), s.rate());
        assert!(report.is_feasible(), "seed {seed}: {:?}", report.violations);
        let bound = solve_symmetric_bound(&inst, &SolverOptions::default()).unwrap();
        assert_eq!(bound.rate, s.rate(), "seed {seed}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn routes_agree_and_certify(inst in instance()) {
        let guided = solve_symmetric_bound(&inst, &SolverOptions::default()).unwrap();
        let exact = solve_symmetric_bound(&inst, &exact_only()).unwrap();
        prop_assert_eq!(guided.rate, exact.rate);
        for r in [&guided, &exact] {
            let verdict = check_certificate(&inst, &dual_certificate(r)).unwrap();
            prop_assert!(verdict.valid, "{}", verdict.reason);
            let report = check_profile_feasible(&inst, &r.profile, r.rate);
            prop_assert!(report.is_feasible());
        }
    }

    #[test]
    fn oracle_sits_below_every_outer_bound(inst in instance()) {
        let opts = SolverOptions::default();
        let shannon = solve_symmetric_bound(&inst, &opts).unwrap().rate;
        let zy = augmented_bound(&inst, Family::ZhangYeung, 32, &opts).unwrap().rate;
        let ingleton = augmented_bound(&inst, Family::Ingleton, 32, &opts).unwrap().rate;
        prop_assert!(zy <= shannon);
        prop_assert!(ingleton <= shannon);
        let oracle = brute_force_linear_rate(&inst, 2, 2).unwrap();
        if let Some(r) = oracle.rate {
            prop_assert!(r <= ingleton, "oracle {} above Ingleton {}", r, ingleton);
            prop_assert!(r <= zy, "oracle {} above ZY {}", r, zy);
            let s = oracle.scheme.unwrap();
            prop_assert!(verify_scheme(&inst, &s).unwrap().pass);
        }
    }
}
