//! Randomized cross-validation of the set algebra against dense bitsets,
//! plus the algebra laws as property tests.

mod common;

use common::{random_eps, Bitset, Rng};
use degsets::EventuallyPeriodicSet;
use proptest::prelude::*;

const BOUND: u64 = 10_000;

#[test]
fn randomized_operations_agree_with_bitsets() {
    let mut rng = Rng::new(0xDE65E7);
    let mut performed = 0u64;
    while performed < 10_000 {
        let a = random_eps(&mut rng);
        let b = random_eps(&mut rng);
        let ab = Bitset::from_eps(&a, BOUND);
        let bb = Bitset::from_eps(&b, BOUND);
        // cheap operations every round
        let u = a.union(&b).unwrap();
        assert_eq!(ab.union(&bb).first_disagreement(&u), None, "union {a} | {b}");
        let i = a.intersect(&b).unwrap();
        assert_eq!(ab.intersect(&bb).first_disagreement(&i), None, "intersect");
        let d = rng.range(1, 9);
        let s = a.scale(d).unwrap();
        assert_eq!(ab.scale(d).first_disagreement(&s), None, "scale by {d}");
        assert_eq!(a.is_subset(&b), ab.is_subset(&bb), "subset {a} vs {b}");
        if let Ok(g) = a.gcd_of() {
            // window gcd can only be a multiple of the true gcd; they agree
            // once the window contains a full period past the threshold
            assert_eq!(ab.gcd(), Some(g), "gcd of {a}");
        } else {
            assert_eq!(ab.gcd(), None);
        }
        let n = rng.range(1, BOUND);
        assert_eq!(a.contains(n).unwrap(), ab.contains(n));
        performed += 6;
        // sumsets are costlier; sample them
        if rng.chance(20) {
            let sum = a.sumset(&b).unwrap();
            if a.is_empty() || b.is_empty() {
                assert!(sum.is_empty());
            } else {
                assert_eq!(ab.sumset(&bb).first_disagreement(&sum), None, "sumset {a} + {b}");
            }
            performed += 1;
        }
    }
}

#[test]
fn multiples_closure_agrees_with_divisor_search() {
    // when the closure is certified, membership must match "some divisor of
    // n is a member" on the whole window; an error is always acceptable
    // (conservative), a wrong set never is
    let mut rng = Rng::new(0xC105EE);
    let mut certified = 0u32;
    const WINDOW: u64 = 2000;
    for _ in 0..300 {
        let d = random_eps(&mut rng);
        if let Ok(closure) = d.multiples_closure() {
            certified += 1;
            // sieve the true closure: mark all multiples of every member
            let mut expected = vec![false; WINDOW as usize + 1];
            for k in 1..=WINDOW {
                if d.contains(k).unwrap() {
                    let mut m = k;
                    while m <= WINDOW {
                        expected[m as usize] = true;
                        m += k;
                    }
                }
            }
            for n in 1..=WINDOW {
                assert_eq!(
                    closure.contains(n).unwrap(),
                    expected[n as usize],
                    "closure of {d} wrong at {n}"
                );
            }
        }
    }
    assert!(certified > 30, "closure certified only {certified} times");
}

#[test]
fn equality_is_decided_by_canonical_fields() {
    let mut rng = Rng::new(0xCA11AB1E);
    for _ in 0..3000 {
        let a = random_eps(&mut rng);
        let b = random_eps(&mut rng);
        let same_membership = (1..=BOUND).all(|n| a.contains(n).unwrap() == b.contains(n).unwrap());
        assert_eq!(
            a == b,
            same_membership,
            "field equality must match membership: {a} vs {b}"
        );
    }
}

fn eps_strategy() -> impl Strategy<Value = EventuallyPeriodicSet> {
    (1u64..30, 1u64..10, proptest::collection::vec(any::<bool>(), 40))
        .prop_map(|(threshold, period, bits)| {
            let explicit: Vec<u64> = (1..threshold)
                .filter(|&n| bits[n as usize % bits.len()])
                .collect();
            let residues: Vec<u64> = (0..period)
                .filter(|&r| bits[(r + threshold) as usize % bits.len()])
                .collect();
            EventuallyPeriodicSet::from_raw(threshold, explicit, period, residues).unwrap()
        })
}

proptest! {
    #[test]
    fn union_laws(a in eps_strategy(), b in eps_strategy(), c in eps_strategy()) {
        prop_assert_eq!(a.union(&b).unwrap(), b.union(&a).unwrap());
        prop_assert_eq!(
            a.union(&b).unwrap().union(&c).unwrap(),
            a.union(&b.union(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(a.union(&a).unwrap(), a);
    }

    #[test]
    fn intersection_laws(a in eps_strategy(), b in eps_strategy(), c in eps_strategy()) {
        prop_assert_eq!(a.intersect(&b).unwrap(), b.intersect(&a).unwrap());
        prop_assert_eq!(
            a.intersect(&b).unwrap().intersect(&c).unwrap(),
            a.intersect(&b.intersect(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(a.intersect(&a).unwrap(), a.clone());
        // subset through intersection
        prop_assert_eq!(a.intersect(&b).unwrap().is_subset(&a), true);
    }

    #[test]
    fn scale_distributes_over_union(a in eps_strategy(), b in eps_strategy(), d in 1u64..8) {
        prop_assert_eq!(
            a.union(&b).unwrap().scale(d).unwrap(),
            a.scale(d).unwrap().union(&b.scale(d).unwrap()).unwrap()
        );
    }

    #[test]
    fn scale_multiplies_gcd(a in eps_strategy(), d in 1u64..8) {
        if let Ok(g) = a.gcd_of() {
            prop_assert_eq!(a.scale(d).unwrap().gcd_of().unwrap(), d * g);
        }
    }

    #[test]
    fn sumset_laws(a in eps_strategy(), b in eps_strategy(), c in eps_strategy()) {
        prop_assert_eq!(a.sumset(&b).unwrap(), b.sumset(&a).unwrap());
        prop_assert_eq!(
            a.sumset(&b).unwrap().sumset(&c).unwrap(),
            a.sumset(&b.sumset(&c).unwrap()).unwrap()
        );
    }

    #[test]
    fn round_trip_is_identity(a in eps_strategy()) {
        let text = a.to_string();
        let back: EventuallyPeriodicSet = text.parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn canonicalization_is_idempotent(a in eps_strategy()) {
        prop_assert_eq!(a.canonicalize(), a);
    }
}
