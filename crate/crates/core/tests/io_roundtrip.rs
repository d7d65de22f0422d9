//! Document round trips on randomized valid configurations.

mod common;

use common::Rng;
use degsets::eps::EventuallyPeriodicSet;
use degsets::fiber::{
    BranchRef, ComponentRecord, ConfigMetadata, DegreeSetSpec, InteriorSpec, MarkedPoint,
    ResidueFieldClass, SpecialFiberConfig,
};
use degsets::finitefield::CurveCountData;
use degsets::io::{parse_config, render_config};

fn random_degree_spec(rng: &mut Rng, q: u64) -> (DegreeSetSpec, InteriorSpec) {
    match rng.below(4) {
        0 => (DegreeSetSpec::All, InteriorSpec::Same),
        1 => {
            let d = rng.range(1, 6);
            (
                DegreeSetSpec::Explicit(EventuallyPeriodicSet::multiples(d).unwrap()),
                InteriorSpec::Explicit(EventuallyPeriodicSet::multiples(d).unwrap()),
            )
        }
        2 => (
            DegreeSetSpec::FiniteField(CurveCountData::new(q, 0, vec![q + 1]).unwrap()),
            InteriorSpec::Auto,
        ),
        _ => {
            let r = rng.range(1, 9);
            (
                DegreeSetSpec::Explicit(EventuallyPeriodicSet::at_least(r).unwrap()),
                InteriorSpec::Same,
            )
        }
    }
}

fn random_config(rng: &mut Rng) -> SpecialFiberConfig {
    let q = [3u64, 5, 7, 9][rng.below(4) as usize];
    let residue_field = match rng.below(3) {
        0 => ResidueFieldClass::Finite { q },
        1 => ResidueFieldClass::AlgebraicallyClosed,
        _ => ResidueFieldClass::InfiniteOther,
    };
    let component_count = rng.range(1, 4);
    let components: Vec<ComponentRecord> = (0..component_count)
        .map(|i| {
            let (degree_set, interior_degree_set) = random_degree_spec(rng, q);
            ComponentRecord {
                id: format!("c{i}"),
                multiplicity: rng.range(1, 8),
                constant_field_degree: None,
                degree_set,
                interior_degree_set,
                arithmetic_genus: rng.chance(50).then(|| rng.below(3)),
            }
        })
        .collect();
    // one crossing point per adjacent pair, plus maybe a free smooth point
    let mut points = Vec::new();
    for i in 1..component_count {
        points.push(MarkedPoint {
            id: format!("x{i}"),
            degree: 1,
            branches: vec![
                BranchRef {
                    component: format!("c{}", i - 1),
                    count: 1,
                },
                BranchRef {
                    component: format!("c{i}"),
                    count: 1,
                },
            ],
            snc: true,
        });
    }
    if rng.chance(40) {
        points.push(MarkedPoint {
            id: "free".into(),
            degree: rng.range(1, 3),
            branches: vec![BranchRef {
                component: "c0".into(),
                count: 1,
            }],
            snc: true,
        });
    }
    SpecialFiberConfig {
        residue_field,
        components,
        points,
        metadata: ConfigMetadata {
            genus: rng.chance(50).then(|| rng.below(4)),
            declared_minimal: rng.chance(30),
            hyperelliptic: rng.chance(30),
        },
    }
}

#[test]
fn one_hundred_randomized_round_trips() {
    let mut rng = Rng::new(0x105EED);
    for case in 0..100 {
        let cfg = random_config(&mut rng);
        let text = render_config(&cfg);
        let back = parse_config(&text).unwrap_or_else(|e| panic!("case {case}: {e}\n{text}"));
        assert_eq!(back, cfg, "case {case} round trip\n{text}");
    }
}
