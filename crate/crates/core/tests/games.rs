mod common;

use std::sync::Arc;

use bandit_ldim::adversaries::{AdaptiveBlAdversary, Opponent};
use bandit_ldim::class::{gen_constants, gen_full, gen_random, with_extra_labels, VersionSpace};
use bandit_ldim::dimensions::{bldim, ldim};
use bandit_ldim::harness::{regret, run_game, Protocol};
use bandit_ldim::learners::{
    remap_build, remap_stream, BanditLearner, Bsoa, Exp4, Exp4Config, Learner, Predictor, RandomConsistent,
    RemapWrapper, Soa,
};
use bandit_ldim::{HypothesisClass, InstanceId, LabelId, Stream, StreamExample};
use common::realizable_streams;
use proptest::prelude::*;

fn play(class: &HypothesisClass, learner: &mut Learner, stream: &Stream, protocol: Protocol) -> u64 {
    run_game(class, learner, Opponent::Oblivious(stream.clone()), protocol, stream.len())
        .unwrap()
        .cumulative_loss()
}

#[test]
fn bsoa_and_soa_exhaustive_on_full_two_by_two() {
    let class = Arc::new(gen_full(2, 2, 4096).unwrap());
    let mut worst_bsoa = 0;
    let mut worst_soa = 0;
    for (_, stream) in realizable_streams(&class, 4) {
        let mut bsoa = Learner::Bandit(Box::new(Bsoa::new(class.clone())));
        worst_bsoa = worst_bsoa.max(play(&class, &mut bsoa, &stream, Protocol::Bandit));
        let mut soa = Learner::Full(Box::new(Soa::new(class.clone())));
        worst_soa = worst_soa.max(play(&class, &mut soa, &stream, Protocol::Full));
    }
    assert_eq!(worst_bsoa, 2);
    assert_eq!(worst_soa, 2);
}

#[test]
fn bsoa_on_constants_four() {
    let class = Arc::new(gen_constants(4, 1).unwrap());
    let worst = realizable_streams(&class, 6)
        .into_iter()
        .map(|(_, s)| play(&class, &mut Learner::Bandit(Box::new(Bsoa::new(class.clone()))), &s, Protocol::Bandit))
        .max()
        .unwrap();
    assert_eq!(worst, 3);
}

#[test]
fn soa_on_constants_makes_at_most_one_mistake() {
    for n in 1..=4 {
        let class = Arc::new(gen_constants(n, 2).unwrap());
        for (_, s) in realizable_streams(&class, 4) {
            let mut soa = Learner::Full(Box::new(Soa::new(class.clone())));
            assert!(play(&class, &mut soa, &s, Protocol::Full) <= 1);
        }
    }
}

#[test]
fn random_consistent_on_singleton_matches_bsoa() {
    let base = gen_full(2, 2, 4096).unwrap();
    let single = Arc::new(
        HypothesisClass::new(
            base.instance_names().to_vec(),
            base.label_names().to_vec(),
            vec!["only".into()],
            vec![base.row(1).to_vec()],
        )
        .unwrap(),
    );
    for (_, s) in realizable_streams(&single, 4) {
        let mut a = Bsoa::new(single.clone());
        let mut b = RandomConsistent::new(single.clone(), 99);
        for e in &s.examples {
            let (ya, yb) = (a.predict(e.x).unwrap(), b.predict(e.x).unwrap());
            assert_eq!(ya, yb);
            a.observe_loss(e.x, ya, ya == e.y).unwrap();
            b.observe_loss(e.x, yb, yb == e.y).unwrap();
        }
    }
}

#[test]
fn adaptive_against_singleton_forces_nothing() {
    let class = Arc::new(gen_constants(1, 3).unwrap());
    let mut bsoa = Learner::Bandit(Box::new(Bsoa::new(class.clone())));
    let adv = AdaptiveBlAdversary::new(class.clone()).unwrap();
    let trace = run_game(&class, &mut bsoa, Opponent::Adaptive(adv), Protocol::Bandit, 5).unwrap();
    assert_eq!(trace.cumulative_loss(), 0);
}

fn small_class() -> impl Strategy<Value = HypothesisClass> {
    (1usize..=3, 2usize..=4, any::<u64>()).prop_flat_map(|(m, k, seed)| {
        let max_n = k.pow(m as u32).min(8);
        (1..=max_n).prop_map(move |n| gen_random(m, k, n, seed).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bsoa_potential_drops_on_every_mistake(class in small_class(), h_seed in any::<u64>(), xs in prop::collection::vec(0u32..3, 1..30)) {
        let class = Arc::new(class);
        let h = (h_seed % class.num_hypotheses() as u64) as usize;
        let xs: Vec<InstanceId> = xs.into_iter().map(|x| InstanceId(x % class.num_instances() as u32)).collect();
        let bl = bldim(&VersionSpace::full(class.clone()));
        let mut learner = Bsoa::new(class.clone());
        let mut mistakes = 0;
        for &x in &xs {
            let before = learner.potential();
            let y = learner.predict(x).unwrap();
            let correct = y == class.eval(h, x);
            learner.observe_loss(x, y, correct).unwrap();
            let after = learner.potential();
            prop_assert!(after <= before);
            if !correct {
                mistakes += 1;
                prop_assert!(after < before);
            }
        }
        prop_assert!(mistakes <= bl);
        prop_assert_eq!(learner.resets(), 0);
    }

    #[test]
    fn soa_mistakes_at_most_ldim(class in small_class(), h_seed in any::<u64>(), xs in prop::collection::vec(0u32..3, 1..30)) {
        let class = Arc::new(class);
        let h = (h_seed % class.num_hypotheses() as u64) as usize;
        let xs: Vec<InstanceId> = xs.into_iter().map(|x| InstanceId(x % class.num_instances() as u32)).collect();
        let stream = Stream::labeled_by(&class, h, &xs);
        let mut soa = Learner::Full(Box::new(Soa::new(class.clone())));
        prop_assert!(play(&class, &mut soa, &stream, Protocol::Full) as i32 <= ldim(&VersionSpace::full(class.clone())));
    }

    #[test]
    fn adaptive_adversary_stays_realizable(class in small_class(), horizon in 0usize..8, seed in any::<u64>()) {
        let class = Arc::new(class);
        let bl = bldim(&VersionSpace::full(class.clone())) as usize;
        for deterministic in [true, false] {
            let mut learner = if deterministic {
                Learner::Bandit(Box::new(Bsoa::new(class.clone())))
            } else {
                Learner::Bandit(Box::new(RandomConsistent::with_fixed_seed(class.clone(), seed)))
            };
            let adv = AdaptiveBlAdversary::new(class.clone()).unwrap();
            let trace = run_game(&class, &mut learner, Opponent::Adaptive(adv), Protocol::Bandit, horizon).unwrap();
            let h = trace.committed.unwrap();
            for r in &trace.rounds {
                prop_assert_eq!(r.truth, class.eval(h, r.x));
                prop_assert_eq!(r.loss, r.prediction != r.truth);
            }
            let forced = bl.min(horizon) as u64;
            if deterministic {
                prop_assert_eq!(trace.cumulative_loss(), forced);
            } else {
                prop_assert!(trace.cumulative_loss() >= forced);
            }
            prop_assert_eq!(regret(&trace, &class).best_loss, 0);
        }
    }

    #[test]
    fn wrapper_regret_at_most_inner_regret(class in small_class(), extra in 0usize..2, seed in any::<u64>(), raw in prop::collection::vec((0u32..3, 0u32..6), 1..25)) {
        let class = with_extra_labels(&class, extra).unwrap();
        let class = Arc::new(class);
        let stream = Stream::new(raw.iter().map(|&(x, y)| StreamExample {
            x: InstanceId(x % class.num_instances() as u32),
            y: LabelId(y % class.num_labels() as u32),
        }).collect());
        let (bar, table) = remap_build(&class).unwrap();
        let bar = Arc::new(bar);
        let table = Arc::new(table);
        let scored = Arc::new(with_extra_labels(&bar, 1).unwrap());
        let remapped = remap_stream(&stream, &table);
        let horizon = stream.len();

        let inner = || -> Box<dyn BanditLearner> {
            Box::new(Exp4::with_support(bar.clone(), horizon, table.support(), Exp4Config::default(), seed).unwrap())
        };
        let mut wrapped = Learner::Bandit(Box::new(RemapWrapper::new(inner(), table.clone())));
        let outer = run_game(&class, &mut wrapped, Opponent::Oblivious(stream.clone()), Protocol::Bandit, horizon).unwrap();

        // the inner learner never predicts the sentinel, so it can play the scored class directly
        let mut alone = Learner::Bandit(inner());
        let inside = run_game(&scored, &mut alone, Opponent::Oblivious(remapped), Protocol::Bandit, horizon).unwrap();

        for ((o, i), e) in outer.rounds.iter().zip(&inside.rounds).zip(&stream.examples) {
            if table.forward(e.x, e.y).is_some() {
                prop_assert_eq!(o.loss, i.loss);
            } else {
                prop_assert!(o.loss);
            }
        }
        prop_assert!(regret(&outer, &class).regret <= regret(&inside, &scored).regret);
    }
}
