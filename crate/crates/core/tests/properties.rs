mod common;

use std::sync::Arc;

use boolforge::boolfn::{enumerate_orbits, walsh_transform};
use boolforge::evolution::{
    local_search, sst_step, BitstringProblem, Evaluator, EvoRng, FloatProblem, GpDecoding,
    GpProblem, Population, RsBitstringProblem,
};
use boolforge::fitness::fitness_nl;
use boolforge::gp::GpConfig;
use boolforge::harness::run_experiment;
use boolforge::{Encoding, ExperimentConfig, LsMode, Problem, TruthTable};
use common::{is_rotation_invariant, rng};
use proptest::prelude::*;
use rand::SeedableRng;

fn rs_phenotypes_hold<P: Problem>(p: &P, seed: u64) {
    let mut r = EvoRng::seed_from_u64(seed);
    let a = p.random_genotype(&mut r);
    let b = p.random_genotype(&mut r);
    let mut child = p.crossover(&a, &b, &mut r);
    p.mutate(&mut child, &mut r);
    for g in [a, b, child] {
        let tt = p.phenotype(&g).expect("single phenotype");
        assert!(is_rotation_invariant(&tt));
        let mut scratch = p.scratch();
        assert_eq!(p.evaluate(&g, &mut scratch).fitness, fitness_nl(&tt));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parseval(n in 1usize..=11, seed: u64) {
        let tt = TruthTable::random(n, &mut rng(seed)).unwrap();
        prop_assert_eq!(walsh_transform(&tt).sum_of_squares(), 1u64 << (2 * n));
    }

    #[test]
    fn nonlinearity_is_affine_invariant(n in 2usize..=8, seed: u64, mask: usize) {
        let tt = TruthTable::random(n, &mut rng(seed)).unwrap();
        let l = TruthTable::linear(n, mask % tt.len()).unwrap();
        let shifted = TruthTable::from_fn(n, |x| tt.get(x) ^ l.get(x)).unwrap();
        prop_assert_eq!(fitness_nl(&tt).nl(), fitness_nl(&shifted).nl());
        prop_assert_eq!(fitness_nl(&tt), fitness_nl(&tt.complement()));
    }

    #[test]
    fn rs_encodings_yield_rotation_symmetric_functions(n in 3usize..=9, seed: u64) {
        let orbits = Arc::new(enumerate_orbits(n).unwrap());
        rs_phenotypes_hold(&RsBitstringProblem::with_orbits(orbits.clone()), seed);
        rs_phenotypes_hold(&FloatProblem::rotation_symmetric(orbits.clone(), 3).unwrap(), seed);
        for d in [GpDecoding::Part, GpDecoding::Full] {
            let p = GpProblem::with_orbits(orbits.clone(), d, GpConfig::default()).unwrap();
            rs_phenotypes_hold(&p, seed);
        }
    }

    #[test]
    fn sst_step_conserves_population(seed: u64, pop_size in 3usize..40, steps in 1usize..200) {
        let p = BitstringProblem::new(6).unwrap();
        let mut r = EvoRng::seed_from_u64(seed);
        let mut ev = Evaluator::new(&p, u64::MAX, None);
        let inds = (0..pop_size).map(|_| ev.evaluate(p.random_genotype(&mut r))).collect();
        let mut pop = Population::new(inds);
        for _ in 0..steps {
            let before = pop.get(pop.best_index().unwrap()).fitness;
            let replaced = sst_step(&mut pop, &mut ev, 0.5, &mut r).unwrap();
            prop_assert!(replaced < pop_size);
            prop_assert_eq!(pop.len(), pop_size);
            // Only the worst of three is eliminated, so the best survives.
            prop_assert!(pop.get(pop.best_index().unwrap()).fitness >= before);
        }
        prop_assert_eq!(ev.used(), (pop_size + steps) as u64);
    }

    #[test]
    fn local_search_never_worsens(seed: u64, mode_ix in 1usize..4, budget in 1u64..600) {
        let mode = [LsMode::None, LsMode::Ls1, LsMode::Ls2, LsMode::Ls3][mode_ix];
        let p = RsBitstringProblem::new(7).unwrap();
        let mut r = EvoRng::seed_from_u64(seed);
        let mut ev = Evaluator::new(&p, budget + 1, None);
        let start = ev.evaluate(p.random_genotype(&mut r));
        let before = start.fitness;
        let after = local_search(mode, start, 25, &mut ev, &mut r).unwrap();
        prop_assert!(after.fitness >= before);
        prop_assert!(ev.used() <= budget + 1);
        let tt = p.phenotype(&after.genotype).unwrap();
        prop_assert_eq!(fitness_nl(&tt), after.fitness);
    }
}

#[test]
fn campaigns_are_deterministic_for_every_encoding() {
    for enc in [
        Encoding::Tt,
        Encoding::TtRi,
        Encoding::Fp,
        Encoding::Gp,
        Encoding::GpPart,
        Encoding::GpFull,
        Encoding::GpScnd,
    ] {
        let cfg = ExperimentConfig {
            n: 5,
            encoding: enc,
            runs: 3,
            budget: 600,
            pop_size: 20,
            seed: 9,
            ..ExperimentConfig::default()
        };
        let strip = |mut v: Vec<boolforge::RunRecord>| {
            v.iter_mut().for_each(|r| r.wall_time_s = 0.0);
            v
        };
        let a = strip(run_experiment(&cfg).unwrap());
        let b = strip(
            run_experiment(&ExperimentConfig {
                threads: 3,
                ..cfg.clone()
            })
            .unwrap(),
        );
        assert_eq!(a, b, "{}", enc.name());
        for r in &a {
            assert_eq!(r.fitness().floor() as u64, r.best_nl);
            assert!(r.evals_used <= r.budget);
        }
    }
}
