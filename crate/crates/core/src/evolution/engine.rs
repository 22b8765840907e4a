//! Steady-state 3-tournament elimination with optional local search.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::seq::index::sample;
use rand::Rng;
use rand::SeedableRng;

use crate::error::{Error, Result};
use crate::fitness::FitnessValue;

use super::problem::{EvoRng, FloatProblem, Problem};

#[derive(Clone, Debug)]
pub struct Individual<G> {
    pub genotype: G,
    pub fitness: FitnessValue,
    pub phenotype_hash: u64,
}

/// Fixed-size multiset of individuals.
#[derive(Clone, Debug)]
pub struct Population<G> {
    individuals: Vec<Individual<G>>,
}

impl<G> Population<G> {
    pub fn new(individuals: Vec<Individual<G>>) -> Self {
        Population { individuals }
    }

    pub fn len(&self) -> usize {
        self.individuals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.individuals.is_empty()
    }

    pub fn individuals(&self) -> &[Individual<G>] {
        &self.individuals
    }

    pub fn get(&self, i: usize) -> &Individual<G> {
        &self.individuals[i]
    }

    pub fn replace(&mut self, i: usize, ind: Individual<G>) -> Individual<G> {
        std::mem::replace(&mut self.individuals[i], ind)
    }

    /// Index of the first individual with maximal fitness.
    pub fn best_index(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (i, ind) in self.individuals.iter().enumerate() {
            if best.is_none_or(|b| ind.fitness > self.individuals[b].fitness) {
                best = Some(i);
            }
        }
        best
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum LsMode {
    #[default]
    None,
    /// Random mutations, restarting the trial counter on improvement.
    Ls1,
    /// First-improvement single-bit flips until a local optimum.
    Ls2,
    /// `Ls1` followed by `Ls2`.
    Ls3,
}

impl LsMode {
    pub fn name(self) -> &'static str {
        match self {
            LsMode::None => "none",
            LsMode::Ls1 => "ls1",
            LsMode::Ls2 => "ls2",
            LsMode::Ls3 => "ls3",
        }
    }

    pub fn needs_bit_access(self) -> bool {
        matches!(self, LsMode::Ls2 | LsMode::Ls3)
    }
}

impl fmt::Display for LsMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LsMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "none" => Ok(LsMode::None),
            "ls1" => Ok(LsMode::Ls1),
            "ls2" => Ok(LsMode::Ls2),
            "ls3" => Ok(LsMode::Ls3),
            _ => Err(Error::Config(format!("unknown local search mode '{s}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SstConfig {
    pub pop_size: usize,
    pub p_mut: f64,
    /// Fitness evaluations, initial population and local search included.
    pub budget: u64,
    pub time_limit: Option<Duration>,
    pub ls: LsMode,
    /// Consecutive non-improving mutations that end one LS1 pass.
    pub ls_trials: usize,
    /// Share of the population, besides the best, refined each generation.
    pub ls_fraction: f64,
    pub seed: u64,
}

impl Default for SstConfig {
    fn default() -> Self {
        SstConfig {
            pop_size: 100,
            p_mut: 0.5,
            budget: 1_000_000,
            time_limit: None,
            ls: LsMode::None,
            ls_trials: 25,
            ls_fraction: 0.05,
            seed: 0,
        }
    }
}

impl SstConfig {
    pub fn validate(&self) -> Result<()> {
        if self.pop_size < 3 {
            return Err(Error::PopulationTooSmall(self.pop_size));
        }
        if !(0.0..=1.0).contains(&self.p_mut) {
            return Err(Error::Config(format!(
                "p_mut {} outside [0, 1]",
                self.p_mut
            )));
        }
        if self.budget < self.pop_size as u64 {
            return Err(Error::Config(format!(
                "budget {} is smaller than the population size {}",
                self.budget, self.pop_size
            )));
        }
        if self.ls_trials == 0 {
            return Err(Error::Config("ls_trials must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.ls_fraction) {
            return Err(Error::Config(format!(
                "ls_fraction {} outside [0, 1]",
                self.ls_fraction
            )));
        }
        Ok(())
    }

    /// Individuals besides the best refined per generation.
    pub fn ls_extra(&self) -> usize {
        ((self.ls_fraction * self.pop_size as f64).ceil() as usize).min(self.pop_size - 1)
    }
}

/// Evaluates genotypes against a shared budget and deadline, remembering
/// the best individual seen.
pub struct Evaluator<'p, P: Problem> {
    problem: &'p P,
    scratch: P::Scratch,
    used: u64,
    budget: u64,
    deadline: Option<Instant>,
    best: Option<Individual<P::Genotype>>,
}

impl<'p, P: Problem> Evaluator<'p, P> {
    pub fn new(problem: &'p P, budget: u64, deadline: Option<Instant>) -> Self {
        Evaluator {
            problem,
            scratch: problem.scratch(),
            used: 0,
            budget,
            deadline,
            best: None,
        }
    }

    pub fn problem(&self) -> &'p P {
        self.problem
    }

    pub fn evaluate(&mut self, genotype: P::Genotype) -> Individual<P::Genotype> {
        let e = self.problem.evaluate(&genotype, &mut self.scratch);
        self.used += 1;
        let ind = Individual {
            genotype,
            fitness: e.fitness,
            phenotype_hash: e.phenotype_hash,
        };
        if self.best.as_ref().is_none_or(|b| ind.fitness > b.fitness) {
            self.best = Some(ind.clone());
        }
        ind
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn exhausted(&self) -> bool {
        self.used >= self.budget || self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    pub fn best(&self) -> Option<&Individual<P::Genotype>> {
        self.best.as_ref()
    }
}

/// Position of the lowest of three fitnesses, ties broken uniformly.
pub fn select_worst<R: Rng + ?Sized>(f: [FitnessValue; 3], rng: &mut R) -> usize {
    let min = *f.iter().min().expect("three values");
    let ties: Vec<usize> = (0..3).filter(|&k| f[k] == min).collect();
    ties[rng.random_range(0..ties.len())]
}

/// One breeding step. Returns the population index that was replaced.
pub fn sst_step<P: Problem>(
    pop: &mut Population<P::Genotype>,
    ev: &mut Evaluator<'_, P>,
    p_mut: f64,
    rng: &mut EvoRng,
) -> Result<usize> {
    if pop.len() < 3 {
        return Err(Error::PopulationTooSmall(pop.len()));
    }
    let picked = sample(rng, pop.len(), 3);
    let idx = [picked.index(0), picked.index(1), picked.index(2)];
    let worst = select_worst(idx.map(|i| pop.get(i).fitness), rng);
    let parents: Vec<usize> = (0..3).filter(|&k| k != worst).map(|k| idx[k]).collect();
    let problem = ev.problem();
    let mut child = problem.crossover(
        &pop.get(parents[0]).genotype,
        &pop.get(parents[1]).genotype,
        rng,
    );
    if rng.random_bool(p_mut) {
        problem.mutate(&mut child, rng);
    }
    let child = ev.evaluate(child);
    pop.replace(idx[worst], child);
    Ok(idx[worst])
}

/// LS1: random mutations of the current solution; a strict improvement is
/// adopted and resets the counter; stops after `trials` consecutive
/// failures or when the budget runs out.
pub fn ls_mutation<P: Problem>(
    mut ind: Individual<P::Genotype>,
    trials: usize,
    ev: &mut Evaluator<'_, P>,
    rng: &mut EvoRng,
) -> Individual<P::Genotype> {
    let mut failures = 0;
    while failures < trials && !ev.exhausted() {
        let mut g = ind.genotype.clone();
        ev.problem().mutate(&mut g, rng);
        let cand = ev.evaluate(g);
        if cand.fitness > ind.fitness {
            ind = cand;
            failures = 0;
        } else {
            failures += 1;
        }
    }
    ind
}

/// LS2: cycles through single-bit flips, keeping each strict improvement,
/// until a full cycle brings none or the budget runs out.
pub fn ls_bitflip<P: Problem>(
    mut ind: Individual<P::Genotype>,
    ev: &mut Evaluator<'_, P>,
) -> Result<Individual<P::Genotype>> {
    let len = ev.problem().flip_len().ok_or(Error::NotBitstring)?;
    let mut i = 0;
    let mut since_improvement = 0;
    while since_improvement < len && !ev.exhausted() {
        let mut g = ind.genotype.clone();
        ev.problem().flip(&mut g, i);
        let cand = ev.evaluate(g);
        if cand.fitness > ind.fitness {
            ind = cand;
            since_improvement = 0;
        } else {
            since_improvement += 1;
        }
        i = (i + 1) % len;
    }
    Ok(ind)
}

/// LS3: [`ls_mutation`] then [`ls_bitflip`].
pub fn ls_combined<P: Problem>(
    ind: Individual<P::Genotype>,
    trials: usize,
    ev: &mut Evaluator<'_, P>,
    rng: &mut EvoRng,
) -> Result<Individual<P::Genotype>> {
    let ind = ls_mutation(ind, trials, ev, rng);
    ls_bitflip(ind, ev)
}

pub fn local_search<P: Problem>(
    mode: LsMode,
    ind: Individual<P::Genotype>,
    trials: usize,
    ev: &mut Evaluator<'_, P>,
    rng: &mut EvoRng,
) -> Result<Individual<P::Genotype>> {
    match mode {
        LsMode::None => Ok(ind),
        LsMode::Ls1 => Ok(ls_mutation(ind, trials, ev, rng)),
        LsMode::Ls2 => ls_bitflip(ind, ev),
        LsMode::Ls3 => ls_combined(ind, trials, ev, rng),
    }
}

#[derive(Clone, Debug)]
pub struct RunOutcome<G> {
    pub best: Individual<G>,
    pub evals_used: u64,
    pub steps: u64,
    pub seed: u64,
    pub wall_time: Duration,
}

/// Random initial population, then breeding steps until the budget or time
/// limit is reached. With local search enabled, every `pop_size` steps the
/// best individual and `ls_extra()` others are refined in place.
pub fn run_sst<P: Problem>(problem: &P, cfg: &SstConfig) -> Result<RunOutcome<P::Genotype>> {
    cfg.validate()?;
    if cfg.ls.needs_bit_access() && problem.flip_len().is_none() {
        return Err(Error::NotBitstring);
    }
    let start = Instant::now();
    let mut rng = EvoRng::seed_from_u64(cfg.seed);
    let mut ev = Evaluator::new(problem, cfg.budget, cfg.time_limit.map(|t| start + t));

    let mut individuals = Vec::with_capacity(cfg.pop_size);
    for _ in 0..cfg.pop_size {
        let g = problem.random_genotype(&mut rng);
        individuals.push(ev.evaluate(g));
    }
    let mut pop = Population::new(individuals);

    let mut steps = 0u64;
    while !ev.exhausted() {
        sst_step(&mut pop, &mut ev, cfg.p_mut, &mut rng)?;
        steps += 1;
        if cfg.ls != LsMode::None && steps % cfg.pop_size as u64 == 0 {
            refine_generation(&mut pop, cfg, &mut ev, &mut rng)?;
        }
    }

    Ok(RunOutcome {
        best: ev.best().expect("population evaluated").clone(),
        evals_used: ev.used(),
        steps,
        seed: cfg.seed,
        wall_time: start.elapsed(),
    })
}

fn refine_generation<P: Problem>(
    pop: &mut Population<P::Genotype>,
    cfg: &SstConfig,
    ev: &mut Evaluator<'_, P>,
    rng: &mut EvoRng,
) -> Result<()> {
    let best = pop.best_index().expect("non-empty population");
    let mut targets = vec![best];
    // Draw from the other indices, shifting past the best.
    targets.extend(
        sample(rng, pop.len() - 1, cfg.ls_extra())
            .into_iter()
            .map(|i| if i >= best { i + 1 } else { i }),
    );
    for i in targets {
        if ev.exhausted() {
            break;
        }
        let refined = local_search(cfg.ls, pop.get(i).clone(), cfg.ls_trials, ev, rng)?;
        pop.replace(i, refined);
    }
    Ok(())
}

/// The steady-state GA over real vectors.
pub fn run_fp_sst(problem: &FloatProblem, cfg: &SstConfig) -> Result<RunOutcome<Vec<f64>>> {
    run_sst(problem, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::Bits;
    use crate::boolfn::is_rotation_symmetric;
    use crate::evolution::{BitstringProblem, GpDecoding, GpProblem, RsBitstringProblem};
    use crate::gp::GpConfig;

    fn fv(numer: u64) -> FitnessValue {
        FitnessValue::from_ratio(numer, 1).unwrap()
    }

    #[test]
    fn worst_of_three() {
        let mut rng = EvoRng::seed_from_u64(0);
        assert_eq!(select_worst([fv(5), fv(3), fv(8)], &mut rng), 1);
        let mut seen = [0u32; 3];
        for _ in 0..3000 {
            seen[select_worst([fv(2), fv(2), fv(2)], &mut rng)] += 1;
        }
        assert!(seen.iter().all(|&c| (850..1150).contains(&c)), "{seen:?}");
        for _ in 0..100 {
            let w = select_worst([fv(1), fv(4), fv(1)], &mut rng);
            assert!(w == 0 || w == 2);
        }
    }

    #[test]
    fn step_replaces_the_eliminated_individual() {
        let p = BitstringProblem::new(3).unwrap();
        let mut ev = Evaluator::new(&p, 100, None);
        let mut rng = EvoRng::seed_from_u64(1);
        let tables = ["00000000", "00010111", "00000001"];
        let inds: Vec<_> = tables
            .iter()
            .map(|s| ev.evaluate(Bits::from_bit_str(s).unwrap()))
            .collect();
        let mut pop = Population::new(inds);
        // Fitnesses 0.875, 0.875 and 2.5: one of the first two goes.
        let before = ev.used();
        let out = sst_step(&mut pop, &mut ev, 0.5, &mut rng).unwrap();
        assert!(out < 2);
        assert_eq!(ev.used(), before + 1);
        assert_eq!(pop.len(), 3);
        assert_eq!(pop.get(2).genotype, Bits::from_bit_str("00000001").unwrap());
        assert!(sst_step(
            &mut Population::new(pop.individuals()[..2].to_vec()),
            &mut ev,
            0.5,
            &mut rng
        )
        .is_err());
    }

    #[test]
    fn local_search_examples() {
        let p = BitstringProblem::new(2).unwrap();
        let mut rng = EvoRng::seed_from_u64(2);
        for _ in 0..50 {
            let mut ev = Evaluator::new(&p, 1000, None);
            let start = ev.evaluate(Bits::from_bit_str("0000").unwrap());
            let out = ls_mutation(start, 25, &mut ev, &mut rng);
            assert!(out.fitness.value() >= 1.0);
        }
        let mut ev = Evaluator::new(&p, 1000, None);
        let bent = ev.evaluate(Bits::from_bit_str("0001").unwrap());
        let out = ls_bitflip(bent.clone(), &mut ev).unwrap();
        assert_eq!(ev.used(), 1 + 4);
        assert_eq!(out.genotype, bent.genotype);
        // A bent function at n = 2 is a global optimum.
        let mut ev = Evaluator::new(&p, 1000, None);
        let out = ls_mutation(bent.clone(), 25, &mut ev, &mut rng);
        assert_eq!(ev.used(), 25);
        assert_eq!(out.fitness, bent.fitness);
        let mut ev = Evaluator::new(&p, 1000, None);
        assert_eq!(
            ls_combined(bent.clone(), 25, &mut ev, &mut rng)
                .unwrap()
                .fitness,
            bent.fitness
        );
    }

    #[test]
    fn bitflip_needs_bit_access() {
        let p = GpProblem::new(3, GpDecoding::Direct, GpConfig::default()).unwrap();
        let mut ev = Evaluator::new(&p, 10, None);
        let ind = ev.evaluate("x1".parse().unwrap());
        assert!(matches!(ls_bitflip(ind, &mut ev), Err(Error::NotBitstring)));
        let cfg = SstConfig {
            ls: LsMode::Ls2,
            budget: 1000,
            ..SstConfig::default()
        };
        assert!(matches!(run_sst(&p, &cfg), Err(Error::NotBitstring)));
    }

    #[test]
    fn local_search_is_monotone_and_budgeted() {
        let p = BitstringProblem::new(6).unwrap();
        let mut rng = EvoRng::seed_from_u64(3);
        for budget in [1u64, 10, 100, 10_000] {
            let mut ev = Evaluator::new(&p, budget, None);
            let start = ev.evaluate(p.random_genotype(&mut rng));
            let a = ls_mutation(start.clone(), 25, &mut ev, &mut rng);
            let b = ls_bitflip(a.clone(), &mut ev).unwrap();
            assert!(a.fitness >= start.fitness && b.fitness >= a.fitness);
            assert!(ev.used() <= budget.max(1));
            if budget == 10_000 {
                // A local optimum is a fixpoint of the flip search.
                let mut ev2 = Evaluator::new(&p, 10_000, None);
                let again = ls_bitflip(b.clone(), &mut ev2).unwrap();
                assert_eq!(again.genotype, b.genotype);
                assert_eq!(ev2.used(), 64);
            }
        }
    }

    #[test]
    fn config_validation() {
        let ok = SstConfig::default();
        assert!(ok.validate().is_ok());
        assert_eq!(ok.ls_extra(), 5);
        assert!(SstConfig {
            pop_size: 2,
            ..ok.clone()
        }
        .validate()
        .is_err());
        assert!(SstConfig {
            p_mut: 1.5,
            ..ok.clone()
        }
        .validate()
        .is_err());
        assert!(SstConfig {
            budget: 50,
            ..ok.clone()
        }
        .validate()
        .is_err());
        assert!(SstConfig {
            ls_trials: 0,
            ..ok.clone()
        }
        .validate()
        .is_err());
        assert_eq!("LS3".parse::<LsMode>().unwrap(), LsMode::Ls3);
        assert!("ls4".parse::<LsMode>().is_err());
    }

    #[test]
    fn runs_are_deterministic_and_monotone() {
        let p = BitstringProblem::new(5).unwrap();
        let cfg = SstConfig {
            pop_size: 20,
            budget: 3000,
            ls: LsMode::Ls3,
            seed: 7,
            ..SstConfig::default()
        };
        let a = run_sst(&p, &cfg).unwrap();
        let b = run_sst(&p, &cfg).unwrap();
        assert_eq!(a.best.genotype, b.best.genotype);
        assert_eq!((a.evals_used, a.steps), (b.evals_used, b.steps));
        assert_eq!(a.evals_used, 3000);
        let c = run_sst(
            &p,
            &SstConfig {
                seed: 8,
                ..cfg.clone()
            },
        )
        .unwrap();
        assert_eq!(c.evals_used, 3000);
    }

    #[test]
    fn initialization_only_budget() {
        let p = BitstringProblem::new(5).unwrap();
        let cfg = SstConfig {
            pop_size: 30,
            budget: 30,
            seed: 1,
            ..SstConfig::default()
        };
        let out = run_sst(&p, &cfg).unwrap();
        assert_eq!((out.evals_used, out.steps), (30, 0));
        let mut rng = EvoRng::seed_from_u64(1);
        let mut s = p.scratch();
        let best = (0..30)
            .map(|_| p.evaluate(&p.random_genotype(&mut rng), &mut s).fitness)
            .max()
            .unwrap();
        assert_eq!(out.best.fitness, best);
    }

    #[test]
    fn rs_population_stays_rotation_symmetric() {
        let p = RsBitstringProblem::new(7).unwrap();
        let mut rng = EvoRng::seed_from_u64(4);
        let mut ev = Evaluator::new(&p, 100_000, None);
        let inds = (0..20).map(|_| {
            let g = p.random_genotype(&mut rng);
            ev.evaluate(g)
        });
        let mut pop = Population::new(inds.collect());
        let mut best_so_far = ev.best().unwrap().fitness;
        for _ in 0..500 {
            sst_step(&mut pop, &mut ev, 0.5, &mut rng).unwrap();
            assert_eq!(pop.len(), 20);
            let b = ev.best().unwrap().fitness;
            assert!(b >= best_so_far);
            best_so_far = b;
        }
        for ind in pop.individuals() {
            assert!(is_rotation_symmetric(&p.phenotype(&ind.genotype).unwrap()));
        }
    }

    #[test]
    fn time_limit_stops_the_run() {
        let p = BitstringProblem::new(9).unwrap();
        let cfg = SstConfig {
            budget: u64::MAX,
            time_limit: Some(Duration::from_millis(200)),
            ..SstConfig::default()
        };
        let out = run_sst(&p, &cfg).unwrap();
        assert!(out.wall_time < Duration::from_secs(5));
        assert!(out.evals_used >= 100);
    }
}
