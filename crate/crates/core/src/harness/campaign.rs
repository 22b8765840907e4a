use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use crate::boolfn::enumerate_orbits;
use crate::error::{Error, Result};
use crate::evolution::{
    run_fp_sst, run_sst, BitstringProblem, ConstructionProblem, FloatProblem, GpDecoding,
    GpProblem, Problem, RsBitstringProblem, RunOutcome,
};
use crate::fitness::{parse_seed_groups, random_seed_groups, ConstructionFitness, SEED_GROUPS};
use crate::splitmix64;

use super::config::{Algorithm, Encoding, ExperimentConfig};
use super::record::{format_fitness, RecordWriter, RunRecord};

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// Seed of run `k`. Distinct `k` give distinct seeds: the step is odd and
/// the mix is a bijection.
pub fn derive_seed(master: u64, k: u64) -> u64 {
    splitmix64(master.wrapping_add(k.wrapping_mul(GOLDEN_GAMMA)))
}

/// Seed of the generator for default construction seed groups; independent
/// of every run seed index used in practice.
fn seed_group_seed(master: u64) -> u64 {
    derive_seed(master, u64::MAX)
}

fn construction_problem(cfg: &ExperimentConfig) -> Result<ConstructionProblem> {
    let groups = match &cfg.seed_groups {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?;
            parse_seed_groups(&text)?
        }
        None => random_seed_groups(cfg.n - 2, cfg.seed_group_count, seed_group_seed(cfg.seed))?,
    };
    if groups.len() != cfg.seed_group_count {
        return Err(Error::Config(format!(
            "{} seed groups loaded, {} configured",
            groups.len(),
            cfg.seed_group_count
        )));
    }
    if groups[0].n() + 2 != cfg.n {
        return Err(Error::Config(format!(
            "seed functions have {} variables, n = {} needs {}",
            groups[0].n(),
            cfg.n,
            cfg.n - 2
        )));
    }
    let fitness = if cfg.seed_group_count == SEED_GROUPS {
        ConstructionFitness::new(&groups)?
    } else {
        ConstructionFitness::with_any_group_count(&groups)?
    };
    Ok(ConstructionProblem::new(fitness, cfg.gp.clone()))
}

fn to_record<P: Problem>(
    problem: &P,
    cfg: &ExperimentConfig,
    run_id: u32,
    out: RunOutcome<P::Genotype>,
) -> RunRecord {
    RunRecord {
        run_id,
        seed: out.seed,
        n: cfg.n,
        encoding: cfg.encoding.name().into(),
        algo: cfg.algo.name().into(),
        ls: cfg.ls.name().into(),
        pop_size: cfg.pop_size,
        budget: cfg.budget,
        evals_used: out.evals_used,
        best_fitness: format_fitness(&out.best.fitness),
        best_nl: out.best.fitness.nl(),
        wall_time_s: (out.wall_time.as_secs_f64() * 1e3).round() / 1e3,
        best_solution: problem.describe(&out.best.genotype),
    }
}

fn campaign<P: Problem>(
    problem: &P,
    cfg: &ExperimentConfig,
    run: impl Fn(&P, &crate::evolution::SstConfig) -> Result<RunOutcome<P::Genotype>> + Sync,
) -> Result<Vec<RunRecord>> {
    let writer = match &cfg.out {
        Some(path) => Some(Mutex::new(RecordWriter::append(path)?)),
        None => None,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    let mut records = pool.install(|| {
        (0..cfg.runs)
            .into_par_iter()
            .map(|k| {
                let seed = derive_seed(cfg.seed, k as u64);
                let outcome = run(problem, &cfg.sst_config(seed))?;
                let record = to_record(problem, cfg, k as u32, outcome);
                if let Some(w) = &writer {
                    w.lock().expect("writer poisoned").write(&record)?;
                }
                Ok(record)
            })
            .collect::<Result<Vec<_>>>()
    })?;
    records.sort_by_key(|r| r.run_id);
    Ok(records)
}

/// Runs `cfg.runs` independent runs on a pool of `cfg.threads` workers.
/// Run `k` uses `derive_seed(cfg.seed, k)`. With an output path, each
/// record is appended and flushed as soon as its run finishes.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<RunRecord>> {
    cfg.validate()?;
    let gp = cfg.gp.clone();
    match cfg.encoding {
        Encoding::Tt => campaign(&BitstringProblem::new(cfg.n)?, cfg, run_sst),
        Encoding::TtRi => campaign(&RsBitstringProblem::new(cfg.n)?, cfg, run_sst),
        Encoding::Fp => {
            let p = FloatProblem::new(cfg.n, cfg.dec)?;
            match cfg.algo {
                Algorithm::FpSst => campaign(&p, cfg, run_fp_sst),
                Algorithm::Sst => campaign(&p, cfg, run_sst),
            }
        }
        Encoding::Gp => campaign(
            &GpProblem::new(cfg.n, GpDecoding::Direct, gp)?,
            cfg,
            run_sst,
        ),
        Encoding::GpPart | Encoding::GpFull => {
            let decoding = if cfg.encoding == Encoding::GpPart {
                GpDecoding::Part
            } else {
                GpDecoding::Full
            };
            let orbits = Arc::new(enumerate_orbits(cfg.n)?);
            campaign(&GpProblem::with_orbits(orbits, decoding, gp)?, cfg, run_sst)
        }
        Encoding::GpScnd => campaign(&construction_problem(cfg)?, cfg, run_sst),
    }
}
