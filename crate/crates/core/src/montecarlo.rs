//! Seeded Monte Carlo estimates of pattern probabilities.
//!
//! Run `r` draws its outcome string from `ChaCha8Rng::seed_from_u64(seed)`
//! switched to stream `r`, so a run's outcome depends only on `(seed, r)`.
//! Serial and parallel execution therefore produce identical hit counts, and
//! the first `N` runs of a longer simulation are exactly a simulation of `N`
//! runs.

use std::ops::Range;

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exec::{sum_chunks, Execution};
use crate::oracle::segment_allows;
use crate::pattern::{PatternSpec, Placement};
use crate::probability::{self, CoinModel};
use crate::{Error, ExactRational, Result};

/// Identity of the generator, reported alongside results.
pub const RNG_NAME: &str = "ChaCha8Rng/seed_from_u64(seed)/stream=run_index";

/// Events use the same placement vocabulary as [`PatternSpec`].
pub type EventSpec = Placement;

const CHUNK: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialEstimate {
    pub hits: u64,
    pub trials: u64,
    pub estimate: f64,
    pub std_error: f64,
    pub seed: u64,
}

impl TrialEstimate {
    fn new(hits: u64, trials: u64, seed: u64) -> Self {
        let estimate = hits as f64 / trials as f64;
        let std_error = (estimate * (1.0 - estimate) / trials as f64).sqrt();
        TrialEstimate { hits, trials, estimate, std_error, seed }
    }
}

/// Draws symbols from a [`CoinModel`].
#[derive(Debug, Clone)]
enum Sampler {
    /// Face 1 with probability `p`, otherwise uniform over the other faces.
    Distinguished { d: u8, p: f64 },
    /// Cumulative distribution over all faces.
    Profile(Vec<f64>),
}

impl Sampler {
    fn new(model: &CoinModel) -> Result<Self> {
        let d = model.outcome_count();
        if d > u8::MAX as u32 {
            return Err(Error::validation(format!("at most 255 outcomes can be simulated, got {d}")));
        }
        let to_f64 = |r: &ExactRational| {
            r.to_f64().ok_or_else(|| Error::validation(format!("{r} is not representable")))
        };
        Ok(match model.bias_profile() {
            Some(profile) => {
                let mut acc = 0.0;
                let mut cum = Vec::with_capacity(profile.len());
                for p in profile {
                    acc += to_f64(p)?;
                    cum.push(acc);
                }
                Sampler::Profile(cum)
            }
            None => Sampler::Distinguished { d: d as u8, p: to_f64(model.p_one())? },
        })
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> u8 {
        let u: f64 = rng.random();
        match self {
            Sampler::Distinguished { d, p } => {
                if u < *p {
                    1
                } else if *d == 2 {
                    0
                } else {
                    let other = rng.random_range(0..d - 1);
                    if other >= 1 { other + 1 } else { other }
                }
            }
            Sampler::Profile(cum) => {
                cum.iter().position(|&c| u < c).unwrap_or(cum.len() - 1) as u8
            }
        }
    }
}

struct Simulation {
    sampler: Sampler,
    base: ChaCha8Rng,
    length: usize,
    event: Placement,
    seed: u64,
}

impl Simulation {
    fn new(model: &CoinModel, m: u32, event: EventSpec, seed: u64) -> Result<Self> {
        PatternSpec::single(model.outcome_count(), m, event)?;
        Ok(Simulation {
            sampler: Sampler::new(model)?,
            base: ChaCha8Rng::seed_from_u64(seed),
            length: m as usize,
            event,
            seed,
        })
    }

    fn hits_in(&self, runs: Range<u64>) -> u64 {
        let mut symbols = vec![0u8; self.length];
        let mut hits = 0;
        for run in runs {
            let mut rng = self.base.clone();
            rng.set_stream(run);
            for s in symbols.iter_mut() {
                *s = self.sampler.draw(&mut rng);
            }
            if segment_allows(&symbols, self.event) {
                hits += 1;
            }
        }
        hits
    }

    fn count(&self, runs: Range<u64>, exec: Execution) -> u64 {
        sum_chunks(runs, CHUNK, exec, |r| self.hits_in(r))
    }
}

/// Estimates the probability of `event` over `runs` independent strings of
/// `m` draws from `model`.
pub fn simulate(
    model: &CoinModel,
    m: u32,
    event: EventSpec,
    runs: u64,
    seed: u64,
    exec: Execution,
) -> Result<TrialEstimate> {
    if runs == 0 {
        return Err(Error::validation("at least one run is required"));
    }
    let sim = Simulation::new(model, m, event, seed)?;
    Ok(TrialEstimate::new(sim.count(0..runs, exec), runs, sim.seed))
}

/// One row of a [`convergence_report`].
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergencePoint {
    pub estimate: TrialEstimate,
    pub exact: ExactRational,
    pub abs_error: f64,
}

/// Estimates at each run count of `schedule`, all prefixes of one stream of
/// runs, next to the exact probability.
pub fn convergence_report(
    model: &CoinModel,
    m: u32,
    event: EventSpec,
    schedule: &[u64],
    seed: u64,
    exec: Execution,
) -> Result<Vec<ConvergencePoint>> {
    if schedule.is_empty() {
        return Err(Error::validation("the run schedule is empty"));
    }
    if schedule[0] == 0 || schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::validation("the run schedule must be positive and increasing"));
    }
    let sim = Simulation::new(model, m, event, seed)?;
    let exact = probability::prob_event(model, m, event)?;
    let exact_f = exact.to_f64().unwrap_or(f64::NAN);
    let mut hits = 0;
    let mut done = 0;
    let mut out = Vec::with_capacity(schedule.len());
    for &runs in schedule {
        hits += sim.count(done..runs, exec);
        done = runs;
        let estimate = TrialEstimate::new(hits, runs, seed);
        out.push(ConvergencePoint {
            abs_error: (estimate.estimate - exact_f).abs(),
            estimate,
            exact: exact.clone(),
        });
    }
    Ok(out)
}
