//! Asynchronous Hopfield descent and the multi-restart solver driver.
//!
//! One sweep visits every neuron once in flat row-major order and applies
//! the threshold update `y_p <- step(sum_q W_hat[p][q] y_q - b_hat[p])`,
//! keeping the current state on a zero activation. Each accepted flip
//! strictly lowers the Lyapunov value, so a sweep with no flips is a fixed
//! point.
//!
//! The driver runs, per random restart: descend, record the candidate,
//! raise the objective mix `alpha` by a fixed step, and repeat until the
//! candidate's constraint-error count falls to the configured tolerance (or
//! an iteration cap). Every recorded candidate is repaired into a feasible
//! schedule and the minimum-tardiness repair over all restarts wins.

use std::time::{Duration, Instant};

use rand_core::RngCore;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{self, ProblemInstance, Schedule};
use crate::qp::{to_hopfield, HopfieldNetwork, QuadraticForm};
use crate::random;
use crate::scalar::Scalar;

/// Threshold update: 1 on positive activation, 0 on negative, unchanged on
/// an exact tie (which prevents limit cycles between equal-energy states).
#[inline]
pub fn step_function<T: Scalar>(activation: T, current: u8) -> u8 {
    if activation > T::zero() {
        1
    } else if activation < T::zero() {
        0
    } else {
        current
    }
}

/// One asynchronous sweep over all neurons in flat index order.
///
/// Returns the number of state flips. With `debug_assertions` every flip
/// re-evaluates the Lyapunov value and checks that it did not increase.
pub fn sweep<T: Scalar, N: HopfieldNetwork<T>>(net: &N, y: &mut [u8]) -> usize {
    let mut flips = 0;
    for p in 0..net.dim() {
        let act = net.activation(y, p);
        let next = step_function(act, y[p]);
        if next != y[p] {
            #[cfg(debug_assertions)]
            let before = net.energy(y);
            y[p] = next;
            flips += 1;
            #[cfg(debug_assertions)]
            {
                let after = net.energy(y);
                debug_assert!(
                    after <= before + lyapunov_slack(before),
                    "flip of neuron {p} raised the Lyapunov value: {before} -> {after}"
                );
            }
        }
    }
    flips
}

#[cfg(debug_assertions)]
fn lyapunov_slack<T: Scalar>(reference: T) -> T {
    T::from_f64(1e-6).unwrap() * (T::one() + reference.abs())
}

/// Outcome of [`hnn_descend`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Descent {
    pub state: Vec<u8>,
    pub sweeps: usize,
    /// True when the last sweep made no flips (a fixed point); false when
    /// the sweep cap stopped the descent.
    pub converged: bool,
}

/// Runs sweeps from `y0` until a fixed point or `max_sweeps`.
///
/// The Lyapunov value is checked per sweep: it must never increase.
pub fn hnn_descend<T: Scalar, N: HopfieldNetwork<T>>(
    net: &N,
    y0: &[u8],
    max_sweeps: usize,
) -> Result<Descent> {
    if y0.len() != net.dim() {
        return Err(Error::DimensionMismatch { expected: net.dim(), found: y0.len() });
    }
    let mut state = y0.to_vec();
    let mut energy = net.energy(&state);
    let tol = T::from_f64(1e-6).unwrap() * (T::one() + energy.abs());
    let mut sweeps = 0;
    let mut converged = false;
    while sweeps < max_sweeps {
        let flips = sweep(net, &mut state);
        sweeps += 1;
        let now = net.energy(&state);
        assert!(
            now <= energy + tol,
            "sweep {sweeps} raised the Lyapunov value: {energy} -> {now}"
        );
        energy = now;
        if flips == 0 {
            converged = true;
            break;
        }
    }
    Ok(Descent { state, sweeps, converged })
}

/// Independent fair-coin start vector (one low bit per neuron, see
/// [`crate::random::coin`]).
pub fn random_start<R: RngCore>(dim: usize, rng: &mut R) -> Vec<u8> {
    (0..dim).map(|_| random::coin(rng)).collect()
}

/// Repairs an arbitrary binary matrix into a feasible schedule.
///
/// Three passes: (1) per column, drop units of the lightest jobs (lowest
/// row index on ties) while the column exceeds capacity; (2) per row, drop
/// the rightmost units while the row exceeds its job size; (3) per row, add
/// units in the leftmost free slots whose column has spare capacity while
/// the row is short, appending empty columns when every existing one is
/// full. A feasible input passes through unchanged.
pub fn correct_schedule<T: Scalar>(
    instance: &ProblemInstance<T>,
    schedule: &Schedule,
) -> Schedule {
    assert_eq!(schedule.rows(), instance.n_jobs(), "row count must match the instance");
    let mut c = schedule.clone();
    let capacity = instance.capacity();

    // Pass 1: shed column overloads, cheapest weight first.
    for slot in 0..c.length() {
        let mut load = c.col_sum(slot);
        while load > capacity {
            let victim = (0..c.rows())
                .filter(|&job| c.get(job, slot))
                .min_by(|&a, &b| {
                    instance
                        .weight(a)
                        .partial_cmp(&instance.weight(b))
                        .expect("weights are finite")
                })
                .expect("an overloaded column has occupied rows");
            c.set(victim, slot, false);
            load -= 1;
        }
    }

    for job in 0..c.rows() {
        // Pass 2: trim surplus units from the right.
        let mut run = c.row_sum(job);
        while run > instance.size(job) {
            let rightmost = c
                .row(job)
                .iter()
                .rposition(|&v| v == 1)
                .expect("a row with surplus has units");
            c.set(job, rightmost, false);
            run -= 1;
        }
        // Pass 3: fill deficits in the leftmost feasible slots.
        while run < instance.size(job) {
            let free = (0..c.length())
                .find(|&slot| !c.get(job, slot) && c.col_sum(slot) < capacity);
            match free {
                Some(slot) => c.set(job, slot, true),
                None => {
                    let slot = c.length();
                    c.widen(1);
                    c.set(job, slot, true);
                }
            }
            run += 1;
        }
    }
    c
}

/// Solver parameters. Defaults follow the tuned values of the heuristic:
/// start the objective mix at 0.1 and raise it by 0.01 per iteration while
/// the row penalty and capacity penalty stay at 5, accept candidates once
/// their constraint-error count is at most 5, and take the best of 1000
/// random restarts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig<T> {
    pub alpha0: T,
    pub alpha_step: T,
    pub beta: T,
    pub gamma: T,
    /// Constraint-error tolerance ending the alpha sweep.
    pub error_tolerance: u64,
    pub restarts: usize,
    /// Cap on sweeps within one descent.
    pub max_sweeps: usize,
    /// Cap on alpha iterations within one restart.
    pub max_alpha_iters: usize,
    pub seed: u64,
}

impl<T: Scalar> Default for SolverConfig<T> {
    fn default() -> Self {
        Self {
            alpha0: T::from_f64(0.1).unwrap(),
            alpha_step: T::from_f64(0.01).unwrap(),
            beta: T::from_f64(5.0).unwrap(),
            gamma: T::from_f64(5.0).unwrap(),
            error_tolerance: 5,
            restarts: 1000,
            max_sweeps: 200,
            max_alpha_iters: 500,
            seed: 0,
        }
    }
}

impl<T: Scalar> SolverConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.alpha0 < T::zero() || !self.alpha0.is_finite() {
            return Err(Error::InvalidParameter("alpha0 must be non-negative".into()));
        }
        for (name, v) in [("alpha_step", self.alpha_step), ("beta", self.beta), ("gamma", self.gamma)]
        {
            if v <= T::zero() || !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be positive")));
            }
        }
        if self.max_sweeps == 0 || self.max_alpha_iters == 0 {
            return Err(Error::InvalidParameter("iteration caps must be positive".into()));
        }
        Ok(())
    }
}

/// Best feasible schedule found by [`solve`], with run statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult<T> {
    pub schedule: Schedule,
    pub twt: T,
    pub restarts_used: usize,
    /// Objective mix at which the winning candidate was produced.
    pub alpha_final: T,
    /// Total sweeps spent per restart, in restart order.
    pub sweeps_per_restart: Vec<usize>,
    pub wall_time: Duration,
}

struct RestartOutcome<T> {
    twt: T,
    schedule: Schedule,
    alpha: T,
    sweeps: usize,
}

/// Multi-restart heuristic solve.
///
/// Restart `r` seeds its own ChaCha8 stream with `seed + r` and draws one
/// random start; the alpha sweep then descends, records the fixed point,
/// repairs and scores it, and raises alpha, stopping early once the raw
/// fixed point's constraint-error count is at most `error_tolerance`.
/// Restarts run in parallel; the result is the minimum-tardiness repaired
/// candidate, ties resolved toward the earliest restart then the earliest
/// alpha iteration, so the outcome is independent of thread scheduling.
pub fn solve<T: Scalar>(
    instance: &ProblemInstance<T>,
    config: &SolverConfig<T>,
) -> Result<SolveResult<T>> {
    config.validate()?;
    if config.restarts == 0 {
        return Err(Error::InvalidParameter("restarts must be at least 1".into()));
    }
    let started = Instant::now();
    let horizon = instance.horizon();
    let shared = std::sync::Arc::new(instance.clone());
    let dim = instance.n_jobs() * horizon.length;

    let outcomes: Vec<RestartOutcome<T>> = (0..config.restarts)
        .into_par_iter()
        .map(|restart| {
            let mut rng = random::stream(config.seed.wrapping_add(restart as u64));
            let mut state = random_start(dim, &mut rng);
            let mut alpha = config.alpha0;
            let mut sweeps = 0;
            let mut best: Option<(T, Schedule, T)> = None;
            let mut prev_raw: Option<Vec<u8>> = None;
            for _ in 0..config.max_alpha_iters {
                let quad = QuadraticForm::from_shared(
                    std::sync::Arc::clone(&shared),
                    horizon.length,
                    horizon.full_capacity_cols,
                    alpha,
                    config.beta,
                    config.gamma,
                )
                .expect("horizon-derived form parameters are valid");
                let net = to_hopfield(&quad);
                let descent = hnn_descend(&net, &state, config.max_sweeps)
                    .expect("state tracks the form dimension");
                state = descent.state;
                sweeps += descent.sweeps;

                // Repair and score the candidate unless it repeats the
                // previous fixed point: repair is deterministic, so a
                // repeated state reproduces both its score and its
                // over-tolerance error count.
                if prev_raw.as_deref() != Some(state.as_slice()) {
                    let raw = Schedule::unflatten(instance.n_jobs(), horizon.length, &state)
                        .expect("descent states are binary");
                    let repaired = correct_schedule(instance, &raw);
                    let twt = model::total_weighted_tardiness(instance, &repaired)
                        .expect("repair preserves the row count");
                    if best.as_ref().is_none_or(|(incumbent, _, _)| twt < *incumbent) {
                        best = Some((twt, repaired, alpha));
                    }
                    let errors = model::validate(instance, &raw)
                        .expect("raw candidate matches the instance")
                        .error_count;
                    prev_raw = Some(state.clone());
                    if errors <= config.error_tolerance {
                        break;
                    }
                }
                alpha = alpha + config.alpha_step;
            }
            let (twt, schedule, alpha) = best.expect("at least one alpha iteration ran");
            RestartOutcome { twt, schedule, alpha, sweeps }
        })
        .collect();

    let sweeps_per_restart: Vec<usize> = outcomes.iter().map(|o| o.sweeps).collect();
    let winner = outcomes
        .into_iter()
        .reduce(|best, next| if next.twt < best.twt { next } else { best })
        .expect("restarts >= 1");

    Ok(SolveResult {
        schedule: winner.schedule,
        twt: winner.twt,
        restarts_used: config.restarts,
        alpha_final: winner.alpha,
        sweeps_per_restart,
        wall_time: started.elapsed(),
    })
}
