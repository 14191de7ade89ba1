//! Exact minimum-TWT search for desk-size instances.
//!
//! Depth-first branch and bound over the per-slot choice of which jobs run:
//! at each slot the search tries every subset of unfinished jobs up to the
//! capacity, fullest subsets first. A branch is cut when its accrued
//! tardiness plus an admissible per-job bound (each job still needs its
//! remaining units, one per slot) cannot beat the incumbent, when the
//! remaining capacity cannot absorb the remaining work, or when the same
//! (slot, remaining-work) state was already reached at least as cheaply.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::model::{total_weighted_tardiness, validate, ProblemInstance, Schedule};
use crate::scalar::Scalar;

/// Guard rails: the search is exponential and refuses anything larger.
pub const MAX_JOBS: usize = 6;
pub const MAX_HORIZON: usize = 12;

/// Provably optimal schedule within the given horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult<T> {
    pub optimum_twt: T,
    pub schedule: Schedule,
    pub nodes_explored: u64,
}

/// Horizon that provably admits an optimal schedule: the derived length
/// plus the largest job, slack enough to hold any deferral worth checking.
pub fn default_horizon<T: Scalar>(instance: &ProblemInstance<T>) -> usize {
    instance.horizon().length + instance.sizes().iter().copied().max().unwrap_or(0)
}

struct Search<'a, T> {
    instance: &'a ProblemInstance<T>,
    horizon: usize,
    subsets_by_fill: Vec<u32>,
    incumbent_twt: T,
    incumbent_slots: Vec<u32>,
    path: Vec<u32>,
    seen: HashMap<(usize, Vec<u8>), T>,
    nodes: u64,
}

impl<T: Scalar> Search<'_, T> {
    /// Admissible bound: job `i` cannot finish before `slot + remaining_i`.
    fn future_bound(&self, slot0: usize, remaining: &[u8]) -> T {
        let mut bound = T::zero();
        for (job, &rem) in remaining.iter().enumerate() {
            if rem > 0 {
                let earliest_finish = slot0 + rem as usize;
                let late = earliest_finish.saturating_sub(self.instance.deadline(job));
                if late > 0 {
                    bound = bound + self.instance.weight(job) * T::from_count(late);
                }
            }
        }
        bound
    }

    fn descend(&mut self, slot0: usize, remaining: &mut Vec<u8>, accrued: T) {
        self.nodes += 1;
        let left: usize = remaining.iter().map(|&r| r as usize).sum();
        if left == 0 {
            if accrued < self.incumbent_twt {
                self.incumbent_twt = accrued;
                self.incumbent_slots = self.path.clone();
            }
            return;
        }
        if slot0 >= self.horizon
            || (self.horizon - slot0) * self.instance.capacity() < left
        {
            return;
        }
        if accrued + self.future_bound(slot0, remaining) >= self.incumbent_twt {
            return;
        }
        match self.seen.get(&(slot0, remaining.clone())) {
            Some(&best) if best <= accrued => return,
            _ => {
                self.seen.insert((slot0, remaining.clone()), accrued);
            }
        }

        let runnable: u32 = remaining
            .iter()
            .enumerate()
            .filter(|(_, &r)| r > 0)
            .fold(0, |mask, (job, _)| mask | 1 << job);
        for idx in 0..self.subsets_by_fill.len() {
            let subset = self.subsets_by_fill[idx];
            if subset & !runnable != 0 {
                continue;
            }
            let mut cost = T::zero();
            for (job, rem) in remaining.iter_mut().enumerate() {
                if subset >> job & 1 == 1 {
                    *rem -= 1;
                    if *rem == 0 {
                        // Finishing in slot0 means 1-based finish slot0 + 1.
                        let late = (slot0 + 1).saturating_sub(self.instance.deadline(job));
                        if late > 0 {
                            cost = cost + self.instance.weight(job) * T::from_count(late);
                        }
                    }
                }
            }
            self.path.push(subset);
            self.descend(slot0 + 1, remaining, accrued + cost);
            self.path.pop();
            for (job, rem) in remaining.iter_mut().enumerate() {
                if subset >> job & 1 == 1 {
                    *rem += 1;
                }
            }
        }
    }
}

/// Exact minimum total weighted tardiness within `horizon` slots.
///
/// Rejects instances beyond [`MAX_JOBS`] jobs or [`MAX_HORIZON`] slots, and
/// horizons too short to fit the total work or the derived schedule length.
pub fn solve_exact<T: Scalar>(
    instance: &ProblemInstance<T>,
    horizon: usize,
) -> Result<OracleResult<T>> {
    let n = instance.n_jobs();
    if n > MAX_JOBS {
        return Err(Error::ExactGuard(format!("{n} jobs exceed the limit of {MAX_JOBS}")));
    }
    if horizon > MAX_HORIZON {
        return Err(Error::ExactGuard(format!(
            "horizon {horizon} exceeds the limit of {MAX_HORIZON}"
        )));
    }
    let needed = instance.horizon().length;
    if horizon < needed {
        return Err(Error::HorizonTooShort { required: needed, found: horizon });
    }
    if instance.sizes().iter().any(|&x| x > horizon) {
        return Err(Error::HorizonTooShort {
            required: *instance.sizes().iter().max().expect("jobs exist"),
            found: horizon,
        });
    }

    // Subsets of up to `capacity` jobs, fullest first so good incumbents
    // appear early.
    let mut subsets_by_fill: Vec<u32> = (0..1u32 << n)
        .filter(|s| (s.count_ones() as usize) <= instance.capacity())
        .collect();
    subsets_by_fill.sort_by_key(|s| std::cmp::Reverse(s.count_ones()));

    let mut search = Search {
        instance,
        horizon,
        subsets_by_fill,
        incumbent_twt: T::infinity(),
        incumbent_slots: Vec::new(),
        path: Vec::with_capacity(horizon),
        seen: HashMap::new(),
        nodes: 0,
    };
    let mut remaining: Vec<u8> = instance.sizes().iter().map(|&x| x as u8).collect();
    search.descend(0, &mut remaining, T::zero());

    debug_assert!(search.incumbent_twt.is_finite(), "feasible horizon always yields a schedule");
    let mut schedule = Schedule::zeros(n, search.incumbent_slots.len().max(1));
    for (slot0, &subset) in search.incumbent_slots.iter().enumerate() {
        for job in 0..n {
            if subset >> job & 1 == 1 {
                schedule.set(job, slot0, true);
            }
        }
    }
    debug_assert_eq!(
        validate(instance, &schedule).map(|d| d.error_count).unwrap_or(u64::MAX),
        0
    );
    debug_assert_eq!(
        total_weighted_tardiness(instance, &schedule).ok(),
        Some(search.incumbent_twt)
    );
    Ok(OracleResult {
        optimum_twt: search.incumbent_twt,
        schedule,
        nodes_explored: search.nodes,
    })
}

/// True iff some zero-tardiness schedule exists.
///
/// With a common release and nested deadline windows this reduces to the
/// earliest-due-date prefix check: every job fits its own window and, for
/// each deadline `d`, the work due by `d` is at most `V * d`.
pub fn lower_bound_feasibility<T: Scalar>(instance: &ProblemInstance<T>) -> bool {
    let n = instance.n_jobs();
    for job in 0..n {
        if instance.size(job) > instance.deadline(job) {
            return false;
        }
    }
    let mut by_deadline: Vec<usize> = (0..n).collect();
    by_deadline.sort_by_key(|&i| instance.deadline(i));
    let mut work = 0usize;
    for &job in &by_deadline {
        work += instance.size(job);
        if work > instance.capacity() * instance.deadline(job) {
            return false;
        }
    }
    true
}
