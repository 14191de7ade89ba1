//! Dispatch-rule baselines: priority orderings realized by a unit-slot list
//! scheduler, plus the backwards load-balancing fill.

use rand_core::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{total_weighted_tardiness, ProblemInstance, Schedule};
use crate::random;
use crate::scalar::Scalar;

/// Selection rule for the job ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DispatchRule {
    /// Earliest due date first.
    Edd,
    /// Weighted shortest processing time: ascending size/weight ratio.
    Wspt,
    /// Largest weight first.
    Lwpf,
    /// Uniformly random order.
    Random,
    /// Backwards fill from the latest cutoff (sketch-level fidelity).
    Lbs,
}

impl DispatchRule {
    pub const ALL: [DispatchRule; 5] = [
        DispatchRule::Edd,
        DispatchRule::Wspt,
        DispatchRule::Lwpf,
        DispatchRule::Random,
        DispatchRule::Lbs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DispatchRule::Edd => "edd",
            DispatchRule::Wspt => "wspt",
            DispatchRule::Lwpf => "lwpf",
            DispatchRule::Random => "random",
            DispatchRule::Lbs => "lbs",
        }
    }
}

impl std::str::FromStr for DispatchRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edd" => Ok(DispatchRule::Edd),
            "wspt" => Ok(DispatchRule::Wspt),
            "lwpf" => Ok(DispatchRule::Lwpf),
            "random" => Ok(DispatchRule::Random),
            "lbs" => Ok(DispatchRule::Lbs),
            other => Err(Error::InvalidParameter(format!("unknown rule '{other}'"))),
        }
    }
}

/// A priority order over jobs (a permutation of `0..N`) plus the rule that
/// produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JobOrdering {
    pub permutation: Vec<usize>,
    pub rule: DispatchRule,
}

impl JobOrdering {
    /// Wraps an explicit permutation after checking it is a bijection.
    pub fn custom(permutation: Vec<usize>, rule: DispatchRule) -> Result<Self> {
        let mut seen = vec![false; permutation.len()];
        for &j in &permutation {
            if j >= permutation.len() || seen[j] {
                return Err(Error::InvalidParameter("not a permutation".into()));
            }
            seen[j] = true;
        }
        Ok(Self { permutation, rule })
    }
}

/// Ascending deadlines, ties toward the lower job index.
pub fn order_edd<T: Scalar>(instance: &ProblemInstance<T>) -> JobOrdering {
    let mut permutation: Vec<usize> = (0..instance.n_jobs()).collect();
    permutation.sort_by_key(|&i| instance.deadline(i));
    JobOrdering { permutation, rule: DispatchRule::Edd }
}

/// Ascending size/weight ratio, ties toward the lower job index; jobs with
/// zero weight sort last (their ratio is treated as infinite).
pub fn order_wspt<T: Scalar>(instance: &ProblemInstance<T>) -> JobOrdering {
    let mut permutation: Vec<usize> = (0..instance.n_jobs()).collect();
    permutation.sort_by(|&a, &b| {
        let ratio = |i: usize| {
            let w = instance.weight(i);
            if w == T::zero() {
                T::infinity()
            } else {
                T::from_count(instance.size(i)) / w
            }
        };
        ratio(a).partial_cmp(&ratio(b)).expect("finite sizes").then(a.cmp(&b))
    });
    JobOrdering { permutation, rule: DispatchRule::Wspt }
}

/// Descending weights, ties toward the lower job index.
pub fn order_lwpf<T: Scalar>(instance: &ProblemInstance<T>) -> JobOrdering {
    let mut permutation: Vec<usize> = (0..instance.n_jobs()).collect();
    permutation.sort_by(|&a, &b| {
        instance
            .weight(b)
            .partial_cmp(&instance.weight(a))
            .expect("finite weights")
            .then(a.cmp(&b))
    });
    JobOrdering { permutation, rule: DispatchRule::Lwpf }
}

/// Uniformly random order from the given stream.
pub fn order_random<T: Scalar, R: RngCore>(
    instance: &ProblemInstance<T>,
    rng: &mut R,
) -> JobOrdering {
    JobOrdering {
        permutation: random::permutation(rng, instance.n_jobs()),
        rule: DispatchRule::Random,
    }
}

/// Unit-slot list scheduler: each slot runs the first (by priority) up to
/// `V` jobs that still have work, so capacity is always fully used while
/// enough work remains. Preemption falls out naturally: a job pauses
/// whenever `V` higher-priority jobs are runnable.
pub fn list_schedule<T: Scalar>(
    instance: &ProblemInstance<T>,
    ordering: &JobOrdering,
) -> Schedule {
    assert_eq!(ordering.permutation.len(), instance.n_jobs(), "ordering must cover all jobs");
    let n = instance.n_jobs();
    let mut remaining: Vec<usize> = instance.sizes().to_vec();
    let mut left: usize = remaining.iter().sum();
    let mut slots: Vec<Vec<usize>> = Vec::new();
    while left > 0 {
        let mut slot = Vec::with_capacity(instance.capacity());
        for &job in &ordering.permutation {
            if slot.len() == instance.capacity() {
                break;
            }
            if remaining[job] > 0 {
                slot.push(job);
                remaining[job] -= 1;
                left -= 1;
            }
        }
        slots.push(slot);
    }
    let mut schedule = Schedule::zeros(n, slots.len().max(1));
    for (slot0, jobs) in slots.iter().enumerate() {
        for &job in jobs {
            schedule.set(job, slot0, true);
        }
    }
    schedule
}

/// Backwards load-balancing fill: jobs in order of decreasing cutoff claim
/// the latest slots with spare capacity at or before their own cutoff;
/// units that do not fit there overflow into the earliest slots past the
/// latest cutoff.
pub fn schedule_lbs<T: Scalar>(instance: &ProblemInstance<T>) -> Schedule {
    let n = instance.n_jobs();
    let horizon = instance.deadlines().iter().copied().max().expect("at least one job");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| instance.deadline(b).cmp(&instance.deadline(a)).then(a.cmp(&b)));

    let mut load: Vec<usize> = vec![0; horizon];
    let mut placements: Vec<(usize, usize)> = Vec::with_capacity(instance.total_work());
    for &job in &order {
        let mut units = instance.size(job);
        for slot0 in (0..instance.deadline(job)).rev() {
            if units == 0 {
                break;
            }
            if load[slot0] < instance.capacity() {
                load[slot0] += 1;
                placements.push((job, slot0));
                units -= 1;
            }
        }
        // Overflow forward past the horizon, earliest slot first; a job
        // takes at most one unit per slot.
        let mut slot0 = horizon;
        while units > 0 {
            if slot0 >= load.len() {
                load.push(0);
            }
            if load[slot0] < instance.capacity() {
                load[slot0] += 1;
                placements.push((job, slot0));
                units -= 1;
            }
            slot0 += 1;
        }
    }

    let length = load.iter().rposition(|&v| v > 0).map_or(1, |j| j + 1);
    let mut schedule = Schedule::zeros(n, length);
    for (job, slot0) in placements {
        schedule.set(job, slot0, true);
    }
    schedule
}

/// Runs one rule, taking the best of `repeats` draws for the random rule
/// (repeat `k` seeds its stream with `seed + k`, so a larger repeat budget
/// extends the same candidate family).
pub fn run_baseline<T: Scalar>(
    instance: &ProblemInstance<T>,
    rule: DispatchRule,
    seed: u64,
    repeats: usize,
) -> Result<(Schedule, T)> {
    if repeats == 0 {
        return Err(Error::InvalidParameter("repeats must be at least 1".into()));
    }
    let score = |schedule: Schedule| -> Result<(Schedule, T)> {
        let twt = total_weighted_tardiness(instance, &schedule)?;
        Ok((schedule, twt))
    };
    match rule {
        DispatchRule::Edd => score(list_schedule(instance, &order_edd(instance))),
        DispatchRule::Wspt => score(list_schedule(instance, &order_wspt(instance))),
        DispatchRule::Lwpf => score(list_schedule(instance, &order_lwpf(instance))),
        DispatchRule::Lbs => score(schedule_lbs(instance)),
        DispatchRule::Random => {
            let mut best: Option<(Schedule, T)> = None;
            for k in 0..repeats {
                let mut rng = random::stream(seed.wrapping_add(k as u64));
                let ordering = order_random(instance, &mut rng);
                let (schedule, twt) = score(list_schedule(instance, &ordering))?;
                if best.as_ref().is_none_or(|(_, incumbent)| twt < *incumbent) {
                    best = Some((schedule, twt));
                }
            }
            Ok(best.expect("repeats >= 1"))
        }
    }
}
