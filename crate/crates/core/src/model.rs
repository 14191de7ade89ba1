//! Problem instances, schedule matrices, tardiness evaluation and
//! feasibility diagnostics.
//!
//! Slots and columns are 1-based in every formula and serialized form; the
//! in-memory layout is 0-based row-major.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A set of `N` preemptible jobs to run on `V` identical machines.
///
/// Job `i` needs `sizes[i]` unit slots of work, should complete by slot
/// `deadlines[i]` (inclusive) and accrues `weights[i]` cost per slot of
/// tardiness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemInstance<T> {
    sizes: Vec<usize>,
    deadlines: Vec<usize>,
    weights: Vec<T>,
    capacity: usize,
}

impl<T: Scalar> ProblemInstance<T> {
    pub fn new(
        sizes: Vec<usize>,
        deadlines: Vec<usize>,
        weights: Vec<T>,
        capacity: usize,
    ) -> Result<Self> {
        let n = sizes.len();
        if n == 0 {
            return Err(Error::InvalidInstance("no jobs".into()));
        }
        if deadlines.len() != n || weights.len() != n {
            return Err(Error::InvalidInstance(format!(
                "field lengths disagree: {n} sizes, {} deadlines, {} weights",
                deadlines.len(),
                weights.len()
            )));
        }
        if capacity == 0 {
            return Err(Error::InvalidInstance("capacity must be at least 1".into()));
        }
        if let Some(i) = sizes.iter().position(|&x| x == 0) {
            return Err(Error::InvalidInstance(format!("job {i} has size 0")));
        }
        if let Some(i) = deadlines.iter().position(|&k| k == 0) {
            return Err(Error::InvalidInstance(format!("job {i} has deadline 0")));
        }
        if let Some(i) = weights.iter().position(|w| *w < T::zero() || !w.is_finite()) {
            return Err(Error::InvalidInstance(format!(
                "job {i} has a negative or non-finite weight"
            )));
        }
        Ok(Self { sizes, deadlines, weights, capacity })
    }

    pub fn n_jobs(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn deadlines(&self) -> &[usize] {
        &self.deadlines
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn size(&self, job: usize) -> usize {
        self.sizes[job]
    }

    pub fn deadline(&self, job: usize) -> usize {
        self.deadlines[job]
    }

    pub fn weight(&self, job: usize) -> T {
        self.weights[job]
    }

    /// Total units of work across all jobs.
    pub fn total_work(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// Horizon bookkeeping for the quadratic encoding.
    ///
    /// - `min_length` is the capacity-driven lower bound `ceil(sum x / V)`;
    /// - `length` additionally covers the largest job and latest deadline;
    /// - `full_capacity_cols` is the number of leading columns whose load the
    ///   capacity penalty pins to exactly `V`, clamped into
    ///   `[1, min_length]`.
    pub fn horizon(&self) -> Horizon {
        let work = self.total_work();
        let min_length = work.div_ceil(self.capacity);
        let max_size = self.sizes.iter().copied().max().unwrap_or(1);
        let max_deadline = self.deadlines.iter().copied().max().unwrap_or(1);
        let length = min_length.max(max_size).max(max_deadline);
        let full_capacity_cols = (max_size + 1)
            .saturating_sub(min_length)
            .clamp(1, min_length);
        Horizon { min_length, length, full_capacity_cols }
    }
}

/// Derived horizon quantities of an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Horizon {
    pub min_length: usize,
    pub length: usize,
    pub full_capacity_cols: usize,
}

/// Binary schedule matrix: entry `(i, j)` is 1 iff job `i` runs in slot `j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Schedule {
    rows: usize,
    length: usize,
    bits: Vec<u8>,
}

impl Schedule {
    /// All-zero schedule with `rows >= 1` jobs over `length >= 1` slots.
    pub fn zeros(rows: usize, length: usize) -> Self {
        assert!(rows >= 1 && length >= 1, "degenerate schedule shape");
        Self { rows, length, bits: vec![0; rows * length] }
    }

    /// Builds a schedule from explicit 0/1 rows.
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::InvalidSchedule("matrix must be at least 1x1".into()));
        }
        let length = rows[0].len();
        let mut bits = Vec::with_capacity(rows.len() * length);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != length {
                return Err(Error::InvalidSchedule(format!(
                    "row {i} has {} columns, expected {length}",
                    row.len()
                )));
            }
            for &v in row {
                if v > 1 {
                    return Err(Error::InvalidSchedule(format!(
                        "row {i} contains non-binary entry {v}"
                    )));
                }
                bits.push(v);
            }
        }
        Ok(Self { rows: rows.len(), length, bits })
    }

    /// Rebuilds the matrix from its row-major flattening.
    pub fn unflatten(rows: usize, length: usize, flat: &[u8]) -> Result<Self> {
        if rows == 0 || length == 0 || flat.len() != rows * length {
            return Err(Error::DimensionMismatch {
                expected: rows * length,
                found: flat.len(),
            });
        }
        if let Some(&v) = flat.iter().find(|&&v| v > 1) {
            return Err(Error::InvalidSchedule(format!("non-binary entry {v}")));
        }
        Ok(Self { rows, length, bits: flat.to_vec() })
    }

    /// Row-major flattening: position `i * length + j` holds entry `(i, j)`.
    pub fn flatten(&self) -> &[u8] {
        &self.bits
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn get(&self, job: usize, slot: usize) -> bool {
        self.bits[job * self.length + slot] == 1
    }

    pub fn set(&mut self, job: usize, slot: usize, on: bool) {
        self.bits[job * self.length + slot] = on as u8;
    }

    pub fn row(&self, job: usize) -> &[u8] {
        &self.bits[job * self.length..(job + 1) * self.length]
    }

    pub fn row_sum(&self, job: usize) -> usize {
        self.row(job).iter().map(|&v| v as usize).sum()
    }

    pub fn col_sum(&self, slot: usize) -> usize {
        (0..self.rows).map(|i| self.bits[i * self.length + slot] as usize).sum()
    }

    /// Appends `extra` empty slots to the right of every row.
    pub fn widen(&mut self, extra: usize) {
        if extra == 0 {
            return;
        }
        let new_len = self.length + extra;
        let mut bits = vec![0u8; self.rows * new_len];
        for i in 0..self.rows {
            bits[i * new_len..i * new_len + self.length]
                .copy_from_slice(self.row(i));
        }
        self.length = new_len;
        self.bits = bits;
    }

    /// Finish time of a job: the 1-based index of the last slot in which it
    /// runs, or 0 for a row with no work scheduled (which therefore accrues
    /// no tardiness even on invalid intermediate schedules).
    pub fn finish_time(&self, job: usize) -> usize {
        self.row(job)
            .iter()
            .rposition(|&v| v == 1)
            .map_or(0, |j| j + 1)
    }
}

/// Per-row and per-column constraint deviations of a schedule.
///
/// `row_errors[i]` is the signed difference between the scheduled and
/// required units of job `i`; `column_overloads[j]` is the load above
/// capacity in slot `j`. `error_count` totals their magnitudes, so it is 0
/// exactly when the schedule is feasible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScheduleDiagnostics {
    pub row_errors: Vec<i64>,
    pub column_overloads: Vec<u64>,
    pub error_count: u64,
}

impl ScheduleDiagnostics {
    pub fn is_valid(&self) -> bool {
        self.error_count == 0
    }
}

/// Checks job-size and capacity constraints, returning the deviation counts.
pub fn validate<T: Scalar>(
    instance: &ProblemInstance<T>,
    schedule: &Schedule,
) -> Result<ScheduleDiagnostics> {
    if schedule.rows() != instance.n_jobs() {
        return Err(Error::DimensionMismatch {
            expected: instance.n_jobs(),
            found: schedule.rows(),
        });
    }
    let row_errors: Vec<i64> = (0..schedule.rows())
        .map(|i| schedule.row_sum(i) as i64 - instance.size(i) as i64)
        .collect();
    let column_overloads: Vec<u64> = (0..schedule.length())
        .map(|j| schedule.col_sum(j).saturating_sub(instance.capacity()) as u64)
        .collect();
    let error_count = row_errors.iter().map(|e| e.unsigned_abs()).sum::<u64>()
        + column_overloads.iter().sum::<u64>();
    Ok(ScheduleDiagnostics { row_errors, column_overloads, error_count })
}

/// Total weighted tardiness of a schedule: `sum_i w_i * max(0, F_i - K_i)`.
pub fn total_weighted_tardiness<T: Scalar>(
    instance: &ProblemInstance<T>,
    schedule: &Schedule,
) -> Result<T> {
    if schedule.rows() != instance.n_jobs() {
        return Err(Error::DimensionMismatch {
            expected: instance.n_jobs(),
            found: schedule.rows(),
        });
    }
    let mut total = T::zero();
    for job in 0..instance.n_jobs() {
        let finish = schedule.finish_time(job);
        let late = finish.saturating_sub(instance.deadline(job));
        if late > 0 {
            total = total + instance.weight(job) * T::from_count(late);
        }
    }
    Ok(total)
}


#[cfg(test)]
mod props {
    use proptest::prelude::*;

    use super::*;

    fn arb_matrix() -> impl Strategy<Value = Schedule> {
        (1usize..5, 1usize..6).prop_flat_map(|(n, l)| {
            proptest::collection::vec(0u8..2, n * l)
                .prop_map(move |bits| Schedule::unflatten(n, l, &bits).unwrap())
        })
    }

    proptest! {
        #[test]
        fn flatten_roundtrip(c in arb_matrix()) {
            let back = Schedule::unflatten(c.rows(), c.length(), c.flatten()).unwrap();
            prop_assert_eq!(back, c);
        }

        /// A trailing 1 appended to a row never lowers that row's tardiness.
        #[test]
        fn tardiness_monotone_in_trailing_ones(c in arb_matrix(), job in 0usize..4, k in 1usize..5) {
            let job = job % c.rows();
            let i = ProblemInstance::new(
                vec![1; c.rows()],
                vec![k; c.rows()],
                vec![1.0f64; c.rows()],
                1,
            ).unwrap();
            let before = total_weighted_tardiness(&i, &c).unwrap();
            let mut wider = c.clone();
            wider.widen(1);
            wider.set(job, wider.length() - 1, true);
            let after = total_weighted_tardiness(&i, &wider).unwrap();
            prop_assert!(after >= before);
        }

        /// Zero error count implies exact row sums and bounded column sums.
        #[test]
        fn valid_means_constraints_hold(c in arb_matrix(), cap in 1usize..4) {
            let sizes: Vec<usize> = (0..c.rows()).map(|i| c.row_sum(i).max(1)).collect();
            let i = ProblemInstance::new(
                sizes.clone(),
                vec![c.length(); c.rows()],
                vec![1.0f64; c.rows()],
                cap,
            ).unwrap();
            let d = validate(&i, &c).unwrap();
            if d.error_count == 0 {
                for (job, &size) in sizes.iter().enumerate() {
                    prop_assert_eq!(c.row_sum(job), size);
                }
                for slot in 0..c.length() {
                    prop_assert!(c.col_sum(slot) <= cap);
                }
            }
        }

        /// The horizon always addresses every job and deadline.
        #[test]
        fn horizon_addresses_all_indices(
            sizes in proptest::collection::vec(1usize..9, 1..6),
            slack in proptest::collection::vec(0usize..9, 1..6),
            cap in 1usize..4,
        ) {
            let n = sizes.len().min(slack.len());
            let sizes = sizes[..n].to_vec();
            let deadlines: Vec<usize> = sizes.iter().zip(&slack).map(|(x, s)| x + s).collect();
            let i = ProblemInstance::new(sizes.clone(), deadlines.clone(), vec![1.0f64; n], cap).unwrap();
            let h = i.horizon();
            prop_assert!(h.length >= *sizes.iter().max().unwrap());
            prop_assert!(h.length >= *deadlines.iter().max().unwrap());
            prop_assert!(h.full_capacity_cols >= 1);
            prop_assert!(h.full_capacity_cols <= h.min_length);
        }
    }
}
