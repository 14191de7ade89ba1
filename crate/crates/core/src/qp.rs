//! Quadratic-energy encoding of the scheduling problem.
//!
//! A schedule matrix flattens row-major into a binary vector `y` of length
//! `N * L`, and every cost lands in the form `f(y) = -1/2 y^T W y + b^T y`
//! with `W = alpha * W_obj + beta * W_rows + gamma * W_cols`:
//!
//! - the objective block charges `w_i` for every unit of job `i` placed
//!   after its deadline;
//! - the row block is the squared deviation of each row sum from the job
//!   size (minus the constant `sum x_i^2`);
//! - the column block is the squared deviation of each of the first `M`
//!   column sums from the capacity `V` (minus the constant `M * V^2`).
//!
//! So for every binary `y`:
//!
//! ```text
//! f(y) + beta * sum_i x_i^2 + gamma * M * V^2
//!     = alpha * (tardy units) + beta * (row deviation)^2
//!       + gamma * (column deviation)^2
//! ```
//!
//! which the tests enforce exhaustively on small instances.
//!
//! Forms are stored structurally (per-job weights, deadlines and sizes plus
//! the mixing constants); the Hopfield update only ever needs one row of the
//! matrix at a time, and every row is a block-row slice plus at most one
//! column coupling. [`DenseForm`] materializes small matrices for debugging
//! and cross-checks.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ProblemInstance, Schedule};
use crate::scalar::Scalar;

/// Largest dimension [`QuadraticForm::debug_dump_json`] will materialize.
pub const MAX_DUMP_DIM: usize = 400;

/// Flat index of matrix entry `(job, slot0)` for row length `l`.
#[inline]
pub fn flat_index(l: usize, job: usize, slot0: usize) -> usize {
    job * l + slot0
}

/// Inverse of [`flat_index`].
#[inline]
pub fn split_index(l: usize, p: usize) -> (usize, usize) {
    (p / l, p % l)
}

/// Explicit symmetric matrix plus linear term, for small dimensions only.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DenseForm<T> {
    pub dim: usize,
    pub w: Vec<Vec<T>>,
    pub b: Vec<T>,
}

impl<T: Scalar> DenseForm<T> {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, w: vec![vec![T::zero(); dim]; dim], b: vec![T::zero(); dim] }
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|p| (0..p).all(|q| self.w[p][q] == self.w[q][p]))
    }

    /// Adds `scale` times another form of the same dimension.
    pub fn accumulate(&mut self, scale: T, other: &DenseForm<T>) {
        assert_eq!(self.dim, other.dim, "form dimensions disagree");
        for p in 0..self.dim {
            for q in 0..self.dim {
                self.w[p][q] = self.w[p][q] + scale * other.w[p][q];
            }
            self.b[p] = self.b[p] + scale * other.b[p];
        }
    }

    /// Folds the diagonal into the linear term: `W_hat = W - diag(W)`,
    /// `b_hat = b - 1/2 diag(W)`. On binary vectors the energy is unchanged.
    pub fn fold_diagonal(&self) -> DenseForm<T> {
        let half = T::from_f64(0.5).unwrap();
        let mut out = self.clone();
        for p in 0..self.dim {
            out.b[p] = self.b[p] - half * self.w[p][p];
            out.w[p][p] = T::zero();
        }
        out
    }

    /// Evaluates `-1/2 y^T W y + b^T y` by direct summation.
    pub fn energy(&self, y: &[u8]) -> Result<T> {
        if y.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: y.len() });
        }
        let half = T::from_f64(0.5).unwrap();
        let mut quad = T::zero();
        let mut lin = T::zero();
        for p in 0..self.dim {
            if y[p] == 0 {
                continue;
            }
            lin = lin + self.b[p];
            for (&w_pq, &y_q) in self.w[p].iter().zip(y) {
                if y_q == 1 {
                    quad = quad + w_pq;
                }
            }
        }
        Ok(lin - half * quad)
    }
}

/// Objective block: diagonal `-2 w_i` on every slot past job `i`'s deadline,
/// zero linear term.
pub fn objective_block<T: Scalar>(
    instance: &ProblemInstance<T>,
    l: usize,
) -> Result<DenseForm<T>> {
    let max_deadline = instance.deadlines().iter().copied().max().unwrap_or(0);
    if l < max_deadline {
        return Err(Error::HorizonTooShort { required: max_deadline, found: l });
    }
    let n = instance.n_jobs();
    let mut form = DenseForm::zeros(n * l);
    let minus_two = T::from_f64(-2.0).unwrap();
    for job in 0..n {
        for slot0 in instance.deadline(job)..l {
            let p = flat_index(l, job, slot0);
            form.w[p][p] = minus_two * instance.weight(job);
        }
    }
    Ok(form)
}

/// Row block: `-2` times the all-ones matrix within each job's block and
/// linear term `-2 x_i`, encoding the squared row-sum deviation.
pub fn jobsize_block<T: Scalar>(instance: &ProblemInstance<T>, l: usize) -> DenseForm<T> {
    let n = instance.n_jobs();
    let mut form = DenseForm::zeros(n * l);
    let minus_two = T::from_f64(-2.0).unwrap();
    for job in 0..n {
        let target = minus_two * T::from_count(instance.size(job));
        for a in 0..l {
            let p = flat_index(l, job, a);
            form.b[p] = target;
            for bcol in 0..l {
                form.w[p][flat_index(l, job, bcol)] = minus_two;
            }
        }
    }
    form
}

/// Column block: `-2` between any two units in the same slot `j <= M` and
/// linear term `-2 V` there, encoding the squared column-sum deviation over
/// the `m` leading slots.
pub fn capacity_block<T: Scalar>(
    instance: &ProblemInstance<T>,
    l: usize,
    m: usize,
) -> Result<DenseForm<T>> {
    if m == 0 || m > l {
        return Err(Error::InvalidParameter(format!(
            "full-capacity column count {m} outside 1..={l}"
        )));
    }
    let n = instance.n_jobs();
    let mut form = DenseForm::zeros(n * l);
    let minus_two = T::from_f64(-2.0).unwrap();
    let target = minus_two * T::from_count(instance.capacity());
    for slot0 in 0..m {
        for row_a in 0..n {
            let p = flat_index(l, row_a, slot0);
            form.b[p] = target;
            for row_b in 0..n {
                form.w[p][flat_index(l, row_b, slot0)] = minus_two;
            }
        }
    }
    Ok(form)
}

/// Structured `W`, `b` for a fixed instance, horizon and mixing constants.
#[derive(Debug, Clone)]
pub struct QuadraticForm<T> {
    instance: Arc<ProblemInstance<T>>,
    l: usize,
    m: usize,
    alpha: T,
    beta: T,
    gamma: T,
}

impl<T: Scalar> QuadraticForm<T> {
    /// Combines the three blocks as `alpha * W_obj + beta * W_rows +
    /// gamma * W_cols` (and likewise for `b`).
    pub fn assemble(
        instance: &ProblemInstance<T>,
        l: usize,
        m: usize,
        alpha: T,
        beta: T,
        gamma: T,
    ) -> Result<Self> {
        Self::from_shared(Arc::new(instance.clone()), l, m, alpha, beta, gamma)
    }

    pub(crate) fn from_shared(
        instance: Arc<ProblemInstance<T>>,
        l: usize,
        m: usize,
        alpha: T,
        beta: T,
        gamma: T,
    ) -> Result<Self> {
        let max_deadline = instance.deadlines().iter().copied().max().unwrap_or(0);
        if l < max_deadline {
            return Err(Error::HorizonTooShort { required: max_deadline, found: l });
        }
        if m == 0 || m > l {
            return Err(Error::InvalidParameter(format!(
                "full-capacity column count {m} outside 1..={l}"
            )));
        }
        for (name, value) in [("alpha", alpha), ("beta", beta), ("gamma", gamma)] {
            if value < T::zero() || !value.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be finite and non-negative, got {value}"
                )));
            }
        }
        Ok(Self { instance, l, m, alpha, beta, gamma })
    }

    pub fn dim(&self) -> usize {
        self.instance.n_jobs() * self.l
    }

    pub fn slots(&self) -> usize {
        self.l
    }

    pub fn full_capacity_cols(&self) -> usize {
        self.m
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn beta(&self) -> T {
        self.beta
    }

    pub fn gamma(&self) -> T {
        self.gamma
    }

    pub fn instance(&self) -> &ProblemInstance<T> {
        &self.instance
    }

    pub(crate) fn shared_instance(&self) -> Arc<ProblemInstance<T>> {
        Arc::clone(&self.instance)
    }

    /// Entry `W[p][q]` reconstructed from the block structure.
    pub fn w_entry(&self, p: usize, q: usize) -> T {
        let (job_p, slot_p) = split_index(self.l, p);
        let (job_q, slot_q) = split_index(self.l, q);
        let minus_two = T::from_f64(-2.0).unwrap();
        let mut value = T::zero();
        if job_p == job_q {
            value = value + self.beta * minus_two;
            if p == q && slot_p >= self.instance.deadline(job_p) {
                value = value + self.alpha * minus_two * self.instance.weight(job_p);
            }
        }
        if slot_p == slot_q && slot_p < self.m {
            value = value + self.gamma * minus_two;
        }
        value
    }

    /// Entry `b[p]` reconstructed from the block structure.
    pub fn b_entry(&self, p: usize) -> T {
        let (job, slot0) = split_index(self.l, p);
        let minus_two = T::from_f64(-2.0).unwrap();
        let mut value = self.beta * minus_two * T::from_count(self.instance.size(job));
        if slot0 < self.m {
            value = value + self.gamma * minus_two * T::from_count(self.instance.capacity());
        }
        value
    }

    /// Materializes the full matrix; intended for small dimensions.
    pub fn to_dense(&self) -> DenseForm<T> {
        let dim = self.dim();
        let mut form = DenseForm::zeros(dim);
        for p in 0..dim {
            form.b[p] = self.b_entry(p);
            for q in 0..dim {
                form.w[p][q] = self.w_entry(p, q);
            }
        }
        form
    }

    /// Energy `-1/2 y^T W y + b^T y`, evaluated from the block structure in
    /// `O(N * L)` via the penalty expansion.
    pub fn energy(&self, y: &[u8]) -> Result<T> {
        if y.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: y.len() });
        }
        let inst = &self.instance;
        let n = inst.n_jobs();
        let mut tardy = T::zero();
        let mut row_sq = 0i64;
        let mut row_const = 0i64;
        for job in 0..n {
            let row = &y[job * self.l..(job + 1) * self.l];
            let run: i64 = row.iter().map(|&v| v as i64).sum();
            let late: i64 = row[inst.deadline(job)..].iter().map(|&v| v as i64).sum();
            if late > 0 {
                tardy = tardy + inst.weight(job) * T::from_diff(late);
            }
            let dev = run - inst.size(job) as i64;
            row_sq += dev * dev;
            row_const += (inst.size(job) * inst.size(job)) as i64;
        }
        let mut col_sq = 0i64;
        for slot0 in 0..self.m {
            let load: i64 = (0..n).map(|job| y[flat_index(self.l, job, slot0)] as i64).sum();
            let dev = load - inst.capacity() as i64;
            col_sq += dev * dev;
        }
        let col_const = (self.m * inst.capacity() * inst.capacity()) as i64;
        Ok(self.alpha * tardy
            + self.beta * T::from_diff(row_sq - row_const)
            + self.gamma * T::from_diff(col_sq - col_const))
    }

    /// JSON dump `{"dim", "w", "b"}` of the dense form, refused above
    /// [`MAX_DUMP_DIM`].
    pub fn debug_dump_json(&self) -> Result<String> {
        if self.dim() > MAX_DUMP_DIM {
            return Err(Error::InvalidParameter(format!(
                "refusing dense dump of dimension {} (limit {MAX_DUMP_DIM})",
                self.dim()
            )));
        }
        Ok(serde_json::to_string(&self.to_dense())?)
    }
}

/// Direct (matrix-level) evaluation of the weighted penalty:
/// `alpha * tardy units + beta * row deviations^2 + gamma * leading-column
/// deviations^2`. Columns beyond the schedule's length count as empty.
pub fn penalty_of<T: Scalar>(
    instance: &ProblemInstance<T>,
    _l: usize,
    m: usize,
    alpha: T,
    beta: T,
    gamma: T,
    schedule: &Schedule,
) -> Result<T> {
    if schedule.rows() != instance.n_jobs() {
        return Err(Error::DimensionMismatch {
            expected: instance.n_jobs(),
            found: schedule.rows(),
        });
    }
    let mut tardy = T::zero();
    let mut row_sq = 0i64;
    for job in 0..instance.n_jobs() {
        let row = schedule.row(job);
        let late: i64 = row
            .iter()
            .skip(instance.deadline(job))
            .map(|&v| v as i64)
            .sum();
        if late > 0 {
            tardy = tardy + instance.weight(job) * T::from_diff(late);
        }
        let dev = schedule.row_sum(job) as i64 - instance.size(job) as i64;
        row_sq += dev * dev;
    }
    let mut col_sq = 0i64;
    for slot0 in 0..m {
        let load = if slot0 < schedule.length() { schedule.col_sum(slot0) as i64 } else { 0 };
        let dev = load - instance.capacity() as i64;
        col_sq += dev * dev;
    }
    Ok(alpha * tardy + beta * T::from_diff(row_sq) + gamma * T::from_diff(col_sq))
}

/// Zero-diagonal Hopfield form of a quadratic form.
///
/// On binary vectors `y_p^2 = y_p`, so the diagonal of `W` folds into the
/// linear term without changing the energy: `W_hat = W - diag(W)` and
/// `b_hat = b - 1/2 diag(W)` satisfy
/// `-1/2 y^T W_hat y + b_hat^T y = -1/2 y^T W y + b^T y` exactly, and the
/// asynchronous update rule descends this shared value.
#[derive(Debug, Clone)]
pub struct HopfieldForm<T> {
    instance: Arc<ProblemInstance<T>>,
    l: usize,
    m: usize,
    alpha: T,
    beta: T,
    gamma: T,
}

/// Folds the diagonal of the quadratic form into its linear term.
pub fn to_hopfield<T: Scalar>(q: &QuadraticForm<T>) -> HopfieldForm<T> {
    HopfieldForm {
        instance: q.shared_instance(),
        l: q.l,
        m: q.m,
        alpha: q.alpha,
        beta: q.beta,
        gamma: q.gamma,
    }
}

impl<T: Scalar> HopfieldForm<T> {
    pub fn dim(&self) -> usize {
        self.instance.n_jobs() * self.l
    }

    pub fn slots(&self) -> usize {
        self.l
    }

    /// Off-diagonal entries match `W`; the diagonal is zero.
    pub fn w_hat_entry(&self, p: usize, q: usize) -> T {
        if p == q {
            return T::zero();
        }
        // Reuse the quadratic entry formula; off-diagonal terms are shared.
        let quad = QuadraticForm {
            instance: Arc::clone(&self.instance),
            l: self.l,
            m: self.m,
            alpha: self.alpha,
            beta: self.beta,
            gamma: self.gamma,
        };
        quad.w_entry(p, q)
    }

    /// `b_hat[p] = b[p] - 1/2 W[p][p]`.
    pub fn b_hat(&self, p: usize) -> T {
        let (job, slot0) = split_index(self.l, p);
        let inst = &self.instance;
        let two = T::from_f64(2.0).unwrap();
        // -2 beta x_i + beta, -2 gamma V + gamma on leading slots, and
        // + alpha w_i on tardy slots.
        let mut value = self.beta * (T::one() - two * T::from_count(inst.size(job)));
        if slot0 < self.m {
            value = value + self.gamma * (T::one() - two * T::from_count(inst.capacity()));
        }
        if slot0 >= inst.deadline(job) {
            value = value + self.alpha * inst.weight(job);
        }
        value
    }

    /// Dense `(W_hat, b_hat)`; intended for small dimensions.
    pub fn to_dense(&self) -> DenseForm<T> {
        let dim = self.dim();
        let mut form = DenseForm::zeros(dim);
        for p in 0..dim {
            form.b[p] = self.b_hat(p);
            for q in 0..dim {
                form.w[p][q] = self.w_hat_entry(p, q);
            }
        }
        form
    }
}

/// Anything the asynchronous Hopfield update can run on: a neuron count, an
/// activation per neuron, and the Lyapunov value the updates descend.
pub trait HopfieldNetwork<T: Scalar> {
    fn dim(&self) -> usize;

    /// `sum_q W_hat[p][q] y_q - b_hat[p]`.
    fn activation(&self, y: &[u8], p: usize) -> T;

    /// `-1/2 y^T W_hat y + b_hat^T y`.
    fn energy(&self, y: &[u8]) -> T;
}

impl<T: Scalar> HopfieldNetwork<T> for HopfieldForm<T> {
    fn dim(&self) -> usize {
        self.dim()
    }

    /// Row-slice evaluation: one scan of the neuron's block row plus, on the
    /// leading slots, one scan of its column.
    fn activation(&self, y: &[u8], p: usize) -> T {
        let (job, slot0) = split_index(self.l, p);
        let inst = &self.instance;
        let row = &y[job * self.l..(job + 1) * self.l];
        let row_others: i64 = row.iter().map(|&v| v as i64).sum::<i64>() - row[slot0] as i64;
        // 2 beta (x_i - r) - beta, with r the row sum excluding this neuron.
        let mut act = self.beta * T::from_diff(2 * (inst.size(job) as i64 - row_others) - 1);
        if slot0 >= inst.deadline(job) {
            act = act - self.alpha * inst.weight(job);
        }
        if slot0 < self.m {
            let col_others: i64 = (0..inst.n_jobs())
                .map(|other| y[flat_index(self.l, other, slot0)] as i64)
                .sum::<i64>()
                - y[p] as i64;
            act = act + self.gamma * T::from_diff(2 * (inst.capacity() as i64 - col_others) - 1);
        }
        act
    }

    fn energy(&self, y: &[u8]) -> T {
        // The fold preserves the quadratic energy on binary vectors.
        let quad = QuadraticForm {
            instance: Arc::clone(&self.instance),
            l: self.l,
            m: self.m,
            alpha: self.alpha,
            beta: self.beta,
            gamma: self.gamma,
        };
        quad.energy(y).expect("state length matches form dimension")
    }
}

impl<T: Scalar> HopfieldNetwork<T> for DenseForm<T> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn activation(&self, y: &[u8], p: usize) -> T {
        let mut acc = T::zero();
        for (&w_pq, &y_q) in self.w[p].iter().zip(y) {
            if y_q == 1 {
                acc = acc + w_pq;
            }
        }
        acc - self.b[p]
    }

    fn energy(&self, y: &[u8]) -> T {
        DenseForm::energy(self, y).expect("state length matches form dimension")
    }
}


#[cfg(test)]
mod props {
    use proptest::prelude::*;

    use super::*;
    use crate::model::Horizon;

    #[derive(Debug, Clone)]
    struct SmallCase {
        instance: ProblemInstance<f64>,
        l: usize,
        m: usize,
        alpha: f64,
        beta: f64,
        gamma: f64,
    }

    fn small_case() -> impl Strategy<Value = SmallCase> {
        (1usize..=3, 1usize..=4).prop_flat_map(|(n, l)| {
            (
                proptest::collection::vec(1usize..=l.max(1), n),
                proptest::collection::vec(1usize..=l, n),
                proptest::collection::vec(0u8..=8, n),
                1usize..=3,
                1usize..=l,
                0u8..=8,
                0u8..=8,
                0u8..=8,
            )
                .prop_map(move |(sizes, deadlines, w_quarters, cap, m, a4, b4, g4)| {
                    let weights = w_quarters.iter().map(|&q| q as f64 / 4.0).collect();
                    SmallCase {
                        instance: ProblemInstance::new(sizes, deadlines, weights, cap).unwrap(),
                        l,
                        m,
                        alpha: a4 as f64 / 4.0,
                        beta: b4 as f64 / 4.0,
                        gamma: g4 as f64 / 4.0,
                    }
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]

        /// Keystone identity: energy plus the dropped constants equals the
        /// direct penalty, for every binary vector.
        #[test]
        fn energy_identity(case in small_case()) {
            let SmallCase { instance, l, m, alpha, beta, gamma } = case;
            let q = QuadraticForm::assemble(&instance, l, m, alpha, beta, gamma).unwrap();
            let sum_sq: usize = instance.sizes().iter().map(|x| x * x).sum();
            let shift = beta * sum_sq as f64
                + gamma * (m * instance.capacity() * instance.capacity()) as f64;
            let dim = instance.n_jobs() * l;
            for mask in 0u32..1 << dim {
                let y: Vec<u8> = (0..dim).map(|p| ((mask >> p) & 1) as u8).collect();
                let c = Schedule::unflatten(instance.n_jobs(), l, &y).unwrap();
                let pen = penalty_of(&instance, l, m, alpha, beta, gamma, &c).unwrap();
                let e = q.energy(&y).unwrap();
                prop_assert!((e + shift - pen).abs() < 1e-9,
                    "identity off by {} at mask {mask}", e + shift - pen);
            }
        }

        /// The assembled dense matrix is symmetric and matches the
        /// structured entry accessor.
        #[test]
        fn dense_is_symmetric_and_consistent(case in small_case()) {
            let SmallCase { instance, l, m, alpha, beta, gamma } = case;
            let q = QuadraticForm::assemble(&instance, l, m, alpha, beta, gamma).unwrap();
            let dense = q.to_dense();
            prop_assert!(dense.is_symmetric());
            for p in 0..dense.dim {
                prop_assert_eq!(dense.b[p], q.b_entry(p));
                for qq in 0..dense.dim {
                    prop_assert_eq!(dense.w[p][qq], q.w_entry(p, qq));
                }
            }
        }

        /// Structured energy equals the dense bilinear evaluation.
        #[test]
        fn structured_energy_matches_dense(case in small_case()) {
            let SmallCase { instance, l, m, alpha, beta, gamma } = case;
            let q = QuadraticForm::assemble(&instance, l, m, alpha, beta, gamma).unwrap();
            let dense = q.to_dense();
            let dim = dense.dim;
            for mask in (0u32..1 << dim).step_by(3) {
                let y: Vec<u8> = (0..dim).map(|p| ((mask >> p) & 1) as u8).collect();
                let a = q.energy(&y).unwrap();
                let b = dense.energy(&y).unwrap();
                prop_assert!((a - b).abs() < 1e-9);
            }
        }

        /// The Hopfield fold changes neither energies nor optima.
        #[test]
        fn hopfield_fold_preserves_energy(case in small_case()) {
            let SmallCase { instance, l, m, alpha, beta, gamma } = case;
            let q = QuadraticForm::assemble(&instance, l, m, alpha, beta, gamma).unwrap();
            let h = to_hopfield(&q);
            let dense_h = h.to_dense();
            let dim = q.dim();
            for p in 0..dim {
                prop_assert_eq!(dense_h.w[p][p], 0.0);
            }
            for mask in 0u32..1 << dim {
                let y: Vec<u8> = (0..dim).map(|p| ((mask >> p) & 1) as u8).collect();
                prop_assert!((dense_h.energy(&y).unwrap() - q.energy(&y).unwrap()).abs() < 1e-9);
            }
        }

        /// The derived horizon always yields an assemblable form.
        #[test]
        fn horizon_parameters_always_assemble(
            sizes in proptest::collection::vec(1usize..6, 1..5),
            cap in 1usize..4,
        ) {
            let n = sizes.len();
            let deadlines: Vec<usize> = sizes.iter().map(|x| x + 2).collect();
            let instance = ProblemInstance::new(sizes, deadlines, vec![1.0f64; n], cap).unwrap();
            let Horizon { length, full_capacity_cols, .. } = instance.horizon();
            let q = QuadraticForm::assemble(&instance, length, full_capacity_cols, 0.1, 5.0, 5.0);
            prop_assert!(q.is_ok());
        }
    }
}
