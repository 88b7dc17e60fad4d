//! Analytic hierarchy process over the four planning criteria.
//!
//! A criterion that is prioritised is judged [`DEFAULT_SCALE`] times as
//! important as one that is not; criteria sharing a status are judged equal.
//! The resulting pairwise matrices are perfectly consistent, so their principal
//! eigenvector is `scale / (scale * p + (4 - p))` for each of the `p`
//! prioritised criteria and `1 / (scale * p + (4 - p))` for the rest.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Number of planning criteria.
pub const CRITERIA: usize = 4;

/// "Extreme importance" on the 1..9 comparison scale.
pub const DEFAULT_SCALE: f64 = 9.0;

const RECIPROCITY_TOL: f64 = 1e-12;
const POWER_TOL: f64 = 1e-12;
const POWER_MAX_ITER: usize = 10_000;

/// Priority flags of the 15 criteria groups, in `[distance, motor, mechanical, accuracy]` order.
pub const GROUP_PRIORITIES: [[bool; CRITERIA]; 15] = [
    [true, false, false, false],
    [false, true, false, false],
    [false, false, true, false],
    [false, false, false, true],
    [true, true, false, false],
    [true, false, true, false],
    [true, false, false, true],
    [false, true, true, false],
    [false, true, false, true],
    [false, false, true, true],
    [true, true, true, false],
    [true, true, false, true],
    [true, false, true, true],
    [false, true, true, true],
    [true, true, true, true],
];

/// Saaty's random consistency index for matrices of order 1..=10.
const RANDOM_INDEX: [f64; 10] = [0.0, 0.0, 0.58, 0.90, 1.12, 1.24, 1.32, 1.41, 1.45, 1.49];

/// A square reciprocal matrix of pairwise importance ratios, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PairwiseMatrix {
    n: usize,
    a: Vec<f64>,
}

impl PairwiseMatrix {
    /// Validates a row-major `n x n` matrix: positive entries, unit diagonal
    /// and `a[j][i] = 1 / a[i][j]`.
    pub fn new(n: usize, a: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidMatrix("dimension must be positive"));
        }
        if a.len() != n * n {
            return Err(Error::InvalidMatrix("entry count does not match dimension"));
        }
        let m = PairwiseMatrix { n, a };
        for i in 0..n {
            if (m.get(i, i) - 1.0).abs() > RECIPROCITY_TOL {
                return Err(Error::InvalidMatrix("diagonal must be 1"));
            }
            for j in 0..n {
                let x = m.get(i, j);
                if !(x.is_finite() && x > 0.0) {
                    return Err(Error::InvalidMatrix("entries must be positive and finite"));
                }
                if (m.get(j, i) - 1.0 / x).abs() > RECIPROCITY_TOL {
                    return Err(Error::InvalidMatrix("matrix is not reciprocal"));
                }
            }
        }
        Ok(m)
    }

    /// Builds the matrix from its strict upper triangle, filling in reciprocals.
    /// `upper` yields `a[i][j]` for `i < j` in row order.
    pub fn from_upper(n: usize, upper: &[f64]) -> Result<Self> {
        if upper.len() != n * n.saturating_sub(1) / 2 {
            return Err(Error::InvalidMatrix(
                "wrong number of upper-triangle entries",
            ));
        }
        let mut a = vec![1.0; n * n];
        let mut it = upper.iter();
        for i in 0..n {
            for j in (i + 1)..n {
                let x = *it.next().unwrap_or(&f64::NAN);
                a[i * n + j] = x;
                a[j * n + i] = 1.0 / x;
            }
        }
        Self::new(n, a)
    }

    /// Matrix in which every prioritised criterion is `scale` times as
    /// important as every non-prioritised one.
    pub fn from_priorities(prioritized: &[bool], scale: f64) -> Result<Self> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::InvalidMatrix("scale must be positive and finite"));
        }
        let n = prioritized.len();
        let mut a = vec![1.0; n * n];
        for (i, &pi) in prioritized.iter().enumerate() {
            for (j, &pj) in prioritized.iter().enumerate() {
                a[i * n + j] = match (pi, pj) {
                    (true, false) => scale,
                    (false, true) => 1.0 / scale,
                    _ => 1.0,
                };
            }
        }
        Self::new(n, a)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        self.a
            .chunks_exact(self.n)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Principal eigenvector normalised to sum 1, by power iteration.
    pub fn priority_vector(&self) -> Result<Vec<f64>> {
        let n = self.n;
        let mut x = vec![1.0 / n as f64; n];
        for _ in 0..POWER_MAX_ITER {
            let mut y = self.mul_vec(&x);
            let s: f64 = y.iter().sum();
            y.iter_mut().for_each(|v| *v /= s);
            let residual = x
                .iter()
                .zip(&y)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            x = y;
            if residual < POWER_TOL {
                return Ok(x);
            }
        }
        Err(Error::NoConvergence {
            iterations: POWER_MAX_ITER,
        })
    }

    /// Consistency index and, for `n >= 3`, the consistency ratio.
    pub fn consistency(&self) -> Result<Consistency> {
        let n = self.n;
        if n < 2 {
            return Ok(Consistency {
                lambda_max: 1.0,
                ci: 0.0,
                cr: None,
            });
        }
        let w = self.priority_vector()?;
        let aw = self.mul_vec(&w);
        let lambda_max = aw.iter().zip(&w).map(|(a, b)| a / b).sum::<f64>() / n as f64;
        let ci = (lambda_max - n as f64) / (n as f64 - 1.0);
        let cr = match RANDOM_INDEX.get(n - 1) {
            Some(&ri) if n >= 3 => Some(ci / ri),
            _ => None,
        };
        Ok(Consistency { lambda_max, ci, cr })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Consistency {
    pub lambda_max: f64,
    pub ci: f64,
    /// `None` when no random index applies (matrices smaller than 3x3 or larger than 10x10).
    pub cr: Option<f64>,
}

/// Weights of the four criteria, in `[distance, motor, mechanical, accuracy]` order.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CriteriaWeights {
    w: [f64; CRITERIA],
    group: Option<u8>,
}

impl CriteriaWeights {
    /// Arbitrary non-negative weights. They need not sum to one.
    pub fn new(w: [f64; CRITERIA]) -> Result<Self> {
        if w.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
            return Err(Error::InvalidWeights);
        }
        Ok(CriteriaWeights { w, group: None })
    }

    /// Distance only. This is what the classical planners optimise.
    pub const fn distance_only() -> Self {
        CriteriaWeights {
            w: [1.0, 0.0, 0.0, 0.0],
            group: None,
        }
    }

    /// `(1, 1, 1, 1)`, the un-normalised form of group 15.
    pub const fn raw_equal() -> Self {
        CriteriaWeights {
            w: [1.0; CRITERIA],
            group: Some(15),
        }
    }

    pub fn from_matrix(m: &PairwiseMatrix) -> Result<Self> {
        if m.dim() != CRITERIA {
            return Err(Error::InvalidMatrix("criteria weights need a 4x4 matrix"));
        }
        let v = m.priority_vector()?;
        Ok(CriteriaWeights {
            w: [v[0], v[1], v[2], v[3]],
            group: None,
        })
    }

    pub fn from_priorities(prioritized: [bool; CRITERIA], scale: f64) -> Result<Self> {
        Self::from_matrix(&PairwiseMatrix::from_priorities(&prioritized, scale)?)
    }

    /// Weights of criteria group `1..=15`.
    pub fn group(index: u8) -> Result<Self> {
        let flags = group_priorities(index)?;
        let mut w = Self::from_priorities(flags, DEFAULT_SCALE)?;
        w.group = Some(index);
        Ok(w)
    }

    pub fn with_group(mut self, group: Option<u8>) -> Self {
        self.group = group;
        self
    }

    pub fn as_array(&self) -> [f64; CRITERIA] {
        self.w
    }

    pub fn group_index(&self) -> Option<u8> {
        self.group
    }

    pub fn distance(&self) -> f64 {
        self.w[0]
    }

    pub fn motor(&self) -> f64 {
        self.w[1]
    }

    pub fn mechanical(&self) -> f64 {
        self.w[2]
    }

    pub fn accuracy(&self) -> f64 {
        self.w[3]
    }

    pub fn sum(&self) -> f64 {
        self.w.iter().sum()
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        let mut w = Self::new(self.w.map(|x| x * c))?;
        w.group = self.group;
        Ok(w)
    }
}

pub fn group_priorities(index: u8) -> Result<[bool; CRITERIA]> {
    match index {
        1..=15 => Ok(GROUP_PRIORITIES[usize::from(index) - 1]),
        _ => Err(Error::GroupOutOfRange(index)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Table of published group weights.
    const TABLE: [[f64; 4]; 15] = [
        [0.75, 0.083, 0.083, 0.083],
        [0.083, 0.75, 0.083, 0.083],
        [0.083, 0.083, 0.75, 0.083],
        [0.083, 0.083, 0.083, 0.75],
        [0.45, 0.45, 0.05, 0.05],
        [0.45, 0.05, 0.45, 0.05],
        [0.45, 0.05, 0.05, 0.45],
        [0.05, 0.45, 0.45, 0.05],
        [0.05, 0.45, 0.05, 0.45],
        [0.05, 0.05, 0.45, 0.45],
        [0.321, 0.321, 0.321, 0.036],
        [0.321, 0.321, 0.036, 0.321],
        [0.321, 0.036, 0.321, 0.321],
        [0.036, 0.321, 0.321, 0.321],
        [0.25, 0.25, 0.25, 0.25],
    ];

    fn close(a: [f64; 4], b: [f64; 4], tol: f64) -> bool {
        a.iter().zip(&b).all(|(x, y)| (x - y).abs() <= tol)
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    fn det(mut m: Vec<f64>, n: usize) -> f64 {
        let mut d = 1.0;
        for c in 0..n {
            let p = (c..n)
                .max_by(|&a, &b| m[a * n + c].abs().total_cmp(&m[b * n + c].abs()))
                .unwrap();
            if m[p * n + c] == 0.0 {
                return 0.0;
            }
            if p != c {
                for k in 0..n {
                    m.swap(p * n + k, c * n + k);
                }
                d = -d;
            }
            d *= m[c * n + c];
            for r in (c + 1)..n {
                let f = m[r * n + c] / m[c * n + c];
                for k in c..n {
                    m[r * n + k] -= f * m[c * n + k];
                }
            }
        }
        d
    }

    /// Largest real root of det(A - lambda I) by scanning down from n + 1 and bisecting.
    fn lambda_max_oracle(m: &PairwiseMatrix) -> f64 {
        let n = m.dim();
        let charp = |l: f64| {
            let mut a: Vec<f64> = (0..n * n).map(|k| m.get(k / n, k % n)).collect();
            for i in 0..n {
                a[i * n + i] -= l;
            }
            det(a, n)
        };
        // A positive reciprocal matrix has lambda_max >= n, and it is bounded by the max row sum.
        let hi_bound = (0..n)
            .map(|i| (0..n).map(|j| m.get(i, j)).sum::<f64>())
            .fold(0.0, f64::max);
        let steps = 100_000;
        let mut hi = hi_bound + 1e-9;
        let mut lo = hi;
        for k in 1..=steps {
            let x = hi_bound - (hi_bound - n as f64 + 1e-6) * k as f64 / steps as f64;
            if charp(x).signum() != charp(hi).signum() {
                lo = x;
                break;
            }
            hi = x;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if charp(mid).signum() == charp(lo).signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn single_priority_matrix_shape() {
        let m = PairwiseMatrix::from_priorities(&[true, false, false, false], 9.0).unwrap();
        for j in 1..4 {
            assert_eq!(m.get(0, j), 9.0);
            for i in 1..4 {
                assert_eq!(m.get(i, j), 1.0);
            }
        }
    }

    #[test]
    fn two_priority_matrix_entries() {
        let m = PairwiseMatrix::from_priorities(&[true, true, false, false], 9.0).unwrap();
        assert_eq!(m.get(0, 1), 1.0);
        assert_eq!(m.get(0, 2), 9.0);
        assert_eq!(m.get(2, 0), 1.0 / 9.0);
    }

    #[test]
    fn no_priorities_is_all_ones() {
        let m = PairwiseMatrix::from_priorities(&[false; 4], 9.0).unwrap();
        assert!((0..16).all(|k| m.get(k / 4, k % 4) == 1.0));
        let w = CriteriaWeights::from_matrix(&m).unwrap();
        assert!(close(w.as_array(), [0.25; 4], 1e-15));
        let c = m.consistency().unwrap();
        assert!(c.ci.abs() < 1e-12);
    }

    #[test]
    fn all_groups_match_table() {
        for g in 1..=15u8 {
            let w = CriteriaWeights::group(g).unwrap();
            assert!(
                close(w.as_array(), TABLE[usize::from(g) - 1], 1e-3),
                "group {g}: {:?}",
                w.as_array()
            );
            assert!((w.sum() - 1.0).abs() < 1e-9);
            assert_eq!(w.group_index(), Some(g));
        }
    }

    #[test]
    fn closed_form_weights() {
        let w = CriteriaWeights::group(1).unwrap().as_array();
        assert!(close(
            w,
            [9.0 / 12.0, 1.0 / 12.0, 1.0 / 12.0, 1.0 / 12.0],
            1e-12
        ));
        let w = CriteriaWeights::group(5).unwrap().as_array();
        assert!(close(
            w,
            [9.0 / 20.0, 9.0 / 20.0, 1.0 / 20.0, 1.0 / 20.0],
            1e-12
        ));
        let w = CriteriaWeights::group(11).unwrap().as_array();
        assert!(close(
            w,
            [9.0 / 28.0, 9.0 / 28.0, 9.0 / 28.0, 1.0 / 28.0],
            1e-12
        ));
    }

    #[test]
    fn group_bounds() {
        assert_eq!(CriteriaWeights::group(0), Err(Error::GroupOutOfRange(0)));
        assert_eq!(CriteriaWeights::group(16), Err(Error::GroupOutOfRange(16)));
    }

    #[test]
    fn group_matrices_are_consistent() {
        for g in 1..=15u8 {
            let m = PairwiseMatrix::from_priorities(&group_priorities(g).unwrap(), 9.0).unwrap();
            let c = m.consistency().unwrap();
            assert!(c.ci.abs() < 1e-9, "group {g}: CI {}", c.ci);
            assert!(c.cr.unwrap().abs() < 1e-9);
        }
    }

    #[test]
    fn perturbed_matrix_ci_matches_eigenvalue_oracle() {
        let m = PairwiseMatrix::from_upper(4, &[3.0, 3.0, 1.0, 3.0, 1.0, 1.0]).unwrap();
        let oracle = lambda_max_oracle(&m);
        let c = m.consistency().unwrap();
        assert!(
            (c.lambda_max - oracle).abs() < 1e-9,
            "{} vs {oracle}",
            c.lambda_max
        );
        let ci = (oracle - 4.0) / 3.0;
        assert!((c.ci - ci).abs() < 1e-9);
        assert!(c.ci > 0.0);
        assert!((c.cr.unwrap() - ci / 0.90).abs() < 1e-9);
    }

    #[test]
    fn small_matrix_has_no_ratio() {
        let m = PairwiseMatrix::from_upper(2, &[5.0]).unwrap();
        let c = m.consistency().unwrap();
        assert!(c.ci.abs() < 1e-12);
        assert_eq!(c.cr, None);
    }

    #[test]
    fn rejects_non_reciprocal() {
        let mut a = vec![1.0; 9];
        a[1] = 3.0;
        assert!(matches!(
            PairwiseMatrix::new(3, a),
            Err(Error::InvalidMatrix(_))
        ));
    }

    #[test]
    fn upper_and_lower_construction_agree() {
        // Fill the lower triangle first and reciprocate into the upper one.
        let upper = [3.0, 5.0, 7.0, 2.0, 4.0, 0.5];
        let a = PairwiseMatrix::from_upper(4, &upper).unwrap();
        let mut lower = vec![1.0; 16];
        let mut k = 0;
        for i in 0..4 {
            for j in (i + 1)..4 {
                lower[j * 4 + i] = 1.0 / upper[k];
                lower[i * 4 + j] = 1.0 / lower[j * 4 + i];
                k += 1;
            }
        }
        let b = PairwiseMatrix::new(4, lower).unwrap();
        let wa = CriteriaWeights::from_matrix(&a).unwrap().as_array();
        let wb = CriteriaWeights::from_matrix(&b).unwrap().as_array();
        assert!(close(wa, wb, 1e-12));
    }

    proptest! {
        #[test]
        fn permuting_flags_permutes_weights(flags in proptest::array::uniform4(any::<bool>()),
                                            perm in Just([0usize, 1, 2, 3]).prop_shuffle()) {
            let w = CriteriaWeights::from_priorities(flags, 9.0).unwrap().as_array();
            let pf = [flags[perm[0]], flags[perm[1]], flags[perm[2]], flags[perm[3]]];
            let pw = CriteriaWeights::from_priorities(pf, 9.0).unwrap().as_array();
            for k in 0..4 {
                prop_assert!((pw[k] - w[perm[k]]).abs() < 1e-12);
            }
        }

        #[test]
        fn prioritized_outweigh_others(flags in proptest::array::uniform4(any::<bool>()),
                                       scale in 1.5f64..9.0) {
            let w = CriteriaWeights::from_priorities(flags, scale).unwrap();
            prop_assert!((w.sum() - 1.0).abs() < 1e-9);
            let w = w.as_array();
            prop_assert!(w.iter().all(|&x| x > 0.0));
            for i in 0..4 {
                for j in 0..4 {
                    if flags[i] && !flags[j] {
                        prop_assert!(w[i] > w[j]);
                    }
                    if flags[i] == flags[j] {
                        prop_assert!((w[i] - w[j]).abs() < 1e-12);
                    }
                }
            }
        }
    }
}
