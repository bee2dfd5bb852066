//! Symmetric row-stochastic matrices: the normalized adjacency A_G and its
//! transforms (Cesàro averages, bipartite doubles, tensor products).
//!
//! Matrices are stored as sparse rows; conversion to a dense nalgebra
//! matrix is gated by a size threshold so eigensolvers only see small
//! instances. All transforms preserve symmetry and row sums exactly up to
//! floating-point rounding.

use crate::error::{Error, Result};
use crate::par;
use nalgebra::DMatrix;

/// Order threshold below which dense conversion (and dense eigensolves)
/// are allowed.
pub const DENSE_THRESHOLD: usize = 4096;

/// A symmetric stochastic matrix in sparse-row form.
#[derive(Clone, Debug)]
pub struct StochasticMatrix {
    n: usize,
    rows: Vec<Vec<(usize, f64)>>,
}

impl StochasticMatrix {
    /// Wraps sparse rows without validation (internal constructor for
    /// transforms that preserve the invariants by construction).
    pub(crate) fn from_rows(n: usize, rows: Vec<Vec<(usize, f64)>>) -> Self {
        debug_assert_eq!(rows.len(), n);
        Self { n, rows }
    }

    /// Builds from sparse rows, checking symmetry and row sums to 1e-12.
    pub fn new_checked(n: usize, rows: Vec<Vec<(usize, f64)>>) -> Result<Self> {
        let m = Self::from_rows(n, rows);
        m.validate()?;
        Ok(m)
    }

    /// Builds from a dense array, checking symmetry and row sums.
    pub fn from_dense(d: &DMatrix<f64>) -> Result<Self> {
        let n = d.nrows();
        if d.ncols() != n {
            return Err(Error::InvalidInput("matrix not square".into()));
        }
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| d[(i, j)] != 0.0)
                    .map(|j| (j, d[(i, j)]))
                    .collect()
            })
            .collect();
        Self::new_checked(n, rows)
    }

    fn validate(&self) -> Result<()> {
        for (i, row) in self.rows.iter().enumerate() {
            let sum: f64 = row.iter().map(|&(_, v)| v).sum();
            if (sum - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidInput(format!(
                    "row {i} sums to {sum}, expected 1"
                )));
            }
            for &(j, v) in row {
                if v < 0.0 {
                    return Err(Error::InvalidInput("negative entry".into()));
                }
                if (self.entry(j, i) - v).abs() > 1e-12 {
                    return Err(Error::InvalidInput(format!(
                        "asymmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<(usize, f64)>] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.rows[i]
            .iter()
            .find(|&&(k, _)| k == j)
            .map(|&(_, v)| v)
            .unwrap_or(0.0)
    }

    /// y = A x.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        par::map_indexed(self.n, |i| {
            self.rows[i].iter().map(|&(j, v)| v * x[j]).sum()
        })
    }

    /// Applies A to each coordinate of a list of vectors: points[i] is a
    /// dim-vector attached to vertex i; returns A acting on each coordinate
    /// slice.
    pub fn apply_pointwise(&self, points: &[Vec<f64>]) -> Vec<Vec<f64>> {
        par::map_indexed(self.n, |i| {
            let dim = points[i].len();
            let mut acc = vec![0.0; dim];
            for &(j, v) in &self.rows[i] {
                for (a, &x) in acc.iter_mut().zip(points[j].iter()) {
                    *a += v * x;
                }
            }
            acc
        })
    }

    /// Dense conversion, refused above `DENSE_THRESHOLD`.
    pub fn to_dense(&self) -> Result<DMatrix<f64>> {
        if self.n > DENSE_THRESHOLD {
            return Err(Error::TooLarge {
                n: self.n,
                threshold: DENSE_THRESHOLD,
            });
        }
        let mut d = DMatrix::zeros(self.n, self.n);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                d[(i, j)] = v;
            }
        }
        Ok(d)
    }

    /// The Cesàro average 𝒜_m(A) = (1/m) Σ_{t=0}^{m-1} A^t.
    ///
    /// Computed densely (the result of averaging powers is generally not
    /// sparse), so the order must be within the dense threshold.
    pub fn cesaro(&self, m: u32) -> Result<StochasticMatrix> {
        if m == 0 {
            return Err(Error::InvalidInput("cesaro needs m ≥ 1".into()));
        }
        let a = self.to_dense()?;
        let mut acc = DMatrix::<f64>::identity(self.n, self.n);
        let mut cur = DMatrix::<f64>::identity(self.n, self.n);
        for _ in 1..m {
            cur = &cur * &a;
            acc += &cur;
        }
        acc /= m as f64;
        let rows = (0..self.n)
            .map(|i| {
                (0..self.n)
                    .filter(|&j| acc[(i, j)] != 0.0)
                    .map(|j| (j, acc[(i, j)]))
                    .collect()
            })
            .collect();
        Ok(StochasticMatrix::from_rows(self.n, rows))
    }

    /// The bipartite double: the 2n×2n block matrix [[0, A], [A, 0]].
    pub fn bipartite_double(&self) -> StochasticMatrix {
        let n = self.n;
        let mut rows: Vec<Vec<(usize, f64)>> = Vec::with_capacity(2 * n);
        for i in 0..n {
            rows.push(self.rows[i].iter().map(|&(j, v)| (j + n, v)).collect());
        }
        for i in 0..n {
            rows.push(self.rows[i].clone());
        }
        StochasticMatrix::from_rows(2 * n, rows)
    }

    /// Kronecker product A ⊗ B (row-major index (i,s) ↦ i·order(B)+s).
    pub fn tensor(&self, other: &StochasticMatrix) -> StochasticMatrix {
        let (n, m) = (self.n, other.n);
        let rows = par::map_indexed(n * m, |idx| {
            let (i, s) = (idx / m, idx % m);
            let mut row = Vec::with_capacity(self.rows[i].len() * other.rows[s].len());
            for &(j, a) in &self.rows[i] {
                for &(t, b) in &other.rows[s] {
                    row.push((j * m + t, a * b));
                }
            }
            row.sort_unstable_by_key(|&(k, _)| k);
            row
        });
        StochasticMatrix::from_rows(n * m, rows)
    }
}

#[cfg(test)]
mod tests {
    use crate::graph::RegularMultigraph;

    #[test]
    fn cesaro_small_cases() {
        let a = RegularMultigraph::cycle(3).unwrap().normalized_adjacency();
        let c1 = a.cesaro(1).unwrap();
        for i in 0..3 {
            assert_eq!(c1.entry(i, i), 1.0);
        }
        let c2 = a.cesaro(2).unwrap();
        assert!((c2.entry(0, 0) - 0.5).abs() < 1e-15);
        assert!((c2.entry(0, 1) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn double_of_scalar() {
        let one = RegularMultigraph::build(1, &[(0, 0, 1)]).unwrap();
        let d = one.normalized_adjacency().bipartite_double();
        assert_eq!(d.order(), 2);
        assert_eq!(d.entry(0, 1), 1.0);
        assert_eq!(d.entry(0, 0), 0.0);
        d.validate().unwrap();
    }

    #[test]
    fn tensor_identity() {
        let a = RegularMultigraph::cycle(3).unwrap().normalized_adjacency();
        let eye = RegularMultigraph::identity(2).unwrap().normalized_adjacency();
        let t = eye.tensor(&a);
        assert_eq!(t.order(), 6);
        t.validate().unwrap();
        assert_eq!(t.entry(0, 1), 0.5); // block structure preserves A
        assert_eq!(t.entry(0, 4), 0.0);
    }

    #[test]
    fn graph_power_matches_matrix_power() {
        let g = crate::graph::random_regular(8, 4, 3).unwrap();
        let a = g.normalized_adjacency().to_dense().unwrap();
        let a2 = &a * &a;
        let gp = g.power(2).unwrap().normalized_adjacency().to_dense().unwrap();
        assert!((a2 - gp).abs().max() < 1e-12);
    }

    #[test]
    fn graph_cesaro_matches_matrix_cesaro() {
        let g = crate::graph::random_regular(8, 3, 5).unwrap();
        for m in 1..5u32 {
            let via_graph = g.cesaro(m).unwrap().normalized_adjacency().to_dense().unwrap();
            let via_matrix = g.normalized_adjacency().cesaro(m).unwrap().to_dense().unwrap();
            assert!((via_graph - via_matrix).abs().max() < 1e-12);
        }
    }
}
