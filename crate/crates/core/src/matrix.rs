//! Dense square matrices, row major. Sizes here are a few hundred at most,
//! so there is no blocking or sparsity.

use alloc::vec;
use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.n + j] = value;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// Applies the matrix to a list of 2-D points, treating them as the two
    /// columns of an n x 2 matrix.
    pub fn mul_points(&self, points: &[[f64; 2]]) -> Vec<[f64; 2]> {
        debug_assert_eq!(points.len(), self.n);
        let mut out = vec![[0.0, 0.0]; self.n];
        for (i, o) in out.iter_mut().enumerate() {
            let row = self.row(i);
            let mut x = 0.0;
            let mut y = 0.0;
            for (j, &a) in row.iter().enumerate() {
                x += a * points[j][0];
                y += a * points[j][1];
            }
            *o = [x, y];
        }
        out
    }
}
