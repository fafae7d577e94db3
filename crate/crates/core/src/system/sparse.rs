//! Compressed sparse row storage for the assembled symmetric system.

use alloc::vec;
use alloc::vec::Vec;

/// Square sparse matrix in CSR form with the full (symmetric) pattern
/// stored. Built from coordinate triplets; duplicates are summed in
/// insertion order, so assembly is deterministic for a fixed element order.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseSym {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseSym {
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> SparseSym {
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for &(i, j, v) in triplets {
            assert!(i < n && j < n, "triplet index out of range");
            rows[i].push((j, v));
        }
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for row in &mut rows {
            // Stable sort keeps insertion order within one column, so the
            // duplicate sum below is order-deterministic.
            row.sort_by_key(|&(j, _)| j);
            let mut it = row.iter().peekable();
            while let Some(&(j, v)) = it.next() {
                let mut sum = v;
                while let Some(&&(j2, v2)) = it.peek() {
                    if j2 != j {
                        break;
                    }
                    sum += v2;
                    it.next();
                }
                col_idx.push(j);
                values.push(sum);
            }
            row_ptr.push(col_idx.len());
        }
        SparseSym { n, row_ptr, col_idx, values }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Entries (column, value) of row `i` in ascending column order.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[span.clone()].iter().zip(&self.values[span]).map(|(&j, &v)| (j, v))
    }

    /// Stored value at (i, j), or zero when outside the pattern.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        match self.find(i, j) {
            Some(pos) => self.values[pos],
            None => 0.0,
        }
    }

    /// Overwrites the stored entry (i, j); false when outside the pattern.
    pub fn set(&mut self, i: usize, j: usize, v: f64) -> bool {
        match self.find(i, j) {
            Some(pos) => {
                self.values[pos] = v;
                true
            }
            None => false,
        }
    }

    fn find(&self, i: usize, j: usize) -> Option<usize> {
        let span = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[span.clone()]
            .binary_search(&j)
            .ok()
            .map(|off| span.start + off)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        self.mul_into(x, &mut y);
        y
    }

    pub fn mul_into(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.n);
        assert_eq!(y.len(), self.n);
        for (i, out) in y.iter_mut().enumerate() {
            let mut acc = 0.0;
            for pos in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.values[pos] * x[self.col_idx[pos]];
            }
            *out = acc;
        }
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    /// Row-major dense copy (use only for small systems).
    pub fn to_dense(&self) -> Vec<f64> {
        let mut dense = vec![0.0; self.n * self.n];
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                dense[i * self.n + j] = v;
            }
        }
        dense
    }

    /// Largest |A_ij - A_ji| over the pattern.
    pub fn asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                worst = worst.max(crate::math::abs(v - self.get(j, i)));
            }
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        let mut best: f64 = 0.0;
        for &v in &self.values {
            best = best.max(crate::math::abs(v));
        }
        best
    }
}
