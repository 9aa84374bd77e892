//! Exact dense linear algebra over a small finite field, enough for kernel
//! computations of the invariant-space oracle.

use std::sync::Arc;

use crate::field::{Fel, FieldCtx};

/// Row-major matrix over the field as plain vectors.
pub struct DenseMat {
    pub ctx: Arc<FieldCtx>,
    pub rows: Vec<Vec<Fel>>,
    pub cols: usize,
}

impl DenseMat {
    pub fn new(ctx: Arc<FieldCtx>, cols: usize) -> Self {
        DenseMat {
            ctx,
            rows: Vec::new(),
            cols,
        }
    }

    pub fn push_row(&mut self, row: Vec<Fel>) {
        assert_eq!(row.len(), self.cols);
        self.rows.push(row);
    }

    /// Reduced row echelon form; returns pivot column indices.
    pub fn rref(&mut self) -> Vec<usize> {
        let ctx = self.ctx.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            let Some(pr) = (row..self.rows.len()).find(|&i| self.rows[i][col] != Fel::ZERO) else {
                continue;
            };
            self.rows.swap(row, pr);
            let inv = ctx.inv(self.rows[row][col]).unwrap();
            for v in self.rows[row].iter_mut() {
                *v = ctx.mul(*v, inv);
            }
            for i in 0..self.rows.len() {
                if i == row {
                    continue;
                }
                let factor = self.rows[i][col];
                if factor == Fel::ZERO {
                    continue;
                }
                for j in 0..self.cols {
                    let s = ctx.mul(factor, self.rows[row][j]);
                    self.rows[i][j] = ctx.sub(self.rows[i][j], s);
                }
            }
            pivots.push(col);
            row += 1;
            if row == self.rows.len() {
                break;
            }
        }
        self.rows.truncate(row);
        pivots
    }

    /// Basis of the right kernel {v : Av = 0}.
    pub fn kernel(&mut self) -> Vec<Vec<Fel>> {
        let ctx = self.ctx.clone();
        let pivots = self.rref();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivot_set.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![Fel::ZERO; self.cols];
            v[fc] = Fel::ONE;
            for (ri, &pc) in pivots.iter().enumerate() {
                v[pc] = ctx.neg(self.rows[ri][fc]);
            }
            basis.push(v);
        }
        basis
    }
}

/// Rank of a list of vectors.
pub fn rank(ctx: &Arc<FieldCtx>, vectors: &[Vec<Fel>], cols: usize) -> usize {
    let mut m = DenseMat::new(ctx.clone(), cols);
    for v in vectors {
        m.push_row(v.clone());
    }
    m.rref().len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    #[test]
    fn kernel_of_simple_system() {
        let ctx = make_field(2, 1).unwrap();
        // x + y = 0, y + z = 0 over GF(2): kernel spanned by (1,1,1)
        let mut m = DenseMat::new(ctx.clone(), 3);
        m.push_row(vec![Fel::ONE, Fel::ONE, Fel::ZERO]);
        m.push_row(vec![Fel::ZERO, Fel::ONE, Fel::ONE]);
        let k = m.kernel();
        assert_eq!(k, vec![vec![Fel::ONE, Fel::ONE, Fel::ONE]]);
    }

    #[test]
    fn rank_counts_independent_rows() {
        let ctx = make_field(3, 1).unwrap();
        let one = Fel::ONE;
        let two = ctx.from_int(2);
        let rows = vec![
            vec![one, two, Fel::ZERO],
            vec![two, one, one],
            vec![Fel::ZERO, Fel::ZERO, Fel::ZERO],
        ];
        assert_eq!(rank(&ctx, &rows, 3), 2);
    }
}
