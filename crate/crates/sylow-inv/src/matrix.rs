//! Dense matrices over a [`FieldCtx`]. Sizes here are tiny (n <= 10 or so),
//! so everything is a straightforward exact computation; zero-dimensional
//! blocks are allowed because degenerate rank parameters produce them.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Fel, FieldCtx};

#[derive(Clone)]
pub struct Mat {
    ctx: Arc<FieldCtx>,
    rows: usize,
    cols: usize,
    d: Vec<Fel>,
}

impl PartialEq for Mat {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.d == other.d
            && self.ctx.same_field(&other.ctx)
    }
}
impl Eq for Mat {}

impl Hash for Mat {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rows.hash(state);
        self.cols.hash(state);
        self.d.hash(state);
    }
}

impl Mat {
    pub fn zero(ctx: Arc<FieldCtx>, rows: usize, cols: usize) -> Self {
        Mat {
            ctx,
            rows,
            cols,
            d: vec![Fel::ZERO; rows * cols],
        }
    }

    pub fn identity(ctx: Arc<FieldCtx>, n: usize) -> Self {
        let mut m = Self::zero(ctx, n, n);
        for i in 0..n {
            m.set(i, i, Fel::ONE);
        }
        m
    }

    /// The reversal matrix J (ones on the anti-diagonal).
    pub fn anti_identity(ctx: Arc<FieldCtx>, n: usize) -> Self {
        let mut m = Self::zero(ctx, n, n);
        for i in 0..n {
            m.set(i, n - 1 - i, Fel::ONE);
        }
        m
    }

    pub fn from_rows(ctx: Arc<FieldCtx>, rows: Vec<Vec<Fel>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let mut m = Self::zero(ctx, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c);
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Fel {
        self.d[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Fel) {
        self.d[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zero(self.ctx.clone(), self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn map<F: Fn(Fel) -> Fel>(&self, f: F) -> Mat {
        let mut out = self.clone();
        for v in out.d.iter_mut() {
            *v = f(*v);
        }
        out
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = Mat::zero(self.ctx.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == Fel::ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b == Fel::ZERO {
                        continue;
                    }
                    let cur = out.get(i, j);
                    out.set(i, j, self.ctx.add(cur, self.ctx.mul(a, b)));
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (v, w) in out.d.iter_mut().zip(&other.d) {
            *v = self.ctx.add(*v, *w);
        }
        out
    }

    pub fn neg(&self) -> Mat {
        self.map(|v| self.ctx.neg(v))
    }

    pub fn scale(&self, c: Fel) -> Mat {
        self.map(|v| self.ctx.mul(v, c))
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_lower_unitriangular(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.rows {
            if self.get(i, i) != Fel::ONE {
                return false;
            }
            for j in (i + 1)..self.cols {
                if self.get(i, j) != Fel::ZERO {
                    return false;
                }
            }
        }
        true
    }

    pub fn det(&self) -> Fel {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Fel::ONE;
        for col in 0..n {
            let pivot = (col..n).find(|&i| m.get(i, col) != Fel::ZERO);
            let Some(pr) = pivot else {
                return Fel::ZERO;
            };
            if pr != col {
                for j in 0..n {
                    let a = m.get(col, j);
                    let b = m.get(pr, j);
                    m.set(col, j, b);
                    m.set(pr, j, a);
                }
                det = self.ctx.neg(det);
            }
            let pv = m.get(col, col);
            det = self.ctx.mul(det, pv);
            let inv = self.ctx.inv(pv).unwrap();
            for i in (col + 1)..n {
                let factor = self.ctx.mul(m.get(i, col), inv);
                if factor == Fel::ZERO {
                    continue;
                }
                for j in col..n {
                    let v = self.ctx.sub(m.get(i, j), self.ctx.mul(factor, m.get(col, j)));
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<Mat> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of non-square".into()));
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut inv = Mat::identity(self.ctx.clone(), n);
        for col in 0..n {
            let pivot = (col..n).find(|&i| m.get(i, col) != Fel::ZERO);
            let Some(pr) = pivot else {
                return Err(Error::SingularMatrix);
            };
            if pr != col {
                for j in 0..n {
                    let (a, b) = (m.get(col, j), m.get(pr, j));
                    m.set(col, j, b);
                    m.set(pr, j, a);
                    let (a, b) = (inv.get(col, j), inv.get(pr, j));
                    inv.set(col, j, b);
                    inv.set(pr, j, a);
                }
            }
            let pinv = self.ctx.inv(m.get(col, col))?;
            for j in 0..n {
                m.set(col, j, self.ctx.mul(m.get(col, j), pinv));
                inv.set(col, j, self.ctx.mul(inv.get(col, j), pinv));
            }
            for i in 0..n {
                if i == col {
                    continue;
                }
                let factor = m.get(i, col);
                if factor == Fel::ZERO {
                    continue;
                }
                for j in 0..n {
                    let v = self.ctx.sub(m.get(i, j), self.ctx.mul(factor, m.get(col, j)));
                    m.set(i, j, v);
                    let v = self.ctx.sub(inv.get(i, j), self.ctx.mul(factor, inv.get(col, j)));
                    inv.set(i, j, v);
                }
            }
        }
        Ok(inv)
    }

    /// Assemble the 3x3 block pattern `[[A,0,0],[B,F,0],[C,D,E]]` with block
    /// column widths (k, l, k).
    pub fn block3(
        ctx: Arc<FieldCtx>,
        k: usize,
        l: usize,
        a: &Mat,
        b: &Mat,
        f: &Mat,
        c: &Mat,
        d: &Mat,
        e: &Mat,
    ) -> Mat {
        let n = 2 * k + l;
        let mut m = Mat::zero(ctx, n, n);
        let paste = |m: &mut Mat, blk: &Mat, r0: usize, c0: usize| {
            for i in 0..blk.rows() {
                for j in 0..blk.cols() {
                    m.set(r0 + i, c0 + j, blk.get(i, j));
                }
            }
        };
        paste(&mut m, a, 0, 0);
        paste(&mut m, b, k, 0);
        paste(&mut m, f, k, k);
        paste(&mut m, c, k + l, 0);
        paste(&mut m, d, k + l, k);
        paste(&mut m, e, k + l, k + l);
        m
    }

    pub fn block_at(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Mat {
        let mut out = Mat::zero(self.ctx.clone(), rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.set(i, j, self.get(r0 + i, c0 + j));
            }
        }
        out
    }

    /// Row-major JSON of coefficient digit vectors.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = (0..self.rows)
            .map(|i| {
                let row: Vec<serde_json::Value> = (0..self.cols)
                    .map(|j| serde_json::json!(self.ctx.digits(self.get(i, j))))
                    .collect();
                serde_json::Value::Array(row)
            })
            .collect();
        serde_json::Value::Array(rows)
    }

    /// Canonical flat string of entry indices, used as a set key.
    pub fn key(&self) -> String {
        let parts: Vec<String> = self.d.iter().map(|f| f.0.to_string()).collect();
        format!("{}x{}:{}", self.rows, self.cols, parts.join(","))
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} over {:?}", self.rows, self.cols, self.ctx)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| self.ctx.fmt_elem(self.get(i, j)))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}
