//! Dense square matrices over `GF(3^r)`, row-major.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElement};

/// Ordering is lexicographic over row-major entries, each compared by field index.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MatrixGF {
    n: usize,
    entries: Vec<FieldElement>,
}

impl MatrixGF {
    pub fn from_entries(n: usize, entries: Vec<FieldElement>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::domain(alloc::format!(
                "{} entries cannot fill a {n}x{n} matrix",
                entries.len()
            )));
        }
        Ok(MatrixGF { n, entries })
    }

    pub fn zero(n: usize) -> Self {
        MatrixGF {
            n,
            entries: vec![FieldElement::ZERO; n * n],
        }
    }

    pub fn identity(ctx: &FieldCtx, n: usize) -> Self {
        let mut m = MatrixGF::zero(n);
        for i in 0..n {
            m.set(i, i, ctx.one());
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.entries[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        self.entries[i * self.n + j] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut t = MatrixGF::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, ctx: &FieldCtx, rhs: &MatrixGF) -> Self {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let n = self.n;
        let mut out = MatrixGF::zero(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = FieldElement::ZERO;
                for k in 0..n {
                    acc = ctx.add(acc, ctx.mul(self.get(i, k), rhs.get(k, j)));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn trace(&self, ctx: &FieldCtx) -> FieldElement {
        (0..self.n).fold(FieldElement::ZERO, |acc, i| ctx.add(acc, self.get(i, i)))
    }

    /// Determinant by Gaussian elimination.
    pub fn det(&self, ctx: &FieldCtx) -> FieldElement {
        let n = self.n;
        let mut m = self.clone();
        let mut det = ctx.one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !m.get(r, col).is_zero()) else {
                return FieldElement::ZERO;
            };
            if pivot != col {
                for j in 0..n {
                    let (a, b) = (m.get(col, j), m.get(pivot, j));
                    m.set(col, j, b);
                    m.set(pivot, j, a);
                }
                det = ctx.neg(det);
            }
            let p = m.get(col, col);
            det = ctx.mul(det, p);
            let p_inv = ctx.inv(p).expect("pivot is nonzero");
            for r in col + 1..n {
                let f = ctx.mul(m.get(r, col), p_inv);
                if f.is_zero() {
                    continue;
                }
                for j in col..n {
                    let v = ctx.sub(m.get(r, j), ctx.mul(f, m.get(col, j)));
                    m.set(r, j, v);
                }
            }
        }
        det
    }

    /// Gauss–Jordan inverse; `None` when singular.
    pub fn inverse(&self, ctx: &FieldCtx) -> Option<Self> {
        let n = self.n;
        let mut m = self.clone();
        let mut inv = MatrixGF::identity(ctx, n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m.get(r, col).is_zero())?;
            if pivot != col {
                for j in 0..n {
                    let (a, b) = (m.get(col, j), m.get(pivot, j));
                    m.set(col, j, b);
                    m.set(pivot, j, a);
                    let (a, b) = (inv.get(col, j), inv.get(pivot, j));
                    inv.set(col, j, b);
                    inv.set(pivot, j, a);
                }
            }
            let p_inv = ctx.inv(m.get(col, col)).ok()?;
            for j in 0..n {
                m.set(col, j, ctx.mul(m.get(col, j), p_inv));
                inv.set(col, j, ctx.mul(inv.get(col, j), p_inv));
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = m.get(r, col);
                if f.is_zero() {
                    continue;
                }
                for j in 0..n {
                    m.set(r, j, ctx.sub(m.get(r, j), ctx.mul(f, m.get(col, j))));
                    inv.set(r, j, ctx.sub(inv.get(r, j), ctx.mul(f, inv.get(col, j))));
                }
            }
        }
        Some(inv)
    }

    /// All `n×n` matrices in lexicographic order of their row-major entry indices.
    pub fn all(ctx: &FieldCtx, n: usize) -> impl Iterator<Item = MatrixGF> + '_ {
        let q = ctx.q() as usize;
        let total = q.checked_pow((n * n) as u32).expect("matrix space too large to enumerate");
        (0..total).map(move |mut idx| {
            let mut entries = vec![FieldElement::ZERO; n * n];
            for slot in entries.iter_mut().rev() {
                *slot = ctx.element(idx % q);
                idx /= q;
            }
            MatrixGF { n, entries }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl2_over_f3_has_48_elements_and_inverses() {
        let ctx = FieldCtx::new(1, None).unwrap();
        let mut count = 0;
        for m in MatrixGF::all(&ctx, 2) {
            let det = m.det(&ctx);
            match m.inverse(&ctx) {
                Some(inv) => {
                    assert!(!det.is_zero());
                    assert_eq!(m.mul(&ctx, &inv), MatrixGF::identity(&ctx, 2));
                    count += 1;
                }
                None => assert!(det.is_zero()),
            }
        }
        assert_eq!(count, 48);
    }

    #[test]
    fn determinant_is_multiplicative_on_3x3_samples() {
        let ctx = FieldCtx::new(2, None).unwrap();
        let mats: Vec<MatrixGF> = MatrixGF::all(&ctx, 3).step_by(7_919).take(60).collect();
        for a in &mats {
            for b in mats.iter().take(10) {
                assert_eq!(
                    a.mul(&ctx, b).det(&ctx),
                    ctx.mul(a.det(&ctx), b.det(&ctx))
                );
            }
        }
    }

    #[test]
    fn enumeration_is_sorted() {
        let ctx = FieldCtx::new(1, None).unwrap();
        let all: Vec<_> = MatrixGF::all(&ctx, 2).collect();
        assert_eq!(all.len(), 81);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }
}
