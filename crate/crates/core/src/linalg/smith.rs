use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{IntMatrix, Ring};

/// `U · A · V = D` with `U`, `V` invertible over the ring and `D` diagonal,
/// `d₁ | d₂ | …`. The inverses of `U` and `V` are carried along so that
/// homology bases can change coordinates without a separate inversion.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    pub rank: usize,
}

impl SmithForm {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d[(i, i)].clone()).collect()
    }
}

/// Integer Smith normal form, returned as `(U, D, V)`.
pub fn smith_normal_form(a: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let s = smith_form(a, Ring::Integers);
    (s.u, s.d, s.v)
}

/// The nonzero diagonal of the integer Smith form.
pub fn invariant_factors(a: &IntMatrix) -> Vec<BigInt> {
    smith_form(a, Ring::Integers).diagonal()
}

struct Reduction {
    ring: Ring,
    a: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Reduction {
    /// `row[dst] += c · row[src]`
    fn row_op(&mut self, dst: usize, src: usize, c: &BigInt) {
        self.a.add_row_multiple(dst, src, c);
        self.u.add_row_multiple(dst, src, c);
        self.u_inv.add_col_multiple(src, dst, &-c);
        self.a.reduce_row(dst, self.ring);
        self.u.reduce_row(dst, self.ring);
        self.u_inv.reduce_col(src, self.ring);
    }

    /// `col[dst] += c · col[src]`
    fn col_op(&mut self, dst: usize, src: usize, c: &BigInt) {
        self.a.add_col_multiple(dst, src, c);
        self.v.add_col_multiple(dst, src, c);
        self.v_inv.add_row_multiple(src, dst, &-c);
        self.a.reduce_col(dst, self.ring);
        self.v.reduce_col(dst, self.ring);
        self.v_inv.reduce_row(src, self.ring);
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }

    /// Smallest nonzero |entry| in `rows × cols`.
    fn smallest(
        &self,
        rows: impl Iterator<Item = usize> + Clone,
        cols: impl Iterator<Item = usize> + Clone,
    ) -> Option<(usize, usize)> {
        let mut best: Option<((usize, usize), BigInt)> = None;
        for i in rows {
            for j in cols.clone() {
                let x = &self.a[(i, j)];
                if x.is_zero() {
                    continue;
                }
                let ax = x.abs();
                if best.as_ref().is_none_or(|(_, b)| ax < *b) {
                    best = Some(((i, j), ax));
                }
            }
        }
        best.map(|(p, _)| p)
    }
}

/// Smith form over `ring`. Pivots are chosen as the smallest nonzero
/// absolute value of the remaining submatrix.
pub fn smith_form(a: &IntMatrix, ring: Ring) -> SmithForm {
    let (m, n) = (a.rows(), a.cols());
    let mut r = Reduction {
        ring,
        a: a.reduce(ring),
        u: IntMatrix::identity(m),
        u_inv: IntMatrix::identity(m),
        v: IntMatrix::identity(n),
        v_inv: IntMatrix::identity(n),
    };
    let mut t = 0;
    while t < m.min(n) {
        let Some((pi, pj)) = r.smallest(t..m, t..n) else {
            break;
        };
        r.swap_rows(t, pi);
        r.swap_cols(t, pj);
        loop {
            let pivot = r.a[(t, t)].clone();
            for i in t + 1..m {
                if !r.a[(i, t)].is_zero() {
                    let q = r.a[(i, t)].div_floor(&pivot);
                    r.row_op(i, t, &-q);
                }
            }
            for j in t + 1..n {
                if !r.a[(t, j)].is_zero() {
                    let q = r.a[(t, j)].div_floor(&pivot);
                    r.col_op(j, t, &-q);
                }
            }
            let col_dirty = (t + 1..m).any(|i| !r.a[(i, t)].is_zero());
            let row_dirty = (t + 1..n).any(|j| !r.a[(t, j)].is_zero());
            if col_dirty || row_dirty {
                // a remainder smaller than the pivot survived; move it up
                let (pi, _) = r.smallest(t..m, std::iter::once(t)).unwrap_or((t, t));
                let (_, pj) = r.smallest(std::iter::once(t), t..n).unwrap_or((t, t));
                if r.a[(pi, t)].abs() <= r.a[(t, pj)].abs() {
                    r.swap_rows(t, pi);
                } else {
                    r.swap_cols(t, pj);
                }
                continue;
            }
            let offender = (t + 1..m)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !r.a[(i, j)].is_multiple_of(&pivot));
            match offender {
                Some((i, _)) => r.row_op(t, i, &BigInt::one()),
                None => break,
            }
        }
        if r.a[(t, t)].is_negative() {
            r.negate_row(t);
        }
        t += 1;
    }
    SmithForm {
        u: r.u,
        u_inv: r.u_inv,
        d: r.a,
        v: r.v,
        v_inv: r.v_inv,
        rank: t,
    }
}
