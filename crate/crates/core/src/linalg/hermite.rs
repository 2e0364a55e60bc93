use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{is_zero_vector, IntMatrix, Ring};

/// Column-style Hermite form `H = A · V` with `V` unimodular.
///
/// `pivots[k]` is the row where column `k` of `H` has its first nonzero
/// entry, which is positive. Pivot rows strictly increase, and entries left of a
/// pivot in its row lie in `[0, pivot)`. Columns past the pivots are zero.
#[derive(Clone, Debug)]
pub struct HermiteForm {
    pub h: IntMatrix,
    pub v: IntMatrix,
    pub pivots: Vec<usize>,
}

pub fn column_hermite_form(a: &IntMatrix, ring: Ring) -> HermiteForm {
    let (m, n) = (a.rows(), a.cols());
    let mut h = a.reduce(ring);
    let mut v = IntMatrix::identity(n);
    let mut pivots = Vec::new();
    let col_op = |h: &mut IntMatrix, v: &mut IntMatrix, dst: usize, src: usize, c: &BigInt| {
        h.add_col_multiple(dst, src, c);
        v.add_col_multiple(dst, src, c);
        h.reduce_col(dst, ring);
        v.reduce_col(dst, ring);
    };
    let swap = |h: &mut IntMatrix, v: &mut IntMatrix, i: usize, j: usize| {
        h.swap_cols(i, j);
        v.swap_cols(i, j);
    };
    for r in 0..m {
        let c = pivots.len();
        if c == n {
            break;
        }
        loop {
            let best = (c..n)
                .filter(|&j| !h[(r, j)].is_zero())
                .min_by(|&x, &y| h[(r, x)].abs().cmp(&h[(r, y)].abs()));
            let Some(j) = best else { break };
            swap(&mut h, &mut v, c, j);
            let pivot = h[(r, c)].clone();
            let mut clean = true;
            for j in c + 1..n {
                if !h[(r, j)].is_zero() {
                    let q = h[(r, j)].div_floor(&pivot);
                    col_op(&mut h, &mut v, j, c, &-q);
                    clean &= h[(r, j)].is_zero();
                }
            }
            if clean {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_col(c);
            v.negate_col(c);
        }
        let pivot = h[(r, c)].clone();
        for j in 0..c {
            let q = h[(r, j)].div_floor(&pivot);
            col_op(&mut h, &mut v, j, c, &-q);
        }
        pivots.push(r);
    }
    HermiteForm { h, v, pivots }
}

/// Some `x` with `A x = b`, if `b` lies in the column span of `A`.
pub fn solve_in_image(a: &IntMatrix, b: &[BigInt], ring: Ring) -> Option<Vec<BigInt>> {
    assert_eq!(a.rows(), b.len(), "right-hand side length");
    let hf = column_hermite_form(a, ring);
    let mut residual: Vec<BigInt> = b.iter().cloned().map(|x| ring.reduce(x)).collect();
    let mut y = vec![BigInt::zero(); a.cols()];
    for (c, &r) in hf.pivots.iter().enumerate() {
        let (q, rem) = residual[r].div_mod_floor(&hf.h[(r, c)]);
        if !rem.is_zero() {
            return None;
        }
        if q.is_zero() {
            continue;
        }
        for (i, res) in residual.iter_mut().enumerate().skip(r) {
            let hv = &hf.h[(i, c)];
            if !hv.is_zero() {
                *res = ring.reduce(&*res - hv * &q);
            }
        }
        y[c] = q;
    }
    if !is_zero_vector(&residual) {
        return None;
    }
    Some(hf.v.apply(&y).into_iter().map(|x| ring.reduce(x)).collect())
}

/// True iff `b` is an integer combination of the columns of `A`.
pub fn image_membership(a: &IntMatrix, b: &[BigInt]) -> bool {
    solve_in_image(a, b, Ring::Integers).is_some()
}
