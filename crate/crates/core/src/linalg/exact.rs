//! The long exact homology sequence of a short exact sequence of chain
//! complexes `0 → A →i B →j C → 0`, with the connecting map computed by
//! lifting along `j` and pulling back along `i`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::homology::reduce_mod_order;
use super::{
    homology_basis, image_membership, smith_form, solve_in_image, ChainComplex, HomologyBasis,
    HomologyGroup, IntMatrix, LinalgError, Ring,
};

/// Degreewise matrices `f_n : X_n → Y_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    matrices: Vec<IntMatrix>,
}

impl ChainMap {
    pub fn new(matrices: Vec<IntMatrix>) -> Self {
        ChainMap { matrices }
    }

    /// `f_n`, or a zero matrix of the given shape past the stored range.
    pub fn at(&self, n: usize, rows: usize, cols: usize) -> IntMatrix {
        match self.matrices.get(n) {
            Some(m) => m.clone(),
            None => IntMatrix::zeros(rows, cols),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeKind {
    /// `H_n(A)`
    Sub,
    /// `H_n(B)`
    Middle,
    /// `H_n(C)`
    Quotient,
}

#[derive(Clone, Debug)]
pub struct LesNode {
    pub kind: NodeKind,
    pub degree: usize,
    pub group: HomologyGroup,
    /// Image of the incoming map equals the kernel of the outgoing one.
    pub exact: bool,
}

/// `H_N(A) → H_N(B) → H_N(C) → H_{N-1}(A) → … → H_0(C) → 0`.
#[derive(Clone, Debug)]
pub struct LongExactSequence {
    pub ring: Ring,
    pub nodes: Vec<LesNode>,
    /// `maps[k] : nodes[k] → nodes[k + 1]` in generator coordinates.
    pub maps: Vec<IntMatrix>,
    /// Every map sends relations to relations.
    pub maps_well_defined: bool,
    /// `Σ (−1)^k rank(nodes[k])`, free ranks over Z, dimensions over GF(2).
    pub rank_alternating_sum: i64,
    pub exact: bool,
}

impl LongExactSequence {
    fn position(&self, kind: NodeKind, degree: usize) -> Option<usize> {
        self.nodes
            .iter()
            .position(|n| n.kind == kind && n.degree == degree)
    }

    /// `δ : H_n(C) → H_{n-1}(A)` for `n ≥ 1`.
    pub fn connecting_map(&self, n: usize) -> Option<&IntMatrix> {
        let k = self.position(NodeKind::Quotient, n)?;
        (n >= 1).then(|| &self.maps[k])
    }

    /// `i_* : H_n(A) → H_n(B)`.
    pub fn sub_map(&self, n: usize) -> Option<&IntMatrix> {
        self.position(NodeKind::Sub, n).map(|k| &self.maps[k])
    }

    /// `j_* : H_n(B) → H_n(C)`.
    pub fn quotient_map(&self, n: usize) -> Option<&IntMatrix> {
        self.position(NodeKind::Middle, n).map(|k| &self.maps[k])
    }
}

fn check_short_exact(
    a: &ChainComplex,
    b: &ChainComplex,
    c: &ChainComplex,
    i: &ChainMap,
    j: &ChainMap,
    top: usize,
) -> Result<(Vec<IntMatrix>, Vec<IntMatrix>), LinalgError> {
    let ring = a.ring();
    let fail = |msg: String| Err(LinalgError::NotShortExact(msg));
    let mut is = Vec::with_capacity(top);
    let mut js = Vec::with_capacity(top);
    for n in 0..top {
        let (an, bn, cn) = (a.rank(n), b.rank(n), c.rank(n));
        let in_ = i.at(n, bn, an).reduce(ring);
        let jn = j.at(n, cn, bn).reduce(ring);
        if in_.rows() != bn || in_.cols() != an || jn.rows() != cn || jn.cols() != bn {
            return Err(LinalgError::Shape(format!("chain maps at degree {n}")));
        }
        if !jn.mul(&in_).reduce(ring).is_zero() {
            return fail(format!("j∘i ≠ 0 in degree {n}"));
        }
        if smith_form(&in_, ring).rank != an {
            return fail(format!("i not injective in degree {n}"));
        }
        let sj = smith_form(&jn, ring);
        if sj.rank != cn || sj.diagonal().iter().any(|d| !d.is_one()) {
            return fail(format!("j not surjective in degree {n}"));
        }
        for col in sj.rank..bn {
            let k = sj.v.column(col);
            if solve_in_image(&in_, &k, ring).is_none() {
                return fail(format!("ker j ≠ im i in degree {n}"));
            }
        }
        if n >= 1 {
            let i_prev = &is[n - 1];
            let j_prev = &js[n - 1];
            let lhs = IntMatrix::mul(i_prev, &a.boundary(n)).reduce(ring);
            if lhs != b.boundary(n).mul(&in_).reduce(ring) {
                return fail(format!("i is not a chain map at degree {n}"));
            }
            let lhs = IntMatrix::mul(j_prev, &b.boundary(n)).reduce(ring);
            if lhs != c.boundary(n).mul(&jn).reduce(ring) {
                return fail(format!("j is not a chain map at degree {n}"));
            }
        }
        is.push(in_);
        js.push(jn);
    }
    Ok((is, js))
}

fn induced(f: &IntMatrix, source: &HomologyBasis, target: &HomologyBasis) -> IntMatrix {
    let cols: Vec<Vec<BigInt>> = source
        .generators
        .iter()
        .map(|z| target.coordinates(&f.apply(z)))
        .collect();
    IntMatrix::from_columns(target.len(), &cols)
}

/// Builds and certifies the long exact sequence of `0 → A → B → C → 0`.
pub fn long_exact_sequence(
    a: &ChainComplex,
    b: &ChainComplex,
    c: &ChainComplex,
    i: &ChainMap,
    j: &ChainMap,
) -> Result<LongExactSequence, LinalgError> {
    let ring = a.ring();
    if b.ring() != ring || c.ring() != ring {
        return Err(LinalgError::RingMismatch);
    }
    for x in [a, b, c] {
        x.check_d_squared()?;
    }
    let top = a.len().max(b.len()).max(c.len());
    let (is, js) = check_short_exact(a, b, c, i, j, top)?;

    let ha: Vec<_> = (0..top).map(|n| homology_basis(a, n)).collect();
    let hb: Vec<_> = (0..top).map(|n| homology_basis(b, n)).collect();
    let hc: Vec<_> = (0..top).map(|n| homology_basis(c, n)).collect();

    let mut nodes = Vec::new();
    let mut bases: Vec<&HomologyBasis> = Vec::new();
    let mut maps = Vec::new();
    for n in (0..top).rev() {
        for (kind, basis) in [
            (NodeKind::Sub, &ha[n]),
            (NodeKind::Middle, &hb[n]),
            (NodeKind::Quotient, &hc[n]),
        ] {
            nodes.push(LesNode {
                kind,
                degree: n,
                group: basis.group(),
                exact: false,
            });
            bases.push(basis);
        }
        maps.push(induced(&is[n], &ha[n], &hb[n]));
        maps.push(induced(&js[n], &hb[n], &hc[n]));
        if n >= 1 {
            let d_b = b.boundary(n);
            let mut cols = Vec::with_capacity(hc[n].len());
            for z in &hc[n].generators {
                let lift = solve_in_image(&js[n], z, ring).ok_or_else(|| {
                    LinalgError::NotShortExact(format!("cannot lift along j in degree {n}"))
                })?;
                let db: Vec<BigInt> = d_b
                    .apply(&lift)
                    .into_iter()
                    .map(|x| ring.reduce(x))
                    .collect();
                let pre = solve_in_image(&is[n - 1], &db, ring).ok_or_else(|| {
                    LinalgError::NotShortExact(format!("d(lift) not in im i, degree {n}"))
                })?;
                cols.push(ha[n - 1].coordinates(&pre));
            }
            maps.push(IntMatrix::from_columns(ha[n - 1].len(), &cols));
        }
    }

    let mut maps_well_defined = true;
    for (k, f) in maps.iter().enumerate() {
        maps_well_defined &= respects_relations(f, bases[k], bases[k + 1]);
    }
    for k in 0..nodes.len() {
        let incoming = (k > 0).then(|| (&maps[k - 1], bases[k - 1]));
        let outgoing = (k + 1 < nodes.len()).then(|| (&maps[k], bases[k + 1]));
        nodes[k].exact = exact_at(ring, bases[k], incoming, outgoing);
    }
    let rank_alternating_sum = nodes
        .iter()
        .enumerate()
        .map(|(k, n)| {
            let r = n.group.free_rank as i64;
            if k % 2 == 0 {
                r
            } else {
                -r
            }
        })
        .sum();
    let exact = maps_well_defined && rank_alternating_sum == 0 && nodes.iter().all(|n| n.exact);
    Ok(LongExactSequence {
        ring,
        nodes,
        maps,
        maps_well_defined,
        rank_alternating_sum,
        exact,
    })
}

fn respects_relations(f: &IntMatrix, source: &HomologyBasis, target: &HomologyBasis) -> bool {
    let src = source.relation_orders();
    let tgt = target.relation_orders();
    (0..f.cols()).all(|col| {
        if src[col].is_zero() {
            return true;
        }
        (0..f.rows()).all(|row| reduce_mod_order(&f[(row, col)] * &src[col], &tgt[row]).is_zero())
    })
}

/// `im(incoming) = ker(outgoing)` at a node `y`.
fn exact_at(
    ring: Ring,
    y: &HomologyBasis,
    incoming: Option<(&IntMatrix, &HomologyBasis)>,
    outgoing: Option<(&IntMatrix, &HomologyBasis)>,
) -> bool {
    let dim = y.len();
    let f = incoming.map_or_else(|| IntMatrix::zeros(dim, 0), |(m, _)| m.clone());
    let (g, z_orders) = match outgoing {
        Some((m, z)) => (m.clone(), z.relation_orders()),
        None => (IntMatrix::zeros(0, dim), Vec::new()),
    };
    let gf = g.mul(&f);
    for row in 0..gf.rows() {
        for col in 0..gf.cols() {
            if !reduce_mod_order(gf[(row, col)].clone(), &z_orders[row]).is_zero() {
                return false;
            }
        }
    }
    match ring {
        Ring::Gf2 => {
            let rf = smith_form(&f, Ring::Gf2).rank;
            let rg = smith_form(&g, Ring::Gf2).rank;
            rf + rg == dim
        }
        Ring::Integers => {
            // ker g = {y : G y ∈ diag(z_orders)·Z}
            let g_ext = g.hstack(&IntMatrix::diagonal(&z_orders));
            let s = smith_form(&g_ext, Ring::Integers);
            let image = f.hstack(&IntMatrix::diagonal(&y.orders));
            (s.rank..g_ext.cols()).all(|col| {
                let k: Vec<BigInt> = s.v.column(col).into_iter().take(dim).collect();
                k.iter().all(Zero::is_zero) || image_membership(&image, &k)
            })
        }
    }
}
