//! Bredon cellular homology of G-CW complexes with the four coefficient
//! systems, and executable comparisons: orbit coefficients, free quotients,
//! induction and Mayer-Vietoris.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use crate::coeff::{system_value, CoeffError, CoefficientSystem, OrbitMorphism, TheoryTag};
use crate::complex::{induce_complex, orbit_space, ComplexError, GCWComplex};
use crate::group::{FiniteGroup, Subgroup};
use crate::linalg::{
    chain_homology, long_exact_sequence, ChainComplex, ChainMap, HomologyGroup, IntMatrix,
    LinalgError, LongExactSequence, Ring,
};

#[derive(Debug, Error)]
pub enum TheoryError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("d∘d ≠ 0 from degree {degree} in the {theory} system")]
    DSquared { theory: TheoryTag, degree: usize },
    #[error("{0}")]
    Unsupported(String),
    #[error("not a cover: {0}")]
    NotACover(String),
}

/// The Bredon chain complex together with the position of each cell's
/// block inside its chain group.
#[derive(Clone, Debug)]
pub struct BredonComplex {
    pub chain: ChainComplex,
    /// Per cell (in the complex's cell order): offset within `C_dim`.
    pub offsets: Vec<usize>,
    /// Per cell: rank of its coefficient group.
    pub widths: Vec<usize>,
}

fn assemble(x: &GCWComplex, sys: &CoefficientSystem<'_>, q: usize) -> BredonComplex {
    let ring = sys.theory().ring();
    let widths: Vec<usize> = x
        .cells()
        .iter()
        .map(|c| sys.rank(q, &c.stabilizer))
        .collect();
    let mut offsets = vec![0; x.num_cells()];
    let Some(top) = x.dim() else {
        return BredonComplex {
            chain: ChainComplex::zero(ring),
            offsets,
            widths,
        };
    };
    let mut ranks = vec![0; top + 1];
    for (k, c) in x.cells().iter().enumerate() {
        offsets[k] = ranks[c.dim];
        ranks[c.dim] += widths[k];
    }
    let mut ds: Vec<IntMatrix> = (1..=top)
        .map(|n| IntMatrix::zeros(ranks[n - 1], ranks[n]))
        .collect();
    for r in x.records() {
        let (src, dst) = (&x.cells()[r.from], &x.cells()[r.to]);
        if widths[r.from] == 0 || widths[r.to] == 0 {
            continue;
        }
        let f = OrbitMorphism::new(
            x.group(),
            src.stabilizer.clone(),
            dst.stabilizer.clone(),
            r.a,
        )
        .expect("records of a valid complex are subconjugate");
        let block = sys.map(q, &f);
        ds[src.dim - 1].add_block(offsets[r.to], offsets[r.from], &block, &BigInt::from(r.deg));
    }
    let chain = ChainComplex::new(ring, ranks, ds).expect("blocks follow the cell widths");
    BredonComplex {
        chain,
        offsets,
        widths,
    }
}

/// Assembled complex, or the first degree where `d∘d ≠ 0`.
pub(crate) fn differentials(
    x: &GCWComplex,
    theory: TheoryTag,
    q: usize,
) -> Result<BredonComplex, usize> {
    let sys = CoefficientSystem::new(x.group(), theory);
    let b = assemble(x, &sys, q);
    match b.chain.check_d_squared() {
        Err(LinalgError::NotAComplex { degree }) => Err(degree),
        _ => Ok(b),
    }
}

pub fn bredon_complex_with_blocks(
    x: &GCWComplex,
    theory: TheoryTag,
    q: usize,
) -> Result<BredonComplex, TheoryError> {
    differentials(x, theory, q).map_err(|degree| TheoryError::DSquared { theory, degree })
}

/// `C_n = ⊕ M(G/stab σ)` over `n`-cells, blocks `Σ deg · M(f)`.
pub fn bredon_complex(
    x: &GCWComplex,
    theory: TheoryTag,
    q: usize,
) -> Result<ChainComplex, TheoryError> {
    Ok(bredon_complex_with_blocks(x, theory, q)?.chain)
}

/// Bredon groups `H_p(X; M_q)` for the Euler system, indexed `[q][p]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct E2Page {
    pub table: Vec<Vec<HomologyGroup>>,
    /// The page is the answer: `X` is a disjoint union of orbits.
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoryResult {
    pub theory: TheoryTag,
    pub ring: Ring,
    /// Degrees `0..groups.len()`; all higher degrees vanish, except for
    /// Euler where the list stops at the computed range.
    pub groups: Vec<HomologyGroup>,
    pub e2: Option<E2Page>,
}

impl TheoryResult {
    pub fn group(&self, n: usize) -> HomologyGroup {
        self.groups.get(n).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.groups.iter().all(HomologyGroup::is_zero)
    }
}

#[derive(Serialize)]
struct JsonGroup {
    degree: usize,
    rank: usize,
    torsion: Vec<serde_json::Value>,
}

#[derive(Serialize)]
struct JsonResult {
    theory: &'static str,
    groups: Vec<JsonGroup>,
    #[serde(skip_serializing_if = "Option::is_none")]
    e2_page: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    e2_exact: Option<bool>,
}

/// JSON number when it fits in `u64`, decimal string otherwise.
fn torsion_entry(t: &BigInt) -> serde_json::Value {
    match u64::try_from(t) {
        Ok(v) => v.into(),
        Err(_) => t.to_string().into(),
    }
}

impl TheoryResult {
    /// `{"theory", "groups": [{"degree", "rank", "torsion"}]}`, with
    /// `"e2_page": true` for Euler.
    pub fn to_json(&self) -> String {
        let json = JsonResult {
            theory: self.theory.name(),
            groups: self
                .groups
                .iter()
                .enumerate()
                .map(|(degree, g)| JsonGroup {
                    degree,
                    rank: g.free_rank,
                    torsion: g.torsion.iter().map(torsion_entry).collect(),
                })
                .collect(),
            e2_page: self.e2.as_ref().map(|_| true),
            e2_exact: self.e2.as_ref().map(|e| e.exact),
        };
        let mut s = serde_json::to_string_pretty(&json).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if self.e2.is_some() {
            out.push_str("E2-page data (total degree p+q)\n");
        }
        if self.groups.is_empty() {
            out.push_str("all groups vanish\n");
        }
        for (n, g) in self.groups.iter().enumerate() {
            out.push_str(&format!("H{n} = {}\n", g.display(self.ring)));
        }
        if let Some(e2) = &self.e2 {
            for (q, row) in e2.table.iter().enumerate() {
                let cells: Vec<String> = row.iter().map(|g| g.display(self.ring)).collect();
                out.push_str(&format!("q={q}: {}\n", cells.join(", ")));
            }
            out.push_str(if e2.exact {
                "exact: X is a disjoint union of orbits\n"
            } else {
                "not known to be exact\n"
            })
        }
        out
    }
}

pub fn equivariant_homology(
    x: &GCWComplex,
    theory: TheoryTag,
) -> Result<TheoryResult, TheoryError> {
    equivariant_homology_upto(x, theory, x.dim().unwrap_or(0))
}

/// As [`equivariant_homology`], with the Euler table extended to
/// `q ≤ max(q_max, dim X)`. Ignored by the other theories.
pub fn equivariant_homology_upto(
    x: &GCWComplex,
    theory: TheoryTag,
    q_max: usize,
) -> Result<TheoryResult, TheoryError> {
    let ring = theory.ring();
    if theory != TheoryTag::Euler {
        let c = bredon_complex(x, theory, 0)?;
        return Ok(TheoryResult {
            theory,
            ring,
            groups: chain_homology(&c)?,
            e2: None,
        });
    }
    let q_top = q_max.max(x.dim().unwrap_or(0));
    let mut table = Vec::with_capacity(q_top + 1);
    for q in 0..=q_top {
        let c = bredon_complex(x, theory, q)?;
        table.push(chain_homology(&c)?);
    }
    let mut groups = vec![HomologyGroup::default(); if x.is_empty() { 0 } else { q_top + 1 }];
    for (q, row) in table.iter().enumerate() {
        for (p, g) in row.iter().enumerate() {
            if let Some(slot) = groups.get_mut(p + q) {
                *slot = slot.direct_sum(g);
            }
        }
    }
    Ok(TheoryResult {
        theory,
        ring,
        groups,
        e2: Some(E2Page {
            table,
            exact: x.is_discrete(),
        }),
    })
}

/// Degrees checked by [`coefficient_check`].
pub const COEFFICIENT_CHECK_DEGREES: usize = 3;

/// `H^G_n(G/H)` agrees with `M_n(G/H)` for `n ≤ 3`.
pub fn coefficient_check(theory: TheoryTag, g: &FiniteGroup, h: &Subgroup) -> bool {
    let x = crate::complex::orbit(g, h);
    let Ok(result) = equivariant_homology_upto(&x, theory, COEFFICIENT_CHECK_DEGREES) else {
        return false;
    };
    if theory == TheoryTag::Euler && !result.e2.as_ref().is_some_and(|e| e.exact) {
        return false;
    }
    (0..=COEFFICIENT_CHECK_DEGREES).all(|n| {
        let Ok(v) = system_value(theory, n as i64, g, h) else {
            return false;
        };
        let got = result.group(n);
        got.free_rank == v.rank && got.torsion.is_empty()
    })
}

/// Two graded groups side by side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub left: Vec<HomologyGroup>,
    pub right: Vec<HomologyGroup>,
    pub equal: bool,
}

impl Comparison {
    fn new(left: Vec<HomologyGroup>, right: Vec<HomologyGroup>) -> Self {
        let n = left.len().max(right.len());
        let at = |v: &[HomologyGroup], k: usize| v.get(k).cloned().unwrap_or_default();
        let equal = (0..n).all(|k| at(&left, k) == at(&right, k));
        Comparison { left, right, equal }
    }
}

/// Equivariant homology of a free complex against the ordinary homology of
/// its orbit space (Z for oriented, GF(2) for unoriented, zero for all).
pub fn free_borel_compare(x: &GCWComplex, theory: TheoryTag) -> Result<Comparison, TheoryError> {
    let quotient = orbit_space(x, true)?;
    let left = equivariant_homology(x, theory)?.groups;
    let right = match theory {
        TheoryTag::OrientedSingular => quotient.homology(Ring::Integers)?,
        TheoryTag::UnorientedSingular => quotient.homology(Ring::Gf2)?,
        TheoryTag::All => Vec::new(),
        TheoryTag::Euler => {
            return Err(TheoryError::Unsupported(
                "no non-equivariant comparison for the Euler theory".into(),
            ))
        }
    };
    Ok(Comparison::new(left, right))
}

/// `X` over `G.restrict(H)` against `G ×_H X` over `G`.
pub fn induction_compare(
    g: &FiniteGroup,
    h: &Subgroup,
    x: &GCWComplex,
    theory: TheoryTag,
) -> Result<Comparison, TheoryError> {
    let induced = induce_complex(g, h, x)?;
    let left = equivariant_homology(x, theory)?.groups;
    let right = equivariant_homology(&induced, theory)?.groups;
    Ok(Comparison::new(left, right))
}

/// The Mayer-Vietoris sequence of `X = X1 ∪ X2` with the Bredon complexes
/// `0 → C(X1∩X2) → C(X1) ⊕ C(X2) → C(X) → 0`, `i(x) = (x, x)`,
/// `j(y, z) = y − z`, in coefficient degree `q = 0`.
pub fn mv_check<S: AsRef<str>>(
    x: &GCWComplex,
    ids1: &[S],
    ids2: &[S],
    theory: TheoryTag,
) -> Result<LongExactSequence, TheoryError> {
    let set1: BTreeSet<&str> = ids1.iter().map(AsRef::as_ref).collect();
    let set2: BTreeSet<&str> = ids2.iter().map(AsRef::as_ref).collect();
    for c in x.cells() {
        if !set1.contains(c.id.as_str()) && !set2.contains(c.id.as_str()) {
            return Err(TheoryError::NotACover(format!(
                "cell '{}' is in neither part",
                c.id
            )));
        }
    }
    let both: Vec<&str> = set1.intersection(&set2).copied().collect();
    let x1 = x.subcomplex(&set1.iter().copied().collect::<Vec<_>>())?;
    let x2 = x.subcomplex(&set2.iter().copied().collect::<Vec<_>>())?;
    let x12 = x.subcomplex(&both)?;

    let cx = bredon_complex_with_blocks(x, theory, 0)?;
    let c1 = bredon_complex_with_blocks(&x1, theory, 0)?;
    let c2 = bredon_complex_with_blocks(&x2, theory, 0)?;
    let c12 = bredon_complex_with_blocks(&x12, theory, 0)?;
    let ring = theory.ring();
    let top = cx.chain.len();

    let pad = |c: &ChainComplex| -> (Vec<usize>, Vec<IntMatrix>) {
        let ranks: Vec<usize> = (0..top).map(|n| c.rank(n)).collect();
        let ds = (1..top).map(|n| c.boundary(n)).collect();
        (ranks, ds)
    };
    let (r1, d1) = pad(&c1.chain);
    let (r2, d2) = pad(&c2.chain);
    let mid_ranks: Vec<usize> = r1.iter().zip(&r2).map(|(a, b)| a + b).collect();
    let mid_ds: Vec<IntMatrix> = (0..top.saturating_sub(1))
        .map(|k| {
            let mut m = IntMatrix::zeros(mid_ranks[k], mid_ranks[k + 1]);
            m.set_block(0, 0, &d1[k]);
            m.set_block(r1[k], r1[k + 1], &d2[k]);
            m
        })
        .collect();
    let middle = ChainComplex::new(ring, mid_ranks.clone(), mid_ds)?;
    let (ra, da) = pad(&c12.chain);
    let sub = ChainComplex::new(ring, ra.clone(), da)?;
    let whole = cx.chain.clone();

    let position = |y: &GCWComplex| -> HashMap<String, usize> {
        y.cells()
            .iter()
            .enumerate()
            .map(|(k, c)| (c.id.clone(), k))
            .collect()
    };
    let (p1, p2, p12) = (position(&x1), position(&x2), position(&x12));
    let one = BigInt::one();
    let mut i_maps = Vec::with_capacity(top);
    let mut j_maps = Vec::with_capacity(top);
    for n in 0..top {
        let mut i_n = IntMatrix::zeros(mid_ranks[n], ra[n]);
        let mut j_n = IntMatrix::zeros(whole.rank(n), mid_ranks[n]);
        for (k, c) in x.cells().iter().enumerate().filter(|(_, c)| c.dim == n) {
            let w = cx.widths[k];
            let id = IntMatrix::identity(w);
            let ox = cx.offsets[k];
            let in1 = p1.get(&c.id).map(|&k1| c1.offsets[k1]);
            let in2 = p2.get(&c.id).map(|&k2| r1[n] + c2.offsets[k2]);
            if let Some(o) = in1 {
                j_n.add_block(ox, o, &id, &one);
            }
            if let Some(o) = in2 {
                j_n.add_block(ox, o, &id, &-one.clone());
            }
            if let Some(&k12) = p12.get(&c.id) {
                let oa = c12.offsets[k12];
                i_n.add_block(in1.expect("intersection cell lies in X1"), oa, &id, &one);
                i_n.add_block(in2.expect("intersection cell lies in X2"), oa, &id, &one);
            }
        }
        i_maps.push(i_n);
        j_maps.push(j_n);
    }
    Ok(long_exact_sequence(
        &sub,
        &middle,
        &whole,
        &ChainMap::new(i_maps),
        &ChainMap::new(j_maps),
    )?)
}
