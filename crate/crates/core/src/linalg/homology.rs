use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{smith_form, IntMatrix, LinalgError, Ring};

/// A bounded chain complex `0 → C_top → … → C_0 → 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    ring: Ring,
    ranks: Vec<usize>,
    /// `boundaries[n - 1]` is `d_n : C_n → C_{n-1}`.
    boundaries: Vec<IntMatrix>,
}

impl ChainComplex {
    /// `differentials[k]` is `d_{k+1}`, of shape `ranks[k] × ranks[k+1]`.
    pub fn new(
        ring: Ring,
        ranks: Vec<usize>,
        differentials: Vec<IntMatrix>,
    ) -> Result<Self, LinalgError> {
        if differentials.len() + 1 != ranks.len().max(1) {
            return Err(LinalgError::Shape(format!(
                "{} ranks need {} differentials, got {}",
                ranks.len(),
                ranks.len().saturating_sub(1),
                differentials.len()
            )));
        }
        for (k, d) in differentials.iter().enumerate() {
            if d.rows() != ranks[k] || d.cols() != ranks[k + 1] {
                return Err(LinalgError::Shape(format!(
                    "d_{} is {}×{}, expected {}×{}",
                    k + 1,
                    d.rows(),
                    d.cols(),
                    ranks[k],
                    ranks[k + 1]
                )));
            }
        }
        Ok(ChainComplex {
            ring,
            ranks,
            boundaries: differentials.iter().map(|d| d.reduce(ring)).collect(),
        })
    }

    pub fn zero(ring: Ring) -> Self {
        ChainComplex {
            ring,
            ranks: Vec::new(),
            boundaries: Vec::new(),
        }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    /// Number of stored degrees (`top + 1`, or 0 for the zero complex).
    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.iter().all(|&r| r == 0)
    }

    pub fn rank(&self, n: usize) -> usize {
        self.ranks.get(n).copied().unwrap_or(0)
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// `d_n : C_n → C_{n-1}`, a zero-size matrix outside the stored range.
    pub fn boundary(&self, n: usize) -> IntMatrix {
        if n >= 1 && n < self.ranks.len() {
            self.boundaries[n - 1].clone()
        } else {
            IntMatrix::zeros(if n == 0 { 0 } else { self.rank(n - 1) }, self.rank(n))
        }
    }

    pub fn check_d_squared(&self) -> Result<(), LinalgError> {
        for n in 2..self.ranks.len() {
            let dd = self.boundaries[n - 2]
                .mul(&self.boundaries[n - 1])
                .reduce(self.ring);
            if !dd.is_zero() {
                return Err(LinalgError::NotAComplex { degree: n });
            }
        }
        Ok(())
    }
}

/// A finitely generated abelian group `Z^free_rank ⊕ ⨁ Z/tᵢ`, with
/// `t₁ | t₂ | …`. Over GF(2) `free_rank` is the dimension and `torsion` is
/// empty.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct HomologyGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn free(rank: usize) -> Self {
        HomologyGroup {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn direct_sum(&self, other: &HomologyGroup) -> HomologyGroup {
        // re-derive the invariant-factor chain from the combined cyclic factors
        let mut cyclic: Vec<BigInt> = self.torsion.iter().chain(&other.torsion).cloned().collect();
        let n = cyclic.len();
        let diag = IntMatrix::diagonal(&cyclic);
        cyclic = smith_form(&diag, Ring::Integers)
            .diagonal()
            .into_iter()
            .filter(|d| !d.is_one())
            .collect();
        debug_assert!(cyclic.len() <= n);
        HomologyGroup {
            free_rank: self.free_rank + other.free_rank,
            torsion: cyclic,
        }
    }

    pub fn display(&self, ring: Ring) -> String {
        let mut parts = Vec::new();
        match (self.free_rank, ring) {
            (0, _) => {}
            (1, Ring::Integers) => parts.push("Z".to_string()),
            (1, Ring::Gf2) => parts.push("Z/2".to_string()),
            (r, Ring::Integers) => parts.push(format!("Z^{r}")),
            (r, Ring::Gf2) => parts.push(format!("(Z/2)^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display(Ring::Integers))
    }
}

/// Homology of every stored degree.
///
/// Free rank is `rank C_n − rank d_n − rank d_{n+1}`; torsion is the
/// invariant factors of `d_{n+1}` greater than one.
pub fn chain_homology(c: &ChainComplex) -> Result<Vec<HomologyGroup>, LinalgError> {
    c.check_d_squared()?;
    let forms: Vec<_> = (0..=c.len())
        .map(|n| smith_form(&c.boundary(n), c.ring()))
        .collect();
    Ok((0..c.len())
        .map(|n| HomologyGroup {
            free_rank: c.rank(n) - forms[n].rank - forms[n + 1].rank,
            torsion: match c.ring() {
                Ring::Integers => forms[n + 1]
                    .diagonal()
                    .into_iter()
                    .filter(|d| !d.is_one())
                    .collect(),
                Ring::Gf2 => Vec::new(),
            },
        })
        .collect())
}

/// Generators of `H_n` as explicit cycles, with a coordinate map.
#[derive(Clone, Debug)]
pub struct HomologyBasis {
    pub ring: Ring,
    /// Cycle representatives in `C_n`.
    pub generators: Vec<Vec<BigInt>>,
    /// Order of each generator; `0` means infinite. Torsion first.
    pub orders: Vec<BigInt>,
    /// `coords · z` gives the coordinates of a cycle `z` before reduction.
    coords: IntMatrix,
}

impl HomologyBasis {
    pub fn group(&self) -> HomologyGroup {
        HomologyGroup {
            free_rank: self.orders.iter().filter(|o| o.is_zero()).count(),
            torsion: match self.ring {
                Ring::Integers => self
                    .orders
                    .iter()
                    .filter(|o| !o.is_zero())
                    .cloned()
                    .collect(),
                Ring::Gf2 => Vec::new(),
            },
        }
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Coordinates of the class of a cycle, each reduced modulo its
    /// generator's order.
    pub fn coordinates(&self, cycle: &[BigInt]) -> Vec<BigInt> {
        self.coords
            .apply(cycle)
            .into_iter()
            .zip(&self.orders)
            .map(|(x, o)| reduce_mod_order(self.ring.reduce(x), o))
            .collect()
    }

    /// Relation orders in the ring: `2` for every GF(2) generator.
    pub fn relation_orders(&self) -> Vec<BigInt> {
        match self.ring {
            Ring::Integers => self.orders.clone(),
            Ring::Gf2 => vec![BigInt::from(2); self.orders.len()],
        }
    }
}

pub(crate) fn reduce_mod_order(x: BigInt, order: &BigInt) -> BigInt {
    if order.is_zero() {
        x
    } else {
        x.mod_floor(order)
    }
}

/// Cycle-representative basis of `H_n(C)`.
pub fn homology_basis(c: &ChainComplex, n: usize) -> HomologyBasis {
    let ring = c.ring();
    let cn = c.rank(n);
    let out = smith_form(&c.boundary(n), ring);
    let r = out.rank;
    let kernel = out.v.block(0, cn, r, cn);
    let kernel_coords = out.v_inv.block(r, cn, 0, cn);
    let incoming = kernel_coords.mul(&c.boundary(n + 1)).reduce(ring);
    let rel = smith_form(&incoming, ring);
    let p_inv = &rel.u_inv;
    let quotient_coords = rel.u.mul(&kernel_coords);
    let k = cn - r;
    let mut generators = Vec::new();
    let mut orders = Vec::new();
    let mut keep_rows = Vec::new();
    for i in 0..k {
        let order = if i < rel.rank {
            rel.d[(i, i)].clone()
        } else {
            BigInt::zero()
        };
        if order.is_one() {
            continue;
        }
        let col = p_inv.column(i);
        let cycle: Vec<BigInt> = kernel
            .apply(&col)
            .into_iter()
            .map(|x| ring.reduce(x))
            .collect();
        generators.push(cycle);
        orders.push(order);
        keep_rows.push(i);
    }
    let mut coords = IntMatrix::zeros(keep_rows.len(), cn);
    for (row, &i) in keep_rows.iter().enumerate() {
        for j in 0..cn {
            coords[(row, j)] = quotient_coords[(i, j)].clone();
        }
    }
    HomologyBasis {
        ring,
        generators,
        orders,
        coords,
    }
}
