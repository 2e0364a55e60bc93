//! The four coefficient systems on the orbit category of `G`: values
//! `M(G/H)` per degree and matrices of induced maps `M(f)`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::burnside::{induce_matrix, BurnsideRing};
use crate::group::{describe_subgroup, FiniteGroup, Subgroup};
use crate::linalg::{IntMatrix, Ring};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoeffError {
    #[error("negative degree {0}")]
    NegativeDegree(i64),
    #[error("unknown theory '{0}' (expected all, euler, oriented or unoriented)")]
    UnknownTheory(String),
    #[error("{0} is not a subgroup")]
    NotASubgroup(Subgroup),
    #[error("{h} is not subconjugate to {k} via element {a}")]
    NotSubconjugate { h: Subgroup, k: Subgroup, a: usize },
    #[error("morphisms do not compose: target {0} differs from source {1}")]
    NotComposable(Subgroup, Subgroup),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TheoryTag {
    All,
    Euler,
    OrientedSingular,
    UnorientedSingular,
}

impl TheoryTag {
    pub const EVERY: [TheoryTag; 4] = [
        TheoryTag::All,
        TheoryTag::Euler,
        TheoryTag::OrientedSingular,
        TheoryTag::UnorientedSingular,
    ];

    pub fn ring(self) -> Ring {
        match self {
            TheoryTag::OrientedSingular => Ring::Integers,
            _ => Ring::Gf2,
        }
    }

    /// Command-line name.
    pub fn name(self) -> &'static str {
        match self {
            TheoryTag::All => "all",
            TheoryTag::Euler => "euler",
            TheoryTag::OrientedSingular => "oriented",
            TheoryTag::UnorientedSingular => "unoriented",
        }
    }

    /// Coefficients vanish outside degree 0.
    pub fn concentrated_in_degree_zero(self) -> bool {
        self != TheoryTag::Euler
    }
}

impl fmt::Display for TheoryTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TheoryTag {
    type Err = CoeffError;

    fn from_str(s: &str) -> Result<Self, CoeffError> {
        match s.to_ascii_lowercase().as_str() {
            "all" => Ok(TheoryTag::All),
            "euler" => Ok(TheoryTag::Euler),
            "oriented" | "orientedsingular" => Ok(TheoryTag::OrientedSingular),
            "unoriented" | "unorientedsingular" => Ok(TheoryTag::UnorientedSingular),
            _ => Err(CoeffError::UnknownTheory(s.to_string())),
        }
    }
}

/// `G/H → G/K`, `gH ↦ gaK`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrbitMorphism {
    h: Subgroup,
    k: Subgroup,
    a: usize,
}

impl OrbitMorphism {
    pub fn new(g: &FiniteGroup, h: Subgroup, k: Subgroup, a: usize) -> Result<Self, CoeffError> {
        for s in [&h, &k] {
            if !g.is_subgroup(s) {
                return Err(CoeffError::NotASubgroup(s.clone()));
            }
        }
        if a >= g.order() || !g.is_subconjugate(&h, &k, a) {
            return Err(CoeffError::NotSubconjugate { h, k, a });
        }
        Ok(OrbitMorphism { h, k, a })
    }

    pub fn identity(h: Subgroup) -> Self {
        OrbitMorphism {
            k: h.clone(),
            h,
            a: 0,
        }
    }

    pub fn source(&self) -> &Subgroup {
        &self.h
    }

    pub fn target(&self) -> &Subgroup {
        &self.k
    }

    pub fn element(&self) -> usize {
        self.a
    }

    /// `next ∘ self`, with element `a_self · a_next`.
    pub fn then(&self, g: &FiniteGroup, next: &OrbitMorphism) -> Result<Self, CoeffError> {
        if self.k != next.h {
            return Err(CoeffError::NotComposable(self.k.clone(), next.h.clone()));
        }
        Ok(OrbitMorphism {
            h: self.h.clone(),
            k: next.k.clone(),
            a: g.mul(self.a, next.a),
        })
    }

    /// Same map of orbits: equal endpoints and `a′ ∈ aK`.
    pub fn same_map(&self, g: &FiniteGroup, other: &OrbitMorphism) -> bool {
        self.h == other.h
            && self.k == other.k
            && self.k.min_in_left_coset(g, self.a) == self.k.min_in_left_coset(g, other.a)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoeffGroup {
    pub ring: Ring,
    pub rank: usize,
    pub basis_labels: Vec<String>,
}

impl CoeffGroup {
    fn new(ring: Ring, basis_labels: Vec<String>) -> Self {
        CoeffGroup {
            ring,
            rank: basis_labels.len(),
            basis_labels,
        }
    }

    pub fn zero(ring: Ring) -> Self {
        Self::new(ring, Vec::new())
    }
}

impl fmt::Display for CoeffGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.rank, self.ring) {
            (0, _) => f.write_str("0"),
            (1, r) => write!(f, "{}", ring_symbol(r)),
            (n, Ring::Integers) => write!(f, "Z^{n}"),
            (n, Ring::Gf2) => write!(f, "(Z/2)^{n}"),
        }
    }
}

fn ring_symbol(r: Ring) -> &'static str {
    match r {
        Ring::Integers => "Z",
        Ring::Gf2 => "Z/2",
    }
}

fn check_degree(q: i64) -> Result<usize, CoeffError> {
    usize::try_from(q).map_err(|_| CoeffError::NegativeDegree(q))
}

/// One theory over one group, with Burnside rings memoized per subgroup.
pub struct CoefficientSystem<'g> {
    group: &'g FiniteGroup,
    theory: TheoryTag,
    rings: Mutex<HashMap<Subgroup, Arc<BurnsideRing>>>,
}

impl<'g> CoefficientSystem<'g> {
    pub fn new(group: &'g FiniteGroup, theory: TheoryTag) -> Self {
        CoefficientSystem {
            group,
            theory,
            rings: Mutex::new(HashMap::new()),
        }
    }

    pub fn group(&self) -> &'g FiniteGroup {
        self.group
    }

    pub fn theory(&self) -> TheoryTag {
        self.theory
    }

    pub fn burnside(&self, h: &Subgroup) -> Arc<BurnsideRing> {
        let mut rings = self.rings.lock().unwrap_or_else(|e| e.into_inner());
        rings
            .entry(h.clone())
            .or_insert_with(|| Arc::new(BurnsideRing::new(self.group, h)))
            .clone()
    }

    pub fn rank(&self, q: usize, h: &Subgroup) -> usize {
        match (self.theory, q) {
            (TheoryTag::All, _) => 0,
            (TheoryTag::Euler, _) => 1,
            (_, 1..) => 0,
            (TheoryTag::OrientedSingular, 0) => self.burnside(h).rank(),
            (TheoryTag::UnorientedSingular, 0) => self.burnside(h).n0_basis().len(),
        }
    }

    pub fn value(&self, q: i64, h: &Subgroup) -> Result<CoeffGroup, CoeffError> {
        let q = check_degree(q)?;
        if !self.group.is_subgroup(h) {
            return Err(CoeffError::NotASubgroup(h.clone()));
        }
        let ring = self.theory.ring();
        Ok(match (self.theory, q) {
            (TheoryTag::Euler, _) => {
                let n = describe_subgroup(self.group, h);
                CoeffGroup::new(ring, vec![format!("[{n}/{n}]")])
            }
            (TheoryTag::All, _) | (_, 1..) => CoeffGroup::zero(ring),
            (TheoryTag::OrientedSingular, 0) => CoeffGroup::new(ring, self.burnside(h).labels()),
            (TheoryTag::UnorientedSingular, 0) => {
                CoeffGroup::new(ring, self.burnside(h).n0_labels())
            }
        })
    }

    /// Matrix of `M(f)` with rows indexed by the basis of `M(G/K)` and
    /// columns by that of `M(G/H)`, entries reduced into the theory's ring.
    pub fn map(&self, q: usize, f: &OrbitMorphism) -> IntMatrix {
        let (h, k) = (f.source(), f.target());
        match (self.theory, q) {
            (TheoryTag::Euler, _) => {
                let index = k.order() / h.order();
                IntMatrix::from_rows(&[vec![i64::from(index.is_odd())]])
            }
            (TheoryTag::OrientedSingular, 0) => {
                let (src, dst) = (self.burnside(h), self.burnside(k));
                induce_matrix(self.group, &src, &dst, f.element())
                    .expect("orbit morphism was validated")
            }
            (TheoryTag::UnorientedSingular, 0) => {
                let (src, dst) = (self.burnside(h), self.burnside(k));
                let full = induce_matrix(self.group, &src, &dst, f.element())
                    .expect("orbit morphism was validated");
                let (rows, cols) = (dst.n0_basis(), src.n0_basis());
                let mut m = IntMatrix::zeros(rows.len(), cols.len());
                for (j, &c) in cols.iter().enumerate() {
                    for (i, &r) in rows.iter().enumerate() {
                        m[(i, j)] = full[(r, c)].clone();
                    }
                }
                m.reduce(Ring::Gf2)
            }
            _ => IntMatrix::zeros(self.rank(q, k), self.rank(q, h)),
        }
    }
}

pub fn system_value(
    theory: TheoryTag,
    q: i64,
    g: &FiniteGroup,
    h: &Subgroup,
) -> Result<CoeffGroup, CoeffError> {
    CoefficientSystem::new(g, theory).value(q, h)
}

pub fn system_map(
    theory: TheoryTag,
    q: i64,
    g: &FiniteGroup,
    f: &OrbitMorphism,
) -> Result<IntMatrix, CoeffError> {
    let q = check_degree(q)?;
    Ok(CoefficientSystem::new(g, theory).map(q, f))
}

/// `M(g ∘ f) = M(g) · M(f)` over the theory's ring.
pub fn compose_check(
    theory: TheoryTag,
    q: i64,
    g: &FiniteGroup,
    f: &OrbitMorphism,
    next: &OrbitMorphism,
) -> Result<bool, CoeffError> {
    let q = check_degree(q)?;
    let sys = CoefficientSystem::new(g, theory);
    let composite = f.then(g, next)?;
    let lhs = sys.map(q, &composite);
    let rhs = sys.map(q, next).mul(&sys.map(q, f)).reduce(theory.ring());
    Ok(lhs == rhs)
}
