//! The Burnside ring `A(H)` of a subgroup `H ≤ G`, its table of marks,
//! finite `H`-sets, induction along orbit maps, and the GF(2) quotient
//! `V(H)` spanned by the classes with odd Weyl index.

use std::collections::VecDeque;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::group::{FiniteGroup, Subgroup, SubgroupClassTable};
use crate::linalg::IntMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BurnsideError {
    #[error("element has {got} coordinates, ring has rank {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("marks vector is not in the image of the mark homomorphism (class {class})")]
    NonIntegral { class: usize },
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("{h} is not subconjugate to {k} via element {a}")]
    NotSubconjugate { h: Subgroup, k: Subgroup, a: usize },
}

/// `marks[K][L] = |(H/K)^L|` over class representatives, rows indexed by
/// the orbit type `K`, columns by the fixing subgroup `L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableOfMarks {
    pub marks: Vec<Vec<i64>>,
}

impl TableOfMarks {
    pub fn rank(&self) -> usize {
        self.marks.len()
    }

    pub fn get(&self, k: usize, l: usize) -> i64 {
        self.marks[k][l]
    }
}

/// Direct fixed-coset count over the classes of `table`.
pub fn table_of_marks(g: &FiniteGroup, table: &SubgroupClassTable) -> TableOfMarks {
    let ambient = table.ambient();
    let n = table.num_classes();
    let mut marks = vec![vec![0i64; n]; n];
    for (k, kr) in table.reps().enumerate() {
        for (l, lr) in table.reps().enumerate() {
            // cosets aK with L·aK = aK  ⇔  a⁻¹La ⊆ K
            let count = ambient
                .elems()
                .iter()
                .filter(|&&a| g.is_subconjugate(lr, kr, a))
                .count();
            marks[k][l] = (count / kr.order()) as i64;
        }
    }
    TableOfMarks { marks }
}

/// Integer combination of the basis `[H/K]` over subgroup classes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BurnsideElement {
    pub coords: Vec<BigInt>,
}

impl BurnsideElement {
    pub fn zero(rank: usize) -> Self {
        BurnsideElement {
            coords: vec![BigInt::zero(); rank],
        }
    }

    pub fn basis(rank: usize, class: usize) -> Self {
        let mut x = Self::zero(rank);
        x.coords[class] = BigInt::one();
        x
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        BurnsideElement {
            coords: coords.iter().map(|&c| BigInt::from(c)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        BurnsideElement {
            coords: self.coords.iter().map(|x| x * c).collect(),
        }
    }
}

impl Add for &BurnsideElement {
    type Output = BurnsideElement;

    fn add(self, rhs: &BurnsideElement) -> BurnsideElement {
        assert_eq!(self.coords.len(), rhs.coords.len(), "rank mismatch");
        BurnsideElement {
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &BurnsideElement {
    type Output = BurnsideElement;

    fn sub(self, rhs: &BurnsideElement) -> BurnsideElement {
        self + &-rhs
    }
}

impl Neg for &BurnsideElement {
    type Output = BurnsideElement;

    fn neg(self) -> BurnsideElement {
        BurnsideElement {
            coords: self.coords.iter().map(|x| -x).collect(),
        }
    }
}

/// Element of `V(H)` in the odd-Weyl basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct N0Element {
    pub bits: Vec<bool>,
}

impl N0Element {
    pub fn is_zero(&self) -> bool {
        !self.bits.contains(&true)
    }
}

/// `A(H)` for a fixed `H ≤ G`.
#[derive(Clone, Debug)]
pub struct BurnsideRing {
    classes: SubgroupClassTable,
    marks: TableOfMarks,
    odd_weyl: Vec<usize>,
    name: String,
}

impl BurnsideRing {
    pub fn new(g: &FiniteGroup, h: &Subgroup) -> Self {
        let classes = SubgroupClassTable::within(g, h);
        let marks = table_of_marks(g, &classes);
        let odd_weyl = (0..classes.num_classes())
            .filter(|&c| {
                let k = classes.rep(c);
                let weyl = g.normalizer_within(h, k).order() / k.order();
                weyl.is_odd()
            })
            .collect();
        let top = classes.num_classes() - 1;
        let name = classes.label(top).to_string();
        BurnsideRing {
            classes,
            marks,
            odd_weyl,
            name,
        }
    }

    pub fn of_group(g: &FiniteGroup) -> Self {
        Self::new(g, &g.whole())
    }

    pub fn ambient(&self) -> &Subgroup {
        self.classes.ambient()
    }

    pub fn classes(&self) -> &SubgroupClassTable {
        &self.classes
    }

    pub fn table(&self) -> &TableOfMarks {
        &self.marks
    }

    pub fn rank(&self) -> usize {
        self.classes.num_classes()
    }

    pub fn basis(&self, class: usize) -> BurnsideElement {
        BurnsideElement::basis(self.rank(), class)
    }

    /// `[H/H]`.
    pub fn unit(&self) -> BurnsideElement {
        self.basis(self.rank() - 1)
    }

    /// `[H/K]` with `H` and `K` given by their display labels.
    pub fn label(&self, class: usize) -> String {
        format!("[{}/{}]", self.name, self.classes.label(class))
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.rank()).map(|c| self.label(c)).collect()
    }

    fn check(&self, x: &BurnsideElement) -> Result<(), BurnsideError> {
        if x.coords.len() == self.rank() {
            Ok(())
        } else {
            Err(BurnsideError::Dimension {
                expected: self.rank(),
                got: x.coords.len(),
            })
        }
    }

    /// `φ(x)_L = Σ_K x_K · marks[K][L]`.
    pub fn marks_of(&self, x: &BurnsideElement) -> Result<Vec<BigInt>, BurnsideError> {
        self.check(x)?;
        let n = self.rank();
        Ok((0..n)
            .map(|l| (0..n).map(|k| &x.coords[k] * self.marks.get(k, l)).sum())
            .collect())
    }

    /// Inverts the mark homomorphism by back-substitution; the table is
    /// lower triangular so column `L` only involves rows `K ≥ L`.
    pub fn from_marks(&self, phi: &[BigInt]) -> Result<BurnsideElement, BurnsideError> {
        let n = self.rank();
        if phi.len() != n {
            return Err(BurnsideError::Dimension {
                expected: n,
                got: phi.len(),
            });
        }
        let mut x = vec![BigInt::zero(); n];
        for l in (0..n).rev() {
            let rest: BigInt = (l + 1..n).map(|k| &x[k] * self.marks.get(k, l)).sum();
            let (q, r) = (&phi[l] - rest).div_rem(&BigInt::from(self.marks.get(l, l)));
            if !r.is_zero() {
                return Err(BurnsideError::NonIntegral { class: l });
            }
            x[l] = q;
        }
        Ok(BurnsideElement { coords: x })
    }

    pub fn mul(
        &self,
        x: &BurnsideElement,
        y: &BurnsideElement,
    ) -> Result<BurnsideElement, BurnsideError> {
        let mx = self.marks_of(x)?;
        let my = self.marks_of(y)?;
        let prod: Vec<BigInt> = mx.iter().zip(&my).map(|(a, b)| a * b).collect();
        self.from_marks(&prod)
    }

    /// Augmentation `[H/K] ↦ [H : K]`, the cardinality of the `H`-set.
    pub fn augmentation(&self, x: &BurnsideElement) -> BigInt {
        let h = self.ambient().order();
        x.coords
            .iter()
            .zip(self.classes.reps())
            .map(|(c, k)| c * BigInt::from(h / k.order()))
            .sum()
    }

    /// Classes `[H/K]` with `[N_H(K) : K]` odd, in canonical order.
    pub fn n0_basis(&self) -> &[usize] {
        &self.odd_weyl
    }

    /// Reduction mod 2 followed by dropping the even-Weyl classes.
    pub fn n0_project(&self, x: &BurnsideElement) -> Result<N0Element, BurnsideError> {
        self.check(x)?;
        Ok(N0Element {
            bits: self
                .odd_weyl
                .iter()
                .map(|&c| x.coords[c].is_odd())
                .collect(),
        })
    }

    pub fn n0_labels(&self) -> Vec<String> {
        self.odd_weyl.iter().map(|&c| self.label(c)).collect()
    }
}

impl fmt::Display for BurnsideRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels = self.labels();
        let head = labels.iter().map(String::len).max().unwrap_or(0);
        let width = (0..self.rank())
            .map(|l| self.classes.label(l).len())
            .chain(
                self.marks
                    .marks
                    .iter()
                    .flatten()
                    .map(|m| m.to_string().len()),
            )
            .max()
            .unwrap_or(1);
        write!(f, "{:head$}", "")?;
        for l in 0..self.rank() {
            write!(f, " {:>width$}", self.classes.label(l))?;
        }
        writeln!(f)?;
        for (k, row) in self.marks.marks.iter().enumerate() {
            write!(f, "{:head$}", labels[k])?;
            for m in row {
                write!(f, " {m:>width$}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Matrix of `[H/L] ↦ [K/(a⁻¹La)]` from the basis of `A(H)` to that of
/// `A(K)`, defined when `a⁻¹Ha ⊆ K`.
pub fn induce_matrix(
    g: &FiniteGroup,
    source: &BurnsideRing,
    target: &BurnsideRing,
    a: usize,
) -> Result<IntMatrix, BurnsideError> {
    let (h, k) = (source.ambient(), target.ambient());
    if !g.is_subconjugate(h, k, a) {
        return Err(BurnsideError::NotSubconjugate {
            h: h.clone(),
            k: k.clone(),
            a,
        });
    }
    let mut m = IntMatrix::zeros(target.rank(), source.rank());
    for (c, l) in source.classes().reps().enumerate() {
        let image = g.conjugate_subgroup(l, a);
        let row = target
            .classes()
            .class_of(&image)
            .expect("conjugate of a subgroup of H lies in K");
        m[(row, c)] += 1;
    }
    Ok(m)
}

/// Induction `A(H) → A(K)` along the orbit map `G/H → G/K`, `gH ↦ gaK`.
pub fn burnside_induce(
    g: &FiniteGroup,
    source: &BurnsideRing,
    target: &BurnsideRing,
    a: usize,
    x: &BurnsideElement,
) -> Result<BurnsideElement, BurnsideError> {
    source.check(x)?;
    let m = induce_matrix(g, source, target, a)?;
    Ok(BurnsideElement {
        coords: m.apply(&x.coords),
    })
}

/// A finite set with a left action of a subgroup `A ≤ G`.
///
/// `action[i][p]` is `A.elems()[i] · p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GSet {
    acting: Subgroup,
    points: usize,
    action: Vec<Vec<usize>>,
}

impl GSet {
    /// Validates that the identity acts trivially and `(ab)·p = a·(b·p)`.
    pub fn new(
        g: &FiniteGroup,
        acting: Subgroup,
        points: usize,
        action: Vec<Vec<usize>>,
    ) -> Result<Self, BurnsideError> {
        let invalid = |m: String| Err(BurnsideError::InvalidAction(m));
        if !g.is_subgroup(&acting) {
            return invalid("acting set is not a subgroup".into());
        }
        if action.len() != acting.order() {
            return invalid(format!(
                "{} rows for {} group elements",
                action.len(),
                acting.order()
            ));
        }
        for (i, row) in action.iter().enumerate() {
            if row.len() != points || row.iter().any(|&p| p >= points) {
                return invalid(format!("row {i} is not a map on {points} points"));
            }
        }
        if action[0].iter().enumerate().any(|(p, &q)| p != q) {
            return invalid("identity does not act trivially".into());
        }
        let pos = |x: usize| acting.elems().binary_search(&x).unwrap();
        for (i, &a) in acting.elems().iter().enumerate() {
            for (j, &b) in acting.elems().iter().enumerate() {
                let ab = pos(g.mul(a, b));
                for p in 0..points {
                    if action[ab][p] != action[i][action[j][p]] {
                        return invalid(format!(
                            "composition fails for elements {a}, {b} at point {p}"
                        ));
                    }
                }
            }
        }
        Ok(GSet {
            acting,
            points,
            action,
        })
    }

    /// `A/K` with `A` acting by left multiplication; points are cosets in
    /// order of their smallest element.
    pub fn coset_space(g: &FiniteGroup, acting: &Subgroup, k: &Subgroup) -> Self {
        let mut reps: Vec<usize> = acting
            .elems()
            .iter()
            .map(|&a| k.min_in_left_coset(g, a))
            .collect();
        reps.sort_unstable();
        reps.dedup();
        let index = |x: usize| reps.binary_search(&k.min_in_left_coset(g, x)).unwrap();
        let action = acting
            .elems()
            .iter()
            .map(|&h| reps.iter().map(|&r| index(g.mul(h, r))).collect())
            .collect();
        GSet {
            acting: acting.clone(),
            points: reps.len(),
            action,
        }
    }

    /// Trivial action on `points` points.
    pub fn trivial(acting: &Subgroup, points: usize) -> Self {
        GSet {
            acting: acting.clone(),
            points,
            action: vec![(0..points).collect(); acting.order()],
        }
    }

    /// `A` acting on itself by left translation.
    pub fn regular(g: &FiniteGroup, acting: &Subgroup) -> Self {
        Self::coset_space(g, acting, &g.trivial())
    }

    pub fn acting(&self) -> &Subgroup {
        &self.acting
    }

    pub fn len(&self) -> usize {
        self.points
    }

    pub fn is_empty(&self) -> bool {
        self.points == 0
    }

    pub fn act(&self, element_pos: usize, p: usize) -> usize {
        self.action[element_pos][p]
    }

    pub fn disjoint_union(&self, other: &GSet) -> GSet {
        assert_eq!(self.acting, other.acting, "different acting groups");
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(r1, r2)| {
                r1.iter()
                    .copied()
                    .chain(r2.iter().map(|&q| q + self.points))
                    .collect()
            })
            .collect();
        GSet {
            acting: self.acting.clone(),
            points: self.points + other.points,
            action,
        }
    }

    /// Diagonal action on pairs, point `(p, q)` at index `p·|Y| + q`.
    pub fn product(&self, other: &GSet) -> GSet {
        assert_eq!(self.acting, other.acting, "different acting groups");
        let m = other.points;
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(r1, r2)| {
                (0..self.points * m)
                    .map(|x| r1[x / m] * m + r2[x % m])
                    .collect()
            })
            .collect();
        GSet {
            acting: self.acting.clone(),
            points: self.points * m,
            action,
        }
    }

    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.points];
        let mut out = Vec::new();
        for start in 0..self.points {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut orbit = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(p) = queue.pop_front() {
                for row in &self.action {
                    let q = row[p];
                    if !seen[q] {
                        seen[q] = true;
                        orbit.push(q);
                        queue.push_back(q);
                    }
                }
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }

    pub fn stabilizer(&self, p: usize) -> Subgroup {
        Subgroup::from_elems(
            self.acting
                .elems()
                .iter()
                .enumerate()
                .filter(|(i, _)| self.action[*i][p] == p)
                .map(|(_, &a)| a)
                .collect(),
        )
    }

    /// `|X^L|` for `L ≤ A`.
    pub fn fixed_points(&self, l: &Subgroup) -> usize {
        let rows: Vec<&Vec<usize>> = l
            .elems()
            .iter()
            .map(|x| &self.action[self.acting.elems().binary_search(x).unwrap()])
            .collect();
        (0..self.points)
            .filter(|&p| rows.iter().all(|r| r[p] == p))
            .count()
    }
}

/// Counts orbits by stabilizer class.
pub fn decompose_gset(ring: &BurnsideRing, x: &GSet) -> Result<BurnsideElement, BurnsideError> {
    if x.acting() != ring.ambient() {
        return Err(BurnsideError::InvalidAction(
            "G-set and Burnside ring have different groups".into(),
        ));
    }
    let mut out = BurnsideElement::zero(ring.rank());
    for orbit in x.orbits() {
        let stab = x.stabilizer(orbit[0]);
        let class = ring
            .classes()
            .class_of(&stab)
            .ok_or_else(|| BurnsideError::InvalidAction("stabilizer is not a subgroup".into()))?;
        out.coords[class] += 1;
    }
    Ok(out)
}
