//! Finite groups stored as full multiplication tables.
//!
//! Elements are indices `0..order` with `0` the identity. Every constructor
//! fixes its element enumeration (see [`spec`]), since complex files refer
//! to group elements by index.

mod describe;
mod lattice;
pub mod spec;

use std::cmp::Ordering;
use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

pub use describe::describe_subgroup;
pub use lattice::{enumerate_subgroups, subgroups_within, SubgroupClassTable};

/// Largest group order accepted by the constructors.
pub const MAX_ORDER: usize = 128;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("malformed group spec {spec:?}: {reason}")]
    MalformedSpec { spec: String, reason: String },
    #[error("group spec {spec:?} out of supported range: {reason}")]
    OutOfRange { spec: String, reason: String },
    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),
    #[error("element {0} is not in the group")]
    NoSuchElement(usize),
    #[error("elements {0:?} do not form a subgroup")]
    NotASubgroup(Vec<usize>),
    #[error("{sub:?} is not contained in {sup:?}")]
    NotContained { sub: Vec<usize>, sup: Vec<usize> },
}

/// A finite group given by its Cayley table.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    inv: Vec<usize>,
    names: Option<Vec<String>>,
    spec: Option<String>,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.table == other.table
    }
}

impl Eq for FiniteGroup {}

impl FiniteGroup {
    /// Builds a group from a square table, checking identity at index 0,
    /// the Latin-square property and associativity.
    pub fn from_table(rows: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let order = rows.len();
        if order == 0 {
            return Err(GroupError::InvalidTable("empty table".into()));
        }
        if order > MAX_ORDER {
            return Err(GroupError::InvalidTable(format!(
                "order {order} exceeds {MAX_ORDER}"
            )));
        }
        let mut table = Vec::with_capacity(order * order);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(GroupError::InvalidTable(format!(
                    "row {i} has length {}",
                    row.len()
                )));
            }
            table.extend_from_slice(row);
        }
        if let Some(&x) = table.iter().find(|&&x| x >= order) {
            return Err(GroupError::InvalidTable(format!("entry {x} out of range")));
        }
        for x in 0..order {
            if table[x] != x || table[x * order] != x {
                return Err(GroupError::InvalidTable(
                    "index 0 is not a two-sided identity".into(),
                ));
            }
        }
        for i in 0..order {
            let mut row_seen = vec![false; order];
            let mut col_seen = vec![false; order];
            for j in 0..order {
                row_seen[table[i * order + j]] = true;
                col_seen[table[j * order + i]] = true;
            }
            if row_seen.contains(&false) || col_seen.contains(&false) {
                return Err(GroupError::InvalidTable(format!(
                    "row or column {i} is not a permutation"
                )));
            }
        }
        for a in 0..order {
            for b in 0..order {
                let ab = table[a * order + b];
                for c in 0..order {
                    let bc = table[b * order + c];
                    if table[ab * order + c] != table[a * order + bc] {
                        return Err(GroupError::InvalidTable(format!(
                            "associativity fails for ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let inv = (0..order)
            .map(|x| (0..order).find(|&y| table[x * order + y] == 0).unwrap())
            .collect();
        Ok(FiniteGroup {
            order,
            table,
            inv,
            names: None,
            spec: None,
        })
    }

    /// Parses a group spec such as `S3`, `C2xC2` or `perm:[(1,2),(1,2,3)]`.
    pub fn parse(spec: &str) -> Result<Self, GroupError> {
        spec::construct_group(spec)
    }

    pub(crate) fn with_names(mut self, names: Vec<String>) -> Self {
        debug_assert_eq!(names.len(), self.order);
        self.names = Some(names);
        self
    }

    pub(crate) fn with_spec(mut self, spec: impl Into<String>) -> Self {
        self.spec = Some(spec.into());
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// The spec string this group was constructed from, if any.
    pub fn spec(&self) -> Option<&str> {
        self.spec.as_deref()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// `a⁻¹ x a`.
    #[inline]
    pub fn conj(&self, x: usize, a: usize) -> usize {
        self.mul(self.mul(self.inv(a), x), a)
    }

    pub fn contains(&self, x: usize) -> bool {
        x < self.order
    }

    pub fn name(&self, x: usize) -> String {
        match &self.names {
            Some(names) => names[x].clone(),
            None => x.to_string(),
        }
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut k = 1;
        let mut y = x;
        while y != 0 {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn cayley_rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup((0..self.order).collect())
    }

    pub fn trivial(&self) -> Subgroup {
        Subgroup(vec![0])
    }

    /// Checks that `elems` is a subgroup and returns it in canonical form.
    pub fn subgroup(&self, elems: &[usize]) -> Result<Subgroup, GroupError> {
        if let Some(&x) = elems.iter().find(|&&x| x >= self.order) {
            return Err(GroupError::NoSuchElement(x));
        }
        let s = Subgroup::from_elems(elems.to_vec());
        if self.is_subgroup(&s) {
            Ok(s)
        } else {
            Err(GroupError::NotASubgroup(s.0))
        }
    }

    /// Closure and identity check; `|s|` dividing the order follows.
    pub fn is_subgroup(&self, s: &Subgroup) -> bool {
        if s.0.first() != Some(&0) || s.0.iter().any(|&x| x >= self.order) {
            return false;
        }
        s.0.iter()
            .all(|&a| s.0.iter().all(|&b| s.contains(self.mul(a, self.inv(b)))))
    }

    /// Subgroup generated by `gens`.
    pub fn generate(&self, gens: &[usize]) -> Subgroup {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut out = vec![0];
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                    queue.push_back(y);
                }
            }
        }
        Subgroup::from_elems(out)
    }

    /// `a⁻¹ H a`.
    pub fn conjugate_subgroup(&self, h: &Subgroup, a: usize) -> Subgroup {
        Subgroup::from_elems(h.0.iter().map(|&x| self.conj(x, a)).collect())
    }

    /// True iff `a⁻¹ H a ⊆ K`, i.e. there is an orbit map `G/H → G/K`,
    /// `gH ↦ gaK`.
    pub fn is_subconjugate(&self, h: &Subgroup, k: &Subgroup, a: usize) -> bool {
        h.0.iter().all(|&x| k.contains(self.conj(x, a)))
    }

    /// `N_G(H)`.
    pub fn normalizer(&self, h: &Subgroup) -> Result<Subgroup, GroupError> {
        if !self.is_subgroup(h) {
            return Err(GroupError::NotASubgroup(h.0.clone()));
        }
        Ok(self.normalizer_within(&self.whole(), h))
    }

    /// `N_A(H) = {a ∈ A : a⁻¹Ha = H}` for `H ≤ A`.
    pub fn normalizer_within(&self, ambient: &Subgroup, h: &Subgroup) -> Subgroup {
        Subgroup(
            ambient
                .0
                .iter()
                .copied()
                .filter(|&a| self.is_subconjugate(h, h, a))
                .collect(),
        )
    }

    /// The subgroup `h` as a group in its own right; element `i` of the
    /// result is `h.elems()[i]`.
    pub fn restrict(&self, h: &Subgroup) -> FiniteGroup {
        let n = h.order();
        let pos = |x: usize| h.0.binary_search(&x).expect("subgroup not closed");
        let table = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| pos(self.mul(h.0[i], h.0[j])))
            .collect();
        let inv = (0..n).map(|i| pos(self.inv(h.0[i]))).collect();
        FiniteGroup {
            order: n,
            table,
            inv,
            names: self
                .names
                .as_ref()
                .map(|names| h.0.iter().map(|&x| names[x].clone()).collect()),
            spec: None,
        }
    }
}

/// A subgroup, stored as its sorted element list.
///
/// A `Subgroup` does not carry its parent group; operations take the
/// parent explicitly. Ordering is canonical: by order, then
/// lexicographically on elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup(Vec<usize>);

impl Subgroup {
    /// Sorts and dedups; does not check closure.
    pub fn from_elems(mut elems: Vec<usize>) -> Self {
        elems.sort_unstable();
        elems.dedup();
        Subgroup(elems)
    }

    pub fn elems(&self) -> &[usize] {
        &self.0
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.0.iter().all(|&x| other.contains(x))
    }

    pub fn index_in(&self, sup: &Subgroup) -> usize {
        sup.order() / self.order()
    }

    /// Smallest element of the coset `a·self`, the canonical representative
    /// of the orbit morphism determined by `a`.
    pub fn min_in_left_coset(&self, g: &FiniteGroup, a: usize) -> usize {
        self.0.iter().map(|&k| g.mul(a, k)).min().unwrap_or(a)
    }
}

impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order_census(g: &FiniteGroup) -> Vec<usize> {
        let mut census = vec![0; g.order() + 1];
        for x in g.elements() {
            census[g.element_order(x)] += 1;
        }
        census
    }

    #[test]
    fn trivial_group() {
        let g = FiniteGroup::parse("C1").unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.mul(0, 0), 0);
    }

    #[test]
    fn s3_has_three_involutions() {
        let g = FiniteGroup::parse("S3").unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(order_census(&g)[2], 3);
        assert_eq!(order_census(&g)[3], 2);
    }

    #[test]
    fn klein_four_is_elementary() {
        let g = FiniteGroup::parse("C2xC2").unwrap();
        assert_eq!(g.order(), 4);
        assert!((1..4).all(|x| g.element_order(x) == 2));
    }

    #[test]
    fn table_round_trip() {
        for spec in ["C5", "D4", "Q8", "S4", "C2xS3", "perm:[(1,2,3,4),(1,3)]"] {
            let g = FiniteGroup::parse(spec).unwrap();
            let h = FiniteGroup::from_table(g.cayley_rows()).unwrap();
            assert_eq!(g, h, "{spec}");
        }
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(FiniteGroup::from_table(vec![]).is_err());
        assert!(FiniteGroup::from_table(vec![vec![1, 0], vec![0, 1]]).is_err());
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]]).is_err());
        // Latin square without associativity: a loop of order 5.
        let loop5 = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(
            FiniteGroup::from_table(loop5),
            Err(GroupError::InvalidTable(_))
        ));
    }

    #[test]
    fn normalizers_in_s3() {
        let g = FiniteGroup::parse("S3").unwrap();
        let t = g.generate(&[g_index(&g, "(1,2)")]);
        assert_eq!(g.normalizer(&t).unwrap(), t);
        let c3 = g.generate(&[g_index(&g, "(1,2,3)")]);
        assert_eq!(g.normalizer(&c3).unwrap(), g.whole());
        assert_eq!(g.normalizer(&g.whole()).unwrap(), g.whole());
        assert!(g.normalizer(&Subgroup::from_elems(vec![0, 1, 2])).is_err());
    }

    #[test]
    fn conjugation_in_s3() {
        let g = FiniteGroup::parse("S3").unwrap();
        let t12 = g.generate(&[g_index(&g, "(1,2)")]);
        let t23 = g.generate(&[g_index(&g, "(2,3)")]);
        let a = g_index(&g, "(1,2,3)");
        assert_eq!(g.conjugate_subgroup(&t12, a), t23);
        assert_eq!(g.conjugate_subgroup(&t12, 0), t12);
        let c3 = g.generate(&[a]);
        for x in g.elements() {
            assert!(!g.is_subconjugate(&t12, &c3, x));
            assert!(g.is_subconjugate(&g.trivial(), &t12, x));
            assert!(g.is_subconjugate(&t12, &g.whole(), x));
        }
    }

    #[test]
    fn abelian_conjugation_is_trivial() {
        let g = FiniteGroup::parse("C2xC4").unwrap();
        for h in enumerate_subgroups(&g) {
            for a in g.elements() {
                assert_eq!(g.conjugate_subgroup(&h, a), h);
            }
        }
    }

    #[test]
    fn restrict_matches_parent_products() {
        let g = FiniteGroup::parse("S4").unwrap();
        for h in enumerate_subgroups(&g) {
            let r = g.restrict(&h);
            for i in r.elements() {
                for j in r.elements() {
                    assert_eq!(h.elems()[r.mul(i, j)], g.mul(h.elems()[i], h.elems()[j]));
                }
            }
        }
    }

    pub(crate) fn g_index(g: &FiniteGroup, name: &str) -> usize {
        g.elements().find(|&x| g.name(x) == name).unwrap()
    }
}
