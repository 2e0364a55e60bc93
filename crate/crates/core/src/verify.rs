//! Executable verification suites. Each suite returns a report listing
//! every failed check; randomized suites draw from a seeded ChaCha stream
//! (`BREDONITE_SEED`).

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::burnside::{burnside_induce, decompose_gset, BurnsideElement, BurnsideRing, GSet};
use crate::coeff::{system_value, TheoryTag};
use crate::complex::{
    build_example, free_circle, induce_complex, orbit, reflection_circle,
    subdivided_reflection_circle, trivial_sphere, BoundaryRecord, Cell, GCWComplex,
};
use crate::group::{enumerate_subgroups, FiniteGroup, Subgroup};
use crate::linalg::{smith_form, HomologyGroup, IntMatrix, Ring};
use crate::theory::{
    bredon_complex_with_blocks, coefficient_check, equivariant_homology, equivariant_homology_upto,
    free_borel_compare, induction_compare, mv_check,
};

pub const SUITES: [&str; 8] = [
    "coefficients",
    "burnside",
    "borel",
    "induction",
    "mv",
    "nonfree",
    "linalg",
    "degenerate",
];

/// Groups of the coefficient table.
pub const TEST_GROUPS: [&str; 8] = ["C1", "C2", "C3", "C4", "C2xC2", "S3", "D4", "Q8"];

/// Groups drawn by the random complex generator, all of order ≤ 8.
pub const RANDOM_GROUPS: [&str; 11] = [
    "C1", "C2", "C3", "C4", "C2xC2", "S3", "C6", "D4", "Q8", "C2xC4", "C8",
];

pub const DEFAULT_SEED: u64 = 20_240_917;
pub const RANDOM_COVERS: usize = 20;
pub const RANDOM_MATRICES: usize = 200;
pub const MAX_RANDOM_CELLS: usize = 8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("unknown suite '{0}' (expected one of {list} or all)", list = SUITES.join(", "))]
    UnknownSuite(String),
    #[error("BREDONITE_SEED must be an unsigned integer, got '{0}'")]
    BadSeed(String),
}

/// Seed from `BREDONITE_SEED`, or [`DEFAULT_SEED`] when unset.
pub fn seed_from_env() -> Result<u64, VerifyError> {
    match std::env::var("BREDONITE_SEED") {
        Ok(s) => s.trim().parse().map_err(|_| VerifyError::BadSeed(s)),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checks: usize,
    pub failures: Vec<String>,
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} ({} checks, {:.2}s)",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.checks,
            self.elapsed.as_secs_f64()
        )?;
        for msg in &self.failures {
            write!(f, "\n  {msg}")?;
        }
        Ok(())
    }
}

#[derive(Default)]
struct Tally {
    checks: usize,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn eq<T: PartialEq + fmt::Debug>(&mut self, got: T, want: T, what: impl FnOnce() -> String) {
        self.checks += 1;
        if got != want {
            self.failures
                .push(format!("{}: got {got:?}, expected {want:?}", what()));
        }
    }
}

pub fn run_suite(name: &str, seed: u64) -> Result<SuiteReport, VerifyError> {
    let (name, body): (&'static str, fn(&mut Tally, u64)) = match name {
        "coefficients" => ("coefficients", suite_coefficients),
        "burnside" => ("burnside", suite_burnside),
        "borel" => ("borel", suite_borel),
        "induction" => ("induction", suite_induction),
        "mv" => ("mv", suite_mv),
        "nonfree" => ("nonfree", suite_nonfree),
        "linalg" => ("linalg", suite_linalg),
        "degenerate" => ("degenerate", suite_degenerate),
        other => return Err(VerifyError::UnknownSuite(other.to_string())),
    };
    let start = Instant::now();
    let mut t = Tally::default();
    body(&mut t, seed);
    Ok(SuiteReport {
        name,
        checks: t.checks,
        failures: t.failures,
        elapsed: start.elapsed(),
    })
}

pub fn run_all(seed: u64) -> Vec<SuiteReport> {
    SUITES
        .iter()
        .map(|s| run_suite(s, seed).expect("listed suite"))
        .collect()
}

fn parse(spec: &str) -> FiniteGroup {
    FiniteGroup::parse(spec).expect("built-in group spec")
}

/// Subgroups of `g` found by testing every subset containing the identity
/// for closure.
pub fn brute_force_subgroups(g: &FiniteGroup) -> Vec<BTreeSet<usize>> {
    let n = g.order();
    assert!(n <= 16, "subset enumeration is for small groups");
    let mut out = Vec::new();
    for mask in 0u32..(1 << (n - 1)) {
        let set: BTreeSet<usize> = std::iter::once(0)
            .chain((1..n).filter(|i| mask >> (i - 1) & 1 == 1))
            .collect();
        if set
            .iter()
            .all(|&a| set.iter().all(|&b| set.contains(&g.mul(a, b))))
        {
            out.push(set);
        }
    }
    out
}

/// `(#conjugacy classes of subgroups, #classes with odd Weyl index)` of
/// `g`, from subset enumeration and direct normalizer counts.
pub fn brute_force_class_counts(g: &FiniteGroup) -> (usize, usize) {
    let subs = brute_force_subgroups(g);
    let conj = |s: &BTreeSet<usize>, a: usize| -> BTreeSet<usize> {
        s.iter().map(|&x| g.mul(g.mul(g.inv(a), x), a)).collect()
    };
    let mut seen: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    let (mut classes, mut odd) = (0, 0);
    for s in &subs {
        if seen.contains(s) {
            continue;
        }
        classes += 1;
        for a in g.elements() {
            seen.insert(conj(s, a));
        }
        let normalizer = g.elements().filter(|&a| conj(s, a) == *s).count();
        if (normalizer / s.len()).is_odd() {
            odd += 1;
        }
    }
    (classes, odd)
}

fn suite_coefficients(t: &mut Tally, _seed: u64) {
    for spec in TEST_GROUPS {
        let g = parse(spec);
        for h in enumerate_subgroups(&g) {
            let (classes, odd) = brute_force_class_counts(&g.restrict(&h));
            for theory in TheoryTag::EVERY {
                t.check(coefficient_check(theory, &g, &h), || {
                    format!("coefficient_check({theory}, {spec}, {h})")
                });
                for q in 0..=3i64 {
                    let v = system_value(theory, q, &g, &h).expect("valid input");
                    let want = match (theory, q) {
                        (TheoryTag::All, _) => 0,
                        (TheoryTag::Euler, _) => 1,
                        (_, 1..) => 0,
                        (TheoryTag::OrientedSingular, _) => classes,
                        (TheoryTag::UnorientedSingular, _) => odd,
                    };
                    t.eq(v.rank, want, || format!("rank M_{q}({theory}; {spec}/{h})"));
                    let ring = if theory == TheoryTag::OrientedSingular {
                        Ring::Integers
                    } else {
                        Ring::Gf2
                    };
                    t.eq(v.ring, ring, || format!("ring of M_{q}({theory})"));
                }
            }
        }
    }
    for (spec, oriented, unoriented) in [("S3", 4, 2), ("C2xC2", 5, 1), ("C2", 2, 1), ("C3", 2, 2)]
    {
        let g = parse(spec);
        let w = g.whole();
        t.eq(
            system_value(TheoryTag::OrientedSingular, 0, &g, &w)
                .unwrap()
                .rank,
            oriented,
            || format!("rank A({spec})"),
        );
        t.eq(
            system_value(TheoryTag::UnorientedSingular, 0, &g, &w)
                .unwrap()
                .rank,
            unoriented,
            || format!("dim V({spec})"),
        );
    }
}

/// `ind([H/L])` as a `K`-set: the fiber of `G/L → G/K`, `xL ↦ xaK`, over
/// `eK`, with `K` acting on `G/L` by left multiplication.
pub fn fiber_oracle(
    g: &FiniteGroup,
    k_ring: &BurnsideRing,
    l: &Subgroup,
    a: usize,
) -> BurnsideElement {
    let k = k_ring.ambient();
    let mut points: Vec<usize> = k
        .elems()
        .iter()
        .map(|&y| l.min_in_left_coset(g, g.mul(y, g.inv(a))))
        .collect();
    points.sort_unstable();
    points.dedup();
    let action = k
        .elems()
        .iter()
        .map(|&y| {
            points
                .iter()
                .map(|&p| {
                    let img = l.min_in_left_coset(g, g.mul(y, p));
                    points.binary_search(&img).expect("fiber is K-stable")
                })
                .collect()
        })
        .collect();
    let set = GSet::new(g, k.clone(), points.len(), action).expect("left multiplication acts");
    decompose_gset(k_ring, &set).expect("same acting group")
}

fn suite_burnside(t: &mut Tally, _seed: u64) {
    for spec in TEST_GROUPS {
        let g = parse(spec);
        let ring = BurnsideRing::of_group(&g);
        let n = ring.rank();
        let reps: Vec<Subgroup> = ring.classes().reps().cloned().collect();
        let cosets: Vec<GSet> = reps
            .iter()
            .map(|k| GSet::coset_space(&g, &g.whole(), k))
            .collect();
        let basis: Vec<BurnsideElement> = (0..n).map(|c| ring.basis(c)).collect();
        let mul = |x: &BurnsideElement, y: &BurnsideElement| ring.mul(x, y).expect("integral");
        for i in 0..n {
            t.eq(mul(&ring.unit(), &basis[i]), basis[i].clone(), || {
                format!("{spec}: unit · {}", ring.label(i))
            });
            for (l, lr) in reps.iter().enumerate() {
                t.eq(
                    ring.table().get(i, l),
                    cosets[i].fixed_points(lr) as i64,
                    || format!("{spec}: mark of {} at {l}", ring.label(i)),
                );
            }
            for j in 0..n {
                let xy = mul(&basis[i], &basis[j]);
                t.eq(xy.clone(), mul(&basis[j], &basis[i]), || {
                    format!("{spec}: commutativity {i},{j}")
                });
                let product = decompose_gset(&ring, &cosets[i].product(&cosets[j])).unwrap();
                t.eq(xy.clone(), product, || {
                    format!("{spec}: [G/Ki]·[G/Kj] vs product G-set")
                });
                let sum = decompose_gset(&ring, &cosets[i].disjoint_union(&cosets[j])).unwrap();
                t.eq(sum, &basis[i] + &basis[j], || {
                    format!("{spec}: disjoint union {i},{j}")
                });
                let phi: Vec<BigInt> = ring
                    .marks_of(&basis[i])
                    .unwrap()
                    .iter()
                    .zip(ring.marks_of(&basis[j]).unwrap())
                    .map(|(a, b)| a * b)
                    .collect();
                t.eq(ring.marks_of(&xy).unwrap(), phi, || {
                    format!("{spec}: marks multiplicative {i},{j}")
                });
                for k in 0..n {
                    let left = mul(&xy, &basis[k]);
                    let right = mul(&basis[i], &mul(&basis[j], &basis[k]));
                    t.eq(left, right, || format!("{spec}: associativity {i},{j},{k}"));
                    let jk = &basis[j] + &basis[k];
                    t.eq(
                        mul(&basis[i], &jk),
                        &xy + &mul(&basis[i], &basis[k]),
                        || format!("{spec}: distributivity {i},{j},{k}"),
                    );
                }
            }
        }
        induce_properties(t, spec, &g);
    }
}

fn induce_properties(t: &mut Tally, spec: &str, g: &FiniteGroup) {
    let subs = enumerate_subgroups(g);
    let rings: HashMap<&Subgroup, BurnsideRing> =
        subs.iter().map(|s| (s, BurnsideRing::new(g, s))).collect();
    let maps = |h: &Subgroup, k: &Subgroup| -> Vec<usize> {
        g.elements()
            .filter(|&a| g.is_subconjugate(h, k, a))
            .collect()
    };
    for h in &subs {
        let rh = &rings[h];
        for k in &subs {
            let rk = &rings[k];
            let elements = maps(h, k);
            for &a in &elements {
                let m = crate::burnside::induce_matrix(g, rh, rk, a).unwrap();
                for &y in k.elems() {
                    let m2 = crate::burnside::induce_matrix(g, rh, rk, g.mul(a, y)).unwrap();
                    t.eq(&m2, &m, || {
                        format!("{spec}: induce {h}→{k} via {a} vs {a}·{y}")
                    });
                }
                for (c, l) in rh.classes().reps().enumerate() {
                    let got = burnside_induce(g, rh, rk, a, &rh.basis(c)).unwrap();
                    t.eq(got, fiber_oracle(g, rk, l, a), || {
                        format!("{spec}: induce [{h}/{l}] to {k} via {a} vs fiber")
                    });
                }
            }
            // functoriality along H → K → L over coset representatives
            let reps_hk: BTreeSet<usize> = elements
                .iter()
                .map(|&a| k.min_in_left_coset(g, a))
                .collect();
            for l in &subs {
                if reps_hk.is_empty() || l.order() < k.order() {
                    continue;
                }
                let rl = &rings[l];
                let reps_kl: BTreeSet<usize> = maps(k, l)
                    .into_iter()
                    .map(|b| l.min_in_left_coset(g, b))
                    .collect();
                for &a in &reps_hk {
                    for &b in &reps_kl {
                        let f = crate::burnside::induce_matrix(g, rh, rk, a).unwrap();
                        let gm = crate::burnside::induce_matrix(g, rk, rl, b).unwrap();
                        let direct =
                            crate::burnside::induce_matrix(g, rh, rl, g.mul(a, b)).unwrap();
                        t.eq(gm.mul(&f), direct, || {
                            format!("{spec}: functoriality {h}→{k}→{l} via {a},{b}")
                        });
                    }
                }
            }
        }
    }
}

fn free_groups(ranks: &[usize]) -> Vec<HomologyGroup> {
    ranks.iter().map(|&r| HomologyGroup::free(r)).collect()
}

fn suite_borel(t: &mut Tally, _seed: u64) {
    let cases = [
        ("free_circle(C2)", free_circle(2).unwrap()),
        ("free_circle(C4)", free_circle(4).unwrap()),
        ("free_circle(C3)", free_circle(3).unwrap()),
        ("orbit(C2,e)", orbit(&parse("C2"), &parse("C2").trivial())),
    ];
    for (name, x) in &cases {
        let circle = x.dim() == Some(1);
        for theory in [
            TheoryTag::OrientedSingular,
            TheoryTag::UnorientedSingular,
            TheoryTag::All,
        ] {
            let c = free_borel_compare(x, theory).expect("free fixture");
            t.check(c.equal, || {
                format!("{name} {theory}: {:?} vs {:?}", c.left, c.right)
            });
            let want = match (theory, circle) {
                (TheoryTag::All, _) => Vec::new(),
                (_, true) => free_groups(&[1, 1]),
                (_, false) => free_groups(&[1]),
            };
            t.eq(c.right.clone(), want, || {
                format!("{name} {theory}: quotient homology")
            });
        }
    }
}

/// A complex over `G.restrict(H)` from cells `(id, dim, stabilizer in G)`
/// and records with elements of `H`.
fn over_subgroup(
    g: &FiniteGroup,
    h: &Subgroup,
    cells: &[(&str, usize, &Subgroup)],
    records: &[(&str, &str, usize, i64)],
) -> GCWComplex {
    let local = |x: usize| h.elems().binary_search(&x).expect("element of H");
    let group = g.restrict(h);
    let cells = cells
        .iter()
        .map(|(id, dim, s)| {
            Cell::new(
                *id,
                *dim,
                Subgroup::from_elems(s.elems().iter().map(|&x| local(x)).collect()),
            )
        })
        .collect();
    let records: Vec<BoundaryRecord> = records
        .iter()
        .map(|(f, to, a, d)| BoundaryRecord::new(*f, *to, local(*a), *d))
        .collect();
    GCWComplex::new(group, cells, &records).expect("fixture over H is valid")
}

/// `(G, H ≤ G, X over H)` triples of the induction suite.
pub fn induction_fixtures() -> Vec<(String, FiniteGroup, Subgroup, GCWComplex)> {
    let mut out = Vec::new();
    let c2 = parse("C2");
    let circle = free_circle(1).unwrap();
    out.push((
        "{e}≤C2, trivial circle".into(),
        c2.clone(),
        c2.trivial(),
        circle,
    ));

    let s3 = parse("S3");
    let t = s3.generate(&[2]);
    let e = s3.trivial();
    out.push((
        "C2≤S3, orbit C2/C2".into(),
        s3.clone(),
        t.clone(),
        over_subgroup(&s3, &t, &[("v", 0, &t)], &[]),
    ));
    out.push((
        "C2≤S3, orbit C2/e".into(),
        s3.clone(),
        t.clone(),
        over_subgroup(&s3, &t, &[("v", 0, &e)], &[]),
    ));
    out.push((
        "C2≤S3, reflection arc".into(),
        s3.clone(),
        t.clone(),
        over_subgroup(
            &s3,
            &t,
            &[("p", 0, &t), ("q", 0, &t), ("e", 1, &e)],
            &[("e", "p", 0, -1), ("e", "q", 0, 1)],
        ),
    ));

    let d4 = parse("D4");
    let subs = enumerate_subgroups(&d4);
    for r in subs.iter().filter(|s| s.order() == 2) {
        let e = d4.trivial();
        out.push((
            format!("{r}≤D4, disjoint orbits"),
            d4.clone(),
            r.clone(),
            over_subgroup(&d4, r, &[("u", 0, r), ("w", 0, &e), ("x", 0, r)], &[]),
        ));
    }
    out
}

fn suite_induction(t: &mut Tally, _seed: u64) {
    for (name, g, h, x) in induction_fixtures() {
        for theory in TheoryTag::EVERY {
            match induction_compare(&g, &h, &x, theory) {
                Ok(c) => t.check(c.equal, || {
                    format!("{name} {theory}: {:?} vs {:?}", c.left, c.right)
                }),
                Err(e) => t.check(false, || format!("{name} {theory}: {e}")),
            }
        }
    }
    // {e} ≤ C2 ≤ D4 in two steps against one
    let d4 = parse("D4");
    let circle = free_circle(1).unwrap();
    for c2 in enumerate_subgroups(&d4)
        .into_iter()
        .filter(|s| s.order() == 2)
    {
        let mid = d4.restrict(&c2);
        let step1 = induce_complex(&mid, &mid.trivial(), &circle).expect("{e} ≤ C2");
        let two_steps = induce_complex(&d4, &c2, &step1).expect("C2 ≤ D4");
        let one_step = induce_complex(&d4, &d4.trivial(), &circle).expect("{e} ≤ D4");
        t.eq(&two_steps, &one_step, || {
            format!("{{e}}≤{c2}≤D4 composite induction")
        });
        for theory in TheoryTag::EVERY {
            let a = equivariant_homology(&circle, theory).unwrap().groups;
            let b = equivariant_homology(&two_steps, theory).unwrap().groups;
            t.eq(a, b, || format!("{{e}}≤{c2}≤D4 {theory}"));
        }
    }
}

/// A random valid complex: at most 8 cell orbits over a group of order
/// at most 8. Free 2-cells are attached along cycles of the free part of
/// the oriented `d_1`, so `d∘d = 0` holds by construction.
pub fn random_complex<R: Rng>(rng: &mut R) -> GCWComplex {
    let g = parse(RANDOM_GROUPS.choose(rng).expect("nonempty"));
    let subs = enumerate_subgroups(&g);
    let mut cells = Vec::new();
    let mut records = Vec::new();
    let n0 = rng.gen_range(1..=3);
    for i in 0..n0 {
        cells.push(Cell::new(
            format!("v{i}"),
            0,
            subs.choose(rng).unwrap().clone(),
        ));
    }
    let n1 = rng.gen_range(0..=3);
    for i in 0..n1 {
        let id = format!("e{i}");
        let mut allowed = g.whole();
        for _ in 0..rng.gen_range(1..=2) {
            let to = rng.gen_range(0..n0);
            let a = rng.gen_range(0..g.order());
            // H ⊆ a·K·a⁻¹
            let image = g.conjugate_subgroup(&cells[to].stabilizer, g.inv(a));
            allowed = Subgroup::from_elems(
                allowed
                    .elems()
                    .iter()
                    .copied()
                    .filter(|&x| image.contains(x))
                    .collect(),
            );
            let deg = *[-2, -1, 1, 2].choose(rng).unwrap();
            records.push(BoundaryRecord::new(id.clone(), format!("v{to}"), a, deg));
        }
        let options: Vec<&Subgroup> = subs.iter().filter(|s| s.is_subset_of(&allowed)).collect();
        cells.push(Cell::new(id, 1, (*options.choose(rng).unwrap()).clone()));
    }
    let skeleton =
        GCWComplex::new(g.clone(), cells.clone(), &records).expect("1-skeleton is valid");
    let n2 = rng.gen_range(0..=(MAX_RANDOM_CELLS - n0 - n1).min(2));
    if n1 > 0 && n2 > 0 {
        let b = bredon_complex_with_blocks(&skeleton, TheoryTag::OrientedSingular, 0).unwrap();
        let d1 = b.chain.boundary(1);
        let edges: Vec<usize> = skeleton.cells_in_dim(1).collect();
        // the class of the trivial subgroup comes first in A(K)
        let free_cols: Vec<Vec<BigInt>> = edges.iter().map(|&k| d1.column(b.offsets[k])).collect();
        let m = IntMatrix::from_columns(d1.rows(), &free_cols);
        let s = smith_form(&m, Ring::Integers);
        let kernel: Vec<Vec<BigInt>> = (s.rank..edges.len()).map(|c| s.v.column(c)).collect();
        for j in 0..n2 {
            let id = format!("f{j}");
            let mut w = vec![BigInt::zero(); edges.len()];
            for z in &kernel {
                let c = BigInt::from(rng.gen_range(-1..=1));
                for (wi, zi) in w.iter_mut().zip(z) {
                    *wi += &c * zi;
                }
            }
            for (pos, &k) in edges.iter().enumerate() {
                let total = i64::try_from(&w[pos]).expect("small coefficients");
                if total == 0 {
                    continue;
                }
                let split = rng.gen_range(-1..=1);
                let edge = &skeleton.cells()[k].id;
                records.push(BoundaryRecord::new(
                    id.clone(),
                    edge.clone(),
                    rng.gen_range(0..g.order()),
                    split,
                ));
                records.push(BoundaryRecord::new(
                    id.clone(),
                    edge.clone(),
                    rng.gen_range(0..g.order()),
                    total - split,
                ));
            }
            cells.push(Cell::new(id, 2, g.trivial()));
        }
    }
    GCWComplex::new(g, cells, &records).expect("generated complex is valid")
}

/// Each cell goes to `X1`, `X2` or both, then both parts are closed
/// downward along the records.
pub fn random_cover<R: Rng>(rng: &mut R, x: &GCWComplex) -> (Vec<String>, Vec<String>) {
    let n = x.num_cells();
    let mut in1 = vec![false; n];
    let mut in2 = vec![false; n];
    for k in 0..n {
        match rng.gen_range(0..3) {
            0 => in1[k] = true,
            1 => in2[k] = true,
            _ => {
                in1[k] = true;
                in2[k] = true;
            }
        }
    }
    for k in (0..n).rev() {
        for r in x.records().iter().filter(|r| r.from == k) {
            in1[r.to] |= in1[k];
            in2[r.to] |= in2[k];
        }
    }
    let ids = |mask: &[bool]| -> Vec<String> {
        (0..n)
            .filter(|&k| mask[k])
            .map(|k| x.cells()[k].id.clone())
            .collect()
    };
    (ids(&in1), ids(&in2))
}

fn suite_mv(t: &mut Tally, seed: u64) {
    let mut fixtures: Vec<(String, GCWComplex, Vec<String>, Vec<String>)> = Vec::new();
    let strs = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    fixtures.push((
        "trivial_sphere(C2,1) hemispheres".into(),
        trivial_sphere(&parse("C2"), 1),
        strs(&["e0+", "e0-", "e1+"]),
        strs(&["e0+", "e0-", "e1-"]),
    ));
    fixtures.push((
        "subdivided_reflection_circle arcs".into(),
        subdivided_reflection_circle(),
        strs(&["p", "r", "a"]),
        strs(&["q", "r", "b"]),
    ));
    fixtures.push((
        "reflection_circle fixed points".into(),
        reflection_circle(),
        strs(&["p", "q", "e"]),
        strs(&["p", "q"]),
    ));
    fixtures.push((
        "disjoint orbits".into(),
        build_example("disjoint_union(orbit(D4,C2),orbit(D4,C4))").unwrap(),
        strs(&["0.v"]),
        strs(&["1.v"]),
    ));
    let whole = reflection_circle();
    fixtures.push((
        "X1 = X2 = X".into(),
        whole,
        strs(&["p", "q", "e"]),
        strs(&["p", "q", "e"]),
    ));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..RANDOM_COVERS {
        let x = random_complex(&mut rng);
        let (a, b) = random_cover(&mut rng, &x);
        t.check(
            x.num_cells() <= MAX_RANDOM_CELLS && x.group().order() <= 8,
            || format!("random complex {k} exceeds the size bounds"),
        );
        fixtures.push((format!("random cover {k} (seed {seed})"), x, a, b));
    }
    for (name, x, a, b) in &fixtures {
        for theory in TheoryTag::EVERY {
            match mv_check(x, a, b, theory) {
                Ok(les) => t.check(les.exact, || format!("{name} {theory}: sequence not exact")),
                Err(e) => t.check(false, || format!("{name} {theory}: {e}")),
            }
        }
    }
}

fn suite_nonfree(t: &mut Tally, _seed: u64) {
    for (name, x) in [
        ("reflection_circle", reflection_circle()),
        (
            "subdivided_reflection_circle",
            subdivided_reflection_circle(),
        ),
    ] {
        let get = |theory| equivariant_homology(&x, theory).unwrap().groups;
        t.eq(
            get(TheoryTag::OrientedSingular),
            free_groups(&[3, 0]),
            || format!("{name} oriented"),
        );
        t.eq(
            get(TheoryTag::UnorientedSingular),
            free_groups(&[2, 1]),
            || format!("{name} unoriented"),
        );
        t.eq(get(TheoryTag::All), free_groups(&[0, 0]), || {
            format!("{name} all")
        });
    }
    let s = trivial_sphere(&parse("S3"), 2);
    t.eq(
        equivariant_homology(&s, TheoryTag::OrientedSingular)
            .unwrap()
            .groups,
        free_groups(&[4, 0, 4]),
        || "trivial S^2 over S3, oriented".into(),
    );
}

/// `d_k / d_{k-1}` from gcds of `k × k` minors.
pub fn invariant_factors_by_minors(a: &IntMatrix) -> Vec<BigInt> {
    let (m, n) = (a.rows(), a.cols());
    let mut divisors = vec![BigInt::from(1)];
    for k in 1..=m.min(n) {
        let mut g = BigInt::zero();
        for rows in subsets(m, k) {
            for cols in subsets(n, k) {
                let minor = IntMatrix::from_rows(
                    &rows
                        .iter()
                        .map(|&i| cols.iter().map(|&j| a[(i, j)].clone()).collect())
                        .collect::<Vec<Vec<BigInt>>>(),
                );
                g = g.gcd(&minor.determinant());
            }
        }
        if g.is_zero() {
            break;
        }
        divisors.push(g);
    }
    divisors.windows(2).map(|w| &w[1] / &w[0]).collect()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

pub fn random_matrix<R: Rng>(rng: &mut R, max_dim: usize, bound: i64) -> IntMatrix {
    let m = rng.gen_range(1..=max_dim);
    let n = rng.gen_range(1..=max_dim);
    let sparse = rng.gen_bool(0.3);
    let rows: Vec<Vec<i64>> = (0..m)
        .map(|_| {
            (0..n)
                .map(|_| {
                    if sparse && rng.gen_bool(0.6) {
                        0
                    } else {
                        rng.gen_range(-bound..=bound)
                    }
                })
                .collect()
        })
        .collect();
    IntMatrix::from_rows(&rows)
}

fn suite_linalg(t: &mut Tally, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x11);
    for k in 0..RANDOM_MATRICES {
        let a = random_matrix(&mut rng, 6, 9);
        let s = smith_form(&a, Ring::Integers);
        t.eq(s.u.mul(&a).mul(&s.v), s.d.clone(), || {
            format!("matrix {k}: U·A·V = D")
        });
        t.check(s.u.determinant().abs() == BigInt::from(1), || {
            format!("matrix {k}: det U")
        });
        t.check(s.v.determinant().abs() == BigInt::from(1), || {
            format!("matrix {k}: det V")
        });
        let diag = s.diagonal();
        let off_diagonal_zero = (0..a.rows())
            .all(|i| (0..a.cols()).all(|j| i == j && i < s.rank || s.d[(i, j)].is_zero()));
        t.check(off_diagonal_zero, || format!("matrix {k}: D is diagonal"));
        t.check(diag.iter().all(Signed::is_positive), || {
            format!("matrix {k}: positive diagonal")
        });
        t.check(diag.windows(2).all(|w| w[1].is_multiple_of(&w[0])), || {
            format!("matrix {k}: divisibility chain")
        });
        if a.rows() <= 4 && a.cols() <= 4 {
            t.eq(diag, invariant_factors_by_minors(&a), || {
                format!("matrix {k}: gcd of minors")
            });
        }
    }
}

fn suite_degenerate(t: &mut Tally, _seed: u64) {
    for spec in TEST_GROUPS {
        let x = GCWComplex::empty(parse(spec));
        for theory in TheoryTag::EVERY {
            let r = equivariant_homology_upto(&x, theory, 3).unwrap();
            t.check(r.is_zero() && (0..5).all(|n| r.group(n).is_zero()), || {
                format!("empty complex over {spec}, {theory}")
            });
        }
    }
    t.check("sideways".parse::<TheoryTag>().is_err(), || {
        "unknown theory accepted".into()
    });
    for bad in [
        "",
        "{",
        "[]",
        r#"{"group":"C2"}"#,
        r#"{"group":"C2","cells":[{"id":"v","dim":-1,"stabilizer":[0]}]}"#,
        r#"{"group":"Z9","cells":[]}"#,
        r#"{"group":"C2","cells":[{"id":"v","dim":0,"stabilizer":[0,1]},{"id":"e","dim":1,"stabilizer":[0,1]}],"boundary":[{"from":"e","to":"w","a":0,"deg":1}]}"#,
    ] {
        t.check(GCWComplex::from_json(bad).is_err(), || {
            format!("accepted malformed input {bad:?}")
        });
    }
}
