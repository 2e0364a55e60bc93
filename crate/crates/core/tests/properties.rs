use std::collections::BTreeSet;

use bredonite::burnside::{burnside_induce, induce_matrix, BurnsideElement, BurnsideRing};
use bredonite::coeff::{compose_check, system_map, OrbitMorphism, TheoryTag};
use bredonite::complex::{disjoint_union, induce_complex, orbit_space, GCWComplex};
use bredonite::group::{enumerate_subgroups, FiniteGroup, Subgroup, SubgroupClassTable};
use bredonite::linalg::{chain_homology, smith_form, IntMatrix, Ring};
use bredonite::theory::{bredon_complex, equivariant_homology, mv_check};
use bredonite::verify::{random_complex, random_cover};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TEST_GROUPS: [&str; 8] = ["C1", "C2", "C3", "C4", "C2xC2", "S3", "D4", "Q8"];
const ORDER_12: [&str; 5] = ["C12", "C2xC6", "D6", "perm:[(1,2,3),(1,2)(3,4)]", "C3xC4"];

fn parse(spec: &str) -> FiniteGroup {
    FiniteGroup::parse(spec).unwrap()
}

fn matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=8, 1usize..=8)
        .prop_flat_map(|(m, n)| prop::collection::vec(prop::collection::vec(-9i64..=9, n), m))
        .prop_map(|rows| IntMatrix::from_rows(&rows))
}

fn det(a: &IntMatrix) -> BigInt {
    a.determinant()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn smith_contract(a in matrix()) {
        let s = smith_form(&a, Ring::Integers);
        prop_assert_eq!(s.u.mul(&a).mul(&s.v), s.d.clone());
        prop_assert!(det(&s.u).abs().is_one() && det(&s.v).abs().is_one());
        prop_assert_eq!(s.u.mul(&s.u_inv), IntMatrix::identity(a.rows()));
        prop_assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(a.cols()));
        let diag = s.diagonal();
        prop_assert_eq!(diag.len(), s.rank);
        prop_assert!(diag.iter().all(Signed::is_positive));
        prop_assert!(diag.windows(2).all(|w| w[1].is_multiple_of(&w[0])));
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                if i != j || i >= s.rank {
                    prop_assert!(s.d.row(i)[j].is_zero());
                }
            }
        }
    }

    #[test]
    fn burnside_ring_laws(
        g in prop::sample::select(&TEST_GROUPS[..]),
        seed in prop::collection::vec(-3i64..=3, 30),
    ) {
        let g = parse(g);
        let ring = BurnsideRing::of_group(&g);
        let n = ring.rank();
        let x = BurnsideElement::from_i64(&seed[..n]);
        let y = BurnsideElement::from_i64(&seed[10..10 + n]);
        let z = BurnsideElement::from_i64(&seed[20..20 + n]);
        let mul = |a: &BurnsideElement, b: &BurnsideElement| ring.mul(a, b).unwrap();
        prop_assert_eq!(mul(&x, &y), mul(&y, &x));
        prop_assert_eq!(mul(&mul(&x, &y), &z), mul(&x, &mul(&y, &z)));
        prop_assert_eq!(mul(&x, &(&y + &z)), &mul(&x, &y) + &mul(&x, &z));
        prop_assert_eq!(mul(&ring.unit(), &x), x.clone());
        let phi = |a: &BurnsideElement| ring.marks_of(a).unwrap();
        let pointwise: Vec<BigInt> = phi(&x).iter().zip(phi(&y)).map(|(a, b)| a * b).collect();
        prop_assert_eq!(phi(&mul(&x, &y)), pointwise);
        prop_assert_eq!(ring.from_marks(&phi(&x)).unwrap(), x.clone());
        prop_assert_eq!(phi(&x).iter().all(Zero::is_zero), x.is_zero());
    }

    #[test]
    fn induce_is_additive(
        g in prop::sample::select(&TEST_GROUPS[..]),
        pick in any::<prop::sample::Index>(),
        coords in prop::collection::vec(-4i64..=4, 20),
    ) {
        let g = parse(g);
        let pairs = subconjugations(&g);
        let (h, k, a) = pick.get(&pairs).clone();
        let (rh, rk) = (BurnsideRing::new(&g, &h), BurnsideRing::new(&g, &k));
        let x = BurnsideElement::from_i64(&coords[..rh.rank()]);
        let y = BurnsideElement::from_i64(&coords[10..10 + rh.rank()]);
        let ind = |v: &BurnsideElement| burnside_induce(&g, &rh, &rk, a, v).unwrap();
        prop_assert_eq!(ind(&(&x + &y)), &ind(&x) + &ind(&y));
    }

    #[test]
    fn random_complex_properties(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_complex(&mut rng);
        prop_assert!(x.validate().is_valid());
        let text = x.to_json().unwrap();
        let back = GCWComplex::from_json(&text).unwrap();
        prop_assert_eq!(&back, &x);
        prop_assert_eq!(back.to_json().unwrap(), text);
        prop_assert!(equivariant_homology(&x, TheoryTag::All).unwrap().is_zero());
        let twice = disjoint_union(&[x.clone(), x.clone()]).unwrap();
        for theory in [TheoryTag::OrientedSingular, TheoryTag::UnorientedSingular] {
            let one = equivariant_homology(&x, theory).unwrap().groups;
            let two = equivariant_homology(&twice, theory).unwrap().groups;
            let sum: Vec<_> = one.iter().map(|h| h.direct_sum(h)).collect();
            prop_assert_eq!(two, sum);
        }
    }

    #[test]
    fn random_covers_are_exact(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_complex(&mut rng);
        let (a, b) = random_cover(&mut rng, &x);
        for theory in TheoryTag::EVERY {
            let les = mv_check(&x, &a, &b, theory).unwrap();
            prop_assert!(les.exact);
            prop_assert_eq!(les.rank_alternating_sum, 0);
        }
    }

    #[test]
    fn gf2_homology_follows_universal_coefficients(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_complex(&mut rng);
        let chain = bredon_complex(&x, TheoryTag::OrientedSingular, 0).unwrap();
        let over_z = chain_homology(&chain).unwrap();
        let reduced = bredonite::linalg::ChainComplex::new(
            Ring::Gf2,
            chain.ranks().to_vec(),
            (1..chain.len()).map(|n| chain.boundary(n).reduce(Ring::Gf2)).collect(),
        )
        .unwrap();
        let over_gf2 = chain_homology(&reduced).unwrap();
        let even = |n: usize| {
            over_z.get(n).map_or(0, |h| h.torsion.iter().filter(|t| t.is_even()).count())
        };
        for n in 0..over_gf2.len() {
            let want = over_z[n].free_rank + even(n) + if n > 0 { even(n - 1) } else { 0 };
            prop_assert_eq!(over_gf2[n].free_rank, want, "degree {}", n);
        }
    }

    #[test]
    fn free_induction_quotient_recovers_complex(seed in any::<u64>(), g in prop::sample::select(&TEST_GROUPS[..])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let base = orbit_space(&random_complex(&mut rng), false).unwrap().into_inner();
        let g = parse(g);
        let induced = induce_complex(&g, &g.trivial(), &base).unwrap();
        prop_assert!(induced.is_free());
        prop_assert_eq!(induced.num_cells(), base.num_cells());
        let back = orbit_space(&induced, true).unwrap().into_inner();
        prop_assert_eq!(back, base);
    }

    #[test]
    fn permutation_group_lattices(seeds in prop::collection::vec(any::<u64>(), 1..=2)) {
        let gens: Vec<Vec<usize>> = seeds
            .iter()
            .map(|&s| {
                let mut p: Vec<usize> = (1..=4).collect();
                p.shuffle(&mut ChaCha8Rng::seed_from_u64(s));
                p
            })
            .collect();
        let spec = format!("perm:[{}]", gens.iter().map(|p| cycles(p)).collect::<Vec<_>>().join(","));
        let g = parse(&spec);
        let subs = enumerate_subgroups(&g);
        let set: BTreeSet<&Subgroup> = subs.iter().collect();
        prop_assert_eq!(set.len(), subs.len());
        let table = SubgroupClassTable::new(&g);
        for s in &subs {
            prop_assert_eq!(g.order() % s.order(), 0);
            for a in g.elements() {
                prop_assert!(set.contains(&g.conjugate_subgroup(s, a)));
            }
            let n = g.normalizer(s).unwrap();
            prop_assert!(s.is_subset_of(&n) && g.is_subgroup(&n));
            prop_assert!(table.class_of(s).is_some());
        }
        for i in 0..table.num_classes() {
            for j in 0..i {
                let (a, b) = (table.rep(i), table.rep(j));
                prop_assert!(!g.elements().any(|x| &g.conjugate_subgroup(a, x) == b));
            }
        }
        if g.order() <= 12 {
            prop_assert_eq!(subs.len(), closed_subset_count(&g));
        }
    }
}

/// Cycle notation on points 1..=n, fixed points omitted; `()` for the identity.
fn cycles(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start + 1 {
            continue;
        }
        let mut cycle = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            cycle.push((i + 1).to_string());
            i = p[i] - 1;
        }
        out.push_str(&format!("({})", cycle.join(",")));
    }
    if out.is_empty() {
        "()".into()
    } else {
        out
    }
}

fn closed_subset_count(g: &FiniteGroup) -> usize {
    let n = g.order();
    (0u32..1 << (n - 1))
        .filter(|mask| {
            let s: Vec<usize> = std::iter::once(0)
                .chain((1..n).filter(|i| mask >> (i - 1) & 1 == 1))
                .collect();
            s.iter()
                .all(|&a| s.iter().all(|&b| s.contains(&g.mul(a, b))))
        })
        .count()
}

/// Every `(H, K, a)` with `a⁻¹Ha ⊆ K`, one `a` per coset `aK`.
fn subconjugations(g: &FiniteGroup) -> Vec<(Subgroup, Subgroup, usize)> {
    let subs = enumerate_subgroups(g);
    let mut out = Vec::new();
    for h in &subs {
        for k in &subs {
            let reps: BTreeSet<usize> = g
                .elements()
                .filter(|&a| g.is_subconjugate(h, k, a))
                .map(|a| k.min_in_left_coset(g, a))
                .collect();
            out.extend(reps.into_iter().map(|a| (h.clone(), k.clone(), a)));
        }
    }
    out
}

#[test]
fn exhaustive_lattices_up_to_order_12() {
    for spec in TEST_GROUPS.iter().chain(&ORDER_12).chain(&[
        "C5", "D5", "C6", "C7", "C9", "C10", "C3xC3", "C2xC2xC2", "C2xC4", "C8", "C11",
    ]) {
        let g = parse(spec);
        assert_eq!(
            enumerate_subgroups(&g).len(),
            closed_subset_count(&g),
            "{spec}"
        );
    }
}

#[test]
fn n0_projection_is_natural() {
    for spec in TEST_GROUPS {
        let g = parse(spec);
        for (h, k, a) in subconjugations(&g) {
            let (rh, rk) = (BurnsideRing::new(&g, &h), BurnsideRing::new(&g, &k));
            for c in (0..rh.rank()).filter(|c| !rh.n0_basis().contains(c)) {
                let image = burnside_induce(&g, &rh, &rk, a, &rh.basis(c)).unwrap();
                assert!(
                    rk.n0_project(&image).unwrap().is_zero(),
                    "{spec}: {h}->{k} via {a}, class {c}"
                );
            }
        }
    }
}

#[test]
fn euler_map_is_augmentation_mod_2() {
    for spec in TEST_GROUPS {
        let g = parse(spec);
        for (h, k, a) in subconjugations(&g) {
            let f = OrbitMorphism::new(&g, h.clone(), k.clone(), a).unwrap();
            let euler = system_map(TheoryTag::Euler, 0, &g, &f).unwrap();
            let (rh, rk) = (BurnsideRing::new(&g, &h), BurnsideRing::new(&g, &k));
            let point = rh.rank() - 1;
            let image = burnside_induce(&g, &rh, &rk, a, &rh.basis(point)).unwrap();
            let aug = rk.augmentation(&image);
            assert_eq!(
                euler.row(0)[0],
                aug.mod_floor(&BigInt::from(2)),
                "{spec}: {h}->{k}"
            );
            assert_eq!(aug, BigInt::from(k.order() / h.order()));
        }
    }
}

#[test]
fn representative_independence_and_functoriality_up_to_order_12() {
    for spec in ORDER_12 {
        let g = parse(spec);
        let subs = enumerate_subgroups(&g);
        let table = SubgroupClassTable::new(&g);
        let reps: Vec<&Subgroup> = table.reps().collect();
        for &h in &reps {
            for k in &subs {
                let arrows: Vec<usize> = g
                    .elements()
                    .filter(|&a| g.is_subconjugate(h, k, a))
                    .collect();
                let Some(&first) = arrows.first() else {
                    continue;
                };
                let rh = BurnsideRing::new(&g, h);
                let rk = BurnsideRing::new(&g, k);
                let base = induce_matrix(&g, &rh, &rk, first).unwrap();
                for &y in k.elems() {
                    assert_eq!(induce_matrix(&g, &rh, &rk, g.mul(first, y)).unwrap(), base);
                }
                for l in subs.iter().filter(|l| l.order() >= k.order()) {
                    for b in g.elements().filter(|&b| g.is_subconjugate(k, l, b)).take(2) {
                        let f = OrbitMorphism::new(&g, h.clone(), k.clone(), first).unwrap();
                        let next = OrbitMorphism::new(&g, k.clone(), l.clone(), b).unwrap();
                        for theory in TheoryTag::EVERY {
                            assert!(
                                compose_check(theory, 0, &g, &f, &next).unwrap(),
                                "{spec} {theory}"
                            );
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn marks_table_is_invertible() {
    for spec in TEST_GROUPS.iter().chain(&ORDER_12) {
        let g = parse(spec);
        let ring = BurnsideRing::of_group(&g);
        let n = ring.rank();
        let m = IntMatrix::from_rows(
            &(0..n)
                .map(|k| (0..n).map(|l| ring.table().get(k, l)).collect())
                .collect::<Vec<Vec<i64>>>(),
        );
        assert!(!m.determinant().is_zero(), "{spec}");
    }
}
