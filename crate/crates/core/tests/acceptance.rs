//! Acceptance criteria 1-8. Runs without the libtest harness so the
//! per-criterion lines are always printed.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use bredonite::burnside::BurnsideRing;
use bredonite::coeff::{system_value, TheoryTag};
use bredonite::complex::{
    free_circle, induce_complex, orbit, reflection_circle, subdivided_reflection_circle,
    trivial_sphere, Cell, GCWComplex,
};
use bredonite::group::{enumerate_subgroups, FiniteGroup, Subgroup};
use bredonite::linalg::{smith_form, HomologyGroup, IntMatrix, Ring};
use bredonite::theory::{
    equivariant_homology, equivariant_homology_upto, free_borel_compare, induction_compare,
    mv_check,
};
use bredonite::verify::{random_complex, random_cover, run_suite, seed_from_env};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GROUPS: [&str; 8] = ["C1", "C2", "C3", "C4", "C2xC2", "S3", "D4", "Q8"];
const COEFF_DEGREES: i64 = 6;

const LIMIT_COEFFICIENTS: Duration = Duration::from_secs(5);
const LIMIT_BURNSIDE: Duration = Duration::from_secs(10);
const LIMIT_MV: Duration = Duration::from_secs(30);
const LIMIT_LINALG: Duration = Duration::from_secs(10);

const MV_RANDOM_COVERS: usize = 20;
const MV_MAX_CELLS: usize = 8;
const MV_MAX_ORDER: usize = 8;
const LINALG_MATRICES: usize = 200;
const LINALG_MINOR_DIM: usize = 4;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<Duration, String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:?}, limit {limit:?}"))?;
    Ok(t)
}

fn parse(spec: &str) -> FiniteGroup {
    FiniteGroup::parse(spec).unwrap()
}

fn free(ranks: &[usize]) -> Vec<HomologyGroup> {
    ranks.iter().map(|&r| HomologyGroup::free(r)).collect()
}

// ---- subgroup oracles by subset closure ----

fn closed_subsets(g: &FiniteGroup) -> Vec<BTreeSet<usize>> {
    let n = g.order();
    (0u32..1 << (n - 1))
        .map(|mask| {
            std::iter::once(0)
                .chain((1..n).filter(|i| mask >> (i - 1) & 1 == 1))
                .collect::<BTreeSet<usize>>()
        })
        .filter(|s| {
            s.iter()
                .all(|&a| s.iter().all(|&b| s.contains(&g.mul(a, b))))
        })
        .collect()
}

fn conjugate(g: &FiniteGroup, s: &BTreeSet<usize>, a: usize) -> BTreeSet<usize> {
    s.iter().map(|&x| g.mul(g.mul(g.inv(a), x), a)).collect()
}

/// Class representatives of subgroups of `g`.
fn class_reps(g: &FiniteGroup) -> Vec<BTreeSet<usize>> {
    let mut seen = BTreeSet::new();
    let mut reps = Vec::new();
    for s in closed_subsets(g) {
        if seen.insert(s.clone()) {
            for a in 0..g.order() {
                seen.insert(conjugate(g, &s, a));
            }
            reps.push(s);
        }
    }
    reps
}

fn odd_weyl_count(g: &FiniteGroup) -> usize {
    class_reps(g)
        .iter()
        .filter(|s| {
            let normalizer = (0..g.order())
                .filter(|&a| conjugate(g, s, a) == **s)
                .count();
            (normalizer / s.len()).is_odd()
        })
        .count()
}

/// Classes of subgroups with no index-2 subgroup, i.e. no nontrivial map
/// onto Z/2.
fn no_z2_quotient_count(g: &FiniteGroup) -> usize {
    let all = closed_subsets(g);
    class_reps(g)
        .iter()
        .filter(|l| !all.iter().any(|m| m.is_subset(l) && 2 * m.len() == l.len()))
        .count()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for spec in GROUPS {
        let g = parse(spec);
        for h in enumerate_subgroups(&g) {
            let local = g.restrict(&h);
            let classes = class_reps(&local).len();
            let odd = odd_weyl_count(&local);
            ensure(odd == no_z2_quotient_count(&local), || {
                format!("{spec}/{h}: the two V oracles disagree")
            })?;
            for q in 0..COEFF_DEGREES {
                for theory in TheoryTag::EVERY {
                    let v = system_value(theory, q, &g, &h).map_err(|e| e.to_string())?;
                    let (ring, rank) = match (theory, q) {
                        (TheoryTag::All, _) => (Ring::Gf2, 0),
                        (TheoryTag::Euler, _) => (Ring::Gf2, 1),
                        (TheoryTag::OrientedSingular, 0) => (Ring::Integers, classes),
                        (TheoryTag::OrientedSingular, _) => (Ring::Integers, 0),
                        (TheoryTag::UnorientedSingular, 0) => (Ring::Gf2, odd),
                        (TheoryTag::UnorientedSingular, _) => (Ring::Gf2, 0),
                    };
                    ensure(v.ring == ring && v.rank == rank, || {
                        format!(
                            "{theory} M_{q}({spec}/{h}) = {v}, expected rank {rank} over {ring:?}"
                        )
                    })?;
                    checked += 1;
                }
            }
        }
    }
    for (spec, a, v) in [("S3", 4, 2), ("C2xC2", 5, 1), ("C2", 2, 1), ("C3", 2, 2)] {
        let g = parse(spec);
        let rank = |t| system_value(t, 0, &g, &g.whole()).unwrap().rank;
        ensure(rank(TheoryTag::OrientedSingular) == a, || {
            format!("rank A({spec})")
        })?;
        ensure(rank(TheoryTag::UnorientedSingular) == v, || {
            format!("dim V({spec})")
        })?;
    }
    let report = run_suite("coefficients", 0).unwrap();
    ensure(report.passed(), || report.to_string())?;
    let t = within(LIMIT_COEFFICIENTS, start)?;
    Ok(format!("{checked} values, {t:.2?}"))
}

// ---- marks by brute force over cosets ----

fn brute_marks(g: &FiniteGroup, k: &Subgroup, l: &Subgroup) -> usize {
    let cosets: BTreeSet<BTreeSet<usize>> = (0..g.order())
        .map(|x| k.elems().iter().map(|&y| g.mul(x, y)).collect())
        .collect();
    cosets
        .iter()
        .filter(|c| {
            l.elems().iter().all(|&y| {
                let moved: BTreeSet<usize> = c.iter().map(|&x| g.mul(y, x)).collect();
                moved == **c
            })
        })
        .count()
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    for spec in GROUPS {
        let g = parse(spec);
        let ring = BurnsideRing::of_group(&g);
        let reps: Vec<Subgroup> = ring.classes().reps().cloned().collect();
        let marks: Vec<Vec<BigInt>> = reps
            .iter()
            .map(|k| {
                reps.iter()
                    .map(|l| BigInt::from(brute_marks(&g, k, l)))
                    .collect()
            })
            .collect();
        for (i, row) in marks.iter().enumerate() {
            ensure(ring.marks_of(&ring.basis(i)).unwrap() == *row, || {
                format!("{spec}: marks of {}", ring.label(i))
            })?;
            for (j, other) in marks.iter().enumerate() {
                let product = ring.mul(&ring.basis(i), &ring.basis(j)).unwrap();
                let want: Vec<BigInt> = row.iter().zip(other).map(|(a, b)| a * b).collect();
                ensure(ring.marks_of(&product).unwrap() == want, || {
                    format!("{spec}: marks of {} · {}", ring.label(i), ring.label(j))
                })?;
            }
        }
    }
    let report = run_suite("burnside", 0).unwrap();
    ensure(report.passed(), || report.to_string())?;
    let t = within(LIMIT_BURNSIDE, start)?;
    Ok(format!("{} checks, {t:.2?}", report.checks))
}

fn fixture(name: &str) -> GCWComplex {
    let path = format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    GCWComplex::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap()
}

/// Homology of the orbit circle: one vertex, one edge, with the edge's
/// boundary the sum of its attaching degrees.
fn quotient_circle_oracle(x: &GCWComplex, theory: TheoryTag) -> Vec<HomologyGroup> {
    assert_eq!(x.cells_in_dim(0).len(), 1);
    assert_eq!(x.cells_in_dim(1).len(), 1);
    let d: i64 = x.records().iter().map(|r| r.deg).sum();
    let d = match theory.ring() {
        Ring::Integers => d.abs(),
        Ring::Gf2 => d.rem_euclid(2),
    };
    match d {
        0 => free(&[1, 1]),
        1 => free(&[0, 0]),
        n => vec![
            HomologyGroup {
                free_rank: 0,
                torsion: vec![BigInt::from(n)],
            },
            HomologyGroup::free(0),
        ],
    }
}

fn criterion_3() -> Outcome {
    for name in ["antipodal_circle.json", "free_c4_circle.json"] {
        let x = fixture(name);
        ensure(x.is_free(), || format!("{name} is not free"))?;
        for theory in [TheoryTag::OrientedSingular, TheoryTag::UnorientedSingular] {
            let got = equivariant_homology(&x, theory)
                .map_err(|e| e.to_string())?
                .groups;
            let oracle = quotient_circle_oracle(&x, theory);
            ensure(got == oracle && oracle == free(&[1, 1]), || {
                format!("{name} {theory}: {got:?} vs quotient {oracle:?}")
            })?;
            let c = free_borel_compare(&x, theory).map_err(|e| e.to_string())?;
            ensure(c.equal, || format!("{name} {theory}: free_borel_compare"))?;
        }
    }
    Ok("antipodal C2 and free C4 circles: (Z,Z) and (Z/2,Z/2)".into())
}

/// Re-index a complex over `G` with stabilizers in `H` as one over `H`.
fn over(g: &FiniteGroup, h: &Subgroup, cells: &[(&str, &Subgroup)]) -> GCWComplex {
    let local = g.restrict(h);
    let cells = cells
        .iter()
        .map(|(id, s)| {
            let elems = s
                .elems()
                .iter()
                .map(|x| h.elems().binary_search(x).unwrap())
                .collect();
            Cell::new(*id, 0, Subgroup::from_elems(elems))
        })
        .collect();
    GCWComplex::new(local, cells, &[]).unwrap()
}

fn criterion_4() -> Outcome {
    let mut triples: Vec<(String, FiniteGroup, Subgroup, GCWComplex)> = Vec::new();
    let c2 = parse("C2");
    triples.push((
        "{e}≤C2 trivial circle".into(),
        c2.clone(),
        c2.trivial(),
        free_circle(1).unwrap(),
    ));
    let s3 = parse("S3");
    let t = s3.generate(&[1]);
    for k in [s3.trivial(), t.clone()] {
        triples.push((
            format!("C2≤S3 orbit C2/{k}"),
            s3.clone(),
            t.clone(),
            over(&s3, &t, &[("v", &k)]),
        ));
    }
    let d4 = parse("D4");
    let order2: Vec<Subgroup> = enumerate_subgroups(&d4)
        .into_iter()
        .filter(|s| s.order() == 2)
        .collect();
    for r in &order2 {
        let x = over(&d4, r, &[("u", r), ("w", &d4.trivial())]);
        triples.push((format!("{r}≤D4 disjoint orbits"), d4.clone(), r.clone(), x));
    }
    for (name, g, h, x) in &triples {
        for theory in TheoryTag::EVERY {
            let c = induction_compare(g, h, x, theory).map_err(|e| format!("{name}: {e}"))?;
            ensure(c.equal, || {
                format!("{name} {theory}: {:?} vs {:?}", c.left, c.right)
            })?;
        }
    }
    // induced orbit H/K is G/K: oriented H0 has rank #classes of K
    let induced = induce_complex(&s3, &t, &over(&s3, &t, &[("v", &s3.trivial())])).unwrap();
    ensure(induced == orbit(&s3, &s3.trivial()), || {
        "C2≤S3: induced orbit is S3/e".into()
    })?;
    let circle = free_circle(1).unwrap();
    for r in &order2 {
        let mid = d4.restrict(r);
        let step = induce_complex(&mid, &mid.trivial(), &circle).unwrap();
        let two = induce_complex(&d4, r, &step).unwrap();
        let one = induce_complex(&d4, &d4.trivial(), &circle).unwrap();
        ensure(two == one, || format!("{{e}}≤{r}≤D4: composite induction"))?;
        for theory in TheoryTag::EVERY {
            let a = equivariant_homology(&circle, theory).unwrap().groups;
            ensure(
                equivariant_homology(&two, theory).unwrap().groups == a,
                || format!("{{e}}≤{r}≤D4 {theory}"),
            )?;
        }
    }
    Ok(format!(
        "{} triples, {} composites",
        triples.len(),
        order2.len()
    ))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let strs = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let sphere = trivial_sphere(&parse("C2"), 1);
    let arcs = subdivided_reflection_circle();
    let mut covers = vec![
        (
            "hemispheres".to_string(),
            sphere,
            strs(&["e0+", "e0-", "e1+"]),
            strs(&["e0+", "e0-", "e1-"]),
        ),
        (
            "reflection arcs".to_string(),
            arcs,
            strs(&["p", "r", "a"]),
            strs(&["q", "r", "b"]),
        ),
    ];
    // hand MV on the hemispheres: the intersection is two fixed points,
    // A(C2)² = Z⁴, and (x, y) ↦ (x + y, x + y) into the two contractible
    // hemispheres has rank 2, so H1(X) = Z² and H0(X) = Z⁴/Z² = Z².
    let les = mv_check(
        &covers[0].1,
        &covers[0].2,
        &covers[0].3,
        TheoryTag::OrientedSingular,
    )
    .unwrap();
    let h = equivariant_homology(&covers[0].1, TheoryTag::OrientedSingular)
        .unwrap()
        .groups;
    ensure(h == free(&[2, 2]) && les.rank_alternating_sum == 0, || {
        format!("hemispheres: {h:?}")
    })?;

    let seed = seed_from_env().map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..MV_RANDOM_COVERS {
        let x = random_complex(&mut rng);
        ensure(
            x.num_cells() <= MV_MAX_CELLS && x.group().order() <= MV_MAX_ORDER,
            || format!("random complex {k} out of bounds"),
        )?;
        let (a, b) = random_cover(&mut rng, &x);
        covers.push((format!("random {k}"), x, a, b));
    }
    for (name, x, a, b) in &covers {
        for theory in TheoryTag::EVERY {
            let les = mv_check(x, a, b, theory).map_err(|e| format!("{name} {theory}: {e}"))?;
            ensure(les.exact && les.maps_well_defined, || {
                format!("{name} {theory}: not exact")
            })?;
        }
    }
    let t = within(LIMIT_MV, start)?;
    Ok(format!("{} covers, seed {seed}, {t:.2?}", covers.len()))
}

fn criterion_6() -> Outcome {
    // MV on the arcs X1 = {p,r,a}, X2 = {q,r,b}, X1 ∩ X2 = {r} = C2/e.
    // Each arc: A(C2) ⊕ A(e) in degree 0, one free edge with
    // d(a) = [C2/e]_r - [C2/e]_p, injective, so H(arc) = (Z², 0).
    // The intersection gives Z in degree 0 mapping to ([C2/e], -[C2/e]),
    // a primitive vector, hence H0(X) = Z^(2+2-1) and H1(X) = 0.
    let arc = |ids: &[&str]| subdivided_reflection_circle().subcomplex(ids).unwrap();
    let oriented = |x: &GCWComplex| {
        equivariant_homology(x, TheoryTag::OrientedSingular)
            .unwrap()
            .groups
    };
    ensure(oriented(&arc(&["p", "r", "a"])) == free(&[2, 0]), || {
        "arc homology".into()
    })?;
    ensure(oriented(&arc(&["r"])) == free(&[1]), || {
        "intersection homology".into()
    })?;
    let oracle = free(&[2 + 2 - 1, 0]);
    let got = oriented(&reflection_circle());
    ensure(got == oracle, || {
        format!("reflection_circle: {got:?}, oracle {oracle:?}")
    })?;
    ensure(oriented(&subdivided_reflection_circle()) == oracle, || {
        "subdivision".into()
    })?;
    Ok("H0 = Z^3, H1 = 0".into())
}

fn det(m: &[Vec<BigInt>]) -> BigInt {
    if m.is_empty() {
        return BigInt::one();
    }
    (0..m.len())
        .map(|j| {
            let minor: Vec<Vec<BigInt>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|(c, _)| *c != j)
                        .map(|(_, x)| x.clone())
                        .collect()
                })
                .collect();
            let term = &m[0][j] * det(&minor);
            if j % 2 == 0 {
                term
            } else {
                -term
            }
        })
        .sum()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    (k - 1..n)
        .flat_map(|last| {
            combinations(last, k - 1).into_iter().map(move |mut c| {
                c.push(last);
                c
            })
        })
        .collect()
}

fn minors_oracle(rows: &[Vec<BigInt>]) -> Vec<BigInt> {
    let (m, n) = (rows.len(), rows[0].len());
    let mut prev = BigInt::one();
    let mut out = Vec::new();
    for k in 1..=m.min(n) {
        let mut g = BigInt::zero();
        for r in combinations(m, k) {
            for c in combinations(n, k) {
                let sub: Vec<Vec<BigInt>> = r
                    .iter()
                    .map(|&i| c.iter().map(|&j| rows[i][j].clone()).collect())
                    .collect();
                g = g.gcd(&det(&sub));
            }
        }
        if g.is_zero() {
            break;
        }
        out.push(&g / &prev);
        prev = g;
    }
    out
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let seed = seed_from_env().map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(7));
    let mut compared = 0;
    for k in 0..LINALG_MATRICES {
        let (m, n) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        let rows: Vec<Vec<BigInt>> = (0..m)
            .map(|_| {
                (0..n)
                    .map(|_| BigInt::from(rng.gen_range(-9i64..=9)))
                    .collect()
            })
            .collect();
        let a = IntMatrix::from_rows(&rows);
        let s = smith_form(&a, Ring::Integers);
        ensure(s.u.mul(&a).mul(&s.v) == s.d, || {
            format!("matrix {k}: UAV != D")
        })?;
        ensure(
            det(&s.u.to_rows()).abs().is_one() && det(&s.v.to_rows()).abs().is_one(),
            || format!("matrix {k}: not unimodular"),
        )?;
        let diag = s.diagonal();
        for i in 0..m {
            for j in 0..n {
                let on = i == j && i < diag.len();
                ensure(on || s.d.row(i)[j].is_zero(), || {
                    format!("matrix {k}: not diagonal")
                })?;
            }
        }
        ensure(diag.iter().all(|x| x.is_positive()), || {
            format!("matrix {k}: sign")
        })?;
        ensure(diag.windows(2).all(|w| (&w[1] % &w[0]).is_zero()), || {
            format!("matrix {k}: divisibility")
        })?;
        if m <= LINALG_MINOR_DIM && n <= LINALG_MINOR_DIM {
            let oracle = minors_oracle(&rows);
            ensure(diag == oracle, || {
                format!("matrix {k}: {diag:?} vs minors {oracle:?}")
            })?;
            compared += 1;
        }
    }
    let t = within(LIMIT_LINALG, start)?;
    Ok(format!(
        "{LINALG_MATRICES} matrices, {compared} against minors, {t:.2?}"
    ))
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_bredonite"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn criterion_8() -> Outcome {
    for spec in GROUPS {
        let x = GCWComplex::empty(parse(spec));
        for theory in TheoryTag::EVERY {
            let r = equivariant_homology_upto(&x, theory, 4).map_err(|e| e.to_string())?;
            ensure((0..8).all(|n| r.group(n).is_zero()), || {
                format!("empty over {spec}, {theory}")
            })?;
        }
    }
    let empty = format!("{}/fixtures/empty_s3.json", env!("CARGO_MANIFEST_DIR"));
    let dir = std::env::temp_dir().join(format!("bredonite-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let malformed = dir.join("malformed.json");
    std::fs::write(&malformed, "{\"group\": \"C2\", \"cells\": [").unwrap();
    let invalid = dir.join("invalid.json");
    std::fs::write(
        &invalid,
        r#"{"group":"C2","cells":[{"id":"v","dim":0,"stabilizer":[0]},{"id":"e","dim":1,"stabilizer":[0,1]}],"boundary":[{"from":"e","to":"v","a":0,"deg":1}]}"#,
    )
    .unwrap();
    let (malformed, invalid) = (malformed.to_str().unwrap(), invalid.to_str().unwrap());
    let cases: [(&[&str], i32); 7] = [
        (&["homology", "oriented", &empty], 0),
        (&["homology", "sideways", &empty], 2),
        (&["coeff", "sideways", "C2"], 2),
        (&["homology", "oriented", malformed], 1),
        (&["homology", "all", invalid], 1),
        (&["homology", "oriented", "/nonexistent/complex.json"], 1),
        (&["homology", "oriented", &empty, "--bogus"], 2),
    ];
    for (args, code) in cases {
        let (got, stdout, stderr) = cli(args);
        ensure(got == code, || {
            format!("{args:?}: exit {got}, expected {code}\n{stderr}")
        })?;
        if code == 0 {
            ensure(stdout.contains("vanish"), || format!("{args:?}: {stdout}"))?;
        } else {
            ensure(
                stderr.contains("error") && !stderr.contains("panicked"),
                || format!("{args:?}: {stderr}"),
            )?;
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok("empty complexes vanish; errors exit 1/2 without panics".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("coefficient golden table", criterion_1),
        ("Burnside ring properties", criterion_2),
        ("free Borel comparison", criterion_3),
        ("induction structure", criterion_4),
        ("Mayer-Vietoris exactness", criterion_5),
        ("non-free reflection circle", criterion_6),
        ("linear algebra contracts", criterion_7),
        ("degenerate inputs", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name} ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
