//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit status if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toricnp::cyclotomic::CycNum;
use toricnp::family::{build_delta, denominators, ABParams, GRange};
use toricnp::field::{evaluate, make_field, torus_iter, trace_counts, FieldTower, LaurentPoly};
use toricnp::geometry::hodge::hodge_data;
use toricnp::geometry::{ConvexGraph, Polytope};
use toricnp::lattice::{diagonal_ordinary_test, smith_normal_form, IntMatrix};
use toricnp::lfunction::{compare, l_polynomial, newton_polygon, PowerSums, Verdict};
use toricnp::rational::{frac, gcd_u64, int, is_prime, lcm_u64};
use toricnp::triangulation::{build_triangulation, cell_volume_check, cone_volume, verify_triangulation, Mode};
use toricnp::{Extended, Rational};
use toricnp_cli::record::{run_one, RunRecord, Status};
use toricnp_cli::spec::{cell_seed, RunFlags};

/// Wall-clock limits per criterion.
const GAUSS_LIMIT: Duration = Duration::from_secs(1);
const SMALL_FAMILY_LIMIT: Duration = Duration::from_secs(10);
const CONGRUENCE_FAMILY_LIMIT: Duration = Duration::from_secs(300);
const GRID_LIMIT: Duration = Duration::from_secs(30);

/// Number of seeded samples per family in criteria 2 and 3.
const SAMPLES: u64 = 5;
const BASE_SEED: u64 = 0;
const MULTIPLICATIVITY_PAIRS: usize = 1000;
const PROPERTY_CASES: usize = 200;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn graph(points: &[(u64, Rational)]) -> ConvexGraph {
    ConvexGraph::from_vertices(points.to_vec()).unwrap()
}

fn params(a: u64, b: u64, d: u64, n: usize) -> ABParams {
    ABParams::new(a, b, d, n).unwrap()
}

fn grid() -> Vec<ABParams> {
    let mut out = Vec::new();
    for a in 1..=2 {
        for b in 1..=2 {
            for d in 2..=6 {
                for n in 1..=3 {
                    out.push(params(a, b, d, n));
                }
            }
        }
    }
    out
}

fn gauss() -> Outcome {
    let start = Instant::now();
    let base = make_field(5, 1).unwrap();
    let mut f = LaurentPoly::new(1);
    f.add_term(&base, vec![2], base.one());
    let poly = Polytope::convex_hull(&[vec![0], vec![2]]).unwrap();
    let hp = hodge_data(&poly).unwrap().polygon;
    let sums = PowerSums::compute(&f, &base, 2, u128::MAX).unwrap();
    let np = newton_polygon(&l_polynomial(&sums, 1, 2).unwrap(), 1);
    let expected = graph(&[(0, int(0)), (1, int(0)), (2, frac(1, 2))]);

    // Brute force: S_1 = Σ_{x ≠ 0} ζ^{x²} = g − 1 with g² = 5.
    let s1 = (1..5i64).fold(CycNum::zero(5), |acc, x| &acc + &CycNum::zeta_pow(5, x * x % 5));
    let g = &s1 + &CycNum::one(5);
    let oracle = s1 == sums.sums[0] && &g * &g == CycNum::from_rational(5, int(5));
    let elapsed = start.elapsed();
    outcome(
        np == expected && hp == expected && oracle && elapsed < GAUSS_LIMIT,
        format!("NP = {np}, HP = {hp}, brute-force S_1 and g^2 = 5: {oracle}, {elapsed:.2?} (limit {GAUSS_LIMIT:?})"),
    )
}

fn samples(q: ABParams, p: u64, g_range: GRange) -> Vec<RunRecord> {
    let flags = RunFlags { g_range, ..RunFlags::default() };
    (0..SAMPLES)
        .map(|i| run_one(q, p, cell_seed(BASE_SEED, i), Some(i as usize), u128::MAX, &flags, false).unwrap())
        .collect()
}

struct Tally {
    equal: usize,
    above: usize,
    violation: usize,
    degenerate: usize,
    witnesses: Vec<ConvexGraph>,
}

fn tally(records: &[RunRecord]) -> Tally {
    let mut t = Tally { equal: 0, above: 0, violation: 0, degenerate: 0, witnesses: Vec::new() };
    for r in records {
        if !r.clean || r.status != Status::Ok {
            t.degenerate += 1;
            continue;
        }
        match r.verdict {
            Some(Verdict::Equal) => {
                t.equal += 1;
                t.witnesses.push(r.np.clone().unwrap());
            }
            Some(Verdict::LiesAbove) => t.above += 1,
            Some(Verdict::Violation) => t.violation += 1,
            None => t.degenerate += 1,
        }
    }
    t
}

impl std::fmt::Display for Tally {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} Equal, {} LiesAbove, {} Violation, {} degenerate",
            self.equal, self.above, self.violation, self.degenerate
        )
    }
}

fn small_family(runs: &mut Vec<RunRecord>) -> Outcome {
    let start = Instant::now();
    let q = params(1, 1, 2, 1);
    let hp = graph(&[(0, int(0)), (1, int(0)), (4, int(3))]);
    let records = samples(q, 3, GRange::Strict);
    let elapsed = start.elapsed();
    let t = tally(&records);
    let hp_ok = records.iter().all(|r| r.hp == hp);
    let witnessed = t.witnesses.contains(&hp);
    runs.extend(records);
    outcome(
        hp_ok && witnessed && t.violation == 0 && elapsed < SMALL_FAMILY_LIMIT,
        format!("(1,1,2,1) p=3: {t}; HP = {hp}; {elapsed:.2?} (limit {SMALL_FAMILY_LIMIT:?})"),
    )
}

fn congruence_family(runs: &mut Vec<RunRecord>) -> Outcome {
    let start = Instant::now();
    let q = params(1, 1, 4, 1);
    let strict = samples(q, 3, GRange::Strict);
    let closed = samples(q, 3, GRange::Closed);
    let elapsed = start.elapsed();
    let degree_ok = strict.iter().chain(&closed).all(|r| r.degree == 8);
    let (ts, tc) = (tally(&strict), tally(&closed));
    let hp = &strict[0].hp;
    let witnessed = tc.witnesses.contains(hp);
    runs.extend(strict);
    runs.extend(closed);
    outcome(
        degree_ok && witnessed && ts.violation == 0 && tc.violation == 0 && elapsed < CONGRUENCE_FAMILY_LIMIT,
        format!(
            "(1,1,4,1) p=3, N=8: deg g <= 2: {tc}; deg g < 2: {ts}; {elapsed:.2?} (limit {CONGRUENCE_FAMILY_LIMIT:?})"
        ),
    )
}

fn triangulation_grid() -> Outcome {
    let start = Instant::now();
    let mut cases = 0;
    let mut failures = Vec::new();
    for q in grid().into_iter().filter(|q| q.s() >= 2) {
        cases += 1;
        let sub = build_triangulation(q, Mode::Strict).unwrap();
        let report = verify_triangulation(&sub).unwrap();
        let total = Rational::from_integer(BigInt::from(sub.cells.len() as u64 * q.cell_volume()));
        if !report.passed() || !cell_volume_check(&sub) || total != cone_volume(q).unwrap() {
            failures.push(q.to_string());
        }
    }
    let elapsed = start.elapsed();
    outcome(
        failures.is_empty() && elapsed < GRID_LIMIT,
        format!("{cases} families, failures: {failures:?}; {elapsed:.2?} (limit {GRID_LIMIT:?})"),
    )
}

fn denominator_formulas() -> Outcome {
    let mut bad = Vec::new();
    let cases = grid();
    for &q in &cases {
        let got = denominators(&build_delta(q).unwrap()).unwrap();
        let db = q.d * q.b;
        let want = (lcm_u64(lcm_u64(q.a, q.b), db / gcd_u64(q.a + q.b, db)), db / gcd_u64(q.a + q.b, q.d), q.a);
        if got != want {
            bad.push(format!("{q}: {got:?} vs {want:?}"));
        }
    }
    outcome(bad.is_empty(), format!("{} families, mismatches: {bad:?}", cases.len()))
}

fn diagonal_theory() -> Outcome {
    let ab = build_delta(params(1, 1, 2, 1)).unwrap();
    let m = IntMatrix::from_columns(&ab.delta_d);
    let diag = smith_normal_form(&m).diag;
    let snf_ok = diag == vec![BigInt::from(1), BigInt::from(2)];
    let primes: Vec<u64> = (2..200).filter(|&p| is_prime(p)).collect();
    let mismatched: Vec<u64> = primes
        .iter()
        .copied()
        .filter(|&p| diagonal_ordinary_test(&m, p).unwrap_or(false) != (p % 2 == 1))
        .collect();
    outcome(
        snf_ok && mismatched.is_empty(),
        format!("face {:?}: SNF {diag:?}; test true exactly for odd p among {} primes < 200, mismatches {mismatched:?}", ab.delta_d, primes.len()),
    )
}

fn valuations() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut notes = Vec::new();
    let mut ok = true;
    for p in [3u64, 5, 7, 11] {
        let x = &CycNum::one(p) + &CycNum::zeta_pow(p, 1).scale(&int(-1));
        let v = x.ord_p();
        ok &= v == Extended::Finite(frac(1, p as i64 - 1));
        let mut bad = 0;
        for _ in 0..MULTIPLICATIVITY_PAIRS {
            let mut draw = || {
                let cs = (0..p - 1).map(|_| int(rng.gen_range(-20..=20) * p.pow(rng.gen_range(0..3)) as i64)).collect();
                CycNum::from_coeffs(p, cs).unwrap()
            };
            let (a, b) = (draw(), draw());
            let want = match (a.ord_p(), b.ord_p()) {
                (Extended::Finite(x), Extended::Finite(y)) => Extended::Finite(x + y),
                _ => Extended::Infinite,
            };
            bad += usize::from((&a * &b).ord_p() != want);
        }
        ok &= bad == 0;
        notes.push(format!("p={p}: ord(1-ζ)={v}, {bad}/{MULTIPLICATIVITY_PAIRS} failures"));
    }
    outcome(ok, notes.join("; "))
}

fn ext_add(a: &Extended, b: &Extended) -> Extended {
    match (a, b) {
        (Extended::Finite(x), Extended::Finite(y)) => Extended::Finite(x + y),
        _ => Extended::Infinite,
    }
}

fn properties(runs: &[RunRecord]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut failures: Vec<String> = Vec::new();

    // Polytopes: weight homogeneity and subadditivity, D·w integrality, Σ H = m!·Vol.
    let mut polytopes = 0;
    while polytopes < PROPERTY_CASES {
        let m = rng.gen_range(2..=3usize);
        let mut pts = vec![vec![0i64; m]];
        for _ in 0..rng.gen_range(m + 1..=m + 4) {
            pts.push((0..m).map(|_| rng.gen_range(-3..=3)).collect());
        }
        let Ok(poly) = Polytope::convex_hull(&pts) else { continue };
        if !poly.is_full_dimensional() || !poly.contains_origin() {
            continue;
        }
        polytopes += 1;
        let dd = int(poly.denominator().unwrap() as i64);
        let hd = hodge_data(&poly).unwrap();
        if Rational::from_integer(hd.total()) != poly.normalized_volume() {
            failures.push(format!("sum H != m!Vol for {:?}", poly.vertices()));
        }
        for _ in 0..5 {
            let u: Vec<i64> = (0..m).map(|_| rng.gen_range(-6..=6)).collect();
            let v: Vec<i64> = (0..m).map(|_| rng.gen_range(-6..=6)).collect();
            let uv: Vec<i64> = u.iter().zip(&v).map(|(a, b)| a + b).collect();
            let u3: Vec<i64> = u.iter().map(|a| 3 * a).collect();
            let (wu, wv, wuv, w3) = (
                poly.weight(&u).unwrap(),
                poly.weight(&v).unwrap(),
                poly.weight(&uv).unwrap(),
                poly.weight(&u3).unwrap(),
            );
            if w3 != ext_add(&ext_add(&wu, &wu), &wu) {
                failures.push(format!("w(3u) != 3w(u) at {u:?}"));
            }
            if wuv > ext_add(&wu, &wv) {
                failures.push(format!("w(u+v) > w(u)+w(v) at {u:?}, {v:?}"));
            }
            if let Extended::Finite(w) = &wu {
                if !(w * &dd).is_integer() {
                    failures.push(format!("D·w(u) not integral at {u:?}"));
                }
            }
        }
    }

    // Smith normal form: unimodular transforms and the divisibility chain.
    for _ in 0..PROPERTY_CASES {
        let (r, c) = (rng.gen_range(1..=4usize), rng.gen_range(1..=4usize));
        let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-9..=9)).collect()).collect();
        let m = IntMatrix::from_rows(&rows);
        let s = smith_normal_form(&m);
        let unimodular = |x: &IntMatrix| {
            let d = x.determinant().unwrap_or_default();
            d == BigInt::from(1) || d == BigInt::from(-1)
        };
        let product = s.u.mul(&m).mul(&s.v);
        let diag_ok = (0..r).all(|i| {
            (0..c).all(|j| {
                let want = if i == j { s.diag[i].clone() } else { BigInt::default() };
                *product.get(i, j) == want
            })
        });
        let chain = s.diag.windows(2).all(|w| {
            if w[0] == BigInt::default() { w[1] == BigInt::default() } else { (&w[1] % &w[0]) == BigInt::default() }
        });
        if !unimodular(&s.u) || !unimodular(&s.v) || !diag_ok || !chain {
            failures.push(format!("SNF invariants fail for {rows:?}"));
        }
    }

    // Toric sums: counts independent of how the torus is partitioned.
    let base = make_field(3, 1).unwrap();
    let tower = FieldTower::new(base.clone(), 2).unwrap();
    for case in 0..20 {
        let mut f = LaurentPoly::new(2);
        for _ in 0..3 {
            let v = vec![rng.gen_range(-2..=2), rng.gen_range(-2..=2)];
            f.add_term(&base, v, base.random_nonzero(&mut rng));
        }
        let whole = trace_counts(&tower, &f, u128::MAX).unwrap();
        let it = torus_iter(&tower.ext, 2, u128::MAX).unwrap();
        let mut counts = vec![0u64; 3];
        for chunk in it.split(case % 7 + 2) {
            for x in chunk {
                counts[tower.ext.trace(&evaluate(&tower, &f, &x).unwrap()) as usize] += 1;
            }
        }
        if counts != whole {
            failures.push(format!("partition changes counts for case {case}"));
        }
    }

    // NP ≥ HP on every nondegenerate run of this suite.
    let mut nondegenerate = 0;
    for r in runs.iter().filter(|r| r.clean && r.status == Status::Ok) {
        nondegenerate += 1;
        let np = r.np.as_ref().unwrap();
        if compare(np, &r.hp).map(|v| v == Verdict::Violation).unwrap_or(true) {
            failures.push(format!("NP below HP for {} seed {}", r.family, r.seed));
        }
    }

    failures.truncate(5);
    outcome(
        failures.is_empty(),
        format!(
            "{PROPERTY_CASES} polytopes, {PROPERTY_CASES} matrices, 20 partitioned sums, {nondegenerate} nondegenerate runs; failures: {failures:?}"
        ),
    )
}

fn main() -> ExitCode {
    let mut runs = Vec::new();
    let results = [
        ("1 gauss-sum slopes", gauss()),
        ("2 small family witness", small_family(&mut runs)),
        ("3 congruence family witness", congruence_family(&mut runs)),
        ("4 triangulation grid", triangulation_grid()),
        ("5 denominator formulas", denominator_formulas()),
        ("6 diagonal theory", diagonal_theory()),
        ("7 valuations", valuations()),
        ("8 property suites", properties(&runs)),
    ];
    let mut all = true;
    for (name, o) in &results {
        println!("{} {name}: {}", if o.passed { "PASS" } else { "FAIL" }, o.detail);
        all &= o.passed;
    }
    if all { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
