//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use windmill::fixtures::{bundled, counting_fixtures, random_fixture, random_geometric, random_windable_instance, Fixture};
use windmill::parallel::par_map;
use windmill_core::counter::{
    count_b_edge_cover, count_b_matching, estimate_z0_with, CountJob, CountParams, ExactMarginals, Problem,
};
use windmill_core::holant::{brute_strata, disagreement, weight, Assignment, HolantInstance};
use windmill_core::mcmc::{transition_matrix, PathBuilder};
use windmill_core::rational::{double_factorial, frac, int, to_f64, to_fraction_string, Rational};
use windmill_core::symfunc::{h_vector, make_named, NamedFunction, SymmetricFunction};
use windmill_core::windability::{
    build_a, closed_form_edge_cover, closed_form_even_part, closed_form_odd_part, is_2_decomposable, is_windable,
    parity_relation_holds, parity_split, solve_triangular, verify_com_identity, Verdict, Witness,
};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn zero() -> Rational {
    int(0)
}

fn named(kind: NamedFunction, arity: usize) -> SymmetricFunction {
    make_named(&kind, arity).expect("valid arity")
}

fn verdict(f: &SymmetricFunction) -> Verdict {
    is_windable(f).expect("positive arity").verdict
}

/// Pair-and-singleton partitions of `m` balls (the first `red` red), by
/// number of mixed pairs.
fn pairing_counts(m: usize, red: usize) -> Vec<u64> {
    fn rec(rest: &mut Vec<usize>, red: usize, singleton_used: bool, mixed: usize, out: &mut [u64]) {
        let Some(first) = rest.pop() else {
            out[mixed] += 1;
            return;
        };
        if !singleton_used && rest.len().is_multiple_of(2) {
            rec(rest, red, true, mixed, out);
        }
        for k in 0..rest.len() {
            let partner = rest.remove(k);
            rec(rest, red, singleton_used, mixed + usize::from((first < red) != (partner < red)), out);
            rest.insert(k, partner);
        }
        rest.push(first);
    }
    let mut out = vec![0u64; m / 2 + 1];
    let mut balls: Vec<usize> = (0..m).collect();
    rec(&mut balls, red, m.is_multiple_of(2), 0, &mut out);
    out
}

fn criterion_1() -> Check {
    for m in 1..=10 {
        let a = build_a(m).map_err(|e| e.to_string())?;
        for i in 0..=m / 2 {
            let row: Vec<BigInt> = pairing_counts(m, i).into_iter().map(BigInt::from).collect();
            ensure(a.rows()[i] == row, || format!("m={m} row {i}: {:?} vs brute force {row:?}", a.rows()[i]))?;
        }
    }
    for m in 1..=14 {
        let a = build_a(m).map_err(|e| e.to_string())?;
        let expected = double_factorial(2 * ((m as i64 - 1) / 2) + 1);
        for (i, row) in a.rows().iter().enumerate() {
            ensure(row.iter().sum::<BigInt>() == expected, || format!("m={m} row {i} does not sum to {expected}"))?;
        }
    }
    Ok("brute force agrees for m <= 10, row sums hold for m <= 14".into())
}

fn solve_for(g: &SymmetricFunction) -> Vec<Rational> {
    let a = build_a(g.arity()).expect("m >= 1");
    solve_triangular(&a, &h_vector(g).expect("palindromic")).expect("square system")
}

fn criterion_2() -> Check {
    let cases: [(usize, usize, Vec<Rational>); 6] = [
        (5, 8, vec![zero(), zero(), zero(), frac(1, 60), frac(1, 24)]),
        (6, 9, vec![zero(), zero(), zero(), frac(1, 360), frac(1, 360)]),
        (6, 10, vec![zero(), zero(), zero(), zero(), frac(1, 360), frac(1, 120)]),
        (7, 10, vec![zero(), zero(), zero(), frac(1, 630), frac(1, 360), frac(1, 2520)]),
        (7, 11, vec![zero(), zero(), zero(), zero(), frac(1, 2520), frac(1, 2520)]),
        (7, 12, vec![zero(), zero(), zero(), zero(), zero(), frac(1, 2520), frac(1, 720)]),
    ];
    for (k, m, expected) in cases {
        let x = solve_for(&named(NamedFunction::AtMost(k), m));
        ensure(x == expected, || format!("AtMost({k}) m={m}: got {x:?}"))?;
    }
    let g = named(NamedFunction::AtLeast(3), 11);
    let x = solve_for(&g);
    let expected = vec![zero(), zero(), zero(), frac(1, 5040), frac(1, 5040), frac(-1, 10080)];
    ensure(x == expected, || format!("AtLeast(3) m=11: got {x:?}"))?;
    ensure(verdict(&g) == Verdict::NotWindable, || "AtLeast(3) at arity 11 reported windable".into())?;
    Ok("7 vectors match exactly, AtLeast(3)_11 not windable".into())
}

fn criterion_3() -> Check {
    let mut checked = 0;
    let mut expect = |f: SymmetricFunction, want: Verdict| -> Result<(), String> {
        checked += 1;
        let got = verdict(&f);
        ensure(got == want, || format!("{f}: expected {want:?}, got {got:?}"))
    };
    for b in 0..=7 {
        for d in 1..=14 {
            expect(named(NamedFunction::AtMost(b), d), Verdict::Windable)?;
        }
    }
    for d in 11..=16 {
        expect(named(NamedFunction::AtMost(8), d), Verdict::NotWindable)?;
        expect(named(NamedFunction::AtLeast(3), d), Verdict::NotWindable)?;
    }
    for b in 0..=2 {
        for d in 1..=14 {
            expect(named(NamedFunction::AtLeast(b), d), Verdict::Windable)?;
        }
    }
    for w in [int(0), int(1), frac(7, 2)] {
        expect(named(NamedFunction::EdgeGadget(w), 2), Verdict::Windable)?;
    }
    Ok(format!("{checked} verdicts as expected"))
}

fn mu_function(mu: &Rational, d: usize) -> SymmetricFunction {
    let mut values = vec![int(1); d + 1];
    values[0] = mu.clone();
    SymmetricFunction::new(values).expect("nonnegative")
}

fn criterion_4() -> Check {
    let mut cases = Vec::new();
    for d in 2..=3 {
        for mu in [int(0), int(1), int(10)] {
            cases.push((d, mu, Verdict::Windable));
        }
    }
    for d in 4..=8 {
        for mu in [int(0), int(1), int(3)] {
            cases.push((d, mu, Verdict::Windable));
        }
        for mu in [frac(31, 10), int(4)] {
            cases.push((d, mu, Verdict::NotWindable));
        }
    }
    let total = cases.len();
    let wrong: Vec<String> = cases
        .into_iter()
        .filter_map(|(d, mu, want)| {
            let report = is_windable(&mu_function(&mu, d)).expect("positive arity");
            (report.verdict != want).then(|| {
                format!(
                    "d={d} mu={} expected {want:?}, got {:?} (counterexample pinning {:?})",
                    to_fraction_string(&mu),
                    report.verdict,
                    report.counterexample
                )
            })
        })
        .collect();
    ensure(wrong.is_empty(), || format!("{} of {total} wrong: {}", wrong.len(), wrong.join("; ")))?;
    Ok(format!("{total} verdicts as expected"))
}

fn indicator(m: usize, from: usize) -> Vec<Rational> {
    (0..=m / 2).map(|i| if i >= from { int(1) } else { zero() }).collect()
}

fn criterion_5() -> Check {
    for m in (2..=40).step_by(2) {
        let a = build_a(m).map_err(|e| e.to_string())?;
        for b in 1..=2 {
            let h = indicator(m, b);
            let x = solve_triangular(&a, &h).map_err(|e| e.to_string())?;
            ensure(closed_form_edge_cover(b, m).map_err(|e| e.to_string())? == x, || format!("b={b} m={m}"))?;
        }
        let (even, _) = parity_split(&indicator(m, 1), m).map_err(|e| e.to_string())?;
        let (_, odd) = parity_split(&indicator(m, 2), m).map_err(|e| e.to_string())?;
        let xe = solve_triangular(&a, &even).map_err(|e| e.to_string())?;
        let xo = solve_triangular(&a, &odd).map_err(|e| e.to_string())?;
        ensure(closed_form_even_part(m).map_err(|e| e.to_string())? == xe, || format!("even part m={m}"))?;
        ensure(closed_form_odd_part(m).map_err(|e| e.to_string())? == xo, || format!("odd part m={m}"))?;
    }
    let mut identities = 0;
    for n in 2..=30 {
        for m in 1..n {
            ensure(verify_com_identity(m, n).map_err(|e| e.to_string())?, || format!("identity fails at m={m} n={n}"))?;
            identities += 1;
        }
    }
    Ok(format!("closed forms match for even m <= 40, {identities} identities hold"))
}

fn criterion_6() -> Check {
    for n in 1..=6 {
        ensure(parity_relation_holds(n).map_err(|e| e.to_string())?, || format!("relation fails at m={}", 2 * n))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut positive = 0;
    for case in 0..200 {
        let m = 2 * rng.random_range(1..=6);
        let values = (0..=m)
            .map(|_| if rng.random_range(0..4) == 0 { zero() } else { frac(rng.random_range(0..=6), rng.random_range(1..=4)) })
            .collect();
        let g = SymmetricFunction::new(values).expect("nonnegative");
        let h = h_vector(&g).map_err(|e| e.to_string())?;
        let (even, odd) = parity_split(&h, m).map_err(|e| e.to_string())?;
        let decomposable = |v: &[Rational]| is_2_decomposable(v, m).map(|d| d.is_some()).map_err(|e| e.to_string());
        let whole = decomposable(&h)?;
        let split = decomposable(&even)? && decomposable(&odd)?;
        ensure(whole == split, || format!("case {case}: m={m} G={g} whole={whole} split={split}"))?;
        positive += usize::from(whole);
    }
    Ok(format!("relation holds for m <= 12; 200 random H agree ({positive} decomposable)"))
}

fn bits(mask: u32, len: usize) -> Vec<bool> {
    (0..len).map(|i| mask >> i & 1 == 1).collect()
}

fn witness_axioms(f: &SymmetricFunction) -> Result<(), String> {
    let d = f.arity();
    let w = Witness::new(f).map_err(|e| format!("{f}: {e}"))?;
    let weight_of = |x: &[bool]| f.value(x.iter().filter(|&&b| b).count()).clone();
    for xm in 0..1u32 << d {
        for ym in 0..1u32 << d {
            let (x, y) = (bits(xm, d), bits(ym, d));
            let values = w.values(&x, &y).map_err(|e| e.to_string())?;
            let total = values.iter().fold(zero(), |acc, (_, v)| acc + v);
            ensure(total == weight_of(&x) * weight_of(&y), || format!("{f}: sum fails at x={x:?} y={y:?}"))?;
            for (m, v) in &values {
                let parts = m.pairs.iter().map(|&(a, b)| vec![a, b]).chain(m.singleton.map(|s| vec![s]));
                for part in parts {
                    let (mut x2, mut y2) = (x.clone(), y.clone());
                    for &i in &part {
                        x2[i] = !x2[i];
                        y2[i] = !y2[i];
                    }
                    let flipped = w.value(&x2, &y2, m).map_err(|e| e.to_string())?;
                    ensure(&flipped == v, || format!("{f}: flip {part:?} changes B at x={x:?} y={y:?}"))?;
                }
            }
        }
    }
    Ok(())
}

fn criterion_7() -> Check {
    let mut functions = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for d in 1..=6 {
        for k in 1..=3 {
            functions.push(named(NamedFunction::AtMost(k), d));
        }
        functions.push(named(NamedFunction::AtLeast(1), d));
        functions.push(named(NamedFunction::AtLeast(2), d));
        for _ in 0..3 {
            functions.push(random_geometric(&mut rng, d));
        }
    }
    for w in [int(0), int(1), frac(7, 2)] {
        functions.push(named(NamedFunction::EdgeGadget(w), 2));
    }
    let count = functions.len();
    par_map(functions, |f| witness_axioms(&f)).into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(format!("both axioms hold for {count} functions, all inputs"))
}

fn kernel_checks(inst: &HolantInstance) -> Result<usize, String> {
    let p = transition_matrix(inst).map_err(|e| e.to_string())?;
    let mu = p.stationary();
    ensure(p.is_stochastic(), || "rows do not sum to 1".into())?;
    ensure(p.is_stationary(&mu), || "mu P != mu".into())?;
    ensure(p.detailed_balance_violation(&mu).is_none(), || "detailed balance fails".into())?;
    let start = (0..p.len()).find(|&i| p.disagreements()[i] == 0).ok_or("no consistent state")?;
    let curve = p.tv_curve(start, 30);
    for (t, tv) in curve.iter().enumerate() {
        let bound = p.mixing_bound(start, t);
        ensure(to_f64(tv) <= bound, || format!("TV({t}) = {} exceeds {bound}", to_f64(tv)))?;
        ensure(t == 0 || tv <= &curve[t - 1], || format!("TV increases at t={t}"))?;
    }
    Ok(p.len())
}

fn flow_identity(inst: &HolantInstance) -> Result<usize, String> {
    let builder = PathBuilder::new(inst).map_err(|e| e.to_string())?;
    let n = inst.num_half_edges();
    let states: Vec<Assignment> = (0..1u64 << n)
        .map(|m| Assignment::from_mask(m, n))
        .filter(|a| weight(inst, a).map(|w| w > zero()).unwrap_or(false))
        .filter(|a| matches!(disagreement(inst, a), Ok(0) | Ok(2)))
        .collect();
    let mut pairs = 0;
    for sigma in states.iter().filter(|a| disagreement(inst, a) == Ok(0)) {
        for pi in &states {
            let total = builder.total_flow(sigma, pi).map_err(|e| e.to_string())?;
            let expected = builder.mu(sigma).map_err(|e| e.to_string())? * builder.mu(pi).map_err(|e| e.to_string())?;
            ensure(total == expected, || format!("flow {sigma} -> {pi}: {total} != {expected}"))?;
            pairs += 1;
        }
    }
    Ok(pairs)
}

fn criterion_8() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let kernels: Vec<HolantInstance> = (0..20).map(|_| random_windable_instance(&mut rng, 5)).collect();
    let flows: Vec<HolantInstance> = (0..20).map(|_| random_windable_instance(&mut rng, 4)).collect();
    let states: usize = par_map(kernels, |inst| kernel_checks(&inst)).into_iter().sum::<Result<usize, String>>()?;
    let pairs: usize = par_map(flows, |inst| flow_identity(&inst)).into_iter().sum::<Result<usize, String>>()?;
    Ok(format!("20 kernels ({states} states) exact; flow identity on {pairs} pairs over 20 instances"))
}

fn strata_bounds(f: &Fixture) -> Result<(), String> {
    let inst = f.instance().map_err(|e| e.to_string())?;
    let s = brute_strata(&inst).map_err(|e| e.to_string())?;
    let z = |k: usize| s.get(k).cloned().unwrap_or_else(zero);
    let (z0, z2, z4) = (z(0), z(2), z(4));
    let label = || format!("{:?} on {} vertices, edges {:?}, weights {:?}", f.problem, f.num_vertices, f.edges, f.weights);
    ensure(z0 > zero(), || format!("Z0 = 0 for {}", label()))?;
    let bound = f.problem.ratio_bound(f.edges.len(), f.weights.as_deref()).ok_or("no bound")?;
    ensure(&z2 / &z0 <= bound, || format!("Z2/Z0 = {} > {} for {}", &z2 / &z0, bound, label()))?;
    ensure(&z0 * &z4 <= &z2 * &z2, || format!("Z0 Z4 > Z2^2 for {}", label()))
}

fn criterion_9() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut fixtures: Vec<Fixture> = (0..50).map(|_| random_fixture(&mut rng, 10, false)).collect();
    let matchings = fixtures.iter().filter(|f| matches!(f.problem, Problem::BMatching(_))).count();
    fixtures.extend((0..20).map(|_| random_fixture(&mut rng, 5, true)));
    par_map(fixtures, |f| strata_bounds(&f)).into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(format!("50 unweighted ({matchings} matching) and 20 weighted instances within bounds"))
}

const RUNS: u64 = 100;
const SAMPLES: usize = 40_000;
const BURN_IN: u64 = 2_000;
const THINNING: u64 = 50;

fn one_run(f: &Fixture, seed: u64) -> Result<Rational, String> {
    let mut params = CountParams::new(frac(1, 10), frac(1, 20), seed);
    params.samples = Some(SAMPLES);
    params.burn_in = Some(BURN_IN);
    params.thinning = THINNING;
    let w = f.weights.as_deref();
    let est = match f.problem {
        Problem::BMatching(b) => count_b_matching(f.num_vertices, &f.edges, b, w, &params),
        Problem::BEdgeCover(b) => count_b_edge_cover(f.num_vertices, &f.edges, b, w, &params),
    };
    est.map(|e| e.estimate).map_err(|e| format!("{} seed {seed}: {e}", f.name))
}

fn criterion_10() -> Check {
    let fixtures = counting_fixtures();
    let jobs: Vec<(usize, u64)> = (0..fixtures.len()).flat_map(|i| (0..RUNS).map(move |s| (i, s))).collect();
    let results = par_map(jobs, |(i, seed)| (i, one_run(&fixtures[i], seed)));
    let mut summary = Vec::new();
    let mut failed = false;
    for (i, f) in fixtures.iter().enumerate() {
        let z = f.exact_z0().map_err(|e| e.to_string())?;
        let mut hits = 0;
        let mut worst = 0.0f64;
        for (_, r) in results.iter().filter(|(j, _)| *j == i) {
            let est = r.clone()?;
            let rel = to_f64(&((&est - &z) / &z)).abs();
            worst = worst.max(rel);
            hits += usize::from(rel <= 0.1);
        }
        failed |= hits < 95;
        summary.push(format!("{} {hits}/{RUNS} (worst {worst:.3})", f.name));
    }
    let text = summary.join(", ");
    if failed {
        Err(text)
    } else {
        Ok(text)
    }
}

fn criterion_11() -> Check {
    let fixtures = bundled();
    for f in &fixtures {
        let inst = f.instance().map_err(|e| e.to_string())?;
        let job = CountJob::new(inst, frac(1, 10), frac(1, 20), 0).map_err(|e| e.to_string())?;
        let est = estimate_z0_with(&job, &mut ExactMarginals).map_err(|e| format!("{}: {e}", f.name))?.estimate;
        let z = f.exact_z0().map_err(|e| e.to_string())?;
        ensure(est == z, || format!("{}: telescoped {est} != {z}", f.name))?;
    }
    Ok(format!("exact on all {} fixtures", fixtures.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("matrix oracle equivalence", criterion_1),
        ("published solution vectors", criterion_2),
        ("windability verdict table", criterion_3),
        ("mu-family verdicts", criterion_4),
        ("closed forms and binomial identity", criterion_5),
        ("parity relation and split equivalence", criterion_6),
        ("witness axioms", criterion_7),
        ("chain correctness", criterion_8),
        ("ratio and stratum bounds", criterion_9),
        ("end-to-end counting", criterion_10),
        ("exact-marginal telescoping", criterion_11),
    ];
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let number = i + 1;
        if !only.is_empty() && !only.contains(&number) {
            continue;
        }
        let start = Instant::now();
        let result = run();
        let secs = start.elapsed().as_secs_f64();
        let (status, detail) = match &result {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        failures += usize::from(result.is_err());
        println!("criterion {number:>2} {status} {name} ({secs:.1}s): {detail}");
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
