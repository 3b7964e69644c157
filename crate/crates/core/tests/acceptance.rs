//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Built with `harness = false` so the lines always reach the terminal. The
//! process exits non-zero when any criterion fails.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use oneround::matrix::{unit_square_closed_form, unit_square_closed_form_printed, unit_square_defect};
use oneround::optimal::{
    k_approx, k_exact, k_report, kk_star_divergence_scan, tail_bound_scan, naive_lower_bound, no_gap_values, verify_sum_identities, BoundSide,
    LemmaRegionScan, TailExponent,
};
use oneround::oracles::{exhaustive_optimal, lap_optimal, verify_majority_property, DEFAULT_EXHAUSTIVE_CAP};
use oneround::simulate::{simulate, simulate_with_threads, SimConfig};
use oneround::strategy::{enumerate_shape_candidates, verify_splice_identity};
use oneround::{
    binomial, majority_strategy, no_gap_strategy, objective, verify_structural_lemmas, BigRational, BuildMethod, Strategy, ThrowString,
    TrickMatrix,
};

/// Standard errors allowed between a simulated mean and the exact value.
const SIM_Z_TOLERANCE: f64 = 5.0;
const SIM_DEALS: u64 = 100_000;
const SIM_SEED: u64 = 20_240_601;
/// Decimal places used when comparing the N = 500 ratio.
const RATIO_DECIMALS: usize = 3;

/// The matrices exactly as printed, `P^2` through `P^8`.
const PRINTED: &[&[&[i64]]] = &[
    &[&[3, 1], &[5, 3]],
    &[&[10, 4, 1], &[16, 10, 4], &[19, 16, 10]],
    &[&[35, 15, 5, 1], &[55, 35, 17, 5], &[65, 53, 35, 15], &[69, 65, 55, 35]],
    &[
        &[126, 56, 21, 6, 1],
        &[196, 126, 66, 26, 6],
        &[231, 186, 126, 66, 21],
        &[246, 226, 186, 126, 56],
        &[251, 246, 231, 196, 126],
    ],
    &[
        &[462, 210, 84, 28, 7, 1],
        &[714, 462, 252, 112, 37, 7],
        &[840, 672, 462, 262, 112, 28],
        &[896, 812, 662, 462, 252, 84],
        &[917, 887, 812, 672, 462, 210],
        &[923, 917, 896, 840, 714, 462],
    ],
    &[
        &[1716, 792, 330, 120, 36, 8, 1],
        &[2640, 1716, 960, 456, 176, 50, 8],
        &[3102, 2472, 1716, 1016, 491, 176, 36],
        &[3312, 2976, 2416, 1716, 1016, 456, 120],
        &[3396, 3256, 2941, 2416, 1716, 960, 330],
        &[3424, 3382, 3256, 2976, 2472, 1716, 792],
        &[3431, 3424, 3396, 3312, 3102, 2640, 1716],
    ],
    &[
        &[6435, 3003, 1287, 495, 165, 45, 9, 1],
        &[9867, 6435, 3663, 1815, 765, 261, 65, 9],
        &[11583, 9207, 6435, 3915, 2025, 849, 261, 45],
        &[12375, 11055, 8955, 6435, 3985, 2025, 765, 165],
        &[12705, 12105, 10845, 8885, 6435, 3915, 1815, 495],
        &[12825, 12609, 12021, 10845, 8955, 6435, 3663, 1287],
        &[12861, 12805, 12609, 12105, 11055, 9207, 6435, 3003],
        &[12869, 12861, 12825, 12705, 12375, 11583, 9867, 6425],
    ],
];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

type Check = fn() -> oneround::Result<Outcome>;

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

fn matrix_reproduction() -> oneround::Result<Outcome> {
    let mut mismatches = Vec::new();
    for (idx, printed) in PRINTED.iter().enumerate() {
        let n = idx + 2;
        let p = TrickMatrix::stern(n)?;
        for (i, row) in printed.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if p.get(i + 1, j + 1) != &big(v) {
                    mismatches.push((n, i + 1, j + 1, v, p.get(i + 1, j + 1).clone()));
                }
            }
        }
    }
    let only_corner = mismatches.len() == 1 && {
        let (n, i, j, printed, computed) = &mismatches[0];
        (*n, *i, *j, *printed) == (8, 8, 8, 6425) && computed == &big(6435)
    };
    // The printed corner breaks the constant main diagonal of P^8.
    let printed8 = TrickMatrix::from_i64_rows(PRINTED[6])?;
    let off_diagonal: Vec<usize> = (1..=8).filter(|&i| printed8.get(i, i) != printed8.get(1, 1)).collect();
    let flagged = off_diagonal == [8];
    Ok(outcome(
        only_corner && flagged,
        format!("P^2..P^8 match except {mismatches:?}; printed 6425 at (8,8) breaks the constant diagonal: {flagged}"),
    ))
}

fn four_way_builders() -> oneround::Result<Outcome> {
    let mut bad = Vec::new();
    for n in 1..=60 {
        let stern = TrickMatrix::stern(n)?;
        for m in BuildMethod::ALL {
            if m == BuildMethod::Brute && n > 10 {
                continue;
            }
            if m.build(n, 10)? != stern {
                bad.push((n, m.name()));
            }
        }
    }
    Ok(outcome(bad.is_empty(), format!("4 builders agree for N <= 10, 3 formula builders for N <= 60; disagreements {bad:?}")))
}

fn structural_suite() -> oneround::Result<Outcome> {
    let mut failed = Vec::new();
    let mut checked = 0u64;
    for n in 1..=60 {
        let p = TrickMatrix::stern(n)?;
        let mut reports = verify_structural_lemmas(&p);
        reports.push(verify_sum_identities(&p)?);
        for r in reports {
            checked += r.checked;
            if !r.pass {
                failed.push(r.line());
            }
        }
    }
    Ok(outcome(failed.is_empty(), format!("{checked} checks over N <= 60, failures {failed:?}")))
}

fn printed_unit_square_info() -> oneround::Result<String> {
    let (mut cells, mut corrected, mut printed) = (0, 0, 0);
    for n in 2..=20 {
        let p = TrickMatrix::stern(n)?;
        for i in 1..n {
            for j in 1..n {
                let (Some(c), Some(q)) = (unit_square_closed_form(n, i, j), unit_square_closed_form_printed(n, i, j)) else {
                    continue;
                };
                let d = unit_square_defect(&p, i, j);
                cells += 1;
                corrected += usize::from(c == d);
                printed += usize::from(q == d);
            }
        }
    }
    Ok(format!("unit-square closed form over N <= 20: (i+j) denominator matches {corrected}/{cells}, printed (j+1) denominator matches {printed}/{cells}"))
}

fn hook_sum() -> oneround::Result<Outcome> {
    let mut bad = Vec::new();
    let mut p = TrickMatrix::stern(1)?;
    for n in 1..=59 {
        let next = p.hooksum_step();
        let target = TrickMatrix::stern(n + 1)?;
        if next != target {
            bad.push(n);
        }
        p = target;
    }
    let p4 = TrickMatrix::stern(4)?;
    let hook = |i: usize, j: usize| -> BigInt { (j..=4).map(|c| p4.get(i, c).clone()).sum::<BigInt>() + (1..i).map(|r| p4.get(r, j).clone()).sum::<BigInt>() };
    let (h22, h13) = (hook(2, 2), hook(1, 3));
    let via_formula = oneround::matrix::hooksum_formula_entry(&p4, 2, 2);
    let worked = h22 == big(72) && h13 == big(6) && via_formula == big(66) && TrickMatrix::stern(5)?.get(2, 3) == &big(66);
    Ok(outcome(
        bad.is_empty() && worked,
        format!("P^(N+1) from P^N for N <= 59, mismatches {bad:?}; p^5_23 = {h22} - {h13} = {via_formula}"),
    ))
}

fn optimality() -> oneround::Result<Outcome> {
    let mut problems = Vec::new();
    let two = exhaustive_optimal(&TrickMatrix::stern(2)?, DEFAULT_EXHAUSTIVE_CAP)?;
    let tie_ok = two.tie && two.argmax == vec![Strategy::identity(2), Strategy::new(vec![2, 1])?] && two.value == big(6);
    if !tie_ok {
        problems.push("N=2 tie".to_string());
    }
    for n in 3..=DEFAULT_EXHAUSTIVE_CAP {
        let p = TrickMatrix::stern(n)?;
        let best = &no_gap_values(n)?[k_exact(n)?];
        let r = exhaustive_optimal(&p, DEFAULT_EXHAUSTIVE_CAP)?;
        if &r.value != best {
            problems.push(format!("exhaustive N={n}"));
        }
        for s in &r.argmax {
            let t = ThrowString::of(s);
            if !(s.is_shape_valid() && s.is_symmetric() && t.is_gap_free()) {
                problems.push(format!("maximiser {s} at N={n}"));
            }
        }
    }
    for n in 3..=60 {
        let lap = lap_optimal(&TrickMatrix::stern(n)?);
        if lap.value != no_gap_values(n)?[k_exact(n)?] {
            problems.push(format!("lap N={n}"));
        }
    }
    Ok(outcome(problems.is_empty(), format!("exhaustive N <= 9 and LAP 3 <= N <= 60 equal F(π_k*); N=2 tie {tie_ok}; problems {problems:?}")))
}

fn k_formula() -> oneround::Result<Outcome> {
    let ks = (3..=15).map(k_exact).collect::<oneround::Result<Vec<_>>>()?;
    let table_ok = ks == [1, 1, 1, 1, 2, 2, 2, 2, 2, 2, 3, 3, 3];
    let tail = |n: u64, top: i64| -> BigInt { (0..=top).map(|j| binomial(2 * n, j)).sum() };
    let sq = |n: u64, k: i64| -> BigInt {
        let c = binomial(n, k);
        &c * &c
    };
    let c7 = binomial(14, 7);
    let e1 = tail(7, 5);
    let e1b = &e1 + sq(7, 1);
    let e1c = tail(7, 4) + sq(7, 2);
    let first = e1 == big(3473) && c7 == big(3432) && e1b == big(3522) && e1c == big(1912) && e1b > c7 && e1c < c7;
    let e2 = tail(13, 10);
    let c13 = binomial(26, 13);
    let printed_sum = big(10_970_722);
    let second = e2 == printed_sum && c13 == big(10_400_600);
    Ok(outcome(
        table_ok && first && second,
        format!(
            "k*(3..15) = {ks:?}; N=7 sums {e1}/{c7}, {e1b}, {e1c}; N=13 sum {e2} vs printed {printed_sum} (over {c13}, verdict unchanged: {})",
            e2 > c13
        ),
    ))
}

fn bounds() -> oneround::Result<Outcome> {
    let mut violations = Vec::new();
    for n in 90..=500 {
        let r = k_report(n)?;
        if let Some(side) = r.bound_violation {
            violations.push((n, side));
        }
    }
    let only_90 = violations == [(90, BoundSide::Lower)];
    let r500 = k_report(500)?;
    let shown = format!("{:.*}", RATIO_DECIMALS, r500.ratio);
    let ratio_ok = shown == "0.559";
    let mut naive_bad = Vec::new();
    for n in 3..=500 {
        if naive_lower_bound(n)? > k_approx(n)? {
            naive_bad.push(n);
        }
    }
    Ok(outcome(
        only_90 && ratio_ok && naive_bad.is_empty(),
        format!(
            "bound violations on 90..500: {violations:?}; k*(500) = {} gives ratio {shown} (expected 0.559); naive bound failures {naive_bad:?}",
            r500.k_exact
        ),
    ))
}

fn k_vs_k_star() -> oneround::Result<Outcome> {
    let diverge = kk_star_divergence_scan(500)?;
    Ok(outcome(diverge.is_empty(), format!("N <= 500 with k != k*: {diverge:?}")))
}

fn shape_count() -> oneround::Result<Outcome> {
    let mut bad = Vec::new();
    for n in 3..=16 {
        let got = enumerate_shape_candidates(n, 16)?.len();
        if got != 1 << (n - 3) {
            bad.push((n, got));
        }
    }
    Ok(outcome(bad.is_empty(), format!("2^(N-3) candidates for 3 <= N <= 16, mismatches {bad:?}")))
}

fn splice() -> oneround::Result<Outcome> {
    let p7 = TrickMatrix::stern(7)?;
    let pi: Strategy = "[7,1,6,5,2,3,4]".parse()?;
    let pi_prime = pi.reflect();
    let sigma: Strategy = "[7,6,5,4,2,3,1]".parse()?;
    let t1: Strategy = "[7,6,5,1,2,3,4]".parse()?;
    let t2: Strategy = "[7,1,4,5,2,3,6]".parse()?;
    let t3: Strategy = "[7,5,6,4,2,3,1]".parse()?;
    let values = [&pi, &pi_prime, &sigma, &t1, &t2, &t3].iter().map(|s| objective(&p7, s)).collect::<oneround::Result<Vec<_>>>()?;
    let expected: Vec<BigInt> = [13657, 13657, 12201, 13678, 13825, 12012].into_iter().map(big).collect();
    let identity = verify_splice_identity(&p7, [&pi, &pi_prime, &sigma], [&t1, &t2, &t3])?;
    let shown: Vec<String> = values.iter().map(ToString::to_string).collect();
    Ok(outcome(values == expected && identity, format!("F = {}; same cells on both sides: {identity}", shown.join(", "))))
}

fn majority() -> oneround::Result<Outcome> {
    let reports = [3, 5, 7].into_iter().map(|n| verify_majority_property(n, 7)).collect::<oneround::Result<Vec<_>>>()?;
    let lines: Vec<String> = reports.iter().map(|r| r.line()).collect();
    Ok(outcome(reports.iter().all(|r| r.pass), lines.join("; ")))
}

fn tail_frontier() -> oneround::Result<Outcome> {
    let files = [
        (TailExponent::OverN, include_str!("../data/tail_over_n.csv")),
        (TailExponent::OverNPlusK, include_str!("../data/tail_over_n_plus_k.csv")),
    ];
    let mut matches = Vec::new();
    let mut scans = Vec::new();
    for (mode, text) in files {
        let scan = tail_bound_scan(8..=60, mode)?;
        matches.push(scan.cells == LemmaRegionScan::cells_from_csv(text)?);
        scans.push(scan);
    }
    let cells = scans[0].holds(20, 8) == Some(true) && scans[0].holds(20, 5) == Some(false) && scans[1].holds(20, 5) == Some(true);
    Ok(outcome(
        matches.iter().all(|&m| m) && cells,
        format!(
            "recorded files match {matches:?}; printed exponent fails at {} cells incl. (20,5), holds at (20,8); (N+k) variant fails at {}",
            scans[0].exceptions.len(),
            scans[1].exceptions.len()
        ),
    ))
}

fn simulation() -> oneround::Result<Outcome> {
    let mut worst: f64 = 0.0;
    let mut bad = Vec::new();
    for n in [3, 5, 7] {
        let p = TrickMatrix::stern(n)?;
        let scale = binomial(2 * n as u64, n as i64);
        for (name, s) in [("optimal", no_gap_strategy(n, k_exact(n)?)?), ("identity", Strategy::identity(n)), ("majority", majority_strategy(n)?)] {
            let exact = BigRational::new(objective(&p, &s)?, scale.clone()).to_f64().unwrap_or(f64::NAN);
            let r = simulate(&SimConfig::new(s, SIM_DEALS, SIM_SEED)?)?;
            let z = (r.mean_tricks - exact).abs() / r.stderr;
            worst = worst.max(z);
            if z.is_nan() || z > SIM_Z_TOLERANCE {
                bad.push((n, name, z));
            }
        }
    }
    let cfg = SimConfig::new(majority_strategy(7)?, SIM_DEALS, SIM_SEED)?;
    let same = simulate_with_threads(&cfg, 1)? == simulate_with_threads(&cfg, 4)?;
    Ok(outcome(bad.is_empty() && same, format!("largest |z| = {worst:.2} (limit {SIM_Z_TOLERANCE}); 1 vs 4 threads identical: {same}; misses {bad:?}")))
}

fn main() {
    let criteria: [(&str, Option<Duration>, Check); 13] = [
        ("matrix reproduction", Some(Duration::from_secs(1)), matrix_reproduction),
        ("builder equivalence", Some(Duration::from_secs(120)), four_way_builders),
        ("structural properties", Some(Duration::from_secs(120)), structural_suite),
        ("hook-sum recursion", None, hook_sum),
        ("optimality ground truth", Some(Duration::from_secs(300)), optimality),
        ("k formula reproduction", None, k_formula),
        ("square-root bounds", Some(Duration::from_secs(60)), bounds),
        ("k versus k*", None, k_vs_k_star),
        ("shape candidate count", None, shape_count),
        ("splice identity", None, splice),
        ("majority property", Some(Duration::from_secs(30)), majority),
        ("tail-bound frontier", None, tail_frontier),
        ("simulation consistency", Some(Duration::from_secs(60)), simulation),
    ];
    let mut failures = 0;
    for (idx, (name, budget, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let in_time = budget.is_none_or(|b| elapsed <= b);
        let (pass, detail) = match result {
            Ok(o) => (o.pass && in_time, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let budget_note = budget.map(|b| format!(", budget {:.0}s", b.as_secs_f64())).unwrap_or_default();
        failures += usize::from(!pass);
        println!("{} {:>2} {name}: {detail} [{:.2}s{budget_note}]", if pass { "PASS" } else { "FAIL" }, idx + 1, elapsed.as_secs_f64());
        if idx == 2 {
            match printed_unit_square_info() {
                Ok(info) => println!("INFO    {info}"),
                Err(e) => println!("INFO    unit-square comparison error: {e}"),
            }
        }
    }
    println!(
        "SKIP 14 asymptotic claims: the unconditional threshold N > 10^7 and the limit k(N)/sqrt(N ln N) -> 1/sqrt(2) are not checkable at desk scale; the finite-range checks above stand in for them"
    );
    println!("{} of 13 checkable criteria passed", 13 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
