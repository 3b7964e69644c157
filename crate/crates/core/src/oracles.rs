//! Ground truth that does not rely on any structure of the trick matrix:
//! deal enumeration, exhaustive and assignment-based optimisation, and the
//! perfect-information matching bound.

use std::cmp::Ordering;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::json;

use crate::combinatorics::{binomial, BigRational};
use crate::error::{Error, Result};
use crate::matrix::TrickMatrix;
use crate::report::VerificationReport;
use crate::optimal::{k_exact, no_gap_values};
use crate::strategy::{
    enumerate_shape_candidates, majority_strategy, objective, strategy_from_string, Strategy, ThrowString, DEFAULT_SHAPE_CAP,
};

/// Default largest `N` for permutation search over all of `S_N`.
pub const DEFAULT_EXHAUSTIVE_CAP: usize = 9;
/// Default largest `N` for [`verify_majority_property`], which compares the
/// majority strategy with all of `S_N` on every deal.
pub const DEFAULT_MAJORITY_CAP: usize = 7;

/// One partition of `1..=2N` into two sorted hands.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Deal {
    pub hand2: Vec<usize>,
    pub hand1: Vec<usize>,
}

impl Deal {
    /// Player 2's cards; player 1 receives the complement.
    pub fn from_hand2(n: usize, mut hand2: Vec<usize>) -> Result<Self> {
        hand2.sort_unstable();
        if hand2.len() != n || hand2.windows(2).any(|w| w[0] == w[1]) || hand2.iter().any(|&c| c == 0 || c > 2 * n) {
            return Err(Error::Domain(format!("{hand2:?} is not an N={n} hand drawn from 1..={}", 2 * n)));
        }
        let hand1 = complement(n, &hand2);
        Ok(Deal { hand2, hand1 })
    }

    pub fn n(&self) -> usize {
        self.hand2.len()
    }

    /// `c_i`: how many of player 1's cards lie below player 2's `i`-th card.
    /// Player 2's `i`-th card beats player 1's `j`-th card exactly when `j <= c_i`.
    pub fn beaten_counts(&self) -> impl Iterator<Item = usize> + '_ {
        self.hand2.iter().enumerate().map(|(i, &c)| c - (i + 1))
    }
}

fn complement(n: usize, sorted: &[usize]) -> Vec<usize> {
    let mut rest = Vec::with_capacity(n);
    let mut it = sorted.iter().peekable();
    for v in 1..=2 * n {
        if it.peek() == Some(&&v) {
            it.next();
        } else {
            rest.push(v);
        }
    }
    rest
}

/// Deals whose player-2 hand starts with `first`, in lexicographic order.
pub fn deals_with_first_card(n: usize, first: usize) -> impl Iterator<Item = Deal> {
    let valid = n >= 1 && (1..=n + 1).contains(&first);
    valid
        .then(move || (first + 1..=2 * n).combinations(n - 1))
        .into_iter()
        .flatten()
        .map(move |rest| {
            let hand2: Vec<usize> = std::iter::once(first).chain(rest).collect();
            let hand1 = complement(n, &hand2);
            Deal { hand2, hand1 }
        })
}

/// All `C(2N,N)` deals, lexicographic in player 2's hand.
pub fn enumerate_deals(n: usize, cap: usize) -> Result<impl Iterator<Item = Deal>> {
    check_cap("deal enumeration", n, cap)?;
    Ok((1..=n + 1).flat_map(move |first| deals_with_first_card(n, first)))
}

fn check_cap(what: &'static str, n: usize, cap: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain(format!("{what} needs N >= 1")));
    }
    if n > cap {
        return Err(Error::CapExceeded { what, n, cap });
    }
    Ok(())
}

fn check_dims(deal: &Deal, s: &Strategy) -> Result<()> {
    if deal.n() != s.n() {
        return Err(Error::DimensionMismatch { expected: deal.n(), got: s.n() });
    }
    Ok(())
}

/// Tricks player 2 takes when card `i` meets player 1's card `π(i)`.
pub fn tricks_won(deal: &Deal, s: &Strategy) -> Result<usize> {
    check_dims(deal, s)?;
    Ok(s.points().filter(|&(i, j)| deal.hand2[i - 1] > deal.hand1[j - 1]).count())
}

/// Average of [`tricks_won`] over every deal, as an exact fraction.
pub fn expected_tricks_bruteforce(n: usize, s: &Strategy, cap: usize) -> Result<BigRational> {
    check_cap("brute-force", n, cap)?;
    if s.n() != n {
        return Err(Error::DimensionMismatch { expected: n, got: s.n() });
    }
    let total: u64 = (1..=n + 1)
        .into_par_iter()
        .map(|first| {
            deals_with_first_card(n, first)
                .map(|d| s.points().filter(|&(i, j)| d.hand2[i - 1] > d.hand1[j - 1]).count() as u64)
                .sum::<u64>()
        })
        .sum();
    Ok(BigRational::new(BigInt::from(total), binomial(2 * n as u64, n as i64)))
}

/// Maximum of `F` with its maximisers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptimumResult {
    pub value: BigInt,
    /// Every maximiser for exhaustive search; one maximiser for the
    /// assignment solver.
    pub argmax: Vec<Strategy>,
    /// Another permutation attains the same value.
    pub tie: bool,
}

fn small_entries(p: &TrickMatrix) -> Vec<u64> {
    p.rows().flatten().map(|v| v.to_u64().expect("entries below the exhaustive cap fit in u64")).collect()
}

/// Maximise `F` over all `N!` permutations.
pub fn exhaustive_optimal(p: &TrickMatrix, cap: usize) -> Result<OptimumResult> {
    let n = p.n();
    check_cap("exhaustive search", n, cap)?;
    let entries = small_entries(p);
    let value = |perm: &[usize]| perm.iter().enumerate().map(|(i, &c)| entries[i * n + c]).sum::<u64>();
    let (best, argmax) = (0..n)
        .into_par_iter()
        .map(|first| {
            let rest: Vec<usize> = (0..n).filter(|&c| c != first).collect();
            let mut best = 0u64;
            let mut argmax: Vec<Vec<usize>> = Vec::new();
            for tail in rest.iter().copied().permutations(n - 1) {
                let mut perm = Vec::with_capacity(n);
                perm.push(first);
                perm.extend(tail);
                let v = value(&perm);
                match v.cmp(&best) {
                    Ordering::Greater => {
                        best = v;
                        argmax = vec![perm];
                    }
                    Ordering::Equal => argmax.push(perm),
                    Ordering::Less => {}
                }
            }
            (best, argmax)
        })
        .reduce(
            || (0, Vec::new()),
            |a, b| match a.0.cmp(&b.0) {
                Ordering::Greater => a,
                Ordering::Less => b,
                Ordering::Equal => (a.0, a.1.into_iter().chain(b.1).collect()),
            },
        );
    let mut argmax: Vec<Strategy> = argmax
        .into_iter()
        .map(|perm| Strategy::new(perm.into_iter().map(|c| c + 1).collect()).expect("permutation"))
        .collect();
    argmax.sort();
    Ok(OptimumResult { value: BigInt::from(best), tie: argmax.len() > 1, argmax })
}

/// Search only the shape-valid permutations. Faster, but it presupposes the
/// shape property that the unpruned search is meant to confirm.
pub fn exhaustive_optimal_pruned(p: &TrickMatrix, cap: usize) -> Result<OptimumResult> {
    let candidates = enumerate_shape_candidates(p.n(), cap)?;
    let mut best: Option<BigInt> = None;
    let mut argmax = Vec::new();
    for s in candidates {
        let v = objective(p, &s)?;
        match best.as_ref().map(|b| v.cmp(b)) {
            None | Some(Ordering::Greater) => {
                best = Some(v);
                argmax = vec![s];
            }
            Some(Ordering::Equal) => argmax.push(s),
            Some(Ordering::Less) => {}
        }
    }
    let value = best.expect("at least one shape candidate");
    Ok(OptimumResult { value, tie: argmax.len() > 1, argmax })
}

/// Maximum-weight assignment by the Hungarian method with potentials, on
/// exact integers. The cost of cell `(i, j)` is `C(2N,N) - p_ij >= 0`.
pub fn lap_optimal(p: &TrickMatrix) -> OptimumResult {
    let n = p.n();
    let cost = |i: usize, j: usize| p.scale() - p.get(i, j);
    let inf = p.scale() * (n + 1);
    let mut u = vec![BigInt::zero(); n + 1];
    let mut v = vec![BigInt::zero(); n + 1];
    // row_of[j] is the row assigned to column j; column 0 is a sentinel.
    let mut row_of = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        row_of[0] = i;
        let mut j0 = 0;
        let mut minv = vec![inf.clone(); n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = row_of[j0];
            let mut delta = inf.clone();
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost(i0, j) - &u[i0] - &v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j].clone();
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[row_of[j]] += &delta;
                    v[j] -= &delta;
                } else {
                    minv[j] -= &delta;
                }
            }
            j0 = j1;
            if row_of[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut col_of = vec![0usize; n + 1];
    for j in 1..=n {
        col_of[row_of[j]] = j;
    }
    let strategy = Strategy::new(col_of[1..].to_vec()).expect("assignment is a permutation");
    let value = objective(p, &strategy).expect("same N");

    // Another optimum exists iff the tight (zero reduced cost) edges contain an
    // alternating cycle: row i can take row r's column whenever that edge is
    // tight, so look for a directed cycle among rows.
    let tight = |i: usize, j: usize| cost(i, j) - &u[i] - &v[j] == BigInt::zero();
    let succ: Vec<Vec<usize>> = (0..=n)
        .map(|i| if i == 0 { Vec::new() } else { (1..=n).filter(|&r| r != i && tight(i, col_of[r])).collect() })
        .collect();
    let tie = has_cycle(&succ);
    OptimumResult { value, argmax: vec![strategy], tie }
}

fn has_cycle(succ: &[Vec<usize>]) -> bool {
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state = vec![0u8; succ.len()];
    for start in 0..succ.len() {
        if state[start] != 0 {
            continue;
        }
        let mut stack = vec![(start, 0usize)];
        state[start] = 1;
        while let Some(&mut (node, ref mut next)) = stack.last_mut() {
            if let Some(&to) = succ[node].get(*next) {
                *next += 1;
                match state[to] {
                    1 => return true,
                    0 => {
                        state[to] = 1;
                        stack.push((to, 0));
                    }
                    _ => {}
                }
            } else {
                state[node] = 2;
                stack.pop();
            }
        }
    }
    false
}

/// Most tricks player 2 could take with full knowledge of both hands.
///
/// Sweeping both hands upward and letting each player-2 card take the lowest
/// still-unbeaten player-1 card is optimal: any optimal matching can be
/// rearranged into this one without losing a trick.
pub fn max_tricks_any_matching(deal: &Deal) -> usize {
    let mut j = 0;
    for &card in &deal.hand2 {
        if j < deal.hand1.len() && card > deal.hand1[j] {
            j += 1;
        }
    }
    j
}

/// For odd `N = 2n+1`: whenever some pairing wins `n+1` tricks, the majority
/// strategy wins `n+1` tricks too, and no permutation wins a majority in more
/// deals than it does.
pub fn verify_majority_property(n: usize, cap: usize) -> Result<VerificationReport> {
    let majority = majority_strategy(n)?;
    check_cap("brute-force", n, cap)?;
    let need = n / 2 + 1;
    let mut report = VerificationReport::new("majority", n);
    let deals: Vec<Deal> = enumerate_deals(n, cap)?.collect();

    let mut majority_count = 0u64;
    for deal in &deals {
        let possible = max_tricks_any_matching(deal) >= need;
        let won = tricks_won(deal, &majority)?;
        if won >= need {
            majority_count += 1;
        }
        report.record(!possible || won >= need, || json!({"hand2": deal.hand2, "won": won}));
    }

    let counts: Vec<Vec<usize>> = deals.iter().map(|d| d.beaten_counts().collect()).collect();
    let better = (0..n).into_par_iter().find_map_any(|first| {
        let rest: Vec<usize> = (0..n).filter(|&c| c != first).collect();
        rest.into_iter().permutations(n - 1).find_map(|tail| {
            let perm: Vec<usize> = std::iter::once(first).chain(tail).collect();
            let wins = counts
                .iter()
                .filter(|c| perm.iter().zip(c.iter()).filter(|(&col, &beaten)| col < beaten).count() >= need)
                .count() as u64;
            (wins > majority_count).then_some((perm, wins))
        })
    });
    report.checked += 1;
    if let Some((perm, wins)) = better {
        if report.pass {
            report.pass = false;
            let one_based: Vec<usize> = perm.iter().map(|c| c + 1).collect();
            report.counterexample = Some(json!({"strategy": one_based, "majority_wins": wins, "majority_strategy_wins": majority_count}));
        }
    }
    Ok(report)
}

/// Largest `N` for which [`verify_no_gaps`] walks every throw string.
pub const NOGAP_CAP: usize = 40;

fn shape_candidates_checked(n: usize, report: &mut VerificationReport) -> Result<Vec<Strategy>> {
    let candidates = enumerate_shape_candidates(n, DEFAULT_SHAPE_CAP)?;
    report.record(candidates.len() == 1 << (n - 3), || json!({"candidates": candidates.len()}));
    for s in &candidates {
        report.record(s.is_shape_valid(), || json!({"strategy": s.as_slice()}));
    }
    Ok(candidates)
}

/// Optimal strategies avoid the main diagonal and fall into the two
/// monotone runs: the best shape candidate matches the assignment optimum,
/// and for `N <= cap` every maximiser over `S_N` is a shape candidate.
pub fn verify_shape_theorem(n: usize, cap: usize) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("shape", n);
    let candidates = shape_candidates_checked(n, &mut report)?;
    let p = TrickMatrix::stern(n)?;
    let lap = lap_optimal(&p);
    let best = candidates.iter().map(|s| objective(&p, s)).collect::<Result<Vec<_>>>()?.into_iter().max();
    report.record(best.as_ref() == Some(&lap.value), || json!({"shape_best": best.map(|b| b.to_string()), "lap": lap.value.to_string()}));
    if n <= cap {
        let full = exhaustive_optimal(&p, cap)?;
        for s in &full.argmax {
            report.record(s.is_shape_valid(), || json!({"maximiser": s.as_slice()}));
        }
    }
    Ok(report)
}

/// Optimal strategies are unchanged by reflection in the anti-main diagonal.
/// Below the exhaustive cap every maximiser is checked; up to the shape cap
/// the best symmetric candidate must reach the assignment optimum.
pub fn verify_symmetry(n: usize, cap: usize) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("symmetry", n);
    let p = TrickMatrix::stern(n)?;
    let lap = lap_optimal(&p);
    if n <= cap {
        let full = exhaustive_optimal(&p, cap)?;
        for s in &full.argmax {
            report.record(s.is_symmetric(), || json!({"maximiser": s.as_slice()}));
            report.record(full.argmax.contains(&s.reflect()), || json!({"unreflected": s.as_slice()}));
        }
    }
    if (3..=DEFAULT_SHAPE_CAP).contains(&n) {
        let candidates = enumerate_shape_candidates(n, DEFAULT_SHAPE_CAP)?;
        let best = candidates
            .iter()
            .filter(|s| s.is_symmetric())
            .map(|s| objective(&p, s))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .max();
        report.record(best.as_ref() == Some(&lap.value), || json!({"symmetric_best": best.map(|b| b.to_string()), "lap": lap.value.to_string()}));
    }
    if report.checked == 0 {
        return Err(Error::CapExceeded { what: "symmetry check", n, cap: DEFAULT_SHAPE_CAP.max(cap) });
    }
    Ok(report)
}

/// Over every throw string, the best value is reached by a gap-free string,
/// equals `F(π_{k*})` and equals the assignment optimum. Gapped strings that
/// tie are reported as counterexamples.
pub fn verify_no_gaps(n: usize) -> Result<VerificationReport> {
    if !(3..=NOGAP_CAP).contains(&n) {
        return Err(Error::CapExceeded { what: "throw-string enumeration", n, cap: NOGAP_CAP });
    }
    let mut report = VerificationReport::new("no-gaps", n);
    let p = TrickMatrix::stern(n)?;
    let half = n / 2;
    let values: Vec<(u64, BigInt)> = (0u64..1 << half)
        .into_par_iter()
        .map(|mask| {
            let t = ThrowString::new(n, (0..half).map(|b| mask >> b & 1 == 1).collect())?;
            Ok((mask, objective(&p, &strategy_from_string(&t))?))
        })
        .collect::<Result<_>>()?;
    let best = values.iter().map(|(_, v)| v).max().expect("at least the empty string").clone();
    for (mask, v) in &values {
        let gap_free = (mask + 1) & mask == 0;
        report.record(gap_free || v < &best, || json!({"gapped_string_mask": mask, "value": v.to_string()}));
    }
    let k = k_exact(n)?;
    let f = no_gap_values(n)?.swap_remove(k);
    report.record(f == best, || json!({"best": best.to_string(), "no_gap": f.to_string(), "k_exact": k}));
    let lap = lap_optimal(&p);
    report.record(lap.value == best, || json!({"best": best.to_string(), "lap": lap.value.to_string()}));
    Ok(report)
}
