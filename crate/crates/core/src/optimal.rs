//! How many tricks to throw.
//!
//! The no-gap strategy `π_k` throws the worst `k` cards. Its value is
//! `F(π_k) = sum_{i<=k} p_{i,N+1-i} + sbar_k`, so consecutive values differ by
//! `Δsbar_k + p_{k,N+1-k}` with `Δsbar_k = sum_{j<=N-k} C(2N,j) - C(2N,N)` and
//! `p_{k,N+1-k} = C(N,0)^2 + ... + C(N,k-1)^2`.
//! Everything here is integer arithmetic on row `2N` of Pascal's triangle, so
//! it runs far beyond the sizes at which a matrix can be built.

use std::cmp::Ordering;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::certified::{cmp_times_exp, cmp_times_pi, exp_interval};
use crate::combinatorics::{binomial, pascal_row, prefix_sum_row, ratio, BigRational};
use crate::error::{domain, Error, Result};
use crate::matrix::{amd_entry, diagonal_sums, TrickMatrix};
use crate::oracles::lap_optimal;
use crate::report::VerificationReport;
use crate::strategy::{no_gap_strategy, objective};

fn need_three(n: usize) -> Result<()> {
    if n < 3 {
        return Err(domain(format!("N must be at least 3, got {n}")));
    }
    Ok(())
}

/// `Δsbar_k = sum_{j=0}^{N-k} C(2N,j) - C(2N,N)`, the change in the sum of the
/// diagonal `k` steps below the main one.
pub fn delta_sbar(n: usize, k: usize) -> Result<BigInt> {
    if k == 0 || k >= n {
        return Err(domain(format!("Δsbar needs 1 <= k <= N-1 (N={n}, k={k})")));
    }
    let two_n = 2 * n as u64;
    Ok(prefix_sum_row(two_n, (n - k) as i64) - binomial(two_n, n as i64))
}

/// `Δs_k = -sum_{j=0}^{N-k} C(2N,j)`, the same change above the main diagonal.
pub fn delta_s(n: usize, k: usize) -> Result<BigInt> {
    if k == 0 || k >= n {
        return Err(domain(format!("Δs needs 1 <= k <= N-1 (N={n}, k={k})")));
    }
    Ok(-prefix_sum_row(2 * n as u64, (n - k) as i64))
}

/// `Δsbar_k` for `k = 1..N-1`, built from a single Pascal row.
fn delta_sbar_all(n: usize) -> Vec<BigInt> {
    let row = pascal_row(2 * n as u64);
    let mut prefix: BigInt = row[..n].iter().sum();
    let mut out = Vec::with_capacity(n.saturating_sub(1));
    for k in 1..n {
        // prefix = sum_{j <= N-k} C(2N, j)
        out.push(&prefix - &row[n]);
        prefix -= &row[n - k];
    }
    out
}

/// `k(N)`: the largest `k >= 1` with `Δsbar_k >= 0`.
pub fn k_approx(n: usize) -> Result<usize> {
    need_three(n)?;
    let deltas = delta_sbar_all(n);
    debug_assert!(deltas.windows(2).all(|w| w[0] > w[1]));
    Ok(deltas.iter().rposition(|d| !d.is_negative()).expect("Δsbar_1 > 0 for N >= 3") + 1)
}

/// `k*(N)`: the largest `k` in `1..=N/2` with
/// `C(N,k-1)^2 + sum_{j=0}^{N-k} C(2N,j) >= C(2N,N)`.
pub fn k_exact(n: usize) -> Result<usize> {
    need_three(n)?;
    let small = pascal_row(n as u64);
    let deltas = delta_sbar_all(n);
    let best = (1..=n / 2).filter(|&k| !(&deltas[k - 1] + &small[k - 1] * &small[k - 1]).is_negative()).max();
    Ok(best.expect("k = 1 always qualifies"))
}

/// `k(N)` computed outward from the centre of row `2N`: the largest `k >= 1` with
/// `4^N/2 - 3 C(2N,N)/2 - C(2N,N-1) - ... - C(2N,N-k+1) >= 0`.
pub fn k_approx_center_out(n: usize) -> Result<usize> {
    need_three(n)?;
    let row = pascal_row(2 * n as u64);
    // Work with twice the quantity to stay in integers.
    let mut twice = (BigInt::one() << (2 * n)) - &row[n] * 3u32;
    let mut best = None;
    for k in 1..n {
        if k > 1 {
            twice -= &row[n + 1 - k] * 2u32;
        }
        if !twice.is_negative() {
            best = Some(k);
        }
    }
    Ok(best.expect("k = 1 always qualifies"))
}

/// `F(π_k)` for `k = 0..=N/2`, scaled by `C(2N,N)`.
pub fn no_gap_values(n: usize) -> Result<Vec<BigInt>> {
    if n == 0 {
        return Err(domain("N must be at least 1"));
    }
    let small = pascal_row(n as u64);
    let c = binomial(2 * n as u64, n as i64);
    let deltas = delta_sbar_all(n);
    let mut values = vec![&c * n / 2u32];
    let mut amd = BigInt::from(0);
    for k in 1..=n / 2 {
        amd += &small[k - 1] * &small[k - 1];
        let next = values[k - 1].clone() + &deltas[k - 1] + &amd;
        values.push(next);
    }
    Ok(values)
}

/// Which side of `sqrt(N ln N / 4) < k* < sqrt(N ln N / 2)` failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundSide {
    Lower,
    Upper,
}

/// Everything known about the optimal number of throws at one `N`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KReport {
    pub n: usize,
    pub k_exact: usize,
    pub k_approx: usize,
    #[serde(skip)]
    pub f_values: Vec<BigInt>,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub ratio: f64,
    pub bound_violation: Option<BoundSide>,
    /// `⌊(sqrt(πN) - 1)/2⌋`.
    #[serde(skip)]
    pub naive_bound: usize,
    #[serde(skip)]
    pub naive_holds: bool,
}

/// `sqrt(N ln N / 4) < k`, decided as `e^{4k^2/N} > N`.
pub fn above_lower_bound(n: usize, k: usize) -> Result<bool> {
    let q = ratio(BigInt::from(4 * k * k), BigInt::from(n));
    Ok(cmp_times_exp(&BigInt::one(), &q, &BigInt::from(n))? == Ordering::Greater)
}

/// `k < sqrt(N ln N / 2)`, decided as `e^{2k^2/N} < N`.
pub fn below_upper_bound(n: usize, k: usize) -> Result<bool> {
    let q = ratio(BigInt::from(2 * k * k), BigInt::from(n));
    Ok(cmp_times_exp(&BigInt::one(), &q, &BigInt::from(n))? == Ordering::Less)
}

/// `⌊(sqrt(πN) - 1)/2⌋`, the largest `m >= 0` with `(2m+1)^2 <= πN`.
pub fn naive_lower_bound(n: usize) -> Result<usize> {
    let fits = |m: usize| -> Result<bool> {
        let sq = BigInt::from((2 * m + 1) * (2 * m + 1));
        Ok(cmp_times_pi(&BigInt::from(n), &sq)? == Ordering::Greater)
    };
    let mut m = (((std::f64::consts::PI * n as f64).sqrt() - 1.0) / 2.0).floor().max(0.0) as usize;
    while m > 0 && !fits(m)? {
        m -= 1;
    }
    while fits(m + 1)? {
        m += 1;
    }
    Ok(m)
}

/// `⌊sqrt(N ln N / 2)⌋`, the largest `k` with `e^{2k^2/N} <= N`.
pub fn floor_sqrt_half_n_ln_n(n: usize) -> Result<usize> {
    let estimate = ((n as f64) * (n as f64).ln() / 2.0).sqrt().floor() as usize;
    let mut k = estimate.saturating_sub(1);
    while k > 0 && !below_upper_bound(n, k)? {
        k -= 1;
    }
    while below_upper_bound(n, k + 1)? {
        k += 1;
    }
    Ok(k)
}

pub fn k_report(n: usize) -> Result<KReport> {
    need_three(n)?;
    let k_exact = k_exact(n)?;
    let k_approx = k_approx(n)?;
    let nf = n as f64;
    let nln = nf * nf.ln();
    let bound_violation = if !above_lower_bound(n, k_exact)? {
        Some(BoundSide::Lower)
    } else if !below_upper_bound(n, k_exact)? {
        Some(BoundSide::Upper)
    } else {
        None
    };
    let naive_bound = naive_lower_bound(n)?;
    Ok(KReport {
        n,
        k_exact,
        k_approx,
        f_values: no_gap_values(n)?,
        lower_bound: (nln / 4.0).sqrt(),
        upper_bound: (nln / 2.0).sqrt(),
        ratio: k_exact as f64 / nln.sqrt(),
        bound_violation,
        naive_bound,
        naive_holds: naive_bound <= k_approx,
    })
}

/// Every `N` in `3..=n_max` with `k(N) != k*(N)`.
pub fn kk_star_divergence_scan(n_max: usize) -> Result<Vec<usize>> {
    need_three(n_max)?;
    let flags: Vec<Result<Option<usize>>> = (3..=n_max)
        .into_par_iter()
        .map(|n| Ok((k_approx(n)? != k_exact(n)?).then_some(n)))
        .collect();
    flags.into_iter().filter_map(|r| r.transpose()).collect()
}

/// Compare `k*` with the no-gap values computed from a built matrix and with
/// the assignment optimum.
pub fn verify_k_theorem(n: usize) -> Result<VerificationReport> {
    need_three(n)?;
    let p = TrickMatrix::stern(n)?;
    let k_star = k_exact(n)?;
    let mut report = VerificationReport::new("k-theorem", n);

    let formula = no_gap_values(n)?;
    for (k, f) in formula.iter().enumerate() {
        let direct = objective(&p, &no_gap_strategy(n, k)?)?;
        report.record(&direct == f, || json!({"k": k, "direct": direct.to_string(), "formula": f.to_string()}));
    }
    // The increments change sign exactly once, at k*.
    let signs: Vec<bool> = formula.windows(2).map(|w| w[1] >= w[0]).collect();
    let crossings = signs.windows(2).filter(|w| w[0] != w[1]).count();
    report.record(signs.first() == Some(&true) && crossings <= 1, || json!({"increments_nonnegative": signs}));
    let argmax = (0..formula.len()).max_by(|&a, &b| formula[a].cmp(&formula[b]).then(b.cmp(&a))).expect("nonempty");
    report.record(argmax == k_star, || json!({"argmax_k": argmax, "k_exact": k_star}));

    let lap = lap_optimal(&p);
    report.record(lap.value == formula[k_star], || {
        json!({"lap": lap.value.to_string(), "no_gap": formula[k_star].to_string(), "k_exact": k_star})
    });
    Ok(report)
}

/// Check `Δsbar`, `Δs` and the `F(π_k)` increments against a built matrix.
pub fn verify_sum_identities(p: &TrickMatrix) -> Result<VerificationReport> {
    let n = p.n();
    let mut report = VerificationReport::new("diagonal-differences", n);
    let sums = diagonal_sums(p);
    for k in 1..n {
        let below = &sums.below[k] - &sums.below[k - 1];
        let above = &sums.above[k] - &sums.above[k - 1];
        let (ds_bar, ds) = (delta_sbar(n, k)?, delta_s(n, k)?);
        report.record(below == ds_bar && above == ds, || json!({"k": k}));
    }
    for k in 1..=n / 2 {
        let step = objective(p, &no_gap_strategy(n, k)?)? - objective(p, &no_gap_strategy(n, k - 1)?)?;
        let expected = delta_sbar(n, k)? + amd_entry(n, k)?;
        report.record(step == expected, || json!({"k": k, "increment": step.to_string()}));
    }
    Ok(report)
}

/// `C_ij = 2(p_{i+1,j} - p_ij) + p_{i,N+1-i} - p_{i+1,N-i}`, the change in `F`
/// from moving a thrown trick below the main diagonal.
pub fn c_ij(p: &TrickMatrix, i: usize, j: usize) -> Result<BigInt> {
    let n = p.n();
    if !(j >= 1 && j < i && i < n) {
        return Err(domain(format!("C_ij needs 1 <= j < i <= N-1 (N={n}, i={i}, j={j})")));
    }
    Ok((p.get(i + 1, j) - p.get(i, j)) * 2u32 + p.get(i, n + 1 - i) - p.get(i + 1, n - i))
}

/// `D_ij = j C(N,j) / ((i+j) C(2N,i+j) C(N,i))`.
pub fn d_ij(n: usize, i: usize, j: usize) -> Result<BigRational> {
    if !(j >= 1 && j < i && i < n) {
        return Err(domain(format!("D_ij needs 1 <= j < i <= N-1 (N={n}, i={i}, j={j})")));
    }
    let (nu, two_n) = (n as u64, 2 * n as u64);
    let num = binomial(nu, j as i64) * j;
    let den = binomial(two_n, (i + j) as i64) * binomial(nu, i as i64) * (i + j);
    Ok(BigRational::new(num, den))
}

/// `[2 C(2N,N) D_ij - 1] C(N,i)^2`, which equals `C_ij`.
pub fn c_ij_bracket(n: usize, i: usize, j: usize) -> Result<BigRational> {
    let c = BigRational::from_integer(binomial(2 * n as u64, n as i64));
    let ni = BigRational::from_integer(binomial(n as u64, i as i64));
    Ok((c * d_ij(n, i, j)? * BigInt::from(2) - BigRational::one()) * &ni * &ni)
}

/// Result of testing `D_ij > D_{i+1,j+1}` over a region of `(i, j)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DScan {
    pub n: usize,
    pub checked: u64,
    /// Cells where the strict decrease fails.
    pub exceptions: Vec<(usize, usize)>,
    /// The exact ratio agreed with the sign of its polynomial form everywhere.
    pub polynomial_agrees: bool,
}

/// Test `D_ij > D_{i+1,j+1}` for `N/4 < i < N/2`, `1 <= j < i` and
/// `i - j < 2 sqrt(N ln N)`. Each verdict is also compared with the sign of
/// `j(2N-s)(2N-s-1)(N-i) - s(s+1)(i+1)(N-j)`, `s = i+j`, which is
/// `D_ij / D_{i+1,j+1} - 1` with its positive denominator cleared.
pub fn d_monotonicity_scan(n: usize) -> Result<DScan> {
    need_three(n)?;
    let mut scan = DScan { n, checked: 0, exceptions: Vec::new(), polynomial_agrees: true };
    for i in (n / 4 + 1)..n {
        if 2 * i >= n {
            break;
        }
        for j in 1..i {
            let gap = i - j;
            // gap < 2 sqrt(N ln N)  <=>  e^{gap^2 / (4N)} < N
            let q = ratio(BigInt::from(gap * gap), BigInt::from(4 * n));
            if cmp_times_exp(&BigInt::one(), &q, &BigInt::from(n))? != Ordering::Less {
                continue;
            }
            scan.checked += 1;
            let decreasing = d_ij(n, i, j)? > d_ij(n, i + 1, j + 1)?;
            if !decreasing {
                scan.exceptions.push((i, j));
            }
            let s = i + j;
            let lhs = BigInt::from(j) * (2 * n - s) * (2 * n - s - 1) * (n - i);
            let rhs = BigInt::from(s) * (s + 1) * (i + 1) * (n - j);
            if (lhs > rhs) != decreasing {
                scan.polynomial_agrees = false;
            }
        }
    }
    Ok(scan)
}

/// Exponent used for the one-sided tail bound on `C(2N, N-k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TailExponent {
    /// `e^{-k^2/N}`
    OverN,
    /// `e^{-k^2/(N+k)}`
    OverNPlusK,
}

impl TailExponent {
    pub fn name(self) -> &'static str {
        match self {
            TailExponent::OverN => "over-n",
            TailExponent::OverNPlusK => "over-n-plus-k",
        }
    }

    fn exponent(self, n: usize, k: usize) -> BigRational {
        let den = match self {
            TailExponent::OverN => n,
            TailExponent::OverNPlusK => n + k,
        };
        ratio(BigInt::from(k * k), BigInt::from(den))
    }
}

impl std::str::FromStr for TailExponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "over-n" => Ok(TailExponent::OverN),
            "over-n-plus-k" => Ok(TailExponent::OverNPlusK),
            other => Err(Error::Parse(format!("unknown exponent variant `{other}`"))),
        }
    }
}

/// `C(2N, N-k) < e^{-x} C(2N, N)` with `x` chosen by `mode`, decided exactly.
pub fn tail_bound_holds(n: usize, k: usize, mode: TailExponent) -> Result<bool> {
    let two_n = 2 * n as u64;
    let lhs = binomial(two_n, (n - k) as i64);
    let c = binomial(two_n, n as i64);
    Ok(cmp_times_exp(&lhs, &mode.exponent(n, k), &c)? == Ordering::Less)
}

/// One `(N, k)` cell of a tail-bound scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionCell {
    pub n: usize,
    pub k: usize,
    pub holds: bool,
}

/// The tail bound evaluated on `3 <= k <= N/2 - 1` for a range of `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaRegionScan {
    pub mode: TailExponent,
    pub n_range: RangeInclusive<usize>,
    pub cells: Vec<RegionCell>,
    pub exceptions: Vec<(usize, usize)>,
}

impl LemmaRegionScan {
    pub fn holds(&self, n: usize, k: usize) -> Option<bool> {
        self.cells.iter().find(|c| c.n == n && c.k == k).map(|c| c.holds)
    }

    /// `n,k,holds` with one row per cell.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,k,holds\n");
        for c in &self.cells {
            out.push_str(&format!("{},{},{}\n", c.n, c.k, c.holds));
        }
        out
    }

    /// Parse the format written by [`LemmaRegionScan::to_csv`].
    pub fn cells_from_csv(text: &str) -> Result<Vec<RegionCell>> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        if lines.next().map(str::trim) != Some("n,k,holds") {
            return Err(Error::Parse("expected header `n,k,holds`".into()));
        }
        lines
            .map(|line| {
                let f: Vec<&str> = line.trim().split(',').collect();
                let bad = || Error::Parse(format!("bad row `{line}`"));
                if f.len() != 3 {
                    return Err(bad());
                }
                Ok(RegionCell {
                    n: f[0].parse().map_err(|_| bad())?,
                    k: f[1].parse().map_err(|_| bad())?,
                    holds: f[2].parse().map_err(|_| bad())?,
                })
            })
            .collect()
    }
}

pub fn tail_bound_scan(n_range: RangeInclusive<usize>, mode: TailExponent) -> Result<LemmaRegionScan> {
    let pairs: Vec<(usize, usize)> = n_range.clone().flat_map(|n| (3..n / 2).map(move |k| (n, k))).collect();
    let cells = pairs
        .into_par_iter()
        .map(|(n, k)| Ok(RegionCell { n, k, holds: tail_bound_holds(n, k, mode)? }))
        .collect::<Result<Vec<_>>>()?;
    let exceptions = cells.iter().filter(|c| !c.holds).map(|c| (c.n, c.k)).collect();
    Ok(LemmaRegionScan { mode, n_range, cells, exceptions })
}

/// Outcome of the lower bound on `F(π_k)` with `k = ⌊sqrt(N ln N / 2)⌋`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Pi0Check {
    pub n: usize,
    pub k: usize,
    pub objective: String,
    pub holds: bool,
    /// `F / ((N-k) C(2N,N)) - (1 - e^{-(k-1)^2/N})`, approximately.
    pub slack: f64,
}

/// `F(π_k) >= (N-k) C(2N,N) (1 - e^{-(k-1)^2/N})` for `k = ⌊sqrt(N ln N / 2)⌋`,
/// with `F` taken from the built matrix.
pub fn pi0_bound_check(n: usize) -> Result<Pi0Check> {
    if n < 30 {
        return Err(domain(format!("the bound is stated for N >= 30, got {n}")));
    }
    let k = floor_sqrt_half_n_ln_n(n)?;
    let p = TrickMatrix::stern(n)?;
    let f = objective(&p, &no_gap_strategy(n, k)?)?;
    let a = p.scale() * (n - k);
    // F >= A (1 - e^{-x})  <=>  (A - F) e^{x} <= A
    let x = ratio(BigInt::from((k - 1) * (k - 1)), BigInt::from(n));
    let holds = cmp_times_exp(&(&a - &f), &x, &a)? != Ordering::Greater;
    let e_minus = exp_interval(&-x.clone(), 64).approx();
    let share = BigRational::new(f.clone(), a).to_f64().unwrap_or(f64::NAN);
    Ok(Pi0Check { n, k, objective: f.to_string(), holds, slack: share - (1.0 - e_minus) })
}
