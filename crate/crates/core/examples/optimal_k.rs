//! How many tricks should player 2 throw away?
//!
//! Prints `k(N)`, `k*(N)` and the square-root bounds, then the whole
//! `F(π_k)` curve for one `N` so the single peak is visible.

use oneround::optimal::{k_report, no_gap_values};
use oneround::{binomial, BigRational};
use num_traits::ToPrimitive;

fn main() -> oneround::Result<()> {
    println!("{:>5} {:>3} {:>3} {:>8} {:>8}  flag", "N", "k", "k*", "lower", "upper");
    for n in (3..=20).chain([50, 90, 91, 200, 500]) {
        let r = k_report(n)?;
        let flag = r.bound_violation.map(|s| format!("{s:?}")).unwrap_or_default();
        println!("{:>5} {:>3} {:>3} {:>8.3} {:>8.3}  {flag}", n, r.k_approx, r.k_exact, r.lower_bound, r.upper_bound);
    }

    let n = 50;
    let scale = binomial(2 * n as u64, n as i64);
    println!("\nexpected tricks of π_k at N = {n}:");
    for (k, f) in no_gap_values(n)?.iter().enumerate().take(16) {
        let mean = BigRational::new(f.clone(), scale.clone()).to_f64().unwrap_or(f64::NAN);
        println!("  k = {k:>2}  {mean:.5}");
    }
    Ok(())
}
