//! Inequalities with `e` and `π` decided exactly by interval arithmetic.

use oneround::certified::{cmp_times_exp, exp_interval, pi_interval};
use oneround::combinatorics::ratio;
use oneround::optimal::{tail_bound_scan, naive_lower_bound, pi0_bound_check, k_approx, TailExponent};

fn main() -> oneround::Result<()> {
    let e = exp_interval(&ratio(1, 1), 128);
    let pi = pi_interval(128);
    println!("e ≈ {:.15}, π ≈ {:.15}", e.approx(), pi.approx());

    // 1000000 e^{1/1000000} is just above 1000001.
    let order = cmp_times_exp(&1_000_000.into(), &ratio(1, 1_000_000), &1_000_001.into())?;
    println!("1e6 · e^(1e-6) vs 1000001: {order:?}");

    for mode in [TailExponent::OverN, TailExponent::OverNPlusK] {
        let scan = tail_bound_scan(8..=40, mode)?;
        println!("{} exponent: {} of {} cells fail", mode.name(), scan.exceptions.len(), scan.cells.len());
        println!("  (20,5) holds: {:?}  (20,8) holds: {:?}", scan.holds(20, 5), scan.holds(20, 8));
    }

    for n in [30, 60, 120, 250] {
        let c = pi0_bound_check(n)?;
        println!("N={n}: π_{} bound holds = {} (slack {:.4})", c.k, c.holds, c.slack);
    }
    for n in [3, 10, 100, 500] {
        println!("N={n}: naive bound {} <= k = {}", naive_lower_bound(n)?, k_approx(n)?);
    }
    Ok(())
}
