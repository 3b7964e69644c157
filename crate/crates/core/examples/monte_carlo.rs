//! Seeded simulation against the exact expectation, and the loss sweep.

use num_traits::ToPrimitive;
use oneround::optimal::k_exact;
use oneround::simulate::{loss_rows_to_csv, simulate, simulate_with_threads, sweep_loss_fraction, KRule, SimConfig};
use oneround::{binomial, no_gap_strategy, objective, BigRational, Strategy, TrickMatrix};

fn main() -> oneround::Result<()> {
    for n in [3, 5, 7, 11] {
        let p = TrickMatrix::stern(n)?;
        for (name, s) in [("optimal", no_gap_strategy(n, k_exact(n)?)?), ("identity", Strategy::identity(n))] {
            let exact = BigRational::new(objective(&p, &s)?, binomial(2 * n as u64, n as i64)).to_f64().unwrap_or(f64::NAN);
            let r = simulate(&SimConfig::new(s, 200_000, 2024)?)?;
            let z = (r.mean_tricks - exact) / r.stderr;
            println!("N={n:>2} {name:<8} simulated {:.4} ± {:.4}, exact {exact:.4} (z = {z:+.2})", r.mean_tricks, r.stderr);
        }
    }

    let cfg = SimConfig::new(no_gap_strategy(9, 2)?, 50_000, 1)?;
    println!("1 thread == 8 threads: {}", simulate_with_threads(&cfg, 1)? == simulate_with_threads(&cfg, 8)?);

    let ns: Vec<usize> = (10..=200).step_by(19).collect();
    print!("{}", loss_rows_to_csv(&sweep_loss_fraction(&ns, KRule::Exact)?));
    Ok(())
}
