//! Three routes to the optimum: all N! permutations, the Hungarian
//! algorithm, and the closed-form no-gap strategy.

use oneround::optimal::{k_exact, no_gap_values};
use oneround::oracles::{exhaustive_optimal_pruned, DEFAULT_EXHAUSTIVE_CAP};
use oneround::{exhaustive_optimal, lap_optimal, TrickMatrix};

fn main() -> oneround::Result<()> {
    // At N = 2 playing in order and swapping both win one trick on average.
    let two = exhaustive_optimal(&TrickMatrix::stern(2)?, DEFAULT_EXHAUSTIVE_CAP)?;
    println!("N=2 value={} tie={} argmax={:?}", two.value, two.tie, two.argmax.iter().map(ToString::to_string).collect::<Vec<_>>());

    for n in 3..=DEFAULT_EXHAUSTIVE_CAP {
        let p = TrickMatrix::stern(n)?;
        let full = exhaustive_optimal(&p, DEFAULT_EXHAUSTIVE_CAP)?;
        let pruned = exhaustive_optimal_pruned(&p, DEFAULT_EXHAUSTIVE_CAP)?;
        let lap = lap_optimal(&p);
        let formula = &no_gap_values(n)?[k_exact(n)?];
        let best: Vec<String> = full.argmax.iter().map(ToString::to_string).collect();
        println!(
            "N={n} exhaustive={} pruned={} lap={} formula={formula} tie={} argmax={}",
            full.value,
            pruned.value,
            lap.value,
            lap.tie,
            best.join(" ")
        );
    }

    // Beyond the exhaustive cap only the assignment solver remains.
    for n in [20, 40, 60] {
        let lap = lap_optimal(&TrickMatrix::stern(n)?);
        let k = k_exact(n)?;
        println!("N={n} lap equals F(π_{k}): {}", lap.value == no_gap_values(n)?[k]);
    }
    Ok(())
}
