//! For odd N the strategy that throws N/2 tricks is the best way to win a
//! majority, checked deal by deal.

use oneround::oracles::{enumerate_deals, max_tricks_any_matching, tricks_won, verify_majority_property, DEFAULT_MAJORITY_CAP};
use oneround::majority_strategy;

fn main() -> oneround::Result<()> {
    for n in (3..=DEFAULT_MAJORITY_CAP).step_by(2) {
        let s = majority_strategy(n)?;
        let need = n / 2 + 1;
        let (mut possible, mut won) = (0u64, 0u64);
        for deal in enumerate_deals(n, DEFAULT_MAJORITY_CAP)? {
            possible += u64::from(max_tricks_any_matching(&deal) >= need);
            won += u64::from(tricks_won(&deal, &s)? >= need);
        }
        println!("N={n} {s}: majority possible in {possible} deals, won in {won}");
        println!("  {}", verify_majority_property(n, DEFAULT_MAJORITY_CAP)?.line());
    }
    Ok(())
}
