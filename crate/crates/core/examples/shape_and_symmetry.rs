//! Candidate strategies: the shape filter, reflection in the anti-main
//! diagonal, and the cell-swapping identity at N = 7.

use oneround::strategy::{enumerate_shape_candidates, verify_splice_identity, DEFAULT_SHAPE_CAP};
use oneround::{objective, strategy_from_string, Strategy, ThrowString, TrickMatrix};

fn main() -> oneround::Result<()> {
    let n = 6;
    let p = TrickMatrix::stern(n)?;
    let candidates = enumerate_shape_candidates(n, DEFAULT_SHAPE_CAP)?;
    println!("{} shape candidates for N = {n}", candidates.len());
    for s in &candidates {
        let tag = if s.is_symmetric() { "symmetric" } else { "" };
        println!("  {s:<16} F = {:>4} {tag}", objective(&p, s)?);
    }

    println!("\nthrow strings for N = {n}:");
    for text in ["000", "100", "110", "111", "101", "010"] {
        let t = ThrowString::parse(n, text)?;
        let s = strategy_from_string(&t);
        println!("  {text} -> {s:<16} F = {:>4} gap-free: {}", objective(&p, &s)?, t.is_gap_free());
    }

    let p7 = TrickMatrix::stern(7)?;
    let pi: Strategy = "[7,1,6,5,2,3,4]".parse()?;
    let pi_prime = pi.reflect();
    let sigma: Strategy = "[7,6,5,4,2,3,1]".parse()?;
    let taus: [Strategy; 3] = ["[7,6,5,1,2,3,4]".parse()?, "[7,1,4,5,2,3,6]".parse()?, "[7,5,6,4,2,3,1]".parse()?];
    for s in [&pi, &pi_prime, &sigma].into_iter().chain(&taus) {
        println!("{s:<16} F = {}", objective(&p7, s)?);
    }
    let same = verify_splice_identity(&p7, [&pi, &pi_prime, &sigma], [&taus[0], &taus[1], &taus[2]])?;
    println!("same cells on both sides: {same}");
    Ok(())
}
