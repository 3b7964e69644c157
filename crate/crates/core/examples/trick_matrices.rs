//! Build the trick matrix four independent ways and look at its structure.
//!
//! Run with `cargo run --example trick_matrices -- 6`.

use oneround::matrix::{diagonal_sums, diagonal_sums_closed_form, DEFAULT_BRUTE_CAP};
use oneround::{verify_structural_lemmas, BuildMethod, TrickMatrix};

fn main() -> oneround::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(5);

    let stern = TrickMatrix::stern(n)?;
    println!("P^{n}, out of C({}, {n}) = {} deals:", 2 * n, stern.scale());
    print!("{stern}");

    for method in BuildMethod::ALL {
        match method.build(n, DEFAULT_BRUTE_CAP) {
            Ok(p) => println!("{:>9}: {}", method.name(), if p == stern { "same" } else { "DIFFERENT" }),
            Err(e) => println!("{:>9}: skipped ({e})", method.name()),
        }
    }

    // One hook-sum step grows P^N into P^{N+1}.
    let grown = stern.hooksum_step();
    println!("hook-sum step gives P^{}: {}", n + 1, grown == TrickMatrix::stern(n + 1)?);

    let sums = diagonal_sums(&stern);
    println!("sums above the main diagonal: {:?}", sums.above.iter().map(ToString::to_string).collect::<Vec<_>>());
    println!("closed form agrees: {}", sums == diagonal_sums_closed_form(n));

    for r in verify_structural_lemmas(&stern) {
        println!("{}", r.line());
    }
    Ok(())
}
