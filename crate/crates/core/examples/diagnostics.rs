//! Spots where a printed closed form disagrees with the matrix, and scans
//! that report exceptions instead of asserting.

use oneround::matrix::{unit_square_closed_form, unit_square_closed_form_printed, unit_square_defect};
use oneround::optimal::{d_monotonicity_scan, kk_star_divergence_scan};
use oneround::TrickMatrix;

fn main() -> oneround::Result<()> {
    let n = 8;
    let p = TrickMatrix::stern(n)?;
    let (mut printed_bad, mut corrected_bad, mut cells) = (0, 0, 0);
    for i in 1..n {
        for j in 1..n {
            let defect = unit_square_defect(&p, i, j);
            let (Some(fixed), Some(printed)) = (unit_square_closed_form(n, i, j), unit_square_closed_form_printed(n, i, j)) else {
                continue;
            };
            cells += 1;
            corrected_bad += usize::from(fixed != defect);
            printed_bad += usize::from(printed != defect);
        }
    }
    println!("unit squares at N={n}: {cells} cells, denominator (i+j) misses {corrected_bad}, (j+1) misses {printed_bad}");

    for n in [40, 100, 200] {
        let scan = d_monotonicity_scan(n)?;
        println!(
            "N={n}: D_ij > D_(i+1)(j+1) checked at {} cells, {} exceptions, polynomial agrees: {}",
            scan.checked,
            scan.exceptions.len(),
            scan.polynomial_agrees
        );
    }
    println!("N <= 500 with k != k*: {:?}", kk_star_divergence_scan(500)?);
    Ok(())
}
