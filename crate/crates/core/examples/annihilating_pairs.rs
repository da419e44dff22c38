//! Enumerates pairs of linear polynomials with f(x)g(x) = 0 and compares the
//! pruned count with the naive one.

use finring::constructions::make_trivial_extension;
use finring::constructions::make_zn;
use finring::poly::{annihilating_linear_pairs, annihilating_pairs_degree, AnnPairBudget};

fn main() -> finring::error::Result<()> {
    let r = make_trivial_extension(&make_zn(4)?)?;
    let budget = AnnPairBudget::default();
    let pairs = annihilating_linear_pairs(&r, budget)?;
    let n = r.order() as u32;
    let mut naive = 0;
    for a0 in 0..n {
        for a1 in 0..n {
            for b0 in 0..n {
                for b1 in 0..n {
                    let c1 = r.add_idx(r.mul_idx(a0, b1), r.mul_idx(a1, b0));
                    if r.mul_idx(a0, b0) == 0 && c1 == 0 && r.mul_idx(a1, b1) == 0 {
                        naive += 1;
                    }
                }
            }
        }
    }
    println!(
        "{}: {} linear annihilating pairs (naive loop: {naive})",
        r.label(),
        pairs.len()
    );
    let quad = annihilating_pairs_degree(&make_zn(4)?, 2, budget)?;
    println!("Z(4): {} annihilating pairs of degree 2", quad.len());
    Ok(())
}
