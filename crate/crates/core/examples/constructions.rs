//! Builds one ring from each family and prints its order and a few elements.

use finring::constructions::{
    make_matrix, make_poly_mod, make_product, make_tnk, make_trivial_extension,
    make_upper_triangular, make_zn,
};
use finring::error::Result;

fn main() -> Result<()> {
    let z2 = make_zn(2)?;
    let z4 = make_zn(4)?;
    let rings = [
        make_product(&[z2.clone(), make_zn(3)?])?,
        make_matrix(&z2, 2)?,
        make_upper_triangular(&z2, 3)?,
        make_tnk(&z4, 3, 1)?,
        make_trivial_extension(&z4)?,
        make_poly_mod(&z2, 3)?,
    ];
    for r in &rings {
        let sample: Vec<String> = r
            .elements()
            .take(4)
            .map(|e| e.value().to_string())
            .collect();
        println!(
            "{:<20} order {:>4}  first elements: {}",
            r.label(),
            r.order(),
            sample.join(", ")
        );
    }
    Ok(())
}
