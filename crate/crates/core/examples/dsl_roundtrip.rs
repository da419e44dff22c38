//! Parses ring expressions, pretty-prints them and reports errors with positions.

use finring::dsl::{elaborate, parse, pretty};

fn main() {
    for text in [
        "Tnk( Z(4) ,3,1)",
        "Prod(Z(2), Triv(Z(3)))",
        "Mat(Z(2), 2",
        "Tnk(Z(2), 3, 3)",
    ] {
        match parse(text) {
            Ok(e) => {
                let back = pretty(&e);
                match elaborate(&e) {
                    Ok(r) => println!("{text:<26} -> {back:<26} order {}", r.order()),
                    Err(err) => println!("{text:<26} -> {back:<26} {err}"),
                }
            }
            Err(err) => println!("{text:<26} parse error {err}"),
        }
    }
}
