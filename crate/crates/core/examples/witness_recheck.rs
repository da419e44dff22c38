//! A witness survives a JSON round trip and re-checks against its ring.

use finring::dsl::ring_from_str;
use finring::poly::AnnPairBudget;
use finring::properties::{check, Property};
use finring::witness::Witness;
use finring::Limits;

fn main() -> Result<(), String> {
    let r = ring_from_str("Triv(Z(8))", &Limits::default())?;
    let rep = check(&r, Property::LinearArmendariz, 1, AnnPairBudget::default());
    let w = rep.witness.ok_or("expected a witness")?;
    let json = serde_json::to_string_pretty(&w).map_err(|e| e.to_string())?;
    println!("{json}");
    let back: Witness = serde_json::from_str(&json).map_err(|e| e.to_string())?;
    println!("re-check: {:?}", back.recheck(&r));
    Ok(())
}
