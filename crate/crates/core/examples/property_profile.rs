//! Full property profile with the implication audit.

use finring::dsl::ring_from_str;
use finring::poly::AnnPairBudget;
use finring::properties::property_profile;
use finring::Limits;

fn main() -> Result<(), String> {
    let text = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "Triv(Z(4))".into());
    let r = ring_from_str(&text, &Limits::default())?;
    let p = property_profile(&r, 2, AnnPairBudget::default());
    println!("{}", p.ring);
    for rep in &p.reports {
        println!("  {:<32} {}", rep.property.name(), rep.verdict);
    }
    println!("{}", serde_json::to_string(&p.audit).unwrap());
    Ok(())
}
