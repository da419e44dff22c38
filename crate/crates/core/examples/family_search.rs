//! Sweeps T_n^k over Z(4) and Z(2) for instances that are not central linear
//! Armendariz.

use finring::harness::{search, Family, RunConfig, SearchSpec, Session};
use finring::properties::Property;

fn main() -> Result<(), String> {
    let s = Session::new(RunConfig::default());
    for base in ["Z(4)", "Z(2)"] {
        let spec = SearchSpec {
            family: Family::Tnk,
            bases: vec![base.into()],
            n: vec![3, 4],
            k: Some("1..n-2".parse()?),
            property: Property::CentralLinearArmendariz,
            degree: 2,
            target: false,
            stop_after: None,
        };
        let out = search(&s, &spec)?;
        for inst in &out.instances {
            println!("{:<20} hit = {}", inst.ring, inst.is_hit());
        }
        println!("{base}: {} hits", out.hits);
    }
    Ok(())
}
