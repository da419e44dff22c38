//! Center, idempotents, nilpotents and annihilators of the 2x2 matrices over Z(2).

use finring::dsl::ring_from_str;
use finring::Limits;

fn main() -> Result<(), String> {
    let r = ring_from_str("Mat(Z(2), 2)", &Limits::default())?;
    let show = |idx: &[u32]| -> String {
        idx.iter()
            .map(|&i| r.decode(i).to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    println!("center:      {}", show(r.center().members()));
    println!("idempotents: {}", show(r.idempotents().members()));
    println!("nilpotents:  {}", show(r.nilpotents().members()));
    let e11 = r
        .elem(&finring::Value::int_matrix(&[[1, 0], [0, 0]]))
        .map_err(|e| e.to_string())?;
    println!("rAnn(e11):   {}", show(r.right_annihilator(e11).members()));
    if let Some(x) = r.first_noncommuting(e11.index()) {
        println!("e11 does not commute with {}", r.decode(x));
    }
    let ideal = r.ideal_closure(&[e11.index()]);
    println!("ideal generated by e11 has {} elements", ideal.len());
    Ok(())
}
