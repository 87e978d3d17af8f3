//! Schubert classes as fixed-point data: restriction tables, basis
//! expansion, pullback and pushforward.
//!
//! ```text
//! cargo run --release --example localization
//! ```

use qk_comin::gkm::{Engine, Orientation, Torus};
use qk_comin::weyl::{FlagShape, Permutation};

fn main() -> qk_comin::Result<()> {
    let engine = Engine::new(Torus::Equivariant);
    let p2 = FlagShape::grassmannian(1, 3)?;
    let space = engine.space(&p2);
    let table = engine.table(&p2, Orientation::Opposite)?;
    println!("opposite Schubert classes on {p2}, restricted to fixed points:");
    for (i, w) in space.points().iter().enumerate() {
        let row: Vec<String> = (0..space.len()).map(|j| table.get(i, j).to_string()).collect();
        println!("  O^{w}: [{}]", row.join(", "));
    }

    // O_w in the opposite basis, and its Euler characteristic
    for w in space.points() {
        let e = engine.plain_to_opposite(&p2, w)?;
        let terms: Vec<String> = e.coeffs().iter().map(|(v, c)| format!("({c})·O^{v}")).collect();
        println!("  O_{w} = {}   χ = {}", terms.join(" + "), e.coefficient_sum());
    }

    // the product of two classes, expanded back
    let w = Permutation::from_one_line(vec![2, 1, 3])?;
    let x = engine.schubert_class(&p2, &w, Orientation::Opposite)?;
    let sq = engine.expand(&x.multiply(&x)?, Orientation::Opposite)?;
    println!("O^{w} · O^{w} = {:?}", sq.coeffs());

    // pull back to the full flag variety and push forward again
    let fl = FlagShape::full_flag(3);
    let up = engine.pullback(&x, &fl)?;
    engine.check_gkm(&up)?;
    let down = engine.pushforward(&up, &p2)?;
    println!("pushforward of the pullback returns the class: {}", down == x);
    Ok(())
}
