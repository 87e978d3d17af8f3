//! Quantum K-theory products and their structure constants.
//!
//! ```text
//! cargo run --release --example quantum_product -- 2 4 1 1
//! ```

use std::sync::Arc;

use qk_comin::gkm::{Engine, Orientation, Torus};
use qk_comin::quantum::{QKElement, QuantumK};
use qk_comin::weyl::Partition;

fn main() -> qk_comin::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let m = args.first().and_then(|s| s.parse().ok()).unwrap_or(2);
    let n = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    let lu: Partition = args.get(2).map_or("1", String::as_str).parse()?;
    let lv: Partition = args.get(3).map_or("1", String::as_str).parse()?;

    for torus in [Torus::NonEquivariant, Torus::Equivariant] {
        let qk = QuantumK::new(Arc::new(Engine::new(torus)), m, n)?;
        let (u, v) = (qk.index_of(&lu)?, qk.index_of(&lv)?);
        let mut table = qk.structure_constants(&u, &v, Orientation::Opposite)?;
        if !qk.engine().is_equivariant() {
            table = table.specialized();
        }
        println!("{torus:?}: O^({lu}) ⋆ O^({lv}) on Gr({m},{n})");
        for (w, d, c) in &table.entries {
            println!("  q^{d} O^({})  {c}", qk.partition_of(w)?);
        }
        println!("  sum of coefficients: {}", table.sum());

        // the mixed product O^u ⋆ O_v has Euler characteristic q^dist
        let mixed = qk.star(&u, &v)?;
        let chi: Vec<String> = mixed.chi_q().iter().map(|c| c.to_string()).collect();
        println!("  χ(O^u ⋆ O_v) = [{}] (q^0 first), dist = {}", chi.join(", "), qk.dist(&u, &v)?);
    }

    // products of sums, bilinearly
    let qk = QuantumK::new(Arc::new(Engine::new(Torus::NonEquivariant)), m, n)?;
    let one = qk_comin::laurent::Laurent::one(qk.nvars());
    let a = QKElement::term(qk.index_of(&lu)?, 0, one.clone());
    let cube = qk.product(&qk.product(&a, &a)?, &a)?;
    println!("(O^({lu}))^3:");
    for (d, x) in cube.terms() {
        for (w, c) in x.coeffs().iter().filter(|(_, c)| c.specialize_ones() != 0.into()) {
            println!("  q^{d} O^({})  {}", qk.partition_of(w)?, c.specialize_ones());
        }
    }
    Ok(())
}
