//! The engine against its independent references: set-valued tableaux,
//! the moment graph, subword sums and the P¹ pairing solve.

use std::sync::Arc;

use qk_comin::gkm::{Engine, Orientation, Torus};
use qk_comin::oracles::{givental_p1_product, lr_constants_setvalued, subword_restriction_check, MomentGraph};
use qk_comin::quantum::QuantumK;
use qk_comin::weyl::{FlagShape, Partition, Permutation};

fn main() -> qk_comin::Result<()> {
    // degree-0 constants against tableaux
    let (m, n) = (2, 5);
    let qk = QuantumK::new(Arc::new(Engine::new(Torus::NonEquivariant)), m, n)?;
    let mut pairs = 0;
    for u in qk.indices() {
        for v in qk.indices() {
            let t = qk.structure_constants(&u, &v, Orientation::Opposite)?.specialized();
            let ours: std::collections::BTreeMap<Partition, _> = t
                .entries
                .iter()
                .filter(|e| e.1 == 0)
                .map(|(w, _, c)| (qk.partition_of(w).unwrap(), c.specialize_ones()))
                .collect();
            assert_eq!(ours, lr_constants_setvalued(&qk.partition_of(&u)?, &qk.partition_of(&v)?, m, n));
            pairs += 1;
        }
    }
    println!("Gr({m},{n}): {pairs} classical sectors agree with set-valued tableaux");

    // neighborhoods against the moment graph
    let graph = MomentGraph::new(m, n);
    for w in qk.indices() {
        for d in 0..=qk.diameter() {
            let lambda = qk.partition_of(&w)?;
            assert_eq!(graph.neighborhood(&lambda, d), Some(qk.partition_of(&qk.curve_neighborhood_index(&w, d)?)?));
        }
    }
    println!("Gr({m},{n}): curve neighborhoods agree with the moment graph");

    // restriction values against subword sums
    let engine = Engine::new(Torus::Equivariant);
    let fl = FlagShape::full_flag(3);
    let space = engine.space(&fl);
    let table = engine.table(&fl, Orientation::Opposite)?;
    for (i, w) in space.points().iter().enumerate() {
        for (j, v) in space.points().iter().enumerate() {
            assert_eq!(&subword_restriction_check(&fl, w, v)?, table.get(i, j));
        }
    }
    println!("Fl(3): restriction table agrees with subword sums");

    let p1 = QuantumK::new(Arc::new(Engine::new(Torus::Equivariant)), 1, 2)?;
    let s = p1.index_of(&"1".parse()?)?;
    assert_eq!(*p1.star(&s, &Permutation::identity(2))?, givental_p1_product()?);
    println!("P¹: O^s ⋆ O_id = q·1, as the pairing solve gives");
    Ok(())
}
