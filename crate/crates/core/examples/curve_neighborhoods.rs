//! Curve neighborhoods and distances, with the moment graph as a check.
//!
//! ```text
//! cargo run --release --example curve_neighborhoods -- 3 6
//! ```

use std::sync::Arc;

use qk_comin::gkm::{Engine, Torus};
use qk_comin::oracles::MomentGraph;
use qk_comin::quantum::QuantumK;

fn main() -> qk_comin::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|s| s.parse().ok()).collect();
    let (m, n) = (args.first().copied().unwrap_or(2), args.get(1).copied().unwrap_or(5));
    let qk = QuantumK::new(Arc::new(Engine::new(Torus::NonEquivariant)), m, n)?;
    let graph = MomentGraph::new(m, n);
    println!("Gr({m},{n}): diameter {} (moment graph {})", qk.diameter(), graph.diameter());
    for d in 1..=qk.diameter() {
        let (y, t) = qk.kernel_span_shapes(d);
        println!("  degree {d}: kernel-span spaces {y} <- {t}");
    }
    let point = qk_comin::weyl::Permutation::identity(n);
    for w in qk.indices() {
        let lambda = qk.partition_of(&w)?;
        let shrunk: Vec<String> = (0..=qk.diameter())
            .map(|d| Ok(qk.partition_of(&qk.curve_neighborhood_index(&w, d)?)?.to_string()))
            .collect::<qk_comin::Result<_>>()?;
        let dist = qk.dist(&w, &point)?;
        assert_eq!(dist, graph.dist(&lambda, &qk.partition_of(&point)?));
        println!("  ({lambda}): neighborhoods [{}], dist to the point {dist}", shrunk.join(" | "));
    }
    Ok(())
}
