//! Runs the three theorem checks on one Grassmannian.
//!
//! ```text
//! cargo run --release --example verify_theorems -- 2 5
//! cargo run --release --example verify_theorems -- 2 4 equivariant
//! ```

use std::sync::Arc;
use std::time::Instant;

use qk_comin::gkm::{Engine, Torus};
use qk_comin::quantum::QuantumK;

fn main() -> qk_comin::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let m = args.first().and_then(|s| s.parse().ok()).unwrap_or(2);
    let n = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    let torus = match args.get(2).map(String::as_str) {
        Some("equivariant") => Torus::Equivariant,
        _ => Torus::NonEquivariant,
    };
    let qk = QuantumK::new(Arc::new(Engine::new(torus)), m, n)?;
    println!("Gr({m},{n}) {torus:?}, shift rule {}", if qk.shift_rule_enabled() { "on" } else { "off" });
    let start = Instant::now();
    for report in [qk.verify_theorem1()?, qk.verify_theorem2()?, qk.verify_theorem3(true)?] {
        let verdict = if report.passed() { "PASS" } else { "FAIL" };
        println!("theorem {}: {verdict} pairs={} ({:.1?})", report.theorem, report.pairs, start.elapsed());
        for v in &report.violations {
            println!("  {v}");
        }
    }
    Ok(())
}
