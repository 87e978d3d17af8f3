//! Writes a JSON Lines structure table and reads it back.
//!
//! ```text
//! cargo run --release --example table_export -- 2 4 /tmp/gr24.jsonl
//! ```

use std::sync::Arc;

use qk_comin::gkm::{Engine, Orientation, Torus};
use qk_comin::quantum::QuantumK;
use qk_comin::table::{read_jsonl, to_json};

fn main() -> qk_comin::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let m = args.first().and_then(|s| s.parse().ok()).unwrap_or(2);
    let n = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    let path = args.get(2).cloned().unwrap_or_else(|| std::env::temp_dir().join("qk-table.jsonl").display().to_string());

    let qk = QuantumK::new(Arc::new(Engine::new(Torus::Equivariant)), m, n)?;
    let mut text = String::new();
    for u in qk.indices() {
        for v in qk.indices() {
            text += &to_json(&qk.structure_constants(&u, &v, Orientation::Opposite)?, true)?;
            text.push('\n');
        }
    }
    std::fs::write(&path, &text)?;
    println!("wrote {} lines to {path}", text.lines().count());

    let rows = read_jsonl(&std::fs::read_to_string(&path)?)?;
    let consistent = rows.iter().filter(|r| r.sum_check_consistent() && r.sum_check().is_one()).count();
    println!("read back {} rows, {consistent} with sum_check = 1", rows.len());
    if let Some(r) = rows.iter().max_by_key(|r| r.table.entries.len()) {
        println!("largest: {}", to_json(&r.table, true)?);
    }
    Ok(())
}
