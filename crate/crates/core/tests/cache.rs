//! The on-disk table cache: round trips, corruption, torus separation.

use std::sync::Arc;

use qk_comin::cache::DiskCache;
use qk_comin::gkm::{Engine, Orientation, Torus};
use qk_comin::quantum::QuantumK;
use qk_comin::weyl::FlagShape;

fn tables(engine: &Engine, shape: &FlagShape) -> Vec<Vec<String>> {
    [Orientation::Opposite, Orientation::Plain]
        .into_iter()
        .flat_map(|o| engine.table(shape, o).unwrap().rows().to_vec())
        .map(|row| row.iter().map(|x| x.to_string()).collect())
        .collect()
}

#[test]
fn warm_tables_equal_cold_ones() {
    let dir = tempfile::tempdir().unwrap();
    for torus in [Torus::Equivariant, Torus::NonEquivariant] {
        for shape in [FlagShape::grassmannian(2, 4).unwrap(), FlagShape::new(&[1, 3], 4).unwrap()] {
            let cold = tables(&Engine::with_cache(torus, DiskCache::new(dir.path())), &shape);
            let warm = tables(&Engine::with_cache(torus, DiskCache::new(dir.path())), &shape);
            let fresh = tables(&Engine::new(torus), &shape);
            assert_eq!(cold, warm);
            assert_eq!(cold, fresh);
        }
    }
    // one file per (shape, orientation, torus)
    assert_eq!(DiskCache::new(dir.path()).stats().unwrap().files, 8);
}

#[test]
fn corrupted_files_are_ignored() {
    let dir = tempfile::tempdir().unwrap();
    let shape = FlagShape::grassmannian(2, 4).unwrap();
    let reference = tables(&Engine::with_cache(Torus::Equivariant, DiskCache::new(dir.path())), &shape);
    for entry in std::fs::read_dir(dir.path()).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        // flip one coefficient; the checksum no longer matches
        let last = text.trim_end().rfind(' ').unwrap();
        let tampered = format!("{}{}", &text[..=last], "7\n");
        std::fs::write(&path, tampered).unwrap();
    }
    let again = tables(&Engine::with_cache(Torus::Equivariant, DiskCache::new(dir.path())), &shape);
    assert_eq!(again, reference);
}

#[test]
fn cached_quantum_results_match() {
    let dir = tempfile::tempdir().unwrap();
    let run = |cache: Option<DiskCache>| {
        let engine = match cache {
            Some(c) => Engine::with_cache(Torus::NonEquivariant, c),
            None => Engine::new(Torus::NonEquivariant),
        };
        let qk = QuantumK::new(Arc::new(engine), 2, 5).unwrap();
        let idx = qk.indices();
        idx.iter()
            .flat_map(|u| idx.iter().map(move |v| (u.clone(), v.clone())))
            .map(|(u, v)| format!("{:?}", qk.structure_constants(&u, &v, Orientation::Opposite).unwrap().specialized()))
            .collect::<Vec<_>>()
    };
    let cold = run(Some(DiskCache::new(dir.path())));
    assert_eq!(cold, run(Some(DiskCache::new(dir.path()))));
    assert_eq!(cold, run(None));
}
