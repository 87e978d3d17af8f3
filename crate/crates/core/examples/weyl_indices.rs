//! Partitions, minimal coset representatives and index transport along
//! flag projections.

use qk_comin::weyl::{
    bruhat_leq, minrep_to_partition, partition_to_minrep, schubert_image_index, schubert_preimage_index, FlagShape,
    Partition,
};

fn main() -> qk_comin::Result<()> {
    let (m, n) = (2, 5);
    let x = FlagShape::grassmannian(m, n)?;
    println!("{x}: {} Schubert indices, dimension {}", x.min_coset_reps().len(), x.dimension());
    for lambda in Partition::all_in_box(m, n - m) {
        let w = partition_to_minrep(&lambda, m, n)?;
        assert_eq!(minrep_to_partition(&w, m)?, lambda);
        println!("  ({lambda:<4}) <-> {w}  length {}", w.length());
    }

    // Fl(1,2;5) -> Gr(2,5): preimage then image returns the index
    let f = FlagShape::new(&[1, 2], n)?;
    let w = partition_to_minrep(&"2,1".parse()?, m, n)?;
    let up = schubert_preimage_index(&w, &f, &x)?;
    println!("X_{w} on {x} pulls back to X_{up} on {f}, which maps to X_{}", schubert_image_index(&up, &f, &x)?);

    let a = partition_to_minrep(&"1".parse()?, m, n)?;
    println!("({}) <= (2,1) in Bruhat order: {}", minrep_to_partition(&a, m)?, bruhat_leq(&a, &w));
    Ok(())
}
