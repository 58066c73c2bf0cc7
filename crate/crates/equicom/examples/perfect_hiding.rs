//! Perfect hiding, checked exhaustively: in a group small enough to
//! enumerate, the commitment distribution is the same for every value.
//!
//! ```bash
//! cargo run -p equicom --example perfect_hiding
//! ```

use equicom::commitment::{hiding_distribution, setup_honest};
use equicom::group::fixed_test_params;
use num_bigint::BigUint;

fn main() {
    let group = fixed_test_params();
    let key = setup_honest(&group, b"perfect-hiding example");
    println!(
        "toy group p={}, q={}, blinding base B={}",
        group.p(),
        group.q(),
        key.blinding_base()
    );

    // For each value x, the multiset { g^x · B^r : r in Z_q }.
    let sorted = |x: u64| -> Vec<BigUint> {
        let mut values: Vec<BigUint> = hiding_distribution(&key, &group.scalar_from_u64(x))
            .expect("q = 11 is enumerable")
            .into_iter()
            .map(|e| e.value().clone())
            .collect();
        values.sort();
        values
    };

    let reference = sorted(0);
    println!("distribution of Com(0): {reference:?}");

    let mut identical = 0;
    for x in 0..11u64 {
        let dist = sorted(x);
        assert_eq!(dist, reference);
        identical += 1;
    }
    println!("identical distributions: {identical}/11 values");
    println!("a commitment reveals nothing about x, information-theoretically");
}
