//! The other side of the trapdoor coin: two openings of one commitment to
//! different values leak the discrete log of B.
//!
//! ```bash
//! cargo run -p equicom --example double_opening_extraction
//! ```

use equicom::commitment::{commit_with_randomness, extract, setup_with_trapdoor, verify, Opening};
use equicom::group::fixed_test_params;

fn main() {
    let group = fixed_test_params();
    // A key whose trapdoor we know is 3, so we can check the extraction.
    let (key, trapdoor) = setup_with_trapdoor(&group, group.scalar_from_u64(3)).unwrap();
    println!("B = g^3 = {}", key.blinding_base());

    // Two openings of the same Z = 16: (5, 7) and (2, 8).
    let first = Opening::new(group.scalar_from_u64(5), group.scalar_from_u64(7));
    let second = Opening::new(group.scalar_from_u64(2), group.scalar_from_u64(8));
    let z = commit_with_randomness(&key, first.value(), first.blinding());
    assert!(verify(&key, &z, &first));
    assert!(verify(&key, &z, &second));
    println!(
        "Z = {} opens as ({}, {}) and as ({}, {})",
        z.element(),
        first.value(),
        first.blinding(),
        second.value(),
        second.blinding()
    );

    // b = (x - x') · (r' - r)^{-1} = (5 - 2) · (8 - 7)^{-1} = 3.
    let recovered = extract(&first, &second).unwrap();
    println!("extracted b = {recovered}");
    assert_eq!(recovered, *trapdoor.dlog());
    assert_eq!(group.generator().pow(&recovered), *key.blinding_base());
    println!("g^b = B confirmed: whoever double-opens has solved the discrete log");
}
